use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::group::FiniteGroup;
use super::series::{nilpotency_class, profile_extract, Nilpotency};
use crate::abelian::AbelianPGroup;
use crate::error::{Error, Result};
use crate::kp::serialize_decimal;
use crate::shield::{baumslag_nilpotent, shield_class, ActiveProfile};

/// Structure of an explicit abelian p-group, read off from the orders of
/// `Ω_k = {x : x^{p^k} = 1}`: `log_p |Ω_k| = Σ_e n_e·min(e, k)`.
pub fn abelian_structure(group: &FiniteGroup, p: u64) -> Result<AbelianPGroup> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let mut rest = group.order();
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    if rest != 1 {
        return Err(Error::NotPGroup {
            order: group.order(),
            p,
        });
    }
    let orders: Vec<u64> = group.elements().map(|x| group.element_order(x)).collect();
    let mut log_omega = vec![0u32];
    let mut pk = 1u64;
    loop {
        pk *= p;
        let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
        let mut log = 0;
        let mut n = count;
        while n > 1 && n.is_multiple_of(p) {
            n /= p;
            log += 1;
        }
        if n != 1 {
            return Err(Error::NotPGroup {
                order: group.order(),
                p,
            });
        }
        log_omega.push(log);
        if count == group.order() {
            break;
        }
    }
    // rank_at_least[k] = number of factors with exponent >= k.
    let rank_at_least: Vec<u32> = log_omega.windows(2).map(|w| w[1] - w[0]).collect();
    let mut counts = BTreeMap::new();
    for (index, &r) in rank_at_least.iter().enumerate() {
        let above = rank_at_least.get(index + 1).copied().unwrap_or(0);
        counts.insert(index as u32 + 1, BigUint::from(r - above));
    }
    AbelianPGroup::from_counts(p, counts)
}

/// Brute-force class of `A Wr B` set against the class formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShieldCheck {
    pub active: String,
    pub passive: String,
    pub p: u64,
    pub profile: ActiveProfile,
    pub passive_structure: AbelianPGroup,
    pub oracle: Nilpotency,
    #[serde(serialize_with = "serialize_decimal")]
    pub formula: BigUint,
}

impl ShieldCheck {
    pub fn agrees(&self) -> bool {
        self.oracle.class().map(BigUint::from) == Some(self.formula.clone())
    }
}

pub fn verify_shield(active: &FiniteGroup, passive: &FiniteGroup, p: u64, size_limit: u64) -> Result<ShieldCheck> {
    let structure = abelian_structure(passive, p)?;
    let profile = profile_extract(active, p)?;
    let formula = shield_class(&profile, &structure)?;
    let wreath = FiniteGroup::wreath_product(active, passive, size_limit)?;
    let oracle = nilpotency_class(&wreath);
    Ok(ShieldCheck {
        active: active.name().to_string(),
        passive: passive.name().to_string(),
        p,
        profile,
        passive_structure: structure,
        oracle,
        formula,
    })
}

/// Brute-force nilpotency of `A Wr B` next to Baumslag's criterion, for
/// explicit groups of any orders (mixed primes included).
pub fn baumslag_agrees(active: &FiniteGroup, passive: &FiniteGroup, size_limit: u64) -> Result<(Nilpotency, bool)> {
    let wreath = FiniteGroup::wreath_product(active, passive, size_limit)?;
    let oracle = nilpotency_class(&wreath);
    let symbolic = match (prime_of(active), prime_of(passive)) {
        (_, None) if passive.order() == 1 => true,
        (None, _) if active.order() == 1 => true,
        (Some(p), Some(q)) if p == q => {
            let profile = profile_extract(active, p).ok();
            let structure = abelian_structure(passive, q)?;
            profile.is_some() && baumslag_nilpotent(profile.as_ref(), true, &structure, true)
        }
        _ => false,
    };
    Ok((oracle, symbolic))
}

/// The prime `p` if the order is a non-trivial power of `p`.
fn prime_of(group: &FiniteGroup) -> Option<u64> {
    let n = group.order();
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

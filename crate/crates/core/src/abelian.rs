//! Finite abelian p-groups in Prüfer–Kulikov form.
//!
//! A group is stored as a prime together with a sparse map from cyclic-factor
//! exponent `e` to the number of factors `C_{p^e}`. The map is kept canonical
//! (no zero counts), so structural equality is isomorphism.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::check_prime;

/// A finite abelian p-group `C_{p^{e_1}} × … × C_{p^{e_k}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct AbelianPGroup {
    p: u64,
    factors: BTreeMap<u32, BigUint>,
}

impl AbelianPGroup {
    /// Builds the group from a list of factor exponents, one entry per factor.
    pub fn new(p: u64, exponents: &[u32]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &e in exponents {
            *counts.entry(e).or_insert_with(BigUint::zero) += 1u32;
        }
        Self::from_counts(p, counts)
    }

    /// Builds the group from `(exponent, count)` pairs. Zero counts are
    /// dropped; repeated exponents are summed.
    pub fn from_counts<I>(p: u64, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, BigUint)>,
    {
        check_prime(p)?;
        let mut factors = BTreeMap::new();
        for (e, n) in counts {
            if e == 0 {
                return Err(Error::ZeroExponent);
            }
            if n.is_zero() {
                continue;
            }
            *factors.entry(e).or_insert_with(BigUint::zero) += n;
        }
        Ok(Self { p, factors })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::from_counts(p, [])
    }

    pub(crate) fn from_canonical(p: u64, factors: BTreeMap<u32, BigUint>) -> Self {
        debug_assert!(factors.iter().all(|(e, n)| *e > 0 && !n.is_zero()));
        Self { p, factors }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exponent → count map, ascending by exponent.
    pub fn factors(&self) -> &BTreeMap<u32, BigUint> {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> BigUint {
        self.factors.iter().map(|(&e, n)| n * BigUint::from(e)).sum()
    }

    /// `|G|` as an exact integer.
    pub fn order(&self) -> BigUint {
        let log = self.log_order();
        let log = log.to_u32().expect("group order exponent exceeds u32");
        BigUint::from(self.p).pow(log)
    }

    /// The `v` with `exp(G) = p^v`; zero for the trivial group.
    pub fn exponent_v(&self) -> u32 {
        self.factors.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of cyclic factors of exponent exactly `e`.
    pub fn count(&self, e: u32) -> BigUint {
        self.factors.get(&e).cloned().unwrap_or_default()
    }

    /// Number of cyclic factors with exponent strictly greater than `k`.
    pub fn rank_above(&self, k: u32) -> BigUint {
        self.factors.range(k + 1..).map(|(_, n)| n).sum()
    }

    /// The power subgroup `G^{p^j}`: each `C_{p^e}` becomes `C_{p^{max(e-j, 0)}}`.
    pub fn power_subgroup(&self, j: u32) -> Self {
        let factors = self
            .factors
            .range(j.saturating_add(1)..)
            .map(|(&e, n)| (e - j, n.clone()))
            .collect();
        Self::from_canonical(self.p, factors)
    }

    pub fn direct_product(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        let mut factors = self.factors.clone();
        for (&e, n) in &other.factors {
            *factors.entry(e).or_insert_with(BigUint::zero) += n;
        }
        Ok(Self::from_canonical(self.p, factors))
    }

    /// Exponents of all factors in descending order, one entry per factor.
    ///
    /// Panics if a count does not fit in memory; meant for explicit
    /// realizations of small groups.
    pub fn exponent_list(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (&e, n) in self.factors.iter().rev() {
            let n = n.to_usize().expect("factor count too large to list");
            out.extend(std::iter::repeat_n(e, n));
        }
        out
    }
}

impl fmt::Display for AbelianPGroup {
    /// Renders as e.g. `C_125 x C_5^2`, or `1` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (&e, n) in self.factors.iter().rev() {
            if !first {
                f.write_str(" x ")?;
            }
            first = false;
            let modulus = BigUint::from(self.p).pow(e);
            if n.is_one() {
                write!(f, "C_{modulus}")?;
            } else {
                write!(f, "C_{modulus}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Factor multiplicity in JSON: a number, a decimal string for large values,
/// or `"inf"` (accepted only where infinite multiplicities make sense).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum CountJson {
    Small(u64),
    Text(String),
}

impl CountJson {
    pub(crate) fn from_count(n: &BigUint) -> Self {
        match n.to_u64() {
            Some(small) => CountJson::Small(small),
            None => CountJson::Text(n.to_string()),
        }
    }

    /// `None` means `"inf"`.
    pub(crate) fn parse(&self) -> std::result::Result<Option<BigUint>, String> {
        match self {
            CountJson::Small(n) => Ok(Some(BigUint::from(*n))),
            CountJson::Text(s) if s == "inf" => Ok(None),
            CountJson::Text(s) => s
                .parse::<BigUint>()
                .map(Some)
                .map_err(|_| format!("invalid multiplicity {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct FactorJson {
    pub(crate) e: u32,
    pub(crate) n: CountJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct GroupJson {
    pub(crate) p: u64,
    pub(crate) factors: Vec<FactorJson>,
}

impl From<AbelianPGroup> for GroupJson {
    fn from(g: AbelianPGroup) -> Self {
        GroupJson {
            p: g.p,
            factors: g
                .factors
                .iter()
                .rev()
                .map(|(&e, n)| FactorJson {
                    e,
                    n: CountJson::from_count(n),
                })
                .collect(),
        }
    }
}

impl TryFrom<GroupJson> for AbelianPGroup {
    type Error = String;

    fn try_from(json: GroupJson) -> std::result::Result<Self, String> {
        let mut counts = Vec::with_capacity(json.factors.len());
        for f in json.factors {
            match f.n.parse()? {
                Some(n) => counts.push((f.e, n)),
                None => return Err("infinite multiplicity in a finite group".into()),
            }
        }
        AbelianPGroup::from_counts(json.p, counts).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(p: u64, exps: &[u32]) -> AbelianPGroup {
        AbelianPGroup::new(p, exps).unwrap()
    }

    #[test]
    fn construction() {
        let example = g(5, &[3, 1, 1]);
        assert_eq!(example.count(3), BigUint::from(1u32));
        assert_eq!(example.count(1), BigUint::from(2u32));
        assert_eq!(example.factors().len(), 2);
        assert_eq!(example.to_string(), "C_125 x C_5^2");

        assert!(g(2, &[]).is_trivial());
        assert_eq!(g(2, &[]).to_string(), "1");
        assert_eq!(g(2, &[2, 1]).to_string(), "C_4 x C_2");
    }

    #[test]
    fn construction_errors() {
        assert_eq!(AbelianPGroup::new(4, &[1]), Err(Error::NotPrime(4)));
        assert_eq!(AbelianPGroup::new(1, &[1]), Err(Error::NotPrime(1)));
        assert_eq!(AbelianPGroup::new(0, &[]), Err(Error::NotPrime(0)));
        assert_eq!(AbelianPGroup::new(2, &[1, 0]), Err(Error::ZeroExponent));
    }

    #[test]
    fn zero_counts_are_dropped() {
        let a = AbelianPGroup::from_counts(3, [(2, BigUint::zero()), (1, BigUint::one())]).unwrap();
        assert_eq!(a, g(3, &[1]));
    }

    #[test]
    fn orders_and_exponents() {
        let example = g(5, &[3, 1, 1]);
        assert_eq!(example.log_order(), BigUint::from(5u32));
        assert_eq!(example.order(), BigUint::from(3125u32));
        assert_eq!(example.exponent_v(), 3);

        assert_eq!(g(2, &[]).log_order(), BigUint::zero());
        assert_eq!(g(2, &[]).exponent_v(), 0);
        assert_eq!(g(2, &[2, 1]).log_order(), BigUint::from(3u32));
        assert_eq!(g(2, &[2, 1]).exponent_v(), 2);
    }

    #[test]
    fn power_subgroups() {
        let example = g(5, &[3, 1, 1]);
        assert_eq!(example.power_subgroup(1), g(5, &[2]));
        assert_eq!(example.power_subgroup(0), example);
        assert!(example.power_subgroup(3).is_trivial());
        assert!(example.power_subgroup(u32::MAX).is_trivial());
    }

    #[test]
    fn products() {
        let left = g(5, &[3]);
        let right = g(5, &[1, 1]);
        assert_eq!(left.direct_product(&right).unwrap(), g(5, &[3, 1, 1]));
        assert_eq!(left.direct_product(&g(5, &[])).unwrap(), left);
        assert_eq!(g(2, &[2]).direct_product(&g(2, &[1])).unwrap(), g(2, &[2, 1]));
        assert_eq!(
            g(2, &[1]).direct_product(&g(3, &[1])),
            Err(Error::PrimeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn json_form() {
        let example = g(5, &[3, 1, 1]);
        let text = serde_json::to_string(&example).unwrap();
        assert_eq!(text, r#"{"p":5,"factors":[{"e":3,"n":1},{"e":1,"n":2}]}"#);
        let back: AbelianPGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, example);

        let huge: AbelianPGroup =
            serde_json::from_str(r#"{"p":2,"factors":[{"e":1,"n":"100000000000000000000000"}]}"#).unwrap();
        assert_eq!(huge.log_order().to_string(), "100000000000000000000000");

        assert!(serde_json::from_str::<AbelianPGroup>(r#"{"p":2,"factors":[{"e":1,"n":"inf"}]}"#).is_err());
        assert!(serde_json::from_str::<AbelianPGroup>(r#"{"p":6,"factors":[]}"#).is_err());
    }

    fn arb_group() -> impl Strategy<Value = AbelianPGroup> {
        (
            prop::sample::select(vec![2u64, 3, 5, 7]),
            prop::collection::vec(1u32..8, 0..6),
        )
            .prop_map(|(p, exps)| AbelianPGroup::new(p, &exps).unwrap())
    }

    proptest! {
        #[test]
        fn power_subgroup_composes(grp in arb_group(), i in 0u32..6, j in 0u32..6) {
            prop_assert_eq!(grp.power_subgroup(i).power_subgroup(j), grp.power_subgroup(i + j));
        }

        #[test]
        fn power_subgroup_order_descends(grp in arb_group()) {
            let v = grp.exponent_v();
            let mut previous = grp.log_order();
            for j in 1..=v {
                let current = grp.power_subgroup(j).log_order();
                prop_assert!(current <= previous);
                previous = current;
            }
            prop_assert!(grp.power_subgroup(v).is_trivial());
            if v > 0 {
                prop_assert!(!grp.power_subgroup(v - 1).is_trivial());
            }
        }

        #[test]
        fn direct_product_is_commutative_and_associative(
            exps in prop::collection::vec(prop::collection::vec(1u32..6, 0..4), 3)
        ) {
            let [a, b, c] = [&exps[0], &exps[1], &exps[2]].map(|e| AbelianPGroup::new(3, e).unwrap());
            prop_assert_eq!(a.direct_product(&b).unwrap(), b.direct_product(&a).unwrap());
            prop_assert_eq!(
                a.direct_product(&b).unwrap().direct_product(&c).unwrap(),
                a.direct_product(&b.direct_product(&c).unwrap()).unwrap()
            );
        }
    }
}

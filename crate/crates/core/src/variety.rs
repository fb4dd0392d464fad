//! Deciding whether `A Wr B` generates the product variety `var(A)·var(B)`
//! for a nilpotent p-group `A` of finite exponent and an abelian p-group `B`
//! of finite exponent `p^v`.
//!
//! The answer is yes exactly when `B` has infinitely many cyclic summands of
//! the top order `p^v`. Lower summands do not matter, and neither does `A`
//! beyond satisfying the hypotheses.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianPGroup, CountJson, FactorJson, GroupJson};
use crate::error::{Error, Result};
use crate::primes::check_prime;
use crate::shield::ActiveProfile;

/// How many copies of a cyclic factor a group has. `Omega` stands for
/// countably many; no arithmetic is defined on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(BigUint),
    Omega,
}

impl Multiplicity {
    pub fn is_omega(&self) -> bool {
        matches!(self, Multiplicity::Omega)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => CountJson::from_count(n).serialize(serializer),
            Multiplicity::Omega => serializer.serialize_str("inf"),
        }
    }
}

/// An abelian p-group of finite exponent whose factor multiplicities may be
/// countably infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct AbelianGroupSpec {
    p: u64,
    factors: BTreeMap<u32, Multiplicity>,
}

impl AbelianGroupSpec {
    pub fn new<I>(p: u64, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Multiplicity)>,
    {
        check_prime(p)?;
        let mut out: BTreeMap<u32, Multiplicity> = BTreeMap::new();
        for (e, m) in factors {
            if e == 0 {
                return Err(Error::ZeroExponent);
            }
            if matches!(&m, Multiplicity::Finite(n) if n.is_zero()) {
                continue;
            }
            let merged = match (out.remove(&e), m) {
                (None, m) => m,
                (Some(Multiplicity::Finite(x)), Multiplicity::Finite(y)) => Multiplicity::Finite(x + y),
                _ => Multiplicity::Omega,
            };
            out.insert(e, merged);
        }
        Ok(Self { p, factors: out })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn factors(&self) -> &BTreeMap<u32, Multiplicity> {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        !self.factors.values().any(Multiplicity::is_omega)
    }

    pub fn exponent_v(&self) -> u32 {
        self.factors.keys().next_back().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, e: u32) -> Multiplicity {
        self.factors
            .get(&e)
            .cloned()
            .unwrap_or(Multiplicity::Finite(BigUint::zero()))
    }

    /// The finite group this spec describes, if every multiplicity is finite.
    pub fn to_finite(&self) -> Option<AbelianPGroup> {
        let mut counts = BTreeMap::new();
        for (&e, m) in &self.factors {
            match m {
                Multiplicity::Finite(n) => {
                    counts.insert(e, n.clone());
                }
                Multiplicity::Omega => return None,
            }
        }
        Some(AbelianPGroup::from_canonical(self.p, counts))
    }
}

impl From<&AbelianPGroup> for AbelianGroupSpec {
    fn from(g: &AbelianPGroup) -> Self {
        Self {
            p: g.p(),
            factors: g
                .factors()
                .iter()
                .map(|(&e, n)| (e, Multiplicity::Finite(n.clone())))
                .collect(),
        }
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .rev()
            .map(|(&e, m)| {
                let modulus = BigUint::from(self.p).pow(e);
                match m {
                    Multiplicity::Finite(n) if n == &BigUint::from(1u32) => format!("C_{modulus}"),
                    m => format!("C_{modulus}^{m}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

impl From<AbelianGroupSpec> for GroupJson {
    fn from(spec: AbelianGroupSpec) -> Self {
        GroupJson {
            p: spec.p,
            factors: spec
                .factors
                .iter()
                .rev()
                .map(|(&e, m)| FactorJson {
                    e,
                    n: match m {
                        Multiplicity::Finite(n) => CountJson::from_count(n),
                        Multiplicity::Omega => CountJson::Text("inf".into()),
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<GroupJson> for AbelianGroupSpec {
    type Error = String;

    fn try_from(json: GroupJson) -> std::result::Result<Self, String> {
        let mut factors = Vec::with_capacity(json.factors.len());
        for f in json.factors {
            let m = match f.n.parse()? {
                Some(n) => Multiplicity::Finite(n),
                None => Multiplicity::Omega,
            };
            factors.push((f.e, m));
        }
        AbelianGroupSpec::new(json.p, factors).map_err(|e| e.to_string())
    }
}

/// Whether `B` contains `C_{p^v}^∞`, i.e. has countably many top-order factors.
pub fn contains_cpv_infinity(passive: &AbelianGroupSpec) -> Result<bool> {
    if passive.is_trivial() {
        return Err(Error::TrivialGroup("the C_{p^v}^inf test"));
    }
    Ok(passive.multiplicity(passive.exponent_v()).is_omega())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    /// `A Wr B` generates `var(A)·var(B)`.
    pub generates_product: bool,
    pub p: u64,
    pub v: u32,
    pub top_multiplicity: Multiplicity,
    pub explanation: String,
}

/// Decides whether `var(A Wr B) = var(A)·var(B)`.
///
/// `A` is only checked against the hypotheses; the decision depends on `B`.
pub fn theorem1_decide(active: &ActiveProfile, passive: &AbelianGroupSpec) -> Result<Decision> {
    if active.p() != passive.p() {
        return Err(Error::PrimeMismatch {
            left: active.p(),
            right: passive.p(),
        });
    }
    let generates_product = contains_cpv_infinity(passive)?;
    let v = passive.exponent_v();
    let top_multiplicity = passive.multiplicity(v);
    let modulus = BigUint::from(passive.p()).pow(v);
    let explanation = if generates_product {
        format!(
            "B has infinitely many summands C_{modulus} of the top order p^{v}, so it contains \
             C_{modulus}^inf and A Wr B generates var(A)var(B)"
        )
    } else if passive.is_finite() {
        format!(
            "B is finite, so A Wr B is nilpotent while var(A)var(B) is not; \
             only {top_multiplicity} summands C_{modulus} of the top order p^{v}"
        )
    } else {
        format!(
            "B has only {top_multiplicity} summands C_{modulus} of the top order p^{v}; \
             infinitely many lower-order summands do not help, so A Wr B does not generate var(A)var(B)"
        )
    };
    Ok(Decision {
        generates_product,
        p: passive.p(),
        v,
        top_multiplicity,
        explanation,
    })
}

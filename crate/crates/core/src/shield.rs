//! Nilpotency class of `A Wr B` for a nilpotent p-group `A` of finite exponent
//! and a finite abelian p-group `B`.
//!
//! The class is `max_{h=1..c} { a·h + (s(h)-1)·b }` where `(a, b)` come from
//! the K_p-series of `B` and `p^{s(h)}` is the exponent of `γ_h(A)`. The
//! module also carries the two test families `Z(l,t)` and `Y(z,t)`, their
//! closed-form classes, the thresholds past which those closed forms hold,
//! and the crossover index past which the `Y` family overtakes `Z`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::AbelianPGroup;
use crate::error::{Error, Result};
use crate::kp::{serialize_decimal, shield_params, ShieldParams};
use crate::primes::check_prime;

/// The part of an active group `A` that the class formula sees: the prime,
/// and for each `h = 1..c` the log-exponent `s(h)` of `γ_h(A)`.
///
/// Cartesian powers `A^β` have the same profile as `A`, so no cardinality is
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson", into = "ProfileJson")]
pub struct ActiveProfile {
    p: u64,
    s: Vec<u32>,
}

impl ActiveProfile {
    pub fn new(p: u64, s: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if s.is_empty() {
            return Err(Error::InvalidProfile("class must be at least 1".into()));
        }
        if s.contains(&0) {
            return Err(Error::InvalidProfile(
                "every lower central term of a class-c group is non-trivial, so s(h) >= 1".into(),
            ));
        }
        if s.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidProfile(format!(
                "exponents must be non-increasing, got {s:?}"
            )));
        }
        Ok(Self { p, s })
    }

    /// Dihedral group of order 8: class 2, exponent 4, `γ_2 ≅ C_2`.
    pub fn dihedral8() -> Self {
        Self { p: 2, s: vec![2, 1] }
    }

    /// Quaternion group of order 8: same profile as the dihedral group.
    pub fn quaternion8() -> Self {
        Self { p: 2, s: vec![2, 1] }
    }

    /// Profile of a non-trivial abelian group of exponent `p^u`.
    pub fn abelian(p: u64, u: u32) -> Result<Self> {
        Self::new(p, vec![u])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Nilpotency class `c`.
    pub fn class(&self) -> usize {
        self.s.len()
    }

    /// `s(h)` for `h = 1..=c`.
    pub fn s(&self, h: usize) -> u32 {
        self.s[h - 1]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.s
    }

    /// `α = s(c)`, the log-exponent of the last non-trivial term.
    pub fn alpha(&self) -> u32 {
        *self.s.last().expect("profile is non-empty")
    }
}

impl fmt::Display for ActiveProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.s.iter().map(u32::to_string).collect();
        write!(f, "p={} c={} s={}", self.p, self.s.len(), s.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<usize>,
    s: Vec<u32>,
}

impl From<ActiveProfile> for ProfileJson {
    fn from(profile: ActiveProfile) -> Self {
        ProfileJson {
            p: profile.p,
            c: Some(profile.s.len()),
            s: profile.s,
        }
    }
}

impl TryFrom<ProfileJson> for ActiveProfile {
    type Error = String;

    fn try_from(json: ProfileJson) -> std::result::Result<Self, String> {
        if let Some(c) = json.c {
            if c != json.s.len() {
                return Err(format!("c = {c} but {} exponents given", json.s.len()));
            }
        }
        ActiveProfile::new(json.p, json.s).map_err(|e| e.to_string())
    }
}

/// Baumslag's criterion: `A Wr B` (both non-trivial) is nilpotent iff `A` is
/// a nilpotent p-group of finite exponent and `B` is a finite p-group for the
/// same `p`. A trivial factor leaves the other group, which is nilpotent here
/// (`A` has a class by construction, `B` is abelian).
pub fn baumslag_nilpotent(
    active: Option<&ActiveProfile>,
    active_exponent_finite: bool,
    passive: &AbelianPGroup,
    passive_finite: bool,
) -> bool {
    let Some(active) = active else {
        return true;
    };
    if passive.is_trivial() {
        return true;
    }
    active_exponent_finite && passive_finite && active.p == passive.p()
}

fn check_pair(active: &ActiveProfile, passive: &AbelianPGroup) -> Result<ShieldParams> {
    if active.p != passive.p() {
        return Err(Error::PrimeMismatch {
            left: active.p,
            right: passive.p(),
        });
    }
    if passive.is_trivial() {
        return Err(Error::TrivialGroup("the class formula"));
    }
    shield_params(passive)
}

/// Maximum over `h` of `a·h + (s(h)-1)·b`, with the largest maximizing `h`.
fn evaluate(active: &ActiveProfile, a: &BigUint, b: &BigUint) -> (BigUint, usize) {
    let mut best = BigUint::zero();
    let mut best_h = 0;
    for (index, &s) in active.s.iter().enumerate() {
        let h = index + 1;
        let value = a * BigUint::from(h) + BigUint::from(s - 1) * b;
        if value >= best {
            best = value;
            best_h = h;
        }
    }
    (best, best_h)
}

/// Nilpotency class of `A Wr B`.
pub fn shield_class(active: &ActiveProfile, passive: &AbelianPGroup) -> Result<BigUint> {
    let params = check_pair(active, passive)?;
    Ok(evaluate(active, &params.a, &params.b).0)
}

/// The largest `h` attaining the maximum in [`shield_class`].
pub fn shield_argmax(active: &ActiveProfile, passive: &AbelianPGroup) -> Result<usize> {
    let params = check_pair(active, passive)?;
    Ok(evaluate(active, &params.a, &params.b).1)
}

/// `Z(l,t) = C_{p^v}^l × C_{p^{v-1}}^{t-l}`.
pub fn z_group(p: u64, v: u32, l: &BigUint, t: &BigUint) -> Result<AbelianPGroup> {
    if v == 0 {
        return Err(Error::InvalidLemmaInputs("v must be positive".into()));
    }
    if l.is_zero() || l > t {
        return Err(Error::InvalidLemmaInputs(format!(
            "Z(l,t) needs 1 <= l <= t, got l={l}, t={t}"
        )));
    }
    AbelianPGroup::from_counts(p, [(v, l.clone()), (v - 1, t - l)].into_iter().filter(|(e, _)| *e > 0))
}

/// `Y(z,t) = C_{p^v}^{t-z}`.
pub fn y_group(p: u64, v: u32, z: &BigUint, t: &BigUint) -> Result<AbelianPGroup> {
    if v == 0 {
        return Err(Error::InvalidLemmaInputs("v must be positive".into()));
    }
    if z.is_zero() || t <= z {
        return Err(Error::InvalidLemmaInputs(format!(
            "Y(z,t) needs 1 <= z < t, got z={z}, t={t}"
        )));
    }
    AbelianPGroup::from_counts(p, [(v, t - z)])
}

/// `1 + p + … + p^{k-1}`; zero for `k = 0`.
fn geometric(p: u64, k: u32) -> BigUint {
    let p = BigUint::from(p);
    let mut sum = BigUint::zero();
    let mut power = BigUint::one();
    for _ in 0..k {
        sum += &power;
        power *= &p;
    }
    sum
}

/// Inputs of the two closed-form class values.
///
/// `l` is used only by [`lemma1_class`] and `z` only by [`lemma2_class`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaInputs {
    pub c: u32,
    pub alpha: u32,
    pub p: u64,
    pub v: u32,
    #[serde(serialize_with = "serialize_decimal")]
    pub l: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub z: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub t: BigUint,
}

impl LemmaInputs {
    /// Takes `c` and `α = s(c)` from a profile.
    pub fn from_profile(profile: &ActiveProfile, v: u32, l: BigUint, z: BigUint, t: BigUint) -> Self {
        Self {
            c: profile.class() as u32,
            alpha: profile.alpha(),
            p: profile.p,
            v,
            l,
            z,
            t,
        }
    }

    pub fn with_t(&self, t: BigUint) -> Self {
        Self { t, ..self.clone() }
    }

    fn check_common(&self) -> Result<()> {
        check_prime(self.p)?;
        if self.c == 0 || self.alpha == 0 || self.v == 0 {
            return Err(Error::InvalidLemmaInputs("c, alpha and v must be positive".into()));
        }
        Ok(())
    }

    /// `(α-1)(p-1)p^{v-1}`, shared by both closed forms.
    fn tail(&self) -> BigUint {
        BigUint::from(self.alpha - 1) * BigUint::from(self.p - 1) * BigUint::from(self.p).pow(self.v - 1)
    }
}

/// Class of `A^β Wr Z(l,t)` once the maximum sits at `h = c`:
/// `c + c(p-1)(t(1 + … + p^{v-2}) + l p^{v-1}) + (α-1)(p-1)p^{v-1}`.
pub fn lemma1_class(inputs: &LemmaInputs) -> Result<BigUint> {
    inputs.check_common()?;
    if inputs.l.is_zero() || inputs.l > inputs.t {
        return Err(Error::InvalidLemmaInputs(format!(
            "need 1 <= l <= t, got l={}, t={}",
            inputs.l, inputs.t
        )));
    }
    let c = BigUint::from(inputs.c);
    let top = BigUint::from(inputs.p).pow(inputs.v - 1);
    let inner = &inputs.t * geometric(inputs.p, inputs.v - 1) + &inputs.l * top;
    Ok(&c + &c * BigUint::from(inputs.p - 1) * inner + inputs.tail())
}

/// Class of `Ã Wr Y(z,t)` once the maximum sits at `h = c`:
/// `c + c(t-z)(p-1)(1 + … + p^{v-1}) + (α-1)(p-1)p^{v-1}`.
pub fn lemma2_class(inputs: &LemmaInputs) -> Result<BigUint> {
    inputs.check_common()?;
    if inputs.z.is_zero() || inputs.t <= inputs.z {
        return Err(Error::InvalidLemmaInputs(format!(
            "need 1 <= z < t, got z={}, t={}",
            inputs.z, inputs.t
        )));
    }
    let c = BigUint::from(inputs.c);
    let rank = &inputs.t - &inputs.z;
    Ok(&c + &c * rank * BigUint::from(inputs.p - 1) * geometric(inputs.p, inputs.v) + inputs.tail())
}

/// Smallest `a` for which `h = c` attains the maximum, given `b`:
/// `(c-h)·a ≥ (s(h)-s(c))·b` for every `h < c`.
fn required_a(profile: &ActiveProfile, b: &BigUint) -> BigUint {
    let c = profile.class();
    let alpha = profile.alpha();
    (1..c)
        .filter(|&h| profile.s(h) > alpha)
        .map(|h| {
            let need = BigUint::from(profile.s(h) - alpha) * b;
            Integer::div_ceil(&need, &BigUint::from(c - h))
        })
        .max()
        .unwrap_or_default()
}

/// `⌈x / y⌉` for `x` possibly below zero, clamped at zero.
fn ceil_div_clamped(x_plus: &BigUint, x_minus: &BigUint, y: &BigUint) -> BigUint {
    if x_plus <= x_minus {
        BigUint::zero()
    } else {
        Integer::div_ceil(&(x_plus - x_minus), y)
    }
}

fn check_threshold_inputs(profile: &ActiveProfile, v: u32, other: &BigUint, name: &str) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidLemmaInputs("v must be positive".into()));
    }
    if other.is_zero() {
        return Err(Error::InvalidLemmaInputs(format!("{name} must be positive")));
    }
    check_prime(profile.p)?;
    Ok(())
}

/// Least `t ≥ l` with `shield_argmax(A, Z(l,t)) = c`.
///
/// For `v ≥ 2` the parameter `a` of `Z(l,t)` grows strictly with `t` while `b`
/// stays fixed, so once `h = c` wins it keeps winning. For `v = 1` the group
/// `Z(l,t) = C_p^l` does not depend on `t` at all; if `h = c` does not win at
/// `t = l` it never does and `None` is returned.
pub fn t0_threshold(profile: &ActiveProfile, v: u32, l: &BigUint) -> Result<Option<BigUint>> {
    check_threshold_inputs(profile, v, l, "l")?;
    let p = profile.p;
    let p_minus_one = BigUint::from(p - 1);
    let top = BigUint::from(p).pow(v - 1);
    let b = &p_minus_one * &top;
    let need = required_a(profile, &b);
    // a(t) = 1 + (p-1)(t·G + l·p^{v-1}) with G = 1 + … + p^{v-2}.
    let slope = &p_minus_one * geometric(p, v - 1);
    let fixed = BigUint::one() + &p_minus_one * l * &top;
    if slope.is_zero() {
        return Ok((fixed >= need).then(|| l.clone()));
    }
    let t = ceil_div_clamped(&need, &fixed, &slope).max(l.clone());
    debug_assert_eq!(shield_argmax(profile, &z_group(p, v, l, &t)?)?, profile.class());
    Ok(Some(t))
}

/// Least `t > z` with `shield_argmax(A, Y(z,t)) = c`. Always exists: `a`
/// grows strictly with `t` for every `v ≥ 1`.
pub fn t1_threshold(profile: &ActiveProfile, v: u32, z: &BigUint) -> Result<BigUint> {
    check_threshold_inputs(profile, v, z, "z")?;
    let p = profile.p;
    let p_minus_one = BigUint::from(p - 1);
    let b = &p_minus_one * BigUint::from(p).pow(v - 1);
    let need = required_a(profile, &b);
    // a(t) = 1 + (p-1)(t-z)·(1 + … + p^{v-1}).
    let slope = &p_minus_one * geometric(p, v);
    let rank = ceil_div_clamped(&need, &BigUint::one(), &slope).max(BigUint::one());
    let t = z + rank;
    debug_assert_eq!(shield_argmax(profile, &y_group(p, v, z, &t)?)?, profile.class());
    Ok(t)
}

/// Where the `Y` family's class overtakes the `Z` family's class for good.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossover {
    /// Least `t*` such that `lemma2_class(t) > lemma1_class(t)` for all
    /// `t > t*`, raised to the thresholds below where those exist.
    #[serde(serialize_with = "serialize_decimal")]
    pub t_star: BigUint,
    /// Last `t` at which the closed forms alone do not yet favour `Y`.
    #[serde(serialize_with = "serialize_decimal")]
    pub closed_form_crossing: BigUint,
    /// `None` when `v = 1` and the `Z` family never reaches `h = c`.
    #[serde(serialize_with = "serialize_optional_decimal")]
    pub t0: Option<BigUint>,
    #[serde(serialize_with = "serialize_decimal")]
    pub t1: BigUint,
}

fn serialize_optional_decimal<S: serde::Serializer>(
    n: &Option<BigUint>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => serializer.collect_str(n),
        None => serializer.serialize_none(),
    }
}

/// Solves the comparison of the two closed forms exactly. After removing the
/// common terms, `Y` wins iff `t·p^{v-1} > l·p^{v-1} + z(1 + … + p^{v-2}) + z·p^{v-1}`.
pub fn crossover_tstar(profile: &ActiveProfile, v: u32, l: &BigUint, z: &BigUint) -> Result<Crossover> {
    let t0 = t0_threshold(profile, v, l)?;
    let t1 = t1_threshold(profile, v, z)?;
    let p = profile.p;
    let top = BigUint::from(p).pow(v - 1);
    let rhs = l * &top + z * geometric(p, v - 1) + z * &top;
    let closed_form_crossing = rhs / &top;
    let mut t_star = closed_form_crossing
        .clone()
        .max(t1.clone())
        .max(l.clone())
        .max(z + 1u32);
    if let Some(t0) = &t0 {
        t_star = t_star.max(t0.clone());
    }
    Ok(Crossover {
        t_star,
        closed_form_crossing,
        t0,
        t1,
    })
}

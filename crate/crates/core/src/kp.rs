//! Closed-form K_p-series of finite abelian p-groups.
//!
//! For abelian `G` only the first lower central term contributes, so
//! `K_{i,p}(G) = G^{p^j}` with `j` the least integer such that `p^j ≥ i`.
//! The series therefore changes only at indices `p^k + 1`, and the quotient
//! exponents `e(s)` vanish unless `s` is a power of `p`. Both facts are used
//! to keep everything sparse: `d = p^{v-1}` grows exponentially in `v`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::abelian::AbelianPGroup;
use crate::error::{Error, Result};

/// Parameters `(d, e, a, b)` of a passive group, as used by the class formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShieldParams {
    pub p: u64,
    /// Last index with a non-trivial K_p term.
    #[serde(serialize_with = "serialize_decimal")]
    pub d: BigUint,
    /// Non-zero `e(s)` values, keyed by `s`.
    #[serde(serialize_with = "serialize_e")]
    pub e: BTreeMap<BigUint, BigUint>,
    /// `1 + (p-1) Σ s·e(s)`.
    #[serde(serialize_with = "serialize_decimal")]
    pub a: BigUint,
    /// `(p-1) d`.
    #[serde(serialize_with = "serialize_decimal")]
    pub b: BigUint,
}

fn serialize_e<S: serde::Serializer>(
    e: &BTreeMap<BigUint, BigUint>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_map(e.iter().map(|(s, n)| (s.to_string(), n.to_string())))
}

impl ShieldParams {
    /// Recomputes `a` and `b` from `d` and `e`.
    pub fn from_parts(p: u64, d: BigUint, e: BTreeMap<BigUint, BigUint>) -> Self {
        let weighted: BigUint = e.iter().map(|(s, n)| s * n).sum();
        let p_minus_one = BigUint::from(p - 1);
        let a = BigUint::one() + &p_minus_one * weighted;
        let b = &p_minus_one * &d;
        Self { p, d, e, a, b }
    }

    pub fn e_at(&self, s: &BigUint) -> BigUint {
        self.e.get(s).cloned().unwrap_or_default()
    }
}

/// A maximal run of indices `start..=end` on which the K_p-series is constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KpRun {
    #[serde(serialize_with = "serialize_decimal")]
    pub start: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub end: BigUint,
    pub group: AbelianPGroup,
}

pub(crate) fn serialize_decimal<S: serde::Serializer>(
    n: &BigUint,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(n)
}

/// Least `j` with `p^j ≥ i`.
fn ceil_log(p: u64, i: &BigUint) -> u32 {
    let p = BigUint::from(p);
    let mut j = 0;
    let mut power = BigUint::one();
    while &power < i {
        power *= &p;
        j += 1;
    }
    j
}

/// `K_{i,p}(G)`.
pub fn kp_term(group: &AbelianPGroup, i: &BigUint) -> Result<AbelianPGroup> {
    if i.is_zero() {
        return Err(Error::ZeroIndex);
    }
    Ok(group.power_subgroup(ceil_log(group.p(), i)))
}

/// The largest `i` with `K_{i,p}(G) ≠ 1`, which is `p^{v-1}`.
pub fn kp_d(group: &AbelianPGroup) -> Result<BigUint> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup("d"));
    }
    Ok(BigUint::from(group.p()).pow(group.exponent_v() - 1))
}

pub fn shield_params(group: &AbelianPGroup) -> Result<ShieldParams> {
    let d = kp_d(group)?;
    let p = BigUint::from(group.p());
    // |K_{p^k} / K_{p^k + 1}| = |G^{p^k} / G^{p^{k+1}}|, whose log is the
    // number of factors of exponent > k.
    let mut e = BTreeMap::new();
    let mut s = BigUint::one();
    for k in 0..group.exponent_v() {
        let n = group.rank_above(k);
        if !n.is_zero() {
            e.insert(s.clone(), n);
        }
        s *= &p;
    }
    Ok(ShieldParams::from_parts(group.p(), d, e))
}

/// The whole series from `i = 1` to the first trivial term, run-length encoded.
pub fn kp_sequence(group: &AbelianPGroup) -> Vec<KpRun> {
    let p = BigUint::from(group.p());
    let mut runs = vec![KpRun {
        start: BigUint::one(),
        end: BigUint::one(),
        group: group.clone(),
    }];
    if group.is_trivial() {
        return runs;
    }
    // Run k covers p^k + 1 ..= p^{k+1} and holds G^{p^{k+1}}.
    let mut low = BigUint::one();
    for k in 0..group.exponent_v() {
        let high = &low * &p;
        let term = group.power_subgroup(k + 1);
        let start = &low + 1u32;
        if term.is_trivial() {
            runs.push(KpRun {
                end: start.clone(),
                start,
                group: term,
            });
            break;
        }
        runs.push(KpRun {
            start,
            end: high.clone(),
            group: term,
        });
        low = high;
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(p: u64, exps: &[u32]) -> AbelianPGroup {
        AbelianPGroup::new(p, exps).unwrap()
    }

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn terms_of_example_group() {
        let example = g(5, &[3, 1, 1]);
        assert_eq!(kp_term(&example, &n(1)).unwrap(), example);
        for i in 2..=5 {
            assert_eq!(kp_term(&example, &n(i)).unwrap(), g(5, &[2]));
        }
        for i in 6..=25 {
            assert_eq!(kp_term(&example, &n(i)).unwrap(), g(5, &[1]));
        }
        assert!(kp_term(&example, &n(26)).unwrap().is_trivial());
        assert_eq!(kp_term(&example, &n(0)), Err(Error::ZeroIndex));
    }

    #[test]
    fn d_values() {
        assert_eq!(kp_d(&g(5, &[3, 1, 1])).unwrap(), n(25));
        assert_eq!(kp_d(&g(2, &[1])).unwrap(), n(1));
        assert_eq!(kp_d(&g(2, &[2, 1])).unwrap(), n(2));
        assert_eq!(kp_d(&g(2, &[])), Err(Error::TrivialGroup("d")));
    }

    #[test]
    fn params_of_example_group() {
        let params = shield_params(&g(5, &[3, 1, 1])).unwrap();
        assert_eq!(params.d, n(25));
        let expected: BTreeMap<_, _> = [(n(1), n(3)), (n(5), n(1)), (n(25), n(1))].into();
        assert_eq!(params.e, expected);
        assert_eq!(params.a, n(133));
        assert_eq!(params.b, n(100));
    }

    #[test]
    fn params_of_small_groups() {
        let c2 = shield_params(&g(2, &[1])).unwrap();
        assert_eq!((c2.d.clone(), c2.a.clone(), c2.b.clone()), (n(1), n(2), n(1)));
        assert_eq!(c2.e_at(&n(1)), n(1));

        let c4c2 = shield_params(&g(2, &[2, 1])).unwrap();
        assert_eq!(c4c2.d, n(2));
        assert_eq!(c4c2.e_at(&n(1)), n(2));
        assert_eq!(c4c2.e_at(&n(2)), n(1));
        assert_eq!(c4c2.a, n(5));
        assert_eq!(c4c2.b, n(2));

        assert!(shield_params(&g(3, &[])).is_err());
    }

    #[test]
    fn sequences() {
        let example = g(5, &[3, 1, 1]);
        let runs = kp_sequence(&example);
        let shape: Vec<_> = runs
            .iter()
            .map(|r| (r.start.clone(), r.end.clone(), r.group.order()))
            .collect();
        assert_eq!(
            shape,
            vec![
                (n(1), n(1), n(3125)),
                (n(2), n(5), n(25)),
                (n(6), n(25), n(5)),
                (n(26), n(26), n(1)),
            ]
        );

        let trivial = kp_sequence(&g(2, &[]));
        assert_eq!(trivial.len(), 1);
        assert!(trivial[0].group.is_trivial());

        let c4 = kp_sequence(&g(2, &[2]));
        let shape: Vec<_> = c4
            .iter()
            .map(|r| (r.start.clone(), r.end.clone(), r.group.order()))
            .collect();
        assert_eq!(shape, vec![(n(1), n(1), n(4)), (n(2), n(2), n(2)), (n(3), n(3), n(1))]);
    }

    #[test]
    fn params_stay_sparse_for_large_exponents() {
        // d = 7^39 would be hopeless to materialize densely.
        let grp = g(7, &[40, 3]);
        let params = shield_params(&grp).unwrap();
        assert_eq!(params.d, n(7).pow(39));
        assert_eq!(params.e.len(), 40);
    }

    fn arb_group() -> impl Strategy<Value = AbelianPGroup> {
        (
            prop::sample::select(vec![2u64, 3, 5]),
            prop::collection::vec(1u32..6, 1..6),
        )
            .prop_map(|(p, exps)| AbelianPGroup::new(p, &exps).unwrap())
    }

    proptest! {
        #[test]
        fn e_sums_to_log_order(grp in arb_group()) {
            let params = shield_params(&grp).unwrap();
            let total: BigUint = params.e.values().sum();
            prop_assert_eq!(total, grp.log_order());
            prop_assert_eq!(params.e.keys().next_back().unwrap(), &params.d);
            let rebuilt = ShieldParams::from_parts(params.p, params.d.clone(), params.e.clone());
            prop_assert_eq!(rebuilt, params);
        }

        #[test]
        fn runs_match_pointwise_terms(grp in arb_group()) {
            let runs = kp_sequence(&grp);
            let mut expected_start = BigUint::one();
            for run in &runs {
                prop_assert_eq!(&run.start, &expected_start);
                for i in [&run.start, &run.end] {
                    prop_assert_eq!(&kp_term(&grp, i).unwrap(), &run.group);
                }
                expected_start = &run.end + 1u32;
            }
            prop_assert!(runs.last().unwrap().group.is_trivial());
            prop_assert!(!kp_term(&grp, &kp_d(&grp).unwrap()).unwrap().is_trivial());
        }

        #[test]
        fn series_is_descending_with_boundaries_at_powers(grp in arb_group(), i in 1u64..400) {
            let here = kp_term(&grp, &n(i)).unwrap();
            let next = kp_term(&grp, &n(i + 1)).unwrap();
            prop_assert!(next.log_order() <= here.log_order());
            // Each term is G^{p^j}, so the next one is a power subgroup of it.
            let drop = (0..=grp.exponent_v()).find(|&j| here.power_subgroup(j) == next);
            prop_assert!(drop.is_some());
            let p = grp.p();
            let is_boundary = (0..20u32).any(|k| p.checked_pow(k).is_some_and(|pk| pk + 1 == i + 1));
            if !is_boundary {
                prop_assert_eq!(here, next);
            }
        }
    }
}

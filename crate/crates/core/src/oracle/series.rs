use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_integer::Integer;
use serde::Serialize;

use super::group::{Element, FiniteGroup};
use super::subgroup::{commutator_subgroup, subgroup_closure, Subgroup};
use crate::error::{Error, Result};
use crate::primes::check_prime;
use crate::shield::ActiveProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn class(self) -> Option<usize> {
        match self {
            Nilpotency::Class(c) => Some(c),
            Nilpotency::NotNilpotent => None,
        }
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Class(c) => write!(f, "{c}"),
            Nilpotency::NotNilpotent => f.write_str("not nilpotent"),
        }
    }
}

impl Serialize for Nilpotency {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Nilpotency::Class(c) => serializer.serialize_u64(*c as u64),
            Nilpotency::NotNilpotent => serializer.serialize_str("not nilpotent"),
        }
    }
}

/// `γ_1 = G, γ_{h+1} = [γ_h, G]`, up to and including the first trivial
/// term, or up to the term where the series stabilizes.
pub fn lower_central_series(group: &FiniteGroup) -> Vec<Subgroup> {
    let gens = group.generators();
    let mut terms = vec![Subgroup::whole(group)];
    loop {
        let last = terms.last().expect("series starts with G");
        if last.is_trivial() {
            break;
        }
        let next = commutator_subgroup(group, last, &gens);
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    terms
}

pub fn nilpotency_class(group: &FiniteGroup) -> Nilpotency {
    class_of_series(&lower_central_series(group))
}

fn class_of_series(series: &[Subgroup]) -> Nilpotency {
    match series.last() {
        Some(last) if last.is_trivial() => Nilpotency::Class(series.len() - 1),
        _ => Nilpotency::NotNilpotent,
    }
}

/// Least `n ≥ 1` with `x^n = 1` for every `x` in the subgroup.
pub fn subgroup_exponent(group: &FiniteGroup, subgroup: &Subgroup) -> u64 {
    subgroup
        .elements()
        .iter()
        .fold(1, |acc, &x| acc.lcm(&group.element_order(x)))
}

/// `log_p |G|`, or an error if `|G|` is not a power of `p`.
fn p_power_log(group: &FiniteGroup, p: u64) -> Result<u32> {
    check_prime(p)?;
    let mut n = group.order();
    let mut log = 0;
    while n.is_multiple_of(p) {
        n /= p;
        log += 1;
    }
    if n != 1 {
        return Err(Error::NotPGroup {
            order: group.order(),
            p,
        });
    }
    Ok(log)
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut log = 0;
    while n > 1 {
        n /= p;
        log += 1;
    }
    log
}

/// The profile `(p, c, s(1..c))` of an explicit nilpotent p-group.
pub fn profile_extract(group: &FiniteGroup, p: u64) -> Result<ActiveProfile> {
    if p_power_log(group, p)? == 0 {
        return Err(Error::TrivialGroup("a profile"));
    }
    let series = lower_central_series(group);
    if class_of_series(&series) == Nilpotency::NotNilpotent {
        return Err(Error::NotNilpotent);
    }
    let s = series
        .iter()
        .filter(|term| !term.is_trivial())
        .map(|term| log_p(subgroup_exponent(group, term), p))
        .collect();
    ActiveProfile::new(p, s)
}

/// The K_p-series computed from its definition,
/// `K_{i,p}(G) = ∏_{r·p^j ≥ i} γ_r(G)^{p^j}`, for `i = 1` up to the first
/// trivial term.
///
/// `γ_r^{p^j}` is read as the subgroup generated by all `p^j`-th powers of
/// elements of `γ_r`. Since `γ_{r'}^{p^{j'}} ⊆ γ_r^{p^j}` whenever `r' ≥ r`
/// and `j' ≥ j`, only the least admissible `j` for each `r` contributes.
pub fn kp_series_definitional(group: &FiniteGroup, p: u64) -> Result<Vec<Subgroup>> {
    p_power_log(group, p)?;
    if group.order() == 1 {
        return Ok(vec![Subgroup::trivial(group)]);
    }
    let gammas: Vec<Subgroup> = lower_central_series(group)
        .into_iter()
        .filter(|term| !term.is_trivial())
        .collect();
    let mut powers: HashMap<(usize, u32), Vec<Element>> = HashMap::new();
    let mut terms: HashMap<Vec<u32>, Subgroup> = HashMap::new();
    let mut series = Vec::new();
    for i in 1u64.. {
        let key: Vec<u32> = (1..=gammas.len() as u64)
            .map(|r| {
                let mut j = 0;
                let mut reach = r;
                while reach < i {
                    reach *= p;
                    j += 1;
                }
                j
            })
            .collect();
        let term = terms
            .entry(key.clone())
            .or_insert_with(|| {
                let gens: Vec<Element> = key
                    .iter()
                    .enumerate()
                    .flat_map(|(index, &j)| {
                        powers
                            .entry((index, j))
                            .or_insert_with(|| power_set(group, &gammas[index], p.pow(j)))
                            .clone()
                    })
                    .collect();
                subgroup_closure(group, gens)
            })
            .clone();
        let done = term.is_trivial();
        series.push(term);
        if done {
            break;
        }
    }
    Ok(series)
}

fn power_set(group: &FiniteGroup, subgroup: &Subgroup, k: u64) -> Vec<Element> {
    let mut out: Vec<Element> = subgroup.elements().iter().map(|&x| group.pow(x, k)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One line per term: `<label>[<index>] order=<n> exponent=<e>`, indices
/// starting at 1.
pub fn series_report(group: &FiniteGroup, label: &str, terms: &[Subgroup]) -> String {
    let mut out = String::new();
    for (index, term) in terms.iter().enumerate() {
        writeln!(
            out,
            "{label}[{}] order={} exponent={}",
            index + 1,
            term.order(),
            subgroup_exponent(group, term)
        )
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianPGroup;

    fn orders(series: &[Subgroup]) -> Vec<u64> {
        series.iter().map(Subgroup::order).collect()
    }

    fn c(n: u64) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    #[test]
    fn lower_central_series_of_small_groups() {
        let d4 = FiniteGroup::dihedral8();
        assert_eq!(orders(&lower_central_series(&d4)), vec![8, 2, 1]);
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(orders(&lower_central_series(&q8)), vec![8, 2, 1]);
        let ab = FiniteGroup::from_abelian(&AbelianPGroup::new(2, &[2, 1]).unwrap(), 100).unwrap();
        assert_eq!(orders(&lower_central_series(&ab)), vec![8, 1]);
        assert_eq!(orders(&lower_central_series(&FiniteGroup::trivial())), vec![1]);
    }

    #[test]
    fn series_terms_are_descending_normal_subgroups() {
        let g = FiniteGroup::wreath_product(&c(2), &c(4), 1 << 10).unwrap();
        let series = lower_central_series(&g);
        for pair in series.windows(2) {
            assert!(pair[1].is_subset(&pair[0]));
        }
        for term in &series {
            assert!(term.verify_closed(&g));
            for &x in term.generators() {
                for &y in &g.generators() {
                    assert!(term.contains(g.mul(g.mul(g.inv(y), x), y)));
                }
            }
        }
    }

    #[test]
    fn classes() {
        assert_eq!(
            nilpotency_class(&FiniteGroup::wreath_product(&c(2), &c(2), 100).unwrap()),
            Nilpotency::Class(2)
        );
        assert_eq!(
            nilpotency_class(&FiniteGroup::wreath_product(&c(3), &c(3), 100).unwrap()),
            Nilpotency::Class(3)
        );
        let mixed = FiniteGroup::wreath_product(&c(2), &c(3), 100).unwrap();
        assert_eq!(mixed.order(), 24);
        assert_eq!(nilpotency_class(&mixed), Nilpotency::NotNilpotent);
        assert_eq!(nilpotency_class(&c(5)), Nilpotency::Class(1));
        assert_eq!(nilpotency_class(&FiniteGroup::trivial()), Nilpotency::Class(0));
    }

    #[test]
    fn exponents() {
        let d4 = FiniteGroup::dihedral8();
        assert_eq!(subgroup_exponent(&d4, &Subgroup::trivial(&d4)), 1);
        assert_eq!(subgroup_exponent(&d4, &Subgroup::whole(&d4)), 4);
        assert_eq!(subgroup_exponent(&d4, &lower_central_series(&d4)[1]), 2);
        assert_eq!(subgroup_exponent(&c(6), &Subgroup::whole(&c(6))), 6);
    }

    #[test]
    fn profiles() {
        assert_eq!(
            profile_extract(&FiniteGroup::dihedral8(), 2).unwrap(),
            ActiveProfile::dihedral8()
        );
        assert_eq!(
            profile_extract(&FiniteGroup::quaternion8(), 2).unwrap(),
            ActiveProfile::quaternion8()
        );
        let ab = FiniteGroup::from_abelian(&AbelianPGroup::new(2, &[2, 1]).unwrap(), 100).unwrap();
        assert_eq!(
            profile_extract(&ab, 2).unwrap(),
            ActiveProfile::new(2, vec![2]).unwrap()
        );
        assert_eq!(profile_extract(&c(6), 2), Err(Error::NotPGroup { order: 6, p: 2 }));
        assert!(profile_extract(&FiniteGroup::trivial(), 2).is_err());
        assert!(profile_extract(&c(4), 4).is_err());
    }

    #[test]
    fn definitional_kp_of_abelian_group() {
        let g = FiniteGroup::from_abelian(&AbelianPGroup::new(2, &[3, 1, 1]).unwrap(), 100).unwrap();
        let series = kp_series_definitional(&g, 2).unwrap();
        // G, G^2 on [2, 2], G^4 on [3, 4], trivial at 5.
        assert_eq!(orders(&series), vec![32, 4, 2, 2, 1]);
        for pair in series.windows(2) {
            assert!(pair[1].is_subset(&pair[0]));
        }
        assert_eq!(
            orders(&kp_series_definitional(&FiniteGroup::trivial(), 3).unwrap()),
            vec![1]
        );
        assert!(kp_series_definitional(&c(6), 2).is_err());
    }

    #[test]
    fn definitional_kp_of_dihedral_group() {
        let d4 = FiniteGroup::dihedral8();
        let series = kp_series_definitional(&d4, 2).unwrap();
        assert_eq!(
            series_report(&d4, "K", &series),
            include_str!("../../tests/golden/d4_kp.txt")
        );
        assert_eq!(
            series_report(&d4, "gamma", &lower_central_series(&d4)),
            include_str!("../../tests/golden/d4_gamma.txt")
        );
    }
}

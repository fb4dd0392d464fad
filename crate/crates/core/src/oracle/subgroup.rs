use std::collections::{HashSet, VecDeque};

use super::group::{Element, FiniteGroup};

/// A subgroup of an explicit group, held as its sorted element set together
/// with the generators it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<Element>,
    generators: Vec<Element>,
}

impl Subgroup {
    pub fn trivial(group: &FiniteGroup) -> Self {
        Self {
            elements: vec![group.identity()],
            generators: vec![],
        }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self {
            elements: group.elements().collect(),
            generators: group.generators(),
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Checks closure under products and inverses: exhaustively for small
    /// subgroups, on a deterministic sample of pairs otherwise.
    pub fn verify_closed(&self, group: &FiniteGroup) -> bool {
        if !self.contains(group.identity()) {
            return false;
        }
        if self.elements.iter().any(|&x| !self.contains(group.inv(x))) {
            return false;
        }
        let n = self.elements.len();
        if n <= 1000 {
            return self
                .elements
                .iter()
                .all(|&x| self.elements.iter().all(|&y| self.contains(group.mul(x, y))));
        }
        let stride = n / 97 + 1;
        (0..n).step_by(stride).all(|i| {
            (0..n)
                .step_by(stride)
                .all(|j| self.contains(group.mul(self.elements[i], self.elements[j])))
        })
    }
}

/// The subgroup generated by `generators`.
///
/// Generators already inside the current closure are skipped; each new one
/// extends it by breadth-first multiplication, so the number of passes is at
/// most the length of a subgroup chain.
pub fn subgroup_closure<I>(group: &FiniteGroup, generators: I) -> Subgroup
where
    I: IntoIterator<Item = Element>,
{
    let mut members: HashSet<Element> = HashSet::from([group.identity()]);
    let mut kept: Vec<Element> = Vec::new();
    for g in generators {
        if members.contains(&g) {
            continue;
        }
        kept.push(g);
        // In a finite group the closure under right multiplication by the
        // generators is already closed under inverses.
        let mut queue: VecDeque<Element> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &gen in &kept {
                let y = group.mul(x, gen);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    let mut elements: Vec<Element> = members.into_iter().collect();
    elements.sort_unstable();
    Subgroup {
        elements,
        generators: kept,
    }
}

/// `[H, G]` for `H` normal in `G`: the normal closure of the commutators of
/// generators, iterated until conjugation by the generators of `G` adds
/// nothing, then checked against the generator commutators once more.
pub fn commutator_subgroup(group: &FiniteGroup, h: &Subgroup, g_gens: &[Element]) -> Subgroup {
    let seeds: Vec<Element> = h
        .generators()
        .iter()
        .flat_map(|&x| g_gens.iter().map(move |&y| (x, y)))
        .map(|(x, y)| group.commutator(x, y))
        .collect();
    let mut current = subgroup_closure(group, seeds.iter().copied());
    loop {
        let mut extra = Vec::new();
        for &n in current.generators() {
            for &y in g_gens {
                let conj = group.mul(group.mul(group.inv(y), n), y);
                if !current.contains(conj) {
                    extra.push(conj);
                }
            }
        }
        if extra.is_empty() {
            break;
        }
        current = subgroup_closure(group, current.generators().iter().copied().chain(extra));
    }
    debug_assert!(seeds.iter().all(|&c| current.contains(c)));
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closures() {
        let d4 = FiniteGroup::dihedral8();
        let trivial = subgroup_closure(&d4, [d4.identity()]);
        assert_eq!(trivial.order(), 1);
        assert!(trivial.generators().is_empty());

        let all = subgroup_closure(&d4, d4.elements());
        assert_eq!(all.order(), 8);
        assert!(all.verify_closed(&d4));

        // r^2 is encoded as 2.
        let center = subgroup_closure(&d4, [2]);
        assert_eq!(center.elements(), &[0, 2]);
        assert!(center.verify_closed(&d4));

        let rotations = subgroup_closure(&d4, [1]);
        assert_eq!(rotations.order(), 4);
        assert!(center.is_subset(&rotations));
    }

    #[test]
    fn commutator_subgroups() {
        let d4 = FiniteGroup::dihedral8();
        let whole = Subgroup::whole(&d4);
        let derived = commutator_subgroup(&d4, &whole, &d4.generators());
        assert_eq!(derived.elements(), &[0, 2]);

        let q8 = FiniteGroup::quaternion8();
        let derived = commutator_subgroup(&q8, &Subgroup::whole(&q8), &q8.generators());
        // {1, -1}
        assert_eq!(derived.elements(), &[0, 4]);

        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert!(commutator_subgroup(&c6, &Subgroup::whole(&c6), &c6.generators()).is_trivial());
    }

    #[test]
    fn commutator_matches_all_pairs() {
        // Against the closure of every commutator in C_3 Wr C_2.
        let g = FiniteGroup::wreath_product(&FiniteGroup::cyclic(3).unwrap(), &FiniteGroup::cyclic(2).unwrap(), 100)
            .unwrap();
        let derived = commutator_subgroup(&g, &Subgroup::whole(&g), &g.generators());
        let brute = subgroup_closure(
            &g,
            g.elements()
                .flat_map(|x| g.elements().map(move |y| (x, y)))
                .map(|(x, y)| g.commutator(x, y)),
        );
        assert_eq!(derived.elements(), brute.elements());
        assert_eq!(derived.order(), 3);
    }
}

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::abelian::AbelianPGroup;
use crate::error::{Error, Result};

/// Group elements are encoded as integers `0..order`; `0` is always the
/// identity.
pub type Element = u64;

pub const DEFAULT_SIZE_LIMIT: u64 = 1 << 20;

/// A finite group with an explicit, enumerable element universe.
///
/// Products and wreath products multiply on demand from their components;
/// only the small named groups carry a Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    name: String,
    order: u64,
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Cyclic(u64),
    Table {
        mul: Vec<Element>,
        gens: Vec<Element>,
    },
    Product(FiniteGroup, FiniteGroup),
    /// Elements are `(f, b)` with `f: B → A`, encoded as
    /// `b·|A|^{|B|} + Σ_x f(x)·|A|^x`.
    Wreath {
        base: FiniteGroup,
        top: FiniteGroup,
        base_size: u64,
    },
}

impl FiniteGroup {
    fn build(name: String, order: u64, kind: Kind) -> Self {
        Self {
            inner: Arc::new(Inner { name, order, kind }),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        Ok(Self::build(format!("C{n}"), n, Kind::Cyclic(n)))
    }

    pub fn trivial() -> Self {
        Self::build("1".into(), 1, Kind::Cyclic(1))
    }

    /// Builds a group from a Cayley table; `table[x * n + y] = x·y`.
    /// Element `0` must be the identity.
    pub fn from_table(name: &str, order: u64, table: Vec<Element>, gens: Vec<Element>) -> Result<Self> {
        let n = order as usize;
        if table.len() != n * n || table.iter().any(|&x| x >= order) {
            return Err(Error::InvalidGroup(format!("{name}: malformed Cayley table")));
        }
        for x in 0..n {
            if table[x] != x as u64 || table[x * n] != x as u64 {
                return Err(Error::InvalidGroup(format!("{name}: element 0 is not the identity")));
            }
        }
        Ok(Self::build(name.into(), order, Kind::Table { mul: table, gens }))
    }

    /// Dihedral group of order 8, elements `r^i s^j` encoded as `i + 4j`.
    pub fn dihedral8() -> Self {
        let mut table = vec![0; 64];
        for x in 0..8u64 {
            for y in 0..8u64 {
                let (i, a) = (x % 4, x / 4);
                let (k, b) = (y % 4, y / 4);
                // s r^k = r^{-k} s
                let rot = if a == 0 { (i + k) % 4 } else { (i + 4 - k) % 4 };
                table[(x * 8 + y) as usize] = rot + 4 * ((a + b) % 2);
            }
        }
        Self::from_table("D4", 8, table, vec![1, 4]).expect("valid dihedral table")
    }

    /// Quaternion group, elements `±1, ±i, ±j, ±k` encoded as `unit + 4·sign`.
    pub fn quaternion8() -> Self {
        // Products of units 1, i, j, k as (sign, unit).
        const UNIT: [[(u64, u64); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mut table = vec![0; 64];
        for x in 0..8u64 {
            for y in 0..8u64 {
                let (sign, unit) = UNIT[(x % 4) as usize][(y % 4) as usize];
                let sign = (sign + x / 4 + y / 4) % 2;
                table[(x * 8 + y) as usize] = unit + 4 * sign;
            }
        }
        Self::from_table("Q8", 8, table, vec![1, 2]).expect("valid quaternion table")
    }

    pub fn direct_product(left: &Self, right: &Self, limit: u64) -> Result<Self> {
        let order = BigUint::from(left.order()) * right.order();
        let order = check_size(order, limit)?;
        let name = format!("{}x{}", left.name(), right.name());
        Ok(Self::build(name, order, Kind::Product(left.clone(), right.clone())))
    }

    /// `A Wr B` with `B` acting on itself by right multiplication. For finite
    /// `B` the Cartesian and restricted wreath products coincide.
    pub fn wreath_product(base: &Self, top: &Self, limit: u64) -> Result<Self> {
        let coords = top.order();
        let base_size = BigUint::from(base.order()).pow(
            coords
                .to_u32()
                .ok_or_else(|| Error::InvalidGroup("top group too large".into()))?,
        );
        let order = check_size(&base_size * top.order(), limit)?;
        let name = format!("({})wr({})", base.name(), top.name());
        Ok(Self::build(
            name,
            order,
            Kind::Wreath {
                base: base.clone(),
                top: top.clone(),
                base_size: base_size.to_u64().expect("checked against the size limit"),
            },
        ))
    }

    /// Explicit realization `C_{p^{e_1}} × … × C_{p^{e_k}}`.
    pub fn from_abelian(group: &AbelianPGroup, limit: u64) -> Result<Self> {
        check_size(group.order(), limit)?;
        let mut factors = group.exponent_list().into_iter();
        let Some(first) = factors.next() else {
            return Ok(Self::trivial());
        };
        let mut out = Self::cyclic(group.p().pow(first))?;
        for e in factors {
            out = Self::direct_product(&out, &Self::cyclic(group.p().pow(e))?, limit)?;
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.inner.order
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        match &self.inner.kind {
            Kind::Cyclic(n) => (x + y) % n,
            Kind::Table { mul, .. } => mul[(x * self.inner.order + y) as usize],
            Kind::Product(left, right) => {
                let m = right.order();
                left.mul(x / m, y / m) * m + right.mul(x % m, y % m)
            }
            Kind::Wreath { base, top, base_size } => {
                let (f, b1) = (x % base_size, x / base_size);
                let (g, b2) = (y % base_size, y / base_size);
                let k = base.order();
                // (f, b1)(g, b2) = (x ↦ f(x)·g(x·b1), b1·b2)
                let mut out = 0;
                let mut place = 1;
                for coord in 0..top.order() {
                    let shifted = top.mul(coord, b1);
                    let value = base.mul(digit(f, coord, k), digit(g, shifted, k));
                    out += value * place;
                    place *= k;
                }
                top.mul(b1, b2) * base_size + out
            }
        }
    }

    pub fn inv(&self, x: Element) -> Element {
        match &self.inner.kind {
            Kind::Cyclic(n) => (n - x) % n,
            Kind::Table { mul, .. } => {
                let n = self.inner.order;
                (0..n)
                    .find(|&y| mul[(x * n + y) as usize] == 0)
                    .expect("every table element has an inverse")
            }
            Kind::Product(left, right) => {
                let m = right.order();
                left.inv(x / m) * m + right.inv(x % m)
            }
            Kind::Wreath { base, top, base_size } => {
                let (f, b) = (x % base_size, x / base_size);
                let b_inv = top.inv(b);
                let k = base.order();
                // g(y) = f(y·b^{-1})^{-1}
                let mut out = 0;
                let mut place = 1;
                for coord in 0..top.order() {
                    out += base.inv(digit(f, top.mul(coord, b_inv), k)) * place;
                    place *= k;
                }
                b_inv * base_size + out
            }
        }
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: Element, y: Element) -> Element {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    pub fn pow(&self, x: Element, mut k: u64) -> Element {
        let mut result = self.identity();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    pub fn element_order(&self, x: Element) -> u64 {
        let mut y = x;
        let mut n = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    /// A generating set of the whole group.
    pub fn generators(&self) -> Vec<Element> {
        match &self.inner.kind {
            Kind::Cyclic(1) => vec![],
            Kind::Cyclic(_) => vec![1],
            Kind::Table { gens, .. } => gens.clone(),
            Kind::Product(left, right) => {
                let m = right.order();
                left.generators()
                    .into_iter()
                    .map(|g| g * m)
                    .chain(right.generators())
                    .collect()
            }
            Kind::Wreath { base, top, base_size } => {
                // A sitting at the identity coordinate, together with B.
                base.generators()
                    .into_iter()
                    .chain(top.generators().into_iter().map(|b| b * base_size))
                    .collect()
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&x| gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }
}

fn digit(code: u64, coord: u64, radix: u64) -> u64 {
    (code / radix.pow(coord as u32)) % radix
}

fn check_size(required: BigUint, limit: u64) -> Result<u64> {
    match required.to_u64() {
        Some(n) if n <= limit => Ok(n),
        _ => Err(Error::SizeLimit { required, limit }),
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(g: &FiniteGroup) {
        let n = g.order();
        for x in 0..n {
            assert_eq!(g.mul(x, 0), x);
            assert_eq!(g.mul(0, x), x);
            assert_eq!(g.mul(x, g.inv(x)), 0);
            assert_eq!(g.mul(g.inv(x), x), 0);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn named_groups_satisfy_axioms() {
        check_axioms(&FiniteGroup::dihedral8());
        check_axioms(&FiniteGroup::quaternion8());
        check_axioms(&FiniteGroup::cyclic(6).unwrap());
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        check_axioms(&FiniteGroup::direct_product(&c2, &c3, 100).unwrap());
        check_axioms(&FiniteGroup::wreath_product(&c2, &c3, 100).unwrap());
        check_axioms(&FiniteGroup::wreath_product(&c3, &c2, 100).unwrap());
    }

    #[test]
    fn wreath_of_non_abelian_factors_is_associative() {
        let s3 = FiniteGroup::wreath_product(&FiniteGroup::cyclic(3).unwrap(), &FiniteGroup::cyclic(2).unwrap(), 100)
            .unwrap();
        let g =
            FiniteGroup::wreath_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::dihedral8(), 1 << 12).unwrap();
        assert_eq!(g.order(), 256 * 8);
        // Random-ish spot check on the larger group; full check on the smaller.
        check_axioms(&s3);
        let mut state = 12345u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) % g.order()
        };
        for _ in 0..2000 {
            let (x, y, z) = (next(), next(), next());
            assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }

    #[test]
    fn orders() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let v4 = FiniteGroup::direct_product(&c2, &c2, 100).unwrap();
        assert_eq!(FiniteGroup::wreath_product(&c2, &c2, 100).unwrap().order(), 8);
        assert_eq!(FiniteGroup::wreath_product(&c2, &v4, 100).unwrap().order(), 64);
        assert_eq!(FiniteGroup::wreath_product(&c2, &c4, 100).unwrap().order(), 64);
        assert_eq!(FiniteGroup::wreath_product(&c4, &c4, 2000).unwrap().order(), 1024);
        let trivial_top = FiniteGroup::wreath_product(&c4, &FiniteGroup::trivial(), 100).unwrap();
        assert_eq!(trivial_top.order(), 4);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(trivial_top.mul(x, y), c4.mul(x, y));
            }
        }
    }

    #[test]
    fn size_limit_reports_required_size() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let c9 = FiniteGroup::cyclic(9).unwrap();
        assert_eq!(
            FiniteGroup::wreath_product(&c3, &c9, DEFAULT_SIZE_LIMIT)
                .unwrap()
                .order(),
            177_147
        );
        let err = FiniteGroup::wreath_product(&c3, &c9, 100_000).unwrap_err();
        assert_eq!(
            err,
            Error::SizeLimit {
                required: BigUint::from(3u64.pow(9) * 9),
                limit: 100_000
            }
        );
        let huge = FiniteGroup::wreath_product(&c9, &FiniteGroup::cyclic(100).unwrap(), DEFAULT_SIZE_LIMIT);
        assert!(matches!(huge, Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn abelian_realization() {
        let g = FiniteGroup::from_abelian(&AbelianPGroup::new(2, &[3, 1, 1]).unwrap(), 1000).unwrap();
        assert_eq!(g.order(), 32);
        assert!(g.is_abelian());
        assert_eq!(g.elements().map(|x| g.element_order(x)).max(), Some(8));
        assert_eq!(
            FiniteGroup::from_abelian(&AbelianPGroup::trivial(3).unwrap(), 10)
                .unwrap()
                .order(),
            1
        );
        assert!(!FiniteGroup::dihedral8().is_abelian());
    }
}

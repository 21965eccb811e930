//! Finitely generated abelian groups presented as subquotients `A / B` of
//! lattices `B ⊆ A ⊆ Z^n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::zmat::{self, Int, Lattice, Mat};

/// Isomorphism type: free rank plus invariant factors (each `>= 2`, each
/// dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl AbGroup {
    pub fn zero() -> Self {
        AbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: Int) -> Self {
        AbGroup::from_parts(0, &[n])
    }

    /// Normalizes arbitrary cyclic orders into invariant factors.
    pub fn from_parts(free_rank: usize, orders: &[Int]) -> Self {
        let mut free_rank = free_rank;
        let mut rows: Vec<Int> = Vec::new();
        for &o in orders {
            match o.abs() {
                0 => free_rank += 1,
                1 => {}
                x => rows.push(x),
            }
        }
        if rows.is_empty() {
            return AbGroup { free_rank, torsion: Vec::new() };
        }
        let n = rows.len();
        let mut m = Mat::zeros(n, n);
        for (i, x) in rows.iter().enumerate() {
            m.set(i, i, *x);
        }
        let torsion = zmat::snf(&m).diagonal().into_iter().filter(|d| *d > 1).collect();
        AbGroup { free_rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(1, |a, b| zmat::mul(a, *b))
    }

    /// Order if finite.
    pub fn order(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().copied());
        AbGroup::from_parts(self.free_rank + other.free_rank, &orders)
    }

    /// `(free rank, torsion order)`: the invariant compared by order checks.
    pub fn rank_order(&self) -> (usize, Int) {
        (self.free_rank, self.torsion_order())
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            Ok(())
        };
        if self.free_rank > 0 {
            sep(f)?;
            if self.free_rank == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free_rank)?;
            }
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == d {
                j += 1;
            }
            sep(f)?;
            if j - i == 1 {
                write!(f, "Z/{}", d)?;
            } else {
                write!(f, "(Z/{})^{}", d, j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// The subquotient `num / den` with Smith-adapted generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub num: Lattice,
    pub den: Lattice,
    /// Generators in the ambient space, one per nontrivial invariant factor.
    pub gens: Vec<Vec<Int>>,
    /// Order of each generator; `0` means infinite.
    pub orders: Vec<Int>,
    /// Columns of `V` selecting canonical coordinates from `num` coordinates.
    coord_map: Mat,
}

impl Subquotient {
    pub fn new(num: &Lattice, den: &Lattice) -> Self {
        assert_eq!(num.dim, den.dim, "dimension mismatch");
        let k = num.rank();
        let rels: Vec<Vec<Int>> = den
            .basis()
            .iter()
            .map(|b| num.coords(b).expect("denominator not contained in numerator"))
            .collect();
        let (diag, v, v_inv) = if rels.is_empty() {
            (Vec::new(), Mat::identity(k), Mat::identity(k))
        } else {
            let s = zmat::snf(&Mat::from_rows(k, &rels));
            (s.diagonal(), s.v, s.v_inv)
        };
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut cols = Vec::new();
        for j in 0..k {
            let d = diag.get(j).copied().unwrap_or(0);
            if d == 1 {
                continue;
            }
            gens.push(zmat::combine(num.basis(), v_inv.row(j), num.dim));
            orders.push(d);
            cols.push(j);
        }
        let mut coord_map = Mat::zeros(k, cols.len());
        for (c, &j) in cols.iter().enumerate() {
            for i in 0..k {
                coord_map.set(i, c, v.get(i, j));
            }
        }
        Subquotient { num: num.clone(), den: den.clone(), gens, orders, coord_map }
    }

    pub fn group(&self) -> AbGroup {
        AbGroup::from_parts(0, &self.orders)
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| **o == 0).count()
    }

    pub fn order_finite(&self) -> Int {
        assert_eq!(self.free_rank(), 0, "infinite group has no finite order");
        self.orders.iter().fold(1, |a, b| zmat::mul(a, *b))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Canonical coordinates of `x` (torsion coordinates reduced), or `None`
    /// if `x` is not in the numerator.
    pub fn coords(&self, x: &[Int]) -> Option<Vec<Int>> {
        let c = self.num.coords(x)?;
        let mut out = self.coord_map.apply(&c);
        for (v, o) in out.iter_mut().zip(&self.orders) {
            if *o > 0 {
                *v = v.rem_euclid(*o);
            }
        }
        Some(out)
    }

    pub fn is_trivial_class(&self, x: &[Int]) -> bool {
        self.den.contains(x)
    }

    /// Matrix of the map induced by `f` (ambient row map) into `target`,
    /// in canonical coordinates. Panics if `f` does not carry `num` into
    /// `target.num` (well-definedness on `den` is checked too).
    pub fn induced(&self, f: &Mat, target: &Subquotient) -> Mat {
        let mut m = Mat::zeros(self.gens.len(), target.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let img = f.apply(g);
            let c = target.coords(&img).expect("map does not land in target numerator");
            for (j, v) in c.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        for b in self.den.basis() {
            assert!(target.den.contains(&f.apply(b)), "map not well defined on quotient");
        }
        m
    }

    /// Order of the class of `x`, `0` if infinite.
    pub fn element_order(&self, x: &[Int]) -> Int {
        let c = self.coords(x).expect("element not in numerator");
        let mut o: Int = 1;
        for (v, d) in c.iter().zip(&self.orders) {
            if *d == 0 {
                if *v != 0 {
                    return 0;
                }
            } else if *v != 0 {
                let k = d / zmat::gcd(*v, *d);
                o = o / zmat::gcd(o, k) * k;
            }
        }
        o
    }
}

/// Rank of a matrix over the rationals.
pub fn rank_of_map(m: &Mat) -> usize {
    zmat::hnf(m).1
}

pub fn zero_vec(n: usize) -> Vec<Int> {
    vec![0; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn invariant_factors_normalize() {
        let g = AbGroup::from_parts(1, &[4, 6, 1]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![2, 12]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(AbGroup::zero().to_string(), "0");
        assert_eq!(AbGroup::from_parts(0, &[2, 2, 2]).to_string(), "(Z/2)^3");
    }

    #[test]
    fn subquotient_coordinates() {
        let num = Lattice::full(2);
        let den = Lattice::from_gens(2, [vec![2, 0], vec![0, 4]]);
        let q = Subquotient::new(&num, &den);
        assert_eq!(q.group(), AbGroup::from_parts(0, &[2, 4]));
        assert_eq!(q.element_order(&[1, 1]), 4);
        assert_eq!(q.element_order(&[2, 4]), 1);
        assert!(q.is_trivial_class(&[2, 4]));
    }

    #[test]
    fn free_parts_survive() {
        let num = Lattice::full(3);
        let den = Lattice::from_gens(3, [vec![3, 0, 0]]);
        let q = Subquotient::new(&num, &den);
        assert_eq!(q.group(), AbGroup::from_parts(2, &[3]));
        assert_eq!(q.element_order(&[0, 1, 0]), 0);
    }
}

//! Unit groups of the truncated rings `R_K = Z[μ0]/(2, μ0)^K` and
//! `F_N = F2[μ0]/(μ0^N)` with their `C4` action, multiplicative `H¹`, the
//! Bockstein spectral sequences of the `2`-adic and `μ0`-adic filtrations,
//! and the algebraic Picard Mackey functor.
//!
//! The residue field is `F2`, so every unit is `≡ 1` modulo the maximal
//! ideal. Units are written additively through digit expansions in the
//! generators `1 + 2^a μ0^b` (resp. `1 + μ0^b`); squaring a generator gives
//! a triangular system of relations, so the presentation is exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::abgroup::{AbGroup, Subquotient};
use crate::cohomology::{self, stable_mackey, Coeffs, MackeyFunctor};
use crate::coeff::{MixedElt, ModTwoElt};
use crate::rep_ring::Group;
use crate::zmat::{self, Int, Lattice, Mat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    /// `Z[μ0]/(2, μ0)^K`
    Mixed(usize),
    /// `F2[μ0]/(μ0^N)`
    ModTwo(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Elt {
    M(MixedElt),
    T(ModTwoElt),
}

impl Elt {
    fn mul(&self, o: &Elt) -> Elt {
        match (self, o) {
            (Elt::M(a), Elt::M(b)) => Elt::M(a.mul(b)),
            (Elt::T(a), Elt::T(b)) => Elt::T(a.mul(b)),
            _ => unreachable!("mixed rings"),
        }
    }

    fn invert(&self) -> Result<Elt> {
        Ok(match self {
            Elt::M(a) => Elt::M(a.invert()?),
            Elt::T(a) => Elt::T(a.invert()?),
        })
    }

    fn gamma(&self) -> Elt {
        match self {
            Elt::M(a) => Elt::M(a.gamma()),
            Elt::T(a) => Elt::T(a.gamma()),
        }
    }
}

impl Ring {
    fn one(self) -> Elt {
        match self {
            Ring::Mixed(k) => Elt::M(MixedElt::one(k)),
            Ring::ModTwo(n) => Elt::T(ModTwoElt::one(n)),
        }
    }

    fn depth(self) -> usize {
        match self {
            Ring::Mixed(k) | Ring::ModTwo(k) => k,
        }
    }

    /// The comparison depth `2k + delta`. For `C4` acting through `C4/C2`
    /// the norm is `(u γu)²`, so the cocycle condition only sees half the
    /// precision of the ring and the deep side must be twice as deep.
    pub fn deepen(self, delta: usize) -> Ring {
        match self {
            Ring::Mixed(k) => Ring::Mixed(2 * k + delta),
            Ring::ModTwo(n) => Ring::ModTwo(2 * n + delta),
        }
    }

    /// `1 + 2^a μ0^b`.
    fn generator(self, (a, b): (u32, u32)) -> Elt {
        match self {
            Ring::Mixed(k) => {
                let mut c = vec![0; k];
                c[0] = 1;
                c[b as usize] += 1 << a;
                Elt::M(MixedElt::new(k, &c))
            }
            Ring::ModTwo(n) => {
                debug_assert_eq!(a, 0);
                let mut c = vec![0; n];
                c[0] = 1;
                c[b as usize] = 1;
                Elt::T(ModTwoElt::new(n, &c))
            }
        }
    }

    /// Monomials `2^a μ0^b` of the maximal ideal with `a ≥ min_a`, ordered
    /// by level `a + b`.
    fn monomials(self, min_a: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        match self {
            Ring::Mixed(k) => {
                for j in 1..k as u32 {
                    for b in 0..=j {
                        if j - b >= min_a {
                            out.push((j - b, b));
                        }
                    }
                }
            }
            Ring::ModTwo(n) => out.extend((1..n as u32).map(|b| (0, b))),
        }
        out
    }

    fn level(self, (a, b): (u32, u32)) -> u32 {
        a + b
    }

    /// Digit of `y − 1` at the monomial, for `y ≡ 1` modulo level `a + b`.
    fn digit(&self, y: &Elt, (a, b): (u32, u32)) -> bool {
        match y {
            Elt::M(m) => {
                let c = if b == 0 { m.c[0] - 1 } else { m.c[b as usize] };
                let k = m.depth() as i32;
                let c = c.rem_euclid(MixedElt::modulus(k as usize, b as usize));
                (c >> a) & 1 == 1
            }
            Elt::T(t) => t.bits[b as usize],
        }
    }
}

/// A unit group `Z^gens / rel` with the action of the generator of `C4`.
#[derive(Clone, Debug)]
pub struct UnitsGroup {
    pub ring: Ring,
    pub min_a: u32,
    pub gens: Vec<(u32, u32)>,
    pub coeffs: Coeffs,
}

impl UnitsGroup {
    /// All units (`min_a = 0`), or `U_{min_a} = 1 + 2^{min_a} R_K`.
    pub fn new(ring: Ring, min_a: u32) -> Result<Self> {
        let gens = ring.monomials(min_a);
        let mut g = UnitsGroup { ring, min_a, gens: gens.clone(), coeffs: Coeffs::trivial() };
        let dim = gens.len();
        let mut rel = Vec::with_capacity(dim);
        let mut gamma = Vec::with_capacity(dim);
        for (i, m) in gens.iter().enumerate() {
            let x = ring.generator(*m);
            let mut r = g.dlog(&x.mul(&x))?;
            r = zmat::vec_scale(&r, -1);
            r[i] += 2;
            rel.push(r);
            gamma.push(g.dlog(&x.gamma())?);
        }
        g.coeffs = Coeffs { dim, gamma: Mat::from_rows(dim, &gamma), rel: Lattice::from_gens(dim, rel), mu: None };
        Ok(g)
    }

    /// Exponents `e` with `x = Π g_i^{e_i}`.
    fn dlog(&self, x: &Elt) -> Result<Vec<Int>> {
        let mut e = vec![0; self.gens.len()];
        let mut y = x.clone();
        let mut i = 0;
        while i < self.gens.len() {
            let lvl = self.ring.level(self.gens[i]);
            let mut divisor = self.ring.one();
            // every monomial at this level is read off before dividing
            let mut j = i;
            while j < self.gens.len() && self.ring.level(self.gens[j]) == lvl {
                if self.ring.digit(&y, self.gens[j]) {
                    e[j] = 1;
                    divisor = divisor.mul(&self.ring.generator(self.gens[j]));
                }
                j += 1;
            }
            y = y.mul(&divisor.invert()?);
            i = j;
        }
        if y != self.ring.one() {
            return Err(Error::Inconsistent(alloc::string::String::from("unit outside the subgroup")));
        }
        Ok(e)
    }

    /// Coordinates of `(1 − μ0)^k`, the cocycle of the twisted module
    /// `E_{2k}`.
    pub fn twist_class(&self, k: u32) -> Result<Vec<Int>> {
        let base = match self.ring {
            Ring::Mixed(n) => Elt::M(MixedElt::new(n, &[1, -1])),
            Ring::ModTwo(n) => Elt::T(ModTwoElt::new(n, &[1, 1])),
        };
        let mut x = self.ring.one();
        for _ in 0..k {
            x = x.mul(&base);
        }
        self.dlog(&x)
    }

    /// Coordinates of `−1` (only in `R_K`).
    pub fn minus_one(&self) -> Result<Vec<Int>> {
        match self.ring {
            Ring::Mixed(n) => self.dlog(&Elt::M(MixedElt::new(n, &[-1]))),
            Ring::ModTwo(_) => Err(Error::Inconsistent(alloc::string::String::from("-1 = 1 in F_N"))),
        }
    }

    /// Matrix of the truncation `deep → self` on generators.
    pub fn projection_from(&self, deep: &UnitsGroup) -> Result<Mat> {
        let rows: Result<Vec<Vec<Int>>> = deep
            .gens
            .iter()
            .map(|m| {
                let x = deep.ring.generator(*m);
                let x = match x {
                    Elt::M(a) => Elt::M(a.truncate(self.ring.depth())),
                    Elt::T(t) => Elt::T(ModTwoElt::from_bits(t.bits[..self.ring.depth()].to_vec())),
                };
                self.dlog(&x)
            })
            .collect();
        Ok(Mat::from_rows(self.gens.len(), &rows?))
    }

    /// `U_n` (2-adic) or `V_n` (μ0-adic) inside this group.
    pub fn filtration(&self, n: u32) -> Lattice {
        let dim = self.gens.len();
        let gens = self.gens.iter().enumerate().filter(|(_, m)| match self.ring {
            Ring::Mixed(_) => m.0 >= n,
            Ring::ModTwo(_) => m.1 >= n,
        });
        self.coeffs.rel.add_gens(gens.map(|(i, _)| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        }))
    }

    pub fn order_log2(&self) -> usize {
        self.gens.len()
    }
}

/// Raw and stabilized `H¹` of a unit group.
#[derive(Clone, Debug)]
pub struct H1Units {
    pub raw_shallow: AbGroup,
    pub raw_deep: AbGroup,
    pub stable: AbGroup,
}

/// Stable Mackey functor `H¹(−, units)`: the image of the deep computation
/// in the shallow one.
pub fn stable_units_mackey(ring: Ring, min_a: u32, delta: usize) -> Result<(UnitsGroup, MackeyFunctor)> {
    let shallow = UnitsGroup::new(ring, min_a)?;
    let deep = UnitsGroup::new(ring.deepen(delta), min_a)?;
    let proj = shallow.projection_from(&deep)?;
    Ok((shallow.clone(), stable_mackey(&deep.coeffs, &shallow.coeffs, &proj, 0, 1)))
}

pub fn h1_units(group: Group, ring: Ring, min_a: u32, delta: usize) -> Result<H1Units> {
    let shallow = UnitsGroup::new(ring, min_a)?;
    let deep = UnitsGroup::new(ring.deepen(delta), min_a)?;
    let (_, mf) = stable_units_mackey(ring, min_a, delta)?;
    let idx = cohomology::LEVELS.iter().position(|g| *g == group).expect("level");
    Ok(H1Units {
        raw_shallow: cohomology::cohomology(&shallow.coeffs, group, 1),
        raw_deep: cohomology::cohomology(&deep.coeffs, group, 1),
        stable: mf.levels[idx].group(),
    })
}

/// The spectral sequence of the filtration `U_n` (or `V_n`) on the periodic
/// cochain complex of `C4`, indexed `[s][n − first]`.
#[derive(Clone, Debug)]
pub struct BocksteinChart {
    pub first: u32,
    pub last: u32,
    pub e1: Vec<Vec<AbGroup>>,
    pub e2: Vec<Vec<AbGroup>>,
    pub einf: Vec<Vec<AbGroup>>,
    /// Image of the deep `E∞` in the shallow one.
    pub stable_einf: Vec<Vec<AbGroup>>,
}

impl BocksteinChart {
    /// Order of the abutment read off the stable `E∞` row `s`.
    pub fn stable_total(&self, s: usize) -> Int {
        self.stable_einf[s].iter().map(|g| g.order().unwrap_or(0)).product()
    }
}

struct Filtered<'a> {
    g: &'a UnitsGroup,
    first: u32,
    top: u32,
    fils: Vec<Lattice>,
    ds: Vec<Mat>,
}

impl<'a> Filtered<'a> {
    fn new(g: &'a UnitsGroup, s_max: usize) -> Self {
        let first = match g.ring {
            Ring::Mixed(_) => g.min_a.max(1),
            Ring::ModTwo(_) => 1,
        };
        let top = g.ring.depth() as u32;
        let fils = (first..=top).map(|n| g.filtration(n)).collect();
        let ds = (0..=s_max + 1).map(|s| cohomology::differential(&g.coeffs, Group::C4, s)).collect();
        Filtered { g, first, top, fils, ds }
    }

    fn fil(&self, n: i64) -> Lattice {
        if n <= self.first as i64 {
            Lattice::full(self.g.coeffs.dim)
        } else if n > self.top as i64 {
            self.g.coeffs.rel.clone()
        } else {
            self.fils[(n - self.first as i64) as usize].clone()
        }
    }

    /// `F^p ∩ d⁻¹ F^{p+r}`; `r = None` means cocycles.
    fn z(&self, s: usize, p: i64, r: Option<i64>) -> Lattice {
        let to = match r {
            Some(r) => self.fil(p + r),
            None => self.g.coeffs.rel.clone(),
        };
        self.fil(p).preimage(&self.ds[s], &to)
    }

    /// `F^p ∩ d(F^{p−r+1})`; `r = None` means all coboundaries.
    fn b(&self, s: usize, p: i64, r: Option<i64>) -> Lattice {
        let rel = &self.g.coeffs.rel;
        if s == 0 {
            return rel.clone();
        }
        let src = match r {
            Some(r) => self.fil(p - r + 1),
            None => Lattice::full(self.g.coeffs.dim),
        };
        let gens = src.basis().iter().map(|v| self.ds[s - 1].apply(v)).collect::<Vec<_>>();
        rel.add_gens(gens).intersect(&self.fil(p))
    }

    /// Numerator and denominator of `E_r^{s,p}`.
    fn page(&self, s: usize, p: i64, r: Option<i64>) -> (Lattice, Lattice) {
        let num = self.z(s, p, r);
        let den = self.z(s, p + 1, r.map(|r| r - 1)).sum(&self.b(s, p, r));
        (num, den)
    }
}

/// Bockstein chart for `ring`, with the stable `E∞` taken against depth
/// `2k + delta`.
pub fn bockstein(ring: Ring, min_a: u32, delta: usize, s_max: usize) -> Result<BocksteinChart> {
    let shallow = UnitsGroup::new(ring, min_a)?;
    let deep = UnitsGroup::new(ring.deepen(delta), min_a)?;
    let proj = shallow.projection_from(&deep)?;
    let fs = Filtered::new(&shallow, s_max);
    let fd = Filtered::new(&deep, s_max);
    let (first, last) = (fs.first, fs.top);
    let grid = |f: &dyn Fn(usize, i64) -> AbGroup| -> Vec<Vec<AbGroup>> {
        (0..=s_max).map(|s| (first..=last).map(|n| f(s, n as i64)).collect()).collect()
    };
    let at = |r: Option<i64>| {
        grid(&|s, n| {
            let (num, den) = fs.page(s, n, r);
            Subquotient::new(&num, &den).group()
        })
    };
    let stable_einf = grid(&|s, n| {
        let num = fd.z(s, n, None);
        let (_, den) = fs.page(s, n, None);
        let img = den.add_gens(num.basis().iter().map(|v| proj.apply(v)).collect::<Vec<_>>());
        Subquotient::new(&img, &den).group()
    });
    Ok(BocksteinChart { first, last, e1: at(Some(1)), e2: at(Some(2)), einf: at(None), stable_einf })
}

/// The algebraic Picard Mackey functor `H¹(−, E0^×)` with checks.
#[derive(Clone, Debug)]
pub struct PicAlg {
    pub mackey: MackeyFunctor,
    pub groups: [AbGroup; 3],
    pub res_surjective: bool,
    pub tr_is_double: bool,
    /// Order of the class of `E_2` in the top level.
    pub twist_order: Int,
    /// `E_{2k}` has no invariant generator for `k = 1, 2, 3` and is trivial
    /// for `k = 4`.
    pub twist_witnesses: [bool; 4],
}

pub fn pic_alg_mackey(k: usize, delta: usize) -> Result<PicAlg> {
    let (shallow, mf) = stable_units_mackey(Ring::Mixed(k), 0, delta)?;
    let groups = mf.groups();
    let top = &mf.levels[0];
    let mid = &mf.levels[1];
    let res_img = cohomology::image_group(&mf.res_top_mid, mid);
    let res_surjective = res_img == groups[1];
    let doubled = mf.res_top_mid.mul(&mf.tr_mid_top);
    let tr_is_double = cohomology::same_map(&doubled, &Mat::scalar(top.gens.len(), 2), top);
    let (z, b) = cohomology::cocycles_coboundaries(&shallow.coeffs, Group::C4, 1);
    let mut witnesses = [false; 4];
    for (i, w) in witnesses.iter_mut().enumerate() {
        let c = shallow.twist_class(i as u32 + 1)?;
        let cocycle = z.contains(&c);
        let trivial = b.contains(&c);
        *w = cocycle && (trivial == (i == 3));
    }
    let e2 = shallow.twist_class(1)?;
    let twist_order = if top.num.contains(&e2) { top.element_order(&e2) } else { 0 };
    Ok(PicAlg { groups, res_surjective, tr_is_double, twist_order, twist_witnesses: witnesses, mackey: mf })
}

/// The fixed points of `R_K` map onto the stable fixed points of `R_K / 2`
/// (those that lift to fixed points of a deeper `R / 2`).
pub fn fixed_points_surject(k: usize, delta: usize) -> bool {
    let deep = 2 * k + delta;
    let gam = |n: usize| -> Mat {
        let rows: Vec<Vec<Int>> = (0..n)
            .map(|i| {
                let mut c = vec![0; n];
                c[i] = 1;
                MixedElt::new(n, &c).gamma().c
            })
            .collect();
        Mat::from_rows(n, &rows)
    };
    let rel = |n: usize| Lattice::from_gens(n, (0..n).map(|i| {
        let mut v = vec![0; n];
        v[i] = MixedElt::modulus(n, i);
        v
    }));
    let fixed = |n: usize, target: &Lattice| Lattice::full(n).preimage(&gam(n).sub(&Mat::identity(n)), target);
    let red = |from: usize, to: usize| {
        let mut m = Mat::zeros(from, to);
        for i in 0..to {
            m.set(i, i, 1);
        }
        m
    };
    let two = |n: usize| Lattice::scalar(n, 2).sum(&rel(n));
    let fix_deep = fixed(deep, &rel(deep));
    let fix_mod2_deep = fixed(deep, &two(deep));
    let stable_mod2 = two(k).add_gens(fix_mod2_deep.basis().iter().map(|v| red(deep, k).apply(v)));
    let img = two(k).add_gens(fix_deep.basis().iter().map(|v| red(deep, k).apply(v)));
    img.contains_lattice(&stable_mod2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations_have_the_right_order() {
        // |R_K^×| = |R_K| / 2 and |U_1| = |2 R_K|
        let k = 6;
        let total: usize = (0..k).map(|i| k - i).sum();
        let g = UnitsGroup::new(Ring::Mixed(k), 0).unwrap();
        let sq = Subquotient::new(&Lattice::full(g.coeffs.dim), &g.coeffs.rel);
        assert_eq!(sq.order_finite(), 1 << (total - 1));
        let u1 = UnitsGroup::new(Ring::Mixed(k), 1).unwrap();
        let sq = Subquotient::new(&Lattice::full(u1.coeffs.dim), &u1.coeffs.rel);
        assert_eq!(sq.order_finite(), 1 << (total - k));
        let f = UnitsGroup::new(Ring::ModTwo(7), 0).unwrap();
        let sq = Subquotient::new(&Lattice::full(f.coeffs.dim), &f.coeffs.rel);
        assert_eq!(sq.order_finite(), 1 << 6);
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let g = UnitsGroup::new(Ring::Mixed(5), 0).unwrap();
        let x = Elt::M(MixedElt::new(5, &[3, 2, 7]));
        let y = Elt::M(MixedElt::new(5, &[5, 1, 0, 3]));
        let lhs = g.dlog(&x.mul(&y)).unwrap();
        let rhs = zmat::vec_add(&g.dlog(&x).unwrap(), &g.dlog(&y).unwrap());
        assert!(g.coeffs.rel.contains(&zmat::vec_sub(&lhs, &rhs)));
        // γ is an automorphism of order two on E0
        let gg = g.coeffs.gamma.pow(2);
        for i in 0..g.coeffs.dim {
            let mut e = vec![0; g.coeffs.dim];
            e[i] = 1;
            assert!(g.coeffs.rel.contains(&zmat::vec_sub(&gg.apply(&e), &e)));
        }
    }
}

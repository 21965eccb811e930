//! Cohomology of `C4`, `C2` and the trivial group through the 2-periodic
//! resolution, with restriction and transfer obtained by lifting the
//! identity between resolutions.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::abgroup::{AbGroup, Subquotient};
use crate::modules::C4Module;
use crate::rep_ring::Group;
use crate::zmat::{self, Int, Lattice, Mat};

/// A `C4`-module `Z^dim / rel` with generator action `gamma`.
#[derive(Clone, Debug)]
pub struct Coeffs {
    pub dim: usize,
    pub gamma: Mat,
    pub rel: Lattice,
    /// Multiplication by `μ`, when the module is a `Λ`-module.
    pub mu: Option<Mat>,
}

impl Coeffs {
    pub fn new(gamma: Mat) -> Self {
        let dim = gamma.rows;
        Coeffs { dim, gamma, rel: Lattice::zero(dim), mu: None }
    }

    pub fn from_module(m: &C4Module) -> Self {
        Coeffs { dim: m.dim(), gamma: m.gamma.clone(), rel: Lattice::zero(m.dim()), mu: Some(m.mu_matrix()) }
    }

    /// The trivial module `Z`.
    pub fn trivial() -> Self {
        Coeffs::new(Mat::identity(1))
    }

    /// `M / k M`.
    pub fn quotient(&self, k: Int) -> Self {
        let mut c = self.clone();
        c.rel = self.rel.sum(&Lattice::scalar(self.dim, k));
        c
    }

    /// Action of the generator of `h`.
    pub fn action(&self, h: Group) -> Mat {
        match h {
            Group::C4 => self.gamma.clone(),
            Group::C2 => self.gamma.pow(2),
            Group::Trivial => Mat::identity(self.dim),
        }
    }

    /// Action of a group ring element `Σ a_i g^i` of `Z[h]`.
    pub fn ring_action(&self, h: Group, a: &[Int]) -> Mat {
        let g = self.action(h);
        let mut out = Mat::zeros(self.dim, self.dim);
        let mut p = Mat::identity(self.dim);
        for c in a {
            if *c != 0 {
                out = out.add(&p.scale(*c));
            }
            p = p.mul(&g);
        }
        out
    }
}

/// Group ring element `g - 1`.
fn minus_one(n: usize) -> Vec<Int> {
    let mut v = vec![0; n];
    v[0] -= 1;
    v[1 % n] += 1;
    v
}

fn norm(n: usize) -> Vec<Int> {
    vec![1; n]
}

/// Boundary `∂_s` of the periodic resolution as a group ring element.
pub fn boundary(n: usize, s: usize) -> Vec<Int> {
    assert!(s >= 1);
    if s % 2 == 1 {
        minus_one(n)
    } else {
        norm(n)
    }
}

/// Multiplication in `Z[C_n]`.
pub fn ring_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    let n = a.len();
    let mut out = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            out[(i + j) % n] = zmat::add(out[(i + j) % n], zmat::mul(a[i], b[j]));
        }
    }
    out
}

/// Matrix of `x -> x * a` on `Z[C_n]`.
fn ring_mul_matrix(a: &[Int]) -> Mat {
    let n = a.len();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, (i + j) % n, a[j]);
        }
    }
    m
}

/// Embeds `Z[H]` into `Z[G]` where `h = g^k`.
fn embed(a: &[Int], n: usize) -> Vec<Int> {
    let k = n / a.len();
    let mut out = vec![0; n];
    for (i, c) in a.iter().enumerate() {
        out[i * k] = *c;
    }
    out
}

/// The cochain differential `C^s -> C^{s+1}` for the subgroup `h`.
pub fn differential(m: &Coeffs, h: Group, s: usize) -> Mat {
    m.ring_action(h, &boundary(h.size(), s + 1))
}

/// `H^s(h, M)` as a subquotient of `Z^dim` (classes of cocycles).
pub fn cohomology_sq(m: &Coeffs, h: Group, s: usize) -> Subquotient {
    let (z, b) = cocycles_coboundaries(m, h, s);
    Subquotient::new(&z, &b)
}

/// Cocycles and coboundaries in `Z^dim`, both containing `rel`.
pub fn cocycles_coboundaries(m: &Coeffs, h: Group, s: usize) -> (Lattice, Lattice) {
    let d = differential(m, h, s);
    let z = Lattice::full(m.dim).preimage(&d, &m.rel);
    let b = if s == 0 {
        m.rel.clone()
    } else {
        let d = differential(m, h, s - 1);
        m.rel.add_gens((0..m.dim).map(|i| d.row(i).to_vec()))
    };
    (z, b)
}

pub fn cohomology(m: &Coeffs, h: Group, s: usize) -> AbGroup {
    cohomology_sq(m, h, s).group()
}

/// Chain map `Q → Res P` over the identity, `Q` the resolution for `h`
/// and `P` the one for `g`; returns the image of the generator in each
/// degree `0..=s_max` as an element of `Z[g]`.
pub fn res_lift(g: Group, h: Group, s_max: usize) -> Vec<Vec<Int>> {
    let n = g.size();
    let nh = h.size();
    let mut out: Vec<Vec<Int>> = Vec::with_capacity(s_max + 1);
    let mut one = vec![0; n];
    one[0] = 1;
    out.push(one);
    for s in 1..=s_max {
        // a_s ∂^G_s = a_{s-1} ∂^H_s
        let target = ring_mul(&out[s - 1], &embed(&boundary(nh, s), n));
        let a = zmat::solve_left(&ring_mul_matrix(&boundary(n, s)), &target)
            .expect("lifting problem for a free resolution must be solvable");
        out.push(a);
    }
    out
}

/// Chain map `Res P → Q` over the identity. In degree `s` it is the
/// `Z[h]`-linear map `Z[g] → Z[h]` given as an `n × n_h` matrix whose row
/// `i` is the image of `g^i`.
pub fn tr_lift(g: Group, h: Group, s_max: usize) -> Vec<Mat> {
    let n = g.size();
    let nh = h.size();
    let k = n / nh;
    let expand = |coset_images: &[Vec<Int>]| -> Mat {
        let mut m = Mat::zeros(n, nh);
        for j in 0..k {
            for i in 0..nh {
                // g^{j + k i} = h^i g^j
                let img = ring_mul(&unit(nh, i), &coset_images[j]);
                for (c, v) in img.iter().enumerate() {
                    m.set(j + k * i, c, *v);
                }
            }
        }
        m
    };
    let mut out = Vec::with_capacity(s_max + 1);
    // degree 0: every coset representative maps to 1
    out.push(expand(&vec![unit(nh, 0); k]));
    for s in 1..=s_max {
        let prev: &Mat = &out[s - 1];
        let dg = boundary(n, s);
        let dh = ring_mul_matrix(&boundary(nh, s));
        let mut images = Vec::with_capacity(k);
        for j in 0..k {
            // G_s(g^j) ∂^H_s = G_{s-1}(g^j ∂^G_s)
            let x = ring_mul(&unit(n, j), &dg);
            let target = prev.apply(&x);
            let c = zmat::solve_left(&dh, &target).expect("lifting problem for a free resolution must be solvable");
            images.push(c);
        }
        out.push(expand(&images));
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![0; n];
    v[i % n] = 1;
    v
}

/// Restriction `C^s(g, M) → C^s(h, M)` on cochains.
pub fn res_cochain(m: &Coeffs, g: Group, h: Group, s: usize) -> Mat {
    let a = &res_lift(g, h, s)[s];
    m.ring_action(g, a)
}

/// Transfer `C^s(h, M) → C^s(g, M)` on cochains:
/// `m ↦ Σ_j g^j · G_s(g^{-j}) m` over coset representatives `g^j`.
pub fn tr_cochain(m: &Coeffs, h: Group, g: Group, s: usize) -> Mat {
    let n = g.size();
    let k = n / h.size();
    let gs = &tr_lift(g, h, s)[s];
    let mut out = Mat::zeros(m.dim, m.dim);
    for j in 0..k {
        let inv = (n - j) % n;
        let hpart = m.ring_action(h, gs.row(inv));
        let gj = m.ring_action(g, &unit(n, j));
        out = out.add(&hpart.mul(&gj));
    }
    out
}

/// Cup product of cochains of degrees `p` and `q` for the subgroup `h`,
/// given the actions on the two factors and a bilinear pairing.
pub fn cup(
    h: Group,
    p: usize,
    q: usize,
    a: (&[Int], &Mat),
    b: (&[Int], &Mat),
    pair: &dyn Fn(&[Int], &[Int]) -> Vec<Int>,
) -> Vec<Int> {
    if p % 2 == 0 || q % 2 == 0 {
        return pair(a.0, b.0);
    }
    let n = h.size();
    let mut ga: Vec<Vec<Int>> = vec![a.0.to_vec()];
    let mut gb: Vec<Vec<Int>> = vec![b.0.to_vec()];
    for i in 1..n {
        ga.push(a.1.apply(&ga[i - 1]));
        gb.push(b.1.apply(&gb[i - 1]));
    }
    let mut acc: Option<Vec<Int>> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let t = pair(&ga[i], &gb[j]);
            acc = Some(match acc {
                None => t,
                Some(x) => zmat::vec_add(&x, &t),
            });
        }
    }
    acc.unwrap_or_else(|| zmat::vec_scale(&pair(a.0, b.0), 0))
}

/// Levels `[C4, C2, e]` of a Mackey functor with structure maps in the
/// canonical coordinates of each level.
#[derive(Clone, Debug)]
pub struct MackeyFunctor {
    pub levels: [Subquotient; 3],
    pub res_top_mid: Mat,
    pub res_mid_bot: Mat,
    pub tr_mid_top: Mat,
    pub tr_bot_mid: Mat,
    pub weyl_mid: Mat,
    pub weyl_bot: Mat,
}

pub const LEVELS: [Group; 3] = [Group::C4, Group::C2, Group::Trivial];

impl MackeyFunctor {
    pub fn groups(&self) -> [AbGroup; 3] {
        [self.levels[0].group(), self.levels[1].group(), self.levels[2].group()]
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.is_zero())
    }

    /// Double coset and index identities.
    pub fn check(&self) -> core::result::Result<(), String> {
        let top = &self.levels[0];
        let mid = &self.levels[1];
        let bot = &self.levels[2];
        let eq = |a: &Mat, b: &Mat, target: &Subquotient, what: &str| -> core::result::Result<(), String> {
            if same_map(a, b, target) {
                Ok(())
            } else {
                Err(alloc::format!("{what} fails"))
            }
        };
        let n_mid = mid.gens.len();
        let n_bot = bot.gens.len();
        // res ∘ tr on the middle level is 1 + γ
        eq(&self.tr_mid_top.mul(&self.res_top_mid), &Mat::identity(n_mid).add(&self.weyl_mid), mid, "res tr at C2")?;
        eq(&self.tr_bot_mid.mul(&self.res_mid_bot), &Mat::identity(n_bot).add(&self.weyl_bot.pow(2)), bot, "res tr at e")?;
        eq(&self.res_top_mid.mul(&self.tr_mid_top), &Mat::scalar(top.gens.len(), 2), top, "tr res at C4")?;
        eq(&self.res_mid_bot.mul(&self.tr_bot_mid), &Mat::scalar(n_mid, 2), mid, "tr res at C2")?;
        eq(&self.res_top_mid.mul(&self.weyl_mid), &self.res_top_mid, mid, "res lands in invariants")?;
        eq(&self.weyl_mid.mul(&self.tr_mid_top), &self.tr_mid_top, top, "tr kills the Weyl action")?;
        eq(&self.res_mid_bot.mul(&self.weyl_bot), &self.weyl_mid.mul(&self.res_mid_bot), bot, "Weyl equivariance of res")?;
        Ok(())
    }
}

/// Compares two maps into `target` in canonical coordinates.
pub fn same_map(a: &Mat, b: &Mat, target: &Subquotient) -> bool {
    if a.rows != b.rows || a.cols != b.cols {
        return false;
    }
    for i in 0..a.rows {
        for (j, o) in target.orders.iter().enumerate() {
            let d = a.get(i, j) - b.get(i, j);
            let ok = if *o == 0 { d == 0 } else { d.rem_euclid(*o) == 0 };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Isomorphism type of the image of a map in canonical coordinates.
pub fn image_group(f: &Mat, target: &Subquotient) -> AbGroup {
    let gens: Vec<Vec<Int>> = (0..f.rows).map(|i| zmat::combine(&target.gens, f.row(i), target.num.dim)).collect();
    let num = target.den.add_gens(gens);
    Subquotient::new(&num, &target.den).group()
}

/// Cocycle data for one level: numerator and denominator lattices.
#[derive(Clone, Debug)]
pub struct LevelData {
    pub z: Lattice,
    pub b: Lattice,
}

fn assemble(m: &Coeffs, s: usize, levels: [LevelData; 3]) -> MackeyFunctor {
    let sq: Vec<Subquotient> = levels.iter().map(|l| Subquotient::new(&l.z, &l.b)).collect();
    let res_tm = res_cochain(m, Group::C4, Group::C2, s);
    let res_mb = res_cochain(m, Group::C2, Group::Trivial, s);
    let tr_mt = tr_cochain(m, Group::C2, Group::C4, s);
    let tr_bm = tr_cochain(m, Group::Trivial, Group::C2, s);
    let g = m.gamma.clone();
    MackeyFunctor {
        res_top_mid: sq[0].induced(&res_tm, &sq[1]),
        res_mid_bot: sq[1].induced(&res_mb, &sq[2]),
        tr_mid_top: sq[1].induced(&tr_mt, &sq[0]),
        tr_bot_mid: sq[2].induced(&tr_bm, &sq[1]),
        weyl_mid: sq[1].induced(&g, &sq[1]),
        weyl_bot: sq[2].induced(&g, &sq[2]),
        levels: [sq[0].clone(), sq[1].clone(), sq[2].clone()],
    }
}

/// `H^s(-, M)` as a Mackey functor at the module's own truncation.
pub fn mackey_cohomology(m: &Coeffs, s: usize) -> MackeyFunctor {
    let levels = LEVELS.map(|h| {
        let (z, b) = cocycles_coboundaries(m, h, s);
        LevelData { z, b }
    });
    assemble(m, s, levels)
}

/// Truncation-stable cohomology: cocycles that lift to depth `M₂` are
/// projected to depth `M₁`, and the result is reduced modulo `μ^n`.
/// `deep` is the module at `M₂`, `shallow` at `M₁`, `proj` the projection.
pub fn stable_mackey(deep: &Coeffs, shallow: &Coeffs, proj: &Mat, n: usize, s: usize) -> MackeyFunctor {
    let levels = LEVELS.map(|h| {
        let (z2, _) = cocycles_coboundaries(deep, h, s);
        let (_, b1) = cocycles_coboundaries(shallow, h, s);
        let zs = z2.image(proj).sum(&b1);
        let den = match &shallow.mu {
            Some(mu) if n > 0 => b1.sum(&zs.image(&mu.pow(n as u32))),
            _ => b1,
        };
        LevelData { z: zs, b: den }
    });
    assemble(shallow, s, levels)
}

/// Modules without `μ`, realized at depth one.
pub fn is_w_family(name: &str) -> bool {
    name.starts_with('W')
}

/// Stable Mackey cohomology of a dictionary module evaluated at `n`.
pub fn stable_named(name: &str, n: usize, delta: usize, s: usize) -> crate::Result<MackeyFunctor> {
    if is_w_family(name) {
        let m = Coeffs::from_module(&crate::modules::make_named(name, 1)?);
        return Ok(mackey_cohomology(&m, s));
    }
    let m1 = n + 2;
    let m2 = m1 + delta;
    let deep = crate::modules::make_named(name, m2)?;
    let shallow = Coeffs::from_module(&crate::modules::make_named(name, m1)?);
    Ok(stable_mackey(&Coeffs::from_module(&deep), &shallow, &deep.projection(m1), n, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::make_named;

    fn named(name: &str, depth: usize) -> Coeffs {
        Coeffs::from_module(&make_named(name, depth).unwrap())
    }

    #[test]
    fn periodic_complex_squares_to_zero() {
        let m = named("A(-)", 4);
        for h in LEVELS {
            for s in 0..4 {
                assert!(differential(&m, h, s).mul(&differential(&m, h, s + 1)).is_zero());
            }
        }
    }

    #[test]
    fn lifts_are_the_familiar_maps() {
        // odd degrees restrict through 1 + g, even degrees through 1
        let r = res_lift(Group::C4, Group::C2, 4);
        assert_eq!(r[1], vec![1, 1, 0, 0]);
        assert_eq!(r[2], vec![1, 0, 0, 0]);
        let w = Coeffs::trivial();
        for s in [0, 2, 4] {
            let tr = tr_cochain(&w, Group::C2, Group::C4, s);
            let res = res_cochain(&w, Group::C4, Group::C2, s);
            let sq = cohomology_sq(&w, Group::C4, s);
            let comp = sq.induced(&res.mul(&tr), &sq);
            assert!(same_map(&comp, &Mat::scalar(sq.gens.len(), 2), &sq), "s = {s}");
        }
    }

    #[test]
    fn small_groups() {
        let w = Coeffs::trivial();
        assert_eq!(cohomology(&w, Group::C4, 2), AbGroup::cyclic(4));
        assert_eq!(cohomology(&w, Group::C4, 1), AbGroup::zero());
        let wm = named("W-", 1);
        assert_eq!(cohomology(&wm, Group::C4, 1), AbGroup::cyclic(2));
        assert_eq!(cohomology(&wm, Group::C4, 2), AbGroup::zero());
        // the naive truncation has a boundary class that stabilization removes
        assert_eq!(cohomology(&named("A(+)", 5), Group::C4, 1), AbGroup::cyclic(2));
        let st = stable_named("A(+)", 5, 2, 1).unwrap();
        assert!(st.is_zero());
        let st = stable_named("A(+)", 5, 2, 2).unwrap();
        assert_eq!(st.groups()[0], AbGroup::from_parts(0, &[4, 2, 2, 2, 2]));
        st.check().unwrap();
    }

    #[test]
    fn mackey_of_w_in_degree_two() {
        let mf = mackey_cohomology(&Coeffs::trivial(), 2);
        assert_eq!(mf.groups(), [AbGroup::cyclic(4), AbGroup::cyclic(2), AbGroup::zero()]);
        mf.check().unwrap();
    }
}

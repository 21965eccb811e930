//! `C4`-modules that are free of finite rank over `Λ_N`, stored through
//! their underlying integer lattices.
//!
//! Integer coordinates are blocked by `Λ`-basis element: index `j * N + i`
//! is `μ^i b_j`. Maps act on row vectors.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{LambdaElt, QuadElt};
use crate::rep_ring::Group;
use crate::zmat::{self, Int, Lattice, Mat};
use crate::{Error, Result};

pub const DICTIONARY: [&str; 8] = ["W", "W-", "W[C4/C2]", "W[C4/C2]-", "A", "A-", "A(+)", "A(-)"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C4Module {
    pub name: String,
    pub depth: usize,
    pub labels: Vec<String>,
    /// Action of the generator on `Λ`-coordinates.
    pub gamma_lambda: Vec<Vec<LambdaElt>>,
    /// The same action on integer coordinates.
    pub gamma: Mat,
}

/// Integer matrix of a `Λ`-matrix acting on row vectors.
pub fn lambda_to_z(m: &[Vec<LambdaElt>], depth: usize) -> Mat {
    let r = m.len();
    let c = m.first().map_or(0, |row| row.len());
    let mut out = Mat::zeros(r * depth, c * depth);
    for j in 0..r {
        for k in 0..c {
            let e = &m[j][k];
            for i in 0..depth {
                // μ^i * e contributes to μ^{i+p} b_k
                for (p, coef) in e.c.iter().enumerate() {
                    if i + p < depth && *coef != 0 {
                        out.set(j * depth + i, k * depth + i + p, *coef);
                    }
                }
            }
        }
    }
    out
}

impl C4Module {
    pub fn new(name: &str, depth: usize, labels: &[&str], gamma_lambda: Vec<Vec<LambdaElt>>) -> Self {
        let gamma = lambda_to_z(&gamma_lambda, depth);
        C4Module {
            name: name.to_string(),
            depth,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            gamma_lambda,
            gamma,
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.rank() * self.depth
    }

    /// Multiplication by `μ`.
    pub fn mu_matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.dim(), self.dim());
        for j in 0..self.rank() {
            for i in 0..self.depth - 1 {
                m.set(j * self.depth + i, j * self.depth + i + 1, 1);
            }
        }
        m
    }

    /// Projection onto the same module at a shallower depth.
    pub fn projection(&self, to_depth: usize) -> Mat {
        assert!(to_depth <= self.depth);
        let mut m = Mat::zeros(self.dim(), self.rank() * to_depth);
        for j in 0..self.rank() {
            for i in 0..to_depth {
                m.set(j * self.depth + i, j * to_depth + i, 1);
            }
        }
        m
    }

    /// `μ^k M` as a sublattice.
    pub fn mu_power_lattice(&self, k: usize) -> Lattice {
        let gens = (0..self.rank()).flat_map(|j| {
            (k..self.depth).map(move |i| {
                let mut v = vec![0; self.rank() * self.depth];
                v[j * self.depth + i] = 1;
                v
            })
        });
        Lattice::from_gens(self.dim(), gens.collect::<Vec<_>>())
    }

    /// Action of the generator of the subgroup.
    pub fn action(&self, h: Group) -> Mat {
        match h {
            Group::C4 => self.gamma.clone(),
            Group::C2 => self.gamma.pow(2),
            Group::Trivial => Mat::identity(self.dim()),
        }
    }

    pub fn restrict_module(&self, h: Group) -> Mat {
        self.action(h)
    }
}

fn l(n: usize, coeffs: &[Int]) -> LambdaElt {
    LambdaElt::from_coeffs(n, coeffs)
}

pub fn make_named(name: &str, depth: usize) -> Result<C4Module> {
    let n = depth;
    let z = || l(n, &[]);
    let one = || l(n, &[1]);
    let neg = || l(n, &[-1]);
    let m = match name {
        "W" => C4Module::new(name, n, &["1"], vec![vec![one()]]),
        "W-" => C4Module::new(name, n, &["1"], vec![vec![neg()]]),
        "W[C4/C2]" | "A" => C4Module::new(name, n, &["e", "ge"], vec![vec![z(), one()], vec![one(), z()]]),
        "W[C4/C2]-" | "A-" => C4Module::new(name, n, &["e", "ge"], vec![vec![z(), one()], vec![neg(), z()]]),
        // γ(∗) = ∗, γ(e) = μ∗ − e
        "A(+)" => C4Module::new(name, n, &["*", "e"], vec![vec![one(), z()], vec![l(n, &[0, 1]), neg()]]),
        // γ(∗) = −∗, γ(e) = e + 2∗ − μ∗
        "A(-)" => C4Module::new(name, n, &["*", "e"], vec![vec![neg(), z()], vec![l(n, &[2, -1]), one()]]),
        other => return Err(Error::UnknownModule(other.to_string())),
    };
    Ok(m)
}

/// `E_t` together with its identification with a dictionary module.
#[derive(Clone, Debug)]
pub struct HomotopyModule {
    pub t: i64,
    pub module: C4Module,
    /// Name of the isomorphic dictionary module.
    pub named: &'static str,
    /// Dictionary module coordinates to `E_t` coordinates, equivariant.
    pub iso: Mat,
    /// Named elements of `E_t` as integer vectors.
    pub dictionary: Vec<(String, Vec<Int>)>,
}

/// Splits `t = 8l + t0` with `t0 ∈ {0, 2, 4, 6}`.
pub fn split_degree(t: i64) -> (i64, i64) {
    (t.div_euclid(8), t.rem_euclid(8))
}

/// The twist: `γ(f Δ₁^l r^{k0}) = γ(f) (1 − μ₀)^{k0} Δ₁^l r^{k0}` in the
/// basis `{Δ₁^l r^{k0}, μ₀ Δ₁^l r^{k0}}`, since `Δ₁` is invariant.
pub fn e_gamma(depth: usize, k0: i64) -> Mat {
    let tw = QuadElt::twist(depth, k0);
    QuadElt::gamma_matrix(depth).mul(&tw.mul_matrix())
}

pub fn homotopy_module(t: i64, depth: usize) -> Result<HomotopyModule> {
    if t % 2 != 0 {
        return Err(Error::OddDegree);
    }
    let n = depth;
    let (l, t0) = split_degree(t);
    let k0 = t0 / 2;
    let gamma = e_gamma(n, k0);
    let suffix = |s: &str| -> String {
        if l == 0 {
            s.to_string()
        } else {
            alloc::format!("{s} D1^{l}")
        }
    };
    let rlabel = match k0 {
        0 => String::from("1"),
        1 => String::from("r10"),
        k => alloc::format!("r10^{k}"),
    };
    let labels = [suffix(&rlabel), suffix(&alloc::format!("mu0 {rlabel}"))];
    let module = C4Module {
        name: alloc::format!("E_{t}"),
        depth: n,
        labels: labels.to_vec(),
        gamma_lambda: Vec::new(),
        gamma: gamma.clone(),
    };
    let q = |x: &QuadElt| x.to_vec();
    let one = QuadElt::one(n);
    let mu0 = QuadElt::mu0(n);
    let om = one.sub(&mu0);
    let gam = |v: &QuadElt| QuadElt::from_vec(&gamma.apply(&v.to_vec()));
    // images of the dictionary basis
    let (named, images, mut dictionary): (&'static str, [QuadElt; 2], Vec<(String, Vec<Int>)>) = match k0 {
        0 => ("A(+)", [one.clone(), mu0.clone()], vec![(suffix("1"), q(&one)), (suffix("mu0"), q(&mu0))]),
        1 => {
            let r11 = gam(&one);
            ("A-", [one.clone(), r11.clone()], vec![(suffix("r10"), q(&one)), (suffix("r11"), q(&r11))])
        }
        2 => {
            // δ₁ = r10 r11 = (1 − μ₀) r², Σ₂₀ = r10²
            let delta1 = om.clone();
            (
                "A(-)",
                [delta1.clone(), one.clone()],
                vec![(suffix("delta1"), q(&delta1)), (suffix("Sigma20"), q(&one))],
            )
        }
        _ => {
            let x = om.clone();
            let gx = gam(&x);
            ("A-", [x.clone(), gx.clone()], vec![(suffix("delta1 r10"), q(&x)), (suffix("gamma(delta1 r10)"), q(&gx))])
        }
    };
    if k0 == 2 {
        // Σ₂₁ = −r11² and T₂ = Σ₂₀ − Σ₂₁
        let sigma21 = gam(&one).neg();
        dictionary.push((suffix("Sigma21"), q(&sigma21)));
        dictionary.push((suffix("T2"), q(&one.sub(&sigma21))));
    }
    if k0 == 0 {
        // Δ₁ itself in the basis of E_{8l}
        dictionary.push((suffix("D1"), q(&one)));
    }
    let iso = Mat::from_rows(2 * n, &[images[0].clone(), images[1].clone()].iter().map(|x| x.to_vec()).collect::<Vec<_>>());
    // iso is a Λ-matrix on the two basis elements; expand over Λ
    let iso = expand_lambda_images(&iso, n);
    Ok(HomotopyModule { t, module, named, iso, dictionary })
}

/// Given images of the two `Λ`-basis vectors (at `μ^0`), builds the full
/// integer matrix by `Λ`-linearity.
fn expand_lambda_images(images: &Mat, n: usize) -> Mat {
    let mut out = Mat::zeros(images.rows * n, images.cols);
    for j in 0..images.rows {
        let base = QuadElt::from_vec(images.row(j));
        for i in 0..n {
            let v = base.scale_lambda(&LambdaElt::mu_pow(n, i)).to_vec();
            for (c, x) in v.iter().enumerate() {
                out.set(j * n + i, c, *x);
            }
        }
    }
    out
}

impl HomotopyModule {
    /// Checks that `iso` is invertible and commutes with the actions.
    pub fn verify_iso(&self) -> Result<()> {
        let named = make_named(self.named, self.module.depth)?;
        let lhs = named.gamma.mul(&self.iso);
        let rhs = self.iso.mul(&self.module.gamma);
        if lhs != rhs {
            return Err(Error::Inconsistent(alloc::format!("E_{} iso is not equivariant", self.t)));
        }
        if self.iso.det().abs() != 1 {
            return Err(Error::Inconsistent(alloc::format!("E_{} iso is not invertible", self.t)));
        }
        Ok(())
    }

    pub fn element(&self, name: &str) -> Option<&Vec<Int>> {
        self.dictionary.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Multiplication `E_a × E_b → E_{a+b}` in the adapted bases.
pub fn e_product(depth: usize, a: (i64, &QuadElt), b: (i64, &QuadElt)) -> (i64, QuadElt) {
    let (_, a0) = split_degree(a.0);
    let (_, b0) = split_degree(b.0);
    let mut p = a.1.mul(b.1);
    if a0 + b0 >= 8 {
        // r^4 = Δ₁ (1 − μ₀)^{-2}
        p = p.mul(&QuadElt::twist(depth, -2));
    }
    (a.0 + b.0, p)
}

/// `Z^n` with `n = dim`; convenience for callers building lattices.
pub fn full_lattice(m: &C4Module) -> Lattice {
    Lattice::full(m.dim())
}

pub fn is_identity(m: &Mat) -> bool {
    *m == Mat::identity(m.rows)
}

pub fn negated_identity(n: usize) -> Mat {
    Mat::scalar(n, -1)
}

pub fn vec_in(v: &[Int], lat: &Lattice) -> bool {
    lat.contains(v)
}

pub fn zero(n: usize) -> Vec<Int> {
    zmat::vec_scale(&vec![0; n], 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictionary_orders() {
        for name in DICTIONARY {
            let m = make_named(name, 4).unwrap();
            assert!(is_identity(&m.gamma.pow(4)), "{name}");
        }
        for name in ["A", "A(+)", "A(-)"] {
            assert!(is_identity(&make_named(name, 4).unwrap().gamma.pow(2)));
        }
        assert_eq!(make_named("A-", 4).unwrap().gamma.pow(2), negated_identity(8));
        assert!(make_named("B", 3).is_err());
    }

    #[test]
    fn defining_relations() {
        let n = 4;
        let p = make_named("A(+)", n).unwrap();
        // μ∗ = e + γ(e)
        let e = [0, 0, 0, 0, 1, 0, 0, 0];
        let mu_star = [0, 1, 0, 0, 0, 0, 0, 0];
        assert_eq!(zmat::vec_add(&e, &p.gamma.apply(&e)), mu_star.to_vec());
        let m = make_named("A(-)", n).unwrap();
        // μ∗ = e − γ(e) + 2∗
        let two_star = [2, 0, 0, 0, 0, 0, 0, 0];
        let lhs = zmat::vec_add(&zmat::vec_sub(&e, &m.gamma.apply(&e)), &two_star);
        assert_eq!(lhs, mu_star.to_vec());
    }

    #[test]
    fn homotopy_modules_match_dictionary() {
        for t in [-16, -10, -4, 0, 2, 4, 6, 8, 10, 12, 14, 22] {
            let h = homotopy_module(t, 4).unwrap();
            h.verify_iso().unwrap();
        }
        assert_eq!(homotopy_module(0, 4).unwrap().named, "A(+)");
        assert_eq!(homotopy_module(2, 4).unwrap().named, "A-");
        assert_eq!(homotopy_module(4, 4).unwrap().named, "A(-)");
        assert_eq!(homotopy_module(10, 4).unwrap().module.gamma, homotopy_module(2, 4).unwrap().module.gamma);
        assert_eq!(homotopy_module(3, 4).unwrap_err(), Error::OddDegree);
    }

    #[test]
    fn restriction_actions() {
        let e2 = homotopy_module(2, 5).unwrap();
        assert_eq!(e2.module.action(Group::C2), negated_identity(10));
        assert!(is_identity(&make_named("A", 3).unwrap().action(Group::C2)));
        assert!(is_identity(&make_named("W-", 3).unwrap().action(Group::C2)));
    }

    #[test]
    fn table_one_in_e4() {
        let n = 5;
        let h = homotopy_module(4, n).unwrap();
        let g = &h.module.gamma;
        let d = h.element("delta1").unwrap();
        assert_eq!(g.apply(d), zmat::vec_scale(d, -1));
        let s20 = h.element("Sigma20").unwrap();
        let s21 = h.element("Sigma21").unwrap();
        assert_eq!(g.apply(s20), zmat::vec_scale(s21, -1));
    }
}

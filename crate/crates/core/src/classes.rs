//! Named cohomology classes of `E_*` at the top and middle levels, with
//! cup products, restriction and transfer on explicit cocycles.

use alloc::string::String;
use alloc::vec::Vec;

use crate::coeff::QuadElt;
use crate::cohomology::{self, Coeffs};
use crate::modules::{e_gamma, e_product, split_degree};
use crate::rep_ring::Group;
use crate::zmat::{self, Int, Lattice, Mat};
use crate::{Error, Result};

/// A cochain of degree `s` for `level` with values in `E_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub t: i64,
    pub s: usize,
    pub level: Group,
    pub v: Vec<Int>,
}

/// `E_t` at a fixed truncation depth.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub depth: usize,
}

impl Ctx {
    pub fn new(depth: usize) -> Self {
        Ctx { depth }
    }

    pub fn coeffs(&self, t: i64) -> Coeffs {
        let (_, t0) = split_degree(t);
        let g = e_gamma(self.depth, t0 / 2);
        let mut c = Coeffs::new(g);
        c.mu = Some(QuadElt::mu(self.depth).mul_matrix());
        c
    }

    pub fn elt(&self, t: i64, s: usize, level: Group, q: &QuadElt) -> Class {
        Class { t, s, level, v: q.to_vec() }
    }

    pub fn one(&self, level: Group) -> Class {
        self.elt(0, 0, level, &QuadElt::one(self.depth))
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        assert_eq!((a.t, a.s, a.level), (b.t, b.s, b.level), "adding classes of different degrees");
        Class { v: zmat::vec_add(&a.v, &b.v), ..a.clone() }
    }

    pub fn sub(&self, a: &Class, b: &Class) -> Class {
        self.add(a, &self.scale(b, -1))
    }

    pub fn scale(&self, a: &Class, k: Int) -> Class {
        Class { v: zmat::vec_scale(&a.v, k), ..a.clone() }
    }

    pub fn mul(&self, a: &Class, b: &Class) -> Class {
        assert_eq!(a.level, b.level);
        let n = self.depth;
        let ga = self.coeffs(a.t).action(a.level);
        let gb = self.coeffs(b.t).action(b.level);
        let (ta, tb) = (a.t, b.t);
        let pair = move |x: &[Int], y: &[Int]| -> Vec<Int> {
            e_product(n, (ta, &QuadElt::from_vec(x)), (tb, &QuadElt::from_vec(y))).1.to_vec()
        };
        let v = cohomology::cup(a.level, a.s, b.s, (&a.v, &ga), (&b.v, &gb), &pair);
        Class { t: a.t + b.t, s: a.s + b.s, level: a.level, v }
    }

    pub fn pow(&self, a: &Class, e: u32) -> Class {
        let mut acc = self.one(a.level);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn res(&self, a: &Class) -> Class {
        let to = below(a.level);
        let m = cohomology::res_cochain(&self.coeffs(a.t), a.level, to, a.s);
        Class { level: to, v: m.apply(&a.v), ..a.clone() }
    }

    pub fn tr(&self, a: &Class) -> Class {
        let to = above(a.level);
        let m = cohomology::tr_cochain(&self.coeffs(a.t), a.level, to, a.s);
        Class { level: to, v: m.apply(&a.v), ..a.clone() }
    }

    /// The Weyl action of the generator.
    pub fn gamma(&self, a: &Class) -> Class {
        Class { v: self.coeffs(a.t).gamma.apply(&a.v), ..a.clone() }
    }

    pub fn is_cocycle(&self, a: &Class) -> bool {
        let (z, _) = cohomology::cocycles_coboundaries(&self.coeffs(a.t), a.level, a.s);
        z.contains(&a.v)
    }

    pub fn coboundaries(&self, t: i64, s: usize, level: Group) -> Lattice {
        cohomology::cocycles_coboundaries(&self.coeffs(t), level, s).1
    }

    /// Equality in cohomology.
    pub fn same(&self, a: &Class, b: &Class) -> bool {
        (a.t, a.s, a.level) == (b.t, b.s, b.level) && self.coboundaries(a.t, a.s, a.level).contains(&zmat::vec_sub(&a.v, &b.v))
    }

    pub fn is_zero(&self, a: &Class) -> bool {
        self.coboundaries(a.t, a.s, a.level).contains(&a.v)
    }

    /// A cocycle at `level` whose restriction equals `target` in cohomology.
    pub fn solve_res(&self, level: Group, target: &Class) -> Option<Class> {
        let c = self.coeffs(target.t);
        let (z, _) = cohomology::cocycles_coboundaries(&c, level, target.s);
        let r = cohomology::res_cochain(&c, level, target.level, target.s);
        let b = self.coboundaries(target.t, target.s, target.level);
        let mut rows: Vec<Vec<Int>> = z.basis().iter().map(|x| r.apply(x)).collect();
        let k = rows.len();
        rows.extend(b.basis().iter().cloned());
        let sol = zmat::solve_left(&Mat::from_rows(c.dim, &rows), &target.v)?;
        let v = zmat::combine(z.basis(), &sol[..k], c.dim);
        Some(Class { t: target.t, s: target.s, level, v })
    }
}

fn below(g: Group) -> Group {
    match g {
        Group::C4 => Group::C2,
        _ => Group::Trivial,
    }
}

fn above(g: Group) -> Group {
    match g {
        Group::Trivial => Group::C2,
        _ => Group::C4,
    }
}

/// The named generators.
#[derive(Clone, Debug)]
pub struct Named {
    pub mu: Class,
    pub mu0: Class,
    pub mu1: Class,
    pub eta0: Class,
    pub eta1: Class,
    pub sigma20: Class,
    pub sigma21: Class,
    pub delta1: Class,
    pub d1: Class,
    pub d1_inv: Class,
    pub t2: Class,
    pub eta: Class,
    pub varsigma: Class,
    pub nu: Class,
    pub varpi: Class,
}

impl Named {
    /// Builds the classes at `ctx.depth`. `ν` is read off the stable
    /// cohomology computed with a deeper module of `extra` more terms.
    pub fn build(ctx: &Ctx, extra: usize) -> Result<Named> {
        let n = ctx.depth;
        let (c4, c2) = (Group::C4, Group::C2);
        let one = QuadElt::one(n);
        let mu0q = QuadElt::mu0(n);
        let mu = ctx.elt(0, 0, c4, &QuadElt::mu(n));
        let mu0 = ctx.elt(0, 0, c2, &mu0q);
        let mu1 = ctx.elt(0, 0, c2, &mu0q.gamma());
        let eta0 = ctx.elt(2, 1, c2, &one);
        let eta1 = ctx.gamma(&eta0);
        let sigma20 = ctx.elt(4, 0, c2, &one);
        let sigma21 = ctx.scale(&ctx.gamma(&sigma20), -1);
        let delta1 = ctx.elt(4, 0, c2, &one.sub(&mu0q));
        let d1 = ctx.elt(8, 0, c4, &one);
        let d1_inv = ctx.elt(-8, 0, c4, &one);
        let t2 = ctx.tr(&sigma20);
        let eta = ctx.tr(&eta0);
        let varsigma = ctx.tr(&ctx.mul(&eta1, &sigma20));
        let nu = stable_generator(ctx, 4, 1, extra)?;
        let target = ctx.mul(&sigma20, &ctx.pow(&eta1, 2));
        let varpi = ctx
            .solve_res(c4, &target)
            .ok_or_else(|| Error::Inconsistent(String::from("no class restricts to Sigma20 eta1^2")))?;
        Ok(Named { mu, mu0, mu1, eta0, eta1, sigma20, sigma21, delta1, d1, d1_inv, t2, eta, varsigma, nu, varpi })
    }
}

/// Generator of the top level of the stable `H^s(C4, E_t)`, assumed cyclic.
fn stable_generator(ctx: &Ctx, t: i64, s: usize, extra: usize) -> Result<Class> {
    let deep = Ctx::new(ctx.depth + extra);
    let n = ctx.depth;
    let m = deep.depth;
    let mut proj = Mat::zeros(2 * m, 2 * n);
    for b in 0..2 {
        for i in 0..n {
            proj.set(b * m + i, b * n + i, 1);
        }
    }
    let mf = cohomology::stable_mackey(&deep.coeffs(t), &ctx.coeffs(t), &proj, n, s);
    let top = &mf.levels[0];
    if top.gens.len() != 1 {
        return Err(Error::Inconsistent(alloc::format!("stable H^{s}(C4, E_{t}) is not cyclic")));
    }
    Ok(Class { t, s, level: Group::C4, v: top.gens[0].clone() })
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

fn check(out: &mut Vec<Check>, name: &str, ok: bool) {
    out.push(Check { name: String::from(name), ok });
}

/// Restriction formulas, as cocycle identities.
pub fn restriction_checks(ctx: &Ctx, c: &Named) -> Vec<Check> {
    let mut out = Vec::new();
    let r = |x: &Class| ctx.res(x);
    check(&mut out, "res(mu) = mu0 + mu1", ctx.same(&r(&c.mu), &ctx.add(&c.mu0, &c.mu1)));
    check(&mut out, "res(eta) = eta0 + eta1", ctx.same(&r(&c.eta), &ctx.add(&c.eta0, &c.eta1)));
    check(&mut out, "res(D1) = delta1^2", ctx.same(&r(&c.d1), &ctx.pow(&c.delta1, 2)));
    let s20e1 = ctx.mul(&c.sigma20, &ctx.pow(&c.eta1, 2));
    let s21e0 = ctx.scale(&ctx.mul(&c.sigma21, &ctx.pow(&c.eta0, 2)), -1);
    check(
        &mut out,
        "res(varpi) = Sigma20 eta1^2 = -Sigma21 eta0^2",
        ctx.same(&r(&c.varpi), &s20e1) && ctx.same(&s20e1, &s21e0),
    );
    check(&mut out, "res(T2) = Sigma20 - Sigma21", ctx.same(&r(&c.t2), &ctx.sub(&c.sigma20, &c.sigma21)));
    let rs = ctx.mul(&ctx.add(&c.eta0, &c.eta1), &c.delta1);
    check(&mut out, "res(varsigma) = (eta0 + eta1) delta1", ctx.same(&r(&c.varsigma), &rs));
    check(&mut out, "res(nu) = 0", !ctx.is_zero(&c.nu) && ctx.is_zero(&r(&c.nu)));
    let lhs = r(&ctx.mul(&c.d1_inv, &ctx.pow(&c.varpi, 2)));
    check(&mut out, "res(D1^-1 varpi^2) = (eta0 eta1)^2", ctx.same(&lhs, &ctx.pow(&ctx.mul(&c.eta0, &c.eta1), 2)));
    out
}

/// Transfer formulas, as cocycle identities.
pub fn transfer_checks(ctx: &Ctx, c: &Named) -> Vec<Check> {
    let mut out = Vec::new();
    let t = |x: &Class| ctx.tr(x);
    check(&mut out, "tr(mu0) = mu", ctx.same(&t(&c.mu0), &c.mu));
    check(&mut out, "tr(Sigma20) = T2", ctx.same(&t(&c.sigma20), &c.t2));
    check(&mut out, "tr(eta1 Sigma20) = varsigma", ctx.same(&t(&ctx.mul(&c.eta1, &c.sigma20)), &c.varsigma));
    check(&mut out, "tr(eta0) = eta", ctx.same(&t(&c.eta0), &c.eta));
    check(&mut out, "tr(eta0 eta1) = 0", ctx.is_zero(&t(&ctx.mul(&c.eta0, &c.eta1))));
    let lhs = t(&ctx.mul(&ctx.pow(&c.eta0, 2), &c.eta1));
    let rhs = ctx.mul(&ctx.mul(&c.varsigma, &c.varpi), &c.d1_inv);
    check(&mut out, "tr(eta0^2 eta1) = varsigma varpi D1^-1", ctx.same(&lhs, &rhs));
    check(&mut out, "tr(1) = 2", ctx.same(&t(&ctx.one(Group::C2)), &ctx.scale(&ctx.one(Group::C4), 2)));
    out
}

/// Relations among the top-level generators used by the spectral
/// sequence normal form.
pub fn relation_checks(ctx: &Ctx, c: &Named) -> Vec<Check> {
    let mut out = Vec::new();
    let m = |a: &Class, b: &Class| ctx.mul(a, b);
    let zero = |x: &Class| ctx.is_zero(x);
    check(&mut out, "2 eta = 2 nu = 2 varsigma = 0", zero(&ctx.scale(&c.eta, 2)) && zero(&ctx.scale(&c.nu, 2)) && zero(&ctx.scale(&c.varsigma, 2)));
    check(&mut out, "4 varpi = 0, 2 varpi != 0", zero(&ctx.scale(&c.varpi, 4)) && !zero(&ctx.scale(&c.varpi, 2)));
    let mu2 = m(&c.mu, &c.mu);
    let poly = ctx.add(&ctx.sub(&mu2, &ctx.scale(&c.mu, 4)), &ctx.scale(&ctx.one(Group::C4), 8));
    check(&mut out, "T2^2 = D1 (mu^2 - 4 mu + 8)", ctx.same(&m(&c.t2, &c.t2), &m(&c.d1, &poly)));
    let d1e2 = m(&c.d1, &m(&c.eta, &c.eta));
    check(
        &mut out,
        "D1 eta^2 = T2 varpi = varsigma^2",
        ctx.same(&d1e2, &m(&c.t2, &c.varpi)) && ctx.same(&d1e2, &m(&c.varsigma, &c.varsigma)),
    );
    check(&mut out, "T2 varsigma = mu D1 eta", ctx.same(&m(&c.t2, &c.varsigma), &m(&c.mu, &m(&c.d1, &c.eta))));
    check(&mut out, "T2 eta = mu varsigma", ctx.same(&m(&c.t2, &c.eta), &m(&c.mu, &c.varsigma)));
    check(&mut out, "varsigma eta = mu varpi", ctx.same(&m(&c.varsigma, &c.eta), &m(&c.mu, &c.varpi)));
    check(&mut out, "nu^2 = 2 varpi", ctx.same(&m(&c.nu, &c.nu), &ctx.scale(&c.varpi, 2)));
    check(
        &mut out,
        "mu nu = eta nu = T2 nu = varsigma nu = 0",
        [&c.mu, &c.eta, &c.t2, &c.varsigma].iter().all(|x| zero(&m(x, &c.nu))),
    );
    let rhs = m(&c.mu, &m(&c.varsigma, &m(&c.varpi, &c.d1_inv)));
    check(&mut out, "eta^3 = mu varsigma varpi D1^-1", ctx.same(&ctx.pow(&c.eta, 3), &rhs));
    out
}

/// The classes defined as transfers each generate their group over `Λ`.
pub fn generator_checks(ctx: &Ctx, c: &Named, extra: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, x) in [("T2", &c.t2), ("eta", &c.eta), ("varsigma", &c.varsigma)] {
        let ok = generates(ctx, x, extra);
        check(&mut out, &alloc::format!("{name} generates its group"), ok);
    }
    out
}

/// Whether the `Λ`-multiples of `x` exhaust the stable top group.
fn generates(ctx: &Ctx, x: &Class, extra: usize) -> bool {
    let deep = Ctx::new(ctx.depth + extra);
    let n = ctx.depth;
    let m = deep.depth;
    let mut proj = Mat::zeros(2 * m, 2 * n);
    for b in 0..2 {
        for i in 0..n {
            proj.set(b * m + i, b * n + i, 1);
        }
    }
    let mf = cohomology::stable_mackey(&deep.coeffs(x.t), &ctx.coeffs(x.t), &proj, n, x.s);
    let top = &mf.levels[0];
    let mu = ctx.coeffs(x.t).mu.expect("E_t has a μ action");
    let mut gens = Vec::new();
    let mut y = x.v.clone();
    for _ in 0..n {
        gens.push(y.clone());
        y = mu.apply(&y);
    }
    if !gens.iter().all(|g| top.num.contains(g)) {
        return false;
    }
    top.den.add_gens(gens).contains_lattice(&top.num)
}

/// Frobenius identity `tr(res(a) x) = a tr(x)` on sampled pairs.
pub fn frobenius_checks(ctx: &Ctx, c: &Named, samples: usize, seed: u64) -> Vec<Check> {
    let tops = [&c.mu, &c.eta, &c.t2, &c.varsigma, &c.nu, &c.varpi, &c.d1];
    let mids = [&c.mu0, &c.eta0, &c.eta1, &c.sigma20, &c.delta1, &c.sigma21];
    let mut state = seed | 1;
    let mut next = |k: usize| -> usize {
        // xorshift64
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % k as u64) as usize
    };
    let mut out = Vec::new();
    for _ in 0..samples {
        let a = tops[next(tops.len())];
        let x1 = mids[next(mids.len())];
        let x2 = mids[next(mids.len())];
        let x = ctx.mul(x1, x2);
        let lhs = ctx.tr(&ctx.mul(&ctx.res(a), &x));
        let rhs = ctx.mul(a, &ctx.tr(&x));
        let name = alloc::format!("Frobenius (t {}, s {}) x (t {}, s {})", a.t, a.s, x.t, x.s);
        check(&mut out, &name, ctx.same(&lhs, &rhs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_classes_are_cocycles() {
        let ctx = Ctx::new(5);
        let c = Named::build(&ctx, 2).unwrap();
        for x in [&c.mu, &c.eta0, &c.eta1, &c.sigma20, &c.t2, &c.eta, &c.varsigma, &c.nu, &c.varpi, &c.d1] {
            assert!(ctx.is_cocycle(x), "{x:?}");
        }
    }
}

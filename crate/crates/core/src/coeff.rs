//! Truncated coefficient rings.
//!
//! * [`LambdaElt`]: `Λ_N = Z[μ]/(μ^N)`.
//! * [`QuadElt`]: `Λ_N{1, μ₀}` with `μ₀² = μμ₀ − μ + 2`, a model of
//!   `W[[μ₀]]/(μ^N)` free of rank two over `Λ_N`.
//! * [`MixedElt`]: `Z[μ₀]/(2, μ₀)^K`.
//! * [`ModTwoElt`]: `F₂[x]/(x^N)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::zmat::{self, Int};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaElt {
    pub c: Vec<Int>,
}

impl LambdaElt {
    pub fn zero(n: usize) -> Self {
        LambdaElt { c: vec![0; n] }
    }

    pub fn constant(n: usize, k: Int) -> Self {
        let mut e = LambdaElt::zero(n);
        if n > 0 {
            e.c[0] = k;
        }
        e
    }

    pub fn one(n: usize) -> Self {
        LambdaElt::constant(n, 1)
    }

    /// `μ^k`
    pub fn mu_pow(n: usize, k: usize) -> Self {
        let mut e = LambdaElt::zero(n);
        if k < n {
            e.c[k] = 1;
        }
        e
    }

    /// From low-order coefficients; extra terms are truncated.
    pub fn from_coeffs(n: usize, coeffs: &[Int]) -> Self {
        let mut e = LambdaElt::zero(n);
        for (i, x) in coeffs.iter().enumerate().take(n) {
            e.c[i] = *x;
        }
        e
    }

    pub fn depth(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        zmat::is_zero(&self.c)
    }

    pub fn add(&self, o: &Self) -> Self {
        LambdaElt { c: zmat::vec_add(&self.c, &o.c) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LambdaElt { c: zmat::vec_sub(&self.c, &o.c) }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: Int) -> Self {
        LambdaElt { c: zmat::vec_scale(&self.c, k) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.depth();
        let mut out = vec![0; n];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                if *b != 0 {
                    out[i + j] = zmat::add(out[i + j], zmat::mul(*a, *b));
                }
            }
        }
        LambdaElt { c: out }
    }

    /// Multiplication by `μ^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.depth();
        let mut out = vec![0; n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.c[i];
        }
        LambdaElt { c: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = LambdaElt::one(self.depth());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_unit(&self) -> bool {
        self.c.first().map_or(false, |c| c.abs() == 1)
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        // u = c0 (1 - m) with m nilpotent
        let c0 = self.c[0];
        let n = self.depth();
        let m = LambdaElt::one(n).sub(&self.scale(c0));
        let mut sum = LambdaElt::one(n);
        let mut p = LambdaElt::one(n);
        for _ in 1..n {
            p = p.mul(&m);
            sum = sum.add(&p);
        }
        Ok(sum.scale(c0))
    }

    /// Projection to a shallower depth.
    pub fn truncate(&self, n: usize) -> Self {
        LambdaElt::from_coeffs(n, &self.c)
    }
}

/// `a + b μ₀` over `Λ_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElt {
    pub a: LambdaElt,
    pub b: LambdaElt,
}

impl QuadElt {
    pub fn new(a: LambdaElt, b: LambdaElt) -> Self {
        assert_eq!(a.depth(), b.depth());
        QuadElt { a, b }
    }

    pub fn zero(n: usize) -> Self {
        QuadElt::new(LambdaElt::zero(n), LambdaElt::zero(n))
    }

    pub fn constant(n: usize, k: Int) -> Self {
        QuadElt::new(LambdaElt::constant(n, k), LambdaElt::zero(n))
    }

    pub fn one(n: usize) -> Self {
        QuadElt::constant(n, 1)
    }

    pub fn mu0(n: usize) -> Self {
        QuadElt::new(LambdaElt::zero(n), LambdaElt::one(n))
    }

    pub fn mu(n: usize) -> Self {
        QuadElt::from_lambda(&LambdaElt::mu_pow(n, 1))
    }

    pub fn from_lambda(a: &LambdaElt) -> Self {
        QuadElt::new(a.clone(), LambdaElt::zero(a.depth()))
    }

    pub fn depth(&self) -> usize {
        self.a.depth()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElt::new(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadElt::new(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: Int) -> Self {
        QuadElt::new(self.a.scale(k), self.b.scale(k))
    }

    pub fn scale_lambda(&self, l: &LambdaElt) -> Self {
        QuadElt::new(self.a.mul(l), self.b.mul(l))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.depth();
        let bd = self.b.mul(&o.b);
        // bd μ₀² = bd (μ μ₀ − μ + 2)
        let two_minus_mu = LambdaElt::from_coeffs(n, &[2, -1]);
        let a = self.a.mul(&o.a).add(&bd.mul(&two_minus_mu));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a)).add(&bd.shift(1));
        QuadElt::new(a, b)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = QuadElt::one(self.depth());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// The ring involution `μ₀ ↦ μ − μ₀`, fixing `μ`.
    pub fn gamma(&self) -> Self {
        QuadElt::new(self.a.add(&self.b.shift(1)), self.b.neg())
    }

    /// `x γ(x)`, which lies in `Λ_N`.
    pub fn norm(&self) -> LambdaElt {
        let p = self.mul(&self.gamma());
        debug_assert!(p.b.is_zero());
        p.a
    }

    pub fn invert(&self) -> Result<Self> {
        let ninv = self.norm().invert()?;
        Ok(self.gamma().scale_lambda(&ninv))
    }

    /// `(1 − μ₀)^k` for any integer `k`.
    pub fn twist(n: usize, k: i64) -> Self {
        let base = QuadElt::one(n).sub(&QuadElt::mu0(n));
        let base = if k < 0 { base.invert().expect("1 - μ₀ is a unit") } else { base };
        base.pow(k.unsigned_abs() as u32)
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn rem(&self, m: Int) -> Self {
        let r = |x: &LambdaElt| LambdaElt { c: x.c.iter().map(|v| v.rem_euclid(m)).collect() };
        QuadElt::new(r(&self.a), r(&self.b))
    }

    /// Integer coordinates `[a_0..a_{N-1}, b_0..b_{N-1}]`.
    pub fn to_vec(&self) -> Vec<Int> {
        let mut v = self.a.c.clone();
        v.extend_from_slice(&self.b.c);
        v
    }

    pub fn from_vec(v: &[Int]) -> Self {
        assert!(v.len() % 2 == 0);
        let n = v.len() / 2;
        QuadElt::new(LambdaElt { c: v[..n].to_vec() }, LambdaElt { c: v[n..].to_vec() })
    }

    pub fn truncate(&self, n: usize) -> Self {
        QuadElt::new(self.a.truncate(n), self.b.truncate(n))
    }

    /// Matrix of `x ↦ x * self` in the coordinates of [`QuadElt::to_vec`].
    pub fn mul_matrix(&self) -> crate::zmat::Mat {
        let n = self.depth();
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let mut e = vec![0; 2 * n];
            e[i] = 1;
            rows.push(QuadElt::from_vec(&e).mul(self).to_vec());
        }
        crate::zmat::Mat::from_rows(2 * n, &rows)
    }

    /// Matrix of `x ↦ γ(x)`.
    pub fn gamma_matrix(n: usize) -> crate::zmat::Mat {
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            let mut e = vec![0; 2 * n];
            e[i] = 1;
            rows.push(QuadElt::from_vec(&e).gamma().to_vec());
        }
        crate::zmat::Mat::from_rows(2 * n, &rows)
    }
}

/// Element of `Z[μ₀]/(2, μ₀)^K`: coefficient `i` is kept modulo `2^{K−i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedElt {
    pub c: Vec<Int>,
}

impl MixedElt {
    pub fn modulus(k: usize, i: usize) -> Int {
        1 << (k - i)
    }

    pub fn new(k: usize, coeffs: &[Int]) -> Self {
        let mut c = vec![0; k];
        for (i, x) in coeffs.iter().enumerate().take(k) {
            c[i] = *x;
        }
        let mut e = MixedElt { c };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        let k = self.c.len();
        for i in 0..k {
            self.c[i] = self.c[i].rem_euclid(MixedElt::modulus(k, i));
        }
    }

    pub fn depth(&self) -> usize {
        self.c.len()
    }

    pub fn zero(k: usize) -> Self {
        MixedElt::new(k, &[])
    }

    pub fn one(k: usize) -> Self {
        MixedElt::new(k, &[1])
    }

    pub fn mu0(k: usize) -> Self {
        MixedElt::new(k, &[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        zmat::is_zero(&self.c)
    }

    pub fn add(&self, o: &Self) -> Self {
        MixedElt::new(self.depth(), &zmat::vec_add(&self.c, &o.c))
    }

    pub fn sub(&self, o: &Self) -> Self {
        MixedElt::new(self.depth(), &zmat::vec_sub(&self.c, &o.c))
    }

    pub fn neg(&self) -> Self {
        MixedElt::new(self.depth(), &zmat::vec_scale(&self.c, -1))
    }

    pub fn scale(&self, s: Int) -> Self {
        MixedElt::new(self.depth(), &zmat::vec_scale(&self.c, s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.depth();
        let mut out = vec![0; k];
        for i in 0..k {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..k - i {
                out[i + j] = zmat::add(out[i + j], zmat::mul(self.c[i], o.c[j]));
            }
        }
        MixedElt::new(k, &out)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut out = MixedElt::one(self.depth());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        out
    }

    pub fn is_unit(&self) -> bool {
        self.c.first().map_or(false, |c| c % 2 != 0)
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let k = self.depth();
        let m0 = MixedElt::modulus(k, 0);
        // inverse of the constant term modulo 2^K
        let (_, x, _) = zmat::xgcd(self.c[0], m0);
        let c0inv = MixedElt::new(k, &[x]);
        let m = MixedElt::one(k).sub(&self.mul(&c0inv));
        // m lies in (2, μ₀), so m^K = 0
        let mut sum = MixedElt::one(k);
        let mut p = MixedElt::one(k);
        for _ in 1..k {
            p = p.mul(&m);
            sum = sum.add(&p);
        }
        Ok(sum.mul(&c0inv))
    }

    /// Substitutes `μ₀ ↦ x`; requires `x ∈ (2, μ₀)`.
    pub fn substitute(&self, x: &MixedElt) -> Self {
        let k = self.depth();
        let mut out = MixedElt::zero(k);
        for i in (0..k).rev() {
            out = out.mul(x).add(&MixedElt::new(k, &[self.c[i]]));
        }
        out
    }

    /// Lies in `(2, μ₀)`.
    pub fn in_max_ideal(&self) -> bool {
        self.c.first().map_or(true, |c| c % 2 == 0)
    }

    /// Applies the ring automorphism `γ`.
    pub fn gamma(&self) -> Self {
        self.substitute(&gamma_mu0_mixed(self.depth()))
    }

    /// Projection `R_K → R_{K'}` for `K' <= K`.
    pub fn truncate(&self, k: usize) -> Self {
        MixedElt::new(k, &self.c)
    }

    /// Coordinates in the additive group `⊕ Z/2^{K−i}`.
    pub fn to_vec(&self) -> Vec<Int> {
        self.c.clone()
    }
}

/// `γ(μ₀) = (2 − μ₀)(1 − μ₀)^{-1}` in `R_K`.
pub fn gamma_mu0_mixed(k: usize) -> MixedElt {
    let one_minus = MixedElt::new(k, &[1, -1]);
    MixedElt::new(k, &[2, -1]).mul(&one_minus.invert().expect("unit"))
}

/// Element of `F₂[x]/(x^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModTwoElt {
    pub bits: Vec<bool>,
}

impl ModTwoElt {
    pub fn new(n: usize, coeffs: &[Int]) -> Self {
        let mut bits = vec![false; n];
        for (i, x) in coeffs.iter().enumerate().take(n) {
            bits[i] = x.rem_euclid(2) == 1;
        }
        ModTwoElt { bits }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        ModTwoElt { bits }
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn zero(n: usize) -> Self {
        ModTwoElt::new(n, &[])
    }

    pub fn one(n: usize) -> Self {
        ModTwoElt::new(n, &[1])
    }

    pub fn x(n: usize) -> Self {
        ModTwoElt::new(n, &[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn add(&self, o: &Self) -> Self {
        ModTwoElt { bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.depth();
        let mut bits = vec![false; n];
        for i in 0..n {
            if !self.bits[i] {
                continue;
            }
            for j in 0..n - i {
                if o.bits[j] {
                    bits[i + j] ^= true;
                }
            }
        }
        ModTwoElt { bits }
    }

    pub fn is_unit(&self) -> bool {
        self.bits.first().copied().unwrap_or(false)
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let n = self.depth();
        let m = ModTwoElt::one(n).add(self);
        let mut sum = ModTwoElt::one(n);
        let mut p = ModTwoElt::one(n);
        for _ in 1..n {
            p = p.mul(&m);
            sum = sum.add(&p);
        }
        Ok(sum)
    }

    pub fn substitute(&self, x: &ModTwoElt) -> Self {
        let n = self.depth();
        let mut out = ModTwoElt::zero(n);
        for i in (0..n).rev() {
            out = out.mul(x);
            if self.bits[i] {
                out = out.add(&ModTwoElt::one(n));
            }
        }
        out
    }

    pub fn gamma(&self) -> Self {
        self.substitute(&gamma_mu0_mod2(self.depth()))
    }

    pub fn to_index(&self) -> u64 {
        self.bits.iter().enumerate().fold(0, |acc, (i, b)| acc | ((*b as u64) << i))
    }

    pub fn from_index(n: usize, idx: u64) -> Self {
        ModTwoElt { bits: (0..n).map(|i| (idx >> i) & 1 == 1).collect() }
    }
}

/// `γ(μ₀) = μ₀ (1 − μ₀)^{-1}` modulo 2.
pub fn gamma_mu0_mod2(n: usize) -> ModTwoElt {
    let one_minus = ModTwoElt::new(n, &[1, 1]);
    ModTwoElt::x(n).mul(&one_minus.invert().expect("unit"))
}

/// `f ↦ f + f²`, additive in characteristic two.
pub fn frobenius_plus_id(f: &ModTwoElt) -> ModTwoElt {
    f.add(&f.mul(f))
}

/// Kernel of [`frobenius_plus_id`] on `F₂[x]/(x^N)`, by enumeration.
pub fn frobenius_kernel(n: usize) -> Vec<ModTwoElt> {
    assert!(n <= 20, "enumeration bound");
    (0..1u64 << n)
        .map(|i| ModTwoElt::from_index(n, i))
        .filter(|f| frobenius_plus_id(f).is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_on_mixed_k4() {
        let g = gamma_mu0_mixed(4);
        assert_eq!(g.c, vec![2, 1, 1, 1]);
        assert_eq!(g.gamma(), MixedElt::mu0(4));
    }

    #[test]
    fn gamma_on_mod_two() {
        assert_eq!(gamma_mu0_mod2(3), ModTwoElt::new(3, &[0, 1, 1]));
        assert_eq!(ModTwoElt::x(6).gamma().gamma(), ModTwoElt::x(6));
    }

    #[test]
    fn mu_is_mu0_plus_mu1() {
        // μ₀ + γ(μ₀) = (2 − μ₀²)/(1 − μ₀)
        let k = 6;
        let mu0 = MixedElt::mu0(k);
        let lhs = mu0.add(&mu0.gamma());
        let rhs = MixedElt::new(k, &[2, 0, -1]).mul(&MixedElt::new(k, &[1, -1]).invert().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inversions() {
        let u = ModTwoElt::new(4, &[1, 1]);
        assert_eq!(u.invert().unwrap(), ModTwoElt::new(4, &[1, 1, 1, 1]));
        let k = 7;
        let one_minus_mu0 = MixedElt::new(k, &[1, -1]);
        let one_minus_mu1 = MixedElt::one(k).sub(&gamma_mu0_mixed(k));
        assert_eq!(one_minus_mu0.mul(&one_minus_mu1), MixedElt::one(k).neg());
        assert_eq!(MixedElt::one(k).invert().unwrap(), MixedElt::one(k));
        assert!(MixedElt::mu0(k).invert().is_err());
    }

    #[test]
    fn quad_ring_identities() {
        let n = 5;
        let mu0 = QuadElt::mu0(n);
        let one = QuadElt::one(n);
        let mu = QuadElt::mu(n);
        // μ₀² = μμ₀ − μ + 2
        assert_eq!(mu0.mul(&mu0), mu.mul(&mu0).sub(&mu).add(&QuadElt::constant(n, 2)));
        // (1 − μ₀)^{-1} = μ − 1 − μ₀
        let inv = one.sub(&mu0).invert().unwrap();
        assert_eq!(inv, mu.sub(&one).sub(&mu0));
        // (1 − μ₀)(1 − μ₁) = −1
        assert_eq!(one.sub(&mu0).mul(&one.sub(&mu0.gamma())), one.neg());
        assert_eq!(mu0.gamma().gamma(), mu0);
        assert_eq!(QuadElt::twist(n, 3).mul(&QuadElt::twist(n, -3)), one);
    }

    #[test]
    fn frobenius() {
        assert!(frobenius_plus_id(&ModTwoElt::one(6)).is_zero());
        assert_eq!(frobenius_plus_id(&ModTwoElt::x(6)), ModTwoElt::new(6, &[0, 1, 1]));
        assert_eq!(frobenius_kernel(6).len(), 2);
    }
}

//! Monomials in the top- and middle-level generators of the `E_2`-page
//! and their normal forms.
//!
//! Top monomials are `c μ^a T2^b D1^l η^c ν^d ς^e ϖ^f p^q` with `q ≤ 1`;
//! middle ones are `c μ0^a η0^s S20^m`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::{LambdaElt, QuadElt};
use crate::zmat::{Int, Lattice};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub coef: Int,
    pub mu: u32,
    pub t2: u32,
    pub d1: i64,
    pub eta: u32,
    pub nu: u32,
    pub vs: u32,
    pub vp: u32,
    pub p: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MidMono {
    pub coef: Int,
    pub mu0: u32,
    pub eta0: u32,
    pub s20: i64,
}

impl Mono {
    pub fn one() -> Self {
        Mono { coef: 1, ..Default::default() }
    }

    pub fn s(&self) -> usize {
        (self.eta + self.nu + self.vs + 2 * self.vp) as usize
    }

    /// Internal degree on the monomial's own sheet: `𝔭` counts `-4`.
    pub fn t(&self) -> i64 {
        4 * self.t2 as i64 + 8 * self.d1 + 2 * self.eta as i64 + 4 * self.nu as i64 + 6 * self.vs as i64
            + 8 * self.vp as i64
            - 4 * self.p as i64
    }

    /// Product, or `None` if the `𝔭`-exponents exceed one.
    pub fn mul(&self, o: &Mono) -> Option<Mono> {
        if self.p + o.p > 1 {
            return None;
        }
        Some(Mono {
            coef: self.coef * o.coef,
            mu: self.mu + o.mu,
            t2: self.t2 + o.t2,
            d1: self.d1 + o.d1,
            eta: self.eta + o.eta,
            nu: self.nu + o.nu,
            vs: self.vs + o.vs,
            vp: self.vp + o.vp,
            p: self.p + o.p,
        })
    }

    /// The monomial without its coefficient and `μ` power.
    pub fn bare(&self) -> Mono {
        Mono { coef: 1, mu: 0, ..*self }
    }
}

impl MidMono {
    pub fn s(&self) -> usize {
        self.eta0 as usize
    }

    pub fn t(&self) -> i64 {
        2 * self.eta0 as i64 + 4 * self.s20
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, first: &mut bool, name: &str, e: i64) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, " ")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.coef != 1 {
            write!(f, "{}", self.coef)?;
            first = false;
        }
        write_factor(f, &mut first, "mu", self.mu as i64)?;
        write_factor(f, &mut first, "T2", self.t2 as i64)?;
        write_factor(f, &mut first, "D1", self.d1)?;
        write_factor(f, &mut first, "eta", self.eta as i64)?;
        write_factor(f, &mut first, "nu", self.nu as i64)?;
        write_factor(f, &mut first, "varsigma", self.vs as i64)?;
        write_factor(f, &mut first, "varpi", self.vp as i64)?;
        write_factor(f, &mut first, "p", self.p as i64)?;
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Display for MidMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.coef != 1 {
            write!(f, "{}", self.coef)?;
            first = false;
        }
        write_factor(f, &mut first, "mu0", self.mu0 as i64)?;
        write_factor(f, &mut first, "eta0", self.eta0 as i64)?;
        write_factor(f, &mut first, "S20", self.s20)?;
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A parsed term: coefficient and `(name, exponent)` factors.
fn parse_term(s: &str) -> Result<(Int, Vec<(String, i64)>)> {
    let mut coef: Int = 1;
    let mut factors = Vec::new();
    for (i, tok) in s.split_whitespace().enumerate() {
        if i == 0 {
            if let Ok(c) = tok.parse::<Int>() {
                coef = c;
                continue;
            }
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Parse(String::from(tok)))?),
            None => (tok, 1),
        };
        factors.push((String::from(name), exp));
    }
    Ok((coef, factors))
}

fn nonneg(name: &str, e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::Parse(alloc::format!("negative power of {name}")))
}

pub fn parse_mono(s: &str) -> Result<Mono> {
    let (coef, factors) = parse_term(s)?;
    let mut m = Mono { coef, ..Default::default() };
    for (name, e) in factors {
        match name.as_str() {
            "mu" => m.mu += nonneg(&name, e)?,
            "T2" => m.t2 += nonneg(&name, e)?,
            "D1" => m.d1 += e,
            "eta" => m.eta += nonneg(&name, e)?,
            "nu" => m.nu += nonneg(&name, e)?,
            "varsigma" => m.vs += nonneg(&name, e)?,
            "varpi" => m.vp += nonneg(&name, e)?,
            "p" => m.p += nonneg(&name, e)?,
            "kbar" => {
                let k = nonneg(&name, e)?;
                m.vp += 2 * k;
                m.d1 += k as i64;
            }
            "epsilon" => {
                let k = nonneg(&name, e)?;
                m.vp += 4 * k;
                m.d1 -= 2 * k as i64;
            }
            _ => return Err(Error::Parse(alloc::format!("unknown generator `{name}`"))),
        }
    }
    if m.p > 1 {
        return Err(Error::Parse(String::from("p appears at most once")));
    }
    Ok(m)
}

pub fn parse_mid(s: &str) -> Result<MidMono> {
    let (coef, factors) = parse_term(s)?;
    let mut m = MidMono { coef, ..Default::default() };
    for (name, e) in factors {
        match name.as_str() {
            "mu0" => m.mu0 += nonneg(&name, e)?,
            "eta0" => m.eta0 += nonneg(&name, e)?,
            "S20" => m.s20 += e,
            _ => return Err(Error::Parse(alloc::format!("unknown generator `{name}`"))),
        }
    }
    Ok(m)
}

/// `"0"`, a monomial, or a sum of monomials joined by `" + "`.
pub fn parse_sum(s: &str) -> Result<Vec<Mono>> {
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    s.split(" + ").map(parse_mono).collect()
}

/// Annihilator ideal of a cyclic top entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ideal {
    Zero,
    Two,
    TwoMu,
    FourTwoMu,
}

impl Ideal {
    pub fn reduce(&self, c: &LambdaElt) -> LambdaElt {
        let mut out = c.clone();
        for (i, x) in out.c.iter_mut().enumerate() {
            let m = self.modulus(i);
            if m > 0 {
                *x = x.rem_euclid(m);
            }
        }
        out
    }

    /// Modulus of the coefficient of `μ^i`; `0` means none.
    fn modulus(&self, i: usize) -> Int {
        match (self, i) {
            (Ideal::Zero, _) => 0,
            (Ideal::Two, _) => 2,
            (Ideal::TwoMu, 0) => 2,
            (Ideal::TwoMu, _) => 1,
            (Ideal::FourTwoMu, 0) => 4,
            (Ideal::FourTwoMu, _) => 2,
        }
    }

    /// `I Λ_M` inside `Z^M`.
    pub fn lattice(&self, depth: usize) -> Lattice {
        let gens = (0..depth).filter_map(|i| {
            let m = self.modulus(i);
            (m > 0).then(|| {
                let mut v = alloc::vec![0; depth];
                v[i] = m;
                v
            })
        });
        Lattice::from_gens(depth, gens.collect::<Vec<_>>())
    }
}

/// Generator and ideal of the top entry `(s, t)` on the integer sheet.
pub fn top_generator(s: usize, t: i64) -> Option<(Mono, Ideal)> {
    let l = t.div_euclid(8);
    let t8 = t.rem_euclid(8);
    let one = Mono::one();
    if s == 0 {
        return match t8 {
            0 => Some((Mono { d1: l, ..one }, Ideal::Zero)),
            4 => Some((Mono { t2: 1, d1: l, ..one }, Ideal::Zero)),
            _ => None,
        };
    }
    if s % 2 == 0 {
        let k = (s / 2) as u32;
        return match t8 {
            0 => Some((Mono { vp: k, d1: l - k as i64, ..one }, Ideal::FourTwoMu)),
            4 => Some((Mono { eta: 2, vp: k - 1, d1: l - k as i64 + 1, ..one }, Ideal::Two)),
            _ => None,
        };
    }
    let k = ((s - 1) / 2) as u32;
    let d1 = l - k as i64;
    match t8 {
        2 => Some((Mono { eta: 1, vp: k, d1, ..one }, Ideal::Two)),
        4 => Some((Mono { nu: 1, vp: k, d1, ..one }, Ideal::TwoMu)),
        6 => Some((Mono { vs: 1, vp: k, d1, ..one }, Ideal::Two)),
        _ => None,
    }
}

/// Normal form `coefficient · generator` of a monomial at depth `depth`,
/// with the coefficient reduced modulo the entry's ideal. `None` when the
/// monomial vanishes for degree reasons.
pub fn normalize(m: &Mono, depth: usize) -> Option<(LambdaElt, Mono, Ideal)> {
    let mu = LambdaElt::mu_pow(depth, 1);
    let mut coef = LambdaElt::constant(depth, m.coef).mul(&LambdaElt::mu_pow(depth, m.mu as usize));
    let (mut b, mut l, mut c, mut d, mut e, mut f) = (m.t2, m.d1, m.eta, m.nu, m.vs, m.vp);
    if d >= 1 && (b > 0 || c > 0 || e > 0) {
        return None;
    }
    while d >= 2 {
        d -= 2;
        f += 1;
        coef = coef.scale(2);
    }
    let t2sq = LambdaElt::from_coeffs(depth, &[8, -4, 1]);
    while b >= 2 {
        b -= 2;
        l += 1;
        coef = coef.mul(&t2sq);
    }
    if b == 1 {
        if f > 0 {
            b = 0;
            f -= 1;
            l += 1;
            c += 2;
        } else if e > 0 {
            b = 0;
            e -= 1;
            l += 1;
            c += 1;
            coef = coef.mul(&mu);
        } else if c > 0 {
            b = 0;
            c -= 1;
            e += 1;
            coef = coef.mul(&mu);
        }
    }
    loop {
        if e >= 2 {
            e -= 2;
            l += 1;
            c += 2;
        } else if e >= 1 && c >= 1 {
            e -= 1;
            c -= 1;
            f += 1;
            coef = coef.mul(&mu);
        } else if c >= 3 {
            c -= 3;
            e += 1;
            f += 1;
            l -= 1;
            coef = coef.mul(&mu);
        } else {
            break;
        }
    }
    let g = Mono { coef: 1, mu: 0, t2: b, d1: l, eta: c, nu: d, vs: e, vp: f, p: m.p };
    let (gen, ideal) = top_generator(g.s(), g.t() + 4 * m.p as i64)?;
    debug_assert_eq!(Mono { p: m.p, ..gen }, g, "normal form is not the entry generator");
    let coef = ideal.reduce(&coef);
    Some((coef, g, ideal))
}

/// Restriction of a bare top monomial: coefficient in `W[[μ0]]` and the
/// middle monomial `η0^s S20^m`. In positive filtration the middle level is
/// mod 2 and the coefficient is returned reduced.
pub fn res_mono(m: &Mono, depth: usize) -> (QuadElt, MidMono) {
    let one = QuadElt::one(depth);
    let mu0 = QuadElt::mu0(depth);
    let om = one.sub(&mu0);
    let two_minus = QuadElt::constant(depth, 2).sub(&mu0);
    let t2 = QuadElt::constant(depth, 2).sub(&mu0.scale(2)).add(&mu0.mul(&mu0));
    let mid = MidMono {
        coef: 1,
        mu0: 0,
        eta0: m.eta + m.vs + 2 * m.vp,
        s20: m.t2 as i64 + 2 * m.d1 + m.vs as i64 + m.vp as i64 - m.p as i64,
    };
    if m.nu > 0 {
        return (QuadElt::zero(depth), mid);
    }
    let modulus = if mid.eta0 > 0 { Some(2) } else { None };
    let red = |x: QuadElt| match modulus {
        Some(k) => x.rem(k),
        None => x,
    };
    let mut q = red(QuadElt::from_lambda(&LambdaElt::constant(depth, m.coef)));
    let mut times = |x: &QuadElt, e: u32| {
        for _ in 0..e {
            q = red(q.mul(x));
        }
    };
    times(&QuadElt::mu(depth), m.mu);
    times(&t2, m.t2);
    let tw = if m.d1 < 0 { om.invert().expect("1 - μ₀ is a unit") } else { om.clone() };
    times(&red(tw.mul(&tw)), m.d1.unsigned_abs() as u32);
    times(&two_minus, m.eta);
    times(&two_minus.mul(&om), m.vs);
    times(&om.mul(&om), m.vp);
    (q, mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn nf(s: &str) -> Option<(LambdaElt, Mono, Ideal)> {
        normalize(&parse_mono(s).unwrap(), 5)
    }

    #[test]
    fn parse_and_print() {
        let m = parse_mono("2 D1^-2 varpi^4").unwrap();
        assert_eq!((m.s(), m.t()), (8, 16));
        assert_eq!(m.to_string(), "2 D1^-2 varpi^4");
        let k = parse_mono("kbar").unwrap();
        assert_eq!((k.s(), k.t()), (4, 24));
        assert!(parse_mono("foo").is_err());
        assert!(parse_mono("p^2").is_err());
        let p = parse_mono("D1 p").unwrap();
        assert_eq!((p.s(), p.t()), (0, 4));
        assert_eq!(parse_sum("0").unwrap(), Vec::new());
    }

    #[test]
    fn relations_in_normal_form() {
        // η³ = μ ς ϖ Δ₁⁻¹ lands in the generator of (3, 6)
        let (c, g, _) = nf("eta^3").unwrap();
        assert_eq!(g, parse_mono("varsigma varpi D1^-1").unwrap());
        assert_eq!(c, LambdaElt::mu_pow(5, 1));
        // ν² = 2ϖ
        let (c, g, _) = nf("nu^2").unwrap();
        assert_eq!(g, parse_mono("varpi").unwrap());
        assert_eq!(c, LambdaElt::constant(5, 2));
        assert!(nf("eta nu").is_none());
        // 2η = 0
        assert!(nf("2 eta").unwrap().0.is_zero());
        // T2² = Δ₁(μ² − 4μ + 8)
        let (c, g, _) = nf("T2^2").unwrap();
        assert_eq!(g, parse_mono("D1").unwrap());
        assert_eq!(c, LambdaElt::from_coeffs(5, &[8, -4, 1]));
        // 4ϖ = 0 but 2ϖ is not
        assert!(nf("4 varpi").unwrap().0.is_zero());
        assert!(!nf("2 varpi").unwrap().0.is_zero());
        assert!(nf("2 mu varpi").unwrap().0.is_zero());
    }

    #[test]
    fn every_generator_is_normal() {
        for s in 0..12 {
            for t in -16..48 {
                if let Some((g, _)) = top_generator(s, t) {
                    assert_eq!((g.s(), g.t()), (s, t));
                    let (c, h, _) = normalize(&g, 4).unwrap();
                    assert_eq!(h, g);
                    assert_eq!(c, LambdaElt::one(4));
                }
            }
        }
    }

    #[test]
    fn restriction_degrees() {
        for s in ["T2", "D1", "eta", "varsigma", "varpi", "D1 p", "varpi^3 D1^-2 eta"] {
            let m = parse_mono(s).unwrap();
            let (_, mid) = res_mono(&m, 4);
            assert_eq!((mid.s(), mid.t()), (m.s(), m.t()), "{s}");
        }
        let (q, _) = res_mono(&parse_mono("nu").unwrap(), 4);
        assert!(q.is_zero());
    }
}

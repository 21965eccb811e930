//! Real representation rings of `C4`, `C2` and the trivial group.
//!
//! `RO(C4)` has basis `(1, σ, λ)` with `σ² = 1`, `σλ = λ`, `λ² = 2 + 2σ`.
//! `RO(C2)` has basis `(1, σ₂)` with `σ₂² = 1`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::zmat::{self, Int};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Trivial,
    C2,
    C4,
}

impl Group {
    /// Order as a `usize`, for indexing group rings.
    pub fn size(self) -> usize {
        self.order() as usize
    }

    pub fn order(self) -> Int {
        match self {
            Group::Trivial => 1,
            Group::C2 => 2,
            Group::C4 => 4,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Group::Trivial => 1,
            Group::C2 => 2,
            Group::C4 => 3,
        }
    }

    /// Weights of the basis elements under `dimension`.
    fn dims(self) -> &'static [Int] {
        match self {
            Group::Trivial => &[1],
            Group::C2 => &[1, 1],
            Group::C4 => &[1, 1, 2],
        }
    }

    pub fn is_subgroup_of(self, other: Group) -> bool {
        self.order() <= other.order()
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Trivial => "e",
            Group::C2 => "C2",
            Group::C4 => "C4",
        }
    }

    pub fn parse(s: &str) -> Result<Group> {
        match s.trim() {
            "e" | "1" | "trivial" => Ok(Group::Trivial),
            "C2" | "c2" => Ok(Group::C2),
            "C4" | "c4" => Ok(Group::C4),
            other => Err(Error::Parse(alloc::format!("unknown group `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualRep {
    pub group: Group,
    pub coords: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Int>,
}

impl VirtualRep {
    pub fn new(group: Group, coords: Vec<Int>) -> Self {
        assert_eq!(coords.len(), group.rank(), "coordinate length does not match group");
        VirtualRep { group, coords }
    }

    pub fn zero(group: Group) -> Self {
        VirtualRep::new(group, vec![0; group.rank()])
    }

    pub fn one(group: Group) -> Self {
        VirtualRep::integer(group, 1)
    }

    pub fn integer(group: Group, n: Int) -> Self {
        let mut c = vec![0; group.rank()];
        c[0] = n;
        VirtualRep::new(group, c)
    }

    pub fn basis(group: Group, i: usize) -> Self {
        let mut c = vec![0; group.rank()];
        c[i] = 1;
        VirtualRep::new(group, c)
    }

    pub fn sigma() -> Self {
        VirtualRep::basis(Group::C4, 1)
    }

    pub fn lambda() -> Self {
        VirtualRep::basis(Group::C4, 2)
    }

    pub fn sigma2() -> Self {
        VirtualRep::basis(Group::C2, 1)
    }

    pub fn rho4() -> Self {
        VirtualRep::new(Group::C4, vec![1, 1, 1])
    }

    pub fn rho2() -> Self {
        VirtualRep::new(Group::C2, vec![1, 1])
    }

    pub fn dimension(&self) -> Int {
        self.coords.iter().zip(self.group.dims()).map(|(a, b)| zmat::mul(*a, *b)).sum()
    }

    pub fn add(&self, other: &VirtualRep) -> Result<VirtualRep> {
        same_group(self, other)?;
        Ok(VirtualRep::new(self.group, zmat::vec_add(&self.coords, &other.coords)))
    }

    pub fn sub(&self, other: &VirtualRep) -> Result<VirtualRep> {
        same_group(self, other)?;
        Ok(VirtualRep::new(self.group, zmat::vec_sub(&self.coords, &other.coords)))
    }

    pub fn scale(&self, k: Int) -> VirtualRep {
        VirtualRep::new(self.group, zmat::vec_scale(&self.coords, k))
    }
}

fn same_group(v: &VirtualRep, w: &VirtualRep) -> Result<()> {
    if v.group == w.group {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

/// Product in the representation ring.
pub fn rr_mul(v: &VirtualRep, w: &VirtualRep) -> Result<VirtualRep> {
    same_group(v, w)?;
    let a = &v.coords;
    let b = &w.coords;
    let m = zmat::mul;
    let coords = match v.group {
        Group::Trivial => vec![m(a[0], b[0])],
        Group::C2 => vec![m(a[0], b[0]) + m(a[1], b[1]), m(a[0], b[1]) + m(a[1], b[0])],
        Group::C4 => {
            // λ² = 2 + 2σ, σλ = λ
            let ll = m(a[2], b[2]);
            vec![
                m(a[0], b[0]) + m(a[1], b[1]) + 2 * ll,
                m(a[0], b[1]) + m(a[1], b[0]) + 2 * ll,
                m(a[0], b[2]) + m(a[2], b[0]) + m(a[1], b[2]) + m(a[2], b[1]),
            ]
        }
    };
    Ok(VirtualRep::new(v.group, coords))
}

/// Images of the basis of `from` in `to` under restriction.
fn restriction_matrix(from: Group, to: Group) -> Vec<Vec<Int>> {
    match (from, to) {
        (g, h) if g == h => (0..g.rank()).map(|i| VirtualRep::basis(g, i).coords).collect(),
        (Group::C4, Group::C2) => vec![vec![1, 0], vec![1, 0], vec![0, 2]],
        (Group::C4, Group::Trivial) => vec![vec![1], vec![1], vec![2]],
        (Group::C2, Group::Trivial) => vec![vec![1], vec![1]],
        _ => unreachable!("checked by caller"),
    }
}

/// Images of the basis of `from` in `to` under induction.
fn induction_matrix(from: Group, to: Group) -> Vec<Vec<Int>> {
    match (from, to) {
        (g, h) if g == h => (0..g.rank()).map(|i| VirtualRep::basis(g, i).coords).collect(),
        (Group::C2, Group::C4) => vec![vec![1, 1, 0], vec![0, 0, 1]],
        (Group::Trivial, Group::C2) => vec![vec![1, 1]],
        (Group::Trivial, Group::C4) => vec![vec![1, 1, 1]],
        _ => unreachable!("checked by caller"),
    }
}

fn apply_rows(rows: &[Vec<Int>], v: &[Int], width: usize) -> Vec<Int> {
    zmat::combine(rows, v, width)
}

pub fn rr_restrict(v: &VirtualRep, target: Group) -> Result<VirtualRep> {
    if !target.is_subgroup_of(v.group) {
        return Err(Error::NotSubgroup);
    }
    let rows = restriction_matrix(v.group, target);
    Ok(VirtualRep::new(target, apply_rows(&rows, &v.coords, target.rank())))
}

pub fn rr_induce(w: &VirtualRep, to: Group) -> Result<VirtualRep> {
    if !w.group.is_subgroup_of(to) {
        return Err(Error::NotSubgroup);
    }
    let rows = induction_matrix(w.group, to);
    Ok(VirtualRep::new(to, apply_rows(&rows, &w.coords, to.rank())))
}

/// Character values at the group elements `g^0, g^1, ...`.
pub fn rr_character(v: &VirtualRep) -> Character {
    let table: &[&[Int]] = match v.group {
        Group::Trivial => &[&[1]],
        Group::C2 => &[&[1, 1], &[1, -1]],
        // rows: 1, σ, λ at (e, γ, γ², γ³)
        Group::C4 => &[&[1, 1, 1, 1], &[1, -1, 1, -1], &[2, 0, -2, 0]],
    };
    let n = v.group.order() as usize;
    let mut values = vec![0; n];
    for (c, row) in v.coords.iter().zip(table) {
        zmat::axpy(&mut values, *c, row);
    }
    Character { values }
}

impl fmt::Display for VirtualRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = match self.group {
            Group::Trivial => &[""],
            Group::C2 => &["", "sigma2"],
            Group::C4 => &["", "sigma", "lambda"],
        };
        let mut out = String::new();
        for (c, name) in self.coords.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let term = match (name.is_empty(), c.abs()) {
                (true, a) => a.to_string(),
                (false, 1) => name.to_string(),
                (false, a) => alloc::format!("{a}*{name}"),
            };
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if *c < 0 { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// Parses expressions such as `res4to2(lambda + 2*sigma)` or `ind2to4(sigma2) - 1`.
///
/// Atoms: integers, `sigma`, `lambda`, `rho4`, `sigma2`, `rho2`. Functions:
/// `res4to2`, `res4to1`, `res2to1`, `ind2to4`, `ind1to2`, `ind1to4`.
/// Bare integers take the group of the surrounding expression (default `C4`).
pub fn parse_expr(src: &str) -> Result<VirtualRep> {
    let mut p = Parser { s: src.as_bytes(), i: 0 };
    let e = p.sum()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(Error::Parse(alloc::format!("trailing input at byte {}", p.i)));
    }
    e.resolve(Group::C4)
}

/// Expression tree whose integer leaves adopt the group of their context.
#[derive(Clone, Debug)]
enum Expr {
    Int(Int),
    Rep(VirtualRep),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Call(String, Box<Expr>),
}

use alloc::boxed::Box;

impl Expr {
    /// Group forced by some leaf, if any.
    fn forced(&self) -> Option<Group> {
        match self {
            Expr::Int(_) => None,
            Expr::Rep(v) => Some(v.group),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.forced().or(b.forced()),
            Expr::Neg(a) => a.forced(),
            Expr::Call(name, _) => call_groups(name).map(|(_, to)| to),
        }
    }

    fn resolve(&self, default: Group) -> Result<VirtualRep> {
        let g = self.forced().unwrap_or(default);
        match self {
            Expr::Int(n) => Ok(VirtualRep::integer(g, *n)),
            Expr::Rep(v) => Ok(v.clone()),
            Expr::Add(a, b) => a.resolve(g)?.add(&b.resolve(g)?),
            Expr::Sub(a, b) => a.resolve(g)?.sub(&b.resolve(g)?),
            Expr::Mul(a, b) => rr_mul(&a.resolve(g)?, &b.resolve(g)?),
            Expr::Neg(a) => Ok(a.resolve(g)?.scale(-1)),
            Expr::Call(name, arg) => {
                let (from, to) = call_groups(name)
                    .ok_or_else(|| Error::Parse(alloc::format!("unknown function `{name}`")))?;
                let v = arg.resolve(from)?;
                if v.group != from {
                    return Err(Error::GroupMismatch);
                }
                if name.starts_with("res") {
                    rr_restrict(&v, to)
                } else {
                    rr_induce(&v, to)
                }
            }
        }
    }
}

fn call_groups(name: &str) -> Option<(Group, Group)> {
    Some(match name {
        "res4to2" => (Group::C4, Group::C2),
        "res4to1" => (Group::C4, Group::Trivial),
        "res2to1" => (Group::C2, Group::Trivial),
        "ind2to4" => (Group::C2, Group::C4),
        "ind1to2" => (Group::Trivial, Group::C2),
        "ind1to4" => (Group::Trivial, Group::C4),
        _ => return None,
    })
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    e = Expr::Add(Box::new(e), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.i += 1;
                    e = Expr::Sub(Box::new(e), Box::new(self.product()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let txt = core::str::from_utf8(&self.s[start..self.i]).unwrap();
                txt.parse::<Int>()
                    .map(Expr::Int)
                    .map_err(|_| Error::Parse(alloc::format!("bad integer `{txt}`")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_alphanumeric() {
                    self.i += 1;
                }
                let word = core::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
                if self.peek() == Some(b'(') {
                    self.i += 1;
                    let arg = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Expr::Call(word, Box::new(arg)));
                }
                let v = match word.as_str() {
                    "sigma" => VirtualRep::sigma(),
                    "lambda" => VirtualRep::lambda(),
                    "rho4" => VirtualRep::rho4(),
                    "sigma2" => VirtualRep::sigma2(),
                    "rho2" => VirtualRep::rho2(),
                    _ => return Err(Error::Parse(alloc::format!("unknown symbol `{word}`"))),
                };
                Ok(Expr::Rep(v))
            }
            other => Err(Error::Parse(alloc::format!(
                "unexpected {:?} at byte {}",
                other.map(|c| c as char),
                self.i
            ))),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse(alloc::format!("expected `{}` at byte {}", c as char, self.i)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4(a: Int, b: Int, c: Int) -> VirtualRep {
        VirtualRep::new(Group::C4, vec![a, b, c])
    }

    #[test]
    fn relations() {
        let l = VirtualRep::lambda();
        let s = VirtualRep::sigma();
        assert_eq!(rr_mul(&l, &l).unwrap(), c4(2, 2, 0));
        assert_eq!(rr_mul(&s, &s).unwrap(), c4(1, 0, 0));
        let v = c4(3, -2, 1);
        assert_eq!(rr_mul(&VirtualRep::one(Group::C4), &v).unwrap(), v);
    }

    #[test]
    fn restriction_and_induction_examples() {
        assert_eq!(rr_restrict(&VirtualRep::lambda(), Group::C2).unwrap(), VirtualRep::sigma2().scale(2));
        assert_eq!(rr_restrict(&VirtualRep::sigma(), Group::C2).unwrap(), VirtualRep::one(Group::C2));
        assert_eq!(rr_induce(&VirtualRep::one(Group::C2), Group::C4).unwrap(), c4(1, 1, 0));
        assert_eq!(rr_induce(&VirtualRep::sigma2(), Group::C4).unwrap(), VirtualRep::lambda());
        assert_eq!(rr_induce(&VirtualRep::one(Group::Trivial), Group::C2).unwrap(), VirtualRep::rho2());
        assert_eq!(rr_restrict(&VirtualRep::one(Group::C2), Group::C4), Err(Error::NotSubgroup));
    }

    #[test]
    fn characters() {
        assert_eq!(rr_character(&VirtualRep::lambda()).values, vec![2, 0, -2, 0]);
        assert_eq!(rr_character(&VirtualRep::sigma()).values, vec![1, -1, 1, -1]);
        assert_eq!(rr_character(&VirtualRep::rho4()).values, vec![4, 0, 0, 0]);
    }

    #[test]
    fn parse_and_display() {
        let v = parse_expr("res4to2(lambda + 2*sigma)").unwrap();
        assert_eq!(v, VirtualRep::new(Group::C2, vec![2, 2]));
        assert_eq!(parse_expr("15 + sigma").unwrap(), c4(15, 1, 0));
        assert_eq!(parse_expr("ind2to4(1) - 1").unwrap(), c4(0, 1, 0));
        assert_eq!(parse_expr("lambda*lambda").unwrap().to_string(), "2 + 2*sigma");
        assert_eq!(c4(10, -2, -4).to_string(), "10 - 2*sigma - 4*lambda");
        assert!(parse_expr("foo").is_err());
    }
}

//! The Mackey-functor valued homotopy fixed point spectral sequence on the
//! integer sheet and the `1 − σ` sheet.
//!
//! Top entries are cyclic `Λ_M`-modules with a monomial generator. The
//! middle level is `W[[μ0]]{η0^s S20^m}`, reduced mod 2 for `s > 0`. The
//! bottom level is concentrated in filtration zero and never changes.
//!
//! Differentials at the top are propagated from generator rules by the
//! declared linearity and the Leibniz rule. On each page the differential
//! is pinned down on the cycles it is known on and set to zero on the rest;
//! every propagated value is then re-checked against it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::abgroup::{AbGroup, Subquotient};
use crate::coeff::{LambdaElt, QuadElt};
use crate::mono::{normalize, res_mono, top_generator, MidMono, Mono};
use crate::zmat::{self, Int, Lattice, Mat};
use crate::{Error, Result};

/// Period in `t` of the top level, from `Δ₁⁴`.
pub const PERIOD: i64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sheet {
    Integer,
    Sigma,
}

impl Sheet {
    pub fn name(self) -> &'static str {
        match self {
            Sheet::Integer => "integer",
            Sheet::Sigma => "one_minus_sigma",
        }
    }

    pub fn parse(s: &str) -> Result<Sheet> {
        match s {
            "integer" | "0" => Ok(Sheet::Integer),
            "one_minus_sigma" | "sigma" | "1-sigma" => Ok(Sheet::Sigma),
            _ => Err(Error::Parse(alloc::format!("unknown sheet `{s}`"))),
        }
    }

    /// Stem label: `t − s` on the integer sheet; on the other sheet the
    /// group in stem `n` is `π_{n+1−σ}` and is labelled `n + 1`.
    pub fn label(self, stem: i64) -> i64 {
        match self {
            Sheet::Integer => stem,
            Sheet::Sigma => stem + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Top,
    Mid,
    Bot,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Top, Level::Mid, Level::Bot];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub sheet: Sheet,
    pub level: Level,
    pub s: usize,
    pub t: i64,
}

/// A differential rule `d_r(source) = target` at the top level.
#[derive(Clone, Debug)]
pub struct Rule {
    pub source: Mono,
    pub target: Vec<Mono>,
    pub citation: String,
}

/// A rule at the middle level, linear over `S20^period`.
#[derive(Clone, Debug)]
pub struct MidRule {
    pub source: MidMono,
    pub target: MidMono,
    pub period: i64,
    pub citation: String,
}

#[derive(Clone, Debug, Default)]
pub struct DifferentialTable {
    pub page: u32,
    pub rules: Vec<Rule>,
    pub mid_rules: Vec<MidRule>,
    /// Classes `d_r` is declared linear over (besides `μ`).
    pub linear: Vec<Mono>,
}

impl DifferentialTable {
    /// Every rule moves `(s, t)` to `(s + r, t + r − 1)`.
    pub fn validate(&self) -> Result<()> {
        let r = self.page as i64;
        for rule in &self.rules {
            for tgt in &rule.target {
                if tgt.s() as i64 != rule.source.s() as i64 + r || tgt.t() != rule.source.t() + r - 1 {
                    return Err(Error::Fixture(alloc::format!("d{} rule `{}` has wrong bidegree", r, rule.source)));
                }
            }
        }
        for rule in &self.mid_rules {
            if rule.target.s() as i64 != rule.source.s() as i64 + r || rule.target.t() != rule.source.t() + r - 1 {
                return Err(Error::Fixture(alloc::format!("d{} rule `{}` has wrong bidegree", r, rule.source)));
            }
        }
        Ok(())
    }
}

/// Everything the engine needs besides the truncation.
#[derive(Clone, Debug, Default)]
pub struct Fixtures {
    pub tables: Vec<DifferentialTable>,
    pub permanent: Vec<Mono>,
}

impl Fixtures {
    pub fn table(&self, r: u32) -> Result<&DifferentialTable> {
        self.tables.iter().find(|t| t.page == r).ok_or(Error::UnknownPage(r))
    }

    pub fn max_page(&self) -> u32 {
        self.tables.iter().map(|t| t.page).max().unwrap_or(2)
    }
}

/// Range of internal degrees: the cylinder `t mod 32`, or a finite window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    Cylinder,
    Range(i64, i64),
}

impl Window {
    pub fn canon(&self, t: i64) -> Option<(i64, i64)> {
        match *self {
            Window::Cylinder => Some((t.rem_euclid(PERIOD), t.div_euclid(PERIOD))),
            Window::Range(lo, hi) => (lo <= t && t < hi).then_some((t, 0)),
        }
    }

    fn ts(&self) -> Vec<i64> {
        match *self {
            Window::Cylinder => (0..PERIOD).collect(),
            Window::Range(lo, hi) => (lo..hi).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EntryInfo {
    pub dim: usize,
    pub rel: Lattice,
    pub mu: Mat,
    pub label: String,
}

/// An element of a top entry: coefficient times the entry generator.
#[derive(Clone, Debug, PartialEq, Eq)]
struct TopElt {
    key: Key,
    gen: Mono,
    coef: LambdaElt,
}

#[derive(Clone, Debug)]
struct Pair {
    x: TopElt,
    y: Option<TopElt>,
}

/// A nonzero differential recorded for charts and reports.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrow {
    pub page: u32,
    pub src: Key,
    pub tgt: Key,
}

#[derive(Clone, Debug)]
pub struct EntryState {
    pub z: Lattice,
    pub b: Lattice,
}

/// Outcome of one run at a fixed depth.
/// State at the start of page `r` and the `d_r` computed on it. Rows of a
/// map are the images of the `z` basis of its source.
#[derive(Clone, Debug, Default)]
pub struct PageRecord {
    pub states: BTreeMap<Key, EntryState>,
    pub maps: BTreeMap<Key, (Key, Mat)>,
}

#[derive(Clone, Debug)]
pub struct Run {
    pub depth: usize,
    pub window: Window,
    pub s_max: usize,
    pub entries: BTreeMap<Key, EntryInfo>,
    pub e2: BTreeMap<Key, EntryState>,
    pub einf: BTreeMap<Key, EntryState>,
    pub arrows: Vec<Arrow>,
    pub pages: BTreeMap<u32, PageRecord>,
    /// Failed internal checks: consistency, `d² = 0`, Mackey compatibility.
    pub failures: Vec<String>,
    pub checks_run: usize,
    pub pairs_used: usize,
    /// Values obtained by dividing by a multiplier.
    pub inferred: usize,
}

struct Engine<'a> {
    depth: usize,
    window: Window,
    s_max: usize,
    sheets: Vec<Sheet>,
    fx: &'a Fixtures,
    entries: BTreeMap<Key, EntryInfo>,
    state: BTreeMap<Key, EntryState>,
    failures: Vec<String>,
    checks: usize,
    arrows: Vec<Arrow>,
    pages: BTreeMap<u32, PageRecord>,
    pairs_used: usize,
    inferred: usize,
}

/// Products at filtration zero never leave it, so the orbit is cut off by
/// coefficient size; large multiples add nothing to the span anyway.
const COEF_CAP: Int = 1 << 32;

fn small(c: &LambdaElt) -> bool {
    c.c.iter().all(|x| x.abs() < COEF_CAP)
}

fn mu_shift(dim_blocks: usize, depth: usize) -> Mat {
    let mut m = Mat::zeros(dim_blocks * depth, dim_blocks * depth);
    for b in 0..dim_blocks {
        for i in 0..depth - 1 {
            m.set(b * depth + i, b * depth + i + 1, 1);
        }
    }
    m
}

impl<'a> Engine<'a> {
    fn new(fx: &'a Fixtures, depth: usize, window: Window, s_max: usize, sheets: &[Sheet]) -> Self {
        let mut e = Engine {
            depth,
            window,
            s_max,
            sheets: sheets.to_vec(),
            fx,
            entries: BTreeMap::new(),
            state: BTreeMap::new(),
            failures: Vec::new(),
            checks: 0,
            arrows: Vec::new(),
            pages: BTreeMap::new(),
            pairs_used: 0,
            inferred: 0,
        };
        e.build_e2();
        e
    }

    fn build_e2(&mut self) {
        let m = self.depth;
        for &sheet in &self.sheets.clone() {
            let shift = if sheet == Sheet::Sigma { 4 } else { 0 };
            for s in 0..=self.s_max {
                for t in self.window.ts() {
                    if let Some((gen, ideal)) = top_generator(s, t + shift) {
                        let gen = Mono { p: (sheet == Sheet::Sigma) as u32, ..gen };
                        let key = Key { sheet, level: Level::Top, s, t };
                        let info = EntryInfo {
                            dim: m,
                            rel: ideal.lattice(m),
                            mu: mu_shift(1, m),
                            label: alloc::format!("{gen}"),
                        };
                        self.insert(key, info);
                    }
                    if (t - 2 * s as i64).rem_euclid(4) == 0 {
                        let mm = (t - 2 * s as i64) / 4;
                        let key = Key { sheet, level: Level::Mid, s, t };
                        let rel = if s > 0 { Lattice::scalar(2 * m, 2) } else { Lattice::zero(2 * m) };
                        let label = MidMono { coef: 1, mu0: 0, eta0: s as u32, s20: mm };
                        let info = EntryInfo {
                            dim: 2 * m,
                            rel,
                            mu: QuadElt::mu(m).mul_matrix(),
                            label: alloc::format!("{label}"),
                        };
                        self.insert(key, info);
                    }
                    if s == 0 && t.rem_euclid(2) == 0 {
                        let key = Key { sheet, level: Level::Bot, s, t };
                        let info = EntryInfo {
                            dim: 2 * m,
                            rel: Lattice::zero(2 * m),
                            mu: QuadElt::mu(m).mul_matrix(),
                            label: String::from("r"),
                        };
                        self.insert(key, info);
                    }
                }
            }
        }
    }

    fn insert(&mut self, key: Key, info: EntryInfo) {
        self.state.insert(key, EntryState { z: Lattice::full(info.dim), b: info.rel.clone() });
        self.entries.insert(key, info);
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 64 {
            self.failures.push(msg);
        }
    }

    /// Normal form of `coef · m` as an element of a top entry in the window.
    fn top_elt(&self, m: &Mono, coef: &LambdaElt) -> Option<TopElt> {
        let (c, g, ideal) = normalize(m, self.depth)?;
        let sheet = if g.p == 1 { Sheet::Sigma } else { Sheet::Integer };
        if !self.sheets.contains(&sheet) || g.s() > self.s_max {
            return None;
        }
        let (t, wrap) = self.window.canon(g.t())?;
        let gen = Mono { d1: g.d1 - 4 * wrap, ..g };
        let key = Key { sheet, level: Level::Top, s: g.s(), t };
        Some(TopElt { key, gen, coef: ideal.reduce(&coef.mul(&c)) })
    }

    /// True when `m` is a nonzero class whose degree lies outside a finite
    /// window, so its value is unknown rather than zero.
    fn outside(&self, m: &Mono) -> bool {
        normalize(m, self.depth).is_some_and(|(_, g, _)| self.window.canon(g.t()).is_none())
    }

    /// `a · z`, or `Err` when the product leaves the window.
    fn mul_known(&self, a: &TopElt, z: &Mono) -> core::result::Result<Option<TopElt>, ()> {
        match a.gen.mul(z) {
            Some(m) if self.outside(&m) => Err(()),
            _ => Ok(self.mul_elt(a, z)),
        }
    }

    fn mul_elts_known(&self, a: &TopElt, b: &TopElt) -> core::result::Result<Option<TopElt>, ()> {
        match a.gen.mul(&b.gen) {
            Some(m) if self.outside(&m) => Err(()),
            _ => Ok(self.mul_elts(a, b)),
        }
    }

    fn mul_elt(&self, a: &TopElt, z: &Mono) -> Option<TopElt> {
        let prod = a.gen.mul(z)?;
        self.top_elt(&prod, &a.coef)
    }

    fn mul_elts(&self, a: &TopElt, b: &TopElt) -> Option<TopElt> {
        let prod = a.gen.mul(&b.gen)?;
        self.top_elt(&prod, &a.coef.mul(&b.coef))
    }

    fn add_opt(&self, a: Option<TopElt>, b: Option<TopElt>) -> core::result::Result<Option<TopElt>, String> {
        match (a, b) {
            (None, x) | (x, None) => Ok(x),
            (Some(a), Some(b)) => {
                if a.key != b.key {
                    return Err(alloc::format!("sum of classes in different entries {:?} {:?}", a.key, b.key));
                }
                let ideal = normalize(&a.gen, self.depth).map(|x| x.2).expect("generator normalizes");
                Ok(Some(TopElt { coef: ideal.reduce(&a.coef.add(&b.coef)), ..a }))
            }
        }
    }

    fn rule_pairs(&mut self, table: &DifferentialTable) -> Vec<Pair> {
        let one = LambdaElt::one(self.depth);
        let mut out = Vec::new();
        for rule in &table.rules {
            let Some(x) = self.top_elt(&rule.source, &one) else { continue };
            if rule.target.iter().any(|tm| self.outside(tm)) {
                continue;
            }
            let mut y = None;
            for tm in &rule.target {
                match self.add_opt(y, self.top_elt(tm, &one)) {
                    Ok(v) => y = v,
                    Err(e) => {
                        self.fail(e);
                        y = None;
                    }
                }
            }
            out.push(Pair { x, y });
        }
        out
    }

    /// Closure of the rule pairs under the multipliers and Leibniz products
    /// with the rule pairs.
    fn multipliers(&self, table: &DifferentialTable) -> Vec<Mono> {
        let mut mults: Vec<Mono> = table.linear.clone();
        mults.extend(self.fx.permanent.iter().copied());
        // Δ₁-type multipliers come with their inverses
        let inverses: Vec<Mono> = mults
            .iter()
            .filter(|m| m.d1 != 0 && m.s() == 0 && m.t2 == 0 && m.p == 0 && m.mu == 0 && m.coef == 1)
            .map(|m| Mono { d1: -m.d1, ..*m })
            .collect();
        mults.extend(inverses);
        mults
    }

    fn orbit(&mut self, table: &DifferentialTable) -> Vec<Pair> {
        let seeds = self.rule_pairs(table);
        let mults = self.multipliers(table);
        let mut seen: BTreeSet<(Key, Vec<Int>)> = BTreeSet::new();
        let mut out: Vec<Pair> = Vec::new();
        let mut queue: Vec<Pair> = Vec::new();
        for p in seeds.iter() {
            if seen.insert((p.x.key, p.x.coef.c.clone())) {
                queue.push(p.clone());
            }
        }
        while let Some(p) = queue.pop() {
            let mut next = Vec::new();
            for z in &mults {
                if let Some(x) = self.mul_elt(&p.x, z) {
                    let y = match &p.y {
                        Some(y) => match self.mul_known(y, z) {
                            Ok(v) => v,
                            Err(()) => continue,
                        },
                        None => None,
                    };
                    next.push(Pair { x, y });
                }
            }
            for q in &seeds {
                let Some(x) = self.mul_elts(&p.x, &q.x) else { continue };
                let a = q.y.as_ref().map(|dy| self.mul_elts_known(&p.x, dy)).transpose();
                let b = p.y.as_ref().map(|dx| self.mul_elts_known(dx, &q.x)).transpose();
                let (Ok(a), Ok(b)) = (a.map(Option::flatten), b.map(Option::flatten)) else { continue };
                match self.add_opt(a, b) {
                    Ok(y) => next.push(Pair { x, y }),
                    Err(e) => self.fail(e),
                }
            }
            for n in next {
                if !small(&n.x.coef) || n.y.as_ref().is_some_and(|y| !small(&y.coef)) {
                    continue;
                }
                if seen.insert((n.x.key, n.x.coef.c.clone())) {
                    queue.push(n);
                }
            }
            out.push(p);
        }
        out
    }

    fn target_key(src: Key, r: u32) -> Key {
        Key { s: src.s + r as usize, t: src.t + r as i64 - 1, ..src }
    }

    fn canon_target(&self, src: Key, r: u32) -> Option<Key> {
        let k = Self::target_key(src, r);
        let (t, _) = self.window.canon(k.t)?;
        let k = Key { t, ..k };
        self.entries.contains_key(&k).then_some(k)
    }

    /// `d_r` on the current cycles of `src`, determined by `gens ↦ vals`.
    fn pin_down(&mut self, src: Key, tgt: Key, gens: &[Vec<Int>], vals: &[Vec<Int>], r: u32) -> Mat {
        let st = self.state[&src].clone();
        let tb = self.state[&tgt].b.clone();
        let dim_t = self.entries[&tgt].dim;
        let dim = self.entries[&src].dim;
        let zb = st.z.basis().to_vec();
        let mut d = Mat::zeros(zb.len(), dim_t);
        for g in gens {
            if !st.z.contains(g) {
                self.fail(alloc::format!("d{r}: source {:?} is not a cycle in {:?}", g, src));
            }
        }
        let kmat = if gens.is_empty() { None } else { Some(Mat::from_rows(dim, gens)) };
        for (i, z) in zb.iter().enumerate() {
            let sol = kmat.as_ref().and_then(|k| zmat::solve_left(k, z));
            if let Some(c) = sol {
                let img = zmat::combine(vals, &c, dim_t);
                let img = tb.reduce(&img);
                for (j, x) in img.iter().enumerate() {
                    d.set(i, j, *x);
                }
            }
        }
        // re-check every known value against the chosen map
        for (g, v) in gens.iter().zip(vals) {
            self.checks += 1;
            if let Some(c) = st.z.coords(g) {
                let got = d.apply(&c);
                if !tb.contains(&zmat::vec_sub(&got, v)) {
                    self.fail(alloc::format!("d{r}: inconsistent value on {:?} in {:?}", g, src));
                }
            }
        }
        d
    }

    fn mid_map(&self, table: &DifferentialTable, src: Key) -> Option<(Key, Mat)> {
        let m = self.depth;
        let ss = src.s as u32;
        let mm = (src.t - 2 * src.s as i64) / 4;
        for rule in &table.mid_rules {
            if (mm - rule.source.s20).rem_euclid(rule.period) != 0 || ss < rule.source.eta0 {
                continue;
            }
            let tk = Self::target_key(src, table.page);
            let (t, wrap) = self.window.canon(tk.t)?;
            let key = Key { t, ..tk };
            if !self.entries.contains_key(&key) {
                return None;
            }
            // f η0^s S20^m ↦ f c μ0^a η0^{s+Δs} S20^{m + Δm}; periodicity identifies S20^{8j} with (1 − μ0)^{−8j}
            let mut c = QuadElt::from_lambda(&LambdaElt::constant(m, rule.target.coef)).mul(&QuadElt::mu0(m).pow(rule.target.mu0));
            if rule.source.mu0 != 0 || rule.source.coef != 1 {
                return None;
            }
            if wrap != 0 {
                c = c.mul(&QuadElt::twist(m, -8 * wrap));
            }
            return Some((key, c.mul_matrix()));
        }
        None
    }

    /// Restriction of a top element to the middle level.
    fn res(&self, x: &TopElt) -> Option<(Key, Vec<Int>)> {
        let m = self.depth;
        let (q, mid) = res_mono(&x.gen, m);
        let q = q.mul(&QuadElt::from_lambda(&x.coef));
        let (t, wrap) = self.window.canon(mid.t())?;
        let q = if wrap != 0 { q.mul(&QuadElt::twist(m, -8 * wrap)) } else { q };
        let key = Key { sheet: x.key.sheet, level: Level::Mid, s: mid.s(), t };
        self.entries.contains_key(&key).then(|| (key, q.to_vec()))
    }

    /// `z · gen(key) = c · gen(key')` for a top entry.
    fn shift_by(&self, key: Key, z: &Mono) -> Option<(Key, LambdaElt)> {
        let g = top_generator(key.s, key.t + if key.sheet == Sheet::Sigma { 4 } else { 0 })?.0;
        let g = Mono { p: (key.sheet == Sheet::Sigma) as u32, ..g };
        let e = self.top_elt(&g.mul(z)?, &LambdaElt::one(self.depth))?;
        Some((e.key, e.coef))
    }

    fn lambda_matrix(&self, c: &LambdaElt, key: Key) -> Mat {
        let ideal = normalize(&self.generator(key), self.depth).expect("generator normalizes").2;
        let rows: Vec<Vec<Int>> = (0..self.depth).map(|i| ideal.reduce(&LambdaElt::mu_pow(self.depth, i).mul(c)).c).collect();
        Mat::from_rows(self.depth, &rows)
    }

    fn generator(&self, key: Key) -> Mono {
        let shift = if key.sheet == Sheet::Sigma { 4 } else { 0 };
        let g = top_generator(key.s, key.t + shift).expect("top entry").0;
        Mono { p: (key.sheet == Sheet::Sigma) as u32, ..g }
    }

    /// Values forced by linearity over a multiplier `z`: if `d(z x) = w` is
    /// known and `z ·` is injective on `E_r` of the target, then `d(x)` is
    /// the unique `y` with `z y = w`.
    fn divide(&self, r: u32, mults: &[Mono], known: &BTreeMap<Key, (Key, Vec<Vec<Int>>, Vec<Vec<Int>>)>) -> Vec<(Key, Key, Vec<Int>, Vec<Int>)> {
        let mut out = Vec::new();
        for (&src, info) in &self.entries {
            if src.level != Level::Top || src.s + r as usize > self.s_max {
                continue;
            }
            let Some(tgt) = self.canon_target(src, r) else { continue };
            let zs = &self.state[&src].z;
            let mine = known.get(&src).map(|k| Lattice::from_gens(info.dim, k.1.clone())).unwrap_or_else(|| Lattice::zero(info.dim));
            let todo: Vec<Vec<Int>> = zs.basis().iter().filter(|x| !mine.contains(x)).cloned().collect();
            if todo.is_empty() {
                continue;
            }
            for z in mults {
                let Some((src2, cs)) = self.shift_by(src, z) else { continue };
                let Some((_, gens2, vals2)) = known.get(&src2) else { continue };
                let Some((tgt2, ct)) = self.shift_by(tgt, z) else { continue };
                if self.canon_target(src2, r) != Some(tgt2) {
                    continue;
                }
                let ms = self.lambda_matrix(&cs, src2);
                let mt = self.lambda_matrix(&ct, tgt2);
                let zt = &self.state[&tgt].z;
                let bt = &self.state[&tgt].b;
                let bt2 = &self.state[&tgt2].b;
                // injectivity of z on Z_r(tgt)/B_r(tgt)
                if !bt.contains_lattice(&zt.preimage(&mt, bt2)) {
                    continue;
                }
                let kmat = Mat::from_rows(self.entries[&src2].dim, gens2);
                let mut rows: Vec<Vec<Int>> = zt.basis().iter().map(|y| mt.apply(y)).collect();
                let k = rows.len();
                rows.extend(bt2.basis().iter().cloned());
                if rows.is_empty() {
                    continue;
                }
                let solver = Mat::from_rows(self.entries[&tgt2].dim, &rows);
                for x in &todo {
                    let Some(c) = zmat::solve_left(&kmat, &ms.apply(x)) else { continue };
                    let w = zmat::combine(vals2, &c, self.entries[&tgt2].dim);
                    let Some(sol) = zmat::solve_left(&solver, &w) else { continue };
                    let y = zmat::combine(zt.basis(), &sol[..k], self.entries[&tgt].dim);
                    out.push((src, tgt, x.clone(), y));
                }
                break;
            }
        }
        out
    }

    fn page(&mut self, r: u32) {
        let table = match self.fx.table(r) {
            Ok(t) => t.clone(),
            Err(_) => DifferentialTable { page: r, ..Default::default() },
        };
        let start = self.state.clone();
        let mut maps: BTreeMap<Key, (Key, Mat)> = BTreeMap::new();

        // top level from propagated pairs
        let pairs = self.orbit(&table);
        let mut by_src: BTreeMap<Key, (Key, Vec<Vec<Int>>, Vec<Vec<Int>>)> = BTreeMap::new();
        let mut used = Vec::new();
        for p in &pairs {
            let Some(tgt) = self.canon_target(p.x.key, r) else { continue };
            let y = match &p.y {
                Some(y) if y.key != tgt => {
                    self.fail(alloc::format!("d{r}: value of {} lands in {:?}, expected {:?}", p.x.gen, y.key, tgt));
                    continue;
                }
                Some(y) => y.coef.c.clone(),
                None => vec![0; self.entries[&tgt].dim],
            };
            let e = by_src.entry(p.x.key).or_insert_with(|| (tgt, Vec::new(), Vec::new()));
            let mu_src = &self.entries[&p.x.key].mu;
            let mu_tgt = &self.entries[&tgt].mu;
            let (mut xv, mut yv) = (p.x.coef.c.clone(), y);
            for _ in 0..self.depth {
                e.1.push(xv.clone());
                e.2.push(yv.clone());
                xv = mu_src.apply(&xv);
                yv = mu_tgt.apply(&yv);
            }
            used.push(p.clone());
        }
        self.pairs_used += used.len();
        let mults = self.multipliers(&table);
        for (src, e) in by_src.iter_mut() {
            for b in self.state[src].b.basis() {
                e.1.push(b.clone());
                e.2.push(vec![0; self.entries[&e.0].dim]);
            }
        }
        for _ in 0..8 {
            let found = self.divide(r, &mults, &by_src);
            if found.is_empty() {
                break;
            }
            for (src, tgt, x, y) in found {
                let dim_t = self.entries[&tgt].dim;
                let e = by_src.entry(src).or_insert_with(|| {
                    let b = self.state[&src].b.basis().to_vec();
                    let z = vec![vec![0; dim_t]; b.len()];
                    (tgt, b, z)
                });
                let (mu_s, mu_t) = (&self.entries[&src].mu, &self.entries[&tgt].mu);
                let (mut xv, mut yv) = (x, y);
                for _ in 0..self.depth {
                    e.1.push(xv.clone());
                    e.2.push(yv.clone());
                    xv = mu_s.apply(&xv);
                    yv = mu_t.apply(&yv);
                }
                self.inferred += 1;
            }
        }
        for (src, (tgt, gens, vals)) in by_src {
            let d = self.pin_down(src, tgt, &gens, &vals, r);
            maps.insert(src, (tgt, d));
        }

        // middle level from the closed rules
        let mids: Vec<Key> = self.entries.keys().filter(|k| k.level == Level::Mid).copied().collect();
        for src in mids {
            if let Some((tgt, mult)) = self.mid_map(&table, src) {
                let zb = self.state[&src].z.basis().to_vec();
                let tb = self.state[&tgt].b.clone();
                let rows: Vec<Vec<Int>> = zb.iter().map(|z| tb.reduce(&mult.apply(z))).collect();
                let d = if rows.is_empty() { Mat::zeros(0, self.entries[&tgt].dim) } else { Mat::from_rows(self.entries[&tgt].dim, &rows) };
                maps.insert(src, (tgt, d));
            }
        }

        // images must be cycles, and d∘d = 0
        for (src, (tgt, d)) in &maps {
            let zt = self.state[tgt].z.clone();
            for i in 0..d.rows {
                self.checks += 1;
                let y = d.row(i).to_vec();
                let Some(c) = zt.coords(&y) else {
                    self.fail(alloc::format!("d{r}: image from {:?} is not a cycle in {:?}", src, tgt));
                    continue;
                };
                if let Some((tgt2, d2)) = maps.get(tgt) {
                    let yy = d2.apply(&c);
                    if !self.state[tgt2].b.contains(&yy) {
                        self.fail(alloc::format!("d{r}: d∘d ≠ 0 starting at {:?}", src));
                    }
                }
            }
        }

        // restriction commutes with d_r
        for p in &used {
            let Some((mk, mx)) = self.res(&p.x) else { continue };
            let Some(tgt) = self.canon_target(p.x.key, r) else { continue };
            let ry = match &p.y {
                Some(y) => self.res(y),
                None => None,
            };
            let mtgt = Key { level: Level::Mid, ..tgt };
            let Some(mst) = self.state.get(&mtgt) else { continue };
            self.checks += 1;
            let zs = &self.state[&mk].z;
            let Some(c) = zs.coords(&mx) else {
                self.fail(alloc::format!("d{r}: restriction of {} is not a cycle", p.x.gen));
                continue;
            };
            let dx = match maps.get(&mk) {
                Some((k, d)) if *k == mtgt => d.apply(&c),
                _ => vec![0; self.entries[&mtgt].dim],
            };
            let ry = ry.map(|(_, v)| v).unwrap_or_else(|| vec![0; self.entries[&mtgt].dim]);
            if !mst.b.contains(&zmat::vec_sub(&dx, &ry)) {
                self.fail(alloc::format!("d{r}: restriction does not commute at {}", p.x.gen));
            }
        }

        if !maps.is_empty() {
            self.pages.insert(r, PageRecord { states: start, maps: maps.clone() });
        }

        // turn the page
        let mut new_b: BTreeMap<Key, Vec<Vec<Int>>> = BTreeMap::new();
        let mut new_z: BTreeMap<Key, Lattice> = BTreeMap::new();
        for (src, (tgt, d)) in &maps {
            let st = &self.state[src];
            let tb = &self.state[tgt].b;
            let k = st.z.rank();
            if k == 0 {
                continue;
            }
            let coords = Lattice::full(k).preimage(d, tb);
            let z = Lattice::from_gens(st.z.dim, coords.basis().iter().map(|c| zmat::combine(st.z.basis(), c, st.z.dim)).collect::<Vec<_>>());
            let imgs: Vec<Vec<Int>> = (0..d.rows).map(|i| d.row(i).to_vec()).filter(|v| !tb.contains(v)).collect();
            if !imgs.is_empty() {
                self.arrows.push(Arrow { page: r, src: *src, tgt: *tgt });
            }
            new_b.entry(*tgt).or_default().extend(imgs);
            new_z.insert(*src, z);
        }
        for (k, z) in new_z {
            self.state.get_mut(&k).unwrap().z = z;
        }
        for (k, gens) in new_b {
            let st = self.state.get_mut(&k).unwrap();
            st.b = st.b.add_gens(gens);
        }
    }
}

/// Runs the spectral sequence through the last page with rules.
pub fn run(fx: &Fixtures, depth: usize, window: Window, s_max: usize, sheets: &[Sheet]) -> Run {
    let mut e = Engine::new(fx, depth, window, s_max, sheets);
    let e2 = e.state.clone();
    for r in 2..=fx.max_page() {
        e.page(r);
    }
    Run {
        depth,
        window,
        s_max,
        entries: e.entries,
        e2,
        einf: e.state,
        arrows: e.arrows,
        pages: e.pages,
        failures: e.failures,
        checks_run: e.checks,
        pairs_used: e.pairs_used,
        inferred: e.inferred,
    }
}

/// Projection of entry coordinates from depth `m2` to depth `m1`.
fn projection(level: Level, m2: usize, m1: usize) -> Mat {
    let blocks = if level == Level::Top { 1 } else { 2 };
    let mut p = Mat::zeros(blocks * m2, blocks * m1);
    for b in 0..blocks {
        for i in 0..m1 {
            p.set(b * m2 + i, b * m1 + i, 1);
        }
    }
    p
}

/// Stable `E_∞` evaluated at `n`, from runs at two depths.
pub fn stable_einf(shallow: &Run, deep: &Run, n: usize) -> BTreeMap<Key, AbGroup> {
    let mut out = BTreeMap::new();
    for (key, st1) in &shallow.einf {
        let Some(st2) = deep.einf.get(key) else { continue };
        let info = &shallow.entries[key];
        let p = projection(key.level, deep.depth, shallow.depth);
        let zs = st2.z.image(&p).sum(&st1.b);
        let den = st1.b.sum(&zs.image(&info.mu.pow(n as u32)));
        let g = Subquotient::new(&zs, &den).group();
        out.insert(*key, g);
    }
    out
}

/// Same as [`stable_einf`] for the `E_2`-page.
pub fn stable_e2(shallow: &Run, n: usize) -> BTreeMap<Key, AbGroup> {
    let mut out = BTreeMap::new();
    for (key, st) in &shallow.e2 {
        let info = &shallow.entries[key];
        let den = st.b.sum(&st.z.image(&info.mu.pow(n as u32)));
        out.insert(*key, Subquotient::new(&st.z, &den).group());
    }
    out
}

/// `(s, group)` pieces per `(sheet, level, stem label)`, nonzero only and
/// restricted to `s ≤ s_report`.
pub type StemSummary = BTreeMap<(Sheet, Level, i64), Vec<(usize, AbGroup)>>;

pub fn summarize(groups: &BTreeMap<Key, AbGroup>, s_report: usize, window: Window) -> StemSummary {
    let mut out: StemSummary = BTreeMap::new();
    for (k, g) in groups {
        if g.is_zero() || k.s > s_report {
            continue;
        }
        let stem = k.t - k.s as i64;
        let stem = match window {
            Window::Cylinder => stem.rem_euclid(PERIOD),
            Window::Range(..) => stem,
        };
        let label = k.sheet.label(stem);
        let label = match (window, k.sheet) {
            (Window::Cylinder, Sheet::Sigma) => (label - 1).rem_euclid(PERIOD) + 1,
            _ => label,
        };
        out.entry((k.sheet, k.level, label)).or_default().push((k.s, g.clone()));
    }
    out
}

/// Multiset of `(free rank, torsion order)` of a list of pieces.
pub fn piece_orders(pieces: &[(usize, AbGroup)]) -> Vec<(usize, Int)> {
    let mut v: Vec<(usize, Int)> = pieces.iter().map(|(_, g)| g.rank_order()).collect();
    v.sort();
    v
}

/// `(free rank, torsion order)` multiset of the nonzero values at one
/// level of the named summands.
pub fn leaf_orders(leaves: &[[AbGroup; 3]], level: Level) -> Vec<(usize, Int)> {
    let mut v: Vec<(usize, Int)> =
        leaves.iter().map(|l| &l[level.index()]).filter(|g| !g.is_zero()).map(AbGroup::rank_order).collect();
    v.sort();
    v
}

/// Splits each summand along the chains `(sub, mid, quot)` until no piece
/// is the middle of a chain.
pub fn leaves<'b>(summands: &[&'b str], chains: &[[&'b str; 3]]) -> Vec<&'b str> {
    fn split<'b>(x: &'b str, chains: &[[&'b str; 3]], depth: usize, out: &mut Vec<&'b str>) {
        match chains.iter().find(|c| c[1] == x) {
            Some(c) if depth < 16 => {
                split(c[0], chains, depth + 1, out);
                split(c[2], chains, depth + 1, out);
            }
            _ => out.push(x),
        }
    }
    let mut out = Vec::new();
    for x in summands {
        split(x, chains, 0, &mut out);
    }
    out
}

/// Orders multiply along a chain, level by level.
pub fn extension_check(chain: &[[AbGroup; 3]; 3]) -> bool {
    (0..3).all(|l| {
        let (a, b, c) = (&chain[0][l], &chain[1][l], &chain[2][l]);
        b.free_rank == a.free_rank + c.free_rank && b.torsion_order() == a.torsion_order() * c.torsion_order()
    })
}

/// Smallest `d ∈ [0, 32)` with `summary_a(n) = summary_b(n + d)` for all
/// `n`, if any.
pub fn integer_shift(a: &BTreeMap<i64, Vec<(usize, Int)>>, b: &BTreeMap<i64, Vec<(usize, Int)>>) -> Option<i64> {
    (0..PERIOD).find(|d| {
        (0..PERIOD).all(|n| {
            let x = a.get(&n).cloned().unwrap_or_default();
            let y = b.get(&((n + d).rem_euclid(PERIOD))).cloned().unwrap_or_default();
            x == y
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono::parse_mono;

    #[test]
    fn rule_degrees_validated() {
        let good = DifferentialTable {
            page: 3,
            rules: vec![Rule {
                source: parse_mono("T2").unwrap(),
                target: vec![parse_mono("eta^3").unwrap()],
                citation: String::new(),
            }],
            ..Default::default()
        };
        good.validate().unwrap();
        let bad = DifferentialTable { page: 5, ..good };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn e2_pages_have_expected_shapes() {
        let fx = Fixtures::default();
        let run = run(&fx, 5, Window::Cylinder, 4, &[Sheet::Integer]);
        let g = stable_e2(&run, 3);
        let top = |s, t| g.get(&Key { sheet: Sheet::Integer, level: Level::Top, s, t }).cloned().unwrap_or_default();
        assert_eq!(top(0, 8), AbGroup::free(3));
        assert_eq!(top(1, 2), AbGroup::from_parts(0, &[2, 2, 2]));
        assert_eq!(top(2, 8), AbGroup::from_parts(0, &[4, 2, 2]));
        assert_eq!(top(1, 4), AbGroup::cyclic(2));
        assert!(top(1, 0).is_zero());
        let mid = g[&Key { sheet: Sheet::Integer, level: Level::Mid, s: 1, t: 2 }].clone();
        assert_eq!(mid, AbGroup::from_parts(0, &[2; 6]));
    }

    #[test]
    fn leaves_skip_middle_terms() {
        let chains = [["a", "b", "c"], ["d", "c", "e"]];
        assert_eq!(leaves(&["b", "x"], &chains), vec!["a", "d", "e", "x"]);
        assert_eq!(leaves(&["x", "y"], &[]), vec!["x", "y"]);
    }
}

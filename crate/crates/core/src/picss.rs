//! The Picard spectral sequence along the stem `t − s = 0`.
//!
//! Its `E_2` rows are `H^s(−, Z/2)` at `t = 0`, the unit cohomology at
//! `t = 1` and the additive page shifted by one for `t ≥ 2`. Off the
//! diagonal the differentials agree with the additive ones; on the diagonal
//! `s = t = r` they pick up the squaring map, and `d11` is propagated from
//! the middle level along transfers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::abgroup::{AbGroup, Subquotient};
use crate::coeff::{LambdaElt, QuadElt};
use crate::cohomology::{self, Coeffs, LEVELS};
use crate::hfpss::{EntryState, Key, Level, Run, Sheet};
use crate::lattice_quot::PicLowerBound;
use crate::mono::{normalize, top_generator, MidMono, Mono};
use crate::zmat::{self, Int, Lattice, Mat};
use crate::{Error, Result};

/// `tr(source) = target` from the middle level to the top level, on
/// `𝕜`-multiples of the generators.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub source: MidMono,
    pub target: Mono,
    /// Raises filtration (a transfer not visible on `E_2`).
    pub exotic: bool,
    pub citation: String,
}

/// Kernel of a twisted diagonal differential on `E_r^{r, r−1}`.
#[derive(Clone, Debug)]
pub struct TwistedKernel {
    pub r: u32,
    pub level: Level,
    pub source: AbGroup,
    pub raw_kernel: AbGroup,
    /// Kernel classes that lift to the deeper run.
    pub kernel: AbGroup,
}

/// The propagated `d11` at the top level.
#[derive(Clone, Debug)]
pub struct Propagated {
    pub kernel: TwistedKernel,
    /// `d+11 ∘ tr = tr ∘ d+7` on the transfer fixtures.
    pub composite_ok: bool,
    /// `d♠11(α ςϖ³Δ₁⁻³)` vanishes for `α = 0, 1`.
    pub vanishes: [bool; 2],
}

/// One diagonal entry `E♠^{s,s}` after its differentials.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub s: usize,
    pub groups: [AbGroup; 3],
    pub note: &'static str,
}

#[derive(Clone, Debug)]
pub struct OrderBound {
    pub entries: Vec<Diagonal>,
    pub orders: [Int; 3],
    /// `E+∞^{t, t−1} = 0` for `8 ≤ t < 40` at the top and middle levels.
    pub vanishing: bool,
}

#[derive(Clone, Debug)]
pub struct Theorem {
    pub lower: [Int; 3],
    pub upper: [Int; 3],
    pub groups: [AbGroup; 3],
    /// Order of `Pic` for the group generated by `−1` and a cube root of unity.
    pub c6_order: Int,
}

fn key(level: Level, s: usize, t: i64) -> Key {
    Key { sheet: Sheet::Integer, level, s, t }
}

fn state<'a>(run: &'a Run, r: u32, k: &Key) -> Result<&'a EntryState> {
    run.pages
        .get(&r)
        .and_then(|p| p.states.get(k))
        .ok_or_else(|| Error::Inconsistent(alloc::format!("no page {r} entry at {k:?}")))
}

/// `d_r` on the `z` basis of `src`, zero when the engine recorded none.
fn additive(run: &Run, r: u32, src: &Key, tgt: &Key) -> Result<Mat> {
    let k = state(run, r, src)?.z.rank();
    let dim = run.entries[tgt].dim;
    match run.pages.get(&r).and_then(|p| p.maps.get(src)) {
        Some((t, d)) if t == tgt => Ok(d.clone()),
        Some((t, _)) => Err(Error::Inconsistent(alloc::format!("d{r} from {src:?} lands in {t:?}"))),
        None => Ok(Mat::zeros(k, dim)),
    }
}

/// Squaring `x gen(src) ↦ x² gen(src)²` in entry coordinates.
fn squaring(run: &Run, src: &Key, tgt: &Key) -> Result<impl Fn(&[Int]) -> Vec<Int>> {
    let m = run.depth;
    let coef = match src.level {
        Level::Top => {
            let g = top_generator(src.s, src.t).ok_or(Error::OddDegree)?.0;
            let (c, sq, _) = normalize(&g.mul(&g).ok_or(Error::OddDegree)?, m)
                .ok_or_else(|| Error::Inconsistent("square vanishes".into()))?;
            let want = top_generator(tgt.s, tgt.t).ok_or(Error::OddDegree)?.0;
            if sq != want {
                return Err(Error::Inconsistent(alloc::format!("square of {g} is not {want}")));
            }
            Some(c)
        }
        Level::Mid => {
            // η0^s S20^k squares to η0^{2s} S20^{2k}
            let k = |key: &Key| (key.t - 2 * key.s as i64) / 4;
            if tgt.s != 2 * src.s || k(tgt) != 2 * k(src) {
                return Err(Error::Inconsistent("middle square lands elsewhere".into()));
            }
            None
        }
        Level::Bot => return Err(Error::Inconsistent("no diagonal at the bottom level".into())),
    };
    Ok(move |x: &[Int]| match &coef {
        Some(c) => {
            let f = LambdaElt { c: x.to_vec() };
            f.mul(&f).mul(c).c
        }
        None => {
            let f = QuadElt::from_vec(x);
            f.mul(&f).to_vec()
        }
    })
}

/// The twisted map `d + Sq` on `Z_r(src)` as rows, after checking that the
/// squaring is additive modulo `B_r(tgt)` and kills `B_r(src)`.
fn twisted_rows(run: &Run, r: u32, src: &Key, tgt: &Key) -> Result<(Vec<Vec<Int>>, Mat)> {
    let st = state(run, r, src)?;
    let bt = &state(run, r, tgt)?.b;
    let sq = squaring(run, src, tgt)?;
    let zb = st.z.basis().to_vec();
    // Sq(x + y) − Sq(x) − Sq(y) = 2xy must vanish in E_r(tgt)
    for (i, x) in zb.iter().enumerate() {
        for y in &zb[i..] {
            let s = zmat::vec_sub(&zmat::vec_sub(&sq(&zmat::vec_add(x, y)), &sq(x)), &sq(y));
            if !bt.contains(&s) {
                return Err(Error::Inconsistent(alloc::format!("squaring is not additive on {src:?}")));
            }
        }
    }
    for b in st.b.basis() {
        if !bt.contains(&sq(b)) {
            return Err(Error::Inconsistent(alloc::format!("squaring does not preserve boundaries at {src:?}")));
        }
    }
    let d = additive(run, r, src, tgt)?;
    let dim = run.entries[tgt].dim;
    let rows: Vec<Vec<Int>> = zb.iter().enumerate().map(|(i, x)| zmat::vec_add(d.row(i), &sq(x))).collect();
    let m = if rows.is_empty() { Mat::zeros(0, dim) } else { Mat::from_rows(dim, &rows) };
    Ok((zb, m))
}

/// Kernel of `d + Sq` on `E_r(src)` as a lattice in entry coordinates.
/// `None` when the source entry is zero.
fn twisted_kernel_lattice(run: &Run, r: u32, level: Level) -> Result<Option<(Lattice, Lattice, Lattice)>> {
    let src = key(level, r as usize, r as i64 - 1);
    let tgt = key(level, 2 * r as usize, 2 * r as i64 - 2);
    if !run.entries.contains_key(&src) {
        return Ok(None);
    }
    let st = state(run, r, &src)?;
    if !run.entries.contains_key(&tgt) {
        return Ok(Some((st.z.clone(), st.b.clone(), st.z.clone())));
    }
    let bt = state(run, r, &tgt)?.b.clone();
    let (zb, m) = twisted_rows(run, r, &src, &tgt)?;
    let dim = run.entries[&src].dim;
    if zb.is_empty() {
        return Ok(Some((st.z.clone(), st.b.clone(), st.b.clone())));
    }
    let coords = Lattice::full(zb.len()).preimage(&m, &bt);
    let k = Lattice::from_gens(dim, coords.basis().iter().map(|c| zmat::combine(&zb, c, dim)).collect::<Vec<_>>());
    Ok(Some((st.z.clone(), st.b.clone(), k.sum(&st.b))))
}

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

fn stable_image(shallow_b: &Lattice, deep_k: &Lattice, level: Level, m2: usize, m1: usize) -> AbGroup {
    let p = projection(level, m2, m1);
    let img = shallow_b.add_gens(deep_k.basis().iter().map(|v| p.apply(v)).collect::<Vec<_>>());
    Subquotient::new(&img, shallow_b).group()
}

/// `d♠r = d+r + Sq` on `E_r^{r, r−1}` for `r ∈ {3, 5, 7}`.
pub fn twist_diagonal(shallow: &Run, deep: &Run, r: u32, level: Level) -> Result<TwistedKernel> {
    if !matches!(r, 3 | 5 | 7) {
        return Err(Error::UnknownPage(r));
    }
    let (Some((z1, b1, k1)), Some((_, _, k2))) =
        (twisted_kernel_lattice(shallow, r, level)?, twisted_kernel_lattice(deep, r, level)?)
    else {
        let zero = AbGroup::zero();
        return Ok(TwistedKernel { r, level, source: zero.clone(), raw_kernel: zero.clone(), kernel: zero });
    };
    Ok(TwistedKernel {
        r,
        level,
        source: Subquotient::new(&z1, &b1).group(),
        raw_kernel: Subquotient::new(&k1, &b1).group(),
        kernel: stable_image(&b1, &k2, level, deep.depth, shallow.depth),
    })
}

/// Constant-term map onto a top line: `α g ↦ α c g'` with `α ∈ 𝕜`.
fn line_map(c: &[Int], v: &[Int]) -> Vec<Int> {
    let a = v[0].rem_euclid(2);
    c.iter().map(|x| a * x).collect()
}

fn find_transfer<'a>(fx: &'a [Transfer], exotic: bool) -> Result<&'a Transfer> {
    fx.iter()
        .find(|t| t.exotic == exotic)
        .ok_or_else(|| Error::Fixture(alloc::format!("missing {} transfer", if exotic { "exotic" } else { "plain" })))
}

fn mid_key(m: &MidMono) -> Key {
    let s = m.eta0 as usize;
    key(Level::Mid, s, 2 * s as i64 + 4 * m.s20)
}

/// Entry of a top monomial and its coefficient on the entry generator.
fn top_key(m: &Mono, run: &Run) -> Result<(Key, Vec<Int>)> {
    let k = key(Level::Top, m.s(), m.t());
    let (c, g, _) = normalize(m, run.depth).ok_or_else(|| Error::Fixture(alloc::format!("{m} vanishes")))?;
    if Some(g) != top_generator(k.s, k.t).map(|x| x.0) {
        return Err(Error::Fixture(alloc::format!("{m} is not a multiple of an entry generator")));
    }
    let dim = run.entries.get(&k).ok_or_else(|| Error::Fixture(alloc::format!("{m} is outside the run")))?.dim;
    let mut v = c.c;
    v.resize(dim, 0);
    Ok((k, v))
}

/// `d♠11` at the top from `d♠7` at the middle level and the transfers.
fn propagate_at(run: &Run, fx: &[Transfer]) -> Result<(Lattice, Lattice, Lattice, bool, [bool; 2])> {
    let plain = find_transfer(fx, false)?;
    let exotic = find_transfer(fx, true)?;
    let (ms, mt) = (mid_key(&plain.source), mid_key(&exotic.source));
    let ((ts, c_ts), (tt, c_tt)) = (top_key(&plain.target, run)?, top_key(&exotic.target, run)?);
    if mt != key(Level::Mid, 2 * ms.s, 2 * ms.t) || ms.s != 7 || ms.t != 6 {
        return Err(Error::Fixture("transfer sources are not the d7 diagonal".into()));
    }
    let dim_ms = run.entries[&ms].dim;
    if tt != key(Level::Top, ts.s + 11, ts.t + 10) {
        return Err(Error::Fixture("exotic transfer does not land on the d11 target".into()));
    }

    // the top entry on page 11, restricted to the d♠7 kernel there
    let st = state(run, 11, &ts)?;
    let bt11 = state(run, 11, &tt)?.b.clone();
    let d11 = additive(run, 11, &ts, &tt)?;
    let mst = state(run, 7, &ms)?;
    let (_, twisted7) = twisted_rows(run, 7, &ms, &mt)?;
    let d7 = additive(run, 7, &ms, &mt)?;

    // the mid generator, transferred
    let mut gen = vec![0; dim_ms];
    gen[0] = 1;
    if !mst.z.contains(&gen) || mst.b.contains(&gen) {
        return Err(Error::Inconsistent("d7 source generator is not a nonzero class".into()));
    }
    let gcoords = mst.z.coords(&gen).expect("cycle");
    let trg = line_map(&c_ts, &gen);

    // additive composite: d+11(tr z) = tr(d+7 z)
    let composite_ok = match st.z.coords(&trg) {
        Some(c) => {
            let lhs = d11.apply(&c);
            let rhs = line_map(&c_tt, &d7.apply(&gcoords));
            bt11.contains(&zmat::vec_sub(&lhs, &rhs))
        }
        None => false,
    };

    // d♠11(α tr g) = tr(d♠7(α g))
    let mut vanishes = [false; 2];
    for (a, v) in vanishes.iter_mut().enumerate() {
        let z: Vec<Int> = gcoords.iter().map(|x| x * a as Int).collect();
        let y = twisted7.apply(&z);
        *v = bt11.contains(&line_map(&c_tt, &y));
    }

    // kernel on E_11(ts): x ↦ tr(d♠7(tr⁻¹ x)), with tr⁻¹ on the generator line
    let zb = st.z.basis().to_vec();
    let rows: Vec<Vec<Int>> = zb
        .iter()
        .map(|x| {
            let a = x[0];
            let z: Vec<Int> = gcoords.iter().map(|c| c * a).collect();
            line_map(&c_tt, &twisted7.apply(&z))
        })
        .collect();
    let k = if zb.is_empty() {
        st.b.clone()
    } else {
        let coords = Lattice::full(zb.len()).preimage(&Mat::from_rows(c_tt.len(), &rows), &bt11);
        Lattice::from_gens(c_ts.len(), coords.basis().iter().map(|c| zmat::combine(&zb, c, c_ts.len())).collect::<Vec<_>>()).sum(&st.b)
    };
    Ok((st.z.clone(), st.b.clone(), k, composite_ok, vanishes))
}

pub fn transfer_propagate(shallow: &Run, deep: &Run, fx: &[Transfer]) -> Result<Propagated> {
    let (z1, b1, k1, composite_ok, vanishes) = propagate_at(shallow, fx)?;
    let (_, _, k2, ok2, _) = propagate_at(deep, fx)?;
    Ok(Propagated {
        kernel: TwistedKernel {
            r: 11,
            level: Level::Top,
            source: Subquotient::new(&z1, &b1).group(),
            raw_kernel: Subquotient::new(&k1, &b1).group(),
            kernel: stable_image(&b1, &k2, Level::Top, deep.depth, shallow.depth),
        },
        composite_ok: composite_ok && ok2,
        vanishes,
    })
}

/// `H^s(−, Z/2)` at the three levels.
pub fn trivial_mod_two(s: usize) -> [AbGroup; 3] {
    let m = Coeffs::trivial().quotient(2);
    LEVELS.map(|h| cohomology::cohomology(&m, h, s))
}

/// Upper bound for `|Pic|` at each level from the diagonal survivors.
/// `units` is the algebraic Picard Mackey functor and `einf` the stable
/// additive `E∞` of `shallow`.
pub fn order_bound(
    shallow: &Run,
    deep: &Run,
    units: &[AbGroup; 3],
    einf: &alloc::collections::BTreeMap<Key, AbGroup>,
    fx: &[Transfer],
) -> Result<OrderBound> {
    let zero = AbGroup::zero;
    let mut entries = vec![
        Diagonal { s: 0, groups: trivial_mod_two(0), note: "H^0(Z/2)" },
        Diagonal { s: 1, groups: units.clone(), note: "H^1 of the units" },
    ];
    for r in [3u32, 5] {
        let top = twist_diagonal(shallow, deep, r, Level::Top)?.kernel;
        let mid = twist_diagonal(shallow, deep, r, Level::Mid)?.kernel;
        entries.push(Diagonal { s: r as usize, groups: [top, mid, zero()], note: "d + squaring" });
    }
    let mid7 = twist_diagonal(shallow, deep, 7, Level::Mid)?.kernel;
    let top11 = transfer_propagate(shallow, deep, fx)?.kernel.kernel;
    entries.push(Diagonal { s: 7, groups: [top11, mid7, zero()], note: "d7 in the middle, d11 by transfer" });

    let mut vanishing = true;
    for t in 8..40i64 {
        for level in [Level::Top, Level::Mid] {
            let (tt, _) = shallow.window.canon(t - 1).ok_or_else(|| Error::Inconsistent("window".into()))?;
            match einf.get(&key(level, t as usize, tt)) {
                Some(g) => vanishing &= g.is_zero(),
                None => {
                    if t as usize <= shallow.s_max {
                        vanishing &= shallow.entries.get(&key(level, t as usize, tt)).is_none();
                    } else {
                        vanishing = false;
                    }
                }
            }
        }
    }
    let mut orders = [1 as Int; 3];
    for e in &entries {
        for (o, g) in orders.iter_mut().zip(&e.groups) {
            *o *= g.order().ok_or_else(|| Error::Inconsistent("infinite diagonal entry".into()))?;
        }
    }
    Ok(OrderBound { entries, orders, vanishing })
}

/// Matches the upper bound against the image of the J-homomorphism.
pub fn synthesize(bound: &OrderBound, lower: &PicLowerBound) -> Result<Theorem> {
    let lo = lower.orders();
    if lo != bound.orders || !bound.vanishing {
        return Err(Error::Inconsistent(alloc::format!("bounds differ: lower {lo:?}, upper {:?}", bound.orders)));
    }
    let groups = [lower.levels[0].abgroup(), lower.levels[1].abgroup(), lower.levels[2].abgroup()];
    Ok(Theorem { lower: lo, upper: bound.orders, groups, c6_order: 3 * lo[1] })
}

//! The end-to-end pipeline: each stage computes, checks and reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use specseq_core::abgroup::AbGroup;
use specseq_core::cohomology::{stable_named, Coeffs, LEVELS};
use specseq_core::hfpss::{self, Key, Level, Run, Sheet, Window};
use specseq_core::lattice_quot::{self, is_integer_shift, j_image, reduce};
use specseq_core::rep_ring::{self, parse_expr, Group, VirtualRep};
use specseq_core::units::{self, Ring};
use specseq_core::{classes, cohomology, mackey, modules, picss, Int};

use crate::chart;
use crate::config::Config;
use crate::fixtures::{self, Homotopy};

pub const SCHEMA: &str = "specseq-report";
pub const SCHEMA_VERSION: u32 = 1;

/// Filtrations reported on the 32-periodic cylinder. Every stem below 32
/// is concentrated well below this line.
const CYLINDER_S: usize = 40;
/// Longest differential in the fixtures, plus one.
const REACH: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Rep,
    Jimage,
    Cohom,
    Hfpss,
    Picalg,
    Pic,
}

impl Stage {
    pub const ALL: [Stage; 6] = [Stage::Rep, Stage::Jimage, Stage::Cohom, Stage::Hfpss, Stage::Picalg, Stage::Pic];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Rep => "rep",
            Stage::Jimage => "jimage",
            Stage::Cohom => "cohom",
            Stage::Hfpss => "hfpss",
            Stage::Picalg => "picalg",
            Stage::Pic => "pic",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: u32,
    pub config_hash: String,
    pub config: Config,
    pub stages: BTreeMap<&'static str, Value>,
    pub checks: Vec<Check>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    /// Pass/fail per criterion, over the checks present in the report.
    pub fn criteria(&self) -> BTreeMap<u8, bool> {
        let mut out = BTreeMap::new();
        for c in &self.checks {
            *out.entry(c.criterion).or_insert(true) &= c.ok;
        }
        out
    }
}

/// A finished run: the report and the charts by file name.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub report: Report,
    pub charts: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

type StageResult<T> = Result<T, StageError>;

fn fail(stage: Stage) -> impl Fn(specseq_core::Error) -> StageError {
    move |e| StageError { stage: stage.name(), message: e.to_string() }
}

struct Runs {
    shallow: Run,
    deep: Run,
}

/// Shared state, computed on first use.
struct Ctx<'a> {
    cfg: &'a Config,
    fx: hfpss::Fixtures,
    homotopy: Homotopy,
    transfers: Vec<picss::Transfer>,
    cylinder: Option<Runs>,
    pic_alg: Option<units::PicAlg>,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn check(&mut self, criterion: u8, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { criterion, name: name.into(), ok, detail: detail.into() });
    }

    fn cylinder(&mut self) -> &Runs {
        if self.cylinder.is_none() {
            let n = self.cfg.mu_depth;
            let sheets = [Sheet::Integer, Sheet::Sigma];
            let s = CYLINDER_S + REACH;
            let shallow = hfpss::run(&self.fx, n + 2, Window::Cylinder, s, &sheets);
            let deep = hfpss::run(&self.fx, n + 4, Window::Cylinder, s, &sheets);
            self.cylinder = Some(Runs { shallow, deep });
        }
        self.cylinder.as_ref().expect("just set")
    }

    fn pic_alg(&mut self) -> StageResult<&units::PicAlg> {
        if self.pic_alg.is_none() {
            let p = units::pic_alg_mackey(self.cfg.mixed_depth, self.cfg.delta).map_err(fail(Stage::Picalg))?;
            self.pic_alg = Some(p);
        }
        Ok(self.pic_alg.as_ref().expect("just set"))
    }
}

fn groups_json(g: &[AbGroup]) -> Value {
    Value::Array(g.iter().map(|x| Value::String(x.to_string())).collect())
}

fn rep(ctx: &mut Ctx) -> StageResult<Value> {
    let err = fail(Stage::Rep);
    let mut table = BTreeMap::new();
    let basis: Vec<VirtualRep> = (0..Group::C4.rank()).map(|i| VirtualRep::basis(Group::C4, i)).collect();
    for a in &basis {
        for b in &basis {
            let p = rep_ring::rr_mul(a, b).map_err(&err)?;
            table.insert(format!("({a})*({b})"), p.to_string());
        }
    }
    let ll = parse_expr("lambda*lambda").map_err(&err)?;
    ctx.check(1, "lambda squared is 2 + 2 sigma", ll.to_string() == "2 + 2*sigma", ll.to_string());
    // Frobenius reciprocity ind(res(x) y) = x ind(y) on basis pairs
    let mut frob = true;
    for (hi, lo) in [(Group::C4, Group::C2), (Group::C2, Group::Trivial), (Group::C4, Group::Trivial)] {
        for i in 0..hi.rank() {
            for j in 0..lo.rank() {
                let x = VirtualRep::basis(hi, i);
                let y = VirtualRep::basis(lo, j);
                let lhs = rep_ring::rr_induce(&rep_ring::rr_mul(&rep_ring::rr_restrict(&x, lo).map_err(&err)?, &y).map_err(&err)?, hi)
                    .map_err(&err)?;
                let rhs = rep_ring::rr_mul(&x, &rep_ring::rr_induce(&y, hi).map_err(&err)?).map_err(&err)?;
                frob &= lhs == rhs;
            }
        }
    }
    ctx.check(1, "Frobenius reciprocity on basis pairs", frob, "");
    let characters: BTreeMap<String, Vec<Int>> =
        basis.iter().map(|v| (v.to_string(), rep_ring::rr_character(v).values)).collect();
    Ok(json!({ "products": table, "characters": characters }))
}

fn jimage(ctx: &mut Ctx) -> StageResult<Value> {
    let err = fail(Stage::Jimage);
    let q4 = j_image(Group::C4);
    let q2 = j_image(Group::C2);
    ctx.check(1, "invariant factors for C4", q4.invariant_factors == [2, 32], format!("{:?}", q4.invariant_factors));
    ctx.check(1, "invariant factors for C2", q2.invariant_factors == [16], format!("{:?}", q2.invariant_factors));
    let mut reductions = BTreeMap::new();
    for e in ["2*sigma - 2", "sigma - 1", "15 + sigma", "1 - sigma", "lambda - 2", "rho4 - 4"] {
        let v = reduce(&q4, &parse_expr(e).map_err(&err)?).map_err(&err)?;
        reductions.insert(e, v);
    }
    ctx.check(1, "reduce(2 sigma - 2) = (16, 0)", reductions["2*sigma - 2"] == [16, 0], format!("{:?}", reductions["2*sigma - 2"]));
    ctx.check(1, "reduce(sigma - 1) = (24, 1)", reductions["sigma - 1"] == [24, 1], format!("{:?}", reductions["sigma - 1"]));
    ctx.check(1, "reduce(15 + sigma) = reduce(1 - sigma)", reductions["15 + sigma"] == reductions["1 - sigma"], "");
    let shift = is_integer_shift(&q4, &parse_expr("sigma - 1").map_err(&err)?).map_err(&err)?;
    ctx.check(1, "sigma - 1 is not an integer shift", shift.is_none(), format!("{shift:?}"));

    let lb = lattice_quot::pic_lower_bound_mackey();
    let tr = lb.tr[0].row(0).to_vec();
    let res = lb.res[0].col(0);
    ctx.check(2, "transfer row (26, 1)", tr == [26, 1], format!("{tr:?}"));
    ctx.check(2, "restriction column (1, 8)", res == [1, 8], format!("{res:?}"));
    let frob = lb.check_tr_res();
    ctx.check(2, "tr(res x) = x Ind(1)", frob.is_ok(), frob.err().map(|e| e.to_string()).unwrap_or_default());
    let levels: Vec<Value> = lb
        .levels
        .iter()
        .map(|q| json!({ "group": q.group.name(), "invariant_factors": q.invariant_factors, "orders": q.orders }))
        .collect();
    Ok(json!({
        "reductions": reductions,
        "lower_bound": { "levels": levels, "tr": [lb.tr[0].row_vecs(), lb.tr[1].row_vecs()], "res": [lb.res[0].row_vecs(), lb.res[1].row_vecs()], "orders": lb.orders() },
    }))
}

fn cohom(ctx: &mut Ctx) -> StageResult<Value> {
    let err = fail(Stage::Cohom);
    let n = ctx.cfg.mu_depth;
    let mut table = BTreeMap::new();
    for name in modules::DICTIONARY {
        let mut rows = Vec::new();
        let mut ok = true;
        let mut first_bad = String::new();
        for s in 0..=8 {
            let mf = stable_named(name, n, ctx.cfg.delta, s).map_err(&err)?;
            let got = mf.groups();
            let form = mackey::closed_form(name, s).map_err(&err)?;
            let want = mackey::evaluate(form, n).map_err(&err)?;
            if let Err(e) = mf.check() {
                ok = false;
                first_bad = format!("s = {s}: {e}");
            } else if got != want && first_bad.is_empty() {
                ok = false;
                first_bad = format!("s = {s}: got {got:?}, closed form {form}");
            }
            rows.push(json!({ "s": s, "groups": groups_json(&got), "closed_form": form }));
        }
        ctx.check(3, format!("H^s(-, {name}) for s <= 8"), ok, first_bad);
        table.insert(name, rows);
    }
    let trivial: Vec<Value> =
        (0..=4).map(|s| groups_json(&LEVELS.map(|h| cohomology::cohomology(&Coeffs::trivial().quotient(2), h, s)))).collect();

    let cc = classes::Ctx::new(n);
    let named = classes::Named::build(&cc, ctx.cfg.delta).map_err(&err)?;
    let groups: [(&str, Vec<classes::Check>); 4] = [
        ("restriction formula", classes::restriction_checks(&cc, &named)),
        ("transfer formula", classes::transfer_checks(&cc, &named)),
        ("cocycle relation", classes::relation_checks(&cc, &named)),
        ("Frobenius identity", classes::frobenius_checks(&cc, &named, 20, 7)),
    ];
    let mut counts = BTreeMap::new();
    for (label, checks) in groups {
        counts.insert(label, checks.len());
        for c in checks {
            ctx.check(4, format!("{label}: {}", c.name), c.ok, "");
        }
    }
    Ok(json!({ "dictionary": table, "trivial_mod_two": trivial, "identity_counts": counts }))
}

/// Stable E∞ stem summary keyed by label, for one sheet and level.
fn level_summary(sum: &hfpss::StemSummary, sheet: Sheet, level: Level) -> BTreeMap<i64, Vec<(usize, Int)>> {
    sum.iter()
        .filter(|((sh, lv, _), _)| *sh == sheet && *lv == level)
        .map(|((_, _, t), pieces)| (*t, hfpss::piece_orders(pieces)))
        .collect()
}

fn hfpss_stage(ctx: &mut Ctx, charts: &mut BTreeMap<String, String>) -> StageResult<Value> {
    let err = fail(Stage::Hfpss);
    let n = ctx.cfg.mu_depth;
    let window = ctx.cfg.window.clone();
    let homotopy = ctx.homotopy.clone();
    let runs = ctx.cylinder();
    let einf = hfpss::stable_einf(&runs.shallow, &runs.deep, n);
    let e2 = hfpss::stable_e2(&runs.shallow, n);
    let internal: Vec<String> = runs.shallow.failures.iter().chain(&runs.deep.failures).cloned().collect();
    let checks_run = runs.shallow.checks_run + runs.deep.checks_run;
    let arrows = runs.shallow.arrows.clone();
    let sum = hfpss::summarize(&einf, CYLINDER_S, Window::Cylinder);

    ctx.check(5, "d^2 = 0 and Mackey compatibility on every page", internal.is_empty(), format!("{checks_run} checks, {} failures", internal.len()));
    let mut stems = Vec::new();
    for sheet in [Sheet::Integer, Sheet::Sigma] {
        let mut bad = Vec::new();
        let mut chains_ok = true;
        for e in homotopy.sheet(sheet) {
            let leaves: Vec<[AbGroup; 3]> =
                Homotopy::leaves(e).iter().map(|l| mackey::evaluate(l, n)).collect::<Result<_, _>>().map_err(&err)?;
            for c in &e.chains {
                let ch = [mackey::evaluate(&c[0], n).map_err(&err)?, mackey::evaluate(&c[1], n).map_err(&err)?, mackey::evaluate(&c[2], n).map_err(&err)?];
                chains_ok &= hfpss::extension_check(&ch);
            }
            let mut row = BTreeMap::new();
            for level in Level::ALL {
                let pieces = sum.get(&(sheet, level, e.t)).cloned().unwrap_or_default();
                if hfpss::piece_orders(&pieces) != hfpss::leaf_orders(&leaves, level) {
                    bad.push(format!("{} {:?}", e.t, level));
                }
                let p: Vec<Value> = pieces.iter().map(|(s, g)| json!([s, g.to_string()])).collect();
                row.insert(format!("{level:?}").to_lowercase(), Value::Array(p));
            }
            stems.push(json!({ "sheet": sheet.name(), "t": e.t, "expected": e.value, "pieces": row }));
        }
        ctx.check(5, format!("E-infinity pieces on the {} sheet", sheet.name()), bad.is_empty(), bad.join(", "));
        ctx.check(5, format!("extension chains on the {} sheet", sheet.name()), chains_ok, "");
    }

    // the two sheets are not shifts of each other
    let int_top = level_summary(&sum, Sheet::Integer, Level::Top);
    let sig_top = level_summary(&sum, Sheet::Sigma, Level::Top);
    let shift = hfpss::integer_shift(&int_top, &sig_top);
    ctx.check(6, "sheets are not related by an integer shift", shift.is_none(), format!("{shift:?}"));

    let per = periodicity(ctx)?;

    let svg_e2 = chart::hfpss_chart(&e2, &arrows, Sheet::Integer, window.s_max, "E2, integer sheet", &ctx.cfg.hash(), n);
    charts.insert("hfpss_e2_integer.svg".into(), svg_e2);
    for sheet in [Sheet::Integer, Sheet::Sigma] {
        let title = format!("E-infinity, {} sheet", sheet.name());
        let svg = chart::hfpss_chart(&einf, &[], sheet, window.s_max, &title, &ctx.cfg.hash(), n);
        charts.insert(format!("hfpss_einf_{}.svg", sheet.name()), svg);
    }
    let arrows_json: Vec<Value> = arrows
        .iter()
        .filter(|a| a.src.s <= window.s_max)
        .map(|a| json!({ "page": a.page, "sheet": a.src.sheet.name(), "level": format!("{:?}", a.src.level).to_lowercase(), "source": [a.src.s, a.src.t], "target": [a.tgt.s, a.tgt.t] }))
        .collect();
    Ok(json!({ "stems": stems, "differentials": arrows_json, "periodicity": per, "checks_run": checks_run }))
}

/// Compares stable E∞ on an unwrapped window at `t` and `t + period`.
fn periodicity(ctx: &mut Ctx) -> StageResult<Value> {
    let n = ctx.cfg.mu_depth;
    let w = ctx.cfg.window.clone();
    let margin = REACH as i64 + 2;
    let range = Window::Range(w.t_min - margin, w.t_max + margin);
    let sheets = [Sheet::Integer, Sheet::Sigma];
    let shallow = hfpss::run(&ctx.fx, n + 2, range, w.s_max + REACH, &sheets);
    let deep = hfpss::run(&ctx.fx, n + 4, range, w.s_max + REACH, &sheets);
    let einf = hfpss::stable_einf(&shallow, &deep, n);
    let order = |k: &Key| einf.get(k).map(AbGroup::rank_order).unwrap_or((0, 1));
    let mut out = BTreeMap::new();
    for (level, period, label) in [(Level::Top, 32i64, "top, t to t + 32"), (Level::Mid, 16, "middle, t to t + 16")] {
        let mut compared = 0usize;
        let mut bad = Vec::new();
        for sheet in sheets {
            for s in 0..=w.s_max {
                for t in w.t_min..w.t_max - period {
                    let a = Key { sheet, level, s, t };
                    let b = Key { t: t + period, ..a };
                    compared += 1;
                    if order(&a) != order(&b) {
                        bad.push(format!("{} ({s}, {t})", sheet.name()));
                    }
                }
            }
        }
        let ok = bad.is_empty() && shallow.failures.is_empty() && deep.failures.is_empty();
        ctx.check(6, format!("periodicity at the {label}"), ok, format!("{compared} entries compared{}", if bad.is_empty() { String::new() } else { format!("; differ at {}", bad.join(", ")) }));
        out.insert(label, compared);
    }
    Ok(json!({ "window": [w.t_min, w.t_max], "compared": out }))
}

fn picalg(ctx: &mut Ctx) -> StageResult<Value> {
    let err = fail(Stage::Picalg);
    let (k, d) = (ctx.cfg.mixed_depth, ctx.cfg.delta);
    let z2 = AbGroup::cyclic(2);
    let mut h1 = BTreeMap::new();
    let mut direct = BTreeMap::new();
    for (label, group, ring, min_a) in [
        ("H1(C2, units)", Group::C2, Ring::Mixed(k), 0),
        ("H1(C4, U1)", Group::C4, Ring::Mixed(k), 1),
        ("H1(C4, units mod 2)", Group::C4, Ring::ModTwo(k), 0),
    ] {
        let h = units::h1_units(group, ring, min_a, d).map_err(&err)?;
        ctx.check(7, format!("stable {label} = Z/2"), h.stable == z2, h.stable.to_string());
        direct.insert(label, h.stable.order().unwrap_or(0));
        h1.insert(label, json!({ "raw": h.raw_shallow.to_string(), "raw_deep": h.raw_deep.to_string(), "stable": h.stable.to_string() }));
    }
    let p = ctx.pic_alg()?.clone();
    let want = [AbGroup::cyclic(4), z2.clone(), AbGroup::zero()];
    ctx.check(7, "algebraic Picard Mackey functor (Z/4, Z/2, 0)", p.groups == want, format!("{:?}", p.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>()));
    ctx.check(7, "restriction onto the middle level", p.res_surjective, "");
    ctx.check(7, "transfer after restriction is 2", p.tr_is_double, "");
    ctx.check(7, "twist class has order 4", p.twist_order == 4 && p.twist_witnesses.iter().all(|w| *w), format!("order {}", p.twist_order));
    let fixed = units::fixed_points_surject(k, d);
    ctx.check(7, "fixed points surject mod 2", fixed, "");

    let mut charts = BTreeMap::new();
    for (label, ring, min_a, brute) in [("U", Ring::Mixed(k), 1, "H1(C4, U1)"), ("V", Ring::ModTwo(k), 0, "H1(C4, units mod 2)")] {
        let b = units::bockstein(ring, min_a, d, 2).map_err(&err)?;
        let row = &b.stable_einf[1];
        let at: Vec<u32> = (b.first..=b.last).filter(|n| !row[(n - b.first) as usize].is_zero()).collect();
        ctx.check(7, format!("{label}-filtration E-infinity in degree 1 only at n = 1"), at == [1], format!("{at:?}"));
        let total = b.stable_total(1);
        let want = direct[brute];
        ctx.check(7, format!("{label}-filtration total agrees with direct {brute}"), total == want, format!("{total} vs {want}"));
        let page = |v: &Vec<Vec<AbGroup>>| -> Value { Value::Array(v.iter().map(|r| groups_json(r)).collect()) };
        charts.insert(label, json!({ "first": b.first, "last": b.last, "e1": page(&b.e1), "e2": page(&b.e2), "einf": page(&b.einf), "stable_einf": page(&b.stable_einf) }));
    }
    Ok(json!({
        "depth": k,
        "delta": d,
        "h1": h1,
        "pic_alg": groups_json(&p.groups),
        "twist_order": p.twist_order,
        "bockstein": charts,
    }))
}

fn pic(ctx: &mut Ctx, charts: &mut BTreeMap<String, String>, summary: &mut Vec<String>) -> StageResult<Value> {
    let err = fail(Stage::Pic);
    let n = ctx.cfg.mu_depth;
    let units = ctx.pic_alg()?.groups.clone();
    let transfers = ctx.transfers.clone();
    let runs = ctx.cylinder();
    let einf = hfpss::stable_einf(&runs.shallow, &runs.deep, n);
    let bound = picss::order_bound(&runs.shallow, &runs.deep, &units, &einf, &transfers).map_err(&err)?;
    let prop = picss::transfer_propagate(&runs.shallow, &runs.deep, &transfers).map_err(&err)?;
    let kernels: Vec<picss::TwistedKernel> = [(3, Level::Top), (3, Level::Mid), (5, Level::Top), (7, Level::Mid)]
        .iter()
        .map(|(r, l)| picss::twist_diagonal(&runs.shallow, &runs.deep, *r, *l))
        .collect::<Result<_, _>>()
        .map_err(&err)?;

    let z2 = AbGroup::cyclic(2);
    let top_orders: Vec<Int> = bound.entries.iter().map(|e| e.groups[0].order().unwrap_or(0)).collect();
    ctx.check(8, "top diagonal orders 2, 4, 2, 2, 2", top_orders == [2, 4, 2, 2, 2], format!("{top_orders:?}"));
    ctx.check(8, "s = 0 row is Z/2", bound.entries[0].groups[0] == z2, bound.entries[0].groups[0].to_string());
    ctx.check(8, "d11 composite with transfers", prop.composite_ok, "");
    ctx.check(8, "d11 vanishes on the transferred class", prop.vanishes.iter().all(|v| *v), format!("{:?}", prop.vanishes));
    ctx.check(8, "additive E-infinity vanishes on the diagonal for 8 <= t < 40", bound.vanishing, "");
    ctx.check(8, "order bounds 64 / 16 / 2", bound.orders == [64, 16, 2], format!("{:?}", bound.orders));

    let lower = lattice_quot::pic_lower_bound_mackey();
    let theorem = picss::synthesize(&bound, &lower);
    ctx.check(8, "lower bound equals upper bound", theorem.is_ok(), theorem.as_ref().err().map(|e| e.to_string()).unwrap_or_default());
    let names = lower.levels.iter().map(|q| {
        if q.orders.is_empty() {
            "0".to_string()
        } else {
            q.orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join(" + ")
        }
    });
    let names: Vec<String> = names.collect();
    ctx.check(8, "final groups Z/32 + Z/2, Z/16, Z/2", names == ["Z/32 + Z/2", "Z/16", "Z/2"], names.join(" | "));

    charts.insert("pic_diagonal.svg".into(), chart::pic_chart(&bound, &ctx.cfg.hash(), n));
    let entries: Vec<Value> =
        bound.entries.iter().map(|e| json!({ "s": e.s, "groups": groups_json(&e.groups), "note": e.note })).collect();
    let twisted: Vec<Value> = kernels
        .iter()
        .chain(std::iter::once(&prop.kernel))
        .map(|k| json!({ "r": k.r, "level": format!("{:?}", k.level).to_lowercase(), "source": k.source.to_string(), "kernel": k.kernel.to_string() }))
        .collect();
    let mut out = json!({
        "diagonal": entries,
        "twisted_kernels": twisted,
        "upper_bound": bound.orders,
        "lower_bound": lower.orders(),
        "groups": names,
    });
    if let Ok(t) = theorem {
        summary.push(format!("Pic(C2) = {}", names[1]));
        summary.push(format!("Pic(e) = {}", names[2]));
        summary.push(format!("annotation: Pic for C6 has order {}", t.c6_order));
        summary.push(format!("Pic(C4) = {}", names[0]));
        out["c6_order"] = json!(t.c6_order);
    }
    Ok(out)
}

/// Runs `stages` (all when empty) and collects the report and charts.
pub fn run_pipeline(cfg: &Config, stages: &[Stage]) -> Result<Bundle, Box<dyn std::error::Error>> {
    cfg.validate()?;
    let dir = cfg.fixtures.as_deref();
    let (fx, homotopy) = fixtures::load(dir).map_err(|e| StageError { stage: "fixtures", message: e.to_string() })?;
    let transfers = fixtures::load_picard(dir).map_err(|e| StageError { stage: "fixtures", message: e.to_string() })?;
    let mut ctx = Ctx { cfg, fx, homotopy, transfers, cylinder: None, pic_alg: None, checks: Vec::new() };
    let mut wanted: Vec<Stage> = if stages.is_empty() { Stage::ALL.to_vec() } else { stages.to_vec() };
    wanted.sort();
    wanted.dedup();
    let mut out = BTreeMap::new();
    let mut charts = BTreeMap::new();
    let mut summary = Vec::new();
    for st in wanted {
        let v = match st {
            Stage::Rep => rep(&mut ctx)?,
            Stage::Jimage => jimage(&mut ctx)?,
            Stage::Cohom => cohom(&mut ctx)?,
            Stage::Hfpss => hfpss_stage(&mut ctx, &mut charts)?,
            Stage::Picalg => picalg(&mut ctx)?,
            Stage::Pic => pic(&mut ctx, &mut charts, &mut summary)?,
        };
        out.insert(st.name(), v);
    }
    let checks = std::mem::take(&mut ctx.checks);
    let failed = checks.iter().filter(|c| !c.ok).count();
    summary.insert(0, format!("{} checks, {failed} failed", checks.len()));
    let report = Report {
        schema: SCHEMA,
        version: SCHEMA_VERSION,
        config_hash: cfg.hash(),
        config: cfg.clone(),
        stages: out,
        checks,
        summary,
    };
    Ok(Bundle { report, charts })
}

impl Bundle {
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `report.json` and the charts under the output directory.
    pub fn write(&self, dir: &std::path::Path, json: bool, svg: bool) -> std::io::Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if json {
            let p = dir.join("report.json");
            std::fs::write(&p, self.json())?;
            written.push(p);
        }
        if svg {
            for (name, doc) in &self.charts {
                let p = dir.join(name);
                std::fs::write(&p, doc)?;
                written.push(p);
            }
        }
        Ok(written)
    }
}

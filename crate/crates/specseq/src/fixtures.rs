//! Loading and validation of the data files in `fixtures/`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use specseq_core::hfpss::{DifferentialTable, Fixtures, MidRule, Rule, Sheet};
use specseq_core::mackey;
use specseq_core::mono::{parse_mid, parse_mono, parse_sum};
use specseq_core::picss::Transfer;
use specseq_core::Error;

pub const DIFFERENTIALS: &str = include_str!("../fixtures/differentials.toml");
pub const HOMOTOPY: &str = include_str!("../fixtures/homotopy.toml");
pub const PICARD: &str = include_str!("../fixtures/picard.toml");

#[derive(Debug, Deserialize)]
struct RawClass {
    class: String,
    citation: String,
}

#[derive(Debug, Deserialize)]
struct RawPermanent {
    classes: Vec<RawClass>,
}

#[derive(Debug, Deserialize)]
struct RawRule {
    sheet: String,
    source: String,
    target: String,
    citation: String,
}

#[derive(Debug, Deserialize)]
struct RawMidRule {
    source: String,
    target: String,
    period: i64,
    citation: String,
}

#[derive(Debug, Deserialize)]
struct RawPage {
    r: u32,
    linear: Vec<String>,
    rules: Vec<RawRule>,
    #[serde(default)]
    mid_rules: Vec<RawMidRule>,
}

#[derive(Debug, Deserialize)]
struct RawTransfer {
    source: String,
    target: String,
    exotic: bool,
    citation: String,
}

#[derive(Debug, Deserialize)]
struct RawPicard {
    transfers: Vec<RawTransfer>,
}

#[derive(Debug, Deserialize)]
struct RawDifferentials {
    permanent: RawPermanent,
    page: Vec<RawPage>,
}

/// One stem of the expected homotopy groups.
#[derive(Clone, Debug, Deserialize)]
pub struct StemEntry {
    pub t: i64,
    pub value: String,
    pub chains: Vec<[String; 3]>,
    pub citation: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Homotopy {
    pub integer: Vec<StemEntry>,
    pub one_minus_sigma: Vec<StemEntry>,
}

impl Homotopy {
    pub fn sheet(&self, sheet: Sheet) -> &[StemEntry] {
        match sheet {
            Sheet::Integer => &self.integer,
            Sheet::Sigma => &self.one_minus_sigma,
        }
    }

    /// Summands of a stem split along its chains.
    pub fn leaves(entry: &StemEntry) -> Vec<&str> {
        let summands: Vec<&str> = mackey::split_sum(&entry.value).into_iter().filter(|s| *s != "0").collect();
        let chains: Vec<[&str; 3]> =
            entry.chains.iter().map(|c| [c[0].as_str(), c[1].as_str(), c[2].as_str()]).collect();
        specseq_core::hfpss::leaves(&summands, &chains)
    }
}

fn fixture_err(e: impl std::fmt::Display) -> Error {
    Error::Fixture(e.to_string())
}

fn with_citation<T>(r: specseq_core::Result<T>, citation: &str) -> specseq_core::Result<T> {
    r.map_err(|e| Error::Fixture(format!("{e} ({citation})")))
}

pub fn parse_differentials(text: &str) -> specseq_core::Result<Fixtures> {
    let raw: RawDifferentials = toml::from_str(text).map_err(fixture_err)?;
    let mut fx = Fixtures::default();
    for c in &raw.permanent.classes {
        fx.permanent.push(with_citation(parse_mono(&c.class), &c.citation)?);
    }
    for page in raw.page {
        let mut table = DifferentialTable { page: page.r, ..Default::default() };
        for l in &page.linear {
            table.linear.push(parse_mono(l)?);
        }
        for r in page.rules {
            let source = with_citation(parse_mono(&r.source), &r.citation)?;
            let sheet = Sheet::parse(&r.sheet)?;
            if (source.p == 1) != (sheet == Sheet::Sigma) {
                return Err(Error::Fixture(format!("rule `{}` is on the wrong sheet ({})", r.source, r.citation)));
            }
            let target = with_citation(parse_sum(&r.target), &r.citation)?;
            table.rules.push(Rule { source, target, citation: r.citation });
        }
        for r in page.mid_rules {
            table.mid_rules.push(MidRule {
                source: with_citation(parse_mid(&r.source), &r.citation)?,
                target: with_citation(parse_mid(&r.target), &r.citation)?,
                period: r.period,
                citation: r.citation,
            });
        }
        table.validate()?;
        if fx.tables.iter().any(|t| t.page == table.page) {
            return Err(Error::Fixture(format!("page {} listed twice", table.page)));
        }
        fx.tables.push(table);
    }
    Ok(fx)
}

pub fn parse_homotopy(text: &str) -> specseq_core::Result<Homotopy> {
    let h: Homotopy = toml::from_str(text).map_err(fixture_err)?;
    for (sheet, entries, first) in [(Sheet::Integer, &h.integer, 0), (Sheet::Sigma, &h.one_minus_sigma, 1)] {
        let ts: Vec<i64> = entries.iter().map(|e| e.t).collect();
        if ts != (first..first + 32).collect::<Vec<_>>() {
            return Err(Error::Fixture(format!("{} sheet must list 32 consecutive stems", sheet.name())));
        }
        for e in entries {
            mackey::evaluate(&e.value, 4).map_err(|x| Error::Fixture(format!("{x} ({})", e.citation)))?;
            for c in &e.chains {
                for name in c {
                    mackey::evaluate(name, 4).map_err(|x| Error::Fixture(format!("{x} ({})", e.citation)))?;
                }
            }
        }
    }
    Ok(h)
}

pub fn parse_picard(text: &str) -> specseq_core::Result<Vec<Transfer>> {
    let raw: RawPicard = toml::from_str(text).map_err(fixture_err)?;
    let mut out = Vec::new();
    for t in raw.transfers {
        let source = with_citation(parse_mid(&t.source), &t.citation)?;
        let target = with_citation(parse_mono(&t.target), &t.citation)?;
        // a transfer preserves the stem; exotic ones raise filtration
        let (ds, dt) = (target.s() as i64 - source.s() as i64, target.t() - source.t());
        if ds != dt || (ds > 0) != t.exotic || ds < 0 {
            return Err(Error::Fixture(format!("transfer `{}` has the wrong bidegree ({})", t.source, t.citation)));
        }
        out.push(Transfer { source, target, exotic: t.exotic, citation: t.citation });
    }
    Ok(out)
}

/// Fixtures from a directory, or the built-in copies when `dir` is `None`.
pub fn load(dir: Option<&Path>) -> specseq_core::Result<(Fixtures, Homotopy)> {
    let read = |name: &str, builtin: &str| -> specseq_core::Result<String> {
        match dir {
            Some(d) => {
                let p: PathBuf = d.join(name);
                std::fs::read_to_string(&p).map_err(|e| Error::Fixture(format!("{}: {e}", p.display())))
            }
            None => Ok(builtin.to_string()),
        }
    };
    let fx = parse_differentials(&read("differentials.toml", DIFFERENTIALS)?)?;
    let h = parse_homotopy(&read("homotopy.toml", HOMOTOPY)?)?;
    Ok((fx, h))
}

pub fn load_picard(dir: Option<&Path>) -> specseq_core::Result<Vec<Transfer>> {
    match dir {
        Some(d) => {
            let p = d.join("picard.toml");
            parse_picard(&std::fs::read_to_string(&p).map_err(|e| Error::Fixture(format!("{}: {e}", p.display())))?)
        }
        None => parse_picard(PICARD),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixtures_load() {
        let (fx, h) = load(None).unwrap();
        assert_eq!(fx.tables.iter().map(|t| t.page).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13]);
        assert_eq!(fx.permanent.len(), 11);
        assert_eq!(h.integer.len(), 32);
        let stem22 = &h.integer[22];
        assert_eq!(Homotopy::leaves(stem22), vec!["mdblkcircle", "bar-mdblkcircle", "mdblkcircle", "u-hat-bar-square"]);
    }

    #[test]
    fn bad_bidegree_rejected() {
        let bad = DIFFERENTIALS.replace("target = \"eta^3\"", "target = \"eta^2\"");
        assert!(matches!(parse_differentials(&bad), Err(Error::Fixture(_))));
    }

    #[test]
    fn unknown_name_rejected() {
        let bad = HOMOTOPY.replacen("hat-u-boxdot", "no-such-functor", 1);
        assert!(parse_homotopy(&bad).is_err());
    }
}

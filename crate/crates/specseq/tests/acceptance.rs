//! One pass/fail line per acceptance criterion, from two full pipeline runs
//! with the default configuration.

use std::process::ExitCode;

use specseq::config::Config;
use specseq::pipeline::{run_pipeline, Bundle};

const CRITERIA: [(u8, &str); 9] = [
    (1, "image of J: invariant factors, reductions, integer shifts"),
    (2, "Mackey lower bound: tr row and res column"),
    (3, "cohomology of the dictionary modules against closed forms"),
    (4, "restriction and transfer formulas, Frobenius identity"),
    (5, "HFPSS E-infinity pieces, extension chains, d^2 = 0"),
    (6, "periodicity and no integer shift between the sheets"),
    (7, "unit groups, algebraic Picard group, Bockstein"),
    (8, "Picard spectral sequence bounds and final groups"),
    (9, "byte-identical JSON and SVG across runs"),
];

fn write(b: &Bundle, dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let paths = b.write(dir, true, true).expect("output directory is writable");
    paths
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect()
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let first = match run_pipeline(&cfg, &[]) {
        Ok(b) => b,
        Err(e) => {
            println!("FAIL pipeline: {e}");
            return ExitCode::FAILURE;
        }
    };
    let second = run_pipeline(&cfg, &[]).expect("second run");
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (f1, f2) = (write(&first, d1.path()), write(&second, d2.path()));
    let identical = !f1.is_empty() && f1 == f2;

    let mut status = first.report.criteria();
    status.insert(9, identical);
    let mut all = true;
    for (k, what) in CRITERIA {
        let checks: Vec<_> = first.report.checks.iter().filter(|c| c.criterion == k).collect();
        let ok = status.get(&k).copied().unwrap_or(false);
        all &= ok;
        let count = if k == 9 { format!("{} files", f1.len()) } else { format!("{} checks", checks.len()) };
        println!("{} criterion {k}: {what} ({count})", if ok { "PASS" } else { "FAIL" });
        for c in checks.iter().filter(|c| !c.ok) {
            println!("     failed: {} {}", c.name, c.detail);
        }
    }
    for line in &first.report.summary {
        println!("     {line}");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

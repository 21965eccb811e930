use specseq_core::cohomology::stable_named;
use specseq_core::mackey::{closed_form, evaluate};
use specseq_core::modules::DICTIONARY;

#[test]
fn dictionary_cohomology_matches_closed_forms() {
    let n = 6;
    let mut failures = Vec::new();
    for name in DICTIONARY {
        for s in 0..=8 {
            let mf = stable_named(name, n, 2, s).unwrap();
            mf.check().unwrap_or_else(|e| panic!("{name} s={s}: {e}"));
            let want = evaluate(closed_form(name, s).unwrap(), n).unwrap();
            if mf.groups() != want {
                failures.push(format!("{name} s={s}: got {:?} want {:?}", mf.groups(), want));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn restriction_and_transfer_table() {
    use specseq_core::classes::*;
    let ctx = Ctx::new(6);
    let c = Named::build(&ctx, 2).unwrap();
    let mut all = restriction_checks(&ctx, &c);
    all.extend(transfer_checks(&ctx, &c));
    all.extend(generator_checks(&ctx, &c, 2));
    all.extend(relation_checks(&ctx, &c));
    all.extend(frobenius_checks(&ctx, &c, 20, 7));
    for ch in &all {
        println!("{} {}", if ch.ok { "ok  " } else { "FAIL" }, ch.name);
    }
    assert!(all.iter().all(|c| c.ok));
}

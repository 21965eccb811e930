use specseq::fixtures::{load, load_picard};
use specseq_core::abgroup::AbGroup;
use specseq_core::hfpss::{run, stable_einf, Level, Sheet, Window};
use specseq_core::lattice_quot::pic_lower_bound_mackey;
use specseq_core::picss::{order_bound, synthesize, transfer_propagate, twist_diagonal};
use specseq_core::units::pic_alg_mackey;

const N: usize = 6;

#[test]
fn diagonal_and_final_groups() {
    let (fx, _) = load(None).unwrap();
    let tr = load_picard(None).unwrap();
    let a = run(&fx, N + 2, Window::Cylinder, 54, &[Sheet::Integer]);
    let b = run(&fx, N + 4, Window::Cylinder, 54, &[Sheet::Integer]);
    let z2 = AbGroup::cyclic(2);

    for (r, level) in [(3, Level::Top), (3, Level::Mid), (5, Level::Top), (7, Level::Top), (7, Level::Mid)] {
        let k = twist_diagonal(&a, &b, r, level).unwrap();
        assert_eq!(k.kernel, z2, "r = {r}, {level:?}");
    }

    let p = transfer_propagate(&a, &b, &tr).unwrap();
    assert_eq!(p.kernel.kernel, z2);
    assert!(p.composite_ok);
    assert_eq!(p.vanishes, [true, true]);

    let einf = stable_einf(&a, &b, N);
    let units = pic_alg_mackey(8, 2).unwrap().groups;
    let bound = order_bound(&a, &b, &units, &einf, &tr).unwrap();
    let top: Vec<_> = bound.entries.iter().map(|e| e.groups[0].order().unwrap()).collect();
    assert_eq!(top, [2, 4, 2, 2, 2]);
    assert_eq!(bound.orders, [64, 16, 2]);
    assert!(bound.vanishing);

    let t = synthesize(&bound, &pic_lower_bound_mackey()).unwrap();
    assert_eq!(t.lower, t.upper);
    assert_eq!(t.c6_order, 48);
}

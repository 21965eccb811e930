use proptest::prelude::*;
use specseq_core::abgroup::Subquotient;
use specseq_core::coeff::{LambdaElt, MixedElt, ModTwoElt, QuadElt};
use specseq_core::lattice_quot::{j_image, reduce};
use specseq_core::rep_ring::{rr_character, rr_induce, rr_mul, rr_restrict, Group, VirtualRep};
use specseq_core::zmat::{self, snf, Int, Lattice, Mat};

fn vecs(n: usize, k: usize, r: Int) -> impl Strategy<Value = Vec<Vec<Int>>> {
    prop::collection::vec(prop::collection::vec(-r..=r, n), 0..=k)
}

/// Generators plus `m e_i`, so the lattice has finite index dividing `m^n`.
fn with_multiples(n: usize, gens: &[Vec<Int>], m: Int) -> Vec<Vec<Int>> {
    let mut g = gens.to_vec();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = m;
        g.push(e);
    }
    g
}

fn same(a: &Lattice, b: &Lattice) -> bool {
    a.contains_lattice(b) && b.contains_lattice(a)
}

fn lambda(n: usize) -> impl Strategy<Value = LambdaElt> {
    prop::collection::vec(-9i128..=9, n).prop_map(move |c| LambdaElt::from_coeffs(n, &c))
}

fn quad(n: usize) -> impl Strategy<Value = QuadElt> {
    (lambda(n), lambda(n)).prop_map(|(a, b)| QuadElt::new(a, b))
}

fn rep(g: Group) -> impl Strategy<Value = VirtualRep> {
    prop::collection::vec(-4i128..=4, g.rank()).prop_map(move |c| VirtualRep::new(g, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_lattice_matches_integer_hnf(gens in vecs(4, 5, 40), m in prop::sample::select(vec![2i128, 4, 8, 12, 32])) {
        let all = with_multiples(4, &gens, m);
        let a = Lattice::from_gens(4, all.clone());
        let b = Lattice::from_modular(4, all, m);
        prop_assert!(same(&a, &b));
    }

    #[test]
    fn modulus_annihilates_the_quotient(gens in vecs(3, 4, 30), m in 1i128..=24) {
        let l = Lattice::from_gens(3, with_multiples(3, &gens, m));
        let q = l.modulus().expect("finite index");
        prop_assert!(q > 0);
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = q;
            prop_assert!(l.contains(&e));
        }
    }

    #[test]
    fn preimage_is_exactly_the_pullback(rows in vecs(3, 3, 6), tgens in vecs(3, 3, 12), m in 1i128..=16, xs in vecs(3, 6, 5)) {
        let a = Mat::from_rows(3, &{
            let mut r = rows.clone();
            r.resize(3, vec![0; 3]);
            r
        });
        let t = Lattice::from_gens(3, with_multiples(3, &tgens, m));
        let p = Lattice::full(3).preimage(&a, &t);
        for v in p.basis() {
            prop_assert!(t.contains(&a.apply(v)));
        }
        for x in &xs {
            prop_assert_eq!(t.contains(&a.apply(x)), p.contains(x));
        }
    }

    #[test]
    fn sum_and_intersection(g1 in vecs(3, 3, 10), g2 in vecs(3, 3, 10), m in 1i128..=12) {
        let a = Lattice::from_gens(3, with_multiples(3, &g1, m));
        let b = Lattice::from_gens(3, g2);
        let s = a.sum(&b);
        let i = a.intersect(&b);
        prop_assert!(s.contains_lattice(&a) && s.contains_lattice(&b));
        prop_assert!(a.contains_lattice(&i) && b.contains_lattice(&i));
        prop_assert!(same(&s, &b.sum(&a)));
        prop_assert!(same(&i, &b.intersect(&a)));
    }

    #[test]
    fn subquotient_order_is_the_index(g in vecs(3, 4, 12), m in 1i128..=12) {
        let num = Lattice::full(3);
        let den = Lattice::from_gens(3, with_multiples(3, &g, m));
        let sq = Subquotient::new(&num, &den);
        prop_assert_eq!(Some(sq.order_finite()), num.index_of(&den));
    }

    #[test]
    fn smith_form_divisibility(rows in vecs(3, 3, 9)) {
        let mut r = rows.clone();
        r.resize(3, vec![0; 3]);
        let a = Mat::from_rows(3, &r);
        let d = snf(&a).diagonal();
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert_eq!(d.iter().product::<Int>().abs(), a.det().abs());
    }

    #[test]
    fn gamma_is_a_ring_involution(x in quad(5), y in quad(5)) {
        prop_assert_eq!(x.gamma().gamma(), x.clone());
        prop_assert_eq!(x.mul(&y).gamma(), x.gamma().mul(&y.gamma()));
        prop_assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
    }

    #[test]
    fn units_invert(x in quad(5), k in -3i64..=3) {
        let u = QuadElt::twist(5, k).mul(&QuadElt::one(5).add(&x.mul(&QuadElt::mu(5))));
        let inv = u.invert().unwrap();
        prop_assert_eq!(u.mul(&inv), QuadElt::one(5));
    }

    #[test]
    fn mixed_gamma_is_a_ring_involution(a in prop::collection::vec(0i128..64, 6), b in prop::collection::vec(0i128..64, 6)) {
        let (x, y) = (MixedElt::new(6, &a), MixedElt::new(6, &b));
        prop_assert_eq!(x.gamma().gamma(), x.clone());
        prop_assert_eq!(x.mul(&y).gamma(), x.gamma().mul(&y.gamma()));
    }

    #[test]
    fn squaring_is_additive_mod_two(a in prop::collection::vec(0i128..2, 7), b in prop::collection::vec(0i128..2, 7)) {
        let (x, y) = (ModTwoElt::new(7, &a), ModTwoElt::new(7, &b));
        let s = x.add(&y);
        prop_assert_eq!(s.mul(&s), x.mul(&x).add(&y.mul(&y)));
    }

    #[test]
    fn characters_are_multiplicative(x in rep(Group::C4), y in rep(Group::C4)) {
        let p = rr_character(&rr_mul(&x, &y).unwrap()).values;
        let (cx, cy) = (rr_character(&x).values, rr_character(&y).values);
        let q: Vec<Int> = cx.iter().zip(&cy).map(|(a, b)| a * b).collect();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn frobenius_reciprocity(x in rep(Group::C4), y in rep(Group::C2)) {
        let lhs = rr_induce(&rr_mul(&rr_restrict(&x, Group::C2).unwrap(), &y).unwrap(), Group::C4).unwrap();
        let rhs = rr_mul(&x, &rr_induce(&y, Group::C4).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_additive(x in rep(Group::C4), y in rep(Group::C4)) {
        let q = j_image(Group::C4);
        let s = reduce(&q, &x.add(&y).unwrap()).unwrap();
        let t = q.add_coords(&reduce(&q, &x).unwrap(), &reduce(&q, &y).unwrap());
        prop_assert_eq!(s, t);
    }

    #[test]
    fn solve_left_finds_solutions(rows in vecs(3, 3, 7), c in prop::collection::vec(-5i128..=5, 3)) {
        let mut r = rows.clone();
        r.resize(3, vec![0; 3]);
        let a = Mat::from_rows(3, &r);
        let b = a.apply(&c);
        let x = zmat::solve_left(&a, &b).expect("b is in the row span");
        prop_assert_eq!(a.apply(&x), b);
    }
}

use std::collections::BTreeSet;

use proptest::prelude::*;

use setcong::finite::{
    connected_sets, is_connected, is_prime, search_family, translate_right, verify_family,
    FiniteFamily, SearchOutcome, WitnessAssignment,
};
use setcong::freegroup::{ball, ball_size, commute, CosetSpace, Word};
use setcong::setgraph::{build_setgraph, check_claim3};
use setcong::sphere::{fixed_axis, sphere_generators, word_to_matrix};
use setcong::{CongruenceSystem, IndexSet, Mode, Statement};

fn word(m: i32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=m, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| if inv { -g } else { g })))
}

fn small_set(m: i32) -> impl Strategy<Value = BTreeSet<Word>> {
    prop::collection::btree_set(word(m, 3), 1..6)
}

proptest! {
    #[test]
    fn group_laws(u in word(3, 8), v in word(3, 8), w in word(3, 8)) {
        prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
        prop_assert!((&u * &u.inverse()).is_identity());
        prop_assert_eq!(&u * &Word::identity(), u.clone());
        prop_assert!(Word::is_reduced((&u * &v).letters()));
        prop_assert_eq!((&u * &v).inverse(), &v.inverse() * &u.inverse());
    }

    #[test]
    fn powers_add(w in word(2, 5), a in -4i64..5, b in -4i64..5) {
        prop_assert_eq!(&w.pow(a) * &w.pow(b), w.pow(a + b));
    }

    #[test]
    fn order_is_length_first(u in word(2, 6), v in word(2, 6)) {
        if u.len() < v.len() {
            prop_assert!(u < v);
        }
        prop_assert_eq!(u == v, u.cmp(&v) == std::cmp::Ordering::Equal);
    }

    #[test]
    fn cyclic_reduction_recombines(w in word(3, 10)) {
        let (conj, core) = w.cyclically_reduce();
        prop_assert_eq!(&(&conj * &core) * &conj.inverse(), w);
        let l = core.letters();
        prop_assert!(l.len() < 2 || l[0] != -l[l.len() - 1]);
    }

    #[test]
    fn proper_power_decomposition(base in word(2, 4), k in 1usize..4) {
        let w = base.pow(k as i64);
        match w.proper_power() {
            Some((root, e)) => {
                prop_assert!(e >= 2);
                prop_assert_eq!(root.pow(e as i64), w);
                prop_assert!(!root.is_proper_power());
            }
            None => prop_assert!(k == 1 || base.is_identity()),
        }
    }

    #[test]
    fn commute_matches_definition(u in word(2, 5), v in word(2, 5), k in 1i64..3) {
        prop_assert_eq!(commute(&u, &v), &u * &v == &v * &u);
        prop_assert!(commute(&u, &u.pow(k)));
        if commute(&u, &v) && !u.is_identity() && !v.is_identity() {
            let root = |w: &Word| w.proper_power().map(|(r, _)| r).unwrap_or_else(|| w.clone());
            let (ru, rv) = (root(&u), root(&v));
            prop_assert!(ru == rv || ru == rv.inverse());
        }
    }

    #[test]
    fn coset_representatives(w in word(2, 4), g in word(2, 6), h in word(2, 4), k in -3i64..4) {
        prop_assume!(!w.is_identity() && !w.is_proper_power());
        let space = CosetSpace::new(2, w.clone()).unwrap();
        let rep = space.rep(&g);
        prop_assert!(rep <= g);
        prop_assert_eq!(space.rep(&rep), rep.clone());
        prop_assert_eq!(space.rep(&(&g * &w.pow(k))), rep.clone());
        prop_assert_eq!(space.act(&h, &rep), space.rep(&(&h * &g)));
    }

    #[test]
    fn prime_and_connected_survive_right_translation(p in small_set(2), h in word(2, 4)) {
        let q = translate_right(&p, &h);
        prop_assert_eq!(is_connected(&p), is_connected(&q));
        prop_assert_eq!(is_prime(&p), is_prime(&q));
    }

    #[test]
    fn search_results_verify(
        r in 1usize..=3,
        raw in prop::collection::vec((0u64..8, 0u64..8, any::<bool>()), 1..3),
        witnesses in prop::collection::vec(word(2, 1), 2),
    ) {
        let mask = (1u64 << r) - 1;
        let statements: Vec<Statement> = raw
            .iter()
            .map(|&(l, rr, sub)| {
                let (l, rr) = (IndexSet::from_bits(l & mask), IndexSet::from_bits(rr & mask));
                if sub { Statement::subcongruence(l, rr) } else { Statement::congruence(l, rr) }
            })
            .collect();
        let n = statements.len();
        let sys = CongruenceSystem::new(r, statements, Mode::Family).unwrap();
        let wit = WitnessAssignment::new(witnesses[..n].to_vec());
        if let SearchOutcome::Sat(fam) = search_family(&sys, &wit, 2, 2).unwrap() {
            prop_assert!(!fam.is_all_empty());
            prop_assert!(verify_family(&fam, &wit, &sys).unwrap().holds);
        }
    }

    #[test]
    fn verification_survives_right_translation(h in word(2, 3)) {
        // Z acting on itself by the first generator: {e} ~ {a}, {a} ~ {a^2}.
        let sys = CongruenceSystem::from_congruences(3, &[(&[1], &[2]), (&[2], &[3])]).unwrap();
        let a = Word::generator(1);
        let sets = vec![vec![Word::identity()], vec![a.clone()], vec![a.pow(2)]];
        let moved: Vec<Vec<Word>> = sets.iter().map(|s| s.iter().map(|x| x * &h).collect()).collect();
        let wit = WitnessAssignment::new(vec![a.clone(), a]);
        for s in [sets, moved] {
            let fam = FiniteFamily::group(2, s).unwrap();
            prop_assert!(verify_family(&fam, &wit, &sys).unwrap().holds);
        }
    }

    #[test]
    fn setgraph_shape(index in 0usize..40, length in 1usize..6) {
        let all = connected_sets(2, 4);
        let p = &all[index % all.len()];
        let g = build_setgraph(p).unwrap();
        let proper = 1..(1u32 << p.len()) - 1;
        for e in g.edges() {
            prop_assert!(proper.contains(&e.from));
            prop_assert!(e.to != 0);
            prop_assert!(e.label != 0 && e.label.unsigned_abs() <= 2);
        }
        for v in g.vertices() {
            prop_assert_eq!(g.mask_of(&g.subset(v)), Some(v));
        }
        if check_claim3(&g, length).unwrap() {
            prop_assert!(check_claim3(&g, length + 1).unwrap());
        }
    }

    #[test]
    fn rotations_are_a_homomorphism(u in word(3, 4), v in word(3, 4)) {
        let gens = sphere_generators(3);
        let m = |w: &Word| word_to_matrix(w, &gens).unwrap();
        prop_assert_eq!(m(&(&u * &v)), m(&u).mul_mat(&m(&v)));
        prop_assert!(m(&u).is_rotation());
        prop_assert_eq!(m(&u).is_identity(), u.is_identity());
    }

    #[test]
    fn axis_is_fixed(w in word(2, 5)) {
        prop_assume!(!w.is_identity());
        let gens = sphere_generators(2);
        let rot = word_to_matrix(&w, &gens).unwrap();
        let axis = fixed_axis(&rot).unwrap();
        prop_assert!(!axis.is_zero());
        prop_assert_eq!(rot.mul_vec(&axis), axis);
    }
}

#[test]
fn ball_sizes() {
    for m in 1..=3 {
        for radius in 0..=4 {
            let b = ball(m, radius);
            let distinct: BTreeSet<&Word> = b.iter().collect();
            assert_eq!(b.len() as u128, ball_size(m, radius));
            assert_eq!(distinct.len(), b.len());
            assert!(b
                .iter()
                .all(|w| w.len() <= radius && w.max_generator() <= m));
        }
    }
}

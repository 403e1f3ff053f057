use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypertournament::acceptance::random_small_system;
use hypertournament::amalgam::{
    amalgamate_one_point, build_generic, enumerate_one_point_types, strong_amalgamate, Embedding,
};
use hypertournament::classify::{
    class_tally, classify_4set, for_each_4set, is_h4_free, ClassSet, FourClass,
};
use hypertournament::format;
use hypertournament::indep::{build_ht_morley, ind_ht, is_ht_morley};
use hypertournament::solver::{
    count_completions, random_in_class, solve, ConstraintSet, Phase, Solver, Term,
};
use hypertournament::structure::{
    decode, encode, Hypertournament, LinearOrder, PartialHypertournament, PointId,
};
use hypertournament::witness::sop3_build;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shuffled(n: usize, r: &mut ChaCha8Rng) -> Vec<PointId> {
    let mut v: Vec<PointId> = (0..n).collect();
    v.shuffle(r);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cyclic_and_flip_identities(seed in any::<u64>(), n in 3usize..9) {
        let h = Hypertournament::random(n, &mut rng(seed));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c && a != c {
                        let v = h.r(a, b, c);
                        prop_assert_eq!(v, h.r(b, c, a));
                        prop_assert_eq!(v, h.r(c, a, b));
                        prop_assert_eq!(v, !h.r(a, c, b));
                    }
                }
            }
        }
    }

    #[test]
    fn encoding_parity_is_order_independent(seed in any::<u64>(), n in 4usize..7) {
        let mut r = rng(seed);
        let h = Hypertournament::random(n, &mut r);
        let g1 = encode(&h, &LinearOrder::from_sequence(shuffled(n, &mut r)).unwrap()).unwrap();
        let g2 = encode(&h, &LinearOrder::from_sequence(shuffled(n, &mut r)).unwrap()).unwrap();
        let mut ok = true;
        for_each_4set(n, |s| {
            let count = |g: &hypertournament::structure::Hypergraph3| {
                [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
                    .iter()
                    .filter(|t| g.has_edge(s[t[0]], s[t[1]], s[t[2]]))
                    .count()
            };
            ok &= count(&g1) % 2 == count(&g2) % 2;
            true
        });
        prop_assert!(ok);
    }

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>(), n in 0usize..9) {
        let mut r = rng(seed);
        let h = Hypertournament::random(n, &mut r);
        let ord = LinearOrder::from_sequence(shuffled(n, &mut r)).unwrap();
        let g = encode(&h, &ord).unwrap();
        prop_assert_eq!(&decode(&g, &ord).unwrap(), &h);
        prop_assert_eq!(encode(&decode(&g, &ord).unwrap(), &ord).unwrap(), g);
    }

    #[test]
    fn classification_survives_relabeling(seed in any::<u64>(), n in 4usize..8) {
        let mut r = rng(seed);
        let h = Hypertournament::random(n, &mut r);
        let perm = shuffled(n, &mut r);
        let g = h.relabel(&perm).unwrap();
        prop_assert_eq!(class_tally(&h), class_tally(&g));
        let mut ok = true;
        for_each_4set(n, |s| {
            let image: Vec<PointId> = s.iter().map(|&p| perm[p]).collect();
            ok &= classify_4set(&h, &s).unwrap() == classify_4set(&g, &image).unwrap();
            true
        });
        prop_assert!(ok);
    }

    #[test]
    fn files_round_trip(seed in any::<u64>(), n in 0usize..9) {
        let h = Hypertournament::random(n, &mut rng(seed));
        let text = format::write_total(&h);
        let back = format::parse(&text).unwrap().total().unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(format::write_total(&back), text);
    }

    #[test]
    fn strong_amalgams(seed in any::<u64>(), na in 0usize..4, e1 in 0usize..3, e2 in 0usize..3) {
        let mut r = rng(seed);
        let b1 = random_in_class(na + e1, ClassSet::H4_FREE, r.gen()).unwrap();
        let a = b1.restrict(&(0..na).collect::<Vec<_>>());
        let mut p = a.to_partial();
        p.grow(e2);
        let b2 = Solver::new(ClassSet::H4_FREE)
            .with_phase(Phase::Seeded(r.gen()))
            .solve(&p, &ConstraintSet::new())
            .unwrap()
            .into_model()
            .unwrap()
            .structure;
        // hide A inside B2 under a random relabeling
        let perm = shuffled(na + e2, &mut r);
        let b2 = b2.relabel(&perm).unwrap();
        let f1 = Embedding::identity(&a);
        let f2 = Embedding::new(perm[..na].to_vec(), &a, &b2).unwrap();
        let am = strong_amalgamate(&a, &b1, &b2, &f1, &f2).unwrap();
        let c = &am.structure;
        prop_assert_eq!(c.len(), na + e1 + e2);
        prop_assert!(is_h4_free(c));
        // the two copies meet exactly in the image of A, consistently
        let i1: Vec<PointId> = (0..b1.len()).map(|q| am.g1.apply(q)).collect();
        let i2: Vec<PointId> = (0..b2.len()).map(|q| am.g2.apply(q)).collect();
        let shared = i1.iter().filter(|q| i2.contains(q)).count();
        prop_assert_eq!(shared, na);
        for x in 0..na {
            prop_assert_eq!(am.g1.apply(f1.apply(x)), am.g2.apply(f2.apply(x)));
        }
    }

    #[test]
    fn one_point_amalgams_orient_new_pair_forward(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let a = random_in_class(n, ClassSet::H4_FREE, r.gen()).unwrap();
        let base: Vec<PointId> = (0..n).collect();
        let types = enumerate_one_point_types(&a, &base, ClassSet::H4_FREE).unwrap();
        let t1 = types.choose(&mut r).unwrap();
        let t2 = types.choose(&mut r).unwrap();
        let c = amalgamate_one_point(&a, t1, t2).unwrap();
        prop_assert!(is_h4_free(&c));
        for p in 0..n {
            prop_assert!(c.r(n, n + 1, p));
        }
    }

    #[test]
    fn solver_models_are_sound(seed in any::<u64>()) {
        let (base, cs) = random_small_system(&mut rng(seed));
        if let Some(m) = solve(&base, &cs).unwrap().model() {
            prop_assert!(is_h4_free(&m.structure));
            for lit in cs.literals() {
                let [a, b, c] = lit.args.map(|t| m.point(t));
                prop_assert_eq!(m.structure.r(a, b, c), lit.holds);
            }
            for (key, o) in base.assigned() {
                prop_assert_eq!(m.structure.orientation(key), o);
            }
        }
    }

    #[test]
    fn solver_is_deterministic(seed in any::<u64>()) {
        let (base, cs) = random_small_system(&mut rng(seed));
        prop_assert_eq!(solve(&base, &cs).unwrap(), solve(&base, &cs).unwrap());
    }

    #[test]
    fn adding_literals_never_helps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (base, cs) = random_small_system(&mut r);
        let total = base.len() + cs.var_names().len();
        if total < 3 {
            return Ok(());
        }
        let before = solve(&base, &cs).unwrap().is_sat();
        let mut more = cs.clone();
        let term = |i: usize| if i < base.len() { Term::Point(i) } else { Term::Var(i - base.len()) };
        let pts = shuffled(total, &mut r);
        more.require(term(pts[0]), term(pts[1]), term(pts[2]), r.gen());
        let after = solve(&base, &more).unwrap().is_sat();
        prop_assert!(before || !after);
    }

    #[test]
    fn solver_agrees_with_enumeration(seed in any::<u64>()) {
        let (base, cs) = random_small_system(&mut rng(seed));
        let counted = count_completions(&base, &cs, ClassSet::H4_FREE, 1).unwrap();
        prop_assert_eq!(solve(&base, &cs).unwrap().is_sat(), counted.satisfying > 0);
    }

    #[test]
    fn ind_ht_is_monotone(seed in any::<u64>(), n in 3usize..8) {
        let mut r = rng(seed);
        let h = random_in_class(n, ClassSet::H4_FREE, r.gen()).unwrap();
        let pick = |r: &mut ChaCha8Rng| (0..n).filter(|_| r.gen_bool(0.4)).collect::<Vec<_>>();
        let (a, b, c) = (pick(&mut r), pick(&mut r), pick(&mut r));
        if ind_ht(&h, &a, &b, &c) {
            let a2: Vec<PointId> = a.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
            let b2: Vec<PointId> = b.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
            prop_assert!(ind_ht(&h, &a2, &b, &c));
            prop_assert!(ind_ht(&h, &a, &b2, &c));
            prop_assert!(ind_ht(&h, &a2, &b2, &c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn morley_sequences_are_h4_free_and_recognized(seed in any::<u64>(), bl in 1usize..3, extra in 0usize..3, k in 1usize..5) {
        let mut r = rng(seed);
        let ml = bl + extra;
        let h = random_in_class(ml + bl + 1, ClassSet::H4_FREE, r.gen()).unwrap();
        let pts = shuffled(h.len(), &mut r);
        let (m, b) = (&pts[..ml], &pts[ml..ml + bl]);
        let seq = build_ht_morley(&h, m, b, k).unwrap();
        prop_assert!(seq.report.passed, "{}", seq.report);
        prop_assert!(is_h4_free(&seq.structure));
        prop_assert_eq!(seq.copies.len(), k);
        prop_assert!(is_ht_morley(&seq.structure, &seq.base, &seq.copies).unwrap());
    }

    #[test]
    fn generic_builds_are_reproducible(seed in any::<u64>(), n in 4usize..10) {
        let a = build_generic(n, ClassSet::H4_FREE, 2, seed).unwrap();
        let b = build_generic(n, ClassSet::H4_FREE, 2, seed).unwrap();
        prop_assert_eq!(&a.structure, &b.structure);
        prop_assert!(is_h4_free(&a.structure));
    }

    #[test]
    fn cyclic_builds_have_complete_encodings(seed in any::<u64>(), n in 4usize..8) {
        let built = build_generic(n, ClassSet::CYCLIC, 1, seed).unwrap();
        let h = &built.structure;
        let mut ok = true;
        for_each_4set(n, |s| {
            let sub = h.restrict(&s);
            ok &= classify_4set(h, &s).unwrap() == FourClass::C4;
            // some order of the four points encodes to all four triples
            ok &= permutations(4).iter().any(|o| {
                encode(&sub, &LinearOrder::from_sequence(o.clone()).unwrap()).unwrap().edge_count() == 4
            });
            true
        });
        prop_assert!(ok);
    }
}

fn permutations(n: usize) -> Vec<Vec<PointId>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn sop3_chain_is_the_natural_order() {
    for m in 3..8 {
        let (w, report) = sop3_build(m).unwrap();
        assert!(report.passed);
        for (i, &ci) in w.chain.iter().enumerate() {
            for (j, &cj) in w.chain.iter().enumerate() {
                for (k, &ck) in w.chain.iter().enumerate() {
                    if i < j && j < k {
                        assert!(w.structure.r(ci, cj, ck));
                    }
                }
            }
        }
    }
}

#[test]
fn partial_structures_round_trip() {
    let mut r = rng(3);
    for n in 0..7 {
        let mut p = PartialHypertournament::new(n);
        for key in hypertournament::structure::keys(n) {
            if r.gen_bool(0.5) {
                p.assign(
                    key,
                    hypertournament::structure::Orientation::from_bool(r.gen()),
                )
                .unwrap();
            }
        }
        let text = format::write_partial(&p);
        assert_eq!(format::parse(&text).unwrap().structure, p);
    }
}

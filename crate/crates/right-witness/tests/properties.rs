use natmap_core::registry::monus_expr;
use natmap_core::{identity_capability, Capability, Cardinality, FiberClaim, LinearBound, MapExpr, SetExpr, Status};
use proptest::prelude::*;
use right_witness::*;
use semigroup_classes::{member_check, random_element, ClassTag, Element, PartialMapExpr, Verdict};

const N: u64 = 4096;

fn injective(map: MapExpr, image: SetExpr, retract: MapExpr, complement: Cardinality) -> CertMap {
    let coinfinite = complement.is_infinite();
    let cap = Capability {
        image: Some(image),
        cert_surjective: complement == Cardinality::Finite { elems: vec![] },
        complement: Some(complement),
        retract: Some(retract),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_image_coinfinite: coinfinite,
        cert_finite_to_one: true,
        ..Default::default()
    };
    CertMap::new(map, cap)
}

fn stride(k: u64, r: u64) -> CertMap {
    injective(
        MapExpr::affine(k, r),
        SetExpr::Residues { m: k, rs: vec![r] },
        MapExpr::floor_div(k),
        Cardinality::Infinite,
    )
}

fn succ() -> CertMap {
    injective(MapExpr::affine(1, 1), SetExpr::AtLeast { n: 1 }, monus_expr(1), Cardinality::Finite { elems: vec![0] })
}

fn identity() -> CertMap {
    CertMap::new(MapExpr::Id, identity_capability())
}

fn at(m: &MapExpr, x: u64) -> u64 {
    m.eval(x).unwrap()
}

fn opts() -> Opts {
    Opts::default()
}

fn passes(seq: &DerivationSequence) -> bool {
    verify_sequence(seq, N).unwrap().passed()
}

#[test]
fn length_zero_sequence_passes() {
    let t = Gen::map(MapExpr::affine(3, 1));
    let seq = DerivationSequence { side: Side::Right, a: t.clone(), b: t, steps: vec![], generators: vec![] };
    assert!(passes(&seq));
}

#[test]
fn witness_t_on_successor_and_triple() {
    let (t, p) = (MapExpr::affine(1, 1), MapExpr::affine(3, 0));
    let seq = witness_right_t(&t, &p);
    assert_eq!(seq.len(), 1);
    let g = seq.steps[0].s.as_map().unwrap();
    assert_eq!(at(g, 4), 3);
    assert_eq!(at(g, 5), 6);
    assert!(passes(&seq));
}

#[test]
fn witness_t_on_constants() {
    let c = MapExpr::constant(0);
    let seq = witness_right_t(&c, &c);
    let g = seq.steps[0].s.as_map().unwrap();
    assert!((0..64).all(|x| at(g, x) == 0));
    assert!(passes(&seq));
}

#[test]
fn corrupted_multiplier_fails_at_step_two() {
    let seq = witness_right_bl(&stride(4, 0), &stride(4, 1), &opts()).unwrap();
    let mut bad = seq.clone();
    bad.steps[1].s = Gen::map(MapExpr::Id);
    let report = verify_sequence(&bad, N).unwrap();
    let f = report.failure().expect("corruption detected");
    assert_eq!(f.step, Some(2));
}

#[test]
fn foreign_generator_is_reported() {
    let mut seq = witness_right_t(&MapExpr::Id, &MapExpr::Id);
    seq.generators.pop();
    let report = verify_sequence(&seq, 16).unwrap();
    assert_eq!(report.failure().unwrap().check, "generator");
}

#[test]
fn mixed_kinds_are_rejected() {
    let mut seq = witness_right_i_zero(&PartialMapExpr::empty(), &PartialMapExpr::total(MapExpr::Id));
    seq.a = Gen::map(MapExpr::Id);
    assert!(matches!(verify_sequence(&seq, 16), Err(WitnessError::TypeMismatch)));
}

#[test]
fn witness_f_examples() {
    let seq = witness_right_f(&identity(), &identity()).unwrap();
    assert_eq!(seq.len(), 1);
    assert!(passes(&seq));

    let seq = witness_right_h(&succ(), &stride(2, 0)).unwrap();
    assert!(seq.steps[0].s_cap.as_ref().unwrap().cert_finite_to_one);
    assert!(passes(&seq));

    let mut bad = identity();
    bad.cap.cert_finite_to_one = false;
    assert!(matches!(witness_right_f(&bad, &identity()), Err(WitnessError::MissingCertificate(_))));
}

fn two_x_plus_two() -> CertMap {
    injective(
        MapExpr::affine(2, 2),
        SetExpr::inter(vec![SetExpr::Residues { m: 2, rs: vec![0] }, SetExpr::AtLeast { n: 2 }]),
        MapExpr::floor_div(2).then(monus_expr(1)),
        Cardinality::Infinite,
    )
}

/// Oracle for the pivot rule: `y` may be used when both images stay short of ℕ after adding `y`.
fn pivot_valid(maps: &[&MapExpr], y: u64) -> bool {
    maps.iter().all(|m| {
        let f = m.compile().unwrap();
        let mut hit = [false; 200];
        for x in 0..400 {
            let v = f(x).unwrap();
            if v < 200 {
                hit[v as usize] = true;
            }
        }
        hit[y as usize] = true;
        hit.iter().any(|h| !h)
    })
}

#[test]
fn not_surj_successor_and_even_shift() {
    let (t, p) = (succ(), two_x_plus_two());
    let y = not_surj_pivot(&t, &p, &opts()).unwrap();
    assert_eq!(y, 1);
    assert!(!pivot_valid(&[&t.map, &p.map], 0));
    assert!(pivot_valid(&[&t.map, &p.map], 1));
    let seq = witness_right_t_not_surj(&t, &p, &opts()).unwrap();
    assert_eq!(seq.len(), 2);
    assert!(passes(&seq));
    for st in &seq.steps {
        let e = Element::total(st.s.as_map().unwrap().clone());
        let v = member_check(&e, st.s_cap.as_ref().unwrap(), ClassTag::TNotSurj, 1024).unwrap();
        assert_eq!(v, Verdict::CertifiedYes);
    }
}

#[test]
fn not_surj_doubling() {
    let t = stride(2, 0);
    assert!(pivot_valid(&[&t.map, &t.map], 1));
    assert_eq!(not_surj_pivot(&t, &t, &opts()).unwrap(), 0);
    assert!(passes(&witness_right_t_not_surj(&t, &t, &opts()).unwrap()));
}

#[test]
fn not_surj_shared_single_gap() {
    // x ↦ x for x < 5, x ↦ x + 1 otherwise: misses only 5
    let skip5 = injective(
        MapExpr::patch(MapExpr::affine(1, 1), (0..5).map(|x| (x, x))),
        SetExpr::finite([5]).complement(),
        MapExpr::patch(monus_expr(1), (0..5).map(|x| (x, x))),
        Cardinality::Finite { elems: vec![5] },
    );
    assert_eq!(not_surj_pivot(&skip5, &skip5, &opts()).unwrap(), 0);
    assert!(passes(&witness_right_t_not_surj(&skip5, &skip5, &opts()).unwrap()));
}

#[test]
fn not_surj_rejects_surjective_claim() {
    assert!(witness_right_t_not_surj(&identity(), &succ(), &opts()).is_err());
}

fn complement_of(images: &[&MapExpr], bound: u64) -> Vec<u64> {
    let mut hit = vec![false; bound as usize];
    for m in images {
        let f = m.compile().unwrap();
        for x in 0..bound {
            let v = f(x).unwrap();
            if v < bound {
                hit[v as usize] = true;
            }
        }
    }
    (0..bound).filter(|&v| !hit[v as usize]).collect()
}

fn jc(t: &CertMap, p: &CertMap) -> SetExpr {
    SetExpr::inter(vec![t.cap.image.clone().unwrap().complement(), p.cap.image.clone().unwrap().complement()])
}

#[test]
fn bridge_every_other_complement_member() {
    for (t, p) in [(stride(4, 0), stride(4, 1)), (stride(4, 0), stride(4, 0))] {
        let b = bridge_bl(&t, &p, &jc(&t, &p), &Cardinality::Infinite, &opts()).unwrap();
        let oracle = complement_of(&[&t.map, &p.map], 4000);
        let l = b.lambda.map.compile().unwrap();
        for x in 0..500 {
            assert_eq!(l(x).unwrap(), oracle[2 * x as usize]);
        }
        assert_eq!(b.seq.len(), 2);
        assert!(passes(&b.seq));
    }
    // frozen from the oracle above
    let (t, p) = (stride(4, 0), stride(4, 0));
    let b = bridge_bl(&t, &p, &jc(&t, &p), &Cardinality::Infinite, &opts()).unwrap();
    let l = b.lambda.map.compile().unwrap();
    let got: Vec<u64> = (0..5).map(|x| l(x).unwrap()).collect();
    assert_eq!(got, vec![1, 3, 6, 9, 11]);
}

#[test]
fn bridge_multipliers_are_certified_bl() {
    let (t, p) = (stride(4, 0), stride(4, 1));
    let b = bridge_bl(&t, &p, &jc(&t, &p), &Cardinality::Infinite, &opts()).unwrap();
    for st in &b.seq.steps {
        let e = Element::total(st.s.as_map().unwrap().clone());
        let v = member_check(&e, st.s_cap.as_ref().unwrap(), ClassTag::BL, 1024).unwrap();
        assert_eq!(v, Verdict::CertifiedYes);
    }
}

#[test]
fn bridge_rejects_finite_complement() {
    let r = bridge_bl(&stride(4, 0), &stride(4, 1), &SetExpr::finite([2]), &Cardinality::Infinite, &opts());
    assert!(matches!(r, Err(WitnessError::BudgetExhausted(_))));
}

#[test]
fn bl_branch_a() {
    let s = witness_right_bl(&stride(4, 0), &stride(4, 1), &opts()).unwrap();
    assert_eq!(s.len(), 2);
    let s = witness_right_bl(&stride(2, 0), &stride(2, 0), &opts()).unwrap();
    assert_eq!(s.len(), 2);
    assert!(passes(&s));
}

fn residues_one_two() -> CertMap {
    // 2q ↦ 3q+1, 2q+1 ↦ 3q+2
    injective(
        MapExpr::AffineMod { m: 2, rules: vec![(3, 1), (3, 2)] },
        SetExpr::Residues { m: 3, rs: vec![1, 2] },
        MapExpr::piecewise(vec![MapExpr::constant(0), MapExpr::affine(2, 0), MapExpr::affine(2, 1)]),
        Cardinality::Infinite,
    )
}

#[test]
fn bl_branch_b_fixtures() {
    for (t, p) in [(stride(2, 0), stride(2, 1)), (stride(3, 0), residues_one_two())] {
        assert!(complement_of(&[&t.map, &p.map], 3000).is_empty());
        let s = witness_right_bl(&t, &p, &opts()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(passes(&s));
    }
}

#[test]
fn bl1_endpoints() {
    let id = identity();
    let s = witness_right_bl1(&id, &id, &opts()).unwrap();
    assert_eq!(s.len(), 0);
    assert!(passes(&s));
    let s = witness_right_bl1(&stride(2, 0), &id, &opts()).unwrap();
    assert_eq!(s.len(), 3);
    assert!(passes(&s));
    let s = witness_right_bl1(&id, &residues_one_two(), &opts()).unwrap();
    assert!(s.len() <= 3 && passes(&s));
}

fn last_u(s: &DerivationSequence) -> MapExpr {
    s.steps.last().unwrap().u.as_map().unwrap().clone()
}

#[test]
fn inj_identity_pair_picks_alpha() {
    let s = witness_right_inj(&identity(), &identity(), &opts()).unwrap();
    assert_eq!(s.len(), 4);
    assert_eq!(last_u(&s), natmap_core::canonical_alpha_hat());
    assert!(passes(&s));
}

#[test]
fn inj_identity_successor_picks_beta() {
    let s = witness_right_inj(&identity(), &succ(), &opts()).unwrap();
    assert_eq!(s.len(), 4);
    assert_eq!(last_u(&s), natmap_core::canonical_beta_hat());
    assert!(passes(&s));
}

#[test]
fn i_zero_examples() {
    let id = PartialMapExpr::total(MapExpr::Id);
    assert!(passes(&witness_right_i_zero(&id, &id)));
    let s = witness_right_i_zero(&PartialMapExpr::empty(), &id);
    assert_eq!(s.len(), 2);
    assert!(passes(&s));
}

fn is_ideal_member(f: &MapExpr) -> bool {
    at(f, 0) == at(f, 1)
}

/// Right ideal `{f : f(0) = f(1)}` of `T_ℕ` with generators `u′`, `v′`.
fn ideal_inner(ua: &MapExpr, ub: &MapExpr) -> WResult<DerivationSequence> {
    assert!(is_ideal_member(ua) && is_ideal_member(ub));
    let u2 = MapExpr::patch(MapExpr::affine(2, 0), [(0, 2), (1, 2)]);
    let v2 = MapExpr::patch(MapExpr::affine(2, 1), [(0, 3), (1, 3)]);
    let c = at(ua, 0);
    let gamma = MapExpr::patch(natmap_core::gamma_hat(ua, ub), [(0, c), (1, c)]);
    assert!(is_ideal_member(&gamma));
    Ok(DerivationSequence {
        side: Side::Right,
        a: Gen::map(ua.clone()),
        b: Gen::map(ub.clone()),
        steps: vec![Step::new(Gen::map(u2.clone()), Gen::map(v2.clone()), Gen::map(gamma))],
        generators: vec![Gen::map(u2), Gen::map(v2)],
    })
}

#[test]
fn ideal_descent_adds_two() {
    let u = MapExpr::floor_div(2);
    let (a, b) = (MapExpr::affine(1, 1), MapExpr::affine(3, 0));
    let s = witness_right_ideal_descent(&a, &b, &u, ideal_inner, &opts()).unwrap();
    assert_eq!(s.len(), 3);
    assert!(passes(&s));

    let zero = |ua: &MapExpr, ub: &MapExpr| {
        Ok(DerivationSequence {
            side: Side::Right,
            a: Gen::map(ua.clone()),
            b: Gen::map(ub.clone()),
            steps: vec![],
            generators: vec![],
        })
    };
    let s = witness_right_ideal_descent(&a, &a, &u, zero, &opts()).unwrap();
    assert!(s.len() <= 2);
}

#[test]
fn ideal_descent_propagates_inner_failure() {
    let u = MapExpr::floor_div(2);
    let r =
        witness_right_ideal_descent(&MapExpr::Id, &MapExpr::Id, &u, |_, _| Err(WitnessError::UndecidedBranch), &opts());
    assert!(matches!(r, Err(WitnessError::UndecidedBranch)));
}

fn sample(tag: ClassTag, seed: u64) -> CertMap {
    let (e, cap) = random_element(tag, seed, 3);
    CertMap::new(e.as_total().unwrap().clone(), cap)
}

fn all_multipliers_in(seq: &DerivationSequence, tag: ClassTag) {
    for st in &seq.steps {
        if let (Some(m), Some(c)) = (st.s.as_map(), &st.s_cap) {
            let v = member_check(&Element::total(m.clone()), c, tag, 512).unwrap();
            assert!(!v.is_no(), "multiplier left the class {tag}: {v:?}");
        }
    }
}

#[test]
fn seeded_t_and_f() {
    for seed in 0..100 {
        let (t, p) = (sample(ClassTag::T, seed), sample(ClassTag::T, seed + 1000));
        let s = witness_right_t(&t.map, &p.map);
        assert!(s.len() <= 1 && passes(&s), "T seed {seed}");
        let (t, p) = (sample(ClassTag::F, seed), sample(ClassTag::F, seed + 1000));
        let s = witness_right_f(&t, &p).unwrap();
        assert!(s.len() <= 1 && passes(&s), "F seed {seed}");
        all_multipliers_in(&s, ClassTag::F);
    }
}

#[test]
fn seeded_not_surj() {
    for seed in 0..100 {
        let (t, p) = (sample(ClassTag::TNotSurj, seed), sample(ClassTag::TNotSurj, seed + 1000));
        let s = witness_right_t_not_surj(&t, &p, &opts()).unwrap();
        assert!(s.len() <= 2 && passes(&s), "seed {seed}");
        all_multipliers_in(&s, ClassTag::TNotSurj);
    }
}

#[test]
fn seeded_bl_and_bl1() {
    for seed in 0..100 {
        let (t, p) = (sample(ClassTag::BL, seed), sample(ClassTag::BL, seed + 1000));
        let s = witness_right_bl(&t, &p, &opts()).unwrap();
        assert!(s.len() <= 3 && passes(&s), "BL seed {seed}");
        all_multipliers_in(&s, ClassTag::BL);
        let (t, p) = (sample(ClassTag::BL1, seed), sample(ClassTag::BL1, seed + 1000));
        let s = witness_right_bl1(&t, &p, &opts()).unwrap();
        assert!(s.len() <= 3 && passes(&s), "BL1 seed {seed}");
    }
}

#[test]
fn seeded_inj_and_sym_bl() {
    for seed in 0..100 {
        for tag in [ClassTag::Inj, ClassTag::SymBL, ClassTag::Sym] {
            let (t, p) = (sample(tag, seed), sample(tag, seed + 1000));
            let s = witness_right_inj(&t, &p, &opts()).unwrap();
            assert!(s.len() <= 4 && passes(&s), "{tag} seed {seed}");
        }
    }
}

#[test]
fn seeded_partial_injections() {
    for seed in 0..100 {
        let (a, _) = random_element(ClassTag::I, seed, 3);
        let (b, _) = random_element(ClassTag::I, seed + 1000, 3);
        let (Element::Partial { map: a }, Element::Partial { map: b }) = (a, b) else { panic!("partial sample") };
        let s = witness_right_i_zero(&a, &b);
        assert!(s.len() <= 2);
        assert!(verify_sequence(&s, 1024).unwrap().passed());
    }
}

#[test]
fn sequence_json_roundtrip() {
    let s = witness_right_bl(&stride(2, 0), &stride(2, 1), &opts()).unwrap();
    let back: DerivationSequence = serde_json::from_str(&s.to_json()).unwrap();
    assert_eq!(back, s);
    assert!(passes(&back));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reversal_preserves_validity(seed in 0u64..10_000) {
        let (t, p) = (sample(ClassTag::T, seed), sample(ClassTag::T, seed + 1));
        let s = witness_right_t(&t.map, &p.map).reverse();
        prop_assert!(verify_sequence(&s, 512).unwrap().passed());
    }

    #[test]
    fn any_corrupted_multiplier_is_caught(seed in 0u64..10_000, c in 0u64..1000) {
        let (t, p) = (sample(ClassTag::BL, seed), sample(ClassTag::BL, seed + 1));
        let mut s = witness_right_bl(&t, &p, &Opts { window: 512, ..Opts::default() }).unwrap();
        let k = (c as usize) % s.len();
        s.steps[k].s = Gen::map(MapExpr::constant(c));
        let r = verify_sequence(&s, 512).unwrap();
        prop_assert!(matches!(r.status, Status::Fail(_)));
    }
}

use natmap_core::*;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = MapExpr> {
    prop_oneof![
        Just(MapExpr::Id),
        (0u64..64).prop_map(MapExpr::constant),
        (0u64..4, 0u64..9).prop_map(|(a, b)| MapExpr::affine(a, b)),
        (1u64..4).prop_flat_map(|m| {
            prop::collection::vec((0u64..4, 0u64..9), m as usize).prop_map(move |rules| MapExpr::AffineMod { m, rules })
        }),
        Just(MapExpr::UnpackFirst),
        Just(MapExpr::UnpackSecond),
    ]
}

fn term() -> impl Strategy<Value = MapExpr> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, g)| f.then(g)),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| gamma_hat(&f, &g)),
            (leaf(), leaf()).prop_map(|(f, g)| MapExpr::pack_pair(f, g)),
            (inner.clone(), prop::collection::vec((0u64..64, 0u64..64), 0..4)).prop_map(|(f, o)| MapExpr::patch(f, o)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hat_projections_recover_inputs(t in term(), p in term()) {
        let g = gamma_hat(&t, &p);
        let left = canonical_alpha_hat().then(g.clone()).compile().unwrap();
        let right = canonical_beta_hat().then(g).compile().unwrap();
        let (ft, fp) = (t.compile().unwrap(), p.compile().unwrap());
        for x in 0..4096 {
            prop_assert_eq!(left(x), ft(x));
            prop_assert_eq!(right(x), fp(x));
        }
    }

    #[test]
    fn tilde_projections_recover_inputs(t in term(), p in term()) {
        let g = gamma_tilde(&t, &p);
        let left = g.clone().then(canonical_alpha_tilde()).compile().unwrap();
        let right = g.then(canonical_beta_tilde()).compile().unwrap();
        let (ft, fp) = (t.compile().unwrap(), p.compile().unwrap());
        for x in 0..4096 {
            match (ft(x), fp(x)) {
                (Ok(a), Ok(b)) if try_pack(a, b).is_ok() => {
                    prop_assert_eq!(left(x).unwrap(), a);
                    prop_assert_eq!(right(x).unwrap(), b);
                }
                _ => prop_assert!(left(x).is_err()),
            }
        }
    }

    #[test]
    fn json_roundtrip_preserves_values(t in term()) {
        let back = MapExpr::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(&back, &t);
        let (a, b) = (t.compile().unwrap(), back.compile().unwrap());
        for x in 0..1024 {
            prop_assert_eq!(a(x), b(x));
        }
    }

    #[test]
    fn compose_is_associative(f in term(), g in term(), h in term()) {
        let l = f.clone().then(g.clone()).then(h.clone()).compile().unwrap();
        let r = f.then(g.then(h)).compile().unwrap();
        for x in 0..1024 {
            prop_assert_eq!(l(x), r(x));
        }
    }

    #[test]
    fn pack_inverts_unpack(z in 0u64..u32::MAX as u64) {
        let (a, b) = unpack(z);
        prop_assert_eq!(pack(a, b), z);
    }
}

#[test]
fn pairing_is_bijective_on_ranges() {
    for z in 0..1_000_000u64 {
        let (a, b) = unpack(z);
        assert_eq!(pack(a, b), z);
    }
    for s in 0..1400u64 {
        for a in 0..=s {
            assert_eq!(unpack(pack(a, s - a)), (a, s - a));
        }
    }
}

#[test]
fn serialization_roundtrip_thousand_terms() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config::default());
    let strat = term();
    for _ in 0..1000 {
        let t = strat.new_tree(&mut runner).unwrap().current();
        let back = MapExpr::from_json(&t.to_json()).unwrap();
        let (a, b) = (t.compile().unwrap(), back.compile().unwrap());
        for x in 0..1024 {
            assert_eq!(a(x), b(x));
        }
    }
}

/// Kernel classes computed by brute force over a window.
fn kernel_classes(f: &MapExpr, n: u64) -> Vec<Vec<u64>> {
    let f = f.compile().unwrap();
    let mut by_value: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for x in 0..n {
        by_value.entry(f(x).unwrap()).or_default().push(x);
    }
    let mut classes: Vec<_> = by_value.into_values().collect();
    classes.sort();
    classes
}

#[test]
fn tilde_with_constant_keeps_kernel() {
    for phi in [MapExpr::floor_div(3), MapExpr::affine(2, 1), MapExpr::UnpackSecond] {
        let g = gamma_tilde(&MapExpr::constant(0), &phi);
        assert_eq!(kernel_classes(&g, 50), kernel_classes(&phi, 50));
    }
}

#[test]
fn alpha_tilde_ranks_match_direct_enumeration() {
    let cap = alpha_tilde_capability();
    assert!(check_capabilities(&canonical_alpha_tilde(), &cap, 500).unwrap().passed());
    let fib = cap.fibers_of(&canonical_alpha_tilde(), 1 << 20).unwrap();
    let f = canonical_alpha_tilde().compile().unwrap();
    for x in 0..500u64 {
        let class = f(x).unwrap();
        let rank = (0..x).filter(|&z| f(z).unwrap() == class).count() as u64;
        assert_eq!(fib.rank(x).unwrap(), (class, rank));
    }
}

#[test]
fn capability_examples() {
    assert!(check_capabilities(&canonical_alpha_hat(), &alpha_hat_capability(), 1000).unwrap().passed());
    let bogus = Capability { cert_injective: true, ..Default::default() };
    let r = check_capabilities(&halve(), &bogus, 10).unwrap();
    assert_eq!(r.failure().unwrap().point, 1);
}

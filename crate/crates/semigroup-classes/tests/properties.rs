use std::collections::HashSet;

use natmap_core::{check_capabilities, Capability};
use proptest::prelude::*;
use semigroup_classes::*;

const WINDOW: u64 = 256;

fn verdict(tag: ClassTag, seed: u64) -> Verdict {
    let (e, cap) = random_element(tag, seed, 3);
    member_check(&e, &cap, tag, WINDOW).unwrap_or_else(|err| panic!("{tag} seed {seed}: {err}"))
}

#[test]
fn samples_are_certified_members() {
    for tag in ClassTag::ALL {
        for seed in 0..60 {
            assert!(verdict(tag, seed).is_yes(), "{tag} seed {seed}");
        }
    }
}

#[test]
fn class_implications_on_samples() {
    for seed in 0..1000 {
        let (e, cap) = random_element(ClassTag::BL, seed, 3);
        assert!(member_check(&e, &cap, ClassTag::Inj, 64).unwrap().is_yes());
        let (e, cap) = random_element(ClassTag::DBL, seed, 3);
        assert!(member_check(&e, &cap, ClassTag::Surj, 64).unwrap().is_yes());
        let (e, cap) = random_element(ClassTag::Sym, seed, 2);
        assert!(member_check(&e, &cap, ClassTag::Inj, 64).unwrap().is_yes());
        assert!(member_check(&e, &cap, ClassTag::Surj, 64).unwrap().is_yes());
    }
}

#[test]
fn sample_capabilities_hold_on_windows() {
    for tag in
        [ClassTag::F, ClassTag::Inj, ClassTag::Surj, ClassTag::Sym, ClassTag::BL, ClassTag::DBL, ClassTag::TNotSurj]
    {
        for seed in 0..40 {
            let (e, cap) = random_element(tag, seed, 4);
            let map = e.as_total().unwrap();
            assert!(check_capabilities(map, &cap, 512).unwrap().passed(), "{tag} seed {seed}");
        }
    }
}

#[test]
fn finite_to_one_images_keep_growing() {
    for seed in 0..200 {
        let (e, _) = random_element(ClassTag::F, seed, 3);
        let f = e.as_total().unwrap().compile().unwrap();
        let distinct = |n: u64| (0..n).map(|x| f(x).unwrap()).collect::<HashSet<_>>().len();
        let (a, b, c) = (distinct(512), distinct(1024), distinct(2048));
        assert!(a < b && b < c, "seed {seed}: {a} {b} {c}");
    }
}

#[test]
fn spec_sampler_examples() {
    assert!(verdict(ClassTag::Sym, 1).is_yes());
    let (_, cap) = random_element(ClassTag::TNotSurj, 5, 2);
    assert!(cap.misses_something());
    let (e, _) = random_element(ClassTag::I, 9, 2);
    assert!(e.is_partial());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn no_yes_after_tampering(seed in 0u64..10_000, which in 0usize..3) {
        // grafting a false certificate must never produce certifiedYes
        let (tag, e, cap) = match which {
            0 => {
                let (e, mut cap) = random_element(ClassTag::TNotInj, seed, 2);
                cap.collision = None;
                cap.cert_injective = true;
                (ClassTag::Inj, e, cap)
            }
            1 => {
                let (e, c) = random_element(ClassTag::Surj, seed, 2);
                let cap = Capability { cert_injective: true, ..c };
                (ClassTag::Sym, e, cap)
            }
            _ => {
                let (e, c) = random_element(ClassTag::F, seed, 2);
                let cap = Capability { cert_injective: true, cert_image_coinfinite: true, ..c };
                (ClassTag::BL, e, cap)
            }
        };
        let map = e.as_total().unwrap();
        let honest = check_capabilities(map, &cap, WINDOW);
        let v = member_check(&e, &cap, tag, WINDOW);
        if let Ok(r) = honest {
            if !r.passed() {
                prop_assert!(v.is_err());
            }
        }
        if let Ok(v) = v {
            if v.is_yes() {
                prop_assert!(check_capabilities(map, &cap, WINDOW).unwrap().passed());
            }
        }
    }
}

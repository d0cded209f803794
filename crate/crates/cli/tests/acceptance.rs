//! The ten acceptance criteria, one PASS/FAIL line each. Exits nonzero when
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use finite_oracle::{
    cong_closure, distances, ideal_check, ideal_fixtures, is_metric, random_pairs, random_semigroup, zero_checks,
    Diameter, FiniteSemigroup, IdealFixture, Side as OSide,
};
use left_witness::{
    interleave, stage_bound, witness_left_dbl, witness_left_dbl1, witness_left_i_zero, witness_left_surj,
    witness_left_t, witness_left_t_not_inj, ClassFamily, LeftMap,
};
use natmap_core::{pack, MapExpr};
use partition_monoid::{
    random_partition, random_tiled, verify_diagonal_witness, verify_left_transfer, FinitePartition,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use refuters::fixtures::{alpha_hat, beta_hat, crafted, seeded};
use refuters::{refute, refute_right_depth2_bl, replay_json, soundness_gate, Entry, RefuteOpts, Target};
use right_witness::{
    verify_sequence, witness_right_bl, witness_right_f, witness_right_h, witness_right_i_zero, witness_right_inj,
    witness_right_t, witness_right_t_not_surj, CertMap, DerivationSequence, Opts,
};
use semidiam::samples::{bl_branch_a, bl_branch_b, finite_surj, relabeled_dbl, sample, small_t, Operand};
use semigroup_classes::{member_check, ClassTag, Element, PartialMapExpr};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn passes(seq: &DerivationSequence, n: u64) -> bool {
    verify_sequence(seq, n).is_ok_and(|r| r.passed())
}

fn entry(op: Operand) -> Entry {
    match op {
        Operand::Total(e) => e,
        Operand::Partial { .. } => panic!("expected a total sample"),
    }
}

fn cert(tag: ClassTag, seed: u64) -> CertMap {
    let e = entry(sample(tag, seed));
    CertMap::new(e.map, e.cap)
}

fn partial(seed: u64) -> PartialMapExpr {
    match sample(ClassTag::I, seed) {
        Operand::Partial { partial } => partial,
        Operand::Total(_) => panic!("expected a partial sample"),
    }
}

fn cert_of(e: &Entry) -> CertMap {
    CertMap::new(e.map.clone(), e.cap.clone())
}

fn certified_yes(seq: &DerivationSequence, tag: ClassTag) -> bool {
    seq.steps.iter().all(|st| match (st.s.as_map(), &st.s_cap) {
        (Some(m), Some(c)) => member_check(&Element::total(m.clone()), c, tag, 1024).is_ok_and(|v| v.is_yes()),
        _ => false,
    })
}

fn c1_diameter_one() -> Outcome {
    const N: u64 = 4096;
    let start = Instant::now();
    let mut count = 0;
    for seed in 0..100 {
        let (t, p) = (cert(ClassTag::T, seed), cert(ClassTag::T, seed + 1000));
        let s = witness_right_t(&t.map, &p.map);
        ensure!(s.len() == 1 && passes(&s, N), "right T seed {seed}");
        let (t, p) = (cert(ClassTag::F, seed), cert(ClassTag::F, seed + 1000));
        let s = witness_right_f(&t, &p).map_err(|e| format!("right F seed {seed}: {e}"))?;
        ensure!(s.len() == 1 && passes(&s, N), "right F seed {seed}");
        let (t, p) = (cert(ClassTag::F, seed + 2000), cert(ClassTag::F, seed + 3000));
        let s = witness_right_h(&t, &p).map_err(|e| format!("right H seed {seed}: {e}"))?;
        ensure!(s.len() == 1 && passes(&s, N), "right H seed {seed}");
        let ((_, t), (_, p)) = (small_t(seed), small_t(seed + 1000));
        let s = witness_left_t(&t, &p);
        ensure!(s.len() == 1 && passes(&s, N), "left T seed {seed}");
        count += 4;
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:.2?}");
    Ok(format!("{count} length-1 sequences verified at N={N} in {took:.2?}"))
}

fn c2_not_surj_not_inj() -> Outcome {
    let opts = Opts::default();
    for seed in 0..100 {
        let (t, p) = (cert(ClassTag::TNotSurj, seed), cert(ClassTag::TNotSurj, seed + 1000));
        let s = witness_right_t_not_surj(&t, &p, &opts).map_err(|e| format!("right seed {seed}: {e}"))?;
        ensure!(s.len() == 2 && passes(&s, opts.window), "right seed {seed}: length {}", s.len());
        ensure!(certified_yes(&s, ClassTag::TNotSurj), "right seed {seed}: multiplier not certified");

        let lm = |s| {
            let e = entry(sample(ClassTag::TNotInj, s));
            LeftMap::new(e.map, e.cap)
        };
        let s = witness_left_t_not_inj(&lm(seed), &lm(seed + 1000), opts.window)
            .map_err(|e| format!("left seed {seed}: {e}"))?;
        ensure!(s.len() == 2 && passes(&s, opts.window), "left seed {seed}: length {}", s.len());
        ensure!(certified_yes(&s, ClassTag::TNotInj), "left seed {seed}: multiplier not certified");
    }
    Ok(format!("100 + 100 pairs, length 2, verified at N={}, multipliers certified", opts.window))
}

/// Values in `[0, bound)` hit by neither map.
fn joint_complement(a: &MapExpr, b: &MapExpr, bound: u64) -> usize {
    let mut hit = vec![false; bound as usize];
    for m in [a, b] {
        let f = m.compile().expect("compiles");
        for x in 0..bound {
            let v = f(x).expect("evaluates");
            if v < bound {
                hit[v as usize] = true;
            }
        }
    }
    hit.iter().filter(|h| !**h).count()
}

fn c3_bl() -> Outcome {
    let opts = Opts::default();
    let mut lengths = [[0usize; 4]; 2];
    for (branch, fixtures) in [bl_branch_a(), bl_branch_b()].into_iter().enumerate() {
        ensure!(fixtures.len() == 50, "{} fixtures in branch {branch}", fixtures.len());
        for (i, (t, p)) in fixtures.iter().enumerate() {
            let missed = joint_complement(&t.map, &p.map, 3000);
            ensure!((branch == 0) == (missed > 0), "fixture {branch}/{i} misses {missed} points below 3000");
            let s =
                witness_right_bl(&cert_of(t), &cert_of(p), &opts).map_err(|e| format!("fixture {branch}/{i}: {e}"))?;
            ensure!(s.len() <= 3 && passes(&s, opts.window), "fixture {branch}/{i}: length {}", s.len());
            lengths[branch][s.len()] += 1;
        }
    }
    ensure!(lengths[1][3] >= 1, "no branch-B fixture needs length 3");
    Ok(format!("lengths by branch A {:?}, B {:?} (counts of 0..=3)", lengths[0], lengths[1]))
}

fn c4_inj() -> Outcome {
    let opts = Opts::default();
    let mut longest = 0;
    for seed in 0..100 {
        let (t, p) = (cert(ClassTag::Inj, seed), cert(ClassTag::Inj, seed + 1000));
        let s = witness_right_inj(&t, &p, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(s.len() <= 4 && passes(&s, opts.window), "seed {seed}: length {}", s.len());
        longest = longest.max(s.len());
    }
    Ok(format!("100 pairs verified, longest {longest}"))
}

fn c5_dbl() -> Outcome {
    const N: u64 = 2048;
    for seed in 0..50 {
        let s = witness_left_dbl(&relabeled_dbl(seed), &relabeled_dbl(seed + 500), N)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(s.len() == 2 && passes(&s, N), "seed {seed}: length {}", s.len());
    }
    let (a, b) = (ClassFamily::kernel(MapExpr::UnpackFirst), ClassFamily::kernel(MapExpr::UnpackSecond));
    let il = interleave(&a, &b);
    let budget = stage_bound(7, pack(15, 7)).map_err(|e| e.to_string())? + 2;
    let mut ac = [[0u32; 8]; 8];
    let mut bc = [[0u32; 8]; 8];
    for l in 0..budget {
        let (t, x) = il.stage(l).map_err(|e| e.to_string())?;
        let (ca, cb) = (a.class_of(x).map_err(|e| e.to_string())?, b.class_of(x).map_err(|e| e.to_string())?);
        if t.c < 8 && ca < 8 {
            ac[ca as usize][t.c as usize] += 1;
        }
        if t.c < 8 && cb < 8 {
            bc[cb as usize][t.c as usize] += 1;
        }
    }
    let min = ac.iter().chain(&bc).flatten().min().copied().unwrap_or(0);
    ensure!(min >= 16, "smallest grid cell has {min} members");
    Ok(format!("50 pairs of length 2 at N={N}; grid minimum {min} over {budget} stages"))
}

fn c6_dbl1_surj() -> Outcome {
    const N: u64 = 2048;
    let one = LeftMap::identity;
    let mut pairs = vec![(one(), one()), (one(), relabeled_dbl(1)), (relabeled_dbl(2), one())];
    for seed in 0..47 {
        let pick = |s: u64| if s.is_multiple_of(8) { one() } else { relabeled_dbl(s) };
        pairs.push((pick(seed), pick(seed + 501)));
    }
    let mut longest = 0;
    for (i, (t, p)) in pairs.iter().enumerate() {
        let s = witness_left_dbl1(t, p, N).map_err(|e| format!("DBL1 pair {i}: {e}"))?;
        ensure!(s.len() <= 3 && passes(&s, N), "DBL1 pair {i}: length {}", s.len());
        longest = longest.max(s.len());
    }
    for seed in 0..50 {
        let s = witness_left_surj(&finite_surj(seed), &finite_surj(seed + 500), N)
            .map_err(|e| format!("Surj seed {seed}: {e}"))?;
        ensure!(s.len() == 4 && passes(&s, N), "Surj seed {seed}: length {}", s.len());
    }
    Ok(format!("{} DBL1 pairs, longest {longest}; 50 surjection pairs through 4 steps at N={N}", pairs.len()))
}

fn c7_partial_injections() -> Outcome {
    let mut distinct = 0;
    for seed in 0..50 {
        let (a, b) = (partial(seed), partial(seed + 1000));
        let want = if a == b { 0 } else { 2 };
        distinct += usize::from(a != b);
        for (side, s) in [("right", witness_right_i_zero(&a, &b)), ("left", witness_left_i_zero(&a, &b))] {
            ensure!(s.len() == want && passes(&s, 1024), "{side} seed {seed}: length {}", s.len());
        }
    }
    ensure!(distinct >= 45, "only {distinct} distinct pairs");
    Ok(format!("{distinct} distinct pairs joined in 2 steps on both sides"))
}

fn replays(t: Target, u: &[Entry], depth: u64) -> Result<(), String> {
    let c = refute(t, u, depth, &RefuteOpts::default()).map_err(|e| e.to_string())?;
    let r = replay_json(&c.to_json()).map_err(|e| e.to_string())?;
    ensure!(r.passed(), "{} failing claims", r.failing.len());
    Ok(())
}

fn c8_refuters() -> Outcome {
    let mut certs = 0;
    for t in [Target::RightIdeal, Target::LeftIdeal] {
        for seed in 0..20 {
            let u = seeded(t, seed).expect("sampled target");
            replays(t, &u, 0).map_err(|e| format!("{t} seed {seed}: {e}"))?;
            certs += 1;
        }
    }
    for t in [Target::RightCong, Target::LeftCong] {
        for seed in 0..20 {
            let u = seeded(t, seed).expect("sampled target");
            for k in 1..=2 {
                replays(t, &u, k).map_err(|e| format!("{t} seed {seed} depth {k}: {e}"))?;
                certs += 1;
            }
        }
    }
    for t in [Target::RightBl2, Target::RightInj3, Target::LeftSurj2, Target::LeftSurj3] {
        let fixtures = crafted(t);
        ensure!(fixtures.len() == 5, "{t}: {} fixtures", fixtures.len());
        for (label, u) in fixtures {
            replays(t, &u, t.fixed_depth().expect("fixed")).map_err(|e| format!("{t} {label}: {e}"))?;
            certs += 1;
        }
    }

    let c = refute_right_depth2_bl(&[alpha_hat(), beta_hat()], &RefuteOpts::default()).map_err(|e| e.to_string())?;
    let (t, p) = (&c.maps[refuters::cert::THETA], &c.maps[refuters::cert::PHI]);
    let s = witness_right_bl(&cert_of(t), &cert_of(p), &Opts::default()).map_err(|e| e.to_string())?;
    ensure!(s.len() == 3, "cross-gate witness has length {}", s.len());
    soundness_gate(&c, &s, 4096).map_err(|e| format!("cross gate: {e}"))?;
    for (i, (t, p)) in bl_branch_b().iter().enumerate() {
        let s = witness_right_bl(&cert_of(t), &cert_of(p), &Opts::default()).map_err(|e| e.to_string())?;
        ensure!(s.len() == 3, "branch-B fixture {i} has length {}", s.len());
        soundness_gate(&c, &s, 4096).map_err(|e| format!("cross gate on fixture {i}: {e}"))?;
    }
    Ok(format!("{certs} certificates replayed; BL witness of length 3 stands beside a depth-2 refutation"))
}

#[derive(serde::Deserialize)]
struct ProductFixture {
    alpha: FinitePartition,
    beta: FinitePartition,
    product: FinitePartition,
}

fn c9_partitions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let (a, b, c) = (random_partition(&mut rng, 7), random_partition(&mut rng, 7), random_partition(&mut rng, 7));
        let l = a.product(&b).and_then(|ab| ab.product(&c)).map_err(|e| e.to_string())?;
        let r = b.product(&c).and_then(|bc| a.product(&bc)).map_err(|e| e.to_string())?;
        ensure!(l == r, "associativity fails on triple {i}");
    }
    for i in 0..500 {
        let (a, b) = (random_partition(&mut rng, 7), random_partition(&mut rng, 7));
        let lhs = a.product(&b).map_err(|e| e.to_string())?.star();
        let rhs = b.star().product(&a.star()).map_err(|e| e.to_string())?;
        ensure!(lhs == rhs && a.star().star() == a, "involution fails on pair {i}");
    }
    let fx: ProductFixture =
        serde_json::from_str(include_str!("../../partition-monoid/tests/fixtures/product_p6.json"))
            .map_err(|e| e.to_string())?;
    ensure!(fx.alpha.product(&fx.beta).as_ref() == Ok(&fx.product), "printed P_6 product differs");
    for i in 0..50 {
        let (t, p) = (random_tiled(&mut rng, true), random_tiled(&mut rng, true));
        let d = verify_diagonal_witness(&t, &p, 256, None).map_err(|e| e.to_string())?;
        ensure!(d.passed(), "diagonal witness fails on pair {i}");
        let l = verify_left_transfer(&t, &p, 256, None).map_err(|e| e.to_string())?;
        ensure!(l.passed(), "left transfer fails on pair {i}");
    }
    Ok("1000 triples, 500 pairs, printed product, 50 PB pairs at N=256 with transfer".into())
}

/// Least equivalence containing `pairs` and closed under the action, grown
/// to a fixpoint on a relation matrix.
fn naive_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: OSide) -> Vec<Vec<bool>> {
    let n = s.len();
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(u, v) in pairs {
        rel[u][v] = true;
        rel[v][u] = true;
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !rel[a][b] {
                    continue;
                }
                let mut add: Vec<(usize, usize)> = (0..n)
                    .map(|m| match side {
                        OSide::Right => (s.mul(a, m), s.mul(b, m)),
                        OSide::Left => (s.mul(m, a), s.mul(m, b)),
                    })
                    .collect();
                add.extend((0..n).filter(|&c| rel[b][c]).map(|c| (a, c)));
                for (x, y) in add {
                    if !rel[x][y] {
                        rel[x][y] = true;
                        rel[y][x] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

fn c10_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut matrices = 0;
    for trial in 0..200 {
        let s = random_semigroup(&mut rng, 30);
        let pairs = random_pairs(&mut rng, s.len());
        let side = if trial % 2 == 0 { OSide::Right } else { OSide::Left };
        let labels = cong_closure(&s, &pairs, side);
        let rel = naive_closure(&s, &pairs, side);
        for a in 0..s.len() {
            for b in 0..s.len() {
                ensure!((labels[a] == labels[b]) == rel[a][b], "closure differs on trial {trial}");
            }
        }
        ensure!(is_metric(&distances(&s, &pairs, side)), "distances on trial {trial} are not a metric");
        matrices += 1;
    }
    let mut applicable = 0;
    for _ in 0..200 {
        let m = random_semigroup(&mut rng, 30).with_identity();
        for m in [m.opposite(), m] {
            for z in zero_checks(&m) {
                ensure!(z.holds(), "zero bound fails: {z:?}");
                let one = m.identity.expect("monoid");
                ensure!(is_metric(&distances(&m, &[(one, z.zero)], z.side)), "zero distances are not a metric");
                applicable += 1;
                matrices += 1;
            }
        }
    }
    let fixtures = ideal_fixtures();
    ensure!(fixtures.len() == 10, "{} ideal fixtures", fixtures.len());
    for IdealFixture { name, monoid, ideal, side } in &fixtures {
        let c = ideal_check(monoid, ideal, *side, None, 3).map_err(|e| format!("{name}: {e}"))?;
        ensure!(c.holds() && c.ideal_diameter != Diameter::Infinite, "{name}: {c:?}");
        ensure!(is_metric(&distances(monoid, &finite_oracle::square(&c.lifted), *side)), "{name}: not a metric");
        matrices += 1;
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:.2?}");
    Ok(format!("200 closures, {applicable} zero checks, 10 ideal fixtures, {matrices} metrics in {took:.2?}"))
}

fn main() {
    left_witness::register_generators();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("diameter-1 witnesses", c1_diameter_one),
        ("T without Surj right, T without Inj left", c2_not_surj_not_inj),
        ("BL right, both branches", c3_bl),
        ("Inj right", c4_inj),
        ("DBL left and the interleaving grid", c5_dbl),
        ("DBL1 and Surj left", c6_dbl1_surj),
        ("partial injections", c7_partial_injections),
        ("refuters and the BL cross gate", c8_refuters),
        ("partition monoid", c9_partitions),
        ("finite oracle", c10_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

use partition_monoid::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p(n: usize, blocks: &[&[i64]]) -> FinitePartition {
    FinitePartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

/// Product by reachability in an adjacency matrix over the three rows.
fn naive_product(a: &FinitePartition, b: &FinitePartition) -> FinitePartition {
    let n = a.n();
    let idx = |row: usize, v: usize| row * n + v - 1;
    let mut adj = vec![vec![false; 3 * n]; 3 * n];
    let mut link = |blocks: &[Vec<i64>], top: usize, bot: usize| {
        for blk in blocks {
            for &u in blk {
                for &w in blk {
                    let iu = if u > 0 { idx(top, u as usize) } else { idx(bot, (-u) as usize) };
                    let iw = if w > 0 { idx(top, w as usize) } else { idx(bot, (-w) as usize) };
                    adj[iu][iw] = true;
                }
            }
        }
    };
    link(a.blocks(), 0, 1);
    link(b.blocks(), 1, 2);
    for k in 0..3 * n {
        for i in 0..3 * n {
            if adj[i][k] {
                for j in 0..3 * n {
                    if adj[k][j] {
                        adj[i][j] = true;
                    }
                }
            }
        }
    }
    let outer: Vec<(usize, i64)> =
        (1..=n).map(|v| (idx(0, v), v as i64)).chain((1..=n).map(|v| (idx(2, v), -(v as i64)))).collect();
    let mut blocks: Vec<Vec<i64>> = Vec::new();
    let mut taken = vec![false; outer.len()];
    for i in 0..outer.len() {
        if taken[i] {
            continue;
        }
        let mut blk = vec![outer[i].1];
        taken[i] = true;
        for j in i + 1..outer.len() {
            if !taken[j] && adj[outer[i].0][outer[j].0] {
                taken[j] = true;
                blk.push(outer[j].1);
            }
        }
        blocks.push(blk);
    }
    FinitePartition::new(n, blocks).unwrap()
}

fn fixture() -> (FinitePartition, FinitePartition, FinitePartition) {
    let v: Value = serde_json::from_str(include_str!("fixtures/product_p6.json")).unwrap();
    let get = |k: &str| serde_json::from_value::<FinitePartition>(v[k].clone()).unwrap();
    (get("alpha"), get("beta"), get("product"))
}

#[test]
fn associativity_on_p7() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let (a, b, c) = (random_partition(&mut r, 7), random_partition(&mut r, 7), random_partition(&mut r, 7));
        let left = a.product(&b).unwrap().product(&c).unwrap();
        let right = a.product(&b.product(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn identity_is_neutral() {
    let mut r = rng(2);
    for _ in 0..500 {
        let n = r.gen_range(1..=7);
        let a = random_partition(&mut r, n);
        let id = FinitePartition::identity(n);
        assert_eq!(a.product(&id).unwrap(), a);
        assert_eq!(id.product(&a).unwrap(), a);
    }
}

#[test]
fn involution_reverses_products() {
    let mut r = rng(3);
    for _ in 0..500 {
        let (a, b) = (random_partition(&mut r, 6), random_partition(&mut r, 6));
        assert_eq!(a.star().star(), a);
        assert_eq!(a.product(&b).unwrap().star(), b.star().product(&a.star()).unwrap());
    }
}

#[test]
fn pb_is_closed() {
    let mut r = rng(4);
    for _ in 0..500 {
        let n = r.gen_range(1..=8);
        let (a, b) = (random_pb(&mut r, n), random_pb(&mut r, n));
        assert!(a.is_pb() && b.is_pb());
        assert!(a.product(&b).unwrap().is_pb());
    }
}

#[test]
fn union_find_matches_reachability() {
    let mut r = rng(5);
    for _ in 0..300 {
        let n = r.gen_range(1..=6);
        let (a, b) = (random_partition(&mut r, n), random_partition(&mut r, n));
        assert_eq!(a.product(&b).unwrap(), naive_product(&a, &b));
    }
}

#[test]
fn size_mismatch() {
    let e = FinitePartition::identity(2).product(&FinitePartition::identity(3));
    assert_eq!(e, Err(PartitionError::SizeMismatch(2, 3)));
}

#[test]
fn printed_p6_product() {
    let (a, b, ab) = fixture();
    assert_eq!(a.product(&b).unwrap(), ab);
    assert_eq!(naive_product(&a, &b), ab);
    assert!(!a.is_pb());
}

#[test]
fn small_product_by_hand() {
    let a = p(2, &[&[1, -1, -2], &[2]]);
    let b = p(2, &[&[1, 2, -1], &[-2]]);
    assert_eq!(a.product(&b).unwrap(), p(2, &[&[1, -1], &[2], &[-2]]));
}

#[test]
fn star_examples() {
    let id = FinitePartition::identity(4);
    assert_eq!(id.star(), id);
    let swap = p(2, &[&[1, -2], &[2, -1]]);
    assert_eq!(swap.star(), swap);
    assert!(id.is_pb());
    assert!(p(1, &[&[1, -1]]).star().is_pb());
    assert!(!p(2, &[&[1, 2, -1], &[-2]]).is_pb());
}

#[test]
fn json_form() {
    let (a, _, _) = fixture();
    assert_eq!(a.to_json(), r#"{"n":6,"blocks":[[1,4,5,6],[2,3,-4,-5],[-1],[-2,-6],[-3]]}"#);
    assert!(serde_json::from_str::<FinitePartition>(r#"{"n":2,"blocks":[[1,-1],[2]]}"#).is_err());
    assert!(serde_json::from_str::<FinitePartition>(r#"{"n":1,"blocks":[[1,-1],[1]]}"#).is_err());
}

#[test]
fn render_identity_and_fixture() {
    assert_eq!(render_ascii(&FinitePartition::identity(3)).unwrap(), " 1  2  3\n x  x  x\n 1' 2' 3'\n");
    let (a, _, _) = fixture();
    let expected = " 1  2  3  4  5  6\n ^--------^--^--^\n    ^--^--v--v\n    v-----------v\n 1' 2' 3' 4' 5' 6'\n";
    assert_eq!(render_ascii(&a).unwrap(), expected);
    assert_eq!(parse_ascii(expected).unwrap(), a);
}

#[test]
fn render_parse_round_trip() {
    let mut r = rng(6);
    for _ in 0..300 {
        let n = r.gen_range(1..=MAX_RENDER);
        let a = random_partition(&mut r, n);
        let s = render_ascii(&a).unwrap();
        assert_eq!(parse_ascii(&s), Ok(a.clone()), "{s}");
        assert_eq!(render_ascii(&a).unwrap(), s);
    }
}

#[test]
fn parse_rejects_garbage() {
    assert!(parse_ascii(" 1  2\n").is_err());
    assert!(parse_ascii(" 1  2\n q\n 1' 2'\n").is_err());
    assert!(parse_ascii(" 1  2\n x\n 1'\n").is_err());
}

#[test]
fn five_split_covers() {
    let f = five_split();
    assert_eq!(f[0](3), 15);
    assert_eq!(f[4](0), 4);
    let mut hits = vec![0u8; 1000];
    for g in f {
        for x in 0..200 {
            hits[g(x) as usize] += 1;
        }
    }
    assert!(hits.iter().all(|&h| h == 1));
}

#[test]
fn alpha_beta_blocks() {
    use Vtx::*;
    let a = SymbolicPartition::Alpha;
    assert_eq!(a.block(Top(3)), vec![Top(3), Bot(15)]);
    assert_eq!(a.block(Bot(16)), vec![Bot(16), Bot(17)]);
    assert_eq!(a.block(Bot(18)), vec![Bot(18)]);
    let b = SymbolicPartition::Beta;
    assert_eq!(b.block(Top(3)), vec![Top(3), Bot(19)]);
    assert_eq!(b.block(Bot(17)), vec![Bot(17), Bot(18)]);
    assert_eq!(b.block(Bot(15)), vec![Bot(15)]);
    assert!(a.is_pb() && b.is_pb());
    a.check_consistency(200).unwrap();
    b.check_consistency(200).unwrap();
}

#[test]
fn gamma_blocks() {
    use Vtx::*;
    let id = SymbolicPartition::Identity;
    let g = SymbolicPartition::gamma(id.clone(), id.clone());
    for x in 0..50 {
        assert_eq!(g.block(Top(5 * x)), vec![Top(5 * x), Top(5 * x + 1)]);
        assert_eq!(g.block(Bot(x)), vec![Top(5 * x + 2), Bot(x)]);
        assert_eq!(g.block(Top(5 * x + 3)), vec![Top(5 * x + 3), Top(5 * x + 4)]);
    }
    assert!(g.is_pb());
    g.check_consistency(100).unwrap();

    let three = SymbolicPartition::tiled(None, p(2, &[&[1, 2, -1], &[-2]]));
    assert!(!SymbolicPartition::gamma(three.clone(), id.clone()).is_pb());
    assert_eq!(SymbolicPartition::gamma(three, id).block(Top(5)), vec![Top(0), Top(1), Top(5)],);
}

#[test]
fn identity_witness() {
    let id = SymbolicPartition::Identity;
    let r = verify_diagonal_witness(&id, &id, 256, None).unwrap();
    assert!(r.passed());
    assert_eq!(r.alpha_gamma.checked, 512);
    assert!(verify_left_transfer(&id, &id, 256, None).unwrap().passed());
}

#[test]
fn seeded_pb_witnesses() {
    let mut r = rng(7);
    for _ in 0..50 {
        let theta = random_tiled(&mut r, true);
        let phi = random_tiled(&mut r, true);
        theta.check_consistency(64).unwrap();
        let d = verify_diagonal_witness(&theta, &phi, 256, None).unwrap();
        assert!(d.passed(), "{:?}", d.alpha_gamma.mismatches.first());
        assert!(d.gamma.is_pb());
        assert!(verify_left_transfer(&theta, &phi, 256, None).unwrap().passed());
    }
}

#[test]
fn seeded_general_witnesses() {
    let mut r = rng(8);
    for _ in 0..30 {
        let theta = random_tiled(&mut r, false);
        let phi = random_tiled(&mut r, false);
        assert!(verify_diagonal_witness(&theta, &phi, 128, None).unwrap().passed());
        assert!(verify_left_transfer(&theta, &phi, 128, None).unwrap().passed());
    }
}

#[test]
fn wrong_target_is_reported() {
    let id = SymbolicPartition::Identity;
    let gamma = SymbolicPartition::gamma(id.clone(), id.clone());
    let r = verify_product(&SymbolicPartition::Beta, &gamma, &SymbolicPartition::Alpha, 8, None).unwrap();
    assert!(!r.passed());
    assert_eq!(r.mismatches[0].vertex, Vtx::Top(1));
}

#[test]
fn tiled_products_agree_with_finite() {
    let mut r = rng(9);
    for _ in 0..100 {
        let n = r.gen_range(1..=5);
        let (a, b) = (random_partition(&mut r, n), random_partition(&mut r, n));
        let ab = a.product(&b).unwrap();
        let (sa, sb) = (SymbolicPartition::tiled(None, a), SymbolicPartition::tiled(None, b));
        let rep = verify_product(&sa, &sb, &SymbolicPartition::tiled(None, ab), 40, Some(200)).unwrap();
        assert!(rep.passed());
    }
}

#[test]
fn symbolic_star_and_json() {
    let mut r = rng(10);
    let theta = random_tiled(&mut r, true);
    let g = SymbolicPartition::gamma(theta, SymbolicPartition::Beta);
    assert_eq!(g.star().star(), g);
    assert_eq!(SymbolicPartition::Identity.star(), SymbolicPartition::Identity);
    g.star().check_consistency(64).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    assert_eq!(serde_json::from_str::<SymbolicPartition>(&s).unwrap(), g);
    assert!(s.contains(r#""kind":"gamma""#));
}

proptest! {
    #[test]
    fn prop_associative(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let (a, b, c) = (random_partition(&mut r, n), random_partition(&mut r, n), random_partition(&mut r, n));
        prop_assert_eq!(a.product(&b).unwrap().product(&c).unwrap(), a.product(&b.product(&c).unwrap()).unwrap());
    }

    #[test]
    fn prop_star_anti(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let (a, b) = (random_partition(&mut r, n), random_partition(&mut r, n));
        prop_assert_eq!(a.star().star(), a.clone());
        prop_assert_eq!(a.product(&b).unwrap().star(), b.star().product(&a.star()).unwrap());
    }

    #[test]
    fn prop_diagonal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (theta, phi) = (random_tiled(&mut r, seed % 2 == 0), random_tiled(&mut r, true));
        prop_assert!(verify_diagonal_witness(&theta, &phi, 48, None).unwrap().passed());
    }
}

//! Seeded transformation semigroups and hand-picked one-sided ideals.

use partition_monoid::FinitePartition;
use rand::Rng;

use crate::cong::Side;
use crate::semigroup::{cyclic, generate, left_zero, right_zero, t2, FiniteSemigroup, Transformation};

/// A semigroup generated by one to three random self-maps of at most four
/// points, redrawn until it has at most `cap` elements.
pub fn random_semigroup<R: Rng>(r: &mut R, cap: usize) -> FiniteSemigroup {
    loop {
        let n = r.gen_range(1..=4);
        let k = r.gen_range(1..=3);
        let gens: Vec<Transformation> =
            (0..k).map(|_| Transformation((0..n).map(|_| r.gen_range(0..n as u32)).collect())).collect();
        if let Ok(s) = generate(&gens, cap) {
            return s;
        }
    }
}

/// Up to three random pairs of elements.
pub fn random_pairs<R: Rng>(r: &mut R, n: usize) -> Vec<(usize, usize)> {
    let k = r.gen_range(0..=3);
    (0..k).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).collect()
}

fn t(v: &[u32]) -> Transformation {
    Transformation(v.to_vec())
}

fn at(s: &FiniteSemigroup, label: &str) -> usize {
    s.index_of(label).unwrap_or_else(|| panic!("{label} missing"))
}

pub struct IdealFixture {
    pub name: &'static str,
    pub monoid: FiniteSemigroup,
    pub ideal: Vec<usize>,
    pub side: Side,
}

/// Ten one-sided ideals of small monoids.
pub fn ideal_fixtures() -> Vec<IdealFixture> {
    let mut out = Vec::new();
    let mut push = |name, monoid: FiniteSemigroup, ideal, side| out.push(IdealFixture { name, monoid, ideal, side });
    let s = t2();
    let consts = vec![at(&s, "[0, 0]"), at(&s, "[1, 1]")];
    push("constants of T2", s.clone(), consts, Side::Right);
    push("T2 itself", s, (0..4).collect(), Side::Right);
    let lz = FiniteSemigroup::from_table(vec![vec![0, 1], vec![1, 1]]).expect("monoid with a left zero");
    push("left zero", lz, vec![1], Side::Right);
    push("right-zero band", right_zero(4).with_identity(), (0..4).collect(), Side::Right);
    push("left-zero band on the left", left_zero(3).with_identity(), (0..3).collect(), Side::Left);
    push("cyclic group", cyclic(4), (0..4).collect(), Side::Right);

    let m = generate(&[t(&[0, 1, 2]), t(&[1, 2, 0]), t(&[0, 0, 0])], 30).expect("small");
    let consts: Vec<usize> = ["[0, 0, 0]", "[1, 1, 1]", "[2, 2, 2]"].iter().map(|l| at(&m, l)).collect();
    push("constants of a cyclic extension", m, consts, Side::Right);

    let split = FinitePartition::new(1, vec![vec![1], vec![-1]]).expect("valid");
    let p1 = generate(&[FinitePartition::identity(1), split.clone()], 8).expect("two elements");
    let k = at(&p1, &split.to_json());
    push("P1 split", p1, vec![k], Side::Right);

    // partial bijections on two points, with point 2 as the undefined sink
    let i2 = generate(&[t(&[0, 1, 2]), t(&[1, 0, 2]), t(&[0, 2, 2]), t(&[2, 1, 2])], 30).expect("small");
    let zero = at(&i2, "[2, 2, 2]");
    push("zero of I2", i2.clone(), vec![zero], Side::Right);
    let rank_le1: Vec<usize> = (0..i2.len()).filter(|&i| i2.labels[i].matches('2').count() >= 2).collect();
    push("rank at most one in I2", i2, rank_le1, Side::Left);
    out
}

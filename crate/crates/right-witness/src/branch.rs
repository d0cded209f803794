//! Branch ordering for constructions that need an infinite set but can only
//! look at finitely many of its members.

use natmap_core::SetExpr;

/// Members of `set` in `[lo, hi)`, or `None` if membership cannot be decided.
fn count_in(set: &SetExpr, lo: u64, hi: u64) -> Option<u64> {
    let f = set.compile().ok()?;
    let mut n = 0;
    for x in lo..hi {
        if f(x).ok()? {
            n += 1;
        }
    }
    Some(n)
}

/// Order candidate sets, most plausibly infinite first. At each budget
/// `B = start, 2·start, …, budget` the members in the upper half `[B/2, B)`
/// are counted; a candidate keeps its place while it keeps producing
/// members there. Ties keep the input order.
pub fn rank_candidates(cands: &[SetExpr], start: u64, budget: u64) -> Vec<usize> {
    let start = start.max(2);
    // number of consecutive levels (from the top) with members in the upper half
    let mut score = vec![0u32; cands.len()];
    for (i, c) in cands.iter().enumerate() {
        let mut b = start;
        let mut streak = 0u32;
        while b <= budget {
            match count_in(c, b / 2, b) {
                Some(0) => streak = 0,
                Some(_) => streak += 1,
                None => {
                    streak = 0;
                    break;
                }
            }
            b = b.saturating_mul(2);
        }
        score[i] = streak;
    }
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(score[i]));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_candidate_ranks_last() {
        let cands = vec![SetExpr::finite([1, 2, 3]), SetExpr::Residues { m: 3, rs: vec![1] }];
        assert_eq!(rank_candidates(&cands, 16, 1 << 10), vec![1, 0]);
    }

    #[test]
    fn ties_keep_order() {
        let cands = vec![SetExpr::Residues { m: 2, rs: vec![0] }, SetExpr::Residues { m: 2, rs: vec![1] }];
        assert_eq!(rank_candidates(&cands, 16, 1 << 10), vec![0, 1]);
    }
}

//! Refutations at fixed small depth: right depth 2 for semigroups of
//! injections containing `BL`, right depth 3 for injections, and left depths
//! 2 and 3 for surjections.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use natmap_core::registry::{select_expr, set_nth_expr, set_rank_expr};
use natmap_core::{
    alpha_hat_capability, canonical_alpha_hat, evens, odds, Capability, Cardinality, Enumerator, FiberClaim, FiberForm,
    Fibers, LinearBound, MapExpr, MapFn, NatError, SetExpr, SetFn,
};
use semigroup_classes::{find_collision, member_check, ClassTag, Element};

use crate::cert::{
    distinct_pairs, seal, surj2_avoid, surj_lhs, tuples6, v_expr, v_name, GenKind, Holds, InjTuple, Meet, Pick, Proof,
    RefutationCertificate, SurjTuple, Target, VEntry, ONE, PHI, THETA,
};
use crate::claim::COLARGE_MIN;
use crate::error::{RResult, RefuteError};
use crate::ideal::{kernel_pair, table};
use crate::perm::finite_perm;
use crate::rel::{Entry, Env, RelTerm};
use crate::RefuteOpts;

/// Scan cap for the enumerators inside constructed maps.
const SCAN: u64 = 1 << 24;

fn is_yes(e: &Entry, tag: ClassTag, n: u64) -> RResult<bool> {
    Ok(member_check(&Element::total(e.map.clone()), &e.cap, tag, n)?.is_yes())
}

/// Some preimage of `y`, through the retract or the kernel classes.
fn a_preimage(e: &Entry, y: u64) -> RResult<Option<u64>> {
    if e.cap.cert_injective {
        if let Some(r) = &e.cap.retract {
            return match r.eval(y) {
                Ok(x) => Ok((e.map.eval(x)? == y).then_some(x)),
                Err(NatError::Exhausted { .. }) => Ok(None),
                Err(err) => Err(err.into()),
            };
        }
    }
    let fib = Fibers::new(&e.map, e.cap.fibers.unwrap_or(FiberForm::Scan), e.cap.preimage_bound, SCAN)?;
    match fib.nth(y, 0) {
        Ok(v) => Ok(v),
        Err(NatError::ScanBudget { .. }) => Ok(None),
        Err(err) => Err(err.into()),
    }
}

/// The most frequent value of `next` on `[n/2, n)` outside `outside`, and
/// whether adding its class still leaves the complement large.
fn probe_bad(in_y: &dyn Fn(u64) -> RResult<bool>, next: &MapFn, n: u64) -> RResult<Option<u64>> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for v in n / 2..n {
        if !in_y(v)? {
            *counts.entry(next(v)?).or_default() += 1;
        }
    }
    let Some((&cand, _)) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
        return Ok(None);
    };
    let mut left = 0;
    for v in n / 2..n {
        if !in_y(v)? && next(v)? != cand {
            left += 1;
        }
    }
    Ok((left < COLARGE_MIN).then_some(cand))
}

/// For `Y = ∪ xᵢαᵢ⁻¹` given as `(αᵢ, xᵢ)`, the one point `x` (if any) for
/// which `Y ∪ x·next⁻¹` stops being colarge, probed on the window.
pub fn colarge_step(
    parts: &[(MapExpr, u64)],
    next: &MapExpr,
    next_claim: Option<FiberClaim>,
    window: u64,
) -> RResult<Option<u64>> {
    if next_claim == Some(FiberClaim::AllFinite) {
        return Ok(None);
    }
    let y = SetExpr::union(parts.iter().map(|(m, x)| SetExpr::preimage(m.clone(), SetExpr::finite([*x]))).collect());
    let member = y.compile()?;
    let mut outside = 0;
    for v in window / 2..window {
        if !member(v)? {
            outside += 1;
        }
    }
    if !parts.is_empty() && outside < COLARGE_MIN {
        return Err(RefuteError::Unknown("the union so far is not colarge on the window".into()));
    }
    let in_y = |v: u64| -> RResult<bool> { Ok(member(v)?) };
    probe_bad(&in_y, &next.compile()?, window)
}

/// Membership of a growing union, tabulated on the window.
struct WindowSet {
    hit: Vec<bool>,
}

impl WindowSet {
    fn new(n: u64) -> Self {
        WindowSet { hit: vec![false; n as usize] }
    }

    fn members(set: &SetExpr, n: u64) -> RResult<Vec<bool>> {
        let f = set.compile()?;
        (0..n).map(|v| Ok(f(v)?)).collect()
    }

    fn colarge_with(&self, extra: &[bool]) -> bool {
        let n = self.hit.len();
        (n / 2..n).filter(|&v| !self.hit[v] && !extra[v]).count() as u64 >= COLARGE_MIN
    }

    fn add(&mut self, extra: &[bool]) {
        for (h, e) in self.hit.iter_mut().zip(extra) {
            *h |= *e;
        }
    }

    fn bad_point(&self, next: &MapFn) -> RResult<Option<u64>> {
        let in_y = |v: u64| -> RResult<bool> { Ok(self.hit[v as usize]) };
        probe_bad(&in_y, next, self.hit.len() as u64)
    }
}

fn budget(what: &str) -> RefuteError {
    RefuteError::Budget(what.to_string())
}

fn require_injective(names: &[String], gens: &[Entry], n: u64) -> RResult<()> {
    for (name, e) in names.iter().zip(gens) {
        let v = member_check(&Element::total(e.map.clone()), &e.cap, ClassTag::Inj, n)?;
        if v.is_no() {
            return Err(RefuteError::Precondition(format!("`{name}` is not injective")));
        }
        if !(e.cap.cert_injective && e.cap.retract.is_some()) {
            return Err(RefuteError::MissingCapability(format!("`{name}` has no certified left inverse")));
        }
    }
    Ok(())
}

fn times4() -> Entry {
    let cap = Capability {
        image: Some(SetExpr::Residues { m: 4, rs: vec![0] }),
        complement: Some(Cardinality::Infinite),
        retract: Some(MapExpr::floor_div(4)),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::affine(4, 0), cap)
}

type PairMeet = (usize, u64, u64);

fn classify_pairs(names: &[String], maps: &BTreeMap<String, Entry>, n: u64) -> RResult<(Vec<PairMeet>, Vec<usize>)> {
    let env = Env::new(maps, n);
    let (mut meets, mut disjoint) = (Vec::new(), Vec::new());
    for (i, (a, b)) in distinct_pairs(names.len()).into_iter().enumerate() {
        let fa = env.f(&names[a])?;
        let mut hit = None;
        for x in 0..n {
            let v = fa(x)?;
            if env.in_image(&names[b], v)? == Some(true) {
                let y = *env.preimage(&names[b], v)?.elems.iter().next().expect("image point has a preimage");
                hit = Some((i, x, y));
                break;
            }
        }
        match hit {
            Some(m) => meets.push(m),
            None => disjoint.push(i),
        }
    }
    Ok((meets, disjoint))
}

/// The `BL` extension of a finite bijection `A → B` with `B ⊆ evens` for
/// `θ = 2x`: odds outside `A` go onto the odds, evens outside `A` onto every
/// other even outside `B`.
pub fn bl_phi(pairs: &[(u64, u64)]) -> RResult<Entry> {
    let a = SetExpr::finite(pairs.iter().map(|p| p.0));
    let b = SetExpr::finite(pairs.iter().map(|p| p.1));
    if pairs.iter().any(|p| p.1 % 2 == 1) {
        return Err(RefuteError::Precondition("targets must lie in the image of 2x".into()));
    }
    let odd_a = SetExpr::inter(vec![odds(), a.clone().complement()]);
    let even_a = SetExpr::inter(vec![evens(), a.complement()]);
    let even_b = SetExpr::inter(vec![evens(), b.clone().complement()]);
    let body = select_expr(
        &odds(),
        &set_rank_expr(&odd_a, SCAN).then(set_nth_expr(&odds(), 1, 0, SCAN)),
        &set_rank_expr(&even_a, SCAN).then(set_nth_expr(&even_b, 2, 0, SCAN)),
    );
    let back_body = select_expr(
        &odds(),
        &MapExpr::floor_div(2).then(set_nth_expr(&odd_a, 1, 0, SCAN)),
        &set_rank_expr(&even_b, SCAN).then(MapExpr::floor_div(2)).then(set_nth_expr(&even_a, 1, 0, SCAN)),
    );
    let back: Vec<(u64, u64)> = pairs.iter().map(|&(x, y)| (y, x)).collect();
    let cap = Capability {
        image: Some(SetExpr::union(vec![odds(), b, SetExpr::alternate(even_b, 0)])),
        complement: Some(Cardinality::Infinite),
        retract: Some(MapExpr::patch(back_body, back)),
        preimage: Some(FiberClaim::AllFinite),
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Ok(Entry::new(MapExpr::patch(body, pairs.to_vec()), cap))
}

pub fn refute_right_depth2_bl(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (mut names, mut maps) = table(gens);
    let n = opts.window;
    require_injective(&names, gens, n)?;
    let mut notes = Vec::new();
    let (mut meets, mut disjoint) = classify_pairs(&names, &maps, n)?;
    if meets.is_empty() {
        maps.insert("aug0".into(), Entry::new(canonical_alpha_hat(), alpha_hat_capability()));
        maps.insert("aug1".into(), times4());
        names.push("aug0".into());
        names.push("aug1".into());
        notes.push("U has no intersecting pair; added aug0 = 2x and aug1 = 4x, whose images meet".into());
        (meets, disjoint) = classify_pairs(&names, &maps, n)?;
    }
    maps.insert(THETA.into(), Entry::new(canonical_alpha_hat(), alpha_hat_capability()));
    let pairs = distinct_pairs(names.len());
    let env = Env::new(&maps, n);
    let xs: BTreeSet<u64> = meets.iter().map(|m| m.1).collect();
    let ys: BTreeSet<u64> = meets.iter().map(|m| m.2).collect();
    let mut cursor = opts.block.max(xs.iter().chain(&ys).max().map_or(0, |m| m + 1));

    let mut w_of: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in &xs {
        let group: Vec<u64> = meets.iter().filter(|m| m.1 == x).map(|m| m.2).collect();
        let mut found = None;
        for _ in 0..opts.budget {
            let w = cursor;
            cursor += 1;
            if ys.contains(&w) {
                continue;
            }
            let mut ok = true;
            'check: for &yj in &group {
                for mk in &meets {
                    let (gk, dk) = pairs[mk.0];
                    if env.apply(&names[dk], w)? == env.apply(&names[gk], yj)? {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                found = Some(w);
                break;
            }
        }
        w_of.insert(x, found.ok_or_else(|| budget("no admissible w"))?);
    }
    let mut zpre_of: BTreeMap<u64, u64> = BTreeMap::new();
    for &y in &ys {
        while xs.contains(&cursor) {
            cursor += 1;
        }
        zpre_of.insert(y, cursor);
        cursor += 1;
    }
    drop(env);
    let meets: Vec<Meet> = meets
        .iter()
        .map(|&(pair, x, y)| {
            let zpre = zpre_of[&y];
            Meet { pair, x, y, w: w_of[&x], zpre, z: 2 * zpre }
        })
        .collect();
    let mut lam: BTreeMap<u64, u64> = BTreeMap::new();
    for m in &meets {
        lam.insert(m.w, 2 * m.x);
        lam.insert(m.y, m.z);
    }
    let lam: Vec<(u64, u64)> = lam.into_iter().collect();
    maps.insert(PHI.into(), bl_phi(&lam)?);
    seal(RefutationCertificate {
        target: Target::RightBl2,
        depth: 2,
        window: n,
        generators: names,
        constructed: vec![THETA.into(), PHI.into()],
        maps,
        proof: Proof::RightBl2 { meets, disjoint },
        notes,
        checked: vec![],
    })
}

pub fn refute_right_depth3_inj(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    let n = opts.window;
    require_injective(&names, gens, n)?;
    let mut complements = Vec::new();
    for (name, e) in names.iter().zip(gens) {
        match &e.cap.complement {
            Some(Cardinality::Finite { elems }) => complements.push(Some(elems.clone())),
            _ if is_yes(e, ClassTag::BL, n)? => complements.push(None),
            _ => {
                return Err(RefuteError::MissingCapability(format!(
                    "`{name}` is neither certified BL nor given a finite image complement"
                )))
            }
        }
    }
    let env = Env::new(&maps, n);
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let mut tuples = Vec::new();
    let mut cursor = 0u64;
    for p in tuples6(names.len(), |i| complements[i].is_some()) {
        let [a1, b1, a2, b2, a3, b3] = p.map(|i| names[i].as_str());
        let mut found = None;
        let mut x = cursor;
        'search: for _ in 0..opts.budget {
            x += 1;
            if used.contains(&x) {
                continue;
            }
            let v = env.apply(a1, x)?;
            if env.in_image(b1, v)? != Some(true) {
                continue;
            }
            let t = *env.preimage(b1, v)?.elems.iter().next().expect("image point has a preimage");
            let ta2 = env.apply(a2, t)?;
            let mut y = x;
            for _ in 0..opts.budget {
                y += 1;
                if used.contains(&y) {
                    continue;
                }
                let u = env.apply(b3, y)?;
                if env.in_image(a3, u)? != Some(true) {
                    continue;
                }
                let s = *env.preimage(a3, u)?.elems.iter().next().expect("image point has a preimage");
                if env.apply(b2, s)? != ta2 {
                    found = Some(InjTuple { gens: p, x, t, y, s });
                    break 'search;
                }
            }
        }
        let tup = found.ok_or_else(|| budget("no admissible x_p, y_p"))?;
        used.insert(tup.x);
        used.insert(tup.y);
        cursor = tup.x;
        tuples.push(tup);
    }
    drop(env);
    let phi = if tuples.is_empty() {
        finite_perm(&[(0, 1), (1, 0)])?
    } else {
        finite_perm(&tuples.iter().map(|t| (t.y, t.x)).collect::<Vec<_>>())?
    };
    maps.insert(THETA.into(), finite_perm(&[])?);
    maps.insert(PHI.into(), phi);
    seal(RefutationCertificate {
        target: Target::RightInj3,
        depth: 3,
        window: n,
        generators: names,
        constructed: vec![THETA.into(), PHI.into()],
        maps,
        proof: Proof::RightInj3 { complements, tuples },
        notes: vec![],
        checked: vec![],
    })
}

/// Place each surjective generator inside `Sym` or outside it by a collision.
fn classify_surj(names: &[String], gens: &[Entry], n: u64) -> RResult<Vec<GenKind>> {
    let mut kinds = Vec::new();
    for (name, e) in names.iter().zip(gens) {
        if !is_yes(e, ClassTag::Surj, n)? {
            return Err(RefuteError::Precondition(format!("`{name}` is not certified surjective")));
        }
        if is_yes(e, ClassTag::Sym, n)? {
            if e.cap.retract.is_none() {
                return Err(RefuteError::MissingCapability(format!("`{name}` is a bijection without an inverse")));
            }
            kinds.push(GenKind::Sym);
        } else if let Some((a, b)) = kernel_pair(e, n)? {
            kinds.push(GenKind::Collision { a, b });
        } else {
            return Err(RefuteError::MissingCapability(format!(
                "`{name}` is neither certified bijective nor shown non-injective"
            )));
        }
    }
    Ok(kinds)
}

fn fiber_claim(e: &Entry) -> Option<FiberClaim> {
    if e.cap.cert_injective || e.cap.preimage_bound.is_some() {
        Some(FiberClaim::AllFinite)
    } else {
        e.cap.preimage
    }
}

/// `DBL` map sending `avoid` to `v0` and `ℕ ∖ avoid` onto ℕ with infinite classes.
fn dbl_avoiding(avoid: &SetExpr, v0: u64, n: u64) -> Entry {
    let rest = avoid.clone().complement();
    let map = select_expr(avoid, &MapExpr::constant(v0), &set_rank_expr(&rest, SCAN).then(MapExpr::UnpackFirst));
    let cap = Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        preimage: Some(FiberClaim::AllInfinite),
        collision: find_collision(&map, n.max(64)),
        cert_surjective: true,
        cert_all_kernel_classes_infinite: true,
        ..Default::default()
    };
    Entry::new(map, cap)
}

pub fn refute_left_depth2_surj(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    let n = opts.window;
    let kinds = classify_surj(&names, gens, n)?;
    let syms: Vec<usize> = (0..names.len()).filter(|&i| kinds[i] == GenKind::Sym).collect();
    let mut v = Vec::new();
    let mut parts: Vec<(MapExpr, u64)> = Vec::new();
    for &mu in &syms {
        for lambda in 0..names.len() {
            let expr = v_expr(&maps, &names[mu], &names[lambda])?;
            let claim = fiber_claim(&gens[lambda]);
            let bad = colarge_step(&parts, &expr, claim, n)?;
            let f = expr.compile()?;
            let y_set = SetExpr::union(
                parts.iter().map(|(m, x)| SetExpr::preimage(m.clone(), SetExpr::finite([*x]))).collect(),
            );
            let mut ws = WindowSet::new(n);
            ws.add(&WindowSet::members(&y_set, n)?);
            let mut chosen = None;
            for y in 0..opts.budget {
                if Some(y) == bad {
                    continue;
                }
                let mut extra = vec![false; n as usize];
                for (i, e) in extra.iter_mut().enumerate() {
                    *e = f(i as u64)? == y;
                }
                if ws.colarge_with(&extra) {
                    chosen = Some(y);
                    break;
                }
            }
            let y = chosen.ok_or_else(|| budget("no colarge choice of y_φ"))?;
            parts.push((expr.clone(), y));
            maps.insert(v_name(mu, lambda), Entry::new(expr, Capability { preimage: claim, ..Default::default() }));
            v.push(VEntry { mu, lambda, y });
        }
    }
    let mut picks = Vec::new();
    for alpha in 0..names.len() {
        for beta in 0..names.len() {
            for (k, e) in v.iter().enumerate() {
                let z = a_preimage(&gens[beta], e.y)?.ok_or_else(|| budget("no preimage under β"))?;
                let x = gens[alpha].map.eval(z)?;
                picks.push(Pick { alpha, beta, v: k, z, x });
            }
        }
    }
    let avoid = surj2_avoid(&maps, &names, &v)?;
    let xs: BTreeSet<u64> = picks.iter().map(|p| p.x).collect();
    let v0 = (0..).find(|c| !xs.contains(c)).expect("finite set");
    maps.insert(THETA.into(), dbl_avoiding(&avoid, v0, n));
    maps.insert(ONE.into(), finite_perm(&[])?);
    seal(RefutationCertificate {
        target: Target::LeftSurj2,
        depth: 2,
        window: n,
        generators: names,
        constructed: vec![THETA.into(), ONE.into()],
        maps,
        proof: Proof::LeftSurj2 { kinds, v, picks },
        notes: vec![],
        checked: vec![],
    })
}

/// Tuples for which `zβ₂⁻¹α₂` collapses into a finite set off one point
/// `w`, judged on the window: the point and the finite set.
fn collapse_point(env: &Env, lhs: &RelTerm, n: u64) -> RResult<Option<(u64, BTreeSet<u64>)>> {
    let images: Vec<BTreeSet<u64>> = (0..n).map(|z| Ok(env.image(lhs, z)?.elems)).collect::<RResult<_>>()?;
    let w = (0..n).max_by_key(|&z| (images[z as usize].len(), std::cmp::Reverse(z))).unwrap_or(0);
    let union = |upto: u64| -> BTreeSet<u64> {
        (0..upto).filter(|&z| z != w).flat_map(|z| images[z as usize].iter().copied()).collect()
    };
    let (half, full) = (union(n / 2), union(n));
    Ok((full.len() as u64 <= COLARGE_MIN && half == full).then_some((w, full)))
}

fn retract_of(e: &Entry) -> MapExpr {
    e.cap.retract.clone().expect("Sym generators carry an inverse")
}

pub fn refute_left_depth3_surj(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    let n = opts.window;
    let kinds = classify_surj(&names, gens, n)?;
    let p = tuples6(names.len(), |i| kinds[i] == GenKind::Sym);
    let env = Env::new(&maps, n);

    // classify
    let mut cache: HashMap<(usize, usize), Option<(u64, BTreeSet<u64>)>> = HashMap::new();
    let mut cat1 = Vec::new();
    let mut cat2 = Vec::new();
    for t in &p {
        let key = (t[3], t[2]);
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            e.insert(collapse_point(&env, &surj_lhs(&names, t), n)?);
        }
        match &cache[&key] {
            Some(_) => cat1.push(*t),
            None => cat2.push(*t),
        }
    }
    let w_set: BTreeSet<u64> = cat1.iter().map(|t| cache[&(t[3], t[2])].as_ref().unwrap().0).collect();
    let l_set: BTreeSet<u64> =
        cat1.iter().flat_map(|t| cache[&(t[3], t[2])].as_ref().unwrap().1.iter().copied()).collect();

    // claim (1)
    struct One {
        gens: [usize; 6],
        u: u64,
        q: u64,
        x: u64,
        y: u64,
        r: u64,
        v: u64,
    }
    let mut ones: Vec<One> = Vec::new();
    let (mut qc, mut rc) = (0u64, 0u64);
    let (mut xs_used, mut ys_used) = (BTreeSet::new(), BTreeSet::new());
    for t in &cat1 {
        let [a1, b1, _, _, a3, b3] = t.map(|i| names[i].as_str());
        let mut got = None;
        for _ in 0..opts.budget {
            let q = qc;
            qc += 1;
            let (u, x) = (env.apply(a3, q)?, env.apply(b3, q)?);
            if !w_set.contains(&u) && !xs_used.contains(&x) {
                got = Some((q, u, x));
                break;
            }
        }
        let (q, u, x) = got.ok_or_else(|| budget("no admissible u_i"))?;
        let mut got = None;
        for _ in 0..opts.budget {
            let r = rc;
            rc += 1;
            let (v, y) = (env.apply(b1, r)?, env.apply(a1, r)?);
            if !l_set.contains(&v) && !ys_used.contains(&y) {
                got = Some((r, v, y));
                break;
            }
        }
        let (r, v, y) = got.ok_or_else(|| budget("no admissible v_i"))?;
        xs_used.insert(x);
        ys_used.insert(y);
        ones.push(One { gens: *t, u, q, x, y, r, v });
    }

    // claim (2)
    let k_set: BTreeSet<u64> = cat2
        .iter()
        .flat_map(|t| {
            let (a1, b1) = (&gens[t[0]], &gens[t[1]]);
            ones.iter().map(move |o| (a1, b1, o.y))
        })
        .map(|(a1, b1, y)| Ok(b1.map.eval(retract_of(a1).eval(y)?)?))
        .collect::<RResult<_>>()?;
    let mut a_ws = WindowSet::new(n);
    let mut b_ws = WindowSet::new(n);
    let mut a_parts: Vec<(MapExpr, u64)> = Vec::new();
    let mut b_parts: Vec<(MapExpr, u64)> = Vec::new();
    struct Two {
        gens: [usize; 6],
        a: u64,
        b: u64,
        path: Vec<u64>,
    }
    let mut twos: Vec<Two> = Vec::new();
    for t in &cat2 {
        let a_map = retract_of(&gens[t[5]]).then(gens[t[4]].map.clone());
        let b_map = retract_of(&gens[t[0]]).then(gens[t[1]].map.clone());
        let (af, bf) = (a_map.compile()?, b_map.compile()?);
        let c = a_ws.bad_point(&af)?;
        let d = b_ws.bad_point(&bf)?;
        let lhs = surj_lhs(&names, t);
        let mut got = None;
        'a: for a in 0..opts.budget {
            if Some(a) == c {
                continue;
            }
            let a_extra: Vec<bool> = (0..n).map(|v| Ok(af(v)? == a)).collect::<RResult<_>>()?;
            if !a_ws.colarge_with(&a_extra) {
                continue;
            }
            for &b in &env.image(&lhs, a)?.elems {
                if k_set.contains(&b) || Some(b) == d {
                    continue;
                }
                let b_extra: Vec<bool> = (0..n).map(|v| Ok(bf(v)? == b)).collect::<RResult<_>>()?;
                if b_ws.colarge_with(&b_extra) {
                    let path = env.find_path(&lhs, a, b)?.expect("image point has a path");
                    a_ws.add(&a_extra);
                    b_ws.add(&b_extra);
                    got = Some(Two { gens: *t, a, b, path });
                    break 'a;
                }
            }
        }
        let two = got.ok_or_else(|| budget("no admissible a_j, b_j"))?;
        a_parts.push((a_map, two.a));
        b_parts.push((b_map, two.b));
        twos.push(two);
    }

    // exact A when every class involved is finite
    let mut a_exact: Option<BTreeSet<u64>> = Some(BTreeSet::new());
    for (t, two) in cat2.iter().zip(&twos) {
        let pre = env.preimage(&names[t[4]], two.a)?;
        match (&mut a_exact, pre.exact) {
            (Some(set), true) => {
                for q in pre.elems {
                    set.insert(env.apply(&names[t[5]], q)?);
                }
            }
            _ => a_exact = None,
        }
    }
    drop(env);

    let xy: Vec<(u64, u64)> = ones.iter().map(|o| (o.x, o.y)).collect();
    let x_fin = SetExpr::finite(xy.iter().map(|p| p.0));
    let y_fin = SetExpr::finite(xy.iter().map(|p| p.1));
    let a_set =
        SetExpr::union(a_parts.iter().map(|(m, a)| SetExpr::preimage(m.clone(), SetExpr::finite([*a]))).collect());
    let b_set =
        SetExpr::union(b_parts.iter().map(|(m, b)| SetExpr::preimage(m.clone(), SetExpr::finite([*b]))).collect());
    let c_set = SetExpr::union(vec![b_set.clone(), y_fin.clone()]).complement();
    let theta = match a_exact {
        Some(a_elems) => {
            let a_rest: Vec<u64> = a_elems.into_iter().filter(|a| !xy.iter().any(|p| p.0 == *a)).collect();
            let c_enum = Enumerator::new(&c_set, SCAN)?;
            let mut pairs = xy.clone();
            for (i, &a) in a_rest.iter().enumerate() {
                let c = c_enum.nth(i as u64)?.ok_or_else(|| budget("C ran out"))?;
                pairs.push((a, c));
            }
            if pairs.iter().all(|p| p.0 == p.1) {
                let b_mem: SetFn = b_set.compile()?;
                let taken: BTreeSet<u64> = pairs.iter().flat_map(|p| [p.0, p.1]).collect();
                let mut f = opts.block;
                while taken.contains(&f) || taken.contains(&(f + 1)) || b_mem(f)? || b_mem(f + 1)? {
                    f += 2;
                }
                pairs.push((f, f + 1));
                pairs.push((f + 1, f));
            }
            finite_perm(&pairs)?
        }
        None => surj3_theta(&xy, &x_fin, &y_fin, &a_set, &b_set, &c_set),
    };
    let tf = theta.map.compile()?;
    let moved = (0..n).chain([opts.block]).find(|&d| tf(d).map(|v| v != d).unwrap_or(false));
    let moved = moved.ok_or_else(|| budget("θ fixes the whole window"))?;
    maps.insert(THETA.into(), theta);
    maps.insert(ONE.into(), finite_perm(&[])?);

    let mut by_gens: BTreeMap<[usize; 6], SurjTuple> = BTreeMap::new();
    for o in ones {
        let path = vec![o.u, o.q, o.x, o.y, o.r, o.v];
        by_gens.insert(o.gens, SurjTuple { gens: o.gens, holds: Holds::Rhs, u: o.u, v: o.v, path });
    }
    for two in twos {
        by_gens.insert(two.gens, SurjTuple { gens: two.gens, holds: Holds::Lhs, u: two.a, v: two.b, path: two.path });
    }
    let tuples: Vec<SurjTuple> = p.iter().map(|t| by_gens.remove(t).expect("every tuple placed")).collect();
    let notes = vec![format!(
        "{} tuples separated through the right-hand side, {} through the left-hand side",
        cat1.len(),
        cat2.len()
    )];
    seal(RefutationCertificate {
        target: Target::LeftSurj3,
        depth: 3,
        window: n,
        generators: names,
        constructed: vec![THETA.into(), ONE.into()],
        maps,
        proof: Proof::LeftSurj3 { kinds, tuples, moved },
        notes,
        checked: vec![],
    })
}

/// Bijection with `xᵢ ↦ yᵢ`, `A ∖ {xᵢ}` onto every other point of
/// `C = ℕ ∖ (B ∪ {yᵢ})`, and the rest onto what is left.
fn surj3_theta(
    xy: &[(u64, u64)],
    x_fin: &SetExpr,
    y_fin: &SetExpr,
    a_set: &SetExpr,
    b_set: &SetExpr,
    c_set: &SetExpr,
) -> Entry {
    let a_rest = SetExpr::inter(vec![a_set.clone(), x_fin.clone().complement()]);
    let r_set = SetExpr::union(vec![a_set.clone(), x_fin.clone()]).complement();
    let t_set = SetExpr::union(vec![
        SetExpr::alternate(c_set.clone(), 1),
        SetExpr::inter(vec![b_set.clone(), y_fin.clone().complement()]),
    ]);
    let body = select_expr(
        &a_rest,
        &set_rank_expr(&a_rest, SCAN).then(set_nth_expr(c_set, 2, 0, SCAN)),
        &set_rank_expr(&r_set, SCAN).then(set_nth_expr(&t_set, 1, 0, SCAN)),
    );
    let back_body = select_expr(
        &SetExpr::alternate(c_set.clone(), 0),
        &set_rank_expr(c_set, SCAN).then(MapExpr::floor_div(2)).then(set_nth_expr(&a_rest, 1, 0, SCAN)),
        &set_rank_expr(&t_set, SCAN).then(set_nth_expr(&r_set, 1, 0, SCAN)),
    );
    let back: Vec<(u64, u64)> = xy.iter().map(|&(x, y)| (y, x)).collect();
    let cap = Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        retract: Some(MapExpr::patch(back_body, back)),
        preimage: Some(FiberClaim::AllFinite),
        cert_injective: true,
        cert_surjective: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::patch(body, xy.to_vec()), cap)
}

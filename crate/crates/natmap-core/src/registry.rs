//! Registry of `Opaque` generators. Each generator turns its parameter tree
//! into a compiled map; compiled maps are cached per `(id, params)` so memo
//! tables inside a generator are shared by every term that names it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::error::{NatError, Result};
use crate::expr::{MapExpr, MapFn};
use crate::set::{Enumerator, SetExpr};

pub type Generator = fn(&Value) -> Result<MapFn>;

fn generators() -> &'static RwLock<HashMap<String, Generator>> {
    static GENS: OnceLock<RwLock<HashMap<String, Generator>>> = OnceLock::new();
    GENS.get_or_init(|| {
        let mut m: HashMap<String, Generator> = HashMap::new();
        m.insert(SET_NTH.to_string(), set_nth as Generator);
        m.insert(SELECT.to_string(), select as Generator);
        m.insert(MONUS.to_string(), monus as Generator);
        m.insert(SET_RANK.to_string(), set_rank as Generator);
        RwLock::new(m)
    })
}

fn cache() -> &'static Mutex<HashMap<(String, String), MapFn>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, String), MapFn>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Register a generator. Re-registering the same id replaces it.
pub fn register(id: &str, g: Generator) {
    generators().write().unwrap().insert(id.to_string(), g);
}

pub fn is_registered(id: &str) -> bool {
    generators().read().unwrap().contains_key(id)
}

pub fn resolve(id: &str, params: &Value) -> Result<MapFn> {
    let key = (id.to_string(), params.to_string());
    if let Some(f) = cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let g = *generators().read().unwrap().get(id).ok_or_else(|| NatError::UnregisteredGenerator(id.to_string()))?;
    let f = g(params)?;
    // two racing fills build equivalent closures; keep whichever landed first
    Ok(cache().lock().unwrap().entry(key).or_insert(f).clone())
}

/// Decode one field of a generator's parameter tree.
pub fn param<T: DeserializeOwned>(generator: &str, params: &Value, field: &str) -> Result<T> {
    let v = params.get(field).ok_or_else(|| NatError::BadParams {
        generator: generator.to_string(),
        reason: format!("missing `{field}`"),
    })?;
    serde_json::from_value(v.clone())
        .map_err(|e| NatError::BadParams { generator: generator.to_string(), reason: format!("`{field}`: {e}") })
}

pub const SET_NTH: &str = "set-nth";
pub const SELECT: &str = "select";
pub const MONUS: &str = "monus";
pub const SET_RANK: &str = "set-rank";

/// `x ↦ nth(set, a·x + b)` where `nth` enumerates `set` increasingly.
pub fn set_nth_expr(set: &SetExpr, a: u64, b: u64, cap: u64) -> MapExpr {
    MapExpr::opaque(SET_NTH, json!({ "set": set, "a": a, "b": b, "cap": cap }))
}

fn set_nth(params: &Value) -> Result<MapFn> {
    let set: SetExpr = param(SET_NTH, params, "set")?;
    let a: u64 = param(SET_NTH, params, "a")?;
    let b: u64 = param(SET_NTH, params, "b")?;
    let cap: u64 = param(SET_NTH, params, "cap")?;
    let e = Arc::new(Enumerator::new(&set, cap)?);
    Ok(Arc::new(move |x| {
        let i = a.checked_mul(x).and_then(|v| v.checked_add(b)).ok_or(NatError::Overflow("set-nth index"))?;
        e.nth(i)?.ok_or_else(|| NatError::Exhausted { what: SET_NTH.into(), index: i })
    }))
}

/// `x ↦ then(x)` on `set`, `otherwise(x)` elsewhere.
pub fn select_expr(set: &SetExpr, then: &MapExpr, otherwise: &MapExpr) -> MapExpr {
    MapExpr::opaque(SELECT, json!({ "set": set, "then": then, "else": otherwise }))
}

fn select(params: &Value) -> Result<MapFn> {
    let set: SetExpr = param(SELECT, params, "set")?;
    let then: MapExpr = param(SELECT, params, "then")?;
    let otherwise: MapExpr = param(SELECT, params, "else")?;
    let (s, t, o) = (set.compile()?, then.compile()?, otherwise.compile()?);
    Ok(Arc::new(move |x| if s(x)? { t(x) } else { o(x) }))
}

/// `x ↦ |set ∩ [0, x)|`. Composed with `⌊·/a⌋` it inverts `set-nth` with `b = 0`.
pub fn set_rank_expr(set: &SetExpr, cap: u64) -> MapExpr {
    MapExpr::opaque(SET_RANK, json!({ "set": set, "cap": cap }))
}

fn set_rank(params: &Value) -> Result<MapFn> {
    let set: SetExpr = param(SET_RANK, params, "set")?;
    let cap: u64 = param(SET_RANK, params, "cap")?;
    let e = Arc::new(Enumerator::new(&set, cap)?);
    Ok(Arc::new(move |x| e.rank(x)))
}

/// `x ↦ max(x − k, 0)`.
pub fn monus_expr(k: u64) -> MapExpr {
    MapExpr::opaque(MONUS, json!({ "k": k }))
}

fn monus(params: &Value) -> Result<MapFn> {
    let k: u64 = param(MONUS, params, "k")?;
    Ok(Arc::new(move |x| Ok(x.saturating_sub(k))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_nth_every_other_odd() {
        let odds = SetExpr::Residues { m: 2, rs: vec![1] };
        let f = set_nth_expr(&odds, 2, 0, 1 << 16);
        assert_eq!(f.eval(0).unwrap(), 1);
        assert_eq!(f.eval(3).unwrap(), 13);
    }

    #[test]
    fn set_nth_reports_exhaustion() {
        let f = set_nth_expr(&SetExpr::finite([2]), 2, 0, 1 << 10);
        assert_eq!(f.eval(0).unwrap(), 2);
        assert!(matches!(f.eval(1), Err(NatError::Exhausted { .. })));
    }

    #[test]
    fn select_branches() {
        let f = select_expr(&SetExpr::AtLeast { n: 10 }, &MapExpr::constant(0), &MapExpr::Id);
        assert_eq!(f.eval(3).unwrap(), 3);
        assert_eq!(f.eval(11).unwrap(), 0);
    }

    #[test]
    fn rank_inverts_nth() {
        let odds = SetExpr::Residues { m: 2, rs: vec![1] };
        let nth = set_nth_expr(&odds, 2, 0, 1 << 16);
        let back = set_rank_expr(&odds, 1 << 16).then(MapExpr::floor_div(2));
        let round = nth.then(back).compile().unwrap();
        for x in 0..100 {
            assert_eq!(round(x).unwrap(), x);
        }
    }

    #[test]
    fn monus_floors_at_zero() {
        let f = monus_expr(3);
        assert_eq!((f.eval(1).unwrap(), f.eval(10).unwrap()), (0, 7));
    }

    #[test]
    fn bad_params() {
        assert!(matches!(resolve(SELECT, &json!({"set": {"set": "All"}})), Err(NatError::BadParams { .. })));
    }
}

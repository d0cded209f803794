//! Families of infinite classes partitioning ℕ, and the interleaving that
//! builds a third family meeting every class of two given ones infinitely.
//!
//! Stage `λ` decodes to `(a, b, c, n)` by `n = λ mod 2`, `(a, r) = unpack(λ / 2)`,
//! `(b, c) = unpack(r)`. It selects `x_λ`, the least element of class `a` of the
//! first family (`n = 0`) or of the second (`n = 1`) not selected earlier, and
//! puts it in class `c` of the new family. Class `a` of the first family is
//! visited at stages `2·pack(a, j)`, `j = 0, 1, …`, and each visit takes its least
//! unselected element, so the element of rank `r` in that class is selected by
//! stage `2·pack(a, r)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use natmap_core::registry::{self, param};
use natmap_core::{try_pack, unpack, FiberForm, Fibers, MapExpr, MapFn, NatError, Result, DEFAULT_SCAN_CAP};
use serde::{Deserialize, Serialize};
use serde_json::json;

pub const DBL_CLASS: &str = "dbl-class";
pub const CLASS_ALIGN: &str = "class-align";

/// The kernel classes of `map`, enumerated as `form` says.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFamily {
    pub map: MapExpr,
    pub form: FiberForm,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_SCAN_CAP
}

impl ClassFamily {
    pub fn new(map: MapExpr, form: FiberForm) -> Self {
        ClassFamily { map, form, cap: DEFAULT_SCAN_CAP }
    }

    /// Classes of `map` found by scanning, or in closed form for the unpack maps.
    pub fn kernel(map: MapExpr) -> Self {
        let form = match map {
            MapExpr::UnpackFirst => FiberForm::PackFirst,
            MapExpr::UnpackSecond => FiberForm::PackSecond,
            _ => FiberForm::Scan,
        };
        ClassFamily::new(map, form)
    }

    fn oracle(&self) -> Result<Arc<Fibers>> {
        static CACHE: OnceLock<Mutex<HashMap<String, Arc<Fibers>>>> = OnceLock::new();
        let key = serde_json::to_string(self).expect("family serializes");
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let f = Fibers::shared(&self.map, self.form, None, self.cap)?;
        Ok(cache.lock().unwrap().entry(key).or_insert(f).clone())
    }

    pub fn class_of(&self, x: u64) -> Result<u64> {
        self.oracle()?.class_of(x)
    }

    /// The `i`-th element of class `c`; every class is claimed infinite.
    pub fn nth(&self, c: u64, i: u64) -> Result<u64> {
        self.oracle()?
            .nth(c, i)?
            .ok_or_else(|| NatError::MalformedCapability(format!("class {c} claimed infinite has no element {i}")))
    }

    /// `(class, position within the class)`.
    pub fn rank_of(&self, x: u64) -> Result<(u64, u64)> {
        self.oracle()?.rank(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StageTuple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
}

pub fn decode_stage(l: u64) -> StageTuple {
    let (a, r) = unpack(l / 2);
    let (b, c) = unpack(r);
    StageTuple { a, b, c, n: l % 2 }
}

/// The stage at which an element of rank `r` in class `a` of the first family
/// is selected at the latest.
pub fn stage_bound(a: u64, r: u64) -> Result<u64> {
    try_pack(a, r)?.checked_mul(2).ok_or(NatError::Overflow("stage bound"))
}

#[derive(Default)]
struct Stages {
    xs: Vec<u64>,
    owner: HashMap<u64, u64>,
    /// next index to try in class `a` of family `n`
    next: [HashMap<u64, u64>; 2],
}

pub struct Interleave {
    fams: [ClassFamily; 2],
    state: Mutex<Stages>,
}

impl Interleave {
    fn run_stage(&self, st: &mut Stages) -> Result<()> {
        let l = st.xs.len() as u64;
        let t = decode_stage(l);
        let fam = &self.fams[t.n as usize];
        let mut idx = *st.next[t.n as usize].get(&t.a).unwrap_or(&0);
        let x = loop {
            let v = fam.nth(t.a, idx)?;
            idx += 1;
            if !st.owner.contains_key(&v) {
                break v;
            }
        };
        st.next[t.n as usize].insert(t.a, idx);
        st.owner.insert(x, l);
        st.xs.push(x);
        Ok(())
    }

    /// `(t_λ, x_λ)`.
    pub fn stage(&self, l: u64) -> Result<(StageTuple, u64)> {
        let mut st = self.state.lock().unwrap();
        while st.xs.len() as u64 <= l {
            self.run_stage(&mut st)?;
        }
        Ok((decode_stage(l), st.xs[l as usize]))
    }

    /// The stage that selects `x`.
    pub fn stage_of(&self, x: u64) -> Result<u64> {
        let mut st = self.state.lock().unwrap();
        if let Some(&l) = st.owner.get(&x) {
            return Ok(l);
        }
        let (a, r) = self.fams[0].rank_of(x)?;
        let bound = stage_bound(a, r)?;
        while (st.xs.len() as u64) <= bound {
            self.run_stage(&mut st)?;
            if let Some(&l) = st.owner.get(&x) {
                return Ok(l);
            }
        }
        Err(NatError::MalformedCapability(format!(
            "{x} has rank {r} in class {a} but was not selected by stage {bound}"
        )))
    }

    pub fn class_of(&self, x: u64) -> Result<u64> {
        Ok(decode_stage(self.stage_of(x)?).c)
    }

    /// Number of stages run so far.
    pub fn stages_run(&self) -> u64 {
        self.state.lock().unwrap().xs.len() as u64
    }
}

/// The shared interleaving of `a` and `b`.
pub fn interleave(a: &ClassFamily, b: &ClassFamily) -> Arc<Interleave> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Interleave>>>> = OnceLock::new();
    let key = serde_json::to_string(&(a, b)).expect("families serialize");
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry(key)
        .or_insert_with(|| Arc::new(Interleave { fams: [a.clone(), b.clone()], state: Mutex::new(Stages::default()) }))
        .clone()
}

fn dbl_class(params: &serde_json::Value) -> Result<MapFn> {
    let a: ClassFamily = param(DBL_CLASS, params, "a")?;
    let b: ClassFamily = param(DBL_CLASS, params, "b")?;
    let il = interleave(&a, &b);
    Ok(Arc::new(move |x| il.class_of(x)))
}

/// `z ↦` the element of class `f(z)` of `to` with the rank `z` has in `from`.
fn class_align(params: &serde_json::Value) -> Result<MapFn> {
    let from: ClassFamily = param(CLASS_ALIGN, params, "from")?;
    let to: ClassFamily = param(CLASS_ALIGN, params, "to")?;
    Ok(Arc::new(move |z| {
        let (c, r) = from.rank_of(z)?;
        to.nth(c, r)
    }))
}

pub fn register_generators() {
    registry::register(DBL_CLASS, dbl_class);
    registry::register(CLASS_ALIGN, class_align);
    registry::register(crate::contain::CONTAIN_PI, crate::contain::contain_pi);
}

/// The family `C` built from `a` and `b`; its map sends `x` to its class.
pub fn dbl_interleave(a: &ClassFamily, b: &ClassFamily) -> ClassFamily {
    register_generators();
    let map = MapExpr::opaque(DBL_CLASS, json!({ "a": a, "b": b }));
    ClassFamily { map, form: FiberForm::Scan, cap: a.cap.max(b.cap) }
}

/// Bijection sending class `c` of `from` onto class `c` of `to`, rank by rank.
pub fn class_align_expr(from: &ClassFamily, to: &ClassFamily) -> MapExpr {
    register_generators();
    MapExpr::opaque(CLASS_ALIGN, json!({ "from": from, "to": to }))
}

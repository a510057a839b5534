//! Browser bindings: label enumeration, the scalar invariants of a level and
//! fusion rules for levels whose Weyl group is small enough for a page.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;
use wsubreg::admissible::{labels_to_json, orbit_representatives, vacuum_index, LevelData, Mode};
use wsubreg::fusion::verlinde;
use wsubreg::numerology::{require_self_dual, sporadic_report};
use wsubreg::rootsystem::RootSystem;
use wsubreg::smatrix::s_subreg;
use wsubreg::Result;

/// Largest Weyl group walked in the browser.
pub const WEB_CAP: u64 = 60_000;

fn level(system: &str, p: i64, q: i64) -> Result<LevelData> {
    LevelData::new(RootSystem::from_name(system, None)?, p, q, Mode::Subreg)
}

fn wrap(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn enumerate_value(system: &str, p: i64, q: i64) -> Result<Value> {
    let ld = level(system, p, q)?;
    let labels = orbit_representatives(&ld)?;
    Ok(json!({ "count": labels.len(), "vacuum": vacuum_index(&ld, &labels)?, "labels": labels_to_json(&labels) }))
}

pub fn report_value(system: &str, p: i64, q: i64) -> Result<Value> {
    let ld = level(system, p, q)?;
    let labels = orbit_representatives(&ld)?;
    let rec = sporadic_report(&ld, &labels, None)?;
    Ok(json!({
        "c": rec.c,
        "c_eff": rec.c_eff,
        "growth": rec.growth,
        "irreps": rec.irreps,
        "identification": rec.label(),
        "asymptotic_dimension": rec.asymptotic_dimension,
    }))
}

pub fn fusion_value(system: &str, p: i64, q: i64) -> Result<Value> {
    let ld = level(system, p, q)?;
    require_self_dual(&ld)?;
    let labels = orbit_representatives(&ld)?;
    let s = s_subreg(&ld, &labels, &ld.rs.rho(), Some(WEB_CAP))?;
    let ring = verlinde(&s, vacuum_index(&ld, &labels)?)?;
    let h: Vec<String> = labels.iter().map(|l| wsubreg::fmt_q(&l.h)).collect();
    Ok(json!({ "h": h, "ring": ring.to_json(), "text": ring.pretty() }))
}

/// JSON list of labels for `W_{−h∨+p/q}(system, f_subreg)`.
#[wasm_bindgen]
pub fn enumerate(system: &str, p: i64, q: i64) -> String {
    wrap(enumerate_value(system, p, q))
}

/// JSON record with `c`, `c^eff`, the module count and the sporadic identification.
#[wasm_bindgen]
pub fn report(system: &str, p: i64, q: i64) -> String {
    wrap(report_value(system, p, q))
}

/// JSON fusion ring, refused when the Weyl group exceeds [`WEB_CAP`].
#[wasm_bindgen]
pub fn fusion(system: &str, p: i64, q: i64) -> String {
    wrap(fusion_value(system, p, q))
}

//! Bundled reference tables: subregular denominators by type and transcribed
//! golden data for the table of rational subregular W-algebras, `E₇` at
//! level `−18+19/16` and `E₆` at level `−12+12/11`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{parse_q, Error, Result, Q};

const DENOMINATORS: &str = include_str!("../data/denominators.json");
const REFERENCE: &str = include_str!("../data/reference.json");

#[derive(Deserialize)]
struct ClassicalEntry {
    min_rank: usize,
    q: Vec<String>,
}

#[derive(Deserialize)]
struct ExceptionalEntry {
    q: Vec<i64>,
}

#[derive(Deserialize)]
struct Denominators {
    families: BTreeMap<String, ClassicalEntry>,
    exceptional: BTreeMap<String, ExceptionalEntry>,
}

/// Evaluates an affine expression in `n` such as `2n-4`, `n`, or `4n-6`.
fn eval_affine(expr: &str, n: i64) -> Result<i64> {
    let bad = || Error::Invariant(format!("malformed denominator expression {expr:?}"));
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (lin, rest) = match e.find('n') {
        Some(pos) => {
            let coef = match &e[..pos] {
                "" => 1,
                s => s.parse::<i64>().map_err(|_| bad())?,
            };
            (coef, &e[pos + 1..])
        }
        None => (0, e.as_str()),
    };
    let constant = if rest.is_empty() {
        0
    } else {
        let s = rest.strip_prefix('+').unwrap_or(rest);
        s.parse::<i64>().map_err(|_| bad())?
    };
    Ok(lin * n + constant)
}

/// Subregular denominators `q` for a type given by letter and rank, including
/// the non-simply-laced rows (data only).
pub fn subregular_denominators(letter: char, rank: usize) -> Result<Vec<i64>> {
    let d: Denominators = serde_json::from_str(DENOMINATORS).expect("bundled JSON parses");
    let letter = letter.to_ascii_uppercase();
    let key = format!("{letter}{rank}");
    if let Some(e) = d.exceptional.get(&key) {
        return Ok(e.q.clone());
    }
    if matches!(letter, 'E' | 'F' | 'G') {
        return Err(Error::Unsupported(format!("no subregular denominators for {key}")));
    }
    let e = d
        .families
        .get(&letter.to_string())
        .ok_or_else(|| Error::Unsupported(format!("family {letter}")))?;
    if rank < e.min_rank {
        return Err(Error::Unsupported(format!("{key}: rank below {}", e.min_rank)));
    }
    e.q.iter().map(|s| eval_affine(s, rank as i64)).collect()
}

/// One row of the table of rational subregular W-algebras.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableRow {
    pub family: String,
    pub rank: usize,
    pub p: i64,
    pub q: i64,
    pub c: String,
    pub c_eff: String,
    pub irreps: usize,
    pub isom: String,
}

impl TableRow {
    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }
    pub fn c(&self) -> Q {
        parse_q(&self.c).expect("bundled rational")
    }
    pub fn c_eff(&self) -> Q {
        parse_q(&self.c_eff).expect("bundled rational")
    }
}

/// Golden data for `E₇`, `p = 19`, `q = 16`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct E7Data {
    /// `η̂_i` as `[affine label, label_1, …, label_7]`, for the listed indices.
    pub affine_weights: BTreeMap<String, Vec<i64>>,
    /// Pairs `(i, 12 − i)` exchanged by the simple current.
    pub sigma_pairs: Vec<(usize, usize)>,
    pub simple_current: usize,
    pub simple_current_h: String,
    pub all_self_dual: bool,
    /// `F_i` for `i = 1..7`, 13×13, row-major in the printed layout.
    pub fusion: BTreeMap<String, Vec<Vec<i64>>>,
}

/// Golden data for `E₆`, `p = 12`, `q = 11`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct E6Data {
    pub zeta_order: u64,
    /// Quantum dimensions as `exponent -> coefficient` maps in `ζ_{11}`.
    pub qdims: BTreeMap<String, BTreeMap<String, i64>>,
    pub conformal_dimension: BTreeMap<String, serde_json::Value>,
    pub dual_pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct Reference {
    subregular_table: Vec<TableRow>,
    e7_19_16: E7Data,
    e6_12_11: E6Data,
}

fn reference() -> Reference {
    serde_json::from_str(REFERENCE).expect("bundled JSON parses")
}

pub fn subregular_table() -> Vec<TableRow> {
    reference().subregular_table
}

pub fn e7_19_16() -> E7Data {
    reference().e7_19_16
}

pub fn e6_12_11() -> E6Data {
    reference().e6_12_11
}

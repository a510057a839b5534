//! Subcommand implementations. Each returns an [`Output`] renderable as JSON, CSV or text.

use serde_json::{json, Value};
use wsubreg::admissible::{labels_to_json, orbit_representatives, vacuum_index, LevelData, SubregLabel};
use wsubreg::cyclotomic::coeff_strings;
use wsubreg::fusion::{check_qdim_homomorphism, quantum_dimensions, ring_isomorphic, verlinde, FusionRing};
use wsubreg::numerology::{require_self_dual, sporadic_report, subreg_self_dual};
use wsubreg::reference::subregular_table;
use wsubreg::rootsystem::RootSystem;
use wsubreg::smatrix::{s_subreg, ScaledMatrix};
use wsubreg::fmt_q;

use crate::config::{CliError, CliResult, Format, RunConfig};

pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pretty: String,
}

impl Output {
    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Invariant(e.to_string())),
            Format::Pretty => Ok(self.pretty.clone()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Invariant(e.to_string());
                w.write_record(&self.header).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
            }
        }
    }
}

fn join(v: &[String]) -> String {
    format!("({})", v.join(","))
}

fn label_name(l: &SubregLabel) -> String {
    format!("κ={} η={}", join(&l.kappa.to_strings()), join(&l.eta.to_strings()))
}

fn algebra_name(ld: &LevelData) -> String {
    format!("W_{{-{}+{}/{}}}({})", ld.rs.h_dual, ld.p, ld.q, ld.rs.name())
}

/// Labels, the S-matrix with readable row names, and the vacuum index.
pub struct Computed {
    pub ld: LevelData,
    pub labels: Vec<SubregLabel>,
    pub s: ScaledMatrix,
    pub vacuum: usize,
}

pub fn compute_s(cfg: &RunConfig) -> CliResult<Computed> {
    let ld = cfg.level()?;
    cfg.check_cap(&ld.rs)?;
    let labels = orbit_representatives(&ld)?;
    let mut s = s_subreg(&ld, &labels, &cfg.x(&ld.rs), cfg.cap)?;
    s.labels = labels.iter().map(label_name).collect();
    let vacuum = vacuum_index(&ld, &labels)?;
    Ok(Computed { ld, labels, s, vacuum })
}

pub fn cmd_enumerate(cfg: &RunConfig) -> CliResult<Output> {
    let ld = cfg.level()?;
    let labels = orbit_representatives(&ld)?;
    let vac = vacuum_index(&ld, &labels)?;
    let rows: Vec<Vec<String>> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            vec![
                i.to_string(),
                join(&l.kappa.to_strings()),
                join(&l.eta.to_strings()),
                fmt_q(&l.h),
                l.orbit.len().to_string(),
            ]
        })
        .collect();
    let mut pretty = format!("{}: {} labels, vacuum #{vac}\n", algebra_name(&ld), labels.len());
    for r in &rows {
        pretty.push_str(&format!("  #{:<3} κ={:<24} η={:<24} h={}\n", r[0], r[1], r[2], r[3]));
    }
    Ok(Output {
        json: json!({
            "algebra": algebra_name(&ld),
            "count": labels.len(),
            "vacuum": vac,
            "labels": labels_to_json(&labels),
        }),
        header: ["index", "kappa", "eta", "h", "orbit_size"].map(String::from).to_vec(),
        rows,
        pretty,
    })
}

pub fn cmd_smatrix(cfg: &RunConfig) -> CliResult<Output> {
    let c = compute_s(cfg)?;
    c.s.check_unitary()?;
    if !c.s.is_symmetric() {
        return Err(CliError::Invariant("S is not symmetric".into()));
    }
    let f = c.s.to_complex();
    let n = c.s.dim();
    let rows = (0..n)
        .flat_map(|i| {
            let f = &f;
            (0..n).map(move |j| vec![i.to_string(), j.to_string(), f[i][j].re.to_string(), f[i][j].im.to_string()])
        })
        .collect();
    let mut json = c.s.to_json();
    json["algebra"] = json!(algebra_name(&c.ld));
    json["vacuum"] = json!(c.vacuum);
    Ok(Output {
        json,
        header: ["row", "col", "re", "im"].map(String::from).to_vec(),
        rows,
        pretty: format!("{}: S = i^{}/√{} · core\n{}", algebra_name(&c.ld), c.s.i_power, c.s.radicand, c.s.pretty()),
    })
}

/// Names the ring when it is trivial or a cyclic group ring.
pub fn describe_ring(f: &FusionRing) -> String {
    if f.len() == 1 {
        return "trivial".into();
    }
    if ring_isomorphic(f, &FusionRing::cyclic(f.len())).is_some() {
        return format!("group ring of Z/{}", f.len());
    }
    format!("rank {} fusion ring", f.len())
}

pub fn fusion_ring(c: &Computed) -> CliResult<FusionRing> {
    require_self_dual(&c.ld)?;
    let f = verlinde(&c.s, c.vacuum)?;
    let qd = quantum_dimensions(&c.s, c.vacuum)?;
    check_qdim_homomorphism(&f, &qd)?;
    Ok(f)
}

pub fn cmd_fusion(cfg: &RunConfig) -> CliResult<Output> {
    let c = compute_s(cfg)?;
    let f = fusion_ring(&c)?;
    let mut rows = Vec::new();
    for i in 0..f.len() {
        for j in 0..f.len() {
            for (k, m) in f.product(i, j) {
                rows.push(vec![i.to_string(), j.to_string(), k.to_string(), m.to_string()]);
            }
        }
    }
    let mut json = f.to_json();
    json["algebra"] = json!(algebra_name(&c.ld));
    json["structure"] = json!(describe_ring(&f));
    Ok(Output {
        json,
        header: ["i", "j", "k", "N"].map(String::from).to_vec(),
        rows,
        pretty: format!("{}: {}\n{}", algebra_name(&c.ld), describe_ring(&f), f.pretty()),
    })
}

pub fn cmd_qdims(cfg: &RunConfig) -> CliResult<Output> {
    let c = compute_s(cfg)?;
    require_self_dual(&c.ld)?;
    let qd = quantum_dimensions(&c.s, c.vacuum)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut pretty = format!("{}\n", algebra_name(&c.ld));
    for (i, (l, x)) in c.labels.iter().zip(&qd).enumerate() {
        let z = x.to_complex();
        rows.push(vec![i.to_string(), fmt_q(&l.h), z.re.to_string(), z.im.to_string()]);
        items.push(json!({
            "label": c.s.labels[i],
            "h": fmt_q(&l.h),
            "order": x.order(),
            "coeffs": coeff_strings(x),
            "value": [z.re, z.im],
        }));
        pretty.push_str(&format!("  #{i:<3} h={:<10} qdim={:.9}{:+.9}i\n", fmt_q(&l.h), z.re, z.im));
    }
    Ok(Output {
        json: json!({ "algebra": algebra_name(&c.ld), "vacuum": c.vacuum, "qdims": items }),
        header: ["index", "h", "re", "im"].map(String::from).to_vec(),
        rows,
        pretty,
    })
}

/// One row of the reconstructed table.
pub fn table_row(ld: &LevelData, labels: &[SubregLabel], fusion: Option<&FusionRing>) -> CliResult<Value> {
    let rec = sporadic_report(ld, labels, fusion)?;
    let mut v = serde_json::to_value(&rec).map_err(|e| CliError::Invariant(e.to_string()))?;
    v["type"] = json!(ld.rs.name());
    v["p"] = json!(ld.p);
    v["q"] = json!(ld.q);
    v["isom"] = json!(rec.label());
    Ok(v)
}

fn row_strings(v: &Value) -> Vec<String> {
    let s = |k: &str| match &v[k] {
        Value::String(x) => x.clone(),
        other => other.to_string(),
    };
    ["type", "p", "q", "c", "c_eff", "irreps", "isom"].iter().map(|k| s(k)).collect()
}

/// The sporadic report for one level, or the whole reconstructed table when `cfg` is `None`.
pub fn cmd_report(cfg: Option<&RunConfig>) -> CliResult<Output> {
    let mut values = Vec::new();
    match cfg {
        Some(cfg) => {
            let ld = cfg.level()?;
            let labels = orbit_representatives(&ld)?;
            let fusion = if cfg.check_cap(&ld.rs).is_ok() && subreg_self_dual(&ld) != Some(false) {
                let c = compute_s(cfg)?;
                Some(fusion_ring(&c)?)
            } else {
                None
            };
            values.push(table_row(&ld, &labels, fusion.as_ref())?);
        }
        None => {
            for row in subregular_table() {
                let rs = RootSystem::from_name(&row.name(), None)?;
                let ld = LevelData::new(rs, row.p, row.q, wsubreg::admissible::Mode::Subreg)?;
                let labels = orbit_representatives(&ld)?;
                values.push(table_row(&ld, &labels, None)?);
            }
        }
    }
    let rows: Vec<Vec<String>> = values.iter().map(row_strings).collect();
    let mut pretty = String::new();
    for r in &rows {
        pretty.push_str(&format!("{:<4} {:>3}/{:<3} c={:<10} c_eff={:<7} #={:<3} {}\n", r[0], r[1], r[2], r[3], r[4], r[5], r[6]));
    }
    Ok(Output {
        json: Value::Array(values),
        header: ["type", "p", "q", "c", "c_eff", "irreps", "isom"].map(String::from).to_vec(),
        rows,
        pretty,
    })
}

//! Scalar invariants: central charges, conformal dimensions, effective central
//! charge, asymptotic growth and dimension, Virasoro minimal-model data, and
//! identification of subregular W-algebras with minimal models.

use num_integer::Integer;
use serde::Serialize;

use crate::admissible::{LevelData, Mode, SubregLabel};
use crate::fusion::{ring_isomorphic, verlinde, FusionRing};
use crate::rootsystem::{Family, Weight};
use crate::smatrix::{virasoro_s, ScaledMatrix};
use crate::{fmt_q, Error, Result, Q};

fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// `⟨α, x⟩` for a root in simple coordinates and a weight.
fn pair(root: &[i64], x: &Weight) -> Q {
    root.iter().zip(&x.coords).map(|(a, c)| qi(*a) * c).sum()
}

/// `(dim g₀, dim g_{1/2})` for the grading by `x₀`.
fn graded_dims(ld: &LevelData) -> (i64, i64) {
    let x0 = ld.x0();
    let mut zero = 0;
    let mut half = 0;
    for r in &ld.rs.positive_roots {
        let v = pair(r, x0);
        if v == Q::from_integer(0) {
            zero += 1;
        } else if v == Q::new(1, 2) {
            half += 1;
        }
    }
    (ld.rs.rank as i64 + 2 * zero, 2 * half)
}

/// `c = dim g₀ − ½ dim g_{1/2} − (12/t)|ρ − t x₀|²` with `t = p/q`.
pub fn central_charge(ld: &LevelData) -> Q {
    let (g0, g12) = graded_dims(ld);
    let t = ld.t();
    let v = ld.rs.rho().sub(&ld.x0().scale(t));
    qi(g0) - Q::new(g12, 2) - qi(12) / t * ld.rs.inner_product(&v, &v)
}

/// Closed-form central charges of subregular W-algebras, as polynomials in `p/q` and `q/p`.
pub fn central_charge_closed_form(ld: &LevelData) -> Result<Q> {
    if ld.mode != Mode::Subreg {
        return Err(Error::Unsupported("closed forms are tabulated for the subregular mode".into()));
    }
    let (p, q) = (ld.p, ld.q);
    let n = ld.rs.rank as i64;
    let t = ld.t();
    let product = |a: i64, b1: i64, c1: i64, b2: i64, c2: i64| Q::new(-a * (b1 * p - c1 * q) * (b2 * p - c2 * q), p * q);
    Ok(match (ld.rs.family, n) {
        (Family::D, 4) => product(6, 4, 7, 3, 4),
        (Family::E, 6) => product(8, 9, 13, 7, 9),
        (Family::E, 7) => product(9, 14, 19, 11, 14),
        (Family::E, 8) => product(10, 24, 31, 19, 24),
        (Family::D, _) => {
            qi(-2 * n * (13 - 9 * n + 2 * n * n)) * t + qi(26 + 17 * n - 24 * n * n + 8 * n * n * n)
                - qi(2 * n * (1 - 3 * n + 2 * n * n)) / t
        }
        (Family::A, _) => {
            let j = ld.rs.star as i64 + 1;
            let rho2 = Q::new(n * (n + 1) * (n + 2), 12);
            let rho_w = Q::new(j * (n + 1 - j), 2);
            let w2 = Q::new(j * (n + 1 - j), n + 1);
            let rho_x0 = rho2 - rho_w;
            let x02 = rho2 - qi(2) * rho_w + w2;
            qi(n + 2) - qi(12) * (rho2 / t - qi(2) * rho_x0 + t * x02)
        }
        (f, _) => return Err(Error::Unsupported(format!("no closed form for {f}{n}"))),
    })
}

/// `h_λ = (|λ+ρ|² − |ρ|²)/(2t) − (t/2)|x₀|² + (x₀, ρ)`.
pub fn conformal_dimension(ld: &LevelData, lambda: &Weight) -> Q {
    let rs = &ld.rs;
    let shifted = lambda.add(&rs.rho());
    conformal_dimension_shifted(ld, &shifted)
}

fn conformal_dimension_shifted(ld: &LevelData, shifted: &Weight) -> Q {
    let rs = &ld.rs;
    let t = ld.t();
    let rho = rs.rho();
    let x0 = ld.x0();
    (rs.inner_product(shifted, shifted) - rs.inner_product(&rho, &rho)) / (qi(2) * t)
        - t / qi(2) * rs.inner_product(x0, x0)
        + rs.inner_product(x0, &rho)
}

/// Conformal dimension of the class of `(ν, η)`, where `λ + ρ = ν − (p/q)η`.
pub fn conformal_dimension_of_pair(ld: &LevelData, nu: &[i64], eta: &[i64]) -> Q {
    let shifted = Weight::from_ints(nu).sub(&Weight::from_ints(eta).scale(ld.t()));
    conformal_dimension_shifted(ld, &shifted)
}

/// `c − 24 min h`.
pub fn effective_central_charge(ld: &LevelData, labels: &[SubregLabel]) -> Q {
    let hmin = labels.iter().map(|l| l.h).min().unwrap_or_else(|| qi(0));
    central_charge(ld) - qi(24) * hmin
}

/// `g = dim g^f − (h∨/pq) dim g`, with `dim g^f = dim g₀` for an even grading.
pub fn asymptotic_growth(ld: &LevelData) -> Q {
    let (g0, _) = graded_dims(ld);
    qi(g0) - Q::new(ld.rs.h_dual * ld.rs.dim(), ld.p * ld.q)
}

/// Asymptotic dimension of the vacuum module:
/// `(pq)^{−ℓ/2} |P/Q|^{−1/2} q^{−|Δ₊,₀|} Π_{α∈Δ_{>0}} 2 sin(π(α,x₀)/q) Π_{α∈Δ₊} 2 sin(π(α,ρ)/p)`.
pub fn asymptotic_dimension(ld: &LevelData) -> f64 {
    let rs = &ld.rs;
    let (p, q) = (ld.p as f64, ld.q as f64);
    let pi = std::f64::consts::PI;
    let mut a = (p * q).powf(-(rs.rank as f64) / 2.0) / (rs.center_order as f64).sqrt();
    for r in &rs.positive_roots {
        let v = pair(r, ld.x0());
        let v = *v.numer() as f64 / *v.denom() as f64;
        if v == 0.0 {
            a /= q;
        } else {
            a *= 2.0 * (pi * v / q).sin();
        }
        let ht: i64 = r.iter().sum();
        a *= 2.0 * (pi * ht as f64 / p).sin();
    }
    a
}

/// `(p − h∨ + 1)(q − ⟨θ, x₀⟩)`.
pub fn singular_vector_conformal_weight(ld: &LevelData) -> Q {
    let tx = pair(&ld.rs.theta, ld.x0());
    qi(ld.p - ld.rs.h_dual + 1) * (qi(ld.q) - tx)
}

/// Self-duality of the subregular W-algebra of `sl_n` for the even grading
/// with pyramid column `m`: the scalar `((n−1)(n−2m)/2n)(k+n − n/(n−1))` vanishes.
pub fn typea_selfdual(n: i64, p: i64, q: i64, m: i64) -> bool {
    let t = Q::new(p, q);
    let scalar = Q::new((n - 1) * (n - 2 * m), 2 * n) * (t - Q::new(n, n - 1));
    scalar == qi(0)
}

/// Self-duality of the subregular W-algebra at this level, when known.
/// Subregular elements of D and E are distinguished, hence self-dual; in type A
/// the pyramid column is the distinguished node. `None` in type-A mode.
pub fn subreg_self_dual(ld: &LevelData) -> Option<bool> {
    match (ld.mode, ld.rs.family) {
        (Mode::TypeA, _) => None,
        (Mode::Subreg, Family::A) => {
            let n = ld.rs.rank as i64 + 1;
            Some(typea_selfdual(n, ld.p, ld.q, ld.rs.star as i64 + 1))
        }
        (Mode::Subreg, _) => Some(true),
    }
}

/// Errors when the algebra is known not to be self-dual, in which case the
/// Verlinde formula and quantum dimensions do not apply.
pub fn require_self_dual(ld: &LevelData) -> Result<()> {
    match subreg_self_dual(ld) {
        Some(false) => Err(Error::InvalidInput(format!(
            "W_{{-{}+{}/{}}}({}, f_subreg) is not self-dual, so the Verlinde formula does not apply; labels and the S-matrix are still available",
            ld.rs.h_dual,
            ld.p,
            ld.q,
            ld.rs.name()
        ))),
        _ => Ok(()),
    }
}

/// Data of the Virasoro minimal model `Vir_{p,q}`.
#[derive(Clone, Debug)]
pub struct VirData {
    pub p: i64,
    pub q: i64,
    pub c: Q,
    /// Kac labels `(r, s)`, `1 ≤ r ≤ q−1`, `1 ≤ s ≤ p−1`, one per class of
    /// `(r, s) ~ (q−r, p−s)`, chosen with minimal `s` then minimal `r`.
    pub irreps: Vec<(i64, i64)>,
    pub h: Vec<Q>,
    pub s: ScaledMatrix,
    pub fusion: FusionRing,
}

impl VirData {
    pub fn vacuum(&self) -> usize {
        self.irreps.iter().position(|&x| x == (1, 1)).expect("vacuum present")
    }

    pub fn c_eff(&self) -> Q {
        Q::new(1, 1) - Q::new(6, self.p * self.q)
    }

    pub fn name(&self) -> String {
        format!("Vir_{{{},{}}}", self.p, self.q)
    }
}

/// `h_{r,s} = ((pr − qs)² − (p−q)²)/(4pq)`.
pub fn kac_h(p: i64, q: i64, r: i64, s: i64) -> Q {
    Q::new((p * r - q * s).pow(2) - (p - q).pow(2), 4 * p * q)
}

pub fn vir_minimal_model(p: i64, q: i64) -> Result<VirData> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!("Vir_{{{p},{q}}} needs coprime p, q ≥ 2")));
    }
    let mut irreps = Vec::new();
    for s in 1..p {
        for r in 1..q {
            let partner = (q - r, p - s);
            if !irreps.contains(&partner) {
                irreps.push((r, s));
            }
        }
    }
    let h = irreps.iter().map(|&(r, s)| kac_h(p, q, r, s)).collect();
    let c = qi(1) - Q::new(6 * (p - q) * (p - q), p * q);
    let s = virasoro_s(p, q, &irreps);
    let vac = irreps.iter().position(|&x| x == (1, 1)).expect("vacuum");
    let mut fusion = verlinde(&s, vac)?;
    fusion.labels = irreps.iter().map(|(r, s)| format!("L({r},{s})")).collect();
    Ok(VirData { p, q, c, irreps, h, s, fusion })
}

/// `√(8/pq) (−1)^{(r+s)(r₀+s₀)} sin(π(p−q) r r₀/q) sin(π(p−q) s s₀/p)` with `r₀p − s₀q = 1`.
pub fn vir_asymptotic_dimension(v: &VirData, r: i64, s: i64) -> f64 {
    let (p, q) = (v.p, v.q);
    let (r0, s0) = (1..q)
        .flat_map(|r0| (1..p).map(move |s0| (r0, s0)))
        .find(|&(r0, s0)| r0 * p - s0 * q == 1)
        .expect("Bezout pair exists for coprime p, q");
    let pi = std::f64::consts::PI;
    let sign = if ((r + s) * (r0 + s0)) % 2 == 0 { 1.0 } else { -1.0 };
    let (pf, qf) = (p as f64, q as f64);
    (8.0 / (pf * qf)).sqrt()
        * sign
        * (pi * (pf - qf) * (r * r0) as f64 / qf).sin()
        * (pi * (pf - qf) * (s * s0) as f64 / pf).sin()
}

/// Outcome of matching a W-algebra against Virasoro minimal models.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "kind")]
pub enum Identification {
    Minimal { p: i64, q: i64 },
    Extension { p: i64, q: i64, r: i64, s: i64, multiplicity: i64 },
    Unidentified,
}

#[derive(Clone, Debug, Serialize)]
pub struct SporadicRecord {
    pub algebra: String,
    pub c: String,
    pub c_eff: String,
    pub growth: String,
    pub irreps: usize,
    pub identification: Identification,
    pub asymptotic_dimension: f64,
    /// Asymptotic dimension predicted from the Virasoro side (vacuum plus extension).
    pub vir_asymptotic_dimension: Option<f64>,
    /// Whether the fusion rings are isomorphic, when a W fusion ring was supplied.
    pub fusion_isomorphic: Option<bool>,
    pub notes: Vec<String>,
}

impl SporadicRecord {
    pub fn label(&self) -> String {
        match &self.identification {
            Identification::Minimal { p, q } => format!("Vir_{{{p},{q}}}"),
            Identification::Extension { p, q, r, s, multiplicity } => {
                let m = if *multiplicity == 1 { String::new() } else { format!("{multiplicity}·") };
                format!("Vir_{{{p},{q}}}+{m}L({r},{s})")
            }
            Identification::Unidentified => "unidentified".into(),
        }
    }
}

/// Minimal models `Vir_{a,b}` (`a < b`) with the given `c` and `c^eff`.
fn candidate_models(c: Q, c_eff: Q) -> Vec<(i64, i64)> {
    if c_eff >= qi(1) {
        return Vec::new();
    }
    let prod = qi(6) / (qi(1) - c_eff);
    if !prod.is_integer() {
        return Vec::new();
    }
    let prod = prod.to_integer();
    (2..prod)
        .filter(|&a| prod % a == 0 && a < prod / a && a.gcd(&(prod / a)) == 1 && prod / a >= 2)
        .map(|a| (a, prod / a))
        .filter(|&(a, b)| qi(1) - Q::new(6 * (a - b) * (a - b), a * b) == c)
        .collect()
}

/// Matches `(c, c^eff, #irreps, asymptotic dimension, fusion ring)` against
/// minimal models and their extensions by one integer-weight module.
pub fn sporadic_report(ld: &LevelData, labels: &[SubregLabel], w_fusion: Option<&FusionRing>) -> Result<SporadicRecord> {
    let c = central_charge(ld);
    let c_eff = effective_central_charge(ld, labels);
    let growth = asymptotic_growth(ld);
    let amp = asymptotic_dimension(ld);
    let mut rec = SporadicRecord {
        algebra: format!("W_{{-{}+{}/{}}}({}, f_subreg)", ld.rs.h_dual, ld.p, ld.q, ld.rs.name()),
        c: fmt_q(&c),
        c_eff: fmt_q(&c_eff),
        growth: fmt_q(&growth),
        irreps: labels.len(),
        identification: Identification::Unidentified,
        asymptotic_dimension: amp,
        vir_asymptotic_dimension: None,
        fusion_isomorphic: None,
        notes: Vec::new(),
    };
    if c == qi(0) && labels.len() == 1 {
        rec.identification = Identification::Minimal { p: 2, q: 3 };
        rec.vir_asymptotic_dimension = Some(1.0);
        return Ok(rec);
    }
    for (a, b) in candidate_models(c, c_eff) {
        let v = vir_minimal_model(a, b)?;
        let vac_amp = vir_asymptotic_dimension(&v, 1, 1);
        if v.irreps.len() == labels.len() {
            rec.identification = Identification::Minimal { p: a, q: b };
            rec.vir_asymptotic_dimension = Some(vac_amp);
            if let Some(f) = w_fusion {
                rec.fusion_isomorphic = Some(ring_isomorphic(f, &v.fusion).is_some());
            }
            return Ok(rec);
        }
        let integral: Vec<usize> = (0..v.irreps.len())
            .filter(|&i| v.h[i].is_integer() && v.h[i] >= qi(1))
            .collect();
        for i in integral {
            let (r, s) = v.irreps[i];
            let amp_l = vir_asymptotic_dimension(&v, r, s);
            let mult = ((amp - vac_amp) / amp_l).round();
            if mult >= 1.0 && ((amp - vac_amp) - mult * amp_l).abs() < 1e-9 * amp.abs().max(1e-300) + 1e-12 {
                rec.identification = Identification::Extension { p: a, q: b, r, s, multiplicity: mult as i64 };
                rec.vir_asymptotic_dimension = Some(vac_amp + mult * amp_l);
                return Ok(rec);
            }
        }
        rec.notes.push(format!("{} matches c and c_eff but not the module count or dimensions", v.name()));
    }
    Ok(rec)
}

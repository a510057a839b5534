//! Labels of irreducible modules: dominant weights, subregular and type-A
//! coweight sets, orbit representatives under `W̃₊`, and the element `y^(η)`.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;
use serde_json::{json, Value};

use crate::numerology;
use crate::reference::subregular_denominators;
use crate::rootsystem::{Family, RootSystem, Weight};
use crate::weyl::{element_mapping_root, WeylElement};
use crate::{fmt_q, Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Subreg,
    TypeA,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "subreg" => Ok(Mode::Subreg),
            "typeA" | "typea" => Ok(Mode::TypeA),
            _ => Err(Error::InvalidInput(format!("unknown mode {s:?}"))),
        }
    }
}

/// Level `k = −h∨ + p/q` together with the nilpotent it is reduced along.
#[derive(Clone, Debug)]
pub struct LevelData {
    pub rs: RootSystem,
    pub p: i64,
    pub q: i64,
    pub mode: Mode,
    x0: Weight,
}

impl LevelData {
    pub fn new(rs: RootSystem, p: i64, q: i64, mode: Mode) -> Result<LevelData> {
        if q < 1 || p < 1 {
            return Err(Error::InvalidInput(format!("p = {p}, q = {q} must be positive")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!("p = {p} and q = {q} are not coprime")));
        }
        if p < rs.h_dual {
            return Err(Error::InvalidInput(format!(
                "p = {p} is below h∨ = {} for {}",
                rs.h_dual,
                rs.name()
            )));
        }
        let x0 = match mode {
            Mode::Subreg => {
                let letter = rs.family.to_string().chars().next().expect("letter");
                let qs = subregular_denominators(letter, rs.rank)?;
                if !qs.contains(&q) {
                    return Err(Error::InvalidInput(format!(
                        "q = {q} is not a subregular denominator for {}; legal values: {:?}",
                        rs.name(),
                        qs
                    )));
                }
                rs.x0()
            }
            Mode::TypeA => {
                if rs.family != Family::A {
                    return Err(Error::InvalidInput("type-A mode needs family A".into()));
                }
                let n = rs.rank as i64 + 1;
                if q > n {
                    return Err(Error::InvalidInput(format!("q = {q} exceeds n = {n}")));
                }
                typea_x0(&rs, q)
            }
        };
        Ok(LevelData { rs, p, q, mode, x0 })
    }

    /// `k + h∨ = p/q`.
    pub fn t(&self) -> Q {
        Q::new(self.p, self.q)
    }

    pub fn k(&self) -> Q {
        self.t() - Q::from_integer(self.rs.h_dual)
    }

    /// The element `x₀` defining the good grading.
    pub fn x0(&self) -> &Weight {
        &self.x0
    }
}

/// `x₀` for the standard-Levi grading of `sl_n` with block sizes `r+1` (s times) then `r`.
fn typea_x0(rs: &RootSystem, q: i64) -> Weight {
    let n = rs.rank as i64 + 1;
    let (r, s) = (n / q, n % q);
    let mut v = vec![0i64; rs.rank];
    let mut pos = 0;
    for i in 1..q {
        pos += if i <= s { r + 1 } else { r };
        v[(pos - 1) as usize] += 1;
    }
    Weight::from_ints(&v)
}

/// All dominant integral weights with `⟨λ, θ∨⟩ ≤ m`, in lexicographic order.
pub fn enumerate_dominant(rs: &RootSystem, m: i64) -> Vec<Weight> {
    enumerate_dominant_ints(rs, m).iter().map(|v| Weight::from_ints(v)).collect()
}

pub(crate) fn enumerate_dominant_ints(rs: &RootSystem, m: i64) -> Vec<Vec<i64>> {
    fn rec(marks: &[i64], i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == marks.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left / marks[i] {
            cur.push(c);
            rec(marks, i + 1, left - c * marks[i], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 0 {
        rec(&rs.marks, 0, m, &mut Vec::new(), &mut out);
    }
    out
}

/// Affine labels `(q − ⟨η,θ⟩, ⟨η,α_1⟩, …)` of a level-`q` dominant coweight.
fn affine_labels(rs: &RootSystem, eta: &[i64], q: i64) -> Vec<i64> {
    let lvl: i64 = eta.iter().zip(&rs.marks).map(|(a, b)| a * b).sum();
    std::iter::once(q - lvl).chain(eta.iter().copied()).collect()
}

pub(crate) fn is_subreg_coweight(rs: &RootSystem, eta: &[i64], q: i64) -> bool {
    let labels = affine_labels(rs, eta, q);
    labels.iter().all(|&c| c >= 0) && labels.iter().filter(|&&c| c == 0).count() == 1
}

/// Dominant integral coweights of level `q` with exactly one vanishing affine label.
pub fn enumerate_subreg_coweights(rs: &RootSystem, q: i64) -> Result<Vec<Weight>> {
    let letter = rs.family.to_string().chars().next().expect("letter");
    if !subregular_denominators(letter, rs.rank)?.contains(&q) {
        return Err(Error::InvalidInput(format!(
            "q = {q} is not a subregular denominator for {}",
            rs.name()
        )));
    }
    Ok(subreg_coweights_ints(rs, q).iter().map(|v| Weight::from_ints(v)).collect())
}

fn subreg_coweights_ints(rs: &RootSystem, q: i64) -> Vec<Vec<i64>> {
    enumerate_dominant_ints(rs, q)
        .into_iter()
        .filter(|e| is_subreg_coweight(rs, e, q))
        .collect()
}

/// Coweights `Σ_{j<q} ϖ_{m_1+…+m_j}` for the compositions `(m_a)` of `n = rank+1`
/// into `s` parts `r+1` and `q−s` parts `r`, where `n = rq + s`.
pub fn enumerate_typea_coweights(rs: &RootSystem, q: i64) -> Result<Vec<Weight>> {
    Ok(typea_coweights_ints(rs, q)?.iter().map(|v| Weight::from_ints(v)).collect())
}

fn typea_coweights_ints(rs: &RootSystem, q: i64) -> Result<Vec<Vec<i64>>> {
    if rs.family != Family::A {
        return Err(Error::InvalidInput(format!("{} is not of type A", rs.name())));
    }
    let n = rs.rank as i64 + 1;
    if q < 1 || q > n {
        return Err(Error::InvalidInput(format!("q = {q} must lie in 1..={n}")));
    }
    let (r, s) = (n / q, n % q);
    let mut out = BTreeSet::new();
    let mut parts = Vec::new();
    fn rec(q: usize, big_left: i64, r: i64, parts: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>, rank: usize) {
        if parts.len() == q {
            if big_left == 0 {
                let mut v = vec![0i64; rank];
                let mut pos = 0;
                for m in &parts[..q - 1] {
                    pos += m;
                    v[(pos - 1) as usize] += 1;
                }
                out.insert(v);
            }
            return;
        }
        if big_left > 0 {
            parts.push(r + 1);
            rec(q, big_left - 1, r, parts, out, rank);
            parts.pop();
        }
        if (q - parts.len()) as i64 > big_left {
            parts.push(r);
            rec(q, big_left, r, parts, out, rank);
            parts.pop();
        }
    }
    rec(q as usize, s, r, &mut parts, &mut out, rs.rank);
    Ok(out.into_iter().collect())
}

/// The element `y^(η)`: identity if `⟨η, α_*⟩ = 0`; otherwise an element sending
/// the simple root `α_k` with `⟨η, α_k⟩ = 0` to `α_*`; otherwise (`η = ρ`) an
/// element sending `−θ` to `α_*`.
pub fn choose_y_eta(rs: &RootSystem, eta: &Weight) -> Result<WeylElement> {
    let e = eta
        .to_ints()
        .ok_or_else(|| Error::InvalidInput("η must be integral".into()))?;
    let astar = rs.alpha_star();
    if e[rs.star] == 0 {
        return Ok(WeylElement::identity(rs.rank));
    }
    if let Some(k) = (0..rs.rank).find(|&k| e[k] == 0) {
        return element_mapping_root(rs, &Weight::from_ints(&rs.alpha(k)), &astar);
    }
    element_mapping_root(rs, &rs.theta_weight().neg(), &astar)
}

/// `Δ(λ) = {α ∈ Δ : ⟨λ+ρ, α∨⟩ ∈ ℤ}` in simple-root coordinates, positive roots first.
pub fn integral_roots(rs: &RootSystem, lambda: &Weight) -> Vec<Vec<i64>> {
    let shifted = lambda.add(&rs.rho());
    let pos: Vec<Vec<i64>> = rs
        .positive_roots
        .iter()
        .filter(|c| {
            let pairing: Q = c.iter().zip(&shifted.coords).map(|(a, x)| Q::from_integer(*a) * x).sum();
            pairing.is_integer()
        })
        .cloned()
        .collect();
    let neg: Vec<Vec<i64>> = pos.iter().map(|c| c.iter().map(|x| -x).collect()).collect();
    pos.into_iter().chain(neg).collect()
}

/// `|Pr^k| = q^ℓ · |P₊^{p−h∨}|`.
pub fn admissible_count(ld: &LevelData) -> u128 {
    let dom = enumerate_dominant_ints(&ld.rs, ld.p - ld.rs.h_dual).len() as u128;
    (ld.q as u128).pow(ld.rs.rank as u32) * dom
}

/// A pair `(κ, η)` with its `y^(η)`, `β = −y(η)` and `ε(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub kappa: Vec<i64>,
    pub eta: Vec<i64>,
    pub y: WeylElement,
    pub beta: Vec<i64>,
    pub sign: i64,
}

impl Rep {
    pub(crate) fn new(rs: &RootSystem, kappa: Vec<i64>, eta: Vec<i64>) -> Result<Rep> {
        let y = choose_y_eta(rs, &Weight::from_ints(&eta))?;
        let beta = y.apply_ints(&eta).iter().map(|x| -x).collect();
        let sign = y.sign;
        Ok(Rep { kappa, eta, y, beta, sign })
    }

    /// `ν = κ + ρ`.
    pub fn nu(&self) -> Vec<i64> {
        self.kappa.iter().map(|k| k + 1).collect()
    }
}

/// A class of irreducible modules, stored by its lexicographically minimal member.
#[derive(Clone, Debug)]
pub struct SubregLabel {
    pub kappa: Weight,
    pub eta: Weight,
    pub y_eta: WeylElement,
    pub beta: Weight,
    pub sign: i64,
    pub h: Q,
    /// All `(κ, η)` pairs in the `W̃₊`-orbit, sorted.
    pub orbit: Vec<(Vec<i64>, Vec<i64>)>,
    /// The member used in S-matrix formulas: `η ∈ Q` if `gcd(q, |P/Q|) = 1`, else `ν ∈ Q`.
    pub compute: Rep,
}

impl SubregLabel {
    /// `λ = ν − (p/q)η − ρ` for the canonical member.
    pub fn lambda(&self, ld: &LevelData) -> Weight {
        self.kappa.sub(&self.eta.scale(ld.t()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kappa": self.kappa.to_strings(),
            "eta": self.eta.to_strings(),
            "beta": self.beta.to_strings(),
            "sign": self.sign,
            "h": fmt_q(&self.h),
        })
    }
}

fn coweights_for(ld: &LevelData) -> Result<Vec<Vec<i64>>> {
    match ld.mode {
        Mode::Subreg => Ok(subreg_coweights_ints(&ld.rs, ld.q)),
        Mode::TypeA => typea_coweights_ints(&ld.rs, ld.q),
    }
}

/// One label per `W̃₊`-orbit on `P₊^{p−h∨} × (coweight set)`, sorted by `(η, κ)`.
/// In type-A mode the group does not preserve the coweight set and a class is
/// the part of an orbit lying inside it.
pub fn orbit_representatives(ld: &LevelData) -> Result<Vec<SubregLabel>> {
    let rs = &ld.rs;
    let kappas = enumerate_dominant_ints(rs, ld.p - rs.h_dual);
    let etas = coweights_for(ld)?;
    let eta_set: HashSet<&Vec<i64>> = etas.iter().collect();
    let group = rs.wtilde_plus();
    let use_eta_in_q = ld.q.gcd(&rs.center_order) == 1;
    let mut seen: HashSet<(Vec<i64>, Vec<i64>)> = HashSet::new();
    let mut out = Vec::new();
    for eta in &etas {
        for kappa in &kappas {
            if seen.contains(&(kappa.clone(), eta.clone())) {
                continue;
            }
            let mut orbit: Vec<(Vec<i64>, Vec<i64>)> = group
                .iter()
                .map(|g| (g.act(kappa, ld.p - rs.h_dual), g.act(eta, ld.q)))
                .collect();
            if ld.mode == Mode::TypeA {
                orbit.retain(|(_, e)| eta_set.contains(e));
            }
            orbit.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
            orbit.dedup();
            for (k, e) in &orbit {
                if !eta_set.contains(e) {
                    return Err(Error::Invariant(format!("W̃₊ does not preserve the coweight set at {e:?}")));
                }
                seen.insert((k.clone(), e.clone()));
            }
            let (ck, ce) = orbit[0].clone();
            let canonical = Rep::new(rs, ck, ce)?;
            let pick = orbit
                .iter()
                .find(|(k, e)| {
                    if use_eta_in_q {
                        rs.in_root_lattice(e)
                    } else {
                        let nu: Vec<i64> = k.iter().map(|x| x + 1).collect();
                        rs.in_root_lattice(&nu)
                    }
                })
                .cloned();
            let pick = match (pick, ld.mode) {
                (Some(x), _) => x,
                (None, Mode::TypeA) => orbit[0].clone(),
                (None, Mode::Subreg) => return Err(Error::Invariant("orbit has no member in the root lattice".into())),
            };
            let compute = Rep::new(rs, pick.0, pick.1)?;
            let h = numerology::conformal_dimension_of_pair(ld, &canonical.nu(), &canonical.eta);
            out.push(SubregLabel {
                kappa: Weight::from_ints(&canonical.kappa),
                eta: Weight::from_ints(&canonical.eta),
                beta: Weight::from_ints(&canonical.beta),
                sign: canonical.sign,
                y_eta: canonical.y,
                h,
                orbit,
                compute,
            });
        }
    }
    out.sort_by(|a, b| a.eta.cmp(&b.eta).then(a.kappa.cmp(&b.kappa)));
    Ok(out)
}

/// Index of the vacuum class, the orbit of `(0, x₀)`.
pub fn vacuum_index(ld: &LevelData, labels: &[SubregLabel]) -> Result<usize> {
    let zero = vec![0i64; ld.rs.rank];
    let x0 = ld.x0().to_ints().expect("integral");
    labels
        .iter()
        .position(|l| l.orbit.iter().any(|(k, e)| *k == zero && *e == x0))
        .ok_or_else(|| Error::Invariant("vacuum class missing".into()))
}

pub fn vacuum_label(ld: &LevelData) -> Result<SubregLabel> {
    let labels = orbit_representatives(ld)?;
    let i = vacuum_index(ld, &labels)?;
    Ok(labels[i].clone())
}

pub fn labels_to_json(labels: &[SubregLabel]) -> Value {
    Value::Array(labels.iter().map(SubregLabel::to_json).collect())
}

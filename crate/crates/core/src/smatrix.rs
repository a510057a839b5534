//! Exact S-matrices: `K_p` for simple affine vertex algebras, the coefficient
//! matrix `C_q`, the subregular S-matrix as a product of the two, and the
//! route through the coefficients `a^B` as an independent check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::admissible::{enumerate_dominant_ints, LevelData, Mode, Rep, SubregLabel};
use crate::cyclotomic::{coeff_strings, sqrt_int, Cyc};
use crate::rootsystem::{RootSystem, Weight};
use crate::weyl::{walk, WalkState, WeylVisitor};
use crate::{Error, Result, Q};

/// `S = (i^a / √M) · core`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMatrix {
    pub i_power: u8,
    pub radicand: BigInt,
    pub core: Vec<Vec<Cyc>>,
    pub labels: Vec<String>,
    /// Integer data identifying each row (e.g. `κ`, `η`, or `κ ‖ η`).
    pub keys: Vec<Vec<i64>>,
}

fn key_label(k: &[i64]) -> String {
    format!("({})", k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

impl ScaledMatrix {
    pub fn new(i_power: u8, radicand: BigInt, core: Vec<Vec<Cyc>>, keys: Vec<Vec<i64>>) -> ScaledMatrix {
        let labels = keys.iter().map(|k| key_label(k)).collect();
        ScaledMatrix { i_power: i_power % 4, radicand, core, labels, keys }
    }

    pub fn dim(&self) -> usize {
        self.core.len()
    }

    /// `i^a / √M` as a complex number.
    pub fn scale(&self) -> Complex64 {
        let m = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        let i_pow = match self.i_power {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        i_pow / m.sqrt()
    }

    pub fn entry_complex(&self, i: usize, j: usize) -> Complex64 {
        self.scale() * self.core[i][j].to_complex()
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        let s = self.scale();
        self.core.iter().map(|r| r.iter().map(|x| s * x.to_complex()).collect()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.core[i][j] == self.core[j][i]))
    }

    /// Checks `core · conj(core)ᵀ = M · I` exactly.
    pub fn check_unitary(&self) -> Result<()> {
        let n = self.dim();
        let conj: Vec<Vec<Cyc>> = self.core.iter().map(|r| r.iter().map(Cyc::conj).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyc::zero(self.core[i][0].order());
                for k in 0..n {
                    acc = acc.add_ref(&self.core[i][k].mul_ref(&conj[j][k]));
                }
                let expect = if i == j { BigRational::from(self.radicand.clone()) } else { BigRational::zero() };
                if acc.to_rational() != Some(expect) {
                    return Err(Error::Invariant(format!(
                        "S is not unitary: (S S*)[{i}][{j}] = {acc} (M = {})",
                        self.radicand
                    )));
                }
            }
        }
        Ok(())
    }

    /// Principal submatrix on `idx`, in that order.
    pub fn submatrix(&self, idx: &[usize]) -> ScaledMatrix {
        ScaledMatrix {
            i_power: self.i_power,
            radicand: self.radicand.clone(),
            core: idx.iter().map(|&i| idx.iter().map(|&j| self.core[i][j].clone()).collect()).collect(),
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            keys: idx.iter().map(|&i| self.keys[i].clone()).collect(),
        }
    }

    /// Multiplies the core by a scalar, leaving the prefactor unchanged.
    pub fn scale_core(&self, c: &Cyc) -> ScaledMatrix {
        let mut out = self.clone();
        for row in out.core.iter_mut() {
            for x in row.iter_mut() {
                *x = x.mul_ref(c);
            }
        }
        out
    }

    /// Entries `i^a · core / √M` as exact cyclotomic numbers.
    pub fn exact(&self) -> Result<Vec<Vec<Cyc>>> {
        let inv_m = BigRational::new(BigInt::one(), self.radicand.clone());
        let pre = Cyc::zeta(4, self.i_power as i64).mul_ref(&sqrt_int(&self.radicand)?).scale_rational(&inv_m);
        Ok(self.core.iter().map(|r| r.iter().map(|x| x.mul_ref(&pre)).collect()).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "i_power": self.i_power,
            "radicand": self.radicand.to_string(),
            "order": self.core.first().and_then(|r| r.first()).map(|x| x.order()).unwrap_or(1),
            "core": self.core.iter().map(|r| r.iter().map(coeff_strings).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Human-readable float rendering of `S`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        for (label, row) in self.labels.iter().zip(self.to_complex()) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| {
                    if z.im.abs() < 1e-12 {
                        format!("{:>10.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            s.push_str(&format!("{label:>24}  {}\n", cells.join("  ")));
        }
        s
    }
}

/// Entrywise `φ_a`.
pub fn galois_matrix(a: i64, s: &ScaledMatrix) -> Result<ScaledMatrix> {
    let core = s
        .core
        .iter()
        .map(|r| r.iter().map(|x| x.galois(a)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledMatrix { core, ..s.clone() })
}

/// Kronecker product; row `(i, j)` of the result is `i · dim(b) + j`.
pub fn kron(a: &ScaledMatrix, b: &ScaledMatrix) -> ScaledMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut core = Vec::with_capacity(na * nb);
    let mut labels = Vec::new();
    let mut keys = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            let mut row = Vec::with_capacity(na * nb);
            for k in 0..na {
                for l in 0..nb {
                    row.push(a.core[i][k].mul_ref(&b.core[j][l]));
                }
            }
            core.push(row);
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
            keys.push(a.keys[i].iter().chain(&b.keys[j]).copied().collect());
        }
    }
    ScaledMatrix {
        i_power: (a.i_power + b.i_power) % 4,
        radicand: &a.radicand * &b.radicand,
        core,
        labels,
        keys,
    }
}

/// The scalar `r` with `a = r · b` entrywise, if one exists.
pub fn proportionality(a: &[Vec<Cyc>], b: &[Vec<Cyc>]) -> Option<Cyc> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let (pi, pj) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !b[i][j].is_zero())?;
    let (ap, bp) = (&a[pi][pj], &b[pi][pj]);
    for i in 0..n {
        if a[i].len() != n || b[i].len() != n {
            return None;
        }
        for j in 0..n {
            if a[i][j].mul_ref(bp) != b[i][j].mul_ref(ap) {
                return None;
            }
        }
    }
    ap.div_ref(bp).ok()
}

/// A permutation `σ` and scalar `r` with `a[i][j] = r · b[σ(i)][σ(j)]`.
pub fn match_up_to_relabel(a: &[Vec<Cyc>], b: &[Vec<Cyc>]) -> Option<(Vec<usize>, Cyc)> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let fa: Vec<Vec<Complex64>> = a.iter().map(|r| r.iter().map(Cyc::to_complex).collect()).collect();
    let fb: Vec<Vec<Complex64>> = b.iter().map(|r| r.iter().map(Cyc::to_complex).collect()).collect();
    let (pi, pj) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !a[i][j].is_zero())?;
    for si in 0..n {
        for sj in 0..n {
            if b[si][sj].is_zero() || (pi == pj) != (si == sj) {
                continue;
            }
            let r = fa[pi][pj] / fb[si][sj];
            let mut sigma = vec![usize::MAX; n];
            let mut used = vec![false; n];
            sigma[pi] = si;
            used[si] = true;
            if pj != pi {
                sigma[pj] = sj;
                used[sj] = true;
            }
            if extend_relabel(&fa, &fb, r, &mut sigma, &mut used, 0) {
                let rr = a[pi][pj].div_ref(&b[si][sj]).ok()?;
                let exact = (0..n).all(|i| (0..n).all(|j| a[i][j] == rr.mul_ref(&b[sigma[i]][sigma[j]])));
                if exact {
                    return Some((sigma, rr));
                }
            }
        }
    }
    None
}

fn extend_relabel(
    fa: &[Vec<Complex64>],
    fb: &[Vec<Complex64>],
    r: Complex64,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    start: usize,
) -> bool {
    let n = fa.len();
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-8 * (1.0 + x.norm());
    let Some(i) = (start..n).find(|&i| sigma[i] == usize::MAX) else {
        return true;
    };
    for c in 0..n {
        if used[c] {
            continue;
        }
        sigma[i] = c;
        let ok = (0..n).filter(|&j| sigma[j] != usize::MAX).all(|j| {
            close(fa[i][j], r * fb[c][sigma[j]]) && close(fa[j][i], r * fb[sigma[j]][c])
        });
        if ok {
            used[c] = true;
            if extend_relabel(fa, fb, r, sigma, used, i + 1) {
                return true;
            }
            used[c] = false;
        }
        sigma[i] = usize::MAX;
    }
    false
}

/// Which elements a Weyl-group sum runs over and how they are weighted.
#[derive(Clone, Debug)]
pub enum SumKind {
    /// `Σ_{w∈W} ε(w) …`.
    Full,
    /// `Σ_{w∈W^sr} ε(w) ⟨w(α_*), x⟩ …` for an integral `x`.
    Subregular { x: Vec<i64> },
}

/// `T[a][b] = Σ_w weight(w) · ζ_N^{−mult · d(L_a, w R_b) / div}` with `div = d`
/// when `reduce_by_d` (requires `(L_a, w R_b) ∈ ℤ`) and `1` otherwise.
#[derive(Clone, Debug)]
pub struct SumSpec {
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
    pub modulus: u64,
    pub mult: i64,
    pub reduce_by_d: bool,
    pub kind: SumKind,
}

struct Prepared {
    dl: Vec<Vec<i64>>,
    nl: usize,
    nr: usize,
    offset: usize,
    modulus: i64,
    mult: i64,
    div: i64,
    x: Option<Vec<i64>>,
}

struct HeavyVisitor<'a> {
    specs: &'a [Prepared],
    init: &'a [Vec<i64>],
    ip: Vec<Vec<i64>>,
    bins: Vec<Vec<i64>>,
    fault: bool,
}

impl<'a> HeavyVisitor<'a> {
    fn new(specs: &'a [Prepared], init: &'a [Vec<i64>]) -> Self {
        HeavyVisitor {
            specs,
            init,
            ip: init.to_vec(),
            bins: specs.iter().map(|s| vec![0; s.nl * s.nr * s.modulus as usize]).collect(),
            fault: false,
        }
    }
}

impl WeylVisitor for HeavyVisitor<'_> {
    fn reflect(&mut self, i: usize, before: &WalkState) {
        for (s, spec) in self.specs.iter().enumerate() {
            let ip = &mut self.ip[s];
            for b in 0..spec.nr {
                let c = before.vecs[spec.offset + b][i];
                if c != 0 {
                    for a in 0..spec.nl {
                        ip[a * spec.nr + b] -= c * spec.dl[a][i];
                    }
                }
            }
        }
    }

    fn visit(&mut self, st: &WalkState) {
        for (s, spec) in self.specs.iter().enumerate() {
            let weight = match &spec.x {
                None => st.sign,
                Some(x) => {
                    let r = &st.roots[0];
                    if r.iter().sum::<i64>() <= 0 {
                        continue;
                    }
                    st.sign * r.iter().zip(x).map(|(a, b)| a * b).sum::<i64>()
                }
            };
            let n = spec.modulus;
            let bins = &mut self.bins[s];
            for (pair, &v) in self.ip[s].iter().enumerate() {
                if v % spec.div != 0 {
                    self.fault = true;
                }
                let e = (-spec.mult * (v / spec.div)).rem_euclid(n) as usize;
                bins[pair * n as usize + e] += weight;
            }
        }
    }

    fn fresh(&self) -> Self {
        HeavyVisitor::new(self.specs, self.init)
    }

    fn merge(&mut self, o: Self) {
        self.fault |= o.fault;
        for (a, b) in self.bins.iter_mut().zip(o.bins) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }
}

/// Evaluates several Weyl-group sums in a single pass over `W`.
/// Returns one `left × right` matrix of cyclotomics per spec.
pub fn weyl_sums(rs: &RootSystem, specs: &[SumSpec], cap: Option<u64>) -> Result<Vec<Vec<Vec<Cyc>>>> {
    let d = rs.form_denominator;
    let mut vecs = Vec::new();
    let mut prepared = Vec::new();
    let mut init = Vec::new();
    for spec in specs {
        let x = match &spec.kind {
            SumKind::Full => None,
            SumKind::Subregular { x } => Some(x.clone()),
        };
        let mut ip0 = Vec::with_capacity(spec.left.len() * spec.right.len());
        for l in &spec.left {
            for r in &spec.right {
                ip0.push(rs.inner_d(l, r));
            }
        }
        init.push(ip0);
        prepared.push(Prepared {
            dl: spec.left.iter().map(|l| l.iter().map(|c| c * d).collect()).collect(),
            nl: spec.left.len(),
            nr: spec.right.len(),
            offset: vecs.len(),
            modulus: spec.modulus as i64,
            mult: spec.mult,
            div: if spec.reduce_by_d { d } else { 1 },
            x,
        });
        vecs.extend(spec.right.iter().cloned());
    }
    let mut astar = vec![0; rs.rank];
    astar[rs.star] = 1;
    let v = walk(rs, &vecs, &[astar], HeavyVisitor::new(&prepared, &init), cap)?;
    if v.fault {
        return Err(Error::Invariant("inner product not integral where the spec requires it".into()));
    }
    Ok(prepared
        .iter()
        .zip(&v.bins)
        .map(|(p, bins)| {
            let n = p.modulus as usize;
            (0..p.nl)
                .map(|a| {
                    (0..p.nr)
                        .map(|b| {
                            let k = (a * p.nr + b) * n;
                            Cyc::from_int_bins(p.modulus as u64, &bins[k..k + n])
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

fn pow_big(base: i64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), e)
}

fn nu_of(kappa: &[i64]) -> Vec<i64> {
    kappa.iter().map(|k| k + 1).collect()
}

/// `K_p`: rows `κ ∈ P₊^{p−h∨}`, `a = |Δ₊|`, `M = p^ℓ |P/Q|`,
/// `core = Σ_w ε(w) ζ_{pd}^{−d(w(κ+ρ), κ'+ρ)}`.
pub fn k_matrix(rs: &RootSystem, p: i64, cap: Option<u64>) -> Result<ScaledMatrix> {
    if p < rs.h_dual {
        return Err(Error::InvalidInput(format!("p = {p} is below h∨ = {}", rs.h_dual)));
    }
    let kappas = enumerate_dominant_ints(rs, p - rs.h_dual);
    let nus: Vec<Vec<i64>> = kappas.iter().map(|k| nu_of(k)).collect();
    let spec = SumSpec {
        left: nus.clone(),
        right: nus,
        modulus: (p * rs.form_denominator) as u64,
        mult: 1,
        reduce_by_d: false,
        kind: SumKind::Full,
    };
    let core = weyl_sums(rs, &[spec], cap)?.remove(0);
    let a = (rs.positive_roots.len() % 4) as u8;
    let m = pow_big(p, rs.rank) * BigInt::from(rs.center_order);
    Ok(ScaledMatrix::new(a, m, core, kappas))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restrict {
    /// `κ ∈ Q`.
    Int,
    /// `κ ∈ −ρ + Q`.
    Z,
}

/// Principal submatrix of `K_p` on `κ ∈ Q` or `κ ∈ −ρ+Q`.
pub fn k_restrict(rs: &RootSystem, k: &ScaledMatrix, mode: Restrict) -> ScaledMatrix {
    let idx: Vec<usize> = (0..k.dim())
        .filter(|&i| {
            let v = match mode {
                Restrict::Int => k.keys[i].clone(),
                Restrict::Z => nu_of(&k.keys[i]),
            };
            rs.in_root_lattice(&v)
        })
        .collect();
    k.submatrix(&idx)
}

/// `K_p^ℤ` computed directly in `Q(ζ_p)`: rows `κ` with `κ + ρ ∈ Q`.
pub fn k_matrix_z(rs: &RootSystem, p: i64, cap: Option<u64>) -> Result<ScaledMatrix> {
    if p < rs.h_dual {
        return Err(Error::InvalidInput(format!("p = {p} is below h∨ = {}", rs.h_dual)));
    }
    let kappas: Vec<Vec<i64>> = enumerate_dominant_ints(rs, p - rs.h_dual)
        .into_iter()
        .filter(|k| rs.in_root_lattice(&nu_of(k)))
        .collect();
    let nus: Vec<Vec<i64>> = kappas.iter().map(|k| nu_of(k)).collect();
    let spec = SumSpec { left: nus.clone(), right: nus, modulus: p as u64, mult: 1, reduce_by_d: true, kind: SumKind::Full };
    let core = weyl_sums(rs, &[spec], cap)?.remove(0);
    let a = (rs.positive_roots.len() % 4) as u8;
    let m = pow_big(p, rs.rank) * BigInt::from(rs.center_order);
    Ok(ScaledMatrix::new(a, m, core, kappas))
}

/// Clears denominators of a rational weight (positive rescaling).
fn integral_multiple(x: &Weight) -> Vec<i64> {
    let l = x.coords.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
    x.coords.iter().map(|c| (c * Q::from_integer(l)).to_integer()).collect()
}

/// `C_q` over `P̌^q_{+,subreg}` with `ε(y^(η))ε(y^(η'))` folded in:
/// `Σ_{w∈W^sr} ε(w) ⟨w(α_*), x⟩/⟨α_*, x⟩ ζ_{qd}^{−d(β, wβ')}`.
/// With `restrict`, only `η ∈ Q` are kept and the result lives in `Q(ζ_q)`.
pub fn c_matrix(rs: &RootSystem, q: i64, x: &Weight, restrict: bool, cap: Option<u64>) -> Result<ScaledMatrix> {
    let xi = integral_multiple(x);
    let ax = xi[rs.star];
    if ax == 0 {
        return Err(Error::InvalidInput("x is orthogonal to α_*".into()));
    }
    let mut etas: Vec<Vec<i64>> = crate::admissible::enumerate_subreg_coweights(rs, q)?
        .iter()
        .map(|w| w.to_ints().expect("integral"))
        .collect();
    if restrict {
        etas.retain(|e| rs.in_root_lattice(e));
    }
    let reps: Vec<Rep> = etas
        .iter()
        .map(|e| Rep::new(rs, vec![0; rs.rank], e.clone()))
        .collect::<Result<_>>()?;
    let betas: Vec<Vec<i64>> = reps.iter().map(|r| r.beta.clone()).collect();
    let modulus = if restrict { q } else { q * rs.form_denominator };
    let spec = SumSpec {
        left: betas.clone(),
        right: betas,
        modulus: modulus as u64,
        mult: 1,
        reduce_by_d: restrict,
        kind: SumKind::Subregular { x: xi },
    };
    let raw = weyl_sums(rs, &[spec], cap)?.remove(0);
    let inv = BigRational::new(BigInt::one(), BigInt::from(ax));
    let core = raw
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, c)| c.scale_rational(&inv).scale_int(reps[i].sign * reps[j].sign))
                .collect()
        })
        .collect();
    Ok(ScaledMatrix::new(0, BigInt::one(), core, etas))
}

fn require_subreg(ld: &LevelData) -> Result<()> {
    if ld.mode != Mode::Subreg {
        return Err(Error::InvalidInput("S-matrices are computed for the subregular mode only".into()));
    }
    Ok(())
}

fn dedup_index(items: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut uniq: Vec<Vec<i64>> = Vec::new();
    let idx = items
        .iter()
        .map(|v| match uniq.iter().position(|u| u == v) {
            Some(i) => i,
            None => {
                uniq.push(v.clone());
                uniq.len() - 1
            }
        })
        .collect();
    (uniq, idx)
}

fn label_keys(labels: &[SubregLabel]) -> Vec<Vec<i64>> {
    labels
        .iter()
        .map(|l| {
            let mut k = l.kappa.to_ints().expect("integral");
            k.extend(l.eta.to_ints().expect("integral"));
            k
        })
        .collect()
}

fn s_radicand(ld: &LevelData) -> BigInt {
    pow_big(ld.p * ld.q, ld.rs.rank) * BigInt::from(ld.rs.center_order)
}

/// The subregular S-matrix on the given labels, computed from the product
/// formula on the root-lattice representatives:
/// `a = 1`, `M = (pq)^ℓ |P/Q|`, `core = εε' · C̃(β,β') · K̃(ν,ν')` where
/// `C̃ = Σ_{W^sr} ε(w)⟨wα_*,x⟩/⟨α_*,x⟩ ζ_{qd}^{−p d(β,wβ')}` and
/// `K̃ = Σ_W ε(u) ζ_{pd}^{−q d(uν,ν')}`.
pub fn s_subreg(ld: &LevelData, labels: &[SubregLabel], x: &Weight, cap: Option<u64>) -> Result<ScaledMatrix> {
    require_subreg(ld)?;
    let rs = &ld.rs;
    let d = rs.form_denominator;
    let xi = integral_multiple(x);
    let ax = xi[rs.star];
    if ax == 0 {
        return Err(Error::InvalidInput("x is orthogonal to α_*".into()));
    }
    let reps: Vec<&Rep> = labels.iter().map(|l| &l.compute).collect();
    let (betas, bi) = dedup_index(&reps.iter().map(|r| r.beta.clone()).collect::<Vec<_>>());
    let (nus, ni) = dedup_index(&reps.iter().map(|r| r.nu()).collect::<Vec<_>>());
    let specs = [
        SumSpec {
            left: betas.clone(),
            right: betas,
            modulus: (ld.q * d) as u64,
            mult: ld.p,
            reduce_by_d: false,
            kind: SumKind::Subregular { x: xi },
        },
        SumSpec { left: nus.clone(), right: nus, modulus: (ld.p * d) as u64, mult: ld.q, reduce_by_d: false, kind: SumKind::Full },
    ];
    let mut sums = weyl_sums(rs, &specs, cap)?;
    let kt = sums.pop().expect("K sum");
    let ct = sums.pop().expect("C sum");
    let inv = BigRational::new(BigInt::one(), BigInt::from(ax));
    let n = labels.len();
    let mut core = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let c = ct[bi[i]][bi[j]].mul_ref(&kt[ni[i]][ni[j]]);
            core[i].push(c.scale_rational(&inv).scale_int(reps[i].sign * reps[j].sign));
        }
    }
    Ok(ScaledMatrix::new(1, s_radicand(ld), core, label_keys(labels)))
}

/// Which factor is restricted to a root-lattice coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FactorCase {
    /// `gcd(q, |P/Q|) = 1`: `S ∼ φ_p(C_q^ℤ) ⊗ φ_q(K_p)`.
    EtaInQ,
    /// `gcd(p, |P/Q|) = 1`: `S ∼ φ_p(C_q) ⊗ φ_q(K_p^ℤ)`.
    NuInQ,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub case: FactorCase,
    /// The Kronecker product of the two Galois-twisted factors.
    pub product: ScaledMatrix,
    /// Row of `product` matched to each label.
    pub perm: Vec<usize>,
    /// `S.core[i][j] = scalar · product.core[perm i][perm j]`.
    pub scalar: Option<Cyc>,
}

/// Builds the Galois-twisted Kronecker factorization of the subregular
/// S-matrix and tests it for exact proportionality with `s`.
pub fn factorization(ld: &LevelData, labels: &[SubregLabel], s: &ScaledMatrix, x: &Weight, cap: Option<u64>) -> Result<Factorization> {
    require_subreg(ld)?;
    let rs = &ld.rs;
    let case = if ld.q.gcd(&rs.center_order) == 1 { FactorCase::EtaInQ } else { FactorCase::NuInQ };
    let (c, k) = match case {
        FactorCase::EtaInQ => (c_matrix(rs, ld.q, x, true, cap)?, k_matrix(rs, ld.p, cap)?),
        FactorCase::NuInQ => (c_matrix(rs, ld.q, x, false, cap)?, k_matrix_z(rs, ld.p, cap)?),
    };
    let product = kron(&galois_matrix(ld.p, &c)?, &galois_matrix(ld.q, &k)?);
    let perm = labels
        .iter()
        .map(|l| {
            let key: Vec<i64> = l.compute.eta.iter().chain(&l.compute.kappa).copied().collect();
            product
                .keys
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Invariant(format!("label {key:?} missing from the factor product")))
        })
        .collect::<Result<Vec<_>>>()?;
    if perm.len() != product.dim() {
        return Err(Error::Invariant(format!("{} labels against {} product rows", perm.len(), product.dim())));
    }
    let permuted: Vec<Vec<Cyc>> = perm.iter().map(|&i| perm.iter().map(|&j| product.core[i][j].clone()).collect()).collect();
    let scalar = proportionality(&s.core, &permuted);
    Ok(Factorization { case, product, perm, scalar })
}

/// `a^B(λ, λ')` as `(core, M)` with value `core/√M`, including the cross terms.
pub fn a_b(ld: &LevelData, r1: &Rep, r2: &Rep, cap: Option<u64>) -> Result<(Cyc, BigInt)> {
    let rs = &ld.rs;
    let d = rs.form_denominator;
    let (nu1, nu2) = (r1.nu(), r2.nu());
    let spec = SumSpec {
        left: vec![nu1.clone()],
        right: vec![nu2.clone()],
        modulus: (ld.p * d) as u64,
        mult: ld.q,
        reduce_by_d: false,
        kind: SumKind::Full,
    };
    let ksum = weyl_sums(rs, &[spec], cap)?.remove(0).remove(0).remove(0);
    let n = (d * ld.p * ld.q) as u64;
    let cross = rs.inner_d(&nu1, &r2.beta) + rs.inner_d(&nu2, &r1.beta);
    let bb = rs.inner_d(&r1.beta, &r2.beta);
    let phase = Cyc::zeta(n, -(cross * ld.p * ld.q) - bb * ld.p * ld.p);
    let core = phase.mul_ref(&ksum).scale_int(r1.sign * r2.sign);
    Ok((core, s_radicand(ld)))
}

/// The subregular S-matrix from `S = i Σ_{y∈W^sr} ⟨yα_*,x⟩/⟨α_*,x⟩ a^B(λ, y∘λ')`,
/// evaluated on the canonical representatives with all cross terms kept.
pub fn s_via_ab(ld: &LevelData, labels: &[SubregLabel], x: &Weight, cap: Option<u64>) -> Result<ScaledMatrix> {
    require_subreg(ld)?;
    let rs = &ld.rs;
    let d = rs.form_denominator;
    let xi = integral_multiple(x);
    let ax = xi[rs.star];
    if ax == 0 {
        return Err(Error::InvalidInput("x is orthogonal to α_*".into()));
    }
    let reps: Vec<Rep> = labels
        .iter()
        .map(|l| Rep {
            kappa: l.kappa.to_ints().expect("integral"),
            eta: l.eta.to_ints().expect("integral"),
            y: l.y_eta.clone(),
            beta: l.beta.to_ints().expect("integral"),
            sign: l.sign,
        })
        .collect();
    let n = reps.len();
    let left: Vec<Vec<i64>> = reps
        .iter()
        .map(|r| r.nu().iter().zip(&r.beta).map(|(v, b)| ld.q * v + ld.p * b).collect())
        .collect();
    let betas: Vec<Vec<i64>> = reps.iter().map(|r| r.beta.clone()).collect();
    let (nus, ni) = dedup_index(&reps.iter().map(|r| r.nu()).collect::<Vec<_>>());
    let specs = [
        SumSpec {
            left,
            right: betas,
            modulus: (ld.q * d) as u64,
            mult: 1,
            reduce_by_d: false,
            kind: SumKind::Subregular { x: xi },
        },
        SumSpec { left: nus.clone(), right: nus, modulus: (ld.p * d) as u64, mult: ld.q, reduce_by_d: false, kind: SumKind::Full },
    ];
    let mut sums = weyl_sums(rs, &specs, cap)?;
    let kt = sums.pop().expect("K sum");
    let wt = sums.pop().expect("W^sr sum");
    let inv = BigRational::new(BigInt::one(), BigInt::from(ax));
    let mut core = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            let cross = Cyc::zeta(d as u64, -rs.inner_d(&reps[j].nu(), &reps[i].beta));
            let c = wt[i][j].mul_ref(&kt[ni[i]][ni[j]]).mul_ref(&cross);
            core[i].push(c.scale_rational(&inv).scale_int(reps[i].sign * reps[j].sign));
        }
    }
    Ok(ScaledMatrix::new(1, s_radicand(ld), core, label_keys(labels)))
}

/// The S-matrix of the Virasoro minimal model `Vir_{p,q}` on Kac labels `(r, s)`,
/// `1 ≤ r ≤ q−1`, `1 ≤ s ≤ p−1`: `a = 0`, `M = 2pq`,
/// `core = (−1)^{sρ+rσ} (ζ_{2q}^{prρ} − ζ_{2q}^{−prρ})(ζ_{2p}^{qsσ} − ζ_{2p}^{−qsσ})`.
pub fn virasoro_s(p: i64, q: i64, pairs: &[(i64, i64)]) -> ScaledMatrix {
    let n = (2 * p * q) as u64;
    let core = pairs
        .iter()
        .map(|&(r, s)| {
            pairs
                .iter()
                .map(|&(rr, ss)| {
                    let a = Cyc::zeta(n, p * p * r * rr).sub_ref(&Cyc::zeta(n, -p * p * r * rr));
                    let b = Cyc::zeta(n, q * q * s * ss).sub_ref(&Cyc::zeta(n, -q * q * s * ss));
                    let sign = if (s * rr + r * ss) % 2 == 0 { 1 } else { -1 };
                    a.mul_ref(&b).scale_int(sign)
                })
                .collect()
        })
        .collect();
    let keys = pairs.iter().map(|&(r, s)| vec![r, s]).collect();
    ScaledMatrix::new(0, BigInt::from(2 * p * q), core, keys)
}

/// `|a|` as a signed big integer helper for reporting.
pub fn radicand_f64(m: &BigInt) -> f64 {
    m.abs().to_f64().unwrap_or(f64::INFINITY)
}

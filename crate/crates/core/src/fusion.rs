//! Fusion rings from S-matrices via the Verlinde formula, quantum dimensions,
//! isomorphism testing and the conjectural D-type rings.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclotomic::Cyc;
use crate::smatrix::ScaledMatrix;
use crate::{Error, Result};

/// A based ring with structure constants `n[i][j][k] = N_{i,j}^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    pub labels: Vec<String>,
    pub identity: usize,
    pub dual: Vec<usize>,
    pub n: Vec<Vec<Vec<i64>>>,
}

impl FusionRing {
    /// Builds a ring, reading duals off `N_{i,j}^identity`, and checks all axioms.
    pub fn new(labels: Vec<String>, identity: usize, n: Vec<Vec<Vec<i64>>>) -> Result<FusionRing> {
        let ring = FusionRing::unchecked(labels, identity, n);
        ring.check()?;
        Ok(ring)
    }

    /// Builds without validation; duals default to the identity map where undetermined.
    pub fn unchecked(labels: Vec<String>, identity: usize, n: Vec<Vec<Vec<i64>>>) -> FusionRing {
        let size = labels.len();
        let dual = (0..size)
            .map(|i| (0..size).find(|&j| n[i][j][identity] == 1).unwrap_or(i))
            .collect();
        FusionRing { labels, identity, dual, n }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Unit, commutativity, duality and associativity.
    pub fn check(&self) -> Result<()> {
        let r = self.len();
        let (e, n) = (self.identity, &self.n);
        let fail = |m: String| Err(Error::Invariant(m));
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if n[i][j][k] < 0 {
                        return fail(format!("negative N[{i}][{j}][{k}]"));
                    }
                    if n[i][j][k] != n[j][i][k] {
                        return fail(format!("N not commutative at ({i},{j},{k})"));
                    }
                    if n[e][j][k] != i64::from(j == k) {
                        return fail(format!("identity fails at ({j},{k})"));
                    }
                }
                let expect = i64::from(j == self.dual[i]);
                if n[i][j][e] != expect {
                    return fail(format!("duality fails: N[{i}][{j}][identity] = {}", n[i][j][e]));
                }
            }
        }
        for i in 0..r {
            if self.dual[self.dual[i]] != i {
                return fail(format!("dual is not an involution at {i}"));
            }
        }
        if self.dual[e] != e {
            return fail("identity is not self-dual".into());
        }
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let lhs: i64 = (0..r).map(|x| n[a][b][x] * n[x][c][d]).sum();
                        let rhs: i64 = (0..r).map(|x| n[b][c][x] * n[a][x][d]).sum();
                        if lhs != rhs {
                            return fail(format!("associativity fails at ({a},{b},{c};{d})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The matrix `(M_i)_{j,k} = N_{i,j}^k` of multiplication by `[i]`.
    pub fn matrix(&self, i: usize) -> Vec<Vec<i64>> {
        self.n[i].clone()
    }

    /// `[i] ⊠ [j]` as `(k, multiplicity)` pairs.
    pub fn product(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        (0..self.len()).filter(|&k| self.n[i][j][k] != 0).map(|k| (k, self.n[i][j][k])).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "labels": self.labels, "identity": self.identity, "dual": self.dual, "N": self.n })
    }

    /// Renders `M_i` with rows `j` and columns `k`.
    pub fn pretty_matrix(&self, i: usize) -> String {
        let mut s = format!("M[{}] = {}\n", i, self.labels[i]);
        for row in &self.n[i] {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>2}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    /// Renders every product `[i] ⊠ [j]` for `i ≤ j`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let terms: Vec<String> = self
                    .product(i, j)
                    .iter()
                    .map(|&(k, m)| if m == 1 { self.labels[k].clone() } else { format!("{m}·{}", self.labels[k]) })
                    .collect();
                s.push_str(&format!("{} ⊠ {} = {}\n", self.labels[i], self.labels[j], terms.join(" ⊕ ")));
            }
        }
        s
    }

    /// The one-element ring.
    pub fn trivial() -> FusionRing {
        FusionRing { labels: vec!["1".into()], identity: 0, dual: vec![0], n: vec![vec![vec![1]]] }
    }

    /// The group ring of `ℤ/m`.
    pub fn cyclic(m: usize) -> FusionRing {
        let n = (0..m)
            .map(|i| (0..m).map(|j| (0..m).map(|k| i64::from((i + j) % m == k)).collect()).collect())
            .collect();
        FusionRing::unchecked((0..m).map(|i| i.to_string()).collect(), 0, n)
    }

    /// The ring with labels permuted: label `i` of the result is label `perm[i]` of `self`.
    pub fn relabel(&self, perm: &[usize]) -> FusionRing {
        let r = self.len();
        let inv = invert_perm(perm);
        let n = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.n[perm[i]][perm[j]][perm[k]]).collect()).collect())
            .collect();
        FusionRing {
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            identity: inv[self.identity],
            dual: (0..r).map(|i| inv[self.dual[perm[i]]]).collect(),
            n,
        }
    }
}

pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn check_square(s: &ScaledMatrix) -> Result<()> {
    if s.core.iter().any(|r| r.len() != s.dim()) {
        return Err(Error::InvalidInput("S is not square".into()));
    }
    Ok(())
}

/// Fusion rules from `N_{X,Y}^Z = Σ_W S_{X,W} S_{Y,W} conj(S_{Z,W}) / S_{V,W}`.
///
/// A floating-point evaluation proposes integer candidates; they are then
/// certified exactly through `Σ_Z N_{X,Y}^Z S_{Z,W} S_{V,W} = S_{X,W} S_{Y,W}`
/// for all `X, Y, W`, which determines `N` uniquely because `S` is unitary
/// (also checked exactly).
pub fn verlinde(s: &ScaledMatrix, vacuum: usize) -> Result<FusionRing> {
    check_square(s)?;
    s.check_unitary()?;
    let r = s.dim();
    if let Some(w) = (0..r).find(|&w| s.core[vacuum][w].is_zero()) {
        return Err(Error::InvalidInput(format!("S[vacuum][{w}] vanishes")));
    }
    let f = s.to_complex();
    let mut n = vec![vec![vec![0i64; r]; r]; r];
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for w in 0..r {
                    acc += f[x][w] * f[y][w] * f[z][w].conj() / f[vacuum][w];
                }
                let k = acc.re.round();
                if (acc - Complex64::new(k, 0.0)).norm() > 1e-6 || k < 0.0 {
                    return Err(Error::Invariant(format!(
                        "Verlinde coefficient N[{}][{}][{}] = {acc} is not a nonnegative integer",
                        s.labels[x], s.labels[y], s.labels[z]
                    )));
                }
                n[x][y][z] = k as i64;
            }
        }
    }
    let prod: Vec<Vec<Cyc>> = (0..r)
        .map(|z| (0..r).map(|w| s.core[z][w].mul_ref(&s.core[vacuum][w])).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|x| (x..r).map(move |y| (x, y))).collect();
    let bad = pairs.par_iter().find_any(|&&(x, y)| {
        (0..r).any(|w| {
            let lhs = s.core[x][w].mul_ref(&s.core[y][w]);
            let mut rhs = Cyc::zero(lhs.order());
            for z in 0..r {
                if n[x][y][z] != 0 {
                    rhs = rhs.add_ref(&prod[z][w].scale_int(n[x][y][z]));
                }
            }
            lhs != rhs
        })
    });
    if let Some(&(x, y)) = bad {
        return Err(Error::Invariant(format!(
            "exact Verlinde check failed for {} ⊠ {}",
            s.labels[x], s.labels[y]
        )));
    }
    let ring = FusionRing::unchecked(s.labels.clone(), vacuum, n);
    ring.check()?;
    let (perm, _) = charge_conjugation(s)?;
    if perm != ring.dual {
        return Err(Error::Invariant("duals from S² disagree with duals from N".into()));
    }
    Ok(ring)
}

/// The permutation `C` and sign `σ` with `core² = σ M C`; for a correctly
/// normalised S one has `S² = C`, i.e. `σ = (−1)^a`.
pub fn charge_conjugation(s: &ScaledMatrix) -> Result<(Vec<usize>, i64)> {
    let r = s.dim();
    let m = BigRational::from(s.radicand.clone());
    let mut perm = vec![usize::MAX; r];
    let mut sign = 0i64;
    for i in 0..r {
        for j in 0..r {
            let mut acc = Cyc::zero(s.core[0][0].order());
            for k in 0..r {
                acc = acc.add_ref(&s.core[i][k].mul_ref(&s.core[k][j]));
            }
            let v = acc
                .to_rational()
                .ok_or_else(|| Error::Invariant(format!("S² entry ({i},{j}) is not rational")))?;
            if v.is_zero() {
                continue;
            }
            let sg = if v.is_positive() { 1 } else { -1 };
            if v.abs() != m || perm[i] != usize::MAX || (sign != 0 && sign != sg) {
                return Err(Error::Invariant(format!("S² is not a signed permutation at ({i},{j})")));
            }
            sign = sg;
            perm[i] = j;
        }
    }
    if perm.iter().any(|&p| p == usize::MAX) || invert_perm(&perm) != perm {
        return Err(Error::Invariant("S² is not an involutive permutation".into()));
    }
    Ok((perm, sign))
}

/// `qdim(L) = S_{V,L} / S_{V,V}`.
pub fn quantum_dimensions(s: &ScaledMatrix, vacuum: usize) -> Result<Vec<Cyc>> {
    let inv = s.core[vacuum][vacuum].invert()?;
    Ok(s.core[vacuum].iter().map(|x| x.mul_ref(&inv)).collect())
}

/// Checks `qdim(X) qdim(Y) = Σ_Z N_{X,Y}^Z qdim(Z)` exactly.
pub fn check_qdim_homomorphism(ring: &FusionRing, qd: &[Cyc]) -> Result<()> {
    let r = ring.len();
    for x in 0..r {
        for y in x..r {
            let lhs = qd[x].mul_ref(&qd[y]);
            let mut rhs = Cyc::zero(lhs.order());
            for z in 0..r {
                if ring.n[x][y][z] != 0 {
                    rhs = rhs.add_ref(&qd[z].scale_int(ring.n[x][y][z]));
                }
            }
            if lhs != rhs {
                return Err(Error::Invariant(format!("qdim is not multiplicative at ({x},{y})")));
            }
        }
    }
    Ok(())
}

fn signature(f: &FusionRing, i: usize) -> (bool, Vec<i64>, Vec<i64>) {
    let mut all: Vec<i64> = f.n[i].iter().flatten().copied().collect();
    all.sort_unstable();
    let mut sq = f.n[i][i].clone();
    sq.sort_unstable();
    (f.dual[i] == i, all, sq)
}

/// A bijection `σ` with `N₁[i][j][k] = N₂[σi][σj][σk]`, identity and duals preserved.
pub fn ring_isomorphic(f1: &FusionRing, f2: &FusionRing) -> Option<Vec<usize>> {
    let r = f1.len();
    if f2.len() != r {
        return None;
    }
    let s1: Vec<_> = (0..r).map(|i| signature(f1, i)).collect();
    let s2: Vec<_> = (0..r).map(|i| signature(f2, i)).collect();
    let mut a = s1.clone();
    let mut b = s2.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let mut sigma = vec![usize::MAX; r];
    let mut used = vec![false; r];
    sigma[f1.identity] = f2.identity;
    used[f2.identity] = true;
    let order: Vec<usize> = (0..r).filter(|&i| i != f1.identity).collect();
    fn consistent(f1: &FusionRing, f2: &FusionRing, sigma: &[usize]) -> bool {
        let r = f1.len();
        let set: Vec<usize> = (0..r).filter(|&i| sigma[i] != usize::MAX).collect();
        for &i in &set {
            let di = f1.dual[i];
            if sigma[di] != usize::MAX && sigma[di] != f2.dual[sigma[i]] {
                return false;
            }
            for &j in &set {
                for &k in &set {
                    if f1.n[i][j][k] != f2.n[sigma[i]][sigma[j]][sigma[k]] {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(
        f1: &FusionRing,
        f2: &FusionRing,
        s1: &[(bool, Vec<i64>, Vec<i64>)],
        s2: &[(bool, Vec<i64>, Vec<i64>)],
        order: &[usize],
        pos: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for c in 0..f2.len() {
            if used[c] || s1[i] != s2[c] {
                continue;
            }
            sigma[i] = c;
            used[c] = true;
            if consistent(f1, f2, sigma) && rec(f1, f2, s1, s2, order, pos + 1, sigma, used) {
                return true;
            }
            used[c] = false;
            sigma[i] = usize::MAX;
        }
        false
    }
    if !consistent(f1, f2, &sigma) {
        return None;
    }
    if rec(f1, f2, &s1, &s2, &order, 0, &mut sigma, &mut used) {
        Some(sigma)
    } else {
        None
    }
}

/// `F₁ ⊗ F₂` with label `(i, j)` at index `i · |F₂| + j`.
pub fn tensor_ring(f1: &FusionRing, f2: &FusionRing) -> FusionRing {
    let (r1, r2) = (f1.len(), f2.len());
    let r = r1 * r2;
    let mut n = vec![vec![vec![0i64; r]; r]; r];
    for (a, row) in n.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            for (c, v) in cell.iter_mut().enumerate() {
                *v = f1.n[a / r2][b / r2][c / r2] * f2.n[a % r2][b % r2][c % r2];
            }
        }
    }
    let labels = (0..r).map(|a| format!("{}⊗{}", f1.labels[a / r2], f2.labels[a % r2])).collect();
    FusionRing {
        labels,
        identity: f1.identity * r2 + f2.identity,
        dual: (0..r).map(|a| f1.dual[a / r2] * r2 + f2.dual[a % r2]).collect(),
        n,
    }
}

/// The conjectured ring on `r = 3m−1` labels `[0], …, [r−1]` with
/// `[i]⊠[j] = ⊕ [k]` over `|i−j| ≤ k ≤ min(i+j, r−i−j)`, `k ≡ i+j (mod 2)`.
/// Returned unchecked; call [`FusionRing::check`] to test the axioms.
pub fn dtype_conjecture_ring(m: usize) -> FusionRing {
    let r = 3 * m as i64 - 1;
    let size = r as usize;
    let n = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|k| {
                            let ok = (i - j).abs() <= k && k <= (i + j).min(r - i - j) && (k - i - j) % 2 == 0;
                            i64::from(ok)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    FusionRing::unchecked((0..size).map(|i| format!("[{i}]")).collect(), 0, n)
}

/// The truncated Clebsch-Gordan ring at level `k`: labels `[0], …, [k]` and
/// `[i]⊠[j] = ⊕ [l]` over `|i−j| ≤ l ≤ min(i+j, 2k−i−j)`, `l ≡ i+j (mod 2)`.
pub fn su2_fusion_ring(k: usize) -> FusionRing {
    let k = k as i64;
    let n = (0..=k)
        .map(|i| {
            (0..=k)
                .map(|j| {
                    (0..=k)
                        .map(|l| i64::from((i - j).abs() <= l && l <= (i + j).min(2 * k - i - j) && (l - i - j) % 2 == 0))
                        .collect()
                })
                .collect()
        })
        .collect();
    FusionRing::unchecked((0..=k).map(|i| format!("[{i}]")).collect(), 0, n)
}

/// Converts a matrix whose Gram matrix `core · core*` is a positive rational
/// multiple of the identity into a [`ScaledMatrix`] with `a = 0`.
pub fn normalize_unitary(core: Vec<Vec<Cyc>>, keys: Vec<Vec<i64>>) -> Result<ScaledMatrix> {
    let r = core.len();
    let mut g = Cyc::zero(core[0][0].order());
    for k in 0..r {
        g = g.add_ref(&core[0][k].mul_ref(&core[0][k].conj()));
    }
    let g = g
        .to_rational()
        .ok_or_else(|| Error::Invariant("row norm is not rational".into()))?;
    if !g.is_positive() {
        return Err(Error::Invariant("zero row".into()));
    }
    let den = g.denom().clone();
    let scaled: Vec<Vec<Cyc>> = if den == BigInt::from(1) {
        core
    } else {
        let f = BigRational::from(den.clone());
        core.iter().map(|r| r.iter().map(|x| x.scale_rational(&f)).collect()).collect()
    };
    let m = (g * BigRational::from(&den * &den)).to_integer();
    let s = ScaledMatrix::new(0, m, scaled, keys);
    s.check_unitary()?;
    Ok(s)
}

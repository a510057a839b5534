//! Simply-laced root systems, weights, and the group of diagram automorphisms.
//!
//! Indices are 0-based internally: slot `i` holds the label of `α_{i+1}`.
//! Weights live in the fundamental-weight basis, roots in simple-root
//! coordinates. Labelling follows Bourbaki (for `E_n`, node 2 hangs off node 4).

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{fmt_q, Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            _ => Err(Error::Unsupported(format!(
                "family {s:?}; only simply-laced A, D, E are computed"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

/// A weight (or coweight) in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Q>,
}

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight { coords: vec![Q::zero(); rank] }
    }

    pub fn from_ints(v: &[i64]) -> Weight {
        Weight { coords: v.iter().map(|&x| Q::from_integer(x)).collect() }
    }

    pub fn fundamental(rank: usize, i: usize) -> Weight {
        let mut w = Weight::zero(rank);
        w.coords[i] = Q::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Integer coordinates, if integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: Q) -> Weight {
        Weight { coords: self.coords.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Weight {
        self.scale(-Q::one())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(fmt_q).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Immutable datum of a simply-laced root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    /// `(ϖ_i, ϖ_j)`.
    pub gram: Vec<Vec<Q>>,
    /// `d · (ϖ_i, ϖ_j)`, integral.
    pub gram_d: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    pub marks: Vec<i64>,
    pub h: i64,
    pub h_dual: i64,
    /// Indices with mark 1.
    pub j_set: Vec<usize>,
    pub center_order: i64,
    pub form_denominator: i64,
    /// `(j, π̄_j)` for `j ∈ J`, matrices acting on fundamental-weight coordinates.
    pub pibar: Vec<(usize, Vec<Vec<i64>>)>,
    pub star: usize,
}

fn cartan_from_edges(rank: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    a
}

/// Inverse of an integer matrix over the rationals (Gauss-Jordan).
pub fn invert_integer_matrix(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut c = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] != 0 {
                for j in 0..m {
                    c[i][j] += a[i][t] * b[t][j];
                }
            }
        }
    }
    c
}

pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

impl RootSystem {
    /// Builds `family_rank`; `star_override` is a 1-based node index, legal for type A only.
    pub fn new(family: Family, rank: usize, star_override: Option<usize>) -> Result<RootSystem> {
        let (edges, default_star): (Vec<(usize, usize)>, usize) = match family {
            Family::A => {
                if rank < 1 {
                    return Err(Error::Unsupported("A_0".into()));
                }
                ((0..rank - 1).map(|i| (i, i + 1)).collect(), (rank + 2) / 2 - 1)
            }
            Family::D => {
                if rank < 4 {
                    return Err(Error::Unsupported(format!("D_{rank} (need rank >= 4)")));
                }
                let mut e: Vec<_> = (0..rank - 2).map(|i| (i, i + 1)).collect();
                e.push((rank - 3, rank - 1));
                (e, rank - 3)
            }
            Family::E => {
                if !(6..=8).contains(&rank) {
                    return Err(Error::Unsupported(format!("E_{rank}")));
                }
                let mut e = vec![(0, 2), (2, 3), (1, 3)];
                e.extend((3..rank - 1).map(|i| (i, i + 1)));
                (e, 3)
            }
        };
        let star = match star_override {
            None => default_star,
            Some(s) => {
                if family != Family::A {
                    return Err(Error::InvalidInput(
                        "the distinguished node can only be overridden in type A".into(),
                    ));
                }
                if s < 1 || s > rank {
                    return Err(Error::InvalidInput(format!(
                        "star index {s} out of range 1..={rank}"
                    )));
                }
                s - 1
            }
        };
        let cartan = cartan_from_edges(rank, &edges);
        let positive_roots = positive_roots(&cartan);
        let theta = positive_roots.last().cloned().expect("nonempty");
        let h = theta.iter().sum::<i64>() + 1;
        let gram = invert_integer_matrix(&cartan).expect("Cartan matrix is invertible");
        let form_denominator = gram
            .iter()
            .flatten()
            .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        let gram_d = gram
            .iter()
            .map(|r| r.iter().map(|x| (x * form_denominator).to_integer()).collect())
            .collect();
        let j_set: Vec<usize> = (0..rank).filter(|&i| theta[i] == 1).collect();
        let mut rs = RootSystem {
            family,
            rank,
            cartan,
            positive_roots,
            gram,
            gram_d,
            marks: theta.clone(),
            theta,
            h,
            h_dual: h,
            center_order: j_set.len() as i64 + 1,
            j_set,
            form_denominator,
            pibar: Vec::new(),
            star,
        };
        rs.pibar = rs.j_set.iter().map(|&j| (j, rs.construct_pibar(j))).collect();
        Ok(rs)
    }

    pub fn from_name(name: &str, star_override: Option<usize>) -> Result<RootSystem> {
        let mut chars = name.chars();
        let f = chars.next().ok_or_else(|| Error::InvalidInput("empty type".into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad type name {name:?}")))?;
        if matches!(f, 'B' | 'C' | 'F' | 'G' | 'b' | 'c' | 'f' | 'g') {
            return Err(Error::Unsupported(format!(
                "{name}: non-simply-laced types are reference data only"
            )));
        }
        RootSystem::new(Family::parse(&f.to_string())?, rank, star_override)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// `|W|`.
    pub fn weyl_order(&self) -> u64 {
        let l = self.rank as u64;
        let fact = |n: u64| (1..=n).product::<u64>();
        match (self.family, self.rank) {
            (Family::A, _) => fact(l + 1),
            (Family::D, _) => (1u64 << (l - 1)) * fact(l),
            (Family::E, 6) => 51_840,
            (Family::E, 7) => 2_903_040,
            _ => 696_729_600,
        }
    }

    pub fn dim(&self) -> i64 {
        self.rank as i64 + 2 * self.positive_roots.len() as i64
    }

    /// Root in simple coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, c: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|j| (0..self.rank).map(|i| c[i] * self.cartan[i][j]).sum()).collect()
    }

    /// Simple-root coordinates of an integral weight, if it lies in the root lattice.
    pub fn weight_to_root(&self, v: &[i64]) -> Option<Vec<i64>> {
        let d = self.form_denominator;
        let mut out = Vec::with_capacity(self.rank);
        for row in &self.gram_d {
            let s: i64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            if s % d != 0 {
                return None;
            }
            out.push(s / d);
        }
        Some(out)
    }

    pub fn in_root_lattice(&self, v: &[i64]) -> bool {
        self.weight_to_root(v).is_some()
    }

    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank])
    }

    pub fn theta_weight(&self) -> Weight {
        Weight::from_ints(&self.root_to_weight(&self.theta))
    }

    pub fn alpha(&self, i: usize) -> Vec<i64> {
        self.cartan[i].clone()
    }

    pub fn alpha_star(&self) -> Weight {
        Weight::from_ints(&self.alpha(self.star))
    }

    /// `x₀ = ρ − ϖ_*`.
    pub fn x0(&self) -> Weight {
        let mut v = vec![1i64; self.rank];
        v[self.star] = 0;
        Weight::from_ints(&v)
    }

    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                s += a.coords[i] * self.gram[i][j] * b.coords[j];
            }
        }
        s
    }

    /// `d · (a, b)` for integral weights.
    pub fn inner_d(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram_d[i][j] * b[j];
            }
        }
        s
    }

    /// Simple reflection `s_i` on fundamental-weight coordinates, in place.
    pub fn reflect_weight_in_place(&self, i: usize, v: &mut [i64]) {
        let c = v[i];
        if c != 0 {
            for (j, x) in v.iter_mut().enumerate() {
                *x -= c * self.cartan[i][j];
            }
        }
    }

    /// Simple reflection on simple-root coordinates, in place.
    pub fn reflect_root_in_place(&self, i: usize, c: &mut [i64]) {
        let pairing: i64 = (0..self.rank).map(|j| c[j] * self.cartan[j][i]).sum();
        c[i] -= pairing;
    }

    pub fn reflection_matrix(&self, k: usize) -> Vec<Vec<i64>> {
        let mut m = identity_matrix(self.rank);
        for (j, row) in m.iter_mut().enumerate() {
            row[k] -= self.cartan[k][j];
        }
        m
    }

    /// Matrix of `s_{i_n} ⋯ s_{i_1}` for `word = [i_1, …, i_n]`.
    pub fn word_matrix(&self, word: &[usize]) -> Vec<Vec<i64>> {
        let mut m = identity_matrix(self.rank);
        for &i in word {
            m = mat_mul(&self.reflection_matrix(i), &m);
        }
        m
    }

    /// Word for the longest element of the parabolic subgroup on `nodes`.
    fn parabolic_longest_word(&self, nodes: &[usize]) -> Vec<usize> {
        let mut v: Vec<i64> = (0..self.rank).map(|i| if nodes.contains(&i) { -1 } else { 0 }).collect();
        let mut word = Vec::new();
        while let Some(&i) = nodes.iter().find(|&&i| v[i] < 0) {
            self.reflect_weight_in_place(i, &mut v);
            word.push(i);
        }
        word
    }

    fn construct_pibar(&self, j: usize) -> Vec<Vec<i64>> {
        let all: Vec<usize> = (0..self.rank).collect();
        let others: Vec<usize> = all.iter().copied().filter(|&i| i != j).collect();
        let w0 = self.word_matrix(&self.parabolic_longest_word(&all));
        let wj = self.word_matrix(&self.parabolic_longest_word(&others));
        for cand in [mat_mul(&wj, &w0), mat_mul(&w0, &wj)] {
            if self.is_pibar(&cand, j) {
                return cand;
            }
        }
        panic!("no diagram-automorphism element for node {j}")
    }

    fn is_pibar(&self, m: &[Vec<i64>], j: usize) -> bool {
        let neg_theta: Vec<i64> = self.theta_weight().to_ints().unwrap().iter().map(|x| -x).collect();
        let mut set: Vec<Vec<i64>> = (0..self.rank).map(|i| self.alpha(i)).collect();
        set.push(neg_theta.clone());
        if mat_vec(m, &neg_theta) != self.alpha(j) {
            return false;
        }
        set.iter().all(|v| set.contains(&mat_vec(m, v)))
    }

    /// Identity followed by `(j, π̄_j, ϖ_j)`.
    pub fn wtilde_plus(&self) -> Vec<WtildeElement> {
        let mut out = vec![WtildeElement {
            node: None,
            pibar: identity_matrix(self.rank),
            translation: vec![0; self.rank],
        }];
        for (j, m) in &self.pibar {
            let mut t = vec![0; self.rank];
            t[*j] = 1;
            out.push(WtildeElement { node: Some(*j), pibar: m.clone(), translation: t });
        }
        out
    }

    /// Finds the unique `π ∈ W̃₊` with `π(μ)` in the root lattice at the given level.
    pub fn shift_to_root_lattice(&self, mu: &[i64], level: i64) -> Result<(WtildeElement, Vec<i64>)> {
        if num_integer::gcd(level, self.center_order) != 1 {
            return Err(Error::InvalidInput(format!(
                "level {level} is not coprime to |P/Q| = {}",
                self.center_order
            )));
        }
        let mut hits = self
            .wtilde_plus()
            .into_iter()
            .map(|p| {
                let img = p.act(mu, level);
                (p, img)
            })
            .filter(|(_, img)| self.in_root_lattice(img));
        let first = hits.next().ok_or_else(|| Error::Invariant("orbit misses Q".into()))?;
        if hits.next().is_some() {
            return Err(Error::Invariant("orbit meets Q twice".into()));
        }
        Ok(first)
    }
}

/// `π_j = t_{ϖ_j} π̄_j`, acting on level-`L` data by `μ ↦ π̄_j μ + L ϖ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WtildeElement {
    pub node: Option<usize>,
    pub pibar: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl WtildeElement {
    pub fn act(&self, mu: &[i64], level: i64) -> Vec<i64> {
        mat_vec(&self.pibar, mu)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, t)| a + level * t)
            .collect()
    }
}

/// Positive roots in simple coordinates by closure under adding simple roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut frontier = roots.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| r[j] * cartan[j][i]).sum();
                if pairing < 0 {
                    let mut s = r.clone();
                    s[i] += 1;
                    if !next.contains(&s) && !roots.contains(&s) {
                        next.push(s);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        frontier = next;
    }
    roots.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(a.cmp(b)));
    roots
}

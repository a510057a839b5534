//! Weyl group elements and streaming enumeration.
//!
//! Elements are enumerated as the orbit of `ρ`. The canonical parent of
//! `ν ≠ ρ` is `s_j ν` with `j` the smallest index where `⟨ν, α_j∨⟩ < 0`, which
//! turns the orbit into a tree rooted at `ρ`; children are obtained by left
//! multiplication by a simple reflection. No hashing is needed.

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;
use rayon::prelude::*;

use crate::rootsystem::{identity_matrix, mat_mul, mat_vec, RootSystem, Weight};
use crate::{Error, Result, Q};

/// Default enumeration cap: the order of `W(E₇)`.
pub const DEFAULT_CAP: u64 = 2_903_040;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on fundamental-weight coordinates: `(wλ)_i = Σ_j m[i][j] λ_j`.
    pub matrix: Vec<Vec<i64>>,
    pub sign: i64,
    /// Product-order word: `w = s_{word[0]} s_{word[1]} ⋯`.
    pub word: Option<Vec<usize>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> WeylElement {
        WeylElement { matrix: identity_matrix(rank), sign: 1, word: Some(Vec::new()) }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> WeylElement {
        WeylElement { matrix: rs.reflection_matrix(i), sign: -1, word: Some(vec![i]) }
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> WeylElement {
        let mut m = identity_matrix(rs.rank);
        for &i in word {
            m = mat_mul(&m, &rs.reflection_matrix(i));
        }
        let sign = if word.len() % 2 == 0 { 1 } else { -1 };
        WeylElement { matrix: m, sign, word: Some(word.to_vec()) }
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        WeylElement { matrix: mat_mul(&self.matrix, &other.matrix), sign: self.sign * other.sign, word }
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    pub fn apply(&self, lambda: &Weight) -> Weight {
        let coords = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&lambda.coords)
                    .fold(Q::zero(), |acc, (m, x)| acc + Q::from_integer(*m) * x)
            })
            .collect();
        Weight { coords }
    }

    /// `w ∘ λ = w(λ + ρ) − ρ`.
    pub fn dot(&self, rs: &RootSystem, lambda: &Weight) -> Weight {
        let rho = rs.rho();
        self.apply(&lambda.add(&rho)).sub(&rho)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity_matrix(self.matrix.len())
    }
}

/// `ε(w)` by counting positive roots sent to negative roots.
pub fn sign_by_inversions(rs: &RootSystem, w: &WeylElement) -> i64 {
    let mut neg = 0;
    for r in &rs.positive_roots {
        let img = w.apply_ints(&rs.root_to_weight(r));
        let c = rs.weight_to_root(&img).expect("roots map to roots");
        if c.iter().any(|&x| x < 0) {
            neg += 1;
        }
    }
    if neg % 2 == 0 {
        1
    } else {
        -1
    }
}

/// True iff `w(α_*)` is a positive root.
pub fn in_wsr(rs: &RootSystem, w: &WeylElement) -> bool {
    let img = w.apply_ints(&rs.alpha(rs.star));
    rs.weight_to_root(&img).expect("root").iter().all(|&x| x >= 0)
}

/// Some `w` with `w(source) = target`, found by breadth-first search over the
/// orbit with generators tried in increasing index order.
pub fn element_mapping_root(rs: &RootSystem, source: &Weight, target: &Weight) -> Result<WeylElement> {
    let src = source
        .to_ints()
        .ok_or_else(|| Error::InvalidInput("source must be integral".into()))?;
    let tgt = target
        .to_ints()
        .ok_or_else(|| Error::InvalidInput("target must be integral".into()))?;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<(Vec<i64>, Vec<usize>)> = VecDeque::new();
    seen.insert(src.clone());
    queue.push_back((src, Vec::new()));
    while let Some((v, applied)) = queue.pop_front() {
        if v == tgt {
            let word: Vec<usize> = applied.iter().rev().copied().collect();
            return Ok(WeylElement::from_word(rs, &word));
        }
        for i in 0..rs.rank {
            let mut u = v.clone();
            rs.reflect_weight_in_place(i, &mut u);
            if seen.insert(u.clone()) {
                let mut a = applied.clone();
                a.push(i);
                queue.push_back((u, a));
            }
        }
    }
    Err(Error::InvalidInput(format!("{source} and {target} are not in the same Weyl orbit")))
}

fn check_cap(rs: &RootSystem, cap: Option<u64>) -> Result<()> {
    let order = rs.weyl_order();
    if let Some(cap) = cap {
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
    }
    Ok(())
}

/// Breadth-first enumeration of `W`, by length with ties broken by parent
/// order then generator index. `cap = None` lifts the size limit.
pub fn enumerate(rs: &RootSystem, cap: Option<u64>) -> Result<WeylStream<'_>> {
    check_cap(rs, cap)?;
    let id = StreamNode { mu: vec![1; rs.rank], matrix: identity_matrix(rs.rank), word: Vec::new() };
    Ok(WeylStream { rs, level: vec![id], pos: 0, length: 0 })
}

struct StreamNode {
    mu: Vec<i64>,
    matrix: Vec<Vec<i64>>,
    word: Vec<usize>,
}

pub struct WeylStream<'a> {
    rs: &'a RootSystem,
    level: Vec<StreamNode>,
    pos: usize,
    length: usize,
}

/// Canonical children of an orbit point: generators `i` such that `s_i μ` has `μ` as its canonical parent.
fn children<'a>(rs: &'a RootSystem, mu: &[i64]) -> impl Iterator<Item = usize> + 'a {
    let mu = mu.to_vec();
    (0..rs.rank).filter(move |&i| {
        mu[i] > 0 && (0..i).all(|j| mu[j] - mu[i] * rs.cartan[i][j] >= 0)
    })
}

impl Iterator for WeylStream<'_> {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        if self.pos == self.level.len() {
            let rs = self.rs;
            let mut next = Vec::new();
            for node in &self.level {
                for i in children(rs, &node.mu) {
                    let mut mu = node.mu.clone();
                    rs.reflect_weight_in_place(i, &mut mu);
                    let mut word = Vec::with_capacity(node.word.len() + 1);
                    word.push(i);
                    word.extend_from_slice(&node.word);
                    next.push(StreamNode { mu, matrix: mat_mul(&rs.reflection_matrix(i), &node.matrix), word });
                }
            }
            if next.is_empty() {
                return None;
            }
            self.level = next;
            self.pos = 0;
            self.length += 1;
        }
        let node = &self.level[self.pos];
        self.pos += 1;
        Some(WeylElement {
            matrix: node.matrix.clone(),
            sign: if self.length % 2 == 0 { 1 } else { -1 },
            word: Some(node.word.clone()),
        })
    }
}

/// Mutable state carried along the enumeration tree.
///
/// `vecs` are tracked in fundamental-weight coordinates and `roots` in
/// simple-root coordinates; both hold `w(v)` for the current `w`.
#[derive(Clone, Debug)]
pub struct WalkState {
    pub mu: Vec<i64>,
    pub sign: i64,
    pub length: usize,
    pub vecs: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
}

/// Accumulator driven by [`walk`].
pub trait WeylVisitor: Send + Sync + Sized {
    /// Called with the state just before `s_i` is applied on the left.
    /// Applying it twice in a row must be the identity on derived data.
    fn reflect(&mut self, _i: usize, _before: &WalkState) {}
    fn visit(&mut self, state: &WalkState);
    /// A copy positioned at the identity with empty accumulators.
    fn fresh(&self) -> Self;
    fn merge(&mut self, other: Self);
}

struct Walker<'a> {
    rs: &'a RootSystem,
    nbrs: Vec<Vec<usize>>,
}

impl Walker<'_> {
    fn apply<V: WeylVisitor>(&self, i: usize, st: &mut WalkState, v: &mut V) {
        v.reflect(i, st);
        for x in std::iter::once(&mut st.mu).chain(st.vecs.iter_mut()) {
            let c = x[i];
            if c != 0 {
                x[i] = -c;
                for &j in &self.nbrs[i] {
                    x[j] += c;
                }
            }
        }
        for r in st.roots.iter_mut() {
            let mut s = -r[i];
            for &j in &self.nbrs[i] {
                s += r[j];
            }
            r[i] = s;
        }
        st.sign = -st.sign;
    }

    fn child_ok(&self, mu: &[i64], i: usize) -> bool {
        mu[i] > 0 && (0..i).all(|j| mu[j] - mu[i] * self.rs.cartan[i][j] >= 0)
    }

    fn dfs<V: WeylVisitor>(&self, st: &mut WalkState, v: &mut V) {
        v.visit(st);
        for i in 0..self.rs.rank {
            if self.child_ok(&st.mu, i) {
                self.apply(i, st, v);
                st.length += 1;
                self.dfs(st, v);
                st.length -= 1;
                self.apply(i, st, v);
            }
        }
    }
}

/// Application-order words of the tree nodes at the first depth holding at
/// least `min_parts` nodes, plus every shallower node. Deterministic.
pub fn frontier(rs: &RootSystem, min_parts: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut shallow = Vec::new();
    let mut level: Vec<(Vec<i64>, Vec<usize>)> = vec![(vec![1; rs.rank], Vec::new())];
    loop {
        if level.len() >= min_parts {
            break;
        }
        let mut next = Vec::new();
        for (mu, word) in &level {
            for i in children(rs, mu) {
                let mut m = mu.clone();
                rs.reflect_weight_in_place(i, &mut m);
                let mut w = word.clone();
                w.push(i);
                next.push((m, w));
            }
        }
        if next.is_empty() {
            break;
        }
        shallow.extend(level.into_iter().map(|(_, w)| w));
        level = next;
    }
    (shallow, level.into_iter().map(|(_, w)| w).collect())
}

/// Visits every element of `W` once, tracking images of `vecs` (weight
/// coordinates) and `roots` (root coordinates). Subtrees below a fixed
/// frontier are processed in parallel and merged; because accumulation is
/// exact and commutative the result does not depend on the thread count.
pub fn walk<V: WeylVisitor>(
    rs: &RootSystem,
    vecs: &[Vec<i64>],
    roots: &[Vec<i64>],
    visitor: V,
    cap: Option<u64>,
) -> Result<V> {
    check_cap(rs, cap)?;
    let nbrs: Vec<Vec<usize>> = (0..rs.rank)
        .map(|i| (0..rs.rank).filter(|&j| j != i && rs.cartan[i][j] != 0).collect())
        .collect();
    let walker = Walker { rs, nbrs };
    let init = WalkState {
        mu: vec![1; rs.rank],
        sign: 1,
        length: 0,
        vecs: vecs.to_vec(),
        roots: roots.to_vec(),
    };
    let parts = (4 * rayon::current_num_threads()).max(8);
    let (shallow, deep) = frontier(rs, parts);
    let proto = visitor.fresh();
    let replay = |word: &[usize]| -> (WalkState, V) {
        let mut st = init.clone();
        let mut v = proto.fresh();
        for &i in word {
            walker.apply(i, &mut st, &mut v);
            st.length += 1;
        }
        (st, v)
    };
    let mut acc = visitor;
    for w in &shallow {
        let (st, mut v) = replay(w);
        v.visit(&st);
        acc.merge(v);
    }
    let results: Vec<V> = deep
        .par_iter()
        .map(|w| {
            let (mut st, mut v) = replay(w);
            walker.dfs(&mut st, &mut v);
            v
        })
        .collect();
    for r in results {
        acc.merge(r);
    }
    Ok(acc)
}

/// Counts elements and their signed sum; a cheap consistency probe of [`walk`].
#[derive(Clone, Default)]
pub struct CountVisitor {
    pub count: u64,
    pub signed: i64,
    pub wsr: u64,
}

impl WeylVisitor for CountVisitor {
    fn visit(&mut self, st: &WalkState) {
        self.count += 1;
        self.signed += st.sign;
        if let Some(r) = st.roots.first() {
            if r.iter().sum::<i64>() > 0 {
                self.wsr += 1;
            }
        }
    }
    fn fresh(&self) -> Self {
        CountVisitor::default()
    }
    fn merge(&mut self, o: Self) {
        self.count += o.count;
        self.signed += o.signed;
        self.wsr += o.wsr;
    }
}

/// `(|W|, Σ ε(w), |W^sr|)` via the streaming walk.
pub fn count_streaming(rs: &RootSystem, cap: Option<u64>) -> Result<(u64, i64, u64)> {
    let mut astar = vec![0; rs.rank];
    astar[rs.star] = 1;
    let v = walk(rs, &[], &[astar], CountVisitor::default(), cap)?;
    Ok((v.count, v.signed, v.wsr))
}

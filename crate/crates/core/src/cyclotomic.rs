//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is `(Σ_j num[j] ζ_N^j) / den` with `deg < φ(N)`, reduced modulo
//! `Φ_N`, `den > 0` and `gcd(num, den) = 1`, so equality of elements of the
//! same order is equality of fields. Mixed orders embed into the lcm.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// `Φ_N = x^φ + Σ terms`, stored as the sparse lower part.
#[derive(Debug)]
struct CycloPoly {
    phi: usize,
    lower: Vec<(usize, i64)>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both monic, integer coefficients, lowest degree first.
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0i64; r.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn];
        q[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                r[k + j] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn cyclotomic_dense(n: u64) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_dense(d));
        }
    }
    p
}

fn cyclo(n: u64) -> Arc<CycloPoly> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&n) {
        return c.clone();
    }
    let dense = cyclotomic_dense(n);
    let phi = dense.len() - 1;
    let lower = dense[..phi].iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect();
    let c = Arc::new(CycloPoly { phi, lower });
    cache.lock().unwrap().insert(n, c.clone());
    c
}

/// Euler's totient.
pub fn totient(n: u64) -> usize {
    cyclo(n).phi
}

/// Reduces an integer polynomial modulo `Φ_N` in `i128`; `None` on overflow.
fn reduce_small(mut a: Vec<i128>, cp: &CycloPoly) -> Option<Vec<i128>> {
    let phi = cp.phi;
    for k in (phi..a.len()).rev() {
        let c = a[k];
        if c != 0 {
            a[k] = 0;
            for &(j, cj) in &cp.lower {
                let t = c.checked_mul(cj as i128)?;
                let slot = &mut a[k - phi + j];
                *slot = slot.checked_sub(t)?;
            }
        }
    }
    a.resize(phi, 0);
    Some(a)
}

fn reduce_big(mut a: Vec<BigInt>, cp: &CycloPoly) -> Vec<BigInt> {
    let phi = cp.phi;
    for k in (phi..a.len()).rev() {
        if !a[k].is_zero() {
            let c = std::mem::take(&mut a[k]);
            for &(j, cj) in &cp.lower {
                a[k - phi + j] -= &c * cj;
            }
        }
    }
    a.resize(phi, BigInt::zero());
    a
}

fn fits_i128(v: &[BigInt], bits: u64) -> Option<Vec<i128>> {
    v.iter().map(|x| if x.bits() <= bits { x.to_i128() } else { None }).collect()
}

#[derive(Clone, Debug)]
pub struct Cyc {
    n: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Cyc) -> bool {
        if self.n == other.n {
            return self.num == other.num && self.den == other.den;
        }
        let m = self.n.lcm(&other.n);
        let (a, b) = (self.embed(m), other.embed(m));
        a.num == b.num && a.den == b.den
    }
}

impl Eq for Cyc {}

impl Cyc {
    fn normalized(n: u64, mut num: Vec<BigInt>, mut den: BigInt) -> Cyc {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -&*x;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for x in &num {
                if g.is_one() {
                    break;
                }
                if !x.is_zero() {
                    g = g.gcd(x);
                }
            }
            if num.iter().all(|x| x.is_zero()) {
                g = den.clone();
            }
            if !g.is_one() {
                for x in num.iter_mut() {
                    *x = &*x / &g;
                }
                den = &den / &g;
            }
        }
        Cyc { n, num, den }
    }

    /// Builds from a group-ring vector: `Σ_e bins[e] ζ_N^e / den`, any length.
    pub fn from_bins(n: u64, bins: Vec<BigInt>, den: BigInt) -> Cyc {
        let cp = cyclo(n);
        Cyc::normalized(n, reduce_big(bins, &cp), den)
    }

    /// Builds from small integer bins indexed by exponent modulo `N`.
    pub fn from_int_bins(n: u64, bins: &[i64]) -> Cyc {
        let cp = cyclo(n);
        let mut v = vec![0i128; bins.len().max(cp.phi)];
        for (e, &b) in bins.iter().enumerate() {
            v[e] = b as i128;
        }
        match reduce_small(v, &cp) {
            Some(r) => Cyc { n, num: r.into_iter().map(BigInt::from).collect(), den: BigInt::one() },
            None => Cyc::from_bins(n, bins.iter().map(|&b| BigInt::from(b)).collect(), BigInt::one()),
        }
    }

    pub fn zero(n: u64) -> Cyc {
        Cyc { n, num: vec![BigInt::zero(); totient(n)], den: BigInt::one() }
    }

    pub fn one(n: u64) -> Cyc {
        Cyc::from_int(n, 1)
    }

    pub fn from_int(n: u64, k: i64) -> Cyc {
        let mut c = Cyc::zero(n);
        c.num[0] = BigInt::from(k);
        c
    }

    pub fn from_rational(n: u64, r: &BigRational) -> Cyc {
        let mut num = vec![BigInt::zero(); totient(n)];
        num[0] = r.numer().clone();
        Cyc::normalized(n, num, r.denom().clone())
    }

    /// `ζ_N^k`.
    pub fn zeta(n: u64, k: i64) -> Cyc {
        let e = k.rem_euclid(n as i64) as usize;
        let mut bins = vec![BigInt::zero(); n as usize];
        bins[e] = BigInt::one();
        Cyc::from_bins(n, bins, BigInt::one())
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Coefficients in the power basis `1, ζ, …, ζ^{φ−1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    /// Image in `Q(ζ_m)` for `N | m`.
    pub fn embed(&self, m: u64) -> Cyc {
        if m == self.n {
            return self.clone();
        }
        assert!(m % self.n == 0, "cannot embed order {} into {}", self.n, m);
        let step = (m / self.n) as usize;
        let mut bins = vec![BigInt::zero(); m as usize];
        for (j, x) in self.num.iter().enumerate() {
            bins[j * step] = x.clone();
        }
        Cyc::from_bins(m, bins, self.den.clone())
    }

    fn common(&self, other: &Cyc) -> (Cyc, Cyc) {
        if self.n == other.n {
            (self.clone(), other.clone())
        } else {
            let m = self.n.lcm(&other.n);
            (self.embed(m), other.embed(m))
        }
    }

    pub fn add_ref(&self, other: &Cyc) -> Cyc {
        if self.n != other.n {
            let (a, b) = self.common(other);
            return a.add_ref(&b);
        }
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Cyc::normalized(self.n, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Cyc::normalized(self.n, num, &self.den * &other.den)
    }

    pub fn neg_ref(&self) -> Cyc {
        Cyc { n: self.n, num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, other: &Cyc) -> Cyc {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Cyc) -> Cyc {
        if self.n != other.n {
            let (a, b) = self.common(other);
            return a.mul_ref(&b);
        }
        let cp = cyclo(self.n);
        let phi = cp.phi;
        let den = &self.den * &other.den;
        let ba = self.num.iter().map(|x| x.bits()).max().unwrap_or(0);
        let bb = other.num.iter().map(|x| x.bits()).max().unwrap_or(0);
        let len_bits = 64 - (phi as u64).leading_zeros() as u64;
        if ba + bb + len_bits < 100 {
            let a = fits_i128(&self.num, 127).unwrap();
            let b = fits_i128(&other.num, 127).unwrap();
            let mut prod = vec![0i128; 2 * phi];
            for (i, &x) in a.iter().enumerate() {
                if x != 0 {
                    for (j, &y) in b.iter().enumerate() {
                        prod[i + j] += x * y;
                    }
                }
            }
            if let Some(r) = reduce_small(prod, &cp) {
                return Cyc::normalized(self.n, r.into_iter().map(BigInt::from).collect(), den);
            }
        }
        let mut prod = vec![BigInt::zero(); 2 * phi];
        for (i, x) in self.num.iter().enumerate() {
            if !x.is_zero() {
                for (j, y) in other.num.iter().enumerate() {
                    if !y.is_zero() {
                        prod[i + j] += x * y;
                    }
                }
            }
        }
        Cyc::normalized(self.n, reduce_big(prod, &cp), den)
    }

    pub fn scale_int(&self, k: i64) -> Cyc {
        Cyc::normalized(self.n, self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Cyc {
        Cyc::normalized(
            self.n,
            self.num.iter().map(|x| x * r.numer()).collect(),
            &self.den * r.denom(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// `φ_a: ζ_N ↦ ζ_N^a`.
    pub fn galois(&self, a: i64) -> Result<Cyc> {
        let n = self.n as i64;
        if a.gcd(&n) != 1 {
            return Err(Error::InvalidInput(format!("galois({a}) on order {n}: not a unit")));
        }
        Ok(self.galois_unchecked(a.rem_euclid(n) as u64))
    }

    fn galois_unchecked(&self, a: u64) -> Cyc {
        if a == 1 {
            return self.clone();
        }
        let n = self.n as usize;
        let mut bins = vec![BigInt::zero(); n];
        for (j, x) in self.num.iter().enumerate() {
            if !x.is_zero() {
                bins[(j * a as usize) % n] += x;
            }
        }
        Cyc::from_bins(self.n, bins, self.den.clone())
    }

    /// Complex conjugate, `φ_{−1}`.
    pub fn conj(&self) -> Cyc {
        self.galois_unchecked(self.n - 1)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|x| x.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let den = big_to_f64_scaled(&self.den);
        let mut acc = Complex64::new(0.0, 0.0);
        let n = self.n as f64;
        for (j, x) in self.num.iter().enumerate() {
            if !x.is_zero() {
                let v = big_ratio_f64(x, &self.den, den);
                let t = 2.0 * std::f64::consts::PI * j as f64 / n;
                acc += Complex64::new(v * t.cos(), v * t.sin());
            }
        }
        acc
    }

    /// Multiplicative inverse.
    ///
    /// Multiplies by Galois conjugates along a chain of subgroups of
    /// `(Z/N)^×` until the product is rational: with `H` the current
    /// stabiliser and `a ∉ H` of minimal order `m` modulo `H`,
    /// `y ↦ Π_{i<m} φ_{a^i}(y)` is fixed by `⟨H, a⟩`.
    pub fn invert(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let n = self.n;
        let units: Vec<u64> = (1..=n).filter(|&a| a.gcd(&n) == 1).map(|a| a % n).collect();
        let mut h: Vec<bool> = vec![false; n as usize];
        h[1 % n as usize] = true;
        let mut y = self.clone();
        let mut acc = Cyc::one(n);
        while y.to_rational().is_none() {
            let mut best: Option<(u64, u64)> = None;
            for &a in &units {
                if h[a as usize] {
                    continue;
                }
                let mut m = 1u64;
                let mut p = a;
                while !h[p as usize] {
                    p = p * a % n;
                    m += 1;
                }
                if best.map_or(true, |(_, bm)| m < bm) {
                    best = Some((a, m));
                }
            }
            let (a, m) = best.ok_or_else(|| Error::Invariant("norm did not become rational".into()))?;
            let mut conj = Cyc::one(n);
            let mut p = a;
            for _ in 1..m {
                conj = conj.mul_ref(&y.galois_unchecked(p));
                p = p * a % n;
            }
            y = y.mul_ref(&conj);
            acc = acc.mul_ref(&conj);
            let old: Vec<u64> = (0..n).filter(|&x| h[x as usize]).collect();
            let mut p = 1u64;
            for _ in 0..m {
                for &x in &old {
                    h[(x * p % n) as usize] = true;
                }
                p = p * a % n;
            }
        }
        let r = y.to_rational().unwrap();
        Ok(acc.scale_rational(&r.recip()))
    }

    pub fn div_ref(&self, other: &Cyc) -> Result<Cyc> {
        Ok(self.mul_ref(&other.invert()?))
    }
}

fn big_to_f64_scaled(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn big_ratio_f64(x: &BigInt, den: &BigInt, den_f: f64) -> f64 {
    if den_f.is_finite() && den.bits() < 1000 {
        if let Some(v) = x.to_f64() {
            if v.is_finite() {
                return v / den_f;
            }
        }
    }
    let shift = den.bits().max(x.bits()).saturating_sub(900);
    let xs: BigInt = x >> shift;
    let ds: BigInt = den >> shift;
    xs.to_f64().unwrap_or(0.0) / ds.to_f64().unwrap_or(f64::INFINITY)
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let c = BigRational::new(x.clone(), self.den.clone());
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (j, mag.is_one()) {
                (0, _) => format!("{mag}"),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}*z"),
                (_, true) => format!("z^{j}"),
                (_, false) => format!("{mag}*z^{j}"),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, b)) in terms.iter().enumerate() {
            if k == 0 {
                if *s == "-" {
                    write!(f, "-")?;
                }
                write!(f, "{b}")?;
            } else {
                write!(f, " {s} {b}")?;
            }
        }
        write!(f, "  (z = zeta_{})", self.n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Cyc> for &Cyc {
            type Output = Cyc;
            fn $m(self, o: &Cyc) -> Cyc {
                self.$f(o)
            }
        }
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, o: Cyc) -> Cyc {
                self.$f(&o)
            }
        }
    };
}
binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        self.neg_ref()
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        self.neg_ref()
    }
}

/// Coefficient vector as strings `"a/b"`, for JSON export.
pub fn coeff_strings(x: &Cyc) -> Vec<String> {
    x.coeffs()
        .iter()
        .map(|c| if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) })
        .collect()
}

/// `√m` for a positive integer `m` with prime factors below `10⁶`, built from
/// `√2 = ζ₈ + ζ₈⁻¹` and the quadratic Gauss sums `Σ_x ζ_p^{x²} = √(±p)`.
pub fn sqrt_int(m: &BigInt) -> Result<Cyc> {
    if !m.is_positive() {
        return Err(Error::InvalidInput(format!("√{m}: not positive")));
    }
    let mut rest = m.clone();
    let mut square = BigInt::one();
    let mut out = Cyc::one(1);
    let mut p: u64 = 2;
    while !rest.is_one() {
        if p > 1_000_000 {
            return Err(Error::Unsupported(format!("√{m}: cofactor {rest} has no small prime factor")));
        }
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        square *= bp.pow(e / 2);
        if e % 2 == 1 {
            out = out.mul_ref(&sqrt_prime(p));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(out.scale_rational(&BigRational::from(square)))
}

fn sqrt_prime(p: u64) -> Cyc {
    if p == 2 {
        return Cyc::zeta(8, 1).add_ref(&Cyc::zeta(8, 7));
    }
    let mut bins = vec![0i64; p as usize];
    for x in 0..p {
        bins[((x * x) % p) as usize] += 1;
    }
    let g = Cyc::from_int_bins(p, &bins);
    if p % 4 == 1 {
        g
    } else {
        // g = i√p
        g.mul_ref(&Cyc::zeta(4, 3))
    }
}

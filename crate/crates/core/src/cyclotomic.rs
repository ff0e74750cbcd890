//! Exact arithmetic in cyclotomic fields Q(zeta_M).
//!
//! A [`CycloNum`] is stored in canonical form: the conductor is minimal (the
//! element does not lie in any proper cyclotomic subfield reachable by
//! dividing the conductor by one of its primes, and the conductor is never
//! congruent to 2 mod 4), and the coefficient vector is the residue of the
//! exponent polynomial modulo the M-th cyclotomic polynomial, so it has
//! length phi(M).  Canonical forms are unique, hence `==` is exact equality
//! of field elements.
//!
//! Coefficients are kept as a common-denominator integer vector; products of
//! Weil matrices generate denominators like |L'/L|^(k/2) which overflow any
//! fixed-width type, so everything is `BigInt`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("galois twist by {d} is not coprime to conductor {m}")]
    NonCoprimeTwist { d: i64, m: u32 },
    #[error("division by zero cyclotomic number")]
    DivisionByZero,
}

/// Euler phi for small arguments.
pub fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn prime_divisors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn moebius(mut m: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if m > 1 {
        mu = -mu;
    }
    mu
}

// x^d - 1 as integer coefficient vector.
fn poly_xd_minus_1(d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d + 1];
    v[0] = -BigInt::one();
    v[d] = BigInt::one();
    v
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

// Exact division of integer polynomials, panics on nonzero remainder.
fn poly_div_exact_z(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(!lead.is_zero());
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !(&c * &lead - &rem[k + dd]).is_zero() {
            panic!("non-exact polynomial division");
        }
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &c * &den[j];
            rem[k + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// Cyclotomic polynomial Phi_M as monic integer coefficient vector.
fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    if m == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=m {
        if m % d == 0 {
            match moebius(m / d) {
                1 => num = poly_mul_z(&num, &poly_xd_minus_1(d as usize)),
                -1 => den = poly_mul_z(&den, &poly_xd_minus_1(d as usize)),
                _ => {}
            }
        }
    }
    let mut q = poly_div_exact_z(&num, &den);
    while q.len() > 1 && q.last().unwrap().is_zero() {
        q.pop();
    }
    q
}

/// Per-conductor data: Phi_M, reduction rows for high powers of zeta, and the
/// complex embedding table.
struct ConductorTable {
    m: u32,
    phi: usize,
    /// x^(phi + j) mod Phi_M for j = 0 .. max(m-1, 2*phi-2) - phi.
    red_rows: Vec<Vec<BigInt>>,
    embed: Vec<Complex64>,
    primes: Vec<u32>,
}

impl ConductorTable {
    fn new(m: u32) -> Self {
        let cyclo = cyclotomic_polynomial(m);
        let phi = cyclo.len() - 1;
        let hi = std::cmp::max(m as usize, 2 * phi) - 1;
        let mut red_rows: Vec<Vec<BigInt>> = Vec::new();
        if hi >= phi {
            // x^phi = -(lower part of Phi)
            let first: Vec<BigInt> = cyclo[..phi].iter().map(|c| -c.clone()).collect();
            red_rows.push(first);
            for _ in phi..hi {
                let prev = red_rows.last().unwrap();
                // multiply by x, reduce the overflow coefficient
                let mut next = vec![BigInt::zero(); phi];
                let carry = prev[phi - 1].clone();
                for k in (1..phi).rev() {
                    next[k] = prev[k - 1].clone();
                }
                if !carry.is_zero() {
                    let base = &red_rows[0];
                    for k in 0..phi {
                        let t = &carry * &base[k];
                        next[k] += t;
                    }
                }
                red_rows.push(next);
            }
        }
        let embed = (0..m)
            .map(|j| {
                let ang = 2.0 * std::f64::consts::PI * (j as f64) / (m as f64);
                Complex64::new(ang.cos(), ang.sin())
            })
            .collect();
        ConductorTable { m, phi, red_rows, embed, primes: prime_divisors(m) }
    }
}

static TABLES: Lazy<Mutex<HashMap<u32, Arc<ConductorTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn table(m: u32) -> Arc<ConductorTable> {
    let mut map = TABLES.lock().unwrap();
    map.entry(m).or_insert_with(|| Arc::new(ConductorTable::new(m))).clone()
}

/// Exact element of a cyclotomic field Q(zeta_M), canonical form.
#[derive(Debug, Clone)]
pub struct CycloNum {
    conductor: u32,
    /// numerator coefficients, length phi(conductor)
    num: Vec<BigInt>,
    /// common denominator, positive
    den: BigInt,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { conductor: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        CycloNum { conductor: 1, num: vec![BigInt::one()], den: BigInt::one() }
    }

    pub fn from_integer(n: i64) -> Self {
        CycloNum { conductor: 1, num: vec![BigInt::from(n)], den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        CycloNum { conductor: 1, num: vec![r.numer().clone()], den: r.denom().clone() }
            .normalized()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Canonical coefficients as rationals (length phi(conductor)).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.num[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.conductor == 1 {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// e(a/b) = exp(2 pi i a / b), exact.
    pub fn root_of_unity(a: i64, b: u64) -> Self {
        assert!(b >= 1, "root_of_unity requires b >= 1");
        let bb = b as i64;
        let a = a.rem_euclid(bb) as u64;
        let g = a.gcd(&b);
        let (a, b) = (a / g, b / g);
        let m = b as u32;
        let mut raw = vec![BigInt::zero(); m as usize];
        raw[a as usize] = BigInt::one();
        canonicalize_raw(m, raw, BigInt::one())
    }

    /// e(r) for rational r, exact.
    pub fn root_of_unity_rat(r: &BigRational) -> Self {
        let den = r.denom().to_u64().expect("root_of_unity_rat: denominator too large");
        let num = {
            let b = BigInt::from(den);
            let n = r.numer().mod_floor(&b);
            n.to_i64().unwrap()
        };
        Self::root_of_unity(num, den)
    }

    /// The positive square root of a nonnegative integer, realized exactly in
    /// Q(zeta_{4n}) through quadratic Gauss sums.
    pub fn sqrt_of_integer(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut out = Self::one();
        let mut rest = n;
        let mut rational_part: u64 = 1;
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                rational_part *= p.pow(e / 2);
                if e % 2 == 1 {
                    out = &out * &Self::sqrt_prime(p);
                }
            }
            p += 1;
        }
        if rest > 1 {
            out = &out * &Self::sqrt_prime(rest);
        }
        &out * &Self::from_integer(rational_part as i64)
    }

    // sqrt(p) for prime p via the quadratic Gauss sum.
    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            // zeta_8 + zeta_8^{-1}
            return &Self::root_of_unity(1, 8) + &Self::root_of_unity(-1, 8);
        }
        let mut raw = vec![BigInt::zero(); p as usize];
        for a in 0..p {
            raw[((a * a) % p) as usize] += BigInt::one();
        }
        let g = canonicalize_raw(p as u32, raw, BigInt::one());
        if p % 4 == 1 {
            g
        } else {
            // Gauss sum equals i*sqrt(p); divide by i.
            &g * &Self::root_of_unity(-1, 4)
        }
    }

    /// Galois automorphism zeta_M -> zeta_M^d for gcd(d, M) = 1.
    pub fn galois_twist(&self, d: i64) -> Result<Self, CycloError> {
        let m = self.conductor as i64;
        let dd = d.rem_euclid(m) as u64;
        if (dd as i64).gcd(&m) != 1 {
            return Err(CycloError::NonCoprimeTwist { d, m: self.conductor });
        }
        if self.conductor == 1 {
            return Ok(self.clone());
        }
        let mm = self.conductor as usize;
        let mut raw = vec![BigInt::zero(); mm];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                raw[(j * dd as usize) % mm] += c;
            }
        }
        Ok(canonicalize_raw(self.conductor, raw, self.den.clone()))
    }

    /// Complex conjugate (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        self.galois_twist(self.conductor as i64 - 1).unwrap()
    }

    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.conductor == 1 {
            let r = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(Self::from_rational(&r));
        }
        // extended gcd of the coefficient polynomial with Phi_M over Q
        let m = self.conductor;
        let phi_m = cyclotomic_polynomial(m);
        let a: Vec<BigRational> = self.coeffs();
        let b: Vec<BigRational> =
            phi_m.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (g, u) = poly_ext_gcd_q(&a, &b);
        // g is a nonzero constant: inverse = u / g
        assert_eq!(poly_deg_q(&g), 0, "element not invertible mod Phi_M");
        let ginv = g[0].recip();
        let coeffs: Vec<BigRational> = u.iter().map(|c| c * &ginv).collect();
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut raw = vec![BigInt::zero(); std::cmp::max(m as usize, coeffs.len())];
        for (j, c) in coeffs.iter().enumerate() {
            raw[j] = c.numer() * (&den / c.denom());
        }
        Ok(canonicalize_raw(m, raw, den))
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &sq;
            }
            exp >>= 1;
            if exp > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Embedding zeta_M -> exp(2 pi i / M) into machine complex numbers.
    pub fn to_complex(&self) -> Complex64 {
        let tab = table(self.conductor);
        let den = big_to_f64(&self.den);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc += tab.embed[j] * big_to_f64(c);
            }
        }
        acc / den
    }

    pub fn abs2_complex(&self) -> f64 {
        self.to_complex().norm_sqr()
    }

    fn normalized(mut self) -> Self {
        normalize_content(&mut self.num, &mut self.den);
        self
    }

    // --- unreduced helpers for the matrix engine (same conductor, no descent) ---

    /// Lift to a larger conductor (target must be a multiple). Result is
    /// degree-reduced but descent is intentionally skipped.
    pub(crate) fn lift_to(&self, m: u32) -> Self {
        if self.conductor == m {
            return self.clone();
        }
        assert!(m % self.conductor == 0, "lift_to: not a multiple");
        let scale = (m / self.conductor) as usize;
        let mut raw = vec![BigInt::zero(); m as usize];
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                raw[j * scale] = c.clone();
            }
        }
        let num = reduce_mod_phi(m, raw);
        CycloNum { conductor: m, num, den: self.den.clone() }
    }

    pub(crate) fn mul_unreduced(&self, other: &Self) -> Self {
        debug_assert_eq!(self.conductor, other.conductor);
        let m = self.conductor;
        let conv = poly_mul_z(&self.num, &other.num);
        let num = reduce_mod_phi(m, conv);
        CycloNum { conductor: m, num, den: &self.den * &other.den }
    }

    pub(crate) fn add_unreduced(&self, other: &Self) -> Self {
        debug_assert_eq!(self.conductor, other.conductor);
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(other.num.iter())
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        CycloNum { conductor: self.conductor, num, den }
    }

    /// Restore full canonical form after unreduced accumulation.
    pub(crate) fn canonicalized(self) -> Self {
        canonicalize_raw_reduced(self.conductor, self.num, self.den)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn normalize_content(num: &mut [BigInt], den: &mut BigInt) {
    if den.is_negative() {
        *den = -den.clone();
        for c in num.iter_mut() {
            *c = -c.clone();
        }
    }
    let mut g = den.clone();
    for c in num.iter() {
        if !c.is_zero() {
            g = g.gcd(c);
        }
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() && !g.is_zero() {
        *den /= &g;
        for c in num.iter_mut() {
            *c /= &g;
        }
    }
    if num.iter().all(|c| c.is_zero()) {
        *den = BigInt::one();
    }
}

/// Reduce a raw exponent vector (any length) modulo Phi_M to length phi(M).
fn reduce_mod_phi(m: u32, raw: Vec<BigInt>) -> Vec<BigInt> {
    let tab = table(m);
    let phi = tab.phi;
    let mut out = vec![BigInt::zero(); phi];
    for (j, c) in raw.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if j < phi {
            out[j] += c;
        } else {
            let row = &tab.red_rows[j - phi];
            for k in 0..phi {
                if !row[k].is_zero() {
                    out[k] += &c * &row[k];
                }
            }
        }
    }
    out
}

fn canonicalize_raw(m: u32, raw: Vec<BigInt>, den: BigInt) -> CycloNum {
    let num = reduce_mod_phi(m, raw);
    canonicalize_raw_reduced(m, num, den)
}

// Full canonical form from an already degree-reduced vector: conductor descent
// until minimal, then content normalization.
fn canonicalize_raw_reduced(m: u32, num: Vec<BigInt>, den: BigInt) -> CycloNum {
    let mut cur = CycloNum { conductor: m, num, den };
    'outer: loop {
        if cur.conductor == 1 {
            break;
        }
        let tab = table(cur.conductor);
        for &p in &tab.primes {
            if let Some(next) = try_descend(&cur, p) {
                cur = next;
                continue 'outer;
            }
        }
        break;
    }
    cur.normalized()
}

// Attempt descent from conductor M to M/p. Returns the rewritten element on
// success.
fn try_descend(x: &CycloNum, p: u32) -> Option<CycloNum> {
    let m = x.conductor;
    let m2 = m / p;
    debug_assert!(m % p == 0);
    // Galois invariance under the kernel of (Z/M)* -> (Z/M2)*.
    let mm = m as usize;
    for t in 1..p {
        let k = (1 + m2 * t) % m;
        if k == 1 || (k as i64).gcd(&(m as i64)) != 1 {
            continue;
        }
        let mut raw = vec![BigInt::zero(); mm];
        for (j, c) in x.num.iter().enumerate() {
            if !c.is_zero() {
                raw[(j * k as usize) % mm] += c;
            }
        }
        let img = reduce_mod_phi(m, raw);
        if img != x.num {
            return None;
        }
    }
    // Rewrite in powers of zeta_{M2} = zeta_M^p by solving a linear system.
    let phi2 = euler_phi(m2) as usize;
    let basis: Vec<Vec<BigInt>> = (0..phi2)
        .map(|i| {
            let mut raw = vec![BigInt::zero(); std::cmp::max(mm, (p as usize) * i + 1)];
            raw[(p as usize) * i] = BigInt::one();
            reduce_mod_phi(m, raw)
        })
        .collect();
    let target: Vec<BigRational> = x.coeffs();
    let sol = solve_rational_system(&basis, &target)?;
    let den = sol.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut raw2 = vec![BigInt::zero(); std::cmp::max(m2 as usize, phi2)];
    for (i, c) in sol.iter().enumerate() {
        raw2[i] = c.numer() * (&den / c.denom());
    }
    let num2 = reduce_mod_phi(m2, raw2);
    // Recurse: M2 itself may descend further.
    Some(canonicalize_raw_reduced(m2, num2, den))
}

// Solve sum_i b_i * basis_i = target over Q; basis vectors are integral of
// length n. Returns None if inconsistent.
fn solve_rational_system(basis: &[Vec<BigInt>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let cols = basis.len();
    // augmented matrix [A | t], A[r][c] = basis[c][r]
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..cols)
                .map(|c| BigRational::from_integer(basis[c][r].clone()))
                .collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r0 = 0usize;
    for c in 0..cols {
        let mut piv = None;
        for r in r0..rows {
            if !a[r][c].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let piv = piv?;
        a.swap(r0, piv);
        let inv = a[r0][c].recip();
        for cc in c..=cols {
            a[r0][cc] = &a[r0][cc] * &inv;
        }
        for r in 0..rows {
            if r != r0 && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for cc in c..=cols {
                    let t = &a[r0][cc] * &f;
                    a[r][cc] = &a[r][cc] - &t;
                }
            }
        }
        pivot_rows.push(r0);
        r0 += 1;
        if r0 == rows {
            break;
        }
    }
    if pivot_rows.len() < cols {
        return None;
    }
    // consistency: remaining rows must be zero
    for r in r0..rows {
        if !a[r][cols].is_zero() {
            return None;
        }
    }
    Some((0..cols).map(|c| a[pivot_rows[c]][cols].clone()).collect())
}

// polynomial helpers over Q for the inverse

fn poly_deg_q(a: &[BigRational]) -> usize {
    let mut d = 0;
    for (i, c) in a.iter().enumerate() {
        if !c.is_zero() {
            d = i;
        }
    }
    d
}

fn poly_trim_q(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    a
}

// Returns (g, u) with u*a = g mod b and g = gcd(a, b) (up to scalar).
fn poly_ext_gcd_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let zero = || vec![BigRational::zero()];
    let mut r0 = poly_trim_q(a.to_vec());
    let mut r1 = poly_trim_q(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1 = zero();
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod_q(&r0, &r1);
        let s = poly_sub_q(&s0, &poly_mul_q(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let t = ai * bj;
                out[i + j] = &out[i + j] + &t;
            }
        }
    }
    poly_trim_q(out)
}

fn poly_sub_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = std::cmp::max(a.len(), b.len());
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out[i] = x - y;
    }
    poly_trim_q(out)
}

fn poly_divmod_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = poly_deg_q(b);
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let da = poly_deg_q(&rem);
    if da < db && !(rem.len() == 1 && rem[0].is_zero()) && poly_deg_q(&rem) < db {
        return (vec![BigRational::zero()], poly_trim_q(rem));
    }
    let mut quot = vec![BigRational::zero(); da.saturating_sub(db) + 1];
    for k in (0..quot.len()).rev() {
        if k + db >= rem.len() {
            continue;
        }
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[k + j] = &rem[k + j] - &t;
        }
    }
    (poly_trim_q(quot), poly_trim_q(rem))
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.den == other.den && self.num == other.num;
        }
        // canonical forms of equal elements have equal conductors
        false
    }
}

impl Eq for CycloNum {}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            conductor: self.conductor,
            num: self.num.iter().map(|c| -c.clone()).collect(),
            den: self.den.clone(),
        }
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, other: &CycloNum) -> CycloNum {
        let m = lcm_u32(self.conductor, other.conductor);
        let a = self.lift_to(m);
        let b = other.lift_to(m);
        a.add_unreduced(&b).canonicalized()
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, other: &CycloNum) -> CycloNum {
        self + &(-other)
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, other: &CycloNum) -> CycloNum {
        let m = lcm_u32(self.conductor, other.conductor);
        let a = self.lift_to(m);
        let b = other.lift_to(m);
        a.mul_unreduced(&b).canonicalized()
    }
}

pub(crate) fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64 * b as u64 / (a as u64).gcd(&(b as u64))) as u32
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            let (sign, mag) = match r.cmp(&BigRational::zero()) {
                Ordering::Less => ("-", -r.clone()),
                _ => ("+", r.clone()),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "z{}^{}", self.conductor, j)?;
            } else {
                write!(f, "{}*z{}^{}", mag, self.conductor, j)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn e(a: i64, b: u64) -> CycloNum {
        CycloNum::root_of_unity(a, b)
    }

    #[test]
    fn fourth_root_is_i() {
        let i = e(1, 4);
        assert_eq!(&i * &i, CycloNum::from_integer(-1));
        let z = i.to_complex();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = &(&e(1, 3) + &e(2, 3)) + &e(0, 1);
        assert!(s.is_zero());
    }

    #[test]
    fn exponents_add() {
        assert_eq!(&e(1, 8) * &e(1, 8), e(1, 4));
    }

    #[test]
    fn all_roots_have_order_dividing_b() {
        for b in 1..=64u64 {
            for a in 0..b {
                let z = e(a as i64, b);
                assert_eq!(z.pow(b as i64).unwrap(), CycloNum::one(), "a={} b={}", a, b);
            }
        }
    }

    #[test]
    fn galois_twist_on_roots() {
        assert_eq!(e(1, 3).galois_twist(2).unwrap(), e(2, 3));
        let x = &CycloNum::one() + &(&CycloNum::from_integer(2) * &e(1, 3));
        assert_eq!(x.galois_twist(1).unwrap(), x);
        let y = &CycloNum::one() + &(&CycloNum::from_integer(2) * &e(2, 3));
        assert_eq!(x.galois_twist(2).unwrap(), y);
        assert!(matches!(
            e(1, 6).galois_twist(3),
            Err(CycloError::NonCoprimeTwist { .. })
        ));
    }

    #[test]
    fn embedding_values() {
        let x = &CycloNum::one() + &(&CycloNum::from_integer(2) * &e(1, 3));
        let z = x.to_complex();
        assert!((z - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-13);
        assert_eq!(CycloNum::zero().to_complex(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn conductor_descends() {
        // zeta_6 = -zeta_3^2 lives at conductor 3
        assert_eq!(e(1, 6).conductor(), 3);
        // zeta_3 + zeta_3^2 = -1 is rational
        let s = &e(1, 3) + &e(2, 3);
        assert_eq!(s, CycloNum::from_integer(-1));
        assert_eq!(s.conductor(), 1);
        // sqrt(3)^2 = 3
        let r3 = CycloNum::sqrt_of_integer(3);
        assert_eq!(&r3 * &r3, CycloNum::from_integer(3));
        assert!((r3.to_complex().re - 3f64.sqrt()).abs() < 1e-13);
        assert!(r3.to_complex().im.abs() < 1e-13);
    }

    #[test]
    fn sqrt_of_integers_embed_positively() {
        for n in 1..=30u64 {
            let r = CycloNum::sqrt_of_integer(n);
            let z = r.to_complex();
            assert!((z.re - (n as f64).sqrt()).abs() < 1e-11, "n={}", n);
            assert!(z.im.abs() < 1e-11, "n={}", n);
            assert_eq!(&r * &r, CycloNum::from_integer(n as i64), "n={}", n);
        }
    }

    #[test]
    fn inverse_is_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let conductors = [1u64, 3, 4, 5, 8, 9, 12, 24, 40];
        for _ in 0..60 {
            let m = conductors[rng.gen_range(0..conductors.len())];
            let mut x = CycloNum::zero();
            for _ in 0..3 {
                let c = rng.gen_range(-4i64..=4);
                let a = rng.gen_range(0..m) as i64;
                x = &x + &(&CycloNum::from_integer(c) * &e(a, m));
            }
            if x.is_zero() {
                continue;
            }
            let xi = x.inverse().unwrap();
            assert_eq!(&x * &xi, CycloNum::one());
        }
        assert!(CycloNum::zero().inverse().is_err());
    }

    #[test]
    fn galois_twist_is_multiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let m = 24u64;
            let mut x = CycloNum::zero();
            let mut y = CycloNum::zero();
            for _ in 0..3 {
                x = &x
                    + &(&CycloNum::from_integer(rng.gen_range(-3i64..=3))
                        * &e(rng.gen_range(0..m) as i64, m));
                y = &y
                    + &(&CycloNum::from_integer(rng.gen_range(-3i64..=3))
                        * &e(rng.gen_range(0..m) as i64, m));
            }
            for d in [5i64, 7, 11, 13] {
                let lhs = (&x * &y).galois_twist(d).unwrap();
                let rhs = &x.galois_twist(d).unwrap() * &y.galois_twist(d).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn embedding_is_multiplicative_random() {
        // spec-scale randomized check: 1000 pairs, conductors up to 360
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let conductors = [1u64, 3, 4, 5, 8, 9, 12, 15, 24, 36, 40, 45, 60, 72, 120, 180, 360];
        for _ in 0..1000 {
            let m = conductors[rng.gen_range(0..conductors.len())];
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut x = CycloNum::zero();
                for _ in 0..2 {
                    let c = rng.gen_range(-9i64..=9);
                    let a = rng.gen_range(0..m) as i64;
                    x = &x + &(&CycloNum::from_integer(c) * &e(a, m));
                }
                x
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            let lhs = (&x * &y).to_complex();
            let rhs = x.to_complex() * y.to_complex();
            let scale = 1.0 + lhs.norm() + rhs.norm();
            assert!((lhs - rhs).norm() < 1e-9 * scale, "m={}", m);
        }
    }

    proptest! {
        #[test]
        fn ring_laws(av in proptest::collection::vec(-5i64..=5, 3),
                     bv in proptest::collection::vec(-5i64..=5, 3),
                     m in prop::sample::select(vec![1u64, 3, 4, 8, 12, 24])) {
            let build = |v: &[i64]| {
                let mut x = CycloNum::zero();
                for (j, &c) in v.iter().enumerate() {
                    x = &x + &(&CycloNum::from_integer(c) * &e(j as i64, m));
                }
                x
            };
            let a = build(&av);
            let b = build(&bv);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &a, &(&a * &a) + &(&b * &a));
            prop_assert_eq!(&a - &a, CycloNum::zero());
        }
    }
}

//! Exact arithmetic in the cyclotomic fields `Q(zeta_M)`.
//!
//! Every observable and manifold invariant produced by this crate is an
//! element of some `Q(zeta_M)`, represented here as a dense vector of
//! rational coefficients over the powers `zeta_M^0 .. zeta_M^{M-1}` and kept
//! in canonical form: the remainder modulo the M-th cyclotomic polynomial,
//! re-expanded with zero padding. Canonical forms make equality decidable,
//! so all comparisons in the crate are exact; floating point only ever
//! appears through [`CyclotomicNumber::embed`] for reporting.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational scalar used for cyclotomic coefficients.
///
/// `num_rational::BigRational` already maintains the invariants we need:
/// lowest terms and a positive denominator.
pub type Rational = BigRational;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat_int(n: i64) -> Rational {
    Rational::from_integer(big(n))
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// Exact division of integer polynomials, `num / den`, requiring a monic
/// divisor and zero remainder. Coefficients ascend by degree.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        assert!(rem.iter().all(Zero::is_zero), "nonzero remainder in exact division");
        return vec![BigInt::zero()];
    }
    let qn = rem.len() - den.len();
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let t = &c * d;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "nonzero remainder in exact division");
    quot
}

/// The M-th cyclotomic polynomial `Phi_M`, integer coefficients ascending by
/// degree. Computed as `(x^M - 1) / prod_{d | M, d < M} Phi_d` and memoized.
fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let phi = if m == 1 {
        vec![big(-1), big(1)]
    } else {
        // x^M - 1
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = big(-1);
        num[m as usize] = big(1);
        let mut quot = num;
        for d in 1..m {
            if m % d == 0 {
                quot = poly_exact_div(&quot, &cyclotomic_polynomial(d));
            }
        }
        quot
    };
    cache.lock().unwrap().insert(m, phi.clone());
    phi
}

/// Euler's totient, read off as the degree of `Phi_M`.
fn totient(m: u64) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

// ---------------------------------------------------------------------------
// CyclotomicNumber
// ---------------------------------------------------------------------------

/// An exact element of `Q(zeta_M)`, with `zeta_M = exp(2*pi*i/M)`.
///
/// Stored as `sum_j coeffs[j] * zeta_M^j` with `coeffs.len() == M`, in
/// canonical form: as a polynomial in `zeta_M` the value is reduced modulo
/// `Phi_M`, so every coefficient at index `>= phi(M)` is zero. Two values
/// are equal iff their canonical forms over a common conductor agree
/// coefficient-wise, which is what [`PartialEq`] implements.
#[derive(Clone)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Builds a value from raw coefficients over powers of `zeta_M`.
    /// Exponents beyond `M-1` are folded modulo `M` first, then the result is
    /// canonicalized.
    pub fn from_coefficients(conductor: u64, raw: Vec<Rational>) -> Self {
        assert!(conductor >= 1, "conductor must be >= 1");
        let mut coeffs = vec![Rational::zero(); conductor as usize];
        for (j, c) in raw.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs[j % conductor as usize] += c;
            }
        }
        let mut v = CyclotomicNumber { conductor, coeffs };
        v.reduce();
        v
    }

    pub fn zero(conductor: u64) -> Self {
        assert!(conductor >= 1);
        CyclotomicNumber { conductor, coeffs: vec![Rational::zero(); conductor as usize] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CyclotomicNumber { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// `zeta_M^e` for any integer exponent `e` (taken modulo `M`).
    pub fn root_of_unity(conductor: u64, exponent: i64) -> Self {
        assert!(conductor >= 1, "conductor must be >= 1");
        let e = exponent.rem_euclid(conductor as i64) as usize;
        let mut coeffs = vec![Rational::zero(); conductor as usize];
        coeffs[e] = Rational::one();
        let mut v = CyclotomicNumber { conductor, coeffs };
        v.reduce();
        v
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Canonical coefficients over `zeta^0 .. zeta^{M-1}`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Returns the value as a rational if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reduces the coefficient vector modulo `Phi_M` in place and re-expands
    /// with zero padding. No-op when the degree is already below `phi(M)`.
    fn reduce(&mut self) {
        let m = self.conductor;
        let phi_deg = totient(m);
        if self.coeffs.iter().skip(phi_deg).all(Zero::is_zero) {
            return;
        }
        let phi = cyclotomic_polynomial(m);
        for k in (phi_deg..self.coeffs.len()).rev() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut self.coeffs[k], Rational::zero());
            let base = k - phi_deg;
            // subtract c * x^base * Phi_M; the leading term cancels coeffs[k]
            for (i, p) in phi.iter().take(phi_deg).enumerate() {
                if !p.is_zero() {
                    self.coeffs[base + i] -= &c * Rational::from_integer(p.clone());
                }
            }
        }
    }

    /// Re-expresses the value over the larger conductor `target`, which must
    /// be a multiple of the current one. The value is unchanged because
    /// `zeta_M = zeta_{M'}^{M'/M}`.
    pub fn lift_conductor(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.conductor != 0 {
            return Err(Error::IncompatibleConductor { from: self.conductor, to: target });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut coeffs = vec![Rational::zero(); target as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[j * step] = c.clone();
            }
        }
        let mut v = CyclotomicNumber { conductor: target, coeffs };
        v.reduce();
        Ok(v)
    }

    fn common_conductor(&self, other: &Self) -> u64 {
        self.conductor.lcm(&other.conductor)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.common_conductor(other);
        let mut a = self.lift_conductor(m).expect("lcm lift");
        let b = other.lift_conductor(m).expect("lcm lift");
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c.clone()).collect();
        CyclotomicNumber { conductor: self.conductor, coeffs }
    }

    pub fn scalar_mul(&self, r: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * r).collect();
        CyclotomicNumber { conductor: self.conductor, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.common_conductor(other);
        let a = self.lift_conductor(m).expect("lcm lift");
        let b = other.lift_conductor(m).expect("lcm lift");
        let n = m as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    coeffs[(i + j) % n] += ca * cb;
                }
            }
        }
        let mut v = CyclotomicNumber { conductor: m, coeffs };
        v.reduce();
        v
    }

    /// Complex conjugation, `zeta_M^j -> zeta_M^{M-j}`. An involution that
    /// corresponds to orientation reversal throughout the crate.
    pub fn conjugate(&self) -> Self {
        let n = self.conductor as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(n - j) % n] = c.clone();
            }
        }
        let mut v = CyclotomicNumber { conductor: self.conductor, coeffs };
        v.reduce();
        v
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `Q[x]` modulo `Phi_M`. Panics on zero; callers check first.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero cyclotomic number");
        let m = self.conductor;
        let phi: Vec<Rational> = cyclotomic_polynomial(m)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let deg = |p: &[Rational]| p.iter().rposition(|c| !c.is_zero());
        let phi_deg = phi.len() - 1;
        let a: Vec<Rational> = self.coeffs[..totient(m)].to_vec();

        // invariants: r0 = s*phi + t0*a, r1 = s'*phi + t1*a
        let mut r0 = phi;
        let mut r1 = a;
        let mut t0: Vec<Rational> = vec![Rational::zero()];
        let mut t1: Vec<Rational> = vec![Rational::one()];
        while deg(&r1).is_some() {
            let d1 = deg(&r1).unwrap();
            let (quot, rem) = poly_divrem(&r0, &r1, d1);
            let t2 = poly_sub(&t0, &poly_mul(&quot, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        let g_deg = deg(&r0).expect("gcd of nonzero polynomials");
        assert!(g_deg == 0, "Phi_M must be coprime to any nonzero element");
        let g = r0[0].clone();
        let inv_coeffs: Vec<Rational> = t0.iter().map(|c| c / &g).collect();
        let mut padded = vec![Rational::zero(); m as usize];
        for (i, c) in inv_coeffs.into_iter().enumerate() {
            padded[i % m as usize] += c;
        }
        let mut v = CyclotomicNumber { conductor: m, coeffs: padded };
        v.reduce();
        debug_assert!(phi_deg > 0);
        v
    }

    pub fn div(&self, other: &Self) -> Self {
        let m = self.common_conductor(other);
        let b = other.lift_conductor(m).expect("lcm lift");
        self.mul(&b.inverse())
    }

    /// Integer power, negative exponents via [`CyclotomicNumber::inverse`].
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut acc = CyclotomicNumber::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// An exact square root of the positive integer `m`, real and positive
    /// in the embedding, with conductor dividing `4m`. Built from quadratic
    /// Gauss sums so the construction never leaves cyclotomic fields.
    pub fn sqrt_positive_integer(m: u64) -> Self {
        assert!(m >= 1, "square root of a nonpositive integer");
        if m == 1 {
            return Self::one();
        }
        if m % 2 == 0 {
            // sum_{q=0}^{m-1} zeta_{2m}^{q^2} = e^{i pi/4} sqrt(m) for even m
            let sum = quadratic_exponent_sum(2 * m, 1, m);
            return Self::root_of_unity(8, 7).mul(&sum);
        }
        // odd m: sum_{n=0}^{m-1} zeta_m^{n^2} = sqrt(m) or i*sqrt(m)
        let sum = quadratic_exponent_sum(m, 1, m);
        if m % 4 == 1 {
            sum
        } else {
            Self::root_of_unity(4, 3).mul(&sum)
        }
    }

    /// Numeric embedding `zeta_M -> e^{2*pi*i/M}`, for reporting and
    /// tolerance checks only; equality decisions always use canonical forms.
    pub fn embed(&self) -> Complex64 {
        let m = self.conductor as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) / m;
                let coeff = c.to_f64().expect("rational out of f64 range");
                acc += Complex64::new(theta.cos(), theta.sin()) * coeff;
            }
        }
        acc
    }
}

/// `sum_{n=0}^{count-1} zeta_M^{scale * n^2}` as an exact value.
fn quadratic_exponent_sum(conductor: u64, scale: i64, count: u64) -> CyclotomicNumber {
    let m = conductor as i64;
    let mut coeffs = vec![Rational::zero(); conductor as usize];
    for n in 0..count as i64 {
        let e = (scale * ((n * n) % m)).rem_euclid(m) as usize;
        coeffs[e] += Rational::one();
    }
    CyclotomicNumber::from_coefficients(conductor, coeffs)
}

// polynomial helpers over Rational, coefficients ascending, used by inverse()

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Division with remainder; `d1` is the degree of the (nonzero) divisor.
fn poly_divrem(num: &[Rational], den: &[Rational], d1: usize) -> (Vec<Rational>, Vec<Rational>) {
    let lead = den[d1].clone();
    let mut rem = num.to_vec();
    let nd = rem.iter().rposition(|c| !c.is_zero());
    let nd = match nd {
        Some(d) if d >= d1 => d,
        _ => return (vec![Rational::zero()], rem),
    };
    let mut quot = vec![Rational::zero(); nd - d1 + 1];
    for k in (0..=nd - d1).rev() {
        if rem[k + d1].is_zero() {
            continue;
        }
        let q = &rem[k + d1] / &lead;
        for i in 0..=d1 {
            if !den[i].is_zero() {
                let t = &q * &den[i];
                rem[k + i] -= t;
            }
        }
        quot[k] = q;
    }
    (quot, rem)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let m = self.common_conductor(other);
        let a = self.lift_conductor(m).expect("lcm lift");
        let b = other.lift_conductor(m).expect("lcm lift");
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl std::ops::Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber::add(self, rhs)
    }
}

impl std::ops::Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber::sub(self, rhs)
    }
}

impl std::ops::Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber::mul(self, rhs)
    }
}

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.negate()
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicNumber(M={}, {})", self.conductor, self)
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Prints a recognizable closed form when one exists (rationals, single
    /// terms `c*zetaM^j`, values with rational square like `i*sqrt(3)`),
    /// falling back to the raw coefficient expansion.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.recognize() {
            return write!(f, "{}", s);
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "zeta{}^{}", self.conductor, j)?;
            } else {
                write!(f, "{}*zeta{}^{}", format_rational(c), self.conductor, j)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_sqrt(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("sqrt({})", r.numer())
    } else {
        format!("sqrt({}/{})", r.numer(), r.denom())
    }
}

impl CyclotomicNumber {
    fn single_term(&self) -> Option<(usize, &Rational)> {
        let mut found = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((j, c));
            }
        }
        found
    }

    fn recognize(&self) -> Option<String> {
        if self.is_zero() {
            return Some("0".to_string());
        }
        if let Some(r) = self.as_rational() {
            return Some(format_rational(&r));
        }
        if let Some((j, c)) = self.single_term() {
            let m = self.conductor as usize;
            if c.is_one() {
                return Some(format!("zeta{}^{}", m, j));
            }
            // -zeta_M^j is the root zeta_M^{j + M/2} when M is even
            if m % 2 == 0 && (-c).is_one() {
                return Some(format!("zeta{}^{}", m, (j + m / 2) % m));
            }
            return Some(format!("{}*zeta{}^{}", format_rational(c), m, j));
        }
        // values whose square is rational: +-sqrt(q) and +-i*sqrt(q)
        let sq = self.mul(self);
        if let Some(q) = sq.as_rational() {
            let is_real = self.conjugate() == *self;
            let emb = self.embed();
            if q.is_positive() && is_real {
                let sign = if emb.re < 0.0 { "-" } else { "" };
                return Some(format!("{}{}", sign, format_sqrt(&q)));
            }
            if q.is_negative() && self.conjugate() == self.negate() {
                let sign = if emb.im < 0.0 { "-" } else { "" };
                return Some(format!("{}i*{}", sign, format_sqrt(&(-q))));
            }
        }
        // rational multiple of a single root of unity times sqrt: c*sqrt(q)*zetaM^j
        if let Some((j, c)) = sq.single_term() {
            if c.is_positive() && j % 2 == 0 {
                let m = sq.conductor;
                let half = Self::root_of_unity(m, (j / 2) as i64);
                let r = self.div(&half);
                if let Some(rsq) = r.mul(&r).as_rational() {
                    if rsq.is_positive() && r.conjugate() == r {
                        let sign = if r.embed().re < 0.0 { "-" } else { "" };
                        return Some(format!(
                            "{}{}*zeta{}^{}",
                            sign,
                            format_sqrt(&rsq),
                            m,
                            j / 2
                        ));
                    }
                }
            }
        }
        None
    }
}

//! U(1) Reshetikhin-Turaev invariants of surgery-presented 3-manifolds,
//! their subgroup refinements, exact signatures, lens-space closed forms,
//! the Gauss-sum reciprocity identity, and the presentation catalog.
//!
//! The invariant of the manifold presented by a surgery matrix `B` of size
//! `N` at coupling `k` is
//! `(2k)^{-N/2} * e^{i pi sigma(B)/4} * sum_c zeta_4k^{-(c^T B c)}`,
//! the colour sum running over `{0..2k-1}^N`. Restricting colours to the
//! order-`p` subgroup of `Z_2k` and normalizing by the matching Gauss
//! factor gives the subgroup invariant. Everything is exact: square roots
//! arrive as Gauss sums and the signature is computed by rational congruence
//! diagonalization.

use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{CyclotomicNumber, Rational};
use crate::links::{check_square_symmetric, Coupling};
use crate::observables::{vacuum_sum, ColourSum};
use crate::{Error, Result, ENUMERATION_BOUND};

/// Inertia of a symmetric integer matrix: the counts of positive, negative
/// and zero eigenvalues, computed exactly. Invariant under congruence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureTriple {
    n_plus: usize,
    n_minus: usize,
    n_zero: usize,
}

impl SignatureTriple {
    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn n_zero(&self) -> usize {
        self.n_zero
    }

    pub fn size(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// The signature `sigma = n_plus - n_minus`.
    pub fn sigma(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

/// Exact inertia by symmetric Gaussian elimination over the rationals
/// (Lagrange congruence diagonalization; Sylvester's law makes the counts
/// well defined). A zero pivot whose row is not yet clear is repaired by a
/// swap with a nonzero diagonal entry, or by adding the offending row and
/// column when no such entry exists.
pub fn signature(matrix: &[Vec<i64>]) -> Result<SignatureTriple> {
    check_square_symmetric(matrix)?;
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .map(|row| row.iter().map(|&e| Rational::from_integer(e.into())).collect())
        .collect();
    let mut triple = SignatureTriple { n_plus: 0, n_minus: 0, n_zero: 0 };

    for t in 0..n {
        if a[t][t].is_zero() {
            if let Some(r) = (t + 1..n).find(|&r| !a[r][t].is_zero()) {
                if !a[r][r].is_zero() {
                    // congruence by the swap of rows/columns t and r
                    a.swap(t, r);
                    for row in a.iter_mut() {
                        row.swap(t, r);
                    }
                } else {
                    // hyperbolic pair: add row r and column r onto t,
                    // producing the pivot 2*a[t][r] != 0
                    for j in 0..n {
                        let v = a[r][j].clone();
                        a[t][j] += v;
                    }
                    for i in 0..n {
                        let v = a[i][r].clone();
                        a[i][t] += v;
                    }
                }
            }
        }
        if a[t][t].is_zero() {
            triple.n_zero += 1;
            continue;
        }
        if a[t][t].is_positive() {
            triple.n_plus += 1;
        } else {
            triple.n_minus += 1;
        }
        for r in t + 1..n {
            if a[r][t].is_zero() {
                continue;
            }
            let f = &a[r][t] / &a[t][t];
            for j in 0..n {
                let v = &f * &a[t][j];
                a[r][j] -= v;
            }
            for i in 0..n {
                let v = &f * &a[i][t];
                a[i][r] -= v;
            }
        }
    }
    Ok(triple)
}

/// A manifold invariant value, tagged with the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldInvariant {
    value: CyclotomicNumber,
    k: Coupling,
    subgroup_p: Option<i64>,
    presentation_size: usize,
}

impl ManifoldInvariant {
    pub fn value(&self) -> &CyclotomicNumber {
        &self.value
    }

    pub fn coupling(&self) -> Coupling {
        self.k
    }

    /// The subgroup order `p`, for subgroup invariants.
    pub fn subgroup(&self) -> Option<i64> {
        self.subgroup_p
    }

    /// Number of surgery components of the presentation the value came from.
    pub fn presentation_size(&self) -> usize {
        self.presentation_size
    }
}

/// The U(1) Reshetikhin-Turaev invariant of the manifold presented by `b`.
/// Orientation reversal of the manifold conjugates the value.
pub fn rt_invariant(b: &[Vec<i64>], k: Coupling) -> Result<ManifoldInvariant> {
    rt_invariant_with_workers(b, k, 1)
}

/// [`rt_invariant`] with the colour enumeration partitioned across
/// `workers` threads; the value is identical for every worker count.
pub fn rt_invariant_with_workers(
    b: &[Vec<i64>],
    k: Coupling,
    workers: usize,
) -> Result<ManifoldInvariant> {
    let sig = signature(b)?;
    let sum = vacuum_sum(b, k, workers)?;
    let scale = CyclotomicNumber::sqrt_positive_integer(k.two_k() as u64).pow(-(b.len() as i64));
    let phase = CyclotomicNumber::root_of_unity(8, sig.sigma());
    Ok(ManifoldInvariant {
        value: scale.mul(&phase).mul(&sum),
        k,
        subgroup_p: None,
        presentation_size: b.len(),
    })
}

/// The subgroup generalization: colours restricted to the order-`p`
/// subgroup `{0, d, 2d, ...}` of `Z_2k` (where `d = 2k/p`), with the
/// normalization built from the restricted Gauss factor
/// `G = sum_{b<p} e^{-i pi d b^2 / p} = a e^{-i phi}`:
/// the value is `G^{-n+} * conj(G)^{-n-} * a^{-n0}` times the restricted
/// colour sum, which reduces to [`rt_invariant`] at `p = 2k`.
pub fn subgroup_invariant(b: &[Vec<i64>], k: Coupling, p: i64) -> Result<ManifoldInvariant> {
    subgroup_invariant_with_workers(b, k, p, 1)
}

/// [`subgroup_invariant`] with a partitioned colour enumeration.
pub fn subgroup_invariant_with_workers(
    b: &[Vec<i64>],
    k: Coupling,
    p: i64,
    workers: usize,
) -> Result<ManifoldInvariant> {
    check_square_symmetric(b)?;
    if p < 1 || k.two_k() % p != 0 {
        return Err(Error::SubgroupOrder { p, two_k: k.two_k() });
    }
    let d = k.two_k() / p;
    let gauss = subgroup_gauss_factor(p, d);
    if gauss.is_zero() {
        return Err(Error::SubgroupUndefined { p, k: k.k() });
    }
    let sig = signature(b)?;
    let sum = ColourSum {
        matrix: b,
        linear: vec![0; b.len()],
        constant: 0,
        range: p,
        step: d,
        modulus: k.four_k(),
    }
    .evaluate(workers)?;

    let conj = gauss.conjugate();
    let mut factor = gauss.pow(-(sig.n_plus() as i64)).mul(&conj.pow(-(sig.n_minus() as i64)));
    if sig.n_zero() > 0 {
        // |G| itself is needed only for null directions; |G|^2 is always a
        // positive rational integer when G != 0
        let norm = gauss
            .mul(&conj)
            .as_rational()
            .expect("G * conj(G) must be rational");
        assert!(
            norm.is_integer() && norm.is_positive(),
            "G * conj(G) must be a positive integer, got {norm}"
        );
        let magnitude = CyclotomicNumber::sqrt_positive_integer(
            u64::try_from(norm.to_integer()).expect("Gauss norm exceeds u64"),
        );
        factor = factor.mul(&magnitude.pow(-(sig.n_zero() as i64)));
    }
    Ok(ManifoldInvariant {
        value: factor.mul(&sum),
        k,
        subgroup_p: Some(p),
        presentation_size: b.len(),
    })
}

/// `G = sum_{b=0}^{p-1} zeta_2p^{-d b^2}`, the one-component vacuum factor
/// of the subgroup theory.
fn subgroup_gauss_factor(p: i64, d: i64) -> CyclotomicNumber {
    let m = 2 * p;
    let mut coeffs = vec![Rational::zero(); m as usize];
    for b in 0..p {
        let e = (-(d * ((b * b) % m))).rem_euclid(m) as usize;
        coeffs[e] += Rational::one();
    }
    CyclotomicNumber::from_coefficients(m as u64, coeffs)
}

/// The closed form for the lens space obtained by integer `p`-surgery on
/// the unknot: `p^{-1/2} * sum_{n<p} e^{2 pi i k n^2 / p}`.
pub fn lens_closed_form(p: i64, k: Coupling) -> Result<ManifoldInvariant> {
    if p < 2 {
        return Err(Error::InvalidLensParameters { p, r: 1 });
    }
    let mut coeffs = vec![Rational::zero(); p as usize];
    for n in 0..p {
        let e = ((k.k() % p) * ((n * n) % p)).rem_euclid(p) as usize;
        coeffs[e] += Rational::one();
    }
    let sum = CyclotomicNumber::from_coefficients(p as u64, coeffs);
    let value = sum.div(&CyclotomicNumber::sqrt_positive_integer(p as u64));
    Ok(ManifoldInvariant { value, k, subgroup_p: None, presentation_size: 1 })
}

/// Checks the Gauss-sum reciprocity identity
/// `sum_{n<|c|} e^{-(i pi/c)(a n^2 + b n)} =
///  sqrt|c/a| * e^{-(i pi/4ac)(|ac| - b^2)} * sum_{n<|a|} e^{(i pi/a)(c n^2 + b n)}`
/// by exact evaluation of both sides in `Q(zeta_8|ac|)`.
/// Requires `ac != 0` and `ac + b` even.
pub fn reciprocity_check(a: i64, b: i64, c: i64) -> Result<bool> {
    let ac = (a as i128) * (c as i128);
    if ac == 0 || (ac + b as i128) % 2 != 0 {
        return Err(Error::ReciprocityHypothesis { a, b, c });
    }
    let conductor = 8 * ac.unsigned_abs();
    if conductor > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound { terms: conductor });
    }

    let left = quadratic_linear_sum(c.unsigned_abs(), 2 * c.abs(), -c.signum(), a, b);
    let right = quadratic_linear_sum(a.unsigned_abs(), 2 * a.abs(), a.signum(), c, b);
    let phase_exponent = {
        let m = conductor as i128;
        let e = (-(ac.signum()) * (ac.abs() - (b as i128) * (b as i128))).rem_euclid(m);
        i64::try_from(e).expect("reduced exponent fits i64")
    };
    let phase = CyclotomicNumber::root_of_unity(conductor as u64, phase_exponent);

    // compare after multiplying through by sqrt|a|: no inverses needed
    let lhs = CyclotomicNumber::sqrt_positive_integer(a.unsigned_abs()).mul(&left);
    let rhs = CyclotomicNumber::sqrt_positive_integer(c.unsigned_abs())
        .mul(&phase)
        .mul(&right);
    Ok(lhs == rhs)
}

/// `sum_{n=0}^{count-1} zeta_modulus^{mult * (quad n^2 + lin n)}`, with the
/// exponent reduced eagerly so nothing overflows.
fn quadratic_linear_sum(count: u64, modulus: i64, mult: i64, quad: i64, lin: i64) -> CyclotomicNumber {
    let m = modulus;
    let quad = quad.rem_euclid(m);
    let lin = lin.rem_euclid(m);
    let mut coeffs = vec![Rational::zero(); m as usize];
    for n in 0..count as i64 {
        let poly = (quad * ((n * n) % m) + lin * (n % m)) % m;
        let e = (mult * poly).rem_euclid(m) as usize;
        coeffs[e] += Rational::one();
    }
    CyclotomicNumber::from_coefficients(m as u64, coeffs)
}

/// Surgery presentation of the lens space `L_{p/r}`: the chain of unknots
/// whose integer coefficients are the negative continued fraction of `p/r`
/// (`p/r = a_1 - 1/(a_2 - 1/(...))` with every `a_i >= 2`), as a tridiagonal
/// matrix. `r = 1` gives the single unknot `[[p]]`.
pub fn lens_presentation(p: i64, r: i64) -> Result<Vec<Vec<i64>>> {
    if r == 1 && p >= 1 {
        return Ok(vec![vec![p]]);
    }
    if p < 2 || r < 1 || r >= p || gcd(p, r) != 1 {
        return Err(Error::InvalidLensParameters { p, r });
    }
    let mut chain = Vec::new();
    let (mut num, mut den) = (p, r);
    while den > 0 {
        let a = num.div_euclid(den) + i64::from(num.rem_euclid(den) != 0); // ceil
        chain.push(a);
        let next = a * den - num;
        num = den;
        den = next;
    }
    let n = chain.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for (i, &a) in chain.iter().enumerate() {
        matrix[i][i] = a;
        if i + 1 < n {
            matrix[i][i + 1] = 1;
            matrix[i + 1][i] = 1;
        }
    }
    Ok(matrix)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Surgery presentation of the product of a genus-`g` surface with the
/// circle: `2g+1` zero-framed, unlinked components.
pub fn genus_times_circle(g: usize) -> Vec<Vec<i64>> {
    let n = 2 * g + 1;
    vec![vec![0; n]; n]
}

/// Block-diagonal join of two surgery presentations: presents the connected
/// sum of the two manifolds, and the invariant multiplies.
pub fn connected_sum(b1: &[Vec<i64>], b2: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n1, n2) = (b1.len(), b2.len());
    let mut out = vec![vec![0i64; n1 + n2]; n1 + n2];
    for (i, row) in b1.iter().enumerate() {
        out[i][..n1].clone_from_slice(row);
    }
    for (i, row) in b2.iter().enumerate() {
        out[n1 + i][n1..].clone_from_slice(row);
    }
    out
}

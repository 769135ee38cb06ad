//! Wilson-line expectation values: the closed form in the 3-sphere, the
//! colour-sum ratio in a surgery-presented manifold, the closed form over
//! homology spheres, and the push-to-sphere construction that trades a
//! homologically trivial link in a manifold for an equivalent link in the
//! 3-sphere.
//!
//! The engine behind the surgery values is a single enumeration: the
//! quadratic exponent `c^T B c + 2 c^T v + w` is accumulated as an integer
//! histogram over `Z_4k` while `c` runs through the colour lattice, and the
//! histogram is folded into one cyclotomic number at the end. Histograms
//! from disjoint parts of the colour space add pointwise, which is what the
//! optional worker partitioning exploits; the result is identical for every
//! worker count.

use crate::cyclotomic::{CyclotomicNumber, Rational};
use crate::homology::{is_homologically_trivial, link_homology_class};
use crate::links::{AmbientLinkPresentation, ColouredLinkingData, Coupling};
use crate::{Error, Result, ENUMERATION_BOUND};

/// A Wilson-line expectation value.
///
/// `defined` separates the two ways an observable can fail to be an honest
/// root of unity: a genuine zero (a defined value — the link is
/// homologically nontrivial) keeps `defined = true` with a zero `value`,
/// while a vanishing colour-sum denominator yields an undefined observable
/// with no value at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservableValue {
    value: CyclotomicNumber,
    defined: bool,
}

impl ObservableValue {
    fn of(value: CyclotomicNumber) -> Self {
        ObservableValue { value, defined: true }
    }

    pub fn undefined() -> Self {
        ObservableValue { value: CyclotomicNumber::zero(1), defined: false }
    }

    pub fn is_defined(&self) -> bool {
        self.defined
    }

    /// The value, when defined.
    pub fn value(&self) -> Option<&CyclotomicNumber> {
        if self.defined { Some(&self.value) } else { None }
    }

    /// The value, with an undefined observable reported as the error it is.
    pub fn require(&self) -> Result<&CyclotomicNumber> {
        self.value().ok_or(Error::UndefinedObservable)
    }
}

impl std::fmt::Display for ObservableValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{}", v),
            None => write!(f, "undefined"),
        }
    }
}

// ---------------------------------------------------------------------------
// Colour-space enumeration
// ---------------------------------------------------------------------------

/// `sum over c of zeta_modulus^{-(c^T B c + 2 c^T v + w)}` with each
/// coordinate of `c` ranging over `{0, step, 2*step, ..., (range-1)*step}`.
pub(crate) struct ColourSum<'a> {
    pub matrix: &'a [Vec<i64>],
    pub linear: Vec<i64>,
    pub constant: i64,
    pub range: i64,
    pub step: i64,
    pub modulus: i64,
}

impl ColourSum<'_> {
    /// Evaluates the sum exactly, optionally partitioning the first colour
    /// coordinate across `workers` threads. The result does not depend on
    /// the worker count: partial histograms add pointwise.
    pub fn evaluate(&self, workers: usize) -> Result<CyclotomicNumber> {
        let n = self.matrix.len();
        let terms = (self.range.max(1) as u128)
            .checked_pow(n as u32)
            .filter(|&t| t <= ENUMERATION_BOUND)
            .ok_or(Error::EnumerationBound { terms: u128::MAX })?;
        if terms > ENUMERATION_BOUND || self.modulus as u128 > ENUMERATION_BOUND {
            return Err(Error::EnumerationBound { terms: terms.max(self.modulus as u128) });
        }

        // only the exponent's residue matters — reduce the data first so
        // that no intermediate product can overflow (see bounds below)
        let m = self.modulus;
        let b: Vec<Vec<i64>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|&e| e.rem_euclid(m)).collect())
            .collect();
        let lin: Vec<i64> = self.linear.iter().map(|&e| e.rem_euclid(m)).collect();
        let constant = self.constant.rem_euclid(m);

        let hist = if n == 0 {
            let mut h = vec![0u64; m as usize];
            h[constant as usize] += 1;
            h
        } else {
            let workers = workers.max(1).min(self.range as usize);
            if workers == 1 {
                let mut h = vec![0u64; m as usize];
                let mut lin = lin.clone();
                enumerate(&b, &mut lin, &mut h, constant, 0, 0..self.range, self.range, self.step, m);
                h
            } else {
                let chunk = |w: usize| -> std::ops::Range<i64> {
                    let r = self.range as usize;
                    ((w * r / workers) as i64)..(((w + 1) * r / workers) as i64)
                };
                let partials: Vec<Vec<u64>> = std::thread::scope(|scope| {
                    let handles: Vec<_> = (0..workers)
                        .map(|w| {
                            let b = &b;
                            let lin = &lin;
                            let first = chunk(w);
                            scope.spawn(move || {
                                let mut h = vec![0u64; m as usize];
                                let mut lin = lin.clone();
                                enumerate(b, &mut lin, &mut h, constant, 0, first, self.range, self.step, m);
                                h
                            })
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("enumeration worker")).collect()
                });
                let mut h = vec![0u64; m as usize];
                for partial in partials {
                    for (acc, c) in h.iter_mut().zip(partial) {
                        *acc += c;
                    }
                }
                h
            }
        };

        // fold counts into sum_r hist[r] * zeta^{-r}
        let mut coeffs = vec![Rational::zero(); m as usize];
        for (r, &count) in hist.iter().enumerate() {
            if count > 0 {
                let e = (m as usize - r) % m as usize;
                coeffs[e] = Rational::from_integer(count.into());
            }
        }
        Ok(CyclotomicNumber::from_coefficients(m as u64, coeffs))
    }
}

use num_traits::Zero;

/// Walks coordinates `depth..n`, the first over `first * step`, the rest
/// over the full range, keeping the partial exponent `acc` and the linear
/// field `lin` (which already includes contributions of fixed coordinates).
///
/// Inputs are reduced mod `m`, and coordinate values are below `range*step
/// <= m`, so every product here stays within `i64` for any `m` within the
/// enumeration bound.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    b: &[Vec<i64>],
    lin: &mut [i64],
    hist: &mut [u64],
    acc: i64,
    depth: usize,
    first: std::ops::Range<i64>,
    range: i64,
    step: i64,
    m: i64,
) {
    let n = b.len();
    let bjj = b[depth][depth];
    if depth + 1 == n {
        let lj = lin[depth] % m;
        for idx in first {
            let x = idx * step;
            let q = (bjj * ((x * x) % m) + 2 * x * lj) % m;
            hist[(acc + q).rem_euclid(m) as usize] += 1;
        }
        return;
    }
    for idx in first {
        let x = idx * step;
        let q = (bjj * ((x * x) % m) + 2 * x * (lin[depth] % m)) % m;
        let acc2 = (acc + q).rem_euclid(m);
        if x != 0 {
            for t in depth + 1..n {
                lin[t] += b[t][depth] * x;
            }
        }
        enumerate(b, lin, hist, acc2, depth + 1, 0..range, range, step, m);
        if x != 0 {
            for t in depth + 1..n {
                lin[t] -= b[t][depth] * x;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Expectation value of a coloured link in the 3-sphere:
/// `zeta_4k^{-(q^T L q)}`, always defined.
pub fn observable_s3(link: &ColouredLinkingData, k: Coupling) -> ObservableValue {
    ObservableValue::of(CyclotomicNumber::root_of_unity(
        k.four_k() as u64,
        -link.quadratic_form(),
    ))
}

/// Expectation value of the observed link in the surgery-presented
/// manifold: the ratio of the coloured colour sum to the vacuum colour sum.
/// A vanishing numerator over a nonvanishing denominator is the genuine
/// value 0; a vanishing denominator leaves the observable undefined.
pub fn observable_surgery(p: &AmbientLinkPresentation, k: Coupling) -> Result<ObservableValue> {
    observable_surgery_with_workers(p, k, 1)
}

/// [`observable_surgery`] with the colour enumeration partitioned across
/// `workers` threads; the value is identical for every worker count.
pub fn observable_surgery_with_workers(
    p: &AmbientLinkPresentation,
    k: Coupling,
    workers: usize,
) -> Result<ObservableValue> {
    let numerator = ColourSum {
        matrix: p.surgery_matrix(),
        linear: link_homology_class(p),
        constant: p.link().quadratic_form(),
        range: k.two_k(),
        step: 1,
        modulus: k.four_k(),
    }
    .evaluate(workers)?;
    let denominator = vacuum_sum(p.surgery_matrix(), k, workers)?;
    if denominator.is_zero() {
        return Ok(ObservableValue::undefined());
    }
    Ok(ObservableValue::of(numerator.div(&denominator)))
}

/// The vacuum colour sum `sum_c zeta_4k^{-(c^T B c)}` — the denominator of
/// every surgery observable and the raw sum behind the manifold invariants.
pub(crate) fn vacuum_sum(b: &[Vec<i64>], k: Coupling, workers: usize) -> Result<CyclotomicNumber> {
    ColourSum {
        matrix: b,
        linear: vec![0; b.len()],
        constant: 0,
        range: k.two_k(),
        step: 1,
        modulus: k.four_k(),
    }
    .evaluate(workers)
}

/// The closed form available when the surgery block is a split diagonal of
/// `+1`/`-1` entries (a homology-sphere presentation): with cross-charges
/// `t = C q`, the observable is `zeta_4k^{-(q^T L q - sum_i eps_i t_i^2)}`.
/// Always equal to [`observable_surgery`] on such presentations.
pub fn observable_split_homology_sphere(
    p: &AmbientLinkPresentation,
    k: Coupling,
) -> Result<ObservableValue> {
    let b = p.surgery_matrix();
    for (i, row) in b.iter().enumerate() {
        let diagonal_ok = row[i] == 1 || row[i] == -1;
        let split = row.iter().enumerate().all(|(j, &e)| i == j || e == 0);
        if !diagonal_ok || !split {
            return Err(Error::NotSplitForm);
        }
    }
    let t = link_homology_class(p);
    let twist: i64 = b.iter().enumerate().map(|(i, row)| row[i] * t[i] * t[i]).sum();
    let exponent = p.link().quadratic_form() - twist;
    Ok(ObservableValue::of(CyclotomicNumber::root_of_unity(k.four_k() as u64, -exponent)))
}

/// Trades a homologically trivial (mod `2k`) link in the presented manifold
/// for a link in the 3-sphere with the same expectation value.
///
/// The observed link is first expanded to its simplicial satellite; a
/// witness `n` of `B n ≡ t (mod 2k)` is lifted to representatives in
/// `(-k, k]`, and `|n_i|` parallel copies of the i-th surgery framing are
/// appended (orientation-reversed when `n_i > 0`, so the total homology
/// class cancels). The returned link satisfies
/// `observable_s3(result) = observable_surgery(input)` whenever the latter
/// is defined.
pub fn push_to_sphere(p: &AmbientLinkPresentation, k: Coupling) -> Result<ColouredLinkingData> {
    let sat = p.simplicial_satellite();
    let Some(witness) = is_homologically_trivial(&sat, Some(k.two_k())) else {
        return Err(Error::NotHomologicallyTrivial { modulus: k.two_k() });
    };
    let witness: Vec<i64> = witness
        .into_iter()
        .map(|n| {
            let n = n.rem_euclid(k.two_k());
            if n > k.k() { n - k.two_k() } else { n }
        })
        .collect();

    let b = sat.surgery_matrix();
    let cross = sat.cross_matrix();
    let nl = sat.link().size();
    // one (origin, sign) entry per appended framing copy
    let copies: Vec<(usize, i64)> = witness
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| std::iter::repeat((i, -n.signum())).take(n.unsigned_abs() as usize))
        .collect();

    let total = nl + copies.len();
    let mut matrix = vec![vec![0i64; total]; total];
    for (r, row) in sat.link().matrix().iter().enumerate() {
        matrix[r][..nl].clone_from_slice(row);
    }
    for (a, &(i, s)) in copies.iter().enumerate() {
        let r = nl + a;
        for beta in 0..nl {
            matrix[r][beta] = s * cross[i][beta];
            matrix[beta][r] = s * cross[i][beta];
        }
        matrix[r][r] = b[i][i];
        for (abis, &(j, sj)) in copies.iter().enumerate().skip(a + 1) {
            let c = nl + abis;
            let e = if i == j { b[i][i] } else { s * sj * b[i][j] };
            matrix[r][c] = e;
            matrix[c][r] = e;
        }
    }
    ColouredLinkingData::with_unit_colours(matrix)
}

/// Disjointly adds a zero-framed, unlinked unknot of the given colour to
/// the observed link and reports whether the observable is unchanged
/// (it always is, whenever defined).
pub fn unknot_union_check(
    p: &AmbientLinkPresentation,
    colour: i64,
    k: Coupling,
) -> Result<bool> {
    let unknot = ColouredLinkingData::new(vec![vec![0]], vec![colour])?;
    let link = p.link().disjoint_union(&unknot);
    let cross = p
        .cross_matrix()
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.push(0);
            row
        })
        .collect();
    let extended = p.with_link(cross, link)?;
    let before = observable_surgery(p, k)?;
    let after = observable_surgery(&extended, k)?;
    Ok(before.require()? == after.require()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(matrix: Vec<Vec<i64>>, colours: Vec<i64>) -> ColouredLinkingData {
        ColouredLinkingData::new(matrix, colours).unwrap()
    }

    fn coupling(k: i64) -> Coupling {
        Coupling::new(k).unwrap()
    }

    fn zeta(m: u64, e: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(m, e)
    }

    #[test]
    fn sphere_observable_of_zero_framed_unknot() {
        let l = link(vec![vec![0]], vec![7]);
        for k in 1..=5 {
            let v = observable_s3(&l, coupling(k));
            assert_eq!(v.value().unwrap(), &CyclotomicNumber::one());
        }
    }

    #[test]
    fn sphere_observable_of_framed_unknot() {
        let l = link(vec![vec![1]], vec![1]);
        let v = observable_s3(&l, coupling(1));
        assert_eq!(v.value().unwrap(), &zeta(4, 3)); // -i
    }

    #[test]
    fn sphere_observable_of_hopf_pair() {
        let l = link(vec![vec![0, 1], vec![1, 0]], vec![1, 1]);
        let v = observable_s3(&l, coupling(1));
        assert_eq!(v.value().unwrap(), &CyclotomicNumber::from_integer(-1));
    }

    #[test]
    fn empty_surgery_reduces_to_sphere() {
        let l = link(vec![vec![2, -1], vec![-1, 3]], vec![2, 1]);
        let p = AmbientLinkPresentation::in_sphere(l.clone());
        for k in 1..=3 {
            let s = observable_surgery(&p, coupling(k)).unwrap();
            assert_eq!(s, observable_s3(&l, coupling(k)));
        }
    }

    #[test]
    fn nontrivial_class_in_free_homology_gives_zero() {
        // charge 1 through the zero-framed handle: defined, exactly zero
        let p = AmbientLinkPresentation::new(
            vec![vec![0]],
            vec![vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        let v = observable_surgery(&p, coupling(2)).unwrap();
        assert!(v.is_defined());
        assert!(v.value().unwrap().is_zero());
    }

    #[test]
    fn class_divisible_by_two_k_gives_one() {
        for k in 1..=3i64 {
            let p = AmbientLinkPresentation::new(
                vec![vec![0]],
                vec![vec![2 * k]],
                link(vec![vec![0]], vec![1]),
            )
            .unwrap();
            let v = observable_surgery(&p, coupling(k)).unwrap();
            assert_eq!(v.value().unwrap(), &CyclotomicNumber::one());
        }
    }

    #[test]
    fn vanishing_denominator_is_undefined() {
        // sum_{c mod 4} zeta_8^{-4c^2} = 1 - 1 + 1 - 1 = 0
        let p = AmbientLinkPresentation::new(
            vec![vec![4]],
            vec![vec![0]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        let v = observable_surgery(&p, coupling(2)).unwrap();
        assert!(!v.is_defined());
        assert!(matches!(v.require(), Err(Error::UndefinedObservable)));
    }

    #[test]
    fn split_closed_form_single_twist() {
        let p = AmbientLinkPresentation::new(
            vec![vec![1]],
            vec![vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        let v = observable_split_homology_sphere(&p, coupling(1)).unwrap();
        assert_eq!(v.value().unwrap(), &zeta(4, 1)); // i
        let w = observable_surgery(&p, coupling(1)).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn split_closed_form_cancelling_twists() {
        let p = AmbientLinkPresentation::new(
            vec![vec![1, 0], vec![0, -1]],
            vec![vec![1], vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        for k in 1..=3 {
            let v = observable_split_homology_sphere(&p, coupling(k)).unwrap();
            assert_eq!(v.value().unwrap(), &CyclotomicNumber::one());
        }
    }

    #[test]
    fn split_closed_form_rejects_other_blocks() {
        let p = AmbientLinkPresentation::manifold_only(vec![vec![5]]).unwrap();
        assert!(matches!(
            observable_split_homology_sphere(&p, coupling(2)),
            Err(Error::NotSplitForm)
        ));
    }

    #[test]
    fn trivial_cross_push_is_satellite() {
        let l = link(vec![vec![2, 1], vec![1, 0]], vec![2, 1]);
        let p = AmbientLinkPresentation::new(
            vec![vec![3]],
            vec![vec![0, 0]],
            l.clone(),
        )
        .unwrap();
        let pushed = push_to_sphere(&p, coupling(2)).unwrap();
        assert_eq!(pushed, l.simplicial_satellite());
    }

    #[test]
    fn push_to_sphere_matches_enumeration() {
        let p = AmbientLinkPresentation::new(
            vec![vec![5]],
            vec![vec![5]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        let k = coupling(2);
        let pushed = push_to_sphere(&p, k).unwrap();
        let direct = observable_surgery(&p, k).unwrap();
        assert_eq!(observable_s3(&pushed, k), direct);
    }

    #[test]
    fn push_to_sphere_single_twist() {
        let p = AmbientLinkPresentation::new(
            vec![vec![1]],
            vec![vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        let k = coupling(1);
        let pushed = push_to_sphere(&p, k).unwrap();
        let v = observable_s3(&pushed, k);
        assert_eq!(v.value().unwrap(), &zeta(4, 1)); // i, the closed-form value
    }

    #[test]
    fn push_to_sphere_needs_a_witness() {
        let p = AmbientLinkPresentation::new(
            vec![vec![0]],
            vec![vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        assert!(matches!(
            push_to_sphere(&p, coupling(2)),
            Err(Error::NotHomologicallyTrivial { modulus: 4 })
        ));
    }

    #[test]
    fn unknot_union_is_invisible() {
        let sphere = AmbientLinkPresentation::in_sphere(link(vec![vec![3]], vec![2]));
        assert!(unknot_union_check(&sphere, 5, coupling(2)).unwrap());
        let p = AmbientLinkPresentation::new(
            vec![vec![2]],
            vec![vec![1]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        assert!(unknot_union_check(&p, 3, coupling(2)).unwrap());
    }

    #[test]
    fn unknot_union_propagates_undefined() {
        let p = AmbientLinkPresentation::new(
            vec![vec![4]],
            vec![vec![0]],
            link(vec![vec![0]], vec![1]),
        )
        .unwrap();
        assert!(matches!(
            unknot_union_check(&p, 1, coupling(2)),
            Err(Error::UndefinedObservable)
        ));
    }

    #[test]
    fn worker_partitioning_is_deterministic() {
        let p = AmbientLinkPresentation::new(
            vec![vec![3, 1, 0], vec![1, -2, 2], vec![0, 2, 4]],
            vec![vec![1], vec![0], vec![2]],
            link(vec![vec![1]], vec![2]),
        )
        .unwrap();
        let k = coupling(3);
        let serial = observable_surgery(&p, k).unwrap();
        for workers in [2, 3, 5, 8] {
            assert_eq!(observable_surgery_with_workers(&p, k, workers).unwrap(), serial);
        }
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        // (2k)^N = 20^7 > 10^8
        let b = vec![vec![0; 7]; 7];
        let p = AmbientLinkPresentation::manifold_only(b).unwrap();
        assert!(matches!(
            observable_surgery(&p, coupling(10)),
            Err(Error::EnumerationBound { .. })
        ));
    }
}

//! Integer linear algebra for surgery presentations: Smith normal form,
//! first homology of the presented manifold, and homological triviality of
//! an observed link, with explicit witnesses.
//!
//! The first homology of the manifold presented by a surgery link with
//! linking matrix `B` is the cokernel `Z^N / im(B)`; its isomorphism type is
//! read off the Smith normal form. Whether a coloured link bounds in the
//! manifold reduces to solving `B n = t` (optionally mod `2k`) for the
//! vector `t` of total cross-charges.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::links::{check_square_symmetric, AmbientLinkPresentation};
use crate::Result;

fn to_big(matrix: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    matrix.iter().map(|row| row.iter().map(|&e| BigInt::from(e)).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

/// A Smith normal form `U * B * V = D`: `U`, `V` unimodular, `D` diagonal
/// with nonnegative entries forming a divisibility chain `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    u: Vec<Vec<BigInt>>,
    d: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn left(&self) -> &[Vec<BigInt>] {
        &self.u
    }

    pub fn diagonal_matrix(&self) -> &[Vec<BigInt>] {
        &self.d
    }

    pub fn right(&self) -> &[Vec<BigInt>] {
        &self.v
    }

    /// The invariant factors `d1 | d2 | ...`, including any zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }
}

/// Smith normal form of a rectangular integer matrix by repeated reduction
/// around a smallest-nonzero pivot, tracking the row and column operations.
/// All arithmetic is over arbitrary-precision integers.
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> SmithDecomposition {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    assert!(matrix.iter().all(|r| r.len() == cols), "matrix rows must have equal length");

    let mut a = to_big(matrix);
    let mut u = identity(rows);
    let mut v = identity(cols);

    let swap_rows = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        a.swap(x, y);
        u.swap(x, y);
    };
    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in v.iter_mut() {
            row.swap(x, y);
        }
    };
    // row[x] -= q * row[y], and the matching update of U
    let row_op = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, x: usize, y: usize, q: &BigInt| {
        for j in 0..cols {
            let t = q * &a[y][j];
            a[x][j] -= t;
        }
        for j in 0..rows {
            let t = q * &u[y][j];
            u[x][j] -= t;
        }
    };
    // col[x] -= q * col[y], and the matching update of V
    let col_op = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, x: usize, y: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = q * &row[y];
            row[x] -= t;
        }
        for row in v.iter_mut() {
            let t = q * &row[y];
            row[x] -= t;
        }
    };

    for t in 0..rows.min(cols) {
        'pivot: loop {
            // smallest nonzero entry of the trailing submatrix becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            if pi != t {
                swap_rows(&mut a, &mut u, t, pi);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_op(&mut a, &mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false; // remainder smaller than the pivot
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_op(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // divisibility: the pivot must divide the whole trailing block
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        let one = BigInt::from(-1);
                        row_op(&mut a, &mut u, t, i, &one); // row t += row i
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
    }

    SmithDecomposition { u, d: a, v }
}

/// The first homology group of a surgery-presented closed 3-manifold:
/// free rank plus torsion coefficients in a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `H1` of the manifold presented by the symmetric surgery matrix `B`:
/// the cokernel of `B`, read off the Smith normal form.
pub fn first_homology(surgery: &[Vec<i64>]) -> Result<HomologyGroup> {
    check_square_symmetric(surgery)?;
    let snf = smith_normal_form(surgery);
    let mut free_rank = 0;
    let mut torsion = Vec::new();
    for d in snf.diagonal() {
        if d.is_zero() {
            free_rank += 1;
        } else if !d.is_one() {
            torsion.push(d);
        }
    }
    Ok(HomologyGroup { free_rank, torsion })
}

/// True iff the presented manifold has trivial first homology, equivalently
/// `|det B| = 1`; both characterizations are computed and must agree.
pub fn is_homology_sphere(surgery: &[Vec<i64>]) -> Result<bool> {
    let trivial = first_homology(surgery)?.is_trivial();
    let unit_det = determinant(surgery).abs().is_one();
    assert_eq!(trivial, unit_det, "homology and determinant tests disagree");
    Ok(trivial)
}

/// Determinant of a square integer matrix by the Bareiss fraction-free
/// elimination; exact, and an independent check on the Smith pipeline.
pub fn determinant(matrix: &[Vec<i64>]) -> BigInt {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_big(matrix);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for t in 0..n - 1 {
        if a[t][t].is_zero() {
            let Some(swap) = (t + 1..n).find(|&i| !a[i][t].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(t, swap);
            sign = -sign;
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let num = &a[i][j] * &a[t][t] - &a[i][t] * &a[t][j];
                a[i][j] = num / &prev; // exact at every step
            }
        }
        prev = a[t][t].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// The homology class of the observed link in the surgery complement,
/// expressed on the meridian generators of the surgery components:
/// `t_i = sum_a colours[a] * cross[i][a]`.
pub fn link_homology_class(p: &AmbientLinkPresentation) -> Vec<i64> {
    let q = p.link().colours();
    p.cross_matrix()
        .iter()
        .map(|row| row.iter().zip(q).map(|(&c, &qa)| c * qa).sum())
        .collect()
}

/// Decides whether the observed link is homologically trivial in the
/// presented manifold — over the integers, or modulo `2k` when a modulus is
/// given — by solving `B n = t` through the Smith decomposition.
///
/// Returns a witness `n` with `B n = t` (respectively `B n ≡ t` mod the
/// modulus) when one exists, and `None` otherwise.
pub fn is_homologically_trivial(
    p: &AmbientLinkPresentation,
    modulus: Option<i64>,
) -> Option<Vec<i64>> {
    let t = link_homology_class(p);
    let witness = solve_linear(p.surgery_matrix(), &t, modulus)?;
    // the witness must satisfy its defining system exactly
    for (i, row) in p.surgery_matrix().iter().enumerate() {
        let lhs: i64 = row.iter().zip(&witness).map(|(&b, &n)| b * n).sum();
        let ok = match modulus {
            Some(m) => (lhs - t[i]).rem_euclid(m) == 0,
            None => lhs == t[i],
        };
        assert!(ok, "witness fails its linear system");
    }
    Some(witness)
}

/// Solves `B n = t` over the integers (or mod `m`) via `U B V = D`:
/// with `y = V^{-1} n`, the system splits into `d_i y_i = (U t)_i`.
fn solve_linear(b: &[Vec<i64>], t: &[i64], modulus: Option<i64>) -> Option<Vec<i64>> {
    let n = b.len();
    let snf = smith_normal_form(b);
    let ut: Vec<BigInt> = (0..n)
        .map(|i| (0..n).map(|j| &snf.u[i][j] * BigInt::from(t[j])).sum())
        .collect();
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..n {
        match modulus {
            None => {
                if diag[i].is_zero() {
                    if !ut[i].is_zero() {
                        return None;
                    }
                } else {
                    let (q, r) = ut[i].div_rem(&diag[i]);
                    if !r.is_zero() {
                        return None;
                    }
                    y[i] = q;
                }
            }
            Some(m) => {
                // d y ≡ u (mod m) is solvable iff gcd(d, m) | u
                let m_big = BigInt::from(m);
                let g = diag[i].gcd(&m_big);
                let (q, r) = ut[i].div_rem(&g);
                if !r.is_zero() {
                    return None;
                }
                if !diag[i].is_zero() {
                    let dm = &diag[i] / &g;
                    let mm = &m_big / &g;
                    if mm.is_one() {
                        y[i] = BigInt::zero();
                    } else {
                        let inv = modular_inverse(&dm, &mm).expect("coprime after gcd split");
                        y[i] = (q * inv).mod_floor(&mm);
                    }
                }
            }
        }
    }
    let witness: Vec<BigInt> =
        (0..n).map(|i| (0..n).map(|j| &snf.v[i][j] * &y[j]).sum()).collect();
    Some(
        witness
            .into_iter()
            .map(|w| {
                let w = match modulus {
                    Some(m) => w.mod_floor(&BigInt::from(m)),
                    None => w,
                };
                i64::try_from(&w).expect("witness entry exceeds i64")
            })
            .collect(),
    )
}

/// Inverse of `a` modulo `m > 1`, when `gcd(a, m) = 1`.
fn modular_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

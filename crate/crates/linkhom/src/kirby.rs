//! Kirby calculus on surgery presentations, at the linking-matrix level:
//! stabilization, handle slides, blow-downs of isolated `+-1` components,
//! reproducible random move sequences, and a certification harness that
//! recomputes every invariant before and after a sequence of moves.
//!
//! Two presentations related by these moves describe the same 3-manifold,
//! so the manifold invariants and every defined observable must come out
//! exactly equal — which is precisely what [`certify_random_moves`] checks.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::homology::{determinant, first_homology, HomologyGroup};
use crate::invariants::{rt_invariant, subgroup_invariant, ManifoldInvariant};
use crate::links::{AmbientLinkPresentation, Coupling};
use crate::observables::{observable_surgery, ObservableValue};
use crate::{Error, Result};

/// A single Kirby move. Indices are 0-based; `Display` prints them 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KirbyMove {
    /// Add a disjoint unknotted surgery component with framing `sign`.
    Stabilize { sign: i64 },
    /// Remove component `index`; inverse of a stabilization.
    Destabilize { index: usize },
    /// Slide component `i` over component `j`, adding (`sign = +1`) or
    /// subtracting (`sign = -1`) the `j`-th row and column onto the `i`-th.
    HandleSlide { i: usize, j: usize, sign: i64 },
}

impl KirbyMove {
    pub fn apply(&self, p: &AmbientLinkPresentation) -> Result<AmbientLinkPresentation> {
        match *self {
            KirbyMove::Stabilize { sign } => Ok(stabilize(p, sign)),
            KirbyMove::Destabilize { index } => destabilize(p, index),
            KirbyMove::HandleSlide { i, j, sign } => handle_slide(p, i, j, sign),
        }
    }
}

impl std::fmt::Display for KirbyMove {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            KirbyMove::Stabilize { sign } => write!(f, "stabilize({:+})", sign),
            KirbyMove::Destabilize { index } => write!(f, "destabilize({})", index + 1),
            KirbyMove::HandleSlide { i, j, sign } => {
                write!(f, "slide({} over {}, {:+})", i + 1, j + 1, sign)
            }
        }
    }
}

/// Appends a `+-1`-framed surgery component linking nothing. The manifold
/// is unchanged; the signature shifts by one on the matching side.
pub fn stabilize(p: &AmbientLinkPresentation, sign: i64) -> AmbientLinkPresentation {
    assert!(sign == 1 || sign == -1, "stabilization framing must be +1 or -1");
    let n = p.surgery_count();
    let mut b: Vec<Vec<i64>> = p.surgery_matrix().to_vec();
    for row in b.iter_mut() {
        row.push(0);
    }
    let mut last = vec![0i64; n + 1];
    last[n] = sign;
    b.push(last);
    let mut cross = p.cross_matrix().to_vec();
    cross.push(vec![0; p.link().size()]);
    AmbientLinkPresentation::new(b, cross, p.link().clone())
        .expect("stabilization preserves validity")
}

/// Slides surgery component `i` over component `j`: the congruence
/// `B -> E^T B E`, `C -> E^T C` with `E = I + sign * (unit at (j, i))`,
/// i.e. row and column `j` are added to (or subtracted from) row and
/// column `i`. Unimodular, so determinant, homology and signature are
/// untouched — and so is every defined observable.
pub fn handle_slide(
    p: &AmbientLinkPresentation,
    i: usize,
    j: usize,
    sign: i64,
) -> Result<AmbientLinkPresentation> {
    assert!(sign == 1 || sign == -1, "slide sign must be +1 or -1");
    let n = p.surgery_count();
    for index in [i, j] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index: index + 1, size: n });
        }
    }
    if i == j {
        return Err(Error::SelfCombination { index: i + 1 });
    }
    let mut b = p.surgery_matrix().to_vec();
    for t in 0..n {
        b[i][t] += sign * b[j][t];
    }
    for t in 0..n {
        b[t][i] += sign * b[t][j];
    }
    let mut cross = p.cross_matrix().to_vec();
    let row_j = cross[j].clone();
    for (e, &add) in cross[i].iter_mut().zip(&row_j) {
        *e += sign * add;
    }
    AmbientLinkPresentation::new(b, cross, p.link().clone())
}

/// Removes surgery component `index`, allowed only when it has framing
/// `+-1` and links nothing (neither surgery nor link components) — the
/// exact inverse of [`stabilize`].
pub fn destabilize(p: &AmbientLinkPresentation, index: usize) -> Result<AmbientLinkPresentation> {
    let n = p.surgery_count();
    if index >= n {
        return Err(Error::IndexOutOfRange { index: index + 1, size: n });
    }
    if !can_destabilize(p, index) {
        return Err(Error::CannotDestabilize { index: index + 1 });
    }
    let b: Vec<Vec<i64>> = p
        .surgery_matrix()
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != index)
        .map(|(_, row)| {
            row.iter().enumerate().filter(|&(c, _)| c != index).map(|(_, &e)| e).collect()
        })
        .collect();
    let cross: Vec<Vec<i64>> = p
        .cross_matrix()
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != index)
        .map(|(_, row)| row.clone())
        .collect();
    AmbientLinkPresentation::new(b, cross, p.link().clone())
}

fn can_destabilize(p: &AmbientLinkPresentation, index: usize) -> bool {
    let b = p.surgery_matrix();
    let isolated = b[index]
        .iter()
        .enumerate()
        .all(|(t, &e)| if t == index { e == 1 || e == -1 } else { e == 0 });
    isolated && p.cross_matrix()[index].iter().all(|&e| e == 0)
}

/// Reproducible generator for move sequences: the linear congruential
/// recurrence `x -> 6364136223846793005 * x + 1442695040888963407` over
/// `u64` (Knuth's MMIX constants), sampled from the top 31 bits. Fixed here
/// so that identical seeds give identical move sequences everywhere.
struct MoveRng {
    state: u64,
}

impl MoveRng {
    fn new(seed: u64) -> Self {
        MoveRng { state: seed }
    }

    fn below(&mut self, n: u64) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.state >> 33) % n
    }

    fn sign(&mut self) -> i64 {
        if self.below(2) == 0 { 1 } else { -1 }
    }
}

/// Applies `length` pseudo-random Kirby moves, deterministically under
/// `(seed, length)`. Draws that are inapplicable in the current state — a
/// stabilization that would push the component count past
/// `max_components`, a blow-down with no eligible component, a slide with
/// fewer than two components — are skipped silently, so the returned log
/// may be shorter than `length`.
pub fn random_move_sequence(
    p: &AmbientLinkPresentation,
    length: usize,
    seed: u64,
    max_components: usize,
) -> (AmbientLinkPresentation, Vec<KirbyMove>) {
    let mut rng = MoveRng::new(seed);
    let mut current = p.clone();
    let mut log = Vec::new();
    for _ in 0..length {
        let n = current.surgery_count();
        // stabilize : destabilize : slide at weights 2 : 1 : 3
        let mv = match rng.below(6) {
            0 | 1 => {
                if n >= max_components {
                    continue;
                }
                KirbyMove::Stabilize { sign: rng.sign() }
            }
            2 => {
                let eligible: Vec<usize> =
                    (0..n).filter(|&i| can_destabilize(&current, i)).collect();
                if eligible.is_empty() {
                    continue;
                }
                KirbyMove::Destabilize {
                    index: eligible[rng.below(eligible.len() as u64) as usize],
                }
            }
            _ => {
                if n < 2 {
                    continue;
                }
                let i = rng.below(n as u64) as usize;
                let mut j = rng.below(n as u64 - 1) as usize;
                if j >= i {
                    j += 1;
                }
                KirbyMove::HandleSlide { i, j, sign: rng.sign() }
            }
        };
        current = mv.apply(&current).expect("generated moves are applicable");
        log.push(mv);
    }
    (current, log)
}

/// Everything [`certify_random_moves`] measured on the two sides of a move
/// sequence. The presentations describe the same manifold, so `passed`
/// demands exact equality of each pair (with "undefined" only ever matching
/// "undefined").
#[derive(Clone, Debug)]
pub struct InvarianceCertificate {
    pub moves: Vec<KirbyMove>,
    pub transformed: AmbientLinkPresentation,
    pub rt_before: ManifoldInvariant,
    pub rt_after: ManifoldInvariant,
    /// One row per divisor `p` of `2k`: `(p, before, after)`, where `None`
    /// records an undefined subgroup invariant (vanishing Gauss factor).
    pub subgroup: Vec<(i64, Option<ManifoldInvariant>, Option<ManifoldInvariant>)>,
    pub homology_before: HomologyGroup,
    pub homology_after: HomologyGroup,
    pub determinant_before: BigInt,
    pub determinant_after: BigInt,
    pub observable_before: ObservableValue,
    pub observable_after: ObservableValue,
}

impl InvarianceCertificate {
    pub fn passed(&self) -> bool {
        self.rt_before.value() == self.rt_after.value()
            && self.subgroup.iter().all(|(_, before, after)| match (before, after) {
                (Some(b), Some(a)) => b.value() == a.value(),
                (None, None) => true,
                _ => false,
            })
            && self.homology_before == self.homology_after
            && self.determinant_before.abs() == self.determinant_after.abs()
            && self.observable_before == self.observable_after
    }
}

/// Runs a random move sequence and recomputes the Reshetikhin-Turaev
/// invariant, every subgroup invariant, first homology, the determinant and
/// the link observable on both sides.
pub fn certify_random_moves(
    p: &AmbientLinkPresentation,
    k: Coupling,
    length: usize,
    seed: u64,
    max_components: usize,
) -> Result<InvarianceCertificate> {
    let (transformed, moves) = random_move_sequence(p, length, seed, max_components);
    let divisors: Vec<i64> = (1..=k.two_k()).filter(|d| k.two_k() % d == 0).collect();
    let subgroup_side = |b: &[Vec<i64>]| -> Result<Vec<Option<ManifoldInvariant>>> {
        divisors
            .iter()
            .map(|&p| match subgroup_invariant(b, k, p) {
                Ok(v) => Ok(Some(v)),
                Err(Error::SubgroupUndefined { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    };
    let before_sub = subgroup_side(p.surgery_matrix())?;
    let after_sub = subgroup_side(transformed.surgery_matrix())?;
    let certificate = InvarianceCertificate {
        rt_before: rt_invariant(p.surgery_matrix(), k)?,
        rt_after: rt_invariant(transformed.surgery_matrix(), k)?,
        subgroup: divisors
            .iter()
            .zip(before_sub.into_iter().zip(after_sub))
            .map(|(&p, (b, a))| (p, b, a))
            .collect(),
        homology_before: first_homology(p.surgery_matrix())?,
        homology_after: first_homology(transformed.surgery_matrix())?,
        determinant_before: determinant(p.surgery_matrix()),
        determinant_after: determinant(transformed.surgery_matrix()),
        observable_before: observable_surgery(p, k)?,
        observable_after: observable_surgery(&transformed, k)?,
        moves,
        transformed,
    };
    Ok(certificate)
}

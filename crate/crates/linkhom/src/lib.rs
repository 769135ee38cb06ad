//! Exact computation of abelian Chern-Simons link observables and U(1)
//! Reshetikhin-Turaev invariants for 3-manifolds presented by surgery on
//! framed links.
//!
//! Everything is driven by linking data: a framed, oriented, coloured link
//! is a symmetric integer matrix of linking numbers (framings on the
//! diagonal) plus an integer colour per component, and a 3-manifold is the
//! result of surgery on such a link in the 3-sphere. On this data the crate
//! computes, in exact cyclotomic arithmetic:
//!
//! - Wilson-line expectation values in the 3-sphere and in surgery-presented
//!   manifolds ([`observables`]), including the closed form available over
//!   homology spheres and the push-to-sphere construction for homologically
//!   trivial links;
//! - the U(1) Reshetikhin-Turaev invariant and its subgroup refinement,
//!   lens-space closed forms, and a Gauss-sum reciprocity check
//!   ([`invariants`]);
//! - first homology of the surgered manifold via Smith normal form, and
//!   homological triviality of a coloured link with explicit witnesses
//!   ([`homology`]);
//! - Kirby moves on presentations and an invariance-certification harness
//!   ([`kirby`]).
//!
//! Values live in cyclotomic fields `Q(zeta_M)` ([`cyclotomic`]) so that
//! every comparison the crate makes is exact; floating point appears only in
//! reported approximations.

pub mod cyclotomic;
pub mod homology;
pub mod invariants;
pub mod io;
pub mod kirby;
pub mod links;
pub mod observables;

pub use cyclotomic::{CyclotomicNumber, Rational};
pub use homology::{HomologyGroup, SmithDecomposition};
pub use invariants::{ManifoldInvariant, SignatureTriple};
pub use kirby::KirbyMove;
pub use links::{AmbientLinkPresentation, ColouredLinkingData, Coupling};
pub use observables::ObservableValue;

/// Hard ceiling on the number of colour states any one enumeration may
/// visit; larger requests fail with [`Error::EnumerationBound`].
pub const ENUMERATION_BOUND: u128 = 100_000_000;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
///
/// Component and entry positions in messages are 1-based, matching the
/// convention of the file formats and command-line output; Rust APIs
/// themselves take 0-based indices.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not symmetric: entry ({row},{col}) = {value} but ({col},{row}) = {transposed}")]
    AsymmetricMatrix { row: usize, col: usize, value: i64, transposed: i64 },

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    RaggedMatrix { row: usize, len: usize, expected: usize },

    #[error("colour vector has {got} entries but the link has {expected} components")]
    ColourLength { expected: usize, got: usize },

    #[error("cross-linking block is {rows}x{cols} but the presentation needs {expected_rows}x{expected_cols}")]
    CrossShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },

    #[error("coupling must be a positive integer, got {0}")]
    InvalidCoupling(i64),

    #[error("component index {index} out of range: the link has {size} components")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("cannot combine component {index} with itself")]
    SelfCombination { index: usize },

    #[error("components {i} and {j} carry different colours ({colour_i} vs {colour_j})")]
    ColourMismatch { i: usize, j: usize, colour_i: i64, colour_j: i64 },

    #[error("observable undefined: the colour-sum denominator vanishes")]
    UndefinedObservable,

    #[error("enumeration bound exceeded: {terms} colour states, limit {ENUMERATION_BOUND}")]
    EnumerationBound { terms: u128 },

    #[error("surgery block is not a split diagonal of +1/-1 entries")]
    NotSplitForm,

    #[error("link class is not homologically trivial mod {modulus}: no witness exists")]
    NotHomologicallyTrivial { modulus: i64 },

    #[error("conductor {from} does not divide {to}")]
    IncompatibleConductor { from: u64, to: u64 },

    #[error("subgroup order {p} does not divide 2k = {two_k}")]
    SubgroupOrder { p: i64, two_k: i64 },

    #[error("subgroup invariant undefined: the Gauss factor vanishes for p = {p}, k = {k}")]
    SubgroupUndefined { p: i64, k: i64 },

    #[error("lens space parameters must satisfy p >= 1, 0 < r < p (or r = 1) and gcd(p, r) = 1; got p = {p}, r = {r}")]
    InvalidLensParameters { p: i64, r: i64 },

    #[error("reciprocity requires a*c != 0 and a*c + b even; got a = {a}, b = {b}, c = {c}")]
    ReciprocityHypothesis { a: i64, b: i64, c: i64 },

    #[error("cannot destabilize component {index}: it must have framing +1 or -1 and link nothing")]
    CannotDestabilize { index: usize },

    #[error("presentation file is invalid: {0}")]
    Parse(String),
}

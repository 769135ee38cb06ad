//! Framed, oriented, coloured links presented by linking data, and the
//! structural moves on them.
//!
//! A link is stored as nothing more than its linking matrix — framings on
//! the diagonal, pairwise linking numbers off it — together with an integer
//! colour (charge) per component. In the abelian theory every observable
//! depends on the link only through this data, so satellites, band sums and
//! disjoint unions all become small matrix transformations.

use crate::{Error, Result};

/// Square symmetric integer matrix check, reporting 1-based positions.
pub(crate) fn check_square_symmetric(matrix: &[Vec<i64>]) -> Result<()> {
    let n = matrix.len();
    for (r, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::RaggedMatrix { row: r + 1, len: row.len(), expected: n });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::AsymmetricMatrix {
                    row: i + 1,
                    col: j + 1,
                    value: matrix[i][j],
                    transposed: matrix[j][i],
                });
            }
        }
    }
    Ok(())
}

/// The coupling constant `k` of the theory. Colours are defined modulo
/// `2k` and observable exponents modulo `4k`.
///
/// Only positive `k` is represented; the theory at `-k` gives the complex
/// conjugates of every value computed here, so orientation reversal is
/// exposed as conjugation of results rather than as a negative coupling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coupling {
    k: i64,
}

impl Coupling {
    pub fn new(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidCoupling(k));
        }
        Ok(Coupling { k })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// The colour modulus `2k`.
    pub fn two_k(&self) -> i64 {
        2 * self.k
    }

    /// The exponent modulus `4k`: observables are `4k`-th roots of unity.
    pub fn four_k(&self) -> i64 {
        4 * self.k
    }
}

/// A framed, oriented, coloured link, presented by linking data only.
///
/// `matrix[i][j]` is the linking number of components `i` and `j`;
/// `matrix[i][i]` is the framing self-linking of component `i` (the linking
/// of the component with its framing curve); `colours[i]` is the integer
/// charge carried by component `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredLinkingData {
    matrix: Vec<Vec<i64>>,
    colours: Vec<i64>,
}

impl ColouredLinkingData {
    pub fn new(matrix: Vec<Vec<i64>>, colours: Vec<i64>) -> Result<Self> {
        check_square_symmetric(&matrix)?;
        if colours.len() != matrix.len() {
            return Err(Error::ColourLength { expected: matrix.len(), got: colours.len() });
        }
        Ok(ColouredLinkingData { matrix, colours })
    }

    /// A link with every colour set to 1.
    pub fn with_unit_colours(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        Self::new(matrix, vec![1; n])
    }

    pub fn empty() -> Self {
        ColouredLinkingData { matrix: vec![], colours: vec![] }
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn colours(&self) -> &[i64] {
        &self.colours
    }

    /// The quadratic form `q^T L q` that drives every observable.
    pub fn quadratic_form(&self) -> i64 {
        let q = &self.colours;
        let mut acc: i64 = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                acc += q[i] * e * q[j];
            }
        }
        acc
    }

    /// Reverses the orientation of component `j`: its row, column and colour
    /// are negated (the diagonal entry is negated twice, hence unchanged).
    /// The observable is insensitive to this.
    pub fn reverse_orientation(&self, j: usize) -> Result<Self> {
        self.check_index(j)?;
        let mut out = self.clone();
        for m in 0..out.size() {
            if m != j {
                out.matrix[j][m] = -out.matrix[j][m];
                out.matrix[m][j] = -out.matrix[m][j];
            }
        }
        out.colours[j] = -out.colours[j];
        Ok(out)
    }

    /// Replaces each component of colour `q` by `|q|` framing-parallel
    /// copies of colour 1, orientation-reversed when `q < 0`; colour-0
    /// components are deleted.
    ///
    /// Two copies of the same component link each other by the framing
    /// number (they are parallel on the framing band), keep that framing on
    /// the diagonal, and inherit the original inter-component linkings with
    /// orientation signs. The observable is unchanged by this expansion.
    pub fn simplicial_satellite(&self) -> Self {
        // (original index, orientation sign) per output copy
        let mut origin: Vec<(usize, i64)> = Vec::new();
        for (j, &q) in self.colours.iter().enumerate() {
            let s = q.signum();
            for _ in 0..q.unsigned_abs() {
                origin.push((j, s));
            }
        }
        let n = origin.len();
        let mut matrix = vec![vec![0i64; n]; n];
        for a in 0..n {
            let (ja, sa) = origin[a];
            matrix[a][a] = self.matrix[ja][ja];
            for b in a + 1..n {
                let (jb, sb) = origin[b];
                let e = if ja == jb { self.matrix[ja][ja] } else { sa * sb * self.matrix[ja][jb] };
                matrix[a][b] = e;
                matrix[b][a] = e;
            }
        }
        ColouredLinkingData { matrix, colours: vec![1; n] }
    }

    /// Band-joins components `i` and `j` (0-based) into one, which takes
    /// position `min(i, j)`. Framings add along with twice the mutual
    /// linking; linkings with every other component add. Requires equal
    /// colours, which the joined component keeps.
    pub fn sum_components(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::SelfCombination { index: i + 1 });
        }
        if self.colours[i] != self.colours[j] {
            return Err(Error::ColourMismatch {
                i: i + 1,
                j: j + 1,
                colour_i: self.colours[i],
                colour_j: self.colours[j],
            });
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let keep: Vec<usize> = (0..self.size()).filter(|&m| m != hi).collect();
        let mut matrix = vec![vec![0i64; keep.len()]; keep.len()];
        let joined = |a: usize, b: usize| -> i64 {
            // linking of old components a, b after folding hi into lo
            self.matrix[a][b]
        };
        for (r, &a) in keep.iter().enumerate() {
            for (c, &b) in keep.iter().enumerate() {
                matrix[r][c] = match (a == lo, b == lo) {
                    (true, true) => {
                        self.matrix[lo][lo] + self.matrix[hi][hi] + 2 * self.matrix[lo][hi]
                    }
                    (true, false) => joined(lo, b) + joined(hi, b),
                    (false, true) => joined(a, lo) + joined(a, hi),
                    (false, false) => joined(a, b),
                };
            }
        }
        let colours = keep.iter().map(|&a| self.colours[a]).collect();
        Ok(ColouredLinkingData { matrix, colours })
    }

    /// The self-linking of the single knot obtained by expanding the link
    /// to its simplicial satellite and band-summing everything together.
    /// Always equals `q^T L q`.
    pub fn equivalent_knot(&self) -> i64 {
        let mut folded = self.simplicial_satellite();
        while folded.size() > 1 {
            folded = folded.sum_components(0, 1).expect("satellite colours are all 1");
        }
        if folded.size() == 0 { 0 } else { folded.matrix[0][0] }
    }

    /// Block-diagonal union of two links (no mutual linking).
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let n = self.size() + other.size();
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, row) in self.matrix.iter().enumerate() {
            matrix[i][..self.size()].clone_from_slice(row);
        }
        for (i, row) in other.matrix.iter().enumerate() {
            matrix[self.size() + i][self.size()..].clone_from_slice(row);
        }
        let mut colours = self.colours.clone();
        colours.extend_from_slice(&other.colours);
        ColouredLinkingData { matrix, colours }
    }

    /// Reduces every colour to its representative in `0..2k-1`; observables
    /// at coupling `k` cannot tell the difference.
    pub fn reduce_colours(&self, k: Coupling) -> Self {
        let colours = self.colours.iter().map(|&q| q.rem_euclid(k.two_k())).collect();
        ColouredLinkingData { matrix: self.matrix.clone(), colours }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.size() {
            return Err(Error::IndexOutOfRange { index: i + 1, size: self.size() });
        }
        Ok(())
    }
}

/// A coloured link sitting in a surgery-presented 3-manifold.
///
/// The surgery block `B` is the linking matrix of the surgery link (integer
/// surgery coefficients on the diagonal); the link block is the observed
/// link `L` with its colours; the cross block holds the linking numbers
/// between surgery and link components. An empty surgery block presents the
/// 3-sphere itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientLinkPresentation {
    surgery: Vec<Vec<i64>>,
    cross: Vec<Vec<i64>>,
    link: ColouredLinkingData,
}

impl AmbientLinkPresentation {
    /// `surgery` is `N_S x N_S`, `cross` is `N_S x N_L` (row i = linkings of
    /// surgery component i with every link component).
    pub fn new(
        surgery: Vec<Vec<i64>>,
        cross: Vec<Vec<i64>>,
        link: ColouredLinkingData,
    ) -> Result<Self> {
        check_square_symmetric(&surgery)?;
        let (ns, nl) = (surgery.len(), link.size());
        if cross.len() != ns || cross.iter().any(|row| row.len() != nl) {
            let rows = cross.len();
            let cols = cross.first().map_or(0, Vec::len);
            return Err(Error::CrossShape {
                rows,
                cols,
                expected_rows: ns,
                expected_cols: nl,
            });
        }
        Ok(AmbientLinkPresentation { surgery, cross, link })
    }

    /// The link placed in the 3-sphere: no surgery components at all.
    pub fn in_sphere(link: ColouredLinkingData) -> Self {
        AmbientLinkPresentation { surgery: vec![], cross: vec![], link }
    }

    /// A bare surgery presentation carrying no observed link.
    pub fn manifold_only(surgery: Vec<Vec<i64>>) -> Result<Self> {
        let n = surgery.len();
        Self::new(surgery, vec![vec![]; n], ColouredLinkingData::empty())
    }

    pub fn surgery_matrix(&self) -> &[Vec<i64>] {
        &self.surgery
    }

    pub fn cross_matrix(&self) -> &[Vec<i64>] {
        &self.cross
    }

    pub fn link(&self) -> &ColouredLinkingData {
        &self.link
    }

    pub fn surgery_count(&self) -> usize {
        self.surgery.len()
    }

    /// Expands the observed link to its simplicial satellite, carrying the
    /// cross-linkings onto the copies with the same orientation signs. The
    /// observable is unchanged.
    pub fn simplicial_satellite(&self) -> Self {
        let mut origin: Vec<(usize, i64)> = Vec::new();
        for (a, &q) in self.link.colours().iter().enumerate() {
            let s = q.signum();
            for _ in 0..q.unsigned_abs() {
                origin.push((a, s));
            }
        }
        let cross = self
            .cross
            .iter()
            .map(|row| origin.iter().map(|&(a, s)| s * row[a]).collect())
            .collect();
        AmbientLinkPresentation {
            surgery: self.surgery.clone(),
            cross,
            link: self.link.simplicial_satellite(),
        }
    }

    /// Replaces the observed link by another (same surgery background).
    pub(crate) fn with_link(&self, cross: Vec<Vec<i64>>, link: ColouredLinkingData) -> Result<Self> {
        Self::new(self.surgery.clone(), cross, link)
    }
}

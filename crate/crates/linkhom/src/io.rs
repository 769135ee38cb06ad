//! JSON file formats: the presentation files the command-line tool reads
//! and writes, and the serialized form of exact cyclotomic values.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicNumber, Rational};
use crate::links::{AmbientLinkPresentation, ColouredLinkingData};
use crate::{Error, Result};

/// On-disk description of a coloured link, optionally together with the
/// surgery instructions for the ambient manifold.
///
/// All fields are optional: a file with only `matrix` (and perhaps
/// `colours`, defaulting to all ones) is a link in the 3-sphere, a file
/// with only `surgery_matrix` is a closed manifold with no observed link,
/// and a file with both needs `cross_matrix` only when some link component
/// actually wraps a surgery component (it defaults to all zeros).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    /// Linking matrix of the observed link; framings on the diagonal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Colour of each link component; defaults to 1 everywhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colours: Option<Vec<i64>>,
    /// Linking matrix of the surgery link.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surgery_matrix: Option<Vec<Vec<i64>>>,
    /// Linking numbers between surgery components (rows) and link
    /// components (columns).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_matrix: Option<Vec<Vec<i64>>>,
}

impl PresentationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation files always serialize")
    }

    /// Assembles the validated presentation, applying the documented
    /// defaults for missing fields.
    pub fn into_presentation(self) -> Result<AmbientLinkPresentation> {
        if self.matrix.is_none() && self.colours.is_some() {
            return Err(Error::Parse("colours given without a link matrix".into()));
        }
        if self.surgery_matrix.is_none() && self.cross_matrix.is_some() {
            return Err(Error::Parse("cross_matrix given without a surgery_matrix".into()));
        }
        let matrix = self.matrix.unwrap_or_default();
        let link = match self.colours {
            Some(c) => ColouredLinkingData::new(matrix, c)?,
            None => ColouredLinkingData::with_unit_colours(matrix)?,
        };
        match self.surgery_matrix {
            None => Ok(AmbientLinkPresentation::in_sphere(link)),
            Some(surgery) => {
                let cross = self
                    .cross_matrix
                    .unwrap_or_else(|| vec![vec![0; link.size()]; surgery.len()]);
                AmbientLinkPresentation::new(surgery, cross, link)
            }
        }
    }

    /// Inverse of [`into_presentation`](Self::into_presentation): a file
    /// that parses back to `p`, with defaulted parts left out.
    pub fn from_presentation(p: &AmbientLinkPresentation) -> Self {
        let has_link = p.link().size() > 0;
        let has_surgery = p.surgery_count() > 0;
        let cross_is_zero = p.cross_matrix().iter().flatten().all(|&e| e == 0);
        let colours_are_unit = p.link().colours().iter().all(|&q| q == 1);
        PresentationFile {
            matrix: has_link.then(|| p.link().matrix().to_vec()),
            colours: (has_link && !colours_are_unit).then(|| p.link().colours().to_vec()),
            surgery_matrix: has_surgery.then(|| p.surgery_matrix().to_vec()),
            cross_matrix: (has_surgery && has_link && !cross_is_zero)
                .then(|| p.cross_matrix().to_vec()),
        }
    }
}

/// Parses a presentation file in one step.
pub fn parse_presentation(text: &str) -> Result<AmbientLinkPresentation> {
    PresentationFile::from_json(text)?.into_presentation()
}

/// Serialized form of an exact cyclotomic value: the coefficient vector of
/// the value over powers of the primitive `conductor`-th root of unity,
/// written as rational strings, plus a floating-point approximation for
/// human consumption. The exact fields round-trip; `approx` is informational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub conductor: u64,
    /// Rational coefficients as `"num"` or `"num/den"` strings, one per
    /// power `0..conductor` of the root.
    pub coefficients: Vec<String>,
    /// `[re, im]` of the embedding sending the root to `exp(2*pi*i/conductor)`.
    pub approx: [f64; 2],
}

impl CyclotomicJson {
    pub fn from_value(x: &CyclotomicNumber) -> Self {
        let embedded = x.embed();
        let coeffs = x.coefficients();
        let used = coeffs
            .iter()
            .rposition(|c| !num_traits::Zero::is_zero(c))
            .map_or(1, |last| last + 1);
        CyclotomicJson {
            conductor: x.conductor(),
            coefficients: coeffs[..used]
                .iter()
                .map(|c| {
                    if c.denom() == &num_bigint::BigInt::from(1) {
                        c.numer().to_string()
                    } else {
                        format!("{}/{}", c.numer(), c.denom())
                    }
                })
                .collect(),
            approx: [embedded.re, embedded.im],
        }
    }

    pub fn into_value(self) -> Result<CyclotomicNumber> {
        if self.conductor == 0 {
            return Err(Error::Parse("conductor must be positive".into()));
        }
        if self.coefficients.len() as u64 > self.conductor {
            return Err(Error::Parse(format!(
                "{} coefficients for conductor {}",
                self.coefficients.len(),
                self.conductor
            )));
        }
        let coeffs = self
            .coefficients
            .iter()
            .map(|s| {
                Rational::from_str(s.trim())
                    .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
            })
            .collect::<Result<Vec<Rational>>>()?;
        Ok(CyclotomicNumber::from_coefficients(self.conductor, coeffs))
    }
}

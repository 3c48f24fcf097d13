//! The twelve dissimilarity measures between two aligned probability
//! distributions. Formulas follow the survey of Cha (2007), "Comprehensive
//! survey on distance/similarity measures between probability density
//! functions": Canberra and Lorentzian take |p - q|, Kulczynski divides by
//! the sum of coordinate minima. Natural logarithm throughout.
//!
//! Sums run in ascending union-vocabulary order with plain sequential
//! accumulation, so results are reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use crate::distribution::AlignedDistributionPair;
use crate::error::{Error, Result};

/// Identifies one measure. The declaration order is canonical: it is the
/// column order of every emitted matrix and report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureId {
    Canberra,
    Clark,
    Cosine,
    Czekanowski,
    Euclidean,
    JensenShannon,
    Kulczynski,
    Lorentzian,
    Manhattan,
    ProbSymmetricChi2,
    Soergel,
    SquaredChord,
}

pub const MEASURE_COUNT: usize = 12;

impl MeasureId {
    pub const ALL: [MeasureId; MEASURE_COUNT] = [
        MeasureId::Canberra,
        MeasureId::Clark,
        MeasureId::Cosine,
        MeasureId::Czekanowski,
        MeasureId::Euclidean,
        MeasureId::JensenShannon,
        MeasureId::Kulczynski,
        MeasureId::Lorentzian,
        MeasureId::Manhattan,
        MeasureId::ProbSymmetricChi2,
        MeasureId::Soergel,
        MeasureId::SquaredChord,
    ];

    /// Zero-based position in the canonical order.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|m| *m == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::Canberra => "canberra",
            MeasureId::Clark => "clark",
            MeasureId::Cosine => "cosine",
            MeasureId::Czekanowski => "czekanowski",
            MeasureId::Euclidean => "euclidean",
            MeasureId::JensenShannon => "jensen_shannon",
            MeasureId::Kulczynski => "kulczynski",
            MeasureId::Lorentzian => "lorentzian",
            MeasureId::Manhattan => "manhattan",
            MeasureId::ProbSymmetricChi2 => "prob_symmetric_chi2",
            MeasureId::Soergel => "soergel",
            MeasureId::SquaredChord => "squared_chord",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown measure `{s}`"))
    }
}

/// All twelve measure values for one successive year pair, in canonical
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityVector {
    pub field_code: String,
    pub year_from: i32,
    pub year_to: i32,
    pub values: [f64; MEASURE_COUNT],
}

impl DissimilarityVector {
    pub fn value(&self, measure: MeasureId) -> f64 {
        self.values[measure.index()]
    }
}

fn canberra(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let s = a + b;
        if s > 0.0 {
            sum += (a - b).abs() / s;
        }
    }
    sum
}

fn clark(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let s = a + b;
        if s > 0.0 {
            let r = (a - b) / s;
            sum += r * r;
        }
    }
    sum.sqrt()
}

fn cosine(p: &[f64], q: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut np = 0.0;
    let mut nq = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        dot += a * b;
        np += a * a;
        nq += b * b;
    }
    // mathematically in [0, 1]; clamp the rounding of 1 - dot/(|p||q|)
    (1.0 - dot / (np.sqrt() * nq.sqrt())).max(0.0)
}

fn czekanowski(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        num += (a - b).abs();
        den += a + b;
    }
    num / den
}

fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let d = a - b;
        sum += d * d;
    }
    sum.sqrt()
}

fn jensen_shannon(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let s = a + b;
        let mut term = 0.0;
        if a > 0.0 {
            term += a * (2.0 * a / s).ln();
        }
        if b > 0.0 {
            term += b * (2.0 * b / s).ln();
        }
        sum += term;
    }
    (0.5 * sum).max(0.0)
}

fn kulczynski(p: &[f64], q: &[f64]) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        num += (a - b).abs();
        den += a.min(b);
    }
    if den == 0.0 {
        return Err(Error::DivisionByZero {
            measure: MeasureId::Kulczynski,
        });
    }
    Ok(num / den)
}

fn lorentzian(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        sum += (a - b).abs().ln_1p();
    }
    sum
}

fn manhattan(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        sum += (a - b).abs();
    }
    sum
}

fn prob_symmetric_chi2(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let s = a + b;
        if s > 0.0 {
            let d = a - b;
            sum += d * d / s;
        }
    }
    2.0 * sum
}

fn soergel(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        num += (a - b).abs();
        den += a.max(b);
    }
    num / den
}

fn squared_chord(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let d = a.sqrt() - b.sqrt();
        sum += d * d;
    }
    sum
}

/// Evaluates one measure on an aligned pair. Only kulczynski can fail
/// (disjoint supports), and it fails with a distinct error rather than
/// returning infinity.
pub fn dissimilarity(measure: MeasureId, pair: &AlignedDistributionPair) -> Result<f64> {
    let (p, q) = (&pair.p[..], &pair.q[..]);
    Ok(match measure {
        MeasureId::Canberra => canberra(p, q),
        MeasureId::Clark => clark(p, q),
        MeasureId::Cosine => cosine(p, q),
        MeasureId::Czekanowski => czekanowski(p, q),
        MeasureId::Euclidean => euclidean(p, q),
        MeasureId::JensenShannon => jensen_shannon(p, q),
        MeasureId::Kulczynski => kulczynski(p, q)?,
        MeasureId::Lorentzian => lorentzian(p, q),
        MeasureId::Manhattan => manhattan(p, q),
        MeasureId::ProbSymmetricChi2 => prob_symmetric_chi2(p, q),
        MeasureId::Soergel => soergel(p, q),
        MeasureId::SquaredChord => squared_chord(p, q),
    })
}

/// Evaluates all twelve measures in canonical order.
pub fn all_measures(
    pair: &AlignedDistributionPair,
    field: &str,
    year_from: i32,
) -> Result<DissimilarityVector> {
    let mut values = [0.0; MEASURE_COUNT];
    for (slot, measure) in values.iter_mut().zip(MeasureId::ALL) {
        *slot = dissimilarity(measure, pair)?;
    }
    Ok(DissimilarityVector {
        field_code: field.to_string(),
        year_from,
        year_to: year_from + 1,
        values,
    })
}

//! Correlation-matrix principal component analysis over the pooled
//! dissimilarity rows: column standardization, a cyclic Jacobi
//! eigensolver, PC1 scoring, and translation of scores to non-negative
//! dissimilarities.
//!
//! The measures differ in scale by orders of magnitude (canberra counts
//! non-shared keywords, euclidean lives below 1e-1), so the decomposition
//! runs on the correlation matrix, never the covariance matrix.

use crate::error::{Error, Result};
use crate::measure::{DissimilarityVector, MeasureId, MEASURE_COUNT};

/// Pooled dissimilarity rows: grouped by field in input order, then by
/// `year_from` ascending within each field.
#[derive(Debug, Clone, Default)]
pub struct DissimilarityMatrix {
    rows: Vec<DissimilarityVector>,
}

impl DissimilarityMatrix {
    pub fn new(rows: Vec<DissimilarityVector>) -> Self {
        DissimilarityMatrix { rows }
    }

    pub fn rows(&self) -> &[DissimilarityVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn field_rows<'a>(
        &'a self,
        field: &'a str,
    ) -> impl Iterator<Item = &'a DissimilarityVector> + 'a {
        self.rows.iter().filter(move |r| r.field_code == field)
    }

    /// Raw values as plain rows for the numerical layer.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.values.to_vec()).collect()
    }
}

/// A standardized matrix together with the statistics that produced it.
#[derive(Debug, Clone)]
pub struct Standardized {
    pub z: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
}

/// Column-standardizes with sample (n-1) standard deviations. A column
/// whose values are numerically constant cannot be standardized; that is a
/// degenerate corpus and a hard error.
pub fn standardize(rows: &[Vec<f64>]) -> Result<Standardized> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::TooFewRows { need: 2, got: n });
    }
    let k = rows[0].len();
    debug_assert!(rows.iter().all(|r| r.len() == k));

    let mut means = vec![0.0; k];
    for row in rows {
        for (m, &x) in means.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }

    let mut stddevs = vec![0.0; k];
    for (j, sd) in stddevs.iter_mut().enumerate() {
        let mut ss = 0.0;
        let mut scale = 0.0f64;
        for row in rows {
            let d = row[j] - means[j];
            ss += d * d;
            scale = scale.max(row[j].abs());
        }
        let s = (ss / (n - 1) as f64).sqrt();
        if s <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ZeroVarianceColumn { column: j });
        }
        *sd = s;
    }

    let z = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| (x - means[j]) / stddevs[j])
                .collect()
        })
        .collect();

    Ok(Standardized { z, means, stddevs })
}

/// Sample correlation matrix z'z/(n-1) of an already-standardized matrix.
/// Exactly symmetric by construction.
pub(crate) fn correlation_of(z: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = z.len();
    let k = z[0].len();
    let mut c = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let mut s = 0.0;
            for row in z {
                s += row[i] * row[j];
            }
            let v = s / (n - 1) as f64;
            c[i][j] = v;
            c[j][i] = v;
        }
    }
    c
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_TOLERANCE: f64 = 1e-12;

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi rotations on a symmetric matrix, iterated until the
/// off-diagonal Frobenius norm drops below 1e-12. Returns unsorted
/// eigenvalues and the eigenvector matrix (columns are eigenvectors).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
            let eigenvalues = (0..n).map(|i| a[i][i]).collect();
            return Ok((eigenvalues, v));
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = {
                    let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp - s * (akq + tau * akp);
                    a[p][k] = a[k][p];
                    a[k][q] = akq + s * (akp - tau * akq);
                    a[q][k] = a[k][q];
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = vkp - s * (vkq + tau * vkp);
                    row[q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    if off_diagonal_norm(&a) < JACOBI_TOLERANCE {
        let eigenvalues = (0..n).map(|i| a[i][i]).collect();
        return Ok((eigenvalues, v));
    }
    Err(Error::ConvergenceFailure {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Standardization statistics, loadings, eigenvalues, and explained-variance
/// fractions of a fitted correlation PCA. Loadings are stored row-major per
/// variable: `loadings[i][j]` is variable `i`'s weight on component `j`.
#[derive(Debug, Clone)]
pub struct PcaModel {
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
    pub loadings: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub explained_fraction: Vec<f64>,
}

impl PcaModel {
    pub fn width(&self) -> usize {
        self.eigenvalues.len()
    }

    /// The first loading column: the coefficients that combine the twelve
    /// standardized measures into one score.
    pub fn pc1(&self) -> Vec<f64> {
        self.loadings.iter().map(|row| row[0]).collect()
    }
}

fn apply_sign_convention(loadings: &mut [Vec<f64>], anchor: Option<usize>) {
    let k = loadings.len();
    for j in 0..k {
        let flip = if j == 0 {
            match anchor.map(|i| loadings[i][0]) {
                Some(v) if v > 0.0 => false,
                Some(v) if v < 0.0 => true,
                // anchor loading exactly zero (or no anchor): fall back
                _ => largest_magnitude_is_negative(loadings, 0),
            }
        } else {
            largest_magnitude_is_negative(loadings, j)
        };
        if flip {
            for row in loadings.iter_mut() {
                row[j] = -row[j];
            }
        }
    }
}

fn largest_magnitude_is_negative(loadings: &[Vec<f64>], j: usize) -> bool {
    let mut best = 0usize;
    for i in 1..loadings.len() {
        if loadings[i][j].abs() > loadings[best][j].abs() {
            best = i;
        }
    }
    loadings[best][j] < 0.0
}

/// Fits the eigendecomposition of the sample correlation matrix of `std`.
/// Eigenpairs come out sorted by eigenvalue descending (ties broken by
/// original column index); eigenvalues within 1e-10 below zero are clamped
/// to zero. For the full twelve-measure matrix, PC1's sign is anchored so
/// the manhattan loading is positive (larger score = more dissimilar);
/// every other component makes its largest-magnitude loading positive.
pub fn fit_pca(std: &Standardized) -> Result<PcaModel> {
    let n = std.z.len();
    if n < 2 {
        return Err(Error::TooFewRows { need: 2, got: n });
    }
    let k = std.z[0].len();
    let corr = correlation_of(&std.z);
    let (raw_values, raw_vectors) = jacobi_eigen(corr)?;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| raw_values[b].partial_cmp(&raw_values[a]).unwrap());

    let mut eigenvalues: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
    for v in &mut eigenvalues {
        if *v < 0.0 && *v >= -1e-10 {
            *v = 0.0;
        }
    }

    let mut loadings = vec![vec![0.0; k]; k];
    for (j, &src) in order.iter().enumerate() {
        for i in 0..k {
            loadings[i][j] = raw_vectors[i][src];
        }
    }

    let anchor = if k == MEASURE_COUNT {
        Some(MeasureId::Manhattan.index())
    } else {
        None
    };
    apply_sign_convention(&mut loadings, anchor);

    let total: f64 = eigenvalues.iter().sum();
    let explained_fraction = eigenvalues.iter().map(|&v| v / total).collect();

    Ok(PcaModel {
        means: std.means.clone(),
        stddevs: std.stddevs.clone(),
        loadings,
        eigenvalues,
        explained_fraction,
    })
}

/// PC1 score of every row: the PC1 coefficients dotted with the row's
/// standardized values, accumulated in ascending column order.
pub fn pc1_scores(model: &PcaModel, rows: &[Vec<f64>]) -> Vec<f64> {
    let pc1 = model.pc1();
    rows.iter()
        .map(|row| {
            let mut score = 0.0;
            for (i, &x) in row.iter().enumerate() {
                score += pc1[i] * (x - model.means[i]) / model.stddevs[i];
            }
            score
        })
        .collect()
}

/// Raw PC1 scores and their translation to non-negative dissimilarities
/// by subtracting the pooled minimum.
#[derive(Debug, Clone)]
pub struct ScoredSeries {
    pub raw: Vec<f64>,
    pub translated: Vec<f64>,
    pub global_min: f64,
}

/// Subtracts the minimum over the entire pooled score set, so translated
/// values are comparable across fields and at least one of them is exactly
/// zero.
pub fn translate_scores(raw: &[f64]) -> ScoredSeries {
    assert!(!raw.is_empty(), "cannot translate an empty score set");
    let global_min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let translated = raw.iter().map(|&s| s - global_min).collect();
    ScoredSeries {
        raw: raw.to_vec(),
        translated,
        global_min,
    }
}

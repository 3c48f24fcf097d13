//! Shared test scaffolding: an exact-rational measure oracle kept
//! independent of the library's float path, random aligned-pair
//! generators, a power-iteration eigen oracle, Spearman rank correlation,
//! and a synthetic drifting-corpus generator.

#![allow(dead_code)]

use evometrics::{AlignedDistributionPair, BibRecord, MeasureId};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    BigRational::new(numer.into(), denom.into())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Relative frequencies count/total as exact rationals.
pub fn rats_from_counts(counts: &[u64]) -> Vec<Rat> {
    let total: i64 = counts.iter().map(|&c| c as i64).sum();
    counts.iter().map(|&c| rat(c as i64, total)).collect()
}

/// Evaluates one measure through exact rational arithmetic wherever the
/// formula is rational, converting to f64 only for the final square roots
/// and logarithms. Returns `None` where the measure is undefined
/// (kulczynski on disjoint supports).
pub fn oracle_measure(measure: MeasureId, p: &[Rat], q: &[Rat]) -> Option<f64> {
    assert_eq!(p.len(), q.len());
    let terms = || p.iter().zip(q.iter());

    let value = match measure {
        MeasureId::Canberra => {
            let mut sum = Rat::zero();
            for (a, b) in terms() {
                let s = a + b;
                if !s.is_zero() {
                    sum += (a - b).abs() / s;
                }
            }
            rat_to_f64(&sum)
        }
        MeasureId::Clark => {
            let mut sum = Rat::zero();
            for (a, b) in terms() {
                let s = a + b;
                if !s.is_zero() {
                    let r = (a - b) / s;
                    sum += &r * &r;
                }
            }
            rat_to_f64(&sum).sqrt()
        }
        MeasureId::Cosine => {
            let mut dot = Rat::zero();
            let mut np = Rat::zero();
            let mut nq = Rat::zero();
            for (a, b) in terms() {
                dot += a * b;
                np += a * a;
                nq += b * b;
            }
            1.0 - rat_to_f64(&dot) / (rat_to_f64(&np).sqrt() * rat_to_f64(&nq).sqrt())
        }
        MeasureId::Czekanowski => {
            let mut num = Rat::zero();
            let mut den = Rat::zero();
            for (a, b) in terms() {
                num += (a - b).abs();
                den += a + b;
            }
            rat_to_f64(&(num / den))
        }
        MeasureId::Euclidean => {
            let mut sum = Rat::zero();
            for (a, b) in terms() {
                let d = a - b;
                sum += &d * &d;
            }
            rat_to_f64(&sum).sqrt()
        }
        MeasureId::JensenShannon => {
            let mut sum = 0.0;
            for (a, b) in terms() {
                let s = a + b;
                if !a.is_zero() {
                    sum += rat_to_f64(a) * rat_to_f64(&(rat(2, 1) * a / &s)).ln();
                }
                if !b.is_zero() {
                    sum += rat_to_f64(b) * rat_to_f64(&(rat(2, 1) * b / &s)).ln();
                }
            }
            0.5 * sum
        }
        MeasureId::Kulczynski => {
            let mut num = Rat::zero();
            let mut den = Rat::zero();
            for (a, b) in terms() {
                num += (a - b).abs();
                den += a.min(b).clone();
            }
            if den.is_zero() {
                return None;
            }
            rat_to_f64(&(num / den))
        }
        MeasureId::Lorentzian => {
            let mut sum = 0.0;
            for (a, b) in terms() {
                sum += rat_to_f64(&(a - b).abs()).ln_1p();
            }
            sum
        }
        MeasureId::Manhattan => {
            let mut sum = Rat::zero();
            for (a, b) in terms() {
                sum += (a - b).abs();
            }
            rat_to_f64(&sum)
        }
        MeasureId::ProbSymmetricChi2 => {
            let mut sum = Rat::zero();
            for (a, b) in terms() {
                let s = a + b;
                if !s.is_zero() {
                    let d = a - b;
                    sum += &d * &d / s;
                }
            }
            rat_to_f64(&(rat(2, 1) * sum))
        }
        MeasureId::Soergel => {
            let mut num = Rat::zero();
            let mut den = Rat::zero();
            for (a, b) in terms() {
                num += (a - b).abs();
                den += a.max(b).clone();
            }
            rat_to_f64(&(num / den))
        }
        MeasureId::SquaredChord => {
            // 2 - 2 sum sqrt(p q): a different algebraic route than the
            // implementation's per-coordinate (sqrt p - sqrt q)^2
            let mut sum = 0.0;
            for (a, b) in terms() {
                sum += rat_to_f64(&(a * b)).sqrt();
            }
            2.0 - 2.0 * sum
        }
    };
    Some(value)
}

/// Wraps aligned probability vectors in the domain type the measure API
/// expects.
pub fn aligned(p: Vec<f64>, q: Vec<f64>) -> AlignedDistributionPair {
    assert_eq!(p.len(), q.len());
    let union_vocab = (0..p.len()).map(|i| format!("kw{i:04}")).collect();
    let v_left = p.iter().filter(|&&x| x > 0.0).count();
    let v_right = q.iter().filter(|&&x| x > 0.0).count();
    let common_count = p
        .iter()
        .zip(&q)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0)
        .count();
    AlignedDistributionPair {
        union_vocab,
        p,
        q,
        v_left,
        v_right,
        common_count,
    }
}

pub fn counts_to_probs(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// A random aligned pair drawn from integer counts. At least half of the
/// coordinates are shared with counts 10..=100 on both sides, which keeps
/// the coordinate-minimum mass comfortably away from zero; the rest are
/// exclusive to one side with counts 1..=100.
pub fn random_counts_pair(rng: &mut StdRng, max_dim: usize) -> (Vec<u64>, Vec<u64>) {
    let d = rng.random_range(2..=max_dim);
    let n_common = (d / 2).max(1);
    let mut slots: Vec<u8> = Vec::with_capacity(d);
    for i in 0..d {
        if i < n_common {
            slots.push(0); // common
        } else if i % 2 == 0 {
            slots.push(1); // left only
        } else {
            slots.push(2); // right only
        }
    }
    slots.shuffle(rng);

    let mut p = Vec::with_capacity(d);
    let mut q = Vec::with_capacity(d);
    for s in slots {
        match s {
            0 => {
                p.push(rng.random_range(10..=100));
                q.push(rng.random_range(10..=100));
            }
            1 => {
                p.push(rng.random_range(1..=100));
                q.push(0);
            }
            _ => {
                p.push(0);
                q.push(rng.random_range(1..=100));
            }
        }
    }
    (p, q)
}

/// A pair with disjoint supports: every coordinate belongs to exactly one
/// side.
pub fn disjoint_counts_pair(rng: &mut StdRng, max_dim: usize) -> (Vec<u64>, Vec<u64>) {
    let d = rng.random_range(2..=max_dim);
    let split = rng.random_range(1..d);
    let mut p = vec![0u64; d];
    let mut q = vec![0u64; d];
    for i in 0..d {
        if i < split {
            p[i] = rng.random_range(1..=100);
        } else {
            q[i] = rng.random_range(1..=100);
        }
    }
    (p, q)
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn normalize(v: &mut [f64]) {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Power iteration for the dominant eigenpair of a symmetric
/// positive-semidefinite matrix, with a Rayleigh-quotient eigenvalue and a
/// residual-based stop. Independent of the Jacobi path under test.
pub fn power_iteration_top(matrix: &[Vec<f64>], max_iters: usize) -> Option<(f64, Vec<f64>)> {
    let n = matrix.len();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.37 * (i as f64 + 1.0).sin()).collect();
    normalize(&mut v);
    for _ in 0..max_iters {
        let w = matvec(matrix, &v);
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let residual: f64 = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi) * (wi - lambda * vi))
            .sum::<f64>()
            .sqrt();
        if residual < 1e-11 {
            return Some((lambda, v));
        }
        let mut next = w;
        normalize(&mut next);
        v = next;
    }
    None
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    pearson(&ranks(xs), &ranks(ys))
}

/// Parameters for the synthetic drifting corpus: each field keeps a
/// fixed-size concept pool whose members are replaced at a per-year rate
/// that decays over time, so successive-year distributions grow steadily
/// more similar.
pub struct DriftCorpus {
    pub fields: Vec<String>,
    pub start_year: i32,
    pub n_years: usize,
    pub total_records: usize,
    pub concepts_per_field: usize,
    pub drift_start: f64,
    pub drift_end: f64,
    pub seed: u64,
}

impl DriftCorpus {
    pub fn years(&self) -> (i32, i32) {
        (self.start_year, self.start_year + self.n_years as i32 - 1)
    }
}

/// Integer allocation proportional to `weights`, summing exactly to
/// `total` (largest-remainder rounding).
fn allocate(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|&e| e.floor() as usize).collect();
    let mut short = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let mut cursor = 0;
    while short > 0 {
        counts[order[cursor % order.len()]] += 1;
        cursor += 1;
        short -= 1;
    }
    counts
}

pub fn generate_drift_corpus(spec: &DriftCorpus) -> Vec<BibRecord> {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(spec.seed);

    // slot weights are fixed; replacing a slot's concept moves exactly that
    // slot's probability mass to a brand-new keyword
    let slot_weights: Vec<f64> = (0..spec.concepts_per_field)
        .map(|i| 1.0 / (i as f64 + 1.0).powf(0.7))
        .collect();
    let weight_sum: f64 = slot_weights.iter().sum();
    let cumulative: Vec<f64> = slot_weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / weight_sum;
            Some(*acc)
        })
        .collect();
    let sample_slot = |rng: &mut StdRng| -> usize {
        let x: f64 = rng.random_range(0.0..1.0);
        cumulative.partition_point(|&c| c < x).min(cumulative.len() - 1)
    };

    // article counts: fields get equal shares, years grow linearly
    let year_weights: Vec<f64> = (0..spec.n_years).map(|t| 1.0 + 0.06 * t as f64).collect();
    let per_field = allocate(spec.total_records, &vec![1.0; spec.fields.len()]);

    let horizon = (spec.n_years - 1).max(1) as f64;
    let mut records = Vec::with_capacity(spec.total_records);
    for (fi, field) in spec.fields.iter().enumerate() {
        let per_year = allocate(per_field[fi], &year_weights);
        let mut serial = 0usize;
        let mut pool: Vec<String> = (0..spec.concepts_per_field)
            .map(|_| {
                serial += 1;
                format!("{} concept {serial:06}", field.to_lowercase())
            })
            .collect();

        for (t, &n_articles) in per_year.iter().enumerate() {
            if t > 0 {
                // decaying drift: quadratic ramp from drift_start down to drift_end
                let u = (horizon - t as f64) / horizon;
                let rate = spec.drift_end + (spec.drift_start - spec.drift_end) * u * u;
                let replace = ((spec.concepts_per_field as f64) * rate).round() as usize;
                for _ in 0..replace {
                    let slot = rng.random_range(0..pool.len());
                    serial += 1;
                    pool[slot] = format!("{} concept {serial:06}", field.to_lowercase());
                }
            }
            let year = spec.start_year + t as i32;
            for a in 0..n_articles {
                let keywords: Vec<String> = if a % 53 == 52 {
                    Vec::new() // the corpus legitimately has keyword-less records
                } else {
                    let k = rng.random_range(2..=6);
                    let mut picked = Vec::with_capacity(k);
                    for _ in 0..k * 3 {
                        if picked.len() == k {
                            break;
                        }
                        let kw = &pool[sample_slot(&mut rng)];
                        if !picked.contains(kw) {
                            picked.push(kw.clone());
                        }
                    }
                    picked
                };
                records.push(BibRecord {
                    id: format!("{field}-{year}-{a:06}"),
                    year,
                    field_code: field.clone(),
                    keywords,
                    language: Some("English".to_string()),
                });
            }
        }
    }
    records
}

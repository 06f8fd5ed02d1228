//! Slow, direct reference implementations used as test oracles.
//!
//! Nothing here depends on `gaitrec-core`; every routine is written
//! straight from the defining formulas so it can check the optimized
//! library paths independently.

use std::f64::consts::PI;

/// `|sum_k x[k] exp(-2 pi i k m / l)|` for every `m`, evaluated term by
/// term.
pub fn naive_dft_magnitude(series: &[f64]) -> Vec<f64> {
    let l = series.len();
    (0..l)
        .map(|m| {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, &x) in series.iter().enumerate() {
                // Reduce k*m mod l first to keep the angle small.
                let angle = -2.0 * PI * ((k * m) % l) as f64 / l as f64;
                re += x * angle.cos();
                im += x * angle.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

fn avg(xs: &[f64]) -> f64 {
    let mut total = 0.0;
    for x in xs {
        total += x;
    }
    total / xs.len() as f64
}

fn middle(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn local_maxima(xs: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        if xs[i] > xs[i - 1] && xs[i] > xs[i + 1] {
            out.push(i);
        }
    }
    out
}

fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() <= 1e-9 {
        0.0
    } else {
        num / den
    }
}

/// The 30-slot feature vector in the documented layout, computed from the
/// defining equations with the naive DFT.
pub fn reference_features(x: &[f64], y: &[f64], z: &[f64], rate_hz: f64) -> [f64; 30] {
    let l = x.len() as f64;
    let axes = [x, y, z];
    let spectra: Vec<Vec<f64>> = axes.iter().map(|a| naive_dft_magnitude(a)).collect();
    let mut v = [0.0; 30];
    for a in 0..3 {
        v[a] = avg(axes[a]);
        v[3 + a] = avg(&spectra[a]);
        v[6 + a] = middle(axes[a]);
        v[9 + a] = middle(&spectra[a]);

        let peaks = local_maxima(axes[a]);
        v[18 + a] = peaks.len() as f64;
        v[21 + a] = if peaks.len() < 2 {
            0.0
        } else {
            // Successive gaps telescope to last - first.
            (peaks[peaks.len() - 1] - peaks[0]) as f64 / (peaks.len() - 1) as f64 / rate_hz
        };

        let mut centroid = 0.0;
        for k in 0..axes[a].len() {
            centroid += axes[a][k] * spectra[a][k];
        }
        v[24 + a] = centroid / l;

        let m = avg(axes[a]);
        let dev: Vec<f64> = axes[a].iter().map(|t| (t - m).abs()).collect();
        v[27 + a] = avg(&dev);
    }
    let norm_mean = |p: &[f64], q: &[f64], r: &[f64]| {
        let mut total = 0.0;
        for k in 0..p.len() {
            total += (p[k].powi(2) + q[k].powi(2) + r[k].powi(2)).sqrt();
        }
        total / p.len() as f64
    };
    v[12] = norm_mean(x, y, z);
    v[13] = norm_mean(&spectra[0], &spectra[1], &spectra[2]);
    v[14] = ratio(v[0], v[2]);
    v[15] = ratio(v[1], v[2]);
    v[16] = ratio(v[3], v[5]);
    v[17] = ratio(v[4], v[5]);
    v
}

fn weighted_gini(rows: &[&(Vec<f64>, usize)], class_count: usize, root_total: usize) -> f64 {
    let mut counts = vec![0usize; class_count];
    for r in rows {
        counts[r.1] += 1;
    }
    let n = rows.len() as f64;
    let impurity: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * (1.0 - p)
        })
        .sum();
    (n / root_total as f64) * impurity
}

/// Exhaustive split search: every candidate feature, every midpoint of
/// consecutive distinct values, children rebuilt from scratch. Returns
/// `(feature, threshold, drop)` of the best split with a positive drop;
/// ties go to the lower feature, then the lower threshold.
pub fn brute_force_best_split(
    rows: &[(Vec<f64>, usize)],
    candidates: &[usize],
    root_total: usize,
) -> Option<(usize, f64, f64)> {
    let class_count = rows.iter().map(|r| r.1 + 1).max()?;
    let all: Vec<&(Vec<f64>, usize)> = rows.iter().collect();
    let parent = weighted_gini(&all, class_count, root_total);
    let mut found: Vec<(usize, f64, f64)> = Vec::new();
    for &f in candidates {
        let mut values: Vec<f64> = rows.iter().map(|r| r.0[f]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let left: Vec<_> = rows.iter().filter(|r| r.0[f] <= threshold).collect();
            let right: Vec<_> = rows.iter().filter(|r| r.0[f] > threshold).collect();
            let drop = parent
                - (weighted_gini(&left, class_count, root_total)
                    + weighted_gini(&right, class_count, root_total));
            found.push((f, threshold, drop));
        }
    }
    let mut best: Option<(usize, f64, f64)> = None;
    for cand in found {
        if cand.2 <= 0.0 {
            continue;
        }
        best = match best {
            None => Some(cand),
            Some(b) => {
                let better = cand.2 > b.2
                    || (cand.2 == b.2 && (cand.0 < b.0 || (cand.0 == b.0 && cand.1 < b.1)));
                Some(if better { cand } else { b })
            }
        };
    }
    best
}

/// Metrics evaluated by looping over `(true, predicted)` pairs once per
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopMetrics {
    pub accuracy: f64,
    pub weights: Vec<f64>,
    pub recall: Vec<f64>,
    pub specificity: Vec<f64>,
    pub auc: Vec<f64>,
    pub one_vs_rest_accuracy: Vec<f64>,
    pub weighted_recall: f64,
    pub weighted_specificity: f64,
    pub weighted_auc: f64,
}

pub fn loop_metrics(y_true: &[usize], y_pred: &[usize], class_count: usize) -> LoopMetrics {
    let n = y_true.len();
    let correct = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    let mut m = LoopMetrics {
        accuracy: correct as f64 / n as f64,
        weights: vec![],
        recall: vec![],
        specificity: vec![],
        auc: vec![],
        one_vs_rest_accuracy: vec![],
        weighted_recall: 0.0,
        weighted_specificity: 0.0,
        weighted_auc: 0.0,
    };
    for c in 0..class_count {
        let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
        for (&t, &p) in y_true.iter().zip(y_pred) {
            match (t == c, p == c) {
                (true, true) => tp += 1,
                (true, false) => fn_ += 1,
                (false, true) => fp += 1,
                (false, false) => tn += 1,
            }
        }
        let w = (tp + fn_) as f64 / n as f64;
        let r = if tp + fn_ == 0 {
            0.0
        } else {
            tp as f64 / (tp + fn_) as f64
        };
        let s = if fp + tn == 0 {
            0.0
        } else {
            tn as f64 / (fp + tn) as f64
        };
        let a = (r + s) / 2.0;
        m.weights.push(w);
        m.recall.push(r);
        m.specificity.push(s);
        m.auc.push(a);
        m.one_vs_rest_accuracy.push((tp + tn) as f64 / n as f64);
        m.weighted_recall += w * r;
        m.weighted_specificity += w * s;
        m.weighted_auc += w * a;
    }
    m
}

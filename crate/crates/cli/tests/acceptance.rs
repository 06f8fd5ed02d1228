//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gaitrec::cart::{
    best_split, build_tree, impurity_drop, node_impurity, FeatureSubset, TreeNode, TreeParams,
};
use gaitrec::dsp::{dft_magnitude, spectral_centroid};
use gaitrec::eval::{confusion_matrix, cross_validate, metrics, stratified_kfold_labels};
use gaitrec::features::{
    cross_correlation, extract_feature_vector, magnitude, mean, mean_abs_deviation,
    mean_peak_spacing, median, peak_count, FEATURE_LAYOUT,
};
use gaitrec::forest::ForestParams;
use gaitrec::report::ReportDocument;
use gaitrec::synthgen::generate_benchmark_dataset;
use gaitrec::{Spectrum, Window, FEATURE_COUNT};
use gaitrec_oracles::{
    brute_force_best_split, loop_metrics, naive_dft_magnitude, reference_features,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Check = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn run_criterion(number: u32, title: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number} {status}: {title} ({secs:.1}s) {detail}");
    outcome.is_ok()
}

fn gaitrec(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gaitrec"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "gaitrec {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn random_series(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-20.0..20.0)).collect()
}

fn dft_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut saw_100 = false;
    for i in 0..1000 {
        let len = if i < 128 {
            i + 1
        } else {
            rng.random_range(1..=128)
        };
        saw_100 |= len == 100;
        let series = random_series(&mut rng, len);
        let fast = dft_magnitude(&series);
        let slow = naive_dft_magnitude(&series);
        check!(
            fast.bins.len() == len,
            "length {len} gave {} bins",
            fast.bins.len()
        );
        for (a, b) in fast.bins.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    check!(saw_100, "length 100 not exercised");
    check!(worst <= 1e-9, "max abs error {worst:e}");
    check!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("1000 series, max abs error {worst:.2e}"))
}

fn feature_hand_examples() -> Result<(), String> {
    let exact = |name: &str, got: f64, want: f64| -> Result<(), String> {
        if got == want {
            Ok(())
        } else {
            Err(format!("{name}: got {got}, want {want}"))
        }
    };
    let close = |name: &str, got: &[f64], want: &[f64]| -> Result<(), String> {
        if got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-12) {
            Ok(())
        } else {
            Err(format!("{name}: got {got:?}, want {want:?}"))
        }
    };

    close(
        "dft impulse",
        &dft_magnitude(&[1.0, 0.0, 0.0, 0.0]).bins,
        &[1.0; 4],
    )?;
    close(
        "dft constant",
        &dft_magnitude(&[2.5; 4]).bins,
        &[10.0, 0.0, 0.0, 0.0],
    )?;
    close(
        "dft cosine",
        &dft_magnitude(&[1.0, 0.0, -1.0, 0.0]).bins,
        &[0.0, 2.0, 0.0, 2.0],
    )?;

    let spectrum = |b: &[f64]| Spectrum { bins: b.to_vec() };
    exact(
        "centroid zeros",
        spectral_centroid(&[0.0; 4], &spectrum(&[0.0; 4])).unwrap(),
        0.0,
    )?;
    exact(
        "centroid impulse",
        spectral_centroid(&[1.0, 0.0, 0.0, 0.0], &spectrum(&[1.0; 4])).unwrap(),
        0.25,
    )?;
    exact(
        "centroid constant",
        spectral_centroid(&[1.0; 4], &spectrum(&[4.0, 0.0, 0.0, 0.0])).unwrap(),
        1.0,
    )?;

    exact("mean", mean(&[1.0, 2.0, 3.0]).unwrap(), 2.0)?;
    exact("median", median(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5)?;
    check!(mean(&[]).is_err(), "mean of empty series should fail");

    exact(
        "magnitude zeros",
        magnitude(&[0.0; 3], &[0.0; 3], &[0.0; 3]).unwrap(),
        0.0,
    )?;
    exact(
        "magnitude single",
        magnitude(&[3.0], &[4.0], &[0.0]).unwrap(),
        5.0,
    )?;
    exact(
        "magnitude pair",
        magnitude(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]).unwrap(),
        1.0,
    )?;

    let r = cross_correlation(2.0, 1.0);
    exact("ratio", r.value, 2.0)?;
    check!(!r.degenerate, "ratio 2/1 flagged degenerate");
    exact("ratio identical", cross_correlation(-3.7, -3.7).value, 1.0)?;
    let r = cross_correlation(5.0, 0.0);
    exact("ratio guard", r.value, 0.0)?;
    check!(r.degenerate, "zero denominator not flagged");

    let spikes = |at: &[usize]| {
        let mut s = vec![0.0; 100];
        for &i in at {
            s[i] = 1.0;
        }
        s
    };
    exact("peak count", peak_count(&spikes(&[10, 60])) as f64, 2.0)?;
    exact(
        "peak spacing",
        mean_peak_spacing(&spikes(&[10, 60]), 50.0),
        1.0,
    )?;
    let monotone: Vec<f64> = (0..100).map(f64::from).collect();
    exact("monotone count", peak_count(&monotone) as f64, 0.0)?;
    exact("monotone spacing", mean_peak_spacing(&monotone, 50.0), 0.0)?;
    exact(
        "three peaks",
        mean_peak_spacing(&spikes(&[10, 30, 50]), 50.0),
        0.4,
    )?;

    exact(
        "mad constant",
        mean_abs_deviation(&[-9.8; 100]).unwrap(),
        0.0,
    )?;
    exact("mad pair", mean_abs_deviation(&[0.0, 2.0]).unwrap(), 1.0)?;
    exact(
        "mad triple",
        mean_abs_deviation(&[1.0, 2.0, 3.0]).unwrap(),
        2.0 / 3.0,
    )?;

    let zeros = Window::new(vec![0.0; 100], vec![0.0; 100], vec![0.0; 100], 50.0, 4).unwrap();
    let f = extract_feature_vector(&zeros).unwrap();
    check!(
        f.vector.values.iter().all(|&v| v == 0.0),
        "zero window gave {:?}",
        f.vector.values
    );
    check!(
        f.degenerate_ratios == 4,
        "zero window flagged {} ratios",
        f.degenerate_ratios
    );
    check!(f.vector.label == 4, "label not preserved");

    let s: Vec<f64> = (0..100).map(|i| (i as f64 * 0.3).sin() + 2.0).collect();
    let f =
        extract_feature_vector(&Window::new(s.clone(), s.clone(), s, 50.0, 0).unwrap()).unwrap();
    let v = f.vector.values;
    check!(
        v[14] == 1.0 && v[15] == 1.0,
        "identical axes ratios {} {}",
        v[14],
        v[15]
    );
    check!(v[0] == v[1] && v[1] == v[2], "identical axes means differ");
    Ok(())
}

fn feature_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let len = if i < 80 {
            100
        } else {
            rng.random_range(2..=128)
        };
        let x = random_series(&mut rng, len);
        let y = random_series(&mut rng, len);
        let z: Vec<f64> = (0..len)
            .map(|_| -9.8 + rng.random_range(-3.0..3.0))
            .collect();
        let rate = if i % 2 == 0 { 50.0 } else { 100.0 };
        let want = reference_features(&x, &y, &z, rate);
        let win = Window::new(x, y, z, rate, i).map_err(|e| e.to_string())?;
        let got = extract_feature_vector(&win).map_err(|e| e.to_string())?;
        check!(
            got.vector.values.len() == FEATURE_COUNT,
            "wrong feature count"
        );
        for (slot, (a, b)) in got.vector.values.iter().zip(&want).enumerate() {
            let err = (a - b).abs();
            check!(err <= 1e-9, "window {i} slot {slot}: {a} vs {b}");
            worst = worst.max(err);
        }
    }
    feature_hand_examples()?;
    Ok(format!(
        "100 windows, max abs error {worst:.2e}, hand examples exact"
    ))
}

fn random_rows(
    rng: &mut ChaCha8Rng,
    n: usize,
    features: usize,
    classes: usize,
) -> Vec<(Vec<f64>, usize)> {
    let coarse = rng.random_bool(0.5);
    (0..n)
        .map(|_| {
            let v = (0..features)
                .map(|_| {
                    if coarse {
                        rng.random_range(0..5) as f64
                    } else {
                        rng.random_range(-1.0..1.0)
                    }
                })
                .collect();
            (v, rng.random_range(0..classes))
        })
        .collect()
}

fn split_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = 0;
    for case in 0..200 {
        let n = rng.random_range(1..=50);
        let p = rng.random_range(1..=5);
        let k = rng.random_range(2..=4);
        let rows = random_rows(&mut rng, n, p, k);
        let mut candidates: Vec<usize> = (0..p).filter(|_| rng.random_bool(0.7)).collect();
        if candidates.is_empty() {
            candidates.push(rng.random_range(0..p));
        }
        let root_total = n + rng.random_range(0..=50);
        let got = best_split(&rows, &candidates, root_total);
        let want = brute_force_best_split(&rows, &candidates, root_total);
        match (got, want) {
            (None, None) => {}
            (Some(s), Some((f, t, d))) => {
                check!(
                    s.feature_index == f
                        && s.threshold == t
                        && (s.impurity_drop - d).abs() <= 1e-12,
                    "case {case}: got ({}, {}, {}), want ({f}, {t}, {d})",
                    s.feature_index,
                    s.threshold,
                    s.impurity_drop
                );
                found += 1;
            }
            (g, w) => return Err(format!("case {case}: got {g:?}, want {w:?}")),
        }
    }
    let elapsed = start.elapsed();
    check!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("200 datasets agree ({found} with a split)"))
}

fn metrics_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    for case in 0..500 {
        let k = rng.random_range(1..=10);
        let n = rng.random_range(1..=500);
        let y_true: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let y_pred: Vec<usize> = y_true
            .iter()
            .map(|&t| {
                if rng.random_bool(0.6) {
                    t
                } else {
                    rng.random_range(0..k)
                }
            })
            .collect();
        let cm = confusion_matrix(&y_true, &y_pred, k).map_err(|e| e.to_string())?;
        let m = metrics(&cm).map_err(|e| e.to_string())?;
        let o = loop_metrics(&y_true, &y_pred, k);
        check!(
            close(m.accuracy, o.accuracy)
                && close(m.weighted_recall, o.weighted_recall)
                && close(m.weighted_specificity, o.weighted_specificity)
                && close(m.weighted_auc, o.weighted_auc),
            "case {case}: weighted metrics differ"
        );
        for (c, pc) in m.per_class.iter().enumerate() {
            check!(
                close(pc.weight, o.weights[c])
                    && close(pc.recall, o.recall[c])
                    && close(pc.specificity, o.specificity[c])
                    && close(pc.auc, o.auc[c])
                    && close(pc.accuracy, o.one_vs_rest_accuracy[c]),
                "case {case} class {c}: per-class metrics differ"
            );
        }
    }
    let cm = confusion_matrix(&[0, 0, 1, 1], &[0, 1, 1, 1], 2).unwrap();
    let m = metrics(&cm).unwrap();
    check!(m.accuracy == 0.75, "accuracy {}", m.accuracy);
    check!(m.weighted_auc == 0.75, "weighted AUC {}", m.weighted_auc);
    check!(
        m.weighted_recall == 0.75 && m.weighted_specificity == 0.75,
        "weighted recall/specificity"
    );
    let (a, b) = (m.per_class[0], m.per_class[1]);
    check!(
        (a.recall, a.specificity, a.auc, a.accuracy) == (0.5, 1.0, 0.75, 0.75)
            && (b.recall, b.specificity, b.auc, b.accuracy) == (1.0, 0.5, 0.75, 0.75),
        "2-class per-class values {a:?} {b:?}"
    );
    Ok("500 label pairs agree, 2-class example exact".into())
}

fn pipeline_analogue() -> Check {
    let start = Instant::now();
    let dataset = generate_benchmark_dataset(10, 360, 7).map_err(|e| e.to_string())?;
    check!(dataset.len() == 3600, "dataset has {} rows", dataset.len());
    let seeds = [7u64, 1, 2, 3, 4];
    let mut rf = Vec::new();
    let mut dt = Vec::new();
    let mut headline = None;
    for &seed in &seeds {
        let r = cross_validate(&dataset, &ForestParams::default().with_seed(seed), 10, seed)
            .map_err(|e| e.to_string())?;
        let d = cross_validate(&dataset, &ForestParams::decision_tree(seed), 10, seed)
            .map_err(|e| e.to_string())?;
        if headline.is_none() {
            headline = Some(r.headline);
        }
        rf.push(r.headline.accuracy);
        dt.push(d.headline.accuracy);
    }
    let h = headline.unwrap();
    let rf_mean = rf.iter().sum::<f64>() / rf.len() as f64;
    let dt_mean = dt.iter().sum::<f64>() / dt.len() as f64;
    let elapsed = start.elapsed();
    let detail = format!(
        "t=64 accuracy {:.4}, AUC {:.4}; mean accuracy RF {rf_mean:.4} vs DT {dt_mean:.4}",
        h.accuracy, h.auc
    );
    check!(h.accuracy >= 0.95 && h.auc >= 0.95, "{detail}");
    check!(rf_mean >= dt_mean, "{detail}");
    check!(
        elapsed < Duration::from_secs(300),
        "took {elapsed:?}; {detail}"
    );
    Ok(detail)
}

struct BenchRow {
    trees: usize,
    seconds: f64,
    accuracy: f64,
}

fn parse_bench(csv: &str) -> Result<Vec<BenchRow>, String> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            let num = |i: usize| {
                cells
                    .get(i)
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or(line.to_string())
            };
            Ok(BenchRow {
                trees: num(0)? as usize,
                seconds: num(1)?,
                accuracy: num(2)?,
            })
        })
        .collect()
}

fn row(rows: &[BenchRow], t: usize) -> Result<&BenchRow, String> {
    rows.iter()
        .find(|r| r.trees == t)
        .ok_or(format!("no bench row for t={t}"))
}

fn plateau(rows: &[BenchRow]) -> Check {
    let (a4, a64, a128) = (
        row(rows, 4)?.accuracy,
        row(rows, 64)?.accuracy,
        row(rows, 128)?.accuracy,
    );
    let detail = format!("accuracy t=4 {a4:.4}, t=64 {a64:.4}, t=128 {a128:.4}");
    check!((a64 - a128).abs() <= 0.01, "{detail}");
    check!(a64 - a4 >= 0.0, "{detail}");
    Ok(detail)
}

fn scaling(rows: &[BenchRow]) -> Check {
    let (t8, t64) = (row(rows, 8)?.seconds, row(rows, 64)?.seconds);
    let ratio = t64 / t8;
    let detail = format!("time t=64 {t64:.3}s / t=8 {t8:.3}s = {ratio:.2}");
    check!((4.0..=16.0).contains(&ratio), "{detail}");
    Ok(detail)
}

fn pipeline(dir: &Path, name: &str, threads: &str) -> Result<ReportDocument, String> {
    let data = format!("{name}/data");
    let feat = format!("{name}/features.csv");
    let report = format!("{name}/report.json");
    gaitrec(
        &["--threads", threads, "synth", "--seed", "7", "--out", &data],
        dir,
    )?;
    gaitrec(
        &[
            "--threads",
            threads,
            "featurize",
            "--input",
            &data,
            "--out",
            &feat,
        ],
        dir,
    )?;
    gaitrec(
        &[
            "--threads",
            threads,
            "evaluate",
            "--features",
            &feat,
            "--seed",
            "7",
            "--out",
            &report,
            "--format",
            "json",
        ],
        dir,
    )?;
    let text = fs::read_to_string(dir.join(&report)).map_err(|e| e.to_string())?;
    ReportDocument::from_json(&text).map_err(|e| e.to_string())
}

fn determinism(dir: &Path) -> Check {
    let one = pipeline(dir, "serial", "1")?;
    let four = pipeline(dir, "parallel", "4")?;
    check!(
        one.metadata.threads == 1 && four.metadata.threads == 4,
        "thread counts not recorded"
    );
    for file in [
        "data/manifest.json",
        "data/1/recording.csv",
        "data/10/recording.csv",
        "features.csv",
    ] {
        let a = fs::read(dir.join("serial").join(file)).map_err(|e| e.to_string())?;
        let b = fs::read(dir.join("parallel").join(file)).map_err(|e| e.to_string())?;
        check!(a == b, "{file} differs between --threads 1 and --threads 4");
    }
    let (a, b) = (one.without_metadata(), four.without_metadata());
    check!(a == b, "reports differ between --threads 1 and --threads 4");
    check!(
        a.to_json().unwrap() == b.to_json().unwrap(),
        "serialized reports differ"
    );
    Ok(format!(
        "--threads 1 and 4 give identical reports (accuracy {:.4})",
        a.evaluation.headline.accuracy
    ))
}

fn check_drops(
    node: &TreeNode,
    rows: &[(Vec<f64>, usize)],
    idx: &[usize],
    k: usize,
    root: usize,
) -> Result<usize, String> {
    let TreeNode::Internal {
        feature_index,
        threshold,
        left,
        right,
    } = node
    else {
        return Ok(0);
    };
    let hist = |ix: &[usize]| {
        let mut h = vec![0; k];
        for &i in ix {
            h[rows[i].1] += 1;
        }
        h
    };
    let (l, r): (Vec<usize>, Vec<usize>) = idx
        .iter()
        .partition(|&&i| rows[i].0[*feature_index] <= *threshold);
    let drop = impurity_drop(&hist(idx), &hist(&l), &hist(&r), root).map_err(|e| e.to_string())?;
    check!(drop >= -1e-12, "chosen split has drop {drop}");
    Ok(1 + check_drops(left, rows, &l, k, root)? + check_drops(right, rows, &r, k, root)?)
}

fn invariants(features_csv: &Path) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    for _ in 0..1000 {
        let k = rng.random_range(1..=10);
        let hist: Vec<usize> = (0..k).map(|_| rng.random_range(0..20)).collect();
        if hist.iter().sum::<usize>() == 0 {
            continue;
        }
        let i = node_impurity(&hist).map_err(|e| e.to_string())?;
        check!(
            i >= 0.0 && i <= 1.0 - 1.0 / k as f64 + 1e-12,
            "impurity {i} for {hist:?}"
        );
    }

    let mut splits = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=60);
        let p = rng.random_range(1..=5);
        let k = rng.random_range(2..=4);
        let rows = random_rows(&mut rng, n, p, k);
        let params = TreeParams {
            max_depth: None,
            min_samples_split: 2,
            feature_subset: FeatureSubset::Count(rng.random_range(1..=p)),
        };
        let tree = build_tree(&rows, &params, &mut rng).map_err(|e| e.to_string())?;
        let idx: Vec<usize> = (0..n).collect();
        splits += check_drops(&tree, &rows, &idx, k, n)?;
        if let Some(s) = best_split(&rows, &(0..p).collect::<Vec<_>>(), n) {
            check!(
                s.impurity_drop > 0.0,
                "best split with drop {}",
                s.impurity_drop
            );
        }
    }

    for _ in 0..100 {
        let k = rng.random_range(2..=6);
        let folds = rng.random_range(2..=10);
        let labels: Vec<usize> = (0..k)
            .flat_map(|c| std::iter::repeat_n(c, rng.random_range(folds..=folds * 5)))
            .collect();
        let parts =
            stratified_kfold_labels(&labels, k, folds, rng.random()).map_err(|e| e.to_string())?;
        for c in 0..k {
            let counts: Vec<usize> = parts
                .iter()
                .map(|f| f.iter().filter(|&&i| labels[i] == c).count())
                .collect();
            let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            check!(hi - lo <= 1, "class {c} fold counts {counts:?}");
        }
    }

    for _ in 0..200 {
        let len = rng.random_range(1..=128);
        let bins = dft_magnitude(&random_series(&mut rng, len)).bins;
        for j in 1..len {
            check!(
                (bins[j] - bins[len - j]).abs() <= 1e-9,
                "spectrum not symmetric at {j} of {len}"
            );
        }
    }

    check!(
        FEATURE_LAYOUT.len() == 30 && FEATURE_COUNT == 30,
        "feature layout is not 30 wide"
    );
    let csv = fs::read_to_string(features_csv).map_err(|e| e.to_string())?;
    let header = csv.lines().next().unwrap_or_default();
    check!(
        header.split(',').count() == 31,
        "feature CSV header has {} columns",
        header.split(',').count()
    );

    for _ in 0..200 {
        let k = rng.random_range(1..=10);
        let n = rng.random_range(1..=300);
        let t: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let p: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let m = metrics(&confusion_matrix(&t, &p, k).unwrap()).unwrap();
        let w: f64 = m.per_class.iter().map(|c| c.weight).sum();
        check!((w - 1.0).abs() <= 1e-12, "class weights sum to {w}");
    }
    Ok(format!("impurity bounds, {splits} chosen splits with drop >= 0, stratification, symmetry, 30 features, weights sum to 1"))
}

fn main() -> ExitCode {
    let tmp = TempDir::new().expect("temp dir");
    let dir = tmp.path();
    let mut all = true;

    all &= run_criterion(1, "DFT matches naive DFT", dft_oracle);
    all &= run_criterion(2, "features match reference", feature_oracle);
    all &= run_criterion(3, "best split matches brute force", split_oracle);
    all &= run_criterion(4, "metrics match loop evaluation", metrics_oracle);
    all &= run_criterion(5, "synthetic 10-user cross-validation", pipeline_analogue);
    all &= run_criterion(8, "pipeline independent of thread count", || {
        determinism(dir)
    });

    let bench = gaitrec(
        &[
            "--threads",
            "1",
            "bench",
            "--features",
            "serial/features.csv",
            "--seed",
            "7",
            "--folds",
            "10",
            "--max-trees",
            "128",
            "--repeats",
            "3",
        ],
        dir,
    )
    .map(|out| String::from_utf8_lossy(&out).into_owned())
    .and_then(|csv| parse_bench(&csv));
    all &= run_criterion(6, "accuracy plateaus by 64 trees", || {
        plateau(bench.as_ref().map_err(Clone::clone)?)
    });
    all &= run_criterion(7, "training time scales with tree count", || {
        scaling(bench.as_ref().map_err(Clone::clone)?)
    });

    all &= run_criterion(9, "invariant suites", || {
        invariants(&dir.join("serial/features.csv"))
    });

    if all {
        println!("acceptance: all criteria PASS");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAIL");
        ExitCode::FAILURE
    }
}

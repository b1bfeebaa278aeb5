//! Independent reference implementations used only by tests.
//!
//! Nothing here calls into the code under test.

#![allow(dead_code)]

/// Exhaustive kNN regression: `k` selection passes over all rows, each taking
/// the nearest unselected row (lowest index on ties), then a per-column mean of
/// the selected targets in selection order, clamped to `[lo, hi]`.
pub fn knn_predict(features: &[Vec<f64>], targets: &[Vec<f64>], k: usize, query: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let n = features.len();
    let k = k.min(n);
    let mut dist = vec![0.0f64; n];
    for (i, row) in features.iter().enumerate() {
        let mut s = 0.0;
        for (a, b) in row.iter().zip(query) {
            s += (a - b) * (a - b);
        }
        dist[i] = s;
    }
    let mut taken = vec![false; n];
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if taken[i] {
                continue;
            }
            if best.is_none_or(|b| dist[i] < dist[b]) {
                best = Some(i);
            }
        }
        let b = best.unwrap();
        taken[b] = true;
        chosen.push(b);
    }
    let m = targets[0].len();
    (0..m)
        .map(|j| {
            let mut s = 0.0;
            for &i in &chosen {
                s += targets[i][j];
            }
            (s / k as f64).clamp(lo, hi)
        })
        .collect()
}

/// Textbook two-pass Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut mx = 0.0;
    let mut my = 0.0;
    for i in 0..x.len() {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    let mut num = 0.0;
    let mut dx2 = 0.0;
    let mut dy2 = 0.0;
    for i in 0..x.len() {
        num += (x[i] - mx) * (y[i] - my);
        dx2 += (x[i] - mx).powi(2);
        dy2 += (y[i] - my).powi(2);
    }
    num / (dx2.sqrt() * dy2.sqrt())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// `P(T > t)` for Student's t with `df` degrees of freedom by quadrature.
///
/// Substituting `x = sqrt(df) tan(theta)` turns the density into
/// `cos(theta)^(df - 1)` on `(-pi/2, pi/2)`, so both the tail mass and the
/// normalizer are integrals of a smooth function over a finite interval.
pub fn t_upper_tail(t: f64, df: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let f = |th: f64| th.cos().max(0.0).powf(df - 1.0);
    let theta = (t / df.sqrt()).atan();
    let tail = simpson(f, theta, half_pi, 40_000);
    let total = simpson(f, -half_pi, half_pi, 80_000);
    tail / total
}

/// `P(Z > z)` for a standard normal, from an independent erfc implementation.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(z / std::f64::consts::SQRT_2)
}

/// One-sample t statistic with the unbiased SD, computed directly.
pub fn t_statistic(samples: &[f64], mu0: f64) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean - mu0) / (var.sqrt() / n.sqrt())
}

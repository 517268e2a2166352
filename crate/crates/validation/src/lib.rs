//! Signal fits used by the acceptance suite: window means, log-log
//! envelope slopes, single-frequency least squares and zero counting.

use std::f64::consts::PI;

/// Mean of `v` over samples with `times` in `[a, b]`.
pub fn mean_over(times: &[f64], v: &[f64], a: f64, b: f64) -> f64 {
    let sel: Vec<f64> = times.iter().zip(v).filter(|(t, _)| **t >= a && **t <= b).map(|(_, x)| *x).collect();
    sel.iter().sum::<f64>() / sel.len() as f64
}

/// Least-squares slope of `y` against `x`.
pub fn line_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    sxy / sxx
}

/// Log-log slope of a uniformly sampled signal after averaging it over
/// consecutive windows of length `period`, which removes a beat at that
/// period before fitting.
pub fn envelope_slope(times: &[f64], v: &[f64], window: (f64, f64), period: f64) -> f64 {
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= window.0 && times[i] <= window.1).collect();
    let h = times[1] - times[0];
    let w = ((period / h).round() as usize).max(1);
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for chunk in idx.chunks_exact(w) {
        let m = chunk.iter().map(|&i| v[i]).sum::<f64>() / w as f64;
        let t = chunk.iter().map(|&i| times[i]).sum::<f64>() / w as f64;
        lx.push(t.ln());
        ly.push(m.ln());
    }
    line_slope(&lx, &ly)
}

/// Result of [`fit_sinusoid`]: `offset + amplitude cos(frequency t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub frequency: f64,
    pub offset: f64,
    pub amplitude: f64,
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Linear least squares for `a + b cos(wt) + c sin(wt)`; returns the
/// residual sum of squares and `[a, b, c]`.
fn linear_fit(t: &[f64], y: &[f64], w: f64) -> (f64, [f64; 3]) {
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for (&ti, &yi) in t.iter().zip(y) {
        let f = [1.0, (w * ti).cos(), (w * ti).sin()];
        for i in 0..3 {
            r[i] += f[i] * yi;
            for j in 0..3 {
                m[i][j] += f[i] * f[j];
            }
        }
    }
    let d = det3(&m);
    let coef: [f64; 3] = std::array::from_fn(|k| {
        let mut mk = m;
        for (row, &ri) in mk.iter_mut().zip(&r) {
            row[k] = ri;
        }
        det3(&mk) / d
    });
    let rss = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| (yi - coef[0] - coef[1] * (w * ti).cos() - coef[2] * (w * ti).sin()).powi(2))
        .sum();
    (rss, coef)
}

/// Best single-frequency fit with the frequency searched in `[lo, hi]`:
/// a scan at a twentieth of the record's frequency resolution, then a
/// golden-section refinement.
pub fn fit_sinusoid(t: &[f64], y: &[f64], lo: f64, hi: f64) -> Sinusoid {
    let span = t[t.len() - 1] - t[0];
    let step = 0.05 * 2.0 * PI / span;
    let mut best = (f64::INFINITY, lo);
    let mut w = lo;
    while w <= hi {
        let rss = linear_fit(t, y, w).0;
        if rss < best.0 {
            best = (rss, w);
        }
        w += step;
    }
    let w = golden_min(|w| linear_fit(t, y, w).0, best.1 - step, best.1 + step, 100);
    let c = linear_fit(t, y, w).1;
    Sinusoid { frequency: w, offset: c[0], amplitude: c[1].hypot(c[2]) }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..iters {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Interior zeros of a non-negative function on `(a, b)`: local minima of a
/// uniform sample, refined by golden section, that fall below `1e-12` of
/// the sampled peak.
pub fn count_zeros(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> usize {
    let x = |j: usize| a + (b - a) * j as f64 / samples as f64;
    let v: Vec<f64> = (1..samples).map(|j| f(x(j))).collect();
    let peak = v.iter().cloned().fold(0.0, f64::max);
    (1..v.len() - 1)
        .filter(|&j| v[j] <= v[j - 1] && v[j] < v[j + 1])
        .filter(|&j| f(golden_min(&f, x(j), x(j + 2), 200)) < 1e-12 * peak)
        .count()
}

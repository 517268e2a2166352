//! Quadrature building blocks: Gauss–Kronrod 15/7 panels with adaptive
//! bisection, Gauss–Legendre rules, and a Filon-type rule for
//! `∫ p(x) e^{iωx} dx` with polynomial `p`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::{Error, Result};

/// Kronrod abscissae on `[0, 1]`, outermost first; the last is the centre.
pub const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

pub const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss 7-point weights for the odd-indexed Kronrod nodes and the centre.
pub const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// The 15 nodes of a panel `[a, b]` with Kronrod weights and the Gauss-7
/// weights (zero on Kronrod-only nodes), both already scaled by the
/// half-width.
#[derive(Debug, Clone, Copy)]
pub struct Gk15Rule {
    pub nodes: [f64; 15],
    pub kronrod: [f64; 15],
    pub gauss: [f64; 15],
}

impl Gk15Rule {
    pub fn on(a: f64, b: f64) -> Self {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut nodes = [0.0; 15];
        let mut kronrod = [0.0; 15];
        let mut gauss = [0.0; 15];
        for j in 0..7 {
            nodes[j] = c - h * XGK[j];
            nodes[14 - j] = c + h * XGK[j];
            kronrod[j] = h * WGK[j];
            kronrod[14 - j] = h * WGK[j];
            if j % 2 == 1 {
                gauss[j] = h * WG[j / 2];
                gauss[14 - j] = h * WG[j / 2];
            }
        }
        nodes[7] = c;
        kronrod[7] = h * WGK[7];
        gauss[7] = h * WG[3];
        Gk15Rule { nodes, kronrod, gauss }
    }

    /// `(K15, |K15 - G7|)` for real samples at [`Gk15Rule::nodes`].
    pub fn apply(&self, values: &[f64; 15]) -> (f64, f64) {
        let mut k = 0.0;
        let mut g = 0.0;
        for j in 0..15 {
            k += self.kronrod[j] * values[j];
            g += self.gauss[j] * values[j];
        }
        (k, (k - g).abs())
    }
}

/// Panel `[a, b]` of an adaptive partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
}

impl Panel {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

/// Adaptive bisection of `[a, b]` until each GK15 panel's error estimate is
/// below `abs_tol · width / (b - a)` or its width reaches `min_width`.
/// Starts from `initial` equal panels; returns panels in order.
pub fn adaptive_partition<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    initial: usize,
    abs_tol: f64,
    min_width: f64,
    max_panels: usize,
) -> Result<Vec<Panel>> {
    let total = b - a;
    let mut stack: Vec<Panel> = (0..initial.max(1))
        .rev()
        .map(|j| {
            let lo = a + total * j as f64 / initial.max(1) as f64;
            let hi = if j + 1 == initial.max(1) { b } else { a + total * (j + 1) as f64 / initial.max(1) as f64 };
            Panel { a: lo, b: hi }
        })
        .collect();
    let mut done = Vec::new();
    while let Some(p) = stack.pop() {
        let rule = Gk15Rule::on(p.a, p.b);
        let mut vals = [0.0; 15];
        for (v, &x) in vals.iter_mut().zip(&rule.nodes) {
            *v = f(x);
        }
        let (_, err) = rule.apply(&vals);
        if !err.is_finite() {
            return Err(Error::Quadrature { t: f64::NAN, panel: (p.a, p.b), estimate: err });
        }
        if err <= abs_tol * p.width() / total || p.width() <= 2.0 * min_width {
            done.push(p);
        } else {
            let m = 0.5 * (p.a + p.b);
            stack.push(Panel { a: m, b: p.b });
            stack.push(Panel { a: p.a, b: m });
        }
        if done.len() + stack.len() > max_panels {
            return Err(Error::Quadrature { t: f64::NAN, panel: (p.a, p.b), estimate: err });
        }
    }
    Ok(done)
}

/// Integral of `f` over `[a, b]` with [`adaptive_partition`] at the given
/// tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let panels = adaptive_partition(f, a, b, 4, abs_tol, 1e-12 * (b - a).abs(), 1 << 20)?;
    Ok(panels
        .iter()
        .map(|p| {
            let rule = Gk15Rule::on(p.a, p.b);
            let mut vals = [0.0; 15];
            for (v, &x) in vals.iter_mut().zip(&rule.nodes) {
                *v = f(x);
            }
            rule.apply(&vals).0
        })
        .sum())
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton
/// iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Monomial coefficients (in `x ∈ [-1, 1]`) of the degree-`n` Chebyshev
/// interpolant of `f` on `[a, b]`, together with the largest deviation
/// between `f` and the interpolant at the `n` interior midpoints of the
/// Chebyshev grid.
pub fn chebyshev_monomials<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    let m = n + 1;
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let vals: Vec<f64> = (0..m)
        .map(|j| f(c + h * (PI * (j as f64 + 0.5) / m as f64).cos()))
        .collect();
    let mut cheb = vec![0.0; m];
    for (k, ck) in cheb.iter_mut().enumerate() {
        let s: f64 = vals
            .iter()
            .enumerate()
            .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / m as f64).cos())
            .sum();
        *ck = 2.0 * s / m as f64;
    }
    cheb[0] *= 0.5;

    // T_k in monomials via T_{k+1} = 2x T_k - T_{k-1}
    let mut mono = vec![0.0; m];
    let mut t_prev = vec![0.0; m];
    let mut t_cur = vec![0.0; m];
    t_prev[0] = 1.0;
    mono[0] += cheb[0];
    if m > 1 {
        t_cur[1] = 1.0;
        mono[1] += cheb[1];
    }
    for k in 2..m {
        let mut t_next = vec![0.0; m];
        for j in 0..m {
            let shifted = if j > 0 { 2.0 * t_cur[j - 1] } else { 0.0 };
            t_next[j] = shifted - t_prev[j];
        }
        for j in 0..m {
            mono[j] += cheb[k] * t_next[j];
        }
        t_prev = core::mem::replace(&mut t_cur, t_next);
    }

    let mut worst: f64 = 0.0;
    for j in 0..n {
        let xm = (PI * (j as f64 + 1.0) / m as f64).cos();
        let p = horner(&mono, xm);
        worst = worst.max((p - f(c + h * xm)).abs());
    }
    (mono, worst)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `∫_{-1}^{1} p(x) e^{iωx} dx` for the monomial coefficients `p`.
///
/// Uses the upward moment recursion
/// `μ_k = (e^{iω} - (-1)^k e^{-iω})/(iω) - (k/(iω)) μ_{k-1}` when it is
/// stable (`|ω| >= deg p`) and a 48-point Gauss–Legendre rule otherwise.
pub fn filon_integral(p: &[f64], omega: f64, gl: &(Vec<f64>, Vec<f64>)) -> C64 {
    let n = p.len();
    if omega.abs() >= n as f64 && omega != 0.0 {
        let e_plus = C64::from_polar(1.0, omega);
        let e_minus = e_plus.conj();
        let iw = C64::new(0.0, omega);
        let mut mu = (e_plus - e_minus) / iw;
        let mut acc = mu * p[0];
        for (k, &pk) in p.iter().enumerate().skip(1) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            mu = (e_plus - sign * e_minus) / iw - (k as f64 / iw) * mu;
            acc += mu * pk;
        }
        acc
    } else {
        gl.0
            .iter()
            .zip(&gl.1)
            .map(|(&x, &w)| C64::from_polar(w * horner(p, x), omega * x))
            .sum()
    }
}

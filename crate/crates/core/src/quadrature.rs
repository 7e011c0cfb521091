//! Small numerical kernels: Gauss–Legendre rules, polynomial extrapolation to
//! zero, and the sine/cosine integrals.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, nodes found by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * s
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel integration with two rules of different order; returns the higher
/// order value and the difference as an error estimate.
pub fn panel_integral(
    low: &GaussLegendre,
    high: &GaussLegendre,
    a: f64,
    b: f64,
    f: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let h = high.integrate(a, b, &f);
    let l = low.integrate(a, b, &f);
    (h, (h - l).abs())
}

/// Value at 0 of the interpolating polynomial through `(xs[i], ys[i])`
/// (Neville's scheme), with the last correction as error estimate.
///
/// Works for real or complex samples.
pub fn extrapolate_to_zero<T>(xs: &[f64], ys: &[T]) -> Result<(T, f64)>
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>
        + Magnitude,
{
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(invalid("extrapolation", "need equally many abscissae and samples"));
    }
    let n = xs.len();
    let mut p: Vec<T> = ys.to_vec();
    let mut err = f64::INFINITY;
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            if xi == xj {
                return Err(invalid("extrapolation", "abscissae must be distinct"));
            }
            // P(0) = (x_j P_i − x_i P_{i+1}) / (x_j − x_i)
            let next = (p[i] * xj - p[i + 1] * xi) * (1.0 / (xj - xi));
            if m == n - 1 {
                err = (next - p[i + 1]).magnitude().min((next - p[i]).magnitude());
            }
            p[i] = next;
        }
    }
    if n == 1 {
        err = f64::INFINITY;
    }
    Ok((p[0], err))
}

/// Absolute value for extrapolated quantities.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for crate::C64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Sine and cosine integrals `(Si(x), Ci(x))` for `x > 0`, and `Si` for any
/// real `x` via oddness.
///
/// Power series below 2, continued fraction for `E₁(ix)` above.
pub fn sici(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(invalid("x", "not finite"));
    }
    let t = x.abs();
    if t == 0.0 {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let (si, ci) = if t < 2.0 {
        series(t)
    } else {
        continued_fraction(t)?
    };
    Ok((if x < 0.0 { -si } else { si }, ci))
}

/// `Si(x) = ∫_0^x sin t / t dt`.
pub fn si(x: f64) -> f64 {
    sici(x).map(|(s, _)| s).unwrap_or(f64::NAN)
}

fn series(t: f64) -> (f64, f64) {
    const EULER: f64 = 0.577_215_664_901_532_9;
    // Si = Σ (−1)^k t^{2k+1} / ((2k+1)(2k+1)!),  Ci = γ + ln t + Σ_{k≥1} (−1)^k t^{2k} / (2k (2k)!)
    let mut si = 0.0;
    let mut ci = 0.0;
    let mut power_over_fact = 1.0; // t^n / n!
    for n in 1..60usize {
        power_over_fact *= t / n as f64;
        let k = n / 2;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = power_over_fact / n as f64;
        if n % 2 == 1 {
            si += sign * term;
        } else {
            ci += sign * term;
        }
        if term < 1e-18 {
            break;
        }
    }
    (si, EULER + t.ln() + ci)
}

fn continued_fraction(t: f64) -> Result<(f64, f64)> {
    use crate::C64;
    const TINY: f64 = 1e-300;
    let one = C64::new(1.0, 0.0);
    // Modified Lentz on E₁(it) = e^{−it} · 1/(1 + it − 1²/(3 + it − 2²/(5 + it − …)))
    let mut b = C64::new(1.0, t);
    let mut c = C64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut converged = false;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += C64::new(2.0, 0.0);
        d = one / (d * a + b);
        c = b + C64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergent {
            what: "sine integral continued fraction",
            detail: format!("x = {t}"),
        });
    }
    h *= C64::from_polar(1.0, -t);
    Ok((FRAC_PI_2 + h.im, -h.re))
}

//! The real-line model `L = i d/dx + i|q|`-type operator reduced to scalar
//! integrals of the potential.
//!
//! The operator is never discretised. Everything here is a functional of `q`:
//! the similarity weight `exp(−∫_{−∞}^x q)`, the growth of `∫_{−X}^{X} |q|`,
//! the translation-group identity behind it, and cell-wise summability
//! series for kernel operators.
//!
//! Oscillatory integrals of `sin x / x` are split at multiples of `π`, where
//! the integrand has constant sign, and each period is integrated with a
//! Gauss–Legendre rule.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{si, GaussLegendre};
use crate::series::{fit_line, LineFit, SeriesCertificate, TailRule};
use crate::C64;

/// Gauss–Legendre order used on each period or cell.
const PANEL_ORDER: usize = 20;

/// Default spacing of the test-function grid.
pub const DEFAULT_GRID_SPACING: f64 = 1.0 / 64.0;
/// Default half-width of the test-function grid.
pub const DEFAULT_GRID_HALF_WIDTH: f64 = 256.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `q(x) = sin x / x`, `q(0) = 1`.
    SincDefault,
    /// Samples on a uniform grid, linear in between and zero outside.
    UserSampled { x0: f64, h: f64, values: Vec<f64> },
    /// `height` on `(lo, hi)`, half of it at the endpoints, zero elsewhere.
    Box { lo: f64, hi: f64, height: f64 },
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFunction {
    kind: PotentialKind,
}

impl PotentialFunction {
    pub fn new(kind: PotentialKind) -> Result<Self> {
        match &kind {
            PotentialKind::UserSampled { x0, h, values } => {
                if !(x0.is_finite() && *h > 0.0 && h.is_finite()) {
                    return Err(invalid("potential", "grid needs a finite origin and positive spacing"));
                }
                if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("potential", "need at least two finite samples"));
                }
            }
            PotentialKind::Box { lo, hi, height } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi && height.is_finite()) {
                    return Err(invalid("potential", "box needs finite lo < hi and a finite height"));
                }
            }
            PotentialKind::SincDefault | PotentialKind::Zero => {}
        }
        Ok(Self { kind })
    }

    pub fn sinc() -> Self {
        Self {
            kind: PotentialKind::SincDefault,
        }
    }

    pub fn zero() -> Self {
        Self {
            kind: PotentialKind::Zero,
        }
    }

    pub fn boxcar(lo: f64, hi: f64, height: f64) -> Result<Self> {
        Self::new(PotentialKind::Box { lo, hi, height })
    }

    /// Two-column CSV `x, q(x)`; the abscissae must be uniformly spaced.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut xs = Vec::new();
        let mut qs = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| invalid("potential.csv", e.to_string()))?;
            if record.len() < 2 {
                return Err(invalid("potential.csv", format!("record {} needs two columns", i + 1)));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(x), Ok(q)) => {
                    xs.push(x);
                    qs.push(q);
                }
                _ if i == 0 => continue,
                _ => return Err(invalid("potential.csv", format!("record {} is not numeric", i + 1))),
            }
        }
        if xs.len() < 2 {
            return Err(invalid("potential.csv", "need at least two samples"));
        }
        let h = xs[1] - xs[0];
        if h <= 0.0 {
            return Err(invalid("potential.csv", "abscissae must increase"));
        }
        for (i, w) in xs.windows(2).enumerate() {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0) {
                return Err(invalid("potential.csv", format!("grid is not uniform at sample {}", i + 2)));
            }
        }
        Self::new(PotentialKind::UserSampled { x0: xs[0], h, values: qs })
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_str(&text)
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::SincDefault => sinc(x),
            PotentialKind::UserSampled { x0, h, values } => {
                let s = (x - x0) / h;
                let last = (values.len() - 1) as f64;
                if !(0.0..=last).contains(&s) {
                    return 0.0;
                }
                let i = (s.floor() as usize).min(values.len() - 2);
                let frac = s - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
            PotentialKind::Box { lo, hi, height } => {
                if x > *lo && x < *hi {
                    *height
                } else if x == *lo || x == *hi {
                    0.5 * height
                } else {
                    0.0
                }
            }
            PotentialKind::Zero => 0.0,
        }
    }

    /// Closed interval outside of which `q` vanishes, `None` if unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.kind {
            PotentialKind::SincDefault => None,
            PotentialKind::UserSampled { x0, h, values } => Some((*x0, x0 + h * (values.len() - 1) as f64)),
            PotentialKind::Box { lo, hi, .. } => Some((*lo, *hi)),
            PotentialKind::Zero => Some((0.0, 0.0)),
        }
    }

    /// `∫_a^b |q|`.
    pub fn abs_integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match &self.kind {
            PotentialKind::SincDefault => {
                let gl = GaussLegendre::new(PANEL_ORDER);
                period_pieces(a, b)
                    .map(|(s, t)| gl.integrate(s, t, |x| sinc(x).abs()))
                    .sum()
            }
            PotentialKind::UserSampled { x0, h, values } => {
                piecewise_integral(*x0, *h, values, a, b, abs_linear)
            }
            PotentialKind::Box { lo, hi, height } => height.abs() * overlap(*lo, *hi, a, b),
            PotentialKind::Zero => 0.0,
        }
    }

    /// `∫_a^b q²`.
    pub fn square_integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match &self.kind {
            PotentialKind::SincDefault => {
                let gl = GaussLegendre::new(PANEL_ORDER);
                period_pieces(a, b)
                    .map(|(s, t)| gl.integrate(s, t, |x| sinc(x).powi(2)))
                    .sum()
            }
            PotentialKind::UserSampled { x0, h, values } => {
                piecewise_integral(*x0, *h, values, a, b, |len, u, v| len * (u * u + u * v + v * v) / 3.0)
            }
            PotentialKind::Box { lo, hi, height } => height * height * overlap(*lo, *hi, a, b),
            PotentialKind::Zero => 0.0,
        }
    }
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    (hi.min(b) - lo.max(a)).max(0.0)
}

/// Split `[a, b]` at the multiples of `π` inside it.
fn period_pieces(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let first = (a / PI).floor() as i64 + 1;
    let last = (b / PI).ceil() as i64 - 1;
    let mut cuts = vec![a];
    cuts.extend((first..=last).map(|k| k as f64 * PI).filter(|&c| c > a && c < b));
    cuts.push(b);
    (0..cuts.len() - 1).map(move |i| (cuts[i], cuts[i + 1]))
}

/// `∫ |ℓ|` for a linear `ℓ` with endpoint values `u`, `v` over a segment of
/// length `len`.
fn abs_linear(len: f64, u: f64, v: f64) -> f64 {
    if u * v >= 0.0 {
        0.5 * len * (u.abs() + v.abs())
    } else {
        0.5 * len * (u * u + v * v) / (u.abs() + v.abs())
    }
}

/// Exact integral of `kernel` over the linear pieces of a sampled function
/// restricted to `[a, b]`.
fn piecewise_integral(x0: f64, h: f64, values: &[f64], a: f64, b: f64, kernel: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let end = x0 + h * (values.len() - 1) as f64;
    let (lo, hi) = (a.max(x0), b.min(end));
    if hi <= lo {
        return 0.0;
    }
    let value = |x: f64| {
        let s = ((x - x0) / h).clamp(0.0, (values.len() - 1) as f64);
        let i = (s.floor() as usize).min(values.len() - 2);
        let f = s - i as f64;
        values[i] * (1.0 - f) + values[i + 1] * f
    };
    let first = ((lo - x0) / h).floor() as usize;
    let last = (((hi - x0) / h).ceil() as usize).min(values.len() - 1);
    let mut total = 0.0;
    for i in first..last {
        let s = (x0 + h * i as f64).max(lo);
        let t = (x0 + h * (i + 1) as f64).min(hi);
        if t > s {
            total += kernel(t - s, value(s), value(t));
        }
    }
    total
}

/// `∫_0^∞ sin t / t` summed period by period with repeated averaging of the
/// alternating partial sums. Returns the value and the last averaging change.
pub fn sinc_half_line_integral() -> (f64, f64) {
    const PERIODS: usize = 64;
    const LEVELS: usize = 24;
    let gl = GaussLegendre::new(PANEL_ORDER);
    let mut partial = Vec::with_capacity(PERIODS);
    let mut acc = 0.0;
    for k in 0..PERIODS {
        let (a, b) = (k as f64 * PI, (k + 1) as f64 * PI);
        acc += gl.integrate(a, b, sinc);
        partial.push(acc);
    }
    let mut level: Vec<f64> = partial[PERIODS - LEVELS..].to_vec();
    let mut change = f64::INFINITY;
    while level.len() > 1 {
        let next: Vec<f64> = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        if next.len() == 1 {
            change = (next[0] - level[level.len() - 1]).abs().min((next[0] - level[0]).abs());
        }
        level = next;
    }
    (level[0], change)
}

/// `∫_{−∞}^x sin t / t` by per-period quadrature.
pub fn sinc_primitive_quadrature(x: f64) -> (f64, f64) {
    let (half, err) = sinc_half_line_integral();
    let gl = GaussLegendre::new(PANEL_ORDER);
    let (a, b, sign) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let body: f64 = period_pieces(a, b).map(|(s, t)| gl.integrate(s, t, sinc)).sum();
    (half + sign * body, err + 1e-15 * (1.0 + x.abs() / PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightValue {
    pub x: f64,
    /// `exp(−Q(x))`.
    pub weight: f64,
    /// `Q(x) = ∫_{−∞}^x q`.
    pub primitive: f64,
    /// `|Q_closed − Q_quadrature|` where both are available.
    pub crosscheck: Option<f64>,
}

/// Similarity weight `exp(−∫_{−∞}^x q)`; `x` may be `±∞`.
pub fn similarity_weight(q: &PotentialFunction, x: f64) -> Result<WeightValue> {
    if x.is_nan() {
        return Err(invalid("x", "NaN"));
    }
    let (primitive, crosscheck) = match q.kind() {
        PotentialKind::SincDefault => {
            if x == f64::NEG_INFINITY {
                (0.0, None)
            } else if x == f64::INFINITY {
                let (half, _) = sinc_half_line_integral();
                (PI, Some((2.0 * half - PI).abs()))
            } else {
                let closed = si(x) + FRAC_PI_2;
                let (quad, _) = sinc_primitive_quadrature(x);
                (closed, Some((closed - quad).abs()))
            }
        }
        PotentialKind::UserSampled { x0, h, values } => {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let ends = values[0].abs().max(values[values.len() - 1].abs());
            if ends > 1e-8 * scale {
                return Err(Error::NonConvergent {
                    what: "primitive of the potential",
                    detail: format!("samples do not decay at the grid ends (|q| = {ends:.3e})"),
                });
            }
            let upper = if x.is_finite() { x } else if x > 0.0 { f64::MAX } else { f64::MIN };
            let v = piecewise_integral(*x0, *h, values, f64::MIN, upper, |len, u, v| 0.5 * len * (u + v));
            (v, None)
        }
        PotentialKind::Box { lo, hi, height } => (height * overlap(*lo, *hi, f64::NEG_INFINITY, x), None),
        PotentialKind::Zero => (0.0, None),
    };
    Ok(WeightValue {
        x,
        weight: (-primitive).exp(),
        primitive,
        crosscheck,
    })
}

/// Bound on `|Si(x) − sgn(x) π/2|`, the oscillation of the sine integral
/// about its limits.
pub fn oscillation_envelope(x: f64) -> f64 {
    if x == 0.0 {
        FRAC_PI_2
    } else {
        (2.0 / x.abs()).min(FRAC_PI_2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScan {
    pub min: f64,
    pub max: f64,
    pub samples: Vec<WeightValue>,
}

/// Weights at `count` equispaced points of `[lo, hi]`.
pub fn weight_scan(q: &PotentialFunction, lo: f64, hi: f64, count: usize) -> Result<WeightScan> {
    if !(lo < hi) || count < 2 {
        return Err(invalid("scan", "need lo < hi and at least two points"));
    }
    let samples = (0..count)
        .map(|i| similarity_weight(q, lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    let min = samples.iter().map(|s| s.weight).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.weight).fold(0.0, f64::max);
    Ok(WeightScan { min, max, samples })
}

/// `∫_{−X}^{X} |q|`.
pub fn strong_growth_functional(q: &PotentialFunction, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid("X", "truncation radius must be positive"));
    }
    Ok(q.abs_integral(-radius, radius))
}

/// The growth functional at each radius and the fit of its values against `ln X`.
pub fn growth_slope(q: &PotentialFunction, radii: &[f64]) -> Result<(Vec<f64>, Option<LineFit>)> {
    let values = radii
        .iter()
        .map(|&r| strong_growth_functional(q, r))
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    Ok((values.clone(), fit_line(&logs, &values)))
}

/// Complex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    x0: f64,
    h: f64,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(x0: f64, h: f64, values: Vec<C64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && x0.is_finite()) {
            return Err(invalid("grid", "spacing must be positive and the origin finite"));
        }
        if values.is_empty() || values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid("grid", "values must be finite and nonempty"));
        }
        Ok(Self { x0, h, values })
    }

    pub fn sample(x0: f64, h: f64, count: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = (0..count).map(|i| f(x0 + h * i as f64)).collect();
        Self::new(x0, h, values)
    }

    /// Smooth bump of the given half-width on the default grid.
    pub fn default_bump(centre: f64, half_width: f64) -> Result<Self> {
        let h = DEFAULT_GRID_SPACING;
        let count = (2.0 * DEFAULT_GRID_HALF_WIDTH / h) as usize + 1;
        Self::sample(-DEFAULT_GRID_HALF_WIDTH, h, count, |x| {
            C64::new(crate::hardy::smooth_bump((x - centre) / half_width), 0.0)
        })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x0 + self.h * i as f64
    }

    fn trapezoid_weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.values.len() {
            0.5 * self.h
        } else {
            self.h
        }
    }

    /// `‖g‖²` by the composite trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        (0..self.values.len())
            .map(|i| self.trapezoid_weight(i) * self.values[i].norm_sqr())
            .sum()
    }

    /// Smallest interval containing the nonzero samples.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| *v != C64::new(0.0, 0.0))?;
        let last = self.values.iter().rposition(|v| *v != C64::new(0.0, 0.0))?;
        Some((self.node(first), self.node(last)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalPair {
    /// `∫_{−T}^{T} ∫ |q(x)| |g(x − t)|² dx dt`.
    pub lhs: f64,
    /// `‖g‖² ∫_{−T}^{T} |q|`.
    pub rhs: f64,
    pub norm_sqr: f64,
}

impl ParsevalPair {
    pub fn relative_gap(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

/// Both sides of the translation-group identity
/// `∫ ‖|q|^{1/2} g(· − t)‖² dt = ‖g‖² ∫ |q|` on the truncated box.
pub fn parseval_crosscheck(q: &PotentialFunction, g: &GridFunction, t_max: f64, radius: f64) -> Result<ParsevalPair> {
    if !(t_max > 0.0 && radius > 0.0) {
        return Err(invalid("parseval", "T and X must be positive"));
    }
    let Some((a, b)) = g.support() else {
        return Ok(ParsevalPair {
            lhs: 0.0,
            rhs: 0.0,
            norm_sqr: 0.0,
        });
    };
    if a - t_max < -radius || b + t_max > radius {
        return Err(Error::SupportViolation(format!(
            "supp g ± T = [{:.3}, {:.3}] leaves [−{radius}, {radius}]",
            a - t_max,
            b + t_max
        )));
    }
    // Outer rule over the g-grid, inner integral in t of |q(s + t)|.
    let lhs: f64 = (0..g.values.len())
        .filter(|&i| g.values[i].norm_sqr() > 0.0)
        .map(|i| {
            let s = g.node(i);
            g.trapezoid_weight(i) * g.values[i].norm_sqr() * q.abs_integral(s - t_max, s + t_max)
        })
        .sum();
    let norm_sqr = g.norm_sqr();
    Ok(ParsevalPair {
        lhs,
        rhs: norm_sqr * q.abs_integral(-t_max, t_max),
        norm_sqr,
    })
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 1.0 && delta < 2.0) {
        return Err(invalid("delta", "must lie in (1, 2)"));
    }
    Ok(())
}

/// Cells `n = 0, −1, 1, −2, 2, …` with `|n| ≤ N`.
fn cells(n_max: u64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=n_max as i64).flat_map(|k| [-k, k]))
}

/// `Σ_{|n| ≤ N} (∫_n^{n+1} |f|²)^{δ/2}` with a tail bound.
pub fn birman_solomyak_certificate(f: &PotentialFunction, delta: f64, n_max: u64) -> Result<SeriesCertificate> {
    check_delta(delta)?;
    let terms: Vec<f64> = cells(n_max)
        .map(|n| f.square_integral(n as f64, n as f64 + 1.0).max(0.0).powf(delta / 2.0))
        .collect();
    let count = terms.len() as u64;
    let rule = match (f.kind(), f.support()) {
        (PotentialKind::Zero, _) => TailRule::ZeroBeyond { beyond: 0 },
        (PotentialKind::SincDefault, _) => {
            // q² ≤ x^{−2}; each cell past N is at most (|n| − 1)^{−δ}.
            if n_max < 2 {
                TailRule::Empirical
            } else {
                TailRule::Certified {
                    bound: 2.0 * ((n_max - 1) as f64).powf(1.0 - delta) / (delta - 1.0),
                }
            }
        }
        (_, Some((lo, hi))) if lo >= -(n_max as f64) && hi <= n_max as f64 + 1.0 => TailRule::ZeroBeyond { beyond: count },
        _ => TailRule::Empirical,
    };
    Ok(SeriesCertificate::from_terms(terms, rule))
}

/// The same series for the second kernel factor `g(y) = (y − z)^{−1}`,
/// with the cell integrals in closed form.
pub fn resolvent_kernel_certificate(z: C64, delta: f64, n_max: u64) -> Result<SeriesCertificate> {
    check_delta(delta)?;
    let (a, b) = (z.re, z.im);
    if b == 0.0 {
        return Err(invalid("z", "must lie off the real axis"));
    }
    let cell = |n: i64| {
        let (s, t) = (n as f64 - a, n as f64 + 1.0 - a);
        ((t / b).atan() - (s / b).atan()) / b.abs()
    };
    let terms: Vec<f64> = cells(n_max).map(|n| cell(n).max(0.0).powf(delta / 2.0)).collect();
    let reach = n_max as f64 - 1.0 - a.abs();
    let rule = if reach > 0.0 {
        TailRule::Certified {
            bound: 2.0 * reach.powf(1.0 - delta) / (delta - 1.0),
        }
    } else {
        TailRule::Empirical
    };
    Ok(SeriesCertificate::from_terms(terms, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Verdict;

    #[test]
    fn half_line_integral_is_pi_over_two() {
        let (v, e) = sinc_half_line_integral();
        assert!((v - FRAC_PI_2).abs() < 1e-12, "{v}");
        assert!(e < 1e-10);
    }

    #[test]
    fn weight_limits_and_crosscheck() {
        let q = PotentialFunction::sinc();
        assert_eq!(similarity_weight(&q, f64::NEG_INFINITY).unwrap().weight, 1.0);
        let w = similarity_weight(&q, f64::INFINITY).unwrap();
        assert!((w.weight - (-PI).exp()).abs() < 1e-15);
        for x in [-700.0, -3.0, 0.0, 0.5, 10.0, 999.0] {
            let w = similarity_weight(&q, x).unwrap();
            assert!(w.crosscheck.unwrap() < 1e-11, "x={x}: {:?}", w.crosscheck);
        }
    }

    #[test]
    fn weight_scan_is_bounded() {
        let s = weight_scan(&PotentialFunction::sinc(), -1e3, 1e3, 2001).unwrap();
        assert!(s.min >= 1e-2 && s.max <= 1e2);
        for w in &s.samples {
            let env = oscillation_envelope(w.x);
            let limit = if w.x > 0.0 { PI } else { 0.0 };
            assert!((w.primitive - limit).abs() <= env + 1e-12, "x={}", w.x);
        }
    }

    #[test]
    fn growth_functional_slope() {
        let q = PotentialFunction::sinc();
        assert_eq!(strong_growth_functional(&PotentialFunction::zero(), 10.0).unwrap(), 0.0);
        let d = strong_growth_functional(&q, 1e4).unwrap() - strong_growth_functional(&q, 1e3).unwrap();
        assert!((d - 4.0 / PI * 10f64.ln()).abs() < 1e-3, "{d}");
        let (_, fit) = growth_slope(&q, &[1e2, 1e3, 1e4]).unwrap();
        assert!((fit.unwrap().slope / (4.0 / PI) - 1.0).abs() < 0.05);
    }

    #[test]
    fn parseval_box_and_sinc() {
        let g = GridFunction::default_bump(0.0, 0.5).unwrap();
        let z = parseval_crosscheck(&PotentialFunction::zero(), &g, 10.0, 256.0).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        let boxq = PotentialFunction::boxcar(0.0, 1.0, 1.0).unwrap();
        let p = parseval_crosscheck(&boxq, &g, 10.0, 256.0).unwrap();
        assert!((p.lhs - p.rhs).abs() <= 1e-6 && (p.rhs - p.norm_sqr).abs() < 1e-12);
        let s = parseval_crosscheck(&PotentialFunction::sinc(), &g, 200.0, 256.0).unwrap();
        assert!(s.relative_gap() < 0.01, "{s:?}");
        assert!(matches!(
            parseval_crosscheck(&boxq, &g, 300.0, 256.0),
            Err(Error::SupportViolation(_))
        ));
    }

    #[test]
    fn birman_solomyak_examples() {
        let zero = birman_solomyak_certificate(&PotentialFunction::zero(), 1.5, 100).unwrap();
        assert_eq!(zero.verdict, Verdict::Converged { bound: 0.0 });
        let c = birman_solomyak_certificate(&PotentialFunction::sinc(), 1.5, 2000).unwrap();
        assert!(c.is_converged());
        let slow = birman_solomyak_certificate(&PotentialFunction::sinc(), 1.01, 2000).unwrap();
        assert!(slow.is_converged() && slow.bound().unwrap() > 20.0 * c.bound().unwrap(), "{:?} {:?}", slow.bound(), c.bound());
        // Single cells oscillate; the mean of 2n²·cell is 1.
        let q = PotentialFunction::sinc();
        let mean: f64 = (400..800)
            .map(|n| {
                let n = n as f64;
                2.0 * n * n * q.square_integral(n, n + 1.0)
            })
            .sum::<f64>()
            / 400.0;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
        let k = resolvent_kernel_certificate(C64::new(0.3, 1.0), 1.5, 500).unwrap();
        assert!(k.is_converged());
    }

    #[test]
    fn user_potential_from_csv() {
        let q = PotentialFunction::from_csv_str("x,q\n-1,0\n0,1\n1,0\n").unwrap();
        assert_eq!(q.eval(0.5), 0.5);
        assert!((q.abs_integral(-5.0, 5.0) - 1.0).abs() < 1e-15);
        let w = similarity_weight(&q, 5.0).unwrap();
        assert!((w.primitive - 1.0).abs() < 1e-15);
        assert!(PotentialFunction::from_csv_str("0,1\n1,1\n3,1\n").is_err());
        let flat = PotentialFunction::from_csv_str("0,1\n1,1\n2,1\n").unwrap();
        assert!(similarity_weight(&flat, 1.0).is_err());
        let sign = PotentialFunction::from_csv_str("0,-1\n1,1\n").unwrap();
        assert!((sign.abs_integral(0.0, 1.0) - 0.5).abs() < 1e-15);
    }
}

//! Hardy-space norms of resolvent matrix elements, defect-weighted series,
//! and the Cauchy transform on the real line.
//!
//! On the disk, `‖f‖_{H²}² = Σ |c_s|²` for `f = Σ c_s z^s`. Every matrix
//! element of a shift-type resolvent against finitely supported vectors has
//! finitely many nonzero Taylor coefficients, so the exact path applies
//! whenever the generating formula is known; circle quadrature covers the
//! rest and all `p ≠ 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operators::{BlockShiftOperator, BlockVector, FinSuppVector, WeightedShift};
use crate::quadrature::extrapolate_to_zero;
use crate::sequences::{SideEnvelope, WeightSequence};
use crate::series::{SeriesCertificate, TailRule, Verdict};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generation {
    ClosedForm,
    Recurrence,
    Finite,
}

/// Bound on `Σ_{s ≥ len} |c_s|²` for the coefficients not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SquareTail {
    Zero,
    Bound { value: f64 },
    Unknown,
}

/// Taylor coefficients `c_s`, `s ≥ 0`, of a function analytic in the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coefficients: Vec<C64>,
    generation: Generation,
    tail: SquareTail,
}

impl CoefficientSeries {
    pub fn new(coefficients: Vec<C64>, generation: Generation, tail: SquareTail) -> Self {
        Self {
            coefficients,
            generation,
            tail,
        }
    }

    /// A polynomial.
    pub fn finite(coefficients: Vec<C64>) -> Self {
        Self::new(coefficients, Generation::Finite, SquareTail::Zero)
    }

    /// `c_s = q^s`, `|q| < 1`, stored up to `len` with the exact tail.
    pub fn geometric(q: C64, len: usize) -> Result<Self> {
        let a = q.norm_sqr();
        if a >= 1.0 {
            return Err(invalid("q", "geometric ratio must lie in the open unit disk"));
        }
        let mut c = Vec::with_capacity(len);
        let mut x = C64::new(1.0, 0.0);
        for _ in 0..len {
            c.push(x);
            x *= q;
        }
        let tail = a.powi(len as i32) / (1.0 - a);
        Ok(Self::new(c, Generation::ClosedForm, SquareTail::Bound { value: tail }))
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn generation(&self) -> Generation {
        self.generation
    }

    pub fn tail(&self) -> SquareTail {
        self.tail
    }

    /// Horner evaluation of the stored prefix.
    pub fn evaluate(&self, z: C64) -> C64 {
        self.coefficients.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardyMethod {
    CoefficientExact,
    CircleQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyNormResult {
    pub p: f64,
    pub estimate: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub method: HardyMethod,
    /// Set for `p < 1`, where the integral mean is only a quasi-norm.
    pub not_a_norm: bool,
}

/// `(Σ_{s ≤ S} |c_s|²)^{1/2}` with the tail bound as bracket.
pub fn h2_norm_exact(f: &CoefficientSeries) -> Result<HardyNormResult> {
    let tail = match f.tail {
        SquareTail::Zero => 0.0,
        SquareTail::Bound { value } => value,
        SquareTail::Unknown => return Err(Error::NoTailBound),
    };
    let sum = kahan(f.coefficients.iter().map(|c| c.norm_sqr()));
    let estimate = sum.sqrt();
    Ok(HardyNormResult {
        p: 2.0,
        estimate,
        lower_bound: estimate,
        upper_bound: (sum + tail).sqrt(),
        method: HardyMethod::CoefficientExact,
        not_a_norm: false,
    })
}

fn kahan(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// Radii `r_m = 1 − 2^{−m}`, `m = 1..=depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialSchedule {
    pub depth: u32,
}

impl Default for RadialSchedule {
    fn default() -> Self {
        Self { depth: 20 }
    }
}

impl RadialSchedule {
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 || depth > 52 {
            return Err(invalid("depth", "radial depth must be in 1..=52"));
        }
        Ok(Self { depth })
    }

    pub fn radii(&self) -> Vec<f64> {
        (1..=self.depth).map(|m| 1.0 - 0.5f64.powi(m as i32)).collect()
    }
}

/// Initial node count and convergence target for the angular trapezoid rule.
pub const MIN_NODES: usize = 256;
pub const MAX_NODES: usize = 1 << 22;
pub const NODE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMean {
    pub r: f64,
    /// `M_p(r) = ((2π)^{−1} ∫ |f(re^{iθ})|^p dθ)^{1/p}`
    pub mean: f64,
    pub error: f64,
    pub nodes: usize,
}

/// Integral mean `M_p(r)` by the trapezoid rule with node doubling.
pub fn integral_mean<F>(f: &F, p: f64, r: f64) -> Result<RadialMean>
where
    F: Fn(C64) -> C64 + ?Sized,
{
    if !(p > 0.0) {
        return Err(invalid("p", "must be positive"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(invalid("r", "radius must lie in [0, 1)"));
    }
    let sample = |k: usize, n: usize| -> f64 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        f(C64::from_polar(r, theta)).norm().powf(p)
    };
    let mut n = MIN_NODES;
    let mut sum: f64 = (0..n).map(|k| sample(k, n)).sum();
    let mut avg = sum / n as f64;
    loop {
        let odd: f64 = (0..n).map(|k| sample(2 * k + 1, 2 * n)).sum();
        sum += odd;
        n *= 2;
        let next = sum / n as f64;
        let change = (next - avg).abs();
        avg = next;
        if change <= NODE_REL_TOL * next.abs() || next == 0.0 {
            let mean = avg.powf(1.0 / p);
            let error = if avg > 0.0 { mean * change / (p * avg) } else { 0.0 };
            return Ok(RadialMean {
                r,
                mean,
                error,
                nodes: n,
            });
        }
        if n >= MAX_NODES {
            return Err(Error::NonConvergent {
                what: "angular quadrature",
                detail: format!("r = {r}, p = {p}, relative change {:.3e} at {n} nodes", change / next.abs()),
            });
        }
    }
}

/// Integral means over the schedule, computed in parallel, in radius order.
pub fn integral_means<F>(f: &F, p: f64, schedule: &RadialSchedule) -> Result<Vec<RadialMean>>
where
    F: Fn(C64) -> C64 + Sync + ?Sized,
{
    schedule
        .radii()
        .par_iter()
        .map(|&r| integral_mean(f, p, r))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureNorm {
    pub result: HardyNormResult,
    pub means: Vec<RadialMean>,
}

/// `sup_r M_p(r)` over the schedule.
pub fn hp_norm_quadrature<F>(f: &F, p: f64, schedule: &RadialSchedule) -> Result<QuadratureNorm>
where
    F: Fn(C64) -> C64 + Sync + ?Sized,
{
    if !(p > 0.0 && p <= 2.0) {
        return Err(invalid("p", "exponent must lie in (0, 2]"));
    }
    let means = integral_means(f, p, schedule)?;
    let best = means
        .iter()
        .copied()
        .max_by(|a, b| a.mean.total_cmp(&b.mean))
        .expect("schedule is nonempty");
    Ok(QuadratureNorm {
        result: HardyNormResult {
            p,
            estimate: best.mean,
            lower_bound: (best.mean - best.error).max(0.0),
            upper_bound: best.mean + best.error,
            method: HardyMethod::CircleQuadrature,
            not_a_norm: p < 1.0,
        },
        means,
    })
}

/// Whether the means are nondecreasing in `r`, allowing each step the
/// combined quadrature error.
pub fn means_monotone_in_r(means: &[RadialMean]) -> bool {
    means
        .windows(2)
        .all(|w| w[1].mean + w[1].error + w[0].error >= w[0].mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionCheck {
    pub holds: bool,
    /// `min_r (M_{p1}(r) − M_{p2}(r))`
    pub min_margin: f64,
    pub margins: Vec<(f64, f64)>,
}

/// `M_{p2}(r) ≤ M_{p1}(r)` at every scheduled radius, for `1 ≤ p2 ≤ p1 ≤ 2`.
pub fn holder_inclusion_check<F>(
    f: &F,
    p1: f64,
    p2: f64,
    schedule: &RadialSchedule,
) -> Result<InclusionCheck>
where
    F: Fn(C64) -> C64 + Sync + ?Sized,
{
    if !(1.0 <= p2 && p2 <= p1 && p1 <= 2.0) {
        return Err(invalid("p", "need 1 ≤ p2 ≤ p1 ≤ 2"));
    }
    let m1 = integral_means(f, p1, schedule)?;
    let m2 = integral_means(f, p2, schedule)?;
    let mut holds = true;
    let mut min_margin = f64::INFINITY;
    let mut margins = Vec::with_capacity(m1.len());
    for (a, b) in m1.iter().zip(&m2) {
        let margin = a.mean - b.mean;
        if margin < -(a.error + b.error + 1e-14 * a.mean) {
            holds = false;
        }
        min_margin = min_margin.min(margin);
        margins.push((a.r, margin));
    }
    Ok(InclusionCheck {
        holds,
        min_margin,
        margins,
    })
}

// ---------------------------------------------------------------------------
// Matrix-element coefficient series

/// Coefficients of `⟨(T − z)^{−1} u, e_j⟩`:
/// `c_s = u_{j−1−s} / Π_{i=j−1−s}^{j−1} ρ_i`.
pub fn shift_inside_series(t: &WeightedShift, u: &FinSuppVector, j: i64) -> CoefficientSeries {
    let rho = t.weights();
    let Some((lo, _)) = u.support() else {
        return CoefficientSeries::finite(Vec::new());
    };
    let mut out = Vec::new();
    let mut log_prod = 0.0f64;
    let mut k = j - 1;
    while k >= lo {
        log_prod += rho.rho(k).ln();
        out.push(u.get(k) * (-log_prod).exp());
        k -= 1;
    }
    CoefficientSeries::new(out, Generation::ClosedForm, SquareTail::Zero)
}

/// Coefficients of `⟨(I − zT)^{−1} u, e_j⟩`: `c_s = u_{j+s} Π_{i=j}^{j+s−1} ρ_i`.
pub fn shift_companion_series(t: &WeightedShift, u: &FinSuppVector, j: i64) -> CoefficientSeries {
    let rho = t.weights();
    let Some((_, hi)) = u.support() else {
        return CoefficientSeries::finite(Vec::new());
    };
    let mut out = Vec::new();
    let mut log_prod = 0.0f64;
    let mut k = j;
    while k <= hi {
        out.push(u.get(k) * log_prod.exp());
        log_prod += rho.rho(k).ln();
        k += 1;
    }
    CoefficientSeries::new(out, Generation::ClosedForm, SquareTail::Zero)
}

/// Which block of the test vector `e_j` sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockSlot {
    Top,
    Bottom,
}

/// Coefficients of `⟨(B − z)^{−1} u, v⟩` with `v = (e_j, 0)` or `(0, e_j)`:
/// top `c_s = u_{1, j+s+1} − u_{2, j+s+2} Σ_{m=1}^{s+1} ρ_{|m+j|}`,
/// bottom `c_s = u_{2, j+s+1}`.
pub fn block_inside_series(b: &BlockShiftOperator, u: &BlockVector, j: i64, slot: BlockSlot) -> CoefficientSeries {
    let rho = b.coupling();
    let hi = [u.top.support(), u.bottom.support()]
        .iter()
        .flatten()
        .map(|&(_, h)| h)
        .max();
    let Some(hi) = hi else {
        return CoefficientSeries::finite(Vec::new());
    };
    let len = (hi - j).max(0) as usize;
    let mut out = Vec::with_capacity(len);
    let mut partial = 0.0f64;
    for s in 0..len as i64 {
        let c = match slot {
            BlockSlot::Top => {
                partial += rho.rho((s + 1 + j).abs());
                u.top.get(j + s + 1) - u.bottom.get(j + s + 2) * partial
            }
            BlockSlot::Bottom => u.bottom.get(j + s + 1),
        };
        out.push(c);
    }
    CoefficientSeries::new(out, Generation::ClosedForm, SquareTail::Zero)
}

/// Coefficients of `⟨(I − zB)^{−1} u, v⟩`:
/// top `c_s = u_{1, j−s} + u_{2, j−s+1} Σ_{i=0}^{s−1} ρ_{|j−i|}`,
/// bottom `c_s = u_{2, j−s}`.
pub fn block_companion_series(b: &BlockShiftOperator, u: &BlockVector, j: i64, slot: BlockSlot) -> CoefficientSeries {
    let rho = b.coupling();
    let lo = [u.top.support(), u.bottom.support()]
        .iter()
        .flatten()
        .map(|&(l, _)| l)
        .min();
    let Some(lo) = lo else {
        return CoefficientSeries::finite(Vec::new());
    };
    let len = (j - lo + 2).max(0) as usize;
    let mut out = Vec::with_capacity(len);
    let mut partial = 0.0f64;
    for s in 0..len as i64 {
        let c = match slot {
            BlockSlot::Top => {
                if s > 0 {
                    partial += rho.rho((j - s + 1).abs());
                }
                u.top.get(j - s) + u.bottom.get(j - s + 1) * partial
            }
            BlockSlot::Bottom => u.bottom.get(j - s),
        };
        out.push(c);
    }
    CoefficientSeries::new(out, Generation::ClosedForm, SquareTail::Zero)
}

// ---------------------------------------------------------------------------
// Defect-weighted series

/// Tail rule for `Σ_{n>N} |1 − ρ_n²| · P_n` given `P_n ≤ k²` and the
/// deviation envelope on the relevant side; falls back to a trailing fit.
fn defect_tail_rule(env: SideEnvelope, k: Option<f64>, last_index: i64, count: u64, first_index: i64, up: bool) -> TailRule {
    let Some(k) = k else {
        return TailRule::Empirical;
    };
    match env {
        SideEnvelope::Zero { from } => {
            let past = if up { last_index + 1 >= from } else { -last_index + 1 >= from };
            if past {
                TailRule::ZeroBeyond { beyond: count }
            } else {
                TailRule::Empirical
            }
        }
        SideEnvelope::Power {
            scale,
            exponent,
            shift,
            from,
        } => {
            let m_next = if up { last_index + 1 } else { -(last_index - 1) };
            let Some(d) = env.at(m_next) else {
                return TailRule::Empirical;
            };
            if m_next < from || exponent <= 1.0 {
                return TailRule::Empirical;
            }
            // |1 − ρ²| ≤ d (2 + d), d ≤ d(m_next) past the summed range.
            let c = k * k * scale * (2.0 + d);
            // Map the envelope variable m to the term ordinal i: m = i + offset.
            let offset = if up { first_index - 1 } else { -(first_index + 1) };
            TailRule::Power {
                scale: c,
                exponent,
                shift: shift - offset as f64,
            }
        }
    }
}

/// Partial sums of `Σ_{k<n≤N} |1 − ρ_n²| / Π_{i=k}^{n−1} ρ_i²`.
pub fn strong_series_certificate(rho: &WeightSequence, k: i64, n_max: i64) -> Result<SeriesCertificate> {
    if n_max < 1 {
        return Err(invalid("N", "must be at least 1"));
    }
    if n_max <= k {
        return Ok(SeriesCertificate::zero());
    }
    let count = (n_max - k) as u64;
    let mut log_prod = 0.0f64;
    let terms = (k + 1..=n_max).map(|n| {
        log_prod += 2.0 * rho.rho(n - 1).ln();
        let r = rho.rho(n);
        (1.0 - r * r).abs() * (-log_prod).exp()
    });
    let inv = rho.inverse_product_envelope_up(k).filter(|e| e.sigma <= 1.0).map(|e| e.k);
    let rule = defect_tail_rule(rho.deviation_envelope(true), inv, n_max, count, k + 1, true);
    Ok(SeriesCertificate::from_terms(terms, rule))
}

/// Partial sums of the companion-side series
/// `Σ_{−N≤n≤k} |1 − ρ_n²| · Π_{i=n}^{k−1} ρ_i²`.
pub fn adjoint_strong_series_certificate(rho: &WeightSequence, k: i64, n_max: i64) -> Result<SeriesCertificate> {
    if n_max < 1 {
        return Err(invalid("N", "must be at least 1"));
    }
    if -n_max > k {
        return Ok(SeriesCertificate::zero());
    }
    let count = (k + n_max + 1) as u64;
    let mut log_prod = 0.0f64;
    let terms = (-n_max..=k).rev().map(|n| {
        if n < k {
            log_prod += 2.0 * rho.rho(n).ln();
        }
        let r = rho.rho(n);
        (1.0 - r * r).abs() * log_prod.exp()
    });
    let down = rho.product_envelope_down(k).filter(|e| e.sigma <= 1.0).map(|e| e.k);
    let rule = defect_tail_rule(rho.deviation_envelope(false), down, -n_max, count, k, false);
    Ok(SeriesCertificate::from_terms(terms, rule))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSumCertificate {
    pub total: SeriesCertificate,
    /// Inner certificates for each `k` in the support of `f`.
    pub inner: Vec<(i64, SeriesCertificate)>,
}

impl WeightedSumCertificate {
    pub fn is_converged(&self) -> bool {
        self.total.is_converged()
    }
}

fn weighted_sum(
    f: &FinSuppVector,
    inner: impl Fn(i64) -> Result<SeriesCertificate>,
) -> Result<WeightedSumCertificate> {
    let mut parts = Vec::new();
    for (k, c) in f.iter() {
        if c != ZERO {
            parts.push((k, c.norm_sqr(), inner(k)?));
        }
    }
    if parts.is_empty() {
        return Ok(WeightedSumCertificate {
            total: SeriesCertificate::zero(),
            inner: Vec::new(),
        });
    }
    // Combine traces by ordinal; all inner series share the summation range end.
    let longest = parts.iter().max_by_key(|p| p.2.terms).unwrap();
    let mut total = longest.2.clone();
    total.partial_sum = parts.iter().map(|(_, w, c)| w * c.partial_sum).sum();
    total.tail_bound = parts
        .iter()
        .map(|(_, w, c)| c.tail_bound.map(|t| w * t))
        .sum::<Option<f64>>();
    for point in total.trace.iter_mut() {
        point.partial_sum = parts
            .iter()
            .map(|(_, w, c)| w * c.partial_sum_at(point.n).unwrap_or(0.0))
            .sum();
    }
    total.verdict = if parts.iter().all(|p| p.2.is_converged()) {
        Verdict::Converged {
            bound: parts.iter().map(|(_, w, c)| w * c.bound().unwrap_or(0.0)).sum(),
        }
    } else {
        parts
            .iter()
            .find(|p| !p.2.is_converged())
            .map(|p| p.2.verdict)
            .unwrap()
    };
    Ok(WeightedSumCertificate {
        total,
        inner: parts.into_iter().map(|(k, _, c)| (k, c)).collect(),
    })
}

/// `Σ_k |f_k|² Σ_{n>k} |1 − ρ_n²| / Π_k^{n−1} ρ²` truncated at `n ≤ N`.
pub fn strong_h2_weighted_sum(rho: &WeightSequence, f: &FinSuppVector, n_max: i64) -> Result<WeightedSumCertificate> {
    weighted_sum(f, |k| strong_series_certificate(rho, k, n_max))
}

/// Companion-side analog: `Σ_k |f_k|² Σ_{n≤k} |1 − ρ_n²| Π_n^{k−1} ρ²`.
pub fn adjoint_strong_h2_weighted_sum(
    rho: &WeightSequence,
    f: &FinSuppVector,
    n_max: i64,
) -> Result<WeightedSumCertificate> {
    weighted_sum(f, |k| adjoint_strong_series_certificate(rho, k, n_max))
}

/// `Σ_{s=0}^{N} |u_{2,s+j+2}|² |Σ_{m=j+1}^{j+s+1} ρ_{|m|}|²`.
pub fn duality_h2_norm(rho: &WeightSequence, u2: &FinSuppVector, j: i64, n_max: u64) -> Result<SeriesCertificate> {
    let Some((lo, hi)) = u2.support() else {
        return Ok(SeriesCertificate::zero());
    };
    let last_needed = (hi - j - 2).max(-1);
    let first_needed = (lo - j - 2).max(0);
    let mut partial = 0.0f64;
    let mut terms = Vec::new();
    let mut tail = 0.0f64;
    for s in 0..=last_needed.max(0) {
        partial += rho.rho((j + s + 1).abs());
        if s < first_needed && (s as u64) <= n_max {
            terms.push(0.0);
            continue;
        }
        let t = u2.get(s + j + 2).norm_sqr() * partial * partial;
        if (s as u64) <= n_max {
            terms.push(t);
        } else {
            tail += t;
        }
    }
    if last_needed < 0 {
        return Ok(SeriesCertificate::zero());
    }
    let rule = if tail == 0.0 {
        TailRule::ZeroBeyond { beyond: terms.len() as u64 }
    } else {
        TailRule::Certified { bound: tail }
    };
    Ok(SeriesCertificate::from_terms(terms, rule))
}

// ---------------------------------------------------------------------------
// Real line: Cauchy transform and boundary jumps

/// Samples `values[i]` of a density at `start + i · step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl RealGrid {
    /// Sample `f` on `[a, b]` with `intervals` (even) subintervals.
    pub fn sample(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if intervals < 2 || !intervals.is_multiple_of(2) || !(b > a) {
            return Err(invalid("grid", "need a < b and an even number of intervals"));
        }
        let step = (b - a) / intervals as f64;
        let values = (0..=intervals).map(|i| f(a + i as f64 * step)).collect();
        Ok(Self { start: a, step, values })
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn trapezoid(&self, stride: usize, g: impl Fn(f64) -> C64) -> C64 {
        let n = self.values.len() - 1;
        let h = self.step * stride as f64;
        let mut acc = ZERO;
        let mut i = 0;
        while i <= n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let v = self.values[i];
            if v != 0.0 {
                acc += g(self.start + i as f64 * self.step) * (w * v);
            }
            i += stride;
        }
        acc * h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl CauchyValue {
    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// `∫ f(t)/(t − z) dt` by the trapezoid rule at `h` and `2h`, Richardson-combined.
pub fn cauchy_transform(grid: &RealGrid, z: C64) -> Result<CauchyValue> {
    let n = grid.values.len();
    if n < 3 || !(n - 1).is_multiple_of(2) {
        return Err(invalid("grid", "need an even number of intervals"));
    }
    let dx = if z.re < grid.start {
        grid.start - z.re
    } else if z.re > grid.end() {
        z.re - grid.end()
    } else {
        0.0
    };
    let distance = dx.hypot(z.im);
    if distance < 4.0 * grid.step {
        return Err(Error::TooCloseToSupport {
            distance,
            spacing: grid.step,
        });
    }
    let g = |t: f64| C64::new(1.0, 0.0) / (C64::new(t, 0.0) - z);
    let fine = grid.trapezoid(1, g);
    let coarse = grid.trapezoid(2, g);
    let value = (fine * 4.0 - coarse) / 3.0;
    let error = (fine - coarse).norm() / 3.0;
    Ok(CauchyValue {
        re: value.re,
        im: value.im,
        error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpEstimate {
    pub x: f64,
    /// Extrapolated `(F(x+i0) − F(x−i0)) / (2πi)`.
    pub value: f64,
    pub error: f64,
    /// `(ε, jump(ε))` samples.
    pub samples: Vec<(f64, f64)>,
}

/// Boundary jump of the Cauchy transform at `x`, extrapolated in `ε → 0`.
pub fn plemelj_jump(grid: &RealGrid, x: f64, eps: &[f64]) -> Result<JumpEstimate> {
    if eps.len() < 2 || eps.windows(2).any(|w| !(w[1] < w[0])) || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(invalid("eps", "schedule must be positive and strictly decreasing"));
    }
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut samples = Vec::with_capacity(eps.len());
    let mut quad_err = 0.0f64;
    for &e in eps {
        let up = cauchy_transform(grid, C64::new(x, e))?;
        let down = cauchy_transform(grid, C64::new(x, -e))?;
        let jump = (up.value() - down.value()) / two_pi_i;
        quad_err = quad_err.max((up.error + down.error) / (2.0 * std::f64::consts::PI));
        samples.push((e, jump.re));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (value, err) = extrapolate_to_zero(&xs, &ys)?;
    Ok(JumpEstimate {
        x,
        value,
        error: err + quad_err,
        samples,
    })
}

/// `exp(−1/(1 − t²))` on `(−1, 1)`, zero elsewhere.
pub fn smooth_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{theorem1_weights, WeightFamily};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn exact_norm_examples() {
        let delta = CoefficientSeries::finite(vec![c(1.0)]);
        assert_eq!(h2_norm_exact(&delta).unwrap().estimate, 1.0);
        let g = CoefficientSeries::geometric(c(0.5), 60).unwrap();
        let r = h2_norm_exact(&g).unwrap();
        assert!((r.estimate - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(r.lower_bound <= r.estimate && r.estimate <= r.upper_bound);
        let unknown = CoefficientSeries::new(vec![c(1.0)], Generation::Recurrence, SquareTail::Unknown);
        assert!(matches!(h2_norm_exact(&unknown), Err(Error::NoTailBound)));
    }

    #[test]
    fn unit_shift_matrix_element_norms() {
        let t = WeightedShift::unweighted();
        let u = FinSuppVector::basis(0);
        for j in -5..=5 {
            let s = shift_inside_series(&t, &u, j);
            let n = h2_norm_exact(&s).unwrap().estimate;
            let want = if j >= 1 { 1.0 } else { 0.0 };
            assert_eq!(n, want, "j={j}");
            if j >= 1 {
                assert_eq!(s.coefficients()[(j - 1) as usize], c(1.0));
            }
        }
    }

    #[test]
    fn inside_series_matches_resolvent_coordinates() {
        use crate::resolvent::{shift_resolvent, SpectralPoint};
        let t = WeightedShift::new(theorem1_weights());
        let u = FinSuppVector::from_real(-2, &[1.0, 0.5, -1.0, 2.0, 0.0, 1.5]);
        let z = C64::new(0.3, -0.4);
        let v = shift_resolvent(&t, &SpectralPoint::new(z).unwrap(), &u, 1e-15).unwrap();
        for j in -4..10 {
            let s = shift_inside_series(&t, &u, j);
            assert!((s.evaluate(z) - v.vector.get(j)).norm() < 1e-13, "j={j}");
        }
        // companion: (I − zT)^{−1} = −z^{−1}(T − z^{−1})^{−1}
        let w = SpectralPoint::new(z.inv()).unwrap();
        let v = shift_resolvent(&t, &w, &u, 1e-15).unwrap();
        for j in -6..6 {
            let s = shift_companion_series(&t, &u, j);
            let want = -v.vector.get(j) / z;
            assert!((s.evaluate(z) - want).norm() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn block_series_match_resolvent() {
        use crate::resolvent::{block_resolvent, SpectralPoint};
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let u = BlockVector::new(FinSuppVector::from_real(-1, &[1.0, 2.0]), FinSuppVector::from_real(0, &[1.0, -0.5, 0.25]));
        let z = C64::new(-0.2, 0.35);
        let x = block_resolvent(&b, &SpectralPoint::new(z).unwrap(), &u, 1e-15).unwrap().vector();
        for j in -8..6 {
            let top = block_inside_series(&b, &u, j, BlockSlot::Top).evaluate(z);
            let bottom = block_inside_series(&b, &u, j, BlockSlot::Bottom).evaluate(z);
            assert!((top - x.top.get(j)).norm() < 1e-12, "top j={j}");
            assert!((bottom - x.bottom.get(j)).norm() < 1e-12, "bottom j={j}");
        }
        let w = SpectralPoint::new(z.inv()).unwrap();
        let x = block_resolvent(&b, &w, &u, 1e-15).unwrap().vector();
        for j in -6..8 {
            let top = block_companion_series(&b, &u, j, BlockSlot::Top).evaluate(z);
            let bottom = block_companion_series(&b, &u, j, BlockSlot::Bottom).evaluate(z);
            assert!((top + x.top.get(j) / z).norm() < 1e-12, "top j={j}");
            assert!((bottom + x.bottom.get(j) / z).norm() < 1e-12, "bottom j={j}");
        }
    }

    #[test]
    fn quadrature_examples() {
        let sched = RadialSchedule::default();
        let one = |_: C64| c(1.0);
        for p in [0.5, 1.0, 2.0] {
            let q = hp_norm_quadrature(&one, p, &sched).unwrap();
            assert!((q.result.estimate - 1.0).abs() < 1e-12);
            assert_eq!(q.result.not_a_norm, p < 1.0);
        }
        let zk = |z: C64| z.powi(3);
        let q = hp_norm_quadrature(&zk, 1.5, &sched).unwrap();
        assert!(q.result.estimate <= 1.0 + 1e-12);
        assert!(q.result.estimate > 1.0 - 1e-5);
        assert!(means_monotone_in_r(&q.means));
    }

    #[test]
    fn quadrature_matches_exact_for_geometric() {
        let deep = RadialSchedule::new(40).unwrap();
        let f = |z: C64| c(1.0) / (c(1.0) - z / 2.0);
        let q = hp_norm_quadrature(&f, 2.0, &deep).unwrap();
        let e = h2_norm_exact(&CoefficientSeries::geometric(c(0.5), 80).unwrap()).unwrap();
        assert!((q.result.estimate - e.estimate).abs() <= 1e-8);
    }

    #[test]
    fn inclusion_examples() {
        let sched = RadialSchedule::new(10).unwrap();
        let k = |_: C64| c(3.0);
        let r = holder_inclusion_check(&k, 2.0, 1.5, &sched).unwrap();
        assert!(r.holds && r.min_margin.abs() < 1e-12);
        let f = |z: C64| c(1.0) / (c(1.0) - z * 0.9);
        let r = holder_inclusion_check(&f, 2.0, 1.5, &sched).unwrap();
        let at = r.margins.iter().find(|m| (m.0 - 0.9990234375).abs() < 1e-12).unwrap();
        assert!(r.holds && at.1 > 0.0);
        let id = |z: C64| z;
        let r = holder_inclusion_check(&id, 2.0, 1.0, &sched).unwrap();
        assert!(r.holds && r.min_margin.abs() < 1e-12);
        assert!(holder_inclusion_check(&id, 1.0, 2.0, &sched).is_err());
    }

    #[test]
    fn strong_series_examples() {
        let unit = strong_series_certificate(&WeightSequence::unit(), 0, 1000).unwrap();
        assert_eq!(unit.verdict, Verdict::Converged { bound: 0.0 });

        let t1 = strong_series_certificate(&theorem1_weights(), 0, 20_000).unwrap();
        assert!(!t1.is_converged());

        let values: Vec<f64> = (1..=60).map(|n| 1.0 + 0.5f64.powi(n)).collect();
        let geo = WeightSequence::new(WeightFamily::UserTable { start: 1, values, fill: 1.0 }).unwrap();
        let g = strong_series_certificate(&geo, 0, 1000).unwrap();
        let bound = g.bound().expect("summable numerators");
        assert!(bound >= g.partial_sum && bound < 3.0);
    }

    #[test]
    fn theorem1_companion_series_vanishes() {
        let a = adjoint_strong_series_certificate(&theorem1_weights(), 0, 1000).unwrap();
        assert_eq!(a.bound(), Some(0.0));
    }

    #[test]
    fn weighted_sum_examples() {
        let t1 = theorem1_weights();
        let z = strong_h2_weighted_sum(&t1, &FinSuppVector::zeros(), 100).unwrap();
        assert!(z.is_converged());
        let single = strong_h2_weighted_sum(&t1, &FinSuppVector::basis(0), 5000).unwrap();
        let direct = strong_series_certificate(&t1, 0, 5000).unwrap();
        assert_eq!(single.total.partial_sum, direct.partial_sum);
        assert!(!single.is_converged());
        let unit = strong_h2_weighted_sum(&WeightSequence::unit(), &FinSuppVector::from_real(-3, &[1.0, 2.0]), 100).unwrap();
        assert_eq!(unit.total.bound(), Some(0.0));
    }

    #[test]
    fn duality_examples() {
        let h = WeightSequence::harmonic(1.0);
        let z = duality_h2_norm(&h, &FinSuppVector::zeros(), -5, 100).unwrap();
        assert_eq!(z.partial_sum, 0.0);
        let v = duality_h2_norm(&h, &FinSuppVector::basis(0), -12, 100).unwrap();
        let h12: f64 = (1..=12).map(|k| 1.0 / k as f64).sum();
        assert!((v.partial_sum - (h12 - 1.0).powi(2)).abs() < 1e-13);
        assert!(v.is_converged());
    }

    #[test]
    fn cauchy_examples() {
        let grid = RealGrid::sample(0.0, 1.0, 4000, |_| 1.0).unwrap();
        let z = C64::new(0.0, 1.0);
        let v = cauchy_transform(&grid, z).unwrap();
        let want = ((c(1.0) - z) / (-z)).ln();
        assert!((v.value() - want).norm() < 1e-10);
        let zero = RealGrid::sample(0.0, 1.0, 100, |_| 0.0).unwrap();
        assert_eq!(cauchy_transform(&zero, z).unwrap().value(), ZERO);
        assert!(cauchy_transform(&grid, C64::new(0.5, 1e-4)).is_err());
    }

    #[test]
    fn plemelj_recovers_bump() {
        let grid = RealGrid::sample(-1.0, 1.0, 2000, smooth_bump).unwrap();
        let eps = [0.2, 0.1, 0.05, 0.025];
        for x in [-0.5, -0.1, 0.0, 0.3, 0.6] {
            let j = plemelj_jump(&grid, x, &eps).unwrap();
            assert!((j.value - smooth_bump(x)).abs() <= 1e-4, "x={x}: {} vs {}", j.value, smooth_bump(x));
        }
    }
}

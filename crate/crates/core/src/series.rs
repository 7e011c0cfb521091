//! Partial-sum certificates for nonnegative series.
//!
//! A [`SeriesCertificate`] records the partial sums of a nonnegative series
//! at geometrically spaced checkpoints, together with either a tail bound
//! (convergence) or a fitted growth model (divergence evidence). Divergence
//! is never proven here: a [`Verdict::DivergenceEvidence`] only says that the
//! partial sums follow an unbounded growth law over the sampled range.

use serde::{Deserialize, Serialize};

/// Least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares on paired samples. Returns `None` for fewer than
/// two points or a degenerate abscissa.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Least squares for `y = c * x` (no intercept). The reported R² is the
/// centered coefficient of determination of that model.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx <= 0.0 {
        return None;
    }
    let c = xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Some(LineFit {
        slope: c,
        intercept: 0.0,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthModel {
    /// `S(n) ≈ slope · ln n + intercept`
    Logarithmic,
    /// `ln S(n) ≈ slope · ln n + intercept`
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// Partial sum plus certified (or fitted, see [`TailSource`]) tail.
    Converged { bound: f64 },
    /// Partial sums fit an unbounded growth model. Evidence, not proof.
    DivergenceEvidence { fit: GrowthFit },
}

impl Verdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }
}

/// Where a convergence bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailSource {
    /// Terms past the summed range are exactly zero.
    Exact,
    /// Integral-test or geometric bound from an analytic envelope.
    Certified,
    /// Bound extrapolated from a fit of the last terms.
    Fitted,
    /// No tail bound; the verdict is divergence evidence.
    Absent,
}

/// Tail model for the terms `t_n`, `n > N`, where `n` is the 1-based ordinal
/// of the term in summation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailRule {
    /// `t_n = 0` for `n > beyond`.
    ZeroBeyond { beyond: u64 },
    /// `t_n ≤ scale · (n − shift)^(−exponent)` for `n > N`. Summable iff
    /// `exponent > 1`; otherwise the certificate falls back to a growth fit.
    Power { scale: f64, exponent: f64, shift: f64 },
    /// `t_n ≤ scale · ratio^n` for `n > N`, `ratio < 1`.
    Geometric { scale: f64, ratio: f64 },
    /// Caller-certified bound on the whole tail.
    Certified { bound: f64 },
    /// Fit the trailing terms with a power law or a geometric law.
    Empirical,
    /// No tail information.
    None,
}

impl TailRule {
    /// Upper bound on `Σ_{n > count} t_n`, or `None` if the rule does not give one.
    pub fn tail_bound(&self, count: u64) -> Option<f64> {
        let n = count as f64;
        match *self {
            TailRule::ZeroBeyond { beyond } => (count >= beyond).then_some(0.0),
            TailRule::Power {
                scale,
                exponent,
                shift,
            } => {
                if exponent <= 1.0 || n <= shift {
                    return None;
                }
                if scale == 0.0 {
                    return Some(0.0);
                }
                Some(scale * (n - shift).powf(1.0 - exponent) / (exponent - 1.0))
            }
            TailRule::Geometric { scale, ratio } => {
                if !(0.0..1.0).contains(&ratio) {
                    return None;
                }
                Some(scale * ratio.powf(n + 1.0) / (1.0 - ratio))
            }
            TailRule::Certified { bound } => Some(bound),
            TailRule::Empirical | TailRule::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: u64,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCertificate {
    pub terms: u64,
    pub partial_sum: f64,
    pub tail_bound: Option<f64>,
    pub tail_source: TailSource,
    pub trace: Vec<TracePoint>,
    pub verdict: Verdict,
}

/// Checkpoint spacing: ten per decade.
const CHECKPOINT_FACTOR: f64 = 1.258_925_411_794_167_2;

impl SeriesCertificate {
    /// Sum `terms` (all must be nonnegative and finite) and attach a verdict.
    pub fn from_terms<I>(terms: I, rule: TailRule) -> Self
    where
        I: IntoIterator<Item = f64>,
    {
        let mut acc = Accumulator::new(matches!(rule, TailRule::Empirical));
        for t in terms {
            acc.push(t);
        }
        acc.finish(rule)
    }

    /// An empty or identically zero series.
    pub fn zero() -> Self {
        Self::from_terms(std::iter::empty(), TailRule::ZeroBeyond { beyond: 0 })
    }

    pub fn is_converged(&self) -> bool {
        self.verdict.is_converged()
    }

    /// Partial sum at the last checkpoint not exceeding `n`.
    pub fn partial_sum_at(&self, n: u64) -> Option<f64> {
        self.trace
            .iter()
            .take_while(|p| p.n <= n)
            .last()
            .map(|p| p.partial_sum)
    }

    /// Upper bound for convergent series, `None` otherwise.
    pub fn bound(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Converged { bound } => Some(bound),
            Verdict::DivergenceEvidence { .. } => None,
        }
    }
}

/// Streaming builder behind [`SeriesCertificate::from_terms`].
pub(crate) struct Accumulator {
    count: u64,
    sum: f64,
    compensation: f64,
    next_checkpoint: f64,
    trace: Vec<TracePoint>,
    keep_terms: bool,
    kept: Vec<f64>,
}

impl Accumulator {
    pub(crate) fn new(keep_terms: bool) -> Self {
        Self {
            count: 0,
            sum: 0.0,
            compensation: 0.0,
            next_checkpoint: 1.0,
            trace: Vec::new(),
            keep_terms,
            kept: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, term: f64) {
        debug_assert!(term >= 0.0 && term.is_finite(), "bad term {term}");
        self.count += 1;
        // Kahan summation; partial sums stay nondecreasing.
        let y = term - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t.max(self.sum);
        if self.keep_terms {
            self.kept.push(term);
        }
        if self.count as f64 >= self.next_checkpoint {
            self.trace.push(TracePoint {
                n: self.count,
                partial_sum: self.sum,
            });
            while self.next_checkpoint <= self.count as f64 {
                self.next_checkpoint = (self.next_checkpoint * CHECKPOINT_FACTOR).ceil();
            }
        }
    }

    pub(crate) fn finish(mut self, rule: TailRule) -> SeriesCertificate {
        if self.trace.last().map(|p| p.n) != Some(self.count) && self.count > 0 {
            self.trace.push(TracePoint {
                n: self.count,
                partial_sum: self.sum,
            });
        }
        let (tail, source) = match rule {
            TailRule::Empirical => match empirical_tail(&self.kept) {
                Some(b) => (Some(b), TailSource::Fitted),
                None => (None, TailSource::Absent),
            },
            TailRule::ZeroBeyond { .. } => match rule.tail_bound(self.count) {
                Some(b) => (Some(b), TailSource::Exact),
                None => (None, TailSource::Absent),
            },
            _ => match rule.tail_bound(self.count) {
                Some(b) => (Some(b), TailSource::Certified),
                None => (None, TailSource::Absent),
            },
        };
        let verdict = match tail {
            Some(b) => Verdict::Converged { bound: self.sum + b },
            None if self.sum == 0.0 && self.count == 0 => Verdict::Converged { bound: 0.0 },
            None => Verdict::DivergenceEvidence {
                fit: growth_fit(&self.trace),
            },
        };
        SeriesCertificate {
            terms: self.count,
            partial_sum: self.sum,
            tail_bound: tail,
            tail_source: source,
            trace: self.trace,
            verdict,
        }
    }
}

/// Fit the upper three decades of the trace with the logarithmic and the
/// power-law model and keep the better one.
pub fn growth_fit(trace: &[TracePoint]) -> GrowthFit {
    let last = trace.last().map(|p| p.n).unwrap_or(1).max(1) as f64;
    let lo = (last / 1000.0).max(10.0).min(last);
    let pts: Vec<&TracePoint> = trace
        .iter()
        .filter(|p| p.n as f64 >= lo && p.partial_sum > 0.0)
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.partial_sum).collect();
    let log_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let log = fit_line(&xs, &ys);
    let pow = fit_line(&xs, &log_ys);
    match (log, pow) {
        (Some(l), Some(p)) if p.r_squared > l.r_squared && p.slope > 0.5 => GrowthFit {
            model: GrowthModel::PowerLaw,
            slope: p.slope,
            intercept: p.intercept,
            r_squared: p.r_squared,
        },
        (Some(l), _) => GrowthFit {
            model: GrowthModel::Logarithmic,
            slope: l.slope,
            intercept: l.intercept,
            r_squared: l.r_squared,
        },
        _ => GrowthFit {
            model: GrowthModel::Logarithmic,
            slope: 0.0,
            intercept: ys.last().copied().unwrap_or(0.0),
            r_squared: 0.0,
        },
    }
}

/// Power-law or geometric extrapolation of the trailing quarter of `terms`.
/// A power law must decay faster than `n^(-1.02)` to yield a bound.
fn empirical_tail(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n == 0 {
        return Some(0.0);
    }
    let start = (3 * n) / 4;
    let tail = &terms[start..];
    if tail.iter().all(|&t| t == 0.0) {
        return Some(0.0);
    }
    let (mut xs_ln, mut xs_lin, mut ys) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &t) in tail.iter().enumerate() {
        if t > 0.0 {
            let ord = (start + i + 1) as f64;
            xs_ln.push(ord.ln());
            xs_lin.push(ord);
            ys.push(t.ln());
        }
    }
    if ys.len() < 3 {
        return None;
    }
    let pow = fit_line(&xs_ln, &ys)?;
    let geo = fit_line(&xs_lin, &ys);
    let count = n as f64;
    let last = *terms.last().unwrap();
    if let Some(g) = geo {
        if g.r_squared >= pow.r_squared && g.slope < 0.0 && g.r_squared > 0.99 {
            let r = g.slope.exp();
            // Anchor at the larger of the fitted and observed last term.
            let anchor = last.max((g.intercept + g.slope * count).exp());
            return Some(2.0 * anchor * r / (1.0 - r));
        }
    }
    let alpha = -pow.slope;
    if pow.r_squared > 0.9 && alpha > 1.02 {
        let anchor = last.max((pow.intercept + pow.slope * count.ln()).exp());
        // ∫_N^∞ C x^{-α} = C N^{1-α}/(α-1) with C = anchor · N^α
        return Some(2.0 * anchor * count / (alpha - 1.0));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept + 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_series_converges_to_zero() {
        let c = SeriesCertificate::from_terms(vec![0.0; 100], TailRule::ZeroBeyond { beyond: 0 });
        assert_eq!(c.verdict, Verdict::Converged { bound: 0.0 });
        assert_eq!(c.tail_source, TailSource::Exact);
    }

    #[test]
    fn geometric_terms_converge_empirically() {
        let terms = (0..60).map(|n| 0.5f64.powi(n));
        let c = SeriesCertificate::from_terms(terms, TailRule::Empirical);
        let b = c.bound().expect("geometric series converges");
        assert!((2.0 - 1e-12..2.0 + 1e-12).contains(&b), "{b}");
    }

    #[test]
    fn harmonic_terms_give_log_divergence() {
        let terms = (0..100_000).map(|n| 1.0 / (n as f64 + 1.0));
        let c = SeriesCertificate::from_terms(terms, TailRule::Empirical);
        match c.verdict {
            Verdict::DivergenceEvidence { fit } => {
                assert_eq!(fit.model, GrowthModel::Logarithmic);
                assert!((fit.slope - 1.0).abs() < 0.01, "{fit:?}");
                assert!(fit.r_squared > 0.999);
            }
            v => panic!("expected divergence, got {v:?}"),
        }
    }

    #[test]
    fn power_rule_tail_matches_integral() {
        let rule = TailRule::Power {
            scale: 1.0,
            exponent: 2.0,
            shift: 0.0,
        };
        assert_eq!(rule.tail_bound(10), Some(0.1));
        let weak = TailRule::Power {
            scale: 1.0,
            exponent: 1.0,
            shift: 0.0,
        };
        assert_eq!(weak.tail_bound(10), None);
    }

    #[test]
    fn trace_is_monotone_and_ends_at_count() {
        let c = SeriesCertificate::from_terms((1..=1234).map(|n| 1.0 / n as f64), TailRule::None);
        assert_eq!(c.trace.last().unwrap().n, 1234);
        assert!(c.trace.windows(2).all(|w| w[0].partial_sum <= w[1].partial_sum && w[0].n < w[1].n));
    }
}

//! Singular-value diagnostics: the spectrum of `I − T*T`, the singular values
//! of the block perturbation `S`, `ℓ^p` summability and `π`-domination.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::operators::{perturbation_part, BlockShiftOperator, Boundary, FiniteSection, WeightedShift};
use crate::oracle::dense_svd_check;
use crate::sequences::{PiTable, SideEnvelope, WeightFamily, WeightSequence};
use crate::series::{SeriesCertificate, TailRule};

/// Default exponents; `p = 1` is the divergent anchor.
pub const DEFAULT_P_GRID: [f64; 4] = [1.0, 1.1, 1.5, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    /// Coordinate the value comes from.
    pub index: i64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PVerdict {
    pub p: f64,
    pub certificate: SeriesCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCheck {
    /// Number of enumerated values checked.
    pub checked: u64,
    pub violations: u64,
    /// `max_n λ_n / π_n`.
    pub worst_ratio: f64,
    /// Bound on every value outside the scanned window.
    pub outside_bound: f64,
}

impl DominationCheck {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    pub window: (i64, i64),
    /// Sorted by modulus, largest first; ties by ascending index.
    pub values: Vec<SpectrumEntry>,
    pub verdicts: Vec<PVerdict>,
    pub domination: Option<DominationCheck>,
    /// Max deviation from a dense SVD of the finite section.
    pub svd_deviation: Option<f64>,
}

impl SchattenReport {
    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|e| e.value.abs())
    }

    pub fn verdict(&self, p: f64) -> Option<&SeriesCertificate> {
        self.verdicts.iter().find(|v| v.p == p).map(|v| &v.certificate)
    }
}

fn sort_by_modulus(values: &mut [SpectrumEntry]) {
    values.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()).then(a.index.cmp(&b.index)));
}

/// `Σ values^p` in the given order. `values` must be nonnegative.
pub fn summability_verdict(values: &[f64], p: f64, tail: TailRule) -> Result<SeriesCertificate> {
    if !(p > 0.0) {
        return Err(invalid("p", "must be positive"));
    }
    if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(invalid("values", "must be nonnegative and finite"));
    }
    Ok(SeriesCertificate::from_terms(values.iter().map(|v| v.powf(p)), tail))
}

/// Bound on `Σ_{m > n} |1 − ρ_{±m}²|^p` from a deviation envelope, using
/// `|1 − ρ²| ≤ e(2 + e)` and `e ≤ scale` once `m − shift ≥ 1`.
fn defect_tail(env: SideEnvelope, p: f64, n: i64) -> Option<f64> {
    match env {
        SideEnvelope::Zero { .. } => env.tail_sum(p, n),
        SideEnvelope::Power {
            scale,
            exponent,
            shift,
            from,
        } => {
            if (n + 1) as f64 - shift < 1.0 {
                return None;
            }
            SideEnvelope::Power {
                scale: scale * (2.0 + scale),
                exponent,
                shift,
                from,
            }
            .tail_sum(p, n)
        }
    }
}

fn defect_outside_sup(env: SideEnvelope, n: i64) -> Option<f64> {
    match env {
        SideEnvelope::Zero { from } => (from <= n + 1).then_some(0.0),
        SideEnvelope::Power { shift, from, .. } => {
            if from > n + 1 || (n + 1) as f64 - shift < 1.0 {
                return None;
            }
            // the envelope decreases in m, so its value at n + 1 bounds the rest
            let e = env.at(n + 1)?;
            Some(e * (2.0 + e))
        }
    }
}

fn check_window(lo: i64, hi: i64) -> Result<()> {
    if !(lo <= 0 && 0 <= hi) {
        return Err(invalid("window", "must contain index 0"));
    }
    Ok(())
}

/// Eigenvalues `1 − ρ_j²` of the diagonal operator `I − T*T` on `[lo, hi]`.
pub fn defect_spectrum(t: &WeightedShift, lo: i64, hi: i64, ps: &[f64]) -> Result<SchattenReport> {
    check_window(lo, hi)?;
    let w = t.weights();
    let mut values: Vec<SpectrumEntry> = (lo..=hi)
        .map(|j| {
            let r = w.rho(j);
            SpectrumEntry {
                index: j,
                value: 1.0 - r * r,
            }
        })
        .collect();
    sort_by_modulus(&mut values);
    let moduli: Vec<f64> = values.iter().map(|e| e.value.abs()).collect();
    let up = w.deviation_envelope(true);
    let down = w.deviation_envelope(false);
    let verdicts = ps
        .iter()
        .map(|&p| {
            let rule = match (defect_tail(up, p, hi), defect_tail(down, p, -lo)) {
                (Some(a), Some(b)) => TailRule::Certified { bound: a + b },
                _ => TailRule::None,
            };
            summability_verdict(&moduli, p, rule).map(|certificate| PVerdict { p, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchattenReport {
        window: (lo, hi),
        values,
        verdicts,
        domination: None,
        svd_deviation: None,
    })
}

/// Check `|λ_n(I − T*T)| ≤ π_n` for `n ≤ n_max` in the modulus-decreasing
/// enumeration, scanning `|j| ≤ half_width`.
///
/// The `n`-th global value is at most the larger of the `n`-th value in the
/// window and the envelope bound for everything outside, so the check is
/// sound whenever the envelope is available.
pub fn pi_domination_scan(t: &WeightedShift, pi: &PiTable, n_max: u64, half_width: i64) -> Result<DominationCheck> {
    if half_width < 0 || (2 * half_width + 1) as u64 <= n_max {
        return Err(invalid("half_width", "window must hold more than n_max values"));
    }
    let w = t.weights();
    let mut moduli: Vec<f64> = (-half_width..=half_width)
        .map(|j| {
            let r = w.rho(j);
            (1.0 - r * r).abs()
        })
        .collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    let up = defect_outside_sup(w.deviation_envelope(true), half_width);
    let down = defect_outside_sup(w.deviation_envelope(false), half_width);
    let outside = match (up, down) {
        (Some(a), Some(b)) => a.max(b),
        _ => f64::INFINITY,
    };
    let mut violations = 0;
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let value = moduli[n as usize].max(outside);
        let ratio = value / pi.value(n);
        worst = worst.max(ratio);
        if ratio > 1.0 {
            violations += 1;
        }
    }
    Ok(DominationCheck {
        checked: n_max + 1,
        violations,
        worst_ratio: worst,
        outside_bound: outside,
    })
}

/// Bound on `Σ_{|n| > N} ρ_{|n|}^p` for coupling sequences that decay.
fn coupling_tail(rho: &WeightSequence, p: f64, n: i64) -> Option<f64> {
    let t = rho.translation().unsigned_abs() as f64;
    match rho.family() {
        WeightFamily::Harmonic { offset } => {
            let base = n as f64 - t + offset;
            (p > 1.0 && base > 0.0).then(|| 2.0 * base.powf(1.0 - p) / (p - 1.0))
        }
        WeightFamily::Constant { value } => (*value == 0.0).then_some(0.0),
        WeightFamily::UserTable { start, values, fill } => {
            let covered = *start - rho.translation() >= -n && start + values.len() as i64 - rho.translation() <= n + 1;
            (*fill == 0.0 && covered).then_some(0.0)
        }
        _ => None,
    }
}

/// Singular values of `S = (0 R; 0 0)` on `|n| ≤ N`.
///
/// `S*S = diag(0, R²)`, so the values are `ρ_{|n|}`: `ρ_0` once and every
/// other `ρ_n` twice. With `dense_check` the analytic multiset is compared
/// with an SVD of the compressed section.
pub fn perturbation_singular_values(
    b: &BlockShiftOperator,
    half_width: usize,
    ps: &[f64],
    dense_check: bool,
) -> Result<SchattenReport> {
    let n = half_width as i64;
    let (_, s) = perturbation_part(b);
    let mut values: Vec<SpectrumEntry> = (-n..=n)
        .map(|j| SpectrumEntry {
            index: j,
            value: s.coupling().entry(j).abs(),
        })
        .collect();
    sort_by_modulus(&mut values);
    let moduli: Vec<f64> = values.iter().map(|e| e.value).collect();
    let verdicts = ps
        .iter()
        .map(|&p| {
            let rule = match coupling_tail(b.coupling(), p, n) {
                Some(bound) => TailRule::Certified { bound },
                None => TailRule::None,
            };
            summability_verdict(&moduli, p, rule).map(|certificate| PVerdict { p, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    let svd_deviation = if dense_check {
        let m = s.section(half_width, Boundary::Compression)?;
        Some(dense_svd_check(&m, &moduli)?)
    } else {
        None
    };
    Ok(SchattenReport {
        window: (-n, n),
        values,
        verdicts,
        domination: None,
        svd_deviation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub checked: u64,
    pub violations: u64,
    /// `max_n (μ_n − ρ_{⌊n/2⌋})`.
    pub worst_excess: f64,
}

/// `μ_n ≤ ρ_{⌊n/2⌋}` for the enumerated values, `n` counted from 0.
pub fn singular_value_inequality(report: &SchattenReport, rho: &WeightSequence) -> InequalityCheck {
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for (n, e) in report.values.iter().enumerate() {
        let excess = e.value.abs() - rho.rho((n / 2) as i64);
        worst = worst.max(excess);
        if excess > 0.0 {
            violations += 1;
        }
    }
    InequalityCheck {
        checked: report.values.len() as u64,
        violations,
        worst_excess: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{pi_dominated_weights, theorem1_weights};
    use crate::series::Verdict;

    #[test]
    fn unitary_shift_has_zero_defect() {
        let r = defect_spectrum(&WeightedShift::unweighted(), -50, 50, &DEFAULT_P_GRID).unwrap();
        assert!(r.moduli().all(|m| m == 0.0));
        for v in &r.verdicts {
            assert_eq!(v.certificate.verdict, Verdict::Converged { bound: 0.0 });
        }
    }

    #[test]
    fn theorem1_defect_summability() {
        let t = WeightedShift::new(theorem1_weights());
        let r = defect_spectrum(&t, -1000, 100_000, &DEFAULT_P_GRID).unwrap();
        assert!(!r.verdict(1.0).unwrap().is_converged());
        assert!(r.verdict(1.5).unwrap().is_converged());
        assert!(r.verdict(1.1).unwrap().is_converged());
        let m: Vec<f64> = r.moduli().collect();
        assert!(m.windows(2).all(|w| w[0] >= w[1]));
        for e in r.values.iter().take(50) {
            let rho = t.weights().rho(e.index);
            assert_eq!(e.value, 1.0 - rho * rho);
        }
    }

    #[test]
    fn pi_domination_for_harmonic_pi() {
        let pi = PiTable::harmonic();
        let t = WeightedShift::new(pi_dominated_weights(pi.clone()).unwrap());
        let d = pi_domination_scan(&t, &pi, 1000, 20_000).unwrap();
        assert!(d.passes(), "{d:?}");
        // the interleaved family with a_j = j/(j+1) is not dominated by 1/(n+1)
        let t1 = WeightedShift::new(theorem1_weights());
        assert!(!pi_domination_scan(&t1, &pi, 1000, 20_000).unwrap().passes());
    }

    #[test]
    fn harmonic_perturbation_values() {
        let rho = WeightSequence::harmonic(1.0);
        let b = BlockShiftOperator::new(rho.clone());
        let r = perturbation_singular_values(&b, 100, &[1.0, 2.0], false).unwrap();
        let m: Vec<f64> = r.moduli().take(5).collect();
        assert_eq!(m, vec![1.0, 0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(singular_value_inequality(&r, &rho).violations, 0);
        assert!(!r.verdict(1.0).unwrap().is_converged());
        assert!(r.verdict(2.0).unwrap().is_converged());
    }

    #[test]
    fn dense_svd_matches_multiset() {
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let r = perturbation_singular_values(&b, 128, &[], true).unwrap();
        assert!(r.svd_deviation.unwrap() <= 1e-10);
    }

    #[test]
    fn summability_examples() {
        let geo: Vec<f64> = (0..60).map(|n| 0.5f64.powi(n)).collect();
        let c = summability_verdict(&geo, 1.0, TailRule::Empirical).unwrap();
        assert!(c.bound().unwrap() <= 2.0 + 1e-12);
        let harm: Vec<f64> = (0..100_000).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        let d = summability_verdict(&harm, 1.0, TailRule::Empirical).unwrap();
        match d.verdict {
            Verdict::DivergenceEvidence { fit } => assert!((fit.slope - 1.0).abs() < 0.05),
            _ => panic!("harmonic series reported convergent"),
        }
        let s = summability_verdict(&harm, 2.0, TailRule::Empirical).unwrap();
        let pi2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(s.bound().unwrap() >= pi2 && s.bound().unwrap() < pi2 + 1e-4);
        assert!(summability_verdict(&[-1.0], 1.0, TailRule::None).is_err());
    }
}

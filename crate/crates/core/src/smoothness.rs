//! Evidence-level classification of weak and strong smooth vectors, and the
//! boundary-jump probe for the singular subspace.
//!
//! Every verdict carries the numbers it was decided on. "Evidence" means the
//! computation is certified on a finite window; it is not a proof about the
//! whole space.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hardy::{
    adjoint_strong_h2_weighted_sum, block_companion_series, block_inside_series, h2_norm_exact,
    shift_companion_series, shift_inside_series, strong_h2_weighted_sum, BlockSlot, WeightedSumCertificate,
};
use crate::operators::{build_similarity, BlockShiftOperator, BlockVector, FinSuppVector, WeightedShift};
use crate::quadrature::extrapolate_to_zero;
use crate::resolvent::{adjoint_block_matrix_element, SpectralPoint};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    WeakSmoothEvidence,
    /// Some matrix-element family grows across the tested window.
    NotWeakSmoothEvidence,
    StrongSmoothEvidence,
    NotStrongSmooth,
    SingularJumpDetected,
    NoJumpDetected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakRow {
    pub j: i64,
    /// H² norm of `⟨(T − z)^{−1}u, v_j⟩`, maximised over block slots.
    pub inside: f64,
    /// H² norm of `⟨(I − zT)^{−1}u, v_j⟩`, maximised over block slots.
    pub companion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakWitness {
    pub window: (i64, i64),
    pub inside_sup: f64,
    pub companion_sup: f64,
    pub inside_bounded: bool,
    pub companion_bounded: bool,
    /// `‖W^{−1}u‖ · ‖W‖` on the window, when a diagonal similarity exists.
    pub similarity_bound: Option<f64>,
    pub table: Vec<WeakRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongWitness {
    pub inside: WeightedSumCertificate,
    pub companion: WeightedSumCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleJump {
    pub theta: f64,
    pub jump_re: f64,
    pub jump_im: f64,
    pub error: f64,
    pub ratio: f64,
    /// Index of the test vector that gave the best ratio.
    pub best_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpWitness {
    pub angles: Vec<AngleJump>,
    pub detected: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Weak(WeakWitness),
    Strong(Box<StrongWitness>),
    Jump(JumpWitness),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessVerdict {
    pub kind: VerdictKind,
    pub witness: Witness,
    /// Vacuous verdict for the zero vector.
    pub trivial: bool,
}

/// A `v`-window `lo ≤ j ≤ hi` of basis test vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JWindow {
    pub lo: i64,
    pub hi: i64,
}

impl JWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(invalid("window", "empty j window"));
        }
        Ok(Self { lo, hi })
    }

    pub fn symmetric(half: i64) -> Result<Self> {
        Self::new(-half, half)
    }
}

/// The operator and vector whose matrix elements are examined.
#[derive(Debug, Clone, Copy)]
pub enum WeakTarget<'a> {
    Shift(&'a WeightedShift, &'a FinSuppVector),
    Block(&'a BlockShiftOperator, &'a BlockVector),
}

/// Relative margin by which the outer half of a window must exceed the inner
/// half before a family is called unbounded.
pub const GROWTH_MARGIN: f64 = 1e-6;

/// `true` unless the values on the outer half of the window exceed the
/// maximum on the inner half.
fn looks_bounded(table: &[(i64, f64)], window: JWindow) -> bool {
    let centre = (window.lo + window.hi) as f64 / 2.0;
    let radius = (window.hi - window.lo) as f64 / 2.0;
    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for &(j, v) in table {
        if (j as f64 - centre).abs() <= radius / 2.0 {
            inner = inner.max(v);
        } else {
            outer = outer.max(v);
        }
    }
    outer <= inner * (1.0 + GROWTH_MARGIN) + f64::MIN_POSITIVE
}

fn norm_of(series: crate::hardy::CoefficientSeries) -> f64 {
    h2_norm_exact(&series).map(|r| r.estimate).unwrap_or(f64::INFINITY)
}

fn weak_table(target: WeakTarget<'_>, window: JWindow) -> Vec<WeakRow> {
    (window.lo..=window.hi)
        .into_par_iter()
        .map(|j| match target {
            WeakTarget::Shift(t, u) => WeakRow {
                j,
                inside: norm_of(shift_inside_series(t, u, j)),
                companion: norm_of(shift_companion_series(t, u, j)),
            },
            WeakTarget::Block(b, u) => {
                let slots = [BlockSlot::Top, BlockSlot::Bottom];
                WeakRow {
                    j,
                    inside: slots
                        .iter()
                        .map(|&s| norm_of(block_inside_series(b, u, j, s)))
                        .fold(0.0, f64::max),
                    companion: slots
                        .iter()
                        .map(|&s| norm_of(block_companion_series(b, u, j, s)))
                        .fold(0.0, f64::max),
                }
            }
        })
        .collect()
}

fn similarity_bound(t: &WeightedShift, u: &FinSuppVector, window: JWindow) -> Option<f64> {
    let w = build_similarity(t.weights()).ok()?;
    let winv_u = w.apply_inverse(u).ok()?.norm();
    let (_, w_sup) = w.modulus_bounds(window.lo.min(u.lo()), window.hi.max(u.hi()));
    // Past any finite window w_j ≤ 1/a_1 for the interleaved families.
    let far = 1.0 / t.weights().pair_value(1)?;
    Some(winv_u * w_sup.max(far))
}

/// H² norms of `⟨(T − z)^{−1}u, e_j⟩` and `⟨(I − zT)^{−1}u, e_j⟩` over the window.
pub fn classify_weak_disk(target: WeakTarget<'_>, window: JWindow) -> SmoothnessVerdict {
    let table = weak_table(target, window);
    let inside: Vec<(i64, f64)> = table.iter().map(|r| (r.j, r.inside)).collect();
    let companion: Vec<(i64, f64)> = table.iter().map(|r| (r.j, r.companion)).collect();
    let inside_bounded = looks_bounded(&inside, window);
    let companion_bounded = looks_bounded(&companion, window);
    let inside_sup = inside.iter().map(|p| p.1).fold(0.0, f64::max);
    let companion_sup = companion.iter().map(|p| p.1).fold(0.0, f64::max);
    let (similarity, trivial) = match target {
        WeakTarget::Shift(t, u) => (similarity_bound(t, u, window), u.is_zero()),
        WeakTarget::Block(_, u) => (None, u.is_zero()),
    };
    let finite = inside_sup.is_finite() && companion_sup.is_finite();
    let kind = if finite && inside_bounded && companion_bounded {
        VerdictKind::WeakSmoothEvidence
    } else {
        VerdictKind::NotWeakSmoothEvidence
    };
    SmoothnessVerdict {
        kind,
        witness: Witness::Weak(WeakWitness {
            window: (window.lo, window.hi),
            inside_sup,
            companion_sup,
            inside_bounded,
            companion_bounded,
            similarity_bound: similarity,
            table,
        }),
        trivial,
    }
}

/// Defect-weighted series for both resolvent conditions.
pub fn classify_strong_shift(t: &WeightedShift, u: &FinSuppVector, n_max: i64) -> Result<SmoothnessVerdict> {
    let inside = strong_h2_weighted_sum(t.weights(), u, n_max)?;
    let companion = adjoint_strong_h2_weighted_sum(t.weights(), u, n_max)?;
    let kind = if inside.is_converged() && companion.is_converged() {
        VerdictKind::StrongSmoothEvidence
    } else {
        VerdictKind::NotStrongSmooth
    };
    Ok(SmoothnessVerdict {
        kind,
        witness: Witness::Strong(Box::new(StrongWitness { inside, companion })),
        trivial: u.is_zero(),
    })
}

/// Per-side verdicts of the weak conditions for the block operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnMembership {
    /// Inside-disk condition bounded over the window.
    pub plus_bounded: bool,
    /// Outside-disk (companion) condition bounded over the window.
    pub minus_bounded: bool,
    pub witness: WeakWitness,
}

pub fn cn_membership_probe(b: &BlockShiftOperator, u: &BlockVector, window: JWindow) -> CnMembership {
    let v = classify_weak_disk(WeakTarget::Block(b, u), window);
    let Witness::Weak(w) = v.witness else {
        unreachable!("weak classification returns a weak witness")
    };
    CnMembership {
        plus_bounded: w.inside_bounded && w.inside_sup.is_finite(),
        minus_bounded: w.companion_bounded && w.companion_sup.is_finite(),
        witness: w,
    }
}

/// Settings for the boundary-jump probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSettings {
    pub angles: usize,
    /// Decreasing radial offsets `ε`; values are sampled at `(1 ∓ ε) e^{iθ}`.
    pub eps: Vec<f64>,
    /// Required ratio `|jump| / error`.
    pub threshold: f64,
    /// Fraction of angles that must pass.
    pub fraction: f64,
    pub tol: f64,
}

impl Default for JumpSettings {
    fn default() -> Self {
        Self {
            angles: 32,
            eps: vec![0.1, 0.05, 0.025, 0.0125],
            threshold: 10.0,
            fraction: 0.5,
            tol: 1e-14,
        }
    }
}

/// Jump probe on an arbitrary matrix-element family. `eval(λ)` returns the
/// values for every test vector at `λ`.
pub fn jump_probe_core<F>(eval: F, tests: usize, settings: &JumpSettings) -> Result<SmoothnessVerdict>
where
    F: Fn(C64) -> Result<Vec<C64>> + Sync,
{
    if settings.angles == 0 || tests == 0 {
        return Err(invalid("angles", "need at least one angle and one test vector"));
    }
    if settings.eps.len() < 2
        || settings.eps.windows(2).any(|w| !(w[1] < w[0]))
        || settings.eps.iter().any(|&e| !(e > 0.0 && e < 1.0))
    {
        return Err(invalid("eps", "schedule must be strictly decreasing in (0, 1)"));
    }
    let rows: Vec<AngleJump> = (0..settings.angles)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + 0.5) / settings.angles as f64;
            let zeta = C64::from_polar(1.0, theta);
            let mut inside = vec![Vec::new(); tests];
            let mut outside = vec![Vec::new(); tests];
            for &e in &settings.eps {
                let vi = eval(zeta * (1.0 - e))?;
                let vo = eval(zeta * (1.0 + e))?;
                for t in 0..tests {
                    inside[t].push(vi[t]);
                    outside[t].push(vo[t]);
                }
            }
            let mut best: Option<AngleJump> = None;
            for t in 0..tests {
                let (fi, ei) = extrapolate_to_zero(&settings.eps, &inside[t])?;
                let (fo, eo) = extrapolate_to_zero(&settings.eps, &outside[t])?;
                let jump = fi - fo;
                let scale = fi.norm().max(fo.norm());
                let error = (ei + eo).max(1e-14 * scale).max(f64::MIN_POSITIVE);
                let ratio = jump.norm() / error;
                let row = AngleJump {
                    theta,
                    jump_re: jump.re,
                    jump_im: jump.im,
                    error,
                    ratio,
                    best_test: t,
                };
                if best.as_ref().is_none_or(|b| ratio > b.ratio) {
                    best = Some(row);
                }
            }
            Ok(best.expect("at least one test vector"))
        })
        .collect::<Result<Vec<_>>>()?;
    let detected = rows.iter().filter(|r| r.ratio >= settings.threshold).count();
    let kind = if detected as f64 >= settings.fraction * settings.angles as f64 {
        VerdictKind::SingularJumpDetected
    } else {
        VerdictKind::NoJumpDetected
    };
    Ok(SmoothnessVerdict {
        kind,
        witness: Witness::Jump(JumpWitness {
            angles: rows,
            detected,
            threshold: settings.threshold,
        }),
        trivial: false,
    })
}

/// Test vectors `(e_j, 0)` and `(0, e_j)` for `|j| ≤ half`.
pub fn block_test_vectors(half: i64) -> Vec<BlockVector> {
    let mut out = Vec::new();
    for j in -half..=half {
        out.push(BlockVector::top(FinSuppVector::basis(j)));
        out.push(BlockVector::bottom(FinSuppVector::basis(j)));
    }
    out
}

/// Boundary jump of `λ ↦ ⟨(B* − λ)^{−1} f, g⟩` across the unit circle.
pub fn singular_jump_probe(
    b: &BlockShiftOperator,
    f: &BlockVector,
    tests: &[BlockVector],
    settings: &JumpSettings,
) -> Result<SmoothnessVerdict> {
    if f.is_zero() {
        let rows = (0..settings.angles)
            .map(|k| AngleJump {
                theta: 2.0 * PI * (k as f64 + 0.5) / settings.angles as f64,
                jump_re: 0.0,
                jump_im: 0.0,
                error: 0.0,
                ratio: 0.0,
                best_test: 0,
            })
            .collect();
        return Ok(SmoothnessVerdict {
            kind: VerdictKind::NoJumpDetected,
            witness: Witness::Jump(JumpWitness {
                angles: rows,
                detected: 0,
                threshold: settings.threshold,
            }),
            trivial: true,
        });
    }
    let eval = |lambda: C64| -> Result<Vec<C64>> {
        let p = SpectralPoint::new(lambda)?;
        tests
            .iter()
            .map(|g| adjoint_block_matrix_element(b, &p, f, g, settings.tol))
            .collect()
    };
    jump_probe_core(eval, tests.len(), settings)
}

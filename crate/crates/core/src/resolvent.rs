//! Closed-form resolvents of the weighted shift and the block operator.
//!
//! Coordinates are produced directly from the two-case series formula, in log
//! space, and truncated once a certified geometric bound on the discarded
//! `ℓ²` mass drops below `tol · ‖f‖`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operators::{BlockShiftOperator, BlockVector, FinSuppVector, WeightedShift};
use crate::sequences::{ProductEnvelope, WeightSequence};
use crate::C64;

/// Default truncation tolerance, relative to `‖f‖`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Smallest `||z| − 1|` accepted for comparisons against dense sections.
pub const ORACLE_GAP_FLOOR: f64 = 1e-3;
/// Smallest `||z| − 1|` accepted for closed-form evaluation.
pub const CLOSED_FORM_GAP_FLOOR: f64 = 1e-6;
/// Supports wider than this are summed in Horner form instead of termwise.
pub const DIRECT_WIDTH: usize = 256;
/// Hard cap on the number of coordinates a single resolvent may produce.
pub const MAX_RESOLVENT_LEN: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    InsideDisk,
    OutsideDisk,
}

/// A resolvent point off the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    z: C64,
    region: Region,
    gap: f64,
    /// Set when the gap is below [`ORACLE_GAP_FLOOR`].
    near_circle: bool,
}

impl SpectralPoint {
    /// Accepts any point with gap at least [`CLOSED_FORM_GAP_FLOOR`].
    pub fn new(z: C64) -> Result<Self> {
        Self::with_floor(z, CLOSED_FORM_GAP_FLOOR)
    }

    /// Accepts points with gap at least `floor` (which must be positive).
    pub fn with_floor(z: C64, floor: f64) -> Result<Self> {
        if !(floor > 0.0) {
            return Err(invalid("gap floor", "must be positive"));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(invalid("z", "not finite"));
        }
        let modulus = z.norm();
        let gap = (modulus - 1.0).abs();
        if gap < floor {
            return Err(Error::GapTooSmall { gap, floor });
        }
        Ok(Self {
            z,
            region: if modulus < 1.0 {
                Region::InsideDisk
            } else {
                Region::OutsideDisk
            },
            gap,
            near_circle: gap < ORACLE_GAP_FLOOR,
        })
    }

    /// Accepts points usable for dense-section comparisons.
    pub fn for_oracle(z: C64) -> Result<Self> {
        Self::with_floor(z, ORACLE_GAP_FLOOR)
    }

    pub fn polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(C64::from_polar(r, theta))
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn near_circle(&self) -> bool {
        self.near_circle
    }
}

/// Resolvent output with a certified bound on the discarded coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedVector {
    pub vector: FinSuppVector,
    /// `ℓ²` norm bound on everything outside `vector`'s window.
    pub tail_bound: f64,
    pub near_circle: bool,
}

impl TruncatedVector {
    fn exact(vector: FinSuppVector) -> Self {
        Self {
            vector,
            tail_bound: 0.0,
            near_circle: false,
        }
    }
}

/// `λ^n` for integer `n ≥ 0` in log form: `(ln|λ|, arg λ)`.
#[derive(Clone, Copy)]
struct LogPoint {
    log_mod: f64,
    arg: f64,
}

impl LogPoint {
    fn new(z: C64) -> Self {
        Self {
            log_mod: z.norm().ln(),
            arg: z.arg(),
        }
    }

    /// `c · λ^{n} · e^{shift}` with `shift` real.
    fn term(&self, c: C64, n: i64, shift: f64) -> C64 {
        let n = n as f64;
        c * C64::from_polar((n * self.log_mod + shift).exp(), n * self.arg)
    }
}

fn ratio_tail(anchor: f64, env: ProductEnvelope, ratio: f64) -> f64 {
    anchor * env.k * ratio / (1.0 - ratio * ratio).sqrt()
}

/// `(T − λ)^{−1} f`, truncated at `tol · ‖f‖`.
pub fn shift_resolvent(
    t: &WeightedShift,
    lambda: &SpectralPoint,
    f: &FinSuppVector,
    tol: f64,
) -> Result<TruncatedVector> {
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let Some((lo, hi)) = f.support() else {
        return Ok(TruncatedVector::exact(FinSuppVector::zeros()));
    };
    let rho = t.weights();
    let target = tol * f.norm();
    let mut out = match lambda.region() {
        Region::InsideDisk => inside(rho, lambda.z(), f, lo, hi, target)?,
        Region::OutsideDisk => outside(rho, lambda.z(), f, lo, hi, target)?,
    };
    out.near_circle = lambda.near_circle();
    Ok(out)
}

/// `v_m = Σ_{k<m} f_k λ^{m−k−1} / Π_{i=k}^{m−1} ρ_i`, nonzero only for `m > lo`.
fn inside(
    rho: &WeightSequence,
    z: C64,
    f: &FinSuppVector,
    lo: i64,
    hi: i64,
    target: f64,
) -> Result<TruncatedVector> {
    if z == C64::new(0.0, 0.0) {
        // Only the k = m − 1 term survives.
        let coeffs = (lo..=hi).map(|k| f.get(k) / rho.rho(k)).collect();
        return Ok(TruncatedVector::exact(FinSuppVector::from_coeffs(lo + 1, coeffs)));
    }
    let lp = LogPoint::new(z);
    // prefix[i] = Σ_{lo}^{lo+i−1} ln ρ
    let width = (hi - lo + 1) as usize;
    let mut prefix = Vec::with_capacity(width + 1);
    prefix.push(0.0f64);
    for k in lo..=hi {
        prefix.push(prefix.last().unwrap() + rho.rho(k).ln());
    }
    let mut coeffs = Vec::with_capacity(width + 16);
    if width <= DIRECT_WIDTH {
        for m in (lo + 1)..=(hi + 1) {
            let pm = prefix[(m - lo) as usize];
            let mut acc = C64::new(0.0, 0.0);
            for k in lo..m {
                let fk = f.get(k);
                if fk != C64::new(0.0, 0.0) {
                    acc += lp.term(fk, m - k - 1, -(pm - prefix[(k - lo) as usize]));
                }
            }
            coeffs.push(acc);
        }
    } else {
        // Horner form of the same sum: v_{m+1} = (f_m + λ v_m) / ρ_m.
        let mut v = C64::new(0.0, 0.0);
        for m in lo..=hi {
            v = (f.get(m) + z * v) / rho.rho(m);
            coeffs.push(v);
        }
    }
    let anchor_value = *coeffs.last().unwrap();
    let anchor_index = hi + 1;
    let z_abs = z.norm();
    // Beyond the support: v_{M+n} = v_M λ^n / Π_{M}^{M+n−1} ρ.
    let mut log_run = 0.0f64;
    let mut m = anchor_index;
    loop {
        let current = *coeffs.last().unwrap();
        let env = rho
            .inverse_product_envelope_up(m)
            .ok_or(Error::NoTailBound)?;
        let ratio = z_abs * env.sigma;
        if ratio >= 1.0 {
            return Err(Error::DivergentTail { ratio });
        }
        let tail = ratio_tail(current.norm(), env, ratio);
        if tail <= target {
            return Ok(TruncatedVector {
                vector: FinSuppVector::from_coeffs(lo + 1, coeffs),
                tail_bound: tail,
                near_circle: false,
            });
        }
        if coeffs.len() >= MAX_RESOLVENT_LEN {
            return Err(Error::NonConvergent {
                what: "resolvent truncation",
                detail: format!("tail {tail:e} after {} coordinates", coeffs.len()),
            });
        }
        log_run += rho.rho(m).ln();
        m += 1;
        coeffs.push(lp.term(anchor_value, m - anchor_index, -log_run));
    }
}

/// `v_m = −Σ_{k≥m} f_k Π_{i=m}^{k−1} ρ_i / λ^{k−m+1}`, nonzero only for `m ≤ hi`.
fn outside(
    rho: &WeightSequence,
    z: C64,
    f: &FinSuppVector,
    lo: i64,
    hi: i64,
    target: f64,
) -> Result<TruncatedVector> {
    let inv = LogPoint::new(z.inv());
    let width = (hi - lo + 1) as usize;
    // suffix[i] = Σ_{lo}^{lo+i−1} ln ρ, so Σ_{m}^{k−1} = suffix[k−lo] − suffix[m−lo]
    let mut prefix = Vec::with_capacity(width + 1);
    prefix.push(0.0f64);
    for k in lo..=hi {
        prefix.push(prefix.last().unwrap() + rho.rho(k).ln());
    }
    // Built from hi downwards, reversed at the end.
    let mut rev = Vec::with_capacity(width + 16);
    if width <= DIRECT_WIDTH {
        for m in (lo..=hi).rev() {
            let pm = prefix[(m - lo) as usize];
            let mut acc = C64::new(0.0, 0.0);
            for k in m..=hi {
                let fk = f.get(k);
                if fk != C64::new(0.0, 0.0) {
                    acc -= inv.term(fk, k - m + 1, prefix[(k - lo) as usize] - pm);
                }
            }
            rev.push(acc);
        }
    } else {
        // Horner form: v_m = (ρ_m v_{m+1} − f_m) / λ.
        let mut v = C64::new(0.0, 0.0);
        for m in (lo..=hi).rev() {
            v = (rho.rho(m) * v - f.get(m)) / z;
            rev.push(v);
        }
    }
    let anchor_value = *rev.last().unwrap();
    let anchor_index = lo;
    let inv_abs = 1.0 / z.norm();
    // Below the support: v_{M−n} = v_M Π_{M−n}^{M−1} ρ / λ^n.
    let mut log_run = 0.0f64;
    let mut m = anchor_index;
    loop {
        let current = *rev.last().unwrap();
        let env = rho.product_envelope_down(m).ok_or(Error::NoTailBound)?;
        let ratio = inv_abs * env.sigma;
        if ratio >= 1.0 {
            return Err(Error::DivergentTail { ratio });
        }
        let tail = ratio_tail(current.norm(), env, ratio);
        if tail <= target {
            rev.reverse();
            return Ok(TruncatedVector {
                vector: FinSuppVector::from_coeffs(m, rev),
                tail_bound: tail,
                near_circle: false,
            });
        }
        if rev.len() >= MAX_RESOLVENT_LEN {
            return Err(Error::NonConvergent {
                what: "resolvent truncation",
                detail: format!("tail {tail:e} after {} coordinates", rev.len()),
            });
        }
        m -= 1;
        log_run += rho.rho(m).ln();
        rev.push(inv.term(anchor_value, anchor_index - m, log_run));
    }
}

/// `‖(T − λ)v − f‖`.
pub fn shift_residual(t: &WeightedShift, lambda: C64, v: &FinSuppVector, f: &FinSuppVector) -> f64 {
    t.apply(v).axpy(-lambda, v).sub(f).norm()
}

/// `(U − λ)^{−1} f` for the unweighted right shift, via `J (U* − λ)^{−1} J`.
pub fn right_shift_resolvent(
    lambda: &SpectralPoint,
    f: &FinSuppVector,
    tol: f64,
) -> Result<TruncatedVector> {
    let r = shift_resolvent(&WeightedShift::unweighted(), lambda, &f.reflected(), tol)?;
    Ok(TruncatedVector {
        vector: r.vector.reflected(),
        ..r
    })
}

/// `(U* − λ)^{−1} f` for the unweighted left shift.
pub fn left_shift_resolvent(
    lambda: &SpectralPoint,
    f: &FinSuppVector,
    tol: f64,
) -> Result<TruncatedVector> {
    shift_resolvent(&WeightedShift::unweighted(), lambda, f, tol)
}

/// Upper bound for `sup_n ρ_{|n|}` used when propagating truncation errors.
pub fn coupling_sup(weights: &WeightSequence) -> f64 {
    let (_, near) = weights.range_bounds(0, 4096);
    let far = match weights.deviation_envelope(true).at(4096) {
        Some(d) => 1.0 + d,
        None => near,
    };
    near.max(far)
}

/// Resolvent of the block operator applied to `(f₁, f₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockResolvent {
    pub top: TruncatedVector,
    pub bottom: TruncatedVector,
}

impl BlockResolvent {
    pub fn vector(&self) -> BlockVector {
        BlockVector::new(self.top.vector.clone(), self.bottom.vector.clone())
    }

    pub fn tail_bound(&self) -> f64 {
        self.top.tail_bound.hypot(self.bottom.tail_bound)
    }
}

/// `(B − λ)^{−1} f = ((U−λ)^{−1}(f₁ − R x₂), x₂)` with `x₂ = (U−λ)^{−1} f₂`.
pub fn block_resolvent(
    b: &BlockShiftOperator,
    lambda: &SpectralPoint,
    f: &BlockVector,
    tol: f64,
) -> Result<BlockResolvent> {
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let sup = coupling_sup(b.coupling());
    let scale = f.norm().max(f64::MIN_POSITIVE);
    // The top solve amplifies the bottom tail by sup R / gap.
    let inner = tol * lambda.gap() / (sup + 1.0);
    let x2 = right_shift_resolvent(lambda, &f.bottom, inner)?;
    let rhs = f.top.sub(&b.coupling_operator().apply(&x2.vector));
    let x1 = if rhs.is_zero() {
        TruncatedVector::exact(FinSuppVector::zeros())
    } else {
        let rel = tol * scale / rhs.norm();
        right_shift_resolvent(lambda, &rhs, rel)?
    };
    let top_tail = x1.tail_bound + sup * x2.tail_bound / lambda.gap();
    Ok(BlockResolvent {
        top: TruncatedVector {
            tail_bound: top_tail,
            near_circle: lambda.near_circle(),
            ..x1
        },
        bottom: TruncatedVector {
            near_circle: lambda.near_circle(),
            ..x2
        },
    })
}

/// `‖(B − λ)x − f‖`.
pub fn block_residual(b: &BlockShiftOperator, lambda: C64, x: &BlockVector, f: &BlockVector) -> f64 {
    b.apply(x).sub(&x.scale(lambda)).sub(f).norm()
}

/// `⟨(B* − λ)^{−1} f, g⟩`, expanded as
/// `⟨A f₁, g₁⟩ + ⟨A f₂ − A R A f₁, g₂⟩` with `A = (U* − λ)^{−1}`.
pub fn adjoint_block_matrix_element(
    b: &BlockShiftOperator,
    lambda: &SpectralPoint,
    f: &BlockVector,
    g: &BlockVector,
    tol: f64,
) -> Result<C64> {
    let a1 = left_shift_resolvent(lambda, &f.top, tol)?;
    let a2 = left_shift_resolvent(lambda, &f.bottom, tol)?;
    let ra1 = b.coupling_operator().apply(&a1.vector);
    let ara1 = if ra1.is_zero() {
        FinSuppVector::zeros()
    } else {
        left_shift_resolvent(lambda, &ra1, tol)?.vector
    };
    Ok(a1.vector.inner(&g.top) + a2.vector.sub(&ara1).inner(&g.bottom))
}

/// `⟨(B − λ)^{−1} f, g⟩`.
pub fn block_matrix_element(
    b: &BlockShiftOperator,
    lambda: &SpectralPoint,
    f: &BlockVector,
    g: &BlockVector,
    tol: f64,
) -> Result<C64> {
    Ok(block_resolvent(b, lambda, f, tol)?.vector().inner(g))
}

/// Operators whose resolvent norm on a fixed vector can be evaluated.
pub trait ResolventNorm {
    type Vector;
    fn resolvent_norm(&self, z: &SpectralPoint, u: &Self::Vector, tol: f64) -> Result<f64>;
}

impl ResolventNorm for WeightedShift {
    type Vector = FinSuppVector;
    fn resolvent_norm(&self, z: &SpectralPoint, u: &FinSuppVector, tol: f64) -> Result<f64> {
        Ok(shift_resolvent(self, z, u, tol)?.vector.norm())
    }
}

impl ResolventNorm for BlockShiftOperator {
    type Vector = BlockVector;
    fn resolvent_norm(&self, z: &SpectralPoint, u: &BlockVector, tol: f64) -> Result<f64> {
        Ok(block_resolvent(self, z, u, tol)?.vector().norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub z_re: f64,
    pub z_im: f64,
    pub gap: f64,
    pub resolvent_norm: f64,
    /// `gap · ‖(T − z)^{−1}u‖`
    pub scaled: f64,
    /// `gap^{1/2} · ‖(T − z)^{−1}u‖`
    pub half_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProbe {
    /// `max_z gap · ‖(T − z)^{−1}u‖`
    pub value: f64,
    pub table: Vec<GrowthRow>,
}

impl GrowthProbe {
    /// Maximum of `scaled` over rows with the given gap (within 1e-12 relative).
    pub fn max_at_gap(&self, gap: f64) -> f64 {
        self.table
            .iter()
            .filter(|r| (r.gap - gap).abs() <= 1e-9 * gap.max(1.0))
            .map(|r| r.scaled)
            .fold(0.0, f64::max)
    }

    pub fn max_half_scaled_at_gap(&self, gap: f64) -> f64 {
        self.table
            .iter()
            .filter(|r| (r.gap - gap).abs() <= 1e-9 * gap.max(1.0))
            .map(|r| r.half_scaled)
            .fold(0.0, f64::max)
    }
}

/// Radii `r` times `angles` equally spaced angles.
pub fn radial_grid(radii: &[f64], angles: usize) -> Result<Vec<SpectralPoint>> {
    let mut out = Vec::with_capacity(radii.len() * angles);
    for &r in radii {
        for a in 0..angles {
            let theta = 2.0 * std::f64::consts::PI * (a as f64 + 0.5) / angles as f64;
            out.push(SpectralPoint::polar(r, theta)?);
        }
    }
    Ok(out)
}

/// `max_z gap(z) · ‖(T − z)^{−1}u‖` over the grid, with the full table.
pub fn resolvent_growth_probe<T: ResolventNorm + Sync>(
    t: &T,
    u: &T::Vector,
    grid: &[SpectralPoint],
    tol: f64,
) -> Result<GrowthProbe>
where
    T::Vector: Sync,
{
    use rayon::prelude::*;
    let table = grid
        .par_iter()
        .map(|z| {
            let n = t.resolvent_norm(z, u, tol)?;
            Ok(GrowthRow {
                z_re: z.z().re,
                z_im: z.z().im,
                gap: z.gap(),
                resolvent_norm: n,
                scaled: z.gap() * n,
                half_scaled: z.gap().sqrt() * n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = table.iter().map(|r| r.scaled).fold(0.0, f64::max);
    Ok(GrowthProbe { value, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::theorem1_weights;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gap_floors() {
        assert!(SpectralPoint::new(c(1.0, 0.0)).is_err());
        assert!(SpectralPoint::for_oracle(c(0.9995, 0.0)).is_err());
        let p = SpectralPoint::new(c(0.9995, 0.0)).unwrap();
        assert!(p.near_circle());
        assert_eq!(SpectralPoint::new(c(2.0, 0.0)).unwrap().region(), Region::OutsideDisk);
    }

    #[test]
    fn unit_inside_powers() {
        let z = c(0.3, 0.4);
        let p = SpectralPoint::new(z).unwrap();
        let v = shift_resolvent(&WeightedShift::unweighted(), &p, &FinSuppVector::basis(0), 1e-12).unwrap();
        assert_eq!(v.vector.lo(), 1);
        for m in 1..20 {
            assert!((v.vector.get(m) - z.powi(m as i32 - 1)).norm() < 1e-15);
        }
        for m in -5..=0 {
            assert_eq!(v.vector.get(m), c(0.0, 0.0));
        }
        assert!(v.tail_bound <= 1e-12);
    }

    #[test]
    fn unit_outside_powers() {
        let z = c(1.5, -0.7);
        let p = SpectralPoint::new(z).unwrap();
        let v = shift_resolvent(&WeightedShift::unweighted(), &p, &FinSuppVector::basis(0), 1e-12).unwrap();
        assert_eq!(v.vector.hi(), 0);
        for m in -20..=0 {
            assert!((v.vector.get(m) + z.powi(m as i32 - 1)).norm() < 1e-14);
        }
    }

    #[test]
    fn theorem1_residual() {
        let t = WeightedShift::new(theorem1_weights());
        let p = SpectralPoint::new(c(0.5, 0.0)).unwrap();
        let f = FinSuppVector::basis(0);
        let v = shift_resolvent(&t, &p, &f, 1e-12).unwrap();
        assert!(shift_residual(&t, p.z(), &v.vector, &f) <= 1e-10);
        let p = SpectralPoint::new(c(-0.2, 1.9)).unwrap();
        let f = FinSuppVector::from_real(-3, &[1.0, -2.0, 0.5, 0.0, 3.0, 1.0, 1.0]);
        let v = shift_resolvent(&t, &p, &f, 1e-12).unwrap();
        assert!(shift_residual(&t, p.z(), &v.vector, &f) <= 1e-10);
    }

    #[test]
    fn wide_support_matches_termwise_sum() {
        let t = WeightedShift::new(theorem1_weights());
        let vals: Vec<f64> = (0..400).map(|i| ((i * 37 % 11) as f64 - 5.0) / 5.0).collect();
        let wide = FinSuppVector::from_real(-150, &vals);
        for z in [c(0.6, -0.3), c(1.1, 0.8)] {
            let p = SpectralPoint::new(z).unwrap();
            let v = shift_resolvent(&t, &p, &wide, 1e-13).unwrap();
            assert!(shift_residual(&t, z, &v.vector, &wide) <= 1e-10);
            // Linearity against two narrow halves computed termwise.
            let a = wide.restricted(-150, 49);
            let b = wide.restricted(50, 249);
            let va = shift_resolvent(&t, &p, &a, 1e-14).unwrap().vector;
            let vb = shift_resolvent(&t, &p, &b, 1e-14).unwrap().vector;
            assert!(v.vector.sub(&va.add(&vb)).norm() <= 1e-10);
        }
    }

    #[test]
    fn zero_point_inside() {
        let t = WeightedShift::new(theorem1_weights());
        let p = SpectralPoint::new(c(0.0, 0.0)).unwrap();
        let f = FinSuppVector::from_real(1, &[1.0, 2.0, 3.0]);
        let v = shift_resolvent(&t, &p, &f, 1e-12).unwrap();
        assert!(shift_residual(&t, p.z(), &v.vector, &f) <= 1e-14);
    }

    #[test]
    fn harmonic_inside_has_no_tail_bound() {
        let t = WeightedShift::new(WeightSequence::harmonic(1.0));
        let p = SpectralPoint::new(c(0.5, 0.0)).unwrap();
        assert!(shift_resolvent(&t, &p, &FinSuppVector::basis(0), 1e-12).is_err());
    }

    #[test]
    fn right_shift_resolvent_residual() {
        let p = SpectralPoint::new(c(0.4, 0.1)).unwrap();
        let f = FinSuppVector::from_real(-2, &[1.0, 0.0, 2.0]);
        let v = right_shift_resolvent(&p, &f, 1e-12).unwrap().vector;
        let r = v.translated(1).axpy(-p.z(), &v).sub(&f).norm();
        assert!(r < 1e-11);
    }

    #[test]
    fn block_examples() {
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let p = SpectralPoint::new(c(0.4, 0.0)).unwrap();
        let f = BlockVector::top(FinSuppVector::basis(0));
        let x = block_resolvent(&b, &p, &f, 1e-12).unwrap();
        assert!(x.bottom.vector.is_zero());
        let direct = right_shift_resolvent(&p, &FinSuppVector::basis(0), 1e-12).unwrap();
        assert!(x.top.vector.sub(&direct.vector).norm() < 1e-15);

        let f = BlockVector::new(FinSuppVector::basis(1), FinSuppVector::basis(-2));
        let x = block_resolvent(&b, &p, &f, 1e-12).unwrap();
        assert!(block_residual(&b, p.z(), &x.vector(), &f) <= 1e-10);

        let q = SpectralPoint::new(c(-1.2, 0.9)).unwrap();
        let x = block_resolvent(&b, &q, &f, 1e-12).unwrap();
        assert!(block_residual(&b, q.z(), &x.vector(), &f) <= 1e-10);
    }

    #[test]
    fn normu_matrix_element() {
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let p = SpectralPoint::new(c(0.3, 0.2)).unwrap();
        let u2 = FinSuppVector::from_real(-1, &[0.5, 1.0, -0.25]);
        let x = block_resolvent(&b, &p, &BlockVector::bottom(u2.clone()), 1e-13).unwrap();
        let inner = right_shift_resolvent(&p, &u2, 1e-14).unwrap().vector;
        let rinner = b.coupling_operator().apply(&inner);
        let outer = right_shift_resolvent(&p, &rinner, 1e-14).unwrap().vector;
        for j in -6..6 {
            let want = -outer.get(j);
            assert!((x.top.vector.get(j) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_element_examples() {
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let zero = SpectralPoint::new(c(0.0, 0.0)).unwrap();
        let e0 = BlockVector::top(FinSuppVector::basis(0));
        let v = adjoint_block_matrix_element(&b, &zero, &e0, &e0, 1e-12).unwrap();
        assert_eq!(v, c(0.0, 0.0));

        // adjoint consistency: ⟨(B*−λ)^{−1} f, g⟩ = conj⟨(B−λ̄)^{−1} g, f⟩
        let lam = c(0.3, 0.2);
        let p = SpectralPoint::new(lam).unwrap();
        let pc = SpectralPoint::new(lam.conj()).unwrap();
        let f = BlockVector::new(FinSuppVector::from_real(-1, &[1.0, 2.0]), FinSuppVector::basis(3));
        let g = BlockVector::new(FinSuppVector::basis(2), FinSuppVector::from_real(0, &[0.5, -1.0, 1.0]));
        let lhs = adjoint_block_matrix_element(&b, &p, &f, &g, 1e-13).unwrap();
        let rhs = block_matrix_element(&b, &pc, &g, &f, 1e-13).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn growth_probe_examples() {
        let grid = radial_grid(&[0.9, 0.99, 0.999], 16).unwrap();
        let u = FinSuppVector::basis(0);
        let unit = resolvent_growth_probe(&WeightedShift::unweighted(), &u, &grid, 1e-12).unwrap();
        assert!(unit.value <= 1.0 + 1e-10);
        let t1 = resolvent_growth_probe(&WeightedShift::new(theorem1_weights()), &u, &grid, 1e-12).unwrap();
        assert!(t1.value <= 2.0 + 1e-6);
    }

    #[test]
    fn block_growth_half_scaled_increases() {
        let b = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let grid = radial_grid(&[0.9, 0.99, 0.999], 16).unwrap();
        let u = BlockVector::bottom(FinSuppVector::basis(0));
        let probe = resolvent_growth_probe(&b, &u, &grid, 1e-10).unwrap();
        let h: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&g| probe.max_half_scaled_at_gap(g))
            .collect();
        assert!(h[0] < h[1] && h[1] < h[2], "{h:?}");
    }
}

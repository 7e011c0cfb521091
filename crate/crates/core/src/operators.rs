//! Exact actions of the shift-type operators on finitely supported vectors.
//!
//! Every operation reports the window of its output; nothing is truncated at
//! this layer. Dense finite sections are produced on request for the oracle.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::oracle::DenseMatrix;
use crate::sequences::WeightSequence;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Largest half-width accepted by [`FiniteSection`] implementations.
pub const MAX_SECTION_HALF_WIDTH: usize = 4096;

/// Finitely supported vector in `ℓ²(ℤ)`, stored on the window
/// `[lo, lo + coeffs.len())`. Coefficients outside the window are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FinSuppVector {
    lo: i64,
    coeffs: Vec<C64>,
}

impl FinSuppVector {
    pub fn zeros() -> Self {
        Self::default()
    }

    /// Standard basis vector `e_j`.
    pub fn basis(j: i64) -> Self {
        Self {
            lo: j,
            coeffs: vec![ONE],
        }
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<C64>) -> Self {
        Self { lo, coeffs }
    }

    pub fn from_real(lo: i64, coeffs: &[f64]) -> Self {
        Self {
            lo,
            coeffs: coeffs.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// Window start.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Window end (inclusive); `lo − 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn window_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn get(&self, j: i64) -> C64 {
        let k = j - self.lo;
        if k >= 0 && (k as usize) < self.coeffs.len() {
            self.coeffs[k as usize]
        } else {
            ZERO
        }
    }

    /// `(index, value)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.lo + k as i64, c))
    }

    /// Smallest and largest index carrying a nonzero coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.coeffs.iter().position(|c| *c != ZERO)?;
        let last = self.coeffs.iter().rposition(|c| *c != ZERO)?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `⟨self, other⟩ = Σ self_j · conj(other_j)`.
    pub fn inner(&self, other: &Self) -> C64 {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        (lo..=hi).map(|j| self.get(j) * other.get(j).conj()).sum()
    }

    /// Grow the window (if needed) to contain `[lo, hi]`.
    pub fn ensure_window(&mut self, lo: i64, hi: i64) {
        if hi < lo {
            return;
        }
        if self.coeffs.is_empty() {
            self.lo = lo;
            self.coeffs = vec![ZERO; (hi - lo + 1) as usize];
            return;
        }
        if lo < self.lo {
            let extra = (self.lo - lo) as usize;
            let mut c = vec![ZERO; extra];
            c.append(&mut self.coeffs);
            self.coeffs = c;
            self.lo = lo;
        }
        if hi > self.hi() {
            let extra = (hi - self.hi()) as usize;
            self.coeffs.extend(std::iter::repeat_n(ZERO, extra));
        }
    }

    pub fn add_at(&mut self, j: i64, value: C64) {
        self.ensure_window(j, j);
        let k = (j - self.lo) as usize;
        self.coeffs[k] += value;
    }

    /// `self + alpha · other` on the union window.
    pub fn axpy(&self, alpha: C64, other: &Self) -> Self {
        let mut out = self.clone();
        if other.coeffs.is_empty() {
            return out;
        }
        out.ensure_window(other.lo, other.hi());
        for (j, c) in other.iter() {
            let k = (j - out.lo) as usize;
            out.coeffs[k] += alpha * c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-ONE, other)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(ONE, other)
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    /// Same coefficients, indices moved by `delta`.
    pub fn translated(&self, delta: i64) -> Self {
        Self {
            lo: self.lo + delta,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `(Jx)_m = x_{−m}`.
    pub fn reflected(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            lo: -self.hi(),
            coeffs,
        }
    }

    /// Restrict to `[lo, hi]`.
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        if hi < lo {
            return Self::zeros();
        }
        Self {
            lo,
            coeffs: (lo..=hi).map(|j| self.get(j)).collect(),
        }
    }

    /// Drop zero coefficients at both ends of the window.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            Some((a, b)) => self.restricted(a, b),
            None => Self::zeros(),
        }
    }
}

/// Element of `ℓ²(ℤ) ⊕ ℓ²(ℤ)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlockVector {
    pub top: FinSuppVector,
    pub bottom: FinSuppVector,
}

impl BlockVector {
    pub fn new(top: FinSuppVector, bottom: FinSuppVector) -> Self {
        Self { top, bottom }
    }

    pub fn top(v: FinSuppVector) -> Self {
        Self::new(v, FinSuppVector::zeros())
    }

    pub fn bottom(v: FinSuppVector) -> Self {
        Self::new(FinSuppVector::zeros(), v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.top.norm_sqr() + self.bottom.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.top.inner(&other.top) + self.bottom.inner(&other.bottom)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.top.add(&other.top), self.bottom.add(&other.bottom))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.top.sub(&other.top), self.bottom.sub(&other.bottom))
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::new(self.top.scale(alpha), self.bottom.scale(alpha))
    }

    pub fn is_zero(&self) -> bool {
        self.top.is_zero() && self.bottom.is_zero()
    }
}

/// Bilateral shift `T e_j = ρ_{j−1} e_{j−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedShift {
    weights: WeightSequence,
}

impl WeightedShift {
    pub fn new(weights: WeightSequence) -> Self {
        Self { weights }
    }

    pub fn unweighted() -> Self {
        Self::new(WeightSequence::unit())
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// `(Tu)_m = ρ_m u_{m+1}`; output window is the input window moved by −1.
    pub fn apply(&self, u: &FinSuppVector) -> FinSuppVector {
        FinSuppVector::from_coeffs(
            u.lo() - 1,
            u.iter()
                .map(|(j, c)| c * self.weights.rho(j - 1))
                .collect(),
        )
    }

    /// `T* e_j = ρ_j e_{j+1}`; output window moved by +1.
    pub fn apply_adjoint(&self, v: &FinSuppVector) -> FinSuppVector {
        FinSuppVector::from_coeffs(
            v.lo() + 1,
            v.iter().map(|(j, c)| c * self.weights.rho(j)).collect(),
        )
    }
}

/// Apply `T` to `u`.
pub fn apply_shift(t: &WeightedShift, u: &FinSuppVector) -> FinSuppVector {
    t.apply(u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiagonalKind {
    Identity,
    /// `|1 − ρ_n²|^{1/2}`
    Defect { weights: WeightSequence },
    /// `w_{2j+1} = a_j^{−1}` (`j ≥ 1`), `w_j = 1` otherwise, in the family's own indexing.
    Similarity { weights: WeightSequence },
    /// `ρ_{|n|}`
    Coupling { weights: WeightSequence },
    /// `1 − ρ_n²`
    DefectSquared { weights: WeightSequence },
}

/// Coordinatewise operator `e_j ↦ d_j e_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalOperator {
    kind: DiagonalKind,
}

impl DiagonalOperator {
    pub fn new(kind: DiagonalKind) -> Self {
        Self { kind }
    }

    pub fn identity() -> Self {
        Self::new(DiagonalKind::Identity)
    }

    pub fn kind(&self) -> &DiagonalKind {
        &self.kind
    }

    pub fn entry(&self, j: i64) -> f64 {
        match &self.kind {
            DiagonalKind::Identity => 1.0,
            DiagonalKind::Defect { weights } => {
                let r = weights.rho(j);
                (1.0 - r * r).abs().sqrt()
            }
            DiagonalKind::DefectSquared { weights } => {
                let r = weights.rho(j);
                1.0 - r * r
            }
            DiagonalKind::Coupling { weights } => weights.rho(j.abs()),
            DiagonalKind::Similarity { weights } => {
                let i = j + weights.translation();
                if i >= 3 && i % 2 != 0 {
                    // pair index (i − 1)/2 ≥ 1
                    1.0 / weights.pair_value((i - 1) / 2).expect("interleaved")
                } else {
                    1.0
                }
            }
        }
    }

    pub fn apply(&self, v: &FinSuppVector) -> FinSuppVector {
        FinSuppVector::from_coeffs(
            v.lo(),
            v.iter().map(|(j, c)| c * self.entry(j)).collect(),
        )
    }

    /// Apply the inverse; fails if an entry on the window is zero or not finite.
    pub fn apply_inverse(&self, v: &FinSuppVector) -> Result<FinSuppVector> {
        let mut out = Vec::with_capacity(v.window_len());
        for (j, c) in v.iter() {
            let d = self.entry(j);
            if d == 0.0 || !d.is_finite() || !(1.0 / d).is_finite() {
                return Err(Error::NotInvertible { index: j, entry: d });
            }
            out.push(c / d);
        }
        Ok(FinSuppVector::from_coeffs(v.lo(), out))
    }

    /// `(inf |d_j|, sup |d_j|)` over `[lo, hi]`.
    pub fn modulus_bounds(&self, lo: i64, hi: i64) -> (f64, f64) {
        (lo..=hi).fold((f64::INFINITY, 0.0f64), |(a, b), j| {
            let d = self.entry(j).abs();
            (a.min(d), b.max(d))
        })
    }
}

/// `D_T = diag{|1 − ρ_n²|^{1/2}}`.
pub fn defect_operator(t: &WeightedShift) -> DiagonalOperator {
    DiagonalOperator::new(DiagonalKind::Defect {
        weights: t.weights().clone(),
    })
}

/// Diagonal `W` with `W^{−1} T W` equal to the unweighted shift.
pub fn build_similarity(rho: &WeightSequence) -> Result<DiagonalOperator> {
    if !rho.is_interleaved() {
        return Err(Error::NotInterleaved {
            family: rho.family().name().to_string(),
        });
    }
    Ok(DiagonalOperator::new(DiagonalKind::Similarity {
        weights: rho.clone(),
    }))
}

/// `max_j ‖W^{−1} T W e_j − e_{j−1}‖` over `lo ≤ j ≤ hi`, by operator application.
pub fn conjugate_check(t: &WeightedShift, w: &DiagonalOperator, lo: i64, hi: i64) -> Result<f64> {
    if hi < lo {
        return Err(invalid("window", "empty window"));
    }
    let mut worst = 0.0f64;
    for j in lo..=hi {
        let x = w.apply(&FinSuppVector::basis(j));
        let y = t.apply(&x);
        let z = w.apply_inverse(&y)?;
        let dev = z.sub(&FinSuppVector::basis(j - 1)).norm();
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// `T = (U R; 0 U)` on `ℓ²(ℤ) ⊕ ℓ²(ℤ)` with `U e_n = e_{n+1}`, `R e_n = ρ_{|n|} e_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockShiftOperator {
    coupling: WeightSequence,
}

/// `U e_n = e_{n+1}`.
pub fn right_shift(u: &FinSuppVector) -> FinSuppVector {
    u.translated(1)
}

/// `U* e_n = e_{n−1}`.
pub fn left_shift(u: &FinSuppVector) -> FinSuppVector {
    u.translated(-1)
}

impl BlockShiftOperator {
    pub fn new(coupling: WeightSequence) -> Self {
        Self { coupling }
    }

    pub fn coupling(&self) -> &WeightSequence {
        &self.coupling
    }

    pub fn coupling_operator(&self) -> DiagonalOperator {
        DiagonalOperator::new(DiagonalKind::Coupling {
            weights: self.coupling.clone(),
        })
    }

    /// `(U u₁ + R u₂, U u₂)`.
    pub fn apply(&self, u: &BlockVector) -> BlockVector {
        let r = self.coupling_operator();
        BlockVector::new(
            right_shift(&u.top).add(&r.apply(&u.bottom)),
            right_shift(&u.bottom),
        )
    }

    /// `T* = (U* 0; R U*)`: `(U* v₁, R v₁ + U* v₂)`.
    pub fn apply_adjoint(&self, v: &BlockVector) -> BlockVector {
        let r = self.coupling_operator();
        BlockVector::new(
            left_shift(&v.top),
            r.apply(&v.top).add(&left_shift(&v.bottom)),
        )
    }
}

pub fn block_apply(b: &BlockShiftOperator, u: &BlockVector) -> BlockVector {
    b.apply(u)
}

/// `T₀ = diag(U, U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitaryPair;

impl UnitaryPair {
    pub fn apply(&self, u: &BlockVector) -> BlockVector {
        BlockVector::new(right_shift(&u.top), right_shift(&u.bottom))
    }
}

/// `S = T − T₀`, whose only nonzero block is `R` in position (1, 2).
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    coupling: DiagonalOperator,
}

impl Perturbation {
    pub fn apply(&self, u: &BlockVector) -> BlockVector {
        BlockVector::new(self.coupling.apply(&u.bottom), FinSuppVector::zeros())
    }

    pub fn coupling(&self) -> &DiagonalOperator {
        &self.coupling
    }
}

pub fn perturbation_part(b: &BlockShiftOperator) -> (UnitaryPair, Perturbation) {
    (
        UnitaryPair,
        Perturbation {
            coupling: b.coupling_operator(),
        },
    )
}

/// How the bi-infinite operator is closed at the section edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Orthogonal compression `P A P`.
    Compression,
    /// Indices wrap modulo `2N + 1`; shift-type operators become cyclic.
    Periodic,
}

/// Dense materialization on the coordinates `|j| ≤ N`.
pub trait FiniteSection {
    fn section(&self, half_width: usize, boundary: Boundary) -> Result<DenseMatrix>;
}

fn guard(half_width: usize) -> Result<usize> {
    if half_width < 1 {
        return Err(invalid("N", "half-width must be at least 1"));
    }
    if half_width > MAX_SECTION_HALF_WIDTH {
        return Err(Error::ResourceGuard {
            requested: half_width,
            max: MAX_SECTION_HALF_WIDTH,
        });
    }
    Ok(2 * half_width + 1)
}

/// Row/column of coordinate `j` in a single block, applying the boundary rule.
fn slot(j: i64, n: i64, boundary: Boundary) -> Option<usize> {
    let dim = 2 * n + 1;
    match boundary {
        Boundary::Compression => (j.abs() <= n).then(|| (j + n) as usize),
        Boundary::Periodic => Some((j + n).rem_euclid(dim) as usize),
    }
}

impl FiniteSection for WeightedShift {
    fn section(&self, half_width: usize, boundary: Boundary) -> Result<DenseMatrix> {
        let dim = guard(half_width)?;
        let n = half_width as i64;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for j in -n..=n {
            if let Some(row) = slot(j - 1, n, boundary) {
                m[(row, (j + n) as usize)] = C64::new(self.weights.rho(j - 1), 0.0);
            }
        }
        Ok(DenseMatrix::new(m, half_width, 1, format!("weighted-shift[{}]", self.weights.family().name())))
    }
}

impl FiniteSection for DiagonalOperator {
    fn section(&self, half_width: usize, _boundary: Boundary) -> Result<DenseMatrix> {
        let dim = guard(half_width)?;
        let n = half_width as i64;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for j in -n..=n {
            let k = (j + n) as usize;
            m[(k, k)] = C64::new(self.entry(j), 0.0);
        }
        Ok(DenseMatrix::new(m, half_width, 1, "diagonal".to_string()))
    }
}

fn block_section(
    half_width: usize,
    boundary: Boundary,
    with_unitary: bool,
    coupling: &DiagonalOperator,
    label: &str,
) -> Result<DenseMatrix> {
    let dim = guard(half_width)?;
    let n = half_width as i64;
    let mut m = DMatrix::from_element(2 * dim, 2 * dim, ZERO);
    for j in -n..=n {
        let col = (j + n) as usize;
        if with_unitary {
            if let Some(row) = slot(j + 1, n, boundary) {
                m[(row, col)] = ONE;
                m[(dim + row, dim + col)] = ONE;
            }
        }
        m[(col, dim + col)] = C64::new(coupling.entry(j), 0.0);
    }
    Ok(DenseMatrix::new(m, half_width, 2, label.to_string()))
}

impl FiniteSection for BlockShiftOperator {
    fn section(&self, half_width: usize, boundary: Boundary) -> Result<DenseMatrix> {
        block_section(half_width, boundary, true, &self.coupling_operator(), "block-shift")
    }
}

impl FiniteSection for Perturbation {
    fn section(&self, half_width: usize, boundary: Boundary) -> Result<DenseMatrix> {
        block_section(half_width, boundary, false, &self.coupling, "perturbation")
    }
}

/// Compression of `op` to `|j| ≤ N`.
pub fn finite_section<T: FiniteSection + ?Sized>(op: &T, half_width: usize) -> Result<DenseMatrix> {
    op.section(half_width, Boundary::Compression)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::theorem1_weights;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn unweighted_shift_moves_basis_down() {
        let t = WeightedShift::unweighted();
        let out = t.apply(&FinSuppVector::basis(5));
        assert_eq!(out.trimmed(), FinSuppVector::basis(4));
    }

    #[test]
    fn theorem1_shift_examples() {
        let t = WeightedShift::new(theorem1_weights());
        let out = t.apply(&FinSuppVector::basis(3));
        assert_eq!(out.get(2), c(0.5));
        assert_eq!(out.lo(), 2);
        let u = FinSuppVector::from_real(0, &[1.0, 1.0]);
        let out = t.apply(&u);
        assert_eq!((out.lo(), out.hi()), (-1, 0));
        assert_eq!(out.get(-1), c(1.0));
        assert_eq!(out.get(0), c(1.0));
    }

    #[test]
    fn defect_entries() {
        assert_eq!(defect_operator(&WeightedShift::unweighted()).entry(17), 0.0);
        let d = defect_operator(&WeightedShift::new(theorem1_weights()));
        assert!((d.entry(2) - 0.75f64.sqrt()).abs() < 1e-15);
        let h = defect_operator(&WeightedShift::new(WeightSequence::harmonic(1.0)));
        assert!((h.entry(1) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn similarity_entries_and_conjugation() {
        let rho = theorem1_weights();
        let w = build_similarity(&rho).unwrap();
        assert_eq!(w.entry(3), 2.0);
        assert_eq!(w.entry(0), 1.0);
        assert_eq!(w.entry(4), 1.0);
        let t = WeightedShift::new(rho);
        assert!(conjugate_check(&t, &w, -100, 100).unwrap() <= 1e-12);
        let wrong = DiagonalOperator::identity();
        assert!(conjugate_check(&t, &wrong, -100, 100).unwrap() >= 0.5 - 1e-12);
        let unit = WeightedShift::unweighted();
        assert_eq!(conjugate_check(&unit, &DiagonalOperator::identity(), -50, 50).unwrap(), 0.0);
        assert!(build_similarity(&WeightSequence::harmonic(1.0)).is_err());
    }

    #[test]
    fn block_examples() {
        let h = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let out = h.apply(&BlockVector::top(FinSuppVector::basis(0)));
        assert_eq!(out.top.trimmed(), FinSuppVector::basis(1));
        assert!(out.bottom.is_zero());
        let out = h.apply(&BlockVector::bottom(FinSuppVector::basis(0)));
        assert_eq!(out.top.trimmed(), FinSuppVector::basis(0));
        assert_eq!(out.bottom.trimmed(), FinSuppVector::basis(1));
        let out = h.apply(&BlockVector::bottom(FinSuppVector::basis(3)));
        assert_eq!(out.top.get(3), c(0.25));
        assert_eq!(out.bottom.trimmed(), FinSuppVector::basis(4));
    }

    #[test]
    fn perturbation_examples() {
        let h = BlockShiftOperator::new(WeightSequence::harmonic(1.0));
        let (t0, s) = perturbation_part(&h);
        let both = BlockVector::new(FinSuppVector::basis(0), FinSuppVector::basis(0));
        let out = t0.apply(&both);
        assert_eq!(out.top, FinSuppVector::basis(1));
        assert_eq!(out.bottom, FinSuppVector::basis(1));
        let out = s.apply(&BlockVector::bottom(FinSuppVector::basis(2)));
        assert!((out.top.get(2) - c(1.0 / 3.0)).norm() < 1e-16);
        for n in -5..=5 {
            let out = s.apply(&BlockVector::new(FinSuppVector::basis(0), FinSuppVector::basis(n)));
            assert_eq!(out.top.get(n), c(h.coupling().rho(n.abs())));
            assert!(out.bottom.is_zero());
        }
    }

    #[test]
    fn sections() {
        let m = finite_section(&WeightedShift::unweighted(), 1).unwrap();
        assert_eq!(m.dim(), 3);
        for r in -1..=1i64 {
            for cc in -1..=1i64 {
                let want = if r == cc - 1 { 1.0 } else { 0.0 };
                assert_eq!(m.at(r, cc), c(want));
            }
        }
        let m = finite_section(&WeightedShift::new(theorem1_weights()), 2).unwrap();
        assert_eq!(m.at(1, 2), c(1.0));
        let d = defect_operator(&WeightedShift::new(theorem1_weights()));
        let m = finite_section(&d, 6).unwrap();
        for j in -6..=6 {
            assert_eq!(m.at(j, j).re, d.entry(j));
        }
        assert!(matches!(
            finite_section(&WeightedShift::unweighted(), 5000),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn periodic_section_wraps() {
        let m = WeightedShift::unweighted().section(2, Boundary::Periodic).unwrap();
        assert_eq!(m.at(2, -2), c(1.0));
        let b = BlockShiftOperator::new(WeightSequence::unit()).section(2, Boundary::Periodic).unwrap();
        assert_eq!(b.matrix()[(0, 4)], c(1.0));
    }

    #[test]
    fn reflection_conjugates_shifts() {
        let u = FinSuppVector::from_real(-2, &[1.0, 2.0, 3.0, 4.0]);
        let lhs = right_shift(&u);
        let rhs = left_shift(&u.reflected()).reflected();
        assert_eq!(lhs, rhs);
    }
}

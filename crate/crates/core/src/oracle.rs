//! Brute-force dense linear algebra used to cross-check the closed forms.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operators::{BlockShiftOperator, BlockVector, Boundary, FinSuppVector, FiniteSection, WeightedShift};
use crate::resolvent::{block_resolvent, shift_resolvent, SpectralPoint, ORACLE_GAP_FLOOR};
use crate::series::{fit_line, LineFit};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A dense section of an operator on `|j| ≤ N`, one or two blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    matrix: DMatrix<C64>,
    half_width: usize,
    blocks: usize,
    provenance: String,
}

impl DenseMatrix {
    pub fn new(matrix: DMatrix<C64>, half_width: usize, blocks: usize, provenance: String) -> Self {
        debug_assert_eq!(matrix.nrows(), blocks * (2 * half_width + 1));
        debug_assert!(matrix.is_square());
        Self {
            matrix,
            half_width,
            blocks,
            provenance,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Row/column index of coordinate `j` in `block` (0-based).
    pub fn index(&self, block: usize, j: i64) -> usize {
        block * (2 * self.half_width + 1) + (j + self.half_width as i64) as usize
    }

    /// Entry `(e_row, e_col)` of the first block.
    pub fn at(&self, row: i64, col: i64) -> C64 {
        self.matrix[(self.index(0, row), self.index(0, col))]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            half_width: self.half_width,
            blocks: self.blocks,
            provenance: format!("({})*", self.provenance),
        }
    }
}

/// Vectors that can be laid out on a dense section.
pub trait SectionVector: Sized {
    const BLOCKS: usize;
    fn coordinate(&self, block: usize, j: i64) -> C64;
    /// `max |j|` over the support, if nonzero.
    fn support_radius(&self) -> Option<i64>;

    fn to_dense(&self, half_width: usize) -> DVector<C64> {
        let n = half_width as i64;
        let dim = 2 * half_width + 1;
        DVector::from_fn(Self::BLOCKS * dim, |i, _| {
            let b = i / dim;
            let j = (i % dim) as i64 - n;
            self.coordinate(b, j)
        })
    }
}

impl SectionVector for FinSuppVector {
    const BLOCKS: usize = 1;
    fn coordinate(&self, _block: usize, j: i64) -> C64 {
        self.get(j)
    }
    fn support_radius(&self) -> Option<i64> {
        self.support().map(|(a, b)| a.abs().max(b.abs()))
    }
}

impl SectionVector for BlockVector {
    const BLOCKS: usize = 2;
    fn coordinate(&self, block: usize, j: i64) -> C64 {
        if block == 0 {
            self.top.get(j)
        } else {
            self.bottom.get(j)
        }
    }
    fn support_radius(&self) -> Option<i64> {
        match (self.top.support_radius(), self.bottom.support_radius()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Operators with both a dense section and a closed-form resolvent.
pub trait ResolventOracle: FiniteSection {
    type Vector: SectionVector;
    fn closed_form(&self, z: &SpectralPoint, f: &Self::Vector, tol: f64) -> Result<Self::Vector>;
}

impl ResolventOracle for WeightedShift {
    type Vector = FinSuppVector;
    fn closed_form(&self, z: &SpectralPoint, f: &FinSuppVector, tol: f64) -> Result<FinSuppVector> {
        Ok(shift_resolvent(self, z, f, tol)?.vector)
    }
}

impl ResolventOracle for BlockShiftOperator {
    type Vector = BlockVector;
    fn closed_form(&self, z: &SpectralPoint, f: &BlockVector, tol: f64) -> Result<BlockVector> {
        Ok(block_resolvent(self, z, f, tol)?.vector())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseCheck {
    /// `max |x_j − v_j| / max |v_j|` over interior coordinates.
    pub relative_error: f64,
    /// Smallest over largest modulus of the LU pivots.
    pub pivot_ratio: f64,
}

/// Solve `(A − λ) x = b` by LU, rejecting numerically singular systems.
pub fn dense_solve(a: &DMatrix<C64>, lambda: C64, b: &DVector<C64>) -> Result<(DVector<C64>, f64)> {
    let n = a.nrows();
    let shifted = a - DMatrix::<C64>::identity(n, n) * lambda;
    let lu = shifted.lu();
    let u = lu.u();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let d = u[(i, i)].norm();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(ratio > 1e3 * f64::EPSILON) {
        return Err(Error::SingularSolve { pivot_ratio: ratio });
    }
    let x = lu.solve(b).ok_or(Error::SingularSolve { pivot_ratio: ratio })?;
    Ok((x, ratio))
}

/// Compare the closed-form resolvent with a dense solve on the periodic
/// section of half-width `N`, on coordinates at distance at least `margin`
/// from the section edge.
pub fn dense_resolvent_check<T: ResolventOracle>(
    op: &T,
    lambda: &SpectralPoint,
    f: &T::Vector,
    half_width: usize,
    margin: usize,
) -> Result<DenseCheck> {
    if lambda.gap() < ORACLE_GAP_FLOOR {
        return Err(Error::GapTooSmall {
            gap: lambda.gap(),
            floor: ORACLE_GAP_FLOOR,
        });
    }
    if margin >= half_width {
        return Err(invalid("B", "interior margin must be smaller than N"));
    }
    let interior = (half_width - margin) as i64;
    if let Some(r) = f.support_radius() {
        if r > interior {
            return Err(Error::SupportViolation(format!(
                "support radius {r} exceeds interior radius {interior}"
            )));
        }
    }
    let section = op.section(half_width, Boundary::Periodic)?;
    let b = f.to_dense(half_width);
    let (x, pivot_ratio) = dense_solve(section.matrix(), lambda.z(), &b)?;
    let v = op.closed_form(lambda, f, 1e-15)?;
    let mut scale = 0.0f64;
    let mut err = 0.0f64;
    for block in 0..T::Vector::BLOCKS {
        for j in -interior..=interior {
            let want = v.coordinate(block, j);
            let got = x[section.index(block, j)];
            scale = scale.max(want.norm());
            err = err.max((got - want).norm());
        }
    }
    let relative_error = if scale > 0.0 { err / scale } else { err };
    Ok(DenseCheck {
        relative_error,
        pivot_ratio,
    })
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.matrix().clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Max deviation between the section's singular values and an analytic
/// multiset (both sorted decreasingly; the shorter list is padded with zeros).
pub fn dense_svd_check(m: &DenseMatrix, analytic: &[f64]) -> Result<f64> {
    if m.half_width() > crate::operators::MAX_SECTION_HALF_WIDTH {
        return Err(Error::ResourceGuard {
            requested: m.half_width(),
            max: crate::operators::MAX_SECTION_HALF_WIDTH,
        });
    }
    let s = singular_values(m);
    let mut a: Vec<f64> = analytic.iter().map(|x| x.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    let len = s.len().max(a.len());
    Ok((0..len)
        .map(|i| (s.get(i).copied().unwrap_or(0.0) - a.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max))
}

/// `L = A + iV` with `A = A*` and `V ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipativeTestOperator {
    a: DMatrix<C64>,
    v: DMatrix<C64>,
    v_sqrt: DMatrix<C64>,
}

impl DissipativeTestOperator {
    pub fn new(a: DMatrix<C64>, v: DMatrix<C64>) -> Result<Self> {
        if !a.is_square() || a.shape() != v.shape() {
            return Err(invalid("L", "A and V must be square of equal size"));
        }
        if a != a.adjoint() {
            return Err(invalid("A", "not Hermitian"));
        }
        let v_h = (&v + v.adjoint()) * C64::new(0.5, 0.0);
        let eig = v_h.clone().symmetric_eigen();
        let floor = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if floor < -1e-12 {
            return Err(invalid("V", format!("eigenvalue {floor:e} below −1e-12")));
        }
        let roots = eig.eigenvalues.map(|x| C64::new(x.max(0.0).sqrt(), 0.0));
        let q = &eig.eigenvectors;
        let v_sqrt = q * DMatrix::from_diagonal(&roots) * q.adjoint();
        Ok(Self { a, v: v_h, v_sqrt })
    }

    /// `A = (M + M*)/2`, `V = G*G`, entries standard complex normal.
    pub fn random(dim: usize, seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut draw = || -> C64 {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im) / std::f64::consts::SQRT_2
        };
        let m = DMatrix::from_fn(dim, dim, |_, _| draw());
        let g = DMatrix::from_fn(dim, dim, |_, _| draw());
        let a = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let v = g.adjoint() * &g;
        Self::new(a, v).expect("constructed dissipative operator is valid")
    }

    pub fn zero(dim: usize) -> Self {
        let z = DMatrix::from_element(dim, dim, ZERO);
        Self::new(z.clone(), z).expect("zero operator is valid")
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn v(&self) -> &DMatrix<C64> {
        &self.v
    }

    pub fn v_sqrt(&self) -> &DMatrix<C64> {
        &self.v_sqrt
    }

    pub fn l(&self) -> DMatrix<C64> {
        &self.a + &self.v * C64::new(0.0, 1.0)
    }
}

/// Deterministic standard complex normal vector for a trial.
pub fn random_vector(dim: usize, seed: u64, trial: u64) -> DVector<C64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    rng.set_stream(trial);
    DVector::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    })
}

/// `|LHS − RHS| / (1 + |RHS|)` for
/// `‖V^{1/2}(L−λ)^{−1}u‖² = ε‖(L−λ)^{−1}u‖² − Im⟨(L−λ)^{−1}u, u⟩`, `ε = Im λ`.
pub fn dissipative_identity_check(d: &DissipativeTestOperator, u: &DVector<C64>, lambda: C64) -> Result<f64> {
    if !(lambda.im > 0.0) {
        return Err(invalid("lambda", "must lie in the upper half-plane"));
    }
    if u.iter().all(|c| *c == ZERO) {
        return Ok(0.0);
    }
    let (x, _) = dense_solve(&d.l(), lambda, u)?;
    let lhs = (d.v_sqrt() * &x).norm_squared();
    let f_uu = u.dotc(&x); // Σ x_i conj(u_i) = ⟨x, u⟩
    let rhs = lambda.im * x.norm_squared() - f_uu.im;
    Ok((lhs - rhs).abs() / (1.0 + rhs.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Fit of `ln deviation` against `ln |τ|`; absent when any deviation is 0.
    pub fit: Option<LineFit>,
}

/// `‖iτ(L + iτ)^{−1}u − u‖` along the schedule.
pub fn strong_convergence_probe(
    d: &DissipativeTestOperator,
    u: &DVector<C64>,
    taus: &[f64],
) -> Result<ConvergenceTable> {
    let l = d.l();
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        if tau == 0.0 {
            return Err(invalid("tau", "schedule must avoid 0"));
        }
        let itau = C64::new(0.0, tau);
        let (x, _) = dense_solve(&l, -itau, u)?;
        let deviation = (x * itau - u).norm();
        rows.push(ConvergenceRow { tau, deviation });
    }
    let fit = if rows.len() >= 2 && rows.iter().all(|r| r.deviation > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|r| r.tau.abs().ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.deviation.ln()).collect();
        fit_line(&xs, &ys)
    } else {
        None
    };
    Ok(ConvergenceTable { rows, fit })
}

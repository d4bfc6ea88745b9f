//! Rank norms `rk(g - I)` on matrix groups, and the projections that drop
//! one dimension: upper-left block for invertible upper-triangular
//! matrices, leading principal block for positive definite matrices, and
//! `g ↦ R_{g e_n} g` for special orthogonal matrices.
//!
//! Rational inputs get an exact rank by fraction-free elimination. For
//! orthogonal inputs the rank counts singular values of `g - I` above a
//! relative threshold, and each value carries margin statistics so that
//! near-threshold cases are visible instead of rounded away.

mod float;
mod rational;

pub use float::{elementary_rotation, planar_rotation, FloatMatrix, ORTHOGONALITY_TOLERANCE};
pub use rational::RationalMatrix;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::LemmaAudit;
use crate::permgroup::{dense, Permutation};

/// Default relative singular-value threshold.
pub const DEFAULT_TAU: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatNormError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not upper triangular")]
    NotTriangular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("vector has norm {0}, expected 1")]
    NotUnit(f64),
    #[error("orthogonality defect {0} exceeds tolerance")]
    NotOrthogonal(f64),
    #[error("determinant {0} is not positive")]
    NotSpecial(f64),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("empty matrix has no projection")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    ExactElimination,
    SingularThreshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankNormValue {
    pub value: usize,
    pub method: RankMethod,
    /// Effective absolute threshold `τ·max(1, σ_max)`; numeric only.
    pub threshold: Option<f64>,
    pub min_retained: Option<f64>,
    pub max_dropped: Option<f64>,
    /// Some singular value lies within a factor 10 of the threshold.
    pub borderline: bool,
}

impl RankNormValue {
    fn exact(value: usize) -> Self {
        Self {
            value,
            method: RankMethod::ExactElimination,
            threshold: None,
            min_retained: None,
            max_dropped: None,
            borderline: false,
        }
    }
}

pub fn rank_norm_exact(g: &RationalMatrix) -> Result<RankNormValue, MatNormError> {
    if g.rank() < g.dim() {
        return Err(MatNormError::Singular);
    }
    Ok(RankNormValue::exact(g.minus_identity().rank()))
}

pub fn rank_norm_numeric(g: &FloatMatrix, tau: f64) -> RankNormValue {
    let s = g.displacement_singular_values();
    let threshold = tau * s.first().copied().unwrap_or(0.0).max(1.0);
    let (kept, dropped): (Vec<f64>, Vec<f64>) = s.iter().partition(|&&v| v > threshold);
    let borderline = s.iter().any(|&v| v >= threshold / 10.0 && v <= threshold * 10.0);
    RankNormValue {
        value: kept.len(),
        method: RankMethod::SingularThreshold,
        threshold: Some(threshold),
        min_retained: kept.last().copied(),
        max_dropped: dropped.first().copied(),
        borderline,
    }
}

/// Upper-left `(n-1)` block of an invertible upper-triangular matrix.
pub fn triangular_project(g: &RationalMatrix) -> Result<RationalMatrix, MatNormError> {
    let n = g.dim();
    if n == 0 {
        return Err(MatNormError::Empty);
    }
    if !g.is_upper_triangular() {
        return Err(MatNormError::NotTriangular);
    }
    if (0..n).any(|i| g.get(i, i).is_zero()) {
        return Err(MatNormError::Singular);
    }
    Ok(g.leading_block(n - 1))
}

/// Leading `(n-1)` principal block of a symmetric positive definite matrix.
pub fn spd_project(a: &RationalMatrix) -> Result<RationalMatrix, MatNormError> {
    let n = a.dim();
    if n == 0 {
        return Err(MatNormError::Empty);
    }
    if !a.is_symmetric() {
        return Err(MatNormError::NotSymmetric);
    }
    if !a.leading_minors_positive() {
        return Err(MatNormError::NotPositiveDefinite);
    }
    Ok(a.leading_block(n - 1))
}

/// `R_{g e_n} g` restricted to the first `n-1` coordinates.
pub fn so_project(g: &FloatMatrix) -> Result<FloatMatrix, MatNormError> {
    let n = g.dim();
    if n == 0 {
        return Err(MatNormError::Empty);
    }
    g.check_special_orthogonal()?;
    let column: Vec<f64> = g.as_dmatrix().column(n - 1).iter().copied().collect();
    // the column is unit only up to the orthogonality tolerance
    let norm = column.iter().map(|v| v * v).sum::<f64>().sqrt();
    let column: Vec<f64> = column.iter().map(|v| v / norm).collect();
    let full = elementary_rotation(&column, n)?.mul(g)?;
    Ok(full.leading_block(n - 1))
}

/// Whether the numeric rank norm of an element of `SO(n)` is even.
pub fn verify_rank_parity(g: &FloatMatrix, tau: f64) -> Result<bool, MatNormError> {
    g.check_special_orthogonal()?;
    Ok(rank_norm_numeric(g, tau).value.is_multiple_of(2))
}

// ---------------------------------------------------------------------------
// Random instances

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let p: i64 = rng.random_range(-3..=3);
    let q: i64 = rng.random_range(1..=3);
    BigRational::new(p.into(), q.into())
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    let (p, q) = *[(1, 1), (-1, 1), (2, 1), (1, 2), (3, 1), (-2, 3)].choose(rng).expect("nonempty");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Invertible upper-triangular matrix with small rational entries.
pub fn random_upper_triangular<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    let unipotent = rng.random_bool(0.5);
    let mut m = RationalMatrix::identity(n);
    for i in 0..n {
        if !unipotent {
            m.set(i, i, nonzero_rational(rng));
        }
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                m.set(i, j, small_rational(rng));
            }
        }
    }
    m
}

/// A pair in `B_n`; the second is often a small perturbation of the first so
/// that `gh⁻¹` has low rank norm.
pub fn random_triangular_pair<R: Rng>(n: usize, rng: &mut R) -> (RationalMatrix, RationalMatrix) {
    let g = random_upper_triangular(n, rng);
    let h = match rng.random_range(0..4) {
        0 => random_upper_triangular(n, rng),
        1 => {
            // I + E with E strictly upper and living in one or two columns
            let mut e = RationalMatrix::identity(n);
            for _ in 0..rng.random_range(1..=2) {
                let col = rng.random_range(0..n);
                for row in 0..col {
                    if rng.random_bool(0.6) {
                        e.set(row, col, small_rational(rng));
                    }
                }
            }
            g.mul(&e).expect("same dimension")
        }
        2 => {
            let mut d = RationalMatrix::identity(n);
            d.set(n - 1, n - 1, nonzero_rational(rng));
            g.mul(&d).expect("same dimension")
        }
        _ => g.clone(),
    };
    (g, h)
}

fn integer_matrix<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect()).collect()
}

fn gram_plus_identity(m: &[Vec<i64>]) -> RationalMatrix {
    let n = m.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| m[k][i] * m[k][j]).sum::<i64>() + i64::from(i == j)).collect())
        .collect();
    RationalMatrix::from_integers(&rows).expect("square")
}

/// A pair `MᵀM + I`, `NᵀN + I` with `N` related to `M` in one of several ways.
pub fn random_spd_pair<R: Rng>(n: usize, rng: &mut R) -> (RationalMatrix, RationalMatrix) {
    let m = integer_matrix(n, rng);
    let a = gram_plus_identity(&m);
    let b = match rng.random_range(0..4) {
        0 => gram_plus_identity(&integer_matrix(n, rng)),
        1 => {
            let v: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
            let mut b = a.clone();
            for i in 0..n {
                for j in 0..n {
                    let x = b.get(i, j) + BigRational::from_integer((v[i] * v[j]).into());
                    b.set(i, j, x);
                }
            }
            b
        }
        2 => {
            let mut m2 = m.clone();
            let row = rng.random_range(0..n);
            m2[row] = (0..n).map(|_| rng.random_range(-2..=2)).collect();
            gram_plus_identity(&m2)
        }
        _ => {
            let mut m2 = m.clone();
            for row in m2.iter_mut() {
                row[n - 1] = rng.random_range(-2..=2);
            }
            gram_plus_identity(&m2)
        }
    };
    (a, b)
}

/// Orthogonalised Gaussian matrix with its determinant forced to `+1`.
pub fn random_special_orthogonal<R: Rng>(n: usize, rng: &mut R) -> FloatMatrix {
    let gauss = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = gauss.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    FloatMatrix::from_dmatrix(q).expect("square")
}

fn random_plane_rotation<R: Rng>(n: usize, rng: &mut R) -> FloatMatrix {
    let frame = random_special_orthogonal(n, rng);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let rot = planar_rotation(n, 0, 1, theta);
    frame.mul(&rot).and_then(|m| m.mul(&frame.transpose())).expect("same dimension")
}

/// A pair in `SO(n)`. Besides independent pairs this produces pairs that
/// differ by one plane rotation, pairs sharing their last column, and
/// elements sending `e_n` to `-e_n` or fixing it.
pub fn random_so_pair<R: Rng>(n: usize, rng: &mut R) -> (FloatMatrix, FloatMatrix) {
    let block = |rng: &mut R| random_special_orthogonal(n - 1, rng).pad_identity(n);
    match rng.random_range(0..5) {
        0 => (random_special_orthogonal(n, rng), random_special_orthogonal(n, rng)),
        1 => {
            let g = random_special_orthogonal(n, rng);
            let h = g.mul(&random_plane_rotation(n, rng)).expect("same dimension");
            (g, h)
        }
        2 => {
            let g = random_special_orthogonal(n, rng);
            let h = g.mul(&block(rng)).expect("same dimension");
            (g, h)
        }
        3 => {
            let flip = planar_rotation(n, n - 2, n - 1, std::f64::consts::PI);
            let g = flip.mul(&block(rng)).expect("same dimension");
            let h = g.mul(&random_plane_rotation(n, rng)).expect("same dimension");
            (g, h)
        }
        _ => {
            let g = block(rng);
            let h = random_plane_rotation(n, rng).mul(&g).expect("same dimension");
            (g, h)
        }
    }
}

// ---------------------------------------------------------------------------
// Verifiers

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularReport {
    pub n: usize,
    pub homomorphism: LemmaAudit,
    pub rank_drop: LemmaAudit,
    pub non_expansive: LemmaAudit,
}

impl TriangularReport {
    pub fn audits(&self) -> [&LemmaAudit; 3] {
        [&self.homomorphism, &self.rank_drop, &self.non_expansive]
    }

    pub fn passed(&self) -> bool {
        self.audits().iter().all(|a| a.passed())
    }
}

pub fn verify_triangular<R: Rng>(n: usize, pairs: usize, rng: &mut R) -> Result<TriangularReport, MatNormError> {
    let mut report = TriangularReport {
        n,
        homomorphism: LemmaAudit::new("triangular-homomorphism", "p(gh) = p(g)p(h)", 0.0),
        rank_drop: LemmaAudit::new("triangular-rank-drop", "rk(p(g)g⁻¹ - I) <= 1", 1.0),
        non_expansive: LemmaAudit::new("triangular-non-expansive", "rk(p(g)p(h)⁻¹ - I) - rk(gh⁻¹ - I) <= 0", 0.0),
    };
    for _ in 0..pairs {
        let (g, h) = random_triangular_pair(n, rng);
        let (pg, ph) = (triangular_project(&g)?, triangular_project(&h)?);
        let gh = g.mul(&h)?;
        report.homomorphism.observe_holds(triangular_project(&gh)? == pg.mul(&ph)?, || format!("g={g:?} h={h:?}"));
        let drop = rank_norm_exact(&pg.pad_identity(n).mul(&g.inverse()?)?)?.value;
        report.rank_drop.observe(drop as f64, || format!("g={g:?}"));
        let lhs = rank_norm_exact(&pg.mul(&ph.inverse()?)?)?.value;
        let rhs = rank_norm_exact(&g.mul(&h.inverse()?)?)?.value;
        report.non_expansive.observe(lhs as f64 - rhs as f64, || format!("g={g:?} h={h:?}"));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdReport {
    pub n: usize,
    pub positive_definite: LemmaAudit,
    pub rank_drop: LemmaAudit,
    pub non_expansive: LemmaAudit,
}

impl SpdReport {
    pub fn audits(&self) -> [&LemmaAudit; 3] {
        [&self.positive_definite, &self.rank_drop, &self.non_expansive]
    }

    pub fn passed(&self) -> bool {
        self.audits().iter().all(|a| a.passed())
    }
}

pub fn verify_spd<R: Rng>(n: usize, pairs: usize, rng: &mut R) -> Result<SpdReport, MatNormError> {
    let mut report = SpdReport {
        n,
        positive_definite: LemmaAudit::new("spd-preserved", "p(A) positive definite", 0.0),
        rank_drop: LemmaAudit::new("spd-rank-drop", "rk(diag(p(A), 1)A⁻¹ - I) <= 2", 2.0),
        non_expansive: LemmaAudit::new("spd-non-expansive", "rk(p(A) - p(B)) - rk(A - B) <= 0", 0.0),
    };
    for _ in 0..pairs {
        let (a, b) = random_spd_pair(n, rng);
        let (pa, pb) = (spd_project(&a)?, spd_project(&b)?);
        report
            .positive_definite
            .observe_holds(pa.is_symmetric() && pa.leading_minors_positive(), || format!("A={a:?}"));
        // rk(X A⁻¹ - I) = rk(X - A) since A is invertible
        let drop = pa.pad_identity(n).sub(&a)?.rank();
        report.rank_drop.observe(drop as f64, || format!("A={a:?}"));
        let lhs = pa.sub(&pb)?.rank();
        let rhs = a.sub(&b)?.rank();
        report.non_expansive.observe(lhs as f64 - rhs as f64, || format!("A={a:?} B={b:?}"));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoReport {
    pub n: usize,
    pub tau: f64,
    pub parity: LemmaAudit,
    pub rank_drop: LemmaAudit,
    pub non_expansive: LemmaAudit,
    /// Rank evaluations with a singular value within 10× of the threshold.
    pub borderline: u64,
    pub min_retained: Option<f64>,
    pub max_dropped: Option<f64>,
}

impl SoReport {
    pub fn audits(&self) -> [&LemmaAudit; 3] {
        [&self.parity, &self.rank_drop, &self.non_expansive]
    }

    pub fn passed(&self) -> bool {
        self.audits().iter().all(|a| a.passed()) && self.borderline == 0
    }

    fn rank(&mut self, g: &FloatMatrix) -> usize {
        let v = rank_norm_numeric(g, self.tau);
        self.borderline += u64::from(v.borderline);
        if let Some(s) = v.min_retained {
            self.min_retained = Some(self.min_retained.map_or(s, |m| m.min(s)));
        }
        if let Some(s) = v.max_dropped {
            self.max_dropped = Some(self.max_dropped.map_or(s, |m| m.max(s)));
        }
        v.value
    }
}

pub fn verify_so<R: Rng>(n: usize, pairs: usize, tau: f64, rng: &mut R) -> Result<SoReport, MatNormError> {
    let mut report = SoReport {
        n,
        tau,
        parity: LemmaAudit::new("so-rank-parity", "rk(g - I) is even", 0.0),
        rank_drop: LemmaAudit::new("so-rank-drop", "rk(p(g)g⁻¹ - I) <= 2", 2.0),
        non_expansive: LemmaAudit::new("so-non-expansive", "rk(p(g)p(h)⁻¹ - I) - rk(gh⁻¹ - I) <= 0", 0.0),
        borderline: 0,
        min_retained: None,
        max_dropped: None,
    };
    for _ in 0..pairs {
        let (g, h) = random_so_pair(n, rng);
        let (pg, ph) = (so_project(&g)?, so_project(&h)?);
        let ghi = g.mul(&h.transpose())?;
        let pghi = pg.mul(&ph.transpose())?;
        for m in [&g, &h, &ghi, &pghi] {
            m.check_special_orthogonal()?;
            let r = report.rank(m);
            report.parity.observe_holds(r.is_multiple_of(2), || format!("{m:?}"));
        }
        let drop = report.rank(&pg.pad_identity(n).mul(&g.transpose())?);
        report.rank_drop.observe(drop as f64, || format!("g={g:?}"));
        let lhs = report.rank(&pghi);
        let rhs = report.rank(&ghi);
        report.non_expansive.observe(lhs as f64 - rhs as f64, || format!("g={g:?} h={h:?}"));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationMatrixReport {
    pub degree: usize,
    pub rank_below_support: LemmaAudit,
    pub support_below_triple_rank: LemmaAudit,
}

impl PermutationMatrixReport {
    pub fn passed(&self) -> bool {
        self.rank_below_support.passed() && self.support_below_triple_rank.passed()
    }
}

/// Compares the rank norm of every permutation matrix of degree `n` with the
/// support norm of its permutation.
pub fn verify_permutation_matrices(n: usize) -> Result<PermutationMatrixReport, MatNormError> {
    let mut report = PermutationMatrixReport {
        degree: n,
        rank_below_support: LemmaAudit::new("perm-rank-below-support", "rk(P - I) - supp <= 0", 0.0),
        support_below_triple_rank: LemmaAudit::new("perm-support-below-rank", "supp - 3 rk(P - I) <= 0", 0.0),
    };
    for table in dense::all(n) {
        let sigma = Permutation::from_dense(&table);
        let rk = rank_norm_exact(&RationalMatrix::permutation(&sigma, n))?.value as f64;
        let supp = sigma.supp_norm() as f64;
        report.rank_below_support.observe(rk - supp, || sigma.to_string());
        report.support_below_triple_rank.observe(supp - 3.0 * rk, || sigma.to_string());
    }
    Ok(report)
}

/// `diag(1, …, 1, x)`.
pub fn last_diagonal(n: usize, x: BigRational) -> RationalMatrix {
    let mut d = vec![BigRational::one(); n];
    d[n - 1] = x;
    RationalMatrix::diagonal(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_rank_norm_examples() {
        assert_eq!(rank_norm_exact(&RationalMatrix::identity(4)).unwrap().value, 0);
        let d = last_diagonal(5, BigRational::from_integer(2.into()));
        assert_eq!(rank_norm_exact(&d).unwrap().value, 1);
        assert_eq!(rank_norm_exact(&RationalMatrix::zeros(2)), Err(MatNormError::Singular));
    }

    #[test]
    fn numeric_rank_of_rotations() {
        assert_eq!(rank_norm_numeric(&FloatMatrix::identity(4), DEFAULT_TAU).value, 0);
        let r = planar_rotation(4, 0, 1, std::f64::consts::FRAC_PI_3);
        let v = rank_norm_numeric(&r, DEFAULT_TAU);
        assert_eq!(v.value, 2);
        // singular values are 2 sin(θ/2) = 1
        assert!((v.min_retained.unwrap() - 1.0).abs() < 1e-12);
        assert!(!v.borderline);
        let two = r.mul(&planar_rotation(4, 2, 3, 0.4)).unwrap();
        assert_eq!(rank_norm_numeric(&two, DEFAULT_TAU).value, 4);
        let tiny = planar_rotation(3, 0, 1, 5e-8);
        assert!(rank_norm_numeric(&tiny, DEFAULT_TAU).borderline);
    }

    #[test]
    fn projection_examples() {
        let id = RationalMatrix::identity(4);
        assert_eq!(triangular_project(&id).unwrap(), RationalMatrix::identity(3));
        let d = last_diagonal(4, BigRational::from_integer(2.into()));
        assert!(triangular_project(&d).unwrap().is_identity());
        let lower = RationalMatrix::from_integers(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(triangular_project(&lower), Err(MatNormError::NotTriangular));
        let sing = RationalMatrix::from_integers(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(triangular_project(&sing), Err(MatNormError::Singular));

        let diag = RationalMatrix::from_integers(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(spd_project(&diag).unwrap(), RationalMatrix::from_integers(&[vec![1, 0], vec![0, 2]]).unwrap());
        let indefinite = RationalMatrix::from_integers(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(spd_project(&indefinite), Err(MatNormError::NotPositiveDefinite));
        assert_eq!(spd_project(&lower), Err(MatNormError::NotSymmetric));
    }

    #[test]
    fn so_projection_examples() {
        assert_eq!(so_project(&FloatMatrix::identity(3)).unwrap(), FloatMatrix::identity(2));
        let g = planar_rotation(4, 0, 2, 1.1);
        assert_eq!(so_project(&g).unwrap(), g.leading_block(3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_special_orthogonal(6, &mut rng);
        let p = so_project(&g).unwrap();
        p.check_special_orthogonal().unwrap();
        let full = p.pad_identity(6);
        assert!(
            (full.as_dmatrix()
                - elementary_rotation(&g.as_dmatrix().column(5).iter().copied().collect::<Vec<_>>(), 6)
                    .unwrap()
                    .mul(&g)
                    .unwrap()
                    .as_dmatrix())
            .amax()
                < 1e-9
        );
        assert!(verify_rank_parity(&g, DEFAULT_TAU).unwrap());
        assert!(verify_rank_parity(&planar_rotation(5, 1, 3, 0.3), DEFAULT_TAU).unwrap());
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..6 {
            let (g, _) = random_triangular_pair(n, &mut rng);
            let c = random_spd_pair(n, &mut rng).0;
            let conj = c.mul(&g).unwrap().mul(&c.inverse().unwrap()).unwrap();
            assert_eq!(rank_norm_exact(&conj).unwrap(), rank_norm_exact(&g).unwrap());
        }
    }

    #[test]
    fn small_verifier_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(verify_triangular(4, 40, &mut rng).unwrap().passed());
        assert!(verify_spd(4, 40, &mut rng).unwrap().passed());
        assert!(verify_so(5, 40, DEFAULT_TAU, &mut rng).unwrap().passed());
        assert!(verify_permutation_matrices(4).unwrap().passed());
    }
}

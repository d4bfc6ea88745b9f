//! Finite prefixes of sequences that would define points of an asymptotic
//! cone.
//!
//! Nothing here picks an ultrafilter. A normalised series `‖x_n‖ / s_n` is
//! summarised by statistics over its tail, and a series whose tail does not
//! settle is reported as unconverged. The stage-wise contraction hypotheses
//! (bounded displacement, non-expansive projection to the previous stage)
//! are checked on samples for the three matrix families, and the circle
//! module compares `Z/n` with the unit circle through the `n`-th roots of
//! unity.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::LemmaAudit;
use crate::matnorm::{self, FloatMatrix, MatNormError, RankNormValue, RationalMatrix};
use crate::permgroup::{self, Permutation};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("series is empty")]
    EmptySeries,
    #[error("tail fraction {0} outside (0, 1]")]
    BadTailFraction(f64),
    #[error("scaling is not positive at stage {0}")]
    NonPositiveScale(u64),
    #[error("scaling table has no entry for stage {0}")]
    MissingScale(u64),
    #[error("negative norm at stage {0}")]
    NegativeNorm(u64),
    #[error("stages must be strictly increasing")]
    UnorderedStages,
    #[error("residue {k} is not below modulus {n}")]
    ResidueOutOfRange { k: u64, n: u64 },
    #[error(transparent)]
    Matrix(#[from] MatNormError),
}

// ---------------------------------------------------------------------------
// Scaled sequences

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scaling {
    /// `s_n = n`.
    Linear,
    /// `s_n = n^alpha`.
    Power { alpha: f64 },
    /// Explicit values.
    Table { values: BTreeMap<u64, f64> },
    /// `factor · base`.
    Multiple { base: Box<Scaling>, factor: f64 },
}

impl Scaling {
    pub fn at(&self, n: u64) -> Result<f64, ConeError> {
        let s = match self {
            Scaling::Linear => n as f64,
            Scaling::Power { alpha } => (n as f64).powf(*alpha),
            Scaling::Table { values } => *values.get(&n).ok_or(ConeError::MissingScale(n))?,
            Scaling::Multiple { base, factor } => factor * base.at(n)?,
        };
        if s > 0.0 && s.is_finite() {
            Ok(s)
        } else {
            Err(ConeError::NonPositiveScale(n))
        }
    }

    pub fn times(self, factor: f64) -> Scaling {
        Scaling::Multiple { base: Box::new(self), factor }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub index: u64,
    pub element: String,
    pub norm: f64,
}

/// Recorded stages of a sequence `(x_n)` with its scaling sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledSequence {
    stages: Vec<Stage>,
    scaling: Scaling,
    scales: Vec<f64>,
}

impl ScaledSequence {
    pub fn new(stages: Vec<Stage>, scaling: Scaling) -> Result<Self, ConeError> {
        if stages.windows(2).any(|w| w[0].index >= w[1].index) {
            return Err(ConeError::UnorderedStages);
        }
        if let Some(s) = stages.iter().find(|s| s.norm < 0.0 || s.norm.is_nan()) {
            return Err(ConeError::NegativeNorm(s.index));
        }
        let scales = stages.iter().map(|s| scaling.at(s.index)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { stages, scaling, scales })
    }

    pub fn from_fn(
        indices: impl IntoIterator<Item = u64>,
        scaling: Scaling,
        mut stage: impl FnMut(u64) -> (String, f64),
    ) -> Result<Self, ConeError> {
        let stages = indices
            .into_iter()
            .map(|n| {
                let (element, norm) = stage(n);
                Stage { index: n, element, norm }
            })
            .collect();
        Self::new(stages, scaling)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn scaling(&self) -> &Scaling {
        &self.scaling
    }

    pub fn rescaled(&self, factor: f64) -> Result<Self, ConeError> {
        Self::new(self.stages.clone(), self.scaling.clone().times(factor))
    }

    /// `‖x_n‖ / s_n` per stage.
    pub fn normalized(&self) -> Vec<f64> {
        self.stages.iter().zip(&self.scales).map(|(s, scale)| s.norm / scale).collect()
    }

    /// Rows `index,element,norm,scale,ratio`.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["index", "element", "norm", "scale", "ratio"])?;
        for (stage, scale) in self.stages.iter().zip(&self.scales) {
            w.write_record([
                stage.index.to_string(),
                stage.element.clone(),
                stage.norm.to_string(),
                scale.to_string(),
                (stage.norm / scale).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub bound: f64,
    pub max_ratio: f64,
    /// Stage attaining the largest ratio.
    pub witness: Option<u64>,
}

/// Whether every recorded ratio is at most `bound`.
pub fn admissibility(seq: &ScaledSequence, bound: f64) -> Admissibility {
    let mut best: Option<(f64, u64)> = None;
    for (stage, r) in seq.stages.iter().zip(seq.normalized()) {
        if best.is_none_or(|(m, _)| r > m) {
            best = Some((r, stage.index));
        }
    }
    let max_ratio = best.map_or(0.0, |(m, _)| m);
    Admissibility { admissible: max_ratio <= bound, bound, max_ratio, witness: best.map(|(_, n)| n) }
}

/// Tail statistics standing in for a limit along an ultrafilter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltralimitEstimate {
    pub series: Vec<f64>,
    pub tail_start: usize,
    pub tail_min: f64,
    pub tail_max: f64,
    pub tail_mean: f64,
    pub tolerance: f64,
    pub converged: bool,
}

pub fn estimate_limit(values: &[f64], tail_fraction: f64, tolerance: f64) -> Result<UltralimitEstimate, ConeError> {
    if values.is_empty() {
        return Err(ConeError::EmptySeries);
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(ConeError::BadTailFraction(tail_fraction));
    }
    let len = ((values.len() as f64 * tail_fraction).ceil() as usize).clamp(1, values.len());
    let tail_start = values.len() - len;
    let tail = &values[tail_start..];
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail_mean = (tail.iter().sum::<f64>() / len as f64).clamp(tail_min, tail_max);
    Ok(UltralimitEstimate {
        series: values.to_vec(),
        tail_start,
        tail_min,
        tail_max,
        tail_mean,
        tolerance,
        converged: tail_max - tail_min <= tolerance,
    })
}

// ---------------------------------------------------------------------------
// Declarative sequence descriptions

/// Built-in permutation sequences, measured with a chosen norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceFamily {
    Identity,
    /// `(1 2 … n)`.
    LongCycle,
    /// `(1 2 … n²)`.
    SquareCycle,
    /// `(1 2)(3 4)…` on `2⌊n/2⌋` points.
    Involutions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermNorm {
    #[default]
    Supp,
    Tr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub start: u64,
    pub end: u64,
    #[serde(default = "one")]
    pub step: u64,
}

fn one() -> u64 {
    1
}

fn default_tail() -> f64 {
    DEFAULT_TAIL_FRACTION
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// A sequence description as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub family: SequenceFamily,
    #[serde(default)]
    pub norm: PermNorm,
    pub stages: Schedule,
    pub scaling: Scaling,
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Admissibility bound on the normalised norms.
    pub bound: Option<f64>,
}

impl SequenceSpec {
    pub fn element(&self, n: u64) -> Permutation {
        let n32 = u32::try_from(n).expect("stage index fits in u32");
        let cycle = |len: u32| {
            if len < 2 {
                Permutation::identity()
            } else {
                Permutation::cycle(&(1..=len).collect::<Vec<_>>()).expect("distinct points")
            }
        };
        match self.family {
            SequenceFamily::Identity => Permutation::identity(),
            SequenceFamily::LongCycle => cycle(n32),
            SequenceFamily::SquareCycle => cycle(n32 * n32),
            SequenceFamily::Involutions => {
                let pairs: Vec<Vec<u32>> = (0..n32 / 2).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
                Permutation::from_cycles(&pairs).expect("disjoint pairs")
            }
        }
    }

    fn label(&self, n: u64) -> String {
        match self.family {
            SequenceFamily::Identity => "()".into(),
            SequenceFamily::LongCycle => format!("(1 … {n})"),
            SequenceFamily::SquareCycle => format!("(1 … {})", n * n),
            SequenceFamily::Involutions => format!("(1 2)…({} {})", 2 * (n / 2) - 1, 2 * (n / 2)),
        }
    }

    pub fn evaluate(&self) -> Result<SequenceSummary, ConeError> {
        let step = self.stages.step.max(1) as usize;
        let seq =
            ScaledSequence::from_fn((self.stages.start..=self.stages.end).step_by(step), self.scaling.clone(), |n| {
                let x = self.element(n);
                let norm = match self.norm {
                    PermNorm::Supp => permgroup::supp_norm(&x),
                    PermNorm::Tr => permgroup::tr_norm(&x),
                };
                (self.label(n), norm as f64)
            })?;
        let estimate = estimate_limit(&seq.normalized(), self.tail_fraction, self.tolerance)?;
        let admissibility = self.bound.map(|b| admissibility(&seq, b));
        Ok(SequenceSummary { sequence: seq, estimate, admissibility })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub sequence: ScaledSequence,
    pub estimate: UltralimitEstimate,
    pub admissibility: Option<Admissibility>,
}

// ---------------------------------------------------------------------------
// Stage-wise contraction

/// A sequence of nested metric spaces `X_1 ⊂ X_2 ⊂ …` with projections
/// `p_n : X_n → X_{n-1}`.
pub trait StageFamily {
    type Elem: fmt::Debug;

    fn name(&self) -> &'static str;
    fn sample_pair<R: Rng>(&self, n: usize, rng: &mut R) -> (Self::Elem, Self::Elem);
    fn project(&self, x: &Self::Elem) -> Result<Self::Elem, ConeError>;
    /// The inclusion `X_{n-1} → X_n`.
    fn include(&self, x: &Self::Elem) -> Self::Elem;
    fn distance(&self, x: &Self::Elem, y: &Self::Elem) -> Result<RankNormValue, ConeError>;
}

/// Invertible upper-triangular rationals, `d(g, h) = rk(g - h)`.
pub struct TriangularStages;
/// Positive definite rationals, `d(A, B) = rk(A - B)`.
pub struct SpdStages;
/// Special orthogonal matrices, `d(g, h) = rk(gh⁻¹ - I)` by singular values.
pub struct OrthogonalStages {
    pub tau: f64,
}

fn pad(m: &RationalMatrix) -> RationalMatrix {
    m.pad_identity(m.dim() + 1)
}

impl StageFamily for TriangularStages {
    type Elem = RationalMatrix;

    fn name(&self) -> &'static str {
        "upper-triangular"
    }

    fn sample_pair<R: Rng>(&self, n: usize, rng: &mut R) -> (RationalMatrix, RationalMatrix) {
        matnorm::random_triangular_pair(n, rng)
    }

    fn project(&self, x: &RationalMatrix) -> Result<RationalMatrix, ConeError> {
        Ok(matnorm::triangular_project(x)?)
    }

    fn include(&self, x: &RationalMatrix) -> RationalMatrix {
        pad(x)
    }

    fn distance(&self, x: &RationalMatrix, y: &RationalMatrix) -> Result<RankNormValue, ConeError> {
        Ok(matnorm::rank_norm_exact(&x.mul(&y.inverse()?)?)?)
    }
}

impl StageFamily for SpdStages {
    type Elem = RationalMatrix;

    fn name(&self) -> &'static str {
        "positive-definite"
    }

    fn sample_pair<R: Rng>(&self, n: usize, rng: &mut R) -> (RationalMatrix, RationalMatrix) {
        matnorm::random_spd_pair(n, rng)
    }

    fn project(&self, x: &RationalMatrix) -> Result<RationalMatrix, ConeError> {
        Ok(matnorm::spd_project(x)?)
    }

    fn include(&self, x: &RationalMatrix) -> RationalMatrix {
        pad(x)
    }

    fn distance(&self, x: &RationalMatrix, y: &RationalMatrix) -> Result<RankNormValue, ConeError> {
        let rank = x.sub(y)?.rank();
        Ok(RankNormValue {
            value: rank,
            method: matnorm::RankMethod::ExactElimination,
            threshold: None,
            min_retained: None,
            max_dropped: None,
            borderline: false,
        })
    }
}

impl StageFamily for OrthogonalStages {
    type Elem = FloatMatrix;

    fn name(&self) -> &'static str {
        "special-orthogonal"
    }

    fn sample_pair<R: Rng>(&self, n: usize, rng: &mut R) -> (FloatMatrix, FloatMatrix) {
        matnorm::random_so_pair(n, rng)
    }

    fn project(&self, x: &FloatMatrix) -> Result<FloatMatrix, ConeError> {
        Ok(matnorm::so_project(x)?)
    }

    fn include(&self, x: &FloatMatrix) -> FloatMatrix {
        x.pad_identity(x.dim() + 1)
    }

    fn distance(&self, x: &FloatMatrix, y: &FloatMatrix) -> Result<RankNormValue, ConeError> {
        Ok(matnorm::rank_norm_numeric(&x.mul(&y.transpose())?, self.tau))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub n: usize,
    pub displacement: LemmaAudit,
    pub non_expansive: LemmaAudit,
    pub inclusion_isometry: LemmaAudit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceContractionReport {
    pub family: String,
    pub declared_k: u64,
    /// Largest displacement `d_n(p_n(x), x)` seen: the smallest `K` that works on the sample.
    pub observed_k: u64,
    pub borderline: u64,
    pub stages: Vec<StageReport>,
}

impl SequenceContractionReport {
    pub fn passed(&self) -> bool {
        self.borderline == 0
            && self.observed_k <= self.declared_k
            && self
                .stages
                .iter()
                .all(|s| s.displacement.passed() && s.non_expansive.passed() && s.inclusion_isometry.passed())
    }
}

/// Checks `d_n(p_n(x), x) <= K` and `d_{n-1}(p_n(x), p_n(y)) <= d_n(x, y)` on
/// `pairs` sampled pairs per stage, for every stage in `stages`, and spot-checks
/// that the inclusion of the previous stage is isometric on the projected pair.
pub fn check_sequence_contraction<F: StageFamily, R: Rng>(
    family: &F,
    stages: std::ops::RangeInclusive<usize>,
    pairs: usize,
    declared_k: u64,
    rng: &mut R,
) -> Result<SequenceContractionReport, ConeError> {
    let mut report = SequenceContractionReport {
        family: family.name().to_string(),
        declared_k,
        observed_k: 0,
        borderline: 0,
        stages: Vec::new(),
    };
    let measure = |x: &F::Elem, y: &F::Elem, report: &mut SequenceContractionReport| {
        family.distance(x, y).map(|v| {
            report.borderline += u64::from(v.borderline);
            v.value as u64
        })
    };
    for n in stages {
        let mut stage = StageReport {
            n,
            displacement: LemmaAudit::new("stage-displacement", "d_n(p_n(x), x) <= K", declared_k as f64),
            non_expansive: LemmaAudit::new("stage-non-expansive", "d_{n-1}(p(x), p(y)) - d_n(x, y) <= 0", 0.0),
            inclusion_isometry: LemmaAudit::new("stage-inclusion", "d_n(ι a, ι b) = d_{n-1}(a, b)", 0.0),
        };
        for _ in 0..pairs {
            let (x, y) = family.sample_pair(n, rng);
            let (px, py) = (family.project(&x)?, family.project(&y)?);
            let (ipx, ipy) = (family.include(&px), family.include(&py));
            for (orig, lifted) in [(&x, &ipx), (&y, &ipy)] {
                let d = measure(lifted, orig, &mut report)?;
                report.observed_k = report.observed_k.max(d);
                stage.displacement.observe(d as f64, || format!("{orig:?}"));
            }
            let lower = measure(&px, &py, &mut report)?;
            let upper = measure(&x, &y, &mut report)?;
            stage.non_expansive.observe(lower as f64 - upper as f64, || format!("x={x:?} y={y:?}"));
            let lifted = measure(&ipx, &ipy, &mut report)?;
            stage.inclusion_isometry.observe_holds(lifted == lower, || format!("x={x:?} y={y:?}"));
        }
        report.stages.push(stage);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Z/n and the circle

/// `min(|a - b|, n - |a - b|)`.
pub fn zmod_distance(a: u64, b: u64, n: u64) -> u64 {
    let d = a.abs_diff(b) % n.max(1);
    d.min(n - d)
}

/// `k/n` of a full turn.
pub fn zmod_to_turns(k: u64, n: u64) -> Result<Ratio<u64>, ConeError> {
    if k >= n {
        return Err(ConeError::ResidueOutOfRange { k, n });
    }
    Ok(Ratio::new(k, n))
}

/// The angle `2πk/n` of the `k`-th root of unity.
pub fn zmod_to_circle(k: u64, n: u64) -> Result<f64, ConeError> {
    if k >= n {
        return Err(ConeError::ResidueOutOfRange { k, n });
    }
    Ok(TAU * k as f64 / n as f64)
}

/// Arc distance between two points given as fractions of a turn in `[0, 1)`,
/// again as a fraction of a turn.
pub fn arc_turns(a: Ratio<u64>, b: Ratio<u64>) -> Ratio<u64> {
    let d = if a > b { a - b } else { b - a };
    let one = Ratio::from_integer(1);
    if d * 2 > one {
        one - d
    } else {
        d
    }
}

/// Arc distance in radians between two angles.
pub fn arc_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

fn nearest_with_tie(k: u64, above: bool, tie: bool, n: u64) -> u64 {
    let lower = k % n;
    let upper = (k + 1) % n;
    if tie {
        lower.min(upper)
    } else if above {
        upper
    } else {
        lower
    }
}

/// Index of the nearest `n`-th root of unity to the point `t` turns round
/// the circle; an exact midpoint goes to the smaller residue.
pub fn circle_to_zmod_turns(t: Ratio<u64>, n: u64) -> u64 {
    let frac_turn = t - t.trunc();
    let scaled = frac_turn * n;
    let k = scaled.to_integer();
    let rest = scaled - Ratio::from_integer(k);
    let half = Ratio::new(1, 2);
    nearest_with_tie(k, rest > half, rest == half, n)
}

/// Index of the nearest `n`-th root of unity to the angle `x` (radians).
/// Midpoints, up to rounding of the input, go to the smaller residue.
pub fn circle_to_zmod(x: f64, n: u64) -> u64 {
    let scaled = x.rem_euclid(TAU) / TAU * n as f64;
    let k = scaled.floor();
    let rest = scaled - k;
    let tie = (rest - 0.5).abs() <= 1e-12 * scaled.max(1.0);
    nearest_with_tie(k as u64, rest > 0.5, tie, n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleReport {
    pub max_round_trip_modulus: u64,
    pub max_grid_modulus: u64,
    pub grid_points: u64,
    pub round_trip: LemmaAudit,
    pub arc_identity: LemmaAudit,
    pub float_agrees_with_exact: LemmaAudit,
    pub lipschitz: LemmaAudit,
    /// Grid pairs skipped because `d_arc·n + 2 >= n/2` bounds them outright.
    pub pairs_bounded_outright: u64,
}

impl CircleReport {
    pub fn passed(&self) -> bool {
        [&self.round_trip, &self.arc_identity, &self.float_agrees_with_exact, &self.lipschitz]
            .iter()
            .all(|a| a.passed())
    }
}

/// Round trip and arc identity for every residue of every modulus up to
/// `max_round_trip`; the bound `‖θ(x) - θ(y)‖_n <= d_arc(x, y)·n + 2` for all
/// pairs of a `grid`-point angle grid and every modulus up to `max_grid`.
///
/// The cyclic distance never exceeds `⌊n/2⌋`, so pairs with
/// `d_arc·n + 2 >= ⌊n/2⌋` cannot violate the bound and are only counted.
pub fn verify_circle_correspondence(max_round_trip: u64, max_grid: u64, grid: u64) -> CircleReport {
    let mut report = CircleReport {
        max_round_trip_modulus: max_round_trip,
        max_grid_modulus: max_grid,
        grid_points: grid,
        round_trip: LemmaAudit::new("circle-round-trip", "θ_n(φ_n(k)) = k", 0.0),
        arc_identity: LemmaAudit::new("circle-arc-identity", "d_arc(φ(a), φ(b)) = 2π‖a - b‖_n / n", 0.0),
        float_agrees_with_exact: LemmaAudit::new("circle-float-exact", "θ_n on angles agrees with exact turns", 0.0),
        lipschitz: LemmaAudit::new("circle-lipschitz", "‖θ(x) - θ(y)‖_n - d_arc(x, y)·n - 2 <= 0", 0.0),
        pairs_bounded_outright: 0,
    };
    for n in 1..=max_round_trip {
        let anchors = [0, 1 % n, n / 3, n - 1];
        for k in 0..n {
            let angle = zmod_to_circle(k, n).expect("k < n");
            report.round_trip.observe_holds(circle_to_zmod(angle, n) == k, || format!("n={n} k={k}"));
            let turns = zmod_to_turns(k, n).expect("k < n");
            report.round_trip.observe_holds(circle_to_zmod_turns(turns, n) == k, || format!("n={n} k={k} exact"));
            for &a in &anchors {
                let ta = zmod_to_turns(a, n).expect("a < n");
                let exact = arc_turns(ta, turns) == Ratio::new(zmod_distance(a, k, n), n);
                let float = (arc_distance(zmod_to_circle(a, n).expect("a < n"), angle)
                    - TAU * zmod_distance(a, k, n) as f64 / n as f64)
                    .abs()
                    <= 1e-12;
                report.arc_identity.observe_holds(exact && float, || format!("n={n} a={a} b={k}"));
            }
        }
    }
    for n in 1..=max_grid {
        let theta: Vec<u64> = (0..grid).map(|i| circle_to_zmod_turns(Ratio::new(i, grid), n)).collect();
        for (i, &t) in theta.iter().enumerate() {
            let float = circle_to_zmod(TAU * i as f64 / grid as f64, n);
            report.float_agrees_with_exact.observe_holds(float == t, || format!("n={n} i={i}"));
        }
        let theta2: Vec<u32> = theta.iter().chain(&theta).map(|&t| t as u32).collect();
        let n32 = n as u32;
        let half = n / 2;
        let mut checked_pairs = 0;
        // offsets m and grid - m give the same unordered pairs
        for m in 1..=grid / 2 {
            let arc = TAU * m as f64 / grid as f64;
            let rhs = arc * n as f64 + 2.0;
            if rhs >= half as f64 {
                continue;
            }
            let copies = if 2 * m == grid { 1 } else { 2 };
            let m = m as usize;
            let worst = theta2[..grid as usize]
                .iter()
                .zip(&theta2[m..m + grid as usize])
                .map(|(&a, &b)| {
                    let d = a.abs_diff(b);
                    d.min(n32 - d)
                })
                .max()
                .unwrap_or(0);
            // one observation per offset, counted as one per ordered pair
            report.lipschitz.observe(f64::from(worst) - rhs, || format!("n={n} offset={m}"));
            report.lipschitz.sample_size += copies * grid - 1;
            checked_pairs += copies * grid;
        }
        report.pairs_bounded_outright += (grid - 1) * grid - checked_pairs;
    }
    report
}

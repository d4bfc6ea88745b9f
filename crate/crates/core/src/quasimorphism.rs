//! Quasimorphisms sampled on finite windows of a group: defect estimates,
//! homogenisation sequences and the word-norm lower bound they give.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuasimorphismError {
    #[error("{0} is not in the sample")]
    ElementOutsideSample(String),
    #[error("product {product} of {left} and {right} is not in the sample")]
    ProductOutsideSample { left: String, right: String, product: String },
    #[error("power {power} of {element} is not in the sample")]
    PowerOutsideSample { element: String, power: usize },
    #[error("K + D = 0 while the homogenised value is {0}")]
    DegenerateDenominator(f64),
    #[error("cannot read samples: {0}")]
    Load(String),
}

type Multiplication<E> = Box<dyn Fn(&E, &E) -> E + Send + Sync>;

/// A real-valued map known on a finite set of group elements.
pub struct SampledQuasimorphism<E> {
    values: HashMap<E, f64>,
    multiply: Multiplication<E>,
    pub claimed_defect: Option<f64>,
}

impl<E: Clone + Eq + Hash + fmt::Display> SampledQuasimorphism<E> {
    pub fn new(
        values: impl IntoIterator<Item = (E, f64)>,
        multiply: impl Fn(&E, &E) -> E + Send + Sync + 'static,
    ) -> Self {
        Self { values: values.into_iter().collect(), multiply: Box::new(multiply), claimed_defect: None }
    }

    pub fn with_claimed_defect(mut self, defect: f64) -> Self {
        self.claimed_defect = Some(defect);
        self
    }

    pub fn value(&self, g: &E) -> Result<f64, QuasimorphismError> {
        self.values.get(g).copied().ok_or_else(|| QuasimorphismError::ElementOutsideSample(g.to_string()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn multiply(&self, a: &E, b: &E) -> E {
        (self.multiply)(a, b)
    }

    /// `max |ψ(gh) - ψ(g) - ψ(h)|` over the pairs, with a maximising pair.
    /// Only a lower bound for the true defect.
    pub fn estimate_defect(&self, pairs: &[(E, E)]) -> Result<DefectEstimate<E>, QuasimorphismError> {
        let mut estimate = DefectEstimate { defect: 0.0, witness: None, pairs: pairs.len() };
        for (g, h) in pairs {
            let gh = self.multiply(g, h);
            let value = self.values.get(&gh).ok_or_else(|| QuasimorphismError::ProductOutsideSample {
                left: g.to_string(),
                right: h.to_string(),
                product: gh.to_string(),
            })?;
            let d = (value - self.value(g)? - self.value(h)?).abs();
            if d > estimate.defect || estimate.witness.is_none() {
                estimate.defect = estimate.defect.max(d);
                estimate.witness = Some((g.clone(), h.clone()));
            }
        }
        Ok(estimate)
    }

    /// `ψ(gⁿ)/n` for `n = 1..=stages`.
    pub fn homogenise(&self, g: &E, stages: usize) -> Result<Homogenisation, QuasimorphismError> {
        let mut sequence = Vec::with_capacity(stages);
        let mut power = g.clone();
        for n in 1..=stages {
            if n > 1 {
                power = self.multiply(&power, g);
            }
            let v = self
                .values
                .get(&power)
                .ok_or_else(|| QuasimorphismError::PowerOutsideSample { element: g.to_string(), power: n })?;
            sequence.push(v / n as f64);
        }
        let estimate = sequence.last().copied().unwrap_or(0.0);
        Ok(Homogenisation { sequence, estimate })
    }

    /// Checks `|ψ̄_N(g) - ψ(g)| <= D + tolerance` for the stage-`N` estimate.
    pub fn homogenisation_within_defect(
        &self,
        g: &E,
        stages: usize,
        defect: f64,
        tolerance: f64,
    ) -> Result<bool, QuasimorphismError> {
        let h = self.homogenise(g, stages)?;
        Ok((h.estimate - self.value(g)?).abs() <= defect + tolerance)
    }
}

impl<E: Clone + Eq + Hash + fmt::Display + FromStr> SampledQuasimorphism<E> {
    /// Reads `element,value` rows (with a header) from CSV.
    pub fn from_csv<R: Read>(
        reader: R,
        multiply: impl Fn(&E, &E) -> E + Send + Sync + 'static,
    ) -> Result<Self, QuasimorphismError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut values = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| QuasimorphismError::Load(e.to_string()))?;
            let (Some(key), Some(value)) = (record.get(0), record.get(1)) else {
                return Err(QuasimorphismError::Load(format!("short row {record:?}")));
            };
            let key = key.trim().parse::<E>().map_err(|_| QuasimorphismError::Load(format!("bad element {key:?}")))?;
            let value: f64 =
                value.trim().parse().map_err(|_| QuasimorphismError::Load(format!("bad value {value:?}")))?;
            values.push((key, value));
        }
        Ok(Self::new(values, multiply))
    }
}

impl SampledQuasimorphism<i64> {
    /// `ψ` restricted to the window `[-radius, radius]` of the integers.
    pub fn on_integers(radius: i64, psi: impl Fn(i64) -> f64) -> Self {
        Self::new((-radius..=radius).map(|n| (n, psi(n))), |a, b| a + b)
    }

    /// All pairs `(g, h)` in the window whose sum is also in it.
    pub fn integer_pairs(radius: i64) -> Vec<(i64, i64)> {
        (-radius..=radius)
            .flat_map(|g| (-radius..=radius).filter(move |h| (g + h).abs() <= radius).map(move |h| (g, h)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectEstimate<E> {
    pub defect: f64,
    pub witness: Option<(E, E)>,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Homogenisation {
    pub sequence: Vec<f64>,
    pub estimate: f64,
}

/// Whether `‖g‖ >= |ψ̄(g)| / (K + D)`, where `K` bounds `|ψ̄|` on the
/// generators and `D` is the defect.
pub fn norm_lower_bound(psi_bar: f64, k: f64, d: f64, g_norm: u64) -> Result<bool, QuasimorphismError> {
    let denominator = k + d;
    if denominator == 0.0 {
        if psi_bar == 0.0 {
            return Ok(true);
        }
        return Err(QuasimorphismError::DegenerateDenominator(psi_bar));
    }
    Ok(g_norm as f64 >= psi_bar.abs() / denominator)
}

/// Exact word norms on `[-radius, radius]` for the generating set `±gens`.
///
/// The search runs on `[-radius - m, radius + m]` with `m` the largest
/// generator: any word for `x` can be reordered so its partial sums stay
/// within `m` of the segment between 0 and `x`, so this is exact.
pub fn integer_window_norms(radius: i64, gens: &[i64]) -> BTreeMap<i64, u32> {
    let m = gens.iter().map(|g| g.abs()).max().unwrap_or(0);
    let steps: Vec<i64> = gens.iter().flat_map(|&g| [g, -g]).collect();
    let bound = radius + m;
    let width = (2 * bound + 1) as usize;
    let mut dist = vec![u32::MAX; width];
    let slot = |x: i64| (x + bound) as usize;
    dist[slot(0)] = 0;
    let mut frontier = vec![0i64];
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for &s in &steps {
                let y = x + s;
                if y.abs() <= bound && dist[slot(y)] == u32::MAX {
                    dist[slot(y)] = level;
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    (-radius..=radius).filter(|&x| dist[slot(x)] != u32::MAX).map(|x| (x, dist[slot(x)])).collect()
}

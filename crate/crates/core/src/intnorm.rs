//! The word norm on the integers generated by `{±t^m m!}`: exact search for
//! small targets, a greedy upper bound, the threshold argument giving
//! `‖t^{n-1} n!‖ >= n`, and the torsion phenomenon it produces.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntNormError {
    #[error("{target} needs generators beyond index {max_index}")]
    IndexBudgetExceeded { target: String, max_index: usize },
    #[error("lower-bound argument failed a check: {0}")]
    ArgumentCheckFailed(String),
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("cannot parse target {0:?}")]
    Parse(String),
}

/// Signed decimal strings for big integers in reports.
mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(ToString::to_string))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
        }
    }
}

/// `t^m · m!` for `m = 0..=max_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorialGenerators {
    pub base: u32,
    pub max_index: usize,
    pub members: Vec<BigInt>,
}

impl FactorialGenerators {
    pub fn new(base: u32, max_index: usize) -> Result<Self, IntNormError> {
        if base < 2 {
            return Err(IntNormError::InvalidBase(base));
        }
        let mut members = vec![BigInt::one()];
        for m in 1..=max_index {
            let next = &members[m - 1] * base * m;
            members.push(next);
        }
        Ok(Self { base, max_index, members })
    }

    pub fn member(&self, m: usize) -> &BigInt {
        &self.members[m]
    }

    /// Extends the list so that it reaches `index`.
    fn extended_to(&self, index: usize) -> Self {
        if index <= self.max_index {
            return self.clone();
        }
        Self::new(self.base, index).expect("base already validated")
    }

    /// Largest `m` with `t^m m! <= a`, for `a >= 1`; may exceed `max_index`.
    fn floor_index(&self, a: &BigInt) -> usize {
        let mut g = BigInt::one();
        let mut m = 0;
        loop {
            let next = &g * self.base * (m + 1);
            if &next > a {
                return m;
            }
            g = next;
            m += 1;
        }
    }
}

/// `x_n = t^{n-1} n!`.
pub fn x_n(n: usize, base: u32) -> BigInt {
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    fact * BigInt::from(base).pow(n.saturating_sub(1) as u32)
}

/// Reads a decimal integer or the shorthands `x(n)` and `x(n,t)`.
pub fn parse_target(s: &str) -> Result<BigInt, IntNormError> {
    let s = s.trim();
    let err = || IntNormError::Parse(s.to_string());
    if let Some(inner) = s.strip_prefix("x(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let n: usize = parts[0].parse().map_err(|_| err())?;
        let t: u32 = match parts.get(1) {
            Some(t) => t.parse().map_err(|_| err())?,
            None => 2,
        };
        if parts.len() > 2 || n == 0 || t < 2 {
            return Err(err());
        }
        return Ok(x_n(n, t));
    }
    s.parse().map_err(|_| err())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactSearch,
    UpperConstruction,
    LowerArgument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntNormResult {
    #[serde(with = "decimal")]
    pub target: BigInt,
    pub base: u32,
    /// `None` when the search gave up.
    pub value: Option<u64>,
    /// Signed generators summing to the target.
    #[serde(with = "decimal::vec")]
    pub certificate: Vec<BigInt>,
    pub method: Method,
    /// Best known upper bound; equal to `value` when that is known.
    pub upper_bound: Option<u64>,
    /// Generator indices searched, for exact searches.
    pub search_window: Option<(usize, usize)>,
}

impl IntNormResult {
    pub fn recomposes(&self) -> bool {
        self.certificate.iter().sum::<BigInt>() == self.target
    }
}

/// Greedy decomposition: repeatedly subtract the nearer of the generators
/// just below and just above the remainder, ties going to the smaller one.
pub fn norm_upper(x: &BigInt, gens: &FactorialGenerators) -> Result<IntNormResult, IntNormError> {
    let limit = &gens.members[gens.max_index] * gens.base * (gens.max_index + 1);
    if x.abs() >= limit {
        return Err(IntNormError::IndexBudgetExceeded { target: x.to_string(), max_index: gens.max_index });
    }
    let mut rest = x.clone();
    let mut certificate = Vec::new();
    while !rest.is_zero() {
        let a = rest.abs();
        let i = gens.floor_index(&a);
        let low = gens.member(i);
        let pick = match gens.members.get(i + 1) {
            Some(high) if (high - &a) < (&a - low) => high,
            _ => low,
        };
        let step = if rest.sign() == Sign::Minus { -pick } else { pick.clone() };
        rest -= &step;
        certificate.push(step);
    }
    let len = certificate.len() as u64;
    Ok(IntNormResult {
        target: x.clone(),
        base: gens.base,
        value: None,
        certificate,
        method: Method::UpperConstruction,
        upper_bound: Some(len),
        search_window: None,
    })
}

/// Default search window: every generator up to two above `|x|`, and any
/// generator at most `|x| + depth_cap · g_{m*}` where `g_{m*}` is the
/// largest generator not above `|x|`.
pub fn default_window_top(x: &BigInt, gens: &FactorialGenerators, depth_cap: usize) -> usize {
    let a = x.abs();
    if a.is_zero() {
        return 0;
    }
    let m_star = gens.floor_index(&a);
    let reach = &a + generator_value(gens.base, m_star) * depth_cap;
    gens.floor_index(&reach).max(m_star + 2)
}

fn generator_value(base: u32, m: usize) -> BigInt {
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    fact * BigInt::from(base).pow(m as u32)
}

/// Iterative deepening over signed generator counts, largest generator
/// first, with the default window. Returns `value: None` with the greedy
/// bound when nothing of length at most `depth_cap` exists in the window.
pub fn norm_exact(x: &BigInt, gens: &FactorialGenerators, depth_cap: usize) -> IntNormResult {
    norm_exact_in_window(x, gens, depth_cap, default_window_top(x, gens, depth_cap))
}

/// [`norm_exact`] restricted to generator indices `0..=top`.
pub fn norm_exact_in_window(x: &BigInt, gens: &FactorialGenerators, depth_cap: usize, top: usize) -> IntNormResult {
    let gens = gens.extended_to(top);
    let window: Vec<BigInt> = gens.members[..=top].iter().rev().cloned().collect();
    let mut counts = vec![0i64; window.len()];
    for depth in 0..=depth_cap {
        if search(&window, 0, x.clone(), depth, &mut counts) {
            let certificate = window
                .iter()
                .zip(&counts)
                .flat_map(|(g, &c)| {
                    let step = if c < 0 { -g } else { g.clone() };
                    std::iter::repeat_n(step, c.unsigned_abs() as usize)
                })
                .collect();
            return IntNormResult {
                target: x.clone(),
                base: gens.base,
                value: Some(depth as u64),
                certificate,
                method: Method::ExactSearch,
                upper_bound: Some(depth as u64),
                search_window: Some((0, top)),
            };
        }
    }
    let upper = norm_upper(x, &gens.extended_to(gens.floor_index(&x.abs()) + 1)).ok();
    IntNormResult {
        target: x.clone(),
        base: gens.base,
        value: None,
        certificate: upper.as_ref().map(|u| u.certificate.clone()).unwrap_or_default(),
        method: Method::ExactSearch,
        upper_bound: upper.and_then(|u| u.upper_bound),
        search_window: Some((0, top)),
    }
}

/// Tries to write `rest` with exactly `left` more steps from `window[i..]`.
fn search(window: &[BigInt], i: usize, rest: BigInt, left: usize, counts: &mut [i64]) -> bool {
    if rest.is_zero() {
        counts[i..].iter_mut().for_each(|c| *c = 0);
        return left == 0;
    }
    if i == window.len() || left == 0 {
        return false;
    }
    let g = &window[i];
    if rest.abs() > g * left {
        return false;
    }
    if i + 1 == window.len() {
        // the last generator divides everything before it, so its count is forced
        let (q, r) = rest.div_rem(g);
        let q = q.to_i64().unwrap_or(i64::MAX);
        if r.is_zero() && q.unsigned_abs() as usize == left {
            counts[i] = q;
            return true;
        }
        return false;
    }
    let bound = left as i64;
    // nearest multiples first
    let center = rest.div_floor(g).to_i64().unwrap_or(0).clamp(-bound, bound);
    let mut order: Vec<i64> = (-bound..=bound).collect();
    order.sort_by_key(|c| ((c - center).abs(), *c));
    for c in order {
        let used = c.unsigned_abs() as usize;
        if used > left {
            continue;
        }
        counts[i] = c;
        if search(window, i + 1, &rest - g * c, left - used, counts) {
            return true;
        }
    }
    false
}

/// `‖t^{n-1} n!‖ >= n`, re-deriving each step of the threshold argument
/// with exact arithmetic.
///
/// With `T = t^{n-1}(n-1)!` and `U = t^n n!`, every generator is either at
/// most `T` or a multiple of `U`. The large part of any representation is
/// `qU` and `|x - qU| = x|1 - qt| >= x`, so the small part needs at least
/// `x / T = n` generators.
pub fn lower_bound_xn(n: usize, base: u32) -> Result<u64, IntNormError> {
    let fail = |what: &str| Err(IntNormError::ArgumentCheckFailed(format!("n={n}, t={base}: {what}")));
    if n == 0 {
        return fail("n must be positive");
    }
    if base < 2 {
        return Err(IntNormError::InvalidBase(base));
    }
    let gens = FactorialGenerators::new(base, n + 3)?;
    let x = x_n(n, base);
    let threshold = gens.member(n - 1);
    let u = gens.member(n);
    if x != threshold * n {
        return fail("x != n T");
    }
    if u != &(&x * base) {
        return fail("U != t x");
    }
    for m in 0..=n + 3 {
        let g = gens.member(m);
        let small = g <= threshold;
        if small != (m < n) || (!small && !g.is_multiple_of(u)) {
            return fail(&format!("generator {m} is neither small nor a multiple of U"));
        }
    }
    // |1 - q t| >= 1 for every integer q because t >= 2; spot-check around 0
    for q in -3i64..=3 {
        let residue = (&x - u * q).abs();
        if residue < x {
            return fail(&format!("|x - {q} U| < x"));
        }
    }
    let (k, r) = x.div_rem(threshold);
    if !r.is_zero() || k != BigInt::from(n) {
        return fail("x / T != n");
    }
    Ok(n as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionRow {
    pub n: usize,
    #[serde(with = "decimal")]
    pub x: BigInt,
    pub norm_x: u64,
    pub norm_x_method: Method,
    pub norm_t_x: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub base: u32,
    pub rows: Vec<TorsionRow>,
    pub notes: Vec<String>,
}

/// Largest `n` for which [`torsion_probe`] runs the exhaustive search.
pub const EXACT_PROBE_LIMIT: usize = 5;

/// For each `n`, `‖x_n‖ = n` and `‖t x_n‖ = 1`: `x_n` grows linearly while
/// `t x_n = t^n n!` is a generator.
pub fn torsion_probe(ns: std::ops::RangeInclusive<usize>, base: u32) -> Result<TorsionReport, IntNormError> {
    let top = *ns.end();
    let gens = FactorialGenerators::new(base, top + 1)?;
    let mut rows = Vec::new();
    for n in ns {
        let x = x_n(n, base);
        let lower = lower_bound_xn(n, base)?;
        let (norm_x, method) = if n <= EXACT_PROBE_LIMIT {
            let exact = norm_exact(&x, &gens, n + 1);
            match exact.value {
                Some(v) => (v, Method::ExactSearch),
                None => return Err(IntNormError::ArgumentCheckFailed(format!("no exact value for x_{n}"))),
            }
        } else {
            let upper = norm_upper(&x, &gens)?.upper_bound.expect("greedy gives a bound");
            if upper != lower {
                return Err(IntNormError::ArgumentCheckFailed(format!("x_{n}: upper {upper} != lower {lower}")));
            }
            (upper, Method::LowerArgument)
        };
        let tx = &x * base;
        let norm_t_x = if gens.members.contains(&tx) { 1 } else { norm_upper(&tx, &gens)?.upper_bound.unwrap_or(0) };
        rows.push(TorsionRow { n, x, norm_x, norm_x_method: method, norm_t_x });
    }
    let mut notes = Vec::new();
    if base != 2 {
        notes.push(format!("generating set read as {{±{base}^m m!}}"));
    }
    Ok(TorsionReport { base, rows, notes })
}

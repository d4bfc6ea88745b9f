//! Direct sums and free products of normed groups.
//!
//! A free product element is kept as a reduced word and a direct-sum element
//! as a sparse map from factor index to non-identity term. Both carry the
//! `ℓ1` norm built from the factor norms, and both get a projection that
//! acts on one distinguished factor (the first letter of a word, the least
//! index of a sum). [`ConditionReport`] checks the four requirements of the
//! single-projection contraction criterion on a finite carrier.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::audit::LemmaAudit;
use crate::wordnorm::FiniteGroupOracle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("no factor with index {0}")]
    UnknownFactor(u32),
}

/// A group with an integer-valued norm.
pub trait Factor {
    type Elem: Clone + Eq + Ord + Hash + fmt::Display;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> u64;
    /// Non-identity elements of norm at most `radius`, in a fixed order.
    fn nontrivial_within(&self, radius: u64) -> Vec<Self::Elem>;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicNorm {
    /// 1 on every non-identity element.
    Discrete,
    /// Word norm for the generators `±1`.
    Word,
}

/// Cyclic groups and the integers, with elements stored as `i64`
/// (residues `0..order` for the cyclic case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinFactor {
    Cyclic {
        order: u64,
        norm: CyclicNorm,
    },
    /// `Z` with the absolute value.
    Integers,
}

impl BuiltinFactor {
    pub fn cyclic(order: u64, norm: CyclicNorm) -> Self {
        assert!(order >= 1, "cyclic group of order zero");
        BuiltinFactor::Cyclic { order, norm }
    }

    /// Representative in `(-order/2, order/2]`.
    fn centred(order: u64, r: i64) -> i64 {
        let n = order as i64;
        let r = r.rem_euclid(n);
        if 2 * r > n {
            r - n
        } else {
            r
        }
    }
}

impl Factor for BuiltinFactor {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        match *self {
            BuiltinFactor::Cyclic { order, .. } => (a + b).rem_euclid(order as i64),
            BuiltinFactor::Integers => a + b,
        }
    }

    fn invert(&self, a: &i64) -> i64 {
        match *self {
            BuiltinFactor::Cyclic { order, .. } => (-a).rem_euclid(order as i64),
            BuiltinFactor::Integers => -a,
        }
    }

    fn norm(&self, a: &i64) -> u64 {
        match *self {
            BuiltinFactor::Cyclic { order, norm } => {
                let r = Self::centred(order, *a);
                match norm {
                    CyclicNorm::Discrete => u64::from(r != 0),
                    CyclicNorm::Word => r.unsigned_abs(),
                }
            }
            BuiltinFactor::Integers => a.unsigned_abs(),
        }
    }

    fn nontrivial_within(&self, radius: u64) -> Vec<i64> {
        match *self {
            BuiltinFactor::Cyclic { order, .. } => (1..order as i64).filter(|r| self.norm(r) <= radius).collect(),
            BuiltinFactor::Integers => {
                let r = radius as i64;
                (-r..=r).filter(|&x| x != 0).collect()
            }
        }
    }
}

/// Any finite group oracle, with the discrete norm.
pub struct OracleFactor<G>(pub G);

impl<G: FiniteGroupOracle> Factor for OracleFactor<G> {
    type Elem = G::Element;

    fn identity(&self) -> G::Element {
        self.0.identity()
    }

    fn multiply(&self, a: &G::Element, b: &G::Element) -> G::Element {
        self.0.multiply(a, b)
    }

    fn invert(&self, a: &G::Element) -> G::Element {
        self.0.invert(a)
    }

    fn norm(&self, a: &G::Element) -> u64 {
        u64::from(*a != self.0.identity())
    }

    fn nontrivial_within(&self, radius: u64) -> Vec<G::Element> {
        if radius == 0 {
            return Vec::new();
        }
        let id = self.0.identity();
        let mut all: Vec<_> = self.0.elements().into_iter().filter(|g| *g != id).collect();
        all.sort();
        all
    }
}

// ---------------------------------------------------------------------------
// Projection families

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinProjection {
    /// Everything to the identity.
    Collapse,
    /// One step towards 0 (on the centred representative for cyclic groups).
    Shrink,
    /// The identity map; a negative control.
    Identity,
}

impl BuiltinProjection {
    pub fn apply(self, factor: &BuiltinFactor, x: i64) -> i64 {
        match self {
            BuiltinProjection::Collapse => 0,
            BuiltinProjection::Identity => x,
            BuiltinProjection::Shrink => match *factor {
                BuiltinFactor::Integers => x - x.signum(),
                BuiltinFactor::Cyclic { order, .. } => {
                    let r = BuiltinFactor::centred(order, x);
                    (r - r.signum()).rem_euclid(order as i64)
                }
            },
        }
    }

    /// Properties that hold for every factor of the given kind.
    pub fn declared(self, factor: &BuiltinFactor) -> DeclaredProperties {
        // diameter at most 1
        let discrete = matches!(factor, BuiltinFactor::Cyclic { norm: CyclicNorm::Discrete, .. })
            || matches!(factor, BuiltinFactor::Cyclic { order: 1..=3, .. });
        // shrinking agrees with collapsing on groups of order at most 3
        let small = matches!(factor, BuiltinFactor::Cyclic { order: 1..=3, .. });
        match self {
            BuiltinProjection::Collapse => DeclaredProperties {
                non_expansive: true,
                displacement_at_most_one: discrete,
                norm_decreasing: true,
                collapses_small: true,
            },
            BuiltinProjection::Shrink => {
                let all = matches!(factor, BuiltinFactor::Integers) || small;
                DeclaredProperties {
                    non_expansive: all,
                    displacement_at_most_one: true,
                    norm_decreasing: all,
                    collapses_small: all,
                }
            }
            BuiltinProjection::Identity => DeclaredProperties {
                non_expansive: true,
                displacement_at_most_one: true,
                norm_decreasing: false,
                collapses_small: false,
            },
        }
    }
}

/// Claimed properties of a factor projection, one per contraction condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DeclaredProperties {
    pub non_expansive: bool,
    pub displacement_at_most_one: bool,
    pub norm_decreasing: bool,
    pub collapses_small: bool,
}

type FactorMap<E> = Box<dyn Fn(&E) -> E + Send + Sync>;

/// One projection `p_i` per factor index, each with declared properties.
pub struct FactorProjectionFamily<E> {
    pub name: String,
    maps: BTreeMap<u32, (FactorMap<E>, DeclaredProperties)>,
}

impl<E> FactorProjectionFamily<E> {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), maps: BTreeMap::new() }
    }

    pub fn with(
        mut self,
        index: u32,
        map: impl Fn(&E) -> E + Send + Sync + 'static,
        declared: DeclaredProperties,
    ) -> Self {
        self.maps.insert(index, (Box::new(map), declared));
        self
    }

    pub fn covers(&self, index: u32) -> bool {
        self.maps.contains_key(&index)
    }

    pub fn declared(&self, index: u32) -> Option<DeclaredProperties> {
        self.maps.get(&index).map(|(_, d)| *d)
    }

    /// # Panics
    /// If the family has no map for `index`.
    pub fn apply(&self, index: u32, x: &E) -> E {
        let (map, _) = self.maps.get(&index).unwrap_or_else(|| panic!("no projection for factor {index}"));
        map(x)
    }
}

impl FactorProjectionFamily<i64> {
    /// The same built-in projection on every listed factor.
    pub fn builtin(factors: &BTreeMap<u32, BuiltinFactor>, projection: BuiltinProjection) -> Self {
        let mut family = Self::new(format!("{projection:?}").to_lowercase());
        for (&i, &factor) in factors {
            family = family.with(i, move |x| projection.apply(&factor, *x), projection.declared(&factor));
        }
        family
    }
}

/// Checks each factor projection on the factor's elements of norm at most
/// `radius` and returns the indices whose declared properties fail.
pub fn check_declared<F: Factor>(
    factors: &BTreeMap<u32, F>,
    family: &FactorProjectionFamily<F::Elem>,
    radius: u64,
) -> Vec<(u32, ConditionReport)> {
    let mut failures = Vec::new();
    for (&i, factor) in factors {
        let Some(declared) = family.declared(i) else { continue };
        let mut carrier = vec![factor.identity()];
        carrier.extend(factor.nontrivial_within(radius));
        let report = verify_contraction_conditions(
            &carrier,
            &Setting {
                project: &|x| family.apply(i, x),
                norm: &|x| factor.norm(x),
                distance: &|a, b| factor.norm(&factor.multiply(a, &factor.invert(b))),
                is_identity: &|x| factor.is_identity(x),
                displacement_bound: 1,
            },
        );
        let held = [
            report.non_expansive.passed(),
            report.displacement.passed(),
            report.norm_decrease.passed(),
            report.small_collapse.passed(),
        ];
        let claimed = [
            declared.non_expansive,
            declared.displacement_at_most_one,
            declared.norm_decreasing,
            declared.collapses_small,
        ];
        if claimed.iter().zip(held).any(|(&c, h)| c && !h) {
            failures.push((i, report));
        }
    }
    failures
}

// ---------------------------------------------------------------------------
// The four conditions

/// A projection together with the norm and metric it is judged against.
pub struct Setting<'a, X> {
    pub project: &'a dyn Fn(&X) -> X,
    pub norm: &'a dyn Fn(&X) -> u64,
    pub distance: &'a dyn Fn(&X, &X) -> u64,
    pub is_identity: &'a dyn Fn(&X) -> bool,
    /// The constant `L` in `d(p(g), g) <= L`.
    pub displacement_bound: u64,
}

/// Audit of the four single-projection conditions:
/// (i) `d(p(g), p(h)) <= d(g, h)`, (ii) `d(p(g), g) <= L`,
/// (iii) `‖p(g)‖ <= ‖g‖ - 1` when `‖g‖ >= 1`, (iv) `p(g) = 1` when `‖g‖ <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub elements: u64,
    pub non_expansive: LemmaAudit,
    pub displacement: LemmaAudit,
    pub norm_decrease: LemmaAudit,
    pub small_collapse: LemmaAudit,
}

impl ConditionReport {
    pub fn new(displacement_bound: u64) -> Self {
        Self {
            elements: 0,
            non_expansive: LemmaAudit::new("(i)", "d(p(g), p(h)) - d(g, h) <= 0", 0.0),
            displacement: LemmaAudit::new("(ii)", "d(p(g), g) <= L", displacement_bound as f64),
            norm_decrease: LemmaAudit::new("(iii)", "‖p(g)‖ - ‖g‖ + 1 <= 0 for ‖g‖ >= 1", 0.0),
            small_collapse: LemmaAudit::new("(iv)", "p(g) = 1 for ‖g‖ <= 1", 0.0),
        }
    }

    pub fn audits(&self) -> [&LemmaAudit; 4] {
        [&self.non_expansive, &self.displacement, &self.norm_decrease, &self.small_collapse]
    }

    /// Labels of the conditions with at least one violation.
    pub fn failed_conditions(&self) -> Vec<String> {
        self.audits().iter().filter(|a| !a.passed()).map(|a| a.lemma.clone()).collect()
    }

    pub fn passed(&self) -> bool {
        self.audits().iter().all(|a| a.passed())
    }

    pub fn observe_element<X: fmt::Display>(&mut self, s: &Setting<'_, X>, g: &X) {
        self.elements += 1;
        let pg = (s.project)(g);
        let norm = (s.norm)(g);
        self.displacement.observe((s.distance)(&pg, g) as f64, || g.to_string());
        if norm >= 1 {
            let value = (s.norm)(&pg) as f64 - norm as f64 + 1.0;
            self.norm_decrease.observe(value, || g.to_string());
        }
        if norm <= 1 {
            self.small_collapse.observe_holds((s.is_identity)(&pg), || g.to_string());
        }
    }

    pub fn observe_pair<X: fmt::Display>(&mut self, s: &Setting<'_, X>, g: &X, h: &X) {
        let lhs = (s.distance)(&(s.project)(g), &(s.project)(h)) as f64;
        let rhs = (s.distance)(g, h) as f64;
        self.non_expansive.observe(lhs - rhs, || format!("g={g} h={h}"));
    }

    pub fn merge(&mut self, other: ConditionReport) {
        self.elements += other.elements;
        self.non_expansive.merge(other.non_expansive);
        self.displacement.merge(other.displacement);
        self.norm_decrease.merge(other.norm_decrease);
        self.small_collapse.merge(other.small_collapse);
    }
}

/// Every element and every ordered pair of `carrier`.
pub fn verify_contraction_conditions<X: fmt::Display>(carrier: &[X], setting: &Setting<'_, X>) -> ConditionReport {
    let mut report = ConditionReport::new(setting.displacement_bound);
    let projected: Vec<X> = carrier.iter().map(|g| (setting.project)(g)).collect();
    for (i, g) in carrier.iter().enumerate() {
        report.observe_element(setting, g);
        for (j, h) in carrier.iter().enumerate() {
            let lhs = (setting.distance)(&projected[i], &projected[j]) as f64;
            let rhs = (setting.distance)(g, h) as f64;
            report.non_expansive.observe(lhs - rhs, || format!("g={g} h={h}"));
        }
    }
    report
}

/// `n ↦ n - sign(n)` on `[-radius, radius]` with the absolute value.
pub fn verify_integer_shrink(radius: i64) -> ConditionReport {
    let carrier: Vec<i64> = (-radius..=radius).collect();
    let z = BuiltinFactor::Integers;
    verify_contraction_conditions(
        &carrier,
        &Setting {
            project: &|x| BuiltinProjection::Shrink.apply(&z, *x),
            norm: &|x| x.unsigned_abs(),
            distance: &|a, b| a.abs_diff(*b),
            is_identity: &|x| *x == 0,
            displacement_bound: 1,
        },
    )
}

// ---------------------------------------------------------------------------
// Letters and text format

fn parse_letters<E: FromStr>(s: &str) -> Result<Vec<(u32, E)>, ProductError> {
    let err = |reason: &str| ProductError::Parse { input: s.to_string(), reason: reason.to_string() };
    let t = s.trim();
    if t.is_empty() || t == "1" {
        return Ok(Vec::new());
    }
    let mut letters = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
        let close = body.find(')').ok_or_else(|| err("unclosed '('"))?;
        let (index, elem) = body[..close].split_once(':').ok_or_else(|| err("expected factor:element"))?;
        let index = index.trim().parse::<u32>().map_err(|_| err("bad factor index"))?;
        let elem = elem.trim().parse::<E>().map_err(|_| err("bad element"))?;
        letters.push((index, elem));
        rest = body[close + 1..].trim_start();
    }
    Ok(letters)
}

fn write_letters<'a, E: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    letters: impl Iterator<Item = (&'a u32, &'a E)>,
) -> fmt::Result {
    let mut empty = true;
    for (i, g) in letters {
        empty = false;
        write!(f, "({i}:{g})")?;
    }
    if empty {
        f.write_str("1")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Free products

/// A word with no identity letters and no two adjacent letters from the
/// same factor. Build through [`FreeProduct::reduce`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord<E> {
    letters: Vec<(u32, E)>,
}

impl<E> ReducedWord<E> {
    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[(u32, E)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl<E: fmt::Display> fmt::Display for ReducedWord<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.letters.iter().map(|(i, g)| (i, g)))
    }
}

impl<E: fmt::Display> Serialize for ReducedWord<E> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub struct FreeProduct<F> {
    factors: BTreeMap<u32, F>,
}

impl<F: Factor> FreeProduct<F> {
    pub fn new(factors: impl IntoIterator<Item = (u32, F)>) -> Self {
        Self { factors: factors.into_iter().collect() }
    }

    pub fn factors(&self) -> &BTreeMap<u32, F> {
        &self.factors
    }

    fn factor(&self, i: u32) -> &F {
        self.factors.get(&i).unwrap_or_else(|| panic!("no factor with index {i}"))
    }

    /// Drops identity letters and merges adjacent letters of one factor.
    ///
    /// # Panics
    /// If a letter names an index outside the product.
    pub fn reduce(&self, raw: impl IntoIterator<Item = (u32, F::Elem)>) -> ReducedWord<F::Elem> {
        let mut stack: Vec<(u32, F::Elem)> = Vec::new();
        for (i, g) in raw {
            let factor = self.factor(i);
            if factor.is_identity(&g) {
                continue;
            }
            match stack.last_mut() {
                Some((j, top)) if *j == i => {
                    let merged = factor.multiply(top, &g);
                    if factor.is_identity(&merged) {
                        stack.pop();
                    } else {
                        *top = merged;
                    }
                }
                _ => stack.push((i, g)),
            }
        }
        ReducedWord { letters: stack }
    }

    pub fn parse_word(&self, s: &str) -> Result<ReducedWord<F::Elem>, ProductError>
    where
        F::Elem: FromStr,
    {
        let letters = parse_letters::<F::Elem>(s)?;
        if let Some((i, _)) = letters.iter().find(|(i, _)| !self.factors.contains_key(i)) {
            return Err(ProductError::UnknownFactor(*i));
        }
        Ok(self.reduce(letters))
    }

    /// The one-letter word `g ∈ G_i`.
    pub fn include(&self, i: u32, g: F::Elem) -> ReducedWord<F::Elem> {
        self.reduce([(i, g)])
    }

    pub fn multiply(&self, a: &ReducedWord<F::Elem>, b: &ReducedWord<F::Elem>) -> ReducedWord<F::Elem> {
        self.reduce(a.letters.iter().chain(&b.letters).cloned())
    }

    pub fn invert(&self, a: &ReducedWord<F::Elem>) -> ReducedWord<F::Elem> {
        ReducedWord { letters: a.letters.iter().rev().map(|(i, g)| (*i, self.factor(*i).invert(g))).collect() }
    }

    pub fn l1_norm(&self, w: &ReducedWord<F::Elem>) -> u64 {
        w.letters.iter().map(|(i, g)| self.factor(*i).norm(g)).sum()
    }

    /// Number of letters: the `ℓ1` norm for discrete factor norms.
    pub fn supp_norm(&self, w: &ReducedWord<F::Elem>) -> u64 {
        w.len() as u64
    }

    /// `‖a b⁻¹‖_{ℓ1}`.
    pub fn distance(&self, a: &ReducedWord<F::Elem>, b: &ReducedWord<F::Elem>) -> u64 {
        self.l1_norm(&self.multiply(a, &self.invert(b)))
    }

    /// Applies the first letter's factor projection and reduces again.
    pub fn prefix_project(
        &self,
        family: &FactorProjectionFamily<F::Elem>,
        w: &ReducedWord<F::Elem>,
    ) -> ReducedWord<F::Elem> {
        let Some((first, rest)) = w.letters.split_first() else { return ReducedWord::empty() };
        let head = (first.0, family.apply(first.0, &first.1));
        self.reduce(std::iter::once(head).chain(rest.iter().cloned()))
    }

    /// All reduced words of `ℓ1` norm at most `budget`, the empty word first.
    pub fn words_within(&self, budget: u64) -> Vec<ReducedWord<F::Elem>> {
        let letters: Vec<(u32, F::Elem, u64)> = self
            .factors
            .iter()
            .flat_map(|(&i, f)| f.nontrivial_within(budget).into_iter().map(move |g| (i, g.clone(), f.norm(&g))))
            .filter(|(_, _, n)| *n <= budget)
            .collect();
        let mut out = vec![ReducedWord::empty()];
        // (letters so far, norm used)
        let mut frontier = vec![(Vec::<(u32, F::Elem)>::new(), 0u64)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (word, used) in &frontier {
                for (i, g, n) in &letters {
                    if used + n > budget || word.last().is_some_and(|(j, _)| j == i) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push((*i, g.clone()));
                    out.push(ReducedWord { letters: w.clone() });
                    next.push((w, used + n));
                }
            }
            frontier = next;
        }
        out
    }

    /// The four conditions for [`Self::prefix_project`] on every word of norm
    /// at most `budget` and every ordered pair of such words.
    pub fn verify_prefix_projection(&self, family: &FactorProjectionFamily<F::Elem>, budget: u64) -> ConditionReport {
        let words = self.words_within(budget);
        verify_contraction_conditions(
            &words,
            &Setting {
                project: &|w| self.prefix_project(family, w),
                norm: &|w| self.l1_norm(w),
                distance: &|a, b| self.distance(a, b),
                is_identity: &|w| w.is_empty(),
                displacement_bound: 1,
            },
        )
    }
}

// ---------------------------------------------------------------------------
// Direct sums

/// Finitely many non-identity terms indexed by factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparseSumElement<E> {
    terms: BTreeMap<u32, E>,
}

impl<E> SparseSumElement<E> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<u32, E> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }
}

impl<E: fmt::Display> fmt::Display for SparseSumElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.terms.iter())
    }
}

impl<E: fmt::Display> Serialize for SparseSumElement<E> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub struct DirectSum<F> {
    factors: BTreeMap<u32, F>,
}

impl<F: Factor> DirectSum<F> {
    pub fn new(factors: impl IntoIterator<Item = (u32, F)>) -> Self {
        Self { factors: factors.into_iter().collect() }
    }

    pub fn factors(&self) -> &BTreeMap<u32, F> {
        &self.factors
    }

    fn factor(&self, i: u32) -> &F {
        self.factors.get(&i).unwrap_or_else(|| panic!("no factor with index {i}"))
    }

    /// Sums terms by index and drops identities.
    ///
    /// # Panics
    /// If a term names an index outside the sum.
    pub fn element(&self, terms: impl IntoIterator<Item = (u32, F::Elem)>) -> SparseSumElement<F::Elem> {
        let mut out: BTreeMap<u32, F::Elem> = BTreeMap::new();
        for (i, g) in terms {
            let f = self.factor(i);
            let v = match out.remove(&i) {
                Some(prev) => f.multiply(&prev, &g),
                None => g,
            };
            if !f.is_identity(&v) {
                out.insert(i, v);
            }
        }
        SparseSumElement { terms: out }
    }

    pub fn parse_element(&self, s: &str) -> Result<SparseSumElement<F::Elem>, ProductError>
    where
        F::Elem: FromStr,
    {
        let terms = parse_letters::<F::Elem>(s)?;
        if let Some((i, _)) = terms.iter().find(|(i, _)| !self.factors.contains_key(i)) {
            return Err(ProductError::UnknownFactor(*i));
        }
        Ok(self.element(terms))
    }

    pub fn add(&self, a: &SparseSumElement<F::Elem>, b: &SparseSumElement<F::Elem>) -> SparseSumElement<F::Elem> {
        self.element(a.terms.iter().chain(&b.terms).map(|(i, g)| (*i, g.clone())))
    }

    pub fn negate(&self, a: &SparseSumElement<F::Elem>) -> SparseSumElement<F::Elem> {
        SparseSumElement { terms: a.terms.iter().map(|(i, g)| (*i, self.factor(*i).invert(g))).collect() }
    }

    pub fn l1_norm(&self, a: &SparseSumElement<F::Elem>) -> u64 {
        a.terms.iter().map(|(i, g)| self.factor(*i).norm(g)).sum()
    }

    /// Number of non-identity terms.
    pub fn supp_norm(&self, a: &SparseSumElement<F::Elem>) -> u64 {
        a.terms.len() as u64
    }

    pub fn distance(&self, a: &SparseSumElement<F::Elem>, b: &SparseSumElement<F::Elem>) -> u64 {
        self.l1_norm(&self.add(a, &self.negate(b)))
    }

    /// Projects the least-index term, dropping it if it becomes the identity.
    pub fn sum_project(
        &self,
        family: &FactorProjectionFamily<F::Elem>,
        g: &SparseSumElement<F::Elem>,
    ) -> SparseSumElement<F::Elem> {
        let Some((&i, head)) = g.terms.first_key_value() else { return SparseSumElement::zero() };
        let mut terms = g.terms.clone();
        let p = family.apply(i, head);
        if self.factor(i).is_identity(&p) {
            terms.remove(&i);
        } else {
            terms.insert(i, p);
        }
        SparseSumElement { terms }
    }

    /// Every element with at most `max_terms` terms, each of norm at most
    /// `radius`. Only sensible for small sums.
    pub fn elements_within(&self, max_terms: usize, radius: u64) -> Vec<SparseSumElement<F::Elem>> {
        let choices: Vec<(u32, Vec<F::Elem>)> =
            self.factors.iter().map(|(&i, f)| (i, f.nontrivial_within(radius))).collect();
        let mut out = Vec::new();
        fn rec<E: Clone>(
            choices: &[(u32, Vec<E>)],
            start: usize,
            left: usize,
            current: &mut BTreeMap<u32, E>,
            out: &mut Vec<SparseSumElement<E>>,
        ) {
            out.push(SparseSumElement { terms: current.clone() });
            if left == 0 {
                return;
            }
            for k in start..choices.len() {
                let (i, elems) = &choices[k];
                for g in elems {
                    current.insert(*i, g.clone());
                    rec(choices, k + 1, left - 1, current, out);
                    current.remove(i);
                }
            }
        }
        rec(&choices, 0, max_terms, &mut BTreeMap::new(), &mut out);
        out
    }

    /// The four conditions for [`Self::sum_project`] over every element and
    /// ordered pair of `carrier`.
    pub fn verify_sum_projection(
        &self,
        family: &FactorProjectionFamily<F::Elem>,
        carrier: &[SparseSumElement<F::Elem>],
    ) -> ConditionReport {
        verify_contraction_conditions(
            carrier,
            &Setting {
                project: &|g| self.sum_project(family, g),
                norm: &|g| self.l1_norm(g),
                distance: &|a, b| self.distance(a, b),
                is_identity: &|g| g.is_zero(),
                displacement_bound: 1,
            },
        )
    }
}

/// `⊕_{i = 1..=max_index} Z/i` with discrete norms.
pub fn truncated_cyclic_sum(max_index: u32) -> DirectSum<BuiltinFactor> {
    DirectSum::new((1..=max_index).map(|i| (i, BuiltinFactor::cyclic(u64::from(i), CyclicNorm::Discrete))))
}

/// Relation of a pair of sum elements at one coordinate of the union of
/// their supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    OnlyLeft,
    OnlyRight,
    Equal,
    Different,
}

/// The four conditions for collapse projections on `⊕_{i <= max_index} Z/i`
/// with the support norm, over all pairs with at most `max_terms` terms each.
///
/// With discrete norms and collapsing factor maps, every quantity in the four
/// conditions depends only on the left-to-right pattern of the union of the
/// two supports, recording at each coordinate whether it belongs to one
/// element, to both with equal entries, or to both with different entries.
/// The check runs one concrete pair per realisable pattern, placed on the
/// smallest indices that can host it; `distinct_coordinates` counts the
/// number of coordinates of order at least 3, which bounds pattern length.
pub fn verify_collapse_patterns(max_index: u32, max_terms: usize) -> (ConditionReport, usize) {
    let sum = truncated_cyclic_sum(max_index);
    let family = FactorProjectionFamily::builtin(sum.factors(), BuiltinProjection::Collapse);
    let hosts: Vec<u32> = (3..=max_index).collect();
    let setting = Setting {
        project: &|g: &SparseSumElement<i64>| sum.sum_project(&family, g),
        norm: &|g: &SparseSumElement<i64>| sum.l1_norm(g),
        distance: &|a: &SparseSumElement<i64>, b: &SparseSumElement<i64>| sum.distance(a, b),
        is_identity: &|g: &SparseSumElement<i64>| g.is_zero(),
        displacement_bound: 1,
    };
    let mut report = ConditionReport::new(1);
    let mut seen = HashSet::new();
    let mut patterns = 0usize;
    let mut stack: Vec<Vec<Slot>> = vec![Vec::new()];
    while let Some(pattern) = stack.pop() {
        let left = pattern.iter().filter(|s| **s != Slot::OnlyRight).count();
        let right = pattern.iter().filter(|s| **s != Slot::OnlyLeft).count();
        patterns += 1;
        let (mut g, mut h) = (Vec::new(), Vec::new());
        for (slot, &i) in pattern.iter().zip(&hosts) {
            match slot {
                Slot::OnlyLeft => g.push((i, 1)),
                Slot::OnlyRight => h.push((i, 1)),
                Slot::Equal => {
                    g.push((i, 1));
                    h.push((i, 1));
                }
                Slot::Different => {
                    g.push((i, 1));
                    h.push((i, 2));
                }
            }
        }
        let (g, h) = (sum.element(g), sum.element(h));
        for x in [&g, &h] {
            if seen.insert(x.clone()) {
                report.observe_element(&setting, x);
            }
        }
        report.observe_pair(&setting, &g, &h);
        if pattern.len() == hosts.len() {
            continue;
        }
        for slot in [Slot::OnlyLeft, Slot::OnlyRight, Slot::Equal, Slot::Different] {
            let grows_left = slot != Slot::OnlyRight;
            let grows_right = slot != Slot::OnlyLeft;
            if left + usize::from(grows_left) <= max_terms && right + usize::from(grows_right) <= max_terms {
                let mut next = pattern.clone();
                next.push(slot);
                stack.push(next);
            }
        }
    }
    (report, patterns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_z3() -> FreeProduct<BuiltinFactor> {
        FreeProduct::new([
            (1, BuiltinFactor::cyclic(2, CyclicNorm::Discrete)),
            (2, BuiltinFactor::cyclic(3, CyclicNorm::Discrete)),
        ])
    }

    #[test]
    fn reduction_examples() {
        let fp = z2_z3();
        assert!(fp.reduce([(2, 1), (2, 2)]).is_empty());
        assert_eq!(fp.reduce([(2, 1), (2, 1)]).letters(), &[(2, 2)]);
        let alt = vec![(1, 1), (2, 1), (1, 1), (2, 2), (1, 1), (2, 1)];
        assert_eq!(fp.reduce(alt.clone()).letters(), alt.as_slice());
        // cancellation cascades through the middle
        assert!(fp.reduce([(1, 1), (2, 1), (2, 2), (1, 1)]).is_empty());
        assert_eq!(fp.reduce([(1, 0), (2, 1), (1, 0)]).letters(), &[(2, 1)]);
    }

    #[test]
    fn norms_and_text() {
        let fp = z2_z3();
        assert_eq!(fp.l1_norm(&ReducedWord::empty()), 0);
        let w = fp.parse_word("(1:1)(2:2)").unwrap();
        assert_eq!(fp.l1_norm(&w), 2);
        assert_eq!(w.to_string(), "(1:1)(2:2)");
        assert_eq!(ReducedWord::<i64>::empty().to_string(), "1");
        assert_eq!(fp.parse_word("(3:1)"), Err(ProductError::UnknownFactor(3)));
        assert!(fp.parse_word("(1:x)").is_err());
        assert!(fp.parse_word("(1 1)").is_err());

        let zz = FreeProduct::new([(1, BuiltinFactor::Integers), (2, BuiltinFactor::Integers)]);
        let w = zz.reduce([(1, 3), (2, -2)]);
        assert_eq!(zz.l1_norm(&w), 5);
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"(1:3)(2:-2)\"");
    }

    #[test]
    fn prefix_projection_examples() {
        let zz = FreeProduct::new([(1, BuiltinFactor::Integers), (2, BuiltinFactor::Integers)]);
        let shrink = FactorProjectionFamily::builtin(zz.factors(), BuiltinProjection::Shrink);
        assert!(zz.prefix_project(&shrink, &ReducedWord::empty()).is_empty());
        assert_eq!(zz.prefix_project(&shrink, &zz.include(1, 3)).letters(), &[(1, 2)]);
        let w = zz.reduce([(1, 1), (2, 7)]);
        assert_eq!(zz.prefix_project(&shrink, &w).letters(), &[(2, 7)]);
    }

    #[test]
    fn sum_projection_examples() {
        let sum = truncated_cyclic_sum(20);
        let collapse = FactorProjectionFamily::builtin(sum.factors(), BuiltinProjection::Collapse);
        assert!(sum.sum_project(&collapse, &SparseSumElement::zero()).is_zero());
        assert!(sum.sum_project(&collapse, &sum.element([(5, 3)])).is_zero());
        let g = sum.element([(2, 1), (7, 4)]);
        let p = sum.sum_project(&collapse, &g);
        assert_eq!(p, sum.element([(7, 4)]));
        assert_eq!(sum.element([(4, 3), (4, 1)]), SparseSumElement::zero());
        assert_eq!(sum.parse_element("(7:4)(2:1)").unwrap(), g);
        assert_eq!(g.to_string(), "(2:1)(7:4)");
    }

    #[test]
    fn cyclic_shrink_wraps_correctly() {
        let z5 = BuiltinFactor::cyclic(5, CyclicNorm::Word);
        assert_eq!(BuiltinProjection::Shrink.apply(&z5, 4), 0);
        assert_eq!(BuiltinProjection::Shrink.apply(&z5, 3), 4);
        assert_eq!(z5.norm(&3), 2);
        assert_eq!(z5.nontrivial_within(1), vec![1, 4]);
    }

    #[test]
    fn word_enumeration_counts() {
        // Z/2 * Z/3: alternating words; with budget 2 there are
        // 1 + (1 + 2) + (2 + 2) = 8 words
        assert_eq!(z2_z3().words_within(2).len(), 8);
    }

    #[test]
    fn identity_projection_fails_iii() {
        let fp = z2_z3();
        let id = FactorProjectionFamily::builtin(fp.factors(), BuiltinProjection::Identity);
        let report = fp.verify_prefix_projection(&id, 4);
        assert!(report.non_expansive.passed() && report.displacement.passed());
        assert!(report.failed_conditions().contains(&"(iii)".to_string()));
    }

    #[test]
    fn declared_properties_are_checked() {
        let factors: BTreeMap<u32, BuiltinFactor> = [
            (1, BuiltinFactor::cyclic(7, CyclicNorm::Word)),
            (2, BuiltinFactor::Integers),
            (3, BuiltinFactor::cyclic(4, CyclicNorm::Discrete)),
        ]
        .into();
        for p in [BuiltinProjection::Collapse, BuiltinProjection::Shrink, BuiltinProjection::Identity] {
            let family = FactorProjectionFamily::builtin(&factors, p);
            assert!(check_declared(&factors, &family, 6).is_empty(), "{p:?}");
        }
        // an over-claiming family is caught
        let liar = FactorProjectionFamily::new("liar").with(
            1,
            |x| BuiltinProjection::Shrink.apply(&BuiltinFactor::cyclic(7, CyclicNorm::Word), *x),
            DeclaredProperties { non_expansive: true, ..Default::default() },
        );
        assert_eq!(check_declared(&factors, &liar, 6).len(), 1);
    }
}

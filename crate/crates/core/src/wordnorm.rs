//! Exact word norms on finite groups given by an oracle, conjugacy
//! closures of generating sets, and comparisons between norm tables.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::io::Write;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::{dense, Permutation};

#[derive(Debug, Error)]
pub enum WordNormError {
    #[error("generating set reaches {reached} of {total} elements ({} unreached)", total - reached)]
    NotGenerating { reached: usize, total: usize },
    #[error("tables are over different carriers")]
    CarrierMismatch,
    #[error("cannot parse group family {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("export failed: {0}")]
    Export(String),
}

/// A finite group given by its elements and operations.
pub trait FiniteGroupOracle: Sync {
    type Element: Clone + Eq + Hash + Ord + fmt::Display + Send + Sync;

    fn elements(&self) -> Vec<Self::Element>;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;
    fn identity(&self) -> Self::Element;

    fn conjugate(&self, x: &Self::Element, by: &Self::Element) -> Self::Element {
        self.multiply(&self.multiply(by, x), &self.invert(by))
    }
}

/// Results of [`check_group_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAxiomReport {
    pub order: usize,
    pub identity_law: bool,
    pub inverse_law: bool,
    pub closed: bool,
    pub associativity_triples: usize,
    pub associativity_failures: usize,
}

impl GroupAxiomReport {
    pub fn passed(&self) -> bool {
        self.identity_law && self.inverse_law && self.closed && self.associativity_failures == 0
    }
}

/// Identity and inverse laws on every element, associativity on random
/// triples.
pub fn check_group_axioms<G: FiniteGroupOracle, R: Rng + ?Sized>(
    group: &G,
    rng: &mut R,
    triples: usize,
) -> GroupAxiomReport {
    let elements = group.elements();
    let mut sorted = elements.clone();
    sorted.sort();
    let member = |x: &G::Element| sorted.binary_search(x).is_ok();
    let e = group.identity();
    let identity_law = elements.iter().all(|x| group.multiply(x, &e) == *x && group.multiply(&e, x) == *x);
    let inverse_law = elements.iter().all(|x| {
        let inv = group.invert(x);
        member(&inv) && group.multiply(x, &inv) == e && group.multiply(&inv, x) == e
    });
    let mut closed = member(&e);
    let mut associativity_failures = 0;
    if !elements.is_empty() {
        for _ in 0..triples {
            let pick = |rng: &mut R| &elements[rng.random_range(0..elements.len())];
            let (a, b, c) = (pick(rng), pick(rng), pick(rng));
            let ab = group.multiply(a, b);
            let bc = group.multiply(b, c);
            closed &= member(&ab) && member(&bc);
            if group.multiply(&ab, c) != group.multiply(a, &bc) {
                associativity_failures += 1;
            }
        }
    }
    GroupAxiomReport {
        order: elements.len(),
        identity_law,
        inverse_law,
        closed,
        associativity_triples: triples,
        associativity_failures,
    }
}

/// The carrier enumerated once, with dense ids.
pub struct IndexedGroup<'a, G: FiniteGroupOracle> {
    pub group: &'a G,
    pub elements: Vec<G::Element>,
    index: HashMap<G::Element, usize>,
}

impl<'a, G: FiniteGroupOracle> IndexedGroup<'a, G> {
    pub fn new(group: &'a G) -> Self {
        let elements = group.elements();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { group, elements, index }
    }

    pub fn id_of(&self, e: &G::Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Smallest conjugation-invariant set containing the seeds and their
/// inverses, sorted.
pub fn conjugacy_closure<G: FiniteGroupOracle>(group: &G, seeds: &[G::Element]) -> Vec<G::Element> {
    let elements = group.elements();
    let mut out: Vec<G::Element> = seeds
        .iter()
        .flat_map(|s| [s.clone(), group.invert(s)])
        .flat_map(|s| elements.iter().map(move |g| (s.clone(), g)))
        .map(|(s, g)| group.conjugate(&s, g))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Word lengths of every element of a finite group.
#[derive(Debug, Clone)]
pub struct NormTable<E> {
    pub elements: Vec<E>,
    pub values: Vec<u32>,
    /// Inverse-closed, sorted.
    pub generating_set: Vec<E>,
    index: HashMap<E, usize>,
}

#[derive(Serialize)]
struct NormRow<'a> {
    element: String,
    norm: &'a u32,
}

impl<E: Clone + Eq + Hash + Ord + fmt::Display> NormTable<E> {
    /// A table from explicit values, e.g. a closed-form norm.
    pub fn from_fn(elements: Vec<E>, generating_set: Vec<E>, norm: impl Fn(&E) -> u32) -> Self {
        let values = elements.iter().map(&norm).collect();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { elements, values, generating_set, index }
    }

    pub fn get(&self, e: &E) -> Option<u32> {
        self.index.get(e).map(|&i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, u32)> {
        self.elements.iter().zip(self.values.iter().copied())
    }

    pub fn diameter(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    fn rows(&self) -> Vec<NormRow<'_>> {
        self.elements.iter().zip(&self.values).map(|(e, norm)| NormRow { element: e.to_string(), norm }).collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), WordNormError> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.rows() {
            w.serialize(row).map_err(|e| WordNormError::Export(e.to_string()))?;
        }
        w.flush().map_err(|e| WordNormError::Export(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "generating_set": self.generating_set.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "values": self.rows(),
        })
    }
}

/// Breadth-first word lengths from the identity. Inverses of the given
/// generators are added.
pub fn bfs_norm<G: FiniteGroupOracle>(group: &G, gens: &[G::Element]) -> Result<NormTable<G::Element>, WordNormError> {
    let indexed = IndexedGroup::new(group);
    let mut generating_set: Vec<G::Element> = gens.iter().flat_map(|s| [s.clone(), group.invert(s)]).collect();
    generating_set.sort();
    generating_set.dedup();
    let total = indexed.len();
    let mut values = vec![u32::MAX; total];
    let start = indexed.id_of(&group.identity()).expect("identity in carrier");
    values[start] = 0;
    let mut frontier = vec![start];
    let mut level = 0;
    let mut reached = 1;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for s in &generating_set {
                let j = indexed.id_of(&group.multiply(&indexed.elements[i], s)).expect("carrier closed under products");
                if values[j] == u32::MAX {
                    values[j] = level;
                    next.push(j);
                    reached += 1;
                }
            }
        }
        frontier = next;
    }
    if reached < total {
        return Err(WordNormError::NotGenerating { reached, total });
    }
    Ok(NormTable { elements: indexed.elements, values, generating_set, index: indexed.index })
}

/// Smallest `C` with `μ <= C ν` on non-identity elements, and an element
/// attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domination<E> {
    pub constant: Ratio<u64>,
    pub witness: Option<E>,
}

pub fn audit_domination<E: Clone + Eq + Hash + Ord + fmt::Display>(
    nu: &NormTable<E>,
    mu: &NormTable<E>,
) -> Result<Domination<E>, WordNormError> {
    if nu.elements.len() != mu.elements.len() {
        return Err(WordNormError::CarrierMismatch);
    }
    let mut best = Domination { constant: Ratio::from_integer(0), witness: None };
    for (e, n) in nu.iter() {
        let m = mu.get(e).ok_or(WordNormError::CarrierMismatch)?;
        if n == 0 {
            continue;
        }
        let c = Ratio::new(m as u64, n as u64);
        if best.witness.is_none() || c > best.constant {
            best = Domination { constant: c, witness: Some(e.clone()) };
        }
    }
    Ok(best)
}

/// Results of [`check_norm_axioms`]; each count is a number of failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormAxiomReport {
    pub identity_zero: bool,
    pub positivity_failures: usize,
    pub symmetry_failures: usize,
    pub triangle_failures: usize,
    pub conjugation_failures: usize,
}

impl NormAxiomReport {
    pub fn passed(&self) -> bool {
        self.identity_zero
            && self.positivity_failures == 0
            && self.symmetry_failures == 0
            && self.triangle_failures == 0
            && self.conjugation_failures == 0
    }
}

/// Checks the norm axioms and conjugation invariance on all elements and
/// all pairs.
pub fn check_norm_axioms<G: FiniteGroupOracle>(group: &G, table: &NormTable<G::Element>) -> NormAxiomReport {
    let norm = |e: &G::Element| table.get(e).expect("element in table");
    let e = group.identity();
    let mut report = NormAxiomReport {
        identity_zero: norm(&e) == 0,
        positivity_failures: 0,
        symmetry_failures: 0,
        triangle_failures: 0,
        conjugation_failures: 0,
    };
    for (g, ng) in table.iter() {
        report.positivity_failures += usize::from(*g != e && ng == 0);
        report.symmetry_failures += usize::from(norm(&group.invert(g)) != ng);
        for (h, nh) in table.iter() {
            report.triangle_failures += usize::from(norm(&group.multiply(g, h)) > ng + nh);
            report.conjugation_failures += usize::from(norm(&group.conjugate(g, h)) != ng);
        }
    }
    report
}

/// Built-in finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GroupFamily {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(u32),
    Product(Vec<GroupFamily>),
}

/// Element of a [`GroupFamily`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyElement {
    Perm(Permutation),
    Residue(u32),
    Tuple(Vec<FamilyElement>),
}

impl fmt::Display for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyElement::Perm(p) => write!(f, "{p}"),
            FamilyElement::Residue(r) => write!(f, "{r}"),
            FamilyElement::Tuple(parts) => {
                f.write_str("[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Symmetric(n) => write!(f, "S{n}"),
            GroupFamily::Alternating(n) => write!(f, "A{n}"),
            GroupFamily::Cyclic(n) => write!(f, "Z{n}"),
            GroupFamily::Product(parts) => {
                let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&names.join(" x "))
            }
        }
    }
}

impl FromStr for GroupFamily {
    type Err = WordNormError;

    /// Accepts `S5`, `A6`, `Z7` and products such as `S3 x Z4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| WordNormError::Parse { input: s.to_string(), reason: reason.to_string() };
        let parts: Vec<&str> = s.split(['x', '×']).map(str::trim).collect();
        if parts.len() > 1 {
            return parts.iter().map(|p| p.parse()).collect::<Result<Vec<_>, _>>().map(GroupFamily::Product);
        }
        let part = parts[0];
        let mut chars = part.chars();
        let kind = chars.next().ok_or_else(|| err("empty"))?;
        let n: usize = chars.as_str().parse().map_err(|_| err("expected a size after the family letter"))?;
        let family = match kind {
            'S' if (1..=dense::MAX_DENSE_DEGREE).contains(&n) => GroupFamily::Symmetric(n),
            'A' if (1..=dense::MAX_DENSE_DEGREE).contains(&n) => GroupFamily::Alternating(n),
            'Z' if n >= 1 && n <= u32::MAX as usize => GroupFamily::Cyclic(n as u32),
            'S' | 'A' => return Err(err("degree outside 1..=10")),
            'Z' => return Err(err("order must be positive")),
            _ => return Err(err("family must be S, A or Z")),
        };
        Ok(family)
    }
}

impl TryFrom<String> for GroupFamily {
    type Error = WordNormError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GroupFamily> for String {
    fn from(g: GroupFamily) -> String {
        g.to_string()
    }
}

impl GroupFamily {
    pub fn order(&self) -> usize {
        match self {
            GroupFamily::Symmetric(n) => dense::factorial(*n),
            GroupFamily::Alternating(n) => dense::factorial(*n).div_ceil(2).max(1),
            GroupFamily::Cyclic(n) => *n as usize,
            GroupFamily::Product(parts) => parts.iter().map(GroupFamily::order).product(),
        }
    }

    /// The conjugation-closed generating set used by default: all
    /// transpositions, all 3-cycles, `{±1}`, and the union of the factors'
    /// sets placed in each coordinate.
    pub fn default_generators(&self) -> Vec<FamilyElement> {
        let perms = |tables: Vec<Vec<u8>>| {
            tables.iter().map(|t| FamilyElement::Perm(Permutation::from_dense(t))).collect::<Vec<_>>()
        };
        match self {
            GroupFamily::Symmetric(n) => perms(
                (0..*n)
                    .flat_map(|a| (a + 1..*n).map(move |b| (a, b)))
                    .map(|(a, b)| {
                        let mut t = dense::identity(*n);
                        t.swap(a, b);
                        t
                    })
                    .collect(),
            ),
            GroupFamily::Alternating(n) => perms(dense::three_cycles(*n)),
            GroupFamily::Cyclic(n) => vec![FamilyElement::Residue(1 % n), FamilyElement::Residue((n - 1) % n)],
            GroupFamily::Product(parts) => {
                let identities: Vec<FamilyElement> = parts.iter().map(|p| p.identity()).collect();
                parts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, p)| {
                        let identities = identities.clone();
                        p.default_generators().into_iter().map(move |g| {
                            let mut t = identities.clone();
                            t[i] = g;
                            FamilyElement::Tuple(t)
                        })
                    })
                    .collect()
            }
        }
    }
}

impl FiniteGroupOracle for GroupFamily {
    type Element = FamilyElement;

    fn elements(&self) -> Vec<FamilyElement> {
        match self {
            GroupFamily::Symmetric(n) => {
                dense::all(*n).map(|t| FamilyElement::Perm(Permutation::from_dense(&t))).collect()
            }
            GroupFamily::Alternating(n) => {
                dense::all_even(*n).map(|t| FamilyElement::Perm(Permutation::from_dense(&t))).collect()
            }
            GroupFamily::Cyclic(n) => (0..*n).map(FamilyElement::Residue).collect(),
            GroupFamily::Product(parts) => {
                let mut tuples: Vec<Vec<FamilyElement>> = vec![Vec::new()];
                for p in parts {
                    let factor = p.elements();
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            factor.iter().map(move |x| {
                                let mut t = t.clone();
                                t.push(x.clone());
                                t
                            })
                        })
                        .collect();
                }
                tuples.into_iter().map(FamilyElement::Tuple).collect()
            }
        }
    }

    fn multiply(&self, a: &FamilyElement, b: &FamilyElement) -> FamilyElement {
        match (self, a, b) {
            (GroupFamily::Cyclic(n), FamilyElement::Residue(x), FamilyElement::Residue(y)) => {
                FamilyElement::Residue(((*x as u64 + *y as u64) % *n as u64) as u32)
            }
            (GroupFamily::Product(parts), FamilyElement::Tuple(x), FamilyElement::Tuple(y)) => {
                FamilyElement::Tuple(parts.iter().zip(x.iter().zip(y)).map(|(p, (a, b))| p.multiply(a, b)).collect())
            }
            (_, FamilyElement::Perm(x), FamilyElement::Perm(y)) => FamilyElement::Perm(x.compose(y)),
            _ => panic!("element {a} or {b} does not belong to {self}"),
        }
    }

    fn invert(&self, a: &FamilyElement) -> FamilyElement {
        match (self, a) {
            (GroupFamily::Cyclic(n), FamilyElement::Residue(x)) => FamilyElement::Residue((n - x % n) % n),
            (GroupFamily::Product(parts), FamilyElement::Tuple(x)) => {
                FamilyElement::Tuple(parts.iter().zip(x).map(|(p, a)| p.invert(a)).collect())
            }
            (_, FamilyElement::Perm(x)) => FamilyElement::Perm(x.inverse()),
            _ => panic!("element {a} does not belong to {self}"),
        }
    }

    fn identity(&self) -> FamilyElement {
        match self {
            GroupFamily::Symmetric(_) | GroupFamily::Alternating(_) => FamilyElement::Perm(Permutation::identity()),
            GroupFamily::Cyclic(_) => FamilyElement::Residue(0),
            GroupFamily::Product(parts) => FamilyElement::Tuple(parts.iter().map(|p| p.identity()).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn perm(s: &str) -> FamilyElement {
        FamilyElement::Perm(s.parse().unwrap())
    }

    #[test]
    fn closures() {
        let s4 = GroupFamily::Symmetric(4);
        let c = conjugacy_closure(&s4, &[perm("(1 2)")]);
        assert_eq!(c.len(), 6);
        assert!(c.iter().all(|x| matches!(x, FamilyElement::Perm(p) if p.cycle_type() == vec![2])));
        assert_eq!(conjugacy_closure(&s4, &[s4.identity()]), vec![s4.identity()]);
        assert_eq!(conjugacy_closure(&GroupFamily::Alternating(5), &[perm("(1 2 3)")]).len(), 20);
    }

    #[test]
    fn small_bfs_tables() {
        let s3 = GroupFamily::Symmetric(3);
        let t = bfs_norm(&s3, &s3.default_generators()).unwrap();
        let mut values = t.values.clone();
        values.sort();
        assert_eq!(values, vec![0, 1, 1, 1, 2, 2]);

        let z5 = GroupFamily::Cyclic(5);
        let t = bfs_norm(&z5, &[FamilyElement::Residue(1)]).unwrap();
        let norms: Vec<u32> = (0..5).map(|r| t.get(&FamilyElement::Residue(r)).unwrap()).collect();
        assert_eq!(norms, vec![0, 1, 2, 2, 1]);

        let all: Vec<FamilyElement> = s3.elements().into_iter().filter(|e| *e != s3.identity()).collect();
        assert!(bfs_norm(&s3, &all).unwrap().diameter() <= 1);
    }

    #[test]
    fn non_generating_set_is_rejected() {
        let s4 = GroupFamily::Symmetric(4);
        let err = bfs_norm(&s4, &[perm("(1 2)(3 4)")]).unwrap_err();
        assert!(matches!(err, WordNormError::NotGenerating { reached: 2, total: 24 }));
    }

    #[test]
    fn domination_constants() {
        let s4 = GroupFamily::Symmetric(4);
        let t = bfs_norm(&s4, &s4.default_generators()).unwrap();
        let d = audit_domination(&t, &t).unwrap();
        assert_eq!(d.constant, Ratio::from_integer(1));
    }

    #[test]
    fn families_parse_and_behave() {
        let g: GroupFamily = "S3 x Z4".parse().unwrap();
        assert_eq!(g, GroupFamily::Product(vec![GroupFamily::Symmetric(3), GroupFamily::Cyclic(4)]));
        assert_eq!(g.to_string(), "S3 x Z4");
        assert_eq!(g.elements().len(), 24);
        assert_eq!(g.order(), 24);
        assert!("Q8".parse::<GroupFamily>().is_err());
        assert!("S11".parse::<GroupFamily>().is_err());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, "\"S3 x Z4\"");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for family in ["S4", "A5", "Z6", "A4 x Z3"] {
            let g: GroupFamily = family.parse().unwrap();
            let report = check_group_axioms(&g, &mut rng, 1000);
            assert!(report.passed(), "{family}: {report:?}");
            assert_eq!(report.order, g.order());
        }
    }

    #[test]
    fn csv_and_json_export() {
        let z3 = GroupFamily::Cyclic(3);
        let t = bfs_norm(&z3, &z3.default_generators()).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "element,norm\n0,0\n1,1\n2,1\n");
        assert_eq!(t.to_json()["values"][2]["norm"], 1);
    }
}

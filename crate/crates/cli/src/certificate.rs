//! Certificate files: production, and verification that recomposes each
//! certificate with its own arithmetic instead of the code that made it.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use ultracone::covering::{commutator_witness, express_as_conjugates, ConjugateProductCertificate};
use ultracone::intnorm::{norm_exact, norm_upper, FactorialGenerators, IntNormResult};
use ultracone::permgroup::Permutation;

use crate::CliError;

/// `target = b · c · b⁻¹ · c⁻¹`, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorCertificate {
    pub target: Permutation,
    pub b: Permutation,
    pub c: Permutation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    ConjugateProduct(ConjugateProductCertificate),
    Commutator(CommutatorCertificate),
    Intnorm(IntNormResult),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ConjugateProduct(_) => "conjugate-product",
            Certificate::Commutator(_) => "commutator",
            Certificate::Intnorm(_) => "intnorm",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::MalformedCertificate(e.to_string()))
    }
}

/// A permutation as an explicit point map with fixed points omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PointMap(BTreeMap<u32, u32>);

impl PointMap {
    fn of(p: &Permutation) -> Self {
        PointMap(p.moved_pairs().iter().copied().collect())
    }

    fn apply(&self, x: u32) -> u32 {
        self.0.get(&x).copied().unwrap_or(x)
    }

    /// `self` first, then `other`.
    fn then(&self, other: &PointMap) -> PointMap {
        let points = self.0.keys().chain(other.0.keys());
        PointMap(points.map(|&x| (x, other.apply(self.apply(x)))).filter(|(x, y)| x != y).collect())
    }

    fn inverse(&self) -> PointMap {
        PointMap(self.0.iter().map(|(&x, &y)| (y, x)).collect())
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

fn mismatch(what: impl Into<String>) -> CliError {
    CliError::RecompositionMismatch(what.into())
}

fn check_conjugate_product(cert: &ConjugateProductCertificate) -> Result<Vec<String>, CliError> {
    let base = PointMap::of(&cert.base);
    let original = PointMap::of(&cert.original);
    let modification = PointMap::of(&cert.modification);
    if original.0.keys().any(|k| modification.0.contains_key(k)) {
        return Err(mismatch("modification overlaps the support of the original"));
    }
    if original.then(&modification) != base {
        return Err(mismatch("base is not original · modification"));
    }
    let mut product = PointMap(BTreeMap::new());
    for (i, f) in cert.factors.iter().enumerate() {
        let b = match f.sign {
            1 => base.clone(),
            -1 => base.inverse(),
            s => return Err(mismatch(format!("factor {i} has sign {s}"))),
        };
        let c = PointMap::of(&f.conjugator);
        product = product.then(&c.then(&b).then(&c.inverse()));
    }
    if product != PointMap::of(&cert.target) {
        return Err(mismatch(format!("factors multiply to {:?}, not {}", product.0, cert.target)));
    }
    let target_norm = cert.target.moved_pairs().len() as f64;
    let bound = 8.0 * target_norm / original.len().max(1) as f64 + 4.0;
    if cert.factors.len() as f64 > bound {
        return Err(mismatch(format!("{} factors exceed the bound {bound}", cert.factors.len())));
    }
    Ok(vec![
        format!("{} conjugates of {} recompose to {}", cert.factors.len(), cert.base, cert.target),
        format!("factor count {} <= {bound}", cert.factors.len()),
    ])
}

fn check_commutator(cert: &CommutatorCertificate) -> Result<Vec<String>, CliError> {
    let (b, c) = (PointMap::of(&cert.b), PointMap::of(&cert.c));
    let product = b.then(&c).then(&b.inverse()).then(&c.inverse());
    if product != PointMap::of(&cert.target) {
        return Err(mismatch(format!("[b, c] = {:?}, not {}", product.0, cert.target)));
    }
    Ok(vec![format!("[{}, {}] = {}", cert.b, cert.c, cert.target)])
}

/// `Some(m)` when `|x| = t^m m!`.
fn generator_index(x: &BigInt, base: u32) -> Option<usize> {
    let x = x.abs();
    let mut g = BigInt::one();
    for m in 0.. {
        if g == x {
            return Some(m);
        }
        if g > x {
            return None;
        }
        g *= BigInt::from(base) * BigInt::from(m + 1);
    }
    unreachable!()
}

fn check_intnorm(cert: &IntNormResult) -> Result<Vec<String>, CliError> {
    if cert.base < 2 {
        return Err(mismatch(format!("base {} is below 2", cert.base)));
    }
    let mut sum = BigInt::zero();
    for term in &cert.certificate {
        if generator_index(term, cert.base).is_none() {
            return Err(mismatch(format!("{term} is not ±{}^m m!", cert.base)));
        }
        sum += term;
    }
    if sum != cert.target {
        return Err(mismatch(format!("terms sum to {sum}, not {}", cert.target)));
    }
    let len = cert.certificate.len() as u64;
    if let Some(claimed) = cert.value.or(cert.upper_bound) {
        if claimed != len {
            return Err(mismatch(format!("claimed norm {claimed} but {len} terms")));
        }
    }
    let terms: Vec<String> = cert.certificate.iter().map(ToString::to_string).collect();
    Ok(vec![format!("{} = {}", cert.target, if terms.is_empty() { "0".into() } else { terms.join(" + ") })])
}

/// Independent check of one certificate; returns human-readable findings.
pub fn check(cert: &Certificate) -> Result<Vec<String>, CliError> {
    match cert {
        Certificate::ConjugateProduct(c) => check_conjugate_product(c),
        Certificate::Commutator(c) => check_commutator(c),
        Certificate::Intnorm(c) => check_intnorm(c),
    }
}

pub fn verify_certificate(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::MalformedCertificate(format!("cannot read {}: {e}", path.display())))?;
    check(&Certificate::parse(&text)?)
}

pub fn certify_conjugates(target: &Permutation, base: &Permutation) -> Result<Certificate, CliError> {
    express_as_conjugates(target, base)
        .map(Certificate::ConjugateProduct)
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

pub fn certify_commutator(target: &Permutation, degree: usize) -> Result<Certificate, CliError> {
    let (b, c) = commutator_witness(target, degree).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
    Ok(Certificate::Commutator(CommutatorCertificate { target: target.clone(), b, c }))
}

/// Greedy decomposition, or an exhaustive shortest one when `exact`.
pub fn certify_intnorm(target: &BigInt, base: u32, exact: bool) -> Result<Certificate, CliError> {
    let invalid = |e: ultracone::intnorm::IntNormError| CliError::ConfigInvalid(e.to_string());
    let mut top = 1;
    let gens = loop {
        let gens = FactorialGenerators::new(base, top).map_err(invalid)?;
        if gens.members[top] > target.abs() {
            break gens;
        }
        top += 1;
    };
    let upper = norm_upper(target, &gens).map_err(invalid)?;
    if !exact {
        return Ok(Certificate::Intnorm(upper));
    }
    let cap = upper.upper_bound.unwrap_or(0) as usize;
    let result = norm_exact(target, &gens, cap);
    if result.value.is_none() {
        return Err(CliError::ConfigInvalid(format!("exhaustive search for {target} gave up")));
    }
    Ok(Certificate::Intnorm(result))
}

//! Conjugacy-class covering in alternating groups, commutator witnesses,
//! and certificates writing a permutation as a product of conjugates of a
//! fixed one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contractions::split;
use crate::permgroup::dense::{self, DenseBfs};
use crate::permgroup::{Permutation, Point};

/// Largest degree for which classes and products are materialised.
pub const MAX_COVERING_DEGREE: usize = 8;
/// Largest degree searched for commutator witnesses.
pub const MAX_COMMUTATOR_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("support of {perm} is not contained in 1..={degree}")]
    SupportExceedsDegree { perm: String, degree: usize },
    #[error("degree {degree} exceeds the exhaustive bound {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("{0} is odd")]
    OddPermutation(String),
    #[error("no commutator witness found for {0}")]
    SearchExhausted(String),
    #[error("the base permutation is the identity")]
    IdentityBase,
    #[error("target {target} is odd while every conjugate of the even base {base} is even")]
    ParityMismatch { target: String, base: String },
    #[error("block search failed: {0}")]
    BlockSearchFailed(String),
}

fn check_degree(sigma: &Permutation, n: usize) -> Result<(), CoveringError> {
    if sigma.max_point() as usize > n {
        return Err(CoveringError::SupportExceedsDegree { perm: sigma.to_string(), degree: n });
    }
    Ok(())
}

/// Orbits of `⟨σ⟩` on `{1..n}`, fixed points included.
pub fn orbit_count(sigma: &Permutation, n: usize) -> Result<usize, CoveringError> {
    check_degree(sigma, n)?;
    Ok(n - sigma.supp_norm() + sigma.cycles().len())
}

/// A conjugator `c` on `{1..degree}` with `x.conjugate(c) == y`, when `x`
/// and `y` have the same cycle type. Cycles are matched in order of length.
pub fn conjugator_between(x: &Permutation, y: &Permutation, degree: usize) -> Option<Permutation> {
    let sorted = |p: &Permutation| {
        let mut cycles = p.cycles().cycles().to_vec();
        cycles.sort_by_key(Vec::len);
        cycles
    };
    let (cx, cy) = (sorted(x), sorted(y));
    if cx.len() != cy.len() || cx.iter().zip(&cy).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let fixed = |p: &Permutation| -> Vec<Point> { (1..=degree as Point).filter(|&i| p.apply(i) == i).collect() };
    // relabel map f with f(x) = y, then c = f⁻¹
    let pairs = cx
        .iter()
        .flatten()
        .copied()
        .zip(cy.iter().flatten().copied())
        .chain(fixed(x).into_iter().zip(fixed(y)))
        .map(|(a, b)| (b, a));
    let c = Permutation::from_pairs(pairs).ok()?;
    debug_assert_eq!(&x.conjugate(&c), y);
    Some(c)
}

/// An odd permutation of `{1..degree}` commuting with `x`, if one exists.
fn odd_centraliser_element(x: &Permutation, degree: usize) -> Option<Permutation> {
    let cycles = x.cycles();
    if let Some(c) = cycles.cycles().iter().find(|c| c.len() % 2 == 0) {
        return Permutation::cycle(c).ok();
    }
    let fixed: Vec<Point> = (1..=degree as Point).filter(|&i| x.apply(i) == i).take(2).collect();
    if fixed.len() == 2 {
        return Permutation::transposition(fixed[0], fixed[1]).ok();
    }
    let cs = cycles.cycles();
    for (i, a) in cs.iter().enumerate() {
        if let Some(b) = cs[i + 1..].iter().find(|b| b.len() == a.len()) {
            let swaps: Vec<Vec<Point>> = a.iter().zip(b).map(|(&p, &q)| vec![p, q]).collect();
            return Permutation::from_cycles(&swaps).ok();
        }
    }
    None
}

/// The `S_n`-conjugacy class of a permutation, materialised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub ambient_degree: usize,
    pub representative: Permutation,
    /// Sorted.
    pub members: Vec<Permutation>,
}

impl ConjugacyClass {
    /// Conjugates `sigma` by every element of `S_n`.
    pub fn materialize(sigma: &Permutation, n: usize) -> Result<Self, CoveringError> {
        check_degree(sigma, n)?;
        if n > MAX_COVERING_DEGREE {
            return Err(CoveringError::DegreeTooLarge { degree: n, max: MAX_COVERING_DEGREE });
        }
        let mut ranks: Vec<usize> = dense::all(n)
            .map(|t| {
                let tau = Permutation::from_dense(&t);
                dense::rank(&sigma.conjugate(&tau).to_dense(n))
            })
            .collect();
        ranks.sort_unstable();
        ranks.dedup();
        let mut members: Vec<Permutation> =
            ranks.into_iter().map(|r| Permutation::from_dense(&dense::unrank(r, n))).collect();
        members.sort();
        Ok(Self { ambient_degree: n, representative: sigma.clone(), members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.binary_search(p).is_ok()
    }
}

/// Outcome of [`brenner_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub degree: usize,
    pub representative: Permutation,
    pub orbit_count: usize,
    pub class_size: usize,
    pub alternating_order: usize,
    /// `|C^j|` for `j = 1, 2, ...` until the group is covered or `j = 4`.
    pub product_sizes: Vec<usize>,
    pub covered: bool,
    /// Least `j <= 4` with `C^j = A_n`.
    pub covering_exponent: Option<usize>,
}

/// Checks that the hypotheses of the covering theorem hold for `σ` in `A_n`
/// and that the fourth power of its class is all of `A_n`.
///
/// The hypotheses are: `σ` even, with a 2-cycle, and `n - 2r >= -1` where
/// `r` is [`orbit_count`]. Products of classes are formed explicitly as sets.
pub fn brenner_check(sigma: &Permutation, n: usize) -> Result<CoveringReport, CoveringError> {
    let r = orbit_count(sigma, n)?;
    if n > MAX_COVERING_DEGREE {
        return Err(CoveringError::DegreeTooLarge { degree: n, max: MAX_COVERING_DEGREE });
    }
    if !sigma.is_even() {
        return Err(CoveringError::HypothesisUnmet(format!("{sigma} is not in A_{n}")));
    }
    if !sigma.cycle_type().contains(&2) {
        return Err(CoveringError::HypothesisUnmet(format!("{sigma} has no orbit of length two")));
    }
    if (n as i64) - 2 * (r as i64) < -1 {
        return Err(CoveringError::HypothesisUnmet(format!("n - 2r = {} < -1 for {sigma}", n as i64 - 2 * r as i64)));
    }
    let class = ConjugacyClass::materialize(sigma, n)?;
    let class_dense: Vec<Vec<u8>> = class.members.iter().map(|m| m.to_dense(n)).collect();
    let alternating_order = dense::factorial(n) / 2;
    let mut current = vec![false; dense::factorial(n)];
    for m in &class_dense {
        current[dense::rank(m)] = true;
    }
    let mut product_sizes = vec![class.len()];
    let mut covering_exponent = (class.len() == alternating_order).then_some(1);
    let mut scratch = vec![0u8; n];
    while covering_exponent.is_none() && product_sizes.len() < 4 {
        let mut next = vec![false; current.len()];
        for (r, _) in current.iter().enumerate().filter(|(_, &b)| b) {
            let x = dense::unrank(r, n);
            for c in &class_dense {
                dense::compose_into(&x, c, &mut scratch);
                next[dense::rank(&scratch)] = true;
            }
        }
        current = next;
        let size = current.iter().filter(|&&b| b).count();
        product_sizes.push(size);
        if size == alternating_order {
            covering_exponent = Some(product_sizes.len());
        }
    }
    Ok(CoveringReport {
        degree: n,
        representative: sigma.clone(),
        orbit_count: r,
        class_size: class.len(),
        alternating_order,
        product_sizes,
        covered: covering_exponent.is_some(),
        covering_exponent,
    })
}

/// Cycles laid out on consecutive points, shortest first.
fn canonical_of_type(cycle_type: &[usize]) -> Permutation {
    let mut next = 1;
    let cycles: Vec<Vec<Point>> = cycle_type
        .iter()
        .map(|&len| {
            let c = (next..next + len as Point).collect();
            next += len as Point;
            c
        })
        .collect();
    Permutation::from_cycles(&cycles).expect("disjoint consecutive cycles")
}

fn search_commutator(target: &Permutation, degree: usize) -> Option<(Permutation, Permutation)> {
    // [b, c] = b * (c b⁻¹ c⁻¹), so c must conjugate b⁻¹ onto b⁻¹ * target.
    for t in dense::all_even(degree) {
        let b = Permutation::from_dense(&t);
        let x = b.inverse();
        let y = x.compose(target);
        let Some(mut c) = conjugator_between(&x, &y, degree) else { continue };
        if !c.is_even() {
            let Some(z) = odd_centraliser_element(&x, degree) else { continue };
            c = c.compose(&z);
        }
        if b.commutator(&c) == *target {
            return Some((b, c));
        }
    }
    None
}

type SearchCache = Mutex<HashMap<(usize, Vec<usize>), Arc<ClassSearch>>>;
type WitnessCache = Mutex<HashMap<(usize, Vec<usize>), Option<(Permutation, Permutation)>>>;

/// Elements `b, c` of `A_m`, `m = max(n, 5)`, with `[b, c] = g`.
///
/// One witness is searched per cycle type and transported to `g` by
/// relabelling, which preserves commutators.
pub fn commutator_witness(g: &Permutation, n: usize) -> Result<(Permutation, Permutation), CoveringError> {
    check_degree(g, n)?;
    if !g.is_even() {
        return Err(CoveringError::OddPermutation(g.to_string()));
    }
    if g.is_identity() {
        return Ok((Permutation::identity(), Permutation::identity()));
    }
    let degree = n.max(5);
    if degree > MAX_COMMUTATOR_DEGREE {
        return Err(CoveringError::DegreeTooLarge { degree, max: MAX_COMMUTATOR_DEGREE });
    }
    static CACHE: OnceLock<WitnessCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let cycle_type = g.cycle_type();
    let key = (degree, cycle_type.clone());
    let cached = cache.lock().expect("witness cache poisoned").get(&key).cloned();
    let found = match cached {
        Some(found) => found,
        None => {
            let found = search_commutator(&canonical_of_type(&cycle_type), degree);
            cache.lock().expect("witness cache poisoned").insert(key, found.clone());
            found
        }
    };
    let (b, c) = found.ok_or_else(|| CoveringError::SearchExhausted(g.to_string()))?;
    let rep = canonical_of_type(&cycle_type);
    // c0 with rep.conjugate(c0) = g; conjugation is an automorphism
    let c0 = conjugator_between(&rep, g, degree).expect("same cycle type");
    let (b, c) = (b.conjugate(&c0), c.conjugate(&c0));
    debug_assert_eq!(&b.commutator(&c), g);
    Ok((b, c))
}

/// One factor `conjugator · base^sign · conjugator⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateFactor {
    pub conjugator: Permutation,
    pub sign: i8,
}

impl ConjugateFactor {
    pub fn evaluate(&self, base: &Permutation) -> Permutation {
        let b = if self.sign < 0 { base.inverse() } else { base.clone() };
        b.conjugate(&self.conjugator)
    }
}

/// `target` written as a left-to-right product of conjugates of `base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateProductCertificate {
    pub target: Permutation,
    /// The permutation whose conjugates are multiplied. Equal to `original`
    /// unless transpositions outside its support had to be added.
    pub base: Permutation,
    pub original: Permutation,
    /// `base = original · modification`, with disjoint supports.
    pub modification: Permutation,
    pub factors: Vec<ConjugateFactor>,
    pub diagnostics: Vec<String>,
}

impl ConjugateProductCertificate {
    pub fn recompose(&self) -> Permutation {
        self.factors.iter().fold(Permutation::identity(), |acc, f| acc.compose(&f.evaluate(&self.base)))
    }

    /// `8 ‖target‖ / ‖original‖ + 4`.
    pub fn factor_bound(&self) -> f64 {
        8.0 * self.target.supp_norm() as f64 / self.original.supp_norm().max(1) as f64 + 4.0
    }

    /// Recomposition matches the target, the base is consistent with the
    /// original and the factor count is within bound.
    pub fn verify(&self) -> bool {
        let consistent = self.original.compose(&self.modification) == self.base
            && self.original.support().all(|p| self.modification.apply(p) == p);
        consistent && self.recompose() == self.target && self.factors.len() as f64 <= self.factor_bound()
    }
}

/// Points not in `avoid`, smallest first.
fn fresh_points(avoid: &Permutation, count: usize) -> Vec<Point> {
    (1..).filter(|&p| avoid.apply(p) == p).take(count).collect()
}

/// Adds at most two transpositions outside the support of `g` so that the
/// result is even and has a 2-cycle.
fn admissible_base(g: &Permutation) -> Permutation {
    let odd = !g.is_even();
    let has_two_cycle = g.cycle_type().contains(&2);
    match (odd, has_two_cycle) {
        (false, true) => Permutation::identity(),
        (true, _) => {
            let f = fresh_points(g, 2);
            Permutation::transposition(f[0], f[1]).expect("distinct points")
        }
        (false, false) => {
            let f = fresh_points(g, 4);
            Permutation::from_cycles(&[[f[0], f[1]], [f[2], f[3]]]).expect("disjoint")
        }
    }
}

/// BFS over `A_w` with the `S_w`-class of a packed base as generators.
struct ClassSearch {
    generators: Vec<Permutation>,
    bfs: DenseBfs,
}

fn class_search(packed_base: &Permutation, w: usize) -> Result<Arc<ClassSearch>, CoveringError> {
    static CACHE: OnceLock<SearchCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (w, packed_base.cycle_type());
    if let Some(found) = cache.lock().expect("class cache poisoned").get(&key) {
        return Ok(found.clone());
    }
    let class = ConjugacyClass::materialize(packed_base, w)?;
    let dense_gens: Vec<Vec<u8>> = class.members.iter().map(|m| m.to_dense(w)).collect();
    let bfs = DenseBfs::run(w, &dense_gens);
    let search = Arc::new(ClassSearch { generators: class.members, bfs });
    cache.lock().expect("class cache poisoned").insert(key, search.clone());
    Ok(search)
}

/// Splits an even `h` into even factors of support at most `bound >= 4`.
fn even_blocks(h: &Permutation, bound: usize) -> Vec<Permutation> {
    let mut blocks = Vec::new();
    let mut rest = h.clone();
    while rest.supp_norm() > bound {
        // Prefix parity flips with k except where k crosses a cycle
        // boundary, so an even prefix turns up within three steps.
        let pair = (2..=bound)
            .rev()
            .map(|k| split(&rest, k).expect("k within support"))
            .find(|p| p.left.is_even() && !p.left.is_identity())
            .expect("an even prefix exists among k, k-1, k-2");
        blocks.push(pair.left);
        rest = pair.right;
    }
    if !rest.is_identity() {
        blocks.push(rest);
    }
    blocks
}

/// Writes `h` as a product of conjugates of `g`, after adding at most two
/// transpositions outside the support of `g` so that it is even with a
/// 2-cycle.
///
/// `h` is cut into even blocks of support at most that of the base; each
/// block is moved by an involution into a window containing the base's
/// support and written as at most four conjugates of the base by a
/// breadth-first search over the alternating group on the window.
pub fn express_as_conjugates(h: &Permutation, g: &Permutation) -> Result<ConjugateProductCertificate, CoveringError> {
    if g.is_identity() {
        return Err(CoveringError::IdentityBase);
    }
    let mut certificate = ConjugateProductCertificate {
        target: h.clone(),
        base: g.clone(),
        original: g.clone(),
        modification: Permutation::identity(),
        factors: Vec::new(),
        diagnostics: Vec::new(),
    };
    if h.is_identity() {
        return Ok(certificate);
    }
    if h == g {
        certificate.factors.push(ConjugateFactor { conjugator: Permutation::identity(), sign: 1 });
        return Ok(certificate);
    }
    let modification = admissible_base(g);
    let base = g.compose(&modification);
    if !modification.is_identity() {
        certificate.diagnostics.push(format!("base modified by {modification} to {base}"));
    }
    certificate.base = base.clone();
    certificate.modification = modification;
    if !h.is_even() {
        return Err(CoveringError::ParityMismatch { target: h.to_string(), base: base.to_string() });
    }

    let bound = base.supp_norm();
    let mut window: Vec<Point> = base.support().collect();
    window.extend(fresh_points(&base, 5usize.saturating_sub(window.len())));
    window.sort_unstable();
    let w = window.len();
    if w > MAX_COVERING_DEGREE {
        return Err(CoveringError::BlockSearchFailed(format!(
            "window of {w} points exceeds the exhaustive bound {MAX_COVERING_DEGREE}"
        )));
    }
    let pack = |p: Point| window.binary_search(&p).expect("point inside window") as Point + 1;
    let unpack = |p: Point| window[p as usize - 1];
    let packed_base = base.relabel(pack);
    let search = class_search(&packed_base, w)?;

    let blocks = even_blocks(h, bound);
    certificate.diagnostics.push(format!("{} block(s) of support at most {bound} in a {w}-point window", blocks.len()));
    for block in &blocks {
        // involution swapping the block's points outside the window with
        // unused window points
        let outside: Vec<Point> = block.support().filter(|p| window.binary_search(p).is_err()).collect();
        let free: Vec<Point> = window.iter().copied().filter(|&p| block.apply(p) == p).collect();
        let swaps: Vec<[Point; 2]> = outside.iter().zip(&free).map(|(&a, &b)| [a, b]).collect();
        let transport = Permutation::from_cycles(&swaps).expect("disjoint swaps");
        let moved = block.conjugate(&transport);
        let packed = moved.relabel(pack);
        let word = search.bfs.word(&packed.to_dense(w)).ok_or_else(|| {
            CoveringError::BlockSearchFailed(format!("{moved} is not a product of conjugates of {base}"))
        })?;
        if word.len() > 4 {
            return Err(CoveringError::BlockSearchFailed(format!("{moved} needs {} conjugates", word.len())));
        }
        for letter in word {
            let gamma = conjugator_between(&packed_base, &search.generators[letter], w)
                .expect("class members share the cycle type")
                .relabel(unpack);
            certificate.factors.push(ConjugateFactor { conjugator: transport.inverse().compose(&gamma), sign: 1 });
        }
    }
    debug_assert_eq!(certificate.recompose(), *h);
    Ok(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(orbit_count(&p("(1 2)(3 4)"), 5).unwrap(), 3);
        assert_eq!(orbit_count(&Permutation::identity(), 7).unwrap(), 7);
        assert_eq!(orbit_count(&p("(1 2 3 4 5)"), 5).unwrap(), 1);
        assert!(matches!(orbit_count(&p("(1 9)"), 5), Err(CoveringError::SupportExceedsDegree { .. })));
    }

    #[test]
    fn conjugator_matches_cycles() {
        let x = p("(1 2)(3 4 5)");
        let y = p("(2 6 7)(4 1)");
        let c = conjugator_between(&x, &y, 7).unwrap();
        assert_eq!(x.conjugate(&c), y);
        assert!(conjugator_between(&x, &p("(1 2 3)"), 7).is_none());
    }

    #[test]
    fn class_sizes() {
        assert_eq!(ConjugacyClass::materialize(&p("(1 2)(3 4)"), 5).unwrap().len(), 15);
        assert_eq!(ConjugacyClass::materialize(&p("(1 2 3)"), 5).unwrap().len(), 20);
    }

    #[test]
    fn brenner_examples() {
        let r = brenner_check(&p("(1 2)(3 4)"), 5).unwrap();
        assert!(r.covered);
        assert!(r.covering_exponent.unwrap() <= 4);
        assert!(matches!(brenner_check(&p("(1 2 3)"), 5), Err(CoveringError::HypothesisUnmet(_))));
        assert!(matches!(brenner_check(&p("(1 2)(3 4)"), 6), Err(CoveringError::HypothesisUnmet(_))));
        assert!(matches!(brenner_check(&p("(1 2)"), 5), Err(CoveringError::HypothesisUnmet(_))));
    }

    #[test]
    fn klein_four_class_does_not_cover_a4() {
        let r = brenner_check(&p("(1 2)(3 4)"), 4).unwrap();
        assert!(!r.covered);
        assert_eq!(r.product_sizes, vec![3, 4, 4, 4]);
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(
            commutator_witness(&Permutation::identity(), 5).unwrap(),
            (Permutation::identity(), Permutation::identity())
        );
        for s in ["(1 2 3 4 5)", "(1 2 3)", "(1 2)(3 4)"] {
            let g = p(s);
            let (b, c) = commutator_witness(&g, 5).unwrap();
            assert_eq!(b.commutator(&c), g);
            assert!(b.is_even() && c.is_even());
            assert!(b.max_point() <= 5 && c.max_point() <= 5);
        }
        assert!(matches!(commutator_witness(&p("(1 2)"), 5), Err(CoveringError::OddPermutation(_))));
    }

    #[test]
    fn certificate_examples() {
        let g = p("(1 2)(3 4)");
        assert!(express_as_conjugates(&Permutation::identity(), &g).unwrap().factors.is_empty());
        let same = express_as_conjugates(&g, &g).unwrap();
        assert_eq!(same.factors, vec![ConjugateFactor { conjugator: Permutation::identity(), sign: 1 }]);

        let h = p("(1 2 3 4 5 6)(7 8)");
        let cert = express_as_conjugates(&h, &g).unwrap();
        assert!(cert.verify(), "{cert:?}");
        assert!(cert.factors.len() as f64 <= 8.0 * 8.0 / 4.0 + 4.0);
        assert!(matches!(express_as_conjugates(&h, &Permutation::identity()), Err(CoveringError::IdentityBase)));
    }

    #[test]
    fn certificate_with_modified_base() {
        // a 3-cycle is even without a 2-cycle; a 4-cycle is odd
        for g in ["(1 2 3)", "(1 2 3 4)", "(2 5 9)"] {
            let g = p(g);
            let h = p("(1 3 5)(2 4)(6 7)");
            let cert = express_as_conjugates(&h, &g).unwrap();
            assert!(cert.verify(), "{cert:?}");
            assert!(!cert.modification.is_identity());
            assert!(!cert.diagnostics.is_empty());
        }
    }

    #[test]
    fn odd_target_is_rejected() {
        let r = express_as_conjugates(&p("(1 2 3 4)"), &p("(1 2)(3 4)"));
        assert!(matches!(r, Err(CoveringError::ParityMismatch { .. })));
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let cert = express_as_conjugates(&p("(1 5 3)(2 7)(4 6)"), &p("(1 2)(3 4)")).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: ConjugateProductCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify());
    }
}

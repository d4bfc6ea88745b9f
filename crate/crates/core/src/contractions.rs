//! Cutting maps on finitely supported permutations, the splitting and
//! displacement constructions, and audits of the cutting-map bounds.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::LemmaAudit;
use crate::permgroup::{dense, distance, Permutation, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("split index {k} out of range 1..={support}")]
    OutOfRange { k: usize, support: usize },
    #[error("the identity displaces no non-empty set")]
    IdentityInput,
}

/// Output of [`cut`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub image: Permutation,
    /// The `k` largest support points of the input, descending.
    pub erased_points: Vec<Point>,
}

/// The cutting map `c_k`: erases the `k` largest support points and reroutes
/// every remaining point whose image was erased to its first return below
/// the cut.
pub fn cut(sigma: &Permutation, k: usize) -> CutResult {
    let support: Vec<Point> = sigma.support().collect();
    let len = support.len();
    if k >= len {
        return CutResult { image: Permutation::identity(), erased_points: support.into_iter().rev().collect() };
    }
    let erased_points = support[len - k..].iter().rev().copied().collect();
    if k == 0 {
        return CutResult { image: sigma.clone(), erased_points };
    }
    let threshold = support[len - k - 1];
    let pairs = support[..len - k].iter().map(|&i| {
        let mut y = sigma.apply(i);
        while y > threshold {
            y = sigma.apply(y);
        }
        (i, y)
    });
    let image = Permutation::from_pairs(pairs).expect("first-return map is a bijection");
    CutResult { image, erased_points }
}

/// Output of [`split`]; `left.compose(&right)` is the source permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    pub left: Permutation,
    pub right: Permutation,
}

/// Writes `σ = left · right` with `supp(left) <= k` and
/// `supp(right) <= supp(σ) - k + 1`.
///
/// Points are read in canonical cycle order. If the `k`-th point is `c_m`
/// in the cycle `(c_1 ... c_j)`, the cycles before it go left, the cycles
/// after it go right, and the cycle itself splits as
/// `(c_1 ... c_m) · (c_1 c_{m+1} ... c_j)`.
pub fn split(sigma: &Permutation, k: usize) -> Result<SplitPair, ContractionError> {
    let support = sigma.supp_norm();
    if k == 0 || k > support {
        return Err(ContractionError::OutOfRange { k, support });
    }
    let decomposition = sigma.cycles();
    let mut left: Vec<Vec<Point>> = Vec::new();
    let mut right: Vec<Vec<Point>> = Vec::new();
    let mut seen = 0;
    for cycle in decomposition.cycles() {
        let len = cycle.len();
        if seen + len <= k {
            left.push(cycle.clone());
        } else if seen >= k {
            right.push(cycle.clone());
        } else {
            let m = k - seen;
            if m >= 2 {
                left.push(cycle[..m].to_vec());
            }
            let mut tail = vec![cycle[0]];
            tail.extend_from_slice(&cycle[m..]);
            right.push(tail);
        }
        seen += len;
    }
    let build = |cycles: &[Vec<Point>]| Permutation::from_cycles(cycles).expect("disjoint cycles");
    Ok(SplitPair { left: build(&left), right: build(&right) })
}

/// A set `D` with `σ(D) ∩ D = ∅` and `|D| >= supp(σ)/3`: the odd positions
/// of each canonical cycle, excluding the last position of odd cycles.
pub fn displaced_set(sigma: &Permutation) -> Result<BTreeSet<Point>, ContractionError> {
    if sigma.is_identity() {
        return Err(ContractionError::IdentityInput);
    }
    let mut set = BTreeSet::new();
    for cycle in sigma.cycles().cycles() {
        let len = cycle.len();
        // 1-based odd positions j < len
        set.extend(cycle.iter().enumerate().filter(|&(i, _)| i % 2 == 0 && i + 1 < len).map(|(_, &p)| p));
    }
    Ok(set)
}

/// Bounds audited for the cutting maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutLemmaReport {
    pub max_k: usize,
    /// `d(c_k σ, c_m σ) <= 2|k - m|`, statistic `d / |k - m|`.
    pub shift: LemmaAudit,
    /// `d(c_k σ, c_k τ) <= d(σ, τ)` when `supp σ = supp τ`, statistic ratio.
    pub equal_support: LemmaAudit,
    /// `d(c_k σ, c_k τ) <= 2 d(σ, τ)`, statistic ratio.
    pub lipschitz: LemmaAudit,
    /// `‖c_k σ‖ <= max(‖σ‖ - k, 0)`, statistic the excess.
    pub norm_decrease: LemmaAudit,
}

impl CutLemmaReport {
    pub fn new(max_k: usize) -> Self {
        Self {
            max_k,
            shift: LemmaAudit::new("cutting.shift", "d(c_k s, c_m s) <= 2|k-m|", 2.0),
            equal_support: LemmaAudit::new(
                "cutting.equal_support",
                "supp s = supp t implies d(c_k s, c_k t) <= d(s, t)",
                1.0,
            ),
            lipschitz: LemmaAudit::new("cutting.lipschitz", "d(c_k s, c_k t) <= 2 d(s, t)", 2.0),
            norm_decrease: LemmaAudit::new("cutting.norm_decrease", "|c_k s|_supp <= max(|s|_supp - k, 0)", 0.0),
        }
    }

    pub fn audits(&self) -> [&LemmaAudit; 4] {
        [&self.shift, &self.equal_support, &self.lipschitz, &self.norm_decrease]
    }

    pub fn passed(&self) -> bool {
        self.audits().iter().all(|a| a.passed())
    }

    fn check_single(&mut self, sigma: &Permutation, cuts: &[Permutation]) {
        let norm = sigma.supp_norm();
        for (k, ck) in cuts.iter().enumerate() {
            let excess = ck.supp_norm() as f64 - norm.saturating_sub(k) as f64;
            self.norm_decrease.observe(excess, || format!("s={sigma} k={k}"));
            for (m, cm) in cuts.iter().enumerate().skip(k + 1) {
                let ratio = distance(ck, cm) as f64 / (m - k) as f64;
                self.shift.observe(ratio, || format!("s={sigma} k={k} m={m}"));
            }
        }
    }

    fn check_pair(&mut self, sigma: &Permutation, tau: &Permutation, cs: &[Permutation], ct: &[Permutation]) {
        let d = distance(sigma, tau);
        let same_support = sigma.support().eq(tau.support());
        for (k, (a, b)) in cs.iter().zip(ct).enumerate() {
            let dk = distance(a, b);
            let ratio = if d == 0 {
                if dk == 0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                dk as f64 / d as f64
            };
            self.lipschitz.observe(ratio, || format!("s={sigma} t={tau} k={k}"));
            if same_support {
                self.equal_support.observe(ratio, || format!("s={sigma} t={tau} k={k}"));
            }
        }
    }
}

fn all_cuts(sigma: &Permutation, max_k: usize) -> Vec<Permutation> {
    (0..=max_k).map(|k| cut(sigma, k).image).collect()
}

/// Checks all four bounds on the given pairs, for `k, m <= max_k`. Both
/// members of every pair also go through the single-permutation checks.
pub fn verify_cut_lemmas(sample: &[(Permutation, Permutation)], max_k: usize) -> CutLemmaReport {
    let mut report = CutLemmaReport::new(max_k);
    for (sigma, tau) in sample {
        let cs = all_cuts(sigma, max_k);
        let ct = all_cuts(tau, max_k);
        report.check_single(sigma, &cs);
        report.check_single(tau, &ct);
        report.check_pair(sigma, tau, &cs, &ct);
    }
    report
}

/// Checks all four bounds on every element and every ordered pair of `S_n`.
pub fn verify_cut_lemmas_exhaustive(n: usize, max_k: usize) -> CutLemmaReport {
    let mut report = CutLemmaReport::new(max_k);
    let elements: Vec<Permutation> = dense::all(n).map(|t| Permutation::from_dense(&t)).collect();
    let cuts: Vec<Vec<Permutation>> = elements.iter().map(|s| all_cuts(s, max_k)).collect();
    for (sigma, cs) in elements.iter().zip(&cuts) {
        report.check_single(sigma, cs);
    }
    for (sigma, cs) in elements.iter().zip(&cuts) {
        for (tau, ct) in elements.iter().zip(&cuts) {
            report.check_pair(sigma, tau, cs, ct);
        }
    }
    report
}

/// Uniformly random permutation of `{1..degree}`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Permutation {
    let mut images: Vec<Point> = (1..=degree as Point).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).expect("shuffle is a bijection")
}

/// A random permutation moving exactly the points of `sigma`'s support.
pub fn random_same_support<R: Rng + ?Sized>(rng: &mut R, sigma: &Permutation) -> Permutation {
    let points: Vec<Point> = sigma.support().collect();
    if points.is_empty() {
        return Permutation::identity();
    }
    loop {
        let mut images = points.clone();
        images.shuffle(rng);
        if images.iter().zip(&points).all(|(a, b)| a != b) {
            return Permutation::from_pairs(points.iter().copied().zip(images)).expect("derangement");
        }
    }
}

/// A random permutation of `{1..degree}` moving a random number of points.
pub fn random_sparse_permutation<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Permutation {
    let size = rng.random_range(0..=degree);
    let mut points: Vec<Point> = (1..=degree as Point).collect();
    points.shuffle(rng);
    points.truncate(size);
    let mut images = points.clone();
    images.shuffle(rng);
    Permutation::from_pairs(points.into_iter().zip(images)).expect("shuffle is a bijection")
}

/// Random pairs in `S_degree`, cycling through three shapes: two uniform
/// permutations, a uniform permutation with a same-support partner, and
/// two sparse permutations.
pub fn sample_pairs<R: Rng + ?Sized>(rng: &mut R, degree: usize, count: usize) -> Vec<(Permutation, Permutation)> {
    (0..count)
        .map(|i| match i % 3 {
            0 => (random_permutation(rng, degree), random_permutation(rng, degree)),
            1 => {
                let s = random_permutation(rng, degree);
                let t = random_same_support(rng, &s);
                (s, t)
            }
            _ => (random_sparse_permutation(rng, degree), random_sparse_permutation(rng, degree)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::supp_norm;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn cut_examples() {
        let r = cut(&p("(1 2 3)"), 1);
        assert_eq!(r.image, p("(1 2)"));
        assert_eq!(r.erased_points, vec![3]);
        let s = p("(2 7 4)(3 9)");
        assert_eq!(cut(&s, 0).image, s);
        assert_eq!(cut(&p("(1 2 3)"), 5).image, Permutation::identity());
        assert_eq!(cut(&p("(1 2 3)"), 3).erased_points, vec![3, 2, 1]);
    }

    #[test]
    fn cut_reroutes_through_erased_points() {
        // 1 -> 5 -> 2 -> 6 -> 3 -> 1 with {5, 6} erased: 1 -> 2 -> 3 -> 1
        let s = p("(1 5 2 6 3)");
        assert_eq!(cut(&s, 2).image, p("(1 2 3)"));
        // a cycle living only above the cut vanishes
        assert_eq!(cut(&p("(1 2)(8 9)"), 2).image, p("(1 2)"));
    }

    #[test]
    fn split_examples() {
        let s = p("(1 2 3 4 5)");
        let pair = split(&s, 2).unwrap();
        assert!(pair.left.supp_norm() <= 2 && pair.right.supp_norm() <= 4);
        assert_eq!(pair.left.compose(&pair.right), s);

        let pair = split(&p("(1 2)(3 4)"), 2).unwrap();
        assert_eq!((pair.left, pair.right), (p("(1 2)"), p("(3 4)")));

        let pair = split(&s, 5).unwrap();
        assert_eq!(pair.left, s);
        assert!(pair.right.is_identity());

        assert_eq!(split(&s, 6), Err(ContractionError::OutOfRange { k: 6, support: 5 }));
        assert!(split(&s, 0).is_err());
    }

    #[test]
    fn displaced_set_examples() {
        assert_eq!(displaced_set(&p("(1 2)")).unwrap(), BTreeSet::from([1]));
        assert_eq!(displaced_set(&p("(1 2 3)")).unwrap().len(), 1);
        assert_eq!(displaced_set(&p("(1 2 3 4)")).unwrap(), BTreeSet::from([1, 3]));
        assert_eq!(displaced_set(&Permutation::identity()), Err(ContractionError::IdentityInput));
    }

    #[test]
    fn worked_pair_satisfies_bounds() {
        let pair = vec![(p("(1 2 3)"), p("(1 3 2)")), (p("(1 2 3)"), p("(1 2 3)"))];
        let report = verify_cut_lemmas(&pair, 4);
        assert!(report.passed(), "{report:?}");
        assert!(report.equal_support.sample_size > 0);
    }

    #[test]
    fn exhaustive_small_degrees() {
        for n in 1..=4 {
            let report = verify_cut_lemmas_exhaustive(n, n + 2);
            assert!(report.passed(), "n={n}: {report:?}");
        }
    }

    #[test]
    fn norm_decrease_matches_definition() {
        for t in dense::all(5) {
            let s = Permutation::from_dense(&t);
            for k in 0..7 {
                assert!(supp_norm(&cut(&s, k).image) <= supp_norm(&s).saturating_sub(k));
            }
        }
    }

    #[test]
    fn samplers_respect_degree_and_support() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (s, t) in sample_pairs(&mut rng, 30, 60) {
            assert!(s.max_point() <= 30 && t.max_point() <= 30);
        }
        let s = random_permutation(&mut rng, 12);
        let t = random_same_support(&mut rng, &s);
        assert!(s.support().eq(t.support()));
    }
}

//! Finitely supported permutations of the positive integers.
//!
//! Composition is left to right: `a.compose(&b)` applies `a` first and then
//! `b`, so that `(x y)(y z) = (x z y)`. Every other module relies on this
//! convention and a regression test pins it.

mod cycles;
pub mod dense;
mod norms;

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use cycles::CycleDecomposition;
pub use norms::{distance, supp_norm, three_cycle_norm, tr_norm, MAX_THREE_CYCLE_DEGREE};

/// A point moved by a permutation. Points are positive integers.
pub type Point = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("points are positive integers, got 0")]
    ZeroPoint,
    #[error("point {0} appears more than once")]
    RepeatedPoint(Point),
    #[error("mapping is not a bijection of its support")]
    NotBijective,
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("permutation {0} is odd")]
    OddPermutation(String),
    #[error("support of size {support} exceeds the exhaustive bound {max}")]
    DegreeTooLarge { support: usize, max: usize },
}

/// A bijection of the positive integers moving finitely many points.
///
/// Only moved points are stored, sorted by point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    moved: Vec<(Point, Point)>,
}

impl Permutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `(point, image)` pairs. Fixed pairs are
    /// dropped; the remaining pairs must form a bijection of their domain.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, PermError>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let mut moved: Vec<(Point, Point)> = pairs.into_iter().filter(|(x, y)| x != y).collect();
        moved.sort_unstable();
        for w in moved.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(PermError::RepeatedPoint(w[0].0));
            }
        }
        if moved.iter().any(|&(x, y)| x == 0 || y == 0) {
            return Err(PermError::ZeroPoint);
        }
        let mut images: Vec<Point> = moved.iter().map(|&(_, y)| y).collect();
        images.sort_unstable();
        if images.iter().zip(moved.iter()).any(|(y, (x, _))| y != x) {
            return Err(PermError::NotBijective);
        }
        Ok(Self { moved })
    }

    /// Builds a permutation from disjoint cycles; `[a, b, c]` sends
    /// `a -> b -> c -> a`. Cycles of length one are allowed and ignored.
    pub fn from_cycles<C: AsRef<[Point]>>(cycles: &[C]) -> Result<Self, PermError> {
        let mut pairs = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 {
                    return Err(PermError::ZeroPoint);
                }
                if !seen.insert(p) {
                    return Err(PermError::RepeatedPoint(p));
                }
            }
            for (i, &p) in cycle.iter().enumerate() {
                pairs.push((p, cycle[(i + 1) % cycle.len()]));
            }
        }
        Self::from_pairs(pairs)
    }

    /// A single cycle `(points[0] points[1] ...)`.
    pub fn cycle(points: &[Point]) -> Result<Self, PermError> {
        Self::from_cycles(&[points])
    }

    pub fn transposition(a: Point, b: Point) -> Result<Self, PermError> {
        Self::from_cycles(&[[a, b]])
    }

    /// One-line notation: `images[i]` is the image of `i + 1`.
    pub fn from_images(images: &[Point]) -> Result<Self, PermError> {
        Self::from_pairs(images.iter().enumerate().map(|(i, &y)| (i as Point + 1, y)))
    }

    /// The image of `x`.
    pub fn apply(&self, x: Point) -> Point {
        match self.moved.binary_search_by_key(&x, |&(p, _)| p) {
            Ok(i) => self.moved[i].1,
            Err(_) => x,
        }
    }

    /// Moved points in increasing order.
    pub fn support(&self) -> impl ExactSizeIterator<Item = Point> + '_ {
        self.moved.iter().map(|&(x, _)| x)
    }

    pub fn moved_pairs(&self) -> &[(Point, Point)] {
        &self.moved
    }

    pub fn supp_norm(&self) -> usize {
        self.moved.len()
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// Largest moved point, 0 for the identity.
    pub fn max_point(&self) -> Point {
        self.moved.last().map_or(0, |&(x, _)| x)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        let mut moved = Vec::with_capacity(self.moved.len() + other.moved.len());
        for x in merged_support(&self.moved, &other.moved) {
            let y = other.apply(self.apply(x));
            if y != x {
                moved.push((x, y));
            }
        }
        Permutation { moved }
    }

    pub fn inverse(&self) -> Permutation {
        let mut moved: Vec<(Point, Point)> = self.moved.iter().map(|&(x, y)| (y, x)).collect();
        moved.sort_unstable();
        Permutation { moved }
    }

    /// `c * self * c⁻¹` in left-to-right order. This relabels every cycle
    /// `(a b ...)` of `self` as `(c⁻¹(a) c⁻¹(b) ...)`.
    pub fn conjugate(&self, c: &Permutation) -> Permutation {
        c.compose(self).compose(&c.inverse())
    }

    /// Renames points through `f`: the cycle `(a b ...)` becomes
    /// `(f(a) f(b) ...)`. `f` must be injective on the support.
    pub fn relabel(&self, f: impl Fn(Point) -> Point) -> Permutation {
        let mut moved: Vec<(Point, Point)> = self.moved.iter().map(|&(x, y)| (f(x), f(y))).collect();
        moved.sort_unstable();
        Permutation { moved }
    }

    /// `[self, other] = self * other * self⁻¹ * other⁻¹`, left to right.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.compose(other).compose(&self.inverse()).compose(&other.inverse())
    }

    pub fn pow(&self, exponent: i64) -> Permutation {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut result = Permutation::identity();
        for _ in 0..exponent.unsigned_abs() {
            result = result.compose(&base);
        }
        result
    }

    pub fn cycles(&self) -> CycleDecomposition {
        CycleDecomposition::of(self)
    }

    /// Sorted cycle lengths, all at least two.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn is_even(&self) -> bool {
        self.cycles().cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// The permutation as a 0-based image table on `{1..degree}`.
    ///
    /// # Panics
    /// If some moved point exceeds `degree` or `degree > 255`.
    pub fn to_dense(&self, degree: usize) -> Vec<u8> {
        assert!(degree <= u8::MAX as usize, "dense degree {degree} too large");
        assert!(self.max_point() as usize <= degree, "support exceeds degree {degree}");
        let mut table: Vec<u8> = (0..degree as u8).collect();
        for &(x, y) in &self.moved {
            table[x as usize - 1] = (y - 1) as u8;
        }
        table
    }

    /// Inverse of [`Permutation::to_dense`].
    pub fn from_dense(table: &[u8]) -> Permutation {
        let moved = table
            .iter()
            .enumerate()
            .filter(|&(i, &y)| i != y as usize)
            .map(|(i, &y)| (i as Point + 1, y as Point + 1))
            .collect();
        Permutation { moved }
    }
}

/// Sorted union of the domains of two support tables.
fn merged_support<'a>(a: &'a [(Point, Point)], b: &'a [(Point, Point)]) -> impl Iterator<Item = Point> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || match (a.get(i), b.get(j)) {
        (Some(&(x, _)), Some(&(y, _))) => {
            if x < y {
                i += 1;
                Some(x)
            } else if y < x {
                j += 1;
                Some(y)
            } else {
                i += 1;
                j += 1;
                Some(x)
            }
        }
        (Some(&(x, _)), None) => {
            i += 1;
            Some(x)
        }
        (None, Some(&(y, _))) => {
            j += 1;
            Some(y)
        }
        (None, None) => None,
    })
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.cycles(), f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses cycle notation such as `"(1 2 3)(5 6)"`; `"()"` is the
    /// identity. Points may be separated by whitespace or commas.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PermError::Parse { input: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err("empty input"));
        }
        let mut cycles: Vec<Vec<Point>> = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = open.find(')').ok_or_else(|| err("unbalanced parentheses"))?;
            let body = &open[..close];
            if body.contains('(') {
                return Err(err("nested parentheses"));
            }
            let cycle = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<Point>().map_err(|_| err(&format!("bad point {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_cycles(&cycles).map_err(|e| match e {
            PermError::Parse { .. } => e,
            other => err(&other.to_string()),
        })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn left_to_right_convention_is_locked() {
        for (x, y, z) in [(1, 2, 3), (4, 7, 2), (9, 5, 6)] {
            let lhs = Permutation::transposition(x, y).unwrap().compose(&Permutation::transposition(y, z).unwrap());
            assert_eq!(lhs, Permutation::cycle(&[x, z, y]).unwrap());
        }
    }

    #[test]
    fn compose_identity_and_involution() {
        let s = p("(1 4 2)(3 5)");
        assert_eq!(s.compose(&Permutation::identity()), s);
        assert_eq!(Permutation::identity().compose(&s), s);
        assert!(p("(1 2)").compose(&p("(1 2)")).is_identity());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("()"), Permutation::identity());
        assert_eq!(p("(2 3 1)(6 5)").to_string(), "(1 2 3)(5 6)");
        assert_eq!(p(" (1,2) (3 4) ").to_string(), "(1 2)(3 4)");
        assert_eq!(Permutation::identity().to_string(), "()");
        assert_eq!(p("(7)").to_string(), "()");
        assert!("(1 2".parse::<Permutation>().is_err());
        assert!("(1 2)(2 3)".parse::<Permutation>().is_err());
        assert!("(0 1)".parse::<Permutation>().is_err());
        assert!("1 2".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }

    #[test]
    fn from_pairs_validates() {
        assert_eq!(Permutation::from_pairs([(1, 2), (2, 3)]), Err(PermError::NotBijective));
        assert_eq!(Permutation::from_pairs([(1, 2), (1, 3)]), Err(PermError::RepeatedPoint(1)));
        assert!(Permutation::from_pairs([(1, 2), (2, 1), (3, 3)]).unwrap().supp_norm() == 2);
        assert_eq!(Permutation::from_images(&[2, 3, 1]).unwrap(), p("(1 2 3)"));
    }

    #[test]
    fn inverse_conjugate_commutator() {
        let s = p("(1 2 3 4)(6 9)");
        assert!(s.compose(&s.inverse()).is_identity());
        let c = p("(1 5)(2 7)");
        // conjugation relabels cycles through c⁻¹
        let conj = s.conjugate(&c);
        assert_eq!(conj, s.relabel(|x| c.inverse().apply(x)));
        assert_eq!(conj.cycle_type(), s.cycle_type());
        assert!(s.commutator(&s).is_identity());
        assert_eq!(s.pow(4), p("()"));
        assert_eq!(s.pow(-1), s.inverse());
    }

    #[test]
    fn dense_round_trip_and_parity() {
        let s = p("(1 3)(2 5 4)");
        assert_eq!(Permutation::from_dense(&s.to_dense(6)), s);
        assert!(!s.is_even());
        assert!(p("(1 2 3)").is_even());
        assert!(p("(1 2)(3 4)").is_even());
        assert_eq!(s.cycle_type(), vec![2, 3]);
    }

    #[test]
    fn serde_uses_cycle_notation() {
        let s = p("(1 2)(3 4 5)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"(1 2)(3 4 5)\"");
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}

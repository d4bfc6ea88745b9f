use std::fmt;

use super::{Permutation, Point};

/// Disjoint cycle decomposition in canonical form: every cycle starts at
/// its minimum and cycles are sorted by that minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<Point>>,
}

impl CycleDecomposition {
    pub fn of(perm: &Permutation) -> Self {
        let mut cycles = Vec::new();
        let mut visited: Vec<Point> = Vec::new();
        // support() is increasing, so the first unvisited point of each
        // cycle is its minimum and cycles come out sorted.
        for start in perm.support() {
            if visited.binary_search(&start).is_ok() {
                continue;
            }
            let mut cycle = vec![start];
            let mut x = perm.apply(start);
            while x != start {
                cycle.push(x);
                x = perm.apply(x);
            }
            for &y in &cycle {
                if let Err(pos) = visited.binary_search(&y) {
                    visited.insert(pos, y);
                }
            }
            cycles.push(cycle);
        }
        Self { cycles }
    }

    pub fn cycles(&self) -> &[Vec<Point>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Points in the order they appear when the decomposition is written out.
    pub fn points_in_order(&self) -> impl Iterator<Item = Point> + '_ {
        self.cycles.iter().flatten().copied()
    }

    /// Left-to-right product of the cycles.
    pub fn compose_all(&self) -> Permutation {
        self.cycles.iter().fold(Permutation::identity(), |acc, c| {
            acc.compose(&Permutation::cycle(c).expect("cycles of a decomposition are valid"))
        })
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s: Permutation = "(5 3 4)(2 1)(9 7)".parse().unwrap();
        let d = s.cycles();
        assert_eq!(d.cycles(), &[vec![1, 2], vec![3, 4, 5], vec![7, 9]]);
        assert_eq!(d.points_in_order().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 7, 9]);
        assert_eq!(d.compose_all(), s);
        assert!(Permutation::identity().cycles().is_empty());
    }
}

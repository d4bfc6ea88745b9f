//! The support, transposition and 3-cycle norms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::dense::{self, DenseBfs};
use super::{PermError, Permutation};

/// Largest bounding degree for the exhaustive 3-cycle BFS (|A_9| = 181440).
pub const MAX_THREE_CYCLE_DEGREE: usize = 9;

/// Number of moved points.
pub fn supp_norm(sigma: &Permutation) -> usize {
    sigma.supp_norm()
}

/// Word length with respect to all transpositions: support minus the
/// number of non-trivial cycles.
pub fn tr_norm(sigma: &Permutation) -> usize {
    sigma.supp_norm() - sigma.cycles().len()
}

/// Bi-invariant support distance `supp(σ τ⁻¹)`, i.e. the number of points
/// on which `σ` and `τ` disagree.
pub fn distance(sigma: &Permutation, tau: &Permutation) -> usize {
    let (a, b) = (sigma.moved_pairs(), tau.moved_pairs());
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(x, fx)), Some(&(y, gy))) if x == y => {
                count += usize::from(fx != gy);
                i += 1;
                j += 1;
            }
            (Some(&(x, _)), Some(&(y, _))) if x < y => {
                count += 1;
                i += 1;
            }
            (Some(_), Some(_)) | (None, Some(_)) => {
                count += 1;
                j += 1;
            }
            (Some(_), None) => {
                count += 1;
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    count
}

fn three_cycle_table(degree: usize) -> Arc<DenseBfs> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<DenseBfs>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let mut guard = tables.lock().expect("three-cycle table cache poisoned");
    guard.entry(degree).or_insert_with(|| Arc::new(DenseBfs::run(degree, &dense::three_cycles(degree)))).clone()
}

/// Minimal number of 3-cycles whose product is `σ`.
///
/// Computed by breadth-first search over `A_m`, where `m` is the support
/// size padded to at least 5; the support is relabelled onto `{1..s}`.
pub fn three_cycle_norm(sigma: &Permutation) -> Result<usize, PermError> {
    if !sigma.is_even() {
        return Err(PermError::OddPermutation(sigma.to_string()));
    }
    if sigma.is_identity() {
        return Ok(0);
    }
    let support = sigma.supp_norm();
    let degree = support.max(5);
    if degree > MAX_THREE_CYCLE_DEGREE {
        return Err(PermError::DegreeTooLarge { support, max: MAX_THREE_CYCLE_DEGREE });
    }
    three_cycle_norm_in_degree(sigma, degree)
}

/// Same as [`three_cycle_norm`] but searching inside `A_degree`.
pub(crate) fn three_cycle_norm_in_degree(sigma: &Permutation, degree: usize) -> Result<usize, PermError> {
    let support = sigma.supp_norm();
    if degree < support || degree > MAX_THREE_CYCLE_DEGREE {
        return Err(PermError::DegreeTooLarge { support, max: MAX_THREE_CYCLE_DEGREE });
    }
    let points: Vec<u32> = sigma.support().collect();
    let packed = sigma.relabel(|x| points.binary_search(&x).expect("support point") as u32 + 1);
    let table = three_cycle_table(degree);
    let d = table.distance(&packed.to_dense(degree)).expect("A_m is generated by 3-cycles for m >= 3");
    Ok(d as usize)
}

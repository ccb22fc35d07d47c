//! Exhaustive-grid reference fronts for cross-checking the solver.
//!
//! The oracle enumerates a finite decision grid and extracts nondominated
//! sets by brute force, in two deliberately different formulations:
//!
//! * [`FrontMode::PenaltyForm`] — nondominated set of the *full* objective
//!   vector (penalty entry included), restricted afterwards to penalty zero;
//! * [`FrontMode::ConstrainedForm`] — feasible grid points first (by the
//!   problem's *direct* limit checks, not the penalty), then the
//!   nondominated set of the objective vector with the penalty entry
//!   removed.
//!
//! On any finite grid the two produce exactly the same decision points, so
//! comparing them exercises the penalty formulation end to end. Dominance
//! culling here is written independently of the solver's population
//! machinery: the routines cross-check each other, so they share no code
//! beyond the objective evaluation itself.

use crate::bounds::Bounds;
use crate::error::Error;
use crate::moia::{Member, Problem};
use crate::scalar::Scalar;

/// Evaluation budget a grid must fit in unless overridden.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A problem the oracle can check exhaustively: searchable and equipped with
/// a direct feasibility test that bypasses the penalty entry.
pub trait ConstrainedProblem<T: Scalar>: Problem<T> {
    /// True when the decision satisfies every constraint, checked as plain
    /// inequalities rather than through the penalty.
    fn is_feasible(&self, point: &[T]) -> bool;
}

/// Rectangular evaluation grid: sample counts per decision dimension over a
/// box, guarded by a total-point budget.
#[derive(Debug, Clone)]
pub struct GridSpec<T> {
    /// Box the grid spans.
    pub bounds: Bounds<T>,
    /// Samples per dimension (at least 2 each, endpoints included).
    pub counts: Vec<usize>,
    /// Maximum admissible total point count.
    pub budget: usize,
}

impl<T: Scalar> GridSpec<T> {
    /// Grid over `bounds` with the default budget.
    pub fn over(bounds: Bounds<T>, counts: Vec<usize>) -> Self {
        Self {
            bounds,
            counts,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Validates shape and budget; returns the total point count.
    pub fn total_points(&self) -> Result<usize, Error> {
        assert_eq!(
            self.counts.len(),
            self.bounds.len(),
            "one sample count per decision dimension"
        );
        assert!(
            self.counts.iter().all(|&c| c >= 2),
            "grids need at least 2 samples per dimension"
        );
        let mut total: usize = 1;
        for &c in &self.counts {
            total = total.checked_mul(c).ok_or(Error::BudgetExceeded {
                points: usize::MAX,
                budget: self.budget,
            })?;
        }
        if total > self.budget {
            return Err(Error::BudgetExceeded {
                points: total,
                budget: self.budget,
            });
        }
        Ok(total)
    }
}

/// Which formulation the exhaustive front uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontMode {
    /// Full objective vector, penalty included; zero-penalty filter applied
    /// after dominance culling.
    PenaltyForm,
    /// Direct feasibility filter first, dominance on the penalty-free
    /// objective entries.
    ConstrainedForm,
}

// Local dominance check, kept separate from the solver's on purpose.
fn dominates_min<T: Scalar>(u: &[T], v: &[T]) -> bool {
    let mut strict = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strict = true;
        }
    }
    strict
}

/// Incremental nondominated culling; keeps duplicates, order of the result
/// is deterministic for a fixed input order.
fn nondominated<T: Scalar>(items: Vec<Member<T>>) -> Vec<Member<T>> {
    let mut front: Vec<Member<T>> = Vec::new();
    'next: for item in items {
        let mut i = 0;
        while i < front.len() {
            if dominates_min(&front[i].objectives, &item.objectives) {
                continue 'next;
            }
            if dominates_min(&item.objectives, &front[i].objectives) {
                front.swap_remove(i);
            } else {
                i += 1;
            }
        }
        front.push(item);
    }
    front
}

/// Endpoint-exact uniform samples of `[lo, hi]`.
fn linspace<T: Scalar>(lo: T, hi: T, count: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_usize(count - 1).expect("count fits scalar");
    (0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                lo + T::from_usize(i).expect("index fits scalar") * step
            }
        })
        .collect()
}

/// Exhaustive nondominated set of the grid under the chosen formulation.
///
/// Grid points are enumerated with the last dimension varying fastest.
/// Returned members carry the full objective vector in penalty form and the
/// penalty-free vector in constrained form; their decision points are
/// directly comparable across modes.
pub fn brute_force_front<T, P>(
    problem: &P,
    grid: &GridSpec<T>,
    mode: FrontMode,
) -> Result<Vec<Member<T>>, Error>
where
    T: Scalar,
    P: ConstrainedProblem<T>,
{
    let total = grid.total_points()?;
    let dims = grid.counts.len();
    let axes: Vec<Vec<T>> = (0..dims)
        .map(|d| linspace(grid.bounds.lower[d], grid.bounds.upper[d], grid.counts[d]))
        .collect();
    let penalty_index = problem.penalty_index();

    let mut candidates = Vec::new();
    let mut point = vec![T::zero(); dims];
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..dims).rev() {
            point[d] = axes[d][rem % grid.counts[d]];
            rem /= grid.counts[d];
        }
        match mode {
            FrontMode::PenaltyForm => {
                let objectives = problem.evaluate(&point);
                candidates.push(Member {
                    point: point.clone(),
                    objectives,
                });
            }
            FrontMode::ConstrainedForm => {
                if problem.is_feasible(&point) {
                    let mut objectives = problem.evaluate(&point);
                    objectives.remove(penalty_index);
                    candidates.push(Member {
                        point: point.clone(),
                        objectives,
                    });
                }
            }
        }
    }

    let mut front = nondominated(candidates);
    if mode == FrontMode::PenaltyForm {
        front.retain(|m| m.objectives[penalty_index] == T::zero());
    }
    Ok(front)
}

/// Mutual tolerance-coverage of two fronts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    /// Fraction of candidate points some reference point matches to
    /// tolerance (the headline statistic: how consistent the candidate is
    /// with the reference).
    pub candidate_covered: f64,
    /// Fraction of reference points some candidate point matches to
    /// tolerance (how completely the candidate spans the reference).
    pub reference_covered: f64,
}

/// Compares a candidate front against a reference front with per-dimension
/// relative tolerances.
///
/// A point `u` is covered when some reference point `r` satisfies
/// `r[j] <= u[j] + tol[j]` in every dimension, where
/// `tol[j] = epsilon[j] · range[j]` over the *reference* front's ranges; a
/// spread-less dimension falls back to the absolute tolerance `epsilon[j]`.
/// The reverse statistic swaps the roles but keeps the same tolerances. An
/// empty candidate is vacuously covered; an empty reference covers nothing.
pub fn front_coverage<T: Scalar>(
    candidate: &[Vec<T>],
    reference: &[Vec<T>],
    epsilon: &[T],
) -> Coverage {
    if candidate.is_empty() {
        return Coverage {
            candidate_covered: 1.0,
            reference_covered: if reference.is_empty() { 1.0 } else { 0.0 },
        };
    }
    if reference.is_empty() {
        return Coverage {
            candidate_covered: 0.0,
            reference_covered: 1.0,
        };
    }
    let dims = epsilon.len();
    assert!(
        candidate.iter().chain(reference).all(|v| v.len() == dims),
        "front vectors and tolerances must agree in dimension"
    );
    let mut tol = Vec::with_capacity(dims);
    for j in 0..dims {
        let lo = reference
            .iter()
            .map(|r| r[j])
            .fold(T::infinity(), |a, b| a.min(b));
        let hi = reference
            .iter()
            .map(|r| r[j])
            .fold(T::neg_infinity(), |a, b| a.max(b));
        let range = hi - lo;
        tol.push(if range > T::zero() {
            epsilon[j] * range
        } else {
            epsilon[j]
        });
    }
    let matches = |u: &Vec<T>, r: &Vec<T>| (0..dims).all(|j| r[j] <= u[j] + tol[j]);
    let covered_c = candidate
        .iter()
        .filter(|u| reference.iter().any(|r| matches(u, r)))
        .count();
    let covered_r = reference
        .iter()
        .filter(|r| candidate.iter().any(|u| matches(r, u)))
        .count();
    Coverage {
        candidate_covered: covered_c as f64 / candidate.len() as f64,
        reference_covered: covered_r as f64 / reference.len() as f64,
    }
}

/// Exact set equality of two fronts' decision points (multiset semantics,
/// insertion order ignored). Grid fronts hold bit-identical decision values
/// wherever they select the same grid nodes, so no tolerance is involved.
pub fn same_decision_set<T: Scalar>(a: &[Member<T>], b: &[Member<T>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let key = |members: &[Member<T>]| {
        let mut points: Vec<Vec<T>> = members.iter().map(|m| m.point.clone()).collect();
        points.sort_by(|u, v| u.partial_cmp(v).expect("grid decision points are finite"));
        points
    };
    key(a) == key(b)
}

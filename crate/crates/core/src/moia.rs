//! Immune-inspired multiobjective search over a box in decision space.
//!
//! The solver works on any problem exposing box bounds and an objective
//! vector whose last entry (by convention, see [`Problem::penalty_index`]) is
//! a non-negative constraint penalty. One run:
//!
//! 1. seed a nominal-size population uniformly over the box;
//! 2. keep only nondominated members;
//! 3. *gene operation* — every member spawns clones blended toward fresh
//!    uniform points, filling the population up to the maximum size;
//! 4. *constraint prune* — while oversize, drop the worst penalty violator;
//! 5. keep only nondominated members;
//! 6. *fitness truncation* — while oversize, drop the most crowded member
//!    (crowding distance in objective space, boundary members protected);
//! 7. after the last iteration, drop every member still violating.
//!
//! Steps 3–6 repeat for a fixed iteration count. The survivors of step 7
//! form the [`ParetoArchive`]; [`knee_select`] picks the balanced compromise
//! out of it.
//!
//! Determinism: all randomness flows through one ChaCha8 stream seeded from
//! [`MoiaParams::seed`]. Seeding consumes one uniform draw per decision
//! component, member by member; each expansion consumes, per parent and per
//! clone, first the blend weight and then one draw per component of the
//! fresh point. Same seed, same problem — bit-identical archive.

use rand::distr::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::Error;
use crate::scalar::Scalar;

/// A problem the solver can search: box-bounded decisions mapping to a
/// minimized objective vector with a trailing penalty entry.
pub trait Problem<T: Scalar> {
    /// Decision-space box the population lives in.
    fn bounds(&self) -> &Bounds<T>;

    /// Number of objective entries, penalty included.
    fn objective_len(&self) -> usize;

    /// Index of the non-negative constraint-penalty entry.
    fn penalty_index(&self) -> usize {
        self.objective_len() - 1
    }

    /// Objective vector of one decision point. Must be pure and total over
    /// the box.
    fn evaluate(&self, point: &[T]) -> Vec<T>;
}

/// Solver sizing and seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoiaParams {
    /// Nominal population size: the seed count and the per-iteration cap.
    pub n_nom: usize,
    /// Expansion ceiling the gene operation fills toward.
    pub n_max: usize,
    /// Number of expansion/selection iterations.
    pub t_max: usize,
    /// Seed of the run's ChaCha8 stream.
    pub seed: u64,
}

impl MoiaParams {
    /// Checks `0 < n_nom <= n_max` and `t_max >= 1`.
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_nom == 0 || self.n_nom > self.n_max {
            return Err(Error::InvalidParams(format!(
                "population sizes n_nom={} n_max={} must satisfy 0 < n_nom <= n_max",
                self.n_nom, self.n_max
            )));
        }
        if self.t_max == 0 {
            return Err(Error::InvalidParams("t_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// One population member: a decision point and its objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Member<T> {
    /// Raw decision vector.
    pub point: Vec<T>,
    /// Minimized objective entries, penalty last.
    pub objectives: Vec<T>,
}

/// The evolving population.
#[derive(Debug, Clone)]
pub struct Population<T> {
    /// Members in insertion order; tie-breaking in the pruning operators
    /// keys off this order.
    pub members: Vec<Member<T>>,
    /// Completed iteration count.
    pub counter: usize,
}

/// Final nondominated, feasible set of a run together with its
/// per-dimension objective extremes.
#[derive(Debug, Clone)]
pub struct ParetoArchive<T> {
    /// Archive members in the order the run produced them.
    pub entries: Vec<Member<T>>,
    /// Per-objective minimum over the entries (empty when the archive is).
    pub lower: Vec<T>,
    /// Per-objective maximum over the entries (empty when the archive is).
    pub upper: Vec<T>,
}

impl<T: Scalar> ParetoArchive<T> {
    /// Wraps members, computing per-objective extremes.
    pub fn from_members(entries: Vec<Member<T>>) -> Self {
        let (lower, upper) = match entries.first() {
            None => (Vec::new(), Vec::new()),
            Some(first) => {
                let mut lower = first.objectives.clone();
                let mut upper = first.objectives.clone();
                for m in &entries[1..] {
                    for (j, &f) in m.objectives.iter().enumerate() {
                        lower[j] = lower[j].min(f);
                        upper[j] = upper[j].max(f);
                    }
                }
                (lower, upper)
            }
        };
        Self {
            entries,
            lower,
            upper,
        }
    }

    /// Number of archived designs.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the run ended with no feasible nondominated design.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Strict Pareto dominance for minimization: `u` is nowhere worse than `v`
/// and strictly better somewhere.
///
/// # Panics
///
/// Panics on dimension mismatch.
pub fn dominates<T: Scalar>(u: &[T], v: &[T]) -> bool {
    assert_eq!(u.len(), v.len(), "objective vectors must agree in length");
    let mut strictly_better = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Keeps exactly the members no other member dominates, preserving order.
/// Members with identical objective vectors never dominate each other, so
/// duplicates survive together.
pub fn pareto_filter<T: Scalar>(members: &mut Vec<Member<T>>) {
    let keep: Vec<bool> = members
        .iter()
        .map(|m| {
            !members
                .iter()
                .any(|o| dominates(&o.objectives, &m.objectives))
        })
        .collect();
    let mut flags = keep.iter();
    members.retain(|_| *flags.next().unwrap());
}

/// Clone count per member when expanding a population of `n_p` toward
/// `n_max`: integer part of the ratio, at least 1 (the member itself).
pub fn clonal_rate(n_max: usize, n_p: usize) -> usize {
    (n_max / n_p).max(1)
}

/// Blends a parent decision toward a fresh point: componentwise
/// `delta·parent + (1-delta)·fresh`.
pub fn blend<T: Scalar>(parent: &[T], fresh: &[T], delta: T) -> Vec<T> {
    parent
        .iter()
        .zip(fresh)
        .map(|(&p, &f)| delta * p + (T::one() - delta) * f)
        .collect()
}

/// Gene operation: every member spawns `clonal_rate - 1` mutants, each a
/// blend of the parent and a fresh uniform point of the box. Mutants are
/// evaluated and appended after all parents, grouped in parent order.
///
/// Per mutant the RNG yields the blend weight first, then the fresh point
/// component by component. Blends are clamped into the box, which only
/// corrects sub-ulp rounding drift at the box faces.
pub fn gene_operation<T, P, R>(pop: &mut Population<T>, n_max: usize, problem: &P, rng: &mut R)
where
    T: Scalar,
    P: Problem<T>,
    R: Rng,
{
    let bounds = problem.bounds();
    let n_p = pop.members.len();
    let rate = clonal_rate(n_max, n_p);
    let weight = Uniform::new_inclusive(T::zero(), T::one()).expect("unit interval");
    let mut mutants = Vec::with_capacity(n_p * (rate - 1));
    for parent in &pop.members {
        for _ in 1..rate {
            let delta = rng.sample(&weight);
            let fresh = bounds.sample(rng);
            let mut point = blend(&parent.point, &fresh, delta);
            bounds.clamp(&mut point);
            let objectives = problem.evaluate(&point);
            mutants.push(Member { point, objectives });
        }
    }
    pop.members.append(&mut mutants);
}

/// While the population exceeds `n_nom` and violators remain, removes the
/// member with the largest strictly positive penalty (earliest-inserted
/// first among ties).
pub fn constraint_prune<T: Scalar>(
    members: &mut Vec<Member<T>>,
    n_nom: usize,
    penalty_index: usize,
) {
    while members.len() > n_nom {
        let mut worst: Option<(usize, T)> = None;
        for (i, m) in members.iter().enumerate() {
            let p = m.objectives[penalty_index];
            if p > T::zero() && worst.is_none_or(|(_, wp)| p > wp) {
                worst = Some((i, p));
            }
        }
        match worst {
            Some((i, _)) => {
                members.remove(i);
            }
            None => break,
        }
    }
}

/// Crowding fitness: per objective dimension, the two boundary members get
/// infinite fitness; interior members accumulate their neighbour gap
/// normalized by the dimension's range (zero-range dimensions contribute
/// nothing).
fn crowding_fitness<T: Scalar>(members: &[Member<T>]) -> Vec<T> {
    let n = members.len();
    let dims = members[0].objectives.len();
    let mut fitness = vec![T::zero(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for j in 0..dims {
        order.clear();
        order.extend(0..n);
        // Stable sort: ties stay in insertion order, making boundary picks
        // and therefore the whole truncation deterministic.
        order.sort_by(|&a, &b| {
            members[a].objectives[j]
                .partial_cmp(&members[b].objectives[j])
                .expect("objectives must be finite")
        });
        fitness[order[0]] = T::infinity();
        fitness[order[n - 1]] = T::infinity();
        let range = members[order[n - 1]].objectives[j] - members[order[0]].objectives[j];
        if range > T::zero() {
            for w in 1..n - 1 {
                let gap = (members[order[w + 1]].objectives[j]
                    - members[order[w - 1]].objectives[j])
                    / range;
                fitness[order[w]] += gap;
            }
        }
    }
    fitness
}

/// While the population exceeds `n_nom`, removes the least-fit member by
/// crowding distance and recomputes. Boundary members per dimension are
/// protected by infinite fitness; among equally least-fit members the
/// latest-inserted goes first, so earlier members survive longest.
pub fn fitness_truncate<T: Scalar>(members: &mut Vec<Member<T>>, n_nom: usize) {
    while members.len() > n_nom {
        let fitness = crowding_fitness(members);
        let mut least = 0;
        for i in 1..members.len() {
            if fitness[i] <= fitness[least] {
                least = i;
            }
        }
        members.remove(least);
    }
}

fn lex_less<T: Scalar>(u: &[T], v: &[T]) -> bool {
    for (a, b) in u.iter().zip(v) {
        if a < b {
            return true;
        }
        if a > b {
            return false;
        }
    }
    false
}

/// Index of the knee entry: the member maximizing the worst normalized
/// distance-to-worst over the objective dimensions `dims`.
///
/// Per dimension the score is `(upper - f) / (upper - lower)` over the
/// archive's extremes — 1 at the best value seen, 0 at the worst — and a
/// degenerate dimension (no spread) scores 1 for everyone. Ties go to the
/// lexicographically smallest objective vector. Invariant under any
/// per-dimension strictly increasing affine rescaling of the objectives.
pub fn knee_index<T: Scalar>(archive: &ParetoArchive<T>, dims: &[usize]) -> Result<usize, Error> {
    if archive.is_empty() {
        return Err(Error::EmptyArchive);
    }
    let score = |m: &Member<T>| {
        let mut worst = T::infinity();
        for &j in dims {
            let range = archive.upper[j] - archive.lower[j];
            let ratio = if range > T::zero() {
                (archive.upper[j] - m.objectives[j]) / range
            } else {
                T::one()
            };
            worst = worst.min(ratio);
        }
        worst
    };
    let mut best = 0;
    let mut best_score = score(&archive.entries[0]);
    for (i, m) in archive.entries.iter().enumerate().skip(1) {
        let s = score(m);
        if s > best_score
            || (s == best_score && lex_less(&m.objectives, &archive.entries[best].objectives))
        {
            best = i;
            best_score = s;
        }
    }
    Ok(best)
}

/// The knee entry itself; see [`knee_index`].
pub fn knee_select<'a, T: Scalar>(
    archive: &'a ParetoArchive<T>,
    dims: &[usize],
) -> Result<&'a Member<T>, Error> {
    Ok(&archive.entries[knee_index(archive, dims)?])
}

/// Population sizes observed around one solver iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationStats {
    /// Iteration number, starting at 0.
    pub iteration: usize,
    /// Clone count per member used by this expansion.
    pub clonal_rate: usize,
    /// Population size entering the expansion.
    pub before_expansion: usize,
    /// Size right after the expansion.
    pub after_expansion: usize,
    /// Size after the constraint prune.
    pub after_prune: usize,
    /// Size after the dominance filter.
    pub after_filter: usize,
    /// Size after the fitness truncation (ends the iteration).
    pub after_truncate: usize,
}

/// Runs the full search; see the module docs for the step sequence.
///
/// An empty archive is a legitimate outcome (every survivor violated some
/// limit); callers fall back to an always-feasible decision in that case.
pub fn run_moia<T, P>(problem: &P, params: &MoiaParams) -> Result<ParetoArchive<T>, Error>
where
    T: Scalar,
    P: Problem<T>,
{
    run_moia_observed(problem, params, |_| {})
}

/// [`run_moia`] with a per-iteration observer for size instrumentation.
pub fn run_moia_observed<T, P, F>(
    problem: &P,
    params: &MoiaParams,
    mut observe: F,
) -> Result<ParetoArchive<T>, Error>
where
    T: Scalar,
    P: Problem<T>,
    F: FnMut(&IterationStats),
{
    params.validate()?;
    let bounds = problem.bounds();
    assert!(
        !bounds.is_empty(),
        "problem needs at least one decision component"
    );
    assert!(
        problem.penalty_index() < problem.objective_len(),
        "penalty entry must be part of the objective vector"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut members: Vec<Member<T>> = (0..params.n_nom)
        .map(|_| {
            let point = bounds.sample(&mut rng);
            let objectives = problem.evaluate(&point);
            Member { point, objectives }
        })
        .collect();
    pareto_filter(&mut members);
    let mut pop = Population {
        members,
        counter: 0,
    };

    for t in 0..params.t_max {
        let before_expansion = pop.members.len();
        let rate = clonal_rate(params.n_max, before_expansion);
        gene_operation(&mut pop, params.n_max, problem, &mut rng);
        let after_expansion = pop.members.len();
        constraint_prune(&mut pop.members, params.n_nom, problem.penalty_index());
        let after_prune = pop.members.len();
        pareto_filter(&mut pop.members);
        let after_filter = pop.members.len();
        fitness_truncate(&mut pop.members, params.n_nom);
        pop.counter = t + 1;
        observe(&IterationStats {
            iteration: t,
            clonal_rate: rate,
            before_expansion,
            after_expansion,
            after_prune,
            after_filter,
            after_truncate: pop.members.len(),
        });
    }

    let penalty_index = problem.penalty_index();
    pop.members
        .retain(|m| m.objectives[penalty_index] <= T::zero());
    Ok(ParetoArchive::from_members(pop.members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn member(objectives: Vec<f64>) -> Member<f64> {
        Member {
            point: vec![objectives.len() as f64],
            objectives,
        }
    }

    #[test]
    fn dominance_needs_a_strict_edge() {
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]));
        assert!(!dominates(&[1.0, 3.0], &[1.0, 2.0]));
        assert!(!dominates(&[0.0, 1.0], &[1.0, 0.0]));
        assert!(!dominates(&[2.0, 2.0], &[2.0, 2.0]));
    }

    #[test]
    #[should_panic(expected = "agree in length")]
    fn dominance_rejects_mismatched_lengths() {
        let _ = dominates(&[1.0], &[1.0, 2.0]);
    }

    #[test]
    fn filter_keeps_the_front_and_duplicates() {
        let mut members = vec![
            member(vec![0.0, 1.0]),
            member(vec![1.0, 0.0]),
            member(vec![0.4, 0.4]),
            member(vec![2.0, 2.0]),
            member(vec![0.4, 0.4]),
        ];
        pareto_filter(&mut members);
        let left: Vec<_> = members.iter().map(|m| m.objectives.clone()).collect();
        assert_eq!(
            left,
            vec![
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![0.4, 0.4],
                vec![0.4, 0.4]
            ]
        );
    }

    #[test]
    fn clonal_rate_floors_and_saturates() {
        assert_eq!(clonal_rate(320, 80), 4);
        assert_eq!(clonal_rate(320, 100), 3);
        assert_eq!(clonal_rate(320, 320), 1);
        assert_eq!(clonal_rate(320, 400), 1);
    }

    #[test]
    fn blend_endpoints_reproduce_parent_and_fresh() {
        let parent = [2.0, 4.0];
        let fresh = [10.0, -6.0];
        assert_eq!(blend(&parent, &fresh, 1.0), vec![2.0, 4.0]);
        assert_eq!(blend(&parent, &fresh, 0.0), vec![10.0, -6.0]);
        assert_eq!(blend(&parent, &fresh, 0.5), vec![6.0, -1.0]);
    }

    #[test]
    fn prune_drops_the_worst_violators_until_nominal() {
        let mut members = vec![
            member(vec![1.0, 5.0]),
            member(vec![2.0, 2.0]),
            member(vec![3.0, 0.0]),
            member(vec![4.0, 0.0]),
        ];
        constraint_prune(&mut members, 2, 1);
        let left: Vec<f64> = members.iter().map(|m| m.objectives[0]).collect();
        assert_eq!(left, vec![3.0, 4.0]);
    }

    #[test]
    fn prune_stops_once_everyone_is_feasible() {
        let mut members = vec![
            member(vec![1.0, 0.0]),
            member(vec![2.0, 0.0]),
            member(vec![3.0, 0.0]),
        ];
        constraint_prune(&mut members, 2, 1);
        assert_eq!(members.len(), 3);
    }

    #[test]
    fn prune_breaks_penalty_ties_toward_the_oldest() {
        let mut members = vec![
            member(vec![1.0, 3.0]),
            member(vec![2.0, 3.0]),
            member(vec![3.0, 0.0]),
        ];
        constraint_prune(&mut members, 2, 1);
        let left: Vec<f64> = members.iter().map(|m| m.objectives[0]).collect();
        assert_eq!(left, vec![2.0, 3.0]); // the older of the tied violators went first
    }

    #[test]
    fn truncation_removes_the_most_crowded_interior_member() {
        let mut members = vec![
            member(vec![0.0, 1.0]),
            member(vec![0.5, 0.5]),
            member(vec![0.45, 0.55]),
            member(vec![1.0, 0.0]),
        ];
        fitness_truncate(&mut members, 3);
        let left: Vec<_> = members.iter().map(|m| m.objectives.clone()).collect();
        assert_eq!(left, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
    }

    #[test]
    fn truncation_of_identical_vectors_keeps_the_oldest_interiors() {
        let mut members: Vec<Member<f64>> = (0..5)
            .map(|i| Member {
                point: vec![i as f64],
                objectives: vec![1.0, 1.0],
            })
            .collect();
        fitness_truncate(&mut members, 3);
        let ids: Vec<f64> = members.iter().map(|m| m.point[0]).collect();
        // Both boundary picks (first and last by insertion) survive; among
        // the interior the latest-inserted go first.
        assert_eq!(ids, vec![0.0, 1.0, 4.0]);
    }

    #[test]
    fn knee_picks_the_balanced_design() {
        let archive = ParetoArchive::from_members(vec![
            member(vec![0.0, 1.0]),
            member(vec![1.0, 0.0]),
            member(vec![0.4, 0.4]),
        ]);
        let knee = knee_select(&archive, &[0, 1]).unwrap();
        assert_eq!(knee.objectives, vec![0.4, 0.4]);
    }

    #[test]
    fn knee_scores_degenerate_dimensions_as_perfect() {
        let archive =
            ParetoArchive::from_members(vec![member(vec![0.0, 5.0]), member(vec![1.0, 5.0])]);
        let knee = knee_select(&archive, &[0, 1]).unwrap();
        assert_eq!(knee.objectives, vec![0.0, 5.0]);
    }

    #[test]
    fn knee_breaks_ties_lexicographically() {
        // Two symmetric designs score the same worst-ratio 0.25.
        let archive = ParetoArchive::from_members(vec![
            member(vec![3.0, 1.0]),
            member(vec![1.0, 3.0]),
            member(vec![0.0, 4.0]),
            member(vec![4.0, 0.0]),
        ]);
        let knee = knee_select(&archive, &[0, 1]).unwrap();
        assert_eq!(knee.objectives, vec![1.0, 3.0]);
    }

    #[test]
    fn knee_on_an_empty_archive_is_an_error() {
        let archive = ParetoArchive::<f64>::from_members(vec![]);
        assert!(matches!(
            knee_select(&archive, &[0]),
            Err(Error::EmptyArchive)
        ));
    }

    /// Two decisions in [0,1]²: objectives (x, 1-x), penalty max(y-0.5, 0).
    struct Toy {
        bounds: Bounds<f64>,
    }

    impl Toy {
        fn new() -> Self {
            Self {
                bounds: Bounds::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            }
        }
    }

    impl Problem<f64> for Toy {
        fn bounds(&self) -> &Bounds<f64> {
            &self.bounds
        }

        fn objective_len(&self) -> usize {
            3
        }

        fn evaluate(&self, point: &[f64]) -> Vec<f64> {
            vec![point[0], 1.0 - point[0], (point[1] - 0.5).max(0.0)]
        }
    }

    /// Same box, but no decision is ever feasible.
    struct Hopeless {
        bounds: Bounds<f64>,
    }

    impl Problem<f64> for Hopeless {
        fn bounds(&self) -> &Bounds<f64> {
            &self.bounds
        }

        fn objective_len(&self) -> usize {
            2
        }

        fn evaluate(&self, point: &[f64]) -> Vec<f64> {
            vec![point[0], 1.0 + point[0]]
        }
    }

    fn params(seed: u64) -> MoiaParams {
        MoiaParams {
            n_nom: 20,
            n_max: 80,
            t_max: 30,
            seed,
        }
    }

    #[test]
    fn params_are_validated() {
        assert!(MoiaParams {
            n_nom: 0,
            n_max: 10,
            t_max: 5,
            seed: 0
        }
        .validate()
        .is_err());
        assert!(MoiaParams {
            n_nom: 20,
            n_max: 10,
            t_max: 5,
            seed: 0
        }
        .validate()
        .is_err());
        assert!(MoiaParams {
            n_nom: 5,
            n_max: 10,
            t_max: 0,
            seed: 0
        }
        .validate()
        .is_err());
        assert!(MoiaParams {
            n_nom: 5,
            n_max: 10,
            t_max: 1,
            seed: 0
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn gene_operation_fills_toward_the_ceiling_inside_the_box() {
        let toy = Toy::new();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut pop = Population {
            members: (0..20)
                .map(|_| {
                    let point = toy.bounds.sample(&mut rng);
                    let objectives = toy.evaluate(&point);
                    Member { point, objectives }
                })
                .collect(),
            counter: 0,
        };
        gene_operation(&mut pop, 80, &toy, &mut rng);
        assert_eq!(pop.members.len(), 80);
        assert!(pop.members.iter().all(|m| toy.bounds.contains(&m.point)));
    }

    #[test]
    fn run_finds_a_feasible_nondominated_archive() {
        let toy = Toy::new();
        let archive = run_moia(&toy, &params(3)).unwrap();
        assert!(!archive.is_empty());
        assert!(archive.len() <= 20);
        assert!(archive.entries.iter().all(|m| m.objectives[2] == 0.0));
        assert!(archive
            .entries
            .iter()
            .all(|m| toy.bounds.contains(&m.point)));
        for a in &archive.entries {
            for b in &archive.entries {
                assert!(!dominates(&a.objectives, &b.objectives));
            }
        }
    }

    #[test]
    fn run_reports_an_empty_archive_when_nothing_is_feasible() {
        let hopeless = Hopeless {
            bounds: Bounds::new(vec![0.0, 0.0], vec![1.0, 1.0]),
        };
        let archive = run_moia(&hopeless, &params(3)).unwrap();
        assert!(archive.is_empty());
        assert!(archive.lower.is_empty() && archive.upper.is_empty());
    }

    #[test]
    fn runs_are_bit_identical_for_the_same_seed() {
        let toy = Toy::new();
        let a = run_moia(&toy, &params(42)).unwrap();
        let b = run_moia(&toy, &params(42)).unwrap();
        let bits = |archive: &ParetoArchive<f64>| {
            archive
                .entries
                .iter()
                .flat_map(|m| m.point.iter().chain(&m.objectives).map(|x| x.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn concurrent_runs_with_separate_seeds_match_their_sequential_twins() {
        let toy = Toy::new();
        let sequential: Vec<_> = [7u64, 8u64]
            .iter()
            .map(|&s| run_moia(&toy, &params(s)).unwrap().len())
            .collect();
        let concurrent = std::thread::scope(|scope| {
            let handles: Vec<_> = [7u64, 8u64]
                .iter()
                .map(|&s| {
                    let toy = &toy;
                    scope.spawn(move || run_moia(toy, &params(s)).unwrap().len())
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap())
                .collect::<Vec<_>>()
        });
        assert_eq!(sequential, concurrent);
    }

    #[test]
    fn observer_sees_consistent_sizes() {
        let toy = Toy::new();
        let mut stats = Vec::new();
        run_moia_observed(&toy, &params(5), |s| stats.push(*s)).unwrap();
        assert_eq!(stats.len(), 30);
        for s in &stats {
            assert_eq!(s.clonal_rate, clonal_rate(80, s.before_expansion));
            assert_eq!(s.after_expansion, s.before_expansion * s.clonal_rate);
            assert!(s.after_expansion <= 80);
            assert!(s.after_truncate <= 20);
            assert!(s.after_filter >= s.after_truncate);
        }
    }

    proptest! {
        /// Dominance is irreflexive and asymmetric on arbitrary vectors.
        #[test]
        fn dominance_is_irreflexive_and_asymmetric(
            u in proptest::collection::vec(-5.0f64..5.0, 3),
            v in proptest::collection::vec(-5.0f64..5.0, 3),
        ) {
            prop_assert!(!dominates(&u, &u));
            if dominates(&u, &v) {
                prop_assert!(!dominates(&v, &u));
            }
        }

        /// Dominance is transitive; drawn from a small lattice so chains
        /// actually occur.
        #[test]
        fn dominance_is_transitive(
            u in proptest::collection::vec(0i8..4, 3),
            v in proptest::collection::vec(0i8..4, 3),
            w in proptest::collection::vec(0i8..4, 3),
        ) {
            let f = |x: &Vec<i8>| x.iter().map(|&i| i as f64).collect::<Vec<_>>();
            let (u, v, w) = (f(&u), f(&v), f(&w));
            if dominates(&u, &v) && dominates(&v, &w) {
                prop_assert!(dominates(&u, &w));
            }
        }

        /// Filtering is idempotent and never leaves a dominated member.
        #[test]
        fn filter_is_idempotent(
            raw in proptest::collection::vec(proptest::collection::vec(0i8..5, 2), 1..20),
        ) {
            let mut members: Vec<Member<f64>> = raw
                .iter()
                .map(|v| member(v.iter().map(|&i| i as f64).collect()))
                .collect();
            pareto_filter(&mut members);
            let once: Vec<_> = members.iter().map(|m| m.objectives.clone()).collect();
            for m in &members {
                prop_assert!(!members.iter().any(|o| dominates(&o.objectives, &m.objectives)));
            }
            pareto_filter(&mut members);
            let twice: Vec<_> = members.iter().map(|m| m.objectives.clone()).collect();
            prop_assert_eq!(once, twice);
        }

        /// Blends of in-box points stay in the box after clamping.
        #[test]
        fn blends_stay_in_the_box(
            px in 0.0f64..1.0, py in 0.0f64..1.0,
            fx in 0.0f64..1.0, fy in 0.0f64..1.0,
            delta in 0.0f64..1.0,
        ) {
            let bounds = Bounds::new(vec![0.0, 0.0], vec![1.0, 1.0]);
            let mut point = blend(&[px, py], &[fx, fy], delta);
            bounds.clamp(&mut point);
            prop_assert!(bounds.contains(&point));
        }
    }
}

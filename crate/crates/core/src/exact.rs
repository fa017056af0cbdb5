//! Exact minimisation of an [`Objective`] over all schedules.
//!
//! All three objectives are prefix-additive: the cost of appending task `i`
//! after the set `F` of already scheduled tasks depends only on `F` (through
//! the elapsed time `t = sum_{j in F} p_j`) and on `i`:
//!
//! * deviation: `sum_k m_k |t + p_i - d_ik|`
//! * tardiness: `sum_k m_k max(0, t + p_i - d_ik)`
//! * weighted Kendall tau: `p_i * sum_{j not in F, j != i} counts[j][i]`
//!
//! so a dynamic program over the `2^n` subsets finds the optimum. For every
//! subset the table keeps the optimal cost-to-go and the bitmask of first
//! moves achieving it; optimal schedules are exactly the paths from the
//! empty set that only take such moves. Taking the lowest task index at each
//! step yields the lexicographically least optimum.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics;
use crate::model::{Instance, Objective, Schedule};

/// Largest task count the subset DP accepts by default.
pub const DEFAULT_MAX_TASKS: usize = 20;
/// Largest task count the brute-force oracle accepts.
pub const ORACLE_MAX_TASKS: usize = 9;
/// Cells above which per-task cost tables are not precomputed.
const COST_TABLE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum TieBreak {
    /// Lexicographically least optimal order under the declared task order.
    #[default]
    Lexicographic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub enumerate_all: bool,
    pub optimum_cap: usize,
    pub tie_break: TieBreak,
    pub max_tasks: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            enumerate_all: false,
            optimum_cap: 1000,
            tie_break: TieBreak::Lexicographic,
            max_tasks: DEFAULT_MAX_TASKS,
        }
    }
}

impl SolveOptions {
    pub fn enumerating(cap: usize) -> Self {
        Self {
            enumerate_all: true,
            optimum_cap: cap,
            ..Self::default()
        }
    }
}

/// Number of optimal schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OptimumCount {
    Exact(u64),
    /// The count saturated; at least this many.
    AtLeast(u64),
}

impl OptimumCount {
    pub fn is_unique(self) -> bool {
        self == OptimumCount::Exact(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub objective: Objective,
    pub optimal_score: u64,
    /// The tie-broken representative.
    pub schedule: Schedule,
    pub optimum_count: OptimumCount,
    /// Optimal schedules in lexicographic order, when enumeration was requested.
    pub optima: Option<Vec<Schedule>>,
    /// Whether `optima` holds every optimum (false when the cap cut it short).
    pub optima_complete: bool,
    pub states_explored: u64,
    pub wall_time: Duration,
}

/// Result of [`enumerate_optima`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub optima: Vec<Schedule>,
    pub complete: bool,
}

enum StepCost<'a> {
    /// `table[i * stride + c]` is the cost of task `i` completing at `c`.
    Table {
        stride: usize,
        table: Vec<u64>,
        lengths: &'a [u64],
    },
    Direct(&'a Instance, Objective),
    Kendall { lengths: &'a [u64], colsum: Vec<u64>, instance: &'a Instance },
}

impl<'a> StepCost<'a> {
    fn new(instance: &'a Instance, objective: Objective) -> Self {
        let n = instance.n();
        match objective {
            Objective::PtaKendallTau => StepCost::Kendall {
                lengths: instance.tasks().lengths(),
                colsum: (0..n).map(|i| instance.pairwise().column_sum(i)).collect(),
                instance,
            },
            _ => {
                let stride = instance.tasks().total_load() as u128 + 1;
                if stride * n as u128 > COST_TABLE_LIMIT {
                    return StepCost::Direct(instance, objective);
                }
                let stride = stride as usize;
                let mut table = vec![0; n * stride];
                for i in 0..n {
                    for c in instance.tasks().length(i) as usize..stride {
                        table[i * stride + c] = due_date_cost(instance, objective, i, c as u64);
                    }
                }
                StepCost::Table {
                    stride,
                    table,
                    lengths: instance.tasks().lengths(),
                }
            }
        }
    }

    fn cost(&self, placed: usize, elapsed: u64, task: usize) -> u64 {
        match self {
            StepCost::Table {
                stride,
                table,
                lengths,
            } => table[task * stride + (elapsed + lengths[task]) as usize],
            StepCost::Direct(inst, obj) => {
                due_date_cost(inst, *obj, task, elapsed + inst.tasks().length(task))
            }
            StepCost::Kendall {
                lengths,
                colsum,
                instance,
            } => {
                let counts = instance.pairwise();
                let mut ahead = 0;
                let mut rest = placed;
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    ahead += counts.get(j, task);
                    rest &= rest - 1;
                }
                lengths[task] * (colsum[task] - ahead)
            }
        }
    }
}

fn due_date_cost(instance: &Instance, objective: Objective, task: usize, completion: u64) -> u64 {
    let groups = instance.profile().groups();
    let due = instance.due_dates();
    groups
        .iter()
        .zip(due)
        .map(|(g, d)| {
            let d = d[task];
            let dev = match objective {
                Objective::SumTardiness => completion.saturating_sub(d),
                _ => completion.abs_diff(d),
            };
            g.multiplicity * dev
        })
        .sum()
}

/// The solved subset table.
struct Table {
    n: usize,
    cost_to_go: Vec<u64>,
    choices: Vec<u32>,
    transitions: u64,
}

impl Table {
    fn build(instance: &Instance, objective: Objective) -> Self {
        let n = instance.n();
        let lengths = instance.tasks().lengths();
        let states = 1usize << n;
        let full = states - 1;
        let step = StepCost::new(instance, objective);

        let mut elapsed = vec![0u64; states];
        for set in 1..states {
            let low = set.trailing_zeros() as usize;
            elapsed[set] = elapsed[set & (set - 1)] + lengths[low];
        }

        let mut cost_to_go = vec![0u64; states];
        let mut choices = vec![0u32; states];
        let mut transitions = 0u64;
        for set in (0..full).rev() {
            let mut best = u64::MAX;
            let mut moves = 0u32;
            let mut free = full & !set;
            while free != 0 {
                let i = free.trailing_zeros() as usize;
                free &= free - 1;
                let c = step.cost(set, elapsed[set], i) + cost_to_go[set | 1 << i];
                transitions += 1;
                if c < best {
                    best = c;
                    moves = 1 << i;
                } else if c == best {
                    moves |= 1 << i;
                }
            }
            cost_to_go[set] = best;
            choices[set] = moves;
        }
        Self {
            n,
            cost_to_go,
            choices,
            transitions,
        }
    }

    fn optimum(&self) -> u64 {
        self.cost_to_go[0]
    }

    fn representative(&self) -> Schedule {
        let mut set = 0usize;
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let i = self.choices[set].trailing_zeros() as usize;
            order.push(i);
            set |= 1 << i;
        }
        Schedule::new(order).expect("DP path is a permutation")
    }

    fn count(&self) -> OptimumCount {
        let full = (1usize << self.n) - 1;
        let mut count = vec![0u64; full + 1];
        count[full] = 1;
        let mut saturated = false;
        for set in (0..full).rev() {
            let mut total = 0u64;
            let mut moves = self.choices[set];
            while moves != 0 {
                let i = moves.trailing_zeros() as usize;
                moves &= moves - 1;
                total = match total.checked_add(count[set | 1 << i]) {
                    Some(t) => t,
                    None => {
                        saturated = true;
                        u64::MAX
                    }
                };
            }
            count[set] = total;
        }
        if saturated && count[0] == u64::MAX {
            OptimumCount::AtLeast(u64::MAX)
        } else {
            OptimumCount::Exact(count[0])
        }
    }

    fn enumerate(&self, cap: usize) -> Enumeration {
        let mut optima = Vec::new();
        let mut prefix = Vec::with_capacity(self.n);
        let complete = self.walk(0, &mut prefix, &mut optima, cap);
        Enumeration { optima, complete }
    }

    /// Depth-first over optimal moves in increasing task order. Returns
    /// false once the cap is hit with optima left unvisited.
    fn walk(&self, set: usize, prefix: &mut Vec<usize>, out: &mut Vec<Schedule>, cap: usize) -> bool {
        if prefix.len() == self.n {
            if out.len() == cap {
                return false;
            }
            out.push(Schedule::new(prefix.clone()).expect("DP path is a permutation"));
            return true;
        }
        let mut moves = self.choices[set];
        while moves != 0 {
            let i = moves.trailing_zeros() as usize;
            moves &= moves - 1;
            prefix.push(i);
            let more = self.walk(set | 1 << i, prefix, out, cap);
            prefix.pop();
            if !more {
                return false;
            }
        }
        true
    }
}

fn check_size(n: usize, max: usize) -> Result<()> {
    // choices are u32 bitmasks
    let max = max.min(32);
    if n > max {
        return Err(Error::TooManyTasks { n, max });
    }
    Ok(())
}

pub fn solve_exact(
    instance: &Instance,
    objective: Objective,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_size(instance.n(), opts.max_tasks)?;
    if opts.optimum_cap == 0 {
        return Err(Error::InvalidSpec("optimum_cap must be at least 1".into()));
    }
    let start = Instant::now();
    let table = Table::build(instance, objective);
    let schedule = match opts.tie_break {
        TieBreak::Lexicographic => table.representative(),
    };
    let optimum_count = table.count();
    let (optima, optima_complete) = if opts.enumerate_all {
        let e = table.enumerate(opts.optimum_cap);
        (Some(e.optima), e.complete)
    } else {
        (None, false)
    };
    Ok(SolveReport {
        objective,
        optimal_score: table.optimum(),
        schedule,
        optimum_count,
        optima,
        optima_complete,
        states_explored: table.transitions,
        wall_time: start.elapsed(),
    })
}

/// All optimal schedules in lexicographic order, up to `cap` of them.
pub fn enumerate_optima(instance: &Instance, objective: Objective, cap: usize) -> Result<Enumeration> {
    check_size(instance.n(), DEFAULT_MAX_TASKS)?;
    Ok(Table::build(instance, objective).enumerate(cap))
}

/// Scores every permutation. Independent of the subset table; used to check it.
pub fn brute_force_oracle(instance: &Instance, objective: Objective) -> Result<SolveReport> {
    let n = instance.n();
    if n > ORACLE_MAX_TASKS {
        return Err(Error::TooManyTasks {
            n,
            max: ORACLE_MAX_TASKS,
        });
    }
    let start = Instant::now();
    let mut best = u64::MAX;
    let mut optima = Vec::new();
    let mut explored = 0u64;
    // itertools yields permutations of 0..n in lexicographic order
    for order in (0..n).permutations(n) {
        let s = Schedule::new(order)?;
        let score = metrics::score(objective, instance, &s)?;
        explored += 1;
        if score < best {
            best = score;
            optima.clear();
        }
        if score == best {
            optima.push(s);
        }
    }
    Ok(SolveReport {
        objective,
        optimal_score: best,
        schedule: optima[0].clone(),
        optimum_count: OptimumCount::Exact(optima.len() as u64),
        optima: Some(optima),
        optima_complete: true,
        states_explored: explored,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generators::{derive_seed, generate, GenSpec, Model};
    use crate::model::{PreferenceProfile, TaskSet};

    fn ids(inst: &Instance, s: &Schedule) -> String {
        s.ids(inst.tasks()).concat()
    }

    fn all(inst: &Instance, o: Objective) -> SolveReport {
        solve_exact(inst, o, &SolveOptions::enumerating(10_000)).unwrap()
    }

    // Optima of the three-task example, from an independent enumeration.
    #[test]
    fn three_task_example() {
        let inst = fixtures::three_task_example();
        let d = all(&inst, Objective::SumDeviation);
        assert_eq!((d.optimal_score, ids(&inst, &d.schedule)), (20, "213".into()));
        assert!(d.optimum_count.is_unique());
        let t = all(&inst, Objective::SumTardiness);
        assert_eq!((t.optimal_score, ids(&inst, &t.schedule)), (11, "123".into()));
        let k = all(&inst, Objective::PtaKendallTau);
        assert_eq!(k.optimal_score, 12);
        assert_eq!(k.optimum_count, OptimumCount::Exact(2));
        let names: Vec<_> = k.optima.unwrap().iter().map(|s| ids(&inst, s)).collect();
        assert_eq!(names, ["123", "132"]);
    }

    #[test]
    fn counterexample_fixtures() {
        let inst = fixtures::deviation_unanimity_counterexample();
        let d = all(&inst, Objective::SumDeviation);
        assert_eq!((d.optimal_score, ids(&inst, &d.schedule)), (3096, "dceab".into()));
        assert!(d.optimum_count.is_unique());
        for o in [Objective::SumTardiness, Objective::PtaKendallTau] {
            let r = all(&inst, o);
            assert_eq!((r.optimal_score, ids(&inst, &r.schedule)), (1278, "decab".into()));
        }

        let inst = fixtures::kemeny_unanimity_counterexample();
        let k = all(&inst, Objective::PtaKendallTau);
        assert_eq!((k.optimal_score, ids(&inst, &k.schedule)), (850, "acdefgb".into()));
        assert!(k.optimum_count.is_unique());
    }

    #[test]
    fn single_voter_is_its_own_optimum() {
        let tasks = TaskSet::numbered(&[5, 2, 9, 1, 3]).unwrap();
        let s = Schedule::new(vec![3, 0, 4, 2, 1]).unwrap();
        let inst = Instance::new(tasks, PreferenceProfile::unanimous(s.clone(), 3).unwrap()).unwrap();
        for o in Objective::ALL {
            let r = all(&inst, o);
            assert_eq!(r.optimal_score, 0);
            assert_eq!(r.schedule, s);
            // ties at zero tardiness are possible, but not for deviation or Kendall tau
            if o != Objective::SumTardiness {
                assert!(r.optimum_count.is_unique());
            }
        }
    }

    #[test]
    fn one_task() {
        let tasks = TaskSet::numbered(&[4]).unwrap();
        let inst = Instance::new(tasks, PreferenceProfile::unanimous(Schedule::identity(1), 2).unwrap())
            .unwrap();
        for o in Objective::ALL {
            let r = all(&inst, o);
            assert_eq!(r.optimal_score, 0);
            assert_eq!(r.optimum_count, OptimumCount::Exact(1));
        }
    }

    #[test]
    fn balanced_two_tasks_tie() {
        let inst = fixtures::two_task_split(1, 1, 1).unwrap();
        for o in Objective::ALL {
            let r = all(&inst, o);
            assert_eq!(r.optimum_count, OptimumCount::Exact(2));
            assert_eq!(r.schedule, Schedule::identity(2));
            assert_eq!(r.optima.unwrap().len(), 2);
        }
    }

    #[test]
    fn short_task_first_for_tardiness() {
        // a (length 1) is preferred first by 2 of 5 voters, b (length 6) by 3
        let inst = fixtures::two_task_split(6, 2, 3).unwrap();
        let t = all(&inst, Objective::SumTardiness);
        assert_eq!(t.schedule, Schedule::identity(2));
        let d = all(&inst, Objective::SumDeviation);
        assert_eq!(d.schedule, inst.schedule(&["b", "a"]).unwrap());
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut cases = 0;
        for i in 0..60u64 {
            let n = 2 + (i % 5) as usize;
            let v = [1, 3, 20][(i % 3) as usize];
            let model = if i % 2 == 0 { Model::Uniform } else { Model::PlackettLuce };
            let spec = GenSpec::new(n, v, model, derive_seed(1234, i)).with_lengths(1, 4);
            let (tasks, profile) = generate(&spec).unwrap();
            let inst = Instance::new(tasks, profile).unwrap();
            for o in Objective::ALL {
                let dp = all(&inst, o);
                let bf = brute_force_oracle(&inst, o).unwrap();
                assert_eq!(dp.optimal_score, bf.optimal_score);
                assert_eq!(dp.optima, bf.optima);
                assert_eq!(dp.optimum_count, bf.optimum_count);
                assert_eq!(dp.schedule, bf.schedule);
                cases += 1;
            }
        }
        assert_eq!(cases, 180);
    }

    #[test]
    fn direct_costs_match_tables() {
        // total load too large for the precomputed tables
        let tasks = TaskSet::numbered(&[3_000_000, 1, 2_500_000, 7, 4_000_000]).unwrap();
        let (_, profile) = generate(&GenSpec::new(5, 9, Model::Uniform, 5)).unwrap();
        let inst = Instance::new(tasks, profile).unwrap();
        for o in [Objective::SumDeviation, Objective::SumTardiness] {
            assert!(matches!(StepCost::new(&inst, o), StepCost::Direct(..)));
            let dp = all(&inst, o);
            let bf = brute_force_oracle(&inst, o).unwrap();
            assert_eq!(dp.optima, bf.optima);
        }
    }

    #[test]
    fn enumeration_cap() {
        let tasks = TaskSet::unit(5).unwrap();
        let p = PreferenceProfile::from_ids(
            &tasks,
            &[
                (&["t1", "t2", "t3", "t4", "t5"][..], 1),
                (&["t5", "t4", "t3", "t2", "t1"][..], 1),
            ],
        )
        .unwrap();
        let inst = Instance::new(tasks, p).unwrap();
        let full = enumerate_optima(&inst, Objective::PtaKendallTau, 1000).unwrap();
        assert!(full.complete);
        // every order is optimal against two reversed voters
        assert_eq!(full.optima.len(), 120);
        let cut = enumerate_optima(&inst, Objective::PtaKendallTau, 7).unwrap();
        assert!(!cut.complete);
        assert_eq!(cut.optima[..], full.optima[..7]);
        let exact = enumerate_optima(&inst, Objective::PtaKendallTau, 120).unwrap();
        assert!(exact.complete);
        assert!(solve_exact(&inst, Objective::PtaKendallTau, &SolveOptions::enumerating(0)).is_err());
    }

    #[test]
    fn size_caps() {
        let tasks = TaskSet::unit(21).unwrap();
        let inst = Instance::new(
            tasks,
            PreferenceProfile::unanimous(Schedule::identity(21), 1).unwrap(),
        )
        .unwrap();
        assert_eq!(
            solve_exact(&inst, Objective::SumDeviation, &SolveOptions::default()).err(),
            Some(Error::TooManyTasks { n: 21, max: 20 })
        );
        assert!(matches!(
            brute_force_oracle(&inst, Objective::SumDeviation),
            Err(Error::TooManyTasks { max: 9, .. })
        ));
    }
}

//! Lowest-median-time ordering and adjacent-swap local search.

use serde::Serialize;

use crate::error::Result;
use crate::metrics;
use crate::model::{Instance, Objective, Schedule};

/// Lower median (the `ceil(v/2)`-th smallest value) of every task's
/// completion time across voters, indexed by task.
pub fn median_completion_times(instance: &Instance) -> Vec<u64> {
    let groups = instance.profile().groups();
    let rank = instance.voters().div_ceil(2);
    (0..instance.n())
        .map(|task| {
            let mut times: Vec<(u64, u64)> = groups
                .iter()
                .zip(instance.due_dates())
                .map(|(g, due)| (due[task], g.multiplicity))
                .collect();
            times.sort_unstable();
            let mut seen = 0;
            for (t, m) in times {
                seen += m;
                if seen >= rank {
                    return t;
                }
            }
            unreachable!("rank never exceeds the voter count")
        })
        .collect()
}

/// Tasks by nondecreasing median completion time; ties go to the shorter
/// task, then to the earlier declared task.
pub fn lmt(instance: &Instance) -> Schedule {
    let medians = median_completion_times(instance);
    let lengths = instance.tasks().lengths();
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_by_key(|&t| (medians[t], lengths[t], t));
    Schedule::new(order).expect("sorted indices form a permutation")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwapStep {
    /// The tasks at `position` and `position + 1` were exchanged.
    pub position: usize,
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    LocalOptimum,
    StepCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalSearchTrace {
    pub steps: Vec<SwapStep>,
    pub terminated_by: Termination,
}

impl LocalSearchTrace {
    pub fn final_score(&self) -> Option<u64> {
        self.steps.last().map(|s| s.after)
    }
}

/// Default step budget: twice the number of tasks.
pub fn default_step_cap(instance: &Instance) -> usize {
    2 * instance.n()
}

/// Best-improvement descent over adjacent swaps. The leftmost of equally
/// good improving swaps is taken. Pass `usize::MAX` to run to a local optimum.
pub fn local_search(
    instance: &Instance,
    start: &Schedule,
    objective: Objective,
    max_steps: usize,
) -> Result<(Schedule, LocalSearchTrace)> {
    let mut current = start.clone();
    let mut score = metrics::score(objective, instance, &current)?;
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(usize, u64, Schedule)> = None;
        for k in 0..current.len().saturating_sub(1) {
            let neighbour = current.with_adjacent_swap(k);
            let s = metrics::score(objective, instance, &neighbour)?;
            if s < best.as_ref().map_or(score, |b| b.1) {
                best = Some((k, s, neighbour));
            }
        }
        let Some((position, after, next)) = best else {
            return Ok((
                current,
                LocalSearchTrace {
                    steps,
                    terminated_by: Termination::LocalOptimum,
                },
            ));
        };
        if steps.len() == max_steps {
            return Ok((
                current,
                LocalSearchTrace {
                    steps,
                    terminated_by: Termination::StepCap,
                },
            ));
        }
        steps.push(SwapStep {
            position,
            before: score,
            after,
        });
        current = next;
        score = after;
    }
}

/// LMT followed by deviation local search with the default step cap.
pub fn lmt_with_local_search(instance: &Instance) -> Result<(Schedule, LocalSearchTrace)> {
    let start = lmt(instance);
    local_search(instance, &start, Objective::SumDeviation, default_step_cap(instance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{solve_exact, SolveOptions};
    use crate::fixtures;
    use crate::generators::{generate, GenSpec, Model};
    use crate::model::{PreferenceProfile, TaskSet};

    #[test]
    fn single_voter_medians_are_its_completion_times() {
        let tasks = TaskSet::new([("a", 3), ("b", 1), ("c", 2)]).unwrap();
        let s = Schedule::from_ids(&tasks, &["b", "c", "a"]).unwrap();
        let inst = Instance::new(tasks, PreferenceProfile::unanimous(s.clone(), 1).unwrap()).unwrap();
        assert_eq!(median_completion_times(&inst), vec![6, 1, 3]);
        assert_eq!(lmt(&inst), s);
    }

    #[test]
    fn lower_median_on_even_split() {
        let tasks = TaskSet::new([("a", 1), ("b", 8)]).unwrap();
        let p = PreferenceProfile::from_ids(&tasks, &[(&["a", "b"][..], 2), (&["b", "a"][..], 2)])
            .unwrap();
        let inst = Instance::new(tasks, p).unwrap();
        // task a completes at {1, 1, 9, 9}
        assert_eq!(median_completion_times(&inst)[0], 1);
    }

    #[test]
    fn worst_case_medians_and_order() {
        let (p, n, v) = (4, 6, 10);
        let inst = fixtures::lmt_worst_case(p, n, v).unwrap();
        let m = median_completion_times(&inst);
        assert_eq!(&m[..3], &[p, p, 2 * p]);
        assert_eq!(&m[3..], &[2 * p + 1, 2 * p + 2, 2 * p + 3]);
        let s = lmt(&inst);
        assert_eq!(s.order(), &[0, 1, 2, 3, 4, 5]);
        let (p, n, v) = (p, n as u64, v);
        assert_eq!(
            metrics::deviation(&inst, &s).unwrap(),
            v * p * n + v * n - 3 * v - 4 * p
        );
        let alt = inst.schedule(&["t1", "t3", "t4", "t5", "t6", "t2"]).unwrap();
        assert_eq!(
            metrics::deviation(&inst, &alt).unwrap(),
            2 * p * v + v * n - 3 * v + 2 * p + 2 * n - 6
        );
    }

    #[test]
    fn local_search_from_optimum_takes_no_step() {
        let inst = fixtures::three_task_example();
        for o in Objective::ALL {
            let best = solve_exact(&inst, o, &SolveOptions::default()).unwrap();
            let (s, trace) = local_search(&inst, &best.schedule, o, 100).unwrap();
            assert_eq!(s, best.schedule);
            assert!(trace.steps.is_empty());
            assert_eq!(trace.terminated_by, Termination::LocalOptimum);
        }
    }

    #[test]
    fn local_search_improves_worst_case_start() {
        let inst = fixtures::lmt_worst_case(4, 6, 10).unwrap();
        let start = lmt(&inst);
        let before = metrics::deviation(&inst, &start).unwrap();
        let (s, trace) = lmt_with_local_search(&inst).unwrap();
        let after = metrics::deviation(&inst, &s).unwrap();
        assert!(after <= before);
        for w in trace.steps.windows(2) {
            assert_eq!(w[0].after, w[1].before);
        }
        assert!(trace.steps.iter().all(|st| st.after < st.before));
    }

    #[test]
    fn step_cap_is_honoured() {
        let inst = fixtures::lmt_worst_case(16, 12, 40).unwrap();
        let (_, trace) = local_search(&inst, &lmt(&inst), Objective::SumDeviation, 0).unwrap();
        assert_eq!(trace.terminated_by, Termination::StepCap);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn seeded_uniform_instance_close_to_optimum() {
        let (tasks, profile) = generate(&GenSpec::new(8, 50, Model::Uniform, 11)).unwrap();
        let inst = Instance::new(tasks, profile).unwrap();
        let opt = solve_exact(&inst, Objective::SumDeviation, &SolveOptions::default())
            .unwrap()
            .optimal_score;
        let (s, _) = lmt_with_local_search(&inst).unwrap();
        let got = metrics::deviation(&inst, &s).unwrap();
        assert!(got >= opt);
        assert!((got as f64) <= 1.1 * opt as f64, "{got} vs optimum {opt}");
    }
}

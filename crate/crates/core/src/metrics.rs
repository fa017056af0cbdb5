//! Exact integer scoring of a schedule against a profile.
//!
//! All three objectives are sums over voters, weighted by group
//! multiplicity. [`Instance`] guarantees that no score can overflow `u64`.

use crate::error::{Error, Result};
use crate::model::{completion_times, Instance, Objective, PreferenceProfile, Schedule};

/// `get(j, i)` is the number of voters (with multiplicity) who schedule `j` before `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseCountMatrix {
    n: usize,
    voters: u64,
    counts: Vec<u64>,
}

impl PairwiseCountMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn voters(&self) -> u64 {
        self.voters
    }

    pub fn get(&self, before: usize, after: usize) -> u64 {
        self.counts[before * self.n + after]
    }

    /// Number of voters placing some other task before `task`, summed over tasks.
    pub fn column_sum(&self, task: usize) -> u64 {
        (0..self.n).map(|j| self.get(j, task)).sum()
    }
}

pub fn pairwise_counts(profile: &PreferenceProfile) -> PairwiseCountMatrix {
    let n = profile.task_count();
    let mut counts = vec![0u64; n * n];
    for g in profile.groups() {
        let order = g.schedule.order();
        for (k, &j) in order.iter().enumerate() {
            for &i in &order[k + 1..] {
                counts[j * n + i] += g.multiplicity;
            }
        }
    }
    PairwiseCountMatrix {
        n,
        voters: profile.voter_count(),
        counts,
    }
}

fn check(instance: &Instance, schedule: &Schedule) -> Result<()> {
    if schedule.len() != instance.n() {
        return Err(Error::MismatchedTaskSet {
            expected: instance.n(),
            found: schedule.len(),
        });
    }
    Ok(())
}

/// Sum over voters and tasks of `|C_i(S) - d_ik|`.
pub fn deviation(instance: &Instance, schedule: &Schedule) -> Result<u64> {
    let c = completion_times(schedule, instance.tasks())?;
    Ok(instance
        .profile()
        .groups()
        .iter()
        .zip(instance.due_dates())
        .map(|(g, due)| g.multiplicity * c.iter().zip(due).map(|(&c, &d)| c.abs_diff(d)).sum::<u64>())
        .sum())
}

/// Sum over voters and tasks of `max(0, C_i(S) - d_ik)`.
pub fn tardiness(instance: &Instance, schedule: &Schedule) -> Result<u64> {
    let c = completion_times(schedule, instance.tasks())?;
    Ok(instance
        .profile()
        .groups()
        .iter()
        .zip(instance.due_dates())
        .map(|(g, due)| {
            g.multiplicity * c.iter().zip(due).map(|(&c, &d)| c.saturating_sub(d)).sum::<u64>()
        })
        .sum())
}

/// Weighted Kendall tau: every voter who puts `b` before `a` while `S` puts
/// `a` before `b` costs `p_a`.
pub fn pta_kendall_tau(instance: &Instance, schedule: &Schedule) -> Result<u64> {
    check(instance, schedule)?;
    let counts = instance.pairwise();
    let tasks = instance.tasks();
    let order = schedule.order();
    let mut score = 0;
    for (k, &a) in order.iter().enumerate() {
        let against: u64 = order[k + 1..].iter().map(|&b| counts.get(b, a)).sum();
        score += tasks.length(a) * against;
    }
    Ok(score)
}

pub fn score(objective: Objective, instance: &Instance, schedule: &Schedule) -> Result<u64> {
    match objective {
        Objective::SumDeviation => deviation(instance, schedule),
        Objective::SumTardiness => tardiness(instance, schedule),
        Objective::PtaKendallTau => pta_kendall_tau(instance, schedule),
    }
}

fn check_pair(a: &Schedule, b: &Schedule) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::MismatchedTaskSet {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Number of discordant pairs between two orders.
pub fn kendall_tau(a: &Schedule, b: &Schedule) -> Result<u64> {
    check_pair(a, b)?;
    let pos = b.positions();
    let order = a.order();
    let mut d = 0;
    for (k, &x) in order.iter().enumerate() {
        d += order[k + 1..].iter().filter(|&&y| pos[y] < pos[x]).count() as u64;
    }
    Ok(d)
}

/// Sum of absolute position differences.
pub fn spearman_footrule(a: &Schedule, b: &Schedule) -> Result<u64> {
    check_pair(a, b)?;
    Ok(a.positions()
        .iter()
        .zip(b.positions())
        .map(|(&x, y)| x.abs_diff(y) as u64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::TaskSet;

    #[test]
    fn example_kendall_score() {
        let inst = fixtures::three_task_example();
        let s = inst.schedule(&["2", "1", "3"]).unwrap();
        assert_eq!(pta_kendall_tau(&inst, &s).unwrap(), 14);
    }

    // Frozen from a direct evaluation of the definitions over all 3! orders.
    #[test]
    fn example_scores_for_every_order() {
        let inst = fixtures::three_task_example();
        let expected = [
            (["1", "2", "3"], 24, 11, 12),
            (["1", "3", "2"], 41, 12, 12),
            (["2", "1", "3"], 20, 14, 14),
            (["2", "3", "1"], 29, 16, 16),
            (["3", "1", "2"], 46, 12, 14),
            (["3", "2", "1"], 40, 14, 16),
        ];
        for (ids, d, t, k) in expected {
            let s = inst.schedule(&ids).unwrap();
            assert_eq!(deviation(&inst, &s).unwrap(), d, "{ids:?}");
            assert_eq!(tardiness(&inst, &s).unwrap(), t, "{ids:?}");
            assert_eq!(pta_kendall_tau(&inst, &s).unwrap(), k, "{ids:?}");
        }
    }

    #[test]
    fn deviation_against_single_voter() {
        let tasks = TaskSet::new([("1", 2), ("2", 4), ("3", 1)]).unwrap();
        let p = PreferenceProfile::from_ids(&tasks, &[(&["1", "2", "3"][..], 1)]).unwrap();
        let inst = Instance::new(tasks, p).unwrap();
        let s = inst.schedule(&["2", "1", "3"]).unwrap();
        assert_eq!(deviation(&inst, &s).unwrap(), 6);
    }

    #[test]
    fn tardiness_two_task_delays() {
        let k = 7;
        let tasks = TaskSet::new([("a", 1), ("b", k)]).unwrap();
        let ab = PreferenceProfile::from_ids(&tasks, &[(&["a", "b"][..], 1)]).unwrap();
        let inst = Instance::new(tasks.clone(), ab).unwrap();
        assert_eq!(tardiness(&inst, &inst.schedule(&["b", "a"]).unwrap()).unwrap(), k);

        let ba = PreferenceProfile::from_ids(&tasks, &[(&["b", "a"][..], 1)]).unwrap();
        let inst = Instance::new(tasks, ba).unwrap();
        assert_eq!(tardiness(&inst, &inst.schedule(&["a", "b"]).unwrap()).unwrap(), 1);
    }

    #[test]
    fn example_pairwise_counts() {
        let inst = fixtures::three_task_example();
        let m = inst.pairwise();
        let t = |id| inst.tasks().index_of(id).unwrap();
        assert_eq!(m.get(t("1"), t("2")), 2);
        assert_eq!(m.get(t("2"), t("1")), 3);
        assert_eq!(m.get(t("1"), t("3")), 4);
        assert_eq!(m.get(t("3"), t("1")), 1);
        assert_eq!(m.get(t("2"), t("3")), 4);
        assert_eq!(m.get(t("3"), t("2")), 1);
        for i in 0..3 {
            assert_eq!(m.get(i, i), 0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(m.get(i, j) + m.get(j, i), 5);
                }
            }
        }
    }

    #[test]
    fn single_voter_counts_follow_the_order() {
        let s = Schedule::new(vec![2, 0, 3, 1]).unwrap();
        let m = pairwise_counts(&PreferenceProfile::unanimous(s.clone(), 1).unwrap());
        let pos = s.positions();
        for i in 0..4 {
            for j in 0..4 {
                let want = u64::from(i != j && pos[i] < pos[j]);
                assert_eq!(m.get(i, j), want);
            }
        }
    }

    #[test]
    fn classical_distances() {
        let a = Schedule::identity(5);
        let rev = Schedule::new(vec![4, 3, 2, 1, 0]).unwrap();
        assert_eq!(kendall_tau(&a, &a).unwrap(), 0);
        assert_eq!(spearman_footrule(&a, &a).unwrap(), 0);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), 10);
        assert_eq!(spearman_footrule(&a, &rev).unwrap(), 12);
        assert!(kendall_tau(&a, &Schedule::identity(4)).is_err());
    }

    #[test]
    fn mismatched_schedule_is_an_error() {
        let inst = fixtures::three_task_example();
        for o in Objective::ALL {
            assert!(matches!(
                score(o, &inst, &Schedule::identity(4)),
                Err(Error::MismatchedTaskSet { .. })
            ));
        }
    }
}

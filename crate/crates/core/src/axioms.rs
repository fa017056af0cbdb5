//! Executable checks for the axioms of collective scheduling rules.
//!
//! All threshold decisions use exact integer cross-multiplication.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{enumerate_optima, solve_exact, SolveOptions};
use crate::metrics;
use crate::model::{Instance, Objective, PreferenceProfile, Schedule, TaskSet};
use crate::rules::Rule;

/// `before` must precede `after`: at least `p_before / (p_before + p_after) * v`
/// voters (here `supporters`) put `before` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CondorcetConstraint {
    pub before: usize,
    pub after: usize,
    pub supporters: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    PtaCondorcet,
    Unanimity,
    LengthReductionMonotonicity,
    Neutrality,
    PtaNeutrality,
    Reinforcement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The schedule puts `after` before `before` against a required precedence.
    Pair { before: usize, after: usize },
    /// The shortened task starts later after the reduction.
    LaterStart {
        task: usize,
        original_start: u64,
        reduced_start: u64,
        original: Schedule,
        reduced: Schedule,
    },
    /// `schedule` is optimal for one profile but its swap image is not
    /// optimal for the other.
    UnmatchedOptimum {
        schedule: Schedule,
        from_swapped_profile: bool,
    },
    ScoreNotAdditive {
        schedule: Schedule,
        union: u64,
        first: u64,
        second: u64,
    },
    /// Optimal for both electorates but not for their union.
    CommonOptimumNotOptimal { schedule: Schedule, union_score: u64, union_optimum: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Violated(Witness),
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub outcome: Outcome,
}

impl AxiomVerdict {
    fn holds(axiom: Axiom) -> Self {
        Self {
            axiom,
            outcome: Outcome::Holds,
        }
    }

    fn violated(axiom: Axiom, witness: Witness) -> Self {
        Self {
            axiom,
            outcome: Outcome::Violated(witness),
        }
    }

    pub fn is_holding(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_violated(&self) -> bool {
        matches!(self.outcome, Outcome::Violated(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Violated(w) => Some(w),
            _ => None,
        }
    }
}

/// All required precedences, ordered by `(before, after)`.
pub fn pta_condorcet_constraints(instance: &Instance) -> Vec<CondorcetConstraint> {
    let n = instance.n();
    let v = instance.voters() as u128;
    let counts = instance.pairwise();
    let p = instance.tasks().lengths();
    let mut out = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            let support = counts.get(a, b);
            if support as u128 * (p[a] as u128 + p[b] as u128) >= p[a] as u128 * v {
                out.push(CondorcetConstraint {
                    before: a,
                    after: b,
                    supporters: support,
                });
            }
        }
    }
    out
}

pub fn is_pta_condorcet_consistent(instance: &Instance, schedule: &Schedule) -> Result<AxiomVerdict> {
    check_len(instance, schedule)?;
    let pos = schedule.positions();
    Ok(pta_condorcet_constraints(instance)
        .into_iter()
        .find(|c| pos[c.before] > pos[c.after])
        .map_or(AxiomVerdict::holds(Axiom::PtaCondorcet), |c| {
            AxiomVerdict::violated(
                Axiom::PtaCondorcet,
                Witness::Pair {
                    before: c.before,
                    after: c.after,
                },
            )
        }))
}

/// Lexicographically least order respecting every constraint, or `None`
/// when the constraints are cyclic.
pub fn find_pta_condorcet_schedule(instance: &Instance) -> Option<Schedule> {
    let constraints = pta_condorcet_constraints(instance);
    topological_min(instance.n(), constraints.iter().map(|c| (c.before, c.after)))
}

fn topological_min(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Option<Schedule> {
    let mut succ = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (a, b) in edges {
        succ[a].push(b);
        indegree[b] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&t| indegree[t] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(t)) = ready.pop() {
        order.push(t);
        for &s in &succ[t] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    (order.len() == n).then(|| Schedule::new(order).expect("topological order is a permutation"))
}

/// Pairs `(a, b)` such that every voter schedules `a` before `b`.
pub fn unanimous_pairs(instance: &Instance) -> Vec<(usize, usize)> {
    let n = instance.n();
    let v = instance.voters();
    let counts = instance.pairwise();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && counts.get(a, b) == v)
        .collect()
}

pub fn check_unanimity(instance: &Instance, schedule: &Schedule) -> Result<AxiomVerdict> {
    check_len(instance, schedule)?;
    let pos = schedule.positions();
    Ok(unanimous_pairs(instance)
        .into_iter()
        .find(|&(a, b)| pos[a] > pos[b])
        .map_or(AxiomVerdict::holds(Axiom::Unanimity), |(a, b)| {
            AxiomVerdict::violated(Axiom::Unanimity, Witness::Pair { before: a, after: b })
        }))
}

/// Shortens `target` to `reduced_length` and checks that `rule` does not
/// start it later than before.
pub fn lrm_probe(
    instance: &Instance,
    rule: Rule,
    target: usize,
    reduced_length: u64,
) -> Result<AxiomVerdict> {
    if target >= instance.n() {
        return Err(Error::InvalidReduction(format!("no task #{target}")));
    }
    let current = instance.tasks().length(target);
    if reduced_length == 0 || reduced_length >= current {
        return Err(Error::InvalidReduction(format!(
            "new length {reduced_length} for task `{}` must be in [1, {current})",
            instance.tasks().id(target)
        )));
    }
    let reduced = instance.with_length(target, reduced_length)?;
    let original_schedule = rule.apply(instance)?;
    let reduced_schedule = rule.apply(&reduced)?;
    let original_start = original_schedule.start_time(target, instance.tasks())?;
    let reduced_start = reduced_schedule.start_time(target, reduced.tasks())?;
    Ok(if reduced_start <= original_start {
        AxiomVerdict::holds(Axiom::LengthReductionMonotonicity)
    } else {
        AxiomVerdict::violated(
            Axiom::LengthReductionMonotonicity,
            Witness::LaterStart {
                task: target,
                original_start,
                reduced_start,
                original: original_schedule,
                reduced: reduced_schedule,
            },
        )
    })
}

/// Compares the optimum set of `P` with that of `P(a <-> b)` under the swap.
/// With equal lengths this tests PTA neutrality, otherwise plain neutrality.
pub fn neutrality_probe(
    instance: &Instance,
    a: usize,
    b: usize,
    objective: Objective,
    cap: usize,
) -> Result<AxiomVerdict> {
    let tasks = instance.tasks();
    for t in [a, b] {
        if t >= instance.n() {
            return Err(Error::IndexOutOfRange {
                index: t,
                n: instance.n(),
            });
        }
    }
    let axiom = if tasks.length(a) == tasks.length(b) {
        Axiom::PtaNeutrality
    } else {
        Axiom::Neutrality
    };
    let swapped = instance.with_profile(instance.profile().swap_tasks(a, b)?)?;
    let original = enumerate_optima(instance, objective, cap)?;
    let mirrored = enumerate_optima(&swapped, objective, cap)?;
    if !(original.complete && mirrored.complete) {
        return Ok(AxiomVerdict {
            axiom,
            outcome: Outcome::Inconclusive(format!("more than {cap} optima")),
        });
    }
    let mirrored_set: BTreeSet<&Schedule> = mirrored.optima.iter().collect();
    let original_set: BTreeSet<&Schedule> = original.optima.iter().collect();
    let unmatched = original
        .optima
        .iter()
        .find(|s| !mirrored_set.contains(&s.swapped(a, b)))
        .map(|s| (s, false))
        .or_else(|| {
            mirrored
                .optima
                .iter()
                .find(|s| !original_set.contains(&s.swapped(a, b)))
                .map(|s| (s, true))
        });
    Ok(match unmatched {
        None => AxiomVerdict::holds(axiom),
        Some((s, from_swapped_profile)) => AxiomVerdict::violated(
            axiom,
            Witness::UnmatchedOptimum {
                schedule: s.clone(),
                from_swapped_profile,
            },
        ),
    })
}

/// Score additivity over the split on `samples`, and optimality for the
/// union of every schedule optimal for both parts.
pub fn reinforcement_check(
    tasks: &TaskSet,
    split: (&PreferenceProfile, &PreferenceProfile),
    objective: Objective,
    samples: &[Schedule],
    cap: usize,
) -> Result<AxiomVerdict> {
    let first = Instance::new(tasks.clone(), split.0.clone())?;
    let second = Instance::new(tasks.clone(), split.1.clone())?;
    let union = Instance::new(tasks.clone(), split.0.union(split.1)?)?;
    for s in samples {
        let (x, y, z) = (
            metrics::score(objective, &first, s)?,
            metrics::score(objective, &second, s)?,
            metrics::score(objective, &union, s)?,
        );
        if x + y != z {
            return Ok(AxiomVerdict::violated(
                Axiom::Reinforcement,
                Witness::ScoreNotAdditive {
                    schedule: s.clone(),
                    union: z,
                    first: x,
                    second: y,
                },
            ));
        }
    }
    let a = enumerate_optima(&first, objective, cap)?;
    let b = enumerate_optima(&second, objective, cap)?;
    let union_optimum = solve_exact(&union, objective, &SolveOptions::default())?.optimal_score;
    let in_b: BTreeSet<&Schedule> = b.optima.iter().collect();
    for s in a.optima.iter().filter(|s| in_b.contains(s)) {
        let union_score = metrics::score(objective, &union, s)?;
        if union_score != union_optimum {
            return Ok(AxiomVerdict::violated(
                Axiom::Reinforcement,
                Witness::CommonOptimumNotOptimal {
                    schedule: s.clone(),
                    union_score,
                    union_optimum,
                },
            ));
        }
    }
    if !(a.complete && b.complete) {
        return Ok(AxiomVerdict {
            axiom: Axiom::Reinforcement,
            outcome: Outcome::Inconclusive(format!("more than {cap} optima")),
        });
    }
    Ok(AxiomVerdict::holds(Axiom::Reinforcement))
}

fn check_len(instance: &Instance, schedule: &Schedule) -> Result<()> {
    if schedule.len() != instance.n() {
        return Err(Error::MismatchedTaskSet {
            expected: instance.n(),
            found: schedule.len(),
        });
    }
    Ok(())
}

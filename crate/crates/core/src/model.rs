//! Tasks, schedules and preference profiles.
//!
//! Tasks are addressed by their index in the [`TaskSet`]'s declared order.
//! A [`Schedule`] is a permutation of those indices and a
//! [`PreferenceProfile`] is a list of voter schedules with multiplicities.
//! Lengths are kept out of the profile so that the same ballots can be
//! re-evaluated against modified lengths (see [`Instance::with_length`]).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::VoterEntry;
use crate::metrics::{self, PairwiseCountMatrix};

/// The tasks to schedule, in declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSet {
    ids: Vec<String>,
    lengths: Vec<u64>,
    total_load: u64,
    index: HashMap<String, usize>,
}

impl TaskSet {
    pub fn new<I, S>(tasks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut ids = Vec::new();
        let mut lengths = Vec::new();
        let mut index = HashMap::new();
        let mut total_load: u64 = 0;
        for (id, length) in tasks {
            let id = id.into();
            if length == 0 {
                return Err(Error::ZeroLength(id));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateTask(id));
            }
            total_load = total_load.checked_add(length).ok_or(Error::Overflow)?;
            ids.push(id);
            lengths.push(length);
        }
        if ids.is_empty() {
            return Err(Error::EmptyTaskSet);
        }
        Ok(Self {
            ids,
            lengths,
            total_load,
            index,
        })
    }

    /// `n` tasks named `t1..tn` with the given lengths.
    pub fn numbered(lengths: &[u64]) -> Result<Self> {
        Self::new(
            lengths
                .iter()
                .enumerate()
                .map(|(i, &p)| (format!("t{}", i + 1), p)),
        )
    }

    /// `n` unit-length tasks named `t1..tn`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::numbered(&vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, task: usize) -> &str {
        &self.ids[task]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn length(&self, task: usize) -> u64 {
        self.lengths[task]
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn total_load(&self) -> u64 {
        self.total_load
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownTask(id.to_string()))
    }

    /// Copy of this task set where `task` has length `length`.
    pub fn with_length(&self, task: usize, length: u64) -> Result<Self> {
        if task >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: task,
                n: self.len(),
            });
        }
        let mut lengths = self.lengths.clone();
        lengths[task] = length;
        Self::new(self.ids.iter().cloned().zip(lengths))
    }
}

/// A permutation of task indices; position 0 runs first.
///
/// Ordering is lexicographic on the index sequence, which is the
/// tie-breaking order used by the solvers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Schedule {
    order: Vec<usize>,
}

impl Schedule {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::EmptyTaskSet);
        }
        let mut seen = vec![false; n];
        for &t in &order {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::DuplicateTask(format!("#{t}")));
            }
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Builds a schedule from task ids, checking that it is a permutation of `tasks`.
    pub fn from_ids<S: AsRef<str>>(tasks: &TaskSet, ids: &[S]) -> Result<Self> {
        let mut seen = vec![false; tasks.len()];
        let mut order = Vec::with_capacity(ids.len());
        for id in ids {
            let t = tasks.index_of(id.as_ref())?;
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::DuplicateTask(id.as_ref().to_string()));
            }
            order.push(t);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MissingTask(tasks.id(missing).to_string()));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `positions()[task]` is the 0-based position of `task`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &t) in self.order.iter().enumerate() {
            pos[t] = k;
        }
        pos
    }

    pub fn position_of(&self, task: usize) -> Option<usize> {
        self.order.iter().position(|&t| t == task)
    }

    pub fn ids<'a>(&self, tasks: &'a TaskSet) -> Vec<&'a str> {
        self.order.iter().map(|&t| tasks.id(t)).collect()
    }

    /// The schedule with tasks `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let order = self
            .order
            .iter()
            .map(|&t| match t {
                t if t == a => b,
                t if t == b => a,
                t => t,
            })
            .collect();
        Self { order }
    }

    /// The schedule with the tasks at positions `k` and `k + 1` exchanged.
    pub fn with_adjacent_swap(&self, k: usize) -> Self {
        let mut order = self.order.clone();
        order.swap(k, k + 1);
        Self { order }
    }

    fn check_len(&self, tasks: &TaskSet) -> Result<()> {
        if self.len() != tasks.len() {
            return Err(Error::MismatchedTaskSet {
                expected: tasks.len(),
                found: self.len(),
            });
        }
        Ok(())
    }

    /// Start time of `task` (completion time minus its length).
    pub fn start_time(&self, task: usize, tasks: &TaskSet) -> Result<u64> {
        let c = completion_times(self, tasks)?;
        Ok(c[task] - tasks.length(task))
    }
}

/// Completion time of every task, indexed by task.
pub fn completion_times(schedule: &Schedule, tasks: &TaskSet) -> Result<Vec<u64>> {
    schedule.check_len(tasks)?;
    let mut c = vec![0; tasks.len()];
    let mut t = 0;
    for &task in schedule.order() {
        t += tasks.length(task);
        c[task] = t;
    }
    Ok(c)
}

/// Voters sharing one preferred schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterGroup {
    pub schedule: Schedule,
    pub multiplicity: u64,
}

/// The voters' preferred schedules, grouped with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    groups: Vec<VoterGroup>,
    voters: u64,
}

impl PreferenceProfile {
    pub fn new(groups: Vec<VoterGroup>) -> Result<Self> {
        let n = match groups.first() {
            Some(g) => g.schedule.len(),
            None => return Err(Error::NoVoters),
        };
        let mut voters: u64 = 0;
        for (k, g) in groups.iter().enumerate() {
            if g.schedule.len() != n {
                return Err(Error::MismatchedTaskSet {
                    expected: n,
                    found: g.schedule.len(),
                });
            }
            if g.multiplicity == 0 {
                return Err(Error::InvalidProfile(format!("group {k} has multiplicity 0")));
            }
            voters = voters.checked_add(g.multiplicity).ok_or(Error::Overflow)?;
        }
        Ok(Self { n, groups, voters })
    }

    /// Convenience constructor from `(order of task ids, count)` pairs.
    pub fn from_ids<S: AsRef<str>>(tasks: &TaskSet, groups: &[(&[S], u64)]) -> Result<Self> {
        let groups = groups
            .iter()
            .map(|(order, m)| {
                Ok(VoterGroup {
                    schedule: Schedule::from_ids(tasks, order)?,
                    multiplicity: *m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups)
    }

    /// Builds a profile from file entries; fails on the first defect found.
    pub fn from_entries(tasks: &TaskSet, entries: &[VoterEntry]) -> Result<Self> {
        let report = validate_profile(tasks, entries);
        if let Some(d) = report.defects.into_iter().next() {
            return Err(d.into_error());
        }
        let groups = entries
            .iter()
            .map(|e| {
                Ok(VoterGroup {
                    schedule: Schedule::from_ids(tasks, &e.order)?,
                    multiplicity: e.count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups)
    }

    /// A profile where every voter has the same schedule.
    pub fn unanimous(schedule: Schedule, voters: u64) -> Result<Self> {
        Self::new(vec![VoterGroup {
            schedule,
            multiplicity: voters,
        }])
    }

    pub fn task_count(&self) -> usize {
        self.n
    }

    pub fn voter_count(&self) -> u64 {
        self.voters
    }

    pub fn groups(&self) -> &[VoterGroup] {
        &self.groups
    }

    /// Disjoint union of two electorates.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut groups = self.groups.clone();
        groups.extend(other.groups.iter().cloned());
        Self::new(groups)
    }

    /// Every multiplicity multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let groups = self
            .groups
            .iter()
            .map(|g| {
                Ok(VoterGroup {
                    schedule: g.schedule.clone(),
                    multiplicity: g.multiplicity.checked_mul(factor).ok_or(Error::Overflow)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups)
    }

    /// Exchanges the positions of tasks `a` and `b` in every voter schedule.
    pub fn swap_tasks(&self, a: usize, b: usize) -> Result<Self> {
        for t in [a, b] {
            if t >= self.n {
                return Err(Error::IndexOutOfRange { index: t, n: self.n });
            }
        }
        Ok(Self {
            n: self.n,
            groups: self
                .groups
                .iter()
                .map(|g| VoterGroup {
                    schedule: g.schedule.swapped(a, b),
                    multiplicity: g.multiplicity,
                })
                .collect(),
            voters: self.voters,
        })
    }
}

/// `P(a <-> b)` addressed by task id.
pub fn swap_tasks_in_profile(
    profile: &PreferenceProfile,
    tasks: &TaskSet,
    a: &str,
    b: &str,
) -> Result<PreferenceProfile> {
    profile.swap_tasks(tasks.index_of(a)?, tasks.index_of(b)?)
}

/// What is wrong with one voter group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "task")]
pub enum Defect {
    NoVoters,
    ZeroCount,
    UnknownTask(String),
    DuplicateTask(String),
    MissingTask(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDefect {
    /// Index of the offending group, `None` for profile-level defects.
    pub group: Option<usize>,
    pub defect: Defect,
}

impl GroupDefect {
    fn into_error(self) -> Error {
        match self.defect {
            Defect::NoVoters => Error::NoVoters,
            Defect::ZeroCount => Error::InvalidProfile(format!(
                "group {} has count 0",
                self.group.unwrap_or_default()
            )),
            Defect::UnknownTask(t) => Error::UnknownTask(t),
            Defect::DuplicateTask(t) => Error::DuplicateTask(t),
            Defect::MissingTask(t) => Error::MissingTask(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub voters: u64,
    pub tasks: usize,
    pub defects: Vec<GroupDefect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks every group against `tasks` and reports all defects found.
pub fn validate_profile(tasks: &TaskSet, entries: &[VoterEntry]) -> ValidationReport {
    let mut defects = Vec::new();
    let mut voters: u64 = 0;
    for (k, e) in entries.iter().enumerate() {
        let mut push = |defect| {
            defects.push(GroupDefect {
                group: Some(k),
                defect,
            })
        };
        if e.count == 0 {
            push(Defect::ZeroCount);
        }
        voters = voters.saturating_add(e.count);
        let mut seen = vec![false; tasks.len()];
        for id in &e.order {
            match tasks.index_of(id) {
                Ok(t) if seen[t] => push(Defect::DuplicateTask(id.clone())),
                Ok(t) => seen[t] = true,
                Err(_) => push(Defect::UnknownTask(id.clone())),
            }
        }
        for (t, _) in seen.iter().enumerate().filter(|(_, s)| !**s) {
            push(Defect::MissingTask(tasks.id(t).to_string()));
        }
    }
    if voters == 0 {
        defects.push(GroupDefect {
            group: None,
            defect: Defect::NoVoters,
        });
    }
    ValidationReport {
        voters,
        tasks: tasks.len(),
        defects,
    }
}

/// The three scoring rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Objective {
    /// Total absolute deviation of completion times from the voters' ones.
    #[serde(rename = "sum-dev")]
    SumDeviation,
    /// Total tardiness against the voters' completion times.
    #[serde(rename = "sum-tard")]
    SumTardiness,
    /// Pairwise disagreements weighted by the length of the task placed first.
    #[serde(rename = "pta-kemeny")]
    PtaKendallTau,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::SumDeviation,
        Objective::SumTardiness,
        Objective::PtaKendallTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::SumDeviation => "sum-dev",
            Objective::SumTardiness => "sum-tard",
            Objective::PtaKendallTau => "pta-kemeny",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown objective `{s}`")))
    }
}

/// A task set paired with a profile over it.
///
/// Construction validates the pairing, precomputes every voter's due dates
/// and the pairwise count matrix, and checks that no score of the instance
/// can exceed `u64::MAX`, so scoring never needs overflow checks.
#[derive(Debug, Clone)]
pub struct Instance {
    tasks: TaskSet,
    profile: PreferenceProfile,
    due_dates: Vec<Vec<u64>>,
    pairwise: PairwiseCountMatrix,
}

impl Instance {
    pub fn new(tasks: TaskSet, profile: PreferenceProfile) -> Result<Self> {
        if profile.task_count() != tasks.len() {
            return Err(Error::MismatchedTaskSet {
                expected: tasks.len(),
                found: profile.task_count(),
            });
        }
        // Per voter, each of D, T and the weighted Kendall tau is bounded by n * total_load.
        let bound = (profile.voter_count() as u128)
            * (tasks.len() as u128)
            * (tasks.total_load() as u128);
        if bound > u64::MAX as u128 {
            return Err(Error::Overflow);
        }
        let due_dates = profile
            .groups()
            .iter()
            .map(|g| completion_times(&g.schedule, &tasks))
            .collect::<Result<Vec<_>>>()?;
        let pairwise = metrics::pairwise_counts(&profile);
        Ok(Self {
            tasks,
            profile,
            due_dates,
            pairwise,
        })
    }

    pub fn tasks(&self) -> &TaskSet {
        &self.tasks
    }

    pub fn profile(&self) -> &PreferenceProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.tasks.len()
    }

    pub fn voters(&self) -> u64 {
        self.profile.voter_count()
    }

    /// `due_dates()[g][task]`: completion time of `task` in group `g`'s schedule.
    pub fn due_dates(&self) -> &[Vec<u64>] {
        &self.due_dates
    }

    pub fn pairwise(&self) -> &PairwiseCountMatrix {
        &self.pairwise
    }

    /// Same ballots, with `task` shortened or lengthened to `length`.
    pub fn with_length(&self, task: usize, length: u64) -> Result<Self> {
        Self::new(self.tasks.with_length(task, length)?, self.profile.clone())
    }

    /// Same tasks, different electorate.
    pub fn with_profile(&self, profile: PreferenceProfile) -> Result<Self> {
        Self::new(self.tasks.clone(), profile)
    }

    pub fn schedule(&self, ids: &[&str]) -> Result<Schedule> {
        Schedule::from_ids(&self.tasks, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_tasks() -> TaskSet {
        TaskSet::new([("1", 2), ("2", 4), ("3", 1)]).unwrap()
    }

    fn entry(order: &[&str], count: u64) -> VoterEntry {
        VoterEntry {
            count,
            order: order.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn completion_times_are_prefix_sums() {
        let tasks = example_tasks();
        let c = completion_times(&Schedule::from_ids(&tasks, &["2", "1", "3"]).unwrap(), &tasks)
            .unwrap();
        assert_eq!(c, vec![6, 4, 7]);
        let c = completion_times(&Schedule::from_ids(&tasks, &["3", "2", "1"]).unwrap(), &tasks)
            .unwrap();
        assert_eq!(c, vec![7, 5, 1]);

        let single = TaskSet::new([("a", 5)]).unwrap();
        assert_eq!(completion_times(&Schedule::identity(1), &single).unwrap(), vec![5]);
    }

    #[test]
    fn bad_permutations_are_rejected() {
        let tasks = example_tasks();
        assert_eq!(
            Schedule::from_ids(&tasks, &["1", "1", "3"]),
            Err(Error::DuplicateTask("1".into()))
        );
        assert_eq!(
            Schedule::from_ids(&tasks, &["1", "4", "3"]),
            Err(Error::UnknownTask("4".into()))
        );
        assert_eq!(
            Schedule::from_ids(&tasks, &["1", "2"]),
            Err(Error::MissingTask("3".into()))
        );
        assert!(Schedule::new(vec![0, 2]).is_err());
        assert!(matches!(
            completion_times(&Schedule::identity(2), &tasks),
            Err(Error::MismatchedTaskSet { .. })
        ));
    }

    #[test]
    fn task_set_invariants() {
        assert_eq!(TaskSet::new(Vec::<(String, u64)>::new()), Err(Error::EmptyTaskSet));
        assert_eq!(TaskSet::new([("a", 0)]), Err(Error::ZeroLength("a".into())));
        assert_eq!(
            TaskSet::new([("a", 1), ("a", 2)]),
            Err(Error::DuplicateTask("a".into()))
        );
        assert_eq!(example_tasks().total_load(), 7);
    }

    #[test]
    fn validate_example_profile() {
        let tasks = example_tasks();
        let entries = [
            entry(&["2", "1", "3"], 2),
            entry(&["1", "2", "3"], 2),
            entry(&["3", "2", "1"], 1),
        ];
        let report = validate_profile(&tasks, &entries);
        assert!(report.is_valid());
        assert_eq!((report.voters, report.tasks), (5, 3));
    }

    #[test]
    fn validate_reports_every_defect() {
        let tasks = example_tasks();
        let report = validate_profile(&tasks, &[entry(&["1", "2"], 1), entry(&["1", "1", "3"], 0)]);
        assert_eq!(
            report.defects,
            vec![
                GroupDefect {
                    group: Some(0),
                    defect: Defect::MissingTask("3".into())
                },
                GroupDefect {
                    group: Some(1),
                    defect: Defect::ZeroCount
                },
                GroupDefect {
                    group: Some(1),
                    defect: Defect::DuplicateTask("1".into())
                },
                GroupDefect {
                    group: Some(1),
                    defect: Defect::MissingTask("2".into())
                },
            ]
        );
        let empty = validate_profile(&tasks, &[]);
        assert_eq!(empty.defects[0].defect, Defect::NoVoters);
        assert_eq!(PreferenceProfile::from_entries(&tasks, &[]), Err(Error::NoVoters));
    }

    #[test]
    fn swap_is_an_involution() {
        let tasks = example_tasks();
        let p = PreferenceProfile::from_ids(
            &tasks,
            &[(&["2", "1", "3"][..], 2), (&["1", "2", "3"][..], 2), (&["3", "2", "1"][..], 1)],
        )
        .unwrap();
        assert_eq!(swap_tasks_in_profile(&p, &tasks, "1", "1").unwrap(), p);
        let once = swap_tasks_in_profile(&p, &tasks, "1", "3").unwrap();
        assert_ne!(once, p);
        assert_eq!(swap_tasks_in_profile(&once, &tasks, "1", "3").unwrap(), p);
        assert_eq!(once.voter_count(), 5);
        assert_eq!(
            swap_tasks_in_profile(&p, &tasks, "1", "z"),
            Err(Error::UnknownTask("z".into()))
        );
    }

    #[test]
    fn instance_rejects_overflowing_scores() {
        let tasks = TaskSet::new([("a", u64::MAX / 2), ("b", 1)]).unwrap();
        let p = PreferenceProfile::unanimous(Schedule::identity(2), 10).unwrap();
        assert_eq!(Instance::new(tasks, p).err(), Some(Error::Overflow));
    }

    #[test]
    fn objective_names_round_trip() {
        for o in Objective::ALL {
            assert_eq!(o.name().parse::<Objective>().unwrap(), o);
        }
        assert!("kemeny".parse::<Objective>().is_err());
    }
}

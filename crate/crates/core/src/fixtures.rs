//! Hand-built instances with known behaviour, used as regression fixtures.

use crate::error::Result;
use crate::model::{Instance, PreferenceProfile, TaskSet};

fn build(tasks: &[(&str, u64)], groups: &[(&str, u64)]) -> Result<Instance> {
    let tasks = TaskSet::new(tasks.iter().map(|&(id, p)| (id, p)))?;
    let orders: Vec<Vec<String>> = groups
        .iter()
        .map(|(o, _)| o.chars().map(String::from).collect())
        .collect();
    let groups: Vec<(&[String], u64)> = orders
        .iter()
        .zip(groups)
        .map(|(o, &(_, m))| (o.as_slice(), m))
        .collect();
    let profile = PreferenceProfile::from_ids(&tasks, &groups)?;
    Instance::new(tasks, profile)
}

/// Three tasks `1,2,3` of lengths 2, 4, 1 and five voters:
/// two prefer `2,1,3`, two prefer `1,2,3`, one prefers `3,2,1`.
pub fn three_task_example() -> Instance {
    build(
        &[("1", 2), ("2", 4), ("3", 1)],
        &[("213", 2), ("123", 2), ("321", 1)],
    )
    .expect("valid fixture")
}

/// Five tasks where every voter puts short `e` before long `c`, yet the
/// unique deviation optimum is `d,c,e,a,b`.
pub fn deviation_unanimity_counterexample() -> Instance {
    build(
        &[("a", 10), ("b", 10), ("c", 10), ("d", 1), ("e", 1)],
        &[("daebc", 29), ("ecdab", 30), ("dbeca", 29)],
    )
    .expect("valid fixture")
}

/// Seven tasks where every voter puts `b` before `a`, yet the weighted
/// Kemeny optimum is `a,c,d,e,f,g,b`.
pub fn kemeny_unanimity_counterexample() -> Instance {
    build(
        &[
            ("a", 1),
            ("b", 10),
            ("c", 2),
            ("d", 2),
            ("e", 2),
            ("f", 2),
            ("g", 2),
        ],
        &[("cdefgba", 50), ("bacdefg", 50)],
    )
    .expect("valid fixture")
}

/// Six tasks `a..f` with `p_e = k`, `p_f = k - 2` on which the deviation
/// rule is not neutral under the `b <-> e` swap. `voters` must be even and
/// at least 4, `k` at least 3.
pub fn deviation_neutrality_counterexample(k: u64, voters: u64) -> Result<Instance> {
    let half = voters / 2 - 1;
    build(
        &[
            ("a", 1),
            ("b", 1),
            ("c", 1),
            ("d", 2),
            ("e", k),
            ("f", k - 2),
        ],
        &[
            ("bafedc", half),
            ("beafdc", 1),
            ("bfceda", 1),
            ("fcdabe", half),
        ],
    )
}

/// Five tasks where shortening `p` from 10 to 1 makes it start later under
/// the deviation rule. Returns the instance, the task index and the reduced length.
pub fn deviation_lrm_counterexample() -> (Instance, usize, u64) {
    let inst = build(
        &[("1", 1), ("2", 1), ("3", 1), ("x", 1), ("p", 10)],
        &[("x21p3", 101), ("321px", 101), ("3px12", 99), ("3px21", 99)],
    )
    .expect("valid fixture");
    let p = inst.tasks().index_of("p").expect("task p");
    (inst, p, 1)
}

/// Two tasks `a` (length 1) and `b` (length `p_b`); `for_a` voters prefer
/// `a,b` and `for_b` voters prefer `b,a`.
pub fn two_task_split(p_b: u64, for_a: u64, for_b: u64) -> Result<Instance> {
    let tasks = TaskSet::new([("a", 1), ("b", p_b)])?;
    let mut groups: Vec<(&[&str], u64)> = Vec::new();
    if for_a > 0 {
        groups.push((&["a", "b"], for_a));
    }
    if for_b > 0 {
        groups.push((&["b", "a"], for_b));
    }
    let profile = PreferenceProfile::from_ids(&tasks, &groups)?;
    Instance::new(tasks, profile)
}

/// Worst case for the median heuristic: three tasks of length `p` and
/// `n - 3` unit tasks, `voters` even and at least 4, `n` at least 4.
pub fn lmt_worst_case(p: u64, n: usize, voters: u64) -> Result<Instance> {
    let mut lengths = vec![p; 3];
    lengths.extend(std::iter::repeat(1).take(n - 3));
    let tasks = TaskSet::numbered(&lengths)?;
    let id = |i: usize| format!("t{i}");
    let middle: Vec<String> = (4..=n).map(id).collect();
    let order = |first: usize, second: usize, last: usize| -> Vec<String> {
        let mut o = vec![id(first), id(second)];
        o.extend(middle.iter().cloned());
        o.push(id(last));
        o
    };
    let half = voters / 2 - 1;
    let orders = [
        (order(1, 3, 2), half),
        (order(1, 2, 3), 1),
        (order(2, 1, 3), 1),
        (order(2, 3, 1), half),
    ];
    let groups: Vec<(&[String], u64)> = orders.iter().map(|(o, m)| (o.as_slice(), *m)).collect();
    let profile = PreferenceProfile::from_ids(&tasks, &groups)?;
    Instance::new(tasks, profile)
}

//! Batch experiments over seeded random corpora.
//!
//! Every pipeline draws instance `i` of grid cell `c` from
//! `derive_seed(derive_seed(seed, c), i)`, solves instances in parallel and
//! keeps results in instance order, so reports depend only on the
//! configuration. Timing columns are the exception.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::axioms;
use crate::error::{Error, Result};
use crate::exact::{solve_exact, SolveOptions};
use crate::generators::{derive_seed, generate, GenSpec, Model};
use crate::heuristics;
use crate::metrics;
use crate::model::{Instance, Objective, PreferenceProfile};
use crate::rules::Rule;

/// One CSV line. Columns that do not apply to an experiment stay empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: String,
    pub n: usize,
    pub v: u64,
    pub rule: String,
    pub metric: String,
    pub instances: usize,
    pub mean_ratio: Option<f64>,
    pub violation_rate: Option<f64>,
    pub unique_fraction: Option<f64>,
    pub mean_time_ms: Option<f64>,
}

impl ReportRow {
    fn new(model: &str, n: usize, v: u64, rule: &str, metric: &str, instances: usize) -> Self {
        Self {
            model: model.into(),
            n,
            v,
            rule: rule.into(),
            metric: metric.into(),
            instances,
            mean_ratio: None,
            violation_rate: None,
            unique_fraction: None,
            mean_time_ms: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
    /// Per-instance records.
    pub detail: Vec<serde_json::Value>,
}

impl ExperimentReport {
    fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            seed,
            rows: Vec::new(),
            detail: Vec::new(),
        }
    }

    /// First row matching the given key; `None` fields match anything.
    pub fn find(&self, model: Option<&str>, n: Option<usize>, rule: &str, metric: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.rule == rule
                && r.metric == metric
                && model.is_none_or(|m| r.model == m)
                && n.is_none_or(|n| r.n == n)
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::InvalidSpec(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidSpec(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    fn push_detail<T: Serialize>(&mut self, records: &[T]) {
        self.detail
            .extend(records.iter().map(|r| serde_json::to_value(r).expect("records serialize")));
    }
}

fn instance_at(model: Model, n: usize, v: u64, lengths: (u64, u64), seed: u64, cell: u64, i: usize) -> Result<Instance> {
    let spec = GenSpec::new(n, v, model, derive_seed(derive_seed(seed, cell), i as u64))
        .with_lengths(lengths.0, lengths.1);
    let (tasks, profile) = generate(&spec)?;
    Instance::new(tasks, profile)
}

fn ratio(score: u64, optimum: u64) -> Option<f64> {
    match (score, optimum) {
        (0, 0) => Some(1.0),
        (_, 0) => None,
        _ => Some(score as f64 / optimum as f64),
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub models: Vec<Model>,
    pub task_counts: Vec<usize>,
    pub voters: u64,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            models: vec![Model::Uniform, Model::PlackettLuce],
            task_counts: vec![5, 10],
            voters: 100,
            instances: 300,
            seed: 0,
            length_range: (1, 10),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRecord {
    pub model: Model,
    pub n: usize,
    pub index: usize,
    /// Optimal score of each objective.
    pub optimum: [u64; 3],
    /// `scores[r][m]`: schedule of rule `r` evaluated under metric `m`.
    pub scores: [[u64; 3]; 3],
}

/// Solves every instance under the three exact rules and scores each
/// returned schedule under every objective. Row `(rule, metric)` holds the
/// mean of `metric(rule's schedule) / metric optimum`.
pub fn compare(cfg: &CompareConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("compare", cfg.seed);
    let mut cell = 0u64;
    for &model in &cfg.models {
        for &n in &cfg.task_counts {
            let records: Vec<CompareRecord> = (0..cfg.instances)
                .into_par_iter()
                .map(|i| {
                    let inst = instance_at(model, n, cfg.voters, cfg.length_range, cfg.seed, cell, i)?;
                    let mut optimum = [0; 3];
                    let mut scores = [[0; 3]; 3];
                    for (r, rule) in Objective::ALL.into_iter().enumerate() {
                        let best = solve_exact(&inst, rule, &SolveOptions::default())?;
                        optimum[r] = best.optimal_score;
                        for (m, metric) in Objective::ALL.into_iter().enumerate() {
                            scores[r][m] = metrics::score(metric, &inst, &best.schedule)?;
                        }
                    }
                    Ok(CompareRecord { model, n, index: i, optimum, scores })
                })
                .collect::<Result<_>>()?;
            for (r, rule) in Objective::ALL.into_iter().enumerate() {
                for (m, metric) in Objective::ALL.into_iter().enumerate() {
                    let ratios: Vec<f64> =
                        records.iter().filter_map(|x| ratio(x.scores[r][m], x.optimum[m])).collect();
                    let mut row = ReportRow::new(model.tag(), n, cfg.voters, rule.name(), metric.name(), ratios.len());
                    row.mean_ratio = mean(ratios);
                    report.rows.push(row);
                }
            }
            report.push_detail(&records);
            cell += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct LmtEvalConfig {
    pub model: Model,
    pub n: usize,
    pub voters: u64,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
}

impl Default for LmtEvalConfig {
    fn default() -> Self {
        Self {
            model: Model::Uniform,
            n: 10,
            voters: 100,
            instances: 100,
            seed: 0,
            length_range: (1, 10),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LmtRecord {
    pub index: usize,
    pub optimum: u64,
    pub lmt: u64,
    pub lmt_ls: u64,
    pub ls_steps: usize,
    pub exact_ms: f64,
    pub lmt_ms: f64,
    pub lmt_ls_ms: f64,
}

/// Deviation of LMT and LMT plus local search relative to the optimum.
pub fn lmt_eval(cfg: &LmtEvalConfig) -> Result<ExperimentReport> {
    let records: Vec<LmtRecord> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| {
            let inst = instance_at(cfg.model, cfg.n, cfg.voters, cfg.length_range, cfg.seed, 0, i)?;
            let t = Instant::now();
            let optimum = solve_exact(&inst, Objective::SumDeviation, &SolveOptions::default())?.optimal_score;
            let exact_ms = ms(t.elapsed());
            let t = Instant::now();
            let start = heuristics::lmt(&inst);
            let lmt_ms = ms(t.elapsed());
            let lmt = metrics::deviation(&inst, &start)?;
            let t = Instant::now();
            let (s, trace) = heuristics::local_search(
                &inst,
                &start,
                Objective::SumDeviation,
                heuristics::default_step_cap(&inst),
            )?;
            let lmt_ls_ms = lmt_ms + ms(t.elapsed());
            Ok(LmtRecord {
                index: i,
                optimum,
                lmt,
                lmt_ls: metrics::deviation(&inst, &s)?,
                ls_steps: trace.steps.len(),
                exact_ms,
                lmt_ms,
                lmt_ls_ms,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new("lmt-eval", cfg.seed);
    let metric = Objective::SumDeviation.name();
    let cols: [(&str, fn(&LmtRecord) -> u64, fn(&LmtRecord) -> f64); 3] = [
        (metric, |r| r.optimum, |r| r.exact_ms),
        ("lmt", |r| r.lmt, |r| r.lmt_ms),
        ("lmt-ls", |r| r.lmt_ls, |r| r.lmt_ls_ms),
    ];
    for (rule, score, time) in cols {
        let ratios: Vec<f64> = records.iter().filter_map(|r| ratio(score(r), r.optimum)).collect();
        let mut row = ReportRow::new(cfg.model.tag(), cfg.n, cfg.voters, rule, metric, ratios.len());
        row.mean_ratio = mean(ratios);
        row.mean_time_ms = mean(records.iter().map(time));
        report.rows.push(row);
    }
    report.push_detail(&records);
    Ok(report)
}

/// How the audited task is shortened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// To a length drawn uniformly from `1..p`.
    #[default]
    UniformSmaller,
    /// To `p - 1`.
    ByOne,
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-smaller" => Ok(Reduction::UniformSmaller),
            "by-one" => Ok(Reduction::ByOne),
            _ => Err(Error::InvalidSpec(format!("unknown reduction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LrmAuditConfig {
    /// Instance `i` uses `models[i % models.len()]`.
    pub models: Vec<Model>,
    pub n: usize,
    pub voters: u64,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
    pub rules: Vec<Rule>,
    pub reduction: Reduction,
}

impl Default for LrmAuditConfig {
    fn default() -> Self {
        Self {
            models: vec![Model::Uniform, Model::PlackettLuce],
            n: 8,
            voters: 50,
            instances: 1200,
            seed: 0,
            length_range: (1, 10),
            rules: Rule::EXACT.to_vec(),
            reduction: Reduction::UniformSmaller,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LrmRecord {
    pub index: usize,
    pub model: String,
    pub target: Option<usize>,
    pub from: u64,
    pub to: u64,
    /// Rule names whose reduced-instance schedule starts the target later.
    pub violated: Vec<String>,
}

/// One random length reduction per instance, probed under every rule.
pub fn lrm_audit(cfg: &LrmAuditConfig) -> Result<ExperimentReport> {
    if cfg.models.is_empty() {
        return Err(Error::InvalidSpec("at least one model is required".into()));
    }
    let corpus: Vec<(String, Instance)> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| {
            let model = cfg.models[i % cfg.models.len()];
            let inst = instance_at(model, cfg.n, cfg.voters, cfg.length_range, cfg.seed, 0, i)?;
            Ok((model.tag().to_string(), inst))
        })
        .collect::<Result<_>>()?;
    let mut report = audit_lrm_corpus(&corpus, &cfg.rules, cfg.reduction, cfg.seed)?;
    for row in &mut report.rows {
        row.v = cfg.voters;
    }
    Ok(report)
}

/// LRM audit over a given corpus of `(label, instance)` pairs. Instances
/// whose tasks all have length 1 admit no reduction and are skipped.
pub fn audit_lrm_corpus(
    corpus: &[(String, Instance)],
    rules: &[Rule],
    reduction: Reduction,
    seed: u64,
) -> Result<ExperimentReport> {
    let records: Vec<LrmRecord> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, (label, inst))| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed ^ 0x4C52_4D00, i as u64));
            let lengths = inst.tasks().lengths();
            let reducible: Vec<usize> = (0..inst.n()).filter(|&t| lengths[t] >= 2).collect();
            let Some(&target) = reducible.choose(&mut rng) else {
                return Ok(LrmRecord {
                    index: i,
                    model: label.clone(),
                    target: None,
                    from: 0,
                    to: 0,
                    violated: Vec::new(),
                });
            };
            let to = match reduction {
                Reduction::UniformSmaller => rng.gen_range(1..lengths[target]),
                Reduction::ByOne => lengths[target] - 1,
            };
            let mut violated = Vec::new();
            for &rule in rules {
                if axioms::lrm_probe(inst, rule, target, to)?.is_violated() {
                    violated.push(rule.name().to_string());
                }
            }
            Ok(LrmRecord {
                index: i,
                model: label.clone(),
                target: Some(target),
                from: lengths[target],
                to,
                violated,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new("lrm-audit", seed);
    let mut labels: Vec<&str> = Vec::new();
    for r in &records {
        if !labels.contains(&r.model.as_str()) {
            labels.push(&r.model);
        }
    }
    let n = corpus.first().map_or(0, |(_, inst)| inst.n());
    let v = corpus.first().map_or(0, |(_, inst)| inst.voters());
    let groups = labels.iter().map(|&l| Some(l)).chain(std::iter::once(None));
    for label in groups {
        let probed: Vec<&LrmRecord> = records
            .iter()
            .filter(|r| r.target.is_some() && label.is_none_or(|l| r.model == l))
            .collect();
        for &rule in rules {
            let hits = probed.iter().filter(|r| r.violated.iter().any(|x| x == rule.name())).count();
            let mut row = ReportRow::new(label.unwrap_or("all"), n, v, rule.name(), "lrm", probed.len());
            row.violation_rate = (!probed.is_empty()).then(|| hits as f64 / probed.len() as f64);
            report.rows.push(row);
        }
    }
    report.push_detail(&records);
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct UniquenessConfig {
    pub models: Vec<Model>,
    pub n: usize,
    pub voter_counts: Vec<u64>,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
}

impl Default for UniquenessConfig {
    fn default() -> Self {
        Self {
            models: vec![Model::Uniform],
            n: 8,
            voter_counts: vec![100, 250],
            instances: 200,
            seed: 0,
            length_range: (1, 10),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessRecord {
    pub model: Model,
    pub v: u64,
    pub index: usize,
    pub unique: [bool; 3],
}

/// Fraction of instances whose optimum is unique, per objective.
pub fn uniqueness_audit(cfg: &UniquenessConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("uniqueness-audit", cfg.seed);
    let mut cell = 0u64;
    for &model in &cfg.models {
        for &v in &cfg.voter_counts {
            let records: Vec<UniquenessRecord> = (0..cfg.instances)
                .into_par_iter()
                .map(|i| {
                    let inst = instance_at(model, cfg.n, v, cfg.length_range, cfg.seed, cell, i)?;
                    let mut unique = [false; 3];
                    for (k, o) in Objective::ALL.into_iter().enumerate() {
                        unique[k] = solve_exact(&inst, o, &SolveOptions::default())?
                            .optimum_count
                            .is_unique();
                    }
                    Ok(UniquenessRecord { model, v, index: i, unique })
                })
                .collect::<Result<_>>()?;
            for (k, o) in Objective::ALL.into_iter().enumerate() {
                let hits = records.iter().filter(|r| r.unique[k]).count();
                let mut row = ReportRow::new(model.tag(), cfg.n, v, o.name(), o.name(), records.len());
                row.unique_fraction = (!records.is_empty()).then(|| hits as f64 / records.len() as f64);
                report.rows.push(row);
            }
            report.push_detail(&records);
            cell += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct AxiomAuditConfig {
    pub models: Vec<Model>,
    pub n: usize,
    pub voters: u64,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
}

impl Default for AxiomAuditConfig {
    fn default() -> Self {
        Self {
            models: vec![Model::Uniform, Model::PlackettLuce],
            n: 6,
            voters: 50,
            instances: 200,
            seed: 0,
            length_range: (1, 10),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomRecord {
    pub model: Model,
    pub index: usize,
    pub condorcet_schedule_exists: bool,
    /// Rule names whose schedule breaks a required precedence.
    pub condorcet_violations: Vec<String>,
    /// Rule names whose schedule reverses a unanimous pair.
    pub unanimity_violations: Vec<String>,
}

const AUDITED_RULES: [Rule; 5] = [
    Rule::Exact(Objective::SumDeviation),
    Rule::Exact(Objective::SumTardiness),
    Rule::Exact(Objective::PtaKendallTau),
    Rule::Lmt,
    Rule::LmtLocalSearch,
];

/// PTA Condorcet consistency and unanimity verdicts for every rule. The
/// Condorcet rate only counts instances where a consistent schedule exists.
pub fn audit_axioms(cfg: &AxiomAuditConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("audit-axioms", cfg.seed);
    for (cell, &model) in cfg.models.iter().enumerate() {
        let records: Vec<AxiomRecord> = (0..cfg.instances)
            .into_par_iter()
            .map(|i| {
                let inst = instance_at(model, cfg.n, cfg.voters, cfg.length_range, cfg.seed, cell as u64, i)?;
                let exists = axioms::find_pta_condorcet_schedule(&inst).is_some();
                let mut condorcet_violations = Vec::new();
                let mut unanimity_violations = Vec::new();
                for rule in AUDITED_RULES {
                    let s = rule.apply(&inst)?;
                    if exists && axioms::is_pta_condorcet_consistent(&inst, &s)?.is_violated() {
                        condorcet_violations.push(rule.name().to_string());
                    }
                    if axioms::check_unanimity(&inst, &s)?.is_violated() {
                        unanimity_violations.push(rule.name().to_string());
                    }
                }
                Ok(AxiomRecord {
                    model,
                    index: i,
                    condorcet_schedule_exists: exists,
                    condorcet_violations,
                    unanimity_violations,
                })
            })
            .collect::<Result<_>>()?;
        let with_condorcet = records.iter().filter(|r| r.condorcet_schedule_exists).count();
        for rule in AUDITED_RULES {
            let name = rule.name().to_string();
            let c = records.iter().filter(|r| r.condorcet_violations.contains(&name)).count();
            let u = records.iter().filter(|r| r.unanimity_violations.contains(&name)).count();
            let mut row = ReportRow::new(model.tag(), cfg.n, cfg.voters, &name, "pta-condorcet", with_condorcet);
            row.violation_rate = (with_condorcet > 0).then(|| c as f64 / with_condorcet as f64);
            report.rows.push(row);
            let mut row = ReportRow::new(model.tag(), cfg.n, cfg.voters, &name, "unanimity", records.len());
            row.violation_rate = (!records.is_empty()).then(|| u as f64 / records.len() as f64);
            report.rows.push(row);
        }
        report.push_detail(&records);
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub model: Model,
    pub task_counts: Vec<usize>,
    pub voter_counts: Vec<u64>,
    pub instances: usize,
    pub seed: u64,
    pub length_range: (u64, u64),
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            model: Model::Uniform,
            task_counts: vec![8, 10, 12],
            voter_counts: vec![50],
            instances: 5,
            seed: 0,
            length_range: (1, 10),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub v: u64,
    pub index: usize,
    pub objective: Objective,
    pub millis: f64,
    pub states: u64,
}

/// Sequential wall-clock timings of the exact solver.
pub fn bench(cfg: &BenchConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("bench", cfg.seed);
    let mut cell = 0u64;
    for &n in &cfg.task_counts {
        for &v in &cfg.voter_counts {
            let mut records = Vec::new();
            for i in 0..cfg.instances {
                let inst = instance_at(cfg.model, n, v, cfg.length_range, cfg.seed, cell, i)?;
                for o in Objective::ALL {
                    let r = solve_exact(&inst, o, &SolveOptions::default())?;
                    records.push(BenchRecord {
                        n,
                        v,
                        index: i,
                        objective: o,
                        millis: ms(r.wall_time),
                        states: r.states_explored,
                    });
                }
            }
            for o in Objective::ALL {
                let mut row = ReportRow::new(cfg.model.tag(), n, v, o.name(), o.name(), cfg.instances);
                row.mean_time_ms = mean(records.iter().filter(|r| r.objective == o).map(|r| r.millis));
                report.rows.push(row);
            }
            report.push_detail(&records);
            cell += 1;
        }
    }
    Ok(report)
}

/// Splits `profile` into two non-empty parts by moving a random share of
/// every group's voters into the first part. `None` for a single voter.
pub fn random_split<R: Rng>(profile: &PreferenceProfile, rng: &mut R) -> Option<(PreferenceProfile, PreferenceProfile)> {
    if profile.voter_count() < 2 {
        return None;
    }
    loop {
        let mut first = Vec::new();
        let mut second = Vec::new();
        for g in profile.groups() {
            let k = rng.gen_range(0..=g.multiplicity);
            for (part, m) in [(&mut first, k), (&mut second, g.multiplicity - k)] {
                if m > 0 {
                    let mut g = g.clone();
                    g.multiplicity = m;
                    part.push(g);
                }
            }
        }
        if let (Ok(a), Ok(b)) = (PreferenceProfile::new(first), PreferenceProfile::new(second)) {
            return Some((a, b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_exactly_one() {
        let cfg = CompareConfig {
            task_counts: vec![4],
            instances: 20,
            voters: 15,
            ..CompareConfig::default()
        };
        let r = compare(&cfg).unwrap();
        assert_eq!(r.rows.len(), 18);
        for row in &r.rows {
            let x = row.mean_ratio.unwrap();
            assert!(x >= 1.0);
            if row.rule == row.metric {
                assert_eq!(x, 1.0);
            }
        }
        assert_eq!(r.detail.len(), 40);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = LrmAuditConfig {
            n: 5,
            voters: 9,
            instances: 30,
            seed: 3,
            ..LrmAuditConfig::default()
        };
        let a = lrm_audit(&cfg).unwrap();
        let b = lrm_audit(&cfg).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn csv_header_is_fixed() {
        let cfg = UniquenessConfig {
            n: 4,
            voter_counts: vec![7],
            instances: 5,
            ..UniquenessConfig::default()
        };
        let csv = uniqueness_audit(&cfg).unwrap().to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("model,n,v,rule,metric,instances,mean_ratio,violation_rate,unique_fraction,mean_time_ms")
        );
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn unanimous_corpus_never_violates_lrm() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let corpus: Vec<(String, Instance)> = (0..40)
            .map(|i| {
                let spec = GenSpec::new(6, 1, Model::Uniform, derive_seed(5, i));
                let (tasks, p) = generate(&spec).unwrap();
                let v = rng.gen_range(1..30);
                let p = PreferenceProfile::unanimous(p.groups()[0].schedule.clone(), v).unwrap();
                ("unanimous".to_string(), Instance::new(tasks, p).unwrap())
            })
            .collect();
        let rules = [Rule::EXACT.as_slice(), &[Rule::Lmt, Rule::LmtLocalSearch]].concat();
        for reduction in [Reduction::UniformSmaller, Reduction::ByOne] {
            let r = audit_lrm_corpus(&corpus, &rules, reduction, 1).unwrap();
            assert!(r.rows.iter().all(|row| row.violation_rate == Some(0.0)));
        }
    }

    #[test]
    fn lmt_eval_rows() {
        let cfg = LmtEvalConfig {
            n: 6,
            voters: 20,
            instances: 10,
            ..LmtEvalConfig::default()
        };
        let r = lmt_eval(&cfg).unwrap();
        let before = r.find(None, None, "lmt", "sum-dev").unwrap().mean_ratio.unwrap();
        let after = r.find(None, None, "lmt-ls", "sum-dev").unwrap().mean_ratio.unwrap();
        assert!(1.0 <= after && after <= before);
        assert_eq!(r.find(None, None, "sum-dev", "sum-dev").unwrap().mean_ratio, Some(1.0));
    }

    #[test]
    fn split_keeps_every_voter() {
        let (_, p) = generate(&GenSpec::new(5, 40, Model::Uniform, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let (a, b) = random_split(&p, &mut rng).unwrap();
            assert_eq!(a.voter_count() + b.voter_count(), 40);
            assert_eq!(a.union(&b).unwrap().voter_count(), 40);
        }
        let single = PreferenceProfile::unanimous(crate::model::Schedule::identity(3), 1).unwrap();
        assert!(random_split(&single, &mut rng).is_none());
    }
}

//! Seeded synthetic instances: uniform random ballots or Plackett-Luce ballots.
//!
//! Generation is deterministic for a given [`GenSpec`] within this crate
//! (ChaCha8 seeded from `seed`). Identical ballots are merged into one
//! group, in order of first appearance.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PreferenceProfile, Schedule, TaskSet, VoterGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Uniform,
    PlackettLuce,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::PlackettLuce => "plackett-luce",
        }
    }

    /// One-letter tag used in experiment reports.
    pub fn tag(self) -> &'static str {
        match self {
            Model::Uniform => "U",
            Model::PlackettLuce => "C",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "u" | "U" => Ok(Model::Uniform),
            "plackett-luce" | "correlated" | "c" | "C" => Ok(Model::PlackettLuce),
            _ => Err(Error::InvalidSpec(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub voters: u64,
    pub model: Model,
    /// Inclusive range task lengths are drawn from.
    pub length_range: (u64, u64),
    pub seed: u64,
    /// Fixed utilities for the Plackett-Luce model instead of drawing them.
    pub utilities: Option<Vec<f64>>,
}

impl GenSpec {
    pub fn new(n: usize, voters: u64, model: Model, seed: u64) -> Self {
        Self {
            n,
            voters,
            model,
            length_range: (1, 10),
            seed,
            utilities: None,
        }
    }

    pub fn with_lengths(mut self, low: u64, high: u64) -> Self {
        self.length_range = (low, high);
        self
    }

    pub fn with_utilities(mut self, utilities: Vec<f64>) -> Self {
        self.utilities = Some(utilities);
        self
    }

    fn validate(&self) -> Result<()> {
        let (low, high) = self.length_range;
        if self.n == 0 {
            return Err(Error::InvalidSpec("task count must be at least 1".into()));
        }
        if self.voters == 0 {
            return Err(Error::InvalidSpec("voter count must be at least 1".into()));
        }
        if low == 0 || low > high {
            return Err(Error::InvalidSpec(format!(
                "length range [{low}, {high}] must satisfy 1 <= low <= high"
            )));
        }
        if let Some(u) = &self.utilities {
            if u.len() != self.n {
                return Err(Error::InvalidSpec(format!(
                    "{} utilities for {} tasks",
                    u.len(),
                    self.n
                )));
            }
            if u.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return Err(Error::InvalidSpec("utilities must be positive and finite".into()));
            }
        }
        Ok(())
    }
}

/// Mixes an experiment seed with an instance index.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws task lengths and ballots for `spec`.
pub fn generate(spec: &GenSpec) -> Result<(TaskSet, PreferenceProfile)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (low, high) = spec.length_range;
    let lengths: Vec<u64> = (0..spec.n).map(|_| rng.gen_range(low..=high)).collect();
    let tasks = TaskSet::numbered(&lengths)?;

    let utilities = match (spec.model, &spec.utilities) {
        (Model::PlackettLuce, Some(u)) => u.clone(),
        // (0, 1]
        (Model::PlackettLuce, None) => (0..spec.n).map(|_| 1.0 - rng.gen::<f64>()).collect(),
        (Model::Uniform, _) => Vec::new(),
    };

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut groups: Vec<VoterGroup> = Vec::new();
    for _ in 0..spec.voters {
        let order = match spec.model {
            Model::Uniform => {
                let mut o: Vec<usize> = (0..spec.n).collect();
                o.shuffle(&mut rng);
                o
            }
            Model::PlackettLuce => plackett_luce_order(&utilities, &mut rng)?,
        };
        match index.get(&order) {
            Some(&g) => groups[g].multiplicity += 1,
            None => {
                index.insert(order.clone(), groups.len());
                groups.push(VoterGroup {
                    schedule: Schedule::new(order)?,
                    multiplicity: 1,
                });
            }
        }
    }
    Ok((tasks, PreferenceProfile::new(groups)?))
}

/// Sequential draw: each remaining task is picked with probability
/// proportional to its utility.
fn plackett_luce_order<R: Rng>(utilities: &[f64], rng: &mut R) -> Result<Vec<usize>> {
    let n = utilities.len();
    let mut order = Vec::with_capacity(n);
    if n == 1 {
        return Ok(vec![0]);
    }
    let mut weights = WeightedIndex::new(utilities)
        .map_err(|e| Error::InvalidSpec(format!("utilities: {e}")))?;
    for _ in 0..n - 1 {
        let pick = weights.sample(rng);
        order.push(pick);
        weights
            .update_weights(&[(pick, &0.0)])
            .map_err(|e| Error::InvalidSpec(format!("utilities: {e}")))?;
    }
    let last = (0..n).find(|t| !order.contains(t)).expect("one task left");
    order.push(last);
    Ok(order)
}

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{solve_exact, SolveOptions};
use crate::heuristics;
use crate::model::{Instance, Objective, Schedule};

/// A resolute aggregation rule: exact optimisation of an objective with
/// lexicographic tie-breaking, or one of the deviation heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Exact(Objective),
    Lmt,
    LmtLocalSearch,
}

impl Rule {
    pub const EXACT: [Rule; 3] = [
        Rule::Exact(Objective::SumDeviation),
        Rule::Exact(Objective::SumTardiness),
        Rule::Exact(Objective::PtaKendallTau),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Exact(o) => o.name(),
            Rule::Lmt => "lmt",
            Rule::LmtLocalSearch => "lmt-ls",
        }
    }

    /// The objective the rule optimises or approximates.
    pub fn objective(self) -> Objective {
        match self {
            Rule::Exact(o) => o,
            Rule::Lmt | Rule::LmtLocalSearch => Objective::SumDeviation,
        }
    }

    pub fn apply(self, instance: &Instance) -> Result<Schedule> {
        match self {
            Rule::Exact(o) => Ok(solve_exact(instance, o, &SolveOptions::default())?.schedule),
            Rule::Lmt => Ok(heuristics::lmt(instance)),
            Rule::LmtLocalSearch => Ok(heuristics::lmt_with_local_search(instance)?.0),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lmt" => Ok(Rule::Lmt),
            "lmt-ls" => Ok(Rule::LmtLocalSearch),
            other => other.parse().map(Rule::Exact),
        }
    }
}

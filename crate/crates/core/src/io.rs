//! JSON instance files.
//!
//! ```json
//! {"tasks": [{"id": "a", "length": 3}, ...],
//!  "voters": [{"count": 2, "order": ["a", "b", ...]}, ...]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, PreferenceProfile, TaskSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub id: String,
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub count: u64,
    pub order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub tasks: Vec<TaskEntry>,
    pub voters: Vec<VoterEntry>,
}

impl InstanceFile {
    pub fn from_parts(tasks: &TaskSet, profile: &PreferenceProfile) -> Self {
        Self {
            tasks: tasks
                .ids()
                .iter()
                .zip(tasks.lengths())
                .map(|(id, &length)| TaskEntry {
                    id: id.clone(),
                    length,
                })
                .collect(),
            voters: profile
                .groups()
                .iter()
                .map(|g| VoterEntry {
                    count: g.multiplicity,
                    order: g.schedule.ids(tasks).into_iter().map(String::from).collect(),
                })
                .collect(),
        }
    }

    pub fn from_instance(instance: &Instance) -> Self {
        Self::from_parts(instance.tasks(), instance.profile())
    }

    pub fn task_set(&self) -> Result<TaskSet> {
        TaskSet::new(self.tasks.iter().map(|t| (t.id.clone(), t.length)))
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let tasks = self.task_set()?;
        let profile = PreferenceProfile::from_entries(&tasks, &self.voters)?;
        Instance::new(tasks, profile)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("instance JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generators::{generate, GenSpec, Model};
    use proptest::prelude::*;

    #[test]
    fn example_file_loads() {
        let text = r#"{
            "tasks": [{"id": "1", "length": 2}, {"id": "2", "length": 4}, {"id": "3", "length": 1}],
            "voters": [
                {"count": 2, "order": ["2", "1", "3"]},
                {"count": 2, "order": ["1", "2", "3"]},
                {"count": 1, "order": ["3", "2", "1"]}
            ]
        }"#;
        let inst = InstanceFile::parse(text).unwrap().to_instance().unwrap();
        assert_eq!(
            InstanceFile::from_instance(&inst),
            InstanceFile::from_instance(&fixtures::three_task_example())
        );
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(InstanceFile::parse("{").is_err());
        assert!(InstanceFile::parse(r#"{"tasks": [], "voters": [], "x": 1}"#).is_err());
        let missing = r#"{"tasks": [{"id": "a", "length": 1}, {"id": "b", "length": 1}],
                          "voters": [{"count": 1, "order": ["a"]}]}"#;
        assert_eq!(
            InstanceFile::parse(missing).unwrap().to_instance().err(),
            Some(Error::MissingTask("b".into()))
        );
        let no_voters = r#"{"tasks": [{"id": "a", "length": 1}], "voters": []}"#;
        assert_eq!(
            InstanceFile::parse(no_voters).unwrap().to_instance().err(),
            Some(Error::NoVoters)
        );
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..8, v in 1u64..30, seed in any::<u64>(), pl in any::<bool>()) {
            let model = if pl { Model::PlackettLuce } else { Model::Uniform };
            let (tasks, profile) = generate(&GenSpec::new(n, v, model, seed)).unwrap();
            let file = InstanceFile::from_parts(&tasks, &profile);
            let back = InstanceFile::parse(&file.to_json()).unwrap();
            prop_assert_eq!(&back, &file);
            let inst = back.to_instance().unwrap();
            prop_assert_eq!(inst.tasks(), &tasks);
            prop_assert_eq!(inst.profile(), &profile);
        }
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One invocation, printed as a single JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub results: Value,
    pub elapsed_ms: u64,
    pub version: String,
    pub seed: Option<u64>,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        RunRecord {
            command: command.to_string(),
            params: BTreeMap::new(),
            results: Value::Null,
            elapsed_ms: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameters serialize");
        self.params.insert(key.to_string(), v);
        self
    }
}

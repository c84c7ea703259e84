use std::io::Write;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// Collects body records and writes them after a header line.
///
/// Wall-clock fields (`*_secs`) are moved out of each record into the header
/// so that the body depends only on the inputs and seeds.
pub struct Report {
    command: &'static str,
    config: Value,
    started_unix: u64,
    start: Instant,
    records: Vec<Value>,
    record_secs: Vec<Map<String, Value>>,
}

fn strip_secs(value: &mut Value, prefix: &str, out: &mut Map<String, Value>) {
    match value {
        Value::Object(map) => {
            let timed: Vec<String> = map.keys().filter(|k| k.ends_with("_secs")).cloned().collect();
            for key in timed {
                if let Some(v) = map.remove(&key) {
                    out.insert(format!("{prefix}{key}"), v);
                }
            }
            for (key, child) in map.iter_mut() {
                strip_secs(child, &format!("{prefix}{key}."), out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter_mut().enumerate() {
                strip_secs(child, &format!("{prefix}{i}."), out);
            }
        }
        _ => {}
    }
}

impl Report {
    pub fn new(command: &'static str, config: &impl Serialize) -> Self {
        let started_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            command,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            started_unix,
            start: Instant::now(),
            records: Vec::new(),
            record_secs: Vec::new(),
        }
    }

    pub fn push(&mut self, record: &str, body: &impl Serialize) {
        let mut value = serde_json::to_value(body).unwrap_or(Value::Null);
        let mut secs = Map::new();
        strip_secs(&mut value, "", &mut secs);
        let mut line = Map::new();
        line.insert("record".into(), Value::String(record.into()));
        match value {
            Value::Object(map) => line.extend(map),
            other => {
                line.insert("value".into(), other);
            }
        }
        self.records.push(Value::Object(line));
        self.record_secs.push(secs);
    }

    fn header(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool": "prunekit",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "started_unix": self.started_unix,
            "timings": {
                "wall_secs": self.start.elapsed().as_secs_f64(),
                "records": self.record_secs,
            },
            "config": self.config,
            "defaults": invented_defaults(),
        })
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), Failure> {
        let mut text = serde_json::to_string(&self.header()).expect("header serializes");
        text.push('\n');
        for r in &self.records {
            text.push_str(&serde_json::to_string(r).expect("record serializes"));
            text.push('\n');
        }
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::parse(format!("stdout: {e}")))
            }
        }
    }
}

/// Constants this tool had to choose itself, echoed in every header.
pub fn invented_defaults() -> Value {
    use prunekit_core::instances::{DEFAULT_INTERFERENCE_UNIVERSE, PLANTED_P_IN, PLANTED_P_OUT};
    json!({
        "interference_universe": DEFAULT_INTERFERENCE_UNIVERSE,
        "planted_p_in": PLANTED_P_IN,
        "planted_p_out": PLANTED_P_OUT,
        "planted_communities": 20,
        "guard": prunekit_core::DEFAULT_GUARD as u64,
        "knapsack_exact_extract_limit": prunekit_core::knapsack::EXACT_EXTRACT_LIMIT,
        "tie_break": "lowest id",
        "check_exhaustive_limit": crate::commands::EXHAUSTIVE_LIMIT,
    })
}

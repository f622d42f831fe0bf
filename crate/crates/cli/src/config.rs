//! TOML run configs. Each section mirrors one subcommand's flags under the
//! same kebab-case names; `[global]` holds the global options. Flags win.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SECTIONS: [&str; 8] = [
    "global",
    "synth",
    "analyze-besov",
    "commutator-scan",
    "defect-scan",
    "helicity",
    "run-solver",
    "report",
];

#[derive(Debug, Default)]
pub struct Config {
    sections: Map<String, Value>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::at(path, e))?;
        let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::at(path, e))?;
        let mut sections = Map::new();
        for (name, body) in table {
            if !SECTIONS.contains(&name.as_str()) {
                return Err(CliError::at(
                    path,
                    format!(
                        "unknown section [{name}]; expected one of {}",
                        SECTIONS.join(", ")
                    ),
                ));
            }
            if !body.is_table() {
                return Err(CliError::at(path, format!("[{name}] must be a table")));
            }
            let json = serde_json::to_value(body).map_err(|e| CliError::at(path, e))?;
            sections.insert(name, json);
        }
        Ok(Config { sections })
    }

    /// Section values overlaid by every flag that was given.
    pub fn merge<T: Serialize + DeserializeOwned>(&self, section: &str, flags: &T) -> CliResult<T> {
        let mut merged = match self.sections.get(section) {
            Some(Value::Object(m)) => m.clone(),
            _ => Map::new(),
        };
        let given = serde_json::to_value(flags)
            .map_err(|e| CliError::validation(format!("[{section}]: {e}")))?;
        if let Value::Object(m) = given {
            for (k, v) in m {
                if !v.is_null() {
                    merged.insert(k, v);
                }
            }
        }
        serde_json::from_value(Value::Object(merged))
            .map_err(|e| CliError::validation(format!("config section [{section}]: {e}")))
    }
}

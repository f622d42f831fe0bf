use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use helicon::conservation::{criteria_evaluator, ClauseVerdict, RegularitySummary};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{besov, commutator, defect, helicity, solver};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_writable, write_atomic, write_json, Ctx};

pub const SCHEMA: &str = "helicon.report.v1";
pub const SUMMARY_SCHEMA: &str = "helicon.regularity-summary.v1";

/// Merge the JSON outputs in a directory and check every clause. Earlier
/// reports in the directory are ignored.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ReportArgs {
    /// Directory of JSON outputs [default: the output directory].
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output stem; writes STEM.json and STEM.txt [default: report].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Default)]
struct Merged {
    summary: Map<String, Value>,
    sources: Vec<Value>,
    skipped: Vec<Value>,
    notes: Vec<String>,
    defects: Vec<Value>,
    commutators: Vec<Value>,
    solver_runs: Vec<Value>,
    helicity: Vec<Value>,
}

fn besov_key(key: &str) -> bool {
    key.ends_with("_besov")
}

impl Merged {
    /// Sets a summary entry. Besov entries keep the lower exponent; any
    /// other conflict keeps the earlier file.
    fn put(&mut self, key: &str, value: Value, source: &str) {
        if value.is_null() {
            return;
        }
        match self.summary.get(key) {
            None => {
                self.summary.insert(key.to_string(), value);
            }
            Some(old) if *old == value => {}
            Some(old) => {
                let exp = |v: &Value| v.get("exponent").and_then(Value::as_f64);
                if besov_key(key) && exp(&value) < exp(old) {
                    self.notes.push(format!(
                        "{key}: {source} gives a lower exponent; it replaces the earlier measurement"
                    ));
                    self.summary.insert(key.to_string(), value);
                } else {
                    self.notes.push(format!(
                        "{key}: {source} disagrees with an earlier file; kept the earlier value"
                    ));
                }
            }
        }
    }

    fn add(&mut self, name: &str, doc: Value) {
        let schema = doc
            .get("schema")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        match schema.as_str() {
            besov::SCHEMA => {
                let role = serde_json::from_value::<besov::Role>(doc["role"].clone()).ok();
                if let (Some(role), Some(m)) =
                    (role, doc.get("measurement").filter(|m| !m.is_null()))
                {
                    self.put(role.summary_key(), m.clone(), name);
                    self.put("dim", doc["dim"].clone(), name);
                }
            }
            SUMMARY_SCHEMA => {
                if let Some(Value::Object(s)) = doc.get("summary") {
                    for (k, v) in s {
                        self.put(k, v.clone(), name);
                    }
                }
            }
            defect::SCHEMA => {
                for r in doc["reports"].as_array().into_iter().flatten() {
                    self.defects.push(json!({
                        "source": name,
                        "system": doc["system"],
                        "term_id": r["term_id"],
                        "axis": r["axis"],
                        "slope": r["fit"]["slope"],
                        "expected_exponent": r["expected_exponent"],
                        "verdict": r["verdict"],
                    }));
                }
            }
            commutator::SCHEMA => self.commutators.push(json!({
                "source": name,
                "slope": doc["scan"]["fit"]["slope"],
                "expected_exponent": doc["scan"]["expected_exponent"],
                "trend": doc["scan"]["trend"],
            })),
            solver::SCHEMA => self.solver_runs.push(json!({
                "source": name,
                "system": doc["system"],
                "drift": doc["drift"],
            })),
            helicity::SCHEMA => self.helicity.push(json!({
                "source": name,
                "values": doc["values"],
            })),
            SCHEMA => return,
            _ => {
                self.skipped
                    .push(json!({ "file": name, "reason": "no known schema" }));
                return;
            }
        }
        self.sources.push(json!({ "file": name, "schema": schema }));
    }
}

fn json_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::at(dir, e))?;
    let mut files = Vec::new();
    for e in entries {
        let p = e.map_err(|e| CliError::at(dir, e))?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn render(merged: &Merged, clauses: &[ClauseVerdict], inputs: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "helicon report over {inputs} input file(s)");
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<48} {:>6}  verdict", "theorem", "clause");
    for c in clauses {
        let _ = writeln!(
            s,
            "{:<48} {:>6}  {}",
            c.theorem.title(),
            c.clause,
            c.verdict
        );
        let _ = writeln!(s, "    {}", c.statement);
        for a in &c.arithmetic {
            let _ = writeln!(s, "    check: {a}");
        }
        for m in &c.missing {
            let _ = writeln!(s, "    missing: {m}");
        }
        for a in &c.assumed {
            let _ = writeln!(s, "    assumed: {a}");
        }
    }
    let cell = |v: &Value| match v.as_f64() {
        Some(x) => format!("{x:.4}"),
        None => "-".into(),
    };
    if !merged.defects.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<32} {:<20} {:>9} {:>9}  verdict",
            "defect scan", "term", "slope", "expected"
        );
        for d in &merged.defects {
            let term = match d["axis"].as_u64() {
                Some(a) => format!("{} (axis {a})", d["term_id"].as_str().unwrap_or("")),
                None => d["term_id"].as_str().unwrap_or("").to_string(),
            };
            let _ = writeln!(
                s,
                "{:<32} {:<20} {:>9} {:>9}  {}",
                d["source"].as_str().unwrap_or(""),
                term,
                cell(&d["slope"]),
                cell(&d["expected_exponent"]),
                d["verdict"].as_str().unwrap_or("")
            );
        }
    }
    if !merged.commutators.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<32} {:>9} {:>9}  trend",
            "commutator scan", "slope", "expected"
        );
        for c in &merged.commutators {
            let _ = writeln!(
                s,
                "{:<32} {:>9} {:>9}  {}",
                c["source"].as_str().unwrap_or(""),
                cell(&c["slope"]),
                cell(&c["expected_exponent"]),
                c["trend"].as_str().unwrap_or("-")
            );
        }
    }
    if !merged.notes.is_empty() {
        let _ = writeln!(s);
        for n in &merged.notes {
            let _ = writeln!(s, "note: {n}");
        }
    }
    s
}

pub fn run(args: ReportArgs, ctx: &Ctx) -> CliResult<()> {
    let input = args.input.unwrap_or_else(|| ctx.out_dir.clone());
    if !input.is_dir() {
        return Err(CliError::at(&input, "input is not a directory"));
    }
    let stem = ctx.output_path(args.output.as_deref(), "report");
    let json_out = stem.with_extension("json");
    let text_out = stem.with_extension("txt");
    ensure_writable(&json_out)?;
    let mut merged = Merged::default();
    let files = json_files(&input)?;
    for p in &files {
        let name = p
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = std::fs::read_to_string(p).map_err(|e| CliError::at(p, e))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::at(p, e))?;
        merged.add(&name, doc);
    }
    let summary: RegularitySummary = serde_json::from_value(Value::Object(merged.summary.clone()))
        .map_err(|e| CliError::validation(format!("merged regularity summary is invalid: {e}")))?;
    let clauses = criteria_evaluator(&summary);
    let json = json!({
        "schema": SCHEMA,
        "input": input.display().to_string(),
        "sources": merged.sources,
        "skipped": merged.skipped,
        "summary": summary,
        "clauses": clauses,
        "defects": merged.defects,
        "commutators": merged.commutators,
        "solver_runs": merged.solver_runs,
        "helicity": merged.helicity,
        "notes": merged.notes,
    });
    let text = render(&merged, &clauses, merged.sources.len());
    write_json(&json_out, &json)?;
    write_atomic(&text_out, text.as_bytes())?;
    print!("{text}");
    ctx.info(format!(
        "wrote {} and {}",
        json_out.display(),
        text_out.display()
    ));
    Ok(())
}

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use helicon::fields::FieldFile;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Resolved global options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub seed: u64,
    pub format: Format,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub verbose: u8,
}

impl Ctx {
    pub fn info(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }

    /// `stem` with the extension of the output format.
    pub fn default_name(&self, stem: &str) -> String {
        format!("{stem}.{}", self.format.extension())
    }

    /// `given`, or `default_name`, under the output directory unless absolute.
    pub fn output_path(&self, given: Option<&Path>, default_name: &str) -> PathBuf {
        let name = match given {
            Some(p) => p.to_path_buf(),
            None => PathBuf::from(default_name),
        };
        if name.is_absolute() {
            name
        } else {
            self.out_dir.join(name)
        }
    }

    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::validation(format!("cannot start worker pool: {e}")))
    }

    /// Runs `f` on every item in the worker pool, keeping input order.
    pub fn par_map<T: Sync, R: Send>(
        &self,
        items: &[T],
        f: impl Fn(&T) -> Result<R, helicon::Error> + Sync + Send,
    ) -> CliResult<Vec<R>> {
        use rayon::prelude::*;
        let pool = self.pool()?;
        Ok(pool.install(|| items.par_iter().map(&f).collect::<Result<Vec<R>, _>>())?)
    }
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Creates the parent directory and checks that it accepts new files.
pub fn ensure_writable(path: &Path) -> CliResult<()> {
    let dir = parent_dir(path);
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::at(dir, format!("cannot create output directory: {e}")))?;
    tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::at(dir, format!("output directory is not writable: {e}")))?;
    if path.is_dir() {
        return Err(CliError::at(path, "output path is a directory"));
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = parent_dir(path);
    std::fs::create_dir_all(dir).map_err(|e| CliError::at(dir, e))?;
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(|e| CliError::at(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::at(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::at(path, e))?;
    tmp.persist(path).map_err(|e| CliError::at(path, e.error))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::at(path, e))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// CSV with a header row; every record must match the header length.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::at(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::at(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::at(path, e))?;
    write_atomic(path, &bytes)
}

pub fn write_field(path: &Path, file: &FieldFile) -> CliResult<()> {
    write_atomic(path, &file.to_bytes())
}

pub fn load_field(path: &Path) -> CliResult<FieldFile> {
    FieldFile::load(path).map_err(|e| CliError::at(path, e))
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e15)`;
/// empty for non-finite values.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        String::new()
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn log10(x: f64) -> String {
    if x > 0.0 {
        num(x.log10())
    } else {
        String::new()
    }
}

/// Writes `json` or the CSV table, whichever the format selects.
pub fn emit(
    ctx: &Ctx,
    path: &Path,
    json: &serde_json::Value,
    header: &[&str],
    rows: &[Vec<String>],
) -> CliResult<()> {
    match ctx.format {
        Format::Json => write_json(path, json)?,
        Format::Csv => write_csv(path, header, rows)?,
    }
    ctx.info(format!("wrote {}", path.display()));
    Ok(())
}

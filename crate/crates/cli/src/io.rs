use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use emomap_core::lexicon::{parse_lexicon, parse_merged, DuplicatePolicy, ParseOptions, RangePolicy};
use emomap_core::{FormatDescriptor, KnnModel, Lexicon, MergedLexicon};

use crate::args::{Dedup, ParseFlags};

pub const DATA_DIR_VAR: &str = "EMOMAP_DATA_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Degenerate(m) => write!(f, "degenerate statistics: {m}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn data_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

/// Resolves an input path, falling back to the data directory for relative
/// paths that do not exist as given.
pub fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(DATA_DIR_VAR) {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(resolve(path)).map(BufReader::new).map_err(|e| data_err(path, e))
}

pub fn parse_options(flags: &ParseFlags) -> ParseOptions {
    ParseOptions {
        range: if flags.clamp { RangePolicy::Clamp } else { RangePolicy::Strict },
        duplicates: match flags.dedup {
            Dedup::Error => DuplicatePolicy::Error,
            Dedup::Mean => DuplicatePolicy::Mean,
        },
        language: None,
    }
}

pub fn read_lexicon(path: &Path, format: &FormatDescriptor, flags: &ParseFlags) -> Result<Lexicon> {
    parse_lexicon(open(path)?, format, &parse_options(flags)).map_err(|e| data_err(path, e))
}

pub fn read_gold(
    path: &Path,
    formats: &(FormatDescriptor, FormatDescriptor),
    flags: &ParseFlags,
) -> Result<MergedLexicon> {
    parse_merged(open(path)?, &formats.0, &formats.1, &parse_options(flags)).map_err(|e| data_err(path, e))
}

pub fn read_model(path: &Path) -> Result<KnnModel> {
    KnnModel::load(open(path)?).map_err(|e| data_err(path, e))
}

/// Words in the first column of a headed TSV file.
pub fn read_words(path: &Path) -> Result<Vec<String>> {
    let mut words = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| data_err(path, format!("line {}: {e}", i + 1)))?;
        if i == 0 || line.is_empty() {
            continue;
        }
        words.push(line.split('\t').next().unwrap_or_default().to_string());
    }
    Ok(words)
}

/// `[NAME=]PATH`; without a name the file stem is used.
pub fn named_path(spec: &str) -> Result<(String, PathBuf)> {
    if let Some((name, path)) = spec.split_once('=') {
        if name.is_empty() || path.is_empty() {
            return Err(CliError::Usage(format!("expected NAME=PATH, got `{spec}`")));
        }
        return Ok((name.to_string(), PathBuf::from(path)));
    }
    let path = PathBuf::from(spec);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError::Usage(format!("cannot derive a name from `{spec}`")))?;
    Ok((name, path))
}

/// Writes all files only after every payload is ready; each file is replaced
/// atomically so a failed run leaves no partial output behind.
pub fn commit(outputs: Vec<(Option<PathBuf>, Vec<u8>)>) -> Result<()> {
    let mut staged = Vec::new();
    for (path, bytes) in outputs {
        match path {
            Some(path) => {
                let dir = match path.parent() {
                    Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                    _ => PathBuf::from("."),
                };
                let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| data_err(&path, e))?;
                tmp.write_all(&bytes).map_err(|e| data_err(&path, e))?;
                staged.push((tmp, path));
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes).and_then(|_| out.flush()).map_err(|e| CliError::Data(format!("stdout: {e}")))?;
            }
        }
    }
    for (tmp, path) in staged {
        tmp.persist(&path).map_err(|e| data_err(&path, e.error))?;
    }
    Ok(())
}

//! Direction input: literals, files, or the extremal maximizer.

use std::path::Path;

use cube_shadows::{geometry::input_norm, maximizer, UnitVector};

use crate::error::CliError;
use crate::record::RunRecord;

/// Parses `"0.6,0.8"` (whitespace around entries is ignored).
pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    split_numbers(text.split(','))
}

fn split_numbers<'a>(parts: impl Iterator<Item = &'a str>) -> Result<Vec<f64>, CliError> {
    let v = parts
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("not a number: {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(CliError::Parse("empty vector".into()));
    }
    Ok(v)
}

/// Whitespace-separated numbers from a text file.
pub fn read_vector_file(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    split_numbers(text.split_whitespace())
}

/// Parses `a..b` (inclusive) with `1 ≤ a ≤ b`.
pub fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Parse(format!("bad range {text:?}, expected a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let dims = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Parse(format!("bad dimension {s:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if dims.is_empty() {
        return Err(CliError::Parse("no dimensions given".into()));
    }
    Ok(dims)
}

/// Where a direction came from.
#[derive(Debug, Clone, clap::Args)]
#[group(required = true, multiple = false)]
pub struct DirectionArgs {
    /// Comma-separated coordinates, normalized before use.
    #[arg(long = "vec", allow_hyphen_values = true)]
    pub vec: Option<String>,
    /// Text file of whitespace-separated coordinates.
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
    /// Use the maximizer of ‖u‖₁‖u‖∞ in this dimension.
    #[arg(long)]
    pub maximizer: Option<usize>,
}

/// A normalized direction and the Euclidean norm of the raw input.
pub struct Direction {
    pub unit: UnitVector,
    pub input_l2: f64,
}

impl DirectionArgs {
    pub fn resolve(&self, record: &mut RunRecord) -> Result<Direction, CliError> {
        let raw = if let Some(text) = &self.vec {
            let v = parse_list(text)?;
            record.param("vec", &v);
            v
        } else if let Some(path) = &self.file {
            record.param("file", path.display().to_string());
            read_vector_file(path)?
        } else if let Some(n) = self.maximizer {
            record.param("maximizer", n);
            maximizer(n)?.into_coords()
        } else {
            return Err(CliError::Parse("no direction given".into()));
        };
        let input_l2 = input_norm(&raw)?;
        Ok(Direction {
            unit: UnitVector::new(&raw)?,
            input_l2,
        })
    }
}

use std::path::Path;

use twcoh::linalg::Ring;
use twcoh::poset::{Poset, PosetSpec};
use twcoh::sset::{Presentation, PresentationSpec};
use twcoh::suite;

use crate::CliError;

/// `point`, `unit`, `linear:N`, or a JSON poset file.
pub fn poset(text: &str) -> Result<Poset, CliError> {
    match text {
        "point" => return Ok(Poset::point()),
        "unit" => return Ok(Poset::linear(1)),
        _ => {}
    }
    if let Some(n) = text.strip_prefix("linear:") {
        let n = n
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad poset `{text}`")))?;
        return Ok(Poset::linear(n));
    }
    let raw = read(Path::new(text))?;
    let spec: PosetSpec = serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("{text}: {e}")))?;
    Ok(Poset::from_spec(&spec)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Linear poset `0 < 1 < ... < n` when every label is a small integer.
fn infer_poset(spec: &PresentationSpec) -> Option<Poset> {
    let mut top = 0usize;
    for c in &spec.cells {
        for l in &c.chain {
            let v: usize = l.parse().ok()?;
            if v.to_string() != *l {
                return None;
            }
            top = top.max(v);
        }
    }
    Some(Poset::linear(top))
}

/// Loads a presentation from a file or names one of the built-in examples
/// with `example:NAME`.
pub fn presentation(source: &str, fallback: Option<&str>) -> Result<Presentation, CliError> {
    if let Some(name) = source.strip_prefix("example:") {
        return Ok(suite::by_name(name)?);
    }
    let raw = read(Path::new(source))?;
    let spec: PresentationSpec =
        serde_json::from_str(&raw).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
    let fb = match fallback {
        Some(p) => Some(poset(p)?),
        None => infer_poset(&spec),
    };
    let x = Presentation::from_spec(&spec, fb.as_ref())?;
    let report = x.validate();
    if !report.valid {
        return Err(CliError::Invalid(report.errors.join("; ")));
    }
    Ok(x)
}

/// `a..b`, inclusive at both ends, or a single degree.
pub fn degrees(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad degree range `{text}`"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (text, text),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn ring(text: &str) -> Result<Ring, CliError> {
    Ok(Ring::parse(text)?)
}

/// Cell ids separated by commas.
pub fn cell_list(x: &Presentation, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|id| Ok(x.find_or_err(id)?))
        .collect()
}

//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # temperature scan
//! measures = concurrence, correlated_coherence
//!
//! [fixed]
//! epsilon = 1
//! t = 7
//! bz = 16
//! bx = 100
//!
//! [axis1]
//! param = T
//! min = 0.01
//! max = 100
//! count = 400
//! scale = log
//! ```
//!
//! `[axis2]` is optional and takes the same keys as `[axis1]`.
//! `#` starts a comment; blank lines are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{Axis, Measure, Param, Scale, SweepGrid};

#[derive(Debug, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, (usize, String)>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    sections.insert(String::new(), Section::default());
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(n, "unterminated section header"))?
                .trim();
            if !matches!(name, "fixed" | "axis1" | "axis2") {
                return Err(err(n, format!("unknown section [{name}]")));
            }
            if sections.contains_key(name) {
                return Err(err(n, format!("duplicate section [{name}]")));
            }
            sections.insert(
                name.to_string(),
                Section {
                    line: n,
                    ..Section::default()
                },
            );
            current = name.to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(n, format!("expected key = value, got `{line}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(err(n, "empty key"));
        }
        let section = sections.get_mut(&current).expect("current section exists");
        if section.entries.insert(k.to_string(), (n, v.to_string())).is_some() {
            return Err(err(n, format!("duplicate key `{k}`")));
        }
    }
    Ok(sections)
}

fn number(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(line, format!("`{key}` must be a finite number, got `{v}`")))
}

fn parse_axis(name: &str, s: &Section) -> Result<Axis> {
    let get = |key: &str| {
        s.entries
            .get(key)
            .ok_or_else(|| err(s.line, format!("[{name}] is missing `{key}`")))
    };
    for (k, (n, _)) in &s.entries {
        if !matches!(k.as_str(), "param" | "min" | "max" | "count" | "scale") {
            return Err(err(*n, format!("unknown key `{k}` in [{name}]")));
        }
    }
    let (n, v) = get("param")?;
    let param: Param = v.parse().map_err(|e: Error| err(*n, e))?;
    let (n, v) = get("min")?;
    let min = number(*n, "min", v)?;
    let (n, v) = get("max")?;
    let max = number(*n, "max", v)?;
    let (n, v) = get("count")?;
    let count = v
        .parse::<usize>()
        .map_err(|_| err(*n, format!("`count` must be a non-negative integer, got `{v}`")))?;
    let scale = match s.entries.get("scale") {
        Some((n, v)) => v.parse().map_err(|e: Error| err(*n, e))?,
        None => Scale::Linear,
    };
    Ok(Axis::new(param, min, max, count, scale))
}

/// Parses and validates a sweep configuration.
pub fn parse_config(text: &str) -> Result<SweepGrid> {
    let sections = parse_sections(text)?;
    let top = &sections[""];
    let mut measures = Vec::new();
    for (k, (n, v)) in &top.entries {
        if k != "measures" {
            return Err(err(*n, format!("unknown top-level key `{k}`")));
        }
        for m in v.split(',').map(str::trim).filter(|m| !m.is_empty()) {
            let m: Measure = m.parse().map_err(|e: Error| err(*n, e))?;
            if measures.contains(&m) {
                return Err(err(*n, format!("measure `{}` listed twice", m.name())));
            }
            measures.push(m);
        }
    }
    if measures.is_empty() {
        return Err(Error::Config("`measures` is missing or empty".into()));
    }

    let mut fixed = Vec::new();
    if let Some(s) = sections.get("fixed") {
        for (k, (n, v)) in &s.entries {
            let p: Param = k.parse().map_err(|e: Error| err(*n, e))?;
            fixed.push((p, number(*n, k, v)?));
        }
    }
    let axis1 = parse_axis(
        "axis1",
        sections
            .get("axis1")
            .ok_or_else(|| Error::Config("missing [axis1] section".into()))?,
    )?;
    let axis2 = sections.get("axis2").map(|s| parse_axis("axis2", s)).transpose()?;
    let grid = SweepGrid {
        fixed,
        axis1,
        axis2,
        measures,
    };
    grid.validate()?;
    Ok(grid)
}

pub fn load_config(path: &Path) -> Result<SweepGrid> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

//! Incidence file formats.
//!
//! Three carriers for the same data — a list of samples, each a set of
//! feature tokens:
//!
//! - `list`: one sample per line, tokens separated by ASCII spaces/tabs; an
//!   empty (or all-whitespace) line is an empty sample.
//! - `csv`: a header row of feature tokens; each following row holds 0/1
//!   cells, one column per token.
//! - `pairs`: lines `sample_index feature_token` with 0-based indices; the
//!   sample count is `max index + 1`, so interior empty samples survive but
//!   trailing empty samples cannot be represented.
//!
//! Lines whose first character is `#` are comments everywhere. Tokens are
//! arbitrary UTF-8 without whitespace or commas (token boundaries are
//! whitespace in `list`/`pairs` and commas in `csv`). Duplicate incidences
//! collapse: a sample is a set. Feature tokens are interned to dense integer
//! ids in order of first appearance; reports depend only on the spectrum, so
//! the id assignment never leaks into estimates.

use std::collections::HashMap;
use std::path::Path;

use featmass::spectrum::{IncidenceSample, SampleMatrix};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Whitespace-separated feature tokens, one sample per line.
    List,
    /// Header of feature tokens, then 0/1 rows.
    Csv,
    /// `sample_index feature_token` pairs.
    Pairs,
}

impl Format {
    /// Extension-based fallback when no `--format` is given.
    pub fn detect(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("pairs") => Format::Pairs,
            _ => Format::List,
        }
    }
}

/// Token-to-id mapping in order of first appearance.
#[derive(Debug, Default)]
pub struct Interner {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.tokens.len() as u32;
        self.tokens.push(token.to_string());
        self.index.insert(token.to_string(), id);
        id
    }

    pub fn token(&self, id: u32) -> &str {
        &self.tokens[id as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#')
}

fn split_tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split([' ', '\t']).filter(|t| !t.is_empty())
}

/// Parses file `content` in `format`; `path` only labels errors.
pub fn parse(content: &str, format: Format, path: &str) -> CliResult<(SampleMatrix, Interner)> {
    let parsed = match format {
        Format::List => parse_list(content, path),
        Format::Csv => parse_csv(content, path),
        Format::Pairs => parse_pairs(content, path),
    }?;
    if parsed.0.n() == 0 {
        return Err(CliError::parse(path, 1, "empty input: no samples"));
    }
    Ok(parsed)
}

fn parse_list(content: &str, _path: &str) -> CliResult<(SampleMatrix, Interner)> {
    let mut interner = Interner::default();
    let mut samples = Vec::new();
    for line in content.lines() {
        if is_comment(line) {
            continue;
        }
        let ids: Vec<u32> = split_tokens(line).map(|t| interner.intern(t)).collect();
        samples.push(IncidenceSample::new(ids));
    }
    Ok((SampleMatrix::new(samples), interner))
}

fn parse_csv(content: &str, path: &str) -> CliResult<(SampleMatrix, Interner)> {
    let mut interner = Interner::default();
    let mut samples = Vec::new();
    let mut header: Option<Vec<u32>> = None;
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if is_comment(line) {
            continue;
        }
        if header.is_none() {
            let mut cols = Vec::new();
            for token in line.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    return Err(CliError::parse(path, lineno, "empty feature token in header"));
                }
                cols.push(interner.intern(token));
            }
            header = Some(cols);
            continue;
        }
        let cols = header.as_ref().unwrap();
        let cells: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
        if cells.len() != cols.len() {
            return Err(CliError::parse(
                path,
                lineno,
                format!("expected {} cells, found {}", cols.len(), cells.len()),
            ));
        }
        let mut ids = Vec::new();
        for (cell, &id) in cells.iter().zip(cols) {
            match *cell {
                "0" => {}
                "1" => ids.push(id),
                other => {
                    return Err(CliError::parse(
                        path,
                        lineno,
                        format!("cell must be 0 or 1, found {other:?}"),
                    ))
                }
            }
        }
        samples.push(IncidenceSample::new(ids));
    }
    if header.is_none() {
        return Err(CliError::parse(path, 1, "empty input: missing csv header"));
    }
    Ok((SampleMatrix::new(samples), interner))
}

fn parse_pairs(content: &str, path: &str) -> CliResult<(SampleMatrix, Interner)> {
    let mut interner = Interner::default();
    let mut by_sample: Vec<Vec<u32>> = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if is_comment(line) || split_tokens(line).next().is_none() {
            continue;
        }
        let fields: Vec<&str> = split_tokens(line).collect();
        if fields.len() != 2 {
            return Err(CliError::parse(
                path,
                lineno,
                format!("expected `sample_index feature_token`, found {} fields", fields.len()),
            ));
        }
        let sample_idx: usize = fields[0].parse().map_err(|_| {
            CliError::parse(path, lineno, format!("bad sample index {:?}", fields[0]))
        })?;
        let id = interner.intern(fields[1]);
        if by_sample.len() <= sample_idx {
            by_sample.resize_with(sample_idx + 1, Vec::new);
        }
        by_sample[sample_idx].push(id);
    }
    let samples = by_sample.into_iter().map(IncidenceSample::new).collect();
    Ok((SampleMatrix::new(samples), interner))
}

/// Serializes the matrix in `format`; inverse of `parse` on incidence
/// multisets (for `pairs`, up to trailing empty samples).
pub fn write(matrix: &SampleMatrix, interner: &Interner, format: Format) -> String {
    match format {
        Format::List => write_list(matrix, interner),
        Format::Csv => write_csv(matrix, interner),
        Format::Pairs => write_pairs(matrix, interner),
    }
}

fn write_list(matrix: &SampleMatrix, interner: &Interner) -> String {
    let mut out = String::new();
    for sample in matrix.samples() {
        let line: Vec<&str> = sample.features().iter().map(|&f| interner.token(f)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn write_csv(matrix: &SampleMatrix, interner: &Interner) -> String {
    let mut out = String::new();
    out.push_str(&interner.tokens().join(","));
    out.push('\n');
    for sample in matrix.samples() {
        let cells: Vec<&str> = (0..interner.len() as u32)
            .map(|id| if sample.contains(id) { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn write_pairs(matrix: &SampleMatrix, interner: &Interner) -> String {
    let mut out = String::new();
    for (i, sample) in matrix.samples().iter().enumerate() {
        for &f in sample.features() {
            out.push_str(&format!("{i} {}\n", interner.token(f)));
        }
    }
    out
}

//! Delimited text I/O: raw tables, transformed systems and pair-weight files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use kendall_core::transform::SCHEME_ID;
use kendall_core::{KendallError, KendallSequence, OrdinalVector, PairVote, PairVotes, Symbol, TransformedSystem};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Kendall(#[from] KendallError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

fn format_error(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Format { path: path.to_path_buf(), msg: msg.into() }
}

pub fn is_missing(token: &str) -> bool {
    token.is_empty() || token.eq_ignore_ascii_case("na") || token.eq_ignore_ascii_case("nan")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Tab if the header line has tabs but no commas, comma otherwise.
fn detect_delimiter(header: &str) -> u8 {
    if header.contains('\t') && !header.contains(',') {
        b'\t'
    } else {
        b','
    }
}

fn reader(body: &str) -> csv::Reader<&[u8]> {
    let header = body.lines().next().unwrap_or("");
    csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(header))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes())
}

/// A data record with its file line.
type Row = (u64, csv::StringRecord);

/// Reads a header plus equal-length rows, checking for ragged lines.
/// `line_offset` accounts for lines consumed before `body`.
fn read_grid(path: &Path, body: &str, line_offset: u64) -> Result<(Vec<String>, Vec<Row>)> {
    let mut rdr = reader(body);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if names.is_empty() || names.iter().all(String::is_empty) {
        return Err(format_error(path, "missing header row"));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line()) + line_offset;
        if record.len() != names.len() {
            return Err(format_error(
                path,
                format!("line {line}: expected {} fields, found {}", names.len(), record.len()),
            ));
        }
        rows.push((line, record));
    }
    Ok((names, rows))
}

/// One column of a raw table.
#[derive(Debug, Clone)]
pub enum Column {
    Numeric(OrdinalVector),
    Text(Vec<Option<String>>),
}

/// Raw object-by-feature table; missing tokens are already `None`.
#[derive(Debug, Clone)]
pub struct Table {
    pub path: PathBuf,
    pub names: Vec<String>,
    pub cells: Vec<Vec<Option<String>>>,
    /// File line of each data row, for messages.
    pub lines: Vec<u64>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let body = read_text(path)?;
        if body.starts_with("#kendall") {
            return Err(format_error(path, "expected an original table, found a transformed file"));
        }
        let (names, rows) = read_grid(path, &body, 0)?;
        let mut cells = vec![Vec::with_capacity(rows.len()); names.len()];
        let mut lines = Vec::with_capacity(rows.len());
        for (line, record) in rows {
            for (col, field) in cells.iter_mut().zip(record.iter()) {
                col.push((!is_missing(field)).then(|| field.to_owned()));
            }
            lines.push(line);
        }
        Ok(Self { path: path.to_path_buf(), names, cells, lines })
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| {
            format_error(&self.path, format!("unknown column '{name}'; columns are {}", self.names.join(", ")))
        })
    }

    /// Numeric if every present value parses as a finite or infinite float.
    pub fn column(&self, j: usize) -> Column {
        let raw = &self.cells[j];
        let parsed: Option<Vec<Option<f64>>> = raw
            .iter()
            .map(|v| match v {
                None => Some(None),
                Some(s) => s.parse::<f64>().ok().map(Some),
            })
            .collect();
        match parsed {
            Some(values) => Column::Numeric(OrdinalVector::with_missing(self.names[j].clone(), values)),
            None => Column::Text(raw.clone()),
        }
    }

    pub fn numeric(&self, j: usize) -> Result<OrdinalVector> {
        match self.column(j) {
            Column::Numeric(v) => Ok(v),
            Column::Text(raw) => {
                let (row, value) = raw
                    .iter()
                    .enumerate()
                    .find_map(|(i, v)| v.as_deref().filter(|s| s.parse::<f64>().is_err()).map(|s| (i, s)))
                    .expect("text column has a non-numeric value");
                Err(format_error(
                    &self.path,
                    format!(
                        "column '{}', line {}: '{value}' is not numeric",
                        self.names[j], self.lines[row]
                    ),
                ))
            }
        }
    }
}

/// Parses `#kendall n=<n> scheme=<id>` and returns `(n, rest of file)`.
fn split_metadata<'a>(path: &Path, body: &'a str) -> Result<(usize, &'a str)> {
    let (first, rest) = body.split_once('\n').unwrap_or((body, ""));
    let first = first.trim_end_matches('\r');
    let mut tokens = first.split_whitespace();
    if tokens.next() != Some("#kendall") {
        return Err(format_error(path, "line 1: missing '#kendall n=<n> scheme=<id>' header"));
    }
    let (mut n, mut scheme) = (None, None);
    for token in tokens {
        match token.split_once('=') {
            Some(("n", v)) => {
                n = Some(v.parse::<usize>().map_err(|_| format_error(path, format!("line 1: bad n '{v}'")))?)
            }
            Some(("scheme", v)) => scheme = Some(v),
            _ => return Err(format_error(path, format!("line 1: unexpected token '{token}'"))),
        }
    }
    let n = n.ok_or_else(|| format_error(path, "line 1: metadata lacks n"))?;
    match scheme {
        Some(SCHEME_ID) => {}
        Some(other) => {
            return Err(format_error(
                path,
                format!("line 1: pair scheme '{other}' is not supported, expected '{SCHEME_ID}'"),
            ))
        }
        None => return Err(format_error(path, "line 1: metadata lacks scheme")),
    }
    if n < 2 {
        return Err(format_error(path, format!("line 1: n = {n}, need at least 2 objects")));
    }
    Ok((n, rest))
}

fn check_rows(path: &Path, n: usize, found: usize) -> Result<()> {
    let m = n * (n - 1);
    if found != m {
        return Err(format_error(path, format!("expected {m} pair rows for n = {n}, found {found}")));
    }
    Ok(())
}

pub fn is_transformed(path: &Path) -> Result<bool> {
    Ok(read_text(path)?.starts_with("#kendall"))
}

pub fn read_transformed(path: &Path) -> Result<TransformedSystem> {
    let body = read_text(path)?;
    let (n, rest) = split_metadata(path, &body)?;
    let (names, rows) = read_grid(path, rest, 1)?;
    check_rows(path, n, rows.len())?;
    let mut symbols = vec![Vec::with_capacity(rows.len()); names.len()];
    for (line, record) in &rows {
        for ((col, field), name) in symbols.iter_mut().zip(record.iter()).zip(&names) {
            let s = Symbol::parse(field).ok_or_else(|| {
                format_error(path, format!("line {line}, column '{name}': malformed symbol '{field}'"))
            })?;
            col.push(s);
        }
    }
    let columns = symbols
        .iter()
        .map(|s| KendallSequence::from_symbols(n, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TransformedSystem::new(n, names, columns)?)
}

/// Reads `feature:A`, `feature:D`, `feature:T` weight triplets.
pub fn read_weighted(path: &Path) -> Result<Vec<(String, PairVotes)>> {
    let body = read_text(path)?;
    let (n, rest) = split_metadata(path, &body)?;
    let (names, rows) = read_grid(path, rest, 1)?;
    check_rows(path, n, rows.len())?;

    let mut features: Vec<(String, [Option<usize>; 3])> = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let (feature, kind) = name
            .rsplit_once(':')
            .ok_or_else(|| format_error(path, format!("column '{name}' is not of the form feature:A|D|T")))?;
        let slot = match kind {
            "A" => 0,
            "D" => 1,
            "T" => 2,
            _ => return Err(format_error(path, format!("column '{name}': unknown vote kind '{kind}'"))),
        };
        let entry = match features.iter_mut().find(|(f, _)| f == feature) {
            Some(e) => e,
            None => {
                features.push((feature.to_owned(), [None; 3]));
                features.last_mut().expect("just pushed")
            }
        };
        if entry.1[slot].replace(j).is_some() {
            return Err(format_error(path, format!("duplicate column '{name}'")));
        }
    }

    let mut out = Vec::with_capacity(features.len());
    for (feature, slots) in features {
        let mut idx = [0usize; 3];
        for (k, s) in slots.iter().enumerate() {
            idx[k] = s.ok_or_else(|| {
                format_error(path, format!("feature '{feature}' lacks column '{feature}:{}'", ["A", "D", "T"][k]))
            })?;
        }
        let mut votes = Vec::with_capacity(rows.len());
        for (line, record) in &rows {
            let mut w = [0.0; 3];
            for (k, &j) in idx.iter().enumerate() {
                w[k] = record[j].parse::<f64>().map_err(|_| {
                    format_error(path, format!("line {line}, column '{}': '{}' is not a number", names[j], &record[j]))
                })?;
            }
            votes.push(PairVote::new(w[0], w[1], w[2]));
        }
        let votes = PairVotes::new(n, votes).map_err(|e| format_error(path, format!("feature '{feature}': {e}")))?;
        out.push((feature, votes));
    }
    Ok(out)
}

pub fn write_transformed(system: &TransformedSystem, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "#kendall n={} scheme={SCHEME_ID}", system.n())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(system.names())?;
    let columns = system.columns();
    let mut row = Vec::with_capacity(columns.len());
    for i in 0..system.m() {
        row.clear();
        row.extend(columns.iter().map(|c| c.get(i).as_str()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest decimal that round-trips, so output is byte-stable.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NA".to_owned()
    } else {
        format!("{x}")
    }
}

/// Writes to `path`, or stdout when absent or `-`.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = fs::File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        _ => Ok(Box::new(io::BufWriter::new(io::stdout().lock()))),
    }
}

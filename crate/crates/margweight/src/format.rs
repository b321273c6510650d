//! Text formats.
//!
//! Count and probability tables:
//!
//! ```text
//! #rows=2 cols=3
//! 1,2,3
//! 4,5,6
//! ```
//!
//! Any other line starting with `#` is a comment, blank lines are skipped,
//! and the header must precede the data. A marginal is one line of
//! comma-separated probabilities or of integer counts, which are normalized.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so every
//! emitted value parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use margweight_core::simulation::{CaseStudyResult, CaseStudyRow, CellStats, GridCell};
use margweight_core::{Axis, CountTable, JointDistribution, MarginalDistribution};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Contract(#[from] margweight_core::Error),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, message: message.into() }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Non-blank, non-comment lines with 1-based line numbers. A `#rows=`
/// header is returned as a line too.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        let keep = !line.is_empty() && (!line.starts_with('#') || line.starts_with("#rows="));
        keep.then_some((i + 1, line))
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let body = line
        .strip_prefix("#rows=")
        .ok_or_else(|| FormatError::at(line_no, "expected header `#rows=<I> cols=<J>`"))?;
    let (rows, cols) = body
        .split_once(" cols=")
        .ok_or_else(|| FormatError::at(line_no, "expected header `#rows=<I> cols=<J>`"))?;
    let parse = |s: &str, what: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| FormatError::at(line_no, format!("invalid {what} count `{s}`")))
    };
    Ok((parse(rows, "row")?, parse(cols, "column")?))
}

/// `(line number, fields)` for each data line.
type RawLines = Vec<(usize, Vec<String>)>;

/// Header plus `rows` lines of `cols` fields each, as raw strings.
fn parse_grid_text(text: &str) -> Result<(usize, usize, RawLines)> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| FormatError::at(1, "empty file"))?;
    let (rows, cols) = parse_header(header_line, header)?;
    let mut data = Vec::with_capacity(rows);
    for (line_no, line) in lines {
        if line.starts_with('#') {
            return Err(FormatError::at(line_no, "unexpected second header"));
        }
        if data.len() == rows {
            return Err(FormatError::at(line_no, format!("more than {rows} data rows")));
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_owned()).collect();
        if fields.len() != cols {
            return Err(FormatError::at(
                line_no,
                format!("expected {cols} values, found {}", fields.len()),
            ));
        }
        data.push((line_no, fields));
    }
    if data.len() != rows {
        return Err(FormatError::at(
            header_line,
            format!("header declares {rows} rows, found {}", data.len()),
        ));
    }
    Ok((rows, cols, data))
}

pub fn parse_count_table_str(text: &str) -> Result<CountTable> {
    let (rows, cols, data) = parse_grid_text(text)?;
    let mut counts = Vec::with_capacity(rows * cols);
    for (line_no, fields) in data {
        for f in fields {
            let v = f.parse::<u64>().map_err(|_| {
                FormatError::at(line_no, format!("`{f}` is not a nonnegative integer count"))
            })?;
            counts.push(v);
        }
    }
    Ok(CountTable::new(rows, cols, counts)?)
}

pub fn parse_count_table(path: &Path) -> Result<CountTable> {
    parse_count_table_str(&read_file(path)?)
}

/// A joint distribution from either a count table (normalized by its total)
/// or a table of probabilities summing to one.
pub fn parse_joint_table_str(text: &str) -> Result<JointDistribution> {
    if let Ok(counts) = parse_count_table_str(text) {
        return Ok(counts.empirical_joint()?);
    }
    let (rows, cols, data) = parse_grid_text(text)?;
    let mut cells = Vec::with_capacity(rows * cols);
    for (line_no, fields) in data {
        for f in fields {
            let v = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| FormatError::at(line_no, format!("`{f}` is not a probability")))?;
            cells.push(v);
        }
    }
    Ok(JointDistribution::new(rows, cols, cells)?)
}

pub fn parse_joint_table(path: &Path) -> Result<JointDistribution> {
    parse_joint_table_str(&read_file(path)?)
}

/// How a marginal file was interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Values were probabilities already summing to one.
    Probabilities,
    /// Values were integer counts divided by their total.
    Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMarginal {
    pub marginal: MarginalDistribution,
    pub normalization: Normalization,
}

pub fn parse_marginal_str(text: &str, axis: Axis) -> Result<ParsedMarginal> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, line) = lines.next().ok_or_else(|| FormatError::at(1, "empty marginal file"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(FormatError::at(extra, "a marginal is a single line"));
    }
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if let Ok(counts) = fields.iter().map(|f| f.parse::<u64>()).collect::<Result<Vec<_>, _>>() {
        let marginal = MarginalDistribution::from_counts(axis, &counts)
            .map_err(|e| FormatError::at(line_no, e.to_string()))?;
        return Ok(ParsedMarginal { marginal, normalization: Normalization::Counts });
    }
    let probs = fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| FormatError::at(line_no, format!("`{f}` is not a number")))
        })
        .collect::<Result<Vec<_>>>()?;
    let marginal = MarginalDistribution::new(axis, probs)
        .map_err(|e| FormatError::at(line_no, e.to_string()))?;
    Ok(ParsedMarginal { marginal, normalization: Normalization::Probabilities })
}

pub fn parse_marginal(path: &Path, axis: Axis) -> Result<ParsedMarginal> {
    parse_marginal_str(&read_file(path)?, axis)
}

/// Shortest round-trip rendering; switches to exponent notation for very
/// small or large magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn join<T: std::fmt::Debug>(values: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for (k, v) in values.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:?}");
    }
    out
}

pub fn write_count_table(c: &CountTable) -> String {
    let mut out = format!("#rows={} cols={}\n", c.rows(), c.cols());
    for row in c.counts().chunks(c.cols()) {
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

/// Writes a row-major matrix in the table format.
pub fn write_matrix(rows: usize, cols: usize, cells: &[f64]) -> String {
    let mut out = format!("#rows={rows} cols={cols}\n");
    for row in cells.chunks(cols) {
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

pub fn write_marginal(values: &[f64]) -> String {
    let mut out = join(values);
    out.push('\n');
    out
}

/// Fixed four-significant-digit rendering used for percentage columns.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.000".to_owned();
    }
    let digits = |x: f64| (3 - x.abs().log10().floor() as i32).max(0) as usize;
    let mut decimals = digits(x);
    let rounded: f64 = format!("{x:.decimals$}").parse().unwrap_or(x);
    // 9.9996 rounds up to 10.000; drop the extra digit.
    if rounded != 0.0 && digits(rounded) < decimals {
        decimals = digits(rounded);
    }
    format!("{x:.decimals$}")
}

/// A labelled block in a multi-part CSV output.
pub fn section(name: &str, body: &str) -> String {
    format!("#{name}\n{body}")
}

pub const GRID_HEADER: &str = "n,log_cpr,reduction_pct,asymptotic_pct,bias_hat,bias_tilde,zero_columns,\
reduction_pct_raw,asymptotic_pct_raw,var_hat,var_tilde,included,error";

pub fn write_grid_csv(cells: &[GridCell]) -> String {
    let mut out = String::from(GRID_HEADER);
    out.push('\n');
    for c in cells {
        let _ = write!(out, "{},{},", c.n, num(c.log_cpr));
        match &c.stats {
            Some(s) => {
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},",
                    sig4(s.reduction_pct),
                    sig4(s.asymptotic_reduction_pct),
                    num(s.bias_hat),
                    num(s.bias_tilde),
                    s.zero_column_events,
                    num(s.reduction_pct),
                    num(s.asymptotic_reduction_pct),
                    num(s.var_hat),
                    num(s.var_tilde),
                    s.included
                );
            }
            None => out.push_str(",,,,,,,,,,"),
        }
        if let Some(e) = &c.error {
            out.push_str(&e.replace([',', '\n'], ";"));
        }
        out.push('\n');
    }
    out
}

fn field<T: std::str::FromStr>(line: usize, fields: &[&str], k: usize, name: &str) -> Result<T> {
    fields[k]
        .parse()
        .map_err(|_| FormatError::at(line, format!("invalid {name} `{}`", fields[k])))
}

pub fn parse_grid_csv(text: &str) -> Result<Vec<GridCell>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim() == GRID_HEADER => {}
        _ => return Err(FormatError::at(1, "missing grid header")),
    }
    let mut cells = Vec::new();
    for (line, text) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = text.splitn(13, ',').collect();
        if fields.len() != 13 {
            return Err(FormatError::at(line, "expected 13 fields"));
        }
        let n = field(line, &fields, 0, "n")?;
        let log_cpr = field(line, &fields, 1, "log_cpr")?;
        let error = (!fields[12].is_empty()).then(|| fields[12].to_owned());
        let stats = if fields[2].is_empty() {
            None
        } else {
            Some(CellStats {
                bias_hat: field(line, &fields, 4, "bias_hat")?,
                bias_tilde: field(line, &fields, 5, "bias_tilde")?,
                zero_column_events: field(line, &fields, 6, "zero_columns")?,
                reduction_pct: field(line, &fields, 7, "reduction_pct_raw")?,
                asymptotic_reduction_pct: field(line, &fields, 8, "asymptotic_pct_raw")?,
                var_hat: field(line, &fields, 9, "var_hat")?,
                var_tilde: field(line, &fields, 10, "var_tilde")?,
                included: field(line, &fields, 11, "included")?,
            })
        };
        cells.push(GridCell { n, log_cpr, stats, error });
    }
    Ok(cells)
}

pub const CASE_STUDY_HEADER: &str =
    "row,total_pct,adjusted_pct,relative_difference_pct,phat,ptilde,relative_difference_raw";

pub fn write_case_study_csv(r: &CaseStudyResult) -> String {
    let mut out = String::new();
    if !r.zero_columns.is_empty() {
        let _ = writeln!(
            out,
            "# warning: empty sample columns {} left at zero",
            join(r.zero_columns.iter().map(|j| j + 1))
        );
    }
    out.push_str(CASE_STUDY_HEADER);
    out.push('\n');
    for (i, row) in r.rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            sig4(100.0 * row.phat),
            sig4(100.0 * row.ptilde),
            sig4(row.relative_difference_pct),
            num(row.phat),
            num(row.ptilde),
            num(row.relative_difference_pct)
        );
    }
    out
}

pub fn parse_case_study_csv(text: &str) -> Result<CaseStudyResult> {
    let mut zero_columns = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (line, text) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if let Some(cols) = text.strip_prefix("# warning: empty sample columns ") {
            let list = cols.trim_end_matches(" left at zero");
            for c in list.split(',') {
                let j: usize = c
                    .trim()
                    .parse()
                    .map_err(|_| FormatError::at(line, "invalid column index"))?;
                zero_columns.push(j - 1);
            }
            continue;
        }
        if text.is_empty() {
            continue;
        }
        if !seen_header {
            if text != CASE_STUDY_HEADER {
                return Err(FormatError::at(line, "missing case-study header"));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 7 {
            return Err(FormatError::at(line, "expected 7 fields"));
        }
        rows.push(CaseStudyRow {
            phat: field(line, &fields, 4, "phat")?,
            ptilde: field(line, &fields, 5, "ptilde")?,
            relative_difference_pct: field(line, &fields, 6, "relative_difference_raw")?,
        });
    }
    Ok(CaseStudyResult { rows, zero_columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_table_examples() {
        let c = parse_count_table_str("#rows=1 cols=1\n5\n").unwrap();
        assert_eq!(c.counts(), &[5]);
        let c = parse_count_table_str("# comment\n#rows=2 cols=2\n1, 2\n\n3,4\n").unwrap();
        assert_eq!(c.total(), 10);
    }

    #[test]
    fn count_table_errors_carry_line_numbers() {
        let cases = [
            ("#rows=2 cols=2\n1,2\n3,-4\n", 3),
            ("#rows=2 cols=2\n1,2\n3\n", 3),
            ("#rows=2 cols=2\n1,2\n", 1),
            ("rows=2 cols=2\n1,2\n", 1),
            ("#rows=1 cols=2\n1,2\n3,4\n", 3),
            ("#rows=1 cols=2\n1,x\n", 2),
        ];
        for (text, want) in cases {
            match parse_count_table_str(text) {
                Err(FormatError::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn marginal_examples() {
        let m = parse_marginal_str("106181,11898,423\n", Axis::Column).unwrap();
        assert_eq!(m.normalization, Normalization::Counts);
        assert!((m.marginal.probs()[0] - 0.89603).abs() < 1e-5);
        assert!((m.marginal.probs()[1] - 0.10040).abs() < 1e-5);
        assert!((m.marginal.probs()[2] - 0.00357).abs() < 1e-5);
        let m = parse_marginal_str("0.5,0.5", Axis::Row).unwrap();
        assert_eq!(m.marginal.probs(), &[0.5, 0.5]);
        assert_eq!(m.normalization, Normalization::Probabilities);
        assert!(matches!(
            parse_marginal_str("0.6,0.5", Axis::Row),
            Err(FormatError::Parse { line: 1, .. })
        ));
        assert!(parse_marginal_str("0.5,0.5\n0.5,0.5", Axis::Row).is_err());
    }

    #[test]
    fn probability_tables() {
        let p = parse_joint_table_str("#rows=2 cols=2\n0.25,0.25\n0.25,0.25\n").unwrap();
        assert_eq!(p.cells(), &[0.25; 4]);
        let p = parse_joint_table_str("#rows=1 cols=2\n1,3\n").unwrap();
        assert_eq!(p.cells(), &[0.25, 0.75]);
        assert!(parse_joint_table_str("#rows=1 cols=2\n0.5,0.6\n").is_err());
    }

    #[test]
    fn sig4_formatting() {
        assert_eq!(sig4(11.43178), "11.43");
        assert_eq!(sig4(0.92194), "0.9219");
        assert_eq!(sig4(25.0), "25.00");
        assert_eq!(sig4(-3.4921), "-3.492");
        assert_eq!(sig4(9.99996), "10.00");
        assert_eq!(sig4(0.0), "0.000");
        assert_eq!(sig4(123456.7), "123457");
    }
}

//! Panel ingestion: generic CSV, the FRED-MD monthly layout (header row,
//! transform-code row, `sasdate` column), and the standard stationarity
//! transform codes.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use std::path::Path;

/// A `T x K` panel of time-series observations with variable names and
/// optional date labels.
#[derive(Debug, Clone)]
pub struct Panel {
    values: Matrix,
    names: Vec<String>,
    dates: Option<Vec<String>>,
}

/// How rows with missing values are handled at load time.
///
/// The default is `TruncateToCompleteSpan` because FRED-MD style files have
/// ragged edges (series that start late or end early); note that this policy
/// changes the effective sample length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NaPolicy {
    DropRows,
    Fail,
    #[default]
    TruncateToCompleteSpan,
}

/// CSV loading options.
#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    /// Name of a column holding date labels (stored, not parsed as data).
    pub date_column: Option<String>,
    /// FRED-MD layout: second row holds transform codes, date column is
    /// `sasdate`. Codes are stored but not applied.
    pub fredmd_mode: bool,
    pub na_policy: NaPolicy,
}

/// A panel plus the per-column transform codes read from a FRED-MD file.
#[derive(Debug, Clone)]
pub struct LoadedPanel {
    pub panel: Panel,
    pub tcodes: Option<Vec<u8>>,
}

impl Panel {
    pub fn new(values: Matrix, names: Vec<String>, dates: Option<Vec<String>>) -> Result<Self> {
        if names.len() != values.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} columns",
                names.len(),
                values.cols()
            )));
        }
        if let Some(d) = &dates {
            if d.len() != values.rows() {
                return Err(Error::DimensionMismatch("date labels vs rows".into()));
            }
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::InvalidConfig("variable names must be unique".into()));
        }
        if !values.is_finite() {
            return Err(Error::InvalidConfig(
                "panel contains non-finite values".into(),
            ));
        }
        Ok(Panel {
            values,
            names,
            dates,
        })
    }

    pub fn t_len(&self) -> usize {
        self.values.rows()
    }

    pub fn k_vars(&self) -> usize {
        self.values.cols()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dates(&self) -> Option<&[String]> {
        self.dates.as_deref()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn series(&self, j: usize) -> &[f64] {
        self.values.col(j)
    }

    /// Resolves a variable name to its column index.
    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
                available: self.names.join(", "),
            })
    }

    pub fn value(&self, t: usize, j: usize) -> f64 {
        self.values.get(t, j)
    }

    /// Writes the panel as CSV, dates first when present. Names needing
    /// quoting are quoted.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.dates.is_some() {
            out.push_str("date,");
        }
        let header: Vec<String> = self.names.iter().map(|n| quote_field(n)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for t in 0..self.t_len() {
            if let Some(d) = &self.dates {
                out.push_str(&d[t]);
                out.push(',');
            }
            let row: Vec<String> = (0..self.k_vars())
                .map(|j| format_float(self.value(t, j)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn format_float(v: f64) -> String {
    // Shortest round-trip representation keeps CSV output reproducible.
    let mut buf = format!("{v}");
    if !buf.contains('.') && !buf.contains('e') {
        buf.push_str(".0");
    }
    buf
}

fn quote_field(name: &str) -> String {
    if name.contains(',') || name.contains('"') {
        format!("\"{}\"", name.replace('"', "\"\""))
    } else {
        name.to_string()
    }
}

/// Loads a panel from a CSV file.
pub fn load_csv(path: &Path, options: &CsvOptions) -> Result<LoadedPanel> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, options)
}

/// Parses CSV text into a panel. Fields are comma-separated; quotes around
/// fields are stripped (RFC-4180 subset, no embedded commas in names).
pub fn parse_csv(text: &str, options: &CsvOptions) -> Result<LoadedPanel> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::ParseError {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header: Vec<String> = split_fields(header);

    let date_col_name = if options.fredmd_mode {
        Some(
            options
                .date_column
                .clone()
                .unwrap_or_else(|| "sasdate".to_string()),
        )
    } else {
        options.date_column.clone()
    };
    let date_idx = match &date_col_name {
        Some(name) => header.iter().position(|h| h.eq_ignore_ascii_case(name)),
        None => None,
    };

    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != date_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let k = names.len();
    if k == 0 {
        return Err(Error::ParseError {
            line: 1,
            msg: "no data columns".into(),
        });
    }

    let mut tcodes: Option<Vec<u8>> = None;
    let mut rows: Vec<(usize, Option<String>, Vec<Option<f64>>)> = Vec::new();

    for (row_no, (line_no, line)) in lines.enumerate() {
        let fields = split_fields(line);
        if fields.len() != header.len() {
            return Err(Error::ParseError {
                line: line_no + 1,
                msg: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        let date = date_idx.map(|i| fields[i].clone());
        let data: Vec<&String> = fields
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != date_idx)
            .map(|(_, f)| f)
            .collect();

        // FRED-MD: the first non-header row carries the transform codes.
        if options.fredmd_mode && row_no == 0 {
            let mut codes = Vec::with_capacity(k);
            for f in &data {
                let v: f64 = f.trim().parse().map_err(|_| Error::ParseError {
                    line: line_no + 1,
                    msg: format!("bad transform code `{f}`"),
                })?;
                if !(1.0..=7.0).contains(&v) || v.fract() != 0.0 {
                    return Err(Error::ParseError {
                        line: line_no + 1,
                        msg: format!("transform code {v} outside 1..7"),
                    });
                }
                codes.push(v as u8);
            }
            tcodes = Some(codes);
            continue;
        }

        let mut vals = Vec::with_capacity(k);
        for f in &data {
            let t = f.trim();
            if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan") {
                vals.push(None);
            } else {
                let v: f64 = t.parse().map_err(|_| Error::ParseError {
                    line: line_no + 1,
                    msg: format!("bad number `{t}`"),
                })?;
                vals.push(Some(v));
            }
        }
        rows.push((line_no + 1, date, vals));
    }

    let complete = |r: &(usize, Option<String>, Vec<Option<f64>>)| r.2.iter().all(|v| v.is_some());

    let kept: Vec<&(usize, Option<String>, Vec<Option<f64>>)> = match options.na_policy {
        NaPolicy::Fail => {
            if let Some(r) = rows.iter().find(|r| !complete(r)) {
                return Err(Error::MissingData(format!("missing value at line {}", r.0)));
            }
            rows.iter().collect()
        }
        NaPolicy::DropRows => rows.iter().filter(|r| complete(r)).collect(),
        NaPolicy::TruncateToCompleteSpan => {
            let first = rows.iter().position(complete);
            let last = rows.iter().rposition(complete);
            match (first, last) {
                (Some(a), Some(b)) if a <= b => {
                    let span = &rows[a..=b];
                    if let Some(r) = span.iter().find(|r| !complete(r)) {
                        return Err(Error::MissingData(format!(
                            "interior gap at line {} inside the complete span; \
                             use the drop-rows policy to remove it",
                            r.0
                        )));
                    }
                    span.iter().collect()
                }
                _ => Vec::new(),
            }
        }
    };

    if kept.is_empty() {
        return Err(Error::MissingData(
            "no complete rows after applying the NA policy".into(),
        ));
    }

    let t = kept.len();
    let mut values = Matrix::zeros(t, k);
    let mut dates = Vec::with_capacity(t);
    for (i, row) in kept.iter().enumerate() {
        if let Some(d) = &row.1 {
            dates.push(d.clone());
        }
        for (j, v) in row.2.iter().enumerate() {
            values.set(i, j, v.unwrap());
        }
    }
    let dates = if dates.len() == t { Some(dates) } else { None };
    Ok(LoadedPanel {
        panel: Panel::new(values, names, dates)?,
        tcodes,
    })
}

/// Splits one CSV record: quoted fields may contain commas, and a doubled
/// quote inside a quoted field is an escaped quote.
fn split_fields(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if in_quotes => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    current.push('"');
                } else {
                    in_quotes = false;
                }
            }
            '"' => in_quotes = true,
            ',' if !in_quotes => {
                fields.push(std::mem::take(&mut current).trim().to_string());
            }
            _ => current.push(ch),
        }
    }
    fields.push(current.trim().to_string());
    fields
}

/// Applies FRED-MD stationarity transform codes column-wise:
/// 1 level, 2 first difference, 3 second difference, 4 log, 5 dlog,
/// 6 d2log, 7 first difference of the gross growth rate minus one.
/// Leading rows lost to differencing are trimmed to the common span.
pub fn apply_tcodes(panel: &Panel, codes: &[u8]) -> Result<Panel> {
    if codes.len() != panel.k_vars() {
        return Err(Error::DimensionMismatch(format!(
            "{} transform codes for {} columns",
            codes.len(),
            panel.k_vars()
        )));
    }
    if let Some(&c) = codes.iter().find(|&&c| !(1..=7).contains(&c)) {
        return Err(Error::InvalidConfig(format!(
            "transform code {c} outside 1..7"
        )));
    }
    let loss = codes.iter().map(|&c| tcode_loss(c)).max().unwrap_or(0);
    let t = panel.t_len();
    if t <= loss {
        return Err(Error::TooShortSample(format!(
            "{t} rows cannot absorb {loss} differencing rows"
        )));
    }
    let t_out = t - loss;
    let mut out = Matrix::zeros(t_out, panel.k_vars());
    for j in 0..panel.k_vars() {
        let x = panel.series(j);
        let transformed = transform_series(x, codes[j], &panel.names()[j])?;
        // Each transformed series has t - tcode_loss(code) entries aligned to
        // the end of the sample; keep the common tail.
        let skip = transformed.len() - t_out;
        for (i, v) in transformed[skip..].iter().enumerate() {
            out.set(i, j, *v);
        }
    }
    let dates = panel.dates().map(|d| d[loss..].to_vec());
    Panel::new(out, panel.names().to_vec(), dates)
}

fn tcode_loss(code: u8) -> usize {
    match code {
        1 | 4 => 0,
        2 | 5 => 1,
        3 | 6 | 7 => 2,
        _ => 0,
    }
}

fn transform_series(x: &[f64], code: u8, name: &str) -> Result<Vec<f64>> {
    let logs = |x: &[f64]| -> Result<Vec<f64>> {
        if x.iter().any(|&v| v <= 0.0) {
            return Err(Error::NonPositiveUnderLog {
                column: name.to_string(),
            });
        }
        Ok(x.iter().map(|v| v.ln()).collect())
    };
    let diff = |x: &[f64]| -> Vec<f64> { x.windows(2).map(|w| w[1] - w[0]).collect() };
    Ok(match code {
        1 => x.to_vec(),
        2 => diff(x),
        3 => diff(&diff(x)),
        4 => logs(x)?,
        5 => diff(&logs(x)?),
        6 => diff(&diff(&logs(x)?)),
        7 => {
            let ratio: Vec<f64> = x.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
            diff(&ratio)
        }
        _ => unreachable!("codes validated by caller"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CsvOptions {
        CsvOptions::default()
    }

    #[test]
    fn parses_hand_written_csv() {
        let text = "a,b\n1,2\n3,4\n5,6\n";
        let loaded = parse_csv(text, &opts()).unwrap();
        let p = loaded.panel;
        assert_eq!(p.t_len(), 3);
        assert_eq!(p.k_vars(), 2);
        assert_eq!(p.series(0), &[1.0, 3.0, 5.0]);
        assert_eq!(p.series(1), &[2.0, 4.0, 6.0]);
        assert!(loaded.tcodes.is_none());
    }

    #[test]
    fn fredmd_layout_stores_codes_without_applying() {
        let text = "sasdate,CPI,IP\nTransform:,5,5\n1/1/60,10,20\n2/1/60,11,21\n3/1/60,12,22\n";
        let o = CsvOptions {
            fredmd_mode: true,
            ..opts()
        };
        let loaded = parse_csv(text, &o).unwrap();
        assert_eq!(loaded.tcodes, Some(vec![5, 5]));
        // Raw levels retained.
        assert_eq!(loaded.panel.series(0), &[10.0, 11.0, 12.0]);
        assert_eq!(loaded.panel.dates().unwrap()[0], "1/1/60");
    }

    #[test]
    fn drop_rows_removes_interior_gap() {
        let text = "date,a,b\nt1,1,2\nt2,,3\nt3,5,6\n";
        let o = CsvOptions {
            date_column: Some("date".into()),
            na_policy: NaPolicy::DropRows,
            ..opts()
        };
        let p = parse_csv(text, &o).unwrap().panel;
        assert_eq!(p.t_len(), 2);
        assert_eq!(p.dates().unwrap(), &["t1".to_string(), "t3".to_string()]);
    }

    #[test]
    fn truncate_policy_trims_ragged_edges() {
        let text = "a,b\n,2\n1,3\n2,4\n3,\n";
        let p = parse_csv(text, &opts()).unwrap().panel;
        assert_eq!(p.t_len(), 2);
        assert_eq!(p.series(0), &[1.0, 2.0]);
    }

    #[test]
    fn fail_policy_errors_on_gap() {
        let text = "a,b\n1,2\n,3\n";
        let o = CsvOptions {
            na_policy: NaPolicy::Fail,
            ..opts()
        };
        assert!(matches!(parse_csv(text, &o), Err(Error::MissingData(_))));
    }

    #[test]
    fn tcode_identity_and_dlog() {
        let values =
            Matrix::from_cols(&[vec![1.0, std::f64::consts::E, 7.389056098930650]]).unwrap();
        let p = Panel::new(values, vec!["x".into()], None).unwrap();
        let same = apply_tcodes(&p, &[1]).unwrap();
        assert_eq!(same.series(0), p.series(0));
        let dlog = apply_tcodes(&p, &[5]).unwrap();
        assert_eq!(dlog.t_len(), 2);
        assert!((dlog.series(0)[0] - 1.0).abs() < 1e-12);
        assert!((dlog.series(0)[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tcode_diff_then_cumsum_recovers_up_to_constant() {
        let x = vec![3.0, 1.0, 4.0, 1.5, 9.2];
        let values = Matrix::from_cols(&[x.clone()]).unwrap();
        let p = Panel::new(values, vec!["x".into()], None).unwrap();
        let d = apply_tcodes(&p, &[2]).unwrap();
        let mut acc = x[0];
        for (i, dv) in d.series(0).iter().enumerate() {
            acc += dv;
            assert!((acc - x[i + 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn tcode_log_rejects_nonpositive() {
        let values = Matrix::from_cols(&[vec![1.0, -2.0, 3.0]]).unwrap();
        let p = Panel::new(values, vec!["x".into()], None).unwrap();
        assert!(matches!(
            apply_tcodes(&p, &[4]),
            Err(Error::NonPositiveUnderLog { .. })
        ));
    }

    #[test]
    fn unknown_variable_lists_names() {
        let values = Matrix::from_cols(&[vec![1.0], vec![2.0]]).unwrap();
        let p = Panel::new(values, vec!["a".into(), "b".into()], None).unwrap();
        match p.var_index("c") {
            Err(Error::UnknownVariable { available, .. }) => {
                assert!(available.contains('a') && available.contains('b'));
            }
            other => panic!("expected UnknownVariable, got {other:?}"),
        }
    }

    #[test]
    fn quoted_fields_with_commas_and_escapes() {
        let text = "\"real gdp, chained\",\"say \"\"hi\"\"\"\n1,2\n3,4\n";
        let p = parse_csv(text, &opts()).unwrap().panel;
        assert_eq!(p.names()[0], "real gdp, chained");
        assert_eq!(p.names()[1], "say \"hi\"");
        assert_eq!(p.series(0), &[1.0, 3.0]);
        // Round trip quotes the awkward names back.
        let q = parse_csv(&p.to_csv(), &opts()).unwrap().panel;
        assert_eq!(p.names(), q.names());
        assert_eq!(p.values(), q.values());
    }

    #[test]
    fn csv_roundtrip() {
        let values = Matrix::from_cols(&[vec![1.5, -2.25, 0.125], vec![3.0, 4.0, 5.5]]).unwrap();
        let p = Panel::new(values, vec!["u".into(), "v".into()], None).unwrap();
        let text = p.to_csv();
        let q = parse_csv(&text, &opts()).unwrap().panel;
        assert_eq!(p.values(), q.values());
        assert_eq!(p.names(), q.names());
    }
}

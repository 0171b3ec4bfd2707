//! Number formatting and delimited-table helpers shared by every text output.

use crate::error::{Error, Result};

/// Formats `x` with `sig` significant digits, in the style of C's `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= sig as i32 {
        format!("{}e{}", trim_fraction(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Twelve significant digits, the precision used in every emitted file.
pub fn fmt12(x: f64) -> String {
    format_sig(x, 12)
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A TAB-separated table with `#`-prefixed header lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn header(&mut self, line: impl Into<String>) -> &mut Self {
        self.headers.push(line.into());
        self
    }

    pub fn row<I, S>(&mut self, fields: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.rows.push(fields.into_iter().map(Into::into).collect());
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for h in &self.headers {
            out.push_str("# ");
            out.push_str(h);
            out.push('\n');
        }
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Self {
        let mut table = Table::new();
        for line in text.lines() {
            let line = line.trim_end();
            if let Some(h) = line.strip_prefix('#') {
                table.headers.push(h.trim_start().to_string());
            } else if !line.is_empty() {
                table
                    .rows
                    .push(line.split('\t').map(str::to_string).collect());
            }
        }
        table
    }

    /// Reads the rows as pairs of numbers, e.g. `L<TAB>S` or `cut<TAB>S`.
    pub fn numeric_pairs(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() < 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected two TAB-separated columns".into(),
                });
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("{s:?}: {e}"),
                })
            };
            out.push((parse(&r[0])?, parse(&r[1])?));
        }
        Ok(out)
    }
}

/// Key-value report: one `key=value` per line, `#` comments allowed.
pub fn parse_key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

//! Line-based matrix files in four modes.
//!
//! ```text
//! cretan-matrix 1
//! order 3
//! mode exact                   | float | complex | group
//! omega 9/4                    | (group: modulus 3, kind gh | kind gw 4)
//! tau 2
//! method sbibd
//! param v 3
//! note free text
//! entries
//! 1 1 -1/2
//! ...
//! end
//! ```
//!
//! Exact entries use the scalar grammar, float entries plain decimals,
//! complex entries `re,im`, group entries residues with `⋆` (or `*`) for an
//! empty cell. Floats are written in shortest round-trip form.

use std::path::Path;

use num_complex::Complex64;

use crate::cretan::{ComplexLevelMatrix, GroupKind, GroupMatrix, LevelMatrix, Provenance};
use crate::error::{CretanError, Result};
use crate::scalar::{parse_scalar, Scalar};

pub const MATRIX_MAGIC: &str = "cretan-matrix";
pub const MATRIX_VERSION: &str = "1";
pub const EMPTY_SYMBOL: char = '⋆';

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixFile {
    /// Exact or float levels, depending on the matrix.
    Level(LevelMatrix),
    Complex(ComplexLevelMatrix),
    Group {
        matrix: GroupMatrix,
        provenance: Provenance,
    },
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> CretanError {
    CretanError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn write_provenance(out: &mut String, p: &Provenance) {
    out.push_str(&format!("method {}\n", p.method));
    for (k, v) in &p.params {
        out.push_str(&format!("param {k} {v}\n"));
    }
    for n in &p.notes {
        out.push_str(&format!("note {n}\n"));
    }
}

fn float_token(x: f64) -> String {
    format!("{x}")
}

impl MatrixFile {
    pub fn order(&self) -> usize {
        match self {
            MatrixFile::Level(m) => m.order(),
            MatrixFile::Complex(m) => m.order(),
            MatrixFile::Group { matrix, .. } => matrix.order(),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            MatrixFile::Level(m) if m.is_exact() => "exact",
            MatrixFile::Level(_) => "float",
            MatrixFile::Complex(_) => "complex",
            MatrixFile::Group { .. } => "group",
        }
    }

    pub fn provenance(&self) -> &Provenance {
        match self {
            MatrixFile::Level(m) => m.provenance(),
            MatrixFile::Complex(m) => m.provenance(),
            MatrixFile::Group { provenance, .. } => provenance,
        }
    }

    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut out = format!("{MATRIX_MAGIC} {MATRIX_VERSION}\norder {n}\nmode {}\n", self.mode());
        let rows: Vec<Vec<String>> = match self {
            MatrixFile::Level(m) => {
                let exact = m.is_exact();
                let tok = |s: &Scalar| if exact { s.to_string() } else { float_token(s.to_f64()) };
                out.push_str(&format!("omega {}\ntau {}\n", tok(m.omega()), m.tau()));
                (0..n).map(|i| (0..n).map(|j| tok(m.get(i, j))).collect()).collect()
            }
            MatrixFile::Complex(m) => {
                out.push_str(&format!("omega {}\ntau {}\n", float_token(m.omega()), m.tau()));
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let z = m.get(i, j);
                                format!("{},{}", float_token(z.re), float_token(z.im))
                            })
                            .collect()
                    })
                    .collect()
            }
            MatrixFile::Group { matrix, .. } => {
                out.push_str(&format!("modulus {}\n", matrix.modulus()));
                match matrix.kind() {
                    GroupKind::Gh => out.push_str("kind gh\n"),
                    GroupKind::Gw { weight } => out.push_str(&format!("kind gw {weight}\n")),
                }
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| matrix.get(i, j).map_or(EMPTY_SYMBOL.to_string(), |x| x.to_string()))
                            .collect()
                    })
                    .collect()
            }
        };
        write_provenance(&mut out, self.provenance());
        out.push_str("entries\n");
        for r in rows {
            out.push_str(&r.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<MatrixFile> {
        let lines: Vec<&str> = text.lines().map(str::trim_end).collect();
        let header = *lines.first().ok_or_else(|| perr(1, 1, "empty matrix file"))?;
        let (magic, version) = header.split_once(' ').unwrap_or((header, ""));
        if magic != MATRIX_MAGIC {
            return Err(perr(1, 1, format!("expected `{MATRIX_MAGIC}`")));
        }
        if version != MATRIX_VERSION {
            return Err(CretanError::Version(version.to_string()));
        }
        let mut h = Header::default();
        let mut i = 1;
        loop {
            let line = *lines.get(i).ok_or_else(|| perr(i + 1, 1, "unexpected end of header"))?;
            if line == "entries" {
                break;
            }
            h.field(line, i + 1)?;
            i += 1;
        }
        let entries_line = i + 1;
        let n = h.order.ok_or_else(|| perr(entries_line, 1, "missing `order`"))?;
        let mode = h.mode.clone().ok_or_else(|| perr(entries_line, 1, "missing `mode`"))?;
        let mut grid: Vec<(usize, Vec<(usize, &str)>)> = Vec::with_capacity(n);
        for r in 0..n {
            let ln = entries_line + 1 + r;
            let line = *lines
                .get(ln - 1)
                .ok_or_else(|| perr(ln, 1, format!("truncated: expected {n} rows, found {r}")))?;
            if line == "end" {
                return Err(perr(ln, 1, format!("truncated: expected {n} rows, found {r}")));
            }
            let toks = tokens(line);
            if toks.len() != n {
                return Err(perr(ln, 1, format!("expected {n} entries, found {}", toks.len())));
            }
            grid.push((ln, toks));
        }
        let end_ln = entries_line + n + 1;
        if lines.get(end_ln - 1).copied() != Some("end") {
            return Err(perr(end_ln, 1, "expected `end`"));
        }
        let prov = h.provenance.clone();
        let file = match mode.as_str() {
            "exact" | "float" => {
                let exact = mode == "exact";
                let scalar = |tok: &str, ln: usize, col: usize| -> Result<Scalar> {
                    if exact {
                        parse_scalar(tok).map_err(|(c, m)| perr(ln, col + c - 1, m))
                    } else {
                        tok.parse::<f64>()
                            .map(Scalar::float)
                            .map_err(|_| perr(ln, col, format!("bad decimal `{tok}`")))
                    }
                };
                let (oln, otok) = h.omega.ok_or_else(|| perr(entries_line, 1, "missing `omega`"))?;
                let omega = scalar(otok, oln, 7)?;
                let mut entries = Vec::with_capacity(n * n);
                for (ln, toks) in &grid {
                    for &(col, tok) in toks {
                        entries.push(scalar(tok, *ln, col)?);
                    }
                }
                MatrixFile::Level(LevelMatrix::from_entries(n, &entries, omega, prov)?)
            }
            "complex" => {
                let (oln, otok) = h.omega.ok_or_else(|| perr(entries_line, 1, "missing `omega`"))?;
                let omega: f64 = otok.parse().map_err(|_| perr(oln, 7, "bad omega"))?;
                let mut entries = Vec::with_capacity(n * n);
                for (ln, toks) in &grid {
                    for &(col, tok) in toks {
                        let bad = || perr(*ln, col, format!("expected `re,im`, found `{tok}`"));
                        let (re, im) = tok.split_once(',').ok_or_else(bad)?;
                        entries.push(Complex64::new(
                            re.parse().map_err(|_| bad())?,
                            im.parse().map_err(|_| bad())?,
                        ));
                    }
                }
                MatrixFile::Complex(ComplexLevelMatrix::new(n, entries, omega, prov)?)
            }
            "group" => {
                let modulus = h.modulus.ok_or_else(|| perr(entries_line, 1, "missing `modulus`"))?;
                let kind = h.kind.ok_or_else(|| perr(entries_line, 1, "missing `kind`"))?;
                let mut entries = Vec::with_capacity(n * n);
                for (ln, toks) in &grid {
                    for &(col, tok) in toks {
                        entries.push(if tok == "⋆" || tok == "*" {
                            None
                        } else {
                            Some(
                                tok.parse::<u32>()
                                    .map_err(|_| perr(*ln, col, format!("bad group symbol `{tok}`")))?,
                            )
                        });
                    }
                }
                MatrixFile::Group {
                    matrix: GroupMatrix::new(n, modulus, entries, kind)?,
                    provenance: prov,
                }
            }
            other => return Err(perr(h.mode_line, 6, format!("unknown mode `{other}`"))),
        };
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<MatrixFile> {
        let text = std::fs::read_to_string(path).map_err(|e| CretanError::Io(format!("{}: {e}", path.display())))?;
        MatrixFile::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| CretanError::Io(format!("{}: {e}", path.display())))
    }
}

/// Tokens with 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (b, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, b)),
            (true, Some((sc, sb))) => {
                out.push((sc, &line[sb..b]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((sc, sb)) = start {
        out.push((sc, &line[sb..]));
    }
    out
}

#[derive(Default)]
struct Header<'a> {
    order: Option<usize>,
    mode: Option<String>,
    mode_line: usize,
    omega: Option<(usize, &'a str)>,
    modulus: Option<u32>,
    kind: Option<GroupKind>,
    provenance: Provenance,
}

impl<'a> Header<'a> {
    fn field(&mut self, line: &'a str, ln: usize) -> Result<()> {
        let (key, value) = line.split_once(' ').unwrap_or((line, ""));
        let vcol = key.chars().count() + 2;
        let num = |what: &str| -> Result<usize> {
            value
                .trim()
                .parse()
                .map_err(|_| perr(ln, vcol, format!("bad {what} `{value}`")))
        };
        match key {
            "order" => self.order = Some(num("order")?),
            "mode" => {
                self.mode = Some(value.to_string());
                self.mode_line = ln;
            }
            "omega" => self.omega = Some((ln, value.trim())),
            // Informational; recomputed from the entries.
            "tau" => {
                num("tau")?;
            }
            "modulus" => self.modulus = Some(num("modulus")? as u32),
            "kind" => {
                self.kind = Some(match value.split_whitespace().collect::<Vec<_>>().as_slice() {
                    ["gh"] => GroupKind::Gh,
                    ["gw", w] => GroupKind::Gw {
                        weight: w.parse().map_err(|_| perr(ln, vcol + 3, "bad weight"))?,
                    },
                    _ => return Err(perr(ln, vcol, format!("unknown kind `{value}`"))),
                })
            }
            "method" => self.provenance.method = value.to_string(),
            "param" => {
                let (k, v) = value.split_once(' ').unwrap_or((value, ""));
                self.provenance.params.push((k.to_string(), v.to_string()));
            }
            "note" => self.provenance.notes.push(value.to_string()),
            "" => {}
            _ => return Err(perr(ln, 1, format!("unknown field `{key}`"))),
        }
        Ok(())
    }
}

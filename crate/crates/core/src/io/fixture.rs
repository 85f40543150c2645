//! Fixture files: externally sourced difference sets and sign matrices.
//!
//! ```text
//! cretan-fixture 1
//! kind difference-set          | kind sign-matrix
//! name 45-12-3
//! group 3 3 5                  | order 4
//! params 45 12 3
//! source <free text>
//! elements                     | rows
//! 0 0 0                        | -+++
//! ...
//! end
//! ```
//!
//! Difference-set elements are coordinate tuples in the direct product of
//! the listed cyclic factors (a single integer for a cyclic group). Sign
//! matrix rows use `+`, `-` and `0`. Loaders re-validate everything.

use std::path::{Path, PathBuf};

use crate::error::{CretanError, Result};

pub const FIXTURE_MAGIC: &str = "cretan-fixture";
pub const FIXTURE_VERSION: &str = "1";
/// Environment variable naming a directory that replaces the built-in fixtures.
pub const FIXTURE_DIR_ENV: &str = "CRETAN_FIXTURE_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("45-12-3", include_str!("../../data/45-12-3.fix")),
    ("133-33-8", include_str!("../../data/133-33-8.fix")),
    ("36-15-6", include_str!("../../data/36-15-6.fix")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureBody {
    DifferenceSet {
        group: Vec<u64>,
        params: (u64, u64, u64),
        elements: Vec<Vec<u64>>,
    },
    SignMatrix {
        order: usize,
        rows: Vec<Vec<i8>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureFile {
    pub name: String,
    pub source: String,
    pub body: FixtureBody,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> CretanError {
    CretanError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_u64s(text: &str, line: usize, col0: usize) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut col = col0;
    for tok in text.split(' ') {
        if !tok.is_empty() {
            out.push(
                tok.parse()
                    .map_err(|_| perr(line, col, format!("expected an integer, found `{tok}`")))?,
            );
        }
        col += tok.len() + 1;
    }
    Ok(out)
}

impl FixtureFile {
    pub fn parse(text: &str) -> Result<FixtureFile> {
        let lines: Vec<&str> = text.lines().collect();
        let get = |i: usize| lines.get(i).map(|l| l.trim_end());
        let header = get(0).ok_or_else(|| perr(1, 1, "empty fixture"))?;
        let (magic, version) = header.split_once(' ').unwrap_or((header, ""));
        if magic != FIXTURE_MAGIC {
            return Err(perr(1, 1, format!("expected `{FIXTURE_MAGIC}`")));
        }
        if version != FIXTURE_VERSION {
            return Err(CretanError::Version(version.to_string()));
        }
        let mut kind = None;
        let mut name = String::new();
        let mut source = String::new();
        let mut group = None;
        let mut params = None;
        let mut order = None;
        let mut i = 1;
        loop {
            let line = get(i).ok_or_else(|| perr(i + 1, 1, "unexpected end of fixture header"))?;
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            let vcol = key.len() + 2;
            match key {
                "kind" => kind = Some(value.to_string()),
                "name" => name = value.to_string(),
                "source" => source = value.to_string(),
                "group" => group = Some(parse_u64s(value, i + 1, vcol)?),
                "params" => {
                    let p = parse_u64s(value, i + 1, vcol)?;
                    if p.len() != 3 {
                        return Err(perr(i + 1, vcol, "params needs v k lambda"));
                    }
                    params = Some((p[0], p[1], p[2]));
                }
                "order" => order = Some(value.parse::<usize>().map_err(|_| perr(i + 1, vcol, "bad order"))?),
                "elements" | "rows" => break,
                "" => {}
                other => return Err(perr(i + 1, 1, format!("unknown key `{other}`"))),
            }
            i += 1;
        }
        let body_start = i + 1;
        let mut body_lines = Vec::new();
        let mut j = body_start;
        loop {
            let line = get(j).ok_or_else(|| perr(j + 1, 1, "missing `end`"))?;
            if line == "end" {
                break;
            }
            body_lines.push((j + 1, line));
            j += 1;
        }
        let body = match kind.as_deref() {
            Some("difference-set") => {
                let group = group.ok_or_else(|| perr(2, 1, "missing `group`"))?;
                let params = params.ok_or_else(|| perr(2, 1, "missing `params`"))?;
                let mut elements = Vec::new();
                for (ln, line) in body_lines {
                    let coords = parse_u64s(line, ln, 1)?;
                    if coords.len() != group.len() {
                        return Err(perr(ln, 1, format!("expected {} coordinates", group.len())));
                    }
                    elements.push(coords);
                }
                FixtureBody::DifferenceSet {
                    group,
                    params,
                    elements,
                }
            }
            Some("sign-matrix") => {
                let order = order.ok_or_else(|| perr(2, 1, "missing `order`"))?;
                let mut rows = Vec::new();
                for (ln, line) in body_lines {
                    let row = line
                        .chars()
                        .enumerate()
                        .map(|(c, ch)| match ch {
                            '+' => Ok(1),
                            '-' => Ok(-1),
                            '0' => Ok(0),
                            _ => Err(perr(ln, c + 1, format!("bad sign `{ch}`"))),
                        })
                        .collect::<Result<Vec<i8>>>()?;
                    if row.len() != order {
                        return Err(perr(ln, 1, format!("expected {order} entries")));
                    }
                    rows.push(row);
                }
                if rows.len() != order {
                    return Err(perr(j + 1, 1, format!("expected {order} rows")));
                }
                FixtureBody::SignMatrix { order, rows }
            }
            Some(other) => return Err(perr(2, 6, format!("unknown fixture kind `{other}`"))),
            None => return Err(perr(2, 1, "missing `kind`")),
        };
        Ok(FixtureFile { name, source, body })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{FIXTURE_MAGIC} {FIXTURE_VERSION}\n");
        match &self.body {
            FixtureBody::DifferenceSet {
                group,
                params,
                elements,
            } => {
                s.push_str("kind difference-set\n");
                s.push_str(&format!("name {}\n", self.name));
                s.push_str(&format!("group {}\n", join(group)));
                s.push_str(&format!("params {} {} {}\n", params.0, params.1, params.2));
                s.push_str(&format!("source {}\n", self.source));
                s.push_str("elements\n");
                for e in elements {
                    s.push_str(&join(e));
                    s.push('\n');
                }
            }
            FixtureBody::SignMatrix { order, rows } => {
                s.push_str("kind sign-matrix\n");
                s.push_str(&format!("name {}\n", self.name));
                s.push_str(&format!("order {order}\n"));
                s.push_str(&format!("source {}\n", self.source));
                s.push_str("rows\n");
                for r in rows {
                    s.extend(r.iter().map(|&x| match x {
                        1 => '+',
                        -1 => '-',
                        _ => '0',
                    }));
                    s.push('\n');
                }
            }
        }
        s.push_str("end\n");
        s
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Where fixtures come from: the embedded set, a directory, or nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureStore {
    Builtin,
    Dir(PathBuf),
    Empty,
}

impl FixtureStore {
    /// The directory in `CRETAN_FIXTURE_DIR` if set, the embedded set otherwise.
    pub fn from_env() -> Self {
        match std::env::var_os(FIXTURE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => FixtureStore::Dir(PathBuf::from(dir)),
            _ => FixtureStore::Builtin,
        }
    }

    pub fn from_dir(dir: impl AsRef<Path>) -> Self {
        FixtureStore::Dir(dir.as_ref().to_path_buf())
    }

    /// Raw text of fixture `name`, if present.
    pub fn text(&self, name: &str) -> Result<Option<String>> {
        match self {
            FixtureStore::Builtin => Ok(BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, t)| t.to_string())),
            FixtureStore::Dir(dir) => {
                let path = dir.join(format!("{name}.fix"));
                match std::fs::read_to_string(&path) {
                    Ok(t) => Ok(Some(t)),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
                    Err(e) => Err(e.into()),
                }
            }
            FixtureStore::Empty => Ok(None),
        }
    }

    pub fn get(&self, name: &str) -> Result<Option<FixtureFile>> {
        self.text(name)?.map(|t| FixtureFile::parse(&t)).transpose()
    }

    pub fn has(&self, name: &str) -> bool {
        matches!(self.text(name), Ok(Some(_)))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixtures_parse() {
        for name in FixtureStore::builtin_names() {
            let f = FixtureStore::Builtin.get(name).unwrap().unwrap();
            assert_eq!(f.name, name);
            assert_eq!(FixtureFile::parse(&f.to_text()).unwrap(), f);
        }
        assert!(FixtureStore::Empty.get("45-12-3").unwrap().is_none());
        assert!(!FixtureStore::Builtin.has("100-45-20"));
    }

    #[test]
    fn sign_matrix_fixture() {
        let text =
            "cretan-fixture 1\nkind sign-matrix\nname h4\norder 4\nsource seed\nrows\n-+++\n+-++\n++-+\n+++-\nend\n";
        let f = FixtureFile::parse(text).unwrap();
        assert_eq!(f.to_text(), text);
        let FixtureBody::SignMatrix { rows, .. } = &f.body else {
            panic!()
        };
        assert_eq!(rows[0], vec![-1, 1, 1, 1]);
    }

    #[test]
    fn errors_carry_locations() {
        let bad = "cretan-fixture 1\nkind difference-set\nname x\ngroup 7\nparams 7 3 1\nelements\n1\n2\nq\nend\n";
        assert_eq!(
            FixtureFile::parse(bad).unwrap_err(),
            CretanError::Parse {
                line: 9,
                column: 1,
                message: "expected an integer, found `q`".into()
            }
        );
        let truncated = "cretan-fixture 1\nkind difference-set\nname x\ngroup 7\nparams 7 3 1\nelements\n1\n";
        assert!(matches!(
            FixtureFile::parse(truncated),
            Err(CretanError::Parse { line: 8, .. })
        ));
        assert_eq!(
            FixtureFile::parse("cretan-fixture 2\n").unwrap_err(),
            CretanError::Version("2".into())
        );
    }

    #[test]
    fn directory_store() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::from_dir(dir.path());
        assert!(store.get("45-12-3").unwrap().is_none());
        std::fs::write(
            dir.path().join("45-12-3.fix"),
            FixtureStore::Builtin.text("45-12-3").unwrap().unwrap(),
        )
        .unwrap();
        assert!(store.has("45-12-3"));
    }
}

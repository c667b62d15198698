//! JSON input files. Indices and colorings are 1-based on the wire.
//!
//! Matrix entries are integers or `"p/q"` strings in lowest terms; float
//! literals are rejected since they are not exact.

use std::path::Path;

use serde_json::{Map, Value};
use synclat::networks::{Arrow, ColoredNetwork, GroupTable, IncidenceStructure};
use synclat::{parse_rational, rational, MatrixFamily, Partition, Rational, RationalMatrix};

use crate::error::{CliError, FieldPath};

/// A parsed JSON document and the name used in diagnostics.
pub struct Source {
    file: String,
    value: Value,
}

impl Source {
    pub fn load(path: &Path) -> Result<Source, CliError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
            file: file.clone(),
            location: "file".into(),
            message: e.to_string(),
        })?;
        Source::from_str(&file, &text)
    }

    pub fn from_str(file: &str, text: &str) -> Result<Source, CliError> {
        let value = serde_json::from_str(text).map_err(|e| CliError::Input {
            file: file.to_string(),
            location: format!("line {} column {}", e.line(), e.column()),
            message: strip_position(&e.to_string()),
        })?;
        Ok(Source { file: file.to_string(), value })
    }

    fn err(&self, at: &FieldPath, message: impl Into<String>) -> CliError {
        CliError::Input {
            file: self.file.clone(),
            location: at.to_string(),
            message: message.into(),
        }
    }

    fn object<'a>(&self, v: &'a Value, at: &FieldPath, allowed: &[&str]) -> Result<&'a Map<String, Value>, CliError> {
        let obj = v.as_object().ok_or_else(|| self.err(at, "expected an object"))?;
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(self.err(at, format!("unknown field {k:?}, expected one of {allowed:?}")));
        }
        Ok(obj)
    }

    fn field<'a>(&self, obj: &'a Map<String, Value>, key: &'static str, at: &FieldPath) -> Result<&'a Value, CliError> {
        obj.get(key).ok_or_else(|| self.err(at, format!("missing field {key:?}")))
    }

    fn array<'a>(&self, v: &'a Value, at: &FieldPath) -> Result<&'a [Value], CliError> {
        v.as_array().map(Vec::as_slice).ok_or_else(|| self.err(at, "expected an array"))
    }

    fn count(&self, v: &Value, at: &FieldPath) -> Result<usize, CliError> {
        v.as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| self.err(at, format!("expected a nonnegative integer, got {v}")))
    }

    /// A 1-based index in `1..=max`, returned 0-based.
    fn index(&self, v: &Value, max: usize, at: &FieldPath) -> Result<usize, CliError> {
        match v.as_u64() {
            Some(x) if x >= 1 && x <= max as u64 => Ok(x as usize - 1),
            _ => Err(self.err(at, format!("expected an index in 1..={max}, got {v}"))),
        }
    }

    fn entry(&self, v: &Value, at: &FieldPath) -> Result<Rational, CliError> {
        match v {
            Value::Number(x) => {
                if let Some(i) = x.as_i64() {
                    Ok(rational(i))
                } else if x.is_u64() {
                    parse_rational(&x.to_string()).map_err(|e| self.err(at, e.to_string()))
                } else {
                    Err(self.err(at, format!("float literal {x} is not exact; write it as a \"p/q\" string")))
                }
            }
            Value::String(s) => parse_rational(s).map_err(|e| self.err(at, e.to_string())),
            _ => Err(self.err(at, format!("expected an integer or a \"p/q\" string, got {v}"))),
        }
    }

    fn rows(&self, v: &Value, at: &FieldPath) -> Result<Vec<Vec<Rational>>, CliError> {
        self.array(v, at)?
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let at = at.index(i);
                self.array(row, &at)?
                    .iter()
                    .enumerate()
                    .map(|(j, e)| self.entry(e, &at.index(j)))
                    .collect()
            })
            .collect()
    }

    fn matrix_at(&self, v: &Value, at: &FieldPath) -> Result<RationalMatrix, CliError> {
        let obj = self.object(v, at, &["rows", "cols", "entries"])?;
        let rows = self.count(self.field(obj, "rows", at)?, &at.key("rows"))?;
        let cols = self.count(self.field(obj, "cols", at)?, &at.key("cols"))?;
        let at_entries = at.key("entries");
        let entries = self.rows(self.field(obj, "entries", at)?, &at_entries)?;
        if entries.len() != rows {
            return Err(self.err(&at_entries, format!("has {} rows, \"rows\" says {rows}", entries.len())));
        }
        if let Some(i) = entries.iter().position(|r| r.len() != cols) {
            return Err(self.err(
                &at_entries.index(i),
                format!("has {} entries, \"cols\" says {cols}", entries[i].len()),
            ));
        }
        RationalMatrix::from_rows(entries).map_err(|e| self.err(at, e.to_string()))
    }

    /// One matrix object.
    pub fn matrix(&self) -> Result<RationalMatrix, CliError> {
        self.matrix_at(&self.value, &FieldPath::default())
    }

    /// A matrix object, an array of them, or `{"matrices": [...]}`.
    pub fn family(&self) -> Result<MatrixFamily, CliError> {
        let root = FieldPath::default();
        let (items, at) = match &self.value {
            Value::Array(items) => (items.as_slice(), root),
            Value::Object(obj) if obj.contains_key("matrices") => {
                let obj = self.object(&self.value, &root, &["matrices"])?;
                let at = root.key("matrices");
                (self.array(&obj["matrices"], &at)?, at)
            }
            v => return Ok(MatrixFamily::single(self.matrix_at(v, &root)?)),
        };
        let ms = items
            .iter()
            .enumerate()
            .map(|(i, m)| self.matrix_at(m, &at.index(i)))
            .collect::<Result<Vec<_>, _>>()?;
        MatrixFamily::new(ms).map_err(|e| self.err(&at, e.to_string()))
    }

    fn coloring(&self, v: &Value, n: usize, at: &FieldPath) -> Result<Partition, CliError> {
        let items = self.array(v, at)?;
        if items.len() != n {
            return Err(self.err(at, format!("has {} entries, expected {n}", items.len())));
        }
        let labels = items
            .iter()
            .enumerate()
            .map(|(i, c)| self.index(c, n, &at.index(i)).map(|c| c as u32))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::from_labels(&labels).map_err(|e| self.err(at, e.to_string()))
    }

    /// `{"n", "cell_types"?, "colors"?, "arrows": [{"from", "to", "color"?}]}`.
    pub fn network(&self) -> Result<ColoredNetwork, CliError> {
        let root = FieldPath::default();
        let obj = self.object(&self.value, &root, &["n", "cell_types", "colors", "arrows"])?;
        let n = self.count(self.field(obj, "n", &root)?, &root.key("n"))?;
        if n == 0 {
            return Err(self.err(&root.key("n"), "a network needs at least one cell"));
        }
        let types = match obj.get("cell_types") {
            Some(v) => self.coloring(v, n, &root.key("cell_types"))?,
            None => Partition::singleton(n),
        };
        let at_arrows = root.key("arrows");
        let raw = self.array(self.field(obj, "arrows", &root)?, &at_arrows)?;
        let mut arrows = Vec::with_capacity(raw.len());
        let mut top_color = 1;
        for (k, a) in raw.iter().enumerate() {
            let at = at_arrows.index(k);
            let fields = self.object(a, &at, &["from", "to", "color"])?;
            let from = self.index(self.field(fields, "from", &at)?, n, &at.key("from"))?;
            let to = self.index(self.field(fields, "to", &at)?, n, &at.key("to"))?;
            let color = match fields.get("color") {
                Some(c) => self.index(c, usize::MAX, &at.key("color"))?,
                None => 0,
            };
            top_color = top_color.max(color + 1);
            arrows.push(Arrow { from, to, color });
        }
        let colors = match obj.get("colors") {
            Some(v) => {
                let c = self.count(v, &root.key("colors"))?;
                if c < top_color {
                    return Err(self.err(&root.key("colors"), format!("is {c} but an arrow has color {top_color}")));
                }
                c
            }
            None => top_color,
        };
        ColoredNetwork::new(types, colors, arrows).map_err(|e| self.err(&root, e.to_string()))
    }

    /// A simple graph: a symmetric 0/1 matrix object, or `{"n", "edges": [[u, v], ...]}`.
    pub fn graph(&self) -> Result<RationalMatrix, CliError> {
        let root = FieldPath::default();
        let is_edges = self.value.as_object().is_some_and(|o| o.contains_key("edges"));
        if !is_edges {
            return self.matrix();
        }
        let obj = self.object(&self.value, &root, &["n", "edges"])?;
        let n = self.count(self.field(obj, "n", &root)?, &root.key("n"))?;
        if n == 0 {
            return Err(self.err(&root.key("n"), "a graph needs at least one vertex"));
        }
        let mut a = RationalMatrix::zeros(n, n).map_err(|e| self.err(&root, e.to_string()))?;
        let at_edges = root.key("edges");
        for (k, e) in self.array(&obj["edges"], &at_edges)?.iter().enumerate() {
            let at = at_edges.index(k);
            let ends = self.array(e, &at)?;
            if ends.len() != 2 {
                return Err(self.err(&at, "an edge has two endpoints"));
            }
            let u = self.index(&ends[0], n, &at.index(0))?;
            let v = self.index(&ends[1], n, &at.index(1))?;
            if u == v {
                return Err(self.err(&at, "loops are not allowed in a simple graph"));
            }
            a.set(u, v, rational(1));
            a.set(v, u, rational(1));
        }
        Ok(a)
    }

    /// `{"order", "table", "generators"?}` with 1-based element numbers.
    pub fn group(&self) -> Result<(GroupTable, Option<Vec<usize>>), CliError> {
        let root = FieldPath::default();
        let obj = self.object(&self.value, &root, &["order", "table", "generators"])?;
        let order = self.count(self.field(obj, "order", &root)?, &root.key("order"))?;
        let at_table = root.key("table");
        let rows = self.array(self.field(obj, "table", &root)?, &at_table)?;
        if rows.len() != order {
            return Err(self.err(&at_table, format!("has {} rows, \"order\" says {order}", rows.len())));
        }
        let mut table = Vec::with_capacity(order);
        for (i, row) in rows.iter().enumerate() {
            let at = at_table.index(i);
            let items = self.array(row, &at)?;
            if items.len() != order {
                return Err(self.err(&at, format!("has {} entries, expected {order}", items.len())));
            }
            let row = items
                .iter()
                .enumerate()
                .map(|(j, x)| self.index(x, order, &at.index(j)))
                .collect::<Result<Vec<_>, _>>()?;
            table.push(row);
        }
        let group = GroupTable::new(table).map_err(|e| self.err(&at_table, e.to_string()))?;
        let gens = match obj.get("generators") {
            Some(v) => {
                let at = root.key("generators");
                let gens = self
                    .array(v, &at)?
                    .iter()
                    .enumerate()
                    .map(|(i, g)| self.index(g, order, &at.index(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(gens)
            }
            None => None,
        };
        Ok((group, gens))
    }

    /// `{"points", "lines", "matrices": [[[0/1, ...], ...], ...]}`.
    pub fn incidence(&self) -> Result<IncidenceStructure, CliError> {
        let root = FieldPath::default();
        let obj = self.object(&self.value, &root, &["points", "lines", "matrices"])?;
        let points = self.count(self.field(obj, "points", &root)?, &root.key("points"))?;
        let lines = self.count(self.field(obj, "lines", &root)?, &root.key("lines"))?;
        let at_ms = root.key("matrices");
        let ms = self
            .array(self.field(obj, "matrices", &root)?, &at_ms)?
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let at = at_ms.index(k);
                let rows = self.rows(m, &at)?;
                if rows.len() != points || rows.iter().any(|r| r.len() != lines) {
                    return Err(self.err(&at, format!("expected a {points}x{lines} array")));
                }
                RationalMatrix::from_rows(rows).map_err(|e| self.err(&at, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IncidenceStructure::new(points, lines, ms).map_err(|e| self.err(&root, e.to_string()))
    }
}

// serde_json appends " at line L column C", which the location already says
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

//! The text format for Coxeter systems.
//!
//! Two forms are accepted. The matrix form gives the rank and then the strict
//! upper triangle row by row:
//!
//! ```text
//! matrix 3
//! 3 inf
//! 4
//! ```
//!
//! The diagram form names the generators and lists the edges; unlisted pairs
//! commute.
//!
//! ```text
//! vertices s t u
//! edge s t inf
//! edge t u 3
//! ```
//!
//! Statements end at a newline or `;`, and `#` starts a comment.

use std::collections::HashMap;
use std::fmt;

use crate::coxeter::{CoxeterMatrix, Label};

/// Ranks above this are rejected before anything is allocated.
pub const MAX_RANK: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

/// A statement is the tokens between separators. `end` is where a missing
/// token would have been.
#[derive(Debug)]
struct Statement<'a> {
    tokens: Vec<Token<'a>>,
    end: Pos,
}

fn statements(src: &str) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut base = 0;
        for piece in line.split(';') {
            let mut tokens = Vec::new();
            let mut offset = 0;
            for word in piece.split_whitespace() {
                // split_whitespace keeps order, so searching forward is exact
                let at = offset + piece[offset..].find(word).expect("word comes from piece");
                offset = at + word.len();
                tokens.push(Token {
                    text: word,
                    pos: Pos {
                        line: ln + 1,
                        column: line[..base + at].chars().count() + 1,
                    },
                });
            }
            let end = Pos {
                line: ln + 1,
                column: line[..base + piece.len()].chars().count() + 1,
            };
            if !tokens.is_empty() {
                out.push(Statement { tokens, end });
            }
            base += piece.len() + 1;
        }
    }
    out
}

fn error(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

/// Matrix entries: integers of at least 2, or `inf`.
fn parse_label(tok: &Token<'_>) -> Result<Label, ParseError> {
    if tok.text == "inf" {
        return Ok(Label::Infinity);
    }
    if !tok.text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(error(tok.pos, format!("expected a label (integer or `inf`), found `{}`", tok.text)));
    }
    let v: u32 = tok
        .text
        .parse()
        .map_err(|_| error(tok.pos, format!("label `{}` is too large", tok.text)))?;
    if v < 2 {
        return Err(error(tok.pos, format!("label {v} is below 2")));
    }
    Ok(Label::Finite(v))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse(src: &str) -> Result<CoxeterMatrix, ParseError> {
    let stmts = statements(src);
    let Some(first) = stmts.first() else {
        return Err(error(Pos { line: 1, column: 1 }, "empty input: expected `matrix` or `vertices`"));
    };
    match first.tokens[0].text {
        "matrix" => parse_matrix(&stmts),
        "vertices" => parse_diagram(&stmts),
        other => Err(error(
            first.tokens[0].pos,
            format!("expected `matrix` or `vertices`, found `{other}`"),
        )),
    }
}

fn parse_matrix(stmts: &[Statement<'_>]) -> Result<CoxeterMatrix, ParseError> {
    let header = &stmts[0];
    let n_tok = header
        .tokens
        .get(1)
        .ok_or_else(|| error(header.end, "expected the rank after `matrix`"))?;
    if let Some(extra) = header.tokens.get(2) {
        return Err(error(extra.pos, format!("unexpected `{}` after the rank", extra.text)));
    }
    let n = match n_tok.text.parse::<usize>() {
        Ok(n) if n.to_string() == n_tok.text => n,
        _ => return Err(error(n_tok.pos, format!("expected a rank, found `{}`", n_tok.text))),
    };
    if n == 0 {
        return Err(error(n_tok.pos, "rank must be at least 1"));
    }
    if n > MAX_RANK {
        return Err(error(n_tok.pos, format!("rank {n} exceeds the maximum of {MAX_RANK}")));
    }
    let rows = &stmts[1..];
    if rows.len() > n - 1 {
        return Err(error(rows[n - 1].tokens[0].pos, format!("a rank {n} matrix has {} rows", n - 1)));
    }
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n - 1 {
        let want = n - 1 - i;
        let Some(row) = rows.get(i) else {
            let at = rows.last().map_or(header.end, |r| r.end);
            return Err(error(at, format!("missing row {} of the upper triangle", i + 1)));
        };
        if row.tokens.len() != want {
            let at = row.tokens.get(want).map_or(row.end, |t| t.pos);
            return Err(error(
                at,
                format!("row {} needs {want} entries, found {}", i + 1, row.tokens.len()),
            ));
        }
        for tok in &row.tokens {
            upper.push(parse_label(tok)?);
        }
    }
    Ok(CoxeterMatrix::from_upper_triangle(n, &upper))
}

fn parse_diagram(stmts: &[Statement<'_>]) -> Result<CoxeterMatrix, ParseError> {
    let header = &stmts[0];
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for tok in &header.tokens[1..] {
        if !is_identifier(tok.text) {
            return Err(error(tok.pos, format!("`{}` is not a valid vertex name", tok.text)));
        }
        if index.insert(tok.text, names.len()).is_some() {
            return Err(error(tok.pos, format!("vertex `{}` declared twice", tok.text)));
        }
        if names.len() == MAX_RANK {
            return Err(error(tok.pos, format!("more than {MAX_RANK} vertices")));
        }
        names.push(tok.text.to_string());
    }
    if names.is_empty() {
        return Err(error(header.end, "expected at least one vertex name"));
    }
    let mut edges: Vec<(usize, usize, Label)> = Vec::new();
    let mut seen: HashMap<(usize, usize), Pos> = HashMap::new();
    for st in &stmts[1..] {
        let kw = &st.tokens[0];
        match kw.text {
            "edge" => {}
            "vertices" => return Err(error(kw.pos, "vertices already declared")),
            other => return Err(error(kw.pos, format!("expected `edge`, found `{other}`"))),
        }
        let get = |i: usize, what: &str| st.tokens.get(i).ok_or_else(|| error(st.end, format!("expected {what}")));
        let a = get(1, "a vertex name")?;
        let b = get(2, "a second vertex name")?;
        let m = get(3, "an edge label")?;
        if let Some(extra) = st.tokens.get(4) {
            return Err(error(extra.pos, format!("unexpected `{}` after the label", extra.text)));
        }
        let lookup = |t: &Token<'_>| {
            index
                .get(t.text)
                .copied()
                .ok_or_else(|| error(t.pos, format!("unknown vertex `{}`", t.text)))
        };
        let (s, t) = (lookup(a)?, lookup(b)?);
        if s == t {
            return Err(error(b.pos, format!("self-edge on `{}`", a.text)));
        }
        let label = parse_label(m)?;
        if label == Label::Finite(2) {
            return Err(error(m.pos, "edge label must be at least 3; unlisted pairs already commute"));
        }
        let key = (s.min(t), s.max(t));
        if let Some(prev) = seen.insert(key, a.pos) {
            return Err(error(
                a.pos,
                format!(
                    "duplicate edge `{}`-`{}` (first given at {}:{})",
                    a.text, b.text, prev.line, prev.column
                ),
            ));
        }
        edges.push((s, t, label));
    }
    Ok(CoxeterMatrix::from_edges(names.len(), &edges).with_names(names))
}

/// Writes `m` in the text format. Named matrices use the diagram form.
/// `parse(&render(m))` gives back `m`.
pub fn render(m: &CoxeterMatrix) -> String {
    let n = m.rank();
    let mut out = String::new();
    match m.names() {
        Some(names) => {
            out.push_str("vertices");
            for name in names {
                out.push(' ');
                out.push_str(name);
            }
            out.push('\n');
            for (s, t, l) in m.diagram().edges {
                out.push_str(&format!("edge {} {} {l}\n", names[s], names[t]));
            }
        }
        None => {
            out.push_str(&format!("matrix {n}\n"));
            for s in 0..n.saturating_sub(1) {
                let row: Vec<String> = (s + 1..n).map(|t| m.label(s, t).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
    }
    out
}

/// Whether every name can be written back in the diagram form.
pub fn names_are_renderable(names: &[String]) -> bool {
    let mut seen = std::collections::HashSet::new();
    names.iter().all(|n| is_identifier(n) && seen.insert(n.as_str()))
}

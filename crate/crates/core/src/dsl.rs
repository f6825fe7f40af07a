//! Text formats: systems, words and families.
//!
//! A system file starts with `sets <r>`, may set `mode partition|family`, and
//! then lists statements such as `A1 A2 ~ A1 A3` (congruence) or `A1 < 2`
//! (subcongruence). Chains like `A1 ~ A2 ~ A3` expand to adjacent pairs.
//! `#` starts a comment.
//!
//! Words are letters `a..z` (generators 1..26) and `A..Z` (inverses), written
//! compactly or separated by whitespace; `[k]` and `[-k]` name any generator.
//! The whole input `e` is the identity.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::finite::{FiniteFamily, Space};
use crate::freegroup::{CosetSpace, Word};
use crate::system::{CongruenceSystem, IndexSet, Mode, Relation, Statement};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Tok<'a> {
    Name(&'a str),
    Op(Relation),
}

/// Splits a line into names and operators, with 1-based columns.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<(usize, Tok<'_>)>> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let column = line[..i].chars().count() + 1;
        if c.is_whitespace() {
            chars.next();
        } else if c == '~' {
            chars.next();
            out.push((column, Tok::Op(Relation::Congruence)));
        } else if c == '<' {
            chars.next();
            out.push((column, Tok::Op(Relation::Subcongruence)));
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((column, Tok::Name(&line[start..end])));
        } else {
            return Err(parse_err(
                lineno,
                column,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    Ok(out)
}

fn set_index(name: &str, r: usize, line: usize, column: usize) -> Result<usize> {
    let digits = name.strip_prefix('A').unwrap_or(name);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::UnknownSetName {
            name: name.into(),
            line,
            column,
        });
    }
    let k: usize = digits
        .parse()
        .map_err(|_| parse_err(line, column, format!("set index `{digits}` is too large")))?;
    if k == 0 {
        return Err(Error::UnknownSetName {
            name: name.into(),
            line,
            column,
        });
    }
    if k > r {
        return Err(Error::IndexOutOfRange { index: k, r });
    }
    Ok(k)
}

pub fn parse_system(text: &str) -> Result<CongruenceSystem> {
    let mut r: Option<usize> = None;
    let mut mode = Mode::Partition;
    let mut mode_seen = false;
    let mut statements = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokenize(line, lineno)?;
        let Some((col0, first)) = toks.first() else {
            continue;
        };
        let Some(r) = r else {
            match (first, toks.get(1), toks.len()) {
                (Tok::Name("sets"), Some((col, Tok::Name(count))), 2) => {
                    let value: usize = count.parse().map_err(|_| {
                        parse_err(
                            lineno,
                            *col,
                            format!("expected a set count, found `{count}`"),
                        )
                    })?;
                    if value == 0 {
                        return Err(parse_err(lineno, *col, "a system needs at least one set"));
                    }
                    r = Some(value);
                    continue;
                }
                _ => return Err(parse_err(lineno, *col0, "expected `sets <r>` first")),
            }
        };
        if let Tok::Name("mode") = first {
            if mode_seen || !statements.is_empty() {
                return Err(parse_err(
                    lineno,
                    *col0,
                    "`mode` must come once, before the statements",
                ));
            }
            mode = match toks.get(1) {
                Some((_, Tok::Name("partition"))) if toks.len() == 2 => Mode::Partition,
                Some((_, Tok::Name("family"))) if toks.len() == 2 => Mode::Family,
                _ => {
                    return Err(parse_err(
                        lineno,
                        *col0,
                        "expected `mode partition` or `mode family`",
                    ))
                }
            };
            mode_seen = true;
            continue;
        }
        // A chain of sides separated by operators.
        let mut sides: Vec<(usize, IndexSet)> = vec![(*col0, IndexSet::EMPTY)];
        let mut ops: Vec<Relation> = Vec::new();
        for (col, tok) in &toks {
            match tok {
                Tok::Name(name) => {
                    let k = set_index(name, r, lineno, *col)?;
                    let side = &mut sides.last_mut().expect("nonempty").1;
                    *side = side.with(k);
                }
                Tok::Op(rel) => {
                    ops.push(*rel);
                    sides.push((*col, IndexSet::EMPTY));
                }
            }
        }
        if ops.is_empty() {
            return Err(parse_err(
                lineno,
                *col0,
                "expected `~` or `<` in a statement",
            ));
        }
        if let Some((col, _)) = sides.iter().find(|(_, s)| s.is_empty()) {
            return Err(parse_err(lineno, *col, "empty side in a statement"));
        }
        for (i, rel) in ops.iter().enumerate() {
            statements.push(Statement {
                kind: *rel,
                left: sides[i].1,
                right: sides[i + 1].1,
            });
        }
    }
    let r = r.ok_or_else(|| parse_err(1, 1, "empty input: expected `sets <r>`"))?;
    CongruenceSystem::new(r, statements, mode)
}

fn render_side(s: IndexSet) -> String {
    s.iter()
        .map(|k| format!("A{k}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_statement(st: &Statement) -> String {
    let op = match st.kind {
        Relation::Congruence => "~",
        Relation::Subcongruence => "<",
    };
    format!("{} {op} {}", render_side(st.left), render_side(st.right))
}

/// Inverse of [`parse_system`] up to comments and layout.
pub fn render_system(sys: &CongruenceSystem) -> String {
    let mut out = format!("sets {}\nmode {}\n", sys.r(), sys.mode());
    for st in sys.statements() {
        out.push_str(&render_statement(st));
        out.push('\n');
    }
    out
}

pub fn parse_word(text: &str) -> Result<Word> {
    let trimmed = text.trim();
    if trimmed == "e" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let column = text[..i].chars().count() + 1;
        match c {
            c if c.is_whitespace() => {}
            'a'..='z' => letters.push(i32::from(c as u8 - b'a' + 1)),
            'A'..='Z' => letters.push(-i32::from(c as u8 - b'A' + 1)),
            '[' => {
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some((_, ']')) => break,
                        Some((_, d)) => body.push(d),
                        None => return Err(parse_err(1, column, "unterminated `[`")),
                    }
                }
                let l: i32 = body
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&l: &i32| l != 0)
                    .ok_or_else(|| parse_err(1, column, format!("bad generator `[{body}]`")))?;
                letters.push(l);
            }
            _ => {
                return Err(parse_err(
                    1,
                    column,
                    format!("unexpected character `{c}` in word"),
                ))
            }
        }
    }
    if letters.is_empty() {
        return Err(parse_err(1, 1, "empty word; write `e` for the identity"));
    }
    Ok(Word::from_letters(letters))
}

/// Reads a family as a JSON array of arrays of words, or as an object
/// `{"sets": [...], "coset": "<word>"}`. A `coset` given here or as
/// `coset` argument puts the family in `F_m/⟨w⟩`.
pub fn parse_family(json: &str, m: usize, coset: Option<&Word>) -> Result<FiniteFamily> {
    let bad = |msg: String| parse_err(1, 1, msg);
    let value: Value =
        serde_json::from_str(json).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let (sets, inline_coset) = match &value {
        Value::Array(_) => (&value, None),
        Value::Object(map) => {
            let sets = map
                .get("sets")
                .ok_or_else(|| bad("missing `sets`".into()))?;
            let coset = match map.get("coset") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(parse_word(s)?),
                Some(other) => return Err(bad(format!("`coset` must be a word, found {other}"))),
            };
            (sets, coset)
        }
        other => return Err(bad(format!("expected an array of sets, found {other}"))),
    };
    let Value::Array(list) = sets else {
        return Err(bad("`sets` must be an array".into()));
    };
    let mut parsed = Vec::with_capacity(list.len());
    for set in list {
        let Value::Array(words) = set else {
            return Err(bad(format!(
                "each set must be an array of words, found {set}"
            )));
        };
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            let Value::String(s) = w else {
                return Err(bad(format!("words are strings, found {w}")));
            };
            out.push(parse_word(s)?);
        }
        parsed.push(out);
    }
    let coset = coset.cloned().or(inline_coset);
    let space = match coset {
        Some(w) => Space::Coset(CosetSpace::new(m, w)?),
        None => Space::Group { m },
    };
    FiniteFamily::new(space, parsed)
}

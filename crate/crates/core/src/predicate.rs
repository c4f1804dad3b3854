//! Predicate data model and the two text formats built on it.
//!
//! Model files hold one fact per line:
//!
//! ```text
//! % comment
//! class(Elevator).
//! attribute(Elevator, currentFloor, integer).
//! ```
//!
//! Training files group mapping entries into numbered blocks:
//!
//! ```text
//! block 1
//! map: class($C) => java_class($C).
//! map: attribute($C, $A, integer) => java_field($C, $A, int).
//! endblock
//! ```
//!
//! Arguments prefixed with `$` are placeholders; everything else is a literal
//! (identifier, base-10 integer or double-quoted string).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// Literal argument value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Ident(String),
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    /// Placeholder name without the `$` marker.
    Placeholder(String),
    Literal(Literal),
}

impl Arg {
    pub fn ident(s: impl Into<String>) -> Self {
        Arg::Literal(Literal::Ident(s.into()))
    }

    pub fn int(v: i64) -> Self {
        Arg::Literal(Literal::Int(v))
    }

    pub fn string(s: impl Into<String>) -> Self {
        Arg::Literal(Literal::Str(s.into()))
    }

    pub fn placeholder(s: impl Into<String>) -> Self {
        Arg::Placeholder(s.into())
    }

    pub fn is_placeholder(&self) -> bool {
        matches!(self, Arg::Placeholder(_))
    }

    /// The identifier text when this is an identifier literal.
    pub fn as_ident(&self) -> Option<&str> {
        match self {
            Arg::Literal(Literal::Ident(s)) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Ident(s) => f.write_str(s),
            Literal::Int(v) => write!(f, "{v}"),
            Literal::Str(s) => {
                f.write_str("\"")?;
                for ch in s.chars() {
                    match ch {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        '\r' => f.write_str("\\r")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Placeholder(name) => write!(f, "${name}"),
            Arg::Literal(lit) => lit.fmt(f),
        }
    }
}

/// A named term with positional arguments.
///
/// `Display` writes the term without the trailing period, which is the form
/// used inside mapping entries; [`serialize_predicate`] adds the terminator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    pub name: String,
    pub args: Vec<Arg>,
}

impl Predicate {
    pub fn new(name: impl Into<String>, args: Vec<Arg>) -> Self {
        Predicate {
            name: name.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn placeholders(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|a| match a {
            Arg::Placeholder(n) => Some(n.as_str()),
            Arg::Literal(_) => None,
        })
    }

    pub fn has_placeholders(&self) -> bool {
        self.args.iter().any(Arg::is_placeholder)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            arg.fmt(f)?;
        }
        f.write_str(")")
    }
}

/// Canonical text of a predicate: `name(a, b).`, or `name.` for arity 0.
pub fn serialize_predicate(p: &Predicate) -> String {
    format!("{p}.")
}

/// One source pattern and the code predicates it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingEntry {
    pub source: Predicate,
    pub targets: Vec<Predicate>,
}

impl fmt::Display for MappingEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map: {} =>", self.source)?;
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, " {t}")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(pub u32);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A numbered transformation example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingBlock {
    pub id: BlockId,
    pub entries: Vec<MappingEntry>,
}

impl fmt::Display for MappingBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "block {}", self.id)?;
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        f.write_str("endblock")
    }
}

/// Serializes blocks into training-file text, one blank line between blocks.
pub fn serialize_mapping_blocks(blocks: &[MappingBlock]) -> String {
    let mut out = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&b.to_string());
        out.push('\n');
    }
    out
}

/// One predicate of an input model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConstruct {
    pub index: usize,
    pub predicate: Predicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Non-fatal findings reported alongside a successful parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lint {
    PlaceholderInModel {
        index: usize,
        placeholder: String,
    },
    UnboundTarget {
        block: BlockId,
        entry: usize,
        placeholder: String,
    },
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lint::PlaceholderInModel { index, placeholder } => write!(
                f,
                "model construct {index} contains placeholder ${placeholder}"
            ),
            Lint::UnboundTarget {
                block,
                entry,
                placeholder,
            } => write!(
                f,
                "block {block} entry {entry}: target placeholder ${placeholder} does not appear in the source"
            ),
        }
    }
}

pub fn lint_model(constructs: &[ModelConstruct]) -> Vec<Lint> {
    constructs
        .iter()
        .flat_map(|c| {
            c.predicate
                .placeholders()
                .map(|p| Lint::PlaceholderInModel {
                    index: c.index,
                    placeholder: p.to_string(),
                })
        })
        .collect()
}

pub fn lint_blocks(blocks: &[MappingBlock]) -> Vec<Lint> {
    let mut lints = Vec::new();
    for block in blocks {
        for (ordinal, entry) in block.entries.iter().enumerate() {
            let bound: HashSet<&str> = entry.source.placeholders().collect();
            let unbound: BTreeSet<&str> = entry
                .targets
                .iter()
                .flat_map(Predicate::placeholders)
                .filter(|p| !bound.contains(p))
                .collect();
            lints.extend(unbound.into_iter().map(|p| Lint::UnboundTarget {
                block: block.id,
                entry: ordinal,
                placeholder: p.to_string(),
            }));
        }
    }
    lints
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Placeholder(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Semi,
    Colon,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Placeholder(s) => format!("placeholder `${s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Colon => "`:`".to_string(),
            Tok::Arrow => "`=>`".to_string(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes one line; `%` outside a string ends the line. Columns are 1-based.
fn lex_line(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '%' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, col));
                i += 1;
            }
            ';' => {
                toks.push((Tok::Semi, col));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, col));
                i += 1;
            }
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Arrow, col));
                    i += 2;
                } else {
                    return Err(ParseError::new(line_no, col, "expected `=>`"));
                }
            }
            '$' => {
                let start = i + 1;
                let mut j = start;
                if j < chars.len() && is_ident_start(chars[j]) {
                    j += 1;
                    while j < chars.len() && is_ident_continue(chars[j]) {
                        j += 1;
                    }
                }
                if j == start {
                    return Err(ParseError::new(line_no, col, "empty placeholder name"));
                }
                toks.push((Tok::Placeholder(chars[start..j].iter().collect()), col));
                i = j;
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => {
                            return Err(ParseError::new(line_no, col, "unterminated string"));
                        }
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(j + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('r') => '\r',
                                Some(other) => {
                                    return Err(ParseError::new(
                                        line_no,
                                        j + 1,
                                        format!("unknown escape `\\{other}`"),
                                    ));
                                }
                                None => {
                                    return Err(ParseError::new(
                                        line_no,
                                        col,
                                        "unterminated string",
                                    ));
                                }
                            };
                            s.push(esc);
                            j += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            j += 1;
                        }
                    }
                }
                toks.push((Tok::Str(s), col));
                i = j + 1;
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                if text == "-" {
                    return Err(ParseError::new(line_no, col, "expected digits after `-`"));
                }
                if j < chars.len() && is_ident_start(chars[j]) {
                    return Err(ParseError::new(line_no, j + 1, "malformed integer"));
                }
                let value = text
                    .parse::<i64>()
                    .map_err(|_| ParseError::new(line_no, col, "integer out of range"))?;
                toks.push((Tok::Int(value), col));
                i = j;
            }
            c if is_ident_start(c) => {
                let mut j = i + 1;
                while j < chars.len() && is_ident_continue(chars[j]) {
                    j += 1;
                }
                toks.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    /// Column reported for errors at end of line.
    eol: usize,
}

impl Cursor {
    fn new(toks: Vec<(Tok, usize)>, line: usize, line_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            eol: line_len + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.eol)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn predicate(&mut self) -> Result<Predicate, ParseError> {
        let name = match self.peek() {
            Some(Tok::Ident(name)) if name.starts_with(|c: char| c.is_ascii_lowercase()) => {
                name.clone()
            }
            Some(Tok::Ident(_)) => {
                return Err(self.error("predicate name must start with a lowercase letter"));
            }
            _ => return Err(self.unexpected("predicate name")),
        };
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            if self.peek() == Some(&Tok::RParen) {
                self.pos += 1;
                return Ok(Predicate { name, args });
            }
            loop {
                let arg = match self.peek() {
                    Some(Tok::Ident(s)) => Arg::ident(s.clone()),
                    Some(Tok::Placeholder(s)) => Arg::placeholder(s.clone()),
                    Some(Tok::Int(v)) => Arg::int(*v),
                    Some(Tok::Str(s)) => Arg::string(s.clone()),
                    _ => return Err(self.unexpected("argument")),
                };
                self.pos += 1;
                args.push(arg);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
        }
        Ok(Predicate { name, args })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l))
}

/// Parses a model file into constructs indexed in file order.
///
/// Placeholders are accepted here and reported by [`lint_model`].
pub fn parse_predicates(text: &str) -> Result<Vec<ModelConstruct>, ParseError> {
    let mut constructs = Vec::new();
    for (line_no, line) in lines(text) {
        let toks = lex_line(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(toks, line_no, line.chars().count());
        let predicate = cur.predicate()?;
        cur.expect(Tok::Dot, "`.`")?;
        cur.finish()?;
        constructs.push(ModelConstruct {
            index: constructs.len(),
            predicate,
        });
    }
    Ok(constructs)
}

/// Parses a training file into mapping blocks, preserving ids and entry order.
pub fn parse_mapping_blocks(text: &str) -> Result<Vec<MappingBlock>, ParseError> {
    let mut blocks: Vec<MappingBlock> = Vec::new();
    let mut seen = HashSet::new();
    // Block under construction and the line of its header.
    let mut open: Option<(MappingBlock, usize)> = None;

    for (line_no, line) in lines(text) {
        let toks = lex_line(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(toks, line_no, line.chars().count());
        match cur.peek() {
            Some(Tok::Ident(kw)) if kw == "block" => {
                if let Some((b, header)) = &open {
                    return Err(cur.error(format!(
                        "block {} opened on line {header} is missing `endblock`",
                        b.id
                    )));
                }
                cur.pos += 1;
                let id = match cur.next() {
                    Some(Tok::Int(v)) if v >= 1 && v <= u32::MAX as i64 => BlockId(v as u32),
                    Some(Tok::Int(_)) => {
                        cur.pos -= 1;
                        return Err(cur.error("block id must be a positive integer"));
                    }
                    _ => {
                        if !cur.at_end() {
                            cur.pos -= 1;
                        }
                        return Err(cur.unexpected("block id"));
                    }
                };
                cur.finish()?;
                if !seen.insert(id) {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("duplicate block id {id}"),
                    ));
                }
                open = Some((
                    MappingBlock {
                        id,
                        entries: Vec::new(),
                    },
                    line_no,
                ));
            }
            Some(Tok::Ident(kw)) if kw == "endblock" => {
                cur.pos += 1;
                cur.finish()?;
                match open.take() {
                    Some((b, header)) => {
                        if b.entries.is_empty() {
                            return Err(ParseError::new(
                                header,
                                1,
                                format!("block {} has no entries", b.id),
                            ));
                        }
                        blocks.push(b);
                    }
                    None => return Err(ParseError::new(line_no, 1, "`endblock` without `block`")),
                }
            }
            Some(Tok::Ident(kw)) if kw == "map" => {
                let Some((block, _)) = open.as_mut() else {
                    return Err(ParseError::new(line_no, 1, "`map:` outside a block"));
                };
                cur.pos += 1;
                cur.expect(Tok::Colon, "`:` after `map`")?;
                let source = cur.predicate()?;
                cur.expect(Tok::Arrow, "`=>`")?;
                let mut targets = vec![cur.predicate()?];
                while cur.peek() == Some(&Tok::Semi) {
                    cur.pos += 1;
                    targets.push(cur.predicate()?);
                }
                cur.expect(Tok::Dot, "`;` or `.`")?;
                cur.finish()?;
                block.entries.push(MappingEntry { source, targets });
            }
            _ => return Err(cur.unexpected("`block`, `map:` or `endblock`")),
        }
    }
    if let Some((b, header)) = open {
        return Err(ParseError::new(
            header,
            1,
            format!("block {} is missing `endblock`", b.id),
        ));
    }
    Ok(blocks)
}

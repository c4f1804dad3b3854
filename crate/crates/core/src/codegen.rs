//! Renders code predicates into Java compilation units.
//!
//! Recognized vocabulary (first argument is always the owning class):
//!
//! | predicate                                   | renders as                          |
//! |---------------------------------------------|-------------------------------------|
//! | `java_class(Name)`                          | `public class Name { ... }`         |
//! | `java_extends(Sub, Super)`                  | `extends Super` on `Sub`            |
//! | `java_field(Class, Name, Type)`             | `private Type Name;`                |
//! | `java_method(Class, Name, RetType)`         | `public RetType Name(...) { ... }`  |
//! | `java_param(Class, Method, Name, Type)`     | parameter `Type Name`               |
//! | `java_stmt(Class, Method, Seq, Code)`       | body line, ordered by `Seq`         |
//! | `java_state_enum(Class, State)`             | member of the nested `State` enum   |
//! | `java_initial_state(Class, State)`          | initializer of `currentState`       |
//! | `java_transition(Class, Event, From, To)`   | branch of `handleEvent(String)`     |
//!
//! Anything else, or a known name with the wrong shape, is rendered as an
//! `// UNMAPPED:` comment and reported.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::predicate::{parse_predicates, serialize_predicate, Arg, Literal, Predicate};
use crate::transform::{FlaggedConstruct, UNBOUND_LITERAL};

/// Holder class for predicates whose owning class cannot be resolved.
pub const UNMAPPED_CLASS: &str = "_Unmapped";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("class {class} has conflicting initial states {first} and {second}")]
    ConflictingInitialState {
        class: String,
        first: String,
        second: String,
    },
    #[error("code predicate {0} still contains placeholders")]
    Placeholder(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub filename: String,
    pub content: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Reason {
    /// Derived from a nearest match, or carries an unresolved `TODO`.
    Partial,
    NoMatch,
    UnknownPredicate,
    /// A member referenced a class with no `java_class` declaration.
    UndeclaredClass,
    /// A parameter or statement referenced a method with no `java_method`.
    UndeclaredMethod,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::Partial => "partial",
            Reason::NoMatch => "no-match",
            Reason::UnknownPredicate => "unknown-predicate",
            Reason::UndeclaredClass => "undeclared-class",
            Reason::UndeclaredMethod => "undeclared-method",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReportRow {
    pub file: Option<String>,
    pub subject: String,
    pub reason: Reason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodegenReport {
    pub rows: Vec<ReportRow>,
    /// Input predicates rendered as class members or declarations.
    pub rendered_predicates: usize,
}

impl CodegenReport {
    pub fn unknown_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.reason == Reason::UnknownPredicate)
            .count()
    }
}

pub const REPORT_HEADER: &str = "java file | reason | construct or predicate";

/// Plain-text table sorted by file name (rows without a file first), then
/// by construct or predicate text.
pub fn write_codegen_report(report: &CodegenReport) -> String {
    let mut rows: Vec<&ReportRow> = report.rows.iter().collect();
    rows.sort_by(|a, b| (&a.file, &a.subject, a.reason).cmp(&(&b.file, &b.subject, b.reason)));
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{} | {} | {}",
            r.file.as_deref().unwrap_or("-"),
            r.reason,
            r.subject
        );
    }
    out
}

fn java_text(arg: &Arg) -> String {
    match arg {
        Arg::Literal(Literal::Str(s)) => s.clone(),
        other => other.to_string(),
    }
}

/// `$` is legal Java but fails the structural check, so emitted text uses
/// the equivalent unicode escape.
fn escape_dollar(s: &str) -> String {
    s.replace('$', "\\u0024")
}

fn is_java_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Identifier position: an identifier literal, or a string spelling one.
fn java_ident(arg: &Arg) -> Option<String> {
    let text = java_text(arg);
    (!matches!(arg, Arg::Literal(Literal::Int(_))) && is_java_ident(&text)).then_some(text)
}

/// Type position: identifiers joined by `.`, with generic arguments and
/// array brackets, e.g. `java.util.List<Car>` or `int[]`.
fn java_type(arg: &Arg) -> Option<String> {
    let text = java_text(arg);
    let ok = text.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
        && text
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_.<>[], ?".contains(c));
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    (ok && depth == 0).then_some(text)
}

/// Statement text: one line whose brackets balance on their own.
fn java_code(arg: &Arg) -> Option<String> {
    let text = java_text(arg);
    if text.contains(['\n', '\r']) {
        return None;
    }
    let code = strip_literals(&text)?;
    balanced(&code).ok()?;
    Some(escape_dollar(&text))
}

fn java_string_literal(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '$' => out.push_str("\\u0024"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Default)]
struct Method {
    name: String,
    ret: String,
    params: Vec<(String, String)>,
    /// (seq, input order, code)
    stmts: Vec<(i64, usize, String)>,
}

#[derive(Debug, Default)]
struct ClassModel {
    name: String,
    extends: Option<String>,
    states: Vec<String>,
    initial: Option<String>,
    transitions: Vec<(String, String, String)>,
    has_state_predicates: bool,
    fields: Vec<(String, String)>,
    methods: Vec<Method>,
    unmapped: Vec<String>,
}

impl ClassModel {
    fn method_mut(&mut self, name: &str) -> Option<&mut Method> {
        self.methods.iter_mut().find(|m| m.name == name)
    }

    fn add_state(&mut self, s: &str) {
        if !self.states.iter().any(|x| x == s) {
            self.states.push(s.to_string());
        }
    }

    fn render(&self) -> String {
        let mut sections: Vec<String> = Vec::new();

        if self.has_state_predicates {
            let mut s = String::from("    public enum State {\n");
            let members: Vec<String> = self
                .states
                .iter()
                .map(|st| format!("        {st}"))
                .collect();
            s.push_str(&members.join(",\n"));
            if !members.is_empty() {
                s.push('\n');
            }
            s.push_str("    }\n");
            sections.push(s);
        }

        let mut fields = String::new();
        if self.has_state_predicates {
            match self.initial.as_ref().or(self.states.first()) {
                Some(init) => {
                    let _ = writeln!(fields, "    private State currentState = State.{init};");
                }
                None => fields.push_str("    private State currentState;\n"),
            }
        }
        for (name, ty) in &self.fields {
            let _ = writeln!(fields, "    private {ty} {name};");
        }
        if !fields.is_empty() {
            sections.push(fields);
        }

        if !self.transitions.is_empty() {
            let mut froms: Vec<&str> = Vec::new();
            for (_, from, _) in &self.transitions {
                if !froms.contains(&from.as_str()) {
                    froms.push(from);
                }
            }
            let mut s = String::from("    public void handleEvent(String event) {\n");
            for (i, from) in froms.iter().enumerate() {
                let kw = if i == 0 { "        if" } else { " else if" };
                let _ = writeln!(s, "{kw} (currentState == State.{from}) {{");
                let mut first = true;
                for (event, _, to) in self.transitions.iter().filter(|(_, f, _)| f == from) {
                    let kw = if first { "            if" } else { " else if" };
                    first = false;
                    let _ = write!(
                        s,
                        "{kw} (event.equals({})) {{\n                currentState = State.{to};\n            }}",
                        java_string_literal(event)
                    );
                }
                s.push_str("\n        }");
            }
            s.push_str("\n    }\n");
            sections.push(s);
        }

        for m in &self.methods {
            let params: Vec<String> = m.params.iter().map(|(n, t)| format!("{t} {n}")).collect();
            let mut s = format!(
                "    public {} {}({}) {{\n",
                m.ret,
                m.name,
                params.join(", ")
            );
            let mut stmts: Vec<&(i64, usize, String)> = m.stmts.iter().collect();
            stmts.sort_by_key(|(seq, order, _)| (*seq, *order));
            for (_, _, code) in stmts {
                let _ = writeln!(s, "        {code}");
            }
            s.push_str("    }\n");
            sections.push(s);
        }

        if !self.unmapped.is_empty() {
            let mut s = String::new();
            for u in &self.unmapped {
                let _ = writeln!(s, "    // UNMAPPED: {}", escape_dollar(u));
            }
            sections.push(s);
        }

        let mut out = format!("public class {}", self.name);
        if let Some(sup) = &self.extends {
            let _ = write!(out, " extends {sup}");
        }
        out.push_str(" {\n");
        out.push_str(&sections.join("\n"));
        out.push_str("}\n");
        out
    }
}

/// Shape of a recognized code predicate.
enum Member<'a> {
    Class,
    Extends(&'a str),
    Field(String, String),
    Method(String, String),
    Param(String, String, String),
    Stmt(String, i64, String),
    StateEnum(String),
    Initial(String),
    Transition(String, String, String),
}

/// Classifies `p`; `None` marks an unknown predicate.
fn classify(p: &Predicate) -> Option<(&str, Member<'_>)> {
    let class = p.args.first()?.as_ident()?;
    let a = &p.args;
    let member = match (p.name.as_str(), a.len()) {
        ("java_class", 1) => Member::Class,
        ("java_extends", 2) => Member::Extends(a[1].as_ident()?),
        ("java_field", 3) => Member::Field(java_ident(&a[1])?, java_type(&a[2])?),
        ("java_method", 3) => Member::Method(java_ident(&a[1])?, java_type(&a[2])?),
        ("java_param", 4) => {
            Member::Param(java_ident(&a[1])?, java_ident(&a[2])?, java_type(&a[3])?)
        }
        ("java_stmt", 4) => {
            // non-integer sequence numbers (e.g. an unresolved TODO) sort last
            let seq = match &a[2] {
                Arg::Literal(Literal::Int(v)) => *v,
                _ => i64::MAX,
            };
            Member::Stmt(java_ident(&a[1])?, seq, java_code(&a[3])?)
        }
        ("java_state_enum", 2) => Member::StateEnum(java_ident(&a[1])?),
        ("java_initial_state", 2) => Member::Initial(java_ident(&a[1])?),
        ("java_transition", 4) => {
            Member::Transition(java_text(&a[1]), java_ident(&a[2])?, java_ident(&a[3])?)
        }
        _ => return None,
    };
    Some((class, member))
}

fn has_todo(p: &Predicate) -> bool {
    p.args
        .iter()
        .any(|a| matches!(a, Arg::Literal(Literal::Ident(s)) if s == UNBOUND_LITERAL))
}

struct Classes {
    order: Vec<ClassModel>,
    by_name: HashMap<String, usize>,
}

impl Classes {
    fn get_or_insert(&mut self, name: &str) -> (usize, bool) {
        if let Some(&i) = self.by_name.get(name) {
            return (i, false);
        }
        self.order.push(ClassModel {
            name: name.to_string(),
            ..ClassModel::default()
        });
        self.by_name.insert(name.to_string(), self.order.len() - 1);
        (self.order.len() - 1, true)
    }

    fn file_of(&self, class: &str) -> Option<String> {
        self.by_name.get(class).map(|_| format!("{class}.java"))
    }
}

/// Renders one file per class named by the code predicates.
///
/// `flagged` carries the nearest/unmatched constructs of the transformation
/// step; each produces a report row cross-referenced to its Java file.
pub fn render_files(
    code_predicates: &[Predicate],
    flagged: &[FlaggedConstruct],
) -> Result<(Vec<SourceFile>, CodegenReport), CodegenError> {
    if let Some(p) = code_predicates.iter().find(|p| p.has_placeholders()) {
        return Err(CodegenError::Placeholder(serialize_predicate(p)));
    }
    let mut classes = Classes {
        order: Vec::new(),
        by_name: HashMap::new(),
    };
    for p in code_predicates {
        if let Some((name, Member::Class)) = classify(p) {
            classes.get_or_insert(name);
        }
    }

    let mut report = CodegenReport::default();
    let mut unmapped_orphans: Vec<String> = Vec::new();

    for (order, p) in code_predicates.iter().enumerate() {
        let text = serialize_predicate(p);
        let Some((class, member)) = classify(p) else {
            let file = p
                .args
                .first()
                .and_then(Arg::as_ident)
                .and_then(|c| classes.by_name.get(c).copied());
            match file {
                Some(i) => classes.order[i].unmapped.push(text.clone()),
                None => unmapped_orphans.push(text.clone()),
            }
            report.rows.push(ReportRow {
                file: Some(match file {
                    Some(i) => format!("{}.java", classes.order[i].name),
                    None => format!("{UNMAPPED_CLASS}.java"),
                }),
                subject: text,
                reason: Reason::UnknownPredicate,
            });
            continue;
        };

        let (ci, created) = classes.get_or_insert(class);
        let file = format!("{class}.java");
        if created {
            report.rows.push(ReportRow {
                file: Some(file.clone()),
                subject: text.clone(),
                reason: Reason::UndeclaredClass,
            });
        }
        let model = &mut classes.order[ci];
        match member {
            Member::Class => {}
            Member::Extends(sup) => match &model.extends {
                Some(existing) if existing != sup => {
                    // a class has one superclass; keep the first
                    model.unmapped.push(text.clone());
                    report.rows.push(ReportRow {
                        file: Some(file.clone()),
                        subject: text.clone(),
                        reason: Reason::UnknownPredicate,
                    });
                    continue;
                }
                _ => model.extends = Some(sup.to_string()),
            },
            Member::Field(name, ty) => model.fields.push((name, ty)),
            Member::Method(name, ret) => match model.method_mut(&name) {
                // declared after an orphan param/stmt synthesized it
                Some(m) => m.ret = ret,
                None => model.methods.push(Method {
                    name,
                    ret,
                    ..Method::default()
                }),
            },
            Member::Param(method, name, ty) => {
                let m = ensure_method(model, &method, &text, &file, &mut report);
                m.params.push((name, ty));
            }
            Member::Stmt(method, seq, code) => {
                let m = ensure_method(model, &method, &text, &file, &mut report);
                m.stmts.push((seq, order, code));
            }
            Member::StateEnum(s) => {
                model.has_state_predicates = true;
                model.add_state(&s);
            }
            Member::Initial(s) => {
                model.has_state_predicates = true;
                match &model.initial {
                    Some(existing) if *existing != s => {
                        return Err(CodegenError::ConflictingInitialState {
                            class: class.to_string(),
                            first: existing.clone(),
                            second: s,
                        });
                    }
                    _ => {
                        model.add_state(&s);
                        model.initial = Some(s);
                    }
                }
            }
            Member::Transition(event, from, to) => {
                model.has_state_predicates = true;
                model.add_state(&from);
                model.add_state(&to);
                model.transitions.push((event, from, to));
            }
        }
        report.rendered_predicates += 1;
        if has_todo(p) {
            report.rows.push(ReportRow {
                file: Some(file),
                subject: text,
                reason: Reason::Partial,
            });
        }
    }

    for f in flagged {
        let (reason, file) = match f.nearest_score {
            Some(_) => (
                Reason::Partial,
                f.first_predicate
                    .as_ref()
                    .and_then(|p| p.args.first())
                    .and_then(Arg::as_ident)
                    .and_then(|c| classes.file_of(c)),
            ),
            None => (
                Reason::NoMatch,
                parse_predicates(&f.construct)
                    .ok()
                    .and_then(|cs| cs.into_iter().next())
                    .and_then(|c| {
                        c.predicate
                            .args
                            .first()
                            .and_then(Arg::as_ident)
                            .map(str::to_string)
                    })
                    .and_then(|c| classes.file_of(&c)),
            ),
        };
        report.rows.push(ReportRow {
            file,
            subject: f.construct.clone(),
            reason,
        });
    }

    let mut files: Vec<SourceFile> = classes
        .order
        .iter()
        .map(|c| SourceFile {
            filename: format!("{}.java", c.name),
            content: c.render(),
        })
        .collect();
    if !unmapped_orphans.is_empty() {
        let holder = ClassModel {
            name: UNMAPPED_CLASS.to_string(),
            unmapped: unmapped_orphans,
            ..ClassModel::default()
        };
        files.push(SourceFile {
            filename: format!("{UNMAPPED_CLASS}.java"),
            content: holder.render(),
        });
    }
    Ok((files, report))
}

fn ensure_method<'m>(
    model: &'m mut ClassModel,
    method: &str,
    text: &str,
    file: &str,
    report: &mut CodegenReport,
) -> &'m mut Method {
    if model.method_mut(method).is_none() {
        report.rows.push(ReportRow {
            file: Some(file.to_string()),
            subject: text.to_string(),
            reason: Reason::UndeclaredMethod,
        });
        model.methods.push(Method {
            name: method.to_string(),
            ret: "void".to_string(),
            ..Method::default()
        });
    }
    model.method_mut(method).expect("method just ensured")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{file}: unbalanced `{open}{close}`")]
    Unbalanced {
        file: String,
        open: char,
        close: char,
    },
    #[error("{file}: contains `$`")]
    Dollar { file: String },
    #[error("{file}: expected exactly one top-level class {expected}, found {found:?}")]
    ClassName {
        file: String,
        expected: String,
        found: Vec<String>,
    },
    #[error("{file}: unterminated string literal or comment")]
    Unterminated { file: String },
    #[error("{file}: file name must end in .java")]
    Extension { file: String },
}

/// Blanks out string and char literals and comments. `None` when a literal
/// runs past its line or a block comment never closes.
fn strip_literals(text: &str) -> Option<String> {
    let mut code = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' | '\'' => {
                code.push(' ');
                loop {
                    match chars.next()? {
                        '\\' => {
                            chars.next()?;
                        }
                        '\n' => return None,
                        d if d == c => break,
                        _ => {}
                    }
                }
                code.push(' ');
            }
            '/' if chars.peek() == Some(&'/') => {
                for d in chars.by_ref() {
                    if d == '\n' {
                        code.push('\n');
                        break;
                    }
                }
            }
            '/' if chars.peek() == Some(&'*') => {
                chars.next();
                let mut prev = ' ';
                loop {
                    let d = chars.next()?;
                    if prev == '*' && d == '/' {
                        break;
                    }
                    prev = d;
                }
                code.push(' ');
            }
            c => code.push(c),
        }
    }
    Some(code)
}

/// Checks `{}` and `()` nesting; returns the text outside all brackets, or
/// the offending pair.
fn balanced(code: &str) -> Result<String, (char, char)> {
    let mut stack = Vec::new();
    let mut top_level = String::new();
    for c in code.chars() {
        match c {
            '{' | '(' => stack.push(c),
            '}' | ')' => {
                let open = if c == '}' { '{' } else { '(' };
                if stack.pop() != Some(open) {
                    return Err((open, c));
                }
            }
            _ if stack.is_empty() => top_level.push(c),
            _ => {}
        }
    }
    match stack.pop() {
        Some(open) => Err((open, if open == '{' { '}' } else { ')' })),
        None => Ok(top_level),
    }
}

impl SourceFile {
    /// Structural checks: balanced braces and parentheses outside string
    /// literals and comments, no `$`, and exactly one top-level class whose
    /// name equals the file stem.
    pub fn check_structure(&self) -> Result<(), StructureError> {
        let file = self.filename.clone();
        let stem = self
            .filename
            .strip_suffix(".java")
            .ok_or_else(|| StructureError::Extension { file: file.clone() })?;
        if self.content.contains('$') {
            return Err(StructureError::Dollar { file });
        }

        let code = strip_literals(&self.content)
            .ok_or_else(|| StructureError::Unterminated { file: file.clone() })?;
        let top_level = balanced(&code).map_err(|(open, close)| StructureError::Unbalanced {
            file: file.clone(),
            open,
            close,
        })?;

        let words: Vec<&str> = top_level.split_whitespace().collect();
        let found: Vec<String> = words
            .windows(2)
            .filter(|w| w[0] == "class")
            .map(|w| w[1].to_string())
            .collect();
        if found.len() != 1 || found[0] != stem {
            return Err(StructureError::ClassName {
                file,
                expected: stem.to_string(),
                found,
            });
        }
        Ok(())
    }
}

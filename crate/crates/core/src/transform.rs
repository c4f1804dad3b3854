//! Applies a block assignment to the model, producing code predicates.

use std::fmt::{self, Write as _};

use crate::kb::{find_exact_in_block, KnowledgeBase, MatchResult};
use crate::predicate::{
    parse_predicates, serialize_predicate, Arg, BlockId, ModelConstruct, ParseError, Predicate,
};
use crate::search::SearchOutcome;

/// Literal substituted for target placeholders a partial match leaves unbound.
pub const UNBOUND_LITERAL: &str = "TODO";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Exact,
    Nearest(f64),
    Unmatched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructOutcome {
    pub construct_index: usize,
    /// The construct itself, kept for reporting.
    pub construct: Predicate,
    pub status: Status,
    pub used_block: Option<BlockId>,
    pub used_entry: Option<usize>,
    pub code_predicates: Vec<Predicate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchDetail {
    pub construct_index: usize,
    pub construct: String,
    pub assigned_block: BlockId,
    pub best_score: f64,
    pub suggestion: Option<(BlockId, usize)>,
}

/// The step-3 report. Field order is the order of the rendered sections.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    pub construct_count: usize,
    pub block_count: usize,
    pub best_fitness: f64,
    pub assignment: Vec<BlockId>,
    pub evaluations: usize,
    pub mismatch_details: Vec<MismatchDetail>,
}

fn instantiate(m: &MatchResult, kb: &KnowledgeBase) -> Vec<Predicate> {
    let entry = kb
        .entry(m.block_id, m.entry_ordinal)
        .expect("match refers to an entry of this knowledge base");
    entry
        .targets
        .iter()
        .map(|t| {
            m.substitution
                .apply_with(t, |_| Arg::ident(UNBOUND_LITERAL))
        })
        .collect()
}

/// Transforms one construct: exact match in the assigned block first, then
/// the nearest entry anywhere in the knowledge base scoring at least `theta`.
pub fn transform_one(
    c: &ModelConstruct,
    assigned: BlockId,
    kb: &KnowledgeBase,
    theta: f64,
) -> ConstructOutcome {
    let exact = kb.block(assigned).and_then(|b| find_exact_in_block(c, b));
    let (status, m) = match exact {
        Some(m) => (Status::Exact, Some(m)),
        None => match kb.find_nearest(c, theta) {
            Some(m) => (Status::Nearest(m.score), Some(m)),
            None => (Status::Unmatched, None),
        },
    };
    ConstructOutcome {
        construct_index: c.index,
        construct: c.predicate.clone(),
        status,
        used_block: m.as_ref().map(|m| m.block_id),
        used_entry: m.as_ref().map(|m| m.entry_ordinal),
        code_predicates: m.map(|m| instantiate(&m, kb)).unwrap_or_default(),
    }
}

/// Transforms every construct with the search outcome's best assignment.
///
/// # Panics
///
/// When the assignment length differs from the construct count.
pub fn transform_all(
    constructs: &[ModelConstruct],
    outcome: &SearchOutcome,
    kb: &KnowledgeBase,
    theta: f64,
) -> (Vec<ConstructOutcome>, TransformReport) {
    assert_eq!(
        outcome.best.len(),
        constructs.len(),
        "assignment length must equal the construct count"
    );
    let mut outcomes = Vec::with_capacity(constructs.len());
    let mut mismatch_details = Vec::new();
    for (c, &block) in constructs.iter().zip(&outcome.best.block_ids) {
        let o = transform_one(c, block, kb, theta);
        if o.status != Status::Exact {
            let best = kb.best_match(c);
            mismatch_details.push(MismatchDetail {
                construct_index: c.index,
                construct: serialize_predicate(&c.predicate),
                assigned_block: block,
                best_score: best.as_ref().map_or(0.0, |m| m.score),
                suggestion: o.used_block.zip(o.used_entry),
            });
        }
        outcomes.push(o);
    }
    let report = TransformReport {
        construct_count: constructs.len(),
        block_count: kb.block_count(),
        best_fitness: outcome.best_fitness,
        assignment: outcome.best.block_ids.clone(),
        evaluations: outcome.evaluations,
        mismatch_details,
    };
    (outcomes, report)
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CodS transformation report")?;
        writeln!(f, "1. Input model constructs: {}", self.construct_count)?;
        writeln!(
            f,
            "2. Mapping blocks in training data: {}",
            self.block_count
        )?;
        writeln!(f, "3. Best fitness: {:.4}", self.best_fitness)?;
        writeln!(f, "4. Selected mapping blocks:")?;
        for (i, b) in self.assignment.iter().enumerate() {
            writeln!(f, "   construct {i} -> block {b}")?;
        }
        writeln!(f, "5. PSO evaluations: {}", self.evaluations)?;
        writeln!(
            f,
            "6. Constructs without an exact match in the selected block: {}",
            self.mismatch_details.len()
        )?;
        for d in &self.mismatch_details {
            write!(
                f,
                "   construct {} {} selected block {}; best score {:.4}; ",
                d.construct_index, d.construct, d.assigned_block, d.best_score
            )?;
            match d.suggestion {
                Some((block, entry)) => writeln!(f, "suggested block {block} entry {entry}")?,
                None => writeln!(f, "no nearest match")?,
            }
        }
        Ok(())
    }
}

const NEAREST_PREFIX: &str = "% nearest (score=";
const UNMATCHED_PREFIX: &str = "% unmatched: ";

/// Serializes code predicates in construct order. Nearest-derived groups get
/// a `% nearest (score=...)` header naming the construct; unmatched
/// constructs leave a `% unmatched: ...` line.
pub fn write_predicates_file(outcomes: &[ConstructOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        match o.status {
            Status::Exact => {}
            Status::Nearest(score) => {
                let _ = writeln!(
                    out,
                    "{NEAREST_PREFIX}{score:.4}): {}",
                    serialize_predicate(&o.construct)
                );
            }
            Status::Unmatched => {
                let _ = writeln!(
                    out,
                    "{UNMATCHED_PREFIX}{}",
                    serialize_predicate(&o.construct)
                );
            }
        }
        for p in &o.code_predicates {
            out.push_str(&serialize_predicate(p));
            out.push('\n');
        }
    }
    out
}

/// A construct flagged in a `Predicates` file.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedConstruct {
    /// Serialized construct text.
    pub construct: String,
    /// `Some(score)` for nearest matches, `None` for unmatched constructs.
    pub nearest_score: Option<f64>,
    /// The predicate following a nearest header, if any.
    pub first_predicate: Option<Predicate>,
}

/// Contents of a `Predicates` file as read back by code generation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredicatesFile {
    pub predicates: Vec<Predicate>,
    pub flagged: Vec<FlaggedConstruct>,
}

/// Reads a `Predicates` file, recovering the nearest/unmatched annotations.
pub fn read_predicates_file(text: &str) -> Result<PredicatesFile, ParseError> {
    let mut file = PredicatesFile::default();
    // index into `flagged` of a nearest header still waiting for its predicate
    let mut pending: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(NEAREST_PREFIX) {
            let (score, construct) = rest.split_once("): ").ok_or_else(|| ParseError {
                line: i + 1,
                column: 1,
                message: "malformed nearest annotation".into(),
            })?;
            let score = score.parse::<f64>().map_err(|_| ParseError {
                line: i + 1,
                column: NEAREST_PREFIX.len() + 1,
                message: "malformed nearest score".into(),
            })?;
            file.flagged.push(FlaggedConstruct {
                construct: construct.trim_end().to_string(),
                nearest_score: Some(score),
                first_predicate: None,
            });
            pending = Some(file.flagged.len() - 1);
        } else if let Some(construct) = trimmed.strip_prefix(UNMATCHED_PREFIX) {
            file.flagged.push(FlaggedConstruct {
                construct: construct.trim_end().to_string(),
                nearest_score: None,
                first_predicate: None,
            });
            pending = None;
        } else {
            let parsed = parse_predicates(line).map_err(|e| ParseError { line: i + 1, ..e })?;
            if let Some(c) = parsed.into_iter().next() {
                if let Some(k) = pending.take() {
                    file.flagged[k].first_predicate = Some(c.predicate.clone());
                }
                file.predicates.push(c.predicate);
            }
        }
    }
    Ok(file)
}

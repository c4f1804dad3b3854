//! Knowledge base of mapping blocks and positional match scoring.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::predicate::{Arg, BlockId, MappingBlock, MappingEntry, ModelConstruct, Predicate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("duplicate block id {0}")]
    DuplicateBlock(BlockId),
    #[error("no training data: the knowledge base has no mapping blocks")]
    Empty,
}

/// Placeholder bindings produced by matching a construct against a pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub bindings: BTreeMap<String, Arg>,
}

impl Substitution {
    pub fn get(&self, name: &str) -> Option<&Arg> {
        self.bindings.get(name)
    }

    /// Replaces bound placeholders; unbound ones are handed to `unbound`.
    pub fn apply_with(&self, p: &Predicate, unbound: impl Fn(&str) -> Arg) -> Predicate {
        let args = p
            .args
            .iter()
            .map(|a| match a {
                Arg::Placeholder(n) => self.bindings.get(n).cloned().unwrap_or_else(|| unbound(n)),
                lit => lit.clone(),
            })
            .collect();
        Predicate::new(p.name.clone(), args)
    }

    /// Replaces bound placeholders and leaves unbound ones untouched.
    pub fn apply(&self, p: &Predicate) -> Predicate {
        self.apply_with(p, |n| Arg::placeholder(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    Exact,
    Partial,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub kind: MatchKind,
    pub score: f64,
    pub block_id: BlockId,
    pub entry_ordinal: usize,
    pub substitution: Substitution,
}

impl MatchResult {
    pub fn is_exact(&self) -> bool {
        self.kind == MatchKind::Exact
    }
}

/// Scores a construct against a source pattern, position by position.
///
/// Returns the number of matched positions, the divisor `max(arity)` and the
/// substitution. Equal names with both arities zero count as a full match.
fn score_positions(c: &Predicate, pattern: &Predicate) -> (usize, usize, Substitution) {
    let mut subst = Substitution::default();
    if c.name != pattern.name {
        return (0, 1, subst);
    }
    let max = c.arity().max(pattern.arity());
    if max == 0 {
        return (1, 1, subst);
    }
    let mut matched = 0;
    for (input, pat) in c.args.iter().zip(&pattern.args) {
        match pat {
            Arg::Placeholder(name) => match subst.bindings.get(name) {
                None => {
                    subst.bindings.insert(name.clone(), input.clone());
                    matched += 1;
                }
                Some(bound) if bound == input => matched += 1,
                // first binding wins; the conflicting position scores 0
                Some(_) => {}
            },
            lit => {
                if lit == input {
                    matched += 1;
                }
            }
        }
    }
    (matched, max, subst)
}

/// Scores construct `c` against `entry` located at (`block_id`, `entry_ordinal`).
pub fn match_score(
    c: &ModelConstruct,
    entry: &MappingEntry,
    block_id: BlockId,
    entry_ordinal: usize,
) -> MatchResult {
    let (matched, max, substitution) = score_positions(&c.predicate, &entry.source);
    let kind = if matched == 0 {
        MatchKind::None
    } else if matched == max {
        MatchKind::Exact
    } else {
        MatchKind::Partial
    };
    MatchResult {
        kind,
        score: matched as f64 / max as f64,
        block_id,
        entry_ordinal,
        substitution,
    }
}

/// First entry of `block` (file order) that matches `c` exactly.
pub fn find_exact_in_block(c: &ModelConstruct, block: &MappingBlock) -> Option<MatchResult> {
    block
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| match_score(c, e, block.id, i))
        .find(MatchResult::is_exact)
}

/// Immutable store of mapping blocks, ordered by id and indexed by
/// predicate name and arity.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    blocks: Vec<MappingBlock>,
    index: BTreeMap<(String, usize), Vec<(BlockId, usize)>>,
}

impl KnowledgeBase {
    pub fn build(blocks: Vec<MappingBlock>) -> Result<Self, KbError> {
        if blocks.is_empty() {
            return Err(KbError::Empty);
        }
        let mut seen = HashSet::new();
        for b in &blocks {
            if !seen.insert(b.id) {
                return Err(KbError::DuplicateBlock(b.id));
            }
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.id);
        let mut index: BTreeMap<(String, usize), Vec<(BlockId, usize)>> = BTreeMap::new();
        for b in &blocks {
            for (i, e) in b.entries.iter().enumerate() {
                index
                    .entry((e.source.name.clone(), e.source.arity()))
                    .or_default()
                    .push((b.id, i));
            }
        }
        Ok(KnowledgeBase { blocks, index })
    }

    /// Number of blocks, `M`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks in ascending id order.
    pub fn blocks(&self) -> &[MappingBlock] {
        &self.blocks
    }

    pub fn block_at(&self, position: usize) -> &MappingBlock {
        &self.blocks[position]
    }

    /// Position of block `id` in ascending id order.
    pub fn position_of(&self, id: BlockId) -> Option<usize> {
        self.blocks.binary_search_by_key(&id, |b| b.id).ok()
    }

    pub fn block(&self, id: BlockId) -> Option<&MappingBlock> {
        self.position_of(id).map(|p| &self.blocks[p])
    }

    pub fn entry(&self, id: BlockId, ordinal: usize) -> Option<&MappingEntry> {
        self.block(id).and_then(|b| b.entries.get(ordinal))
    }

    pub fn posting_count(&self) -> usize {
        self.index.values().map(Vec::len).sum()
    }

    /// Postings for every entry whose source has predicate name `name`, any
    /// arity, ordered by (block id, entry ordinal).
    pub fn postings_named(&self, name: &str) -> Vec<(BlockId, usize)> {
        let mut out: Vec<(BlockId, usize)> = self
            .index
            .range((name.to_string(), 0)..)
            .take_while(|((n, _), _)| n == name)
            .flat_map(|(_, postings)| postings.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Best-scoring entry across the whole knowledge base, returned only when
    /// its score reaches `theta`. Ties go to the lower block id, then the
    /// lower entry ordinal.
    pub fn find_nearest(&self, c: &ModelConstruct, theta: f64) -> Option<MatchResult> {
        self.best_match(c).filter(|m| m.score >= theta)
    }

    /// Best-scoring entry regardless of threshold; absent when every score is 0.
    pub fn best_match(&self, c: &ModelConstruct) -> Option<MatchResult> {
        let mut best: Option<MatchResult> = None;
        for (id, ordinal) in self.postings_named(&c.predicate.name) {
            let entry = self.entry(id, ordinal).expect("index posting is valid");
            let m = match_score(c, entry, id, ordinal);
            if m.kind == MatchKind::None {
                continue;
            }
            if best.as_ref().is_none_or(|b| m.score > b.score) {
                best = Some(m);
            }
        }
        best
    }
}

#![allow(dead_code)]

use std::collections::HashMap;

use cods::{Arg, BlockId, KnowledgeBase, MappingBlock, MappingEntry, ModelConstruct, Predicate};
use rand::seq::IndexedRandom;
use rand::Rng;

const NAMES: &[&str] = &["p", "q", "r"];
const ATOMS: &[&str] = &["a", "b", "Car"];

pub fn ident(rng: &mut impl Rng) -> String {
    let first = rng.random_range(0..53u8);
    let mut s = String::new();
    s.push(match first {
        0..=25 => (b'a' + first) as char,
        26..=51 => (b'A' + first - 26) as char,
        _ => '_',
    });
    for _ in 0..rng.random_range(0..6) {
        let c = *b"abcxyzABZ019_".choose(rng).unwrap();
        s.push(c as char);
    }
    s
}

fn predicate_name(rng: &mut impl Rng) -> String {
    let mut s = ident(rng);
    let lower = (b'a' + rng.random_range(0..26u8)) as char;
    s.replace_range(0..1, &lower.to_string());
    s
}

fn any_string(rng: &mut impl Rng) -> String {
    let pool = [
        'a', 'Z', ' ', '"', '\\', '\n', '\t', '\r', '(', ')', ',', '.', '%', '$', 'é', '=', '>',
        ';',
    ];
    (0..rng.random_range(0..8))
        .map(|_| *pool.choose(rng).unwrap())
        .collect()
}

/// Any argument the grammar can express.
pub fn any_arg(rng: &mut impl Rng, placeholders: bool) -> Arg {
    match rng.random_range(0..if placeholders { 4 } else { 3 }) {
        0 => Arg::ident(ident(rng)),
        1 => Arg::int(match rng.random_range(0..4) {
            0 => i64::MIN,
            1 => i64::MAX,
            _ => rng.random_range(-1000..1000),
        }),
        2 => Arg::string(any_string(rng)),
        _ => Arg::placeholder(ident(rng)),
    }
}

/// Any predicate the grammar can express, arity 0 to 5.
pub fn any_predicate(rng: &mut impl Rng, placeholders: bool) -> Predicate {
    let arity = rng.random_range(0..6);
    Predicate::new(
        predicate_name(rng),
        (0..arity).map(|_| any_arg(rng, placeholders)).collect(),
    )
}

/// Blocks with distinct random ids and arbitrary content.
pub fn any_blocks(rng: &mut impl Rng) -> Vec<MappingBlock> {
    let count = rng.random_range(1..6);
    let mut ids: Vec<u32> = Vec::new();
    while ids.len() < count {
        let id = rng.random_range(1..10_000);
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    ids.into_iter()
        .map(|id| MappingBlock {
            id: BlockId(id),
            entries: (0..rng.random_range(1..5))
                .map(|_| MappingEntry {
                    source: any_predicate(rng, true),
                    targets: (0..rng.random_range(1..4))
                        .map(|_| any_predicate(rng, true))
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

fn small_arg(rng: &mut impl Rng, placeholders: bool) -> Arg {
    if placeholders && rng.random_bool(0.4) {
        Arg::placeholder(*["X", "Y"].choose(rng).unwrap())
    } else if rng.random_bool(0.2) {
        Arg::int(rng.random_range(1..3))
    } else {
        Arg::ident(*ATOMS.choose(rng).unwrap())
    }
}

/// Predicate over a tiny vocabulary so that random constructs and patterns
/// collide often.
pub fn small_predicate(rng: &mut impl Rng, placeholders: bool) -> Predicate {
    let arity = rng.random_range(0..4);
    Predicate::new(
        *NAMES.choose(rng).unwrap(),
        (0..arity).map(|_| small_arg(rng, placeholders)).collect(),
    )
}

/// A code predicate built from `source`'s placeholders, sometimes with one
/// the source does not bind.
fn small_target(rng: &mut impl Rng, source: &Predicate) -> Predicate {
    let mut args: Vec<Arg> = source
        .args
        .iter()
        .filter(|a| a.is_placeholder())
        .cloned()
        .collect();
    if rng.random_bool(0.2) {
        args.push(Arg::placeholder("Free"));
    }
    args.push(Arg::ident(source.name.clone()));
    Predicate::new(
        *["java_class", "java_field", "java_stmt"]
            .choose(rng)
            .unwrap(),
        args,
    )
}

pub fn small_blocks(rng: &mut impl Rng, m: usize) -> Vec<MappingBlock> {
    (1..=m as u32)
        .map(|i| MappingBlock {
            id: BlockId(i * 3 + rng.random_range(0..3)),
            entries: (0..rng.random_range(1..5))
                .map(|_| {
                    let source = small_predicate(rng, true);
                    let targets = (0..rng.random_range(1..3))
                        .map(|_| small_target(rng, &source))
                        .collect();
                    MappingEntry { source, targets }
                })
                .collect(),
        })
        .collect()
}

pub fn small_model(rng: &mut impl Rng, n: usize) -> Vec<ModelConstruct> {
    (0..n)
        .map(|index| ModelConstruct {
            index,
            predicate: small_predicate(rng, false),
        })
        .collect()
}

/// Random instance with `1..=max_n` constructs and `1..=max_m` blocks.
pub fn instance(
    rng: &mut impl Rng,
    max_n: usize,
    max_m: usize,
) -> (Vec<ModelConstruct>, KnowledgeBase) {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let kb = KnowledgeBase::build(small_blocks(rng, m)).expect("ids are distinct");
    (small_model(rng, n), kb)
}

/// Independent statement of exact matching: every position either binds a
/// placeholder consistently or repeats the literal.
pub fn oracle_entry_exact(c: &Predicate, source: &Predicate) -> bool {
    if c.name != source.name || c.args.len() != source.args.len() {
        return false;
    }
    let mut bound: HashMap<&str, &Arg> = HashMap::new();
    for (x, pat) in c.args.iter().zip(&source.args) {
        match pat {
            Arg::Placeholder(v) => {
                if *bound.entry(v.as_str()).or_insert(x) != x {
                    return false;
                }
            }
            Arg::Literal(_) => {
                if pat != x {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_block_exact(c: &Predicate, block: &MappingBlock) -> bool {
    block
        .entries
        .iter()
        .any(|e| oracle_entry_exact(c, &e.source))
}

/// Exact-match count of an assignment, by direct enumeration.
pub fn oracle_hits(constructs: &[ModelConstruct], kb: &KnowledgeBase, ids: &[BlockId]) -> usize {
    constructs
        .iter()
        .zip(ids)
        .filter(|(c, id)| oracle_block_exact(&c.predicate, kb.block(**id).unwrap()))
        .count()
}

/// Maximum achievable exact-match count: a construct counts when any block
/// matches it.
pub fn oracle_optimum(constructs: &[ModelConstruct], kb: &KnowledgeBase) -> usize {
    constructs
        .iter()
        .filter(|c| {
            kb.blocks()
                .iter()
                .any(|b| oracle_block_exact(&c.predicate, b))
        })
        .count()
}

/// Independent positional similarity: agreeing positions over the larger
/// arity, a placeholder agreeing with its first binding.
pub fn oracle_score(c: &Predicate, source: &Predicate) -> f64 {
    if c.name != source.name {
        return 0.0;
    }
    let width = c.args.len().max(source.args.len());
    if width == 0 {
        return 1.0;
    }
    let mut bound: HashMap<&str, &Arg> = HashMap::new();
    let mut agree = 0;
    for (x, pat) in c.args.iter().zip(&source.args) {
        let ok = match pat {
            Arg::Placeholder(v) => *bound.entry(v.as_str()).or_insert(x) == x,
            Arg::Literal(_) => pat == x,
        };
        agree += ok as usize;
    }
    agree as f64 / width as f64
}

pub fn oracle_best_score(c: &Predicate, kb: &KnowledgeBase) -> f64 {
    kb.blocks()
        .iter()
        .flat_map(|b| &b.entries)
        .map(|e| oracle_score(c, &e.source))
        .fold(0.0, f64::max)
}

//! Block-assignment search.
//!
//! A solution assigns one mapping block to every input construct. Fitness is
//! the fraction of constructs whose assigned block holds an exact match, so
//! it is separable per construct: the greedy and brute-force oracles rely on
//! that to validate the swarm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kb::{find_exact_in_block, KnowledgeBase};
use crate::predicate::{BlockId, ModelConstruct};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("no input models: the model has no constructs")]
    EmptyModel,
    #[error("no training data: the knowledge base has no mapping blocks")]
    EmptyKb,
    #[error("assignment has {got} entries for {expected} constructs")]
    LengthMismatch { expected: usize, got: usize },
    #[error("block {0} is not in the knowledge base")]
    UnknownBlock(BlockId),
    #[error("search space of {0} assignments exceeds the brute-force cap")]
    CapExceeded(f64),
    #[error("invalid swarm parameters: {0}")]
    InvalidParams(&'static str),
}

/// One block id per construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub block_ids: Vec<BlockId>,
}

impl Assignment {
    pub fn len(&self) -> usize {
        self.block_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_ids.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity clamp; `None` selects `(M - 1) / 2`, floored at 0.5.
    pub v_max: Option<f64>,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            swarm_size: 30,
            iterations: 200,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            v_max: None,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub fn effective_v_max(&self, block_count: usize) -> f64 {
        self.v_max
            .unwrap_or_else(|| (block_count.saturating_sub(1) as f64 / 2.0).max(0.5))
    }

    fn validate(&self, block_count: usize) -> Result<(), SearchError> {
        if self.swarm_size == 0 {
            return Err(SearchError::InvalidParams("swarm size must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(SearchError::InvalidParams("iterations must be at least 1"));
        }
        let v_max = self.effective_v_max(block_count);
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(SearchError::InvalidParams("v_max must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: f64,
    pbest_hits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: Assignment,
    pub best_fitness: f64,
    pub evaluations: usize,
    /// Global best after the initial evaluation and after every iteration.
    pub per_iteration_best: Vec<f64>,
}

/// Which blocks hold an exact match for which constructs.
///
/// Row `i`, column `p` is true when the block at position `p` (ascending id
/// order) has an exact match for construct `i`.
#[derive(Debug, Clone)]
pub struct ExactTable {
    rows: Vec<Vec<bool>>,
    block_count: usize,
}

impl ExactTable {
    pub fn new(constructs: &[ModelConstruct], kb: &KnowledgeBase) -> Self {
        let rows = constructs
            .iter()
            .map(|c| {
                kb.blocks()
                    .iter()
                    .map(|b| find_exact_in_block(c, b).is_some())
                    .collect()
            })
            .collect();
        ExactTable {
            rows,
            block_count: kb.block_count(),
        }
    }

    pub fn construct_count(&self) -> usize {
        self.rows.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn is_exact(&self, construct: usize, position: usize) -> bool {
        self.rows[construct][position]
    }

    /// Number of constructs with an exact match at their assigned positions.
    pub fn hits(&self, positions: &[usize]) -> usize {
        positions
            .iter()
            .zip(&self.rows)
            .filter(|(&p, row)| row[p])
            .count()
    }

    /// Constructs without an exact match in any block.
    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| !self.rows[i].iter().any(|&x| x))
            .collect()
    }
}

fn check_inputs(constructs: &[ModelConstruct], kb: &KnowledgeBase) -> Result<(), SearchError> {
    if constructs.is_empty() {
        return Err(SearchError::EmptyModel);
    }
    if kb.block_count() == 0 {
        return Err(SearchError::EmptyKb);
    }
    Ok(())
}

fn ratio(hits: usize, n: usize) -> f64 {
    hits as f64 / n as f64
}

/// Exact-match fraction of `a`: `(1/N) * sum_i [construct i matches exactly in block a_i]`.
pub fn fitness(
    a: &Assignment,
    constructs: &[ModelConstruct],
    kb: &KnowledgeBase,
) -> Result<f64, SearchError> {
    if constructs.is_empty() {
        return Err(SearchError::EmptyModel);
    }
    if a.len() != constructs.len() {
        return Err(SearchError::LengthMismatch {
            expected: constructs.len(),
            got: a.len(),
        });
    }
    let mut hits = 0;
    for (c, &id) in constructs.iter().zip(&a.block_ids) {
        let block = kb.block(id).ok_or(SearchError::UnknownBlock(id))?;
        if find_exact_in_block(c, block).is_some() {
            hits += 1;
        }
    }
    Ok(ratio(hits, constructs.len()))
}

/// Rounds a continuous coordinate to a block position in `[0, M-1]`.
fn decode_component(x: f64, block_count: usize) -> usize {
    let max = (block_count - 1) as f64;
    x.round().clamp(0.0, max) as usize
}

fn decode(position: &[f64], block_count: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend(position.iter().map(|&x| decode_component(x, block_count)));
}

fn to_assignment(positions: &[usize], kb: &KnowledgeBase) -> Assignment {
    Assignment {
        block_ids: positions.iter().map(|&p| kb.block_at(p).id).collect(),
    }
}

/// Particle swarm search over block assignments.
///
/// Positions live in `[0, M-1]^N` and decode by rounding each component to a
/// block position. Velocities follow the inertia-weighted update with
/// per-component random factors drawn from a ChaCha8 stream seeded with
/// `params.seed`, so a fixed seed reproduces the run exactly.
pub fn pso_search(
    constructs: &[ModelConstruct],
    kb: &KnowledgeBase,
    params: &PsoParams,
) -> Result<SearchOutcome, SearchError> {
    check_inputs(constructs, kb)?;
    let table = ExactTable::new(constructs, kb);
    pso_search_table(&table, kb, params)
}

/// [`pso_search`] over a precomputed [`ExactTable`].
pub fn pso_search_table(
    table: &ExactTable,
    kb: &KnowledgeBase,
    params: &PsoParams,
) -> Result<SearchOutcome, SearchError> {
    let n = table.construct_count();
    let m = table.block_count();
    if n == 0 {
        return Err(SearchError::EmptyModel);
    }
    if m == 0 {
        return Err(SearchError::EmptyKb);
    }
    params.validate(m)?;
    let v_max = params.effective_v_max(m);
    let upper = (m - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut decoded = Vec::with_capacity(n);
    let mut evaluations = 0;

    let mut swarm: Vec<Particle> = Vec::with_capacity(params.swarm_size);
    for _ in 0..params.swarm_size {
        let position: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * upper).collect();
        let velocity: Vec<f64> = (0..n)
            .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * v_max)
            .collect();
        decode(&position, m, &mut decoded);
        let hits = table.hits(&decoded);
        evaluations += 1;
        swarm.push(Particle {
            pbest_position: position.clone(),
            pbest_fitness: ratio(hits, n),
            pbest_hits: hits,
            position,
            velocity,
        });
    }

    // Earliest particle wins ties.
    let mut gbest_index = 0;
    for (i, p) in swarm.iter().enumerate() {
        if p.pbest_hits > swarm[gbest_index].pbest_hits {
            gbest_index = i;
        }
    }
    let mut gbest_position = swarm[gbest_index].pbest_position.clone();
    let mut gbest_hits = swarm[gbest_index].pbest_hits;
    let mut per_iteration_best = Vec::with_capacity(params.iterations + 1);
    per_iteration_best.push(ratio(gbest_hits, n));

    for _ in 0..params.iterations {
        for p in swarm.iter_mut() {
            let dims = p
                .position
                .iter_mut()
                .zip(p.velocity.iter_mut())
                .zip(&p.pbest_position)
                .zip(&gbest_position);
            for (((x, v), pbest), gbest) in dims {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let next = params.inertia * *v
                    + params.cognitive * r1 * (pbest - *x)
                    + params.social * r2 * (gbest - *x);
                *v = next.clamp(-v_max, v_max);
                *x = (*x + *v).clamp(0.0, upper);
            }
        }
        // Evaluation order is the particle order; pbest/gbest updates are
        // strict improvements only.
        let mut improved_from = None;
        for (i, p) in swarm.iter_mut().enumerate() {
            decode(&p.position, m, &mut decoded);
            let hits = table.hits(&decoded);
            evaluations += 1;
            if hits > p.pbest_hits {
                p.pbest_hits = hits;
                p.pbest_fitness = ratio(hits, n);
                p.pbest_position.clone_from(&p.position);
            }
            if p.pbest_hits > gbest_hits {
                gbest_hits = p.pbest_hits;
                improved_from = Some(i);
            }
        }
        if let Some(i) = improved_from {
            gbest_position.clone_from(&swarm[i].pbest_position);
        }
        per_iteration_best.push(ratio(gbest_hits, n));
    }

    decode(&gbest_position, m, &mut decoded);
    Ok(SearchOutcome {
        best: to_assignment(&decoded, kb),
        best_fitness: ratio(gbest_hits, n),
        evaluations,
        per_iteration_best,
    })
}

/// Picks, per construct, the lowest-id block with an exact match, falling
/// back to the lowest id overall. Optimal because fitness is separable.
pub fn greedy_oracle(
    constructs: &[ModelConstruct],
    kb: &KnowledgeBase,
) -> Result<SearchOutcome, SearchError> {
    check_inputs(constructs, kb)?;
    let table = ExactTable::new(constructs, kb);
    let positions: Vec<usize> = (0..constructs.len())
        .map(|i| {
            (0..kb.block_count())
                .find(|&p| table.is_exact(i, p))
                .unwrap_or(0)
        })
        .collect();
    let fitness = ratio(table.hits(&positions), constructs.len());
    Ok(SearchOutcome {
        best: to_assignment(&positions, kb),
        best_fitness: fitness,
        evaluations: constructs.len() * kb.block_count(),
        per_iteration_best: vec![fitness],
    })
}

pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1_000_000;

/// Exhaustive maximum over all `M^N` assignments; the lexicographically
/// smallest optimal assignment wins ties.
pub fn brute_force_oracle(
    constructs: &[ModelConstruct],
    kb: &KnowledgeBase,
    cap: u64,
) -> Result<SearchOutcome, SearchError> {
    check_inputs(constructs, kb)?;
    let n = constructs.len();
    let m = kb.block_count();
    let space = (m as f64).powi(n as i32);
    if space > cap as f64 {
        return Err(SearchError::CapExceeded(space));
    }
    let table = ExactTable::new(constructs, kb);
    let mut current = vec![0usize; n];
    let mut best = current.clone();
    let mut best_hits = table.hits(&current);
    let mut evaluations = 1;
    // odometer over positions, last component fastest, so the visiting order
    // is lexicographic
    loop {
        let mut d = n;
        loop {
            if d == 0 {
                let fitness = ratio(best_hits, n);
                return Ok(SearchOutcome {
                    best: to_assignment(&best, kb),
                    best_fitness: fitness,
                    evaluations,
                    per_iteration_best: vec![fitness],
                });
            }
            d -= 1;
            current[d] += 1;
            if current[d] < m {
                break;
            }
            current[d] = 0;
        }
        let hits = table.hits(&current);
        evaluations += 1;
        if hits > best_hits {
            best_hits = hits;
            best.clone_from(&current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::{parse_mapping_blocks, parse_predicates};

    fn toy() -> (Vec<ModelConstruct>, KnowledgeBase) {
        let constructs =
            parse_predicates("class(Door).\nattribute(Door, locked, boolean).").unwrap();
        let kb = KnowledgeBase::build(
            parse_mapping_blocks(
                "block 1\nmap: class($C) => java_class($C).\nendblock\nblock 2\nmap: attribute($C, $A, $T) => java_field($C, $A, $T).\nendblock",
            )
            .unwrap(),
        )
        .unwrap();
        (constructs, kb)
    }

    fn assign(ids: &[u32]) -> Assignment {
        Assignment {
            block_ids: ids.iter().map(|&i| BlockId(i)).collect(),
        }
    }

    #[test]
    fn fitness_examples() {
        let (cs, kb) = toy();
        assert_eq!(fitness(&assign(&[1, 2]), &cs, &kb).unwrap(), 1.0);
        assert_eq!(fitness(&assign(&[2, 1]), &cs, &kb).unwrap(), 0.0);
        assert_eq!(fitness(&assign(&[1, 1]), &cs, &kb).unwrap(), 0.5);
    }

    #[test]
    fn fitness_errors() {
        let (cs, kb) = toy();
        assert_eq!(
            fitness(&assign(&[1, 9]), &cs, &kb),
            Err(SearchError::UnknownBlock(BlockId(9)))
        );
        assert!(matches!(
            fitness(&assign(&[1]), &cs, &kb),
            Err(SearchError::LengthMismatch { .. })
        ));
        assert_eq!(
            fitness(&assign(&[]), &[], &kb),
            Err(SearchError::EmptyModel)
        );
    }

    #[test]
    fn greedy_on_toy() {
        let (cs, kb) = toy();
        let g = greedy_oracle(&cs, &kb).unwrap();
        assert_eq!(g.best, assign(&[1, 2]));
        assert_eq!(g.best_fitness, 1.0);
    }

    #[test]
    fn greedy_falls_back_to_lowest_block() {
        let (mut cs, kb) = toy();
        cs.extend(
            parse_predicates("timer(Door, t, 5).")
                .unwrap()
                .into_iter()
                .map(|mut c| {
                    c.index = 2;
                    c
                }),
        );
        let g = greedy_oracle(&cs, &kb).unwrap();
        assert_eq!(g.best, assign(&[1, 2, 1]));
        assert!((g.best_fitness - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_counts_evaluations() {
        let cs = parse_predicates("class(Door).").unwrap();
        let kb = toy().1;
        let b = brute_force_oracle(&cs, &kb, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(b.evaluations, 2);
        assert_eq!(b.best, assign(&[1]));

        let cs = parse_predicates("class(A).\nclass(B).\nclass(C).").unwrap();
        let kb = KnowledgeBase::build(
            parse_mapping_blocks("block 1\nmap: a => b.\nendblock\nblock 2\nmap: a => b.\nendblock\nblock 3\nmap: class($C) => java_class($C).\nendblock").unwrap(),
        )
        .unwrap();
        let b = brute_force_oracle(&cs, &kb, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(b.evaluations, 27);
        assert_eq!(b.best, assign(&[3, 3, 3]));
        assert_eq!(b.best_fitness, 1.0);
    }

    #[test]
    fn brute_force_cap() {
        let (cs, kb) = toy();
        assert!(matches!(
            brute_force_oracle(&cs, &kb, 3),
            Err(SearchError::CapExceeded(_))
        ));
    }

    #[test]
    fn brute_force_ties_pick_lexicographically_smallest() {
        let cs = parse_predicates("timer(X).\nclass(A).").unwrap();
        let kb = KnowledgeBase::build(
            parse_mapping_blocks("block 1\nmap: class($C) => java_class($C).\nendblock\nblock 2\nmap: class($C) => java_class($C).\nendblock").unwrap(),
        )
        .unwrap();
        let b = brute_force_oracle(&cs, &kb, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(b.best, assign(&[1, 1]));
    }

    #[test]
    fn single_block_kb() {
        let (cs, _) = toy();
        let kb = KnowledgeBase::build(
            parse_mapping_blocks("block 1\nmap: class($C) => java_class($C).\nendblock").unwrap(),
        )
        .unwrap();
        let out = pso_search(&cs, &kb, &PsoParams::default()).unwrap();
        assert_eq!(out.best, assign(&[1, 1]));
        assert_eq!(out.best_fitness, 0.5);
    }

    #[test]
    fn pso_counts_evaluations_and_is_monotone() {
        let (cs, kb) = toy();
        let params = PsoParams {
            swarm_size: 7,
            iterations: 13,
            seed: 3,
            ..PsoParams::default()
        };
        let out = pso_search(&cs, &kb, &params).unwrap();
        assert_eq!(out.evaluations, 7 * 14);
        assert_eq!(out.per_iteration_best.len(), 14);
        assert!(out.per_iteration_best.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*out.per_iteration_best.last().unwrap(), out.best_fitness);
        assert_eq!(fitness(&out.best, &cs, &kb).unwrap(), out.best_fitness);
    }

    #[test]
    fn pso_rejects_bad_inputs() {
        let (cs, kb) = toy();
        assert_eq!(
            pso_search(&[], &kb, &PsoParams::default()),
            Err(SearchError::EmptyModel)
        );
        let bad = PsoParams {
            swarm_size: 0,
            ..PsoParams::default()
        };
        assert!(matches!(
            pso_search(&cs, &kb, &bad),
            Err(SearchError::InvalidParams(_))
        ));
        let bad = PsoParams {
            v_max: Some(0.0),
            ..PsoParams::default()
        };
        assert!(matches!(
            pso_search(&cs, &kb, &bad),
            Err(SearchError::InvalidParams(_))
        ));
    }

    #[test]
    fn decode_rounds_and_clamps() {
        assert_eq!(decode_component(0.49, 5), 0);
        assert_eq!(decode_component(0.5, 5), 1);
        assert_eq!(decode_component(3.7, 5), 4);
        assert_eq!(decode_component(9.0, 5), 4);
        assert_eq!(decode_component(-1.0, 5), 0);
    }
}

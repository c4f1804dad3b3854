//! Java code generation from predicate-encoded class and state models.
//!
//! Instead of a hand-written rule set, the generator searches a knowledge
//! base of earlier model-to-code examples (mapping blocks). A particle swarm
//! picks one block per input construct; the chosen blocks' entries rewrite
//! each construct into code predicates, which are then rendered as Java.
//!
//! Pipeline: [`predicate`] parsing → [`kb`] indexing → [`search`] →
//! [`transform`] → [`codegen`]; [`project`] drives it from the file system.

pub mod codegen;
pub mod corpus;
pub mod kb;
pub mod predicate;
pub mod project;
pub mod search;
pub mod transform;

pub use codegen::{render_files, write_codegen_report, CodegenReport, SourceFile};
pub use kb::{find_exact_in_block, match_score, KnowledgeBase, MatchKind, MatchResult};
pub use predicate::{
    parse_mapping_blocks, parse_predicates, serialize_mapping_blocks, serialize_predicate, Arg,
    BlockId, MappingBlock, MappingEntry, ModelConstruct, ParseError, Predicate,
};
pub use project::{Overrides, Project, ProjectError};
pub use search::{
    brute_force_oracle, fitness, greedy_oracle, pso_search, Assignment, PsoParams, SearchOutcome,
};
pub use transform::{transform_all, transform_one, ConstructOutcome, Status, TransformReport};

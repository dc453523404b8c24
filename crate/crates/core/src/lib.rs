//! Synchronizing words of low weight for weighted deterministic finite
//! automata.
//!
//! * [`automaton`]: the automaton model, its file format, word application and
//!   synchronizability checks.
//! * [`powerset`]: the bounded powerset automaton and its table of
//!   minimal-weight merging words.
//! * [`heuristics`]: greedy synthesis driven by one of four scoring rules.
//! * [`oracle`]: exact minimum-weight and minimum-length searches for small
//!   automata.
//! * [`corpus`]: built-in automata and generators.
//! * [`cli`]: the `syncword` command-line front end.

pub mod automaton;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod heuristics;
pub mod oracle;
pub mod powerset;
pub mod stateset;

pub use automaton::{Automaton, Letter, Word};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use heuristics::{approximate_weight_synch, run_grid, HeuristicKind, SyncResult, SyncStep};
pub use oracle::{min_length_sync, min_weight_sync, OracleResult};
pub use powerset::{build_subset_automaton, compute_words, SubsetAutomaton, WordTable};
pub use stateset::StateSet;

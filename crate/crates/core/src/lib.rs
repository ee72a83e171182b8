//! Markov-Dyck shifts of finite directed graphs: the graph inverse semigroup,
//! periodic orbit enumeration, conjugacy invariants, and recovery of graphs in
//! several parametrised families from those invariants.

pub mod config;
pub mod error;
pub mod graph;
pub mod families;
pub mod invariants;
pub mod reconstruct;
pub mod semigroup;
pub mod shift;

pub use config::SearchConfig;
pub use error::{Error, Result};

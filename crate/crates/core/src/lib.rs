//! Exact computation in free groups, finite inverse monoids and finite group
//! expansions: Stallings automata, commuting graph labellings, suitable
//! groups, and the test harness around them.

pub mod automata;
pub mod cli;
pub mod error;
pub mod graphs;
pub mod groups;
pub mod inverse_monoids;
pub mod labellings;
pub mod par;
pub mod relational;
pub mod words;

pub use error::{Error, Result};

//! Exact analysis of pickleball doubles scoring systems as absorbing Markov chains.
//!
//! Three scoring systems are modelled: conventional side-out scoring, modified
//! rally scoring, and hybrid rally scoring (rally scoring with the doubles
//! two-server rotation). For each, the crate builds the exact one-step transition
//! blocks, solves for win probabilities and game-length moments in rational
//! arithmetic, and evaluates the first-server advantage
//! `P(A wins | A serves first) - P(A wins | B serves first)`.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod rational;
pub mod simulator;
pub mod solver;
pub mod state_space;
pub mod transitions;

pub use error::{Error, Result};
pub use rational::Rational;
pub use solver::{AbsorbingChain, ChainSummary};
pub use state_space::{GameState, ScoringSystem, StateIndex, SystemKind, Team};
pub use transitions::{RallyParams, TransitionModel};

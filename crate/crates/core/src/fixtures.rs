//! Small absorbing chains with known answers.

use crate::matrix::SparseMatrix;
use crate::rational::Rational;
use crate::solver::AbsorbingChain;
use crate::state_space::{GameState, ScoringSystem};
use crate::transitions::{RallyParams, TransitionModel};
use crate::error::Result;

/// Transient index of position 2 in [`gamblers_ruin`].
pub const RUIN_START: usize = 1;

/// Random walk on `{0, ..., 4}` absorbed at both ends; step up with probability `p`.
///
/// Transient positions 1, 2, 3 map to indices 0, 1, 2. Absorbing column 0 is
/// position 4, column 1 is position 0. With `p` the server's point probability
/// this is also the tennis game from deuce (position 2 = deuce, 3 = advantage server).
pub fn gamblers_ruin(p: Rational) -> AbsorbingChain<Rational> {
    let q = Rational::from(1) - &p;
    let q_rows = vec![
        vec![(1, p.clone())],
        vec![(0, q.clone()), (2, p.clone())],
        vec![(1, q.clone())],
    ];
    let s_rows = vec![vec![(1, q)], vec![], vec![(0, p)]];
    AbsorbingChain::new(SparseMatrix::from_rows(3, q_rows), SparseMatrix::from_rows(2, s_rows))
        .expect("well-formed fixture")
}

/// The twelve transient states of side-out deuce: scores `(n-1, n-1)`, `(n-1, n)`, `(n, n-1)` times four servers.
pub fn pickleball_deuce_states(n: u32) -> Vec<GameState> {
    let (d, v) = (n - 1, n);
    let mut states: Vec<GameState> = [(d, d), (d, v), (v, d)]
        .into_iter()
        .flat_map(|(i, j)| (1..=4).map(move |k| GameState::at(i, j, k)))
        .collect();
    states.sort();
    states
}

/// The side-out deuce game as a closed 14-state chain (12 transient, 2 absorbing).
pub fn pickleball_deuce(params: RallyParams) -> Result<AbsorbingChain<Rational>> {
    let n = 11;
    let model = TransitionModel::build(ScoringSystem::side_out(n)?, params)?;
    let states = pickleball_deuce_states(n);
    let rows: Vec<usize> = states.iter().map(|s| model.index_of(s).map(|i| i.0)).collect::<Result<_>>()?;
    let position = |full: usize| rows.iter().position(|&r| r == full).expect("deuce cluster is closed");
    let q_rows = rows.iter().map(|&r| model.q.row(r).iter().map(|(c, v)| (position(*c), v.clone())).collect()).collect();
    let s_rows = rows.iter().map(|&r| model.s.row(r).to_vec()).collect();
    AbsorbingChain::new(SparseMatrix::from_rows(rows.len(), q_rows), SparseMatrix::from_rows(2, s_rows))
}

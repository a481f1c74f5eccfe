//! Fundamental-matrix quantities of an absorbing chain without forming `M = (I - Q)^-1`.
//!
//! With `M` the fundamental matrix, a start state `i` has
//! absorption probabilities `(M S)_i`, mean absorption time `t_i = (M 1)_i`, and
//! variance `2 u_i - t_i - t_i²` where `u = M t`. Each of these is one solve of
//! `(I - Q) x = b`.
//!
//! The scoring chains are almost acyclic: cycles live only inside one score cell
//! (the server rotation) and inside the deuce/advantage cluster. The solver splits
//! the transient states into strongly connected components of `Q`, visits them
//! sinks first, solves each small block densely and substitutes the result
//! upwards. Work grows linearly with the number of cells.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, One};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::rational::{to_f64, Rational};
use crate::state_space::{GameState, StateIndex, Team};
use crate::transitions::TransitionModel;

/// Scalars the elimination can run over: exact rationals or doubles.
pub trait Field: Clone + Num + Neg<Output = Self> + Send + Sync + Debug {
    /// Pivot preference; larger is better, zero means unusable.
    fn pivot_weight(&self) -> f64;
}

impl Field for Rational {
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Field for f64 {
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

/// Strongly connected components of the transient graph, sinks first.
fn components<T>(q: &SparseMatrix<T>) -> Vec<Vec<usize>> {
    let m = q.n_rows();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; m];
    let mut low = vec![0usize; m];
    let mut on_stack = vec![false; m];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // explicit call stack of (node, next edge position)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..m {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = calls.last_mut() {
            if *edge == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let row = q.row(v);
            if *edge < row.len() {
                let w = row[*edge].0;
                *edge += 1;
                if index[w] == UNSEEN {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut block = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    block.push(w);
                    if w == v {
                        break;
                    }
                }
                block.sort_unstable();
                out.push(block);
            }
        }
    }
    out
}

/// Solves the dense system `a x = b` in place (`b` holds several right-hand sides per row).
fn dense_solve<T: Field>(mut a: Vec<Vec<T>>, mut b: Vec<Vec<T>>, members: &[usize]) -> Result<Vec<Vec<T>>> {
    let size = a.len();
    for col in 0..size {
        let pivot = (col..size)
            .map(|r| (r, a[r][col].pivot_weight()))
            .fold((col, 0.0), |best, cand| if cand.1 > best.1 { cand } else { best });
        if pivot.1 == 0.0 {
            return Err(Error::SingularBlock(members.to_vec()));
        }
        a.swap(col, pivot.0);
        b.swap(col, pivot.0);
        let inv = T::one() / a[col][col].clone();
        for r in col + 1..size {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            for c in col..size {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            for c in 0..b[r].len() {
                let delta = factor.clone() * b[col][c].clone();
                b[r][c] = b[r][c].clone() - delta;
            }
        }
    }
    for row in (0..size).rev() {
        for c in 0..b[row].len() {
            let mut acc = b[row][c].clone();
            for k in row + 1..size {
                acc = acc - a[row][k].clone() * b[k][c].clone();
            }
            b[row][c] = acc / a[row][row].clone();
        }
    }
    Ok(b)
}

/// Transient block `Q`, absorbing block `S`, and the block order used for elimination.
#[derive(Debug, Clone)]
pub struct AbsorbingChain<T> {
    q: SparseMatrix<T>,
    s: SparseMatrix<T>,
    blocks: Vec<Vec<usize>>,
}

impl<T: Field> AbsorbingChain<T> {
    pub fn new(q: SparseMatrix<T>, s: SparseMatrix<T>) -> Result<Self> {
        if q.n_rows() != q.n_cols() || s.n_rows() != q.n_rows() {
            return Err(Error::Usage(format!(
                "Q is {}x{} and S is {}x{}",
                q.n_rows(),
                q.n_cols(),
                s.n_rows(),
                s.n_cols()
            )));
        }
        let blocks = components(&q);
        Ok(AbsorbingChain { q, s, blocks })
    }

    pub fn transient_count(&self) -> usize {
        self.q.n_rows()
    }

    pub fn absorbing_count(&self) -> usize {
        self.s.n_cols()
    }

    pub fn q(&self) -> &SparseMatrix<T> {
        &self.q
    }

    pub fn s(&self) -> &SparseMatrix<T> {
        &self.s
    }

    /// Largest strongly connected block eliminated densely.
    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Solves `(I - Q) X = B` for a row-major right-hand side `B` (one row per transient state).
    pub fn solve(&self, rhs: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        let m = self.transient_count();
        assert_eq!(rhs.len(), m, "right-hand side has the wrong number of rows");
        let width = rhs.first().map_or(0, Vec::len);
        let mut x: Vec<Vec<T>> = vec![Vec::new(); m];
        let mut local = vec![usize::MAX; m];

        for block in &self.blocks {
            let single = block.len() == 1 && !self.q.row(block[0]).iter().any(|(c, _)| *c == block[0]);
            if single {
                let r = block[0];
                let mut value = rhs[r].clone();
                for (c, v) in self.q.row(r) {
                    for (acc, known) in value.iter_mut().zip(&x[*c]) {
                        *acc = acc.clone() + v.clone() * known.clone();
                    }
                }
                x[r] = value;
                continue;
            }

            for (pos, &r) in block.iter().enumerate() {
                local[r] = pos;
            }
            let size = block.len();
            let mut a = vec![vec![T::zero(); size]; size];
            let mut b = Vec::with_capacity(size);
            for (pos, &r) in block.iter().enumerate() {
                a[pos][pos] = T::one();
                let mut value = rhs[r].clone();
                for (c, v) in self.q.row(r) {
                    if local[*c] != usize::MAX {
                        a[pos][local[*c]] = a[pos][local[*c]].clone() - v.clone();
                    } else {
                        for (acc, known) in value.iter_mut().zip(&x[*c]) {
                            *acc = acc.clone() + v.clone() * known.clone();
                        }
                    }
                }
                b.push(value);
            }
            let solved = dense_solve(a, b, block)?;
            for (&r, value) in block.iter().zip(solved) {
                local[r] = usize::MAX;
                x[r] = value;
            }
        }
        debug_assert!(x.iter().all(|row| row.len() == width));
        Ok(x)
    }

    /// Probability of ending in each absorbing state, per transient state.
    pub fn absorption(&self) -> Result<Vec<Vec<T>>> {
        let rhs: Vec<Vec<T>> = (0..self.transient_count())
            .map(|r| (0..self.absorbing_count()).map(|c| self.s.get(r, c)).collect())
            .collect();
        self.solve(&rhs)
    }

    /// Probability of ending in absorbing column `col` only.
    pub fn absorption_column(&self, col: usize) -> Result<Vec<T>> {
        let rhs: Vec<Vec<T>> = (0..self.transient_count()).map(|r| vec![self.s.get(r, col)]).collect();
        Ok(self.solve(&rhs)?.into_iter().map(|mut v| v.pop().unwrap()).collect())
    }

    /// Every quantity of interest for every transient state.
    pub fn solve_all(&self) -> Result<ChainSolution<T>> {
        let m = self.transient_count();
        let k = self.absorbing_count();
        let rhs: Vec<Vec<T>> = (0..m)
            .map(|r| {
                let mut row: Vec<T> = (0..k).map(|c| self.s.get(r, c)).collect();
                row.push(T::one());
                row
            })
            .collect();
        let first = self.solve(&rhs)?;
        let mean: Vec<T> = first.iter().map(|row| row[k].clone()).collect();
        let u = self.solve(&mean.iter().map(|t| vec![t.clone()]).collect::<Vec<_>>())?;
        let two = T::one() + T::one();
        let variance = mean
            .iter()
            .zip(u)
            .map(|(t, u)| two.clone() * u[0].clone() - t.clone() - t.clone() * t.clone())
            .collect();
        let absorption = first.into_iter().map(|mut row| {
            row.truncate(k);
            row
        });
        Ok(ChainSolution { absorption: absorption.collect(), mean, variance })
    }
}

/// Absorption probabilities, mean and variance of absorption time for every transient state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSolution<T> {
    /// `absorption[i][c]`: probability of absorbing into column `c` from state `i`.
    pub absorption: Vec<Vec<T>>,
    pub mean: Vec<T>,
    pub variance: Vec<T>,
}

impl AbsorbingChain<Rational> {
    /// Exact chain of a scoring model; rejects `p_A = p_B = 0`.
    pub fn from_model(model: &TransitionModel) -> Result<Self> {
        model.params.ensure_nondegenerate()?;
        AbsorbingChain::new(model.q.clone(), model.s.clone())
    }
}

impl AbsorbingChain<f64> {
    /// Double-precision mirror of [`AbsorbingChain::from_model`], for bulk tables only.
    pub fn from_model_f64(model: &TransitionModel) -> Result<Self> {
        model.params.ensure_nondegenerate()?;
        AbsorbingChain::new(model.q.map(to_f64), model.s.map(to_f64))
    }
}

/// Exact summary from one start state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSummary {
    pub start: GameState,
    pub absorb_prob_a: Rational,
    pub absorb_prob_b: Rational,
    pub mean_duration: Rational,
    pub duration_variance: Rational,
}

fn transient_start(model: &TransitionModel, start: StateIndex) -> Result<usize> {
    if start.0 >= model.transient_count() {
        return Err(Error::Domain(format!(
            "start {} is absorbing; no transient summary exists",
            model.system.state_of(start).map(|s| s.to_string()).unwrap_or_else(|_| start.0.to_string())
        )));
    }
    Ok(start.0)
}

pub fn absorption_probabilities(model: &TransitionModel, start: StateIndex) -> Result<(Rational, Rational)> {
    let r = transient_start(model, start)?;
    let probs = AbsorbingChain::from_model(model)?.absorption()?;
    let mut row = probs.into_iter().nth(r).unwrap();
    let b = row.pop().unwrap();
    let a = row.pop().unwrap();
    Ok((a, b))
}

pub fn expected_duration(model: &TransitionModel, start: StateIndex) -> Result<Rational> {
    let r = transient_start(model, start)?;
    let chain = AbsorbingChain::from_model(model)?;
    let ones = vec![vec![Rational::one()]; chain.transient_count()];
    Ok(chain.solve(&ones)?.swap_remove(r).pop().unwrap())
}

pub fn duration_variance(model: &TransitionModel, start: StateIndex) -> Result<Rational> {
    let r = transient_start(model, start)?;
    Ok(AbsorbingChain::from_model(model)?.solve_all()?.variance.swap_remove(r))
}

pub fn chain_summary(model: &TransitionModel, start: &GameState) -> Result<ChainSummary> {
    let index = model.index_of(start)?;
    let r = transient_start(model, index)?;
    let solution = AbsorbingChain::from_model(model)?.solve_all()?;
    Ok(summary_at(&solution, r, *start))
}

pub(crate) fn summary_at(solution: &ChainSolution<Rational>, r: usize, start: GameState) -> ChainSummary {
    ChainSummary {
        start,
        absorb_prob_a: solution.absorption[r][Team::A.column()].clone(),
        absorb_prob_b: solution.absorption[r][Team::B.column()].clone(),
        mean_duration: solution.mean[r].clone(),
        duration_variance: solution.variance[r].clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};
    use crate::state_space::ScoringSystem;
    use crate::transitions::RallyParams;

    #[test]
    fn gamblers_ruin_midpoint() {
        let chain = fixtures::gamblers_ruin(ratio(1, 2));
        let sol = chain.solve_all().unwrap();
        let mid = fixtures::RUIN_START;
        assert_eq!(sol.absorption[mid], vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(sol.mean[mid], int(4));
        assert_eq!(sol.variance[mid], int(8));
    }

    #[test]
    fn tennis_deuce() {
        let p = ratio(3, 5);
        let chain = fixtures::gamblers_ruin(p);
        let win = chain.absorption_column(0).unwrap();
        assert_eq!(win[fixtures::RUIN_START], ratio(9, 13));
    }

    #[test]
    fn components_of_side_out_chain() {
        let model = TransitionModel::build(ScoringSystem::side_out(11).unwrap(), RallyParams::even(ratio(11, 25)).unwrap()).unwrap();
        let blocks = components(&model.q);
        // every interior cell is one 4-cycle, the deuce cluster is one block of 12
        assert_eq!(blocks.iter().map(Vec::len).max(), Some(12));
        assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), 492);
        assert_eq!(blocks.len(), 121);
    }

    #[test]
    fn certain_server_side_out() {
        let model = TransitionModel::build(ScoringSystem::side_out(11).unwrap(), RallyParams::new(int(1), int(1)).unwrap()).unwrap();
        let summary = chain_summary(&model, &GameState::at(0, 0, 2)).unwrap();
        assert_eq!(summary.absorb_prob_a, int(1));
        assert_eq!(summary.absorb_prob_b, int(0));
        assert_eq!(summary.mean_duration, int(11));
        assert_eq!(summary.duration_variance, int(0));
    }

    #[test]
    fn certain_server_rally_systems() {
        let ones = RallyParams::new(int(1), int(1)).unwrap();
        let mr = TransitionModel::build(ScoringSystem::modified_rally(21).unwrap(), ones.clone()).unwrap();
        let start = mr.index_of(&GameState::at(0, 0, 1)).unwrap();
        assert_eq!(expected_duration(&mr, start).unwrap(), int(21));
        let hy = TransitionModel::build(ScoringSystem::hybrid_rally(21).unwrap(), ones).unwrap();
        let start = hy.index_of(&GameState::at(0, 0, 2)).unwrap();
        assert_eq!(duration_variance(&hy, start).unwrap(), int(0));
        assert_eq!(absorption_probabilities(&hy, start).unwrap(), (int(1), int(0)));
    }

    #[test]
    fn degenerate_rejected() {
        let model = TransitionModel::build(ScoringSystem::side_out(11).unwrap(), RallyParams::new(int(0), int(0)).unwrap()).unwrap();
        assert_eq!(absorption_probabilities(&model, StateIndex(0)), Err(Error::DegenerateChain));
        assert_eq!(expected_duration(&model, StateIndex(0)), Err(Error::DegenerateChain));
    }

    #[test]
    fn absorbing_start_rejected() {
        let model = TransitionModel::build(ScoringSystem::side_out(5).unwrap(), RallyParams::even(ratio(1, 2)).unwrap()).unwrap();
        assert!(matches!(chain_summary(&model, &GameState::Absorbed(Team::A)), Err(Error::Domain(_))));
    }

    #[test]
    fn float_path_tracks_exact_path() {
        let model = TransitionModel::build(ScoringSystem::modified_rally(21).unwrap(), RallyParams::new(ratio(11, 25), ratio(23, 50)).unwrap()).unwrap();
        let exact = AbsorbingChain::from_model(&model).unwrap().solve_all().unwrap();
        let float = AbsorbingChain::from_model_f64(&model).unwrap().solve_all().unwrap();
        for r in [0, 1, 100, 500] {
            assert!((to_f64(&exact.absorption[r][0]) - float.absorption[r][0]).abs() < 1e-12);
            assert!((to_f64(&exact.mean[r]) - float.mean[r]).abs() < 1e-9);
            assert!((to_f64(&exact.variance[r]) - float.variance[r]).abs() < 1e-7);
        }
    }
}

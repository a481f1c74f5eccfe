//! Exact one-step transition blocks `(Q, S)` for the three scoring systems.
//!
//! Each table is written block by block through a [`TableWriter`] that rejects an
//! entry written twice and checks that every transient row receives exactly its
//! two outcomes (server wins the rally / server faults).

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::SparseRationalMatrix;
use crate::rational::{fraction_string, Rational};
use crate::state_space::{GameState, ScoringSystem, StateIndex, SystemKind, Team};

/// Probabilities that each team wins a rally on its own serve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RallyParams {
    p_a: Rational,
    p_b: Rational,
}

impl RallyParams {
    pub fn new(p_a: Rational, p_b: Rational) -> Result<Self> {
        for (name, p) in [("p_A", &p_a), ("p_B", &p_b)] {
            if p.is_negative() || *p > Rational::one() {
                return Err(Error::Domain(format!("{name} = {} must lie in [0, 1]", fraction_string(p))));
            }
        }
        Ok(RallyParams { p_a, p_b })
    }

    /// Both teams with the same serving probability.
    pub fn even(x: Rational) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    pub fn p_a(&self) -> &Rational {
        &self.p_a
    }

    pub fn p_b(&self) -> &Rational {
        &self.p_b
    }

    pub fn q_a(&self) -> Rational {
        Rational::one() - &self.p_a
    }

    pub fn q_b(&self) -> Rational {
        Rational::one() - &self.p_b
    }

    pub fn swapped(&self) -> Self {
        RallyParams { p_a: self.p_b.clone(), p_b: self.p_a.clone() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.p_a.is_zero() && self.p_b.is_zero()
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateChain)
        } else {
            Ok(())
        }
    }
}

/// The absorbing chain of one scoring system at one parameter point.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    pub system: ScoringSystem,
    pub params: RallyParams,
    /// Transient-to-transient block, `m × m`.
    pub q: SparseRationalMatrix,
    /// Transient-to-absorbing block, `m × 2`; column 0 is "Team A wins".
    pub s: SparseRationalMatrix,
}

impl TransitionModel {
    pub fn build(system: ScoringSystem, params: RallyParams) -> Result<Self> {
        match system.kind {
            SystemKind::SideOut => build_side_out(system.n, params),
            SystemKind::ModifiedRally => build_modified_rally(system.n, params),
            SystemKind::HybridRally => build_hybrid(system.n, params),
        }
    }

    pub fn transient_count(&self) -> usize {
        self.q.n_rows()
    }

    pub fn index_of(&self, state: &GameState) -> Result<StateIndex> {
        self.system.index_of(state)
    }

    /// Exact row sums of `[Q | S]`.
    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.transient_count())
            .map(|r| {
                self.q.row(r).iter().chain(self.s.row(r)).fold(Rational::zero(), |acc, (_, v)| acc + v)
            })
            .collect()
    }

    /// Text dump of `[Q | S]`, one `row_state col_state value` triple per line.
    pub fn dump(&self) -> String {
        let m = self.transient_count();
        let states = self.system.enumerate_states();
        let mut out = String::new();
        for r in 0..m {
            let entries = self.q.row(r).iter().map(|(c, v)| (*c, v)).chain(self.s.row(r).iter().map(|(c, v)| (m + c, v)));
            for (c, v) in entries {
                writeln!(out, "{} {} {}", states[r], states[c], fraction_string(v)).unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    State(u32, u32, u32),
    Win(Team),
}

type Cell = (u32, u32, u32);

/// Collects table entries row by row and rejects overlapping writes.
struct TableWriter {
    system: ScoringSystem,
    rows: Vec<Vec<(Target, Rational)>>,
}

impl TableWriter {
    fn new(system: ScoringSystem) -> Self {
        TableWriter { system, rows: vec![Vec::new(); system.transient_count()] }
    }

    fn row_of(&self, (i, j, k): Cell) -> usize {
        self.system
            .index_of(&GameState::at(i, j, k))
            .unwrap_or_else(|_| panic!("table row {i}-{j}-{k} outside {}", self.system))
            .0
    }

    fn put(&mut self, from: Cell, to: Target, value: &Rational) {
        let r = self.row_of(from);
        let row = &mut self.rows[r];
        assert!(
            !row.iter().any(|(t, _)| *t == to),
            "entry {from:?} -> {to:?} written twice for {}",
            self.system
        );
        assert!(row.len() < 2, "row {from:?} already has both outcomes for {}", self.system);
        row.push((to, value.clone()));
    }

    fn q(&mut self, from: Cell, (i, j, k): Cell, value: &Rational) {
        self.put(from, Target::State(i, j, k), value);
    }

    fn s(&mut self, from: Cell, team: Team, value: &Rational) {
        self.put(from, Target::Win(team), value);
    }

    fn finish(self, params: RallyParams) -> TransitionModel {
        let system = self.system;
        let mut q_rows = Vec::with_capacity(self.rows.len());
        let mut s_rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.into_iter().enumerate() {
            assert_eq!(row.len(), 2, "row {:?} of {system} is incomplete", system.state_of(StateIndex(r)));
            let mut q_row = Vec::new();
            let mut s_row = Vec::new();
            for (target, value) in row {
                match target {
                    Target::State(i, j, k) => {
                        let c = system.index_of(&GameState::at(i, j, k)).expect("target inside state space").0;
                        q_row.push((c, value));
                    }
                    Target::Win(team) => s_row.push((team.column(), value)),
                }
            }
            q_rows.push(q_row);
            s_rows.push(s_row);
        }
        let m = system.transient_count();
        TransitionModel {
            system,
            params,
            q: SparseRationalMatrix::from_rows(m, q_rows),
            s: SparseRationalMatrix::from_rows(2, s_rows),
        }
    }
}

struct Probs {
    pa: Rational,
    qa: Rational,
    pb: Rational,
    qb: Rational,
}

impl Probs {
    fn of(params: &RallyParams) -> Self {
        Probs { pa: params.p_a().clone(), qa: params.q_a(), pb: params.p_b().clone(), qb: params.q_b() }
    }
}

pub fn build_side_out(n: u32, params: RallyParams) -> Result<TransitionModel> {
    let system = ScoringSystem::side_out(n)?;
    let p = Probs::of(&params);
    let mut w = TableWriter::new(system);
    side_out_interior(&mut w, n, &p);
    side_out_b_at_game_point(&mut w, n, &p);
    side_out_a_at_game_point(&mut w, n, &p);
    four_server_deuce_cluster(&mut w, n, &p);
    Ok(w.finish(params))
}

pub fn build_modified_rally(n: u32, params: RallyParams) -> Result<TransitionModel> {
    let system = ScoringSystem::modified_rally(n)?;
    let p = Probs::of(&params);
    let mut w = TableWriter::new(system);
    rally_interior(&mut w, n, &p);
    rally_b_at_game_point(&mut w, n, &p);
    rally_a_at_game_point(&mut w, n, &p);
    rally_deuce_cluster(&mut w, n, &p);
    Ok(w.finish(params))
}

pub fn build_hybrid(n: u32, params: RallyParams) -> Result<TransitionModel> {
    let system = ScoringSystem::hybrid_rally(n)?;
    let p = Probs::of(&params);
    let mut w = TableWriter::new(system);
    hybrid_interior(&mut w, n, &p);
    hybrid_b_at_game_point(&mut w, n, &p);
    hybrid_a_at_game_point(&mut w, n, &p);
    four_server_deuce_cluster(&mut w, n, &p);
    Ok(w.finish(params))
}

// ---- side-out ----

fn side_out_interior(w: &mut TableWriter, n: u32, p: &Probs) {
    for i in 0..=n - 2 {
        for j in 0..=n - 2 {
            w.q((i, j, 1), (i + 1, j, 1), &p.pa);
            w.q((i, j, 1), (i, j, 2), &p.qa);
            w.q((i, j, 2), (i + 1, j, 2), &p.pa);
            w.q((i, j, 2), (i, j, 3), &p.qa);
            w.q((i, j, 3), (i, j + 1, 3), &p.pb);
            w.q((i, j, 3), (i, j, 4), &p.qb);
            w.q((i, j, 4), (i, j + 1, 4), &p.pb);
            w.q((i, j, 4), (i, j, 1), &p.qb);
        }
    }
}

fn side_out_b_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let b = n - 1;
    for i in 0..=n - 2 {
        w.q((i, b, 1), (i + 1, b, 1), &p.pa);
        w.q((i, b, 1), (i, b, 2), &p.qa);
        w.q((i, b, 2), (i + 1, b, 2), &p.pa);
        w.q((i, b, 2), (i, b, 3), &p.qa);
        w.s((i, b, 3), Team::B, &p.pb);
        w.q((i, b, 3), (i, b, 4), &p.qb);
        w.s((i, b, 4), Team::B, &p.pb);
        w.q((i, b, 4), (i, b, 1), &p.qb);
    }
}

fn side_out_a_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let a = n - 1;
    for j in 0..=n - 2 {
        w.s((a, j, 1), Team::A, &p.pa);
        w.q((a, j, 1), (a, j, 2), &p.qa);
        w.s((a, j, 2), Team::A, &p.pa);
        w.q((a, j, 2), (a, j, 3), &p.qa);
        w.q((a, j, 3), (a, j + 1, 3), &p.pb);
        w.q((a, j, 3), (a, j, 4), &p.qb);
        w.q((a, j, 4), (a, j + 1, 4), &p.pb);
        w.q((a, j, 4), (a, j, 1), &p.qb);
    }
}

/// Deuce `(n-1, n-1)` and the advantage cells, shared by side-out and hybrid scoring.
fn four_server_deuce_cluster(w: &mut TableWriter, n: u32, p: &Probs) {
    let (d, v) = (n - 1, n);
    w.q((d, d, 1), (v, d, 1), &p.pa);
    w.q((d, d, 1), (d, d, 2), &p.qa);
    w.q((d, d, 2), (v, d, 2), &p.pa);
    w.q((d, d, 2), (d, d, 3), &p.qa);
    w.q((d, d, 3), (d, v, 3), &p.pb);
    w.q((d, d, 3), (d, d, 4), &p.qb);
    w.q((d, d, 4), (d, v, 4), &p.pb);
    w.q((d, d, 4), (d, d, 1), &p.qb);

    w.q((d, v, 1), (d, d, 1), &p.pa);
    w.q((d, v, 1), (d, v, 2), &p.qa);
    w.q((d, v, 2), (d, d, 2), &p.pa);
    w.q((d, v, 2), (d, v, 3), &p.qa);
    w.s((d, v, 3), Team::B, &p.pb);
    w.q((d, v, 3), (d, v, 4), &p.qb);
    w.s((d, v, 4), Team::B, &p.pb);
    w.q((d, v, 4), (d, v, 1), &p.qb);

    w.s((v, d, 1), Team::A, &p.pa);
    w.q((v, d, 1), (v, d, 2), &p.qa);
    w.s((v, d, 2), Team::A, &p.pa);
    w.q((v, d, 2), (v, d, 3), &p.qa);
    w.q((v, d, 3), (d, d, 3), &p.pb);
    w.q((v, d, 3), (v, d, 4), &p.qb);
    w.q((v, d, 4), (d, d, 4), &p.pb);
    w.q((v, d, 4), (v, d, 1), &p.qb);
}

// ---- modified rally ----

fn rally_interior(w: &mut TableWriter, n: u32, p: &Probs) {
    for i in 0..=n - 2 {
        for j in 0..=n - 2 {
            w.q((i, j, 1), (i + 1, j, 1), &p.pa);
            w.q((i, j, 1), (i, j + 1, 2), &p.qa);
            w.q((i, j, 2), (i, j + 1, 2), &p.pb);
            w.q((i, j, 2), (i + 1, j, 1), &p.qb);
        }
    }
}

fn rally_b_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let b = n - 1;
    for i in 0..=n - 4 {
        w.q((i, b, 1), (i + 1, b, 1), &p.pa);
        w.q((i, b, 1), (i, b, 2), &p.qa);
        w.s((i, b, 2), Team::B, &p.pb);
        w.q((i, b, 2), (i + 1, b, 1), &p.qb);
    }
    let (t3, t2) = (n - 3, n - 2);
    w.q((t3, b, 1), (t2, b, 1), &p.pa);
    w.q((t3, b, 1), (t3, b, 2), &p.qa);
    w.s((t3, b, 2), Team::B, &p.pb);
    w.q((t3, b, 2), (t3, b, 1), &p.qb);
    w.q((t2, b, 1), (b, b, 1), &p.pa);
    w.q((t2, b, 1), (t2, b, 2), &p.qa);
    w.s((t2, b, 2), Team::B, &p.pb);
    w.q((t2, b, 2), (t2, b, 1), &p.qb);
}

fn rally_a_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let a = n - 1;
    for j in 0..=n - 4 {
        w.s((a, j, 1), Team::A, &p.pa);
        w.q((a, j, 1), (a, j + 1, 2), &p.qa);
        w.q((a, j, 2), (a, j + 1, 2), &p.pb);
        w.q((a, j, 2), (a, j, 1), &p.qb);
    }
    let (t3, t2) = (n - 3, n - 2);
    w.s((a, t3, 1), Team::A, &p.pa);
    w.q((a, t3, 1), (a, t3, 2), &p.qa);
    w.q((a, t3, 2), (a, t2, 2), &p.pb);
    w.q((a, t3, 2), (a, t3, 1), &p.qb);
    w.s((a, t2, 1), Team::A, &p.pa);
    w.q((a, t2, 1), (a, t2, 2), &p.qa);
    w.q((a, t2, 2), (a, a, 2), &p.pb);
    w.q((a, t2, 2), (a, t2, 1), &p.qb);
}

fn rally_deuce_cluster(w: &mut TableWriter, n: u32, p: &Probs) {
    let (d, v) = (n - 1, n);
    w.q((d, d, 1), (v, d, 1), &p.pa);
    w.q((d, d, 1), (d, d, 2), &p.qa);
    w.q((d, d, 2), (d, v, 2), &p.pb);
    w.q((d, d, 2), (d, d, 1), &p.qb);

    w.q((d, v, 1), (d, d, 1), &p.pa);
    w.q((d, v, 1), (d, v, 2), &p.qa);
    w.s((d, v, 2), Team::B, &p.pb);
    w.q((d, v, 2), (d, v, 1), &p.qb);

    w.s((v, d, 1), Team::A, &p.pa);
    w.q((v, d, 1), (v, d, 2), &p.qa);
    w.q((v, d, 2), (d, d, 2), &p.pb);
    w.q((v, d, 2), (v, d, 1), &p.qb);
}

// ---- hybrid rally ----

fn hybrid_interior(w: &mut TableWriter, n: u32, p: &Probs) {
    for i in 0..=n - 2 {
        for j in 0..=n - 2 {
            w.q((i, j, 1), (i + 1, j, 1), &p.pa);
            w.q((i, j, 1), (i, j + 1, 2), &p.qa);
            w.q((i, j, 2), (i + 1, j, 2), &p.pa);
            w.q((i, j, 2), (i, j + 1, 3), &p.qa);
            w.q((i, j, 3), (i, j + 1, 3), &p.pb);
            w.q((i, j, 3), (i + 1, j, 4), &p.qb);
            w.q((i, j, 4), (i, j + 1, 4), &p.pb);
            w.q((i, j, 4), (i + 1, j, 1), &p.qb);
        }
    }
}

fn hybrid_b_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let b = n - 1;
    for i in 0..=n - 4 {
        w.q((i, b, 1), (i + 1, b, 1), &p.pa);
        w.q((i, b, 1), (i, b, 2), &p.qa);
        w.q((i, b, 2), (i + 1, b, 2), &p.pa);
        w.q((i, b, 2), (i, b, 3), &p.qa);
        w.s((i, b, 3), Team::B, &p.pb);
        w.q((i, b, 3), (i + 1, b, 4), &p.qb);
        w.s((i, b, 4), Team::B, &p.pb);
        w.q((i, b, 4), (i + 1, b, 1), &p.qb);
    }
    for i in [n - 3, n - 2] {
        w.q((i, b, 1), (i + 1, b, 1), &p.pa);
        w.q((i, b, 1), (i, b, 2), &p.qa);
        w.q((i, b, 2), (i + 1, b, 2), &p.pa);
        w.q((i, b, 2), (i, b, 3), &p.qa);
        w.s((i, b, 3), Team::B, &p.pb);
        w.q((i, b, 3), (i, b, 4), &p.qb);
        w.s((i, b, 4), Team::B, &p.pb);
        w.q((i, b, 4), (i, b, 1), &p.qb);
    }
}

fn hybrid_a_at_game_point(w: &mut TableWriter, n: u32, p: &Probs) {
    let a = n - 1;
    for j in 0..=n - 4 {
        w.s((a, j, 1), Team::A, &p.pa);
        w.q((a, j, 1), (a, j + 1, 2), &p.qa);
        w.s((a, j, 2), Team::A, &p.pa);
        w.q((a, j, 2), (a, j + 1, 3), &p.qa);
        w.q((a, j, 3), (a, j + 1, 3), &p.pb);
        w.q((a, j, 3), (a, j, 4), &p.qb);
        w.q((a, j, 4), (a, j + 1, 4), &p.pb);
        w.q((a, j, 4), (a, j, 1), &p.qb);
    }
    for j in [n - 3, n - 2] {
        w.s((a, j, 1), Team::A, &p.pa);
        w.q((a, j, 1), (a, j, 2), &p.qa);
        w.s((a, j, 2), Team::A, &p.pa);
        w.q((a, j, 2), (a, j, 3), &p.qa);
        w.q((a, j, 3), (a, j + 1, 3), &p.pb);
        w.q((a, j, 3), (a, j, 4), &p.qb);
        w.q((a, j, 4), (a, j + 1, 4), &p.pb);
        w.q((a, j, 4), (a, j, 1), &p.qb);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn st(i: u32, j: u32, k: u32) -> GameState {
        GameState::at(i, j, k)
    }

    /// Nonzero entries of one row, as `(target, value)` with absorbing targets rendered as states.
    fn row(model: &TransitionModel, from: GameState) -> Vec<(GameState, Rational)> {
        let r = model.index_of(&from).unwrap().0;
        let states = model.system.enumerate_states();
        let mut out: Vec<(GameState, Rational)> =
            model.q.row(r).iter().map(|(c, v)| (states[*c], v.clone())).collect();
        out.extend(model.s.row(r).iter().map(|(c, v)| (GameState::Absorbed(if *c == 0 { Team::A } else { Team::B }), v.clone())));
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn params(a: (i64, i64), b: (i64, i64)) -> RallyParams {
        RallyParams::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap()
    }

    #[test]
    fn side_out_named_rows() {
        let p = params((1, 3), (2, 5));
        let m = build_side_out(11, p.clone()).unwrap();
        assert_eq!(row(&m, st(0, 0, 2)), vec![(st(0, 0, 3), p.q_a()), (st(1, 0, 2), p.p_a().clone())]);
        assert_eq!(row(&m, st(10, 5, 1)), vec![(st(10, 5, 2), p.q_a()), (GameState::Absorbed(Team::A), p.p_a().clone())]);
        assert_eq!(row(&m, st(3, 10, 4)), vec![(st(3, 10, 1), p.q_b()), (GameState::Absorbed(Team::B), p.p_b().clone())]);
        assert_eq!(row(&m, st(11, 10, 3)), vec![(st(10, 10, 3), p.p_b().clone()), (st(11, 10, 4), p.q_b())]);
    }

    #[test]
    fn modified_rally_named_rows() {
        let p = params((11, 25), (11, 25));
        let m = build_modified_rally(21, p.clone()).unwrap();
        assert_eq!(row(&m, st(5, 20, 2)), vec![(st(6, 20, 1), p.q_b()), (GameState::Absorbed(Team::B), p.p_b().clone())]);
        assert_eq!(row(&m, st(18, 20, 2)), vec![(st(18, 20, 1), p.q_b()), (GameState::Absorbed(Team::B), p.p_b().clone())]);
        assert_eq!(row(&m, st(0, 0, 1)), vec![(st(0, 1, 2), p.q_a()), (st(1, 0, 1), p.p_a().clone())]);
        assert_eq!(row(&m, st(20, 19, 2)), vec![(st(20, 19, 1), p.q_b()), (st(20, 20, 2), p.p_b().clone())]);
        assert_eq!(row(&m, st(20, 17, 1)), vec![(st(20, 18, 2), p.q_a()), (GameState::Absorbed(Team::A), p.p_a().clone())]);
    }

    #[test]
    fn hybrid_named_rows() {
        let p = params((2, 5), (3, 7));
        let m = build_hybrid(21, p.clone()).unwrap();
        assert_eq!(row(&m, st(0, 0, 4)), vec![(st(0, 1, 4), p.p_b().clone()), (st(1, 0, 1), p.q_b())]);
        assert_eq!(row(&m, st(20, 20, 3)), vec![(st(20, 20, 4), p.q_b()), (st(20, 21, 3), p.p_b().clone())]);
        assert_eq!(row(&m, st(17, 20, 3)), vec![(st(18, 20, 4), p.q_b()), (GameState::Absorbed(Team::B), p.p_b().clone())]);
        assert_eq!(row(&m, st(18, 20, 3)), vec![(st(18, 20, 4), p.q_b()), (GameState::Absorbed(Team::B), p.p_b().clone())]);
        assert_eq!(row(&m, st(20, 19, 2)), vec![(st(20, 19, 3), p.q_a()), (GameState::Absorbed(Team::A), p.p_a().clone())]);
    }

    #[test]
    fn rows_sum_to_one() {
        for kind in SystemKind::ALL {
            for (a, b) in [((1, 3), (2, 5)), ((11, 25), (11, 25))] {
                let m = TransitionModel::build(ScoringSystem::new(kind, 11).unwrap(), params(a, b)).unwrap();
                assert!(m.row_sums().iter().all(|s| *s == int(1)), "{kind}");
                assert_eq!(m.q.nnz() + m.s.nnz(), 2 * m.transient_count());
            }
        }
    }

    #[test]
    fn certain_server_drops_fault_edges() {
        let m = build_side_out(11, RallyParams::new(int(1), int(1)).unwrap()).unwrap();
        assert_eq!(m.q.nnz() + m.s.nnz(), m.transient_count());
    }

    #[test]
    fn params_validated() {
        assert!(matches!(RallyParams::new(ratio(3, 2), int(0)), Err(Error::Domain(_))));
        assert!(matches!(RallyParams::new(int(0), ratio(-1, 2)), Err(Error::Domain(_))));
        assert_eq!(RallyParams::new(int(0), int(0)).unwrap().ensure_nondegenerate(), Err(Error::DegenerateChain));
    }

    #[test]
    fn dump_format() {
        let m = build_side_out(4, params((1, 2), (1, 3))).unwrap();
        let dump = m.dump();
        let first: Vec<&str> = dump.lines().take(2).collect();
        assert_eq!(first, vec!["0-0-1 0-0-2 1/2", "0-0-1 1-0-1 1/2"]);
        assert!(dump.lines().any(|l| l == "4-3-1 WIN_A 1/2"));
        assert_eq!(dump.lines().count(), 2 * m.transient_count());
    }
}

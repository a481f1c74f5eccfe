//! State spaces of the three scoring chains.
//!
//! A transient state is `(i, j, k)`: Team A has `i` points, Team B has `j`, and `k`
//! names the server. Scores range over `{0..n-1}²` plus the two advantage cells
//! `(n-1, n)` and `(n, n-1)`; `(n-1, n-1)` doubles as deuce. States are ordered
//! lexicographically by `(i, j, k)`, followed by "Team A wins" and "Team B wins".

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_TARGET: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    SideOut,
    ModifiedRally,
    HybridRally,
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [SystemKind::SideOut, SystemKind::ModifiedRally, SystemKind::HybridRally];

    /// Number of server values `k` per score cell.
    pub fn servers(self) -> u32 {
        match self {
            SystemKind::SideOut | SystemKind::HybridRally => 4,
            SystemKind::ModifiedRally => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::SideOut => "side-out",
            SystemKind::ModifiedRally => "modified-rally",
            SystemKind::HybridRally => "hybrid-rally",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "side-out" | "sideout" => Ok(SystemKind::SideOut),
            "modified-rally" | "rally" => Ok(SystemKind::ModifiedRally),
            "hybrid-rally" | "hybrid" => Ok(SystemKind::HybridRally),
            other => Err(Error::Parse(format!("unknown scoring system {other:?}"))),
        }
    }
}

/// A scoring system together with its target score `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ScoringSystem {
    pub kind: SystemKind,
    pub n: u32,
}

impl ScoringSystem {
    pub fn new(kind: SystemKind, n: u32) -> Result<Self> {
        if n < MIN_TARGET {
            return Err(Error::Domain(format!("target score must be at least {MIN_TARGET}, got {n}")));
        }
        Ok(ScoringSystem { kind, n })
    }

    pub fn side_out(n: u32) -> Result<Self> {
        Self::new(SystemKind::SideOut, n)
    }

    pub fn modified_rally(n: u32) -> Result<Self> {
        Self::new(SystemKind::ModifiedRally, n)
    }

    pub fn hybrid_rally(n: u32) -> Result<Self> {
        Self::new(SystemKind::HybridRally, n)
    }

    pub fn servers(&self) -> u32 {
        self.kind.servers()
    }

    /// `n² + 2` score cells.
    pub fn cell_count(&self) -> usize {
        (self.n * self.n + 2) as usize
    }

    pub fn transient_count(&self) -> usize {
        self.cell_count() * self.servers() as usize
    }

    pub fn state_count(&self) -> usize {
        self.transient_count() + 2
    }
}

impl fmt::Display for ScoringSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} to {}", self.kind, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Team {
    A,
    B,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }

    /// Column of the absorbing block `S` for this team's win.
    pub fn column(self) -> usize {
        match self {
            Team::A => 0,
            Team::B => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameState {
    Transient { i: u32, j: u32, k: u32 },
    Absorbed(Team),
}

impl GameState {
    pub const fn at(i: u32, j: u32, k: u32) -> Self {
        GameState::Transient { i, j, k }
    }

    pub fn is_absorbing(&self) -> bool {
        matches!(self, GameState::Absorbed(_))
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameState::Transient { i, j, k } => write!(f, "{i}-{j}-{k}"),
            GameState::Absorbed(Team::A) => f.write_str("WIN_A"),
            GameState::Absorbed(Team::B) => f.write_str("WIN_B"),
        }
    }
}

/// Ordinal of a state in the lexicographic enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateIndex(pub usize);

impl ScoringSystem {
    fn cell_of(&self, i: u32, j: u32) -> Option<usize> {
        let n = self.n;
        let cell = if i < n && j < n {
            i * n + j
        } else if i == n - 1 && j == n {
            (n - 1) * n + n
        } else if i == n && j == n - 1 {
            n * n + 1
        } else {
            return None;
        };
        Some(cell as usize)
    }

    fn score_of_cell(&self, cell: usize) -> (u32, u32) {
        let n = self.n as usize;
        let (i, j) = if cell == n * n + 1 {
            (n, n - 1)
        } else if cell == n * n {
            (n - 1, n)
        } else {
            (cell / n, cell % n)
        };
        (i as u32, j as u32)
    }

    pub fn contains(&self, state: &GameState) -> bool {
        match *state {
            GameState::Absorbed(_) => true,
            GameState::Transient { i, j, k } => (1..=self.servers()).contains(&k) && self.cell_of(i, j).is_some(),
        }
    }

    pub fn index_of(&self, state: &GameState) -> Result<StateIndex> {
        let m = self.transient_count();
        match *state {
            GameState::Absorbed(team) => Ok(StateIndex(m + team.column())),
            GameState::Transient { i, j, k } => {
                let cell = self.cell_of(i, j).filter(|_| (1..=self.servers()).contains(&k));
                match cell {
                    Some(cell) => Ok(StateIndex(cell * self.servers() as usize + (k - 1) as usize)),
                    None => Err(Error::InvalidState(format!("{state} for {self}"))),
                }
            }
        }
    }

    pub fn state_of(&self, index: StateIndex) -> Result<GameState> {
        let m = self.transient_count();
        let s = self.servers() as usize;
        match index.0 {
            ord if ord < m => {
                let (i, j) = self.score_of_cell(ord / s);
                Ok(GameState::at(i, j, (ord % s) as u32 + 1))
            }
            ord if ord == m => Ok(GameState::Absorbed(Team::A)),
            ord if ord == m + 1 => Ok(GameState::Absorbed(Team::B)),
            ord => Err(Error::InvalidState(format!("ordinal {ord} for {self}"))),
        }
    }

    /// All states: transient ones in lexicographic order, then the two absorbing states.
    pub fn enumerate_states(&self) -> Vec<GameState> {
        let n = self.n;
        let mut cells: Vec<(u32, u32)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        cells.push((n - 1, n));
        cells.push((n, n - 1));
        cells.sort_unstable();
        let mut states: Vec<GameState> = cells
            .into_iter()
            .flat_map(|(i, j)| (1..=self.servers()).map(move |k| GameState::at(i, j, k)))
            .collect();
        states.push(GameState::Absorbed(Team::A));
        states.push(GameState::Absorbed(Team::B));
        states
    }

    /// Start of the game for the given first-serving team.
    pub fn initial_state(&self, first_server: Team) -> GameState {
        match (self.kind, first_server) {
            (SystemKind::SideOut | SystemKind::HybridRally, Team::A) => GameState::at(0, 0, 2),
            (SystemKind::SideOut | SystemKind::HybridRally, Team::B) => GameState::at(0, 0, 4),
            (SystemKind::ModifiedRally, Team::A) => GameState::at(0, 0, 1),
            (SystemKind::ModifiedRally, Team::B) => GameState::at(0, 0, 2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_counts() {
        let so = ScoringSystem::side_out(11).unwrap();
        assert_eq!(so.state_count(), 494);
        assert_eq!(so.transient_count(), 492);
        let mr = ScoringSystem::modified_rally(21).unwrap();
        assert_eq!(mr.state_count(), 888);
        assert_eq!(mr.transient_count(), 886);
        let hy = ScoringSystem::hybrid_rally(21).unwrap();
        assert_eq!(hy.state_count(), 1774);
        for n in 4..=30 {
            for kind in SystemKind::ALL {
                let sys = ScoringSystem::new(kind, n).unwrap();
                let expected = match kind {
                    SystemKind::ModifiedRally => 2 * n * n + 6,
                    _ => 4 * n * n + 10,
                };
                assert_eq!(sys.enumerate_states().len(), expected as usize);
            }
        }
    }

    #[test]
    fn rejects_small_targets() {
        assert!(matches!(ScoringSystem::side_out(3), Err(Error::Domain(_))));
        assert!(ScoringSystem::modified_rally(4).is_ok());
    }

    #[test]
    fn named_ordinals() {
        let so = ScoringSystem::side_out(11).unwrap();
        assert_eq!(so.index_of(&GameState::at(0, 0, 1)).unwrap(), StateIndex(0));
        assert_eq!(so.index_of(&GameState::Absorbed(Team::B)).unwrap(), StateIndex(493));
        let mr = ScoringSystem::modified_rally(21).unwrap();
        assert_eq!(mr.index_of(&GameState::at(0, 0, 2)).unwrap(), StateIndex(1));
    }

    #[test]
    fn round_trip_over_enumeration() {
        for kind in SystemKind::ALL {
            let sys = ScoringSystem::new(kind, 7).unwrap();
            for (ord, state) in sys.enumerate_states().iter().enumerate() {
                let idx = sys.index_of(state).unwrap();
                assert_eq!(idx, StateIndex(ord));
                assert_eq!(sys.state_of(idx).unwrap(), *state);
            }
            assert!(sys.state_of(StateIndex(sys.state_count())).is_err());
        }
    }

    #[test]
    fn illegal_states_rejected() {
        let so = ScoringSystem::side_out(11).unwrap();
        for bad in [GameState::at(11, 11, 1), GameState::at(0, 0, 5), GameState::at(0, 0, 0), GameState::at(11, 0, 1), GameState::at(9, 11, 1)] {
            assert!(matches!(so.index_of(&bad), Err(Error::InvalidState(_))), "{bad}");
        }
        let mr = ScoringSystem::modified_rally(21).unwrap();
        assert!(mr.index_of(&GameState::at(0, 0, 3)).is_err());
        assert!(mr.index_of(&GameState::at(20, 21, 2)).is_ok());
    }

    #[test]
    fn initial_states() {
        let so = ScoringSystem::side_out(11).unwrap();
        assert_eq!(so.initial_state(Team::A), GameState::at(0, 0, 2));
        let mr = ScoringSystem::modified_rally(21).unwrap();
        assert_eq!(mr.initial_state(Team::B), GameState::at(0, 0, 2));
        assert_eq!(mr.initial_state(Team::A), GameState::at(0, 0, 1));
        let hy = ScoringSystem::hybrid_rally(21).unwrap();
        assert_eq!(hy.initial_state(Team::B), GameState::at(0, 0, 4));
    }
}

//! Monte Carlo playout of whole games straight from the rules of each scoring
//! system. Nothing here reads the transition tables, so agreement with the
//! exact solver is a genuine cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::state_space::{ScoringSystem, SystemKind, Team};
use crate::transitions::RallyParams;

/// Rallies allowed in one game before the playout is declared runaway.
pub const RALLY_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstServer {
    A,
    B,
    FairCoin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub system: ScoringSystem,
    pub params: RallyParams,
    pub first_server: FirstServer,
    pub num_games: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEstimate {
    pub games: u64,
    pub win_freq_a: f64,
    pub mean_duration: f64,
    pub sd_duration: f64,
    pub standard_error_win: f64,
    pub standard_error_duration: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    wins_a: u64,
    rallies: u64,
    rallies_sq: u128,
}

impl Tally {
    fn add(self, other: Tally) -> Tally {
        Tally {
            wins_a: self.wins_a + other.wins_a,
            rallies: self.rallies + other.rallies,
            rallies_sq: self.rallies_sq + other.rallies_sq,
        }
    }
}

/// Outcome of one game: winner and number of rallies played.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameRecord {
    pub winner: Team,
    pub rallies: u64,
}

struct Court {
    kind: SystemKind,
    target: u32,
    score: [u32; 2],
    serving: Team,
    /// 1 or 2 within the serving team; always 1 when a team has a single serve.
    server: u8,
}

impl Court {
    fn new(system: ScoringSystem, first: Team) -> Self {
        // with two servers per team the opening service turn gets one fault only
        let server = if system.kind == SystemKind::ModifiedRally { 1 } else { 2 };
        Court { kind: system.kind, target: system.n, score: [0, 0], serving: first, server }
    }

    fn points(&self, team: Team) -> u32 {
        self.score[team.column()]
    }

    /// Near the end of a rally-scored game a receiving team cannot score.
    fn receiver_frozen(&self, receiver: Team) -> bool {
        let own = self.points(receiver);
        let opp = self.points(receiver.other());
        let n = self.target;
        own + 1 >= n || (opp + 1 >= n && own + 3 >= n)
    }

    fn rotate_after_fault(&mut self) {
        if self.server == 1 {
            self.server = 2;
        } else {
            self.serving = self.serving.other();
            self.server = 1;
        }
    }

    fn play(&mut self, server_wins: bool) {
        let server = self.serving;
        let receiver = server.other();
        if server_wins {
            self.score[server.column()] += 1;
            return;
        }
        match self.kind {
            SystemKind::SideOut => self.rotate_after_fault(),
            SystemKind::ModifiedRally => {
                if !self.receiver_frozen(receiver) {
                    self.score[receiver.column()] += 1;
                }
                self.serving = receiver;
            }
            SystemKind::HybridRally => {
                if !self.receiver_frozen(receiver) {
                    self.score[receiver.column()] += 1;
                }
                self.rotate_after_fault();
            }
        }
    }

    fn winner(&self) -> Option<Team> {
        [Team::A, Team::B].into_iter().find(|t| {
            let (own, opp) = (self.points(*t), self.points(t.other()));
            own >= self.target && own >= opp + 2
        })
    }
}

/// Plays one game to completion; `p` holds each team's serve-win probability.
pub fn play_game<R: Rng>(system: ScoringSystem, p: [f64; 2], first: Team, rng: &mut R) -> Result<GameRecord> {
    let mut court = Court::new(system, first);
    let mut rallies = 0;
    loop {
        if let Some(winner) = court.winner() {
            return Ok(GameRecord { winner, rallies });
        }
        if rallies >= RALLY_LIMIT {
            return Err(Error::Runaway(rallies));
        }
        let serve_win = rng.random::<f64>() < p[court.serving.column()];
        court.play(serve_win);
        rallies += 1;
    }
}

fn stream_key(seed: u64, first_server: FirstServer) -> [u8; 32] {
    let tag: u64 = match first_server {
        FirstServer::A => 1,
        FirstServer::B => 2,
        FirstServer::FairCoin => 3,
    };
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    key
}

/// The generator for one game: ChaCha8 keyed by `(seed, condition)`, stream = game index.
fn game_rng(key: [u8; 32], game: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(game);
    rng
}

fn run_games(config: &SimConfig, p: [f64; 2], range: std::ops::Range<u64>) -> Result<Tally> {
    let key = stream_key(config.seed, config.first_server);
    let mut tally = Tally::default();
    for game in range {
        let mut rng = game_rng(key, game);
        let first = match config.first_server {
            FirstServer::A => Team::A,
            FirstServer::B => Team::B,
            FirstServer::FairCoin => {
                if rng.random::<bool>() {
                    Team::A
                } else {
                    Team::B
                }
            }
        };
        let record = play_game(config.system, p, first, &mut rng).map_err(|e| match e {
            Error::Runaway(_) => Error::Runaway(game),
            other => other,
        })?;
        tally.wins_a += u64::from(record.winner == Team::A);
        tally.rallies += record.rallies;
        tally.rallies_sq += u128::from(record.rallies) * u128::from(record.rallies);
    }
    Ok(tally)
}

const CHUNK: u64 = 4096;

#[cfg(feature = "parallel")]
fn tally_all(config: &SimConfig, p: [f64; 2]) -> Result<Tally> {
    use rayon::prelude::*;
    let chunks = config.num_games.div_ceil(CHUNK);
    let work = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_games(config, p, c * CHUNK..((c + 1) * CHUNK).min(config.num_games)))
            .try_reduce(Tally::default, |a, b| Ok(a.add(b)))
    };
    match config.workers {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {threads} workers: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn tally_all(config: &SimConfig, p: [f64; 2]) -> Result<Tally> {
    let chunks = config.num_games.div_ceil(CHUNK);
    (0..chunks).try_fold(Tally::default(), |acc, c| {
        Ok(acc.add(run_games(config, p, c * CHUNK..((c + 1) * CHUNK).min(config.num_games))?))
    })
}

pub fn simulate(config: &SimConfig) -> Result<SimEstimate> {
    if config.num_games == 0 {
        return Err(Error::Domain("at least one game is required".into()));
    }
    if config.workers == Some(0) {
        return Err(Error::Usage("worker count must be positive".into()));
    }
    config.params.ensure_nondegenerate()?;
    let p = [to_f64(config.params.p_a()), to_f64(config.params.p_b())];
    let tally = tally_all(config, p)?;

    let games = config.num_games as f64;
    let win_freq_a = tally.wins_a as f64 / games;
    let mean_duration = tally.rallies as f64 / games;
    let sd_duration = if config.num_games > 1 {
        let n = u128::from(config.num_games);
        let sum = u128::from(tally.rallies);
        // n·Σx² − (Σx)² is exact in integers
        let spread = (n * tally.rallies_sq - sum * sum) as f64;
        (spread / (games * (games - 1.0))).sqrt()
    } else {
        0.0
    };
    Ok(SimEstimate {
        games: config.num_games,
        win_freq_a,
        mean_duration,
        sd_duration,
        standard_error_win: (win_freq_a * (1.0 - win_freq_a) / games).sqrt(),
        standard_error_duration: sd_duration / games.sqrt(),
    })
}

/// Difference of Team A's win frequencies with A and with B serving first, and its standard error.
pub fn simulate_advantage(system: ScoringSystem, params: &RallyParams, games: u64, seed: u64) -> Result<(f64, f64)> {
    simulate_advantage_with(system, params, games, seed, None)
}

pub fn simulate_advantage_with(
    system: ScoringSystem,
    params: &RallyParams,
    games: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<(f64, f64)> {
    let run = |first_server| {
        simulate(&SimConfig { system, params: params.clone(), first_server, num_games: games, seed, workers })
    };
    let a_first = run(FirstServer::A)?;
    let b_first = run(FirstServer::B)?;
    let se = a_first.standard_error_win.hypot(b_first.standard_error_win);
    Ok((a_first.win_freq_a - b_first.win_freq_a, se))
}

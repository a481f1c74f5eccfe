use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pickleball_chains::rational::{ratio, to_f64};
use pickleball_chains::simulator::{simulate, FirstServer, SimConfig};
use pickleball_chains::solver::chain_summary;
use pickleball_chains::{RallyParams, ScoringSystem, SystemKind, Team, TransitionModel};

fn config(system: ScoringSystem, params: RallyParams, games: u64, workers: Option<usize>) -> SimConfig {
    SimConfig { system, params, first_server: FirstServer::A, num_games: games, seed: 2024, workers }
}

#[test]
fn worker_count_does_not_change_results() {
    let system = ScoringSystem::hybrid_rally(11).unwrap();
    let params = RallyParams::new(ratio(9, 20), ratio(1, 2)).unwrap();
    let reference = simulate(&config(system, params.clone(), 20_000, Some(1))).unwrap();
    for workers in [2, 8] {
        assert_eq!(simulate(&config(system, params.clone(), 20_000, Some(workers))).unwrap(), reference);
    }
    assert_eq!(simulate(&config(system, params, 20_000, None)).unwrap(), reference);
}

#[test]
fn matches_exact_chain_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let games = 100_000;
    for kind in SystemKind::ALL {
        let n = if kind == SystemKind::SideOut { 11 } else { 21 };
        let system = ScoringSystem::new(kind, n).unwrap();
        for point in 0..10 {
            let pa = ratio(rng.random_range(20..=80), 100);
            let pb = ratio(rng.random_range(20..=80), 100);
            let params = RallyParams::new(pa, pb).unwrap();
            let model = TransitionModel::build(system, params.clone()).unwrap();
            let exact = chain_summary(&model, &system.initial_state(Team::A)).unwrap();
            let est = simulate(&SimConfig { seed: point, ..config(system, params, games, None) }).unwrap();
            let win_gap = (est.win_freq_a - to_f64(&exact.absorb_prob_a)).abs();
            let mean_gap = (est.mean_duration - to_f64(&exact.mean_duration)).abs();
            // the win frequency can sit at 0 or 1 for lopsided points; fall back to the binomial bound
            let p = to_f64(&exact.absorb_prob_a);
            let se_win = (p * (1.0 - p) / games as f64).sqrt().max(est.standard_error_win);
            assert!(win_gap < 5.0 * se_win + 1e-12, "{system} point {point}: win gap {win_gap}, se {se_win}");
            assert!(mean_gap < 5.0 * est.standard_error_duration, "{system} point {point}: mean gap {mean_gap}");
        }
    }
}

#[test]
fn fair_coin_matches_average_of_conditionals() {
    let system = ScoringSystem::modified_rally(11).unwrap();
    let params = RallyParams::new(ratio(2, 5), ratio(3, 5)).unwrap();
    let model = TransitionModel::build(system, params.clone()).unwrap();
    let a = chain_summary(&model, &system.initial_state(Team::A)).unwrap();
    let b = chain_summary(&model, &system.initial_state(Team::B)).unwrap();
    let expected = 0.5 * (to_f64(&a.absorb_prob_a) + to_f64(&b.absorb_prob_a));
    let est = simulate(&SimConfig { first_server: FirstServer::FairCoin, ..config(system, params, 200_000, None) }).unwrap();
    assert!((est.win_freq_a - expected).abs() < 5.0 * est.standard_error_win);
}

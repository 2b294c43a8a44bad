mod common;

use std::path::PathBuf;

use common::gen::random_script;
use common::walk::{golden_world, Walker};
use crawlbench::engine::{Action, GameState, GameStatus};
use crawlbench::episode::GameSource;
use crawlbench::harness::{run_batch, run_episode, AgentKind, RunOptions};
use crawlbench::metrics::{
    aggregate, episode_metrics, score, state_space_lower_bound, ComplexityParams, EpisodeHistory, HistoryHeader, MetricsError,
    MetricsReport, Outcome, Record,
};
use crawlbench::scenario::{builtin, parse_scenario};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("docs").join(name)
}

/// Compares against a committed fixture; `CRAWLBENCH_BLESS=1` rewrites it.
fn check_fixture(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("CRAWLBENCH_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name} is out of date; rerun with CRAWLBENCH_BLESS=1");
}

fn without_wall_clock(h: &EpisodeHistory) -> EpisodeHistory {
    let mut clean = EpisodeHistory::new(HistoryHeader { start_time: 0.0, ..h.header().clone() });
    for record in h.records().iter().cloned() {
        let record = match record {
            Record::End(mut e) => {
                e.wall_time_s = 0.0;
                Record::End(e)
            }
            step => step,
        };
        clean.record_event(record).unwrap();
    }
    clean
}

/// A closed room with no orb and no monsters: nothing ends the game.
fn endless() -> GameSource {
    GameSource::Scenario(parse_scenario("name: endless\nseed: 1\nmap:\n#######\n#.....#\n#.@...#\n#.....#\n#######\n").unwrap())
}

#[test]
fn every_action_is_one_record_plus_the_end() {
    let mut episode = endless().start(4, "script", None).unwrap();
    for action in random_script(4, 500) {
        episode.step_primitive(&action).unwrap();
    }
    assert!(!episode.is_over());
    episode.abandon();
    let history = episode.into_history();
    assert_eq!(history.len(), 501);
    assert_eq!(history.steps().count(), 500);
    assert!(matches!(history.records().last(), Some(Record::End(e)) if e.outcome == Outcome::Truncated));
    let report = episode_metrics(&history).unwrap();
    assert_eq!(report.actions, 500);
    let again = Record::Step(history.steps().last().unwrap().clone());
    assert!(matches!(history.clone().record_event(again), Err(MetricsError::Sealed)));
}

#[test]
fn golden_walkthrough_is_a_three_rune_win() {
    let world = golden_world();
    let mut walker = Walker::new(GameState::new_dungeon(3, &world).unwrap());
    assert_eq!(walker.golden_run().unwrap(), GameStatus::Won);
    let actions: Vec<Action> = walker.log.iter().map(|(a, _)| a.clone()).collect();

    let mut episode = GameSource::Dungeon(world).start(3, "golden", None).unwrap();
    for action in &actions {
        episode.step_primitive(action).unwrap();
    }
    assert!(episode.is_over());
    let report = episode_metrics(episode.history()).unwrap();
    assert!(report.won);
    assert_eq!(report.runes_collected, 3);
    assert_eq!(report.actions, actions.len());
    assert_eq!(report.turns, walker.game.turn_count());
    assert_eq!(report.max_depth_reached, 4);
    assert_eq!(report.levels_visited, 4);
    assert_eq!(report.score, score(report.xp_earned, 3, true));
}

#[test]
fn death_ends_the_log_at_the_death_clock() {
    let map = "#####\n#ddd#\n#d@d#\n#ddd#\n#####\n";
    let source = GameSource::Scenario(parse_scenario(&format!("name: doom\nseed: 1\nmap:\n{map}")).unwrap());
    let mut episode = source.start(1, "script", None).unwrap();
    while !episode.is_over() {
        episode.step_primitive(&Action::Wait).unwrap();
    }
    assert_eq!(episode.game().status, GameStatus::Dead);
    let report = episode_metrics(episode.history()).unwrap();
    assert!(!report.won);
    assert_eq!(report.turns, episode.game().turn_count());
    assert_eq!(episode.history().end().unwrap().clock_aut, episode.game().clock_aut);
}

#[test]
fn replays_and_persisted_logs_reproduce_the_report() {
    let source = GameSource::Scenario(builtin("labyrinth").unwrap());
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { out_dir: Some(dir.path().into()), ..RunOptions::default() };
    let a = run_episode(AgentKind::Planner, &source, 9, &opts).unwrap();
    let b = run_episode(AgentKind::Planner, &source, 9, &RunOptions::default()).unwrap();
    assert_eq!(a.history.digest(), b.history.digest());
    let mut rb = b.report.clone();
    rb.wall_time_s = a.report.wall_time_s;
    assert_eq!(a.report, rb);

    let back = EpisodeHistory::read_from(a.log_path.as_ref().unwrap()).unwrap();
    let recomputed = episode_metrics(&back).unwrap();
    assert_eq!(serde_json::to_string(&recomputed).unwrap(), serde_json::to_string(&a.report).unwrap());
}

#[test]
fn aggregate_mirrors_the_reporting_style() {
    let base = run_episode(AgentKind::Random, &endless(), 1, &RunOptions { turn_limit: Some(3), ..RunOptions::default() })
        .unwrap()
        .report;
    let reports: Vec<MetricsReport> = (0..100).map(|i| MetricsReport { won: i % 50 == 7, ..base.clone() }).collect();
    let agg = aggregate(&reports).unwrap();
    assert_eq!((agg.games, agg.wins), (100, 2));
    assert_eq!(agg.win_rate, 0.02);
    assert_eq!(agg.win_rate_text, "2.0%");
    assert!(agg.to_table().contains("2.0%"));
    let singleton = aggregate(&reports[7..8]).unwrap();
    assert_eq!(singleton.win_rate, 1.0);
    assert!(matches!(aggregate(&[]), Err(MetricsError::EmptyAggregate)));
}

#[test]
fn committed_log_and_table_fixtures_are_current() {
    let source = GameSource::Scenario(builtin("small_room").unwrap());
    let run = run_episode(AgentKind::Rulebot, &source, 1, &RunOptions::default()).unwrap();
    let clean = without_wall_clock(&run.history);
    check_fixture("episode_log.jsonl", &clean.to_jsonl());
    let parsed = EpisodeHistory::from_jsonl(&std::fs::read_to_string(fixture("episode_log.jsonl")).unwrap()).unwrap();
    assert_eq!(parsed.digest(), run.history.digest());

    let batch = run_batch(AgentKind::Random, &source, 0, 10, &RunOptions::default(), false).unwrap();
    let reports: Vec<MetricsReport> =
        batch.runs.iter().map(|r| MetricsReport { wall_time_s: 0.0, ..r.report.clone() }).collect();
    let agg = aggregate(&reports).unwrap();
    check_fixture("aggregate_table.txt", &agg.to_table());
    check_fixture("aggregate.csv", &agg.to_csv());
}

#[test]
fn state_space_headline_and_small_cases() {
    let v = state_space_lower_bound(ComplexityParams::new(70_000, 2_900).unwrap());
    assert!((v - 14_050.78).abs() <= 0.01, "{v}");
    assert!(v > 14_000.0 && v < 14_100.0);
    for tiles in 1..=10u64 {
        for occupants in 1..=3u64.min(tiles) {
            let brute = (0..occupants).fold(1u64, |n, _| n * tiles) as f64;
            let v = state_space_lower_bound(ComplexityParams::new(tiles, occupants).unwrap());
            assert_eq!(v, brute.log10(), "({tiles}, {occupants})");
        }
    }
    assert!(ComplexityParams::new(5, 6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn histories_are_monotone_and_wins_need_runes(seed in 0u64..10_000, agent in 0usize..3) {
        let kind = AgentKind::ALL[agent];
        let source = GameSource::Dungeon(crawlbench::world::WorldConfig::default());
        let run = run_episode(kind, &source, seed, &RunOptions { turn_limit: Some(300), ..RunOptions::default() }).unwrap();
        let records = run.history.records();
        prop_assert!(records.windows(2).all(|w| w[0].turn() <= w[1].turn()));
        prop_assert_eq!(records.iter().filter(|r| matches!(r, Record::End(_))).count(), 1);
        prop_assert!(matches!(records.last(), Some(Record::End(_))));
        prop_assert!(!run.report.won || run.report.runes_collected >= 3);
        prop_assert!(run.report.turns >= 0.0 && run.report.wall_time_s >= 0.0);
        let back = EpisodeHistory::from_jsonl(&run.history.to_jsonl()).unwrap();
        prop_assert_eq!(&back, &run.history);
        prop_assert_eq!(episode_metrics(&back).unwrap(), run.report);
    }
}

//! Episode logs, per-episode and aggregate reports, and the state-space
//! lower bound.

mod aggregate;
mod complexity;
mod history;
mod report;

pub use aggregate::{aggregate, format_rate, AggregateReport, Distribution};
pub use complexity::{state_space_lower_bound, ComplexityParams};
pub use history::{EndRecord, EpisodeHistory, HistoryHeader, Outcome, Record, StepRecord};
pub use report::{episode_metrics, score, MetricsReport, SCORE_FOR_WIN, SCORE_PER_RUNE};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("history is sealed; no records may follow the end record")]
    Sealed,
    #[error("history has no end record yet")]
    Unsealed,
    #[error("record at turn {next} precedes the previous record at turn {last}")]
    TimeReversal { last: f64, next: f64 },
    #[error("cannot aggregate an empty list of reports")]
    EmptyAggregate,
    #[error("invalid complexity parameters: {tiles} tiles, {occupants} occupants")]
    Complexity { tiles: u64, occupants: u64 },
    #[error("log line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Action, Event, RefusalReason};
    use crate::world::LevelId;

    fn header() -> HistoryHeader {
        HistoryHeader {
            seed: 1,
            config_hash: "x".into(),
            agent: "test".into(),
            scenario: None,
            start_level: LevelId(0),
            start_depth: 1,
            start_time: 12.5,
        }
    }

    fn step(turn: f64) -> Record {
        Record::Step(StepRecord {
            turn,
            clock_aut: (turn * 10.0) as u64,
            action: Action::Wait,
            events: vec![Event::Refused { reason: RefusalReason::Blocked }],
            level: LevelId(0),
            depth: 1,
            hp: 30,
            xp_earned: 4,
            runes: 0,
        })
    }

    fn end(outcome: Outcome, turn: f64) -> Record {
        Record::End(EndRecord { outcome, turn, clock_aut: (turn * 10.0) as u64, wall_time_s: 0.25 })
    }

    #[test]
    fn sealed_after_end() {
        let mut h = EpisodeHistory::new(header());
        h.record_event(step(1.0)).unwrap();
        assert_eq!(h.len(), 1);
        h.record_event(end(Outcome::Dead, 1.0)).unwrap();
        assert!(matches!(h.record_event(step(2.0)), Err(MetricsError::Sealed)));
        assert!(matches!(EpisodeHistory::new(header()).record_event(step(1.0)), Ok(())));
    }

    #[test]
    fn time_cannot_reverse() {
        let mut h = EpisodeHistory::new(header());
        h.record_event(step(2.0)).unwrap();
        assert!(matches!(h.record_event(step(1.0)), Err(MetricsError::TimeReversal { .. })));
    }

    #[test]
    fn jsonl_round_trip_and_report() {
        let mut h = EpisodeHistory::new(header());
        h.record_event(step(1.0)).unwrap();
        h.record_event(step(2.0)).unwrap();
        assert!(matches!(episode_metrics(&h), Err(MetricsError::Unsealed)));
        h.record_event(end(Outcome::Truncated, 2.0)).unwrap();
        let back = EpisodeHistory::from_jsonl(&h.to_jsonl()).unwrap();
        assert_eq!(back, h);
        let report = episode_metrics(&back).unwrap();
        assert_eq!((report.actions, report.turns, report.won, report.truncated), (2, 2.0, false, true));
        assert_eq!(report.score, 4);
    }

    #[test]
    fn digest_ignores_wall_clock() {
        let mut a = EpisodeHistory::new(header());
        a.record_event(end(Outcome::Dead, 0.0)).unwrap();
        let mut hb = header();
        hb.start_time = 99.0;
        let mut b = EpisodeHistory::new(hb);
        b.record_event(Record::End(EndRecord { outcome: Outcome::Dead, turn: 0.0, clock_aut: 0, wall_time_s: 7.0 }))
            .unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    fn report(won: bool, turns: f64) -> MetricsReport {
        MetricsReport {
            won,
            truncated: false,
            runes_collected: 0,
            max_depth_reached: 1,
            levels_visited: 1,
            turns,
            actions: 1,
            monsters_killed: 0,
            xp_earned: 0,
            score: 0,
            wall_time_s: 0.0,
        }
    }

    #[test]
    fn aggregate_rates_and_means() {
        let mut reports: Vec<MetricsReport> = (0..100).map(|i| report(i < 2, 1.0)).collect();
        let agg = aggregate(&reports).unwrap();
        assert_eq!(agg.win_rate, 0.02);
        assert_eq!(agg.win_rate_text, "2.0%");
        reports.iter_mut().for_each(|r| r.won = true);
        assert_eq!(aggregate(&reports).unwrap().win_rate, 1.0);
        let agg = aggregate(&[report(false, 10.0), report(false, 20.0), report(false, 30.0)]).unwrap();
        assert_eq!((agg.mean_turns, agg.median_turns), (20.0, 20.0));
        assert!(matches!(aggregate(&[]), Err(MetricsError::EmptyAggregate)));
    }
}

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::report::MetricsReport;
use super::MetricsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub stddev: f64,
}

impl Distribution {
    pub fn of(values: &[f64]) -> Distribution {
        let n = values.len() as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = sorted.iter().sum::<f64>() / n;
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 0 { (sorted[mid - 1] + sorted[mid]) / 2.0 } else { sorted[mid] };
        let var = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Distribution { min: sorted[0], max: sorted[sorted.len() - 1], mean, median, stddev: var.sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub games: usize,
    pub wins: usize,
    pub win_rate: f64,
    /// `win_rate` as a percentage with one decimal, e.g. `2.0%`.
    pub win_rate_text: String,
    pub mean_turns: f64,
    pub median_turns: f64,
    pub mean_score: f64,
    pub distributions: BTreeMap<String, Distribution>,
}

pub fn format_rate(rate: f64) -> String {
    format!("{:.1}%", rate * 100.0)
}

pub fn aggregate(reports: &[MetricsReport]) -> Result<AggregateReport, MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::EmptyAggregate);
    }
    let games = reports.len();
    let wins = reports.iter().filter(|r| r.won).count();
    let win_rate = wins as f64 / games as f64;
    let column = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).collect::<Vec<f64>>();
    let mut distributions = BTreeMap::new();
    let metrics: [(&str, fn(&MetricsReport) -> f64); 9] = [
        ("runes_collected", |r| r.runes_collected as f64),
        ("max_depth_reached", |r| r.max_depth_reached as f64),
        ("levels_visited", |r| r.levels_visited as f64),
        ("turns", |r| r.turns),
        ("actions", |r| r.actions as f64),
        ("monsters_killed", |r| r.monsters_killed as f64),
        ("xp_earned", |r| r.xp_earned as f64),
        ("score", |r| r.score as f64),
        ("wall_time_s", |r| r.wall_time_s),
    ];
    for (name, f) in metrics {
        distributions.insert(name.to_string(), Distribution::of(&column(f)));
    }
    let turns = &distributions["turns"];
    Ok(AggregateReport {
        games,
        wins,
        win_rate,
        win_rate_text: format_rate(win_rate),
        mean_turns: turns.mean,
        median_turns: turns.median,
        mean_score: distributions["score"].mean,
        distributions,
    })
}

impl AggregateReport {
    /// Aligned plain-text table: summary lines, then one row per metric.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "games     {}", self.games);
        let _ = writeln!(out, "wins      {}", self.wins);
        let _ = writeln!(out, "win rate  {}", self.win_rate_text);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<18} {:>10} {:>10} {:>10} {:>10} {:>10}", "metric", "min", "median", "mean", "max", "stddev");
        for (name, d) in &self.distributions {
            let _ = writeln!(
                out,
                "{:<18} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2}",
                name, d.min, d.median, d.mean, d.max, d.stddev
            );
        }
        out
    }

    /// `metric,min,median,mean,max,stddev` rows for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,min,median,mean,max,stddev\n");
        for (name, d) in &self.distributions {
            let _ = writeln!(out, "{name},{},{},{},{},{}", d.min, d.median, d.mean, d.max, d.stddev);
        }
        out
    }
}

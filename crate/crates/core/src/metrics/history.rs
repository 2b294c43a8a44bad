use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::MetricsError;
use crate::engine::{Action, Event};
use crate::world::LevelId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryHeader {
    pub seed: u64,
    pub config_hash: String,
    pub agent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub start_level: LevelId,
    pub start_depth: u32,
    /// Seconds since the Unix epoch; excluded from the digest.
    pub start_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub turn: f64,
    pub clock_aut: u64,
    pub action: Action,
    pub events: Vec<Event>,
    pub level: LevelId,
    pub depth: u32,
    pub hp: i32,
    pub xp_earned: u32,
    pub runes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Dead,
    Won,
    /// Stopped by the turn limit or by the driver.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndRecord {
    pub outcome: Outcome,
    pub turn: f64,
    pub clock_aut: u64,
    /// Excluded from the digest.
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Step(StepRecord),
    End(EndRecord),
}

impl Record {
    pub fn turn(&self) -> f64 {
        match self {
            Record::Step(s) => s.turn,
            Record::End(e) => e.turn,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "record", rename = "header")]
struct HeaderLine {
    #[serde(flatten)]
    header: HistoryHeader,
}

/// Append-only log of one episode; sealed by its single end record.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeHistory {
    header: HistoryHeader,
    records: Vec<Record>,
}

impl EpisodeHistory {
    pub fn new(header: HistoryHeader) -> Self {
        EpisodeHistory { header, records: Vec::new() }
    }

    pub fn header(&self) -> &HistoryHeader {
        &self.header
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_sealed(&self) -> bool {
        matches!(self.records.last(), Some(Record::End(_)))
    }

    pub fn steps(&self) -> impl Iterator<Item = &StepRecord> + '_ {
        self.records.iter().filter_map(|r| match r {
            Record::Step(s) => Some(s),
            Record::End(_) => None,
        })
    }

    pub fn end(&self) -> Option<&EndRecord> {
        match self.records.last() {
            Some(Record::End(e)) => Some(e),
            _ => None,
        }
    }

    /// Appends `record`, refusing once sealed or if time would run backwards.
    pub fn record_event(&mut self, record: Record) -> Result<(), MetricsError> {
        if self.is_sealed() {
            return Err(MetricsError::Sealed);
        }
        if let Some(last) = self.records.last() {
            if record.turn() < last.turn() {
                return Err(MetricsError::TimeReversal { last: last.turn(), next: record.turn() });
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&HeaderLine { header: self.header.clone() }).expect("header serializes");
        out.push('\n');
        for record in &self.records {
            out += &serde_json::to_string(record).expect("record serializes");
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, MetricsError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(MetricsError::Parse { line: 1, message: "empty log".into() })?;
        let header: HeaderLine =
            serde_json::from_str(first).map_err(|e| MetricsError::Parse { line: 1, message: e.to_string() })?;
        let mut history = EpisodeHistory::new(header.header);
        for (i, line) in lines {
            let record: Record =
                serde_json::from_str(line).map_err(|e| MetricsError::Parse { line: i + 1, message: e.to_string() })?;
            history.record_event(record)?;
        }
        Ok(history)
    }

    pub fn write_to(&self, path: &Path) -> Result<(), MetricsError> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        file.write_all(self.to_jsonl().as_bytes())?;
        file.flush()?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self, MetricsError> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut text = String::new();
        for line in file.lines() {
            text += &line?;
            text.push('\n');
        }
        Self::from_jsonl(&text)
    }

    /// SHA-256 over the log with wall-clock fields zeroed, so two runs of the
    /// same episode hash equal.
    pub fn digest(&self) -> String {
        let mut clean = self.clone();
        clean.header.start_time = 0.0;
        for record in &mut clean.records {
            if let Record::End(e) = record {
                e.wall_time_s = 0.0;
            }
        }
        hex::encode(Sha256::digest(clean.to_jsonl().as_bytes()))
    }

    /// Digest of the action/event stream alone, independent of header
    /// metadata such as the agent name.
    pub fn event_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for step in self.steps() {
            hasher.update(serde_json::to_string(&step.action).expect("serializes"));
            hasher.update(serde_json::to_string(&step.events).expect("serializes"));
            hasher.update(b"\n");
        }
        if let Some(end) = self.end() {
            hasher.update(serde_json::to_string(&end.outcome).expect("serializes"));
        }
        hex::encode(hasher.finalize())
    }
}

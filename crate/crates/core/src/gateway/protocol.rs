use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::engine::{Action, Event, GameStatus, ObservedState};
use crate::episode::Interrupt;
use crate::metrics::{MetricsReport, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageType {
    Hello,
    Ack,
    State,
    Action,
    MacroProgress,
    Chat,
    Error,
    GameOver,
}

impl MessageType {
    pub fn parse(s: &str) -> Option<Self> {
        serde_json::from_value(Value::String(s.to_string())).ok()
    }
}

/// One protocol line: exactly the fields `type`, `seq` and `payload`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireMessage {
    #[serde(rename = "type")]
    pub kind: MessageType,
    pub seq: u64,
    pub payload: Value,
}

impl WireMessage {
    pub fn new(kind: MessageType, seq: u64, payload: impl Serialize) -> Self {
        WireMessage { kind, seq, payload: serde_json::to_value(payload).expect("payload serializes") }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("message serializes")
    }

    pub fn payload_as<T: for<'de> Deserialize<'de>>(&self) -> Result<T, serde_json::Error> {
        T::deserialize(&self.payload)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireError {
    Malformed(String),
    UnknownType(String),
}

/// Decodes one inbound line. A missing or extra field, or a non-integer
/// `seq`, is malformed; a well-formed message with an unknown `type` is
/// reported separately.
pub fn decode_line(line: &str) -> Result<WireMessage, WireError> {
    let value: Value = serde_json::from_str(line).map_err(|e| WireError::Malformed(e.to_string()))?;
    let Value::Object(map) = value else {
        return Err(WireError::Malformed("message must be an object".into()));
    };
    let mut keys: Vec<&str> = map.keys().map(String::as_str).collect();
    keys.sort_unstable();
    if keys != ["payload", "seq", "type"] {
        return Err(WireError::Malformed(format!("expected fields {{type, seq, payload}}, found {keys:?}")));
    }
    let seq = map["seq"].as_u64().ok_or_else(|| WireError::Malformed("`seq` must be a non-negative integer".into()))?;
    let kind = map["type"].as_str().ok_or_else(|| WireError::Malformed("`type` must be a string".into()))?;
    let kind = MessageType::parse(kind).ok_or_else(|| WireError::UnknownType(kind.to_string()))?;
    Ok(WireMessage { kind, seq, payload: map["payload"].clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Agent,
    Spectator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelloPayload {
    pub role: Role,
    /// Agent name, recorded in the episode log.
    #[serde(default)]
    pub agent: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Built-in scenario name or a `.scen` file name in the scenario directory.
    #[serde(default)]
    pub scenario: Option<String>,
    /// Inline scenario source; takes precedence over `scenario`.
    #[serde(default)]
    pub scenario_text: Option<String>,
    /// Inline world configuration (TOML) for dungeon games.
    #[serde(default)]
    pub config: Option<String>,
    #[serde(default)]
    pub turn_limit: Option<u64>,
    /// Game to watch, for spectators.
    #[serde(default)]
    pub game: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AckPayload {
    pub session: String,
    pub game: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePayload {
    pub observation: ObservedState,
    pub events: Vec<Event>,
    pub status: GameStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interrupted: Option<Interrupt>,
    /// Set on the last state of an episode; a `game_over` message follows.
    #[serde(default)]
    pub over: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroProgressPayload {
    pub index: usize,
    pub total: usize,
    pub action: Action,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatPayload {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    Malformed,
    UnknownType,
    BadSeq,
    BadHello,
    BadAction,
    Macro,
    Terminal,
    Protocol,
    NotFound,
    Full,
}

impl ErrorCode {
    /// Whether the session is closed after this error.
    pub fn closes(self) -> bool {
        matches!(
            self,
            ErrorCode::Malformed
                | ErrorCode::UnknownType
                | ErrorCode::BadSeq
                | ErrorCode::BadHello
                | ErrorCode::Protocol
                | ErrorCode::NotFound
                | ErrorCode::Full
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOverPayload {
    pub outcome: Outcome,
    pub report: MetricsReport,
    pub digest: String,
    /// The full episode log in line-delimited form.
    pub history: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_path: Option<String>,
}

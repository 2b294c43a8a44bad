use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{mpsc, Arc, Mutex};

use serde::Serialize;

use super::protocol::{
    decode_line, AckPayload, ChatPayload, ErrorCode, ErrorPayload, GameOverPayload, HelloPayload,
    MacroProgressPayload, MessageType, Role, StatePayload, WireError, WireMessage,
};
use crate::engine::{Action, Event, EngineError};
use crate::episode::{Episode, EpisodeError, GameSource};
use crate::metrics::episode_metrics;
use crate::scenario::{builtin, parse_scenario};
use crate::world::WorldConfig;

#[derive(Debug, Clone)]
pub struct GatewayConfig {
    pub max_sessions: usize,
    pub scenario_dir: Option<PathBuf>,
    pub log_dir: Option<PathBuf>,
    pub world: WorldConfig,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        GatewayConfig { max_sessions: 256, scenario_dir: None, log_dir: None, world: WorldConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outbound {
    Line(String),
    Close,
}

/// Sending half of a session. Numbers outbound messages under a lock so
/// `seq` is strictly increasing even when several games write to it.
#[derive(Debug, Clone)]
pub struct Outbox {
    inner: Arc<Mutex<(u64, mpsc::Sender<Outbound>)>>,
}

impl Outbox {
    pub fn new(tx: mpsc::Sender<Outbound>) -> Self {
        Outbox { inner: Arc::new(Mutex::new((0, tx))) }
    }

    /// Queues a message; a gone receiver is ignored so a dead spectator
    /// never stalls the game.
    pub fn send(&self, kind: MessageType, payload: &impl Serialize) {
        let payload = serde_json::to_value(payload).expect("payload serializes");
        let mut inner = self.inner.lock().expect("outbox lock");
        inner.0 += 1;
        let line = WireMessage { kind, seq: inner.0, payload }.to_line();
        let _ = inner.1.send(Outbound::Line(line));
    }

    pub fn close(&self) {
        let inner = self.inner.lock().expect("outbox lock");
        let _ = inner.1.send(Outbound::Close);
    }
}

pub struct Session {
    pub id: String,
    role: Option<Role>,
    game: Option<String>,
    last_inbound: u64,
    outbox: Outbox,
    closed: bool,
    released: bool,
}

impl Session {
    pub fn outbox(&self) -> &Outbox {
        &self.outbox
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn game(&self) -> Option<&str> {
        self.game.as_deref()
    }
}

struct GameSlot {
    episode: Episode,
    agent: Outbox,
    spectators: Vec<(String, Outbox)>,
    pending_chat: Vec<String>,
}

/// All live games and sessions. Each game's state sits behind its own lock,
/// so actions on one game are serialized and games never share state.
pub struct Hub {
    config: GatewayConfig,
    games: Mutex<HashMap<String, Arc<Mutex<GameSlot>>>>,
    next_session: AtomicU64,
    next_game: AtomicU64,
    active: AtomicUsize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Close,
}

impl Hub {
    pub fn new(config: GatewayConfig) -> Self {
        Hub {
            config,
            games: Mutex::new(HashMap::new()),
            next_session: AtomicU64::new(0),
            next_game: AtomicU64::new(0),
            active: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    pub fn active_sessions(&self) -> usize {
        self.active.load(Ordering::SeqCst)
    }

    pub fn game_count(&self) -> usize {
        self.games.lock().expect("games lock").len()
    }

    /// Registers a session, or returns `None` when the hub is full.
    pub fn open_session(&self, outbox: Outbox) -> Option<Session> {
        let prev = self.active.fetch_add(1, Ordering::SeqCst);
        if prev >= self.config.max_sessions {
            self.active.fetch_sub(1, Ordering::SeqCst);
            outbox.send(
                MessageType::Error,
                &ErrorPayload { code: ErrorCode::Full, message: "server is at its session limit".into() },
            );
            outbox.close();
            return None;
        }
        let id = format!("s{}", self.next_session.fetch_add(1, Ordering::SeqCst) + 1);
        Some(Session { id, role: None, game: None, last_inbound: 0, outbox, closed: false, released: false })
    }

    fn error(&self, session: &mut Session, code: ErrorCode, message: impl Into<String>) -> Flow {
        session.outbox.send(MessageType::Error, &ErrorPayload { code, message: message.into() });
        if code.closes() {
            self.close(session);
            Flow::Close
        } else {
            Flow::Continue
        }
    }

    /// Handles one inbound line. Every line yields either normal handling
    /// or an error message; protocol violations also close the session.
    pub fn handle_line(&self, session: &mut Session, line: &str) -> Flow {
        if session.closed {
            return Flow::Close;
        }
        let msg = match decode_line(line) {
            Ok(msg) => msg,
            Err(WireError::Malformed(why)) => return self.error(session, ErrorCode::Malformed, why),
            Err(WireError::UnknownType(t)) => {
                return self.error(session, ErrorCode::UnknownType, format!("unknown message type `{t}`"))
            }
        };
        if msg.seq != session.last_inbound + 1 {
            let expected = session.last_inbound + 1;
            return self.error(session, ErrorCode::BadSeq, format!("expected seq {expected}, got {}", msg.seq));
        }
        session.last_inbound = msg.seq;
        match (msg.kind, session.role) {
            (MessageType::Hello, None) => self.hello(session, &msg),
            (MessageType::Hello, Some(_)) => self.error(session, ErrorCode::Protocol, "hello sent twice"),
            (_, None) => self.error(session, ErrorCode::Protocol, "the first message must be hello"),
            (MessageType::Action, Some(Role::Agent)) => self.action(session, &msg),
            (MessageType::Chat, Some(role)) => self.chat(session, role, &msg),
            (MessageType::Action, Some(Role::Spectator)) => {
                self.error(session, ErrorCode::Protocol, "spectators cannot act")
            }
            (kind, _) => self.error(session, ErrorCode::Protocol, format!("clients may not send {kind:?} messages")),
        }
    }

    fn resolve_source(&self, hello: &HelloPayload) -> Result<GameSource, String> {
        if let Some(text) = &hello.scenario_text {
            return parse_scenario(text).map(GameSource::Scenario).map_err(|e| e.to_string());
        }
        if let Some(name) = &hello.scenario {
            if let Some(dir) = &self.config.scenario_dir {
                let file = if name.ends_with(".scen") { name.clone() } else { format!("{name}.scen") };
                let path = dir.join(&file);
                if path.is_file() && !file.contains('/') && !file.contains("..") {
                    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                    return parse_scenario(&text).map(GameSource::Scenario).map_err(|e| format!("{file}: {e}"));
                }
            }
            return builtin(name).map(GameSource::Scenario).ok_or_else(|| format!("no scenario named `{name}`"));
        }
        if let Some(toml) = &hello.config {
            return WorldConfig::from_toml(toml).map(GameSource::Dungeon).map_err(|e| e.to_string());
        }
        Ok(GameSource::Dungeon(self.config.world.clone()))
    }

    fn hello(&self, session: &mut Session, msg: &WireMessage) -> Flow {
        let hello: HelloPayload = match msg.payload_as() {
            Ok(h) => h,
            Err(e) => return self.error(session, ErrorCode::BadHello, e.to_string()),
        };
        match hello.role {
            Role::Agent => {
                let source = match self.resolve_source(&hello) {
                    Ok(s) => s,
                    Err(e) => return self.error(session, ErrorCode::BadHello, e),
                };
                let seed = hello.seed.unwrap_or_else(|| source.default_seed());
                let agent = hello.agent.clone().unwrap_or_else(|| "anonymous".into());
                let episode = match source.start(seed, &agent, hello.turn_limit) {
                    Ok(e) => e,
                    Err(e) => return self.error(session, ErrorCode::BadHello, e.to_string()),
                };
                let game = format!("g{}", self.next_game.fetch_add(1, Ordering::SeqCst) + 1);
                session.role = Some(Role::Agent);
                session.game = Some(game.clone());
                session.outbox.send(
                    MessageType::Ack,
                    &AckPayload { session: session.id.clone(), game: game.clone(), role: Role::Agent },
                );
                let slot = GameSlot { episode, agent: session.outbox.clone(), spectators: Vec::new(), pending_chat: Vec::new() };
                let state = state_payload(&slot, Vec::new(), None);
                session.outbox.send(MessageType::State, &state);
                if slot.episode.is_over() {
                    send_game_over(&slot, self.config.log_dir.as_ref(), &game);
                }
                self.games.lock().expect("games lock").insert(game, Arc::new(Mutex::new(slot)));
                Flow::Continue
            }
            Role::Spectator => {
                let Some(game) = hello.game.clone() else {
                    return self.error(session, ErrorCode::BadHello, "spectators must name a game");
                };
                let Some(slot) = self.games.lock().expect("games lock").get(&game).cloned() else {
                    return self.error(session, ErrorCode::NotFound, format!("no game `{game}`"));
                };
                let mut slot = slot.lock().expect("game lock");
                session.role = Some(Role::Spectator);
                session.game = Some(game.clone());
                session.outbox.send(
                    MessageType::Ack,
                    &AckPayload { session: session.id.clone(), game, role: Role::Spectator },
                );
                session.outbox.send(MessageType::State, &state_payload(&slot, Vec::new(), None));
                slot.spectators.push((session.id.clone(), session.outbox.clone()));
                Flow::Continue
            }
        }
    }

    fn slot(&self, session: &Session) -> Option<Arc<Mutex<GameSlot>>> {
        let game = session.game.as_ref()?;
        self.games.lock().expect("games lock").get(game).cloned()
    }

    fn action(&self, session: &mut Session, msg: &WireMessage) -> Flow {
        let action: Action = match msg.payload_as() {
            Ok(a) => a,
            Err(e) => return self.error(session, ErrorCode::BadAction, e.to_string()),
        };
        let Some(slot) = self.slot(session) else {
            return self.error(session, ErrorCode::NotFound, "game no longer exists");
        };
        let mut slot = slot.lock().expect("game lock");
        if slot.episode.is_over() {
            return self.error(session, ErrorCode::Terminal, "the game is over");
        }
        let watchers: Vec<Outbox> = std::iter::once(slot.agent.clone())
            .chain(slot.spectators.iter().map(|(_, o)| o.clone()))
            .collect();
        let outcome = slot.episode.act(&action, |index, total, primitive, result| {
            if action.is_macro() {
                let progress =
                    MacroProgressPayload { index, total, action: primitive.clone(), events: result.events.clone() };
                for w in &watchers {
                    w.send(MessageType::MacroProgress, &progress);
                }
            }
        });
        let outcome = match outcome {
            Ok(o) => o,
            Err(EpisodeError::Macro(e)) => return self.error(session, ErrorCode::Macro, e.to_string()),
            Err(EpisodeError::Engine(EngineError::Terminal) | EpisodeError::Over) => {
                return self.error(session, ErrorCode::Terminal, "the game is over")
            }
            Err(EpisodeError::Engine(e)) => return self.error(session, ErrorCode::BadAction, e.to_string()),
        };
        let events: Vec<Event> = outcome.results.iter().flat_map(|r| r.events.iter().cloned()).collect();
        let state = state_payload(&slot, events, outcome.interrupted);
        slot.pending_chat.clear();
        for w in &watchers {
            w.send(MessageType::State, &state);
        }
        if slot.episode.is_over() {
            send_game_over(&slot, self.config.log_dir.as_ref(), session.game.as_deref().unwrap_or("game"));
        }
        Flow::Continue
    }

    fn chat(&self, session: &mut Session, role: Role, msg: &WireMessage) -> Flow {
        let chat: ChatPayload = match msg.payload_as() {
            Ok(c) => c,
            Err(e) => return self.error(session, ErrorCode::Malformed, e.to_string()),
        };
        let Some(slot) = self.slot(session) else {
            return self.error(session, ErrorCode::NotFound, "game no longer exists");
        };
        let mut slot = slot.lock().expect("game lock");
        match role {
            Role::Spectator => slot.pending_chat.push(format!("[{}] {}", session.id, chat.text)),
            Role::Agent => {
                let relay = ChatPayload { text: chat.text, from: Some(session.id.clone()) };
                for (_, spectator) in &slot.spectators {
                    spectator.send(MessageType::Chat, &relay);
                }
            }
        }
        Flow::Continue
    }

    fn close(&self, session: &mut Session) {
        if !session.closed {
            session.closed = true;
            session.outbox.close();
            self.disconnect(session);
        }
    }

    /// Releases a session; safe to call more than once. An agent leaving
    /// ends its game.
    pub fn disconnect(&self, session: &mut Session) {
        session.closed = true;
        if session.released {
            return;
        }
        session.released = true;
        self.active.fetch_sub(1, Ordering::SeqCst);
        let role = session.role;
        let game = session.game.clone();
        let Some(game) = game else { return };
        match role {
            Some(Role::Agent) => {
                let removed = self.games.lock().expect("games lock").remove(&game);
                if let Some(slot) = removed {
                    let mut slot = slot.lock().expect("game lock");
                    if !slot.episode.is_over() {
                        slot.episode.abandon();
                        send_game_over(&slot, self.config.log_dir.as_ref(), &game);
                    }
                }
            }
            Some(Role::Spectator) => {
                if let Some(slot) = self.games.lock().expect("games lock").get(&game).cloned() {
                    slot.lock().expect("game lock").spectators.retain(|(id, _)| *id != session.id);
                }
            }
            None => {}
        }
    }
}

fn state_payload(slot: &GameSlot, events: Vec<Event>, interrupted: Option<crate::episode::Interrupt>) -> StatePayload {
    let mut observation = slot.episode.observation().clone();
    observation.messages.extend(slot.pending_chat.iter().cloned());
    StatePayload { status: observation.status, observation, events, interrupted, over: slot.episode.is_over() }
}

fn send_game_over(slot: &GameSlot, log_dir: Option<&PathBuf>, game: &str) {
    let history = slot.episode.history();
    let report = episode_metrics(history).expect("sealed history");
    let log_path = log_dir.and_then(|dir| {
        let path = dir.join(format!("{game}.jsonl"));
        history.write_to(&path).ok().map(|_| path.display().to_string())
    });
    let payload = GameOverPayload {
        outcome: slot.episode.outcome().expect("sealed"),
        report,
        digest: history.digest(),
        history: history.to_jsonl(),
        log_path,
    };
    slot.agent.send(MessageType::GameOver, &payload);
    for (_, s) in &slot.spectators {
        s.send(MessageType::GameOver, &payload);
    }
}

/// Longest accepted inbound line in bytes.
pub const MAX_LINE_BYTES: usize = 1 << 20;

impl Hub {
    /// Like `handle_line` for raw bytes off the wire; invalid UTF-8 and
    /// overlong lines are malformed.
    pub fn handle_raw(&self, session: &mut Session, raw: &[u8]) -> Flow {
        if raw.len() > MAX_LINE_BYTES {
            return self.error(session, ErrorCode::Malformed, format!("line longer than {MAX_LINE_BYTES} bytes"));
        }
        match std::str::from_utf8(raw) {
            Ok(text) => self.handle_line(session, text.trim_end_matches(['\r', '\n'])),
            Err(e) => self.error(session, ErrorCode::Malformed, format!("invalid UTF-8: {e}")),
        }
    }
}

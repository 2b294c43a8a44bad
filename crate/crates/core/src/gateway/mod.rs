//! Network play: newline-delimited JSON sessions for agents and spectators.
//!
//! Every line is one object with exactly the fields `type`, `seq` and
//! `payload`. A client opens with `hello`; an agent then sends `action`
//! messages and receives `state` (plus `macro_progress` while a macro runs
//! and `game_over` at the end). Spectators receive the agent's messages and
//! may send `chat`, which shows up in the agent's next observation.

mod client;
mod hub;
mod macros;
pub mod protocol;
mod server;

pub use client::{Connection, LocalConnection, RemoteConnection};
pub use hub::{Flow, GatewayConfig, Hub, Outbound, Outbox, Session};
pub use macros::{expand_macro, travel_path, MacroError};
pub use protocol::{ErrorCode, MessageType, Role, WireMessage};
pub use server::{serve, ServerHandle};

//! Starts a gateway on a local port, plays the rulebot through it over TCP
//! and watches the game from a second connection as a spectator.
//!
//! cargo run --example gateway_session -- [scenario]

use crawlbench::episode::GameSource;
use crawlbench::gateway::protocol::{AckPayload, StatePayload};
use crawlbench::gateway::{serve, Connection, GatewayConfig, MessageType, RemoteConnection};
use crawlbench::harness::{hello_for, AgentKind};
use crawlbench::scenario::builtin;
use serde_json::json;

fn main() -> anyhow::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "open_room".into());
    let source = GameSource::Scenario(builtin(&name).ok_or_else(|| anyhow::anyhow!("unknown scenario `{name}`"))?);
    let server = serve("127.0.0.1:0", GatewayConfig::default())?;
    println!("gateway listening on {}", server.addr());

    let mut agent = RemoteConnection::connect(server.addr())?;
    agent.send(MessageType::Hello, &hello_for(&source, "rulebot", 1, None))?;
    let ack: AckPayload = agent.recv()?.payload_as()?;
    println!("agent session {} playing game {}", ack.session, ack.game);

    let mut watcher = RemoteConnection::connect(server.addr())?;
    watcher.send(MessageType::Hello, &json!({ "role": "spectator", "game": ack.game }))?;
    // Wait for the spectator to be admitted before the agent moves.
    let joined: AckPayload = watcher.recv()?.payload_as()?;
    println!("spectator session {} joined", joined.session);
    let spectator = std::thread::spawn(move || -> anyhow::Result<usize> {
        let mut states = 0;
        watcher.send(MessageType::Chat, &json!({ "text": "good luck" }))?;
        loop {
            let msg = watcher.recv()?;
            match msg.kind {
                MessageType::State => states += 1,
                MessageType::GameOver => return Ok(states),
                _ => {}
            }
        }
    });

    let mut bot = AgentKind::Rulebot.build(1);
    loop {
        let msg = agent.recv()?;
        match msg.kind {
            MessageType::State => {
                let state: StatePayload = msg.payload_as()?;
                // Spectator chat arrives tagged with the sender's session id.
                for line in state.observation.messages.iter().filter(|m| m.starts_with('[')) {
                    println!("chat for the agent: {line}");
                }
                if !state.over {
                    agent.send(MessageType::Action, &bot.decide(&state.observation))?;
                }
            }
            MessageType::GameOver => {
                println!("game over: {}", msg.payload["outcome"]);
                break;
            }
            _ => {}
        }
    }
    let seen = spectator.join().expect("spectator thread")?;
    println!("spectator watched {seen} state updates");
    server.shutdown();
    Ok(())
}

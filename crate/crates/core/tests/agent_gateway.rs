use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crawlbench::engine::{Action, GameStatus};
use crawlbench::episode::GameSource;
use crawlbench::gateway::{
    expand_macro, serve, Connection, ErrorCode, GatewayConfig, Hub, LocalConnection, MessageType, RemoteConnection,
    WireMessage,
};
use crawlbench::geom::{Direction, Position};
use crawlbench::scenario::parse_scenario;
use serde_json::{json, Value};

const TRANSCRIPT: &str = include_str!("../docs/transcript.ndjson");
const CORRIDOR: &str = "name: corridor\nseed: 1\nwin: orb_exit\nmap:\n######\n#@..0#\n######\n";

fn hub() -> Arc<Hub> {
    Arc::new(Hub::new(GatewayConfig::default()))
}

fn line(kind: &str, seq: u64, payload: Value) -> String {
    json!({ "type": kind, "seq": seq, "payload": payload }).to_string()
}

fn agent(hub: &Arc<Hub>, hello: Value) -> (LocalConnection, String) {
    let mut conn = LocalConnection::open(hub.clone());
    conn.send(MessageType::Hello, &hello).unwrap();
    let msgs = conn.drain();
    assert_eq!(msgs[0].kind, MessageType::Ack, "{msgs:?}");
    let game = msgs[0].payload["game"].as_str().unwrap().to_string();
    (conn, game)
}

fn spectator(hub: &Arc<Hub>, game: &str) -> LocalConnection {
    let mut conn = LocalConnection::open(hub.clone());
    conn.send(MessageType::Hello, &json!({ "role": "spectator", "game": game })).unwrap();
    let kinds: Vec<MessageType> = conn.drain().iter().map(|m| m.kind).collect();
    assert_eq!(kinds, [MessageType::Ack, MessageType::State]);
    conn
}

fn of_kind(msgs: &[WireMessage], kind: MessageType) -> Vec<&WireMessage> {
    msgs.iter().filter(|m| m.kind == kind).collect()
}

fn error_code(msg: &WireMessage) -> ErrorCode {
    assert_eq!(msg.kind, MessageType::Error, "{msg:?}");
    serde_json::from_value(msg.payload["code"].clone()).unwrap()
}

/// Replays the client lines of the committed transcript and rebuilds the
/// whole exchange, which must match the file byte for byte.
#[test]
fn transcript_is_byte_exact() {
    let hub = hub();
    let mut conn = LocalConnection::open(hub);
    let mut rebuilt = String::new();
    for entry in TRANSCRIPT.lines() {
        if let Some(client) = entry.strip_prefix("> ") {
            rebuilt += entry;
            rebuilt += "\n";
            conn.send_raw(client);
            for reply in conn.drain_lines() {
                rebuilt += &format!("< {reply}\n");
            }
        }
    }
    assert_eq!(rebuilt, TRANSCRIPT);
    assert!(conn.is_closed());
}

#[test]
fn wait_advances_one_turn() {
    let hub = hub();
    let (mut conn, _) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let msgs = conn.drain();
    let state = of_kind(&msgs, MessageType::State)[0];
    assert_eq!(state.payload["observation"]["turn_count"], json!(1.0));
    assert_eq!(state.payload["over"], json!(false));
}

#[test]
fn spectator_chat_reaches_the_agent_once() {
    let hub = hub();
    let (mut conn, game) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    let mut watcher = spectator(&hub, &game);
    watcher.send(MessageType::Chat, &json!({ "text": "go left" })).unwrap();
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let msgs = conn.drain();
    let messages = &of_kind(&msgs, MessageType::State)[0].payload["observation"]["messages"];
    let id = watcher.session_id().unwrap().to_string();
    assert!(messages.as_array().unwrap().contains(&json!(format!("[{id}] go left"))), "{messages}");

    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let again = conn.drain();
    let messages = &of_kind(&again, MessageType::State)[0].payload["observation"]["messages"];
    assert!(!messages.to_string().contains("go left"));
}

#[test]
fn agent_chat_is_relayed_to_spectators() {
    let hub = hub();
    let (mut conn, game) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    let mut watcher = spectator(&hub, &game);
    conn.send(MessageType::Chat, &json!({ "text": "heading east" })).unwrap();
    let got = watcher.drain();
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].kind, MessageType::Chat);
    assert_eq!(got[0].payload["text"], json!("heading east"));
}

#[test]
fn spectators_get_the_agents_payload() {
    let hub = hub();
    let (mut conn, game) = agent(&hub, json!({ "role": "agent", "seed": 11 }));
    let mut watchers: Vec<LocalConnection> = (0..3).map(|_| spectator(&hub, &game)).collect();
    for i in 0..100 {
        let dir = Direction::ALL[i % 8];
        conn.send(MessageType::Action, &Action::Move { dir }).unwrap();
        let mine = conn.drain();
        let state = of_kind(&mine, MessageType::State)[0];
        for w in &mut watchers {
            let theirs = w.drain();
            assert_eq!(of_kind(&theirs, MessageType::State)[0].payload, state.payload);
        }
        let obs = &state.payload["observation"];
        let pos: Position = serde_json::from_value(obs["player"]["position"].clone()).unwrap();
        let visible: BTreeSet<Position> = obs["visible"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| serde_json::from_value(t["pos"].clone()).unwrap())
            .collect();
        assert!(visible.iter().all(|p| p.chebyshev(pos) <= 7));
        for m in obs["monsters"].as_array().unwrap() {
            let p: Position = serde_json::from_value(m["pos"].clone()).unwrap();
            assert!(visible.contains(&p), "monster outside the agent's view");
        }
        if state.payload["over"] == json!(true) {
            break;
        }
    }
}

#[test]
fn spectator_leaving_does_not_disturb_the_agent() {
    let hub = hub();
    let (mut conn, game) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    let mut watcher = spectator(&hub, &game);
    watcher.disconnect();
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    assert_eq!(of_kind(&conn.drain(), MessageType::State).len(), 1);
}

#[test]
fn spectators_cannot_act() {
    let hub = hub();
    let (mut conn, game) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    let mut watcher = spectator(&hub, &game);
    watcher.send(MessageType::Action, &Action::Move { dir: Direction::E }).unwrap();
    assert_eq!(error_code(&watcher.drain()[0]), ErrorCode::Protocol);
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let msgs = conn.drain();
    let obs = &of_kind(&msgs, MessageType::State)[0].payload["observation"];
    assert_eq!(obs["player"]["position"], json!([1, 1]));
}

#[test]
fn actions_after_death_are_terminal_errors() {
    let deadly = "name: ring\nseed: 1\nwin: kill_all\nmap:\n#####\n#ddd#\n#d@d#\n#ddd#\n#####\n";
    let hub = hub();
    let (mut conn, _) = agent(&hub, json!({ "role": "agent", "scenario_text": deadly }));
    let mut over = None;
    for _ in 0..200 {
        conn.send(MessageType::Action, &Action::Wait).unwrap();
        if let Some(m) = conn.drain().into_iter().find(|m| m.kind == MessageType::GameOver) {
            over = Some(m);
            break;
        }
    }
    let over = over.expect("the player dies");
    assert_eq!(over.payload["outcome"], json!("dead"));
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let reply = conn.drain();
    assert_eq!(error_code(&reply[0]), ErrorCode::Terminal);
    assert!(!conn.is_closed());
}

#[test]
fn bad_action_keeps_the_session_but_bad_seq_closes_it() {
    let hub = hub();
    let (mut conn, _) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    conn.send_raw(&line("action", 2, json!({ "action": "cast_fireball" })));
    assert_eq!(error_code(&conn.drain()[0]), ErrorCode::BadAction);
    assert!(!conn.is_closed());
    conn.send_raw(&line("action", 9, json!({ "action": "wait" })));
    assert_eq!(error_code(&conn.drain()[0]), ErrorCode::BadSeq);
    assert!(conn.is_closed());
}

#[test]
fn malformed_session_is_closed_without_touching_others() {
    let hub = hub();
    let (mut good, _) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    let (mut bad, _) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    bad.send_raw("{\"type\": \"action\", \"seq\": 2");
    assert_eq!(error_code(&bad.drain()[0]), ErrorCode::Malformed);
    assert!(bad.is_closed());
    good.send(MessageType::Action, &Action::Move { dir: Direction::E }).unwrap();
    let msgs = good.drain();
    assert_eq!(of_kind(&msgs, MessageType::State)[0].payload["observation"]["player"]["position"], json!([1, 2]));
}

#[test]
fn unknown_types_and_unknown_games_are_reported() {
    let hub = hub();
    let mut conn = LocalConnection::open(hub.clone());
    conn.send_raw(&line("teleport", 1, json!({})));
    assert_eq!(error_code(&conn.drain()[0]), ErrorCode::UnknownType);
    let mut lost = LocalConnection::open(hub);
    lost.send(MessageType::Hello, &json!({ "role": "spectator", "game": "g404" })).unwrap();
    assert_eq!(error_code(&lost.drain()[0]), ErrorCode::NotFound);
}

#[test]
fn unreachable_travel_fails_before_moving() {
    let walled = "name: w\nseed: 1\nwin: orb_exit\nmap:\n#######\n#@.#.0#\n#######\n";
    let hub = hub();
    let (mut conn, _) = agent(&hub, json!({ "role": "agent", "scenario_text": walled }));
    conn.send(MessageType::Action, &Action::TravelTo { target: Position::new(1, 5) }).unwrap();
    let reply = conn.drain();
    assert_eq!(error_code(&reply[0]), ErrorCode::Macro);
    conn.send(MessageType::Action, &Action::Wait).unwrap();
    let msgs = conn.drain();
    assert_eq!(of_kind(&msgs, MessageType::State)[0].payload["observation"]["turn_count"], json!(1.0));
}

#[test]
fn travel_reports_progress_per_step() {
    let hub = hub();
    let (mut conn, _) = agent(&hub, json!({ "role": "agent", "scenario_text": CORRIDOR }));
    conn.send(MessageType::Action, &Action::TravelTo { target: Position::new(1, 3) }).unwrap();
    let msgs = conn.drain();
    let progress = of_kind(&msgs, MessageType::MacroProgress);
    assert_eq!(progress.len(), 2);
    assert_eq!(progress[1].payload["index"], json!(1));
    assert_eq!(progress[1].payload["total"], json!(2));
    assert!(msgs.last().unwrap().kind == MessageType::State);
}

fn open_room_source(size: u32) -> GameSource {
    let mut text = String::from("name: open\nseed: 1\nwin: orb_exit\nmap:\n");
    for r in 0..size + 2 {
        for c in 0..size + 2 {
            text.push(match (r, c) {
                (0, _) | (_, 0) => '#',
                _ if r == size + 1 || c == size + 1 => '#',
                (5, 5) => '@',
                (1, 10) => '0',
                (4, 6) => '(',
                _ => '.',
            });
        }
        text.push('\n');
    }
    GameSource::Scenario(parse_scenario(&text).unwrap())
}

/// 8-way breadth-first distances over remembered passable tiles.
fn bfs_distance(passable: impl Fn(Position) -> bool, from: Position, to: Position) -> Option<usize> {
    let mut dist = std::collections::HashMap::from([(from, 0usize)]);
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        if p == to {
            return Some(dist[&p]);
        }
        for (dr, dc) in [(-1i64, -1i64), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
            let (r, c) = (p.row as i64 + dr, p.col as i64 + dc);
            if r < 0 || c < 0 {
                continue;
            }
            let q = Position::new(r as u32, c as u32);
            if passable(q) && !dist.contains_key(&q) {
                dist.insert(q, dist[&p] + 1);
                queue.push_back(q);
            }
        }
    }
    None
}

#[test]
fn travel_paths_are_shortest_in_an_open_room() {
    let game = open_room_source(10).new_game(1).unwrap();
    let obs = crawlbench::engine::observe(&game);
    let here = obs.player.position;
    for target in obs.remembered.iter().map(|(p, _)| p).filter(|p| obs.remembered.is_passable(*p) && *p != here) {
        let path = expand_macro(&Action::TravelTo { target }, &obs).unwrap();
        let oracle = bfs_distance(|p| obs.remembered.is_passable(p), here, target).unwrap();
        assert_eq!(path.len(), oracle, "to {target:?}");
        assert_eq!(path.len(), here.chebyshev(target) as usize);
    }
    let adjacent = Position::new(here.row, here.col + 1);
    assert_eq!(expand_macro(&Action::TravelTo { target: adjacent }, &obs).unwrap(), [Action::Move { dir: Direction::E }]);
}

#[test]
fn throw_equals_its_primitives() {
    let source = open_room_source(10);
    let mut by_macro = source.start(1, "t", None).unwrap();
    let mut by_hand = source.start(1, "t", None).unwrap();
    for ep in [&mut by_macro, &mut by_hand] {
        ep.step_primitive(&Action::Move { dir: Direction::Ne }).unwrap();
        ep.step_primitive(&Action::Pickup).unwrap();
    }
    let obs = by_macro.observation().clone();
    let slot = obs.inventory.iter().find(|e| e.weapon_class.is_some()).unwrap().slot;
    let throw = Action::Throw { slot, target: Position::new(1, 6) };
    let expansion = expand_macro(&throw, &obs).unwrap();
    assert!(expansion.len() >= 2);
    by_macro.act(&throw, |_, _, _, _| {}).unwrap();
    for primitive in &expansion {
        by_hand.step_primitive(primitive).unwrap();
    }
    assert!(by_macro.game() == by_hand.game());
    assert_eq!(by_macro.observation(), by_hand.observation());
}

#[test]
fn tcp_sessions_match_local_play_and_survive_garbage() {
    let server = serve("127.0.0.1:0", GatewayConfig::default()).unwrap();
    assert!(serve(&server.addr().to_string(), GatewayConfig::default()).is_err(), "second bind must fail");
    let mut remote = RemoteConnection::connect(server.addr()).unwrap();
    remote.send(MessageType::Hello, &json!({ "role": "agent", "scenario_text": CORRIDOR })).unwrap();
    assert_eq!(remote.recv().unwrap().kind, MessageType::Ack);
    assert_eq!(remote.recv().unwrap().kind, MessageType::State);
    remote.send(MessageType::Action, &Action::Move { dir: Direction::E }).unwrap();
    let state = remote.recv().unwrap();

    let (mut local, _) = agent(&hub(), json!({ "role": "agent", "scenario_text": CORRIDOR }));
    local.send(MessageType::Action, &Action::Move { dir: Direction::E }).unwrap();
    let local_state = local.drain().into_iter().find(|m| m.kind == MessageType::State).unwrap();
    assert_eq!(state.payload, local_state.payload);

    let mut junk = RemoteConnection::connect(server.addr()).unwrap();
    junk.send_raw(&[0xff, 0xfe, b'{']).unwrap();
    let reply = junk.recv().unwrap();
    assert_eq!(error_code(&reply), ErrorCode::Malformed);
    assert!(junk.recv().is_err(), "session closes after a malformed line");

    remote.send(MessageType::Action, &Action::Move { dir: Direction::E }).unwrap();
    let state = remote.recv().unwrap();
    assert_eq!(state.payload["observation"]["player"]["position"], json!([1, 3]));
    let status: GameStatus = serde_json::from_value(state.payload["status"].clone()).unwrap();
    assert_eq!(status, GameStatus::Running);
    server.shutdown();
}

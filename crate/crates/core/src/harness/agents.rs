use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::engine::{Action, ObservedState};
use crate::geom::{Direction, Position};
use crate::rng::{RngStream, Subsystem};

use super::planner::{planner_agent, PlannerMemory};
use super::rulebot::{rulebot_agent, RulebotMemory};

/// A decision-maker holding its own memory and random stream.
pub trait Agent: Send {
    fn name(&self) -> &'static str;
    fn decide(&mut self, obs: &ObservedState) -> Action;
}

/// Pure decision function: `(observation, memory, rng) -> (action, memory)`.
pub type Policy<M> = fn(&ObservedState, M, &mut RngStream) -> (Action, M);

pub struct PolicyAgent<M> {
    name: &'static str,
    policy: Policy<M>,
    memory: Option<M>,
    rng: RngStream,
}

impl<M: Default> PolicyAgent<M> {
    pub fn new(name: &'static str, policy: Policy<M>, seed: u64) -> Self {
        PolicyAgent { name, policy, memory: Some(M::default()), rng: RngStream::for_subsystem(seed, Subsystem::Agent, 0) }
    }

    pub fn memory(&self) -> &M {
        self.memory.as_ref().expect("memory present between decisions")
    }
}

impl<M: Send> Agent for PolicyAgent<M> {
    fn name(&self) -> &'static str {
        self.name
    }

    fn decide(&mut self, obs: &ObservedState) -> Action {
        let memory = self.memory.take().expect("memory present between decisions");
        let (action, memory) = (self.policy)(obs, memory, &mut self.rng);
        self.memory = Some(memory);
        action
    }
}

/// Uniform choice among the legal primitive actions.
pub fn random_agent(obs: &ObservedState, memory: (), rng: &mut RngStream) -> (Action, ()) {
    let action = rng.choose(&obs.legal_actions).cloned().unwrap_or(Action::Wait);
    (action, memory)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentKind {
    Random,
    Rulebot,
    Planner,
}

impl AgentKind {
    pub const ALL: [AgentKind; 3] = [AgentKind::Random, AgentKind::Rulebot, AgentKind::Planner];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::Rulebot => "rulebot",
            AgentKind::Planner => "planner",
        }
    }

    /// A fresh agent whose random stream derives from `seed`.
    pub fn build(self, seed: u64) -> Box<dyn Agent> {
        match self {
            AgentKind::Random => Box::new(PolicyAgent::<()>::new("random", random_agent, seed)),
            AgentKind::Rulebot => Box::new(PolicyAgent::<RulebotMemory>::new("rulebot", rulebot_agent, seed)),
            AgentKind::Planner => Box::new(PolicyAgent::<PlannerMemory>::new("planner", planner_agent, seed)),
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown agent `{s}` (expected random, rulebot or planner)"))
    }
}

/// Breadth-first distances over remembered passable tiles, 8-way, from the
/// player. Returns tiles in visiting order with their distance.
pub(crate) fn reachable(obs: &ObservedState) -> Vec<(Position, u32)> {
    let map = &obs.remembered;
    let cols = map.cols as usize;
    let idx = |p: Position| p.row as usize * cols + p.col as usize;
    let mut seen = vec![false; map.rows as usize * cols];
    let start = obs.player.position;
    seen[idx(start)] = true;
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((p, d)) = queue.pop_front() {
        out.push((p, d));
        for dir in Direction::ALL {
            let Some(q) = p.step(dir) else { continue };
            if q.row < map.rows && q.col < map.cols && !seen[idx(q)] && map.is_passable(q) {
                seen[idx(q)] = true;
                queue.push_back((q, d + 1));
            }
        }
    }
    out
}

/// Remembered passable tiles with an unseen in-bounds neighbour.
pub(crate) fn is_frontier(obs: &ObservedState, p: Position) -> bool {
    let map = &obs.remembered;
    Direction::ALL.into_iter().filter_map(|d| p.step(d)).any(|q| q.row < map.rows && q.col < map.cols && !map.contains(q))
}

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::agents::{is_frontier, reachable};
use crate::engine::{Action, ObservedState};
use crate::geom::Position;
use crate::pddl::{ground_steps, solve, PddlGoal, ProblemExporter};
use crate::rng::RngStream;
use crate::world::{ItemCategory, LevelId, Terrain};

/// Frontier goals tried per decision before the planner gives up on exploring.
pub const FRONTIER_CANDIDATES: usize = 8;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PlannerMemory {
    pub plan: VecDeque<Action>,
    pub goal: Option<PddlGoal>,
    pub replans: u32,
    /// Plans dropped because the world no longer matched them.
    pub invalidated: u32,
    pub notes: Vec<String>,
    #[serde(skip)]
    exporter: ProblemExporter,
    expected: Option<(LevelId, Position)>,
    given_up: BTreeSet<(LevelId, Position)>,
}

fn still_valid(obs: &ObservedState, memory: &PlannerMemory) -> bool {
    let Some(next) = memory.plan.front() else { return false };
    if memory.expected.is_some_and(|e| e != (obs.level, obs.player.position)) {
        return false;
    }
    match next {
        Action::Move { dir } => obs.player.position.step(*dir).is_some_and(|p| obs.remembered.is_passable(p)),
        _ => obs.legal_actions.contains(next),
    }
}

/// Plans through the exported planning problem for each sub-goal in turn,
/// replanning whenever the world stops matching. Falls back to a random
/// legal action when no plan exists.
pub fn planner_agent(obs: &ObservedState, mut memory: PlannerMemory, rng: &mut RngStream) -> (Action, PlannerMemory) {
    let me = obs.player.position;
    if let Some(m) = obs.monsters.iter().filter(|m| m.pos.chebyshev(me) == 1).min_by_key(|m| (m.hp, m.id)) {
        memory.plan.clear();
        memory.expected = None;
        if let Some(dir) = me.direction_to(m.pos) {
            return (Action::Attack { dir }, memory);
        }
    }
    if !memory.plan.is_empty() && !still_valid(obs, &memory) {
        memory.invalidated += 1;
        memory.notes.push(format!("plan invalidated at turn {} ({} steps left)", obs.turn_count, memory.plan.len()));
        memory.plan.clear();
    }
    if memory.plan.is_empty() {
        plan(obs, &mut memory);
    }
    let Some(action) = memory.plan.pop_front() else {
        memory.expected = None;
        let action = rng.choose(&obs.legal_actions).copied().unwrap_or(Action::Wait);
        return (action, memory);
    };
    memory.expected = match action {
        Action::Move { dir } => me.step(dir).map(|p| (obs.level, p)),
        Action::Pickup => Some((obs.level, me)),
        _ => None,
    };
    (action, memory)
}

fn goals(obs: &ObservedState, given_up: &BTreeSet<(LevelId, Position)>) -> Vec<(PddlGoal, Option<Action>)> {
    let me = obs.player.position;
    let mut out = Vec::new();
    let remembered = |p: Position| obs.remembered.get(p);
    let tiles = reachable(obs);
    if obs.player.has_orb {
        for (p, _) in &tiles {
            if remembered(*p).is_some_and(|m| m.terrain == Terrain::StairsUp) {
                out.push((PddlGoal::At { pos: *p }, Some(Action::Ascend)));
            }
        }
        return out;
    }
    for (p, m) in obs.remembered.iter() {
        for item in &m.items {
            if item.category == ItemCategory::Orb {
                out.push((PddlGoal::HasOrb, None));
            } else if !given_up.contains(&(obs.level, p)) {
                out.push((PddlGoal::Holding { item: item.id }, None));
            }
        }
    }
    out.sort_by_key(|(g, _)| !matches!(g, PddlGoal::HasOrb));
    for (p, _) in tiles.iter().filter(|(p, _)| *p != me && is_frontier(obs, *p)).take(FRONTIER_CANDIDATES) {
        out.push((PddlGoal::At { pos: *p }, None));
    }
    for (p, _) in &tiles {
        if remembered(*p).is_some_and(|m| m.terrain == Terrain::StairsDown) && !given_up.contains(&(obs.level, *p)) {
            out.push((PddlGoal::At { pos: *p }, Some(Action::Descend)));
        }
    }
    out
}

/// The goal a fresh planner would pursue first in this observation.
pub fn default_goal(obs: &ObservedState) -> Option<PddlGoal> {
    goals(obs, &BTreeSet::new()).into_iter().map(|(g, _)| g).find(|g| *g != PddlGoal::At { pos: obs.player.position })
}

fn plan(obs: &ObservedState, memory: &mut PlannerMemory) {
    for (goal, then) in goals(obs, &memory.given_up) {
        if goal == (PddlGoal::At { pos: obs.player.position }) {
            match then {
                Some(action) if obs.legal_actions.contains(&action) => {
                    memory.plan.push_back(action);
                    memory.goal = Some(goal);
                    return;
                }
                Some(_) => {
                    memory.given_up.insert((obs.level, obs.player.position));
                    continue;
                }
                None => continue,
            }
        }
        let Ok(problem) = memory.exporter.problem(obs, goal.clone()) else { continue };
        let Some(steps) = solve(&problem) else { continue };
        let Ok(actions) = ground_steps(&steps, obs) else { continue };
        if actions.is_empty() && then.is_none() {
            continue;
        }
        memory.replans += 1;
        memory.plan.extend(actions);
        memory.plan.extend(then);
        memory.goal = Some(goal);
        return;
    }
    memory.goal = None;
}

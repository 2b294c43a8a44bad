use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use super::{Fact, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlanStep {
    Move { from: String, to: String },
    Pickup { item: String, tile: String },
    Descend { tile: String },
    Ascend { tile: String },
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanStep::Move { from, to } => write!(f, "(move {from} {to})"),
            PlanStep::Pickup { item, tile } => write!(f, "(pickup {item} {tile})"),
            PlanStep::Descend { tile } => write!(f, "(descend {tile})"),
            PlanStep::Ascend { tile } => write!(f, "(ascend {tile})"),
        }
    }
}

/// Shortest plan by breadth-first search over (position, goal items held).
///
/// Only goal-relevant pickups are expanded and stairs are never taken, since
/// neither can shorten a plan whose goals are all `at`/`holding` facts.
/// Returns `None` when the goal is unreachable.
pub fn solve(problem: &Problem) -> Option<Vec<PlanStep>> {
    let mut start = None;
    let mut passable = std::collections::HashSet::new();
    let mut adjacent: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut item_at: HashMap<&str, &str> = HashMap::new();
    let mut held = std::collections::HashSet::new();
    for fact in &problem.init {
        match fact {
            Fact::At(t) => start = Some(t.as_str()),
            Fact::Passable(t) => {
                passable.insert(t.as_str());
            }
            Fact::Adjacent(a, b) => adjacent.entry(a).or_default().push(b),
            Fact::ItemAt(i, t) => {
                item_at.insert(i, t);
            }
            Fact::Holding(i) => {
                held.insert(i.as_str());
            }
            Fact::StairsDown(_) | Fact::StairsUp(_) => {}
        }
    }
    let start = start?;
    let mut target_tile = None;
    let mut wanted: Vec<&str> = Vec::new();
    for fact in &problem.goal {
        match fact {
            Fact::At(t) => match target_tile {
                Some(existing) if existing != t.as_str() => return None,
                _ => target_tile = Some(t.as_str()),
            },
            Fact::Holding(i) if held.contains(i.as_str()) => {}
            Fact::Holding(i) => {
                item_at.get(i.as_str())?;
                wanted.push(i);
            }
            _ => return None,
        }
    }
    if wanted.len() > 20 {
        return None;
    }
    let full = (1u32 << wanted.len()) - 1;
    let done = |tile: &str, mask: u32| mask == full && target_tile.is_none_or(|t| t == tile);

    type Node<'a> = (&'a str, u32);
    let mut prev: HashMap<Node, (Node, PlanStep)> = HashMap::new();
    let mut queue = VecDeque::from([(start, 0u32)]);
    let mut seen = std::collections::HashSet::from([(start, 0u32)]);
    let mut goal = None;
    while let Some((tile, mask)) = queue.pop_front() {
        if done(tile, mask) {
            goal = Some((tile, mask));
            break;
        }
        let mut next: Vec<(Node, PlanStep)> = Vec::new();
        for (bit, item) in wanted.iter().enumerate() {
            if mask & (1 << bit) == 0 && item_at.get(item) == Some(&tile) {
                next.push((
                    (tile, mask | (1 << bit)),
                    PlanStep::Pickup { item: item.to_string(), tile: tile.to_string() },
                ));
            }
        }
        for to in adjacent.get(tile).into_iter().flatten() {
            if passable.contains(to) {
                next.push(((to, mask), PlanStep::Move { from: tile.to_string(), to: to.to_string() }));
            }
        }
        for (node, step) in next {
            if seen.insert(node) {
                prev.insert(node, ((tile, mask), step));
                queue.push_back(node);
            }
        }
    }
    let mut node = goal?;
    let mut plan = Vec::new();
    while let Some((parent, step)) = prev.remove(&node) {
        plan.push(step);
        node = parent;
    }
    plan.reverse();
    Some(plan)
}

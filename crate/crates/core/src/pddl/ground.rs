use super::sexpr::{parse_all, Sexpr};
use super::{item_name, parse_item_name, parse_tile_name, PlanStep};
use crate::engine::{Action, ObservedState};
use crate::geom::{Direction, Position};
use crate::world::Terrain;

/// Why a plan step could not be mapped to an engine action. `step` is
/// 1-based; 0 means the plan text itself did not parse.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("plan step {step} `{text}`: {reason}")]
pub struct GroundError {
    pub step: usize,
    pub text: String,
    pub reason: String,
}

fn step_of(expr: &Sexpr) -> Result<PlanStep, String> {
    let list = expr.as_list().ok_or("expected a parenthesised step")?;
    let atoms: Vec<&str> = list.iter().map(|e| e.as_atom().ok_or("nested list in step")).collect::<Result<_, _>>()?;
    let owned = |s: &str| s.to_string();
    match atoms.as_slice() {
        ["move", from, to] => Ok(PlanStep::Move { from: owned(from), to: owned(to) }),
        ["pickup", item, tile] => Ok(PlanStep::Pickup { item: owned(item), tile: owned(tile) }),
        ["descend", tile] => Ok(PlanStep::Descend { tile: owned(tile) }),
        ["ascend", tile] => Ok(PlanStep::Ascend { tile: owned(tile) }),
        [name, ..] if ["move", "pickup", "descend", "ascend"].contains(name) => {
            Err(format!("wrong number of arguments for `{name}`"))
        }
        [name, ..] => Err(format!("`{name}` is not a domain action")),
        [] => Err("empty step".into()),
    }
}

/// Parses a plan of one s-expression per step and grounds it.
pub fn ground_plan(plan_text: &str, obs: &ObservedState) -> Result<Vec<Action>, GroundError> {
    let exprs = parse_all(plan_text).map_err(|reason| GroundError { step: 0, text: plan_text.trim().into(), reason })?;
    let mut steps = Vec::with_capacity(exprs.len());
    for (i, expr) in exprs.iter().enumerate() {
        let step = step_of(expr).map_err(|reason| GroundError { step: i + 1, text: expr.to_string(), reason })?;
        steps.push(step);
    }
    ground_steps(&steps, obs)
}

/// Maps each step to one primitive, tracking the player's position so that
/// every move starts where the previous one ended.
pub fn ground_steps(steps: &[PlanStep], obs: &ObservedState) -> Result<Vec<Action>, GroundError> {
    let mut here = obs.player.position;
    let mut actions = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let fail = |reason: String| GroundError { step: i + 1, text: step.to_string(), reason };
        let tile = |name: &str| -> Result<Position, GroundError> {
            let (level, p) = parse_tile_name(name).ok_or_else(|| fail(format!("unknown tile `{name}`")))?;
            if level != obs.level || !obs.remembered.contains(p) {
                return Err(fail(format!("tile `{name}` is not on the observed map")));
            }
            Ok(p)
        };
        let at_here = |p: Position| {
            if p == here {
                Ok(())
            } else {
                Err(fail(format!("player is at ({}, {}), not ({}, {})", here.row, here.col, p.row, p.col)))
            }
        };
        let action = match step {
            PlanStep::Move { from, to } => {
                let (from, to) = (tile(from)?, tile(to)?);
                at_here(from)?;
                let dir = (from.manhattan(to) == 1)
                    .then(|| from.direction_to(to))
                    .flatten()
                    .filter(|d: &Direction| d.is_cardinal())
                    .ok_or_else(|| fail("tiles are not adjacent".into()))?;
                here = to;
                Action::Move { dir }
            }
            PlanStep::Pickup { item, tile: t } => {
                at_here(tile(t)?)?;
                let id = parse_item_name(item).ok_or_else(|| fail(format!("unknown item `{item}`")))?;
                let known = obs.remembered.iter().flat_map(|(_, m)| m.items.iter()).any(|v| v.id == id)
                    || obs.inventory.iter().any(|e| e.item == id)
                    || obs.player.runes.contains(&id);
                if !known {
                    return Err(fail(format!("item `{}` was never observed", item_name(id))));
                }
                Action::Pickup
            }
            PlanStep::Descend { tile: t } | PlanStep::Ascend { tile: t } => {
                let p = tile(t)?;
                at_here(p)?;
                let (want, action) = match step {
                    PlanStep::Descend { .. } => (Terrain::StairsDown, Action::Descend),
                    _ => (Terrain::StairsUp, Action::Ascend),
                };
                if obs.remembered.get(p).map(|m| m.terrain) != Some(want) {
                    return Err(fail("no such staircase there".into()));
                }
                action
            }
        };
        actions.push(action);
    }
    Ok(actions)
}

use serde::{Deserialize, Serialize};

use super::rules::{self, hit_chance};
use super::EngineError;
use crate::rng::RngStream;
use crate::world::{Brand, ItemSpec, Monster, WeaponClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackProfile {
    pub accuracy: i32,
    pub base_damage: i32,
    pub strength_bonus: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefenseProfile {
    pub evasion: i32,
    pub hp: i32,
    /// Flat reduction applied to a hit, never below 1 damage.
    pub damage_reduction: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeleeOutcome {
    pub hit: bool,
    pub damage: i32,
    pub defender_killed: bool,
}

/// Rolls one attack. Draws one uniform for the hit test and, on a hit, one
/// damage roll uniform in `[1, base_damage + strength_bonus]`.
pub fn resolve_melee(attacker: AttackProfile, defender: DefenseProfile, rng: &mut RngStream) -> MeleeOutcome {
    let p = hit_chance(attacker.accuracy, defender.evasion);
    if !rng.chance(p) {
        return MeleeOutcome { hit: false, damage: 0, defender_killed: false };
    }
    let max = (attacker.base_damage + attacker.strength_bonus).max(1);
    let rolled = rng.range_inclusive(1, max as i64) as i32;
    let damage = (rolled - defender.damage_reduction).max(1);
    MeleeOutcome { hit: true, damage, defender_killed: damage >= defender.hp }
}

/// Whether a hit from `weapon` makes a hydra grow heads.
pub fn cuts_hydra_heads(weapon: Option<&ItemSpec>) -> bool {
    weapon.is_some_and(|w| w.weapon_class == Some(WeaponClass::Bladed) && w.brand != Some(Brand::Fire))
}

/// Applies head regrowth after a hydra survives a hit. Bladed weapons without
/// a fire brand add a head; blunt, fire-branded and unarmed hits do not.
pub fn apply_hydra_rule(mut monster: Monster, weapon: Option<&ItemSpec>) -> Result<Monster, EngineError> {
    let Some(heads) = monster.heads else {
        return Err(EngineError::Contract(format!("{} is not a hydra", monster.spec.id)));
    };
    if cuts_hydra_heads(weapon) {
        monster.heads = Some(heads + rules::HYDRA_HEADS_PER_CUT);
    }
    Ok(monster)
}

/// Melee profile of a monster; hydras hit harder with every head.
pub fn monster_attack(monster: &Monster) -> AttackProfile {
    AttackProfile {
        accuracy: monster.spec.accuracy,
        base_damage: monster.spec.base_damage + monster.heads.unwrap_or(0) as i32,
        strength_bonus: 0,
    }
}

pub fn monster_defense(monster: &Monster) -> DefenseProfile {
    DefenseProfile { evasion: monster.spec.evasion, hp: monster.hp, damage_reduction: 0 }
}

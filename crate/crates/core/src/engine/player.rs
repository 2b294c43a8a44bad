use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::{self, skill_cost, SKILL_MAX};
use super::EngineError;
use crate::geom::Position;
use crate::world::{Item, ItemId, ItemSpec, LevelId, WeaponClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Skill {
    Fighting,
    ShortBlades,
    LongBlades,
    Maces,
    Dodging,
    Armour,
    Stealth,
    Evocations,
}

impl Skill {
    pub const ALL: [Skill; 8] = [
        Skill::Fighting,
        Skill::ShortBlades,
        Skill::LongBlades,
        Skill::Maces,
        Skill::Dodging,
        Skill::Armour,
        Skill::Stealth,
        Skill::Evocations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Skill::Fighting => "fighting",
            Skill::ShortBlades => "short_blades",
            Skill::LongBlades => "long_blades",
            Skill::Maces => "maces",
            Skill::Dodging => "dodging",
            Skill::Armour => "armour",
            Skill::Stealth => "stealth",
            Skill::Evocations => "evocations",
        }
    }

    /// Weapon skill trained by a weapon: light blades are short blades.
    pub fn for_weapon(spec: &ItemSpec) -> Option<Skill> {
        match spec.weapon_class? {
            WeaponClass::Blunt => Some(Skill::Maces),
            WeaponClass::Bladed if spec.base_damage.unwrap_or(0) <= 4 => Some(Skill::ShortBlades),
            WeaponClass::Bladed => Some(Skill::LongBlades),
        }
    }
}

impl fmt::Display for Skill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attributes {
    pub strength: i32,
    pub intellect: i32,
    pub dexterity: i32,
}

/// Action cost as a rational number of auts: `auts` per `actions` actions.
/// Costs are spread so that any `actions` consecutive actions cost exactly `auts`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpeed {
    pub auts: u32,
    pub actions: u32,
}

impl ActionSpeed {
    pub const fn per_action(auts: u32) -> Self {
        ActionSpeed { auts, actions: 1 }
    }

    /// Cost of the action with zero-based index `n`.
    pub fn cost_of(self, n: u64) -> u64 {
        let total = |k: u64| k * self.auts as u64 / self.actions as u64;
        total(n + 1) - total(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerCharacter {
    pub hp: i32,
    pub max_hp: i32,
    pub attributes: Attributes,
    pub skills: BTreeMap<Skill, u8>,
    pub xp_pool: u32,
    /// Total xp ever gained; spending never lowers it.
    pub xp_earned: u32,
    pub inventory: Vec<Option<Item>>,
    pub wielded: Option<usize>,
    pub runes_held: BTreeSet<ItemId>,
    pub has_orb: bool,
    pub speed: ActionSpeed,
    pub actions_taken: u64,
    pub level: LevelId,
    pub position: Position,
    pub alive: bool,
}

impl PlayerCharacter {
    pub fn new(level: LevelId, position: Position) -> Self {
        PlayerCharacter {
            hp: rules::PLAYER_HP,
            max_hp: rules::PLAYER_HP,
            attributes: Attributes {
                strength: rules::PLAYER_STRENGTH,
                intellect: rules::PLAYER_INTELLECT,
                dexterity: rules::PLAYER_DEXTERITY,
            },
            skills: Skill::ALL.into_iter().map(|s| (s, 0)).collect(),
            xp_pool: 0,
            xp_earned: 0,
            inventory: vec![None; rules::INVENTORY_SLOTS],
            wielded: None,
            runes_held: BTreeSet::new(),
            has_orb: false,
            speed: ActionSpeed::per_action(rules::PLAYER_SPEED_AUT),
            actions_taken: 0,
            level,
            position,
            alive: true,
        }
    }

    pub fn skill(&self, skill: Skill) -> u8 {
        self.skills.get(&skill).copied().unwrap_or(0)
    }

    pub fn item(&self, slot: usize) -> Option<&Item> {
        self.inventory.get(slot).and_then(|s| s.as_ref())
    }

    pub fn wielded_item(&self) -> Option<&Item> {
        self.wielded.and_then(|s| self.item(s))
    }

    pub fn free_slot(&self) -> Option<usize> {
        self.inventory.iter().position(|s| s.is_none())
    }

    /// Stores `item` in the lowest free slot, returning the slot.
    pub fn add_item(&mut self, item: Item) -> Option<usize> {
        let slot = self.free_slot()?;
        self.inventory[slot] = Some(item);
        Some(slot)
    }

    pub fn remove_item(&mut self, slot: usize) -> Option<Item> {
        let item = self.inventory.get_mut(slot)?.take();
        if self.wielded == Some(slot) {
            self.wielded = None;
        }
        item
    }

    pub fn items(&self) -> impl Iterator<Item = (usize, &Item)> + '_ {
        self.inventory.iter().enumerate().filter_map(|(i, s)| s.as_ref().map(|it| (i, it)))
    }

    pub fn accuracy(&self) -> i32 {
        let weapon_skill = self
            .wielded_item()
            .and_then(|i| Skill::for_weapon(&i.spec))
            .map_or(0, |s| self.skill(s) as i32);
        rules::PLAYER_BASE_ACCURACY
            + self.skill(Skill::Fighting) as i32
            + weapon_skill
            + rules::attribute_modifier(self.attributes.dexterity)
    }

    pub fn evasion(&self) -> i32 {
        rules::PLAYER_BASE_EVASION
            + self.skill(Skill::Dodging) as i32
            + rules::attribute_modifier(self.attributes.dexterity)
    }

    pub fn base_damage(&self) -> i32 {
        self.wielded_item()
            .and_then(|i| i.spec.base_damage)
            .unwrap_or(rules::UNARMED_DAMAGE)
    }

    pub fn strength_bonus(&self) -> i32 {
        rules::attribute_modifier(self.attributes.strength)
    }

    /// Damage absorbed from each incoming hit.
    pub fn damage_reduction(&self) -> i32 {
        self.skill(Skill::Armour) as i32 / 3
    }

    pub fn next_action_cost(&self) -> u64 {
        self.speed.cost_of(self.actions_taken)
    }
}

/// Raises `skill` by one, paying `skill_cost(current)` from the xp pool.
pub fn spend_experience(player: &mut PlayerCharacter, skill: Skill) -> Result<u8, EngineError> {
    let current = player.skill(skill);
    if current >= SKILL_MAX {
        return Err(EngineError::SkillCapped(skill));
    }
    let cost = skill_cost(current);
    if player.xp_pool < cost {
        return Err(EngineError::NotEnoughXp { skill, needed: cost, available: player.xp_pool });
    }
    player.xp_pool -= cost;
    player.skills.insert(skill, current + 1);
    Ok(current + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn player() -> PlayerCharacter {
        PlayerCharacter::new(LevelId(0), Position::new(1, 1))
    }

    #[test]
    fn base_cost_consumes_pool() {
        let mut p = player();
        p.xp_pool = 10;
        assert_eq!(spend_experience(&mut p, Skill::Fighting), Ok(1));
        assert_eq!(p.xp_pool, 0);
    }

    #[test]
    fn cap_is_enforced() {
        let mut p = player();
        p.xp_pool = 1_000_000;
        p.skills.insert(Skill::Maces, 27);
        assert_eq!(spend_experience(&mut p, Skill::Maces), Err(EngineError::SkillCapped(Skill::Maces)));
        assert_eq!(p.xp_pool, 1_000_000);
    }

    #[test]
    fn insufficient_xp() {
        let mut p = player();
        p.xp_pool = 9;
        assert!(matches!(spend_experience(&mut p, Skill::Dodging), Err(EngineError::NotEnoughXp { needed: 10, .. })));
        assert_eq!(p.skill(Skill::Dodging), 0);
    }

    #[test]
    fn raising_to_three_costs_sixty() {
        let mut p = player();
        p.xp_pool = 60;
        for _ in 0..3 {
            spend_experience(&mut p, Skill::Fighting).unwrap();
        }
        assert_eq!((p.skill(Skill::Fighting), p.xp_pool), (3, 0));
    }

    #[test]
    fn fractional_speed_spreads_cost() {
        let fast = ActionSpeed { auts: 15, actions: 2 };
        assert_eq!(fast.cost_of(0) + fast.cost_of(1), 15);
        assert_eq!((0..10).map(|n| fast.cost_of(n)).sum::<u64>(), 75);
        let normal = ActionSpeed::per_action(10);
        assert!((0..5).all(|n| normal.cost_of(n) == 10));
    }
}

//! Tunable constants for combat, items, time and progression.

/// Auts per game turn.
pub const AUT_PER_TURN: u64 = 10;

// Hit chance constants in whole percent so clamping is exact.
pub const HIT_BASE_PCT: i32 = 50;
pub const HIT_PER_POINT_PCT: i32 = 3;
pub const HIT_MIN_PCT: i32 = 5;
pub const HIT_MAX_PCT: i32 = 95;
pub const HIT_MIN: f64 = HIT_MIN_PCT as f64 / 100.0;
pub const HIT_MAX: f64 = HIT_MAX_PCT as f64 / 100.0;

pub const SKILL_MAX: u8 = 27;
pub const CURING_HP: i32 = 15;
pub const INVENTORY_SLOTS: usize = 52;
pub const RUNES_FOR_ZOT: usize = 3;

pub const UNARMED_DAMAGE: i32 = 2;
/// Extra damage dealt by a fire-branded hit.
pub const FIRE_BONUS_DAMAGE: i32 = 2;
pub const VENOM_TURNS: u32 = 5;
pub const VENOM_DAMAGE_PER_TURN: i32 = 1;
pub const FROST_TURNS: u32 = 3;
pub const FROST_EXTRA_AUT: u32 = 2;
pub const HYDRA_HEADS_PER_CUT: u32 = 1;
pub const THROW_RANGE: u32 = 4;

/// Fraction of eligible unseen tiles flipped per turn on shifting levels.
pub const SHIFT_FRACTION: f64 = 0.05;

pub const PLAYER_HP: i32 = 30;
pub const PLAYER_STRENGTH: i32 = 10;
pub const PLAYER_INTELLECT: i32 = 8;
pub const PLAYER_DEXTERITY: i32 = 10;
pub const PLAYER_SPEED_AUT: u32 = 10;
pub const PLAYER_BASE_ACCURACY: i32 = 4;
pub const PLAYER_BASE_EVASION: i32 = 3;

/// XP needed to raise a skill from `level` to `level + 1`.
pub const fn skill_cost(level: u8) -> u32 {
    10 * (level as u32 + 1)
}

/// Hit probability for the given accuracy and evasion.
pub fn hit_chance(accuracy: i32, evasion: i32) -> f64 {
    let pct = (HIT_BASE_PCT as i64 + HIT_PER_POINT_PCT as i64 * (accuracy as i64 - evasion as i64))
        .clamp(HIT_MIN_PCT as i64, HIT_MAX_PCT as i64);
    pct as f64 / 100.0
}

/// Integer attribute bonus: +1 per two points above 10, symmetric below.
pub fn attribute_modifier(value: i32) -> i32 {
    (value - 10).div_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_chance_symmetry_and_clamps() {
        assert_eq!(hit_chance(7, 7), 0.5);
        assert_eq!(hit_chance(0, 15), HIT_MIN);
        assert_eq!(hit_chance(0, 40), HIT_MIN);
        assert_eq!(hit_chance(15, 0), HIT_MAX);
        assert_eq!(hit_chance(30, 0), HIT_MAX);
        assert!((hit_chance(5, 0) - 0.65).abs() < 1e-12);
    }

    #[test]
    fn skill_costs() {
        assert_eq!(skill_cost(0), 10);
        assert_eq!((0..3).map(skill_cost).sum::<u32>(), 60);
    }

    #[test]
    fn modifiers() {
        assert_eq!(attribute_modifier(10), 0);
        assert_eq!(attribute_modifier(13), 1);
        assert_eq!(attribute_modifier(14), 2);
        assert_eq!(attribute_modifier(9), -1);
    }
}

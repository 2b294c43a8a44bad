use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terrain {
    Floor,
    Wall,
    ShallowWater,
    DeepWater,
    Lava,
    StairsUp,
    StairsDown,
}

impl Terrain {
    pub const ALL: [Terrain; 7] = [
        Terrain::Floor,
        Terrain::Wall,
        Terrain::ShallowWater,
        Terrain::DeepWater,
        Terrain::Lava,
        Terrain::StairsUp,
        Terrain::StairsDown,
    ];

    /// Whether an actor may stand here. Deep water and lava are never entered.
    pub fn is_passable(self) -> bool {
        matches!(
            self,
            Terrain::Floor | Terrain::ShallowWater | Terrain::StairsUp | Terrain::StairsDown
        )
    }

    /// Only walls block line of sight.
    pub fn is_opaque(self) -> bool {
        self == Terrain::Wall
    }

    pub fn is_stairs(self) -> bool {
        matches!(self, Terrain::StairsUp | Terrain::StairsDown)
    }

    pub fn glyph(self) -> char {
        match self {
            Terrain::Floor => '.',
            Terrain::Wall => '#',
            Terrain::ShallowWater => '~',
            Terrain::DeepWater => 'W',
            Terrain::Lava => 'L',
            Terrain::StairsUp => '<',
            Terrain::StairsDown => '>',
        }
    }

    pub fn from_glyph(c: char) -> Option<Terrain> {
        Terrain::ALL.into_iter().find(|t| t.glyph() == c)
    }

    pub fn description(self) -> &'static str {
        match self {
            Terrain::Floor => "a stone floor",
            Terrain::Wall => "a rough stone wall",
            Terrain::ShallowWater => "some shallow water",
            Terrain::DeepWater => "deep water; entering it would be fatal",
            Terrain::Lava => "molten lava; entering it would be fatal",
            Terrain::StairsUp => "a stone staircase leading up",
            Terrain::StairsDown => "a stone staircase leading down",
        }
    }
}

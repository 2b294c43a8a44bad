//! Grid coordinates and compass directions.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A grid cell, serialized as `[row, col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Position {
    pub row: u32,
    pub col: u32,
}

impl From<(u32, u32)> for Position {
    fn from((row, col): (u32, u32)) -> Self {
        Self { row, col }
    }
}

impl From<Position> for (u32, u32) {
    fn from(p: Position) -> Self {
        (p.row, p.col)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

impl Position {
    pub const fn new(row: u32, col: u32) -> Self {
        Self { row, col }
    }

    /// Offset by `(drow, dcol)`, or `None` if the result would be negative.
    pub fn offset(self, drow: i32, dcol: i32) -> Option<Position> {
        let row = self.row as i64 + drow as i64;
        let col = self.col as i64 + dcol as i64;
        if row < 0 || col < 0 || row > u32::MAX as i64 || col > u32::MAX as i64 {
            None
        } else {
            Some(Position::new(row as u32, col as u32))
        }
    }

    pub fn step(self, dir: Direction) -> Option<Position> {
        let (dr, dc) = dir.delta();
        self.offset(dr, dc)
    }

    pub fn chebyshev(self, other: Position) -> u32 {
        self.row.abs_diff(other.row).max(self.col.abs_diff(other.col))
    }

    pub fn manhattan(self, other: Position) -> u32 {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    /// Direction of a single 8-way step from `self` to `other`, if adjacent.
    pub fn direction_to(self, other: Position) -> Option<Direction> {
        let dr = other.row as i64 - self.row as i64;
        let dc = other.col as i64 - self.col as i64;
        Direction::ALL
            .into_iter()
            .find(|d| d.delta() == (dr as i32, dc as i32) && dr.abs() <= 1 && dc.abs() <= 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    N,
    Ne,
    E,
    Se,
    S,
    Sw,
    W,
    Nw,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::Ne,
        Direction::E,
        Direction::Se,
        Direction::S,
        Direction::Sw,
        Direction::W,
        Direction::Nw,
    ];

    pub const CARDINAL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];

    pub const fn delta(self) -> (i32, i32) {
        match self {
            Direction::N => (-1, 0),
            Direction::Ne => (-1, 1),
            Direction::E => (0, 1),
            Direction::Se => (1, 1),
            Direction::S => (1, 0),
            Direction::Sw => (1, -1),
            Direction::W => (0, -1),
            Direction::Nw => (-1, -1),
        }
    }

    pub const fn is_cardinal(self) -> bool {
        matches!(self, Direction::N | Direction::E | Direction::S | Direction::W)
    }

    pub const fn name(self) -> &'static str {
        match self {
            Direction::N => "n",
            Direction::Ne => "ne",
            Direction::E => "e",
            Direction::Se => "se",
            Direction::S => "s",
            Direction::Sw => "sw",
            Direction::W => "w",
            Direction::Nw => "nw",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

//! Symmetric shadowcasting limited to a Chebyshev radius.
//!
//! Each of the four quadrants is scanned row by row outward from the origin,
//! tracking the visible slope interval with exact rational arithmetic. Walls
//! are lit whenever any part of their row segment falls inside the interval;
//! floor tiles only when their centre does, which makes floor visibility
//! symmetric between any two floor tiles.

use std::cmp::Ordering;

use crate::geom::Position;
use crate::world::LevelMap;

pub const FOV_RADIUS: u32 = 7;

#[derive(Debug, Clone, Copy)]
struct Slope {
    num: i64,
    den: i64,
}

impl Slope {
    const fn new(num: i64, den: i64) -> Self {
        Slope { num, den }
    }

    fn cmp_value(self, other: Slope) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// `floor(depth * slope + 1/2)`: the column where a row's tiles start.
fn round_ties_up(depth: i64, s: Slope) -> i64 {
    (2 * depth * s.num + s.den).div_euclid(2 * s.den)
}

/// `ceil(depth * slope - 1/2)`: the column where a row's tiles end.
fn round_ties_down(depth: i64, s: Slope) -> i64 {
    -((-(2 * depth * s.num - s.den)).div_euclid(2 * s.den))
}

#[derive(Debug, Clone, Copy)]
enum Quadrant {
    North,
    East,
    South,
    West,
}

impl Quadrant {
    const ALL: [Quadrant; 4] = [Quadrant::North, Quadrant::East, Quadrant::South, Quadrant::West];

    fn transform(self, origin: Position, depth: i64, col: i64) -> (i64, i64) {
        let (r, c) = (origin.row as i64, origin.col as i64);
        match self {
            Quadrant::North => (r - depth, c + col),
            Quadrant::South => (r + depth, c + col),
            Quadrant::East => (r + col, c + depth),
            Quadrant::West => (r + col, c - depth),
        }
    }
}

/// Visible tiles of one level as a bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldOfView {
    pub origin: Position,
    pub radius: u32,
    rows: u32,
    cols: u32,
    mask: Vec<bool>,
}

impl FieldOfView {
    fn empty(origin: Position, radius: u32, rows: u32, cols: u32) -> Self {
        FieldOfView { origin, radius, rows, cols, mask: vec![false; rows as usize * cols as usize] }
    }

    fn mark(&mut self, row: i64, col: i64) {
        if row >= 0 && col >= 0 && (row as u32) < self.rows && (col as u32) < self.cols {
            self.mask[row as usize * self.cols as usize + col as usize] = true;
        }
    }

    pub fn contains(&self, p: Position) -> bool {
        p.row < self.rows && p.col < self.cols && self.mask[p.row as usize * self.cols as usize + p.col as usize]
    }

    /// Visible positions in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Position> + '_ {
        let cols = self.cols as usize;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .map(move |(i, _)| Position::new((i / cols) as u32, (i % cols) as u32))
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|v| **v).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Computes the tiles visible from `origin` within Chebyshev `radius`.
pub fn compute_fov(level: &LevelMap, origin: Position, radius: u32) -> FieldOfView {
    compute_fov_with(level.rows, level.cols, origin, radius, |p| level.is_opaque(p))
}

/// Shadowcasting over any grid; cells outside `rows x cols` are opaque.
pub fn compute_fov_with(
    rows: u32,
    cols: u32,
    origin: Position,
    radius: u32,
    is_opaque: impl Fn(Position) -> bool,
) -> FieldOfView {
    let mut fov = FieldOfView::empty(origin, radius, rows, cols);
    fov.mark(origin.row as i64, origin.col as i64);
    let opaque = |(r, c): (i64, i64)| {
        r < 0 || c < 0 || r >= rows as i64 || c >= cols as i64 || is_opaque(Position::new(r as u32, c as u32))
    };
    for quadrant in Quadrant::ALL {
        let mut rows_todo = vec![(1i64, Slope::new(-1, 1), Slope::new(1, 1))];
        while let Some((depth, mut start, end)) = rows_todo.pop() {
            if depth > radius as i64 {
                continue;
            }
            let min_col = round_ties_up(depth, start);
            let max_col = round_ties_down(depth, end);
            let mut prev_opaque: Option<bool> = None;
            for col in min_col..=max_col {
                let cell = quadrant.transform(origin, depth, col);
                let wall = opaque(cell);
                let centre_inside = Slope::new(col, 1).cmp_value(Slope::new(depth * start.num, start.den)) != Ordering::Less
                    && Slope::new(col, 1).cmp_value(Slope::new(depth * end.num, end.den)) != Ordering::Greater;
                if wall || centre_inside {
                    fov.mark(cell.0, cell.1);
                }
                if prev_opaque == Some(true) && !wall {
                    start = Slope::new(2 * col - 1, 2 * depth);
                }
                if prev_opaque == Some(false) && wall {
                    rows_todo.push((depth + 1, start, Slope::new(2 * col - 1, 2 * depth)));
                }
                prev_opaque = Some(wall);
            }
            if prev_opaque == Some(false) {
                rows_todo.push((depth + 1, start, end));
            }
        }
    }
    fov
}

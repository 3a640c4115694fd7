//! The geometric substrate: sparse infinite grid, polyomino validation and
//! the pure predicates used everywhere else.
//!
//! Convention: x grows right, y grows up. The "a-row" is the set of pixels
//! with y = a.

use std::collections::{BTreeSet, HashSet, VecDeque};
use thiserror::Error;

/// A node of the infinite grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

pub const fn coord(x: i64, y: i64) -> Coord {
    Coord { x, y }
}

impl Coord {
    pub fn offset(self, dx: i64, dy: i64) -> Coord {
        coord(self.x + dx, self.y + dy)
    }

    pub fn step(self, d: Dir) -> Coord {
        let (dx, dy) = d.delta();
        self.offset(dx, dy)
    }

    /// The four edge neighbors.
    pub fn orthogonal(self) -> [Coord; 4] {
        [
            self.offset(0, 1),
            self.offset(1, 0),
            self.offset(0, -1),
            self.offset(-1, 0),
        ]
    }

    /// The four diagonal neighbors.
    pub fn diagonal(self) -> [Coord; 4] {
        [
            self.offset(1, 1),
            self.offset(1, -1),
            self.offset(-1, -1),
            self.offset(-1, 1),
        ]
    }
}

/// Axis direction on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Up,
    Right,
    Down,
    Left,
}

pub const DIRS: [Dir; 4] = [Dir::Up, Dir::Right, Dir::Down, Dir::Left];

impl Dir {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::Up => (0, 1),
            Dir::Right => (1, 0),
            Dir::Down => (0, -1),
            Dir::Left => (-1, 0),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Right => Dir::Left,
            Dir::Down => Dir::Up,
            Dir::Left => Dir::Right,
        }
    }

    /// Clockwise (right-hand) turn.
    pub fn turn_right(self) -> Dir {
        match self {
            Dir::Up => Dir::Right,
            Dir::Right => Dir::Down,
            Dir::Down => Dir::Left,
            Dir::Left => Dir::Up,
        }
    }

    pub fn turn_left(self) -> Dir {
        self.turn_right().opposite()
    }
}

/// State of one pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PixelState {
    Empty,
    Tile,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("empty tile set")]
    EmptySet,
    #[error("tile set is not 4-connected (witness {0:?} and {1:?})")]
    Disconnected(Coord, Coord),
    #[error("illegal diagonal pair {0:?}, {1:?}")]
    IllegalDiagonalPair(Coord, Coord),
}

/// A validated polyomino: nonempty, 4-connected, every diagonal pair has a
/// common adjacent tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyomino {
    tiles: BTreeSet<Coord>,
}

impl Polyomino {
    /// Validate a coordinate set per the grid model's legality rules.
    pub fn new<I: IntoIterator<Item = Coord>>(tiles: I) -> Result<Polyomino, ShapeError> {
        let tiles: BTreeSet<Coord> = tiles.into_iter().collect();
        if tiles.is_empty() {
            return Err(ShapeError::EmptySet);
        }
        // Diagonal pair legality first: a bare diagonal pair is reported as
        // such, not as a disconnection.
        for &c in &tiles {
            for d in c.diagonal() {
                if tiles.contains(&d) {
                    let common1 = coord(c.x, d.y);
                    let common2 = coord(d.x, c.y);
                    if !tiles.contains(&common1) && !tiles.contains(&common2) {
                        return Err(ShapeError::IllegalDiagonalPair(c, d));
                    }
                }
            }
        }
        // Connectivity by flood fill from an arbitrary tile.
        let start = *tiles.iter().next().unwrap();
        let mut seen = HashSet::with_capacity(tiles.len());
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for n in c.orthogonal() {
                if tiles.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        if seen.len() != tiles.len() {
            let missing = *tiles.iter().find(|c| !seen.contains(c)).unwrap();
            return Err(ShapeError::Disconnected(start, missing));
        }
        Ok(Polyomino { tiles })
    }

    pub fn tiles(&self) -> &BTreeSet<Coord> {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.tiles.contains(&c)
    }

    /// Componentwise min/max corner of the tile set.
    pub fn bounding_rect(&self) -> (Coord, Coord) {
        bounding_rect_of(self.tiles.iter().copied()).unwrap()
    }

    pub fn width(&self) -> i64 {
        let (min, max) = self.bounding_rect();
        max.x - min.x + 1
    }

    pub fn height(&self) -> i64 {
        let (min, max) = self.bounding_rect();
        max.y - min.y + 1
    }

    /// Translate so the min corner is at the origin.
    pub fn normalize(&self) -> Polyomino {
        let (min, _) = self.bounding_rect();
        self.translate(-min.x, -min.y)
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Polyomino {
        Polyomino {
            tiles: self.tiles.iter().map(|c| c.offset(dx, dy)).collect(),
        }
    }

    /// Tiles adjacent (edge or diagonal) to an empty pixel.
    pub fn boundary(&self) -> BTreeSet<Coord> {
        self.tiles
            .iter()
            .copied()
            .filter(|&c| {
                c.orthogonal()
                    .into_iter()
                    .chain(c.diagonal())
                    .any(|n| !self.tiles.contains(&n))
            })
            .collect()
    }

    /// True iff the shape has no holes: every empty pixel of the bounding
    /// rectangle is reachable from outside it.
    pub fn is_simple(&self) -> bool {
        let (min, max) = self.bounding_rect();
        // Flood the empty pixels of the rectangle expanded by one, starting
        // from a corner guaranteed outside the shape.
        let lo = min.offset(-1, -1);
        let hi = max.offset(1, 1);
        let start = lo;
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for n in c.orthogonal() {
                if n.x < lo.x || n.x > hi.x || n.y < lo.y || n.y > hi.y {
                    continue;
                }
                if !self.tiles.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        for x in min.x..=max.x {
            for y in min.y..=max.y {
                let c = coord(x, y);
                if !self.tiles.contains(&c) && !seen.contains(&c) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every column intersection is one contiguous interval.
    pub fn is_x_monotone(&self) -> bool {
        let (min, max) = self.bounding_rect();
        for x in min.x..=max.x {
            if !contiguous((min.y..=max.y).map(|y| self.tiles.contains(&coord(x, y)))) {
                return false;
            }
        }
        true
    }

    /// True iff every row intersection is one contiguous interval.
    pub fn is_y_monotone(&self) -> bool {
        let (min, max) = self.bounding_rect();
        for y in min.y..=max.y {
            if !contiguous((min.x..=max.x).map(|x| self.tiles.contains(&coord(x, y)))) {
                return false;
            }
        }
        true
    }
}

fn contiguous<I: Iterator<Item = bool>>(iter: I) -> bool {
    let mut runs = 0;
    let mut prev = false;
    for occ in iter {
        if occ && !prev {
            runs += 1;
        }
        prev = occ;
    }
    runs <= 1
}

pub fn bounding_rect_of<I: IntoIterator<Item = Coord>>(cells: I) -> Option<(Coord, Coord)> {
    let mut iter = cells.into_iter();
    let first = iter.next()?;
    let (mut min, mut max) = (first, first);
    for c in iter {
        min.x = min.x.min(c.x);
        min.y = min.y.min(c.y);
        max.x = max.x.max(c.x);
        max.y = max.y.max(c.y);
    }
    Some((min, max))
}

/// The world: sparse occupancy, the robot's position and nothing else.
/// Controller state lives in the VM run loop.
#[derive(Debug, Clone)]
pub struct GridWorld {
    occupied: HashSet<Coord>,
    pub robot: Coord,
}

impl GridWorld {
    pub fn new() -> GridWorld {
        GridWorld {
            occupied: HashSet::new(),
            robot: coord(0, 0),
        }
    }

    /// World containing exactly `p`, robot placed on the given tile.
    pub fn with_polyomino(p: &Polyomino, robot: Coord) -> GridWorld {
        debug_assert!(p.contains(robot), "robot must start on a tile of P");
        GridWorld {
            occupied: p.tiles().iter().copied().collect(),
            robot,
        }
    }

    pub fn is_tile(&self, c: Coord) -> bool {
        self.occupied.contains(&c)
    }

    pub fn pixel(&self, c: Coord) -> PixelState {
        if self.is_tile(c) {
            PixelState::Tile
        } else {
            PixelState::Empty
        }
    }

    pub fn set_pixel(&mut self, c: Coord, s: PixelState) {
        match s {
            PixelState::Tile => {
                self.occupied.insert(c);
            }
            PixelState::Empty => {
                self.occupied.remove(&c);
            }
        }
    }

    pub fn tile_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn occupied(&self) -> impl Iterator<Item = Coord> + '_ {
        self.occupied.iter().copied()
    }

    pub fn occupied_sorted(&self) -> BTreeSet<Coord> {
        self.occupied.iter().copied().collect()
    }
}

impl Default for GridWorld {
    fn default() -> Self {
        Self::new()
    }
}

//! Independent brute-force reference implementations backing every
//! acceptance test. Everything here works on plain coordinate sets and never
//! touches `GridWorld` or any controller.

use crate::grid::{coord, Coord, Polyomino};
use std::collections::BTreeSet;

/// Tile count plus convex/reflex corner counts by direct enumeration of the
/// 2x2 vertex neighborhoods of the tile union. A vertex incident to exactly
/// one tile is convex, to exactly three tiles is reflex; two diagonal tiles
/// cannot occur in a legal polyomino.
pub fn counts(p: &Polyomino) -> (usize, usize, usize) {
    let tiles = p.tiles();
    let mut vertices = BTreeSet::new();
    for &t in tiles {
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            vertices.insert(t.offset(dx, dy));
        }
    }
    let mut convex = 0;
    let mut reflex = 0;
    for v in vertices {
        let incident = [
            coord(v.x - 1, v.y - 1),
            coord(v.x, v.y - 1),
            coord(v.x - 1, v.y),
            coord(v.x, v.y),
        ];
        match incident.iter().filter(|c| tiles.contains(c)).count() {
            1 => convex += 1,
            3 => reflex += 1,
            _ => {}
        }
    }
    (tiles.len(), convex, reflex)
}

pub fn reflect_v(p: &Polyomino) -> Polyomino {
    map(p, |c| coord(c.x, -c.y))
}

pub fn reflect_h(p: &Polyomino) -> Polyomino {
    map(p, |c| coord(-c.x, c.y))
}

pub fn rotate_cw(p: &Polyomino) -> Polyomino {
    map(p, |c| coord(c.y, -c.x))
}

pub fn rotate_ccw(p: &Polyomino) -> Polyomino {
    map(p, |c| coord(-c.y, c.x))
}

pub fn scale(p: &Polyomino, c: u32) -> Polyomino {
    let c = c as i64;
    let cells = p.tiles().iter().flat_map(|t| {
        (0..c).flat_map(move |i| (0..c).map(move |j| coord(t.x * c + i, t.y * c + j)))
    });
    Polyomino::new(cells).expect("scaling preserves legality").normalize()
}

/// Expected occupancy after a copy: the original plus a translate.
pub fn copy_offset(p: &Polyomino, dx: i64, dy: i64) -> BTreeSet<Coord> {
    let mut cells = p.tiles().clone();
    cells.extend(p.tiles().iter().map(|c| c.offset(dx, dy)));
    cells
}

fn map<F: Fn(Coord) -> Coord>(p: &Polyomino, f: F) -> Polyomino {
    Polyomino::new(p.tiles().iter().map(|&c| f(c)))
        .expect("coordinate maps preserve legality")
        .normalize()
}

/// String encoding of a polyomino: height, width and the membership bitmap
/// of its bounding rectangle in rank order (decreasing y, then decreasing x).
/// Independent reference for the in-world encoder.
pub fn encoding(p: &Polyomino) -> (String, String, String) {
    let (min, max) = p.bounding_rect();
    let h = (max.y - min.y + 1) as u64;
    let w = (max.x - min.x + 1) as u64;
    // Explicit rank enumeration.
    let mut ranked: Vec<Coord> = Vec::new();
    for y in (min.y..=max.y).rev() {
        for x in (min.x..=max.x).rev() {
            ranked.push(coord(x, y));
        }
    }
    let s3: String = ranked
        .iter()
        .map(|c| if p.contains(*c) { '1' } else { '0' })
        .collect();
    (format!("{h:b}"), format!("{w:b}"), s3)
}

/// The canonical bounding-box ring for a polyomino, computed in closed form.
///
/// Geometry: let R2 be the bounding rectangle of P grown by two on every
/// side. The box occupies the boundary cells of R2 with a checkerboard
/// parity anchored at R2's bottom-left corner: even cells carry a tile in
/// place (the inner lane), odd cells are pushed one unit outward
/// perpendicular to their side (the outer lane), and odd corner cells are
/// pushed perpendicular to both of their sides, producing two tiles. Every
/// tile of the result touches its chain neighbors only diagonally, which is
/// the pattern that cannot occur inside a legal polyomino.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxRing {
    pub inner: BTreeSet<Coord>,
    pub outer: BTreeSet<Coord>,
}

impl BoxRing {
    pub fn tiles(&self) -> BTreeSet<Coord> {
        self.inner.union(&self.outer).copied().collect()
    }
}

pub fn bbox_ring(p: &Polyomino) -> BoxRing {
    let (min, max) = p.bounding_rect();
    bbox_ring_for_rect(min.offset(-2, -2), max.offset(2, 2))
}

/// Ring cells for the rectangle [lo, hi], materialized per the canonical
/// parity rule. `lo`/`hi` are the ring rectangle itself (already grown).
pub fn bbox_ring_for_rect(lo: Coord, hi: Coord) -> BoxRing {
    let mut inner = BTreeSet::new();
    let mut outer = BTreeSet::new();
    let parity = |c: Coord| ((c.x + c.y - lo.x - lo.y).rem_euclid(2)) == 0;
    let mut ring_cells = BTreeSet::new();
    for x in lo.x..=hi.x {
        ring_cells.insert(coord(x, lo.y));
        ring_cells.insert(coord(x, hi.y));
    }
    for y in lo.y..=hi.y {
        ring_cells.insert(coord(lo.x, y));
        ring_cells.insert(coord(hi.x, y));
    }
    for c in ring_cells {
        let mut normals = Vec::new();
        if c.x == lo.x {
            normals.push((-1, 0));
        }
        if c.x == hi.x {
            normals.push((1, 0));
        }
        if c.y == lo.y {
            normals.push((0, -1));
        }
        if c.y == hi.y {
            normals.push((0, 1));
        }
        if parity(c) {
            inner.insert(c);
        } else {
            for (dx, dy) in normals {
                outer.insert(c.offset(dx, dy));
            }
        }
    }
    BoxRing { inner, outer }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[(i64, i64)]) -> Polyomino {
        Polyomino::new(cells.iter().map(|&(x, y)| coord(x, y))).unwrap()
    }

    #[test]
    fn counts_on_known_shapes() {
        assert_eq!(counts(&poly(&[(0, 0)])), (1, 4, 0));
        assert_eq!(counts(&poly(&[(0, 0), (1, 0), (0, 1)])), (3, 5, 1));
        let sq: Vec<(i64, i64)> = (0..8).flat_map(|x| (0..8).map(move |y| (x, y))).collect();
        assert_eq!(counts(&poly(&sq)), (64, 4, 0));
    }

    #[test]
    fn euler_relation_on_simple_shapes() {
        for cells in [
            vec![(0, 0)],
            vec![(0, 0), (1, 0), (0, 1)],
            vec![(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)],
            vec![(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)],
        ] {
            let p = poly(&cells);
            assert!(p.is_simple());
            let (_, convex, reflex) = counts(&p);
            assert_eq!(convex as i64 - reflex as i64, 4, "shape {cells:?}");
        }
    }

    #[test]
    fn transforms_on_l_tromino() {
        let l = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(rotate_cw(&l), poly(&[(0, 0), (0, 1), (1, 1)]));
        assert_eq!(reflect_v(&l), poly(&[(0, 0), (0, 1), (1, 1)]));
        assert_eq!(scale(&poly(&[(0, 0)]), 2), poly(&[(0, 0), (0, 1), (1, 0), (1, 1)]));
        assert_eq!(reflect_v(&reflect_v(&l)), l.normalize());
        let cw4 = rotate_cw(&rotate_cw(&rotate_cw(&rotate_cw(&l))));
        assert_eq!(cw4, l.normalize());
    }

    #[test]
    fn encoding_of_known_shapes() {
        let single = poly(&[(0, 0)]);
        assert_eq!(encoding(&single), ("1".into(), "1".into(), "1".into()));
        let sq2: Vec<(i64, i64)> = vec![(0, 0), (1, 0), (0, 1), (1, 1)];
        assert_eq!(encoding(&poly(&sq2)), ("10".into(), "10".into(), "1111".into()));
    }

    #[test]
    fn ring_for_single_tile() {
        let ring = bbox_ring(&poly(&[(0, 0)]));
        let tiles = ring.tiles();
        assert_eq!(tiles.len(), 16);
        assert_eq!(ring.inner.len(), 8);
        assert_eq!(ring.outer.len(), 8);
        // Inner tiles sit on the boundary of [(-2,-2),(2,2)].
        for c in &ring.inner {
            assert!(c.x.abs() == 2 || c.y.abs() == 2);
            assert!(c.x.abs() <= 2 && c.y.abs() <= 2);
        }
        // Corners are inner (even parity).
        for c in [coord(-2, -2), coord(-2, 2), coord(2, -2), coord(2, 2)] {
            assert!(ring.inner.contains(&c));
        }
    }

    #[test]
    fn ring_is_corner_connected_only() {
        for cells in [
            vec![(0, 0)],
            vec![(0, 0), (1, 0), (0, 1)],
            (0..8).flat_map(|x| (0..8).map(move |y| (x, y))).collect::<Vec<_>>(),
            vec![(0, 0), (1, 0), (2, 0), (3, 0)],
            vec![(0, 0), (0, 1), (0, 2)],
        ] {
            let p = poly(&cells);
            let tiles = bbox_ring(&p).tiles();
            for &t in &tiles {
                // No orthogonal contact between box tiles, and each tile has
                // at least one diagonal chain neighbor.
                for n in t.orthogonal() {
                    assert!(!tiles.contains(&n), "orthogonal contact at {t:?} in {cells:?}");
                }
                assert!(
                    t.diagonal().iter().any(|d| tiles.contains(d)),
                    "isolated box tile {t:?} in {cells:?}"
                );
                // And no box tile is 4-adjacent to a tile of P.
                for n in t.orthogonal() {
                    assert!(!p.contains(n));
                }
            }
        }
    }

    #[test]
    fn ring_translation_equivariance() {
        let p = poly(&[(0, 0), (1, 0), (0, 1)]);
        let q = p.translate(13, -7);
        let rp = bbox_ring(&p).tiles();
        let rq = bbox_ring(&q).tiles();
        let shifted: BTreeSet<Coord> = rp.iter().map(|c| c.offset(13, -7)).collect();
        assert_eq!(shifted, rq);
    }

    #[test]
    fn ring_chain_is_connected() {
        // The diagonal-contact graph over the box tiles is one component.
        // Degree is 2 along the sides; the two inner tiles flanking a pushed
        // corner also see each other, giving degree 3 there.
        for cells in [
            vec![(0, 0)],
            (0..8).flat_map(|x| (0..8).map(move |y| (x, y))).collect::<Vec<_>>(),
            vec![(0, 0), (1, 0), (1, 1), (2, 1)],
        ] {
            let p = poly(&cells);
            let tiles = bbox_ring(&p).tiles();
            let start = *tiles.iter().next().unwrap();
            let mut seen = BTreeSet::new();
            seen.insert(start);
            let mut stack = vec![start];
            while let Some(c) = stack.pop() {
                for d in c.diagonal() {
                    if tiles.contains(&d) && seen.insert(d) {
                        stack.push(d);
                    }
                }
            }
            assert_eq!(seen.len(), tiles.len(), "chain disconnected for {cells:?}");
            for &t in &tiles {
                let deg = t.diagonal().iter().filter(|d| tiles.contains(d)).count();
                assert!((2..=3).contains(&deg), "tile {t:?} degree {deg} in {cells:?}");
            }
        }
    }
}

//! Shape corpora: exhaustive enumeration of small legal polyominoes and
//! seeded random generation, shared by the verification driver and tests.

use crate::grid::{coord, Coord, Polyomino};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet};

/// Every legal polyomino with up to `max_n` tiles, deduplicated up to
/// translation. Enumerates all fixed polyominoes by cell-addition and keeps
/// those that pass validation.
pub fn enumerate(max_n: usize) -> Vec<Polyomino> {
    let mut seen: HashSet<Vec<Coord>> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier: Vec<BTreeSet<Coord>> = vec![[coord(0, 0)].into_iter().collect()];
    let mut known: HashSet<Vec<Coord>> = HashSet::new();
    known.insert(canonical(frontier[0].iter().copied()));

    for n in 1..=max_n {
        let mut next: Vec<BTreeSet<Coord>> = Vec::new();
        for cells in &frontier {
            if let Ok(p) = Polyomino::new(cells.iter().copied()) {
                let key = canonical(p.normalize().tiles().iter().copied());
                if seen.insert(key) {
                    out.push(p.normalize());
                }
            }
            if n == max_n {
                continue;
            }
            let mut candidates = BTreeSet::new();
            for &c in cells {
                for nb in c.orthogonal() {
                    if !cells.contains(&nb) {
                        candidates.insert(nb);
                    }
                }
            }
            for cand in candidates {
                let mut grown = cells.clone();
                grown.insert(cand);
                let key = canonical(grown.iter().copied());
                if known.insert(key) {
                    next.push(grown);
                }
            }
        }
        frontier = next;
    }
    out
}

fn canonical<I: IntoIterator<Item = Coord>>(cells: I) -> Vec<Coord> {
    let set: BTreeSet<Coord> = cells.into_iter().collect();
    let minx = set.iter().map(|c| c.x).min().unwrap();
    let miny = set.iter().map(|c| c.y).min().unwrap();
    set.iter().map(|c| c.offset(-minx, -miny)).collect()
}

/// Seeded random legal polyomino with exactly `n` tiles.
pub fn random_polyomino(rng: &mut ChaCha8Rng, n: usize) -> Polyomino {
    assert!(n >= 1);
    let mut cells: BTreeSet<Coord> = [coord(0, 0)].into_iter().collect();
    while cells.len() < n {
        let candidates: Vec<Coord> = cells
            .iter()
            .flat_map(|c| c.orthogonal())
            .filter(|c| !cells.contains(c))
            .collect();
        let pick = candidates[rng.gen_range(0..candidates.len())];
        if addition_is_legal(&cells, pick) {
            cells.insert(pick);
        }
    }
    Polyomino::new(cells).expect("growth preserves legality").normalize()
}

/// Adding a tile can only create new diagonal pairs involving the new tile.
fn addition_is_legal(cells: &BTreeSet<Coord>, cand: Coord) -> bool {
    for d in cand.diagonal() {
        if cells.contains(&d) {
            let c1 = coord(cand.x, d.y);
            let c2 = coord(d.x, cand.y);
            if !cells.contains(&c1) && !cells.contains(&c2) {
                return false;
            }
        }
    }
    true
}

/// A seeded corpus of `count` random polyominoes with sizes in 1..=max_n.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<Polyomino> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            random_polyomino(&mut rng, n)
        })
        .collect()
}

/// The staircase comb used by the bounding-box worst-case family: `teeth`
/// vertical teeth whose bottoms descend one unit per tooth leftwards, hanging
/// from a connecting spine. Each restart of the start search discovers the
/// next tooth.
pub fn comb(teeth: usize) -> Polyomino {
    assert!(teeth >= 2);
    let mut cells = BTreeSet::new();
    let top = 0i64;
    for k in 0..teeth as i64 {
        let x = -2 * k;
        for y in (-k)..=top {
            cells.insert(coord(x, y));
        }
    }
    // Spine along the top row connecting the teeth.
    for x in (-2 * (teeth as i64 - 1))..=0 {
        cells.insert(coord(x, top));
    }
    Polyomino::new(cells).expect("comb is legal").normalize()
}

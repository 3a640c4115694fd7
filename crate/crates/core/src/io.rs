//! File formats: ASCII shape rasters, Turing-machine program listings,
//! trace serialization and world rendering.

use crate::grid::{coord, Coord, Dir, GridWorld, PixelState, Polyomino, ShapeError};
use crate::turing::{HeadMove, TapeProgram, TapeSymbol};
use crate::vm::{Move, TraceRecord};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("raster is ragged: line {0} has a different width")]
    RaggedRaster(usize),
    #[error("unknown character {0:?} at line {1}")]
    UnknownChar(char, usize),
    #[error("no tiles in raster")]
    EmptyRaster,
    #[error("illegal shape: {0}")]
    IllegalShape(#[from] ShapeError),
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("bad trace line {0}: {1}")]
    BadTrace(usize, String),
    #[error("bad program line {0}: {1}")]
    BadProgram(usize, String),
}

/// Parse a shape raster. `#` is a tile, `.` is empty, rows listed
/// top-to-bottom (highest y first). An optional header `# offset x y`
/// translates the parsed set.
pub fn parse_shape(text: &str) -> Result<Polyomino, IoError> {
    let mut offset = coord(0, 0);
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# offset") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(IoError::BadHeader(line.to_string()));
            }
            let x = parts[0].parse().map_err(|_| IoError::BadHeader(line.into()))?;
            let y = parts[1].parse().map_err(|_| IoError::BadHeader(line.into()))?;
            offset = coord(x, y);
            continue;
        }
        rows.push((i + 1, line));
    }
    if rows.is_empty() {
        return Err(IoError::EmptyRaster);
    }
    let width = rows[0].1.chars().count();
    let height = rows.len();
    let mut cells = BTreeSet::new();
    for (r, (lineno, line)) in rows.iter().enumerate() {
        if line.chars().count() != width {
            return Err(IoError::RaggedRaster(*lineno));
        }
        for (c, ch) in line.chars().enumerate() {
            match ch {
                '#' => {
                    let y = offset.y + (height - 1 - r) as i64;
                    let x = offset.x + c as i64;
                    cells.insert(coord(x, y));
                }
                '.' => {}
                other => return Err(IoError::UnknownChar(other, *lineno)),
            }
        }
    }
    if cells.is_empty() {
        return Err(IoError::EmptyRaster);
    }
    Ok(Polyomino::new(cells)?)
}

/// Deterministic raster of the normalized shape (no header).
pub fn serialize_shape(p: &Polyomino) -> String {
    let n = p.normalize();
    let (min, max) = n.bounding_rect();
    let mut out = String::new();
    for y in (min.y..=max.y).rev() {
        for x in min.x..=max.x {
            out.push(if n.contains(coord(x, y)) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// Render an arbitrary cell set for frame dumps. The robot position is
/// drawn as `o` on empty and `@` on a tile.
pub fn render_world(world: &GridWorld) -> String {
    let mut cells: BTreeSet<Coord> = world.occupied_sorted();
    cells.insert(world.robot);
    let minx = cells.iter().map(|c| c.x).min().unwrap();
    let maxx = cells.iter().map(|c| c.x).max().unwrap();
    let miny = cells.iter().map(|c| c.y).min().unwrap();
    let maxy = cells.iter().map(|c| c.y).max().unwrap();
    let mut out = String::new();
    for y in (miny..=maxy).rev() {
        for x in minx..=maxx {
            let c = coord(x, y);
            let ch = match (c == world.robot, world.is_tile(c)) {
                (true, true) => '@',
                (true, false) => 'o',
                (false, true) => '#',
                (false, false) => '.',
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}

fn move_code(mv: Move) -> &'static str {
    match mv {
        Move::Step(Dir::Up) => "U",
        Move::Step(Dir::Right) => "R",
        Move::Step(Dir::Down) => "D",
        Move::Step(Dir::Left) => "L",
        Move::Stay => "S",
        Move::Halt => "H",
    }
}

fn parse_move(s: &str) -> Option<Move> {
    Some(match s {
        "U" => Move::Step(Dir::Up),
        "R" => Move::Step(Dir::Right),
        "D" => Move::Step(Dir::Down),
        "L" => Move::Step(Dir::Left),
        "S" => Move::Stay,
        "H" => Move::Halt,
        _ => return None,
    })
}

/// One record per line: step, state name, position, written pixel, move.
pub fn serialize_trace(trace: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in trace {
        let w = match r.write {
            PixelState::Tile => "T",
            PixelState::Empty => "E",
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.step,
            r.state,
            r.pos.x,
            r.pos.y,
            w,
            move_code(r.mv)
        ));
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || IoError::BadTrace(i + 1, line.to_string());
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() != 6 {
            return Err(bad());
        }
        let step = parts[0].parse().map_err(|_| bad())?;
        let x = parts[2].parse().map_err(|_| bad())?;
        let y = parts[3].parse().map_err(|_| bad())?;
        let write = match parts[4] {
            "T" => PixelState::Tile,
            "E" => PixelState::Empty,
            _ => return Err(bad()),
        };
        let mv = parse_move(parts[5]).ok_or_else(bad)?;
        out.push(TraceRecord {
            step,
            state: parts[1].to_string(),
            pos: coord(x, y),
            write,
            mv,
        });
    }
    Ok(out)
}

/// Re-apply a trace to an initial world. Each record's position must match
/// the tracked robot position (locality), and the result is the final world.
pub fn replay_trace(initial: &GridWorld, trace: &[TraceRecord]) -> Result<GridWorld, IoError> {
    let mut world = initial.clone();
    for (i, r) in trace.iter().enumerate() {
        if r.pos != world.robot {
            return Err(IoError::BadTrace(
                i + 1,
                format!("position {:?} does not match robot {:?}", r.pos, world.robot),
            ));
        }
        world.set_pixel(world.robot, r.write);
        if let Move::Step(d) = r.mv {
            world.robot = world.robot.step(d);
        }
    }
    Ok(world)
}

/// Text listing of a Turing machine: `initial: NAME`, `accept: NAME` headers
/// plus one transition per line, `state symbol -> state symbol dir` with
/// symbols `0`, `1`, `_` (blank) and dir `L`/`R`. `#` starts a comment.
pub fn parse_tm_program(text: &str) -> Result<TapeProgram, IoError> {
    let mut initial = None;
    let mut accept = None;
    let mut transitions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| IoError::BadProgram(i + 1, msg.to_string());
        if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("accept:") {
            accept = Some(rest.trim().to_string());
            continue;
        }
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| bad("missing ->"))?;
        let l: Vec<&str> = lhs.split_whitespace().collect();
        let r: Vec<&str> = rhs.split_whitespace().collect();
        if l.len() != 2 || r.len() != 3 {
            return Err(bad("expected `state symbol -> state symbol dir`"));
        }
        let read = parse_symbol(l[1]).ok_or_else(|| bad("bad read symbol"))?;
        let write = parse_symbol(r[1]).ok_or_else(|| bad("bad write symbol"))?;
        let mv = match r[2] {
            "L" => HeadMove::Left,
            "R" => HeadMove::Right,
            _ => return Err(bad("bad direction")),
        };
        transitions.push((l[0].to_string(), read, r[0].to_string(), write, mv));
    }
    let initial = initial.ok_or_else(|| IoError::BadProgram(0, "missing initial: header".into()))?;
    let accept = accept.ok_or_else(|| IoError::BadProgram(0, "missing accept: header".into()))?;
    TapeProgram::new(initial, accept, transitions)
        .map_err(|e| IoError::BadProgram(0, e.to_string()))
}

fn parse_symbol(s: &str) -> Option<TapeSymbol> {
    Some(match s {
        "0" => TapeSymbol::Zero,
        "1" => TapeSymbol::One,
        "_" => TapeSymbol::Blank,
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_tile() {
        let p = parse_shape("#\n").unwrap();
        assert_eq!(p.tiles().iter().copied().collect::<Vec<_>>(), vec![coord(0, 0)]);
    }

    #[test]
    fn parse_rejects_diagonal_pair() {
        let err = parse_shape("#.\n.#\n").unwrap_err();
        assert!(matches!(err, IoError::IllegalShape(_)));
    }

    #[test]
    fn parse_rejects_ragged() {
        let err = parse_shape("##\n#\n").unwrap_err();
        assert!(matches!(err, IoError::RaggedRaster(_)));
    }

    #[test]
    fn parse_rejects_unknown_char() {
        let err = parse_shape("#x\n").unwrap_err();
        assert!(matches!(err, IoError::UnknownChar('x', _)));
    }

    #[test]
    fn offset_header_applies() {
        let p = parse_shape("# offset 3 -2\n##\n").unwrap();
        assert!(p.contains(coord(3, -2)));
        assert!(p.contains(coord(4, -2)));
    }

    #[test]
    fn roundtrip_examples() {
        for text in ["#\n", "##\n", "#.\n##\n", "###\n#.#\n###\n"] {
            let p = parse_shape(text).unwrap();
            assert_eq!(serialize_shape(&p), text.replace("# offset", ""));
            let q = parse_shape(&serialize_shape(&p)).unwrap();
            assert_eq!(q, p.normalize());
        }
    }

    #[test]
    fn rows_are_top_to_bottom() {
        let p = parse_shape("#.\n##\n").unwrap();
        // Top line is the higher y.
        assert!(p.contains(coord(0, 1)));
        assert!(p.contains(coord(0, 0)));
        assert!(p.contains(coord(1, 0)));
        assert!(!p.contains(coord(1, 1)));
    }

    #[test]
    fn trace_roundtrip() {
        let trace = vec![
            TraceRecord {
                step: 1,
                state: "Seek{dir:Down}".into(),
                pos: coord(0, 0),
                write: PixelState::Tile,
                mv: Move::Step(Dir::Right),
            },
            TraceRecord {
                step: 2,
                state: "Done".into(),
                pos: coord(1, 0),
                write: PixelState::Empty,
                mv: Move::Halt,
            },
        ];
        let text = serialize_trace(&trace);
        assert_eq!(parse_trace(&text).unwrap(), trace);
    }

    #[test]
    fn tm_program_parses() {
        let text = "\
initial: start
accept: done
start 1 -> start 1 R
start 0 -> start 0 R
start _ -> done _ L
";
        let prog = parse_tm_program(text).unwrap();
        assert_eq!(prog.initial(), "start");
        assert_eq!(prog.accept(), "done");
    }
}

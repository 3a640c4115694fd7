//! Polyomino string encoding, the Turing-machine description and
//! interpreter, and the in-world transformation pipeline.

use crate::grid::{coord, Polyomino, ShapeError};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Tape alphabet: 0, 1 and blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeSymbol {
    Zero,
    One,
    Blank,
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            TapeSymbol::Zero => '0',
            TapeSymbol::One => '1',
            TapeSymbol::Blank => '_',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadMove {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("duplicate transition for ({0}, {1})")]
    DuplicateTransition(String, TapeSymbol),
    #[error("state {0} is not reachable as a transition source or accept")]
    UnknownState(String),
}

impl fmt::Display for HeadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == HeadMove::Left { "L" } else { "R" })
    }
}

/// Deterministic single-tape Turing machine description. States are interned
/// to small ids; transitions are total on reachable pairs (a missing pair on
/// a non-accept state simply halts the interpreter without accepting).
#[derive(Debug, Clone)]
pub struct TapeProgram {
    names: Vec<String>,
    initial: usize,
    accept: usize,
    transitions: HashMap<(usize, TapeSymbol), (usize, TapeSymbol, HeadMove)>,
}

impl TapeProgram {
    pub fn new(
        initial: String,
        accept: String,
        rules: Vec<(String, TapeSymbol, String, TapeSymbol, HeadMove)>,
    ) -> Result<TapeProgram, ProgramError> {
        let mut names: Vec<String> = Vec::new();
        let intern = |n: &str, names: &mut Vec<String>| -> usize {
            if let Some(i) = names.iter().position(|x| x == n) {
                i
            } else {
                names.push(n.to_string());
                names.len() - 1
            }
        };
        let initial_id = intern(&initial, &mut names);
        let accept_id = intern(&accept, &mut names);
        let mut transitions = HashMap::new();
        for (from, read, to, write, mv) in rules {
            let f = intern(&from, &mut names);
            let t = intern(&to, &mut names);
            if transitions.insert((f, read), (t, write, mv)).is_some() {
                return Err(ProgramError::DuplicateTransition(from, read));
            }
        }
        Ok(TapeProgram {
            names,
            initial: initial_id,
            accept: accept_id,
            transitions,
        })
    }

    pub fn initial(&self) -> &str {
        &self.names[self.initial]
    }

    pub fn accept(&self) -> &str {
        &self.names[self.accept]
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn initial_id(&self) -> usize {
        self.initial
    }

    pub fn accept_id(&self) -> usize {
        self.accept
    }

    pub fn lookup(&self, state: usize, sym: TapeSymbol) -> Option<(usize, TapeSymbol, HeadMove)> {
        self.transitions.get(&(state, sym)).copied()
    }

    /// The program that accepts immediately, leaving the tape unchanged.
    pub fn identity() -> TapeProgram {
        TapeProgram::new("accept".into(), "accept".into(), vec![]).unwrap()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("TM step budget of {0} exhausted")]
    BudgetExhausted(u64),
}

/// Standard single-tape semantics; the tape grows with blanks on demand.
/// Returns the final tape (trimmed of trailing/leading blanks is up to the
/// caller), the head position relative to the initial left end, and whether
/// the machine accepted.
pub fn run_tm(
    tape: &[TapeSymbol],
    prog: &TapeProgram,
    budget: u64,
) -> Result<(Vec<TapeSymbol>, i64, bool), TmError> {
    let mut left: Vec<TapeSymbol> = Vec::new(); // cells at negative positions, reversed
    let mut right: Vec<TapeSymbol> = tape.to_vec();
    let mut head: i64 = 0;
    let mut state = prog.initial_id();
    let mut steps = 0u64;
    let read = |left: &Vec<TapeSymbol>, right: &Vec<TapeSymbol>, pos: i64| -> TapeSymbol {
        if pos >= 0 {
            right.get(pos as usize).copied().unwrap_or(TapeSymbol::Blank)
        } else {
            left.get((-pos - 1) as usize).copied().unwrap_or(TapeSymbol::Blank)
        }
    };
    let write = |left: &mut Vec<TapeSymbol>, right: &mut Vec<TapeSymbol>, pos: i64, s: TapeSymbol| {
        if pos >= 0 {
            let i = pos as usize;
            if i >= right.len() {
                right.resize(i + 1, TapeSymbol::Blank);
            }
            right[i] = s;
        } else {
            let i = (-pos - 1) as usize;
            if i >= left.len() {
                left.resize(i + 1, TapeSymbol::Blank);
            }
            left[i] = s;
        }
    };
    let accepted = loop {
        if state == prog.accept_id() {
            break true;
        }
        if steps >= budget {
            return Err(TmError::BudgetExhausted(budget));
        }
        let sym = read(&left, &right, head);
        let Some((next, out, mv)) = prog.lookup(state, sym) else {
            break false;
        };
        write(&mut left, &mut right, head, out);
        head += match mv {
            HeadMove::Left => -1,
            HeadMove::Right => 1,
        };
        state = next;
        steps += 1;
    };
    let mut full: Vec<TapeSymbol> = left.iter().rev().copied().collect();
    let offset = left.len() as i64;
    full.extend(right);
    Ok((full, head + offset, accepted))
}

/// The three fields of the string encoding: height, width and the rank-order
/// membership bitmap of the bounding rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub s1: String,
    pub s2: String,
    pub s3: String,
}

impl Encoding {
    pub fn to_symbols(&self) -> Vec<TapeSymbol> {
        let mut out = Vec::new();
        let push_bits = |s: &str, out: &mut Vec<TapeSymbol>| {
            for c in s.chars() {
                out.push(if c == '1' { TapeSymbol::One } else { TapeSymbol::Zero });
            }
        };
        push_bits(&self.s1, &mut out);
        out.push(TapeSymbol::Blank);
        push_bits(&self.s2, &mut out);
        out.push(TapeSymbol::Blank);
        push_bits(&self.s3, &mut out);
        out
    }

    pub fn from_symbols(symbols: &[TapeSymbol]) -> Option<Encoding> {
        let text: String = symbols.iter().map(|s| s.to_string()).collect();
        let trimmed = text.trim_matches('_');
        let mut parts = trimmed.split('_');
        let s1 = parts.next()?.to_string();
        let s2 = parts.next()?.to_string();
        let s3 = parts.next()?.to_string();
        if parts.next().is_some() || s1.is_empty() || s2.is_empty() || s3.is_empty() {
            return None;
        }
        Some(Encoding { s1, s2, s3 })
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.s1, self.s2, self.s3)
    }
}

/// Encode per the rank order: tiles of the bounding rectangle sorted by
/// decreasing y, then decreasing x; bit i is 1 iff the rank-i pixel is in P.
pub fn encode_polyomino(p: &Polyomino) -> Encoding {
    let (min, max) = p.bounding_rect();
    let h = (max.y - min.y + 1) as u64;
    let w = (max.x - min.x + 1) as u64;
    let mut s3 = String::with_capacity((h * w) as usize);
    let mut y = max.y;
    while y >= min.y {
        let mut x = max.x;
        while x >= min.x {
            s3.push(if p.contains(coord(x, y)) { '1' } else { '0' });
            x -= 1;
        }
        y -= 1;
    }
    Encoding {
        s1: format!("{h:b}"),
        s2: format!("{w:b}"),
        s3,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("bad dimension field")]
    BadDimension,
    #[error("bitmap length {got} does not match {h}x{w}")]
    LengthMismatch { got: usize, h: u64, w: u64 },
    #[error("decoded set is not a legal polyomino: {0}")]
    IllegalShape(#[from] ShapeError),
}

/// Inverse of `encode_polyomino`, normalized.
pub fn decode_encoding(e: &Encoding) -> Result<Polyomino, DecodeError> {
    let parse_dim = |s: &str| -> Result<u64, DecodeError> {
        if s.is_empty() || s.chars().any(|c| c != '0' && c != '1') {
            return Err(DecodeError::BadDimension);
        }
        let v = u64::from_str_radix(s, 2).map_err(|_| DecodeError::BadDimension)?;
        if v == 0 {
            return Err(DecodeError::BadDimension);
        }
        Ok(v)
    };
    let h = parse_dim(&e.s1)?;
    let w = parse_dim(&e.s2)?;
    if e.s3.len() as u64 != h * w {
        return Err(DecodeError::LengthMismatch {
            got: e.s3.len(),
            h,
            w,
        });
    }
    let mut cells = Vec::new();
    for (i, c) in e.s3.chars().enumerate() {
        if c == '1' {
            let row = i as u64 / w;
            let col = i as u64 % w;
            let y = (h - 1 - row) as i64;
            let x = (w - 1 - col) as i64;
            cells.push(coord(x, y));
        }
    }
    let p = Polyomino::new(cells)?;
    Ok(p.normalize())
}

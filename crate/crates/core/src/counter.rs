//! The tile-encoded binary counter: a contiguous base line of tiles with a
//! value tile beside each base tile denoting a 1 bit. Increments, decrements,
//! bit extension, whole-tape shifts and in-place reflection are all executed
//! by the robot walking the tape and flipping bits.
//!
//! The flip/shift/reflect logic is written as small state-machine fragments
//! (`FlipWalk`, `ShiftWalk`, `ReflectWalk`) so host controllers can splice
//! them into their own state enums without re-deriving the movement rules.

use crate::grid::{Coord, Dir, GridWorld, PixelState};
use crate::vm::{act, go, halt, run, Action, Compass, Controller, Metrics, Move, Observation, RunConfig};
use thiserror::Error;

/// Largest constant a single add may carry; larger deltas would not be a
/// constant-state automaton.
pub const MAX_DELTA: u8 = 8;

/// Descriptor of a counter on the grid. Harness-level bookkeeping only; the
/// robot itself navigates by the tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterTape {
    /// Base tile of the least significant bit.
    pub anchor: Coord,
    /// Direction from the LSB toward more significant bits.
    pub significance: Dir,
    /// Side of the base line carrying value tiles.
    pub bit_side: Dir,
}

impl CounterTape {
    pub fn vertical(anchor: Coord, bit_side: Dir) -> CounterTape {
        CounterTape {
            anchor,
            significance: Dir::Up,
            bit_side,
        }
    }

    pub fn bit_cell(&self, k: usize) -> Coord {
        self.base_cell(k).step(self.bit_side)
    }

    pub fn base_cell(&self, k: usize) -> Coord {
        let (dx, dy) = self.significance.delta();
        self.anchor.offset(dx * k as i64, dy * k as i64)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterError {
    #[error("target pixels are not empty")]
    Collision,
    #[error("decrement below zero")]
    Underflow,
    #[error("delta magnitude {0} exceeds the declared constant {MAX_DELTA}")]
    DeltaTooLarge(i64),
    #[error("run did not halt")]
    Stuck,
}

/// Direct bit readout from the grid; test-harness oracle. The robot never
/// reads a whole counter (it has no memory to hold the value).
pub fn read_value(world: &GridWorld, tape: &CounterTape) -> u64 {
    let mut value = 0u64;
    let mut k = 0usize;
    while world.is_tile(tape.base_cell(k)) {
        if world.is_tile(tape.bit_cell(k)) {
            value |= 1 << k;
        }
        k += 1;
    }
    value
}

pub fn base_len(world: &GridWorld, tape: &CounterTape) -> usize {
    let mut k = 0usize;
    while world.is_tile(tape.base_cell(k)) {
        k += 1;
    }
    k
}

/// Geometry parameters shared by the fragments.
#[derive(Debug, Clone, Copy)]
pub struct TapeGeom {
    pub axis: Dir,
    pub bit_side: Dir,
}

impl TapeGeom {
    pub fn of(tape: &CounterTape) -> TapeGeom {
        TapeGeom {
            axis: tape.significance,
            bit_side: tape.bit_side,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipMode {
    Inc,
    Dec,
}

/// One +-1 pass over the tape, starting and ending on the LSB base tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipWalk {
    /// On a base tile, inspecting its bit.
    Examine,
    /// On the bit cell: rewrite it, then either carry on or finish.
    OnBit { place: bool, carry: bool },
    /// Back on the base tile after the final bit write.
    SettleThenBack,
    /// Carry/borrow moves to the next base tile (extending on overflow).
    Advance,
    /// Standing on the fresh cell past the old MSB: make it a base tile.
    ExtendBase,
    /// On the new bit cell of the extension: the carried 1.
    ExtendBit,
    /// Walk back toward the LSB.
    Back,
}

pub const FLIP_WALKS: [FlipWalk; 9] = [
    FlipWalk::Examine,
    FlipWalk::OnBit { place: false, carry: false },
    FlipWalk::OnBit { place: false, carry: true },
    FlipWalk::OnBit { place: true, carry: false },
    FlipWalk::OnBit { place: true, carry: true },
    FlipWalk::SettleThenBack,
    FlipWalk::Advance,
    FlipWalk::ExtendBase,
    FlipWalk::ExtendBit,
];

pub enum FlipOutcome {
    Continue(FlipWalk, Action),
    /// Finished; the robot is on the LSB base tile.
    Done(Action),
}

/// Advance the flip fragment by one VM step. The walk must start on the LSB
/// base tile in state `Examine`; for `Dec` the encoded value must be
/// positive (the hosts' algorithms never decrement a zero counter).
pub fn step_flip(w: FlipWalk, mode: FlipMode, g: TapeGeom, obs: Observation) -> FlipOutcome {
    let bit = Compass::from_dir(g.bit_side);
    match w {
        FlipWalk::Examine => {
            let set = obs.tile_at(bit);
            let (place, carry) = match (mode, set) {
                (FlipMode::Inc, true) => (false, true),   // 1 -> 0, carry
                (FlipMode::Inc, false) => (true, false),  // 0 -> 1, done
                (FlipMode::Dec, true) => (false, false),  // 1 -> 0, done
                (FlipMode::Dec, false) => (true, true),   // 0 -> 1, borrow
            };
            FlipOutcome::Continue(FlipWalk::OnBit { place, carry }, go(obs, g.bit_side))
        }
        FlipWalk::OnBit { place, carry } => {
            let write = if place { PixelState::Tile } else { PixelState::Empty };
            let next = if carry { FlipWalk::Advance } else { FlipWalk::SettleThenBack };
            FlipOutcome::Continue(next, act(write, Move::Step(g.bit_side.opposite())))
        }
        FlipWalk::SettleThenBack => FlipOutcome::Continue(FlipWalk::Back, stay_here(obs)),
        FlipWalk::Advance => {
            if obs.tile_toward(g.axis) {
                FlipOutcome::Continue(FlipWalk::Examine, go(obs, g.axis))
            } else {
                // Past the MSB: only reachable on increment overflow.
                FlipOutcome::Continue(FlipWalk::ExtendBase, go(obs, g.axis))
            }
        }
        FlipWalk::ExtendBase => {
            FlipOutcome::Continue(FlipWalk::ExtendBit, act(PixelState::Tile, Move::Step(g.bit_side)))
        }
        FlipWalk::ExtendBit => FlipOutcome::Continue(
            FlipWalk::Back,
            act(PixelState::Tile, Move::Step(g.bit_side.opposite())),
        ),
        FlipWalk::Back => {
            if obs.tile_toward(g.axis.opposite()) {
                FlipOutcome::Continue(FlipWalk::Back, go(obs, g.axis.opposite()))
            } else {
                FlipOutcome::Done(stay_here(obs))
            }
        }
    }
}

fn stay_here(obs: Observation) -> Action {
    act(obs.center, Move::Stay)
}

/// Translate the whole tape one unit along `dir` (parallel to the axis).
/// Processes rows from the leading end backward so every move lands on an
/// empty cell. Starts on the LSB base tile; ends on the trailing end of the
/// moved tape (the new LSB when shifting along `significance`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftWalk {
    ToLeadingEnd,
    MoveBase,
    PlaceBase { had_bit: bool },
    OnNewBit,
    EraseOldBit,
    Retreat,
    StepHome,
}

pub const SHIFT_WALKS: [ShiftWalk; 8] = [
    ShiftWalk::ToLeadingEnd,
    ShiftWalk::MoveBase,
    ShiftWalk::PlaceBase { had_bit: false },
    ShiftWalk::PlaceBase { had_bit: true },
    ShiftWalk::OnNewBit,
    ShiftWalk::EraseOldBit,
    ShiftWalk::Retreat,
    ShiftWalk::StepHome,
];

pub enum ShiftOutcome {
    Continue(ShiftWalk, Action),
    Done(Action),
}

/// `dir` must be parallel to `g.axis`.
pub fn step_shift(w: ShiftWalk, dir: Dir, g: TapeGeom, obs: Observation) -> ShiftOutcome {
    let bit = Compass::from_dir(g.bit_side);
    match w {
        ShiftWalk::ToLeadingEnd => {
            if obs.tile_toward(dir) {
                ShiftOutcome::Continue(ShiftWalk::ToLeadingEnd, go(obs, dir))
            } else {
                ShiftOutcome::Continue(ShiftWalk::MoveBase, stay_here(obs))
            }
        }
        ShiftWalk::MoveBase => {
            let had_bit = obs.tile_at(bit);
            ShiftOutcome::Continue(
                ShiftWalk::PlaceBase { had_bit },
                act(PixelState::Empty, Move::Step(dir)),
            )
        }
        ShiftWalk::PlaceBase { had_bit } => {
            if had_bit {
                ShiftOutcome::Continue(ShiftWalk::OnNewBit, act(PixelState::Tile, Move::Step(g.bit_side)))
            } else {
                ShiftOutcome::Continue(
                    ShiftWalk::Retreat,
                    act(PixelState::Tile, Move::Step(dir.opposite())),
                )
            }
        }
        ShiftWalk::OnNewBit => ShiftOutcome::Continue(
            ShiftWalk::EraseOldBit,
            act(PixelState::Tile, Move::Step(dir.opposite())),
        ),
        ShiftWalk::EraseOldBit => ShiftOutcome::Continue(
            ShiftWalk::Retreat,
            act(PixelState::Empty, Move::Step(g.bit_side.opposite())),
        ),
        ShiftWalk::Retreat => {
            // At the vacated cell of the row just moved.
            if obs.tile_toward(dir.opposite()) {
                ShiftOutcome::Continue(ShiftWalk::MoveBase, go(obs, dir.opposite()))
            } else {
                ShiftOutcome::Continue(ShiftWalk::StepHome, go(obs, dir))
            }
        }
        ShiftWalk::StepHome => ShiftOutcome::Done(stay_here(obs)),
    }
}

/// In-place reversal of the bit string. Marker tiles on the side opposite
/// the value tiles track the two swap pointers walking inward; each round
/// swaps the endpoint bits and moves both markers one row toward the middle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReflectWalk {
    PlaceLow,
    PlaceLowWrite,
    AscendToEnd,
    PlaceHigh,
    DescendToRound,
    RoundStart,
    SeekHigh { bit_a: bool, first: bool },
    WriteHighBit { bit_a: bool, bit_b: bool, last: bool },
    HighBitDone { bit_b: bool, last: bool },
    HighMarkerErase { bit_b: bool, last: bool },
    HighMarkerDown { bit_b: bool, last: bool },
    SeekLowSkip { bit_b: bool },
    SeekLow { bit_b: bool, last: bool },
    WriteLowBit { bit_b: bool, last: bool },
    LowBitDone { last: bool },
    LowMarkerErase,
    LowMarkerPlace,
    LowMarkerBack,
    LowMarkerDeleteLast,
    SoleSeek,
    SoleErase,
    SeekLsb,
}

pub fn reflect_walk_states() -> Vec<ReflectWalk> {
    let mut out = vec![
        ReflectWalk::PlaceLow,
        ReflectWalk::PlaceLowWrite,
        ReflectWalk::AscendToEnd,
        ReflectWalk::PlaceHigh,
        ReflectWalk::DescendToRound,
        ReflectWalk::RoundStart,
        ReflectWalk::LowMarkerErase,
        ReflectWalk::LowMarkerPlace,
        ReflectWalk::LowMarkerBack,
        ReflectWalk::LowMarkerDeleteLast,
        ReflectWalk::SoleSeek,
        ReflectWalk::SoleErase,
        ReflectWalk::SeekLsb,
    ];
    for a in [false, true] {
        for b in [false, true] {
            out.push(ReflectWalk::SeekHigh { bit_a: a, first: b });
            out.push(ReflectWalk::HighBitDone { bit_b: a, last: b });
            out.push(ReflectWalk::HighMarkerErase { bit_b: a, last: b });
            out.push(ReflectWalk::HighMarkerDown { bit_b: a, last: b });
            out.push(ReflectWalk::SeekLow { bit_b: a, last: b });
            out.push(ReflectWalk::WriteLowBit { bit_b: a, last: b });
            for c in [false, true] {
                out.push(ReflectWalk::WriteHighBit {
                    bit_a: a,
                    bit_b: b,
                    last: c,
                });
            }
        }
        out.push(ReflectWalk::SeekLowSkip { bit_b: a });
        out.push(ReflectWalk::LowBitDone { last: a });
    }
    out
}

pub enum ReflectOutcome {
    Continue(ReflectWalk, Action),
    Done(Action),
}

/// One VM step of the reflection fragment. Starts on the LSB base tile in
/// `PlaceLow`; finishes on the low end of the base line, which is the new
/// MSB end (the significance flip is the caller's bookkeeping).
pub fn step_reflect(w: ReflectWalk, g: TapeGeom, obs: Observation) -> ReflectOutcome {
    let axis = g.axis;
    let mark_side = g.bit_side.opposite();
    let mark = Compass::from_dir(mark_side);
    let bit = Compass::from_dir(g.bit_side);
    use ReflectOutcome::Continue as C;
    match w {
        ReflectWalk::PlaceLow => C(ReflectWalk::PlaceLowWrite, go(obs, mark_side)),
        ReflectWalk::PlaceLowWrite => C(
            ReflectWalk::AscendToEnd,
            act(PixelState::Tile, Move::Step(mark_side.opposite())),
        ),
        ReflectWalk::AscendToEnd => {
            if obs.tile_toward(axis) {
                C(ReflectWalk::AscendToEnd, go(obs, axis))
            } else {
                C(ReflectWalk::PlaceHigh, go(obs, mark_side))
            }
        }
        ReflectWalk::PlaceHigh => C(
            ReflectWalk::DescendToRound,
            act(PixelState::Tile, Move::Step(mark_side.opposite())),
        ),
        ReflectWalk::DescendToRound => {
            if obs.tile_toward(axis.opposite()) {
                C(ReflectWalk::DescendToRound, go(obs, axis.opposite()))
            } else {
                C(ReflectWalk::RoundStart, stay_here(obs))
            }
        }
        ReflectWalk::RoundStart => {
            // On the low marker's base tile: read bit A, then search upward.
            let bit_a = obs.tile_at(bit);
            C(ReflectWalk::SeekHigh { bit_a, first: true }, go(obs, axis))
        }
        ReflectWalk::SeekHigh { bit_a, first } => {
            if !obs.center_tile() {
                // Walked past the MSB: the markers coincided one row into a
                // single marker. Find and erase it on the way down.
                C(ReflectWalk::SoleSeek, go(obs, axis.opposite()))
            } else if obs.tile_at(mark) {
                let bit_b = obs.tile_at(bit);
                C(
                    ReflectWalk::WriteHighBit {
                        bit_a,
                        bit_b,
                        last: first,
                    },
                    go(obs, g.bit_side),
                )
            } else {
                C(ReflectWalk::SeekHigh { bit_a, first: false }, go(obs, axis))
            }
        }
        ReflectWalk::WriteHighBit { bit_a, bit_b, last } => C(
            ReflectWalk::HighBitDone { bit_b, last },
            act(
                if bit_a { PixelState::Tile } else { PixelState::Empty },
                Move::Step(g.bit_side.opposite()),
            ),
        ),
        ReflectWalk::HighBitDone { bit_b, last } => {
            C(ReflectWalk::HighMarkerErase { bit_b, last }, go(obs, mark_side))
        }
        ReflectWalk::HighMarkerErase { bit_b, last } => C(
            ReflectWalk::HighMarkerDown { bit_b, last },
            act(PixelState::Empty, Move::Step(axis.opposite())),
        ),
        ReflectWalk::HighMarkerDown { bit_b, last } => {
            // One row below the old high marker, still on the marker column.
            // When this was the final swap the cell may hold the low marker:
            // leave it untouched and go write the low bit. Otherwise drop
            // the moved high marker here.
            let write = if last { obs.center } else { PixelState::Tile };
            let next = if last {
                ReflectWalk::SeekLow { bit_b, last }
            } else {
                ReflectWalk::SeekLowSkip { bit_b }
            };
            C(next, act(write, Move::Step(mark_side.opposite())))
        }
        ReflectWalk::SeekLowSkip { bit_b } => {
            // This row holds the moved high marker; start the search below.
            C(ReflectWalk::SeekLow { bit_b, last: false }, go(obs, axis.opposite()))
        }
        ReflectWalk::SeekLow { bit_b, last } => {
            if obs.tile_at(mark) {
                C(ReflectWalk::WriteLowBit { bit_b, last }, go(obs, g.bit_side))
            } else {
                C(ReflectWalk::SeekLow { bit_b, last }, go(obs, axis.opposite()))
            }
        }
        ReflectWalk::WriteLowBit { bit_b, last } => C(
            ReflectWalk::LowBitDone { last },
            act(
                if bit_b { PixelState::Tile } else { PixelState::Empty },
                Move::Step(g.bit_side.opposite()),
            ),
        ),
        ReflectWalk::LowBitDone { last } => {
            if last {
                C(ReflectWalk::LowMarkerDeleteLast, go(obs, mark_side))
            } else {
                C(ReflectWalk::LowMarkerErase, go(obs, mark_side))
            }
        }
        ReflectWalk::LowMarkerErase => C(
            ReflectWalk::LowMarkerPlace,
            act(PixelState::Empty, Move::Step(axis)),
        ),
        ReflectWalk::LowMarkerPlace => C(
            ReflectWalk::LowMarkerBack,
            act(PixelState::Tile, Move::Step(mark_side.opposite())),
        ),
        ReflectWalk::LowMarkerBack => C(ReflectWalk::RoundStart, stay_here(obs)),
        ReflectWalk::LowMarkerDeleteLast => C(
            ReflectWalk::SeekLsb,
            act(PixelState::Empty, Move::Step(mark_side.opposite())),
        ),
        ReflectWalk::SoleSeek => {
            if obs.tile_at(mark) {
                C(ReflectWalk::SoleErase, go(obs, mark_side))
            } else {
                C(ReflectWalk::SoleSeek, go(obs, axis.opposite()))
            }
        }
        ReflectWalk::SoleErase => C(
            ReflectWalk::SeekLsb,
            act(PixelState::Empty, Move::Step(mark_side.opposite())),
        ),
        ReflectWalk::SeekLsb => {
            if obs.tile_toward(axis.opposite()) {
                C(ReflectWalk::SeekLsb, go(obs, axis.opposite()))
            } else {
                ReflectOutcome::Done(stay_here(obs))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Standalone drivers: each op runs a dedicated controller through the VM with
// the robot starting on the tape anchor.
// ---------------------------------------------------------------------------

struct AddController {
    geom: TapeGeom,
    mode: FlipMode,
    count: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum AddState {
    Next { remaining: u8 },
    Flip { remaining: u8, w: FlipWalk },
    Done,
}

impl Controller for AddController {
    type State = AddState;

    fn initial(&self) -> AddState {
        AddState::Next {
            remaining: self.count,
        }
    }

    fn transition(&self, s: AddState, obs: Observation) -> (AddState, Action) {
        match s {
            AddState::Next { remaining } => {
                if remaining == 0 {
                    (AddState::Done, halt(obs))
                } else {
                    self.drive(remaining - 1, FlipWalk::Examine, obs)
                }
            }
            AddState::Flip { remaining, w } => self.drive(remaining, w, obs),
            AddState::Done => (AddState::Done, halt(obs)),
        }
    }

    fn declared_states(&self) -> Vec<AddState> {
        let mut out = vec![AddState::Done];
        for remaining in 0..=MAX_DELTA {
            out.push(AddState::Next { remaining });
            for w in FLIP_WALKS {
                out.push(AddState::Flip { remaining, w });
            }
        }
        out
    }
}

impl AddController {
    fn drive(&self, remaining: u8, w: FlipWalk, obs: Observation) -> (AddState, Action) {
        match step_flip(w, self.mode, self.geom, obs) {
            FlipOutcome::Continue(next, a) => (AddState::Flip { remaining, w: next }, a),
            FlipOutcome::Done(a) => (AddState::Next { remaining }, a),
        }
    }
}

/// Create a 1-bit counter with value 0 at `tape.anchor`.
pub fn create(world: &mut GridWorld, tape: &CounterTape) -> Result<Metrics, CounterError> {
    if world.is_tile(tape.anchor) || world.is_tile(tape.bit_cell(0)) {
        return Err(CounterError::Collision);
    }
    struct Place;
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    enum PlaceState {
        Put,
        Done,
    }
    impl Controller for Place {
        type State = PlaceState;
        fn initial(&self) -> PlaceState {
            PlaceState::Put
        }
        fn transition(&self, s: PlaceState, obs: Observation) -> (PlaceState, Action) {
            match s {
                PlaceState::Put => (PlaceState::Done, act(PixelState::Tile, Move::Halt)),
                PlaceState::Done => (PlaceState::Done, halt(obs)),
            }
        }
        fn declared_states(&self) -> Vec<PlaceState> {
            vec![PlaceState::Put, PlaceState::Done]
        }
    }
    world.robot = tape.anchor;
    let out = run(world, &Place, RunConfig::budget(4));
    debug_assert!(out.halted);
    Ok(out.metrics)
}

/// Change the encoded value by `delta`, extending the base line on carry
/// overflow. The robot starts and ends on the LSB base tile.
pub fn add(world: &mut GridWorld, tape: &CounterTape, delta: i64) -> Result<Metrics, CounterError> {
    if delta.unsigned_abs() > MAX_DELTA as u64 {
        return Err(CounterError::DeltaTooLarge(delta));
    }
    if delta == 0 {
        return Ok(Metrics::default());
    }
    if delta < 0 && read_value(world, tape) < delta.unsigned_abs() {
        return Err(CounterError::Underflow);
    }
    let ctl = AddController {
        geom: TapeGeom::of(tape),
        mode: if delta > 0 { FlipMode::Inc } else { FlipMode::Dec },
        count: delta.unsigned_abs() as u8,
    };
    world.robot = tape.anchor;
    let out = run(world, &ctl, RunConfig::budget(1_000_000));
    if !out.halted {
        return Err(CounterError::Stuck);
    }
    Ok(out.metrics)
}

struct ShiftController {
    geom: TapeGeom,
    dir: Dir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ShiftState {
    Walk(ShiftWalk),
    Done,
}

impl Controller for ShiftController {
    type State = ShiftState;
    fn initial(&self) -> ShiftState {
        ShiftState::Walk(ShiftWalk::ToLeadingEnd)
    }
    fn transition(&self, s: ShiftState, obs: Observation) -> (ShiftState, Action) {
        match s {
            ShiftState::Walk(w) => match step_shift(w, self.dir, self.geom, obs) {
                ShiftOutcome::Continue(next, a) => (ShiftState::Walk(next), a),
                ShiftOutcome::Done(_) => (ShiftState::Done, halt(obs)),
            },
            ShiftState::Done => (ShiftState::Done, halt(obs)),
        }
    }
    fn declared_states(&self) -> Vec<ShiftState> {
        let mut out = vec![ShiftState::Done];
        for w in SHIFT_WALKS {
            out.push(ShiftState::Walk(w));
        }
        out
    }
}

/// Translate the tape one unit along `dir` (must be parallel to the axis).
/// Updates the descriptor's anchor.
pub fn shift(world: &mut GridWorld, tape: &mut CounterTape, dir: Dir) -> Result<Metrics, CounterError> {
    assert!(
        dir == tape.significance || dir == tape.significance.opposite(),
        "shift must be along the tape axis"
    );
    let n = base_len(world, tape);
    let lead = if dir == tape.significance {
        tape.base_cell(n)
    } else {
        tape.base_cell(0).step(dir)
    };
    if world.is_tile(lead) || world.is_tile(lead.step(tape.bit_side)) {
        return Err(CounterError::Collision);
    }
    let ctl = ShiftController {
        geom: TapeGeom::of(tape),
        dir,
    };
    world.robot = tape.anchor;
    let out = run(world, &ctl, RunConfig::budget(1_000_000));
    if !out.halted {
        return Err(CounterError::Stuck);
    }
    tape.anchor = tape.anchor.step(dir);
    Ok(out.metrics)
}

struct ReflectController {
    geom: TapeGeom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ReflState {
    Walk(ReflectWalk),
    Done,
}

impl Controller for ReflectController {
    type State = ReflState;
    fn initial(&self) -> ReflState {
        ReflState::Walk(ReflectWalk::PlaceLow)
    }
    fn transition(&self, s: ReflState, obs: Observation) -> (ReflState, Action) {
        match s {
            ReflState::Walk(w) => match step_reflect(w, self.geom, obs) {
                ReflectOutcome::Continue(next, a) => (ReflState::Walk(next), a),
                ReflectOutcome::Done(_) => (ReflState::Done, halt(obs)),
            },
            ReflState::Done => (ReflState::Done, halt(obs)),
        }
    }
    fn declared_states(&self) -> Vec<ReflState> {
        let mut out = vec![ReflState::Done];
        for w in reflect_walk_states() {
            out.push(ReflState::Walk(w));
        }
        out
    }
}

/// Reverse the bit order in place; the LSB ends up where the MSB was. The
/// descriptor's anchor and significance are updated to match.
pub fn reflect(world: &mut GridWorld, tape: &mut CounterTape) -> Result<Metrics, CounterError> {
    let n = base_len(world, tape);
    assert!(n >= 1, "reflect requires a well-formed counter");
    let ctl = ReflectController {
        geom: TapeGeom::of(tape),
    };
    world.robot = tape.anchor;
    let out = run(world, &ctl, RunConfig::budget(1_000_000));
    if !out.halted {
        return Err(CounterError::Stuck);
    }
    tape.anchor = tape.base_cell(n - 1);
    tape.significance = tape.significance.opposite();
    Ok(out.metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::coord;

    fn tape_at_origin() -> CounterTape {
        CounterTape::vertical(coord(0, 0), Dir::Left)
    }

    fn world_with_value(tape: &CounterTape, value: u64) -> GridWorld {
        let mut world = GridWorld::new();
        let bits = if value == 0 { 1 } else { 64 - value.leading_zeros() as usize };
        for k in 0..bits {
            world.set_pixel(tape.base_cell(k), PixelState::Tile);
            if value >> k & 1 == 1 {
                world.set_pixel(tape.bit_cell(k), PixelState::Tile);
            }
        }
        world.robot = tape.anchor;
        world
    }

    #[test]
    fn create_then_read_zero() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        create(&mut world, &tape).unwrap();
        assert_eq!(read_value(&world, &tape), 0);
        assert_eq!(base_len(&world, &tape), 1);
    }

    #[test]
    fn create_collides_on_occupied_pixel() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        world.set_pixel(coord(0, 0), PixelState::Tile);
        assert_eq!(create(&mut world, &tape), Err(CounterError::Collision));
    }

    #[test]
    fn fig5_increment_and_decrement_layouts() {
        // Value 10 = 1010 on a 4-bit base line, vertical, bits to the left.
        let tape = tape_at_origin();
        let mut world = world_with_value(&tape, 10);
        let layout = |w: &GridWorld| -> Vec<(i64, i64)> {
            w.occupied_sorted().iter().map(|c| (c.x, c.y)).collect()
        };
        assert_eq!(
            layout(&world),
            vec![(-1, 1), (-1, 3), (0, 0), (0, 1), (0, 2), (0, 3)]
        );
        add(&mut world, &tape, 1).unwrap();
        assert_eq!(read_value(&world, &tape), 11);
        assert_eq!(
            layout(&world),
            vec![(-1, 0), (-1, 1), (-1, 3), (0, 0), (0, 1), (0, 2), (0, 3)]
        );
        add(&mut world, &tape, -1).unwrap();
        add(&mut world, &tape, -1).unwrap();
        assert_eq!(read_value(&world, &tape), 9);
        assert_eq!(
            layout(&world),
            vec![(-1, 0), (-1, 3), (0, 0), (0, 1), (0, 2), (0, 3)]
        );
    }

    #[test]
    fn increment_extends_base_line() {
        let tape = tape_at_origin();
        let mut world = world_with_value(&tape, 3);
        assert_eq!(base_len(&world, &tape), 2);
        add(&mut world, &tape, 1).unwrap();
        assert_eq!(read_value(&world, &tape), 4);
        assert_eq!(base_len(&world, &tape), 3);
    }

    #[test]
    fn underflow_is_an_error() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        create(&mut world, &tape).unwrap();
        assert_eq!(add(&mut world, &tape, -1), Err(CounterError::Underflow));
        add(&mut world, &tape, 3).unwrap();
        assert_eq!(add(&mut world, &tape, -4), Err(CounterError::Underflow));
        assert_eq!(read_value(&world, &tape), 3);
    }

    #[test]
    fn constant_deltas_work() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        create(&mut world, &tape).unwrap();
        add(&mut world, &tape, 5).unwrap();
        add(&mut world, &tape, 8).unwrap();
        add(&mut world, &tape, -6).unwrap();
        assert_eq!(read_value(&world, &tape), 7);
        assert_eq!(
            add(&mut world, &tape, 9),
            Err(CounterError::DeltaTooLarge(9))
        );
    }

    #[test]
    fn random_add_sequences_match_integer_arithmetic() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let tape = tape_at_origin();
            let mut world = GridWorld::new();
            create(&mut world, &tape).unwrap();
            let mut value = 0i64;
            for _ in 0..200 {
                let delta: i64 = if value == 0 { 1 } else { *[1i64, -1].choose(&mut rng).unwrap() };
                add(&mut world, &tape, delta).unwrap();
                value += delta;
                assert_eq!(read_value(&world, &tape), value as u64);
            }
        }
    }

    #[test]
    fn base_line_length_tracks_max_value() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        create(&mut world, &tape).unwrap();
        for i in 1..=64u64 {
            add(&mut world, &tape, 1).unwrap();
            let expect = 64 - i.leading_zeros() as usize;
            assert_eq!(base_len(&world, &tape), expect.max(1), "after {i} increments");
        }
    }

    #[test]
    fn amortized_constant_increment_cost() {
        let tape = tape_at_origin();
        let mut world = GridWorld::new();
        create(&mut world, &tape).unwrap();
        let k = 512u64;
        let mut total = 0u64;
        for _ in 0..k {
            total += add(&mut world, &tape, 1).unwrap().steps;
        }
        assert!(total <= 16 * k, "total {total} for {k} increments");
    }

    #[test]
    fn shift_translates_layout() {
        let tape0 = tape_at_origin();
        let mut world = world_with_value(&tape0, 10);
        let before = world.occupied_sorted();
        let mut tape = tape0;
        shift(&mut world, &mut tape, Dir::Up).unwrap();
        let expect: std::collections::BTreeSet<_> = before.iter().map(|c| c.offset(0, 1)).collect();
        assert_eq!(world.occupied_sorted(), expect);
        assert_eq!(tape.anchor, coord(0, 1));
        assert_eq!(read_value(&world, &tape), 10);
        shift(&mut world, &mut tape, Dir::Down).unwrap();
        assert_eq!(world.occupied_sorted(), before);
        assert_eq!(read_value(&world, &tape), 10);
    }

    #[test]
    fn shift_works_on_zero_and_one_bit() {
        for value in [0u64, 1] {
            let tape0 = tape_at_origin();
            let mut world = world_with_value(&tape0, value);
            let mut tape = tape0;
            shift(&mut world, &mut tape, Dir::Up).unwrap();
            assert_eq!(read_value(&world, &tape), value);
            assert_eq!(base_len(&world, &tape), 1);
        }
    }

    #[test]
    fn reflect_mirrors_bits_and_preserves_value() {
        for value in [0u64, 1, 2, 3, 5, 10, 37, 100, 1023] {
            let tape0 = tape_at_origin();
            let mut world = world_with_value(&tape0, value);
            let before = world.occupied_sorted();
            let n = base_len(&world, &tape0);
            let mut tape = tape0;
            reflect(&mut world, &mut tape).unwrap();
            assert_eq!(read_value(&world, &tape), value, "value {value}");
            assert_eq!(tape.significance, Dir::Down);
            assert_eq!(tape.anchor, coord(0, (n - 1) as i64));
            reflect(&mut world, &mut tape).unwrap();
            assert_eq!(world.occupied_sorted(), before, "value {value}");
            assert_eq!(tape, tape0);
            assert_eq!(read_value(&world, &tape), value);
        }
    }

    #[test]
    fn reflected_counter_still_counts() {
        let tape0 = tape_at_origin();
        let mut world = world_with_value(&tape0, 6);
        let mut tape = tape0;
        reflect(&mut world, &mut tape).unwrap();
        add(&mut world, &tape, 1).unwrap();
        assert_eq!(read_value(&world, &tape), 7);
        add(&mut world, &tape, 1).unwrap();
        assert_eq!(read_value(&world, &tape), 8);
        add(&mut world, &tape, -3).unwrap();
        assert_eq!(read_value(&world, &tape), 5);
    }
}

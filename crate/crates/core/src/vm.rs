//! The finite-automaton execution engine: observation, transition, movement
//! and the three complexity metrics.
//!
//! A controller is a deterministic finite automaton over 3x3 observations.
//! Controllers are written as hierarchical state machines whose state types
//! carry only bounded data (phases, directions, small countdowns, carried
//! bits). `declared_states` enumerates the full state set up front; the
//! trace audit asserts that every state observed in a run is a member.

use crate::grid::{bounding_rect_of, Coord, Dir, GridWorld, PixelState, Polyomino};
use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use thiserror::Error;

/// Compass direction used to index the 8-neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Compass {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

pub const COMPASS: [Compass; 8] = [
    Compass::N,
    Compass::NE,
    Compass::E,
    Compass::SE,
    Compass::S,
    Compass::SW,
    Compass::W,
    Compass::NW,
];

impl Compass {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Compass::N => (0, 1),
            Compass::NE => (1, 1),
            Compass::E => (1, 0),
            Compass::SE => (1, -1),
            Compass::S => (0, -1),
            Compass::SW => (-1, -1),
            Compass::W => (-1, 0),
            Compass::NW => (-1, 1),
        }
    }

    pub fn from_dir(d: Dir) -> Compass {
        match d {
            Dir::Up => Compass::N,
            Dir::Right => Compass::E,
            Dir::Down => Compass::S,
            Dir::Left => Compass::W,
        }
    }
}

/// Read-only snapshot of the current pixel and its 8 surrounding pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub center: PixelState,
    neighbors: [PixelState; 8],
}

impl Observation {
    pub fn capture(world: &GridWorld) -> Observation {
        let r = world.robot;
        let mut neighbors = [PixelState::Empty; 8];
        for (i, c) in COMPASS.iter().enumerate() {
            let (dx, dy) = c.delta();
            neighbors[i] = world.pixel(r.offset(dx, dy));
        }
        Observation {
            center: world.pixel(r),
            neighbors,
        }
    }

    pub fn at(self, c: Compass) -> PixelState {
        let idx = COMPASS.iter().position(|&k| k == c).unwrap();
        self.neighbors[idx]
    }

    pub fn tile_at(self, c: Compass) -> bool {
        self.at(c) == PixelState::Tile
    }

    pub fn tile_toward(self, d: Dir) -> bool {
        self.tile_at(Compass::from_dir(d))
    }

    pub fn center_tile(self) -> bool {
        self.center == PixelState::Tile
    }
}

/// One move of the robot. `Stay` and `Halt` are artifact conveniences that
/// stand in for the extra states the paper would spend on termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Step(Dir),
    Stay,
    Halt,
}

/// Result of one transition: the new state of the current pixel plus a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub write: PixelState,
    pub mv: Move,
}

/// Convenience constructors used by every controller.
pub fn act(write: PixelState, mv: Move) -> Action {
    Action { write, mv }
}

pub fn go(obs: Observation, d: Dir) -> Action {
    act(obs.center, Move::Step(d))
}

pub fn stay(obs: Observation) -> Action {
    act(obs.center, Move::Stay)
}

pub fn halt(obs: Observation) -> Action {
    act(obs.center, Move::Halt)
}

pub fn write_and_go(s: PixelState, d: Dir) -> Action {
    act(s, Move::Step(d))
}

/// A deterministic finite-state controller.
pub trait Controller {
    type State: Copy + Eq + Hash + Debug;

    fn initial(&self) -> Self::State;

    fn transition(&self, state: Self::State, obs: Observation) -> (Self::State, Action);

    /// The declared finite state set. Must not depend on any input shape;
    /// its size is a constant for the algorithm (O(c) for scaling by c).
    fn declared_states(&self) -> Vec<Self::State>;

    fn state_name(state: &Self::State) -> String {
        format!("{state:?}").replace(' ', "")
    }
}

/// Step count, additional-space count and peak auxiliary-tile count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    pub steps: u64,
    pub additional_space: u64,
    pub tile_complexity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: u64,
    pub state: String,
    pub pos: Coord,
    pub write: PixelState,
    pub mv: Move,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("step budget of {0} exhausted before the controller halted")]
    BudgetExhausted(u64),
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub metrics: Metrics,
    pub halted: bool,
    pub trace: Option<Vec<TraceRecord>>,
    /// Distinct state names observed during the run.
    pub observed_states: HashSet<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub budget: u64,
    pub trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: 200_000_000,
            trace: false,
        }
    }
}

impl RunConfig {
    pub fn budget(budget: u64) -> RunConfig {
        RunConfig {
            budget,
            trace: false,
        }
    }

    pub fn traced(budget: u64) -> RunConfig {
        RunConfig {
            budget,
            trace: true,
        }
    }
}

/// Drive one controller to halt (or budget exhaustion) on a world.
///
/// Metrics are accounted against the bounding rectangle of the occupied set
/// captured at run start: `additional_space` counts visited pixels outside
/// it, `tile_complexity` is the peak of `|occupied| - N0`.
pub fn run<C: Controller>(world: &mut GridWorld, controller: &C, cfg: RunConfig) -> RunOutcome {
    let n0 = world.tile_count() as i64;
    let rect0 = bounding_rect_of(world.occupied());
    let mut state = controller.initial();
    let mut metrics = Metrics::default();
    let mut halted = false;
    let mut trace = if cfg.trace { Some(Vec::new()) } else { None };
    let mut observed_states = HashSet::new();
    observed_states.insert(C::state_name(&state));

    let mut visited: HashSet<Coord> = HashSet::new();
    let mut outside = 0u64;
    let mut peak_extra = 0i64;
    let inside = |c: Coord| match rect0 {
        Some((lo, hi)) => c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y,
        None => false,
    };
    let mut visit = |c: Coord, outside: &mut u64| {
        if visited.insert(c) && !inside(c) {
            *outside += 1;
        }
    };
    visit(world.robot, &mut outside);

    while metrics.steps < cfg.budget {
        let obs = Observation::capture(world);
        let (next, action) = controller.transition(state, obs);
        metrics.steps += 1;
        world.set_pixel(world.robot, action.write);
        if let Some(t) = trace.as_mut() {
            t.push(TraceRecord {
                step: metrics.steps,
                state: C::state_name(&state),
                pos: world.robot,
                write: action.write,
                mv: action.mv,
            });
        }
        state = next;
        observed_states.insert(C::state_name(&state));
        match action.mv {
            Move::Step(d) => {
                world.robot = world.robot.step(d);
                visit(world.robot, &mut outside);
            }
            Move::Stay => {}
            Move::Halt => {
                halted = true;
            }
        }
        let extra = world.tile_count() as i64 - n0;
        peak_extra = peak_extra.max(extra);
        if halted {
            break;
        }
    }

    metrics.additional_space = outside;
    metrics.tile_complexity = peak_extra.max(0) as u64;
    RunOutcome {
        metrics,
        halted,
        trace,
        observed_states,
    }
}

/// Place the robot on the canonical start tile of `p` (minimal (y, x)) and
/// return the ready world. The model does not fix a start; the caller must
/// put the robot on some tile of P, and this is the convention used by the
/// command-line driver.
pub fn world_on(p: &Polyomino) -> GridWorld {
    let start = p
        .tiles()
        .iter()
        .copied()
        .min_by_key(|c| (c.y, c.x))
        .unwrap();
    GridWorld::with_polyomino(p, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::coord;

    /// Writes a tile and walks right `k` times, then halts.
    struct WalkRight {
        k: u8,
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    struct Count(u8);

    impl Controller for WalkRight {
        type State = Count;

        fn initial(&self) -> Count {
            Count(0)
        }

        fn transition(&self, s: Count, obs: Observation) -> (Count, Action) {
            if s.0 < self.k {
                (Count(s.0 + 1), act(PixelState::Tile, Move::Step(Dir::Right)))
            } else {
                (s, halt(obs))
            }
        }

        fn declared_states(&self) -> Vec<Count> {
            (0..=self.k).map(Count).collect()
        }
    }

    #[test]
    fn step_semantics_and_metrics() {
        let mut world = GridWorld::new();
        let outcome = run(&mut world, &WalkRight { k: 3 }, RunConfig::traced(100));
        assert!(outcome.halted);
        assert_eq!(outcome.metrics.steps, 4);
        assert_eq!(world.robot, coord(3, 0));
        assert!(world.is_tile(coord(0, 0)));
        assert!(world.is_tile(coord(2, 0)));
        // Empty world start: every visited pixel is outside the (empty)
        // input rectangle.
        assert_eq!(outcome.metrics.additional_space, 4);
        assert_eq!(outcome.metrics.tile_complexity, 3);
    }

    #[test]
    fn immediate_halt_costs_one_step() {
        struct HaltNow;
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        struct Only;
        impl Controller for HaltNow {
            type State = Only;
            fn initial(&self) -> Only {
                Only
            }
            fn transition(&self, s: Only, obs: Observation) -> (Only, Action) {
                (s, halt(obs))
            }
            fn declared_states(&self) -> Vec<Only> {
                vec![Only]
            }
        }
        let p = Polyomino::new([coord(0, 0)]).unwrap();
        let mut world = world_on(&p);
        let out = run(&mut world, &HaltNow, RunConfig::budget(10));
        assert!(out.halted);
        assert_eq!(out.metrics.steps, 1);
        assert_eq!(out.metrics.additional_space, 0);
        assert_eq!(out.metrics.tile_complexity, 0);
    }

    #[test]
    fn walk_right_from_single_tile_counts_outside_pixels() {
        let p = Polyomino::new([coord(0, 0)]).unwrap();
        let mut world = world_on(&p);
        struct Walker;
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        struct St(u8);
        impl Controller for Walker {
            type State = St;
            fn initial(&self) -> St {
                St(0)
            }
            fn transition(&self, s: St, obs: Observation) -> (St, Action) {
                if s.0 < 5 {
                    (St(s.0 + 1), go(obs, Dir::Right))
                } else {
                    (s, halt(obs))
                }
            }
            fn declared_states(&self) -> Vec<St> {
                (0..=5).map(St).collect()
            }
        }
        let out = run(&mut world, &Walker, RunConfig::budget(100));
        assert!(out.halted);
        assert_eq!(out.metrics.additional_space, 5);
        assert_eq!(out.metrics.tile_complexity, 0);
    }

    #[test]
    fn observation_snapshot() {
        let p = Polyomino::new([coord(0, 0)]).unwrap();
        let world = world_on(&p);
        let obs = Observation::capture(&world);
        assert!(obs.center_tile());
        for c in COMPASS {
            assert!(!obs.tile_at(c));
        }

        let mut w2 = GridWorld::new();
        w2.set_pixel(coord(0, 0), PixelState::Tile);
        w2.robot = coord(1, 0);
        let obs2 = Observation::capture(&w2);
        assert!(!obs2.center_tile());
        assert!(obs2.tile_at(Compass::W));
        for c in COMPASS {
            if c != Compass::W {
                assert!(!obs2.tile_at(c));
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_not_halted() {
        struct Forever;
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        struct Loop;
        impl Controller for Forever {
            type State = Loop;
            fn initial(&self) -> Loop {
                Loop
            }
            fn transition(&self, s: Loop, obs: Observation) -> (Loop, Action) {
                (s, go(obs, Dir::Up))
            }
            fn declared_states(&self) -> Vec<Loop> {
                vec![Loop]
            }
        }
        let mut world = GridWorld::new();
        let out = run(&mut world, &Forever, RunConfig::budget(17));
        assert!(!out.halted);
        assert_eq!(out.metrics.steps, 17);
    }

    #[test]
    fn determinism_identical_runs() {
        let p = Polyomino::new([coord(0, 0), coord(1, 0), coord(1, 1)]).unwrap();
        let mut w1 = world_on(&p);
        let mut w2 = world_on(&p);
        let o1 = run(&mut w1, &WalkRight { k: 7 }, RunConfig::traced(100));
        let o2 = run(&mut w2, &WalkRight { k: 7 }, RunConfig::traced(100));
        assert_eq!(o1.trace, o2.trace);
        assert_eq!(o1.metrics, o2.metrics);
        assert_eq!(w1.occupied_sorted(), w2.occupied_sorted());
        assert_eq!(w1.robot, w2.robot);
    }
}

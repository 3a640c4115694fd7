//! A single finite-state robot that evaluates and manipulates polyominoes on
//! an infinite square grid: bounding-box construction, tile and corner
//! counting with grid-encoded binary counters, Turing-machine-driven shape
//! transformation, and the space-efficient copy/reflect/rotate/scale
//! functions — all executed through a strict finite-automaton VM with
//! instrumented time, space and tile complexity.

pub mod counter;
pub mod gen;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod turing;
pub mod vm;

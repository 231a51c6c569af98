//! Symbolic computation of monodromy-orbit invariants for line-arrangement
//! Hamiltonians: free-group word calculus, a truncated free Lie algebra with
//! Hall basis, orbit depth / nilpotence class / derived length reports,
//! parabolic germ arithmetic and Godbillon-Vey sequences.

pub mod expr;
pub mod freegroup;
pub mod germs;
pub mod gv;
pub mod lie;
pub mod orbit;

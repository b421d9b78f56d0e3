//! Exact convex geometry, graded semigroups, toric section counts, Okounkov
//! bodies, multilinear forms, surface positivity and function-field heights.

pub mod bigcone;
pub mod exactgeom;
pub mod forms;
pub mod gvf;
pub mod linalg;
pub mod lp;
pub mod okounkov;
pub mod rational;
pub mod roots;
pub mod semigroups;
pub mod toric;

pub use rational::{Rat, RatVector};

//! Stabbing axis-aligned rectangles with horizontal (and vertical) segments.
//!
//! The crate models a stabbing instance as weighted set cover over a finite
//! family of candidate segments and provides:
//!
//! * exact geometry over rationals ([`geom`]) and the canonical candidate
//!   family ([`candidates`]),
//! * the set-cover engine ([`cover`]): exact simplex for the LP relaxation,
//!   branch-and-bound, greedy baselines and the two-family decomposition,
//! * x-laminar families and the shifted dyadic snapping ([`laminar`]),
//! * shallow-cell complexity measurements ([`scc`]),
//! * the LP-relative pipeline for horizontal and horizontal-vertical
//!   stabbing ([`approx`]),
//! * instance generators and the 3D piercing lift ([`forge`]),
//! * hardness gadget compilers ([`hardness`]).
//!
//! All coordinates are exact [`Rational`]s.

pub mod approx;
pub mod bitset;
pub mod candidates;
pub mod cover;
pub mod error;
pub mod forge;
pub mod geom;
pub mod hardness;
pub mod io;
pub mod laminar;
pub mod rational;
pub mod scc;

pub use error::{Error, Result};
pub use geom::{
    canonicalize_solution, stabs, verify_solution, Objective, Orientation, Rect, Segment,
    Solution, StabInstance, VerifyReport,
};
pub use rational::Rational;

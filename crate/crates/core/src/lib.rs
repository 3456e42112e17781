//! Exact-arithmetic engine for transferable-utility coalitional games.
//!
//! Games are dense tables of rationals over coalition bitmasks. On top of them
//! the crate provides class membership tests, an exact simplex solver and
//! double-description polyhedra, the classical solution concepts, and the
//! factorization of each solution through elementary games together with a
//! checker that the factorization reproduces the directly computed solution.

pub mod classes;
pub mod decomposition;
pub mod error;
pub mod game;
pub mod polyhedra;
pub mod rational;
pub mod solutions;

pub use error::{Error, Result};
pub use game::{coalitions, multi_player_coalitions, nonempty_coalitions, Allocation, Coalition, Game, MobiusCoeffs, SetFunction};
pub use rational::Rational;

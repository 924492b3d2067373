//! Pedersen commitments over prime-order groups, with the correctness,
//! hiding and binding games written as executable experiments.
//!
//! Every experiment is a pure function of the group, the adversary and a
//! source of [`coins`]. Replaying a [`coins::RandomTape`] reproduces a run
//! bit for bit, which lets the [`engine`] count successes exactly over all
//! tapes of the toy group and compare two games tape by tape.

#![no_std]

extern crate alloc;

pub mod adversary;
pub mod coins;
pub mod engine;
pub mod experiments;
pub mod group;
pub mod pedersen;
pub mod prime;
pub mod protocol;

pub use coins::{Coins, Domain, RandomTape, SeededCoins, TapeError};
pub use engine::{EngineError, ExactProbability};
pub use experiments::{ExperimentError, ExperimentOutcome, Game, Transcript};
pub use group::{validate_group, Backend, Group, GroupDescription, GroupElement, GroupError, Scalar};
pub use pedersen::{CommitmentPair, CommitmentScheme, Pedersen};

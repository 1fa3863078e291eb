//! Turing machines with emitted output digits, and the constructions that
//! surround the halting, printing and circle-free decision problems: an
//! interpreter, description numbers, many-one reductions, diagonal
//! refuters, a fixed-point combinator and computable reals.

pub mod codec;
pub mod corpus;
pub mod diag;
pub mod embed;
pub mod exec;
pub mod machine;
pub mod reals;
pub mod reduce;

pub use codec::{decode, encode, parse_text, render, specialize, DescriptionNumber};
pub use exec::{classify, run, universal, Budget, RunOutcome, Verdict};
pub use machine::{Builder, Configuration, Convention, Machine, Move, Rule};

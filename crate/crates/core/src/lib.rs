//! Domination and bondage analysis on random graphs.
//!
//! The crate has three layers:
//!
//! * **Graphs and randomness** ([`graph`], [`bitset`]): bitset-backed
//!   immutable graphs, unordered pair sets, seeded/streamed randomness, and
//!   the `G(n,p)` / `G(n,m)` / edge-process samplers with two file formats.
//! * **Exact solvers** ([`domination`], [`bondage`]): branch-and-bound
//!   domination number, dominating-set counting and enumeration, bondage
//!   number search, exact-rational damage calculus, and certified bondage
//!   lower bounds from top-damage sums.
//! * **Analysis** ([`formula`], [`logspace`], [`experiment`]): log-space
//!   evaluation of the counting formulas that predict where the domination
//!   number of `G(n,p)` concentrates, plus a reproducible experiment harness
//!   with CSV/JSONL output.
//!
//! The `bondlab` binary (see [`cli`]) exposes all of it behind subcommands.

pub mod bitset;
pub mod bondage;
pub mod cli;
pub mod domination;
pub mod error;
pub mod experiment;
pub mod formula;
pub mod graph;
pub mod logspace;

pub use error::{Error, Result};

//! Exact counting of linear regions of maxout networks.
//!
//! Everything runs over rationals. Layers are turned into arrangements of
//! argmax cells, counted by enumeration, by the Möbius function of their
//! intersection poset, and dually by the upper vertices of Minkowski sums of
//! lifted points.
//!
//! Runnable examples, one per capability (`cargo run --example <name>`):
//!
//! - `bounds`: closed-form shallow, deep and earlier bounds
//! - `worked_example`: face numbers of a two-unit layer, enumerated and via the poset
//! - `shallow_construction`: layers attaining the shallow bound, with and without biases
//! - `deep_construction`: the folding construction and its exact region count on a line
//! - `sample_layer`: seeded generic layers with simplicity certificates
//! - `poset`: intersection poset, `psi` and Möbius values
//! - `minkowski`: vertex and upper-vertex classification of a sum
//! - `identities`: the randomized identity suites
//! - `polyhedra`: dimension, recession data and Euler characteristic

pub mod arrangement;
pub mod bounds;
pub mod budget;
pub mod cli;
pub mod construct;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod minkowski;
pub mod network;
pub mod rational;
pub mod verify;

#![allow(clippy::needless_range_loop)]
pub mod cli;
pub mod expr;
pub mod geometry;
pub mod integrate;
pub mod jet;
pub mod mechanics;

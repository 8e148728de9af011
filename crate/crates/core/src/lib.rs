//! Massey products of pro-p group presentations via unipotent representations,
//! together with Hilbert-symbol arithmetic over Q for triple Massey products of
//! Kummer characters.

pub mod fp;
pub mod words;
pub mod magnus;
pub mod massey;
pub mod unipotent;
pub mod galois_q;
pub mod cli;

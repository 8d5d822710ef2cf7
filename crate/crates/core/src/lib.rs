//! Generator and runtime for correctly rounded elementary functions over
//! parametric minifloat formats `F(n, ebits)`.
//!
//! One polynomial per function targets the round-to-odd result in
//! `F(n + 2, ebits)`. Rounding that result (or any value in its odd interval)
//! to `F(k, ebits)` with a standard mode is then correctly rounded for every
//! `ebits + 1 < k <= n`.
//!
//! Pipeline: [`oracle`] gives exact rounding decisions, [`intervals`] turns
//! them into odd intervals in the evaluation format H, [`polygen`] solves an
//! exact LP per piece with counterexample-guided sampling, [`funcgen`]
//! evaluates the result, and [`verify`] checks it exhaustively.

pub mod artifact;
pub mod cli;
pub mod error;
pub mod formats;
pub mod funcgen;
pub mod hfloat;
pub mod intervals;
pub mod oracle;
pub mod polygen;
pub mod rational;
pub mod reduction;
pub mod rounding;
pub mod verify;

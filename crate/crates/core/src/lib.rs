//! Exhaustive counting over finite fields: zero kernel (observable) pairs,
//! reachable pairs, unimodular pencils, completable matrix blocks and simple
//! linear maps, together with the exact closed forms that count them.

pub mod census;
pub mod commands;
pub mod conjecture;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod linalg;
pub mod parallel;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElement, FieldSpec};
pub use linalg::{MatrixFq, SubspaceBasis};
pub use poly::{PolyFq, PolyMatrix, SmithForm};

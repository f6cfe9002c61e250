//! Greedy signed-sum approximation of real targets by moment sequences,
//! with certified arbitrary-precision decisions.

pub mod analysis;
pub mod conditions;
pub mod error;
pub mod exactnum;
pub mod greedy;
pub mod moments;
pub mod scalar;
pub mod vectorwalk;

pub use error::{Error, Result};
pub use exactnum::{PrecisionInterval, PrecisionPolicy, Rational, TargetExpr};
pub use greedy::{GreedyRun, GreedyTrace};
pub use moments::SequenceSpec;
pub use scalar::{Hp128, HpFloat, Scalar};

/// Exact window check and bookkeeping inequality.
pub type Section33Exact = conditions::Section33<Rational>;
pub type Section33F64 = conditions::Section33<f64>;
/// Vector walks at double and at 128-bit fixed precision.
pub use vectorwalk::{Walk64, WalkHp};
pub type PlanarVector64 = vectorwalk::PlanarVector<f64>;
pub type PlanarVectorHp = vectorwalk::PlanarVector<Hp128>;

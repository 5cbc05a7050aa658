pub mod angle;
pub mod catalog;
pub mod census;
pub mod cyclic;
pub mod exact;
pub mod numeric;
pub mod quadratic;
pub mod report;
pub mod search;
pub mod scalar;

pub use num_rational::BigRational;
pub use quadratic::Scalar;

pub type RationalPoint = exact::Point<BigRational>;
pub type QuadPoint = exact::Point<Scalar>;
pub type FloatPoint = exact::Point<f64>;

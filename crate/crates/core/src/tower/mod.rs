//! Field towers, their elements and truncated arithmetic.

mod desc;
mod element;
mod hensel;
mod reshuffle;
pub(crate) mod value;

pub use desc::{LevelPrec, Precision, TowerDesc};
pub use element::{gen_by_name, gen_name, uniformiser, BaseCoeff, Element};

pub use value::Gen;
pub use hensel::{hensel_lift, mth_root, Poly};
pub use reshuffle::{reshuffle, unshuffle};

//! Rational incomplete Mackey functors, stored as Lewis diagrams.

mod functor;
pub mod induction;
pub mod iso;
pub mod normalizer;
pub mod oracle;
mod represented;
pub mod split;

pub use functor::{is_morphism, MackeyError, MackeyFunctor, MackeyViolation};
pub use represented::{burnside_coords, burnside_element, burnside_mackey, orbit_basis, represented_mackey};

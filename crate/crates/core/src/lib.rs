//! Exact computations with transfer systems, incomplete Burnside rings, and
//! rational incomplete Mackey functors of finite groups.

pub mod burnside;
pub mod dot;
pub mod group;
pub mod insep;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mackey;
pub mod named;
pub mod orbit;
pub mod span;
pub mod transfer;

pub use group::{ElemSet, FiniteGroup, GroupError};
pub use lattice::{SubgroupId, SubgroupLattice};
pub use linalg::{Matrix, Q};
pub use orbit::{orbit_product, OrbitSum};
pub use transfer::{Relation, TransferError, TransferSystem};

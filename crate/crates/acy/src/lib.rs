//! Almost Calabi-Yau algebras of SU(3) ADE graphs and their Hochschild,
//! cyclic and Hochschild-cohomology dimensions, computed exactly.

pub mod algebra;
pub mod cells;
pub mod cli;
pub mod homology;
pub mod linalg;
pub mod quiver;
pub mod scalar;
pub mod series;

//! Combinatorial maps, their cylinder embeddings and duals.

mod dual;
mod embedding;
mod planar;
mod refine;

pub use dual::{dual, DualMap};
pub use embedding::{wrap_angle, wrap_signed, CylinderEmbedding};
pub use planar::{CombMap, MapParts, PlanarMap};
pub use refine::{insert_vertices, Refinement};

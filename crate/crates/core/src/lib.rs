//! Smith diagrams of doubly marked planar maps with edge conductances.
//!
//! A map with marked vertices `v0`, `v1` is solved for the voltage `h`
//! (0 at `v0`, 1 at `v1`) and its harmonic conjugate `w` on the dual, defined
//! modulo the flow strength `eta`. Each edge becomes the rectangle swept by
//! its `w`-interval and `h`-interval, and the rectangles tile the cylinder
//! `R/etaZ × [0, 1]`.
//!
//! - [`map`]: half-edge maps, duals, a priori cylinder embeddings, refinement
//! - [`electrical`]: voltage, flow, the conjugate and its closure on dual cycles
//! - [`tiling`]: the diagram, its validation and SVG output
//! - [`walk`]: random walks, exact conditional hitting and winding laws,
//!   Wilson's algorithm, exit-law couplings
//! - [`mated_crt`]: mated-CRT maps from correlated Brownian excursions
//! - [`convergence`]: cylinder lattices, affine fits, curve distances
//! - [`verify`]: every exact law on one map, as a report
//! - [`io`] and [`cli`]: JSON documents (schema `smith/1`) and the `smith` binary
//!
//! ```
//! use smith_embedding::fixtures::parallel_map;
//! use smith_embedding::tiling::tile;
//!
//! let (map, emb) = parallel_map(&[1.0, 2.0]);
//! let t = tile(&map, Some(&emb)).unwrap();
//! assert!((t.voltage.eta - 3.0).abs() < 1e-12);
//! assert_eq!(t.diagram.rects.len(), 2);
//! ```

pub mod cli;
pub mod convergence;
pub mod electrical;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod map;
pub mod mated_crt;
pub mod tiling;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};

//! Grand-Schnyder structures on 3,4-angulations of the square, and the
//! straight-line and orthogonal grid drawings they induce.

pub mod augment;
pub mod bend;
pub mod classical;
pub mod corpus;
pub mod dag;
pub mod drawing;
pub mod dual;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod labeling;
pub mod map;
pub mod ortho;
pub mod primal;
pub mod structure;

pub use error::{Error, Result};
pub use map::{build_map, dual_map, MapSpec, PlanarMap};

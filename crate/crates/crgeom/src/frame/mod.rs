//! Θ-frame tensor calculus on the complex hyperbolic model.

pub mod coords;
pub mod geometry;
pub mod index;

pub use coords::{frame_brackets, CoordField};
pub use geometry::{
    christoffel_from_koszul, compare_christoffel, einstein_check, flat_inverse_metric, flat_metric,
    ChristoffelTable, FrameGeometry,
};
pub use index::FrameIndices;
pub mod tensor;

pub use tensor::{
    curvature, frame_apply, monomial_fun, ricci, zero_fun, FrameTensor, FrameTensorWire, Fun,
    Symmetry,
};

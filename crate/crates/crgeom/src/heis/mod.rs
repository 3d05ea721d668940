//! The flat Heisenberg model: polynomials, frame fields, tensors and the input parser.

pub mod frame;
pub mod parse;
pub mod poly;
pub mod random;
pub mod tensor;

pub use frame::{check_frame_relations, HeisFrame, VectorField};
pub use parse::{parse_expression, ParseError};
pub use poly::{Field, HeisPoly, HeisPolyWire, IndexError, Mono};
pub use random::{random_poly, random_sym2};
pub use tensor::{Channel, TensorPoly};

//! Operator algebra: commutative polynomials in `Δ_b, T` and the channel rewriting engine.

pub mod gjms;
pub mod nc;
pub mod oppoly;

pub use gjms::{c_k, gjms_product, product_of_shifts, qpoly, QMode};
pub use nc::{
    check_commutation_on, check_rule_on, d_operator, eval_chain, eval_expr, nc_apply,
    obstruction_closed_form, NcExpr, NcNormal, NcNormalWire, NcOp, ObstructionFormula, RuleTable,
    Shape, Source, TagTensors, PSI_SHAPES, SCALAR_SHAPES,
};
pub use oppoly::{OpMono, OpPoly, OpPolyWire};

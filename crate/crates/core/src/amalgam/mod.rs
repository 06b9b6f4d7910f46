//! Maps into the circle, composition checks and fiber products.

mod fiber;
mod hoehn;
mod maps;

pub use fiber::{fiber_product_circle, FiberProduct, Pt};
pub use hoehn::{check_verdict, dichotomy_sets, family_shift, hoehn_check, DichotomyFailure, Side, Verdict};
pub use maps::{closed_preimage, compare, compose_check, compose_unit, lift_of_unit, turn, ArcMap, CircleMap, Comparison, Mismatch};

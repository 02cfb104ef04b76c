//! Delta operations, delta application and variant generation.

mod apply;
mod ops;

pub use apply::{
    apply_delta, generate_variant, model_set, touch_summary, ApplicationError,
    ApplicationErrorReason, TouchSet,
};
pub use ops::{Action, Delta, DeltaOperation, DeltaTarget, ElementKind, OperationKind, TargetMode};

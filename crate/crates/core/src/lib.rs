//! Two-zero trace codes over finite fields: construction, exhaustive weight
//! enumeration, dual-code counts and the checks that tie them together.

pub mod arith;
pub mod codes;
pub mod error;
pub mod gf;
pub mod params;
pub mod report;
pub mod sw;
pub mod verify;
pub mod weights;

pub use codes::{CodeSpec, Role, TraceCode};
pub use error::{Error, Result};
pub use gf::{Elem, FieldTower, TraceLevel};
pub use params::{Budgets, TwoZeroParams};
pub use weights::{EnumOptions, Strategy, WeightDistribution};
pub use report::ReportRecord;
pub use verify::{ScanRecord, Summary};

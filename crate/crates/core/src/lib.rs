//! Exact arithmetic for linear binary quadratic forms over P^1 and the
//! double covers, bidegrees, limits, and Picard bookkeeping attached to
//! them.

pub mod binform;
pub mod covers;
pub mod hirzebruch;
pub mod lbqf;
pub mod error;
pub mod limits;
pub mod mpoly;
pub mod parse;
pub mod picard;
pub mod scalars;
pub mod verify;

pub use binform::{BinForm, ProjPoint};
pub use error::{Error, Result};
pub use scalars::{BaseTag, Field, Scalar};

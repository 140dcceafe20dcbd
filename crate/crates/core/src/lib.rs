//! Exact arithmetic for elliptic surfaces over `k(T)`.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod factor;
pub mod field;
pub mod laurent;
pub mod localfibre;
pub mod modelfile;
pub mod poly;
pub mod ratfunc;
pub mod search;
pub mod surface;
pub mod sweep;
pub mod transforms;
pub mod weierstrass;

pub use error::{Error, Result};
pub use field::{Field, FieldElem, Value};
pub use localfibre::{KodairaType, LocalResult, Place};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use surface::{analyze, SurfaceReport};
pub use weierstrass::WModel;

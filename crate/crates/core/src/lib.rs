//! Construction, validation, and decoding of CSS quantum LDPC codes built
//! from parity-check pairs with all-ones product, together with a Monte
//! Carlo depolarizing-channel harness.

pub mod alist;
pub mod binmat;
pub mod css;
pub mod decoder;
pub mod descriptor;
pub mod distance;
pub mod error;
pub mod fg;
pub mod gf2ext;
pub mod gf4;
pub mod gfp;
pub mod graph;
pub mod presets;
pub mod qc;
pub mod sim;
pub mod validation;

pub use binmat::{BinaryMatrix, RowSpace};
pub use css::CssCode;
pub use error::{Error, Result};
pub use gf4::Gf4;

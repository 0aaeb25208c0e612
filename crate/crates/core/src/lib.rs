pub mod algebra;
pub mod equivariant;
pub mod error;
pub mod grouprep;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod modules;
pub mod options;
pub mod par;
pub mod scalars;
pub mod theorems;

pub use error::{Error, Result};
pub use options::Options;

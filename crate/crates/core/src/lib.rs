pub mod assembly;
pub mod caps;
pub mod corpus;
pub mod cyclotomic;
pub mod deloc;
pub mod dnc;
pub mod error;
pub mod grp;
pub mod gspace;
pub mod io;
pub mod linalg;
pub mod nervecoh;
pub mod pushpair;

pub use caps::Caps;
pub use error::{Error, Result};

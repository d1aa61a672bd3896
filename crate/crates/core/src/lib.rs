pub mod bogomolov;
pub mod cohomology;
pub mod constructors;
mod error;
pub mod frobenius;
pub mod group;
pub mod groupfile;
pub mod gz_classify;
pub mod rationality;
pub mod verify;
pub mod zlinalg;

pub use error::{Error, Result};
pub use group::{Group, GroupError, Perm, Subgroup};

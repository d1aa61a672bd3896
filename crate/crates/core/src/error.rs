use thiserror::Error;

use crate::bogomolov::BogomolovError;
use crate::cohomology::CohomologyError;
use crate::constructors::ConstructError;
use crate::frobenius::FrobeniusError;
use crate::group::GroupError;
use crate::groupfile::GroupFileError;
use crate::gz_classify::GzError;
use crate::rationality::RationalityError;
use crate::zlinalg::LinalgError;

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Gz(#[from] GzError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Bogomolov(#[from] BogomolovError),
    #[error(transparent)]
    Rationality(#[from] RationalityError),
    #[error(transparent)]
    GroupFile(#[from] GroupFileError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

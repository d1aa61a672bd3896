//! JSON exchange format for permutation groups.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupError, Perm};

pub const MAX_DEGREE: usize = 5000;

#[derive(Debug, Error)]
pub enum GroupFileError {
    #[error("degree {0} exceeds {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("generator {index} is not a permutation of 0..{degree}")]
    InvalidPermutation { index: usize, degree: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed group file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    /// 0-based image arrays
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl GroupFile {
    pub fn from_group(name: impl Into<String>, g: &Group, metadata: Option<serde_json::Value>) -> Self {
        GroupFile {
            name: name.into(),
            degree: g.degree(),
            generators: g
                .generators()
                .iter()
                .map(|p| p.images().iter().map(|&x| x as usize).collect())
                .collect(),
            metadata,
        }
    }

    pub fn validate(&self) -> Result<(), GroupFileError> {
        if self.degree > MAX_DEGREE {
            return Err(GroupFileError::DegreeTooLarge(self.degree));
        }
        for (index, g) in self.generators.iter().enumerate() {
            let mut seen = vec![false; self.degree];
            let ok = g.len() == self.degree
                && g.iter().all(|&x| x < self.degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(GroupFileError::InvalidPermutation {
                    index,
                    degree: self.degree,
                });
            }
        }
        Ok(())
    }

    pub fn to_group(&self) -> Result<Group, GroupFileError> {
        self.validate()?;
        let gens = self
            .generators
            .iter()
            .map(|g| Perm::from_usize(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Group::from_generators(self.degree, gens)?)
    }

    pub fn from_json(s: &str) -> Result<Self, GroupFileError> {
        let f: GroupFile = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group files serialize")
    }

    pub fn read(path: &Path) -> Result<Self, GroupFileError> {
        let s = std::fs::read_to_string(path).map_err(|source| GroupFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&s)
    }

    pub fn write(&self, path: &Path) -> Result<(), GroupFileError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| GroupFileError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{metacyclic, symmetric};

    #[test]
    fn round_trip() {
        let g = metacyclic(7, 3, 2).unwrap();
        let f = GroupFile::from_group("C7:C3", &g, None);
        let back = GroupFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let h = back.to_group().unwrap();
        assert_eq!((h.order(), h.exponent()), (21, 21));
        assert_eq!(GroupFile::from_group("S4", &symmetric(4).unwrap(), None).to_group().unwrap().order(), 24);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = r#"{"name": "x", "degree": 3, "generators": [[0, 0, 1]]}"#;
        assert!(matches!(
            GroupFile::from_json(bad),
            Err(GroupFileError::InvalidPermutation { index: 0, degree: 3 })
        ));
        let big = format!(r#"{{"name": "x", "degree": {}, "generators": []}}"#, MAX_DEGREE + 1);
        assert!(matches!(GroupFile::from_json(&big), Err(GroupFileError::DegreeTooLarge(_))));
        assert!(GroupFile::from_json(r#"{"name": "x"}"#).is_err());
    }
}

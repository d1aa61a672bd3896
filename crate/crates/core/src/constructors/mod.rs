//! Builders for the group families used throughout the crate, with
//! parameter validation and mechanical relation checks.

mod families;
pub mod fq;
mod matrices;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupError, Perm};

pub use families::{
    cyclic_extension, gz_type, metacyclic, metacyclic_presented, nonsolvable_type_i,
    nonsolvable_type_ii, quaternion_generalized, CyclicExtension, Presented,
};
pub use fq::{Fe, Fq, FqMat, MatrixGroup};
pub use matrices::{
    affine_binary_icosahedral, affine_group, binary_icosahedral, double_cover_type, g_plus,
    g_plus_psi, lemma_matrices, rep_phi, rep_psi, sl2, sl2_matrix_group, verify_g_plus, verify_lemma_4_10,
    BinaryIcosahedral, CoverType, GPlus, LemmaMatrices, RepReport,
};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("parameter congruence violated: {0}")]
    ParameterCongruenceViolated(String),
    #[error("bad order {0}")]
    BadOrder(u64),
    #[error("F_{0} has no primitive 5th root of unity")]
    NoFifthRoot(u64),
    #[error("characteristic {0} is not allowed here")]
    BadCharacteristic(u64),
    #[error("no scalar with the required square exists in F_{0}")]
    NoSuchScalar(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("not a non-split central extension: {0}")]
    NotACentralExtension(String),
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One named pass/fail check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: String::new(),
        }
    }

    pub fn with_detail(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub(crate) fn require_all(checks: &[Check]) -> Result<(), ConstructError> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(ConstructError::RelationViolation(c.name.clone())),
        None => Ok(()),
    }
}

/// Relation bookkeeping over element indices of a group.
pub(crate) struct Relations<'a> {
    pub g: &'a Group,
    pub checks: Vec<Check>,
}

impl<'a> Relations<'a> {
    pub fn new(g: &'a Group) -> Self {
        Relations { g, checks: Vec::new() }
    }

    pub fn eq(&mut self, name: &str, lhs: usize, rhs: usize) {
        self.checks.push(Check::new(name, lhs == rhs));
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        self.g.pow(x, e)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.g.mul(a, b)
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.g.conj(g, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    #[serde(rename = "IV")]
    IV,
    #[serde(rename = "NS-I")]
    NsI,
    #[serde(rename = "NS-II")]
    NsII,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::I => "I",
            Family::II => "II",
            Family::III => "III",
            Family::IV => "IV",
            Family::NsI => "NS-I",
            Family::NsII => "NS-II",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "I" | "METACYCLIC" => Family::I,
            "II" => Family::II,
            "III" => Family::III,
            "IV" => Family::IV,
            "NS-I" | "NSI" => Family::NsI,
            "NS-II" | "NSII" => Family::NsII,
            _ => return Err(format!("unknown family {s}")),
        })
    }
}

/// Parameters of one presentation. Unused parameters are left at their defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationParams {
    pub family: Family,
    #[serde(default = "one")]
    pub m: u64,
    #[serde(default = "one")]
    pub n: u64,
    #[serde(default = "one")]
    pub r: u64,
    #[serde(default = "one")]
    pub l: u64,
    #[serde(default = "one")]
    pub k: u64,
    #[serde(default = "one")]
    pub t: u64,
    #[serde(default)]
    pub p: u64,
}

fn one() -> u64 {
    1
}

pub(crate) fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut acc, mut b, mut e) = (1u128, b as u128 % m as u128, e);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

impl PresentationParams {
    pub fn new(family: Family) -> Self {
        PresentationParams {
            family,
            m: 1,
            n: 1,
            r: 1,
            l: 1,
            k: 1,
            t: 1,
            p: 0,
        }
    }

    pub fn metacyclic(m: u64, n: u64, r: u64) -> Self {
        PresentationParams {
            m,
            n,
            r,
            ..Self::new(Family::I)
        }
    }

    pub fn with(mut self, key: &str, value: u64) -> Self {
        match key {
            "m" => self.m = value,
            "n" => self.n = value,
            "r" => self.r = value,
            "l" => self.l = value,
            "k" => self.k = value,
            "t" => self.t = value,
            "p" => self.p = value,
            _ => {}
        }
        self
    }

    /// Order of the group the parameters describe.
    pub fn order(&self) -> u64 {
        let (m, n) = (self.m, self.n);
        match self.family {
            Family::I => m * n,
            Family::II => 2 * m * n,
            Family::III => 8 * m * n,
            Family::IV => 16 * m * n,
            Family::NsI => m * n * self.p * (self.p * self.p - 1),
            Family::NsII => 2 * m * n * self.p * (self.p * self.p - 1),
        }
    }

    fn violated(&self, what: &str) -> ConstructError {
        ConstructError::ParameterCongruenceViolated(format!(
            "{what} (family {}, m={}, n={}, r={}, l={}, k={}, t={}, p={})",
            self.family, self.m, self.n, self.r, self.l, self.k, self.t, self.p
        ))
    }

    fn check_metacyclic(&self) -> Result<(), ConstructError> {
        let (m, n, r) = (self.m, self.n, self.r);
        if m == 0 || n == 0 {
            return Err(self.violated("m and n must be positive"));
        }
        if pow_mod(r, n, m) != 1 % m {
            return Err(self.violated("r^n != 1 mod m"));
        }
        let rm1 = (r % m + m - 1) % m;
        let x = ((n as u128 * rm1 as u128) % m as u128) as u64;
        if num_integer::gcd(m, x) != 1 {
            return Err(self.violated("gcd(m, n(r-1)) != 1"));
        }
        Ok(())
    }

    fn check_p(&self) -> Result<(), ConstructError> {
        let p = self.p;
        if p < 5 || !crate::group::is_prime(p) {
            return Err(self.violated("p must be a prime >= 5"));
        }
        if num_integer::gcd(self.m * self.n, p * (p * p - 1)) != 1 {
            return Err(self.violated("gcd(mn, p(p^2-1)) != 1"));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConstructError> {
        self.check_metacyclic()?;
        let (m, n, r, l, k, t) = (self.m, self.n, self.r, self.l, self.k, self.t);
        match self.family {
            Family::I => Ok(()),
            Family::II => {
                let u = n.trailing_zeros();
                if u < 2 {
                    return Err(self.violated("n must be divisible by 4"));
                }
                if pow_mod(l, 2, m) != 1 % m {
                    return Err(self.violated("l^2 != 1 mod m"));
                }
                if k == 0 || pow_mod(r, k - 1, m) != 1 % m {
                    return Err(self.violated("r^(k-1) != 1 mod m"));
                }
                if (k + 1) % (1 << u) != 0 {
                    return Err(self.violated("k != -1 mod 2^u"));
                }
                if pow_mod(k, 2, n) != 1 % n {
                    return Err(self.violated("k^2 != 1 mod n"));
                }
                Ok(())
            }
            Family::III => {
                if n % 2 == 0 || n % 3 != 0 {
                    return Err(self.violated("n must be odd and divisible by 3"));
                }
                Ok(())
            }
            Family::IV => {
                if n % 2 == 0 || n % 3 != 0 {
                    return Err(self.violated("n must be odd and divisible by 3"));
                }
                if k == 0 || pow_mod(r, k - 1, m) != 1 % m {
                    return Err(self.violated("r^(k-1) != 1 mod m"));
                }
                if pow_mod(t, 2, m) != 1 % m {
                    return Err(self.violated("t^2 != 1 mod m"));
                }
                if (k + 1) % 3 != 0 {
                    return Err(self.violated("k != -1 mod 3"));
                }
                if pow_mod(k, 2, n) != 1 % n {
                    return Err(self.violated("k^2 != 1 mod n"));
                }
                Ok(())
            }
            Family::NsI | Family::NsII => self.check_p(),
        }
    }
}

pub fn cyclic(n: usize) -> Group {
    let cyc: Vec<usize> = (0..n.max(1)).collect();
    let g = Perm::from_cycles(n.max(1), &[&cyc]).expect("valid cycle");
    Group::from_generators(n.max(1), vec![g]).expect("cyclic group")
}

/// Direct product of cyclic groups of the given orders, on disjoint points.
pub fn abelian(orders: &[usize]) -> Group {
    orders.iter().fold(Group::trivial(1), |acc, &n| {
        if n <= 1 {
            acc
        } else {
            let d = acc.degree() + n;
            let mut gens: Vec<Perm> = acc.generators().iter().map(|g| g.embed(0, d)).collect();
            gens.push(cyclic(n).generators()[0].embed(acc.degree(), d));
            Group::from_generators(d, gens).expect("abelian group")
        }
    })
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> Result<Group, ConstructError> {
    if n < 3 {
        return Err(ConstructError::BadOrder(2 * n as u64));
    }
    let rot: Vec<u32> = (0..n).map(|i| ((i + 1) % n) as u32).collect();
    let refl: Vec<u32> = (0..n).map(|i| ((n - i) % n) as u32).collect();
    Ok(Group::from_generators(
        n,
        vec![Perm::from_images(rot)?, Perm::from_images(refl)?],
    )?)
}

pub fn symmetric(n: usize) -> Result<Group, ConstructError> {
    if n < 2 {
        return Ok(Group::trivial(1));
    }
    let cyc: Vec<usize> = (0..n).collect();
    Ok(Group::from_generators(
        n,
        vec![Perm::from_cycles(n, &[&cyc])?, Perm::from_cycles(n, &[&[0, 1]])?],
    )?)
}

pub fn alternating(n: usize) -> Result<Group, ConstructError> {
    if n < 3 {
        return Ok(Group::trivial(n.max(1)));
    }
    let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
    Ok(Group::from_generators(
        n,
        vec![Perm::from_cycles(n, &[&[0, 1, 2]])?, Perm::from_cycles(n, &[&long])?],
    )?)
}

/// Left-regular group from a normal-form multiplication, with the map from
/// normal forms to element indices.
pub(crate) fn nf_group<F>(n: usize, gens: &[usize], mul: F) -> Result<(Group, Vec<usize>), ConstructError>
where
    F: Fn(usize, usize) -> usize,
{
    let g = Group::from_multiplication(n, gens, mul)?;
    if g.order() != n {
        return Err(ConstructError::RelationViolation(format!(
            "normal forms generate {} of {n} elements",
            g.order()
        )));
    }
    let mut index = vec![0; n];
    for i in 0..n {
        index[g.element(i).apply(0)] = i;
    }
    Ok((g, index))
}

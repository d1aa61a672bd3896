use std::fmt;
use std::str::FromStr;

use num_integer::{gcd, lcm, Integer};
use serde::{Deserialize, Serialize};

use super::RationalityError;
use crate::group::factorize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum FieldSpec {
    Q,
    Qzeta(u64),
    C,
    Fq(u64),
    /// the rational function field `F_q(t)`
    CharP(u64),
}

impl FromStr for FieldSpec {
    type Err = RationalityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalityError::BadSpec(s.to_string());
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s.trim() {
            "Q" => Ok(FieldSpec::Q),
            "C" => Ok(FieldSpec::C),
            t => {
                let (head, tail) = t.split_once(':').ok_or_else(bad)?;
                match head {
                    "Qzeta" => Ok(FieldSpec::Qzeta(num(tail)?)),
                    "Fq" => Ok(FieldSpec::Fq(num(tail)?)),
                    "charp" => Ok(FieldSpec::CharP(num(tail)?)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::C => write!(f, "C"),
            FieldSpec::Qzeta(m) => write!(f, "Qzeta:{m}"),
            FieldSpec::Fq(q) => write!(f, "Fq:{q}"),
            FieldSpec::CharP(q) => write!(f, "charp:{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldModel {
    pub name: String,
    pub characteristic: u64,
    pub is_infinite: bool,
    pub is_number_field: bool,
    pub spec: FieldSpec,
}

/// `ζ_m` and `ζ_{2m}` generate the same field for odd `m`.
fn normalize(m: u64) -> u64 {
    if m.is_odd() {
        2 * m
    } else {
        m
    }
}

fn prime_power(q: u64) -> Option<u64> {
    match factorize(q).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

/// Whether `ker((Z/L)^× → (Z/m)^×)` is cyclic.
fn unit_kernel_cyclic(l: u64, m: u64) -> bool {
    let kernel: Vec<u64> = (1..l).filter(|&u| gcd(u, l) == 1 && u % m == 1 % m).collect();
    let size = kernel.len() as u64;
    kernel.iter().any(|&u| {
        let mut x = u;
        let mut k = 1u64;
        while x != 1 % l {
            x = x * u % l;
            k += 1;
        }
        k == size
    })
}

impl FieldModel {
    pub fn contains_zeta(&self, m: u64) -> Tri {
        if m == 0 {
            return Tri::Unknown;
        }
        if self.characteristic > 0 && m.is_multiple_of(self.characteristic) {
            return Tri::No;
        }
        match &self.spec {
            FieldSpec::Q => (2 % m == 0).into(),
            FieldSpec::C => Tri::Yes,
            FieldSpec::Qzeta(k) => normalize(*k).is_multiple_of(normalize(m)).into(),
            FieldSpec::Fq(q) | FieldSpec::CharP(q) => ((q - 1) % m == 0).into(),
        }
    }

    /// Whether `k(ζ_{2^r})/k` is cyclic.
    pub fn cyclic_cyclotomic_ext(&self, r: u32) -> Tri {
        if self.contains_zeta(1 << r) == Tri::Yes {
            return Tri::Yes;
        }
        match &self.spec {
            FieldSpec::Q => (r <= 2).into(),
            FieldSpec::C => Tri::Yes,
            FieldSpec::Qzeta(k) => {
                let m = normalize(*k);
                unit_kernel_cyclic(lcm(m, 1 << r), m).into()
            }
            // extensions of constants are cyclic
            FieldSpec::Fq(_) | FieldSpec::CharP(_) => Tri::Yes,
        }
    }
}

pub fn builtin_field(spec: &FieldSpec) -> Result<FieldModel, RationalityError> {
    let bad = || RationalityError::BadSpec(spec.to_string());
    let (characteristic, is_infinite, is_number_field) = match spec {
        FieldSpec::Q => (0, true, true),
        FieldSpec::C => (0, true, false),
        FieldSpec::Qzeta(m) => {
            if *m == 0 {
                return Err(bad());
            }
            (0, true, true)
        }
        FieldSpec::Fq(q) => (prime_power(*q).ok_or_else(bad)?, false, false),
        FieldSpec::CharP(q) => (prime_power(*q).ok_or_else(bad)?, true, false),
    };
    let name = match spec {
        FieldSpec::Q => "Q".to_string(),
        FieldSpec::C => "C".to_string(),
        FieldSpec::Qzeta(m) => format!("Q(zeta_{})", normalize(*m)),
        FieldSpec::Fq(q) => format!("F_{q}"),
        FieldSpec::CharP(q) => format!("F_{q}(t)"),
    };
    Ok(FieldModel {
        name,
        characteristic,
        is_infinite,
        is_number_field,
        spec: spec.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FieldModel {
        builtin_field(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn rationals() {
        let q = f("Q");
        assert_eq!(q.contains_zeta(2), Tri::Yes);
        assert_eq!(q.contains_zeta(4), Tri::No);
        assert_eq!(q.cyclic_cyclotomic_ext(2), Tri::Yes);
        assert_eq!(q.cyclic_cyclotomic_ext(3), Tri::No);
        assert!(q.is_number_field && q.is_infinite);
    }

    #[test]
    fn cyclotomic() {
        let k = f("Qzeta:8");
        assert_eq!(k.cyclic_cyclotomic_ext(4), Tri::Yes);
        assert_eq!(k.contains_zeta(8), Tri::Yes);
        assert_eq!(k.contains_zeta(4), Tri::Yes);
        assert_eq!(k.contains_zeta(3), Tri::No);
        let k = f("Qzeta:3");
        assert_eq!(k.contains_zeta(6), Tri::Yes);
        assert_eq!(k.cyclic_cyclotomic_ext(2), Tri::Yes);
        assert_eq!(k.cyclic_cyclotomic_ext(3), Tri::No);
        // Q(ζ_5, ζ_8)/Q(ζ_5): kernel ≅ (Z/8)^× restricted to 1 mod 5
        assert_eq!(f("Qzeta:5").cyclic_cyclotomic_ext(3), Tri::No);
        assert_eq!(f("Qzeta:4").cyclic_cyclotomic_ext(5), Tri::Yes);
    }

    #[test]
    fn positive_characteristic() {
        let k = f("Fq:9");
        assert!(!k.is_infinite);
        assert_eq!(k.characteristic, 3);
        assert_eq!(k.contains_zeta(8), Tri::Yes);
        assert_eq!(k.contains_zeta(3), Tri::No);
        let t = f("charp:2");
        assert!(t.is_infinite);
        assert_eq!(t.contains_zeta(8), Tri::No);
        assert_eq!(t.cyclic_cyclotomic_ext(3), Tri::Yes);
        assert_eq!(f("C").contains_zeta(1024), Tri::Yes);
        assert!("Qzeta:x".parse::<FieldSpec>().is_err());
        assert!(builtin_field(&FieldSpec::Fq(6)).is_err());
    }
}

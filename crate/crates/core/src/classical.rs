//! Family specifications, closed-form orders for every family of finite
//! simple groups, and generating sets for the groups that are built
//! concretely.
//!
//! Text grammar (case-insensitive): `sl(3,2)`, `psl(2,49)`, `su(3,3)`,
//! `psu(3,5)`, `sp(6,2)`, `psp(8,2)`, `omega(7,3)`, `omega+(8,2)`,
//! `omega-(8,2)`, `g2(q)`, `f4(q)`, `e6(q)`, `e7(q)`, `e8(q)`, `2e6(q)`,
//! `3d4(q)`, `2b2(q)` or `sz(q)`, `2g2(q)` or `r(q)`, `2f4(q)`, `tits`,
//! `a(n)`, `s(n)`, `z(n)`, `d(n)` (dihedral of order `2n`), `q8`, and the
//! sporadic names `m11`, ..., `m`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{enumerate_group, GenSet, GroupElement, GroupError, Permutation};
use crate::ring::{prime_power, Modulus, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("invalid group specification: {0}")]
    Input(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The 26 sporadic groups, in increasing order.
pub const SPORADIC: [(&str, &str); 26] = [
    ("M11", "7920"),
    ("M12", "95040"),
    ("J1", "175560"),
    ("M22", "443520"),
    ("J2", "604800"),
    ("M23", "10200960"),
    ("HS", "44352000"),
    ("J3", "50232960"),
    ("M24", "244823040"),
    ("McL", "898128000"),
    ("He", "4030387200"),
    ("Ru", "145926144000"),
    ("Suz", "448345497600"),
    ("O'N", "460815505920"),
    ("Co3", "495766656000"),
    ("Co2", "42305421312000"),
    ("Fi22", "64561751654400"),
    ("HN", "273030912000000"),
    ("Ly", "51765179004000000"),
    ("Th", "90745943887872000"),
    ("Fi23", "4089470473293004800"),
    ("Co1", "4157776806543360000"),
    ("J4", "86775571046077562880"),
    ("Fi24'", "1255205709190661721292800"),
    ("B", "4154781481226426191177580544000000"),
    ("M", "808017424794512875886459904961710757005754368000000000"),
];

/// A group family with its parameters. Classical families take the matrix
/// dimension first (`Sp { dim: 6, q: 2 }` is `Sp(6,2)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilySpec {
    Alternating(u32),
    Symmetric(u32),
    Cyclic(u32),
    Dihedral(u32),
    Quaternion,
    SL { n: u32, q: u32 },
    PSL { n: u32, q: u32 },
    SU { n: u32, q: u32 },
    PSU { n: u32, q: u32 },
    Sp { dim: u32, q: u32 },
    PSp { dim: u32, q: u32 },
    /// `POmega(2n+1, q)`.
    OmegaOdd { dim: u32, q: u32 },
    OmegaPlus { dim: u32, q: u32 },
    OmegaMinus { dim: u32, q: u32 },
    G2(u32),
    F4(u32),
    E6(u32),
    E7(u32),
    E8(u32),
    TwistedE6(u32),
    TrialityD4(u32),
    Suzuki(u32),
    Ree(u32),
    ReeF4(u32),
    Tits,
    Sporadic(String),
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn q_pow(q: u32, e: u32) -> BigUint {
    Pow::pow(big(q as u64), e)
}

fn q_minus(q: u32, e: u32) -> BigUint {
    q_pow(q, e) - 1u32
}

fn q_plus(q: u32, e: u32) -> BigUint {
    q_pow(q, e) + 1u32
}

fn factorial(n: u32) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn check_prime_power(q: u32) -> Result<(u64, u32), ClassicalError> {
    prime_power(q as u64).ok_or_else(|| ClassicalError::Input(format!("q = {q} is not a prime power")))
}

/// `p^(odd)` check for the Suzuki and Ree families.
fn check_odd_power(q: u32, p: u64, family: &str) -> Result<(), ClassicalError> {
    match prime_power(q as u64) {
        Some((pp, f)) if pp == p && f % 2 == 1 && f >= 1 => Ok(()),
        _ => Err(ClassicalError::Input(format!("{family} needs q = {p}^(2k+1), got {q}"))),
    }
}

impl FamilySpec {
    /// The matrix group a projective spec is a quotient of, if any.
    pub fn lift(&self) -> Option<FamilySpec> {
        match *self {
            FamilySpec::PSL { n, q } => Some(FamilySpec::SL { n, q }),
            FamilySpec::PSU { n, q } => Some(FamilySpec::SU { n, q }),
            FamilySpec::PSp { dim, q } => Some(FamilySpec::Sp { dim, q }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        let bad = |msg: String| Err(ClassicalError::Input(msg));
        match self {
            FamilySpec::Alternating(n) | FamilySpec::Symmetric(n) if *n < 1 => bad(format!("degree {n} < 1")),
            FamilySpec::Cyclic(n) if *n < 1 => bad("Z(0) is not a group".into()),
            FamilySpec::Dihedral(n) if *n < 3 => bad(format!("dihedral parameter {n} < 3")),
            FamilySpec::SL { n, q } | FamilySpec::PSL { n, q } | FamilySpec::SU { n, q } | FamilySpec::PSU { n, q } => {
                check_prime_power(*q)?;
                if *n < 2 {
                    return bad(format!("dimension {n} < 2"));
                }
                Ok(())
            }
            FamilySpec::Sp { dim, q } | FamilySpec::PSp { dim, q } => {
                check_prime_power(*q)?;
                if *dim < 2 || dim % 2 == 1 {
                    return bad(format!("symplectic dimension {dim} must be even and >= 2"));
                }
                Ok(())
            }
            FamilySpec::OmegaOdd { dim, q } => {
                check_prime_power(*q)?;
                if *dim < 3 || dim % 2 == 0 {
                    return bad(format!("odd orthogonal dimension {dim} must be odd and >= 3"));
                }
                Ok(())
            }
            FamilySpec::OmegaPlus { dim, q } | FamilySpec::OmegaMinus { dim, q } => {
                check_prime_power(*q)?;
                if *dim < 4 || dim % 2 == 1 {
                    return bad(format!("even orthogonal dimension {dim} must be even and >= 4"));
                }
                Ok(())
            }
            FamilySpec::G2(q)
            | FamilySpec::F4(q)
            | FamilySpec::E6(q)
            | FamilySpec::E7(q)
            | FamilySpec::E8(q)
            | FamilySpec::TwistedE6(q)
            | FamilySpec::TrialityD4(q) => check_prime_power(*q).map(|_| ()),
            FamilySpec::Suzuki(q) => check_odd_power(*q, 2, "2B2"),
            FamilySpec::Ree(q) => check_odd_power(*q, 3, "2G2"),
            FamilySpec::ReeF4(q) => check_odd_power(*q, 2, "2F4"),
            FamilySpec::Sporadic(name) => {
                if SPORADIC.iter().any(|(n, _)| n == name) {
                    Ok(())
                } else {
                    bad(format!("unknown sporadic group {name}"))
                }
            }
            _ => Ok(()),
        }
    }

    /// ATLAS-style name, e.g. `L2(7)`, `U3(3)`, `S6(2)`, `O8+(2)`, `3D4(2)`.
    pub fn atlas_name(&self) -> String {
        match self {
            FamilySpec::Alternating(n) => format!("A{n}"),
            FamilySpec::Symmetric(n) => format!("S{n}"),
            FamilySpec::Cyclic(n) => format!("Z{n}"),
            FamilySpec::Dihedral(n) => format!("D{}", 2 * n),
            FamilySpec::Quaternion => "Q8".into(),
            FamilySpec::SL { n, q } => format!("SL{n}({q})"),
            FamilySpec::PSL { n, q } => format!("L{n}({q})"),
            FamilySpec::SU { n, q } => format!("SU{n}({q})"),
            FamilySpec::PSU { n, q } => format!("U{n}({q})"),
            FamilySpec::Sp { dim, q } => format!("Sp{dim}({q})"),
            FamilySpec::PSp { dim, q } => format!("S{dim}({q})"),
            FamilySpec::OmegaOdd { dim, q } => format!("O{dim}({q})"),
            FamilySpec::OmegaPlus { dim, q } => format!("O{dim}+({q})"),
            FamilySpec::OmegaMinus { dim, q } => format!("O{dim}-({q})"),
            FamilySpec::G2(q) => format!("G2({q})"),
            FamilySpec::F4(q) => format!("F4({q})"),
            FamilySpec::E6(q) => format!("E6({q})"),
            FamilySpec::E7(q) => format!("E7({q})"),
            FamilySpec::E8(q) => format!("E8({q})"),
            FamilySpec::TwistedE6(q) => format!("2E6({q})"),
            FamilySpec::TrialityD4(q) => format!("3D4({q})"),
            FamilySpec::Suzuki(q) => format!("Sz({q})"),
            FamilySpec::Ree(q) => format!("R({q})"),
            FamilySpec::ReeF4(q) => format!("2F4({q})"),
            FamilySpec::Tits => "2F4(2)'".into(),
            FamilySpec::Sporadic(name) => name.clone(),
        }
    }

    /// Family tag and integer parameters as stored in catalog files.
    pub fn family_params(&self) -> (&'static str, Vec<u32>) {
        match *self {
            FamilySpec::Alternating(n) => ("alternating", vec![n]),
            FamilySpec::Symmetric(n) => ("symmetric", vec![n]),
            FamilySpec::Cyclic(n) => ("cyclic", vec![n]),
            FamilySpec::Dihedral(n) => ("dihedral", vec![n]),
            FamilySpec::Quaternion => ("quaternion", vec![]),
            FamilySpec::SL { n, q } => ("sl", vec![n, q]),
            FamilySpec::PSL { n, q } => ("psl", vec![n, q]),
            FamilySpec::SU { n, q } => ("su", vec![n, q]),
            FamilySpec::PSU { n, q } => ("psu", vec![n, q]),
            FamilySpec::Sp { dim, q } => ("sp", vec![dim, q]),
            FamilySpec::PSp { dim, q } => ("psp", vec![dim, q]),
            FamilySpec::OmegaOdd { dim, q } => ("omega", vec![dim, q]),
            FamilySpec::OmegaPlus { dim, q } => ("omega+", vec![dim, q]),
            FamilySpec::OmegaMinus { dim, q } => ("omega-", vec![dim, q]),
            FamilySpec::G2(q) => ("g2", vec![q]),
            FamilySpec::F4(q) => ("f4", vec![q]),
            FamilySpec::E6(q) => ("e6", vec![q]),
            FamilySpec::E7(q) => ("e7", vec![q]),
            FamilySpec::E8(q) => ("e8", vec![q]),
            FamilySpec::TwistedE6(q) => ("2e6", vec![q]),
            FamilySpec::TrialityD4(q) => ("3d4", vec![q]),
            FamilySpec::Suzuki(q) => ("2b2", vec![q]),
            FamilySpec::Ree(q) => ("2g2", vec![q]),
            FamilySpec::ReeF4(q) => ("2f4", vec![q]),
            FamilySpec::Tits => ("tits", vec![]),
            FamilySpec::Sporadic(_) => ("sporadic", vec![]),
        }
    }

    /// Inverse of [`FamilySpec::family_params`]; `name` is used for sporadics.
    pub fn from_family_params(family: &str, params: &[u32], name: &str) -> Result<Self, ClassicalError> {
        let want = |k: usize| -> Result<(), ClassicalError> {
            if params.len() == k {
                Ok(())
            } else {
                Err(ClassicalError::Input(format!("family {family} takes {k} parameters, got {params:?}")))
            }
        };
        let spec = match family {
            "sporadic" => {
                want(0)?;
                FamilySpec::Sporadic(name.to_string())
            }
            "tits" => {
                want(0)?;
                FamilySpec::Tits
            }
            "quaternion" => {
                want(0)?;
                FamilySpec::Quaternion
            }
            _ => {
                let text = format!(
                    "{family}({})",
                    params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
                );
                text.parse()?
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Whether [`standard_generators`] can build this group.
    pub fn is_constructible(&self) -> bool {
        standard_generators(self).is_ok()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Quaternion => write!(f, "q8"),
            FamilySpec::Tits => write!(f, "tits"),
            FamilySpec::Sporadic(name) => write!(f, "{}", name.to_lowercase()),
            other => {
                let (fam, params) = other.family_params();
                let fam = match fam {
                    "alternating" => "a",
                    "symmetric" => "s",
                    "cyclic" => "z",
                    "dihedral" => "d",
                    x => x,
                };
                let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                write!(f, "{fam}({})", ps.join(","))
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = ClassicalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let bad = || ClassicalError::Input(format!("cannot parse group spec {text:?}"));
        if compact == "q8" {
            return Ok(FamilySpec::Quaternion);
        }
        if compact == "tits" || compact == "2f4(2)'" {
            return Ok(FamilySpec::Tits);
        }
        if let Some((name, _)) = SPORADIC.iter().find(|(n, _)| n.to_lowercase() == compact) {
            return Ok(FamilySpec::Sporadic(name.to_string()));
        }
        let (head, rest) = compact.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let params: Vec<u32> = inner
            .split(',')
            .map(|t| t.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let one = |f: fn(u32) -> FamilySpec| -> Result<FamilySpec, ClassicalError> {
            match params.as_slice() {
                [a] => Ok(f(*a)),
                _ => Err(bad()),
            }
        };
        let two = |f: fn(u32, u32) -> FamilySpec| -> Result<FamilySpec, ClassicalError> {
            match params.as_slice() {
                [a, b] => Ok(f(*a, *b)),
                _ => Err(bad()),
            }
        };
        let spec = match head {
            "a" | "alternating" => one(FamilySpec::Alternating)?,
            "s" | "symmetric" => one(FamilySpec::Symmetric)?,
            "z" | "cyclic" => one(FamilySpec::Cyclic)?,
            "d" | "dihedral" => one(FamilySpec::Dihedral)?,
            "sl" => two(|n, q| FamilySpec::SL { n, q })?,
            "psl" | "l" => two(|n, q| FamilySpec::PSL { n, q })?,
            "su" => two(|n, q| FamilySpec::SU { n, q })?,
            "psu" | "u" => two(|n, q| FamilySpec::PSU { n, q })?,
            "sp" => two(|dim, q| FamilySpec::Sp { dim, q })?,
            "psp" => two(|dim, q| FamilySpec::PSp { dim, q })?,
            "omega" | "pomega" => two(|dim, q| FamilySpec::OmegaOdd { dim, q })?,
            "omega+" | "pomega+" | "omegaplus" => two(|dim, q| FamilySpec::OmegaPlus { dim, q })?,
            "omega-" | "pomega-" | "omegaminus" => two(|dim, q| FamilySpec::OmegaMinus { dim, q })?,
            "g2" => one(FamilySpec::G2)?,
            "f4" => one(FamilySpec::F4)?,
            "e6" => one(FamilySpec::E6)?,
            "e7" => one(FamilySpec::E7)?,
            "e8" => one(FamilySpec::E8)?,
            "2e6" => one(FamilySpec::TwistedE6)?,
            "3d4" => one(FamilySpec::TrialityD4)?,
            "2b2" | "sz" => one(FamilySpec::Suzuki)?,
            "2g2" | "r" => one(FamilySpec::Ree)?,
            "2f4" => one(FamilySpec::ReeF4)?,
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Exact group order.
pub fn classical_order(spec: &FamilySpec) -> Result<BigUint, ClassicalError> {
    spec.validate()?;
    let gcd_div = |order: BigUint, d: u64| order / d;
    Ok(match *spec {
        FamilySpec::Alternating(n) => {
            if n < 2 {
                BigUint::one()
            } else {
                factorial(n) / 2u32
            }
        }
        FamilySpec::Symmetric(n) => factorial(n),
        FamilySpec::Cyclic(n) => big(n as u64),
        FamilySpec::Dihedral(n) => big(2 * n as u64),
        FamilySpec::Quaternion => big(8),
        FamilySpec::SL { n, q } => sl_order(n, q),
        FamilySpec::PSL { n, q } => gcd_div(sl_order(n, q), gcd_u64(n as u64, q as u64 - 1)),
        FamilySpec::SU { n, q } => su_order(n, q),
        FamilySpec::PSU { n, q } => gcd_div(su_order(n, q), gcd_u64(n as u64, q as u64 + 1)),
        FamilySpec::Sp { dim, q } => sp_order(dim / 2, q),
        FamilySpec::PSp { dim, q } => gcd_div(sp_order(dim / 2, q), gcd_u64(2, q as u64 - 1)),
        FamilySpec::OmegaOdd { dim, q } => gcd_div(sp_order(dim / 2, q), gcd_u64(2, q as u64 - 1)),
        FamilySpec::OmegaPlus { dim, q } => {
            let n = dim / 2;
            let body = q_pow(q, n * (n - 1)) * q_minus(q, n) * (1..n).map(|i| q_minus(q, 2 * i)).product::<BigUint>();
            let d = (q_minus(q, n) % 4u32).gcd(&big(4));
            body / d
        }
        FamilySpec::OmegaMinus { dim, q } => {
            let n = dim / 2;
            let body = q_pow(q, n * (n - 1)) * q_plus(q, n) * (1..n).map(|i| q_minus(q, 2 * i)).product::<BigUint>();
            let d = (q_plus(q, n) % 4u32).gcd(&big(4));
            body / d
        }
        FamilySpec::G2(q) => q_pow(q, 6) * q_minus(q, 6) * q_minus(q, 2),
        FamilySpec::F4(q) => q_pow(q, 24) * q_minus(q, 12) * q_minus(q, 8) * q_minus(q, 6) * q_minus(q, 2),
        FamilySpec::E6(q) => {
            let body = q_pow(q, 36)
                * [12, 9, 8, 6, 5, 2].iter().map(|&e| q_minus(q, e)).product::<BigUint>();
            body / gcd_u64(3, q as u64 - 1)
        }
        FamilySpec::E7(q) => {
            let body = q_pow(q, 63)
                * [18, 14, 12, 10, 8, 6, 2].iter().map(|&e| q_minus(q, e)).product::<BigUint>();
            body / gcd_u64(2, q as u64 - 1)
        }
        FamilySpec::E8(q) => {
            q_pow(q, 120) * [30, 24, 20, 18, 14, 12, 8, 2].iter().map(|&e| q_minus(q, e)).product::<BigUint>()
        }
        FamilySpec::TwistedE6(q) => {
            let body = q_pow(q, 36)
                * q_minus(q, 12)
                * q_plus(q, 9)
                * q_minus(q, 8)
                * q_minus(q, 6)
                * q_plus(q, 5)
                * q_minus(q, 2);
            body / gcd_u64(3, q as u64 + 1)
        }
        FamilySpec::TrialityD4(q) => {
            q_pow(q, 12) * (q_pow(q, 8) + q_pow(q, 4) + 1u32) * q_minus(q, 6) * q_minus(q, 2)
        }
        FamilySpec::Suzuki(q) => q_pow(q, 2) * q_plus(q, 2) * q_minus(q, 1),
        FamilySpec::Ree(q) => q_pow(q, 3) * q_plus(q, 3) * q_minus(q, 1),
        FamilySpec::ReeF4(q) => q_pow(q, 12) * q_plus(q, 6) * q_minus(q, 4) * q_plus(q, 3) * q_minus(q, 1),
        FamilySpec::Tits => classical_order(&FamilySpec::ReeF4(2))? / 2u32,
        FamilySpec::Sporadic(ref name) => {
            let (_, order) = SPORADIC.iter().find(|(n, _)| n == name).expect("validated");
            order.parse().expect("table entry")
        }
    })
}

fn sl_order(n: u32, q: u32) -> BigUint {
    q_pow(q, n * (n - 1) / 2) * (2..=n).map(|i| q_minus(q, i)).product::<BigUint>()
}

fn su_order(n: u32, q: u32) -> BigUint {
    let factors = (2..=n).map(|i| if i % 2 == 0 { q_minus(q, i) } else { q_plus(q, i) });
    q_pow(q, n * (n - 1) / 2) * factors.product::<BigUint>()
}

fn sp_order(n: u32, q: u32) -> BigUint {
    q_pow(q, n * n) * (1..=n).map(|i| q_minus(q, 2 * i)).product::<BigUint>()
}

/// Generators for the constructible families. Projective specs give
/// matrix-mod-scalar generators.
pub fn standard_generators(spec: &FamilySpec) -> Result<GenSet, ClassicalError> {
    spec.validate()?;
    let label = spec.to_string();
    let perm = |degree: usize, cycles: &[&[u32]]| -> Result<GroupElement, ClassicalError> {
        Ok(GroupElement::Perm(Permutation::from_cycles(degree, cycles)?))
    };
    let gens = match *spec {
        FamilySpec::Cyclic(n) => {
            let cycle: Vec<u32> = (0..n).collect();
            vec![perm(n as usize, &[&cycle])?]
        }
        FamilySpec::Symmetric(n) => {
            if n < 2 {
                vec![perm(n.max(1) as usize, &[])?]
            } else {
                let cycle: Vec<u32> = (0..n).collect();
                vec![perm(n as usize, &[&[0, 1]])?, perm(n as usize, &[&cycle])?]
            }
        }
        FamilySpec::Alternating(n) => {
            if n < 3 {
                vec![perm(n.max(1) as usize, &[])?]
            } else {
                // (0 1 2) with (0 .. n-1) for odd n, (1 .. n-1) for even n
                let cycle: Vec<u32> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
                vec![perm(n as usize, &[&[0, 1, 2]])?, perm(n as usize, &[&cycle])?]
            }
        }
        FamilySpec::Dihedral(n) => {
            let rot: Vec<u32> = (0..n).collect();
            let refl: Vec<Vec<u32>> = (1..n).filter(|&i| i < n - i).map(|i| vec![i, n - i]).collect();
            let refl_refs: Vec<&[u32]> = refl.iter().map(|c| c.as_slice()).collect();
            vec![perm(n as usize, &[&rot])?, perm(n as usize, &refl_refs)?]
        }
        FamilySpec::Quaternion => {
            let m = Modulus::integers(3).expect("3 is prime");
            vec![
                GroupElement::Matrix(SquareMatrix::from_rows(m, &[&[0, 1], &[-1, 0]]).map_err(GroupError::from)?),
                GroupElement::Matrix(SquareMatrix::from_rows(m, &[&[1, 1], &[1, -1]]).map_err(GroupError::from)?),
            ]
        }
        FamilySpec::SL { n, q } => sl_generators(n, q)?.into_iter().map(GroupElement::Matrix).collect(),
        FamilySpec::PSL { n, q } => sl_generators(n, q)?.into_iter().map(GroupElement::projective).collect(),
        FamilySpec::Sp { dim, q } => sp_generators(dim / 2, q)?.into_iter().map(GroupElement::Matrix).collect(),
        FamilySpec::PSp { dim, q } => {
            sp_generators(dim / 2, q)?.into_iter().map(GroupElement::projective).collect()
        }
        FamilySpec::SU { n, q } => su3_generators(n, q)?.into_iter().map(GroupElement::Matrix).collect(),
        FamilySpec::PSU { n, q } => su3_generators(n, q)?.into_iter().map(GroupElement::projective).collect(),
        _ => {
            return Err(ClassicalError::Unsupported(format!(
                "no concrete generators for {}; order formula only",
                spec.atlas_name()
            )))
        }
    };
    Ok(GenSet::new(label, gens)?)
}

fn field_for(q: u32) -> Result<Modulus, ClassicalError> {
    Modulus::field(q).map_err(|_| {
        ClassicalError::Unsupported(format!("matrices over GF({q}) (only prime fields and their quadratic extensions)"))
    })
}

/// Additive basis of `GF(q)` over its prime field, as element codes.
fn prime_basis(f: Modulus) -> Vec<u32> {
    match f.kind() {
        crate::ring::ModulusKind::Quadratic { p, .. } => vec![1, p],
        _ => vec![1],
    }
}

fn unit_matrix(f: Modulus, n: usize, i: usize, j: usize, t: u32) -> SquareMatrix {
    let mut m = SquareMatrix::identity(n, f);
    m.set(i, j, t);
    m
}

fn sl_generators(n: u32, q: u32) -> Result<Vec<SquareMatrix>, ClassicalError> {
    let f = field_for(q)?;
    let n = n as usize;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        for &t in &prime_basis(f) {
            out.push(unit_matrix(f, n, i, i + 1, t));
            out.push(unit_matrix(f, n, i + 1, i, t));
        }
    }
    Ok(out)
}

/// Root elements for the simple roots and their negatives, in the basis
/// `e_1..e_n, f_1..f_n` of the form `J = [[0, I], [-I, 0]]`.
fn sp_generators(n: u32, q: u32) -> Result<Vec<SquareMatrix>, ClassicalError> {
    let f = field_for(q)?;
    let n = n as usize;
    let dim = 2 * n;
    let mut out = Vec::new();
    for &t in &prime_basis(f) {
        for i in 0..n.saturating_sub(1) {
            // diag(A, A^-T) with A = I + t E_{i,i+1}, and its transpose
            let mut up = SquareMatrix::identity(dim, f);
            up.set(i, i + 1, t);
            up.set(n + i + 1, n + i, f.neg(t));
            out.push(up.clone());
            out.push(up.transpose());
        }
        out.push(unit_matrix(f, dim, n - 1, dim - 1, t));
        out.push(unit_matrix(f, dim, dim - 1, n - 1, t));
    }
    Ok(out)
}

/// The anti-diagonal Hermitian form.
pub fn hermitian_form(n: usize, f: Modulus) -> SquareMatrix {
    let mut h = SquareMatrix::zero(n, f);
    for i in 0..n {
        h.set(i, n - 1 - i, 1);
    }
    h
}

/// Whether `conj(A)^T H A = H` for the anti-diagonal form `H`.
pub fn preserves_hermitian_form(a: &SquareMatrix) -> bool {
    let h = hermitian_form(a.dim(), a.modulus());
    let lhs = a.conjugate().transpose().mat_mul(&h).and_then(|x| x.mat_mul(a));
    lhs.is_ok_and(|x| x == h)
}

/// Upper and lower unitriangular elements of `SU(3, q)`, thinned to a
/// generating subset of each unipotent subgroup.
fn su3_generators(n: u32, q: u32) -> Result<Vec<SquareMatrix>, ClassicalError> {
    if n != 3 {
        return Err(ClassicalError::Unsupported(format!("SU({n},{q}); only SU(3,q) is constructed")));
    }
    let (p, f_exp) = check_prime_power(q)?;
    if f_exp != 1 {
        return Err(ClassicalError::Unsupported(format!("SU(3,{q}) needs GF({q}^2) with {q} prime")));
    }
    if p == 2 {
        return Err(ClassicalError::Unsupported("SU(3,2) is solvable and not generated by root elements".into()));
    }
    let f = Modulus::quadratic(p as u32).expect("prime");
    let mut upper = Vec::new();
    for a in 0..f.size() {
        let norm = f.mul(a, f.frobenius(a));
        for b in 0..f.size() {
            // b + conj(b) + a conj(a) = 0
            if f.add(f.add(b, f.frobenius(b)), norm) != 0 {
                continue;
            }
            let mut m = SquareMatrix::identity(3, f);
            m.set(0, 1, a);
            m.set(0, 2, b);
            m.set(1, 2, f.neg(f.frobenius(a)));
            if !m.is_identity() {
                upper.push(m);
            }
        }
    }
    let upper = if f.size() <= crate::group::KEY_SYMBOLS {
        thin_generators(upper)?
    } else {
        // Q/Z(Q) is GF(q^2) via a, and Z(Q) is the trace-zero line in b.
        [1, p as u32, 0].iter().filter_map(|&a| upper.iter().find(|m| m.get(0, 1) == a).cloned()).collect()
    };
    let h = hermitian_form(3, f);
    let lower: Vec<SquareMatrix> =
        upper.iter().map(|u| h.mat_mul(u).and_then(|x| x.mat_mul(&h)).expect("same ring")).collect();
    Ok(upper.into_iter().chain(lower).collect())
}

/// Greedily keep the candidates not already generated by earlier picks.
fn thin_generators(candidates: Vec<SquareMatrix>) -> Result<Vec<SquareMatrix>, ClassicalError> {
    let mut chosen: Vec<SquareMatrix> = Vec::new();
    let mut current: Option<crate::group::EnumeratedGroup> = None;
    for c in candidates {
        let x = GroupElement::Matrix(c.clone());
        if current.as_ref().is_some_and(|g| g.index_of(&x).is_some()) {
            continue;
        }
        chosen.push(c);
        let gens = GenSet::new("thin", chosen.iter().cloned().map(GroupElement::Matrix).collect())?;
        current = Some(enumerate_group(&gens, 1 << 20)?);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center_and_projective, DEFAULT_ENUMERATION_CAP};

    fn order(s: &str) -> BigUint {
        classical_order(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn headline_orders() {
        assert_eq!(order("psp(6,2)"), big(1_451_520));
        assert_eq!(order("psp(8,2)"), big(47_377_612_800));
        assert_eq!(order("psp(6,3)"), big(4_585_351_680));
        assert_eq!(order("psl(2,7)"), big(168));
    }

    #[test]
    fn psu_3_17_matches_independent_evaluation() {
        let q: u64 = 17;
        let expected = q.pow(3) * (q * q - 1) * (q.pow(3) + 1) / gcd_u64(3, q + 1);
        assert_eq!(expected, 2_317_678_272);
        assert_eq!(order("psu(3,17)"), big(expected));
    }

    #[test]
    fn exceptional_and_twisted_orders() {
        assert_eq!(order("3d4(2)"), big(211_341_312));
        assert_eq!(order("g2(3)"), big(4_245_696));
        assert_eq!(order("sz(8)"), big(29_120));
        assert_eq!(order("r(27)"), big(10_073_444_472));
        assert_eq!(order("tits"), big(17_971_200));
        assert_eq!(order("omega+(8,2)"), big(174_182_400));
        assert_eq!(order("omega-(8,2)"), big(197_406_720));
        assert_eq!(order("omega(7,3)"), big(4_585_351_680));
        assert_eq!(order("psu(4,2)"), order("psp(4,3)"));
        assert_eq!(order("a(8)"), order("psl(4,2)"));
        assert_eq!(order("mcl"), big(898_128_000));
        assert_eq!(order("e6(2)"), "214841575522005575270400".parse().unwrap());
        assert_eq!(order("2e6(2)"), "76532479683774853939200".parse().unwrap());
        assert_eq!(order("f4(2)"), "3311126603366400".parse().unwrap());
    }

    #[test]
    fn projective_divisors_across_grid() {
        for n in 2..=4u32 {
            for q in [2u32, 3, 4, 5, 7, 8, 9] {
                let sl = order(&format!("sl({n},{q})"));
                let psl = order(&format!("psl({n},{q})"));
                assert_eq!(sl, psl * gcd_u64(n as u64, q as u64 - 1));
                let su = order(&format!("su({n},{q})"));
                let psu = order(&format!("psu({n},{q})"));
                assert_eq!(su, psu * gcd_u64(n as u64, q as u64 + 1));
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!("psl(2,6)".parse::<FamilySpec>().is_err());
        assert!("sz(4)".parse::<FamilySpec>().is_err());
        assert!("r(9)".parse::<FamilySpec>().is_err());
        assert!("sp(5,2)".parse::<FamilySpec>().is_err());
        assert!("x(3)".parse::<FamilySpec>().is_err());
        assert!("mcl".parse::<FamilySpec>().is_ok());
        assert_eq!("PSp( 6 , 2 )".parse::<FamilySpec>().unwrap(), FamilySpec::PSp { dim: 6, q: 2 });
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["sp(6,2)", "psp(8,2)", "sl(3,2)", "psl(2,49)", "psu(3,5)", "a(9)", "s(5)", "z(12)", "q8", "3d4(2)", "mcl", "tits"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            let (fam, params) = spec.family_params();
            assert_eq!(FamilySpec::from_family_params(fam, &params, &spec.atlas_name()).unwrap(), spec);
        }
    }

    fn enumerated_order(s: &str) -> u64 {
        let gens = standard_generators(&s.parse().unwrap()).unwrap();
        enumerate_group(&gens, DEFAULT_ENUMERATION_CAP).unwrap().order()
    }

    #[test]
    fn small_constructions_match_formulas() {
        for s in [
            "sl(2,3)", "sl(3,2)", "psl(2,7)", "sl(2,9)", "psl(2,9)", "psl(2,25)", "sp(4,2)", "sp(4,3)", "psp(4,3)",
            "sp(2,5)", "su(3,3)", "psu(3,3)", "a(5)", "a(6)", "a(7)", "s(5)", "z(12)", "d(8)", "q8", "psl(3,4)",
        ] {
            let expected: u64 = order(s).try_into().unwrap();
            assert_eq!(enumerated_order(s), expected, "{s}");
        }
    }

    #[test]
    fn su33_centre_and_projective_order() {
        let g = enumerate_group(&standard_generators(&"su(3,3)".parse().unwrap()).unwrap(), 100_000).unwrap();
        let info = center_and_projective(&g).unwrap();
        assert_eq!(info.projective_order, 6048);
    }

    #[test]
    fn generators_preserve_forms() {
        for (g, q) in [(1u32, 5u32), (2, 2), (3, 2), (2, 3), (4, 2), (2, 9)] {
            let gens = sp_generators(g, q).unwrap();
            for m in gens {
                assert!(m.symplectic_check(g as usize).unwrap(), "Sp({},{q})", 2 * g);
            }
        }
        for q in [3u32, 5, 7] {
            for m in su3_generators(3, q).unwrap() {
                assert!(preserves_hermitian_form(&m));
                assert_eq!(m.determinant().value(), 1);
            }
        }
    }

    #[test]
    fn unconstructible_families() {
        assert!(matches!(standard_generators(&"g2(3)".parse().unwrap()), Err(ClassicalError::Unsupported(_))));
        assert!(matches!(standard_generators(&"sl(2,8)".parse().unwrap()), Err(ClassicalError::Unsupported(_))));
        assert!(!FamilySpec::Sporadic("M22".into()).is_constructible());
    }
}

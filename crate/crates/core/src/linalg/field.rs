use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;

/// Exact scalars. Over a prime field the stored value is the canonical residue in `0..p`.
pub type Scalar = BigRational;

/// Base field of a computation: the rationals or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Prime(u64),
}

/// Largest supported prime; keeps every product of two residues inside `u128` comfortably
/// and every residue inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Brings an exact rational into canonical form for this field.
    pub fn normalize(&self, x: &Scalar) -> Result<Scalar, LinalgError> {
        match *self {
            FieldSpec::Rationals => Ok(x.clone()),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let num = x.numer().mod_floor(&pb).to_u64().expect("residue fits in u64");
                let den = x.denom().mod_floor(&pb).to_u64().expect("residue fits in u64");
                if den == 0 {
                    return Err(LinalgError::NotInvertibleModP { value: x.to_string(), p });
                }
                let v = mul_mod(num, inv_mod(den, p), p);
                Ok(Scalar::from_integer(BigInt::from(v)))
            }
        }
    }

    pub fn add_scalar(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match *self {
            FieldSpec::Rationals => a + b,
            FieldSpec::Prime(p) => {
                let v = (residue(a) + residue(b)) % p;
                Scalar::from_integer(BigInt::from(v))
            }
        }
    }

    pub fn mul_scalar(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match *self {
            FieldSpec::Rationals => a * b,
            FieldSpec::Prime(p) => Scalar::from_integer(BigInt::from(mul_mod(residue(a), residue(b), p))),
        }
    }

    pub fn neg_scalar(&self, a: &Scalar) -> Scalar {
        match *self {
            FieldSpec::Rationals => -a,
            FieldSpec::Prime(p) => {
                let r = residue(a);
                Scalar::from_integer(BigInt::from(if r == 0 { 0 } else { p - r }))
            }
        }
    }

    /// The image of a signed integer in the field.
    pub fn from_i64(&self, v: i64) -> Scalar {
        self.normalize(&Scalar::from_integer(BigInt::from(v)))
            .expect("integers are always representable")
    }
}

pub(crate) fn residue(x: &Scalar) -> u64 {
    debug_assert!(x.is_integer() && !x.is_negative());
    x.numer().to_u64().expect("canonical residue")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.parse().map_err(|_| LinalgError::Parse(format!("bad prime in field spec {s:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(LinalgError::Parse(format!("unknown field spec {s:?} (expected \"Q\" or \"Fp:p\")")))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"p/q"` or an integer string into an exact rational.
pub fn parse_rational(s: &str) -> Result<Scalar, LinalgError> {
    let t = s.trim();
    let bad = || LinalgError::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Scalar::from_integer(n))
    }
}

/// Canonical string form: integers as `"n"`, everything else as `"p/q"` in lowest terms.
pub fn format_rational(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

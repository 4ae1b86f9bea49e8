use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A non-negative rational, or infinity. `0 · ∞ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coeff {
    Fin(BigRational),
    Inf,
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff::Fin(BigRational::zero())
    }

    pub fn one() -> Coeff {
        Coeff::Fin(BigRational::one())
    }

    pub fn from_int(n: u64) -> Coeff {
        Coeff::Fin(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Coeff {
        Coeff::Fin(BigRational::new(n.into(), d.into()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Fin(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Fin(r) if r.is_one())
    }

    pub fn recip_of(n: &num_bigint::BigUint) -> Coeff {
        Coeff::Fin(BigRational::new(BigInt::one(), BigInt::from(n.clone())))
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Fin(a), Coeff::Fin(b)) => Coeff::Fin(a + b),
            _ => Coeff::Inf,
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Fin(a), Coeff::Fin(b)) => Coeff::Fin(a * b),
            (c, _) | (_, c) if c.is_zero() => Coeff::zero(),
            _ => Coeff::Inf,
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        &self + &o
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        &self * &o
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Inf => f.write_str("inf"),
            Coeff::Fin(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Coeff::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Coeff {
    type Err = String;
    fn from_str(s: &str) -> Result<Coeff, String> {
        let s = s.trim();
        if s == "inf" {
            return Ok(Coeff::Inf);
        }
        let parse = |x: &str| x.trim().parse::<BigInt>().map_err(|e| format!("bad coefficient `{s}`: {e}"));
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                BigRational::new(parse(n)?, d)
            }
            None => BigRational::from_integer(parse(s)?),
        };
        if r < BigRational::zero() {
            return Err("negative coefficient".into());
        }
        Ok(Coeff::Fin(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_except_zero() {
        assert_eq!(&Coeff::Inf * &Coeff::zero(), Coeff::zero());
        assert_eq!(&Coeff::zero() * &Coeff::Inf, Coeff::zero());
        assert_eq!(&Coeff::Inf + &Coeff::one(), Coeff::Inf);
        assert_eq!(&Coeff::Inf * &Coeff::ratio(1, 2), Coeff::Inf);
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "3", "1/6", "inf"] {
            assert_eq!(s.parse::<Coeff>().unwrap().to_string(), s);
        }
        assert_eq!("2/4".parse::<Coeff>().unwrap(), Coeff::ratio(1, 2));
        assert!("1/0".parse::<Coeff>().is_err());
    }
}

//! Arbitrary-precision scalars and binomial coefficients.
//!
//! Integers and rationals are backed by `num-bigint` / `num-rational`; this
//! module adds the binomial machinery and the integrality boundary every
//! counting formula goes through.

use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Default number of Pascal rows kept in the shared cache.
pub const DEFAULT_BINOM_ROWS: usize = 256;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// `q^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        assert!(!q.is_zero(), "zero raised to a negative power");
        num_traits::pow(q.recip(), e.unsigned_abs() as usize)
    }
}

/// Converts a rational that is supposed to be a count into an integer.
///
/// A fractional value here means a formula was transcribed wrong, so it is a
/// hard error rather than a rounding.
pub fn to_integer(q: &Rational, context: impl Into<String>) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::NonIntegral {
            context: context.into(),
            value: q.clone(),
        })
    }
}

/// Parses `"3"`, `"-1/2"` or `"6/4"` (reduced on parse).
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::InvalidParameter(format!("not a rational number: {s:?}")))
}

/// Pascal triangle cache for `0 <= n <= n_max`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = vec![BigInt::one(); n + 1];
            if n >= 2 {
                let prev = &rows[n - 1];
                for k in 1..n {
                    row[k] = &prev[k - 1] + &prev[k];
                }
            }
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Returns `None` when `n` is outside the cached range.
    pub fn get(&self, n: usize, k: usize) -> Option<BigInt> {
        let row = self.rows.get(n)?;
        Some(row.get(k).cloned().unwrap_or_else(BigInt::zero))
    }
}

fn shared_table() -> &'static BinomialTable {
    static TABLE: OnceLock<BinomialTable> = OnceLock::new();
    TABLE.get_or_init(|| BinomialTable::new(DEFAULT_BINOM_ROWS))
}

fn binom_multiplicative(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient with integer arguments.
///
/// Zero when `k < 0` or `k > n >= 0`. A negative top with `k >= 0` is
/// rejected; those go through [`binom_gen`].
pub fn binom(n: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Ok(BigInt::zero());
    }
    if n < 0 {
        return Err(Error::NegativeBinomialTop { n, k });
    }
    if k > n {
        return Ok(BigInt::zero());
    }
    let (nu, ku) = (n as usize, k as usize);
    Ok(shared_table()
        .get(nu, ku)
        .unwrap_or_else(|| binom_multiplicative(n as u64, k as u64)))
}

/// `binom` for arguments already known to satisfy `n >= 0`.
pub(crate) fn choose(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom(n, k).expect("nonnegative top"))
}

/// Generalized binomial `q (q-1) ... (q-k+1) / k!`.
pub fn binom_gen(q: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= q - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// `a^e` where `e` is a small nonnegative count, with `0^0 = 1`.
pub(crate) fn powu(q: &Rational, e: usize) -> Rational {
    num_traits::pow(q.clone(), e)
}

/// `(-1)^e`.
pub(crate) fn sign(e: i64) -> Rational {
    if e.is_even() {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Serializes an integer as an exact decimal string.
pub fn serialize_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Serde adapter storing a [`Rational`] as `"p/q"` (or `"p"`).
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn binom_standard_values() {
        assert_eq!(binom(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binom(2, 3).unwrap(), BigInt::zero());
        assert_eq!(binom(10, 5).unwrap(), BigInt::from(252));
        assert_eq!(binom(5, -1).unwrap(), BigInt::zero());
        assert_eq!(binom(-3, -1).unwrap(), BigInt::zero());
    }

    #[test]
    fn binom_rejects_negative_top() {
        assert_eq!(
            binom(-2, 1),
            Err(Error::NegativeBinomialTop { n: -2, k: 1 })
        );
    }

    #[test]
    fn binom_beyond_cache_uses_multiplicative_route() {
        let n = DEFAULT_BINOM_ROWS as i64 + 40;
        let lhs = binom(n, 17).unwrap();
        let rhs = binom(n - 1, 16).unwrap() + binom(n - 1, 17).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(binom(300, 150).unwrap(), binom(300, 150).unwrap());
        let small = BinomialTable::new(10);
        assert_eq!(small.n_max(), 10);
        assert_eq!(small.get(10, 3), Some(BigInt::from(120)));
        assert_eq!(small.get(11, 3), None);
    }

    #[test]
    fn generalized_binomial_values() {
        assert_eq!(binom_gen(&frac(1, 2), 2), frac(-1, 8));
        assert_eq!(binom_gen(&int(3), 2), int(3));
        assert_eq!(binom_gen(&int(-1), 1), int(-1));
        assert_eq!(binom_gen(&int(-1), 0), int(1));
        // (-1 choose k) = (-1)^k
        for k in 0..8 {
            assert_eq!(binom_gen(&int(-1), k), sign(k as i64));
        }
    }

    #[test]
    fn integrality_boundary() {
        assert_eq!(to_integer(&frac(12, 4), "x").unwrap(), BigInt::from(3));
        assert!(matches!(
            to_integer(&frac(1, 2), "half"),
            Err(Error::NonIntegral { .. })
        ));
    }

    #[test]
    fn rational_parsing_and_powers() {
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("x").is_err());
        assert_eq!(pow(&frac(2, 3), -2), frac(9, 4));
        assert_eq!(pow(&int(0), 0), int(1));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn binom_symmetry_and_pascal(n in 1i64..300, k in 0i64..300) {
            prop_assume!(k <= n);
            prop_assert_eq!(binom(n, k).unwrap(), binom(n, n - k).unwrap());
            prop_assert_eq!(
                binom(n, k).unwrap(),
                binom(n - 1, k - 1).unwrap() + binom(n - 1, k).unwrap()
            );
        }

        #[test]
        fn binom_gen_matches_binom_on_integer_tops(n in 0i64..60, k in 0u64..70) {
            prop_assert_eq!(binom_gen(&int(n), k), big(&binom(n, k as i64).unwrap()));
        }

        #[test]
        fn rational_field_laws(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!(a.denom().is_positive());
        }
    }
}

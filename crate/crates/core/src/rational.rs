//! Rational helpers: construction, string I/O and seeded sampling.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serializer;

use crate::Rational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(t.parse().map_err(|_| format!("bad rational {s:?}"))?),
    };
    Ok(parsed)
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Uniform positive rational `num/den` with `num in 1..=max_num`, `den in 1..=max_den`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

/// Rational in `[-bound, bound]` with denominator at most `max_den`: the
/// denominator is drawn first, then the numerator uniformly among the
/// admissible integers.
pub fn random_bounded<R: Rng + ?Sized>(rng: &mut R, bound: &Rational, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let limit = (bound * integer(den)).floor().to_integer();
    let limit: i64 = limit.try_into().unwrap_or(i64::MAX / 2);
    ratio(rng.gen_range(-limit..=limit), den)
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// `serialize_with` helpers writing rationals as strings.
pub mod ser {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn one<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn opt<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_str(&format_rational(x)),
            None => s.serialize_none(),
        }
    }

    pub fn vec<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    /// Row-major list of rows of rational strings.
    pub fn matrix<S: Serializer>(m: &crate::matrix::RationalMatrix, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.rows()))?;
        for i in 0..m.rows() {
            let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), integer(-4));
        assert_eq!(parse_rational("-2/-4").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&integer(-7)), "-7");
    }

    #[test]
    fn bounded_samples_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = ratio(1, 1);
        for _ in 0..500 {
            let x = random_bounded(&mut rng, &c, 16);
            assert!(x.abs() <= c);
            assert!(*x.denom() <= BigInt::from(16));
        }
    }
}

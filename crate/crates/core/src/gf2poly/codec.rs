//! External text form: the ascending list of exponents with nonzero
//! coefficient, e.g. `[1,2,4]` for `t^4 + t^2 + t`. Series carry their
//! precision alongside: `{"precision":10,"exponents":[1,5,9]}`.

use serde::{Deserialize, Serialize};

use super::{Gf2Poly, Gf2Series};
use crate::error::{Error, Result};

/// Wire form of a [`Gf2Series`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub precision: usize,
    pub exponents: Vec<usize>,
}

impl Gf2Poly {
    /// Builds a polynomial from a strictly ascending list of non-negative
    /// exponents.
    pub fn from_exponent_list(exps: &[i64]) -> Result<Gf2Poly> {
        let mut prev: Option<i64> = None;
        for &e in exps {
            if e < 0 {
                return Err(Error::MalformedInput(format!("negative exponent {e}")));
            }
            if prev.is_some_and(|p| p >= e) {
                return Err(Error::MalformedInput(format!(
                    "exponents not strictly ascending at {e}"
                )));
            }
            prev = Some(e);
        }
        Ok(Gf2Poly::from_exponents(exps.iter().map(|&e| e as usize)))
    }

    /// Parses the `[e0,e1,...]` text form.
    pub fn parse_exponents(text: &str) -> Result<Gf2Poly> {
        let exps: Vec<i64> = serde_json::from_str(text.trim())
            .map_err(|e| Error::MalformedInput(e.to_string()))?;
        Gf2Poly::from_exponent_list(&exps)
    }

    pub fn format_exponents(&self) -> String {
        let body: Vec<String> = self.iter_exponents().map(|e| e.to_string()).collect();
        format!("[{}]", body.join(","))
    }
}

impl Gf2Series {
    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            precision: self.precision(),
            exponents: self.bits().exponents(),
        }
    }

    pub fn from_record(rec: &SeriesRecord) -> Result<Gf2Series> {
        let exps: Vec<i64> = rec.exponents.iter().map(|&e| e as i64).collect();
        let bits = Gf2Poly::from_exponent_list(&exps)?;
        if let Some(&e) = rec.exponents.last() {
            if e >= rec.precision {
                return Err(Error::MalformedInput(format!(
                    "exponent {e} at or beyond precision {}",
                    rec.precision
                )));
            }
        }
        Ok(Gf2Series::new(bits, rec.precision))
    }

    pub fn format_record(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("series record serializes")
    }

    pub fn parse_record(text: &str) -> Result<Gf2Series> {
        let rec: SeriesRecord =
            serde_json::from_str(text.trim()).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Gf2Series::from_record(&rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn examples() {
        let p = Gf2Poly::from_exponents([4, 2, 1]);
        assert_eq!(p.format_exponents(), "[1,2,4]");
        assert_eq!(Gf2Poly::parse_exponents("[]").unwrap(), Gf2Poly::zero());
        assert_eq!(
            Gf2Poly::parse_exponents("[0,5]").unwrap(),
            Gf2Poly::from_exponents([5, 0])
        );
        assert_eq!(p.to_string(), "t^4 + t^2 + t");
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["[2,1]", "[1,1]", "[-1,3]", "{", "[1.5]"] {
            assert!(
                matches!(Gf2Poly::parse_exponents(bad), Err(Error::MalformedInput(_))),
                "{bad}"
            );
        }
        assert!(Gf2Series::parse_record(r#"{"precision":3,"exponents":[1,3]}"#).is_err());
    }

    #[test]
    fn series_record() {
        let s = Gf2Series::parse_record(r#"{"precision":10,"exponents":[1,5,9]}"#).unwrap();
        assert_eq!(s.precision(), 10);
        assert_eq!(s.format_record(), r#"{"precision":10,"exponents":[1,5,9]}"#);
    }

    #[test]
    fn parse_format_identity_on_random_polys() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1000);
        for _ in 0..1000 {
            let deg = rng.gen_range(0..=2000);
            let p = Gf2Poly::from_exponents((0..=deg).filter(|_| rng.gen_bool(0.5)));
            assert_eq!(Gf2Poly::parse_exponents(&p.format_exponents()).unwrap(), p);
        }
    }
}

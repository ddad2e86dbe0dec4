//! Parameters of the rational weight generating function
//! `G(z) = Π(1 + c_l z) / Π(1 − d_m z)` and its numeric evaluations.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, to_f64, Rational};
use crate::symmetric::{complete, elementary};

pub const DEFAULT_GUARD_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightData {
    c: Vec<Rational>,
    d: Vec<Rational>,
    beta: Rational,
    guard_bound: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawWeights {
    #[serde(default)]
    c: Vec<String>,
    #[serde(default)]
    d: Vec<String>,
    beta: String,
    #[serde(default = "default_guard")]
    guard_bound: usize,
}

fn default_guard() -> usize {
    DEFAULT_GUARD_BOUND
}

impl TryFrom<RawWeights> for WeightData {
    type Error = Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| crate::rational::parse_rational(s)).collect::<Result<Vec<_>>>();
        WeightData::with_guard_bound(
            parse(&raw.c)?,
            parse(&raw.d)?,
            crate::rational::parse_rational(&raw.beta)?,
            raw.guard_bound,
        )
    }
}

impl From<WeightData> for RawWeights {
    fn from(w: WeightData) -> Self {
        RawWeights {
            c: w.c.iter().map(format_rational).collect(),
            d: w.d.iter().map(format_rational).collect(),
            beta: format_rational(&w.beta),
            guard_bound: w.guard_bound,
        }
    }
}

impl WeightData {
    pub fn new(c: Vec<Rational>, d: Vec<Rational>, beta: Rational) -> Result<Self> {
        Self::with_guard_bound(c, d, beta, DEFAULT_GUARD_BOUND)
    }

    pub fn with_guard_bound(c: Vec<Rational>, d: Vec<Rational>, beta: Rational, guard_bound: usize) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::Argument("beta must be nonzero".into()));
        }
        if guard_bound == 0 {
            return Err(Error::Argument("guard_bound must be positive".into()));
        }
        if c.iter().chain(&d).any(Zero::is_zero) {
            return Err(Error::Argument("weight parameters must be nonzero".into()));
        }
        let bound = int(guard_bound as i64);
        for cl in &c {
            // 1 + iβc = 0 at i = −1/(βc)
            let root = -(&beta * cl).recip();
            if root.is_integer() && root.abs() <= bound {
                return Err(Error::Domain(format!(
                    "1 + i*beta*c vanishes at i = {} (c = {})",
                    format_rational(&root),
                    format_rational(cl)
                )));
            }
        }
        for dm in &d {
            let root = (&beta * dm).recip();
            if root.is_integer() {
                return Err(Error::Domain(format!(
                    "1/(beta*d) = {} is an integer (d = {})",
                    format_rational(&root),
                    format_rational(dm)
                )));
            }
        }
        Ok(WeightData { c, d, beta, guard_bound })
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    pub fn d(&self) -> &[Rational] {
        &self.d
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn guard_bound(&self) -> usize {
        self.guard_bound
    }

    /// Same `c`, `d` with another numeric β.
    pub fn with_beta(&self, beta: Rational) -> Result<Self> {
        Self::with_guard_bound(self.c.clone(), self.d.clone(), beta, self.guard_bound)
    }

    pub(crate) fn check_index(&self, i: i64) -> Result<()> {
        if i.unsigned_abs() as usize > self.guard_bound {
            return Err(Error::Capacity(format!(
                "index {i} exceeds guard bound {}",
                self.guard_bound
            )));
        }
        Ok(())
    }

    /// `G(z)` at a rational point.
    pub fn g_at(&self, z: &Rational) -> Result<Rational> {
        let mut num = Rational::one();
        for cl in &self.c {
            num *= Rational::one() + cl * z;
        }
        let mut den = Rational::one();
        for dm in &self.d {
            den *= Rational::one() - dm * z;
        }
        if den.is_zero() {
            return Err(Error::Domain(format!("G has a pole at z = {}", format_rational(z))));
        }
        Ok(num / den)
    }

    /// `G(iβ)` at the numeric β.
    pub fn g_lattice(&self, i: i64) -> Result<Rational> {
        self.check_index(i)?;
        self.g_at(&(&self.beta * int(i)))
    }

    /// `r_i = β G(iβ)` at the numeric β.
    pub fn r_numeric(&self, i: i64) -> Result<Rational> {
        Ok(&self.beta * self.g_lattice(i)?)
    }

    /// `ρ_i` at the numeric β: `Π_{j=1}^{i} r_j` for `i > 0`, `Π_{j=0}^{−i−1} 1/r_{−j}` for `i < 0`.
    pub fn rho_numeric(&self, i: i64) -> Result<Rational> {
        let mut acc = Rational::one();
        if i > 0 {
            for j in 1..=i {
                acc *= self.r_numeric(j)?;
            }
        } else {
            for j in 0..-i {
                let r = self.r_numeric(-j)?;
                if r.is_zero() {
                    return Err(Error::Domain(format!("r_{} vanishes", -j)));
                }
                acc /= r;
            }
        }
        Ok(acc)
    }

    /// `κ = (−1)^M Π βc_l / Π βd_m`.
    pub fn kappa(&self) -> Rational {
        let mut k = Rational::one();
        for cl in &self.c {
            k *= &self.beta * cl;
        }
        for dm in &self.d {
            k /= &self.beta * dm;
        }
        if self.d.len() % 2 == 1 {
            k = -k;
        }
        k
    }

    /// `a_l = 1/(βc_l)` as floats.
    pub fn a_params(&self) -> Vec<f64> {
        self.c.iter().map(|cl| to_f64(&(&self.beta * cl).recip())).collect()
    }

    /// `b_m = 1/(βd_m)` as floats.
    pub fn b_params(&self) -> Vec<f64> {
        self.d.iter().map(|dm| to_f64(&(&self.beta * dm).recip())).collect()
    }
}

/// Taylor coefficients `g_i = Σ_j e_j(c) h_{i−j}(d)` of `G`, for `i = 0..=order`.
pub fn g_coeffs(weights: &WeightData, order: usize) -> Vec<Rational> {
    let e = elementary(weights.c(), order);
    let h = complete(weights.d(), order);
    (0..=order)
        .map(|i| (0..=i).map(|j| &e[j] * &h[i - j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn w(c: &[(i64, i64)], d: &[(i64, i64)]) -> WeightData {
        WeightData::new(
            c.iter().map(|&(p, q)| rat(p, q)).collect(),
            d.iter().map(|&(p, q)| rat(p, q)).collect(),
            rat(4, 7),
        )
        .unwrap()
    }

    #[test]
    fn g_coeffs_examples() {
        assert_eq!(g_coeffs(&w(&[], &[]), 3), vec![int(1), int(0), int(0), int(0)]);
        assert_eq!(g_coeffs(&w(&[(2, 3)], &[]), 2), vec![int(1), rat(2, 3), int(0)]);
        assert_eq!(
            g_coeffs(&w(&[], &[(1, 5)]), 3),
            vec![int(1), rat(1, 5), rat(1, 25), rat(1, 125)]
        );
    }

    #[test]
    fn g_coeffs_match_taylor_of_g() {
        // Compare Σ g_i z^i with G(z) at a small rational z to the truncation error.
        let weights = w(&[(1, 2), (1, 3)], &[(1, 5)]);
        let g = g_coeffs(&weights, 40);
        let z = rat(1, 100);
        let mut zi = int(1);
        let mut sum = int(0);
        for gi in &g {
            sum += gi * &zi;
            zi *= &z;
        }
        let diff = to_f64(&(sum - weights.g_at(&z).unwrap())).abs();
        assert!(diff < 1e-60);
    }

    #[test]
    fn rejects_poles_and_resonances() {
        // 1 + iβc = 0 at i = −5 for β = 1/5, c = 1.
        assert!(matches!(
            WeightData::new(vec![int(1)], vec![], rat(1, 5)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            WeightData::new(vec![], vec![rat(1, 2)], int(1)),
            Err(Error::Domain(_))
        ));
        assert!(WeightData::with_guard_bound(vec![int(1)], vec![], rat(1, 5), 4).is_ok());
        assert!(matches!(WeightData::new(vec![int(0)], vec![], int(1)), Err(Error::Argument(_))));
        assert!(matches!(WeightData::new(vec![], vec![], int(0)), Err(Error::Argument(_))));
    }

    #[test]
    fn rho_ratio_is_r() {
        let weights = w(&[(1, 2), (1, 3)], &[(1, 5)]);
        assert_eq!(weights.rho_numeric(0).unwrap(), int(1));
        for i in -8..=8 {
            let lhs = weights.r_numeric(i).unwrap() * weights.rho_numeric(i - 1).unwrap();
            assert_eq!(lhs, weights.rho_numeric(i).unwrap());
        }
    }

    #[test]
    fn kappa_values() {
        assert_eq!(w(&[(1, 2)], &[]).kappa(), rat(2, 7));
        assert_eq!(w(&[], &[(1, 5)]).kappa(), rat(-35, 4));
        assert_eq!(w(&[(1, 2)], &[(1, 5)]).kappa(), rat(-5, 2));
    }

    #[test]
    fn serde_round_trip() {
        let weights = w(&[(1, 2), (-1, 3)], &[(1, 5)]);
        let text = serde_json::to_string(&weights).unwrap();
        let back: WeightData = serde_json::from_str(&text).unwrap();
        assert_eq!(back, weights);
    }
}

//! Truncated Laurent series in a formal parameter β with exact coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// `Σ_{e=start}^{order} a_e β^e`; every coefficient with exponent `≤ order` is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSeries {
    start: i64,
    coeffs: Vec<Rational>,
}

impl BetaSeries {
    /// Coefficients `coeffs[i]` of `β^{start+i}`, known through `start + len − 1`.
    pub fn new(start: i64, coeffs: Vec<Rational>) -> Self {
        BetaSeries { start, coeffs }
    }

    /// The zero series, exact through `order`.
    pub fn zero(order: i64) -> Self {
        BetaSeries {
            start: order + 1,
            coeffs: Vec::new(),
        }
        .extend_to(order)
    }

    /// `c β^e`, exact through `order`.
    pub fn monomial(c: Rational, e: i64, order: i64) -> Self {
        if order < e {
            return BetaSeries::zero(order);
        }
        let mut coeffs = vec![Rational::zero(); (order - e + 1) as usize];
        coeffs[0] = c;
        BetaSeries { start: e, coeffs }
    }

    pub fn one(order: i64) -> Self {
        BetaSeries::monomial(Rational::one(), 0, order)
    }

    /// `β^{start} (1 + u β + u² β² + …)` through `order`.
    fn geometric(u: &Rational, start: i64, order: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut p = Rational::one();
        for _ in start..=order {
            coeffs.push(p.clone());
            p *= u;
        }
        BetaSeries { start, coeffs }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Highest exponent whose coefficient is exact.
    pub fn order(&self) -> i64 {
        self.start + self.coeffs.len() as i64 - 1
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.start + i as i64)
    }

    pub fn coefficient(&self, e: i64) -> Result<Rational> {
        if e > self.order() {
            return Err(Error::Capacity(format!(
                "coefficient of beta^{e} requested beyond truncation order {}",
                self.order()
            )));
        }
        if e < self.start {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs[(e - self.start) as usize].clone())
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drop coefficients above `order`.
    pub fn truncate(mut self, order: i64) -> Self {
        if order < self.order() {
            let keep = (order - self.start + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        self
    }

    fn extend_to(mut self, order: i64) -> Self {
        while self.order() < order {
            self.coeffs.push(Rational::zero());
        }
        self
    }

    /// Multiply by `β^n`.
    pub fn shift(mut self, n: i64) -> Self {
        self.start += n;
        self
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BetaSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Reciprocal of a series whose lowest stored coefficient is nonzero.
    pub fn reciprocal(&self) -> Result<Self> {
        let Some(lead) = self.coeffs.first().filter(|c| !c.is_zero()) else {
            return Err(Error::Domain("reciprocal of a series with vanishing leading coefficient".into()));
        };
        let n = self.coeffs.len();
        let inv_lead = lead.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv_lead.clone());
        for i in 1..n {
            let mut s = Rational::zero();
            for j in 1..=i {
                s += &self.coeffs[j] * &out[i - j];
            }
            out.push(-s * &inv_lead);
        }
        Ok(BetaSeries {
            start: -self.start,
            coeffs: out,
        })
    }

    /// Evaluate the known part at a numeric β.
    pub fn evaluate(&self, beta: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in self.terms() {
            total += c * crate::rational::pow(beta, e);
        }
        total
    }
}

impl Add for &BetaSeries {
    type Output = BetaSeries;

    fn add(self, rhs: &BetaSeries) -> BetaSeries {
        let order = self.order().min(rhs.order());
        let start = self.start.min(rhs.start);
        let mut out = BetaSeries::zero(order);
        out.start = start;
        out.coeffs = vec![Rational::zero(); (order - start + 1).max(0) as usize];
        for s in [self, rhs] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.start + i as i64;
                if e <= order {
                    out.coeffs[(e - start) as usize] += c;
                }
            }
        }
        out
    }
}

impl Neg for &BetaSeries {
    type Output = BetaSeries;

    fn neg(self) -> BetaSeries {
        self.scale(&-Rational::one())
    }
}

impl Sub for &BetaSeries {
    type Output = BetaSeries;

    fn sub(self, rhs: &BetaSeries) -> BetaSeries {
        self + &(-rhs)
    }
}

impl Mul for &BetaSeries {
    type Output = BetaSeries;

    fn mul(self, rhs: &BetaSeries) -> BetaSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] += a * b;
            }
        }
        BetaSeries {
            start: self.start + rhs.start,
            coeffs,
        }
    }
}

impl Serialize for BetaSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(i64, String)> = self.terms().map(|(e, c)| (e, format_rational(c))).collect();
        let mut st = serializer.serialize_struct("BetaSeries", 2)?;
        st.serialize_field("truncation_order", &self.order())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `(1 + u β)` as a series through relative precision `len`.
pub(crate) fn linear_factor(u: &Rational, len: usize) -> BetaSeries {
    let mut coeffs = vec![Rational::zero(); len.max(1)];
    coeffs[0] = Rational::one();
    if len > 1 {
        coeffs[1] = u.clone();
    }
    BetaSeries { start: 0, coeffs }
}

/// `1 / (1 − u β)` through relative precision `len`.
pub(crate) fn geometric_factor(u: &Rational, len: usize) -> BetaSeries {
    BetaSeries::geometric(u, 0, len.max(1) as i64 - 1)
}

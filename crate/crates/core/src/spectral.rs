//! The adapted basis `φ_k` as exact truncated Laurent series in `x`, with the
//! recursion operator `R = βx G(β𝒟)` and the quantum spectral curve operator.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{factorial, format_rational, int, pow, Rational};
use crate::weights::WeightData;

/// `Σ_{j=0}^{T} a_j x^{base+j}`; coefficients below `base` are zero, above `base+T` unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLaurentSeries {
    pub base_exponent: i64,
    pub coefficients: Vec<Rational>,
}

impl TruncatedLaurentSeries {
    pub fn new(base_exponent: i64, coefficients: Vec<Rational>) -> Self {
        TruncatedLaurentSeries {
            base_exponent,
            coefficients,
        }
    }

    pub fn zero(base_exponent: i64, order: usize) -> Self {
        TruncatedLaurentSeries::new(base_exponent, vec![Rational::zero(); order + 1])
    }

    /// Highest exponent with a known coefficient.
    pub fn top_exponent(&self) -> i64 {
        self.base_exponent + self.coefficients.len() as i64 - 1
    }

    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Coefficient of `x^m`, or `None` past the truncation.
    pub fn coefficient(&self, m: i64) -> Option<Rational> {
        if m > self.top_exponent() {
            None
        } else if m < self.base_exponent {
            Some(Rational::zero())
        } else {
            Some(self.coefficients[(m - self.base_exponent) as usize].clone())
        }
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: i64) -> Self {
        TruncatedLaurentSeries::new(self.base_exponent + n, self.coefficients.clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        TruncatedLaurentSeries::new(self.base_exponent, self.coefficients.iter().map(|c| c * s).collect())
    }

    /// Drop the highest known coefficient.
    pub fn drop_top(mut self) -> Self {
        self.coefficients.pop();
        self
    }

    /// Multiply the coefficient of `x^m` by `f(m)`.
    pub fn map_diagonal(&self, mut f: impl FnMut(i64) -> Result<Rational>) -> Result<Self> {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if c.is_zero() {
                    Ok(Rational::zero())
                } else {
                    Ok(c * f(self.base_exponent + j as i64)?)
                }
            })
            .collect::<Result<_>>()?;
        Ok(TruncatedLaurentSeries::new(self.base_exponent, coefficients))
    }

    /// Sum, known up to the lower of the two top exponents.
    pub fn add(&self, other: &Self) -> Self {
        let base = self.base_exponent.min(other.base_exponent);
        let top = self.top_exponent().min(other.top_exponent());
        let coefficients = (base..=top)
            .map(|m| self.coefficient(m).unwrap() + other.coefficient(m).unwrap())
            .collect();
        TruncatedLaurentSeries::new(base, coefficients)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Exponent range on which both series are known.
    pub fn common_window(&self, other: &Self) -> (i64, i64) {
        (
            self.base_exponent.min(other.base_exponent),
            self.top_exponent().min(other.top_exponent()),
        )
    }

    /// True when the coefficients agree on every exponent up to `top`.
    pub fn agrees_through(&self, other: &Self, top: i64) -> bool {
        let base = self.base_exponent.min(other.base_exponent);
        (base..=top).all(|m| match (self.coefficient(m), other.coefficient(m)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    /// True when the coefficients agree on the full common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let (_, top) = self.common_window(other);
        self.agrees_through(other, top)
    }

    /// Evaluate the known terms numerically at `x`.
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| crate::rational::to_f64(c) * x.powi((self.base_exponent + j as i64) as i32))
            .sum()
    }
}

impl Serialize for TruncatedLaurentSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.coefficients.iter().map(format_rational).collect();
        let mut st = serializer.serialize_struct("TruncatedLaurentSeries", 2)?;
        st.serialize_field("base_exponent", &self.base_exponent)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

/// `φ_k(x) = β x^{1−k} Σ_{j=0}^{T} ρ_{j−k}/j! (x/β)^j` at the numeric β.
pub fn phi_series(weights: &WeightData, k: i64, order: usize) -> Result<TruncatedLaurentSeries> {
    let needed = order as i64 + k.abs();
    if needed > weights.guard_bound() as i64 {
        return Err(Error::Capacity(format!(
            "T + |k| = {needed} exceeds guard bound {}",
            weights.guard_bound()
        )));
    }
    let beta = weights.beta();
    let mut rho = weights.rho_numeric(-k)?;
    let mut coefficients = Vec::with_capacity(order + 1);
    let mut scale = beta.clone();
    for j in 0..=order as i64 {
        if j > 0 {
            // ρ_{j−k} = r_{j−k} ρ_{j−1−k}; β^{−j}/j! accumulates.
            rho *= weights.r_numeric(j - k)?;
            scale /= beta * int(j);
        }
        coefficients.push(&rho * &scale);
    }
    Ok(TruncatedLaurentSeries::new(1 - k, coefficients))
}

pub fn apply_euler(s: &TruncatedLaurentSeries) -> TruncatedLaurentSeries {
    s.map_diagonal(|m| Ok(int(m))).expect("infallible")
}

/// `G(βm)` with a domain error at a pole.
fn g_diag(weights: &WeightData, m: i64) -> Result<Rational> {
    weights.g_at(&(weights.beta() * int(m)))
}

/// `R s = βx G(β𝒟) s`; the highest term is dropped.
pub fn apply_recursion(weights: &WeightData, s: &TruncatedLaurentSeries) -> Result<TruncatedLaurentSeries> {
    let beta = weights.beta().clone();
    Ok(s
        .map_diagonal(|m| Ok(&beta * g_diag(weights, m)?))?
        .shift(1)
        .drop_top())
}

/// `ℒ s = (x G(β𝒟) − 𝒟) s`.
pub fn apply_quantum_curve(weights: &WeightData, s: &TruncatedLaurentSeries) -> Result<TruncatedLaurentSeries> {
    let xg = s.map_diagonal(|m| g_diag(weights, m))?.shift(1);
    Ok(xg.sub(&apply_euler(s)))
}

/// `β(𝒟 + k − 1) s`.
pub fn apply_lowering(weights: &WeightData, s: &TruncatedLaurentSeries, k: i64) -> TruncatedLaurentSeries {
    let beta = weights.beta().clone();
    s.map_diagonal(|m| Ok(&beta * int(m + k - 1))).expect("infallible")
}

/// The unique series `Φ` with `Π_j (1 − βd_j 𝒟) Φ = φ_1`.
pub fn phi_aux_series(weights: &WeightData, order: usize) -> Result<TruncatedLaurentSeries> {
    let phi1 = phi_series(weights, 1, order)?;
    let beta = weights.beta().clone();
    phi1.map_diagonal(|m| {
        let mut den = Rational::one();
        for dj in weights.d() {
            den *= Rational::one() - &beta * dj * int(m);
        }
        if den.is_zero() {
            return Err(Error::Domain(format!("resonant exponent {m} in the auxiliary equation")));
        }
        Ok(den.recip())
    })
}

/// `x Π(1 + βc_i 𝒟) Φ − 𝒟 Π(1 − βd_j 𝒟) Φ`, which vanishes for the auxiliary series.
pub fn aux_curve_residual(weights: &WeightData, aux: &TruncatedLaurentSeries) -> TruncatedLaurentSeries {
    let beta = weights.beta().clone();
    let left = aux
        .map_diagonal(|m| Ok(weights.c().iter().map(|c| Rational::one() + &beta * c * int(m)).product()))
        .expect("infallible")
        .shift(1);
    let right = aux
        .map_diagonal(|m| {
            Ok(int(m) * weights.d().iter().map(|d| Rational::one() - &beta * d * int(m)).product::<Rational>())
        })
        .expect("infallible");
    left.sub(&right)
}

/// Pass/fail of the three operator identities on `φ_k` truncated at `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// `R φ_k = φ_{k−1}`.
    pub recursion: bool,
    /// `β(𝒟 + k − 1) φ_k = φ_{k−1}`.
    pub lowering: bool,
    /// `(x G(β𝒟) − 𝒟) φ_k = (k − 1) φ_k`.
    pub quantum_curve: bool,
}

impl IdentityCheck {
    pub fn all(&self) -> bool {
        self.recursion && self.lowering && self.quantum_curve
    }
}

pub fn check_identities(weights: &WeightData, k: i64, order: usize) -> Result<IdentityCheck> {
    let phi = phi_series(weights, k, order)?;
    let lower = phi_series(weights, k - 1, order)?;
    let recursion = apply_recursion(weights, &phi)?.agrees_with(&lower);
    let lowering = apply_lowering(weights, &phi, k).agrees_with(&lower);
    let curve = apply_quantum_curve(weights, &phi)?;
    let quantum_curve = curve.agrees_through(&phi.scale(&int(k - 1)), phi.top_exponent() - 1);
    Ok(IdentityCheck {
        recursion,
        lowering,
        quantum_curve,
    })
}

fn pochhammer(a: &Rational, j: usize) -> Rational {
    (0..j).map(|i| a + int(i as i64)).product()
}

/// `j`-th coefficient of `φ_k` from its generalised hypergeometric form
/// `βρ_{−k} x^{1−k} Σ_j Π(1−k+1/(βc_l))_j / Π(1−k−1/(βd_m))_j · κ^j x^j / j!`.
pub fn pochhammer_coefficient(weights: &WeightData, k: i64, j: usize) -> Result<Rational> {
    let beta = weights.beta();
    let shift = int(1 - k);
    let mut num = Rational::one();
    for c in weights.c() {
        num *= pochhammer(&(&shift + (beta * c).recip()), j);
    }
    let mut den = Rational::one();
    for d in weights.d() {
        den *= pochhammer(&(&shift - (beta * d).recip()), j);
    }
    if den.is_zero() {
        return Err(Error::Domain(format!("Pochhammer pole at k = {k}, j = {j}")));
    }
    let lead = beta * weights.rho_numeric(-k)?;
    Ok(lead * pow(&weights.kappa(), j as i64) * num / den / BigRational::from_integer(factorial(j as u64)))
}

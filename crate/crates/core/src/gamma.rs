//! Complex log-Gamma by upward shift, Stirling series and reflection.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2n} / (2n (2n − 1))` for `n = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Below this modulus the argument is shifted upward before the Stirling sum.
const SHIFT_RADIUS: f64 = 15.0;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Immutable evaluator state; the table is shared by every call.
#[derive(Debug, Clone, Copy)]
pub struct GammaEvaluator {
    pub coefficients: &'static [f64],
    pub shift_radius: f64,
    /// Arguments with real part below this use the reflection formula.
    pub reflection_below: f64,
}

pub const GAMMA: GammaEvaluator = GammaEvaluator {
    coefficients: &STIRLING,
    shift_radius: SHIFT_RADIUS,
    reflection_below: 0.5,
};

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

impl GammaEvaluator {
    pub fn ln_gamma(&self, z: Complex64) -> Result<Complex64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("Gamma argument {z} is not finite")));
        }
        if is_pole(z) {
            return Err(Error::Domain(format!("Gamma has a pole at {}", z.re)));
        }
        if z.re < self.reflection_below {
            // ln Γ(z) = ln π − ln sin(πz) − ln Γ(1 − z)
            let rest = self.ln_gamma(Complex64::new(1.0, 0.0) - z)?;
            return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
        }
        Ok(self.ln_gamma_right(z))
    }

    fn ln_gamma_right(&self, mut z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        while z.norm() < self.shift_radius {
            shift += z.ln();
            z += 1.0;
        }
        let inv = z.inv();
        let inv2 = inv * inv;
        let mut series = Complex64::new(0.0, 0.0);
        let mut p = inv;
        for c in self.coefficients {
            series += p * *c;
            p *= inv2;
        }
        (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift
    }

    pub fn gamma(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.ln_gamma(z)?.exp())
    }
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im > 1.0 {
        // sin(πz) = e^{−iπz} (e^{2iπz} − 1) / (2i)
        -i * PI * z + (((2.0 * i * PI * z).exp() - 1.0) / (2.0 * i)).ln()
    } else if z.im < -1.0 {
        // sin(πz) = e^{iπz} (1 − e^{−2iπz}) / (2i)
        i * PI * z + ((1.0 - (-2.0 * i * PI * z).exp()) / (2.0 * i)).ln()
    } else {
        (z * PI).sin().ln()
    }
}

pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    GAMMA.ln_gamma(z)
}

pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    GAMMA.gamma(z)
}

/// Γ at a real argument.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(complex_gamma(Complex64::new(x, 0.0))?.re)
}

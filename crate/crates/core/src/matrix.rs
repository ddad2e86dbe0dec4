//! τ at the trace invariants of a diagonal matrix, its determinantal and
//! Wronskian forms, and the eigenvalue-reduced matrix integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::meijer::{kernel_value, loop_quadrature_nodes, mellin_barnes_moment, ComplexValue, ContourSpec, MellinValue};
use crate::partition::Partition;
use crate::rational::{factorial, from_f64, pow, to_f64, Rational};
use crate::spectral::{apply_euler, phi_series, TruncatedLaurentSeries};
use crate::tau::schur_coefficient_unit;
use crate::weights::WeightData;

/// Relative distinctness threshold for eigenvalues.
pub const DISTINCTNESS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalMatrix {
    eigenvalues: Vec<f64>,
    degenerate: bool,
}

impl DiagonalMatrix {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Argument("matrix must have at least one eigenvalue".into()));
        }
        if eigenvalues.iter().any(|x| !x.is_finite() || *x == 0.0) {
            return Err(Error::Argument("eigenvalues must be finite and nonzero".into()));
        }
        let scale = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let delta = DISTINCTNESS * scale;
        for i in 0..eigenvalues.len() {
            for j in i + 1..eigenvalues.len() {
                if (eigenvalues[i] - eigenvalues[j]).abs() < delta {
                    return Err(Error::Conditioning(format!(
                        "eigenvalues {} and {} closer than {delta:e}",
                        eigenvalues[i], eigenvalues[j]
                    )));
                }
            }
        }
        Ok(DiagonalMatrix {
            eigenvalues,
            degenerate: false,
        })
    }

    /// The zero matrix, accepted only by the series path.
    pub fn zero(n: usize) -> Self {
        DiagonalMatrix {
            eigenvalues: vec![0.0; n],
            degenerate: true,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    fn require_regular(&self) -> Result<()> {
        if self.degenerate {
            return Err(Error::Conditioning("degenerate eigenvalues".into()));
        }
        Ok(())
    }

    fn exact(&self) -> Result<Vec<Rational>> {
        self.eigenvalues.iter().map(|&x| from_f64(x)).collect()
    }

    /// `y_i = ln x_i`; the contour path needs positive eigenvalues.
    pub fn logs(&self) -> Result<Vec<f64>> {
        self.require_regular()?;
        if self.eigenvalues.iter().any(|&x| x <= 0.0) {
            return Err(Error::Domain("ln x needs eigenvalues off the cut (x > 0)".into()));
        }
        Ok(self.eigenvalues.iter().map(|x| x.ln()).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Sum over each weight level `|λ| = N`.
    pub levels: Vec<f64>,
    pub tail_estimate: f64,
}

/// Exact level sums `Σ_{|λ|=N} (r_λ/β^{|λ|})/h(λ) · s_λ(x)` for `N = 0..=n_max`.
pub fn tau_at_x_levels(weights: &WeightData, x: &[Rational], n_max: usize) -> Result<Vec<Rational>> {
    let power_sums: Vec<Rational> = (0..=n_max)
        .map(|i| x.iter().map(|xi| pow(xi, i as i64)).sum())
        .collect();
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let table = CharacterTable::new(n)?;
            let coeffs: Vec<Rational> = table
                .partitions
                .iter()
                .map(|lam| schur_coefficient_unit(weights, lam))
                .collect::<Result<_>>()?;
            let mut level = Rational::zero();
            for (mi, mu) in table.partitions.iter().enumerate() {
                let mut t = Rational::zero();
                for (li, c) in coeffs.iter().enumerate() {
                    let chi = &table.chi[li][mi];
                    if !chi.is_zero() {
                        t += c * BigRational::from_integer(chi.clone());
                    }
                }
                if t.is_zero() {
                    continue;
                }
                let p: Rational = mu.parts().iter().map(|&i| power_sums[i].clone()).product();
                level += t * p / BigRational::from_integer(table.z[mi].clone());
            }
            Ok(level)
        })
        .collect()
}

/// `s_λ(x)` from power sums through the character formula.
pub fn schur_polynomial(lambda: &Partition, x: &[Rational]) -> Result<Rational> {
    let n = lambda.weight();
    let table = CharacterTable::new(n)?;
    let li = table.index_of(lambda).expect("partition of its own weight");
    let mut total = Rational::zero();
    for (mi, mu) in table.partitions.iter().enumerate() {
        let chi = &table.chi[li][mi];
        if chi.is_zero() {
            continue;
        }
        let p: Rational = mu
            .parts()
            .iter()
            .map(|&i| x.iter().map(|xi| pow(xi, i as i64)).sum::<Rational>())
            .product();
        total += BigRational::from_integer(chi.clone()) * p / BigRational::from_integer(table.z[mi].clone());
    }
    Ok(total)
}

/// `τ([X])` from its truncated Schur expansion, with the partition-weight
/// parameter set to one so that `τ([x]) = φ_1(x)`.
pub fn tau_at_x_series(weights: &WeightData, x: &DiagonalMatrix, n_max: usize, tolerance: f64) -> Result<SeriesValue> {
    let exact = x.exact()?;
    let levels = tau_at_x_levels(weights, &exact, n_max)?;
    let total: Rational = levels.iter().sum();
    let value = to_f64(&total);
    let lv: Vec<f64> = levels.iter().map(to_f64).collect();
    let tail = tail_estimate(&lv);
    if tail > tolerance * value.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::accuracy("Schur series truncation tail too large", tail, tolerance * value.abs()));
    }
    Ok(SeriesValue {
        value,
        levels: lv,
        tail_estimate: tail,
    })
}

/// Tail estimate: the largest of the last three levels continued geometrically
/// at the average decay rate since level one, doubled. Local ratios are not
/// used because levels change sign where contents pass a pole of `G`.
fn tail_estimate(levels: &[f64]) -> f64 {
    let n = levels.len();
    if n < 3 {
        return levels.last().map_or(0.0, |v| v.abs());
    }
    let envelope = levels[n.saturating_sub(3).max(1)..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if envelope == 0.0 {
        return 0.0;
    }
    let first = levels[1].abs();
    if first == 0.0 {
        return envelope;
    }
    let q = (envelope / first).powf(1.0 / (n - 2) as f64);
    if q >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * envelope * q / (1.0 - q)
}

fn eval_series(s: &TruncatedLaurentSeries, x: &Rational) -> Rational {
    let mut total = Rational::zero();
    for (j, c) in s.coefficients.iter().enumerate() {
        if !c.is_zero() {
            total += c * pow(x, s.base_exponent + j as i64);
        }
    }
    total
}

fn vandermonde(x: &[Rational]) -> Rational {
    let mut v = Rational::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= &x[i] - &x[j];
        }
    }
    v
}

fn vandermonde_f64(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= x[i] - x[j];
        }
    }
    v
}

/// Determinant by Gaussian elimination over the rationals.
pub fn det_rational(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Determinant by LU with partial pivoting.
pub fn det_complex(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .expect("nonempty");
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r][col] / p;
            for c in col..n {
                let sub = factor * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// `Π_{i=1}^n ρ_{−i}`.
fn rho_product(weights: &WeightData, n: usize) -> Result<Rational> {
    (1..=n as i64).map(|i| weights.rho_numeric(-i)).product()
}

/// `τ([X]) = Π x_i^{n−1} / (β^n Π ρ_{−i}) · det(φ_i(x_j)) / Δ(x)`, exactly on the truncated series.
pub fn tau_at_x_determinant(weights: &WeightData, x: &DiagonalMatrix, order: usize) -> Result<f64> {
    x.require_regular()?;
    let xs = x.exact()?;
    let n = xs.len();
    let phis: Vec<TruncatedLaurentSeries> = (1..=n as i64).map(|i| phi_series(weights, i, order)).collect::<Result<_>>()?;
    let m: Vec<Vec<Rational>> = phis.iter().map(|p| xs.iter().map(|xj| eval_series(p, xj)).collect()).collect();
    let det = det_rational(m);
    let prefactor: Rational = xs.iter().map(|xi| pow(xi, n as i64 - 1)).product::<Rational>()
        / (pow(weights.beta(), n as i64) * rho_product(weights, n)?);
    Ok(to_f64(&(prefactor * det / vandermonde(&xs))))
}

/// `γ_n = β^{n(n−1)/2} / Π ρ_{−i}`.
pub fn gamma_n(weights: &WeightData, n: usize) -> Result<Rational> {
    Ok(pow(weights.beta(), (n * (n - 1) / 2) as i64) / rho_product(weights, n)?)
}

/// `τ([X]) = γ_n/β^n · Π x_i^{n−1} · det(𝒟^{n−i} φ_n(x_j)) / Δ(x)` with derivative rows taken exactly on the series.
pub fn tau_at_x_wronskian(weights: &WeightData, x: &DiagonalMatrix, order: usize) -> Result<f64> {
    x.require_regular()?;
    let xs = x.exact()?;
    let n = xs.len();
    let mut rows = vec![phi_series(weights, n as i64, order)?];
    for _ in 1..n {
        let next = apply_euler(rows.last().expect("nonempty"));
        rows.push(next);
    }
    rows.reverse();
    let m: Vec<Vec<Rational>> = rows.iter().map(|p| xs.iter().map(|xj| eval_series(p, xj)).collect()).collect();
    let det = det_rational(m);
    let prefactor: Rational = gamma_n(weights, n)? / pow(weights.beta(), n as i64)
        * xs.iter().map(|xi| pow(xi, n as i64 - 1)).product::<Rational>();
    Ok(to_f64(&(prefactor * det / vandermonde(&xs))))
}

/// The weight `A_n(s) ds` of the eigenvalue integral and its contour.
#[derive(Debug, Clone)]
pub struct MomentKernel {
    pub weights: WeightData,
    pub n: usize,
    pub contour: ContourSpec,
}

impl MomentKernel {
    pub fn new(weights: WeightData, n: usize) -> Self {
        MomentKernel {
            weights,
            n,
            contour: ContourSpec::default(),
        }
    }

    /// `log ζ = ln(−κ) + y` with `arg(−κ) ∈ {0, π}`.
    fn log_zeta(&self, y: f64) -> Complex64 {
        let kappa = to_f64(&self.weights.kappa());
        Complex64::new(kappa.abs().ln() + y, if kappa > 0.0 { PI } else { 0.0 })
    }
}

/// `f^{(m)}(y) = ∫ A_n(s) s^m e^{ys} ds`.
pub fn contour_moment(kernel: &MomentKernel, m: u32, y: f64) -> Result<MellinValue> {
    mellin_barnes_moment(&kernel.weights, kernel.n as i64, kernel.log_zeta(y), m, &kernel.contour)
}

/// `𝐙(X) = (Π_{i=1}^n i!) / Δ(y) · det(f^{(n−i)}(y_j))`.
pub fn z_andreiev(kernel: &MomentKernel, x: &DiagonalMatrix) -> Result<ComplexValue> {
    let y = x.logs()?;
    let n = y.len();
    if n != kernel.n {
        return Err(Error::Argument(format!("kernel built for n = {}, matrix has n = {n}", kernel.n)));
    }
    let entries: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            y.iter()
                .map(|&yj| contour_moment(kernel, (n - 1 - i) as u32, yj).map(|v| v.value))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let fact: f64 = (1..=n as u64).map(|i| to_f64(&BigRational::from_integer(factorial(i)))).product();
    Ok(det_complex(entries) * fact / vandermonde_f64(&y))
}

/// `𝐙` at `n = 2` by a direct tensor-product sum over fixed loop nodes of
/// `Π_{i<n} i! / Δ(y) · ∫∫ Δ(ζ) det(e^{y_i ζ_j}) A(ζ_1) A(ζ_2) dζ_1 dζ_2`.
pub fn z_two_fold(kernel: &MomentKernel, x: &DiagonalMatrix, panels_per_unit: usize) -> Result<ComplexValue> {
    let y = x.logs()?;
    if y.len() != 2 || kernel.n != 2 {
        return Err(Error::Argument("two-fold quadrature needs n = 2".into()));
    }
    let base = kernel.log_zeta(0.0);
    let ymax = y[0].max(y[1]);
    let nodes = loop_quadrature_nodes(&kernel.weights, 2, base + ymax, panels_per_unit, &kernel.contour)?;
    let pre: Vec<(Complex64, Complex64, Complex64, Complex64)> = nodes
        .iter()
        .map(|&(s, w)| {
            let a = kernel_value(&kernel.weights, 2, base, s)?;
            Ok((s, w * a, (s * y[0]).exp(), (s * y[1]).exp()))
        })
        .collect::<Result<_>>()?;
    let total: Complex64 = pre
        .par_iter()
        .map(|&(s1, w1, e11, e21)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s2, w2, e12, e22) in &pre {
                acc += w2 * (s1 - s2) * (e11 * e22 - e12 * e21);
            }
            acc * w1
        })
        .sum();
    Ok(total / (y[0] - y[1]))
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub tau: f64,
    pub tau_tail_estimate: f64,
    pub z: ComplexValue,
    /// `β^{n(n−1)/2} Π x_i^{n−1} Δ(y) / (Π i! Δ(x))`.
    pub prefactor: f64,
    /// `1/(β^n Π ρ_{−i})`, the constant that joins the two sides.
    pub epsilon: f64,
    pub rhs: ComplexValue,
    pub relative_discrepancy: f64,
    /// `τ / (prefactor · 𝐙)`; equals `epsilon` when the identity holds.
    pub literal_ratio: ComplexValue,
}

/// Both sides of `τ([X]) = ε_n · β^{n(n−1)/2} Π x_i^{n−1} Δ(ln x) / (Π i! Δ(x)) · 𝐙(X)`.
pub fn theorem_check(weights: &WeightData, x: &DiagonalMatrix, n_max: usize, tail_tolerance: f64) -> Result<TheoremReport> {
    let n = x.n();
    let tau = tau_at_x_series(weights, x, n_max, tail_tolerance)?;
    let kernel = MomentKernel::new(weights.clone(), n);
    let z = z_andreiev(&kernel, x)?;
    let xs = x.eigenvalues();
    let y = x.logs()?;
    let fact: f64 = (1..=n as u64).map(|i| to_f64(&BigRational::from_integer(factorial(i)))).product();
    let beta = to_f64(weights.beta());
    let prefactor = beta.powi((n * (n - 1) / 2) as i32) * xs.iter().map(|xi| xi.powi(n as i32 - 1)).product::<f64>()
        * vandermonde_f64(&y)
        / (fact * vandermonde_f64(xs));
    let epsilon = to_f64(&(pow(weights.beta(), n as i64) * rho_product(weights, n)?).recip());
    let rhs = z * prefactor * epsilon;
    let tau_c = Complex64::new(tau.value, 0.0);
    Ok(TheoremReport {
        n,
        tau: tau.value,
        tau_tail_estimate: tau.tail_estimate,
        z,
        prefactor,
        epsilon,
        rhs,
        relative_discrepancy: (rhs - tau_c).norm() / tau.value.abs(),
        literal_ratio: tau_c / (z * prefactor),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HcizReport {
    pub y: [f64; 2],
    pub z: [f64; 2],
    pub lhs: f64,
    pub rhs: f64,
    pub relative_discrepancy: f64,
}

fn hciz_lhs(y: [f64; 2], z: [f64; 2], nodes: usize) -> f64 {
    // |U_11|² = cos²θ is uniform in t on [0, 1] under Haar measure; dt = sin 2θ dθ.
    let (x, w) = crate::quadrature::gauss_legendre(nodes);
    let half = PI / 4.0;
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let theta = half * (1.0 + xi);
            let t = theta.cos().powi(2);
            let exponent = y[0] * (z[0] * t + z[1] * (1.0 - t)) + y[1] * (z[0] * (1.0 - t) + z[1] * t);
            wi * half * exponent.exp() * (2.0 * theta).sin()
        })
        .sum()
}

/// `∫_{U(2)} exp tr(Y U Z U†) dU` by quadrature against `1! det(e^{y_i z_j}) / (Δ(y) Δ(z))`.
pub fn hciz_check(y: [f64; 2], z: [f64; 2]) -> Result<HcizReport> {
    let coarse = hciz_lhs(y, z, 48);
    let lhs = hciz_lhs(y, z, 96);
    if (coarse - lhs).abs() > 1e-12 * lhs.abs() {
        return Err(Error::accuracy("angular quadrature unresolved", (coarse - lhs).abs(), 1e-12 * lhs.abs()));
    }
    let a = y[0] * z[1] + y[1] * z[0];
    let b = (y[0] - y[1]) * (z[0] - z[1]);
    let rhs = if b == 0.0 { a.exp() } else { a.exp() * b.exp_m1() / b };
    Ok(HcizReport {
        y,
        z,
        lhs,
        rhs,
        relative_discrepancy: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// Reproducible random `(Y, Z)` eigenvalue pairs in `[−2, 2]`.
pub fn hciz_random_pairs(seed: u64, count: usize) -> Vec<([f64; 2], [f64; 2])> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut draw = || [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            (draw(), draw())
        })
        .collect()
}

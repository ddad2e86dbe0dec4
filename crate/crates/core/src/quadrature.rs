//! Composite Gauss–Legendre quadrature with panel-halving error estimates.

use std::sync::OnceLock;

use num_complex::Complex64;

pub const GL_POINTS: usize = 16;

/// Nodes and weights on `[−1, 1]` from Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// Result of a panel integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    /// Largest integrand modulus seen at a node.
    pub peak: f64,
    pub evaluations: usize,
}

impl std::ops::AddAssign for Quadrature {
    fn add_assign(&mut self, rhs: Quadrature) {
        self.value += rhs.value;
        self.error += rhs.error;
        self.peak = self.peak.max(rhs.peak);
        self.evaluations += rhs.evaluations;
    }
}

/// Relative size of rounding noise accepted as converged.
const ROUNDING_FLOOR: f64 = 1e-14;

/// Panel value and `∫|f|` over the panel.
fn panel<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64, peak: &mut f64) -> (Complex64, f64) {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(mid + half * xi);
        let n = v.norm();
        *peak = peak.max(n);
        mass += n * wi;
        sum += v * *wi;
    }
    (sum * half, mass * half.abs())
}

/// Integrate `f` over `[a, b]`, halving panels until the 16-point value and the
/// sum over its two halves agree to `tol` (absolute, per panel share).
pub fn adaptive<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64, tol: f64, max_depth: u32) -> Quadrature {
    let mut peak = 0.0;
    let (whole, _) = panel(f, a, b, &mut peak);
    let mut out = refine(f, a, b, whole, tol, max_depth, &mut peak);
    out.peak = peak;
    out
}

fn refine<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    peak: &mut f64,
) -> Quadrature {
    let m = 0.5 * (a + b);
    let (left, lm) = panel(f, a, m, peak);
    let (right, rm) = panel(f, m, b, peak);
    let split = left + right;
    let err = (split - whole).norm();
    if err <= tol || err <= ROUNDING_FLOOR * (lm + rm) || depth == 0 {
        return Quadrature {
            value: split,
            error: err,
            peak: 0.0,
            evaluations: 3 * GL_POINTS,
        };
    }
    let mut q = refine(f, a, m, left, 0.5 * tol, depth - 1, peak);
    q += refine(f, m, b, right, 0.5 * tol, depth - 1, peak);
    q.evaluations += 3 * GL_POINTS;
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..32 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_near_singularity() {
        // ∫_0^1 1/(t² + ε²) dt = atan(1/ε)/ε
        let eps = 1e-3;
        let mut f = |t: f64| Complex64::new(1.0 / (t * t + eps * eps), 0.0);
        let q = adaptive(&mut f, 0.0, 1.0, 1e-10, 40);
        let exact = (1.0 / eps).atan() / eps;
        assert!((q.value.re - exact).abs() < 1e-8);
        assert!(q.error < 1e-9);
    }
}

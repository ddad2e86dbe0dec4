//! Mellin–Barnes evaluation of the adapted basis,
//! `φ̃_k(x) = C_k/(2πi) ∫ Γ(1−k−s) Π Γ(s+a_l) / Π Γ(s−b_m) ζ^s ds`
//! with `a_l = 1/(βc_l)`, `b_m = 1/(βd_m)` and `ζ = −κx`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_real, ln_gamma};
use crate::quadrature::{adaptive, Quadrature};
use crate::rational::{from_f64, int, to_f64, Rational};
use crate::weights::WeightData;

pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourKind {
    /// Hairpin from `+∞ − iδ` around the right poles back to `+∞ + iδ`.
    RightLoop,
    /// The line `Re s = σ`, refined near the real axis.
    VerticalWithDetour,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ContourSpec {
    /// `None` picks the loop for `L ≤ M`, the vertical line for `L > M+1`, and
    /// at `L = M+1` the vertical line when `|ζ| < 1` and `|arg ζ| ≤ π/2`.
    pub kind: Option<ContourKind>,
    /// Abscissa of the vertical line, or of the turning segment of the loop.
    pub sigma: Option<f64>,
    /// Fixed truncation; `None` truncates once the integrand has decayed.
    pub height: Option<f64>,
    /// Initial Gauss–Legendre panels per unit length.
    pub nodes_per_unit: usize,
    pub detour_radius: f64,
    /// Target error, absolute for values of modulus below one and relative above.
    pub tolerance: f64,
    /// Margin ε kept from the edge of the sector.
    pub sector_margin: f64,
    /// Furthest distance the contour may be followed before giving up.
    pub max_extent: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            kind: None,
            sigma: None,
            height: None,
            nodes_per_unit: 4,
            detour_radius: 0.25,
            tolerance: 1e-10,
            sector_margin: 0.05,
            max_extent: 4000.0,
        }
    }
}

const DECAY_RATIO: f64 = 1e-18;

/// Which published convergence sectors contain `arg ζ`.
#[derive(Debug, Clone, Serialize)]
pub struct SectorReport {
    pub arg_zeta: f64,
    /// `|arg ζ| < (L−M−1)π/2`, the one enforced.
    pub conservative_bound: f64,
    pub within_conservative: bool,
    /// `|arg ζ| < (L−M+1)π/2`.
    pub within_two_sided: bool,
    /// `0 < arg ζ < (L−M+1)π/2`.
    pub within_one_sided: bool,
}

pub fn sector_report(weights: &WeightData, arg_zeta: f64) -> SectorReport {
    let excess = weights.c().len() as f64 - weights.d().len() as f64;
    let conservative_bound = (excess - 1.0) * PI / 2.0;
    let wide = (excess + 1.0) * PI / 2.0;
    SectorReport {
        arg_zeta,
        conservative_bound,
        within_conservative: arg_zeta.abs() < conservative_bound,
        within_two_sided: arg_zeta.abs() < wide,
        within_one_sided: arg_zeta > 0.0 && arg_zeta < wide,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MellinValue {
    pub value: ComplexValue,
    pub error_estimate: f64,
    pub kind: ContourKind,
    pub sigma: f64,
    /// Distance followed along the contour before truncation.
    pub extent: f64,
    pub detour_radius: f64,
    pub evaluations: usize,
    pub sector: Option<SectorReport>,
}

/// `C_k = Π Γ(−b_m) / ((−β)^{k−1} Π Γ(a_l))`.
pub fn normalization_c(weights: &WeightData, k: i64) -> Result<f64> {
    let mut num = 1.0;
    for b in weights.b_params() {
        num *= gamma_real(-b)?;
    }
    let mut den = (-to_f64(weights.beta())).powi((k - 1) as i32);
    for a in weights.a_params() {
        den *= gamma_real(a)?;
    }
    Ok(num / den)
}

/// `ln` of the integrand; poles of the denominator Γ's give `None` (a zero).
struct Integrand {
    k: i64,
    a: Vec<f64>,
    b: Vec<f64>,
    log_zeta: Complex64,
    /// Subtracted from the log so that values stay near unit scale.
    log_scale: f64,
    /// Extra factor `s^power`.
    power: u32,
}

impl Integrand {
    fn new(weights: &WeightData, k: i64, log_zeta: Complex64, log_scale: f64) -> Self {
        Integrand {
            k,
            a: weights.a_params(),
            b: weights.b_params(),
            log_zeta,
            log_scale,
            power: 0,
        }
    }

    fn eval(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut ln = match ln_gamma(one * (1 - self.k) as f64 - s) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        for a in &self.a {
            match ln_gamma(s + *a) {
                Ok(v) => ln += v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            }
        }
        for b in &self.b {
            match ln_gamma(s - *b) {
                Ok(v) => ln -= v,
                Err(_) => return Complex64::new(0.0, 0.0),
            }
        }
        let v = (ln + s * self.log_zeta - self.log_scale).exp();
        if self.power == 0 {
            v
        } else {
            v * s.powu(self.power)
        }
    }

    /// Rightmost pole of the left family, if any.
    fn left_pole(&self) -> Option<f64> {
        self.a.iter().map(|a| -a).fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.max(p))))
    }

    fn right_pole(&self) -> f64 {
        (1 - self.k) as f64
    }
}

/// Integrate `f` over `[start, ∞)` in unit blocks until the block peak has
/// fallen below `DECAY_RATIO` of the running peak twice in a row.
fn integrate_to_infinity<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    start: f64,
    spec: &ContourSpec,
    tol: f64,
    min_extent: f64,
) -> Result<(Quadrature, f64)> {
    let mut total = Quadrature::default();
    let mut running_peak: f64 = 0.0;
    let mut quiet = 0;
    let mut t = start;
    let step = 1.0;
    let sub = spec.nodes_per_unit.max(1);
    let limit = spec.height.map(|h| start + h);
    loop {
        let end = limit.map_or(t + step, |l| (t + step).min(l));
        let h = (end - t) / sub as f64;
        let mut block = Quadrature::default();
        for i in 0..sub {
            let a = t + i as f64 * h;
            block += adaptive(f, a, a + h, tol / sub as f64, 18);
        }
        if !block.value.re.is_finite() || !block.value.im.is_finite() {
            return Err(Error::Domain(format!("integrand not finite near {t}")));
        }
        running_peak = running_peak.max(block.peak);
        total += block;
        t = end;
        if let Some(l) = limit {
            if t >= l {
                break;
            }
            continue;
        }
        if block.peak < DECAY_RATIO * running_peak && t - start >= min_extent {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        if t - start > spec.max_extent {
            return Err(Error::accuracy(
                "integrand did not decay within the maximum contour extent",
                block.peak / running_peak.max(f64::MIN_POSITIVE),
                DECAY_RATIO,
            ));
        }
    }
    total.peak = running_peak;
    Ok((total, t - start))
}

struct Raw {
    integral: Quadrature,
    sigma: f64,
    extent: f64,
    detour: f64,
    kind: ContourKind,
}

fn loop_integral(f: &Integrand, spec: &ContourSpec, tol: f64) -> Result<Raw> {
    let right = f.right_pole();
    let (s_l, gap) = match f.left_pole() {
        Some(p) => {
            if p >= right {
                return Err(Error::Domain(format!(
                    "left pole {p} is not separated from the right poles starting at {right}"
                )));
            }
            (0.5 * (p + right), right - p)
        }
        None => (right - 0.5, 1.0),
    };
    let s_l = match spec.sigma {
        Some(sig) => {
            if f.left_pole().is_some_and(|p| sig <= p) || sig >= right {
                return Err(Error::Argument(format!("sigma {sig} does not separate the poles")));
            }
            sig
        }
        None => s_l,
    };
    let delta = spec.detour_radius.min(0.5 * gap);
    let mut legs = |t: f64| f.eval(Complex64::new(t, delta)) - f.eval(Complex64::new(t, -delta));
    let (mut q, extent) = integrate_to_infinity(&mut legs, s_l, spec, tol, right - s_l + 2.0)?;
    let mut upright = |y: f64| f.eval(Complex64::new(s_l, y)) * Complex64::new(0.0, 1.0);
    q += adaptive(&mut upright, -delta, delta, tol, 18);
    Ok(Raw {
        integral: q,
        sigma: s_l,
        extent,
        detour: delta,
        kind: ContourKind::RightLoop,
    })
}

fn vertical_integral(f: &Integrand, sigma: f64, spec: &ContourSpec, tol: f64) -> Result<Raw> {
    let i = Complex64::new(0.0, 1.0);
    let mut up = |t: f64| f.eval(Complex64::new(sigma, t)) * i;
    let mut down = |t: f64| f.eval(Complex64::new(sigma, -t)) * i;
    let (mut q, e1) = integrate_to_infinity(&mut up, 0.0, spec, 0.5 * tol, 1.0)?;
    let (q2, e2) = integrate_to_infinity(&mut down, 0.0, spec, 0.5 * tol, 1.0)?;
    q += q2;
    Ok(Raw {
        integral: q,
        sigma,
        extent: e1.max(e2),
        detour: spec.detour_radius,
        kind: ContourKind::VerticalWithDetour,
    })
}

fn default_sigma(f: &Integrand) -> Result<f64> {
    let right = f.right_pole();
    match f.left_pole() {
        Some(p) if p >= right => Err(Error::Domain(format!(
            "left pole {p} is not separated from the right poles starting at {right}"
        ))),
        Some(p) => Ok(0.5 * (p + right)),
        None => Ok(right - 0.5),
    }
}

/// `φ̃_k(x)` with the principal branch of `ζ^s`.
pub fn mellin_barnes_phi(weights: &WeightData, k: i64, x: ComplexValue, spec: &ContourSpec) -> Result<MellinValue> {
    let zeta = -to_f64(&weights.kappa()) * x;
    mellin_barnes_phi_with_branch(weights, k, x, zeta.arg(), spec)
}

/// As [`mellin_barnes_phi`], with `arg ζ` supplied by the caller (needed on the negative real axis of ζ).
pub fn mellin_barnes_phi_with_branch(
    weights: &WeightData,
    k: i64,
    x: ComplexValue,
    arg_zeta: f64,
    spec: &ContourSpec,
) -> Result<MellinValue> {
    if x.norm() == 0.0 || !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::Argument("x must be finite and nonzero".into()));
    }
    let zeta_abs = to_f64(&weights.kappa()).abs() * x.norm();
    evaluate(weights, k, Complex64::new(zeta_abs.ln(), arg_zeta), 0, spec)
}

/// `C_k/(2πi) ∫ Γ(1−k−s) Π Γ(s+a_l) / Π Γ(s−b_m) s^m e^{s log ζ} ds` for a given `log ζ`.
pub fn mellin_barnes_moment(
    weights: &WeightData,
    k: i64,
    log_zeta: Complex64,
    m: u32,
    spec: &ContourSpec,
) -> Result<MellinValue> {
    evaluate(weights, k, log_zeta, m, spec)
}

fn choose_kind(weights: &WeightData, log_zeta: Complex64, spec: &ContourSpec) -> ContourKind {
    let (l, m) = (weights.c().len(), weights.d().len());
    // At L = M+1 the loop converges only geometrically in |ζ|; inside the disc
    // the vertical line decays like e^{−(π−|arg ζ|)|t|} and is preferred off the
    // negative axis. Outside the disc the loop is kept so the default refuses.
    let vertical_edge = l == m + 1 && log_zeta.im.abs() <= PI / 2.0 && log_zeta.re < 0.0;
    spec.kind.unwrap_or(if l > m + 1 || vertical_edge {
        ContourKind::VerticalWithDetour
    } else {
        ContourKind::RightLoop
    })
}

fn check_convergence(weights: &WeightData, kind: ContourKind, log_zeta: Complex64, spec: &ContourSpec) -> Result<Option<SectorReport>> {
    let (l, m) = (weights.c().len() as i64, weights.d().len() as i64);
    let arg_zeta = log_zeta.im;
    let zeta_abs = log_zeta.re.exp();
    let mut sector = None;
    if l > m + 1 {
        let report = sector_report(weights, arg_zeta);
        if arg_zeta.abs() >= report.conservative_bound - spec.sector_margin {
            return Err(Error::Domain(format!(
                "arg(-kappa x) = {arg_zeta} outside the sector |arg| < {} - {}",
                report.conservative_bound, spec.sector_margin
            )));
        }
        sector = Some(report);
    }
    match kind {
        ContourKind::RightLoop => {
            if l > m + 1 {
                return Err(Error::Domain("the loop contour diverges for L > M+1".into()));
            }
            if l == m + 1 && zeta_abs >= 1.0 {
                return Err(Error::Domain(format!(
                    "|kappa x| = {zeta_abs} is outside the unit disc required by the loop contour"
                )));
            }
        }
        ContourKind::VerticalWithDetour => {
            let decay = (l - m + 1) as f64 * PI / 2.0 - arg_zeta.abs();
            if decay <= 0.0 {
                return Err(Error::Domain(format!(
                    "the vertical contour does not converge at arg(-kappa x) = {arg_zeta}"
                )));
            }
        }
    }
    Ok(sector)
}

fn evaluate(weights: &WeightData, k: i64, log_zeta: Complex64, power: u32, spec: &ContourSpec) -> Result<MellinValue> {
    let kind = choose_kind(weights, log_zeta, spec);
    let sector = check_convergence(weights, kind, log_zeta, spec)?;
    let c = normalization_c(weights, k)?;
    let probe = Integrand::new(weights, k, log_zeta, 0.0);
    let sigma = match (kind, spec.sigma) {
        (ContourKind::VerticalWithDetour, Some(s)) => {
            if probe.left_pole().is_some_and(|p| s <= p) || s >= probe.right_pole() {
                return Err(Error::Argument(format!("sigma {s} does not separate the poles")));
            }
            s
        }
        _ => default_sigma(&probe)?,
    };
    let log_scale = sigma * log_zeta.re;
    let mut f = Integrand::new(weights, k, log_zeta, log_scale);
    f.power = power;
    let scale = c.abs() / (2.0 * PI);
    let tol = spec.tolerance / scale.max(f64::MIN_POSITIVE);
    let raw = match kind {
        ContourKind::RightLoop => loop_integral(&f, spec, tol)?,
        ContourKind::VerticalWithDetour => vertical_integral(&f, sigma, spec, tol)?,
    };
    finish(raw, c, log_scale, spec, sector)
}

/// A fixed-node rule `Σ w_q g(s_q) ≈ ∫ g(s) ds` along the loop contour for index `k`,
/// truncated where the kernel at `log_zeta` has decayed.
pub fn loop_quadrature_nodes(
    weights: &WeightData,
    k: i64,
    log_zeta: Complex64,
    panels_per_unit: usize,
    spec: &ContourSpec,
) -> Result<Vec<(Complex64, Complex64)>> {
    check_convergence(weights, ContourKind::RightLoop, log_zeta, spec)?;
    let f = Integrand::new(weights, k, log_zeta, 0.0);
    let right = f.right_pole();
    let s_l = default_sigma(&f)?;
    let gap = f.left_pole().map_or(1.0, |p| right - p);
    let delta = spec.detour_radius.min(0.5 * gap);
    let mut peak: f64 = 0.0;
    let mut quiet = 0;
    let mut end = s_l;
    while quiet < 2 {
        end += 1.0;
        let v = f.eval(Complex64::new(end, delta)).norm();
        peak = peak.max(v);
        if v < DECAY_RATIO * peak && end - s_l > right - s_l + 2.0 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if end - s_l > spec.max_extent {
            return Err(Error::accuracy("kernel did not decay along the loop", v / peak, DECAY_RATIO));
        }
    }
    let (x, w) = crate::quadrature::gauss_legendre(crate::quadrature::GL_POINTS);
    let mut nodes = Vec::new();
    let h = 1.0 / panels_per_unit.max(1) as f64;
    let panels = ((end - s_l) / h).ceil() as usize;
    for p in 0..panels {
        let a = s_l + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let t = a + 0.5 * h * (1.0 + xi);
            let wt = 0.5 * h * wi;
            nodes.push((Complex64::new(t, delta), Complex64::new(wt, 0.0)));
            nodes.push((Complex64::new(t, -delta), Complex64::new(-wt, 0.0)));
        }
    }
    let vertical_panels = (2.0 * delta / h).ceil().max(1.0) as usize;
    let hv = 2.0 * delta / vertical_panels as f64;
    for p in 0..vertical_panels {
        let a = -delta + p as f64 * hv;
        for (xi, wi) in x.iter().zip(&w) {
            let y = a + 0.5 * hv * (1.0 + xi);
            nodes.push((Complex64::new(s_l, y), Complex64::new(0.0, 0.5 * hv * wi)));
        }
    }
    Ok(nodes)
}

/// The kernel `C_k Γ(1−k−s) Π Γ(s+a_l) / (2πi Π Γ(s−b_m)) e^{s log ζ}` at one point.
pub fn kernel_value(weights: &WeightData, k: i64, log_zeta: Complex64, s: Complex64) -> Result<Complex64> {
    let c = normalization_c(weights, k)?;
    let f = Integrand::new(weights, k, log_zeta, 0.0);
    Ok(f.eval(s) * c / Complex64::new(0.0, 2.0 * PI))
}

fn finish(raw: Raw, c: f64, log_scale: f64, spec: &ContourSpec, sector: Option<SectorReport>) -> Result<MellinValue> {
    let factor = c / (2.0 * PI);
    let normalized = raw.integral.value * Complex64::new(0.0, -1.0) * factor;
    let norm_err = raw.integral.error * factor.abs();
    if !normalized.re.is_finite() || !normalized.im.is_finite() {
        return Err(Error::Domain("Mellin-Barnes integral is not finite".into()));
    }
    let allowed = spec.tolerance * normalized.norm().max(1.0);
    if norm_err > allowed {
        return Err(Error::accuracy("unresolved Mellin-Barnes quadrature", norm_err, allowed));
    }
    let s = log_scale.exp();
    Ok(MellinValue {
        value: normalized * s,
        error_estimate: norm_err * s,
        kind: raw.kind,
        sigma: raw.sigma,
        extent: raw.extent,
        detour_radius: raw.detour,
        evaluations: raw.integral.evaluations,
        sector,
    })
}

/// `φ̃_k` minus its series through `x^{1−k+n}`, as the integral over `Re s = 1−k+n+1/2`.
pub fn shifted_remainder(
    weights: &WeightData,
    k: i64,
    x: ComplexValue,
    n: usize,
    spec: &ContourSpec,
) -> Result<MellinValue> {
    let (l, m) = (weights.c().len() as i64, weights.d().len() as i64);
    let zeta = -to_f64(&weights.kappa()) * x;
    let arg_zeta = zeta.arg();
    let decay = (l - m + 1) as f64 * PI / 2.0 - arg_zeta.abs();
    if decay <= 0.0 {
        return Err(Error::Domain("shifted contour does not converge".into()));
    }
    let sigma = (1 - k) as f64 + n as f64 + 0.5;
    let log_zeta = Complex64::new(zeta.norm().ln(), arg_zeta);
    let log_scale = sigma * zeta.norm().ln();
    let f = Integrand::new(weights, k, log_zeta, log_scale);
    let c = normalization_c(weights, k)?;
    let tol = spec.tolerance / (c.abs() / (2.0 * PI)).max(f64::MIN_POSITIVE);
    let raw = vertical_integral(&f, sigma, spec, tol)?;
    let sector = (l > m + 1).then(|| sector_report(weights, arg_zeta));
    finish(raw, c, log_scale, spec, sector)
}

/// Floating-point partial sum `Σ_{j<n_terms} a_j x^{1−k+j}` of the `φ_k` series.
pub fn series_reference(weights: &WeightData, k: i64, x: ComplexValue, n_terms: usize) -> Result<ComplexValue> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(to_f64(&(weights.beta() * weights.rho_numeric(-k)?)), 0.0) * x.powi((1 - k) as i32);
    let beta = to_f64(weights.beta());
    let (c, d) = float_params(weights);
    for j in 0..n_terms {
        sum += term;
        let mm = (j as i64 + 1 - k) as f64 * beta;
        term *= x * g_float(&c, &d, mm)? / (j as f64 + 1.0);
    }
    Ok(sum)
}

/// Exact complex rational, enough arithmetic for summing the reference series.
#[derive(Clone)]
struct ComplexRational {
    re: Rational,
    im: Rational,
}

impl ComplexRational {
    fn from_f64(z: ComplexValue) -> Result<Self> {
        Ok(ComplexRational {
            re: from_f64(z.re)?,
            im: from_f64(z.im)?,
        })
    }

    fn mul(&self, o: &Self) -> Self {
        ComplexRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        ComplexRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    fn recip(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        ComplexRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = ComplexRational {
            re: Rational::one(),
            im: Rational::zero(),
        };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    fn to_complex(&self) -> ComplexValue {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// The series summed exactly (in rationals at the binary value of `x`) until
/// its terms are negligible; `L ≤ M+1` only.
pub fn series_converged(weights: &WeightData, k: i64, x: ComplexValue) -> Result<ComplexValue> {
    let (l, m) = (weights.c().len(), weights.d().len());
    if l > m + 1 {
        return Err(Error::Domain("the series diverges for L > M+1".into()));
    }
    let zeta_abs = to_f64(&weights.kappa()).abs() * x.norm();
    if l == m + 1 && zeta_abs >= 1.0 {
        return Err(Error::Domain(format!("|kappa x| = {zeta_abs} outside the disc of convergence")));
    }
    if x.norm() == 0.0 {
        return Err(Error::Argument("x must be nonzero".into()));
    }
    let xr = ComplexRational::from_f64(x)?;
    let beta = weights.beta();
    let mut term = xr.powi(1 - k).scale(&(beta * weights.rho_numeric(-k)?));
    let mut sum = ComplexRational {
        re: Rational::zero(),
        im: Rational::zero(),
    };
    let mut small = 0;
    for j in 0..20_000i64 {
        sum.re += &term.re;
        sum.im += &term.im;
        let ratio = weights.g_at(&(beta * int(j + 1 - k)))? / int(j + 1);
        term = term.mul(&xr).scale(&ratio);
        if term.to_complex().norm() <= 1e-20 * sum.to_complex().norm() && j > k.abs() + 2 {
            small += 1;
            if small > 3 {
                return Ok(sum.to_complex());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::accuracy("series did not converge", term.to_complex().norm(), 1e-20))
}

fn float_params(weights: &WeightData) -> (Vec<f64>, Vec<f64>) {
    (
        weights.c().iter().map(to_f64).collect(),
        weights.d().iter().map(to_f64).collect(),
    )
}

fn g_float(c: &[f64], d: &[f64], z: f64) -> Result<f64> {
    let num: f64 = c.iter().map(|ci| 1.0 + ci * z).product();
    let den: f64 = d.iter().map(|di| 1.0 - di * z).product();
    if den == 0.0 {
        return Err(Error::Domain(format!("G has a pole at {z}")));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Serialize)]
pub struct RemainderPoint {
    pub x: ComplexValue,
    pub remainder: f64,
    /// `remainder / |x|^{1−k+N+1/2}`.
    pub bound_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub n: usize,
    pub points: Vec<RemainderPoint>,
    /// Least-squares slope of `ln remainder` against `ln |x|`.
    pub slope: f64,
    /// Largest bound ratio relative to the one at the largest `|x|`; bounded
    /// remainders keep this near or below one.
    pub ratio_growth: f64,
    pub sector: SectorReport,
}

/// Remainders along the ray `arg(−κx) = ray_angle` at the moduli `x_moduli`.
pub fn asymptotic_remainder_check(
    weights: &WeightData,
    k: i64,
    ray_angle: f64,
    n: usize,
    x_moduli: &[f64],
    spec: &ContourSpec,
) -> Result<AsymptoticReport> {
    let (l, m) = (weights.c().len(), weights.d().len());
    if l <= m + 1 {
        return Err(Error::Argument("asymptotic check requires L > M+1".into()));
    }
    let sector = sector_report(weights, ray_angle);
    if ray_angle.abs() >= sector.conservative_bound - spec.sector_margin {
        return Err(Error::Domain(format!("ray {ray_angle} outside the sector")));
    }
    let kappa = to_f64(&weights.kappa());
    let direction = Complex64::from_polar(1.0, ray_angle) * (-kappa.signum());
    let exponent = (1 - k) as f64 + n as f64 + 0.5;
    let mut points = Vec::with_capacity(x_moduli.len());
    for &r in x_moduli {
        let x = direction * r;
        let rem = shifted_remainder(weights, k, x, n, spec)?;
        let remainder = rem.value.norm();
        points.push(RemainderPoint {
            x,
            remainder,
            bound_ratio: remainder / r.powf(exponent),
        });
    }
    let slope = loglog_slope(&points);
    let reference = points
        .iter()
        .max_by(|a, b| a.x.norm().total_cmp(&b.x.norm()))
        .map_or(1.0, |p| p.bound_ratio);
    let max = points.iter().map(|p| p.bound_ratio).fold(f64::MIN, f64::max);
    Ok(AsymptoticReport {
        n,
        points,
        slope,
        ratio_growth: max / reference,
        sector,
    })
}

fn loglog_slope(points: &[RemainderPoint]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.x.norm().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.remainder.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRelationReport {
    pub k: i64,
    pub x: f64,
    pub step: f64,
    /// `x Π(1+βc𝒟) φ̃_k`.
    pub lhs: ComplexValue,
    /// `Π(1−βd(𝒟−1)) (𝒟+k−1) φ̃_k`.
    pub rhs: ComplexValue,
    pub relative_residual: f64,
}

/// Polynomial coefficients (ascending) of `Π (u_i + v_i t)`.
fn linear_product(factors: impl Iterator<Item = (f64, f64)>) -> Vec<f64> {
    let mut poly = vec![1.0];
    for (u, v) in factors {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            next[i] += u * p;
            next[i + 1] += v * p;
        }
        poly = next;
    }
    poly
}

/// Central differences in `y = ln x` of orders `0..=4`, accurate to `O(h²)`.
fn central_derivatives(g: &[Complex64; 5], h: f64) -> [Complex64; 5] {
    let [m2, m1, z, p1, p2] = *g;
    [
        z,
        (p1 - m1) / (2.0 * h),
        (p1 - 2.0 * z + m1) / (h * h),
        (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h.powi(3)),
        (p2 - 4.0 * p1 + 6.0 * z - 4.0 * m1 + m2) / h.powi(4),
    ]
}

/// Checks `x G(β𝒟) φ̃_k = (𝒟+k−1) φ̃_k` at `x > 0` in its polynomial form,
/// with `𝒟` by central differences and one step-halving Richardson pass.
pub fn eigen_relation_residual(weights: &WeightData, k: i64, x: f64, step: f64, spec: &ContourSpec) -> Result<EigenRelationReport> {
    let beta = to_f64(weights.beta());
    let (c, d) = float_params(weights);
    let lhs_poly = linear_product(c.iter().map(|ci| (1.0, beta * ci)));
    let rhs_poly = {
        let mut factors: Vec<(f64, f64)> = d.iter().map(|di| (1.0 + beta * di, -beta * di)).collect();
        factors.push(((k - 1) as f64, 1.0));
        linear_product(factors.into_iter())
    };
    if lhs_poly.len().max(rhs_poly.len()) > 5 {
        return Err(Error::Capacity("finite differences implemented up to fourth order".into()));
    }
    if x <= 0.0 {
        return Err(Error::Domain("eigen-relation check needs x > 0".into()));
    }
    let y0 = x.ln();
    let derivs = |h: f64| -> Result<[Complex64; 5]> {
        let mut g = [Complex64::new(0.0, 0.0); 5];
        for (slot, i) in g.iter_mut().zip(-2i32..=2) {
            *slot = mellin_barnes_phi(weights, k, Complex64::new((y0 + i as f64 * h).exp(), 0.0), spec)?.value;
        }
        Ok(central_derivatives(&g, h))
    };
    let coarse = derivs(step)?;
    let fine = derivs(step / 2.0)?;
    let dd: Vec<Complex64> = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    let apply = |poly: &[f64]| -> Complex64 { poly.iter().zip(&dd).map(|(p, v)| v * *p).sum() };
    let lhs = apply(&lhs_poly) * x;
    let rhs = apply(&rhs_poly);
    Ok(EigenRelationReport {
        k,
        x,
        step,
        lhs,
        rhs,
        relative_residual: (lhs - rhs).norm() / lhs.norm().max(rhs.norm()),
    })
}

/// `φ̃_k` for `G(z) = (1 + c_1 z)(1 + c_2 z)`, the three-branch-point case.
pub fn belyi_case_eval(
    c1: &crate::Rational,
    c2: &crate::Rational,
    beta: &crate::Rational,
    k: i64,
    x: ComplexValue,
) -> Result<MellinValue> {
    let weights = WeightData::new(vec![c1.clone(), c2.clone()], vec![], beta.clone())?;
    mellin_barnes_phi(&weights, k, x, &ContourSpec::default())
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

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn normalization_examples() {
        let triv = w(&[], &[]);
        assert_eq!(normalization_c(&triv, 1).unwrap(), 1.0);
        assert!((normalization_c(&triv, 2).unwrap() + 7.0 / 4.0).abs() < 1e-15);
        // βc = 1/2
        let half = WeightData::with_guard_bound(vec![rat(7, 8)], vec![], rat(4, 7), 1).unwrap();
        assert!((normalization_c(&half, 1).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_relation_by_finite_differences() {
        for weights in [w(&[], &[]), w(&[], &[(1, 5)]), w(&[(1, 2)], &[(1, 5)]), w(&[(1, 2)], &[])] {
            for k in [-1, 1, 2] {
                let r = eigen_relation_residual(&weights, k, 0.3, 0.02, &ContourSpec::default()).unwrap();
                assert!(r.relative_residual < 1e-5, "{k}: {r:?}");
            }
        }
    }

    #[test]
    fn exponential() {
        let v = mellin_barnes_phi(&w(&[], &[]), 1, Complex64::new(0.5, 0.0), &ContourSpec::default()).unwrap();
        assert!((v.value - Complex64::new(0.5f64.exp(), 0.0)).norm() < 1e-9);
        assert_eq!(v.kind, ContourKind::RightLoop);
    }

    #[test]
    fn binomial_closed_form() {
        // βc = 1/3 gives (1 − x/3)^{−3}.
        let weights = WeightData::with_guard_bound(vec![rat(7, 12)], vec![], rat(4, 7), 2).unwrap();
        let v = mellin_barnes_phi(&weights, 1, Complex64::new(-1.0, 0.0), &ContourSpec::default()).unwrap();
        assert!((v.value.re - 0.421875).abs() < 1e-8, "{}", v.value);
        assert!(v.value.im.abs() < 1e-8);
    }

    #[test]
    fn bessel_type_series() {
        let weights = w(&[], &[(1, 5)]);
        let x = Complex64::new(1.0, 0.0);
        let v = mellin_barnes_phi(&weights, 1, x, &ContourSpec::default()).unwrap();
        let s = series_converged(&weights, 1, x).unwrap();
        assert!(rel(v.value, s) < 1e-8);
    }

    #[test]
    fn series_reference_basics() {
        for weights in [w(&[], &[]), w(&[(1, 2)], &[(1, 5)]), w(&[(1, 2), (1, 3)], &[])] {
            let one = series_reference(&weights, 1, Complex64::new(0.7, 0.2), 1).unwrap();
            assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let e = series_reference(&w(&[], &[]), 1, Complex64::new(0.5, 0.0), 20).unwrap();
        assert!((e.re - 0.5f64.exp()).abs() < 1e-12);
        let weights = w(&[(1, 2), (1, 3)], &[]);
        let x = Complex64::new(0.01, 0.02);
        let a = series_reference(&weights, 1, x, 4).unwrap();
        let b = series_reference(&weights, 1, x, 5).unwrap();
        let phi = crate::spectral::phi_series(&weights, 1, 5).unwrap();
        let expect = Complex64::new(to_f64(&phi.coefficients[4]), 0.0) * x.powi(4);
        assert!((b - a - expect).norm() < 1e-15);
    }

    #[test]
    fn loop_matches_series_for_several_k() {
        let grid = [w(&[], &[]), w(&[], &[(1, 5)]), w(&[(1, 2)], &[(1, 5)])];
        let xs = [0.3, -0.3, 1.0, -1.0].map(|r| Complex64::new(r, 0.0));
        for weights in &grid {
            for k in [-1, 0, 1, 2, 3] {
                for x in xs.iter().copied().chain([Complex64::new(0.0, 2.0)]) {
                    let v = mellin_barnes_phi(weights, k, x, &ContourSpec::default()).unwrap();
                    let s = series_converged(weights, k, x).unwrap();
                    assert!(rel(v.value, s) < 1e-8, "k = {k}, x = {x}: {} vs {s}", v.value);
                }
            }
        }
    }

    #[test]
    fn loop_outside_disc_rejected() {
        let weights = w(&[(1, 2)], &[]);
        let r = mellin_barnes_phi(&weights, 1, Complex64::new(4.0, 0.0), &ContourSpec::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn unseparated_poles_rejected() {
        // a = 3.5 < k − 1 for k = 5
        let weights = w(&[(1, 2)], &[]);
        let r = mellin_barnes_phi(&weights, 5, Complex64::new(0.3, 0.0), &ContourSpec::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn belyi_small_x_limit() {
        let (c1, c2, beta) = (rat(1, 2), rat(1, 3), rat(4, 7));
        let v = belyi_case_eval(&c1, &c2, &beta, 1, Complex64::new(-1e-6, 0.0)).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-4);
        assert_eq!(v.kind, ContourKind::VerticalWithDetour);
        let weights = WeightData::new(vec![c1.clone(), c2.clone()], vec![], beta.clone()).unwrap();
        let direct = mellin_barnes_phi(&weights, 1, Complex64::new(-1e-6, 0.0), &ContourSpec::default()).unwrap();
        assert_eq!(direct.value, v.value);
    }

    #[test]
    fn sector_enforced() {
        let weights = w(&[(1, 2), (1, 3)], &[]);
        // κ > 0 so x > 0 puts ζ on the negative axis.
        let r = mellin_barnes_phi(&weights, 1, Complex64::new(0.1, 0.0), &ContourSpec::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn shifted_remainder_consistent_with_subtraction() {
        let weights = w(&[(1, 2), (1, 3), (1, 5)], &[]);
        let x = Complex64::new(0.0, -0.5);
        let full = mellin_barnes_phi(&weights, 1, x, &ContourSpec::default()).unwrap();
        for n in [0usize, 2, 4] {
            let partial = series_reference(&weights, 1, x, n + 1).unwrap();
            let rem = shifted_remainder(&weights, 1, x, n, &ContourSpec::default()).unwrap();
            let diff = full.value - partial;
            assert!((rem.value - diff).norm() < 1e-9, "n = {n}: {} vs {diff}", rem.value);
        }
    }

    #[test]
    fn contour_shift_invariance() {
        let weights = w(&[(1, 2), (1, 3), (1, 5)], &[]);
        let x = Complex64::new(0.0, -0.3);
        let base = mellin_barnes_phi(&weights, 1, x, &ContourSpec::default()).unwrap();
        for ds in [-0.2, 0.2] {
            let spec = ContourSpec {
                sigma: Some(base.sigma + ds),
                ..ContourSpec::default()
            };
            let v = mellin_barnes_phi(&weights, 1, x, &spec).unwrap();
            assert!(rel(v.value, base.value) < 1e-9);
        }
    }
}

//! The hypergeometric tau-function as exact double expansions in Schur and
//! power-sum bases, with β kept formal.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::partition::{contents, enumerate_partitions, hook_product, z_order, Partition};
use crate::rational::{int, Rational};
use crate::series::{geometric_factor, linear_factor, BetaSeries};
use crate::weights::WeightData;

pub const DEFAULT_N_MAX: usize = 6;
pub const DEFAULT_D_MAX: usize = 4;

/// Relative precision needed for a series starting at `start` to be exact through `order`.
fn precision(start: i64, order: i64) -> usize {
    (order - start + 1).max(0) as usize
}

fn unit(len: usize) -> BetaSeries {
    if len == 0 {
        BetaSeries::new(0, Vec::new())
    } else {
        BetaSeries::one(len as i64 - 1)
    }
}

/// `G(iβ)` as a β-series with relative precision `len`.
fn g_series(weights: &WeightData, i: i64, len: usize) -> BetaSeries {
    let mut acc = unit(len);
    let iq = int(i);
    for cl in weights.c() {
        acc = &acc * &linear_factor(&(&iq * cl), len);
    }
    for dm in weights.d() {
        acc = &acc * &geometric_factor(&(&iq * dm), len);
    }
    acc
}

/// `r_i = β G(iβ)` as a β-series exact through `order`.
pub fn r_value(weights: &WeightData, i: i64, order: i64) -> Result<BetaSeries> {
    weights.check_index(i)?;
    Ok(g_series(weights, i, precision(1, order)).shift(1))
}

/// `ρ_i` as a Laurent series in β exact through `order`; `ρ_0 = 1`, `r_i = ρ_i / ρ_{i−1}`.
pub fn rho_value(weights: &WeightData, i: i64, order: i64) -> Result<BetaSeries> {
    weights.check_index(i)?;
    let len = precision(i, order);
    let mut acc = unit(len);
    if i > 0 {
        for j in 1..=i {
            acc = &acc * &g_series(weights, j, len);
        }
        Ok(acc.shift(i))
    } else {
        // 1/r_{−j} = β^{−1} Π(1 + jβd_m) / Π(1 − jβc_l)
        for j in 0..-i {
            let jq = int(j);
            for dm in weights.d() {
                acc = &acc * &linear_factor(&(&jq * dm), len);
            }
            for cl in weights.c() {
                acc = &acc * &geometric_factor(&(&jq * cl), len);
            }
        }
        Ok(acc.shift(i))
    }
}

/// `r_λ = Π_{(i,j) ∈ λ} r_{j−i}` exact through `order`.
pub fn content_product(weights: &WeightData, lambda: &Partition, order: i64) -> Result<BetaSeries> {
    let w = lambda.weight() as i64;
    let len = precision(w, order);
    if len == 0 {
        return Ok(BetaSeries::zero(order));
    }
    let mut acc = unit(len);
    for c in contents(lambda) {
        weights.check_index(c)?;
        acc = &acc * &g_series(weights, c, len);
    }
    Ok(acc.shift(w))
}

/// `Σ_λ r_λ / h(λ) · s_λ`, truncated to `|λ| ≤ n_max` and β-order `beta_order`.
#[derive(Debug, Clone, Serialize)]
pub struct TauSchurExpansion {
    pub n_max: usize,
    pub beta_order: i64,
    #[serde(serialize_with = "serialize_partition_map")]
    pub coeffs: BTreeMap<Partition, BetaSeries>,
}

fn serialize_partition_map<S: serde::Serializer, V: Serialize>(
    map: &BTreeMap<Partition, V>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = serializer.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

pub fn tau_schur(weights: &WeightData, n_max: usize, beta_order: i64) -> Result<TauSchurExpansion> {
    if n_max > weights.guard_bound() {
        return Err(Error::Capacity(format!(
            "n_max {n_max} exceeds guard bound {}",
            weights.guard_bound()
        )));
    }
    if beta_order < n_max as i64 {
        return Err(Error::Argument(format!(
            "beta_order {beta_order} must be at least n_max {n_max}"
        )));
    }
    let mut coeffs = BTreeMap::new();
    for n in 0..=n_max {
        let level: Vec<(Partition, BetaSeries)> = enumerate_partitions(n)?
            .into_par_iter()
            .map(|lam| {
                let h = BigRational::from_integer(hook_product(&lam));
                content_product(weights, &lam, beta_order).map(|r| {
                    let c = r.scale(&h.recip());
                    (lam, c)
                })
            })
            .collect::<Result<_>>()?;
        coeffs.extend(level);
    }
    Ok(TauSchurExpansion {
        n_max,
        beta_order,
        coeffs,
    })
}

/// Coefficients of `p_μ` and the weighted Hurwitz numbers read from them.
#[derive(Debug, Clone, Serialize)]
pub struct PowerSumExpansion {
    pub n_max: usize,
    /// Every `d ≤ d_max` is available for every `|μ| ≤ n_max`.
    pub d_max: usize,
    #[serde(serialize_with = "serialize_partition_map")]
    pub series: BTreeMap<Partition, BetaSeries>,
}

impl PowerSumExpansion {
    /// `H^d(μ)`: the coefficient of `β^{|μ|+d}` in the `p_μ` coefficient.
    pub fn hurwitz(&self, d: usize, mu: &Partition) -> Result<Rational> {
        let s = self.series.get(mu).ok_or_else(|| {
            Error::Capacity(format!("|mu| = {} exceeds n_max {}", mu.weight(), self.n_max))
        })?;
        s.coefficient((mu.weight() + d) as i64)
    }

    /// All stored `(μ, d, H^d(μ))`, including parity-forbidden entries.
    pub fn entries(&self) -> Vec<(Partition, usize, Rational)> {
        let mut out = Vec::new();
        for (mu, s) in &self.series {
            let n = mu.weight() as i64;
            for e in n..=s.order() {
                out.push((mu.clone(), (e - n) as usize, s.coefficient(e).expect("within order")));
            }
        }
        out
    }
}

pub fn schur_to_powersum(expansion: &TauSchurExpansion) -> Result<PowerSumExpansion> {
    let mut series = BTreeMap::new();
    for n in 0..=expansion.n_max {
        let table = CharacterTable::new(n)?;
        let level: Vec<(Partition, BetaSeries)> = table
            .partitions
            .par_iter()
            .enumerate()
            .map(|(mi, mu)| {
                let z = BigRational::from_integer(table.z[mi].clone());
                let mut acc = BetaSeries::zero(expansion.beta_order);
                for (li, lam) in table.partitions.iter().enumerate() {
                    let chi = &table.chi[li][mi];
                    if chi.is_zero() {
                        continue;
                    }
                    let term = expansion.coeffs[lam].scale(&(BigRational::from_integer(chi.clone()) / &z));
                    acc = &acc + &term;
                }
                (mu.clone(), acc)
            })
            .collect();
        series.extend(level);
    }
    Ok(PowerSumExpansion {
        n_max: expansion.n_max,
        d_max: (expansion.beta_order - expansion.n_max as i64).max(0) as usize,
        series,
    })
}

/// `H^d(μ)` from the Schur-to-power-sum conversion at the weight level of `μ`.
pub fn extract_weighted_hurwitz(weights: &WeightData, d: usize, mu: &Partition) -> Result<Rational> {
    let n = mu.weight();
    let order = (n + d) as i64;
    powersum_coefficient(weights, mu, order)?.coefficient(order)
}

/// The `p_μ` coefficient of τ as a β-series exact through `order`.
pub fn powersum_coefficient(weights: &WeightData, mu: &Partition, order: i64) -> Result<BetaSeries> {
    let n = mu.weight();
    if n > weights.guard_bound() {
        return Err(Error::Capacity(format!("|mu| = {n} exceeds guard bound")));
    }
    let table = CharacterTable::new(n)?;
    let mi = table.index_of(mu).expect("partition of its own weight");
    let z = BigRational::from_integer(z_order(mu));
    let terms: Vec<BetaSeries> = table
        .partitions
        .par_iter()
        .enumerate()
        .filter(|(li, _)| !table.chi[*li][mi].is_zero())
        .map(|(li, lam)| {
            let r = content_product(weights, lam, order)?;
            let h = BigRational::from_integer(hook_product(lam));
            Ok(r.scale(&(BigRational::from_integer(table.chi[li][mi].clone()) / (&z * h))))
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().fold(BetaSeries::zero(order), |acc, t| &acc + t))
}

/// `Π_{cells} G(content·β) / h(λ)` at the numeric β: the Schur coefficient of
/// τ with the partition-weight parameter set to one.
pub fn schur_coefficient_unit(weights: &WeightData, lambda: &Partition) -> Result<Rational> {
    let mut acc = Rational::one();
    for c in contents(lambda) {
        acc *= weights.g_lattice(c)?;
    }
    Ok(acc / BigRational::from_integer(hook_product(lambda)))
}

/// The `p_μ` coefficient of τ evaluated at the numeric β of `weights`.
pub fn powersum_coefficient_numeric(weights: &WeightData, mu: &Partition) -> Result<Rational> {
    let n = mu.weight();
    let table = CharacterTable::new(n)?;
    let mi = table.index_of(mu).expect("partition of its own weight");
    let z = BigRational::from_integer(z_order(mu));
    let beta_n = crate::rational::pow(weights.beta(), n as i64);
    let mut total = Rational::zero();
    for (li, lam) in table.partitions.iter().enumerate() {
        let chi = &table.chi[li][mi];
        if chi.is_zero() {
            continue;
        }
        total += schur_coefficient_unit(weights, lam)? * &beta_n * BigRational::from_integer(chi.clone()) / &z;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::weighted_hurwitz_direct;
    use crate::rational::{pow, rat};

    fn w(c: &[(i64, i64)], d: &[(i64, i64)]) -> WeightData {
        WeightData::new(
            c.iter().map(|&(p, q)| rat(p, q)).collect(),
            d.iter().map(|&(p, q)| rat(p, q)).collect(),
            rat(4, 7),
        )
        .unwrap()
    }

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn r_examples() {
        let r0 = r_value(&w(&[(1, 2)], &[(1, 5)]), 0, 5).unwrap();
        assert_eq!(r0.valuation(), Some(1));
        assert_eq!(r0.terms().count(), 1);
        let triv = r_value(&w(&[], &[]), 3, 4).unwrap();
        assert_eq!(triv.coefficient(1).unwrap(), int(1));
        assert!(triv.terms().count() == 1);
        let r2 = r_value(&w(&[(1, 1)], &[]), 2, 6).unwrap();
        assert_eq!(r2.coefficient(1).unwrap(), int(1));
        assert_eq!(r2.coefficient(2).unwrap(), int(2));
        assert_eq!(r2.coefficient(3).unwrap(), int(0));
    }

    #[test]
    fn rho_examples() {
        let triv = w(&[], &[]);
        let r0 = rho_value(&triv, 0, 3).unwrap();
        assert_eq!(r0.coefficient(0).unwrap(), int(1));
        let r3 = rho_value(&triv, 3, 5).unwrap();
        assert_eq!(r3.valuation(), Some(3));
        assert_eq!(r3.terms().count(), 1);
        let rm2 = rho_value(&triv, -2, 2).unwrap();
        assert_eq!(rm2.valuation(), Some(-2));
        assert_eq!(rm2.coefficient(-2).unwrap(), int(1));
        assert_eq!(rm2.terms().count(), 1);
    }

    #[test]
    fn r_rho_identity() {
        for weights in [w(&[(1, 2), (1, 3)], &[(1, 5)]), w(&[], &[(3, 4)]), w(&[(-2, 3)], &[])] {
            for i in -6..=6 {
                let order = 8;
                let lhs = &r_value(&weights, i, order + 10).unwrap() * &rho_value(&weights, i - 1, order + 10).unwrap();
                let rhs = rho_value(&weights, i, order).unwrap();
                for e in rhs.start()..=order {
                    assert_eq!(lhs.coefficient(e).unwrap(), rhs.coefficient(e).unwrap(), "i = {i}, e = {e}");
                }
            }
        }
    }

    #[test]
    fn rho_series_matches_numeric() {
        // With M = 0 and i ≥ 0 the series is a polynomial in β.
        let weights = w(&[(1, 2), (1, 3)], &[]);
        for i in 0..=4 {
            let s = rho_value(&weights, i, 3 * i + 2).unwrap();
            assert_eq!(s.evaluate(weights.beta()), weights.rho_numeric(i).unwrap());
        }
    }

    #[test]
    fn content_product_examples() {
        let c1 = rat(3, 5);
        let g = w(&[(3, 5)], &[]);
        let r = content_product(&g, &p(&[1]), 4).unwrap();
        assert_eq!(r.coefficient(1).unwrap(), int(1));
        assert_eq!(r.terms().count(), 1);
        let t = content_product(&w(&[], &[]), &p(&[2, 1]), 5).unwrap();
        assert_eq!(t.valuation(), Some(3));
        assert_eq!(t.terms().count(), 1);
        let two = content_product(&g, &p(&[2]), 6).unwrap();
        assert_eq!(two.coefficient(2).unwrap(), int(1));
        assert_eq!(two.coefficient(3).unwrap(), c1);
        assert_eq!(two.coefficient(4).unwrap(), int(0));
    }

    #[test]
    fn tau_schur_examples() {
        let g = w(&[(3, 5)], &[]);
        let t = tau_schur(&g, 3, 6).unwrap();
        assert_eq!(t.coeffs[&Partition::empty()].coefficient(0).unwrap(), int(1));
        assert_eq!(t.coeffs[&p(&[1])].coefficient(1).unwrap(), int(1));
        let two = &t.coeffs[&p(&[2])];
        assert_eq!(two.coefficient(2).unwrap(), rat(1, 2));
        assert_eq!(two.coefficient(3).unwrap(), rat(3, 10));
        assert!(matches!(tau_schur(&g, 3, 2), Err(Error::Argument(_))));
    }

    #[test]
    fn powersum_examples() {
        let g = w(&[(3, 5)], &[]);
        let ps = schur_to_powersum(&tau_schur(&g, 3, 7).unwrap()).unwrap();
        assert_eq!(ps.hurwitz(0, &p(&[1])).unwrap(), int(1));
        assert_eq!(ps.series[&p(&[2])].coefficient(3).unwrap(), rat(3, 10));
        assert_eq!(ps.hurwitz(1, &p(&[2])).unwrap(), rat(3, 10));
        assert_eq!(ps.hurwitz(0, &p(&[2])).unwrap(), int(0));
        let triv = schur_to_powersum(&tau_schur(&w(&[], &[]), 2, 4).unwrap()).unwrap();
        assert_eq!(triv.series[&p(&[1, 1])].coefficient(2).unwrap(), rat(1, 2));
        assert!(matches!(triv.hurwitz(3, &p(&[1, 1])), Err(Error::Capacity(_))));
    }

    #[test]
    fn dual_case_sign() {
        let g = w(&[], &[(2, 9)]);
        assert_eq!(extract_weighted_hurwitz(&g, 1, &p(&[2])).unwrap(), rat(1, 9));
    }

    #[test]
    fn no_terms_below_weight() {
        let ps = schur_to_powersum(&tau_schur(&w(&[(1, 2)], &[(1, 5)]), 4, 7).unwrap()).unwrap();
        for (mu, s) in &ps.series {
            for e in s.start()..mu.weight() as i64 {
                assert!(s.coefficient(e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn parity_zeros() {
        let ps = schur_to_powersum(&tau_schur(&w(&[(1, 2), (1, 3)], &[(1, 5)]), 5, 9).unwrap()).unwrap();
        for (mu, d, h) in ps.entries() {
            if crate::hurwitz::parity_forbids(&mu, d) {
                assert!(h.is_zero(), "mu = {mu}, d = {d}");
            }
        }
    }

    #[test]
    fn dual_expansion_small() {
        let weights = w(&[(1, 2)], &[(1, 5)]);
        let ps = schur_to_powersum(&tau_schur(&weights, 4, 7).unwrap()).unwrap();
        for n in 1..=4 {
            for mu in enumerate_partitions(n).unwrap() {
                for d in 0..=3 {
                    assert_eq!(ps.hurwitz(d, &mu).unwrap(), weighted_hurwitz_direct(&weights, d, &mu).unwrap());
                }
            }
        }
    }

    #[test]
    fn numeric_beta_resums_hurwitz_numbers() {
        // M = 0: the p_μ coefficient is a polynomial in β of degree |μ|(1+L).
        for beta in [rat(4, 7), rat(-6, 17)] {
            let weights = WeightData::new(vec![rat(1, 2), rat(1, 3)], vec![], beta.clone()).unwrap();
            for mu in enumerate_partitions(4).unwrap() {
                let n = mu.weight();
                let mut sum = int(0);
                for d in 0..=2 * n {
                    let h = extract_weighted_hurwitz(&weights, d, &mu).unwrap();
                    sum += h * pow(&beta, (n + d) as i64);
                }
                assert_eq!(sum, powersum_coefficient_numeric(&weights, &mu).unwrap());
            }
        }
    }

    #[test]
    fn hurwitz_independent_of_numeric_beta() {
        let a = w(&[(1, 2)], &[(1, 5)]);
        let b = a.with_beta(rat(6, 17)).unwrap();
        for mu in enumerate_partitions(3).unwrap() {
            for d in 0..=3 {
                assert_eq!(extract_weighted_hurwitz(&a, d, &mu).unwrap(), extract_weighted_hurwitz(&b, d, &mu).unwrap());
            }
        }
    }
}

//! Pure Hurwitz numbers (exhaustive and character-theoretic) and the directly
//! defined weighted Hurwitz numbers of a rational weight generating function.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::partition::{aut_order, partitions_with_colength, Partition};
use crate::rational::{factorial, Rational};
use crate::symmetric::{forgotten_sym, monomial_sym};
use crate::weights::WeightData;

/// A nonempty list of partitions sharing one weight `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileTuple {
    profiles: Vec<Partition>,
}

impl ProfileTuple {
    pub fn new(profiles: Vec<Partition>) -> Result<Self> {
        let Some(first) = profiles.first() else {
            return Err(Error::Argument("profile tuple must be nonempty".into()));
        };
        let n = first.weight();
        if let Some(bad) = profiles.iter().find(|p| p.weight() != n) {
            return Err(Error::Argument(format!(
                "profile {bad} has weight {}, expected {n}",
                bad.weight()
            )));
        }
        Ok(ProfileTuple { profiles })
    }

    pub fn profiles(&self) -> &[Partition] {
        &self.profiles
    }

    pub fn weight(&self) -> usize {
        self.profiles[0].weight()
    }
}

/// `H^d(μ)` for one `(d, μ)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedConfigCount {
    pub d: usize,
    pub mu: Partition,
    #[serde(with = "crate::rational::as_string")]
    pub value: Rational,
}

#[derive(Debug, Clone, Copy)]
pub struct BruteForceLimits {
    pub max_weight: usize,
    pub max_profiles: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits {
            max_weight: 6,
            max_profiles: 4,
        }
    }
}

/// Default largest `N` for character-formula evaluations.
pub const DEFAULT_FROBENIUS_BOUND: usize = 12;

type Perm = Vec<u8>;

fn all_permutations(n: usize) -> Vec<Perm> {
    crate::symmetric::permutations(n)
        .into_iter()
        .map(|p| p.into_iter().map(|x| x as u8).collect())
        .collect()
}

fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths)
}

fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

/// `(1/N!) · #{(h_1,…,h_k) : h_i ∈ cyc(μ^(i)), h_1⋯h_k = id}` by exhaustive enumeration of `S_N`.
pub fn pure_hurwitz_bruteforce(profiles: &ProfileTuple) -> Result<Rational> {
    pure_hurwitz_bruteforce_with(profiles, BruteForceLimits::default())
}

pub fn pure_hurwitz_bruteforce_with(profiles: &ProfileTuple, limits: BruteForceLimits) -> Result<Rational> {
    let n = profiles.weight();
    let k = profiles.profiles().len();
    if n > limits.max_weight || k > limits.max_profiles {
        return Err(Error::Capacity(format!(
            "brute force limited to N <= {} and k <= {} (got N = {n}, k = {k})",
            limits.max_weight, limits.max_profiles
        )));
    }
    let mut classes: HashMap<Partition, Vec<Perm>> = HashMap::new();
    for perm in all_permutations(n) {
        classes.entry(cycle_type(&perm)).or_default().push(perm);
    }
    let empty = Vec::new();
    let members: Vec<&Vec<Perm>> = profiles
        .profiles()
        .iter()
        .map(|mu| classes.get(mu).unwrap_or(&empty))
        .collect();
    let (last, prefix) = members.split_last().expect("nonempty tuple");
    let target = &profiles.profiles()[k - 1];
    let identity: Perm = (0..n as u8).collect();

    fn walk(prefix: &[&Vec<Perm>], running: &Perm, target: &Partition, count: &mut u64) {
        match prefix.split_first() {
            None => {
                // h_k is forced to be the inverse of the running product; same cycle type.
                if &cycle_type(running) == target {
                    *count += 1;
                }
            }
            Some((class, rest)) => {
                for h in class.iter() {
                    walk(rest, &compose(running, h), target, count);
                }
            }
        }
    }

    let mut count = 0u64;
    if last.is_empty() {
        return Ok(Rational::zero());
    }
    walk(prefix, &identity, target, &mut count);
    Ok(BigRational::new(BigInt::from(count), factorial(n as u64)))
}

/// Frobenius character formula `Σ_λ (dim λ / N!)² Π_i |cyc(μ^(i))| χ_λ(μ^(i)) / dim λ`.
pub fn pure_hurwitz_frobenius(profiles: &ProfileTuple) -> Result<Rational> {
    pure_hurwitz_frobenius_bounded(profiles, DEFAULT_FROBENIUS_BOUND)
}

pub fn pure_hurwitz_frobenius_bounded(profiles: &ProfileTuple, bound: usize) -> Result<Rational> {
    let n = profiles.weight();
    if n > bound {
        return Err(Error::Capacity(format!(
            "character formula limited to N <= {bound} (got {n})"
        )));
    }
    let engine = FrobeniusEngine::new(n)?;
    let idx: Vec<usize> = profiles
        .profiles()
        .iter()
        .map(|p| engine.table.index_of(p).expect("partition of N"))
        .collect();
    Ok(engine.hurwitz(&idx))
}

/// Precomputed central characters for repeated Hurwitz evaluations at one weight.
pub(crate) struct FrobeniusEngine {
    pub(crate) table: CharacterTable,
    plancherel: Vec<Rational>,
    central: Vec<Vec<Rational>>,
}

impl FrobeniusEngine {
    pub(crate) fn new(n: usize) -> Result<Self> {
        let table = CharacterTable::new(n)?;
        let fact = factorial(n as u64);
        let plancherel = table
            .dims
            .iter()
            .map(|d| {
                let q = BigRational::new(d.clone(), fact.clone());
                &q * &q
            })
            .collect();
        let count = table.partitions.len();
        let central = (0..count)
            .map(|mu| (0..count).map(|lam| table.central_character(lam, mu)).collect())
            .collect();
        Ok(FrobeniusEngine {
            table,
            plancherel,
            central,
        })
    }

    /// Profiles given by their table indices.
    pub(crate) fn hurwitz(&self, profiles: &[usize]) -> Rational {
        let mut total = Rational::zero();
        for (lam, w) in self.plancherel.iter().enumerate() {
            let mut term = w.clone();
            for &mu in profiles {
                term *= &self.central[mu][lam];
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
        total
    }
}

/// Sign convention for the `ν`-block of the weight factor. `DropLength` is a
/// deliberate error used to check that the dual-expansion test detects it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NuSign {
    #[default]
    Correct,
    DropLength,
}

/// `W_{G_{c,d}}(μ's; ν's)`: `|aut λ_c|/k! · m_{λ_c}(c) · |aut λ_d|/l! · f_{λ_d}(d)`
/// where `λ_c`, `λ_d` are the colengths of the weighted profiles.
pub fn weight_factor_rational(
    mus: &[Partition],
    nus: &[Partition],
    c: &[Rational],
    d: &[Rational],
) -> Result<Rational> {
    if let Some(bad) = mus.iter().chain(nus).find(|p| p.colength() == 0) {
        return Err(Error::Argument(format!(
            "weighted profile {bad} has colength 0"
        )));
    }
    let mu_col: Vec<usize> = mus.iter().map(Partition::colength).collect();
    let nu_col: Vec<usize> = nus.iter().map(Partition::colength).collect();
    Ok(weight_from_colengths(&mu_col, &nu_col, c, d, NuSign::Correct))
}

fn weight_from_colengths(
    mu_col: &[usize],
    nu_col: &[usize],
    c: &[Rational],
    d: &[Rational],
    sign: NuSign,
) -> Rational {
    let block = |cols: &[usize], vars: &[Rational], forgotten: bool| {
        let lam = Partition::from_unsorted(cols.to_vec());
        let sym = if forgotten {
            forgotten_sym(&lam, vars)
        } else {
            monomial_sym(&lam, vars)
        };
        sym * BigRational::new(aut_order(&lam), factorial(cols.len() as u64))
    };
    let mut w = block(mu_col, c, false) * block(nu_col, d, true);
    if sign == NuSign::DropLength && nu_col.len() % 2 == 1 {
        w = -w;
    }
    w
}

/// `H^d_{G_{c,d}}(μ)` from its definition as a weighted sum of pure Hurwitz numbers.
pub fn weighted_hurwitz_direct(weights: &WeightData, d: usize, mu: &Partition) -> Result<Rational> {
    weighted_hurwitz_direct_with(weights, d, mu, NuSign::Correct)
}

pub fn weighted_hurwitz_direct_with(
    weights: &WeightData,
    d: usize,
    mu: &Partition,
    sign: NuSign,
) -> Result<Rational> {
    let n = mu.weight();
    if n > DEFAULT_FROBENIUS_BOUND {
        return Err(Error::Capacity(format!(
            "weighted Hurwitz numbers limited to |mu| <= {DEFAULT_FROBENIUS_BOUND}"
        )));
    }
    let engine = FrobeniusEngine::new(n)?;
    Ok(weighted_with_engine(&engine, weights, d, mu, sign))
}

pub(crate) fn weighted_with_engine(
    engine: &FrobeniusEngine,
    weights: &WeightData,
    d: usize,
    mu: &Partition,
    sign: NuSign,
) -> Rational {
    let n = mu.weight();
    let mu_idx = engine.table.index_of(mu).expect("partition of N");
    if d == 0 {
        return engine.hurwitz(&[mu_idx]);
    }
    let by_colength: Vec<Vec<usize>> = (0..n.max(1))
        .map(|col| {
            partitions_with_colength(n, col)
                .unwrap_or_default()
                .iter()
                .map(|p| engine.table.index_of(p).expect("partition of N"))
                .collect()
        })
        .collect();
    let (c, dd) = (weights.c(), weights.d());
    let mut total = Rational::zero();
    for k in 0..=d.min(c.len()) {
        let l_max = if dd.is_empty() { 0 } else { d - k };
        for l in 0..=l_max {
            if k + l == 0 {
                continue;
            }
            for comp in compositions(d, k + l, n.saturating_sub(1)) {
                let w = weight_from_colengths(&comp[..k], &comp[k..], c, dd, sign);
                if w.is_zero() {
                    continue;
                }
                let mut chosen = Vec::with_capacity(k + l + 1);
                let inner = sum_over_tuples(engine, &by_colength, &comp, &mut chosen, mu_idx);
                total += w * inner;
            }
        }
    }
    total
}

fn sum_over_tuples(
    engine: &FrobeniusEngine,
    by_colength: &[Vec<usize>],
    cols: &[usize],
    chosen: &mut Vec<usize>,
    mu_idx: usize,
) -> Rational {
    match cols.split_first() {
        None => {
            chosen.push(mu_idx);
            let h = engine.hurwitz(chosen);
            chosen.pop();
            h
        }
        Some((&col, rest)) => {
            let mut acc = Rational::zero();
            for &p in &by_colength[col] {
                chosen.push(p);
                acc += sum_over_tuples(engine, by_colength, rest, chosen, mu_idx);
                chosen.pop();
            }
            acc
        }
    }
}

/// Ordered compositions of `total` into `parts` positive parts, each at most `cap`.
fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 1..=cap.min(rem) {
            if rem - x < slots - 1 {
                break;
            }
            cur.push(x);
            rec(rem - x, slots - 1, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if cap > 0 || parts == 0 {
        rec(total, parts, cap, &mut Vec::new(), &mut out);
    }
    out
}

/// Genus from `2 − 2g = N + ℓ(μ) − d`; `None` for odd or positive-excess Euler characteristic.
pub fn riemann_hurwitz_genus(n: usize, mu: &Partition, d: usize) -> Result<Option<usize>> {
    if mu.weight() != n {
        return Err(Error::Argument(format!(
            "profile {mu} does not have weight {n}"
        )));
    }
    let chi = n as i64 + mu.length() as i64 - d as i64;
    if chi % 2 != 0 || chi > 2 {
        return Ok(None);
    }
    Ok(Some(((2 - chi) / 2) as usize))
}

/// True when `N + ℓ(μ) − d` is odd, in which case no covers exist.
pub fn parity_forbids(mu: &Partition, d: usize) -> bool {
    (mu.weight() + mu.length() + d) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use crate::rational::{int, rat};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn tuple(ps: &[&[usize]]) -> ProfileTuple {
        ProfileTuple::new(ps.iter().map(|x| p(x)).collect()).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(pure_hurwitz_bruteforce(&tuple(&[&[1, 1, 1]])).unwrap(), rat(1, 6));
        assert_eq!(pure_hurwitz_bruteforce(&tuple(&[&[2, 1], &[2, 1]])).unwrap(), rat(1, 2));
        assert_eq!(
            pure_hurwitz_bruteforce(&tuple(&[&[2, 1], &[2, 1], &[3]])).unwrap(),
            int(1)
        );
        assert_eq!(pure_hurwitz_bruteforce(&tuple(&[&[3], &[3]])).unwrap(), rat(1, 3));
    }

    #[test]
    fn brute_force_bounds() {
        let big = tuple(&[&[7], &[7]]);
        assert!(matches!(pure_hurwitz_bruteforce(&big), Err(Error::Capacity(_))));
        let many = tuple(&[&[1, 1], &[1, 1], &[1, 1], &[1, 1], &[1, 1]]);
        assert!(matches!(pure_hurwitz_bruteforce(&many), Err(Error::Capacity(_))));
        let wide = BruteForceLimits { max_weight: 2, max_profiles: 5 };
        assert_eq!(pure_hurwitz_bruteforce_with(&many, wide).unwrap(), rat(1, 2));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(pure_hurwitz_frobenius(&tuple(&[&[1, 1, 1]])).unwrap(), rat(1, 6));
        assert_eq!(pure_hurwitz_frobenius(&tuple(&[&[3], &[3]])).unwrap(), rat(1, 3));
        assert_eq!(pure_hurwitz_frobenius(&tuple(&[&[2, 1], &[2, 1]])).unwrap(), rat(1, 2));
        let over = tuple(&[&[13]]);
        assert!(matches!(pure_hurwitz_frobenius(&over), Err(Error::Capacity(_))));
    }

    #[test]
    fn frobenius_matches_brute_force_n4_k3() {
        let parts = enumerate_partitions(4).unwrap();
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    let t = ProfileTuple::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
                    assert_eq!(pure_hurwitz_bruteforce(&t).unwrap(), pure_hurwitz_frobenius(&t).unwrap());
                }
            }
        }
    }

    #[test]
    fn invariant_under_reordering_and_identity_deletion() {
        let t1 = tuple(&[&[2, 1, 1], &[3, 1], &[2, 2]]);
        let t2 = tuple(&[&[2, 2], &[2, 1, 1], &[3, 1]]);
        let with_id = tuple(&[&[2, 1, 1], &[1, 1, 1, 1], &[3, 1], &[2, 2]]);
        let h = pure_hurwitz_bruteforce(&t1).unwrap();
        assert_eq!(pure_hurwitz_bruteforce(&t2).unwrap(), h);
        assert_eq!(pure_hurwitz_bruteforce(&with_id).unwrap(), h);
    }

    #[test]
    fn mismatched_weights_rejected() {
        assert!(ProfileTuple::new(vec![p(&[2]), p(&[1])]).is_err());
        assert!(ProfileTuple::new(vec![]).is_err());
    }

    /// Literal defining sum: (1/k!) Σ_σ Σ_{a strictly increasing} over c and
    /// (−1)^{Σℓ*−l}/l! Σ_σ' Σ_{b weakly increasing} over d.
    fn weight_factor_oracle(mus: &[Partition], nus: &[Partition], c: &[Rational], d: &[Rational]) -> Rational {
        use crate::symmetric::{next_weakly_increasing, permutations};
        let block = |ps: &[Partition], vars: &[Rational], strict: bool| -> Rational {
            let k = ps.len();
            if k == 0 {
                return int(1);
            }
            if vars.is_empty() {
                return int(0);
            }
            let mut idx: Vec<usize> = if strict { (0..k).collect() } else { vec![0; k] };
            if strict && k > vars.len() {
                return int(0);
            }
            let mut total = int(0);
            loop {
                let ok = !strict || idx.windows(2).all(|w| w[0] < w[1]);
                if ok {
                    for s in permutations(k) {
                        let mut t = int(1);
                        for (i, prof) in ps.iter().enumerate() {
                            t *= num_traits::pow(vars[idx[s[i]]].clone(), prof.colength());
                        }
                        total += t;
                    }
                }
                if !next_weakly_increasing(&mut idx, vars.len()) {
                    break;
                }
            }
            total / int(factorial(k as u64).try_into().unwrap())
        };
        let sign_exp: usize = nus.iter().map(|n| n.colength()).sum::<usize>() + nus.len();
        let sign = if sign_exp.is_multiple_of(2) { int(1) } else { int(-1) };
        block(mus, c, true) * block(nus, d, false) * sign
    }

    #[test]
    fn weight_factor_examples() {
        let c1 = rat(2, 5);
        let d1 = rat(-3, 7);
        assert_eq!(weight_factor_rational(&[p(&[2])], &[], std::slice::from_ref(&c1), &[]).unwrap(), c1.clone());
        assert_eq!(weight_factor_rational(&[], &[p(&[2])], &[], std::slice::from_ref(&d1)).unwrap(), d1.clone());
        let c2 = rat(1, 3);
        assert_eq!(
            weight_factor_rational(&[p(&[2]), p(&[2])], &[], &[c1.clone(), c2.clone()], &[]).unwrap(),
            &c1 * &c2
        );
        assert!(matches!(
            weight_factor_rational(&[p(&[1, 1])], &[], &[c1], &[]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn weight_factor_matches_literal_sum() {
        let c = vec![rat(1, 2), rat(1, 3), rat(-2, 7)];
        let d = vec![rat(1, 5), rat(3, 4)];
        let profiles = [p(&[2]), p(&[3]), p(&[2, 2]), p(&[4]), p(&[3, 1])];
        for a in 0..profiles.len() {
            for b in 0..profiles.len() {
                let mus = [profiles[a].clone(), profiles[b].clone()];
                let nus = [profiles[b].clone(), profiles[(a + 1) % 5].clone(), profiles[a].clone()];
                for (m, nn) in [(&mus[..1], &nus[..2]), (&mus[..], &nus[..]), (&mus[..], &nus[..0]), (&mus[..0], &nus[..3])] {
                    assert_eq!(
                        weight_factor_rational(m, nn, &c, &d).unwrap(),
                        weight_factor_oracle(m, nn, &c, &d)
                    );
                }
            }
        }
    }

    #[test]
    fn direct_examples() {
        let trivial = WeightData::new(vec![], vec![], rat(4, 7)).unwrap();
        assert_eq!(weighted_hurwitz_direct(&trivial, 0, &p(&[1, 1])).unwrap(), rat(1, 2));
        let c = rat(3, 5);
        let g = WeightData::new(vec![c.clone()], vec![], rat(4, 7)).unwrap();
        assert_eq!(weighted_hurwitz_direct(&g, 1, &p(&[2])).unwrap(), c / int(2));
        assert_eq!(weighted_hurwitz_direct(&g, 1, &p(&[1, 1])).unwrap(), int(0));
        let dual = WeightData::new(vec![], vec![rat(2, 9)], rat(4, 7)).unwrap();
        assert_eq!(weighted_hurwitz_direct(&dual, 1, &p(&[2])).unwrap(), rat(1, 9));
    }

    #[test]
    fn direct_is_homogeneous_of_degree_d() {
        let c = vec![rat(1, 2), rat(1, 3)];
        let d = vec![rat(1, 5)];
        let t = rat(-3, 2);
        let scaled = |v: &[Rational]| v.iter().map(|x| x * &t).collect::<Vec<_>>();
        let w1 = WeightData::new(c.clone(), d.clone(), rat(4, 7)).unwrap();
        let w2 = WeightData::new(scaled(&c), scaled(&d), rat(4, 7)).unwrap();
        for mu in enumerate_partitions(4).unwrap() {
            for deg in 0..=4 {
                let a = weighted_hurwitz_direct(&w1, deg, &mu).unwrap();
                let b = weighted_hurwitz_direct(&w2, deg, &mu).unwrap();
                assert_eq!(b, a * crate::rational::pow(&t, deg as i64));
            }
        }
    }

    #[test]
    fn genus() {
        assert_eq!(riemann_hurwitz_genus(3, &p(&[3]), 2).unwrap(), Some(0));
        assert_eq!(riemann_hurwitz_genus(2, &p(&[2]), 1).unwrap(), Some(0));
        assert_eq!(riemann_hurwitz_genus(2, &p(&[2]), 2).unwrap(), None);
        assert_eq!(riemann_hurwitz_genus(4, &p(&[4]), 5).unwrap(), Some(1));
        assert!(riemann_hurwitz_genus(3, &p(&[2]), 1).is_err());
    }
}

//! Irreducible characters of the symmetric group by the Murnaghan–Nakayama
//! rule, memoized per worker thread and per weight level.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, hook_product, z_order, Partition};
use crate::rational::factorial;

type MemoKey = (Vec<usize>, Vec<usize>);

thread_local! {
    static MEMO: RefCell<HashMap<usize, HashMap<MemoKey, BigInt>>> = RefCell::new(HashMap::new());
}

/// Per-level entry cap; overridable with `TAUHURWITZ_CACHE_LIMIT`.
fn cache_limit() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("TAUHURWITZ_CACHE_LIMIT")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(2_000_000)
    })
}

/// Drops this thread's memo table for one weight level, or all levels.
pub fn clear_character_cache(weight: Option<usize>) {
    MEMO.with(|m| match weight {
        Some(w) => {
            m.borrow_mut().remove(&w);
        }
        None => m.borrow_mut().clear(),
    });
}

/// `χ_λ(μ)`.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.weight() != mu.weight() {
        return Err(Error::Argument(format!(
            "character needs equal weights, got |{lambda}| = {} and |{mu}| = {}",
            lambda.weight(),
            mu.weight()
        )));
    }
    Ok(mn(lambda.parts(), mu.parts()))
}

fn mn(lambda: &[usize], mu: &[usize]) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let weight: usize = mu.iter().sum();
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(hit) = MEMO.with(|m| m.borrow().get(&weight).and_then(|level| level.get(&key).cloned())) {
        return hit;
    }
    let strip = mu[0];
    let rest = &mu[1..];
    let mut total = BigInt::zero();
    for (smaller, height) in remove_rim_hooks(lambda, strip) {
        let term = mn(&smaller, rest);
        if height % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        let level = m.entry(weight).or_default();
        if level.len() >= cache_limit() {
            level.clear();
        }
        level.insert(key, total.clone());
    });
    total
}

/// Every partition obtained by removing a border strip of length `len`,
/// paired with the strip's height (rows spanned minus one).
fn remove_rim_hooks(lambda: &[usize], len: usize) -> Vec<(Vec<usize>, usize)> {
    let l = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < len {
            continue;
        }
        let target = b - len;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (l - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        out.push((parts, height));
    }
    out
}

/// The full character table of `S_n` together with the class data the
/// Frobenius and Schur-to-power-sum formulas need.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub weight: usize,
    /// Reverse-lexicographic list of partitions of `weight`, indexing rows and columns.
    pub partitions: Vec<Partition>,
    /// `chi[λ][μ]`
    pub chi: Vec<Vec<BigInt>>,
    pub z: Vec<BigInt>,
    pub dims: Vec<BigInt>,
}

impl CharacterTable {
    pub fn new(weight: usize) -> Result<Self> {
        let partitions = enumerate_partitions(weight)?;
        let chi: Vec<Vec<BigInt>> = partitions
            .par_iter()
            .map(|lam| partitions.iter().map(|mu| mn(lam.parts(), mu.parts())).collect())
            .collect();
        let z = partitions.iter().map(z_order).collect();
        let fact = factorial(weight as u64);
        let dims = partitions.iter().map(|lam| &fact / hook_product(lam)).collect();
        Ok(CharacterTable {
            weight,
            partitions,
            chi,
            z,
            dims,
        })
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        // Partitions are sorted in strictly decreasing order.
        self.partitions.binary_search_by(|q| p.cmp(q)).ok()
    }

    /// Central character `|cyc(μ)| χ_λ(μ) / dim λ` of the class sum of `μ` on `λ`.
    pub fn central_character(&self, lambda: usize, mu: usize) -> BigRational {
        let class = factorial(self.weight as u64) / &self.z[mu];
        BigRational::new(class * &self.chi[lambda][mu], self.dims[lambda].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Independent oracle: `χ_λ(μ)` is the coefficient of `x^{λ+δ}` in
    /// `Δ(x) · p_μ(x)` with `n = |λ|` variables.
    fn frobenius_oracle(lambda: &Partition, mu: &Partition) -> i64 {
        let n = lambda.weight();
        type Poly = BTreeMap<Vec<u32>, i64>;
        let mul = |a: &Poly, b: &Poly| {
            let mut out = Poly::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    *out.entry(e).or_insert(0) += ca * cb;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        };
        let mut acc: Poly = [(vec![0; n], 1)].into_iter().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut f = Poly::new();
                let mut ei = vec![0; n];
                ei[i] = 1;
                let mut ej = vec![0; n];
                ej[j] = 1;
                f.insert(ei, 1);
                f.insert(ej, -1);
                acc = mul(&acc, &f);
            }
        }
        for &part in mu.parts() {
            let mut f = Poly::new();
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = part as u32;
                f.insert(e, 1);
            }
            acc = mul(&acc, &f);
        }
        let target: Vec<u32> = (0..n)
            .map(|i| (lambda.parts().get(i).copied().unwrap_or(0) + n - 1 - i) as u32)
            .collect();
        acc.get(&target).copied().unwrap_or(0)
    }

    #[test]
    fn spec_examples() {
        for mu in enumerate_partitions(4).unwrap() {
            assert_eq!(character(&p(&[4]), &mu).unwrap(), BigInt::one());
        }
        assert_eq!(character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(-1));
        assert!(matches!(character(&p(&[2]), &p(&[1])), Err(Error::Argument(_))));
    }

    #[test]
    fn agrees_with_frobenius_oracle() {
        for n in 1..=5 {
            let parts = enumerate_partitions(n).unwrap();
            for lam in &parts {
                for mu in &parts {
                    assert_eq!(
                        character(lam, mu).unwrap(),
                        BigInt::from(frobenius_oracle(lam, mu)),
                        "chi_{lam}({mu})"
                    );
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=6 {
            let t = CharacterTable::new(n).unwrap();
            let k = t.partitions.len();
            for a in 0..k {
                for b in 0..k {
                    let s: BigInt = (0..k).map(|l| &t.chi[l][a] * &t.chi[l][b]).sum();
                    let expect = if a == b { t.z[a].clone() } else { BigInt::zero() };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn dimension_is_hook_formula() {
        for n in 1..=6 {
            let ones = Partition::identity_class(n);
            for lam in enumerate_partitions(n).unwrap() {
                assert_eq!(
                    character(&lam, &ones).unwrap(),
                    factorial(n as u64) / hook_product(&lam)
                );
            }
        }
    }

    #[test]
    fn cache_clearing_keeps_values() {
        let a = character(&p(&[3, 2, 1]), &p(&[3, 3])).unwrap();
        clear_character_cache(Some(6));
        assert_eq!(character(&p(&[3, 2, 1]), &p(&[3, 3])).unwrap(), a);
        clear_character_cache(None);
    }

    #[test]
    fn table_lookup() {
        let t = CharacterTable::new(5).unwrap();
        for (i, q) in t.partitions.iter().enumerate() {
            assert_eq!(t.index_of(q), Some(i));
        }
    }
}

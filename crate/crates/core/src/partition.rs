//! Integer partitions and the Young-diagram statistics built on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Default largest weight accepted by [`enumerate_partitions`].
pub const DEFAULT_PARTITION_BOUND: usize = 30;

/// A weakly decreasing tuple of positive integers. The empty tuple is the
/// unique partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

/// One box of a Young diagram, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellContent {
    pub row: usize,
    pub col: usize,
    pub content: i64,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Argument(format!("partition parts must be positive: {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Argument(format!("partition parts must be weakly decreasing: {parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The partition `(1^n)`.
    pub fn identity_class(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn colength(&self) -> usize {
        self.weight() - self.length()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `m_i` for `i = 1..=largest part`, indexed from 1 (entry 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let top = self.0.first().copied().unwrap_or(0);
        let mut m = vec![0; top + 1];
        for &p in &self.0 {
            m[p] += 1;
        }
        m
    }

    pub fn conjugate(&self) -> Partition {
        let top = self.0.first().copied().unwrap_or(0);
        Partition((1..=top).map(|j| self.0.iter().take_while(|&&p| p >= j).count()).collect())
    }

    pub fn cells(&self) -> impl Iterator<Item = CellContent> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &len)| {
            (0..len).map(move |j| CellContent {
                row: i + 1,
                col: j + 1,
                content: j as i64 - i as i64,
            })
        })
    }

    /// Parses `"(2,1)"`, `"2,1"`, `"2 1"`; `""`, `"()"` and `"∅"` give the empty partition.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() || inner == "∅" {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Argument(format!("bad partition part {s:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse-lexicographic order, bounded by
/// [`DEFAULT_PARTITION_BOUND`].
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_bounded(n, DEFAULT_PARTITION_BOUND)
}

pub fn enumerate_partitions_bounded(n: usize, bound: usize) -> Result<Vec<Partition>> {
    if n > bound {
        return Err(Error::Capacity(format!(
            "partition weight {n} exceeds configured bound {bound}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// Partitions of `n` with the given colength, in reverse-lexicographic order.
pub fn partitions_with_colength(n: usize, colength: usize) -> Result<Vec<Partition>> {
    Ok(enumerate_partitions(n)?
        .into_iter()
        .filter(|p| p.colength() == colength)
        .collect())
}

pub fn hook_product(lambda: &Partition) -> BigInt {
    let conj = lambda.conjugate();
    lambda.cells().fold(BigInt::one(), |acc, cell| {
        let arm = lambda.0[cell.row - 1] - cell.col;
        let leg = conj.0[cell.col - 1] - cell.row;
        acc * BigInt::from(arm + leg + 1)
    })
}

pub fn contents(lambda: &Partition) -> Vec<i64> {
    lambda.cells().map(|c| c.content).collect()
}

/// `z_μ = Π_i m_i! · i^{m_i}`, the centralizer order of the class `cyc(μ)`.
pub fn z_order(mu: &Partition) -> BigInt {
    mu.multiplicities()
        .iter()
        .enumerate()
        .skip(1)
        .fold(BigInt::one(), |acc, (i, &m)| {
            acc * factorial(m as u64) * num_traits::pow(BigInt::from(i), m)
        })
}

/// `|aut(λ)| = Π_i m_i!`.
pub fn aut_order(lambda: &Partition) -> BigInt {
    lambda
        .multiplicities()
        .iter()
        .fold(BigInt::one(), |acc, &m| acc * factorial(m as u64))
}

/// Size of the conjugacy class `cyc(μ)` in `S_{|μ|}`.
pub fn class_size(mu: &Partition) -> BigInt {
    factorial(mu.weight() as u64) / z_order(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Independent oracle: all weakly decreasing tuples by brute filtering of compositions.
    fn brute_count(n: usize) -> usize {
        fn rec(rem: usize, prev: usize) -> usize {
            if rem == 0 {
                return 1;
            }
            (1..=rem).filter(|&x| x <= prev).map(|x| rec(rem - x, x)).sum()
        }
        rec(n, n)
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(
            enumerate_partitions(3).unwrap(),
            vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
        );
        assert_eq!(enumerate_partitions(5).unwrap().len(), 7);
        for n in 0..=15 {
            assert_eq!(enumerate_partitions(n).unwrap().len(), brute_count(n));
        }
    }

    #[test]
    fn enumeration_is_reverse_lexicographic_and_unique() {
        let parts = enumerate_partitions(9).unwrap();
        for w in parts.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn enumeration_bound() {
        assert!(matches!(enumerate_partitions(31), Err(Error::Capacity(_))));
        assert_eq!(enumerate_partitions(30).unwrap().len(), 5604);
    }

    #[test]
    fn hooks() {
        assert_eq!(hook_product(&p(&[1])), BigInt::from(1));
        assert_eq!(hook_product(&p(&[2, 1])), BigInt::from(3));
        assert_eq!(hook_product(&p(&[3])), BigInt::from(6));
        assert_eq!(hook_product(&Partition::empty()), BigInt::from(1));
    }

    #[test]
    fn contents_examples() {
        assert_eq!(contents(&p(&[1])), vec![0]);
        let mut c = contents(&p(&[2, 1]));
        c.sort();
        assert_eq!(c, vec![-1, 0, 1]);
        assert_eq!(contents(&p(&[3])), vec![0, 1, 2]);
    }

    #[test]
    fn contents_of_conjugate_are_negated() {
        for n in 1..=7 {
            for lam in enumerate_partitions(n).unwrap() {
                let mut a: Vec<i64> = contents(&lam).into_iter().map(|c| -c).collect();
                let mut b = contents(&lam.conjugate());
                a.sort();
                b.sort();
                assert_eq!(a.len(), lam.weight());
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn z_and_aut() {
        assert_eq!(z_order(&p(&[1, 1, 1])), BigInt::from(6));
        assert_eq!(z_order(&p(&[2, 1])), BigInt::from(2));
        assert_eq!(z_order(&p(&[3])), BigInt::from(3));
        assert_eq!(aut_order(&p(&[2, 2, 1])), BigInt::from(2));
        assert_eq!(aut_order(&p(&[1, 1, 1])), BigInt::from(6));
        assert_eq!(aut_order(&p(&[3])), BigInt::from(1));
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 0..=10 {
            let total: BigInt = enumerate_partitions(n).unwrap().iter().map(class_size).sum();
            assert_eq!(total, factorial(n as u64));
        }
    }

    #[test]
    fn rejects_bad_parts_and_parses() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::parse("(2,1)").unwrap(), p(&[2, 1]));
        assert_eq!(Partition::parse("3 1 1").unwrap(), p(&[3, 1, 1]));
        assert_eq!(Partition::parse("()").unwrap(), Partition::empty());
        assert_eq!(p(&[2, 1]).to_string(), "(2,1)");
    }
}

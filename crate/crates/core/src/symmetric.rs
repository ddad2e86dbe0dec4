//! Evaluations of the few symmetric functions the weight factors need, at a
//! finite list of exact rational variables.

use num_traits::{One, Zero};

use crate::partition::{aut_order, Partition};
use crate::rational::Rational;

/// Elementary symmetric functions `e_0..=e_order` of `vars`.
pub fn elementary(vars: &[Rational], order: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); order + 1];
    e[0] = Rational::one();
    for v in vars {
        for j in (1..=order).rev() {
            let prev = e[j - 1].clone();
            e[j] += prev * v;
        }
    }
    e
}

/// Complete homogeneous symmetric functions `h_0..=h_order` of `vars`.
pub fn complete(vars: &[Rational], order: usize) -> Vec<Rational> {
    let mut h = vec![Rational::zero(); order + 1];
    h[0] = Rational::one();
    for v in vars {
        for j in 1..=order {
            let prev = h[j - 1].clone();
            h[j] += prev * v;
        }
    }
    h
}

/// `m_λ(vars)`: the sum over distinct rearrangements of the exponent vector
/// `λ` padded with zeros. Zero when `λ` has more parts than there are variables.
pub fn monomial_sym(lambda: &Partition, vars: &[Rational]) -> Rational {
    if lambda.length() > vars.len() {
        return Rational::zero();
    }
    // Distinct exponent values with their multiplicities, zeros included.
    let mut values: Vec<(usize, usize)> = Vec::new();
    for &p in lambda.parts() {
        match values.iter_mut().find(|(v, _)| *v == p) {
            Some(entry) => entry.1 += 1,
            None => values.push((p, 1)),
        }
    }
    values.push((0, vars.len() - lambda.length()));
    arrange(vars, &mut values)
}

fn arrange(vars: &[Rational], values: &mut [(usize, usize)]) -> Rational {
    let Some((first, rest)) = vars.split_first() else {
        return Rational::one();
    };
    let mut total = Rational::zero();
    for i in 0..values.len() {
        if values[i].1 == 0 {
            continue;
        }
        values[i].1 -= 1;
        let exp = values[i].0;
        let tail = arrange(rest, values);
        values[i].1 += 1;
        if !tail.is_zero() {
            total += num_traits::pow(first.clone(), exp) * tail;
        }
    }
    total
}

/// `(-1)^{ℓ*(λ)} / |aut λ| · Σ_{σ ∈ S_k} Σ_{b_1 ≤ … ≤ b_k} Π_i vars[b_σ(i)]^{λ_i}`.
pub fn forgotten_sym(lambda: &Partition, vars: &[Rational]) -> Rational {
    let k = lambda.length();
    if k == 0 {
        return Rational::one();
    }
    if vars.is_empty() {
        return Rational::zero();
    }
    let perms = permutations(k);
    let mut indices = vec![0usize; k];
    let mut total = Rational::zero();
    loop {
        for sigma in &perms {
            let mut term = Rational::one();
            for (i, &part) in lambda.parts().iter().enumerate() {
                term *= num_traits::pow(vars[indices[sigma[i]]].clone(), part);
            }
            total += term;
        }
        if !next_weakly_increasing(&mut indices, vars.len()) {
            break;
        }
    }
    let mut value = total / Rational::from_integer(aut_order(lambda));
    if lambda.colength() % 2 == 1 {
        value = -value;
    }
    value
}

/// Advances a weakly increasing index tuple over `0..n`; false when exhausted.
pub(crate) fn next_weakly_increasing(indices: &mut [usize], n: usize) -> bool {
    for pos in (0..indices.len()).rev() {
        if indices[pos] + 1 < n {
            let v = indices[pos] + 1;
            for slot in &mut indices[pos..] {
                *slot = v;
            }
            return true;
        }
    }
    false
}

/// All permutations of `0..k` as index vectors.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use crate::rational::{int, rat};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn monomial_examples() {
        let (c1, c2) = (rat(2, 3), rat(-5, 7));
        let vars = vec![c1.clone(), c2.clone()];
        assert_eq!(monomial_sym(&p(&[1]), &vars), &c1 + &c2);
        assert_eq!(
            monomial_sym(&p(&[2, 1]), &vars),
            &c1 * &c1 * &c2 + &c2 * &c2 * &c1
        );
        assert_eq!(monomial_sym(&p(&[1, 1, 1]), &vars), int(0));
        assert_eq!(monomial_sym(&Partition::empty(), &vars), int(1));
    }

    #[test]
    fn forgotten_examples() {
        let c1 = rat(3, 4);
        assert_eq!(forgotten_sym(&p(&[1]), std::slice::from_ref(&c1)), c1.clone());
        assert_eq!(forgotten_sym(&p(&[2]), std::slice::from_ref(&c1)), -(&c1 * &c1));
        assert_eq!(forgotten_sym(&Partition::empty(), &[]), int(1));
    }

    #[test]
    fn monomials_sum_to_complete() {
        // h_n = Σ_{λ ⊢ n} m_λ.
        let vars = vec![rat(1, 2), rat(1, 3), rat(-2, 5)];
        let h = complete(&vars, 5);
        for n in 0..=5 {
            let s: Rational = enumerate_partitions(n).unwrap().iter().map(|l| monomial_sym(l, &vars)).sum();
            assert_eq!(s, h[n]);
        }
    }

    #[test]
    fn elementary_is_single_column_monomial() {
        let vars = vec![rat(1, 2), rat(1, 3), rat(-2, 5), int(7)];
        let e = elementary(&vars, 4);
        for n in 0..=4 {
            assert_eq!(monomial_sym(&Partition::identity_class(n), &vars), e[n]);
        }
    }

    #[test]
    fn forgotten_one_column_is_complete() {
        // With all parts equal to 1 the weakly increasing sum is h_k.
        let vars = vec![rat(1, 2), rat(1, 3)];
        let h = complete(&vars, 3);
        for k in 1..=3 {
            assert_eq!(forgotten_sym(&Partition::identity_class(k), &vars), h[k]);
        }
    }
}

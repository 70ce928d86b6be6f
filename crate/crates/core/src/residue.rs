//! The `r mod n` parts of a polynomial.
//!
//! For a modulus `n` the coefficients of `p` split by exponent class:
//! `p_(r,n)(x) = Σ_{k ≡ r (mod n)} a_k x^k`, and `p = Σ_r p_(r,n)`. The even
//! and odd parts are the `n = 2` case. The same part can be produced by
//! averaging `p` over the n-th roots of unity; [`roots_of_unity_part`]
//! evaluates that form numerically so the two constructions can be checked
//! against each other.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

/// The exponents `{0 ≤ k ≤ m : k mod n = r}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueIndexSet {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub members: Vec<usize>,
}

impl ResidueIndexSet {
    pub fn new(m: usize, n: usize, r: usize) -> Result<Self> {
        check_residue(n, r)?;
        let members = (r..=m).step_by(n).collect();
        Ok(ResidueIndexSet { m, n, r, members })
    }
}

fn check_residue(n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if r >= n {
        return Err(Error::ResidueOutOfRange { r, n });
    }
    Ok(())
}

/// `p_(r,n)`: the terms of `p` whose exponent is `r` modulo `n`.
pub fn residue_part(p: &Poly, n: usize, r: usize) -> Result<Poly> {
    check_residue(n, r)?;
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k % n == r {
                c.clone()
            } else {
                Rational::default()
            }
        })
        .collect();
    Ok(Poly::new(coeffs))
}

/// `Σ_{k ∈ I(m,n,r)} a_k`, i.e. `p_(r,n)(1)`.
pub fn residue_sum(p: &Poly, n: usize, r: usize) -> Result<Rational> {
    check_residue(n, r)?;
    Ok(p.coeffs().iter().skip(r).step_by(n).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueDecomposition {
    pub n: usize,
    /// `parts[r]` is `p_(r,n)`.
    pub parts: Vec<Poly>,
}

impl ResidueDecomposition {
    /// Exact sum of all parts; equals the decomposed polynomial.
    pub fn sum(&self) -> Poly {
        self.parts.iter().fold(Poly::zero(), |acc, q| &acc + q)
    }

    /// Reference vector `(p_(0,n)(t), …, p_(n-1,n)(t))`.
    pub fn eval_parts(&self, t: &Rational) -> Vec<Rational> {
        self.parts.iter().map(|q| q.eval(t)).collect()
    }
}

pub fn residue_decompose(p: &Poly, n: usize) -> Result<ResidueDecomposition> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut buckets = vec![vec![Rational::default(); p.coeffs().len()]; n];
    for (k, c) in p.coeffs().iter().enumerate() {
        buckets[k % n][k] = c.clone();
    }
    Ok(ResidueDecomposition {
        n,
        parts: buckets.into_iter().map(Poly::new).collect(),
    })
}

/// `(1/n) Σ_{k<n} ω^{-kr} p(ω^k z)` with `ω = exp(2πi/n)`, in complex floats.
pub fn roots_of_unity_part(p: &Poly, n: usize, r: usize, z: Complex64) -> Result<Complex64> {
    check_residue(n, r)?;
    let total: Complex64 = (0..n)
        .map(|k| {
            // Reduce exponents mod n before forming the angle.
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let w_neg_kr = Complex64::from_polar(1.0, -2.0 * PI * ((k * r) % n) as f64 / n as f64);
            w_neg_kr * p.eval_complex(w * z)
        })
        .sum();
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn residue_part_examples() {
        let q = p(&[1, 2, 3, 4, 5]);
        assert_eq!(residue_part(&q, 3, 1).unwrap(), p(&[0, 2, 0, 0, 5]));
        assert_eq!(residue_part(&q, 1, 0).unwrap(), q);
        assert_eq!(residue_part(&p(&[4, -4, 1]), 2, 1).unwrap(), p(&[0, -4]));
    }

    #[test]
    fn residue_part_rejects_bad_residue() {
        let q = p(&[1, 1]);
        assert_eq!(
            residue_part(&q, 3, 3),
            Err(Error::ResidueOutOfRange { r: 3, n: 3 })
        );
        assert_eq!(residue_part(&q, 0, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn decompose_examples() {
        let d = residue_decompose(&p(&[4, -4, 1]), 2).unwrap();
        assert_eq!(d.parts, vec![p(&[4, 0, 1]), p(&[0, -4])]);

        let z = residue_decompose(&Poly::zero(), 4).unwrap();
        assert_eq!(z.parts.len(), 4);
        assert!(z.parts.iter().all(Poly::is_zero));

        let m = residue_decompose(&p(&[0, 0, 0, 0, 0, 1]), 3).unwrap();
        assert!(m.parts[0].is_zero() && m.parts[1].is_zero());
        assert_eq!(m.parts[2], p(&[0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn index_sets() {
        let s = ResidueIndexSet::new(7, 3, 1).unwrap();
        assert_eq!(s.members, vec![1, 4, 7]);
        assert!(ResidueIndexSet::new(2, 3, 2).unwrap().members == vec![2]);
        assert!(ResidueIndexSet::new(1, 3, 2).unwrap().members.is_empty());
        assert!(ResidueIndexSet::new(3, 2, 2).is_err());
    }

    #[test]
    fn residue_sums() {
        let q = p(&[4, -4, 1]);
        assert_eq!(residue_sum(&q, 2, 1).unwrap(), int(-4));
        assert_eq!(residue_sum(&q, 2, 0).unwrap(), int(5));
        assert_eq!(residue_sum(&q, 1, 0).unwrap(), int(1));
    }

    #[test]
    fn roots_of_unity_examples() {
        let q = p(&[4, -4, 1]);
        let v = roots_of_unity_part(&q, 2, 0, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        let z = Complex64::new(0.3, -1.1);
        let v = roots_of_unity_part(&q, 1, 0, z).unwrap();
        assert!((v - q.eval_complex(z)).norm() < 1e-12);
    }

    fn rat_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-100i64..=100, 1i64..=100), 0..14)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(a, b)| ratio(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn parts_partition_the_polynomial(q in rat_poly(), n in 1usize..=9) {
            let d = residue_decompose(&q, n).unwrap();
            prop_assert_eq!(d.sum(), q.clone());
            for (r, part) in d.parts.iter().enumerate() {
                prop_assert_eq!(part, &residue_part(&q, n, r).unwrap());
                for (k, c) in part.coeffs().iter().enumerate() {
                    prop_assert!(k % n == r || c == &Rational::default());
                }
            }
        }

        #[test]
        fn even_plus_odd(q in rat_poly(), x in -5i64..=5) {
            // p_e(x) = (p(x) + p(-x))/2, p_o(x) = (p(x) - p(-x))/2
            let x = int(x);
            let neg = -x.clone();
            let even = residue_part(&q, 2, 0).unwrap();
            let odd = residue_part(&q, 2, 1).unwrap();
            prop_assert_eq!(&even + &odd, q.clone());
            prop_assert_eq!(even.eval(&x), (q.eval(&x) + q.eval(&neg)) / int(2));
            prop_assert_eq!(odd.eval(&x), (q.eval(&x) - q.eval(&neg)) / int(2));
        }
    }
}

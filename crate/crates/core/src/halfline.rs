//! Exact decision of `p(x) ≥ 0` for all `x ≥ 0` (membership in the
//! order-one class).
//!
//! The distinct positive roots of `p` are separated with a Sturm chain of
//! its square-free part. Between two consecutive roots the sign of `p` is
//! constant, so it is enough to sample one rational point in every gap,
//! plus `0` and a point past the Cauchy root bound.

use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::rational::{self, Rational};

/// Outcome of the half-line test. `violation` is a rational `x ≥ 0` with
/// `p(x) < 0` exactly; it is present iff `nonnegative` is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfLine {
    pub nonnegative: bool,
    pub violation: Option<Rational>,
}

struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    fn new(g: &Poly) -> Self {
        let mut seq = vec![g.clone(), g.derivative(1)];
        while let Some(last) = seq.last().filter(|q| !q.is_zero()) {
            let prev = &seq[seq.len() - 2];
            let (_, r) = prev.div_rem(last);
            seq.push(-&r);
        }
        seq.pop();
        SturmChain { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut prev: Option<bool> = None;
        for q in &self.seq {
            let v = q.eval(x);
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            if prev.is_some_and(|p| p != neg) {
                count += 1;
            }
            prev = Some(neg);
        }
        count
    }

    /// Distinct roots in `(a, b]`, for `a < b` that are not roots.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// `1 + max_{k<m} |a_k / a_m|`; every complex root has modulus below it.
pub fn cauchy_bound(p: &Poly) -> Rational {
    let Some(lead) = p.leading() else {
        return Rational::one();
    };
    let lead = lead.abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

/// Decides whether `p` is nonnegative on `[0, ∞)`.
pub fn is_nonneg_on_halfline(p: &Poly) -> HalfLine {
    sample_points(p)
        .into_iter()
        .find(|x| p.eval(x).is_negative())
        .map_or(
            HalfLine {
                nonnegative: true,
                violation: None,
            },
            |x| HalfLine {
                nonnegative: false,
                violation: Some(x),
            },
        )
}

/// Sorted rational points in `[0, ∞)` hitting every sign region of `p`.
pub fn sample_points(p: &Poly) -> Vec<Rational> {
    let zero = Rational::zero();
    if p.degree().unwrap_or(0) == 0 {
        return vec![zero];
    }

    // Positive roots of p are the roots of its square-free part with any
    // factor of x removed; the result h has h(0) != 0.
    let mut h = p.square_free_part();
    if h.coeff(0).is_zero() {
        h = h.div_rem(&Poly::x()).0;
    }
    let bound = cauchy_bound(p);
    let beyond = &bound + Rational::one();
    if h.degree().unwrap_or(0) == 0 {
        return vec![zero, bound, beyond];
    }

    let chain = SturmChain::new(&h);

    // First sample sits strictly between 0 and the smallest positive root.
    let mut first = bound.clone();
    while h.eval(&first).is_zero() || chain.count(&zero, &first) > 0 {
        first /= rational::int(2);
    }

    let mut points = vec![zero, first.clone()];
    debug_assert!(!h.eval(&bound).is_zero());
    let mut separators = Vec::new();
    separate(&chain, &h, first, bound.clone(), &mut separators);
    separators.sort();
    points.extend(separators);
    points.push(bound);
    points.push(beyond);
    points.dedup();
    points
}

/// Pushes non-root points into `(lo, hi)` until every subinterval holds at
/// most one root. `lo` and `hi` must not be roots of `h`.
fn separate(chain: &SturmChain, h: &Poly, lo: Rational, hi: Rational, out: &mut Vec<Rational>) {
    if chain.count(&lo, &hi) <= 1 {
        return;
    }
    let width = &hi - &lo;
    // Finitely many roots, so some point lo + width/k is not one.
    let mid = (2i64..)
        .map(|k| &lo + &width / rational::int(k))
        .find(|x| !h.eval(x).is_zero())
        .expect("a non-root point exists");
    out.push(mid.clone());
    separate(chain, h, lo, mid.clone(), out);
    separate(chain, h, mid, hi, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn square_is_nonnegative() {
        let r = is_nonneg_on_halfline(&p(&[4, -4, 1]));
        assert!(r.nonnegative);
        assert_eq!(r.violation, None);
    }

    #[test]
    fn derivative_of_square_fails_at_zero() {
        let r = is_nonneg_on_halfline(&p(&[-4, 2]));
        assert!(!r.nonnegative);
        assert_eq!(r.violation, Some(int(0)));
    }

    #[test]
    fn zero_and_constants() {
        assert!(is_nonneg_on_halfline(&Poly::zero()).nonnegative);
        assert!(is_nonneg_on_halfline(&p(&[3])).nonnegative);
        assert_eq!(is_nonneg_on_halfline(&p(&[-3])).violation, Some(int(0)));
    }

    #[test]
    fn negative_odd_part_fails_at_one() {
        let r = is_nonneg_on_halfline(&p(&[0, -4]));
        assert_eq!(r.violation, Some(int(1)));
    }

    #[test]
    fn negative_only_just_right_of_zero() {
        // x(x - 1/1000): zero at 0, negative on (0, 1/1000)
        let q = Poly::new(vec![int(0), ratio(-1, 1000), int(1)]);
        let r = is_nonneg_on_halfline(&q);
        assert!(!r.nonnegative);
        let x = r.violation.unwrap();
        assert!(q.eval(&x) < int(0));
    }

    #[test]
    fn narrow_dip_between_close_roots() {
        // (x - 1)(x - 1 - 1/10^6)(x^2 + 1)
        let a = p(&[-1, 1]);
        let b = Poly::new(vec![ratio(-1_000_001, 1_000_000), int(1)]);
        let q = &(&a * &b) * &p(&[1, 0, 1]);
        let r = is_nonneg_on_halfline(&q);
        assert!(!r.nonnegative);
        let x = r.violation.unwrap();
        assert!(x > int(1) && q.eval(&x) < int(0));
    }

    #[test]
    fn double_roots_do_not_flip_sign() {
        // (x - 1)^2 (x - 3)^2 (x + 2)
        let a = p(&[1, -2, 1]);
        let b = p(&[9, -6, 1]);
        let q = &(&a * &b) * &p(&[2, 1]);
        assert!(is_nonneg_on_halfline(&q).nonnegative);
        // Same with a simple root at 2 in between flips the sign.
        let q2 = &q * &p(&[-2, 1]);
        assert!(!is_nonneg_on_halfline(&q2).nonnegative);
    }

    #[test]
    fn negative_leading_coefficient_fails_far_out() {
        // 100 + x - x^3/100
        let q = Poly::new(vec![int(100), int(1), int(0), ratio(-1, 100)]);
        let r = is_nonneg_on_halfline(&q);
        assert!(!r.nonnegative);
        assert!(q.eval(&r.violation.unwrap()) < int(0));
    }

    #[test]
    fn rational_root_at_separator_candidate() {
        // Roots at 1/2, 1, 3/2 all land on dyadic bisection points.
        let q = &(&p(&[-1, 2]) * &p(&[-1, 1])) * &p(&[-3, 2]);
        let r = is_nonneg_on_halfline(&q);
        assert!(!r.nonnegative);
        assert!(q.eval(&r.violation.unwrap()) < int(0));
    }

    #[test]
    fn cauchy_bound_bounds_roots() {
        assert_eq!(cauchy_bound(&p(&[4, -4, 1])), int(5));
        assert_eq!(cauchy_bound(&p(&[0, 0, 2])), int(1));
    }
}

//! Quick randomized run of the library's invariants, used by the
//! `selftest` subcommand. Each check is seeded and small enough to finish
//! in well under a second.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::halfline::{cauchy_bound, is_nonneg_on_halfline};
use crate::matrix::{
    eval_on_jordan, eval_on_scaled_circulant, jordan_realize, mat_poly_eval, mat_poly_eval_f64,
    shift_matrix, JordanSpec, MatrixF,
};
use crate::membership::{classify, decide_low_degree, MemberReason, Verdict};
use crate::poly::Poly;
use crate::rational::{self, Rational};
use crate::residue::{residue_decompose, residue_part, roots_of_unity_part};
use crate::spectra::{check_jll, check_trace_conditions, circulant_spectrum};
use crate::witness::{gradient_of_entry, random_search, SearchConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfTestRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn rand_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    rational::ratio(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.random_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| rand_rational(rng, 20)).collect())
}

fn row(name: &str, failures: usize, total: usize) -> SelfTestRow {
    SelfTestRow {
        name: name.to_string(),
        passed: failures == 0,
        detail: format!("{}/{} instances ok", total - failures, total),
    }
}

fn count(total: usize, rng: &mut ChaCha8Rng, mut ok: impl FnMut(&mut ChaCha8Rng) -> bool) -> usize {
    (0..total).filter(|_| !ok(rng)).count()
}

pub fn run(seed: u64) -> Vec<SelfTestRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    let n = 100;
    let bad = count(n, &mut rng, |rng| {
        let p = rand_poly(rng, 12);
        let m = rng.random_range(1..=8);
        residue_decompose(&p, m).unwrap().sum() == p
    });
    rows.push(row("residue parts sum to p", bad, n));

    let n = 40;
    let bad = count(n, &mut rng, |rng| {
        let p = rand_poly(rng, 12);
        let m = rng.random_range(1..=8);
        (0..m).all(|r| {
            let part = residue_part(&p, m, r).unwrap();
            (0..3).all(|_| {
                let z = Complex64::from_polar(rng.random_range(0.0..=2.0), rng.random_range(0.0..6.3));
                let a = roots_of_unity_part(&p, m, r, z).unwrap();
                (a - part.eval_complex(z)).norm() <= 1e-8
            })
        })
    });
    rows.push(row("roots-of-unity average equals residue part", bad, n));

    let n = 40;
    let bad = count(n, &mut rng, |rng| {
        let p = rand_poly(rng, 10);
        let m = rng.random_range(1..=5);
        let t = rand_rational(rng, 10);
        let tc = shift_matrix(m).unwrap().scale(&t);
        let j = jordan_realize(&JordanSpec { n: m, lambda: t.clone() }).unwrap();
        eval_on_scaled_circulant(&p, m, &t).unwrap() == mat_poly_eval(&p, &tc)
            && eval_on_jordan(&p, m, &t).unwrap() == mat_poly_eval(&p, &j)
    });
    rows.push(row("circulant and Jordan closed forms", bad, n));

    let bad = (1..=6)
        .filter(|&m| {
            let c = shift_matrix(m).unwrap();
            !(0..=20).all(|k| c.pow(k) == c.pow(k % m))
        })
        .count();
    rows.push(row("C_n^k = C_n^(k mod n)", bad, 6));

    let n = 100;
    let bad = count(n, &mut rng, |rng| {
        let deg = rng.random_range(1..=8);
        let mut coeffs: Vec<Rational> = (0..deg).map(|_| rational::int(rng.random_range(-8..=8))).collect();
        coeffs.push(rational::int(rng.random_range(1..=4)));
        let p = Poly::new(coeffs);
        let claim = is_nonneg_on_halfline(&p);
        let bound = cauchy_bound(&p);
        let steps = 2000;
        let sampled_neg = (0..=steps).any(|i| p.eval(&(&bound * rational::ratio(i, steps))).is_negative());
        match claim.violation {
            Some(x) => p.eval(&x).is_negative(),
            None => !sampled_neg,
        }
    });
    rows.push(row("half-line decision vs sampling", bad, n));

    let n = 20;
    let bad = count(n, &mut rng, |rng| {
        let coeffs: Vec<f64> = (0..=rng.random_range(1..=6)).map(|_| rng.random_range(-2.0..2.0)).collect();
        let a = MatrixF::from_fn(3, |_, _| rng.random_range(0.0..1.5));
        let (u, v) = (rng.random_range(0..3), rng.random_range(0..3));
        let g = gradient_of_entry(&coeffs, &a, u, v);
        let h = 1e-6;
        (0..3).all(|i| {
            (0..3).all(|j| {
                let mut plus = a.clone();
                plus.set(i, j, a.get(i, j) + h);
                let mut minus = a.clone();
                minus.set(i, j, a.get(i, j) - h);
                let fd = (mat_poly_eval_f64(&coeffs, &plus).get(u, v)
                    - mat_poly_eval_f64(&coeffs, &minus).get(u, v))
                    / (2.0 * h);
                (g.get(i, j) - fd).abs() <= 1e-4 * fd.abs().max(g.get(i, j).abs()).max(1.0)
            })
        })
    });
    rows.push(row("descent gradient vs finite differences", bad, n));

    let n = 40;
    let bad = count(n, &mut rng, |rng| {
        let order = rng.random_range(2..=4);
        let deg = rng.random_range(0..2 * order);
        let mut coeffs: Vec<Rational> = (0..=deg).map(|_| rational::int(rng.random_range(-5..=5))).collect();
        let neg = rng.random_range(0..=deg);
        coeffs[neg] = rational::int(-rng.random_range(1..=5));
        if coeffs[deg].is_zero() {
            coeffs[deg] = rational::int(1);
        }
        let p = Poly::new(coeffs);
        match decide_low_degree(&p, order) {
            Ok(Verdict::NonMember(c)) => c
                .witness
                .is_some_and(|w| w.verify(&p) && w.embed(&p).is_some_and(|e| e.verify(&p))),
            _ => false,
        }
    });
    rows.push(row("low-degree witnesses and containment", bad, n));

    let n = 40;
    let bad = count(n, &mut rng, |rng| {
        let m = rng.random_range(1..=6);
        let v: Vec<Rational> = (0..m)
            .map(|_| rational::ratio(rng.random_range(0..=4000), 1000))
            .collect();
        let s = circulant_spectrum(&v);
        check_jll(&s, 4, 4).iter().all(|e| e.pass)
            && check_trace_conditions(&Poly::x(), &s, 4).iter().all(|e| e.pass)
    });
    rows.push(row("J-LL and trace conditions on circulant spectra", bad, n));

    let cfg = SearchConfig {
        trials: 200,
        restarts: 5,
        steps: 50,
        ..SearchConfig::default()
    };
    let square = Poly::from_ints(&[4, -4, 1]);
    let order_one = classify(&square, 1, &cfg).ok();
    let order_two = classify(&square, 2, &cfg).ok();
    let ok = matches!(
        order_one,
        Some(Verdict::Member(ref c)) if c.reason == MemberReason::NonnegativeOnHalfLine
    ) && order_two
        .as_ref()
        .and_then(Verdict::witness)
        .is_some_and(|w| w.verify(&square) && w.value == rational::int(-4));
    rows.push(row("(x-2)^2 is in P_1 but not P_2", usize::from(!ok), 1));

    let a = random_search(&Poly::from_ints(&[1, -3, 0, 1]), 3, &cfg).ok();
    let b = random_search(&Poly::from_ints(&[1, -3, 0, 1]), 3, &cfg).ok();
    rows.push(row("seeded search is deterministic", usize::from(a != b), 1));

    let nonneg = Poly::from_ints(&[1, 2, 0, 3]);
    let found = (2..=4)
        .filter(|&m| random_search(&nonneg, m, &cfg).map_or(true, |r| r.found))
        .count();
    rows.push(row("no counterexamples for nonnegative coefficients", found, 3));

    rows
}

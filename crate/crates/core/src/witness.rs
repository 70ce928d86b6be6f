//! Witness matrices: a nonnegative `W` together with an entry of `p(W)`
//! that is exactly negative.
//!
//! Two families come straight from the structure of the problem. Scaled
//! cyclic shifts `t·C_n` turn `p` into the circulant of its residue parts,
//! and Jordan blocks `J_n(t)` expose the scaled derivatives `p^(k)(t)/k!` on
//! the first row. When neither applies, a seeded random sampler and a
//! projected gradient descent on the smallest entry of `p(A)` look for
//! numerical counterexamples, which are rationalized and re-verified
//! exactly before they are returned.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    embed_diag, eval_on_jordan, jordan_realize, mat_poly_eval, mat_poly_eval_f64, shift_matrix,
    JordanSpec, MatrixF, MatrixQ,
};
use crate::poly::Poly;
use crate::rational::{self, Rational};
use crate::residue::residue_decompose;

/// Float candidates must go below this before exact verification is tried.
pub const NUMERIC_THRESHOLD: f64 = -1e-6;

/// Denominator of the grid used to turn float matrices into exact ones.
pub const RATIONALIZE_DENOMINATOR: i64 = 1_000_000;

const STRUCTURED_EVERY: usize = 10;
const DESCENT_STREAM_BASE: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub seed: u64,
    pub trials: usize,
    pub restarts: usize,
    pub steps: usize,
    pub step_size: f64,
    pub entry_scale: f64,
    #[serde(with = "rational::serde_str")]
    pub t_cap: Rational,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            trials: 1000,
            restarts: 50,
            steps: 200,
            step_size: 0.1,
            entry_scale: 4.0,
            t_cap: Rational::from_integer(BigInt::one() << 64),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.trials == 0 || self.restarts == 0 || self.steps == 0 {
            return bad("trials, restarts and steps must be positive");
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad("step_size must be a positive finite number");
        }
        if !(self.entry_scale > 0.0 && self.entry_scale.is_finite()) {
            return bad("entry_scale must be a positive finite number");
        }
        if self.t_cap < Rational::one() {
            return bad("t_cap must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `t·C_n`, possibly embedded as `diag(t·C_k, 0)` for `k < n`.
    Circulant,
    /// `J_n(0)`.
    JordanZero,
    /// `J_n(t)` with `t > 0`.
    Jordan,
    Random,
    Descent,
}

/// 1-based `(row, col)` position of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
}

impl Entry {
    pub fn from_zero_based(i: usize, j: usize) -> Self {
        Entry { row: i + 1, col: j + 1 }
    }

    pub fn zero_based(&self) -> (usize, usize) {
        (self.row - 1, self.col - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub matrix: MatrixQ,
    pub entry: Entry,
    /// Exact value of `p(matrix)` at `entry`; always negative.
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub provenance: Provenance,
    /// Scale `t` for structured witnesses.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat")]
    pub t: Option<Rational>,
}

impl Witness {
    /// Evaluates `p(matrix)` exactly and builds a witness if `matrix ≥ 0` and
    /// the chosen entry is negative. With `entry = None` the most negative
    /// entry is cited (first in row-major order on ties).
    pub fn certify(
        p: &Poly,
        matrix: MatrixQ,
        entry: Option<(usize, usize)>,
        provenance: Provenance,
        t: Option<Rational>,
    ) -> Option<Witness> {
        if !matrix.is_nonnegative() {
            return None;
        }
        let image = mat_poly_eval(p, &matrix);
        let (i, j) = match entry {
            Some(ij) => ij,
            None => {
                let n = image.order();
                let mut best = (0, 0);
                for i in 0..n {
                    for j in 0..n {
                        if image.get(i, j) < image.get(best.0, best.1) {
                            best = (i, j);
                        }
                    }
                }
                best
            }
        };
        let value = image.get(i, j).clone();
        value.is_negative().then(|| Witness {
            matrix,
            entry: Entry::from_zero_based(i, j),
            value,
            provenance,
            t,
        })
    }

    /// Re-checks the certificate from scratch.
    pub fn verify(&self, p: &Poly) -> bool {
        let (i, j) = self.entry.zero_based();
        let n = self.matrix.order();
        i < n
            && j < n
            && self.matrix.is_nonnegative()
            && self.value.is_negative()
            && mat_poly_eval(p, &self.matrix).get(i, j) == &self.value
    }

    /// The same certificate for order `n + 1` via `diag(W, 0)`.
    pub fn embed(&self, p: &Poly) -> Option<Witness> {
        Witness::certify(
            p,
            embed_diag(&self.matrix),
            Some(self.entry.zero_based()),
            self.provenance,
            self.t.clone(),
        )
    }

    /// Embeds repeatedly until the matrix has order `n`.
    pub fn lift_to(mut self, p: &Poly, n: usize) -> Option<Witness> {
        while self.matrix.order() < n {
            self = self.embed(p)?;
        }
        Some(self)
    }
}

mod opt_rat {
    use crate::rational::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Work done by the numerical searches.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub random_trials: usize,
    pub descent_restarts: usize,
    pub descent_steps: usize,
    /// Smallest float entry of `p(A)` seen, if any finite value was seen.
    pub best_min_entry: Option<f64>,
}

impl SearchStats {
    fn merge(&mut self, other: &SearchStats) {
        self.random_trials += other.random_trials;
        self.descent_restarts += other.descent_restarts;
        self.descent_steps += other.descent_steps;
        self.best_min_entry = match (self.best_min_entry, other.best_min_entry) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SearchStats>,
}

impl WitnessResult {
    pub fn from_witness(w: Option<Witness>) -> Self {
        WitnessResult {
            found: w.is_some(),
            witness: w,
            stats: None,
        }
    }

    fn with_stats(mut self, stats: SearchStats) -> Self {
        self.stats = Some(stats);
        self
    }
}

/// `t·C_n` witness: the entry `(1, r+1)` of `p(t·C_n)` is `p_(r,n)(t)`.
pub fn scaled_circulant_witness_at(p: &Poly, n: usize, r: usize, t: &Rational) -> Option<Witness> {
    let c = shift_matrix(n).ok()?;
    Witness::certify(p, c.scale(t), Some((0, r)), Provenance::Circulant, Some(t.clone()))
}

/// Scans `t = 1, 2, 4, …, ≤ t_cap` for a negative residue part value
/// `p_(r,n)(t)` and returns `t·C_n` for the smallest such `r`.
pub fn circulant_witness(p: &Poly, n: usize, t_cap: &Rational) -> Result<WitnessResult> {
    let parts = residue_decompose(p, n)?;
    if p.is_zero() {
        return Ok(WitnessResult::from_witness(None));
    }
    let two = rational::int(2);
    let mut t = Rational::one();
    while &t <= t_cap {
        if let Some(r) = parts.parts.iter().position(|q| q.eval(&t).is_negative()) {
            let w = scaled_circulant_witness_at(p, n, r, &t);
            debug_assert!(w.is_some(), "closed form and dense evaluation disagree");
            return Ok(WitnessResult::from_witness(w));
        }
        t *= &two;
    }
    Ok(WitnessResult::from_witness(None))
}

/// `J_n(t)` witness citing the `(1, k+1)` entry, `p^(k)(t)/k!`.
pub fn jordan_witness_at(p: &Poly, n: usize, k: usize, t: &Rational) -> Option<Witness> {
    let j = jordan_realize(&JordanSpec {
        n,
        lambda: t.clone(),
    })
    .ok()?;
    let provenance = if t.is_zero() {
        Provenance::JordanZero
    } else {
        Provenance::Jordan
    };
    Witness::certify(p, j, Some((0, k)), provenance, Some(t.clone()))
}

/// `J_n(0)` witness: the first row of `p(J_n(0))` is `a_0, …, a_{n-1}`.
pub fn jordan_witness(p: &Poly, n: usize) -> Result<WitnessResult> {
    let image = eval_on_jordan(p, n, &Rational::zero())?;
    let k = (0..n).find(|&k| image.get(0, k).is_negative());
    Ok(WitnessResult::from_witness(
        k.and_then(|k| jordan_witness_at(p, n, k, &Rational::zero())),
    ))
}

fn lane_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> MatrixF {
    MatrixF::from_fn(n, |_, _| rng.random_range(0.0..=scale))
}

fn structured_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64, kind: usize) -> MatrixF {
    let s: f64 = rng.random_range(0.0..=scale);
    match kind % 3 {
        0 => {
            // s · P for a random permutation P
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            MatrixF::from_fn(n, |i, j| if perm[i] == j { s } else { 0.0 })
        }
        1 => {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=scale)).collect();
            MatrixF::from_fn(n, |i, j| v[(j + n - i) % n])
        }
        _ => MatrixF::from_fn(n, |i, j| {
            if i == j {
                s
            } else if j == i + 1 {
                1.0
            } else {
                0.0
            }
        }),
    }
}

fn exact_from_float(p: &Poly, a: &MatrixF, provenance: Provenance) -> Option<Witness> {
    let exact = a.rationalize(RATIONALIZE_DENOMINATOR);
    Witness::certify(p, exact, None, provenance, None)
}

fn trial_matrix(cfg: &SearchConfig, n: usize, index: usize) -> MatrixF {
    let mut rng = lane_rng(cfg.seed, index as u64);
    if index % STRUCTURED_EVERY == STRUCTURED_EVERY - 1 {
        structured_matrix(&mut rng, n, cfg.entry_scale, index / STRUCTURED_EVERY)
    } else {
        uniform_matrix(&mut rng, n, cfg.entry_scale)
    }
}

/// Seeded sampling of nonnegative matrices. Every tenth trial is a scaled
/// permutation, circulant or Jordan block instead of a uniform matrix.
/// Each trial owns its generator stream, so results do not depend on
/// scheduling.
pub fn random_search(p: &Poly, n: usize, cfg: &SearchConfig) -> Result<WitnessResult> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    if p.is_zero() {
        return Ok(WitnessResult::from_witness(None).with_stats(SearchStats::default()));
    }
    let coeffs = p.coeffs_f64();
    let found = (0..cfg.trials).into_par_iter().find_map_first(|i| {
        let a = trial_matrix(cfg, n, i);
        let (_, _, min) = mat_poly_eval_f64(&coeffs, &a).min_entry();
        if min < NUMERIC_THRESHOLD {
            exact_from_float(p, &a, Provenance::Random).map(|w| (i, w))
        } else {
            None
        }
    });
    let stats = match &found {
        Some((i, w)) => SearchStats {
            random_trials: i + 1,
            best_min_entry: Some(rational::to_f64(&w.value)),
            ..SearchStats::default()
        },
        None => {
            let best = (0..cfg.trials)
                .into_par_iter()
                .map(|i| mat_poly_eval_f64(&coeffs, &trial_matrix(cfg, n, i)).min_entry().2)
                .reduce(|| f64::INFINITY, f64::min);
            SearchStats {
                random_trials: cfg.trials,
                best_min_entry: best.is_finite().then_some(best),
                ..SearchStats::default()
            }
        }
    };
    Ok(WitnessResult::from_witness(found.map(|(_, w)| w)).with_stats(stats))
}

/// Derivative of `p(A)` along direction `D`:
/// `Σ_k a_k Σ_{α+β=k-1} A^α D A^β`, via the differentiated Horner recurrence.
pub fn directional_derivative(coeffs: &[f64], a: &MatrixF, d: &MatrixF) -> MatrixF {
    let n = a.order();
    let mut value = MatrixF::zeros(n);
    let mut deriv = MatrixF::zeros(n);
    for &c in coeffs.iter().rev() {
        deriv = &(&deriv * a) + &(&value * d);
        value = &value * a;
        for i in 0..n {
            let v = value.get(i, i) + c;
            value.set(i, i, v);
        }
    }
    deriv
}

/// Gradient of the entry `(u, v)` of `p(A)` with respect to every `A_ij`:
/// `G_ij = Σ_k a_k Σ_{α+β=k-1} (A^α)_{ui} (A^β)_{jv}`.
pub fn gradient_of_entry(coeffs: &[f64], a: &MatrixF, u: usize, v: usize) -> MatrixF {
    let n = a.order();
    let m = coeffs.len();
    let mut powers = Vec::with_capacity(m.max(1));
    powers.push(MatrixF::identity(n));
    for k in 1..m.saturating_sub(1) {
        let next = &powers[k - 1] * a;
        powers.push(next);
    }
    let mut g = MatrixF::zeros(n);
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        if c == 0.0 {
            continue;
        }
        for alpha in 0..k {
            let left = &powers[alpha];
            let right = &powers[k - 1 - alpha];
            for i in 0..n {
                let l = c * left.get(u, i);
                if l == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let cur = g.get(i, j);
                    g.set(i, j, cur + l * right.get(j, v));
                }
            }
        }
    }
    g
}

/// Projected gradient descent on `min_{u,v} p(A)_{uv}` over `A ≥ 0`,
/// starting from `a0`. Each step moves `step_size` along the normalized
/// negative gradient of the currently smallest entry and clamps at zero.
pub fn descent_search(p: &Poly, n: usize, a0: &MatrixF, cfg: &SearchConfig) -> Result<WitnessResult> {
    cfg.validate()?;
    if a0.order() != n || n == 0 {
        return Err(Error::InvalidConfig(format!(
            "starting matrix has order {}, expected {n}",
            a0.order()
        )));
    }
    if let Some((row, col)) = a0.first_negative() {
        return Err(Error::NegativeEntry { row: row + 1, col: col + 1 });
    }
    let (w, stats) = descend(p, a0.clone(), cfg);
    Ok(WitnessResult::from_witness(w).with_stats(stats))
}

fn descend(p: &Poly, mut a: MatrixF, cfg: &SearchConfig) -> (Option<Witness>, SearchStats) {
    let coeffs = p.coeffs_f64();
    let mut stats = SearchStats {
        descent_restarts: 1,
        ..SearchStats::default()
    };
    if p.is_zero() {
        return (None, stats);
    }
    for step in 0..=cfg.steps {
        let (u, v, f) = mat_poly_eval_f64(&coeffs, &a).min_entry();
        if f.is_finite() {
            stats.best_min_entry = Some(stats.best_min_entry.map_or(f, |b: f64| b.min(f)));
        }
        if f < NUMERIC_THRESHOLD {
            if let Some(w) = exact_from_float(p, &a, Provenance::Descent) {
                stats.descent_steps = step;
                return (Some(w), stats);
            }
        }
        if step == cfg.steps {
            break;
        }
        let g = gradient_of_entry(&coeffs, &a, u, v);
        let norm = g.frobenius_norm();
        if !(norm > 0.0 && norm.is_finite()) {
            stats.descent_steps = step;
            return (None, stats);
        }
        let scale = cfg.step_size / norm;
        for (x, dx) in a.data_mut().iter_mut().zip(g.data()) {
            *x = (*x - scale * dx).max(0.0);
        }
    }
    stats.descent_steps = cfg.steps;
    (None, stats)
}

/// `cfg.restarts` descents from seeded uniform starting points.
pub fn multi_start_descent(p: &Poly, n: usize, cfg: &SearchConfig) -> Result<WitnessResult> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let runs: Vec<(Option<Witness>, SearchStats)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = lane_rng(cfg.seed, DESCENT_STREAM_BASE + r as u64);
            descend(p, uniform_matrix(&mut rng, n, cfg.entry_scale), cfg)
        })
        .collect();
    let mut stats = SearchStats::default();
    let mut found = None;
    for (w, s) in runs {
        stats.merge(&s);
        if found.is_none() && w.is_some() {
            found = w;
            break;
        }
    }
    Ok(WitnessResult::from_witness(found).with_stats(stats))
}

/// Random sampling followed by multi-start descent.
pub fn search(p: &Poly, n: usize, cfg: &SearchConfig) -> Result<WitnessResult> {
    let random = random_search(p, n, cfg)?;
    if random.found {
        return Ok(random);
    }
    let descent = multi_start_descent(p, n, cfg)?;
    let mut stats = random.stats.unwrap_or_default();
    stats.merge(&descent.stats.clone().unwrap_or_default());
    Ok(WitnessResult {
        stats: Some(stats),
        ..descent
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::circulant_realize;
    use crate::matrix::CirculantSpec;
    use crate::rational::int;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn circ(v: &[i64]) -> MatrixQ {
        circulant_realize(&CirculantSpec::new(v.iter().map(|&x| int(x)).collect())).unwrap()
    }

    fn cap() -> Rational {
        SearchConfig::default().t_cap
    }

    #[test]
    fn circulant_witness_for_square() {
        let q = p(&[4, -4, 1]);
        let res = circulant_witness(&q, 2, &cap()).unwrap();
        let w = res.witness.unwrap();
        assert_eq!(w.matrix, circ(&[0, 1]));
        assert_eq!(w.t, Some(int(1)));
        assert_eq!(w.entry, Entry { row: 1, col: 2 });
        assert_eq!(w.value, int(-4));
        assert_eq!(mat_poly_eval(&q, &w.matrix), circ(&[5, -4]));
        assert!(w.verify(&q));
    }

    #[test]
    fn circulant_witness_needs_t_two() {
        let q = p(&[1, 1, 0, -1, 1]);
        let w = circulant_witness(&q, 2, &cap()).unwrap().witness.unwrap();
        assert_eq!(w.t, Some(int(2)));
        assert_eq!(w.matrix, circ(&[0, 2]));
        assert_eq!(mat_poly_eval(&q, &w.matrix), circ(&[17, -6]));
        assert_eq!((w.entry, w.value.clone()), (Entry { row: 1, col: 2 }, int(-6)));
    }

    #[test]
    fn circulant_witness_absent_for_nonnegative() {
        let res = circulant_witness(&p(&[1, 0, 3, 2]), 3, &cap()).unwrap();
        assert!(!res.found && res.witness.is_none());
        assert!(!circulant_witness(&Poly::zero(), 2, &cap()).unwrap().found);
    }

    #[test]
    fn circulant_witness_respects_cap() {
        // Negative part only past t = 4.
        let q = Poly::new(vec![int(0), int(0), int(0), int(8), int(0), rational::ratio(-1, 4)]);
        assert!(!circulant_witness(&q, 2, &int(4)).unwrap().found);
        assert!(circulant_witness(&q, 2, &int(8)).unwrap().found);
    }

    #[test]
    fn jordan_witness_examples() {
        let q = p(&[4, -4, 1]);
        let w = jordan_witness(&q, 2).unwrap().witness.unwrap();
        assert_eq!(w.provenance, Provenance::JordanZero);
        assert_eq!(mat_poly_eval(&q, &w.matrix), MatrixQ::from_int_rows(&[&[4, -4], &[0, 4]]).unwrap());
        assert_eq!((w.entry, w.value.clone()), (Entry { row: 1, col: 2 }, int(-4)));

        assert!(!jordan_witness(&p(&[0, 0, 0, 1]), 2).unwrap().found);

        let w = jordan_witness(&p(&[-1, 1]), 1).unwrap().witness.unwrap();
        assert_eq!(w.matrix, MatrixQ::from_int_rows(&[&[0]]).unwrap());
        assert_eq!(w.value, int(-1));
    }

    #[test]
    fn witness_lifts_to_larger_orders() {
        let q = p(&[4, -4, 1]);
        let w = circulant_witness(&q, 2, &cap()).unwrap().witness.unwrap();
        let lifted = w.clone().lift_to(&q, 4).unwrap();
        assert_eq!(lifted.matrix.order(), 4);
        assert_eq!(lifted.value, w.value);
        assert!(lifted.verify(&q));
    }

    #[test]
    fn certify_rejects_negative_matrices_and_nonnegative_entries() {
        let q = p(&[0, 1]);
        let m = MatrixQ::from_int_rows(&[&[1, -1], &[0, 1]]).unwrap();
        assert!(Witness::certify(&q, m, None, Provenance::Random, None).is_none());
        let m = MatrixQ::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(Witness::certify(&q, m, None, Provenance::Random, None).is_none());
    }

    #[test]
    fn random_search_examples() {
        let cfg = SearchConfig::default();
        let res = random_search(&p(&[4, -4, 1]), 2, &cfg).unwrap();
        assert!(res.found);
        let w = res.witness.unwrap();
        assert_eq!(w.provenance, Provenance::Random);
        assert!(w.verify(&p(&[4, -4, 1])));
        for n in 1..=4 {
            assert!(!random_search(&p(&[1, 1]), n, &cfg).unwrap().found);
        }
        assert!(!random_search(&Poly::zero(), 3, &cfg).unwrap().found);
    }

    #[test]
    fn random_search_is_deterministic() {
        let cfg = SearchConfig {
            seed: 42,
            ..SearchConfig::default()
        };
        let q = p(&[1, -3, 0, 1]);
        let a = random_search(&q, 3, &cfg).unwrap();
        let b = random_search(&q, 3, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn descent_examples() {
        let cfg = SearchConfig::default();
        let q = p(&[4, -4, 1]);
        let swap = MatrixF::from_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let res = descent_search(&q, 2, &swap, &cfg).unwrap();
        let w = res.witness.unwrap();
        assert_eq!(w.value, int(-4));
        assert_eq!(res.stats.unwrap().descent_steps, 0);

        let start = MatrixF::from_fn(3, |i, j| (i + 2 * j) as f64 / 3.0);
        assert!(!descent_search(&p(&[0, 0, 1]), 3, &start, &cfg).unwrap().found);
    }

    #[test]
    fn descent_rejects_negative_start() {
        let cfg = SearchConfig::default();
        let a0 = MatrixF::from_fn(2, |i, j| if (i, j) == (1, 0) { -0.5 } else { 1.0 });
        assert_eq!(
            descent_search(&p(&[1, 1]), 2, &a0, &cfg),
            Err(Error::NegativeEntry { row: 2, col: 1 })
        );
    }

    #[test]
    fn descent_walks_into_a_counterexample() {
        // p(x) = x^2 - 4x + 4 from the all-fours matrix: p(A) = A^2 - 4A + 4I
        // has off-diagonal entries 32 - 16 > 0, so the start is not a witness.
        let cfg = SearchConfig::default();
        let q = p(&[4, -4, 1]);
        let a0 = MatrixF::from_fn(2, |_, _| 4.0);
        let res = descent_search(&q, 2, &a0, &cfg).unwrap();
        assert!(res.found);
        assert!(res.stats.unwrap().descent_steps > 0);
        assert!(res.witness.unwrap().verify(&q));
    }

    #[test]
    fn gradient_matches_directional_derivative() {
        let coeffs = [1.0, -2.0, 0.5, 3.0, -1.0];
        let a = MatrixF::from_fn(3, |i, j| 0.3 + 0.1 * (i * 3 + j) as f64);
        for (u, v) in [(0, 0), (1, 2), (2, 1)] {
            let g = gradient_of_entry(&coeffs, &a, u, v);
            for i in 0..3 {
                for j in 0..3 {
                    let e = MatrixF::from_fn(3, |x, y| if (x, y) == (i, j) { 1.0 } else { 0.0 });
                    let d = directional_derivative(&coeffs, &a, &e).get(u, v);
                    assert!((g.get(i, j) - d).abs() <= 1e-12 * d.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let bad = SearchConfig {
            trials: 0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            t_cap: rational::ratio(1, 2),
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            step_size: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn witness_json_round_trip() {
        let q = p(&[4, -4, 1]);
        let res = circulant_witness(&q, 2, &cap()).unwrap();
        let s = serde_json::to_string(&res).unwrap();
        assert!(s.contains(r#""provenance":"circulant""#));
        assert!(s.contains(r#""entry":{"row":1,"col":2}"#));
        let back: WitnessResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, res);

        let cfg = SearchConfig::default();
        let s = serde_json::to_string(&cfg).unwrap();
        assert!(s.contains(r#""t_cap":"18446744073709551616/1""#));
        assert_eq!(serde_json::from_str::<SearchConfig>(&s).unwrap(), cfg);
        let partial: SearchConfig = serde_json::from_str(r#"{"seed":7}"#).unwrap();
        assert_eq!(partial.seed, 7);
        assert_eq!(partial.trials, 1000);
    }
}

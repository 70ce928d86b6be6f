//! Spectral necessary conditions: power sums `s_k(Λ) = Σ λ_i^k`, trace
//! nonnegativity of `p(A)^k`, and the inequality
//! `s_k(Λ)^m ≤ n^{m-1} s_{km}(Λ)` satisfied by every realizable spectrum.
//!
//! Spectra are complex floats. Exactly conjugate pairs are folded before
//! summing, so the power sums of a conjugation-closed list are real.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::rational::{self, Rational};

/// Absolute tolerance used by the spectral checks.
pub const SPECTRAL_TOLERANCE: f64 = 1e-7;

/// Multiset of complex numbers. Serializes as `[[re, im], …]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct SpectrumList {
    values: Vec<Complex64>,
}

impl From<Vec<[f64; 2]>> for SpectrumList {
    fn from(v: Vec<[f64; 2]>) -> Self {
        SpectrumList {
            values: v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        }
    }
}

impl From<SpectrumList> for Vec<[f64; 2]> {
    fn from(s: SpectrumList) -> Self {
        s.values.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl SpectrumList {
    pub fn new(values: Vec<Complex64>) -> Self {
        SpectrumList { values }
    }

    pub fn real(values: &[f64]) -> Self {
        SpectrumList {
            values: values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Eigenvalues `q(ω^j)`, `j = 0, …, n-1`, of `circ(v)` where
/// `q(x) = Σ v_{k+1} x^k`. The pairs `j`, `n-j` are set to exact conjugates
/// and the self-conjugate ones to their real parts.
pub fn circulant_spectrum(v: &[Rational]) -> SpectrumList {
    let n = v.len();
    let q = Poly::new(v.to_vec());
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..=n / 2 {
        if j >= n {
            break;
        }
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let mut z = q.eval_complex(w);
        if j == 0 || 2 * j == n {
            z = Complex64::new(z.re, 0.0);
        }
        values[j] = z;
        if j != 0 {
            values[n - j] = z.conj();
        }
    }
    SpectrumList { values }
}

/// `s_k(Λ) = Σ λ_i^k`.
pub fn power_sum(spectrum: &SpectrumList, k: u32) -> Complex64 {
    let vals = &spectrum.values;
    let mut used = vec![false; vals.len()];
    let mut re = 0.0;
    let mut im = 0.0;
    for i in 0..vals.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = vals[i];
        if z.im == 0.0 {
            re += z.re.powi(k as i32);
            continue;
        }
        let partner = (i + 1..vals.len()).find(|&j| !used[j] && vals[j] == z.conj());
        let zk = z.powu(k);
        match partner {
            Some(j) => {
                used[j] = true;
                re += 2.0 * zk.re;
            }
            None => {
                re += zk.re;
                im += zk.im;
            }
        }
    }
    Complex64::new(re, im)
}

/// `p(Λ) = {p(λ_1), …, p(λ_n)}`.
pub fn map_spectrum(p: &Poly, spectrum: &SpectrumList) -> SpectrumList {
    SpectrumList {
        values: spectrum.values.iter().map(|&z| p.eval_complex(z)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub k: u32,
    /// `[re, im]` of `s_k(p(Λ))`.
    pub value: [f64; 2],
    pub pass: bool,
}

/// `s_k(p(Λ)) ≥ 0` (real, within tolerance) for `k = 1, …, max_k`.
pub fn check_trace_conditions(p: &Poly, spectrum: &SpectrumList, max_k: u32) -> Vec<TraceEntry> {
    let mapped = map_spectrum(p, spectrum);
    (1..=max_k)
        .map(|k| {
            let s = power_sum(&mapped, k);
            TraceEntry {
                k,
                value: [s.re, s.im],
                pass: s.re >= -SPECTRAL_TOLERANCE && s.im.abs() <= SPECTRAL_TOLERANCE,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JllEntry {
    pub k: u32,
    pub m: u32,
    /// `Re(s_k)^m`
    pub lhs: f64,
    /// `n^{m-1} Re(s_{km})`
    pub rhs: f64,
    pub pass: bool,
}

/// `s_k^m ≤ n^{m-1} s_{km}` for `1 ≤ k ≤ max_k`, `1 ≤ m ≤ max_m`.
pub fn check_jll(spectrum: &SpectrumList, max_k: u32, max_m: u32) -> Vec<JllEntry> {
    let n = spectrum.len() as f64;
    let mut out = Vec::with_capacity((max_k * max_m) as usize);
    for k in 1..=max_k {
        let sk = power_sum(spectrum, k);
        for m in 1..=max_m {
            let skm = power_sum(spectrum, k * m);
            let lhs = sk.re.powi(m as i32);
            let rhs = n.powi(m as i32 - 1) * skm.re;
            let real = sk.im.abs() <= SPECTRAL_TOLERANCE && skm.im.abs() <= SPECTRAL_TOLERANCE;
            out.push(JllEntry {
                k,
                m,
                lhs,
                rhs,
                pass: real && lhs <= rhs + SPECTRAL_TOLERANCE,
            });
        }
    }
    out
}

/// Both spectral checks for one spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub spectrum: SpectrumList,
    pub trace: Vec<TraceEntry>,
    pub jll: Vec<JllEntry>,
    pub pass: bool,
}

pub fn spectral_report(p: &Poly, spectrum: SpectrumList, max_k: u32, max_m: u32) -> SpectralReport {
    let trace = check_trace_conditions(p, &spectrum, max_k);
    let jll = check_jll(&spectrum, max_k, max_m);
    let pass = trace.iter().all(|e| e.pass) && jll.iter().all(|e| e.pass);
    SpectralReport {
        spectrum,
        trace,
        jll,
        pass,
    }
}

/// Parses `"v1,v2,…"` into a rational reference vector.
pub fn parse_reference_vector(s: &str) -> crate::Result<Vec<Rational>> {
    s.split(',').map(rational::parse).collect()
}

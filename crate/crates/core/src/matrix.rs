//! Dense square matrices, the structured families used as witnesses, and
//! evaluation of polynomials at matrices.
//!
//! Storage is row-major and 0-based. Documentation and human-readable
//! output use the 1-based `(i, j)` convention; JSON carries plain nested
//! rows so no index base is implied there.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, Rational};
use crate::residue::residue_decompose;

/// Square matrix over exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    n: usize,
    data: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(n: usize) -> Self {
        MatrixQ {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            data.extend(r);
        }
        Ok(MatrixQ { n, data })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// First strictly negative entry in row-major order, 0-based.
    pub fn first_negative(&self) -> Option<(usize, usize, &Rational)> {
        self.data
            .iter()
            .position(Signed::is_negative)
            .map(|idx| (idx / self.n, idx % self.n, &self.data[idx]))
    }

    pub fn scale(&self, c: &Rational) -> MatrixQ {
        MatrixQ {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> MatrixQ {
        (0..k).fold(MatrixQ::identity(self.n), |acc, _| &acc * self)
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn to_f64(&self) -> MatrixF {
        MatrixF {
            n: self.n,
            data: self.data.iter().map(rational::to_f64).collect(),
        }
    }
}

impl Add for &MatrixQ {
    type Output = MatrixQ;
    fn add(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!(self.n, rhs.n, "order mismatch");
        MatrixQ {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &MatrixQ {
    type Output = MatrixQ;
    fn mul(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let n = self.n;
        let mut out = MatrixQ::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(rational::format_short).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.n.max(1)) {
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    rows: Vec<Vec<String>>,
}

impl Serialize for MatrixQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            rows: self
                .rows()
                .iter()
                .map(|r| r.iter().map(rational::format).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(d)?;
        if repr.rows.len() != repr.n {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                repr.n,
                repr.rows.len()
            )));
        }
        let rows = repr
            .rows
            .iter()
            .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        MatrixQ::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Square matrix of `f64`, used by the numerical search.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixF {
    n: usize,
    data: Vec<f64>,
}

impl MatrixF {
    pub fn zeros(n: usize) -> Self {
        MatrixF {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Smallest entry and its 0-based position.
    pub fn min_entry(&self) -> (usize, usize, f64) {
        let (idx, v) = self
            .data
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
        (idx / self.n, idx % self.n, v)
    }

    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|&v| v < 0.0)
            .map(|idx| (idx / self.n, idx % self.n))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Truncates every entry onto the grid `1/den`.
    pub fn rationalize(&self, den: i64) -> MatrixQ {
        MatrixQ {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|&v| rational::truncate_f64(v, den))
                .collect(),
        }
    }
}

impl Add for &MatrixF {
    type Output = MatrixF;
    fn add(self, rhs: &MatrixF) -> MatrixF {
        MatrixF {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &MatrixF {
    type Output = MatrixF;
    fn mul(self, rhs: &MatrixF) -> MatrixF {
        let n = self.n;
        let mut out = MatrixF::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Circulant with reference vector `v`: `a_ij = v_{(j-i) mod n + 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantSpec {
    #[serde(with = "rational::serde_vec")]
    pub v: Vec<Rational>,
}

impl CirculantSpec {
    pub fn new(v: Vec<Rational>) -> Self {
        CirculantSpec { v }
    }

    /// Reference vector `e_2`, i.e. the cyclic shift `C_n`.
    pub fn shift(n: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        if n > 1 {
            v[1] = Rational::one();
        } else if n == 1 {
            v[0] = Rational::one();
        }
        CirculantSpec { v }
    }
}

/// Jordan block `J_n(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanSpec {
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub lambda: Rational,
}

/// Any of the accepted matrix encodings: dense `{"n", "rows"}`,
/// `{"circ": [...]}` or `{"jordan": {"n", "lambda"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Circulant {
        #[serde(with = "rational::serde_vec")]
        circ: Vec<Rational>,
    },
    Jordan {
        jordan: JordanSpec,
    },
    Dense(MatrixQ),
}

impl MatrixSpec {
    pub fn realize(&self) -> Result<MatrixQ> {
        match self {
            MatrixSpec::Circulant { circ } => circulant_realize(&CirculantSpec::new(circ.clone())),
            MatrixSpec::Jordan { jordan } => jordan_realize(jordan),
            MatrixSpec::Dense(m) => Ok(m.clone()),
        }
    }
}

/// `p(A)` by Horner's scheme: `m` products of order-n matrices.
pub fn mat_poly_eval(p: &Poly, a: &MatrixQ) -> MatrixQ {
    let n = a.order();
    p.coeffs().iter().rev().fold(MatrixQ::zeros(n), |acc, c| {
        let mut next = &acc * a;
        for i in 0..n {
            next.data[i * n + i] += c;
        }
        next
    })
}

pub fn mat_poly_eval_f64(coeffs: &[f64], a: &MatrixF) -> MatrixF {
    let n = a.order();
    coeffs.iter().rev().fold(MatrixF::zeros(n), |acc, &c| {
        let mut next = &acc * a;
        for i in 0..n {
            next.data[i * n + i] += c;
        }
        next
    })
}

pub fn circulant_realize(spec: &CirculantSpec) -> Result<MatrixQ> {
    let n = spec.v.len();
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut m = MatrixQ::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.data[i * n + j] = spec.v[(j + n - i) % n].clone();
        }
    }
    Ok(m)
}

/// `C_n`, the circulant with reference vector `e_2`.
pub fn shift_matrix(n: usize) -> Result<MatrixQ> {
    circulant_realize(&CirculantSpec::shift(n))
}

/// `q(x) = Σ v_{k+1} x^k`, so that `q(C_n) = circ(v)`.
pub fn circulant_poly_identity(v: &[Rational]) -> Result<Poly> {
    if v.is_empty() {
        return Err(Error::ZeroOrder);
    }
    Ok(Poly::new(v.to_vec()))
}

/// `p(t·C_n)` from the residue parts: `circ(p_(0,n)(t), …, p_(n-1,n)(t))`.
pub fn eval_on_scaled_circulant(p: &Poly, n: usize, t: &Rational) -> Result<MatrixQ> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let parts = residue_decompose(p, n)?;
    circulant_realize(&CirculantSpec::new(parts.eval_parts(t)))
}

pub fn jordan_realize(spec: &JordanSpec) -> Result<MatrixQ> {
    if spec.n == 0 {
        return Err(Error::ZeroOrder);
    }
    let n = spec.n;
    let mut m = MatrixQ::scalar(n, spec.lambda.clone());
    for i in 0..n - 1 {
        m.data[i * n + i + 1] = Rational::one();
    }
    Ok(m)
}

/// `p(J_n(t))`: upper-triangular Toeplitz with `(i, i+k)` entry `p^(k)(t)/k!`.
pub fn eval_on_jordan(p: &Poly, n: usize, t: &Rational) -> Result<MatrixQ> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut diagonals = Vec::with_capacity(n);
    let mut factorial = Rational::one();
    for k in 0..n {
        if k > 0 {
            factorial *= rational::int(k as i64);
        }
        diagonals.push(p.derivative(k).eval(t) / &factorial);
    }
    let mut m = MatrixQ::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.data[i * n + j] = diagonals[j - i].clone();
        }
    }
    Ok(m)
}

/// `diag(A, 0)` of order `n + 1`.
pub fn embed_diag(a: &MatrixQ) -> MatrixQ {
    let n = a.order();
    let mut m = MatrixQ::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            m.data[i * (n + 1) + j] = a.get(i, j).clone();
        }
    }
    m
}

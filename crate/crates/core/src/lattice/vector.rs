use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{overflow, Error, Result};

/// A vector of `-Z^(n+1)`, stored by its coordinates in the orthonormal basis
/// `e_0, ..., e_n`. The pairing is minus the Euclidean dot product.
///
/// `Ord` is lexicographic on coordinates; witnesses are chosen least in this
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    /// The basis vector `e_i` of `-Z^len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut coords = vec![0; len];
        coords[i] = 1;
        LatticeVector(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn inner(&self, other: &LatticeVector) -> Result<i64> {
        inner_product(self, other)
    }

    /// `-<v,v>`, the (positive) Euclidean square length.
    pub fn norm(&self) -> Result<i64> {
        Ok(-inner_product(self, self)?)
    }

    /// Sum of absolute values of the coordinates.
    pub fn l1(&self) -> Result<i64> {
        self.0
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c.checked_abs()?))
            .ok_or(Error::Overflow)
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `<u,v> = -sum u_i v_i`.
pub fn inner_product(u: &LatticeVector, v: &LatticeVector) -> Result<i64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut acc: i64 = 0;
    for (a, b) in u.0.iter().zip(&v.0) {
        acc = overflow(acc.checked_sub(overflow(a.checked_mul(*b))?))?;
    }
    Ok(acc)
}

/// True iff every coordinate is odd.
pub fn is_characteristic(c: &LatticeVector) -> bool {
    c.0.iter().all(|x| x.rem_euclid(2) == 1)
}

/// A characteristic covector of `-Z^(n+1)`: all coordinates odd.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct CharCovector(LatticeVector);

impl CharCovector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        let v = LatticeVector(coords);
        if is_characteristic(&v) {
            Ok(CharCovector(v))
        } else {
            Err(Error::InvalidArgument(format!(
                "characteristic covector needs odd coordinates, got {v}"
            )))
        }
    }

    pub fn as_vector(&self) -> &LatticeVector {
        &self.0
    }

    /// `c^2 = <c,c>`, always negative.
    pub fn square(&self) -> Result<i64> {
        inner_product(&self.0, &self.0)
    }
}

impl TryFrom<Vec<i64>> for CharCovector {
    type Error = Error;

    fn try_from(coords: Vec<i64>) -> Result<Self> {
        CharCovector::new(coords)
    }
}

impl From<CharCovector> for Vec<i64> {
    fn from(c: CharCovector) -> Self {
        c.0 .0
    }
}

/// Symmetric integer matrix of pairings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GramMatrix(Vec<Vec<i64>>);

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    left: r.len(),
                    right: n,
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate().take(i) {
                if x != rows[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GramMatrix(rows))
    }

    /// Tridiagonal matrix with the given diagonal and constant off-diagonal.
    pub fn tridiagonal(diagonal: &[i64], off: i64) -> Self {
        let n = diagonal.len();
        let mut rows = vec![vec![0; n]; n];
        for i in 0..n {
            rows[i][i] = diagonal[i];
            if i + 1 < n {
                rows[i][i + 1] = off;
                rows[i + 1][i] = off;
            }
        }
        GramMatrix(rows)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        let det = bareiss_det(&self.0);
        det.to_i128().ok_or(Error::Overflow)
    }
}

pub(crate) fn bareiss_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Matrix of pairwise inner products.
pub fn gram(vectors: &[LatticeVector]) -> Result<GramMatrix> {
    let n = vectors.len();
    let mut rows = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = inner_product(&vectors[i], &vectors[j])?;
            rows[i][j] = x;
            rows[j][i] = x;
        }
    }
    Ok(GramMatrix(rows))
}

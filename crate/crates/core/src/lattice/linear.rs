use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::vector::GramMatrix;
use crate::error::{overflow, Error, Result};

/// The intersection lattice of a linear plumbing: a chain of weights
/// `a_1, ..., a_n`, each at least 2. The form is `-a_i` on the diagonal and
/// `+1` between neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearLattice {
    weights: Vec<i64>,
}

impl LinearLattice {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&a| a < 2) {
            return Err(Error::InvalidWeights(weights));
        }
        Ok(LinearLattice { weights })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn reversed(&self) -> LinearLattice {
        let mut weights = self.weights.clone();
        weights.reverse();
        LinearLattice { weights }
    }

    pub fn gram(&self) -> GramMatrix {
        let diag: Vec<i64> = self.weights.iter().map(|a| -a).collect();
        GramMatrix::tridiagonal(&diag, 1)
    }

    /// Number of vectors of norm 2.
    ///
    /// Writing the norm of `sum x_i v_i` as
    /// `x_1^2 + x_n^2 + sum (x_i - x_{i+1})^2 + sum (a_i - 2) x_i^2` shows the
    /// norm-2 vectors are exactly `+-` interval sums inside runs of 2s, so a run
    /// of length `k` contributes `k(k+1)`.
    pub fn root_count(&self) -> u64 {
        let mut total = 0u64;
        let mut run = 0u64;
        for &a in self.weights.iter().chain(std::iter::once(&0)) {
            if a == 2 {
                run += 1;
            } else {
                total += run * (run + 1);
                run = 0;
            }
        }
        total
    }

    /// Evaluates `[a_1, ..., a_n]^-` to a reduced fraction `(p, q)`.
    pub fn evaluate(&self) -> Result<(i64, i64)> {
        hj_evaluate(self)
    }
}

impl TryFrom<Vec<i64>> for LinearLattice {
    type Error = Error;

    fn try_from(weights: Vec<i64>) -> Result<Self> {
        LinearLattice::new(weights)
    }
}

impl From<LinearLattice> for Vec<i64> {
    fn from(l: LinearLattice) -> Self {
        l.weights
    }
}

/// Hirzebruch-Jung expansion `p/q = a_1 - 1/(a_2 - 1/(... - 1/a_n))`.
pub fn hj_expand(p: i64, q: i64) -> Result<LinearLattice> {
    if !(q >= 1 && p > q && p.gcd(&q) == 1) {
        return Err(Error::InvalidFraction { p, q });
    }
    let (mut num, mut den) = (p, q);
    let mut weights = Vec::new();
    while den > 0 {
        let a = Integer::div_ceil(&num, &den);
        weights.push(a);
        let rem = overflow(overflow(a.checked_mul(den))?.checked_sub(num))?;
        num = den;
        den = rem;
    }
    Ok(LinearLattice { weights })
}

pub fn hj_evaluate(lattice: &LinearLattice) -> Result<(i64, i64)> {
    let mut iter = lattice.weights.iter().rev();
    let mut num = *iter.next().expect("non-empty weights");
    let mut den = 1i64;
    for &a in iter {
        let next = overflow(overflow(a.checked_mul(num))?.checked_sub(den))?;
        den = num;
        num = next;
    }
    Ok((num, den))
}

/// Inverse of `q` modulo `p`, in `1..p`.
pub fn inverse_mod(q: i64, p: i64) -> Option<i64> {
    let e = q.rem_euclid(p).extended_gcd(&p);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent evaluation with exact rationals, front to back.
    fn evaluate_oracle(weights: &[i64]) -> (i64, i64) {
        use num_rational::Ratio;
        fn go(w: &[i64]) -> Ratio<i64> {
            if w.len() == 1 {
                Ratio::from_integer(w[0])
            } else {
                Ratio::from_integer(w[0]) - go(&w[1..]).recip()
            }
        }
        let r = go(weights);
        (*r.numer(), *r.denom())
    }

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(5, 4).unwrap().weights(), &[2, 2, 2, 2]);
        assert_eq!(hj_expand(5, 1).unwrap().weights(), &[5]);
        assert_eq!(hj_expand(7, 3).unwrap().weights(), &[3, 2, 2]);
        assert_eq!(evaluate_oracle(&[2, 2, 2, 2]), (5, 4));
        assert_eq!(evaluate_oracle(&[3, 2, 2]), (7, 3));
    }

    #[test]
    fn expand_errors() {
        assert!(hj_expand(6, 4).is_err());
        assert!(hj_expand(3, 3).is_err());
        assert!(hj_expand(3, 5).is_err());
        assert!(hj_expand(3, 0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let l = |w: &[i64]| LinearLattice::new(w.to_vec()).unwrap();
        assert_eq!(hj_evaluate(&l(&[5])).unwrap(), (5, 1));
        assert_eq!(hj_evaluate(&l(&[2, 2, 2, 2])).unwrap(), (5, 4));
        assert_eq!(hj_evaluate(&l(&[4, 2])).unwrap(), (7, 2));
        assert!(LinearLattice::new(vec![2, 1]).is_err());
        assert!(LinearLattice::new(vec![]).is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for p in 2..=500i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let l = hj_expand(p, q).unwrap();
                assert!(l.weights().iter().all(|&a| a >= 2));
                assert_eq!(hj_evaluate(&l).unwrap(), (p, q));
                assert_eq!(evaluate_oracle(l.weights()), (p, q));
            }
        }
    }

    #[test]
    fn inverse_class_reverses_weights() {
        for p in 2..=200i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let qi = inverse_mod(q, p).unwrap();
                assert_eq!(q * qi % p, 1 % p);
                assert_eq!(
                    hj_expand(p, qi).unwrap(),
                    hj_expand(p, q).unwrap().reversed()
                );
            }
        }
    }

    #[test]
    fn determinant_is_numerator() {
        for (p, q) in [(5, 4), (7, 3), (21, 8), (13, 5)] {
            let l = hj_expand(p, q).unwrap();
            assert_eq!(l.gram().determinant().unwrap().abs(), p as i128);
        }
    }

    #[test]
    fn root_counts() {
        let l = |w: &[i64]| LinearLattice::new(w.to_vec()).unwrap();
        assert_eq!(l(&[2, 2, 2, 2]).root_count(), 20);
        assert_eq!(l(&[5]).root_count(), 0);
        assert_eq!(l(&[2, 3, 2, 2]).root_count(), 2 + 6);
    }
}

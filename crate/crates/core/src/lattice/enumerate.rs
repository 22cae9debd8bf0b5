use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::vector::{gram, LatticeVector};
use crate::error::{Error, Result};

/// All vectors `v` in the integer span of `basis` with `<v,v> = -m`, sorted
/// lexicographically by ambient coordinates.
///
/// Fincke-Pohst enumeration over coefficient vectors, driven by an exact
/// rational LDL^T factorisation of the (positive definite) negated Gram
/// matrix.
pub fn vectors_of_norm(basis: &[LatticeVector], m: i64) -> Result<Vec<LatticeVector>> {
    if m < 1 {
        return Err(Error::OutOfRange {
            what: "norm",
            value: m,
            range: ">= 1".into(),
        });
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let k = basis.len();
    let g = gram(basis)?;
    // q holds the quadratic-form coefficients after in-place Cholesky:
    // Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    let mut q: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| BigRational::from_integer(BigInt::from(-g.get(i, j))))
                .collect()
        })
        .collect();
    for i in 0..k {
        if !q[i][i].is_positive() {
            return Err(Error::DependentBasis);
        }
        for j in i + 1..k {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for l in i + 1..k {
            for c in l..k {
                let d = &q[l][i] * &q[i][c];
                q[l][c] -= d;
            }
        }
    }

    let mut found = Vec::new();
    let mut coeffs = vec![0i64; k];
    let target = BigRational::from_integer(BigInt::from(m));
    search(&q, k, &mut coeffs, target, &mut |x| {
        let mut v = vec![0i64; basis[0].len()];
        for (c, b) in x.iter().zip(basis) {
            for (vi, bi) in v.iter_mut().zip(b.coords()) {
                *vi = vi
                    .checked_add(c.checked_mul(*bi).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        found.push(LatticeVector::new(v));
        Ok(())
    })?;
    found.sort();
    Ok(found)
}

fn search(
    q: &[Vec<BigRational>],
    level: usize,
    coeffs: &mut [i64],
    remaining: BigRational,
    emit: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if level == 0 {
        if remaining.is_zero() {
            emit(coeffs)?;
        }
        return Ok(());
    }
    let i = level - 1;
    let k = q.len();
    let mut centre = BigRational::zero();
    for j in i + 1..k {
        centre += &q[i][j] * BigRational::from_integer(BigInt::from(coeffs[j]));
    }
    // Admissible x satisfy q_ii (x + centre)^2 <= remaining; the set is an
    // integer interval around -centre.
    let fits = |x: i64| -> Option<BigRational> {
        let t = BigRational::from_integer(BigInt::from(x)) + &centre;
        let used = &q[i][i] * &t * &t;
        (used <= remaining).then(|| &remaining - used)
    };
    let start = (-centre.clone()).floor().to_integer();
    let start = start.to_i64().ok_or(Error::Overflow)?;
    let mut lo = start;
    while fits(lo - 1).is_some() {
        lo -= 1;
    }
    let mut hi = start;
    while fits(hi + 1).is_some() {
        hi += 1;
    }
    for x in lo..=hi {
        if let Some(rest) = fits(x) {
            coeffs[i] = x;
            search(q, i, coeffs, rest, emit)?;
        }
    }
    coeffs[i] = 0;
    Ok(())
}

/// Box-enumeration cross-check used in tests: bound each coefficient by
/// `m * (G^-1)_ii`, then test every point of the box.
#[cfg(test)]
pub(crate) fn vectors_of_norm_box(basis: &[LatticeVector], m: i64) -> Vec<LatticeVector> {
    let k = basis.len();
    let g = gram(basis).unwrap();
    // Adjugate diagonal via cofactor determinants.
    let det = g.determinant().unwrap().abs();
    let bounds: Vec<i64> = (0..k)
        .map(|i| {
            let minor: Vec<Vec<i64>> = (0..k)
                .filter(|&r| r != i)
                .map(|r| (0..k).filter(|&c| c != i).map(|c| g.get(r, c)).collect())
                .collect();
            let cof = super::vector::bareiss_det(&minor).abs().to_i128().unwrap();
            // x_i^2 <= m * cof / det
            let mut b = 0i64;
            while ((b + 1) as i128).pow(2) * det <= m as i128 * cof {
                b += 1;
            }
            b
        })
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let mut v = vec![0i64; basis[0].len()];
        for (c, b) in x.iter().zip(basis) {
            for (vi, bi) in v.iter_mut().zip(b.coords()) {
                *vi += c * bi;
            }
        }
        let v = LatticeVector::new(v);
        if v.norm().unwrap() == m {
            out.push(v);
        }
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                return out;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn examples() {
        let b = vec![v(&[1, -1])];
        assert_eq!(
            vectors_of_norm(&b, 2).unwrap(),
            vec![v(&[-1, 1]), v(&[1, -1])]
        );

        let b = vec![v(&[2, -1, 0]), v(&[0, 2, -1])];
        let found = vectors_of_norm(&b, 5).unwrap();
        assert_eq!(found.len(), 4);
        for x in &found {
            assert!(b.contains(x) || b.contains(&x.neg()));
        }

        let b = vec![v(&[1, 0])];
        assert!(vectors_of_norm(&b, 2).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let b = vec![v(&[1, 1]), v(&[2, 2])];
        assert_eq!(vectors_of_norm(&b, 2), Err(Error::DependentBasis));
        assert!(vectors_of_norm(&[v(&[1])], 0).is_err());
    }

    #[test]
    fn agrees_with_box_enumeration() {
        let bases = [
            vec![v(&[1, -1, 0, 0]), v(&[0, 1, -1, 0]), v(&[0, 0, 1, -1])],
            vec![v(&[2, 1, -1]), v(&[0, 2, -1])],
            vec![
                v(&[1, 1, 1, -1, 0]),
                v(&[0, 1, -1, 0, 0]),
                v(&[3, 0, 0, 0, -1]),
            ],
        ];
        for b in &bases {
            for m in 1..=8 {
                assert_eq!(
                    vectors_of_norm(b, m).unwrap(),
                    vectors_of_norm_box(b, m),
                    "m={m}"
                );
            }
        }
    }
}

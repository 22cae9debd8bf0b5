use num_integer::Integer;

use super::vector::LatticeVector;
use crate::error::{overflow, Error, Result};

/// Basis of `{v : <v, sigma> = 0}` in canonical echelon form.
///
/// Rows are in row echelon form with positive pivots; entries above a pivot
/// `d` are reduced into `[-d/2, d/2)`. The result depends only on the
/// sublattice, not on how it was generated.
pub fn complement_basis(sigma: &LatticeVector) -> Result<Vec<LatticeVector>> {
    if sigma.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = sigma.len();
    // Column operations on the identity that carry sigma to (g, 0, ..., 0);
    // the trailing columns then span the kernel.
    let mut s: Vec<i128> = sigma.coords().iter().map(|&x| x as i128).collect();
    let mut cols: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| i128::from(i == j)).collect())
        .collect();
    let lead = s.iter().position(|&x| x != 0).expect("non-zero sigma");
    s.swap(0, lead);
    cols.swap(0, lead);
    for j in 1..n {
        if s[j] == 0 {
            continue;
        }
        let e = s[0].extended_gcd(&s[j]);
        let (a, b) = (s[0] / e.gcd, s[j] / e.gcd);
        let (c0, cj) = (cols[0].clone(), cols[j].clone());
        for i in 0..n {
            cols[0][i] = overflow(
                c0[i]
                    .checked_mul(e.x)
                    .and_then(|u| cj[i].checked_mul(e.y)?.checked_add(u)),
            )?;
            cols[j][i] = overflow(
                cj[i]
                    .checked_mul(a)
                    .and_then(|u| u.checked_sub(c0[i].checked_mul(b)?)),
            )?;
        }
        s[0] = e.gcd;
        s[j] = 0;
    }
    let rows = echelon(cols.split_off(1))?;
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
                .collect::<Result<Vec<_>>>()
                .map(LatticeVector::new)
        })
        .collect()
}

/// Integer row echelon form of independent rows, pivots positive, entries
/// above pivots centred.
fn echelon(mut rows: Vec<Vec<i128>>) -> Result<Vec<Vec<i128>>> {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::with_capacity(m);
    let mut r = 0;
    for col in 0..width {
        if r == m {
            break;
        }
        // Euclid on column `col` among rows r..m.
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| rows[i][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz
                .iter()
                .min_by_key(|&&i| rows[i][col].abs())
                .expect("non-empty");
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if rows[i][col] != 0 {
                    let f = Integer::div_floor(&rows[i][col], &rows[r][col]);
                    sub_multiple(&mut rows, i, r, f)?;
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows.get(r).is_some_and(|row| row[col] != 0) {
            if rows[r][col] < 0 {
                for x in rows[r].iter_mut() {
                    *x = -*x;
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    if r != m {
        return Err(Error::DependentBasis);
    }
    for (k, &col) in pivots.iter().enumerate() {
        let d = rows[k][col];
        for i in 0..k {
            let x = rows[i][col];
            let mut red = x.rem_euclid(d);
            if 2 * red >= d {
                red -= d;
            }
            let f = (x - red) / d;
            if f != 0 {
                sub_multiple(&mut rows, i, k, f)?;
            }
        }
    }
    Ok(rows)
}

fn sub_multiple(rows: &mut [Vec<i128>], target: usize, source: usize, f: i128) -> Result<()> {
    for c in 0..rows[target].len() {
        let d = overflow(rows[source][c].checked_mul(f))?;
        rows[target][c] = overflow(rows[target][c].checked_sub(d))?;
    }
    Ok(())
}

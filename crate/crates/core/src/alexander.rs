//! Symmetric Alexander polynomials, L-space form, torsion coefficients, and
//! genus formulas for torus knots and cables.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{overflow, Error, Result};

/// `Delta(T) = sum_{j=-g}^{g} a_j T^j` with `a_j = a_{-j}`, stored as the
/// non-negative half `a_0, ..., a_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct AlexanderPoly {
    half: Vec<i64>,
}

impl AlexanderPoly {
    /// From `a_0, ..., a_g`; trailing zeros are dropped.
    pub fn from_half(mut half: Vec<i64>) -> Result<Self> {
        while half.last() == Some(&0) {
            half.pop();
        }
        if half.is_empty() {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        Ok(AlexanderPoly { half })
    }

    /// From the full coefficient list `a_{-g}, ..., a_g`.
    pub fn from_symmetric(full: &[i64]) -> Result<Self> {
        if full.len().is_multiple_of(2) {
            return Err(Error::InvalidPolynomial(format!(
                "expected an odd number of coefficients, got {}",
                full.len()
            )));
        }
        let rev: Vec<i64> = full.iter().rev().copied().collect();
        if rev != full {
            return Err(Error::InvalidPolynomial("not symmetric".into()));
        }
        AlexanderPoly::from_half(full[full.len() / 2..].to_vec())
    }

    pub fn unknot() -> Self {
        AlexanderPoly { half: vec![1] }
    }

    pub fn degree(&self) -> usize {
        self.half.len() - 1
    }

    /// `a_j`, zero outside `-g..=g`.
    pub fn coeff(&self, j: i64) -> i64 {
        self.half
            .get(j.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn half(&self) -> &[i64] {
        &self.half
    }

    /// `a_{-g}, ..., a_g`.
    pub fn to_symmetric(&self) -> Vec<i64> {
        let mut full: Vec<i64> = self.half.iter().rev().copied().collect();
        full.extend_from_slice(&self.half[1..]);
        full
    }
}

impl TryFrom<Vec<i64>> for AlexanderPoly {
    type Error = Error;

    fn try_from(half: Vec<i64>) -> Result<Self> {
        AlexanderPoly::from_half(half)
    }
}

impl From<AlexanderPoly> for Vec<i64> {
    fn from(p: AlexanderPoly) -> Self {
        p.half
    }
}

/// Text form `a_0,a_1,...,a_g`.
impl FromStr for AlexanderPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let half = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidPolynomial(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AlexanderPoly::from_half(half)
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.half.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Non-zero coefficients are `+-1`, alternate in sign from the top, and the
/// top one is `+1`.
pub fn validate_lspace_form(poly: &AlexanderPoly) -> bool {
    let mut expect = 1;
    for j in (-(poly.degree() as i64)..=poly.degree() as i64).rev() {
        match poly.coeff(j) {
            0 => {}
            a if a == expect => expect = -expect,
            _ => return false,
        }
    }
    true
}

/// `t_i` together with whether the polynomial passed
/// [`validate_lspace_form`]; unvalidated values are still exact sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torsion {
    pub value: i64,
    pub validated: bool,
}

/// `t_i = sum_{j >= 1} j * a_{|i| + j}`.
pub fn torsion(poly: &AlexanderPoly, i: i64) -> Result<Torsion> {
    Ok(Torsion {
        value: torsion_value(poly, i)?,
        validated: validate_lspace_form(poly),
    })
}

pub(crate) fn torsion_value(poly: &AlexanderPoly, i: i64) -> Result<i64> {
    let start = i.unsigned_abs() as usize;
    let mut t: i64 = 0;
    for (j, &a) in poly.half.iter().enumerate().skip(start + 1) {
        let w = (j - start) as i64;
        t = overflow(t.checked_add(overflow(w.checked_mul(a))?))?;
    }
    Ok(t)
}

/// `t_0, ..., t_g` of an L-space-form polynomial (`t_g = 0`, and all later
/// values vanish).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub genus: usize,
    pub values: Vec<i64>,
}

impl TorsionProfile {
    pub fn new(poly: &AlexanderPoly) -> Result<Self> {
        if !validate_lspace_form(poly) {
            return Err(Error::NotLSpaceForm);
        }
        let values = (0..=poly.degree() as i64)
            .map(|i| torsion_value(poly, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorsionProfile {
            genus: poly.degree(),
            values,
        })
    }

    /// `t_i` for any integer `i`.
    pub fn get(&self, i: i64) -> i64 {
        self.values
            .get(i.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0)
    }
}

/// The degree `g`, which is the knot genus for an L-space knot.
pub fn genus(poly: &AlexanderPoly) -> usize {
    poly.degree()
}

/// Alexander polynomial of the `(r,s)` torus knot,
/// `(T^{rs} - 1)(T - 1) / ((T^r - 1)(T^s - 1))`, recentred.
pub fn torus_poly(r: i64, s: i64) -> Result<AlexanderPoly> {
    if r < 2 || s < 2 || r.gcd(&s) != 1 {
        return Err(Error::InvalidArgument(format!(
            "torus knot needs coprime r, s >= 2, got ({r}, {s})"
        )));
    }
    let rs = overflow(r.checked_mul(s))? as usize;
    let (r, s) = (r as usize, s as usize);
    // numerator (T^{rs} - 1)(T - 1)
    let mut num = vec![0i64; rs + 2];
    num[rs + 1] += 1;
    num[rs] -= 1;
    num[1] -= 1;
    num[0] += 1;
    // divide by (T^r - 1), then by (T^s - 1)
    let num = divide_binomial(&num, r)?;
    let full = divide_binomial(&num, s)?;
    let deg = (r - 1) * (s - 1);
    debug_assert_eq!(full.len(), deg + 1);
    AlexanderPoly::from_half(full[deg / 2..].to_vec())
}

/// Exact division of an ascending-coefficient polynomial by `T^k - 1`.
fn divide_binomial(num: &[i64], k: usize) -> Result<Vec<i64>> {
    let mut rem = num.to_vec();
    let qdeg = rem.len() - 1 - k;
    let mut quot = vec![0i64; qdeg + 1];
    for d in (k..rem.len()).rev() {
        let c = rem[d];
        if c != 0 {
            quot[d - k] = c;
            rem[d] = 0;
            rem[d - k] = overflow(rem[d - k].checked_add(c))?;
        }
    }
    if rem.iter().any(|&x| x != 0) {
        return Err(Error::InvalidPolynomial("inexact division".into()));
    }
    Ok(quot)
}

/// Genus of the `(q, r)` cable of a knot of genus `companion_genus`, from
/// `2g - 1 = qr + q(2 g_c - 1) - r`.
pub fn cable_genus(q: i64, r: i64, companion_genus: i64) -> Result<i64> {
    if q < 2 || r < 1 || companion_genus < 0 || q.gcd(&r) != 1 {
        return Err(Error::InvalidArgument(format!(
            "cable needs q >= 2, r >= 1 coprime and g >= 0, got q={q} r={r} g={companion_genus}"
        )));
    }
    let qr = overflow(q.checked_mul(r))?;
    let inner = overflow(
        companion_genus
            .checked_mul(2)
            .and_then(|x| x.checked_sub(1))
            .and_then(|x| x.checked_mul(q)),
    )?;
    let two_g_minus_one = overflow(qr.checked_add(inner).and_then(|x| x.checked_sub(r)))?;
    let two_g = two_g_minus_one + 1;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::Parity(two_g_minus_one));
    }
    Ok(two_g / 2)
}

/// Alexander polynomial of the `(q, r)` cable, `Delta_C(T^q) Delta_{T(q,r)}(T)`.
pub fn cable_poly(q: i64, r: i64, companion: &AlexanderPoly) -> Result<AlexanderPoly> {
    cable_genus(q, r, companion.degree() as i64)?;
    let pattern = if r == 1 {
        AlexanderPoly::unknot()
    } else {
        torus_poly(q, r)?
    };
    let q = q as usize;
    let inner = companion.to_symmetric();
    let mut spread = vec![0i64; (inner.len() - 1) * q + 1];
    for (j, a) in inner.iter().enumerate() {
        spread[j * q] = *a;
    }
    let outer = pattern.to_symmetric();
    let mut full = vec![0i64; spread.len() + outer.len() - 1];
    for (i, a) in spread.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in outer.iter().enumerate() {
            let term = overflow(a.checked_mul(*b))?;
            full[i + j] = overflow(full[i + j].checked_add(term))?;
        }
    }
    AlexanderPoly::from_symmetric(&full)
}

/// Whether the cabling slope `qr` gives an L-space: `q(2 g_c - 1) < r`.
pub fn cable_lspace_criterion(q: i64, r: i64, companion_genus: i64) -> bool {
    q.saturating_mul(2 * companion_genus - 1) < r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(half: &[i64]) -> AlexanderPoly {
        AlexanderPoly::from_half(half.to_vec()).unwrap()
    }

    fn trefoil() -> AlexanderPoly {
        poly(&[-1, 1])
    }

    fn t25() -> AlexanderPoly {
        poly(&[1, -1, 1])
    }

    /// Every L-space-form polynomial of the given degree: choose which of the
    /// exponents 1..g-1 carry a term (g and 0 always do); signs then alternate.
    fn lspace_polys(g: usize) -> Vec<AlexanderPoly> {
        if g == 0 {
            return vec![AlexanderPoly::unknot()];
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << (g - 1)) {
            let mut exps: Vec<usize> = vec![g];
            exps.extend((1..g).rev().filter(|e| mask >> (e - 1) & 1 == 1));
            exps.push(0);
            let mut half = vec![0i64; g + 1];
            let mut sign = 1;
            for e in exps {
                half[e] = sign;
                sign = -sign;
            }
            out.push(poly(&half));
        }
        out
    }

    #[test]
    fn parse_and_display() {
        let p: AlexanderPoly = "-1,1".parse().unwrap();
        assert_eq!(p, trefoil());
        assert_eq!(p.to_string(), "-1,1");
        assert_eq!(p.to_symmetric(), vec![1, -1, 1]);
        assert_eq!("1, -1, 1, 0".parse::<AlexanderPoly>().unwrap(), t25());
        assert!("1,x".parse::<AlexanderPoly>().is_err());
        assert!("0,0".parse::<AlexanderPoly>().is_err());
        assert!(AlexanderPoly::from_symmetric(&[1, -1, 2]).is_err());
        assert!(AlexanderPoly::from_symmetric(&[1, -1]).is_err());
        assert_eq!(
            AlexanderPoly::from_symmetric(&[1, -1, 1]).unwrap(),
            trefoil()
        );
    }

    #[test]
    fn validation_examples() {
        assert!(validate_lspace_form(&trefoil()));
        assert!(validate_lspace_form(&t25()));
        assert!(!validate_lspace_form(&poly(&[-2, 1])));
        assert!(validate_lspace_form(&AlexanderPoly::unknot()));
        // figure eight: -T + 3 - T^-1
        assert!(!validate_lspace_form(&poly(&[3, -1])));
        // leading -1
        assert!(!validate_lspace_form(&poly(&[1, -1])));
        // sign repeats
        assert!(!validate_lspace_form(&poly(&[1, 1, 1])));
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(
            torsion(&trefoil(), 0).unwrap(),
            Torsion {
                value: 1,
                validated: true
            }
        );
        assert_eq!(torsion(&trefoil(), 1).unwrap().value, 0);
        assert_eq!(torsion(&t25(), 1).unwrap().value, 1);
        assert_eq!(torsion(&t25(), -1).unwrap().value, 1);
        assert!(!torsion(&poly(&[-2, 1]), 0).unwrap().validated);
        assert!(TorsionProfile::new(&poly(&[-2, 1])).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&AlexanderPoly::unknot()), 0);
        assert_eq!(genus(&trefoil()), 1);
        assert_eq!(genus(&t25()), 2);
    }

    #[test]
    fn torus_examples() {
        assert_eq!(torus_poly(2, 3).unwrap(), trefoil());
        assert_eq!(torus_poly(2, 5).unwrap(), t25());
        let t35 = torus_poly(3, 5).unwrap();
        assert_eq!(t35.degree(), 4);
        assert!(validate_lspace_form(&t35));
        // T^4 - T^3 + T - 1 + T^-1 - T^-3 + T^-4
        assert_eq!(t35.half(), &[-1, 1, 0, -1, 1]);
        assert!(torus_poly(2, 4).is_err());
        assert!(torus_poly(1, 4).is_err());
    }

    #[test]
    fn torus_polys_have_lspace_form() {
        for r in 2..=12 {
            for s in 2..=12 {
                if r.gcd(&s) == 1 {
                    let p = torus_poly(r, s).unwrap();
                    assert!(validate_lspace_form(&p), "T({r},{s})");
                    assert_eq!(p.degree() as i64, (r - 1) * (s - 1) / 2);
                    assert_eq!(p, torus_poly(s, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn torsion_profile_shape() {
        for g in 0..=8 {
            for p in lspace_polys(g) {
                assert!(validate_lspace_form(&p));
                let prof = TorsionProfile::new(&p).unwrap();
                for i in 0..=g as i64 + 2 {
                    let (a, b) = (prof.get(i), prof.get(i + 1));
                    assert!(a - b == 0 || a - b == 1, "{p} i={i}");
                    assert!(a >= 0);
                    assert_eq!(a == 0, i >= g as i64, "{p} i={i}");
                }
            }
        }
    }

    #[test]
    fn two_bridge_torsion_profile() {
        // T(2,2k+1) has a_j = (-1)^(k-j), so t_i = ceil((k - |i|) / 2).
        for k in 1..=20i64 {
            let p = torus_poly(2, 2 * k + 1).unwrap();
            for i in -k - 1..=k + 1 {
                let want = ((k - i.abs()).max(0) + 1) / 2;
                assert_eq!(torsion(&p, i).unwrap().value, want, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn cable_examples() {
        assert_eq!(cable_genus(2, 3, 0).unwrap(), 1);
        assert_eq!(cable_genus(2, 11, 1).unwrap(), 7);
        assert_eq!(cable_genus(2, 1, 0).unwrap(), 0);
        assert!(cable_genus(2, 4, 0).is_err());
        assert!(cable_genus(1, 3, 0).is_err());
        assert!(cable_lspace_criterion(2, 3, 0));
        assert!(!cable_lspace_criterion(2, 1, 1));
        assert!(cable_lspace_criterion(2, 11, 1));
    }

    #[test]
    fn cable_genus_classical_formula() {
        for q in 2..=5i64 {
            for r in 1..=21i64 {
                if q.gcd(&r) != 1 {
                    continue;
                }
                for gc in 0..=4 {
                    let g = cable_genus(q, r, gc).unwrap();
                    assert_eq!(2 * g, 2 * q * gc + (q - 1) * (r - 1));
                }
            }
        }
    }

    #[test]
    fn cable_of_unknot_is_torus_knot() {
        for q in 2..=6i64 {
            for r in 2..=13i64 {
                if q.gcd(&r) == 1 {
                    assert_eq!(
                        cable_genus(q, r, 0).unwrap(),
                        torus_poly(q, r).unwrap().degree() as i64
                    );
                }
            }
        }
    }

    #[test]
    fn cable_poly_examples() {
        let trefoil = torus_poly(2, 3).unwrap();
        assert_eq!(cable_poly(2, 3, &AlexanderPoly::unknot()).unwrap(), trefoil);
        assert_eq!(
            cable_poly(2, 1, &AlexanderPoly::unknot()).unwrap(),
            AlexanderPoly::unknot()
        );
        let c = cable_poly(2, 11, &trefoil).unwrap();
        assert_eq!(c.degree(), 7);
        assert!(validate_lspace_form(&c));
        assert_eq!(c.to_symmetric().iter().sum::<i64>(), 1);
        assert!(!cable_lspace_criterion(2, 1, 1));
        assert!(cable_poly(2, 0, &trefoil).is_err());
    }

    #[test]
    fn cable_poly_degree_matches_genus_formula() {
        for g in [0i64, 1, 3] {
            let companion = if g == 0 {
                AlexanderPoly::unknot()
            } else {
                torus_poly(2, 2 * g + 1).unwrap()
            };
            for q in 2..=4 {
                for r in 1..=15 {
                    if q.gcd(&r) != 1 {
                        continue;
                    }
                    let c = cable_poly(q, r, &companion).unwrap();
                    assert_eq!(c.degree() as i64, cable_genus(q, r, g).unwrap());
                    if cable_lspace_criterion(q, r, g) {
                        assert!(validate_lspace_form(&c), "q={q} r={r} g={g}");
                    }
                }
            }
        }
    }
}

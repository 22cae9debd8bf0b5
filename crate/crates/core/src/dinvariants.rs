//! Correction terms of surgeries on the unknot and on L-space knots, the
//! spin^c labelling of `K_p`, and the characteristic-covector inequality that
//! a negative definite filling must satisfy.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::alexander::{validate_lspace_form, AlexanderPoly, TorsionProfile};
use crate::changemaker::Changemaker;
use crate::error::{overflow, Error, Result};
use crate::lattice::{inner_product, CharCovector, LatticeVector};

/// A spin^c structure on `K_p`, identified with `i` in `Z/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpincLabel {
    i: i64,
    p: i64,
}

impl SpincLabel {
    pub fn new(i: i64, p: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::OutOfRange {
                what: "p",
                value: p,
                range: ">= 1".into(),
            });
        }
        if !(0..p).contains(&i) {
            return Err(Error::OutOfRange {
                what: "spin^c label",
                value: i,
                range: format!("0..{p}"),
            });
        }
        Ok(SpincLabel { i, p })
    }

    pub fn value(self) -> i64 {
        self.i
    }

    pub fn modulus(self) -> i64 {
        self.p
    }

    /// Representative with `|i| <= p/2`, as `min(i, p - i)`.
    pub fn reduced(self) -> i64 {
        self.i.min(self.p - self.i)
    }
}

/// An exact rational correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrectionTerm(Ratio<i64>);

impl CorrectionTerm {
    pub fn new(numer: i64, denom: i64) -> Self {
        CorrectionTerm(Ratio::new(numer, denom))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for CorrectionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for CorrectionTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CorrectionTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (n, den) = match s.split_once('/') {
            Some((n, den)) => (n, den),
            None => (s.as_str(), "1"),
        };
        let n: i64 = n.trim().parse().map_err(serde::de::Error::custom)?;
        let den: i64 = den.trim().parse().map_err(serde::de::Error::custom)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(CorrectionTerm::new(n, den))
    }
}

fn sigma_vector(sigma: &Changemaker) -> LatticeVector {
    LatticeVector::new(sigma.sigma().to_vec())
}

/// `i = ((<c, sigma> + p) / 2) mod p`.
pub fn spinc_label(c: &CharCovector, sigma: &Changemaker, p: i64) -> Result<SpincLabel> {
    let pairing = inner_product(c.as_vector(), &sigma_vector(sigma))?;
    label_of_pairing(pairing, p)
}

fn label_of_pairing(pairing: i64, p: i64) -> Result<SpincLabel> {
    let twice = overflow(pairing.checked_add(p))?;
    if twice % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "<c, sigma> + p = {twice} is odd"
        )));
    }
    SpincLabel::new((twice / 2).rem_euclid(p), p)
}

/// `d(U_p, i) = ((2i - p)^2 - p) / 4p`.
pub fn d_unknot(p: i64, i: SpincLabel) -> Result<CorrectionTerm> {
    if i.modulus() != p {
        return Err(Error::InvalidArgument(format!(
            "label is mod {}, expected mod {p}",
            i.modulus()
        )));
    }
    let v = 2 * i.value() - p;
    let numer = overflow(v.checked_mul(v).and_then(|x| x.checked_sub(p)))?;
    let denom = overflow(p.checked_mul(4))?;
    Ok(CorrectionTerm::new(numer, denom))
}

/// `d(K_p, i) = d(U_p, i) - 2 t_{i~}(K)` with `i~ = min(i, p - i)`.
pub fn d_lspace_surgery(p: i64, i: SpincLabel, poly: &AlexanderPoly) -> Result<CorrectionTerm> {
    let profile = TorsionProfile::new(poly)?;
    let du = d_unknot(p, i)?;
    let t = profile.get(i.reduced());
    let shift = overflow(t.checked_mul(2))?;
    Ok(CorrectionTerm(du.0 - Ratio::from_integer(shift)))
}

/// Upper bound on the genus from `2g <= <c, sigma> + p` over
/// `c in {+-1}^(n+1)`; the minimum is at the sign vector of `sigma`.
pub fn max_genus_from_sign_vectors(sigma: &Changemaker) -> Result<i64> {
    let s = sigma_vector(sigma);
    let sign = LatticeVector::new(
        s.coords()
            .iter()
            .map(|&x| if x >= 0 { 1 } else { -1 })
            .collect(),
    );
    let least = overflow(inner_product(&sign, &s)?.checked_add(sigma.norm()))?;
    Ok(least.div_euclid(2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub label: i64,
    pub covector: Vec<i64>,
    /// `c^2 + (n+1)`
    pub lhs: i64,
    /// `-8 t_i`
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelReport {
    pub label: i64,
    pub reduced: i64,
    pub torsion: i64,
    /// Lexicographically least covector in the box attaining equality.
    pub equality_witness: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCReport {
    pub p: i64,
    pub rank: usize,
    #[serde(rename = "box")]
    pub box_bound: i64,
    pub covectors_checked: u64,
    pub violation_count: u64,
    /// The first violations in lexicographic order of covectors.
    pub violations: Vec<Violation>,
    pub labels: Vec<LabelReport>,
    /// Set when some label has no equality witness inside the box. Absence
    /// within a box is evidence, not proof.
    pub caveat: Option<String>,
}

impl LemmaCReport {
    pub fn obstructed(&self) -> bool {
        self.violation_count > 0
    }

    pub fn all_labels_sharp(&self) -> bool {
        self.labels.iter().all(|l| l.equality_witness.is_some())
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 16;
const MAX_COVECTORS: u64 = 100_000_000;

/// Checks `c^2 + (n+1) <= -8 t_i` for every characteristic `c` with
/// coordinates in `[-box, box]`, where `i` is the label `c` induces through
/// `sigma`, and records for each label whether equality is attained.
pub fn lemma_c_check(
    sigma: &Changemaker,
    poly: &AlexanderPoly,
    box_bound: i64,
) -> Result<LemmaCReport> {
    if box_bound < 1 {
        return Err(Error::OutOfRange {
            what: "box",
            value: box_bound,
            range: ">= 1".into(),
        });
    }
    if !validate_lspace_form(poly) {
        return Err(Error::NotLSpaceForm);
    }
    let profile = TorsionProfile::new(poly)?;
    let p = sigma.norm();
    let rank = sigma.len();
    let values: Vec<i64> = (-box_bound..=box_bound).filter(|v| v % 2 != 0).collect();
    let total = (values.len() as u64)
        .checked_pow(rank as u32)
        .filter(|&t| t <= MAX_COVECTORS)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{}^{rank} covectors exceed the search limit",
                values.len()
            ))
        })?;

    let mut labels: Vec<LabelReport> = (0..p)
        .map(|i| {
            let reduced = i.min(p - i);
            LabelReport {
                label: i,
                reduced,
                torsion: profile.get(reduced),
                equality_witness: None,
            }
        })
        .collect();
    let mut violations = Vec::new();
    let mut violation_count = 0u64;

    let s = sigma.sigma();
    let mut digits = vec![0usize; rank];
    for _ in 0..total {
        let c: Vec<i64> = digits.iter().map(|&d| values[d]).collect();
        let mut pairing = 0i64;
        let mut square = 0i64;
        for (ci, si) in c.iter().zip(s) {
            pairing = overflow(pairing.checked_sub(overflow(ci.checked_mul(*si))?))?;
            square = overflow(square.checked_add(ci * ci))?;
        }
        let label = label_of_pairing(pairing, p)?.value() as usize;
        let lhs = rank as i64 - square;
        let rhs = -8 * labels[label].torsion;
        if lhs > rhs {
            violation_count += 1;
            if violations.len() < MAX_REPORTED_VIOLATIONS {
                violations.push(Violation {
                    label: label as i64,
                    covector: c.clone(),
                    lhs,
                    rhs,
                });
            }
        } else if lhs == rhs && labels[label].equality_witness.is_none() {
            labels[label].equality_witness = Some(c);
        }
        // odometer, last coordinate fastest, so covectors run in lex order
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < values.len() {
                break;
            }
            *d = 0;
        }
    }

    let missing = labels
        .iter()
        .filter(|l| l.equality_witness.is_none())
        .count();
    let caveat = (missing > 0).then(|| {
        format!(
            "{missing} of {p} labels have no equality witness with |c_j| <= {box_bound}; \
             a larger box may still find one"
        )
    });
    Ok(LemmaCReport {
        p,
        rank,
        box_bound,
        covectors_checked: total,
        violation_count,
        violations,
        labels,
        caveat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::{cable_poly, torus_poly};
    use crate::changemaker::{enumerate_changemakers, sharp_genus};
    use std::collections::BTreeSet;

    fn cm(s: &[i64]) -> Changemaker {
        Changemaker::new(s.to_vec()).unwrap()
    }

    fn label(i: i64, p: i64) -> SpincLabel {
        SpincLabel::new(i, p).unwrap()
    }

    /// `d(U_p, i) = -(1/4) max (1 - v^2/p)` over `v = 2i - p (mod 2p)`,
    /// scanning `|v| <= 10p`.
    fn d_unknot_oracle(p: i64, i: i64) -> Ratio<i64> {
        let best = (-10 * p..=10 * p)
            .filter(|v| (v - (2 * i - p)).rem_euclid(2 * p) == 0)
            .map(|v| Ratio::from_integer(1) - Ratio::new(v * v, p))
            .max()
            .unwrap();
        -best / 4
    }

    #[test]
    fn label_examples() {
        let s = cm(&[1, 2]);
        let c = CharCovector::new(vec![1, 1]).unwrap();
        assert_eq!(spinc_label(&c, &s, 5).unwrap().value(), 1);
        let c = CharCovector::new(vec![-1, -1]).unwrap();
        assert_eq!(spinc_label(&c, &s, 5).unwrap().value(), 4);
        for sig in [cm(&[1, 2]), cm(&[1, 1, 2, 3]), cm(&[1, 2, 4])] {
            let sign = CharCovector::new(vec![1; sig.len()]).unwrap();
            assert_eq!(
                spinc_label(&sign, &sig, sig.norm()).unwrap().value(),
                (sig.norm() - sig.l1()) / 2
            );
        }
        assert!(spinc_label(&CharCovector::new(vec![1]).unwrap(), &s, 5).is_err());
    }

    #[test]
    fn label_range() {
        assert!(SpincLabel::new(5, 5).is_err());
        assert!(SpincLabel::new(-1, 5).is_err());
        assert_eq!(label(3, 5).reduced(), 2);
        assert_eq!(label(2, 4).reduced(), 2);
    }

    #[test]
    fn d_unknot_examples() {
        assert_eq!(d_unknot(1, label(0, 1)).unwrap(), CorrectionTerm::new(0, 1));
        assert_eq!(d_unknot(5, label(0, 5)).unwrap(), CorrectionTerm::new(1, 1));
        assert_eq!(d_unknot(5, label(1, 5)).unwrap(), CorrectionTerm::new(1, 5));
        assert_eq!(d_unknot(5, label(1, 5)).unwrap().to_string(), "1/5");
        assert!(d_unknot(4, label(1, 5)).is_err());
    }

    #[test]
    fn d_unknot_matches_oracle_and_symmetry() {
        for p in 1..=50 {
            for i in 0..p {
                assert_eq!(
                    d_unknot(p, label(i, p)).unwrap().ratio(),
                    d_unknot_oracle(p, i)
                );
            }
        }
        for p in 1..=100 {
            for i in 0..p {
                let j = (p - i) % p;
                assert_eq!(
                    d_unknot(p, label(i, p)).unwrap(),
                    d_unknot(p, label(j, p)).unwrap()
                );
                // denominator divides 4p
                assert_eq!(4 * p % d_unknot(p, label(i, p)).unwrap().denom(), 0);
            }
        }
    }

    #[test]
    fn surgery_examples() {
        let unknot = AlexanderPoly::unknot();
        for p in 1..=9 {
            for i in 0..p {
                assert_eq!(
                    d_lspace_surgery(p, label(i, p), &unknot).unwrap(),
                    d_unknot(p, label(i, p)).unwrap()
                );
            }
        }
        let trefoil = torus_poly(2, 3).unwrap();
        assert_eq!(
            d_lspace_surgery(5, label(0, 5), &trefoil).unwrap(),
            CorrectionTerm::new(-1, 1)
        );
        assert_eq!(
            d_lspace_surgery(5, label(1, 5), &trefoil).unwrap(),
            CorrectionTerm::new(1, 5)
        );
        let bad = AlexanderPoly::from_half(vec![-2, 1]).unwrap();
        assert_eq!(
            d_lspace_surgery(5, label(0, 5), &bad),
            Err(Error::NotLSpaceForm)
        );
    }

    #[test]
    fn surgery_shift_is_even_and_vanishes_past_genus() {
        for r in 2..=7i64 {
            for s in r + 1..=7 {
                if num_integer::Integer::gcd(&r, &s) != 1 {
                    continue;
                }
                let poly = torus_poly(r, s).unwrap();
                let g = poly.degree() as i64;
                for p in 1..=30 {
                    for i in 0..p {
                        let l = label(i, p);
                        let diff = d_lspace_surgery(p, l, &poly).unwrap().ratio()
                            - d_unknot(p, l).unwrap().ratio();
                        assert!(diff.is_integer());
                        let diff = diff.to_integer();
                        assert!(diff <= 0 && diff % 2 == 0);
                        assert_eq!(diff == 0, l.reduced() >= g, "T({r},{s}) p={p} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_c_examples() {
        let trefoil = torus_poly(2, 3).unwrap();
        let r = lemma_c_check(&cm(&[1, 2]), &trefoil, 3).unwrap();
        assert!(!r.obstructed());
        assert_eq!(r.labels.len(), 5);
        assert!(r.all_labels_sharp());
        assert!(r.caveat.is_none());
        assert_eq!(r.covectors_checked, 16);

        let t25 = torus_poly(2, 5).unwrap();
        let r = lemma_c_check(&cm(&[1, 2]), &t25, 3).unwrap();
        assert!(r.obstructed());
        assert!(r
            .violations
            .iter()
            .any(|v| v.label == 1 && v.covector == vec![1, 1] && v.lhs == 0));

        let r = lemma_c_check(&cm(&[1, 1, 1, 1, 1]), &AlexanderPoly::unknot(), 1).unwrap();
        assert!(!r.obstructed());
        assert_eq!(r.covectors_checked, 32);
    }

    #[test]
    fn lemma_c_rejects_bad_input() {
        let bad = AlexanderPoly::from_half(vec![-2, 1]).unwrap();
        assert!(lemma_c_check(&cm(&[1, 2]), &bad, 3).is_err());
        assert!(lemma_c_check(&cm(&[1, 2]), &AlexanderPoly::unknot(), 0).is_err());
    }

    #[test]
    fn family_member_passes_lemma_c() {
        let trefoil = torus_poly(2, 3).unwrap();
        let k3 = cable_poly(2, 11, &trefoil).unwrap();
        let sigma = cm(&[1, 2, 4]);
        assert_eq!(sharp_genus(&sigma), 7);
        let r = lemma_c_check(&sigma, &k3, 3).unwrap();
        assert!(!r.obstructed());
        assert!(r.all_labels_sharp());
        // the same slope with the trefoil alone is not sharp everywhere
        let r = lemma_c_check(&sigma, &trefoil, 3).unwrap();
        assert!(!r.all_labels_sharp());
    }

    /// Values of `<c, sigma>` over `c in {+-1}^n`, by accumulating partial
    /// sums coordinate by coordinate.
    fn sign_pairings(s: &[i64]) -> BTreeSet<i64> {
        let mut acc = BTreeSet::from([0i64]);
        for &x in s {
            acc = acc.iter().flat_map(|&a| [a - x, a + x]).collect();
        }
        acc
    }

    #[test]
    fn sign_vector_labels_fill_an_interval() {
        for p in 1..=60 {
            for sigma in enumerate_changemakers(p, None, false).unwrap() {
                let labels: BTreeSet<i64> = sign_pairings(sigma.sigma())
                    .into_iter()
                    .map(|pair| (pair + p) / 2)
                    .collect();
                let lo = (p - sigma.l1()) / 2;
                let hi = (p + sigma.l1()) / 2;
                assert_eq!(
                    labels,
                    (lo..=hi).collect::<BTreeSet<_>>(),
                    "{:?}",
                    sigma.sigma()
                );
                let g = max_genus_from_sign_vectors(&sigma).unwrap();
                assert_eq!(g, sharp_genus(&sigma));
                assert_eq!(g, lo);
            }
        }
    }

    #[test]
    fn sign_vector_genus_examples() {
        assert_eq!(max_genus_from_sign_vectors(&cm(&[1, 2])).unwrap(), 1);
        assert_eq!(max_genus_from_sign_vectors(&cm(&[1, 2, 4])).unwrap(), 7);
        assert_eq!(max_genus_from_sign_vectors(&cm(&[1])).unwrap(), 0);
    }

    #[test]
    fn correction_term_serde() {
        let d = CorrectionTerm::new(-3, 20);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, "\"-3/20\"");
        assert_eq!(serde_json::from_str::<CorrectionTerm>(&s).unwrap(), d);
        assert_eq!(
            serde_json::from_str::<CorrectionTerm>("\"2\"").unwrap(),
            CorrectionTerm::new(2, 1)
        );
    }
}

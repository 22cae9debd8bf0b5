//! Whether a linear lattice `Lambda(p, q)` is the orthogonal complement of a
//! changemaker, with the genus this forces, the Berge bound, and batch scans.

use std::io::Write;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::changemaker::{enumerate_changemakers, min_l1, sharp_genus, Changemaker};
use crate::error::{overflow, Error, Result};
use crate::lattice::{complement_chain, gram, hj_expand, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationWitness {
    pub p: i64,
    pub q: i64,
    /// Weights of `Lambda(p, q)`.
    pub weights: Vec<i64>,
    pub sigma: Changemaker,
    /// `v_1, ..., v_n` in the complement of `sigma`.
    pub chain: Vec<LatticeVector>,
    /// Whether the chain realizes the weights in reverse order.
    pub reversed: bool,
    pub genus: i64,
}

fn check_pair(p: i64, q: i64) -> Result<()> {
    if p < 2 || q < 1 || q >= p || p.gcd(&q) != 1 {
        return Err(Error::InvalidFraction { p, q });
    }
    Ok(())
}

/// The lexicographically least changemaker of norm `p` and length `n + 1`
/// whose complement is `Lambda(p, q)`, with its lexicographically least
/// chain. `None` means `L(p, q)`, as the boundary of the plumbing on
/// `Lambda(p, q)`, is not integer surgery on a knot in `S^3`.
pub fn realize(p: i64, q: i64) -> Result<Option<RealizationWitness>> {
    check_pair(p, q)?;
    let lattice = hj_expand(p, q)?;
    let n = lattice.rank();
    // A zero coordinate puts a vector of norm 1 in the complement, which a
    // linear lattice never has, so only zero-free changemakers can succeed.
    for sigma in enumerate_changemakers(p, Some(n + 1), false)? {
        let v = LatticeVector::new(sigma.sigma().to_vec());
        if let Some(chain) = complement_chain(&v, &lattice)? {
            let reversed = gram(&chain)? != lattice.gram();
            return Ok(Some(RealizationWitness {
                p,
                q,
                weights: lattice.weights().to_vec(),
                genus: sharp_genus(&sigma),
                sigma,
                chain,
                reversed,
            }));
        }
    }
    Ok(None)
}

/// `q -> p - q`, converting between `L(p, q)` and `-L(p, q)`.
pub fn opposite_orientation(p: i64, q: i64) -> Result<i64> {
    check_pair(p, q)?;
    Ok(p - q)
}

/// `2g - 1 <= p - 2 sqrt((4p + 1) / 5)`, as `5 (p - 2g + 1)^2 >= 4 (4p + 1)`
/// with `p - 2g + 1 >= 0`.
pub fn berge_bound(p: i64, g: i64) -> bool {
    let gap = p as i128 - (2 * g as i128 - 1);
    gap >= 0 && 5 * gap * gap >= 4 * (4 * p as i128 + 1)
}

/// Largest `2 sharp_genus(sigma) - 1` over changemakers of norm `p`, with the
/// lexicographically least maximizer.
pub fn goda_teragaito_max(p: i64) -> Result<(i64, Changemaker)> {
    if p < 2 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: ">= 2".into(),
        });
    }
    let (_, sigma) = min_l1(p)?;
    Ok((2 * sharp_genus(&sigma) - 1, sigma))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub p: i64,
    pub q: i64,
    pub weights: Vec<i64>,
    pub realized: bool,
    pub sigma: Option<Vec<i64>>,
    pub genus: Option<i64>,
    /// `berge_bound(p, genus)`; vacuously true when not realized.
    pub berge_ok: bool,
}

impl ScanRecord {
    fn new(p: i64, q: i64, witness: Option<RealizationWitness>) -> Result<Self> {
        let weights = hj_expand(p, q)?.weights().to_vec();
        Ok(match witness {
            Some(w) => ScanRecord {
                p,
                q,
                weights,
                realized: true,
                sigma: Some(w.sigma.sigma().to_vec()),
                genus: Some(w.genus),
                berge_ok: berge_bound(p, w.genus),
            },
            None => ScanRecord {
                p,
                q,
                weights,
                realized: false,
                sigma: None,
                genus: None,
                berge_ok: true,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub p_max: i64,
    pub pairs: usize,
    pub realized: usize,
    /// `(p, q, genus)` for realized pairs failing the Berge bound.
    pub berge_violations: Vec<(i64, i64, i64)>,
}

/// Realizes every coprime `(p, q)` with `2 <= p <= p_max`, `1 <= q < p`, in
/// order of `p` then `q`. The result does not depend on `workers`.
pub fn scan(p_max: i64, workers: usize) -> Result<Vec<ScanRecord>> {
    if p_max < 2 {
        return Err(Error::OutOfRange {
            what: "p_max",
            value: p_max,
            range: ">= 2".into(),
        });
    }
    let pairs: Vec<(i64, i64)> = (2..=p_max)
        .flat_map(|p| (1..p).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    // collect keeps input order
    pool.install(|| {
        pairs
            .par_iter()
            .with_min_len(1)
            .map(|&(p, q)| ScanRecord::new(p, q, realize(p, q)?))
            .collect()
    })
}

pub fn summarize(p_max: i64, records: &[ScanRecord]) -> ScanSummary {
    ScanSummary {
        p_max,
        pairs: records.len(),
        realized: records.iter().filter(|r| r.realized).count(),
        berge_violations: records
            .iter()
            .filter(|r| !r.berge_ok)
            .map(|r| (r.p, r.q, r.genus.unwrap_or(0)))
            .collect(),
    }
}

fn join(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

pub const CSV_HEADER: [&str; 7] = [
    "p", "q", "weights", "realized", "sigma", "genus", "berge_ok",
];

/// CSV with lists written as `;`-separated integers and empty cells for
/// missing values.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            join(&r.weights),
            r.realized.to_string(),
            r.sigma.as_deref().map(join).unwrap_or_default(),
            r.genus.map(|g| g.to_string()).unwrap_or_default(),
            r.berge_ok.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn write_json_lines<W: Write>(records: &[ScanRecord], mut out: W) -> Result<()> {
    for r in records {
        // via Value, so keys come out sorted
        let line = serde_json::to_value(r)
            .map(|v| v.to_string())
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    Ok(())
}

/// Reducible surgeries: `pq`-surgery on the torus knot `T(p, q)`, or on the
/// `(p, q)` cable of `T(r, s)` with `p = qrs +- 1`, gives
/// `L(p, q) # L(q, p)` up to orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CablingInput {
    Torus { p: i64, q: i64 },
    Cable { q: i64, r: i64, s: i64, sign: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CablingSum {
    pub p: i64,
    pub q: i64,
    pub slope: i64,
    /// Orders of the two lens space summands.
    pub orders: (i64, i64),
}

pub fn cabling_sum_data(input: CablingInput) -> Result<CablingSum> {
    let p = match input {
        CablingInput::Torus { p, q } => {
            if p < 2 || q < 2 || p.gcd(&q) != 1 {
                return Err(Error::InvalidArgument(format!(
                    "torus knot needs coprime p, q >= 2, got ({p}, {q})"
                )));
            }
            p
        }
        CablingInput::Cable { q, r, s, sign } => {
            if q < 2 || r < 2 || s < 2 || r.gcd(&s) != 1 || sign.abs() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "cable needs q >= 2, coprime r, s >= 2 and sign +-1, got q={q} r={r} s={s} sign={sign}"
                )));
            }
            overflow(
                q.checked_mul(r)
                    .and_then(|x| x.checked_mul(s))
                    .and_then(|x| x.checked_add(sign)),
            )?
        }
    };
    let q = match input {
        CablingInput::Torus { q, .. } | CablingInput::Cable { q, .. } => q,
    };
    Ok(CablingSum {
        p,
        q,
        slope: overflow(p.checked_mul(q))?,
        orders: (p, q),
    })
}

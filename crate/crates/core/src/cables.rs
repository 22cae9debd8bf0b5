//! The iterated `(2, a_n)` cables `K_n` whose `p_n`-surgeries bound sharp
//! manifolds with `3 p_n + 1 = 4^n`, and lattice checks for each stage.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::alexander::{cable_genus, cable_poly, AlexanderPoly};
use crate::changemaker::{sharp_genus, Changemaker};
use crate::error::{overflow, Error, Result};
use crate::lattice::{gram, inner_product, GramMatrix, LatticeVector};

/// Stage `n` of the family. `K_n` is the iterated cable with parameters
/// `(2, a_1), ..., (2, a_n)` applied to the unknot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableStage {
    pub n: u32,
    /// `a_1, ..., a_n`
    pub cable_params: Vec<i64>,
    pub p: i64,
    pub sigma: Changemaker,
    pub genus: i64,
    /// Stage 1 is the unknot at slope 1.
    pub degenerate: bool,
}

impl CableStage {
    pub fn a_n(&self) -> i64 {
        *self.cable_params.last().expect("n >= 1")
    }

    /// Alexander polynomial of `K_n` by iterated cabling. The degree is
    /// `g_n`, which grows like `4^n / 6`.
    pub fn alexander_poly(&self) -> Result<AlexanderPoly> {
        let mut poly = AlexanderPoly::unknot();
        for &a in &self.cable_params {
            poly = cable_poly(2, a, &poly)?;
        }
        Ok(poly)
    }
}

const MAX_STAGE: u32 = 31;

pub fn family(n: u32) -> Result<CableStage> {
    if !(1..=MAX_STAGE).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: format!("1..={MAX_STAGE}"),
        });
    }
    let mut p = 0i64;
    let mut g = 0i64;
    let mut params = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let a = overflow(p.checked_mul(2).and_then(|x| x.checked_add(1)))?;
        p = overflow(a.checked_mul(2).and_then(|x| x.checked_sub(1)))?;
        g = cable_genus(2, a, g)?;
        params.push(a);
    }
    let sigma = Changemaker::new((0..n).map(|k| 1i64 << k).collect())?;
    Ok(CableStage {
        n,
        cable_params: params,
        p,
        sigma,
        genus: g,
        degenerate: n == 1,
    })
}

/// The `(n-1) x (n-1)` linking form: `-5` on the diagonal, `2` beside it.
pub fn linking_matrix(n: u32) -> Result<GramMatrix> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: ">= 2".into(),
        });
    }
    Ok(GramMatrix::tridiagonal(&vec![-5; n as usize - 1], 2))
}

/// `2 e_i - e_{i+1}` for `1 <= i <= n-1`, in `-Z^n`.
pub fn stage_vectors(n: u32) -> Vec<LatticeVector> {
    let n = n as usize;
    (0..n.saturating_sub(1))
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 2;
            v[i + 1] = -1;
            LatticeVector::new(v)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCheck {
    /// Gram matrix of the stage vectors is the linking matrix.
    pub gram_matches: bool,
    /// Every stage vector is orthogonal to `sigma_n`.
    pub orthogonal: bool,
    /// `2 g_n - 1 = p_n - sqrt(3 p_n + 1)` with `3 p_n + 1` a square.
    pub genus_equality: bool,
    /// `sharp_genus(sigma_n) = g_n`.
    pub sharp_genus_matches: bool,
}

impl StageCheck {
    pub fn passed(&self) -> bool {
        self.gram_matches && self.orthogonal && self.genus_equality && self.sharp_genus_matches
    }
}

pub fn verify_stage(stage: &CableStage) -> Result<StageCheck> {
    let vectors = stage_vectors(stage.n);
    let gram_matches = if stage.n >= 2 {
        gram(&vectors)? == linking_matrix(stage.n)?
    } else {
        vectors.is_empty()
    };
    let sigma = LatticeVector::new(stage.sigma.sigma().to_vec());
    let mut orthogonal = true;
    for v in &vectors {
        orthogonal &= inner_product(v, &sigma)? == 0;
    }
    let disc = overflow(stage.p.checked_mul(3).and_then(|x| x.checked_add(1)))?;
    let root = disc.sqrt();
    let genus_equality = root * root == disc && 2 * stage.genus - 1 == stage.p - root;
    Ok(StageCheck {
        gram_matches,
        orthogonal,
        genus_equality,
        sharp_genus_matches: sharp_genus(&stage.sigma) == stage.genus,
    })
}

use std::collections::BTreeMap;

use num_integer::{Integer, Roots};

use super::enumerate::vectors_of_norm;
use super::linear::LinearLattice;
use super::vector::{gram, inner_product, LatticeVector};
use crate::error::{Error, Result};

/// Searches the span of `vectors` for a basis `v_1, ..., v_n` with
/// `<v_i,v_i> = -a_i`, `<v_i,v_{i+1}> = 1` and all other pairings zero.
///
/// Candidates come from [`vectors_of_norm`]; the chain is found by
/// backtracking in lexicographic order, so the returned witness is the
/// lexicographically least one. The reversed weight sequence is tried when
/// the forward one has no witness.
pub fn is_isometric_to_linear(
    vectors: &[LatticeVector],
    lattice: &LinearLattice,
) -> Result<Option<Vec<LatticeVector>>> {
    if vectors.len() != lattice.rank() {
        return Err(Error::RankMismatch {
            rank: vectors.len(),
            expected: lattice.rank(),
        });
    }
    let det = gram(vectors)?.determinant()?;
    if det == 0 {
        return Err(Error::DependentBasis);
    }
    let (p, _) = lattice.evaluate()?;
    if det.abs() != p as i128 {
        return Ok(None);
    }
    // Linear lattices have no vectors of norm 1, and isometric lattices have
    // equally many of norm 2.
    if !vectors_of_norm(vectors, 1)?.is_empty()
        || vectors_of_norm(vectors, 2)?.len() as u64 != lattice.root_count()
    {
        return Ok(None);
    }
    let mut candidates: BTreeMap<i64, Vec<LatticeVector>> = BTreeMap::new();
    for &a in lattice.weights() {
        if let std::collections::btree_map::Entry::Vacant(e) = candidates.entry(a) {
            e.insert(vectors_of_norm(vectors, a)?);
        }
    }
    for weights in orientations(lattice) {
        let mut chain = Vec::with_capacity(weights.len());
        if extend_general(&candidates, &weights, &mut chain)? {
            return Ok(Some(chain));
        }
    }
    Ok(None)
}

fn orientations(lattice: &LinearLattice) -> Vec<Vec<i64>> {
    let fwd = lattice.weights().to_vec();
    let mut rev = fwd.clone();
    rev.reverse();
    if rev == fwd {
        vec![fwd]
    } else {
        vec![fwd, rev]
    }
}

fn extend_general(
    candidates: &BTreeMap<i64, Vec<LatticeVector>>,
    weights: &[i64],
    chain: &mut Vec<LatticeVector>,
) -> Result<bool> {
    let i = chain.len();
    if i == weights.len() {
        return Ok(true);
    }
    for v in &candidates[&weights[i]] {
        // Negating a whole chain gives another chain; keep the lex-smaller one.
        if i == 0 && v.coords().iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            continue;
        }
        let mut ok = true;
        for (j, w) in chain.iter().enumerate() {
            let want = if j + 1 == i { 1 } else { 0 };
            if inner_product(v, w)? != want {
                ok = false;
                break;
            }
        }
        if ok {
            chain.push(v.clone());
            if extend_general(candidates, weights, chain)? {
                return Ok(true);
            }
            chain.pop();
        }
    }
    Ok(false)
}

/// Chain search inside `sigma^perp`, working directly in ambient coordinates.
///
/// Returns the same witness as
/// `is_isometric_to_linear(&complement_basis(sigma)?, lattice)` but scales to
/// long chains: candidate vectors are generated coordinate by coordinate
/// under the linear constraints, coordinates that are interchangeable (equal
/// `sigma` value, untouched by earlier chain vectors) are filled in
/// non-decreasing order, and lattice invariants (determinant, vectors of
/// norm 1 and 2) are compared before searching.
pub fn complement_chain(
    sigma: &LatticeVector,
    lattice: &LinearLattice,
) -> Result<Option<Vec<LatticeVector>>> {
    if sigma.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = lattice.rank();
    if sigma.len() != n + 1 {
        return Err(Error::RankMismatch {
            rank: sigma.len().saturating_sub(1),
            expected: n,
        });
    }
    let s = sigma.coords();
    let g = s.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    let norm = sigma.norm()?;
    let (p, _) = lattice.evaluate()?;
    if norm / (g * g) != p {
        return Ok(None);
    }
    // Linear lattices have no vectors of norm 1.
    if s.contains(&0) {
        return Ok(None);
    }
    if complement_root_count(s) != lattice.root_count() {
        return Ok(None);
    }
    // One frame per coordinate per chain vector.
    let depth = n * (n + 1);
    let search = || {
        for weights in orientations(lattice) {
            let mut search = ComplementSearch::new(s, &weights);
            if search.step(0) {
                return Some(search.chain.into_iter().map(LatticeVector::new).collect());
            }
        }
        None
    };
    if depth <= INLINE_DEPTH {
        return Ok(search());
    }
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(depth * FRAME_BYTES + (1 << 20))
            .spawn_scoped(scope, search)
            .map_err(|e| Error::InvalidArgument(format!("search thread: {e}")))?
            .join()
            .map_err(|_| Error::InvalidArgument("search thread panicked".into()))
    })
}

const INLINE_DEPTH: usize = 2_000;
const FRAME_BYTES: usize = 1_024;

/// Norm-2 vectors of `sigma^perp`: `e_a -+ e_b` with `|sigma_a| = |sigma_b|`.
fn complement_root_count(s: &[i64]) -> u64 {
    let mut classes: BTreeMap<u64, u64> = BTreeMap::new();
    for x in s {
        *classes.entry(x.unsigned_abs()).or_insert(0) += 1;
    }
    classes
        .iter()
        .map(|(&x, &k)| k * (k - 1) / 2 * if x == 0 { 4 } else { 2 })
        .sum()
}

struct ComplementSearch<'a> {
    sigma: &'a [i64],
    weights: &'a [i64],
    /// Suffix sums of sigma_c^2.
    sigma_tail: Vec<i128>,
    chain: Vec<Vec<i64>>,
    /// Suffix sums of squares, per chain vector.
    chain_tail: Vec<Vec<i128>>,
    /// Per coordinate: (chain index, entry) for non-zero entries.
    columns: Vec<Vec<(usize, i64)>>,
}

/// Per-step bookkeeping for interchangeable untouched coordinates.
struct FreshInfo {
    prev: Vec<Option<usize>>,
    after: Vec<i64>,
}

impl<'a> ComplementSearch<'a> {
    fn new(sigma: &'a [i64], weights: &'a [i64]) -> Self {
        let dim = sigma.len();
        let mut sigma_tail = vec![0i128; dim + 1];
        for c in (0..dim).rev() {
            sigma_tail[c] = sigma_tail[c + 1] + (sigma[c] as i128).pow(2);
        }
        ComplementSearch {
            sigma,
            weights,
            sigma_tail,
            chain: Vec::new(),
            chain_tail: Vec::new(),
            columns: vec![Vec::new(); dim],
        }
    }

    fn fresh_info(&self) -> FreshInfo {
        let dim = self.sigma.len();
        let mut prev = vec![None; dim];
        let mut after = vec![0i64; dim];
        let mut last: BTreeMap<i64, usize> = BTreeMap::new();
        for (c, slot) in prev.iter_mut().enumerate() {
            if self.columns[c].is_empty() {
                *slot = last.insert(self.sigma[c], c);
            }
        }
        let mut count: BTreeMap<i64, i64> = BTreeMap::new();
        for c in (0..dim).rev() {
            if self.columns[c].is_empty() {
                let k = count.entry(self.sigma[c]).or_insert(0);
                after[c] = *k;
                *k += 1;
            }
        }
        FreshInfo { prev, after }
    }

    fn push(&mut self, v: Vec<i64>) {
        let j = self.chain.len();
        let dim = v.len();
        let mut tail = vec![0i128; dim + 1];
        for c in (0..dim).rev() {
            tail[c] = tail[c + 1] + (v[c] as i128).pow(2);
            if v[c] != 0 {
                self.columns[c].push((j, v[c]));
            }
        }
        self.chain.push(v);
        self.chain_tail.push(tail);
    }

    fn pop(&mut self) {
        let v = self.chain.pop().expect("non-empty chain");
        self.chain_tail.pop();
        for (c, &x) in v.iter().enumerate() {
            if x != 0 {
                self.columns[c].pop();
            }
        }
    }

    fn step(&mut self, i: usize) -> bool {
        if i == self.weights.len() {
            return true;
        }
        let dim = self.sigma.len();
        let mut x = vec![0i64; dim];
        // residual[j] = target - sum_c x_c v_j[c]; the pairing with v_{i-1}
        // must be +1, i.e. the dot product -1.
        let mut residual = vec![0i64; i];
        if i > 0 {
            residual[i - 1] = -1;
        }
        let fresh = self.fresh_info();
        let mut touched = Vec::new();
        let mut state = Partial {
            x: &mut x,
            residual: &mut residual,
            touched: &mut touched,
            sigma_residual: 0,
            leading: true,
        };
        self.fill(i, 0, self.weights[i], &mut state, &fresh)
    }

    fn constraints_ok(&self, i: usize, c: usize, r: i64, st: &Partial) -> bool {
        let r = r as i128;
        if (st.sigma_residual as i128).pow(2) > r * self.sigma_tail[c] {
            return false;
        }
        let check = |j: usize| (st.residual[j] as i128).pow(2) <= r * self.chain_tail[j][c];
        if i > 0 && !check(i - 1) {
            return false;
        }
        st.touched.iter().all(|&j| check(j))
    }

    fn fill(&mut self, i: usize, c: usize, r: i64, st: &mut Partial, fresh: &FreshInfo) -> bool {
        if r == 0 {
            if st.sigma_residual != 0
                || (i > 0 && st.residual[i - 1] != 0)
                || st.touched.iter().any(|&j| st.residual[j] != 0)
            {
                return false;
            }
            self.push(st.x.to_vec());
            if self.step(i + 1) {
                return true;
            }
            self.pop();
            return false;
        }
        if c == self.sigma.len() || !self.constraints_ok(i, c, r, st) {
            return false;
        }
        let bound = r.sqrt();
        let is_fresh = self.columns[c].is_empty();
        let mut lo = -bound;
        let mut hi = bound;
        if is_fresh {
            if let Some(pc) = fresh.prev[c] {
                lo = lo.max(st.x[pc]);
            }
        }
        if i == 0 && st.leading {
            hi = hi.min(0);
        }
        for val in lo..=hi {
            if val == 0 {
                if self.fill(i, c + 1, r, st, fresh) {
                    return true;
                }
                continue;
            }
            let sq = val * val;
            if is_fresh && val > 0 && r - sq < sq * fresh.after[c] {
                continue;
            }
            st.x[c] = val;
            st.sigma_residual -= val * self.sigma[c];
            let mark = st.touched.len();
            for &(j, w) in &self.columns[c] {
                st.residual[j] -= val * w;
                st.touched.push(j);
            }
            let leading = std::mem::replace(&mut st.leading, false);
            if self.fill(i, c + 1, r - sq, st, fresh) {
                return true;
            }
            st.leading = leading;
            st.touched.truncate(mark);
            for &(j, w) in &self.columns[c] {
                st.residual[j] += val * w;
            }
            st.sigma_residual += val * self.sigma[c];
            st.x[c] = 0;
        }
        false
    }
}

struct Partial<'s> {
    x: &'s mut [i64],
    residual: &'s mut [i64],
    touched: &'s mut Vec<usize>,
    sigma_residual: i64,
    leading: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{complement_basis, hj_expand};

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn ll(w: &[i64]) -> LinearLattice {
        LinearLattice::new(w.to_vec()).unwrap()
    }

    #[test]
    fn single_generator() {
        let w = is_isometric_to_linear(&[v(&[2, -1])], &ll(&[5]))
            .unwrap()
            .unwrap();
        assert_eq!(w, vec![v(&[-2, 1])]);
    }

    #[test]
    fn five_two_lattice_is_not_linear() {
        let basis = [v(&[2, -1, 0]), v(&[0, 2, -1])];
        // every linear lattice of determinant 21
        for q in [1, 2, 4, 5, 8, 10, 11, 13, 16, 17, 19, 20] {
            let l = hj_expand(21, q).unwrap();
            if l.rank() == 2 {
                assert_eq!(is_isometric_to_linear(&basis, &l).unwrap(), None, "q={q}");
            }
        }
        assert_eq!(is_isometric_to_linear(&basis, &ll(&[5, 5])).unwrap(), None);
    }

    #[test]
    fn all_ones_complement_is_a4() {
        let basis = complement_basis(&v(&[1, 1, 1, 1, 1])).unwrap();
        let w = is_isometric_to_linear(&basis, &ll(&[2, 2, 2, 2]))
            .unwrap()
            .unwrap();
        let g = gram(&w).unwrap();
        assert_eq!(g, ll(&[2, 2, 2, 2]).gram());
    }

    #[test]
    fn rank_mismatch() {
        assert!(matches!(
            is_isometric_to_linear(&[v(&[2, -1])], &ll(&[2, 2])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn fast_route_matches_general_route() {
        let sigmas: &[&[i64]] = &[
            &[1, 2],
            &[1, 1, 1, 1, 1],
            &[1, 1, 1, 2],
            &[1, 1, 2, 3],
            &[1, 2, 2, 3],
            &[1, 1, 3, 3],
            &[1, 1, 1, 2, 3],
            &[1, 1, 2, 2, 4],
            &[0, 1, 2],
            &[0, 0, 1, 1, 1],
        ];
        for s in sigmas {
            let sigma = v(s);
            let p = sigma.norm().unwrap();
            let basis = complement_basis(&sigma).unwrap();
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let l = hj_expand(p, q).unwrap();
                if l.rank() + 1 != s.len() {
                    continue;
                }
                let slow = is_isometric_to_linear(&basis, &l).unwrap();
                let fast = complement_chain(&sigma, &l).unwrap();
                assert_eq!(slow, fast, "sigma={s:?} q={q}");
            }
        }
    }
}

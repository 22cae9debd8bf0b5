//! Changemaker vectors: recognition, greedy change-making, enumeration by
//! norm, and the genus bounds they imply.
//!
//! A non-decreasing tuple `0 <= s_0 <= ... <= s_n` is a changemaker when
//! `s_i <= s_0 + ... + s_{i-1} + 1` for every `i`, including `i = 0` (so
//! `s_0 <= 1`). That is exactly the condition for every amount
//! `0..=sum(s)` to be a subset sum.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{overflow, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Changemaker {
    sigma: Vec<i64>,
    norm: i64,
    l1: i64,
}

impl Changemaker {
    pub fn new(sigma: Vec<i64>) -> Result<Self> {
        if !is_changemaker(&sigma)? {
            return Err(Error::NotChangemaker(sigma));
        }
        let norm = sigma
            .iter()
            .try_fold(0i64, |acc, &s| acc.checked_add(s.checked_mul(s)?))
            .ok_or(Error::Overflow)?;
        let l1 = sigma
            .iter()
            .try_fold(0i64, |acc, &s| acc.checked_add(s))
            .ok_or(Error::Overflow)?;
        Ok(Changemaker { sigma, norm, l1 })
    }

    pub fn sigma(&self) -> &[i64] {
        &self.sigma
    }

    /// `p = sum s_i^2`.
    pub fn norm(&self) -> i64 {
        self.norm
    }

    pub fn l1(&self) -> i64 {
        self.l1
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn has_zeros(&self) -> bool {
        self.sigma.first() == Some(&0)
    }
}

impl TryFrom<Vec<i64>> for Changemaker {
    type Error = Error;

    fn try_from(sigma: Vec<i64>) -> Result<Self> {
        Changemaker::new(sigma)
    }
}

impl From<Changemaker> for Vec<i64> {
    fn from(c: Changemaker) -> Self {
        c.sigma
    }
}

/// A set of coordinate indices, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeSubset {
    pub indices: Vec<usize>,
    pub amount: i64,
}

fn check_sorted(sigma: &[i64]) -> Result<()> {
    if sigma.first().is_some_and(|&s| s < 0) || sigma.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotSortedNonNegative(sigma.to_vec()));
    }
    Ok(())
}

pub fn is_changemaker(sigma: &[i64]) -> Result<bool> {
    check_sorted(sigma)?;
    let mut prefix: i64 = 0;
    for &s in sigma {
        if s > overflow(prefix.checked_add(1))? {
            return Ok(false);
        }
        prefix = overflow(prefix.checked_add(s))?;
    }
    Ok(true)
}

/// True iff every `0 <= k <= sum(sigma)` is a subset sum. Bitset DP; does not
/// rely on the ordering of `sigma`.
pub fn subset_sums_complete(sigma: &[i64]) -> bool {
    if sigma.iter().any(|&s| s < 0) {
        return false;
    }
    let total: i64 = sigma.iter().sum();
    let bits = total as usize + 1;
    let mut reach = vec![0u64; bits.div_ceil(64)];
    reach[0] = 1;
    for &s in sigma {
        let s = s as usize;
        if s == 0 {
            continue;
        }
        // reach |= reach << s, high words first so sources are unmodified
        let (words, shift) = (s / 64, s % 64);
        for w in (0..reach.len()).rev() {
            let mut add = 0u64;
            if w >= words {
                add = reach[w - words] << shift;
                if shift > 0 && w > words {
                    add |= reach[w - words - 1] >> (64 - shift);
                }
            }
            reach[w] |= add;
        }
    }
    (0..bits).all(|k| reach[k / 64] >> (k % 64) & 1 == 1)
}

/// Greedy change: repeatedly take the largest index `j` whose prefix sum
/// `s_0 + ... + s_{j-1}` is below the amount still owed.
pub fn make_change(sigma: &Changemaker, k: i64) -> Result<ChangeSubset> {
    if k < 0 || k > sigma.l1() {
        return Err(Error::OutOfRange {
            what: "amount",
            value: k,
            range: format!("0..={}", sigma.l1()),
        });
    }
    let s = sigma.sigma();
    let mut prefix = Vec::with_capacity(s.len() + 1);
    prefix.push(0i64);
    for &x in s {
        prefix.push(prefix.last().unwrap() + x);
    }
    let mut owed = k;
    let mut bound = s.len();
    let mut indices = Vec::new();
    while owed > 0 {
        let j = (0..bound)
            .rev()
            .find(|&j| prefix[j] < owed)
            .expect("prefix[0] = 0 is below any positive amount");
        indices.push(j);
        owed -= s[j];
        bound = j;
    }
    indices.reverse();
    Ok(ChangeSubset { indices, amount: k })
}

/// All changemakers of norm `p`, in lexicographic order.
///
/// `length` fixes the tuple length. Zero coordinates are only produced with
/// `allow_zeros`, which needs a fixed length (zeros would otherwise pad
/// without bound).
pub fn enumerate_changemakers(
    p: i64,
    length: Option<usize>,
    allow_zeros: bool,
) -> Result<Vec<Changemaker>> {
    if p < 1 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: ">= 1".into(),
        });
    }
    if allow_zeros && length.is_none() {
        return Err(Error::InvalidArgument(
            "allow_zeros requires a fixed length".into(),
        ));
    }
    let mut out = Vec::new();
    let start = if allow_zeros { 0 } else { 1 };
    Enumerator {
        length,
        max_l1: i64::MAX,
        out: &mut out,
    }
    .extend(p, start, 0, &mut Vec::new());
    Ok(out)
}

/// Changemakers of norm `p` (no zeros) with `|sigma|_1 <= max_l1`, in
/// lexicographic order.
pub fn changemakers_with_l1_at_most(p: i64, max_l1: i64) -> Result<Vec<Changemaker>> {
    check_p(p)?;
    let mut out = Vec::new();
    Enumerator {
        length: None,
        max_l1,
        out: &mut out,
    }
    .extend(p, 1, 0, &mut Vec::new());
    Ok(out)
}

struct Enumerator<'a> {
    length: Option<usize>,
    max_l1: i64,
    out: &'a mut Vec<Changemaker>,
}

impl Enumerator<'_> {
    fn extend(&mut self, remaining: i64, min: i64, sum: i64, prefix: &mut Vec<i64>) {
        let slots = self.length.map(|l| l - prefix.len());
        if remaining == 0 && slots.is_none_or(|k| k == 0) {
            if !prefix.is_empty() {
                self.out.push(Changemaker {
                    sigma: prefix.clone(),
                    norm: prefix.iter().map(|s| s * s).sum(),
                    l1: sum,
                });
            }
            return;
        }
        if slots == Some(0) {
            return;
        }
        // sum of squares <= square of sum for the entries still to come
        let budget = self.max_l1.saturating_sub(sum);
        if (budget as i128).pow(2) < remaining as i128 {
            return;
        }
        let cap = remaining.sqrt();
        let max = (sum + 1).min(cap).min(budget);
        for v in min..=max {
            let sq = v * v;
            if let Some(k) = slots {
                let k = k as i64;
                // the later entries are each at least v and at most cap
                if sq * k > remaining {
                    break;
                }
                if sq + (k - 1) * cap * cap < remaining {
                    continue;
                }
            } else if v == 0 {
                continue;
            }
            prefix.push(v);
            self.extend(remaining - sq, v, sum + v, prefix);
            prefix.pop();
        }
    }
}

/// Exact counts of changemakers without zeros by norm and `l1` norm:
/// `counts[p][l]` for `p <= p_max`, `l <= l1_max`.
///
/// Dynamic programme over (norm, last entry, running sum). Every prefix of a
/// changemaker is a changemaker with smaller sum, so truncating at `l1_max`
/// loses nothing below it. This covers ranges where listing is hopeless
/// (there are already tens of thousands of changemakers of norm 200).
pub fn l1_census(p_max: usize, l1_max: usize) -> Result<Vec<Vec<u64>>> {
    let vmax = (p_max as i64).sqrt() as usize;
    let width = l1_max + 1;
    let idx = |norm: usize, last: usize, sum: usize| (norm * (vmax + 1) + last) * width + sum;
    let mut counts = vec![vec![0u64; width]; p_max + 1];
    if vmax == 0 {
        return Ok(counts);
    }
    let mut states = vec![0u64; (p_max + 1) * (vmax + 1) * width];
    // the empty prefix, with last = 1 as the lower bound for the next entry
    states[idx(0, 1, 0)] = 1;
    for norm in 0..=p_max {
        for last in 1..=vmax {
            for sum in 0..width {
                let c = states[idx(norm, last, sum)];
                if c == 0 {
                    continue;
                }
                if norm > 0 {
                    counts[norm][sum] = overflow(counts[norm][sum].checked_add(c))?;
                }
                for v in last..=vmax.min(sum + 1) {
                    let (n2, s2) = (norm + v * v, sum + v);
                    if n2 > p_max || s2 > l1_max {
                        break;
                    }
                    let slot = &mut states[idx(n2, v, s2)];
                    *slot = overflow(slot.checked_add(c))?;
                }
            }
        }
    }
    Ok(counts)
}

/// Smallest `|sigma|_1` over changemakers of norm `p` (no zeros), with the
/// lexicographically least changemaker attaining it.
pub fn min_l1(p: i64) -> Result<(i64, Changemaker)> {
    let mut l = l1_floor(p)?;
    loop {
        if let Some(first) = changemakers_with_l1_at_most(p, l)?.into_iter().next() {
            return Ok((l, first));
        }
        l += 1;
    }
}

/// `g = (p - |sigma|_1) / 2`, the genus forced by a sharp filling.
pub fn sharp_genus(sigma: &Changemaker) -> i64 {
    (sigma.norm() - sigma.l1()) / 2
}

pub(crate) fn ceil_sqrt(n: i64) -> i64 {
    let s = n.sqrt();
    if s * s < n {
        s + 1
    } else {
        s
    }
}

/// Largest integer value of `2g - 1` with `2g - 1 <= p - sqrt(p) - 1`.
pub fn bound_nonsharp(p: i64) -> Result<i64> {
    check_p(p)?;
    Ok(p - ceil_sqrt(p) - 1)
}

/// Smallest `|sigma|_1` allowed for a changemaker of norm `p`:
/// `(|sigma|_1 + 1)^2 >= 3p + 1`.
pub fn l1_floor(p: i64) -> Result<i64> {
    check_p(p)?;
    let t = overflow(p.checked_mul(3).and_then(|x| x.checked_add(1)))?;
    Ok(ceil_sqrt(t) - 1)
}

/// Largest odd `x` with `x <= p - sqrt(3p + 1)`, i.e. `(p - x)^2 >= 3p + 1`.
pub fn bound_sharp(p: i64) -> Result<i64> {
    let x = p - l1_floor(p)? - 1;
    Ok(if x.rem_euclid(2) == 0 { x - 1 } else { x })
}

fn check_p(p: i64) -> Result<()> {
    if p < 1 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            range: ">= 1".into(),
        });
    }
    Ok(())
}

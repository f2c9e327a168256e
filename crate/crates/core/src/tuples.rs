//! Index sets of the coefficient sums.
//!
//! A term is labelled by a pair `(n, m)` of r-tuples with
//! `1 <= n_1 <= ... <= n_r`, `|n| <= d` and `0 <= m_j <= n_j / 2`.
//! Enumeration is lexicographic in `(n, m)` and streams, so large scans
//! never hold the full index set in memory.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::factorial;
use crate::error::{Error, Result};

/// One admissible `(n, m)` pair for degree bound `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPair {
    n: Vec<u32>,
    m: Vec<u32>,
    d: u32,
}

impl IndexPair {
    pub fn new(n: Vec<u32>, m: Vec<u32>, d: u32) -> Result<Self> {
        if n.is_empty() || n.len() != m.len() {
            return Err(Error::Domain(format!(
                "n and m must be nonempty tuples of equal length, got {} and {}",
                n.len(),
                m.len()
            )));
        }
        if n[0] == 0 || n.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain(format!(
                "n must be weakly increasing positive integers, got {n:?}"
            )));
        }
        let total: u64 = n.iter().map(|&x| x as u64).sum();
        if total > d as u64 {
            return Err(Error::Domain(format!("|n| = {total} exceeds d = {d}")));
        }
        if let Some(j) = (0..n.len()).find(|&j| 2 * m[j] > n[j]) {
            return Err(Error::Domain(format!(
                "m_{} = {} exceeds n_{} / 2 = {}/2",
                j + 1,
                m[j],
                j + 1,
                n[j]
            )));
        }
        Ok(IndexPair { n, m, d })
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// `|n|`
    pub fn weight(&self) -> u32 {
        self.n.iter().sum()
    }

    /// The pushforward multipliers `n_j - 2 m_j`.
    pub fn multipliers(&self) -> impl Iterator<Item = u32> + '_ {
        self.n.iter().zip(&self.m).map(|(&n, &m)| n - 2 * m)
    }
}

fn check_rd(r: u32, d: u32) -> Result<()> {
    if r < 1 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    if d < r {
        return Err(Error::Domain(format!("d = {d} is smaller than r = {r}")));
    }
    Ok(())
}

/// Weakly increasing r-tuples of positive integers with sum at most `d`,
/// in lexicographic order.
#[derive(Clone, Debug)]
pub struct NTuples {
    cur: Vec<u32>,
    d: u32,
    started: bool,
    done: bool,
}

impl NTuples {
    pub fn new(r: u32, d: u32) -> Result<Self> {
        check_rd(r, d)?;
        Ok(NTuples {
            cur: vec![1; r as usize],
            d,
            started: false,
            done: false,
        })
    }

    // Lexicographic successor: bump the rightmost entry that can grow, and
    // reset everything after it to the same value.
    fn advance(&mut self) -> bool {
        let r = self.cur.len();
        let mut prefix: u64 = self.cur.iter().map(|&x| x as u64).sum();
        for i in (0..r).rev() {
            prefix -= self.cur[i] as u64;
            let v = self.cur[i] + 1;
            if prefix + (v as u64) * ((r - i) as u64) <= self.d as u64 {
                for x in &mut self.cur[i..] {
                    *x = v;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for NTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.cur.clone())
    }
}

/// All `m` with `0 <= m_j <= n_j / 2`, last coordinate fastest.
#[derive(Clone, Debug)]
pub struct MTuples {
    bounds: Vec<u32>,
    cur: Vec<u32>,
    done: bool,
}

impl MTuples {
    pub fn new(n: &[u32]) -> Self {
        MTuples {
            bounds: n.iter().map(|&x| x / 2).collect(),
            cur: vec![0; n.len()],
            done: false,
        }
    }

    /// Steps to the next tuple in place; false once exhausted.
    pub fn step(&mut self) -> bool {
        for i in (0..self.cur.len()).rev() {
            if self.cur[i] < self.bounds[i] {
                self.cur[i] += 1;
                return true;
            }
            self.cur[i] = 0;
        }
        false
    }

    pub fn current(&self) -> &[u32] {
        &self.cur
    }
}

impl Iterator for MTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        if !self.step() {
            self.done = true;
        }
        Some(out)
    }
}

/// Streaming enumeration of every [`IndexPair`] for `(r, d)`.
pub struct Pairs {
    d: u32,
    ns: NTuples,
    cur: Option<(Vec<u32>, MTuples)>,
}

impl Iterator for Pairs {
    type Item = IndexPair;

    fn next(&mut self) -> Option<IndexPair> {
        loop {
            if let Some((n, ms)) = &mut self.cur {
                if let Some(m) = ms.next() {
                    return Some(IndexPair {
                        n: n.clone(),
                        m,
                        d: self.d,
                    });
                }
            }
            let n = self.ns.next()?;
            let ms = MTuples::new(&n);
            self.cur = Some((n, ms));
        }
    }
}

/// Lexicographically ordered index set for `(r, d)`. Rejects `r < 1` and
/// `d < r`.
pub fn enumerate_pairs(r: u32, d: u32) -> Result<Pairs> {
    Ok(Pairs {
        d,
        ns: NTuples::new(r, d)?,
        cur: None,
    })
}

/// Number of pairs `enumerate_pairs(r, d)` yields, without enumerating.
/// Saturates at `u128::MAX`.
pub fn index_set_size(r: u32, d: u32) -> u128 {
    if r == 0 || d < r {
        return 0;
    }
    let (r, d) = (r as usize, d as usize);
    // dp[c][s]: weighted count of weakly increasing tuples of length c and
    // sum s using parts up to the current value.
    let mut dp = vec![vec![0u128; d + 1]; r + 1];
    dp[0][0] = 1;
    for v in 1..=d {
        let w = (v / 2 + 1) as u128;
        let mut next = dp.clone();
        for c in 0..r {
            for s in 0..=d {
                if dp[c][s] == 0 {
                    continue;
                }
                let mut mult = 1u128;
                for k in 1..=(r - c) {
                    let s2 = s + k * v;
                    if s2 > d {
                        break;
                    }
                    mult = mult.saturating_mul(w);
                    next[c + k][s2] = next[c + k][s2].saturating_add(dp[c][s].saturating_mul(mult));
                }
            }
        }
        dp = next;
    }
    dp[r].iter().fold(0u128, |a, &x| a.saturating_add(x))
}

/// Multiplicities of the distinct values in `xs`.
fn multiplicities<T: Ord + Copy>(xs: &mut [T]) -> Vec<u64> {
    xs.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i + 1;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        out.push((j - i) as u64);
        i = j;
    }
    out
}

/// `q! / prod(mult!)` over the given multiplicities.
fn multinomial(mults: &[u64]) -> BigInt {
    let q: u64 = mults.iter().sum();
    let den = mults.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k));
    factorial(q) / den
}

/// Number of distinct rearrangements of the `m_j` with `n_j == ell`; 1 when
/// no `n_j` equals `ell`.
pub fn perm_count(ell: u32, pair: &IndexPair) -> BigInt {
    let mut block: Vec<u32> = pair
        .n
        .iter()
        .zip(&pair.m)
        .filter(|(&n, _)| n == ell)
        .map(|(_, &m)| m)
        .collect();
    if block.is_empty() {
        return BigInt::one();
    }
    multinomial(&multiplicities(&mut block))
}

/// `e_1! ... e_k!` where the `e_i` are the run lengths of equal pairs
/// `(n_j, m_j)` after sorting the pairs lexicographically.
pub fn repeat_factor(pair: &IndexPair) -> BigInt {
    let mut pairs: Vec<(u32, u32)> = pair.n.iter().copied().zip(pair.m.iter().copied()).collect();
    multiplicities(&mut pairs)
        .into_iter()
        .fold(BigInt::one(), |acc, e| acc * factorial(e))
}

/// `repeat_factor` for an arbitrary sequence of pairs, in any order.
pub fn repeat_factor_of(pairs: &[(u32, u32)]) -> BigInt {
    let mut pairs = pairs.to_vec();
    multiplicities(&mut pairs)
        .into_iter()
        .fold(BigInt::one(), |acc, e| acc * factorial(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: &[u32], m: &[u32], d: u32) -> IndexPair {
        IndexPair::new(n.to_vec(), m.to_vec(), d).unwrap()
    }

    #[test]
    fn small_enumerations() {
        let got: Vec<_> = enumerate_pairs(1, 2).unwrap().map(|p| (p.n, p.m)).collect();
        assert_eq!(
            got,
            vec![(vec![1], vec![0]), (vec![2], vec![0]), (vec![2], vec![1])]
        );
        let got: Vec<_> = enumerate_pairs(2, 3).unwrap().map(|p| (p.n, p.m)).collect();
        assert_eq!(
            got,
            vec![
                (vec![1, 1], vec![0, 0]),
                (vec![1, 2], vec![0, 0]),
                (vec![1, 2], vec![0, 1]),
            ]
        );
    }

    #[test]
    fn r1_count() {
        for d in 1..=20u32 {
            let expect: u32 = (1..=d).map(|n| n / 2 + 1).sum();
            assert_eq!(enumerate_pairs(1, d).unwrap().count() as u32, expect);
            assert_eq!(index_set_size(1, d), expect as u128);
        }
    }

    #[test]
    fn size_matches_enumeration() {
        for r in 1..=4 {
            for d in r..=16 {
                assert_eq!(
                    index_set_size(r, d),
                    enumerate_pairs(r, d).unwrap().count() as u128,
                    "r={r} d={d}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(enumerate_pairs(0, 3).is_err());
        assert!(enumerate_pairs(3, 2).is_err());
        assert_eq!(index_set_size(3, 2), 0);
    }

    #[test]
    fn pair_validation() {
        assert!(IndexPair::new(vec![2, 1], vec![0, 0], 5).is_err());
        assert!(IndexPair::new(vec![0, 1], vec![0, 0], 5).is_err());
        assert!(IndexPair::new(vec![3], vec![2], 5).is_err());
        assert!(IndexPair::new(vec![3, 3], vec![0, 0], 5).is_err());
        assert!(IndexPair::new(vec![3], vec![0, 0], 5).is_err());
    }

    #[test]
    fn perm_count_examples() {
        assert_eq!(perm_count(2, &pair(&[2, 2], &[0, 1], 4)), BigInt::from(2));
        assert_eq!(perm_count(2, &pair(&[2, 2], &[1, 1], 4)), BigInt::from(1));
        assert_eq!(perm_count(3, &pair(&[3, 3, 3], &[0, 0, 1], 9)), BigInt::from(3));
        assert_eq!(perm_count(5, &pair(&[3, 3, 3], &[0, 0, 1], 9)), BigInt::from(1));
    }

    #[test]
    fn repeat_factor_examples() {
        let seq = [
            (1, 2),
            (1, 2),
            (2, 5),
            (2, 3),
            (2, 3),
            (2, 3),
            (7, 5),
            (3, 3),
            (3, 3),
            (3, 3),
        ];
        assert_eq!(repeat_factor_of(&seq), BigInt::from(72));
        assert_eq!(repeat_factor(&pair(&[1, 2, 3], &[0, 1, 1], 9)), BigInt::from(1));
        assert_eq!(repeat_factor(&pair(&[2, 2], &[1, 1], 4)), BigInt::from(2));
    }
}

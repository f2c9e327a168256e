//! The coefficients `c_{t,r,d}` of the Beauville components of `[V]`, their
//! combinatorial weights, and table scans over ranges of `(t, r, d)`.
//!
//! ```text
//! c_{t,r,d} = 2^{-2r-t} sum_{(n,m)} (lambda_{n,m} / d_{n,m}) prod_j (n_j - 2 m_j)^{t+2}
//! lambda_{n,m} = 2^{d-|n|} mu_n nu_{n,m} C(d,|n|) prod_j C(n_j, m_j)
//! ```

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli, binomial, factorial, Rational};
use crate::error::{Error, Result};
use crate::tuples::{enumerate_pairs, index_set_size, perm_count, repeat_factor, IndexPair, MTuples, NTuples};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default bound on the index-set size of a single scan cell.
pub const DEFAULT_CAP: u128 = 50_000_000;

/// A request for `c_{t,r,d}`; `g` is only used to check `d < 2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffQuery {
    pub t: u32,
    pub r: u32,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
}

impl CoeffQuery {
    pub fn new(t: u32, r: u32, d: u32) -> Self {
        CoeffQuery { t, r, d, g: None }
    }

    pub fn with_genus(mut self, g: u32) -> Self {
        self.g = Some(g);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_regime(self.r, self.d)?;
        if let Some(g) = self.g {
            if self.d as u64 >= 2 * g as u64 {
                return Err(Error::Domain(format!(
                    "need d < 2g, got d = {}, g = {g}",
                    self.d
                )));
            }
        }
        Ok(())
    }
}

/// `0 < 2r < d`
pub fn check_regime(r: u32, d: u32) -> Result<()> {
    if r == 0 || 2 * r as u64 >= d as u64 {
        return Err(Error::Domain(format!("need 0 < 2r < d, got r = {r}, d = {d}")));
    }
    Ok(())
}

/// `mu_n = prod (-1)^{n_j - 1} / n_j`
pub fn mu(n: &[u32]) -> Rational {
    let neg = n.iter().filter(|&&x| x % 2 == 0).count() % 2 == 1;
    let den = n.iter().fold(BigInt::one(), |acc, &x| acc * x);
    let num = if neg { -BigInt::one() } else { BigInt::one() };
    Rational::new(num, den)
}

/// `nu_{n,m} = prod_{l=1}^{d-r+1} 1 / p(l, n, m)`
pub fn nu(pair: &IndexPair) -> Rational {
    let top = pair.d() as i64 - pair.r() as i64 + 1;
    let den = (1..=top.max(0) as u32).fold(BigInt::one(), |acc, ell| acc * perm_count(ell, pair));
    Rational::new(1, den)
}

/// `lambda_{n,m}` for degree `d`. Requires `|n| <= d`.
pub fn lambda(pair: &IndexPair, d: u32) -> Result<Rational> {
    let w = pair.weight();
    if w > d {
        return Err(Error::Domain(format!("|n| = {w} exceeds d = {d}")));
    }
    let binoms = pair
        .n()
        .iter()
        .zip(pair.m())
        .fold(binomial(d as u64, w as i64), |acc, (&n, &m)| acc * binomial(n as u64, m as i64));
    Ok(Rational::pow2((d - w) as i64) * mu(pair.n()) * nu(pair) * Rational::from(binoms))
}

/// `d_{n,m}` as a rational, for use in the sum.
pub fn repeat_weight(pair: &IndexPair) -> Rational {
    Rational::from(repeat_factor(pair))
}

/// Options for [`c_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumOptions {
    /// Skip pairs with some `n_j = 2 m_j` before evaluating them.
    pub skip_annihilated: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            skip_annihilated: true,
        }
    }
}

/// `c_{t,r,d}`, summed over the index set in enumeration order.
pub fn c(query: &CoeffQuery) -> Result<Rational> {
    c_with(query, SumOptions::default())
}

// Per-pair integer term `w * prod C(n_j, m_j) * prod k_j^{t+2}` in i128, or
// None on overflow.
fn small_term(weight: u128, n: &[u32], m: &[u32], e: u32, binom: &[Vec<u128>]) -> Option<i128> {
    let mut acc = i128::try_from(weight).ok()?;
    for (&nj, &mj) in n.iter().zip(m) {
        let b = *binom.get(nj as usize)?.get(mj as usize)?;
        let k = (nj - 2 * mj) as i128;
        acc = acc.checked_mul(i128::try_from(b).ok()?)?;
        acc = acc.checked_mul(k.checked_pow(e)?)?;
    }
    Some(acc)
}

fn big_term(weight: &BigInt, n: &[u32], m: &[u32], e: u32) -> BigInt {
    let mut acc = weight.clone();
    for (&nj, &mj) in n.iter().zip(m) {
        acc *= binomial(nj as u64, mj as i64);
        acc *= num_traits::pow(BigInt::from(nj - 2 * mj), e as usize);
    }
    acc
}

// Per block of equal n_j: (start, end) ranges into the tuple.
fn blocks(n: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < n.len() {
        let mut j = i + 1;
        while j < n.len() && n[j] == n[i] {
            j += 1;
        }
        out.push((i, j));
        i = j;
    }
    out
}

// For one m, returns prod_l p(l,n,m) * d_{n,m}, computed block by block from
// the multiplicities of the m-values inside each block of equal n.
fn nu_den_times_repeat(m: &[u32], blocks: &[(usize, usize)], scratch: &mut Vec<u32>) -> Option<u128> {
    let mut total: u128 = 1;
    for &(a, b) in blocks {
        if b - a == 1 {
            continue;
        }
        scratch.clear();
        scratch.extend_from_slice(&m[a..b]);
        scratch.sort_unstable();
        let q = (b - a) as u32;
        let mut mult_fact: u128 = 1;
        let mut i = 0;
        while i < scratch.len() {
            let mut j = i + 1;
            while j < scratch.len() && scratch[j] == scratch[i] {
                j += 1;
            }
            mult_fact = mult_fact.checked_mul(small_factorial(j - i)?)?;
            i = j;
        }
        // p(l) = q! / prod mult!, and the block's share of d_{n,m} is prod mult!.
        let p = small_factorial(q as usize)? / mult_fact;
        total = total.checked_mul(p)?.checked_mul(mult_fact)?;
    }
    Some(total)
}

fn small_factorial(k: usize) -> Option<u128> {
    (1..=k as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

fn binomial_table(d: u32) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..=d as usize {
        let prev = &rows[n - 1];
        let mut row = vec![1u128; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1].saturating_add(prev[k]);
        }
        rows.push(row);
    }
    rows
}

/// `c_{t,r,d}` with explicit summation options.
pub fn c_with(query: &CoeffQuery, opts: SumOptions) -> Result<Rational> {
    query.validate()?;
    let CoeffQuery { t, r, d, .. } = *query;
    let e = t + 2;
    // saturated entries only appear far beyond any feasible d; guard anyway
    let binom = binomial_table(d);
    let saturated = d > 120;
    let mut total = Rational::zero();
    let mut scratch = Vec::new();

    for n in NTuples::new(r, d)? {
        let bl = blocks(&n);
        // L = prod_l q(l)!; every prod p(l) * d_{n,m} divides it.
        let common: BigInt = bl.iter().fold(BigInt::one(), |acc, &(a, b)| acc * factorial((b - a) as u64));
        let common_small = common.to_u128();

        let mut acc_small: i128 = 0;
        let mut acc_big = BigInt::zero();
        let mut ms = MTuples::new(&n);
        loop {
            let m = ms.current();
            let annihilated = n.iter().zip(m).any(|(&nj, &mj)| nj == 2 * mj);
            if !(opts.skip_annihilated && annihilated) {
                let pd = nu_den_times_repeat(m, &bl, &mut scratch);
                let small = match (pd, common_small, saturated) {
                    (Some(pd), Some(l), false) if l % pd == 0 => small_term(l / pd, &n, m, e, &binom),
                    _ => None,
                };
                match small.and_then(|x| acc_small.checked_add(x)) {
                    Some(v) => acc_small = v,
                    None => acc_big += big_pair_term(&n, m, d, e, &common),
                }
            }
            if !ms.step() {
                break;
            }
        }
        acc_big += acc_small;
        if acc_big.is_zero() {
            continue;
        }
        let w = n.iter().sum::<u32>();
        let outer = Rational::pow2((d - w) as i64) * mu(&n) * Rational::from(binomial(d as u64, w as i64));
        total += outer * Rational::new(acc_big, common);
    }
    Ok(total * Rational::pow2(-(2 * r as i64 + t as i64)))
}

// Slow path: the pair's term scaled by L, using exact rationals for nu/d.
fn big_pair_term(n: &[u32], m: &[u32], d: u32, e: u32, common: &BigInt) -> BigInt {
    let pair = IndexPair::new(n.to_vec(), m.to_vec(), d).expect("enumerated pair is valid");
    let scale = nu(&pair) / repeat_weight(&pair) * Rational::from(common.clone());
    assert!(scale.is_integer(), "nu/d does not divide the block factorials");
    big_term(scale.numer(), n, m, e)
}

/// The r = 1 specialization, summed directly:
/// `sum_{n<=d} sum_{m<=n/2} (-1)^{n-1} 2^{d-n-t-2} / n * C(d,n) C(n,m) (n-2m)^{t+2}`.
pub fn c_g1d(t: u32, d: u32) -> Result<Rational> {
    if d < 3 {
        return Err(Error::Domain(format!("need d >= 3, got {d}")));
    }
    let mut total = Rational::zero();
    for n in 1..=d {
        let mut inner = BigInt::zero();
        for m in 0..=n / 2 {
            let k = BigInt::from(n - 2 * m);
            inner += binomial(n as u64, m as i64) * num_traits::pow(k, (t + 2) as usize);
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let term = Rational::new(sign * binomial(d as u64, n as i64) * inner, n)
            * Rational::pow2(d as i64 - n as i64 - t as i64 - 2);
        total += term;
    }
    Ok(total)
}

/// `(4^{s+1} - 1) B_{2s+2} / (s+1) * 2^{d-2}`, the conjectured value of
/// `c_{2s,1,d}`.
pub fn c_closed_form_even(s: u32, d: u32) -> Rational {
    let four = (BigInt::one() << (2 * (s as usize + 1))) - 1;
    Rational::from(four) * bernoulli(2 * s as u64 + 2) / Rational::from(s + 1)
        * Rational::pow2(d as i64 - 2)
}

/// `2^{d-3r} / r!`, the Beauville degree 0 coefficient forced by the
/// cohomology class of `V`.
pub fn c_degree_zero_expected(r: u32, d: u32) -> Rational {
    Rational::pow2(d as i64 - 3 * r as i64) / Rational::from(factorial(r as u64))
}

/// One `(t, r, d, c)` row of a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub t: u32,
    pub r: u32,
    pub d: u32,
    pub c: Rational,
    pub is_integer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub engine_version: String,
    /// Unix seconds; left empty so repeated scans are byte-identical.
    pub generated_unix: Option<u64>,
    /// Cells dropped because `2r >= d`.
    pub skipped_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub t_range: (u32, u32),
    pub r_range: (u32, u32),
    pub d_range: (u32, u32),
    pub rows: Vec<CoeffRow>,
    pub meta: TableMeta,
}

impl CoeffTable {
    pub fn with_timestamp(mut self, unix_seconds: u64) -> Self {
        self.meta.generated_unix = Some(unix_seconds);
        self
    }

    pub const CSV_HEADER: &'static str = "t,r,d,c,is_integer";

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }

    /// The rows as a JSON array of objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

pub fn rows_to_csv(rows: &[CoeffRow]) -> String {
    let mut out = String::from(CoeffTable::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{},{},{},{},{}\n", row.t, row.r, row.d, row.c, row.is_integer));
    }
    out
}

pub fn rows_from_csv(text: &str) -> Result<Vec<CoeffRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CoeffTable::CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let int = |s: &str| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(Error::Parse(format!("expected 5 fields in {line:?}")));
            }
            Ok(CoeffRow {
                t: int(f[0])?,
                r: int(f[1])?,
                d: int(f[2])?,
                c: f[3].parse()?,
                is_integer: f[4]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad boolean {:?}", f[4])))?,
            })
        })
        .collect()
}

/// Evaluates every cell of `t x r x d` with `2r < d`. Cells are computed in
/// parallel and returned sorted by `(r, d, t)`.
pub fn scan(
    t: RangeInclusive<u32>,
    r: RangeInclusive<u32>,
    d: RangeInclusive<u32>,
    cap: u128,
) -> Result<CoeffTable> {
    if t.is_empty() || r.is_empty() || d.is_empty() {
        return Err(Error::Domain("scan ranges must be nonempty".into()));
    }
    if cap == 0 {
        return Err(Error::Domain("enumeration cap must be positive".into()));
    }
    let mut cells = Vec::new();
    let mut skipped = 0;
    for rr in r.clone() {
        for dd in d.clone() {
            if check_regime(rr, dd).is_err() {
                skipped += t.clone().count();
                continue;
            }
            let size = index_set_size(rr, dd);
            if size > cap {
                return Err(Error::ResourceCap { r: rr, d: dd, size, cap });
            }
            for tt in t.clone() {
                cells.push(CoeffQuery::new(tt, rr, dd));
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::Domain("no cell of the scan satisfies 0 < 2r < d".into()));
    }
    let mut rows = cells
        .par_iter()
        .map(|q| {
            c(q).map(|value| CoeffRow {
                t: q.t,
                r: q.r,
                d: q.d,
                is_integer: value.is_integer(),
                c: value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|row| (row.r, row.d, row.t));
    Ok(CoeffTable {
        t_range: (*t.start(), *t.end()),
        r_range: (*r.start(), *r.end()),
        d_range: (*d.start(), *d.end()),
        rows,
        meta: TableMeta {
            engine_version: ENGINE_VERSION.to_string(),
            generated_unix: None,
            skipped_cells: skipped,
        },
    })
}

/// Closed forms a scan can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `c = sign * 2^{d - offset}` within each `(t, r)` series, with sign and
    /// offset fitted from the series' first row.
    Pow2,
    /// `c_{2s,1,d} = (4^{s+1}-1) B_{2s+2} / (s+1) * 2^{d-2}`; needs r = 1, t even.
    BernoulliEven,
    /// `c_{0,r,d} = 2^{d-3r} / r!`; needs t = 0.
    FactorialScaled,
}

impl std::str::FromStr for ClosedForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pow2" => Ok(ClosedForm::Pow2),
            "bernoulli-even" => Ok(ClosedForm::BernoulliEven),
            "factorial-scaled" => Ok(ClosedForm::FactorialScaled),
            _ => Err(Error::Parse(format!(
                "unknown closed form {s:?} (expected pow2, bernoulli-even or factorial-scaled)"
            ))),
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedForm::Pow2 => "pow2",
            ClosedForm::BernoulliEven => "bernoulli-even",
            ClosedForm::FactorialScaled => "factorial-scaled",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub t: u32,
    pub r: u32,
    pub d: u32,
    pub got: Rational,
    /// None when the first row of a pow2 series is not a signed power of 2.
    pub expected: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectReport {
    pub form: ClosedForm,
    pub checked: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl ExpectReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl fmt::Display for ExpectReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_mismatch {
            None => write!(f, "expect {}: ok ({} rows)", self.form, self.checked),
            Some(mm) => {
                write!(f, "expect {}: first mismatch at t={}, r={}, d={}: got {}", self.form, mm.t, mm.r, mm.d, mm.got)?;
                match &mm.expected {
                    Some(e) => write!(f, ", expected {e}"),
                    None => write!(f, ", expected a signed power of 2"),
                }
            }
        }
    }
}

/// `Some(e)` when `|x| = 2^e`.
fn log2_exact(x: &Rational) -> Option<i64> {
    let (n, q) = (x.numer().magnitude(), x.denom().magnitude());
    let pow2 = |v: &num_bigint::BigUint| v.count_ones() == 1;
    if x.is_zero() || !pow2(n) || !pow2(q) {
        return None;
    }
    Some(n.trailing_zeros()? as i64 - q.trailing_zeros()? as i64)
}

/// Checks every row of `table` against `form`, in row order.
pub fn check_expectation(table: &CoeffTable, form: ClosedForm) -> Result<ExpectReport> {
    let expected: Vec<Option<Rational>> = match form {
        ClosedForm::BernoulliEven => table
            .rows
            .iter()
            .map(|row| {
                if row.r != 1 || row.t % 2 != 0 {
                    Err(Error::Domain(format!(
                        "bernoulli-even needs r = 1 and even t, table has t={}, r={}",
                        row.t, row.r
                    )))
                } else {
                    Ok(Some(c_closed_form_even(row.t / 2, row.d)))
                }
            })
            .collect::<Result<_>>()?,
        ClosedForm::FactorialScaled => table
            .rows
            .iter()
            .map(|row| {
                if row.t != 0 {
                    Err(Error::Domain(format!("factorial-scaled needs t = 0, table has t={}", row.t)))
                } else {
                    Ok(Some(c_degree_zero_expected(row.r, row.d)))
                }
            })
            .collect::<Result<_>>()?,
        ClosedForm::Pow2 => {
            // fit (sign, d - exponent) from the first row of each (t, r) series
            let mut fits: std::collections::BTreeMap<(u32, u32), Option<(i32, i64)>> = Default::default();
            table
                .rows
                .iter()
                .map(|row| {
                    let fit = *fits.entry((row.t, row.r)).or_insert_with(|| {
                        log2_exact(&row.c).map(|e| (row.c.signum(), row.d as i64 - e))
                    });
                    fit.map(|(sign, offset)| Rational::from(sign) * Rational::pow2(row.d as i64 - offset))
                })
                .collect()
        }
    };
    let mut checked = 0;
    for (row, exp) in table.rows.iter().zip(expected) {
        checked += 1;
        if exp.as_ref() != Some(&row.c) {
            return Ok(ExpectReport {
                form,
                checked,
                first_mismatch: Some(Mismatch {
                    t: row.t,
                    r: row.r,
                    d: row.d,
                    got: row.c.clone(),
                    expected: exp,
                }),
            });
        }
    }
    Ok(ExpectReport {
        form,
        checked,
        first_mismatch: None,
    })
}

/// Every pair of the index set together with its summand in `c_{t,r,d}`,
/// evaluated term by term from `lambda` and `d_{n,m}`.
pub fn pair_terms(query: &CoeffQuery) -> Result<Vec<(IndexPair, Rational)>> {
    query.validate()?;
    let e = query.t as usize + 2;
    enumerate_pairs(query.r, query.d)?
        .map(|pair| {
            let lam = lambda(&pair, query.d)?;
            let prod = pair
                .multipliers()
                .fold(BigInt::one(), |acc, k| acc * num_traits::pow(BigInt::from(k), e));
            let term = lam / repeat_weight(&pair) * Rational::from(prod)
                * Rational::pow2(-(2 * query.r as i64 + query.t as i64));
            Ok((pair, term))
        })
        .collect()
}

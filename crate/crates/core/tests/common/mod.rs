//! Independent oracles and property checks shared by the integration tests
//! and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use prym_taut::coefficients::{c, c_with, mu, nu, CoeffQuery, SumOptions};
use prym_taut::taut::{graded_component, pont_mul, pushforward, PontTerm, TautExpr};
use prym_taut::tuples::{enumerate_pairs, IndexPair};
use prym_taut::{bernoulli, binomial, Rational};

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// All orderings of `xs`, deduplicated.
pub fn distinct_permutations(xs: &[u32]) -> usize {
    fn go(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut HashSet<Vec<u32>>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = HashSet::new();
    go(&mut xs.to_vec(), &mut Vec::new(), &mut out);
    out.len()
}

/// Every `(n, m)` by brute force over `[1, d]^r`, in lexicographic order.
pub fn brute_pairs(r: usize, d: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut ns = Vec::new();
    let mut cur = vec![1u32; r];
    loop {
        if cur.windows(2).all(|w| w[0] <= w[1]) && cur.iter().sum::<u32>() <= d {
            ns.push(cur.clone());
        }
        // odometer over [1, d]^r
        let mut i = r;
        loop {
            if i == 0 {
                ns.sort();
                let mut out = Vec::new();
                for n in ns {
                    let mut ms = vec![vec![]];
                    for &nj in &n {
                        ms = ms
                            .into_iter()
                            .flat_map(|m: Vec<u32>| {
                                (0..=nj / 2).map(move |x| {
                                    let mut m2 = m.clone();
                                    m2.push(x);
                                    m2
                                })
                            })
                            .collect();
                    }
                    for m in ms {
                        out.push((n.clone(), m));
                    }
                }
                return out;
            }
            i -= 1;
            if cur[i] < d {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
}

/// `c_{t,r,d}` straight from the printed sum: nu from explicit permutation
/// sets, d_{n,m} from a count of equal pairs, everything in rationals.
pub fn oracle_c(t: u32, r: usize, d: u32) -> Rational {
    let mut total = Rational::zero();
    for (n, m) in brute_pairs(r, d) {
        let w: u32 = n.iter().sum();
        let mut mu = Rational::one();
        for &nj in &n {
            let sign = if nj % 2 == 1 { 1 } else { -1 };
            mu = mu * Rational::new(sign, nj);
        }
        let mut nu_den = 1usize;
        for ell in 1..=d {
            let block: Vec<u32> = (0..r).filter(|&j| n[j] == ell).map(|j| m[j]).collect();
            if !block.is_empty() {
                nu_den *= distinct_permutations(&block);
            }
        }
        let mut counts: HashMap<(u32, u32), usize> = HashMap::new();
        for j in 0..r {
            *counts.entry((n[j], m[j])).or_default() += 1;
        }
        let dnm = counts.values().fold(BigInt::one(), |a, &e| a * factorial(e));
        let mut binoms = binomial(d as u64, w as i64);
        let mut prod = BigInt::one();
        for j in 0..r {
            binoms *= binomial(n[j] as u64, m[j] as i64);
            prod *= num_traits::pow(BigInt::from(n[j] as i64 - 2 * m[j] as i64), t as usize + 2);
        }
        let lambda = Rational::pow2((d - w) as i64) * mu * Rational::new(1, nu_den) * Rational::from(binoms);
        total += lambda / Rational::from(dnm) * Rational::from(prod);
    }
    total * Rational::pow2(-(2 * r as i64 + t as i64))
}

/// Graded extraction by brute force over `{0..t}^r`.
pub fn oracle_graded(ks: &[u32], t: u32, p: u32) -> BTreeMap<Vec<u32>, BigInt> {
    let r = ks.len();
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let total = (t as usize + 1).pow(r as u32);
    for idx in 0..total {
        let mut s = Vec::with_capacity(r);
        let mut x = idx;
        for _ in 0..r {
            s.push((x % (t as usize + 1)) as u32);
            x /= t as usize + 1;
        }
        if s.iter().sum::<u32>() != t || s.iter().any(|&v| v % 2 == 1 || v > p - 1) {
            continue;
        }
        let w = ks
            .iter()
            .zip(&s)
            .fold(BigInt::one(), |a, (&k, &sj)| a * num_traits::pow(BigInt::from(k), 2 + sj as usize));
        let mut key = s.clone();
        key.sort();
        *out.entry(key).or_default() += w;
    }
    out
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn taut_expr() -> impl Strategy<Value = TautExpr> {
    prop::collection::vec((prop::collection::vec(-5i64..=5, 0..=3), small_rational()), 0..=4).prop_map(|terms| {
        let mut x = TautExpr::zero();
        for (ks, v) in terms {
            if let Some(t) = PontTerm::new(ks) {
                x.add_term(t, v);
            }
        }
        x
    })
}

fn homogeneous_expr(r: usize) -> impl Strategy<Value = TautExpr> {
    prop::collection::vec((prop::collection::vec(1i64..=4, r), small_rational()), 1..=3).prop_map(|terms| {
        let mut x = TautExpr::zero();
        for (ks, v) in terms {
            x.add_term(PontTerm::new(ks).unwrap(), v);
        }
        x
    })
}

pub type Check = std::result::Result<(), String>;

fn run<S: Strategy>(cases: u32, strat: S, f: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>) -> Check
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strat, f).map_err(|e| e.to_string())
}

pub fn check_rational_field_laws() -> Check {
    run(256, (small_rational(), small_rational(), small_rational()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let q = &a - &b;
        prop_assert!(q.denom() > &BigInt::from(0));
        prop_assert!(num_integer::Integer::gcd(q.numer(), q.denom()) == BigInt::one() || q.is_zero());
        Ok(())
    })
}

pub fn check_pontryagin_laws() -> Check {
    run(128, (taut_expr(), taut_expr(), taut_expr()), |(a, b, c)| {
        prop_assert_eq!(pont_mul(&a, &b), pont_mul(&b, &a));
        prop_assert_eq!(pont_mul(&pont_mul(&a, &b), &c), pont_mul(&a, &pont_mul(&b, &c)));
        prop_assert_eq!(pont_mul(&a, &b.add(&c)), pont_mul(&a, &b).add(&pont_mul(&a, &c)));
        Ok(())
    })
}

pub fn check_pushforward_homomorphism() -> Check {
    run(96, (taut_expr(), taut_expr()), |(a, b)| {
        for k in -3..=3 {
            prop_assert_eq!(
                pushforward(k, &pont_mul(&a, &b)),
                pont_mul(&pushforward(k, &a), &pushforward(k, &b)),
                "k = {}",
                k
            );
        }
        Ok(())
    })
}

pub fn check_graded_scaling_law() -> Check {
    run(64, (1usize..=3).prop_flat_map(|r| (Just(r), homogeneous_expr(r))), |(r, x)| {
        for t in 0..=6u32 {
            let p = 8;
            let base = graded_component(&x, t, p).unwrap();
            for k in [-3i64, -2, 2, 3] {
                let pushed = graded_component(&pushforward(k, &x), t, p).unwrap();
                let factor = Rational::from(k).pow(2 * r as i32 + t as i32);
                prop_assert_eq!(pushed, base.scale(&factor), "r={} t={} k={}", r, t, k);
            }
        }
        Ok(())
    })
}

pub fn check_graded_against_oracle() -> Check {
    run(64, (prop::collection::vec(1u32..=4, 1..=3), 0u32..=8, 2u32..=9), |(ks, t, p)| {
        let term = PontTerm::new(ks.iter().map(|&k| k as i64)).unwrap();
        let got = graded_component(&TautExpr::term(term, Rational::one()), t, p).unwrap();
        let want = oracle_graded(&ks, t, p);
        prop_assert_eq!(got.len(), want.len());
        for (key, w) in want {
            prop_assert_eq!(got.coeff(&key), Rational::from(w));
        }
        Ok(())
    })
}

pub fn check_mu_sign_law() -> Check {
    for r in 1..=4u32 {
        for d in r..=20 {
            for pair in enumerate_pairs(r, d).unwrap() {
                let expected = if (pair.weight() - r) % 2 == 0 { 1 } else { -1 };
                if mu(pair.n()).signum() != expected {
                    return Err(format!("sign of mu{:?} is not (-1)^(|n|-r)", pair.n()));
                }
            }
        }
    }
    Ok(())
}

pub fn check_nu_range() -> Check {
    for r in 1..=4u32 {
        for d in r..=14 {
            for pair in enumerate_pairs(r, d).unwrap() {
                let v = nu(&pair);
                if !(v > Rational::zero() && v <= Rational::one()) || !v.recip().is_integer() {
                    return Err(format!("nu = {v} for {pair:?}"));
                }
            }
        }
    }
    Ok(())
}

pub fn check_annihilated_neutrality() -> Check {
    for r in 1..=3u32 {
        for d in (2 * r + 1)..=15 {
            for t in 0..=4 {
                let q = CoeffQuery::new(t, r, d);
                let skip = c_with(&q, SumOptions { skip_annihilated: true }).unwrap();
                let keep = c_with(&q, SumOptions { skip_annihilated: false }).unwrap();
                if skip != keep {
                    return Err(format!("t={t} r={r} d={d}: {skip} vs {keep}"));
                }
            }
        }
    }
    Ok(())
}

pub fn check_bernoulli_odd_vanishing() -> Check {
    match (3..=50u64).step_by(2).find(|&m| !bernoulli(m).is_zero()) {
        Some(m) => Err(format!("B_{m} = {}", bernoulli(m))),
        None => Ok(()),
    }
}

pub fn check_pascal_rule() -> Check {
    for n in 2..=60u64 {
        for k in 1..n as i64 {
            if binomial(n, k) != binomial(n - 1, k - 1) + binomial(n - 1, k) {
                return Err(format!("Pascal fails at ({n}, {k})"));
            }
        }
    }
    Ok(())
}

pub fn check_enumeration_determinism() -> Check {
    for r in 1..=4u32 {
        for d in r..=16 {
            let a: Vec<IndexPair> = enumerate_pairs(r, d).unwrap().collect();
            let b: Vec<IndexPair> = enumerate_pairs(r, d).unwrap().collect();
            if a != b {
                return Err(format!("r={r} d={d}: enumeration differs between runs"));
            }
            let keys: Vec<(Vec<u32>, Vec<u32>)> = a.iter().map(|p| (p.n().to_vec(), p.m().to_vec())).collect();
            if !keys.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("r={r} d={d}: not strictly increasing"));
            }
            if keys != brute_pairs(r as usize, d) {
                return Err(format!("r={r} d={d}: differs from brute-force index set"));
            }
        }
    }
    Ok(())
}

/// Engine value against the verbatim oracle.
pub fn check_engine_against_oracle(max_r: usize, max_d: u32, ts: &[u32]) -> Check {
    for r in 1..=max_r {
        for d in (2 * r as u32 + 1)..=max_d {
            for &t in ts {
                let got = c(&CoeffQuery::new(t, r as u32, d)).unwrap();
                let want = oracle_c(t, r, d);
                if got != want {
                    return Err(format!("t={t} r={r} d={d}: engine {got}, oracle {want}"));
                }
            }
        }
    }
    Ok(())
}

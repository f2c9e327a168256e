//! Formal cycle classes built from the Abel-Prym curve class `Z`.
//!
//! A [`TautExpr`] is a rational combination of Pontryagin monomials
//! `(k_1)_*Z * ... * (k_r)_*Z`. Graded extraction uses the scaling law
//! `k_*Z_(s) = k^{2+s} Z_(s)` on each factor, producing a [`GradedExpr`] over
//! the monomials `Z_(s_1) * ... * Z_(s_r)`. The Fourier transform sends
//! `Z_(n-1)` to the generator `zeta_n` and Pontryagin products to
//! intersection products, which gives a [`ZetaPolynomial`].
//!
//! Only even Beauville components of `Z` are nonzero, so graded keys hold
//! even `s` values, and `zeta_n` vanishes for even `n` and for `n >= p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::coefficients::{check_regime, lambda, repeat_weight};
use crate::error::{Error, Result};
use crate::tuples::enumerate_pairs;

/// Sorted multiset of pushforward multipliers, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PontTerm(Vec<u32>);

impl PontTerm {
    /// Normalizes signs away; `None` if some multiplier is 0, since `0_*Z`
    /// annihilates the product.
    pub fn new<I: IntoIterator<Item = i64>>(multipliers: I) -> Option<Self> {
        let mut ks = Vec::new();
        for k in multipliers {
            if k == 0 {
                return None;
            }
            ks.push(u32::try_from(k.unsigned_abs()).expect("multiplier fits in u32"));
        }
        ks.sort_unstable();
        Some(PontTerm(ks))
    }

    /// The empty product, i.e. the class of the origin.
    pub fn unit() -> Self {
        PontTerm(Vec::new())
    }

    pub fn multipliers(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn union(&self, other: &PontTerm) -> PontTerm {
        let mut ks = Vec::with_capacity(self.0.len() + other.0.len());
        ks.extend_from_slice(&self.0);
        ks.extend_from_slice(&other.0);
        ks.sort_unstable();
        PontTerm(ks)
    }
}

// Groups a sorted slice into (value, multiplicity).
fn runs(xs: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

impl fmt::Display for PontTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("[0]");
        }
        let parts: Vec<String> = runs(&self.0)
            .into_iter()
            .map(|(k, e)| match (k, e) {
                (1, 1) => "Z".to_string(),
                (1, e) => format!("Z^{{*{e}}}"),
                (k, 1) => format!("{k}_*Z"),
                (k, e) => format!("({k}_*Z)^{{*{e}}}"),
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

fn write_combination<K>(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<K, Rational>,
    mut mono: impl FnMut(&K) -> String,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (key, coeff)) in terms.iter().enumerate() {
        let sign = match (i, coeff.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        write!(f, "{sign}{} * {}", coeff.abs(), mono(key))?;
    }
    Ok(())
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(value);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn serialize_terms<S: Serializer, K, F>(terms: &BTreeMap<K, Rational>, key: F, serializer: S) -> Result<S::Ok, S::Error>
where
    F: Fn(&K) -> &[u32],
{
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(terms.len()))?;
    for (k, v) in terms {
        seq.serialize_element(&(key(k), v))?;
    }
    seq.end()
}

/// Formal rational combination of Pontryagin monomials in pushforwards of `Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TautExpr {
    terms: BTreeMap<PontTerm, Rational>,
}

impl TautExpr {
    pub fn zero() -> Self {
        TautExpr::default()
    }

    pub fn term(term: PontTerm, coeff: Rational) -> Self {
        let mut out = TautExpr::zero();
        out.add_term(term, coeff);
        out
    }

    /// `coeff * Z^{*r}`
    pub fn z_power(r: usize, coeff: Rational) -> Self {
        TautExpr::term(PontTerm(vec![1; r]), coeff)
    }

    pub fn add_term(&mut self, term: PontTerm, coeff: Rational) {
        add_into(&mut self.terms, term, coeff);
    }

    pub fn coeff(&self, term: &PontTerm) -> Rational {
        self.terms.get(term).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PontTerm, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TautExpr) -> TautExpr {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> TautExpr {
        let mut out = TautExpr::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression serializes")
    }
}

impl Serialize for TautExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_terms(&self.terms, |k| k.multipliers(), serializer)
    }
}

impl<'de> Deserialize<'de> for TautExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<(Vec<i64>, Rational)>::deserialize(deserializer)?;
        let mut out = TautExpr::zero();
        for (ks, v) in raw {
            if let Some(t) = PontTerm::new(ks) {
                out.add_term(t, v);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TautExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.terms, |t| t.to_string())
    }
}

/// Pontryagin product, bilinear over the terms.
pub fn pont_mul(a: &TautExpr, b: &TautExpr) -> TautExpr {
    let mut out = TautExpr::zero();
    for (ka, va) in &a.terms {
        for (kb, vb) in &b.terms {
            out.add_term(ka.union(kb), va * vb);
        }
    }
    out
}

/// `k_*` applied to every term: multipliers scale by `|k|`, and `k = 0`
/// kills every term with at least one factor.
pub fn pushforward(k: i64, x: &TautExpr) -> TautExpr {
    let mut out = TautExpr::zero();
    for (term, v) in &x.terms {
        let scaled = PontTerm::new(term.0.iter().map(|&kj| k * kj as i64));
        match scaled {
            Some(t) => out.add_term(t, v.clone()),
            // the unit [0] is fixed by every k_*
            None if term.is_empty() => out.add_term(term.clone(), v.clone()),
            None => {}
        }
    }
    out
}

/// The expansion of `2_*[V]` for a `g^r_d`:
/// `sum_{(n,m)} lambda_{n,m} / d_{n,m} * (n_1 - 2m_1)_*Z * ... * (n_r - 2m_r)_*Z`.
pub fn v_push_expansion(r: u32, d: u32) -> Result<TautExpr> {
    check_regime(r, d)?;
    let mut out = TautExpr::zero();
    for pair in enumerate_pairs(r, d)? {
        let Some(term) = PontTerm::new(pair.multipliers().map(i64::from)) else {
            continue;
        };
        let coeff = lambda(&pair, d)? / repeat_weight(&pair);
        out.add_term(term, coeff);
    }
    Ok(out)
}

/// Rational combination of `Z_(s_1) * ... * Z_(s_r)`, keyed by the sorted
/// multiset of even degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedExpr {
    p: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl GradedExpr {
    pub fn zero(p: u32) -> Self {
        GradedExpr {
            p,
            terms: BTreeMap::new(),
        }
    }

    /// `Z = sum_{s even, s <= p-1} Z_(s)`.
    pub fn curve_class(p: u32) -> Self {
        let mut out = GradedExpr::zero(p);
        for s in (0..p).step_by(2) {
            out.add_term(vec![s], Rational::one());
        }
        out
    }

    /// Adds `coeff * Z_(s_1) * ... * Z_(s_r)`. Panics on odd degrees or on
    /// degrees above `p - 1`.
    pub fn add_term(&mut self, mut key: Vec<u32>, coeff: Rational) {
        assert!(
            key.iter().all(|&s| s % 2 == 0 && s < self.p),
            "graded key {key:?} has an odd degree or one above p - 1 = {}",
            self.p - 1
        );
        key.sort_unstable();
        add_into(&mut self.terms, key, coeff);
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeff(&self, key: &[u32]) -> Rational {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(codimension, Beauville degree)` when every term shares them. An
    /// r-fold product of curve components has codimension `p - r`.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|k| (self.p - k.len() as u32, k.iter().sum::<u32>()));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    pub fn scale(&self, s: &Rational) -> GradedExpr {
        let mut out = GradedExpr::zero(self.p);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * s);
        }
        out
    }

    pub fn add(&self, other: &GradedExpr) -> GradedExpr {
        assert_eq!(self.p, other.p, "adding graded expressions over different p");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    /// Pontryagin product of graded monomials. Degrees add, so components
    /// are kept only while each factor stays below `p`.
    pub fn pont_mul(&self, other: &GradedExpr) -> GradedExpr {
        assert_eq!(self.p, other.p, "multiplying graded expressions over different p");
        let mut out = GradedExpr::zero(self.p);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                out.add_term(key, va * vb);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression serializes")
    }
}

impl Serialize for GradedExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Terms<'a>(&'a BTreeMap<Vec<u32>, Rational>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_terms(self.0, |k| k.as_slice(), s)
            }
        }
        let mut st = serializer.serialize_struct("GradedExpr", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

impl fmt::Display for GradedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.terms, |key| {
            if key.is_empty() {
                return "[0]".to_string();
            }
            runs(key)
                .into_iter()
                .map(|(s, e)| match e {
                    1 => format!("Z_({s})"),
                    e => format!("Z_({s})^{{*{e}}}"),
                })
                .collect::<Vec<_>>()
                .join("*")
        })
    }
}

// Visits every ordered tuple of even parts in [0, max] summing to `t`.
fn even_compositions(r: usize, t: u32, max: u32, visit: &mut impl FnMut(&[u32])) {
    fn go(buf: &mut Vec<u32>, left: usize, t: u32, max: u32, visit: &mut impl FnMut(&[u32])) {
        if left == 0 {
            if t == 0 {
                visit(buf);
            }
            return;
        }
        let mut s = 0;
        while s <= t.min(max) {
            buf.push(s);
            go(buf, left - 1, t - s, max, visit);
            buf.pop();
            s += 2;
        }
    }
    if t % 2 == 1 {
        return;
    }
    let mut buf = Vec::with_capacity(r);
    go(&mut buf, r, t, max, visit);
}

/// Beauville degree `t` part of `x` on a Prym of dimension `p`: each term
/// `{k_1..k_r}` contributes `prod k_j^{2+s_j}` to `Z_(s_1)*...*Z_(s_r)` for
/// every ordered split of `t` into even `s_j <= p - 1`.
pub fn graded_component(x: &TautExpr, t: u32, p: u32) -> Result<GradedExpr> {
    if p < 2 {
        return Err(Error::Domain(format!("need p >= 2, got {p}")));
    }
    let mut out = GradedExpr::zero(p);
    for (term, coeff) in x.iter() {
        let ks = term.multipliers();
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        even_compositions(ks.len(), t, p - 1, &mut |s| {
            let w = ks
                .iter()
                .zip(s)
                .fold(BigInt::one(), |a, (&k, &sj)| a * num_traits::pow(BigInt::from(k), (2 + sj) as usize));
            let mut key = s.to_vec();
            key.sort_unstable();
            *acc.entry(key).or_default() += w;
        });
        for (key, w) in acc {
            out.add_term(key, coeff * Rational::from(w));
        }
    }
    Ok(out)
}

/// Degree `t` component of `[V]` alongside `(Z^{*r})_(t)` and the per-key
/// ratios between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VComponent {
    pub t: u32,
    pub r: u32,
    pub d: u32,
    pub p: u32,
    pub component: GradedExpr,
    pub reference: GradedExpr,
    /// `component[key] / reference[key]` for every key of `reference`.
    pub ratios: BTreeMap<Vec<u32>, Rational>,
}

impl VComponent {
    /// The common ratio, if every key has the same one.
    pub fn uniform_ratio(&self) -> Option<Rational> {
        let mut it = self.ratios.values();
        let first = it.next()?;
        it.all(|x| x == first).then(|| first.clone())
    }
}

/// `[V]_(t) = 2^{-(2r+t)} (2_*[V])_(t)`, since `[V]` sits in codimension
/// `p - r`.
pub fn v_component(t: u32, r: u32, d: u32, p: u32) -> Result<VComponent> {
    check_regime(r, d)?;
    if p < r + 1 {
        return Err(Error::Domain(format!("need p >= r + 1, got p = {p}, r = {r}")));
    }
    let push = v_push_expansion(r, d)?;
    let component = graded_component(&push, t, p)?.scale(&Rational::pow2(-(2 * r as i64 + t as i64)));
    let reference = graded_component(&TautExpr::z_power(r as usize, Rational::one()), t, p)?;
    let ratios = reference
        .iter()
        .map(|(k, v)| (k.clone(), component.coeff(k) / v))
        .collect();
    Ok(VComponent {
        t,
        r,
        d,
        p,
        component,
        reference,
        ratios,
    })
}

/// Polynomial in the generators `zeta_1, zeta_3, ...`; keys are sorted
/// multisets of odd indices below `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPolynomial {
    p: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ZetaPolynomial {
    pub fn zero(p: u32) -> Self {
        ZetaPolynomial {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeff(&self, key: &[u32]) -> Rational {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Codimension when homogeneous; `zeta_n` has codimension `n`.
    pub fn codim(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression serializes")
    }
}

impl Serialize for ZetaPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Terms<'a>(&'a BTreeMap<Vec<u32>, Rational>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_terms(self.0, |k| k.as_slice(), s)
            }
        }
        let mut st = serializer.serialize_struct("ZetaPolynomial", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

impl fmt::Display for ZetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.terms, |key| {
            if key.is_empty() {
                return "1".to_string();
            }
            runs(key)
                .into_iter()
                .map(|(n, e)| match e {
                    1 => format!("zeta_{n}"),
                    e => format!("zeta_{n}^{e}"),
                })
                .collect::<Vec<_>>()
                .join("*")
        })
    }
}

/// Fourier image of a graded expression: `Z_(s_1)*...*Z_(s_r)` goes to
/// `zeta_{s_1+1} ... zeta_{s_r+1}`, and any even index or index `>= p`
/// kills the monomial.
pub fn fourier_to_zeta(x: &GradedExpr, p: u32) -> Result<ZetaPolynomial> {
    if p < 2 {
        return Err(Error::Domain(format!("need p >= 2, got {p}")));
    }
    let mut out = ZetaPolynomial::zero(p);
    for (key, coeff) in x.iter() {
        let idx: Vec<u32> = key.iter().map(|s| s + 1).collect();
        if idx.iter().any(|&n| n % 2 == 0 || n >= p) {
            continue;
        }
        add_into(&mut out.terms, idx, coeff.clone());
    }
    Ok(out)
}

/// Degrees of the generators: odd `n` with `1 <= n <= p - 1`.
pub fn zeta_generator_degrees(p: u32) -> Result<Vec<u32>> {
    if p < 2 {
        return Err(Error::Domain(format!("need p >= 2, got {p}")));
    }
    Ok((1..p).step_by(2).collect())
}

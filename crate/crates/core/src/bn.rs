//! Brill-Noether numerology for special subvarieties of Pryms.
//!
//! Only the numerical hypotheses are checked. Whether `W^r_d(C)` is reduced
//! of the expected dimension is a genericity condition that cannot be read
//! off `(g, r, d)`, so it is reported as a caveat.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `rho(g, r, d) = g - (r + 1)(g - d + r)`
pub fn rho(g: u32, r: u32, d: u32) -> i64 {
    let (g, r, d) = (g as i64, r as i64, d as i64);
    g - (r + 1) * (g - d + r)
}

/// A double cover of a genus `g` curve together with a `g^r_d` on the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymSetup {
    pub g: u32,
    pub r: u32,
    pub d: u32,
    /// Etale covers give `p = g - 1`; covers branched at two points give `p = g`.
    pub etale: bool,
}

impl PrymSetup {
    pub fn new(g: u32, r: u32, d: u32, etale: bool) -> Result<Self> {
        if g < 2 || r < 1 || d < 1 {
            return Err(Error::Domain(format!(
                "need g >= 2, r >= 1, d >= 1, got g = {g}, r = {r}, d = {d}"
            )));
        }
        Ok(PrymSetup { g, r, d, etale })
    }

    /// Dimension of the Prym variety.
    pub fn p(&self) -> u32 {
        if self.etale {
            self.g - 1
        } else {
            self.g
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `rho >= min{r+1, g-d+r}`: connectedness of `W^r_d` plus nonemptiness
    /// of `W^r_{d-1}` or `W^{r+1}_{d+1}`.
    IzadiRoute,
    /// `0 < rho < min{r+1, g-d+r}`: degeneration to a 1-nodal curve.
    WirtingerRoute,
    Inapplicable,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::IzadiRoute => "IZADI_ROUTE",
            Regime::WirtingerRoute => "WIRTINGER_ROUTE",
            Regime::Inapplicable => "INAPPLICABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub g: u32,
    pub r: u32,
    pub d: u32,
    pub p: u32,
    pub rho: i64,
    /// `0 < 2r < d < 2g`
    pub range_ok: bool,
    pub regime: Regime,
    pub notes: Vec<String>,
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g = {}, r = {}, d = {}, p = {}", self.g, self.r, self.d, self.p)?;
        writeln!(f, "rho = {}", self.rho)?;
        writeln!(f, "range 0 < 2r < d < 2g: {}", if self.range_ok { "ok" } else { "violated" })?;
        writeln!(f, "regime: {}", self.regime)?;
        for note in &self.notes {
            writeln!(f, "  - {note}")?;
        }
        Ok(())
    }
}

pub const GENERICITY_CAVEAT: &str = "assumes W^r_d(C) is reduced of dimension ρ; not checked";

/// Sorts a setup into the regime whose algebraic-equivalence argument applies.
pub fn classify(setup: &PrymSetup) -> RegimeReport {
    let PrymSetup { g, r, d, .. } = *setup;
    let rho = rho(g, r, d);
    let mut notes = Vec::new();
    let two_r_lt_d = 2 * r < d;
    let d_lt_2g = d < 2 * g;
    if !two_r_lt_d {
        notes.push("2r < d fails".to_string());
    }
    if !d_lt_2g {
        notes.push("d < 2g fails".to_string());
    }
    if rho <= 0 {
        notes.push("ρ ≤ 0".to_string());
    }
    let range_ok = two_r_lt_d && d_lt_2g;
    let bound = (r as i64 + 1).min(g as i64 - d as i64 + r as i64);
    let regime = if !range_ok || rho <= 0 {
        Regime::Inapplicable
    } else if rho >= bound {
        notes.push(format!("ρ ≥ min{{r+1, g-d+r}} = {bound}"));
        notes.push(GENERICITY_CAVEAT.to_string());
        Regime::IzadiRoute
    } else {
        notes.push(format!("0 < ρ < min{{r+1, g-d+r}} = {bound}"));
        notes.push(GENERICITY_CAVEAT.to_string());
        Regime::WirtingerRoute
    };
    RegimeReport {
        g,
        r,
        d,
        p: setup.p(),
        rho,
        range_ok,
        regime,
        notes,
    }
}

/// Common cohomology class of `V_0` and `V_1` as `(2^{d-2r-1}, g-r-1)`,
/// meaning `2^{d-2r-1} xi^{g-r-1} / (g-r-1)!`.
pub fn homological_class(g: u32, r: u32, d: u32) -> Result<(BigInt, u32)> {
    if r == 0 || 2 * r >= d || d >= 2 * g {
        return Err(Error::Domain(format!(
            "need 0 < 2r < d < 2g, got g = {g}, r = {r}, d = {d}"
        )));
    }
    Ok((BigInt::one() << (d - 2 * r - 1), g - r - 1))
}

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prym_taut::coefficients::{ClosedForm, DEFAULT_CAP};

/// An integer or an inclusive range `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn range(&self) -> RangeInclusive<u32> {
        self.start..=self.end
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let int = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("expected a nonnegative integer or a range a..b, got {s:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (int(a)?, int(b.trim_start_matches('='))?),
            None => {
                let v = int(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Span { start, end })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Pow2,
    BernoulliEven,
    FactorialScaled,
}

impl From<Expect> for ClosedForm {
    fn from(e: Expect) -> Self {
        match e {
            Expect::Pow2 => ClosedForm::Pow2,
            Expect::BernoulliEven => ClosedForm::BernoulliEven,
            Expect::FactorialScaled => ClosedForm::FactorialScaled,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "prymtaut", version, about = "Exact tautological-ring data for Prym varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest index set a single coefficient may enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true, value_parser = parse_cap)]
    pub cap: u128,
}

fn parse_cap(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("cap must be positive".into()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("invalid cap {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients c_{t,r,d}.
    Coeff {
        #[arg(long)]
        t: Span,
        #[arg(long)]
        r: Span,
        #[arg(long)]
        d: Span,
        /// Genus; enforces d < 2g.
        #[arg(long)]
        g: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Expansion of 2_*[V], or with --t its Beauville component.
    Vclass {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        t: Option<u32>,
        /// Prym dimension.
        #[arg(long, conflicts_with = "g")]
        p: Option<u32>,
        /// Genus of the base curve of an etale cover (p = g - 1).
        #[arg(long)]
        g: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Fourier image of [V] (or of [V]_(t)) in the zeta generators.
    Zeta {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, conflicts_with = "g")]
        p: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Table of c_{t,r,d} over ranges, cells with 2r >= d skipped.
    Scan {
        #[arg(long)]
        t: Span,
        #[arg(long)]
        r: Span,
        #[arg(long)]
        d: Span,
        /// Check every row against a closed form and report the first mismatch.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[command(flatten)]
        output: Output,
    },
    /// Brill-Noether numerology and regime classification.
    BnCheck {
        #[arg(long)]
        g: Span,
        #[arg(long)]
        r: Span,
        #[arg(long)]
        d: Span,
        /// Cover branched at two points (p = g) instead of etale (p = g - 1).
        #[arg(long)]
        ramified: bool,
        #[command(flatten)]
        output: Output,
    },
    /// The 2_*[V] expansion for a g^3_7.
    Example2 {
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::Coeff { output, .. }
            | Command::Vclass { output, .. }
            | Command::Zeta { output, .. }
            | Command::Scan { output, .. }
            | Command::BnCheck { output, .. }
            | Command::Example2 { output } => output,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("5".parse::<Span>().unwrap(), Span { start: 5, end: 5 });
        assert_eq!("5..100".parse::<Span>().unwrap(), Span { start: 5, end: 100 });
        assert_eq!("1..=4".parse::<Span>().unwrap(), Span { start: 1, end: 4 });
        assert!("7..3".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
        assert!("-1".parse::<Span>().is_err());
    }
}

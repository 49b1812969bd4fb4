//! Named relator families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{reduce, Letter, Rank, ReducedWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `x^k` for every generator `x`.
    Powers(u32),
    /// `a b a⁻¹ b⁻¹`.
    Commutator,
    /// `[x1, x2] [x3, x4] ⋯` on `2g` generators.
    Surface(u32),
    /// Kernel of the map sending every generator to `1 ∈ Z/2`.
    Mod2,
}

impl Preset {
    /// Rank forced by the family, if any.
    pub fn natural_rank(self) -> Option<Rank> {
        match self {
            Preset::Surface(g) => Rank::new(2 * g as usize).ok(),
            _ => None,
        }
    }

    pub fn relators(self, rank: Rank) -> Result<Vec<ReducedWord>> {
        let n = rank.get();
        let gen = |i: usize| Letter::new(i, 1).expect("generator index");
        let word = |ls: Vec<Letter>| reduce(rank, &ls);
        match self {
            Preset::Powers(k) => {
                if k < 1 {
                    return Err(Error::InvalidInput("powers preset needs k >= 1".into()));
                }
                (1..=n).map(|i| word(vec![gen(i); k as usize])).collect()
            }
            Preset::Commutator => {
                let (a, b) = (gen(1), gen(2));
                Ok(vec![word(vec![a, b, a.inverse(), b.inverse()])?])
            }
            Preset::Surface(g) => {
                if g < 1 || 2 * g as usize != n {
                    return Err(Error::InvalidInput(format!(
                        "surface preset of genus {g} needs rank {}",
                        2 * g
                    )));
                }
                let mut ls = Vec::new();
                for j in 0..g as usize {
                    let (x, y) = (gen(2 * j + 1), gen(2 * j + 2));
                    ls.extend([x, y, x.inverse(), y.inverse()]);
                }
                Ok(vec![word(ls)?])
            }
            Preset::Mod2 => {
                let a = gen(1);
                let mut out = vec![word(vec![a, a])?];
                for i in 2..=n {
                    out.push(word(vec![a, gen(i).inverse()])?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Powers(k) => write!(f, "powers {k}"),
            Preset::Commutator => write!(f, "commutator"),
            Preset::Surface(g) => write!(f, "surface {g}"),
            Preset::Mod2 => write!(f, "mod2"),
        }
    }
}

/// Accepts `powers 6`, `powers:6`, `powers=6`, `commutator`, `surface 2`,
/// `mod2`.
impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s
            .split(|c: char| c.is_whitespace() || c == ':' || c == '=')
            .filter(|p| !p.is_empty());
        let name = parts.next().unwrap_or("").to_ascii_lowercase();
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(Error::InvalidInput(format!("unknown preset '{s}'")));
        }
        let num = |what: &str| -> Result<u32> {
            arg.ok_or_else(|| Error::InvalidInput(format!("preset {what} needs a parameter")))?
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad parameter in preset '{s}'")))
        };
        match (name.as_str(), arg) {
            ("powers", _) => Ok(Preset::Powers(num("powers")?)),
            ("surface", _) => Ok(Preset::Surface(num("surface")?)),
            ("commutator", None) => Ok(Preset::Commutator),
            ("mod2", None) => Ok(Preset::Mod2),
            _ => Err(Error::InvalidInput(format!("unknown preset '{s}'"))),
        }
    }
}

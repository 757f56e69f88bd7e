//! h⁰ bookkeeping on a general smooth fiber E.
//!
//! I_n is the Atiyah bundle of rank n. Rules used:
//! h⁰(λ ⊗ I_n) = n·deg λ for deg λ > 0, 0 for deg λ < 0, and for
//! deg λ = 0 it is 1 if λ is trivial, else 0.
//! I_m ⊗ I_n = ⊕_{j=0}^{min(m,n)-1} I_{m+n-1-2j}, and End(I_r) = I_r ⊗ I_r.
//! Ω_X restricted to E is I_2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberBundleDesc {
    /// λ₁ ⊕ … ⊕ λ_r, pairwise distinct degree-zero line bundles.
    DistinctLineBundles { r: u32 },
    /// The Atiyah bundle I_r.
    Atiyah { r: u32 },
    /// ℓ ⊕ ℓ⁻¹ with deg ℓ = ell_deg > 0.
    SplitPair { ell_deg: i64 },
}

impl FiberBundleDesc {
    pub fn rank(&self) -> u32 {
        match self {
            FiberBundleDesc::DistinctLineBundles { r } | FiberBundleDesc::Atiyah { r } => *r,
            FiberBundleDesc::SplitPair { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FiberBundleDesc::DistinctLineBundles { r } | FiberBundleDesc::Atiyah { r } if *r < 1 => {
                Err(Error::domain("fiber bundle rank must be at least 1"))
            }
            FiberBundleDesc::SplitPair { ell_deg } if *ell_deg <= 0 => {
                Err(Error::domain("split pair needs a line bundle of positive degree"))
            }
            _ => Ok(()),
        }
    }
}

/// h⁰(E, λ ⊗ I_n).
pub fn atiyah_h0(n: u32, deg: i64, trivial: bool) -> Result<i64> {
    if n < 1 {
        return Err(Error::domain("Atiyah bundle rank must be at least 1"));
    }
    Ok(match deg {
        d if d > 0 => n as i64 * d,
        d if d < 0 => 0,
        _ => i64::from(trivial),
    })
}

/// Summand of End(V)|_E: a line bundle of fiber degree `deg` tensored with I_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Piece {
    deg: i64,
    trivial: bool,
    n: u32,
}

fn atiyah_product(m: u32, n: u32) -> Vec<u32> {
    (0..m.min(n)).map(|j| m + n - 1 - 2 * j).collect()
}

fn end_pieces(desc: &FiberBundleDesc) -> Vec<Piece> {
    match *desc {
        FiberBundleDesc::DistinctLineBundles { r } => {
            let mut out = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    out.push(Piece {
                        deg: 0,
                        trivial: i == j,
                        n: 1,
                    });
                }
            }
            out
        }
        FiberBundleDesc::Atiyah { r } => atiyah_product(r, r)
            .into_iter()
            .map(|n| Piece {
                deg: 0,
                trivial: true,
                n,
            })
            .collect(),
        FiberBundleDesc::SplitPair { ell_deg } => [2 * ell_deg, 0, 0, -2 * ell_deg]
            .into_iter()
            .map(|deg| Piece {
                deg,
                trivial: deg == 0,
                n: 1,
            })
            .collect(),
    }
}

fn h0_pieces(pieces: &[Piece], twist: u32) -> Result<i64> {
    let mut total = 0;
    for p in pieces {
        for n in atiyah_product(p.n, twist) {
            total += atiyah_h0(n, p.deg, p.trivial)?;
        }
    }
    Ok(total)
}

/// Ranks of π★(End V ⊗ π★ω_B) and π★(End V ⊗ Ω_X).
pub fn rank_pushforward_end_twists(desc: &FiberBundleDesc) -> Result<(i64, i64)> {
    desc.validate()?;
    let pieces = end_pieces(desc);
    Ok((h0_pieces(&pieces, 1)?, h0_pieces(&pieces, 2)?))
}

/// Whether a computed cell is quoted directly or derived from the rules above.
pub fn is_quoted_cell(desc: &FiberBundleDesc) -> bool {
    matches!(
        desc,
        FiberBundleDesc::SplitPair { ell_deg: 1 }
            | FiberBundleDesc::Atiyah { r: 2 }
            | FiberBundleDesc::DistinctLineBundles { .. }
    )
}

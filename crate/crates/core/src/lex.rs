//! Lexicographic rank/unrank and the counting functions `k`, `q`, `sigma`
//! over initial lex segments of `S(n,m)`.
//!
//! Ranks are 1-based: the lex `ell`-segment is the set of vertices with rank
//! `1..=ell`, i.e. indices `0..ell`.

use serde::{Deserialize, Serialize};

use crate::error::{EipError, Result};
use crate::graph::{GraphParams, Vertex};

/// A 1-based lexicographic rank in `[1, m^n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LexRank(u64);

impl LexRank {
    pub fn new(r: u64, p: &GraphParams) -> Result<Self> {
        if r == 0 || r > p.order() {
            return Err(EipError::RankOutOfRange {
                rank: r,
                max: p.order(),
            });
        }
        Ok(LexRank(r))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// `ell = k m^(n-1) + ell'` with `0 <= ell' < m^(n-1)`, except `ell = m^n`
/// which splits as `(m, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub k: u64,
    pub ell_prime: u64,
}

pub fn lex_rank(v: &Vertex, p: &GraphParams) -> LexRank {
    LexRank(1 + v.index(p))
}

pub fn lex_unrank(r: LexRank, p: &GraphParams) -> Result<Vertex> {
    if r.0 == 0 || r.0 > p.order() {
        return Err(EipError::RankOutOfRange {
            rank: r.0,
            max: p.order(),
        });
    }
    Vertex::from_index(r.0 - 1, p)
}

fn check_ell(p: &GraphParams, ell: u64) -> Result<()> {
    if ell > p.order() {
        Err(EipError::EllOutOfRange {
            ell,
            max: p.order(),
        })
    } else {
        Ok(())
    }
}

fn need_positive_n(p: &GraphParams) -> Result<()> {
    if p.n() == 0 {
        Err(EipError::InvalidParams {
            n: 0,
            m: p.m(),
            reason: "operation needs n >= 1".into(),
        })
    } else {
        Ok(())
    }
}

/// Number of full top-level copies in the lex `ell`-segment.
pub fn k_of(p: &GraphParams, ell: u64) -> Result<u64> {
    need_positive_n(p)?;
    check_ell(p, ell)?;
    Ok(ell / p.copy_size())
}

pub fn split(p: &GraphParams, ell: u64) -> Result<SplitResult> {
    let k = k_of(p, ell)?;
    Ok(SplitResult {
        k,
        ell_prime: ell - k * p.copy_size(),
    })
}

/// Number of corners in the lex `ell`-segment:
/// `1 + floor((ell-1)(m-1)/(m^n-1))` for `ell >= 1`, and 0 for `ell = 0` or
/// `n = 0`.
pub fn q_of(p: &GraphParams, ell: u64) -> Result<u64> {
    check_ell(p, ell)?;
    if p.n() == 0 || ell == 0 {
        return Ok(0);
    }
    let num = (ell as u128 - 1) * (p.m() as u128 - 1);
    Ok(1 + (num / (p.order() as u128 - 1)) as u64)
}

/// The corner correction `sigma(ell_a, ell_b)` for `0 <= ell_b <= ell_a <= m^n`.
pub fn sigma(p: &GraphParams, ell_a: u64, ell_b: u64) -> Result<i64> {
    check_ell(p, ell_a)?;
    if ell_b > ell_a {
        return Err(EipError::Ordering {
            lo: ell_b,
            hi: ell_a,
        });
    }
    LexArith::new(p).map(|a| a.sigma(ell_a, ell_b))
}

/// Both branches of `sigma`, or `None` for a branch whose argument leaves
/// `[0, m^n]`.
pub fn sigma_branches(p: &GraphParams, ell_a: u64, ell_b: u64) -> (Option<i64>, Option<i64>) {
    let n = p.order();
    let q = |x: u64| q_of(p, x).unwrap() as i64;
    let m = p.m() as i64;
    let below = (ell_a + ell_b <= n).then(|| q(ell_b) + q(ell_a + ell_b) - q(ell_a));
    let above = (ell_a + ell_b >= n).then(|| q(ell_b) - q(ell_a + ell_b - n) + m - q(ell_a));
    (below, above)
}

/// Precomputed constants for tight loops over one `(n, m)`. All methods
/// assume their arguments are in range.
#[derive(Debug, Clone, Copy)]
pub struct LexArith {
    pub order: u64,
    pub copy: u64,
    pub m: u64,
    /// `(m^n - 1)/(m - 1)`, the rank gap between consecutive corners.
    step: u64,
}

impl LexArith {
    pub fn new(p: &GraphParams) -> Result<Self> {
        let m = p.m() as u64;
        Ok(LexArith {
            order: p.order(),
            copy: p.copy_size(),
            m,
            step: if p.n() == 0 {
                0
            } else {
                (p.order() - 1) / (m - 1)
            },
        })
    }

    #[inline]
    pub fn k(&self, ell: u64) -> u64 {
        ell / self.copy
    }

    #[inline]
    pub fn split(&self, ell: u64) -> (u64, u64) {
        let k = ell / self.copy;
        (k, ell - k * self.copy)
    }

    #[inline]
    pub fn q(&self, ell: u64) -> u64 {
        if ell == 0 || self.step == 0 {
            0
        } else {
            1 + (ell - 1) / self.step
        }
    }

    #[inline]
    pub fn sigma(&self, ell_a: u64, ell_b: u64) -> i64 {
        let q = |x| self.q(x) as i64;
        if ell_a + ell_b < self.order {
            q(ell_b) + q(ell_a + ell_b) - q(ell_a)
        } else {
            q(ell_b) - q(ell_a + ell_b - self.order) + self.m as i64 - q(ell_a)
        }
    }
}

//! Edge boundaries of vertex sets and the isoperimetric profile of lex
//! segments, computed three ways: the level recurrence, direct counting on
//! each segment, and exhaustive search over all `ell`-subsets.

use std::collections::HashMap;
use std::io::{self, Write};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EipError, Result};
use crate::graph::{Decoration, GraphParams, LabelClass};
use crate::lex::LexArith;
use crate::ENUM_CAP;

/// Largest vertex count accepted by the exhaustive subset search.
pub const BRUTE_CAP: u64 = 24;

/// Above this order `theta` scans member neighbourhoods instead of edges.
const EDGE_SCAN_LIMIT: u64 = 1 << 16;

/// Dense membership over the `m^n` vertices of one graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    order: u64,
    words: Vec<u64>,
    size: u64,
}

impl VertexSet {
    pub fn empty(order: u64) -> Self {
        VertexSet {
            order,
            words: vec![0; order.div_ceil(64) as usize],
            size: 0,
        }
    }

    pub fn full(order: u64) -> Self {
        let mut s = Self::empty(order);
        s.insert_range(0, order);
        s
    }

    /// Vertices with lex rank `1..=ell`.
    pub fn lex_segment(order: u64, ell: u64) -> Self {
        let mut s = Self::empty(order);
        s.insert_range(0, ell.min(order));
        s
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(order: u64, it: I) -> Self {
        let mut s = Self::empty(order);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        v < self.order && self.words[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    /// Returns whether `v` was newly added.
    pub fn insert(&mut self, v: u64) -> bool {
        assert!(v < self.order, "vertex {v} out of range");
        let w = &mut self.words[(v >> 6) as usize];
        let bit = 1u64 << (v & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.size += fresh as u64;
        fresh
    }

    /// Returns whether `v` was present.
    pub fn remove(&mut self, v: u64) -> bool {
        if v >= self.order {
            return false;
        }
        let w = &mut self.words[(v >> 6) as usize];
        let bit = 1u64 << (v & 63);
        let had = *w & bit != 0;
        *w &= !bit;
        self.size -= had as u64;
        had
    }

    pub fn insert_range(&mut self, lo: u64, hi: u64) {
        for v in lo..hi {
            self.insert(v);
        }
    }

    pub fn remove_range(&mut self, lo: u64, hi: u64) {
        for v in lo..hi {
            self.remove(v);
        }
    }

    /// Number of members with index in `lo..hi`.
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        (lo..hi).filter(|&v| self.contains(v)).count() as u64
    }

    pub fn complement(&self) -> Self {
        let mut c = Self::full(self.order);
        for v in self.iter() {
            c.remove(v);
        }
        c
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + b)
            })
        })
    }

    /// Whether this is the lex segment of its own size.
    pub fn is_lex_segment(&self) -> bool {
        self.count_range(0, self.size) == self.size
    }
}

/// `|Θ(S)|`: edges with exactly one endpoint in `S`.
pub fn theta(s: &VertexSet, p: &GraphParams) -> u64 {
    assert_eq!(s.order(), p.order(), "vertex set belongs to another graph");
    if p.order() <= EDGE_SCAN_LIMIT {
        p.edge_indices()
            .filter(|&(a, b)| s.contains(a) != s.contains(b))
            .count() as u64
    } else {
        let mut buf = Vec::with_capacity(p.m() as usize + 1);
        s.iter()
            .map(|v| {
                buf.clear();
                p.neighbors_into(v, &mut buf);
                buf.iter().filter(|&&w| !s.contains(w)).count() as u64
            })
            .sum()
    }
}

/// Cut exterior edges of `S_{s,t}(n,m)`: one for each `I`-corner outside `S`
/// and each `K`-corner inside `S`.
pub fn exterior_cut(s: &VertexSet, p: &GraphParams, d: &Decoration) -> u64 {
    if p.n() == 0 {
        return 0;
    }
    (0..p.m())
        .filter(|&i| {
            let inside = s.contains(p.corner_index(i));
            match d.class(i) {
                LabelClass::In => !inside,
                LabelClass::Neutral => false,
                LabelClass::Out => inside,
            }
        })
        .count() as u64
}

/// `|Θ_{s,t}(S)|` on the decorated graph.
pub fn theta_decorated(s: &VertexSet, p: &GraphParams, d: &Decoration) -> Result<u64> {
    d.validate(p.m())?;
    Ok(theta(s, p) + exterior_cut(s, p, d))
}

/// Boundary of the lex `ell`-segment, counted directly.
pub fn profile_direct(p: &GraphParams, ell: u64) -> Result<u64> {
    p.ensure_order_at_most(ENUM_CAP, "direct profile")?;
    if ell > p.order() {
        return Err(EipError::EllOutOfRange {
            ell,
            max: p.order(),
        });
    }
    Ok(theta(&VertexSet::lex_segment(p.order(), ell), p))
}

/// Which form of the corner term the level recurrence uses when the partial
/// copy holds more corners than there are full copies (`q > k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CornerBranch {
    /// `q - 2k`.
    Printed,
    /// `q - 2k - 1`: the partial copy's own corner `k^(n-1)` carries no
    /// inter-copy edge.
    Corrected,
}

impl CornerBranch {
    pub const ALL: [CornerBranch; 2] = [CornerBranch::Printed, CornerBranch::Corrected];

    #[inline]
    pub fn term(self, q: u64, k: u64) -> i64 {
        let (q, k) = (q as i64, k as i64);
        if q <= k {
            -q
        } else {
            match self {
                CornerBranch::Printed => q - 2 * k,
                CornerBranch::Corrected => q - 2 * k - 1,
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CornerBranch::Printed => "printed",
            CornerBranch::Corrected => "corrected",
        }
    }
}

/// `values[ell] = |Θ|(n,m;ell)` for `ell = 0..=m^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub n: u32,
    pub m: u32,
    pub values: Vec<u32>,
}

impl ProfileTable {
    pub fn params(&self) -> GraphParams {
        GraphParams::new(self.n, self.m).expect("table built from valid params")
    }

    #[inline]
    pub fn get(&self, ell: u64) -> u32 {
        self.values[ell as usize]
    }

    pub fn order(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// The one-vertex graph `S(0,m)`.
    pub fn base(m: u32) -> Self {
        ProfileTable {
            n: 0,
            m,
            values: vec![0, 0],
        }
    }

    /// Lex segment boundaries by adding vertices in rank order: vertex `v`
    /// changes the boundary by `deg(v) - 2 |N(v) ∩ [0, v)|`.
    pub fn direct(p: &GraphParams) -> Result<Self> {
        p.ensure_order_at_most(ENUM_CAP, "direct profile table")?;
        let mut values = Vec::with_capacity(p.order() as usize + 1);
        let mut cur: i64 = 0;
        values.push(0);
        let mut buf = Vec::with_capacity(p.m() as usize + 1);
        for v in 0..p.order() {
            buf.clear();
            p.neighbors_into(v, &mut buf);
            let back = buf.iter().filter(|&&w| w < v).count() as i64;
            cur += buf.len() as i64 - 2 * back;
            values.push(cur as u32);
        }
        Ok(ProfileTable {
            n: p.n(),
            m: p.m(),
            values,
        })
    }

    /// One level of the recurrence:
    /// `|Θ|(n;ell) = k(m-k) + |Θ|(n-1;ell') + corner(q_{n-1}(ell'), k)`.
    pub fn recurrence_step(prev: &ProfileTable, branch: CornerBranch) -> Result<Self> {
        let p = GraphParams::new(prev.n + 1, prev.m)?;
        p.ensure_order_at_most(ENUM_CAP, "recurrence table")?;
        let arith = LexArith::new(&p)?;
        let sub = LexArith::new(&GraphParams::new(prev.n, prev.m)?)?;
        let m = p.m() as i64;
        let values = (0..=p.order())
            .map(|ell| {
                let (k, rest) = arith.split(ell);
                let ki = k as i64;
                let v = ki * (m - ki) + prev.get(rest) as i64 + branch.term(sub.q(rest), k);
                u32::try_from(v).map_err(|_| EipError::BranchSelection)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProfileTable {
            n: p.n(),
            m: p.m(),
            values,
        })
    }

    /// Full recurrence from `S(0,m)` up to `p`.
    pub fn recurrence_with(p: &GraphParams, branch: CornerBranch) -> Result<Self> {
        p.ensure_order_at_most(ENUM_CAP, "recurrence table")?;
        let mut t = ProfileTable::base(p.m());
        for _ in 0..p.n() {
            t = ProfileTable::recurrence_step(&t, branch)?;
        }
        Ok(t)
    }

    /// Exhaustive minimum over all `ell`-subsets for every `ell`.
    pub fn bruteforce(p: &GraphParams) -> Result<Self> {
        let values = (0..=p.order())
            .map(|ell| profile_bruteforce(p, ell).map(|v| v as u32))
            .collect::<Result<_>>()?;
        Ok(ProfileTable {
            n: p.n(),
            m: p.m(),
            values,
        })
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "ell,theta")?;
        for (ell, v) in self.values.iter().enumerate() {
            writeln!(out, "{ell},{v}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "m": self.m, "values": self.values })
    }
}

/// The profile table by the recurrence, using the oracle-validated corner
/// branch.
pub fn profile_recurrence(p: &GraphParams) -> Result<ProfileTable> {
    ProfileTable::recurrence_with(p, CornerBranch::Corrected)
}

/// Recurrence tables cached per `(n, m)` and built bottom-up.
#[derive(Debug, Default)]
pub struct ProfileCache {
    tables: Mutex<HashMap<(u32, u32), Arc<ProfileTable>>>,
}

impl ProfileCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: &GraphParams) -> Result<Arc<ProfileTable>> {
        p.ensure_order_at_most(ENUM_CAP, "recurrence table")?;
        let key = (p.n(), p.m());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        let t = match p.sub() {
            None => Arc::new(ProfileTable::base(p.m())),
            Some(sub) => {
                let prev = self.get(&sub)?;
                Arc::new(ProfileTable::recurrence_step(
                    &prev,
                    CornerBranch::Corrected,
                )?)
            }
        };
        self.tables.lock().unwrap().insert(key, Arc::clone(&t));
        Ok(t)
    }
}

/// Per-instance outcome of comparing both corner branches with the direct
/// table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCheck {
    pub n: u32,
    pub m: u32,
    pub printed_matches: bool,
    pub corrected_matches: bool,
}

/// Every `(n, m)` with `n >= 1` and `m^n <= max_order`.
pub fn instances_up_to(max_order: u64) -> Vec<GraphParams> {
    let mut out = Vec::new();
    for m in 2..=crate::graph::MAX_M {
        let mut n = 1;
        while let Ok(p) = GraphParams::new(n, m) {
            if p.order() > max_order {
                break;
            }
            out.push(p);
            n += 1;
        }
    }
    out
}

/// Compares each corner branch with [`ProfileTable::direct`] on every
/// instance with `m^n <= max_order` and returns the branch that matches all
/// of them, together with the per-instance record. Fails if neither branch
/// matches uniformly.
pub fn select_corner_branch(max_order: u64) -> Result<(CornerBranch, Vec<BranchCheck>)> {
    let checks = instances_up_to(max_order)
        .into_iter()
        .map(|p| {
            let direct = ProfileTable::direct(&p)?;
            let matches = |b| {
                ProfileTable::recurrence_with(&p, b)
                    .map(|t| t.values == direct.values)
                    .unwrap_or(false)
            };
            Ok(BranchCheck {
                n: p.n(),
                m: p.m(),
                printed_matches: matches(CornerBranch::Printed),
                corrected_matches: matches(CornerBranch::Corrected),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let branch = if checks.iter().all(|c| c.corrected_matches) {
        CornerBranch::Corrected
    } else if checks.iter().all(|c| c.printed_matches) {
        CornerBranch::Printed
    } else {
        return Err(EipError::BranchSelection);
    };
    Ok((branch, checks))
}

/// Adjacency bitmasks for graphs with at most 64 vertices.
fn adjacency_masks(p: &GraphParams) -> Vec<u64> {
    (0..p.order())
        .map(|v| p.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
        .collect()
}

#[inline]
fn mask_theta(adj: &[u64], set: u64) -> u32 {
    let mut rest = set;
    let mut cut = 0;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        cut += (adj[v] & !set).count_ones();
    }
    cut
}

/// Minimum of `mask_theta` over subsets of size `r` of the low `h` bits,
/// each joined with `extra`. Gosper's hack walks the subsets in order.
fn min_over_subsets(adj: &[u64], h: u32, r: u32, extra: u64) -> u32 {
    if r == 0 {
        return mask_theta(adj, extra);
    }
    let limit = 1u64 << h;
    let mut x = (1u64 << r) - 1;
    let mut best = u32::MAX;
    while x < limit {
        best = best.min(mask_theta(adj, x | extra));
        let c = x & x.wrapping_neg();
        let rr = x + c;
        x = (((rr ^ x) >> 2) / c) | rr;
    }
    best
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Exhaustive `min |Θ(S)|` over `ell`-subsets, for at most 64 vertices and at
/// most `max_subsets` subsets. The search is split by the highest member.
pub fn bruteforce_min(p: &GraphParams, ell: u64, max_subsets: u128) -> Result<u64> {
    let order = p.order();
    p.ensure_order_at_most(64, "subset search")?;
    if ell > order {
        return Err(EipError::EllOutOfRange { ell, max: order });
    }
    let count = binomial(order, ell);
    if count > max_subsets {
        return Err(EipError::TooLarge {
            what: "subset count",
            size: count.min(u64::MAX as u128) as u64,
            cap: max_subsets.min(u64::MAX as u128) as u64,
        });
    }
    if ell == 0 || ell == order {
        return Ok(0);
    }
    let adj = adjacency_masks(p);
    let r = (ell - 1) as u32;
    let best = (r..order as u32)
        .into_par_iter()
        .map(|top| min_over_subsets(&adj, top, r, 1u64 << top))
        .min()
        .unwrap_or(0);
    Ok(best as u64)
}

/// `min{|Θ(S)| : |S| = ell}` by exhaustive enumeration (`m^n <= 24`).
pub fn profile_bruteforce(p: &GraphParams, ell: u64) -> Result<u64> {
    p.ensure_order_at_most(BRUTE_CAP, "brute-force profile")?;
    bruteforce_min(p, ell, u128::MAX)
}

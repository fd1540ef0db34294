//! Steiner operations on decorated Sierpinski graphs `S_{s,t}(n,m)`.
//!
//! `S(n,m)` is `m` copies `{h} x S(n-1,m)`; the corner `h j^(n-1)` of copy
//! `h` is joined to the corner `j h^(n-1)` of copy `j`. Seen from inside copy
//! `h`, each such inter-copy edge behaves like an exterior edge whose far end
//! is either in the set (label `j` acts like `I`) or not (like `K`), while the
//! global corner `h^n` keeps its class from the decoration. Relabelling the
//! trailing digits so that `I`-like labels come first, then `J`-like, then
//! `K`-like (each block in its original order) gives the local order `Lex_h`.

use serde::{Deserialize, Serialize};

use crate::boundary::{theta_decorated, VertexSet};
use crate::error::{EipError, Result};
use crate::graph::{Decoration, GraphParams, LabelClass};

/// Occupancy `(ell_0, .., ell_{m-1})` of the top-level copies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EllVector(pub Vec<u64>);

impl EllVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

fn need_copies(p: &GraphParams) -> Result<()> {
    if p.n() == 0 {
        return Err(EipError::InvalidParams {
            n: 0,
            m: p.m(),
            reason: "S(0,m) has no copies".into(),
        });
    }
    Ok(())
}

fn check_copy(p: &GraphParams, h: u32) -> Result<()> {
    need_copies(p)?;
    if h >= p.m() {
        return Err(EipError::InvalidCopy { h, m: p.m() });
    }
    Ok(())
}

pub fn ell_vector(s: &VertexSet, p: &GraphParams) -> Result<EllVector> {
    need_copies(p)?;
    let c = p.copy_size();
    Ok(EllVector(
        (0..p.m() as u64)
            .map(|h| s.count_range(h * c, (h + 1) * c))
            .collect(),
    ))
}

/// Classification of the labels of copy `h` and the resulting relabelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalOrder {
    pub h: u32,
    pub classes: Vec<LabelClass>,
    /// `perm[j]` is the new label of original label `j`.
    pub perm: Vec<u8>,
}

impl LocalOrder {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &x)| j == x as usize)
    }

    pub fn inverse(&self) -> Vec<u8> {
        let mut inv = vec![0u8; self.perm.len()];
        for (j, &x) in self.perm.iter().enumerate() {
            inv[x as usize] = j as u8;
        }
        inv
    }
}

/// Index of the corner `j^(n-1)` inside one copy.
fn sub_corner(p: &GraphParams, j: u64) -> u64 {
    let c = p.copy_size();
    if c <= 1 {
        0
    } else {
        j * ((c - 1) / (p.m() as u64 - 1))
    }
}

pub fn local_order(s: &VertexSet, p: &GraphParams, d: &Decoration, h: u32) -> Result<LocalOrder> {
    check_copy(p, h)?;
    d.validate(p.m())?;
    let c = p.copy_size();
    let classes: Vec<LabelClass> = (0..p.m())
        .map(|j| {
            if j == h {
                d.class(h)
            } else if s.contains(j as u64 * c + sub_corner(p, h as u64)) {
                LabelClass::In
            } else {
                LabelClass::Out
            }
        })
        .collect();
    let mut order: Vec<u32> = (0..p.m()).collect();
    order.sort_by_key(|&j| classes[j as usize]);
    let mut perm = vec![0u8; p.m() as usize];
    for (new, &j) in order.iter().enumerate() {
        perm[j as usize] = new as u8;
    }
    Ok(LocalOrder { h, classes, perm })
}

/// Original indices of the first `len` vertices of copy `h` under `Lex_h`.
fn local_segment(p: &GraphParams, order: &LocalOrder, len: u64) -> impl Iterator<Item = u64> {
    let inv = order.inverse();
    let m = p.m() as u64;
    let digits = p.n() - 1;
    let base = order.h as u64 * p.copy_size();
    (0..len).map(move |r| {
        let mut x = r;
        let mut pow = 1u64;
        let mut orig = 0u64;
        for _ in 0..digits {
            orig += inv[(x % m) as usize] as u64 * pow;
            x /= m;
            pow *= m;
        }
        base + orig
    })
}

fn refill(s: &mut VertexSet, p: &GraphParams, d: &Decoration, h: u32, len: u64) -> Result<()> {
    let c = p.copy_size();
    let lo = h as u64 * c;
    s.remove_range(lo, lo + c);
    let order = local_order(s, p, d, h)?;
    for v in local_segment(p, &order, len) {
        s.insert(v);
    }
    Ok(())
}

/// Replaces the content of copy `h` by the initial `Lex_h` segment of the
/// same size.
pub fn compress_h(s: &VertexSet, p: &GraphParams, d: &Decoration, h: u32) -> Result<VertexSet> {
    check_copy(p, h)?;
    d.validate(p.m())?;
    let c = p.copy_size();
    let len = s.count_range(h as u64 * c, (h as u64 + 1) * c);
    let mut out = s.clone();
    refill(&mut out, p, d, h, len)?;
    Ok(out)
}

/// Whether `s` is a fixed point of every `compress_h`.
pub fn is_compressed(s: &VertexSet, p: &GraphParams, d: &Decoration) -> Result<bool> {
    for h in 0..p.m() {
        if compress_h(s, p, d, h)? != *s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies `compress_h` for `h = 0, 1, .. (mod m)` until `m` consecutive
/// applications change nothing.
pub fn compress_inf(s: &VertexSet, p: &GraphParams, d: &Decoration) -> Result<VertexSet> {
    need_copies(p)?;
    d.validate(p.m())?;
    let m = p.m() as u64;
    let max_cycles = m * p.order();
    let mut cur = s.clone();
    let mut unchanged = 0u64;
    let mut applied = 0u64;
    let mut h = 0u32;
    while unchanged < m {
        if applied >= max_cycles * m {
            return Err(EipError::IterationBound(max_cycles));
        }
        let next = compress_h(&cur, p, d, h)?;
        if next == cur {
            unchanged += 1;
        } else {
            unchanged = 0;
            cur = next;
        }
        applied += 1;
        h = (h + 1) % p.m();
    }
    Ok(cur)
}

/// Moves content from the last occupied copy into the first non-full copy.
///
/// With `h_min` the first copy that is not full and `h_max` the last
/// non-empty copy: if their contents fit in one copy, `h_max` is emptied and
/// `h_min` refilled with the combined amount; otherwise `h_min` is filled and
/// the remainder stays in `h_max`. Refilled copies take the initial segment
/// of their local order, evaluated after the other copy has been updated.
pub fn subadd(s: &VertexSet, p: &GraphParams, d: &Decoration) -> Result<VertexSet> {
    need_copies(p)?;
    d.validate(p.m())?;
    if !is_compressed(s, p, d)? {
        return Err(EipError::NotCompressed);
    }
    let c = p.copy_size();
    let ev = ell_vector(s, p)?.0;
    let h_min = ev.iter().position(|&x| x < c);
    let h_max = ev.iter().rposition(|&x| x > 0);
    let (h_min, h_max) = match (h_min, h_max) {
        (Some(a), Some(b)) if a < b => (a as u32, b as u32),
        (a, b) => {
            return Err(EipError::AlreadyCanonical {
                h_min: a.map_or(p.m(), |x| x as u32),
                h_max: b.map_or(0, |x| x as u32),
            })
        }
    };
    let (a, b) = (ev[h_min as usize], ev[h_max as usize]);
    let mut out = s.clone();
    if a + b <= c {
        let lo = h_max as u64 * c;
        out.remove_range(lo, lo + c);
        refill(&mut out, p, d, h_min, a + b)?;
    } else {
        let lo = h_min as u64 * c;
        out.insert_range(lo, lo + c);
        refill(&mut out, p, d, h_max, b - (c - a))?;
    }
    Ok(out)
}

/// One record per intermediate set of [`reduce_to_lex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub op: String,
    pub ell_vector: Vec<u64>,
    pub theta: u64,
}

/// Alternates `compress_inf` and `subadd` until the lex segment of the same
/// size is reached. Returns the final set and the trace, starting with the
/// input.
pub fn reduce_to_lex(
    s: &VertexSet,
    p: &GraphParams,
    d: &Decoration,
) -> Result<(VertexSet, Vec<ReductionStep>)> {
    need_copies(p)?;
    let record = |op: &str, x: &VertexSet| -> Result<ReductionStep> {
        Ok(ReductionStep {
            op: op.to_string(),
            ell_vector: ell_vector(x, p)?.0,
            theta: theta_decorated(x, p, d)?,
        })
    };
    let mut trace = vec![record("input", s)?];
    let mut cur = s.clone();
    let bound = p.order() * p.m() as u64 + 1;
    for _ in 0..bound {
        cur = compress_inf(&cur, p, d)?;
        trace.push(record("compress", &cur)?);
        if cur.is_lex_segment() {
            return Ok((cur, trace));
        }
        cur = subadd(&cur, p, d)?;
        trace.push(record("subadd", &cur)?);
    }
    Err(EipError::IterationBound(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::theta;
    use crate::graph::Vertex;

    fn p(n: u32, m: u32) -> GraphParams {
        GraphParams::new(n, m).unwrap()
    }

    fn set(g: &GraphParams, vs: &[&str]) -> VertexSet {
        VertexSet::from_indices(
            g.order(),
            vs.iter().map(|s| Vertex::parse(s, g).unwrap().index(g)),
        )
    }

    fn names(g: &GraphParams, s: &VertexSet) -> Vec<String> {
        s.iter()
            .map(|v| Vertex::from_index(v, g).unwrap().format(g.m()))
            .collect()
    }

    #[test]
    fn ell_vector_examples() {
        let g = p(2, 3);
        let seg = VertexSet::lex_segment(9, 5);
        assert_eq!(ell_vector(&seg, &g).unwrap().0, [3, 2, 0]);
        assert_eq!(ell_vector(&VertexSet::empty(9), &g).unwrap().0, [0, 0, 0]);
        let s = set(&g, &["00", "01", "11"]);
        assert_eq!(ell_vector(&s, &g).unwrap().0, [2, 1, 0]);
        assert!(ell_vector(&VertexSet::empty(1), &p(0, 3)).is_err());
    }

    #[test]
    fn local_order_examples() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = set(&g, &["00", "01", "11"]);
        let o = local_order(&s, &g, &d, 1).unwrap();
        assert_eq!(
            o.classes,
            [LabelClass::In, LabelClass::Neutral, LabelClass::Out]
        );
        assert!(o.is_identity());

        let s = set(&g, &["00", "01", "02", "20"]);
        let o = local_order(&s, &g, &d, 1).unwrap();
        assert_eq!(o.classes[0], LabelClass::In);
        assert_eq!(o.classes[2], LabelClass::Out);
        assert!(o.is_identity());

        assert!(matches!(
            local_order(&s, &g, &d, 3),
            Err(EipError::InvalidCopy { .. })
        ));
    }

    #[test]
    fn local_order_moves_in_labels_first() {
        // Copy 0 of S(2,3): partner of corner 02 is 20 (in S), partner of
        // corner 01 is 10 (not in S).
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = set(&g, &["20"]);
        let o = local_order(&s, &g, &d, 0).unwrap();
        assert_eq!(
            o.classes,
            [LabelClass::Neutral, LabelClass::Out, LabelClass::In]
        );
        assert_eq!(o.perm, [1, 2, 0]);
        // Lex_0 starts with the trailing digit relabelled to 0, i.e. 02.
        let c = compress_h(&set(&g, &["00", "20"]), &g, &d, 0).unwrap();
        assert_eq!(names(&g, &c), ["02", "20"]);
    }

    #[test]
    fn lex_segments_have_identity_orders() {
        for (n, m) in [(2, 3), (3, 3), (2, 4), (3, 2)] {
            let g = p(n, m);
            for d in Decoration::all(m) {
                for ell in 0..=g.order() {
                    let seg = VertexSet::lex_segment(g.order(), ell);
                    for h in 0..m {
                        // The local order of the partially filled copy is
                        // always the identity.
                        if ell / g.copy_size() == h as u64 {
                            assert!(local_order(&seg, &g, &d, h).unwrap().is_identity());
                        }
                        assert_eq!(compress_h(&seg, &g, &d, h).unwrap(), seg);
                    }
                }
            }
        }
    }

    #[test]
    fn compress_example() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = set(&g, &["00", "01", "11"]);
        let c = compress_h(&s, &g, &d, 1).unwrap();
        assert_eq!(names(&g, &c), ["00", "01", "10"]);
        assert_eq!(theta(&s, &g), 5);
        assert_eq!(theta(&c, &g), 4);
        assert_eq!(compress_inf(&s, &g, &d).unwrap(), c);
        let e = VertexSet::empty(9);
        assert_eq!(compress_h(&e, &g, &d, 0).unwrap(), e);
        assert_eq!(compress_inf(&e, &g, &d).unwrap(), e);
    }

    #[test]
    fn subadd_first_branch() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = compress_inf(&set(&g, &["00", "01", "20"]), &g, &d).unwrap();
        assert_eq!(ell_vector(&s, &g).unwrap().0, [2, 0, 1]);
        let t = subadd(&s, &g, &d).unwrap();
        assert_eq!(ell_vector(&t, &g).unwrap().0, [3, 0, 0]);
        assert!(t.is_lex_segment());
        assert!(theta_decorated(&t, &g, &d).unwrap() <= theta_decorated(&s, &g, &d).unwrap());
    }

    #[test]
    fn subadd_second_branch() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = set(&g, &["00", "01", "02", "10", "11", "20", "21"]);
        let s = compress_inf(&s, &g, &d).unwrap();
        assert_eq!(ell_vector(&s, &g).unwrap().0, [3, 2, 2]);
        let t = subadd(&s, &g, &d).unwrap();
        assert_eq!(ell_vector(&t, &g).unwrap().0, [3, 3, 1]);
        assert!(theta_decorated(&t, &g, &d).unwrap() <= theta_decorated(&s, &g, &d).unwrap());
    }

    #[test]
    fn subadd_preconditions() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let seg = VertexSet::lex_segment(9, 4);
        assert!(matches!(
            subadd(&seg, &g, &d),
            Err(EipError::AlreadyCanonical { .. })
        ));
        let s = set(&g, &["00", "01", "11"]);
        assert_eq!(subadd(&s, &g, &d), Err(EipError::NotCompressed));
    }

    #[test]
    fn subadd_equal_fill_boundary() {
        // ell_hmin + ell_hmax equal to the copy size: h_max empties and
        // h_min becomes full, which is what the second branch would give too.
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = compress_inf(&set(&g, &["00", "01", "02", "10", "20", "21"]), &g, &d).unwrap();
        assert_eq!(ell_vector(&s, &g).unwrap().0, [3, 1, 2]);
        let t = subadd(&s, &g, &d).unwrap();
        assert_eq!(ell_vector(&t, &g).unwrap().0, [3, 3, 0]);
    }

    #[test]
    fn reduce_reaches_lex_segment() {
        let g = p(2, 3);
        let d = Decoration::plain(3);
        let s = set(&g, &["22", "11", "02", "20"]);
        let (out, trace) = reduce_to_lex(&s, &g, &d).unwrap();
        assert_eq!(out, VertexSet::lex_segment(9, 4));
        assert!(trace.windows(2).all(|w| w[1].theta <= w[0].theta));
    }
}

//! The Klavžar–Milutinović representation of the generalized Sierpinski
//! graph `S(n,m)`: vertices are words of length `n` over `{0..m-1}` and
//! `{u,v}` is an edge iff for some position `h` the words agree before `h`,
//! differ at `h`, and every later digit of `u` equals `v_h` while every later
//! digit of `v` equals `u_h`.
//!
//! Internally a vertex is keyed by its base-`m` value (most significant digit
//! first), so the lexicographic rank of a vertex is its index plus one.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{EipError, Result};

/// Largest supported alphabet.
pub const MAX_M: u32 = 36;
/// Largest supported vertex count for construction.
pub const MAX_ORDER: u64 = 1 << 32;

/// The pair `(n, m)` defining `S(n,m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphParams {
    n: u32,
    m: u32,
    order: u64,
}

impl GraphParams {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        let invalid = |reason: &str| EipError::InvalidParams {
            n,
            m,
            reason: reason.to_string(),
        };
        if m < 2 {
            return Err(invalid("m must be at least 2"));
        }
        if m > MAX_M {
            return Err(invalid("m exceeds 36"));
        }
        let order = (m as u64)
            .checked_pow(n)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| invalid("m^n exceeds 2^32"))?;
        Ok(GraphParams { n, m, order })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of vertices, `m^n`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Size of one top-level copy, `m^(n-1)`. Zero for `n = 0`.
    #[inline]
    pub fn copy_size(&self) -> u64 {
        if self.n == 0 {
            0
        } else {
            self.order / self.m as u64
        }
    }

    /// Parameters of the copies `{h} x S(n-1,m)`.
    pub fn sub(&self) -> Option<GraphParams> {
        (self.n > 0).then(|| GraphParams {
            n: self.n - 1,
            m: self.m,
            order: self.order / self.m as u64,
        })
    }

    /// Fails with [`EipError::TooLarge`] when `m^n` exceeds `cap`.
    pub fn ensure_order_at_most(&self, cap: u64, what: &'static str) -> Result<()> {
        if self.order > cap {
            Err(EipError::TooLarge {
                what,
                size: self.order,
                cap,
            })
        } else {
            Ok(())
        }
    }

    /// Number of edges, `C(m,2) (m^n - 1)/(m - 1)`.
    pub fn edge_count(&self) -> u64 {
        let m = self.m as u64;
        m * (m - 1) / 2 * ((self.order - 1) / (m - 1))
    }

    /// Index of the corner `i^n`.
    #[inline]
    pub fn corner_index(&self, i: u32) -> u64 {
        if self.n == 0 {
            0
        } else {
            i as u64 * ((self.order - 1) / (self.m as u64 - 1))
        }
    }

    /// Whether the vertex with index `v` is a corner `i^n`; returns `i`.
    pub fn corner_label(&self, v: u64) -> Option<u32> {
        if self.n == 0 {
            return Some(0);
        }
        let step = (self.order - 1) / (self.m as u64 - 1);
        v.is_multiple_of(step).then(|| (v / step) as u32)
    }

    /// Appends the neighbours of vertex index `v` to `out`.
    ///
    /// Changing the last digit gives `m-1` neighbours. If the maximal
    /// trailing run `a^r` is preceded by a digit `b != a` there is one more
    /// neighbour: the same prefix followed by `a b^r`.
    pub fn neighbors_into(&self, v: u64, out: &mut Vec<u64>) {
        if self.n == 0 {
            return;
        }
        let m = self.m as u64;
        let a = v % m;
        let base = v - a;
        out.extend((0..m).filter(|&c| c != a).map(|c| base + c));

        let mut r = 1u32;
        let mut rest = v / m;
        let mut pow = m;
        let mut rep = 1u64; // (m^r - 1)/(m - 1)
        while r < self.n && rest % m == a {
            rest /= m;
            pow *= m;
            rep = rep * m + 1;
            r += 1;
        }
        if r < self.n {
            let b = rest % m;
            let prefix = rest / m;
            out.push(prefix * pow * m + a * pow + b * rep);
        }
    }

    /// Neighbours of vertex index `v`.
    pub fn neighbors(&self, v: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m as usize);
        self.neighbors_into(v, &mut out);
        out
    }

    /// Iterates every edge `(v, w)` with `v < w` exactly once.
    pub fn edge_indices(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let mut buf = Vec::with_capacity(self.m as usize);
        (0..self.order).flat_map(move |v| {
            buf.clear();
            self.neighbors_into(v, &mut buf);
            buf.iter()
                .filter(|&&w| w > v)
                .map(|&w| (v, w))
                .collect::<Vec<_>>()
        })
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.n, self.m)
    }
}

/// A word of `n` digits in `[0, m)`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    digits: Vec<u8>,
}

impl Vertex {
    pub fn new(digits: Vec<u8>, p: &GraphParams) -> Result<Self> {
        if digits.len() != p.n as usize {
            return Err(EipError::DimensionMismatch {
                expected: p.n as usize,
                got: digits.len(),
            });
        }
        if digits.iter().any(|&d| d as u32 >= p.m) {
            return Err(EipError::InvalidVertex(digits));
        }
        Ok(Vertex { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// 0-based base-`m` value.
    pub fn index(&self, p: &GraphParams) -> u64 {
        self.digits
            .iter()
            .fold(0u64, |acc, &d| acc * p.m as u64 + d as u64)
    }

    pub fn from_index(index: u64, p: &GraphParams) -> Result<Self> {
        if index >= p.order {
            return Err(EipError::RankOutOfRange {
                rank: index + 1,
                max: p.order,
            });
        }
        let m = p.m as u64;
        let mut digits = vec![0u8; p.n as usize];
        let mut x = index;
        for d in digits.iter_mut().rev() {
            *d = (x % m) as u8;
            x /= m;
        }
        Ok(Vertex { digits })
    }

    /// Parses the text form produced by [`Vertex::format`].
    pub fn parse(s: &str, p: &GraphParams) -> Result<Self> {
        let s = s.trim();
        let digits: Vec<u8> = if p.m <= 10 {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| EipError::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else if s.is_empty() {
            Vec::new()
        } else {
            s.split('.')
                .map(|t| {
                    t.parse::<u8>()
                        .map_err(|_| EipError::Parse(format!("bad digit {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Vertex::new(digits, p)
    }

    /// Concatenated digits for `m <= 10`, dot-separated otherwise.
    pub fn format(&self, m: u32) -> String {
        format_digits(&self.digits, m)
    }
}

fn format_digits(digits: &[u8], m: u32) -> String {
    if m <= 10 {
        digits.iter().map(|d| char::from(b'0' + d)).collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Text form of the vertex with index `v`.
pub fn format_index(v: u64, p: &GraphParams) -> String {
    Vertex::from_index(v, p)
        .map(|x| x.format(p.m))
        .unwrap_or_default()
}

/// Membership class of a corner label under a decoration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelClass {
    /// `I`: exterior edge whose far end counts as inside the set.
    In,
    /// `J`: no exterior edge.
    Neutral,
    /// `K`: exterior edge whose far end counts as outside the set.
    Out,
}

/// The pair `(s, t)`: `I = {0..s}`, `J = {s..s+t}`, `K = {s+t..m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decoration {
    pub s: u32,
    pub t: u32,
}

impl Decoration {
    pub fn new(s: u32, t: u32, m: u32) -> Result<Self> {
        if s + t > m {
            return Err(EipError::InvalidDecoration { s, t, m });
        }
        Ok(Decoration { s, t })
    }

    /// `S_{0,m}(n,m)`, the plain graph.
    pub fn plain(m: u32) -> Self {
        Decoration { s: 0, t: m }
    }

    pub fn validate(&self, m: u32) -> Result<()> {
        Decoration::new(self.s, self.t, m).map(|_| ())
    }

    pub fn class(&self, label: u32) -> LabelClass {
        if label < self.s {
            LabelClass::In
        } else if label < self.s + self.t {
            LabelClass::Neutral
        } else {
            LabelClass::Out
        }
    }

    /// All decorations valid for alphabet size `m`.
    pub fn all(m: u32) -> impl Iterator<Item = Decoration> {
        (0..=m).flat_map(move |s| (0..=m - s).map(move |t| Decoration { s, t }))
    }
}

/// An unordered edge, stored with the smaller index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: Vertex,
    pub b: Vertex,
}

/// Edge predicate evaluated directly on digit words.
pub fn is_edge(u: &Vertex, v: &Vertex, p: &GraphParams) -> Result<bool> {
    let n = p.n as usize;
    for w in [u, v] {
        if w.digits.len() != n {
            return Err(EipError::DimensionMismatch {
                expected: n,
                got: w.digits.len(),
            });
        }
        if w.digits.iter().any(|&d| d as u32 >= p.m) {
            return Err(EipError::InvalidVertex(w.digits.clone()));
        }
    }
    let (u, v) = (&u.digits, &v.digits);
    let Some(h) = (0..n).find(|&i| u[i] != v[i]) else {
        return Ok(false);
    };
    Ok((h + 1..n).all(|j| u[j] == v[h] && v[j] == u[h]))
}

/// All edges of `S(n,m)`, each once, endpoints in lex order.
pub fn edges(p: &GraphParams) -> Result<Vec<Edge>> {
    p.ensure_order_at_most(crate::ENUM_CAP, "edge enumeration")?;
    p.edge_indices()
        .map(|(a, b)| {
            Ok(Edge {
                a: Vertex::from_index(a, p)?,
                b: Vertex::from_index(b, p)?,
            })
        })
        .collect()
}

/// The corners `i^n`. For `n = 0` they coincide in the single vertex.
pub fn corner_vertices(p: &GraphParams) -> Vec<Vertex> {
    if p.n == 0 {
        return vec![Vertex { digits: Vec::new() }];
    }
    (0..p.m)
        .map(|i| Vertex {
            digits: vec![i as u8; p.n as usize],
        })
        .collect()
}

pub fn degree(v: &Vertex, p: &GraphParams) -> Result<u32> {
    let v = Vertex::new(v.digits.clone(), p)?;
    Ok(p.neighbors(v.index(p)).len() as u32)
}

/// Writes one edge per line as `U V`.
pub fn write_edge_list<W: Write>(p: &GraphParams, out: &mut W) -> io::Result<()> {
    for (a, b) in p.edge_indices() {
        writeln!(out, "{} {}", format_index(a, p), format_index(b, p))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str, p: &GraphParams) -> Vertex {
        Vertex::parse(s, p).unwrap()
    }

    #[test]
    fn edge_predicate_examples() {
        let p = GraphParams::new(2, 3).unwrap();
        assert!(is_edge(&v("00", &p), &v("01", &p), &p).unwrap());
        assert!(is_edge(&v("01", &p), &v("10", &p), &p).unwrap());
        assert!(!is_edge(&v("00", &p), &v("11", &p), &p).unwrap());
        assert!(!is_edge(&v("00", &p), &v("00", &p), &p).unwrap());
        let q = GraphParams::new(3, 3).unwrap();
        assert!(is_edge(&v("011", &q), &v("100", &q), &q).unwrap());
    }

    #[test]
    fn edge_predicate_dimension_mismatch() {
        let p = GraphParams::new(2, 3).unwrap();
        let q = GraphParams::new(3, 3).unwrap();
        let err = is_edge(&v("00", &p), &v("000", &q), &p).unwrap_err();
        assert!(matches!(err, EipError::DimensionMismatch { .. }));
    }

    #[test]
    fn edge_counts() {
        for (n, m, e) in [(1, 3, 3), (2, 3, 12), (2, 2, 3), (0, 5, 0)] {
            let p = GraphParams::new(n, m).unwrap();
            assert_eq!(edges(&p).unwrap().len(), e);
            assert_eq!(p.edge_count(), e as u64);
        }
        let p = GraphParams::new(2, 2).unwrap();
        let path: Vec<_> = edges(&p)
            .unwrap()
            .into_iter()
            .map(|e| (e.a.format(2), e.b.format(2)))
            .collect();
        assert_eq!(
            path,
            vec![
                ("00".into(), "01".into()),
                ("01".into(), "10".into()),
                ("10".into(), "11".into())
            ]
        );
    }

    #[test]
    fn corners_and_degrees() {
        let p = GraphParams::new(2, 3).unwrap();
        let c: Vec<_> = corner_vertices(&p).iter().map(|x| x.format(3)).collect();
        assert_eq!(c, ["00", "11", "22"]);
        assert_eq!(degree(&v("00", &p), &p).unwrap(), 2);
        assert_eq!(degree(&v("01", &p), &p).unwrap(), 3);
        let q = GraphParams::new(3, 2).unwrap();
        let c: Vec<_> = corner_vertices(&q).iter().map(|x| x.format(2)).collect();
        assert_eq!(c, ["000", "111"]);
        let k = GraphParams::new(1, 5).unwrap();
        assert_eq!(corner_vertices(&k).len(), 5);
        for i in 0..5 {
            assert_eq!(degree(&Vertex::from_index(i, &k).unwrap(), &k).unwrap(), 4);
        }
    }

    #[test]
    fn corner_label_matches_corner_index() {
        let p = GraphParams::new(3, 4).unwrap();
        for v in 0..p.order() {
            let expected = (0..4).find(|&i| p.corner_index(i) == v);
            assert_eq!(p.corner_label(v), expected);
        }
    }

    #[test]
    fn params_limits() {
        assert!(GraphParams::new(1, 1).is_err());
        assert!(GraphParams::new(1, 37).is_err());
        assert!(GraphParams::new(33, 2).is_err());
        assert!(GraphParams::new(32, 2).is_ok());
        let zero = GraphParams::new(0, 4).unwrap();
        assert_eq!(zero.order(), 1);
        assert_eq!(corner_vertices(&zero).len(), 1);
    }

    #[test]
    fn text_forms() {
        let p = GraphParams::new(3, 12).unwrap();
        let x = Vertex::new(vec![11, 0, 3], &p).unwrap();
        assert_eq!(x.format(12), "11.0.3");
        assert_eq!(Vertex::parse("11.0.3", &p).unwrap(), x);
        assert!(Vertex::parse("12.0.3", &p).is_err());
        let q = GraphParams::new(2, 3).unwrap();
        assert!(Vertex::parse("0a", &q).is_err());
        assert!(Vertex::parse("013", &q).is_err());
    }

    #[test]
    fn edge_list_text() {
        let p = GraphParams::new(1, 3).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&p, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n0 2\n1 2\n");
    }

    #[test]
    fn decoration_classes() {
        let d = Decoration::new(1, 1, 3).unwrap();
        assert_eq!(d.class(0), LabelClass::In);
        assert_eq!(d.class(1), LabelClass::Neutral);
        assert_eq!(d.class(2), LabelClass::Out);
        assert!(Decoration::new(2, 2, 3).is_err());
        assert_eq!(Decoration::all(3).count(), 10);
    }
}

//! Test-side oracles built without the library's adjacency or profile code.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Adjacency of `S(n,m)` from the recursive construction: `S(1,m) = K_m`,
/// and `S(n+1,m)` is `m` prefixed copies of `S(n,m)` plus the edges
/// `{i j^n, j i^n}` for `i != j`. Vertices are base-`m` indices.
pub fn recursive_adjacency(n: u32, m: u32) -> Vec<BTreeSet<u64>> {
    assert!(n >= 1);
    let m64 = m as u64;
    let mut adj: Vec<BTreeSet<u64>> = (0..m64)
        .map(|v| (0..m64).filter(|&w| w != v).collect())
        .collect();
    for level in 1..n {
        let size = m64.pow(level);
        let mut next = vec![BTreeSet::new(); (size * m64) as usize];
        for i in 0..m64 {
            for v in 0..size {
                for &w in &adj[v as usize] {
                    next[(i * size + v) as usize].insert(i * size + w);
                }
            }
        }
        // corner j^level of S(level,m) has index j * (m^level - 1)/(m - 1)
        let corner = |j: u64| j * (size - 1) / (m64 - 1);
        for i in 0..m64 {
            for j in 0..m64 {
                if i != j {
                    let a = i * size + corner(j);
                    let b = j * size + corner(i);
                    next[a as usize].insert(b);
                    next[b as usize].insert(a);
                }
            }
        }
        adj = next;
    }
    adj
}

pub fn cut(adj: &[BTreeSet<u64>], member: impl Fn(u64) -> bool) -> u64 {
    let mut c = 0;
    for (v, nb) in adj.iter().enumerate() {
        if member(v as u64) {
            c += nb.iter().filter(|&&w| !member(w)).count() as u64;
        }
    }
    c
}

/// Boundary of every lex segment, `ell = 0..=m^n`.
pub fn lex_profile(n: u32, m: u32) -> Vec<u64> {
    let adj = recursive_adjacency(n, m);
    (0..=adj.len() as u64)
        .map(|ell| cut(&adj, |v| v < ell))
        .collect()
}

/// Minimum boundary per cardinality over all `2^N` subsets.
pub fn brute_profile(n: u32, m: u32) -> Vec<u64> {
    let adj = recursive_adjacency(n, m);
    let order = adj.len();
    assert!(order <= 20);
    let masks: Vec<u32> = adj
        .iter()
        .map(|nb| nb.iter().fold(0, |a, &w| a | 1 << w))
        .collect();
    let mut best = vec![u64::MAX; order + 1];
    for set in 0u32..(1 << order) {
        let mut c = 0;
        for (v, &mask) in masks.iter().enumerate() {
            if set >> v & 1 == 1 {
                c += (mask & !set).count_ones() as u64;
            }
        }
        let k = set.count_ones() as usize;
        best[k] = best[k].min(c);
    }
    best
}

/// `q(ell)` by counting corners `i^n` among the first `ell` vertices.
pub fn q_by_count(n: u32, m: u32, ell: u64) -> u64 {
    let order = (m as u64).pow(n);
    (0..m as u64)
        .filter(|&i| i * (order - 1) / (m as u64 - 1) < ell)
        .count() as u64
}

//! Non-isomorphic trees and forests of a given order.
//!
//! Rooted trees are generated as canonical level sequences in successor
//! order; a free tree is kept when its sequence is the canonical sequence of
//! the tree rooted at its centroid. Forests are multisets of trees.

use crate::forest::{Forest, Vertex};

/// Isomorphism-invariant total-order key of a forest: the sorted canonical
/// level sequences of its components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<Vec<u8>>);

/// Canonical level sequence of the subtree of `root` (depths relative to
/// `root`), children ordered by descending sequence.
fn rooted_code(f: &Forest, root: Vertex, parent: Option<Vertex>) -> Vec<u8> {
    let mut kids: Vec<Vec<u8>> = f
        .neighbors(root)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(f, w, Some(root)))
        .collect();
    kids.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::with_capacity(1 + kids.iter().map(Vec::len).sum::<usize>());
    out.push(0);
    for k in kids {
        out.extend(k.into_iter().map(|d| d + 1));
    }
    out
}

/// Centroid vertices (one or two) of the component listed in `comp`.
fn centroids(f: &Forest, comp: &[Vertex]) -> Vec<Vertex> {
    let n = comp.len();
    let root = comp[0];
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; f.order()];
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in f.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; f.order()];
    for &v in order.iter().rev() {
        if v != root {
            size[parent[v]] += size[v];
        }
    }
    let weight = |v: Vertex| {
        let below = f
            .neighbors(v)
            .iter()
            .filter(|&&w| parent[w] == v && w != v)
            .map(|&w| size[w])
            .max();
        below.unwrap_or(0).max(n - size[v])
    };
    let best = order.iter().map(|&v| weight(v)).min().unwrap_or(0);
    let mut c: Vec<Vertex> = order.into_iter().filter(|&v| weight(v) == best).collect();
    c.sort_unstable();
    c
}

/// Canonical level sequence of the tree spanned by `comp`.
fn tree_code(f: &Forest, comp: &[Vertex]) -> Vec<u8> {
    centroids(f, comp)
        .into_iter()
        .map(|c| rooted_code(f, c, None))
        .max()
        .unwrap_or_default()
}

pub fn canonical_form(f: &Forest) -> CanonicalForm {
    let mut codes: Vec<Vec<u8>> = f.components().iter().map(|c| tree_code(f, c)).collect();
    codes.sort_unstable();
    CanonicalForm(codes)
}

/// Appends the tree with level sequence `seq` to `edges`, numbering its
/// vertices in preorder from `offset`.
fn push_tree(seq: &[u8], offset: usize, edges: &mut Vec<(Vertex, Vertex)>) {
    let mut last_at_depth: Vec<Vertex> = Vec::new();
    for (i, &d) in seq.iter().enumerate() {
        let d = d as usize;
        last_at_depth.truncate(d);
        if d > 0 {
            edges.push((offset + last_at_depth[d - 1], offset + i));
        }
        last_at_depth.push(i);
    }
}

/// The tree with the given level sequence, vertices numbered in preorder.
pub fn tree_from_level_sequence(seq: &[u8]) -> Forest {
    let mut edges = Vec::new();
    push_tree(seq, 0, &mut edges);
    Forest::new(seq.len(), &edges).expect("level sequence describes a tree")
}

/// The forest whose components have the given level sequences, in order.
pub fn forest_from_codes(codes: &[Vec<u8>]) -> Forest {
    let mut edges = Vec::new();
    let mut offset = 0;
    for c in codes {
        push_tree(c, offset, &mut edges);
        offset += c.len();
    }
    Forest::new(offset, &edges).expect("level sequences describe trees")
}

/// Canonical level sequences of all rooted trees on `n` vertices, in
/// decreasing lexicographic order.
fn rooted_sequences(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return Vec::new();
    }
    let mut seq: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![seq.clone()];
    loop {
        let Some(p) = (0..n).rev().find(|&i| seq[i] > 1) else {
            break;
        };
        let q = (0..p).rev().find(|&i| seq[i] == seq[p] - 1).unwrap();
        for i in p..n {
            seq[i] = seq[i - (p - q)];
        }
        out.push(seq.clone());
    }
    out
}

/// Canonical level sequences of the free trees on `n` vertices, ascending.
fn tree_codes(n: usize) -> Vec<Vec<u8>> {
    let all: Vec<Vertex> = (0..n).collect();
    let mut out: Vec<Vec<u8>> = rooted_sequences(n)
        .into_iter()
        .filter(|s| {
            let f = tree_from_level_sequence(s);
            tree_code(&f, &all) == *s
        })
        .collect();
    out.sort_unstable();
    out
}

/// One tree per isomorphism class on `n` vertices, ordered by canonical
/// form. Empty for `n = 0`.
pub fn trees_of_order(n: usize) -> Vec<Forest> {
    tree_codes(n)
        .iter()
        .map(|c| tree_from_level_sequence(c))
        .collect()
}

/// One forest per isomorphism class on `n` vertices, ordered by canonical
/// form.
pub fn forests_of_order(n: usize) -> Vec<Forest> {
    let by_size: Vec<Vec<Vec<u8>>> = (0..=n).map(tree_codes).collect();
    let mut forms: Vec<CanonicalForm> = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    compose(n, (n, usize::MAX - 1), &by_size, &mut chosen, &mut forms);
    for f in &mut forms {
        f.0.sort_unstable();
    }
    forms.sort_unstable();
    forms.iter().map(|f| forest_from_codes(&f.0)).collect()
}

/// Extends `chosen` with (size, index) pairs, each at most `bound`, until
/// they cover `left` vertices.
fn compose(
    left: usize,
    bound: (usize, usize),
    by_size: &[Vec<Vec<u8>>],
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<CanonicalForm>,
) {
    if left == 0 {
        out.push(CanonicalForm(
            chosen.iter().map(|&(s, i)| by_size[s][i].clone()).collect(),
        ));
        return;
    }
    for size in 1..=left.min(bound.0) {
        let count = if size == bound.0 {
            by_size[size].len().min(bound.1 + 1)
        } else {
            by_size[size].len()
        };
        for i in 0..count {
            chosen.push((size, i));
            compose(left - size, (size, i), by_size, chosen, out);
            chosen.pop();
        }
    }
}

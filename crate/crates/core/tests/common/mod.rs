//! Brute-force oracles written against plain integers, sharing no code with
//! the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// All functions `[k] → [n]` as value vectors, lexicographic.
pub fn functions(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for f in &out {
            for v in 0..n {
                let mut g = f.clone();
                g.push(v);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// Elements of `Σ_i s_i × [n]^{t_i}` as `(term, position, exponent map)`.
fn poly_elements(terms: &[(usize, usize)], n: usize) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for (i, &(s, t)) in terms.iter().enumerate() {
        for x in 0..s {
            for phi in functions(t, n) {
                out.push((i, x, phi));
            }
        }
    }
    out
}

/// Number of families `α_n : p([n]) → q([n])`, `n ≤ bound`, natural for
/// every function between those sets. Polynomials are lists of
/// `(positions, directions)` terms.
pub fn poly_nat_count(p: &[(usize, usize)], q: &[(usize, usize)], bound: usize) -> usize {
    let ps: Vec<_> = (0..=bound).map(|n| poly_elements(p, n)).collect();
    let qs: Vec<_> = (0..=bound).map(|n| poly_elements(q, n)).collect();
    let index = |elems: &[(usize, usize, Vec<usize>)], e: &(usize, usize, Vec<usize>)| {
        elems.iter().position(|x| x == e).expect("element")
    };
    let push = |f: &[usize], e: &(usize, usize, Vec<usize>)| {
        (e.0, e.1, e.2.iter().map(|&v| f[v]).collect::<Vec<_>>())
    };
    // Naturality between levels m and n for every f: [m] → [n].
    let natural = |alpha: &[Vec<usize>], m: usize, n: usize| {
        functions(m, n).iter().all(|f| {
            ps[m].iter().enumerate().all(|(ix, e)| {
                let lhs = alpha[n][index(&ps[n], &push(f, e))];
                let rhs = index(&qs[n], &push(f, &qs[m][alpha[m][ix]]));
                lhs == rhs
            })
        })
    };
    let mut count = 0;
    let mut alpha: Vec<Vec<usize>> = Vec::new();
    fn go(
        level: usize,
        bound: usize,
        alpha: &mut Vec<Vec<usize>>,
        sizes: &[(usize, usize)],
        natural: &dyn Fn(&[Vec<usize>], usize, usize) -> bool,
        count: &mut usize,
    ) {
        if level > bound {
            *count += 1;
            return;
        }
        let (dom, cod) = sizes[level];
        for a in functions(dom, cod) {
            alpha.push(a);
            let ok = (0..=level).all(|m| natural(alpha, m, level) && natural(alpha, level, m));
            if ok {
                go(level + 1, bound, alpha, sizes, natural, count);
            }
            alpha.pop();
        }
    }
    let sizes: Vec<(usize, usize)> = (0..=bound).map(|n| (ps[n].len(), qs[n].len())).collect();
    go(0, bound, &mut alpha, &sizes, &natural, &mut count);
    count
}

/// Connected components of an undirected graph given by its edges, by
/// breadth-first search.
pub fn components<T: Ord + Clone>(nodes: &[T], edges: &[(T, T)]) -> usize {
    let mut adj: BTreeMap<&T, Vec<&T>> = nodes.iter().map(|n| (n, Vec::new())).collect();
    for (a, b) in edges {
        adj.get_mut(a).expect("node").push(b);
        adj.get_mut(b).expect("node").push(a);
    }
    let mut seen: BTreeSet<&T> = BTreeSet::new();
    let mut count = 0;
    for n in nodes {
        if !seen.insert(n) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([n]);
        while let Some(x) = queue.pop_front() {
            for y in &adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

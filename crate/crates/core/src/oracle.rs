//! Brute-force oracles used by the law suites.
//!
//! Nothing here shares code with the implementations it checks: coend
//! classes are recomputed by a Warshall transitive closure over the explicit
//! zig-zag relation instead of union-find.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::Atom;
use crate::coend::{FinBifunctor, QuotientSet};
use crate::error::{Error, Result};

pub type Partition = BTreeSet<BTreeSet<(Atom, Atom)>>;

/// Equivalence classes of `⨿_c D(c,c)` under the zig-zag relation, computed
/// by reflexive-symmetric-transitive closure of an adjacency matrix.
pub fn zigzag_classes(d: &FinBifunctor) -> Result<Partition> {
    if d.contra() != d.co() {
        return Err(Error::Mismatch(
            "zig-zag oracle needs a single base category".into(),
        ));
    }
    let base = d.contra();
    let mut elems = Vec::new();
    for c in base.objects() {
        for x in d.fiber(c, c)? {
            elems.push((c.clone(), x.clone()));
        }
    }
    let n = elems.len();
    let pos: BTreeMap<&(Atom, Atom), usize> =
        elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for (f, c, c2) in base.morphisms() {
        for x in d.fiber(c2, c)? {
            let l = (c.clone(), d.left(f, c, x)?.clone());
            let r = (c2.clone(), d.right(c2, f, x)?.clone());
            let (i, j) = (pos[&l], pos[&r]);
            reach[i][j] = true;
            reach[j][i] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut partition = Partition::new();
    for row in &reach {
        let class: BTreeSet<(Atom, Atom)> = row
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(j, _)| elems[j].clone())
            .collect();
        partition.insert(class);
    }
    Ok(partition)
}

/// The partition recorded in a computed quotient.
pub fn quotient_partition(q: &QuotientSet) -> Partition {
    q.classes()
        .values()
        .map(|members| members.iter().cloned().collect())
        .collect()
}

//! Polynomial functors, polynomial lenses, ommatidia and compound optics.
//!
//! A polynomial `P(y) = Σ_{i∈I} s_i × Set(t_i, y)` is stored by its index
//! set and the two families. An element of `P(y)` is a triple
//! `(i, x, d)` with `d: t_i → y` encoded as the tuple of its images.
//!
//! A lens `P → Q` (with `Q(y) = Σ_j a_j × Set(b_j, y)`) assigns to every
//! `(i, x)` a triple `(j, α, φ)` with `α ∈ a_j` and `φ: b_j → t_i`; the
//! product ranges over the positions of the source `P` and the coproduct
//! over the target `Q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, FinSet, Func};
use crate::coend::FinBifunctor;
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_nats, skeleton_function, CoPresheaf, FinCategory, NatTransformation,
};
use crate::prof::{
    action_composition_check, action_on_nat, action_unit_check, prof_action, Action, FinProfunctor,
    ProfMorphism,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFunctor {
    index: FinSet,
    positions: BTreeMap<Atom, FinSet>,
    directions: BTreeMap<Atom, FinSet>,
}

impl PolyFunctor {
    pub fn new(
        index: FinSet,
        positions: BTreeMap<Atom, FinSet>,
        directions: BTreeMap<Atom, FinSet>,
    ) -> Result<PolyFunctor> {
        let p = PolyFunctor {
            index,
            positions,
            directions,
        };
        p.check()?;
        Ok(p)
    }

    /// Checks that both families are indexed by exactly the index set.
    pub fn check(&self) -> Result<()> {
        for family in [&self.positions, &self.directions] {
            if family.len() != self.index.len()
                || !self.index.iter().all(|i| family.contains_key(i))
            {
                return Err(Error::Malformed(
                    "polynomial families must be indexed by the index set".into(),
                ));
            }
        }
        Ok(())
    }

    /// `Σ_k s_k y^{t_k}` with index `0, 1, ...` and sets `{0..s_k-1}`,
    /// `{0..t_k-1}`.
    pub fn from_terms(terms: &[(usize, usize)]) -> PolyFunctor {
        let index = FinSet::range(terms.len());
        let positions = terms
            .iter()
            .enumerate()
            .map(|(k, &(s, _))| (Atom::from(k), FinSet::range(s)))
            .collect();
        let directions = terms
            .iter()
            .enumerate()
            .map(|(k, &(_, t))| (Atom::from(k), FinSet::range(t)))
            .collect();
        PolyFunctor {
            index,
            positions,
            directions,
        }
    }

    /// `y^t`.
    pub fn monomial(t: usize) -> PolyFunctor {
        PolyFunctor::from_terms(&[(1, t)])
    }

    pub fn index(&self) -> &FinSet {
        &self.index
    }

    pub fn positions(&self, i: &Atom) -> Result<&FinSet> {
        self.positions
            .get(i)
            .ok_or_else(|| Error::UnknownObject(i.clone()))
    }

    pub fn directions(&self, i: &Atom) -> Result<&FinSet> {
        self.directions
            .get(i)
            .ok_or_else(|| Error::UnknownObject(i.clone()))
    }

    pub fn max_direction(&self) -> usize {
        self.directions.values().map(FinSet::len).max().unwrap_or(0)
    }

    /// `Σ_i s_i`, elements `(i, x)`.
    pub fn all_positions(&self) -> FinSet {
        self.index
            .iter()
            .flat_map(|i| {
                self.positions[i]
                    .iter()
                    .map(move |x| Atom::pair(i.clone(), x.clone()))
            })
            .collect()
    }

    /// `P(y)`, elements `(i, x, d)`.
    pub fn eval(&self, y: &FinSet) -> FinSet {
        let mut out = Vec::new();
        for i in &self.index {
            let maps = self.directions[i].functions_to(y);
            for x in &self.positions[i] {
                for d in &maps {
                    let code = d.encode(&self.directions[i]).expect("total");
                    out.push(Atom::triple(i.clone(), x.clone(), code));
                }
            }
        }
        out.into_iter().collect()
    }

    /// `P(f): P(y) → P(y')` by post-composition of direction maps.
    pub fn eval_mor(&self, y: &FinSet, f: &Func) -> Result<Func> {
        Func::try_tabulate(&self.eval(y), |e| {
            let (i, x, code) = e.as_triple()?;
            let t = self.directions(i)?;
            let d = Func::decode(t, code)?;
            Ok(Atom::triple(i.clone(), x.clone(), f.after(&d)?.encode(t)?))
        })
    }

    /// The restriction of `P` to the skeleton of finite sets of size at
    /// most `max`.
    pub fn on_skeleton(&self, skeleton: &Arc<FinCategory>) -> Result<CoPresheaf> {
        CoPresheaf::tabulate(
            skeleton.clone(),
            |n| Ok(self.eval(&FinSet::range(size_of(n)?))),
            |f, e| {
                let func = skeleton_function(f)?;
                let (i, x, code) = e.as_triple()?;
                let t = self.directions(i)?;
                let d = Func::decode(t, code)?;
                Ok(Atom::triple(
                    i.clone(),
                    x.clone(),
                    func.after(&d)?.encode(t)?,
                ))
            },
        )
    }

    /// Positions and directions as co-presheaves on the discrete category
    /// of the index set.
    pub fn as_copresheaves(&self) -> Result<(Arc<FinCategory>, CoPresheaf, CoPresheaf)> {
        let cat = Arc::new(FinCategory::discrete(self.index.iter().cloned())?);
        let s = CoPresheaf::new(cat.clone(), self.positions.clone(), BTreeMap::new())?;
        let t = CoPresheaf::new(cat.clone(), self.directions.clone(), BTreeMap::new())?;
        Ok((cat, s, t))
    }
}

fn size_of(n: &Atom) -> Result<usize> {
    n.to_string()
        .parse()
        .map_err(|_| Error::Malformed(format!("{n} is not a skeleton object")))
}

/// A lens `P → Q` as the table `(i, x) ↦ (j, α, φ)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyLens {
    table: BTreeMap<Atom, Atom>,
}

impl PolyLens {
    /// Checks that every position of `p` is sent to a valid triple of `q`.
    pub fn new(p: &PolyFunctor, q: &PolyFunctor, table: BTreeMap<Atom, Atom>) -> Result<PolyLens> {
        let l = PolyLens { table };
        l.check(p, q)?;
        Ok(l)
    }

    pub fn check(&self, p: &PolyFunctor, q: &PolyFunctor) -> Result<()> {
        let dom = p.all_positions();
        if self.table.len() != dom.len() || !dom.iter().all(|ix| self.table.contains_key(ix)) {
            return Err(Error::Malformed(
                "lens table must cover every source position".into(),
            ));
        }
        for (ix, v) in &self.table {
            let (i, _) = ix.as_pair()?;
            let (j, a, code) = v.as_triple()?;
            if !q.positions(j)?.contains(a) {
                return Err(Error::Malformed(format!("{a} is not a position of {j}")));
            }
            let phi = Func::decode(q.directions(j)?, code)?;
            if !phi.is_total_on(q.directions(j)?, p.directions(i)?) {
                return Err(Error::Malformed(format!(
                    "direction map at {ix} is not total"
                )));
            }
        }
        Ok(())
    }

    pub fn identity(p: &PolyFunctor) -> PolyLens {
        let table = p
            .all_positions()
            .iter()
            .map(|ix| {
                let (i, x) = ix.as_pair().expect("pair");
                let t = &p.directions[i];
                let code = Func::identity(t).encode(t).expect("total");
                (ix.clone(), Atom::triple(i.clone(), x.clone(), code))
            })
            .collect();
        PolyLens { table }
    }

    pub fn table(&self) -> &BTreeMap<Atom, Atom> {
        &self.table
    }

    /// `(j, α, φ)` at `(i, x)`.
    pub fn entry(&self, q: &PolyFunctor, i: &Atom, x: &Atom) -> Result<(Atom, Atom, Func)> {
        let v = self
            .table
            .get(&Atom::pair(i.clone(), x.clone()))
            .ok_or_else(|| Error::Malformed(format!("no lens entry at ({i},{x})")))?;
        let (j, a, code) = v.as_triple()?;
        Ok((j.clone(), a.clone(), Func::decode(q.directions(j)?, code)?))
    }
}

/// The choices `(j, α, φ: b_j → t_i)` available at a position of index `i`.
pub fn lens_options(p: &PolyFunctor, q: &PolyFunctor, i: &Atom) -> Result<FinSet> {
    let t = p.directions(i)?;
    let mut out = Vec::new();
    for j in q.index() {
        let b = q.directions(j)?;
        let maps = b.functions_to(t);
        for a in q.positions(j)? {
            for phi in &maps {
                out.push(Atom::triple(j.clone(), a.clone(), phi.encode(b)?));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `∏_i |Σ_j a_j × Set(b_j, t_i)|^{|s_i|}`, or `None` on overflow.
pub fn polylens_count(p: &PolyFunctor, q: &PolyFunctor) -> Result<Option<u128>> {
    let mut total: u128 = 1;
    for i in p.index() {
        let mut options: u128 = 0;
        for j in q.index() {
            let b = q.directions(j)?.len() as u32;
            let t = p.directions(i)?.len() as u128;
            let maps = match t.checked_pow(b) {
                Some(m) => m,
                None => return Ok(None),
            };
            options += q.positions(j)?.len() as u128 * maps;
        }
        for _ in p.positions(i)? {
            total = match total.checked_mul(options) {
                Some(t) => t,
                None => return Ok(None),
            };
        }
    }
    Ok(Some(total))
}

/// Every lens `P → Q`, in lexicographic order of their tables.
pub fn enumerate_polylenses(p: &PolyFunctor, q: &PolyFunctor) -> Result<Vec<PolyLens>> {
    let slots: Vec<(Atom, FinSet)> = p
        .all_positions()
        .iter()
        .map(|ix| Ok((ix.clone(), lens_options(p, q, ix.as_pair()?.0)?)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut current: Vec<(Atom, Atom)> = Vec::with_capacity(slots.len());
    fn go(slots: &[(Atom, FinSet)], current: &mut Vec<(Atom, Atom)>, out: &mut Vec<PolyLens>) {
        if current.len() == slots.len() {
            out.push(PolyLens {
                table: current.iter().cloned().collect(),
            });
            return;
        }
        let (ix, options) = &slots[current.len()];
        for o in options {
            current.push((ix.clone(), o.clone()));
            go(slots, current, out);
            current.pop();
        }
    }
    go(&slots, &mut current, &mut out);
    Ok(out)
}

/// The component at `y` of the natural transformation `P ⇒ Q` of a lens:
/// `(i, x, d) ↦ (j, α, d ∘ φ)`.
pub fn polylens_to_nat(p: &PolyFunctor, q: &PolyFunctor, l: &PolyLens, y: &FinSet) -> Result<Func> {
    Func::try_tabulate(&p.eval(y), |e| {
        let (i, x, code) = e.as_triple()?;
        let d = Func::decode(p.directions(i)?, code)?;
        let (j, a, phi) = l.entry(q, i, x)?;
        Ok(Atom::triple(
            j.clone(),
            a,
            d.after(&phi)?.encode(q.directions(&j)?)?,
        ))
    })
}

/// `l2 ∘ l1` for `l1: P → Q`, `l2: Q → R`: `(i, x) ↦ (k, ρ, φ ∘ ψ)`.
pub fn compose_polylens(
    p: &PolyFunctor,
    q: &PolyFunctor,
    r: &PolyFunctor,
    l1: &PolyLens,
    l2: &PolyLens,
) -> Result<PolyLens> {
    let mut table = BTreeMap::new();
    for ix in p.all_positions().iter() {
        let (i, x) = ix.as_pair()?;
        let (j, a, phi) = l1.entry(q, i, x)?;
        let (k, rho, psi) = l2.entry(r, &j, &a)?;
        let code = phi.after(&psi)?.encode(r.directions(&k)?)?;
        table.insert(ix.clone(), Atom::triple(k, rho, code));
    }
    PolyLens::new(p, r, table)
}

/// Result of [`nat_oracle`].
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub bound: usize,
    pub nats: Vec<NatTransformation>,
}

/// All natural transformations between the restrictions of `p` and `q` to
/// finite sets of size at most `y_max`, by brute force.
///
/// A component at a set of size `n ≥ max|t_i|` is determined by its values
/// on elements `(i, x, d)` with `d` injective, and each of those is the image
/// of an element over a set of size `|t_i|`; checking up to
/// `max|t_i| + 1` therefore pins down the whole transformation. Smaller
/// bounds are refused.
pub fn nat_oracle(p: &PolyFunctor, q: &PolyFunctor, y_max: usize) -> Result<OracleResult> {
    let need = p.max_direction().max(q.max_direction()) + 1;
    if y_max < need {
        return Err(Error::Bound(format!(
            "nat_oracle needs y_max ≥ {need}, got {y_max}"
        )));
    }
    nat_oracle_on(p, q, &Arc::new(FinCategory::finset_skeleton(y_max)?))
}

/// [`nat_oracle`] over a prebuilt skeleton, whose largest object is the
/// bound.
pub fn nat_oracle_on(
    p: &PolyFunctor,
    q: &PolyFunctor,
    skeleton: &Arc<FinCategory>,
) -> Result<OracleResult> {
    let y_max = skeleton.objects().len().saturating_sub(1);
    let need = p.max_direction().max(q.max_direction()) + 1;
    if y_max < need {
        return Err(Error::Bound(format!(
            "nat_oracle needs y_max ≥ {need}, got {y_max}"
        )));
    }
    let fp = p.on_skeleton(skeleton)?;
    let fq = q.on_skeleton(skeleton)?;
    Ok(OracleResult {
        bound: y_max,
        nats: enumerate_nats(&fp, &fq)?,
    })
}

/// Whether the oracle's transformations are exactly the images of the
/// enumerated lenses, compared component by component.
pub fn oracle_agrees(p: &PolyFunctor, q: &PolyFunctor, oracle: &OracleResult) -> Result<bool> {
    let lenses = enumerate_polylenses(p, q)?;
    let mut from_lenses = Vec::with_capacity(lenses.len());
    for l in &lenses {
        let comps: Vec<Func> = (0..=oracle.bound)
            .map(|n| polylens_to_nat(p, q, l, &FinSet::range(n)))
            .collect::<Result<_>>()?;
        from_lenses.push(comps);
    }
    let mut from_oracle = Vec::with_capacity(oracle.nats.len());
    for nat in &oracle.nats {
        let comps: Vec<Func> = (0..=oracle.bound)
            .map(|n| nat.component(&Atom::from(n)).cloned())
            .collect::<Result<_>>()?;
        from_oracle.push(comps);
    }
    from_lenses.sort();
    from_oracle.sort();
    Ok(from_lenses == from_oracle)
}

/// The existential form of a polynomial lens from `source = Σ_k s_k y^{t_k}`
/// to `target = Σ_n a_n y^{b_n}` with residual family `c_{n,k}`.
///
/// `forward[k]` sends `s_k` to triples `(n, α, γ)` with `γ ∈ c_{n,k}`;
/// `backward[k]` sends triples `(m, β, γ)` with `γ ∈ c_{m,k}` to `t_k`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ommatidium {
    pub residual: BTreeMap<Atom, FinSet>,
    pub forward: BTreeMap<Atom, Func>,
    pub backward: BTreeMap<Atom, Func>,
}

fn residual_at<'a>(c: &'a BTreeMap<Atom, FinSet>, n: &Atom, k: &Atom) -> Result<&'a FinSet> {
    c.get(&Atom::pair(n.clone(), k.clone()))
        .ok_or_else(|| Error::Malformed(format!("no residual set at ({n},{k})")))
}

/// `Σ_n f_n × c_{n,k}`, elements `(n, x, γ)`.
fn weighted_sum(
    target: &PolyFunctor,
    residual: &BTreeMap<Atom, FinSet>,
    k: &Atom,
    family: impl Fn(&Atom) -> Result<FinSet>,
) -> Result<FinSet> {
    let mut out = Vec::new();
    for n in target.index() {
        for x in &family(n)? {
            for g in residual_at(residual, n, k)? {
                out.push(Atom::triple(n.clone(), x.clone(), g.clone()));
            }
        }
    }
    Ok(out.into_iter().collect())
}

impl Ommatidium {
    pub fn check(&self, source: &PolyFunctor, target: &PolyFunctor) -> Result<()> {
        for n in target.index() {
            for k in source.index() {
                residual_at(&self.residual, n, k)?;
            }
        }
        if self.residual.len() != target.index().len() * source.index().len() {
            return Err(Error::Malformed("residual family has extra entries".into()));
        }
        for k in source.index() {
            let fa = weighted_sum(target, &self.residual, k, |n| target.positions(n).cloned())?;
            let fb = weighted_sum(target, &self.residual, k, |n| target.directions(n).cloned())?;
            let fwd = self
                .forward
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("no forward map at {k}")))?;
            let bwd = self
                .backward
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("no backward map at {k}")))?;
            if !fwd.is_total_on(source.positions(k)?, &fa) {
                return Err(Error::Malformed(format!("forward map at {k} is not total")));
            }
            if !bwd.is_total_on(&fb, source.directions(k)?) {
                return Err(Error::Malformed(format!(
                    "backward map at {k} is not total"
                )));
            }
        }
        Ok(())
    }

    /// At `(k, x)` with `forward_k(x) = (n, α, γ)`: the entry
    /// `(n, α, β ↦ backward_k(n, β, γ))`.
    pub fn normal_form(&self, source: &PolyFunctor, target: &PolyFunctor) -> Result<PolyLens> {
        self.check(source, target)?;
        let mut table = BTreeMap::new();
        for k in source.index() {
            for x in source.positions(k)? {
                let v = self.forward[k].apply(x)?;
                let (n, a, g) = v.as_triple()?;
                let b = target.directions(n)?;
                let phi = Func::try_tabulate(b, |beta| {
                    Ok(self.backward[k]
                        .apply(&Atom::triple(n.clone(), beta.clone(), g.clone()))?
                        .clone())
                })?;
                table.insert(
                    Atom::pair(k.clone(), x.clone()),
                    Atom::triple(n.clone(), a.clone(), phi.encode(b)?),
                );
            }
        }
        PolyLens::new(source, target, table)
    }

    /// Residual `c_{n,k} = Set(b_n, t_k)` with evaluation maps.
    pub fn from_polylens(
        source: &PolyFunctor,
        target: &PolyFunctor,
        l: &PolyLens,
    ) -> Result<Ommatidium> {
        l.check(source, target)?;
        let mut residual = BTreeMap::new();
        for n in target.index() {
            for k in source.index() {
                let b = target.directions(n)?;
                let codes: FinSet = b
                    .functions_to(source.directions(k)?)
                    .iter()
                    .map(|f| f.encode(b))
                    .collect::<Result<_>>()?;
                residual.insert(Atom::pair(n.clone(), k.clone()), codes);
            }
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for k in source.index() {
            let fwd = Func::try_tabulate(source.positions(k)?, |x| {
                Ok(l.table()[&Atom::pair(k.clone(), x.clone())].clone())
            })?;
            let fb = weighted_sum(target, &residual, k, |n| target.directions(n).cloned())?;
            let bwd = Func::try_tabulate(&fb, |e| {
                let (m, beta, code) = e.as_triple()?;
                Ok(Func::decode(target.directions(m)?, code)?
                    .apply(beta)?
                    .clone())
            })?;
            forward.insert(k.clone(), fwd);
            backward.insert(k.clone(), bwd);
        }
        let o = Ommatidium {
            residual,
            forward,
            backward,
        };
        o.check(source, target)?;
        Ok(o)
    }

    /// Transport along `h: c → c'`: returns `(c, f, g ∘ (b × h))` and
    /// `(c', (a × h) ∘ f, g)`, which are one zig-zag step apart.
    pub fn transport(
        source: &PolyFunctor,
        target: &PolyFunctor,
        residual: &BTreeMap<Atom, FinSet>,
        forward: &BTreeMap<Atom, Func>,
        residual2: &BTreeMap<Atom, FinSet>,
        h: &BTreeMap<Atom, Func>,
        backward2: &BTreeMap<Atom, Func>,
    ) -> Result<(Ommatidium, Ommatidium)> {
        let mut moved_fwd = BTreeMap::new();
        let mut pulled_bwd = BTreeMap::new();
        for k in source.index() {
            let hk = |n: &Atom, g: &Atom| -> Result<Atom> {
                let map = h
                    .get(&Atom::pair(n.clone(), k.clone()))
                    .ok_or_else(|| Error::Malformed(format!("no transport map at ({n},{k})")))?;
                Ok(map.apply(g)?.clone())
            };
            let f = forward
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("no forward map at {k}")))?;
            moved_fwd.insert(
                k.clone(),
                Func::try_tabulate(source.positions(k)?, |x| {
                    let (n, a, g) = f.apply(x)?.as_triple()?;
                    Ok(Atom::triple(n.clone(), a.clone(), hk(n, g)?))
                })?,
            );
            let g2 = backward2
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("no backward map at {k}")))?;
            let fb = weighted_sum(target, residual, k, |n| target.directions(n).cloned())?;
            pulled_bwd.insert(
                k.clone(),
                Func::try_tabulate(&fb, |e| {
                    let (m, beta, g) = e.as_triple()?;
                    Ok(g2
                        .apply(&Atom::triple(m.clone(), beta.clone(), hk(m, g)?))?
                        .clone())
                })?,
            );
        }
        let original = Ommatidium {
            residual: residual.clone(),
            forward: forward.clone(),
            backward: pulled_bwd,
        };
        let moved = Ommatidium {
            residual: residual2.clone(),
            forward: moved_fwd,
            backward: backward2.clone(),
        };
        original.check(source, target)?;
        moved.check(source, target)?;
        Ok((original, moved))
    }

    /// All ommatidia with the given residual family, in canonical order.
    pub fn enumerate(
        source: &PolyFunctor,
        target: &PolyFunctor,
        residual: &BTreeMap<Atom, FinSet>,
    ) -> Result<Vec<Ommatidium>> {
        let mut fwd_choices: Vec<(Atom, Vec<Func>)> = Vec::new();
        let mut bwd_choices: Vec<(Atom, Vec<Func>)> = Vec::new();
        for k in source.index() {
            let fa = weighted_sum(target, residual, k, |n| target.positions(n).cloned())?;
            let fb = weighted_sum(target, residual, k, |n| target.directions(n).cloned())?;
            fwd_choices.push((k.clone(), source.positions(k)?.functions_to(&fa)));
            bwd_choices.push((k.clone(), fb.functions_to(source.directions(k)?)));
        }
        let fwds = families(&fwd_choices);
        let bwds = families(&bwd_choices);
        let mut out = Vec::with_capacity(fwds.len() * bwds.len());
        for f in &fwds {
            for g in &bwds {
                out.push(Ommatidium {
                    residual: residual.clone(),
                    forward: f.clone(),
                    backward: g.clone(),
                });
            }
        }
        Ok(out)
    }
}

/// Every choice of one function per key.
pub fn families(choices: &[(Atom, Vec<Func>)]) -> Vec<BTreeMap<Atom, Func>> {
    let mut out = vec![BTreeMap::new()];
    for (k, options) in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for partial in &out {
            for f in options {
                let mut m = partial.clone();
                m.insert(k.clone(), f.clone());
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Every residual family over `target.index × source.index` with sets of
/// size at most `max`, as ranges.
pub fn residual_families(
    source: &PolyFunctor,
    target: &PolyFunctor,
    max: usize,
) -> Vec<BTreeMap<Atom, FinSet>> {
    let mut out = vec![BTreeMap::new()];
    for n in target.index() {
        for k in source.index() {
            let mut next = Vec::new();
            for partial in &out {
                for size in 0..=max {
                    let mut m: BTreeMap<Atom, FinSet> = partial.clone();
                    m.insert(Atom::pair(n.clone(), k.clone()), FinSet::range(size));
                    next.push(m);
                }
            }
            out = next;
        }
    }
    out
}

/// Number of transports checked by [`ommatidium_transport_invariance`].
///
/// For every pair of residual families of sizes at most `max`, every
/// family of maps `h: c → c'`, every forward map on `c` and every backward
/// map on `c'`, the two ends of the zig-zag step must share a normal form.
pub fn ommatidium_transport_invariance(
    source: &PolyFunctor,
    target: &PolyFunctor,
    max: usize,
) -> Result<usize> {
    let mut checked = 0;
    let fams = residual_families(source, target, max);
    for c in &fams {
        let fwds: Vec<BTreeMap<Atom, Func>> = {
            let mut choices = Vec::new();
            for k in source.index() {
                let fa = weighted_sum(target, c, k, |n| target.positions(n).cloned())?;
                choices.push((k.clone(), source.positions(k)?.functions_to(&fa)));
            }
            families(&choices)
        };
        for c2 in &fams {
            let hs = families(
                &c.iter()
                    .map(|(nk, set)| (nk.clone(), set.functions_to(&c2[nk])))
                    .collect::<Vec<_>>(),
            );
            let bwds: Vec<BTreeMap<Atom, Func>> = {
                let mut choices = Vec::new();
                for k in source.index() {
                    let fb = weighted_sum(target, c2, k, |n| target.directions(n).cloned())?;
                    choices.push((k.clone(), fb.functions_to(source.directions(k)?)));
                }
                families(&choices)
            };
            for h in &hs {
                for f in &fwds {
                    for g in &bwds {
                        let (o1, o2) = Ommatidium::transport(source, target, c, f, c2, h, g)?;
                        if o1.normal_form(source, target)? != o2.normal_form(source, target)? {
                            return Err(Error::Witness(format!(
                                "normal form changes under transport h = {h:?}"
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// A compound optic `⟨a,b⟩ → ⟨s,t⟩` over `Prof`: a residual profunctor
/// `p: 𝒩 ⇸ 𝒦`, co-presheaves `a, b` on `𝒩` and `s, t` on `𝒦`, and natural
/// transformations `s ⇒ p•a`, `p•b ⇒ t`.
#[derive(Clone, Debug)]
pub struct CompoundOptic {
    residual: FinProfunctor,
    a: CoPresheaf,
    b: CoPresheaf,
    s: CoPresheaf,
    t: CoPresheaf,
    pa: Action,
    pb: Action,
    forward: NatTransformation,
    backward: NatTransformation,
}

impl CompoundOptic {
    /// Computes both actions and checks naturality of the components.
    pub fn new(
        residual: FinProfunctor,
        a: CoPresheaf,
        b: CoPresheaf,
        s: CoPresheaf,
        t: CoPresheaf,
        forward: BTreeMap<Atom, Func>,
        backward: BTreeMap<Atom, Func>,
    ) -> Result<CompoundOptic> {
        if s.base() != residual.co() || t.base() != residual.co() {
            return Err(Error::Mismatch(
                "outer co-presheaves are not over the residual's target".into(),
            ));
        }
        let pa = prof_action(&residual, &a)?;
        let pb = prof_action(&residual, &b)?;
        let forward = NatTransformation::new(s.clone(), pa.copresheaf.clone(), forward)?;
        let backward = NatTransformation::new(pb.copresheaf.clone(), t.clone(), backward)?;
        Ok(CompoundOptic {
            residual,
            a,
            b,
            s,
            t,
            pa,
            pb,
            forward,
            backward,
        })
    }

    fn from_parts(
        residual: FinProfunctor,
        ends: [CoPresheaf; 4],
        pa: Action,
        pb: Action,
        forward: NatTransformation,
        backward: NatTransformation,
    ) -> CompoundOptic {
        let [a, b, s, t] = ends;
        CompoundOptic {
            residual,
            a,
            b,
            s,
            t,
            pa,
            pb,
            forward,
            backward,
        }
    }

    /// Residual `hom`, components from the unit isomorphism `hom • a ≅ a`.
    pub fn identity(a: &CoPresheaf, b: &CoPresheaf) -> Result<CompoundOptic> {
        let (pa, ia) = action_unit_check(a)?;
        let (pb, ib) = action_unit_check(b)?;
        let forward = NatTransformation::new(
            a.clone(),
            pa.copresheaf.clone(),
            ia.components()
                .iter()
                .map(|(k, w)| (k.clone(), w.backward().clone()))
                .collect(),
        )?;
        let backward = NatTransformation::new(
            pb.copresheaf.clone(),
            b.clone(),
            ib.components()
                .iter()
                .map(|(k, w)| (k.clone(), w.forward().clone()))
                .collect(),
        )?;
        let hom = crate::prof::hom_profunctor(a.base())?;
        Ok(CompoundOptic::from_parts(
            hom,
            [a.clone(), b.clone(), a.clone(), b.clone()],
            pa,
            pb,
            forward,
            backward,
        ))
    }

    pub fn residual(&self) -> &FinProfunctor {
        &self.residual
    }

    pub fn forward(&self) -> &NatTransformation {
        &self.forward
    }

    pub fn backward(&self) -> &NatTransformation {
        &self.backward
    }

    pub fn inner(&self) -> (&CoPresheaf, &CoPresheaf) {
        (&self.a, &self.b)
    }

    pub fn outer(&self) -> (&CoPresheaf, &CoPresheaf) {
        (&self.s, &self.t)
    }

    pub fn actions(&self) -> (&Action, &Action) {
        (&self.pa, &self.pb)
    }

    /// The discrete compound optic of an ommatidium: `𝒩` and `𝒦` are the
    /// index sets of `target` and `source`.
    pub fn from_ommatidium(
        source: &PolyFunctor,
        target: &PolyFunctor,
        o: &Ommatidium,
    ) -> Result<CompoundOptic> {
        o.check(source, target)?;
        let (k_cat, s, t) = source.as_copresheaves()?;
        let (n_cat, a, b) = target.as_copresheaves()?;
        let residual = FinBifunctor::tabulate(
            n_cat,
            k_cat,
            |n, k| Ok(residual_at(&o.residual, n, k)?.clone()),
            |_, _, e| Ok(e.clone()),
            |_, _, e| Ok(e.clone()),
        )?;
        let pa = prof_action(&residual, &a)?;
        let pb = prof_action(&residual, &b)?;
        let mut fwd = BTreeMap::new();
        let mut bwd = BTreeMap::new();
        for k in source.index() {
            fwd.insert(
                k.clone(),
                Func::try_tabulate(source.positions(k)?, |x| {
                    let (n, alpha, g) = o.forward[k].apply(x)?.as_triple()?;
                    Ok(pa
                        .class(k)?
                        .inject(n, &Atom::pair(alpha.clone(), g.clone()))?
                        .clone())
                })?,
            );
            bwd.insert(
                k.clone(),
                Func::try_tabulate(pb.class(k)?.carrier(), |rep| {
                    let (m, e) = rep.as_pair()?;
                    let (beta, g) = e.as_pair()?;
                    Ok(o.backward[k]
                        .apply(&Atom::triple(m.clone(), beta.clone(), g.clone()))?
                        .clone())
                })?,
            );
        }
        let forward = NatTransformation::new(s.clone(), pa.copresheaf.clone(), fwd)?;
        let backward = NatTransformation::new(pb.copresheaf.clone(), t.clone(), bwd)?;
        Ok(CompoundOptic::from_parts(
            residual,
            [a, b, s, t],
            pa,
            pb,
            forward,
            backward,
        ))
    }

    /// The polynomial lens of a compound optic between discrete categories.
    pub fn normal_form(&self) -> Result<(PolyFunctor, PolyFunctor, PolyLens)> {
        let (n_cat, k_cat) = (self.residual.contra(), self.residual.co());
        if !n_cat.is_discrete() || !k_cat.is_discrete() {
            return Err(Error::Mismatch(
                "normal forms exist only over discrete categories".into(),
            ));
        }
        let source = PolyFunctor::new(
            k_cat.object_set(),
            self.s.fibers().clone(),
            self.t.fibers().clone(),
        )?;
        let target = PolyFunctor::new(
            n_cat.object_set(),
            self.a.fibers().clone(),
            self.b.fibers().clone(),
        )?;
        let mut table = BTreeMap::new();
        for k in k_cat.objects() {
            for x in self.s.fiber(k)? {
                let rep = self.forward.component(k)?.apply(x)?;
                let (n, e) = rep.as_pair()?;
                let (alpha, g) = e.as_pair()?;
                let b = self.b.fiber(n)?;
                let phi = Func::try_tabulate(b, |beta| {
                    let cls = self
                        .pb
                        .class(k)?
                        .inject(n, &Atom::pair(beta.clone(), g.clone()))?;
                    Ok(self.backward.component(k)?.apply(cls)?.clone())
                })?;
                table.insert(
                    Atom::pair(k.clone(), x.clone()),
                    Atom::triple(n.clone(), alpha.clone(), phi.encode(b)?),
                );
            }
        }
        let l = PolyLens::new(&source, &target, table)?;
        Ok((source, target, l))
    }
}

/// `o1: ⟨a,b⟩ → ⟨s,t⟩` over `p: 𝒩 ⇸ 𝒦` and `o2: ⟨s,t⟩ → ⟨s',t'⟩` over
/// `q: 𝒦 ⇸ 𝓛` give an optic over `p ⋄ q` with forward
/// `s' ⇒ q•s ⇒ q•(p•a) ≅ (p⋄q)•a` and backward
/// `(p⋄q)•b ≅ q•(p•b) ⇒ q•t ⇒ t'`.
pub fn compound_compose(o1: &CompoundOptic, o2: &CompoundOptic) -> Result<CompoundOptic> {
    if o1.s != o2.a || o1.t != o2.b {
        return Err(Error::Mismatch("middle co-presheaves differ".into()));
    }
    let (p, q) = (&o1.residual, &o2.residual);
    let (_, _, q_fwd) = action_on_nat(q, &o1.forward)?;
    let (_, _, q_bwd) = action_on_nat(q, &o1.backward)?;
    let wa = action_composition_check(p, q, &o1.a)?;
    let wb = action_composition_check(p, q, &o1.b)?;
    let iso_a_inv = NatTransformation::new(
        wa.iterated.copresheaf.clone(),
        wa.of_composite.copresheaf.clone(),
        wa.iso
            .components()
            .iter()
            .map(|(k, w)| (k.clone(), w.backward().clone()))
            .collect(),
    )?;
    let iso_b = NatTransformation::new(
        wb.of_composite.copresheaf.clone(),
        wb.iterated.copresheaf.clone(),
        wb.iso
            .components()
            .iter()
            .map(|(k, w)| (k.clone(), w.forward().clone()))
            .collect(),
    )?;
    let forward = o2.forward.then(&q_fwd)?.then(&iso_a_inv)?;
    let backward = iso_b.then(&q_bwd)?.then(&o2.backward)?;
    Ok(CompoundOptic::from_parts(
        wa.composite.profunctor.clone(),
        [o1.a.clone(), o1.b.clone(), o2.s.clone(), o2.t.clone()],
        wa.of_composite,
        wb.of_composite,
        forward,
        backward,
    ))
}

/// Whether `o2` is `o1` transported along the 2-cell `h: p₁ ⇒ p₂`: its
/// forward map is `(h•a) ∘ forward₁` and `backward₂ ∘ (h•b)` is
/// `backward₁`. This checks one witness; it does not decide equality.
pub fn coend_witness_check(
    o1: &CompoundOptic,
    o2: &CompoundOptic,
    h: &ProfMorphism,
) -> Result<bool> {
    if o1.a != o2.a || o1.b != o2.b || o1.s != o2.s || o1.t != o2.t {
        return Err(Error::Mismatch("optics have different endpoints".into()));
    }
    if *h.source() != o1.residual || *h.target() != o2.residual {
        return Err(Error::Mismatch(
            "2-cell does not connect the residuals".into(),
        ));
    }
    let (_, _, ha) = h.on_action(&o1.a)?;
    let (_, _, hb) = h.on_action(&o1.b)?;
    let moved = o1.forward.then(&ha)?;
    let pulled = hb.then(&o2.backward)?;
    Ok(moved.components() == o2.forward.components()
        && pulled.components() == o1.backward.components())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prof::unit_check;

    fn y() -> PolyFunctor {
        PolyFunctor::monomial(1)
    }

    fn y2() -> PolyFunctor {
        PolyFunctor::monomial(2)
    }

    #[test]
    fn evaluation_counts() {
        assert_eq!(y2().eval(&FinSet::range(3)).len(), 9);
        let p = PolyFunctor::from_terms(&[(1, 2), (1, 1)]);
        assert_eq!(p.eval(&FinSet::range(2)).len(), 6);
    }

    #[test]
    fn eval_mor_is_functorial() {
        let p = PolyFunctor::from_terms(&[(1, 2), (2, 1)]);
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    let (ya, yb, yc) = (FinSet::range(a), FinSet::range(b), FinSet::range(c));
                    for f in ya.functions_to(&yb) {
                        for g in yb.functions_to(&yc) {
                            let lhs = p.eval_mor(&ya, &g.after(&f).unwrap()).unwrap();
                            let rhs = p
                                .eval_mor(&yb, &g)
                                .unwrap()
                                .after(&p.eval_mor(&ya, &f).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lens_counts_match_oracle() {
        let l = enumerate_polylenses(&y(), &y2()).unwrap();
        assert_eq!(l.len(), 1);
        let l = enumerate_polylenses(&y2(), &y()).unwrap();
        assert_eq!(l.len(), 2);
        for (p, q, count) in [(y2(), y(), 2), (y(), y2(), 1), (y(), y(), 1)] {
            let bound = p.max_direction().max(q.max_direction()) + 1;
            let o = nat_oracle(&p, &q, bound).unwrap();
            assert_eq!(o.nats.len(), count);
            assert!(oracle_agrees(&p, &q, &o).unwrap());
            assert_eq!(polylens_count(&p, &q).unwrap(), Some(count as u128));
        }
        assert!(matches!(nat_oracle(&y2(), &y(), 2), Err(Error::Bound(_))));
    }

    #[test]
    fn empty_target_positions_admit_no_lens() {
        let q = PolyFunctor::from_terms(&[(0, 1)]);
        assert!(enumerate_polylenses(&y(), &q).unwrap().is_empty());
    }

    #[test]
    fn diagonal_and_projections() {
        let two = FinSet::range(2);
        let diag = &enumerate_polylenses(&y(), &y2()).unwrap()[0];
        let f = polylens_to_nat(&y(), &y2(), diag, &two).unwrap();
        for (x, v) in f.iter() {
            let (_, _, d) = x.as_triple().unwrap();
            let (_, _, dd) = v.as_triple().unwrap();
            let c = d.components().unwrap()[0].clone();
            assert_eq!(dd, &Atom::Tuple(vec![c.clone(), c]));
        }
        let projections = enumerate_polylenses(&y2(), &y()).unwrap();
        let maps: Vec<Func> = projections
            .iter()
            .map(|l| polylens_to_nat(&y2(), &y(), l, &two).unwrap())
            .collect();
        assert_ne!(maps[0], maps[1]);
        let id = PolyLens::identity(&y2());
        assert!(polylens_to_nat(&y2(), &y2(), &id, &two)
            .unwrap()
            .is_identity_on(&y2().eval(&two)));
    }

    #[test]
    fn ommatidium_round_trip_and_transport() {
        for (p, q) in [(y2(), y()), (y(), y2()), (y2(), y2())] {
            for l in enumerate_polylenses(&p, &q).unwrap() {
                let o = Ommatidium::from_polylens(&p, &q, &l).unwrap();
                assert_eq!(o.normal_form(&p, &q).unwrap(), l);
            }
            assert!(ommatidium_transport_invariance(&p, &q, 2).unwrap() > 0);
        }
    }

    #[test]
    fn composition_matches_pointwise_naturals() {
        let proj = enumerate_polylenses(&y2(), &y()).unwrap();
        let diag = enumerate_polylenses(&y(), &y2()).unwrap();
        for l1 in &proj {
            for l2 in &diag {
                let c = compose_polylens(&y2(), &y(), &y2(), l1, l2).unwrap();
                for n in 0..=3 {
                    let ys = FinSet::range(n);
                    let lhs = polylens_to_nat(&y2(), &y2(), &c, &ys).unwrap();
                    let rhs = polylens_to_nat(&y(), &y2(), l2, &ys)
                        .unwrap()
                        .after(&polylens_to_nat(&y2(), &y(), l1, &ys).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn discrete_compound_composition_is_lens_composition() {
        let (p, q, r) = (y2(), y(), y2());
        for l1 in enumerate_polylenses(&p, &q).unwrap() {
            for l2 in enumerate_polylenses(&q, &r).unwrap() {
                // The optic of l1 goes from Q-endpoints to P-endpoints.
                let o1 = CompoundOptic::from_ommatidium(
                    &q,
                    &r,
                    &Ommatidium::from_polylens(&q, &r, &l2).unwrap(),
                )
                .unwrap();
                let o2 = CompoundOptic::from_ommatidium(
                    &p,
                    &q,
                    &Ommatidium::from_polylens(&p, &q, &l1).unwrap(),
                )
                .unwrap();
                let c = compound_compose(&o1, &o2).unwrap();
                let (_, _, nf) = c.normal_form().unwrap();
                assert_eq!(nf, compose_polylens(&p, &q, &r, &l1, &l2).unwrap());
            }
        }
    }

    #[test]
    fn identity_compound_optic_is_a_unit() {
        // Non-discrete: 𝒩 = walking arrow, 𝒦 = point.
        let n_cat = Arc::new(FinCategory::walking_arrow());
        let k_cat = Arc::new(FinCategory::discrete([Atom::sym("k")]).unwrap());
        let p = FinBifunctor::tabulate(
            n_cat.clone(),
            k_cat.clone(),
            |n, _| Ok(n_cat.hom_set(n, &Atom::from(1))),
            |f, _, u| Ok(n_cat.compose(u, f)?.clone()),
            |_, _, u| Ok(u.clone()),
        )
        .unwrap();
        let a = CoPresheaf::yoneda(n_cat.clone(), &Atom::from(0)).unwrap();
        let b = CoPresheaf::constant(n_cat.clone(), &FinSet::range(2)).unwrap();
        let s = CoPresheaf::constant(k_cat.clone(), &FinSet::range(1)).unwrap();
        let t = CoPresheaf::constant(k_cat.clone(), &FinSet::range(2)).unwrap();
        let pa = prof_action(&p, &a).unwrap();
        let pb = prof_action(&p, &b).unwrap();
        let fwds = enumerate_nats(&s, &pa.copresheaf).unwrap();
        let bwds = enumerate_nats(&pb.copresheaf, &t).unwrap();
        assert!(!fwds.is_empty() && !bwds.is_empty());
        let units = unit_check(&p).unwrap();
        let left = ProfMorphism::from_iso(&units.hom_left.profunctor, &p, &units.left).unwrap();
        let right = ProfMorphism::from_iso(&units.hom_right.profunctor, &p, &units.right).unwrap();
        for f in &fwds {
            for g in bwds.iter().take(4) {
                let o = CompoundOptic::new(
                    p.clone(),
                    a.clone(),
                    b.clone(),
                    s.clone(),
                    t.clone(),
                    f.components().clone(),
                    g.components().clone(),
                )
                .unwrap();
                let lc = compound_compose(&CompoundOptic::identity(&a, &b).unwrap(), &o).unwrap();
                assert!(coend_witness_check(&lc, &o, &left).unwrap());
                let rc = compound_compose(&o, &CompoundOptic::identity(&s, &t).unwrap()).unwrap();
                assert!(coend_witness_check(&rc, &o, &right).unwrap());
            }
        }
    }

    #[test]
    fn witness_check_rejects_wrong_cells() {
        let (p, q) = (y2(), y());
        let lenses = enumerate_polylenses(&p, &q).unwrap();
        let o = CompoundOptic::from_ommatidium(
            &p,
            &q,
            &Ommatidium::from_polylens(&p, &q, &lenses[0]).unwrap(),
        )
        .unwrap();
        let id = ProfMorphism::identity(o.residual());
        assert!(coend_witness_check(&o, &o, &id).unwrap());
        let other = CompoundOptic::from_ommatidium(
            &p,
            &q,
            &Ommatidium::from_polylens(&p, &q, &lenses[1]).unwrap(),
        )
        .unwrap();
        assert!(!coend_witness_check(&o, &other, &id).unwrap());
    }
}

//! Coends of finite set-valued bifunctors, computed as explicit quotient
//! sets.
//!
//! A coend `∫^c D(c,c)` is the disjoint union of the diagonal fibers modulo
//! the relation generated by `D(f,1)(x) ~ D(1,f)(x)` for every morphism
//! `f: c → c'` and every `x ∈ D(c',c)`. The quotient is computed with a
//! union-find whose roots are always the least member of their class, so the
//! class representative is canonical.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::atom::{Atom, FinSet, Func};
use crate::error::{Error, Result};
use crate::fincat::{CoPresheaf, FinCategory};
use crate::witness::{IsoWitness, NaturalIso};

/// A functor `contra^op × co → Set` given by explicit tables.
///
/// `left[(f, y)]` is the contravariant action of `f: a → b` in the first
/// slot, a function `fiber(b, y) → fiber(a, y)`. `right[(x, g)]` is the
/// covariant action of `g: y → z` in the second slot, a function
/// `fiber(x, y) → fiber(x, z)`. When `contra == co` this is the integrand
/// of a coend; with different categories it is a profunctor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinBifunctor {
    contra: Arc<FinCategory>,
    co: Arc<FinCategory>,
    fibers: BTreeMap<(Atom, Atom), FinSet>,
    left: BTreeMap<(Atom, Atom), Func>,
    right: BTreeMap<(Atom, Atom), Func>,
}

impl FinBifunctor {
    /// Identity actions may be omitted; all other tables must be total.
    pub fn new(
        contra: Arc<FinCategory>,
        co: Arc<FinCategory>,
        fibers: BTreeMap<(Atom, Atom), FinSet>,
        mut left: BTreeMap<(Atom, Atom), Func>,
        mut right: BTreeMap<(Atom, Atom), Func>,
    ) -> Result<FinBifunctor> {
        for x in contra.objects() {
            for y in co.objects() {
                let fiber = fibers
                    .get(&(x.clone(), y.clone()))
                    .ok_or_else(|| Error::Malformed(format!("missing fiber at ({x},{y})")))?;
                if let Ok(ix) = contra.id(x) {
                    left.entry((ix.clone(), y.clone()))
                        .or_insert_with(|| Func::identity(fiber));
                }
                if let Ok(iy) = co.id(y) {
                    right
                        .entry((x.clone(), iy.clone()))
                        .or_insert_with(|| Func::identity(fiber));
                }
            }
        }
        if fibers.len() != contra.objects().len() * co.objects().len() {
            return Err(Error::Malformed("fibers given at unknown objects".into()));
        }
        for (f, a, b) in contra.morphisms() {
            for y in co.objects() {
                let table = left.get(&(f.clone(), y.clone())).ok_or_else(|| {
                    Error::Malformed(format!("missing left action of {f} at {y}"))
                })?;
                let dom = &fibers[&(b.clone(), y.clone())];
                let cod = &fibers[&(a.clone(), y.clone())];
                if !table.is_total_on(dom, cod) {
                    return Err(Error::Malformed(format!(
                        "left action of {f} at {y} is not total"
                    )));
                }
            }
        }
        for x in contra.objects() {
            for (g, y, z) in co.morphisms() {
                let table = right.get(&(x.clone(), g.clone())).ok_or_else(|| {
                    Error::Malformed(format!("missing right action of {g} at {x}"))
                })?;
                let dom = &fibers[&(x.clone(), y.clone())];
                let cod = &fibers[&(x.clone(), z.clone())];
                if !table.is_total_on(dom, cod) {
                    return Err(Error::Malformed(format!(
                        "right action of {g} at {x} is not total"
                    )));
                }
            }
        }
        if left.len() != contra.morphism_count() * co.objects().len()
            || right.len() != co.morphism_count() * contra.objects().len()
        {
            return Err(Error::Malformed(
                "actions given for unknown morphisms".into(),
            ));
        }
        Ok(FinBifunctor {
            contra,
            co,
            fibers,
            left,
            right,
        })
    }

    /// Builds every table from closures: `fiber(x, y)`, `left(f, y, elem)`
    /// and `right(x, g, elem)`.
    pub fn tabulate(
        contra: Arc<FinCategory>,
        co: Arc<FinCategory>,
        mut fiber: impl FnMut(&Atom, &Atom) -> Result<FinSet>,
        mut left: impl FnMut(&Atom, &Atom, &Atom) -> Result<Atom>,
        mut right: impl FnMut(&Atom, &Atom, &Atom) -> Result<Atom>,
    ) -> Result<FinBifunctor> {
        let mut fibers = BTreeMap::new();
        for x in contra.objects() {
            for y in co.objects() {
                fibers.insert((x.clone(), y.clone()), fiber(x, y)?);
            }
        }
        let mut lt = BTreeMap::new();
        for (f, _, b) in contra.morphisms() {
            for y in co.objects() {
                let dom = &fibers[&(b.clone(), y.clone())];
                lt.insert(
                    (f.clone(), y.clone()),
                    Func::try_tabulate(dom, |e| left(f, y, e))?,
                );
            }
        }
        let mut rt = BTreeMap::new();
        for x in contra.objects() {
            for (g, y, _) in co.morphisms() {
                let dom = &fibers[&(x.clone(), y.clone())];
                rt.insert(
                    (x.clone(), g.clone()),
                    Func::try_tabulate(dom, |e| right(x, g, e))?,
                );
            }
        }
        FinBifunctor::new(contra, co, fibers, lt, rt)
    }

    pub fn contra(&self) -> &Arc<FinCategory> {
        &self.contra
    }

    pub fn co(&self) -> &Arc<FinCategory> {
        &self.co
    }

    pub fn fiber(&self, x: &Atom, y: &Atom) -> Result<&FinSet> {
        self.fibers
            .get(&(x.clone(), y.clone()))
            .ok_or_else(|| Error::Malformed(format!("no fiber at ({x},{y})")))
    }

    pub fn fibers(&self) -> &BTreeMap<(Atom, Atom), FinSet> {
        &self.fibers
    }

    pub fn left_tables(&self) -> &BTreeMap<(Atom, Atom), Func> {
        &self.left
    }

    pub fn right_tables(&self) -> &BTreeMap<(Atom, Atom), Func> {
        &self.right
    }

    /// Contravariant action of `f` (a morphism of `contra`) at column `y`.
    pub fn left(&self, f: &Atom, y: &Atom, elem: &Atom) -> Result<&Atom> {
        self.left
            .get(&(f.clone(), y.clone()))
            .ok_or_else(|| Error::UnknownMorphism(f.clone()))?
            .apply(elem)
    }

    /// Covariant action of `g` (a morphism of `co`) at row `x`.
    pub fn right(&self, x: &Atom, g: &Atom, elem: &Atom) -> Result<&Atom> {
        self.right
            .get(&(x.clone(), g.clone()))
            .ok_or_else(|| Error::UnknownMorphism(g.clone()))?
            .apply(elem)
    }

    /// Functoriality of both actions and their interchange law, checked on
    /// every instance.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for y in self.co.objects() {
            for (x, ix) in self.contra.identities() {
                if !self.left[&(ix.clone(), y.clone())]
                    .is_identity_on(&self.fibers[&(x.clone(), y.clone())])
                {
                    problems.push(format!("left identity of {x} acts non-trivially at {y}"));
                }
            }
            for ((g, f), gf) in self.contra.compose_table() {
                let lf = &self.left[&(f.clone(), y.clone())];
                let lg = &self.left[&(g.clone(), y.clone())];
                match lf.after(lg) {
                    Ok(c) if c == self.left[&(gf.clone(), y.clone())] => {}
                    _ => problems.push(format!("left action of {g}∘{f} at {y} not functorial")),
                }
            }
        }
        for x in self.contra.objects() {
            for (y, iy) in self.co.identities() {
                if !self.right[&(x.clone(), iy.clone())]
                    .is_identity_on(&self.fibers[&(x.clone(), y.clone())])
                {
                    problems.push(format!("right identity of {y} acts non-trivially at {x}"));
                }
            }
            for ((g, f), gf) in self.co.compose_table() {
                let rf = &self.right[&(x.clone(), f.clone())];
                let rg = &self.right[&(x.clone(), g.clone())];
                match rg.after(rf) {
                    Ok(c) if c == self.right[&(x.clone(), gf.clone())] => {}
                    _ => problems.push(format!("right action of {g}∘{f} at {x} not functorial")),
                }
            }
        }
        for (f, a, b) in self.contra.morphisms() {
            for (g, y, z) in self.co.morphisms() {
                let l_then_r =
                    self.right[&(a.clone(), g.clone())].after(&self.left[&(f.clone(), y.clone())]);
                let r_then_l =
                    self.left[&(f.clone(), z.clone())].after(&self.right[&(b.clone(), g.clone())]);
                match (l_then_r, r_then_l) {
                    (Ok(p), Ok(q)) if p == q => {}
                    _ => problems.push(format!("actions of {f} and {g} do not commute")),
                }
            }
        }
        problems
    }

    /// `S × D`, with elements `(s, x)`.
    pub fn scale(&self, set: &FinSet) -> Result<FinBifunctor> {
        FinBifunctor::tabulate(
            self.contra.clone(),
            self.co.clone(),
            |x, y| Ok(set.product(self.fiber(x, y)?)),
            |f, y, e| {
                let (s, v) = e.as_pair()?;
                Ok(Atom::pair(s.clone(), self.left(f, y, v)?.clone()))
            },
            |x, g, e| {
                let (s, v) = e.as_pair()?;
                Ok(Atom::pair(s.clone(), self.right(x, g, v)?.clone()))
            },
        )
    }
}

/// The quotient `(⨿_c D(c,c)) / ≈` together with its injections.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QuotientSet {
    carrier: FinSet,
    classes: BTreeMap<Atom, Vec<(Atom, Atom)>>,
    #[serde(skip)]
    inject: BTreeMap<(Atom, Atom), Atom>,
}

impl QuotientSet {
    /// Canonical class representatives, encoded as `(c, x)`.
    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// `ι_c(x)`.
    pub fn inject(&self, c: &Atom, x: &Atom) -> Result<&Atom> {
        self.inject
            .get(&(c.clone(), x.clone()))
            .ok_or_else(|| Error::Malformed(format!("({c},{x}) is not a diagonal element")))
    }

    /// Members of the class with the given representative, in order.
    pub fn members(&self, rep: &Atom) -> Result<&[(Atom, Atom)]> {
        self.classes
            .get(rep)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Malformed(format!("{rep} is not a class representative")))
    }

    pub fn classes(&self) -> &BTreeMap<Atom, Vec<(Atom, Atom)>> {
        &self.classes
    }

    /// Splits a representative into `(c, x)`.
    pub fn unpack<'a>(&self, rep: &'a Atom) -> Result<(&'a Atom, &'a Atom)> {
        rep.as_pair()
    }

    /// The injection table as a function on the disjoint union, whose
    /// elements are encoded `(c, x)`.
    pub fn injection_table(&self) -> Func {
        Func::from_pairs(
            self.inject
                .iter()
                .map(|((c, x), r)| (Atom::pair(c.clone(), x.clone()), r.clone())),
        )
    }

    /// Maps classes to classes of `target` through a member-level function,
    /// failing if two members of one class land in different target classes.
    pub fn map_classes(
        &self,
        target: &QuotientSet,
        mut f: impl FnMut(&Atom, &Atom) -> Result<(Atom, Atom)>,
    ) -> Result<Func> {
        let mut table = Vec::with_capacity(self.classes.len());
        for (rep, members) in &self.classes {
            let mut image: Option<Atom> = None;
            for (c, x) in members {
                let (c2, x2) = f(c, x)?;
                let cls = target.inject(&c2, &x2)?.clone();
                match &image {
                    None => image = Some(cls),
                    Some(prev) if *prev == cls => {}
                    Some(prev) => {
                        return Err(Error::Witness(format!(
                            "map on class {rep} is not well defined: {prev} vs {cls}"
                        )))
                    }
                }
            }
            table.push((rep.clone(), image.expect("classes are non-empty")));
        }
        Ok(Func::from_pairs(table))
    }

    /// Checks the co-wedge condition `ι_c(D(f,1)x) = ι_c'(D(1,f)x)`.
    pub fn verify_cowedge(&self, d: &FinBifunctor) -> Result<()> {
        let base = d.contra();
        for (f, c, c2) in base.morphisms() {
            for x in d.fiber(c2, c)? {
                let l = self.inject(c, d.left(f, c, x)?)?;
                let r = self.inject(c2, d.right(c2, f, x)?)?;
                if l != r {
                    return Err(Error::Witness(format!(
                        "co-wedge condition fails at {f}, {x}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Verifies a family of bijections indexed by `(x, y)` pairs is natural in
/// both slots between two bifunctors over the same categories.
pub fn check_natural_iso_bifunctor(
    iso: &NaturalIso,
    source: &FinBifunctor,
    target: &FinBifunctor,
) -> Result<()> {
    if source.contra != target.contra || source.co != target.co {
        return Err(Error::Mismatch(
            "natural isomorphism between bifunctors on different categories".into(),
        ));
    }
    let at = |x: &Atom, y: &Atom| iso.component(&Atom::pair(x.clone(), y.clone()));
    for ((x, y), fiber) in &source.fibers {
        let w = at(x, y)?;
        if w.domain() != fiber || w.codomain() != &target.fibers[&(x.clone(), y.clone())] {
            return Err(Error::Witness(format!(
                "component at ({x},{y}) has the wrong endpoints"
            )));
        }
    }
    for (f, a, b) in source.contra.morphisms() {
        for y in source.co.objects() {
            for e in source.fiber(b, y)? {
                let l = at(a, y)?.forward().apply(source.left(f, y, e)?)?;
                let r = target.left(f, y, at(b, y)?.forward().apply(e)?)?;
                if l != r {
                    return Err(Error::Witness(format!(
                        "not natural in the first slot at {f}, {e}"
                    )));
                }
            }
        }
    }
    for x in source.contra.objects() {
        for (g, y, z) in source.co.morphisms() {
            for e in source.fiber(x, y)? {
                let l = at(x, z)?.forward().apply(source.right(x, g, e)?)?;
                let r = target.right(x, g, at(x, y)?.forward().apply(e)?)?;
                if l != r {
                    return Err(Error::Witness(format!(
                        "not natural in the second slot at {g}, {e}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Union-find whose root is always the least index of its class.
struct MinUnionFind {
    parent: Vec<usize>,
}

impl MinUnionFind {
    fn new(n: usize) -> MinUnionFind {
        MinUnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Computes `∫^c D(c,c)`. The bifunctor must be over a single category.
pub fn coend(d: &FinBifunctor) -> Result<QuotientSet> {
    if d.contra != d.co {
        return Err(Error::Mismatch(
            "coend needs a bifunctor C^op × C → Set".into(),
        ));
    }
    let base = d.contra.clone();

    // Diagonal elements, enumerated in (object, element) order.
    let mut elems: Vec<(Atom, Atom)> = Vec::new();
    let mut index: BTreeMap<(Atom, Atom), usize> = BTreeMap::new();
    for c in base.objects() {
        for x in d.fiber(c, c)? {
            index.insert((c.clone(), x.clone()), elems.len());
            elems.push((c.clone(), x.clone()));
        }
    }

    let mut uf = MinUnionFind::new(elems.len());
    for (f, c, c2) in base.morphisms() {
        if base.is_identity(f) {
            continue;
        }
        // x ∈ D(c', c): D(f,1)x ∈ D(c,c) ~ D(1,f)x ∈ D(c',c').
        for x in d.fiber(c2, c)? {
            let l = index[&(c.clone(), d.left(f, c, x)?.clone())];
            let r = index[&(c2.clone(), d.right(c2, f, x)?.clone())];
            uf.union(l, r);
        }
    }

    let mut classes: BTreeMap<Atom, Vec<(Atom, Atom)>> = BTreeMap::new();
    let mut inject = BTreeMap::new();
    for (i, (c, x)) in elems.iter().enumerate() {
        let root = uf.find(i);
        let rep = Atom::pair(elems[root].0.clone(), elems[root].1.clone());
        classes
            .entry(rep.clone())
            .or_default()
            .push((c.clone(), x.clone()));
        inject.insert((c.clone(), x.clone()), rep);
    }
    let carrier = classes.keys().cloned().collect();
    Ok(QuotientSet {
        carrier,
        classes,
        inject,
    })
}

/// The integrand `(c⁻, c⁺) ↦ base(c⁻, a) × F(c⁺)` whose coend is `F(a)`.
/// Elements are pairs `(u, x)` with `u: c⁻ → a`.
pub fn coyoneda_integrand(f: &CoPresheaf, a: &Atom) -> Result<FinBifunctor> {
    let base = f.base().clone();
    base.check_object(a)?;
    FinBifunctor::tabulate(
        base.clone(),
        base.clone(),
        |cm, cp| Ok(base.hom_set(cm, a).product(f.fiber(cp)?)),
        |h, _, e| {
            let (u, x) = e.as_pair()?;
            Ok(Atom::pair(base.compose(u, h)?.clone(), x.clone()))
        },
        |_, g, e| {
            let (u, x) = e.as_pair()?;
            Ok(Atom::pair(u.clone(), f.act(g, x)?.clone()))
        },
    )
}

/// Co-Yoneda: `∫^c base(c, a) × F(c) ≅ F(a)`, forward by evaluation
/// `[(u, x)] ↦ F(u)(x)` and backward by `x ↦ [(id_a, x)]`.
pub fn coyoneda_check(f: &CoPresheaf, a: &Atom) -> Result<IsoWitness> {
    let d = coyoneda_integrand(f, a)?;
    let q = coend(&d)?;
    let forward = Func::try_tabulate(q.carrier(), |rep| {
        let (_, e) = rep.as_pair()?;
        let (u, x) = e.as_pair()?;
        Ok(f.act(u, x)?.clone())
    })?;
    let id_a = f.base().id(a)?.clone();
    let backward = Func::try_tabulate(f.fiber(a)?, |x| {
        Ok(q.inject(a, &Atom::pair(id_a.clone(), x.clone()))?.clone())
    })?;
    IsoWitness::new(q.carrier().clone(), f.fiber(a)?.clone(), forward, backward)
}

/// The three ways of computing a double coend, related by explicit
/// bijections out of the coend over the product category.
#[derive(Clone, Debug)]
pub struct FubiniWitness {
    pub product: QuotientSet,
    /// `∫^{(c,d)} ≅ ∫^c ∫^d`.
    pub c_outer: IsoWitness,
    /// `∫^{(c,d)} ≅ ∫^d ∫^c`.
    pub d_outer: IsoWitness,
}

impl FubiniWitness {
    /// `∫^c ∫^d ≅ ∫^d ∫^c`.
    pub fn interchange(&self) -> Result<IsoWitness> {
        self.c_outer.inverse().then(&self.d_outer)
    }
}

/// Partial coend over the second factor of a bifunctor on `outer × inner`.
/// Returns the resulting bifunctor on `outer` and the inner quotient at each
/// `(c⁻, c⁺)`.
pub fn coend_inner(
    d: &FinBifunctor,
    outer: &Arc<FinCategory>,
    inner: &Arc<FinCategory>,
) -> Result<(FinBifunctor, BTreeMap<(Atom, Atom), QuotientSet>)> {
    let product = outer.product(inner);
    if **d.contra() != product || **d.co() != product {
        return Err(Error::Mismatch(
            "bifunctor is not over the product category".into(),
        ));
    }
    let pair = |a: &Atom, b: &Atom| Atom::pair(a.clone(), b.clone());
    let mut quotients = BTreeMap::new();
    for cm in outer.objects() {
        for cp in outer.objects() {
            let id_cm = outer.id(cm)?;
            let id_cp = outer.id(cp)?;
            let slice = FinBifunctor::tabulate(
                inner.clone(),
                inner.clone(),
                |dm, dp| Ok(d.fiber(&pair(cm, dm), &pair(cp, dp))?.clone()),
                |g, dp, e| Ok(d.left(&pair(id_cm, g), &pair(cp, dp), e)?.clone()),
                |dm, g, e| Ok(d.right(&pair(cm, dm), &pair(id_cp, g), e)?.clone()),
            )?;
            quotients.insert((cm.clone(), cp.clone()), coend(&slice)?);
        }
    }
    let q = &quotients;
    let result = FinBifunctor::tabulate(
        outer.clone(),
        outer.clone(),
        |cm, cp| Ok(q[&(cm.clone(), cp.clone())].carrier().clone()),
        |f, cp, rep| {
            // f: a → b; class at (b, c⁺) to class at (a, c⁺).
            let (a, _) = outer.endpoints(f)?;
            let (dd, x) = rep.as_pair()?;
            let moved = d.left(&pair(f, inner.id(dd)?), &pair(cp, dd), x)?;
            Ok(q[&(a.clone(), cp.clone())].inject(dd, moved)?.clone())
        },
        |cm, g, rep| {
            let (_, b) = outer.endpoints(g)?;
            let (dd, x) = rep.as_pair()?;
            let moved = d.right(&pair(cm, dd), &pair(g, inner.id(dd)?), x)?;
            Ok(q[&(cm.clone(), b.clone())].inject(dd, moved)?.clone())
        },
    )?;
    Ok((result, quotients))
}

/// Relabels a bifunctor on `c × d` as one on `d × c`.
pub fn swap_factors(
    d: &FinBifunctor,
    first: &Arc<FinCategory>,
    second: &Arc<FinCategory>,
) -> Result<FinBifunctor> {
    let swapped = Arc::new(second.product(first));
    let flip = |a: &Atom| -> Result<Atom> {
        let (x, y) = a.as_pair()?;
        Ok(Atom::pair(y.clone(), x.clone()))
    };
    FinBifunctor::tabulate(
        swapped.clone(),
        swapped,
        |x, y| Ok(d.fiber(&flip(x)?, &flip(y)?)?.clone()),
        |f, y, e| Ok(d.left(&flip(f)?, &flip(y)?, e)?.clone()),
        |x, g, e| Ok(d.right(&flip(x)?, &flip(g)?, e)?.clone()),
    )
}

/// Fubini for coends over `c × d`, each of the three carriers computed by a
/// separate call to [`coend`].
pub fn fubini_check(
    c: &Arc<FinCategory>,
    d_cat: &Arc<FinCategory>,
    d: &FinBifunctor,
) -> Result<FubiniWitness> {
    let product = coend(d)?;

    let (outer_c, inner_d) = coend_inner(d, c, d_cat)?;
    let iter_c = coend(&outer_c)?;
    let swapped = swap_factors(d, c, d_cat)?;
    let (outer_d, inner_c) = coend_inner(&swapped, d_cat, c)?;
    let iter_d = coend(&outer_d)?;

    let c_outer = IsoWitness::new(
        product.carrier().clone(),
        iter_c.carrier().clone(),
        Func::try_tabulate(product.carrier(), |rep| {
            let (cd, x) = rep.as_pair()?;
            let (cc, dd) = cd.as_pair()?;
            let inner = inner_d[&(cc.clone(), cc.clone())].inject(dd, x)?;
            Ok(iter_c.inject(cc, inner)?.clone())
        })?,
        Func::try_tabulate(iter_c.carrier(), |rep| {
            let (cc, inner) = rep.as_pair()?;
            let (dd, x) = inner.as_pair()?;
            Ok(product
                .inject(&Atom::pair(cc.clone(), dd.clone()), x)?
                .clone())
        })?,
    )?;
    let d_outer = IsoWitness::new(
        product.carrier().clone(),
        iter_d.carrier().clone(),
        Func::try_tabulate(product.carrier(), |rep| {
            let (cd, x) = rep.as_pair()?;
            let (cc, dd) = cd.as_pair()?;
            let inner = inner_c[&(dd.clone(), dd.clone())].inject(cc, x)?;
            Ok(iter_d.inject(dd, inner)?.clone())
        })?,
        Func::try_tabulate(iter_d.carrier(), |rep| {
            let (dd, inner) = rep.as_pair()?;
            let (cc, x) = inner.as_pair()?;
            Ok(product
                .inject(&Atom::pair(cc.clone(), dd.clone()), x)?
                .clone())
        })?,
    )?;
    Ok(FubiniWitness {
        product,
        c_outer,
        d_outer,
    })
}

/// `∫^c (S × D) ≅ S × ∫^c D` by `[(c, (s, x))] ↦ (s, [(c, x)])`.
pub fn product_preservation_check(d: &FinBifunctor, set: &FinSet) -> Result<IsoWitness> {
    let plain = coend(d)?;
    let scaled = coend(&d.scale(set)?)?;
    let target = set.product(plain.carrier());
    IsoWitness::new(
        scaled.carrier().clone(),
        target.clone(),
        Func::try_tabulate(scaled.carrier(), |rep| {
            let (c, e) = rep.as_pair()?;
            let (s, x) = e.as_pair()?;
            Ok(Atom::pair(s.clone(), plain.inject(c, x)?.clone()))
        })?,
        Func::try_tabulate(&target, |e| {
            let (s, rep) = e.as_pair()?;
            let (c, x) = rep.as_pair()?;
            Ok(scaled.inject(c, &Atom::pair(s.clone(), x.clone()))?.clone())
        })?,
    )
}

/// A set viewed as a bifunctor over the one-object discrete category. Its
/// coend is the set itself; used to check that re-quotienting a carrier is
/// idempotent.
pub fn point_bifunctor(set: &FinSet) -> Result<FinBifunctor> {
    let point = Arc::new(FinCategory::discrete([Atom::sym("*")])?);
    FinBifunctor::tabulate(
        point.clone(),
        point,
        |_, _| Ok(set.clone()),
        |_, _, e| Ok(e.clone()),
        |_, _, e| Ok(e.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::zigzag_classes;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn hom_bifunctor(c: &Arc<FinCategory>) -> FinBifunctor {
        FinBifunctor::tabulate(
            c.clone(),
            c.clone(),
            |x, y| Ok(c.hom_set(x, y)),
            |f, _, u| Ok(c.compose(u, f)?.clone()),
            |_, g, u| Ok(c.compose(g, u)?.clone()),
        )
        .unwrap()
    }

    #[test]
    fn discrete_coend_is_disjoint_union() {
        let c = arc(FinCategory::discrete(["a", "b"].map(Atom::sym)).unwrap());
        let d = FinBifunctor::tabulate(
            c.clone(),
            c.clone(),
            |x, y| {
                Ok(if x == y {
                    FinSet::range(2)
                } else {
                    FinSet::empty()
                })
            },
            |_, _, e| Ok(e.clone()),
            |_, _, e| Ok(e.clone()),
        )
        .unwrap();
        assert!(d.validate().is_empty());
        let q = coend(&d).unwrap();
        assert_eq!(q.len(), 4);
        for members in q.classes().values() {
            assert_eq!(members.len(), 1);
        }
    }

    #[test]
    fn walking_arrow_hom_times_point_matches_closure() {
        // d(c⁻, c⁺) = C(c⁻, 1) × 1.
        let c = arc(FinCategory::walking_arrow());
        let one = Atom::from(1);
        let d = FinBifunctor::tabulate(
            c.clone(),
            c.clone(),
            |x, _| {
                Ok(c.hom_set(x, &one)
                    .product(&FinSet::singleton(Atom::sym("*"))))
            },
            |f, _, e| {
                let (u, s) = e.as_pair()?;
                Ok(Atom::pair(c.compose(u, f)?.clone(), s.clone()))
            },
            |_, _, e| Ok(e.clone()),
        )
        .unwrap();
        assert!(d.validate().is_empty());
        let q = coend(&d).unwrap();
        let oracle = zigzag_classes(&d).unwrap();
        assert_eq!(q.len(), oracle.len());
        assert_eq!(q.len(), 1);
        q.verify_cowedge(&d).unwrap();
    }

    #[test]
    fn hom_coend_counts_isomorphism_classes() {
        // ∫^c C(c,c) for a thin category: one class per isomorphism class of objects.
        let c = arc(FinCategory::thin(
            ["a", "b", "c", "d"].map(Atom::sym),
            [
                (Atom::sym("a"), Atom::sym("b")),
                (Atom::sym("c"), Atom::sym("b")),
            ],
        )
        .unwrap());
        let q = coend(&hom_bifunctor(&c)).unwrap();
        assert_eq!(q.len(), 4);
        let iso = arc(FinCategory::walking_iso());
        let q = coend(&hom_bifunctor(&iso)).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(
            q.members(&Atom::pair(
                Atom::from(0),
                Atom::pair(Atom::from(0), Atom::from(0))
            ))
            .unwrap()
            .len(),
            2
        );
    }

    #[test]
    fn representative_is_least_member() {
        let c = arc(FinCategory::walking_iso());
        let q = coend(&hom_bifunctor(&c)).unwrap();
        for (rep, members) in q.classes() {
            let least = &members[0];
            assert_eq!(rep, &Atom::pair(least.0.clone(), least.1.clone()));
            assert!(members.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn coyoneda_singleton_and_empty() {
        let c = arc(FinCategory::walking_arrow());
        let one = CoPresheaf::constant(c.clone(), &FinSet::range(1)).unwrap();
        for a in c.objects() {
            assert_eq!(coyoneda_check(&one, a).unwrap().domain().len(), 1);
        }
        let d = arc(FinCategory::discrete(["a", "b"].map(Atom::sym)).unwrap());
        let f = CoPresheaf::tabulate(
            d,
            |a| {
                Ok(if a == &Atom::sym("a") {
                    FinSet::empty()
                } else {
                    FinSet::range(3)
                })
            },
            |_, x| Ok(x.clone()),
        )
        .unwrap();
        assert!(coyoneda_check(&f, &Atom::sym("a"))
            .unwrap()
            .domain()
            .is_empty());
        assert_eq!(
            coyoneda_check(&f, &Atom::sym("b")).unwrap().domain().len(),
            3
        );
    }

    #[test]
    fn coyoneda_on_representable() {
        let c = arc(FinCategory::walking_arrow());
        let y0 = CoPresheaf::yoneda(c.clone(), &Atom::from(0)).unwrap();
        let w = coyoneda_check(&y0, &Atom::from(0)).unwrap();
        assert_eq!(w.domain().len(), 1);
        let w = coyoneda_check(&y0, &Atom::from(1)).unwrap();
        assert_eq!(w.domain().len(), 1);
    }

    #[test]
    fn fubini_on_walking_arrow_squared() {
        let c = arc(FinCategory::walking_arrow());
        let cc = arc(c.product(&c));
        let h = hom_bifunctor(&cc);
        let w = fubini_check(&c, &c, &h).unwrap();
        assert_eq!(w.product.len(), 4);
        w.interchange().unwrap();
    }

    #[test]
    fn fubini_with_empty_factor() {
        let c = arc(FinCategory::walking_arrow());
        let e = arc(FinCategory::discrete(std::iter::empty()).unwrap());
        let ce = arc(c.product(&e));
        let h = hom_bifunctor(&ce);
        let w = fubini_check(&c, &e, &h).unwrap();
        assert!(w.product.is_empty());
        assert!(w.c_outer.codomain().is_empty());
        assert!(w.d_outer.codomain().is_empty());
    }

    #[test]
    fn products_preserve_coends() {
        let c = arc(FinCategory::walking_iso());
        let h = hom_bifunctor(&c);
        for n in 0..3 {
            let w = product_preservation_check(&h, &FinSet::range(n)).unwrap();
            assert_eq!(w.domain().len(), n);
        }
    }

    #[test]
    fn coend_of_carrier_is_idempotent() {
        let c = arc(FinCategory::walking_iso());
        let q = coend(&hom_bifunctor(&c)).unwrap();
        let again = coend(&point_bifunctor(q.carrier()).unwrap()).unwrap();
        assert_eq!(again.len(), q.len());
    }

    #[test]
    fn rejects_two_sided_bifunctor() {
        let c = arc(FinCategory::walking_arrow());
        let d = arc(FinCategory::walking_iso());
        let p = FinBifunctor::tabulate(
            c,
            d,
            |_, _| Ok(FinSet::empty()),
            |_, _, e| Ok(e.clone()),
            |_, _, e| Ok(e.clone()),
        )
        .unwrap();
        assert!(matches!(coend(&p), Err(Error::Mismatch(_))));
    }

    #[test]
    fn non_commuting_actions_are_reported() {
        // t∘t = e, but the right action of t is not invertible.
        let two = FinSet::new(["e", "t"].map(Atom::sym)).unwrap();
        let e = Atom::sym("e");
        let m = arc(FinCategory::monoid(&two, &e, |g, f| {
            if g == f {
                Atom::sym("e")
            } else {
                Atom::sym("t")
            }
        })
        .unwrap());
        let swap = |x: &Atom| {
            if x == &Atom::from(0) {
                Atom::from(1)
            } else {
                Atom::from(0)
            }
        };
        let d = FinBifunctor::tabulate(
            m.clone(),
            m,
            |_, _| Ok(FinSet::range(2)),
            |f, _, x| {
                Ok(if f == &Atom::sym("t") {
                    swap(x)
                } else {
                    x.clone()
                })
            },
            |_, g, x| {
                Ok(if g == &Atom::sym("t") {
                    Atom::from(0)
                } else {
                    x.clone()
                })
            },
        )
        .unwrap();
        let problems = d.validate();
        assert!(!problems.is_empty());
    }
}

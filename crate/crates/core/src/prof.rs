//! Profunctors between finite categories as 1-cells of `Prof`.
//!
//! A profunctor `p: 𝒩 ⇸ 𝒦` is a functor `𝒩^op × 𝒦 → Set`, stored as a
//! [`FinBifunctor`] with `contra = 𝒩` and `co = 𝒦`. Composition `p ⋄ q`,
//! the hom unit and the action `(p • a)(k) = ∫^n a(n) × p⟨n,k⟩` on
//! co-presheaves are all computed through [`coend`], and every result keeps
//! the quotient it came from so that isomorphisms can be written down
//! element by element.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::atom::{Atom, Func};
use crate::coend::{check_natural_iso_bifunctor, coend, fubini_check, FinBifunctor, QuotientSet};
use crate::error::{Error, Result};
use crate::fincat::{check_natural_iso, CoPresheaf, FinCategory, NatTransformation};
use crate::witness::{IsoWitness, NaturalIso};

pub type FinProfunctor = FinBifunctor;

fn pair(a: &Atom, b: &Atom) -> Atom {
    Atom::pair(a.clone(), b.clone())
}

/// `hom: 𝒞 ⇸ 𝒞`, acting by pre- and post-composition.
pub fn hom_profunctor(c: &Arc<FinCategory>) -> Result<FinProfunctor> {
    FinBifunctor::tabulate(
        c.clone(),
        c.clone(),
        |x, y| Ok(c.hom_set(x, y)),
        |f, _, u| Ok(c.compose(u, f)?.clone()),
        |_, g, u| Ok(c.compose(g, u)?.clone()),
    )
}

/// `p ⋄ q` with the coend behind each entry.
#[derive(Clone, Debug)]
pub struct Composite {
    pub profunctor: FinProfunctor,
    pub classes: BTreeMap<(Atom, Atom), QuotientSet>,
}

impl Composite {
    pub fn class(&self, n: &Atom, k: &Atom) -> Result<&QuotientSet> {
        self.classes
            .get(&(n.clone(), k.clone()))
            .ok_or_else(|| Error::Malformed(format!("no composite entry at ({n},{k})")))
    }
}

/// `(p ⋄ q)⟨n,k⟩ = ∫^m p⟨n,m⟩ × q⟨m,k⟩`, elements `(m, (x, y))`.
pub fn prof_compose(p: &FinProfunctor, q: &FinProfunctor) -> Result<Composite> {
    if p.co() != q.contra() {
        return Err(Error::Mismatch(
            "profunctors do not share a middle category".into(),
        ));
    }
    let n_cat = p.contra().clone();
    let m_cat = p.co().clone();
    let k_cat = q.co().clone();
    let mut classes = BTreeMap::new();
    for n in n_cat.objects() {
        for k in k_cat.objects() {
            let integrand = FinBifunctor::tabulate(
                m_cat.clone(),
                m_cat.clone(),
                |mm, mp| Ok(p.fiber(n, mp)?.product(q.fiber(mm, k)?)),
                |f, _, e| {
                    let (x, y) = e.as_pair()?;
                    Ok(pair(x, q.left(f, k, y)?))
                },
                |_, g, e| {
                    let (x, y) = e.as_pair()?;
                    Ok(pair(p.right(n, g, x)?, y))
                },
            )?;
            classes.insert((n.clone(), k.clone()), coend(&integrand)?);
        }
    }
    let fibers = classes
        .iter()
        .map(|(key, cls)| (key.clone(), cls.carrier().clone()))
        .collect();
    let mut left = BTreeMap::new();
    for (h, n0, n) in n_cat.morphisms() {
        for k in k_cat.objects() {
            let table = classes[&(n.clone(), k.clone())].map_classes(
                &classes[&(n0.clone(), k.clone())],
                |m, e| {
                    let (x, y) = e.as_pair()?;
                    Ok((m.clone(), pair(p.left(h, m, x)?, y)))
                },
            )?;
            left.insert((h.clone(), k.clone()), table);
        }
    }
    let mut right = BTreeMap::new();
    for n in n_cat.objects() {
        for (g, k, k2) in k_cat.morphisms() {
            let table = classes[&(n.clone(), k.clone())].map_classes(
                &classes[&(n.clone(), k2.clone())],
                |m, e| {
                    let (x, y) = e.as_pair()?;
                    Ok((m.clone(), pair(x, q.right(m, g, y)?)))
                },
            )?;
            right.insert((n.clone(), g.clone()), table);
        }
    }
    let profunctor = FinBifunctor::new(n_cat, k_cat, fibers, left, right)?;
    Ok(Composite {
        profunctor,
        classes,
    })
}

/// `p • a` with the coend behind each fiber.
#[derive(Clone, Debug)]
pub struct Action {
    pub copresheaf: CoPresheaf,
    pub classes: BTreeMap<Atom, QuotientSet>,
}

impl Action {
    pub fn class(&self, k: &Atom) -> Result<&QuotientSet> {
        self.classes
            .get(k)
            .ok_or_else(|| Error::UnknownObject(k.clone()))
    }
}

/// `(p • a)(k) = ∫^n a(n) × p⟨n,k⟩`, elements `(n, (x, y))`.
pub fn prof_action(p: &FinProfunctor, a: &CoPresheaf) -> Result<Action> {
    if a.base() != p.contra() {
        return Err(Error::Mismatch(
            "co-presheaf is not over the profunctor's source".into(),
        ));
    }
    let n_cat = p.contra().clone();
    let k_cat = p.co().clone();
    let mut classes = BTreeMap::new();
    for k in k_cat.objects() {
        let integrand = FinBifunctor::tabulate(
            n_cat.clone(),
            n_cat.clone(),
            |nm, np| Ok(a.fiber(np)?.product(p.fiber(nm, k)?)),
            |f, _, e| {
                let (x, y) = e.as_pair()?;
                Ok(pair(x, p.left(f, k, y)?))
            },
            |_, g, e| {
                let (x, y) = e.as_pair()?;
                Ok(pair(a.act(g, x)?, y))
            },
        )?;
        classes.insert(k.clone(), coend(&integrand)?);
    }
    let fibers = classes
        .iter()
        .map(|(k, cls)| (k.clone(), cls.carrier().clone()))
        .collect();
    let mut action = BTreeMap::new();
    for (g, k, k2) in k_cat.morphisms() {
        let table = classes[k].map_classes(&classes[k2], |n, e| {
            let (x, y) = e.as_pair()?;
            Ok((n.clone(), pair(x, p.right(n, g, y)?)))
        })?;
        action.insert(g.clone(), table);
    }
    let copresheaf = CoPresheaf::new(k_cat, fibers, action)?;
    Ok(Action {
        copresheaf,
        classes,
    })
}

/// `p • α : p • a ⇒ p • a'` for `α: a ⇒ a'`, by `[(n, (x, y))] ↦ [(n, (α_n x, y))]`.
pub fn action_on_nat(
    p: &FinProfunctor,
    alpha: &NatTransformation,
) -> Result<(Action, Action, NatTransformation)> {
    let src = prof_action(p, alpha.source())?;
    let tgt = prof_action(p, alpha.target())?;
    let mut components = BTreeMap::new();
    for k in p.co().objects() {
        let table = src.classes[k].map_classes(&tgt.classes[k], |n, e| {
            let (x, y) = e.as_pair()?;
            Ok((n.clone(), pair(alpha.component(n)?.apply(x)?, y)))
        })?;
        components.insert(k.clone(), table);
    }
    let nat = NatTransformation::new(src.copresheaf.clone(), tgt.copresheaf.clone(), components)?;
    Ok((src, tgt, nat))
}

/// A 2-cell of `Prof`: a natural transformation between parallel
/// profunctors, with components indexed by `(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfMorphism {
    source: FinProfunctor,
    target: FinProfunctor,
    components: BTreeMap<(Atom, Atom), Func>,
}

impl ProfMorphism {
    /// Checks totality and naturality in both slots.
    pub fn new(
        source: FinProfunctor,
        target: FinProfunctor,
        components: BTreeMap<(Atom, Atom), Func>,
    ) -> Result<ProfMorphism> {
        if source.contra() != target.contra() || source.co() != target.co() {
            return Err(Error::Mismatch(
                "2-cell between non-parallel profunctors".into(),
            ));
        }
        for (key, fiber) in source.fibers() {
            let c = components.get(key).ok_or_else(|| {
                Error::Malformed(format!("missing component at ({},{})", key.0, key.1))
            })?;
            if !c.is_total_on(fiber, &target.fibers()[key]) {
                return Err(Error::Malformed(format!(
                    "component at ({},{}) is not total",
                    key.0, key.1
                )));
            }
        }
        let m = ProfMorphism {
            source,
            target,
            components,
        };
        let problems = m.naturality_failures();
        if !problems.is_empty() {
            return Err(Error::Invalid(problems.join("; ")));
        }
        Ok(m)
    }

    pub fn identity(p: &FinProfunctor) -> ProfMorphism {
        let components = p
            .fibers()
            .iter()
            .map(|(k, s)| (k.clone(), Func::identity(s)))
            .collect();
        ProfMorphism {
            source: p.clone(),
            target: p.clone(),
            components,
        }
    }

    /// The forward half of a natural isomorphism between profunctors.
    pub fn from_iso(
        source: &FinProfunctor,
        target: &FinProfunctor,
        iso: &NaturalIso,
    ) -> Result<ProfMorphism> {
        let components = source
            .fibers()
            .keys()
            .map(|(n, k)| {
                Ok((
                    (n.clone(), k.clone()),
                    iso.component(&pair(n, k))?.forward().clone(),
                ))
            })
            .collect::<Result<_>>()?;
        ProfMorphism::new(source.clone(), target.clone(), components)
    }

    pub fn source(&self) -> &FinProfunctor {
        &self.source
    }

    pub fn target(&self) -> &FinProfunctor {
        &self.target
    }

    pub fn component(&self, n: &Atom, k: &Atom) -> Result<&Func> {
        self.components
            .get(&(n.clone(), k.clone()))
            .ok_or_else(|| Error::Malformed(format!("no component at ({n},{k})")))
    }

    pub fn components(&self) -> &BTreeMap<(Atom, Atom), Func> {
        &self.components
    }

    pub fn naturality_failures(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let (s, t) = (&self.source, &self.target);
        for (f, a, b) in s.contra().morphisms() {
            for y in s.co().objects() {
                for e in s.fibers()[&(b.clone(), y.clone())].iter() {
                    let l = s
                        .left(f, y, e)
                        .and_then(|v| self.components[&(a.clone(), y.clone())].apply(v));
                    let r = self.components[&(b.clone(), y.clone())]
                        .apply(e)
                        .and_then(|v| t.left(f, y, v));
                    if !matches!((l, r), (Ok(l), Ok(r)) if l == r) {
                        problems.push(format!(
                            "2-cell not natural at {f}, column {y}, element {e}"
                        ));
                    }
                }
            }
        }
        for x in s.contra().objects() {
            for (g, y, z) in s.co().morphisms() {
                for e in s.fibers()[&(x.clone(), y.clone())].iter() {
                    let l = s
                        .right(x, g, e)
                        .and_then(|v| self.components[&(x.clone(), z.clone())].apply(v));
                    let r = self.components[&(x.clone(), y.clone())]
                        .apply(e)
                        .and_then(|v| t.right(x, g, v));
                    if !matches!((l, r), (Ok(l), Ok(r)) if l == r) {
                        problems.push(format!("2-cell not natural at row {x}, {g}, element {e}"));
                    }
                }
            }
        }
        problems
    }

    /// `h • a : p • a ⇒ p' • a`, by `[(n, (x, y))] ↦ [(n, (x, h y))]`.
    pub fn on_action(&self, a: &CoPresheaf) -> Result<(Action, Action, NatTransformation)> {
        let src = prof_action(&self.source, a)?;
        let tgt = prof_action(&self.target, a)?;
        let mut components = BTreeMap::new();
        for k in self.source.co().objects() {
            let table = src.classes[k].map_classes(&tgt.classes[k], |n, e| {
                let (x, y) = e.as_pair()?;
                Ok((n.clone(), pair(x, self.component(n, k)?.apply(y)?)))
            })?;
            components.insert(k.clone(), table);
        }
        let nat =
            NatTransformation::new(src.copresheaf.clone(), tgt.copresheaf.clone(), components)?;
        Ok((src, tgt, nat))
    }
}

/// Everything involved in comparing `(p ⋄ q) • a` with `q • (p • a)`.
#[derive(Clone, Debug)]
pub struct ActionComposition {
    pub composite: Composite,
    /// `(p ⋄ q) • a`.
    pub of_composite: Action,
    /// `p • a`.
    pub inner: Action,
    /// `q • (p • a)`.
    pub iterated: Action,
    /// `(p ⋄ q) • a ≅ q • (p • a)`, natural in `k`.
    pub iso: NaturalIso,
}

/// `(p ⋄ q) • a ≅ q • (p • a)`.
///
/// Forward: `[(n, (x, [(m, (y, z))]))] ↦ [(m, ([(n, (x, y))], z))]`.
/// Backward: `[(m, ([(n, (x, y))], z))] ↦ [(n, (x, [(m, (y, z))]))]`.
pub fn action_composition_check(
    p: &FinProfunctor,
    q: &FinProfunctor,
    a: &CoPresheaf,
) -> Result<ActionComposition> {
    let composite = prof_compose(p, q)?;
    let of_composite = prof_action(&composite.profunctor, a)?;
    let inner = prof_action(p, a)?;
    let iterated = prof_action(q, &inner.copresheaf)?;

    let mut components = BTreeMap::new();
    for k in q.co().objects() {
        let lhs = &of_composite.classes[k];
        let rhs = &iterated.classes[k];
        let forward = lhs.map_classes(rhs, |n, e| {
            let (x, zeta) = e.as_pair()?;
            let (m, yz) = zeta.as_pair()?;
            let (y, z) = yz.as_pair()?;
            let xi = inner.classes[m].inject(n, &pair(x, y))?;
            Ok((m.clone(), pair(xi, z)))
        })?;
        let backward = rhs.map_classes(lhs, |m, e| {
            let (xi, z) = e.as_pair()?;
            let (n, xy) = xi.as_pair()?;
            let (x, y) = xy.as_pair()?;
            let zeta = composite.classes[&(n.clone(), k.clone())].inject(m, &pair(y, z))?;
            Ok((n.clone(), pair(x, zeta)))
        })?;
        components.insert(
            k.clone(),
            IsoWitness::new(
                lhs.carrier().clone(),
                rhs.carrier().clone(),
                forward,
                backward,
            )?,
        );
    }
    let iso = NaturalIso::new(components);
    check_natural_iso(&iso, &of_composite.copresheaf, &iterated.copresheaf)?;
    Ok(ActionComposition {
        composite,
        of_composite,
        inner,
        iterated,
        iso,
    })
}

/// Unit witnesses for one profunctor `p: 𝒩 ⇸ 𝒦`.
#[derive(Clone, Debug)]
pub struct UnitWitness {
    pub hom_left: Composite,
    pub hom_right: Composite,
    /// `hom ⋄ p ≅ p` by `[(n', (u, y))] ↦ p(u, 1) y`.
    pub left: NaturalIso,
    /// `p ⋄ hom ≅ p` by `[(k', (y, v))] ↦ p(1, v) y`.
    pub right: NaturalIso,
}

pub fn unit_check(p: &FinProfunctor) -> Result<UnitWitness> {
    let n_cat = p.contra().clone();
    let k_cat = p.co().clone();
    let hom_left = prof_compose(&hom_profunctor(&n_cat)?, p)?;
    let hom_right = prof_compose(p, &hom_profunctor(&k_cat)?)?;

    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for n in n_cat.objects() {
        for k in k_cat.objects() {
            let fiber = p.fiber(n, k)?;
            let cl = &hom_left.classes[&(n.clone(), k.clone())];
            let fwd = Func::try_tabulate(cl.carrier(), |rep| {
                let (_, e) = rep.as_pair()?;
                let (u, y) = e.as_pair()?;
                Ok(p.left(u, k, y)?.clone())
            })?;
            let id_n = n_cat.id(n)?;
            let bwd = Func::try_tabulate(fiber, |y| Ok(cl.inject(n, &pair(id_n, y))?.clone()))?;
            left.insert(
                pair(n, k),
                IsoWitness::new(cl.carrier().clone(), fiber.clone(), fwd, bwd)?,
            );

            let cr = &hom_right.classes[&(n.clone(), k.clone())];
            let fwd = Func::try_tabulate(cr.carrier(), |rep| {
                let (_, e) = rep.as_pair()?;
                let (y, v) = e.as_pair()?;
                Ok(p.right(n, v, y)?.clone())
            })?;
            let id_k = k_cat.id(k)?;
            let bwd = Func::try_tabulate(fiber, |y| Ok(cr.inject(k, &pair(y, id_k))?.clone()))?;
            right.insert(
                pair(n, k),
                IsoWitness::new(cr.carrier().clone(), fiber.clone(), fwd, bwd)?,
            );
        }
    }
    let left = NaturalIso::new(left);
    let right = NaturalIso::new(right);
    check_natural_iso_bifunctor(&left, &hom_left.profunctor, p)?;
    check_natural_iso_bifunctor(&right, &hom_right.profunctor, p)?;
    Ok(UnitWitness {
        hom_left,
        hom_right,
        left,
        right,
    })
}

/// `hom • a ≅ a` by `[(n, (x, u))] ↦ a(u) x`.
pub fn action_unit_check(a: &CoPresheaf) -> Result<(Action, NaturalIso)> {
    let n_cat = a.base().clone();
    let act = prof_action(&hom_profunctor(&n_cat)?, a)?;
    let mut components = BTreeMap::new();
    for k in n_cat.objects() {
        let cls = &act.classes[k];
        let fwd = Func::try_tabulate(cls.carrier(), |rep| {
            let (_, e) = rep.as_pair()?;
            let (x, u) = e.as_pair()?;
            Ok(a.act(u, x)?.clone())
        })?;
        let id_k = n_cat.id(k)?;
        let bwd = Func::try_tabulate(a.fiber(k)?, |x| Ok(cls.inject(k, &pair(x, id_k))?.clone()))?;
        components.insert(
            k.clone(),
            IsoWitness::new(cls.carrier().clone(), a.fiber(k)?.clone(), fwd, bwd)?,
        );
    }
    let iso = NaturalIso::new(components);
    check_natural_iso(&iso, &act.copresheaf, a)?;
    Ok((act, iso))
}

/// `(p ⋄ q) ⋄ r ≅ p ⋄ (q ⋄ r)`, routed through the coend over `𝓜 × 𝓛` of
/// `p⟨n,m⟩ × q⟨m,l⟩ × r⟨l,k⟩` as computed by [`fubini_check`].
pub fn associativity_check(
    p: &FinProfunctor,
    q: &FinProfunctor,
    r: &FinProfunctor,
) -> Result<NaturalIso> {
    let pq = prof_compose(p, q)?;
    let pq_r = prof_compose(&pq.profunctor, r)?;
    let qr = prof_compose(q, r)?;
    let p_qr = prof_compose(p, &qr.profunctor)?;
    let m_cat = p.co().clone();
    let l_cat = q.co().clone();
    let ml = Arc::new(m_cat.product(&l_cat));

    let mut components = BTreeMap::new();
    for n in p.contra().objects() {
        for k in r.co().objects() {
            let triple = FinBifunctor::tabulate(
                ml.clone(),
                ml.clone(),
                |minus, plus| {
                    let (mm, lm) = minus.as_pair()?;
                    let (mp, lp) = plus.as_pair()?;
                    let mut out = Vec::new();
                    for x in p.fiber(n, mp)? {
                        for y in q.fiber(mm, lp)? {
                            for z in r.fiber(lm, k)? {
                                out.push(Atom::triple(x.clone(), y.clone(), z.clone()));
                            }
                        }
                    }
                    Ok(out.into_iter().collect())
                },
                |fg, plus, e| {
                    let (f, g) = fg.as_pair()?;
                    let (_, lp) = plus.as_pair()?;
                    let (x, y, z) = e.as_triple()?;
                    Ok(Atom::triple(
                        x.clone(),
                        q.left(f, lp, y)?.clone(),
                        r.left(g, k, z)?.clone(),
                    ))
                },
                |minus, fg, e| {
                    let (mm, _) = minus.as_pair()?;
                    let (f, g) = fg.as_pair()?;
                    let (x, y, z) = e.as_triple()?;
                    Ok(Atom::triple(
                        p.right(n, f, x)?.clone(),
                        q.right(mm, g, y)?.clone(),
                        z.clone(),
                    ))
                },
            )?;
            let fubini = fubini_check(&m_cat, &l_cat, &triple)?;
            let prod = &fubini.product;

            let lhs = &pq_r.classes[&(n.clone(), k.clone())];
            let rhs = &p_qr.classes[&(n.clone(), k.clone())];
            let to_prod = |x: &Atom, y: &Atom, z: &Atom, m: &Atom, l: &Atom| -> Result<Atom> {
                Ok(prod
                    .inject(&pair(m, l), &Atom::triple(x.clone(), y.clone(), z.clone()))?
                    .clone())
            };
            let lhs_to_prod = IsoWitness::new(
                lhs.carrier().clone(),
                prod.carrier().clone(),
                Func::try_tabulate(lhs.carrier(), |rep| {
                    let (l, e) = rep.as_pair()?;
                    let (zeta, z) = e.as_pair()?;
                    let (m, xy) = zeta.as_pair()?;
                    let (x, y) = xy.as_pair()?;
                    to_prod(x, y, z, m, l)
                })?,
                Func::try_tabulate(prod.carrier(), |rep| {
                    let (ml_obj, e) = rep.as_pair()?;
                    let (m, l) = ml_obj.as_pair()?;
                    let (x, y, z) = e.as_triple()?;
                    let zeta = pq.classes[&(n.clone(), l.clone())].inject(m, &pair(x, y))?;
                    Ok(lhs.inject(l, &pair(zeta, z))?.clone())
                })?,
            )?;
            let prod_to_rhs = IsoWitness::new(
                prod.carrier().clone(),
                rhs.carrier().clone(),
                Func::try_tabulate(prod.carrier(), |rep| {
                    let (ml_obj, e) = rep.as_pair()?;
                    let (m, l) = ml_obj.as_pair()?;
                    let (x, y, z) = e.as_triple()?;
                    let eta = qr.classes[&(m.clone(), k.clone())].inject(l, &pair(y, z))?;
                    Ok(rhs.inject(m, &pair(x, eta))?.clone())
                })?,
                Func::try_tabulate(rhs.carrier(), |rep| {
                    let (m, e) = rep.as_pair()?;
                    let (x, eta) = e.as_pair()?;
                    let (l, yz) = eta.as_pair()?;
                    let (y, z) = yz.as_pair()?;
                    to_prod(x, y, z, m, l)
                })?,
            )?;
            components.insert(pair(n, k), lhs_to_prod.then(&prod_to_rhs)?);
        }
    }
    let iso = NaturalIso::new(components);
    check_natural_iso_bifunctor(&iso, &pq_r.profunctor, &p_qr.profunctor)?;
    Ok(iso)
}

/// On discrete categories every composite entry is the plain coproduct
/// `Σ_m p⟨n,m⟩ × q⟨m,k⟩`: every class is a singleton and every triple
/// `(m, (x, y))` appears exactly once.
pub fn discrete_collapse_check(p: &FinProfunctor, q: &FinProfunctor) -> Result<usize> {
    if !p.co().is_discrete() {
        return Err(Error::Mismatch("middle category is not discrete".into()));
    }
    let composite = prof_compose(p, q)?;
    let mut checked = 0;
    for n in p.contra().objects() {
        for k in q.co().objects() {
            let cls = &composite.classes[&(n.clone(), k.clone())];
            let mut expected = Vec::new();
            for m in p.co().objects() {
                for x in p.fiber(n, m)? {
                    for y in q.fiber(m, k)? {
                        expected.push(pair(m, &pair(x, y)));
                    }
                }
            }
            let got: Vec<Atom> = cls.carrier().iter().cloned().collect();
            if got != expected || cls.classes().values().any(|v| v.len() != 1) {
                return Err(Error::Witness(format!(
                    "discrete composite at ({n},{k}) is not a coproduct"
                )));
            }
            checked += got.len();
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::FinSet;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn discrete(names: &[&str]) -> Arc<FinCategory> {
        arc(FinCategory::discrete(names.iter().map(|n| Atom::sym(*n))).unwrap())
    }

    /// A profunctor between discrete categories from a matrix of sizes.
    fn matrix(n: &Arc<FinCategory>, k: &Arc<FinCategory>, sizes: &[&[usize]]) -> FinProfunctor {
        let ns = n.objects().to_vec();
        let ks = k.objects().to_vec();
        FinBifunctor::tabulate(
            n.clone(),
            k.clone(),
            |x, y| {
                let i = ns.iter().position(|o| o == x).unwrap();
                let j = ks.iter().position(|o| o == y).unwrap();
                Ok(FinSet::range(sizes[i][j]))
            },
            |_, _, e| Ok(e.clone()),
            |_, _, e| Ok(e.clone()),
        )
        .unwrap()
    }

    #[test]
    fn discrete_composition_is_matrix_product() {
        let n = discrete(&["n1", "n2"]);
        let m = discrete(&["m1"]);
        let k = discrete(&["k1", "k2"]);
        let p = matrix(&n, &m, &[&[2], &[3]]);
        let q = matrix(&m, &k, &[&[1, 2]]);
        let pq = prof_compose(&p, &q).unwrap();
        let size = |a: &str, b: &str| {
            pq.profunctor
                .fiber(&Atom::sym(a), &Atom::sym(b))
                .unwrap()
                .len()
        };
        assert_eq!([size("n1", "k1"), size("n1", "k2")], [2, 4]);
        assert_eq!([size("n2", "k1"), size("n2", "k2")], [3, 6]);
        assert!(discrete_collapse_check(&p, &q).unwrap() > 0);
    }

    #[test]
    fn empty_row_annihilates() {
        let n = discrete(&["n1", "n2"]);
        let m = discrete(&["m1", "m2"]);
        let k = discrete(&["k1"]);
        let p = matrix(&n, &m, &[&[0, 0], &[1, 2]]);
        let q = matrix(&m, &k, &[&[3], &[1]]);
        let pq = prof_compose(&p, &q).unwrap();
        assert!(pq
            .profunctor
            .fiber(&Atom::sym("n1"), &Atom::sym("k1"))
            .unwrap()
            .is_empty());
        assert_eq!(
            pq.profunctor
                .fiber(&Atom::sym("n2"), &Atom::sym("k1"))
                .unwrap()
                .len(),
            5
        );
    }

    #[test]
    fn matrix_action_cardinality() {
        let n = discrete(&["n1", "n2"]);
        let k = discrete(&["k1"]);
        let a = CoPresheaf::tabulate(
            n.clone(),
            |o| Ok(FinSet::range(if o == &Atom::sym("n1") { 1 } else { 2 })),
            |_, x| Ok(x.clone()),
        )
        .unwrap();
        let p = matrix(&n, &k, &[&[2], &[3]]);
        let act = prof_action(&p, &a).unwrap();
        assert_eq!(act.copresheaf.fiber(&Atom::sym("k1")).unwrap().len(), 8);
    }

    #[test]
    fn empty_presheaf_acts_to_empty() {
        let n = arc(FinCategory::walking_arrow());
        let a = CoPresheaf::constant(n.clone(), &FinSet::empty()).unwrap();
        let act = prof_action(&hom_profunctor(&n).unwrap(), &a).unwrap();
        assert_eq!(act.copresheaf.total_size(), 0);
    }

    #[test]
    fn hom_is_a_unit() {
        let c = arc(FinCategory::walking_arrow());
        let hom = hom_profunctor(&c).unwrap();
        assert!(hom.validate().is_empty());
        let w = unit_check(&hom).unwrap();
        assert_eq!(w.left.len(), 4);
        let a = CoPresheaf::yoneda(c.clone(), &Atom::from(0)).unwrap();
        action_unit_check(&a).unwrap();
    }

    #[test]
    fn action_composition_on_walking_arrow() {
        let m = arc(FinCategory::walking_arrow());
        let n = discrete(&["n"]);
        let k = discrete(&["k"]);
        // p⟨n, m⟩ = m-fiber of the representable at 0, q⟨m, k⟩ = hom(m, 1).
        let p = FinBifunctor::tabulate(
            n.clone(),
            m.clone(),
            |_, y| Ok(m.hom_set(&Atom::from(0), y)),
            |_, _, e| Ok(e.clone()),
            |_, g, u| Ok(m.compose(g, u)?.clone()),
        )
        .unwrap();
        let q = FinBifunctor::tabulate(
            m.clone(),
            k.clone(),
            |x, _| Ok(m.hom_set(x, &Atom::from(1)).product(&FinSet::range(2))),
            |f, _, e| {
                let (u, s) = e.as_pair()?;
                Ok(pair(m.compose(u, f)?, s))
            },
            |_, _, e| Ok(e.clone()),
        )
        .unwrap();
        assert!(p.validate().is_empty());
        assert!(q.validate().is_empty());
        let a = CoPresheaf::constant(n.clone(), &FinSet::range(2)).unwrap();
        let w = action_composition_check(&p, &q, &a).unwrap();
        assert_eq!(
            w.of_composite
                .copresheaf
                .fiber(&Atom::sym("k"))
                .unwrap()
                .len(),
            4
        );
        associativity_check(&p, &q, &hom_profunctor(&k).unwrap()).unwrap();
    }

    #[test]
    fn empty_middle_category() {
        let n = discrete(&["n"]);
        let m = discrete(&[]);
        let k = discrete(&["k"]);
        let p = matrix(&n, &m, &[&[]]);
        let q = matrix(&m, &k, &[]);
        let a = CoPresheaf::constant(n, &FinSet::range(3)).unwrap();
        let w = action_composition_check(&p, &q, &a).unwrap();
        assert_eq!(w.of_composite.copresheaf.total_size(), 0);
        assert_eq!(w.iterated.copresheaf.total_size(), 0);
    }

    #[test]
    fn two_cells_induce_natural_maps() {
        let c = arc(FinCategory::walking_arrow());
        let hom = hom_profunctor(&c).unwrap();
        let w = unit_check(&hom).unwrap();
        let h = ProfMorphism::from_iso(&w.hom_left.profunctor, &hom, &w.left).unwrap();
        let a = CoPresheaf::yoneda(c.clone(), &Atom::from(0)).unwrap();
        let (_, _, nat) = h.on_action(&a).unwrap();
        assert!(nat.naturality_failures().is_empty());
        // Collapsing everything onto a constant is not natural.
        let bad = ProfMorphism::new(
            hom.clone(),
            hom.clone(),
            hom.fibers()
                .iter()
                .map(|(k, s)| {
                    (
                        k.clone(),
                        Func::tabulate(s, |_| s.iter().next().unwrap().clone()),
                    )
                })
                .collect(),
        );
        assert!(
            bad.is_ok(),
            "thin hom has singleton fibers, so any map is the identity"
        );
    }
}

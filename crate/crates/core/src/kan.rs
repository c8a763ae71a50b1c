//! Pointwise left Kan extensions and the collage profunctors built from
//! them.
//!
//! `(Lan_P F)(b)` is computed as the coend `∫^c B(P c, b) × F(c)`; elements
//! of the integrand are pairs `(u, y)` with `u: P c → b` and `y ∈ F(c)`.
//! `Π_P(c, d) = (Lan_P 𝒴_c)(d)` specializes this to representables, and two
//! such profunctors compose along composable functors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::atom::{Atom, FinSet, Func};
use crate::coend::{coend, FinBifunctor, QuotientSet};
use crate::error::{Error, Result};
use crate::fincat::{check_natural_iso, CoPresheaf, FinCategory, FinFunctor};
use crate::witness::{IsoWitness, NaturalIso};

/// `Lan_P F` together with the quotient behind each of its fibers.
#[derive(Clone, Debug)]
pub struct LanResult {
    pub copresheaf: CoPresheaf,
    pub provenance: BTreeMap<Atom, QuotientSet>,
}

/// The integrand `(c⁻, c⁺) ↦ B(P c⁻, b) × F(c⁺)` at a fixed `b`.
pub fn lan_integrand(f: &CoPresheaf, p: &FinFunctor, b: &Atom) -> Result<FinBifunctor> {
    let c = p.source().clone();
    let target = p.target().clone();
    FinBifunctor::tabulate(
        c.clone(),
        c,
        |cm, cp| Ok(target.hom_set(p.on_obj(cm)?, b).product(f.fiber(cp)?)),
        |h, _, e| {
            let (u, y) = e.as_pair()?;
            Ok(Atom::pair(
                target.compose(u, p.on_mor(h)?)?.clone(),
                y.clone(),
            ))
        },
        |_, g, e| {
            let (u, y) = e.as_pair()?;
            Ok(Atom::pair(u.clone(), f.act(g, y)?.clone()))
        },
    )
}

pub fn left_kan(f: &CoPresheaf, p: &FinFunctor) -> Result<LanResult> {
    if **f.base() != **p.source() {
        return Err(Error::Mismatch(
            "co-presheaf and functor have different sources".into(),
        ));
    }
    let target = p.target().clone();
    let mut provenance = BTreeMap::new();
    for b in target.objects() {
        provenance.insert(b.clone(), coend(&lan_integrand(f, p, b)?)?);
    }
    let fibers = provenance
        .iter()
        .map(|(b, q)| (b.clone(), q.carrier().clone()))
        .collect();
    let mut action = BTreeMap::new();
    for (g, b, b2) in target.morphisms() {
        let table = provenance[b].map_classes(&provenance[b2], |c, e| {
            let (u, y) = e.as_pair()?;
            Ok((
                c.clone(),
                Atom::pair(target.compose(g, u)?.clone(), y.clone()),
            ))
        })?;
        action.insert(g.clone(), table);
    }
    let copresheaf = CoPresheaf::new(target, fibers, action)?;
    Ok(LanResult {
        copresheaf,
        provenance,
    })
}

/// Natural isomorphism `Lan_{Q∘P} F ≅ Lan_Q (Lan_P F)`, both sides computed
/// through their own coends.
///
/// Forward: `[(c, (w, y))] ↦ [(P c, (w, [(c, (id, y))]))]`.
/// Backward: `[(b, (v, [(c, (u, y))]))] ↦ [(c, (v ∘ Q u, y))]`.
pub fn kan_composition_check(f: &CoPresheaf, p: &FinFunctor, q: &FinFunctor) -> Result<NaturalIso> {
    let qp = p.then(q)?;
    let direct = left_kan(f, &qp)?;
    let inner = left_kan(f, p)?;
    let iterated = left_kan(&inner.copresheaf, q)?;
    let d_cat = p.target();
    let e_cat = q.target();

    let mut components = BTreeMap::new();
    for e in e_cat.objects() {
        let lhs = &direct.provenance[e];
        let rhs = &iterated.provenance[e];
        let forward = lhs.map_classes(rhs, |c, elem| {
            let (w, y) = elem.as_pair()?;
            let pc = p.on_obj(c)?;
            let xi =
                inner.provenance[pc].inject(c, &Atom::pair(d_cat.id(pc)?.clone(), y.clone()))?;
            Ok((pc.clone(), Atom::pair(w.clone(), xi.clone())))
        })?;
        let backward = rhs.map_classes(lhs, |_, elem| {
            let (v, xi) = elem.as_pair()?;
            let (c, inner_elem) = xi.as_pair()?;
            let (u, y) = inner_elem.as_pair()?;
            let vqu = e_cat.compose(v, q.on_mor(u)?)?;
            Ok((c.clone(), Atom::pair(vqu.clone(), y.clone())))
        })?;
        components.insert(
            e.clone(),
            IsoWitness::new(
                lhs.carrier().clone(),
                rhs.carrier().clone(),
                forward,
                backward,
            )?,
        );
    }
    let iso = NaturalIso::new(components);
    check_natural_iso(&iso, &direct.copresheaf, &iterated.copresheaf)?;
    Ok(iso)
}

/// `Π_P(c, d) = ∫^{c'} D(P c', d) × C(c, c')` as a quotient.
pub fn pi(p: &FinFunctor, c: &Atom, d: &Atom) -> Result<QuotientSet> {
    p.source().check_object(c)?;
    p.target().check_object(d)?;
    let y = CoPresheaf::yoneda(p.source().clone(), c)?;
    coend(&lan_integrand(&y, p, d)?)
}

/// An element of some `Π_P(from, to)`, carried by a member `(c', (u, v))` of
/// its coend class with `u: P c' → to` and `v: from → c'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiElement {
    pub from: Atom,
    pub to: Atom,
    pub member: Atom,
}

impl PiElement {
    pub fn new(from: Atom, to: Atom, mid: Atom, u: Atom, v: Atom) -> PiElement {
        PiElement {
            from,
            to,
            member: Atom::pair(mid, Atom::pair(u, v)),
        }
    }

    fn parts(&self) -> Result<(&Atom, &Atom, &Atom)> {
        let (mid, e) = self.member.as_pair()?;
        let (u, v) = e.as_pair()?;
        Ok((mid, u, v))
    }
}

/// All entries of `Π_P`, computed once, with its profunctor structure
/// `C ⇸ D` (contravariant in `c`, covariant in `d`).
#[derive(Clone, Debug)]
pub struct PiProfunctor {
    functor: FinFunctor,
    entries: BTreeMap<(Atom, Atom), QuotientSet>,
    profunctor: FinBifunctor,
}

impl PiProfunctor {
    pub fn new(p: &FinFunctor) -> Result<PiProfunctor> {
        let c_cat = p.source().clone();
        let d_cat = p.target().clone();
        let mut entries = BTreeMap::new();
        for c in c_cat.objects() {
            for d in d_cat.objects() {
                entries.insert((c.clone(), d.clone()), pi(p, c, d)?);
            }
        }
        let fibers = entries
            .iter()
            .map(|(k, q)| (k.clone(), q.carrier().clone()))
            .collect();
        let mut left = BTreeMap::new();
        for (h, c0, c) in c_cat.morphisms() {
            for d in d_cat.objects() {
                let src = &entries[&(c.clone(), d.clone())];
                let tgt = &entries[&(c0.clone(), d.clone())];
                let table = src.map_classes(tgt, |mid, e| {
                    let (u, v) = e.as_pair()?;
                    Ok((
                        mid.clone(),
                        Atom::pair(u.clone(), c_cat.compose(v, h)?.clone()),
                    ))
                })?;
                left.insert((h.clone(), d.clone()), table);
            }
        }
        let mut right = BTreeMap::new();
        for c in c_cat.objects() {
            for (g, d, d2) in d_cat.morphisms() {
                let src = &entries[&(c.clone(), d.clone())];
                let tgt = &entries[&(c.clone(), d2.clone())];
                let table = src.map_classes(tgt, |mid, e| {
                    let (u, v) = e.as_pair()?;
                    Ok((
                        mid.clone(),
                        Atom::pair(d_cat.compose(g, u)?.clone(), v.clone()),
                    ))
                })?;
                right.insert((c.clone(), g.clone()), table);
            }
        }
        let profunctor = FinBifunctor::new(c_cat, d_cat, fibers, left, right)?;
        Ok(PiProfunctor {
            functor: p.clone(),
            entries,
            profunctor,
        })
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn entry(&self, c: &Atom, d: &Atom) -> Result<&QuotientSet> {
        self.entries
            .get(&(c.clone(), d.clone()))
            .ok_or_else(|| Error::Malformed(format!("no Π entry at ({c},{d})")))
    }

    pub fn entries(&self) -> &BTreeMap<(Atom, Atom), QuotientSet> {
        &self.entries
    }

    pub fn profunctor(&self) -> &FinBifunctor {
        &self.profunctor
    }

    /// Canonical class of an element.
    pub fn class_of(&self, x: &PiElement) -> Result<Atom> {
        let (mid, e) = x.member.as_pair()?;
        Ok(self.entry(&x.from, &x.to)?.inject(mid, e)?.clone())
    }

    /// Every member of every class of `Π_P(c, d)`, as elements.
    pub fn elements(&self, c: &Atom, d: &Atom) -> Result<Vec<PiElement>> {
        let q = self.entry(c, d)?;
        Ok(q.classes()
            .values()
            .flatten()
            .map(|(mid, e)| PiElement {
                from: c.clone(),
                to: d.clone(),
                member: Atom::pair(mid.clone(), e.clone()),
            })
            .collect())
    }

    /// The element of `Π_P(c, P c)` built from identities.
    pub fn unit_at(&self, c: &Atom) -> Result<PiElement> {
        let pc = self.functor.on_obj(c)?.clone();
        let id_pc = self.functor.target().id(&pc)?.clone();
        let id_c = self.functor.source().id(c)?.clone();
        Ok(PiElement::new(c.clone(), pc, c.clone(), id_pc, id_c))
    }

    pub fn class_sizes(&self) -> BTreeMap<(Atom, Atom), usize> {
        self.entries
            .iter()
            .map(|(k, q)| (k.clone(), q.len()))
            .collect()
    }

    pub fn carrier(&self, c: &Atom, d: &Atom) -> Result<&FinSet> {
        Ok(self.entry(c, d)?.carrier())
    }
}

/// `Π_P(c, d) × Π_Q(d, e) → Π_{Q∘P}(c, e)`.
///
/// With `x = (c', (u: P c' → d, v: c → c'))` and
/// `y = (d', (w: Q d' → e, t: d → d'))`, the two `D` hom-elements compose to
/// `t ∘ u: P c' → d'`, which is pushed through `Q` and followed by `w`. The
/// result is `[(c', (w ∘ Q(t ∘ u), v))]`.
pub fn pi_compose(
    p: &PiProfunctor,
    q: &PiProfunctor,
    qp: &PiProfunctor,
    x: &PiElement,
    y: &PiElement,
) -> Result<PiElement> {
    if x.to != y.from {
        return Err(Error::Mismatch(format!(
            "Π elements do not meet: {} ≠ {}",
            x.to, y.from
        )));
    }
    if *qp.functor() != p.functor().then(q.functor())? {
        return Err(Error::Mismatch(
            "third Π profunctor is not along Q∘P".into(),
        ));
    }
    let d_cat = p.functor().target();
    let e_cat = q.functor().target();
    let (c_mid, u, v) = x.parts()?;
    let (_, w, t) = y.parts()?;
    let tu = d_cat.compose(t, u)?;
    let along = e_cat.compose(w, q.functor().on_mor(tu)?)?;
    let member = Atom::pair(c_mid.clone(), Atom::pair(along.clone(), v.clone()));
    let rep = qp
        .entry(&x.from, &y.to)?
        .inject(c_mid, member.as_pair()?.1)?
        .clone();
    Ok(PiElement {
        from: x.from.clone(),
        to: y.to.clone(),
        member: rep,
    })
}

/// Checks that `pi_compose` depends only on classes: every pair of members
/// of every pair of classes is composed and the resulting classes compared.
pub fn pi_well_defined(p: &PiProfunctor, q: &PiProfunctor, qp: &PiProfunctor) -> Result<usize> {
    let c_cat = p.functor().source();
    let d_cat = p.functor().target();
    let e_cat = q.functor().target();
    let mut checked = 0;
    for c in c_cat.objects() {
        for d in d_cat.objects() {
            for e in e_cat.objects() {
                let mut seen: BTreeMap<(Atom, Atom), Atom> = BTreeMap::new();
                for x in p.elements(c, d)? {
                    let xc = p.class_of(&x)?;
                    for y in q.elements(d, e)? {
                        let yc = q.class_of(&y)?;
                        let z = qp.class_of(&pi_compose(p, q, qp, &x, &y)?)?;
                        checked += 1;
                        match seen.get(&(xc.clone(), yc.clone())) {
                            None => {
                                seen.insert((xc.clone(), yc), z);
                            }
                            Some(prev) if *prev == z => {}
                            Some(prev) => {
                                return Err(Error::Witness(format!(
                                    "Π composition not well defined at ({c},{d},{e}): {prev} vs {z}"
                                )))
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Associativity of `pi_compose` over all class triples.
pub fn pi_associative(p: &PiProfunctor, q: &PiProfunctor, r: &PiProfunctor) -> Result<usize> {
    let qp = PiProfunctor::new(&p.functor().then(q.functor())?)?;
    let rq = PiProfunctor::new(&q.functor().then(r.functor())?)?;
    let rqp = PiProfunctor::new(&qp.functor().then(r.functor())?)?;
    if *rqp.functor() != p.functor().then(rq.functor())? {
        return Err(Error::Witness(
            "functor composition is not associative".into(),
        ));
    }
    let cats = [
        p.functor().source().clone(),
        p.functor().target().clone(),
        q.functor().target().clone(),
        r.functor().target().clone(),
    ];
    let mut checked = 0;
    for a in cats[0].objects() {
        for b in cats[1].objects() {
            for c in cats[2].objects() {
                for d in cats[3].objects() {
                    for x in representatives(p, a, b)? {
                        for y in representatives(q, b, c)? {
                            for z in representatives(r, c, d)? {
                                let left =
                                    pi_compose(&qp, r, &rqp, &pi_compose(p, q, &qp, &x, &y)?, &z)?;
                                let right =
                                    pi_compose(p, &rq, &rqp, &x, &pi_compose(q, r, &rq, &y, &z)?)?;
                                if rqp.class_of(&left)? != rqp.class_of(&right)? {
                                    return Err(Error::Witness(format!(
                                        "Π composition not associative at ({a},{b},{c},{d})"
                                    )));
                                }
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Unit laws against the identity-functor collage: composing with the
/// identity-built element of `Π_id` on either side preserves classes.
pub fn pi_unital(p: &PiProfunctor) -> Result<usize> {
    let c_cat = p.functor().source().clone();
    let d_cat = p.functor().target().clone();
    let id_c = PiProfunctor::new(&FinFunctor::identity(c_cat.clone()))?;
    let id_d = PiProfunctor::new(&FinFunctor::identity(d_cat.clone()))?;
    let mut checked = 0;
    for c in c_cat.objects() {
        for d in d_cat.objects() {
            for x in representatives(p, c, d)? {
                let before = pi_compose(&id_c, p, p, &id_c.unit_at(c)?, &x)?;
                let after = pi_compose(p, &id_d, p, &x, &id_d.unit_at(d)?)?;
                let cls = p.class_of(&x)?;
                if p.class_of(&before)? != cls || p.class_of(&after)? != cls {
                    return Err(Error::Witness(format!("Π unit law fails at ({c},{d})")));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn representatives(p: &PiProfunctor, c: &Atom, d: &Atom) -> Result<Vec<PiElement>> {
    Ok(p.carrier(c, d)?
        .iter()
        .map(|rep| PiElement {
            from: c.clone(),
            to: d.clone(),
            member: rep.clone(),
        })
        .collect())
}

/// The Π profunctor of the identity functor is isomorphic to the hom
/// profunctor: `[(c', (u, v))] ↦ u ∘ v`.
pub fn pi_identity_check(c_cat: &Arc<FinCategory>) -> Result<NaturalIso> {
    let pid = PiProfunctor::new(&FinFunctor::identity(c_cat.clone()))?;
    let mut components = BTreeMap::new();
    for c in c_cat.objects() {
        for d in c_cat.objects() {
            let q = pid.entry(c, d)?;
            let hom = c_cat.hom_set(c, d);
            let forward = Func::try_tabulate(q.carrier(), |rep| {
                let (_, e) = rep.as_pair()?;
                let (u, v) = e.as_pair()?;
                Ok(c_cat.compose(u, v)?.clone())
            })?;
            let id_c = c_cat.id(c)?;
            let backward = Func::try_tabulate(&hom, |f| {
                Ok(q.inject(c, &Atom::pair(f.clone(), id_c.clone()))?.clone())
            })?;
            components.insert(
                Atom::pair(c.clone(), d.clone()),
                IsoWitness::new(q.carrier().clone(), hom, forward, backward)?,
            );
        }
    }
    Ok(NaturalIso::new(components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coend::coyoneda_check;
    use crate::oracle::{quotient_partition, zigzag_classes};

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn sample_presheaf(c: &Arc<FinCategory>) -> CoPresheaf {
        // Walking arrow: F(0) = {0,1}, F(1) = {0,1,2}, arrow sends both to 2.
        CoPresheaf::new(
            c.clone(),
            BTreeMap::from([
                (Atom::from(0), FinSet::range(2)),
                (Atom::from(1), FinSet::range(3)),
            ]),
            BTreeMap::from([(
                Atom::pair(Atom::from(0), Atom::from(1)),
                Func::from_pairs([
                    (Atom::from(0), Atom::from(2)),
                    (Atom::from(1), Atom::from(2)),
                ]),
            )]),
        )
        .unwrap()
    }

    #[test]
    fn identity_extension_is_the_presheaf() {
        let c = arc(FinCategory::walking_arrow());
        let f = sample_presheaf(&c);
        let lan = left_kan(&f, &FinFunctor::identity(c.clone())).unwrap();
        for b in c.objects() {
            assert_eq!(
                lan.copresheaf.fiber(b).unwrap().len(),
                f.fiber(b).unwrap().len()
            );
            coyoneda_check(&f, b).unwrap();
        }
        assert!(lan.copresheaf.validate().is_empty());
    }

    #[test]
    fn discrete_source_gives_plain_products() {
        let c = arc(FinCategory::discrete([Atom::sym("c0")]).unwrap());
        let b = arc(FinCategory::walking_arrow());
        let s = FinSet::range(3);
        let f = CoPresheaf::constant(c.clone(), &s).unwrap();
        let p = FinFunctor::tabulate(
            c,
            b.clone(),
            |_| Atom::from(0),
            |_| Atom::pair(Atom::from(0), Atom::from(0)),
        )
        .unwrap();
        let lan = left_kan(&f, &p).unwrap();
        for obj in b.objects() {
            let expected = b.hom_set(&Atom::from(0), obj).product(&s).len();
            assert_eq!(lan.copresheaf.fiber(obj).unwrap().len(), expected);
        }
    }

    #[test]
    fn lan_of_representable_is_pi() {
        let c = arc(FinCategory::walking_arrow());
        let t = arc(FinCategory::walking_iso());
        let p = FinFunctor::tabulate(c.clone(), t, |a| a.clone(), |f| f.clone()).unwrap();
        let pp = PiProfunctor::new(&p).unwrap();
        for a in c.objects() {
            let lan = left_kan(&CoPresheaf::yoneda(c.clone(), a).unwrap(), &p).unwrap();
            for d in p.target().objects() {
                assert_eq!(lan.copresheaf.fiber(d).unwrap(), pp.carrier(a, d).unwrap());
            }
        }
        assert!(pp.profunctor().validate().is_empty());
    }

    #[test]
    fn pi_on_discrete_source_is_hom() {
        let c = arc(FinCategory::discrete(["a", "b"].map(Atom::sym)).unwrap());
        let d = arc(FinCategory::walking_arrow());
        let p = FinFunctor::tabulate(
            c.clone(),
            d.clone(),
            |a| {
                if a == &Atom::sym("a") {
                    Atom::from(0)
                } else {
                    Atom::from(1)
                }
            },
            |f| {
                let (a, _) = f.as_pair().unwrap();
                let o = if a == &Atom::sym("a") {
                    Atom::from(0)
                } else {
                    Atom::from(1)
                };
                Atom::pair(o.clone(), o)
            },
        )
        .unwrap();
        for x in c.objects() {
            for y in d.objects() {
                assert_eq!(
                    pi(&p, x, y).unwrap().len(),
                    d.hom(p.on_obj(x).unwrap(), y).len()
                );
            }
        }
    }

    #[test]
    fn pi_identity_is_hom() {
        let c = arc(FinCategory::walking_iso());
        let iso = pi_identity_check(&c).unwrap();
        assert_eq!(iso.len(), 4);
    }

    #[test]
    fn pi_matches_closure_oracle() {
        let c = arc(FinCategory::walking_arrow());
        let one = arc(FinCategory::discrete([Atom::sym("p")]).unwrap());
        let bang = FinFunctor::tabulate(
            c.clone(),
            one,
            |_| Atom::sym("p"),
            |_| Atom::pair(Atom::sym("p"), Atom::sym("p")),
        )
        .unwrap();
        for a in c.objects() {
            let y = CoPresheaf::yoneda(c.clone(), a).unwrap();
            let integrand = lan_integrand(&y, &bang, &Atom::sym("p")).unwrap();
            let q = coend(&integrand).unwrap();
            assert_eq!(quotient_partition(&q), zigzag_classes(&integrand).unwrap());
            // Connected category collapses to one class.
            assert_eq!(q.len(), 1);
        }
    }

    #[test]
    fn composition_along_walking_arrow_chain() {
        let c = arc(FinCategory::walking_arrow());
        let iso = arc(FinCategory::walking_iso());
        let one = arc(FinCategory::discrete([Atom::sym("p")]).unwrap());
        let p = FinFunctor::tabulate(c.clone(), iso.clone(), |a| a.clone(), |f| f.clone()).unwrap();
        let q = FinFunctor::tabulate(
            iso,
            one,
            |_| Atom::sym("p"),
            |_| Atom::pair(Atom::sym("p"), Atom::sym("p")),
        )
        .unwrap();
        let f = sample_presheaf(&c);
        let w = kan_composition_check(&f, &p, &q).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn pi_laws_on_small_chain() {
        let c = arc(FinCategory::walking_arrow());
        let iso = arc(FinCategory::walking_iso());
        let p = FinFunctor::tabulate(c.clone(), iso.clone(), |a| a.clone(), |f| f.clone()).unwrap();
        let q = FinFunctor::identity(iso.clone());
        let pp = PiProfunctor::new(&p).unwrap();
        let pq = PiProfunctor::new(&q).unwrap();
        let pqp = PiProfunctor::new(&p.then(&q).unwrap()).unwrap();
        assert!(pi_well_defined(&pp, &pq, &pqp).unwrap() > 0);
        assert!(pi_unital(&pp).unwrap() > 0);
        assert!(pi_associative(&pp, &pq, &pq).unwrap() > 0);
    }

    #[test]
    fn pi_compose_on_discrete_is_hom_composition() {
        // y ∘ Q(x) on discrete categories.
        let c = arc(FinCategory::discrete([Atom::sym("c")]).unwrap());
        let d = arc(FinCategory::discrete([Atom::sym("d")]).unwrap());
        let e = arc(FinCategory::discrete([Atom::sym("e")]).unwrap());
        let idm = |o: &str| Atom::pair(Atom::sym(o), Atom::sym(o));
        let p =
            FinFunctor::tabulate(c.clone(), d.clone(), |_| Atom::sym("d"), |_| idm("d")).unwrap();
        let q = FinFunctor::tabulate(d, e, |_| Atom::sym("e"), |_| idm("e")).unwrap();
        let pp = PiProfunctor::new(&p).unwrap();
        let pq = PiProfunctor::new(&q).unwrap();
        let pqp = PiProfunctor::new(&p.then(&q).unwrap()).unwrap();
        let x = pp.unit_at(&Atom::sym("c")).unwrap();
        let y = pq.unit_at(&Atom::sym("d")).unwrap();
        let z = pi_compose(&pp, &pq, &pqp, &x, &y).unwrap();
        assert_eq!(z.member, pqp.unit_at(&Atom::sym("c")).unwrap().member);
        let bad = PiElement {
            from: Atom::sym("x"),
            ..y
        };
        assert!(pi_compose(&pp, &pq, &pqp, &x, &bad).is_err());
    }
}

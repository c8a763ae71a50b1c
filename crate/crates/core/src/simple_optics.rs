//! Simple mixed optics.
//!
//! Two regimes live here. In the exact regime a finite monoidal category
//! `𝓜` acts on finite categories `𝒞` and `𝒟`, and the optic set
//! `∫^m 𝒞(s, m•a) × 𝒟(m•b, t)` is computed by [`coend`]. In the normal-form
//! regime the residual ranges over all finite sets acting by product or
//! coproduct; that coend is infinite, so equality is decided by
//! concretizing to `(get, put)` or `(match, build)` tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, Either, FinSet, Func};
use crate::coend::{coend, FinBifunctor, QuotientSet};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// A finite monoidal category with explicit unitors and associator.
///
/// `λ_m: I⊗m → m`, `ρ_m: m⊗I → m`, `α_{m,n,p}: (m⊗n)⊗p → m⊗(n⊗p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinMonoidalCategory {
    underlying: Arc<FinCategory>,
    tensor_obj: BTreeMap<(Atom, Atom), Atom>,
    tensor_mor: BTreeMap<(Atom, Atom), Atom>,
    unit: Atom,
    left_unitor: BTreeMap<Atom, Atom>,
    right_unitor: BTreeMap<Atom, Atom>,
    associator: BTreeMap<(Atom, Atom, Atom), Atom>,
}

fn lookup<'a, K: Ord + fmt::Debug, V>(
    map: &'a BTreeMap<K, V>,
    key: &K,
    what: &str,
) -> Result<&'a V> {
    map.get(key)
        .ok_or_else(|| Error::Malformed(format!("{what} undefined at {key:?}")))
}

impl FinMonoidalCategory {
    /// Builds and validates. Fails with every violated law listed.
    pub fn new(
        underlying: Arc<FinCategory>,
        tensor_obj: BTreeMap<(Atom, Atom), Atom>,
        tensor_mor: BTreeMap<(Atom, Atom), Atom>,
        unit: Atom,
        left_unitor: BTreeMap<Atom, Atom>,
        right_unitor: BTreeMap<Atom, Atom>,
        associator: BTreeMap<(Atom, Atom, Atom), Atom>,
    ) -> Result<FinMonoidalCategory> {
        let m = FinMonoidalCategory {
            underlying,
            tensor_obj,
            tensor_mor,
            unit,
            left_unitor,
            right_unitor,
            associator,
        };
        let problems = m.validate();
        if problems.is_empty() {
            Ok(m)
        } else {
            Err(Error::Invalid(problems.join("; ")))
        }
    }

    /// A strict monoidal structure: unitors and associator are identities.
    pub fn strict(
        underlying: Arc<FinCategory>,
        tensor_obj: impl Fn(&Atom, &Atom) -> Atom,
        tensor_mor: impl Fn(&Atom, &Atom) -> Atom,
        unit: Atom,
    ) -> Result<FinMonoidalCategory> {
        let c = &underlying;
        let mut tobj = BTreeMap::new();
        for m in c.objects() {
            for n in c.objects() {
                tobj.insert((m.clone(), n.clone()), tensor_obj(m, n));
            }
        }
        let mut tmor = BTreeMap::new();
        for (f, _, _) in c.morphisms() {
            for (g, _, _) in c.morphisms() {
                tmor.insert((f.clone(), g.clone()), tensor_mor(f, g));
            }
        }
        let mut lu = BTreeMap::new();
        let mut ru = BTreeMap::new();
        let mut assoc = BTreeMap::new();
        for m in c.objects() {
            lu.insert(m.clone(), c.id(m)?.clone());
            ru.insert(m.clone(), c.id(m)?.clone());
            for n in c.objects() {
                for p in c.objects() {
                    let mn_p = tensor_obj(&tensor_obj(m, n), p);
                    assoc.insert((m.clone(), n.clone(), p.clone()), c.id(&mn_p)?.clone());
                }
            }
        }
        FinMonoidalCategory::new(underlying, tobj, tmor, unit, lu, ru, assoc)
    }

    /// Monoidal structure on a thin category from a monotone operation on
    /// objects; all structure morphisms are the unique arrows `(x,y)`.
    pub fn thin(
        underlying: Arc<FinCategory>,
        op: impl Fn(&Atom, &Atom) -> Atom,
        unit: Atom,
    ) -> Result<FinMonoidalCategory> {
        let c = underlying.clone();
        let arrow = |x: Atom, y: Atom| -> Result<Atom> {
            c.hom(&x, &y)
                .first()
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no arrow {x} → {y} in thin category")))
        };
        let mut tobj = BTreeMap::new();
        let mut lu = BTreeMap::new();
        let mut ru = BTreeMap::new();
        let mut assoc = BTreeMap::new();
        for m in c.objects() {
            lu.insert(m.clone(), arrow(op(&unit, m), m.clone())?);
            ru.insert(m.clone(), arrow(op(m, &unit), m.clone())?);
            for n in c.objects() {
                tobj.insert((m.clone(), n.clone()), op(m, n));
                for p in c.objects() {
                    assoc.insert(
                        (m.clone(), n.clone(), p.clone()),
                        arrow(op(&op(m, n), p), op(m, &op(n, p)))?,
                    );
                }
            }
        }
        let mut tmor = BTreeMap::new();
        for (f, fs, ft) in c.morphisms() {
            for (g, gs, gt) in c.morphisms() {
                tmor.insert((f.clone(), g.clone()), arrow(op(fs, gs), op(ft, gt))?);
            }
        }
        FinMonoidalCategory::new(underlying, tobj, tmor, unit, lu, ru, assoc)
    }

    /// The one-object category of a commutative monoid, tensored by the
    /// monoid multiplication.
    pub fn commutative_monoid(
        elements: &FinSet,
        unit: &Atom,
        mul: impl Fn(&Atom, &Atom) -> Atom + Clone,
    ) -> Result<FinMonoidalCategory> {
        let c = Arc::new(FinCategory::monoid(elements, unit, mul.clone())?);
        let star = Atom::sym("*");
        FinMonoidalCategory::strict(c, |_, _| star.clone(), mul, star.clone())
    }

    /// One object, one morphism.
    pub fn trivial() -> FinMonoidalCategory {
        let c = Arc::new(FinCategory::discrete([Atom::sym("I")]).expect("point"));
        FinMonoidalCategory::thin(c, |_, _| Atom::sym("I"), Atom::sym("I")).expect("trivial")
    }

    /// `{0, 1}` with `⊗ = xor` on the discrete or indiscrete category.
    pub fn xor(indiscrete: bool) -> FinMonoidalCategory {
        let objs = [Atom::from(0), Atom::from(1)];
        let c = if indiscrete {
            FinCategory::indiscrete(objs)
        } else {
            FinCategory::discrete(objs)
        };
        let xor = |x: &Atom, y: &Atom| Atom::from(usize::from(x != y));
        FinMonoidalCategory::thin(Arc::new(c.expect("two objects")), xor, Atom::from(0))
            .expect("xor")
    }

    /// The walking arrow `0 → 1` with `⊗ = max` and unit `0`.
    pub fn walking_arrow_max() -> FinMonoidalCategory {
        let c = Arc::new(FinCategory::walking_arrow());
        FinMonoidalCategory::thin(c, |x, y| x.max(y).clone(), Atom::from(0)).expect("max")
    }

    pub fn underlying(&self) -> &Arc<FinCategory> {
        &self.underlying
    }

    pub fn unit(&self) -> &Atom {
        &self.unit
    }

    pub fn tensor(&self, m: &Atom, n: &Atom) -> Result<&Atom> {
        lookup(&self.tensor_obj, &(m.clone(), n.clone()), "tensor")
    }

    pub fn tensor_mor(&self, f: &Atom, g: &Atom) -> Result<&Atom> {
        lookup(
            &self.tensor_mor,
            &(f.clone(), g.clone()),
            "tensor of morphisms",
        )
    }

    pub fn left_unitor(&self, m: &Atom) -> Result<&Atom> {
        lookup(&self.left_unitor, m, "left unitor")
    }

    pub fn right_unitor(&self, m: &Atom) -> Result<&Atom> {
        lookup(&self.right_unitor, m, "right unitor")
    }

    pub fn associator(&self, m: &Atom, n: &Atom, p: &Atom) -> Result<&Atom> {
        lookup(
            &self.associator,
            &(m.clone(), n.clone(), p.clone()),
            "associator",
        )
    }

    pub fn tensor_table(&self) -> &BTreeMap<(Atom, Atom), Atom> {
        &self.tensor_obj
    }

    pub fn tensor_mor_table(&self) -> &BTreeMap<(Atom, Atom), Atom> {
        &self.tensor_mor
    }

    pub fn left_unitors(&self) -> &BTreeMap<Atom, Atom> {
        &self.left_unitor
    }

    pub fn right_unitors(&self) -> &BTreeMap<Atom, Atom> {
        &self.right_unitor
    }

    pub fn associators(&self) -> &BTreeMap<(Atom, Atom, Atom), Atom> {
        &self.associator
    }

    /// Functoriality of `⊗`, invertibility and naturality of the structure
    /// morphisms, pentagon and triangle.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let c = &self.underlying;
        if !c.has_object(&self.unit) {
            problems.push(format!("unit {} is not an object", self.unit));
            return problems;
        }
        let bifunctor = BifunctorTables {
            left: c,
            right: c,
            target: c,
            obj: &self.tensor_obj,
            mor: &self.tensor_mor,
        };
        problems.extend(bifunctor.validate("⊗"));
        if !problems.is_empty() {
            return problems;
        }
        let i = &self.unit;
        let t = |m: &Atom, n: &Atom| self.tensor_obj[&(m.clone(), n.clone())].clone();
        let tm = |f: &Atom, g: &Atom| self.tensor_mor[&(f.clone(), g.clone())].clone();
        let id = |m: &Atom| c.id(m).expect("object").clone();
        let comp = |g: &Atom, f: &Atom| c.compose(g, f).ok().cloned();

        let mut structural = |name: String, f: Option<&Atom>, s: Atom, tg: Atom| match f {
            None => problems.push(format!("{name} missing")),
            Some(f) => {
                if c.endpoints(f).ok() != Some((&s, &tg)) {
                    problems.push(format!("{name} = {f} is not a morphism {s} → {tg}"));
                } else if !matches!(c.inverse(f), Ok(Some(_))) {
                    problems.push(format!("{name} = {f} is not invertible"));
                }
            }
        };
        for m in c.objects() {
            structural(
                format!("λ_{m}"),
                self.left_unitor.get(m),
                t(i, m),
                m.clone(),
            );
            structural(
                format!("ρ_{m}"),
                self.right_unitor.get(m),
                t(m, i),
                m.clone(),
            );
            for n in c.objects() {
                for p in c.objects() {
                    structural(
                        format!("α_({m},{n},{p})"),
                        self.associator.get(&(m.clone(), n.clone(), p.clone())),
                        t(&t(m, n), p),
                        t(m, &t(n, p)),
                    );
                }
            }
        }
        if !problems.is_empty() {
            return problems;
        }
        let lam = |m: &Atom| self.left_unitor[m].clone();
        let rho = |m: &Atom| self.right_unitor[m].clone();
        let alpha = |m: &Atom, n: &Atom, p: &Atom| {
            self.associator[&(m.clone(), n.clone(), p.clone())].clone()
        };

        let id_i = id(i);
        for (f, s, tg) in c.morphisms() {
            if comp(&lam(tg), &tm(&id_i, f)) != comp(f, &lam(s)) {
                problems.push(format!("left unitor not natural at {f}"));
            }
            if comp(&rho(tg), &tm(f, &id_i)) != comp(f, &rho(s)) {
                problems.push(format!("right unitor not natural at {f}"));
            }
        }
        for (f, fs, ft) in c.morphisms() {
            for (g, gs, gt) in c.morphisms() {
                for (h, hs, ht) in c.morphisms() {
                    let lhs = comp(&alpha(ft, gt, ht), &tm(&tm(f, g), h));
                    let rhs = comp(&tm(f, &tm(g, h)), &alpha(fs, gs, hs));
                    if lhs != rhs {
                        problems.push(format!("associator not natural at ({f},{g},{h})"));
                    }
                }
            }
        }
        for m in c.objects() {
            for n in c.objects() {
                let lhs = comp(&tm(&id(m), &lam(n)), &alpha(m, i, n));
                if lhs != Some(tm(&rho(m), &id(n))) {
                    problems.push(format!("triangle fails at ({m},{n})"));
                }
                for p in c.objects() {
                    for q in c.objects() {
                        let lhs = comp(&alpha(m, n, &t(p, q)), &alpha(&t(m, n), p, q));
                        let rhs = comp(&alpha(m, &t(n, p), q), &tm(&alpha(m, n, p), &id(q)))
                            .and_then(|x| comp(&tm(&id(m), &alpha(n, p, q)), &x));
                        if lhs != rhs {
                            problems.push(format!("pentagon fails at ({m},{n},{p},{q})"));
                        }
                    }
                }
            }
        }
        problems
    }

    /// `𝓜` acting on itself by `⊗`, with `μ = α` and `η = λ`.
    pub fn regular_action(self: &Arc<Self>) -> Result<MonoidalAction> {
        let c = self.underlying.clone();
        let mut mu = BTreeMap::new();
        for m in c.objects() {
            for n in c.objects() {
                for x in c.objects() {
                    mu.insert(
                        (m.clone(), n.clone(), x.clone()),
                        self.associator(m, n, x)?.clone(),
                    );
                }
            }
        }
        MonoidalAction::new(
            self.clone(),
            c,
            self.tensor_obj.clone(),
            self.tensor_mor.clone(),
            mu,
            self.left_unitor.clone(),
        )
    }

    /// `m • c = c` for every `m`.
    pub fn trivial_action(self: &Arc<Self>, on: Arc<FinCategory>) -> Result<MonoidalAction> {
        let m_cat = &self.underlying;
        let mut app = BTreeMap::new();
        let mut mu = BTreeMap::new();
        let mut eta = BTreeMap::new();
        for x in on.objects() {
            eta.insert(x.clone(), on.id(x)?.clone());
            for m in m_cat.objects() {
                app.insert((m.clone(), x.clone()), x.clone());
                for n in m_cat.objects() {
                    mu.insert((m.clone(), n.clone(), x.clone()), on.id(x)?.clone());
                }
            }
        }
        let mut app_mor = BTreeMap::new();
        for (f, _, _) in m_cat.morphisms() {
            for (g, _, _) in on.morphisms() {
                app_mor.insert((f.clone(), g.clone()), g.clone());
            }
        }
        MonoidalAction::new(self.clone(), on, app, app_mor, mu, eta)
    }
}

/// Object and morphism tables of a would-be functor `left × right → target`.
struct BifunctorTables<'a> {
    left: &'a FinCategory,
    right: &'a FinCategory,
    target: &'a FinCategory,
    obj: &'a BTreeMap<(Atom, Atom), Atom>,
    mor: &'a BTreeMap<(Atom, Atom), Atom>,
}

impl BifunctorTables<'_> {
    fn validate(&self, name: &str) -> Vec<String> {
        let mut problems = Vec::new();
        for m in self.left.objects() {
            for x in self.right.objects() {
                match self.obj.get(&(m.clone(), x.clone())) {
                    Some(o) if self.target.has_object(o) => {}
                    _ => problems.push(format!("{name} undefined on objects ({m},{x})")),
                }
            }
        }
        for (f, fs, ft) in self.left.morphisms() {
            for (g, gs, gt) in self.right.morphisms() {
                let Some(fg) = self.mor.get(&(f.clone(), g.clone())) else {
                    problems.push(format!("{name} undefined on morphisms ({f},{g})"));
                    continue;
                };
                let want = (
                    self.obj.get(&(fs.clone(), gs.clone())),
                    self.obj.get(&(ft.clone(), gt.clone())),
                );
                match self.target.endpoints(fg) {
                    Ok((s, t)) if want == (Some(s), Some(t)) => {}
                    _ => problems.push(format!("{name} of ({f},{g}) = {fg} has wrong endpoints")),
                }
            }
        }
        if !problems.is_empty() {
            return problems;
        }
        for m in self.left.objects() {
            for x in self.right.objects() {
                let ids = (
                    self.left.id(m).unwrap().clone(),
                    self.right.id(x).unwrap().clone(),
                );
                if self.target.id(&self.obj[&(m.clone(), x.clone())]).ok() != self.mor.get(&ids) {
                    problems.push(format!(
                        "{name} does not preserve the identity at ({m},{x})"
                    ));
                }
            }
        }
        for ((g1, f1), g1f1) in self.left.compose_table() {
            for ((g2, f2), g2f2) in self.right.compose_table() {
                let lhs = &self.mor[&(g1f1.clone(), g2f2.clone())];
                let rhs = self.target.compose(
                    &self.mor[&(g1.clone(), g2.clone())],
                    &self.mor[&(f1.clone(), f2.clone())],
                );
                if rhs.ok() != Some(lhs) {
                    problems.push(format!(
                        "{name} does not preserve composition of ({g1},{g2})∘({f1},{f2})"
                    ));
                }
            }
        }
        problems
    }
}

/// An action `•: 𝓜 × 𝒞 → 𝒞` with `μ_{m,n,c}: (m⊗n)•c → m•(n•c)` and
/// `η_c: I•c → c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoidalAction {
    acting: Arc<FinMonoidalCategory>,
    on: Arc<FinCategory>,
    app: BTreeMap<(Atom, Atom), Atom>,
    app_mor: BTreeMap<(Atom, Atom), Atom>,
    mu: BTreeMap<(Atom, Atom, Atom), Atom>,
    eta: BTreeMap<Atom, Atom>,
}

impl MonoidalAction {
    pub fn new(
        acting: Arc<FinMonoidalCategory>,
        on: Arc<FinCategory>,
        app: BTreeMap<(Atom, Atom), Atom>,
        app_mor: BTreeMap<(Atom, Atom), Atom>,
        mu: BTreeMap<(Atom, Atom, Atom), Atom>,
        eta: BTreeMap<Atom, Atom>,
    ) -> Result<MonoidalAction> {
        let a = MonoidalAction {
            acting,
            on,
            app,
            app_mor,
            mu,
            eta,
        };
        let problems = a.validate();
        if problems.is_empty() {
            Ok(a)
        } else {
            Err(Error::Invalid(problems.join("; ")))
        }
    }

    /// An action on a thin category determined by its object part.
    pub fn thin(
        acting: Arc<FinMonoidalCategory>,
        on: Arc<FinCategory>,
        op: impl Fn(&Atom, &Atom) -> Atom,
    ) -> Result<MonoidalAction> {
        let m_cat = acting.underlying().clone();
        let arrow = |x: Atom, y: Atom| -> Result<Atom> {
            on.hom(&x, &y)
                .first()
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no arrow {x} → {y} in thin category")))
        };
        let mut app = BTreeMap::new();
        let mut mu = BTreeMap::new();
        let mut eta = BTreeMap::new();
        for c in on.objects() {
            eta.insert(c.clone(), arrow(op(acting.unit(), c), c.clone())?);
            for m in m_cat.objects() {
                app.insert((m.clone(), c.clone()), op(m, c));
                for n in m_cat.objects() {
                    mu.insert(
                        (m.clone(), n.clone(), c.clone()),
                        arrow(op(acting.tensor(m, n)?, c), op(m, &op(n, c)))?,
                    );
                }
            }
        }
        let mut app_mor = BTreeMap::new();
        for (f, fs, ft) in m_cat.morphisms() {
            for (g, gs, gt) in on.morphisms() {
                app_mor.insert((f.clone(), g.clone()), arrow(op(fs, gs), op(ft, gt))?);
            }
        }
        MonoidalAction::new(acting, on, app, app_mor, mu, eta)
    }

    pub fn acting(&self) -> &Arc<FinMonoidalCategory> {
        &self.acting
    }

    pub fn on(&self) -> &Arc<FinCategory> {
        &self.on
    }

    pub fn app(&self, m: &Atom, c: &Atom) -> Result<&Atom> {
        lookup(&self.app, &(m.clone(), c.clone()), "action")
    }

    pub fn app_mor(&self, f: &Atom, g: &Atom) -> Result<&Atom> {
        lookup(
            &self.app_mor,
            &(f.clone(), g.clone()),
            "action on morphisms",
        )
    }

    pub fn mu(&self, m: &Atom, n: &Atom, c: &Atom) -> Result<&Atom> {
        lookup(
            &self.mu,
            &(m.clone(), n.clone(), c.clone()),
            "multiplicator",
        )
    }

    pub fn eta(&self, c: &Atom) -> Result<&Atom> {
        lookup(&self.eta, c, "unitor")
    }

    pub fn app_table(&self) -> &BTreeMap<(Atom, Atom), Atom> {
        &self.app
    }

    pub fn app_mor_table(&self) -> &BTreeMap<(Atom, Atom), Atom> {
        &self.app_mor
    }

    pub fn mu_table(&self) -> &BTreeMap<(Atom, Atom, Atom), Atom> {
        &self.mu
    }

    pub fn eta_table(&self) -> &BTreeMap<Atom, Atom> {
        &self.eta
    }

    /// `m • g`, i.e. the action of `id_m` on a morphism.
    pub fn whisker(&self, m: &Atom, g: &Atom) -> Result<&Atom> {
        self.app_mor(self.acting.underlying().id(m)?, g)
    }

    /// `f • c`, i.e. the action of `f` on `id_c`.
    pub fn on_residual(&self, f: &Atom, c: &Atom) -> Result<&Atom> {
        self.app_mor(f, self.on.id(c)?)
    }

    fn inverse(&self, f: &Atom) -> Result<Atom> {
        self.on
            .inverse(f)?
            .ok_or_else(|| Error::Invalid(format!("{f} is not invertible")))
    }

    pub fn mu_inverse(&self, m: &Atom, n: &Atom, c: &Atom) -> Result<Atom> {
        self.inverse(self.mu(m, n, c)?)
    }

    pub fn eta_inverse(&self, c: &Atom) -> Result<Atom> {
        self.inverse(self.eta(c)?)
    }

    pub fn validate(&self) -> Vec<String> {
        let m_cat = self.acting.underlying().clone();
        let on = self.on.clone();
        let tables = BifunctorTables {
            left: &m_cat,
            right: &on,
            target: &on,
            obj: &self.app,
            mor: &self.app_mor,
        };
        let mut problems = tables.validate("•");
        if !problems.is_empty() {
            return problems;
        }
        let ac = &self.acting;
        let app = |m: &Atom, c: &Atom| self.app[&(m.clone(), c.clone())].clone();
        let amor = |f: &Atom, g: &Atom| self.app_mor[&(f.clone(), g.clone())].clone();
        let t = |m: &Atom, n: &Atom| ac.tensor(m, n).expect("validated").clone();
        let i = ac.unit().clone();
        for c in on.objects() {
            match self.eta.get(c) {
                Some(e) if on.endpoints(e).ok() == Some((&app(&i, c), c)) => {
                    if !matches!(on.inverse(e), Ok(Some(_))) {
                        problems.push(format!("η_{c} is not invertible"));
                    }
                }
                _ => problems.push(format!("η_{c} missing or has wrong endpoints")),
            }
            for m in m_cat.objects() {
                for n in m_cat.objects() {
                    let want = (app(&t(m, n), c), app(m, &app(n, c)));
                    match self.mu.get(&(m.clone(), n.clone(), c.clone())) {
                        Some(u) if on.endpoints(u).ok() == Some((&want.0, &want.1)) => {
                            if !matches!(on.inverse(u), Ok(Some(_))) {
                                problems.push(format!("μ_({m},{n},{c}) is not invertible"));
                            }
                        }
                        _ => {
                            problems.push(format!("μ_({m},{n},{c}) missing or has wrong endpoints"))
                        }
                    }
                }
            }
        }
        if !problems.is_empty() {
            return problems;
        }
        let comp = |g: &Atom, f: &Atom| on.compose(g, f).ok().cloned();
        let mu = |m: &Atom, n: &Atom, c: &Atom| self.mu[&(m.clone(), n.clone(), c.clone())].clone();
        let eta = |c: &Atom| self.eta[c].clone();
        let id_m = |m: &Atom| m_cat.id(m).expect("object").clone();
        let id_c = |c: &Atom| on.id(c).expect("object").clone();

        for (h, hs, ht) in on.morphisms() {
            if comp(&eta(ht), &amor(&id_m(&i), h)) != comp(h, &eta(hs)) {
                problems.push(format!("η not natural at {h}"));
            }
        }
        for (f, fs, ft) in m_cat.morphisms() {
            for (g, gs, gt) in m_cat.morphisms() {
                let fg = ac.tensor_mor(f, g).expect("validated");
                for (h, hs, ht) in on.morphisms() {
                    let lhs = comp(&mu(ft, gt, ht), &amor(fg, h));
                    let rhs = comp(&amor(f, &amor(g, h)), &mu(fs, gs, hs));
                    if lhs != rhs {
                        problems.push(format!("μ not natural at ({f},{g},{h})"));
                    }
                }
            }
        }
        for c in on.objects() {
            for m in m_cat.objects() {
                let lhs = comp(&amor(&id_m(m), &eta(c)), &mu(m, &i, c));
                let rhs = amor(ac.right_unitor(m).expect("validated"), &id_c(c));
                if lhs != Some(rhs) {
                    problems.push(format!("right unit coherence fails at ({m},{c})"));
                }
                let lhs = comp(&eta(&app(m, c)), &mu(&i, m, c));
                let rhs = amor(ac.left_unitor(m).expect("validated"), &id_c(c));
                if lhs != Some(rhs) {
                    problems.push(format!("left unit coherence fails at ({m},{c})"));
                }
                for n in m_cat.objects() {
                    for p in m_cat.objects() {
                        let lhs = comp(&mu(m, n, &app(p, c)), &mu(&t(m, n), p, c));
                        let alpha = ac.associator(m, n, p).expect("validated");
                        let rhs = comp(&mu(m, &t(n, p), c), &amor(alpha, &id_c(c)))
                            .and_then(|x| comp(&amor(&id_m(m), &mu(n, p, c)), &x));
                        if lhs != rhs {
                            problems.push(format!(
                                "associativity coherence fails at ({m},{n},{p},{c})"
                            ));
                        }
                    }
                }
            }
        }
        problems
    }
}

/// The endpoints `⟨a,b⟩ → ⟨s,t⟩` of an optic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Endpoints {
    pub a: Atom,
    pub b: Atom,
    pub s: Atom,
    pub t: Atom,
}

impl fmt::Display for Endpoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{},{}⟩→⟨{},{}⟩", self.a, self.b, self.s, self.t)
    }
}

/// A representative `⟨m, u: s → m•a, w: m•b → t⟩`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExistentialOptic {
    pub endpoints: Endpoints,
    pub residual: Atom,
    pub forward: Atom,
    pub backward: Atom,
}

/// Two actions of the same finite monoidal category.
#[derive(Clone, Debug)]
pub struct OpticSetting {
    monoidal: Arc<FinMonoidalCategory>,
    left: MonoidalAction,
    right: MonoidalAction,
}

/// The integrand and exact coend for one choice of endpoints.
#[derive(Clone, Debug)]
pub struct OpticSpace {
    pub endpoints: Endpoints,
    pub integrand: FinBifunctor,
    pub quotient: QuotientSet,
}

impl OpticSpace {
    /// `ι_m(u, w)`.
    pub fn class_of(&self, o: &ExistentialOptic) -> Result<&Atom> {
        if o.endpoints != self.endpoints {
            return Err(Error::Mismatch(format!(
                "optic {} is not in {}",
                o.endpoints, self.endpoints
            )));
        }
        self.quotient.inject(
            &o.residual,
            &Atom::pair(o.forward.clone(), o.backward.clone()),
        )
    }

    /// Every representative, in canonical order.
    pub fn optics(&self) -> Vec<ExistentialOptic> {
        let mut out = Vec::new();
        for members in self.quotient.classes().values() {
            for (m, e) in members {
                let (u, w) = e.as_pair().expect("pair element");
                out.push(ExistentialOptic {
                    endpoints: self.endpoints.clone(),
                    residual: m.clone(),
                    forward: u.clone(),
                    backward: w.clone(),
                });
            }
        }
        out.sort();
        out
    }

    pub fn members(&self, class: &Atom) -> Result<Vec<ExistentialOptic>> {
        self.quotient
            .members(class)?
            .iter()
            .map(|(m, e)| {
                let (u, w) = e.as_pair()?;
                Ok(ExistentialOptic {
                    endpoints: self.endpoints.clone(),
                    residual: m.clone(),
                    forward: u.clone(),
                    backward: w.clone(),
                })
            })
            .collect()
    }
}

impl OpticSetting {
    pub fn new(left: MonoidalAction, right: MonoidalAction) -> Result<OpticSetting> {
        if left.acting != right.acting {
            return Err(Error::Mismatch(
                "actions of different monoidal categories".into(),
            ));
        }
        Ok(OpticSetting {
            monoidal: left.acting.clone(),
            left,
            right,
        })
    }

    pub fn monoidal(&self) -> &Arc<FinMonoidalCategory> {
        &self.monoidal
    }

    pub fn left(&self) -> &MonoidalAction {
        &self.left
    }

    pub fn right(&self) -> &MonoidalAction {
        &self.right
    }

    pub fn all_endpoints(&self) -> Vec<Endpoints> {
        let (c, d) = (self.left.on(), self.right.on());
        let mut out = Vec::new();
        for a in c.objects() {
            for b in d.objects() {
                for s in c.objects() {
                    for t in d.objects() {
                        out.push(Endpoints {
                            a: a.clone(),
                            b: b.clone(),
                            s: s.clone(),
                            t: t.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// `(m⁻, m⁺) ↦ 𝒞(s, m⁺•a) × 𝒟(m⁻•b, t)`, elements `(u, w)`.
    pub fn integrand(&self, e: &Endpoints) -> Result<FinBifunctor> {
        let (c, d) = (self.left.on().clone(), self.right.on().clone());
        c.check_object(&e.a)?;
        c.check_object(&e.s)?;
        d.check_object(&e.b)?;
        d.check_object(&e.t)?;
        let m_cat = self.monoidal.underlying().clone();
        FinBifunctor::tabulate(
            m_cat.clone(),
            m_cat,
            |mm, mp| {
                let us = c.hom_set(&e.s, self.left.app(mp, &e.a)?);
                let ws = d.hom_set(self.right.app(mm, &e.b)?, &e.t);
                Ok(us.product(&ws))
            },
            |f, _, el| {
                let (u, w) = el.as_pair()?;
                let fb = self.right.on_residual(f, &e.b)?;
                Ok(Atom::pair(u.clone(), d.compose(w, fb)?.clone()))
            },
            |_, g, el| {
                let (u, w) = el.as_pair()?;
                let ga = self.left.on_residual(g, &e.a)?;
                Ok(Atom::pair(c.compose(ga, u)?.clone(), w.clone()))
            },
        )
    }

    pub fn space(&self, e: &Endpoints) -> Result<OpticSpace> {
        let integrand = self.integrand(e)?;
        let quotient = coend(&integrand)?;
        Ok(OpticSpace {
            endpoints: e.clone(),
            integrand,
            quotient,
        })
    }

    pub fn optic_coend(&self, e: &Endpoints) -> Result<QuotientSet> {
        Ok(self.space(e)?.quotient)
    }

    /// Checks endpoints of the forward and backward morphisms.
    pub fn check(&self, o: &ExistentialOptic) -> Result<()> {
        let e = &o.endpoints;
        let (c, d) = (self.left.on(), self.right.on());
        let want_u = (&e.s, self.left.app(&o.residual, &e.a)?);
        if c.endpoints(&o.forward)? != want_u {
            return Err(Error::Mismatch(format!(
                "forward {} is not {} → {}",
                o.forward, want_u.0, want_u.1
            )));
        }
        let want_w = (self.right.app(&o.residual, &e.b)?, &e.t);
        if d.endpoints(&o.backward)? != want_w {
            return Err(Error::Mismatch(format!(
                "backward {} is not {} → {}",
                o.backward, want_w.0, want_w.1
            )));
        }
        Ok(())
    }

    /// Residual `I`, forward `η_a⁻¹`, backward `η_b`.
    pub fn identity(&self, a: &Atom, b: &Atom) -> Result<ExistentialOptic> {
        Ok(ExistentialOptic {
            endpoints: Endpoints {
                a: a.clone(),
                b: b.clone(),
                s: a.clone(),
                t: b.clone(),
            },
            residual: self.monoidal.unit().clone(),
            forward: self.left.eta_inverse(a)?,
            backward: self.right.eta(b)?.clone(),
        })
    }

    /// `o1: ⟨a,b⟩→⟨s,t⟩` with residual `m`, `o2: ⟨s,t⟩→⟨s',t'⟩` with
    /// residual `n`. The composite has residual `n⊗m`, forward
    /// `μ⁻¹ ∘ (n•u₁) ∘ u₂` and backward `w₂ ∘ (n•w₁) ∘ μ`.
    pub fn compose(
        &self,
        o1: &ExistentialOptic,
        o2: &ExistentialOptic,
    ) -> Result<ExistentialOptic> {
        let (e1, e2) = (&o1.endpoints, &o2.endpoints);
        if e1.s != e2.a || e1.t != e2.b {
            return Err(Error::Mismatch(format!("cannot compose {e1} with {e2}")));
        }
        self.check(o1)?;
        self.check(o2)?;
        let (c, d) = (self.left.on(), self.right.on());
        let (m, n) = (&o1.residual, &o2.residual);
        let nm = self.monoidal.tensor(n, m)?.clone();
        let forward = c.compose(
            &self.left.mu_inverse(n, m, &e1.a)?,
            c.compose(self.left.whisker(n, &o1.forward)?, &o2.forward)?,
        )?;
        let backward = d.compose(
            &o2.backward,
            d.compose(
                self.right.whisker(n, &o1.backward)?,
                self.right.mu(n, m, &e1.b)?,
            )?,
        )?;
        Ok(ExistentialOptic {
            endpoints: Endpoints {
                a: e1.a.clone(),
                b: e1.b.clone(),
                s: e2.s.clone(),
                t: e2.t.clone(),
            },
            residual: nm,
            forward: forward.clone(),
            backward: backward.clone(),
        })
    }

    /// Composes every member of the classes of `o1` and `o2` and returns the
    /// single resulting class, or fails if representatives disagree.
    pub fn compose_classes(
        &self,
        first: &OpticSpace,
        class1: &Atom,
        second: &OpticSpace,
        class2: &Atom,
        result: &OpticSpace,
    ) -> Result<Atom> {
        let mut image: Option<Atom> = None;
        for o1 in first.members(class1)? {
            for o2 in second.members(class2)? {
                let cls = result.class_of(&self.compose(&o1, &o2)?)?.clone();
                match &image {
                    None => image = Some(cls),
                    Some(prev) if *prev == cls => {}
                    Some(prev) => {
                        return Err(Error::Witness(format!(
                            "composite class depends on representatives: {prev} vs {cls}"
                        )))
                    }
                }
            }
        }
        image.ok_or_else(|| Error::Malformed("empty class".into()))
    }
}

/// How the residual set acts on focus sets in the normal-form regime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetAction {
    /// `m • a = m × a`.
    Product,
    /// `m • a = m + a`.
    Coproduct,
}

impl SetAction {
    pub fn apply(self, m: &FinSet, a: &FinSet) -> FinSet {
        match self {
            SetAction::Product => m.product(a),
            SetAction::Coproduct => m.sum(a),
        }
    }

    /// The residual of the identity optic.
    pub fn unit(self) -> FinSet {
        match self {
            SetAction::Product => FinSet::singleton(Atom::unit()),
            SetAction::Coproduct => FinSet::empty(),
        }
    }

    /// `η: I • x → x`.
    fn eta(self, x: &Atom) -> Result<Atom> {
        match self {
            SetAction::Product => Ok(x.as_pair()?.1.clone()),
            SetAction::Coproduct => match x.as_sum()? {
                Either::Right(y) => Ok(y.clone()),
                Either::Left(_) => Err(Error::Malformed(format!("{x} is in the empty summand"))),
            },
        }
    }

    fn eta_inverse(self, x: &Atom) -> Atom {
        match self {
            SetAction::Product => Atom::pair(Atom::unit(), x.clone()),
            SetAction::Coproduct => Atom::inr(x.clone()),
        }
    }

    /// `μ: (n⊗m) • x → n • (m • x)`.
    fn mu(self, x: &Atom) -> Result<Atom> {
        match self {
            SetAction::Product => {
                let (nm, a) = x.as_pair()?;
                let (n, m) = nm.as_pair()?;
                Ok(Atom::pair(n.clone(), Atom::pair(m.clone(), a.clone())))
            }
            SetAction::Coproduct => Ok(match x.as_sum()? {
                Either::Left(nm) => match nm.as_sum()? {
                    Either::Left(n) => Atom::inl(n.clone()),
                    Either::Right(m) => Atom::inr(Atom::inl(m.clone())),
                },
                Either::Right(a) => Atom::inr(Atom::inr(a.clone())),
            }),
        }
    }

    fn mu_inverse(self, x: &Atom) -> Result<Atom> {
        match self {
            SetAction::Product => {
                let (n, ma) = x.as_pair()?;
                let (m, a) = ma.as_pair()?;
                Ok(Atom::pair(Atom::pair(n.clone(), m.clone()), a.clone()))
            }
            SetAction::Coproduct => Ok(match x.as_sum()? {
                Either::Left(n) => Atom::inl(Atom::inl(n.clone())),
                Either::Right(ma) => match ma.as_sum()? {
                    Either::Left(m) => Atom::inl(Atom::inr(m.clone())),
                    Either::Right(a) => Atom::inr(a.clone()),
                },
            }),
        }
    }

    /// `n • f` for `f: x → y`, acting on an element of `n • x`.
    fn whisker(self, f: &Func, x: &Atom) -> Result<Atom> {
        match self {
            SetAction::Product => {
                let (n, y) = x.as_pair()?;
                Ok(Atom::pair(n.clone(), f.apply(y)?.clone()))
            }
            SetAction::Coproduct => Ok(match x.as_sum()? {
                Either::Left(n) => Atom::inl(n.clone()),
                Either::Right(y) => Atom::inr(f.apply(y)?.clone()),
            }),
        }
    }

    /// `h • x` for `h: m → m'` acting on the residual.
    fn on_residual(self, h: &Func, x: &Atom) -> Result<Atom> {
        match self {
            SetAction::Product => {
                let (m, y) = x.as_pair()?;
                Ok(Atom::pair(h.apply(m)?.clone(), y.clone()))
            }
            SetAction::Coproduct => Ok(match x.as_sum()? {
                Either::Left(m) => Atom::inl(h.apply(m)?.clone()),
                Either::Right(y) => Atom::inr(y.clone()),
            }),
        }
    }
}

/// Focus and whole sets of a set-level optic `⟨a,b⟩ → ⟨s,t⟩`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetEndpoints {
    pub a: FinSet,
    pub b: FinSet,
    pub s: FinSet,
    pub t: FinSet,
}

/// A representative `⟨m, s → m•a, m•b → t⟩` over finite sets.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetOptic {
    pub action: SetAction,
    pub endpoints: SetEndpoints,
    pub residual: FinSet,
    pub forward: Func,
    pub backward: Func,
}

impl SetOptic {
    pub fn new(
        action: SetAction,
        endpoints: SetEndpoints,
        residual: FinSet,
        forward: Func,
        backward: Func,
    ) -> Result<SetOptic> {
        let o = SetOptic {
            action,
            endpoints,
            residual,
            forward,
            backward,
        };
        o.check()?;
        Ok(o)
    }

    pub fn check(&self) -> Result<()> {
        let e = &self.endpoints;
        let ma = self.action.apply(&self.residual, &e.a);
        let mb = self.action.apply(&self.residual, &e.b);
        if !self.forward.is_total_on(&e.s, &ma) {
            return Err(Error::Malformed(format!(
                "forward is not a function {} → {}",
                e.s, ma
            )));
        }
        if !self.backward.is_total_on(&mb, &e.t) {
            return Err(Error::Malformed(format!(
                "backward is not a function {} → {}",
                mb, e.t
            )));
        }
        Ok(())
    }

    pub fn identity(action: SetAction, a: &FinSet, b: &FinSet) -> SetOptic {
        let i = action.unit();
        let endpoints = SetEndpoints {
            a: a.clone(),
            b: b.clone(),
            s: a.clone(),
            t: b.clone(),
        };
        let forward = Func::tabulate(a, |x| action.eta_inverse(x));
        let backward = Func::tabulate(&action.apply(&i, b), |x| {
            action.eta(x).expect("unit element")
        });
        SetOptic {
            action,
            endpoints,
            residual: i,
            forward,
            backward,
        }
    }

    /// Same orientation as [`OpticSetting::compose`]: residual `n ⊗ m`.
    pub fn compose(&self, next: &SetOptic) -> Result<SetOptic> {
        if self.action != next.action {
            return Err(Error::Mismatch("optics under different actions".into()));
        }
        let (e1, e2) = (&self.endpoints, &next.endpoints);
        if e1.s != e2.a || e1.t != e2.b {
            return Err(Error::Mismatch("middle endpoints differ".into()));
        }
        let act = self.action;
        let residual = match act {
            SetAction::Product => next.residual.product(&self.residual),
            SetAction::Coproduct => next.residual.sum(&self.residual),
        };
        let forward = Func::try_tabulate(&e2.s, |x| {
            let y = next.forward.apply(x)?;
            act.mu_inverse(&act.whisker(&self.forward, y)?)
        })?;
        let backward = Func::try_tabulate(&act.apply(&residual, &e1.b), |x| {
            let y = act.whisker(&self.backward, &act.mu(x)?)?;
            Ok(next.backward.apply(&y)?.clone())
        })?;
        SetOptic::new(
            act,
            SetEndpoints {
                a: e1.a.clone(),
                b: e1.b.clone(),
                s: e2.s.clone(),
                t: e2.t.clone(),
            },
            residual,
            forward,
            backward,
        )
    }

    /// Slides a residual map `h: m → m'` through the optic: the result
    /// has residual `m'`, forward `(h•a) ∘ u` and the given backward map on
    /// `m'`. With `backward' ∘ (h•b)` equal to this optic's backward map
    /// the two are related by one step of the coend relation.
    pub fn slide(
        &self,
        target: &FinSet,
        h: &Func,
        backward: &Func,
    ) -> Result<(SetOptic, SetOptic)> {
        let act = self.action;
        let forward = Func::try_tabulate(&self.endpoints.s, |x| {
            act.on_residual(h, self.forward.apply(x)?)
        })?;
        let moved = SetOptic::new(
            act,
            self.endpoints.clone(),
            target.clone(),
            forward,
            backward.clone(),
        )?;
        let pulled = Func::try_tabulate(&act.apply(&self.residual, &self.endpoints.b), |x| {
            Ok(backward.apply(&act.on_residual(h, x)?)?.clone())
        })?;
        let original = SetOptic::new(
            act,
            self.endpoints.clone(),
            self.residual.clone(),
            self.forward.clone(),
            pulled,
        )?;
        Ok((original, moved))
    }

    pub fn normal_form(&self) -> Result<NormalForm> {
        match self.action {
            SetAction::Product => Ok(NormalForm::Lens(lens_concretize(self)?)),
            SetAction::Coproduct => Ok(NormalForm::Prism(prism_concretize(self)?)),
        }
    }

    /// Equality in the normal-form regime.
    pub fn equivalent(&self, other: &SetOptic) -> Result<bool> {
        Ok(self.normal_form()? == other.normal_form()?)
    }
}

/// `get: s → a` and `put: s × b → t`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcreteLens {
    pub endpoints: SetEndpoints,
    pub get: Func,
    pub put: Func,
}

impl ConcreteLens {
    pub fn new(endpoints: SetEndpoints, get: Func, put: Func) -> Result<ConcreteLens> {
        if !get.is_total_on(&endpoints.s, &endpoints.a) {
            return Err(Error::Malformed("get is not total".into()));
        }
        if !put.is_total_on(&endpoints.s.product(&endpoints.b), &endpoints.t) {
            return Err(Error::Malformed("put is not total".into()));
        }
        Ok(ConcreteLens {
            endpoints,
            get,
            put,
        })
    }

    pub fn put(&self, x: &Atom, y: &Atom) -> Result<&Atom> {
        self.put.apply(&Atom::pair(x.clone(), y.clone()))
    }
}

/// `match: s → t + a` and `build: b → t`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcretePrism {
    pub endpoints: SetEndpoints,
    #[serde(rename = "match")]
    pub matcher: Func,
    pub build: Func,
}

impl ConcretePrism {
    pub fn new(endpoints: SetEndpoints, matcher: Func, build: Func) -> Result<ConcretePrism> {
        if !matcher.is_total_on(&endpoints.s, &endpoints.t.sum(&endpoints.a)) {
            return Err(Error::Malformed("match is not total".into()));
        }
        if !build.is_total_on(&endpoints.b, &endpoints.t) {
            return Err(Error::Malformed("build is not total".into()));
        }
        Ok(ConcretePrism {
            endpoints,
            matcher,
            build,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalForm {
    Lens(ConcreteLens),
    Prism(ConcretePrism),
}

/// `get = π₂ ∘ u`, `put(x, y) = w(π₁ u(x), y)`.
pub fn lens_concretize(o: &SetOptic) -> Result<ConcreteLens> {
    if o.action != SetAction::Product {
        return Err(Error::Mismatch(
            "lens normal form needs the product action".into(),
        ));
    }
    let e = &o.endpoints;
    let get = Func::try_tabulate(&e.s, |x| Ok(o.forward.apply(x)?.as_pair()?.1.clone()))?;
    let put = Func::try_tabulate(&e.s.product(&e.b), |xy| {
        let (x, y) = xy.as_pair()?;
        let m = o.forward.apply(x)?.as_pair()?.0;
        Ok(o.backward.apply(&Atom::pair(m.clone(), y.clone()))?.clone())
    })?;
    ConcreteLens::new(e.clone(), get, put)
}

/// Residual `s`, forward `x ↦ (x, get x)`, backward `put`.
pub fn lens_abstract(l: &ConcreteLens) -> Result<SetOptic> {
    let e = &l.endpoints;
    let forward = Func::try_tabulate(&e.s, |x| Ok(Atom::pair(x.clone(), l.get.apply(x)?.clone())))?;
    SetOptic::new(
        SetAction::Product,
        e.clone(),
        e.s.clone(),
        forward,
        l.put.clone(),
    )
}

/// `match(x) = inl(w(inl m))` when `u(x) = inl m`, else `u(x)`;
/// `build(y) = w(inr y)`.
pub fn prism_concretize(o: &SetOptic) -> Result<ConcretePrism> {
    if o.action != SetAction::Coproduct {
        return Err(Error::Mismatch(
            "prism normal form needs the coproduct action".into(),
        ));
    }
    let e = &o.endpoints;
    let matcher = Func::try_tabulate(&e.s, |x| {
        let u = o.forward.apply(x)?;
        Ok(match u.as_sum()? {
            Either::Left(_) => Atom::inl(o.backward.apply(u)?.clone()),
            Either::Right(_) => u.clone(),
        })
    })?;
    let build = Func::try_tabulate(&e.b, |y| {
        Ok(o.backward.apply(&Atom::inr(y.clone()))?.clone())
    })?;
    ConcretePrism::new(e.clone(), matcher, build)
}

/// Residual `t`, forward `match`, backward `[id, build]`.
pub fn prism_abstract(p: &ConcretePrism) -> Result<SetOptic> {
    let e = &p.endpoints;
    let backward = Func::try_tabulate(&e.t.sum(&e.b), |x| {
        Ok(match x.as_sum()? {
            Either::Left(t) => t.clone(),
            Either::Right(y) => p.build.apply(y)?.clone(),
        })
    })?;
    SetOptic::new(
        SetAction::Coproduct,
        e.clone(),
        e.t.clone(),
        p.matcher.clone(),
        backward,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{quotient_partition, zigzag_classes};

    fn regular(m: FinMonoidalCategory) -> OpticSetting {
        let m = Arc::new(m);
        let act = m.regular_action().unwrap();
        OpticSetting::new(act.clone(), act).unwrap()
    }

    fn settings() -> Vec<OpticSetting> {
        let z2 = FinSet::range(2);
        let xor = |x: &Atom, y: &Atom| if x == y { Atom::from(0) } else { Atom::from(1) };
        let mul = |x: &Atom, y: &Atom| x.min(y).clone();
        vec![
            regular(FinMonoidalCategory::trivial()),
            regular(FinMonoidalCategory::xor(false)),
            regular(FinMonoidalCategory::xor(true)),
            regular(FinMonoidalCategory::walking_arrow_max()),
            regular(FinMonoidalCategory::commutative_monoid(&z2, &Atom::from(0), xor).unwrap()),
            regular(FinMonoidalCategory::commutative_monoid(&z2, &Atom::from(1), mul).unwrap()),
        ]
    }

    #[test]
    fn bundled_monoidal_categories_are_valid() {
        for s in settings() {
            assert!(s.monoidal().validate().is_empty());
            assert!(s.left().validate().is_empty());
        }
    }

    #[test]
    fn non_commutative_tensor_on_a_monoid_is_rejected() {
        // ({0,1,2}, x·y = y unless y = 0) is a monoid with unit 0 but not commutative,
        // so multiplication is not a functor M × M → M.
        let els = FinSet::range(3);
        let mul = |x: &Atom, y: &Atom| {
            if *y == Atom::from(0) {
                x.clone()
            } else {
                y.clone()
            }
        };
        assert!(FinMonoidalCategory::commutative_monoid(&els, &Atom::from(0), mul).is_err());
    }

    #[test]
    fn exact_classes_match_the_oracle() {
        for s in settings() {
            for e in s.all_endpoints() {
                let space = s.space(&e).unwrap();
                assert_eq!(
                    quotient_partition(&space.quotient),
                    zigzag_classes(&space.integrand).unwrap()
                );
            }
        }
    }

    #[test]
    fn trivial_residual_gives_the_plain_product() {
        let m = Arc::new(FinMonoidalCategory::trivial());
        let c = Arc::new(FinCategory::walking_arrow());
        let act = m.trivial_action(c.clone()).unwrap();
        let s = OpticSetting::new(act.clone(), act).unwrap();
        for e in s.all_endpoints() {
            let n = s.optic_coend(&e).unwrap().len();
            assert_eq!(n, c.hom(&e.s, &e.a).len() * c.hom(&e.b, &e.t).len());
        }
    }

    #[test]
    fn discrete_residuals_do_not_glue() {
        let s = regular(FinMonoidalCategory::xor(false));
        for e in s.all_endpoints() {
            let q = s.optic_coend(&e).unwrap();
            assert!(q.classes().values().all(|v| v.len() == 1));
        }
    }

    #[test]
    fn unit_and_associativity_up_to_class() {
        for s in settings() {
            let ends = s.all_endpoints();
            let spaces: BTreeMap<Endpoints, OpticSpace> = ends
                .iter()
                .map(|e| (e.clone(), s.space(e).unwrap()))
                .collect();
            for e in &ends {
                let sp = &spaces[e];
                for o in sp.optics() {
                    let cls = sp.class_of(&o).unwrap();
                    let left = s.compose(&s.identity(&e.a, &e.b).unwrap(), &o).unwrap();
                    let right = s.compose(&o, &s.identity(&e.s, &e.t).unwrap()).unwrap();
                    assert_eq!(sp.class_of(&left).unwrap(), cls);
                    assert_eq!(sp.class_of(&right).unwrap(), cls);
                }
            }
        }
    }

    #[test]
    fn associativity_up_to_class() {
        for s in settings() {
            let pairs: Vec<(Atom, Atom)> = s
                .left()
                .on()
                .objects()
                .iter()
                .flat_map(|c| {
                    s.right()
                        .on()
                        .objects()
                        .iter()
                        .map(move |d| (c.clone(), d.clone()))
                })
                .collect();
            let ends = |x: &(Atom, Atom), y: &(Atom, Atom)| Endpoints {
                a: x.0.clone(),
                b: x.1.clone(),
                s: y.0.clone(),
                t: y.1.clone(),
            };
            for p0 in &pairs {
                for p1 in &pairs {
                    for p2 in &pairs {
                        let p3 = p0;
                        let hops = [ends(p0, p1), ends(p1, p2), ends(p2, p3)];
                        let spaces: Vec<OpticSpace> =
                            hops.iter().map(|e| s.space(e).unwrap()).collect();
                        let whole = s.space(&ends(p0, p3)).unwrap();
                        for o1 in spaces[0].optics().into_iter().take(3) {
                            for o2 in spaces[1].optics().into_iter().take(3) {
                                for o3 in spaces[2].optics().into_iter().take(3) {
                                    let l = s.compose(&s.compose(&o1, &o2).unwrap(), &o3).unwrap();
                                    let r = s.compose(&o1, &s.compose(&o2, &o3).unwrap()).unwrap();
                                    assert_eq!(
                                        whole.class_of(&l).unwrap(),
                                        whole.class_of(&r).unwrap()
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn ends(s: usize, a: usize, b: usize, t: usize) -> SetEndpoints {
        SetEndpoints {
            a: FinSet::range(a),
            b: FinSet::range(b),
            s: FinSet::range(s),
            t: FinSet::range(t),
        }
    }

    #[test]
    fn projection_lens() {
        // s = a × c₀ with c₀ = {0, 1}, a = {0, 1, 2}; residual c₀.
        let a = FinSet::range(3);
        let c0 = FinSet::range(2);
        let s = c0.product(&a);
        let e = SetEndpoints {
            a: a.clone(),
            b: a.clone(),
            s: s.clone(),
            t: s.clone(),
        };
        let o = SetOptic::new(
            SetAction::Product,
            e,
            c0.clone(),
            Func::identity(&s),
            Func::identity(&s),
        )
        .unwrap();
        let l = lens_concretize(&o).unwrap();
        for x in &s {
            let (_, y) = x.as_pair().unwrap();
            assert_eq!(l.get.apply(x).unwrap(), y);
        }
        let back = lens_concretize(&lens_abstract(&l).unwrap()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn unit_residual_gives_the_same_lens() {
        let e = ends(2, 2, 2, 2);
        let get = Func::from_pairs([
            (Atom::from(0), Atom::from(1)),
            (Atom::from(1), Atom::from(1)),
        ]);
        let put = Func::tabulate(&e.s.product(&e.b), |xy| xy.as_pair().unwrap().1.clone());
        let l = ConcreteLens::new(e.clone(), get, put).unwrap();
        let o = lens_abstract(&l).unwrap();
        // Residual s × 1 instead of s.
        let r = e.s.product(&FinSet::singleton(Atom::unit()));
        let forward = Func::tabulate(&e.s, |x| {
            Atom::pair(
                Atom::pair(x.clone(), Atom::unit()),
                o.forward.apply(x).unwrap().as_pair().unwrap().1.clone(),
            )
        });
        let backward = Func::tabulate(&r.product(&e.b), |x| {
            let (m, y) = x.as_pair().unwrap();
            l.put(m.as_pair().unwrap().0, y).unwrap().clone()
        });
        let o2 = SetOptic::new(SetAction::Product, e, r, forward, backward).unwrap();
        assert!(o.equivalent(&o2).unwrap());
    }

    #[test]
    fn prism_round_trip_and_laws() {
        // s = a + c₀: match the right summand, build into it.
        let a = FinSet::range(2);
        let c0 = FinSet::range(1);
        let s = c0.sum(&a);
        let e = SetEndpoints {
            a: a.clone(),
            b: a.clone(),
            s: s.clone(),
            t: s.clone(),
        };
        let matcher = Func::tabulate(&s, |x| match x.as_sum().unwrap() {
            Either::Left(_) => Atom::inl(x.clone()),
            Either::Right(y) => Atom::inr(y.clone()),
        });
        let build = Func::tabulate(&a, |y| Atom::inr(y.clone()));
        let p = ConcretePrism::new(e, matcher, build).unwrap();
        let o = prism_abstract(&p).unwrap();
        assert_eq!(prism_concretize(&o).unwrap(), p);
        for y in &a {
            let built = p.build.apply(y).unwrap();
            assert_eq!(p.matcher.apply(built).unwrap(), &Atom::inr(y.clone()));
        }
    }

    #[test]
    fn set_optic_identities() {
        for act in [SetAction::Product, SetAction::Coproduct] {
            let id = SetOptic::identity(act, &FinSet::range(2), &FinSet::range(3));
            let o = id.compose(&id).unwrap();
            assert!(o.equivalent(&id).unwrap());
        }
        let l = lens_concretize(&SetOptic::identity(
            SetAction::Product,
            &FinSet::range(2),
            &FinSet::range(2),
        ))
        .unwrap();
        assert!(l.get.is_identity_on(&FinSet::range(2)));
        for (xy, v) in l.put.iter() {
            assert_eq!(xy.as_pair().unwrap().1, v);
        }
    }

    #[test]
    fn slide_preserves_normal_form() {
        let e = ends(2, 2, 2, 2);
        let m = FinSet::range(2);
        let m2 = FinSet::range(3);
        let forward = Func::tabulate(&e.s, |x| Atom::pair(x.clone(), x.clone()));
        let o = SetOptic::new(
            SetAction::Product,
            e.clone(),
            m.clone(),
            forward,
            Func::tabulate(&m.product(&e.b), |x| x.as_pair().unwrap().1.clone()),
        )
        .unwrap();
        for h in m.functions_to(&m2) {
            for g in m2.product(&e.b).functions_to(&e.t).into_iter().step_by(37) {
                let (orig, moved) = o.slide(&m2, &h, &g).unwrap();
                assert!(orig.equivalent(&moved).unwrap());
            }
        }
    }
}

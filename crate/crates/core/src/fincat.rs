//! Explicit finite categories, functors, co-presheaves and natural
//! transformations.
//!
//! Everything is materialized: hom-sets are computed once when a category is
//! built, and co-presheaves store their action on every morphism as a
//! function table. Constructors check structure (every id refers to
//! something that exists, every table is total); the category axioms and
//! functoriality are checked separately by the `validate` methods so that
//! unlawful input can be reported instead of rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::atom::{Atom, FinSet, Func};
use crate::error::{Error, Result};
use crate::witness::{IsoWitness, NaturalIso};

#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<Atom>,
    morphisms: BTreeMap<Atom, (Atom, Atom)>,
    identities: BTreeMap<Atom, Atom>,
    compose: BTreeMap<(Atom, Atom), Atom>,
    hom: BTreeMap<(Atom, Atom), Vec<Atom>>,
}

/// One violated instance of a category axiom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    MissingIdentity { object: Atom },
    IdentityEndpoints { object: Atom, morphism: Atom },
    MissingComposite { g: Atom, f: Atom },
    CompositeEndpoints { g: Atom, f: Atom, gf: Atom },
    ComposedNonComposable { g: Atom, f: Atom },
    LeftUnit { f: Atom },
    RightUnit { f: Atom },
    Associativity { h: Atom, g: Atom, f: Atom },
}

impl fmt::Display for Violation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingIdentity { object } => write!(fm, "no identity for object {object}"),
            Violation::IdentityEndpoints { object, morphism } => {
                write!(
                    fm,
                    "identity {morphism} of {object} is not an endomorphism of {object}"
                )
            }
            Violation::MissingComposite { g, f } => write!(fm, "composite {g}∘{f} undefined"),
            Violation::CompositeEndpoints { g, f, gf } => {
                write!(fm, "composite {g}∘{f} = {gf} has wrong endpoints")
            }
            Violation::ComposedNonComposable { g, f } => {
                write!(fm, "composite {g}∘{f} given for a non-composable pair")
            }
            Violation::LeftUnit { f } => write!(fm, "id∘{f} ≠ {f}"),
            Violation::RightUnit { f } => write!(fm, "{f}∘id ≠ {f}"),
            Violation::Associativity { h, g, f } => {
                write!(fm, "associativity fails on triple (h={h}, g={g}, f={f})")
            }
        }
    }
}

/// Every violated axiom instance, in deterministic order. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FinCategory {
    /// Builds a category from explicit tables.
    ///
    /// Composites involving an identity may be omitted; they are filled in
    /// with the unit law. Everything else is taken as given, so the result
    /// may violate the axioms. Call [`FinCategory::validate`].
    pub fn new(
        objects: impl IntoIterator<Item = Atom>,
        morphisms: impl IntoIterator<Item = (Atom, Atom, Atom)>,
        identities: BTreeMap<Atom, Atom>,
        compose: impl IntoIterator<Item = (Atom, Atom, Atom)>,
    ) -> Result<FinCategory> {
        let objects: Vec<Atom> = FinSet::new(objects)?.as_slice().to_vec();
        let obj_set: BTreeSet<&Atom> = objects.iter().collect();

        let mut mors = BTreeMap::new();
        for (id, src, tgt) in morphisms {
            for o in [&src, &tgt] {
                if !obj_set.contains(o) {
                    return Err(Error::UnknownObject(o.clone()));
                }
            }
            if mors.insert(id.clone(), (src, tgt)).is_some() {
                return Err(Error::Malformed(format!("duplicate morphism id {id}")));
            }
        }
        for (o, m) in &identities {
            if !obj_set.contains(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
            if !mors.contains_key(m) {
                return Err(Error::UnknownMorphism(m.clone()));
            }
        }

        let mut table = BTreeMap::new();
        for (g, f, gf) in compose {
            for m in [&g, &f, &gf] {
                if !mors.contains_key(m) {
                    return Err(Error::UnknownMorphism(m.clone()));
                }
            }
            if let Some(prev) = table.insert((g.clone(), f.clone()), gf.clone()) {
                if prev != gf {
                    return Err(Error::Malformed(format!(
                        "conflicting composites for {g}∘{f}: {prev} and {gf}"
                    )));
                }
            }
        }
        for (f, (src, tgt)) in &mors {
            if let Some(id) = identities.get(tgt) {
                table
                    .entry((id.clone(), f.clone()))
                    .or_insert_with(|| f.clone());
            }
            if let Some(id) = identities.get(src) {
                table
                    .entry((f.clone(), id.clone()))
                    .or_insert_with(|| f.clone());
            }
        }

        let mut hom: BTreeMap<(Atom, Atom), Vec<Atom>> = BTreeMap::new();
        for a in &objects {
            for b in &objects {
                hom.insert((a.clone(), b.clone()), Vec::new());
            }
        }
        for (f, (src, tgt)) in &mors {
            hom.get_mut(&(src.clone(), tgt.clone()))
                .unwrap()
                .push(f.clone());
        }

        Ok(FinCategory {
            objects,
            morphisms: mors,
            identities,
            compose: table,
            hom,
        })
    }

    /// The thin category of a preorder: one morphism `(a,b)` for each pair
    /// `a ≤ b` in the reflexive-transitive closure of `relations`.
    pub fn thin(
        objects: impl IntoIterator<Item = Atom>,
        relations: impl IntoIterator<Item = (Atom, Atom)>,
    ) -> Result<FinCategory> {
        let objects: Vec<Atom> = FinSet::new(objects)?.as_slice().to_vec();
        let mut le: BTreeSet<(Atom, Atom)> =
            objects.iter().map(|a| (a.clone(), a.clone())).collect();
        for (a, b) in relations {
            if !objects.contains(&a) {
                return Err(Error::UnknownObject(a));
            }
            if !objects.contains(&b) {
                return Err(Error::UnknownObject(b));
            }
            le.insert((a, b));
        }
        // Warshall closure.
        for k in &objects {
            for i in &objects {
                if !le.contains(&(i.clone(), k.clone())) {
                    continue;
                }
                for j in &objects {
                    if le.contains(&(k.clone(), j.clone())) {
                        le.insert((i.clone(), j.clone()));
                    }
                }
            }
        }
        let mor = |a: &Atom, b: &Atom| Atom::pair(a.clone(), b.clone());
        let morphisms: Vec<_> = le
            .iter()
            .map(|(a, b)| (mor(a, b), a.clone(), b.clone()))
            .collect();
        let identities = objects.iter().map(|a| (a.clone(), mor(a, a))).collect();
        let mut compose = Vec::new();
        for (a, b) in &le {
            for (b2, c) in &le {
                if b == b2 {
                    compose.push((mor(b, c), mor(a, b), mor(a, c)));
                }
            }
        }
        FinCategory::new(objects, morphisms, identities, compose)
    }

    /// Discrete category: identities only.
    pub fn discrete(objects: impl IntoIterator<Item = Atom>) -> Result<FinCategory> {
        FinCategory::thin(objects, std::iter::empty())
    }

    /// The codiscrete category: exactly one morphism between any two objects.
    pub fn indiscrete(objects: impl IntoIterator<Item = Atom>) -> Result<FinCategory> {
        let objects: Vec<Atom> = objects.into_iter().collect();
        let all: Vec<_> = objects
            .iter()
            .flat_map(|a| objects.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        FinCategory::thin(objects, all)
    }

    /// `0 → 1`.
    pub fn walking_arrow() -> FinCategory {
        FinCategory::thin(
            [Atom::from(0), Atom::from(1)],
            [(Atom::from(0), Atom::from(1))],
        )
        .expect("walking arrow")
    }

    /// `0 ≅ 1`.
    pub fn walking_iso() -> FinCategory {
        FinCategory::indiscrete([Atom::from(0), Atom::from(1)]).expect("walking iso")
    }

    /// One-object category `*` whose morphisms are the elements of a finite
    /// monoid, composed by `mul(g, f)`.
    pub fn monoid(
        elements: &FinSet,
        unit: &Atom,
        mul: impl Fn(&Atom, &Atom) -> Atom,
    ) -> Result<FinCategory> {
        if !elements.contains(unit) {
            return Err(Error::UnknownMorphism(unit.clone()));
        }
        let star = Atom::sym("*");
        let morphisms: Vec<_> = elements
            .iter()
            .map(|m| (m.clone(), star.clone(), star.clone()))
            .collect();
        let mut compose = Vec::new();
        for g in elements {
            for f in elements {
                compose.push((g.clone(), f.clone(), mul(g, f)));
            }
        }
        FinCategory::new(
            [star.clone()],
            morphisms,
            BTreeMap::from([(star, unit.clone())]),
            compose,
        )
    }

    /// Skeleton of finite sets of size `0..=max`: object `n` stands for
    /// `{0,...,n-1}` and a morphism `(m,n,(y_0,...,y_{m-1}))` for the function
    /// `i ↦ y_i`.
    pub fn finset_skeleton(max: usize) -> Result<FinCategory> {
        let objects: Vec<Atom> = (0..=max).map(Atom::from).collect();
        let mut morphisms = Vec::new();
        let mut funcs: BTreeMap<(usize, usize), Vec<Func>> = BTreeMap::new();
        for m in 0..=max {
            for n in 0..=max {
                let fs = FinSet::range(m).functions_to(&FinSet::range(n));
                for f in &fs {
                    morphisms.push((skeleton_morphism(m, n, f), Atom::from(m), Atom::from(n)));
                }
                funcs.insert((m, n), fs);
            }
        }
        let identities = (0..=max)
            .map(|m| {
                (
                    Atom::from(m),
                    skeleton_morphism(m, m, &Func::identity(&FinSet::range(m))),
                )
            })
            .collect();
        let mut compose = Vec::new();
        for l in 0..=max {
            for m in 0..=max {
                for n in 0..=max {
                    for f in &funcs[&(l, m)] {
                        for g in &funcs[&(m, n)] {
                            let gf = g.after(f)?;
                            compose.push((
                                skeleton_morphism(m, n, g),
                                skeleton_morphism(l, m, f),
                                skeleton_morphism(l, n, &gf),
                            ));
                        }
                    }
                }
            }
        }
        FinCategory::new(objects, morphisms, identities, compose)
    }

    pub fn objects(&self) -> &[Atom] {
        &self.objects
    }

    pub fn object_set(&self) -> FinSet {
        self.objects.iter().cloned().collect()
    }

    pub fn has_object(&self, a: &Atom) -> bool {
        self.objects.binary_search(a).is_ok()
    }

    pub fn check_object(&self, a: &Atom) -> Result<()> {
        if self.has_object(a) {
            Ok(())
        } else {
            Err(Error::UnknownObject(a.clone()))
        }
    }

    /// All morphisms with their endpoints, in id order.
    pub fn morphisms(&self) -> impl Iterator<Item = (&Atom, &Atom, &Atom)> {
        self.morphisms.iter().map(|(f, (s, t))| (f, s, t))
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn has_morphism(&self, f: &Atom) -> bool {
        self.morphisms.contains_key(f)
    }

    pub fn endpoints(&self, f: &Atom) -> Result<(&Atom, &Atom)> {
        self.morphisms
            .get(f)
            .map(|(s, t)| (s, t))
            .ok_or_else(|| Error::UnknownMorphism(f.clone()))
    }

    pub fn src(&self, f: &Atom) -> Result<&Atom> {
        Ok(self.endpoints(f)?.0)
    }

    pub fn tgt(&self, f: &Atom) -> Result<&Atom> {
        Ok(self.endpoints(f)?.1)
    }

    pub fn id(&self, a: &Atom) -> Result<&Atom> {
        self.identities
            .get(a)
            .ok_or_else(|| Error::UnknownObject(a.clone()))
    }

    pub fn identities(&self) -> &BTreeMap<Atom, Atom> {
        &self.identities
    }

    pub fn is_identity(&self, f: &Atom) -> bool {
        match self.morphisms.get(f) {
            Some((s, _)) => self.identities.get(s) == Some(f),
            None => false,
        }
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Atom, f: &Atom) -> Result<&Atom> {
        self.compose
            .get(&(g.clone(), f.clone()))
            .ok_or_else(|| Error::NotComposable(g.clone(), f.clone()))
    }

    /// Raw composition table, keyed `(g, f)`.
    pub fn compose_table(&self) -> &BTreeMap<(Atom, Atom), Atom> {
        &self.compose
    }

    pub fn hom(&self, a: &Atom, b: &Atom) -> &[Atom] {
        self.hom
            .get(&(a.clone(), b.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn hom_set(&self, a: &Atom, b: &Atom) -> FinSet {
        self.hom(a, b).iter().cloned().collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms.keys().all(|f| self.is_identity(f))
    }

    /// Finds the inverse of `f`, if any.
    pub fn inverse(&self, f: &Atom) -> Result<Option<Atom>> {
        let (s, t) = self.endpoints(f)?;
        for g in self.hom(t, s) {
            if self.compose(g, f)? == self.id(s)? && self.compose(f, g)? == self.id(t)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for a in &self.objects {
            match self.identities.get(a) {
                None => violations.push(Violation::MissingIdentity { object: a.clone() }),
                Some(m) => {
                    if self.morphisms.get(m) != Some(&(a.clone(), a.clone())) {
                        violations.push(Violation::IdentityEndpoints {
                            object: a.clone(),
                            morphism: m.clone(),
                        });
                    }
                }
            }
        }
        for ((g, f), gf) in &self.compose {
            let (fs, ft) = &self.morphisms[f];
            let (gs, gt) = &self.morphisms[g];
            if ft != gs {
                violations.push(Violation::ComposedNonComposable {
                    g: g.clone(),
                    f: f.clone(),
                });
            } else if self.morphisms[gf] != (fs.clone(), gt.clone()) {
                violations.push(Violation::CompositeEndpoints {
                    g: g.clone(),
                    f: f.clone(),
                    gf: gf.clone(),
                });
            }
        }
        for (f, (fs, ft)) in &self.morphisms {
            for g in self.hom_from(ft) {
                if !self.compose.contains_key(&(g.clone(), f.clone())) {
                    violations.push(Violation::MissingComposite {
                        g: g.clone(),
                        f: f.clone(),
                    });
                }
            }
            if let Some(id) = self.identities.get(ft) {
                if self.compose.get(&(id.clone(), f.clone())) != Some(f) {
                    violations.push(Violation::LeftUnit { f: f.clone() });
                }
            }
            if let Some(id) = self.identities.get(fs) {
                if self.compose.get(&(f.clone(), id.clone())) != Some(f) {
                    violations.push(Violation::RightUnit { f: f.clone() });
                }
            }
        }
        for (f, (_, ft)) in &self.morphisms {
            for g in self.hom_from(ft) {
                let gt = &self.morphisms[g].1;
                for h in self.hom_from(gt) {
                    let lhs = self
                        .compose
                        .get(&(g.clone(), f.clone()))
                        .and_then(|gf| self.compose.get(&(h.clone(), gf.clone())));
                    let rhs = self
                        .compose
                        .get(&(h.clone(), g.clone()))
                        .and_then(|hg| self.compose.get(&(hg.clone(), f.clone())));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            violations.push(Violation::Associativity {
                                h: h.clone(),
                                g: g.clone(),
                                f: f.clone(),
                            });
                        }
                    }
                }
            }
        }
        violations.sort();
        violations.dedup();
        ValidationReport { violations }
    }

    fn hom_from<'a>(&'a self, a: &'a Atom) -> impl Iterator<Item = &'a Atom> + 'a {
        self.objects.iter().flat_map(move |b| self.hom(a, b).iter())
    }

    /// Same objects and morphism ids; endpoints swapped and composition
    /// flipped.
    pub fn opposite(&self) -> FinCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|(f, (s, t))| (f.clone(), (t.clone(), s.clone())))
            .collect::<BTreeMap<_, _>>();
        let compose = self
            .compose
            .iter()
            .map(|((g, f), gf)| ((f.clone(), g.clone()), gf.clone()))
            .collect();
        let hom = self
            .hom
            .iter()
            .map(|((a, b), fs)| ((b.clone(), a.clone()), fs.clone()))
            .collect();
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            compose,
            hom,
        }
    }

    /// Objects `(c,d)`, morphisms `(f,g)`, composition componentwise.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let objects: Vec<Atom> = self
            .objects
            .iter()
            .flat_map(|a| {
                other
                    .objects
                    .iter()
                    .map(move |b| Atom::pair(a.clone(), b.clone()))
            })
            .collect();
        let mut morphisms = BTreeMap::new();
        for (f, (fs, ft)) in &self.morphisms {
            for (g, (gs, gt)) in &other.morphisms {
                morphisms.insert(
                    Atom::pair(f.clone(), g.clone()),
                    (
                        Atom::pair(fs.clone(), gs.clone()),
                        Atom::pair(ft.clone(), gt.clone()),
                    ),
                );
            }
        }
        let mut identities = BTreeMap::new();
        for (a, ia) in &self.identities {
            for (b, ib) in &other.identities {
                identities.insert(
                    Atom::pair(a.clone(), b.clone()),
                    Atom::pair(ia.clone(), ib.clone()),
                );
            }
        }
        let mut compose = BTreeMap::new();
        for ((g1, f1), c1) in &self.compose {
            for ((g2, f2), c2) in &other.compose {
                compose.insert(
                    (
                        Atom::pair(g1.clone(), g2.clone()),
                        Atom::pair(f1.clone(), f2.clone()),
                    ),
                    Atom::pair(c1.clone(), c2.clone()),
                );
            }
        }
        let mut hom = BTreeMap::new();
        for ((a1, b1), fs) in &self.hom {
            for ((a2, b2), gs) in &other.hom {
                let mors = fs
                    .iter()
                    .flat_map(|f| gs.iter().map(move |g| Atom::pair(f.clone(), g.clone())))
                    .collect();
                hom.insert(
                    (
                        Atom::pair(a1.clone(), a2.clone()),
                        Atom::pair(b1.clone(), b2.clone()),
                    ),
                    mors,
                );
            }
        }
        FinCategory {
            objects,
            morphisms,
            identities,
            compose,
            hom,
        }
    }
}

fn skeleton_morphism(m: usize, n: usize, f: &Func) -> Atom {
    let images = (0..m).map(|i| f.get(&Atom::from(i)).cloned().expect("total"));
    Atom::triple(Atom::from(m), Atom::from(n), Atom::Tuple(images.collect()))
}

/// Decodes a morphism of [`FinCategory::finset_skeleton`] into its function.
pub fn skeleton_function(f: &Atom) -> Result<Func> {
    let (m, _, images) = f.as_triple()?;
    let m: usize = m
        .to_string()
        .parse()
        .map_err(|_| Error::Malformed(format!("not a skeleton morphism: {f}")))?;
    Func::decode(&FinSet::range(m), images)
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms)
            .finish()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: BTreeMap<Atom, Atom>,
    mor_map: BTreeMap<Atom, Atom>,
}

impl FinFunctor {
    /// Identity morphisms missing from `mor_map` are sent to the identity of
    /// the image object.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: BTreeMap<Atom, Atom>,
        mut mor_map: BTreeMap<Atom, Atom>,
    ) -> Result<FinFunctor> {
        for a in source.objects() {
            let b = obj_map
                .get(a)
                .ok_or_else(|| Error::UnknownObject(a.clone()))?;
            target.check_object(b)?;
            if let Ok(ia) = source.id(a) {
                if !mor_map.contains_key(ia) {
                    mor_map.insert(ia.clone(), target.id(b)?.clone());
                }
            }
        }
        if obj_map.len() != source.objects().len() {
            return Err(Error::Malformed(
                "object map mentions unknown objects".into(),
            ));
        }
        for (f, _, _) in source.morphisms() {
            let g = mor_map
                .get(f)
                .ok_or_else(|| Error::UnknownMorphism(f.clone()))?;
            if !target.has_morphism(g) {
                return Err(Error::UnknownMorphism(g.clone()));
            }
        }
        if mor_map.len() != source.morphism_count() {
            return Err(Error::Malformed(
                "morphism map mentions unknown morphisms".into(),
            ));
        }
        Ok(FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn identity(cat: Arc<FinCategory>) -> FinFunctor {
        let obj_map = cat
            .objects()
            .iter()
            .map(|a| (a.clone(), a.clone()))
            .collect();
        let mor_map = cat
            .morphisms()
            .map(|(f, _, _)| (f.clone(), f.clone()))
            .collect();
        FinFunctor {
            source: cat.clone(),
            target: cat,
            obj_map,
            mor_map,
        }
    }

    /// Builds a functor from closures evaluated on every object and morphism.
    pub fn tabulate(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        on_obj: impl Fn(&Atom) -> Atom,
        on_mor: impl Fn(&Atom) -> Atom,
    ) -> Result<FinFunctor> {
        let obj_map = source
            .objects()
            .iter()
            .map(|a| (a.clone(), on_obj(a)))
            .collect();
        let mor_map = source
            .morphisms()
            .map(|(f, _, _)| (f.clone(), on_mor(f)))
            .collect();
        FinFunctor::new(source, target, obj_map, mor_map)
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn on_obj(&self, a: &Atom) -> Result<&Atom> {
        self.obj_map
            .get(a)
            .ok_or_else(|| Error::UnknownObject(a.clone()))
    }

    pub fn on_mor(&self, f: &Atom) -> Result<&Atom> {
        self.mor_map
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism(f.clone()))
    }

    pub fn obj_map(&self) -> &BTreeMap<Atom, Atom> {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &BTreeMap<Atom, Atom> {
        &self.mor_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FinFunctor) -> Result<FinFunctor> {
        if *self.target != *next.source {
            return Err(Error::Mismatch("functors are not composable".into()));
        }
        let obj_map = self
            .obj_map
            .iter()
            .map(|(a, b)| Ok((a.clone(), next.on_obj(b)?.clone())))
            .collect::<Result<_>>()?;
        let mor_map = self
            .mor_map
            .iter()
            .map(|(f, g)| Ok((f.clone(), next.on_mor(g)?.clone())))
            .collect::<Result<_>>()?;
        Ok(FinFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            obj_map,
            mor_map,
        })
    }

    /// Lists every failure of functoriality: endpoints, identities and
    /// composites are all checked exhaustively.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (f, s, t) in self.source.morphisms() {
            let g = &self.mor_map[f];
            let expected = (&self.obj_map[s], &self.obj_map[t]);
            match self.target.endpoints(g) {
                Ok(ends) if ends == expected => {}
                _ => problems.push(format!("image of {f} has wrong endpoints")),
            }
        }
        for (a, ia) in self.source.identities() {
            if self.target.id(&self.obj_map[a]).ok() != Some(&self.mor_map[ia]) {
                problems.push(format!("identity of {a} not preserved"));
            }
        }
        for ((g, f), gf) in self.source.compose_table() {
            let lhs = &self.mor_map[gf];
            match self.target.compose(&self.mor_map[g], &self.mor_map[f]) {
                Ok(rhs) if rhs == lhs => {}
                _ => problems.push(format!("composite {g}∘{f} not preserved")),
            }
        }
        problems
    }
}

/// A functor `base -> Set` given by fibers and action tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoPresheaf {
    base: Arc<FinCategory>,
    fibers: BTreeMap<Atom, FinSet>,
    action: BTreeMap<Atom, Func>,
}

impl CoPresheaf {
    /// Identity actions may be omitted. Every other action must be a total
    /// function between the right fibers.
    pub fn new(
        base: Arc<FinCategory>,
        fibers: BTreeMap<Atom, FinSet>,
        mut action: BTreeMap<Atom, Func>,
    ) -> Result<CoPresheaf> {
        for a in base.objects() {
            let fiber = fibers
                .get(a)
                .ok_or_else(|| Error::UnknownObject(a.clone()))?;
            if let Ok(ia) = base.id(a) {
                action
                    .entry(ia.clone())
                    .or_insert_with(|| Func::identity(fiber));
            }
        }
        if fibers.len() != base.objects().len() {
            return Err(Error::Malformed("fibers given for unknown objects".into()));
        }
        for (f, s, t) in base.morphisms() {
            let table = action
                .get(f)
                .ok_or_else(|| Error::UnknownMorphism(f.clone()))?;
            if !table.is_total_on(&fibers[s], &fibers[t]) {
                return Err(Error::Malformed(format!(
                    "action of {f} is not a function {} -> {}",
                    fibers[s], fibers[t]
                )));
            }
        }
        if action.len() != base.morphism_count() {
            return Err(Error::Malformed(
                "actions given for unknown morphisms".into(),
            ));
        }
        Ok(CoPresheaf {
            base,
            fibers,
            action,
        })
    }

    pub fn tabulate(
        base: Arc<FinCategory>,
        mut fiber: impl FnMut(&Atom) -> Result<FinSet>,
        mut act: impl FnMut(&Atom, &Atom) -> Result<Atom>,
    ) -> Result<CoPresheaf> {
        let mut fibers = BTreeMap::new();
        for a in base.objects() {
            fibers.insert(a.clone(), fiber(a)?);
        }
        let mut action = BTreeMap::new();
        for (f, s, _) in base.morphisms() {
            action.insert(f.clone(), Func::try_tabulate(&fibers[s], |x| act(f, x))?);
        }
        CoPresheaf::new(base, fibers, action)
    }

    /// The representable `base(a, -)`, acting by post-composition.
    pub fn yoneda(base: Arc<FinCategory>, a: &Atom) -> Result<CoPresheaf> {
        base.check_object(a)?;
        let cat = base.clone();
        CoPresheaf::tabulate(
            base,
            |c| Ok(cat.hom_set(a, c)),
            |f, u| cat.compose(f, u).cloned(),
        )
    }

    pub fn constant(base: Arc<FinCategory>, set: &FinSet) -> Result<CoPresheaf> {
        CoPresheaf::tabulate(base, |_| Ok(set.clone()), |_, x| Ok(x.clone()))
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn fiber(&self, a: &Atom) -> Result<&FinSet> {
        self.fibers
            .get(a)
            .ok_or_else(|| Error::UnknownObject(a.clone()))
    }

    pub fn fibers(&self) -> &BTreeMap<Atom, FinSet> {
        &self.fibers
    }

    pub fn action(&self, f: &Atom) -> Result<&Func> {
        self.action
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism(f.clone()))
    }

    pub fn actions(&self) -> &BTreeMap<Atom, Func> {
        &self.action
    }

    pub fn act(&self, f: &Atom, x: &Atom) -> Result<&Atom> {
        self.action(f)?.apply(x)
    }

    pub fn total_size(&self) -> usize {
        self.fibers.values().map(FinSet::len).sum()
    }

    /// Functoriality failures: identities acting non-trivially and
    /// composites acting differently from the composed actions.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (a, ia) in self.base.identities() {
            if !self.action[ia].is_identity_on(&self.fibers[a]) {
                problems.push(format!("identity of {a} acts non-trivially"));
            }
        }
        for ((g, f), gf) in self.base.compose_table() {
            match self.action[g].after(&self.action[f]) {
                Ok(composed) if composed == self.action[gf] => {}
                _ => problems.push(format!("action of {g}∘{f} differs from composed actions")),
            }
        }
        problems
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NatTransformation {
    source: CoPresheaf,
    target: CoPresheaf,
    components: BTreeMap<Atom, Func>,
}

impl NatTransformation {
    /// Checks bases, totality and every naturality square.
    pub fn new(
        source: CoPresheaf,
        target: CoPresheaf,
        components: BTreeMap<Atom, Func>,
    ) -> Result<NatTransformation> {
        let nat = NatTransformation::unchecked(source, target, components)?;
        let problems = nat.naturality_failures();
        if !problems.is_empty() {
            return Err(Error::Invalid(problems.join("; ")));
        }
        Ok(nat)
    }

    /// Checks bases and totality only.
    pub fn unchecked(
        source: CoPresheaf,
        target: CoPresheaf,
        components: BTreeMap<Atom, Func>,
    ) -> Result<NatTransformation> {
        if *source.base != *target.base {
            return Err(Error::Mismatch(
                "natural transformation between different bases".into(),
            ));
        }
        for a in source.base.objects() {
            let c = components
                .get(a)
                .ok_or_else(|| Error::UnknownObject(a.clone()))?;
            if !c.is_total_on(source.fiber(a)?, target.fiber(a)?) {
                return Err(Error::Malformed(format!("component at {a} is not total")));
            }
        }
        if components.len() != source.base.objects().len() {
            return Err(Error::Malformed(
                "components given for unknown objects".into(),
            ));
        }
        Ok(NatTransformation {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: &CoPresheaf) -> NatTransformation {
        let components = f
            .fibers
            .iter()
            .map(|(a, s)| (a.clone(), Func::identity(s)))
            .collect();
        NatTransformation {
            source: f.clone(),
            target: f.clone(),
            components,
        }
    }

    pub fn source(&self) -> &CoPresheaf {
        &self.source
    }

    pub fn target(&self) -> &CoPresheaf {
        &self.target
    }

    pub fn component(&self, a: &Atom) -> Result<&Func> {
        self.components
            .get(a)
            .ok_or_else(|| Error::UnknownObject(a.clone()))
    }

    pub fn components(&self) -> &BTreeMap<Atom, Func> {
        &self.components
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &NatTransformation) -> Result<NatTransformation> {
        if self.target != next.source {
            return Err(Error::Mismatch(
                "natural transformations are not composable".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .map(|(a, f)| Ok((a.clone(), next.components[a].after(f)?)))
            .collect::<Result<_>>()?;
        Ok(NatTransformation {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        })
    }

    pub fn naturality_failures(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (f, s, t) in self.source.base.morphisms() {
            for x in self.source.fiber(s).into_iter().flatten() {
                let via_source = self
                    .source
                    .act(f, x)
                    .and_then(|y| self.components[t].apply(y));
                let via_target = self.components[s]
                    .apply(x)
                    .and_then(|y| self.target.act(f, y));
                match (via_source, via_target) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => problems.push(format!("naturality square for {f} fails at {x}")),
                }
            }
        }
        problems
    }
}

/// Verifies that a family of component bijections is natural between two
/// co-presheaves.
pub fn check_natural_iso(iso: &NaturalIso, source: &CoPresheaf, target: &CoPresheaf) -> Result<()> {
    if *source.base != *target.base {
        return Err(Error::Mismatch(
            "natural isomorphism between different bases".into(),
        ));
    }
    for a in source.base.objects() {
        let w = iso.component(a)?;
        if w.domain() != source.fiber(a)? || w.codomain() != target.fiber(a)? {
            return Err(Error::Witness(format!(
                "component at {a} has the wrong endpoints"
            )));
        }
    }
    for (f, s, t) in source.base.morphisms() {
        for x in source.fiber(s)? {
            let l = iso.component(t)?.forward().apply(source.act(f, x)?)?;
            let r = target.act(f, iso.component(s)?.forward().apply(x)?)?;
            if l != r {
                return Err(Error::Witness(format!(
                    "isomorphism not natural at {f}, element {x}"
                )));
            }
        }
    }
    Ok(())
}

/// Builds a natural isomorphism from component tables and verifies it.
pub fn natural_iso(
    source: &CoPresheaf,
    target: &CoPresheaf,
    mut forward: impl FnMut(&Atom, &Atom) -> Result<Atom>,
    mut backward: impl FnMut(&Atom, &Atom) -> Result<Atom>,
) -> Result<NaturalIso> {
    let mut components = BTreeMap::new();
    for a in source.base.objects() {
        let dom = source.fiber(a)?;
        let cod = target.fiber(a)?;
        let fwd = Func::try_tabulate(dom, |x| forward(a, x))?;
        let bwd = Func::try_tabulate(cod, |y| backward(a, y))?;
        components.insert(
            a.clone(),
            IsoWitness::new(dom.clone(), cod.clone(), fwd, bwd)?,
        );
    }
    let iso = NaturalIso::new(components);
    check_natural_iso(&iso, source, target)?;
    Ok(iso)
}

/// All natural transformations `f ⇒ g`, found by backtracking over element
/// assignments and pruning on naturality squares. Canonical order:
/// lexicographic in the assignment sequence (objects in id order, elements
/// in atom order, candidate values in atom order).
pub fn enumerate_nats(f: &CoPresheaf, g: &CoPresheaf) -> Result<Vec<NatTransformation>> {
    if *f.base != *g.base {
        return Err(Error::Mismatch("enumerate_nats needs a shared base".into()));
    }
    let base = &f.base;
    let objects = base.objects();

    // Variables: (object, element of f at object), numbered consecutively.
    let mut offset: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut var_obj: Vec<usize> = Vec::new();
    for (oi, a) in objects.iter().enumerate() {
        offset.insert(a, var_obj.len());
        var_obj.extend(std::iter::repeat_n(oi, f.fiber(a)?.len()));
    }
    let domain_len: Vec<usize> = objects
        .iter()
        .map(|a| Ok(g.fiber(a)?.len()))
        .collect::<Result<_>>()?;

    // g's action on fiber indices, one table per non-identity morphism.
    let mut g_act: Vec<Vec<usize>> = Vec::new();
    struct Constraint {
        other: usize,
        other_is_source: bool,
        mor: usize,
    }
    let mut constraints: Vec<Vec<Constraint>> = (0..var_obj.len()).map(|_| Vec::new()).collect();
    for (m, s, t) in base.morphisms() {
        if base.is_identity(m) {
            continue;
        }
        let (gs, gt) = (g.fiber(s)?, g.fiber(t)?);
        let table = gs
            .iter()
            .map(|y| {
                let z = g.act(m, y)?;
                gt.index_of(z)
                    .ok_or_else(|| Error::Malformed(format!("{m} sends {y} outside g({t})")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mi = g_act.len();
        g_act.push(table);
        let (fs, ft) = (f.fiber(s)?, f.fiber(t)?);
        for (ix, x) in fs.iter().enumerate() {
            let from = offset[s] + ix;
            let fx = f.act(m, x)?;
            let to = offset[t]
                + ft.index_of(fx)
                    .ok_or_else(|| Error::Malformed(format!("{m} sends {x} outside f({t})")))?;
            let later = from.max(to);
            let other = if from == to { later } else { from.min(to) };
            constraints[later].push(Constraint {
                other,
                other_is_source: other == from,
                mor: mi,
            });
        }
    }

    struct Search<'a> {
        var_obj: &'a [usize],
        domain_len: &'a [usize],
        g_act: &'a [Vec<usize>],
        constraints: &'a [Vec<Constraint>],
        assignment: Vec<usize>,
        found: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn consistent(&self, i: usize) -> bool {
            let me = self.assignment[i];
            self.constraints[i].iter().all(|c| {
                let act = &self.g_act[c.mor];
                if c.other == i {
                    act[me] == me
                } else if c.other_is_source {
                    act[self.assignment[c.other]] == me
                } else {
                    act[me] == self.assignment[c.other]
                }
            })
        }

        fn run(&mut self, i: usize) {
            if i == self.var_obj.len() {
                self.found.push(self.assignment.clone());
                return;
            }
            // A constraint from an earlier source determines the value.
            let forced = self.constraints[i]
                .iter()
                .find(|c| c.other_is_source && c.other != i)
                .map(|c| self.g_act[c.mor][self.assignment[c.other]]);
            let candidates = match forced {
                Some(v) => v..v + 1,
                None => 0..self.domain_len[self.var_obj[i]],
            };
            for v in candidates {
                self.assignment[i] = v;
                if self.consistent(i) {
                    self.run(i + 1);
                }
            }
        }
    }

    let mut search = Search {
        var_obj: &var_obj,
        domain_len: &domain_len,
        g_act: &g_act,
        constraints: &constraints,
        assignment: vec![0; var_obj.len()],
        found: Vec::new(),
    };
    search.run(0);

    let mut results = Vec::with_capacity(search.found.len());
    for values in search.found {
        let mut components = BTreeMap::new();
        for a in objects {
            let (fa, ga) = (f.fiber(a)?, g.fiber(a)?);
            let base_ix = offset[a];
            let table = Func::from_pairs(
                fa.iter()
                    .enumerate()
                    .map(|(ix, x)| (x.clone(), ga.as_slice()[values[base_ix + ix]].clone())),
            );
            components.insert(a.clone(), table);
        }
        results.push(NatTransformation {
            source: f.clone(),
            target: g.clone(),
            components,
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    #[test]
    fn walking_arrow_is_valid() {
        let c = FinCategory::walking_arrow();
        assert!(c.validate().is_valid());
        assert_eq!(c.objects().len(), 2);
        assert_eq!(c.morphism_count(), 3);
        assert_eq!(c.hom(&Atom::from(0), &Atom::from(1)).len(), 1);
        assert!(c.hom(&Atom::from(1), &Atom::from(0)).is_empty());
    }

    #[test]
    fn discrete_is_valid() {
        let c = FinCategory::discrete(["a", "b", "c"].map(Atom::sym)).unwrap();
        assert!(c.validate().is_valid());
        assert!(c.is_discrete());
        assert_eq!(c.morphism_count(), 3);
    }

    #[test]
    fn empty_category_is_valid() {
        let c = FinCategory::discrete(std::iter::empty()).unwrap();
        assert!(c.validate().is_valid());
        assert!(c.objects().is_empty());
    }

    #[test]
    fn planted_associativity_violation_is_named() {
        // Monoid {e, x, y} with a non-associative table.
        let elems = FinSet::new(["e", "x", "y"].map(Atom::sym)).unwrap();
        let e = Atom::sym("e");
        let x = Atom::sym("x");
        let y = Atom::sym("y");
        let c = FinCategory::monoid(&elems, &e, |g, f| {
            if g == &e {
                f.clone()
            } else if f == &e {
                g.clone()
            } else if g == &x && f == &x {
                y.clone()
            } else {
                x.clone()
            }
        })
        .unwrap();
        let report = c.validate();
        // x∘(x∘y) = x∘x = y, (x∘x)∘y = y∘y = x.
        assert!(report.violations.contains(&Violation::Associativity {
            h: x.clone(),
            g: x.clone(),
            f: y.clone()
        }));
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = FinCategory::thin(
            ["a", "b", "c"].map(Atom::sym),
            [
                (Atom::sym("a"), Atom::sym("b")),
                (Atom::sym("b"), Atom::sym("c")),
            ],
        )
        .unwrap();
        assert_eq!(c.opposite().opposite(), c);
        assert!(c.opposite().validate().is_valid());
    }

    #[test]
    fn product_counts_and_op_commutes() {
        let c = FinCategory::walking_arrow();
        let d = FinCategory::thin(
            ["x", "y", "z"].map(Atom::sym),
            [(Atom::sym("x"), Atom::sym("y"))],
        )
        .unwrap();
        let p = c.product(&d);
        assert_eq!(p.objects().len(), 6);
        assert!(p.validate().is_valid());
        assert_eq!(p.opposite(), c.opposite().product(&d.opposite()));
    }

    #[test]
    fn hom_count_in_op_product_matches_pair_enumeration() {
        let c = FinCategory::walking_arrow();
        let d = FinCategory::walking_iso();
        let p = c.opposite().product(&d);
        for a in c.objects() {
            for b in d.objects() {
                for c0 in c.objects() {
                    for d0 in d.objects() {
                        let expected = c.hom(c0, a).len() * d.hom(b, d0).len();
                        let got = p
                            .hom(
                                &Atom::pair(a.clone(), b.clone()),
                                &Atom::pair(c0.clone(), d0.clone()),
                            )
                            .len();
                        assert_eq!(got, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn yoneda_on_walking_arrow() {
        let c = arc(FinCategory::walking_arrow());
        let y0 = CoPresheaf::yoneda(c.clone(), &Atom::from(0)).unwrap();
        assert_eq!(y0.fiber(&Atom::from(0)).unwrap().len(), 1);
        assert_eq!(y0.fiber(&Atom::from(1)).unwrap().len(), 1);
        assert!(y0.validate().is_empty());
        let y1 = CoPresheaf::yoneda(c, &Atom::from(1)).unwrap();
        assert_eq!(y1.fiber(&Atom::from(0)).unwrap().len(), 0);
        assert!(CoPresheaf::yoneda(y1.base().clone(), &Atom::sym("nope")).is_err());
    }

    #[test]
    fn yoneda_on_discrete() {
        let c = arc(FinCategory::discrete(["a", "b"].map(Atom::sym)).unwrap());
        let y = CoPresheaf::yoneda(c, &Atom::sym("a")).unwrap();
        assert_eq!(y.fiber(&Atom::sym("a")).unwrap().len(), 1);
        assert!(y.fiber(&Atom::sym("b")).unwrap().is_empty());
    }

    #[test]
    fn terminal_presheaf_has_one_endo_nat() {
        let c = arc(FinCategory::walking_arrow());
        let one = CoPresheaf::constant(c, &FinSet::singleton(Atom::sym("*"))).unwrap();
        assert_eq!(enumerate_nats(&one, &one).unwrap().len(), 1);
    }

    #[test]
    fn no_nats_into_empty_fiber() {
        let c = arc(FinCategory::discrete(["a", "b"].map(Atom::sym)).unwrap());
        let f = CoPresheaf::constant(c.clone(), &FinSet::range(1)).unwrap();
        let g = CoPresheaf::tabulate(
            c,
            |a| {
                Ok(if a == &Atom::sym("a") {
                    FinSet::range(2)
                } else {
                    FinSet::empty()
                })
            },
            |_, x| Ok(x.clone()),
        )
        .unwrap();
        assert!(enumerate_nats(&f, &g).unwrap().is_empty());
    }

    #[test]
    fn yoneda_count_on_walking_arrow() {
        let c = arc(FinCategory::walking_arrow());
        let g = CoPresheaf::new(
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
        .unwrap();
        for a in c.objects() {
            let y = CoPresheaf::yoneda(c.clone(), a).unwrap();
            let nats = enumerate_nats(&y, &g).unwrap();
            assert_eq!(nats.len(), g.fiber(a).unwrap().len());
            for n in &nats {
                assert!(n.naturality_failures().is_empty());
            }
        }
    }

    #[test]
    fn finset_skeleton_is_a_category() {
        let s = FinCategory::finset_skeleton(2).unwrap();
        assert!(s.validate().is_valid());
        // 1+1+1 + 0+1+2 + 0+1+4
        assert_eq!(s.morphism_count(), 11);
        for (f, _, _) in s.morphisms() {
            skeleton_function(f).unwrap();
        }
    }

    #[test]
    fn functor_composition_and_validation() {
        let c = arc(FinCategory::walking_arrow());
        let t = arc(FinCategory::discrete([Atom::sym("p")]).unwrap());
        let bang = FinFunctor::tabulate(
            c.clone(),
            t.clone(),
            |_| Atom::sym("p"),
            |_| Atom::pair(Atom::sym("p"), Atom::sym("p")),
        )
        .unwrap();
        assert!(bang.validate().is_empty());
        let id = FinFunctor::identity(c);
        assert_eq!(id.then(&bang).unwrap(), bang);
        assert!(bang.then(&id).is_err());
    }
}

//! Explicit isomorphism witnesses.
//!
//! An isomorphism is never asserted from cardinalities: a witness is a pair
//! of function tables that have been checked to compose to identities.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::atom::{Atom, FinSet, Func};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    domain: FinSet,
    codomain: FinSet,
    forward: Func,
    backward: Func,
}

impl IsoWitness {
    /// Fails unless both tables are total and mutually inverse.
    pub fn new(
        domain: FinSet,
        codomain: FinSet,
        forward: Func,
        backward: Func,
    ) -> Result<IsoWitness> {
        if !forward.is_total_on(&domain, &codomain) {
            return Err(Error::Witness(format!(
                "forward map is not a function {domain} -> {codomain}"
            )));
        }
        if !backward.is_total_on(&codomain, &domain) {
            return Err(Error::Witness(format!(
                "backward map is not a function {codomain} -> {domain}"
            )));
        }
        if !backward.after(&forward)?.is_identity_on(&domain) {
            return Err(Error::Witness(
                "backward ∘ forward is not the identity".into(),
            ));
        }
        if !forward.after(&backward)?.is_identity_on(&codomain) {
            return Err(Error::Witness(
                "forward ∘ backward is not the identity".into(),
            ));
        }
        Ok(IsoWitness {
            domain,
            codomain,
            forward,
            backward,
        })
    }

    pub fn identity(set: &FinSet) -> IsoWitness {
        IsoWitness {
            domain: set.clone(),
            codomain: set.clone(),
            forward: Func::identity(set),
            backward: Func::identity(set),
        }
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn forward(&self) -> &Func {
        &self.forward
    }

    pub fn backward(&self) -> &Func {
        &self.backward
    }

    pub fn inverse(&self) -> IsoWitness {
        IsoWitness {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &IsoWitness) -> Result<IsoWitness> {
        if self.codomain != next.domain {
            return Err(Error::Mismatch("isomorphisms are not composable".into()));
        }
        IsoWitness::new(
            self.domain.clone(),
            next.codomain.clone(),
            next.forward.after(&self.forward)?,
            self.backward.after(&next.backward)?,
        )
    }
}

/// A family of component isomorphisms indexed by objects (or by pairs of
/// objects for bifunctors). Naturality is checked by the module that knows
/// the functors involved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NaturalIso {
    components: BTreeMap<Atom, IsoWitness>,
}

impl NaturalIso {
    pub fn new(components: BTreeMap<Atom, IsoWitness>) -> NaturalIso {
        NaturalIso { components }
    }

    pub fn component(&self, index: &Atom) -> Result<&IsoWitness> {
        self.components
            .get(index)
            .ok_or_else(|| Error::Witness(format!("no component at {index}")))
    }

    pub fn components(&self) -> &BTreeMap<Atom, IsoWitness> {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Componentwise `next ∘ self`.
    pub fn then(&self, next: &NaturalIso) -> Result<NaturalIso> {
        let mut components = BTreeMap::new();
        for (k, w) in &self.components {
            components.insert(k.clone(), w.then(next.component(k)?)?);
        }
        Ok(NaturalIso { components })
    }

    pub fn inverse(&self) -> NaturalIso {
        NaturalIso {
            components: self
                .components
                .iter()
                .map(|(k, w)| (k.clone(), w.inverse()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_inverse_pair() {
        let two = FinSet::range(2);
        let swap = Func::from_pairs([
            (Atom::from(0), Atom::from(1)),
            (Atom::from(1), Atom::from(0)),
        ]);
        assert!(IsoWitness::new(two.clone(), two.clone(), swap.clone(), swap.clone()).is_ok());
        assert!(IsoWitness::new(two.clone(), two.clone(), swap, Func::identity(&two)).is_err());
    }

    #[test]
    fn rejects_collapsing_map() {
        let two = FinSet::range(2);
        let one = FinSet::range(1);
        let collapse = Func::tabulate(&two, |_| Atom::from(0));
        let back = Func::tabulate(&one, |_| Atom::from(0));
        assert!(IsoWitness::new(two, one, collapse, back).is_err());
    }
}

//! Atoms, finite sets and explicit function tables.
//!
//! Every element, object id and morphism id in the kernel is an [`Atom`]:
//! either an opaque symbol or a tuple of atoms. Tuples let derived
//! constructions (products, coend elements, tagged sums) build new atoms
//! without a global name supply. Atoms carry a total order (symbols compare
//! lexicographically, tuples componentwise, every symbol sorts before every
//! tuple), which is what makes all enumerations canonical.
//!
//! The text syntax is `name` for symbols and `(x,y,...)` for tuples, with
//! `()` the empty tuple. Symbol names may not contain `(`, `)`, `,` or
//! whitespace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym(String),
    Tuple(Vec<Atom>),
}

impl Atom {
    pub fn sym(name: impl Into<String>) -> Atom {
        Atom::Sym(name.into())
    }

    pub fn pair(x: Atom, y: Atom) -> Atom {
        Atom::Tuple(vec![x, y])
    }

    pub fn triple(x: Atom, y: Atom, z: Atom) -> Atom {
        Atom::Tuple(vec![x, y, z])
    }

    pub fn unit() -> Atom {
        Atom::Tuple(Vec::new())
    }

    /// Left injection into a binary coproduct.
    pub fn inl(x: Atom) -> Atom {
        Atom::pair(Atom::sym("inl"), x)
    }

    /// Right injection into a binary coproduct.
    pub fn inr(x: Atom) -> Atom {
        Atom::pair(Atom::sym("inr"), x)
    }

    pub fn components(&self) -> Option<&[Atom]> {
        match self {
            Atom::Tuple(xs) => Some(xs),
            Atom::Sym(_) => None,
        }
    }

    /// Splits a pair atom; errors on anything else.
    pub fn as_pair(&self) -> Result<(&Atom, &Atom)> {
        match self.components() {
            Some([x, y]) => Ok((x, y)),
            _ => Err(Error::Malformed(format!(
                "expected a pair atom, got {self}"
            ))),
        }
    }

    pub fn as_triple(&self) -> Result<(&Atom, &Atom, &Atom)> {
        match self.components() {
            Some([x, y, z]) => Ok((x, y, z)),
            _ => Err(Error::Malformed(format!(
                "expected a triple atom, got {self}"
            ))),
        }
    }

    /// Decodes an element of a binary coproduct built by [`Atom::inl`] / [`Atom::inr`].
    pub fn as_sum(&self) -> Result<Either<&Atom, &Atom>> {
        let (tag, x) = self.as_pair()?;
        match tag {
            Atom::Sym(t) if t == "inl" => Ok(Either::Left(x)),
            Atom::Sym(t) if t == "inr" => Ok(Either::Right(x)),
            _ => Err(Error::Malformed(format!(
                "expected a coproduct element, got {self}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Either<L, R> {
    Left(L),
    Right(R),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => f.write_str(s),
            Atom::Tuple(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Atom {
        Atom::sym(s)
    }
}

impl From<usize> for Atom {
    fn from(n: usize) -> Atom {
        Atom::Sym(n.to_string())
    }
}

fn is_sym_char(c: char) -> bool {
    !(c == '(' || c == ')' || c == ',' || c.is_whitespace())
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Atom> {
        let mut parser = AtomParser { src: s, pos: 0 };
        let atom = parser.atom()?;
        if parser.pos != s.len() {
            return Err(parser.error("trailing characters"));
        }
        Ok(atom)
    }
}

struct AtomParser<'a> {
    src: &'a str,
    pos: usize,
}

impl AtomParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Malformed(format!(
            "bad atom {:?} at offset {}: {what}",
            self.src, self.pos
        ))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Atom::Tuple(items));
                }
                loop {
                    items.push(self.atom()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Atom::Tuple(items));
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
            }
            Some(c) if is_sym_char(c) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if !is_sym_char(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                Ok(Atom::Sym(self.src[start..self.pos].to_string()))
            }
            _ => Err(self.error("expected a symbol or '('")),
        }
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Atom, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite set of atoms in canonical (sorted) order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet {
    elements: Vec<Atom>,
}

impl FinSet {
    pub fn empty() -> FinSet {
        FinSet::default()
    }

    pub fn singleton(x: Atom) -> FinSet {
        FinSet { elements: vec![x] }
    }

    /// Builds a set, rejecting duplicates.
    pub fn new(elements: impl IntoIterator<Item = Atom>) -> Result<FinSet> {
        let mut elements: Vec<Atom> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("duplicate element {}", w[0])));
        }
        Ok(FinSet { elements })
    }

    /// `{0, 1, ..., n-1}` as symbols.
    pub fn range(n: usize) -> FinSet {
        FinSet::from_iter((0..n).map(Atom::from))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Atom) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &Atom) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Atom> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Atom] {
        &self.elements
    }

    /// Cartesian product with pair atoms `(x,y)`.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for x in &self.elements {
            for y in &other.elements {
                out.push(Atom::pair(x.clone(), y.clone()));
            }
        }
        // Lexicographic order on pairs coincides with the nested loop order.
        FinSet { elements: out }
    }

    /// Binary coproduct with tagged atoms `(inl,x)` / `(inr,y)`.
    pub fn sum(&self, other: &FinSet) -> FinSet {
        FinSet::from_iter(
            self.iter()
                .cloned()
                .map(Atom::inl)
                .chain(other.iter().cloned().map(Atom::inr)),
        )
    }

    /// All total functions `self -> codomain`, in lexicographic order of
    /// their image vectors.
    pub fn functions_to(&self, codomain: &FinSet) -> Vec<Func> {
        let n = self.len();
        let k = codomain.len();
        if n > 0 && k == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            out.push(Func::from_pairs(
                self.iter()
                    .zip(&digits)
                    .map(|(x, &d)| (x.clone(), codomain.elements[d].clone())),
            ));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < k {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

impl FromIterator<Atom> for FinSet {
    /// Collects, silently merging duplicates.
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> FinSet {
        let set: BTreeSet<Atom> = iter.into_iter().collect();
        FinSet {
            elements: set.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Atom;
    type IntoIter = std::slice::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<FinSet, D::Error> {
        let elements = Vec::<Atom>::deserialize(deserializer)?;
        FinSet::new(elements).map_err(serde::de::Error::custom)
    }
}

/// An explicit function table between finite sets of atoms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Func {
    table: BTreeMap<Atom, Atom>,
}

impl Func {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, Atom)>) -> Func {
        Func {
            table: pairs.into_iter().collect(),
        }
    }

    pub fn identity(set: &FinSet) -> Func {
        Func::from_pairs(set.iter().map(|x| (x.clone(), x.clone())))
    }

    pub fn tabulate(domain: &FinSet, mut f: impl FnMut(&Atom) -> Atom) -> Func {
        Func::from_pairs(domain.iter().map(|x| (x.clone(), f(x))))
    }

    pub fn try_tabulate(domain: &FinSet, mut f: impl FnMut(&Atom) -> Result<Atom>) -> Result<Func> {
        let mut table = BTreeMap::new();
        for x in domain {
            table.insert(x.clone(), f(x)?);
        }
        Ok(Func { table })
    }

    pub fn get(&self, x: &Atom) -> Option<&Atom> {
        self.table.get(x)
    }

    /// Applies the table; a missing entry is a broken invariant of the caller.
    pub fn apply(&self, x: &Atom) -> Result<&Atom> {
        self.table
            .get(x)
            .ok_or_else(|| Error::Malformed(format!("function table has no entry for {x}")))
    }

    /// `self ∘ inner` on the domain of `inner`.
    pub fn after(&self, inner: &Func) -> Result<Func> {
        let mut table = BTreeMap::new();
        for (x, y) in &inner.table {
            table.insert(x.clone(), self.apply(y)?.clone());
        }
        Ok(Func { table })
    }

    pub fn domain(&self) -> FinSet {
        FinSet {
            elements: self.table.keys().cloned().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Atom)> {
        self.table.iter()
    }

    /// True when the table is exactly a total function `domain -> codomain`.
    pub fn is_total_on(&self, domain: &FinSet, codomain: &FinSet) -> bool {
        self.table.len() == domain.len()
            && self
                .table
                .iter()
                .all(|(x, y)| domain.contains(x) && codomain.contains(y))
    }

    pub fn is_identity_on(&self, set: &FinSet) -> bool {
        self.table.len() == set.len() && set.iter().all(|x| self.table.get(x) == Some(x))
    }

    /// Encodes the function as a tuple of images listed in the order of
    /// `domain`. Used where a function must itself be an element.
    pub fn encode(&self, domain: &FinSet) -> Result<Atom> {
        domain
            .iter()
            .map(|x| self.apply(x).cloned())
            .collect::<Result<Vec<_>>>()
            .map(Atom::Tuple)
    }

    /// Inverse of [`Func::encode`].
    pub fn decode(domain: &FinSet, code: &Atom) -> Result<Func> {
        match code.components() {
            Some(images) if images.len() == domain.len() => Ok(Func::from_pairs(
                domain.iter().cloned().zip(images.iter().cloned()),
            )),
            _ => Err(Error::Malformed(format!(
                "{code} does not encode a function on {domain}"
            ))),
        }
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, y)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}↦{y}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for text in ["a", "(a,b)", "()", "((x,1),(inl,y),z)", "id_0"] {
            let atom: Atom = text.parse().unwrap();
            assert_eq!(atom.to_string(), text);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("(a,".parse::<Atom>().is_err());
        assert!("a b".parse::<Atom>().is_err());
        assert!("".parse::<Atom>().is_err());
        assert!("(a))".parse::<Atom>().is_err());
    }

    #[test]
    fn finset_rejects_duplicates() {
        assert!(FinSet::new(vec![Atom::sym("a"), Atom::sym("a")]).is_err());
        let s = FinSet::new(vec![Atom::sym("b"), Atom::sym("a")]).unwrap();
        assert_eq!(s.as_slice(), &[Atom::sym("a"), Atom::sym("b")]);
    }

    #[test]
    fn function_enumeration_counts() {
        let two = FinSet::range(2);
        let three = FinSet::range(3);
        assert_eq!(two.functions_to(&three).len(), 9);
        assert_eq!(three.functions_to(&two).len(), 8);
        assert_eq!(FinSet::empty().functions_to(&FinSet::empty()).len(), 1);
        assert_eq!(two.functions_to(&FinSet::empty()).len(), 0);
    }

    #[test]
    fn product_is_sorted() {
        let s = FinSet::range(3).product(&FinSet::range(2));
        let sorted: FinSet = s.iter().cloned().collect();
        assert_eq!(s, sorted);
    }

    #[test]
    fn encode_decode() {
        let dom = FinSet::range(3);
        for f in dom.functions_to(&FinSet::range(2)) {
            let code = f.encode(&dom).unwrap();
            assert_eq!(Func::decode(&dom, &code).unwrap(), f);
        }
    }
}

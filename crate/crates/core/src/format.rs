//! JSON file formats. Every table is explicit; identity entries may be
//! omitted on input and are never written on output.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::atom::{Atom, FinSet, Func};
use crate::coend::FinBifunctor;
use crate::error::Error;
use crate::fincat::{CoPresheaf, FinCategory, FinFunctor};
use crate::poly::{Ommatidium, PolyFunctor, PolyLens};
use crate::simple_optics::{FinMonoidalCategory, MonoidalAction, OpticSetting};

/// A problem with an input file. `line` and `column` are 1-based and present
/// when the file is not valid JSON for its format.
#[derive(Debug)]
pub struct InputError {
    pub file: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{}:{}:{}: {}", self.file, l, c, self.message),
            _ => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn semantic(file: &str, err: Error) -> InputError {
        InputError {
            file: file.to_string(),
            line: None,
            column: None,
            message: err.to_string(),
        }
    }
}

pub fn parse_str<T: DeserializeOwned>(file: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError {
        file: file.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| InputError {
        file: name.clone(),
        line: None,
        column: None,
        message: e.to_string(),
    })?;
    parse_str(&name, &text)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Converts between a file format and the kernel type it describes.
pub trait Dto: Sized + Serialize + DeserializeOwned {
    type Value;
    fn build(self) -> crate::error::Result<Self::Value>;
    fn from_value(v: &Self::Value) -> Self;
}

/// Reads a file and builds its value. Semantic errors carry the file name.
pub fn load<D: Dto>(path: &Path) -> Result<D::Value, InputError> {
    let dto: D = read(path)?;
    dto.build()
        .map_err(|e| InputError::semantic(&path.display().to_string(), e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDto {
    pub id: Atom,
    pub src: Atom,
    pub tgt: Atom,
}

/// `compose` lists `[g, f, g∘f]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDto {
    pub objects: Vec<Atom>,
    pub morphisms: Vec<MorphismDto>,
    pub identities: BTreeMap<Atom, Atom>,
    pub compose: Vec<(Atom, Atom, Atom)>,
}

impl Dto for CategoryDto {
    type Value = FinCategory;

    /// Does not validate; see [`FinCategory::validate`].
    fn build(self) -> crate::error::Result<FinCategory> {
        FinCategory::new(
            self.objects,
            self.morphisms.into_iter().map(|m| (m.id, m.src, m.tgt)),
            self.identities,
            self.compose,
        )
    }

    fn from_value(c: &FinCategory) -> CategoryDto {
        CategoryDto {
            objects: c.objects().to_vec(),
            morphisms: c
                .morphisms()
                .map(|(id, src, tgt)| MorphismDto {
                    id: id.clone(),
                    src: src.clone(),
                    tgt: tgt.clone(),
                })
                .collect(),
            identities: c.identities().clone(),
            compose: c
                .compose_table()
                .iter()
                .filter(|((g, f), _)| !c.is_identity(g) && !c.is_identity(f))
                .map(|((g, f), gf)| (g.clone(), f.clone(), gf.clone()))
                .collect(),
        }
    }
}

fn build_cat(c: CategoryDto) -> crate::error::Result<Arc<FinCategory>> {
    let cat = c.build()?;
    let report = cat.validate();
    if !report.is_valid() {
        let first = report
            .violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_default();
        return Err(Error::Invalid(format!("category axioms fail: {first}")));
    }
    Ok(Arc::new(cat))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDto {
    pub source: CategoryDto,
    pub target: CategoryDto,
    pub objects: BTreeMap<Atom, Atom>,
    pub morphisms: BTreeMap<Atom, Atom>,
}

impl Dto for FunctorDto {
    type Value = FinFunctor;

    fn build(self) -> crate::error::Result<FinFunctor> {
        let f = FinFunctor::new(
            build_cat(self.source)?,
            build_cat(self.target)?,
            self.objects,
            self.morphisms,
        )?;
        let problems = f.validate();
        if !problems.is_empty() {
            return Err(Error::Invalid(format!("not a functor: {}", problems[0])));
        }
        Ok(f)
    }

    fn from_value(f: &FinFunctor) -> FunctorDto {
        FunctorDto {
            source: CategoryDto::from_value(f.source()),
            target: CategoryDto::from_value(f.target()),
            objects: f.obj_map().clone(),
            morphisms: f
                .mor_map()
                .iter()
                .filter(|(m, _)| !f.source().is_identity(m))
                .map(|(m, g)| (m.clone(), g.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoPresheafDto {
    pub base: CategoryDto,
    pub fibers: BTreeMap<Atom, FinSet>,
    pub actions: BTreeMap<Atom, Func>,
}

impl Dto for CoPresheafDto {
    type Value = CoPresheaf;

    fn build(self) -> crate::error::Result<CoPresheaf> {
        let f = CoPresheaf::new(build_cat(self.base)?, self.fibers, self.actions)?;
        let problems = f.validate();
        if !problems.is_empty() {
            return Err(Error::Invalid(format!("not a functor: {}", problems[0])));
        }
        Ok(f)
    }

    fn from_value(f: &CoPresheaf) -> CoPresheafDto {
        CoPresheafDto {
            base: CategoryDto::from_value(f.base()),
            fibers: f.fibers().clone(),
            actions: f
                .actions()
                .iter()
                .filter(|(m, _)| !f.base().is_identity(m))
                .map(|(m, t)| (m.clone(), t.clone()))
                .collect(),
        }
    }
}

/// A profunctor (or any bifunctor) `contra^op × co → Set`. `left` lists
/// `[f, y, table]` for `f` in `contra`, `right` lists `[x, g, table]` for `g`
/// in `co`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfunctorDto {
    pub contra: CategoryDto,
    pub co: CategoryDto,
    pub fibers: Vec<(Atom, Atom, FinSet)>,
    pub left: Vec<(Atom, Atom, Func)>,
    pub right: Vec<(Atom, Atom, Func)>,
}

impl Dto for ProfunctorDto {
    type Value = FinBifunctor;

    fn build(self) -> crate::error::Result<FinBifunctor> {
        let contra = build_cat(self.contra)?;
        let co = build_cat(self.co)?;
        let fibers = self
            .fibers
            .into_iter()
            .map(|(x, y, s)| ((x, y), s))
            .collect();
        let left = self.left.into_iter().map(|(f, y, t)| ((f, y), t)).collect();
        let right = self
            .right
            .into_iter()
            .map(|(x, g, t)| ((x, g), t))
            .collect();
        let p = FinBifunctor::new(contra, co, fibers, left, right)?;
        let problems = p.validate();
        if !problems.is_empty() {
            return Err(Error::Invalid(format!("not a bifunctor: {}", problems[0])));
        }
        Ok(p)
    }

    fn from_value(p: &FinBifunctor) -> ProfunctorDto {
        ProfunctorDto {
            contra: CategoryDto::from_value(p.contra()),
            co: CategoryDto::from_value(p.co()),
            fibers: p
                .fibers()
                .iter()
                .map(|((x, y), s)| (x.clone(), y.clone(), s.clone()))
                .collect(),
            left: p
                .left_tables()
                .iter()
                .filter(|((f, _), _)| !p.contra().is_identity(f))
                .map(|((f, y), t)| (f.clone(), y.clone(), t.clone()))
                .collect(),
            right: p
                .right_tables()
                .iter()
                .filter(|((_, g), _)| !p.co().is_identity(g))
                .map(|((x, g), t)| (x.clone(), g.clone(), t.clone()))
                .collect(),
        }
    }
}

/// `tensor` lists `[m, n, m⊗n]`, `tensor_mor` lists `[f, g, f⊗g]`,
/// `associator` lists `[m, n, p, α]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidalDto {
    pub category: CategoryDto,
    pub unit: Atom,
    pub tensor: Vec<(Atom, Atom, Atom)>,
    pub tensor_mor: Vec<(Atom, Atom, Atom)>,
    pub left_unitor: BTreeMap<Atom, Atom>,
    pub right_unitor: BTreeMap<Atom, Atom>,
    pub associator: Vec<(Atom, Atom, Atom, Atom)>,
}

impl Dto for MonoidalDto {
    type Value = FinMonoidalCategory;

    fn build(self) -> crate::error::Result<FinMonoidalCategory> {
        FinMonoidalCategory::new(
            build_cat(self.category)?,
            self.tensor
                .into_iter()
                .map(|(m, n, x)| ((m, n), x))
                .collect(),
            self.tensor_mor
                .into_iter()
                .map(|(f, g, h)| ((f, g), h))
                .collect(),
            self.unit,
            self.left_unitor,
            self.right_unitor,
            self.associator
                .into_iter()
                .map(|(m, n, p, a)| ((m, n, p), a))
                .collect(),
        )
    }

    fn from_value(m: &FinMonoidalCategory) -> MonoidalDto {
        MonoidalDto {
            category: CategoryDto::from_value(m.underlying()),
            unit: m.unit().clone(),
            tensor: m
                .tensor_table()
                .iter()
                .map(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
                .collect(),
            tensor_mor: m
                .tensor_mor_table()
                .iter()
                .map(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
                .collect(),
            left_unitor: m.left_unitors().clone(),
            right_unitor: m.right_unitors().clone(),
            associator: m
                .associators()
                .iter()
                .map(|((a, b, c), x)| (a.clone(), b.clone(), c.clone(), x.clone()))
                .collect(),
        }
    }
}

/// An action of the enclosing setting's monoidal category. `app` lists
/// `[m, c, m•c]`, `app_mor` lists `[f, g, f•g]`, `mu` lists `[m, n, c, μ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDto {
    pub on: CategoryDto,
    pub app: Vec<(Atom, Atom, Atom)>,
    pub app_mor: Vec<(Atom, Atom, Atom)>,
    pub mu: Vec<(Atom, Atom, Atom, Atom)>,
    pub eta: BTreeMap<Atom, Atom>,
}

impl ActionDto {
    fn build(self, acting: &Arc<FinMonoidalCategory>) -> crate::error::Result<MonoidalAction> {
        MonoidalAction::new(
            acting.clone(),
            build_cat(self.on)?,
            self.app.into_iter().map(|(m, c, x)| ((m, c), x)).collect(),
            self.app_mor
                .into_iter()
                .map(|(f, g, h)| ((f, g), h))
                .collect(),
            self.mu
                .into_iter()
                .map(|(m, n, c, x)| ((m, n, c), x))
                .collect(),
            self.eta,
        )
    }

    fn from_value(a: &MonoidalAction) -> ActionDto {
        ActionDto {
            on: CategoryDto::from_value(a.on()),
            app: a
                .app_table()
                .iter()
                .map(|((m, c), x)| (m.clone(), c.clone(), x.clone()))
                .collect(),
            app_mor: a
                .app_mor_table()
                .iter()
                .map(|((f, g), h)| (f.clone(), g.clone(), h.clone()))
                .collect(),
            mu: a
                .mu_table()
                .iter()
                .map(|((m, n, c), x)| (m.clone(), n.clone(), c.clone(), x.clone()))
                .collect(),
            eta: a.eta_table().clone(),
        }
    }
}

/// Two actions of one finite monoidal category: the exact optic regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingDto {
    pub monoidal: MonoidalDto,
    pub left: ActionDto,
    pub right: ActionDto,
}

impl Dto for SettingDto {
    type Value = OpticSetting;

    fn build(self) -> crate::error::Result<OpticSetting> {
        let m = Arc::new(self.monoidal.build()?);
        OpticSetting::new(self.left.build(&m)?, self.right.build(&m)?)
    }

    fn from_value(s: &OpticSetting) -> SettingDto {
        SettingDto {
            monoidal: MonoidalDto::from_value(s.monoidal()),
            left: ActionDto::from_value(s.left()),
            right: ActionDto::from_value(s.right()),
        }
    }
}

impl Dto for PolyFunctor {
    type Value = PolyFunctor;

    fn build(self) -> crate::error::Result<PolyFunctor> {
        self.check()?;
        Ok(self)
    }

    fn from_value(p: &PolyFunctor) -> PolyFunctor {
        p.clone()
    }
}

/// A polynomial lens together with its source and target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyLensDto {
    pub source: PolyFunctor,
    pub target: PolyFunctor,
    pub table: BTreeMap<Atom, Atom>,
}

impl Dto for PolyLensDto {
    type Value = (PolyFunctor, PolyFunctor, PolyLens);

    fn build(self) -> crate::error::Result<Self::Value> {
        self.source.check()?;
        self.target.check()?;
        let l = PolyLens::new(&self.source, &self.target, self.table)?;
        Ok((self.source, self.target, l))
    }

    fn from_value((p, q, l): &Self::Value) -> PolyLensDto {
        PolyLensDto {
            source: p.clone(),
            target: q.clone(),
            table: l.table().clone(),
        }
    }
}

/// An ommatidium together with its source and target. `residual` is keyed
/// by `(n,k)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmmatidiumDto {
    pub source: PolyFunctor,
    pub target: PolyFunctor,
    pub residual: BTreeMap<Atom, FinSet>,
    pub forward: BTreeMap<Atom, Func>,
    pub backward: BTreeMap<Atom, Func>,
}

impl Dto for OmmatidiumDto {
    type Value = (PolyFunctor, PolyFunctor, Ommatidium);

    fn build(self) -> crate::error::Result<Self::Value> {
        self.source.check()?;
        self.target.check()?;
        let o = Ommatidium {
            residual: self.residual,
            forward: self.forward,
            backward: self.backward,
        };
        o.check(&self.source, &self.target)?;
        Ok((self.source, self.target, o))
    }

    fn from_value((p, q, o): &Self::Value) -> OmmatidiumDto {
        OmmatidiumDto {
            source: p.clone(),
            target: q.clone(),
            residual: o.residual.clone(),
            forward: o.forward.clone(),
            backward: o.backward.clone(),
        }
    }
}

/// Identity conversion for types that are their own file format.
macro_rules! self_dto {
    ($t:ty, $check:expr) => {
        impl Dto for $t {
            type Value = $t;
            fn build(self) -> crate::error::Result<$t> {
                #[allow(clippy::redundant_closure_call)]
                ($check)(&self)?;
                Ok(self)
            }
            fn from_value(v: &$t) -> $t {
                v.clone()
            }
        }
    };
}

self_dto!(
    crate::simple_optics::ConcreteLens,
    |l: &crate::simple_optics::ConcreteLens| {
        crate::simple_optics::ConcreteLens::new(l.endpoints.clone(), l.get.clone(), l.put.clone())
            .map(|_| ())
    }
);
self_dto!(
    crate::simple_optics::ConcretePrism,
    |p: &crate::simple_optics::ConcretePrism| {
        crate::simple_optics::ConcretePrism::new(
            p.endpoints.clone(),
            p.matcher.clone(),
            p.build.clone(),
        )
        .map(|_| ())
    }
);
self_dto!(
    crate::simple_optics::SetOptic,
    |o: &crate::simple_optics::SetOptic| o.check()
);
self_dto!(
    crate::simple_optics::ExistentialOptic,
    |_: &crate::simple_optics::ExistentialOptic| { crate::error::Result::Ok(()) }
);

//! The bundled corpus of worked instances, and loading/writing it as a
//! directory of JSON files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atom::{Atom, Either, FinSet, Func};
use crate::coend::FinBifunctor;
use crate::error::{Error, Result};
use crate::fincat::{CoPresheaf, FinCategory, FinFunctor};
use crate::format::{
    self, CategoryDto, CoPresheafDto, Dto, FunctorDto, InputError, ProfunctorDto, SettingDto,
};
use crate::poly::PolyFunctor;
use crate::prof::{hom_profunctor, FinProfunctor};
use crate::simple_optics::{
    ConcreteLens, ConcretePrism, FinMonoidalCategory, OpticSetting, SetEndpoints,
};

/// A co-presheaf together with a chain of composable functors starting at
/// its base.
#[derive(Clone, Debug, PartialEq)]
pub struct KanChain {
    pub copresheaf: CoPresheaf,
    pub functors: Vec<FinFunctor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KanChainDto {
    pub copresheaf: CoPresheafDto,
    pub functors: Vec<FunctorDto>,
}

impl Dto for KanChainDto {
    type Value = KanChain;

    fn build(self) -> Result<KanChain> {
        let copresheaf = self.copresheaf.build()?;
        let functors: Vec<FinFunctor> = self
            .functors
            .into_iter()
            .map(Dto::build)
            .collect::<Result<_>>()?;
        let mut base = copresheaf.base().clone();
        for f in &functors {
            if *f.source() != base {
                return Err(Error::Mismatch("functor chain is not composable".into()));
            }
            base = f.target().clone();
        }
        Ok(KanChain {
            copresheaf,
            functors,
        })
    }

    fn from_value(c: &KanChain) -> KanChainDto {
        KanChainDto {
            copresheaf: CoPresheafDto::from_value(&c.copresheaf),
            functors: c.functors.iter().map(FunctorDto::from_value).collect(),
        }
    }
}

/// A chain of composable profunctors and a co-presheaf on the source of the
/// first one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfCase {
    pub profunctors: Vec<FinProfunctor>,
    pub copresheaf: CoPresheaf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfCaseDto {
    pub profunctors: Vec<ProfunctorDto>,
    pub copresheaf: CoPresheafDto,
}

fn check_prof_chain(ps: &[FinProfunctor]) -> Result<()> {
    for w in ps.windows(2) {
        if w[0].co() != w[1].contra() {
            return Err(Error::Mismatch("profunctor chain is not composable".into()));
        }
    }
    Ok(())
}

impl Dto for ProfCaseDto {
    type Value = ProfCase;

    fn build(self) -> Result<ProfCase> {
        let profunctors: Vec<FinProfunctor> = self
            .profunctors
            .into_iter()
            .map(Dto::build)
            .collect::<Result<_>>()?;
        let copresheaf = self.copresheaf.build()?;
        check_prof_chain(&profunctors)?;
        if let Some(p) = profunctors.first() {
            if copresheaf.base() != p.contra() {
                return Err(Error::Mismatch(
                    "co-presheaf is not over the first profunctor's source".into(),
                ));
            }
        }
        Ok(ProfCase {
            profunctors,
            copresheaf,
        })
    }

    fn from_value(c: &ProfCase) -> ProfCaseDto {
        ProfCaseDto {
            profunctors: c
                .profunctors
                .iter()
                .map(ProfunctorDto::from_value)
                .collect(),
            copresheaf: CoPresheafDto::from_value(&c.copresheaf),
        }
    }
}

/// Residual profunctors `p_1, ..., p_n` and endpoint pairs `(a_0,b_0), ...,
/// (a_n,b_n)` with `(a_{i-1},b_{i-1})` over the source of `p_i` and
/// `(a_i,b_i)` over its target. Compound optics are sampled hop by hop, at
/// most `limit` forward and backward maps each.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundCase {
    pub profunctors: Vec<FinProfunctor>,
    pub ends: Vec<(CoPresheaf, CoPresheaf)>,
    pub limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundCaseDto {
    pub profunctors: Vec<ProfunctorDto>,
    pub ends: Vec<(CoPresheafDto, CoPresheafDto)>,
    pub limit: usize,
}

impl Dto for CompoundCaseDto {
    type Value = CompoundCase;

    fn build(self) -> Result<CompoundCase> {
        let profunctors: Vec<FinProfunctor> = self
            .profunctors
            .into_iter()
            .map(Dto::build)
            .collect::<Result<_>>()?;
        let ends: Vec<(CoPresheaf, CoPresheaf)> = self
            .ends
            .into_iter()
            .map(|(a, b)| Ok((a.build()?, b.build()?)))
            .collect::<Result<_>>()?;
        check_prof_chain(&profunctors)?;
        if ends.len() != profunctors.len() + 1 {
            return Err(Error::Malformed(
                "need one endpoint pair more than profunctors".into(),
            ));
        }
        for (i, p) in profunctors.iter().enumerate() {
            for (e, cat) in [(&ends[i], p.contra()), (&ends[i + 1], p.co())] {
                if e.0.base() != cat || e.1.base() != cat {
                    return Err(Error::Mismatch(format!(
                        "endpoint pair {i} is over the wrong category"
                    )));
                }
            }
        }
        Ok(CompoundCase {
            profunctors,
            ends,
            limit: self.limit,
        })
    }

    fn from_value(c: &CompoundCase) -> CompoundCaseDto {
        CompoundCaseDto {
            profunctors: c
                .profunctors
                .iter()
                .map(ProfunctorDto::from_value)
                .collect(),
            ends: c
                .ends
                .iter()
                .map(|(a, b)| (CoPresheafDto::from_value(a), CoPresheafDto::from_value(b)))
                .collect(),
            limit: c.limit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyPair {
    pub source: PolyFunctor,
    pub target: PolyFunctor,
}

impl Dto for PolyPair {
    type Value = PolyPair;

    fn build(self) -> Result<PolyPair> {
        self.source.check()?;
        self.target.check()?;
        Ok(self)
    }

    fn from_value(p: &PolyPair) -> PolyPair {
        p.clone()
    }
}

pub type Named<T> = Vec<(String, T)>;

/// Every instance the law suites run on. Categories are kept even when
/// they violate the axioms so that the axiom check can report them.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub categories: Named<FinCategory>,
    pub copresheaves: Named<CoPresheaf>,
    pub kan: Named<KanChain>,
    pub prof: Named<ProfCase>,
    pub settings: Named<OpticSetting>,
    pub lenses: Named<ConcreteLens>,
    pub prisms: Named<ConcretePrism>,
    pub poly: Named<PolyPair>,
    pub compound: Named<CompoundCase>,
}

/// Subdirectory names, in load order.
pub const SECTIONS: [&str; 9] = [
    "categories",
    "copresheaves",
    "kan",
    "prof",
    "monoidal",
    "lenses",
    "prisms",
    "poly",
    "compound",
];

fn load_section<D: Dto>(
    dir: &Path,
    section: &str,
) -> std::result::Result<Named<D::Value>, InputError> {
    let sub = dir.join(section);
    if !sub.is_dir() {
        return Ok(Vec::new());
    }
    let mut files: Vec<_> = std::fs::read_dir(&sub)
        .map_err(|e| InputError {
            file: sub.display().to_string(),
            line: None,
            column: None,
            message: e.to_string(),
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, format::load::<D>(&p)?))
        })
        .collect()
}

fn write_section<D: Dto>(dir: &Path, section: &str, items: &Named<D::Value>) -> Result<()> {
    if items.is_empty() {
        return Ok(());
    }
    let sub = dir.join(section);
    std::fs::create_dir_all(&sub)?;
    for (name, v) in items {
        std::fs::write(
            sub.join(format!("{name}.json")),
            format::to_pretty(&D::from_value(v)),
        )?;
    }
    Ok(())
}

impl Corpus {
    pub fn load(dir: &Path) -> std::result::Result<Corpus, InputError> {
        if !dir.is_dir() {
            return Err(InputError {
                file: dir.display().to_string(),
                line: None,
                column: None,
                message: "corpus directory not found".into(),
            });
        }
        Ok(Corpus {
            categories: load_section::<CategoryDto>(dir, "categories")?,
            copresheaves: load_section::<CoPresheafDto>(dir, "copresheaves")?,
            kan: load_section::<KanChainDto>(dir, "kan")?,
            prof: load_section::<ProfCaseDto>(dir, "prof")?,
            settings: load_section::<SettingDto>(dir, "monoidal")?,
            lenses: load_section::<ConcreteLens>(dir, "lenses")?,
            prisms: load_section::<ConcretePrism>(dir, "prisms")?,
            poly: load_section::<PolyPair>(dir, "poly")?,
            compound: load_section::<CompoundCaseDto>(dir, "compound")?,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_section::<CategoryDto>(dir, "categories", &self.categories)?;
        write_section::<CoPresheafDto>(dir, "copresheaves", &self.copresheaves)?;
        write_section::<KanChainDto>(dir, "kan", &self.kan)?;
        write_section::<ProfCaseDto>(dir, "prof", &self.prof)?;
        write_section::<SettingDto>(dir, "monoidal", &self.settings)?;
        write_section::<ConcreteLens>(dir, "lenses", &self.lenses)?;
        write_section::<ConcretePrism>(dir, "prisms", &self.prisms)?;
        write_section::<PolyPair>(dir, "poly", &self.poly)?;
        write_section::<CompoundCaseDto>(dir, "compound", &self.compound)?;
        Ok(())
    }

    /// Number of files per section.
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        BTreeMap::from([
            ("categories", self.categories.len()),
            ("copresheaves", self.copresheaves.len()),
            ("kan", self.kan.len()),
            ("prof", self.prof.len()),
            ("monoidal", self.settings.len()),
            ("lenses", self.lenses.len()),
            ("prisms", self.prisms.len()),
            ("poly", self.poly.len()),
            ("compound", self.compound.len()),
        ])
    }

    /// The categories that satisfy the axioms.
    pub fn valid_categories(&self) -> Vec<(&str, &FinCategory)> {
        self.categories
            .iter()
            .filter(|(_, c)| c.validate().is_valid())
            .map(|(n, c)| (n.as_str(), c))
            .collect()
    }
}

/// The corpus shipped under `crates/core/corpus`.
pub fn default_corpus_dir() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/corpus")
}

/// The planted-violation fixture shipped under `crates/core/fixtures`.
pub fn planted_fixture_dir() -> &'static str {
    concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/planted_associativity"
    )
}

fn sym(s: &str) -> Atom {
    Atom::sym(s)
}

fn n(i: usize) -> Atom {
    Atom::from(i)
}

fn syms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|s| sym(s)).collect()
}

fn arc(c: FinCategory) -> Arc<FinCategory> {
    Arc::new(c)
}

pub fn point() -> FinCategory {
    FinCategory::discrete([sym("*")]).expect("point")
}

pub fn chain3() -> FinCategory {
    FinCategory::thin([n(0), n(1), n(2)], [(n(0), n(1)), (n(1), n(2))]).expect("chain")
}

pub fn cospan() -> FinCategory {
    FinCategory::thin(
        syms(&["a", "b", "c"]),
        [(sym("a"), sym("c")), (sym("b"), sym("c"))],
    )
    .expect("cospan")
}

/// `Z/2` as a one-object category with morphisms `e` and `g`.
pub fn z2() -> FinCategory {
    let els = FinSet::new(syms(&["e", "g"])).expect("set");
    FinCategory::monoid(
        &els,
        &sym("e"),
        |x, y| if x == y { sym("e") } else { sym("g") },
    )
    .expect("z2")
}

/// `x → y → z` with an involution `e` of `y` swapping two arrows
/// `f, f2: x → y`, and `g∘f = h1`, `g∘f2 = h2`, `g∘e = g`. Then
/// `(g∘e)∘f = h1` but `g∘(e∘f) = g∘f2 = h2`.
pub fn planted_nonassociative() -> FinCategory {
    let objects = syms(&["x", "y", "z"]);
    let m = |id: &str, s: &str, t: &str| (sym(id), sym(s), sym(t));
    let morphisms = vec![
        m("1x", "x", "x"),
        m("1y", "y", "y"),
        m("1z", "z", "z"),
        m("f", "x", "y"),
        m("f2", "x", "y"),
        m("e", "y", "y"),
        m("g", "y", "z"),
        m("h1", "x", "z"),
        m("h2", "x", "z"),
    ];
    let identities = BTreeMap::from([
        (sym("x"), sym("1x")),
        (sym("y"), sym("1y")),
        (sym("z"), sym("1z")),
    ]);
    let c = |g: &str, f: &str, gf: &str| (sym(g), sym(f), sym(gf));
    let compose = vec![
        c("g", "f", "h1"),
        c("g", "f2", "h2"),
        c("e", "f", "f2"),
        c("e", "f2", "f"),
        c("e", "e", "1y"),
        c("g", "e", "g"),
    ];
    FinCategory::new(objects, morphisms, identities, compose).expect("tables are well formed")
}

fn thin_functor(
    src: &Arc<FinCategory>,
    tgt: &Arc<FinCategory>,
    obj: &[(Atom, Atom)],
) -> FinFunctor {
    let obj_map: BTreeMap<Atom, Atom> = obj.iter().cloned().collect();
    let mor_map = src
        .morphisms()
        .map(|(f, a, b)| {
            (
                f.clone(),
                Atom::pair(obj_map[a].clone(), obj_map[b].clone()),
            )
        })
        .collect();
    FinFunctor::new(src.clone(), tgt.clone(), obj_map, mor_map).expect("functor")
}

/// Sends everything to the identity of the single object of `tgt`.
fn to_point(src: &Arc<FinCategory>, tgt: &Arc<FinCategory>) -> FinFunctor {
    let o = tgt.objects()[0].clone();
    let id = tgt.id(&o).expect("identity").clone();
    let obj_map = src
        .objects()
        .iter()
        .map(|a| (a.clone(), o.clone()))
        .collect();
    let mor_map = src
        .morphisms()
        .map(|(f, _, _)| (f.clone(), id.clone()))
        .collect();
    FinFunctor::new(src.clone(), tgt.clone(), obj_map, mor_map).expect("functor")
}

/// A co-presheaf on a thin category from fiber sizes and a rule
/// `act(a, b, x)` for the morphism `a ≤ b`.
fn thin_copresheaf(
    base: &Arc<FinCategory>,
    sizes: &[(Atom, usize)],
    act: impl Fn(&Atom, &Atom, &Atom) -> Atom,
) -> CoPresheaf {
    let sizes: BTreeMap<Atom, usize> = sizes.iter().cloned().collect();
    let cat = base.clone();
    CoPresheaf::tabulate(
        base.clone(),
        |o| Ok(FinSet::range(sizes[o])),
        |f, x| {
            let (a, b) = cat.endpoints(f)?;
            Ok(act(a, b, x))
        },
    )
    .expect("co-presheaf")
}

fn clamp(x: &Atom, size: usize) -> Atom {
    let v: usize = x.to_string().parse().expect("numeric element");
    n(v.min(size - 1))
}

fn matrix(nc: &Arc<FinCategory>, kc: &Arc<FinCategory>, sizes: &[&[usize]]) -> FinProfunctor {
    let ns = nc.objects().to_vec();
    let ks = kc.objects().to_vec();
    FinBifunctor::tabulate(
        nc.clone(),
        kc.clone(),
        |x, y| {
            let i = ns.iter().position(|o| o == x).expect("object");
            let j = ks.iter().position(|o| o == y).expect("object");
            Ok(FinSet::range(sizes[i][j]))
        },
        |_, _, e| Ok(e.clone()),
        |_, _, e| Ok(e.clone()),
    )
    .expect("matrix profunctor")
}

/// `p(n, *) = 𝒩(n, top)`, a profunctor `𝒩 ⇸ point`.
fn into_top(nc: &Arc<FinCategory>, top: &Atom) -> FinProfunctor {
    let cat = nc.clone();
    FinBifunctor::tabulate(
        nc.clone(),
        arc(point()),
        |x, _| Ok(cat.hom_set(x, top)),
        |f, _, u| Ok(cat.compose(u, f)?.clone()),
        |_, _, u| Ok(u.clone()),
    )
    .expect("profunctor")
}

/// `q(*, l) = 𝓛(bottom, l)`, a profunctor `point ⇸ 𝓛`.
fn out_of_bottom(lc: &Arc<FinCategory>, bottom: &Atom) -> FinProfunctor {
    let cat = lc.clone();
    FinBifunctor::tabulate(
        arc(point()),
        lc.clone(),
        |_, y| Ok(cat.hom_set(bottom, y)),
        |_, _, u| Ok(u.clone()),
        |_, g, u| Ok(cat.compose(g, u)?.clone()),
    )
    .expect("profunctor")
}

fn sized(base: &Arc<FinCategory>, sizes: &[usize]) -> CoPresheaf {
    let objs = base.objects().to_vec();
    CoPresheaf::tabulate(
        base.clone(),
        |o| {
            Ok(FinSet::range(
                sizes[objs.iter().position(|x| x == o).expect("object")],
            ))
        },
        |_, x| Ok(x.clone()),
    )
    .expect("discrete co-presheaf")
}

fn regular(m: FinMonoidalCategory) -> OpticSetting {
    let m = Arc::new(m);
    let act = m.regular_action().expect("regular action");
    OpticSetting::new(act.clone(), act).expect("setting")
}

fn ends(s: usize, a: usize, b: usize, t: usize) -> SetEndpoints {
    SetEndpoints {
        a: FinSet::range(a),
        b: FinSet::range(b),
        s: FinSet::range(s),
        t: FinSet::range(t),
    }
}

/// The bundled corpus.
pub fn bundled() -> Corpus {
    let arrow = arc(FinCategory::walking_arrow());
    let iso = arc(FinCategory::walking_iso());
    let disc3 = arc(FinCategory::discrete(syms(&["a", "b", "c"])).expect("discrete"));
    let disc2 = arc(FinCategory::discrete([n(0), n(1)]).expect("discrete"));
    let ch3 = arc(chain3());
    let csp = arc(cospan());
    let zz = arc(z2());
    let pt = arc(point());
    let ind2 = arc(FinCategory::indiscrete(syms(&["p", "q"])).expect("indiscrete"));
    let empty = arc(FinCategory::discrete(Vec::<Atom>::new()).expect("empty"));

    let categories: Named<FinCategory> = vec![
        ("chain3".into(), (*ch3).clone()),
        ("cospan".into(), (*csp).clone()),
        ("discrete3".into(), (*disc3).clone()),
        ("empty".into(), (*empty).clone()),
        ("indiscrete2".into(), (*ind2).clone()),
        ("point".into(), (*pt).clone()),
        ("walking_arrow".into(), (*arrow).clone()),
        ("walking_iso".into(), (*iso).clone()),
        ("z2".into(), (*zz).clone()),
    ];

    // x ↦ x mod 2 from {0,1,2} to {0,1}.
    let arrow_map = thin_copresheaf(&arrow, &[(n(0), 3), (n(1), 2)], |a, b, x| {
        if a == b {
            x.clone()
        } else {
            let v: usize = x.to_string().parse().expect("numeric");
            n(v % 2)
        }
    });
    let iso_swap = CoPresheaf::tabulate(
        iso.clone(),
        |_| Ok(FinSet::range(2)),
        |f, x| {
            let (a, b) = f.as_pair()?;
            Ok(if a == b {
                x.clone()
            } else if *x == n(0) {
                n(1)
            } else {
                n(0)
            })
        },
    )
    .expect("swap");
    let z2_swap = CoPresheaf::tabulate(
        zz.clone(),
        |_| Ok(FinSet::range(2)),
        |f, x| {
            Ok(if *f == sym("e") {
                x.clone()
            } else if *x == n(0) {
                n(1)
            } else {
                n(0)
            })
        },
    )
    .expect("z2 action");
    let z2_fix = CoPresheaf::tabulate(
        zz.clone(),
        |_| Ok(FinSet::range(3)),
        |f, x| {
            Ok(if *f == sym("e") || *x == n(2) {
                x.clone()
            } else if *x == n(0) {
                n(1)
            } else {
                n(0)
            })
        },
    )
    .expect("z2 action");
    let chain_incl = thin_copresheaf(&ch3, &[(n(0), 1), (n(1), 2), (n(2), 3)], |_, _, x| {
        x.clone()
    });
    let chain_collapse = thin_copresheaf(&ch3, &[(n(0), 3), (n(1), 2), (n(2), 1)], |_, b, x| {
        let size = [3, 2, 1][b.to_string().parse::<usize>().expect("numeric")];
        clamp(x, size)
    });
    let cospan_f = thin_copresheaf(
        &csp,
        &[(sym("a"), 2), (sym("b"), 1), (sym("c"), 2)],
        |a, b, x| {
            if a == b || *a == sym("a") {
                x.clone()
            } else {
                n(1)
            }
        },
    );

    let copresheaves: Named<CoPresheaf> = vec![
        (
            "arrow_const2".into(),
            CoPresheaf::constant(arrow.clone(), &FinSet::range(2)).unwrap(),
        ),
        (
            "arrow_empty_source".into(),
            thin_copresheaf(&arrow, &[(n(0), 0), (n(1), 2)], |_, _, x| x.clone()),
        ),
        ("arrow_mod2".into(), arrow_map.clone()),
        (
            "arrow_yoneda0".into(),
            CoPresheaf::yoneda(arrow.clone(), &n(0)).unwrap(),
        ),
        (
            "arrow_yoneda1".into(),
            CoPresheaf::yoneda(arrow.clone(), &n(1)).unwrap(),
        ),
        ("chain3_collapse".into(), chain_collapse.clone()),
        ("chain3_inclusions".into(), chain_incl.clone()),
        (
            "chain3_yoneda0".into(),
            CoPresheaf::yoneda(ch3.clone(), &n(0)).unwrap(),
        ),
        ("cospan_fold".into(), cospan_f.clone()),
        ("discrete3_sizes".into(), sized(&disc3, &[1, 0, 3])),
        (
            "indiscrete2_yoneda".into(),
            CoPresheaf::yoneda(ind2.clone(), &sym("p")).unwrap(),
        ),
        ("iso_swap".into(), iso_swap.clone()),
        (
            "iso_yoneda0".into(),
            CoPresheaf::yoneda(iso.clone(), &n(0)).unwrap(),
        ),
        (
            "point_four".into(),
            CoPresheaf::constant(pt.clone(), &FinSet::range(4)).unwrap(),
        ),
        ("z2_fix".into(), z2_fix.clone()),
        ("z2_swap".into(), z2_swap.clone()),
    ];

    let id_arrow = FinFunctor::identity(arrow.clone());
    let arrow_to_chain = thin_functor(&arrow, &ch3, &[(n(0), n(0)), (n(1), n(1))]);
    let arrow_to_chain_ends = thin_functor(&arrow, &ch3, &[(n(0), n(0)), (n(1), n(2))]);
    let point_to_arrow = thin_functor(&pt, &arrow, &[(sym("*"), n(0))]);
    let chain_to_arrow = thin_functor(&ch3, &arrow, &[(n(0), n(0)), (n(1), n(1)), (n(2), n(1))]);
    let arrow_to_iso = thin_functor(&arrow, &iso, &[(n(0), n(0)), (n(1), n(1))]);
    let iso_to_arrow_point = to_point(&iso, &pt);
    let disc2_to_arrow = thin_functor(&disc2, &arrow, &[(n(0), n(0)), (n(1), n(1))]);
    let disc3_fold = {
        let two = arc(FinCategory::discrete(syms(&["x", "y"])).unwrap());
        (
            thin_functor(
                &disc3,
                &two,
                &[
                    (sym("a"), sym("x")),
                    (sym("b"), sym("x")),
                    (sym("c"), sym("y")),
                ],
            ),
            to_point(&two, &pt),
        )
    };
    let cospan_to_arrow = thin_functor(
        &csp,
        &arrow,
        &[(sym("a"), n(0)), (sym("b"), n(0)), (sym("c"), n(1))],
    );
    let point_to_z2 = FinFunctor::new(
        pt.clone(),
        zz.clone(),
        BTreeMap::from([(sym("*"), sym("*"))]),
        BTreeMap::new(),
    )
    .unwrap();
    let chain_to_point = to_point(&ch3, &pt);
    let arrow_to_point = to_point(&arrow, &pt);
    let point_const2 = CoPresheaf::constant(pt.clone(), &FinSet::range(2)).unwrap();

    let chain = |f: &CoPresheaf, fs: &[&FinFunctor]| KanChain {
        copresheaf: f.clone(),
        functors: fs.iter().map(|x| (*x).clone()).collect(),
    };
    let kan: Named<KanChain> = vec![
        (
            "arrow_chain_point".into(),
            chain(
                &CoPresheaf::yoneda(arrow.clone(), &n(0)).unwrap(),
                &[&arrow_to_chain, &chain_to_point, &point_to_arrow],
            ),
        ),
        (
            "arrow_iso_point".into(),
            chain(
                &arrow_map,
                &[&arrow_to_iso, &iso_to_arrow_point, &point_to_arrow],
            ),
        ),
        (
            "arrow_point_point".into(),
            chain(
                &arrow_map,
                &[&arrow_to_point, &FinFunctor::identity(pt.clone())],
            ),
        ),
        (
            "chain_arrow_iso".into(),
            chain(&chain_collapse, &[&chain_to_arrow, &arrow_to_iso]),
        ),
        (
            "cospan_arrow_point".into(),
            chain(&cospan_f, &[&cospan_to_arrow, &arrow_to_point]),
        ),
        (
            "discrete_fold".into(),
            chain(&sized(&disc3, &[1, 0, 3]), &[&disc3_fold.0, &disc3_fold.1]),
        ),
        (
            "discrete_into_arrow".into(),
            chain(
                &sized(&disc2, &[2, 1]),
                &[&disc2_to_arrow, &arrow_to_chain_ends, &chain_to_point],
            ),
        ),
        (
            "identity_chain".into(),
            chain(&arrow_map, &[&id_arrow, &id_arrow, &id_arrow]),
        ),
        (
            "iso_point_arrow".into(),
            chain(&iso_swap, &[&iso_to_arrow_point, &point_to_arrow]),
        ),
        (
            "point_arrow_chain".into(),
            chain(
                &point_const2,
                &[&point_to_arrow, &arrow_to_chain_ends, &chain_to_arrow],
            ),
        ),
        (
            "z2_point_z2".into(),
            chain(&z2_swap, &[&to_point(&zz, &pt), &point_to_z2]),
        ),
    ];

    let n2 = arc(FinCategory::discrete(syms(&["n1", "n2"])).unwrap());
    let k1 = arc(FinCategory::discrete(syms(&["k1"])).unwrap());
    let l2 = arc(FinCategory::discrete(syms(&["l1", "l2"])).unwrap());
    let m1 = arc(FinCategory::discrete(syms(&["m1"])).unwrap());
    let matrix_a = CoPresheaf::tabulate(
        n2.clone(),
        |o| Ok(FinSet::range(if *o == sym("n1") { 1 } else { 2 })),
        |_, x| Ok(x.clone()),
    )
    .unwrap();
    let hom_arrow = hom_profunctor(&arrow).unwrap();
    let hom_iso = hom_profunctor(&iso).unwrap();
    let one = arc(FinCategory::discrete(syms(&["o"])).unwrap());
    let prof: Named<ProfCase> = vec![
        (
            "arrow_homs".into(),
            ProfCase {
                profunctors: vec![hom_arrow.clone(), hom_arrow.clone(), hom_arrow.clone()],
                copresheaf: arrow_map.clone(),
            },
        ),
        (
            "arrow_through_point".into(),
            ProfCase {
                profunctors: vec![
                    into_top(&arrow, &n(1)),
                    out_of_bottom(&arrow, &n(0)),
                    into_top(&arrow, &n(1)),
                ],
                copresheaf: arrow_map.clone(),
            },
        ),
        (
            "empty_middle".into(),
            ProfCase {
                profunctors: vec![
                    matrix(&disc2, &empty, &[&[], &[]]),
                    matrix(&empty, &one, &[]),
                    matrix(&one, &one, &[&[2]]),
                ],
                copresheaf: sized(&disc2, &[2, 1]),
            },
        ),
        (
            "iso_homs".into(),
            ProfCase {
                profunctors: vec![hom_iso.clone(), hom_iso.clone(), hom_iso],
                copresheaf: iso_swap.clone(),
            },
        ),
        (
            "matrix".into(),
            ProfCase {
                profunctors: vec![
                    matrix(&n2, &k1, &[&[2], &[3]]),
                    matrix(&k1, &l2, &[&[1, 2]]),
                    matrix(&l2, &m1, &[&[2], &[1]]),
                ],
                copresheaf: matrix_a,
            },
        ),
    ];

    let z2set = FinSet::range(2);
    let xor = |x: &Atom, y: &Atom| if x == y { n(0) } else { n(1) };
    let min = |x: &Atom, y: &Atom| x.min(y).clone();
    let mixed = {
        let m = Arc::new(FinMonoidalCategory::walking_arrow_max());
        let left = m.regular_action().unwrap();
        let right = m.trivial_action(iso.clone()).unwrap();
        OpticSetting::new(left, right).unwrap()
    };
    let settings: Named<OpticSetting> = vec![
        (
            "and_monoid".into(),
            regular(FinMonoidalCategory::commutative_monoid(&z2set, &n(1), min).unwrap()),
        ),
        (
            "arrow_max".into(),
            regular(FinMonoidalCategory::walking_arrow_max()),
        ),
        ("arrow_max_on_iso".into(), mixed),
        ("trivial".into(), regular(FinMonoidalCategory::trivial())),
        (
            "xor_discrete".into(),
            regular(FinMonoidalCategory::xor(false)),
        ),
        (
            "xor_indiscrete".into(),
            regular(FinMonoidalCategory::xor(true)),
        ),
        (
            "z2_monoid".into(),
            regular(FinMonoidalCategory::commutative_monoid(&z2set, &n(0), xor).unwrap()),
        ),
    ];

    let pairs = |s: &FinSet, b: &FinSet| s.product(b);
    let first_of_pair = {
        // s = a × c with a = {0,1,2}, c = {0,1}; get = π₁, put((x,c),y) = (y,c).
        let a = FinSet::range(3);
        let c = FinSet::range(2);
        let s = a.product(&c);
        let get = Func::try_tabulate(&s, |x| Ok(x.as_pair()?.0.clone())).unwrap();
        let put = Func::try_tabulate(&pairs(&s, &a), |x| {
            let (w, y) = x.as_pair()?;
            Ok(Atom::pair(y.clone(), w.as_pair()?.1.clone()))
        })
        .unwrap();
        ConcreteLens::new(
            SetEndpoints {
                a: a.clone(),
                b: a,
                s: s.clone(),
                t: s,
            },
            get,
            put,
        )
        .unwrap()
    };
    let constant_lens = {
        // get ignores s, put ignores s.
        let e = ends(2, 1, 2, 2);
        let get = Func::tabulate(&e.s, |_| n(0));
        let put = Func::try_tabulate(&pairs(&e.s, &e.b), |x| Ok(x.as_pair()?.1.clone())).unwrap();
        ConcreteLens::new(e, get, put).unwrap()
    };
    let identity_lens = {
        let e = ends(3, 3, 3, 3);
        let get = Func::identity(&e.s);
        let put = Func::try_tabulate(&pairs(&e.s, &e.b), |x| Ok(x.as_pair()?.1.clone())).unwrap();
        ConcreteLens::new(e, get, put).unwrap()
    };
    let lenses: Named<ConcreteLens> = vec![
        ("constant".into(), constant_lens),
        ("first_of_pair".into(), first_of_pair),
        ("identity3".into(), identity_lens),
    ];

    let option_prism = {
        // s = t = 1 + a with a = {0,1}: the empty case goes back to t.
        let a = FinSet::range(2);
        let s = FinSet::range(1).sum(&a);
        let matcher = Func::try_tabulate(&s, |x| {
            Ok(match x.as_sum()? {
                Either::Left(_) => Atom::inl(x.clone()),
                Either::Right(v) => Atom::inr(v.clone()),
            })
        })
        .unwrap();
        let build = Func::tabulate(&a, |x| Atom::inr(x.clone()));
        ConcretePrism::new(
            SetEndpoints {
                a: a.clone(),
                b: a,
                s: s.clone(),
                t: s,
            },
            matcher,
            build,
        )
        .unwrap()
    };
    let even_prism = {
        // s = t = {0,1,2,3}, a = b = {0,1}: matches evens as their halves.
        let e = ends(4, 2, 2, 4);
        let matcher = Func::tabulate(&e.s, |x| {
            let v: usize = x.to_string().parse().unwrap();
            if v.is_multiple_of(2) {
                Atom::inr(n(v / 2))
            } else {
                Atom::inl(x.clone())
            }
        });
        let build = Func::tabulate(&e.b, |y| {
            let v: usize = y.to_string().parse().unwrap();
            n(2 * v)
        });
        ConcretePrism::new(e, matcher, build).unwrap()
    };
    let never_prism = {
        let e = ends(2, 3, 1, 2);
        let matcher = Func::tabulate(&e.s, |x| Atom::inl(x.clone()));
        let build = Func::tabulate(&e.b, |_| n(0));
        ConcretePrism::new(e, matcher, build).unwrap()
    };
    let prisms: Named<ConcretePrism> = vec![
        ("evens".into(), even_prism),
        ("never".into(), never_prism),
        ("option".into(), option_prism),
    ];

    let polys = [
        ("zero", PolyFunctor::from_terms(&[])),
        ("one", PolyFunctor::from_terms(&[(1, 0)])),
        ("y", PolyFunctor::monomial(1)),
        ("y2", PolyFunctor::monomial(2)),
        ("y_plus_1", PolyFunctor::from_terms(&[(1, 1), (1, 0)])),
        ("two_y", PolyFunctor::from_terms(&[(2, 1)])),
        ("y2_plus_y", PolyFunctor::from_terms(&[(1, 2), (1, 1)])),
        ("three_y0", PolyFunctor::from_terms(&[(3, 0)])),
    ];
    let mut poly = Vec::new();
    for (pn, p) in &polys {
        for (qn, q) in &polys {
            poly.push((
                format!("{pn}__{qn}"),
                PolyPair {
                    source: p.clone(),
                    target: q.clone(),
                },
            ));
        }
    }
    // y³ only against y: the oracle needs the skeleton up to 4 here.
    let (y, y3) = (PolyFunctor::monomial(1), PolyFunctor::monomial(3));
    poly.push((
        "y3__y".into(),
        PolyPair {
            source: y3.clone(),
            target: y.clone(),
        },
    ));
    poly.push((
        "y__y3".into(),
        PolyPair {
            source: y,
            target: y3,
        },
    ));
    poly.sort_by(|a, b| a.0.cmp(&b.0));

    let compound: Named<CompoundCase> = vec![(
        "arrow_point_arrow".into(),
        CompoundCase {
            profunctors: vec![
                into_top(&arrow, &n(1)),
                out_of_bottom(&arrow, &n(0)),
                into_top(&arrow, &n(1)),
            ],
            ends: vec![
                (
                    CoPresheaf::yoneda(arrow.clone(), &n(0)).unwrap(),
                    CoPresheaf::constant(arrow.clone(), &FinSet::range(2)).unwrap(),
                ),
                (
                    CoPresheaf::constant(pt.clone(), &FinSet::range(1)).unwrap(),
                    CoPresheaf::constant(pt.clone(), &FinSet::range(2)).unwrap(),
                ),
                (
                    CoPresheaf::yoneda(arrow.clone(), &n(0)).unwrap(),
                    CoPresheaf::constant(arrow.clone(), &FinSet::range(2)).unwrap(),
                ),
                (
                    CoPresheaf::constant(pt.clone(), &FinSet::range(2)).unwrap(),
                    CoPresheaf::constant(pt.clone(), &FinSet::range(1)).unwrap(),
                ),
            ],
            limit: 3,
        },
    )];

    Corpus {
        categories,
        copresheaves,
        kan,
        prof,
        settings,
        lenses,
        prisms,
        poly,
        compound,
    }
}

/// The fixture with a planted associativity violation.
pub fn planted() -> Corpus {
    Corpus {
        categories: vec![("planted_associativity".into(), planted_nonassociative())],
        ..Corpus::default()
    }
}

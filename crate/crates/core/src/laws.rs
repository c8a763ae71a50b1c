//! Law suites over a corpus and their reports.
//!
//! Every law returns the number of instances it checked, or a
//! counterexample. Suites run in registry order and reports contain no
//! timing, so the rendered output depends only on the corpus and the
//! configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::atom::{Atom, FinSet, Func};
use crate::coend::{
    coend, coyoneda_check, coyoneda_integrand, fubini_check, point_bifunctor,
    product_preservation_check, FinBifunctor,
};
use crate::corpus::{CompoundCase, Corpus};
use crate::error::Error;
use crate::fincat::{enumerate_nats, CoPresheaf, FinCategory, NatTransformation};
use crate::format::{self, CategoryDto, CoPresheafDto, Dto, ProfunctorDto, SettingDto};
use crate::kan::{
    kan_composition_check, left_kan, pi_associative, pi_identity_check, pi_unital, pi_well_defined,
    PiProfunctor,
};
use crate::oracle::{quotient_partition, zigzag_classes};
use crate::poly::{
    coend_witness_check, compose_polylens, compound_compose, enumerate_polylenses, nat_oracle_on,
    ommatidium_transport_invariance, oracle_agrees, polylens_count, polylens_to_nat, CompoundOptic,
    Ommatidium, PolyFunctor, PolyLens,
};
use crate::prof::{
    action_composition_check, action_unit_check, associativity_check, discrete_collapse_check,
    hom_profunctor, prof_action, unit_check, ProfMorphism,
};
use crate::simple_optics::{
    lens_abstract, lens_concretize, prism_abstract, prism_concretize, ConcreteLens, ConcretePrism,
    OpticSpace, SetAction, SetEndpoints, SetOptic,
};

/// Configuration shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest finite set size used by brute-force checks.
    pub max_card: usize,
    /// Samples per function space when a space is too large to enumerate.
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            max_card: 4,
            samples: 3,
        }
    }
}

/// Number of instances checked, or a counterexample.
pub type Outcome = std::result::Result<usize, String>;

type LawFn = fn(&Corpus, &Config) -> Outcome;

pub struct Law {
    pub name: &'static str,
    pub run: LawFn,
}

pub struct Suite {
    pub name: &'static str,
    pub laws: &'static [Law],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    pub cases: usize,
    /// Counterexample on failure, empty otherwise.
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawSuiteReport {
    pub suite: String,
    pub corpus: String,
    pub laws: Vec<LawResult>,
    /// Not part of the rendered report.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl LawSuiteReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

macro_rules! law {
    ($name:literal, $f:path) => {
        Law {
            name: $name,
            run: $f,
        }
    };
}

pub static REGISTRY: &[Suite] = &[
    Suite {
        name: "FINCAT",
        laws: &[
            law!("category-axioms", category_axioms),
            law!("functor-composition", functor_composition),
            law!("copresheaf-functoriality", copresheaf_functoriality),
            law!("yoneda-count", yoneda_count),
            law!("opposite-product", opposite_product),
        ],
    },
    Suite {
        name: "COEND",
        laws: &[
            law!("cowedge", coend_cowedge),
            law!("zigzag-oracle", coend_oracle),
            law!("idempotence", coend_idempotence),
            law!("co-yoneda", coend_coyoneda),
            law!("products-preserve", coend_products),
            law!("fubini", coend_fubini),
        ],
    },
    Suite {
        name: "KAN",
        laws: &[
            law!("composition", kan_composition),
            law!("yoneda-is-pi", kan_yoneda_is_pi),
        ],
    },
    Suite {
        name: "PI",
        laws: &[
            law!("well-defined", pi_well_defined_law),
            law!("associativity", pi_associativity_law),
            law!("unit", pi_unit_law),
            law!("identity-is-hom", pi_identity_law),
        ],
    },
    Suite {
        name: "PROF",
        laws: &[
            law!("discrete-action-cardinality", prof_action_cardinality),
            law!("unit", prof_unit),
            law!("action-unit", prof_action_unit),
            law!("associativity", prof_associativity),
            law!("action-composition", prof_action_composition),
            law!("two-cell-functoriality", prof_two_cells),
            law!("discrete-collapse", prof_discrete_collapse),
        ],
    },
    Suite {
        name: "OPTIC-EXACT",
        laws: &[
            law!("coend-oracle", exact_oracle),
            law!("soundness", exact_soundness),
            law!("unit", exact_unit),
            law!("associativity", exact_associativity),
        ],
    },
    Suite {
        name: "OPTIC-NORMALFORM",
        laws: &[
            law!("lens-round-trip", nf_lens_round_trip),
            law!("prism-round-trip", nf_prism_round_trip),
            law!("lens-cardinality", nf_lens_cardinality),
            law!("prism-cardinality", nf_prism_cardinality),
            law!("slide-invariance", nf_slide),
            law!("unit", nf_unit),
            law!("associativity", nf_associativity),
        ],
    },
    Suite {
        name: "POLY",
        laws: &[
            law!("nat-count", poly_nat_count),
            law!("nat-injective", poly_nat_injective),
            law!("compose-pointwise", poly_compose_pointwise),
            law!("unit-and-associativity", poly_category_laws),
            law!("ommatidium-round-trip", poly_ommatidium_round_trip),
            law!("ommatidium-transport", poly_ommatidium_transport),
        ],
    },
    Suite {
        name: "COMPOUND",
        laws: &[
            law!("discrete-composition", compound_discrete_composition),
            law!("discrete-unit-and-associativity", compound_discrete_laws),
            law!("unit-witness", compound_unit_witness),
            law!("associativity-witness", compound_associativity_witness),
            law!("witness-check", compound_witness_check),
        ],
    },
    Suite {
        name: "CORPUS",
        laws: &[
            law!("round-trip", corpus_round_trip),
            law!("coverage", corpus_coverage),
        ],
    },
];

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.name).collect()
}

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    REGISTRY.iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

pub fn run_suite(suite: &Suite, corpus: &Corpus, label: &str, config: &Config) -> LawSuiteReport {
    let start = Instant::now();
    let laws = suite
        .laws
        .iter()
        .map(|law| {
            let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                (law.run)(corpus, config)
            }))
            .unwrap_or_else(|_| Err("panicked".to_string()));
            match outcome {
                Ok(cases) => LawResult {
                    law: law.name.into(),
                    passed: true,
                    cases,
                    detail: String::new(),
                },
                Err(detail) => LawResult {
                    law: law.name.into(),
                    passed: false,
                    cases: 0,
                    detail,
                },
            }
        })
        .collect();
    LawSuiteReport {
        suite: suite.name.into(),
        corpus: label.into(),
        laws,
        wall_time: start.elapsed(),
    }
}

/// Runs every suite, one thread per suite. Reports come back in registry
/// order.
pub fn run_all(corpus: &Corpus, label: &str, config: &Config) -> Vec<LawSuiteReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = REGISTRY
            .iter()
            .map(|s| scope.spawn(move || run_suite(s, corpus, label, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite runner panicked"))
            .collect()
    })
}

/// `SUITE/LAW: PASS (n cases)` or `SUITE/LAW: FAIL (counterexample)`, one
/// line per law, preceded by a corpus line per suite.
pub fn render_text(reports: &[LawSuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("# {} corpus={}\n", r.suite, r.corpus));
        for l in &r.laws {
            if l.passed {
                out.push_str(&format!(
                    "{}/{}: PASS ({} cases)\n",
                    r.suite, l.law, l.cases
                ));
            } else {
                out.push_str(&format!("{}/{}: FAIL ({})\n", r.suite, l.law, l.detail));
            }
        }
    }
    out
}

pub fn render_json(reports: &[LawSuiteReport]) -> String {
    format::to_pretty(&reports)
}

// ---------------------------------------------------------------- FINCAT

fn category_axioms(c: &Corpus, _: &Config) -> Outcome {
    for (name, cat) in &c.categories {
        if let Some(v) = cat.validate().violations.first() {
            return Err(format!("{name}: {v}"));
        }
    }
    Ok(c.categories.len())
}

fn functor_composition(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        for (i, f) in ch.functors.iter().enumerate() {
            let problems = f.validate();
            ensure!(problems.is_empty(), "{name}: functor {i}: {}", problems[0]);
            n += 1;
        }
        for (i, w) in ch.functors.windows(2).enumerate() {
            let gf = w[0].then(&w[1]).map_err(err)?;
            let problems = gf.validate();
            ensure!(
                problems.is_empty(),
                "{name}: composite {i}: {}",
                problems[0]
            );
            for (m, _, _) in w[0].source().morphisms() {
                let direct = gf.on_mor(m).map_err(err)?;
                let stepwise = w[1].on_mor(w[0].on_mor(m).map_err(err)?).map_err(err)?;
                ensure!(
                    direct == stepwise,
                    "{name}: composite {i} at {m}: {direct} vs {stepwise}"
                );
                n += 1;
            }
        }
    }
    Ok(n)
}

fn all_copresheaves(c: &Corpus) -> Vec<(String, &CoPresheaf)> {
    let mut out: Vec<(String, &CoPresheaf)> =
        c.copresheaves.iter().map(|(n, f)| (n.clone(), f)).collect();
    out.extend(
        c.kan
            .iter()
            .map(|(n, k)| (format!("kan/{n}"), &k.copresheaf)),
    );
    out.extend(
        c.prof
            .iter()
            .map(|(n, p)| (format!("prof/{n}"), &p.copresheaf)),
    );
    out
}

fn copresheaf_functoriality(c: &Corpus, _: &Config) -> Outcome {
    let all = all_copresheaves(c);
    for (name, f) in &all {
        let problems = f.validate();
        ensure!(problems.is_empty(), "{name}: {}", problems[0]);
    }
    Ok(all.len())
}

fn yoneda_count(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, g) in all_copresheaves(c) {
        let base = g.base();
        for a in base.objects() {
            let y = CoPresheaf::yoneda(base.clone(), a).map_err(err)?;
            let count = enumerate_nats(&y, g).map_err(err)?.len();
            let expected = g.fiber(a).map_err(err)?.len();
            ensure!(
                count == expected,
                "{name} at {a}: {count} transformations, fiber has {expected}"
            );
            n += 1;
        }
    }
    Ok(n)
}

fn opposite_product(c: &Corpus, _: &Config) -> Outcome {
    let cats: Vec<(&str, &FinCategory)> = c
        .valid_categories()
        .into_iter()
        .filter(|(_, x)| x.morphism_count() <= 9)
        .collect();
    let mut n = 0;
    for (an, a) in &cats {
        ensure!(
            a.opposite().opposite() == **a,
            "{an}: opposite is not an involution"
        );
        for (bn, b) in &cats {
            let lhs = a.product(b).opposite();
            let rhs = a.opposite().product(&b.opposite());
            ensure!(
                lhs == rhs,
                "({an} × {bn})^op differs from {an}^op × {bn}^op"
            );
            ensure!(
                lhs.validate().is_valid(),
                "({an} × {bn})^op is not a category"
            );
            n += 1;
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- COEND

/// Bifunctors for the generic coend laws: hom of every valid category,
/// every corpus profunctor, and every co-Yoneda integrand.
fn coend_inputs(c: &Corpus) -> std::result::Result<Vec<(String, FinBifunctor)>, String> {
    let mut out = Vec::new();
    for (name, cat) in c.valid_categories() {
        out.push((
            format!("hom/{name}"),
            hom_profunctor(&Arc::new(cat.clone())).map_err(err)?,
        ));
    }
    for (name, case) in &c.prof {
        for (i, p) in case.profunctors.iter().enumerate() {
            out.push((format!("prof/{name}/{i}"), p.clone()));
        }
    }
    for (name, f) in &c.copresheaves {
        for a in f.base().objects() {
            out.push((
                format!("coyoneda/{name}/{a}"),
                coyoneda_integrand(f, a).map_err(err)?,
            ));
        }
    }
    Ok(out)
}

fn is_endo(d: &FinBifunctor) -> bool {
    d.contra() == d.co()
}

fn coend_cowedge(c: &Corpus, _: &Config) -> Outcome {
    let inputs = coend_inputs(c)?;
    let mut n = 0;
    for (name, d) in inputs.iter().filter(|(_, d)| is_endo(d)) {
        let q = coend(d).map_err(err)?;
        q.verify_cowedge(d).map_err(|e| format!("{name}: {e}"))?;
        n += 1;
    }
    Ok(n)
}

fn coend_oracle(c: &Corpus, _: &Config) -> Outcome {
    let inputs = coend_inputs(c)?;
    let mut n = 0;
    for (name, d) in inputs.iter().filter(|(_, d)| is_endo(d)) {
        let q = coend(d).map_err(err)?;
        let oracle = zigzag_classes(d).map_err(err)?;
        ensure!(
            quotient_partition(&q) == oracle,
            "{name}: union-find classes differ from the zig-zag closure"
        );
        n += 1;
    }
    Ok(n)
}

fn coend_idempotence(c: &Corpus, _: &Config) -> Outcome {
    let inputs = coend_inputs(c)?;
    let mut n = 0;
    for (name, d) in inputs.iter().filter(|(_, d)| is_endo(d)) {
        let q = coend(d).map_err(err)?;
        let again = coend(&point_bifunctor(q.carrier()).map_err(err)?).map_err(err)?;
        ensure!(
            again.len() == q.len(),
            "{name}: {} classes become {}",
            q.len(),
            again.len()
        );
        ensure!(
            again.classes().values().all(|m| m.len() == 1),
            "{name}: second quotient glues classes"
        );
        n += 1;
    }
    Ok(n)
}

fn coend_coyoneda(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, f) in all_copresheaves(c) {
        for a in f.base().objects() {
            let w = coyoneda_check(f, a).map_err(|e| format!("{name} at {a}: {e}"))?;
            ensure!(
                w.codomain() == f.fiber(a).map_err(err)?,
                "{name} at {a}: witness lands in the wrong set"
            );
            n += 1;
        }
    }
    Ok(n)
}

fn coend_products(c: &Corpus, _: &Config) -> Outcome {
    let inputs = coend_inputs(c)?;
    let mut n = 0;
    for (name, d) in inputs.iter().filter(|(_, d)| is_endo(d)) {
        let size = coend(d).map_err(err)?.len();
        for k in 0..=2 {
            let w = product_preservation_check(d, &FinSet::range(k))
                .map_err(|e| format!("{name} × {k}: {e}"))?;
            ensure!(
                w.domain().len() == k * size,
                "{name} × {k}: carrier has {} classes",
                w.domain().len()
            );
            n += 1;
        }
    }
    Ok(n)
}

/// `D((x₁,x₂),(y₁,y₂)) = p(x₁,y₁) × q(x₂,y₂)` over the product category.
pub fn external_product(p: &FinBifunctor, q: &FinBifunctor) -> crate::error::Result<FinBifunctor> {
    let cd = Arc::new(p.contra().product(q.contra()));
    FinBifunctor::tabulate(
        cd.clone(),
        cd,
        |x, y| {
            let ((x1, x2), (y1, y2)) = (x.as_pair()?, y.as_pair()?);
            Ok(p.fiber(x1, y1)?.product(q.fiber(x2, y2)?))
        },
        |f, y, e| {
            let ((f1, f2), (y1, y2), (e1, e2)) = (f.as_pair()?, y.as_pair()?, e.as_pair()?);
            Ok(Atom::pair(
                p.left(f1, y1, e1)?.clone(),
                q.left(f2, y2, e2)?.clone(),
            ))
        },
        |x, g, e| {
            let ((x1, x2), (g1, g2), (e1, e2)) = (x.as_pair()?, g.as_pair()?, e.as_pair()?);
            Ok(Atom::pair(
                p.right(x1, g1, e1)?.clone(),
                q.right(x2, g2, e2)?.clone(),
            ))
        },
    )
}

fn coend_fubini(c: &Corpus, _: &Config) -> Outcome {
    let cats: Vec<(&str, Arc<FinCategory>)> = c
        .valid_categories()
        .into_iter()
        .filter(|(_, x)| x.morphism_count() <= 4)
        .map(|(n, x)| (n, Arc::new(x.clone())))
        .collect();
    let mut n = 0;
    for (an, a) in &cats {
        for (bn, b) in &cats {
            let d = external_product(
                &hom_profunctor(a).map_err(err)?,
                &hom_profunctor(b).map_err(err)?,
            )
            .map_err(err)?;
            let w = fubini_check(a, b, &d).map_err(|e| format!("hom/{an} ⊠ hom/{bn}: {e}"))?;
            w.interchange()
                .map_err(|e| format!("hom/{an} ⊠ hom/{bn}: {e}"))?;
            n += 1;
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- KAN

fn kan_composition(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        if ch.functors.len() < 2 {
            continue;
        }
        kan_composition_check(&ch.copresheaf, &ch.functors[0], &ch.functors[1])
            .map_err(|e| format!("{name}: {e}"))?;
        n += 1;
        if ch.functors.len() >= 3 {
            let lan = left_kan(&ch.copresheaf, &ch.functors[0]).map_err(err)?;
            kan_composition_check(&lan.copresheaf, &ch.functors[1], &ch.functors[2])
                .map_err(|e| format!("{name} (second step): {e}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn kan_yoneda_is_pi(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        for (i, p) in ch.functors.iter().enumerate() {
            let pi = PiProfunctor::new(p).map_err(err)?;
            for a in p.source().objects() {
                let lan = left_kan(&CoPresheaf::yoneda(p.source().clone(), a).map_err(err)?, p)
                    .map_err(err)?;
                for d in p.target().objects() {
                    ensure!(
                        lan.copresheaf.fiber(d).map_err(err)? == pi.carrier(a, d).map_err(err)?,
                        "{name}: functor {i}: Lan 𝒴_{a} at {d} differs from Π"
                    );
                }
                for (g, _, _) in p.target().morphisms() {
                    let right = &pi.profunctor().right_tables()[&(a.clone(), g.clone())];
                    ensure!(
                        lan.copresheaf.action(g).map_err(err)? == right,
                        "{name}: functor {i}: action of {g} on Lan 𝒴_{a} differs from Π"
                    );
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- PI

fn pi_well_defined_law(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        for w in ch.functors.windows(2) {
            let p = PiProfunctor::new(&w[0]).map_err(err)?;
            let q = PiProfunctor::new(&w[1]).map_err(err)?;
            let qp = PiProfunctor::new(&w[0].then(&w[1]).map_err(err)?).map_err(err)?;
            n += pi_well_defined(&p, &q, &qp).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(n)
}

fn pi_associativity_law(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        for w in ch.functors.windows(3) {
            let ps: Vec<PiProfunctor> = w
                .iter()
                .map(PiProfunctor::new)
                .collect::<crate::error::Result<_>>()
                .map_err(err)?;
            n += pi_associative(&ps[0], &ps[1], &ps[2]).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(n)
}

fn pi_unit_law(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, ch) in &c.kan {
        for p in &ch.functors {
            n += pi_unital(&PiProfunctor::new(p).map_err(err)?)
                .map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(n)
}

fn pi_identity_law(c: &Corpus, _: &Config) -> Outcome {
    let cats = c.valid_categories();
    for (name, cat) in &cats {
        pi_identity_check(&Arc::new((*cat).clone())).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(cats.len())
}

// ---------------------------------------------------------------- PROF

fn prof_action_cardinality(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        let (Some(p), a) = (case.profunctors.first(), &case.copresheaf) else {
            continue;
        };
        if !p.contra().is_discrete() {
            continue;
        }
        let act = prof_action(p, a).map_err(err)?;
        for k in p.co().objects() {
            let expected: usize = p
                .contra()
                .objects()
                .iter()
                .map(|x| Ok(a.fiber(x)?.len() * p.fiber(x, k)?.len()))
                .sum::<crate::error::Result<usize>>()
                .map_err(err)?;
            let got = act.copresheaf.fiber(k).map_err(err)?.len();
            ensure!(
                got == expected,
                "{name} at {k}: |(p•a)(k)| = {got}, Σ |a(n)|·|p(n,k)| = {expected}"
            );
            n += 1;
        }
    }
    Ok(n)
}

fn prof_unit(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        for (i, p) in case.profunctors.iter().enumerate() {
            unit_check(p).map_err(|e| format!("{name}/{i}: {e}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn prof_action_unit(c: &Corpus, _: &Config) -> Outcome {
    let all = all_copresheaves(c);
    for (name, a) in &all {
        action_unit_check(a).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(all.len())
}

fn prof_associativity(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        for w in case.profunctors.windows(3) {
            associativity_check(&w[0], &w[1], &w[2]).map_err(|e| format!("{name}: {e}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn prof_action_composition(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        let mut a = case.copresheaf.clone();
        for (i, w) in case.profunctors.windows(2).enumerate() {
            let r = action_composition_check(&w[0], &w[1], &a)
                .map_err(|e| format!("{name} step {i}: {e}"))?;
            a = r.inner.copresheaf.clone();
            n += 1;
        }
    }
    Ok(n)
}

/// Identity 2-cells and the unit isomorphisms, pushed through `• a`.
fn prof_two_cells(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        let Some(p) = case.profunctors.first() else {
            continue;
        };
        let a = &case.copresheaf;
        let units = unit_check(p).map_err(err)?;
        let cells = [
            ProfMorphism::identity(p),
            ProfMorphism::from_iso(&units.hom_left.profunctor, p, &units.left).map_err(err)?,
            ProfMorphism::from_iso(&units.hom_right.profunctor, p, &units.right).map_err(err)?,
        ];
        for (i, h) in cells.iter().enumerate() {
            ensure!(
                h.naturality_failures().is_empty(),
                "{name}: 2-cell {i} is not natural"
            );
            let (src, tgt, nat) = h
                .on_action(a)
                .map_err(|e| format!("{name}: 2-cell {i}: {e}"))?;
            ensure!(
                nat.naturality_failures().is_empty()
                    && *nat.source() == src.copresheaf
                    && *nat.target() == tgt.copresheaf,
                "{name}: 2-cell {i} does not act naturally"
            );
            n += 1;
        }
        // Identity 2-cells act as identities.
        let (src, _, nat) = cells[0].on_action(a).map_err(err)?;
        ensure!(
            nat == NatTransformation::identity(&src.copresheaf),
            "{name}: identity 2-cell acts non-trivially"
        );
    }
    Ok(n)
}

fn prof_discrete_collapse(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.prof {
        for w in case.profunctors.windows(2) {
            if w[0].contra().is_discrete() && w[0].co().is_discrete() && w[1].co().is_discrete() {
                n += discrete_collapse_check(&w[0], &w[1]).map_err(|e| format!("{name}: {e}"))?;
            }
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- OPTIC-EXACT

fn exact_oracle(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, s) in &c.settings {
        for e in s.all_endpoints() {
            let space = s.space(&e).map_err(err)?;
            let oracle = zigzag_classes(&space.integrand).map_err(err)?;
            ensure!(
                quotient_partition(&space.quotient) == oracle,
                "{name} at {e}: classes differ from the zig-zag closure"
            );
            n += 1;
        }
    }
    Ok(n)
}

fn spaces(
    s: &crate::simple_optics::OpticSetting,
) -> std::result::Result<BTreeMap<crate::simple_optics::Endpoints, OpticSpace>, String> {
    s.all_endpoints()
        .into_iter()
        .map(|e| Ok((e.clone(), s.space(&e).map_err(err)?)))
        .collect()
}

fn hop(x: &(Atom, Atom), y: &(Atom, Atom)) -> crate::simple_optics::Endpoints {
    crate::simple_optics::Endpoints {
        a: x.0.clone(),
        b: x.1.clone(),
        s: y.0.clone(),
        t: y.1.clone(),
    }
}

fn object_pairs(s: &crate::simple_optics::OpticSetting) -> Vec<(Atom, Atom)> {
    s.left()
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
        .collect()
}

/// Class-level composition through the coend carriers agrees with
/// composing representatives, for every pair of classes.
fn exact_soundness(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, s) in &c.settings {
        let sp = spaces(s)?;
        let pairs = object_pairs(s);
        for p0 in &pairs {
            for p1 in &pairs {
                for p2 in &pairs {
                    let (e1, e2, e3) = (hop(p0, p1), hop(p1, p2), hop(p0, p2));
                    let (first, second, result) = (&sp[&e1], &sp[&e2], &sp[&e3]);
                    for c1 in first.quotient.carrier() {
                        for c2 in second.quotient.carrier() {
                            let cls = s
                                .compose_classes(first, c1, second, c2, result)
                                .map_err(|e| format!("{name} at {e1} then {e2}: {e}"))?;
                            let reps = (
                                first.members(c1).map_err(err)?.remove(0),
                                second.members(c2).map_err(err)?.remove(0),
                            );
                            let direct = s.compose(&reps.0, &reps.1).map_err(err)?;
                            ensure!(
                                *result.class_of(&direct).map_err(err)? == cls,
                                "{name}: {c1} then {c2} lands outside {cls}"
                            );
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

fn exact_unit(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, s) in &c.settings {
        for (e, sp) in spaces(s)? {
            for o in sp.optics() {
                let cls = sp.class_of(&o).map_err(err)?;
                let left = s
                    .compose(&s.identity(&e.a, &e.b).map_err(err)?, &o)
                    .map_err(err)?;
                let right = s
                    .compose(&o, &s.identity(&e.s, &e.t).map_err(err)?)
                    .map_err(err)?;
                ensure!(
                    sp.class_of(&left).map_err(err)? == cls,
                    "{name}: id∘{o:?} leaves its class"
                );
                ensure!(
                    sp.class_of(&right).map_err(err)? == cls,
                    "{name}: {o:?}∘id leaves its class"
                );
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Every chain of three class representatives through every triple of
/// hops, with representatives taken one per class.
fn exact_associativity(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, s) in &c.settings {
        let sp = spaces(s)?;
        let reps: BTreeMap<_, Vec<_>> = sp
            .iter()
            .map(|(e, space)| {
                let r = space
                    .quotient
                    .carrier()
                    .iter()
                    .map(|cls| Ok(space.members(cls)?.remove(0)))
                    .collect::<crate::error::Result<Vec<_>>>()?;
                Ok((e.clone(), r))
            })
            .collect::<crate::error::Result<_>>()
            .map_err(err)?;
        let pairs = object_pairs(s);
        for p0 in &pairs {
            for p1 in &pairs {
                for p2 in &pairs {
                    for p3 in &pairs {
                        let whole = &sp[&hop(p0, p3)];
                        for o1 in &reps[&hop(p0, p1)] {
                            for o2 in &reps[&hop(p1, p2)] {
                                let o12 = s.compose(o1, o2).map_err(err)?;
                                for o3 in &reps[&hop(p2, p3)] {
                                    let l = s.compose(&o12, o3).map_err(err)?;
                                    let r = s
                                        .compose(o1, &s.compose(o2, o3).map_err(err)?)
                                        .map_err(err)?;
                                    ensure!(
                                        whole.class_of(&l).map_err(err)? == whole.class_of(&r).map_err(err)?,
                                        "{name}: ({o1:?}∘{o2:?})∘{o3:?} and the other bracketing differ"
                                    );
                                    n += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- OPTIC-NORMALFORM

/// `k` functions `dom → cod` spread evenly through the lexicographic
/// enumeration, or all of them when there are at most `k`.
pub fn sample_functions(dom: &FinSet, cod: &FinSet, k: usize) -> Vec<Func> {
    let radix = cod.len() as u128;
    let total = radix.checked_pow(dom.len() as u32).unwrap_or(u128::MAX);
    if total == 0 || k == 0 {
        return Vec::new();
    }
    let picks: Vec<u128> = if total <= k as u128 {
        (0..total).collect()
    } else {
        let k = k as u128;
        (0..k)
            .map(|i| ((2 * i + 1) * (total / (2 * k))).min(total - 1))
            .collect()
    };
    picks
        .into_iter()
        .map(|mut idx| {
            let mut pairs = Vec::with_capacity(dom.len());
            for x in dom.iter().rev() {
                pairs.push((x.clone(), cod.as_slice()[(idx % radix) as usize].clone()));
                idx /= radix;
            }
            Func::from_pairs(pairs)
        })
        .collect()
}

/// All size tuples `(s, a, b, t)` with entries at most `max`.
fn endpoint_sizes(max: usize) -> Vec<SetEndpoints> {
    let mut out = Vec::new();
    for s in 0..=max {
        for a in 0..=max {
            for b in 0..=max {
                for t in 0..=max {
                    out.push(SetEndpoints {
                        a: FinSet::range(a),
                        b: FinSet::range(b),
                        s: FinSet::range(s),
                        t: FinSet::range(t),
                    });
                }
            }
        }
    }
    out
}

fn sampled_lenses(cfg: &Config) -> Vec<ConcreteLens> {
    let mut out = Vec::new();
    for e in endpoint_sizes(cfg.max_card) {
        for get in sample_functions(&e.s, &e.a, cfg.samples) {
            for put in sample_functions(&e.s.product(&e.b), &e.t, cfg.samples) {
                out.push(ConcreteLens {
                    endpoints: e.clone(),
                    get: get.clone(),
                    put,
                });
            }
        }
    }
    out
}

fn sampled_prisms(cfg: &Config) -> Vec<ConcretePrism> {
    let mut out = Vec::new();
    for e in endpoint_sizes(cfg.max_card) {
        for matcher in sample_functions(&e.s, &e.t.sum(&e.a), cfg.samples) {
            for build in sample_functions(&e.b, &e.t, cfg.samples) {
                out.push(ConcretePrism {
                    endpoints: e.clone(),
                    matcher: matcher.clone(),
                    build,
                });
            }
        }
    }
    out
}

/// Optics with residual sizes `0..=2` under `act`, sampled per endpoint
/// tuple.
fn sampled_optics(act: SetAction, cfg: &Config, max: usize) -> Vec<SetOptic> {
    let mut out = Vec::new();
    for e in endpoint_sizes(max) {
        for m in 0..=2 {
            let m = FinSet::range(m);
            let ma = act.apply(&m, &e.a);
            let mb = act.apply(&m, &e.b);
            for forward in sample_functions(&e.s, &ma, cfg.samples) {
                for backward in sample_functions(&mb, &e.t, cfg.samples) {
                    out.push(SetOptic {
                        action: act,
                        endpoints: e.clone(),
                        residual: m.clone(),
                        forward: forward.clone(),
                        backward,
                    });
                }
            }
        }
    }
    out
}

/// `concretize ∘ abstract = id` on tables, and every optic is one slide
/// away from the abstraction of its concretization.
fn nf_lens_round_trip(c: &Corpus, cfg: &Config) -> Outcome {
    let mut n = 0;
    let corpus = c.lenses.iter().map(|(k, l)| (k.clone(), l.clone()));
    let sampled = sampled_lenses(cfg)
        .into_iter()
        .map(|l| ("sampled".to_string(), l));
    for (name, l) in corpus.chain(sampled) {
        let back = lens_concretize(&lens_abstract(&l).map_err(err)?).map_err(err)?;
        ensure!(back == l, "{name}: concretize(abstract(l)) ≠ l for {l:?}");
        n += 1;
    }
    for o in sampled_optics(SetAction::Product, cfg, cfg.max_card.min(3)) {
        let r = lens_abstract(&lens_concretize(&o).map_err(err)?).map_err(err)?;
        let h = Func::try_tabulate(&o.endpoints.s, |x| {
            Ok(o.forward.apply(x)?.as_pair()?.0.clone())
        })
        .map_err(err)?;
        let (orig, moved) = r.slide(&o.residual, &h, &o.backward).map_err(err)?;
        ensure!(
            orig == r && moved == o,
            "no slide from abstract(concretize(o)) to o for {o:?}"
        );
        n += 1;
    }
    Ok(n)
}

fn nf_prism_round_trip(c: &Corpus, cfg: &Config) -> Outcome {
    let mut n = 0;
    let corpus = c.prisms.iter().map(|(k, p)| (k.clone(), p.clone()));
    let sampled = sampled_prisms(cfg)
        .into_iter()
        .map(|p| ("sampled".to_string(), p));
    for (name, p) in corpus.chain(sampled) {
        let back = prism_concretize(&prism_abstract(&p).map_err(err)?).map_err(err)?;
        ensure!(back == p, "{name}: concretize(abstract(p)) ≠ p for {p:?}");
        n += 1;
    }
    for o in sampled_optics(SetAction::Coproduct, cfg, cfg.max_card.min(3)) {
        let r = prism_abstract(&prism_concretize(&o).map_err(err)?).map_err(err)?;
        let h = Func::try_tabulate(&o.residual, |m| {
            Ok(o.backward.apply(&Atom::inl(m.clone()))?.clone())
        })
        .map_err(err)?;
        let (orig, moved) = o.slide(&o.endpoints.t, &h, &r.backward).map_err(err)?;
        ensure!(
            orig == o && moved == r,
            "no slide from o to abstract(concretize(o)) for {o:?}"
        );
        n += 1;
    }
    Ok(n)
}

/// On small endpoints, every table is the concretization of some optic with
/// residual of size at most `|s|` (resp. `|t|`), and the image has the
/// expected size.
fn nf_cardinality(act: SetAction, max: usize) -> Outcome {
    let mut n = 0;
    for e in endpoint_sizes(max) {
        let expected = match act {
            SetAction::Product => {
                (e.a.len() as u128).pow(e.s.len() as u32)
                    * (e.t.len() as u128).pow((e.s.len() * e.b.len()) as u32)
            }
            SetAction::Coproduct => {
                ((e.t.len() + e.a.len()) as u128).pow(e.s.len() as u32)
                    * (e.t.len() as u128).pow(e.b.len() as u32)
            }
        };
        let r = match act {
            SetAction::Product => e.s.len(),
            SetAction::Coproduct => e.t.len(),
        };
        let mut seen = BTreeSet::new();
        for m in 0..=r {
            let m = FinSet::range(m);
            let ma = act.apply(&m, &e.a);
            let mb = act.apply(&m, &e.b);
            for forward in e.s.functions_to(&ma) {
                for backward in mb.functions_to(&e.t) {
                    let o = SetOptic::new(act, e.clone(), m.clone(), forward.clone(), backward)
                        .map_err(err)?;
                    let nf = match act {
                        SetAction::Product => format!("{:?}", lens_concretize(&o).map_err(err)?),
                        SetAction::Coproduct => format!("{:?}", prism_concretize(&o).map_err(err)?),
                    };
                    seen.insert(nf);
                    n += 1;
                }
            }
        }
        ensure!(
            seen.len() as u128 == expected,
            "at |s|={},|a|={},|b|={},|t|={}: {} normal forms, {} tables",
            e.s.len(),
            e.a.len(),
            e.b.len(),
            e.t.len(),
            seen.len(),
            expected
        );
    }
    Ok(n)
}

fn nf_lens_cardinality(_: &Corpus, _: &Config) -> Outcome {
    nf_cardinality(SetAction::Product, 2)
}

fn nf_prism_cardinality(_: &Corpus, _: &Config) -> Outcome {
    nf_cardinality(SetAction::Coproduct, 2)
}

/// Sliding any residual map through a sampled optic keeps its normal form.
fn nf_slide(_: &Corpus, cfg: &Config) -> Outcome {
    let mut n = 0;
    for act in [SetAction::Product, SetAction::Coproduct] {
        for o in sampled_optics(act, cfg, 2) {
            for size in 0..=2 {
                let target = FinSet::range(size);
                for h in o.residual.functions_to(&target) {
                    let mb = act.apply(&target, &o.endpoints.b);
                    for g in sample_functions(&mb, &o.endpoints.t, cfg.samples) {
                        let (orig, moved) = o.slide(&target, &h, &g).map_err(err)?;
                        ensure!(
                            orig.equivalent(&moved).map_err(err)?,
                            "slide changes the normal form of {orig:?}"
                        );
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

fn nf_unit(c: &Corpus, cfg: &Config) -> Outcome {
    let mut optics: Vec<SetOptic> = Vec::new();
    for (_, l) in &c.lenses {
        optics.push(lens_abstract(l).map_err(err)?);
    }
    for (_, p) in &c.prisms {
        optics.push(prism_abstract(p).map_err(err)?);
    }
    optics.extend(sampled_optics(SetAction::Product, cfg, 2));
    optics.extend(sampled_optics(SetAction::Coproduct, cfg, 2));
    for o in &optics {
        let e = &o.endpoints;
        let left = SetOptic::identity(o.action, &e.a, &e.b)
            .compose(o)
            .map_err(err)?;
        let right = o
            .compose(&SetOptic::identity(o.action, &e.s, &e.t))
            .map_err(err)?;
        ensure!(
            left.equivalent(o).map_err(err)?,
            "id∘o differs from o for {o:?}"
        );
        ensure!(
            right.equivalent(o).map_err(err)?,
            "o∘id differs from o for {o:?}"
        );
    }
    Ok(optics.len())
}

fn nf_associativity(_: &Corpus, cfg: &Config) -> Outcome {
    let mut n = 0;
    let sizes: Vec<(usize, usize)> = (1..=2).flat_map(|a| (1..=2).map(move |b| (a, b))).collect();
    for act in [SetAction::Product, SetAction::Coproduct] {
        for x0 in &sizes {
            for x1 in &sizes {
                for x2 in &sizes {
                    for x3 in &sizes {
                        let ends = |p: &(usize, usize), q: &(usize, usize)| SetEndpoints {
                            a: FinSet::range(p.0),
                            b: FinSet::range(p.1),
                            s: FinSet::range(q.0),
                            t: FinSet::range(q.1),
                        };
                        let pick =
                            |e: SetEndpoints,
                             salt: usize|
                             -> std::result::Result<SetOptic, String> {
                                let m = FinSet::range(1 + salt % 2);
                                let fs = sample_functions(&e.s, &act.apply(&m, &e.a), 2);
                                let bs = sample_functions(&act.apply(&m, &e.b), &e.t, 2);
                                let forward = fs[salt % fs.len()].clone();
                                let backward = bs[(salt / 2) % bs.len()].clone();
                                SetOptic::new(act, e, m, forward, backward).map_err(err)
                            };
                        for salt in 0..cfg.samples.max(1) {
                            let o1 = pick(ends(x0, x1), salt)?;
                            let o2 = pick(ends(x1, x2), salt + 1)?;
                            let o3 = pick(ends(x2, x3), salt + 2)?;
                            let l = o1.compose(&o2).map_err(err)?.compose(&o3).map_err(err)?;
                            let r = o1.compose(&o2.compose(&o3).map_err(err)?).map_err(err)?;
                            ensure!(
                                l.equivalent(&r).map_err(err)?,
                                "bracketings differ for {o1:?}, {o2:?}, {o3:?}"
                            );
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------- POLY

fn small(p: &PolyFunctor) -> bool {
    p.index().iter().all(|i| {
        p.positions(i).map(FinSet::len).unwrap_or(0) <= 3
            && p.directions(i).map(FinSet::len).unwrap_or(0) <= 3
    })
}

fn poly_nat_count(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    let mut skeletons: BTreeMap<usize, Arc<FinCategory>> = BTreeMap::new();
    for (name, pair) in &c.poly {
        let (p, q) = (&pair.source, &pair.target);
        if !small(p) || !small(q) {
            continue;
        }
        let lenses = enumerate_polylenses(p, q).map_err(err)?;
        let formula = polylens_count(p, q).map_err(err)?;
        ensure!(
            formula == Some(lenses.len() as u128),
            "{name}: formula {formula:?}, enumerated {}",
            lenses.len()
        );
        let bound = p.max_direction().max(q.max_direction()) + 1;
        let skeleton = match skeletons.get(&bound) {
            Some(sk) => sk.clone(),
            None => {
                let sk = Arc::new(FinCategory::finset_skeleton(bound).map_err(err)?);
                skeletons.insert(bound, sk.clone());
                sk
            }
        };
        let oracle = nat_oracle_on(p, q, &skeleton).map_err(err)?;
        ensure!(
            oracle.nats.len() == lenses.len(),
            "{name}: oracle {} vs lenses {}",
            oracle.nats.len(),
            lenses.len()
        );
        ensure!(
            oracle_agrees(p, q, &oracle).map_err(err)?,
            "{name}: oracle transformations differ from lens images"
        );
        n += 1;
    }
    Ok(n)
}

fn poly_nat_injective(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, pair) in &c.poly {
        let (p, q) = (&pair.source, &pair.target);
        if !small(p) || !small(q) {
            continue;
        }
        let bound = p.max_direction().max(q.max_direction()) + 1;
        let mut seen = BTreeSet::new();
        for l in enumerate_polylenses(p, q).map_err(err)? {
            let comps: Vec<Func> = (0..=bound)
                .map(|k| polylens_to_nat(p, q, &l, &FinSet::range(k)))
                .collect::<crate::error::Result<_>>()
                .map_err(err)?;
            ensure!(
                seen.insert(comps),
                "{name}: two lenses induce the same transformation"
            );
            n += 1;
        }
    }
    Ok(n)
}

/// Distinct polynomials of the corpus, in first-appearance order.
fn corpus_polys(c: &Corpus) -> Vec<PolyFunctor> {
    let mut out: Vec<PolyFunctor> = Vec::new();
    for (_, pair) in &c.poly {
        for p in [&pair.source, &pair.target] {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
    }
    out
}

/// Triples `P → Q → R` of corpus polynomials whose lens sets are small.
fn lens_triples(c: &Corpus, cap: u128) -> std::result::Result<Vec<[PolyFunctor; 3]>, String> {
    let polys = corpus_polys(c);
    let mut out = Vec::new();
    for p in &polys {
        for q in &polys {
            let a = polylens_count(p, q).map_err(err)?.unwrap_or(u128::MAX);
            if a == 0 || a > cap {
                continue;
            }
            for r in &polys {
                let b = polylens_count(q, r).map_err(err)?.unwrap_or(u128::MAX);
                if b > 0 && a.saturating_mul(b) <= cap {
                    out.push([p.clone(), q.clone(), r.clone()]);
                }
            }
        }
    }
    Ok(out)
}

fn poly_compose_pointwise(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for [p, q, r] in lens_triples(c, 64)? {
        for l1 in enumerate_polylenses(&p, &q).map_err(err)? {
            for l2 in enumerate_polylenses(&q, &r).map_err(err)? {
                let lc = compose_polylens(&p, &q, &r, &l1, &l2).map_err(err)?;
                for k in 0..=3 {
                    let y = FinSet::range(k);
                    let lhs = polylens_to_nat(&p, &r, &lc, &y).map_err(err)?;
                    let rhs = polylens_to_nat(&q, &r, &l2, &y)
                        .map_err(err)?
                        .after(&polylens_to_nat(&p, &q, &l1, &y).map_err(err)?)
                        .map_err(err)?;
                    ensure!(
                        lhs == rhs,
                        "nat(l2∘l1) ≠ nat(l2)∘nat(l1) at y = {k} for {l1:?}, {l2:?}"
                    );
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn poly_category_laws(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for [p, q, r] in lens_triples(c, 64)? {
        let (idp, idq) = (PolyLens::identity(&p), PolyLens::identity(&q));
        let l1s = enumerate_polylenses(&p, &q).map_err(err)?;
        for l1 in &l1s {
            ensure!(
                compose_polylens(&p, &p, &q, &idp, l1).map_err(err)? == *l1,
                "id∘l ≠ l for {l1:?}"
            );
            ensure!(
                compose_polylens(&p, &q, &q, l1, &idq).map_err(err)? == *l1,
                "l∘id ≠ l for {l1:?}"
            );
            n += 1;
        }
        let l2s = enumerate_polylenses(&q, &r).map_err(err)?;
        let l3s = enumerate_polylenses(&r, &r).map_err(err)?;
        for l1 in &l1s {
            for l2 in &l2s {
                for l3 in l3s.iter().take(4) {
                    let lhs = compose_polylens(
                        &p,
                        &r,
                        &r,
                        &compose_polylens(&p, &q, &r, l1, l2).map_err(err)?,
                        l3,
                    )
                    .map_err(err)?;
                    let rhs = compose_polylens(
                        &p,
                        &q,
                        &r,
                        l1,
                        &compose_polylens(&q, &r, &r, l2, l3).map_err(err)?,
                    )
                    .map_err(err)?;
                    ensure!(
                        lhs == rhs,
                        "lens composition is not associative at {l1:?}, {l2:?}, {l3:?}"
                    );
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn poly_ommatidium_round_trip(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, pair) in &c.poly {
        let (p, q) = (&pair.source, &pair.target);
        if polylens_count(p, q).map_err(err)?.is_none_or(|k| k > 256) {
            continue;
        }
        for l in enumerate_polylenses(p, q).map_err(err)? {
            let o = Ommatidium::from_polylens(p, q, &l).map_err(err)?;
            ensure!(
                o.normal_form(p, q).map_err(err)? == l,
                "{name}: normal form of the ommatidium of {l:?} differs"
            );
            n += 1;
        }
    }
    Ok(n)
}

/// Exhaustive at residual sizes at most 2, on pairs with one-term source
/// and target.
fn poly_ommatidium_transport(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, pair) in &c.poly {
        let (p, q) = (&pair.source, &pair.target);
        if p.index().len() != 1
            || q.index().len() != 1
            || p.max_direction() > 2
            || q.max_direction() > 2
        {
            continue;
        }
        n += ommatidium_transport_invariance(p, q, 2).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(n)
}

// ---------------------------------------------------------------- COMPOUND

fn y_family() -> [PolyFunctor; 2] {
    [PolyFunctor::monomial(1), PolyFunctor::monomial(2)]
}

fn compound_of(
    p: &PolyFunctor,
    q: &PolyFunctor,
    l: &PolyLens,
) -> std::result::Result<CompoundOptic, String> {
    CompoundOptic::from_ommatidium(p, q, &Ommatidium::from_polylens(p, q, l).map_err(err)?)
        .map_err(err)
}

/// For every `P, Q, R ∈ {y, y²}` and lenses `l1: P → Q`, `l2: Q → R`, the
/// compound composite of their optics normalizes to `l2 ∘ l1`.
fn compound_discrete_composition(_: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    let ys = y_family();
    for p in &ys {
        for q in &ys {
            for r in &ys {
                for l1 in enumerate_polylenses(p, q).map_err(err)? {
                    for l2 in enumerate_polylenses(q, r).map_err(err)? {
                        let o1 = compound_of(q, r, &l2)?;
                        let o2 = compound_of(p, q, &l1)?;
                        let (_, _, nf) = compound_compose(&o1, &o2)
                            .map_err(err)?
                            .normal_form()
                            .map_err(err)?;
                        let direct = compose_polylens(p, q, r, &l1, &l2).map_err(err)?;
                        ensure!(
                            nf == direct,
                            "compound composite of {l1:?} and {l2:?} normalizes to {nf:?}"
                        );
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

fn compound_discrete_laws(_: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    let ys = y_family();
    for p in &ys {
        for q in &ys {
            for l in enumerate_polylenses(p, q).map_err(err)? {
                let o = compound_of(p, q, &l)?;
                let (a, b) = o.inner();
                let (s, t) = o.outer();
                let left = compound_compose(&CompoundOptic::identity(a, b).map_err(err)?, &o)
                    .map_err(err)?;
                let right = compound_compose(&o, &CompoundOptic::identity(s, t).map_err(err)?)
                    .map_err(err)?;
                ensure!(
                    left.normal_form().map_err(err)?.2 == l,
                    "identity after {l:?} changes its normal form"
                );
                ensure!(
                    right.normal_form().map_err(err)?.2 == l,
                    "identity before {l:?} changes its normal form"
                );
                n += 1;
            }
        }
    }
    for p in &ys {
        for q in &ys {
            for r in &ys {
                for s in &ys {
                    let (a1, a2, a3) = (
                        enumerate_polylenses(p, q).map_err(err)?,
                        enumerate_polylenses(q, r).map_err(err)?,
                        enumerate_polylenses(r, s).map_err(err)?,
                    );
                    if a1.is_empty() || a2.is_empty() || a3.is_empty() {
                        continue;
                    }
                    // Three index choices per quadruple keep the nested
                    // composites affordable.
                    let picks: BTreeSet<(usize, usize, usize)> = [(0, 0, 0), (1, 1, 1), (0, 1, 0)]
                        .into_iter()
                        .map(|(i, j, k)| (i % a1.len(), j % a2.len(), k % a3.len()))
                        .collect();
                    for (i, j, k) in picks {
                        let (l1, l2, l3) = (&a1[i], &a2[j], &a3[k]);
                        let (o1, o2, o3) = (
                            compound_of(r, s, l3)?,
                            compound_of(q, r, l2)?,
                            compound_of(p, q, l1)?,
                        );
                        let lhs = compound_compose(&compound_compose(&o1, &o2).map_err(err)?, &o3)
                            .map_err(err)?;
                        let rhs = compound_compose(&o1, &compound_compose(&o2, &o3).map_err(err)?)
                            .map_err(err)?;
                        ensure!(
                            lhs.normal_form().map_err(err)?.2 == rhs.normal_form().map_err(err)?.2,
                            "bracketings differ for {l1:?}, {l2:?}, {l3:?}"
                        );
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

/// Up to `limit` optics over hop `i` of a compound case.
fn hop_optics(case: &CompoundCase, i: usize) -> std::result::Result<Vec<CompoundOptic>, String> {
    let p = &case.profunctors[i];
    let (a, b) = &case.ends[i];
    let (s, t) = &case.ends[i + 1];
    let pa = prof_action(p, a).map_err(err)?;
    let pb = prof_action(p, b).map_err(err)?;
    let fwds = enumerate_nats(s, &pa.copresheaf).map_err(err)?;
    let bwds = enumerate_nats(&pb.copresheaf, t).map_err(err)?;
    let mut out = Vec::new();
    for f in fwds.iter().take(case.limit) {
        for g in bwds.iter().take(case.limit) {
            out.push(
                CompoundOptic::new(
                    p.clone(),
                    a.clone(),
                    b.clone(),
                    s.clone(),
                    t.clone(),
                    f.components().clone(),
                    g.components().clone(),
                )
                .map_err(err)?,
            );
        }
    }
    Ok(out)
}

fn compound_unit_witness(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.compound {
        for (i, p) in case.profunctors.iter().enumerate() {
            let units = unit_check(p).map_err(err)?;
            let left =
                ProfMorphism::from_iso(&units.hom_left.profunctor, p, &units.left).map_err(err)?;
            let right = ProfMorphism::from_iso(&units.hom_right.profunctor, p, &units.right)
                .map_err(err)?;
            for o in hop_optics(case, i)? {
                let (a, b) = o.inner();
                let (s, t) = o.outer();
                let lc = compound_compose(&CompoundOptic::identity(a, b).map_err(err)?, &o)
                    .map_err(err)?;
                let rc = compound_compose(&o, &CompoundOptic::identity(s, t).map_err(err)?)
                    .map_err(err)?;
                ensure!(
                    coend_witness_check(&lc, &o, &left).map_err(err)?,
                    "{name} hop {i}: left unit witness rejected"
                );
                ensure!(
                    coend_witness_check(&rc, &o, &right).map_err(err)?,
                    "{name} hop {i}: right unit witness rejected"
                );
                n += 1;
            }
        }
    }
    Ok(n)
}

fn compound_associativity_witness(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, case) in &c.compound {
        for i in 0..case.profunctors.len().saturating_sub(2) {
            let (p, q, r) = (
                &case.profunctors[i],
                &case.profunctors[i + 1],
                &case.profunctors[i + 2],
            );
            let iso = associativity_check(p, q, r).map_err(err)?;
            let pq_r = crate::prof::prof_compose(
                &crate::prof::prof_compose(p, q).map_err(err)?.profunctor,
                r,
            )
            .map_err(err)?;
            let p_qr = crate::prof::prof_compose(
                p,
                &crate::prof::prof_compose(q, r).map_err(err)?.profunctor,
            )
            .map_err(err)?;
            let h =
                ProfMorphism::from_iso(&pq_r.profunctor, &p_qr.profunctor, &iso).map_err(err)?;
            let (h1, h2, h3) = (
                hop_optics(case, i)?,
                hop_optics(case, i + 1)?,
                hop_optics(case, i + 2)?,
            );
            for o1 in &h1 {
                for o2 in &h2 {
                    let o12 = compound_compose(o1, o2).map_err(err)?;
                    for o3 in &h3 {
                        let lhs = compound_compose(&o12, o3).map_err(err)?;
                        let rhs = compound_compose(o1, &compound_compose(o2, o3).map_err(err)?)
                            .map_err(err)?;
                        ensure!(
                            coend_witness_check(&lhs, &rhs, &h).map_err(err)?,
                            "{name} at hop {i}: associator witness rejected"
                        );
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

/// Valid witnesses: identity 2-cells and unit isomorphisms on constructed
/// optics. Invalid: the same 2-cells against optics with one forward value
/// changed.
fn compound_witness_check(c: &Corpus, _: &Config) -> Outcome {
    let (mut accepted, mut rejected) = (0, 0);
    let mut check_pair = |o: &CompoundOptic| -> std::result::Result<(), String> {
        let id = ProfMorphism::identity(o.residual());
        ensure!(
            coend_witness_check(o, o, &id).map_err(err)?,
            "identity witness rejected"
        );
        accepted += 1;
        for bad in perturbations(o)? {
            ensure!(
                !coend_witness_check(o, &bad, &id).map_err(err)?,
                "perturbed optic accepted"
            );
            rejected += 1;
        }
        Ok(())
    };
    let ys = y_family();
    for p in &ys {
        for q in &ys {
            for l in enumerate_polylenses(p, q).map_err(err)? {
                check_pair(&compound_of(p, q, &l)?)?;
            }
        }
    }
    for (name, case) in &c.compound {
        for i in 0..case.profunctors.len() {
            for o in hop_optics(case, i)? {
                check_pair(&o).map_err(|e| format!("{name} hop {i}: {e}"))?;
            }
        }
    }
    ensure!(rejected > 0, "no invalid witness was constructed");
    Ok(accepted + rejected)
}

/// Copies of `o` with one forward value moved to another element, where
/// the result is still natural.
fn perturbations(o: &CompoundOptic) -> std::result::Result<Vec<CompoundOptic>, String> {
    let mut out = Vec::new();
    let (pa, _) = o.actions();
    let (a, b) = o.inner();
    let (s, t) = o.outer();
    for (k, f) in o.forward().components() {
        let fiber = pa.copresheaf.fiber(k).map_err(err)?;
        for (x, y) in f.iter() {
            let Some(other) = fiber.iter().find(|z| *z != y) else {
                continue;
            };
            let mut comps = o.forward().components().clone();
            let moved =
                Func::from_pairs(f.iter().map(|(x2, y2)| {
                    (x2.clone(), if x2 == x { other.clone() } else { y2.clone() })
                }));
            comps.insert(k.clone(), moved);
            if let Ok(bad) = CompoundOptic::new(
                o.residual().clone(),
                a.clone(),
                b.clone(),
                s.clone(),
                t.clone(),
                comps,
                o.backward().components().clone(),
            ) {
                out.push(bad);
            }
            break;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- CORPUS

fn round_trip<D: Dto>(name: &str, v: &D::Value) -> std::result::Result<(), String> {
    let text = format::to_pretty(&D::from_value(v));
    let dto: D = format::parse_str(name, &text).map_err(|e| e.to_string())?;
    let again = format::to_pretty(&D::from_value(&dto.build().map_err(err)?));
    ensure!(text == again, "{name}: serialize∘parse changes the file");
    Ok(())
}

fn round_trip_raw_category(name: &str, cat: &FinCategory) -> std::result::Result<(), String> {
    let text = format::to_pretty(&CategoryDto::from_value(cat));
    let dto: CategoryDto = format::parse_str(name, &text).map_err(|e| e.to_string())?;
    let again = format::to_pretty(&CategoryDto::from_value(&dto.build().map_err(err)?));
    ensure!(text == again, "{name}: serialize∘parse changes the file");
    Ok(())
}

fn corpus_round_trip(c: &Corpus, _: &Config) -> Outcome {
    let mut n = 0;
    for (name, x) in &c.categories {
        round_trip_raw_category(name, x)?;
        n += 1;
    }
    for (name, x) in &c.copresheaves {
        round_trip::<CoPresheafDto>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.kan {
        round_trip::<crate::corpus::KanChainDto>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.prof {
        round_trip::<crate::corpus::ProfCaseDto>(name, x)?;
        for p in &x.profunctors {
            round_trip::<ProfunctorDto>(name, p)?;
        }
        n += 1;
    }
    for (name, x) in &c.settings {
        round_trip::<SettingDto>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.lenses {
        round_trip::<ConcreteLens>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.prisms {
        round_trip::<ConcretePrism>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.poly {
        round_trip::<crate::corpus::PolyPair>(name, x)?;
        n += 1;
    }
    for (name, x) in &c.compound {
        round_trip::<crate::corpus::CompoundCaseDto>(name, x)?;
        n += 1;
    }
    Ok(n)
}

/// Which corpus sections feed which suites.
pub fn coverage_map() -> Vec<(&'static str, &'static [&'static str])> {
    vec![
        ("FINCAT", &["categories", "copresheaves", "kan"]),
        ("COEND", &["categories", "copresheaves", "prof"]),
        ("KAN", &["kan"]),
        ("PI", &["kan", "categories"]),
        ("PROF", &["prof"]),
        ("OPTIC-EXACT", &["monoidal"]),
        ("OPTIC-NORMALFORM", &["lenses", "prisms"]),
        ("POLY", &["poly"]),
        ("COMPOUND", &["compound", "poly"]),
        ("CORPUS", &["categories"]),
    ]
}

fn corpus_coverage(c: &Corpus, _: &Config) -> Outcome {
    let counts = c.counts();
    let mut missing = Vec::new();
    for (suite, sections) in coverage_map() {
        for s in sections {
            if counts.get(s).copied().unwrap_or(0) == 0 {
                missing.push(format!("{suite}←{s}"));
            }
        }
    }
    ensure!(
        missing.is_empty(),
        "empty corpus sections: {}",
        missing.join(", ")
    );
    Ok(coverage_map().len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_names_are_unique() {
        let mut seen = BTreeSet::new();
        for s in REGISTRY {
            for l in s.laws {
                assert!(seen.insert(format!("{}/{}", s.name, l.name)));
            }
        }
        let suites: BTreeSet<_> = REGISTRY.iter().map(|s| s.name).collect();
        assert_eq!(suites.len(), REGISTRY.len());
        let covered: BTreeSet<_> = coverage_map().into_iter().map(|(s, _)| s).collect();
        assert_eq!(covered, suites);
    }

    #[test]
    fn sampling_is_exhaustive_on_small_spaces() {
        let fs = sample_functions(&FinSet::range(2), &FinSet::range(2), 10);
        assert_eq!(fs.len(), 4);
        let distinct: BTreeSet<_> = fs.into_iter().collect();
        assert_eq!(distinct.len(), 4);
        assert!(sample_functions(&FinSet::range(1), &FinSet::empty(), 3).is_empty());
        assert_eq!(
            sample_functions(&FinSet::empty(), &FinSet::empty(), 3).len(),
            1
        );
    }

    #[test]
    fn sampled_functions_are_total_and_distinct() {
        let (d, c) = (FinSet::range(4), FinSet::range(4));
        let fs = sample_functions(&d, &c, 5);
        assert_eq!(fs.len(), 5);
        assert!(fs.iter().all(|f| f.is_total_on(&d, &c)));
        assert_eq!(fs.iter().collect::<BTreeSet<_>>().len(), 5);
    }
}

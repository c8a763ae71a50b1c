//! One line per acceptance criterion. Runs without the test harness so the
//! lines appear in `cargo test` output in order.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use coend_optics::atom::Atom;
use coend_optics::coend::coyoneda_check;
use coend_optics::corpus::{default_corpus_dir, planted_fixture_dir, Corpus};
use coend_optics::fincat::CoPresheaf;
use coend_optics::kan::kan_composition_check;
use coend_optics::laws::{self, Config};
use coend_optics::poly::{nat_oracle, polylens_count, PolyFunctor};
use coend_optics::prof::prof_action;

type Check = fn(&Corpus) -> Result<String, String>;

fn suites_pass(c: &Corpus, names: &[&str]) -> Result<String, String> {
    let mut total = 0;
    for name in names {
        let suite = laws::find_suite(name).ok_or(format!("no suite {name}"))?;
        let report = laws::run_suite(suite, c, "shipped", &Config::default());
        for l in &report.laws {
            if !l.passed {
                return Err(format!("{name}/{}: {}", l.law, l.detail));
            }
            if l.cases == 0 {
                return Err(format!("{name}/{} checked nothing", l.law));
            }
            total += l.cases;
        }
    }
    Ok(format!("{} instances across {}", total, names.join(", ")))
}

fn copresheaves(c: &Corpus) -> Vec<(String, &CoPresheaf)> {
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

fn co_yoneda(c: &Corpus) -> Result<String, String> {
    let mut pairs = 0;
    for (name, f) in copresheaves(c) {
        if f.fibers().values().any(|s| s.len() > 4) {
            continue;
        }
        for a in f.base().objects() {
            let w = coyoneda_check(f, a).map_err(|e| format!("{name} at {a}: {e}"))?;
            let fa = f.fiber(a).map_err(|e| e.to_string())?;
            if w.codomain() != fa || w.domain().len() != fa.len() {
                return Err(format!(
                    "{name} at {a}: carrier not in bijection with F({a})"
                ));
            }
            for x in w.domain().iter() {
                let back = w.backward().apply(w.forward().apply(x).unwrap()).unwrap();
                if back != x {
                    return Err(format!("{name} at {a}: round trip moves {x}"));
                }
            }
            for y in fa.iter() {
                if w.forward().apply(w.backward().apply(y).unwrap()).unwrap() != y {
                    return Err(format!("{name} at {a}: round trip moves {y}"));
                }
            }
            pairs += 1;
        }
    }
    if pairs < 20 {
        return Err(format!("only {pairs} pairs with fibers ≤ 4"));
    }
    Ok(format!("{pairs} (co-presheaf, object) pairs"))
}

fn kan(c: &Corpus) -> Result<String, String> {
    let mut chains = 0;
    for (name, ch) in &c.kan {
        if ch.functors.len() < 2 {
            continue;
        }
        let iso = kan_composition_check(&ch.copresheaf, &ch.functors[0], &ch.functors[1])
            .map_err(|e| format!("{name}: {e}"))?;
        if iso.len() != ch.functors[1].target().objects().len() {
            return Err(format!("{name}: witness misses objects"));
        }
        chains += 1;
    }
    for needle in ["identity", "discrete", "arrow"] {
        if !c.kan.iter().any(|(n, _)| n.contains(needle)) {
            return Err(format!("no {needle} chain"));
        }
    }
    if chains < 10 {
        return Err(format!("only {chains} chains"));
    }
    Ok(format!("{chains} chains"))
}

fn pi(c: &Corpus) -> Result<String, String> {
    suites_pass(c, &["PI"])
}

fn prof(c: &Corpus) -> Result<String, String> {
    let case = &c
        .prof
        .iter()
        .find(|(n, _)| n == "matrix")
        .ok_or("no matrix case")?
        .1;
    let (p, a) = (&case.profunctors[0], &case.copresheaf);
    let k1 = Atom::sym("k1");
    // Σ_n |a(n)|·|p(n,k1)| over the discrete contravariant side.
    let expected: usize = p
        .contra()
        .objects()
        .iter()
        .map(|n| a.fiber(n).unwrap().len() * p.fiber(n, &k1).unwrap().len())
        .sum();
    let got = prof_action(p, a)
        .map_err(|e| e.to_string())?
        .copresheaf
        .fiber(&k1)
        .map_err(|e| e.to_string())?
        .len();
    if got != 8 || expected != 8 {
        return Err(format!(
            "|(p•a)(k1)| = {got}, direct sum = {expected}, expected 8"
        ));
    }
    let rest = suites_pass(c, &["PROF"])?;
    Ok(format!("|(p•a)(k1)| = 8; {rest}"))
}

fn simple_optics(c: &Corpus) -> Result<String, String> {
    suites_pass(c, &["OPTIC-EXACT", "OPTIC-NORMALFORM"])
}

fn poly(c: &Corpus) -> Result<String, String> {
    let (y, y2) = (PolyFunctor::monomial(1), PolyFunctor::monomial(2));
    let cases = [
        (&y2, &y, [(1, 2)], [(1, 1)], 2u128),
        (&y, &y2, [(1, 1)], [(1, 2)], 1u128),
    ];
    for (p, q, pt, qt, expected) in cases {
        let formula = polylens_count(p, q).map_err(|e| e.to_string())?;
        let oracle = nat_oracle(p, q, 3).map_err(|e| e.to_string())?.nats.len() as u128;
        let brute = common::poly_nat_count(&pt, &qt, 3) as u128;
        if formula != Some(expected) || oracle != expected || brute != expected {
            return Err(format!(
                "formula {formula:?}, oracle {oracle}, test brute force {brute}, expected {expected}"
            ));
        }
    }
    let rest = suites_pass(c, &["POLY"])?;
    Ok(format!("|Nat(y²,y)| = 2, |Nat(y,y²)| = 1; {rest}"))
}

fn compound(c: &Corpus) -> Result<String, String> {
    suites_pass(c, &["COMPOUND"])
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coend-optics"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn cli(_: &Corpus) -> Result<String, String> {
    let corpus = default_corpus_dir();
    let (code1, out1, _) = run_cli(&["laws", "--all", "--corpus", corpus]);
    let (code2, out2, _) = run_cli(&["laws", "--all", "--corpus", corpus]);
    if code1 != 0 || code2 != 0 {
        let fail = out1.lines().find(|l| l.contains("FAIL")).unwrap_or("");
        return Err(format!("shipped corpus exits {code1}: {fail}"));
    }
    if out1 != out2 {
        return Err("text report differs between runs".into());
    }
    let (j1, j2) = (
        run_cli(&["--json", "laws", "--all", "--corpus", corpus]).1,
        run_cli(&["--json", "laws", "--all", "--corpus", corpus]).1,
    );
    if j1 != j2 {
        return Err("JSON report differs between runs".into());
    }
    let (code, out, _) = run_cli(&["laws", "--all", "--corpus", planted_fixture_dir()]);
    let triple = "associativity fails on triple (h=g, g=e, f=f)";
    if code != 1 || !out.contains(triple) {
        return Err(format!(
            "planted fixture exits {code} without the counterexample"
        ));
    }
    let malformed = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/malformed/category.json");
    let (code, _, err) = run_cli(&["check", malformed.to_str().unwrap()]);
    if code != 2 || !err.contains("category.json:4:") {
        return Err(format!("malformed input exits {code}: {err}"));
    }
    Ok(format!(
        "shipped corpus exit 0 ({} lines, byte-identical twice); planted fixture exit 1 with `{triple}`",
        out1.lines().count()
    ))
}

fn main() {
    let start = Instant::now();
    let corpus = match Corpus::load(Path::new(default_corpus_dir())) {
        Ok(c) => c,
        Err(e) => {
            println!("shipped corpus does not load: {e}");
            std::process::exit(1);
        }
    };
    let criteria: [(&str, Check); 8] = [
        ("co-Yoneda", co_yoneda),
        ("Kan composition", kan),
        ("Π composition", pi),
        ("profunctors", prof),
        ("simple optics", simple_optics),
        ("polynomial optics", poly),
        ("compound optics", compound),
        ("CLI", cli),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check(&corpus) {
            Ok(detail) => println!("[PRIMARY] {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("[PRIMARY] {name}: FAIL ({detail})");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

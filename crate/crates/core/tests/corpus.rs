//! The files on disk are exactly what the generators write.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use coend_optics::corpus::{self, default_corpus_dir, planted_fixture_dir, Corpus};
use coend_optics::format::{self, CategoryDto};

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn assert_same_tree(shipped: &Path, generated: Corpus) {
    let dir = tempfile::tempdir().unwrap();
    generated.write(dir.path()).unwrap();
    let (want, got) = (tree(dir.path()), tree(shipped));
    let want_names: Vec<_> = want.keys().collect();
    let got_names: Vec<_> = got.keys().collect();
    assert_eq!(got_names, want_names);
    for (name, bytes) in &want {
        assert!(got[name] == *bytes, "{} is stale", name.display());
    }
}

#[test]
fn shipped_corpus_matches_the_generator() {
    assert_same_tree(Path::new(default_corpus_dir()), corpus::bundled());
}

#[test]
fn planted_fixture_matches_the_generator() {
    assert_same_tree(Path::new(planted_fixture_dir()), corpus::planted());
}

#[test]
fn shipped_corpus_loads_with_every_section() {
    let c = Corpus::load(Path::new(default_corpus_dir())).unwrap();
    for (section, n) in c.counts() {
        assert!(n > 0, "{section} is empty");
    }
}

#[test]
fn malformed_input_reports_line_and_column() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/malformed/category.json");
    let e = format::read::<CategoryDto>(&path).unwrap_err();
    assert_eq!(e.line, Some(4));
    assert!(e.column.is_some());
    assert!(e.to_string().contains("category.json:4:"), "{e}");
}

#[test]
fn unknown_fields_are_rejected() {
    let e = format::parse_str::<CategoryDto>("x.json", r#"{"objects": [], "colour": 1}"#)
        .unwrap_err();
    assert!(e.message.contains("colour"), "{}", e.message);
}

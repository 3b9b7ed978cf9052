use std::collections::BTreeSet;
use std::path::PathBuf;

use chipsplit::enumeration::{check_conjecture, enumerate_fundamental_with, support_n, EnumerationOptions, EnumerationReport};
use chipsplit::models::{integral_outcome_to_model, is_fundamental, model_to_outcome};
use chipsplit::pascal::is_outcome;
use chipsplit::{ChipConfiguration, Perm};
use num_bigint::BigInt;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// One line per top-level field, and one line per array element.
fn golden_text(v: &serde_json::Value) -> String {
    let obj = v.as_object().unwrap();
    let mut out = String::from("{\n");
    for (k, (key, val)) in obj.iter().enumerate() {
        out += &format!("  {key:?}: ");
        match val.as_array() {
            Some(items) => {
                out += "[\n";
                let lines: Vec<String> = items.iter().map(|x| format!("    {x}")).collect();
                out += &lines.join(",\n");
                out += "\n  ]";
            }
            None => out += &val.to_string(),
        }
        out += if k + 1 < obj.len() { ",\n" } else { "\n" };
    }
    out + "}\n"
}

/// Compares against a committed file; `CHIPSPLIT_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &serde_json::Value) {
    let path = golden(name);
    let text = golden_text(actual);
    if std::env::var_os("CHIPSPLIT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, expected, "golden file {name} differs");
    let reparsed: serde_json::Value = serde_json::from_str(&expected).unwrap();
    assert_eq!(&reparsed, actual);
}

fn report(d: u32, n: u32) -> EnumerationReport {
    enumerate_fundamental_with(d, n, &EnumerationOptions::default()).unwrap()
}

fn cfg(t: &[(u32, u32, i64)]) -> ChipConfiguration {
    ChipConfiguration::from_triples(t.iter().map(|&(i, j, v)| (i, j, BigInt::from(v))))
}

#[test]
fn table_rows_up_to_four() {
    let r = report(9, 4);
    let rows: Vec<Vec<usize>> = (1..=4).map(|n| r.row(n).values().copied().collect()).collect();
    assert_eq!(rows, vec![vec![1], vec![3, 1], vec![12, 4, 2], vec![82, 38, 10, 4]]);
    assert_eq!(r.row(4).keys().copied().collect::<Vec<_>>(), vec![4, 5, 6, 7]);
    check_golden("table1_n4.json", &r.to_json());
}

#[test]
fn report_is_independent_of_thread_count() {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single.install(|| report(7, 4));
    let b = report(7, 4);
    assert_eq!(serde_json::to_string(&a.to_json()).unwrap(), serde_json::to_string(&b.to_json()).unwrap());
}

#[test]
fn outcomes_are_closed_under_transposition() {
    let r = report(9, 4);
    let set: BTreeSet<ChipConfiguration> = r.outcomes.iter().cloned().collect();
    for w in &r.outcomes {
        let d = w.degree() as u32;
        assert!(set.contains(&w.act(Perm::T12, d).unwrap()), "{w:?}");
    }
    for w in [
        cfg(&[(0, 0, -2), (0, 7, 2), (1, 5, 7), (1, 1, 7), (5, 1, 7), (7, 0, 2)]),
        cfg(&[(0, 0, -1), (0, 7, 1), (1, 3, 7), (3, 3, 7), (3, 1, 7), (7, 0, 1)]),
    ] {
        assert!(set.contains(&w));
    }
}

#[test]
fn enumerated_outcomes_give_fundamental_models() {
    let r = report(9, 4);
    let check = check_conjecture(&r);
    assert!(check.holds);
    assert_eq!(check.equality_cases.values().copied().collect::<Vec<_>>(), vec![1, 1, 2, 4]);
    for w in &r.outcomes {
        let d = w.degree() as u32;
        let m = integral_outcome_to_model(w).unwrap();
        assert_eq!(m.n() as u32, support_n(w));
        let back = model_to_outcome(&m).unwrap();
        assert!(is_outcome(&back, d).unwrap() && back.is_valid());
        let v = is_fundamental(&m.exponents(), d).unwrap();
        assert_eq!(v.model, Some(m));
    }
}

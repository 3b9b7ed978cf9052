//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails. Set `CHIPSPLIT_LONG_RUN=1` to include the
//! support-5 sweep over degrees 21 through 41.

#[path = "support/props.rs"]
mod props;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use chipsplit::criteria::{hexagon_determinant, Superfactorial};
use chipsplit::enumeration::{
    check_conjecture, enumerate_fundamental_with, support_n, sweep_degree, EnumerationOptions, EnumerationReport,
    SurvivorFate,
};
use chipsplit::hyperfield::contraction::{gamma_set, Parity};
use chipsplit::hyperfield::pipeline::{run_pipeline, CaseVerdict, SymbolicProver};
use chipsplit::models::{family_identity, family_weight, tightness_family, Poly};
use chipsplit::pascal::is_outcome;
use chipsplit::{ChipConfiguration, Coord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

type Verdict = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(&Shared) -> Verdict,
}

/// Work reused by several criteria.
struct Shared {
    report: EnumerationReport,
    report_time: Duration,
}

fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn long_run() -> bool {
    std::env::var_os("CHIPSPLIT_LONG_RUN").is_some_and(|v| v != "0")
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn triangle(text: &str) -> ChipConfiguration {
    ChipConfiguration::parse(text).expect("fixture parses")
}

fn points(p: &[(u32, u32)]) -> Vec<Coord> {
    let mut v: Vec<Coord> = p.iter().map(|&(i, j)| Coord::new(i, j)).collect();
    v.sort();
    v
}

fn support_at_most_three(_: &Shared) -> Verdict {
    let expected: BTreeSet<ChipConfiguration> = [
        "1\n-1 1",
        "1\n· ·\n· 3 ·\n-1 · · 1",
        "1\n· 2\n-1 · 1",
        "·\n1 1\n-1 · 1",
        "1\n· 1\n-1 1 ·",
    ]
    .into_iter()
    .map(triangle)
    .collect();
    let r = enumerate_fundamental_with(9, 2, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
    let got: BTreeSet<ChipConfiguration> = r.outcomes.iter().cloned().collect();
    ensure(r.outcomes.len() == got.len(), "duplicate outcomes")?;
    ensure(got == expected, format!("got {} outcomes, {} differ", got.len(), got.symmetric_difference(&expected).count()))?;
    Ok("5 outcomes, exact".into())
}

fn table_rows(s: &Shared) -> Verdict {
    let expected: [&[usize]; 5] = [&[1], &[3, 1], &[12, 4, 2], &[82, 38, 10, 4], &[602, 254, 88, 24, 2]];
    let mut totals = Vec::new();
    for (n, want) in (1u32..).zip(expected) {
        let row: Vec<usize> = s.report.row(n).values().copied().collect();
        let first = s.report.row(n).keys().next().copied();
        ensure(row == want && first == Some(n), format!("row {n}: {row:?}"))?;
        totals.push(row.iter().sum::<usize>());
    }
    ensure(totals[..4] == [1, 4, 18, 134], format!("totals {totals:?}"))?;
    Ok(format!("rows 1..5 exact, totals {totals:?}, enumeration {:.1?}", s.report_time))
}

fn gamma_sizes(_: &Shared) -> Verdict {
    let count = |p, k| gamma_set(p, k).map(|v| v.len()).map_err(|e| e.to_string());
    let even = count(Parity::Even, 5)?;
    let odd = count(Parity::Odd, 5)?;
    ensure(even == 1283 && odd == 1265, format!("even {even}, odd {odd}"))?;
    for k in 0..=4 {
        ensure(count(Parity::Even, k)? == 0 && count(Parity::Odd, k)? == 0, format!("nonempty at size {k}"))?;
    }
    Ok("even 1283, odd 1265, sizes <= 4 empty".into())
}

fn support_four(_: &Shared) -> Verdict {
    let expected: [(u32, Vec<Vec<Coord>>); 2] = [
        (
            6,
            vec![
                points(&[(0, 3), (1, 5), (4, 1), (6, 0)]),
                points(&[(0, 5), (1, 1), (3, 3), (6, 0)]),
                points(&[(0, 6), (1, 1), (3, 3), (5, 0)]),
                points(&[(0, 6), (1, 1), (3, 3), (6, 0)]),
                points(&[(0, 6), (1, 4), (3, 0), (5, 1)]),
            ],
        ),
        (
            7,
            vec![
                points(&[(0, 7), (1, 1), (3, 3), (7, 0)]),
                points(&[(0, 7), (1, 3), (5, 1), (7, 0)]),
                points(&[(0, 7), (1, 5), (3, 1), (7, 0)]),
            ],
        ),
    ];
    for (d, sets) in expected {
        let c = sweep_degree(4, d).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<Coord>> = c.survivors.iter().map(|(s, _)| s.clone()).collect();
        ensure(got == sets.into_iter().collect(), format!("d = {d}: survivors {got:?}"))?;
        ensure(c.survivors.iter().all(|(_, f)| *f == SurvivorFate::Invertibility), format!("d = {d}: survivor not excluded"))?;
    }
    for d in 8..=11 {
        let c = sweep_degree(4, d).map_err(|e| e.to_string())?;
        ensure(c.survivors.is_empty(), format!("d = {d}: {} survivors", c.survivors.len()))?;
    }
    Ok("d=6: 5 sets, d=7: 3 sets, all excluded by invertibility; d=8..11 none".into())
}

fn pipeline(_: &Shared) -> Verdict {
    let r = run_pipeline(&SymbolicProver::default()).map_err(|e| e.to_string())?;
    let c = &r.counts;
    ensure(c.cases == 2289, format!("{} cases", c.cases))?;
    ensure(
        r.exceptional.len() == 1 && matches!(r.exceptional[0].verdict, CaseVerdict::Special(_)),
        "exceptional point not eliminated by the special argument",
    )?;
    ensure(c.survivors == 0, format!("{} survivors", c.survivors))?;
    ensure(
        c.after_invertibility <= 1107 && c.after_symmetry <= 349 && c.after_hexagon_no_strip <= 24,
        format!("stage counts {}/{}/{}", c.after_invertibility, c.after_symmetry, c.after_hexagon_no_strip),
    )?;
    Ok(format!(
        "2289 cases -> {} -> {} -> {} -> {} -> 0 (bounds 1107/349/24)",
        c.after_invertibility, c.after_symmetry, c.after_hexagon_no_strip, c.after_hexagon
    ))
}

fn sweep_range(lo: u32, hi: u32) -> Verdict {
    let mut nodes = 0u64;
    let mut resolved = 0usize;
    for d in lo..=hi {
        let c = sweep_degree(5, d).map_err(|e| e.to_string())?;
        ensure(c.valid.is_empty() && c.proves_absence(), format!("d = {d}: not proven absent"))?;
        nodes += c.search_nodes;
        resolved += c.survivors.len();
    }
    Ok(format!("d={lo}..{hi} absent ({nodes} search nodes, {resolved} sign survivors all excluded)"))
}

fn sweep(_: &Shared) -> Verdict {
    let desk = sweep_range(8, 20)?;
    if long_run() {
        Ok(format!("{desk}; {}", sweep_range(21, 41)?))
    } else {
        Ok(format!("{desk}; d=21..41 skipped (set CHIPSPLIT_LONG_RUN=1)"))
    }
}

fn hexagon(_: &Shared) -> Verdict {
    let mut shapes = 0;
    let mut shifted = 0;
    let mut from_one = 0;
    for d in 2..=20 {
        for dp in 1..=d / 3 {
            for l1 in dp..=d - 2 * dp {
                let h = hexagon_determinant(d, dp, l1).map_err(|e| e.to_string())?;
                ensure(!h.direct.is_zero(), format!("zero determinant at ({d}, {dp}, {l1})"))?;
                shapes += 1;
                shifted += h.matching.contains(&Superfactorial::Shifted) as usize;
                from_one += h.matching.contains(&Superfactorial::FromOne) as usize;
            }
        }
    }
    let oracle = hexagon_determinant(6, 2, 2).map_err(|e| e.to_string())?.direct;
    ensure(oracle == BigInt::from(50), format!("det(6,2,2) = {oracle}"))?;
    ensure(shifted == shapes && from_one < shapes, format!("formula matches: shifted {shifted}, from one {from_one}"))?;
    Ok(format!(
        "{shapes} shapes nonzero, det(6,2,2) = 50; mismatch flagged: closed form holds with H shifted ({shifted}/{shapes}), \
         fails with H from 1 ({from_one}/{shapes})"
    ))
}

/// `Σ w(i,j) t^i (1-t)^j` evaluated directly at a rational point.
fn evaluate(w: &ChipConfiguration, t: &BigRational) -> BigRational {
    let s = BigRational::one() - t;
    w.iter().map(|(c, v)| BigRational::from(v.clone()) * Pow::pow(t, c.i) * Pow::pow(&s, c.j)).sum()
}

fn tightness(_: &Shared) -> Verdict {
    let samples: Vec<BigRational> =
        [(1, 3), (2, 7), (5, 4), (-3, 2)].iter().map(|&(a, b)| BigRational::new(a.into(), BigInt::from(b))).collect();
    for k in 0..=25u32 {
        ensure(family_identity(k) == Poly::constant(BigRational::one()), format!("identity fails at k = {k}"))?;
        for i in 0..=k {
            family_weight(k, i).map_err(|e| e.to_string())?;
        }
        let w = tightness_family(k).map_err(|e| e.to_string())?;
        let a = w.analyze().map_err(|e| e.to_string())?;
        ensure(is_outcome(&w, 2 * k + 1).map_err(|e| e.to_string())?, format!("k = {k} not an outcome"))?;
        ensure(a.degree == 2 * k as i64 + 1 && a.supp_plus.len() == k as usize + 2 && a.is_valid, format!("k = {k} shape"))?;
        ensure(samples.iter().all(|t| evaluate(&w, t).is_zero()), format!("k = {k} fails pointwise"))?;
    }
    Ok("k = 0..25 identity exact, outcomes of degree 2k+1 with k+2 positive entries, integral weights".into())
}

fn properties(_: &Shared) -> Verdict {
    let mut failed = Vec::new();
    for (name, suite) in props::SUITES {
        if let Err(e) = suite() {
            failed.push(format!("{name}: {e}"));
        }
    }
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{} suites x {} cases, seed {:#x}", props::SUITES.len(), props::CASES, props::SEED))
}

fn closing_check(s: &Shared) -> Verdict {
    let exceptional = [
        "2\n· ·\n· 7 ·\n· · · ·\n· · · · ·\n· · · · · ·\n· 7 · · · 7 ·\n-2 · · · · · · 2",
        "1\n· ·\n· · ·\n· · · ·\n· 7 · 7 ·\n· · · · · ·\n· · · 7 · · ·\n-1 · · · · · · 1",
    ];
    let n4: BTreeSet<&ChipConfiguration> = s.report.outcomes.iter().filter(|w| support_n(w) == 4).collect();
    for text in exceptional {
        ensure(n4.contains(&triangle(text)), "exceptional degree-7 outcome missing")?;
    }
    let check = check_conjecture(&s.report);
    ensure(check.holds, format!("{} violations", check.violations.len()))?;
    let eq: Vec<usize> = check.equality_cases.values().copied().collect();
    ensure(eq == [1, 1, 2, 4, 2], format!("equality cases {eq:?}"))?;
    Ok("both exceptional outcomes present; n <= d <= 2n-1 holds; equality cases 1,1,2,4,2".into())
}

fn main() {
    let start = Instant::now();
    let report = enumerate_fundamental_with(9, 5, &EnumerationOptions::default()).expect("enumeration runs");
    let shared = Shared { report, report_time: start.elapsed() };

    let criteria = [
        Criterion { id: 1, name: "support <= 3 classification", limit: Duration::from_secs(1), run: support_at_most_three },
        Criterion { id: 2, name: "fundamental outcome table", limit: mins(30), run: table_rows },
        Criterion { id: 3, name: "contraction set sizes", limit: mins(15), run: gamma_sizes },
        Criterion { id: 4, name: "support-4 sign survivors", limit: mins(5), run: support_four },
        Criterion { id: 5, name: "support-5 case pipeline", limit: mins(30), run: pipeline },
        Criterion { id: 6, name: "support-5 degree sweep", limit: mins(if long_run() { 600 } else { 30 }), run: sweep },
        Criterion { id: 7, name: "hexagon determinants", limit: mins(1), run: hexagon },
        Criterion { id: 8, name: "identity and tightness family", limit: Duration::from_secs(10), run: tightness },
        Criterion { id: 9, name: "property suites", limit: mins(30), run: properties },
        Criterion { id: 10, name: "closing computational check", limit: mins(30), run: closing_check },
    ];

    let mut failures = 0;
    for c in &criteria {
        let t = Instant::now();
        let verdict = (c.run)(&shared);
        // the shared enumeration counts against criterion 2
        let elapsed = t.elapsed() + if c.id == 2 { shared.report_time } else { Duration::ZERO };
        let verdict = verdict.and_then(|m| {
            if elapsed <= c.limit {
                Ok(m)
            } else {
                Err(format!("{m}; took {elapsed:.1?}, limit {:.0?}", c.limit))
            }
        });
        let (tag, detail) = match verdict {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {:>2} {tag} [{elapsed:>9.2?} / {:>6.0?}] {}: {detail}", c.id, c.limit, c.name);
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failures, criteria.len(), start.elapsed());
    if failures > 0 {
        std::process::exit(1);
    }
}

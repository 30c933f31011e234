//! The ten acceptance criteria, one printed line each (run with
//! `--nocapture` to see them when everything passes).

use dawk::report::Report;
use dawk::root_system::{default_catalog_ids, gated_catalog_ids, load_catalog, load_catalog_gated};
use dawk::suite::{self, CORE_TYPES};
use dawk::weyl::DoubleAffineWeyl;
use std::time::{Duration, Instant};

const SEED: u64 = 0xDA57;

struct Outcome {
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn per_type(f: impl Fn(&DoubleAffineWeyl) -> Report) -> (bool, String, Duration) {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for id in CORE_TYPES {
        let g = DoubleAffineWeyl::new(load_catalog(id).unwrap());
        let t = Instant::now();
        let r = f(&g);
        slowest = slowest.max(t.elapsed());
        failures.extend(r.failures().map(|c| format!("{id}:{}", c.id)));
    }
    (failures.is_empty(), failures.join(", "), slowest)
}

fn run(n: usize) -> Outcome {
    let t = Instant::now();
    let secs = Duration::from_secs;
    let (ok, detail, elapsed, limit) = match n {
        1 => {
            let ids: Vec<String> = default_catalog_ids()
                .into_iter()
                .chain(gated_catalog_ids())
                .collect();
            let data: Vec<_> = ids
                .iter()
                .map(|id| load_catalog_gated(id).unwrap())
                .collect();
            let r = suite::catalog_integrity(&data);
            let f: Vec<_> = r.failures().map(|c| c.id.clone()).collect();
            (
                f.is_empty(),
                format!("{} types; {}", ids.len(), f.join(", ")),
                t.elapsed(),
                secs(1),
            )
        }
        2 => {
            let (ok, d, e) = per_type(|g| suite::weyl_conformance(g, 4).unwrap());
            (ok, d, e, secs(10))
        }
        3 => {
            let (ok, d, e) = per_type(|g| suite::faithfulness(g, SEED, 1000, 20).unwrap());
            (ok, d, e, secs(30))
        }
        4 => {
            let (ok, d, e) = per_type(|g| suite::elliptic_quotient(g, SEED, 200).unwrap());
            (ok, d, e, secs(30))
        }
        5 => {
            let (ok, d, e) = per_type(|g| suite::semidirect_identities(g, SEED, 200).unwrap());
            (ok, d, e, secs(30))
        }
        6 => {
            let (ok, d, e) = per_type(|g| suite::level_actions(g, SEED, 100).unwrap());
            (ok, d, e, secs(30))
        }
        7 => {
            let (ok, d, e) = per_type(|g| suite::b3(g, SEED, 50).unwrap());
            (ok, d, e, secs(60))
        }
        8 => {
            let r = suite::derivations().unwrap();
            let f: Vec<_> = r.failures().map(|c| c.id.clone()).collect();
            (
                f.is_empty(),
                format!("{} checks; {}", r.checks.len(), f.join(", ")),
                t.elapsed(),
                secs(120),
            )
        }
        9 => {
            // only the composites and phi(C); relation images are a separate matter
            let (ok, d, e) = per_type(|g| {
                let mut r = suite::triple_cherednik_iso(g).unwrap();
                r.checks.retain(|c| {
                    c.id.starts_with("psi.phi(") || c.id.starts_with("phi.psi(") || c.id == "phi(C)"
                });
                let mut out = Report::new(r.suite.clone());
                for c in r.checks {
                    out.push(c);
                }
                out
            });
            (ok, d, e, secs(30))
        }
        10 => {
            let (ok, d, e) = per_type(|g| suite::refutation(g, 4).unwrap());
            (ok, d, e, secs(30))
        }
        _ => unreachable!(),
    };
    Outcome {
        ok,
        detail,
        elapsed,
        limit,
    }
}

const NAMES: [&str; 10] = [
    "catalog integrity",
    "double affine Weyl presentation conformance",
    "faithfulness round-trip",
    "elliptic quotient",
    "semidirect product identities",
    "level actions",
    "B3 / SL(2,Z) suite",
    "derivation fixtures",
    "triple / Cherednik isomorphism on generators",
    "refutation sanity",
];

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for n in 1..=10 {
        let o = run(n);
        let ok = o.ok && o.elapsed <= o.limit;
        println!(
            "criterion {n:>2} [{}] {} ({:.2?}, limit {:?}){}",
            if ok { "PASS" } else { "FAIL" },
            NAMES[n - 1],
            o.elapsed,
            o.limit,
            if o.detail.is_empty() || o.ok {
                String::new()
            } else {
                format!(" failing: {}", o.detail)
            }
        );
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}

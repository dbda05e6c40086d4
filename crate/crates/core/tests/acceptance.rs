//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use domtree::audit::{self, Status};
use domtree::checkers::{check, count_in_levels, Variant};
use domtree::constructions::construct;
use domtree::formulas::{closed_form, lemma_table};
use domtree::generators::{decompose_bottom, generate, CopyKind, Family, FamilySpec};
use domtree::graph::{Graph, Label, VertexSet};
use domtree::harness::{self, Agreement, VerifyOptions};
use domtree::solver::{oracle_minimum, solve_minimum};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

const FAMILIES: [Family; 2] = [Family::Hypertree, Family::SiblingTree];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graph(family: Family, n: u32) -> Graph {
    generate(FamilySpec::new(family, n).unwrap()).unwrap()
}

fn exact(g: &Graph, v: Variant) -> Option<usize> {
    solve_minimum(g, v, None).unwrap().value()
}

fn formula(family: Family, v: Variant, n: u32) -> usize {
    closed_form(family, v, n).unwrap().value_usize().unwrap()
}

fn lemma_values() -> Outcome {
    let table = lemma_table();
    for e in &table {
        let g = generate(e.graph).unwrap();
        let brute = oracle_minimum(&g, e.variant).unwrap().value();
        let bnb = exact(&g, e.variant);
        ensure(brute == Some(e.value) && bnb == Some(e.value), || {
            format!(
                "{} {}: table {}, oracle {brute:?}, solver {bnb:?}",
                e.graph, e.variant, e.value
            )
        })?;
    }
    Ok(format!("{} lemma values reproduced", table.len()))
}

fn small_closed_forms() -> Outcome {
    let rows = harness::verify(&VerifyOptions::default(), &harness::standard_formula)
        .map_err(|e| e.to_string())?;
    ensure(rows.len() == 24, || format!("{} rows", rows.len()))?;
    for r in &rows {
        ensure(r.oracle_value == r.solver_value, || {
            format!(
                "software fault: oracle {:?} vs solver {:?} on {:?}",
                r.oracle_value, r.solver_value, r
            )
        })?;
        ensure(r.agreement == Agreement::FullMatch, || {
            format!(
                "{} {} n={}: formula {}, solver {:?}, counterexample {:?}",
                r.family, r.variant, r.n, r.formula_value, r.solver_value, r.witness
            )
        })?;
    }
    let ht = graph(Family::Hypertree, 3);
    let st = graph(Family::SiblingTree, 3);
    ensure(
        exact(&ht, Variant::LocatingTotalDominating) == Some(7),
        || "HT(3) ltd".into(),
    )?;
    ensure(
        exact(&st, Variant::LocatingTotalDominating) == Some(9),
        || "ST(3) ltd".into(),
    )?;
    Ok("24 cases agree with closed forms".into())
}

fn medium_spot_checks() -> Outcome {
    let cases = [
        (Family::Hypertree, Variant::Dominating, 9),
        (Family::Hypertree, Variant::TotalDominating, 10),
        (Family::SiblingTree, Variant::Dominating, 9),
        (Family::SiblingTree, Variant::TotalDominating, 10),
    ];
    let mut slowest = Duration::ZERO;
    for (family, v, want) in cases {
        let start = Instant::now();
        let got = exact(&graph(family, 4), v);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(got == Some(want), || {
            format!("{family} {v} n=4: {got:?} != {want}")
        })?;
        ensure(took < Duration::from_secs(300), || {
            format!("{family} {v} took {took:?}")
        })?;
    }
    Ok(format!("4 values at n=4, slowest {slowest:?}"))
}

fn constructions() -> Outcome {
    let mut count = 0;
    for family in FAMILIES {
        for v in Variant::ALL {
            for n in 1..=10 {
                let g = graph(family, n);
                let s = construct(family, v, n).map_err(|e| e.to_string())?;
                let cert = check(&g, &s, v).unwrap();
                ensure(cert.valid, || {
                    format!("{family} {v} n={n}: {:?}", cert.witnesses.first())
                })?;
                let want = formula(family, v, n);
                ensure(s.len() == want, || {
                    format!("{family} {v} n={n}: size {} != {want}", s.len())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} constructions valid at closed-form size"))
}

fn structure() -> Outcome {
    for family in FAMILIES {
        for n in 1..=12u32 {
            let g = graph(family, n);
            ensure(g.vertex_count() == (1 << (n + 1)) - 1, || {
                format!("{family} n={n} vertices")
            })?;
            ensure(g.edge_count() == 3 * ((1 << n) - 1), || {
                format!("{family} n={n} edges")
            })?;
            for level in 1..=n {
                for v in g.level_members(level) {
                    let same = g
                        .neighbors(v)
                        .unwrap()
                        .into_iter()
                        .filter(|&u| g.level_of(u) == Some(level))
                        .count();
                    ensure(same == 1, || {
                        format!("{family} n={n}: {v} has {same} same-level neighbours")
                    })?;
                }
            }
            let kinds: &[(CopyKind, u32)] = match family {
                Family::Hypertree => &[(CopyKind::HtStar2, 2), (CopyKind::HtStar3, 3)],
                _ => &[(CopyKind::TerminalTriangle, 1)],
            };
            for &(kind, drop) in kinds {
                if n < kind.depth() {
                    continue;
                }
                let copies = decompose_bottom(&g, kind).map_err(|e| e.to_string())?;
                ensure(copies.len() == 1 << (n - drop), || {
                    format!("{family} n={n} {kind:?}: {} copies", copies.len())
                })?;
                let mut seen = BTreeSet::new();
                for c in &copies {
                    ensure(c.is_canonically_isomorphic(&g), || {
                        format!("{kind:?} copy at {:?}", c.top)
                    })?;
                    ensure(c.vertices.iter().all(|&v| seen.insert(v)), || {
                        format!("{kind:?} copies overlap")
                    })?;
                }
                let covered = seen
                    .iter()
                    .all(|&v| g.level_of(v).unwrap() > n - kind.depth());
                let size = g
                    .labels()
                    .iter()
                    .filter(|&&v| g.level_of(v).unwrap() > n - kind.depth())
                    .count();
                ensure(covered && seen.len() == size, || {
                    format!("{kind:?} copies do not tile the bottom levels")
                })?;
            }
        }
    }
    Ok("counts, matchings and copies hold for n <= 12".into())
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n: Label = rng.random_range(1..=12);
    let p: f64 = rng.random_range(0.15..0.75);
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(1..=n, edges).unwrap()
}

fn trusted_solver() -> Outcome {
    let mut corpus = Vec::new();
    for n in 0..=3 {
        corpus.push(graph(Family::Hypertree, n));
        corpus.push(graph(Family::SiblingTree, n));
    }
    corpus.push(graph(Family::RootFaultHypertree, 2));
    corpus.push(graph(Family::RootFaultHypertree, 3));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    corpus.extend((0..100).map(|_| random_graph(&mut rng)));

    for (i, g) in corpus.iter().enumerate() {
        let mut values = Vec::new();
        for v in Variant::ALL {
            let bnb = solve_minimum(g, v, None).unwrap();
            let brute = oracle_minimum(g, v).unwrap();
            ensure(bnb.value() == brute.value(), || {
                format!(
                    "graph #{i} {v}: solver {:?}, oracle {:?} (oracle set {:?})",
                    bnb.value(),
                    brute.value(),
                    brute.witness_set
                )
            })?;
            if let Some(w) = &bnb.witness_set {
                let cert = check(g, w, v).unwrap();
                ensure(cert.valid, || format!("graph #{i} {v}: witness {w} fails"))?;
            }
            values.push(bnb.value());
        }
        let [d, t, l, lt] = values[..] else {
            unreachable!()
        };
        let le = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        ensure(le(d, t) && le(t, lt) && le(d, l) && le(l, lt), || {
            format!("graph #{i}: chain broken {values:?}")
        })?;
    }
    Ok(format!("{} graphs x 4 variants agree", corpus.len()))
}

fn lemma_audit() -> Outcome {
    let findings = audit::audit_all(&FAMILIES, 2..=3).map_err(|e| e.to_string())?;
    let text = audit::to_json(&findings);
    let parsed: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(parsed.as_array().map(|a| a.len()) == Some(12), || {
        format!("{} findings", findings.len())
    })?;
    let b = findings
        .iter()
        .find(|f| f.claim_id == "ld-level-n" && f.family == Family::Hypertree && f.n == 2)
        .ok_or("missing ld-level-n HT(2)")?;
    ensure(b.status == Status::Refuted, || {
        format!("status {:?}", b.status)
    })?;
    ensure(b.counterexample.as_deref() == Some(&[2, 3, 4][..]), || {
        format!("counterexample {:?}", b.counterexample)
    })?;
    let g = graph(Family::Hypertree, 2);
    let s = VertexSet::from([2, 3, 4]);
    ensure(
        check(&g, &s, Variant::LocatingDominating).unwrap().valid,
        || "{2,3,4} not LD".into(),
    )?;
    ensure(exact(&g, Variant::LocatingDominating) == Some(3), || {
        "{2,3,4} not minimum".into()
    })?;
    ensure(
        count_in_levels(&g, &s, &BTreeSet::from([2])).unwrap() == 1,
        || "level count".into(),
    )?;
    let refuted = findings
        .iter()
        .filter(|f| f.status == Status::Refuted)
        .count();
    Ok(format!(
        "{} findings, {refuted} refuted, ld-level-n refuted on HT(2) by {{2, 3, 4}}",
        findings.len()
    ))
}

fn formula_sanity() -> Outcome {
    for family in FAMILIES {
        for v in Variant::ALL {
            for n in 1..=64 {
                closed_form(family, v, n).map_err(|e| format!("{family} {v} n={n}: {e}"))?;
            }
        }
    }
    let val = |f, v, n| closed_form(f, v, n).unwrap().value;
    for n in 1..=64 {
        for v in [
            Variant::Dominating,
            Variant::TotalDominating,
            Variant::LocatingDominating,
        ] {
            ensure(
                val(Family::Hypertree, v, n) == val(Family::SiblingTree, v, n),
                || format!("{v} n={n} differs"),
            )?;
        }
    }
    for family in FAMILIES {
        for n in 1..=30 {
            let [d, t, l, lt]: [BigUint; 4] = Variant::ALL.map(|v| val(family, v, n));
            ensure(d <= t && t <= lt && d <= l && l <= lt, || {
                format!("{family} n={n}: chain {d} {t} {l} {lt}")
            })?;
        }
    }
    Ok("divisible for n <= 64, families agree, chain holds for n <= 30".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 lemma values", Duration::from_secs(10), lemma_values),
        (
            "2 closed forms at oracle scale",
            Duration::from_secs(60),
            small_closed_forms,
        ),
        (
            "3 medium spot checks",
            Duration::from_secs(4 * 300),
            medium_spot_checks,
        ),
        (
            "4 construction contract",
            Duration::from_secs(30),
            constructions,
        ),
        (
            "5 structural invariants",
            Duration::from_secs(30),
            structure,
        ),
        (
            "6 solver trustworthiness",
            Duration::from_secs(600),
            trusted_solver,
        ),
        ("7 lemma audit", Duration::from_secs(300), lemma_audit),
        ("8 formula sanity", Duration::from_secs(1), formula_sanity),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|m| {
            if took <= limit {
                Ok(m)
            } else {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(msg) => println!("PASS criterion {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {msg}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}

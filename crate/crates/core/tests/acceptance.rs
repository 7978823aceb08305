//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;

use graphbrauer::autgroup::GraphAutomorphism;
use graphbrauer::bounds::{
    analyze, period_lower_loop_summand, verify_report, BoundsReport, Certificate, Direction, DivisorInterval,
    LoopVerdict, Rule, Target, Witness,
};
use graphbrauer::config::Config;
use graphbrauer::homology::fundamental_cycle_basis;
use graphbrauer::multigraph::{builtin, Multigraph};
use graphbrauer::oracle::{
    action_homomorphism, automorphism_counts, choice_independence, cocycle_identity, cyclic_vs_bar, snf_properties,
    SuiteResult,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

/// Analyzes a built-in under the default caps, verifies every certificate
/// and enforces the time limit.
fn run(name: &str, limit: Duration) -> Result<(Multigraph, BoundsReport, Duration), String> {
    let g = builtin(name).map_err(|e| e.to_string())?;
    let config = Config::default();
    let start = Instant::now();
    let report = analyze(&g, &config).map_err(|e| format!("{name}: {e}"))?;
    let took = start.elapsed();
    ensure(took < limit, || format!("{name}: took {took:.1?}, limit {limit:?}"))?;
    verify_report(&g, &report, &config).map_err(|e| format!("{name}: {e}"))?;
    Ok((g, report, took))
}

fn resolved(i: &DivisorInterval, value: u64) -> bool {
    i.resolved && i.lower == value && i.upper == value
}

fn certs(r: &BoundsReport, rule: Rule) -> impl Iterator<Item = &Certificate> {
    r.certificates.iter().filter(move |c| c.rule == rule)
}

fn edge_chain(g: &Multigraph, terms: &[(&str, i64)]) -> Vec<i64> {
    let mut z = vec![0; g.num_edges()];
    for (id, x) in terms {
        z[g.edge_position(id).expect("edge id")] = *x;
    }
    z
}

fn ac1() -> Check {
    let mut times = Vec::new();
    for genus in 3..=8u64 {
        let name = format!("doubled-cycle-g{genus}");
        let (_, r, took) = run(&name, Duration::from_secs(60))?;
        ensure(resolved(&r.period, genus - 1) && resolved(&r.index, genus - 1), || {
            format!("{name}: period {}, index {}", r.period, r.index)
        })?;
        times.push(took);
    }
    let slowest = times.iter().max().expect("six runs");
    Ok(format!("per = ind = g-1 for g = 3..8, slowest {slowest:.2?}"))
}

fn ac2() -> Check {
    let (g, r, took) = run("k5", Duration::from_secs(120))?;
    ensure(resolved(&r.period, 5) && resolved(&r.index, 5), || format!("period {}, index {}", r.period, r.index))?;
    let five_cycle = certs(&r, Rule::LoopSummand).any(|c| {
        matches!(c.witness, Witness::Loop { element_order: 5, .. }) && c.divisor == 5u64.into()
    });
    ensure(five_cycle, || "no LoopSummand certificate for a 5-cycle".into())?;

    let lat = fundamental_cycle_basis(&g);
    let three = GraphAutomorphism::from_vertex_map(&g, vec![1, 2, 0, 3, 4]).map_err(|e| e.to_string())?;
    let triangle = edge_chain(&g, &[("e12", 1), ("e23", 1), ("e13", -1)]);
    let verdict = period_lower_loop_summand(&lat, &three.to_permutation(), &triangle).map_err(|e| e.to_string())?;
    let LoopVerdict::NotApplicable(why) = verdict else {
        return Err(format!("((123), triangle) gave {verdict:?}"));
    };
    Ok(format!("per = ind = 5, 5-cycle loop certificate, ((123), triangle): {why}, {took:.2?}"))
}

fn ac3() -> Check {
    let (_, r, took) = run("doubled-k4", Duration::from_secs(60))?;
    ensure(resolved(&r.period, 2) && resolved(&r.index, 2), || format!("period {}, index {}", r.period, r.index))?;
    ensure(certs(&r, Rule::GenusIndex).any(|c| c.divisor == 6u64.into()), || "no g-1 = 6 certificate".into())?;
    let six = BigUint::from(6u32);
    let orbit = certs(&r, Rule::OrbitSubgraph)
        .find(|c| c.direction == Direction::Upper && six.gcd(&c.divisor.0) <= BigUint::from(2u32))
        .ok_or("no orbit divisor bringing the gcd to at most 2")?;
    Ok(format!("per = ind = 2 from gcd(6, {}), {took:.2?}", orbit.divisor))
}

fn ac4() -> Check {
    let (g, r, took) = run("hybrid", Duration::from_secs(300))?;
    ensure(resolved(&r.period, 4) && resolved(&r.index, 4), || format!("period {}, index {}", r.period, r.index))?;
    let doubled_square: BTreeSet<String> =
        ["e1", "e2", "e3", "e4", "f1", "f2", "f3", "f4"].iter().map(|s| s.to_string()).collect();
    let used = certs(&r, Rule::SubgraphPropagation).any(|c| {
        c.divisor == 4u64.into()
            && matches!(&c.witness, Witness::Subgraph { edges, .. }
                if edges.iter().cloned().collect::<BTreeSet<_>>() == doubled_square)
    });
    ensure(used, || "no SubgraphPropagation certificate from the doubled 4-cycle".into())?;
    ensure(g.num_vertices() == 8, || "unexpected hybrid graph".into())?;
    Ok(format!("per = ind = 4 with propagation from the doubled 4-cycle, {took:.2?}"))
}

fn ac5() -> Check {
    let (_, r, took) = run("k34", Duration::from_secs(60))?;
    ensure(resolved(&r.period, 1) && resolved(&r.index, 1), || format!("period {}, index {}", r.period, r.index))?;
    Ok(format!("per = ind = 1, {took:.2?}"))
}

fn ac6() -> Check {
    let (_, r, took) = run("soccer-doubled", Duration::from_secs(600))?;
    let p = &r.period;
    ensure(p.lower == 30 && p.upper == 60 && !p.resolved, || format!("period {p}"))?;
    ensure(r.index.upper == 60 && !r.index.resolved, || format!("index {}", r.index))?;
    let sound = r.certificates.iter().all(|c| c.target != Target::Period || c.direction != Direction::Lower || c.divisor <= 30u64.into());
    ensure(sound, || "a period lower bound above 30".into())?;
    Ok(format!("period in [30, 60], index | 60, unresolved, {took:.2?}"))
}

fn suite(s: SuiteResult, min_instances: usize) -> Result<String, String> {
    match &s.failure {
        Some(_) => Err(s.to_string()),
        None if s.instances < min_instances => Err(format!("{}: only {} instances", s.name, s.instances)),
        None => Ok(format!("{} ({})", s.name, s.instances)),
    }
}

fn ac7() -> Check {
    suite(cyclic_vs_bar(0, 50, Default::default()), 50)
}

fn ac8() -> Check {
    let parts = [
        suite(snf_properties(0, 200, 20), 200)?,
        suite(cocycle_identity(0, 1000), 11_000)?,
        suite(action_homomorphism(0, 200, 6), 1)?,
        suite(choice_independence(0, 20), 20)?,
    ];
    Ok(parts.join("; "))
}

fn ac9() -> Check {
    suite(automorphism_counts(0), 1)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 doubled cycles", ac1),
        ("AC2 K5", ac2),
        ("AC3 doubled K4", ac3),
        ("AC4 hybrid", ac4),
        ("AC5 K3,4", ac5),
        ("AC6 soccer-doubled", ac6),
        ("AC7 cyclic vs bar", ac7),
        ("AC8 property suites", ac8),
        ("AC9 automorphism counts", ac9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

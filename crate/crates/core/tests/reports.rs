use num_bigint::BigUint;
use num_traits::Zero;

use graphbrauer::autgroup::{automorphism_group, GraphAutomorphism};
use graphbrauer::bounds::{analyze, verify_report, AnalysisError, BoundsReport, DivisorInterval, Witness};
use graphbrauer::cli::render_text;
use graphbrauer::cohomology::{build_path_cocycle, class_order_cyclic, class_order_exact, ClassOrder};
use graphbrauer::config::Config;
use graphbrauer::homology::fundamental_cycle_basis;
use graphbrauer::multigraph::{builtin, Multigraph};

const SMALL: &[&str] = &["doubled-cycle-g3", "doubled-cycle-g4", "doubled-cycle-g5", "k5", "doubled-k4", "k34"];

fn divides(a: u64, b: u64) -> bool {
    b.is_multiple_of(a)
}

fn report(g: &Multigraph, config: &Config) -> BoundsReport {
    match analyze(g, config) {
        Ok(r) => r,
        Err(AnalysisError::ResourceCap { report }) => *report,
        Err(e) => panic!("{}: {e}", g.name()),
    }
}

fn nested(weak: &DivisorInterval, strong: &DivisorInterval) -> bool {
    divides(weak.lower, strong.lower) && divides(strong.upper, weak.upper)
}

#[test]
fn reports_verify_and_respect_divisibility() {
    let config = Config::default();
    for name in SMALL {
        let g = builtin(name).unwrap();
        let r = analyze(&g, &config).unwrap();
        verify_report(&g, &r, &config).unwrap_or_else(|e| panic!("{name}: {e}"));
        let (p, i) = (r.period, r.index);
        assert!(divides(p.lower, p.upper) && divides(i.lower, i.upper), "{name}");
        assert!(divides(p.lower, i.lower) && divides(p.upper, i.upper), "{name}: period | index");
        assert!(divides(i.upper, g.genus() as u64 - 1), "{name}: index | g-1");
        assert!((r.aut_order.clone() % BigUint::from(p.upper)).is_zero(), "{name}: period | |Aut|");
    }
}

#[test]
fn json_round_trip_is_lossless() {
    let config = Config::default();
    for name in SMALL {
        let g = builtin(name).unwrap();
        let r = analyze(&g, &config).unwrap();
        let back: BoundsReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r, "{name}");
        verify_report(&g, &back, &config).unwrap();
        assert!(render_text(&r).contains(&format!("genus   {}", r.genus)));
    }
}

#[test]
fn tighter_caps_only_widen_the_intervals() {
    let weak = Config { enum_cap: 1, bar_cap: 1, union_cap: 1, subgraph_depth: 0, ..Config::default() };
    for name in SMALL {
        let g = builtin(name).unwrap();
        let strong = report(&g, &Config::default());
        let loose = report(&g, &weak);
        assert!(nested(&loose.period, &strong.period), "{name}: {} vs {}", loose.period, strong.period);
        assert!(nested(&loose.index, &strong.index), "{name}: {} vs {}", loose.index, strong.index);
    }
}

#[test]
fn loop_orders_divide_cyclic_class_orders() {
    let config = Config::default();
    let mut seen = 0;
    for name in SMALL {
        let g = builtin(name).unwrap();
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        for cert in analyze(&g, &config).unwrap().certificates {
            if let Witness::Loop { automorphism, element_order, .. } = &cert.witness {
                let sigma = GraphAutomorphism::from_doc(&g, automorphism).unwrap().to_permutation();
                let order = class_order_cyclic(&c, &sigma).unwrap();
                assert!(divides(*element_order, order), "{name}: loop {element_order}, class {order}");
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn exact_orders_divide_the_group_and_match_resolved_periods() {
    let config = Config::default();
    for name in SMALL {
        let g = builtin(name).unwrap();
        let group = automorphism_group(&g);
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        let exact = class_order_exact(&c, &group, &config.exact_caps()).unwrap();
        let r = analyze(&g, &config).unwrap();
        match exact.order {
            ClassOrder::Exact(n) => {
                assert!((group.order() % BigUint::from(n)).is_zero(), "{name}");
                assert_eq!((r.period.lower, r.period.upper), (n, n), "{name}");
            }
            ClassOrder::Unknown { lower, upper } => {
                assert!(divides(lower, r.period.lower), "{name}");
                assert!((upper % BigUint::from(r.period.upper)).is_zero(), "{name}");
            }
        }
    }
}

//! Divisor bounds on the period and index, each backed by a certificate
//! that can be re-checked from its witness alone, and the full analysis
//! pipeline that assembles them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::autgroup::{automorphism_group, AutomorphismDoc, GraphAutomorphism};
use crate::cohomology::{
    build_path_cocycle, class_order_bar, class_order_cyclic, cyclic_restrictions, restrict, sylow_restrictions,
    CohomologyError, PathCocycle,
};
use crate::config::{Config, ConfigError};
use crate::homology::{boundary, fundamental_cycle_basis, Chain, CycleLattice};
use crate::multigraph::{Multigraph, STANDING_DEGREE};
use crate::permgroup::{p_part, Permutation, PermutationGroup};

/// `lower | quantity | upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorInterval {
    pub lower: u64,
    pub upper: u64,
    pub resolved: bool,
}

impl DivisorInterval {
    pub fn new(lower: u64, upper: u64) -> Self {
        DivisorInterval { lower, upper, resolved: lower == upper }
    }
}

impl fmt::Display for DivisorInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.resolved {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "{} | . | {}", self.lower, self.upper)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    GenusIndex,
    OrbitSubgraph,
    AutOrder,
    LoopSummand,
    CyclicRestriction,
    SylowExact,
    SubgraphPropagation,
    PeriodDividesIndex,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::GenusIndex => "GenusIndex",
            Rule::OrbitSubgraph => "OrbitSubgraph",
            Rule::AutOrder => "AutOrder",
            Rule::LoopSummand => "LoopSummand",
            Rule::CyclicRestriction => "CyclicRestriction",
            Rule::SylowExact => "SylowExact",
            Rule::SubgraphPropagation => "SubgraphPropagation",
            Rule::PeriodDividesIndex => "PeriodDividesIndex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Period,
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

/// A divisor; JSON number when it fits in `u64`, decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor(pub BigUint);

impl From<u64> for Divisor {
    fn from(x: u64) -> Self {
        Divisor(BigUint::from(x))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&self.0.to_str_radix(10)),
        }
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Divisor::from(x)),
            Repr::Str(s) => s
                .parse::<BigUint>()
                .map(Divisor)
                .map_err(|_| serde::de::Error::custom(format!("invalid decimal `{s}`"))),
        }
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(format!("invalid decimal `{s}`")))
    }
}

/// What a certificate's divisor is derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Genus {
        genus: usize,
    },
    AutomorphismGroup {
        #[serde(with = "decimal")]
        order: BigUint,
    },
    /// An invariant edge set; the divisor is its size.
    EdgeSet { edges: Vec<String> },
    /// An invariant vertex set; the divisor is twice its size.
    VertexSet { vertices: Vec<String> },
    Loop {
        automorphism: AutomorphismDoc,
        element_order: u64,
        chain: BTreeMap<String, i64>,
        start: String,
    },
    Cyclic {
        automorphism: AutomorphismDoc,
        element_order: u64,
        class_order: u64,
    },
    Sylow {
        prime: u64,
        sylow_order: u64,
        class_order: u64,
        generators: Vec<AutomorphismDoc>,
    },
    Subgraph {
        edges: Vec<String>,
        depth: u32,
        period: DivisorInterval,
        index: DivisorInterval,
    },
    /// The other quantity's bound, via `period | index`.
    Interval { of: Target, end: Direction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub rule: Rule,
    pub target: Target,
    pub direction: Direction,
    pub divisor: Divisor,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsReport {
    pub graph: String,
    pub genus: usize,
    #[serde(with = "decimal")]
    pub aut_order: BigUint,
    pub period: DivisorInterval,
    pub index: DivisorInterval,
    pub certificates: Vec<Certificate>,
    pub status: Vec<String>,
}

impl BoundsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("loop is not a closed edge chain")]
    NotAClosedChain,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no bound established under the resource caps")]
    ResourceCap { report: Box<BoundsReport> },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate check failed: {0}")]
pub struct VerifyError(pub String);

/// Hypothesis of the loop criterion that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inapplicable {
    NotSimple,
    NotFixed,
    NoSegment,
    NotASummand,
}

impl fmt::Display for Inapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inapplicable::NotSimple => "not a simple cycle",
            Inapplicable::NotFixed => "class not fixed",
            Inapplicable::NoSegment => "no segment whose translates tile the loop",
            Inapplicable::NotASummand => "not a summand",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopVerdict {
    /// `m = ord(σ)` divides the period; `start` begins a tiling segment.
    Fires { m: u64, start: usize, segment: Chain },
    NotApplicable(Inapplicable),
}

/// Directed traversal of a simple cycle given as a `±1` chain, starting at
/// its smallest vertex: `(vertex, edge, sign)` steps.
fn cycle_walk(g: &Multigraph, z: &[i64]) -> Option<Vec<(usize, usize, i64)>> {
    let mut next: BTreeMap<usize, (usize, usize, i64)> = BTreeMap::new();
    let mut support = 0;
    for (e, &x) in z.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x.abs() != 1 {
            return None;
        }
        support += 1;
        let edge = &g.edges()[e];
        let (from, to) = if x == 1 { (edge.tail, edge.head) } else { (edge.head, edge.tail) };
        if next.insert(from, (e, to, x)).is_some() {
            return None;
        }
    }
    let start = *next.keys().next()?;
    let mut walk = Vec::with_capacity(support);
    let mut v = start;
    loop {
        let &(e, to, x) = next.get(&v)?;
        walk.push((v, e, x));
        v = to;
        if v == start || walk.len() > support {
            break;
        }
    }
    (walk.len() == support && v == start).then_some(walk)
}

fn add_into(acc: &mut [i64], z: &[i64]) {
    for (a, b) in acc.iter_mut().zip(z) {
        *a += b;
    }
}

/// `Σ_{i<m} σ^i z`.
fn orbit_sum(lat: &CycleLattice, sigma: &Permutation, m: u64, z: &[i64]) -> Chain {
    let mut acc = z.to_vec();
    let mut cur = z.to_vec();
    for _ in 1..m {
        cur = lat.act(sigma, &cur);
        add_into(&mut acc, &cur);
    }
    acc
}

/// The loop criterion: when a simple cycle `L` is fixed by `σ`, is tiled by
/// the `σ`-translates of a segment from `v` to `σ(v)`, and `ℤ·L` is a
/// `⟨σ⟩`-direct summand, then `ord(σ)` divides the period.
///
/// The summand test asks that the image of `L` in the coinvariants be
/// primitive modulo torsion.
pub fn period_lower_loop_summand(lat: &CycleLattice, sigma: &Permutation, lp: &[i64]) -> Result<LoopVerdict, BoundsError> {
    let g = lat.graph();
    if lp.len() != g.num_edges() || boundary(g, lp).iter().any(|&x| x != 0) {
        return Err(BoundsError::NotAClosedChain);
    }
    let Some(walk) = cycle_walk(g, lp) else {
        return Ok(LoopVerdict::NotApplicable(Inapplicable::NotSimple));
    };
    if lat.act(sigma, lp) != lp {
        return Ok(LoopVerdict::NotApplicable(Inapplicable::NotFixed));
    }
    let m = sigma.order();
    let position: BTreeMap<usize, usize> = walk.iter().enumerate().map(|(i, &(v, _, _))| (v, i)).collect();
    let mut found = None;
    for (i, &(v, _, _)) in walk.iter().enumerate() {
        let w = sigma.apply(v);
        let Some(&j) = position.get(&w) else { continue };
        if j == i {
            continue;
        }
        let mut segment = vec![0; g.num_edges()];
        let mut k = i;
        while k != j {
            let (_, e, x) = walk[k];
            segment[e] += x;
            k = (k + 1) % walk.len();
        }
        if orbit_sum(lat, sigma, m, &segment) == lp {
            found = Some((v, segment));
            break;
        }
    }
    let Some((start, segment)) = found else {
        return Ok(LoopVerdict::NotApplicable(Inapplicable::NoSegment));
    };
    if !lat.coinvariant_image(sigma, &lat.coords_big(lp)).primitive {
        return Ok(LoopVerdict::NotApplicable(Inapplicable::NotASummand));
    }
    Ok(LoopVerdict::Fires { m, start, segment })
}

/// Loops tried for `σ`: fixed fundamental cycles, orbit sums of
/// fundamental cycles, and orbit sums of an edge or tree path from `v` to
/// `σ(v)` for one `v` per `⟨σ⟩`-orbit.
pub fn loop_candidates(lat: &CycleLattice, sigma: &Permutation, m: u64) -> Vec<Chain> {
    let g = lat.graph();
    let nv = g.num_vertices();
    let mut seen: HashSet<Chain> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |z: Chain, out: &mut Vec<Chain>| {
        if z.iter().any(|&x| x != 0) && seen.insert(z.clone()) {
            out.push(z);
        }
    };
    for b in lat.basis() {
        if &lat.act(sigma, b) == b {
            push(b.clone(), &mut out);
        }
        push(orbit_sum(lat, sigma, m, b), &mut out);
    }
    let mut visited = vec![false; nv];
    let adjacency = g.adjacency();
    for v in 0..nv {
        if visited[v] {
            continue;
        }
        let mut x = v;
        loop {
            visited[x] = true;
            x = sigma.apply(x);
            if x == v {
                break;
            }
        }
        let w = sigma.apply(v);
        if w == v {
            continue;
        }
        for &(e, u) in &adjacency[v] {
            if u == w {
                let mut s = vec![0; g.num_edges()];
                s[e] = if g.edges()[e].tail == v { 1 } else { -1 };
                push(orbit_sum(lat, sigma, m, &s), &mut out);
            }
        }
        push(orbit_sum(lat, sigma, m, &lat.tree_path(v, w)), &mut out);
    }
    out
}

fn chain_doc(g: &Multigraph, z: &[i64]) -> BTreeMap<String, i64> {
    z.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(e, &x)| (g.edges()[e].id.clone(), x))
        .collect()
}

fn chain_from_doc(g: &Multigraph, doc: &BTreeMap<String, i64>) -> Result<Chain, VerifyError> {
    let mut z = vec![0; g.num_edges()];
    for (id, &x) in doc {
        let e = g.edge_position(id).ok_or_else(|| VerifyError(format!("unknown edge `{id}`")))?;
        z[e] = x;
    }
    Ok(z)
}

fn automorphism_doc(g: &Multigraph, p: &Permutation) -> AutomorphismDoc {
    GraphAutomorphism::from_permutation(g, p)
        .expect("group elements are automorphisms")
        .to_doc(g)
}

fn permutation_from_doc(g: &Multigraph, doc: &AutomorphismDoc) -> Result<Permutation, VerifyError> {
    GraphAutomorphism::from_doc(g, doc)
        .map(|a| a.to_permutation())
        .map_err(|e| VerifyError(e.to_string()))
}

/// Edge orbits (edge indices) and vertex orbits of `G` on `Γ`.
pub fn orbits(g: &Multigraph, group: &PermutationGroup) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let nv = g.num_vertices();
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for o in group.orbits() {
        if o[0] < nv {
            vertices.push(o);
        } else {
            edges.push(o.into_iter().map(|x| x - nv).collect());
        }
    }
    (edges, vertices)
}

fn incident_vertices(g: &Multigraph, edges: &[usize]) -> BTreeSet<usize> {
    edges.iter().flat_map(|&e| [g.edges()[e].tail, g.edges()[e].head]).collect()
}

/// Unions of edge orbits given as bitmasks: every nonempty one when
/// `2^k <= cap`, otherwise the single orbits and the whole edge set.
fn orbit_unions(k: usize, cap: u64) -> (Vec<u64>, bool) {
    let full = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    if k < 63 && (1u64 << k) <= cap {
        ((1..=full).collect(), true)
    } else {
        let mut masks: Vec<u64> = (0..k.min(64)).map(|i| 1u64 << i).collect();
        if k > 1 {
            masks.push(full);
        }
        (masks, false)
    }
}

fn union_edges(orbits: &[Vec<usize>], mask: u64) -> Vec<usize> {
    let mut edges: Vec<usize> = orbits
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .flat_map(|(_, o)| o.iter().copied())
        .collect();
    edges.sort_unstable();
    edges
}

fn edge_ids(g: &Multigraph, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&e| g.edges()[e].id.clone()).collect()
}

fn vertex_ids(g: &Multigraph, vs: impl IntoIterator<Item = usize>) -> Vec<String> {
    vs.into_iter().map(|v| g.vertices()[v].clone()).collect()
}

/// Multiples of the index, one certificate each: `g − 1`, edge-orbit sizes,
/// twice vertex-orbit sizes, and `e₀(S)`, `2·v₀(S)` for unions `S` of edge
/// orbits. The flag reports whether every union was enumerated.
pub fn index_upper_divisors(g: &Multigraph, group: &PermutationGroup, union_cap: u64) -> (Vec<Certificate>, bool) {
    let mut out = vec![Certificate {
        rule: Rule::GenusIndex,
        target: Target::Index,
        direction: Direction::Upper,
        divisor: Divisor::from(g.genus() as u64 - 1),
        witness: Witness::Genus { genus: g.genus() },
    }];
    let orbit_cert = |divisor: u64, witness: Witness| Certificate {
        rule: Rule::OrbitSubgraph,
        target: Target::Index,
        direction: Direction::Upper,
        divisor: Divisor::from(divisor),
        witness,
    };
    let (edge_orbits, vertex_orbits) = orbits(g, group);
    let mut vertex_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for w in &vertex_orbits {
        vertex_sets.insert(w.clone());
        out.push(orbit_cert(2 * w.len() as u64, Witness::VertexSet { vertices: vertex_ids(g, w.iter().copied()) }));
    }
    let (masks, complete) = orbit_unions(edge_orbits.len(), union_cap);
    for mask in masks {
        let edges = union_edges(&edge_orbits, mask);
        out.push(orbit_cert(edges.len() as u64, Witness::EdgeSet { edges: edge_ids(g, &edges) }));
        let vs: Vec<usize> = incident_vertices(g, &edges).into_iter().collect();
        if vertex_sets.insert(vs.clone()) {
            out.push(orbit_cert(2 * vs.len() as u64, Witness::VertexSet { vertices: vertex_ids(g, vs) }));
        }
    }
    (out, complete)
}

/// Bounds contributed by one proper invariant subgraph.
#[derive(Debug, Clone)]
pub struct SubgraphBound {
    pub edges: Vec<usize>,
    pub report: BoundsReport,
    pub certificates: Vec<Certificate>,
}

fn meets_degree_filter(s: &Multigraph) -> bool {
    s.degrees().iter().all(|&d| d >= STANDING_DEGREE)
}

/// Proper unions of edge orbits whose incident subgraph is connected with
/// every vertex of degree at least 4, as standalone graphs.
pub fn invariant_subgraphs(g: &Multigraph, group: &PermutationGroup, union_cap: u64) -> Vec<(Vec<usize>, Multigraph)> {
    let (edge_orbits, _) = orbits(g, group);
    let k = edge_orbits.len();
    let (masks, _) = orbit_unions(k, union_cap);
    let mut out = Vec::new();
    for mask in masks {
        let edges = union_edges(&edge_orbits, mask);
        if edges.len() == g.num_edges() {
            continue;
        }
        let name = format!("{}/{}", g.name(), mask);
        if let Ok(s) = g.edge_subgraph(&edges, &name) {
            if meets_degree_filter(&s) {
                out.push((edges, s));
            }
        }
    }
    out
}

/// Runs `analyze` on each invariant subgraph and turns its resolved period
/// and index into upper divisors for `Γ`.
pub fn propagate_subgraph<F>(g: &Multigraph, group: &PermutationGroup, union_cap: u64, depth: u32, analyze: F) -> Vec<SubgraphBound>
where
    F: Fn(&Multigraph) -> Result<BoundsReport, AnalysisError>,
{
    let mut out = Vec::new();
    for (edges, s) in invariant_subgraphs(g, group, union_cap) {
        let Ok(report) = analyze(&s) else { continue };
        let witness = Witness::Subgraph {
            edges: edge_ids(g, &edges),
            depth,
            period: report.period,
            index: report.index,
        };
        let mut certificates = Vec::new();
        for (target, interval) in [(Target::Period, report.period), (Target::Index, report.index)] {
            if interval.resolved {
                certificates.push(Certificate {
                    rule: Rule::SubgraphPropagation,
                    target,
                    direction: Direction::Upper,
                    divisor: Divisor::from(interval.upper),
                    witness: witness.clone(),
                });
            }
        }
        out.push(SubgraphBound { edges, report, certificates });
    }
    out
}

/// Full analysis with the configured subgraph recursion depth.
pub fn analyze(g: &Multigraph, config: &Config) -> Result<BoundsReport, AnalysisError> {
    analyze_at_depth(g, config, config.subgraph_depth)
}

fn as_u64(x: &BigUint) -> u64 {
    x.to_u64().expect("bounded by the genus")
}

pub fn analyze_at_depth(g: &Multigraph, config: &Config, depth: u32) -> Result<BoundsReport, AnalysisError> {
    config.validate()?;
    let group = automorphism_group(g);
    let aut_order = group.order();
    let lat = fundamental_cycle_basis(g);
    let cocycle = build_path_cocycle(&lat);
    let caps = config.exact_caps();
    let mut certs: Vec<Certificate> = Vec::new();
    let mut status: Vec<String> = Vec::new();

    let low = g.below_standing_degree();
    if !low.is_empty() {
        status.push(format!(
            "{} vertices of degree below {}: {}",
            low.len(),
            STANDING_DEGREE,
            vertex_ids(g, low).join(", ")
        ));
    }

    // index upper bound
    let (index_divisors, unions_complete) = index_upper_divisors(g, &group, config.union_cap);
    if !unions_complete {
        status.push(format!("orbit unions limited to single orbits: union cap {}", config.union_cap));
    }
    let mut index_upper = 0u64;
    for c in index_divisors {
        let d = as_u64(&c.divisor.0);
        let next = index_upper.gcd(&d);
        if c.rule == Rule::GenusIndex || next != index_upper {
            index_upper = next;
            certs.push(c);
        }
    }

    let mut period_upper = aut_order.clone();
    certs.push(Certificate {
        rule: Rule::AutOrder,
        target: Target::Period,
        direction: Direction::Upper,
        divisor: Divisor(aut_order.clone()),
        witness: Witness::AutomorphismGroup { order: aut_order.clone() },
    });

    if depth > 0 {
        let subs = propagate_subgraph(g, &group, config.union_cap, depth - 1, |s| {
            analyze_at_depth(s, config, depth - 1)
        });
        for sub in subs {
            for c in sub.certificates {
                let d = as_u64(&c.divisor.0);
                match c.target {
                    Target::Period => period_upper = period_upper.gcd(&BigUint::from(d)),
                    Target::Index => index_upper = index_upper.gcd(&d),
                }
                certs.push(c);
            }
        }
    }

    // exact Sylow parts
    let mut period_lower = 1u64;
    let mut caps_hit = false;
    for s in sylow_restrictions(&cocycle, &group, &caps) {
        let Some(k) = s.class_order else {
            caps_hit = true;
            status.extend(s.note);
            continue;
        };
        let witness = Witness::Sylow {
            prime: s.prime,
            sylow_order: as_u64(&s.sylow_order),
            class_order: k,
            generators: s.generators.iter().map(|x| automorphism_doc(g, x)).collect(),
        };
        if k > 1 {
            period_lower = period_lower.lcm(&k);
            certs.push(Certificate {
                rule: Rule::SylowExact,
                target: Target::Period,
                direction: Direction::Lower,
                divisor: Divisor::from(k),
                witness: witness.clone(),
            });
        }
        let upper = &aut_order / &s.sylow_order * BigUint::from(k);
        if upper != aut_order {
            period_upper = period_upper.gcd(&upper);
            certs.push(Certificate {
                rule: Rule::SylowExact,
                target: Target::Period,
                direction: Direction::Upper,
                divisor: Divisor(upper),
                witness,
            });
        }
    }

    // cyclic restrictions, one certificate per new class order
    let (cyclic, complete) = cyclic_restrictions(&cocycle, &group, &caps)?;
    if !complete {
        caps_hit = true;
        status.push(format!(
            "cyclic scan sampled {} subgroups: group order {} exceeds enumeration cap {}",
            cyclic.len(),
            aut_order,
            config.enum_cap
        ));
    }
    let mut seen_orders = BTreeSet::new();
    for r in &cyclic {
        if r.class_order > 1 && seen_orders.insert(r.class_order) {
            period_lower = period_lower.lcm(&r.class_order);
            certs.push(Certificate {
                rule: Rule::CyclicRestriction,
                target: Target::Period,
                direction: Direction::Lower,
                divisor: Divisor::from(r.class_order),
                witness: Witness::Cyclic {
                    automorphism: automorphism_doc(g, &r.sigma),
                    element_order: r.element_order,
                    class_order: r.class_order,
                },
            });
        }
    }

    // loop summands
    let mut loop_lcm = 1u64;
    for r in &cyclic {
        let m = r.element_order;
        if m == 1 || loop_lcm.is_multiple_of(m) {
            continue;
        }
        for lp in loop_candidates(&lat, &r.sigma, m) {
            if let Ok(LoopVerdict::Fires { m, start, .. }) = period_lower_loop_summand(&lat, &r.sigma, &lp) {
                loop_lcm = loop_lcm.lcm(&m);
                certs.push(Certificate {
                    rule: Rule::LoopSummand,
                    target: Target::Period,
                    direction: Direction::Lower,
                    divisor: Divisor::from(m),
                    witness: Witness::Loop {
                        automorphism: automorphism_doc(g, &r.sigma),
                        element_order: m,
                        chain: chain_doc(g, &lp),
                        start: g.vertices()[start].clone(),
                    },
                });
                break;
            }
        }
    }
    period_lower = period_lower.lcm(&loop_lcm);

    // assembly through `period | index`
    let before = period_upper.clone();
    period_upper = period_upper.gcd(&BigUint::from(index_upper));
    if period_upper != before {
        certs.push(Certificate {
            rule: Rule::PeriodDividesIndex,
            target: Target::Period,
            direction: Direction::Upper,
            divisor: Divisor::from(index_upper),
            witness: Witness::Interval { of: Target::Index, end: Direction::Upper },
        });
    }
    if period_lower > 1 {
        certs.push(Certificate {
            rule: Rule::PeriodDividesIndex,
            target: Target::Index,
            direction: Direction::Lower,
            divisor: Divisor::from(period_lower),
            witness: Witness::Interval { of: Target::Period, end: Direction::Lower },
        });
    }
    let period_upper = as_u64(&period_upper);
    if !period_upper.is_multiple_of(period_lower) || !index_upper.is_multiple_of(period_lower) {
        return Err(AnalysisError::Inconsistent(format!(
            "{}: period lower {} does not divide upper {} / index upper {}",
            g.name(),
            period_lower,
            period_upper,
            index_upper
        )));
    }
    certs.sort_by(|a, b| a.rule.as_str().cmp(b.rule.as_str()).then_with(|| a.divisor.cmp(&b.divisor)));

    let report = BoundsReport {
        graph: g.name().to_string(),
        genus: g.genus(),
        aut_order,
        period: DivisorInterval::new(period_lower, period_upper),
        index: DivisorInterval::new(period_lower, index_upper),
        certificates: certs,
        status,
    };
    if caps_hit && period_lower == 1 && period_upper > 1 {
        return Err(AnalysisError::ResourceCap { report: Box::new(report) });
    }
    Ok(report)
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, got: T, want: T) -> Result<(), VerifyError> {
    if got == want {
        Ok(())
    } else {
        Err(VerifyError(format!("{what}: recomputed {got}, certificate claims {want}")))
    }
}

fn expect_shape(c: &Certificate, target: Target, direction: Direction) -> Result<(), VerifyError> {
    if c.target == target && c.direction == direction {
        Ok(())
    } else {
        Err(VerifyError(format!("{} certificate has the wrong target or direction", c.rule.as_str())))
    }
}

fn is_invariant(group: &PermutationGroup, points: &BTreeSet<usize>) -> bool {
    group
        .generators()
        .iter()
        .all(|s| points.iter().all(|&x| points.contains(&s.apply(x))))
}

/// Re-derives one certificate from its witness. `report` supplies the
/// intervals referenced by `PeriodDividesIndex`.
pub fn verify_certificate(g: &Multigraph, report: &BoundsReport, c: &Certificate, config: &Config) -> Result<(), VerifyError> {
    let group = automorphism_group(g);
    let nv = g.num_vertices();
    let claimed = &c.divisor.0;
    match (c.rule, &c.witness) {
        (Rule::GenusIndex, Witness::Genus { genus }) => {
            expect_shape(c, Target::Index, Direction::Upper)?;
            expect_eq("genus", g.genus(), *genus)?;
            expect_eq("divisor", BigUint::from(g.genus() - 1), claimed.clone())
        }
        (Rule::AutOrder, Witness::AutomorphismGroup { order }) => {
            expect_shape(c, Target::Period, Direction::Upper)?;
            expect_eq("group order", group.order(), order.clone())?;
            expect_eq("divisor", group.order(), claimed.clone())
        }
        (Rule::OrbitSubgraph, Witness::EdgeSet { edges }) => {
            expect_shape(c, Target::Index, Direction::Upper)?;
            let mut points = BTreeSet::new();
            for id in edges {
                let e = g.edge_position(id).ok_or_else(|| VerifyError(format!("unknown edge `{id}`")))?;
                points.insert(nv + e);
            }
            if !is_invariant(&group, &points) {
                return Err(VerifyError("edge set is not invariant".into()));
            }
            expect_eq("edge count", BigUint::from(points.len()), claimed.clone())
        }
        (Rule::OrbitSubgraph, Witness::VertexSet { vertices }) => {
            expect_shape(c, Target::Index, Direction::Upper)?;
            let mut points = BTreeSet::new();
            for id in vertices {
                points.insert(g.vertex_position(id).ok_or_else(|| VerifyError(format!("unknown vertex `{id}`")))?);
            }
            if !is_invariant(&group, &points) {
                return Err(VerifyError("vertex set is not invariant".into()));
            }
            expect_eq("twice the vertex count", BigUint::from(2 * points.len()), claimed.clone())
        }
        (Rule::LoopSummand, Witness::Loop { automorphism, element_order, chain, .. }) => {
            expect_shape(c, Target::Period, Direction::Lower)?;
            let sigma = permutation_from_doc(g, automorphism)?;
            let lp = chain_from_doc(g, chain)?;
            let lat = fundamental_cycle_basis(g);
            match period_lower_loop_summand(&lat, &sigma, &lp) {
                Ok(LoopVerdict::Fires { m, .. }) => {
                    expect_eq("element order", m, *element_order)?;
                    expect_eq("divisor", BigUint::from(m), claimed.clone())
                }
                Ok(LoopVerdict::NotApplicable(why)) => Err(VerifyError(format!("loop criterion fails: {why}"))),
                Err(e) => Err(VerifyError(e.to_string())),
            }
        }
        (Rule::CyclicRestriction, Witness::Cyclic { automorphism, element_order, class_order }) => {
            expect_shape(c, Target::Period, Direction::Lower)?;
            let sigma = permutation_from_doc(g, automorphism)?;
            expect_eq("element order", sigma.order(), *element_order)?;
            let lat = fundamental_cycle_basis(g);
            let k = class_order_cyclic(&build_path_cocycle(&lat), &sigma).map_err(|e| VerifyError(e.to_string()))?;
            expect_eq("class order", k, *class_order)?;
            expect_eq("divisor", BigUint::from(k), claimed.clone())
        }
        (Rule::SylowExact, Witness::Sylow { prime, sylow_order, class_order, generators }) => {
            let gens = generators
                .iter()
                .map(|d| permutation_from_doc(g, d))
                .collect::<Result<Vec<_>, _>>()?;
            let sylow = PermutationGroup::new(group.degree(), gens);
            let order = group.order();
            expect_eq("Sylow order", sylow.order(), BigUint::from(*sylow_order))?;
            expect_eq("Sylow order", p_part(&order, *prime), BigUint::from(*sylow_order))?;
            let lat = fundamental_cycle_basis(g);
            let cocycle = PathCocycle::new(&lat);
            let k = restrict(&cocycle, &sylow, config.bar_cap)
                .and_then(|t| class_order_bar(&t, &lat, config.bar_cap))
                .map_err(|e| VerifyError(e.to_string()))?;
            expect_eq("class order", k, *class_order)?;
            match c.direction {
                Direction::Lower => expect_eq("divisor", BigUint::from(k), claimed.clone()),
                Direction::Upper => expect_eq(
                    "divisor",
                    &order / BigUint::from(*sylow_order) * BigUint::from(k),
                    claimed.clone(),
                ),
            }
        }
        (Rule::SubgraphPropagation, Witness::Subgraph { edges, depth, period, index }) => {
            if c.direction != Direction::Upper {
                return Err(VerifyError("subgraph bounds are upper bounds".into()));
            }
            let mut idx = Vec::new();
            let mut points = BTreeSet::new();
            for id in edges {
                let e = g.edge_position(id).ok_or_else(|| VerifyError(format!("unknown edge `{id}`")))?;
                idx.push(e);
                points.insert(nv + e);
            }
            idx.sort_unstable();
            if idx.len() == g.num_edges() || !is_invariant(&group, &points) {
                return Err(VerifyError("not a proper invariant edge set".into()));
            }
            let s = g.edge_subgraph(&idx, "subgraph").map_err(|e| VerifyError(e.to_string()))?;
            if !meets_degree_filter(&s) {
                return Err(VerifyError("subgraph has a vertex of degree below 4".into()));
            }
            let sub = analyze_at_depth(&s, config, *depth).map_err(|e| VerifyError(e.to_string()))?;
            expect_eq("subgraph period", sub.period, *period)?;
            expect_eq("subgraph index", sub.index, *index)?;
            let interval = if c.target == Target::Period { sub.period } else { sub.index };
            if !interval.resolved {
                return Err(VerifyError("subgraph bound is not resolved".into()));
            }
            expect_eq("divisor", BigUint::from(interval.upper), claimed.clone())
        }
        (Rule::PeriodDividesIndex, Witness::Interval { of, end }) => {
            let value = match (of, end, c.target, c.direction) {
                (Target::Index, Direction::Upper, Target::Period, Direction::Upper) => report.index.upper,
                (Target::Period, Direction::Lower, Target::Index, Direction::Lower) => report.period.lower,
                _ => return Err(VerifyError("period | index only transports index.upper and period.lower".into())),
            };
            expect_eq("divisor", BigUint::from(value), claimed.clone())
        }
        (rule, _) => Err(VerifyError(format!("{} certificate with a mismatched witness", rule.as_str()))),
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Period => "period",
            Target::Index => "index",
        })
    }
}

/// Checks every certificate and that the intervals are exactly the
/// lcm/gcd of the certified divisors.
pub fn verify_report(g: &Multigraph, report: &BoundsReport, config: &Config) -> Result<(), VerifyError> {
    let mut lower = [BigUint::one(), BigUint::one()];
    let mut upper: [Option<BigUint>; 2] = [None, None];
    for c in &report.certificates {
        verify_certificate(g, report, c, config)?;
        let t = c.target as usize;
        match c.direction {
            Direction::Lower => lower[t] = lower[t].lcm(&c.divisor.0),
            Direction::Upper => {
                upper[t] = Some(match upper[t].take() {
                    Some(u) => u.gcd(&c.divisor.0),
                    None => c.divisor.0.clone(),
                })
            }
        }
    }
    for (t, interval) in [(Target::Period, report.period), (Target::Index, report.index)] {
        let i = t as usize;
        expect_eq(&format!("{t} lower"), lower[i].clone(), BigUint::from(interval.lower))?;
        let u = upper[i].clone().ok_or_else(|| VerifyError(format!("no upper certificate for the {t}")))?;
        expect_eq(&format!("{t} upper"), u, BigUint::from(interval.upper))?;
        expect_eq(&format!("{t} resolved flag"), interval.lower == interval.upper, interval.resolved)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::builtin;

    fn lift(g: &Multigraph, vmap: &[usize]) -> Permutation {
        GraphAutomorphism::from_vertex_map(g, vmap.to_vec()).unwrap().to_permutation()
    }

    fn chain(g: &Multigraph, parts: &[(&str, i64)]) -> Chain {
        let mut z = vec![0; g.num_edges()];
        for &(id, x) in parts {
            z[g.edge_position(id).unwrap()] = x;
        }
        z
    }

    #[test]
    fn k5_loop_verdicts() {
        let g = builtin("k5").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let pentagon = chain(&g, &[("e12", 1), ("e23", 1), ("e34", 1), ("e45", 1), ("e15", -1)]);
        let rot = lift(&g, &[1, 2, 3, 4, 0]);
        assert!(matches!(period_lower_loop_summand(&lat, &rot, &pentagon), Ok(LoopVerdict::Fires { m: 5, .. })));

        let triangle = chain(&g, &[("e12", 1), ("e23", 1), ("e13", -1)]);
        let three = lift(&g, &[1, 2, 0, 3, 4]);
        assert_eq!(
            period_lower_loop_summand(&lat, &three, &triangle),
            Ok(LoopVerdict::NotApplicable(Inapplicable::NotASummand))
        );
        assert_eq!(
            period_lower_loop_summand(&lat, &rot, &triangle),
            Ok(LoopVerdict::NotApplicable(Inapplicable::NotFixed))
        );
        let open = chain(&g, &[("e12", 1)]);
        assert_eq!(period_lower_loop_summand(&lat, &rot, &open), Err(BoundsError::NotAClosedChain));
        let doubled = pentagon.iter().map(|x| 2 * x).collect::<Vec<_>>();
        assert_eq!(
            period_lower_loop_summand(&lat, &rot, &doubled),
            Ok(LoopVerdict::NotApplicable(Inapplicable::NotSimple))
        );
    }

    #[test]
    fn doubled_cycle_and_doubled_k4_loops() {
        let g = builtin("doubled-cycle-g6").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let rot = GraphAutomorphism::new(
            &g,
            vec![1, 2, 3, 4, 0],
            (0..10).map(|e| (e + 2) % 10).collect(),
        )
        .unwrap()
        .to_permutation();
        let f_loop = chain(&g, &[("f1", 1), ("f2", 1), ("f3", 1), ("f4", 1), ("f5", 1)]);
        assert!(matches!(period_lower_loop_summand(&lat, &rot, &f_loop), Ok(LoopVerdict::Fires { m: 5, .. })));

        // v_i -> v_{5-i}, swapping the parallel edges of v1v4 and of v2v3
        let k4 = builtin("doubled-k4").unwrap();
        let lat = fundamental_cycle_basis(&k4);
        let sigma = GraphAutomorphism::from_vertex_map(&k4, vec![3, 2, 1, 0]).unwrap();
        let mut edge_map = sigma.edge_map().to_vec();
        for k in [2, 4] {
            let (e, f) = (k4.edge_position(&format!("e{k}")).unwrap(), k4.edge_position(&format!("f{k}")).unwrap());
            edge_map[e] = f;
            edge_map[f] = e;
        }
        let sigma = GraphAutomorphism::new(&k4, vec![3, 2, 1, 0], edge_map).unwrap().to_permutation();
        let pair = chain(&k4, &[("e2", 1), ("f2", -1)]);
        assert!(matches!(period_lower_loop_summand(&lat, &sigma, &pair), Ok(LoopVerdict::Fires { m: 2, .. })));
    }

    fn divisors(certs: &[Certificate]) -> Vec<u64> {
        certs.iter().map(|c| as_u64(&c.divisor.0)).collect()
    }

    #[test]
    fn index_divisor_sets() {
        let g = builtin("k5").unwrap();
        let (certs, complete) = index_upper_divisors(&g, &automorphism_group(&g), 4096);
        assert!(complete);
        let d = divisors(&certs);
        assert!(d.contains(&5) && d.contains(&10));
        assert_eq!(d.iter().fold(0, |a, b| a.gcd(b)), 5);

        let g = builtin("doubled-k4").unwrap();
        let d = divisors(&index_upper_divisors(&g, &automorphism_group(&g), 4096).0);
        assert!(d.contains(&6) && d.contains(&10) && d.contains(&2));
        assert_eq!(d.iter().fold(0, |a, b| a.gcd(b)), 2);
    }

    #[test]
    fn subgraph_candidates() {
        for name in ["k5", "doubled-cycle-g5"] {
            let g = builtin(name).unwrap();
            assert!(invariant_subgraphs(&g, &automorphism_group(&g), 4096).is_empty(), "{name}");
        }
        let g = builtin("hybrid").unwrap();
        let subs = invariant_subgraphs(&g, &automorphism_group(&g), 4096);
        assert!(subs.iter().any(|(_, s)| s.num_vertices() == 4 && s.num_edges() == 8));
    }

    #[test]
    fn small_reports_verify() {
        let config = Config::default();
        for (name, per) in [("doubled-cycle-g4", 3), ("k5", 5), ("k34", 1), ("doubled-k4", 2)] {
            let g = builtin(name).unwrap();
            let r = analyze(&g, &config).unwrap();
            assert_eq!((r.period, r.index), (DivisorInterval::new(per, per), DivisorInterval::new(per, per)), "{name}");
            verify_report(&g, &r, &config).unwrap();
            let back: BoundsReport = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let config = Config::default();
        let g = builtin("k5").unwrap();
        let mut r = analyze(&g, &config).unwrap();
        let c = r.certificates.iter_mut().find(|c| c.rule == Rule::CyclicRestriction).unwrap();
        c.divisor = Divisor::from(10);
        assert!(verify_report(&g, &r, &config).is_err());
    }

    #[test]
    fn divisor_json() {
        assert_eq!(serde_json::to_string(&Divisor::from(7)).unwrap(), "7");
        let big = Divisor(BigUint::from(u64::MAX) * 3u32);
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.starts_with('"'));
        assert_eq!(serde_json::from_str::<Divisor>(&s).unwrap(), big);
    }
}

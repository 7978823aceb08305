//! Cross-checks of the fast routes against slow independent ones, run on a
//! seeded corpus of small graphs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgroup::{automorphism_group, brute_force_order};
use crate::bounds::loop_candidates;
use crate::cohomology::{
    bar_class_order, build_path_cocycle, class_order_bar, class_order_cyclic, cyclic_elements, restrict, restrict_elements,
    PathCocycle,
};
use crate::homology::{boundary, fundamental_cycle_basis, CycleLattice};
use crate::intlinalg::{smith_normal_form, IntMatrix};
use crate::multigraph::{builtin, Multigraph, BUILTIN_NAMES};
use crate::permgroup::Permutation;

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Negates the action matrices handed to the bar complex.
    FlipActionSign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub instances: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS {} ({} instances)", self.name, self.instances),
            Some(why) => write!(f, "FAIL {} after {} instances: {}", self.name, self.instances, why),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failure.is_none())
    }
}

/// Largest genus used by the cyclic-vs-bar suite.
pub const ORACLE_MAX_GENUS: usize = 8;
/// Largest element order used by the cyclic-vs-bar suite.
pub const ORACLE_MAX_ORDER: u64 = 12;

/// Graph on `0..n` with `mult[s]` parallel edges between `i` and `i + s`.
pub fn circulant(n: usize, mult: &[usize]) -> Option<Multigraph> {
    let vs: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut edges = Vec::new();
    for (s, &k) in mult.iter().enumerate() {
        let step = s + 1;
        if k == 0 || 2 * step > n {
            continue;
        }
        let count = if 2 * step == n { n / 2 } else { n };
        for i in 0..count {
            let j = (i + step) % n;
            for r in 0..k {
                edges.push((format!("s{step}.{i}.{r}"), vs[i].clone(), vs[j].clone()));
            }
        }
    }
    let name = format!("circulant-{n}-{mult:?}");
    Multigraph::new(name, vs, edges).ok()
}

/// Random connected multigraph with minimum degree 3, if one is hit.
pub fn random_multigraph(rng: &mut impl Rng, name: &str, n: usize, m: usize) -> Option<Multigraph> {
    let vs: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
    let edges = (0..m)
        .map(|k| {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (format!("x{k}"), vs[a].clone(), vs[b].clone())
        })
        .collect();
    Multigraph::new(name, vs, edges).ok()
}

/// Built-ins plus seeded circulant and random multigraphs.
pub fn corpus(seed: u64) -> Vec<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Multigraph> = BUILTIN_NAMES
        .iter()
        .filter(|n| **n != "soccer-doubled")
        .map(|n| builtin(n).expect("built-in"))
        .collect();
    for n in 3..=7 {
        for _ in 0..3 {
            let mult: Vec<usize> = (0..n / 2).map(|_| rng.gen_range(0..=2)).collect();
            if let Some(g) = circulant(n, &mult) {
                if g.genus() <= ORACLE_MAX_GENUS && out.iter().all(|h| h.name() != g.name()) {
                    out.push(g);
                }
            }
        }
    }
    let mut made = 0;
    while made < 8 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(3 * n / 2 + 1..=2 * n + 2);
        if let Some(g) = random_multigraph(&mut rng, &format!("random-{seed}-{made}"), n, m) {
            out.push(g);
            made += 1;
        }
    }
    out
}

fn faulty_actions(lat: &CycleLattice, elements: &[Permutation], fault: Fault) -> Vec<IntMatrix> {
    elements
        .iter()
        .map(|x| {
            let a = lat.action_matrix(x);
            match fault {
                Fault::FlipActionSign if !x.is_identity() => IntMatrix::zeros(a.rows(), a.cols()).sub(&a),
                _ => a,
            }
        })
        .collect()
}

/// `class_order_cyclic` against the bar complex of `⟨σ⟩` on random
/// `(graph, σ)` pairs.
pub fn cyclic_vs_bar(seed: u64, min_instances: usize, fault: Fault) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1c1);
    let graphs: Vec<Multigraph> = corpus(seed).into_iter().filter(|g| g.genus() <= ORACLE_MAX_GENUS).collect();
    let mut instances = 0;
    let mut rounds = 0;
    while instances < min_instances && rounds < 50 {
        rounds += 1;
        for g in &graphs {
            let group = automorphism_group(g);
            let lat = fundamental_cycle_basis(g);
            let c = build_path_cocycle(&lat);
            let sigma = group.random_element(&mut rng);
            let m = sigma.order();
            if m > ORACLE_MAX_ORDER || (m == 1 && rng.gen_bool(0.8)) {
                continue;
            }
            instances += 1;
            let fast = class_order_cyclic(&c, &sigma);
            let table = restrict_elements(&c, cyclic_elements(&sigma)).expect("cyclic subgroup");
            let actions = faulty_actions(&lat, table.group().elements(), fault);
            let slow = bar_class_order(table.group().products(), &actions, table.values(), m);
            if fast != slow {
                return SuiteResult {
                    name: "cyclic closed form vs bar complex",
                    instances,
                    failure: Some(format!(
                        "graph {}, sigma {:?} (order {m}): closed form {fast:?}, bar {slow:?}",
                        g.name(),
                        sigma.cycles()
                    )),
                };
            }
        }
    }
    SuiteResult { name: "cyclic closed form vs bar complex", instances, failure: None }
}

/// Automorphism group orders against exhaustive vertex permutation search
/// on every corpus graph with at most 7 vertices and 14 edges.
pub fn automorphism_counts(seed: u64) -> SuiteResult {
    let mut instances = 0;
    for g in corpus(seed) {
        if g.num_vertices() > 7 || g.num_edges() > 14 {
            continue;
        }
        instances += 1;
        let fast = automorphism_group(&g).order();
        let slow = brute_force_order(&g);
        if fast != slow.into() {
            return SuiteResult {
                name: "automorphism count vs brute force",
                instances,
                failure: Some(format!("graph {}: generated group {fast}, brute force {slow}", g.name())),
            };
        }
    }
    SuiteResult { name: "automorphism count vs brute force", instances, failure: None }
}

fn random_matrix(rng: &mut impl Rng, max_dim: usize) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let dense = rng.gen_bool(0.5);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if dense || rng.gen_bool(0.3) { rng.gen_range(-9..=9) } else { 0 })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

/// Why `snf` is not a Smith form of `a`, if it is not.
pub fn snf_violation(a: &IntMatrix) -> Option<String> {
    let snf = smith_normal_form(a);
    if snf.u.mul(a).mul(&snf.v) != snf.s {
        return Some("U*A*V != S".into());
    }
    for (name, m) in [("U", &snf.u), ("V", &snf.v)] {
        if !m.determinant().abs().is_one() {
            return Some(format!("{name} is not unimodular"));
        }
    }
    let s = &snf.s;
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if i != j && !s[(i, j)].is_zero() {
                return Some(format!("S has an off-diagonal entry at ({i},{j})"));
            }
        }
    }
    let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect();
    if diag.iter().any(|x| x.is_negative()) {
        return Some("negative diagonal entry".into());
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok {
            return Some(format!("divisibility chain broken: {} then {}", w[0], w[1]));
        }
    }
    None
}

/// Smith form contract on random integer matrices up to `max_dim` square.
pub fn snf_properties(seed: u64, count: usize, max_dim: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f5f);
    for k in 0..count {
        let a = random_matrix(&mut rng, max_dim);
        if let Some(why) = snf_violation(&a) {
            return SuiteResult {
                name: "Smith normal form contract",
                instances: k + 1,
                failure: Some(format!("{why} for {a:?}")),
            };
        }
    }
    SuiteResult { name: "Smith normal form contract", instances: count, failure: None }
}

/// Searches integer functionals `φ` with entries in `[-bound, bound]`,
/// `φ ∘ A = φ`, and `φ(z) = 1`.
pub fn invariant_functional_exists(a: &IntMatrix, z: &[i64], bound: i64) -> bool {
    let g = a.rows();
    let entry = |i: usize, j: usize| -> i64 { (&a[(i, j)]).try_into().expect("small action matrix") };
    let mut phi = vec![-bound; g];
    loop {
        let value: i64 = phi.iter().zip(z).map(|(p, x)| p * x).sum();
        if value == 1 && (0..g).all(|j| (0..g).map(|i| phi[i] * entry(i, j)).sum::<i64>() == phi[j]) {
            return true;
        }
        let mut k = 0;
        while k < g && phi[k] == bound {
            phi[k] = -bound;
            k += 1;
        }
        if k == g {
            return false;
        }
        phi[k] += 1;
    }
}

/// Largest genus used by the summand suite.
pub const SUMMAND_MAX_GENUS: usize = 6;

/// The coinvariant summand test against a bounded search for invariant
/// functionals, on fixed simple loops of small graphs.
pub fn summand_vs_functionals(seed: u64, max_instances: usize) -> SuiteResult {
    let name = "summand criterion vs functional search";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    let mut instances = 0;
    let mut graphs: Vec<Multigraph> = corpus(seed).into_iter().filter(|g| g.genus() <= SUMMAND_MAX_GENUS).collect();
    graphs.shuffle(&mut rng);
    for g in &graphs {
        let group = automorphism_group(g);
        let lat = fundamental_cycle_basis(g);
        for _ in 0..4 {
            let sigma = group.random_element(&mut rng);
            let a = lat.action_matrix(&sigma);
            for lp in loop_candidates(&lat, &sigma, sigma.order()) {
                if lat.act(&sigma, &lp) != lp || lp.iter().any(|x| x.abs() > 1) {
                    continue;
                }
                let z = lat.coords(&lp);
                let criterion = lat.coinvariant_image(&sigma, &lat.coords_big(&lp)).primitive;
                let search = invariant_functional_exists(&a, &z, 2);
                instances += 1;
                if criterion != search {
                    return SuiteResult {
                        name,
                        instances,
                        failure: Some(format!(
                            "graph {}, sigma {:?}, loop {z:?}: criterion {criterion}, search {search}",
                            g.name(),
                            sigma.cycles()
                        )),
                    };
                }
                if instances >= max_instances {
                    return SuiteResult { name, instances, failure: None };
                }
            }
        }
    }
    SuiteResult { name, instances, failure: None }
}

fn builtins() -> Vec<Multigraph> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).expect("built-in")).collect()
}

/// The 2-cocycle identity `σc(τ,ρ) − c(στ,ρ) + c(σ,τρ) − c(σ,τ) = 0` on
/// random triples, checked on edge chains, plus closedness of each value.
pub fn cocycle_identity(seed: u64, triples: usize) -> SuiteResult {
    let name = "path cocycle identity";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0c0);
    let mut instances = 0;
    for g in builtins() {
        let group = automorphism_group(&g);
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        for _ in 0..triples {
            let s = group.random_element(&mut rng);
            let t = group.random_element(&mut rng);
            let r = group.random_element(&mut rng);
            instances += 1;
            let c_tr = c.value_chain(&t, &r);
            if boundary(&g, &c_tr).iter().any(|&x| x != 0) {
                return SuiteResult { name, instances, failure: Some(format!("graph {}: c(τ,ρ) is not a cycle", g.name())) };
            }
            let lhs = lat.act(&s, &c_tr);
            let a = c.value_chain(&s.compose(&t), &r);
            let b = c.value_chain(&s, &t.compose(&r));
            let d = c.value_chain(&s, &t);
            if lhs.iter().zip(&a).zip(&b).zip(&d).any(|(((x, y), z), w)| x - y + z - w != 0) {
                return SuiteResult {
                    name,
                    instances,
                    failure: Some(format!(
                        "graph {}: identity fails for {:?}, {:?}, {:?}",
                        g.name(),
                        s.cycles(),
                        t.cycles(),
                        r.cycles()
                    )),
                };
            }
        }
    }
    SuiteResult { name, instances, failure: None }
}

/// `A(w) = A(g₁)⋯A(g_k)` for random words in the generators and their
/// inverses, of length at most `max_len`.
pub fn action_homomorphism(seed: u64, words: usize, max_len: usize) -> SuiteResult {
    let name = "action matrices on generator words";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa0a0);
    let mut instances = 0;
    for g in builtins() {
        let group = automorphism_group(&g);
        let lat = fundamental_cycle_basis(&g);
        let mut letters: Vec<Permutation> = group.generators().to_vec();
        letters.extend(group.generators().iter().map(Permutation::inverse));
        if letters.is_empty() {
            continue;
        }
        let degree = group.degree();
        for _ in 0..words {
            let len = rng.gen_range(1..=max_len);
            let word: Vec<&Permutation> = (0..len).map(|_| letters.choose(&mut rng).expect("non-empty")).collect();
            let element = word.iter().fold(Permutation::identity(degree), |acc, x| acc.compose(x));
            let product = word
                .iter()
                .fold(IntMatrix::identity(lat.rank()), |acc, x| acc.mul(&lat.action_matrix(x)));
            instances += 1;
            if lat.action_matrix(&element) != product {
                return SuiteResult {
                    name,
                    instances,
                    failure: Some(format!("graph {}: word of length {len} is not multiplicative", g.name())),
                };
            }
        }
    }
    SuiteResult { name, instances, failure: None }
}

fn random_lattice(rng: &mut impl Rng, g: &Multigraph) -> CycleLattice {
    let root = rng.gen_range(0..g.num_vertices());
    let mut priority: Vec<usize> = (0..g.num_edges()).collect();
    priority.shuffle(rng);
    CycleLattice::from_spanning_tree(g, root, &priority)
}

/// Largest group whose full bar complex is compared across tree choices.
pub const CHOICE_BAR_ORDER: u64 = 24;

/// Class orders do not depend on the spanning tree or the base vertex.
/// Compares cyclic orders for a random element and, for small groups, the
/// full-group bar order.
pub fn choice_independence(seed: u64, instances_wanted: usize) -> SuiteResult {
    let name = "class orders under change of spanning tree";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b0);
    let mut graphs: Vec<Multigraph> = corpus(seed).into_iter().filter(|g| g.genus() <= ORACLE_MAX_GENUS).collect();
    graphs.shuffle(&mut rng);
    let mut instances = 0;
    for g in graphs.iter().cycle().take(4 * instances_wanted.max(1)) {
        if instances >= instances_wanted {
            break;
        }
        let group = automorphism_group(g);
        let sigma = group.random_element(&mut rng);
        let canonical = fundamental_cycle_basis(g);
        let other = random_lattice(&mut rng, g);
        let base = rng.gen_range(0..g.num_vertices());
        let c0 = build_path_cocycle(&canonical);
        let c1 = PathCocycle::with_base(&other, base);
        instances += 1;
        let (a, b) = (class_order_cyclic(&c0, &sigma), class_order_cyclic(&c1, &sigma));
        if a != b {
            return SuiteResult {
                name,
                instances,
                failure: Some(format!("graph {}, sigma {:?}: cyclic {a:?} vs {b:?}", g.name(), sigma.cycles())),
            };
        }
        let order = group.order();
        if order <= CHOICE_BAR_ORDER.into() {
            let bar = |c: &PathCocycle, lat: &CycleLattice| {
                let t = restrict(c, &group, CHOICE_BAR_ORDER).expect("small group");
                class_order_bar(&t, lat, CHOICE_BAR_ORDER)
            };
            let (a, b) = (bar(&c0, &canonical), bar(&c1, &other));
            if a != b {
                return SuiteResult {
                    name,
                    instances,
                    failure: Some(format!("graph {}: full-group order {a:?} vs {b:?}", g.name())),
                };
            }
        }
    }
    SuiteResult { name, instances, failure: None }
}

/// Runs every suite with its default size.
pub fn run_oracles(seed: u64, fault: Fault) -> OracleReport {
    OracleReport {
        seed,
        suites: vec![
            cyclic_vs_bar(seed, 60, fault),
            automorphism_counts(seed),
            snf_properties(seed, 200, 20),
            summand_vs_functionals(seed, 60),
            cocycle_identity(seed, 1000),
            action_homomorphism(seed, 200, 6),
            choice_independence(seed, 20),
        ],
    }
}

//! The path 2-cocycle of the automorphism action on `H_1(Γ, Z)` and the
//! order of its class in `H^2`.
//!
//! Three routes to the order are provided: the inhomogeneous bar complex of
//! a small enumerated subgroup, the closed form `M^σ / N_σ M` for a cyclic
//! subgroup, and the lcm of Sylow restrictions for the whole group.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::homology::{Chain, CycleLattice};
use crate::intlinalg::{minimal_multiple_in_image, minimal_multiple_sparse, IntMatrix, MultipleOutcome, SparseColumns};
use crate::permgroup::{factorize, p_part, Enumeration, PermError, Permutation, PermutationGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("group of order {order} exceeds the cap {cap}")]
    Infeasible { order: BigUint, cap: u64 },
    #[error("element set is not closed under composition")]
    NotClosed,
    #[error("class is not annihilated by {bound}; the table is not a cocycle")]
    NotAnnihilated { bound: u64 },
}

impl From<PermError> for CohomologyError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::Infeasible { order, cap } => CohomologyError::Infeasible { order, cap },
            other => unreachable!("unexpected permutation error: {other}"),
        }
    }
}

/// `c(σ, τ) = P_σ + σ·P_τ − P_{στ}` where `P_σ` is the tree path from the
/// base vertex to its image. Values are computed on demand.
#[derive(Debug, Clone, Copy)]
pub struct PathCocycle<'a> {
    lattice: &'a CycleLattice,
    base: usize,
}

/// The path cocycle based at the lattice root (the smallest vertex id).
pub fn build_path_cocycle(lattice: &CycleLattice) -> PathCocycle<'_> {
    PathCocycle::new(lattice)
}

impl<'a> PathCocycle<'a> {
    pub fn new(lattice: &'a CycleLattice) -> Self {
        PathCocycle { lattice, base: lattice.root() }
    }

    pub fn with_base(lattice: &'a CycleLattice, base: usize) -> Self {
        assert!(base < lattice.graph().num_vertices(), "base vertex out of range");
        PathCocycle { lattice, base }
    }

    pub fn lattice(&self) -> &'a CycleLattice {
        self.lattice
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn path(&self, sigma: &Permutation) -> Chain {
        self.lattice.tree_path(self.base, sigma.apply(self.base))
    }

    pub fn value_chain(&self, sigma: &Permutation, tau: &Permutation) -> Chain {
        let p_s = self.path(sigma);
        let sp_t = self.lattice.act(sigma, &self.path(tau));
        let p_st = self.path(&sigma.compose(tau));
        p_s.iter().zip(&sp_t).zip(&p_st).map(|((a, b), c)| a + b - c).collect()
    }

    /// `c(σ, τ)` in lattice coordinates.
    pub fn value(&self, sigma: &Permutation, tau: &Permutation) -> Vec<i64> {
        self.lattice.coords(&self.value_chain(sigma, tau))
    }
}

/// Multiplication table of an enumerated finite group.
#[derive(Debug, Clone)]
pub struct GroupTable {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    mul: Vec<usize>,
}

impl GroupTable {
    /// Fails unless `elements` is closed under composition; the identity is
    /// moved to position 0.
    pub fn new(mut elements: Vec<Permutation>) -> Result<Self, CohomologyError> {
        if let Some(k) = elements.iter().position(Permutation::is_identity) {
            elements.swap(0, k);
        } else {
            return Err(CohomologyError::NotClosed);
        }
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        if index.len() != elements.len() {
            return Err(CohomologyError::NotClosed);
        }
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(*index.get(&a.compose(b)).ok_or(CohomologyError::NotClosed)?);
            }
        }
        Ok(GroupTable { elements, index, mul })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn position(&self, x: &Permutation) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j]
    }

    pub fn products(&self) -> &[usize] {
        &self.mul
    }
}

/// Values of a cocycle on `H × H` for an enumerated subgroup `H`.
#[derive(Debug, Clone)]
pub struct CocycleTable {
    group: GroupTable,
    rank: usize,
    values: Vec<Vec<i64>>,
}

impl CocycleTable {
    /// Table from explicit values indexed as `values[i * |H| + j]` after the
    /// element order of `group`.
    pub fn from_values(group: GroupTable, rank: usize, values: Vec<Vec<i64>>) -> Self {
        let n = group.order();
        assert_eq!(values.len(), n * n, "one value per pair");
        assert!(values.iter().all(|v| v.len() == rank), "values of the wrong rank");
        CocycleTable { group, rank, values }
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn value(&self, i: usize, j: usize) -> &[i64] {
        &self.values[i * self.group.order() + j]
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Restriction to a subset of this table's group that is itself a group.
    pub fn restrict(&self, sub: &[Permutation]) -> Result<CocycleTable, CohomologyError> {
        let group = GroupTable::new(sub.to_vec())?;
        let pos: Vec<usize> = group
            .elements()
            .iter()
            .map(|x| self.group.position(x).ok_or(CohomologyError::NotClosed))
            .collect::<Result<_, _>>()?;
        let values = pos
            .iter()
            .flat_map(|&i| pos.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.value(i, j).to_vec())
            .collect();
        Ok(CocycleTable { group, rank: self.rank, values })
    }
}

/// Tabulates `c` on a subgroup given by its elements.
pub fn restrict_elements(c: &PathCocycle, elements: Vec<Permutation>) -> Result<CocycleTable, CohomologyError> {
    let group = GroupTable::new(elements)?;
    let paths: Vec<Chain> = group.elements().iter().map(|x| c.path(x)).collect();
    let lat = c.lattice();
    let n = group.order();
    let mut values = Vec::with_capacity(n * n);
    for (i, s) in group.elements().iter().enumerate() {
        for (j, path_t) in paths.iter().enumerate() {
            let moved = lat.act(s, path_t);
            let st = &paths[group.product(i, j)];
            let z: Chain = paths[i].iter().zip(&moved).zip(st).map(|((a, b), c)| a + b - c).collect();
            values.push(lat.coords(&z));
        }
    }
    Ok(CocycleTable { group, rank: lat.rank(), values })
}

/// Tabulates `c` on `H`, enumerating at most `cap` elements.
pub fn restrict(c: &PathCocycle, h: &PermutationGroup, cap: u64) -> Result<CocycleTable, CohomologyError> {
    match h.enumerate_elements(cap) {
        Enumeration::Elements(all) => restrict_elements(c, all),
        Enumeration::Overflow { order } => Err(CohomologyError::Infeasible { order, cap }),
    }
}

/// Least `n >= 1` with `n·c` a coboundary in the bar complex of a finite
/// group acting on `Z^g`.
///
/// `mul` is the `n x n` multiplication table, `actions[i]` the `g x g`
/// matrix of element `i`, and `values[i * n + j] = c(i, j)`. The search
/// stops at `bound`.
pub fn bar_class_order(
    mul: &[usize],
    actions: &[IntMatrix],
    values: &[Vec<i64>],
    bound: u64,
) -> Result<u64, CohomologyError> {
    let n = actions.len();
    assert_eq!(mul.len(), n * n, "multiplication table size");
    let g = actions.first().map_or(0, IntMatrix::rows);
    let rows = n * n * g;
    let row = |s: usize, t: usize, k: usize| (s * n + t) * g + k;

    // left[s][r] = t with s·t = r
    let mut left = vec![vec![0usize; n]; n];
    for s in 0..n {
        for t in 0..n {
            left[s][mul[s * n + t]] = t;
        }
    }

    // (d¹f)(σ,τ) = σ·f(τ) − f(στ) + f(σ)
    let mut d = SparseColumns::new(rows);
    for r in 0..n {
        for i in 0..g {
            let mut entries: Vec<(usize, BigInt)> = Vec::new();
            for (s, a) in actions.iter().enumerate() {
                for k in 0..g {
                    let x = &a[(k, i)];
                    if !x.is_zero() {
                        entries.push((row(s, r, k), x.clone()));
                    }
                }
                entries.push((row(s, left[s][r], i), -BigInt::one()));
            }
            for t in 0..n {
                entries.push((row(r, t, i), BigInt::one()));
            }
            d.push_column(entries);
        }
    }
    let target: Vec<BigInt> = values.iter().flat_map(|v| v.iter().map(|&x| BigInt::from(x))).collect();
    match minimal_multiple_sparse(&d, &target, bound).expect("d¹ and the cochain agree in size") {
        MultipleOutcome::Found { n, .. } => Ok(n),
        MultipleOutcome::NoneUpTo(b) => Err(CohomologyError::NotAnnihilated { bound: b }),
    }
}

/// Order of the class of `t` in `H^2(H, M)`, via the bar complex.
pub fn class_order_bar(t: &CocycleTable, lattice: &CycleLattice, cap: u64) -> Result<u64, CohomologyError> {
    let n = t.group().order();
    if n as u64 > cap {
        return Err(CohomologyError::Infeasible { order: BigUint::from(n), cap });
    }
    if t.is_zero() {
        return Ok(1);
    }
    let actions: Vec<IntMatrix> = t.group().elements().iter().map(|x| lattice.action_matrix(x)).collect();
    bar_class_order(t.group().products(), &actions, t.values(), n as u64)
}

fn sum_chains(acc: &mut [i64], z: &[i64]) {
    for (a, b) in acc.iter_mut().zip(z) {
        *a += b;
    }
}

/// `N_σ z = Σ_{i<m} σ^i z` on edge chains.
fn norm_chain(lattice: &CycleLattice, sigma: &Permutation, m: u64, z: &[i64]) -> Chain {
    let mut acc = z.to_vec();
    let mut cur = z.to_vec();
    for _ in 1..m {
        cur = lattice.act(sigma, &cur);
        sum_chains(&mut acc, &cur);
    }
    acc
}

/// Order of the restriction of `c` to `⟨σ⟩`, from `H^2(⟨σ⟩, M) ≅ M^σ / N_σ M`
/// with the class represented by `N_σ P_σ`.
pub fn class_order_cyclic(c: &PathCocycle, sigma: &Permutation) -> Result<u64, CohomologyError> {
    let m = sigma.order();
    if m == 1 {
        return Ok(1);
    }
    let lat = c.lattice();
    let columns: Vec<Vec<BigInt>> = lat
        .basis()
        .iter()
        .map(|b| lat.coords_big(&norm_chain(lat, sigma, m, b)))
        .collect();
    let norm = IntMatrix::from_columns(lat.rank(), &columns);
    let w = lat.coords_big(&norm_chain(lat, sigma, m, &c.path(sigma)));
    match minimal_multiple_in_image(&norm, &w, m).expect("norm matrix is square") {
        MultipleOutcome::Found { n, .. } => Ok(n),
        MultipleOutcome::NoneUpTo(b) => Err(CohomologyError::NotAnnihilated { bound: b }),
    }
}

/// Elements of `⟨σ⟩`, identity first.
pub fn cyclic_elements(sigma: &Permutation) -> Vec<Permutation> {
    let m = sigma.order();
    let mut out = vec![Permutation::identity(sigma.degree())];
    for _ in 1..m {
        let next = out.last().unwrap().compose(sigma);
        out.push(next);
    }
    out
}

/// Limits on the exact computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactCaps {
    /// Largest group that is enumerated to find Sylow subgroups.
    pub enum_cap: u64,
    /// Largest subgroup handled by the bar complex.
    pub bar_cap: u64,
    /// Random elements tried by the cyclic scan of a large group.
    pub word_budget: usize,
    pub seed: u64,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps {
            enum_cap: 1_000_000,
            bar_cap: 32,
            word_budget: crate::permgroup::DEFAULT_WORD_BUDGET,
            seed: 0,
        }
    }
}

/// Outcome of the Sylow computation at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylowRestriction {
    pub prime: u64,
    pub sylow_order: BigUint,
    pub generators: Vec<Permutation>,
    /// Order of the restricted class (the `p`-part of the full order), or
    /// `None` when the Sylow subgroup could not be handled.
    pub class_order: Option<u64>,
    pub note: Option<String>,
}

/// One Sylow restriction per prime dividing `|G|`.
pub fn sylow_restrictions(c: &PathCocycle, group: &PermutationGroup, caps: &ExactCaps) -> Vec<SylowRestriction> {
    let order = group.order();
    factorize(&order)
        .into_iter()
        .map(|(p, _)| {
            let sylow_order = p_part(&order, p);
            let too_big = |what: &str, cap: u64| SylowRestriction {
                prime: p,
                sylow_order: sylow_order.clone(),
                generators: Vec::new(),
                class_order: None,
                note: Some(format!("Sylow {p}-subgroup of order {sylow_order} skipped: {what} cap {cap}")),
            };
            if sylow_order > BigUint::from(caps.bar_cap) {
                return too_big("bar", caps.bar_cap);
            }
            let sylow = match group.sylow_subgroup(p, caps.enum_cap, caps.seed) {
                Ok(s) => s,
                Err(_) => return too_big("enumeration", caps.enum_cap),
            };
            let generators = sylow.generators().to_vec();
            let result = restrict(c, &sylow, caps.bar_cap).and_then(|t| class_order_bar(&t, c.lattice(), caps.bar_cap));
            match result {
                Ok(k) => SylowRestriction { prime: p, sylow_order, generators, class_order: Some(k), note: None },
                Err(e) => SylowRestriction {
                    prime: p,
                    sylow_order,
                    generators,
                    class_order: None,
                    note: Some(format!("Sylow {p}-subgroup failed: {e}")),
                },
            }
        })
        .collect()
}

/// Cyclic restriction found by a scan: generator, its order, class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicRestriction {
    pub sigma: Permutation,
    pub element_order: u64,
    pub class_order: u64,
}

/// Class orders on the cyclic subgroups of a scan of `G`. The flag is true
/// when every cyclic subgroup was visited.
pub fn cyclic_restrictions(
    c: &PathCocycle,
    group: &PermutationGroup,
    caps: &ExactCaps,
) -> Result<(Vec<CyclicRestriction>, bool), CohomologyError> {
    let scan = group.cyclic_subgroups(caps.enum_cap, caps.word_budget, caps.seed);
    let mut out = Vec::with_capacity(scan.subgroups.len());
    for (sigma, m) in scan.subgroups {
        let k = class_order_cyclic(c, &sigma)?;
        out.push(CyclicRestriction { sigma, element_order: m, class_order: k });
    }
    Ok((out, scan.complete))
}

/// Exact class order, or the interval left after the available evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOrder {
    Exact(u64),
    Unknown { lower: u64, upper: BigUint },
}

#[derive(Debug, Clone)]
pub struct ExactAnalysis {
    pub order: ClassOrder,
    pub sylow: Vec<SylowRestriction>,
}

/// Combines Sylow restrictions into the exact order, or an interval whose
/// upper end is `|G|` with each settled prime replaced by its exact part.
pub fn combine_sylow(group_order: &BigUint, sylow: &[SylowRestriction], cyclic_lower: u64) -> ClassOrder {
    let mut lower = cyclic_lower.max(1);
    let mut upper = group_order.clone();
    let mut all = true;
    for s in sylow {
        match s.class_order {
            Some(k) => {
                lower = lower.lcm(&k);
                upper = upper / &s.sylow_order * BigUint::from(k);
            }
            None => all = false,
        }
    }
    if all {
        ClassOrder::Exact(upper.to_u64().expect("exact order divides a bar-capped product"))
    } else {
        ClassOrder::Unknown { lower, upper }
    }
}

/// Order of `[c]` in `H^2(G, M)` as the lcm over primes of the orders of
/// its Sylow restrictions. When some prime is out of reach, the lower end
/// also uses every cyclic restriction found by a scan.
pub fn class_order_exact(c: &PathCocycle, group: &PermutationGroup, caps: &ExactCaps) -> Result<ExactAnalysis, CohomologyError> {
    let sylow = sylow_restrictions(c, group, caps);
    let order = group.order();
    let mut result = combine_sylow(&order, &sylow, 1);
    if let ClassOrder::Unknown { .. } = result {
        let (cyclic, _) = cyclic_restrictions(c, group, caps)?;
        let lower = cyclic.iter().fold(1u64, |acc, r| acc.lcm(&r.class_order));
        result = combine_sylow(&order, &sylow, lower);
    }
    Ok(ExactAnalysis { order: result, sylow })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{automorphism_group, GraphAutomorphism};
    use crate::homology::fundamental_cycle_basis;
    use crate::multigraph::{builtin, Multigraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lift(g: &Multigraph, vmap: &[usize]) -> Permutation {
        GraphAutomorphism::from_vertex_map(g, vmap.to_vec()).unwrap().to_permutation()
    }

    fn rotation(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    /// One-step rotation of a doubled cycle carrying `e_i, f_i` to
    /// `e_{i+1}, f_{i+1}`.
    fn cycle_rotation(g: &Multigraph, m: usize) -> Permutation {
        let pos = |id: String| g.edge_position(&id).unwrap();
        let mut edge_map = vec![0; g.num_edges()];
        for i in 1..=m {
            let j = i % m + 1;
            edge_map[pos(format!("e{i}"))] = pos(format!("e{j}"));
            edge_map[pos(format!("f{i}"))] = pos(format!("f{j}"));
        }
        GraphAutomorphism::new(g, rotation(m), edge_map).unwrap().to_permutation()
    }

    #[test]
    fn normalization() {
        for name in ["k5", "doubled-k4", "hybrid"] {
            let g = builtin(name).unwrap();
            let lat = fundamental_cycle_basis(&g);
            let c = build_path_cocycle(&lat);
            let grp = automorphism_group(&g);
            let id = Permutation::identity(grp.degree());
            assert!(c.path(&id).iter().all(|&x| x == 0));
            for s in grp.generators() {
                assert!(c.value(&id, s).iter().all(|&x| x == 0));
                assert!(c.value(s, &id).iter().all(|&x| x == 0));
                assert!(lat.is_cycle(&c.value_chain(s, s)));
            }
        }
    }

    #[test]
    fn cocycle_identity_on_random_triples() {
        let g = builtin("k5").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        let grp = automorphism_group(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (s, t, u) = (grp.random_element(&mut rng), grp.random_element(&mut rng), grp.random_element(&mut rng));
            let a = lat.act(&s, &c.value_chain(&t, &u));
            let b = c.value_chain(&s.compose(&t), &u);
            let d = c.value_chain(&s, &t.compose(&u));
            let e = c.value_chain(&s, &t);
            assert!(a.iter().zip(&b).zip(&d).zip(&e).all(|(((a, b), d), e)| a - b + d - e == 0));
        }
    }

    #[test]
    fn restriction_tables() {
        let g = builtin("k5").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        let triv = restrict(&c, &PermutationGroup::trivial(15), 10).unwrap();
        assert!(triv.is_zero());
        assert_eq!(class_order_bar(&triv, &lat, 32), Ok(1));

        let sigma = lift(&g, &rotation(5));
        let t = restrict_elements(&c, cyclic_elements(&sigma)).unwrap();
        assert_eq!(t.group().order(), 5);
        assert_eq!(t.rank(), 6);
        assert_eq!(t.values().len(), 25);

        let full = restrict(&c, &automorphism_group(&g), 200).unwrap();
        let again = full.restrict(&cyclic_elements(&sigma)).unwrap();
        assert_eq!(again.values(), t.values());
        assert_eq!(
            full.restrict(std::slice::from_ref(&sigma)).unwrap_err(),
            CohomologyError::NotClosed
        );
    }

    #[test]
    fn bar_order_k5_sylow5() {
        let g = builtin("k5").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        let grp = automorphism_group(&g);
        let p5 = grp.sylow_subgroup(5, 1000, 0).unwrap();
        let t = restrict(&c, &p5, 32).unwrap();
        assert_eq!(class_order_bar(&t, &lat, 32), Ok(5));
        assert!(matches!(class_order_bar(&t, &lat, 4), Err(CohomologyError::Infeasible { .. })));
    }

    #[test]
    fn bar_order_z2_trivial_action() {
        let mul = vec![0, 1, 1, 0];
        let actions = vec![IntMatrix::identity(1), IntMatrix::identity(1)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            // c(s,s) = 1 plus the coboundary of a random normalized f
            let f1: i64 = rng.gen_range(-9..=9);
            let values = vec![vec![0], vec![0], vec![0], vec![1 + 2 * f1]];
            assert_eq!(bar_class_order(&mul, &actions, &values, 2), Ok(2));
        }
    }

    #[test]
    fn doubled_cycle_arc_paths_match_tree_paths() {
        for genus in 3..=6 {
            let g = builtin(&format!("doubled-cycle-g{genus}")).unwrap();
            let m = genus - 1;
            let lat = fundamental_cycle_basis(&g);
            let c = build_path_cocycle(&lat);
            let sigma = cycle_rotation(&g, m);
            let elements = cyclic_elements(&sigma);
            // arc path P_{σ^i} = e + σe + … + σ^{i−1}e with e the f-edge v1→v2
            let f1 = g.edge_position("f1").unwrap();
            let mut arcs = vec![vec![0i64; g.num_edges()]];
            let mut step = vec![0i64; g.num_edges()];
            step[f1] = 1;
            for _ in 1..m {
                let mut next = arcs.last().unwrap().clone();
                sum_chains(&mut next, &step);
                arcs.push(next);
                step = lat.act(&sigma, &step);
            }
            let group = GroupTable::new(elements.clone()).unwrap();
            let pos: Vec<usize> = elements.iter().map(|x| group.position(x).unwrap()).collect();
            let mut values = vec![Vec::new(); m * m];
            let mut loop_chain = vec![0i64; g.num_edges()];
            for k in 1..=m {
                loop_chain[g.edge_position(&format!("f{k}")).unwrap()] = 1;
            }
            let loop_class = lat.coords(&loop_chain);
            for i in 0..m {
                for j in 0..m {
                    let moved = lat.act(&elements[i], &arcs[j]);
                    let z: Chain = arcs[i]
                        .iter()
                        .zip(&moved)
                        .zip(&arcs[(i + j) % m])
                        .map(|((a, b), c)| a + b - c)
                        .collect();
                    let v = lat.coords(&z);
                    let expect = if i + j >= m { loop_class.clone() } else { vec![0; lat.rank()] };
                    assert_eq!(v, expect, "c({i},{j}) for genus {genus}");
                    values[pos[i] * m + pos[j]] = v;
                }
            }
            let arc_table = CocycleTable::from_values(group, lat.rank(), values);
            let tree_table = restrict_elements(&c, elements).unwrap();
            assert_eq!(class_order_bar(&arc_table, &lat, 32), Ok(m as u64));
            assert_eq!(class_order_bar(&tree_table, &lat, 32), Ok(m as u64));
        }
    }

    #[test]
    fn cyclic_closed_form() {
        let g = builtin("doubled-cycle-g5").unwrap();
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        assert_eq!(class_order_cyclic(&c, &Permutation::identity(12)), Ok(1));
        let sigma = lift(&g, &rotation(4));
        assert_eq!(class_order_cyclic(&c, &sigma), Ok(4));
        let t = restrict_elements(&c, cyclic_elements(&sigma)).unwrap();
        assert_eq!(class_order_bar(&t, &lat, 32), Ok(4));

        let k5 = builtin("k5").unwrap();
        let lat = fundamental_cycle_basis(&k5);
        let c = build_path_cocycle(&lat);
        assert_eq!(class_order_cyclic(&c, &lift(&k5, &rotation(5))), Ok(5));
    }

    #[test]
    fn exact_orders() {
        for (name, expect) in [("k5", 5), ("k34", 1), ("doubled-cycle-g3", 2)] {
            let g = builtin(name).unwrap();
            let lat = fundamental_cycle_basis(&g);
            let c = build_path_cocycle(&lat);
            let grp = automorphism_group(&g);
            let caps = ExactCaps { bar_cap: 64, ..ExactCaps::default() };
            let result = class_order_exact(&c, &grp, &caps).unwrap();
            assert_eq!(result.order, ClassOrder::Exact(expect), "{name}");
        }
    }

    #[test]
    fn base_and_tree_choice_do_not_change_orders() {
        let g = builtin("doubled-k4").unwrap();
        let grp = automorphism_group(&g);
        let lat = fundamental_cycle_basis(&g);
        let c = build_path_cocycle(&lat);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut priority: Vec<usize> = (0..g.num_edges()).collect();
        for trial in 0..5 {
            priority.reverse();
            priority.rotate_left(trial);
            let root = trial % g.num_vertices();
            let other = CycleLattice::from_spanning_tree(&g, root, &priority);
            let c2 = PathCocycle::with_base(&other, (root + 1) % g.num_vertices());
            for _ in 0..10 {
                let s = grp.random_element(&mut rng);
                assert_eq!(class_order_cyclic(&c, &s), class_order_cyclic(&c2, &s));
            }
        }
    }
}

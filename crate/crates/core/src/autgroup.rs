//! Automorphisms of multigraphs as (vertex permutation, edge permutation)
//! pairs, and a generating set for the full automorphism group.
//!
//! Vertex maps are found by backtracking with equitable partition
//! refinement on the simple quotient graph whose edge weights are the
//! parallel-edge multiplicities. Each vertex map is lifted to one edge map;
//! adjacent transpositions inside every parallel class supply the rest.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multigraph::Multigraph;
use crate::permgroup::{Permutation, PermutationGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("unknown vertex or edge id `{0}`")]
    UnknownId(String),
    #[error("maps do not define a bijection")]
    NotABijection,
    #[error("maps do not preserve incidence")]
    NotAnAutomorphism,
}

/// An incidence-preserving pair of vertex and edge permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphAutomorphism {
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

/// Serialized form used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDoc {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

impl GraphAutomorphism {
    pub fn identity(g: &Multigraph) -> Self {
        GraphAutomorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).collect(),
        }
    }

    /// Checked constructor from index maps.
    pub fn new(g: &Multigraph, vertex_map: Vec<usize>, edge_map: Vec<usize>) -> Result<Self, AutError> {
        if vertex_map.len() != g.num_vertices() || edge_map.len() != g.num_edges() {
            return Err(AutError::NotABijection);
        }
        let a = GraphAutomorphism { vertex_map, edge_map };
        if Permutation::from_images(a.vertex_map.clone()).is_err()
            || Permutation::from_images(a.edge_map.clone()).is_err()
        {
            return Err(AutError::NotABijection);
        }
        if !a.preserves_incidence(g) {
            return Err(AutError::NotAnAutomorphism);
        }
        Ok(a)
    }

    /// Lifts a vertex permutation, carrying each parallel class onto its
    /// image class in id order.
    pub fn from_vertex_map(g: &Multigraph, vertex_map: Vec<usize>) -> Result<Self, AutError> {
        if vertex_map.len() != g.num_vertices() || Permutation::from_images(vertex_map.clone()).is_err() {
            return Err(AutError::NotABijection);
        }
        let classes = g.parallel_classes();
        for (&(a, b), members) in &classes {
            let (x, y) = (vertex_map[a], vertex_map[b]);
            match classes.get(&(x.min(y), x.max(y))) {
                Some(t) if t.len() == members.len() => {}
                _ => return Err(AutError::NotAnAutomorphism),
            }
        }
        Ok(lift(g, &classes, vertex_map))
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn preserves_incidence(&self, g: &Multigraph) -> bool {
        g.edges().iter().enumerate().all(|(i, e)| {
            let img = &g.edges()[self.edge_map[i]];
            let (a, b) = (self.vertex_map[e.tail], self.vertex_map[e.head]);
            (img.tail == a && img.head == b) || (img.tail == b && img.head == a)
        })
    }

    /// The combined permutation of `V ⊔ E` (vertices first, then edges).
    pub fn to_permutation(&self) -> Permutation {
        let nv = self.vertex_map.len();
        let images = self
            .vertex_map
            .iter()
            .copied()
            .chain(self.edge_map.iter().map(|&e| e + nv))
            .collect();
        Permutation::from_images(images).expect("automorphism is a bijection")
    }

    pub fn from_permutation(g: &Multigraph, p: &Permutation) -> Result<Self, AutError> {
        let nv = g.num_vertices();
        if p.degree() != nv + g.num_edges() {
            return Err(AutError::NotABijection);
        }
        let images: Vec<usize> = p.images().collect();
        if images[..nv].iter().any(|&x| x >= nv) {
            return Err(AutError::NotABijection);
        }
        let edge_map = images[nv..].iter().map(|&x| x.wrapping_sub(nv)).collect();
        GraphAutomorphism::new(g, images[..nv].to_vec(), edge_map)
    }

    pub fn to_doc(&self, g: &Multigraph) -> AutomorphismDoc {
        AutomorphismDoc {
            vertex_map: self
                .vertex_map
                .iter()
                .enumerate()
                .map(|(i, &j)| (g.vertices()[i].clone(), g.vertices()[j].clone()))
                .collect(),
            edge_map: self
                .edge_map
                .iter()
                .enumerate()
                .map(|(i, &j)| (g.edges()[i].id.clone(), g.edges()[j].id.clone()))
                .collect(),
        }
    }

    pub fn from_doc(g: &Multigraph, doc: &AutomorphismDoc) -> Result<Self, AutError> {
        let vpos = |id: &String| g.vertex_position(id).ok_or_else(|| AutError::UnknownId(id.clone()));
        let epos = |id: &String| g.edge_position(id).ok_or_else(|| AutError::UnknownId(id.clone()));
        let mut vertex_map = vec![usize::MAX; g.num_vertices()];
        for (a, b) in &doc.vertex_map {
            vertex_map[vpos(a)?] = vpos(b)?;
        }
        let mut edge_map = vec![usize::MAX; g.num_edges()];
        for (a, b) in &doc.edge_map {
            edge_map[epos(a)?] = epos(b)?;
        }
        if vertex_map.contains(&usize::MAX) || edge_map.contains(&usize::MAX) {
            return Err(AutError::NotABijection);
        }
        GraphAutomorphism::new(g, vertex_map, edge_map)
    }
}

/// The automorphism group as a permutation group on `V ⊔ E`.
pub fn automorphism_group(g: &Multigraph) -> PermutationGroup {
    let gens = automorphism_generators(g).iter().map(|a| a.to_permutation()).collect();
    PermutationGroup::new(g.num_vertices() + g.num_edges(), gens)
}

/// A generating set of `Aut(Γ)`; deterministic for a given graph.
pub fn automorphism_generators(g: &Multigraph) -> Vec<GraphAutomorphism> {
    let weights = g.multiplicity_matrix();
    let classes = g.parallel_classes();
    let mut out: Vec<GraphAutomorphism> = vertex_automorphisms(&weights)
        .into_iter()
        .map(|vm| lift(g, &classes, vm))
        .collect();
    for members in classes.values() {
        for pair in members.windows(2) {
            let mut edge_map: Vec<usize> = (0..g.num_edges()).collect();
            edge_map.swap(pair[0], pair[1]);
            out.push(GraphAutomorphism {
                vertex_map: (0..g.num_vertices()).collect(),
                edge_map,
            });
        }
    }
    out
}

fn lift(g: &Multigraph, classes: &BTreeMap<(usize, usize), Vec<usize>>, vertex_map: Vec<usize>) -> GraphAutomorphism {
    let mut edge_map = vec![0; g.num_edges()];
    for (&(a, b), members) in classes {
        let (x, y) = (vertex_map[a], vertex_map[b]);
        let target = &classes[&(x.min(y), x.max(y))];
        for (src, dst) in members.iter().zip(target) {
            edge_map[*src] = *dst;
        }
    }
    GraphAutomorphism { vertex_map, edge_map }
}

type Partition = Vec<Vec<usize>>;

/// Splits cells of `src` and `tgt` in lockstep until both are equitable.
/// Returns false as soon as the two refinements diverge.
fn refine_pair(w: &[Vec<u32>], src: &mut Partition, tgt: &mut Partition) -> bool {
    if src.len() != tgt.len() || src.iter().zip(tgt.iter()).any(|(a, b)| a.len() != b.len()) {
        return false;
    }
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < src.len() {
            let mut c = 0;
            while c < src.len() {
                if src[c].len() > 1 {
                    match split_cell(w, src, tgt, s, c) {
                        None => return false,
                        Some(did) => changed |= did,
                    }
                }
                c += 1;
            }
            s += 1;
        }
        if !changed {
            return true;
        }
    }
}

fn split_cell(w: &[Vec<u32>], src: &mut Partition, tgt: &mut Partition, s: usize, c: usize) -> Option<bool> {
    let key = |cells: &Partition, v: usize| -> u64 { cells[s].iter().map(|&u| w[v][u] as u64).sum() };
    let mut a: Vec<(u64, usize)> = src[c].iter().map(|&v| (key(src, v), v)).collect();
    let mut b: Vec<(u64, usize)> = tgt[c].iter().map(|&v| (key(tgt, v), v)).collect();
    a.sort_unstable();
    b.sort_unstable();
    if a.iter().map(|x| x.0).ne(b.iter().map(|x| x.0)) {
        return None;
    }
    if a.first().map(|x| x.0) == a.last().map(|x| x.0) {
        return Some(false);
    }
    let groups = |sorted: &[(u64, usize)]| -> Partition {
        let mut out: Partition = Vec::new();
        let mut last = None;
        for &(k, v) in sorted {
            if last != Some(k) {
                out.push(Vec::new());
                last = Some(k);
            }
            out.last_mut().unwrap().push(v);
        }
        out
    };
    let ga = groups(&a);
    let gb = groups(&b);
    src.splice(c..=c, ga);
    tgt.splice(c..=c, gb);
    Some(true)
}

fn individualize(p: &Partition, v: usize) -> Partition {
    let mut out = Vec::with_capacity(p.len() + 1);
    for cell in p {
        if cell.len() > 1 && cell.contains(&v) {
            out.push(vec![v]);
            out.push(cell.iter().copied().filter(|&x| x != v).collect());
        } else {
            out.push(cell.clone());
        }
    }
    out
}

fn is_discrete(p: &Partition) -> bool {
    p.iter().all(|c| c.len() == 1)
}

fn first_open_cell(p: &Partition) -> Option<usize> {
    p.iter().position(|c| c.len() > 1)
}

fn preserves_weights(w: &[Vec<u32>], map: &[usize]) -> bool {
    let n = w.len();
    (0..n).all(|i| (0..n).all(|j| w[i][j] == w[map[i]][map[j]]))
}

/// Depth-first search for a weight-preserving vertex map compatible with
/// the paired partitions.
fn search(w: &[Vec<u32>], mut src: Partition, mut tgt: Partition) -> Option<Vec<usize>> {
    if !refine_pair(w, &mut src, &mut tgt) {
        return None;
    }
    if is_discrete(&src) {
        let mut map = vec![0; w.len()];
        for (a, b) in src.iter().zip(&tgt) {
            map[a[0]] = b[0];
        }
        return preserves_weights(w, &map).then_some(map);
    }
    let c = first_open_cell(&src).unwrap();
    let x = *src[c].iter().min().unwrap();
    let mut candidates = tgt[c].clone();
    candidates.sort_unstable();
    let s = individualize(&src, x);
    for y in candidates {
        if let Some(m) = search(w, s.clone(), individualize(&tgt, y)) {
            return Some(m);
        }
    }
    None
}

/// Generators of the weight-preserving vertex permutations of a weighted
/// simple graph, via a stabilizer chain along the individualization base.
fn vertex_automorphisms(w: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let n = w.len();
    let mut root: Partition = vec![(0..n).collect()];
    let mut dummy = root.clone();
    refine_pair(w, &mut root, &mut dummy);

    // levels[i] = (partition before individualizing base[i], base[i])
    let mut levels: Vec<(Partition, usize)> = Vec::new();
    let mut current = root;
    while let Some(c) = first_open_cell(&current) {
        let x = *current[c].iter().min().unwrap();
        levels.push((current.clone(), x));
        let mut next = individualize(&current, x);
        let mut twin = next.clone();
        refine_pair(w, &mut next, &mut twin);
        current = next;
    }

    let mut gens: Vec<Vec<usize>> = Vec::new();
    for (partition, b) in levels.iter().rev() {
        let cell = partition.iter().find(|c| c.contains(b)).unwrap();
        let mut candidates = cell.clone();
        candidates.sort_unstable();
        let src = individualize(partition, *b);
        for y in candidates {
            if y == *b || orbit_of(&gens, *b, n).contains(&y) {
                continue;
            }
            if let Some(m) = search(w, src.clone(), individualize(partition, y)) {
                gens.push(m);
            }
        }
    }
    gens
}

fn orbit_of(gens: &[Vec<usize>], start: usize, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut orbit = vec![start];
    let mut k = 0;
    while k < orbit.len() {
        let x = orbit[k];
        for g in gens {
            if !seen[g[x]] {
                seen[g[x]] = true;
                orbit.push(g[x]);
            }
        }
        k += 1;
    }
    orbit
}

/// Independent count of `|Aut(Γ)|`: every vertex permutation is tried and
/// the compatible edge bijections are counted class by class. Only for
/// small graphs.
pub fn brute_force_order(g: &Multigraph) -> u128 {
    let n = g.num_vertices();
    let w = g.multiplicity_matrix();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut classes: Vec<u32> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if w[i][j] > 0 {
                classes.push(w[i][j]);
            }
        }
    }
    let edge_factor: u128 = classes
        .iter()
        .map(|&m| (1..=m as u128).product::<u128>())
        .product();
    let mut count = 0u128;
    loop {
        let ok = (0..n).all(|i| (0..n).all(|j| w[i][j] == w[perm[i]][perm[j]]));
        if ok {
            count += edge_factor;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    count
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

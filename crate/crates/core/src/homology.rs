//! The chain complex `Z^E -> Z^V -> Z` of a multigraph, its cycle lattice
//! `H_1(Γ, Z)` with a fundamental-cycle basis, and the automorphism action.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::intlinalg::{smith_normal_form, IntMatrix};
use crate::multigraph::Multigraph;
use crate::permgroup::Permutation;

/// An integer edge chain, one coefficient per edge.
pub type Chain = Vec<i64>;

/// `∂ : Z^E -> Z^V` with column `e` equal to `head(e) - tail(e)`, and the
/// augmentation `Z^V -> Z`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub boundary: IntMatrix,
    pub augmentation: IntMatrix,
}

impl ChainComplex {
    pub fn of(g: &Multigraph) -> Self {
        let mut boundary = IntMatrix::zeros(g.num_vertices(), g.num_edges());
        for (j, e) in g.edges().iter().enumerate() {
            boundary[(e.head, j)] += BigInt::one();
            boundary[(e.tail, j)] -= BigInt::one();
        }
        let augmentation = IntMatrix::from_rows(&[vec![1i64; g.num_vertices()]]);
        ChainComplex { boundary, augmentation }
    }
}

/// Boundary of an edge chain as vertex coefficients.
pub fn boundary(g: &Multigraph, z: &[i64]) -> Vec<i64> {
    let mut out = vec![0; g.num_vertices()];
    for (e, &x) in g.edges().iter().zip(z) {
        out[e.head] += x;
        out[e.tail] -= x;
    }
    out
}

/// Sign with which `σ` carries the reference orientation of edge `e`:
/// `+1` iff the tail maps to the tail of the image edge.
pub fn orientation_sign(g: &Multigraph, sigma: &Permutation, e: usize) -> i64 {
    let nv = g.num_vertices();
    let image = &g.edges()[sigma.apply(nv + e) - nv];
    if image.tail == sigma.apply(g.edges()[e].tail) {
        1
    } else {
        -1
    }
}

/// `σ · z` on edge chains: `e ↦ ±σ(e)`.
pub fn act_on_chain(g: &Multigraph, sigma: &Permutation, z: &[i64]) -> Chain {
    let nv = g.num_vertices();
    let mut out = vec![0; z.len()];
    for (e, &x) in z.iter().enumerate() {
        if x != 0 {
            out[sigma.apply(nv + e) - nv] += orientation_sign(g, sigma, e) * x;
        }
    }
    out
}

/// `H_1(Γ, Z)` with the basis of fundamental cycles of a breadth-first
/// spanning tree.
#[derive(Debug, Clone)]
pub struct CycleLattice {
    graph: Multigraph,
    root: usize,
    /// `parent[v] = (edge, parent vertex)` in the spanning tree.
    parent: Vec<Option<(usize, usize)>>,
    in_tree: Vec<bool>,
    /// Basis index -> non-tree edge.
    non_tree: Vec<usize>,
    basis: Vec<Chain>,
}

/// Root at the lexicographically smallest vertex id.
fn canonical_root(g: &Multigraph) -> usize {
    (0..g.num_vertices())
        .min_by(|&a, &b| g.vertices()[a].cmp(&g.vertices()[b]))
        .unwrap()
}

fn edges_by_id(g: &Multigraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    order.sort_by(|&a, &b| g.edges()[a].id.cmp(&g.edges()[b].id));
    order
}

/// Canonical fundamental-cycle basis: BFS from the smallest vertex id,
/// incident edges explored in edge-id order.
pub fn fundamental_cycle_basis(g: &Multigraph) -> CycleLattice {
    CycleLattice::from_spanning_tree(g, canonical_root(g), &edges_by_id(g))
}

impl CycleLattice {
    /// BFS spanning tree from `root`; incident edges are explored in the
    /// order they appear in `edge_priority` (a permutation of edge indices).
    pub fn from_spanning_tree(g: &Multigraph, root: usize, edge_priority: &[usize]) -> Self {
        let nv = g.num_vertices();
        let ne = g.num_edges();
        let mut rank_of = vec![0; ne];
        for (r, &e) in edge_priority.iter().enumerate() {
            rank_of[e] = r;
        }
        let mut adj = g.adjacency();
        for list in &mut adj {
            list.sort_by_key(|&(e, _)| rank_of[e]);
        }
        let mut parent = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; ne];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, v));
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        let non_tree: Vec<usize> = (0..ne).filter(|&e| !in_tree[e]).collect();
        let mut lattice = CycleLattice {
            graph: g.clone(),
            root,
            parent,
            in_tree,
            non_tree,
            basis: Vec::new(),
        };
        lattice.basis = lattice
            .non_tree
            .iter()
            .map(|&e| {
                let edge = &g.edges()[e];
                let mut z = lattice.tree_path(edge.head, edge.tail);
                z[e] += 1;
                z
            })
            .collect();
        lattice
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.non_tree.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn basis(&self) -> &[Chain] {
        &self.basis
    }

    /// Basis as an `|E| x g` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|z| z.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_columns(self.graph.num_edges(), &cols)
    }

    fn path_from_root(&self, v: usize) -> Chain {
        let mut z = vec![0; self.graph.num_edges()];
        let mut x = v;
        while let Some((e, p)) = self.parent[x] {
            // traversing p -> x along e
            z[e] += if self.graph.edges()[e].tail == p { 1 } else { -1 };
            x = p;
        }
        z
    }

    /// Tree path chain from `u` to `v`: its boundary is `χ_v - χ_u`.
    pub fn tree_path(&self, u: usize, v: usize) -> Chain {
        let a = self.path_from_root(u);
        let b = self.path_from_root(v);
        b.iter().zip(&a).map(|(x, y)| x - y).collect()
    }

    /// Coordinates of a cycle in the fundamental basis (its non-tree
    /// coefficients). Panics in debug builds if `z` is not a cycle.
    pub fn coords(&self, z: &[i64]) -> Vec<i64> {
        debug_assert!(self.is_cycle(z), "chain is not a cycle");
        self.non_tree.iter().map(|&e| z[e]).collect()
    }

    pub fn coords_big(&self, z: &[i64]) -> Vec<BigInt> {
        self.coords(z).into_iter().map(BigInt::from).collect()
    }

    pub fn is_cycle(&self, z: &[i64]) -> bool {
        boundary(&self.graph, z).iter().all(|&x| x == 0)
    }

    /// Edge chain of a lattice vector given in basis coordinates.
    pub fn chain_of(&self, coords: &[i64]) -> Chain {
        let mut z = vec![0; self.graph.num_edges()];
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                for (zi, bi) in z.iter_mut().zip(b) {
                    *zi += c * bi;
                }
            }
        }
        z
    }

    pub fn act(&self, sigma: &Permutation, z: &[i64]) -> Chain {
        act_on_chain(&self.graph, sigma, z)
    }

    /// Matrix of `σ` on the lattice in the fundamental basis.
    pub fn action_matrix(&self, sigma: &Permutation) -> IntMatrix {
        let g = self.rank();
        let mut a = IntMatrix::zeros(g, g);
        for (j, b) in self.basis.iter().enumerate() {
            let image = self.coords(&self.act(sigma, b));
            for (i, x) in image.into_iter().enumerate() {
                if x != 0 {
                    a[(i, j)] = BigInt::from(x);
                }
            }
        }
        a
    }

    /// Image of `z` (basis coordinates) in the coinvariants
    /// `M / (A_σ - I) M`, and whether it is primitive modulo torsion.
    pub fn coinvariant_image(&self, sigma: &Permutation, z: &[BigInt]) -> CoinvariantVerdict {
        let g = self.rank();
        let a = self.action_matrix(sigma).sub(&IntMatrix::identity(g));
        let snf = smith_normal_form(&a);
        let r = snf.rank();
        let uz = snf.u.mul_vec(z);
        let torsion: Vec<(BigInt, BigInt)> = (0..r)
            .map(|i| snf.s[(i, i)].clone())
            .zip(uz.iter().cloned())
            .filter(|(s, _)| !s.is_one())
            .map(|(s, x)| {
                let x = x.mod_floor(&s);
                (s, x)
            })
            .collect();
        let free: Vec<BigInt> = uz[r..].to_vec();
        let content = free.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        CoinvariantVerdict {
            free_rank: g - r,
            free_image: free,
            torsion_image: torsion,
            primitive: content.is_one(),
        }
    }
}

/// Image of a lattice element in the coinvariant quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinvariantVerdict {
    pub free_rank: usize,
    /// Coordinates in the free part `Z^free_rank`.
    pub free_image: Vec<BigInt>,
    /// `(invariant factor, residue)` for each nontrivial torsion summand.
    pub torsion_image: Vec<(BigInt, BigInt)>,
    /// Nonzero and primitive modulo torsion.
    pub primitive: bool,
}

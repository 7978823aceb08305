//! Finite multigraphs used as dual graphs: parsing, validation, genus and
//! the built-in example graphs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard floor on vertex degree; graphs below it are rejected.
pub const MIN_DEGREE: usize = 3;

/// Degree assumed by the period bounds. Vertices between [`MIN_DEGREE`] and
/// this value are accepted but flagged in reports, and invariant subgraphs
/// must meet it to be used for propagation.
pub const STANDING_DEGREE: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph input: {0}")]
    MalformedInput(String),
    #[error("edge `{0}` is a self-loop")]
    SelfLoop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex `{vertex}` has degree {degree}, at least {MIN_DEGREE} is required")]
    DegreeTooLow { vertex: String, degree: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown built-in graph `{0}`")]
    UnknownName(String),
}

/// An edge with a reference orientation `tail -> head` (vertex indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn other_end(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// A connected loopless multigraph. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    ends: [String; 2],
}

impl Multigraph {
    /// Builds and fully validates a graph. Edges are `(id, tail, head)` in
    /// terms of vertex ids.
    pub fn new<S: Into<String>>(
        name: S,
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, GraphError> {
        let g = Self::new_relaxed(name, vertices, edges)?;
        g.check_min_degree()?;
        Ok(g)
    }

    /// Like [`Multigraph::new`] but skips the minimum-degree check. Used for
    /// intermediate subgraphs and for lattice computations on small test
    /// graphs.
    pub fn new_relaxed<S: Into<String>>(
        name: S,
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, GraphError> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(v.clone()));
            }
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut built = Vec::with_capacity(edges.len());
        for (id, tail, head) in edges {
            if edge_index.contains_key(&id) {
                return Err(GraphError::DuplicateId(id));
            }
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    GraphError::MalformedInput(format!("edge `{id}` refers to unknown vertex `{v}`"))
                })
            };
            let t = lookup(&tail)?;
            let h = lookup(&head)?;
            if t == h {
                return Err(GraphError::SelfLoop(id));
            }
            edge_index.insert(id.clone(), built.len());
            built.push(Edge { id, tail: t, head: h });
        }
        if vertices.is_empty() {
            return Err(GraphError::MalformedInput("graph has no vertices".into()));
        }
        let g = Multigraph {
            name: name.into(),
            vertices,
            edges: built,
            vertex_index,
            edge_index,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn check_min_degree(&self) -> Result<(), GraphError> {
        let deg = self.degrees();
        // Report the first offending vertex in stored order.
        for (v, &d) in deg.iter().enumerate() {
            if d < MIN_DEGREE {
                return Err(GraphError::DegreeTooLow {
                    vertex: self.vertices[v].clone(),
                    degree: d,
                });
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertices.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_position(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_position(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// `g = |E| - |V| + 1`, the rank of the cycle lattice.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Vertices whose degree is below [`STANDING_DEGREE`].
    pub fn below_standing_degree(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < STANDING_DEGREE)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    /// Incidence lists: for each vertex, `(edge index, neighbour)` in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((i, e.head));
            adj[e.head].push((i, e.tail));
        }
        adj
    }

    /// Edge multiplicities between unordered vertex pairs.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0u32; n]; n];
        for e in &self.edges {
            m[e.tail][e.head] += 1;
            m[e.head][e.tail] += 1;
        }
        m
    }

    /// Parallel classes keyed by the sorted vertex pair; edges in stored order.
    pub fn parallel_classes(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            classes.entry(key).or_default().push(i);
        }
        classes
    }

    /// The subgraph spanned by the given edges and their incident vertices.
    /// Vertex and edge order follow the parent graph. No degree check.
    pub fn edge_subgraph(&self, edges: &[usize], name: &str) -> Result<Multigraph, GraphError> {
        let keep: HashSet<usize> = edges.iter().copied().collect();
        let mut used = vec![false; self.vertices.len()];
        for &e in &keep {
            used[self.edges[e].tail] = true;
            used[self.edges[e].head] = true;
        }
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| used[*i])
            .map(|(_, v)| v.clone())
            .collect();
        let edge_list = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep.contains(i))
            .map(|(_, e)| {
                (
                    e.id.clone(),
                    self.vertices[e.tail].clone(),
                    self.vertices[e.head].clone(),
                )
            })
            .collect();
        Multigraph::new_relaxed(name, vertices, edge_list)
    }

    /// Same graph with vertex and edge ids relabelled through the given maps.
    pub fn relabel(
        &self,
        vertex_label: impl Fn(&str) -> String,
        edge_label: impl Fn(&str) -> String,
    ) -> Result<Multigraph, GraphError> {
        let vertices = self.vertices.iter().map(|v| vertex_label(v)).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                (
                    edge_label(&e.id),
                    vertex_label(&self.vertices[e.tail]),
                    vertex_label(&self.vertices[e.head]),
                )
            })
            .collect();
        Multigraph::new_relaxed(self.name.clone(), vertices, edges)
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    ends: [self.vertices[e.tail].clone(), self.vertices[e.head].clone()],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("round trip through serde_json")
    }
}

/// Parses the graph JSON format and validates every graph invariant.
pub fn parse_graph(text: &str) -> Result<Multigraph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| GraphError::MalformedInput(e.to_string()))?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| {
            let [t, h] = e.ends;
            (e.id, t, h)
        })
        .collect();
    Multigraph::new(doc.name, doc.vertices, edges)
}

/// Genus of a valid graph.
pub fn genus(g: &Multigraph) -> usize {
    g.genus()
}

pub const BUILTIN_NAMES: &[&str] = &[
    "doubled-cycle-g3",
    "doubled-cycle-g4",
    "doubled-cycle-g5",
    "doubled-cycle-g6",
    "doubled-cycle-g7",
    "doubled-cycle-g8",
    "k5",
    "k34",
    "doubled-k4",
    "hybrid",
    "soccer-doubled",
];

pub fn builtin(name: &str) -> Result<Multigraph, GraphError> {
    if let Some(g) = name.strip_prefix("doubled-cycle-g") {
        return match g.parse::<usize>() {
            Ok(genus @ 3..=8) => Ok(doubled_cycle(genus)),
            _ => Err(GraphError::UnknownName(name.to_string())),
        };
    }
    match name {
        "k5" => Ok(complete_graph(5)),
        "k34" => Ok(complete_bipartite(3, 4)),
        "doubled-k4" => Ok(doubled_k4()),
        "hybrid" => Ok(hybrid()),
        "soccer-doubled" => Ok(soccer_doubled()),
        _ => Err(GraphError::UnknownName(name.to_string())),
    }
}

fn strings(n: usize, prefix: &str) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn edge(id: String, t: &str, h: &str) -> (String, String, String) {
    (id, t.to_string(), h.to_string())
}

/// `genus - 1` vertices on a cycle, every cycle edge doubled (`e_i`, `f_i`).
/// Valid for `genus >= 3`.
pub fn doubled_cycle(genus: usize) -> Multigraph {
    assert!(genus >= 3, "doubled cycle needs genus at least 3");
    let n = genus - 1;
    let vs = strings(n, "v");
    let mut edges = Vec::new();
    for i in 0..n {
        let (a, b) = (&vs[i], &vs[(i + 1) % n]);
        edges.push(edge(format!("e{}", i + 1), a, b));
        edges.push(edge(format!("f{}", i + 1), a, b));
    }
    Multigraph::new(format!("doubled-cycle-g{genus}"), vs, edges).expect("doubled cycle is valid")
}

pub fn complete_graph(n: usize) -> Multigraph {
    let vs = strings(n, "v");
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push(edge(format!("e{}{}", i + 1, j + 1), &vs[i], &vs[j]));
        }
    }
    Multigraph::new(format!("k{n}"), vs, edges).expect("complete graph is valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let left = strings(a, "a");
    let right = strings(b, "b");
    let mut edges = Vec::new();
    for x in &left {
        for y in &right {
            edges.push(edge(format!("{x}{y}"), x, y));
        }
    }
    let vs = left.into_iter().chain(right).collect();
    Multigraph::new(format!("k{a}{b}"), vs, edges).expect("complete bipartite graph is valid")
}

/// K4 with the 4-cycle v1 v2 v3 v4 doubled; diagonals v1v3, v2v4 single.
pub fn doubled_k4() -> Multigraph {
    let vs = strings(4, "v");
    let mut edges = Vec::new();
    for i in 0..4 {
        let (a, b) = (&vs[i], &vs[(i + 1) % 4]);
        edges.push(edge(format!("e{}", i + 1), a, b));
        edges.push(edge(format!("f{}", i + 1), a, b));
    }
    edges.push(edge("d13".into(), &vs[0], &vs[2]));
    edges.push(edge("d24".into(), &vs[1], &vs[3]));
    Multigraph::new("doubled-k4", vs, edges).expect("doubled K4 is valid")
}

/// Doubled 4-cycle on v1..v4 plus w1..w4, where w_i is joined by doubled
/// edges to v_i and v_{i+1}.
pub fn hybrid() -> Multigraph {
    let vs = strings(4, "v");
    let ws = strings(4, "w");
    let mut edges = Vec::new();
    for i in 0..4 {
        let (a, b) = (&vs[i], &vs[(i + 1) % 4]);
        edges.push(edge(format!("e{}", i + 1), a, b));
        edges.push(edge(format!("f{}", i + 1), a, b));
    }
    for i in 0..4 {
        let w = &ws[i];
        for (k, v) in [&vs[i], &vs[(i + 1) % 4]].into_iter().enumerate() {
            edges.push(edge(format!("g{}{}", i + 1, k + 1), v, w));
            edges.push(edge(format!("h{}{}", i + 1, k + 1), v, w));
        }
    }
    let all = vs.into_iter().chain(ws).collect();
    Multigraph::new("hybrid", all, edges).expect("hybrid graph is valid")
}

/// Icosahedron adjacency: 0 top, 1..=5 upper ring, 6..=10 lower ring, 11 bottom.
fn icosahedron_edges() -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..5 {
        let u = 1 + i;
        let u_next = 1 + (i + 1) % 5;
        let l = 6 + i;
        let l_next = 6 + (i + 1) % 5;
        e.push((0, u));
        e.push((u, u_next));
        e.push((u, l));
        e.push((u, l_next));
        e.push((l, l_next));
        e.push((l, 11));
    }
    e
}

/// Truncated icosahedron with each hexagon-hexagon edge doubled.
///
/// Vertices are the directed edges `(u, w)` of the icosahedron ("near `u`
/// on the edge towards `w`"). Hexagon-hexagon edges join `(u, w)` and
/// `(w, u)`; pentagon edges join `(u, w)` and `(u, x)` when `w ~ x`.
pub fn soccer_doubled() -> Multigraph {
    let ico = icosahedron_edges();
    let mut adj = vec![HashSet::new(); 12];
    for &(a, b) in &ico {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut darts: Vec<(usize, usize)> = Vec::new();
    for u in 0..12 {
        let mut nb: Vec<usize> = adj[u].iter().copied().collect();
        nb.sort_unstable();
        darts.extend(nb.into_iter().map(|w| (u, w)));
    }
    let name = |(u, w): (usize, usize)| format!("t{u}.{w}");
    let vertices: Vec<String> = darts.iter().map(|&d| name(d)).collect();
    let mut edges = Vec::new();
    for &(a, b) in &ico {
        let (x, y) = (name((a, b)), name((b, a)));
        edges.push(edge(format!("h{a}.{b}a"), &x, &y));
        edges.push(edge(format!("h{a}.{b}b"), &x, &y));
    }
    for u in 0..12 {
        let mut nb: Vec<usize> = adj[u].iter().copied().collect();
        nb.sort_unstable();
        for (i, &w) in nb.iter().enumerate() {
            for &x in &nb[i + 1..] {
                if adj[w].contains(&x) {
                    edges.push(edge(format!("p{u}.{w}.{x}"), &name((u, w)), &name((u, x))));
                }
            }
        }
    }
    Multigraph::new("soccer-doubled", vertices, edges).expect("soccer graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k5_from_json() {
        let g = parse_graph(&complete_graph(5).to_json()).unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_edges(), 10);
        assert_eq!(g.genus(), 6);
    }

    #[test]
    fn self_loop_rejected() {
        let text = r#"{"name":"x","vertices":["a","b"],"edges":[{"id":"l","ends":["a","a"]}]}"#;
        assert_eq!(parse_graph(text), Err(GraphError::SelfLoop("l".into())));
    }

    #[test]
    fn path_graph_degree_too_low() {
        let text = r#"{"name":"p","vertices":["a","b","c"],
            "edges":[{"id":"x","ends":["a","b"]},{"id":"y","ends":["b","c"]}]}"#;
        match parse_graph(text) {
            Err(GraphError::DegreeTooLow { vertex, degree }) => {
                assert_eq!(vertex, "a");
                assert_eq!(degree, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn disconnected_and_duplicates() {
        let two_blobs = r#"{"name":"d","vertices":["a","b","c","d"],"edges":[
            {"id":"1","ends":["a","b"]},{"id":"2","ends":["a","b"]},
            {"id":"3","ends":["a","b"]},{"id":"4","ends":["a","b"]},
            {"id":"5","ends":["c","d"]},{"id":"6","ends":["c","d"]},
            {"id":"7","ends":["c","d"]},{"id":"8","ends":["c","d"]}]}"#;
        assert_eq!(parse_graph(two_blobs), Err(GraphError::Disconnected));
        let dup = r#"{"name":"d","vertices":["a","a"],"edges":[]}"#;
        assert_eq!(parse_graph(dup), Err(GraphError::DuplicateId("a".into())));
    }

    #[test]
    fn unknown_fields_and_bad_json() {
        let extra = r#"{"name":"x","vertices":[],"edges":[],"weight":3}"#;
        assert!(matches!(parse_graph(extra), Err(GraphError::MalformedInput(_))));
        assert!(matches!(parse_graph("{"), Err(GraphError::MalformedInput(_))));
        let bad_vertex = r#"{"name":"x","vertices":["a"],"edges":[{"id":"e","ends":["a","q"]}]}"#;
        assert!(matches!(parse_graph(bad_vertex), Err(GraphError::MalformedInput(_))));
    }

    #[test]
    fn builtin_genera() {
        let expected = [
            ("doubled-cycle-g3", 3),
            ("doubled-cycle-g5", 5),
            ("doubled-cycle-g8", 8),
            ("k5", 6),
            ("k34", 6),
            ("doubled-k4", 7),
            ("hybrid", 17),
            ("soccer-doubled", 61),
        ];
        for (name, g) in expected {
            assert_eq!(builtin(name).unwrap().genus(), g, "{name}");
        }
        for name in BUILTIN_NAMES {
            let g = builtin(name).unwrap();
            let low = g.below_standing_degree();
            // K_{3,4} has degree 3 on its larger side
            if *name == "k34" {
                assert_eq!(low.len(), 4);
            } else {
                assert!(low.is_empty(), "{name}");
            }
        }
        assert_eq!(builtin("unknown"), Err(GraphError::UnknownName("unknown".into())));
        assert!(builtin("doubled-cycle-g9").is_err());
    }

    #[test]
    fn builtin_shapes() {
        let h = hybrid();
        assert_eq!((h.num_vertices(), h.num_edges()), (8, 24));
        let k = doubled_k4();
        assert_eq!((k.num_vertices(), k.num_edges()), (4, 10));
        let s = soccer_doubled();
        assert_eq!((s.num_vertices(), s.num_edges()), (60, 120));
        assert!(s.degrees().iter().all(|&d| d == 4));
        // 30 doubled pairs, 60 single pentagon edges
        let classes = s.parallel_classes();
        assert_eq!(classes.values().filter(|c| c.len() == 2).count(), 30);
        assert_eq!(classes.values().filter(|c| c.len() == 1).count(), 60);
    }

    #[test]
    fn genus_invariant_under_relabel() {
        let g = hybrid();
        let r = g.relabel(|v| format!("x_{v}"), |e| format!("y_{e}")).unwrap();
        assert_eq!(r.genus(), g.genus());
    }
}

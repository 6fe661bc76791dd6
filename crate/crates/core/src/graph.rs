//! Simple undirected graphs, BFS distances and Cartesian products.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
///
/// Immutable once built; equality compares canonical adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Shortest-path distance, with an explicit marker for other components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    pub source: usize,
    pub dist: Vec<Distance>,
}

impl DistanceTable {
    pub fn get(&self, v: usize) -> Distance {
        self.dist[v]
    }

    /// Largest finite distance from the source.
    pub fn eccentricity(&self) -> usize {
        self.dist
            .iter()
            .filter_map(|d| d.finite())
            .max()
            .unwrap_or(0)
    }

    pub fn all_reachable(&self) -> bool {
        self.dist.iter().all(|d| matches!(d, Distance::Finite(_)))
    }
}

/// Wire format `{"n": <int>, "edges": [[u,v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub edges: Vec<[usize; 2]>,
    pub n: usize,
}

impl Graph {
    /// Validates and canonicalises an edge list.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// The common valency, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }

    pub fn bfs_distances(&self, source: usize) -> DistanceTable {
        let mut dist = vec![Distance::Unreachable; self.vertex_count()];
        dist[source] = Distance::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let Distance::Finite(du) = dist[u] else {
                unreachable!()
            };
            for &w in &self.adjacency[u] {
                if dist[w] == Distance::Unreachable {
                    dist[w] = Distance::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        DistanceTable { source, dist }
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs_distances(0).all_reachable()
    }

    /// Maximum distance over all pairs, or `Unreachable` if disconnected.
    pub fn diameter(&self) -> Distance {
        let mut best = 0;
        for s in 0..self.vertex_count() {
            let table = self.bfs_distances(s);
            if !table.all_reachable() {
                return Distance::Unreachable;
            }
            best = best.max(table.eccentricity());
        }
        Distance::Finite(best)
    }

    /// All-pairs distance matrix; `None` when disconnected.
    pub fn distance_matrix(&self) -> Option<Vec<Vec<usize>>> {
        (0..self.vertex_count())
            .map(|s| {
                self.bfs_distances(s)
                    .dist
                    .into_iter()
                    .map(Distance::finite)
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Cartesian product; vertex `(a, b)` is encoded as `a * other.n + b`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let nh = other.vertex_count();
        let n = self.vertex_count() * nh;
        let mut adjacency = Vec::with_capacity(n);
        for a in 0..self.vertex_count() {
            for b in 0..nh {
                let mut list: Vec<usize> = self.adjacency[a]
                    .iter()
                    .map(|&a2| a2 * nh + b)
                    .chain(other.adjacency[b].iter().map(|&b2| a * nh + b2))
                    .collect();
                list.sort_unstable();
                adjacency.push(list);
            }
        }
        Graph {
            adjacency,
            edge_count: self.vertex_count() * other.edge_count + nh * self.edge_count,
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.vertex_count(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(json.n, &edges)
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle needs n >= 3")
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &edges).expect("valid complete graph")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("valid path")
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &edges).expect("valid star")
    }

    /// Outer 5-cycle `0..5`, spokes `i–i+5`, inner pentagram on `5..10`.
    pub fn petersen() -> Graph {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).expect("valid Petersen graph")
    }

    /// Built-in graphs by name: `petersen`, `cN`, `kN`, `pN` (path), `starN`.
    pub fn named(name: &str) -> Option<Graph> {
        let name = name.trim().to_ascii_lowercase();
        if name == "petersen" {
            return Some(Graph::petersen());
        }
        let split = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
        if let Some(leaves) = split("star") {
            return (leaves >= 1).then(|| Graph::star(leaves));
        }
        if let Some(n) = split("c") {
            return (n >= 3).then(|| Graph::cycle(n));
        }
        if let Some(n) = split("k") {
            return (n >= 1).then(|| Graph::complete(n));
        }
        if let Some(n) = split("p") {
            return (n >= 1).then(|| Graph::path(n));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn c5_has_degree_two() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(g, Graph::cycle(5));
        assert!((0..5).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::new(3, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(Graph::new(3, &[(2, 2)]), Err(Error::SelfLoop(2)));
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn petersen_basics() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.regular_degree(), Some(3));
        for s in 0..10 {
            assert_eq!(g.bfs_distances(s).eccentricity(), 2);
        }
        assert_eq!(g.diameter(), Distance::Finite(2));
    }

    #[test]
    fn cycle_distances() {
        let t = Graph::cycle(5).bfs_distances(0);
        let d: Vec<_> = t.dist.iter().map(|d| d.finite().unwrap()).collect();
        assert_eq!(d, vec![0, 1, 2, 2, 1]);
    }

    #[test]
    fn disconnected_is_unreachable() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let t = g.bfs_distances(0);
        assert_eq!(t.get(2), Distance::Unreachable);
        assert_eq!(t.get(3), Distance::Unreachable);
        assert_eq!(g.diameter(), Distance::Unreachable);
        assert!(g.distance_matrix().is_none());
    }

    #[test]
    fn k4_diameter_one() {
        assert_eq!(Graph::complete(4).diameter(), Distance::Finite(1));
    }

    #[test]
    fn products() {
        let k2 = Graph::complete(2);
        assert_eq!(
            k2.cartesian_product(&k2),
            Graph::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
        );
        let c5 = Graph::cycle(5);
        let c = c5.cartesian_product(&c5);
        assert_eq!((c.vertex_count(), c.edge_count()), (25, 50));
        assert_eq!(c.regular_degree(), Some(4));
        assert_eq!(c.edges().count(), 50);
        let p = Graph::petersen().cartesian_product(&Graph::petersen());
        assert_eq!((p.vertex_count(), p.regular_degree()), (100, Some(6)));
    }

    #[test]
    fn common_neighbor_counts() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.common_neighbors(0, 2), 1);
        assert_eq!(c5.common_neighbors(3, 3), 2);
    }

    #[test]
    fn json_is_sorted() {
        let g = Graph::new(3, &[(2, 1), (1, 0)]).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(text, r#"{"edges":[[0,1],[1,2]],"n":3}"#);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn named_graphs() {
        assert_eq!(Graph::named("Petersen"), Some(Graph::petersen()));
        assert_eq!(Graph::named("c7"), Some(Graph::cycle(7)));
        assert_eq!(Graph::named("k4"), Some(Graph::complete(4)));
        assert_eq!(Graph::named("star3").unwrap().vertex_count(), 4);
        assert_eq!(Graph::named("c2"), None);
        assert_eq!(Graph::named("dodecahedron"), None);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                let edges: Vec<_> = pairs
                    .into_iter()
                    .zip(bits)
                    .filter_map(|(p, b)| b.then_some(p))
                    .collect();
                Graph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_symmetric(g in arb_graph()) {
            for u in 0..g.vertex_count() {
                for &v in g.neighbors(u) {
                    prop_assert!(g.is_adjacent(v, u));
                }
            }
        }

        #[test]
        fn product_degrees_add(g in arb_graph(), h in arb_graph()) {
            let p = g.cartesian_product(&h);
            let nh = h.vertex_count();
            prop_assert_eq!(p.edge_count(), g.vertex_count() * h.edge_count() + nh * g.edge_count());
            prop_assert_eq!(p.edges().count(), p.edge_count());
            for a in 0..g.vertex_count() {
                for b in 0..nh {
                    prop_assert_eq!(p.degree(a * nh + b), g.degree(a) + h.degree(b));
                }
            }
        }

        #[test]
        fn bfs_is_metric(g in arb_graph()) {
            let n = g.vertex_count();
            let tables: Vec<_> = (0..n).map(|s| g.bfs_distances(s)).collect();
            for u in 0..n {
                for v in 0..n {
                    prop_assert_eq!(tables[u].get(v), tables[v].get(u));
                    for w in 0..n {
                        if let (Some(a), Some(b), Some(c)) = (
                            tables[u].get(w).finite(),
                            tables[u].get(v).finite(),
                            tables[v].get(w).finite(),
                        ) {
                            prop_assert!(a <= b + c);
                        }
                    }
                }
                for &v in g.neighbors(u) {
                    let (a, b) = (tables[0].get(u), tables[0].get(v));
                    if let (Some(a), Some(b)) = (a.finite(), b.finite()) {
                        prop_assert!(a.abs_diff(b) <= 1);
                    }
                }
            }
        }
    }
}

//! Plain adjacency graphs and the four algebraic families built on a group.

use crate::group::{Automorphism, Elem, GenSet, Group};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("family {0} requires an automorphism σ")]
    MissingSigma(Family),
    #[error("family {0} takes no automorphism")]
    UnexpectedSigma(Family),
    #[error("σ has order {0}; twisted families need order 1 or 2")]
    SigmaOrder(usize),
    #[error("σ and S belong to different groups")]
    GroupMismatch,
    #[error("graph is directed; use strong connectivity instead")]
    Directed,
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("edge list parse error at line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
}

/// Simple directed graph with sorted out-neighbour lists. Loops are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Deduplicates and sorts each neighbour list.
    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adjacency }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], undirected: bool) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
            if undirected {
                adjacency[v].push(u);
            }
        }
        Graph::from_adjacency(adjacency)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges, true)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges, true)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges, true)
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges, true)
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    /// Symmetric edge relation, checked against the transpose.
    pub fn is_undirected(&self) -> bool {
        (0..self.len()).all(|u| self.adjacency[u].iter().all(|&v| self.has_edge(v, u)))
    }

    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if self.is_empty() {
            return seen;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// One BFS from vertex 0; only meaningful for undirected graphs.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if !self.is_undirected() {
            return Err(GraphError::Directed);
        }
        Ok(self.reachable_from(0).into_iter().all(|b| b))
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let transpose = {
            let mut adj = vec![Vec::new(); self.len()];
            for u in 0..self.len() {
                for &v in &self.adjacency[u] {
                    adj[v].push(u);
                }
            }
            Graph::from_adjacency(adj)
        };
        self.reachable_from(0).into_iter().all(|b| b)
            && transpose.reachable_from(0).into_iter().all(|b| b)
    }

    /// Unweighted distances from `source` (`usize::MAX` when unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Every vertex lies in the closed neighbourhood of some vertex of `set`.
    pub fn is_dominating(&self, set: &[usize]) -> bool {
        let mut covered = vec![false; self.len()];
        for &u in set {
            covered[u] = true;
            for &v in &self.adjacency[u] {
                covered[v] = true;
            }
        }
        covered.into_iter().all(|b| b)
    }

    /// Edges as `(u, v)`; undirected graphs list each edge once with `u ≤ v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let undirected = self.is_undirected();
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|u| self.adjacency[u].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| !undirected || u <= v)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn export(&self, format: ExportFormat) -> String {
        let undirected = self.is_undirected();
        match format {
            ExportFormat::EdgeList => self
                .edges()
                .into_iter()
                .map(|(u, v)| format!("{u} {v}\n"))
                .collect(),
            ExportFormat::AdjacencyJson => {
                let doc = AdjacencyDoc {
                    n: self.len(),
                    directed: !undirected,
                    adjacency: self.adjacency.clone(),
                };
                serde_json::to_string_pretty(&doc).expect("adjacency serializes") + "\n"
            }
            ExportFormat::Dot => {
                let (kind, arrow) = if undirected {
                    ("graph", "--")
                } else {
                    ("digraph", "->")
                };
                let mut out = format!("{kind} G {{\n");
                for v in 0..self.len() {
                    out.push_str(&format!("  {v};\n"));
                }
                for (u, v) in self.edges() {
                    out.push_str(&format!("  {u} {arrow} {v};\n"));
                }
                out.push_str("}\n");
                out
            }
        }
    }

    /// Reads `u v` lines; `#` starts a comment and a line holding a single
    /// integer declares the vertex count. Edges are read as undirected.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            let nums = nums.map_err(|_| GraphError::EdgeList {
                line: i + 1,
                msg: format!("non-integer token in {line:?}"),
            })?;
            match nums.as_slice() {
                [n] => declared = Some(*n),
                [u, v] => edges.push((*u, *v)),
                _ => {
                    return Err(GraphError::EdgeList {
                        line: i + 1,
                        msg: "expected `u v`".into(),
                    })
                }
            }
        }
        let max_vertex = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(0).max(max_vertex);
        Ok(Graph::from_edges(n, &edges, true))
    }
}

#[derive(Serialize, Deserialize)]
struct AdjacencyDoc {
    n: usize,
    directed: bool,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    AdjacencyJson,
    Dot,
}

impl std::str::FromStr for ExportFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" => Ok(ExportFormat::EdgeList),
            "adjacency-json" => Ok(ExportFormat::AdjacencyJson),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(GraphError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cayley,
    CayleySum,
    TwistedCayley,
    TwistedCayleySum,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Cayley,
        Family::CayleySum,
        Family::TwistedCayley,
        Family::TwistedCayleySum,
    ];

    pub fn is_twisted(self) -> bool {
        matches!(self, Family::TwistedCayley | Family::TwistedCayleySum)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cayley => "cayley",
            Family::CayleySum => "cayley-sum",
            Family::TwistedCayley => "twisted-cayley",
            Family::TwistedCayleySum => "twisted-cayley-sum",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| GraphError::UnknownFamily(s.to_string()))
    }
}

/// Closed-form undirectedness prediction next to the observed answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UndirectedCheck {
    pub predicted: bool,
    pub observed: bool,
    pub agree: bool,
}

/// A Cayley-type graph together with the data it was built from.
#[derive(Debug, Clone)]
pub struct AlgebraicGraph {
    family: Family,
    genset: GenSet,
    sigma: Option<Automorphism>,
    graph: Graph,
    undirected: bool,
}

impl AlgebraicGraph {
    pub fn build(
        family: Family,
        genset: GenSet,
        sigma: Option<Automorphism>,
    ) -> Result<Self, GraphError> {
        match (&sigma, family.is_twisted()) {
            (None, true) => return Err(GraphError::MissingSigma(family)),
            (Some(_), false) => return Err(GraphError::UnexpectedSigma(family)),
            (Some(s), true) => {
                if s.order() > 2 {
                    return Err(GraphError::SigmaOrder(s.order()));
                }
                if **s.group() != **genset.group() {
                    return Err(GraphError::GroupMismatch);
                }
            }
            (None, false) => {}
        }
        let group = genset.group().clone();
        let mut this = AlgebraicGraph {
            family,
            genset,
            sigma,
            graph: Graph::from_adjacency(Vec::new()),
            undirected: false,
        };
        let adjacency = group
            .elements()
            .map(|x| {
                this.genset
                    .members()
                    .iter()
                    .map(|&s| this.step(x, s))
                    .collect()
            })
            .collect();
        this.graph = Graph::from_adjacency(adjacency);
        this.undirected = this.graph.is_undirected();
        Ok(this)
    }

    /// Target of the edge leaving `x` labelled by generator `s`.
    #[inline]
    pub fn step(&self, x: Elem, s: Elem) -> Elem {
        let g = self.group();
        match self.family {
            Family::Cayley => g.mul(x, s),
            Family::CayleySum => g.mul(g.inv(x), s),
            Family::TwistedCayley => self.sigma().apply(g.mul(x, s)),
            Family::TwistedCayleySum => self.sigma().apply(g.mul(g.inv(x), s)),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn group(&self) -> &Arc<Group> {
        self.genset.group()
    }

    pub fn genset(&self) -> &GenSet {
        &self.genset
    }

    pub fn sigma_opt(&self) -> Option<&Automorphism> {
        self.sigma.as_ref()
    }

    /// σ for twisted families; panics otherwise.
    pub fn sigma(&self) -> &Automorphism {
        self.sigma.as_ref().expect("twisted family carries σ")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.graph.len())
            .filter(|&v| self.graph.has_loop(v))
            .collect()
    }

    pub fn is_connected(&self) -> Result<bool, GraphError> {
        self.graph.is_connected()
    }

    /// The family's closed-form undirectedness criterion against the
    /// transpose scan.
    pub fn check_undirected_criterion(&self) -> UndirectedCheck {
        let g = self.group();
        let s = &self.genset;
        let predicted = match self.family {
            Family::Cayley => s.is_symmetric(),
            Family::CayleySum => s.is_conjugation_closed(),
            Family::TwistedCayley => {
                let sigma = self.sigma();
                s.members().iter().all(|&x| {
                    g.elements().all(|h| {
                        let left = sigma.apply(g.mul(g.inv(x), g.inv(h)));
                        s.contains(g.mul(left, sigma.apply_inverse(h)))
                    })
                })
            }
            Family::TwistedCayleySum => {
                let sigma = self.sigma();
                s.members().iter().all(|&x| {
                    g.elements().all(|h| {
                        let h2 = sigma.apply(sigma.apply(h));
                        s.contains(g.mul(g.mul(h2, sigma.apply(x)), g.inv(h)))
                    })
                })
            }
        };
        let observed = self.undirected;
        UndirectedCheck {
            predicted,
            observed,
            agree: predicted == observed,
        }
    }

    pub fn export(&self, format: ExportFormat) -> String {
        self.graph.export(format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families::cyclic;
    use crate::group::GroupSpec;

    fn z(n: usize) -> Arc<Group> {
        Arc::new(cyclic(n).unwrap())
    }

    fn build(
        family: Family,
        g: &Arc<Group>,
        s: &[Elem],
        sigma: Option<Automorphism>,
    ) -> AlgebraicGraph {
        AlgebraicGraph::build(
            family,
            GenSet::new(g.clone(), s.iter().copied()).unwrap(),
            sigma,
        )
        .unwrap()
    }

    #[test]
    fn cayley_z5_is_five_cycle() {
        let g = build(Family::Cayley, &z(5), &[1, 4], None);
        assert_eq!(g.graph(), &Graph::cycle(5));
        assert!(g.is_undirected());
    }

    #[test]
    fn cayley_sum_z5_is_path_with_loops() {
        let g = build(Family::CayleySum, &z(5), &[1, 4], None);
        assert!(g.is_undirected());
        assert_eq!(g.loops(), vec![2, 3]);
        let non_loop: Vec<_> = g
            .graph()
            .edges()
            .into_iter()
            .filter(|(u, v)| u != v)
            .collect();
        // path 2-4-0-1-3 (u + v ∈ {1, 4})
        assert_eq!(non_loop, vec![(0, 1), (0, 4), (1, 3), (2, 4)]);
        assert!(g.is_connected().unwrap());
        let text = g.export(ExportFormat::EdgeList);
        assert!(text.contains("2 2\n") && text.contains("3 3\n"));
    }

    #[test]
    fn k2_and_disconnected() {
        let g = build(Family::CayleySum, &z(2), &[1], None);
        assert_eq!(g.export(ExportFormat::EdgeList), "0 1\n");
        assert!(g.is_connected().unwrap());
        assert!(build(Family::Cayley, &z(2), &[1], None)
            .is_connected()
            .unwrap());
        assert!(!build(Family::Cayley, &z(6), &[2, 4], None)
            .is_connected()
            .unwrap());
        assert_eq!(
            build(Family::Cayley, &z(5), &[1], None).is_connected(),
            Err(GraphError::Directed)
        );
    }

    #[test]
    fn dot_export_counts() {
        let g = build(Family::Cayley, &z(5), &[1, 4], None);
        let dot = g.export(ExportFormat::Dot);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert_eq!(
            dot.lines()
                .filter(|l| l.trim().ends_with(';') && !l.contains("--"))
                .count(),
            5
        );
        assert!("svg".parse::<ExportFormat>().is_err());
    }

    #[test]
    fn sigma_validation() {
        let g = z(5);
        let s = GenSet::new(g.clone(), [1, 4]).unwrap();
        assert_eq!(
            AlgebraicGraph::build(Family::TwistedCayley, s.clone(), None).unwrap_err(),
            GraphError::MissingSigma(Family::TwistedCayley)
        );
        let neg = Automorphism::inversion(g.clone()).unwrap();
        assert!(matches!(
            AlgebraicGraph::build(Family::Cayley, s.clone(), Some(neg)),
            Err(GraphError::UnexpectedSigma(_))
        ));
        let doubling = Automorphism::new(g, vec![0, 2, 4, 1, 3]).unwrap();
        assert_eq!(
            AlgebraicGraph::build(Family::TwistedCayleySum, s, Some(doubling)).unwrap_err(),
            GraphError::SigmaOrder(4)
        );
    }

    #[test]
    fn criterion_examples() {
        let s3 = Arc::new(GroupSpec::Symmetric(3).build().unwrap());
        let three_cycle = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let g = build(Family::CayleySum, &s3, &[three_cycle], None);
        let c = g.check_undirected_criterion();
        assert_eq!((c.predicted, c.observed, c.agree), (false, false, true));
        // abelian cayley-sum is always undirected
        let g = build(Family::CayleySum, &z(7), &[1, 2], None);
        let c = g.check_undirected_criterion();
        assert!(c.predicted && c.observed);
    }

    #[test]
    fn twisted_sum_negation_agrees() {
        for n in 1..=12 {
            let g = z(n);
            let neg = Automorphism::inversion(g.clone()).unwrap();
            for a in 0..n {
                let members = [a, g.inv(a)];
                let graph = build(Family::TwistedCayleySum, &g, &members, Some(neg.clone()));
                assert!(graph.check_undirected_criterion().agree, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn edge_list_parse() {
        let g = Graph::parse_edge_list("# petersen-ish\n12\n0 1\n1 2 # c\n").unwrap();
        assert_eq!(g.len(), 12);
        assert!(g.has_edge(1, 0));
        assert!(Graph::parse_edge_list("0 1 2\n").is_err());
        let p = Graph::petersen();
        assert_eq!(
            Graph::parse_edge_list(&p.export(ExportFormat::EdgeList)).unwrap(),
            p
        );
    }
}

//! Unrooted trees, BFS metrics and rootings.
//!
//! Vertices are dense `0..n` ids. Adjacency and child lists are kept sorted
//! ascending so every traversal is deterministic.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// An immutable, validated unrooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    /// Normalized `(min, max)` pairs, sorted.
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Tree {
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(TreeError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateEdge(w[0].0, w[0].1));
        }
        if norm.len() != n - 1 {
            return Err(TreeError::EdgeCount {
                expected: n - 1,
                found: norm.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &norm {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = Tree {
            n,
            edges: norm,
            adj,
        };
        // n - 1 edges plus connectivity rules out cycles.
        if tree.bfs_distances(0).iter().any(|d| d.is_none()) {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    pub fn single_vertex() -> Self {
        Tree {
            n: 1,
            edges: Vec::new(),
            adj: vec![Vec::new()],
        }
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self, TreeError> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::new(n, &edges)
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Result<Self, TreeError> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Tree::new(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.n
    }

    /// Hop distance from `src` to every vertex; `None` for unreachable ones
    /// (only possible while validating).
    fn bfs_distances(&self, src: Vertex) -> Vec<Option<u32>> {
        self.multi_source_distances(std::iter::once(src))
    }

    /// Hop distances from the nearest vertex of `sources`. Vertices are
    /// `None` only when `sources` is empty.
    pub fn multi_source_distances<I>(&self, sources: I) -> Vec<Option<u32>>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distances_from(&self, src: Vertex) -> Vec<u32> {
        self.bfs_distances(src)
            .into_iter()
            .map(|d| d.expect("tree is connected"))
            .collect()
    }

    pub fn distance(&self, a: Vertex, b: Vertex) -> u32 {
        self.distances_from(a)[b]
    }

    pub fn eccentricity(&self, v: Vertex) -> u32 {
        self.distances_from(v).into_iter().max().unwrap_or(0)
    }

    pub fn metric_summary(&self) -> MetricSummary {
        let ecc: Vec<u32> = (0..self.n).map(|v| self.eccentricity(v)).collect();
        let radius = ecc.iter().copied().min().unwrap_or(0);
        let diameter = ecc.iter().copied().max().unwrap_or(0);
        let center = (0..self.n).filter(|&v| ecc[v] == radius).collect();
        MetricSummary {
            ecc,
            radius,
            diameter,
            center,
        }
    }

    pub fn root_at(&self, root: Vertex) -> Result<RootedTree<'_>, TreeError> {
        if root >= self.n {
            return Err(TreeError::VertexOutOfRange {
                vertex: root,
                n: self.n,
            });
        }
        Ok(RootedTree::at(self, root))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSummary {
    pub ecc: Vec<u32>,
    pub radius: u32,
    pub diameter: u32,
    /// One vertex, or two adjacent ones; ascending.
    pub center: Vec<Vertex>,
}

/// A tree together with a root and the arrays derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree<'t> {
    base: &'t Tree,
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    depth: Vec<u32>,
    height: Vec<u32>,
    preorder: Vec<Vertex>,
}

impl<'t> RootedTree<'t> {
    /// Panics if `root` is out of range; see [`Tree::root_at`].
    pub fn at(base: &'t Tree, root: Vertex) -> Self {
        let n = base.len();
        assert!(root < n, "root {root} out of range for {n} vertices");
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0u32; n];
        let mut preorder = Vec::with_capacity(n);

        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &w in base.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    depth[w] = depth[v] + 1;
                    children[v].push(w);
                }
            }
            // Neighbors are sorted, so children are too; push reversed to
            // visit the smallest child first.
            stack.extend(children[v].iter().rev().copied());
        }

        let mut height = vec![0u32; n];
        for &v in preorder.iter().rev() {
            height[v] = children[v]
                .iter()
                .map(|&c| height[c] + 1)
                .max()
                .unwrap_or(0);
        }

        RootedTree {
            base,
            root,
            parent,
            children,
            depth,
            height,
            preorder,
        }
    }

    pub fn tree(&self) -> &'t Tree {
        self.base
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn depth(&self, v: Vertex) -> u32 {
        self.depth[v]
    }

    pub fn height(&self, v: Vertex) -> u32 {
        self.height[v]
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.children[v].is_empty()
    }

    pub fn preorder(&self) -> &[Vertex] {
        &self.preorder
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn heights(&self) -> &[u32] {
        &self.height
    }

    /// AHU code of the whole rooted tree. Codes drawn from the same
    /// `interner` are equal iff the rooted trees are isomorphic.
    pub fn canonical_code(&self, interner: &mut HashMap<Vec<usize>, usize>) -> usize {
        let mut code = vec![0usize; self.len()];
        for &v in self.preorder.iter().rev() {
            let mut key: Vec<usize> = self.children[v].iter().map(|&c| code[c]).collect();
            key.sort_unstable();
            let next = interner.len();
            code[v] = *interner.entry(key).or_insert(next);
        }
        code[self.root]
    }
}

/// Unrooted isomorphism test: compare AHU codes of both trees rooted at
/// their centers (each central vertex of `b` is tried).
pub fn is_isomorphic(a: &Tree, b: &Tree) -> bool {
    if a.len() != b.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.len()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.len()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let ca = a.metric_summary().center;
    let cb = b.metric_summary().center;
    if ca.len() != cb.len() {
        return false;
    }
    let mut interner = HashMap::new();
    let code_a = RootedTree::at(a, ca[0]).canonical_code(&mut interner);
    cb.iter()
        .any(|&c| RootedTree::at(b, c).canonical_code(&mut interner) == code_a)
}

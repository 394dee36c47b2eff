//! Finite graph-theoretic trees.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate vertex {id}")]
    DuplicateVertex { id: String },
    #[error("unknown vertex {id} in edge list")]
    UnknownVertex { id: String },
    #[error("loop at vertex {id}")]
    Loop { id: String },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: String, v: String },
    #[error("graph is not connected: no path from {u} to {v}")]
    NotConnected { u: String, v: String },
    #[error("graph contains a cycle")]
    Cyclic,
    #[error("tree must have at least one vertex")]
    Empty,
}

/// A connected acyclic simple graph. Vertices carry string ids; edges are
/// unordered pairs, kept in input order.
#[derive(Clone)]
pub struct Tree {
    vertices: Vec<String>,
    vindex: BTreeMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>, // (neighbor, edge index)
    /// Per edge, the vertex set of the component of T - e containing each
    /// endpoint: `sides[e].0[v]` iff v is on the first endpoint's side.
    sides: Vec<(Vec<bool>, Vec<bool>)>,
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tree")
            .field("vertices", &self.vertices)
            .field(
                "edges",
                &self
                    .edges
                    .iter()
                    .map(|&(u, v)| (&self.vertices[u], &self.vertices[v]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Tree {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Self, TreeError> {
        if vertices.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut vindex = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(TreeError::DuplicateVertex { id: v.clone() });
            }
        }
        let n = vertices.len();
        let mut eidx: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (u, v) in &edges {
            let ui = *vindex
                .get(u)
                .ok_or_else(|| TreeError::UnknownVertex { id: u.clone() })?;
            let vi = *vindex
                .get(v)
                .ok_or_else(|| TreeError::UnknownVertex { id: v.clone() })?;
            if ui == vi {
                return Err(TreeError::Loop { id: u.clone() });
            }
            if eidx
                .iter()
                .any(|&(a, b)| (a, b) == (ui, vi) || (a, b) == (vi, ui))
            {
                return Err(TreeError::DuplicateEdge {
                    u: u.clone(),
                    v: v.clone(),
                });
            }
            let e = eidx.len();
            eidx.push((ui, vi));
            adj[ui].push((vi, e));
            adj[vi].push((ui, e));
        }
        if eidx.len() + 1 != n {
            // A connected graph on n vertices with != n-1 edges is cyclic
            // or disconnected; distinguish below for the error message.
            if eidx.len() + 1 > n {
                return Err(TreeError::Cyclic);
            }
        }
        // Connectivity check by BFS from vertex 0.
        let mut seen = vec![false; n];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(x) = queue.pop() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(TreeError::NotConnected {
                u: vertices[0].clone(),
                v: vertices[v].clone(),
            });
        }
        if eidx.len() + 1 != n {
            return Err(TreeError::Cyclic);
        }

        let mut sides = Vec::with_capacity(eidx.len());
        for (e, &(u, v)) in eidx.iter().enumerate() {
            let side_u = component_without(&adj, n, u, e);
            let side_v = component_without(&adj, n, v, e);
            sides.push((side_u, side_v));
        }
        Ok(Tree {
            vertices,
            vindex,
            edges: eidx,
            adj,
            sides,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vindex.get(id).copied()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(y, _)| y == v).map(|&(_, e)| e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[v].iter().copied()
    }

    /// Vertex set of the component of T - e containing `endpoint`, which
    /// must be one of the edge's endpoints.
    pub fn side(&self, edge: usize, endpoint: usize) -> &[bool] {
        let (u, v) = self.edges[edge];
        if endpoint == u {
            &self.sides[edge].0
        } else {
            assert_eq!(endpoint, v, "endpoint does not belong to edge");
            &self.sides[edge].1
        }
    }

    /// Natural order on oriented edges: (x,y) ≤ (v,w) iff they are equal or
    /// the side of x in T - xy is contained in the side of v in T - vw.
    pub fn oriented_edge_le(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        if a == b {
            return true;
        }
        let ea = self
            .edge_between(a.0, a.1)
            .expect("oriented edge not in tree");
        let eb = self
            .edge_between(b.0, b.1)
            .expect("oriented edge not in tree");
        if ea == eb {
            return false; // the two orientations of one edge are incomparable
        }
        let sa = self.side(ea, a.0);
        let sb = self.side(eb, b.0);
        sa.iter().zip(sb).all(|(&x, &y)| !x || y)
    }

    /// Vertex sequence of the unique path from a to b, inclusive.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(a);
        prev[a] = a;
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, _) in &self.adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.path(a, b).len() - 1
    }
}

fn component_without(
    adj: &[Vec<(usize, usize)>],
    n: usize,
    start: usize,
    skip_edge: usize,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = vec![start];
    seen[start] = true;
    while let Some(x) = queue.pop() {
        for &(y, e) in &adj[x] {
            if e != skip_edge && !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    seen
}

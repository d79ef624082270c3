//! Simple undirected graphs for the rate-1/2 and rate-1/3 codes and the
//! extremal searches. Vertex count is capped at 64 (bitmask adjacency).

use crate::error::{Error, Result};
use crate::matrix::support_elems;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    v: usize,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(v: usize) -> Result<Self> {
        if v > 64 {
            return Err(Error::TooManyRows(v));
        }
        Ok(Graph { v, adj: vec![0; v], edges: Vec::new() })
    }

    pub fn complete(v: usize) -> Result<Self> {
        let mut g = Graph::new(v)?;
        for a in 0..v {
            for b in a + 1..v {
                g.add_edge(a, b)?;
            }
        }
        Ok(g)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, a: usize) -> u64 {
        self.adj[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones() as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.v && b < self.v && self.adj[a] >> b & 1 == 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.v || b >= self.v {
            return Err(Error::BadParams(format!("edge ({a},{b}) outside {} vertices", self.v)));
        }
        if a == b {
            return Err(Error::BadParams(format!("loop at vertex {a}")));
        }
        if self.has_edge(a, b) {
            return Err(Error::BadParams(format!("duplicate edge ({a},{b})")));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        self.edges.push((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn remove_last_edge(&mut self) {
        if let Some((a, b)) = self.edges.pop() {
            self.adj[a] &= !(1 << b);
            self.adj[b] &= !(1 << a);
        }
    }

    /// Would adding (a,b) close a triangle?
    pub fn creates_triangle(&self, a: usize, b: usize) -> bool {
        self.adj[a] & self.adj[b] != 0
    }

    /// Would adding (a,b) close a 4-cycle? True iff some edge (x,y) has
    /// x adjacent to a and y adjacent to b (a path a-x-y-b).
    pub fn creates_square(&self, a: usize, b: usize) -> bool {
        let nb = self.adj[b] & !(1 << a);
        for x in support_elems(self.adj[a] & !(1 << b)) {
            if self.adj[x] & nb != 0 {
                return true;
            }
        }
        false
    }

    pub fn is_triangle_and_square_free(&self) -> bool {
        for &(a, b) in &self.edges {
            if self.adj[a] & self.adj[b] != 0 {
                return false;
            }
        }
        // any pair of vertices with two common neighbors closes a 4-cycle
        for a in 0..self.v {
            for b in a + 1..self.v {
                if (self.adj[a] & self.adj[b]).count_ones() >= 2 {
                    return false;
                }
            }
        }
        true
    }

    /// All triangles, each as an ascending vertex triple.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for c in support_elems(self.adj[a] & self.adj[b]) {
                if c > b {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_triangle(&self, t: &[usize; 3]) -> bool {
        self.has_edge(t[0], t[1]) && self.has_edge(t[0], t[2]) && self.has_edge(t[1], t[2])
    }

    /// Connected components as vertex lists (isolated vertices included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.v];
        let mut out = Vec::new();
        for start in 0..self.v {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in support_elems(self.adj[x]) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

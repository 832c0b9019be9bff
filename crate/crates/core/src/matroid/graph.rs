use std::collections::HashSet;

use crate::error::{Error, Result};

/// Finite multigraph with oriented edges. The edge order is the ground-set
/// order of the cycle matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    distinguished: Option<usize>,
}

/// One simple cycle: edge indices in traversal order, each with `+1` when the
/// edge is traversed tail to head and `-1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<(usize, i8)>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &(e, _)| m | 1 << e)
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.iter().any(|&(f, _)| f == e)
    }

    pub fn sign_of(&self, e: usize) -> Option<i8> {
        self.edges.iter().find(|&&(f, _)| f == e).map(|&(_, s)| s)
    }
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let labels = (1..=edges.len()).map(|i| format!("e{i}")).collect();
        Self::with_labels(vertex_count, edges, labels)
    }

    pub fn with_labels(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Input("graph needs at least one vertex".into()));
        }
        if labels.len() != edges.len() {
            return Err(Error::Input("one label per edge required".into()));
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::Input(format!(
                    "edge {i} ({a},{b}) has an endpoint outside 0..{vertex_count}"
                )));
            }
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
            labels,
            distinguished: None,
        })
    }

    pub fn with_distinguished(mut self, e: usize) -> Result<Self> {
        if e >= self.edges.len() {
            return Err(Error::Input(format!("no edge {e}")));
        }
        self.distinguished = Some(e);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    /// Component id per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut ids = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        let mut out = vec![0; self.vertex_count];
        for v in 0..self.vertex_count {
            let r = find(&mut parent, v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Every simple cycle (loops and parallel pairs included), each once.
    pub fn simple_cycles(&self) -> Vec<Cycle> {
        let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                continue;
            }
            adj[a].push((b, e, 1));
            adj[b].push((a, e, -1));
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                seen.insert(1u64 << e);
                out.push(Cycle {
                    edges: vec![(e, 1)],
                });
            }
        }
        let mut on_path = vec![false; self.vertex_count];
        let mut path: Vec<(usize, i8)> = Vec::new();
        for s in 0..self.vertex_count {
            on_path[s] = true;
            self.cycle_dfs(s, s, &adj, &mut on_path, &mut path, &mut seen, &mut out);
            on_path[s] = false;
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: usize,
        v: usize,
        adj: &[Vec<(usize, usize, i8)>],
        on_path: &mut [bool],
        path: &mut Vec<(usize, i8)>,
        seen: &mut HashSet<u64>,
        out: &mut Vec<Cycle>,
    ) {
        for &(w, e, s) in &adj[v] {
            if path.iter().any(|&(f, _)| f == e) {
                continue;
            }
            if w == start {
                path.push((e, s));
                let mask = path.iter().fold(0u64, |m, &(f, _)| m | 1 << f);
                if seen.insert(mask) {
                    out.push(Cycle {
                        edges: path.clone(),
                    });
                }
                path.pop();
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push((e, s));
                self.cycle_dfs(start, w, adj, on_path, path, seen, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input("cycle needs at least 2 vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n.max(1), (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::new(n, edges)
    }

    /// `K_{m,n}` with parts `0..m` and `m..m+n`, edges ordered by the first
    /// part.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..n {
                edges.push((i, m + j));
            }
        }
        Self::new(m + n, edges)
    }

    /// Parses the text format: header `sepkit/1`, then `V E`, then `E` lines
    /// `tail head [flag]`. Vertices are 0-based; a third token marks the
    /// distinguished edge. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        match lines.next() {
            Some(crate::io::FORMAT_HEADER) => {}
            other => {
                return Err(Error::Input(format!(
                    "expected header {:?}, found {:?}",
                    crate::io::FORMAT_HEADER,
                    other
                )))
            }
        }
        let head = lines
            .next()
            .ok_or_else(|| Error::Input("missing `V E` line".into()))?;
        let nums: Vec<usize> = head
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Input(format!("bad `V E` line: {e}")))?;
        let [v, e] = nums[..] else {
            return Err(Error::Input("`V E` line needs two integers".into()));
        };
        let mut edges = Vec::with_capacity(e);
        let mut dist = None;
        for i in 0..e {
            let line = lines
                .next()
                .ok_or_else(|| Error::Input(format!("expected {e} edges, found {i}")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 || toks.len() > 3 {
                return Err(Error::Input(format!("bad edge line {line:?}")));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|err| Error::Input(format!("bad vertex {t:?}: {err}")))
            };
            edges.push((parse(toks[0])?, parse(toks[1])?));
            if toks.len() == 3 {
                if dist.is_some() {
                    return Err(Error::Input("more than one distinguished edge".into()));
                }
                dist = Some(i);
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Input(format!("trailing content {extra:?}")));
        }
        let g = Self::new(v, edges)?;
        match dist {
            Some(d) => g.with_distinguished(d),
            None => Ok(g),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{}\n{} {}\n",
            crate::io::FORMAT_HEADER,
            self.vertex_count,
            self.edges.len()
        );
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if self.distinguished == Some(i) {
                s.push_str(&format!("{a} {b} *\n"));
            } else {
                s.push_str(&format!("{a} {b}\n"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_of_k4() {
        let g = Graph::complete(4).unwrap();
        let cycles = g.simple_cycles();
        // 4 triangles and 3 squares
        assert_eq!(cycles.len(), 7);
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
    }

    #[test]
    fn parallel_and_loop_cycles() {
        let g = Graph::new(2, vec![(0, 1), (0, 1), (1, 1)]).unwrap();
        let mut lens: Vec<usize> = g.simple_cycles().iter().map(Cycle::len).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 2]);
    }

    #[test]
    fn cycle_signs_cancel() {
        let g = Graph::complete(4).unwrap();
        for c in g.simple_cycles() {
            let mut acc = [0i64; 4];
            for &(e, s) in &c.edges {
                let (a, b) = g.edge(e);
                acc[a] += s as i64;
                acc[b] -= s as i64;
            }
            assert_eq!(acc, [0; 4]);
        }
    }

    #[test]
    fn text_roundtrip() {
        let g = Graph::cycle(4).unwrap().with_distinguished(2).unwrap();
        let back = Graph::parse(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert!(Graph::parse("3 1\n0 1\n").is_err());
        assert!(Graph::parse("sepkit/1\n2 1\n0 5\n").is_err());
    }

    #[test]
    fn components() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 1, 1]);
        assert!(!g.is_connected());
    }
}

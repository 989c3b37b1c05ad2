//! One-step influence spread on a directed graph whose edges are base arms.

use std::path::Path;

use crate::error::{Error, Result};

/// Directed graph with edge probabilities. Edge `i` is base arm `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    probabilities: Vec<f64>,
    out_edges: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut out_edges = vec![Vec::new(); nodes];
        let mut pairs = Vec::with_capacity(edges.len());
        let mut probabilities = Vec::with_capacity(edges.len());
        for (i, &(u, v, p)) in edges.iter().enumerate() {
            if u >= nodes || v >= nodes {
                return Err(Error::invalid(format!("edge {i} leaves the node range")));
            }
            if u == v {
                return Err(Error::invalid(format!("edge {i} is a self-loop")));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("edge {i} probability {p} outside [0, 1]")));
            }
            out_edges[u].push(i);
            pairs.push((u, v));
            probabilities.push(p);
        }
        Ok(Graph {
            nodes,
            edges: pairs,
            probabilities,
            out_edges,
        })
    }

    /// Parse an edge list with one `u v p` triple per line. Blank lines and
    /// `#` comments are skipped; the node count is the largest index plus one.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut edges = Vec::new();
        let mut nodes = 0;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                path: path.to_path_buf(),
                line: no + 1,
                msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected `u v p`, found {} fields", fields.len())));
            }
            let u: usize = fields[0].parse().map_err(|_| err(format!("bad node `{}`", fields[0])))?;
            let v: usize = fields[1].parse().map_err(|_| err(format!("bad node `{}`", fields[1])))?;
            let p: f64 = fields[2].parse().map_err(|_| err(format!("bad probability `{}`", fields[2])))?;
            nodes = nodes.max(u + 1).max(v + 1);
            edges.push((u, v, p));
        }
        Graph::new(nodes, edges).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out_edges[node]
    }

    /// Base arms (edges) observed when seeding `seeds`, sorted.
    pub fn action_arms(&self, seeds: &[usize]) -> Vec<usize> {
        let mut arms: Vec<usize> = seeds
            .iter()
            .flat_map(|&s| self.out_edges[s].iter().copied())
            .collect();
        arms.sort_unstable();
        arms.dedup();
        arms
    }

    /// Largest number of edges a seed set of size `budget` can expose.
    pub fn max_action_size(&self, budget: usize) -> usize {
        let mut deg: Vec<usize> = self.out_edges.iter().map(Vec::len).collect();
        deg.sort_unstable_by(|a, b| b.cmp(a));
        deg.iter().take(budget).sum()
    }
}

/// Expected number of active nodes after one diffusion step from `seeds`:
/// `|S| + Σ_{v∉S} (1 − Π_{(u,v)∈E, u∈S} (1 − p(u,v)))`. Seeds count as active.
pub fn influence_expected_reward(graph: &Graph, probabilities: &[f64], seeds: &[usize]) -> f64 {
    let mut is_seed = vec![false; graph.nodes()];
    for &s in seeds {
        is_seed[s] = true;
    }
    let mut miss = vec![1.0; graph.nodes()];
    for &s in seeds {
        for &e in graph.out_edges(s) {
            let v = graph.edges()[e].1;
            if !is_seed[v] {
                miss[v] *= 1.0 - probabilities[e];
            }
        }
    }
    let seeded = is_seed.iter().filter(|&&b| b).count() as f64;
    seeded
        + miss
            .iter()
            .zip(&is_seed)
            .filter(|(_, &s)| !s)
            .map(|(m, _)| 1.0 - m)
            .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let g = Graph::new(3, vec![]).unwrap();
        assert_eq!(influence_expected_reward(&g, &[], &[0, 2]), 2.0);

        let g = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(influence_expected_reward(&g, &[1.0], &[0]), 2.0);

        let g = Graph::new(4, vec![(0, 1, 0.5), (0, 2, 0.5), (0, 3, 0.5)]).unwrap();
        assert_eq!(influence_expected_reward(&g, &[0.5; 3], &[0]), 2.5);
    }

    #[test]
    fn parallel_sources_combine() {
        // Two seeds reaching node 2: 1 − (1 − 0.5)(1 − 0.5) = 0.75.
        let g = Graph::new(3, vec![(0, 2, 0.5), (1, 2, 0.5)]).unwrap();
        assert_eq!(influence_expected_reward(&g, &[0.5, 0.5], &[0, 1]), 2.75);
    }

    #[test]
    fn parse_edge_list() {
        let g = Graph::parse("# star\n0 1 0.5\n0 2 0.25\n\n2 3 1\n", Path::new("g.txt")).unwrap();
        assert_eq!(g.nodes(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.action_arms(&[0]), vec![0, 1]);
        assert_eq!(g.max_action_size(1), 2);
        assert!(Graph::parse("0 1\n", Path::new("g.txt")).is_err());
        assert!(Graph::parse("0 1 1.5\n", Path::new("g.txt")).is_err());
    }
}

//! Migration topologies: directed graphs over island indices.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// A directed graph with no self-loops and no duplicate edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    tag: String,
    seed: Option<u64>,
}

impl Topology {
    /// `n` nodes, no edges.
    pub fn custom(n: usize) -> Self {
        Topology {
            n,
            edges: BTreeSet::new(),
            tag: "custom".into(),
            seed: None,
        }
    }

    fn tagged(n: usize, tag: &str, seed: Option<u64>) -> Self {
        Topology {
            n,
            edges: BTreeSet::new(),
            tag: tag.into(),
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Generator that produced the graph.
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.edges.contains(&(src, dst))
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds `src -> dst`. Re-adding an existing edge does nothing.
    pub fn add_edge(&mut self, src: usize, dst: usize) -> Result<()> {
        if src >= self.n || dst >= self.n {
            return Err(Error::Topology(format!(
                "edge ({src}, {dst}) out of range for {} nodes",
                self.n
            )));
        }
        if src == dst {
            return Err(Error::Topology(format!("self-loop on node {src}")));
        }
        self.edges.insert((src, dst));
        Ok(())
    }

    fn link(&mut self, a: usize, b: usize) {
        if a != b {
            self.edges.insert((a, b));
            self.edges.insert((b, a));
        }
    }

    /// Sorted destinations of edges leaving `node`.
    pub fn neighbors_out(&self, node: usize) -> Result<Vec<usize>> {
        self.check_node(node)?;
        Ok(self
            .edges
            .range((node, 0)..(node + 1, 0))
            .map(|&(_, d)| d)
            .collect())
    }

    /// Sorted sources of edges entering `node`.
    pub fn neighbors_in(&self, node: usize) -> Result<Vec<usize>> {
        self.check_node(node)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(_, d)| d == node)
            .map(|&(s, _)| s)
            .collect())
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.range((node, 0)..(node + 1, 0)).count()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(_, d)| d == node).count()
    }

    /// `true` when every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(a, b)| self.edges.contains(&(b, a)))
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.n {
            return Err(Error::Topology(format!(
                "node {node} out of range for {} nodes",
                self.n
            )));
        }
        Ok(())
    }

    /// Node count on the first line, then one `src dst` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (a, b) in &self.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let bad = |m: String| Error::Topology(m);
        let n: usize = lines
            .next()
            .ok_or_else(|| bad("empty edge list".into()))?
            .parse()
            .map_err(|e| bad(format!("node count: {e}")))?;
        let mut t = Topology::custom(n);
        for l in lines {
            let mut it = l.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => t.add_edge(a, b)?,
                _ => return Err(bad(format!("malformed edge line `{l}`"))),
            }
        }
        Ok(t)
    }
}

/// Isolated nodes.
pub fn unconnected(n: usize) -> Topology {
    Topology::tagged(n, "unconnected", None)
}

/// Bidirectional cycle.
pub fn ring(n: usize) -> Topology {
    let mut t = Topology::tagged(n, "ring", None);
    for i in 0..n {
        t.link(i, (i + 1) % n);
    }
    t
}

pub fn fully_connected(n: usize) -> Topology {
    let mut t = Topology::tagged(n, "fully_connected", None);
    for a in 0..n {
        for b in a + 1..n {
            t.link(a, b);
        }
    }
    t
}

/// Nodes whose indices differ in exactly one bit are linked. For `n` not a
/// power of two this is the hypercube restricted to the first `n` nodes.
pub fn hypercube(n: usize) -> Topology {
    let mut t = Topology::tagged(n, "hypercube", None);
    for a in 0..n {
        let mut bit = 1;
        while bit < n {
            let b = a ^ bit;
            if b < n {
                t.link(a, b);
            }
            bit <<= 1;
        }
    }
    t
}

/// Wheel rim: node 0 is linked to every other node, and nodes `1..n` form
/// a bidirectional ring.
pub fn rim(n: usize) -> Topology {
    let mut t = Topology::tagged(n, "rim", None);
    for i in 1..n {
        t.link(0, i);
        let next = if i + 1 < n { i + 1 } else { 1 };
        t.link(i, next);
    }
    t
}

/// Preferential attachment: a fully connected core of `m + 1` nodes, then
/// each new node links to `m` distinct existing nodes drawn with
/// probability proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Topology> {
    if m == 0 || m >= n {
        return Err(Error::Topology(format!(
            "barabasi_albert needs 1 <= m < n, got m={m}, n={n}"
        )));
    }
    let mut t = Topology::tagged(n, "barabasi_albert", Some(seed));
    let mut degree = vec![0usize; n];
    for a in 0..=m {
        for b in a + 1..=m {
            t.link(a, b);
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut rng = Rng::new(seed);
    for new in m + 1..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        while chosen.len() < m {
            let total: usize = (0..new).filter(|i| !chosen.contains(i)).map(|i| degree[i]).sum();
            let mut ticket = rng.below(total);
            for i in (0..new).filter(|i| !chosen.contains(i)) {
                if ticket < degree[i] {
                    chosen.push(i);
                    break;
                }
                ticket -= degree[i];
            }
        }
        for &target in &chosen {
            t.link(new, target);
            degree[new] += 1;
            degree[target] += 1;
        }
    }
    Ok(t)
}

/// Ring lattice with `k/2` neighbours per side; the far end of each lattice
/// edge is rewired with probability `beta` to a uniformly chosen node that
/// is neither the near end nor already linked to it.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Topology> {
    if k < 2 || k % 2 != 0 || n <= k {
        return Err(Error::Topology(format!(
            "watts_strogatz needs even k >= 2 and n > k, got n={n}, k={k}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Topology(format!("beta {beta} not in [0, 1]")));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in 1..=k / 2 {
            let b = (i + j) % n;
            adj[i].insert(b);
            adj[b].insert(i);
        }
    }
    let mut rng = Rng::new(seed);
    for j in 1..=k / 2 {
        for i in 0..n {
            let b = (i + j) % n;
            if !rng.chance(beta) || !adj[i].contains(&b) {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|&c| c != i && !adj[i].contains(&c)).collect();
            if free.is_empty() {
                continue;
            }
            let c = free[rng.below(free.len())];
            adj[i].remove(&b);
            adj[b].remove(&i);
            adj[i].insert(c);
            adj[c].insert(i);
        }
    }
    let mut t = Topology::tagged(n, "watts_strogatz", Some(seed));
    for (a, nbrs) in adj.iter().enumerate() {
        for &b in nbrs {
            t.link(a, b);
        }
    }
    Ok(t)
}

/// G(n, p): each unordered pair linked independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Topology> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Topology(format!("p {p} not in [0, 1]")));
    }
    let mut t = Topology::tagged(n, "erdos_renyi", Some(seed));
    let mut rng = Rng::new(seed);
    for a in 0..n {
        for b in a + 1..n {
            if rng.chance(p) {
                t.link(a, b);
            }
        }
    }
    Ok(t)
}

/// Topology recipe, materialized once the island count is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Unconnected,
    Ring,
    FullyConnected,
    Hypercube,
    Rim,
    BarabasiAlbert {
        m: usize,
        #[serde(default)]
        seed: u64,
    },
    WattsStrogatz {
        k: usize,
        beta: f64,
        #[serde(default)]
        seed: u64,
    },
    ErdosRenyi {
        p: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Explicit edges; `nodes` must equal the island count.
    Custom {
        nodes: usize,
        edges: Vec<(usize, usize)>,
    },
}

pub const REGISTRY: &[(&str, &str)] = &[
    ("unconnected", "(none)"),
    ("ring", "(none)"),
    ("fully_connected", "(none)"),
    ("hypercube", "(none)"),
    ("rim", "(none)"),
    ("barabasi_albert", "m, seed=0"),
    ("watts_strogatz", "k, beta, seed=0"),
    ("erdos_renyi", "p, seed=0"),
    ("custom", "nodes, edges"),
];

impl TopologySpec {
    pub fn name(&self) -> &'static str {
        match self {
            TopologySpec::Unconnected => "unconnected",
            TopologySpec::Ring => "ring",
            TopologySpec::FullyConnected => "fully_connected",
            TopologySpec::Hypercube => "hypercube",
            TopologySpec::Rim => "rim",
            TopologySpec::BarabasiAlbert { .. } => "barabasi_albert",
            TopologySpec::WattsStrogatz { .. } => "watts_strogatz",
            TopologySpec::ErdosRenyi { .. } => "erdos_renyi",
            TopologySpec::Custom { .. } => "custom",
        }
    }

    /// Builds the graph over `n` nodes.
    pub fn build(&self, n: usize) -> Result<Topology> {
        Ok(match self {
            TopologySpec::Unconnected => unconnected(n),
            TopologySpec::Ring => ring(n),
            TopologySpec::FullyConnected => fully_connected(n),
            TopologySpec::Hypercube => hypercube(n),
            TopologySpec::Rim => rim(n),
            TopologySpec::BarabasiAlbert { m, seed } => barabasi_albert(n, *m, *seed)?,
            TopologySpec::WattsStrogatz { k, beta, seed } => watts_strogatz(n, *k, *beta, *seed)?,
            TopologySpec::ErdosRenyi { p, seed } => erdos_renyi(n, *p, *seed)?,
            TopologySpec::Custom { nodes, edges } => {
                if *nodes != n {
                    return Err(Error::Topology(format!(
                        "custom topology has {nodes} nodes but there are {n} islands"
                    )));
                }
                let mut t = Topology::custom(n);
                for &(a, b) in edges {
                    t.add_edge(a, b)?;
                }
                t
            }
        })
    }
}

//! Network graphs of cache-routers with link costs, a custodian node, and
//! client weights.
//!
//! The custodian is modeled as one extra node appended after the regular
//! cache-routers: it permanently holds every content, never evicts, and is
//! reachable through a single attachment link whose cost is the tunable
//! "custodian cost". `node_count` counts only the regular cache-routers;
//! graph arrays have one extra slot for the custodian.
//!
//! Link costs are normalized: a link's cost is `reference_bandwidth /
//! bandwidth`, so a link at the reference bandwidth costs 1.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type ContentId = usize;

/// Reference bandwidth in Mbps; a link this fast has cost 1.
pub const DEFAULT_REFERENCE_BANDWIDTH: f64 = 20_000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    node_count: usize,
    /// Sorted neighbor lists, one per node, custodian row last.
    adjacency: Vec<Vec<NodeId>>,
    /// Parallel to `adjacency`: cost of the link to each neighbor.
    link_cost: Vec<Vec<f64>>,
    /// Parallel to `adjacency`: bandwidth of the link (kept exact for
    /// serialization round-trips).
    link_bandwidth: Vec<Vec<f64>>,
    custodian: NodeId,
    custodian_link_cost: f64,
    /// Request-rate multiplier per regular node; 0 marks a non-client.
    client_weights: Vec<f64>,
    reference_bandwidth: f64,
    /// Structural leaf set recorded by the builders (chain end, deepest
    /// tree level, bottom layer). Loaded topologies leave this unset and
    /// fall back to hop distance.
    edge_hint: Option<Vec<NodeId>>,
}

impl Topology {
    /// Builds a topology from undirected links with explicit costs. The
    /// custodian is appended as node `node_count` and attached to
    /// `custodian_attach`. All regular nodes start as clients with weight 1.
    pub fn from_links(
        node_count: usize,
        links: &[(NodeId, NodeId, f64)],
        custodian_attach: NodeId,
        custodian_cost: f64,
    ) -> Result<Topology> {
        if node_count == 0 {
            return Err(Error::InvalidParameter("node count must be at least 1".into()));
        }
        if custodian_attach >= node_count {
            return Err(Error::InvalidTopology(format!(
                "custodian attachment node {custodian_attach} out of range"
            )));
        }
        if !(custodian_cost >= 0.0) || !custodian_cost.is_finite() {
            return Err(Error::InvalidParameter(
                "custodian cost must be finite and non-negative".into(),
            ));
        }
        let custodian = node_count;
        let total = node_count + 1;
        let mut adjacency = vec![Vec::new(); total];
        let mut link_cost = vec![Vec::new(); total];
        let mut link_bandwidth = vec![Vec::new(); total];
        let reference = DEFAULT_REFERENCE_BANDWIDTH;

        let mut add = |a: NodeId, b: NodeId, cost: f64, bw: f64| {
            adjacency[a].push(b);
            link_cost[a].push(cost);
            link_bandwidth[a].push(bw);
        };
        for &(a, b, cost) in links {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidTopology(format!("link ({a}, {b}) references unknown node")));
            }
            if a == b {
                return Err(Error::InvalidTopology(format!("self-link at node {a}")));
            }
            if !(cost > 0.0) || !cost.is_finite() {
                return Err(Error::InvalidTopology(format!(
                    "link ({a}, {b}) has non-positive cost"
                )));
            }
            let bw = reference / cost;
            add(a, b, cost, bw);
            add(b, a, cost, bw);
        }
        // Custodian attachment; a zero-cost custodian link is allowed so the
        // custodian-cost axis can be swept down to 0.
        let cust_bw = if custodian_cost > 0.0 { reference / custodian_cost } else { f64::INFINITY };
        add(custodian_attach, custodian, custodian_cost, cust_bw);
        add(custodian, custodian_attach, custodian_cost, cust_bw);

        let topo = Topology {
            node_count,
            adjacency,
            link_cost,
            link_bandwidth,
            custodian,
            custodian_link_cost: custodian_cost,
            client_weights: vec![1.0; node_count],
            reference_bandwidth: reference,
            edge_hint: None,
        };
        topo.normalized_and_validated()
    }

    fn normalized_and_validated(mut self) -> Result<Topology> {
        // Sort each neighbor list by id, carrying costs along, and reject
        // duplicate links.
        for x in 0..self.adjacency.len() {
            let mut entries: Vec<(NodeId, f64, f64)> = self.adjacency[x]
                .iter()
                .zip(&self.link_cost[x])
                .zip(&self.link_bandwidth[x])
                .map(|((&n, &c), &b)| (n, c, b))
                .collect();
            entries.sort_by_key(|e| e.0);
            for w in entries.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidTopology(format!(
                        "duplicate link between {x} and {}",
                        w[0].0
                    )));
                }
            }
            self.adjacency[x] = entries.iter().map(|e| e.0).collect();
            self.link_cost[x] = entries.iter().map(|e| e.1).collect();
            self.link_bandwidth[x] = entries.iter().map(|e| e.2).collect();
        }
        // Connectivity over the full graph, custodian included.
        let reached = self.reachable_from(0);
        if reached != self.adjacency.len() {
            return Err(Error::InvalidTopology(format!(
                "graph is disconnected: reached {reached} of {} nodes",
                self.adjacency.len()
            )));
        }
        Ok(self)
    }

    fn reachable_from(&self, start: NodeId) -> usize {
        let mut seen = vec![false; self.adjacency.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(x) = stack.pop() {
            count += 1;
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        count
    }

    /// Number of regular cache-router nodes (custodian excluded).
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Total graph size including the custodian.
    pub fn graph_size(&self) -> usize {
        self.node_count + 1
    }

    pub fn custodian(&self) -> NodeId {
        self.custodian
    }

    /// The permanent holder of a content. A single custodian holds the whole
    /// catalog; multi-custodian replication is out of scope.
    pub fn custodian_for(&self, _content: ContentId) -> NodeId {
        self.custodian
    }

    pub fn custodian_link_cost(&self) -> f64 {
        self.custodian_link_cost
    }

    pub fn is_custodian(&self, node: NodeId) -> bool {
        node == self.custodian
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Cost of the (node, neighbor) link. Panics if the nodes are not
    /// adjacent; forwarding only ever walks existing links.
    pub fn link_cost(&self, node: NodeId, neighbor: NodeId) -> f64 {
        let idx = self.adjacency[node]
            .binary_search(&neighbor)
            .expect("link_cost queried for non-adjacent nodes");
        self.link_cost[node][idx]
    }

    pub fn client_weight(&self, node: NodeId) -> f64 {
        self.client_weights[node]
    }

    /// Nodes allowed to originate requests (weight > 0), ascending.
    pub fn clients(&self) -> Vec<NodeId> {
        (0..self.node_count)
            .filter(|&x| self.client_weights[x] > 0.0)
            .collect()
    }

    /// Replaces the client set; `weights` must cover every regular node and
    /// leave at least one positive entry.
    pub fn set_client_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.node_count {
            return Err(Error::InvalidParameter(format!(
                "expected {} client weights, got {}",
                self.node_count,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter("client weights must be finite and >= 0".into()));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::InvalidParameter("at least one node must be a client".into()));
        }
        self.client_weights = weights;
        Ok(())
    }

    /// Restricts clients to the given nodes, keeping their current weights
    /// (nodes whose weight was 0 get weight 1).
    pub fn restrict_clients(&mut self, nodes: &[NodeId]) -> Result<()> {
        let mut weights = vec![0.0; self.node_count];
        for &x in nodes {
            if x >= self.node_count {
                return Err(Error::InvalidParameter(format!("client {x} out of range")));
            }
            weights[x] = if self.client_weights[x] > 0.0 { self.client_weights[x] } else { 1.0 };
        }
        self.set_client_weights(weights)
    }

    /// Hop distances (unweighted BFS) from `start` over the full graph.
    pub fn hop_distances_from(&self, start: NodeId) -> Vec<u32> {
        let total = self.graph_size();
        let mut dist = vec![u32::MAX; total];
        let mut queue = alloc::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Largest hop distance between any two nodes, custodian included.
    pub fn hop_diameter(&self) -> u32 {
        (0..self.graph_size())
            .map(|x| {
                self.hop_distances_from(x)
                    .into_iter()
                    .max()
                    .expect("graph is non-empty")
            })
            .max()
            .expect("graph is non-empty")
    }

    /// The "edge" of the network, used for leaf-only request arrival: the
    /// builder-recorded leaf set when available, otherwise the regular
    /// nodes farthest (in hops) from the custodian.
    pub fn edge_nodes(&self) -> Vec<NodeId> {
        if let Some(hint) = &self.edge_hint {
            return hint.clone();
        }
        let dist = self.hop_distances_from(self.custodian);
        let max = (0..self.node_count).map(|x| dist[x]).max().expect("at least one node");
        (0..self.node_count).filter(|&x| dist[x] == max).collect()
    }

    /// Cost-weighted shortest-path distances from `start` to every node.
    pub fn shortest_path_costs(&self, start: NodeId) -> Vec<f64> {
        let total = self.graph_size();
        let mut dist = vec![f64::INFINITY; total];
        let mut done = vec![false; total];
        dist[start] = 0.0;
        for _ in 0..total {
            let mut best: Option<NodeId> = None;
            for x in 0..total {
                if !done[x] && dist[x].is_finite() && best.map_or(true, |b| dist[x] < dist[b]) {
                    best = Some(x);
                }
            }
            let Some(x) = best else { break };
            done[x] = true;
            for (i, &y) in self.adjacency[x].iter().enumerate() {
                let cand = dist[x] + self.link_cost[x][i];
                if cand < dist[y] {
                    dist[y] = cand;
                }
            }
        }
        dist
    }

    /// Static shortest-path-first routing table toward the custodian:
    /// per-node total cost and next hop (ties broken by lowest neighbor id).
    pub fn spf_to_custodian(&self) -> SpfTable {
        let dist = self.shortest_path_costs(self.custodian);
        let mut next = vec![None; self.graph_size()];
        for x in 0..self.graph_size() {
            if x == self.custodian {
                continue;
            }
            let mut best: Option<(NodeId, f64)> = None;
            for (i, &y) in self.adjacency[x].iter().enumerate() {
                let through = self.link_cost[x][i] + dist[y];
                if best.map_or(true, |(_, c)| through < c) {
                    best = Some((y, through));
                }
            }
            next[x] = Some(best.expect("connected graph has a route to the custodian").0);
        }
        SpfTable { dist, next }
    }
}

/// Precomputed shortest paths toward the custodian.
#[derive(Debug, Clone)]
pub struct SpfTable {
    /// Cost to reach the custodian from each node.
    pub dist: Vec<f64>,
    /// First hop toward the custodian; `None` only for the custodian itself.
    pub next: Vec<Option<NodeId>>,
}

/// Path graph of `n` nodes (0 — 1 — … — n−1) with unit link costs; the
/// custodian hangs off node n−1 at `custodian_cost`.
pub fn build_chain(n: usize, custodian_cost: f64) -> Result<Topology> {
    if n == 0 {
        return Err(Error::InvalidParameter("chain needs at least one node".into()));
    }
    let links: Vec<(NodeId, NodeId, f64)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1, 1.0)).collect();
    let mut topo = Topology::from_links(n, &links, n - 1, custodian_cost)?;
    topo.edge_hint = Some(vec![0]);
    Ok(topo)
}

/// Complete binary tree with `2^(depth+1) − 1` nodes in heap order (root 0,
/// children of i at 2i+1 and 2i+2); the custodian hangs above the root.
pub fn build_tree(depth: u32, custodian_cost: f64) -> Result<Topology> {
    let n = (1usize << (depth + 1)) - 1;
    let mut links = Vec::new();
    for i in 0..n {
        for child in [2 * i + 1, 2 * i + 2] {
            if child < n {
                links.push((i, child, 1.0));
            }
        }
    }
    let mut topo = Topology::from_links(n, &links, 0, custodian_cost)?;
    topo.edge_hint = Some((((1 << depth) - 1)..n).collect());
    Ok(topo)
}

/// `levels × width` grid: full bipartite connectivity between adjacent
/// levels plus lateral chains within each level, all at cost 1. Level
/// `levels−1` is the top; the custodian hangs above its first node.
/// Node id = level * width + position.
pub fn build_layered(levels: usize, width: usize, custodian_cost: f64) -> Result<Topology> {
    if levels == 0 || width == 0 {
        return Err(Error::InvalidParameter("layered topology needs levels >= 1 and width >= 1".into()));
    }
    let n = levels * width;
    let id = |level: usize, pos: usize| level * width + pos;
    let mut links = Vec::new();
    for level in 0..levels {
        for pos in 0..width {
            if pos + 1 < width {
                links.push((id(level, pos), id(level, pos + 1), 1.0));
            }
            if level + 1 < levels {
                for up in 0..width {
                    links.push((id(level, pos), id(level + 1, up), 1.0));
                }
            }
        }
    }
    let mut topo = Topology::from_links(n, &links, id(levels - 1, 0), custodian_cost)?;
    topo.edge_hint = Some((0..width).collect());
    Ok(topo)
}

/// Parses the textual topology format with the default reference bandwidth.
///
/// One record per line, `#` starts a comment:
///
/// ```text
/// node <id> [client_weight=<real>]
/// link <id_a> <id_b> <bandwidth_mbps>
/// custodian <node_id> <bandwidth_mbps>
/// ```
///
/// Records may appear in any order; node ids must be dense (0..n−1) and
/// exactly one custodian line is required. Link cost is
/// `reference_bandwidth / bandwidth`.
pub fn parse_topology(text: &str) -> Result<Topology> {
    parse_topology_with_reference(text, DEFAULT_REFERENCE_BANDWIDTH)
}

pub fn parse_topology_with_reference(text: &str, reference_bandwidth: f64) -> Result<Topology> {
    if !(reference_bandwidth > 0.0) {
        return Err(Error::InvalidParameter("reference bandwidth must be positive".into()));
    }
    let mut nodes: Vec<(usize, f64, usize)> = Vec::new(); // (id, weight, line)
    let mut links: Vec<(usize, usize, f64, usize)> = Vec::new(); // (a, b, bandwidth, line)
    let mut custodian: Option<(usize, f64, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let kind = fields.next().expect("non-empty line has a first field");
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        match kind {
            "node" => {
                let id: usize = fields
                    .next()
                    .ok_or_else(|| parse_err("node record needs an id".into()))?
                    .parse()
                    .map_err(|_| parse_err("node id must be an unsigned integer".into()))?;
                let mut weight = 1.0;
                for extra in fields {
                    match extra.split_once('=') {
                        Some(("client_weight", v)) => {
                            weight = v
                                .parse()
                                .map_err(|_| parse_err(format!("bad client_weight '{v}'")))?;
                            if !(weight >= 0.0) {
                                return Err(parse_err("client_weight must be >= 0".into()));
                            }
                        }
                        _ => return Err(parse_err(format!("unknown node attribute '{extra}'"))),
                    }
                }
                nodes.push((id, weight, line_no));
            }
            "link" => {
                let mut num = |what: &str| -> Result<String> {
                    fields
                        .next()
                        .map(String::from)
                        .ok_or_else(|| Error::Parse { line: line_no, message: format!("link record needs {what}") })
                };
                let a: usize = num("two node ids")?.parse().map_err(|_| parse_err("bad node id".into()))?;
                let b: usize = num("two node ids")?.parse().map_err(|_| parse_err("bad node id".into()))?;
                let bw: f64 = num("a bandwidth")?.parse().map_err(|_| parse_err("bad bandwidth".into()))?;
                if !(bw > 0.0) || !bw.is_finite() {
                    return Err(parse_err(format!("bandwidth must be positive, got {bw}")));
                }
                links.push((a, b, bw, line_no));
            }
            "custodian" => {
                if custodian.is_some() {
                    return Err(parse_err("duplicate custodian record".into()));
                }
                let node: usize = fields
                    .next()
                    .ok_or_else(|| parse_err("custodian record needs a node id".into()))?
                    .parse()
                    .map_err(|_| parse_err("bad node id".into()))?;
                let bw: f64 = fields
                    .next()
                    .ok_or_else(|| parse_err("custodian record needs a bandwidth".into()))?
                    .parse()
                    .map_err(|_| parse_err("bad bandwidth".into()))?;
                if !(bw > 0.0) {
                    return Err(parse_err(format!("bandwidth must be positive, got {bw}")));
                }
                custodian = Some((node, bw, line_no));
            }
            other => {
                return Err(parse_err(format!("unknown record '{other}'")));
            }
        }
    }

    if nodes.is_empty() {
        return Err(Error::Parse { line: 0, message: "no node records".into() });
    }
    let node_count = nodes.len();
    let mut weights = vec![f64::NAN; node_count];
    for &(id, weight, line) in &nodes {
        if id >= node_count {
            return Err(Error::Parse {
                line,
                message: format!("node ids must be dense 0..{}, got {id}", node_count - 1),
            });
        }
        if !weights[id].is_nan() {
            return Err(Error::Parse { line, message: format!("duplicate node {id}") });
        }
        weights[id] = weight;
    }
    let (cust_attach, cust_bw, cust_line) =
        custodian.ok_or(Error::Parse { line: 0, message: "missing custodian record".into() })?;
    if cust_attach >= node_count {
        return Err(Error::Parse { line: cust_line, message: format!("unknown node id {cust_attach}") });
    }

    let custodian_id = node_count;
    let total = node_count + 1;
    let mut adjacency = vec![Vec::new(); total];
    let mut link_cost = vec![Vec::new(); total];
    let mut link_bandwidth = vec![Vec::new(); total];
    for &(a, b, bw, line) in &links {
        if a >= node_count || b >= node_count {
            return Err(Error::Parse { line, message: format!("unknown node id {}", a.max(b)) });
        }
        if a == b {
            return Err(Error::Parse { line, message: format!("self-link at node {a}") });
        }
        let cost = reference_bandwidth / bw;
        for (from, to) in [(a, b), (b, a)] {
            adjacency[from].push(to);
            link_cost[from].push(cost);
            link_bandwidth[from].push(bw);
        }
    }
    let cust_cost = reference_bandwidth / cust_bw;
    for (from, to) in [(cust_attach, custodian_id), (custodian_id, cust_attach)] {
        adjacency[from].push(to);
        link_cost[from].push(cust_cost);
        link_bandwidth[from].push(cust_bw);
    }

    let topo = Topology {
        node_count,
        adjacency,
        link_cost,
        link_bandwidth,
        custodian: custodian_id,
        custodian_link_cost: cust_cost,
        client_weights: weights,
        reference_bandwidth,
        edge_hint: None,
    };
    topo.normalized_and_validated()
}

/// Serializes a topology in the canonical line order (nodes, links by
/// ascending ids, custodian last). Parsing the output reproduces the
/// topology exactly: bandwidths are emitted with round-trip-exact formatting.
pub fn serialize_topology(topo: &Topology) -> String {
    let mut out = String::new();
    for x in 0..topo.node_count {
        let w = topo.client_weights[x];
        if w == 1.0 {
            out.push_str(&format!("node {x}\n"));
        } else {
            out.push_str(&format!("node {x} client_weight={w}\n"));
        }
    }
    for x in 0..topo.node_count {
        for (i, &y) in topo.adjacency[x].iter().enumerate() {
            if y > x && y != topo.custodian {
                out.push_str(&format!("link {x} {y} {}\n", topo.link_bandwidth[x][i]));
            }
        }
    }
    let attach = topo.adjacency[topo.custodian][0];
    let bw = topo.link_bandwidth[topo.custodian][0];
    out.push_str(&format!("custodian {attach} {bw}\n"));
    out
}

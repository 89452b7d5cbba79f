//! Simple undirected graphs in compressed adjacency form.
//!
//! Vertices are `0..n`. Every undirected edge is stored once as `(u, v)` with
//! `u < v`, and the edge list is kept in ascending lexicographic order. Each
//! vertex additionally owns a contiguous run of *slots* (one per incident
//! edge, neighbors ascending); a slot is an oriented edge `i -> j`, which is
//! how per-orientation quantities such as log rates are indexed.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Largest hypercube dimension whose labels fit the `u32` vertex index.
pub const MAX_HYPERCUBE_DIM: u32 = 31;

/// Proposal budget for edge swaps, as a multiple of the requested swap count.
pub const DEFAULT_SWAP_RETRY_FACTOR: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    slot_edge: Vec<u32>,
    reverse: Vec<usize>,
}

/// Structural checks reported by [`Graph::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphDiagnostics {
    pub n: usize,
    pub num_edges: usize,
    pub simple: bool,
    pub regular: bool,
    pub connected: bool,
    pub components: usize,
    /// Common degree when the graph is regular.
    pub degree: Option<usize>,
}

impl GraphDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.simple && self.regular && self.connected
    }
}

impl Graph {
    /// Builds a graph from unordered vertex pairs.
    ///
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected;
    /// irregular or disconnected inputs are accepted and show up in
    /// [`validate`](Self::validate).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < 2 {
            return Err(invalid(format!("graph needs at least 2 vertices, got {n}")));
        }
        if n > u32::MAX as usize {
            return Err(invalid(format!("{n} vertices overflow the u32 vertex index")));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(invalid(format!("self-loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push((u as u32, v as u32));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            let last = *offsets.last().unwrap();
            offsets.push(last + d);
        }
        let total = offsets[n];
        let mut targets = vec![0u32; total];
        let mut slot_edge = vec![0u32; total];
        let mut fill = offsets[..n].to_vec();
        // With edges in lexicographic order, filling smaller neighbors first
        // and larger ones second leaves every run ascending.
        for (e, &(u, v)) in edges.iter().enumerate() {
            let (u, v) = (u as usize, v as usize);
            targets[fill[v]] = u as u32;
            slot_edge[fill[v]] = e as u32;
            fill[v] += 1;
        }
        let mut fill_hi = fill;
        for (e, &(u, v)) in edges.iter().enumerate() {
            let u = u as usize;
            targets[fill_hi[u]] = v;
            slot_edge[fill_hi[u]] = e as u32;
            fill_hi[u] += 1;
        }
        let mut reverse = vec![0usize; total];
        for i in 0..n {
            for s in offsets[i]..offsets[i + 1] {
                let j = targets[s] as usize;
                let run = &targets[offsets[j]..offsets[j + 1]];
                let k = run.binary_search(&(i as u32)).expect("adjacency is symmetric");
                reverse[s] = offsets[j] + k;
            }
        }
        Self { n, edges, offsets, targets, slot_edge, reverse }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Undirected edges `(u, v)`, `u < v`, ascending.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_slots(&self) -> usize {
        self.targets.len()
    }

    /// Slot range of the oriented edges leaving `i`.
    pub fn slots(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Neighbors of `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.slots(i)]
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Head of the oriented edge stored in `slot`.
    pub fn slot_target(&self, slot: usize) -> usize {
        self.targets[slot] as usize
    }

    /// Undirected edge index of `slot`.
    pub fn slot_edge(&self, slot: usize) -> usize {
        self.slot_edge[slot] as usize
    }

    /// Slot of the opposite orientation.
    pub fn reverse_slot(&self, slot: usize) -> usize {
        self.reverse[slot]
    }

    /// True when `slot` runs from the smaller to the larger endpoint.
    pub fn slot_is_canonical(&self, slot: usize) -> bool {
        let (u, _) = self.edges[self.slot_edge(slot)];
        self.targets[slot] != u
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let run = self.neighbors(u);
        run.binary_search(&(v as u32))
            .ok()
            .map(|k| self.slot_edge(self.offsets[u] + k))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Common vertex degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree_of(0);
        (1..self.n).all(|i| self.degree_of(i) == d).then_some(d)
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        let mut components = 0;
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            queue.push_back(root);
            while let Some(i) = queue.pop_front() {
                for &j in self.neighbors(i) {
                    let j = j as usize;
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn validate(&self) -> GraphDiagnostics {
        let simple = self.edges.iter().all(|&(u, v)| u < v)
            && self.edges.windows(2).all(|w| w[0] < w[1]);
        let degree = self.regular_degree();
        let components = self.component_count();
        GraphDiagnostics {
            n: self.n,
            num_edges: self.edges.len(),
            simple,
            regular: degree.is_some(),
            connected: components == 1,
            components,
            degree,
        }
    }
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(invalid(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u as u32, v as u32));
        }
    }
    check_index_width(n)?;
    Ok(Graph::from_sorted(n, edges))
}

/// Hypercube on `2^dim` bit-string labels, edges at Hamming distance one.
pub fn hypercube(dim: u32) -> Result<Graph> {
    if dim == 0 || dim > MAX_HYPERCUBE_DIM {
        return Err(invalid(format!(
            "hypercube dimension must be in 1..={MAX_HYPERCUBE_DIM}, got {dim}"
        )));
    }
    let n = 1usize << dim;
    let mut edges = Vec::with_capacity(dim as usize * (n / 2));
    for v in 0..n {
        for b in 0..dim {
            let bit = 1usize << b;
            if v & bit == 0 {
                edges.push((v as u32, (v | bit) as u32));
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(n, edges))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid(format!("cycle needs n >= 3, got {n}")));
    }
    circulant(n, &[1])
}

/// Vertex `i` adjacent to `i ± s (mod n)` for each offset `s`.
///
/// Offsets must be distinct and satisfy `1 <= s <= n/2`; the chord `s = n/2`
/// (even `n` only) contributes a single neighbor.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if n < 2 {
        return Err(invalid(format!("circulant graph needs n >= 2, got {n}")));
    }
    check_index_width(n)?;
    if offsets.is_empty() {
        return Err(invalid("circulant graph needs at least one offset"));
    }
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(invalid(format!("duplicate circulant offset {}", w[0])));
    }
    if let Some(&s) = sorted.iter().find(|&&s| s == 0 || 2 * s > n) {
        return Err(invalid(format!("circulant offset {s} outside [1, {}]", n / 2)));
    }
    let g = sorted.iter().fold(n, |acc, &s| gcd(acc, s));
    if g != 1 {
        return Err(Error::Disconnected { components: g });
    }
    let mut edges = Vec::with_capacity(n * sorted.len());
    for i in 0..n {
        for &s in &sorted {
            let j = (i + s) % n;
            if 2 * s == n && j < i {
                continue;
            }
            edges.push(if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) });
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(n, edges))
}

/// Circulant base graph of even `degree`: offsets `1..=degree/2`. Odd degrees
/// add the `n/2` chord and so need even `n`.
pub fn circulant_of_degree(n: usize, degree: usize) -> Result<Graph> {
    if degree == 0 || degree >= n {
        return Err(invalid(format!("degree {degree} not realizable on {n} vertices")));
    }
    let mut offsets: Vec<usize> = (1..=degree / 2).collect();
    if degree % 2 == 1 {
        if n % 2 == 1 {
            return Err(invalid(format!("odd degree {degree} needs an even vertex count")));
        }
        offsets.push(n / 2);
    }
    circulant(n, &offsets)
}

fn check_index_width(n: usize) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(invalid(format!("{n} vertices overflow the u32 vertex index")));
    }
    Ok(())
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Randomizes `base` with `num_swap_pairs` accepted double-edge swaps,
/// giving up after [`DEFAULT_SWAP_RETRY_FACTOR`] proposals per requested swap.
pub fn random_regular_by_swaps<R: Rng + ?Sized>(
    base: &Graph,
    num_swap_pairs: usize,
    rng: &mut R,
) -> Result<Graph> {
    random_regular_by_swaps_capped(base, num_swap_pairs, DEFAULT_SWAP_RETRY_FACTOR, rng)
}

/// Double-edge swaps `(a,b),(c,d) -> (a,c),(b,d)`.
///
/// Both edges are drawn uniformly (distinct) and the second one's orientation
/// is flipped by a fair coin, so either rewiring may be proposed. A proposal
/// creating a self-loop, a duplicate edge or a disconnected graph is rejected
/// and both edges are redrawn. Degrees are preserved by every accepted swap.
pub fn random_regular_by_swaps_capped<R: Rng + ?Sized>(
    base: &Graph,
    num_swap_pairs: usize,
    retry_factor: usize,
    rng: &mut R,
) -> Result<Graph> {
    if num_swap_pairs == 0 {
        return Ok(base.clone());
    }
    let m = base.num_edges();
    if m < 2 {
        return Err(invalid("edge swaps need at least two edges"));
    }
    if !base.is_connected() {
        return Err(Error::Disconnected { components: base.component_count() });
    }
    let mut edges: Vec<(u32, u32)> = base.edges().to_vec();
    let mut adj: Vec<Vec<u32>> = (0..base.n()).map(|i| base.neighbors(i).to_vec()).collect();
    let cap = num_swap_pairs.saturating_mul(retry_factor.max(1));

    let mut accepted = 0;
    let mut proposed = 0;
    let (mut self_loops, mut duplicates, mut disconnecting) = (0, 0, 0);
    let mut scratch = SwapScratch::new(base.n());

    while accepted < num_swap_pairs {
        if proposed >= cap {
            return Err(Error::SwapLimit {
                requested: num_swap_pairs,
                accepted,
                proposed,
                self_loops,
                duplicates,
                disconnecting,
            });
        }
        proposed += 1;
        let e1 = rng.random_range(0..m);
        let mut e2 = rng.random_range(0..m - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b) = edges[e1];
        let (mut c, mut d) = edges[e2];
        if rng.random::<bool>() {
            core::mem::swap(&mut c, &mut d);
        }
        if a == c || b == d {
            self_loops += 1;
            continue;
        }
        if adj[a as usize].contains(&c) || adj[b as usize].contains(&d) {
            duplicates += 1;
            continue;
        }
        remove_adj(&mut adj, a, b);
        remove_adj(&mut adj, c, d);
        add_adj(&mut adj, a, c);
        add_adj(&mut adj, b, d);
        if !scratch.connected(&adj) {
            remove_adj(&mut adj, a, c);
            remove_adj(&mut adj, b, d);
            add_adj(&mut adj, a, b);
            add_adj(&mut adj, c, d);
            disconnecting += 1;
            continue;
        }
        edges[e1] = ordered(a, c);
        edges[e2] = ordered(b, d);
        accepted += 1;
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(base.n(), edges))
}

fn ordered(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn remove_adj(adj: &mut [Vec<u32>], u: u32, v: u32) {
    let ru = &mut adj[u as usize];
    let k = ru.iter().position(|&x| x == v).expect("edge present");
    ru.swap_remove(k);
    let rv = &mut adj[v as usize];
    let k = rv.iter().position(|&x| x == u).expect("edge present");
    rv.swap_remove(k);
}

fn add_adj(adj: &mut [Vec<u32>], u: u32, v: u32) {
    adj[u as usize].push(v);
    adj[v as usize].push(u);
}

struct SwapScratch {
    seen: Vec<bool>,
    stack: Vec<u32>,
}

impl SwapScratch {
    fn new(n: usize) -> Self {
        Self { seen: vec![false; n], stack: Vec::with_capacity(n) }
    }

    fn connected(&mut self, adj: &[Vec<u32>]) -> bool {
        self.seen.iter_mut().for_each(|s| *s = false);
        self.stack.clear();
        self.seen[0] = true;
        self.stack.push(0);
        let mut count = 1;
        while let Some(i) = self.stack.pop() {
            for &j in &adj[i as usize] {
                if !self.seen[j as usize] {
                    self.seen[j as usize] = true;
                    count += 1;
                    self.stack.push(j);
                }
            }
        }
        count == adj.len()
    }
}

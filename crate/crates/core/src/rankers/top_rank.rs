//! TopRank: a divide-and-conquer ranker driven by a comparison graph.
//!
//! An edge `j -> i` records that item `i` is believed more attractive than
//! `j`. Each round the catalog is layered into blocks by repeatedly removing
//! items with no outgoing edge into the remaining set; blocks are shown in
//! order, each shuffled uniformly. Items in the same block are compared via
//! the click differences `U_ij = C_i - C_j`, and an edge is added once the
//! accumulated difference `S_ij` reaches `sqrt(2 N_ij ln((c/delta) sqrt(N_ij)))`.

use crate::error::{LabError, Result};
use crate::rng::RngStream;
use crate::types::{ClickVector, ItemId, RankedList};

use super::{check_feedback, Ranker, RankerId};

/// Confidence constant `c`, as published for TopRank.
pub const DEFAULT_TOPRANK_C: f64 = 3.43;

/// Evidence `S_ij` needed for an edge once `N_ij = n`.
pub fn edge_threshold(n: u64, c: f64, delta: f64) -> f64 {
    let n = n as f64;
    (2.0 * n * ((c / delta) * n.sqrt()).ln()).sqrt()
}

#[derive(Debug, Clone)]
pub struct TopRank {
    n_items: usize,
    list_len: usize,
    c: f64,
    delta: f64,
    /// Row-major `S_ij`.
    signed: Vec<i64>,
    /// Row-major `N_ij`.
    absolute: Vec<u64>,
    /// `edge[j * n + i]` is the edge `j -> i`.
    edge: Vec<bool>,
    out_edges: Vec<Vec<usize>>,
    blocks: Vec<Vec<ItemId>>,
    block_of: Vec<usize>,
    blocks_stale: bool,
    rng: RngStream,
}

impl TopRank {
    pub fn new(n_items: usize, list_len: usize, c: f64, delta: f64, rng: RngStream) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) || c <= 0.0 {
            return Err(LabError::param(format!(
                "TopRank needs c > 0 and 0 < delta < 1, got c={c}, delta={delta}"
            )));
        }
        if list_len == 0 || list_len > n_items {
            return Err(LabError::param(format!(
                "list length {list_len} invalid for {n_items} items"
            )));
        }
        Ok(Self {
            n_items,
            list_len,
            c,
            delta,
            signed: vec![0; n_items * n_items],
            absolute: vec![0; n_items * n_items],
            edge: vec![false; n_items * n_items],
            out_edges: vec![Vec::new(); n_items],
            blocks: vec![(0..n_items).map(ItemId).collect()],
            block_of: vec![0; n_items],
            blocks_stale: false,
            rng,
        })
    }

    /// `(S_ij, N_ij)`.
    pub fn pair_stats(&self, i: ItemId, j: ItemId) -> (i64, u64) {
        let at = i.0 * self.n_items + j.0;
        (self.signed[at], self.absolute[at])
    }

    /// True when the graph holds the edge `from -> to` (`to` ranked above).
    pub fn has_edge(&self, from: ItemId, to: ItemId) -> bool {
        self.edge[from.0 * self.n_items + to.0]
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn blocks(&mut self) -> Result<&[Vec<ItemId>]> {
        self.refresh_blocks()?;
        Ok(&self.blocks)
    }

    fn refresh_blocks(&mut self) -> Result<()> {
        if !self.blocks_stale {
            return Ok(());
        }
        let n = self.n_items;
        let mut remaining = vec![true; n];
        let mut left = n;
        let mut blocks = Vec::new();
        while left > 0 {
            let block: Vec<ItemId> = (0..n)
                .filter(|&a| remaining[a] && !self.out_edges[a].iter().any(|&b| remaining[b]))
                .map(ItemId)
                .collect();
            if block.is_empty() {
                let stuck: Vec<usize> = (0..n).filter(|&a| remaining[a]).collect();
                return Err(LabError::Cycle(stuck));
            }
            for &a in &block {
                remaining[a.0] = false;
                self.block_of[a.0] = blocks.len();
            }
            left -= block.len();
            blocks.push(block);
        }
        self.blocks = blocks;
        self.blocks_stale = false;
        Ok(())
    }

    /// Path `from ~> to` along edges, if one exists.
    fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n_items];
        let mut stack = vec![from];
        parent[from] = from;
        while let Some(a) = stack.pop() {
            if a == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &b in &self.out_edges[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    stack.push(b);
                }
            }
        }
        None
    }

    /// Adds `from -> to`, failing if it closes a cycle.
    fn insert_edge(&mut self, from: usize, to: usize) -> Result<()> {
        let at = from * self.n_items + to;
        if self.edge[at] {
            return Ok(());
        }
        self.edge[at] = true;
        self.out_edges[from].push(to);
        self.blocks_stale = true;
        match self.path(to, from) {
            Some(cycle) => Err(LabError::Cycle(cycle)),
            None => Ok(()),
        }
    }
}

impl Ranker for TopRank {
    fn id(&self) -> RankerId {
        RankerId::TopRank
    }

    fn propose(&mut self, _t: u64) -> Result<RankedList> {
        self.refresh_blocks()?;
        let mut items = Vec::with_capacity(self.list_len);
        for block in &self.blocks {
            let mut shuffled = block.clone();
            self.rng.shuffle(&mut shuffled);
            let room = self.list_len - items.len();
            items.extend(shuffled.into_iter().take(room));
            if items.len() == self.list_len {
                break;
            }
        }
        Ok(RankedList::from_vec_unchecked(items))
    }

    fn update(&mut self, _t: u64, proposed: &RankedList, feedback: &ClickVector) -> Result<()> {
        check_feedback(proposed, feedback, self.n_items)?;
        self.refresh_blocks()?;
        let n = self.n_items;
        // U_ij is non-zero only when exactly one of i, j was clicked
        let mut touched = Vec::new();
        for i in feedback.clicked_items().map(|i| i.0) {
            let block = &self.blocks[self.block_of[i]];
            for &ItemId(j) in block {
                if j == i || feedback.get(ItemId(j)) {
                    continue;
                }
                self.signed[i * n + j] += 1;
                self.signed[j * n + i] -= 1;
                self.absolute[i * n + j] += 1;
                self.absolute[j * n + i] += 1;
                touched.push((i, j));
            }
        }
        for (i, j) in touched {
            let at = i * n + j;
            let (s, cnt) = (self.signed[at], self.absolute[at]);
            if cnt > 0
                && !self.edge[j * n + i]
                && s as f64 >= edge_threshold(cnt, self.c, self.delta)
            {
                self.insert_edge(j, i)?;
            }
        }
        Ok(())
    }
}

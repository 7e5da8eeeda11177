use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ClusterError, ClusteringOrigin, FlatClustering};
use crate::similarity::DistanceMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Single,
    Complete,
    #[default]
    Average,
}

impl Linkage {
    pub const ALL: [Linkage; 3] = [Linkage::Single, Linkage::Complete, Linkage::Average];

    pub fn as_str(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Linkage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(format!("unknown linkage {other:?}")),
        }
    }
}

/// One merge step. Node ids follow the usual convention: `0..n` are leaves,
/// `n + i` is the cluster formed by merge `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// Binary merge tree over documents.
///
/// At every merge the child holding the smaller leaf index goes left, which
/// fixes the leaf order used by cuts and renderings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    leaves: Vec<String>,
    merges: Vec<Merge>,
}

struct Active {
    node: usize,
    min_leaf: usize,
    size: usize,
}

/// Standard agglomerative clustering with Lance-Williams updates.
///
/// Among candidate pairs at equal distance the pair whose (smaller, larger)
/// minimum-leaf indices is lexicographically least merges first. Distances
/// are compared exactly.
pub fn agglomerate(dist: &DistanceMatrix, linkage: Linkage) -> Result<Dendrogram, ClusterError> {
    let n = dist.len();
    if n < 2 {
        return Err(ClusterError::TooFewDocuments(n));
    }
    let mut d = dist.values.clone();
    let mut slots: Vec<Option<Active>> = (0..n)
        .map(|i| {
            Some(Active {
                node: i,
                min_leaf: i,
                size: 1,
            })
        })
        .collect();
    let mut merges = Vec::with_capacity(n - 1);
    let mut last_height = f64::NEG_INFINITY;

    for step in 0..n - 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for i in 0..n {
            let Some(a) = &slots[i] else { continue };
            for j in (i + 1)..n {
                let Some(b) = &slots[j] else { continue };
                let v = d[i * n + j];
                let key = (a.min_leaf.min(b.min_leaf), a.min_leaf.max(b.min_leaf));
                let better = match &best {
                    None => true,
                    Some((bv, bkey, _, _)) => v < *bv || (v == *bv && key < *bkey),
                };
                if better {
                    best = Some((v, key, i, j));
                }
            }
        }
        let (height, _, i, j) = best.expect("at least two active clusters");
        let a = slots[i].take().expect("active");
        let b = slots[j].take().expect("active");
        let (l, r) = if a.min_leaf < b.min_leaf {
            (&a, &b)
        } else {
            (&b, &a)
        };
        // Float rounding in the average update can dip a hair below the
        // previous merge; heights stay monotone.
        let height = height.max(last_height);
        last_height = height;
        merges.push(Merge {
            left: l.node,
            right: r.node,
            height,
            size: a.size + b.size,
        });

        for k in 0..n {
            if k == i || slots[k].is_none() {
                continue;
            }
            let dik = d[i * n + k];
            let djk = d[j * n + k];
            let v = match linkage {
                Linkage::Single => dik.min(djk),
                Linkage::Complete => dik.max(djk),
                Linkage::Average => {
                    let (na, nb) = (a.size as f64, b.size as f64);
                    (na * dik + nb * djk) / (na + nb)
                }
            };
            d[i * n + k] = v;
            d[k * n + i] = v;
        }
        slots[i] = Some(Active {
            node: n + step,
            min_leaf: a.min_leaf.min(b.min_leaf),
            size: a.size + b.size,
        });
    }

    Ok(Dendrogram {
        leaves: dist.document_ids.clone(),
        merges,
    })
}

impl Dendrogram {
    /// Assembles a dendrogram from parts, checking the structural
    /// invariants: `n - 1` merges, each node used once as a child, children
    /// formed before their parent, nondecreasing heights.
    pub fn from_parts(leaves: Vec<String>, merges: Vec<Merge>) -> Result<Self, ClusterError> {
        let n = leaves.len();
        let bad = |m: String| Err(ClusterError::PartitionMismatch(m));
        if n == 0 || merges.len() != n - 1 {
            return bad(format!("{} merges for {n} leaves", merges.len()));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut prev = f64::NEG_INFINITY;
        for (i, m) in merges.iter().enumerate() {
            for c in [m.left, m.right] {
                if c >= n + i || used[c] {
                    return bad(format!("merge {i} has invalid child {c}"));
                }
                used[c] = true;
            }
            if m.height < prev {
                return bad(format!("merge {i} height decreases"));
            }
            prev = m.height;
        }
        Ok(Self { leaves, merges })
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn root(&self) -> usize {
        2 * self.leaves.len() - 2
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.leaves.len()
    }

    pub fn height(&self, node: usize) -> f64 {
        if self.is_leaf(node) {
            0.0
        } else {
            self.merges[node - self.leaves.len()].height
        }
    }

    /// Children of an internal node, left first.
    pub fn children(&self, node: usize) -> Option<(usize, usize)> {
        (!self.is_leaf(node)).then(|| {
            let m = &self.merges[node - self.leaves.len()];
            (m.left, m.right)
        })
    }

    /// Leaf indices under `node`, left to right.
    pub fn members(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            match self.children(x) {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                None => out.push(x),
            }
        }
        out
    }

    /// Leaf indices in left-to-right drawing order.
    pub fn leaf_order(&self) -> Vec<usize> {
        self.members(self.root())
    }

    /// Leaf-id sets of every internal node; equal sets mean equal topology.
    pub fn clades(&self) -> BTreeSet<Vec<String>> {
        let n = self.leaves.len();
        (n..2 * n - 1)
            .map(|node| {
                let mut ids: Vec<String> = self
                    .members(node)
                    .into_iter()
                    .map(|l| self.leaves[l].clone())
                    .collect();
                ids.sort();
                ids
            })
            .collect()
    }

    /// Flat clustering obtained by undoing the last `k - 1` merges, clusters
    /// in leaf order.
    pub fn cut(&self, k: usize) -> Result<FlatClustering, ClusterError> {
        let n = self.leaves.len();
        if k < 1 || k > n {
            return Err(ClusterError::BadK { k, n });
        }
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        for (i, m) in self.merges[..n - k].iter().enumerate() {
            parent[m.left] = n + i;
            parent[m.right] = n + i;
        }
        let root_of = |mut x: usize| {
            while parent[x] != x {
                x = parent[x];
            }
            x
        };
        let mut clusters: Vec<Vec<String>> = Vec::new();
        let mut current = None;
        for leaf in self.leaf_order() {
            let r = root_of(leaf);
            if current != Some(r) {
                clusters.push(Vec::new());
                current = Some(r);
            }
            clusters
                .last_mut()
                .expect("pushed")
                .push(self.leaves[leaf].clone());
        }
        Ok(FlatClustering {
            clusters,
            origin: ClusteringOrigin::Cut,
            wcss: None,
        })
    }

    /// Newick text. A leaf's branch is its parent's height; an internal
    /// node's branch is its parent's height minus its own.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(self.root(), None, &mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, node: usize, parent_height: Option<f64>, out: &mut String) {
        match self.children(node) {
            Some((l, r)) => {
                let h = self.height(node);
                out.push('(');
                self.write_newick(l, Some(h), out);
                out.push(',');
                self.write_newick(r, Some(h), out);
                out.push(')');
            }
            None => out.push_str(&super::newick::quote_label(&self.leaves[node])),
        }
        if let Some(p) = parent_height {
            out.push(':');
            out.push_str(&(p - self.height(node)).to_string());
        }
    }
}

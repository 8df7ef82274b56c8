use crate::rational::{ratio, Rational};
use crate::space::FiniteMetricSpace;

/// One cluster of the hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterNode {
    /// Member points, increasing.
    pub points: Vec<usize>,
    pub diameter: Rational,
    /// Child node ids, ordered by smallest member.
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
}

impl ClusterNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Nested partitions of a finite space, root first, nodes in breadth-first order.
///
/// The children of a node are the connected components of its points under
/// the graph joining pairs closer than half the node's diameter. When that
/// graph is connected the split falls back to the longest edge of the
/// single-linkage (minimum spanning) tree, which always disconnects it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    nodes: Vec<ClusterNode>,
}

impl ClusterTree {
    pub fn nodes(&self) -> &[ClusterNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &ClusterNode {
        &self.nodes[id]
    }

    /// `None` only for the empty space.
    pub fn root(&self) -> Option<&ClusterNode> {
        self.nodes.first()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Maximal nodes whose diameter is strictly below `threshold`.
    ///
    /// For a positive threshold the result partitions the points, since every
    /// leaf has diameter zero. Blocks come in depth-first order.
    pub fn cut_below(&self, threshold: &Rational) -> Vec<Vec<usize>> {
        let mut blocks = Vec::new();
        if self.nodes.is_empty() {
            return blocks;
        }
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if &node.diameter < threshold || node.is_leaf() {
                blocks.push(node.points.clone());
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        blocks
    }

    /// Distinct node diameters, largest first.
    pub fn diameters(&self) -> Vec<Rational> {
        let mut ds: Vec<Rational> = self.nodes.iter().map(|n| n.diameter.clone()).collect();
        ds.sort_unstable_by(|a, b| b.cmp(a));
        ds.dedup();
        ds
    }
}

pub fn build_dendrogram(space: &FiniteMetricSpace) -> ClusterTree {
    let mut nodes: Vec<ClusterNode> = Vec::new();
    if space.is_empty() {
        return ClusterTree { nodes };
    }
    let all: Vec<usize> = (0..space.len()).collect();
    nodes.push(ClusterNode {
        diameter: space.subset_diameter(&all),
        points: all,
        children: Vec::new(),
        parent: None,
        depth: 0,
    });
    let mut next = 0;
    while next < nodes.len() {
        let id = next;
        next += 1;
        if nodes[id].points.len() < 2 {
            continue;
        }
        let points = nodes[id].points.clone();
        let half = &nodes[id].diameter * ratio(1, 2);
        let mut parts = components_below(space, &points, &half);
        if parts.len() < 2 {
            let cut = longest_spanning_edge(space, &points);
            parts = components_below(space, &points, &cut);
        }
        let depth = nodes[id].depth + 1;
        for part in parts {
            let child = nodes.len();
            nodes.push(ClusterNode {
                diameter: space.subset_diameter(&part),
                points: part,
                children: Vec::new(),
                parent: Some(id),
                depth,
            });
            nodes[id].children.push(child);
        }
    }
    ClusterTree { nodes }
}

/// Partitions of single-linkage clustering at every level, coarsest first:
/// the whole space, then the components of `d < t` for each distinct
/// distance `t` in decreasing order, which ends with singletons.
pub fn single_linkage_levels(space: &FiniteMetricSpace) -> Vec<Vec<Vec<usize>>> {
    let all: Vec<usize> = (0..space.len()).collect();
    let mut values: Vec<&Rational> = space.pairs().map(|(i, j)| space.dist(i, j)).collect();
    values.sort();
    values.dedup();
    let mut levels = vec![vec![all.clone()]];
    levels.extend(values.iter().rev().map(|t| components_below(space, &all, t)));
    levels.dedup();
    levels
}

/// Components of `points` under edges of length `< threshold`, each sorted,
/// ordered by smallest member.
fn components_below(
    space: &FiniteMetricSpace,
    points: &[usize],
    threshold: &Rational,
) -> Vec<Vec<usize>> {
    let m = points.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..m {
        for b in a + 1..m {
            if space.dist(points[a], points[b]) < threshold {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for a in 0..m {
        let r = find(&mut parent, a);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(points[a]);
    }
    groups
}

/// Longest edge of a minimum spanning tree on `points` (Prim).
fn longest_spanning_edge(space: &FiniteMetricSpace, points: &[usize]) -> Rational {
    let m = points.len();
    let mut in_tree = vec![false; m];
    let mut best: Vec<Option<Rational>> = vec![None; m];
    let mut longest = Rational::default();
    in_tree[0] = true;
    for b in 1..m {
        best[b] = Some(space.dist(points[0], points[b]).clone());
    }
    for _ in 1..m {
        let (pick, weight) = (0..m)
            .filter(|&b| !in_tree[b])
            .map(|b| (b, best[b].clone().expect("reachable")))
            .min_by(|x, y| x.1.cmp(&y.1))
            .expect("vertices left");
        in_tree[pick] = true;
        if weight > longest {
            longest = weight;
        }
        for b in 0..m {
            if !in_tree[b] {
                let d = space.dist(points[pick], points[b]);
                if best[b].as_ref().is_none_or(|cur| d < cur) {
                    best[b] = Some(d.clone());
                }
            }
        }
    }
    longest
}

use std::sync::Arc;

use super::partition::{GroupedIndexSet, PairPartition};
use crate::{Error, Result};

/// Loop-free multigraph on `m` vertices, stored as a symmetric edge
/// multiplicity matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramMultigraph {
    mult: Vec<Vec<u32>>,
}

impl DiagramMultigraph {
    pub fn empty(vertices: usize) -> Self {
        Self { mult: vec![vec![0; vertices]; vertices] }
    }

    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(vertices);
        for &(a, b) in edges {
            if a >= vertices || b >= vertices {
                return Err(Error::IndexOutOfRange { index: a.max(b), dim: vertices });
            }
            if a == b {
                return Err(Error::domain(format!("loop at vertex {a}")));
            }
            g.mult[a][b] += 1;
            g.mult[b][a] += 1;
        }
        Ok(g)
    }

    pub fn vertices(&self) -> usize {
        self.mult.len()
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.mult[a][b]
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.mult[v].iter().sum()
    }

    pub fn edge_count(&self) -> u32 {
        (0..self.vertices()).map(|v| self.degree(v)).sum::<u32>() / 2
    }

    /// Distinct adjacent pairs `(a, b, multiplicity)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.vertices();
        (0..n).flat_map(move |a| (a + 1..n).filter_map(move |b| {
            let k = self.mult[a][b];
            (k > 0).then_some((a, b, k))
        }))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.mult[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_regular(&self, q: u32) -> bool {
        (0..self.vertices()).all(|v| self.degree(v) == q)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.vertices()).any(|v| self.mult[v][v] > 0)
    }
}

/// `G_σ`: one vertex per group, one edge per block joining the groups of its
/// two elements.
pub fn partition_to_multigraph(sigma: &PairPartition) -> DiagramMultigraph {
    let groups = sigma.groups();
    let mut g = DiagramMultigraph::empty(groups.groups());
    for &(a, b) in sigma.pairs() {
        let (ga, gb) = (groups.group_of(a), groups.group_of(b));
        g.mult[ga][gb] += 1;
        g.mult[gb][ga] += 1;
    }
    g
}

/// All partitions sharing one multigraph.
#[derive(Debug, Clone)]
pub struct DiagramClass {
    pub graph: DiagramMultigraph,
    /// Number of partitions `σ` with `G_σ = graph`:
    /// `prod_i n_i! / prod_{i<j} μ_ij!`.
    pub count: u128,
    pub representative: PairPartition,
}

fn factorial(n: u32) -> u128 {
    (1..=u128::from(n)).product()
}

fn representative(groups: &Arc<GroupedIndexSet>, g: &DiagramMultigraph) -> PairPartition {
    let mut next: Vec<usize> = (0..groups.groups()).map(|i| groups.range(i).start).collect();
    let mut pairs = Vec::new();
    for (a, b, k) in g.edges() {
        for _ in 0..k {
            pairs.push((next[a], next[b]));
            next[a] += 1;
            next[b] += 1;
        }
    }
    PairPartition::new(Arc::clone(groups), pairs).expect("class graph realises a valid partition")
}

/// Every loop-free connected multigraph with degree sequence `n_1..n_ℓ`,
/// together with how many partitions of `Π(n_1, …, n_ℓ)` induce it.
///
/// Multiplicity matrices are filled row by row; a row is closed only when
/// its remaining degree is exactly used up. The order is deterministic.
pub fn diagram_classes(groups: &GroupedIndexSet) -> Result<Vec<DiagramClass>> {
    let l = groups.groups();
    if groups.sizes().iter().any(|&s| s > 64) || l > 64 {
        return Err(Error::CapExceeded { what: "diagram classes", requested: groups.total() as u128, cap: 64 * 64 });
    }
    let groups = Arc::new(groups.clone());
    let mut out = Vec::new();
    if groups.total() % 2 == 1 || l < 2 {
        return Ok(out);
    }
    let mut rem: Vec<u32> = groups.sizes().iter().map(|&s| s as u32).collect();
    let mut g = DiagramMultigraph::empty(l);
    let numerator: u128 = groups.sizes().iter().map(|&s| factorial(s as u32)).product();
    fill(0, 1, &mut rem, &mut g, &mut |g| {
        if g.is_connected() {
            let denom: u128 = g.edges().map(|(_, _, k)| factorial(k)).product();
            out.push(DiagramClass { graph: g.clone(), count: numerator / denom, representative: representative(&groups, g) });
        }
    });
    Ok(out)
}

fn fill(i: usize, j: usize, rem: &mut [u32], g: &mut DiagramMultigraph, emit: &mut impl FnMut(&DiagramMultigraph)) {
    let l = rem.len();
    if i == l {
        emit(g);
        return;
    }
    if j == l {
        if rem[i] == 0 {
            fill(i + 1, i + 2, rem, g, emit);
        }
        return;
    }
    let tail_capacity: u32 = rem[j + 1..].iter().sum();
    let hi = rem[i].min(rem[j]);
    let lo = rem[i].saturating_sub(tail_capacity);
    for k in (lo..=hi).rev() {
        rem[i] -= k;
        rem[j] -= k;
        g.mult[i][j] = k;
        g.mult[j][i] = k;
        fill(i, j + 1, rem, g, emit);
        rem[i] += k;
        rem[j] += k;
    }
    g.mult[i][j] = 0;
    g.mult[j][i] = 0;
}

/// `|Π(q[m])|`, summed over diagram classes.
pub fn count_partitions(q: usize, m: usize) -> Result<u128> {
    if q == 0 || m == 0 {
        return Err(Error::domain("q and m must be positive"));
    }
    let classes = diagram_classes(&GroupedIndexSet::uniform(q, m)?)?;
    Ok(classes.iter().map(|c| c.count).sum())
}

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest `N = sum n_i` for which partitions are streamed one by one.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

const NONE: usize = usize::MAX;

/// Consecutive groups `J_1, …, J_ℓ` of sizes `n_1, …, n_ℓ` covering
/// `{0, …, N-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedIndexSet {
    sizes: Vec<usize>,
    starts: Vec<usize>,
    group_of: Vec<usize>,
}

impl GroupedIndexSet {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::domain("group sizes must be a non-empty list of positive integers"));
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut group_of = Vec::new();
        for (g, &n) in sizes.iter().enumerate() {
            starts.push(group_of.len());
            group_of.extend(std::iter::repeat_n(g, n));
        }
        Ok(Self { sizes, starts, group_of })
    }

    /// `m` groups of size `q`, i.e. `q[m]`.
    pub fn uniform(q: usize, m: usize) -> Result<Self> {
        Self::new(vec![q; m])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.group_of.len()
    }

    pub fn group_of(&self, element: usize) -> usize {
        self.group_of[element]
    }

    pub fn range(&self, group: usize) -> std::ops::Range<usize> {
        self.starts[group]..self.starts[group] + self.sizes[group]
    }
}

/// A partition of `{0, …, N-1}` into pairs, stored sorted by first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPartition {
    groups: Arc<GroupedIndexSet>,
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Validates every membership condition of `Π(n_1, …, n_ℓ)`.
    pub fn new(groups: Arc<GroupedIndexSet>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = groups.total();
        let mut seen = vec![false; n];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (a, b) = (a.min(b), a.max(b));
            if b >= n {
                return Err(Error::IndexOutOfRange { index: b, dim: n });
            }
            if a == b || seen[a] || seen[b] {
                return Err(Error::domain(format!("element reused in pair ({a}, {b})")));
            }
            seen[a] = true;
            seen[b] = true;
            if groups.group_of(a) == groups.group_of(b) {
                return Err(Error::domain(format!("pair ({a}, {b}) lies inside one group")));
            }
            norm.push((a, b));
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::domain("pairs do not cover every element"));
        }
        norm.sort_unstable();
        let p = Self { groups, pairs: norm };
        if !p.connects_groups() {
            return Err(Error::domain("partition does not connect all groups"));
        }
        Ok(p)
    }

    pub fn groups(&self) -> &GroupedIndexSet {
        &self.groups
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn connects_groups(&self) -> bool {
        groups_connected(&self.groups, self.pairs.iter().copied())
    }
}

/// One-based `(a,b)` blocks, e.g. `(1,4)(2,5)(3,6)`.
impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "({},{})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn groups_connected(groups: &GroupedIndexSet, pairs: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..groups.groups()).collect();
    let mut components = groups.groups();
    for (a, b) in pairs {
        let ra = find(&mut parent, groups.group_of(a));
        let rb = find(&mut parent, groups.group_of(b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Streams `Π(n_1, …, n_ℓ)` in lexicographic order of the pair lists.
///
/// Backtracking always pairs the smallest unpaired element; candidates in
/// its own group are skipped, and a branch is cut as soon as some group has
/// more unpaired elements than all other groups together. Connectivity is
/// checked on completion.
pub struct Partitions {
    groups: Arc<GroupedIndexSet>,
    partner: Vec<usize>,
    remaining: Vec<usize>,
    unpaired: usize,
    stack: Vec<(usize, usize)>,
    fresh: bool,
    done: bool,
}

/// Starts the stream for `groups`; refuses when `N` exceeds `cap`
/// (default [`DEFAULT_ENUMERATION_CAP`]).
pub fn enumerate_partitions(groups: GroupedIndexSet, cap: Option<usize>) -> Result<Partitions> {
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let n = groups.total();
    if n > cap {
        return Err(Error::CapExceeded { what: "partition enumeration", requested: n as u128, cap: cap as u128 });
    }
    let remaining = groups.sizes().to_vec();
    let done = n % 2 == 1 || groups.groups() < 2;
    Ok(Partitions {
        groups: Arc::new(groups),
        partner: vec![NONE; n],
        remaining,
        unpaired: n,
        stack: Vec::new(),
        fresh: true,
        done,
    })
}

impl Partitions {
    fn pair(&mut self, i: usize, j: usize) {
        self.partner[i] = j;
        self.partner[j] = i;
        self.remaining[self.groups.group_of(i)] -= 1;
        self.remaining[self.groups.group_of(j)] -= 1;
        self.unpaired -= 2;
        self.stack.push((i, j));
    }

    fn unpair_last(&mut self) -> Option<(usize, usize)> {
        let (i, j) = self.stack.pop()?;
        self.partner[i] = NONE;
        self.partner[j] = NONE;
        self.remaining[self.groups.group_of(i)] += 1;
        self.remaining[self.groups.group_of(j)] += 1;
        self.unpaired += 2;
        Some((i, j))
    }

    fn feasible(&self) -> bool {
        let largest = self.remaining.iter().copied().max().unwrap_or(0);
        2 * largest <= self.unpaired
    }

    /// Advances to the next complete perfect matching without intra-group
    /// pairs. Returns `false` when the search space is exhausted.
    fn advance(&mut self) -> bool {
        let n = self.partner.len();
        let (mut i, mut from) = if self.fresh {
            self.fresh = false;
            if !self.feasible() {
                return false;
            }
            (0, 1)
        } else {
            match self.unpair_last() {
                Some((i, j)) => (i, j + 1),
                None => return false,
            }
        };
        loop {
            let gi = self.groups.group_of(i);
            let candidate =
                (from..n).find(|&j| self.partner[j] == NONE && self.groups.group_of(j) != gi);
            let progressed = match candidate {
                Some(j) => {
                    self.pair(i, j);
                    if self.feasible() {
                        match (i + 1..n).find(|&k| self.partner[k] == NONE) {
                            None => return true,
                            Some(next) => {
                                i = next;
                                from = next + 1;
                            }
                        }
                    } else {
                        self.unpair_last();
                        from = j + 1;
                    }
                    true
                }
                None => false,
            };
            if !progressed {
                match self.unpair_last() {
                    Some((pi, pj)) => {
                        i = pi;
                        from = pj + 1;
                    }
                    None => return false,
                }
            }
        }
    }
}

impl Iterator for Partitions {
    type Item = PairPartition;

    fn next(&mut self) -> Option<PairPartition> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if groups_connected(&self.groups, self.stack.iter().copied()) {
                let mut pairs = self.stack.clone();
                pairs.sort_unstable();
                return Some(PairPartition { groups: Arc::clone(&self.groups), pairs });
            }
        }
        None
    }
}

use rayon::prelude::*;

use crate::diagrams::{diagram_classes, DiagramMultigraph, GroupedIndexSet};
use crate::kernels::{checked_pow, SymmetricKernel};
use crate::{pairwise_sum, Error, Result, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct CumulantOptions {
    /// Upper limit on multiply-adds summed over all diagram classes.
    pub work_cap: u128,
    /// Upper limit on the entries of any dense intermediate tensor.
    pub tensor_cap: u128,
}

impl Default for CumulantOptions {
    fn default() -> Self {
        Self { work_cap: 4_000_000_000, tensor_cap: 1 << 24 }
    }
}

/// Dense tensor whose axes are labelled by edge ids of the diagram.
#[derive(Clone)]
struct Node<T> {
    legs: Vec<usize>,
    data: Vec<T>,
}

struct Step {
    a: usize,
    b: usize,
}

/// Greedy pairwise contraction order: repeatedly merge the two nodes that
/// share a leg and give the smallest result, breaking ties by work.
/// Returns the steps and the total multiply-add count.
fn plan(mut legs: Vec<Vec<usize>>, dim: usize) -> (Vec<Step>, u128, u128) {
    let mut steps = Vec::new();
    let mut work: u128 = 0;
    let mut largest: u128 = 0;
    while legs.len() > 1 {
        let mut best: Option<(u128, u128, usize, usize)> = None;
        for a in 0..legs.len() {
            for b in a + 1..legs.len() {
                let shared = legs[a].iter().filter(|l| legs[b].contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let free = legs[a].len() + legs[b].len() - 2 * shared;
                let size = checked_pow(dim, free);
                let cost = checked_pow(dim, free + shared);
                if best.is_none_or(|(s, c, _, _)| (size, cost) < (s, c)) {
                    best = Some((size, cost, a, b));
                }
            }
        }
        let (size, cost, a, b) = best.expect("diagram graphs are connected");
        work = work.saturating_add(cost);
        largest = largest.max(size);
        let lb = legs.remove(b);
        let la = &mut legs[a];
        let merged: Vec<usize> =
            la.iter().filter(|l| !lb.contains(l)).chain(lb.iter().filter(|l| !la.contains(l))).copied().collect();
        *la = merged;
        steps.push(Step { a, b });
    }
    (steps, work, largest)
}

/// Reorders `node` so that its legs appear as `order`.
fn permute<T: Scalar>(node: &Node<T>, order: &[usize], dim: usize) -> Vec<T> {
    let k = node.legs.len();
    let pos: Vec<usize> = order.iter().map(|l| node.legs.iter().position(|x| x == l).unwrap()).collect();
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dim;
    }
    let total = node.data.len();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; k];
    for _ in 0..total {
        let src: usize = idx.iter().zip(&pos).map(|(&v, &p)| v * strides[p]).sum();
        out.push(node.data[src].clone());
        for d in (0..k).rev() {
            idx[d] += 1;
            if idx[d] < dim {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

fn contract_nodes<T: Scalar>(a: &Node<T>, b: &Node<T>, dim: usize) -> Node<T> {
    let shared: Vec<usize> = a.legs.iter().filter(|l| b.legs.contains(l)).copied().collect();
    let free_a: Vec<usize> = a.legs.iter().filter(|l| !shared.contains(l)).copied().collect();
    let free_b: Vec<usize> = b.legs.iter().filter(|l| !shared.contains(l)).copied().collect();
    let order_a: Vec<usize> = free_a.iter().chain(&shared).copied().collect();
    let order_b: Vec<usize> = free_b.iter().chain(&shared).copied().collect();
    let ma = permute(a, &order_a, dim);
    let mb = permute(b, &order_b, dim);
    let s = checked_pow(dim, shared.len()) as usize;
    let rows = ma.len() / s;
    let cols = mb.len() / s;
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let ra = &ma[i * s..(i + 1) * s];
        for j in 0..cols {
            let rb = &mb[j * s..(j + 1) * s];
            let v = ra.iter().zip(rb).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
            data.push(v);
        }
    }
    Node { legs: free_a.into_iter().chain(free_b).collect(), data }
}

fn initial_legs(graph: &DiagramMultigraph) -> Vec<Vec<usize>> {
    let mut legs = vec![Vec::new(); graph.vertices()];
    let mut next = 0;
    for (a, b, k) in graph.edges() {
        for _ in 0..k {
            legs[a].push(next);
            legs[b].push(next);
            next += 1;
        }
    }
    legs
}

fn evaluate<T: Scalar>(dense_h: &[T], graph: &DiagramMultigraph, dim: usize) -> T {
    let legs = initial_legs(graph);
    let (steps, _, _) = plan(legs.clone(), dim);
    let mut nodes: Vec<Node<T>> = legs.into_iter().map(|l| Node { legs: l, data: dense_h.to_vec() }).collect();
    for Step { a, b } in steps {
        let nb = nodes.remove(b);
        nodes[a] = contract_nodes(&nodes[a], &nb, dim);
    }
    nodes.pop().map(|n| n.data[0].clone()).unwrap_or_else(T::zero)
}

fn dense_row_major<T: Scalar>(h: &SymmetricKernel<T>, cap: u128) -> Result<Vec<T>> {
    let dense = h.to_dense(Some(cap))?;
    let dim = h.dim();
    let mut data = vec![T::zero(); checked_pow(dim, h.order()) as usize];
    for (idx, v) in dense.iter() {
        let flat = idx.iter().fold(0usize, |acc, &i| acc * dim + i);
        data[flat] = v.clone();
    }
    Ok(data)
}

/// Block-identified coefficient sum of `h^{⊗m}` for any partition whose
/// multigraph is `graph` (every vertex must have degree `h.order()`).
pub fn diagram_value<T: Scalar>(h: &SymmetricKernel<T>, graph: &DiagramMultigraph, opts: &CumulantOptions) -> Result<T> {
    if !graph.is_regular(h.order() as u32) {
        return Err(Error::domain("diagram graph is not regular of the kernel's order"));
    }
    let dense = dense_row_major(h, opts.tensor_cap)?;
    let (_, work, largest) = plan(initial_legs(graph), h.dim());
    check_caps(work, largest, opts)?;
    Ok(evaluate(&dense, graph, h.dim()))
}

fn check_caps(work: u128, largest: u128, opts: &CumulantOptions) -> Result<()> {
    if largest > opts.tensor_cap {
        return Err(Error::CapExceeded { what: "cumulant intermediate tensor", requested: largest, cap: opts.tensor_cap });
    }
    if work > opts.work_cap {
        return Err(Error::CapExceeded { what: "cumulant work (reduce N or m)", requested: work, cap: opts.work_cap });
    }
    Ok(())
}

fn count_as_scalar<T: Scalar>(n: u128) -> T {
    let lo = T::from_count(n as u64);
    match (n >> 64) as u64 {
        0 => lo,
        hi => {
            let half = T::from_count(1 << 32);
            T::from_count(hi) * half.clone() * half + lo
        }
    }
}

/// `cum_m(I_q(h))` by the diagram formula.
///
/// Classes are evaluated in parallel and reduced in a fixed pairwise order,
/// so the result is bit-stable. `m = 1` gives 0 and `m = 2` gives
/// `q! ‖h‖²`; `Π(q[m])` is empty for odd `qm` and the result is 0.
pub fn exact_cumulant<T: Scalar>(h: &SymmetricKernel<T>, m: usize, opts: &CumulantOptions) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("cumulant order must be >= 1"));
    }
    let classes = diagram_classes(&GroupedIndexSet::uniform(h.order(), m)?)?;
    if classes.is_empty() {
        return Ok(T::zero());
    }
    let mut work: u128 = 0;
    let mut largest: u128 = 0;
    for c in &classes {
        let (_, w, l) = plan(initial_legs(&c.graph), h.dim());
        work = work.saturating_add(w);
        largest = largest.max(l);
    }
    check_caps(work, largest, opts)?;
    let dense = dense_row_major(h, opts.tensor_cap)?;
    let terms: Vec<T> = classes
        .par_iter()
        .map(|c| {
            count_as_scalar::<T>(c.count) * evaluate(&dense, &c.graph, h.dim())
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

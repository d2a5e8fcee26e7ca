//! Strongly connected components of a graph in compressed sparse row form.

use serde::{Deserialize, Serialize};

/// Components numbered in topological order: every edge between different
/// components goes from a smaller to a larger number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scc {
    /// Component of each vertex.
    pub component: Vec<u32>,
    pub sizes: Vec<u32>,
    /// At least two vertices, or a single vertex with a loop.
    pub essential: Vec<bool>,
}

impl Scc {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_essential_vertex(&self, v: usize) -> bool {
        self.essential[self.component[v] as usize]
    }
}

const UNVISITED: u32 = u32::MAX;

/// Iterative Tarjan. `offsets` has `n + 1` entries; the out-neighbors of `v`
/// are `targets[offsets[v]..offsets[v + 1]]`.
pub fn strongly_connected(offsets: &[usize], targets: &[u32]) -> Scc {
    let n = offsets.len() - 1;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut calls: Vec<(u32, usize)> = Vec::new();
    let mut finish = vec![0u32; n];
    let mut count = 0u32;
    let mut next = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        calls.push((root as u32, offsets[root]));

        while let Some(top) = calls.last_mut() {
            let v = top.0 as usize;
            if top.1 < offsets[v + 1] {
                let w = targets[top.1] as usize;
                top.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    calls.push((w as u32, offsets[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("v is on the stack") as usize;
                    on_stack[w] = false;
                    finish[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
            if let Some(&(p, _)) = calls.last() {
                let p = p as usize;
                low[p] = low[p].min(low[v]);
            }
        }
    }

    // Tarjan completes sinks first; reverse for topological order.
    let component: Vec<u32> = finish.iter().map(|&c| count - 1 - c).collect();
    let mut sizes = vec![0u32; count as usize];
    for &c in &component {
        sizes[c as usize] += 1;
    }
    let mut essential: Vec<bool> = sizes.iter().map(|&s| s >= 2).collect();
    for v in 0..n {
        if targets[offsets[v]..offsets[v + 1]].contains(&(v as u32)) {
            essential[component[v] as usize] = true;
        }
    }
    Scc {
        component,
        sizes,
        essential,
    }
}

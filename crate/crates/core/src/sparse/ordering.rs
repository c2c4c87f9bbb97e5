//! Fill-reducing orderings on the symmetrized graph of a sparse matrix.

use crate::scalar::Real;

use super::CsrMatrix;

const LEAF_SIZE: usize = 24;

/// Adjacency lists of the pattern of `A + Aᵀ` without the diagonal.
pub fn symmetric_graph<T: Real>(a: &CsrMatrix<T>) -> Vec<Vec<usize>> {
    let n = a.n_rows();
    let mut adj = vec![Vec::new(); n];
    for r in 0..n {
        for (c, _) in a.row(r) {
            if c != r && c < n {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Nested dissection by recursive BFS level-set bisection.
///
/// Returns `perm` with `perm[k]` the original index eliminated at step `k`.
/// Each part is ordered before the separator that splits it, so separators
/// end up last. Deterministic for a given graph.
pub fn nested_dissection(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut region = vec![0usize; n];
    let mut level = vec![usize::MAX; n];
    let mut next_region = 1usize;

    enum Task {
        Split(Vec<usize>),
        Emit(Vec<usize>),
    }
    let mut tasks = vec![Task::Split((0..n).collect())];
    while let Some(task) = tasks.pop() {
        let set = match task {
            Task::Emit(set) => {
                order.extend(set);
                continue;
            }
            Task::Split(set) => set,
        };
        if set.len() <= LEAF_SIZE {
            order.extend(set);
            continue;
        }
        let id = next_region;
        next_region += 1;
        for &v in &set {
            region[v] = id;
        }

        let root = pseudo_peripheral(adj, &region, id, set[0], &mut level);
        let (visited, depth) = bfs_levels(adj, &region, id, root, &mut level);
        if visited.len() < set.len() {
            // disconnected: split off the reached component without a separator
            let rest: Vec<usize> = set.iter().copied().filter(|&v| level[v] == usize::MAX).collect();
            for &v in &visited {
                level[v] = usize::MAX;
            }
            tasks.push(Task::Split(rest));
            tasks.push(Task::Split(visited));
            continue;
        }
        if depth < 2 {
            for &v in &visited {
                level[v] = usize::MAX;
            }
            order.extend(set);
            continue;
        }

        let mut counts = vec![0usize; depth + 1];
        for &v in &visited {
            counts[level[v]] += 1;
        }
        let half = set.len() / 2;
        let mut acc = 0;
        let mut mid = 1;
        for (l, &c) in counts.iter().enumerate() {
            acc += c;
            if acc >= half {
                mid = l.clamp(1, depth - 1);
                break;
            }
        }

        let mut part_a = Vec::new();
        let mut part_b = Vec::new();
        let mut sep = Vec::new();
        for &v in &set {
            let l = level[v];
            if l < mid {
                part_a.push(v);
            } else if l > mid {
                part_b.push(v);
            } else if adj[v].iter().any(|&w| region[w] == id && level[w] == mid + 1) {
                sep.push(v);
            } else {
                // touches nothing on the far side, so it can join the near part
                part_a.push(v);
            }
        }
        for &v in &set {
            level[v] = usize::MAX;
        }
        tasks.push(Task::Emit(sep));
        tasks.push(Task::Split(part_b));
        tasks.push(Task::Split(part_a));
    }
    order
}

fn bfs_levels(adj: &[Vec<usize>], region: &[usize], id: usize, root: usize, level: &mut [usize]) -> (Vec<usize>, usize) {
    let mut queue = vec![root];
    level[root] = 0;
    let mut head = 0;
    let mut depth = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in &adj[v] {
            if region[w] == id && level[w] == usize::MAX {
                level[w] = level[v] + 1;
                depth = depth.max(level[w]);
                queue.push(w);
            }
        }
    }
    (queue, depth)
}

fn pseudo_peripheral(adj: &[Vec<usize>], region: &[usize], id: usize, start: usize, level: &mut [usize]) -> usize {
    let mut root = start;
    let mut best_depth = 0;
    for _ in 0..4 {
        let (visited, depth) = bfs_levels(adj, region, id, root, level);
        // among the deepest vertices pick the one of minimum degree
        let far = visited.iter().copied().filter(|&v| level[v] == depth).min_by_key(|&v| adj[v].len()).unwrap_or(root);
        for &v in &visited {
            level[v] = usize::MAX;
        }
        if depth <= best_depth {
            break;
        }
        best_depth = depth;
        root = far;
    }
    root
}

//! Girth of bipartite check/variable graphs by per-vertex breadth-first
//! search. Returns None for forests.

use std::collections::VecDeque;

use crate::binmat::BinaryMatrix;

/// Girth of the Tanner graph whose checks are the matrix rows and whose
/// variables are its columns.
pub fn tanner_girth(m: &BinaryMatrix) -> Option<usize> {
    let supports: Vec<Vec<usize>> = (0..m.rows()).map(|r| m.row_support(r)).collect();
    girth_from_supports(&supports, m.cols())
}

/// Same, from explicit per-check variable lists.
pub fn girth_from_supports(supports: &[Vec<usize>], var_count: usize) -> Option<usize> {
    let check_count = supports.len();
    let vertex_count = check_count + var_count;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); vertex_count];
    for (c, support) in supports.iter().enumerate() {
        for &v in support {
            debug_assert!(v < var_count);
            adj[c].push((check_count + v) as u32);
            adj[check_count + v].push(c as u32);
        }
    }

    // Every cycle passes through a check, so roots range over checks only.
    // The graph is simple and bipartite, hence girth 4 is the floor.
    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; vertex_count];
    let mut parent = vec![u32::MAX; vertex_count];
    let mut queue = VecDeque::new();
    for root in 0..check_count {
        dist.fill(u32::MAX);
        parent.fill(u32::MAX);
        queue.clear();
        dist[root] = 0;
        queue.push_back(root as u32);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize] as usize;
            // Any cycle first detected from depth du has length >= 2du+1.
            if 2 * du >= best {
                break;
            }
            for &w in &adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du as u32 + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                } else if parent[u as usize] != w {
                    best = best.min(du + dist[w as usize] as usize + 1);
                }
            }
        }
        if best == 4 {
            return Some(4);
        }
    }
    (best != usize::MAX).then_some(best)
}

//! Fast non-dominated sorting.

use super::dominance::constrained_dominates_unchecked;

/// Partitions members into fronts by constrained dominance; front 0 holds
/// the members dominated by none. Indices within a front are ascending.
pub fn nondominated_sort(objectives: &[Vec<f64>], violations: &[f64]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if constrained_dominates_unchecked(
                &objectives[i],
                violations[i],
                &objectives[j],
                violations[j],
            ) {
                dominates[i].push(j);
                dominated_by_count[j] += 1;
            } else if constrained_dominates_unchecked(
                &objectives[j],
                violations[j],
                &objectives[i],
                violations[i],
            ) {
                dominates[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Rank of every member (index of its front).
pub fn ranks(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut rank = vec![0; n];
    for (r, front) in fronts.iter().enumerate() {
        for &i in front {
            rank[i] = r;
        }
    }
    rank
}

//! Crowding distance.

/// Crowding distance of each member of `front` (objective vectors).
///
/// Boundary members of every objective get `+∞`; an objective whose values
/// are all equal contributes nothing.
pub fn crowding_distance(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        // stable on ties so permuted input yields the same distances for
        // distinct values
        order.sort_by(|&a, &b| front[a][k].total_cmp(&front[b][k]));
        let lo = front[order[0]][k];
        let hi = front[order[n - 1]][k];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        if hi <= lo {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if distance[i].is_finite() {
                distance[i] += (front[order[w + 1]][k] - front[order[w - 1]][k]) / (hi - lo);
            }
        }
    }
    distance
}

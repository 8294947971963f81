//! Exact two-objective hypervolume.

/// Area dominated by `points` and bounded by `reference`, minimization.
///
/// Points not strictly better than the reference in both objectives add
/// nothing and are ignored.
pub fn hypervolume_2d(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let mut pts: Vec<[f64; 2]> = points
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    // sweep in ascending f1; each point that lowers the running f2 minimum
    // adds the slab between its f2 and the previous minimum
    for p in &pts {
        if p[1] >= ceiling {
            continue;
        }
        area += (reference[0] - p[0]) * (ceiling - p[1]);
        ceiling = p[1];
    }
    area
}

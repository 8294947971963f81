//! Oracle suites shared by the core tests and the acceptance report. Each
//! returns a one-line summary on success and the first mismatch otherwise.

use chpeed_core::metrics::wilcoxon_signed_rank;
use chpeed_core::moea::indicator::INDICATOR_REFERENCE;
use chpeed_core::moea::{
    assign_fitness, crowding_distance, hypervolume_2d, indicator_ihd, nondominated_sort,
};
use chpeed_core::system::bundled;
use chpeed_core::ForPolygon;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn hypervolume_vs_monte_carlo() -> Outcome {
    let reference = [1.1, 1.1];
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    for size in [1, 3, 8] {
        let set: Vec<[f64; 2]> = (0..size)
            .map(|_| {
                let x: f64 = rng.random_range(0.0..1.0);
                [x, (1.0 - x) * rng.random_range(0.3..1.0)]
            })
            .collect();
        let exact = hypervolume_2d(&set, reference);
        let samples = 4_000_000;
        let hits = (0..samples)
            .filter(|_| {
                let (x, y) = (rng.random_range(0.0..1.1), rng.random_range(0.0..1.1));
                set.iter().any(|p| p[0] <= x && p[1] <= y)
            })
            .count();
        let estimate = 1.21 * hits as f64 / samples as f64;
        worst = worst.max((estimate - exact).abs());
    }
    check(worst < 1e-3, || format!("hypervolume off by {worst:e}"))?;
    Ok(format!("max |exact - MC| {worst:.1e}"))
}

fn pareto(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Feasible beats infeasible, smaller violation beats larger, equal
/// violation falls back to Pareto dominance.
fn beats(a: &[f64], va: f64, b: &[f64], vb: f64) -> bool {
    let va = if va <= 1e-9 { 0.0 } else { va };
    let vb = if vb <= 1e-9 { 0.0 } else { vb };
    va < vb || (va == vb && pareto(a, b))
}

pub fn sorting_vs_peeling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for case in 0..100 {
        let m = 2 + case % 2;
        let objs: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..m).map(|_| rng.random_range(0..8) as f64).collect())
            .collect();
        let viol: Vec<f64> = (0..50)
            .map(|_| {
                if rng.random_bool(0.7) {
                    0.0
                } else {
                    rng.random_range(0..4) as f64
                }
            })
            .collect();

        let mut expected: Vec<Vec<usize>> = Vec::new();
        let mut left: Vec<usize> = (0..50).collect();
        while !left.is_empty() {
            let front: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&i| {
                    !left
                        .iter()
                        .any(|&j| beats(&objs[j], viol[j], &objs[i], viol[i]))
                })
                .collect();
            left.retain(|i| !front.contains(i));
            expected.push(front);
        }

        let mut got = nondominated_sort(&objs, &viol);
        for f in &mut got {
            f.sort_unstable();
        }
        check(got == expected, || {
            format!("population {case} sorts differently")
        })?;
    }
    Ok("100 populations of 50 identical".into())
}

pub fn incremental_fitness_vs_recomputation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = 30;
        let mut objs: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.random_range(0.0..100.0), rng.random_range(-5.0..5.0)])
            .collect();
        objs[1] = objs[0].clone();
        let viol: Vec<f64> = (0..n)
            .map(|i| {
                if i % 7 == 3 {
                    rng.random_range(1.0..10.0)
                } else {
                    0.0
                }
            })
            .collect();

        // bounds over the feasible members only
        let feasible: Vec<&Vec<f64>> = objs
            .iter()
            .zip(&viol)
            .filter(|(_, v)| **v == 0.0)
            .map(|(o, _)| o)
            .collect();
        let lo = |k: usize| feasible.iter().map(|o| o[k]).fold(f64::INFINITY, f64::min);
        let hi = |k: usize| {
            feasible
                .iter()
                .map(|o| o[k])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let norm: Vec<[f64; 2]> = objs
            .iter()
            .map(|o| {
                [
                    (o[0] - lo(0)) / (hi(0) - lo(0)),
                    (o[1] - lo(1)) / (hi(1) - lo(1)),
                ]
            })
            .collect();
        let r = [INDICATOR_REFERENCE; 2];
        let ind = |i: usize, j: usize| indicator_ihd(&[norm[i]], &[norm[j]], r);
        let mut scale: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    scale = scale.max(ind(i, j).abs());
                }
            }
        }

        let kappa = 0.05;
        let mut table = assign_fitness(&objs, &viol, kappa, INDICATOR_REFERENCE);
        check((table.scale() - scale).abs() <= 1e-12 * scale, || {
            format!("scale {} vs {scale}", table.scale())
        })?;
        let mut alive = vec![true; n];
        while alive.iter().filter(|a| **a).count() > 10 {
            let full: Vec<f64> = (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&i| i != j && alive[i])
                        .map(|i| (-ind(i, j) / (scale * kappa)).exp())
                        .sum()
                })
                .collect();
            for j in (0..n).filter(|&j| alive[j]) {
                let err = (table.fitness()[j] - full[j]).abs() / full[j].abs().max(1.0);
                worst = worst.max(err);
            }
            let worst_member = table.worst().unwrap();
            let max = (0..n)
                .filter(|&j| alive[j])
                .map(|j| full[j])
                .fold(f64::NEG_INFINITY, f64::max);
            check(
                (full[worst_member] - max).abs() <= 1e-9 * max.abs().max(1.0),
                || format!("removed {worst_member}, which is not the worst"),
            )?;
            table.remove(worst_member);
            alive[worst_member] = false;
        }
    }
    check(worst <= 1e-9, || format!("fitness drifted by {worst:e}"))?;
    Ok(format!("max relative drift {worst:.1e}"))
}

pub fn crowding_vs_hand_computed() -> Outcome {
    let inf = f64::INFINITY;
    let cases: Vec<(Vec<Vec<f64>>, Vec<f64>)> = vec![
        (vec![vec![1.0, 2.0]], vec![inf]),
        (vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![inf, inf]),
        (
            vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]],
            vec![inf, 2.0, inf],
        ),
        (
            vec![
                vec![0.0, 10.0],
                vec![1.0, 6.0],
                vec![4.0, 4.0],
                vec![5.0, 1.0],
                vec![10.0, 0.0],
            ],
            vec![inf, 0.4 + 0.6, 0.4 + 0.5, 0.6 + 0.4, inf],
        ),
        (
            vec![
                vec![3.0, 5.0],
                vec![1.0, 5.0],
                vec![4.0, 5.0],
                vec![2.0, 5.0],
            ],
            vec![2.0 / 3.0, inf, inf, 2.0 / 3.0],
        ),
    ];
    for (front, expected) in &cases {
        let got = crowding_distance(front);
        check(&got == expected, || {
            format!("{front:?}: {got:?} vs {expected:?}")
        })?;
    }
    Ok(format!("{} fronts exact", cases.len()))
}

fn enumerate_p(diffs: &[f64]) -> f64 {
    let nz: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    let n = nz.len();
    if n == 0 {
        return 1.0;
    }
    let mags: Vec<f64> = nz.iter().map(|d| d.abs()).collect();
    let ranks: Vec<f64> = mags
        .iter()
        .map(|m| {
            let less = mags.iter().filter(|x| *x < m).count() as f64;
            let equal = mags.iter().filter(|x| *x == m).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = nz
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let (mut lower, mut upper) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if w <= observed {
            lower += 1;
        }
        if w >= observed {
            upper += 1;
        }
    }
    (2.0 * lower.min(upper) as f64 / (1u64 << n) as f64).min(1.0)
}

pub fn wilcoxon_vs_enumeration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cases = 0;
    for n in 1..=10 {
        for _ in 0..40 {
            let diffs: Vec<f64> = (0..n).map(|_| rng.random_range(-4i32..=4) as f64).collect();
            let pairs: Vec<(f64, f64)> = diffs.iter().map(|d| (*d, 0.0)).collect();
            let got = wilcoxon_signed_rank(&pairs, 0.05).p_value;
            let expected = enumerate_p(&diffs);
            check(got == expected, || {
                format!("{diffs:?}: p {got} vs {expected}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} samples exact"))
}

fn boundary_distance(poly: &ForPolygon, q: [f64; 2]) -> f64 {
    let v = poly.vertices();
    let d = |a: [f64; 2]| (a[0] - q[0]).hypot(a[1] - q[1]);
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let mut best = f64::INFINITY;
    for k in 0..v.len() {
        let (a, b) = (v[k], v[(k + 1) % v.len()]);
        // coarse pass, then a dense pass around the best coarse sample
        let coarse: usize = 2000;
        let (mut arg, mut val) = (0usize, f64::INFINITY);
        for s in 0..=coarse {
            let dd = d(lerp(a, b, s as f64 / coarse as f64));
            if dd < val {
                (arg, val) = (s, dd);
            }
        }
        let lo = arg.saturating_sub(1) as f64 / coarse as f64;
        let hi = (arg + 1).min(coarse) as f64 / coarse as f64;
        let fine = 200_000;
        for s in 0..=fine {
            best = best.min(d(lerp(a, b, lo + (hi - lo) * s as f64 / fine as f64)));
        }
    }
    best
}

pub fn projection_vs_boundary_sampling() -> Outcome {
    let regions: Vec<ForPolygon> = [bundled::system1(), bundled::system2(), bundled::system3()]
        .into_iter()
        .flat_map(|s| s.cogen_units.into_iter().map(|u| u.region))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut outside = 0;
    for poly in &regions {
        let (pr, hr) = (poly.power_range(), poly.heat_range());
        for _ in 0..20 {
            let q = [
                rng.random_range(pr.lo - 50.0..pr.hi + 50.0),
                rng.random_range(hr.lo - 50.0..hr.hi + 50.0),
            ];
            let p = poly.project(q);
            if poly.contains(q) {
                check(p == q, || format!("interior point {q:?} moved to {p:?}"))?;
                continue;
            }
            outside += 1;
            let got = (p[0] - q[0]).hypot(p[1] - q[1]);
            worst = worst.max((got - boundary_distance(poly, q)).abs());
        }
    }
    check(worst < 1e-6, || {
        format!("projection distance off by {worst:e}")
    })?;
    Ok(format!("{outside} exterior points, max gap {worst:.1e}"))
}

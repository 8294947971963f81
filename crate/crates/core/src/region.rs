//! Heat–power feasible operating regions of cogeneration units.
//!
//! A region is a simple polygon in the (power MW, heat MWth) plane, stored
//! counter-clockwise. Regions from the benchmark literature are either convex
//! or carry a shallow notch; every region accepted here must be monotone along
//! both axes so that a horizontal or vertical line meets it in one interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative boundary tolerance; multiplied by the polygon's coordinate scale.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// A `(power, heat)` operating point.
pub type OperatingPoint = [f64; 2];

/// Closed interval `[lo, hi]`, possibly degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.lo - tol && value <= self.hi + tol
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Feasible operating region of a cogeneration unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ForPolygon {
    vertices: Vec<OperatingPoint>,
    convex: bool,
    power_range: Interval,
    heat_range: Interval,
    tol: f64,
}

impl TryFrom<Vec<[f64; 2]>> for ForPolygon {
    type Error = Error;

    fn try_from(vertices: Vec<[f64; 2]>) -> Result<Self> {
        ForPolygon::new(vertices)
    }
}

impl From<ForPolygon> for Vec<[f64; 2]> {
    fn from(poly: ForPolygon) -> Self {
        poly.vertices
    }
}

fn cross(o: OperatingPoint, a: OperatingPoint, b: OperatingPoint) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: OperatingPoint, b: OperatingPoint) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Nearest point to `q` on segment `ab`.
fn closest_on_segment(a: OperatingPoint, b: OperatingPoint, q: OperatingPoint) -> OperatingPoint {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    [a[0] + t * d[0], a[1] + t * d[1]]
}

fn segments_intersect(
    a: OperatingPoint,
    b: OperatingPoint,
    c: OperatingPoint,
    d: OperatingPoint,
) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: OperatingPoint, q: OperatingPoint, r: OperatingPoint| {
        r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    (d1 == 0.0 && on(c, d, a))
        || (d2 == 0.0 && on(c, d, b))
        || (d3 == 0.0 && on(a, b, c))
        || (d4 == 0.0 && on(a, b, d))
}

/// Number of direction reversals along one axis while walking the closed boundary.
fn axis_reversals(vertices: &[OperatingPoint], axis: usize) -> usize {
    let n = vertices.len();
    let signs: Vec<f64> = (0..n)
        .map(|i| vertices[(i + 1) % n][axis] - vertices[i][axis])
        .filter(|d| *d != 0.0)
        .map(f64::signum)
        .collect();
    (0..signs.len())
        .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
        .count()
}

impl ForPolygon {
    /// Validates and normalizes a vertex ring. Clockwise input is reversed.
    pub fn new(mut vertices: Vec<OperatingPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Region(format!("need at least 3 vertices, got {n}")));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Region("vertex coordinates must be finite".into()));
        }
        let scale = vertices
            .iter()
            .flatten()
            .fold(1.0_f64, |m, c| m.max(c.abs()));
        let tol = BOUNDARY_TOLERANCE * scale;
        for i in 0..n {
            if dist(vertices[i], vertices[(i + 1) % n]) <= tol {
                return Err(Error::Region(format!(
                    "repeated consecutive vertex at index {i}"
                )));
            }
        }

        let twice_area: f64 = (0..n)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum();
        if twice_area.abs() <= tol * scale {
            return Err(Error::Region("polygon has zero area".into()));
        }
        if twice_area < 0.0 {
            vertices[1..].reverse();
        }

        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(
                    vertices[i],
                    vertices[(i + 1) % n],
                    vertices[j],
                    vertices[(j + 1) % n],
                ) {
                    return Err(Error::Region(format!("edges {i} and {j} intersect")));
                }
            }
        }

        if axis_reversals(&vertices, 0) != 2 || axis_reversals(&vertices, 1) != 2 {
            return Err(Error::Region(
                "region must be monotone in both power and heat (a line of constant power or heat must cut it in one interval)".into(),
            ));
        }

        let convex = (0..n).all(|i| {
            cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) >= -tol * scale
        });
        let range = |axis: usize| {
            let (lo, hi) = vertices
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v[axis]), hi.max(v[axis]))
                });
            Interval { lo, hi }
        };
        Ok(ForPolygon {
            power_range: range(0),
            heat_range: range(1),
            vertices,
            convex,
            tol,
        })
    }

    /// Vertices in counter-clockwise order.
    pub fn vertices(&self) -> &[OperatingPoint] {
        &self.vertices
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Power span over all vertices.
    pub fn power_range(&self) -> Interval {
        self.power_range
    }

    /// Heat span over all vertices.
    pub fn heat_range(&self) -> Interval {
        self.heat_range
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn edges(&self) -> impl Iterator<Item = (OperatingPoint, OperatingPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Area centroid.
    pub fn centroid(&self) -> OperatingPoint {
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for (p, q) in self.edges() {
            let w = p[0] * q[1] - q[0] * p[1];
            a += w;
            cx += (p[0] + q[0]) * w;
            cy += (p[1] + q[1]) * w;
        }
        [cx / (3.0 * a), cy / (3.0 * a)]
    }

    /// Inside-or-on-boundary test.
    pub fn contains(&self, point: OperatingPoint) -> bool {
        let tol = self.tol;
        if !self.power_range.contains(point[0], tol) || !self.heat_range.contains(point[1], tol) {
            return false;
        }
        if self.convex {
            return self
                .edges()
                .all(|(a, b)| cross(a, b, point) / dist(a, b) >= -tol);
        }
        if self.boundary_distance(point) <= tol {
            return true;
        }
        // crossing number
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > point[1]) != (b[1] > point[1]) {
                let x = a[0] + (point[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if point[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn nearest_boundary_point(&self, point: OperatingPoint) -> OperatingPoint {
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let c = closest_on_segment(a, b, point);
            let d = dist(c, point);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    }

    fn boundary_distance(&self, point: OperatingPoint) -> f64 {
        dist(point, self.nearest_boundary_point(point))
    }

    /// Euclidean-nearest point of the region; identity for points inside.
    pub fn project(&self, point: OperatingPoint) -> OperatingPoint {
        if self.contains(point) {
            point
        } else {
            self.nearest_boundary_point(point)
        }
    }

    /// Distance from `point` to the region, zero inside.
    pub fn exceedance(&self, point: OperatingPoint) -> f64 {
        if self.contains(point) {
            0.0
        } else {
            self.boundary_distance(point)
        }
    }

    fn cut(&self, axis: usize, value: f64) -> Option<Interval> {
        let other = 1 - axis;
        let range = if axis == 0 {
            self.power_range
        } else {
            self.heat_range
        };
        if !range.contains(value, self.tol) {
            return None;
        }
        let value = range.clamp(value);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (amin, amax) = (a[axis].min(b[axis]), a[axis].max(b[axis]));
            if value < amin || value > amax {
                continue;
            }
            if a[axis] == b[axis] {
                lo = lo.min(a[other].min(b[other]));
                hi = hi.max(a[other].max(b[other]));
            } else {
                let t = (value - a[axis]) / (b[axis] - a[axis]);
                let x = a[other] + t * (b[other] - a[other]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Feasible power interval at fixed heat, `None` outside the heat range.
    pub fn power_bounds_at_heat(&self, heat: f64) -> Option<Interval> {
        self.cut(1, heat)
    }

    /// Feasible heat interval at fixed power, `None` outside the power range.
    pub fn heat_bounds_at_power(&self, power: f64) -> Option<Interval> {
        self.cut(0, power)
    }
}

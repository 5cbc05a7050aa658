//! Exact angles among vertices of a regular n-gon, optionally with its
//! center. Every angle is a multiple of π/(2n) and is computed from index
//! arithmetic alone.

use crate::angle::{CensusMode, Degenerate, PiRational};
use crate::exact::Orientation;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CyclicPoint {
    Center,
    Vertex(u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("a census needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("polygon order must be at least 3, got {0}")]
    BadOrder(u32),
    #[error("vertex {index} out of range for a {n}-gon")]
    VertexOutOfRange { index: u32, n: u32 },
}

/// A subset of the vertices of the regular n-gon `V_k = (cos 2πk/n, sin 2πk/n)`,
/// plus the origin when `include_center` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicConfig {
    n: u32,
    vertices: Vec<u32>,
    include_center: bool,
}

impl CyclicConfig {
    /// Vertices are deduplicated and sorted.
    pub fn new(n: u32, vertices: impl IntoIterator<Item = u32>, include_center: bool) -> Result<Self, CyclicError> {
        if n < 3 {
            return Err(CyclicError::BadOrder(n));
        }
        let mut vertices: Vec<u32> = vertices.into_iter().collect();
        if let Some(&index) = vertices.iter().find(|&&v| v >= n) {
            return Err(CyclicError::VertexOutOfRange { index, n });
        }
        vertices.sort_unstable();
        vertices.dedup();
        let len = vertices.len() + usize::from(include_center);
        if len < 3 {
            return Err(CyclicError::TooFewPoints(len));
        }
        Ok(CyclicConfig { n, vertices, include_center })
    }

    pub fn full(n: u32, include_center: bool) -> Result<Self, CyclicError> {
        CyclicConfig::new(n, 0..n, include_center)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn include_center(&self) -> bool {
        self.include_center
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + usize::from(self.include_center)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in canonical order: vertices ascending, then the center.
    pub fn points(&self) -> Vec<CyclicPoint> {
        let mut pts: Vec<CyclicPoint> = self.vertices.iter().map(|&v| CyclicPoint::Vertex(v)).collect();
        if self.include_center {
            pts.push(CyclicPoint::Center);
        }
        pts
    }

    /// The same configuration with every index shifted by `k`.
    pub fn rotated(&self, k: u32) -> CyclicConfig {
        let vs = self.vertices.iter().map(|&v| (v + k) % self.n);
        CyclicConfig::new(self.n, vs, self.include_center).expect("rotation preserves validity")
    }

    pub fn coordinates_f64(&self) -> Vec<(f64, f64)> {
        self.points().iter().map(|p| point_f64(*p, self.n)).collect()
    }
}

pub fn point_f64(p: CyclicPoint, n: u32) -> (f64, f64) {
    match p {
        CyclicPoint::Center => (0.0, 0.0),
        CyclicPoint::Vertex(k) => {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (t.cos(), t.sin())
        }
    }
}

fn steps(from: u32, to: u32, n: u32) -> u32 {
    (to + n - from % n) % n
}

fn pi_frac(num: u32, den: u32) -> PiRational {
    PiRational::new(num as i64, den as i64).expect("cyclic angles lie in [0, π]")
}

/// Angle at vertex `q` subtending vertices `p` and `r`: `m·π/n` where `m`
/// counts the steps of the arc from `p` to `r` that avoids `q`.
pub fn inscribed_angle(p: u32, q: u32, r: u32, n: u32) -> PiRational {
    let pq = steps(p, q, n);
    let pr = steps(p, r, n);
    // arc p→r counter-clockwise avoids q iff q is not strictly inside it
    let m = if pq > pr { pr } else { n - pr };
    pi_frac(m, n)
}

/// Angle at the center between vertices `p` and `r`.
pub fn central_angle(p: u32, r: u32, n: u32) -> Result<PiRational, Degenerate> {
    let d = steps(p, r, n);
    let d = d.min(n - d);
    if 2 * d == n {
        Err(Degenerate::Pi)
    } else {
        Ok(pi_frac(2 * d, n))
    }
}

/// Angle at vertex `p` in the triangle (center, `V_p`, `V_r`).
pub fn base_angle(p: u32, r: u32, n: u32) -> Result<PiRational, Degenerate> {
    let d = steps(p, r, n);
    let d = d.min(n - d);
    if 2 * d == n {
        Err(Degenerate::Zero)
    } else {
        Ok(pi_frac(n - 2 * d, 2 * n))
    }
}

/// Angle at `b` between `a` and `c`, all distinct points of the same n-gon
/// configuration.
pub fn cyclic_angle(a: CyclicPoint, b: CyclicPoint, c: CyclicPoint, n: u32) -> Result<PiRational, Degenerate> {
    use CyclicPoint::*;
    match (a, b, c) {
        (Vertex(p), Vertex(q), Vertex(r)) => Ok(inscribed_angle(p, q, r, n)),
        (Vertex(p), Center, Vertex(r)) => central_angle(p, r, n),
        (Center, Vertex(q), Vertex(r)) | (Vertex(r), Vertex(q), Center) => base_angle(q, r, n),
        _ => unreachable!("repeated center in a cyclic triple"),
    }
}

/// Exact orientation of three distinct cyclic points.
pub fn cyclic_orientation(a: CyclicPoint, b: CyclicPoint, c: CyclicPoint, n: u32) -> Orientation {
    use CyclicPoint::*;
    match (a, b, c) {
        (Vertex(p), Vertex(q), Vertex(r)) => {
            if steps(p, q, n) < steps(p, r, n) {
                Orientation::CounterClockwise
            } else {
                Orientation::Clockwise
            }
        }
        (Center, Vertex(p), Vertex(q)) => {
            let d = steps(p, q, n);
            if 2 * d == n {
                Orientation::Collinear
            } else if 2 * d < n {
                Orientation::CounterClockwise
            } else {
                Orientation::Clockwise
            }
        }
        // cyclic shifts preserve orientation
        (Vertex(_), Center, Vertex(_)) => cyclic_orientation(b, c, a, n),
        (Vertex(_), Vertex(_), Center) => cyclic_orientation(c, a, b, n),
        _ => unreachable!("repeated center in a cyclic triple"),
    }
}

/// A census value together with the first triple `(a, vertex, c)` found
/// to realise it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicWitnessed {
    pub value: PiRational,
    pub witness: [CyclicPoint; 3],
}

pub fn census_cyclic(cfg: &CyclicConfig, mode: CensusMode) -> Vec<PiRational> {
    census_cyclic_witnessed(cfg, mode).into_iter().map(|w| w.value).collect()
}

/// Distinct angle set with one witness per value, sorted by value.
pub fn census_cyclic_witnessed(cfg: &CyclicConfig, mode: CensusMode) -> Vec<CyclicWitnessed> {
    let pts = cfg.points();
    let n = cfg.n;
    let mut found: BTreeMap<PiRational, [CyclicPoint; 3]> = BTreeMap::new();
    for (bi, &b) in pts.iter().enumerate() {
        for (ai, &a) in pts.iter().enumerate() {
            if ai == bi {
                continue;
            }
            for (ci, &c) in pts.iter().enumerate().skip(ai + 1) {
                if ci == bi {
                    continue;
                }
                let value = match cyclic_angle(a, b, c, n) {
                    Ok(v) => v,
                    Err(Degenerate::Zero) if mode.includes_zero() => PiRational::ZERO,
                    Err(_) => continue,
                };
                found.entry(value).or_insert([a, b, c]);
            }
        }
    }
    found.into_iter().map(|(value, witness)| CyclicWitnessed { value, witness }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: i64, d: i64) -> PiRational {
        PiRational::new(n, d).unwrap()
    }

    fn angle_from_coords(a: CyclicPoint, b: CyclicPoint, c: CyclicPoint, n: u32) -> f64 {
        let (a, b, c) = (point_f64(a, n), point_f64(b, n), point_f64(c, n));
        let (ux, uy, vx, vy) = (a.0 - b.0, a.1 - b.1, c.0 - b.0, c.1 - b.1);
        (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy)
    }

    #[test]
    fn inscribed_examples() {
        assert_eq!(inscribed_angle(0, 2, 4, 5), pr(1, 5));
        assert_eq!(inscribed_angle(0, 1, 2, 5), pr(3, 5));
        assert_eq!(inscribed_angle(0, 1, 2, 4), pr(1, 2));
    }

    #[test]
    fn central_and_base_examples() {
        assert_eq!(central_angle(0, 1, 4), Ok(pr(1, 2)));
        assert_eq!(central_angle(0, 2, 4), Err(Degenerate::Pi));
        assert_eq!(central_angle(0, 2, 6), Ok(pr(2, 3)));
        assert_eq!(base_angle(0, 1, 4), Ok(pr(1, 4)));
        assert_eq!(base_angle(0, 1, 6), Ok(pr(1, 3)));
        assert_eq!(base_angle(0, 4, 8), Err(Degenerate::Zero));
    }

    #[test]
    fn census_examples() {
        let pent = CyclicConfig::full(5, false).unwrap();
        assert_eq!(census_cyclic(&pent, CensusMode::ExcludeZero), vec![pr(1, 5), pr(2, 5), pr(3, 5)]);
        let sq = CyclicConfig::full(4, true).unwrap();
        assert_eq!(census_cyclic(&sq, CensusMode::ExcludeZero), vec![pr(1, 4), pr(1, 2)]);
        assert_eq!(
            census_cyclic(&sq, CensusMode::IncludeZero),
            vec![PiRational::ZERO, pr(1, 4), pr(1, 2)]
        );
    }

    #[test]
    fn too_few_points() {
        assert_eq!(CyclicConfig::new(5, [0, 1], false), Err(CyclicError::TooFewPoints(2)));
        assert!(CyclicConfig::new(5, [0, 1], true).is_ok());
        assert!(CyclicConfig::new(5, [0, 7], true).is_err());
    }

    #[test]
    fn every_triple_matches_coordinates() {
        for n in 3..=12u32 {
            let cfg = CyclicConfig::full(n, true).unwrap();
            let pts = cfg.points();
            for &a in &pts {
                for &b in &pts {
                    for &c in &pts {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        let f = angle_from_coords(a, b, c, n);
                        let exact = match cyclic_angle(a, b, c, n) {
                            Ok(v) => v.to_f64(),
                            Err(Degenerate::Zero) => 0.0,
                            Err(Degenerate::Pi) => std::f64::consts::PI,
                        };
                        assert!((f - exact).abs() < 1e-9, "n={n} {a:?} {b:?} {c:?}: {f} vs {exact}");
                        let (pa, pb, pc) = (point_f64(a, n), point_f64(b, n), point_f64(c, n));
                        let cross = (pb.0 - pa.0) * (pc.1 - pa.1) - (pb.1 - pa.1) * (pc.0 - pa.0);
                        let expected = if cross.abs() < 1e-9 {
                            Orientation::Collinear
                        } else if cross > 0.0 {
                            Orientation::CounterClockwise
                        } else {
                            Orientation::Clockwise
                        };
                        assert_eq!(cyclic_orientation(a, b, c, n), expected, "n={n} {a:?} {b:?} {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_angles_sum_to_pi() {
        for n in 3..=16u32 {
            let cfg = CyclicConfig::full(n, true).unwrap();
            let pts = cfg.points();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    for k in j + 1..pts.len() {
                        let (a, b, c) = (pts[i], pts[j], pts[k]);
                        let angles = [cyclic_angle(b, a, c, n), cyclic_angle(a, b, c, n), cyclic_angle(a, c, b, n)];
                        if angles.iter().any(|x| x.is_err()) {
                            continue;
                        }
                        let sum = angles.iter().fold(Some(PiRational::ZERO), |acc, x| {
                            acc.and_then(|s| s.checked_add(x.as_ref().unwrap()))
                        });
                        assert_eq!(sum, Some(PiRational::PI));
                    }
                }
            }
        }
    }
}

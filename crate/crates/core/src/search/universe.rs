use crate::census::Configuration;
use crate::cyclic::{cyclic_angle, CyclicConfig, CyclicPoint};
use crate::exact::{angle_key, AngleKind, ExactAngleKey, Point};
use crate::angle::{Degenerate, PiRational};
use crate::quadratic::Scalar;
use crate::QuadPoint;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniverseError {
    #[error("cannot parse universe `{0}`; expected ngon:N, ngon_center:N or grid:WxH")]
    Parse(String),
    #[error("explicit universe points do not share one quadratic field")]
    MixedFields,
    #[error("explicit universe has repeated points")]
    Repeated,
}

/// A finite candidate set for subset search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchUniverse {
    /// Vertices of the regular `n`-gon, optionally with its center.
    Cyclic { n: u32, include_center: bool },
    /// Integer points `[0, w) × [0, h)`.
    Grid { width: u32, height: u32 },
    Explicit(Vec<QuadPoint>),
}

impl SearchUniverse {
    pub fn ngon_center(n: u32) -> SearchUniverse {
        SearchUniverse::Cyclic { n, include_center: true }
    }

    pub fn len(&self) -> usize {
        match self {
            SearchUniverse::Cyclic { n, include_center } => *n as usize + usize::from(*include_center),
            SearchUniverse::Grid { width, height } => (*width * *height) as usize,
            SearchUniverse::Explicit(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn grid_points(width: u32, height: u32) -> Vec<QuadPoint> {
        (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| Point::new(Scalar::integer(x.into()), Scalar::integer(y.into())))
            .collect()
    }

    fn cyclic_points(n: u32, include_center: bool) -> Vec<CyclicPoint> {
        let mut p: Vec<CyclicPoint> = (0..n).map(CyclicPoint::Vertex).collect();
        if include_center {
            p.push(CyclicPoint::Center);
        }
        p
    }

    /// The sub-configuration on `idx`, or `None` when it is invalid (fewer
    /// than three points or all collinear).
    pub fn configuration(&self, idx: &[usize]) -> Option<Configuration> {
        match self {
            SearchUniverse::Cyclic { n, include_center } => {
                let pts = Self::cyclic_points(*n, *include_center);
                let verts = idx.iter().filter_map(|&i| match pts[i] {
                    CyclicPoint::Vertex(v) => Some(v),
                    CyclicPoint::Center => None,
                });
                let center = idx.iter().any(|&i| pts[i] == CyclicPoint::Center);
                Configuration::cyclic(CyclicConfig::new(*n, verts, center).ok()?).ok()
            }
            SearchUniverse::Grid { width, height } => {
                let pts = Self::grid_points(*width, *height);
                Configuration::quadratic(idx.iter().map(|&i| pts[i].clone()).collect()).ok()
            }
            SearchUniverse::Explicit(pts) => {
                Configuration::quadratic(idx.iter().map(|&i| pts[i].clone()).collect()).ok()
            }
        }
    }

    /// Index permutations preserving the universe, identity first.
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        match self {
            SearchUniverse::Cyclic { n, include_center } => {
                let n = *n as usize;
                let mut out = Vec::with_capacity(2 * n);
                for flip in [false, true] {
                    for r in 0..n {
                        let mut perm: Vec<usize> =
                            (0..n).map(|v| if flip { (r + n - v) % n } else { (v + r) % n }).collect();
                        if *include_center {
                            perm.push(n);
                        }
                        out.push(perm);
                    }
                }
                out
            }
            SearchUniverse::Grid { width, height } => {
                let (w, h) = (*width as usize, *height as usize);
                let maps: Vec<Box<dyn Fn(usize, usize) -> Option<(usize, usize)>>> = vec![
                    Box::new(|x, y| Some((x, y))),
                    Box::new(move |x, y| Some((w - 1 - x, y))),
                    Box::new(move |x, y| Some((x, h - 1 - y))),
                    Box::new(move |x, y| Some((w - 1 - x, h - 1 - y))),
                    Box::new(move |x, y| (w == h).then_some((y, x))),
                    Box::new(move |x, y| (w == h).then_some((w - 1 - y, x))),
                    Box::new(move |x, y| (w == h).then_some((y, h - 1 - x))),
                    Box::new(move |x, y| (w == h).then_some((w - 1 - y, h - 1 - x))),
                ];
                maps.iter()
                    .filter_map(|m| (0..w * h).map(|i| m(i % w, i / w).map(|(x, y)| y * w + x)).collect())
                    .collect()
            }
            SearchUniverse::Explicit(p) => vec![(0..p.len()).collect()],
        }
    }

    /// Smallest image of an index set under the universe symmetries.
    pub fn canonical(&self, idx: &[usize]) -> Vec<usize> {
        self.symmetries()
            .iter()
            .map(|perm| {
                let mut v: Vec<usize> = idx.iter().map(|&i| perm[i]).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_default()
    }

    pub fn angle_table(&self) -> Result<AngleTable, UniverseError> {
        match self {
            SearchUniverse::Cyclic { n, include_center } => {
                Ok(AngleTable::cyclic(*n, &Self::cyclic_points(*n, *include_center)))
            }
            SearchUniverse::Grid { width, height } => AngleTable::exact(&Self::grid_points(*width, *height)),
            SearchUniverse::Explicit(p) => AngleTable::exact(p),
        }
    }
}

impl fmt::Display for SearchUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchUniverse::Cyclic { n, include_center: true } => write!(f, "ngon_center:{n}"),
            SearchUniverse::Cyclic { n, include_center: false } => write!(f, "ngon:{n}"),
            SearchUniverse::Grid { width, height } => write!(f, "grid:{width}x{height}"),
            SearchUniverse::Explicit(p) => write!(f, "explicit:{}", p.len()),
        }
    }
}

impl FromStr for SearchUniverse {
    type Err = UniverseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UniverseError::Parse(s.to_string());
        let (kind, arg) = s.trim().split_once(':').ok_or_else(err)?;
        let num = |a: &str| a.trim().parse::<u32>().ok().filter(|&n| n >= 1).ok_or_else(err);
        match kind.trim() {
            "ngon" => Ok(SearchUniverse::Cyclic { n: num(arg).and_then(|n| if n >= 3 { Ok(n) } else { Err(err()) })?, include_center: false }),
            "ngon_center" => Ok(SearchUniverse::Cyclic { n: num(arg).and_then(|n| if n >= 3 { Ok(n) } else { Err(err()) })?, include_center: true }),
            "grid" => {
                let (w, h) = arg.split_once('x').ok_or_else(err)?;
                Ok(SearchUniverse::Grid { width: num(w)?, height: num(h)? })
            }
            _ => Err(err()),
        }
    }
}

/// Identifier of every angle `∠abc` in a universe; equal ids mean equal
/// angles.
#[derive(Clone, Debug)]
pub struct AngleTable {
    n: usize,
    ids: Vec<u32>,
    distinct: usize,
}

impl AngleTable {
    pub const STRAIGHT: u32 = u32::MAX;
    pub const ZERO: u32 = u32::MAX - 1;
    const UNSET: u32 = u32::MAX - 2;

    fn empty(n: usize) -> AngleTable {
        AngleTable { n, ids: vec![Self::UNSET; n * n * n], distinct: 0 }
    }

    fn set(&mut self, a: usize, b: usize, c: usize, id: u32) {
        let n = self.n;
        self.ids[(a * n + b) * n + c] = id;
        self.ids[(c * n + b) * n + a] = id;
    }

    fn cyclic(n: u32, pts: &[CyclicPoint]) -> AngleTable {
        let mut t = AngleTable::empty(pts.len());
        let mut seen: BTreeMap<PiRational, u32> = BTreeMap::new();
        for b in 0..pts.len() {
            for a in 0..pts.len() {
                for c in a + 1..pts.len() {
                    if a == b || c == b {
                        continue;
                    }
                    let id = match cyclic_angle(pts[a], pts[b], pts[c], n) {
                        Ok(v) => {
                            let next = seen.len() as u32;
                            *seen.entry(v).or_insert(next)
                        }
                        Err(Degenerate::Zero) => Self::ZERO,
                        Err(Degenerate::Pi) => Self::STRAIGHT,
                    };
                    t.set(a, b, c, id);
                }
            }
        }
        t.distinct = seen.len();
        t
    }

    fn exact(pts: &[QuadPoint]) -> Result<AngleTable, UniverseError> {
        let d = pts.iter().flat_map(|p| [p.x.d(), p.y.d()]).find(|&d| d != 0).unwrap_or(0);
        if !pts.iter().all(|p| p.x.lies_in(d) && p.y.lies_in(d)) {
            return Err(UniverseError::MixedFields);
        }
        let n = pts.len();
        let mut t = AngleTable::empty(n);
        let mut keys: Vec<(ExactAngleKey<Scalar>, [usize; 3])> = Vec::new();
        for b in 0..n {
            for a in 0..n {
                for c in a + 1..n {
                    if a == b || c == b {
                        continue;
                    }
                    match angle_key(&pts[a], &pts[b], &pts[c]).map_err(|_| UniverseError::Repeated)? {
                        AngleKind::Proper(k) => keys.push((k, [a, b, c])),
                        AngleKind::Degenerate(Degenerate::Zero) => t.set(a, b, c, Self::ZERO),
                        AngleKind::Degenerate(Degenerate::Pi) => t.set(a, b, c, Self::STRAIGHT),
                    }
                }
            }
        }
        keys.sort_by(|x, y| x.0.cmp_angle(&y.0));
        let mut id = 0u32;
        for i in 0..keys.len() {
            if i > 0 && keys[i - 1].0.cmp_angle(&keys[i].0) != std::cmp::Ordering::Equal {
                id += 1;
            }
            let [a, b, c] = keys[i].1;
            t.set(a, b, c, id);
        }
        t.distinct = if keys.is_empty() { 0 } else { id as usize + 1 };
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of distinct proper angles in the whole universe.
    pub fn distinct(&self) -> usize {
        self.distinct
    }

    /// Id of `∠abc` for distinct indices.
    #[inline]
    pub fn id(&self, a: usize, b: usize, c: usize) -> u32 {
        self.ids[(a * self.n + b) * self.n + c]
    }

    pub fn is_proper(id: u32) -> bool {
        id < Self::UNSET
    }

    /// Distinct proper angles among `idx`.
    pub fn count(&self, idx: &[usize]) -> usize {
        let mut seen = vec![false; self.distinct];
        let mut count = 0;
        for &b in idx {
            for (i, &a) in idx.iter().enumerate() {
                for &c in &idx[i + 1..] {
                    if a == b || c == b {
                        continue;
                    }
                    let id = self.id(a, b, c);
                    if Self::is_proper(id) && !seen[id as usize] {
                        seen[id as usize] = true;
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["ngon:5", "ngon_center:12", "grid:7x7"] {
            assert_eq!(s.parse::<SearchUniverse>().unwrap().to_string(), s);
        }
        assert!("ngon:2".parse::<SearchUniverse>().is_err());
        assert!("torus:3".parse::<SearchUniverse>().is_err());
    }

    #[test]
    fn symmetry_counts() {
        assert_eq!(SearchUniverse::ngon_center(6).symmetries().len(), 12);
        assert_eq!(SearchUniverse::Grid { width: 3, height: 3 }.symmetries().len(), 8);
        assert_eq!(SearchUniverse::Grid { width: 3, height: 2 }.symmetries().len(), 4);
    }

    #[test]
    fn table_counts_match_census() {
        use crate::angle::CensusMode;
        use crate::census::census;
        for u in [SearchUniverse::ngon_center(6), SearchUniverse::Grid { width: 3, height: 3 }] {
            let t = u.angle_table().unwrap();
            for idx in [vec![0, 1, 4], vec![0, 2, 4, 5], vec![1, 3, 4, 5, 6]] {
                let cfg = u.configuration(&idx).unwrap();
                let r = census(&cfg, CensusMode::ExcludeZero).unwrap();
                assert_eq!(Some(t.count(&idx)), r.count.exact(), "{u} {idx:?}");
            }
        }
    }
}

use super::{AngleTable, SearchError, SearchUniverse};
use crate::angle::CensusMode;
use crate::census::census;
use crate::report::CensusReport;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Canonical indices into the universe.
    pub indices: Vec<usize>,
    pub report: CensusReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsetResult {
    pub universe: String,
    pub k: usize,
    pub best_size: usize,
    /// All maximum witnesses, one per symmetry class, sorted.
    pub witnesses: Vec<Witness>,
    pub nodes_explored: u64,
}

struct Dfs<'a> {
    table: &'a AngleTable,
    k: usize,
    n: usize,
    chosen: Vec<usize>,
    counts: Vec<u32>,
    distinct: usize,
    proper_triples: usize,
    nodes: u64,
    best: usize,
    found: Vec<Vec<usize>>,
}

impl Dfs<'_> {
    /// Ids added by appending `p`, or `None` when the census would exceed `k`.
    fn additions(&self, p: usize) -> Option<Vec<u32>> {
        let mut added = Vec::new();
        let mut fresh = 0;
        let m = self.chosen.len();
        let mut push = |id: u32, added: &mut Vec<u32>| {
            added.push(id);
            if AngleTable::is_proper(id) && self.counts[id as usize] == 0 && !added[..added.len() - 1].contains(&id) {
                fresh += 1;
            }
        };
        for i in 0..m {
            for j in i + 1..m {
                let (a, c) = (self.chosen[i], self.chosen[j]);
                push(self.table.id(a, p, c), &mut added);
                push(self.table.id(p, a, c), &mut added);
                push(self.table.id(p, c, a), &mut added);
            }
        }
        (self.distinct + fresh <= self.k).then_some(added)
    }

    fn apply(&mut self, ids: &[u32], sign: i32) {
        for &id in ids {
            if !AngleTable::is_proper(id) {
                continue;
            }
            let c = &mut self.counts[id as usize];
            if sign > 0 {
                if *c == 0 {
                    self.distinct += 1;
                }
                *c += 1;
                self.proper_triples += 1;
            } else {
                *c -= 1;
                if *c == 0 {
                    self.distinct -= 1;
                }
                self.proper_triples -= 1;
            }
        }
    }

    fn visit(&mut self) {
        self.nodes += 1;
        let size = self.chosen.len();
        if size >= 3 && self.proper_triples > 0 {
            if size > self.best {
                self.best = size;
                self.found.clear();
            }
            if size == self.best {
                self.found.push(self.chosen.clone());
            }
        }
        let start = self.chosen.last().map_or(0, |&l| l + 1);
        for p in start..self.n {
            if let Some(ids) = self.additions(p) {
                self.apply(&ids, 1);
                self.chosen.push(p);
                self.visit();
                self.chosen.pop();
                self.apply(&ids, -1);
            }
        }
    }
}

/// Largest subsets of `universe` with at most `k` distinct angles.
///
/// Branch and bound over increasing index sequences; a partial set whose
/// census already exceeds `k` is pruned, which is sound because adding
/// points never removes angles. Subtrees run in parallel without sharing
/// bounds, so `nodes_explored` does not depend on the thread count.
pub fn subset_search(universe: &SearchUniverse, k: usize) -> Result<SubsetResult, SearchError> {
    let n = universe.len();
    if n < 3 {
        return Err(SearchError::UniverseTooSmall(n));
    }
    let table = universe.angle_table()?;
    let parts: Vec<(usize, Vec<Vec<usize>>, u64)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut dfs = Dfs {
                table: &table,
                k,
                n,
                chosen: vec![first],
                counts: vec![0; table.distinct()],
                distinct: 0,
                proper_triples: 0,
                nodes: 0,
                best: 0,
                found: Vec::new(),
            };
            dfs.visit();
            (dfs.best, dfs.found, dfs.nodes)
        })
        .collect();
    let best = parts.iter().map(|p| p.0).max().unwrap_or(0);
    let nodes = parts.iter().map(|p| p.2).sum();
    let mut canon: Vec<Vec<usize>> = parts
        .into_iter()
        .filter(|p| p.0 == best)
        .flat_map(|p| p.1)
        .map(|idx| universe.canonical(&idx))
        .collect();
    canon.sort();
    canon.dedup();
    let witnesses = canon
        .into_par_iter()
        .map(|indices| {
            let cfg = universe.configuration(&indices).expect("witnesses are non-collinear");
            let report = census(&cfg, CensusMode::ExcludeZero)?;
            Ok(Witness { indices, report })
        })
        .collect::<Result<Vec<_>, SearchError>>()?;
    Ok(SubsetResult { universe: universe.to_string(), k, best_size: best, witnesses, nodes_explored: nodes })
}

/// Reference answer by censusing every subset directly; only for small
/// universes. Returns the best size and the canonical maximum subsets.
pub fn exhaustive_best(universe: &SearchUniverse, k: usize) -> Result<(usize, Vec<Vec<usize>>), SearchError> {
    let n = universe.len();
    assert!(n <= 20, "exhaustive enumeration is limited to 20 points");
    let hits: Vec<Vec<usize>> = (0u32..1 << n)
        .into_par_iter()
        .filter(|m| m.count_ones() >= 3)
        .filter_map(|m| {
            let idx: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            let cfg = universe.configuration(&idx)?;
            let r = census(&cfg, CensusMode::ExcludeZero).ok()?;
            (r.count.exact()? <= k).then_some(idx)
        })
        .collect();
    let best = hits.iter().map(Vec::len).max().unwrap_or(0);
    let mut canon: Vec<Vec<usize>> =
        hits.into_iter().filter(|h| h.len() == best).map(|h| universe.canonical(&h)).collect();
    canon.sort();
    canon.dedup();
    Ok((best, canon))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_center_is_whole_universe() {
        let r = subset_search(&SearchUniverse::ngon_center(4), 2).unwrap();
        assert_eq!(r.best_size, 5);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn decagon_hides_pentagon() {
        let r = subset_search(&SearchUniverse::ngon_center(10), 3).unwrap();
        assert_eq!(r.best_size, 5);
        assert!(r.witnesses.iter().any(|w| w.indices == vec![0, 2, 4, 6, 8]));
    }

    #[test]
    fn only_equilateral_triangles_for_one_angle() {
        let r = subset_search(&SearchUniverse::ngon_center(12), 1).unwrap();
        assert_eq!(r.best_size, 3);
        // the inscribed triangle, and the center with two vertices 60° apart
        let idx: Vec<Vec<usize>> = r.witnesses.iter().map(|w| w.indices.clone()).collect();
        assert_eq!(idx, [vec![0, 2, 12], vec![0, 4, 8]]);
        assert!(r.witnesses.iter().all(|w| w.report.summary() == "1 distinct angle: π/3 (exact)"));
    }

    #[test]
    fn agrees_with_exhaustive() {
        for u in [SearchUniverse::ngon_center(7), SearchUniverse::Grid { width: 3, height: 3 }] {
            for k in 1..=3 {
                let r = subset_search(&u, k).unwrap();
                let (best, canon) = exhaustive_best(&u, k).unwrap();
                assert_eq!(r.best_size, best);
                let ours: Vec<Vec<usize>> = r.witnesses.iter().map(|w| w.indices.clone()).collect();
                assert_eq!(ours, canon);
            }
        }
    }
}

use super::{subset_search, SearchError, SearchUniverse};
use crate::catalog::bounds;

/// Conjectured maximum size for `k` angles: `2⌊k/2⌋ + 3`.
pub fn conjectured(k: usize) -> usize {
    2 * (k / 2) + 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeStatus {
    /// The best find equals the conjectured value.
    Consistent,
    /// Nothing in the universes reaches the conjectured value.
    BelowConjecture,
    /// A set larger than conjectured: a counterexample within the universe.
    ExceedsConjecture,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub k: usize,
    pub best: usize,
    /// Universe of the first best find.
    pub universe: String,
    pub conjectured: usize,
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    pub status: ProbeStatus,
}

/// Best subset sizes for `k = 1..=k_max` over all `universes`.
pub fn conjecture_probe(k_max: usize, universes: &[SearchUniverse]) -> Result<Vec<ProbeRow>, SearchError> {
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let mut best = 0;
        let mut at = String::new();
        for u in universes {
            let r = subset_search(u, k)?;
            if r.best_size > best {
                best = r.best_size;
                at = r.universe;
            }
        }
        let conj = conjectured(k);
        let b = bounds(k as u32).expect("k ≥ 1");
        let status = match best.cmp(&conj) {
            std::cmp::Ordering::Less => ProbeStatus::BelowConjecture,
            std::cmp::Ordering::Equal => ProbeStatus::Consistent,
            std::cmp::Ordering::Greater => ProbeStatus::ExceedsConjecture,
        };
        rows.push(ProbeRow {
            k,
            best,
            universe: at,
            conjectured: conj,
            lower: b.lower,
            upper: b.upper,
            exact: b.exact,
            status,
        });
    }
    Ok(rows)
}

use serde::{Deserialize, Serialize};

/// Depth and query accounting for one run.
///
/// `max_depth` is the largest number of sequential oracle applications in
/// any single circuit; `total_queries` is the number of oracle applications
/// summed over all circuits and shots. Both only grow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResourceLedger {
    max_depth: u64,
    total_queries: u64,
}

impl ResourceLedger {
    pub const fn new() -> Self {
        Self {
            max_depth: 0,
            total_queries: 0,
        }
    }

    pub fn max_depth(&self) -> u64 {
        self.max_depth
    }

    pub fn total_queries(&self) -> u64 {
        self.total_queries
    }

    /// Records circuits of depth `depth` costing `queries` oracle calls in total.
    pub fn charge(&mut self, depth: u64, queries: u64) {
        self.max_depth = self.max_depth.max(depth);
        self.total_queries = self.total_queries.saturating_add(queries);
    }

    /// Ledger of two independent runs: deepest circuit, summed queries.
    pub fn merge(self, other: Self) -> Self {
        Self {
            max_depth: self.max_depth.max(other.max_depth),
            total_queries: self.total_queries.saturating_add(other.total_queries),
        }
    }

    pub fn absorb(&mut self, other: Self) {
        *self = self.merge(other);
    }

    /// `max_depth * total_queries`, the quantity bounded below by `1/eps^2`.
    pub fn depth_query_product(&self) -> f64 {
        self.max_depth as f64 * self.total_queries as f64
    }
}

impl std::iter::Sum for ResourceLedger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::new(), Self::merge)
    }
}

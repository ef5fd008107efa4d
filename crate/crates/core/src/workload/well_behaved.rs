use super::event::RequestEvent;
use crate::analysis::{lmax_expectation_bound, lmax_expectation_bound_linear};

/// Whether every phase forced by server churn is long enough.
#[derive(Debug, Clone, PartialEq)]
pub struct WellBehavedReport {
    pub churn_events: usize,
    /// Fewest item requests between the start or a churn event and the next
    /// churn event; `None` without churn.
    pub min_gap: Option<u64>,
    /// Required gap with the squared exponent `(i+1)^2`.
    pub bound_quadratic: f64,
    /// Required gap with the linear exponent `(i+1)`.
    pub bound_linear: f64,
    pub quadratic_ok: bool,
    pub linear_ok: bool,
}

/// Checks the churn spacing of a request stream against both readings of
/// the minimum phase length for `alpha`, `m` items and `n` servers.
pub fn check_well_behaved(events: &[RequestEvent], alpha: usize, m: usize, n: usize) -> WellBehavedReport {
    let bound_quadratic = lmax_expectation_bound(alpha, m, n);
    let bound_linear = lmax_expectation_bound_linear(alpha, m, n);
    let mut gap = 0u64;
    let mut min_gap: Option<u64> = None;
    let mut churn_events = 0;
    for e in events {
        if e.kind.is_churn() {
            churn_events += 1;
            min_gap = Some(min_gap.map_or(gap, |g| g.min(gap)));
            gap = 0;
        } else {
            gap += 1;
        }
    }
    let ok = |bound: f64| min_gap.is_none_or(|g| g as f64 >= bound);
    WellBehavedReport {
        churn_events,
        min_gap,
        bound_quadratic,
        bound_linear,
        quadratic_ok: ok(bound_quadratic),
        linear_ok: ok(bound_linear),
    }
}

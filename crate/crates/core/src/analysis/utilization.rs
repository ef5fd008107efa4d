use crate::error::{Error, Result};

/// Storage utilization `m / (max_load * n)`: average load over maximum load.
/// An empty system counts as fully utilized.
pub fn utilization(max_load: usize, m: usize, n: usize) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    if max_load == 0 || n == 0 {
        return Err(Error::InconsistentState(format!("{m} items but max load {max_load} on {n} servers")));
    }
    Ok(m as f64 / (max_load as f64 * n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(utilization(4, 24, 8).unwrap(), 0.75);
        assert_eq!(utilization(3, 24, 8).unwrap(), 1.0);
        assert_eq!(utilization(0, 0, 8).unwrap(), 1.0);
        assert!(utilization(0, 5, 8).is_err());
    }
}

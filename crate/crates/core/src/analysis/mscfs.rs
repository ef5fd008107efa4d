use crate::ring::Ring;

/// Lengths of the maximal runs of consecutive full servers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MscfsStats {
    /// One entry per run, in ring order starting after a non-full server.
    pub lengths: Vec<usize>,
    pub l_max: usize,
}

/// Runs of `true` in a cyclic pattern. When every entry is full the whole
/// ring is a single run of length `n`.
pub fn mscfs_from_pattern(full: &[bool]) -> MscfsStats {
    let n = full.len();
    let Some(start) = full.iter().position(|f| !f) else {
        return MscfsStats { lengths: if n > 0 { vec![n] } else { Vec::new() }, l_max: n };
    };
    let mut lengths = Vec::new();
    let mut run = 0;
    for k in 1..=n {
        if full[(start + k) % n] {
            run += 1;
        } else if run > 0 {
            lengths.push(run);
            run = 0;
        }
    }
    let l_max = lengths.iter().copied().max().unwrap_or(0);
    MscfsStats { lengths, l_max }
}

pub fn mscfs_lengths(ring: &Ring) -> MscfsStats {
    let pattern: Vec<bool> = ring.server_points().into_iter().map(|p| ring.is_full(p)).collect();
    mscfs_from_pattern(&pattern)
}

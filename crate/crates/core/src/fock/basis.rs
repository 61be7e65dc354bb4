use serde::{Deserialize, Serialize};

/// Per-node partitions (parts in non-increasing order) of creation modes.
pub type OscState = Vec<Vec<u32>>;

/// `Π_i Π_k a_i[-m_k] |λ⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockBasisState {
    pub momentum: Vec<i64>,
    pub oscillators: OscState,
}

impl FockBasisState {
    pub fn vacuum(momentum: Vec<i64>) -> Self {
        let rank = momentum.len();
        Self {
            momentum,
            oscillators: vec![Vec::new(); rank],
        }
    }

    pub fn degree(&self) -> u32 {
        osc_degree(&self.oscillators)
    }
}

pub fn osc_degree(osc: &OscState) -> u32 {
    osc.iter().flatten().sum()
}

/// Partitions of `n` with parts at most `max`, in lexicographically
/// decreasing order.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of partitions of `n`.
pub fn partition_count(n: u32) -> usize {
    partitions(n, n).len()
}

fn multi_partitions(rank: usize, degree: u32) -> Vec<OscState> {
    if rank == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for d0 in (0..=degree).rev() {
        for head in partitions(d0, d0) {
            for mut tail in multi_partitions(rank - 1, degree - d0) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
    }
    out
}

/// All states of sector `λ` with degree `≤ cap`, ordered by degree and then
/// deterministically within each degree.
pub fn enumerate_sector(momentum: &[i64], cap: u32) -> Vec<FockBasisState> {
    let rank = momentum.len();
    (0..=cap)
        .flat_map(|d| multi_partitions(rank, d))
        .map(|oscillators| FockBasisState {
            momentum: momentum.to_vec(),
            oscillators,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `Π_{m≥1} (1 - x^m)^{-rank}` up to `x^cap`.
    fn generating_function(rank: usize, cap: usize) -> Vec<u64> {
        let mut c = vec![0u64; cap + 1];
        c[0] = 1;
        for _ in 0..rank {
            for m in 1..=cap {
                for n in m..=cap {
                    c[n] += c[n - m];
                }
            }
        }
        c
    }

    #[test]
    fn small_sectors() {
        assert_eq!(enumerate_sector(&[0], 0).len(), 1);
        let s = enumerate_sector(&[1], 2);
        assert_eq!(s.len(), 4);
        assert_eq!(s[3].oscillators, vec![vec![1, 1]]);
        assert_eq!(s[2].oscillators, vec![vec![2]]);
    }

    #[test]
    fn counts_match_generating_function() {
        for rank in 1..=3 {
            for cap in 0..=5u32 {
                let gf = generating_function(rank, cap as usize);
                let expect: u64 = gf.iter().sum();
                let basis = enumerate_sector(&vec![0; rank], cap);
                assert_eq!(basis.len() as u64, expect, "rank {rank} cap {cap}");
                let mut sorted = basis.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), basis.len());
                for d in 0..=cap {
                    let n = basis.iter().filter(|s| s.degree() == d).count() as u64;
                    assert_eq!(n, gf[d as usize]);
                }
            }
        }
        assert_eq!(partition_count(5), 7);
    }
}

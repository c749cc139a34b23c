use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::modes::ModeSpace;
use crate::scalar::Real;

/// Default ceiling on the number of basis states.
pub const DEFAULT_MAX_DIMENSION: usize = 200_000;

/// Occupation-number basis of the bosonic Fock space over `M` modes,
/// truncated at total particle number `N`.
///
/// States are ordered by total particle number (the grade), then
/// lexicographically by occupation tuple. Each grade therefore occupies a
/// contiguous index range and the states with at most `k` particles form a
/// prefix of the basis.
#[derive(Debug, Clone)]
pub struct FockBasis<T> {
    modes: ModeSpace<T>,
    cutoff: usize,
    states: Vec<Box<[u32]>>,
    grade_start: Vec<usize>,
    index: HashMap<Box<[u32]>, usize>,
}

/// `C(m + n, n)` without overflow, or `None` when it does not fit in `u128`.
pub fn fock_dimension(modes: usize, cutoff: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=cutoff as u128 {
        acc = acc.checked_mul(modes as u128 + i)? / i;
    }
    Some(acc)
}

impl<T: Real> FockBasis<T> {
    pub fn new(modes: ModeSpace<T>, cutoff: usize) -> Result<Self> {
        Self::with_max_dimension(modes, cutoff, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_max_dimension(modes: ModeSpace<T>, cutoff: usize, max: usize) -> Result<Self> {
        let m = modes.len();
        let dim = fock_dimension(m, cutoff).unwrap_or(u128::MAX);
        if dim > max as u128 {
            return Err(Error::DimensionTooLarge { dim, max });
        }

        let mut states = Vec::with_capacity(dim as usize);
        let mut grade_start = Vec::with_capacity(cutoff + 2);
        let mut scratch = vec![0u32; m];
        for n in 0..=cutoff {
            grade_start.push(states.len());
            compositions(n as u32, 0, &mut scratch, &mut states);
        }
        grade_start.push(states.len());
        debug_assert_eq!(states.len() as u128, dim);

        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            modes,
            cutoff,
            states,
            grade_start,
            index,
        })
    }

    #[inline]
    pub fn modes(&self) -> &ModeSpace<T> {
        &self.modes
    }

    #[inline]
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Total particle cutoff `N`.
    #[inline]
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn states(&self) -> impl Iterator<Item = &[u32]> {
        self.states.iter().map(|s| &**s)
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Total particle number of state `i`.
    pub fn grade(&self, i: usize) -> usize {
        // grade_start is sorted; the last start <= i wins
        self.grade_start.partition_point(|&s| s <= i) - 1
    }

    /// Index range of the states with exactly `n` particles.
    pub fn grade_range(&self, n: usize) -> Range<usize> {
        assert!(n <= self.cutoff, "grade {n} above cutoff {}", self.cutoff);
        self.grade_start[n]..self.grade_start[n + 1]
    }

    /// Number of states with at most `n` particles (a prefix of the basis).
    pub fn block_len(&self, n: usize) -> usize {
        self.grade_start[n.min(self.cutoff) + 1]
    }

    pub fn vacuum_index(&self) -> usize {
        0
    }
}

// Appends all tuples of `scratch[pos..]` summing to `remaining`, in
// lexicographic order.
fn compositions(remaining: u32, pos: usize, scratch: &mut [u32], out: &mut Vec<Box<[u32]>>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(scratch.to_vec().into_boxed_slice());
        return;
    }
    for first in 0..=remaining {
        scratch[pos] = first;
        compositions(remaining - first, pos + 1, scratch, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(m: usize, n: usize) -> FockBasis<f64> {
        FockBasis::new(ModeSpace::new(vec![1.0; m], 1.0).unwrap(), n).unwrap()
    }

    #[test]
    fn dimensions_follow_stars_and_bars() {
        assert_eq!(basis(2, 2).dim(), 6);
        assert_eq!(basis(3, 4).dim(), 35);
        assert_eq!(basis(1, 0).dim(), 1);
        assert_eq!(fock_dimension(3, 4), Some(35));
    }

    #[test]
    fn single_mode_states_in_order() {
        let b = basis(1, 5);
        assert_eq!(b.dim(), 6);
        for (i, s) in b.states().enumerate() {
            assert_eq!(s, &[i as u32]);
        }
    }

    #[test]
    fn graded_lexicographic_order() {
        let b = basis(2, 2);
        let got: Vec<Vec<u32>> = b.states().map(|s| s.to_vec()).collect();
        let expected = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
        ];
        assert_eq!(got, expected);
        assert_eq!(b.grade_range(1), 1..3);
        assert_eq!(b.block_len(1), 3);
    }

    #[test]
    fn index_is_a_bijection() {
        let b = basis(3, 4);
        for (i, s) in b.states().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
            assert_eq!(b.grade(i), s.iter().sum::<u32>() as usize);
        }
        assert_eq!(b.index_of(&[5, 0, 0]), None);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let modes = ModeSpace::new(vec![1.0_f64; 4], 1.0).unwrap();
        let err = FockBasis::with_max_dimension(modes, 10, 100).unwrap_err();
        assert!(matches!(err, Error::DimensionTooLarge { dim: 1001, max: 100 }));
    }
}

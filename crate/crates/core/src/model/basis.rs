use serde::Serialize;

use crate::error::{invalid, Result};

/// Product basis |s⟩|q₁⟩…|q_n⟩ of a truncated plasmon ladder and `n_dots`
/// two-level dots.
///
/// Flat ordering: the plasmon number is the slowest index, then dot 1, dot 2,
/// …, with the last dot fastest.
/// `index = s·2ⁿ + Σ_j q_j·2^(n-j)` for dots numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Basis {
    n_dots: usize,
    n_pl: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisState {
    pub s: usize,
    /// `q[j]` is the state of dot `j + 1` (0 ground, 1 excited).
    pub q: Vec<u8>,
}

impl Basis {
    /// Largest supported dot count for the full product space.
    pub const MAX_DOTS: usize = 16;

    pub fn new(n_dots: usize, n_pl: usize) -> Result<Self> {
        if n_dots < 1 {
            return invalid("basis needs at least one dot");
        }
        if n_dots > Self::MAX_DOTS {
            return invalid(format!("{n_dots} dots exceed the full-space limit of {}", Self::MAX_DOTS));
        }
        if n_pl < 2 {
            return invalid(format!("plasmon truncation must be >= 2, got {n_pl}"));
        }
        Ok(Basis { n_dots, n_pl })
    }

    pub fn n_dots(&self) -> usize {
        self.n_dots
    }

    pub fn n_pl(&self) -> usize {
        self.n_pl
    }

    pub fn dot_block(&self) -> usize {
        1 << self.n_dots
    }

    pub fn dim(&self) -> usize {
        self.n_pl * self.dot_block()
    }

    pub fn index(&self, s: usize, q: &[u8]) -> Result<usize> {
        if s >= self.n_pl {
            return invalid(format!("plasmon number {s} outside truncation {}", self.n_pl));
        }
        if q.len() != self.n_dots {
            return invalid(format!("expected {} dot labels, got {}", self.n_dots, q.len()));
        }
        let mut dots = 0usize;
        for &qj in q {
            if qj > 1 {
                return invalid(format!("dot label must be 0 or 1, got {qj}"));
            }
            dots = (dots << 1) | qj as usize;
        }
        Ok(s * self.dot_block() + dots)
    }

    pub fn decode(&self, index: usize) -> BasisState {
        debug_assert!(index < self.dim());
        let q = (1..=self.n_dots).map(|j| self.dot_state(index, j)).collect();
        BasisState { s: self.plasmon_number(index), q }
    }

    pub fn plasmon_number(&self, index: usize) -> usize {
        index >> self.n_dots
    }

    /// State (0/1) of dot `j` (1-based) at a flat index.
    pub fn dot_state(&self, index: usize, j: usize) -> u8 {
        ((index >> (self.n_dots - j)) & 1) as u8
    }

    /// Flat index with dot `j` flipped.
    pub(crate) fn flip_dot(&self, index: usize, j: usize) -> usize {
        index ^ (1 << (self.n_dots - j))
    }

    pub fn excitation_count(&self, index: usize) -> usize {
        self.plasmon_number(index) + (index & (self.dot_block() - 1)).count_ones() as usize
    }

    pub fn ground_index(&self) -> usize {
        0
    }

    pub(crate) fn check_dot(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_dots {
            return invalid(format!("dot index {j} out of range 1..={}", self.n_dots));
        }
        Ok(())
    }
}

pub fn build_basis(n_dots: usize, n_pl: usize) -> Result<Basis> {
    Basis::new(n_dots, n_pl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(build_basis(1, 5).unwrap().dim(), 10);
        assert_eq!(build_basis(2, 15).unwrap().dim(), 60);
        assert_eq!(build_basis(2, 5).unwrap().dim(), 20);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(build_basis(0, 5).is_err());
        assert!(build_basis(1, 1).is_err());
        assert!(build_basis(1, 0).is_err());
    }

    #[test]
    fn ordering_plasmon_slowest() {
        let b = build_basis(2, 3).unwrap();
        assert_eq!(b.index(0, &[0, 0]).unwrap(), 0);
        assert_eq!(b.index(0, &[0, 1]).unwrap(), 1);
        assert_eq!(b.index(0, &[1, 0]).unwrap(), 2);
        assert_eq!(b.index(1, &[0, 0]).unwrap(), 4);
        assert_eq!(b.index(2, &[1, 1]).unwrap(), 11);
        assert!(b.index(3, &[0, 0]).is_err());
        assert!(b.index(0, &[0]).is_err());
    }

    #[test]
    fn round_trip_every_state() {
        for n_dots in 1..=4 {
            for n_pl in 2..=6 {
                let b = build_basis(n_dots, n_pl).unwrap();
                for i in 0..b.dim() {
                    let st = b.decode(i);
                    assert_eq!(b.index(st.s, &st.q).unwrap(), i);
                }
            }
        }
    }
}

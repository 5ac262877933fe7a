//! Product basis |M_a M_b m_a m_b⟩ of two donor electrons (M) and two ³¹P nuclei (m).
//!
//! States are numbered 1..=16 with the electron spins most significant and ↑
//! before ↓, so |1⟩ = |↑↑↑↑⟩, |2⟩ = |↑↑↑↓⟩, …, |16⟩ = |↓↓↓↓⟩.

use serde::{Deserialize, Serialize};
use std::fmt;

pub const DIM: usize = 16;

/// Block labels M+m in the order the blocks are reported.
pub const BLOCK_LABELS: [i8; 5] = [0, 1, -1, 2, -2];

/// A basis state; spin projections are stored doubled (±1 for ±½).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisState {
    pub index: usize,
    pub electron_a: i8,
    pub electron_b: i8,
    pub nucleus_a: i8,
    pub nucleus_b: i8,
}

/// Conserved-quantity sector of a basis state: (M_a+M_b, m_a+m_b), both integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sector {
    pub electron: i8,
    pub nuclear: i8,
}

impl Sector {
    pub fn block(&self) -> i8 {
        self.electron + self.nuclear
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M={:+}, m={:+})", self.electron, self.nuclear)
    }
}

impl BasisState {
    /// State with 1-based `index`. Panics outside 1..=16.
    pub fn from_index(index: usize) -> Self {
        assert!((1..=DIM).contains(&index), "basis index {index} out of range");
        let bits = index - 1;
        let spin = |shift: usize| if (bits >> shift) & 1 == 0 { 1 } else { -1 };
        Self {
            index,
            electron_a: spin(3),
            electron_b: spin(2),
            nucleus_a: spin(1),
            nucleus_b: spin(0),
        }
    }

    pub fn from_spins(electron_a: i8, electron_b: i8, nucleus_a: i8, nucleus_b: i8) -> Self {
        let bit = |s: i8| usize::from(s < 0);
        let index = 1 + 8 * bit(electron_a) + 4 * bit(electron_b) + 2 * bit(nucleus_a) + bit(nucleus_b);
        Self::from_index(index)
    }

    pub fn all() -> impl Iterator<Item = BasisState> {
        (1..=DIM).map(Self::from_index)
    }

    /// M+m, the conserved total projection.
    pub fn block(&self) -> i8 {
        self.sector().block()
    }

    pub fn sector(&self) -> Sector {
        Sector {
            electron: (self.electron_a + self.electron_b) / 2,
            nuclear: (self.nucleus_a + self.nucleus_b) / 2,
        }
    }

    /// The state with donors a and b exchanged.
    pub fn swapped(&self) -> Self {
        Self::from_spins(self.electron_b, self.electron_a, self.nucleus_b, self.nucleus_a)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = |s: i8| if s > 0 { '↑' } else { '↓' };
        write!(
            f,
            "|{}{}{}{}⟩",
            arrow(self.electron_a),
            arrow(self.electron_b),
            arrow(self.nucleus_a),
            arrow(self.nucleus_b)
        )
    }
}

/// 1-based indices of the states in block `label`, ascending.
pub fn block_indices(label: i8) -> Vec<usize> {
    BasisState::all()
        .filter(|s| s.block() == label)
        .map(|s| s.index)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_table() {
        let table = [
            (1, "|↑↑↑↑⟩"),
            (2, "|↑↑↑↓⟩"),
            (3, "|↑↑↓↑⟩"),
            (4, "|↑↑↓↓⟩"),
            (5, "|↑↓↑↑⟩"),
            (9, "|↓↑↑↑⟩"),
            (10, "|↓↑↑↓⟩"),
            (12, "|↓↑↓↓⟩"),
            (13, "|↓↓↑↑⟩"),
            (15, "|↓↓↓↑⟩"),
            (16, "|↓↓↓↓⟩"),
        ];
        for (i, s) in table {
            assert_eq!(BasisState::from_index(i).to_string(), s);
        }
        for s in BasisState::all() {
            let t = BasisState::from_spins(s.electron_a, s.electron_b, s.nucleus_a, s.nucleus_b);
            assert_eq!(s, t);
            assert_eq!(s.swapped().swapped(), s);
        }
    }

    #[test]
    fn blocks() {
        assert_eq!(block_indices(0), vec![4, 6, 7, 10, 11, 13]);
        assert_eq!(block_indices(1), vec![2, 3, 5, 9]);
        assert_eq!(block_indices(-1), vec![8, 12, 14, 15]);
        assert_eq!(block_indices(2), vec![1]);
        assert_eq!(block_indices(-2), vec![16]);
        let f = BasisState::from_index(15).sector();
        assert_eq!((f.electron, f.nuclear), (-1, 0));
        let g = BasisState::from_index(12).sector();
        assert_eq!((g.electron, g.nuclear), (0, -1));
    }
}

//! H/J = β(S_az+S_bz) + S_a·S_b − μ(I_az+I_bz) + α_a I_a·S_a + α_b I_b·S_b,
//! built once with exact rational coefficients and evaluated numerically.

use super::basis::{block_indices, BasisState, BLOCK_LABELS, DIM};
use super::{SpinError, SpinParams};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::sync::OnceLock;

/// Parameters the Hamiltonian is linear in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    One,
    Beta,
    Mu,
    AlphaA,
    AlphaB,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::One, Param::Beta, Param::Mu, Param::AlphaA, Param::AlphaB];

    fn slot(self) -> usize {
        self as usize
    }

    fn symbol(self) -> &'static str {
        match self {
            Param::One => "",
            Param::Beta => "β",
            Param::Mu => "μ",
            Param::AlphaA => "α_a",
            Param::AlphaB => "α_b",
        }
    }

    fn value(self, p: &SpinParams) -> f64 {
        match self {
            Param::One => 1.0,
            Param::Beta => p.beta,
            Param::Mu => p.mu,
            Param::AlphaA => p.alpha_a,
            Param::AlphaB => p.alpha_b,
        }
    }
}

/// c₀ + c_β β + c_μ μ + c_a α_a + c_b α_b with rational coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinearForm([Rational64; 5]);

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(p: Param, c: Rational64) -> Self {
        let mut f = Self::zero();
        f.0[p.slot()] = c;
        f
    }

    /// Build from (param, numerator, denominator) triples.
    pub fn from_terms(terms: &[(Param, i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, &(p, n, d)| {
            acc + Self::term(p, Rational64::new(n, d))
        })
    }

    pub fn coeff(&self, p: Param) -> Rational64 {
        self.0[p.slot()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, p: &SpinParams) -> f64 {
        Param::ALL
            .iter()
            .map(|&k| {
                let c = self.coeff(k);
                *c.numer() as f64 / *c.denom() as f64 * k.value(p)
            })
            .sum()
    }
}

impl Add for LinearForm {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for LinearForm {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Mul<Rational64> for LinearForm {
    type Output = Self;
    fn mul(mut self, rhs: Rational64) -> Self {
        for a in &mut self.0 {
            *a *= rhs;
        }
        self
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in Param::ALL {
            let c = self.coeff(p);
            if c.is_zero() {
                continue;
            }
            let sign = if c < Rational64::zero() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let sep = if first { "" } else { " " };
            let body = match (p, mag.is_one()) {
                (Param::One, _) => mag.to_string(),
                (_, true) => p.symbol().to_string(),
                _ => format!("{mag}{}", p.symbol()),
            };
            let gap = if first { "" } else { " " };
            write!(f, "{sep}{sign}{gap}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A 16×16 matrix of linear forms, addressed with 1-based basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicHamiltonian {
    entries: Vec<LinearForm>,
}

impl SymbolicHamiltonian {
    pub fn entry(&self, row: usize, col: usize) -> LinearForm {
        self.entries[(row - 1) * DIM + (col - 1)]
    }

    pub fn eval(&self, p: &SpinParams) -> SpinMatrix {
        let mut m = SpinMatrix::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = self.entries[i * DIM + j].eval(p);
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=DIM).all(|i| (1..=DIM).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// The part proportional to μ, α_a and α_b (ΔH/J).
    pub fn hyperfine_part(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|f| {
                let mut g = *f;
                g.0[Param::One.slot()] = Rational64::zero();
                g.0[Param::Beta.slot()] = Rational64::zero();
                g
            })
            .collect();
        Self { entries }
    }
}

type Mat2 = [[Rational64; 2]; 2];

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn ops() -> (Mat2, Mat2, Mat2, Mat2) {
    let (z, o, h) = (r(0, 1), r(1, 1), r(1, 2));
    let id = [[o, z], [z, o]];
    let sz = [[h, z], [z, -h]];
    // ordering (↑, ↓): S₊|↓⟩ = |↑⟩
    let sp = [[z, o], [z, z]];
    let sm = [[z, z], [o, z]];
    (id, sz, sp, sm)
}

/// Kronecker product over (electron a, electron b, nucleus a, nucleus b).
fn kron4(f: [Mat2; 4]) -> Vec<Rational64> {
    let mut out = vec![Rational64::zero(); DIM * DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            let mut v = Rational64::one();
            for (k, m) in f.iter().enumerate() {
                let shift = 3 - k;
                v *= m[(i >> shift) & 1][(j >> shift) & 1];
                if v.is_zero() {
                    break;
                }
            }
            out[i * DIM + j] = v;
        }
    }
    out
}

/// Exact H/J.
pub fn symbolic_hamiltonian() -> SymbolicHamiltonian {
    let (id, sz, sp, sm) = ops();
    let mut entries = vec![LinearForm::zero(); DIM * DIM];
    let mut add = |factors: [Mat2; 4], form: LinearForm| {
        for (e, c) in entries.iter_mut().zip(kron4(factors)) {
            if !c.is_zero() {
                *e += form * c;
            }
        }
    };
    let one = |p: Param, n: i64, d: i64| LinearForm::term(p, r(n, d));
    // Zeeman
    add([sz, id, id, id], one(Param::Beta, 1, 1));
    add([id, sz, id, id], one(Param::Beta, 1, 1));
    add([id, id, sz, id], one(Param::Mu, -1, 1));
    add([id, id, id, sz], one(Param::Mu, -1, 1));
    // exchange S_a·S_b = S_az S_bz + (S_a+ S_b- + S_a- S_b+)/2
    add([sz, sz, id, id], one(Param::One, 1, 1));
    add([sp, sm, id, id], one(Param::One, 1, 2));
    add([sm, sp, id, id], one(Param::One, 1, 2));
    // contact hyperfine I·S on each donor
    add([sz, id, sz, id], one(Param::AlphaA, 1, 1));
    add([sp, id, sm, id], one(Param::AlphaA, 1, 2));
    add([sm, id, sp, id], one(Param::AlphaA, 1, 2));
    add([id, sz, id, sz], one(Param::AlphaB, 1, 1));
    add([id, sp, id, sm], one(Param::AlphaB, 1, 2));
    add([id, sm, id, sp], one(Param::AlphaB, 1, 2));
    SymbolicHamiltonian { entries }
}

/// Dense real 16×16 matrix indexed from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrix(pub [[f64; DIM]; DIM]);

impl SpinMatrix {
    pub fn zeros() -> Self {
        Self([[0.0; DIM]; DIM])
    }

    /// Entry between basis states `row` and `col` (1-based).
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row - 1][col - 1]
    }

    pub fn trace(&self) -> f64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }
}

fn coefficient_matrices() -> &'static [SpinMatrix; 5] {
    static CACHE: OnceLock<[SpinMatrix; 5]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let sym = symbolic_hamiltonian();
        Param::ALL.map(|p| {
            let mut m = SpinMatrix::zeros();
            for i in 0..DIM {
                for j in 0..DIM {
                    let c = sym.entries[i * DIM + j].coeff(p);
                    m.0[i][j] = *c.numer() as f64 / *c.denom() as f64;
                }
            }
            m
        })
    })
}

/// Numerical H/J at `p`.
pub fn build_hamiltonian(p: &SpinParams) -> SpinMatrix {
    let mut h = SpinMatrix::zeros();
    for (k, c) in Param::ALL.iter().zip(coefficient_matrices()) {
        let x = k.value(p);
        if x == 0.0 {
            continue;
        }
        for i in 0..DIM {
            for j in 0..DIM {
                h.0[i][j] += x * c.0[i][j];
            }
        }
    }
    h
}

/// One diagonal block of H/J.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    /// M+m.
    pub label: i8,
    /// 1-based basis indices, ascending.
    pub indices: Vec<usize>,
    pub matrix: Vec<Vec<f64>>,
}

/// Split `h` by M+m, failing if any entry couples two blocks.
pub fn block_decompose(h: &SpinMatrix) -> Result<Vec<Block>, SpinError> {
    let blocks: Vec<Block> = BLOCK_LABELS
        .iter()
        .map(|&label| {
            let indices = block_indices(label);
            let matrix = indices
                .iter()
                .map(|&i| indices.iter().map(|&j| h.get(i, j)).collect())
                .collect();
            Block { label, indices, matrix }
        })
        .collect();
    for s in BasisState::all() {
        for t in BasisState::all() {
            if s.block() != t.block() && h.get(s.index, t.index) != 0.0 {
                return Err(SpinError::BlockLeak {
                    row: s.index,
                    col: t.index,
                });
            }
        }
    }
    Ok(blocks)
}

/// Extract a single block without the cross-block check.
pub fn block(p: &SpinParams, label: i8) -> Block {
    let h = build_hamiltonian(p);
    let indices = block_indices(label);
    let matrix = indices
        .iter()
        .map(|&i| indices.iter().map(|&j| h.get(i, j)).collect())
        .collect();
    Block { label, indices, matrix }
}

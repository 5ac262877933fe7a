//! Cyclic Jacobi eigensolver for the small symmetric blocks.

use super::SpinError;

pub const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`, with its
    /// largest-magnitude component positive.
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalize a symmetric matrix. Iterates until the off-diagonal Frobenius
/// norm drops below `tol`·‖A‖.
pub fn eigensolve_block(a: &[Vec<f64>], tol: f64) -> Result<Eigen, SpinError> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let off = |m: &[Vec<f64>]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > tol * norm {
        if sweeps == MAX_SWEEPS {
            return Err(SpinError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]).then(i.cmp(&j)));
    let values = order.iter().map(|&k| m[k][k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = v.iter().map(|row| row[k]).collect();
            let lead = col
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1.abs() + 1e-12 { (i, *x) } else { best })
                .1;
            if lead < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    Ok(Eigen { values, vectors })
}

impl Eigen {
    /// max_k ‖A v_k − λ_k v_k‖.
    pub fn max_residual(&self, a: &[Vec<f64>]) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&l, v)| {
                a.iter()
                    .zip(v)
                    .map(|(row, vi)| {
                        let av: f64 = row.iter().zip(v).map(|(x, y)| x * y).sum();
                        (av - l * vi).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// max |⟨v_i|v_j⟩ − δ_ij|.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                worst = worst.max((d - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::eigenvalues_by_bisection;
    use crate::spin::hamiltonian::block;
    use crate::spin::SpinParams;
    use proptest::prelude::*;

    #[test]
    fn trivial_blocks() {
        let e = eigensolve_block(&[vec![2.5]], 1e-14).unwrap();
        assert_eq!(e.values, vec![2.5]);
        assert_eq!(e.vectors, vec![vec![1.0]]);
        let g = 0.3;
        let e = eigensolve_block(&[vec![0.0, g], vec![g, 0.0]], 1e-14).unwrap();
        assert!((e.values[0] + g).abs() < 1e-15 && (e.values[1] - g).abs() < 1e-15);
    }

    #[test]
    fn six_by_six_matches_bisection_oracle() {
        let ratio = crate::constants::PhysicalConstants::default().nuclear_to_electron_zeeman();
        let p = SpinParams::new(1.0, ratio, 0.3, 0.4);
        let b = block(&p, 0);
        let e = eigensolve_block(&b.matrix, 1e-14).unwrap();
        let oracle = eigenvalues_by_bisection(&b.matrix, 1e-13);
        for (x, y) in e.values.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        assert!(e.max_residual(&b.matrix) < 1e-10);
        assert!(e.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn sign_convention() {
        let e = eigensolve_block(&[vec![1.0, -2.0], vec![-2.0, 1.0]], 1e-14).unwrap();
        for v in &e.vectors {
            let lead = v.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
            assert!(lead > 0.0);
        }
    }

    proptest! {
        #[test]
        fn random_symmetric(entries in prop::collection::vec(-1.0f64..1.0, 21)) {
            let n = 6;
            let mut a = vec![vec![0.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    a[i][j] = entries[k];
                    a[j][i] = entries[k];
                    k += 1;
                }
            }
            let e = eigensolve_block(&a, 1e-14).unwrap();
            let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(e.max_residual(&a) <= 1e-10 * norm.max(1.0));
            prop_assert!(e.orthonormality_defect() < 1e-10);
            let trace: f64 = (0..n).map(|i| a[i][i]).sum();
            prop_assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-12 * norm.max(1.0));
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

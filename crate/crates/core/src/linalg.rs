//! Small dense symmetric eigenproblems (n <= 16).

use crate::error::{Error, Result};
use crate::tensor::SymTensor;

/// Largest matrix size accepted by the eigen-solvers.
pub const MAX_DIM: usize = 16;

const MAX_SWEEPS: usize = 64;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let diag = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if !(diag > 0.0) {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                value: diag,
            });
        }
        let d = diag.sqrt();
        l[j][j] = d;
        for i in j + 1..n {
            let s = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = s / d;
        }
    }
    Ok(l)
}

/// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "eigen-solver supports n <= {MAX_DIM}, got {n}"
        )));
    }
    let scale = a.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() <= 1e-300 + f64::EPSILON * 1e-3 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Solves `L X = B` column by column for lower-triangular `L`.
fn forward_solve(l: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = l.len();
    let mut x = vec![vec![0.0; n]; n];
    for col in 0..n {
        for i in 0..n {
            let s = b[i][col] - (0..i).map(|k| l[i][k] * x[k][col]).sum::<f64>();
            x[i][col] = s / l[i][i];
        }
    }
    x
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

/// Smallest `lambda` with `det(T - lambda g) = 0`, for positive definite `g`.
pub fn min_generalized_eigenvalue(t: &SymTensor, g: &SymTensor) -> Result<f64> {
    if t.dim() != g.dim() {
        return Err(Error::InvalidArgument("tensor dimensions differ".into()));
    }
    let l = cholesky(&g.to_rows())?;
    // L^{-1} T L^{-T} = L^{-1} (L^{-1} T)^T since T is symmetric
    let half = forward_solve(&l, &t.to_rows());
    let mut m = forward_solve(&l, &transpose(&half));
    for i in 0..m.len() {
        for j in 0..i {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = avg;
            m[j][i] = avg;
        }
    }
    Ok(symmetric_eigenvalues(m)?[0])
}

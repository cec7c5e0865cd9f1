//! Small dense complex linear algebra: Hermitian eigendecomposition,
//! matrix exponentials and linear solves.
//!
//! Everything here targets the matrix sizes this crate actually meets
//! (dimension ≲ 200), so simple O(n³) routines with no external BLAS/LAPACK
//! dependency are the right trade-off.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Result, SimError};

pub use ndarray::linalg::kron;

/// Conjugate transpose.
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    let mut out = Array2::zeros((a.ncols(), a.nrows()));
    for ((i, j), v) in a.indexed_iter() {
        out[[j, i]] = v.conj();
    }
    out
}

/// Largest absolute entry.
pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest absolute entry of the difference a - b.
pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Check hermiticity against an absolute tolerance scaled by the matrix size.
pub fn is_hermitian(a: &Array2<C64>, tol: f64) -> bool {
    let n = a.nrows();
    if n != a.ncols() {
        return false;
    }
    for i in 0..n {
        if a[[i, i]].im.abs() > tol {
            return false;
        }
        for j in (i + 1)..n {
            if (a[[i, j]] - a[[j, i]].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Maximum column sum (induced 1-norm), used to pick exponential scalings.
pub fn one_norm(a: &Array2<C64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order and the matching
/// eigenvectors as the columns of a unitary matrix.
pub fn hermitian_eigen(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(SimError::InvalidModel(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let scale = max_abs(a).max(1.0);
    if !is_hermitian(a, 1e-10 * scale) {
        return Err(SimError::InvalidModel(
            "eigendecomposition input is not Hermitian".into(),
        ));
    }

    let mut m = a.clone();
    // Force exact hermiticity so rotations stay stable.
    for i in 0..n {
        m[[i, i]] = C64::new(m[[i, i]].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]].conj());
            m[[i, j]] = avg;
            m[[j, i]] = avg.conj();
        }
    }
    let mut v = Array2::<C64>::eye(n);

    let off =
        |m: &Array2<C64>| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += m[[i, j]].norm_sqr();
                }
            }
            s.sqrt()
        };

    let target = 1e-14 * scale;
    for _sweep in 0..100 {
        if off(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let phase = apq / apq.norm();
                // Zero the (p,q) entry: t solves t^2 + 2 tau t - 1 = 0 with
                // tau = (app - aqq) / (2 |apq|); take the root with |t| <= 1.
                let tau = (app - aqq) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);

                // Columns: col_p <- c col_p + conj(s) col_q ; col_q <- -s col_p + c col_q
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp + s.conj() * mkq;
                    m[[k, q]] = -s * mkp + c * mkq;
                }
                // Rows: row_p <- c row_p + s row_q ; row_q <- -conj(s) row_p + c row_q
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk + s * mqk;
                    m[[q, k]] = -s.conj() * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp + s.conj() * vkq;
                    v[[k, q]] = -s * vkp + c * vkq;
                }
            }
        }
    }
    if off(&m) > 1e-10 * scale {
        return Err(SimError::Numerical(
            "Jacobi eigendecomposition did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let mut vals = Array1::zeros(n);
    let mut vecs = Array2::zeros((n, n));
    for (col, &idx) in order.iter().enumerate() {
        vals[col] = eig[idx];
        for k in 0..n {
            vecs[[k, col]] = v[[k, idx]];
        }
    }
    Ok((vals, vecs))
}

/// exp(factor * H) for Hermitian H, via eigendecomposition. Exact up to the
/// eigensolver's accuracy, so it is the reference propagator for
/// piecewise-constant Hamiltonians.
pub fn expm_hermitian(h: &Array2<C64>, factor: C64) -> Result<Array2<C64>> {
    let (vals, vecs) = hermitian_eigen(h)?;
    let n = h.nrows();
    let mut out = Array2::<C64>::zeros((n, n));
    for k in 0..n {
        let e = (factor * vals[k]).exp();
        for i in 0..n {
            let vik = vecs[[i, k]] * e;
            for j in 0..n {
                out[[i, j]] += vik * vecs[[j, k]].conj();
            }
        }
    }
    Ok(out)
}

/// exp(A) for a general square matrix by scaling-and-squaring with a Taylor
/// kernel. Intended for mildly sized arguments (effective Hamiltonians times
/// a step); accuracy is ~1e-14 relative for ||A|| up to a few tens.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a.mapv(|z| z / 2f64.powi(s as i32));

    let mut term = Array2::<C64>::eye(n);
    let mut sum = Array2::<C64>::eye(n);
    for k in 1..=18 {
        term = term.dot(&b).mapv(|z| z / k as f64);
        sum = sum + &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..s {
        out = out.dot(&out);
    }
    out
}

/// Truncated Taylor propagator sum_{k<=order} A^k / k!. With `order = 4`
/// this is exactly the one-step map of the classical fourth-order
/// Runge-Kutta scheme applied to the autonomous linear system y' = A y.
pub fn taylor_propagator(a: &Array2<C64>, order: usize) -> Array2<C64> {
    let n = a.nrows();
    let mut term = Array2::<C64>::eye(n);
    let mut sum = Array2::<C64>::eye(n);
    for k in 1..=order {
        term = term.dot(a).mapv(|z| z / k as f64);
        sum = sum + &term;
    }
    sum
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve(a: &Array2<C64>, b: &Array1<C64>) -> Result<Array1<C64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(SimError::InvalidModel(
            "linear solve dimension mismatch".into(),
        ));
    }
    let mut m = a.clone();
    let mut rhs = b.clone();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[[col, col]].norm();
        for r in (col + 1)..n {
            let v = m[[r, col]].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(SimError::Numerical("singular linear system".into()));
        }
        if piv != col {
            for c in 0..n {
                let tmp = m[[col, c]];
                m[[col, c]] = m[[piv, c]];
                m[[piv, c]] = tmp;
            }
            rhs.swap(col, piv);
        }
        let inv = C64::new(1.0, 0.0) / m[[col, col]];
        for r in (col + 1)..n {
            let f = m[[r, col]] * inv;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[[col, c]];
                m[[r, c]] -= f * v;
            }
            let v = rhs[col];
            rhs[r] -= f * v;
        }
    }
    let mut x = Array1::<C64>::zeros(n);
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in (row + 1)..n {
            acc -= m[[row, c]] * x[c];
        }
        x[row] = acc / m[[row, row]];
    }
    Ok(x)
}

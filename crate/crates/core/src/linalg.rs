//! Small dense least squares.

use crate::error::{GreyError, Result};

/// Condition estimate above which a normal system is treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Solves `min ‖A·β − y‖²` for a tall design with `P` columns.
///
/// Columns are scaled to unit norm, so the normal matrix has unit
/// diagonal. Singularity is judged by the 1-norm condition of that scaled
/// normal matrix; the solution itself comes from Householder QR of the
/// scaled design.
pub fn least_squares<const P: usize>(rows: &[[f64; P]], y: &[f64]) -> Result<[f64; P]> {
    assert_eq!(rows.len(), y.len(), "design and target lengths differ");
    let singular = |condition: f64| GreyError::SingularSystem {
        condition,
        limit: CONDITION_LIMIT,
    };
    if rows.len() < P {
        return Err(singular(f64::INFINITY));
    }
    let mut normal = [[0.0; P]; P];
    for row in rows {
        for i in 0..P {
            for j in 0..P {
                normal[i][j] += row[i] * row[j];
            }
        }
    }

    let mut scale = [0.0; P];
    for i in 0..P {
        let d = normal[i][i];
        if !(d > 0.0) || !d.is_finite() {
            return Err(singular(f64::INFINITY));
        }
        scale[i] = 1.0 / d.sqrt();
    }
    for i in 0..P {
        for j in 0..P {
            normal[i][j] *= scale[i] * scale[j];
        }
    }

    let inverse = invert(normal).ok_or_else(|| singular(f64::INFINITY))?;
    let condition = norm1(&normal) * norm1(&inverse);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(singular(condition));
    }

    let scaled: Vec<[f64; P]> = rows
        .iter()
        .map(|row| std::array::from_fn(|j| row[j] * scale[j]))
        .collect();
    let mut beta = qr_solve(scaled, y.to_vec()).ok_or_else(|| singular(condition))?;
    for i in 0..P {
        beta[i] *= scale[i];
    }
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(singular(condition));
    }
    Ok(beta)
}

fn norm1<const P: usize>(m: &[[f64; P]; P]) -> f64 {
    (0..P)
        .map(|j| (0..P).map(|i| m[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting on an augmented system.
fn eliminate<const P: usize, const Q: usize>(mut m: [[f64; P]; P], mut rhs: [[f64; Q]; P]) -> Option<[[f64; Q]; P]> {
    for col in 0..P {
        let pivot = (col..P).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col] == 0.0 || !m[pivot][col].is_finite() {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..P {
            let f = m[row][col] / m[col][col];
            for k in col..P {
                m[row][k] -= f * m[col][k];
            }
            for q in 0..Q {
                rhs[row][q] -= f * rhs[col][q];
            }
        }
    }
    let mut out = [[0.0; Q]; P];
    for row in (0..P).rev() {
        for q in 0..Q {
            let mut acc = rhs[row][q];
            for k in row + 1..P {
                acc -= m[row][k] * out[k][q];
            }
            out[row][q] = acc / m[row][row];
        }
    }
    Some(out)
}

/// Householder QR of a tall matrix, then back substitution on `R·β = Qᵀy`.
fn qr_solve<const P: usize>(mut a: Vec<[f64; P]>, mut y: Vec<f64>) -> Option<[f64; P]> {
    let m = a.len();
    for col in 0..P {
        let norm = (col..m).map(|i| a[i][col] * a[i][col]).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        let alpha = if a[col][col] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (col..m).map(|i| a[i][col]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in col..P {
            let f = 2.0 * (col..m).map(|i| v[i - col] * a[i][j]).sum::<f64>() / vv;
            for i in col..m {
                a[i][j] -= f * v[i - col];
            }
        }
        let f = 2.0 * (col..m).map(|i| v[i - col] * y[i]).sum::<f64>() / vv;
        for i in col..m {
            y[i] -= f * v[i - col];
        }
    }
    let mut beta = [0.0; P];
    for row in (0..P).rev() {
        let mut acc = y[row];
        for k in row + 1..P {
            acc -= a[row][k] * beta[k];
        }
        if a[row][row] == 0.0 {
            return None;
        }
        beta[row] = acc / a[row][row];
    }
    Some(beta)
}

fn invert<const P: usize>(m: [[f64; P]; P]) -> Option<[[f64; P]; P]> {
    let mut id = [[0.0; P]; P];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    eliminate(m, id)
}

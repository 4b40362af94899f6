//! Brute-force vertex enumeration for small H-polyhedra.

/// Feasibility slack for a row `a·x <= b` at `x`, relative to the magnitudes
/// involved.
fn violation(a: &[f64], b: f64, x: &[f64]) -> f64 {
    let mut lhs = 0.0;
    let mut scale = 1.0 + b.abs();
    for (ai, xi) in a.iter().zip(x) {
        lhs += ai * xi;
        scale += (ai * xi).abs();
    }
    (lhs - b) / scale
}

pub(crate) const FEAS_TOL: f64 = 1e-9;

pub(crate) fn is_feasible(rows: &[(Vec<f64>, f64)], x: &[f64]) -> bool {
    rows.iter().all(|(a, b)| violation(a, *b, x) <= FEAS_TOL)
}

/// Solves the square system `m x = rhs` by Gaussian elimination with partial
/// pivoting; `None` when it is numerically singular.
pub(crate) fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

/// All feasible points where `n` linearly independent rows are tight.
///
/// Rows with infinite right-hand side must be filtered out by the caller.
pub(crate) fn enumerate_vertices(rows: &[(Vec<f64>, f64)], n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    if rows.len() < n {
        return out;
    }
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let m = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs = pick.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve(m, rhs) {
            if x.iter().all(|v| v.is_finite()) && is_feasible(rows, &x) {
                out.push(x);
            }
        }
        // Next combination in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < rows.len() - n + i {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..n {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

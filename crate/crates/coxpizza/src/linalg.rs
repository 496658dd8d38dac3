//! Small dense linear algebra over [`Scalar`].

use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zeros(ctx: &Field, n: usize) -> Vector {
    vec![Scalar::zero(ctx); n]
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(k: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| k * x).collect()
}

/// `a += k·b`
pub fn axpy(a: &mut [Scalar], k: &Scalar, b: &[Scalar]) {
    if k.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += &(k * y);
        }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let ctx = a[0].ctx().clone();
    let mut acc = Scalar::zero(&ctx);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn mat_vec(m: &[Vector], v: &[Scalar]) -> Vector {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Bilinear form `aᵀ G b`.
pub fn form(g: &[Vector], a: &[Scalar], b: &[Scalar]) -> Scalar {
    dot(a, &mat_vec(g, b))
}

/// Row-reduces a copy of `rows` and returns (rank, reduced rows, pivot columns).
pub fn row_reduce(rows: &[Vector]) -> (usize, Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    if m.is_empty() {
        return (0, m, Vec::new());
    }
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].inv().expect("pivot is nonzero");
        for j in col..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (r, m, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    row_reduce(rows).0
}

/// Solves `m x = b` for square invertible `m`.
pub fn solve(m: &[Vector], b: &[Scalar]) -> Option<Vector> {
    let n = m.len();
    let aug: Vec<Vector> = m
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let (rk, red, piv) = row_reduce(&aug);
    if rk < n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().take(n).map(|row| row[n].clone()).collect())
}

pub fn inverse(m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let ctx = m[0][0].ctx().clone();
    let aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Scalar::one(&ctx) } else { Scalar::zero(&ctx) });
            }
            r
        })
        .collect();
    let (rk, red, piv) = row_reduce(&aug);
    if rk < n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().map(|row| row[n..].to_vec()).collect())
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(rows: &[Vector], v: &[Scalar]) -> bool {
    if v.iter().all(Scalar::is_zero) {
        return true;
    }
    let base = rank(rows);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext) == base
}

//! Dense linear algebra over [`Coefficient`]s.
//!
//! Pivots are chosen as the first entry that is nonzero as a rational
//! function, so ranks of parameter-bearing matrices are generic ranks.

use crate::coeffield::Coefficient;

pub type Matrix = Vec<Vec<Coefficient>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Coefficient::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = Coefficient::one();
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(x * &b[k][j]);
                }
            }
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn map(a: &Matrix, f: impl Fn(&Coefficient) -> Coefficient) -> Matrix {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        m[r] = m[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = &m[i][j] - &(&factor * &m[r][j]);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// Basis of `{x : a·x = 0}` for a matrix with `cols` columns.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Coefficient>> {
    if a.is_empty() {
        return (0..cols)
            .map(|k| (0..cols).map(|j| if j == k { Coefficient::one() } else { Coefficient::zero() }).collect())
            .collect();
    }
    let (m, pivots) = rref(a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Coefficient::zero(); cols];
        v[free] = Coefficient::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[row][free];
        }
        basis.push(v);
    }
    basis
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Coefficient {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Coefficient::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Coefficient::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("pivot is nonzero");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..n {
                if !m[c][j].is_zero() {
                    m[i][j] = &m[i][j] - &(&factor * &m[c][j]);
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coefficient {
        Coefficient::int(n)
    }

    #[test]
    fn inverse_roundtrip() {
        let r = Coefficient::var("r");
        let a = vec![vec![r.clone(), q(1)], vec![q(2), q(3)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(2));
        assert_eq!(determinant(&a), &(&q(3) * &r) - &q(2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(inverse(&a).is_none());
        assert_eq!(rank(&a), 1);
        assert!(determinant(&a).is_zero());
        let ns = nullspace(&a, 2);
        assert_eq!(ns, vec![vec![q(-2), q(1)]]);
    }
}

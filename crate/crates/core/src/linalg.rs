//! Small dense linear algebra: LU with partial pivoting and rank estimation.
//!
//! The systems here are at most 12x16, so plain arrays and straightforward
//! elimination are all that is needed.

use crate::scalar::Real;

/// LU factorisation `P A = L U` of a square matrix, stored in place.
#[derive(Debug, Clone)]
pub struct Lu<T, const N: usize> {
    lu: [[T; N]; N],
    perm: [usize; N],
}

impl<T: Real, const N: usize> Lu<T, N> {
    /// Factorises `a`. Returns `None` when a pivot falls below
    /// `N * eps * max|a_ij|`.
    pub fn factor(mut a: [[T; N]; N]) -> Option<Self> {
        let scale = a
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, v| m.max(v.abs()));
        if !(scale > T::zero()) || !scale.is_finite() {
            return None;
        }
        let tiny = T::from_usize(N).unwrap() * T::epsilon() * scale;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        for k in 0..N {
            let (piv, pval) = (k..N)
                .map(|i| (i, a[i][k].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pval <= tiny {
                return None;
            }
            if piv != k {
                a.swap(piv, k);
                perm.swap(piv, k);
            }
            let d = a[k][k];
            for i in (k + 1)..N {
                let m = a[i][k] / d;
                a[i][k] = m;
                if m != T::zero() {
                    for j in (k + 1)..N {
                        let u = a[k][j];
                        a[i][j] = a[i][j] - m * u;
                    }
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    pub fn solve(&self, b: &[T; N]) -> [T; N] {
        let mut x = [T::zero(); N];
        for i in 0..N {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s = s - self.lu[i][j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..N).rev() {
            let mut s = x[i];
            for j in (i + 1)..N {
                s = s - self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }
}

/// Numerical rank by Gaussian elimination with full pivoting.
///
/// A pivot counts when it exceeds `rel_tol * max|a_ij|`.
pub fn numeric_rank<T: Real>(rows: &[Vec<T>], rel_tol: T) -> usize {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut rank = 0;
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..m.min(n) {
        let mut best = (k, k, T::zero());
        for i in k..m {
            for (jj, &j) in cols.iter().enumerate().skip(k) {
                let v = a[i][j].abs();
                if v > best.2 {
                    best = (i, jj, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        a.swap(k, best.0);
        cols.swap(k, best.1);
        let pc = cols[k];
        let p = a[k][pc];
        for i in (k + 1)..m {
            let f = a[i][pc] / p;
            if f != T::zero() {
                for &j in cols.iter().skip(k) {
                    let u = a[k][j];
                    a[i][j] = a[i][j] - f * u;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank of an integer matrix (fraction-free Bareiss elimination).
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    let mut col = 0;
    while rank < m && col < n {
        let Some(piv) = (rank..m).find(|&i| a[i][col] != 0) else {
            col += 1;
            continue;
        };
        a.swap(rank, piv);
        for i in (rank + 1)..m {
            for j in (col + 1)..n {
                a[i][j] = (a[i][j] * a[rank][col] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a: [[f64; 3]; 3] = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let lu = Lu::factor(a).unwrap();
        let x = lu.solve(&[3.0, 5.0, 5.0]);
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_rejects_singular() {
        let a = [[1.0, 2.0], [2.0, 4.0]];
        assert!(Lu::<f64, 2>::factor(a).is_none());
        assert!(Lu::<f64, 2>::factor([[0.0; 2]; 2]).is_none());
    }

    #[test]
    fn lu_needs_pivoting() {
        let a = [[0.0, 1.0], [1.0, 0.0]];
        let x = Lu::factor(a).unwrap().solve(&[2.0, 3.0]);
        assert_eq!(x, [3.0, 2.0]);
    }

    #[test]
    fn ranks_agree_on_rank_deficient_matrix() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(integer_rank(&rows), 2);
        let fr: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| v as f64).collect())
            .collect();
        assert_eq!(numeric_rank(&fr, 1e-12), 2);
    }

    #[test]
    fn integer_rank_handles_zero_columns() {
        let rows = vec![vec![0, 1, 0], vec![0, 0, 2], vec![0, 3, 0]];
        assert_eq!(integer_rank(&rows), 2);
        assert_eq!(integer_rank(&[vec![0, 0]]), 0);
    }
}

//! Small dense exact linear systems over Q(i).

use crate::series::Scalar;

/// Solution set of A·x = b: `particular` (free variables set to 0) plus a null-space basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinSolution {
    pub particular: Vec<Scalar>,
    pub nullspace: Vec<Vec<Scalar>>,
    pub free_vars: Vec<usize>,
}

impl LinSolution {
    pub fn is_unique(&self) -> bool {
        self.free_vars.is_empty()
    }

    /// particular + Σ wᵢ·nullspaceᵢ.
    pub fn with_free(&self, weights: &[Scalar]) -> Vec<Scalar> {
        let mut x = self.particular.clone();
        for (w, v) in weights.iter().zip(&self.nullspace) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &(w * vi);
            }
        }
        x
    }
}

/// Gauss–Jordan elimination. Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<LinSolution> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let free_vars: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Scalar::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    let nullspace = free_vars
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -&m[i][f];
            }
            v
        })
        .collect();
    Some(LinSolution { particular, nullspace, free_vars })
}

/// A·x.
pub fn mat_vec(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Columns of a linear map given as a closure on coordinate vectors of length `n`.
pub fn matrix_of(n: usize, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let zero = vec![Scalar::zero(); n];
    let offset = f(&zero);
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = zero.clone();
        e[k] = Scalar::one();
        let v = f(&e);
        cols.push(v.iter().zip(&offset).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let rows = offset.len();
    let a = (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    (a, offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn unique_solution() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        let s = solve(&a, &v(&[3, 5])).unwrap();
        assert!(s.is_unique());
        assert_eq!(s.particular, vec![Scalar::frac(4, 5), Scalar::frac(7, 5)]);
    }

    #[test]
    fn free_variable_and_nullspace() {
        let a = vec![v(&[1, 1, 0]), v(&[0, 0, 1])];
        let s = solve(&a, &v(&[2, 3])).unwrap();
        assert_eq!(s.free_vars, vec![1]);
        let x = s.with_free(&[Scalar::int(5)]);
        assert_eq!(mat_vec(&a, &x), v(&[2, 3]));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![v(&[1, 1]), v(&[2, 2])];
        assert!(solve(&a, &v(&[1, 3])).is_none());
    }

    #[test]
    fn affine_map_extraction() {
        let (a, off) = matrix_of(2, |x| vec![&x[0] + &Scalar::int(1), &x[0] - &x[1]]);
        assert_eq!(off, v(&[1, 0]));
        assert_eq!(a, vec![v(&[1, 0]), v(&[1, -1])]);
    }
}

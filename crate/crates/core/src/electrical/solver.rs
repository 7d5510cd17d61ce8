//! Symmetric positive definite solves: Jacobi-preconditioned conjugate
//! gradients, with dense elimination for small systems.

use crate::error::{Error, Result};

/// Systems with fewer unknowns than this are solved densely.
pub const DENSE_LIMIT: usize = 500;

/// Compressed sparse rows, assembled from triplets.
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<f64>,
}

impl Csr {
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Csr {
        t.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<f64> = Vec::with_capacity(t.len());
        let mut last = None;
        for (i, j, v) in t {
            if last == Some((i, j)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(j);
                val.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr {
            n,
            row_ptr,
            col,
            val,
        }
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[p] * x[self.col[p]];
            }
            *yi = s;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .find(|&p| self.col[p] == i)
                    .map_or(0.0, |p| self.val[p])
            })
            .collect()
    }

    fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                a[i * self.n + self.col[p]] += self.val[p];
            }
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dense,
    ConjugateGradient,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub method: Method,
    pub iterations: usize,
}

/// Solves `a x = b` for a symmetric positive definite `a`.
pub fn solve_spd(a: &Csr, b: &[f64], tol: f64) -> Result<Solution> {
    if a.n < DENSE_LIMIT {
        let x = dense_solve(a.n, a.to_dense(), b.to_vec())?;
        return Ok(Solution {
            x,
            method: Method::Dense,
            iterations: 0,
        });
    }
    cg(a, b, tol)
}

/// Gaussian elimination with partial pivoting on a row-major matrix.
pub fn dense_solve(n: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        if a[p * n + k] == 0.0 {
            return Err(Error::SolverDiverged {
                residual: f64::INFINITY,
                iterations: 0,
            });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k * n + j] * x[j];
        }
        x[k] = s / a[k * n + k];
    }
    Ok(x)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cg(a: &Csr, b: &[f64], tol: f64) -> Result<Solution> {
    let n = a.n;
    let dinv: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(Solution {
            x,
            method: Method::ConjugateGradient,
            iterations: 0,
        });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let max_iter = 20 * n + 1000;
    for it in 1..=max_iter {
        a.mul(&p, &mut q);
        let alpha = rz / dot(&p, &q);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= tol * bnorm {
            return Ok(Solution {
                x,
                method: Method::ConjugateGradient,
                iterations: it,
            });
        }
        for i in 0..n {
            z[i] = r[i] * dinv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = dot(&r, &r).sqrt();
    Err(Error::SolverDiverged {
        residual: rnorm / bnorm,
        iterations: max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // 1-D Dirichlet Laplacian, whose solution for b = e_0 is linear.
    fn chain(n: usize) -> Csr {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        Csr::from_triplets(n, t)
    }

    #[test]
    fn dense_and_cg_agree_on_a_chain() {
        for n in [5, 800] {
            let a = chain(n);
            let mut b = vec![0.0; n];
            b[0] = 1.0;
            let s = solve_spd(&a, &b, 1e-13).unwrap();
            assert_eq!(s.method == Method::Dense, n < DENSE_LIMIT);
            for (i, x) in s.x.iter().enumerate() {
                let exact = (n - i) as f64 / (n + 1) as f64;
                assert!((x - exact).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn duplicate_triplets_are_summed() {
        let a = Csr::from_triplets(1, vec![(0, 0, 1.0), (0, 0, 2.0)]);
        let mut y = [0.0];
        a.mul(&[2.0], &mut y);
        assert_eq!(y[0], 6.0);
    }
}

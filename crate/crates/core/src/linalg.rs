//! Dense factorizations for grounded Laplacians.
//!
//! Grounded Laplacians of connected graphs are symmetric positive definite,
//! so Cholesky is the normal path. If a pivot collapses relative to the
//! largest diagonal entry the matrix is refactored by Gaussian elimination
//! with full pivoting.

#[derive(Clone, Debug)]
pub struct DenseMatrix {
    n: usize,
    a: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

const PIVOT_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug)]
pub enum Factorization {
    /// Lower-triangular `L` with `A = L Lᵀ`.
    Cholesky(DenseMatrix),
    /// `P A Q = L U` packed in one matrix, unit diagonal on `L`.
    FullPivotLu {
        lu: DenseMatrix,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
    },
}

impl Factorization {
    pub fn new(a: &DenseMatrix) -> Self {
        cholesky(a).unwrap_or_else(|| full_pivot_lu(a))
    }

    pub fn is_cholesky(&self) -> bool {
        matches!(self, Factorization::Cholesky(_))
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            Factorization::Cholesky(l) => {
                let n = l.n();
                let mut y = rhs.to_vec();
                for i in 0..n {
                    let s: f64 = (0..i).map(|k| l.get(i, k) * y[k]).sum();
                    y[i] = (y[i] - s) / l.get(i, i);
                }
                for i in (0..n).rev() {
                    let s: f64 = (i + 1..n).map(|k| l.get(k, i) * y[k]).sum();
                    y[i] = (y[i] - s) / l.get(i, i);
                }
                y
            }
            Factorization::FullPivotLu { lu, row_perm, col_perm } => {
                let n = lu.n();
                let mut y: Vec<f64> = row_perm.iter().map(|&r| rhs[r]).collect();
                for i in 0..n {
                    let s: f64 = (0..i).map(|k| lu.get(i, k) * y[k]).sum();
                    y[i] -= s;
                }
                for i in (0..n).rev() {
                    let s: f64 = (i + 1..n).map(|k| lu.get(i, k) * y[k]).sum();
                    y[i] = (y[i] - s) / lu.get(i, i);
                }
                let mut x = vec![0.0; n];
                for (k, &c) in col_perm.iter().enumerate() {
                    x[c] = y[k];
                }
                x
            }
        }
    }
}

fn cholesky(a: &DenseMatrix) -> Option<Factorization> {
    let n = a.n();
    let scale = (0..n).map(|i| a.get(i, i).abs()).fold(0.0, f64::max);
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let s: f64 = (0..j).map(|k| l.get(j, k) * l.get(j, k)).sum();
        let d = a.get(j, j) - s;
        if !(d > PIVOT_FLOOR * scale) {
            return None;
        }
        let root = d.sqrt();
        l.set(j, j, root);
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l.get(i, k) * l.get(j, k)).sum();
            l.set(i, j, (a.get(i, j) - s) / root);
        }
    }
    Some(Factorization::Cholesky(l))
}

fn full_pivot_lu(a: &DenseMatrix) -> Factorization {
    let n = a.n();
    let mut lu = a.clone();
    let mut row_perm: Vec<usize> = (0..n).collect();
    let mut col_perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = lu.get(i, j).abs();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if pi != k {
            for j in 0..n {
                let (u, v) = (lu.get(k, j), lu.get(pi, j));
                lu.set(k, j, v);
                lu.set(pi, j, u);
            }
            row_perm.swap(k, pi);
        }
        if pj != k {
            for i in 0..n {
                let (u, v) = (lu.get(i, k), lu.get(i, pj));
                lu.set(i, k, v);
                lu.set(i, pj, u);
            }
            col_perm.swap(k, pj);
        }
        let pivot = lu.get(k, k);
        if pivot == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let m = lu.get(i, k) / pivot;
            lu.set(i, k, m);
            for j in k + 1..n {
                lu.add(i, j, -m * lu.get(k, j));
            }
        }
    }
    Factorization::FullPivotLu { lu, row_perm, col_perm }
}

//! Reference computations that share no code with the library: plain sums,
//! Gaussian elimination with partial pivoting, and the Leibniz permutation
//! expansion of a determinant.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw columns by name; `"1"` is the all-ones column.
pub struct Columns<'a> {
    pub names: Vec<&'a str>,
    pub values: Vec<Vec<f64>>,
}

impl<'a> Columns<'a> {
    pub fn get(&self, name: &str) -> Vec<f64> {
        if name == "1" {
            return vec![1.0; self.values[0].len()];
        }
        let i = self.names.iter().position(|n| *n == name).expect("column");
        self.values[i].clone()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normal equations `G α = r` from raw columns with naive summation.
pub fn normal_equations(cols: &Columns, response: &str, regressors: &[&str]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let regs: Vec<Vec<f64>> = regressors.iter().map(|r| cols.get(r)).collect();
    let d = cols.get(response);
    let gram = regs
        .iter()
        .map(|a| regs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs = regs.iter().map(|a| dot(a, &d)).collect();
    (gram, rhs)
}

/// Gaussian elimination with partial pivoting.
pub fn solve_gauss(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut perms = Vec::new();
    go(&mut Vec::new(), n, &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

/// `Σ_σ sgn(σ) ∏ m[i][σ(i)]`.
pub fn det_leibniz(m: &[Vec<f64>]) -> f64 {
    permutations(m.len())
        .into_iter()
        .map(|(p, sign)| sign * p.iter().enumerate().map(|(i, &j)| m[i][j]).product::<f64>())
        .sum()
}

/// Same expansion with the magnitude of every term summed, for tolerances.
pub fn det_leibniz_magnitude(m: &[Vec<f64>]) -> f64 {
    permutations(m.len())
        .into_iter()
        .map(|(p, _)| p.iter().enumerate().map(|(i, &j)| m[i][j].abs()).product::<f64>())
        .sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three independent columns with varied offsets and scales; `n` rows.
pub fn random_columns(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..3)
        .map(|_| {
            let offset = rng.random_range(-2.0..2.0);
            let scale = rng.random_range(1.0..4.0);
            (0..n)
                .map(|_| offset + scale * rng.random_range(-1.0..1.0))
                .collect()
        })
        .collect()
}

/// `|a − b| ≤ tol · max(|b|, floor)`.
pub fn rel_close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(floor)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

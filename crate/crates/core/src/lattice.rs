//! Vertex sums, joins and the determinant measures built from them.
//!
//! A vertex `V(a, b)` is the sum over rows of the product of directions `a`
//! and `b`. A join multiplies two or three vertices, and every determinant
//! measure (variance, covariance, internal covariance, base variance and the
//! 3x3 Cramer determinants) is a signed sum of joins.

use std::collections::HashMap;
use std::fmt;

use crate::dataset::{Dataset, Direction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cached vertex sums for every pair of a set of directions.
#[derive(Debug, Clone)]
pub struct Lattice<T> {
    n: usize,
    directions: Vec<Direction>,
    index: HashMap<Direction, usize>,
    // Row-major k x k, symmetric.
    vertices: Vec<T>,
}

impl<T: Scalar> Lattice<T> {
    /// Computes all pairwise vertices over `dirs`, which must include unity.
    /// Repeated directions are cached once.
    pub fn build(data: &Dataset<T>, dirs: &[Direction]) -> Result<Self> {
        if data.n() == 0 {
            return Err(Error::EmptyData);
        }
        if !dirs.iter().any(Direction::is_unity) {
            return Err(Error::Precondition(
                "lattice directions must include unity".into(),
            ));
        }
        let mut directions: Vec<Direction> = Vec::with_capacity(dirs.len());
        for d in dirs {
            data.check(d)?;
            if !directions.contains(d) {
                directions.push(d.clone());
            }
        }
        let rows = directions
            .iter()
            .map(|d| data.evaluate(d))
            .collect::<Result<Vec<_>>>()?;

        let k = directions.len();
        let mut vertices = vec![T::zero(); k * k];
        for i in 0..k {
            for j in i..k {
                let v = T::sum(
                    rows[i]
                        .iter()
                        .zip(&rows[j])
                        .map(|(a, b)| a.clone() * b.clone()),
                );
                vertices[i * k + j] = v.clone();
                vertices[j * k + i] = v;
            }
        }
        let index = directions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        Ok(Lattice {
            n: data.n(),
            directions,
            index,
            vertices,
        })
    }

    /// Lattice over unity and the named columns.
    pub fn for_columns(data: &Dataset<T>, columns: &[&str]) -> Result<Self> {
        let mut dirs = vec![Direction::unity()];
        dirs.extend(columns.iter().map(|c| Direction::column(*c)));
        Lattice::build(data, &dirs)
    }

    /// Number of rows in the source dataset.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Highest vertex level cached: the largest factor count of any pair.
    pub fn order(&self) -> usize {
        let mut levels: Vec<usize> = self.directions.iter().map(Direction::level).collect();
        levels.sort_unstable();
        levels.iter().rev().take(2).sum()
    }

    pub fn contains(&self, dir: &Direction) -> bool {
        self.index.contains_key(dir)
    }

    /// `V(a, b)`.
    pub fn vertex(&self, a: &Direction, b: &Direction) -> Result<T> {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => Ok(self.vertices[i * self.directions.len() + j].clone()),
            _ => Err(Error::MissingVertex(a.to_string(), b.to_string())),
        }
    }

    /// Product of two or three vertices.
    pub fn join(&self, pairs: &[(&Direction, &Direction)]) -> Result<T> {
        if !(2..=3).contains(&pairs.len()) {
            return Err(Error::Precondition(format!(
                "a join takes 2 or 3 vertices, got {}",
                pairs.len()
            )));
        }
        pairs
            .iter()
            .try_fold(T::one(), |acc, (a, b)| Ok(acc * self.vertex(a, b)?))
    }

    /// `V(a,b) V(c,d) - V(a,d) V(c,b)`.
    pub fn det2(&self, a: &Direction, b: &Direction, c: &Direction, d: &Direction) -> Result<T> {
        Ok(self.join(&[(a, b), (c, d)])? - self.join(&[(a, d), (c, b)])?)
    }

    /// Determinant of the 3x3 matrix `M[i][j] = V(rows[i], cols[j])`.
    pub fn det3_general(&self, rows: [&Direction; 3], cols: [&Direction; 3]) -> Result<T> {
        for r in rows {
            for c in cols {
                self.vertex(r, c)?;
            }
        }
        let m: [[T; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| self.vertex(rows[i], cols[j]).expect("checked above"))
        });
        Ok(det3(&m))
    }

    /// Value of any determinant measure.
    pub fn determinant(&self, kind: &DeterminantKind) -> Result<T> {
        let one = Direction::unity();
        match kind {
            DeterminantKind::Variance(a) => self.det2(&one, &one, a, a),
            DeterminantKind::Covariance(a, b) => self.det2(&one, &one, a, b),
            DeterminantKind::InternalCovariance(a, b) => self.det2(&one, b, a, a),
            DeterminantKind::BaseVariance(a, b) => self.det2(a, a, b, b),
            DeterminantKind::General2(a, b, c, d) => self.det2(a, b, c, d),
            DeterminantKind::Form1(a, b, c) => self.det3_general([a, b, c], [a, b, c]),
            DeterminantKind::Form2(a, b, c, d) => self.det3_general([a, b, c], [d, b, c]),
        }
    }

    /// Form I / Form II 3x3 determinants only.
    pub fn form_determinant(&self, form: &DeterminantKind) -> Result<T> {
        match form {
            DeterminantKind::Form1(..) | DeterminantKind::Form2(..) => self.determinant(form),
            other => Err(Error::Precondition(format!(
                "{other} is not a Form I or Form II determinant"
            ))),
        }
    }

    /// `Δ / n²`: the population-scaled variance-style measures.
    pub fn scaled_sigma(&self, kind: &DeterminantKind) -> Result<T> {
        match kind {
            DeterminantKind::Variance(_)
            | DeterminantKind::Covariance(..)
            | DeterminantKind::InternalCovariance(..)
            | DeterminantKind::BaseVariance(..) => {
                let n = T::from_usize(self.n).expect("row count representable");
                Ok(self.determinant(kind)? / (n.clone() * n))
            }
            other => Err(Error::Precondition(format!(
                "{other} has no n²-scaled form"
            ))),
        }
    }
}

/// Cofactor expansion along the first row.
pub fn det3<T: Scalar>(m: &[[T; 3]; 3]) -> T {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
        + m[0][2].clone() * minor(1, 2, 0, 1)
}

/// The named determinant measures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DeterminantKind {
    /// `Δ_11aa = nΣa² − (Σa)²`.
    Variance(Direction),
    /// `Δ_11ab = nΣab − ΣaΣb`.
    Covariance(Direction, Direction),
    /// `Δ_1baa = ΣbΣa² − ΣaΣab`; `InternalCovariance(x, y)` is `Δ_1yxx`.
    InternalCovariance(Direction, Direction),
    /// `Δ_aabb = Σa²Σb² − (Σab)²`.
    BaseVariance(Direction, Direction),
    /// `Δ_abcd = V(a,b)V(c,d) − V(a,d)V(c,b)`.
    General2(Direction, Direction, Direction, Direction),
    /// `Δ_aabbcc`: rows and columns `(a, b, c)`.
    Form1(Direction, Direction, Direction),
    /// `Δ_adbbcc`: rows `(a, b, c)`, columns `(d, b, c)`.
    Form2(Direction, Direction, Direction, Direction),
}

impl DeterminantKind {
    /// Subscript of the measure, e.g. `11xx` or `1yxx`.
    pub fn subscript(&self) -> String {
        let one = Direction::unity();
        let parts: Vec<&Direction> = match self {
            DeterminantKind::Variance(a) => vec![&one, &one, a, a],
            DeterminantKind::Covariance(a, b) => vec![&one, &one, a, b],
            DeterminantKind::InternalCovariance(a, b) => vec![&one, b, a, a],
            DeterminantKind::BaseVariance(a, b) => vec![a, a, b, b],
            DeterminantKind::General2(a, b, c, d) => vec![a, b, c, d],
            DeterminantKind::Form1(a, b, c) => vec![a, a, b, b, c, c],
            DeterminantKind::Form2(a, b, c, d) => vec![a, d, b, b, c, c],
        };
        let labels: Vec<String> = parts.iter().map(|d| d.to_string()).collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join("_")
        }
    }
}

impl fmt::Display for DeterminantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ_{}", self.subscript())
    }
}

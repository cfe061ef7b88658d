//! Measure axes and the column store they are evaluated against.

use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::scalar::{product, Scalar};

/// A measure axis: unity, a single column, or a product of columns.
///
/// Factors are kept sorted, so equality is multiset equality and `x*y`
/// and `y*x` are the same direction. No factors means unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    factors: Vec<String>,
}

impl Direction {
    pub fn unity() -> Self {
        Direction {
            factors: Vec::new(),
        }
    }

    pub fn column(name: impl Into<String>) -> Self {
        Direction {
            factors: vec![name.into()],
        }
    }

    pub fn product<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut factors: Vec<String> = names.into_iter().map(Into::into).collect();
        factors.sort();
        Direction { factors }
    }

    /// Direction whose value at each row is `self * other`.
    pub fn times(&self, other: &Direction) -> Self {
        Direction::product(self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn is_unity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    /// Number of factors; unity sits at level zero.
    pub fn level(&self) -> usize {
        self.factors.len()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unity() {
            f.write_str("1")
        } else {
            f.write_str(&self.factors.join("*"))
        }
    }
}

impl From<&str> for Direction {
    /// `"1"` is unity, anything else a single column.
    fn from(name: &str) -> Self {
        if name == "1" {
            Direction::unity()
        } else {
            Direction::column(name)
        }
    }
}

/// Named numeric columns of a common length `n >= 1`, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    columns: IndexMap<String, Vec<T>>,
    n: usize,
}

impl<T: Scalar> Dataset<T> {
    /// Builds a dataset, checking lengths, finiteness and name uniqueness.
    pub fn new<I, S>(columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<T>)>,
        S: Into<String>,
    {
        let mut map = IndexMap::new();
        let mut n = None;
        for (name, values) in columns {
            let name = name.into();
            let expected = *n.get_or_insert(values.len());
            if values.len() != expected {
                return Err(Error::LengthMismatch {
                    column: name,
                    expected,
                    found: values.len(),
                });
            }
            if let Some(row) = values.iter().position(|v| !v.is_finite_value()) {
                return Err(Error::NonFinite { column: name, row });
            }
            if map.contains_key(&name) {
                return Err(Error::DuplicateColumn(name));
            }
            map.insert(name, values);
        }
        match n {
            Some(n) if n > 0 => Ok(Dataset { columns: map, n }),
            _ => Err(Error::EmptyData),
        }
    }

    /// Convenience constructor from `f64` slices, converting into `T`.
    pub fn from_f64(columns: &[(&str, &[f64])]) -> Result<Self> {
        let mut converted = Vec::with_capacity(columns.len());
        for (name, values) in columns {
            let mut out = Vec::with_capacity(values.len());
            for (row, v) in values.iter().enumerate() {
                match T::from_f64(*v).filter(|_| v.is_finite()) {
                    Some(x) => out.push(x),
                    None => {
                        return Err(Error::NonFinite {
                            column: (*name).to_string(),
                            row,
                        })
                    }
                }
            }
            converted.push((*name, out));
        }
        Dataset::new(converted)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn column(&self, name: &str) -> Result<&[T]> {
        self.columns
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::ColumnNotFound(name.to_string()))
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[T])> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Checks that every factor of `dir` names a column.
    pub fn check(&self, dir: &Direction) -> Result<()> {
        for f in dir.factors() {
            self.column(f)?;
        }
        Ok(())
    }

    /// Row-wise values of a direction: the product of its factor columns.
    pub fn evaluate(&self, dir: &Direction) -> Result<Vec<T>> {
        let cols = dir
            .factors()
            .iter()
            .map(|f| self.column(f))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.n)
            .map(|i| product(cols.iter().map(|c| c[i].clone())))
            .collect())
    }

    /// Appends a column; fails on a duplicate name or wrong length.
    pub fn with_column(mut self, name: impl Into<String>, values: Vec<T>) -> Result<Self> {
        let name = name.into();
        if self.columns.contains_key(&name) {
            return Err(Error::DuplicateColumn(name));
        }
        if values.len() != self.n {
            return Err(Error::LengthMismatch {
                column: name,
                expected: self.n,
                found: values.len(),
            });
        }
        if let Some(row) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { column: name, row });
        }
        self.columns.insert(name, values);
        Ok(self)
    }

    /// Every row repeated `k` times (row order preserved). `k` must be positive.
    pub fn replicate(&self, k: usize) -> Self {
        assert!(k > 0, "replication factor must be positive");
        let columns = self
            .columns
            .iter()
            .map(|(name, values)| {
                let rows = values
                    .iter()
                    .flat_map(|v| std::iter::repeat_n(v.clone(), k))
                    .collect();
                (name.clone(), rows)
            })
            .collect();
        Dataset {
            columns,
            n: self.n * k,
        }
    }

    /// Converts every value into another scalar type.
    pub fn map_scalar<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Result<Dataset<U>> {
        Dataset::new(
            self.columns
                .iter()
                .map(|(name, values)| (name.clone(), values.iter().map(&mut f).collect())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_equality_is_multiset() {
        assert_eq!(
            Direction::product(["x", "y"]),
            Direction::product(["y", "x"])
        );
        assert_ne!(
            Direction::product(["x", "x"]),
            Direction::product(["x"])
        );
        let xy = Direction::column("x").times(&Direction::column("y"));
        assert_eq!(xy, Direction::product(["y", "x"]));
        assert_eq!(xy.to_string(), "x*y");
        assert_eq!(Direction::unity().to_string(), "1");
        assert!(Direction::from("1").is_unity());
        assert_eq!(Direction::unity().times(&xy), xy);
    }

    #[test]
    fn dataset_rejects_bad_shapes() {
        let ragged = Dataset::<f64>::new([("x", vec![1.0, 2.0]), ("y", vec![1.0])]);
        assert!(matches!(ragged, Err(Error::LengthMismatch { .. })));
        let empty = Dataset::<f64>::new([("x", vec![])]);
        assert_eq!(empty, Err(Error::EmptyData));
        let none = Dataset::<f64>::new(Vec::<(String, Vec<f64>)>::new());
        assert_eq!(none, Err(Error::EmptyData));
        let nan = Dataset::<f64>::new([("x", vec![1.0, f64::NAN])]);
        assert!(matches!(nan, Err(Error::NonFinite { row: 1, .. })));
        let dup = Dataset::<f64>::new([("x", vec![1.0]), ("x", vec![2.0])]);
        assert!(matches!(dup, Err(Error::DuplicateColumn(_))));
    }

    #[test]
    fn evaluate_products() {
        let d = Dataset::<f64>::from_f64(&[("x", &[1.0, 2.0, 3.0]), ("y", &[2.0, 3.0, 5.0])])
            .unwrap();
        assert_eq!(d.evaluate(&Direction::unity()).unwrap(), vec![1.0; 3]);
        assert_eq!(
            d.evaluate(&Direction::product(["x", "y"])).unwrap(),
            vec![2.0, 6.0, 15.0]
        );
        assert_eq!(
            d.evaluate(&Direction::column("q")),
            Err(Error::ColumnNotFound("q".into()))
        );
    }

    #[test]
    fn replicate_repeats_rows() {
        let d = Dataset::<f64>::from_f64(&[("x", &[1.0, 2.0])]).unwrap();
        let r = d.replicate(3);
        assert_eq!(r.n(), 6);
        assert_eq!(r.column("x").unwrap(), &[1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
    }
}

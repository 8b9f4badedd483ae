use std::fmt;
use std::ops::Index;

use num::{One, Signed, Zero};

use super::rat::{format_rat, Rat};

/// Dense rational vector with explicit dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Rat>);

impl Vector {
    pub fn new(entries: Vec<Rat>) -> Self {
        Vector(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rat::zero(); dim])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = vec![Rat::zero(); dim];
        v[i] = Rat::one();
        Vector(v)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&n| super::rat(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, factor: &Rat) -> Vector {
        Vector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rat, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }

    /// Scales to the unique positively proportional vector whose entries
    /// are coprime integers. The zero vector is returned unchanged.
    pub fn primitive(&self) -> Vector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.0.iter().fold(num::BigInt::one(), |acc, r| {
            num::integer::lcm(acc, r.denom().clone())
        });
        let ints: Vec<num::BigInt> = self
            .0
            .iter()
            .map(|r| (r * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(num::BigInt::zero(), |acc, n| {
            num::integer::gcd(acc, n.clone())
        });
        Vector(
            ints.into_iter()
                .map(|n| Rat::from_integer(n / &gcd))
                .collect(),
        )
    }

    /// If `other == t * self` for some rational `t > 0`, returns `t`.
    pub fn positive_scalar_to(&self, other: &Vector) -> Option<Rat> {
        if self.dim() != other.dim() || self.is_zero() || other.is_zero() {
            return None;
        }
        let k = self.0.iter().position(|r| !r.is_zero())?;
        if other.0[k].is_zero() {
            return None;
        }
        let t = &other.0[k] / &self.0[k];
        if !t.is_positive() {
            return None;
        }
        (&self.scaled(&t) == other).then_some(t)
    }
}

impl Index<usize> for Vector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(r))?;
        }
        write!(f, ")")
    }
}

impl FromIterator<Rat> for Vector {
    fn from_iter<T: IntoIterator<Item = Rat>>(iter: T) -> Self {
        Vector(iter.into_iter().collect())
    }
}

/// Dense rational matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vector>,
}

impl Matrix {
    pub fn from_rows(ncols: usize, rows: Vec<Vector>) -> Self {
        for row in &rows {
            assert_eq!(row.dim(), ncols, "ragged matrix row");
        }
        Matrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.ncols).map(|j| self.column(j)).collect();
        Matrix::from_rows(self.nrows, rows)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.ncols);
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    /// Rank by fraction-free (Bareiss) elimination on the integer matrix
    /// obtained by clearing denominators row by row.
    pub fn rank(&self) -> usize {
        use num::BigInt;
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, r| {
                    num::integer::lcm(acc, r.denom().clone())
                });
                row.iter()
                    .map(|r| (r * Rat::from_integer(lcm.clone())).to_integer())
                    .collect()
            })
            .collect();

        let mut rank = 0;
        let mut prev_pivot = BigInt::one();
        for col in 0..self.ncols {
            let Some(pivot_row) = (rank..self.nrows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot_row);
            for i in rank + 1..self.nrows {
                for j in col + 1..self.ncols {
                    let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    m[i][j] = num / &prev_pivot;
                }
                m[i][col] = BigInt::zero();
            }
            prev_pivot = m[rank][col].clone();
            rank += 1;
            if rank == self.nrows {
                break;
            }
        }
        rank
    }
}

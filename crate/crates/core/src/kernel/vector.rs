use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::rat::Rat;

/// A point or direction with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: SmallVec<[Rat; 3]>,
}

impl Vector {
    pub fn new(coords: Vec<Rat>) -> Vector {
        Vector { coords: coords.into() }
    }

    pub fn from_ints(coords: &[i64]) -> Vector {
        Vector {
            coords: coords.iter().map(|&c| Rat::integer(c)).collect(),
        }
    }

    pub fn xyz(x: i64, y: i64, z: i64) -> Vector {
        Vector::from_ints(&[x, y, z])
    }

    pub fn zeros(dim: usize) -> Vector {
        Vector {
            coords: (0..dim).map(|_| Rat::zero()).collect(),
        }
    }

    pub fn unit(dim: usize, axis: usize) -> Vector {
        let mut v = Vector::zeros(dim);
        v.coords[axis] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rat::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn norm2(&self) -> Rat {
        self.dot(self)
    }

    /// Cross product; both operands must be 3-dimensional.
    pub fn cross(&self, other: &Vector) -> Vector {
        assert!(self.dim() == 3 && other.dim() == 3, "cross product needs d = 3");
        let (a, b) = (&self.coords, &other.coords);
        Vector::new(vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ])
    }

    pub fn scale(&self, s: &Rat) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn is_parallel(&self, other: &Vector) -> bool {
        if self.dim() == 3 {
            return self.cross(other).is_zero();
        }
        // 2x2 minors in general dimension
        let n = self.dim();
        (0..n).all(|i| {
            (i + 1..n).all(|j| &self.coords[i] * &other.coords[j] == &self.coords[j] * &other.coords[i])
        })
    }

    /// Positive multiple with coprime integer coordinates. Zero stays zero.
    pub fn primitive(&self) -> Vector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v))
            .abs();
        Vector {
            coords: ints.into_iter().map(|v| Rat::from(v / &g)).collect(),
        }
    }

    /// Primitive integer representative of the line through the origin
    /// spanned by `self`: first nonzero coordinate made positive.
    pub fn canonical_line(&self) -> Vector {
        let p = self.primitive();
        match p.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -p,
            _ => p,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Rat::to_f64).collect()
    }

    /// Dimension of the linear span of `vectors`.
    pub fn rank(vectors: &[Vector]) -> usize {
        let Some(first) = vectors.first() else {
            return 0;
        };
        let cols = first.dim();
        let mut rows: Vec<Vec<Rat>> = vectors.iter().map(|v| v.coords.to_vec()).collect();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = rows[rank][col].recip();
            for r in 0..rows.len() {
                if r != rank && !rows[r][col].is_zero() {
                    let factor = &rows[r][col] * &inv;
                    for c in col..cols {
                        let delta = &factor * &rows[rank][c];
                        rows[r][c] -= delta;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, rhs: &'a Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

impl<'a> Mul<&'a Rat> for &'a Vector {
    type Output = Vector;
    fn mul(self, rhs: &'a Rat) -> Vector {
        self.scale(rhs)
    }
}

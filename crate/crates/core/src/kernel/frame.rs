use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Vector;
use crate::rat::Rat;

/// Rational orthogonal coordinates on the plane `xi⊥`.
///
/// `(e1, e2, xi)` is positively oriented, so counterclockwise in frame
/// coordinates means counterclockwise seen from the tip of `xi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub xi: Vector,
    pub basis: [Vector; 2],
}

pub fn frame(xi: &Vector) -> Result<Frame> {
    if xi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: xi.dim(),
        });
    }
    if xi.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let c = xi.primitive();
    let (x, y, z) = (c.get(0), c.get(1), c.get(2));
    let zero = Rat::zero();
    let candidates = [
        Vector::new(vec![y.clone(), -x, zero.clone()]),
        Vector::new(vec![z.clone(), zero.clone(), -x]),
        Vector::new(vec![zero, z.clone(), -y]),
    ];
    let e1 = candidates
        .iter()
        .filter(|v| !v.is_zero())
        .min_by(|a, b| a.norm2().cmp(&b.norm2()))
        .expect("a nonzero vector has a nonzero orthogonal candidate")
        .primitive();
    let e2 = c.cross(&e1).primitive();
    Ok(Frame {
        xi: xi.clone(),
        basis: [e1, e2],
    })
}

impl Frame {
    /// Squared lengths of the basis vectors (the diagonal Gram matrix).
    pub fn gram(&self) -> [Rat; 2] {
        [self.basis[0].norm2(), self.basis[1].norm2()]
    }

    /// Basis coefficients of the orthogonal projection of `v` onto `xi⊥`.
    pub fn coords(&self, v: &Vector) -> [Rat; 2] {
        let [g1, g2] = self.gram();
        [&self.basis[0].dot(v) / &g1, &self.basis[1].dot(v) / &g2]
    }

    pub fn lift(&self, x: &Rat, y: &Rat) -> Vector {
        &self.basis[0].scale(x) + &self.basis[1].scale(y)
    }
}

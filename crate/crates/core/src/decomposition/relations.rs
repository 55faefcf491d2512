use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::{elementary, product, IntMatrix};

/// Symbolic elementary matrix `e_{i,j}(x)` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elementary {
    pub i: usize,
    pub j: usize,
    pub x: BigInt,
}

impl Elementary {
    pub fn new(i: usize, j: usize, x: impl Into<BigInt>) -> Self {
        Elementary { i, j, x: x.into() }
    }

    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        elementary(n, self.i, self.j, self.x.clone())
    }

    pub fn inverse(&self) -> Elementary {
        Elementary::new(self.i, self.j, -&self.x)
    }
}

/// Product of elementary factors as an `n x n` matrix.
pub fn elementary_product(n: usize, factors: &[Elementary]) -> Result<IntMatrix> {
    let mats = factors.iter().map(|f| f.matrix(n)).collect::<Result<Vec<_>>>()?;
    product(n, &mats)
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidIndex { n, i, j });
    }
    Ok(())
}

/// Rewrites `e_{r,s}(b) e_{i,j}(a) e_{r,s}(-b)` as a product of elementaries.
///
/// The pair `j = r`, `i = s` has no elementary rewriting and is reported as
/// [`Error::OutOfRelation`].
pub fn steinberg_conjugate(
    n: usize,
    r: usize,
    s: usize,
    b: impl Into<BigInt>,
    i: usize,
    j: usize,
    a: impl Into<BigInt>,
) -> Result<Vec<Elementary>> {
    check_pair(n, r, s)?;
    check_pair(n, i, j)?;
    let (a, b) = (a.into(), b.into());
    match (j == r, i == s) {
        (true, true) => Err(Error::OutOfRelation { r, s, i, j }),
        (true, false) => {
            let ab = &a * &b;
            Ok(vec![Elementary::new(i, j, a), Elementary::new(i, s, -ab)])
        }
        (false, true) => {
            let ab = &a * &b;
            Ok(vec![Elementary::new(i, j, a), Elementary::new(r, j, ab)])
        }
        (false, false) => Ok(vec![Elementary::new(i, j, a)]),
    }
}

/// The commutator identity producing the corner elementary of size `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeIdentity {
    pub size: usize,
    /// `x^{-1}, y^{-1}, x, y` for `x = e_{1,2}(a)`, `y = e_{2,n+1}(b)`.
    pub factors: [Elementary; 4],
    pub target: Elementary,
}

impl BridgeIdentity {
    /// Multiplies the factors out and compares against the target.
    pub fn holds(&self) -> Result<bool> {
        let lhs = elementary_product(self.size, &self.factors)?;
        let rhs = self.target.matrix(self.size)?;
        Ok(lhs == rhs)
    }
}

/// `[e_{1,2}(a), e_{2,n+1}(b)] = e_{1,n+1}(ab)` with `[x,y] = x^{-1}y^{-1}xy`.
pub fn commutator_bridge(n: usize, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<BridgeIdentity> {
    if n < 2 {
        return Err(Error::Precondition(format!("bridge needs n >= 2, got {n}")));
    }
    let (a, b) = (a.into(), b.into());
    let size = n + 1;
    let x = Elementary::new(1, 2, a.clone());
    let y = Elementary::new(2, size, b.clone());
    let target = Elementary::new(1, size, &a * &b);
    Ok(BridgeIdentity {
        size,
        factors: [x.inverse(), y.inverse(), x, y],
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(n: usize, r: usize, s: usize, b: i64, i: usize, j: usize, a: i64) -> IntMatrix {
        let x = elementary(n, r, s, b).unwrap();
        let y = elementary(n, i, j, a).unwrap();
        let xi = elementary(n, r, s, -b).unwrap();
        &(&x * &y) * &xi
    }

    #[test]
    fn cases() {
        let f = steinberg_conjugate(3, 2, 3, 7, 1, 2, 5).unwrap();
        assert_eq!(f, vec![Elementary::new(1, 2, 5), Elementary::new(1, 3, -35)]);
        assert_eq!(elementary_product(3, &f).unwrap(), conj(3, 2, 3, 7, 1, 2, 5));

        let f = steinberg_conjugate(4, 3, 4, 7, 1, 2, 5).unwrap();
        assert_eq!(f, vec![Elementary::new(1, 2, 5)]);

        let f = steinberg_conjugate(3, 1, 3, 4, 2, 1, 3).unwrap();
        assert_eq!(f, vec![Elementary::new(2, 1, 3), Elementary::new(2, 3, -12)]);
        assert_eq!(elementary_product(3, &f).unwrap(), conj(3, 1, 3, 4, 2, 1, 3));

        let f = steinberg_conjugate(3, 1, 2, 4, 2, 3, 3).unwrap();
        assert_eq!(elementary_product(3, &f).unwrap(), conj(3, 1, 2, 4, 2, 3, 3));

        assert!(matches!(
            steinberg_conjugate(3, 1, 2, 1, 2, 1, 1),
            Err(Error::OutOfRelation { .. })
        ));
        assert!(steinberg_conjugate(3, 1, 1, 1, 2, 1, 1).is_err());
    }

    #[test]
    fn bridge() {
        let id = commutator_bridge(2, 3, 3).unwrap();
        assert_eq!(id.target, Elementary::new(1, 3, 9));
        assert!(id.holds().unwrap());

        let id = commutator_bridge(2, 0, 5).unwrap();
        assert!(id.target.matrix(3).unwrap().is_identity());
        assert!(id.holds().unwrap());

        let id = commutator_bridge(3, 2, 3).unwrap();
        assert_eq!(id.target, Elementary::new(1, 4, 6));
        assert!(id.holds().unwrap());
    }
}

use std::fmt;

use super::solve::{checked_pow, valuation};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ModMatrix};

/// A matrix over `Z/p^K`, read as a precision-`K` approximation of a `Z_p` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPadicMatrix {
    p: u64,
    precision: u32,
    inner: ModMatrix,
}

impl TruncatedPadicMatrix {
    pub fn new(inner: ModMatrix, p: u64, precision: u32) -> Result<Self> {
        if !crate::finite::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let q = checked_pow(p, precision).filter(|_| precision >= 1).ok_or(Error::InvalidModulus(p))?;
        if inner.modulus() != q {
            return Err(Error::InvalidModulus(inner.modulus()));
        }
        Ok(TruncatedPadicMatrix { p, precision, inner })
    }

    pub fn from_int(g: &IntMatrix, p: u64, precision: u32) -> Result<Self> {
        let q = checked_pow(p, precision).ok_or(Error::InvalidModulus(p))?;
        TruncatedPadicMatrix::new(g.reduce_mod(q)?, p, precision)
    }

    pub fn identity(n: usize, p: u64, precision: u32) -> Result<Self> {
        let q = checked_pow(p, precision).ok_or(Error::InvalidModulus(p))?;
        TruncatedPadicMatrix::new(ModMatrix::identity(n, q), p, precision)
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.inner
    }

    pub fn is_sl(&self) -> bool {
        self.inner.det() == 1
    }

    fn wrap(&self, inner: ModMatrix) -> Self {
        TruncatedPadicMatrix { p: self.p, precision: self.precision, inner }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if other.p != self.p || other.precision != self.precision {
            return Err(Error::InvalidModulus(other.modulus()));
        }
        Ok(self.wrap(self.inner.mul(&other.inner)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.wrap(self.inner.inverse()?))
    }

    /// `h^{-1} · self · h`.
    pub fn conjugate_by(&self, h: &Self) -> Result<Self> {
        h.inverse()?.mul(self)?.mul(h)
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision == 0 || precision > self.precision {
            return Err(Error::Precondition(format!("cannot truncate precision {} to {precision}", self.precision)));
        }
        let q = checked_pow(self.p, precision).unwrap();
        Ok(TruncatedPadicMatrix { p: self.p, precision, inner: self.inner.reduce_to(q)? })
    }

    /// Minimal valuation of the entries of `self - I`, capped at `K`.
    pub fn level(&self) -> u32 {
        let id = ModMatrix::identity(self.n(), self.modulus());
        self.inner.sub(&id).residues().iter().map(|&x| valuation(x, self.p, self.precision)).min().unwrap_or(self.precision)
    }

    /// Whether the reduction mod `p^i` is a scalar matrix.
    pub fn is_scalar_mod(&self, i: u32) -> bool {
        if i == 0 {
            return true;
        }
        let i = i.min(self.precision);
        let q = checked_pow(self.p, i).unwrap();
        self.inner.reduce_to(q).map(|m| m.scalar_value().is_some()).unwrap_or(false)
    }
}

impl fmt::Display for TruncatedPadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner)
    }
}

impl fmt::Debug for TruncatedPadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Padic[{} mod {}^{}]({})", self.n(), self.p, self.precision, self.inner)
    }
}

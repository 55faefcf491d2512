use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{in_upper, CongruenceLevel, IntMatrix};

/// Three matrices in `U_n(Z; q)`, `n = a.len() + 1`, whose product has
/// superdiagonal `q a`.
///
/// The `k`-th matrix carries the superdiagonal entries `(i, i+1)` with
/// `i = k (mod 3)` (1-based), so each is a block-diagonal product of `3x3`
/// unipotent blocks at offset `k - 1`.
pub fn tridiagonal_cover(q: &CongruenceLevel, a: &[BigInt]) -> Result<[IntMatrix; 3]> {
    let n = a.len() + 1;
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    let mut out = [IntMatrix::identity(n), IntMatrix::identity(n), IntMatrix::identity(n)];
    for (i, ai) in a.iter().enumerate() {
        *out[i % 3].at_mut(i, i + 1) = ai * q.value();
    }
    Ok(out)
}

fn check_superdiag(g: &IntMatrix, q: &CongruenceLevel) -> Result<()> {
    if !in_upper(g, q) {
        return Err(Error::Precondition(format!("matrix is not in U_{}(Z; {q})", g.n())));
    }
    if let Some(i) = (0..g.n() - 1).find(|&i| g.at(i, i + 1) != q.value()) {
        return Err(Error::Precondition(format!(
            "superdiagonal entry ({}, {}) is {}, expected {q}",
            i + 1,
            i + 2,
            g.at(i, i + 1)
        )));
    }
    Ok(())
}

/// Upper unitriangular `h` with `h g h^-1 = g2`, for `g, g2` in `U_n(Z; q)`
/// whose superdiagonal entries all equal `q`.
///
/// Diagonal `d` of `g - g2` fixes the differences along diagonal `d - 1` of
/// `h`; the sweep runs outward from the superdiagonal.
pub fn superdiag_conjugator(g: &IntMatrix, g2: &IntMatrix, q: &CongruenceLevel) -> Result<IntMatrix> {
    let n = g.n();
    if g2.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: g2.n() });
    }
    if n < 2 {
        return Ok(IntMatrix::identity(n));
    }
    check_superdiag(g, q)?;
    check_superdiag(g2, q)?;
    let qv = q.value();
    let mut h = IntMatrix::identity(n);
    // h g = g2 h, i.e. N - N2 = N2 H - H N with g = I + N, g2 = I + N2, h = I + H
    for d in 2..n {
        for i in 0..n - d {
            let j = i + d;
            let mut r = g.at(i, j) - g2.at(i, j);
            for k in i + 2..j {
                r -= g2.at(i, k) * h.at(k, j);
            }
            for k in i + 1..j - 1 {
                r += h.at(i, k) * g.at(k, j);
            }
            let (step, rem) = r.div_rem(qv);
            if !rem.is_zero() {
                return Err(Error::Internal("conjugator sweep hit a non-divisible entry".into()));
            }
            // q (h[i+1][j] - h[i][j-1]) = r, with h[0][d-1] = 0
            let y = h.at(i, j - 1) + step;
            *h.at_mut(i + 1, j) = y;
        }
    }
    if &h * g != g2 * &h {
        return Err(Error::Internal("conjugator sweep does not verify".into()));
    }
    Ok(h)
}

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ModMatrix;
use crate::error::{Error, Result};

/// Positive level `q` of the congruence filtration `SL_n(Z; q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceLevel(BigInt);

impl CongruenceLevel {
    pub fn new(q: impl Into<BigInt>) -> Result<Self> {
        let q = q.into();
        if q < BigInt::one() {
            return Err(Error::InvalidLevel);
        }
        Ok(CongruenceLevel(q))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn squared(&self) -> CongruenceLevel {
        CongruenceLevel(&self.0 * &self.0)
    }

    pub fn divides(&self, x: &BigInt) -> bool {
        x.is_multiple_of(&self.0)
    }
}

impl fmt::Display for CongruenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Square matrix with arbitrary-precision integer entries.
///
/// Values are immutable from the outside: every arithmetic operation returns
/// a fresh matrix. Public indices are 1-based, matching `e_{i,j}` notation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    /// Builds a matrix from row-major entries. Panics unless `data.len() == n*n`.
    pub fn from_vec(n: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        IntMatrix { n, data }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { n, data })
    }

    pub fn from_i64_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { n: N, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        assert!(i >= 1 && j >= 1 && i <= self.n && j <= self.n);
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    /// Copy with entry `(i, j)` (1-based) replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: impl Into<BigInt>) -> Self {
        let mut out = self.clone();
        *out.at_mut(i - 1, j - 1) = value.into();
        out
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.n + c]
    }

    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.n + c]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let x = self.at(r, c);
                if r == c {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self.at(c, r).clone());
            }
        }
        IntMatrix { n, data }
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<Self> {
        check_dims(self, other)?;
        Ok(IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        check_dims(self, other)?;
        Ok(IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul_checked(&self, other: &IntMatrix) -> Result<Self> {
        check_dims(self, other)?;
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        data[r * n + c] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, data })
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.n).all(|r| {
            self.at(r, r).is_one() && (0..r).all(|c| self.at(r, c).is_zero())
        })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        (0..self.n).all(|r| {
            self.at(r, r).is_one() && (r + 1..self.n).all(|c| self.at(r, c).is_zero())
        })
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_upper_unitriangular() {
            return Ok(self.transpose().lower_unitriangular_inverse().transpose());
        }
        if self.is_lower_unitriangular() {
            return Ok(self.lower_unitriangular_inverse());
        }
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        Ok(self.unimodular_inverse())
    }

    fn lower_unitriangular_inverse(&self) -> Self {
        // forward substitution, column by column
        let n = self.n;
        let mut inv = IntMatrix::identity(n);
        for c in 0..n {
            for r in c + 1..n {
                let mut s = BigInt::zero();
                for k in c..r {
                    let l = self.at(r, k);
                    if !l.is_zero() {
                        s += l * inv.at(k, c);
                    }
                }
                *inv.at_mut(r, c) = -s;
            }
        }
        inv
    }

    /// Integer row reduction of `[A | I]`; valid when `det(A) = ±1`.
    fn unimodular_inverse(&self) -> Self {
        let n = self.n;
        let w = 2 * n;
        let mut a: Vec<BigInt> = Vec::with_capacity(n * w);
        for r in 0..n {
            a.extend(self.data[r * n..(r + 1) * n].iter().cloned());
            for c in 0..n {
                a.push(if r == c { BigInt::one() } else { BigInt::zero() });
            }
        }
        let row_axpy = |a: &mut Vec<BigInt>, dst: usize, src: usize, f: &BigInt| {
            if f.is_zero() {
                return;
            }
            for c in 0..w {
                let v = &a[src * w + c] * f;
                a[dst * w + c] -= v;
            }
        };
        for col in 0..n {
            // Euclid down the column until a single nonzero remains at `col`.
            loop {
                let pivot = (col..n)
                    .filter(|&r| !a[r * w + col].is_zero())
                    .min_by(|&x, &y| a[x * w + col].abs().cmp(&a[y * w + col].abs()))
                    .expect("unimodular matrix has a nonzero in every column");
                if pivot != col {
                    for c in 0..w {
                        a.swap(pivot * w + c, col * w + c);
                    }
                }
                let mut done = true;
                for r in col + 1..n {
                    if a[r * w + col].is_zero() {
                        continue;
                    }
                    let q = a[r * w + col].div_floor(&a[col * w + col]);
                    row_axpy(&mut a, r, col, &q);
                    if !a[r * w + col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a[col * w + col].is_negative() {
                for c in 0..w {
                    a[col * w + c] = -&a[col * w + c];
                }
            }
        }
        for col in (0..n).rev() {
            for r in 0..col {
                let f = a[r * w + col].clone();
                row_axpy(&mut a, r, col, &f);
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            data.extend(a[r * w + n..(r + 1) * w].iter().cloned());
        }
        IntMatrix { n, data }
    }

    /// `h^{-1} * self * h`.
    pub fn conjugate_by(&self, h: &IntMatrix) -> Result<Self> {
        h.inverse()?.mul_checked(self)?.mul_checked(h)
    }

    /// Block-diagonal matrix from square blocks, in order.
    pub fn block_diag(blocks: &[IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut out = IntMatrix::identity(n);
        let mut off = 0;
        for b in blocks {
            out.set_block(off, off, b);
            off += b.n;
        }
        out
    }

    /// Embeds `self` as the diagonal block starting at 0-based `offset` of an
    /// `n x n` identity.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        assert!(offset + self.n <= n);
        let mut out = IntMatrix::identity(n);
        out.set_block(offset, offset, self);
        out
    }

    pub(crate) fn set_block(&mut self, r0: usize, c0: usize, b: &IntMatrix) {
        for r in 0..b.n {
            for c in 0..b.n {
                *self.at_mut(r0 + r, c0 + c) = b.at(r, c).clone();
            }
        }
    }

    /// The `k x k` block with top-left corner at 0-based `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> IntMatrix {
        let mut data = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                data.push(self.at(r0 + r, c0 + c).clone());
            }
        }
        IntMatrix { n: k, data }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    /// `g ≡ I (mod q)` entrywise. Determinant is not checked.
    pub fn is_congruent_identity(&self, q: &CongruenceLevel) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let x = self.at(r, c);
                if r == c {
                    q.divides(&(x - 1))
                } else {
                    q.divides(x)
                }
            })
        })
    }

    pub fn reduce_mod(&self, m: u64) -> Result<ModMatrix> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        let mb = BigInt::from(m);
        let data = self
            .data
            .iter()
            .map(|x| {
                let r = x.mod_floor(&mb);
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        Ok(ModMatrix::from_residues(self.n, m, data))
    }
}

fn check_dims(a: &IntMatrix, b: &IntMatrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    /// Panics on dimension mismatch; use [`IntMatrix::mul_checked`] otherwise.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.mul_checked(rhs).expect("matrix dimensions agree")
    }
}

/// Exact product of a sequence of `n x n` matrices (identity when empty).
pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a IntMatrix>) -> Result<IntMatrix> {
    let mut acc = IntMatrix::identity(n);
    for f in factors {
        acc = acc.mul_checked(f)?;
    }
    Ok(acc)
}

/// Product of `len` random elementaries `e_{i,j}(x q)` with `0 < |x| <= 3`.
pub fn random_elementary_product(n: usize, q: &CongruenceLevel, len: usize, rng: &mut impl rand::Rng) -> IntMatrix {
    let mut g = IntMatrix::identity(n);
    for _ in 0..len {
        let i = rng.gen_range(1..=n);
        let mut j = rng.gen_range(1..n);
        if j >= i {
            j += 1;
        }
        let mut x = rng.gen_range(-3..=2i64);
        if x >= 0 {
            x += 1;
        }
        g = &g * &elementary(n, i, j, q.value() * x).expect("indices in range");
    }
    g
}

/// `e_{i,j}(x)`: identity plus `x` at 1-based entry `(i, j)`.
pub fn elementary(n: usize, i: usize, j: usize, x: impl Into<BigInt>) -> Result<IntMatrix> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidIndex { n, i, j });
    }
    let mut m = IntMatrix::identity(n);
    *m.at_mut(i - 1, j - 1) = x.into();
    Ok(m)
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    a.mul_checked(b)
}

pub fn mat_inv(a: &IntMatrix) -> Result<IntMatrix> {
    a.inverse()
}

pub fn reduce_mod(g: &IntMatrix, m: u64) -> Result<ModMatrix> {
    g.reduce_mod(m)
}

/// Membership in the principal congruence subgroup `SL_n(Z; q)`.
///
/// The caller is expected to pass a determinant-one matrix; the determinant
/// is checked anyway so that a non-member never reports `true`.
pub fn in_congruence(g: &IntMatrix, q: &CongruenceLevel) -> bool {
    g.is_congruent_identity(q) && g.det().is_one()
}

/// Upper unitriangular with every off-diagonal entry divisible by `q`.
pub fn in_upper(g: &IntMatrix, q: &CongruenceLevel) -> bool {
    g.is_upper_unitriangular() && g.entries().iter().enumerate().all(|(k, x)| {
        let (r, c) = (k / g.n(), k % g.n());
        r == c || q.divides(x)
    })
}

/// Lower unitriangular with every off-diagonal entry divisible by `q`.
pub fn in_lower(g: &IntMatrix, q: &CongruenceLevel) -> bool {
    in_upper(&g.transpose(), q)
}

/// Membership in `E(n, Z; q)` via the Mennicke description: `g ∈ SL_n(Z; q)`
/// and every diagonal entry is `1 (mod q^2)`. Valid for `n >= 3`.
pub fn mennicke_in_e(g: &IntMatrix, q: &CongruenceLevel) -> Result<bool> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!(
            "Mennicke characterization needs n >= 3, got {}",
            g.n()
        )));
    }
    Ok(mennicke_violation(g, q).is_none())
}

/// Why `g` fails the Mennicke test, if it does.
pub fn mennicke_violation(g: &IntMatrix, q: &CongruenceLevel) -> Option<String> {
    if !g.is_congruent_identity(q) {
        return Some(format!("not congruent to the identity mod {q}"));
    }
    let d = g.det();
    if !d.is_one() {
        return Some(format!("determinant is {d}, not 1"));
    }
    let q2 = q.squared();
    for i in 0..g.n() {
        let x = g.at(i, i);
        if !q2.divides(&(x - 1)) {
            return Some(format!(
                "diagonal entry ({},{}) = {} is not 1 mod {}",
                i + 1,
                i + 1,
                x,
                q2
            ));
        }
    }
    None
}

impl fmt::Display for IntMatrix {
    /// Text format: rows separated by `;`, entries by `,`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            if r > 0 {
                f.write_str(";")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{}]({})", self.n, self)
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}

/// Parses the `"1,2;0,1"` text format. Whitespace around entries is ignored.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut offset = 0;
    for row_text in text.split(';') {
        let mut row = Vec::new();
        for entry in row_text.split(',') {
            let trimmed = entry.trim();
            let lead = entry.len() - entry.trim_start().len();
            let value: BigInt = trimmed.parse().map_err(|_| Error::MatrixParse {
                offset: offset + lead,
                message: format!("expected an integer, found {trimmed:?}"),
            })?;
            row.push(value);
            offset += entry.len() + 1;
        }
        rows.push(row);
    }
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::MatrixParse {
            offset: 0,
            message: format!("matrix is not square: {} rows, a row of length {}", n, bad.len()),
        });
    }
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m<const N: usize>(rows: [[i64; N]; N]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn mul_examples() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(mat_mul(&i3, &i3).unwrap(), i3);
        let a = elementary(3, 1, 2, 3).unwrap();
        let b = elementary(3, 1, 2, -3).unwrap();
        assert!(mat_mul(&a, &b).unwrap().is_identity());
        let p = &elementary(3, 1, 2, 1).unwrap() * &elementary(3, 2, 3, 1).unwrap();
        assert_eq!(p, m([[1, 1, 1], [0, 1, 1], [0, 0, 1]]));
        assert!(mat_mul(&i3, &IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert!(mat_inv(&IntMatrix::identity(4)).unwrap().is_identity());
        let e = elementary(4, 2, 4, 17).unwrap();
        assert_eq!(mat_inv(&e).unwrap(), elementary(4, 2, 4, -17).unwrap());
        let a = m([[2, 1], [1, 1]]);
        assert_eq!(mat_inv(&a).unwrap(), m([[1, -1], [-1, 2]]));
        let dense = m([[2, 3, 1], [1, 2, 1], [0, 1, 2]]);
        assert_eq!(dense.det(), BigInt::from(1));
        assert!((&dense * &dense.inverse().unwrap()).is_identity());
        let neg = m([[0, 1], [1, 0]]);
        assert!((&neg * &neg.inverse().unwrap()).is_identity());
        assert!(matches!(
            mat_inv(&m([[2, 0], [0, 1]])),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn elementary_examples() {
        assert!(elementary(3, 1, 2, 0).unwrap().is_identity());
        let e = elementary(3, 1, 3, 5).unwrap();
        assert_eq!(e, m([[1, 0, 5], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(elementary(2, 2, 1, -7).unwrap(), m([[1, 0], [-7, 1]]));
        assert!(elementary(3, 2, 2, 1).is_err());
    }

    #[test]
    fn membership_examples() {
        let q5 = CongruenceLevel::new(5).unwrap();
        let q3 = CongruenceLevel::new(3).unwrap();
        assert!(in_congruence(&IntMatrix::identity(3), &q5));
        assert!(in_congruence(&elementary(3, 1, 2, 5).unwrap(), &q5));
        assert!(!in_congruence(&elementary(3, 1, 2, 3).unwrap(), &q5));

        assert!(in_upper(&IntMatrix::identity(3), &q3));
        assert!(in_upper(&elementary(3, 1, 2, 6).unwrap(), &q3));
        let low = elementary(3, 2, 1, 6).unwrap();
        assert!(!in_upper(&low, &q3));
        assert!(in_lower(&low, &q3));
        assert!(!in_upper(&elementary(3, 1, 2, 4).unwrap(), &q3));
    }

    #[test]
    fn mennicke_examples() {
        let q = CongruenceLevel::new(2).unwrap();
        assert!(mennicke_in_e(&elementary(3, 1, 2, 2).unwrap(), &q).unwrap());
        assert!(mennicke_in_e(&IntMatrix::identity(3), &q).unwrap());
        let g = &(&elementary(3, 1, 2, 1).unwrap() * &elementary(3, 2, 1, 2).unwrap())
            * &elementary(3, 1, 2, -1).unwrap();
        // I + q(E11 - E12 + E21 - E22)
        assert_eq!(g, m([[3, -2, 0], [2, -1, 0], [0, 0, 1]]));
        assert!(!mennicke_in_e(&g, &q).unwrap());
        let why = mennicke_violation(&g, &q).unwrap();
        assert!(why.contains("(1,1)"), "{why}");
        assert!(mennicke_in_e(&IntMatrix::identity(2), &q).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_mod(&elementary(3, 1, 2, 5).unwrap(), 5).unwrap();
        assert!(r.is_identity());
        assert!(reduce_mod(&IntMatrix::identity(3), 7).unwrap().is_identity());
        let r = reduce_mod(&m([[2, 1], [1, 1]]), 2).unwrap();
        assert_eq!(r.residues(), &[0, 1, 1, 1]);
        assert!(reduce_mod(&IntMatrix::identity(2), 1).is_err());
    }

    #[test]
    fn det_bareiss() {
        assert_eq!(m([[2, 1], [1, 1]]).det(), BigInt::from(1));
        assert_eq!(m([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).det(), BigInt::from(-1));
        assert_eq!(m([[1, 2], [2, 4]]).det(), BigInt::from(0));
        assert_eq!(m([[0, 0, 1], [0, 2, 0], [3, 0, 0]]).det(), BigInt::from(-6));
    }

    #[test]
    fn text_format() {
        let a: IntMatrix = "1,2;0,1".parse().unwrap();
        assert_eq!(a, m([[1, 2], [0, 1]]));
        assert_eq!(a.to_string(), "1,2;0,1");
        let b: IntMatrix = " -3, 4 ; 1,-1".parse().unwrap();
        assert_eq!(b, m([[-3, 4], [1, -1]]));
        assert!("1,2;3".parse::<IntMatrix>().is_err());
        assert!(matches!(
            "1,x;0,1".parse::<IntMatrix>(),
            Err(Error::MatrixParse { offset: 2, .. })
        ));
    }
}

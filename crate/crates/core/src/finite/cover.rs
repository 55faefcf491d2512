use std::collections::VecDeque;
use std::sync::Arc;

use super::linalg::rank;
use super::set::SymSet;
use super::table::FiniteGroupTable;
use crate::error::{Error, Result};
use crate::matrix::ModMatrix;

/// Left translates `g_i X` covering the whole table.
///
/// Each step takes the first uncovered `u` and, among the translates
/// `u x^{-1} X` containing it, the one covering the most new elements.
/// The result is a cover, not necessarily a minimal one.
pub fn greedy_cover(x: &SymSet) -> Result<Vec<u32>> {
    if x.is_empty() {
        return Err(Error::Precondition("cannot cover with the empty set".into()));
    }
    let table = x.table();
    let xs: Vec<u32> = x.iter().collect();
    let probes = &xs[..xs.len().min(64)];
    let mut covered = SymSet::empty(table);
    let mut translates = Vec::new();
    let mut next = 0u32;
    while covered.len() < table.len() {
        while covered.contains(next) {
            next += 1;
        }
        let (mut best, mut best_gain) = (0, 0);
        for &p in probes {
            let g = table.product(next, table.inverse(p));
            let gain = xs.iter().filter(|&&y| !covered.contains(table.product(g, y))).count();
            if gain > best_gain {
                best = g;
                best_gain = gain;
            }
        }
        for &y in &xs {
            covered.insert(table.product(best, y));
        }
        translates.push(best);
    }
    Ok(translates)
}

/// Whether `a` and `b` generate the whole table.
///
/// Stops once more than half the group is reached, since no proper subgroup
/// is that large.
pub fn generates(a: &ModMatrix, b: &ModMatrix, table: &Arc<FiniteGroupTable>) -> Result<bool> {
    let gens: Vec<u32> = SymSet::from_matrices(table, &[a.clone(), b.clone()])?.symmetrize().iter().collect();
    let mut seen = SymSet::identity(table);
    let mut queue = VecDeque::from([table.identity()]);
    while let Some(y) = queue.pop_front() {
        for &g in &gens {
            let z = table.product(y, g);
            if seen.insert(z) {
                if 2 * seen.len() > table.len() {
                    return Ok(true);
                }
                queue.push_back(z);
            }
        }
    }
    Ok(seen.len() == table.len())
}

fn conj(x: &ModMatrix, g: &ModMatrix, g_inv: &ModMatrix) -> Result<ModMatrix> {
    g_inv.mul(x)?.mul(g)
}

/// Basis of `sl_n(F_p)`: `E_ij` for `i != j`, then `E_ii - E_nn`.
pub(crate) fn sl_basis(n: usize, p: u64) -> Vec<ModMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut d = vec![0u64; n * n];
                d[i * n + j] = 1;
                out.push(ModMatrix::from_residues(n, p, d));
            }
        }
    }
    for i in 0..n - 1 {
        let mut d = vec![0u64; n * n];
        d[i * n + i] = 1;
        d[(n - 1) * n + n - 1] = p - 1;
        out.push(ModMatrix::from_residues(n, p, d));
    }
    out
}

/// Rank over `F_p` of `(X, Y) -> (X - X^a)^b + (Y - Y^b)` on `sl_n × sl_n`,
/// where `Z^g = g^{-1} Z g`.
pub fn diff_rank(a: &ModMatrix, b: &ModMatrix) -> Result<usize> {
    let n = a.n();
    let p = a.modulus();
    if b.n() != n || b.modulus() != p {
        return Err(Error::DimensionMismatch { left: n, right: b.n() });
    }
    let (ai, bi) = (a.inverse()?, b.inverse()?);
    let mut rows = Vec::new();
    for e in sl_basis(n, p) {
        let x = e.sub(&conj(&e, a, &ai)?);
        rows.push(conj(&x, b, &bi)?.residues().to_vec());
        rows.push(e.sub(&conj(&e, b, &bi)?).residues().to_vec());
    }
    Ok(rank(&rows, p))
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub(crate) fn sl_coordinates(x: &ModMatrix) -> Vec<u64> {
    let n = x.n();
    let mut v = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                v.push(x.at(i, j));
            }
        }
    }
    for i in 0..n - 1 {
        v.push(x.at(i, i));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{closure, closure_exponent, enumerate_group, power_product, value_set};
    use crate::words::parse_word;

    #[test]
    fn covers() {
        let g = Arc::new(enumerate_group(2, 3).unwrap());
        assert_eq!(greedy_cover(&SymSet::whole(&g)).unwrap().len(), 1);
        let v = value_set(&parse_word("[x1,x2]").unwrap(), &g).unwrap();
        let t = greedy_cover(&v).unwrap();
        let mut covered = SymSet::empty(&g);
        for &h in &t {
            for y in v.iter() {
                covered.insert(g.product(h, y));
            }
        }
        assert_eq!(covered.len(), 24);
        let d = t.len();
        assert!(power_product(&v, 4 * d + 2) == closure(&v));
        assert!(closure_exponent(&v) <= 4 * d + 2);
        assert!(greedy_cover(&SymSet::empty(&g)).is_err());
    }

    #[test]
    fn generation() {
        let g5 = Arc::new(enumerate_group(2, 5).unwrap());
        let e12 = ModMatrix::from_signed(2, 5, &[1, 1, 0, 1]);
        let e21 = ModMatrix::from_signed(2, 5, &[1, 0, 1, 1]);
        let e12b = ModMatrix::from_signed(2, 5, &[1, 2, 0, 1]);
        assert!(generates(&e12, &e21, &g5).unwrap());
        assert!(!generates(&e12, &e12b, &g5).unwrap());
        let g3 = Arc::new(enumerate_group(2, 3).unwrap());
        let id = ModMatrix::identity(2, 3);
        assert!(!generates(&id, &id, &g3).unwrap());
    }

    #[test]
    fn ranks() {
        let id = ModMatrix::identity(3, 2);
        assert_eq!(diff_rank(&id, &id).unwrap(), 0);
        let a = ModMatrix::from_signed(3, 2, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        let b = ModMatrix::from_signed(3, 2, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        let g = Arc::new(enumerate_group(3, 2).unwrap());
        assert!(generates(&a, &b, &g).unwrap());
        assert_eq!(diff_rank(&a, &b).unwrap(), 8);
        let c = ModMatrix::from_signed(3, 7, &[2, 0, 0, 0, 2, 0, 0, 0, 2]);
        assert_eq!(diff_rank(&c, &c).unwrap(), 0);
    }
}

//! Dense linear algebra over a prime field `F_p`.

use crate::matrix::{inv_mod, mulmod, ModMatrix};

/// Row echelon basis grown one vector at a time.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    p: u64,
    // (pivot column, reduced row, combination of inserted vectors giving it)
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

impl Echelon {
    pub(crate) fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new(), inserted: 0 }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder and the combination
    /// of inserted vectors that was subtracted.
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut v = v.to_vec();
        let mut used = vec![0u64; self.inserted];
        for (pc, row, comb) in &self.rows {
            let f = v[*pc];
            if f == 0 {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = (*x + p - mulmod(f, *r, p)) % p;
            }
            for (u, c) in used.iter_mut().zip(comb) {
                *u = (*u + mulmod(f, *c, p)) % p;
            }
        }
        (v, used)
    }

    /// Adds `v` when it is independent of the basis.
    pub(crate) fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let (mut rem, used) = self.reduce(v);
        let Some(pc) = rem.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(rem[pc], p).expect("prime modulus");
        for x in rem.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        // rem = (v - sum used_i v_i) * inv
        let mut comb: Vec<u64> = used.iter().map(|&u| mulmod((p - u) % p, inv, p)).collect();
        comb.push(inv);
        for (_, _, c) in &mut self.rows {
            c.push(0);
        }
        self.inserted += 1;
        self.rows.push((pc, rem, comb));
        true
    }

    /// Coefficients `c` with `sum c_i v_i = target` over the inserted vectors.
    pub(crate) fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let (rem, used) = self.reduce(target);
        rem.iter().all(|&x| x == 0).then_some(used)
    }
}

pub(crate) fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut e = Echelon::new(p);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub(crate) fn matrix_rank(a: &ModMatrix) -> usize {
    let n = a.n();
    let rows: Vec<Vec<u64>> = a.residues().chunks(n).map(|r| r.to_vec()).collect();
    rank(&rows, a.modulus())
}

/// A nonzero `v` with `a v = 0`, if `a` is singular.
pub(crate) fn kernel_vector(a: &ModMatrix) -> Option<Vec<u64>> {
    let n = a.n();
    let p = a.modulus();
    let t = a.transpose();
    // a dependency among the columns of a is a kernel vector
    let mut e = Echelon::new(p);
    let mut owners = Vec::new();
    for (k, col) in t.residues().chunks(n).enumerate() {
        if !e.insert(col) {
            let comb = e.solve(col).expect("dependent column");
            let mut v = vec![0u64; n];
            for (&j, &c) in owners.iter().zip(&comb) {
                v[j] = c;
            }
            v[k] = p - 1;
            return Some(v);
        }
        owners.push(k);
    }
    None
}

/// A matrix in `SL_n` whose first column is `v`.
pub(crate) fn complete_to_sl(v: &[u64], p: u64) -> Option<ModMatrix> {
    let n = v.len();
    let mut e = Echelon::new(p);
    if !e.insert(v) {
        return None;
    }
    let mut cols = vec![v.to_vec()];
    for j in 0..n {
        let mut ej = vec![0u64; n];
        ej[j] = 1;
        if cols.len() < n && e.insert(&ej) {
            cols.push(ej);
        }
    }
    let mut data = vec![0u64; n * n];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
    let mut m = ModMatrix::from_residues(n, p, data);
    let d_inv = inv_mod(m.det(), p)?;
    let mut data = m.residues().to_vec();
    for r in 0..n {
        data[r * n + 1] = mulmod(data[r * n + 1], d_inv, p);
    }
    m = ModMatrix::from_residues(n, p, data);
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_solves() {
        let mut e = Echelon::new(7);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 3]));
        assert!(!e.insert(&[2, 5, 3]));
        let c = e.solve(&[3, 1, 6]).unwrap();
        for k in 0..3 {
            let v0 = [1, 2, 0][k];
            let v1 = [0, 1, 3][k];
            assert_eq!((c[0] * v0 + c[1] * v1) % 7, [3, 1, 6][k]);
        }
        assert!(e.solve(&[0, 0, 1]).is_none());
        assert_eq!(e.rank(), 2);
        assert_eq!(rank(&[vec![1, 1], vec![2, 2]], 5), 1);
    }

    #[test]
    fn kernels_and_completion() {
        let a = ModMatrix::from_signed(3, 5, &[1, 2, 3, 2, 4, 6, 0, 1, 1]);
        let v = kernel_vector(&a).unwrap();
        let col = ModMatrix::from_residues(3, 5, vec![v[0], 0, 0, v[1], 0, 0, v[2], 0, 0]);
        assert!(a.mul(&col).unwrap().residues().iter().all(|&x| x == 0));
        assert!(v.iter().any(|&x| x != 0));
        assert!(kernel_vector(&ModMatrix::identity(3, 5)).is_none());
        let p = complete_to_sl(&v, 5).unwrap();
        assert_eq!(p.det(), 1);
        assert_eq!((0..3).map(|r| p.at(r, 0)).collect::<Vec<_>>(), v);
    }
}

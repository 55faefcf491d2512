use crate::matrix::inv_mod;

pub(crate) fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    (acc < 1 << 62).then_some(acc)
}

/// `p`-adic valuation of `x` modulo `p^K`, capped at `K`.
pub fn valuation(x: u64, p: u64, precision: u32) -> u32 {
    let mut x = x;
    let mut v = 0;
    while v < precision && x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    if x == 0 {
        precision
    } else {
        v
    }
}

fn mm(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Some `ε` with `M ε ≡ v (mod p^K)`, or `None` when the system is inconsistent.
///
/// Pivots are chosen of minimal valuation over the remaining block, so every
/// elimination step is exact over `Z/p^K`. Free coordinates are set to zero.
pub fn linear_solve_mod(m: &[Vec<u64>], v: &[u64], p: u64, precision: u32) -> Option<Vec<u64>> {
    let q = checked_pow(p, precision).expect("p^K fits in 62 bits");
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    assert_eq!(v.len(), rows, "right-hand side length");
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % q).collect()).collect();
    let mut b: Vec<u64> = v.iter().map(|x| x % q).collect();
    let mut col_of: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<u32> = Vec::new();
    for r in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, &x) in row.iter().enumerate().skip(r) {
                let val = valuation(x, p, precision);
                if val < precision && best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, i, j)) = best else {
            break;
        };
        a.swap(r, i);
        b.swap(r, i);
        for row in a.iter_mut() {
            row.swap(r, j);
        }
        col_of.swap(r, j);
        let pv = checked_pow(p, val).unwrap();
        let unit_inv = inv_mod(a[r][r] / pv, q).expect("unit part");
        for i in r + 1..rows {
            if a[i][r] == 0 {
                continue;
            }
            let f = mm(a[i][r] / pv, unit_inv, q);
            for c in r..cols {
                let s = mm(f, a[r][c], q);
                a[i][c] = (a[i][c] + q - s) % q;
            }
            b[i] = (b[i] + q - mm(f, b[r], q)) % q;
        }
        pivots.push(val);
    }
    let rank = pivots.len();
    if b[rank..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for r in (0..rank).rev() {
        let mut rhs = b[r];
        for c in r + 1..cols {
            rhs = (rhs + q - mm(a[r][c], x[c], q)) % q;
        }
        let pv = checked_pow(p, pivots[r]).unwrap();
        if rhs % pv != 0 {
            return None;
        }
        let unit_inv = inv_mod(a[r][r] / pv, q).unwrap();
        x[r] = mm(rhs / pv, unit_inv, q);
    }
    let mut out = vec![0u64; cols];
    for (k, &c) in col_of.iter().enumerate() {
        out[c] = x[k];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply(m: &[Vec<u64>], x: &[u64], q: u64) -> Vec<u64> {
        m.iter().map(|r| r.iter().zip(x).fold(0, |s, (&a, &b)| (s + mm(a, b, q)) % q)).collect()
    }

    #[test]
    fn identity_and_scaled() {
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(linear_solve_mod(&id, &[5, 7], 3, 3), Some(vec![5, 7]));
        let s = vec![vec![3, 0], vec![0, 3]];
        let e = linear_solve_mod(&s, &[6, 12], 3, 3).unwrap();
        assert_eq!(apply(&s, &e, 27), vec![6, 12]);
        assert_eq!(e.iter().map(|x| x % 9).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(linear_solve_mod(&s, &[1, 0], 3, 3), None);
        assert_eq!(valuation(0, 3, 4), 4);
        assert_eq!(valuation(18, 3, 4), 2);
    }

    #[test]
    fn random_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (p, k) = (5u64, 4u32);
        let q = 625;
        for _ in 0..20 {
            let m: Vec<Vec<u64>> = (0..8).map(|_| (0..16).map(|_| rng.gen_range(0..q)).collect()).collect();
            let x: Vec<u64> = (0..16).map(|_| rng.gen_range(0..q)).collect();
            let v = apply(&m, &x, q);
            let e = linear_solve_mod(&m, &v, p, k).unwrap();
            assert_eq!(apply(&m, &e, q), v);
        }
    }
}

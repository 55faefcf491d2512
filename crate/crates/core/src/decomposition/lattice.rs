use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL reduction (`delta = 3/4`) of linearly independent integer rows.
pub(crate) fn lll(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let zero = BigRational::zero();
    let mut mu = vec![vec![zero.clone(); n]; n];
    let mut bb = vec![zero; n];
    for i in 0..n {
        for j in 0..i {
            let mut v = BigRational::from_integer(dot(&basis[i], &basis[j]));
            for l in 0..j {
                v -= &mu[j][l] * &mu[i][l] * &bb[l];
            }
            mu[i][j] = v / &bb[j];
        }
        let mut v = BigRational::from_integer(dot(&basis[i], &basis[i]));
        for l in 0..i {
            v -= &mu[i][l] * &mu[i][l] * &bb[l];
        }
        bb[i] = v;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let size_reduce = |basis: &mut [Vec<BigInt>], mu: &mut [Vec<BigRational>], k: usize, l: usize| {
        let r = round(&mu[k][l]);
        if r.is_zero() {
            return;
        }
        let (lo, hi) = basis.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= &r * y;
        }
        let rq = BigRational::from_integer(r);
        for j in 0..l {
            let t = &rq * &mu[l][j];
            mu[k][j] -= t;
        }
        mu[k][l] -= rq;
    };
    let mut k = 1;
    let mut guard = 0u64;
    while k < n && guard < 100_000 {
        guard += 1;
        size_reduce(basis, &mut mu, k, k - 1);
        let lhs = &bb[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bb[k - 1];
        if *lhs >= rhs {
            for l in (0..k - 1).rev() {
                size_reduce(basis, &mut mu, k, l);
            }
            k += 1;
            continue;
        }
        basis.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = mu[k][j].clone();
            mu[k][j] = std::mem::replace(&mut mu[k - 1][j], t);
        }
        let m = mu[k][k - 1].clone();
        let b_new = &bb[k] + &m * &m * &bb[k - 1];
        mu[k][k - 1] = &m * &bb[k - 1] / &b_new;
        bb[k] = &bb[k - 1] * &bb[k] / &b_new;
        bb[k - 1] = b_new;
        for i in k + 1..n {
            let t = mu[i][k].clone();
            mu[i][k] = &mu[i][k - 1] - &m * &t;
            mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
        }
        k = (k - 1).max(1);
    }
}

/// A short `x` with `sum x_i w_i = rhs`, or `None` when no solution exists.
pub(crate) fn short_solution(w: &[BigInt], rhs: &BigInt) -> Option<Vec<BigInt>> {
    let d = w.len();
    let bits = w.iter().chain(std::iter::once(rhs)).map(|x| x.bits()).max().unwrap_or(0);
    let weight = BigInt::one() << (bits as usize + d + 8);
    let big = &weight * &weight;
    // rows (e_j, K w_j, 0) and (0, -K rhs, M)
    let mut basis: Vec<Vec<BigInt>> = (0..=d)
        .map(|j| {
            let mut row = vec![BigInt::zero(); d + 2];
            if j < d {
                row[j] = BigInt::one();
                row[d] = &big * &w[j];
            } else {
                row[d] = -(&big * rhs);
                row[d + 1] = weight.clone();
            }
            row
        })
        .collect();
    lll(&mut basis);
    let row = basis
        .into_iter()
        .find(|r| r[d].is_zero() && r[d + 1].abs() == weight)?;
    let sign = if row[d + 1].is_negative() { -BigInt::one() } else { BigInt::one() };
    let x: Vec<BigInt> = row[..d].iter().map(|v| v * &sign).collect();
    (dot(&x, w) == *rhs).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn reduces_a_skewed_basis() {
        let mut b = vec![v(&[1, 0, 0]), v(&[1000, 1, 0]), v(&[999_999, 1000, 1])];
        lll(&mut b);
        assert!(b.iter().all(|r| r.iter().all(|x| x.abs() <= BigInt::from(2))), "{b:?}");
    }

    #[test]
    fn short_solutions() {
        let w = v(&[100_003, 99_991, 100_019]);
        let x = short_solution(&w, &BigInt::from(7)).unwrap();
        assert_eq!(dot(&x, &w), BigInt::from(7));
        assert!(x.iter().all(|e| e.abs() < BigInt::from(10_000)), "{x:?}");
        assert!(short_solution(&v(&[4, 6]), &BigInt::from(3)).is_none());
    }
}

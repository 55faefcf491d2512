use num_bigint::BigInt;

use super::matrix::TruncatedPadicMatrix;
use super::poly::{Poly, PolyMapDescriptor};
use crate::error::{Error, Result};

type PolyMatrix = Vec<Vec<Poly>>;

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Poly::zero(a[0][0].nvars()), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn det(m: &PolyMatrix, nvars: usize) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::constant(nvars, 1),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero(nvars);
            for c in 0..n {
                let minor: PolyMatrix =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
                let t = m[0][c].mul(&det(&minor, nvars));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn adjugate(m: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![Poly::constant(nvars, 1)]];
    }
    let mut out = vec![vec![Poly::zero(nvars); n]; n];
    for r in 0..n {
        for c in 0..n {
            let minor: PolyMatrix = (0..n)
                .filter(|&i| i != c)
                .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                .collect();
            let d = det(&minor, nvars);
            out[r][c] = if (r + c) % 2 == 0 { d } else { d.scale(&BigInt::from(-1)) };
        }
    }
    out
}

fn variables(n: usize, nvars: usize, offset: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| Poly::var(nvars, offset + i * n + j)).collect()).collect()
}

fn constants(g: &TruncatedPadicMatrix, nvars: usize) -> PolyMatrix {
    let n = g.n();
    (0..n).map(|i| (0..n).map(|j| Poly::constant(nvars, g.matrix().at(i, j))).collect()).collect()
}

/// `Φ_{g,h}(x, y) = x^{-1} g x · y^{-1} h y` as a polynomial map in `2n²` variables.
///
/// Variables are the entries of `x` then of `y`, row-major; inverses are
/// replaced by adjugates, which agree with them on `SL_n`.
pub fn phi_map(g: &TruncatedPadicMatrix, h: &TruncatedPadicMatrix) -> Result<PolyMapDescriptor> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: h.n() });
    }
    if !g.is_sl() || !h.is_sl() {
        return Err(Error::Precondition("phi_map needs g, h in SL_n".into()));
    }
    let nvars = 2 * n * n;
    let x = variables(n, nvars, 0);
    let y = variables(n, nvars, n * n);
    let gx = pm_mul(&pm_mul(&adjugate(&x, nvars), &constants(g, nvars)), &x);
    let hy = pm_mul(&pm_mul(&adjugate(&y, nvars), &constants(h, nvars)), &y);
    let out = pm_mul(&gx, &hy);
    PolyMapDescriptor::new(nvars, out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::lie::random_sl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_group_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (p, k) = (3u64, 2u32);
        let q = 9;
        let g = TruncatedPadicMatrix::new(random_sl(2, q, &mut rng), p, k).unwrap();
        let h = TruncatedPadicMatrix::new(random_sl(2, q, &mut rng), p, k).unwrap();
        let f = phi_map(&g, &h).unwrap();
        assert_eq!((f.source(), f.target()), (8, 4));
        let id: Vec<u64> = vec![1, 0, 0, 1, 1, 0, 0, 1];
        assert_eq!(f.eval_mod(&id, q), g.mul(&h).unwrap().matrix().residues().to_vec());
        for _ in 0..10 {
            let x = TruncatedPadicMatrix::new(random_sl(2, q, &mut rng), p, k).unwrap();
            let y = TruncatedPadicMatrix::new(random_sl(2, q, &mut rng), p, k).unwrap();
            let direct = g.conjugate_by(&x).unwrap().mul(&h.conjugate_by(&y).unwrap()).unwrap();
            let pt: Vec<u64> = x.matrix().residues().iter().chain(y.matrix().residues()).copied().collect();
            assert_eq!(f.eval_mod(&pt, q), direct.matrix().residues().to_vec());
        }
        let one = TruncatedPadicMatrix::identity(2, p, k).unwrap();
        let c = phi_map(&one, &one).unwrap();
        for _ in 0..5 {
            let x = random_sl(2, q, &mut rng);
            let y = random_sl(2, q, &mut rng);
            let pt: Vec<u64> = x.residues().iter().chain(y.residues()).copied().collect();
            assert_eq!(c.eval_mod(&pt, q), vec![1, 0, 0, 1]);
        }
    }
}

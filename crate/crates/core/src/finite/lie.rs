use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cover::sl_coordinates;
use super::linalg::{complete_to_sl, kernel_vector, matrix_rank, Echelon};
use crate::error::{Error, Result};
use crate::matrix::{inv_mod, mulmod, ModMatrix};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `(x, y)` with `x^2 + y^2 = c` in `F_p`.
///
/// A square `c` gives `(sqrt c, 0)`; otherwise `x` is the least value making
/// `c - x^2` a square, and `y` the least root.
pub fn two_squares(c: u64, p: u64) -> Result<(u64, u64)> {
    check_odd_prime(p)?;
    let c = c % p;
    let mut root = vec![None; p as usize];
    for y in (0..p).rev() {
        root[mulmod(y, y, p) as usize] = Some(y);
    }
    if let Some(x) = root[c as usize] {
        return Ok((x, 0));
    }
    for x in 1..p {
        if let Some(y) = root[((c + p - mulmod(x, x, p)) % p) as usize] {
            return Ok((x, y));
        }
    }
    Err(Error::Internal(format!("{c} is not a sum of two squares mod {p}")))
}

/// `(x, y, 1)` with `x, y != 0`, `x^2 + y^2 + 1 = 0` and `x^-2 + y^-2 + 1 != 0`.
///
/// Points are searched by increasing `max(x, y)`, then lexicographically.
/// Below 17 such a point need not exist, and the search reports failure.
pub fn curve_point(p: u64) -> Result<(u64, u64, u64)> {
    check_odd_prime(p)?;
    let sq = |x: u64| mulmod(x, x, p);
    let inv_sq = |x: u64| inv_mod(sq(x), p).expect("nonzero");
    for s in 1..p {
        for x in 1..=s {
            for y in 1..=s {
                if x.max(y) != s {
                    continue;
                }
                let on_curve = (sq(x) + sq(y) + 1) % p == 0;
                if on_curve && (inv_sq(x) + inv_sq(y) + 1) % p != 0 {
                    return Ok((x, y, 1));
                }
            }
        }
    }
    Err(Error::Precondition(format!("no admissible point on x^2+y^2+z^2 = 0 mod {p}")))
}

/// Traceless matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieMatrix {
    m: ModMatrix,
}

impl LieMatrix {
    pub fn new(m: ModMatrix) -> Result<LieMatrix> {
        if !is_prime(m.modulus()) {
            return Err(Error::Precondition(format!("{} is not prime", m.modulus())));
        }
        if m.trace() != 0 {
            return Err(Error::Precondition(format!("trace {} is not zero", m.trace())));
        }
        Ok(LieMatrix { m })
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn p(&self) -> u64 {
        self.m.modulus()
    }

    /// Scalar, i.e. in the center of `sl_n`.
    pub fn is_central(&self) -> bool {
        self.m.scalar_value().is_some()
    }
}

/// How [`conj_sum_decompose`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rung {
    /// `B = A`.
    Identity,
    /// `A` nilpotent, reduced to a rank-one nilpotent through its Jordan block.
    Nilpotent,
    /// `n = 2` off-diagonal form, made nilpotent with a point on `x^2+y^2+z^2 = 0`.
    TwoByTwo,
    /// `n >= 3` non-nilpotent, reduced through a singular block.
    Reduction,
    /// Conjugates of `A` spanning `sl_n`, coefficients expanded into repeated terms.
    Spanning,
}

/// Conjugators `x_i` with `sum x_i^{-1} A x_i = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjSum {
    pub conjugators: Vec<ModMatrix>,
    pub rung: Rung,
    /// Term cap used for this run.
    pub bound: usize,
}

impl ConjSum {
    pub fn terms(&self) -> usize {
        self.conjugators.len()
    }

    pub fn sum(&self, a: &LieMatrix) -> Result<ModMatrix> {
        let mut acc = zero(a.n(), a.p());
        for x in &self.conjugators {
            acc = acc.add(&a.m.conjugate_by(x)?);
        }
        Ok(acc)
    }
}

/// Random spanning bases tried against the structured answer.
const SPANNING_TRIES: usize = 8;

/// `4 (n^2 - 1)(p - 1)`.
pub fn ladder_bound(n: usize, p: u64) -> usize {
    4 * (n * n - 1) * (p as usize - 1)
}

fn zero(n: usize, p: u64) -> ModMatrix {
    ModMatrix::from_residues(n, p, vec![0; n * n])
}

fn diag(p: u64, d: &[u64]) -> ModMatrix {
    let n = d.len();
    let mut data = vec![0; n * n];
    for (i, &x) in d.iter().enumerate() {
        data[i * n + i] = x % p;
    }
    ModMatrix::from_residues(n, p, data)
}

fn is_zero(a: &ModMatrix) -> bool {
    a.residues().iter().all(|&x| x == 0)
}

fn is_nilpotent(a: &ModMatrix) -> Result<bool> {
    let mut acc = a.clone();
    for _ in 1..a.n() {
        acc = acc.mul(a)?;
    }
    Ok(is_zero(&acc))
}

fn is_rank_one_nilpotent(a: &ModMatrix) -> Result<bool> {
    Ok(matrix_rank(a) == 1 && is_zero(&a.mul(a)?))
}

pub(crate) fn random_sl(n: usize, p: u64, rng: &mut ChaCha8Rng) -> ModMatrix {
    loop {
        let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let m = ModMatrix::from_residues(n, p, data);
        if let Some(inv) = inv_mod(m.det(), p) {
            let mut data = m.residues().to_vec();
            for x in &mut data[..n] {
                *x = mulmod(*x, inv, p);
            }
            return ModMatrix::from_residues(n, p, data);
        }
    }
}

fn trailing_block(a: &ModMatrix) -> ModMatrix {
    let n = a.n();
    let data = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).map(|(r, c)| a.at(r, c)).collect();
    ModMatrix::from_residues(n - 1, a.modulus(), data)
}

fn embed_trailing(y: &ModMatrix) -> ModMatrix {
    let n = y.n() + 1;
    let mut data = vec![0; n * n];
    data[0] = 1;
    for r in 1..n {
        for c in 1..n {
            data[r * n + c] = y.at(r - 1, c - 1);
        }
    }
    ModMatrix::from_residues(n, y.modulus(), data)
}

fn column(a: &ModMatrix, v: &[u64]) -> Vec<u64> {
    let n = a.n();
    let p = a.modulus();
    (0..n).map(|r| (0..n).fold(0, |s, c| (s + mulmod(a.at(r, c), v[c], p)) % p)).collect()
}

fn from_columns(cols: &[Vec<u64>], p: u64) -> ModMatrix {
    let n = cols.len();
    let mut data = vec![0; n * n];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
    ModMatrix::from_residues(n, p, data)
}

fn scale_column(a: &ModMatrix, c: usize, s: u64) -> ModMatrix {
    let n = a.n();
    let p = a.modulus();
    let mut data = a.residues().to_vec();
    for r in 0..n {
        data[r * n + c] = mulmod(data[r * n + c], s, p);
    }
    ModMatrix::from_residues(n, p, data)
}

/// Terms `t_1..t_k` in `F_p^×` with `sum t_i^2 = 0` and `sum t_i^-2 != 0`.
fn vanishing_squares(p: u64) -> Option<Vec<u64>> {
    if let Ok((x, y, z)) = curve_point(p) {
        return Some(vec![x, y, z]);
    }
    let sq = |x: u64| mulmod(x, x, p);
    let inv_sq = |x: u64| inv_mod(sq(x), p).expect("nonzero");
    for k in 4..=6usize {
        let mut t = vec![1u64; k];
        loop {
            let s: u64 = t.iter().map(|&x| sq(x)).sum::<u64>() % p;
            let si: u64 = t.iter().map(|&x| inv_sq(x)).sum::<u64>() % p;
            if s == 0 && si != 0 {
                return Some(t);
            }
            // t_1 = 1 by scaling
            let mut i = 1;
            while i < k && t[i] == p - 1 {
                t[i] = 1;
                i += 1;
            }
            if i == k {
                break;
            }
            t[i] += 1;
        }
    }
    None
}

/// `P` in `SL_2` with `P^{-1} a P` of zero diagonal.
fn zero_diagonal_conjugator(a: &ModMatrix) -> Option<ModMatrix> {
    let p = a.modulus();
    for v in [[1, 0], [0, 1], [1, 1], [1, 2]] {
        let v = vec![v[0] % p, v[1] % p];
        let w = column(a, &v);
        let delta = (mulmod(v[0], w[1], p) + p - mulmod(v[1], w[0], p)) % p;
        if let Some(inv) = inv_mod(delta, p) {
            let w: Vec<u64> = w.iter().map(|&x| mulmod(x, inv, p)).collect();
            return Some(from_columns(&[v, w], p));
        }
    }
    None
}

/// Conjugators `y` with `N = sum y^{-1} a y` nilpotent and nonzero.
fn to_nilpotent(a: &ModMatrix, rng: &mut ChaCha8Rng) -> Result<Option<(Vec<ModMatrix>, ModMatrix, Rung)>> {
    let n = a.n();
    let p = a.modulus();
    if is_zero(a) {
        return Ok(None);
    }
    if is_nilpotent(a)? {
        return Ok(Some((vec![ModMatrix::identity(n, p)], a.clone(), Rung::Nilpotent)));
    }
    if n == 2 {
        let (Some(pm), Some(ts)) = (zero_diagonal_conjugator(a), vanishing_squares(p)) else {
            return Ok(None);
        };
        // x = P D_t^{-1}, D_t = diag(t, 1/t)
        let xs: Vec<ModMatrix> = ts
            .iter()
            .map(|&t| pm.mul(&diag(p, &[inv_mod(t, p).expect("nonzero"), t])))
            .collect::<Result<_>>()?;
        let sum = sum_of_conjugates(a, &xs)?;
        return Ok(Some((xs, sum, Rung::TwoByTwo)));
    }
    if a.det() == 0 {
        let v = kernel_vector(a).expect("singular");
        let pm = complete_to_sl(&v, p).expect("nonzero kernel vector");
        let block = trailing_block(&a.conjugate_by(&pm)?);
        if block.scalar_value().is_some() {
            return Ok(None);
        }
        let Some((ys, _, _)) = to_nilpotent(&block, rng)? else {
            return Ok(None);
        };
        let xs: Vec<ModMatrix> = ys.iter().map(|y| pm.mul(&embed_trailing(y))).collect::<Result<_>>()?;
        let sum = sum_of_conjugates(a, &xs)?;
        return Ok(Some((xs, sum, Rung::Reduction)));
    }
    let mut signs = vec![1u64; n];
    signs[0] = p - 1;
    signs[1] = p - 1;
    let dm = diag(p, &signs);
    for _ in 0..400 {
        let pm = random_sl(n, p, rng);
        let ap = a.conjugate_by(&pm)?;
        let s = ap.add(&ap.conjugate_by(&dm)?);
        if s.det() != 0 || s.scalar_value().is_some() {
            continue;
        }
        if let Some((ys, _, _)) = to_nilpotent(&s, rng)? {
            let pd = pm.mul(&dm)?;
            let mut xs = Vec::with_capacity(2 * ys.len());
            for y in &ys {
                xs.push(pm.mul(y)?);
                xs.push(pd.mul(y)?);
            }
            let sum = sum_of_conjugates(a, &xs)?;
            return Ok(Some((xs, sum, Rung::Reduction)));
        }
    }
    Ok(None)
}

/// Conjugators `y` with `R = sum y^{-1} a y` nilpotent of rank one.
fn to_rank_one(a: &ModMatrix, rng: &mut ChaCha8Rng) -> Result<Option<(Vec<ModMatrix>, ModMatrix, Rung)>> {
    let Some((ys, nm, rung)) = to_nilpotent(a, rng)? else {
        return Ok(None);
    };
    if is_rank_one_nilpotent(&nm)? {
        return Ok(Some((ys, nm, rung)));
    }
    let n = a.n();
    let p = a.modulus();
    if matrix_rank(&nm) != n - 1 {
        return Ok(None);
    }
    // Jordan basis N^{n-1} v, ..., N v, v of the single block
    let Some(v) = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            e
        })
        .find(|e| {
            let mut w = e.clone();
            for _ in 1..n {
                w = column(&nm, &w);
            }
            w.iter().any(|&x| x != 0)
        })
    else {
        return Ok(None);
    };
    let mut cols = vec![v];
    for _ in 1..n {
        let next = column(&nm, cols.last().expect("non-empty"));
        cols.push(next);
    }
    cols.reverse();
    let pm = from_columns(&cols, p);
    let pm = scale_column(&pm, 0, inv_mod(pm.det(), p).expect("basis"));
    let mut d = vec![1u64; n];
    d[0] = p - 1;
    d[2] = p - 1;
    let mut dp = diag(p, &d).residues().to_vec();
    dp[n + n - 1] = (dp[n + n - 1] + 1) % p;
    let dp = ModMatrix::from_residues(n, p, dp);
    let pd = pm.mul(&dp)?;
    let mut xs = Vec::with_capacity(2 * ys.len());
    for y in &ys {
        xs.push(y.mul(&pm)?);
        xs.push(y.mul(&pd)?);
    }
    let sum = sum_of_conjugates(a, &xs)?;
    if !is_rank_one_nilpotent(&sum)? {
        return Ok(None);
    }
    Ok(Some((xs, sum, rung)))
}

fn sum_of_conjugates(a: &ModMatrix, xs: &[ModMatrix]) -> Result<ModMatrix> {
    let mut acc = zero(a.n(), a.modulus());
    for x in xs {
        acc = acc.add(&a.conjugate_by(x)?);
    }
    Ok(acc)
}

/// `P` in `SL_n` and `alpha` with `P^{-1} r P = E_12(alpha)`, for `r` nilpotent of rank one.
fn to_e12(r: &ModMatrix) -> Result<(ModMatrix, u64)> {
    let n = r.n();
    let p = r.modulus();
    // r = u v^T with the first nonzero entry of u equal to 1
    let j = (0..n).find(|&c| (0..n).any(|i| r.at(i, c) != 0)).expect("nonzero");
    let col: Vec<u64> = (0..n).map(|i| r.at(i, j)).collect();
    let lead = col.iter().position(|&x| x != 0).expect("nonzero column");
    let s = inv_mod(col[lead], p).expect("prime");
    let u: Vec<u64> = col.iter().map(|&x| mulmod(x, s, p)).collect();
    let v: Vec<u64> = (0..n).map(|c| r.at(lead, c)).collect();
    let k = v.iter().position(|&x| x != 0).expect("nonzero row");
    let mut w = vec![0; n];
    w[k] = inv_mod(v[k], p).expect("prime");
    let mut e = Echelon::new(p);
    e.insert(&u);
    e.insert(&w);
    let mut cols = vec![u, w.clone()];
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut c: Vec<u64> = w.iter().map(|&x| mulmod(x, (p - v[i]) % p, p)).collect();
        c[i] = (c[i] + 1) % p;
        if e.insert(&c) {
            cols.push(c);
        }
    }
    let pm = from_columns(&cols, p);
    let delta_inv = inv_mod(pm.det(), p).ok_or_else(|| Error::Internal("rank-one basis is singular".into()))?;
    Ok((scale_column(&pm, 1, delta_inv), delta_inv))
}

/// Random conjugates `h^{-1} r h` spanning `sl_n`, starting with `h = I`.
fn spanning_conjugators(r: &ModMatrix, rng: &mut ChaCha8Rng) -> Result<Option<(Vec<ModMatrix>, Echelon)>> {
    let n = r.n();
    let p = r.modulus();
    let dim = n * n - 1;
    let mut e = Echelon::new(p);
    let mut hs = Vec::with_capacity(dim);
    let mut candidate = ModMatrix::identity(n, p);
    for _ in 0..(50 * dim + 1000) {
        if e.insert(&sl_coordinates(&r.conjugate_by(&candidate)?)) {
            hs.push(candidate);
            if hs.len() == dim {
                return Ok(Some((hs, e)));
            }
        }
        candidate = random_sl(n, p, rng);
    }
    Ok(None)
}

fn structured(a: &ModMatrix, b: &ModMatrix, rng: &mut ChaCha8Rng) -> Result<Option<(Vec<ModMatrix>, Rung)>> {
    let p = a.modulus();
    let n = a.n();
    let Some((ys, r, rung)) = to_rank_one(a, rng)? else {
        return Ok(None);
    };
    let (pm, _) = to_e12(&r)?;
    let pm_inv = pm.inverse()?;
    let Some((hs, e)) = spanning_conjugators(&r, rng)? else {
        return Ok(None);
    };
    let beta = e.solve(&sl_coordinates(b)).ok_or_else(|| Error::Internal("conjugates do not span".into()))?;
    let mut out = Vec::new();
    for (h, &bk) in hs.iter().zip(&beta) {
        if bk == 0 {
            continue;
        }
        let (x, y) = two_squares(bk, p)?;
        for t in [x, y] {
            if t == 0 {
                continue;
            }
            // z^{-1} r z = t^2 r for z = P diag(1/t, t) P^{-1}
            let mut d = vec![1u64; n];
            d[0] = inv_mod(t, p).expect("nonzero");
            d[1] = t;
            let z = pm.mul(&diag(p, &d))?.mul(&pm_inv)?;
            let zh = z.mul(h)?;
            for yj in &ys {
                out.push(yj.mul(&zh)?);
            }
        }
    }
    Ok(Some((out, rung)))
}

fn spanning(a: &ModMatrix, b: &ModMatrix, rng: &mut ChaCha8Rng) -> Result<Vec<ModMatrix>> {
    let Some((hs, e)) = spanning_conjugators(a, rng)? else {
        return Err(Error::Internal("conjugates of A do not span sl_n".into()));
    };
    let coeffs = e.solve(&sl_coordinates(b)).ok_or_else(|| Error::Internal("conjugates do not span".into()))?;
    let mut out = Vec::new();
    for (h, &c) in hs.iter().zip(&coeffs) {
        for _ in 0..c {
            out.push(h.clone());
        }
    }
    Ok(out)
}

/// Writes `B` as a sum of conjugates of the non-central `A`, with the default
/// term cap [`ladder_bound`].
pub fn conj_sum_decompose(a: &LieMatrix, b: &LieMatrix, seed: u64) -> Result<ConjSum> {
    conj_sum_decompose_with(a, b, seed, ladder_bound(a.n(), a.p()))
}

/// The structured reduction runs first, then a few random bases of conjugates of
/// `A` spanning `sl_n` (at most `(n^2-1)(p-1)` terms each); the shortest
/// answer is kept. For `p = 2` only the spanning route runs.
pub fn conj_sum_decompose_with(a: &LieMatrix, b: &LieMatrix, seed: u64, bound: usize) -> Result<ConjSum> {
    let (n, p) = (a.n(), a.p());
    if b.n() != n || b.p() != p {
        return Err(Error::DimensionMismatch { left: n, right: b.n() });
    }
    if a.is_central() {
        return Err(Error::Precondition("A is central".into()));
    }
    if a == b {
        return Ok(ConjSum { conjugators: vec![ModMatrix::identity(n, p)], rung: Rung::Identity, bound });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ConjSum> = None;
    if p != 2 {
        if let Some((xs, rung)) = structured(&a.m, &b.m, &mut rng)? {
            if xs.len() <= bound {
                best = Some(ConjSum { conjugators: xs, rung, bound });
            }
        }
    }
    for _ in 0..SPANNING_TRIES {
        let xs = spanning(&a.m, &b.m, &mut rng)?;
        if best.as_ref().is_none_or(|c| xs.len() < c.terms()) {
            best = Some(ConjSum { conjugators: xs, rung: Rung::Spanning, bound });
        }
    }
    let best = best.expect("spanning always answers");
    if best.terms() > bound {
        return Err(Error::Precondition(format!("{} terms exceed the bound {bound}", best.terms())));
    }
    Ok(best)
}

/// Traceless matrix with uniform entries; the last diagonal entry fixes the trace.
pub fn random_lie(n: usize, p: u64, rng: &mut impl Rng) -> ModMatrix {
    let mut data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
    let tr: u64 = (0..n - 1).map(|i| data[i * n + i]).sum::<u64>() % p;
    data[n * n - 1] = (p - tr) % p;
    ModMatrix::from_residues(n, p, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lie(n: usize, p: u64, d: &[i64]) -> LieMatrix {
        LieMatrix::new(ModMatrix::from_signed(n, p, d)).unwrap()
    }

    #[test]
    fn squares_and_points() {
        assert_eq!(two_squares(0, 7).unwrap(), (0, 0));
        assert_eq!(two_squares(3, 7).unwrap(), (1, 3));
        assert_eq!(two_squares(1, 5).unwrap(), (1, 0));
        for p in [3u64, 5, 7, 11, 13, 101] {
            for c in 0..p.min(40) {
                let (x, y) = two_squares(c, p).unwrap();
                assert_eq!((x * x + y * y) % p, c);
            }
        }
        assert!(two_squares(1, 9).is_err());
        assert_eq!(curve_point(17).unwrap(), (5, 5, 1));
        for p in [19u64, 23, 29, 31, 97] {
            let (x, y, z) = curve_point(p).unwrap();
            assert_eq!((x * x + y * y + z * z) % p, 0);
        }
        let _ = curve_point(13);
    }

    #[test]
    fn decomposes_small_example() {
        let a = lie(2, 5, &[0, 1, 0, 0]);
        let b = lie(2, 5, &[0, 3, 0, 0]);
        let d = conj_sum_decompose(&a, &b, 1).unwrap();
        assert_eq!(d.terms(), 2);
        assert_eq!(d.sum(&a).unwrap(), *b.matrix());
        for x in &d.conjugators {
            assert_eq!((x.at(0, 1), x.at(1, 0)), (0, 0));
            assert_eq!(mulmod(x.at(0, 0), x.at(0, 0), 5), 4);
        }
        let same = conj_sum_decompose(&a, &a, 1).unwrap();
        assert_eq!(same.rung, Rung::Identity);
        assert!(same.conjugators[0].is_identity());
        let central = lie(2, 5, &[0, 0, 0, 0]);
        assert!(conj_sum_decompose(&central, &b, 1).is_err());
    }

    #[test]
    fn decomposes_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, p) in [(2usize, 5u64), (2, 13), (2, 17), (3, 7), (3, 5)] {
            for t in 0..20 {
                let a = loop {
                    let m = LieMatrix::new(random_lie(n, p, &mut rng)).unwrap();
                    if !m.is_central() {
                        break m;
                    }
                };
                let b = LieMatrix::new(random_lie(n, p, &mut rng)).unwrap();
                let d = conj_sum_decompose(&a, &b, t).unwrap();
                assert_eq!(d.sum(&a).unwrap(), *b.matrix(), "n={n} p={p}");
                assert!(d.terms() <= ladder_bound(n, p));
                if (n, p) == (3, 7) {
                    assert!(d.terms() <= 2 * (n * n - 1) * 2);
                }
            }
        }
    }

    #[test]
    fn structured_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // single Jordan block
        let j = ModMatrix::from_signed(3, 7, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        let (_, r, rung) = to_rank_one(&j, &mut rng).unwrap().unwrap();
        assert_eq!(rung, Rung::Nilpotent);
        assert!(is_rank_one_nilpotent(&r).unwrap());
        // invertible traceless 3x3
        let a = ModMatrix::from_signed(3, 7, &[1, 0, 0, 0, 2, 0, 0, 0, -3]);
        let (xs, r, rung) = to_rank_one(&a, &mut rng).unwrap().unwrap();
        assert_eq!(rung, Rung::Reduction);
        assert_eq!(sum_of_conjugates(&a, &xs).unwrap(), r);
        let h = ModMatrix::from_signed(2, 13, &[1, 2, 3, -1]);
        let (_, nm, rung) = to_nilpotent(&h, &mut rng).unwrap().unwrap();
        assert_eq!(rung, Rung::TwoByTwo);
        assert!(is_nilpotent(&nm).unwrap() && !is_zero(&nm));
        let (pm, alpha) = to_e12(&r).unwrap();
        let mut e = vec![0u64; 9];
        e[1] = alpha;
        assert_eq!(r.conjugate_by(&pm).unwrap(), ModMatrix::from_residues(3, 7, e));
    }
}

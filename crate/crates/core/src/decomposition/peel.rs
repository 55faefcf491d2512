use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{mennicke_in_e, mennicke_violation, CongruenceLevel, IntMatrix};

use super::certificate::{ClassifiedFactor, FactorCertificate};

const SHELL_CAP: i64 = 16;

fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

fn shifted_gcd(a: &[BigInt], t: &[BigInt]) -> BigInt {
    let a1 = &a[0];
    a[1..]
        .iter()
        .zip(t)
        .fold(BigInt::zero(), |acc, (ai, ti)| acc.gcd(&(ai - ti * a1)))
}

/// `0, 1, -1, 2, -2, ...` restricted to `|x| = s`.
fn shell_values(s: i64) -> Vec<i64> {
    if s == 0 {
        vec![0]
    } else {
        vec![s, -s]
    }
}

/// Returns `t_2..t_m` with `gcd(a_2 - t_2 a_1, ..., a_m - t_m a_1) = gcd(a_1, ..., a_m)`.
///
/// Small shifts of the first two coordinates are tried first, in shells of
/// increasing max-norm; a direct construction covers the rest.
pub fn stable_range_coeffs(a: &[BigInt]) -> Result<Vec<BigInt>> {
    if a.len() < 3 {
        return Err(Error::Precondition(format!(
            "stable range needs at least 3 entries, got {}",
            a.len()
        )));
    }
    let target = gcd_all(a);
    if target.is_zero() {
        return Err(Error::Precondition("stable range needs a nonzero vector".into()));
    }
    let k = a.len() - 1;
    let mut t = vec![BigInt::zero(); k];
    if a[0].is_zero() {
        return Ok(t);
    }
    for s in 0..=SHELL_CAP {
        for t3 in (0..=s).flat_map(shell_values) {
            for t2 in (0..=s).flat_map(shell_values) {
                if t2.abs().max(t3.abs()) != s {
                    continue;
                }
                t[0] = BigInt::from(t2);
                t[1] = BigInt::from(t3);
                if shifted_gcd(a, &t) == target {
                    return Ok(t);
                }
            }
        }
    }
    t.iter_mut().for_each(|x| x.set_zero());
    if a[2..].iter().all(Zero::is_zero) {
        // the third coordinate becomes a_1 and gcd(a_1, a_2) is the target
        t[1] = BigInt::from(-1);
        return Ok(t);
    }
    // t_2 = the part of d' coprime to a_2': every prime of d' divides exactly
    // one of a_2' and a_2' - t_2 a_1'
    let d = gcd_all(&a[2..]);
    let a2 = &a[1] / &target;
    let mut r = &d / &target;
    loop {
        let g = r.gcd(&a2);
        if g.is_one() {
            break;
        }
        r /= g;
    }
    t[0] = r;
    if shifted_gcd(a, &t) != target {
        return Err(Error::Internal("stable range construction failed".into()));
    }
    Ok(t)
}

/// Integer vector `x` with `sum x_i v_i = gcd(v)`.
pub(crate) fn bezout_vector(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut x = vec![BigInt::zero(); v.len()];
    let mut g = BigInt::zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = vi.clone();
            x[i] = BigInt::one();
            continue;
        }
        let e = g.extended_gcd(vi);
        for xj in x.iter_mut().take(i) {
            *xj *= &e.x;
        }
        x[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        x.iter_mut().for_each(|xi| *xi = -&*xi);
    }
    (g, x)
}

/// Solution `y` of `sum y_j b_j = rhs` with entries of roughly the size of `b`.
fn short_combination(b: &[BigInt], rhs: &BigInt) -> Option<Vec<BigInt>> {
    let (g, x) = bezout_vector(b);
    if g.is_zero() || !rhs.is_multiple_of(&g) {
        return None;
    }
    let scale = rhs / &g;
    let mut y: Vec<BigInt> = x.into_iter().map(|xi| xi * &scale).collect();
    let k = (0..b.len())
        .filter(|&i| !b[i].is_zero())
        .min_by_key(|&i| b[i].magnitude().clone())?;
    for j in 0..b.len() {
        if j == k {
            continue;
        }
        let d = b[j].gcd(&b[k]);
        let step = &b[k] / &d;
        let t = round_div(&y[j], &step);
        if t.is_zero() {
            continue;
        }
        y[j] -= &t * &step;
        y[k] += &t * (&b[j] / &d);
    }
    Some(y)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    if b.is_negative() {
        return round_div(&-a, &-b);
    }
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

fn norm2(v: impl Iterator<Item = BigInt>) -> BigInt {
    v.map(|x| &x * &x).sum()
}

/// `(l, g', u)` with `g' = l g u`, `l` lower and `u` upper unitriangular at
/// level `q`, and `g'` size-reduced by pairwise row and column moves.
pub(crate) fn size_reduce(g: &IntMatrix, q: &BigInt) -> (IntMatrix, IntMatrix, IntMatrix) {
    let n = g.n();
    let mut m = g.clone();
    let mut l = IntMatrix::identity(n);
    let mut u = IntMatrix::identity(n);
    for _ in 0..64 {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                // row_j -= t q row_i
                let ni = norm2((0..n).map(|c| m.at(i, c).clone()));
                if !ni.is_zero() {
                    let d: BigInt = (0..n).map(|c| m.at(i, c) * m.at(j, c)).sum();
                    let t = round_div(&d, &(&ni * q)) * q;
                    if !t.is_zero() {
                        for c in 0..n {
                            let x = m.at(i, c) * &t;
                            *m.at_mut(j, c) -= x;
                            let y = l.at(i, c) * &t;
                            *l.at_mut(j, c) -= y;
                        }
                        changed = true;
                    }
                }
                // col_j -= t q col_i
                let ni = norm2((0..n).map(|r| m.at(r, i).clone()));
                if !ni.is_zero() {
                    let d: BigInt = (0..n).map(|r| m.at(r, i) * m.at(r, j)).sum();
                    let t = round_div(&d, &(&ni * q)) * q;
                    if !t.is_zero() {
                        for r in 0..n {
                            let x = m.at(r, i) * &t;
                            *m.at_mut(r, j) -= x;
                            let y = u.at(r, i) * &t;
                            *u.at_mut(r, j) -= y;
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (l, m, u)
}

/// One reduction step `g = c1 r1 c2 diag(1, left g') r2`, with `c1, c2` in
/// the first-column group, `r1` in the first-row group at level `q`, `left`
/// lower and `r2` upper unitriangular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    pub c1: IntMatrix,
    pub r1: IntMatrix,
    pub c2: IntMatrix,
    pub r2: IntMatrix,
    pub left: IntMatrix,
    /// `g'` of size `n - 1`.
    pub reduced: IntMatrix,
}

impl PeelStep {
    pub fn reconstruct(&self) -> IntMatrix {
        let n = self.c1.n();
        let mid = (&self.left * &self.reduced).embed(n, 1);
        &(&(&(&self.c1 * &self.r1) * &self.c2) * &mid) * &self.r2
    }
}

fn require_e(g: &IntMatrix, q: &CongruenceLevel) -> Result<()> {
    if !mennicke_in_e(g, q)? {
        let why = mennicke_violation(g, q).unwrap_or_else(|| "not in E(n, Z; q)".into());
        return Err(Error::Precondition(why));
    }
    Ok(())
}

/// Up to `limit` small shift vectors for [`stable_range_coeffs`], in the
/// same search order.
fn stable_range_candidates(a: &[BigInt], limit: usize) -> Result<Vec<Vec<BigInt>>> {
    let first = stable_range_coeffs(a)?;
    let mut out = vec![first];
    let target = gcd_all(a);
    let k = a.len() - 1;
    'outer: for s in 0..=SHELL_CAP.min(4) {
        for t3 in (0..=s).flat_map(shell_values) {
            for t2 in (0..=s).flat_map(shell_values) {
                if t2.abs().max(t3.abs()) != s {
                    continue;
                }
                if out.len() >= limit {
                    break 'outer;
                }
                let mut t = vec![BigInt::zero(); k];
                t[0] = BigInt::from(t2);
                t[1] = BigInt::from(t3);
                if !out.contains(&t) && shifted_gcd(a, &t) == target {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

fn bits_score(m: &IntMatrix) -> (u64, u64) {
    let total = m.entries().iter().map(|x| x.bits()).sum();
    (m.max_bits(), total)
}

/// Splits off the first row and column of `g` in `E(n, Z; q)`, `n >= 4`.
///
/// Several admissible shifts and corner fixes are tried; the one leaving the
/// smallest reduced block is kept.
pub fn peel_once(g: &IntMatrix, q: &CongruenceLevel) -> Result<PeelStep> {
    Ok(peel_candidates(g, q)?.swap_remove(0).1)
}

/// Every candidate step tried by [`peel_once`], smallest reduced block first.
fn peel_candidates(g: &IntMatrix, q: &CongruenceLevel) -> Result<Vec<((u64, u64), PeelStep)>> {
    let n = g.n();
    if n < 4 {
        return Err(Error::Precondition(format!("peeling needs n >= 4, got {n}")));
    }
    require_e(g, q)?;
    let qv = q.value();
    let id = IntMatrix::identity(n);
    let q2 = qv * qv;

    // column group: make gcd of the entries below (1,1) equal to q
    let shifts = if g.at(0, 0).is_one() {
        vec![vec![BigInt::zero(); n - 1]]
    } else {
        let mut a: Vec<BigInt> = (0..n).map(|r| g.at(r, 0).clone()).collect();
        a[0] = &a[0] * qv;
        stable_range_candidates(&a, 4)?
    };
    let mut out: Vec<((u64, u64), PeelStep)> = Vec::new();
    for t in &shifts {
        let mut c = id.clone();
        for (i, ti) in t.iter().enumerate() {
            *c.at_mut(i + 1, 0) = -(ti * qv);
        }
        let h = &c * g;

        // row group: fix the corner to 1
        let below: Vec<BigInt> = (1..n).map(|r| h.at(r, 0) / qv).collect();
        let num = BigInt::one() - h.at(0, 0);
        if !num.is_multiple_of(&q2) {
            return Err(Error::Internal("corner entry is not 1 mod q^2".into()));
        }
        let mut fixes = vec![vec![BigInt::zero(); n - 1]];
        if !num.is_zero() {
            let y = short_combination(&below, &(num / &q2))
                .ok_or_else(|| Error::Internal("column gcd is not 1 after the shift".into()))?;
            fixes = kernel_neighbours(&y, &below);
        }
        for y in fixes {
            let mut r = id.clone();
            for (j, yj) in y.iter().enumerate() {
                *r.at_mut(0, j + 1) = yj * qv;
            }
            let step = finish_peel(&c, &r, &(&r * &h), qv)?;
            if !out.iter().any(|o| o.1.reduced == step.reduced) {
                out.push((bits_score(&step.reduced), step));
            }
        }
    }
    let hinv = g.inverse()?;
    let mut small = vec![vec![BigInt::zero(); n - 1]];
    for i in 0..n - 1 {
        for sign in [1, -1] {
            let mut v = vec![BigInt::zero(); n - 1];
            v[i] = BigInt::from(sign);
            small.push(v);
        }
    }
    for fixed in &small {
        for column_fixed in [true, false] {
            if let Some(step) = bilinear_step(g, &hinv, fixed, column_fixed, qv)? {
                if !out.iter().any(|o| o.1.reduced == step.reduced) {
                    out.push((bits_score(&step.reduced), step));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Step `g = C R C' diag(1, g') R'` from vectors `r = e_1 + q r'` and
/// `c = e_1 + q c'` with `r g^-1 c = 1`; `C` and `R'` are the first-column and
/// first-row matrices of `c` and `r`, so `g'` stays close to `g` in size.
/// One of `r'`, `c'` is `fixed`, the other is a short solution.
fn bilinear_step(
    g: &IntMatrix,
    hinv: &IntMatrix,
    fixed: &[BigInt],
    column_fixed: bool,
    qv: &BigInt,
) -> Result<Option<PeelStep>> {
    let n = g.n();
    let q2 = qv * qv;
    let mut f = vec![BigInt::one()];
    f.extend(fixed.iter().map(|x| x * qv));
    // v = hinv c or r hinv
    let v: Vec<BigInt> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if column_fixed { hinv.at(i, j) * &f[j] } else { &f[j] * hinv.at(j, i) })
                .sum()
        })
        .collect();
    let num = BigInt::one() - &v[0];
    if !num.is_multiple_of(&q2) {
        return Ok(None);
    }
    let w: Vec<BigInt> = v[1..].iter().map(|x| x / qv).collect();
    let Some(sol) = super::lattice::short_solution(&w, &(num / &q2)) else {
        return Ok(None);
    };
    let (cs, rs) = if column_fixed { (fixed.to_vec(), sol) } else { (sol, fixed.to_vec()) };
    let id = IntMatrix::identity(n);
    let mut c = id.clone();
    let mut rp = id.clone();
    for i in 1..n {
        *c.at_mut(i, 0) = &cs[i - 1] * qv;
        *rp.at_mut(0, i) = &rs[i - 1] * qv;
    }
    let m = &(&c.inverse()? * g) * &rp.inverse()?;
    let minv = &(&rp * hinv) * &c;
    if !minv.at(0, 0).is_one() {
        return Err(Error::Internal("bilinear peel condition failed".into()));
    }
    let mut rinv = id.clone();
    for j in 1..n {
        *rinv.at_mut(0, j) = minv.at(0, j).clone();
    }
    let h = &rinv * &m;
    if (1..n).any(|j| !h.at(0, j).is_zero()) || !h.at(0, 0).is_one() {
        return Err(Error::Internal("bilinear peel left a nonzero first row".into()));
    }
    let mut c2 = id;
    for i in 1..n {
        *c2.at_mut(i, 0) = h.at(i, 0).clone();
    }
    let (l, reduced, u) = size_reduce(&h.block(1, 1, n - 1), qv);
    Ok(Some(PeelStep {
        c1: c,
        r1: rinv.inverse()?,
        c2,
        r2: &u.inverse()?.embed(n, 1) * &rp,
        left: l.inverse()?,
        reduced,
    }))
}

/// `y` and its neighbours `y +- k` for the kernel vectors `k` of `b` pairing
/// the smallest entry with each other one.
fn kernel_neighbours(y: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![y.to_vec()];
    let Some(k) = (0..b.len())
        .filter(|&i| !b[i].is_zero())
        .min_by_key(|&i| b[i].magnitude().clone())
    else {
        return out;
    };
    for j in 0..b.len() {
        if j == k || b[j].is_zero() {
            continue;
        }
        let d = b[j].gcd(&b[k]);
        let (sj, sk) = (&b[k] / &d, &b[j] / &d);
        for sign in [1i32, -1] {
            let mut z = y.to_vec();
            z[j] += &sj * sign;
            z[k] -= &sk * sign;
            out.push(z);
        }
    }
    out
}

/// Clears the border of `h1` (corner entry 1) and size-reduces the rest.
fn finish_peel(c: &IntMatrix, r: &IntMatrix, h1: &IntMatrix, qv: &BigInt) -> Result<PeelStep> {
    let n = h1.n();
    debug_assert!(h1.at(0, 0).is_one());
    let id = IntMatrix::identity(n);
    // clear the first column, then the first row
    let mut c2 = id.clone();
    for i in 1..n {
        *c2.at_mut(i, 0) = -h1.at(i, 0);
    }
    let h2 = &c2 * h1;
    let mut r2 = id;
    for j in 1..n {
        *r2.at_mut(0, j) = -h2.at(0, j);
    }
    let h3 = &h2 * &r2;
    let reduced = h3.block(1, 1, n - 1);
    if h3 != reduced.embed(n, 1) {
        return Err(Error::Internal("peeling left a nonzero border".into()));
    }
    let (l, reduced, u) = size_reduce(&reduced, qv);
    Ok(PeelStep {
        c1: c.inverse()?,
        r1: r.inverse()?,
        c2: c2.inverse()?,
        r2: &u.inverse()?.embed(n, 1) * &r2.inverse()?,
        left: l.inverse()?,
        reduced,
    })
}

/// `g = L U L diag(I, g*) U` as raw matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EFactorization {
    pub l1: IntMatrix,
    pub u1: IntMatrix,
    pub l2: IntMatrix,
    /// The corner block `g*`.
    pub corner: IntMatrix,
    pub u2: IntMatrix,
}

impl EFactorization {
    pub fn n(&self) -> usize {
        self.l1.n()
    }

    pub fn eblock(&self) -> IntMatrix {
        let n = self.n();
        self.corner.embed(n, n - self.corner.n())
    }

    pub fn certificate(&self, input: &IntMatrix, q: &CongruenceLevel) -> FactorCertificate {
        let factors = vec![
            ClassifiedFactor::lower(self.l1.clone()),
            ClassifiedFactor::upper(self.u1.clone()),
            ClassifiedFactor::lower(self.l2.clone()),
            ClassifiedFactor::eblock(self.eblock(), self.corner.n()),
            ClassifiedFactor::upper(self.u2.clone()),
        ];
        FactorCertificate::new(input.clone(), q.clone(), factors)
    }
}

/// Raw factorization behind [`factor_e`].
pub fn factor_e_parts(g: &IntMatrix, q: &CongruenceLevel, m: usize) -> Result<EFactorization> {
    Ok(factor_e_beam(g, q, m, 1)?.swap_remove(0))
}

/// Up to `beam` distinct factorizations, keeping the `beam` smallest partial
/// reductions at every peeling step; smallest corner first.
pub fn factor_e_beam(g: &IntMatrix, q: &CongruenceLevel, m: usize, beam: usize) -> Result<Vec<EFactorization>> {
    let n = g.n();
    if m < 3 || m > n {
        return Err(Error::Precondition(format!("need n >= m >= 3, got n = {n}, m = {m}")));
    }
    require_e(g, q)?;
    let beam = beam.max(1);
    let mut states: Vec<((u64, u64), Vec<PeelStep>)> = vec![(bits_score(g), Vec::new())];
    for _ in m..n {
        let mut next: Vec<((u64, u64), Vec<PeelStep>)> = Vec::new();
        for (_, steps) in &states {
            let cur = steps.last().map(|s| &s.reduced).unwrap_or(g);
            for (score, step) in peel_candidates(cur, q)?.into_iter().take(beam) {
                if next.iter().any(|x| x.1.last().map(|s| &s.reduced) == Some(&step.reduced)) {
                    continue;
                }
                let mut chain = steps.clone();
                chain.push(step);
                next.push((score, chain));
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        next.truncate(beam);
        states = next;
    }
    states.into_iter().map(|(_, steps)| assemble(g, m, &steps)).collect()
}

fn assemble(g: &IntMatrix, m: usize, steps: &[PeelStep]) -> Result<EFactorization> {
    let id = IntMatrix::identity(m);
    let mut f = EFactorization {
        l1: id.clone(),
        u1: id.clone(),
        l2: id.clone(),
        corner: steps.last().map(|s| s.reduced.clone()).unwrap_or_else(|| g.clone()),
        u2: id,
    };
    for step in steps.iter().rev() {
        let k = step.c1.n();
        let l1 = (&step.left * &f.l1).embed(k, 1);
        let u1 = f.u1.embed(k, 1);
        let l2 = f.l2.embed(k, 1);
        let u2 = f.u2.embed(k, 1);
        let l1i = l1.inverse()?;
        let u1i = u1.inverse()?;
        // C R C' L1 U1 L2 E U2 R' = (C L1)(L1^-1 R L1 U1)(U1^-1 L1^-1 C' L1 U1 L2) E (U2 R')
        let new_l1 = &step.c1 * &l1;
        let new_u1 = &(&(&l1i * &step.r1) * &l1) * &u1;
        let new_l2 = &(&(&(&(&u1i * &l1i) * &step.c2) * &l1) * &u1) * &l2;
        let new_u2 = &u2 * &step.r2;
        f = EFactorization {
            l1: new_l1,
            u1: new_u1,
            l2: new_l2,
            corner: f.corner,
            u2: new_u2,
        };
    }
    Ok(f)
}

/// Certificate `L,U,L,Eblock,U` for `g` in `E(n, Z; q)` with an `m x m` corner.
pub fn factor_e(g: &IntMatrix, q: &CongruenceLevel, m: usize) -> Result<FactorCertificate> {
    Ok(factor_e_parts(g, q, m)?.certificate(g, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::elementary;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(x: i64) -> CongruenceLevel {
        CongruenceLevel::new(x).unwrap()
    }

    #[test]
    fn stable_range_examples() {
        assert_eq!(stable_range_coeffs(&v(&[6, 10, 15])).unwrap(), v(&[1, 0]));
        let t = stable_range_coeffs(&v(&[1, 0, 0])).unwrap();
        assert!(shifted_gcd(&v(&[1, 0, 0]), &t).is_one());
        let t = stable_range_coeffs(&v(&[4, 6, 9])).unwrap();
        assert!(shifted_gcd(&v(&[4, 6, 9]), &t).is_one());
        for a in [
            v(&[5, 2, 0, 0]),
            v(&[0, 4, 6]),
            v(&[30030, 1, 30030 * 7]),
            v(&[2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23, 1, 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29]),
        ] {
            let t = stable_range_coeffs(&a).unwrap();
            assert_eq!(shifted_gcd(&a, &t), gcd_all(&a), "{a:?}");
        }
    }

    #[test]
    fn bezout() {
        let (g, x) = bezout_vector(&v(&[6, 10, 15]));
        assert!(g.is_one());
        let s: BigInt = x.iter().zip(v(&[6, 10, 15])).map(|(a, b)| a * b).sum();
        assert!(s.is_one());
    }

    #[test]
    fn peel_examples() {
        let g = IntMatrix::from_i64_rows([[1, 0, 0, 0], [0, 1, 2, 0], [0, 0, 1, 0], [0, 2, 0, 1]]);
        let s = peel_once(&g, &q(2)).unwrap();
        assert_eq!(s.reconstruct(), g);
        assert!(s.c1.is_identity() && s.r1.is_identity());

        let g = &elementary(4, 2, 1, 2).unwrap() * &elementary(4, 1, 2, 4).unwrap();
        let s = peel_once(&g, &q(2)).unwrap();
        assert_eq!(s.reconstruct(), g);
        assert!(mennicke_in_e(&s.reduced, &q(2)).unwrap());

        let bad = IntMatrix::from_i64_rows([[3, -2, 0, 0], [2, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(peel_once(&bad, &q(2)).is_err());
    }

    #[test]
    fn factor_e_examples() {
        let g = IntMatrix::identity(5);
        let c = factor_e(&g, &q(3), 3).unwrap();
        assert!(c.factors.iter().all(|f| f.matrix.is_identity()));

        let g = &elementary(4, 1, 2, 2).unwrap() * &elementary(4, 3, 1, 2).unwrap();
        let c = factor_e(&g, &q(2), 3).unwrap();
        assert_eq!(c.claimed, "L,U,L,Eblock,U");
        assert!(c.verify().passed(), "{:?}", c.verify());
        assert_eq!(c.factors[3].block, Some(3));
    }
}

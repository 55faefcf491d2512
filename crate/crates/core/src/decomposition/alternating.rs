use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{in_congruence, in_lower, in_upper, CongruenceLevel, IntMatrix};

use super::certificate::FactorClass;

/// `J m J` for the antidiagonal `J`: reverses row and column order, swapping
/// upper and lower triangular shapes.
pub(crate) fn reverse(m: &IntMatrix) -> IntMatrix {
    let n = m.n();
    let mut data = Vec::with_capacity(n * n);
    for r in (0..n).rev() {
        for c in (0..n).rev() {
            data.push(m.at(r, c).clone());
        }
    }
    IntMatrix::from_vec(n, data)
}

/// `p = l u` with unit lower `l` and unit upper `u`, when every leading
/// principal minor of `p` is 1.
pub(crate) fn lu_split(p: &IntMatrix) -> Option<(IntMatrix, IntMatrix)> {
    let n = p.n();
    let mut l = IntMatrix::identity(n);
    let mut u = IntMatrix::identity(n);
    for k in 0..n {
        for j in k..n {
            let mut v = p.at(k, j).clone();
            for s in 0..k {
                v -= l.at(k, s) * u.at(s, j);
            }
            if j == k && !v.is_one() {
                return None;
            }
            *u.at_mut(k, j) = v;
        }
        for i in k + 1..n {
            let mut v = p.at(i, k).clone();
            for s in 0..k {
                v -= l.at(i, s) * u.at(s, k);
            }
            *l.at_mut(i, k) = v;
        }
    }
    Some((l, u))
}

/// `p = u l`, the mirror image of [`lu_split`].
pub(crate) fn ul_split(p: &IntMatrix) -> Option<(IntMatrix, IntMatrix)> {
    let (l, u) = lu_split(&reverse(p))?;
    Some((reverse(&l), reverse(&u)))
}

/// Alternating factors found by [`alternating_factor3`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingFactorization {
    pub factors: Vec<(FactorClass, IntMatrix)>,
}

impl AlternatingFactorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self) -> IntMatrix {
        let n = self.factors.first().map(|f| f.1.n()).unwrap_or(3);
        self.factors.iter().fold(IntMatrix::identity(n), |acc, f| &acc * &f.1)
    }
}

/// Soft failure of the search, carrying the block that could not be factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingFailure {
    pub residual: IntMatrix,
    pub max_len: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlternatingOutcome {
    Found(AlternatingFactorization),
    Exhausted(AlternatingFailure),
}

/// Search sizes for the alternating factorization of small blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Range of the free first-row multipliers, in units of `q`.
    pub pair_box: i64,
    /// Range of the one-parameter solution family of the corner equation.
    pub family: i64,
    /// Range of the remaining free multiplier, in units of `q`.
    pub inner_box: i64,
    /// Largest divisor tried when factoring the minor equation.
    pub divisor_bound: u64,
    /// Children explored per level when peeling factors greedily.
    pub beam: usize,
    /// Total inner evaluations before giving up.
    pub budget: u64,
    /// Alternative corner blocks tried by the `n x n` pipeline, sharing the
    /// budget.
    pub corners: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            pair_box: 4,
            family: 4,
            inner_box: 6,
            divisor_bound: 2000,
            beam: 3,
            budget: 400_000,
            corners: 4,
        }
    }
}

/// `0, 1, -1, 2, -2, ..., r, -r`.
fn centered(r: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=r).flat_map(|x| [x, -x]))
}

fn pairs(r: i64) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = centered(r).flat_map(|a| centered(r).map(move |b| (a, b))).collect();
    v.sort_by_key(|&(a, b)| (a.abs().max(b.abs()), a.abs() + b.abs()));
    v
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a / b, b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

struct Searcher<'a> {
    q: &'a BigInt,
    lim: SearchLimits,
    spent: u64,
}

impl Searcher<'_> {
    fn exhausted(&self) -> bool {
        self.spent >= self.lim.budget
    }

    /// `n = u1 l1 u2 l2`; with `fixed_u1` only `u1 = I` is tried.
    fn solve_ulul(&mut self, n: &IntMatrix, fixed_u1: bool) -> Option<[IntMatrix; 4]> {
        let q = self.q;
        let at = |r: usize, c: usize| n.at(r, c);
        let ab = if fixed_u1 { vec![(0, 0)] } else { pairs(self.lim.pair_box) };
        for (a1, b1) in ab {
            if self.exhausted() {
                return None;
            }
            let a = q * a1;
            let b = q * b1;
            let r: Vec<BigInt> = (0..3).map(|j| at(0, j) + &a * at(1, j) + &b * at(2, j)).collect();
            let t = BigInt::one() - &r[0];
            if !t.is_multiple_of(q) {
                continue;
            }
            let t = t / q;
            // r1 c' + r2 d' = t with c = q c', d = q d'
            let e = r[1].extended_gcd(&r[2]);
            let family: Vec<(BigInt, BigInt)> = if e.gcd.is_zero() {
                if !t.is_zero() {
                    continue;
                }
                centered(self.lim.family).map(|s| (BigInt::from(s), BigInt::zero())).collect()
            } else {
                if !t.is_multiple_of(&e.gcd) {
                    continue;
                }
                let k = &t / &e.gcd;
                let (c0, d0) = (&e.x * &k, &e.y * &k);
                let (sc, sd) = (&r[2] / &e.gcd, -&r[1] / &e.gcd);
                let norm = &sc * &sc + &sd * &sd;
                let centre = -round_div(&(&c0 * &sc + &d0 * &sd), &norm);
                centered(self.lim.family)
                    .map(|s| {
                        let s = &centre + s;
                        (&c0 + &s * &sc, &d0 + &s * &sd)
                    })
                    .collect()
            };
            for (c1, d1) in family {
                self.spent += 1;
                let c = q * &c1;
                let d = q * &d1;
                let sv: Vec<BigInt> = (0..3).map(|i| at(i, 0) + &c * at(i, 1) + &d * at(i, 2)).collect();
                // leading 2x2 minor = alpha + beta e + gamma f + delta e f
                let alpha = at(1, 1) - &r[1] * &sv[1];
                let beta = at(2, 1) - &r[1] * &sv[2];
                let gamma = at(1, 2) - &r[2] * &sv[1];
                let delta = at(2, 2) - &r[2] * &sv[2];
                for (ev, fv) in self.minor_solutions(&alpha, &beta, &gamma, &delta, fixed_u1) {
                    if let Some(sol) = self.assemble(n, [&a, &b, &ev], [&c, &d, &fv]) {
                        return Some(sol);
                    }
                }
            }
        }
        None
    }

    /// Solutions `(e, f)`, both multiples of `q`, of
    /// `alpha + beta e + gamma f + delta e f = 1`.
    fn minor_solutions(
        &mut self,
        alpha: &BigInt,
        beta: &BigInt,
        gamma: &BigInt,
        delta: &BigInt,
        fixed_e: bool,
    ) -> Vec<(BigInt, BigInt)> {
        let q = self.q;
        let rhs = BigInt::one() - alpha;
        if !rhs.is_multiple_of(q) {
            return Vec::new();
        }
        // in units of q: B e' + G f' + D e' f' = R
        let bq = beta * q;
        let gq = gamma * q;
        let dq = delta * q * q;
        let mut out = Vec::new();
        let push_e = |e1: &BigInt, out: &mut Vec<(BigInt, BigInt)>| {
            // solve for f' given e'
            let coeff = &gq + &dq * e1;
            let rest = &rhs - &bq * e1;
            if coeff.is_zero() {
                if rest.is_zero() {
                    out.push((q * e1, BigInt::zero()));
                }
            } else if rest.is_multiple_of(&coeff) {
                out.push((q * e1, q * (rest / coeff)));
            }
        };
        if fixed_e {
            push_e(&BigInt::zero(), &mut out);
            return out;
        }
        for e1 in centered(self.lim.inner_box) {
            self.spent += 1;
            push_e(&BigInt::from(e1), &mut out);
        }
        if !dq.is_zero() {
            // (D e' + G)(D f' + B) = D R + B G
            let m = &dq * &rhs + &bq * &gq;
            if m.is_zero() {
                if gq.is_multiple_of(&dq) {
                    out.push((-(q * (&gq / &dq)), BigInt::zero()));
                }
                if bq.is_multiple_of(&dq) {
                    out.push((BigInt::zero(), -(q * (&bq / &dq))));
                }
            } else {
                let bound = self.lim.divisor_bound;
                let am = m.abs();
                let small = am.sqrt().to_u64().map(|x| x.min(bound)).unwrap_or(bound);
                self.spent += 1;
                for u in 1..=small {
                    if !(&am % u).is_zero() {
                        continue;
                    }
                    let ub = BigInt::from(u);
                    let v = &m / &ub;
                    for (x, y) in [(ub.clone(), v.clone()), (-&ub, -&v), (v.clone(), ub.clone()), (-&v, -&ub)] {
                        let en = &x - &gq;
                        let fnum = &y - &bq;
                        if en.is_multiple_of(&dq) && fnum.is_multiple_of(&dq) {
                            out.push((q * (en / &dq), q * (fnum / &dq)));
                        }
                    }
                }
            }
        }
        out
    }

    fn assemble(&self, n: &IntMatrix, row: [&BigInt; 3], col: [&BigInt; 3]) -> Option<[IntMatrix; 4]> {
        let mut v = IntMatrix::identity(3);
        *v.at_mut(0, 1) = row[0].clone();
        *v.at_mut(0, 2) = row[1].clone();
        *v.at_mut(1, 2) = row[2].clone();
        let mut w = IntMatrix::identity(3);
        *w.at_mut(1, 0) = col[0].clone();
        *w.at_mut(2, 0) = col[1].clone();
        *w.at_mut(2, 1) = col[2].clone();
        let p = &(&v * n) * &w;
        let (l1, u2) = lu_split(&p)?;
        let u1 = v.inverse().ok()?;
        let l2 = w.inverse().ok()?;
        Some([u1, l1, u2, l2])
    }

    /// `g` as exactly `len` alternating factors starting with `start`
    /// (identity factors allowed).
    fn solve(&mut self, g: &IntMatrix, len: usize, start: FactorClass) -> Option<Vec<IntMatrix>> {
        if self.exhausted() {
            return None;
        }
        if start == FactorClass::L {
            let mut fs = self.solve(&reverse(g), len, FactorClass::U)?;
            fs.iter_mut().for_each(|f| *f = reverse(f));
            return Some(fs);
        }
        let q = CongruenceLevel::new(self.q.clone()).expect("positive level");
        match len {
            0 => g.is_identity().then(Vec::new),
            1 => in_upper(g, &q).then(|| vec![g.clone()]),
            2 => ul_split(g).map(|(u, l)| vec![u, l]),
            3 => {
                // u l u' reversed is l u l', i.e. a product with trivial first factor
                let [_, l1, u2, l2] = self.solve_ulul(&reverse(g), true)?;
                Some(vec![reverse(&l1), reverse(&u2), reverse(&l2)])
            }
            4 => self.solve_ulul(g, false).map(|s| s.to_vec()),
            _ => {
                let last_upper = len % 2 == 1;
                for x in self.peel_candidates(g, last_upper) {
                    let rest = g * &x.inverse().ok()?;
                    if let Some(mut fs) = self.solve(&rest, len - 1, start) {
                        fs.push(x);
                        return Some(fs);
                    }
                    if self.exhausted() {
                        return None;
                    }
                }
                None
            }
        }
    }

    /// Right factors `x` (upper if `upper`, else lower) that shrink `g x^{-1}`.
    fn peel_candidates(&self, g: &IntMatrix, upper: bool) -> Vec<IntMatrix> {
        if !upper {
            return self
                .peel_candidates(&reverse(g), true)
                .iter()
                .map(reverse)
                .collect();
        }
        let q = self.q;
        let col = |m: &IntMatrix, c: usize| -> Vec<BigInt> { (0..3).map(|r| m.at(r, c).clone()).collect() };
        let dot = |x: &[BigInt], y: &[BigInt]| -> BigInt { x.iter().zip(y).map(|(a, b)| a * b).sum() };
        let c1 = col(g, 0);
        let c2 = col(g, 1);
        let c3 = col(g, 2);
        let n11 = dot(&c1, &c1);
        let near = |num: BigInt, den: &BigInt| -> BigInt {
            if den.is_zero() {
                BigInt::zero()
            } else {
                round_div(&num, &(den * q))
            }
        };
        // x^{-1} = I + a E12 + b E13 + c E23, multipliers in units of q
        let a0 = near(-dot(&c2, &c1), &n11);
        let n12 = dot(&c1, &c2);
        let n22 = dot(&c2, &c2);
        let det = &n11 * &n22 - &n12 * &n12;
        let (b0, c0) = if det.is_zero() {
            (near(-dot(&c3, &c1), &n11), BigInt::zero())
        } else {
            let r1 = -dot(&c3, &c1);
            let r2 = -dot(&c3, &c2);
            (near(&r1 * &n22 - &r2 * &n12, &det), near(&r2 * &n11 - &r1 * &n12, &det))
        };
        let mut cands: Vec<(BigInt, IntMatrix)> = Vec::new();
        for da in -1..=1i64 {
            for db in -1..=1i64 {
                for dc in -1..=1i64 {
                    let mut xi = IntMatrix::identity(3);
                    *xi.at_mut(0, 1) = q * (&a0 + da);
                    *xi.at_mut(0, 2) = q * (&b0 + db);
                    *xi.at_mut(1, 2) = q * (&c0 + dc);
                    if xi.is_identity() {
                        continue;
                    }
                    let h = g * &xi;
                    let norm: BigInt = h.entries().iter().map(|x| x * x).sum();
                    cands.push((norm, xi));
                }
            }
        }
        cands.sort_by(|x, y| x.0.cmp(&y.0));
        cands
            .into_iter()
            .take(self.lim.beam)
            .filter_map(|(_, xi)| xi.inverse().ok())
            .collect()
    }
}

fn check_input(g: &IntMatrix, q: &CongruenceLevel) -> Result<()> {
    if g.n() != 3 {
        return Err(Error::Precondition(format!("expected a 3x3 block, got {}x{}", g.n(), g.n())));
    }
    if !g.det().is_one() || !in_congruence(g, q) {
        return Err(Error::Precondition(format!("block is not in SL_3(Z; {q})")));
    }
    Ok(())
}

/// Best-effort search for `g = l_0 (u_1 l_1) ... (u_k l_k) u_{k+1}` with
/// `k <= max_pairs`, factors at level `q`. Returns `2k + 2` factors in order,
/// starting with a lower factor; some may be the identity.
pub fn framed_factor3(
    g: &IntMatrix,
    q: &CongruenceLevel,
    max_pairs: usize,
    limits: SearchLimits,
) -> Result<std::result::Result<Vec<IntMatrix>, AlternatingFailure>> {
    check_input(g, q)?;
    let mut s = Searcher {
        q: q.value(),
        lim: limits,
        spent: 0,
    };
    for k in 0..=max_pairs {
        if let Some(fs) = s.solve(g, 2 * k + 2, FactorClass::L) {
            return Ok(Ok(fs));
        }
        if s.exhausted() {
            break;
        }
    }
    Ok(Err(AlternatingFailure {
        residual: g.clone(),
        max_len: 2 * max_pairs + 2,
        evaluations: s.spent,
    }))
}

/// Drops identity factors and merges neighbours of equal class.
fn compress(factors: Vec<(FactorClass, IntMatrix)>) -> Vec<(FactorClass, IntMatrix)> {
    let mut out: Vec<(FactorClass, IntMatrix)> = Vec::new();
    for (c, m) in factors {
        if m.is_identity() {
            continue;
        }
        match out.last_mut() {
            Some((lc, lm)) if *lc == c => {
                *lm = &*lm * &m;
                if lm.is_identity() {
                    out.pop();
                }
            }
            _ => out.push((c, m)),
        }
    }
    out
}

/// Alternating `U`/`L` factorization of a 3x3 block with at most `max_len`
/// nontrivial factors; exhaustion is a soft failure.
pub fn alternating_factor3(g: &IntMatrix, q: &CongruenceLevel, max_len: usize) -> Result<AlternatingOutcome> {
    alternating_factor3_with(g, q, max_len, SearchLimits::default())
}

pub fn alternating_factor3_with(
    g: &IntMatrix,
    q: &CongruenceLevel,
    max_len: usize,
    limits: SearchLimits,
) -> Result<AlternatingOutcome> {
    check_input(g, q)?;
    let mut s = Searcher {
        q: q.value(),
        lim: limits,
        spent: 0,
    };
    for len in 0..=max_len {
        for start in [FactorClass::U, FactorClass::L] {
            if let Some(fs) = s.solve(g, len, start) {
                let other = if start == FactorClass::U { FactorClass::L } else { FactorClass::U };
                let classed = fs
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| (if i % 2 == 0 { start } else { other }, m))
                    .collect();
                let factors = compress(classed);
                debug_assert!(factors.iter().all(|(c, m)| match c {
                    FactorClass::U => in_upper(m, q),
                    _ => in_lower(m, q),
                }));
                return Ok(AlternatingOutcome::Found(AlternatingFactorization { factors }));
            }
            if s.exhausted() {
                break;
            }
        }
    }
    Ok(AlternatingOutcome::Exhausted(AlternatingFailure {
        residual: g.clone(),
        max_len,
        evaluations: s.spent,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::elementary;

    fn q(x: i64) -> CongruenceLevel {
        CongruenceLevel::new(x).unwrap()
    }

    fn found(o: AlternatingOutcome) -> AlternatingFactorization {
        match o {
            AlternatingOutcome::Found(f) => f,
            AlternatingOutcome::Exhausted(e) => panic!("search failed on {} after {}", e.residual, e.evaluations),
        }
    }

    #[test]
    fn splits() {
        let l = elementary(3, 2, 1, 4).unwrap();
        let u = &elementary(3, 1, 3, 2).unwrap() * &elementary(3, 2, 3, 6).unwrap();
        let p = &l * &u;
        assert_eq!(lu_split(&p), Some((l.clone(), u.clone())));
        assert_eq!(ul_split(&(&u * &l)), Some((u.clone(), l.clone())));
        assert_eq!(reverse(&reverse(&p)), p);
        let bad = &elementary(3, 1, 3, 2).unwrap() * &elementary(3, 3, 1, 4).unwrap();
        assert!(lu_split(&bad).is_none());
    }

    #[test]
    fn short_examples() {
        let g = elementary(3, 1, 2, 2).unwrap();
        let f = found(alternating_factor3(&g, &q(2), 4).unwrap());
        assert_eq!(f.len(), 1);
        assert_eq!(f.factors[0].0, FactorClass::U);

        let g = &elementary(3, 1, 2, 2).unwrap() * &elementary(3, 2, 1, 2).unwrap();
        let f = found(alternating_factor3(&g, &q(2), 4).unwrap());
        assert_eq!(f.len(), 2);
        assert_eq!(f.product(), g);
    }

    #[test]
    fn cube_example() {
        let x = &elementary(3, 1, 2, 2).unwrap() * &elementary(3, 2, 1, 2).unwrap();
        let g = &(&x * &x) * &x;
        let f = found(alternating_factor3(&g, &q(2), 16).unwrap());
        assert_eq!(f.product(), g);
        assert!(f.len() <= 6, "length {}", f.len());
    }

    #[test]
    fn framed() {
        let x = &elementary(3, 1, 2, 3).unwrap() * &elementary(3, 3, 2, 3).unwrap();
        let g = &(&x * &elementary(3, 2, 1, -3).unwrap()) * &x;
        let fs = framed_factor3(&g, &q(3), 2, SearchLimits::default()).unwrap().unwrap();
        assert_eq!(fs.len() % 2, 0);
        let p = fs.iter().fold(IntMatrix::identity(3), |acc, f| &acc * f);
        assert_eq!(p, g);
        for (i, f) in fs.iter().enumerate() {
            if i % 2 == 0 {
                assert!(in_lower(f, &q(3)));
            } else {
                assert!(in_upper(f, &q(3)));
            }
        }
    }
}

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::solve::checked_pow;
use crate::error::{Error, Result};
use crate::finite::cover::sl_basis;
use crate::finite::linalg::rank;
use crate::finite::{closure_exponent, diff_rank, enumerate_group, generates, is_prime, FiniteGroupTable, SymSet};
use crate::matrix::{pow_mod, ModMatrix};

/// `(p, K)` with `m = p^K`.
fn prime_power(m: u64) -> Result<(u64, u32)> {
    let p = (2..=m).find(|d| m % d == 0).ok_or(Error::InvalidModulus(m))?;
    let (mut r, mut k) = (m, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 || !is_prime(p) {
        return Err(Error::Precondition(format!("modulus {m} is not a prime power")));
    }
    Ok((p, k))
}

/// Least `i` such that some element of `X` is not scalar mod `p^{i+1}`;
/// `None` when every element is scalar at the table's precision.
pub fn level_k(x: &SymSet) -> Result<Option<u32>> {
    let table = x.table();
    let (p, precision) = prime_power(table.modulus())?;
    let mut best: Option<u32> = None;
    for g in x.iter() {
        let m = table.element(g);
        for i in 0..precision {
            if best.is_some_and(|b| i >= b) {
                break;
            }
            let q = checked_pow(p, i + 1).unwrap();
            if m.reduce_to(q)?.scalar_value().is_none() {
                best = Some(i);
                break;
            }
        }
    }
    Ok(best)
}

/// `#{λ mod p^k : λ^n = 1}`.
pub fn roots_of_unity(n: usize, p: u64, k: u32) -> usize {
    let q = checked_pow(p, k).expect("small modulus");
    if q == 1 {
        return 1;
    }
    (1..q).filter(|&l| l % p != 0 && pow_mod(l, n as u64, q) == 1).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundCase {
    /// `X ⊆ {I}`.
    Trivial,
    /// `X` is the whole group.
    Whole,
    /// Every element of `X` is scalar; bounded by the number of scalars.
    Central { scalars: usize },
    /// `k = 0`: `c1` is the closure exponent of `X mod p` in `SL_n(F_p)`.
    Reduction { c1: usize },
    /// `k > 0`: `c_prime` conjugates of `±A` sum to any element of `sl_n(F_p)`,
    /// each conjugate costing `z` elements of `X`.
    Congruence { k: u32, z: usize, c_prime: usize, top: bool },
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundCase::Trivial => f.write_str("trivial"),
            BoundCase::Whole => f.write_str("whole group"),
            BoundCase::Central { scalars } => write!(f, "central ({scalars} scalars)"),
            BoundCase::Reduction { c1 } => write!(f, "case 1 (k=0, C1={c1}, bound 3*C1)"),
            BoundCase::Congruence { k, z, c_prime, top: true } => {
                write!(f, "case 2 (k={k}, z={z}, C'={c_prime}, bound z*C'+z-1)")
            }
            BoundCase::Congruence { k, z, c_prime, top: false } => {
                write!(f, "case 2 (k={k}, z={z}, C'={c_prime}, bound 5*z*C'+z-1)")
            }
        }
    }
}

/// Upper bound on the closure exponent of `X`, optionally with the BFS value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicBound {
    pub bound: usize,
    pub level: Option<u32>,
    pub case: BoundCase,
    pub oracle: Option<usize>,
}

impl PadicBound {
    /// `Some(bound >= oracle)` when the oracle ran.
    pub fn verified(&self) -> Option<bool> {
        self.oracle.map(|o| self.bound >= o)
    }
}

fn reduce_set(x: &SymSet, small: &Arc<FiniteGroupTable>) -> Result<SymSet> {
    let p = small.modulus();
    let mut out = SymSet::empty(small);
    for g in x.iter() {
        let r = x.table().element(g).reduce_to(p)?;
        out.insert(small.index_of(&r).ok_or_else(|| Error::Internal("reduction outside SL_n(F_p)".into()))?);
    }
    Ok(out)
}

/// A pair generating `SL_n(F_p)` with full-rank differential, if one turns up.
fn generating_pair(small: &Arc<FiniteGroupTable>) -> Result<Option<(ModMatrix, ModMatrix)>> {
    let n = small.n();
    let len = small.len() as u64;
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for _ in 0..200 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = small.element(((state >> 33) % len) as u32);
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let b = small.element(((state >> 33) % len) as u32);
        if diff_rank(&a, &b)? == n * n - 1 && generates(&a, &b, small)? {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

fn bracket(x: &ModMatrix, y: &ModMatrix) -> Result<ModMatrix> {
    Ok(x.mul(y)?.sub(&y.mul(x)?))
}

/// Rank of `(X, Y) -> [X, J] + [Y, J^T]` on `sl_n(F_p)^2` for the nilpotent Jordan block `J`.
pub fn jordan_bracket_rank(n: usize, p: u64) -> Result<usize> {
    let mut data = vec![0u64; n * n];
    for i in 0..n - 1 {
        data[i * n + i + 1] = 1;
    }
    let j = ModMatrix::from_residues(n, p, data);
    let jt = j.transpose();
    let mut rows = Vec::new();
    for e in sl_basis(n, p) {
        rows.push(bracket(&e, &j)?.residues().to_vec());
        rows.push(bracket(&e, &jt)?.residues().to_vec());
    }
    Ok(rank(&rows, p))
}

/// Least `c` such that sums of at most `c` elements of `steps` give all of `sl_n(F_p)`.
fn additive_depth(steps: &[Vec<u64>], n: usize, p: u64) -> Result<usize> {
    let target = checked_pow(p, (n * n - 1) as u32).ok_or(Error::InvalidModulus(p))? as usize;
    let zero = vec![0u64; n * n];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    let mut depth = 0;
    while seen.len() < target {
        let mut next = Vec::new();
        for v in &frontier {
            for s in steps {
                let w: Vec<u64> = v.iter().zip(s).map(|(a, b)| (a + b) % p).collect();
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::Precondition(format!(
                "sums of conjugates reach only {} of {target} elements of sl_n(F_{p})",
                seen.len()
            )));
        }
        depth += 1;
        frontier = next;
    }
    Ok(depth)
}

/// Constructive bound on the closure exponent of a symmetric,
/// conjugation-invariant `X ⊆ SL_n(Z/p^K)`, `n >= 3`, checked against BFS.
pub fn padic_width_bound(x: &SymSet) -> Result<PadicBound> {
    padic_width_bound_with(x, true)
}

pub fn padic_width_bound_with(x: &SymSet, oracle: bool) -> Result<PadicBound> {
    let table = x.table();
    let n = table.n();
    let (p, precision) = prime_power(table.modulus())?;
    if n < 3 {
        return Err(Error::Precondition("padic_width_bound needs n >= 3".into()));
    }
    if x.is_empty() || !x.is_symmetric() || !x.is_conjugation_invariant() {
        return Err(Error::Precondition("X must be non-empty, symmetric and conjugation invariant".into()));
    }
    let level = level_k(x)?;
    let oracle = oracle.then(|| closure_exponent(x));
    let done = |bound, case| Ok(PadicBound { bound, level, case, oracle });
    if x.iter().all(|g| g == table.identity()) {
        return done(0, BoundCase::Trivial);
    }
    if x.len() == table.len() {
        return done(1, BoundCase::Whole);
    }
    let Some(k) = level else {
        let scalars = roots_of_unity(n, p, precision);
        return done(scalars - 1, BoundCase::Central { scalars });
    };
    let small = Arc::new(enumerate_group(n, p)?);
    if k == 0 {
        let xbar = reduce_set(x, &small)?;
        let c1 = closure_exponent(&xbar);
        if crate::finite::closure(&xbar).len() != small.len() {
            return Err(Error::Precondition("reduction of X does not generate SL_n(F_p)".into()));
        }
        if generating_pair(&small)?.is_none() {
            return Err(Error::RankDeficient { rank: 0, needed: n * n - 1 });
        }
        return done(3 * c1, BoundCase::Reduction { c1 });
    }

    // k > 0: build g' = g^{z-1} h^{-1} g h in SL(p^k), not scalar mod p^{k+1}
    let z = roots_of_unity(n, p, k);
    let pk = checked_pow(p, k).unwrap();
    let q1 = pk * p;
    let id = ModMatrix::identity(n, q1);
    let mut a_bar = None;
    'search: for g in x.iter() {
        let gm = table.element(g).reduce_to(q1)?;
        if gm.scalar_value().is_some() {
            continue;
        }
        let mut gz = id.clone();
        for _ in 0..z - 1 {
            gz = gz.mul(&gm)?;
        }
        for h in 0..table.len().min(4096) as u32 {
            let hm = table.element(h).reduce_to(q1)?;
            let gp = gz.mul(&gm.conjugate_by(&hm)?)?;
            let d = gp.sub(&id);
            if d.residues().iter().any(|&e| e % pk != 0) {
                continue;
            }
            let a: Vec<u64> = d.residues().iter().map(|&e| (e / pk) % p).collect();
            let am = ModMatrix::from_residues(n, p, a);
            if am.scalar_value().is_none() {
                a_bar = Some(am);
                break 'search;
            }
        }
    }
    let a_bar = a_bar.ok_or_else(|| Error::Internal("no non-scalar commutator image found".into()))?;
    let mut class: HashSet<Vec<u64>> = HashSet::new();
    let neg = a_bar.scale(p - 1);
    for h in 0..small.len() as u32 {
        let hm = small.element(h);
        for m in [&a_bar, &neg] {
            class.insert(m.conjugate_by(&hm)?.residues().to_vec());
        }
    }
    let mut steps: Vec<Vec<u64>> = class.into_iter().collect();
    steps.sort();
    let c_prime = additive_depth(&steps, n, p)?;
    let c = z * c_prime;
    let top = k + 1 >= precision;
    if !top {
        let r = jordan_bracket_rank(n, p)?;
        if r < n * n - 1 {
            return Err(Error::RankDeficient { rank: r, needed: n * n - 1 });
        }
    }
    let bound = if top { c + z - 1 } else { 5 * c + z - 1 };
    done(bound, BoundCase::Congruence { k, z, c_prime, top })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_and_roots() {
        let g = Arc::new(enumerate_group(3, 4).unwrap());
        let e = |x: i64| ModMatrix::from_signed(3, 4, &[1, x, 0, 0, 1, 0, 0, 0, 1]);
        let x1 = SymSet::from_matrices(&g, &[e(1), e(-1)]).unwrap();
        assert_eq!(level_k(&x1).unwrap(), Some(0));
        let x2 = SymSet::from_matrices(&g, &[e(2)]).unwrap();
        assert_eq!(level_k(&x2).unwrap(), Some(1));
        assert_eq!(level_k(&SymSet::identity(&g)).unwrap(), None);
        assert_eq!(roots_of_unity(3, 2, 2), 1);
        assert_eq!(roots_of_unity(2, 2, 3), 4);
        assert_eq!(roots_of_unity(3, 7, 1), 3);
        assert_eq!(jordan_bracket_rank(3, 2).unwrap(), 8);
        assert_eq!(jordan_bracket_rank(3, 3).unwrap(), 8);
    }

    #[test]
    fn trivial_cases() {
        let g = Arc::new(enumerate_group(3, 2).unwrap());
        assert_eq!(padic_width_bound(&SymSet::whole(&g)).unwrap().bound, 1);
        assert_eq!(padic_width_bound(&SymSet::identity(&g)).unwrap().bound, 0);
        let e = ModMatrix::from_signed(3, 2, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        let x = SymSet::from_matrices(&g, &[e]).unwrap().conjugation_closure();
        let b = padic_width_bound(&x).unwrap();
        assert!(matches!(b.case, BoundCase::Reduction { .. }));
        assert_eq!(b.verified(), Some(true));
    }
}

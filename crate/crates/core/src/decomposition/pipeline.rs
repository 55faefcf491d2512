use crate::error::{Error, Result};
use crate::matrix::{CongruenceLevel, IntMatrix};

use super::alternating::{framed_factor3, AlternatingFailure, SearchLimits};
use super::blocks::{corner_factor_at, Corner};
use super::certificate::{ClassifiedFactor, FactorCertificate};
use super::peel::factor_e_beam;

/// Result of [`factor_lu3u`]: a verified certificate, or the corner block the
/// alternating search could not factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lu3uOutcome {
    Certified(FactorCertificate),
    Soft(AlternatingFailure),
}

impl Lu3uOutcome {
    pub fn certificate(&self) -> Option<&FactorCertificate> {
        match self {
            Lu3uOutcome::Certified(c) => Some(c),
            Lu3uOutcome::Soft(_) => None,
        }
    }
}

/// Antidiagonal permutation with a sign fix so that the determinant is 1.
fn flip(n: usize) -> IntMatrix {
    let mut w = IntMatrix::zero(n);
    for i in 0..n {
        *w.at_mut(i, n - 1 - i) = 1.into();
    }
    if (n / 2) % 2 == 1 {
        let x = -w.at(0, n - 1);
        *w.at_mut(0, n - 1) = x;
    }
    w
}

/// `l` as `h k h^{-1}` with `h = prefix * w` and `k` upper unitriangular.
fn lower_as_conjugate(prefix: &IntMatrix, l: &IntMatrix) -> Result<ClassifiedFactor> {
    let n = l.n();
    let w = flip(n);
    let k = w.inverse()?.mul_checked(l)?.mul_checked(&w)?;
    ClassifiedFactor::conjugated(prefix * &w, k)
}

/// Certificate `L,Uc,Uc,Uc,U` for `g` in `E(n, Z; q)`, or a soft failure when
/// the 3x3 corner left by the reduction does not admit a short enough
/// alternating factorization within the search limits.
pub fn factor_lu3u(g: &IntMatrix, q: &CongruenceLevel) -> Result<Lu3uOutcome> {
    factor_lu3u_with(g, q, SearchLimits::default())
}

pub fn factor_lu3u_with(g: &IntMatrix, q: &CongruenceLevel, limits: SearchLimits) -> Result<Lu3uOutcome> {
    let n = g.n();
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    let pairs_allowed = n / 3;
    let candidates = factor_e_beam(g, q, 3, limits.corners)?;
    let per_corner = SearchLimits {
        budget: (limits.budget / candidates.len() as u64).max(1),
        ..limits
    };
    let mut first_failure: Option<AlternatingFailure> = None;
    let mut spent = 0;
    let mut found = None;
    for e in candidates {
        match framed_factor3(&e.corner, q, pairs_allowed, per_corner)? {
            Ok(f) => {
                found = Some((e, f));
                break;
            }
            Err(fail) => {
                spent += fail.evaluations;
                first_failure.get_or_insert(fail);
            }
        }
    }
    let Some((e, framed)) = found else {
        let mut fail = first_failure.expect("at least one corner was tried");
        fail.evaluations = spent;
        return Ok(Lu3uOutcome::Soft(fail));
    };
    let k = framed.len() / 2 - 1;
    let id3 = IntMatrix::identity(3);
    let mut pairs: Vec<(IntMatrix, IntMatrix)> = (0..k)
        .map(|i| (framed[2 * i + 1].clone(), framed[2 * i + 2].clone()))
        .collect();
    pairs.resize(pairs_allowed, (id3.clone(), id3));
    let corner = corner_factor_at(n, &pairs, q, Corner::BottomRight)?;
    let [la, uc, ub, lc] = <[ClassifiedFactor; 4]>::try_from(corner.factors)
        .map_err(|_| Error::Internal("corner certificate has the wrong shape".into()))?;

    let pad = |x: &IntMatrix| x.embed(n, n - 3);
    let l_head = pad(&framed[0]);
    let u_tail = pad(&framed[framed.len() - 1]);
    // g = l1 u1 (l2 l_head la) uc ub lc (u_tail u2)
    let l_mid = &(&e.l2 * &l_head) * &la.matrix;
    let first = ClassifiedFactor::lower(&e.l1 * &l_mid);
    let second = ClassifiedFactor::conjugated(l_mid.inverse()?, e.u1.clone())?;
    let tail = &u_tail * &e.u2;
    let fourth = lower_as_conjugate(&ub.matrix, &lc.matrix)?;
    let fifth = ClassifiedFactor::upper(&ub.matrix * &tail);
    let cert = FactorCertificate::new(g.clone(), q.clone(), vec![first, second, uc, fourth, fifth]);
    let v = cert.verify();
    if !v.passed() {
        let msg = v.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ");
        return Err(Error::Internal(format!("assembled certificate does not verify: {msg}")));
    }
    Ok(Lu3uOutcome::Certified(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::elementary;

    fn q(x: i64) -> CongruenceLevel {
        CongruenceLevel::new(x).unwrap()
    }

    #[test]
    fn flip_has_det_one() {
        for n in 1..8 {
            assert!(num_traits::One::is_one(&flip(n).det()), "n = {n}");
        }
    }

    #[test]
    fn identity_and_small() {
        let out = factor_lu3u(&IntMatrix::identity(6), &q(2)).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.claimed, "L,Uc,Uc,Uc,U");
        assert!(cert.verify().passed());

        let g = &(&elementary(6, 1, 2, 2).unwrap() * &elementary(6, 5, 1, 4).unwrap())
            * &elementary(6, 3, 6, -2).unwrap();
        let out = factor_lu3u(&g, &q(2)).unwrap();
        let cert = out.certificate().expect("short word factors");
        assert!(cert.verify().passed());
    }
}

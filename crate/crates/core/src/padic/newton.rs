use super::poly::{pval, PolyMapDescriptor};
use super::solve::{checked_pow, linear_solve_mod, valuation};
use crate::error::{Error, Result};
use crate::finite::linalg::rank;

/// Outcome of a Newton lift: the final point and every iterate on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonLift {
    pub point: Vec<u64>,
    pub iterates: Vec<Vec<u64>>,
    /// Residual valuation `val_p(f(a_l) - b)` of each iterate, capped at `K`.
    pub valuations: Vec<u32>,
    /// Guaranteed lower bound `k + l + 1` for each iterate.
    pub bounds: Vec<u32>,
    pub p: u64,
    pub precision: u32,
}

impl NewtonLift {
    pub fn modulus(&self) -> u64 {
        checked_pow(self.p, self.precision).expect("checked on construction")
    }
}

fn residual_valuation(f: &PolyMapDescriptor, x: &[u64], b: &[u64], p: u64, precision: u32, q: u64) -> (Vec<u64>, u32) {
    let fx = f.eval_mod(x, q);
    let r: Vec<u64> = b.iter().zip(&fx).map(|(&bi, &fi)| (bi % q + q - fi) % q).collect();
    let v = r.iter().map(|&x| valuation(x, p, precision)).min().unwrap_or(precision);
    (r, v)
}

/// Solves `f(x) ≡ b (mod p^K)` from a start `a` with `f(a) ≡ b (mod p^{k+1})`.
///
/// Requires `val_p(f) ≥ k` and `J(a)/p^k` of full row rank mod `p`. Step `l`
/// writes `ε = p^{l+1} ε'` with `(J/p^k) ε' ≡ r / p^{k+l+1} (mod p)`.
pub fn newton_lift(f: &PolyMapDescriptor, a: &[u64], b: &[u64], p: u64, k: u32, precision: u32) -> Result<NewtonLift> {
    if !crate::finite::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if precision == 0 || k >= precision {
        return Err(Error::Precondition(format!("need k < K, got k={k}, K={precision}")));
    }
    let q = checked_pow(p, precision).ok_or(Error::InvalidModulus(p))?;
    if a.len() != f.source() || b.len() != f.target() {
        return Err(Error::DimensionMismatch { left: f.source(), right: a.len() });
    }
    if pval(f, p).is_some_and(|v| v < k) {
        return Err(Error::Precondition(format!("val_p(f) < {k}")));
    }
    let pk = checked_pow(p, k).unwrap();
    let mut x: Vec<u64> = a.iter().map(|v| v % q).collect();
    let jac = f.jacobian_mod(&x, pk * p);
    let jbar: Vec<Vec<u64>> = jac.iter().map(|r| r.iter().map(|v| v / pk).collect()).collect();
    let needed = f.target();
    let r = rank(&jbar, p);
    if r < needed {
        return Err(Error::RankDeficient { rank: r, needed });
    }
    let (mut res, mut val) = residual_valuation(f, &x, b, p, precision, q);
    if val < k + 1 {
        return Err(Error::Precondition(format!("f(a) - b has valuation {val}, need at least {}", k + 1)));
    }
    let mut out = NewtonLift { point: Vec::new(), iterates: vec![x.clone()], valuations: vec![val], bounds: vec![k + 1], p, precision };
    let mut l = 0;
    while k + l + 1 < precision {
        let scale = checked_pow(p, k + l + 1).unwrap();
        let rhs: Vec<u64> = res.iter().map(|&v| (v / scale) % p).collect();
        let jac = f.jacobian_mod(&x, pk * p);
        let jbar: Vec<Vec<u64>> = jac.iter().map(|r| r.iter().map(|v| v / pk).collect()).collect();
        let eps = linear_solve_mod(&jbar, &rhs, p, 1).ok_or(Error::RankDeficient { rank: rank(&jbar, p), needed })?;
        let step = checked_pow(p, l + 1).unwrap();
        for (xi, e) in x.iter_mut().zip(&eps) {
            *xi = ((*xi as u128 + *e as u128 * step as u128) % q as u128) as u64;
        }
        l += 1;
        (res, val) = residual_valuation(f, &x, b, p, precision, q);
        if val < k + l + 1 {
            return Err(Error::Internal(format!("Newton step {l} left valuation {val}")));
        }
        out.iterates.push(x.clone());
        out.valuations.push(val);
        out.bounds.push(k + l + 1);
    }
    if val < precision {
        return Err(Error::Internal(format!("final residual valuation {val} below {precision}")));
    }
    out.point = x;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_seven() {
        let f = PolyMapDescriptor::parse("x1^2", None).unwrap();
        let lift = newton_lift(&f, &[1], &[7], 3, 0, 5).unwrap();
        assert_eq!(lift.point, vec![175]);
        let xs: Vec<u64> = lift.iterates.iter().map(|v| v[0]).collect();
        assert_eq!(xs, vec![1, 4, 13, 13, 175]);
        assert_eq!(lift.bounds, vec![1, 2, 3, 4, 5]);
        assert_eq!(lift.valuations, vec![1, 2, 4, 4, 5]);
        assert_eq!(175u64 * 175 % 243, 7);
    }

    #[test]
    fn identity_and_squares() {
        let id = PolyMapDescriptor::identity(2);
        let lift = newton_lift(&id, &[1, 2], &[10, 17], 3, 0, 3).unwrap();
        assert_eq!(lift.point, vec![10, 17]);
        let f = PolyMapDescriptor::parse("x1^2", None).unwrap();
        let a = 7u64;
        let lift = newton_lift(&f, &[a], &[a * a], 5, 0, 4).unwrap();
        let x = lift.point[0];
        assert!(x == a || x == 625 - a);
    }

    #[test]
    fn deficient_and_scaled() {
        let f = PolyMapDescriptor::parse("x1^2", None).unwrap();
        assert_eq!(newton_lift(&f, &[0], &[0], 3, 0, 3), Err(Error::RankDeficient { rank: 0, needed: 1 }));
        let g = PolyMapDescriptor::parse("3*x1 + 3*x1^3", None).unwrap();
        // g(1) = 6, aim at 6 + 9 * 2 mod 81
        let lift = newton_lift(&g, &[1], &[24], 3, 1, 4).unwrap();
        assert_eq!(g.eval_mod(&lift.point, 81), vec![24]);
        assert!(newton_lift(&g, &[1], &[24], 3, 2, 4).is_err());
    }
}

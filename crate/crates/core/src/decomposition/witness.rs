use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::matrix::{elementary, IntMatrix};
use crate::words::{sanov_pair, IntGroup, Word};

/// A word value `g` in `SL_2(Z)` embedded in `SL_3(Z)`, a column element `h`
/// with `[g, h] != I`, and `c` with `c [g, h] c^-1 = e_{1,3}(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QWitness {
    pub word: Word,
    pub g: IntMatrix,
    pub h: IntMatrix,
    pub commutator: IntMatrix,
    pub q: BigInt,
    pub c: IntMatrix,
}

impl QWitness {
    /// The level `q^2` reached by the construction.
    pub fn d(&self) -> BigInt {
        &self.q * &self.q
    }

    /// Re-derives every identity the witness claims.
    pub fn verify(&self) -> Result<bool> {
        let gi = self.g.inverse()?;
        let hi = self.h.inverse()?;
        let comm = &(&(&gi * &hi) * &self.g) * &self.h;
        let target = elementary(3, 1, 3, self.q.clone())?;
        let conj = &(&self.c * &comm) * &self.c.inverse()?;
        let divides = [comm.at(0, 2), comm.at(1, 2)].iter().all(|x| x.is_multiple_of(&self.q));
        Ok(comm == self.commutator
            && !comm.is_identity()
            && self.q.is_positive()
            && divides
            && conj == target
            && self.c.det() == BigInt::from(1))
    }
}

/// Free generators for `w`: Sanov's pair, or `A^{k-1} B A^{1-k}` when more
/// than two letters are needed.
pub(crate) fn free_tuple(arity: usize) -> Vec<IntMatrix> {
    let (a, b) = sanov_pair();
    if arity <= 2 {
        return vec![a, b];
    }
    let ai = a.inverse().expect("unimodular");
    let mut out = Vec::with_capacity(arity);
    let mut left = IntMatrix::identity(2);
    let mut right = IntMatrix::identity(2);
    for _ in 0..arity {
        out.push(&(&left * &b) * &right);
        left = &left * &a;
        right = &ai * &right;
    }
    out
}

/// The witness for a non-trivial word.
pub fn q_witness(w: &Word) -> Result<QWitness> {
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let m = w.evaluate(&IntGroup { n: 2 }, &free_tuple(w.arity()))?;
    if m.is_identity() || m.neg().is_identity() {
        return Err(Error::Internal(format!("free generators gave the value {m}")));
    }
    let g = m.embed(3, 0);
    let gi = g.inverse()?;
    for h in [elementary(3, 1, 3, 1)?, elementary(3, 2, 3, 1)?] {
        let comm = &(&(&gi * &h.inverse()?) * &g) * &h;
        if comm.is_identity() {
            continue;
        }
        let (u, v) = (comm.at(0, 2).clone(), comm.at(1, 2).clone());
        let e = u.extended_gcd(&v);
        let (mut q, mut s, mut t) = (e.gcd, e.x, e.y);
        if q.is_negative() {
            q = -q;
            s = -s;
            t = -t;
        }
        // A (u, v) = (q, 0) with A = [[s, t], [-v/q, u/q]]
        let mut c = IntMatrix::identity(3);
        *c.at_mut(0, 0) = s;
        *c.at_mut(0, 1) = t;
        *c.at_mut(1, 0) = -(&v / &q);
        *c.at_mut(1, 1) = &u / &q;
        let out = QWitness {
            word: w.clone(),
            g,
            h,
            commutator: comm,
            q,
            c,
        };
        if !out.verify()? {
            return Err(Error::Internal("witness does not verify".into()));
        }
        return Ok(out);
    }
    Err(Error::Internal("g commutes with the column group".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn witnesses() {
        let x = q_witness(&parse_word("x1").unwrap()).unwrap();
        assert_eq!(x.g, elementary(3, 1, 2, 2).unwrap());
        assert_eq!(x.h, elementary(3, 2, 3, 1).unwrap());
        assert_eq!(x.commutator, elementary(3, 1, 3, 2).unwrap());
        assert_eq!(x.q, BigInt::from(2));
        assert_eq!(x.d(), BigInt::from(4));

        let x = q_witness(&parse_word("x1^2").unwrap()).unwrap();
        assert_eq!(x.g, elementary(3, 1, 2, 4).unwrap());
        assert_eq!(x.q, BigInt::from(4));

        let x = q_witness(&parse_word("[x1,x2]").unwrap()).unwrap();
        assert!(x.verify().unwrap());
        assert!(!x.commutator.is_identity());

        let x = q_witness(&parse_word("x1 x2 x3 x1^-1").unwrap()).unwrap();
        assert!(x.verify().unwrap());
        assert!(matches!(q_witness(&Word::empty()), Err(Error::TrivialWord)));
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial in a fixed number of variables, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    /// The variable `x_i`, 0-based.
    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: impl Into<BigInt>) -> Poly {
        let mut p = Poly::zero(exponents.len());
        p.add_term(exponents, c.into());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: acc }
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * BigInt::from(e[i]));
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Value modulo `m` at a point given by residues.
    pub fn eval_mod(&self, point: &[u64], m: u64) -> u64 {
        let mb = BigInt::from(m);
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let mut t = c.mod_floor(&mb).to_u64().expect("residue") as u128;
            for (&k, &x) in e.iter().zip(point) {
                for _ in 0..k {
                    t = t * x as u128 % m as u128;
                }
            }
            acc = (acc + t) % m as u128;
        }
        acc as u64
    }

    /// Largest `k` with every coefficient divisible by `p^k`; `None` for zero.
    pub fn pval(&self, p: u64) -> Option<u32> {
        let pb = BigInt::from(p);
        self.terms
            .values()
            .map(|c| {
                let mut c = c.abs();
                let mut k = 0;
                while c.is_multiple_of(&pb) {
                    c /= &pb;
                    k += 1;
                }
                k
            })
            .min()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Polynomial map `Z^source -> Z^target`, one polynomial per target coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMapDescriptor {
    source: usize,
    coords: Vec<Poly>,
}

impl PolyMapDescriptor {
    pub fn new(source: usize, coords: Vec<Poly>) -> Result<PolyMapDescriptor> {
        if let Some(bad) = coords.iter().find(|c| c.nvars() != source) {
            return Err(Error::DimensionMismatch { left: source, right: bad.nvars() });
        }
        Ok(PolyMapDescriptor { source, coords })
    }

    /// The identity map on `Z^n`.
    pub fn identity(n: usize) -> PolyMapDescriptor {
        PolyMapDescriptor { source: n, coords: (0..n).map(|i| Poly::var(n, i)).collect() }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn eval(&self, point: &[BigInt]) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.eval(point)).collect()
    }

    pub fn eval_mod(&self, point: &[u64], m: u64) -> Vec<u64> {
        self.coords.iter().map(|c| c.eval_mod(point, m)).collect()
    }

    /// Jacobian rows (one per target coordinate) modulo `m`.
    pub fn jacobian_mod(&self, point: &[u64], m: u64) -> Vec<Vec<u64>> {
        self.coords
            .iter()
            .map(|c| (0..self.source).map(|i| c.derivative(i).eval_mod(point, m)).collect())
            .collect()
    }

    /// Parses `;`-separated components such as `"3*x1^2*x2 - 5*x2 + 7; x1"`.
    ///
    /// The source arity is the largest variable index, or `source` when given.
    pub fn parse(text: &str, source: Option<usize>) -> Result<PolyMapDescriptor> {
        let comps: Vec<Vec<(BigInt, Vec<(usize, u32)>)>> =
            text.split(';').map(parse_component).collect::<Result<_>>()?;
        let used = comps.iter().flatten().flat_map(|(_, vs)| vs.iter().map(|(i, _)| *i)).max().unwrap_or(0);
        let nvars = source.unwrap_or(used).max(used);
        let coords = comps
            .into_iter()
            .map(|terms| {
                let mut p = Poly::zero(nvars);
                for (c, vs) in terms {
                    let mut e = vec![0; nvars];
                    for (i, k) in vs {
                        e[i - 1] += k;
                    }
                    p.add_term(e, c);
                }
                p
            })
            .collect();
        PolyMapDescriptor::new(nvars, coords)
    }
}

impl fmt::Display for PolyMapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_component(text: &str) -> Result<Vec<(BigInt, Vec<(usize, u32)>)>> {
    let err = |msg: String| Error::Precondition(format!("polynomial {text:?}: {msg}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty component".into()));
    }
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        rest = tail;
        if term.is_empty() {
            return Err(err("dangling sign".into()));
        }
        let mut coeff = BigInt::from(sign);
        let mut vars = Vec::new();
        for factor in term.split('*') {
            if let Some(v) = factor.strip_prefix('x') {
                let (idx, pow) = v.split_once('^').unwrap_or((v, "1"));
                let i: usize = idx.parse().map_err(|_| err(format!("bad variable {factor:?}")))?;
                let k: u32 = pow.parse().map_err(|_| err(format!("bad exponent {factor:?}")))?;
                if i == 0 {
                    return Err(err("variables are 1-based".into()));
                }
                vars.push((i, k));
            } else {
                let c: BigInt = factor.parse().map_err(|_| err(format!("bad factor {factor:?}")))?;
                coeff *= c;
            }
        }
        terms.push((coeff, vars));
    }
    Ok(terms)
}

/// Minimum over coordinates of the largest `k` with the coordinate in `p^k Z[x]`;
/// `None` when the map is zero.
pub fn pval(f: &PolyMapDescriptor, p: u64) -> Option<u32> {
    f.coords.iter().filter_map(|c| c.pval(p)).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let f = PolyMapDescriptor::parse("9*x1 + 3*x1*x2^2", None).unwrap();
        assert_eq!(pval(&f, 3), Some(1));
        assert_eq!(pval(&PolyMapDescriptor::parse("x1 + x2", None).unwrap(), 5), Some(0));
        assert_eq!(pval(&PolyMapDescriptor::parse("25*x1; 5*x2", None).unwrap(), 5), Some(1));
        assert_eq!(pval(&PolyMapDescriptor::parse("0", Some(1)).unwrap(), 5), None);
    }

    #[test]
    fn parse_eval_and_derivatives() {
        let f = PolyMapDescriptor::parse("3*x1^2*x2 - 5*x2 + 7; x1", None).unwrap();
        assert_eq!((f.source(), f.target()), (2, 2));
        let v = f.eval(&[BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(v, vec![BigInt::from(-12 + 5 + 7), BigInt::from(2)]);
        assert_eq!(f.eval_mod(&[2, 10], 11), vec![0, 2]);
        assert_eq!(f.jacobian_mod(&[2, 1], 100), vec![vec![12, 7], vec![1, 0]]);
        assert_eq!(f.to_string(), "7 - 5*x2 + 3*x1^2*x2; x1");
        let g = PolyMapDescriptor::parse(&f.to_string(), None).unwrap();
        assert_eq!(g, f);
        assert!(PolyMapDescriptor::parse("x0", None).is_err());
        assert!(PolyMapDescriptor::parse("2*y", None).is_err());
        let x = Poly::var(1, 0);
        assert_eq!(x.mul(&x).sub(&Poly::constant(1, 7)).degree(), 2);
    }
}

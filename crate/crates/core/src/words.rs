//! Free-group words and word maps.
//!
//! Commutators follow `[g, h] = g^-1 h^-1 g h` everywhere in the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ModMatrix};

/// One letter `x_i^{±1}`; `generator` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator >= 1, "generators are 1-based");
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word {
            letters: vec![Letter::new(i, false)],
        }
    }

    /// Reduces `letters` freely.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// Substitutes `tuple` into the word; the empty word gives the identity.
    pub fn evaluate<G: Group>(&self, group: &G, tuple: &[G::Elem]) -> Result<G::Elem> {
        let needed = self.arity();
        if tuple.len() < needed {
            return Err(Error::TupleTooShort {
                needed,
                got: tuple.len(),
            });
        }
        let inverses: Vec<Option<G::Elem>> = (0..needed)
            .map(|i| {
                self.letters
                    .iter()
                    .any(|l| l.generator == i + 1 && l.inverse)
                    .then(|| group.inv(&tuple[i]))
            })
            .collect();
        let mut acc = group.identity();
        for l in &self.letters {
            let x = if l.inverse {
                inverses[l.generator - 1].as_ref().expect("inverse precomputed")
            } else {
                &tuple[l.generator - 1]
            };
            acc = group.mul(&acc, x);
        }
        Ok(acc)
    }
}

/// Trivial in the free group, i.e. empty after free reduction.
pub fn is_trivial_on_free(w: &Word) -> bool {
    w.is_empty()
}

pub fn parse_word(text: &str) -> Result<Word> {
    text.parse()
}

pub fn evaluate<G: Group>(w: &Word, group: &G, tuple: &[G::Elem]) -> Result<G::Elem> {
    w.evaluate(group, tuple)
}

impl fmt::Display for Word {
    /// Canonical serialization: the reduced letter sequence, e.g. `x1^-1 x2^-1 x1 x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", l.generator)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let w = p.sequence()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let found = self
            .src
            .get(self.pos)
            .map(|&c| format!(" {:?}", c as char))
            .unwrap_or_else(|| " end of input".into());
        Error::WordParse {
            offset: self.pos,
            message: format!("{message}, found{found}"),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        while let Some(c) = self.peek() {
            if c == b'x' || c == b'X' || c == b'[' || c == b'(' || c == b'1' {
                let t = self.term()?;
                w = w.concat(&t);
            } else {
                break;
            }
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer exponent")
        })
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') | Some(b'X') => {
                self.pos += 1;
                match self.src.get(self.pos) {
                    Some(&d) if (b'1'..=b'9').contains(&d) => {
                        self.pos += 1;
                        if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                            return Err(self.error("generator index must be 1..9"));
                        }
                        Ok(Word::generator((d - b'0') as usize))
                    }
                    _ => Err(self.error("expected generator digit 1..9")),
                }
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.sequence()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.sequence()?;
                self.expect(b',')?;
                let v = self.sequence()?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            _ => Err(self.error("expected a letter, '[' or '('")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", c as char)))
        }
    }
}

/// Minimal group interface used by word evaluation.
pub trait Group {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// `SL_n(Z)` (or `GL_n(Z)` elements of determinant ±1).
#[derive(Debug, Clone, Copy)]
pub struct IntGroup {
    pub n: usize,
}

impl Group for IntGroup {
    type Elem = IntMatrix;

    fn identity(&self) -> IntMatrix {
        IntMatrix::identity(self.n)
    }

    fn mul(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        a * b
    }

    fn inv(&self, a: &IntMatrix) -> IntMatrix {
        a.inverse().expect("group elements are unimodular")
    }
}

/// Invertible `n x n` matrices over `Z/m`.
#[derive(Debug, Clone, Copy)]
pub struct ModGroup {
    pub n: usize,
    pub m: u64,
}

impl Group for ModGroup {
    type Elem = ModMatrix;

    fn identity(&self) -> ModMatrix {
        ModMatrix::identity(self.n, self.m)
    }

    fn mul(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        a.mul(b).expect("same group")
    }

    fn inv(&self, a: &ModMatrix) -> ModMatrix {
        a.inverse().expect("group elements are invertible")
    }
}

/// Sanov's pair `[[1,2],[0,1]]`, `[[1,0],[2,1]]`, a basis of a free subgroup of `SL_2(Z)`.
pub fn sanov_pair() -> (IntMatrix, IntMatrix) {
    (
        IntMatrix::from_i64_rows([[1, 2], [0, 1]]),
        IntMatrix::from_i64_rows([[1, 0], [2, 1]]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::elementary;

    fn l(g: usize, inv: bool) -> Letter {
        Letter::new(g, inv)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_word("x1^2").unwrap().letters(),
            &[l(1, false), l(1, false)]
        );
        let c = parse_word("[x1,x2]").unwrap();
        assert_eq!(c.letters(), &[l(1, true), l(2, true), l(1, false), l(2, false)]);
        assert_eq!(c.to_string(), "x1^-1 x2^-1 x1 x2");
        assert!(parse_word("x1 x1^-1").unwrap().is_empty());
        assert!(parse_word("x1^0").unwrap().is_empty());
        assert_eq!(parse_word("x1x2").unwrap().len(), 2);
        assert_eq!(parse_word("[x1,x2]^-1").unwrap(), c.inverse());
        assert_eq!(parse_word("(x1 x2)^2").unwrap().to_string(), "x1 x2 x1 x2");
        assert_eq!(
            parse_word("[[x1,x2],x3]").unwrap(),
            Word::commutator(&c, &Word::generator(3))
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_word("x1 y2") {
            Err(Error::WordParse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_word("[x1 x2]"), Err(Error::WordParse { offset: 6, .. })));
        assert!(parse_word("x0").is_err());
        assert!(parse_word("x12").is_err());
        assert!(parse_word("x1^").is_err());
    }

    #[test]
    fn triviality() {
        assert!(is_trivial_on_free(&parse_word("x1 x1^-1").unwrap()));
        assert!(!is_trivial_on_free(&parse_word("[x1,x2]").unwrap()));
        assert!(!is_trivial_on_free(&parse_word("x1^3").unwrap()));
        assert!(is_trivial_on_free(&parse_word("[x1,x1]").unwrap()));
    }

    #[test]
    fn evaluate_examples() {
        let g2 = IntGroup { n: 2 };
        let a = elementary(2, 1, 2, 1).unwrap();
        let v = parse_word("x1^2").unwrap().evaluate(&g2, &[a]).unwrap();
        assert_eq!(v, elementary(2, 1, 2, 2).unwrap());

        let g3 = IntGroup { n: 3 };
        let c = parse_word("[x1,x2]").unwrap();
        let g = elementary(3, 2, 1, 9).unwrap();
        assert!(c.evaluate(&g3, &[g, IntMatrix::identity(3)]).unwrap().is_identity());

        // e_12(4)^-1 e_23(1)^-1 e_12(4) e_23(1) = e_13(4)
        let v = c
            .evaluate(&g3, &[elementary(3, 1, 2, 4).unwrap(), elementary(3, 2, 3, 1).unwrap()])
            .unwrap();
        assert_eq!(v, elementary(3, 1, 3, 4).unwrap());

        assert!(matches!(
            c.evaluate(&g3, &[IntMatrix::identity(3)]),
            Err(Error::TupleTooShort { needed: 2, got: 1 })
        ));
        assert!(Word::empty().evaluate(&g3, &[]).unwrap().is_identity());
    }
}

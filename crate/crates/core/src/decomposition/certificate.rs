use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{in_lower, in_upper, mennicke_in_e, product, CongruenceLevel, IntMatrix};

/// Membership class of a certified factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorClass {
    /// Upper unitriangular, off-diagonal entries divisible by `q`.
    U,
    /// Lower unitriangular, off-diagonal entries divisible by `q`.
    L,
    /// `h k h^{-1}` with `k` of class `U` and `h` in `SL_n(Z)`.
    Uc,
    /// `diag(I, g)` with `g` in `E(m, Z; q)` in the bottom-right corner.
    Eblock,
}

impl fmt::Display for FactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorClass::U => "U",
            FactorClass::L => "L",
            FactorClass::Uc => "Uc",
            FactorClass::Eblock => "Eblock",
        })
    }
}

impl FromStr for FactorClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "U" => Ok(FactorClass::U),
            "L" => Ok(FactorClass::L),
            "Uc" => Ok(FactorClass::Uc),
            "Eblock" => Ok(FactorClass::Eblock),
            other => Err(format!("unknown factor class {other:?}")),
        }
    }
}

/// Conjugation witness `matrix = h k h^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcWitness {
    pub h: IntMatrix,
    pub k: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedFactor {
    pub class: FactorClass,
    pub matrix: IntMatrix,
    pub witness: Option<UcWitness>,
    /// Corner size for `Eblock` factors.
    pub block: Option<usize>,
}

impl ClassifiedFactor {
    pub fn upper(matrix: IntMatrix) -> Self {
        ClassifiedFactor {
            class: FactorClass::U,
            matrix,
            witness: None,
            block: None,
        }
    }

    pub fn lower(matrix: IntMatrix) -> Self {
        ClassifiedFactor {
            class: FactorClass::L,
            matrix,
            witness: None,
            block: None,
        }
    }

    /// `h k h^{-1}`, keeping `(h, k)` as the witness.
    pub fn conjugated(h: IntMatrix, k: IntMatrix) -> Result<Self> {
        let matrix = h.mul_checked(&k)?.mul_checked(&h.inverse()?)?;
        Ok(ClassifiedFactor {
            class: FactorClass::Uc,
            matrix,
            witness: Some(UcWitness { h, k }),
            block: None,
        })
    }

    pub fn eblock(matrix: IntMatrix, size: usize) -> Self {
        ClassifiedFactor {
            class: FactorClass::Eblock,
            matrix,
            witness: None,
            block: Some(size),
        }
    }

    /// Checks the class predicate; the error names what failed.
    pub fn check(&self, q: &CongruenceLevel) -> std::result::Result<(), String> {
        let det = self.matrix.det();
        if !det.is_one() {
            return Err(format!("determinant is {det}, not 1"));
        }
        match self.class {
            FactorClass::U => in_upper(&self.matrix, q)
                .then_some(())
                .ok_or_else(|| format!("not upper unitriangular at level {q}")),
            FactorClass::L => in_lower(&self.matrix, q)
                .then_some(())
                .ok_or_else(|| format!("not lower unitriangular at level {q}")),
            FactorClass::Uc => {
                let w = self.witness.as_ref().ok_or("missing conjugation witness")?;
                let n = self.matrix.n();
                if w.h.n() != n || w.k.n() != n {
                    return Err("witness has the wrong dimension".into());
                }
                if !w.h.det().is_one() {
                    return Err("conjugator is not in SL_n(Z)".into());
                }
                if !in_upper(&w.k, q) {
                    return Err(format!("witness k is not upper unitriangular at level {q}"));
                }
                if &self.matrix * &w.h != &w.h * &w.k {
                    return Err("matrix is not h k h^-1".into());
                }
                Ok(())
            }
            FactorClass::Eblock => {
                let n = self.matrix.n();
                let m = self.block.ok_or("missing block size")?;
                if m < 3 || m > n {
                    return Err(format!("block size {m} out of range"));
                }
                let off = n - m;
                let corner = self.matrix.block(off, off, m);
                if corner.embed(n, off) != self.matrix {
                    return Err("matrix is not diag(I, g)".into());
                }
                match mennicke_in_e(&corner, q) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("corner block is not in E({m}, Z; {q})")),
                    Err(e) => Err(e.to_string()),
                }
            }
        }
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.class.to_string());
        h.update(b"|");
        h.update(self.matrix.to_string());
        if let Some(w) = &self.witness {
            h.update(b"|");
            h.update(w.h.to_string());
            h.update(b"|");
            h.update(w.k.to_string());
        }
        if let Some(b) = self.block {
            h.update(format!("|{b}"));
        }
        hex::encode(h.finalize())
    }
}

/// Ordered factors whose exact product reconstructs `input`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCertificate {
    pub input: IntMatrix,
    pub q: CongruenceLevel,
    pub factors: Vec<ClassifiedFactor>,
    pub claimed: String,
}

/// One verification problem; `factor` is the 1-based factor index if local.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub factor: Option<usize>,
    pub message: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factor {
            Some(i) => write!(f, "factor {i}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verification {
    pub failures: Vec<VerifyFailure>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, factor: Option<usize>, message: impl Into<String>) {
        self.failures.push(VerifyFailure {
            factor,
            message: message.into(),
        });
    }
}

impl FactorCertificate {
    pub fn new(input: IntMatrix, q: CongruenceLevel, factors: Vec<ClassifiedFactor>) -> Self {
        let claimed = class_sequence(&factors);
        FactorCertificate {
            input,
            q,
            factors,
            claimed,
        }
    }

    pub fn n(&self) -> usize {
        self.input.n()
    }

    pub fn product(&self) -> Result<IntMatrix> {
        product(self.n(), self.factors.iter().map(|f| &f.matrix))
    }

    /// Replays the certificate: class predicates, class sequence and product.
    pub fn verify(&self) -> Verification {
        let mut v = Verification::default();
        let n = self.n();
        for (idx, f) in self.factors.iter().enumerate() {
            if f.matrix.n() != n {
                v.fail(Some(idx + 1), "dimension mismatch");
                continue;
            }
            if let Err(msg) = f.check(&self.q) {
                v.fail(Some(idx + 1), msg);
            }
        }
        let seq = class_sequence(&self.factors);
        if seq != self.claimed {
            v.fail(None, format!("class sequence {seq} differs from claimed {}", self.claimed));
        }
        if v.passed() {
            match self.product() {
                Ok(p) if p == self.input => {}
                Ok(_) => v.fail(None, "product of factors differs from the input"),
                Err(e) => v.fail(None, e.to_string()),
            }
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: String, v: String| {
            out.push_str(&k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        line("kind".into(), "factor".into());
        line("n".into(), self.n().to_string());
        line("q".into(), self.q.to_string());
        line("input".into(), self.input.to_string());
        line("classes".into(), self.claimed.clone());
        line("factors".into(), self.factors.len().to_string());
        let mut replay = Sha256::new();
        replay.update(self.input.to_string());
        for (idx, f) in self.factors.iter().enumerate() {
            let i = idx + 1;
            line(format!("factor.{i}.class"), f.class.to_string());
            line(format!("factor.{i}.matrix"), f.matrix.to_string());
            if let Some(w) = &f.witness {
                line(format!("factor.{i}.h"), w.h.to_string());
                line(format!("factor.{i}.k"), w.k.to_string());
            }
            if let Some(b) = f.block {
                line(format!("factor.{i}.block"), b.to_string());
            }
            let d = f.digest();
            replay.update(&d);
            line(format!("factor.{i}.sha256"), d);
        }
        line("replay.sha256".into(), hex::encode(replay.finalize()));
        out
    }

    /// Parses the text form and reports, alongside, which recorded digests
    /// no longer match their factor.
    pub fn from_text(text: &str) -> Result<ParsedFactorCertificate> {
        let fields = Fields::parse(text)?;
        if fields.get("kind")? != "factor" {
            return Err(fields.error("kind", "expected kind=factor"));
        }
        let n: usize = fields.parse_num("n")?;
        let q_val: BigInt = fields.get("q")?.parse().map_err(|_| fields.error("q", "bad level"))?;
        let q = CongruenceLevel::new(q_val).map_err(|e| fields.error("q", &e.to_string()))?;
        let input = fields.matrix("input", n)?;
        let claimed = fields.get("classes")?.to_string();
        let count: usize = fields.parse_num("factors")?;
        let mut factors = Vec::with_capacity(count);
        let mut tampered = Vec::new();
        for i in 1..=count {
            let key = |s: &str| format!("factor.{i}.{s}");
            let class: FactorClass = fields
                .get(&key("class"))?
                .parse()
                .map_err(|e: String| fields.error(&key("class"), &e))?;
            let matrix = fields.matrix(&key("matrix"), n)?;
            let witness = if fields.has(&key("h")) {
                Some(UcWitness {
                    h: fields.matrix(&key("h"), n)?,
                    k: fields.matrix(&key("k"), n)?,
                })
            } else {
                None
            };
            let block = if fields.has(&key("block")) {
                Some(fields.parse_num(&key("block"))?)
            } else {
                None
            };
            let f = ClassifiedFactor {
                class,
                matrix,
                witness,
                block,
            };
            if fields.has(&key("sha256")) && fields.get(&key("sha256"))? != f.digest() {
                tampered.push(i);
            }
            factors.push(f);
        }
        Ok(ParsedFactorCertificate {
            certificate: FactorCertificate {
                input,
                q,
                factors,
                claimed,
            },
            tampered,
        })
    }
}

/// A certificate read from text plus the factors whose digests mismatch.
#[derive(Debug, Clone)]
pub struct ParsedFactorCertificate {
    pub certificate: FactorCertificate,
    pub tampered: Vec<usize>,
}

impl ParsedFactorCertificate {
    pub fn verify(&self) -> Verification {
        let mut v = Verification::default();
        for &i in &self.tampered {
            v.fail(Some(i), "recorded digest does not match the factor");
        }
        v.failures.extend(self.certificate.verify().failures);
        v
    }
}

pub fn class_sequence(factors: &[ClassifiedFactor]) -> String {
    factors
        .iter()
        .map(|f| f.class.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `key=value` lines with line numbers kept for error reporting.
pub(crate) struct Fields {
    entries: Vec<(usize, String, String)>,
}

impl Fields {
    pub(crate) fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(Error::CertificateParse {
                line: idx + 1,
                message: "expected key=value".into(),
            })?;
            entries.push((idx + 1, k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Fields { entries })
    }

    pub(crate) fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|(_, k, _)| k == key)
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, _)| *l)
            .unwrap_or(0)
    }

    pub(crate) fn error(&self, key: &str, message: &str) -> Error {
        Error::CertificateParse {
            line: self.line_of(key),
            message: format!("{key}: {message}"),
        }
    }

    pub(crate) fn get(&self, key: &str) -> Result<&str> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
            .ok_or_else(|| Error::CertificateParse {
                line: 0,
                message: format!("missing field {key}"),
            })
    }

    pub(crate) fn parse_num<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .parse()
            .map_err(|_| self.error(key, "expected a number"))
    }

    pub(crate) fn matrix(&self, key: &str, n: usize) -> Result<IntMatrix> {
        let m: IntMatrix = self
            .get(key)?
            .parse()
            .map_err(|e: Error| self.error(key, &e.to_string()))?;
        if m.n() != n {
            return Err(self.error(key, &format!("expected a {n}x{n} matrix")));
        }
        Ok(m)
    }
}

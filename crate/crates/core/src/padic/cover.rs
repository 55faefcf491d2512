use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::solve::{checked_pow, valuation};
use crate::decomposition::Fields;
use crate::error::{Error, Result};
use crate::finite::cover::sl_basis;
use crate::finite::lie::random_sl;
use crate::finite::linalg::Echelon;
use crate::finite::{diff_rank, enumerate_group, generates, is_prime, FiniteGroupTable};
use crate::matrix::{inv_mod, mulmod, parse_matrix, ModMatrix};
use crate::words::{parse_word, ModGroup, Word};

/// Number of word values each sampled target may use.
pub const COVER_EXPONENT: usize = 7;

/// A word value `w(tuple)^{±1}`, kept with the tuple that defines it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFactor {
    pub tuple: Vec<ModMatrix>,
    pub inverse: bool,
}

impl WordFactor {
    pub fn value(&self, w: &Word) -> Result<ModMatrix> {
        let first = self.tuple.first().ok_or_else(|| Error::Precondition("empty tuple".into()))?;
        let group = ModGroup { n: first.n(), m: first.modulus() };
        let v = w.evaluate(&group, &self.tuple)?;
        if self.inverse {
            v.inverse()
        } else {
            Ok(v)
        }
    }

    fn conjugate(&self, x: &ModMatrix, x_inv: &ModMatrix) -> Result<WordFactor> {
        let tuple = self.tuple.iter().map(|t| x_inv.mul(t)?.mul(x)).collect::<Result<_>>()?;
        Ok(WordFactor { tuple, inverse: self.inverse })
    }

    fn to_text(&self) -> String {
        let body: Vec<String> = self.tuple.iter().map(|m| m.to_string()).collect();
        format!("{} {}", if self.inverse { '-' } else { '+' }, body.join(" | "))
    }

    fn from_text(s: &str, q: u64) -> Result<WordFactor> {
        let bad = |m: &str| Error::Precondition(format!("factor {s:?}: {m}"));
        let (sign, body) = s.split_once(' ').ok_or_else(|| bad("expected sign and tuple"))?;
        let inverse = match sign {
            "+" => false,
            "-" => true,
            _ => return Err(bad("sign must be + or -")),
        };
        let tuple = body.split('|').map(|t| parse_matrix(t.trim())?.reduce_mod(q)).collect::<Result<_>>()?;
        Ok(WordFactor { tuple, inverse })
    }
}

/// One sampled target and, when found, its expression as word values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSample {
    pub target: ModMatrix,
    pub factors: Vec<WordFactor>,
    /// Valuation of `product - target`, equal to `K` on success.
    pub residual: u32,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CoverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverStatus::Pass => "PASS",
            CoverStatus::Fail => "FAIL",
            CoverStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl std::str::FromStr for CoverStatus {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "PASS" => Ok(CoverStatus::Pass),
            "FAIL" => Ok(CoverStatus::Fail),
            "INCONCLUSIVE" => Ok(CoverStatus::Inconclusive),
            _ => Err(format!("unknown status {s:?}")),
        }
    }
}

/// Generating pair mod `p` and its lifts `g, h`, each a product of two word values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePair {
    pub g: ModMatrix,
    pub h: ModMatrix,
    pub g_factors: Vec<WordFactor>,
    pub h_factors: Vec<WordFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftCertificate {
    pub word: Word,
    pub n: usize,
    pub p: u64,
    pub precision: u32,
    pub seed: u64,
    pub status: CoverStatus,
    pub base: Option<BasePair>,
    pub samples: Vec<CoverSample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LiftVerification {
    pub failures: Vec<(Option<usize>, String)>,
    pub max_factors: usize,
    pub residuals: Vec<u32>,
}

impl LiftVerification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for LiftVerification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "PASS (at most {} factors per sample)", self.max_factors);
        }
        let (i, m) = &self.failures[0];
        match i {
            Some(i) => write!(f, "FAIL at sample {i}: {m}"),
            None => write!(f, "FAIL: {m}"),
        }
    }
}

fn product(w: &Word, factors: &[WordFactor], n: usize, q: u64) -> Result<ModMatrix> {
    let mut acc = ModMatrix::identity(n, q);
    for f in factors {
        acc = acc.mul(&f.value(w)?)?;
    }
    Ok(acc)
}

fn difference_valuation(a: &ModMatrix, b: &ModMatrix, p: u64, precision: u32) -> u32 {
    a.sub(b).residues().iter().map(|&x| valuation(x, p, precision)).min().unwrap_or(precision)
}

impl LiftCertificate {
    pub fn modulus(&self) -> u64 {
        checked_pow(self.p, self.precision).expect("checked on construction")
    }

    /// Largest number of factors used by any sample.
    pub fn exponent(&self) -> usize {
        self.samples.iter().map(|s| s.factors.len()).max().unwrap_or(0)
    }

    pub fn successes(&self) -> usize {
        self.samples.iter().filter(|s| s.residual == self.precision && !s.factors.is_empty()).count()
    }

    /// Replays every factor from its tuple and every sample product mod `p^K`.
    pub fn verify(&self) -> LiftVerification {
        let mut v = LiftVerification::default();
        let (n, q) = (self.n, self.modulus());
        let check_tuple = |f: &WordFactor| -> std::result::Result<(), String> {
            if f.tuple.len() < self.word.arity() {
                return Err(format!("tuple has {} entries, word needs {}", f.tuple.len(), self.word.arity()));
            }
            if f.tuple.iter().any(|t| t.n() != n || t.modulus() != q || t.det() != 1) {
                return Err("tuple entry outside SL_n(Z/p^K)".into());
            }
            Ok(())
        };
        if let Some(b) = &self.base {
            for (name, target, fs) in [("g", &b.g, &b.g_factors), ("h", &b.h, &b.h_factors)] {
                if let Err(e) = fs.iter().try_for_each(check_tuple) {
                    v.failures.push((None, format!("base {name}: {e}")));
                    continue;
                }
                match product(&self.word, fs, n, q) {
                    Ok(m) if &m == target => {}
                    Ok(_) => v.failures.push((None, format!("base {name} does not match its factors"))),
                    Err(e) => v.failures.push((None, format!("base {name}: {e}"))),
                }
            }
        }
        for (i, s) in self.samples.iter().enumerate() {
            let idx = i + 1;
            if s.factors.is_empty() {
                if s.target.is_identity() {
                    v.residuals.push(self.precision);
                    continue;
                }
                v.residuals.push(0);
                if self.status == CoverStatus::Pass {
                    v.failures.push((Some(idx), "no factors recorded".into()));
                }
                continue;
            }
            if s.factors.len() > COVER_EXPONENT {
                v.failures.push((Some(idx), format!("{} factors exceed {COVER_EXPONENT}", s.factors.len())));
            }
            if let Err(e) = s.factors.iter().try_for_each(check_tuple) {
                v.failures.push((Some(idx), e));
                v.residuals.push(0);
                continue;
            }
            match product(&self.word, &s.factors, n, q) {
                Ok(m) => {
                    let r = difference_valuation(&m, &s.target, self.p, self.precision);
                    v.residuals.push(r);
                    if r != s.residual {
                        v.failures.push((Some(idx), format!("recorded residual {} but replay gives {r}", s.residual)));
                    } else if r < self.precision {
                        v.failures.push((Some(idx), format!("product differs from target at valuation {r}")));
                    }
                }
                Err(e) => {
                    v.residuals.push(0);
                    v.failures.push((Some(idx), e.to_string()));
                }
            }
            v.max_factors = v.max_factors.max(s.factors.len());
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
        line("kind".into(), "lift".into());
        line("word".into(), self.word.to_string());
        line("n".into(), self.n.to_string());
        line("p".into(), self.p.to_string());
        line("K".into(), self.precision.to_string());
        line("seed".into(), self.seed.to_string());
        line("status".into(), self.status.to_string());
        line("exponent.budget".into(), COVER_EXPONENT.to_string());
        if let Some(b) = &self.base {
            line("base.g".into(), b.g.to_string());
            line("base.h".into(), b.h.to_string());
            for (name, fs) in [("g", &b.g_factors), ("h", &b.h_factors)] {
                line(format!("base.{name}.factors"), fs.len().to_string());
                for (j, f) in fs.iter().enumerate() {
                    line(format!("base.{name}.factor.{}", j + 1), f.to_text());
                }
            }
        }
        line("samples".into(), self.samples.len().to_string());
        for (i, s) in self.samples.iter().enumerate() {
            let i = i + 1;
            line(format!("sample.{i}.target"), s.target.to_string());
            line(format!("sample.{i}.residual"), s.residual.to_string());
            line(format!("sample.{i}.factors"), s.factors.len().to_string());
            for (j, f) in s.factors.iter().enumerate() {
                line(format!("sample.{i}.factor.{}", j + 1), f.to_text());
            }
            if let Some(note) = &s.note {
                line(format!("sample.{i}.note"), note.clone());
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<LiftCertificate> {
        let fields = Fields::parse(text)?;
        if fields.get("kind")? != "lift" {
            return Err(fields.error("kind", "expected lift"));
        }
        let word = parse_word(fields.get("word")?)?;
        let n: usize = fields.parse_num("n")?;
        let p: u64 = fields.parse_num("p")?;
        let precision: u32 = fields.parse_num("K")?;
        let seed: u64 = fields.parse_num("seed")?;
        let status: CoverStatus = fields.get("status")?.parse().map_err(|e: String| fields.error("status", &e))?;
        let q = checked_pow(p, precision).ok_or_else(|| fields.error("K", "p^K too large"))?;
        let matrix = |key: &str| -> Result<ModMatrix> {
            fields.matrix(key, n)?.reduce_mod(q).map_err(|e| fields.error(key, &e.to_string()))
        };
        let factors = |prefix: &str| -> Result<Vec<WordFactor>> {
            let count: usize = fields.parse_num(&format!("{prefix}.factors"))?;
            (1..=count)
                .map(|j| {
                    let key = format!("{prefix}.factor.{j}");
                    WordFactor::from_text(fields.get(&key)?, q).map_err(|e| fields.error(&key, &e.to_string()))
                })
                .collect()
        };
        let base = if fields.has("base.g") {
            Some(BasePair {
                g: matrix("base.g")?,
                h: matrix("base.h")?,
                g_factors: factors("base.g")?,
                h_factors: factors("base.h")?,
            })
        } else {
            None
        };
        let count: usize = fields.parse_num("samples")?;
        let mut samples = Vec::with_capacity(count);
        for i in 1..=count {
            let prefix = format!("sample.{i}");
            let note_key = format!("{prefix}.note");
            samples.push(CoverSample {
                target: matrix(&format!("{prefix}.target"))?,
                factors: factors(&prefix)?,
                residual: fields.parse_num(&format!("{prefix}.residual"))?,
                note: fields.has(&note_key).then(|| fields.get(&note_key).unwrap().to_string()),
            });
        }
        Ok(LiftCertificate { word, n, p, precision, seed, status, base, samples })
    }
}

/// Budgets for [`word_coset_cover_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverOptions {
    /// Enumerate all tuples mod `p` when there are at most this many.
    pub tuple_budget: u128,
    /// Otherwise draw this many random tuples.
    pub value_samples: usize,
    /// Frequent values combined into candidate generators.
    pub candidates: usize,
    /// Candidate pairs tested before giving up.
    pub pair_tries: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { tuple_budget: 200_000, value_samples: 4_000, candidates: 24, pair_tries: 2_000 }
    }
}

/// Lifts a matrix with unit determinant mod `p` to `SL_n(Z/q)`, fixing the first row.
pub(crate) fn lift_to_sl(m: &ModMatrix, q: u64) -> ModMatrix {
    let n = m.n();
    let mut data = m.residues().to_vec();
    let lifted = ModMatrix::from_residues(n, q, data.clone());
    let inv = inv_mod(lifted.det(), q).expect("unit determinant");
    for x in &mut data[..n] {
        *x = mulmod(*x, inv, q);
    }
    ModMatrix::from_residues(n, q, data)
}

struct Value {
    ordinal: u32,
    tuple: Vec<u32>,
    count: usize,
}

fn collect_values(w: &Word, table: &Arc<FiniteGroupTable>, opts: &CoverOptions, rng: &mut ChaCha8Rng) -> Result<Vec<Value>> {
    let d = w.arity().max(1);
    let size = table.len();
    let total = (size as u128).checked_pow(d as u32);
    let mut values: Vec<Value> = Vec::new();
    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut record = |tuple: Vec<u32>, values: &mut Vec<Value>| -> Result<()> {
        let v = w.evaluate(table.as_ref(), &tuple)?;
        match index.get(&v) {
            Some(&i) => values[i].count += 1,
            None => {
                index.insert(v, values.len());
                values.push(Value { ordinal: v, tuple, count: 1 });
            }
        }
        Ok(())
    };
    if total.is_some_and(|t| t <= opts.tuple_budget) {
        let mut tuple = vec![0u32; d];
        'odometer: loop {
            record(tuple.clone(), &mut values)?;
            for i in (0..d).rev() {
                tuple[i] += 1;
                if (tuple[i] as usize) < size {
                    continue 'odometer;
                }
                tuple[i] = 0;
            }
            break;
        }
    } else {
        for _ in 0..opts.value_samples {
            let tuple: Vec<u32> = (0..d).map(|_| rng.gen_range(0..size as u32)).collect();
            record(tuple, &mut values)?;
        }
    }
    // close under conjugation, conjugating the defining tuples along
    let mut seen: HashMap<u32, usize> = values.iter().enumerate().map(|(i, v)| (v.ordinal, i)).collect();
    let mut next = 0;
    while next < values.len() {
        for &s in table.generators() {
            let o = table.conjugate(values[next].ordinal, s);
            if !seen.contains_key(&o) {
                let tuple = values[next].tuple.iter().map(|&t| table.conjugate(t, s)).collect();
                seen.insert(o, values.len());
                values.push(Value { ordinal: o, tuple, count: 0 });
            }
        }
        next += 1;
    }
    values.sort_by(|a, b| {
        b.count.cmp(&a.count).then_with(|| table.element(a.ordinal).residues().cmp(table.element(b.ordinal).residues()))
    });
    Ok(values)
}

/// `x, y` with `x^{-1} g x · y^{-1} h y = t (mod p^K)`, for `t ≡ g h (mod p)`.
///
/// Each step solves the linearisation at the current point mod `p` over
/// trace-zero directions and multiplies `x, y` by `I + p^j X'`, `I + p^j Y'`.
fn coset_newton(g: &ModMatrix, h: &ModMatrix, t: &ModMatrix, lin: &Linearisation, p: u64, precision: u32) -> Result<(ModMatrix, ModMatrix)> {
    let n = g.n();
    let q = g.modulus();
    let basis = sl_basis(n, p);
    let dim = basis.len();
    let mut x = ModMatrix::identity(n, q);
    let mut y = ModMatrix::identity(n, q);
    for j in 1..precision {
        let pj = checked_pow(p, j).unwrap();
        let gx = g.conjugate_by(&x)?;
        let hy = h.conjugate_by(&y)?;
        let r = gx.mul(&hy)?.inverse()?.mul(t)?;
        let z = r.sub(&ModMatrix::identity(n, q));
        if z.residues().iter().any(|&e| e % pj != 0) {
            return Err(Error::Internal(format!("coset residual not divisible by p^{j}")));
        }
        let zbar: Vec<u64> = z.residues().iter().map(|&e| (e / pj) % p).collect();
        let c = lin.solve(&zbar).ok_or(Error::RankDeficient { rank: lin.echelon.rank(), needed: dim })?;
        let mut xd = vec![0u64; n * n];
        let mut yd = vec![0u64; n * n];
        for (k, e) in basis.iter().enumerate() {
            for (idx, &v) in e.residues().iter().enumerate() {
                xd[idx] = (xd[idx] + mulmod(c[2 * k], v, p)) % p;
                yd[idx] = (yd[idx] + mulmod(c[2 * k + 1], v, p)) % p;
            }
        }
        let step = |d: Vec<u64>| {
            let mut m = ModMatrix::identity(n, q).residues().to_vec();
            for (e, v) in m.iter_mut().zip(d) {
                *e = (*e + mulmod(v, pj, q)) % q;
            }
            ModMatrix::from_residues(n, q, m)
        };
        x = x.mul(&step(xd))?;
        y = y.mul(&step(yd))?;
    }
    let gx = g.conjugate_by(&x)?;
    let hy = h.conjugate_by(&y)?;
    if &gx.mul(&hy)? != t {
        return Err(Error::Internal("coset Newton did not converge".into()));
    }
    Ok((x, y))
}

/// Linear map `(X, Y) -> (X - X^a)^b + (Y - Y^b)` with columns interleaved
/// `X_1, Y_1, X_2, Y_2, ...` over the `sl_n` basis.
struct Linearisation {
    echelon: Echelon,
    owners: Vec<usize>,
    columns: usize,
}

impl Linearisation {
    fn new(a: &ModMatrix, b: &ModMatrix) -> Result<Linearisation> {
        let n = a.n();
        let p = a.modulus();
        let (ai, bi) = (a.inverse()?, b.inverse()?);
        let mut lin = Linearisation { echelon: Echelon::new(p), owners: Vec::new(), columns: 0 };
        for m in sl_basis(n, p) {
            let xa = ai.mul(&m)?.mul(a)?;
            let col_x = bi.mul(&m.sub(&xa))?.mul(b)?;
            let col_y = m.sub(&bi.mul(&m)?.mul(b)?);
            for col in [col_x, col_y] {
                if lin.echelon.insert(col.residues()) {
                    lin.owners.push(lin.columns);
                }
                lin.columns += 1;
            }
        }
        Ok(lin)
    }

    fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let c = self.echelon.solve(target)?;
        let mut out = vec![0u64; self.columns];
        for (&k, v) in self.owners.iter().zip(c) {
            out[k] = v;
        }
        Some(out)
    }
}

/// Sampled check that `w(SL_n(Z/p^K))^7` is everything, at the given budget.
///
/// Every target is written as up to three word values mod `p` (lifted)
/// times `Φ_{g,h}(x, y)`, where `g, h` are products of two word values
/// reducing to a generating pair with full-rank differential.
pub fn word_coset_cover(w: &Word, n: usize, p: u64, precision: u32, samples: usize, seed: u64) -> Result<LiftCertificate> {
    word_coset_cover_with(w, n, p, precision, samples, seed, CoverOptions::default())
}

pub fn word_coset_cover_with(
    w: &Word,
    n: usize,
    p: u64,
    precision: u32,
    samples: usize,
    seed: u64,
    opts: CoverOptions,
) -> Result<LiftCertificate> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if n < 2 || precision == 0 {
        return Err(Error::Precondition("need n >= 2 and K >= 1".into()));
    }
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let q = checked_pow(p, precision).ok_or(Error::InvalidModulus(p))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cert =
        LiftCertificate { word: w.clone(), n, p, precision, seed, status: CoverStatus::Inconclusive, base: None, samples: Vec::new() };
    let d = w.arity();

    // a letter with exponent sum ±1 gives every element as a single value
    let sums: Vec<i64> = (1..=d)
        .map(|i| w.letters().iter().filter(|l| l.generator == i).map(|l| if l.inverse { -1 } else { 1 }).sum())
        .collect();
    if let Some(i) = sums.iter().position(|s| s.abs() == 1) {
        for _ in 0..samples {
            let t = random_sl(n, q, &mut rng);
            let mut tuple = vec![ModMatrix::identity(n, q); d];
            tuple[i] = t.clone();
            let factors = vec![WordFactor { tuple, inverse: sums[i] < 0 }];
            cert.samples.push(CoverSample { target: t, factors, residual: precision, note: None });
        }
        cert.status = CoverStatus::Pass;
        return Ok(cert);
    }

    let table = Arc::new(enumerate_group(n, p)?);
    let values = collect_values(w, &table, &opts, &mut rng)?;
    let ident = table.identity();
    let factor_of = |v: &Value, inverse: bool| WordFactor {
        tuple: v.tuple.iter().map(|&t| lift_to_sl(&table.element(t), q)).collect(),
        inverse,
    };

    // candidates a = v_i v_j over the most frequent values
    let top: Vec<&Value> = values.iter().filter(|v| v.ordinal != ident).take(opts.candidates).collect();
    let mut cands: Vec<(u32, Vec<&Value>)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for s in 0..2 * top.len() {
        if s < top.len() {
            let o = top[s].ordinal;
            if table.element(o).scalar_value().is_none() && seen.insert(o) {
                cands.push((o, vec![top[s]]));
            }
        }
        for i in 0..top.len() {
            let Some(j) = s.checked_sub(i).filter(|&j| j < top.len()) else { continue };
            let o = table.product(top[i].ordinal, top[j].ordinal);
            if table.element(o).scalar_value().is_none() && seen.insert(o) {
                cands.push((o, vec![top[i], top[j]]));
            }
        }
    }
    let needed = n * n - 1;
    let mut found = None;
    let mut tries = 0;
    'search: for (i, (oa, fa)) in cands.iter().enumerate() {
        for (ob, fb) in cands.iter().skip(i + 1) {
            tries += 1;
            if tries > opts.pair_tries {
                break 'search;
            }
            let (a, b) = (table.element(*oa), table.element(*ob));
            if diff_rank(&a, &b)? == needed && generates(&a, &b, &table)? {
                found = Some((a, b, fa.clone(), fb.clone()));
                break 'search;
            }
        }
    }
    let Some((a, b, fa, fb)) = found else {
        return Ok(cert);
    };
    let g_factors: Vec<WordFactor> = fa.iter().map(|v| factor_of(v, false)).collect();
    let h_factors: Vec<WordFactor> = fb.iter().map(|v| factor_of(v, false)).collect();
    let g = product(w, &g_factors, n, q)?;
    let h = product(w, &h_factors, n, q)?;
    let lin = Linearisation::new(&a, &b)?;

    // (V ∪ V^{-1} ∪ 1)^3 mod p, with one factorization per element
    let mut steps: Vec<(u32, usize, bool)> = Vec::new();
    for (k, v) in values.iter().enumerate() {
        if v.ordinal == ident {
            continue;
        }
        steps.push((v.ordinal, k, false));
        steps.push((table.inverse(v.ordinal), k, true));
    }
    let mut parent: Vec<Option<(u32, usize)>> = vec![None; table.len()];
    let mut depth = vec![u8::MAX; table.len()];
    depth[ident as usize] = 0;
    let mut frontier = vec![ident];
    let mut reached = 1;
    for layer in 1..=3u8 {
        let mut next = Vec::new();
        for &u in &frontier {
            if reached == table.len() {
                break;
            }
            for (si, &(s, _, _)) in steps.iter().enumerate() {
                let x = table.product(u, s);
                if depth[x as usize] == u8::MAX {
                    depth[x as usize] = layer;
                    parent[x as usize] = Some((u, si));
                    reached += 1;
                    next.push(x);
                }
            }
        }
        frontier = next;
    }

    let gh_bar_inv = table.inverse(table.product(table.index_of(&a).unwrap(), table.index_of(&b).unwrap()));
    let mut all_ok = true;
    for _ in 0..samples {
        let t = random_sl(n, q, &mut rng);
        let tbar = table.index_of(&t.reduce_to(p)?).ok_or_else(|| Error::Internal("target outside table".into()))?;
        let u = table.product(tbar, gh_bar_inv);
        if depth[u as usize] == u8::MAX {
            all_ok = false;
            cert.samples.push(CoverSample {
                target: t,
                factors: Vec::new(),
                residual: 0,
                note: Some("reduction outside three value products".into()),
            });
            continue;
        }
        let mut path = Vec::new();
        let mut cur = u;
        while let Some((prev, si)) = parent[cur as usize] {
            path.push(steps[si]);
            cur = prev;
        }
        path.reverse();
        let mut factors: Vec<WordFactor> = path.iter().map(|&(_, k, inv)| factor_of(&values[k], inv)).collect();
        let s = product(w, &factors, n, q)?;
        let t_prime = s.inverse()?.mul(&t)?;
        match coset_newton(&g, &h, &t_prime, &lin, p, precision) {
            Ok((x, y)) => {
                let (xi, yi) = (x.inverse()?, y.inverse()?);
                for f in &g_factors {
                    factors.push(f.conjugate(&x, &xi)?);
                }
                for f in &h_factors {
                    factors.push(f.conjugate(&y, &yi)?);
                }
                let m = product(w, &factors, n, q)?;
                let residual = difference_valuation(&m, &t, p, precision);
                all_ok &= residual == precision;
                cert.samples.push(CoverSample { target: t, factors, residual, note: None });
            }
            Err(e) => {
                all_ok = false;
                cert.samples.push(CoverSample { target: t, factors: Vec::new(), residual: 0, note: Some(e.to_string()) });
            }
        }
    }
    cert.base = Some(BasePair { g, h, g_factors, h_factors });
    cert.status = if all_ok { CoverStatus::Pass } else { CoverStatus::Fail };
    Ok(cert)
}

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::table::FiniteGroupTable;
use crate::error::{Error, Result};
use crate::matrix::ModMatrix;
use crate::words::Word;

/// Subset of a [`FiniteGroupTable`], stored as a bitmap over ordinals.
#[derive(Debug, Clone)]
pub struct SymSet {
    table: Arc<FiniteGroupTable>,
    bits: Vec<u64>,
    len: usize,
    conjugation_invariant: bool,
    approximate: bool,
}

impl PartialEq for SymSet {
    fn eq(&self, other: &SymSet) -> bool {
        self.bits == other.bits
    }
}

impl Eq for SymSet {}

impl SymSet {
    pub fn empty(table: &Arc<FiniteGroupTable>) -> SymSet {
        SymSet {
            table: Arc::clone(table),
            bits: vec![0; table.len().div_ceil(64)],
            len: 0,
            conjugation_invariant: true,
            approximate: false,
        }
    }

    /// `{I}`.
    pub fn identity(table: &Arc<FiniteGroupTable>) -> SymSet {
        let mut s = SymSet::empty(table);
        s.insert(table.identity());
        s
    }

    pub fn whole(table: &Arc<FiniteGroupTable>) -> SymSet {
        let mut s = SymSet::empty(table);
        for x in 0..table.len() as u32 {
            s.insert(x);
        }
        s
    }

    /// The set of the given ordinals, conjugation invariance not assumed.
    pub fn from_ordinals(table: &Arc<FiniteGroupTable>, xs: impl IntoIterator<Item = u32>) -> SymSet {
        let mut s = SymSet::empty(table);
        for x in xs {
            s.insert(x);
        }
        s.conjugation_invariant = s.check_conjugation_invariant();
        s
    }

    pub fn from_matrices(table: &Arc<FiniteGroupTable>, gs: &[ModMatrix]) -> Result<SymSet> {
        let xs = gs
            .iter()
            .map(|g| table.index_of(g).ok_or_else(|| Error::Precondition(format!("{g} is not in the table"))))
            .collect::<Result<Vec<u32>>>()?;
        Ok(SymSet::from_ordinals(table, xs))
    }

    pub fn table(&self) -> &Arc<FiniteGroupTable> {
        &self.table
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: u32) -> bool {
        let w = &mut self.bits[x as usize / 64];
        let bit = 1u64 << (x % 64);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.len += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| (w * 64 + b) as u32)
        })
    }

    pub fn elements(&self) -> Vec<ModMatrix> {
        self.iter().map(|x| self.table.element(x)).collect()
    }

    pub fn is_subset(&self, other: &SymSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|x| self.contains(self.table.inverse(x)))
    }

    /// `X ∪ X^{-1}`.
    pub fn symmetrize(&self) -> SymSet {
        let mut s = self.clone();
        for x in self.iter() {
            s.insert(self.table.inverse(x));
        }
        s
    }

    /// Closed under conjugation by every group element.
    pub fn is_conjugation_invariant(&self) -> bool {
        self.conjugation_invariant
    }

    /// Set from random samples; a subset of the exact answer.
    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    fn check_conjugation_invariant(&self) -> bool {
        let gens = self.table.generators();
        self.iter().all(|x| gens.iter().all(|&s| self.contains(self.table.conjugate(x, s))))
    }

    /// Smallest superset closed under conjugation.
    pub fn conjugation_closure(&self) -> SymSet {
        let mut s = self.clone();
        let mut queue: VecDeque<u32> = self.iter().collect();
        while let Some(x) = queue.pop_front() {
            for &g in self.table.generators() {
                let y = self.table.conjugate(x, g);
                if s.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        s.conjugation_invariant = true;
        s
    }

    /// `count:u64` then the bitmap as little-endian `u64` words.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.bits.len());
        out.extend_from_slice(&(self.table.len() as u64).to_le_bytes());
        for w in &self.bits {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(table: &Arc<FiniteGroupTable>, bytes: &[u8]) -> Result<SymSet> {
        let words = table.len().div_ceil(64);
        if bytes.len() != 8 + 8 * words || u64::from_le_bytes(bytes[..8].try_into().unwrap()) != table.len() as u64 {
            return Err(Error::Precondition("set bytes do not match the table".into()));
        }
        let bits: Vec<u64> = bytes[8..].chunks(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
        let tail = table.len() % 64;
        if tail != 0 && bits[words - 1] >> tail != 0 {
            return Err(Error::Precondition("set bytes mark ordinals past the table".into()));
        }
        let len = bits.iter().map(|w| w.count_ones() as usize).sum();
        let mut s = SymSet { table: Arc::clone(table), bits, len, conjugation_invariant: false, approximate: false };
        s.conjugation_invariant = s.check_conjugation_invariant();
        Ok(s)
    }
}

/// Limits for [`value_set_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueSetOptions {
    /// Largest tuple space iterated exhaustively.
    pub tuple_budget: u128,
    /// Random tuples drawn when the tuple space is larger.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValueSetOptions {
    fn default() -> Self {
        ValueSetOptions { tuple_budget: 10_000_000, samples: 200_000, seed: 1 }
    }
}

fn eval_ordinals(w: &Word, table: &FiniteGroupTable, tuple: &[u32], inverses: &[u32]) -> u32 {
    w.letters().iter().fold(table.identity(), |acc, l| {
        let x = if l.inverse { inverses[l.generator - 1] } else { tuple[l.generator - 1] };
        table.product(acc, x)
    })
}

pub fn value_set(w: &Word, table: &Arc<FiniteGroupTable>) -> Result<SymSet> {
    value_set_with(w, table, ValueSetOptions::default())
}

/// `{ w(g_1..g_d)^{±1} }`, exhaustive when the tuple space fits the budget.
///
/// Above the budget, sampled values are closed under conjugation and the set
/// is flagged approximate.
pub fn value_set_with(w: &Word, table: &Arc<FiniteGroupTable>, opts: ValueSetOptions) -> Result<SymSet> {
    let d = w.arity();
    let size = table.len() as u128;
    let space = (0..d).try_fold(1u128, |acc, _| acc.checked_mul(size));
    let mut out = SymSet::identity(table);
    if d == 0 {
        return Ok(out);
    }
    out = SymSet::empty(table);
    let mut tuple = vec![0u32; d];
    let mut inverses = vec![0u32; d];
    match space {
        Some(total) if total <= opts.tuple_budget => {
            loop {
                let v = eval_ordinals(w, table, &tuple, &inverses);
                out.insert(v);
                out.insert(table.inverse(v));
                let mut k = 0;
                loop {
                    if k == d {
                        out.conjugation_invariant = true;
                        return Ok(out);
                    }
                    tuple[k] += 1;
                    if (tuple[k] as usize) < table.len() {
                        inverses[k] = table.inverse(tuple[k]);
                        break;
                    }
                    tuple[k] = 0;
                    inverses[k] = 0;
                    k += 1;
                }
            }
        }
        _ => {
            if opts.samples == 0 {
                return Err(Error::BudgetExceeded {
                    what: "value set tuples",
                    needed: space.unwrap_or(u128::MAX),
                    budget: opts.tuple_budget,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.samples {
                for k in 0..d {
                    tuple[k] = rng.gen_range(0..table.len() as u32);
                    inverses[k] = table.inverse(tuple[k]);
                }
                let v = eval_ordinals(w, table, &tuple, &inverses);
                out.insert(v);
                out.insert(table.inverse(v));
            }
            let mut closed = out.conjugation_closure();
            closed.approximate = true;
            Ok(closed)
        }
    }
}

/// `(X ∪ {1})^k`.
pub fn power_product(x: &SymSet, k: usize) -> SymSet {
    layers(x, Some(k)).0
}

/// Breadth-first layers of `(X ∪ {1})^j`; returns the last set and the number
/// of steps that added elements.
fn layers(x: &SymSet, max: Option<usize>) -> (SymSet, usize) {
    let table = x.table();
    let mut acc = SymSet::identity(table);
    let mut frontier = vec![table.identity()];
    let gens: Vec<u32> = x.iter().collect();
    let mut steps = 0;
    while max.is_none_or(|m| steps < m) {
        let mut next = Vec::new();
        for &y in &frontier {
            for &g in &gens {
                let z = table.product(y, g);
                if acc.insert(z) {
                    next.push(z);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        steps += 1;
        frontier = next;
    }
    acc.conjugation_invariant = acc.len() == table.len() || acc.check_conjugation_invariant();
    (acc, steps)
}

/// The subgroup generated by `X`.
pub fn closure(x: &SymSet) -> SymSet {
    layers(&x.symmetrize(), None).0
}

/// Minimal `k` with `(X ∪ {1})^k = (X ∪ {1})^{k+1}`; this power is `⟨X⟩`.
pub fn closure_exponent(x: &SymSet) -> usize {
    layers(x, None).1
}

/// Width of a word over a finite group.
///
/// Exact value sets give `lower == upper`. Sampled value sets give `lower` 0 or
/// 1 and an upper bound only when the sampled values already generate the
/// group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Width {
    pub lower: usize,
    pub upper: Option<usize>,
    pub value_set_size: usize,
    pub approximate: bool,
}

impl Width {
    pub fn exact(&self) -> Option<usize> {
        (!self.approximate).then_some(self.lower)
    }
}

pub fn width(w: &Word, table: &Arc<FiniteGroupTable>) -> Result<Width> {
    width_with(w, table, ValueSetOptions::default())
}

/// Minimal `C` with `(V ∪ {1})^C = ⟨V⟩` for the value set `V`; 0 when `V = {I}`.
pub fn width_with(w: &Word, table: &Arc<FiniteGroupTable>, opts: ValueSetOptions) -> Result<Width> {
    let v = value_set_with(w, table, opts)?;
    let c = closure_exponent(&v);
    if !v.is_approximate() {
        return Ok(Width { lower: c, upper: Some(c), value_set_size: v.len(), approximate: false });
    }
    let trivial = v.len() == 1;
    let generating = closure(&v).len() == table.len();
    Ok(Width {
        lower: usize::from(!trivial),
        upper: generating.then_some(c),
        value_set_size: v.len(),
        approximate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::enumerate_group;
    use crate::words::parse_word;

    fn group(n: usize, m: u64) -> Arc<FiniteGroupTable> {
        Arc::new(enumerate_group(n, m).unwrap())
    }

    #[test]
    fn small_value_sets() {
        let g3 = group(2, 3);
        let v = value_set(&parse_word("x1").unwrap(), &g3).unwrap();
        assert_eq!(v.len(), 24);
        let v = value_set(&parse_word("x1^12").unwrap(), &g3).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(width(&parse_word("x1^12").unwrap(), &g3).unwrap().exact(), Some(0));

        let g2 = group(2, 2);
        let comm = parse_word("[x1,x2]").unwrap();
        let v = value_set(&comm, &g2).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.is_conjugation_invariant() && v.is_symmetric());
        assert_eq!(power_product(&v, 1), v);
        assert_eq!(width(&comm, &g2).unwrap().exact(), Some(1));
    }

    #[test]
    fn powers() {
        let g = group(2, 5);
        let x = SymSet::from_matrices(&g, &[ModMatrix::from_signed(2, 5, &[1, 1, 0, 1])]).unwrap().symmetrize();
        assert_eq!(power_product(&x, 0).len(), 1);
        assert_eq!(power_product(&x, 1).len(), 3);
        assert_eq!(power_product(&x, 2).len(), 5);
        assert_eq!(closure_exponent(&x), 2);
        assert_eq!(closure(&x).len(), 5);
        assert_eq!(closure_exponent(&SymSet::whole(&g)), 1);
        assert_eq!(power_product(&SymSet::identity(&g), 5).len(), 1);
    }

    #[test]
    fn approximate_values() {
        let g = group(2, 5);
        let opts = ValueSetOptions { tuple_budget: 100, samples: 500, seed: 3 };
        let comm = parse_word("[x1,x2]").unwrap();
        let v = value_set_with(&comm, &g, opts).unwrap();
        assert!(v.is_approximate());
        assert!(v.is_subset(&value_set(&comm, &g).unwrap()));
        let w = width_with(&comm, &g, opts).unwrap();
        assert_eq!(w.exact(), None);
        assert_eq!(w.lower, 1);
        assert!(value_set_with(&comm, &g, ValueSetOptions { samples: 0, ..opts }).is_err());
    }

    #[test]
    fn set_bytes() {
        let g = group(2, 3);
        let v = value_set(&parse_word("[x1,x2]").unwrap(), &g).unwrap();
        let back = SymSet::from_bytes(&g, &v.to_bytes()).unwrap();
        assert_eq!(back, v);
        assert!(back.is_conjugation_invariant());
        assert!(SymSet::from_bytes(&g, &v.to_bytes()[..8]).is_err());
    }
}

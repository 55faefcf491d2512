use rustc_hash::FxHashMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::{mul_into, ModMatrix};
use crate::words::Group;

/// Default cap on the number of elements a table may hold.
pub const DEFAULT_ELEMENT_BUDGET: usize = 10_000_000;

/// Complete list of the elements of `SL_n(Z/m)`, indexed by ordinal.
///
/// Ordinal 0 is the identity. Entries are stored row-major as `u16`, and
/// each element is looked up through an injective `u128` code of its entry
/// tuple.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    n: usize,
    m: u64,
    entries: Vec<u16>,
    index: FxHashMap<u128, u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
}

fn check_shape(n: usize, m: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    if m > u16::MAX as u64 {
        return Err(Error::Precondition(format!("modulus {m} too large for a table")));
    }
    let bits = (n * n) as f64 * (m as f64).log2();
    if bits > 127.0 {
        return Err(Error::Precondition(format!("entry tuple of SL_{n}(Z/{m}) does not fit the table key")));
    }
    Ok(())
}

/// `|SL_n(Z/m)| = m^{n^2-1} prod_{p | m} prod_{k=2}^{n} (1 - p^{-k})`.
pub fn sl_order(n: usize, m: u64) -> u128 {
    let mut order: u128 = 1;
    let mut rest = m;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            let mut pe: u128 = 1;
            while rest % p == 0 {
                rest /= p;
                pe *= p as u128;
            }
            // |SL_n(Z/p^e)| = p^{(e-1)(n^2-1)} |SL_n(F_p)|
            let pp = p as u128;
            let mut field: u128 = pp.pow((n * (n - 1) / 2) as u32);
            for k in 2..=n as u32 {
                field *= pp.pow(k) - 1;
            }
            order *= (pe / pp).pow((n * n - 1) as u32) * field;
        }
        p += 1;
    }
    order
}

/// Table of `SL_n(Z/m)` with the default element budget.
pub fn enumerate_group(n: usize, m: u64) -> Result<FiniteGroupTable> {
    enumerate_group_with_budget(n, m, DEFAULT_ELEMENT_BUDGET)
}

/// Breadth-first enumeration from the elementary matrices `e_ij(±1)`.
pub fn enumerate_group_with_budget(n: usize, m: u64, budget: usize) -> Result<FiniteGroupTable> {
    check_shape(n, m)?;
    let expected = sl_order(n, m);
    if expected > budget as u128 {
        return Err(Error::BudgetExceeded { what: "group table", needed: expected, budget: budget as u128 });
    }
    let mut table = FiniteGroupTable {
        n,
        m,
        entries: Vec::with_capacity(expected as usize * n * n),
        index: FxHashMap::with_capacity_and_hasher(expected as usize, Default::default()),
        inverses: Vec::new(),
        generators: Vec::new(),
    };
    table.insert(ModMatrix::identity(n, m).residues());

    let mut gens: Vec<ModMatrix> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for s in [1, -1] {
                    let mut data = vec![0i64; n * n];
                    for k in 0..n {
                        data[k * n + k] = 1;
                    }
                    data[i * n + j] = s;
                    gens.push(ModMatrix::from_signed(n, m, &data));
                }
            }
        }
    }
    // generator 2t+1 is the inverse of generator 2t
    let mut parent: Vec<(u32, u8)> = vec![(0, 0)];
    let mut queue = VecDeque::from([0u32]);
    let mut buf = vec![0u64; n * n];
    while let Some(x) = queue.pop_front() {
        let xs = table.residues_of(x);
        for (g, s) in gens.iter().enumerate() {
            mul_into(n, m, &xs, s.residues(), &mut buf);
            let code = table.code(&buf);
            if !table.index.contains_key(&code) {
                if table.len() >= budget {
                    return Err(Error::BudgetExceeded { what: "group table", needed: expected, budget: budget as u128 });
                }
                let y = table.insert(&buf);
                parent.push((x, g as u8));
                queue.push_back(y);
            }
        }
    }
    if table.len() as u128 != expected {
        return Err(Error::Internal(format!("enumerated {} elements, expected {expected}", table.len())));
    }
    table.generators = gens.iter().map(|g| table.index_of(g).expect("generator enumerated")).collect();

    // (x s)^{-1} = s^{-1} x^{-1}; parents precede children
    let mut inverses = vec![0u32; table.len()];
    for y in 1..table.len() {
        let (x, g) = parent[y];
        let s_inv = table.generators[(g ^ 1) as usize];
        inverses[y] = table.product(s_inv, inverses[x as usize]);
    }
    table.inverses = inverses;
    Ok(table)
}

impl FiniteGroupTable {
    fn code(&self, residues: &[u64]) -> u128 {
        residues.iter().fold(0u128, |acc, &r| acc * self.m as u128 + r as u128)
    }

    fn insert(&mut self, residues: &[u64]) -> u32 {
        let ord = self.len() as u32;
        self.entries.extend(residues.iter().map(|&r| r as u16));
        self.index.insert(self.code(residues), ord);
        ord
    }

    fn residues_of(&self, x: u32) -> Vec<u64> {
        let k = self.n * self.n;
        self.entries[x as usize * k..(x as usize + 1) * k].iter().map(|&r| r as u64).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len() / (self.n * self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ordinals of `e_ij(1), e_ij(-1)` for `i != j`, in row-major order.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element(&self, x: u32) -> ModMatrix {
        ModMatrix::from_residues(self.n, self.m, self.residues_of(x))
    }

    pub fn index_of(&self, g: &ModMatrix) -> Option<u32> {
        if g.n() != self.n || g.modulus() != self.m {
            return None;
        }
        self.index.get(&self.code(g.residues())).copied()
    }

    pub fn product(&self, a: u32, b: u32) -> u32 {
        let k = self.n * self.n;
        let mut ab = [0u64; 128];
        let mut bb = [0u64; 128];
        let mut out = [0u64; 128];
        for (d, &s) in ab.iter_mut().zip(&self.entries[a as usize * k..(a as usize + 1) * k]) {
            *d = s as u64;
        }
        for (d, &s) in bb.iter_mut().zip(&self.entries[b as usize * k..(b as usize + 1) * k]) {
            *d = s as u64;
        }
        mul_into(self.n, self.m, &ab[..k], &bb[..k], &mut out[..k]);
        self.index[&self.code(&out[..k])]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn conjugate(&self, x: u32, h: u32) -> u32 {
        self.product(self.product(self.inverse(h), x), h)
    }

    /// `n:u32, m:u64, count:u64`, then row-major entries as `u16`, all little endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 2 * self.entries.len());
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&self.m.to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for &e in &self.entries {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out
    }

    /// Rebuilds a table written by [`to_bytes`](Self::to_bytes), checking closure data.
    pub fn from_bytes(bytes: &[u8]) -> Result<FiniteGroupTable> {
        let bad = |msg: &str| Error::Precondition(format!("group table bytes: {msg}"));
        if bytes.len() < 20 {
            return Err(bad("truncated header"));
        }
        let n = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let m = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
        let count = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
        check_shape(n, m)?;
        let body = &bytes[20..];
        if body.len() != 2 * count * n * n {
            return Err(bad("length does not match the element count"));
        }
        let fresh = enumerate_group_with_budget(n, m, count.max(1))?;
        let mut table = FiniteGroupTable {
            n,
            m,
            entries: Vec::with_capacity(count * n * n),
            index: FxHashMap::with_capacity_and_hasher(count, Default::default()),
            inverses: Vec::new(),
            generators: Vec::new(),
        };
        for chunk in body.chunks(2 * n * n) {
            let res: Vec<u64> = chunk.chunks(2).map(|c| u16::from_le_bytes([c[0], c[1]]) as u64).collect();
            if res.iter().any(|&r| r >= m) || table.index.contains_key(&table.code(&res)) {
                return Err(bad("entry out of range or repeated"));
            }
            table.insert(&res);
        }
        if table.len() != fresh.len() || table.index_of(&ModMatrix::identity(n, m)) != Some(0) {
            return Err(bad("not a full table with the identity first"));
        }
        let remap = |x: u32| -> Result<u32> {
            table.index_of(&fresh.element(x)).ok_or_else(|| bad("element outside SL_n"))
        };
        let mut inverses = vec![0; count];
        for x in 0..count as u32 {
            let y = remap(x)?;
            inverses[y as usize] = remap(fresh.inverse(x))?;
        }
        table.generators = fresh.generators.iter().map(|&g| remap(g)).collect::<Result<_>>()?;
        table.inverses = inverses;
        Ok(table)
    }
}

impl Group for FiniteGroupTable {
    type Elem = u32;

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.product(*a, *b)
    }

    fn inv(&self, a: &u32) -> u32 {
        self.inverse(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(sl_order(2, 2), 6);
        assert_eq!(sl_order(2, 3), 24);
        assert_eq!(sl_order(3, 2), 168);
        assert_eq!(sl_order(3, 4), 43_008);
        assert_eq!(sl_order(2, 6), 144);
        for (n, m, size) in [(2, 2, 6), (2, 3, 24), (3, 2, 168), (2, 4, 48)] {
            let t = enumerate_group(n, m).unwrap();
            assert_eq!(t.len(), size);
            assert!(t.element(0).is_identity());
        }
    }

    #[test]
    fn products_and_inverses() {
        let t = enumerate_group(2, 5).unwrap();
        for x in 0..t.len() as u32 {
            assert_eq!(t.product(x, t.inverse(x)), 0);
            let y = (x * 7 + 3) % t.len() as u32;
            let direct = t.element(x).mul(&t.element(y)).unwrap();
            assert_eq!(t.index_of(&direct), Some(t.product(x, y)));
        }
    }

    #[test]
    fn budget_and_bytes() {
        assert!(matches!(enumerate_group_with_budget(3, 3, 1000), Err(Error::BudgetExceeded { .. })));
        let t = enumerate_group(2, 3).unwrap();
        let back = FiniteGroupTable::from_bytes(&t.to_bytes()).unwrap();
        assert_eq!(back.len(), 24);
        assert_eq!(back.to_bytes(), t.to_bytes());
        assert!(FiniteGroupTable::from_bytes(&t.to_bytes()[..30]).is_err());
    }
}

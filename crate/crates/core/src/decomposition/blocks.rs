use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{in_congruence, in_lower, in_upper, product, CongruenceLevel, IntMatrix};

use super::certificate::{ClassifiedFactor, FactorCertificate};

/// The four block-unitriangular matrices with `diag(g_1..g_m) = l1^-1 u1^-1 l2 u2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDiagFactors {
    pub l1: IntMatrix,
    pub u1: IntMatrix,
    pub l2: IntMatrix,
    pub u2: IntMatrix,
}

impl BlockDiagFactors {
    /// Regroups as `(l1^-1 l2) (l2^-1 u1^-1 l2) u2`, classes `L,Uc,U`.
    pub fn factors(&self) -> Result<Vec<ClassifiedFactor>> {
        let l2_inv = self.l2.inverse()?;
        let first = self.l1.inverse()?.mul_checked(&self.l2)?;
        let middle = ClassifiedFactor::conjugated(l2_inv, self.u1.inverse()?)?;
        Ok(vec![
            ClassifiedFactor::lower(first),
            middle,
            ClassifiedFactor::upper(self.u2.clone()),
        ])
    }

    pub fn certificate(&self, q: &CongruenceLevel) -> Result<FactorCertificate> {
        let factors = self.factors()?;
        let input = product(self.l1.n(), factors.iter().map(|f| &f.matrix))?;
        Ok(FactorCertificate::new(input, q.clone(), factors))
    }

    /// `l1^-1 u1^-1 l2 u2`.
    pub fn reconstruct(&self) -> Result<IntMatrix> {
        self.l1
            .inverse()?
            .mul_checked(&self.u1.inverse()?)?
            .mul_checked(&self.l2)?
            .mul_checked(&self.u2)
    }
}

fn check_blocks(blocks: &[IntMatrix]) -> Result<usize> {
    let s = blocks
        .first()
        .ok_or_else(|| Error::Precondition("at least one block is required".into()))?
        .n();
    if let Some(b) = blocks.iter().find(|b| b.n() != s) {
        return Err(Error::DimensionMismatch {
            left: s,
            right: b.n(),
        });
    }
    Ok(s)
}

/// Builds `l1, u1, l2, u2` for blocks in `SL_s(Z; q)` whose ordered product is `I`.
pub fn block_diag_factor(blocks: &[IntMatrix], q: &CongruenceLevel) -> Result<BlockDiagFactors> {
    let s = check_blocks(blocks)?;
    for (i, g) in blocks.iter().enumerate() {
        if !g.det().is_one() || !in_congruence(g, q) {
            return Err(Error::Precondition(format!(
                "block {} is not in SL_{s}(Z; {q})",
                i + 1
            )));
        }
    }
    if !product(s, blocks)?.is_identity() {
        return Err(Error::Precondition("the blocks do not multiply to the identity".into()));
    }
    let m = blocks.len();
    let n = s * m;
    let id = IntMatrix::identity(s);
    let mut l1 = IntMatrix::identity(n);
    let mut l2 = IntMatrix::identity(n);
    let mut u1 = IntMatrix::identity(n);
    let mut u2 = IntMatrix::identity(n);
    let mut prefix = IntMatrix::identity(s);
    for i in 0..m.saturating_sub(1) {
        prefix = &prefix * &blocks[i];
        let one_minus = id.sub(&prefix)?;
        l1.set_block((i + 1) * s, i * s, &blocks[i].inverse()?);
        l2.set_block((i + 1) * s, i * s, &id);
        u1.set_block(i * s, (i + 1) * s, &one_minus);
        u2.set_block(i * s, (i + 1) * s, &(&one_minus * &blocks[i + 1]));
    }
    Ok(BlockDiagFactors { l1, u1, l2, u2 })
}

/// Where the corner product lands in [`corner_factor_at`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `diag(g_1..g_m, I, ..., I)`.
    TopLeft,
    /// `diag(I, ..., I, g_1..g_m)`.
    BottomRight,
}

/// Certificate `L,Uc,U,L` for `diag(g_1..g_m, I_3, ..., I_3)` of size `3m`,
/// each `g_i = u_i l_i` given as an explicit pair.
pub fn corner_factor(pairs: &[(IntMatrix, IntMatrix)], q: &CongruenceLevel) -> Result<FactorCertificate> {
    let s = pairs.first().map(|p| p.0.n()).unwrap_or(3);
    corner_factor_at(s * pairs.len(), pairs, q, Corner::TopLeft)
}

/// [`corner_factor`] for a product placed in either corner of an `n x n`
/// matrix; the `s*m` block structure is padded with a leading identity when
/// `n` is larger.
pub fn corner_factor_at(
    n: usize,
    pairs: &[(IntMatrix, IntMatrix)],
    q: &CongruenceLevel,
    corner: Corner,
) -> Result<FactorCertificate> {
    let m = pairs.len();
    if m == 0 {
        return Err(Error::Precondition("at least one block is required".into()));
    }
    let s = pairs[0].0.n();
    for (i, (u, l)) in pairs.iter().enumerate() {
        if u.n() != s || l.n() != s {
            return Err(Error::DimensionMismatch { left: s, right: u.n().max(l.n()) });
        }
        if !in_upper(u, q) || !in_lower(l, q) {
            return Err(Error::Precondition(format!(
                "block {} is not presented as a U_{s}(Z; {q}) L_{s}(Z; {q}) pair",
                i + 1
            )));
        }
    }
    let width = s * m;
    if n < width || (corner == Corner::TopLeft && n != width) {
        return Err(Error::Precondition(format!(
            "{m} blocks of size {s} do not fit the requested {n}x{n} layout"
        )));
    }
    let g: Vec<IntMatrix> = pairs.iter().map(|(u, l)| u * l).collect();
    let prod = product(s, &g)?;
    // h lists the blocks in the order that makes g h^-1 multiply to I
    let order: Vec<usize> = match corner {
        Corner::TopLeft => (0..m).rev().collect(),
        Corner::BottomRight => (0..m - 1).rev().chain(std::iter::once(m - 1)).collect(),
    };
    let hu = IntMatrix::block_diag(&order.iter().map(|&i| pairs[i].0.clone()).collect::<Vec<_>>());
    let hl = IntMatrix::block_diag(&order.iter().map(|&i| pairs[i].1.clone()).collect::<Vec<_>>());
    let corner_slot = match corner {
        Corner::TopLeft => 0,
        Corner::BottomRight => m - 1,
    };
    let mut reduced = Vec::with_capacity(m);
    for (slot, &i) in order.iter().enumerate() {
        let inv = g[i].inverse()?;
        reduced.push(if slot == corner_slot { &prod * &inv } else { inv });
    }
    let parts = block_diag_factor(&reduced, q)?.factors()?;
    let off = n - width;
    let pad = |x: &IntMatrix| x.embed(n, off);
    let lower0 = pad(&parts[0].matrix);
    let w = parts[1].witness.as_ref().expect("conjugated factor carries a witness");
    let middle = ClassifiedFactor::conjugated(pad(&w.h), pad(&w.k))?;
    let upper = pad(&(&parts[2].matrix * &hu));
    let lower1 = pad(&hl);
    let factors = vec![
        ClassifiedFactor::lower(lower0),
        middle,
        ClassifiedFactor::upper(upper),
        ClassifiedFactor::lower(lower1),
    ];
    let input = match corner {
        Corner::TopLeft => prod.embed(n, 0),
        Corner::BottomRight => prod.embed(n, n - s),
    };
    Ok(FactorCertificate::new(input, q.clone(), factors))
}

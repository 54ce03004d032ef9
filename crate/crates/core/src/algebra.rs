//! Shapes of finite triangular algebras and their matrix-unit systems.
//!
//! A shape `[n1, ..., nr]` stands for the direct sum of upper-triangular
//! algebras `T_{n1} ⊕ ... ⊕ T_{nr}`. Only the triangular unit system is
//! stored; scalar coefficients never appear. Blocks, rows and columns are
//! all 1-based in the public API.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// One matrix unit `e_{ij}` of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl MatrixUnit {
    pub const fn new(block: usize, row: usize, col: usize) -> Self {
        MatrixUnit { block, row, col }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }

    /// Domain projection `d(e) = e_{jj}`.
    pub fn domain(&self) -> MatrixUnit {
        MatrixUnit::new(self.block, self.col, self.col)
    }

    /// Range projection `r(e) = e_{ii}`.
    pub fn range(&self) -> MatrixUnit {
        MatrixUnit::new(self.block, self.row, self.row)
    }

    /// The order `e ≤ₚ f`: same block, `e.col ≤ f.col` and `e.row ≥ f.row`.
    pub fn leq_p(&self, other: &MatrixUnit) -> bool {
        self.block == other.block && self.col <= other.col && self.row >= other.row
    }

    /// Matrix-unit multiplication `e_{ij} e_{jk} = e_{ik}`; `None` when the
    /// product vanishes.
    pub fn product(&self, other: &MatrixUnit) -> Option<MatrixUnit> {
        (self.block == other.block && self.col == other.row && self.row <= other.col)
            .then(|| MatrixUnit::new(self.block, self.row, other.col))
    }
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.block, self.row, self.col)
    }
}

/// One level `A_k = T_{n1} ⊕ ... ⊕ T_{nr}` of a tower.
///
/// Cheap to clone; the unit table is shared.
#[derive(Debug, Clone)]
pub struct AlgebraShape {
    inner: Arc<ShapeInner>,
}

#[derive(Debug)]
struct ShapeInner {
    blocks: Vec<usize>,
    level: usize,
    offsets: Vec<usize>,
    units: Vec<MatrixUnit>,
}

impl PartialEq for AlgebraShape {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.blocks == other.inner.blocks && self.inner.level == other.inner.level)
    }
}

impl Eq for AlgebraShape {}

impl Hash for AlgebraShape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.blocks.hash(state);
        self.inner.level.hash(state);
    }
}

impl AlgebraShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        Self::with_level(blocks, 0)
    }

    pub fn with_level(blocks: Vec<usize>, level: usize) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if let Some(pos) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {} has size 0", pos + 1)));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut units = Vec::new();
        for (b, &n) in blocks.iter().enumerate() {
            offsets.push(units.len());
            for i in 1..=n {
                for j in i..=n {
                    units.push(MatrixUnit::new(b + 1, i, j));
                }
            }
        }
        Ok(AlgebraShape {
            inner: Arc::new(ShapeInner {
                blocks,
                level,
                offsets,
                units,
            }),
        })
    }

    /// Single block `T_n`.
    pub fn triangular(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.inner.blocks
    }

    pub fn level(&self) -> usize {
        self.inner.level
    }

    pub fn block_count(&self) -> usize {
        self.inner.blocks.len()
    }

    /// Size of 1-based block `b`.
    pub fn block_size(&self, b: usize) -> usize {
        self.inner.blocks[b - 1]
    }

    /// Sum of the block sizes (number of diagonal positions).
    pub fn dimension(&self) -> usize {
        self.inner.blocks.iter().sum()
    }

    pub fn unit_count(&self) -> usize {
        self.inner.units.len()
    }

    /// Units in canonical order: by block, then row, then column.
    pub fn units(&self) -> &[MatrixUnit] {
        &self.inner.units
    }

    pub fn unit_at(&self, index: usize) -> MatrixUnit {
        self.inner.units[index]
    }

    pub fn contains_unit(&self, e: &MatrixUnit) -> bool {
        e.block >= 1
            && e.block <= self.inner.blocks.len()
            && e.row >= 1
            && e.row <= e.col
            && e.col <= self.inner.blocks[e.block - 1]
    }

    pub fn check_unit(&self, e: &MatrixUnit) -> Result<()> {
        if self.contains_unit(e) {
            Ok(())
        } else {
            Err(Error::UnitOutOfRange {
                unit: *e,
                shape: self.inner.blocks.clone(),
            })
        }
    }

    /// Position of `e` in the canonical unit order.
    pub fn index_of(&self, e: &MatrixUnit) -> Result<usize> {
        self.check_unit(e)?;
        Ok(self.index_unchecked(e))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, e: &MatrixUnit) -> usize {
        let n = self.inner.blocks[e.block - 1];
        // rows 1..i-1 hold n, n-1, ..., n-i+2 units
        let r = e.row - 1;
        let before = r * n - r * r.saturating_sub(1) / 2;
        self.inner.offsets[e.block - 1] + before + (e.col - e.row)
    }

    pub fn diagonal_units(&self) -> impl Iterator<Item = MatrixUnit> + '_ {
        self.inner
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| (1..=n).map(move |i| MatrixUnit::new(b + 1, i, i)))
    }

    /// `e ≤ₚ f` for two units of this shape.
    pub fn leq_p(&self, e: &MatrixUnit, f: &MatrixUnit) -> Result<bool> {
        self.check_unit(e)?;
        self.check_unit(f)?;
        Ok(e.leq_p(f))
    }

    /// Peters–Poon–Wagner order on diagonal units: `p ⪯ q` iff there is a
    /// unit with range `p` and domain `q`, i.e. `e_{p.row, q.row}` is upper
    /// triangular in a common block.
    pub fn ppw_leq(&self, p: &MatrixUnit, q: &MatrixUnit) -> Result<bool> {
        self.check_unit(p)?;
        self.check_unit(q)?;
        for u in [p, q] {
            if !u.is_diagonal() {
                return Err(Error::NotDiagonal(*u));
            }
        }
        Ok(ppw_witness(p, q).is_some())
    }

    pub fn unit_product(&self, e: &MatrixUnit, f: &MatrixUnit) -> Result<Option<MatrixUnit>> {
        self.check_unit(e)?;
        self.check_unit(f)?;
        Ok(e.product(f))
    }

    pub(crate) fn same_blocks(&self, other: &AlgebraShape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.inner.blocks.clone(),
                right: other.inner.blocks.clone(),
            })
        }
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.inner.blocks.iter().map(|n| format!("T{n}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// The normalizer witness `w = e_{p.row, q.row}` with `r(w) = p`, `d(w) = q`.
pub fn ppw_witness(p: &MatrixUnit, q: &MatrixUnit) -> Option<MatrixUnit> {
    (p.block == q.block && p.row <= q.row).then(|| MatrixUnit::new(p.block, p.row, q.row))
}

/// Parses `"2,3"` or `"4"` into a block-size list.
pub fn parse_blocks(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidShape(format!("cannot parse block size {part:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(b: usize, i: usize, j: usize) -> MatrixUnit {
        MatrixUnit::new(b, i, j)
    }

    #[test]
    fn enumerate_units_counts_and_order() {
        let t2 = AlgebraShape::triangular(2).unwrap();
        assert_eq!(t2.units(), &[u(1, 1, 1), u(1, 1, 2), u(1, 2, 2)]);
        assert_eq!(AlgebraShape::new(vec![2, 3]).unwrap().unit_count(), 9);
        assert_eq!(AlgebraShape::triangular(1).unwrap().unit_count(), 1);
    }

    #[test]
    fn index_round_trips() {
        let s = AlgebraShape::new(vec![3, 1, 5]).unwrap();
        for (k, e) in s.units().iter().enumerate() {
            assert_eq!(s.index_of(e).unwrap(), k);
        }
    }

    #[test]
    fn invalid_shapes() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
    }

    #[test]
    fn leq_p_examples() {
        let s = AlgebraShape::new(vec![2, 2]).unwrap();
        assert!(s.leq_p(&u(1, 2, 2), &u(1, 1, 2)).unwrap());
        assert!(!s.leq_p(&u(1, 1, 1), &u(1, 2, 2)).unwrap());
        assert!(!s.leq_p(&u(1, 1, 1), &u(2, 1, 2)).unwrap());
        assert!(s.leq_p(&u(1, 1, 1), &u(3, 1, 1)).is_err());
    }

    #[test]
    fn ppw_examples() {
        let s = AlgebraShape::new(vec![2, 2]).unwrap();
        assert!(s.ppw_leq(&u(1, 1, 1), &u(1, 2, 2)).unwrap());
        assert!(!s.ppw_leq(&u(1, 2, 2), &u(1, 1, 1)).unwrap());
        assert!(!s.ppw_leq(&u(1, 1, 1), &u(2, 2, 2)).unwrap());
        assert_eq!(
            s.ppw_leq(&u(1, 1, 2), &u(1, 2, 2)),
            Err(Error::NotDiagonal(u(1, 1, 2)))
        );
        assert_eq!(ppw_witness(&u(1, 1, 1), &u(1, 2, 2)), Some(u(1, 1, 2)));
    }

    #[test]
    fn product_examples() {
        assert_eq!(u(1, 1, 2).product(&u(1, 2, 3)), Some(u(1, 1, 3)));
        assert_eq!(u(1, 1, 2).product(&u(1, 1, 3)), None);
        assert_eq!(u(1, 2, 2).product(&u(1, 2, 3)), Some(u(1, 2, 3)));
        assert_eq!(u(1, 1, 1).product(&u(2, 1, 1)), None);
    }

    fn small_shapes() -> Vec<AlgebraShape> {
        [
            vec![1],
            vec![2],
            vec![3],
            vec![4],
            vec![1, 2],
            vec![2, 2],
            vec![1, 3],
            vec![1, 1, 2],
        ]
        .into_iter()
        .map(|b| AlgebraShape::new(b).unwrap())
        .collect()
    }

    #[test]
    fn leq_p_is_a_partial_order() {
        for s in small_shapes() {
            let us = s.units();
            for a in us {
                assert!(a.leq_p(a));
                for b in us {
                    if a.leq_p(b) && b.leq_p(a) {
                        assert_eq!(a, b);
                    }
                    for c in us {
                        if a.leq_p(b) && b.leq_p(c) {
                            assert!(a.leq_p(c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn leq_p_matches_ppw_formulation() {
        for s in small_shapes() {
            for e in s.units() {
                for f in s.units() {
                    let via_ppw = s.ppw_leq(&e.domain(), &f.domain()).unwrap()
                        && s.ppw_leq(&f.range(), &e.range()).unwrap();
                    assert_eq!(e.leq_p(f), via_ppw, "{e} vs {f}");
                }
            }
        }
    }

    #[test]
    fn minimal_elements_are_diagonal() {
        for s in small_shapes() {
            for e in s.units() {
                let minimal = s.units().iter().all(|f| !f.leq_p(e) || f == e);
                assert_eq!(minimal, e.is_diagonal(), "{e}");
            }
        }
    }

    #[test]
    fn product_is_associative() {
        for s in small_shapes() {
            let us = s.units();
            for a in us {
                for b in us {
                    for c in us {
                        let left = a.product(b).and_then(|ab| ab.product(c));
                        let right = b.product(c).and_then(|bc| a.product(&bc));
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }
}

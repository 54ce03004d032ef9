//! Ideals as up-closed sets of matrix units.
//!
//! A two-sided ideal of `T_{n1} ⊕ ... ⊕ T_{nr}` is spanned by the matrix units
//! it contains, and a set of units spans an ideal exactly when it is closed
//! upward in `≤ₚ`. Membership is a dense bit vector over the canonical unit
//! order of the shape.

use std::fmt;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    shape: AlgebraShape,
    members: BitSet,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("shape", &self.shape.blocks())
            .field("excluded", &self.excluded_units())
            .finish()
    }
}

/// Indices of the units covering `e` in `≤ₚ`: one row up, one column right.
pub(crate) fn upper_covers(shape: &AlgebraShape, e: &MatrixUnit) -> impl Iterator<Item = usize> {
    let n = shape.block_size(e.block);
    let up = (e.row > 1).then(|| MatrixUnit::new(e.block, e.row - 1, e.col));
    let right = (e.col < n).then(|| MatrixUnit::new(e.block, e.row, e.col + 1));
    let shape = shape.clone();
    up.into_iter()
        .chain(right)
        .map(move |u| shape.index_unchecked(&u))
}

/// First violation of up-closure in `members`, if any.
pub(crate) fn up_closure_violation(
    shape: &AlgebraShape,
    members: &BitSet,
) -> Option<(MatrixUnit, MatrixUnit)> {
    for k in members.iter() {
        let e = shape.unit_at(k);
        for c in upper_covers(shape, &e) {
            if !members.contains(c) {
                return Some((e, shape.unit_at(c)));
            }
        }
    }
    None
}

impl Ideal {
    pub fn zero(shape: &AlgebraShape) -> Ideal {
        Ideal {
            shape: shape.clone(),
            members: BitSet::new(shape.unit_count()),
        }
    }

    /// The improper ideal: the whole algebra.
    pub fn full(shape: &AlgebraShape) -> Ideal {
        Ideal {
            shape: shape.clone(),
            members: BitSet::full(shape.unit_count()),
        }
    }

    /// Wraps a membership vector, rejecting sets that are not up-closed.
    pub fn from_members(shape: &AlgebraShape, members: BitSet) -> Result<Ideal> {
        if members.len() != shape.unit_count() {
            return Err(Error::SizeMismatch(format!(
                "membership vector has {} bits, shape has {} units",
                members.len(),
                shape.unit_count()
            )));
        }
        if let Some((e, f)) = up_closure_violation(shape, &members) {
            return Err(Error::NotUpClosed(e, f));
        }
        Ok(Ideal {
            shape: shape.clone(),
            members,
        })
    }

    pub(crate) fn from_members_unchecked(shape: &AlgebraShape, members: BitSet) -> Ideal {
        debug_assert!(up_closure_violation(shape, &members).is_none());
        Ideal {
            shape: shape.clone(),
            members,
        }
    }

    /// Exactly the given units; errors unless they form an up-closed set.
    pub fn from_units<'a, I>(shape: &AlgebraShape, units: I) -> Result<Ideal>
    where
        I: IntoIterator<Item = &'a MatrixUnit>,
    {
        let mut members = BitSet::new(shape.unit_count());
        for e in units {
            members.insert(shape.index_of(e)?);
        }
        Ideal::from_members(shape, members)
    }

    /// The ideal whose complement is exactly `units`; errors unless that
    /// complement is down-closed.
    pub fn excluding<'a, I>(shape: &AlgebraShape, units: I) -> Result<Ideal>
    where
        I: IntoIterator<Item = &'a MatrixUnit>,
    {
        let mut members = BitSet::full(shape.unit_count());
        for e in units {
            members.remove(shape.index_of(e)?);
        }
        Ideal::from_members(shape, members)
    }

    /// Smallest ideal containing `units`: their up-closure under `≤ₚ`.
    pub fn generated_by<'a, I>(shape: &AlgebraShape, units: I) -> Result<Ideal>
    where
        I: IntoIterator<Item = &'a MatrixUnit>,
    {
        let mut members = BitSet::new(shape.unit_count());
        for e in units {
            shape.check_unit(e)?;
            let n = shape.block_size(e.block);
            for i in 1..=e.row {
                for j in e.col..=n {
                    members.insert(shape.index_unchecked(&MatrixUnit::new(e.block, i, j)));
                }
            }
        }
        Ok(Ideal::from_members_unchecked(shape, members))
    }

    /// `I(e)`: the largest ideal not containing `e`, i.e. `{ f : f ≰ₚ e }`.
    pub fn largest_excluding(shape: &AlgebraShape, e: &MatrixUnit) -> Result<Ideal> {
        shape.check_unit(e)?;
        let mut members = BitSet::full(shape.unit_count());
        for i in e.row..=e.col {
            for j in i..=e.col {
                members.remove(shape.index_unchecked(&MatrixUnit::new(e.block, i, j)));
            }
        }
        Ok(Ideal::from_members_unchecked(shape, members))
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, e: &MatrixUnit) -> bool {
        self.shape.contains_unit(e) && self.members.contains(self.shape.index_unchecked(e))
    }

    pub fn member_units(&self) -> Vec<MatrixUnit> {
        self.members.iter().map(|k| self.shape.unit_at(k)).collect()
    }

    /// Units not in the ideal, in canonical order.
    pub fn excluded_units(&self) -> Vec<MatrixUnit> {
        self.members
            .complement()
            .iter()
            .map(|k| self.shape.unit_at(k))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_zero(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_proper(&self) -> bool {
        !self.members.is_full()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.is_subset(self)
    }

    pub fn meet(&self, other: &Ideal) -> Result<Ideal> {
        self.shape.same_blocks(&other.shape)?;
        Ok(Ideal::from_members_unchecked(
            &self.shape,
            self.members.intersection(&other.members),
        ))
    }

    /// Union of two up-sets is up-closed, so the join is the plain union.
    pub fn join(&self, other: &Ideal) -> Result<Ideal> {
        self.shape.same_blocks(&other.shape)?;
        Ok(Ideal::from_members_unchecked(
            &self.shape,
            self.members.union(&other.members),
        ))
    }

    /// `J·K = { e_{ik} : e_{ij} ∈ J, e_{jk} ∈ K }`.
    ///
    /// Computed as the raw composition set; the result is checked for
    /// up-closure rather than closed up after the fact.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.shape.same_blocks(&other.shape)?;
        let shape = &self.shape;
        let mut members = BitSet::new(shape.unit_count());
        for a in self.members.iter() {
            let a = shape.unit_at(a);
            let n = shape.block_size(a.block);
            for k in a.col..=n {
                let b = MatrixUnit::new(a.block, a.col, k);
                if other.members.contains(shape.index_unchecked(&b)) {
                    members.insert(shape.index_unchecked(&MatrixUnit::new(a.block, a.row, k)));
                }
            }
        }
        if let Some((e, f)) = up_closure_violation(shape, &members) {
            panic!("product of ideals is not up-closed: {e} present, {f} missing");
        }
        Ok(Ideal {
            shape: shape.clone(),
            members,
        })
    }

    /// Diagonal units outside the ideal.
    pub fn excluded_diagonals(&self) -> Vec<MatrixUnit> {
        self.shape
            .diagonal_units()
            .filter(|q| !self.contains(q))
            .collect()
    }

    pub fn profile(&self) -> StaircaseProfile {
        let heights = self
            .shape
            .blocks()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                (1..=n)
                    .map(|j| {
                        (1..=j)
                            .take_while(|&i| self.contains(&MatrixUnit::new(b + 1, i, j)))
                            .count()
                    })
                    .collect()
            })
            .collect();
        StaircaseProfile { heights }
    }

    /// Renders the ideal as a matrix per block: `*` member, `0` excluded.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (b, &n) in self.shape.blocks().iter().enumerate() {
            if b > 0 {
                out.push('\n');
            }
            for i in 1..=n {
                let row: Vec<&str> = (1..=n)
                    .map(|j| {
                        if j < i {
                            "."
                        } else if self.contains(&MatrixUnit::new(b + 1, i, j)) {
                            "*"
                        } else {
                            "0"
                        }
                    })
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Per-block column heights: column `j` of the ideal holds rows `1..=m(j)`,
/// with `0 ≤ m(j) ≤ j` and `m` nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StaircaseProfile {
    pub heights: Vec<Vec<usize>>,
}

impl StaircaseProfile {
    pub fn is_valid_for(&self, shape: &AlgebraShape) -> bool {
        self.heights.len() == shape.block_count()
            && self.heights.iter().zip(shape.blocks()).all(|(m, &n)| {
                m.len() == n
                    && m.iter().enumerate().all(|(j, &h)| h <= j + 1)
                    && m.windows(2).all(|w| w[0] <= w[1])
            })
    }

    pub fn to_ideal(&self, shape: &AlgebraShape) -> Result<Ideal> {
        if !self.is_valid_for(shape) {
            return Err(Error::InvalidShape(format!(
                "profile {:?} does not fit shape {:?}",
                self.heights,
                shape.blocks()
            )));
        }
        let mut members = BitSet::new(shape.unit_count());
        for (b, m) in self.heights.iter().enumerate() {
            for (j, &h) in m.iter().enumerate() {
                for i in 1..=h {
                    members.insert(shape.index_unchecked(&MatrixUnit::new(b + 1, i, j + 1)));
                }
            }
        }
        Ok(Ideal::from_members_unchecked(shape, members))
    }
}

/// All valid height functions for one block of size `n`.
pub fn block_profiles(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = prefix.len() + 1;
        if j > n {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for h in lo..=j {
            prefix.push(h);
            extend(n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, &mut Vec::with_capacity(n), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(b: usize, i: usize, j: usize) -> MatrixUnit {
        MatrixUnit::new(b, i, j)
    }

    fn t(n: usize) -> AlgebraShape {
        AlgebraShape::triangular(n).unwrap()
    }

    #[test]
    fn generated_by_examples() {
        let t4 = t(4);
        let i = Ideal::generated_by(&t4, &[u(1, 2, 3)]).unwrap();
        let mut got = i.member_units();
        got.sort();
        assert_eq!(got, vec![u(1, 1, 3), u(1, 1, 4), u(1, 2, 3), u(1, 2, 4)]);
        assert!(Ideal::generated_by(&t4, &[]).unwrap().is_zero());
        let t2 = t(2);
        let diag: Vec<_> = t2.diagonal_units().collect();
        assert!(!Ideal::generated_by(&t2, &diag).unwrap().is_proper());
    }

    #[test]
    fn generated_by_is_idempotent() {
        let s = AlgebraShape::new(vec![3, 2]).unwrap();
        for e in s.units() {
            let i = Ideal::generated_by(&s, &[*e]).unwrap();
            let again = Ideal::generated_by(&s, &i.member_units()).unwrap();
            assert_eq!(i, again);
        }
    }

    #[test]
    fn largest_excluding_examples() {
        let t4 = t(4);
        let i = Ideal::largest_excluding(&t4, &u(1, 2, 3)).unwrap();
        assert_eq!(i.excluded_units(), vec![u(1, 2, 2), u(1, 2, 3), u(1, 3, 3)]);
        assert!(Ideal::largest_excluding(&t4, &u(1, 1, 4)).unwrap().is_zero());
        let t2 = t(2);
        let i = Ideal::largest_excluding(&t2, &u(1, 1, 1)).unwrap();
        assert_eq!(i.member_units(), vec![u(1, 1, 2), u(1, 2, 2)]);
    }

    #[test]
    fn from_members_rejects_non_up_closed() {
        let t2 = t(2);
        let err = Ideal::from_units(&t2, &[u(1, 2, 2)]).unwrap_err();
        assert_eq!(err, Error::NotUpClosed(u(1, 2, 2), u(1, 1, 2)));
    }

    #[test]
    fn meet_of_two_diagonal_complements() {
        // Brute force: members of the meet are exactly the units in both.
        let t4 = t(4);
        let a = Ideal::largest_excluding(&t4, &u(1, 2, 2)).unwrap();
        let b = Ideal::largest_excluding(&t4, &u(1, 3, 3)).unwrap();
        let m = a.meet(&b).unwrap();
        let expected: Vec<_> = t4
            .units()
            .iter()
            .filter(|e| a.contains(e) && b.contains(e))
            .copied()
            .collect();
        assert_eq!(m.member_units(), expected);
        assert_eq!(m.excluded_units(), vec![u(1, 2, 2), u(1, 3, 3)]);
    }

    #[test]
    fn join_with_zero_is_identity() {
        let s = AlgebraShape::new(vec![2, 3]).unwrap();
        for e in s.units() {
            let j = Ideal::largest_excluding(&s, e).unwrap();
            assert_eq!(j.join(&Ideal::zero(&s)).unwrap(), j);
        }
    }

    #[test]
    fn product_of_strict_upper_part_of_t2_is_zero() {
        let t2 = t(2);
        let j = Ideal::generated_by(&t2, &[u(1, 1, 2)]).unwrap();
        // exhaust all unit products between members
        let brute = j
            .member_units()
            .iter()
            .flat_map(|a| j.member_units().into_iter().filter_map(move |b| a.product(&b)))
            .count();
        assert_eq!(brute, 0);
        assert!(j.product(&j).unwrap().is_zero());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Ideal::zero(&t(2));
        let b = Ideal::zero(&t(3));
        assert!(matches!(a.meet(&b), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(a.product(&b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn block_profile_counts_are_catalan() {
        let counts: Vec<_> = (1..=6).map(|n| block_profiles(n).len()).collect();
        assert_eq!(counts, vec![2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn profile_round_trip() {
        let s = AlgebraShape::new(vec![3, 2]).unwrap();
        for e in s.units() {
            let i = Ideal::largest_excluding(&s, e).unwrap();
            let p = i.profile();
            assert!(p.is_valid_for(&s));
            assert_eq!(p.to_ideal(&s).unwrap(), i);
        }
    }

    #[test]
    fn render_matches_display_convention() {
        let i = Ideal::largest_excluding(&t(4), &u(1, 2, 3)).unwrap();
        assert_eq!(i.render(), "* * * *\n. 0 0 *\n. . 0 *\n. . . *\n");
    }
}

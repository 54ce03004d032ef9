//! The complete lattice of ideals of a shape, and ideal classification.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ideal::{block_profiles, upper_covers, Ideal, StaircaseProfile};

/// Size limits for [`enumerate_ideals_with`].
#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    /// Shapes with at most this many units are enumerated by filtering all
    /// `2^U` unit subsets; larger shapes use staircase-profile products.
    pub subset_max_units: usize,
    /// Refuse to materialize lattices with more ideals than this.
    pub max_ideals: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            subset_max_units: 20,
            max_ideals: 1 << 21,
        }
    }
}

/// Hard ceiling for the subset filter regardless of configuration.
pub const SUBSET_FILTER_CEILING: usize = 26;

/// Every up-closed subset of the units, found by testing all `2^U` subsets.
pub fn ideals_by_subset_filter(shape: &AlgebraShape) -> Result<Vec<Ideal>> {
    let u = shape.unit_count();
    if u > SUBSET_FILTER_CEILING {
        return Err(Error::CapExceeded(format!(
            "subset filter over {u} units exceeds the {SUBSET_FILTER_CEILING}-unit ceiling"
        )));
    }
    let covers: Vec<u64> = shape
        .units()
        .iter()
        .map(|e| upper_covers(shape, e).fold(0u64, |m, c| m | (1 << c)))
        .collect();
    let mut out = Vec::new();
    for s in 0u64..(1u64 << u) {
        let mut rest = s;
        let mut closed = true;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if covers[k] & !s != 0 {
                closed = false;
                break;
            }
        }
        if closed {
            out.push(Ideal::from_members_unchecked(shape, BitSet::from_mask(u, s)));
        }
    }
    Ok(out)
}

/// Number of ideals, as the product of per-block staircase counts
/// `C_{n+1}`; saturates at `u128::MAX`.
pub fn ideal_count(shape: &AlgebraShape) -> u128 {
    shape
        .blocks()
        .iter()
        .map(|&n| catalan(n + 1))
        .fold(1u128, |acc, c| acc.saturating_mul(c))
}

fn catalan(n: usize) -> u128 {
    // C_{k+1} = C_k · 2(2k+1) / (k+2), exact at every step
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        match c.checked_mul(2 * (2 * k + 1)) {
            Some(v) => c = v / (k + 2),
            None => return u128::MAX,
        }
    }
    c
}

/// Every ideal, as the product of per-block staircase profiles.
pub fn ideals_by_profiles(shape: &AlgebraShape) -> Vec<Ideal> {
    let per_block: Vec<Vec<Vec<usize>>> = shape.blocks().iter().map(|&n| block_profiles(n)).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_block.len()];
    loop {
        let profile = StaircaseProfile {
            heights: choice
                .iter()
                .zip(&per_block)
                .map(|(&c, ps)| ps[c].clone())
                .collect(),
        };
        out.push(profile.to_ideal(shape).expect("generated profiles are valid"));
        // odometer over block choices
        let mut b = per_block.len();
        loop {
            if b == 0 {
                return out;
            }
            b -= 1;
            choice[b] += 1;
            if choice[b] < per_block[b].len() {
                break;
            }
            choice[b] = 0;
        }
    }
}

pub fn enumerate_ideals(shape: &AlgebraShape) -> Result<IdealLattice> {
    enumerate_ideals_with(shape, EnumerationLimits::default())
}

pub fn enumerate_ideals_with(shape: &AlgebraShape, limits: EnumerationLimits) -> Result<IdealLattice> {
    let count = ideal_count(shape);
    if count > limits.max_ideals as u128 {
        return Err(Error::CapExceeded(format!(
            "shape {:?} has {count} ideals, limit is {}",
            shape.blocks(),
            limits.max_ideals
        )));
    }
    let ideals = if shape.unit_count() <= limits.subset_max_units.min(SUBSET_FILTER_CEILING) {
        ideals_by_subset_filter(shape)?
    } else {
        ideals_by_profiles(shape)
    };
    Ok(IdealLattice::build(shape, Ideal::zero(shape), ideals))
}

/// The `I(e)` for every unit, in canonical unit order.
pub fn meet_irreducibles(shape: &AlgebraShape) -> Vec<Ideal> {
    shape
        .units()
        .iter()
        .map(|e| Ideal::largest_excluding(shape, e).expect("unit of shape"))
        .collect()
}

/// Ideal-type flags. Every flag is false for the improper ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Classification {
    pub prime: bool,
    pub k4: bool,
    pub meet_irreducible: bool,
    pub maximal: bool,
    pub primary: bool,
}

/// A set of ideals closed under meet and join, with a distinguished bottom
/// `base`. The full lattice of a shape has `base = 0`; an interval `[I, ⊤]`
/// models the ideal lattice of the quotient by `I`, with products taken
/// modulo `I`.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    shape: AlgebraShape,
    base: Ideal,
    ideals: Vec<Ideal>,
    index: HashMap<BitSet, usize>,
    upper_covers: Vec<Vec<usize>>,
}

impl IdealLattice {
    fn build(shape: &AlgebraShape, base: Ideal, mut ideals: Vec<Ideal>) -> IdealLattice {
        ideals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members().cmp(b.members())));
        let index: HashMap<BitSet, usize> = ideals
            .iter()
            .enumerate()
            .map(|(k, i)| (i.members().clone(), k))
            .collect();
        let upper_covers = ideals
            .iter()
            .map(|ideal| {
                let mut covers: Vec<usize> = ideal
                    .members()
                    .complement()
                    .iter()
                    .filter_map(|k| {
                        let mut m = ideal.members().clone();
                        m.insert(k);
                        index.get(&m).copied()
                    })
                    .collect();
                covers.sort_unstable();
                covers
            })
            .collect();
        IdealLattice {
            shape: shape.clone(),
            base,
            ideals,
            index,
            upper_covers,
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// The bottom element.
    pub fn base(&self) -> &Ideal {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Ideals sorted by size, then by membership vector.
    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn get(&self, k: usize) -> &Ideal {
        &self.ideals[k]
    }

    pub fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        if ideal.shape() != &self.shape {
            return None;
        }
        self.index.get(ideal.members()).copied()
    }

    pub fn top_index(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn top(&self) -> &Ideal {
        &self.ideals[self.top_index()]
    }

    pub fn upper_covers(&self, k: usize) -> &[usize] {
        &self.upper_covers[k]
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.upper_covers
            .iter()
            .enumerate()
            .flat_map(|(k, ups)| ups.iter().map(move |&u| (k, u)))
            .collect()
    }

    /// Product inside the lattice: `J·K ∨ base`, i.e. the product of the
    /// quotient ideals lifted back.
    pub fn product(&self, j: &Ideal, k: &Ideal) -> Result<Ideal> {
        j.product(k)?.join(&self.base)
    }

    /// Maximal elements: proper ideals whose only upper cover is the top.
    pub fn maximal_indices(&self) -> Vec<usize> {
        let top = self.top_index();
        (0..self.len())
            .filter(|&k| k != top && self.upper_covers[k] == [top])
            .collect()
    }

    /// Classifies one element, testing each definition over all pairs of
    /// lattice elements.
    pub fn classify(&self, ideal: &Ideal) -> Result<Classification> {
        let k = self.index_of(ideal).ok_or(Error::NotInLattice)?;
        let maximal = self.maximal_indices();
        Ok(self.classify_at(k, &maximal, &mut |a, b| {
            self.product(&self.ideals[a], &self.ideals[b])
                .expect("same shape")
                .members()
                .clone()
        }))
    }

    /// Classifies every element; products are computed once per pair.
    pub fn classify_all(&self) -> Vec<Classification> {
        let n = self.len();
        let mut products: Vec<Option<BitSet>> = vec![None; n * n];
        let maximal = self.maximal_indices();
        let mut product_of = |a: usize, b: usize| {
            products[a * n + b]
                .get_or_insert_with(|| {
                    self.product(&self.ideals[a], &self.ideals[b])
                        .expect("same shape")
                        .members()
                        .clone()
                })
                .clone()
        };
        (0..n)
            .map(|k| self.classify_at(k, &maximal, &mut product_of))
            .collect()
    }

    fn classify_at(
        &self,
        k: usize,
        maximal: &[usize],
        product_of: &mut dyn FnMut(usize, usize) -> BitSet,
    ) -> Classification {
        let ideal = &self.ideals[k];
        if !ideal.is_proper() {
            return Classification::default();
        }
        let i = ideal.members();
        // Pairs where J ⊆ I or K ⊆ I satisfy all three implications trivially.
        let outside: Vec<usize> = (0..self.len())
            .filter(|&j| !self.ideals[j].members().is_subset(i))
            .collect();
        let mut prime = true;
        let mut k4 = true;
        for &a in &outside {
            for &b in &outside {
                let (ja, kb) = (self.ideals[a].members(), self.ideals[b].members());
                if k4 && ja.intersection_is_subset(kb, i) {
                    k4 = false;
                }
                if prime && product_of(a, b).is_subset(i) {
                    prime = false;
                }
                if !prime && !k4 {
                    break;
                }
            }
        }
        let meet_irreducible = self.is_meet_irreducible_at(k);
        let containing_maximal = maximal
            .iter()
            .filter(|&&m| i.is_subset(self.ideals[m].members()))
            .count();
        Classification {
            prime,
            k4,
            meet_irreducible,
            maximal: maximal.contains(&k),
            primary: containing_maximal == 1,
        }
    }

    /// Indices of meet-irreducible elements, by the definition alone.
    pub fn meet_irreducible_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.ideals[k].is_proper() && self.is_meet_irreducible_at(k))
            .collect()
    }

    /// No pair of strictly larger elements meets in element `k`.
    fn is_meet_irreducible_at(&self, k: usize) -> bool {
        let i = self.ideals[k].members();
        let above: Vec<usize> = (0..self.len())
            .filter(|&j| j != k && i.is_subset(self.ideals[j].members()))
            .collect();
        !above.iter().enumerate().any(|(x, &a)| {
            above[x..]
                .iter()
                .any(|&b| self.ideals[a].members().intersection(self.ideals[b].members()) == *i)
        })
    }

    /// The interval `[ideal, ⊤]`, modelling the ideals of the quotient.
    pub fn interval(&self, ideal: &Ideal) -> Result<IdealLattice> {
        self.index_of(ideal).ok_or(Error::NotInLattice)?;
        let ideals = self
            .ideals
            .iter()
            .filter(|j| ideal.is_subset(j))
            .cloned()
            .collect();
        Ok(IdealLattice::build(&self.shape, ideal.clone(), ideals))
    }

    /// First triple violating `J ∧ (K ∨ L) = (J ∧ K) ∨ (J ∧ L)`, if any.
    /// A meet or join falling outside the lattice is reported on the first
    /// triple that uses it.
    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let table = |op: fn(&Ideal, &Ideal) -> Result<Ideal>| -> Vec<Option<usize>> {
            let mut out = Vec::with_capacity(n * n);
            for a in &self.ideals {
                for b in &self.ideals {
                    out.push(op(a, b).ok().and_then(|x| self.index_of(&x)));
                }
            }
            out
        };
        let meet = table(Ideal::meet);
        let join = table(Ideal::join);
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    let left = join[b * n + c].and_then(|kl| meet[a * n + kl]);
                    let right = meet[a * n + b]
                        .zip(meet[a * n + c])
                        .and_then(|(x, y)| join[x * n + y]);
                    if left.is_none() || left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Generator of a principal ideal: `J = ideal generated by e`.
    pub fn principal(&self, e: &MatrixUnit) -> Result<Ideal> {
        Ideal::generated_by(&self.shape, [e])
    }
}

/// (K4) test through principal ideals only.
///
/// If `I ⊇ J ∩ K` with `J, K ⊄ I`, pick `a ∈ J \ I` and `b ∈ K \ I`; the
/// principal ideals they generate already witness the failure. So `I` is
/// (K4) iff no two excluded units have generated ideals meeting inside `I`.
/// Quadratic in the unit count, which makes it usable on lattices too large
/// for pairwise classification.
pub fn is_k4_by_principals(ideal: &Ideal) -> bool {
    if !ideal.is_proper() {
        return false;
    }
    let shape = ideal.shape();
    let generated: Vec<Ideal> = ideal
        .excluded_units()
        .iter()
        .map(|e| Ideal::generated_by(shape, [e]).expect("unit of shape"))
        .collect();
    generated.iter().enumerate().all(|(x, a)| {
        generated[x..]
            .iter()
            .all(|b| !a.members().intersection_is_subset(b.members(), ideal.members()))
    })
}

/// Prime test through principal ideals, by the same reduction as
/// [`is_k4_by_principals`].
pub fn is_prime_by_principals(ideal: &Ideal) -> bool {
    if !ideal.is_proper() {
        return false;
    }
    let shape = ideal.shape();
    let generated: Vec<Ideal> = ideal
        .excluded_units()
        .iter()
        .map(|e| Ideal::generated_by(shape, [e]).expect("unit of shape"))
        .collect();
    generated.iter().all(|a| {
        generated
            .iter()
            .all(|b| !a.product(b).expect("same shape").is_subset(ideal))
    })
}

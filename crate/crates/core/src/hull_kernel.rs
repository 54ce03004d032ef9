//! Hull-kernel closure on a finite set of ideals.
//!
//! For a set `Ω` of ideals, `ker(F)` is the intersection of the points of
//! `F` (the whole algebra when `F` is empty) and `hull(I)` is the set of
//! points containing `I`. The closure `hull(ker(F))` is a Kuratowski closure
//! exactly when the union axiom holds; [`IdealSpace::check_kuratowski`]
//! verifies all four axioms.

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::lattice::{meet_irreducibles, IdealLattice};

/// Largest `|Ω|` for which every subset is examined.
pub const EXHAUSTIVE_MAX_POINTS: usize = 12;

/// A subset of the points of an [`IdealSpace`].
pub type PointSet = BitSet;

#[derive(Debug, Clone)]
pub struct IdealSpace {
    shape: AlgebraShape,
    points: Vec<Ideal>,
}

impl IdealSpace {
    /// Validates that the points are proper, distinct ideals of `shape`.
    pub fn new(shape: &AlgebraShape, points: Vec<Ideal>) -> Result<IdealSpace> {
        let space = IdealSpace::allowing_improper(shape, points)?;
        if let Some(k) = space.points.iter().position(|p| !p.is_proper()) {
            return Err(Error::ImproperPoint(k));
        }
        Ok(space)
    }

    /// Like [`IdealSpace::new`] but admits the improper ideal, so that the
    /// failure of the empty-set axiom can be observed.
    pub fn allowing_improper(shape: &AlgebraShape, points: Vec<Ideal>) -> Result<IdealSpace> {
        for p in &points {
            shape.same_blocks(p.shape())?;
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if points[a] == points[b] {
                    return Err(Error::DuplicatePoint(a, b));
                }
            }
        }
        Ok(IdealSpace {
            shape: shape.clone(),
            points,
        })
    }

    /// `Ω` = all meet-irreducible ideals, point `k` being `I(e_k)` for the
    /// `k`-th unit in canonical order.
    pub fn meet_irreducible(shape: &AlgebraShape) -> IdealSpace {
        IdealSpace {
            shape: shape.clone(),
            points: meet_irreducibles(shape),
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn points(&self) -> &[Ideal] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.len())
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, indices: I) -> PointSet {
        PointSet::from_indices(self.len(), indices)
    }

    pub fn ker(&self, f: &PointSet) -> Ideal {
        f.iter().fold(Ideal::full(&self.shape), |acc, k| {
            acc.meet(&self.points[k]).expect("points share the shape")
        })
    }

    pub fn hull(&self, ideal: &Ideal) -> PointSet {
        PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&k| ideal.is_subset(&self.points[k])),
        )
    }

    pub fn closure(&self, f: &PointSet) -> PointSet {
        self.hull(&self.ker(f))
    }

    /// Checks the four closure axioms: over every pair of subsets when
    /// `|Ω| ≤ EXHAUSTIVE_MAX_POINTS`, otherwise through the per-point
    /// sufficient condition that each point is (K4) among all ideals.
    pub fn check_kuratowski(&self) -> TopologyReport {
        if self.len() <= EXHAUSTIVE_MAX_POINTS {
            self.check_exhaustive()
        } else {
            self.check_by_point_criterion()
        }
    }

    fn subset_closures(&self) -> (Vec<Ideal>, Vec<u64>) {
        let n = self.len();
        let mut kernels: Vec<Ideal> = Vec::with_capacity(1 << n);
        kernels.push(Ideal::full(&self.shape));
        for s in 1usize..(1 << n) {
            let low = s.trailing_zeros() as usize;
            let k = kernels[s & (s - 1)]
                .meet(&self.points[low])
                .expect("points share the shape");
            kernels.push(k);
        }
        let closures = kernels.iter().map(|k| self.hull(k).low_mask()).collect();
        (kernels, closures)
    }

    fn check_exhaustive(&self) -> TopologyReport {
        let n = self.len();
        let (_, cl) = self.subset_closures();
        let full = (1u64 << n) - 1;
        let as_list = |m: u64| (0..n).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>();

        let k1 = if cl[0] == 0 {
            AxiomOutcome::Holds
        } else {
            AxiomOutcome::Violated(Witness::EmptyClosure {
                closure: as_list(cl[0]),
            })
        };
        let k2 = (0..=full)
            .find(|&s| s & !cl[s as usize] != 0)
            .map_or(AxiomOutcome::Holds, |s| {
                AxiomOutcome::Violated(Witness::NotExtensive { subset: as_list(s) })
            });
        let k3 = (0..=full)
            .find(|&s| cl[cl[s as usize] as usize] != cl[s as usize])
            .map_or(AxiomOutcome::Holds, |s| {
                AxiomOutcome::Violated(Witness::NotIdempotent { subset: as_list(s) })
            });
        let mut k4 = AxiomOutcome::Holds;
        'search: for f in 0..=full {
            for g in f..=full {
                if cl[(f | g) as usize] != cl[f as usize] | cl[g as usize] {
                    k4 = AxiomOutcome::Violated(Witness::UnionNotPreserved {
                        f: as_list(f),
                        g: as_list(g),
                    });
                    break 'search;
                }
            }
        }
        let mut closed: Vec<u64> = cl.clone();
        closed.sort_unstable();
        closed.dedup();
        TopologyReport {
            mode: CheckMode::Exhaustive,
            points: n,
            k1,
            k2,
            k3,
            k4,
            closed_sets: Some(closed.into_iter().map(as_list).collect()),
        }
    }

    fn check_by_point_criterion(&self) -> TopologyReport {
        let empty = self.closure(&self.empty_set());
        let k1 = if empty.is_empty() {
            AxiomOutcome::Holds
        } else {
            AxiomOutcome::Violated(Witness::EmptyClosure {
                closure: empty.iter().collect(),
            })
        };
        // K2 and K3 follow from hull/ker being antitone and ker∘hull∘ker = ker;
        // spot-check them on singletons and on Ω.
        let mut probes: Vec<PointSet> = (0..self.len()).map(|k| self.subset([k])).collect();
        probes.push(self.all_points());
        let k2 = probes
            .iter()
            .find(|f| !f.is_subset(&self.closure(f)))
            .map_or(AxiomOutcome::Holds, |f| {
                AxiomOutcome::Violated(Witness::NotExtensive {
                    subset: f.iter().collect(),
                })
            });
        let k3 = probes
            .iter()
            .find(|f| {
                let c = self.closure(f);
                self.closure(&c) != c
            })
            .map_or(AxiomOutcome::Holds, |f| {
                AxiomOutcome::Violated(Witness::NotIdempotent {
                    subset: f.iter().collect(),
                })
            });
        let k4 = self
            .points
            .iter()
            .enumerate()
            .find_map(|(k, p)| k4_failure(p).map(|(a, b)| (k, a, b)))
            .map_or(AxiomOutcome::Holds, |(point, a, b)| {
                AxiomOutcome::Unresolved(Witness::NotK4Point {
                    point,
                    left: a,
                    right: b,
                })
            });
        TopologyReport {
            mode: CheckMode::PointCriterion,
            points: self.len(),
            k1,
            k2,
            k3,
            k4,
            closed_sets: None,
        }
    }

    /// The exact union-axiom criterion: for every point `I` and subsets
    /// `F, G`, `I ⊇ ker F ∩ ker G` implies `I ⊇ ker F` or `I ⊇ ker G`.
    /// Returns the first violation. Exhaustive, so only for
    /// `|Ω| ≤ EXHAUSTIVE_MAX_POINTS`.
    pub fn union_criterion_violation(&self) -> Result<Option<UnionViolation>> {
        let n = self.len();
        if n > EXHAUSTIVE_MAX_POINTS {
            return Err(Error::CapExceeded(format!(
                "{n} points exceed the exhaustive limit of {EXHAUSTIVE_MAX_POINTS}"
            )));
        }
        let (kernels, _) = self.subset_closures();
        let as_list = |m: usize| (0..n).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>();
        for (p, point) in self.points.iter().enumerate() {
            let inside: Vec<bool> = kernels.iter().map(|k| k.is_subset(point)).collect();
            for f in 0..kernels.len() {
                if inside[f] {
                    continue;
                }
                for g in 0..kernels.len() {
                    if inside[g] {
                        continue;
                    }
                    if kernels[f]
                        .members()
                        .intersection_is_subset(kernels[g].members(), point.members())
                    {
                        return Ok(Some(UnionViolation {
                            point: p,
                            f: as_list(f),
                            g: as_list(g),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Checks `ker(hull(J)) = J` for every lattice element and
    /// `hull(ker(F)) = F` for every closed set `F = hull(J)`.
    pub fn closed_ideal_bijection(&self, lattice: &IdealLattice) -> BijectionReport {
        let mut ker_hull_failures = Vec::new();
        let mut closed: Vec<PointSet> = Vec::with_capacity(lattice.len());
        for (k, j) in lattice.ideals().iter().enumerate() {
            let h = self.hull(j);
            if &self.ker(&h) != j {
                ker_hull_failures.push(k);
            }
            closed.push(h);
        }
        let mut distinct = closed.clone();
        distinct.sort();
        distinct.dedup();
        let hull_ker_failures: Vec<Vec<usize>> = distinct
            .iter()
            .filter(|f| &self.closure(f) != *f)
            .map(|f| f.iter().collect())
            .collect();
        BijectionReport {
            ideal_count: lattice.len(),
            closed_set_count: distinct.len(),
            bijective: ker_hull_failures.is_empty()
                && hull_ker_failures.is_empty()
                && distinct.len() == lattice.len(),
            ker_hull_failures,
            hull_ker_failures,
        }
    }

    pub fn specialization_order(&self) -> SpecializationOrder {
        let closures = (0..self.len()).map(|q| self.closure(&self.subset([q]))).collect();
        SpecializationOrder { closures }
    }
}

/// First pair of principal ideals witnessing that `ideal` is not (K4).
fn k4_failure(ideal: &Ideal) -> Option<(Ideal, Ideal)> {
    if !ideal.is_proper() {
        let full = Ideal::full(ideal.shape());
        return Some((full.clone(), full));
    }
    let shape = ideal.shape();
    let generated: Vec<Ideal> = ideal
        .excluded_units()
        .iter()
        .map(|e| Ideal::generated_by(shape, [e]).expect("unit of shape"))
        .collect();
    for (x, a) in generated.iter().enumerate() {
        for b in &generated[x..] {
            if a.members().intersection_is_subset(b.members(), ideal.members()) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Point `point` contains `ker F ∩ ker G` but neither kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionViolation {
    pub point: usize,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    PointCriterion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// The closure of the empty set is not empty.
    EmptyClosure { closure: Vec<usize> },
    /// `F ⊄ closure(F)`.
    NotExtensive { subset: Vec<usize> },
    /// `closure(closure(F)) ≠ closure(F)`.
    NotIdempotent { subset: Vec<usize> },
    /// `closure(F ∪ G) ≠ closure(F) ∪ closure(G)`.
    UnionNotPreserved { f: Vec<usize>, g: Vec<usize> },
    /// Point contains `left ∩ right` but neither ideal.
    NotK4Point {
        point: usize,
        #[serde(serialize_with = "serialize_excluded")]
        left: Ideal,
        #[serde(serialize_with = "serialize_excluded")]
        right: Ideal,
    },
}

fn serialize_excluded<S: serde::Serializer>(ideal: &Ideal, s: S) -> Result<S::Ok, S::Error> {
    let units: Vec<MatrixUnit> = ideal.excluded_units();
    serde::Serialize::serialize(&units, s)
}

impl Witness {
    /// Re-evaluates the witness against `space`; true when it really does
    /// violate its axiom.
    pub fn is_violation(&self, space: &IdealSpace) -> bool {
        let set = |v: &Vec<usize>| space.subset(v.iter().copied());
        match self {
            Witness::EmptyClosure { .. } => !space.closure(&space.empty_set()).is_empty(),
            Witness::NotExtensive { subset } => {
                let f = set(subset);
                !f.is_subset(&space.closure(&f))
            }
            Witness::NotIdempotent { subset } => {
                let c = space.closure(&set(subset));
                space.closure(&c) != c
            }
            Witness::UnionNotPreserved { f, g } => {
                let (f, g) = (set(f), set(g));
                space.closure(&f.union(&g)) != space.closure(&f).union(&space.closure(&g))
            }
            Witness::NotK4Point { point, left, right } => {
                let p = &space.points()[*point];
                left.meet(right).is_ok_and(|m| m.is_subset(p)) && !left.is_subset(p) && !right.is_subset(p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "witness")]
pub enum AxiomOutcome {
    Holds,
    Violated(Witness),
    /// The sufficient criterion failed; the axiom itself was not decided.
    Unresolved(Witness),
}

impl AxiomOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, AxiomOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            AxiomOutcome::Holds => None,
            AxiomOutcome::Violated(w) | AxiomOutcome::Unresolved(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyReport {
    pub mode: CheckMode,
    pub points: usize,
    pub k1: AxiomOutcome,
    pub k2: AxiomOutcome,
    pub k3: AxiomOutcome,
    pub k4: AxiomOutcome,
    /// Distinct closures of all subsets (exhaustive mode only).
    pub closed_sets: Option<Vec<Vec<usize>>>,
}

impl TopologyReport {
    pub fn is_topology(&self) -> bool {
        self.axioms().iter().all(|a| a.holds())
    }

    pub fn axioms(&self) -> [&AxiomOutcome; 4] {
        [&self.k1, &self.k2, &self.k3, &self.k4]
    }

    /// Every recorded witness must re-verify against the space.
    pub fn witnesses_recheck(&self, space: &IdealSpace) -> bool {
        self.axioms()
            .iter()
            .filter_map(|a| a.witness())
            .all(|w| w.is_violation(space))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub ideal_count: usize,
    pub closed_set_count: usize,
    pub bijective: bool,
    /// Lattice indices `J` with `ker(hull(J)) ≠ J`.
    pub ker_hull_failures: Vec<usize>,
    /// Closed sets `F` with `hull(ker(F)) ≠ F`.
    pub hull_ker_failures: Vec<Vec<usize>>,
}

/// `p ⤳ q` iff `p ∈ closure({q})`.
#[derive(Debug, Clone)]
pub struct SpecializationOrder {
    closures: Vec<PointSet>,
}

impl SpecializationOrder {
    pub fn len(&self) -> usize {
        self.closures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closures.is_empty()
    }

    pub fn specializes(&self, p: usize, q: usize) -> bool {
        self.closures[q].contains(p)
    }

    pub fn point_closure(&self, q: usize) -> &PointSet {
        &self.closures[q]
    }

    /// Points whose singleton is closed.
    pub fn closed_points(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&q| self.closures[q].count() == 1)
            .collect()
    }

    pub fn is_t1(&self) -> bool {
        self.closed_points().len() == self.len()
    }

    /// Covering pairs `(p, q)`: `p ⤳ q`, `p ≠ q`, with nothing strictly between.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for q in 0..n {
            for p in self.closures[q].iter().filter(|&p| p != q) {
                let between =
                    (0..n).any(|r| r != p && r != q && self.specializes(p, r) && self.specializes(r, q));
                if !between {
                    edges.push((p, q));
                }
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_ideals;

    fn u(b: usize, i: usize, j: usize) -> MatrixUnit {
        MatrixUnit::new(b, i, j)
    }

    fn t(n: usize) -> AlgebraShape {
        AlgebraShape::triangular(n).unwrap()
    }

    fn point_of(space: &IdealSpace, e: &MatrixUnit) -> usize {
        space.shape().index_of(e).unwrap()
    }

    #[test]
    fn ker_examples() {
        let t4 = t(4);
        let space = IdealSpace::meet_irreducible(&t4);
        let f = space.subset([point_of(&space, &u(1, 2, 2)), point_of(&space, &u(1, 3, 3))]);
        // brute force: units lying in both points
        let expected: Vec<MatrixUnit> = t4
            .units()
            .iter()
            .filter(|e| f.iter().all(|k| space.points()[k].contains(e)))
            .copied()
            .collect();
        assert_eq!(space.ker(&f).member_units(), expected);
        assert_eq!(space.ker(&f).excluded_units(), vec![u(1, 2, 2), u(1, 3, 3)]);
        assert!(space.ker(&space.all_points()).is_zero());
        assert!(!space.ker(&space.empty_set()).is_proper());
    }

    #[test]
    fn hull_examples() {
        let t4 = t(4);
        let space = IdealSpace::meet_irreducible(&t4);
        assert!(space.hull(&Ideal::full(&t4)).is_empty());
        assert_eq!(space.hull(&Ideal::zero(&t4)), space.all_points());
        let h = space.hull(&Ideal::largest_excluding(&t4, &u(1, 2, 3)).unwrap());
        let expected = space.subset(
            [u(1, 2, 2), u(1, 2, 3), u(1, 3, 3)]
                .iter()
                .map(|e| point_of(&space, e)),
        );
        assert_eq!(h, expected);
    }

    #[test]
    fn closure_examples() {
        let t4 = t(4);
        let space = IdealSpace::meet_irreducible(&t4);
        let c = space.closure(&space.subset([point_of(&space, &u(1, 2, 3))]));
        assert_eq!(c.count(), 3);
        assert!(space.closure(&space.empty_set()).is_empty());
        assert_eq!(space.closure(&space.all_points()), space.all_points());
    }

    #[test]
    fn meet_irreducibles_of_t3_form_a_topology() {
        let space = IdealSpace::meet_irreducible(&t(3));
        let report = space.check_kuratowski();
        assert_eq!(report.mode, CheckMode::Exhaustive);
        assert!(report.is_topology(), "{report:?}");
        assert_eq!(report.closed_sets.as_ref().unwrap().len(), 14);
    }

    #[test]
    fn non_k4_point_breaks_union_axiom() {
        let t4 = t(4);
        let a = Ideal::largest_excluding(&t4, &u(1, 2, 2)).unwrap();
        let b = Ideal::largest_excluding(&t4, &u(1, 3, 3)).unwrap();
        let composite = a.meet(&b).unwrap();
        let space = IdealSpace::new(&t4, vec![composite, a, b]).unwrap();
        let report = space.check_kuratowski();
        assert!(report.k1.holds() && report.k2.holds() && report.k3.holds());
        assert_eq!(
            report.k4,
            AxiomOutcome::Violated(Witness::UnionNotPreserved {
                f: vec![1],
                g: vec![2]
            })
        );
        assert!(report.witnesses_recheck(&space));
        assert!(space.union_criterion_violation().unwrap().is_some());
    }

    #[test]
    fn corner_ideal_with_its_diagonals_is_a_topology() {
        let t4 = t(4);
        let points = [u(1, 2, 3), u(1, 2, 2), u(1, 3, 3)]
            .iter()
            .map(|e| Ideal::largest_excluding(&t4, e).unwrap())
            .collect();
        let space = IdealSpace::new(&t4, points).unwrap();
        assert!(space.check_kuratowski().is_topology());
    }

    #[test]
    fn empty_space_passes_vacuously() {
        let space = IdealSpace::new(&t(2), vec![]).unwrap();
        assert!(space.check_kuratowski().is_topology());
    }

    #[test]
    fn improper_point_breaks_k1() {
        let t2 = t(2);
        assert_eq!(
            IdealSpace::new(&t2, vec![Ideal::full(&t2)]).unwrap_err(),
            Error::ImproperPoint(0)
        );
        let space = IdealSpace::allowing_improper(&t2, vec![Ideal::zero(&t2), Ideal::full(&t2)]).unwrap();
        let report = space.check_kuratowski();
        assert_eq!(
            report.k1,
            AxiomOutcome::Violated(Witness::EmptyClosure { closure: vec![1] })
        );
        assert!(report.witnesses_recheck(&space));
    }

    #[test]
    fn duplicates_rejected() {
        let t2 = t(2);
        assert_eq!(
            IdealSpace::new(&t2, vec![Ideal::zero(&t2), Ideal::zero(&t2)]).unwrap_err(),
            Error::DuplicatePoint(0, 1)
        );
    }

    #[test]
    fn bijection_counts() {
        for (blocks, count) in [(vec![3], 14), (vec![4], 42), (vec![2, 2], 25)] {
            let s = AlgebraShape::new(blocks).unwrap();
            let lattice = enumerate_ideals(&s).unwrap();
            let report = IdealSpace::meet_irreducible(&s).closed_ideal_bijection(&lattice);
            assert!(report.bijective);
            assert_eq!(report.ideal_count, count);
            assert_eq!(report.closed_set_count, count);
        }
    }

    #[test]
    fn bijection_fails_for_too_few_points() {
        let t3 = t(3);
        let lattice = enumerate_ideals(&t3).unwrap();
        let space = IdealSpace::new(&t3, meet_irreducibles(&t3)[..3].to_vec()).unwrap();
        assert!(!space.closed_ideal_bijection(&lattice).bijective);
    }

    #[test]
    fn specialization_examples() {
        let t2 = t(2);
        let space = IdealSpace::meet_irreducible(&t2);
        let order = space.specialization_order();
        let (e11, e12, e22) = (0, 1, 2);
        assert!(order.specializes(e11, e12));
        assert!(order.specializes(e22, e12));
        assert!(!order.specializes(e12, e11));
        assert_eq!(order.closed_points(), vec![e11, e22]);
        assert!(!order.is_t1());
        assert!(IdealSpace::meet_irreducible(&t(1)).specialization_order().is_t1());
    }

    #[test]
    fn criterion_mode_for_large_spaces() {
        let t5 = t(5);
        let space = IdealSpace::meet_irreducible(&t5);
        let report = space.check_kuratowski();
        assert_eq!(report.mode, CheckMode::PointCriterion);
        assert!(report.is_topology());

        // the non-(K4) composite is caught by the criterion
        let mut points = meet_irreducibles(&t5);
        let extra = points[0].meet(&points[5]).unwrap();
        points.push(extra);
        let space = IdealSpace::new(&t5, points).unwrap();
        let report = space.check_kuratowski();
        assert!(matches!(report.k4, AxiomOutcome::Unresolved(_)));
        assert!(report.witnesses_recheck(&space));
    }
}

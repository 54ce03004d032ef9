//! Finite nest representations acting on diagonal labels.
//!
//! A representation is modelled by how each matrix unit moves coordinate
//! labels: `e_{ij}` sends label `j` to label `i` or annihilates it. Every
//! invariant subspace considered is spanned by labels, which is exact here
//! because each diagonal projection of the represented interval acts as a
//! coordinate projection.

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::towers::{LimitIdealApprox, Tower, UnitChain};

/// Coordinate label: (block, diagonal position).
pub type Label = (usize, usize);

/// Largest label count for which invariant subsets are enumerated.
pub const MAX_NEST_LABELS: usize = 20;

pub trait LabelAction {
    fn shape(&self) -> &AlgebraShape;

    /// Labels spanning the representation space, in a fixed order.
    fn labels(&self) -> Vec<Label>;

    /// Image of `label` under `f`, or `None` when `f` annihilates it.
    fn act(&self, f: &MatrixUnit, label: Label) -> Option<Label>;

    /// Units acting as zero on every label.
    fn kernel(&self) -> Ideal {
        let shape = self.shape();
        let labels = self.labels();
        let zero_units = shape
            .units()
            .iter()
            .filter(|f| labels.iter().all(|&l| self.act(f, l).is_none()));
        Ideal::from_units(shape, zero_units).expect("kernel of an action is an ideal")
    }
}

/// The natural representation of one block compressed to the diagonal
/// interval `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct IntervalCompression {
    shape: AlgebraShape,
    block: usize,
    lo: usize,
    hi: usize,
}

/// Compression to the interval spanned by `e = e_{lo,hi}`.
pub fn compress(shape: &AlgebraShape, e: &MatrixUnit) -> Result<IntervalCompression> {
    shape.check_unit(e)?;
    Ok(IntervalCompression {
        shape: shape.clone(),
        block: e.block,
        lo: e.row,
        hi: e.col,
    })
}

impl IntervalCompression {
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn interval(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn interval_len(&self) -> usize {
        self.hi - self.lo + 1
    }
}

impl LabelAction for IntervalCompression {
    fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    fn labels(&self) -> Vec<Label> {
        (self.lo..=self.hi).map(|p| (self.block, p)).collect()
    }

    fn act(&self, f: &MatrixUnit, (block, pos): Label) -> Option<Label> {
        let inside = f.block == self.block && self.lo <= f.row && f.col <= self.hi;
        (inside && block == self.block && pos == f.col).then_some((block, f.row))
    }
}

/// The identity representation of a whole shape on all of its labels.
#[derive(Debug, Clone)]
pub struct NaturalRepresentation {
    shape: AlgebraShape,
}

impl NaturalRepresentation {
    pub fn new(shape: &AlgebraShape) -> Self {
        NaturalRepresentation { shape: shape.clone() }
    }
}

impl LabelAction for NaturalRepresentation {
    fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    fn labels(&self) -> Vec<Label> {
        self.shape.diagonal_units().map(|q| (q.block, q.row)).collect()
    }

    fn act(&self, f: &MatrixUnit, (block, pos): Label) -> Option<Label> {
        (f.block == block && f.col == pos).then_some((block, f.row))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSubspaces {
    /// Invariant label sets, ordered by size and then lexicographically.
    pub subsets: Vec<Vec<Label>>,
    /// The family is totally ordered by inclusion.
    pub is_nest: bool,
}

/// All label subsets mapped into themselves by every unit.
pub fn invariant_subspace_nest<R: LabelAction + ?Sized>(rep: &R) -> Result<InvariantSubspaces> {
    let labels = rep.labels();
    if labels.len() > MAX_NEST_LABELS {
        return Err(Error::CapExceeded(format!(
            "{} labels, at most {MAX_NEST_LABELS} supported",
            labels.len()
        )));
    }
    // moves[k]: labels that label k is sent to by some unit
    let moves: Vec<u64> = labels
        .iter()
        .map(|&l| {
            rep.shape()
                .units()
                .iter()
                .filter_map(|f| rep.act(f, l))
                .map(|img| {
                    let k = labels
                        .iter()
                        .position(|&x| x == img)
                        .expect("action stays on labels");
                    1u64 << k
                })
                .fold(0, |a, b| a | b)
        })
        .collect();
    let mut masks: Vec<u64> = (0..1u64 << labels.len())
        .filter(|&s| (0..labels.len()).all(|k| s & (1 << k) == 0 || moves[k] & !s == 0))
        .collect();
    masks.sort_by_key(|&s| {
        let members: Vec<usize> = (0..labels.len()).filter(|k| s & (1 << k) != 0).collect();
        (s.count_ones(), members)
    });
    let is_nest = masks
        .iter()
        .all(|a| masks.iter().all(|b| a & !b == 0 || b & !a == 0));
    let subsets = masks
        .iter()
        .map(|&s| {
            (0..labels.len())
                .filter(|k| s & (1 << k) != 0)
                .map(|k| labels[k])
                .collect()
        })
        .collect();
    Ok(InvariantSubspaces { subsets, is_nest })
}

/// Truncated Gelfand order on the top-level diagonal points surviving a
/// chain's ideal sequence.
#[derive(Debug, Clone, Serialize)]
pub struct GelfandOrder {
    pub start_level: usize,
    /// Surviving top-level diagonal points, sorted by `≺`.
    pub points: Vec<MatrixUnit>,
    /// `projections[x][k]`: unit at level `start_level + k` above `points[x]`.
    pub projections: Vec<Vec<MatrixUnit>>,
    /// Per level (from `start_level`): diagonal units outside `I_k`.
    pub surviving_by_level: Vec<Vec<MatrixUnit>>,
    pub total: bool,
    pub transitive: bool,
    /// A strict PPW step at one level persists at every higher level.
    pub monotone: bool,
}

/// Builds `X′` and the order `x ≺ y` (first differing level is a strict
/// PPW step) for the ideal sequence of `chain`.
pub fn gelfand_restricted_order(tower: &Tower, chain: &UnitChain) -> Result<GelfandOrder> {
    if let Some(level) = tower.non_standard_level() {
        return Err(Error::NotStandardOrRefinement(level));
    }
    let approx = crate::towers::chain_ideal_sequence(tower, chain)?;
    gelfand_order_for(tower, &approx)
}

/// Same as [`gelfand_restricted_order`] for an arbitrary sequence reaching
/// the top of the tower.
pub fn gelfand_order_for(tower: &Tower, approx: &LimitIdealApprox) -> Result<GelfandOrder> {
    let top = tower.top_level();
    let k0 = approx.start_level();
    if approx.end_level() != top {
        return Err(Error::InvalidChain("sequence must reach the tower top".into()));
    }
    let depth = top - k0 + 1;
    let mut points = Vec::new();
    let mut projections = Vec::new();
    for q in tower.shape(top).diagonal_units() {
        let mut seq = vec![q];
        for k in (k0..top).rev() {
            let parent = tower
                .embedding(k)
                .diagonal_parent(seq.last().expect("nonempty"))?;
            seq.push(parent);
        }
        seq.reverse();
        let survives = seq
            .iter()
            .enumerate()
            .all(|(off, p)| !approx.at(k0 + off).expect("covered").contains(p));
        if survives {
            points.push(q);
            projections.push(seq);
        }
    }
    let surviving_by_level = (k0..=top)
        .map(|k| {
            let ideal = approx.at(k).expect("covered");
            tower
                .shape(k)
                .diagonal_units()
                .filter(|p| !ideal.contains(p))
                .collect()
        })
        .collect();

    let n = points.len();
    let precedes = |x: usize, y: usize| -> bool {
        (0..depth)
            .find(|&k| projections[x][k] != projections[y][k])
            .is_some_and(|k| strictly_below(&projections[x][k], &projections[y][k]))
    };
    let total = (0..n).all(|x| (0..n).all(|y| x == y || precedes(x, y) || precedes(y, x)));
    let transitive =
        (0..n).all(|x| (0..n).all(|y| !precedes(x, y) || (0..n).all(|z| !precedes(y, z) || precedes(x, z))));
    let monotone = (0..n).all(|x| {
        (0..n).all(|y| {
            (0..depth).all(|k| {
                !strictly_below(&projections[x][k], &projections[y][k])
                    || (k..depth).all(|l| strictly_below(&projections[x][l], &projections[y][l]))
            })
        })
    });

    let mut order: Vec<usize> = (0..n).collect();
    if total && transitive {
        order.sort_by(|&x, &y| {
            if x == y {
                std::cmp::Ordering::Equal
            } else if precedes(x, y) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
    }
    Ok(GelfandOrder {
        start_level: k0,
        points: order.iter().map(|&x| points[x]).collect(),
        projections: order.iter().map(|&x| projections[x].clone()).collect(),
        surviving_by_level,
        total,
        transitive,
        monotone,
    })
}

fn strictly_below(p: &MatrixUnit, q: &MatrixUnit) -> bool {
    p.block == q.block && p.row < q.row
}

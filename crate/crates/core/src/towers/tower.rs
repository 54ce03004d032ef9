//! Towers of shapes, matrix-unit chains and their ideal sequences.
//!
//! A chain `e^{k0} → e^{k0+1} → ... → e^N` picks, at each level, one summand
//! of the previous unit's image. Its ideal sequence is `I_k = I(e^k)`, which
//! always satisfies `I_k ⊇ I_{k+1} ∩ A_k`; the sequence is in standard form
//! when every one of those containments is an equality. Limits are only ever
//! represented by their levels up to the top of a finite tower.

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::lattice::is_k4_by_principals;

use super::embedding::{Embedding, EmbeddingKind};

#[derive(Debug, Clone)]
pub struct Tower {
    shapes: Vec<AlgebraShape>,
    embeddings: Vec<Embedding>,
}

impl Tower {
    /// Consecutive embeddings must chain: the target of one is the source of
    /// the next.
    pub fn new(embeddings: Vec<Embedding>) -> Result<Tower> {
        let first = embeddings
            .first()
            .ok_or_else(|| Error::InvalidTower("a tower needs at least one embedding".into()))?;
        let mut shapes = vec![first.source().clone()];
        for (k, emb) in embeddings.iter().enumerate() {
            if emb.source() != &shapes[k] {
                return Err(Error::InvalidTower(format!(
                    "embedding {k} starts at {:?} (level {}), expected {:?} (level {})",
                    emb.source().blocks(),
                    emb.source().level(),
                    shapes[k].blocks(),
                    shapes[k].level()
                )));
            }
            shapes.push(emb.target().clone());
        }
        Ok(Tower { shapes, embeddings })
    }

    /// Single-level tower with no embeddings.
    pub fn trivial(shape: &AlgebraShape) -> Tower {
        Tower {
            shapes: vec![shape.clone()],
            embeddings: Vec::new(),
        }
    }

    /// `levels` shapes starting at `base`, each block multiplied by
    /// `multiplicity` per step, joined by embeddings of one kind.
    pub fn uniform(kind: EmbeddingKind, base: &[usize], multiplicity: usize, levels: usize) -> Result<Tower> {
        if levels < 2 {
            return Err(Error::InvalidTower(
                "a uniform tower needs at least two levels".into(),
            ));
        }
        let mut shapes = Vec::with_capacity(levels);
        let mut blocks = base.to_vec();
        for level in 0..levels {
            shapes.push(AlgebraShape::with_level(blocks.clone(), level)?);
            blocks = blocks.iter().map(|n| n * multiplicity).collect();
        }
        let embeddings = shapes
            .windows(2)
            .map(|w| match kind {
                EmbeddingKind::Standard => Embedding::standard(&w[0], &w[1], multiplicity),
                EmbeddingKind::Refinement => Embedding::refinement(&w[0], &w[1], multiplicity),
                EmbeddingKind::Strands => Err(Error::InvalidTower(
                    "uniform towers are standard or refinement".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Tower::new(embeddings)
    }

    pub fn counterexample() -> Tower {
        Tower::new(vec![Embedding::amplified_refinement_counterexample()]).expect("single embedding")
    }

    pub fn shapes(&self) -> &[AlgebraShape] {
        &self.shapes
    }

    pub fn shape(&self, level: usize) -> &AlgebraShape {
        &self.shapes[level]
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    /// Embedding `A_level → A_{level+1}`.
    pub fn embedding(&self, level: usize) -> &Embedding {
        &self.embeddings[level]
    }

    pub fn top_level(&self) -> usize {
        self.shapes.len() - 1
    }

    pub fn level_count(&self) -> usize {
        self.shapes.len()
    }

    /// First level whose embedding is not built from standard and
    /// refinement components, if any.
    pub fn non_standard_level(&self) -> Option<usize> {
        self.embeddings
            .iter()
            .position(|e| !e.is_standard_or_refinement())
    }

    pub fn is_standard_or_refinement(&self) -> bool {
        self.non_standard_level().is_none()
    }

    /// Pulls an ideal of level `level` down to every lower level; entry `k`
    /// of the result lives at level `k`.
    pub fn pullback_sequence(&self, level: usize, top: &Ideal) -> Result<Vec<Ideal>> {
        self.shapes[level].same_blocks(top.shape())?;
        let mut seq = vec![top.clone()];
        for k in (0..level).rev() {
            let below = self.embeddings[k].pullback(seq.last().expect("nonempty"))?;
            seq.push(below);
        }
        seq.reverse();
        Ok(seq)
    }

    /// Every chain of every length, grouped by start level and then by
    /// length.
    pub fn all_chains(&self) -> Vec<UnitChain> {
        let mut out = Vec::new();
        for (level, shape) in self.shapes.iter().enumerate() {
            let mut frontier: Vec<UnitChain> = shape
                .units()
                .iter()
                .map(|e| UnitChain::new(self, level, vec![*e]).expect("unit of its level"))
                .collect();
            loop {
                out.extend(frontier.iter().cloned());
                if level + frontier[0].units.len() - 1 == self.top_level() {
                    break;
                }
                frontier = frontier
                    .iter()
                    .flat_map(|c| chain_extensions(self, c).expect("below the top"))
                    .collect();
            }
        }
        out
    }

    /// All chains that start at some unit of some level and run to the top.
    pub fn all_complete_chains(&self) -> Vec<UnitChain> {
        let mut out = Vec::new();
        for (level, shape) in self.shapes.iter().enumerate() {
            for e in shape.units() {
                let start = UnitChain::new(self, level, vec![*e]).expect("unit of its level");
                out.extend(complete_extensions(self, &start).expect("valid chain"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnitChain {
    start_level: usize,
    units: Vec<MatrixUnit>,
}

impl UnitChain {
    /// Each unit must belong to its level and be a summand of the image of
    /// its predecessor.
    pub fn new(tower: &Tower, start_level: usize, units: Vec<MatrixUnit>) -> Result<UnitChain> {
        if units.is_empty() {
            return Err(Error::InvalidChain("empty chain".into()));
        }
        let end = start_level + units.len() - 1;
        if end > tower.top_level() {
            return Err(Error::InvalidChain(format!(
                "chain reaches level {end}, tower top is {}",
                tower.top_level()
            )));
        }
        for (offset, e) in units.iter().enumerate() {
            tower.shape(start_level + offset).check_unit(e)?;
        }
        for (offset, pair) in units.windows(2).enumerate() {
            let level = start_level + offset;
            if !tower.embedding(level).image_of_unit(&pair[0])?.contains(&pair[1]) {
                return Err(Error::InvalidChain(format!(
                    "{} at level {} is not a summand of {} at level {level}",
                    pair[1],
                    level + 1,
                    pair[0]
                )));
            }
        }
        Ok(UnitChain { start_level, units })
    }

    pub fn start_level(&self) -> usize {
        self.start_level
    }

    pub fn end_level(&self) -> usize {
        self.start_level + self.units.len() - 1
    }

    pub fn units(&self) -> &[MatrixUnit] {
        &self.units
    }

    /// The unit at `level`, if the chain covers it.
    pub fn at(&self, level: usize) -> Option<&MatrixUnit> {
        level
            .checked_sub(self.start_level)
            .and_then(|k| self.units.get(k))
    }

    pub fn last(&self) -> &MatrixUnit {
        self.units.last().expect("chains are nonempty")
    }
}

/// One-level extensions of `chain`, one per summand of the image of its last
/// unit, in strand order.
pub fn chain_extensions(tower: &Tower, chain: &UnitChain) -> Result<Vec<UnitChain>> {
    let level = chain.end_level();
    if level >= tower.top_level() {
        return Err(Error::InvalidChain(format!(
            "chain already ends at the top level {level}"
        )));
    }
    let summands = tower.embedding(level).image_of_unit(chain.last())?;
    Ok(summands
        .into_iter()
        .map(|f| {
            let mut units = chain.units.clone();
            units.push(f);
            UnitChain {
                start_level: chain.start_level,
                units,
            }
        })
        .collect())
}

/// Every extension of `chain` all the way to the top level.
pub fn complete_extensions(tower: &Tower, chain: &UnitChain) -> Result<Vec<UnitChain>> {
    let mut frontier = vec![chain.clone()];
    while frontier[0].end_level() < tower.top_level() {
        let mut next = Vec::new();
        for c in &frontier {
            next.extend(chain_extensions(tower, c)?);
        }
        frontier = next;
    }
    Ok(frontier)
}

/// Level-indexed ideal sequence `I_{k0}, ..., I_N` of a tower, together with
/// the per-level comparison against `I_{k+1} ∩ A_k`.
#[derive(Debug, Clone)]
pub struct LimitIdealApprox {
    start_level: usize,
    ideals: Vec<Ideal>,
    /// `compat[k]`: `I_k = I_{k+1} ∩ A_k` (indexed from `start_level`).
    compat: Vec<bool>,
    /// `containment[k]`: `I_k ⊇ I_{k+1} ∩ A_k`.
    containment: Vec<bool>,
}

impl LimitIdealApprox {
    /// Wraps an arbitrary sequence, computing its comparison flags.
    pub fn from_sequence(tower: &Tower, start_level: usize, ideals: Vec<Ideal>) -> Result<Self> {
        if ideals.is_empty() {
            return Err(Error::InvalidChain("empty ideal sequence".into()));
        }
        if start_level + ideals.len() > tower.level_count() {
            return Err(Error::InvalidChain(
                "ideal sequence runs past the tower top".into(),
            ));
        }
        for (offset, ideal) in ideals.iter().enumerate() {
            tower.shape(start_level + offset).same_blocks(ideal.shape())?;
        }
        let mut compat = Vec::with_capacity(ideals.len() - 1);
        let mut containment = Vec::with_capacity(ideals.len() - 1);
        for (offset, pair) in ideals.windows(2).enumerate() {
            let pulled = tower.embedding(start_level + offset).pullback(&pair[1])?;
            compat.push(pulled == pair[0]);
            containment.push(pulled.is_subset(&pair[0]));
        }
        Ok(LimitIdealApprox {
            start_level,
            ideals,
            compat,
            containment,
        })
    }

    pub fn start_level(&self) -> usize {
        self.start_level
    }

    pub fn end_level(&self) -> usize {
        self.start_level + self.ideals.len() - 1
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    /// The ideal at `level`, if covered.
    pub fn at(&self, level: usize) -> Option<&Ideal> {
        level
            .checked_sub(self.start_level)
            .and_then(|k| self.ideals.get(k))
    }

    pub fn top(&self) -> &Ideal {
        self.ideals.last().expect("nonempty")
    }

    pub fn compat(&self) -> &[bool] {
        &self.compat
    }

    pub fn containment(&self) -> &[bool] {
        &self.containment
    }

    pub fn standard_form(&self) -> bool {
        self.compat.iter().all(|&c| c)
    }

    pub fn containment_holds(&self) -> bool {
        self.containment.iter().all(|&c| c)
    }

    /// Per-level (K4) test of each `I_k` within the ideals of `A_k`.
    pub fn k4_levels(&self) -> Vec<bool> {
        self.ideals.iter().map(is_k4_by_principals).collect()
    }
}

/// `I_k = I(e^k)` along the chain, with the flags of `(*)`.
pub fn chain_ideal_sequence(tower: &Tower, chain: &UnitChain) -> Result<LimitIdealApprox> {
    let ideals = chain
        .units()
        .iter()
        .enumerate()
        .map(|(offset, e)| Ideal::largest_excluding(tower.shape(chain.start_level() + offset), e))
        .collect::<Result<Vec<_>>>()?;
    let approx = LimitIdealApprox::from_sequence(tower, chain.start_level(), ideals)?;
    debug_assert!(approx.containment_holds(), "containment (*) failed for {chain:?}");
    Ok(approx)
}

/// For a sequence in standard form, checks that every level ideal is (K4)
/// in its own algebra; the top-level test is the finite shadow of the limit
/// ideal being (K4).
///
/// (K4) is decided through principal ideals, which is equivalent to testing
/// all pairs of lattice elements (see [`is_k4_by_principals`]).
pub fn verify_k4_limit(approx: &LimitIdealApprox) -> Result<bool> {
    if let Some(k) = approx.compat().iter().position(|&c| !c) {
        return Err(Error::NotStandardForm(approx.start_level() + k));
    }
    Ok(approx.k4_levels().into_iter().all(|k4| k4))
}

/// Chain-built approximants whose intersection recovers an ideal sequence.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub approximants: Vec<(UnitChain, LimitIdealApprox)>,
    /// Intersection of the top-level ideals of all approximants.
    pub top_intersection: Ideal,
    /// `top_intersection` equals the top of the decomposed sequence.
    pub recovers_top: bool,
    /// Every approximant contains the decomposed sequence at every level it
    /// covers.
    pub contains_levelwise: bool,
    /// Every unit outside the sequence at some level is outside some
    /// approximant at that level.
    pub separates_units: bool,
}

/// Greedy chain decomposition of an ideal sequence in standard form.
///
/// For every level `k` and every unit `e ∉ J_k`, a chain is grown from `e`
/// by taking, at each level, the first summand (in strand order) outside `J`;
/// such a summand exists because `J_k = J_{k+1} ∩ A_k`. Requires a tower of
/// standard/refinement components so that the chain ideals are themselves
/// in standard form.
pub fn decompose_ideal(tower: &Tower, sequence: &LimitIdealApprox) -> Result<Decomposition> {
    if let Some(level) = tower.non_standard_level() {
        return Err(Error::NotStandardOrRefinement(level));
    }
    if let Some(k) = sequence.compat().iter().position(|&c| !c) {
        return Err(Error::NotStandardForm(sequence.start_level() + k));
    }
    if sequence.end_level() != tower.top_level() {
        return Err(Error::InvalidChain("sequence must reach the tower top".into()));
    }
    let mut approximants = Vec::new();
    for level in sequence.start_level()..=sequence.end_level() {
        let j = sequence.at(level).expect("covered level");
        for e in j.shape().units().iter().filter(|e| !j.contains(e)) {
            let chain = avoiding_chain(tower, sequence, level, *e)?;
            let approx = chain_ideal_sequence(tower, &chain)?;
            approximants.push((chain, approx));
        }
    }
    let top_shape = tower.shape(tower.top_level());
    let top_intersection = approximants.iter().fold(Ideal::full(top_shape), |acc, (_, a)| {
        acc.meet(a.top()).expect("top shape")
    });
    let recovers_top = &top_intersection == sequence.top();
    let contains_levelwise = approximants.iter().all(|(_, a)| {
        (a.start_level()..=a.end_level()).all(|k| {
            sequence
                .at(k)
                .expect("covered")
                .is_subset(a.at(k).expect("covered"))
        })
    });
    let separates_units = (sequence.start_level()..=sequence.end_level()).all(|k| {
        let j = sequence.at(k).expect("covered");
        j.shape().units().iter().filter(|e| !j.contains(e)).all(|e| {
            approximants
                .iter()
                .any(|(_, a)| a.at(k).is_some_and(|i| !i.contains(e)))
        })
    });
    Ok(Decomposition {
        approximants,
        top_intersection,
        recovers_top,
        contains_levelwise,
        separates_units,
    })
}

fn avoiding_chain(
    tower: &Tower,
    sequence: &LimitIdealApprox,
    level: usize,
    e: MatrixUnit,
) -> Result<UnitChain> {
    let mut units = vec![e];
    for k in level..tower.top_level() {
        let current = *units.last().expect("nonempty");
        let next_ideal = sequence.at(k + 1).expect("covered level");
        let next = tower
            .embedding(k)
            .image_of_unit(&current)?
            .into_iter()
            .find(|f| !next_ideal.contains(f))
            .ok_or(Error::NoAvoidingSummand {
                unit: current,
                level: k,
            })?;
        units.push(next);
    }
    UnitChain::new(tower, level, units)
}

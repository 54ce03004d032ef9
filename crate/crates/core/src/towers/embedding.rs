//! Unital embeddings between shapes, given as families of strands.

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::ideal::{up_closure_violation, Ideal};

/// One order-embedding of a source block into a target block: source
/// position `i` goes to target position `map[i-1]`. All 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Strand {
    pub source_block: usize,
    pub target_block: usize,
    pub map: Vec<usize>,
}

impl Strand {
    pub fn new(source_block: usize, target_block: usize, map: Vec<usize>) -> Strand {
        Strand {
            source_block,
            target_block,
            map,
        }
    }

    /// Image position of source position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    fn is_contiguous(&self) -> bool {
        self.map.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Standard,
    Refinement,
    Strands,
}

#[derive(Debug, Clone)]
pub struct Embedding {
    source: AlgebraShape,
    target: AlgebraShape,
    strands: Vec<Strand>,
    kind: EmbeddingKind,
}

impl Embedding {
    /// Block `b` of the source is copied `multiplicity` times down the
    /// diagonal of target block `b`: strand `s` sends `i ↦ (s−1)n + i`.
    pub fn standard(source: &AlgebraShape, target: &AlgebraShape, multiplicity: usize) -> Result<Embedding> {
        Self::uniform(
            source,
            target,
            multiplicity,
            EmbeddingKind::Standard,
            |n, _, s, i| (s - 1) * n + i,
        )
    }

    /// Block `b` of the source is interleaved `multiplicity` times into
    /// target block `b`: strand `s` sends `i ↦ (i−1)m + s`.
    pub fn refinement(
        source: &AlgebraShape,
        target: &AlgebraShape,
        multiplicity: usize,
    ) -> Result<Embedding> {
        Self::uniform(
            source,
            target,
            multiplicity,
            EmbeddingKind::Refinement,
            |_, m, s, i| (i - 1) * m + s,
        )
    }

    fn uniform(
        source: &AlgebraShape,
        target: &AlgebraShape,
        multiplicity: usize,
        kind: EmbeddingKind,
        position: impl Fn(usize, usize, usize, usize) -> usize,
    ) -> Result<Embedding> {
        if multiplicity == 0 {
            return Err(Error::SizeMismatch("multiplicity must be positive".into()));
        }
        let expected: Vec<usize> = source.blocks().iter().map(|n| n * multiplicity).collect();
        if target.blocks() != expected.as_slice() {
            return Err(Error::SizeMismatch(format!(
                "target {:?} is not {multiplicity} × source {:?}",
                target.blocks(),
                source.blocks()
            )));
        }
        let mut strands = Vec::new();
        for (b, &n) in source.blocks().iter().enumerate() {
            for s in 1..=multiplicity {
                let map = (1..=n).map(|i| position(n, multiplicity, s, i)).collect();
                strands.push(Strand::new(b + 1, b + 1, map));
            }
        }
        let mut emb = Embedding::from_strands(source, target, strands)?;
        emb.kind = kind;
        Ok(emb)
    }

    /// Validates a general strand family: strands strictly increasing and in
    /// range, every source block used, images pairwise disjoint and covering
    /// every target diagonal position.
    pub fn from_strands(
        source: &AlgebraShape,
        target: &AlgebraShape,
        strands: Vec<Strand>,
    ) -> Result<Embedding> {
        let mut occupied: Vec<Vec<bool>> = target.blocks().iter().map(|&m| vec![false; m]).collect();
        for s in &strands {
            if s.source_block == 0 || s.source_block > source.block_count() {
                return Err(Error::InvalidStrand(format!(
                    "source block {} does not exist",
                    s.source_block
                )));
            }
            if s.target_block == 0 || s.target_block > target.block_count() {
                return Err(Error::InvalidStrand(format!(
                    "target block {} does not exist",
                    s.target_block
                )));
            }
            let n = source.block_size(s.source_block);
            let m = target.block_size(s.target_block);
            if s.map.len() != n {
                return Err(Error::InvalidStrand(format!(
                    "strand from block {} has {} positions, block size is {n}",
                    s.source_block,
                    s.map.len()
                )));
            }
            if s.map.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStrand(format!(
                    "map {:?} is not strictly increasing",
                    s.map
                )));
            }
            for &p in &s.map {
                if p == 0 || p > m {
                    return Err(Error::InvalidStrand(format!(
                        "position {p} outside target block {} of size {m}",
                        s.target_block
                    )));
                }
                let slot = &mut occupied[s.target_block - 1][p - 1];
                if *slot {
                    return Err(Error::OverlappingStrands {
                        block: s.target_block,
                        position: p,
                    });
                }
                *slot = true;
            }
        }
        for (b, row) in occupied.iter().enumerate() {
            if let Some(p) = row.iter().position(|&x| !x) {
                return Err(Error::NotUnital {
                    block: b + 1,
                    position: p + 1,
                });
            }
        }
        for b in 1..=source.block_count() {
            if !strands.iter().any(|s| s.source_block == b) {
                return Err(Error::InvalidStrand(format!("source block {b} has no strand")));
            }
        }
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            strands,
            kind: EmbeddingKind::Strands,
        })
    }

    /// `T4 → T8` with strands `(1,2,5,6)` and `(3,4,7,8)`: the refinement
    /// embedding `T4 → T8` amplified by two, along which corner ideals cannot
    /// be lifted compatibly.
    pub fn amplified_refinement_counterexample() -> Embedding {
        let source = AlgebraShape::with_level(vec![4], 0).expect("valid");
        let target = AlgebraShape::with_level(vec![8], 1).expect("valid");
        Embedding::from_strands(
            &source,
            &target,
            vec![
                Strand::new(1, 1, vec![1, 2, 5, 6]),
                Strand::new(1, 1, vec![3, 4, 7, 8]),
            ],
        )
        .expect("valid strand family")
    }

    pub fn source(&self) -> &AlgebraShape {
        &self.source
    }

    pub fn target(&self) -> &AlgebraShape {
        &self.target
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    /// Summands of the image of `e`, one per strand of its block, in strand
    /// order.
    pub fn image_of_unit(&self, e: &MatrixUnit) -> Result<Vec<MatrixUnit>> {
        self.source.check_unit(e)?;
        Ok(self.image_unchecked(e).collect())
    }

    fn image_unchecked<'a>(&'a self, e: &'a MatrixUnit) -> impl Iterator<Item = MatrixUnit> + 'a {
        self.strands
            .iter()
            .filter(move |s| s.source_block == e.block)
            .map(move |s| MatrixUnit::new(s.target_block, s.at(e.row), s.at(e.col)))
    }

    /// `J ∩ A_k`: source units all of whose summands lie in `J`.
    pub fn pullback(&self, ideal: &Ideal) -> Result<Ideal> {
        self.target.same_blocks(ideal.shape())?;
        let mut members = BitSet::new(self.source.unit_count());
        for (k, e) in self.source.units().iter().enumerate() {
            if self.image_unchecked(e).all(|f| ideal.contains(&f)) {
                members.insert(k);
            }
        }
        if let Some((e, f)) = up_closure_violation(&self.source, &members) {
            panic!("pullback is not up-closed: {e} present, {f} missing");
        }
        Ideal::from_members(&self.source, members)
    }

    /// Unit whose image contains the target diagonal unit `q`.
    pub fn diagonal_parent(&self, q: &MatrixUnit) -> Result<MatrixUnit> {
        self.target.check_unit(q)?;
        if !q.is_diagonal() {
            return Err(Error::NotDiagonal(*q));
        }
        let (s, i) = self
            .strands
            .iter()
            .find_map(|s| {
                (s.target_block == q.block)
                    .then(|| s.map.iter().position(|&p| p == q.row))
                    .flatten()
                    .map(|i| (s, i + 1))
            })
            .expect("unital embeddings cover every diagonal position");
        Ok(MatrixUnit::new(s.source_block, i, i))
    }

    /// True when every component `T_n → T_m` (all strands between one pair of
    /// blocks) occupies a contiguous run of target positions and is laid out
    /// either as a standard embedding (each strand contiguous) or as a
    /// refinement embedding (strands interleaved with period = strand count).
    pub fn is_standard_or_refinement(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> = self
            .strands
            .iter()
            .map(|s| (s.source_block, s.target_block))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.into_iter().all(|(sb, tb)| {
            let mut group: Vec<&Strand> = self
                .strands
                .iter()
                .filter(|s| s.source_block == sb && s.target_block == tb)
                .collect();
            group.sort_by_key(|s| s.map[0]);
            let r = group.len();
            let n = group[0].map.len();
            let mut positions: Vec<usize> = group.iter().flat_map(|s| s.map.iter().copied()).collect();
            positions.sort_unstable();
            let start = positions[0];
            if positions.iter().enumerate().any(|(k, &p)| p != start + k) {
                return false;
            }
            let standard = group.iter().all(|s| s.is_contiguous());
            let refinement = group
                .iter()
                .enumerate()
                .all(|(rank, s)| (1..=n).all(|i| s.at(i) == start + (i - 1) * r + rank));
            standard || refinement
        })
    }
}

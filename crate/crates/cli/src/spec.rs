//! Tower specification documents.

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

use afideal::towers::{Embedding, Strand, Tower};
use afideal::AlgebraShape;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub schema_version: u32,
    /// Block sizes of each level, bottom first.
    pub shapes: Vec<Vec<usize>>,
    /// `embeddings[k]` joins level `k` to level `k + 1`.
    pub embeddings: Vec<EmbeddingSpec>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmbeddingSpec {
    Standard {
        multiplicity: Option<usize>,
    },
    Refinement {
        multiplicity: Option<usize>,
    },
    Strands {
        strands: Vec<StrandSpec>,
    },
    /// The `T4 → T8` doubled refinement with strands (1,2,5,6), (3,4,7,8).
    #[serde(alias = "paper_counterexample")]
    Counterexample,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrandSpec {
    #[serde(default = "first_block")]
    pub source_block: usize,
    #[serde(default = "first_block")]
    pub target_block: usize,
    pub map: Vec<usize>,
}

fn first_block() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Chains,
    K4Limits,
    Decomposition,
    Gelfand,
    Counterexample,
    TwistSearch,
}

impl TowerSpec {
    pub fn parse(text: &str) -> Result<TowerSpec> {
        let spec: TowerSpec = serde_json::from_str(text).context("malformed tower spec")?;
        ensure!(
            spec.schema_version == SCHEMA_VERSION,
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            spec.schema_version
        );
        ensure!(
            spec.embeddings.len() + 1 == spec.shapes.len(),
            "{} shapes need {} embeddings, found {}",
            spec.shapes.len(),
            spec.shapes.len().saturating_sub(1),
            spec.embeddings.len()
        );
        Ok(spec)
    }

    /// Requested analyses, sorted and deduplicated; defaults to the
    /// chain-level analyses.
    pub fn analyses(&self) -> Vec<Analysis> {
        let mut list = if self.analyses.is_empty() {
            vec![
                Analysis::Chains,
                Analysis::K4Limits,
                Analysis::Decomposition,
                Analysis::Gelfand,
            ]
        } else {
            self.analyses.clone()
        };
        list.sort_unstable();
        list.dedup();
        list
    }

    pub fn build_tower(&self) -> Result<Tower> {
        let shapes = self
            .shapes
            .iter()
            .enumerate()
            .map(|(level, blocks)| {
                AlgebraShape::with_level(blocks.clone(), level)
                    .with_context(|| format!("shape at level {level}"))
            })
            .collect::<Result<Vec<_>>>()?;
        let embeddings = self
            .embeddings
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                build_embedding(spec, &shapes[k], &shapes[k + 1])
                    .with_context(|| format!("embedding at level {k}"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower::new(embeddings)?)
    }
}

fn uniform_multiplicity(source: &AlgebraShape, target: &AlgebraShape) -> Result<usize> {
    ensure!(
        source.block_count() == target.block_count(),
        "uniform embeddings keep the block count ({} vs {})",
        source.block_count(),
        target.block_count()
    );
    let (s, t) = (source.blocks(), target.blocks());
    let m = t[0] / s[0];
    ensure!(
        m >= 1 && s.iter().zip(t).all(|(a, b)| a * m == *b),
        "blocks {t:?} are not a uniform multiple of {s:?}"
    );
    Ok(m)
}

fn build_embedding(spec: &EmbeddingSpec, source: &AlgebraShape, target: &AlgebraShape) -> Result<Embedding> {
    Ok(match spec {
        EmbeddingSpec::Standard { multiplicity } => {
            let m = multiplicity.map_or_else(|| uniform_multiplicity(source, target), Ok)?;
            Embedding::standard(source, target, m)?
        }
        EmbeddingSpec::Refinement { multiplicity } => {
            let m = multiplicity.map_or_else(|| uniform_multiplicity(source, target), Ok)?;
            Embedding::refinement(source, target, m)?
        }
        EmbeddingSpec::Strands { strands } => {
            let strands = strands
                .iter()
                .map(|s| Strand::new(s.source_block, s.target_block, s.map.clone()))
                .collect();
            Embedding::from_strands(source, target, strands)?
        }
        EmbeddingSpec::Counterexample => {
            if source.blocks() != [4] || target.blocks() != [8] {
                bail!("the counterexample embedding runs from [4] to [8]");
            }
            let strands = Embedding::amplified_refinement_counterexample()
                .strands()
                .to_vec();
            Embedding::from_strands(source, target, strands)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let spec = TowerSpec::parse(
            r#"{"schema_version": 1, "shapes": [[2], [4], [8]],
                "embeddings": [{"kind": "refinement"}, {"kind": "standard", "multiplicity": 2}]}"#,
        )
        .unwrap();
        let tower = spec.build_tower().unwrap();
        assert_eq!(tower.level_count(), 3);
        assert_eq!(spec.analyses().len(), 4);
    }

    #[test]
    fn counterexample_alias() {
        for kind in ["counterexample", "paper_counterexample"] {
            let text = format!(
                r#"{{"schema_version": 1, "shapes": [[4], [8]], "embeddings": [{{"kind": "{kind}"}}]}}"#
            );
            let tower = TowerSpec::parse(&text).unwrap().build_tower().unwrap();
            assert!(!tower.is_standard_or_refinement());
        }
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(TowerSpec::parse(r#"{"schema_version": 2, "shapes": [[1]], "embeddings": []}"#).is_err());
        assert!(
            TowerSpec::parse(r#"{"schema_version": 1, "shapes": [[1], [2]], "embeddings": []}"#).is_err()
        );
        let overlapping = TowerSpec::parse(
            r#"{"schema_version": 1, "shapes": [[2], [4]], "embeddings": [{"kind": "strands",
                "strands": [{"map": [1, 2]}, {"map": [2, 3]}]}]}"#,
        )
        .unwrap();
        assert!(overlapping.build_tower().is_err());
        let ragged = TowerSpec::parse(
            r#"{"schema_version": 1, "shapes": [[2, 1], [4, 3]], "embeddings": [{"kind": "standard"}]}"#,
        )
        .unwrap();
        assert!(ragged.build_tower().is_err());
    }
}

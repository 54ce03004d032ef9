//! Exhaustive search over two-strand embeddings `T_n → T_2n`.
//!
//! The question is whether an embedding can make the corner ideal `I(e)`
//! lift exactly along one summand of `e` while lifting to the zero ideal
//! along the other.

use serde::Serialize;

use crate::algebra::{AlgebraShape, MatrixUnit};
use crate::error::Result;
use crate::ideal::Ideal;

use super::embedding::{Embedding, Strand};

/// Every unital two-strand embedding `T_n → T_2n`.
///
/// Strand order is normalized so the first strand holds position 1, which
/// makes each strand family appear exactly once: `C(2n−1, n−1)` candidates,
/// in lexicographic order of the first strand.
pub fn two_strand_embeddings(n: usize) -> Result<Vec<Embedding>> {
    let source = AlgebraShape::with_level(vec![n], 0)?;
    let target = AlgebraShape::with_level(vec![2 * n], 1)?;
    let mut out = Vec::new();
    let mut first = vec![1usize];
    fn choose(
        n: usize,
        first: &mut Vec<usize>,
        source: &AlgebraShape,
        target: &AlgebraShape,
        out: &mut Vec<Embedding>,
    ) -> Result<()> {
        if first.len() == n {
            let second: Vec<usize> = (1..=2 * n).filter(|p| !first.contains(p)).collect();
            out.push(Embedding::from_strands(
                source,
                target,
                vec![Strand::new(1, 1, first.clone()), Strand::new(1, 1, second)],
            )?);
            return Ok(());
        }
        let from = first.last().copied().unwrap_or(0) + 1;
        for p in from..=2 * n {
            first.push(p);
            choose(n, first, source, target, out)?;
            first.pop();
        }
        Ok(())
    }
    choose(n, &mut first, &source, &target, &mut out)?;
    Ok(out)
}

/// Filters the complete two-strand space `T_n → T_2n` by `predicate`.
pub fn search_two_strand_embeddings<F>(n: usize, mut predicate: F) -> Result<Vec<Embedding>>
where
    F: FnMut(&Embedding) -> bool,
{
    Ok(two_strand_embeddings(n)?
        .into_iter()
        .filter(|e| predicate(e))
        .collect())
}

/// How `I(unit)` compares with the pullback of `I(g)` for each summand `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftOutcome {
    pub summand: MatrixUnit,
    /// Units excluded from the pullback of `I(summand)`.
    pub pullback_excluded: Vec<MatrixUnit>,
    pub equals_corner: bool,
    pub is_zero: bool,
}

/// Pullbacks of `I(g)` for every summand `g` of the image of `unit`.
pub fn lift_outcomes(emb: &Embedding, unit: &MatrixUnit) -> Result<Vec<LiftOutcome>> {
    let corner = Ideal::largest_excluding(emb.source(), unit)?;
    emb.image_of_unit(unit)?
        .into_iter()
        .map(|g| {
            let pulled = emb.pullback(&Ideal::largest_excluding(emb.target(), &g)?)?;
            Ok(LiftOutcome {
                summand: g,
                pullback_excluded: pulled.excluded_units(),
                equals_corner: pulled == corner,
                is_zero: pulled.is_zero(),
            })
        })
        .collect()
}

/// One summand lifts `I(unit)` exactly while another pulls back to zero.
pub fn has_twist(emb: &Embedding, unit: &MatrixUnit) -> bool {
    let Ok(outcomes) = lift_outcomes(emb, unit) else {
        return false;
    };
    outcomes
        .iter()
        .enumerate()
        .any(|(a, x)| x.equals_corner && outcomes.iter().enumerate().any(|(b, y)| a != b && y.is_zero))
}

/// The unit `e_{23}` of `T_4`, whose corner ideal the search is about.
pub const CORNER_F: MatrixUnit = MatrixUnit::new(1, 2, 3);

/// All `T4 → T8` two-strand embeddings with the twist behaviour for `I(e_{23})`.
pub fn search_twisted_embeddings() -> Result<Vec<Embedding>> {
    search_two_strand_embeddings(4, |e| has_twist(e, &CORNER_F))
}

/// Letter naming of the ten units of `T4`, row by row: `a b c d / e f g / h i / j`.
pub fn t4_letter(e: &MatrixUnit) -> Option<char> {
    if e.block != 1 || e.row > e.col || e.col > 4 || e.row == 0 {
        return None;
    }
    const LETTERS: [[char; 4]; 4] = [
        ['a', 'b', 'c', 'd'],
        [' ', 'e', 'f', 'g'],
        [' ', ' ', 'h', 'i'],
        [' ', ' ', ' ', 'j'],
    ];
    Some(LETTERS[e.row - 1][e.col - 1])
}

/// Draws the image of a lettered `T4` in `T8` as an 8×8 grid (blank below
/// the diagonal and where no summand lands), one row per line with entries
/// separated by single spaces.
pub fn render_lettered_image(emb: &Embedding) -> Result<String> {
    let m = emb.target().block_size(1);
    let mut grid = vec![vec![' '; m]; m];
    for e in emb.source().units() {
        let letter = t4_letter(e).unwrap_or('?');
        for f in emb.image_of_unit(e)? {
            grid[f.row - 1][f.col - 1] = letter;
        }
    }
    Ok(grid
        .iter()
        .map(|row| {
            let line: String = row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            line.trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n"))
}

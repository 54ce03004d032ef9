//! Report documents. Every list is emitted in a fixed order so that equal
//! inputs give byte-identical output.

use anyhow::Result;
use serde::Serialize;

use afideal::hull_kernel::{BijectionReport, IdealSpace, TopologyReport};
use afideal::nest_rep::gelfand_restricted_order;
use afideal::towers::twist::{render_lettered_image, t4_letter, two_strand_embeddings, CORNER_F};
use afideal::towers::{
    chain_ideal_sequence, decompose_ideal, has_twist, lift_outcomes, verify_k4_limit, Embedding,
    EmbeddingKind, LimitIdealApprox, Tower,
};
use afideal::{Classification, Ideal, IdealLattice, MatrixUnit};

use crate::spec::Analysis;

/// Largest top-level ideal count for which every standard-form sequence is
/// decomposed.
pub const DECOMPOSITION_MAX_IDEALS: u128 = 50_000;

/// A unit as `[block, row, col]`.
pub type UnitTriple = [usize; 3];

pub fn triple(e: &MatrixUnit) -> UnitTriple {
    [e.block, e.row, e.col]
}

pub fn excluded(ideal: &Ideal) -> Vec<UnitTriple> {
    ideal.excluded_units().iter().map(triple).collect()
}

#[derive(Debug, Serialize)]
pub struct IdealRow {
    pub index: usize,
    pub excluded: Vec<UnitTriple>,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Debug, Serialize)]
pub struct LatticeReport {
    pub shape: Vec<usize>,
    pub ideal_count: usize,
    pub meet_irreducible_count: usize,
    pub prime_count: usize,
    pub ideals: Vec<IdealRow>,
}

pub fn lattice_report(lattice: &IdealLattice) -> LatticeReport {
    let classes = lattice.classify_all();
    let ideals: Vec<IdealRow> = lattice
        .ideals()
        .iter()
        .zip(&classes)
        .enumerate()
        .map(|(index, (ideal, c))| IdealRow {
            index,
            excluded: excluded(ideal),
            classification: *c,
        })
        .collect();
    LatticeReport {
        shape: lattice.shape().blocks().to_vec(),
        ideal_count: lattice.len(),
        meet_irreducible_count: classes.iter().filter(|c| c.meet_irreducible).count(),
        prime_count: classes.iter().filter(|c| c.prime).count(),
        ideals,
    }
}

#[derive(Debug, Serialize)]
pub struct TopologyDocument {
    pub shape: Vec<usize>,
    /// Each point is listed by the units it excludes.
    pub points: Vec<Vec<UnitTriple>>,
    pub kuratowski: TopologyReport,
    pub closed_set_count: Option<usize>,
    pub bijection: BijectionReport,
    pub t1: bool,
    /// `[p, q]`: point `p` lies in the closure of point `q`, covering pairs only.
    pub specialization: Vec<[usize; 2]>,
}

impl TopologyDocument {
    pub fn holds(&self) -> bool {
        self.kuratowski.is_topology() && self.bijection.bijective
    }
}

pub fn topology_report(space: &IdealSpace, lattice: &IdealLattice) -> TopologyDocument {
    let kuratowski = space.check_kuratowski();
    let order = space.specialization_order();
    TopologyDocument {
        shape: space.shape().blocks().to_vec(),
        points: space.points().iter().map(excluded).collect(),
        closed_set_count: kuratowski.closed_sets.as_ref().map(Vec::len),
        kuratowski,
        bijection: space.closed_ideal_bijection(lattice),
        t1: order.is_t1(),
        specialization: order.cover_edges().into_iter().map(|(p, q)| [p, q]).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct LevelRow {
    pub level: usize,
    pub blocks: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct StrandRow {
    pub source_block: usize,
    pub target_block: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct EmbeddingRow {
    pub level: usize,
    pub kind: EmbeddingKind,
    pub standard_or_refinement: bool,
    pub strands: Vec<StrandRow>,
}

#[derive(Debug, Serialize)]
pub struct ChainRow {
    pub start_level: usize,
    pub units: Vec<UnitTriple>,
    /// Per step: `I_k = I_{k+1} ∩ A_k`.
    pub compat: Vec<bool>,
    pub containment: bool,
    pub standard_form: bool,
    /// Present for chains in standard form when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k4_limit: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct ChainSection {
    pub chain_count: usize,
    pub standard_form_count: usize,
    pub containment_failures: usize,
    pub chains: Vec<ChainRow>,
}

#[derive(Debug, Serialize)]
pub struct DecompositionSection {
    pub sequences: usize,
    pub recovered: usize,
    /// `[start_level, excluded units of the top ideal]` for each failure.
    pub failures: Vec<(usize, Vec<UnitTriple>)>,
}

#[derive(Debug, Serialize)]
pub struct GelfandRow {
    pub start_level: usize,
    pub units: Vec<UnitTriple>,
    /// Surviving top-level diagonal positions in `≺` order.
    pub points: Vec<UnitTriple>,
    pub surviving_per_level: Vec<usize>,
    pub total: bool,
    pub transitive: bool,
    pub monotone: bool,
}

#[derive(Debug, Serialize)]
pub struct GelfandSection {
    pub chain_count: usize,
    pub violations: usize,
    pub chains: Vec<GelfandRow>,
}

#[derive(Debug, Serialize)]
pub struct PullbackRow {
    pub summand: UnitTriple,
    pub excluded_letters: String,
    pub equals_corner: bool,
    pub strictly_smaller: bool,
    pub is_zero: bool,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleSection {
    pub image: Vec<String>,
    pub corner: UnitTriple,
    pub corner_excluded_letters: String,
    pub pullbacks: Vec<PullbackRow>,
}

#[derive(Debug, Serialize)]
pub struct TwistWitness {
    pub strands: Vec<Vec<usize>>,
    pub pullbacks: Vec<PullbackRow>,
    pub image: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TwistSection {
    pub candidates: usize,
    pub witness_count: usize,
    pub witnesses: Vec<TwistWitness>,
    /// Set when no candidate shows the twist.
    pub empty: bool,
}

#[derive(Debug, Serialize)]
pub struct TowerReport {
    pub schema_version: u32,
    pub levels: Vec<LevelRow>,
    pub embeddings: Vec<EmbeddingRow>,
    pub standard_or_refinement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<ChainSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gelfand: Option<GelfandSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_search: Option<TwistSection>,
    /// Analyses that were requested but do not apply to this tower.
    pub skipped: Vec<String>,
    /// Invariants that failed; non-empty means exit status 1.
    pub violations: Vec<String>,
}

fn letters(units: &[MatrixUnit]) -> String {
    let mut ls: Vec<char> = units.iter().filter_map(t4_letter).collect();
    ls.sort_unstable();
    ls.into_iter().collect()
}

fn pullback_rows(emb: &Embedding) -> Result<Vec<PullbackRow>> {
    let corner = Ideal::largest_excluding(emb.source(), &CORNER_F)?;
    Ok(lift_outcomes(emb, &CORNER_F)?
        .into_iter()
        .map(|o| {
            let pulled = Ideal::excluding(emb.source(), &o.pullback_excluded).expect("pullback is an ideal");
            PullbackRow {
                summand: triple(&o.summand),
                excluded_letters: letters(&o.pullback_excluded),
                equals_corner: o.equals_corner,
                strictly_smaller: pulled.is_subset(&corner) && pulled != corner,
                is_zero: o.is_zero,
            }
        })
        .collect())
}

fn image_lines(emb: &Embedding) -> Result<Vec<String>> {
    Ok(render_lettered_image(emb)?.lines().map(str::to_string).collect())
}

pub fn counterexample_section() -> Result<CounterexampleSection> {
    let emb = Embedding::amplified_refinement_counterexample();
    let corner = Ideal::largest_excluding(emb.source(), &CORNER_F)?;
    Ok(CounterexampleSection {
        image: image_lines(&emb)?,
        corner: triple(&CORNER_F),
        corner_excluded_letters: letters(&corner.excluded_units()),
        pullbacks: pullback_rows(&emb)?,
    })
}

/// The counterexample is expected to lose the corner ideal along both
/// summands; anything else is a violation.
fn counterexample_violations(section: &CounterexampleSection) -> Vec<String> {
    let expected = [([1, 2, 5], "abefh"), ([1, 4, 7], "efhij")];
    let got: Vec<(UnitTriple, &str)> = section
        .pullbacks
        .iter()
        .map(|p| (p.summand, p.excluded_letters.as_str()))
        .collect();
    if got != expected || !section.pullbacks.iter().all(|p| p.strictly_smaller) {
        vec![format!(
            "counterexample pullbacks differ from the expected ones: {got:?}"
        )]
    } else {
        Vec::new()
    }
}

pub fn twist_section() -> Result<TwistSection> {
    let candidates = two_strand_embeddings(4)?;
    let mut witnesses = Vec::new();
    for emb in candidates.iter().filter(|e| has_twist(e, &CORNER_F)) {
        witnesses.push(TwistWitness {
            strands: emb.strands().iter().map(|s| s.map.clone()).collect(),
            pullbacks: pullback_rows(emb)?,
            image: image_lines(emb)?,
        });
    }
    Ok(TwistSection {
        candidates: candidates.len(),
        witness_count: witnesses.len(),
        empty: witnesses.is_empty(),
        witnesses,
    })
}

fn chain_section(tower: &Tower, with_k4: bool, violations: &mut Vec<String>) -> Result<ChainSection> {
    let strict = tower.is_standard_or_refinement();
    let mut rows = Vec::new();
    for chain in tower.all_chains() {
        let approx = chain_ideal_sequence(tower, &chain)?;
        let k4_limit = (with_k4 && approx.standard_form())
            .then(|| verify_k4_limit(&approx))
            .transpose()?;
        let units: Vec<UnitTriple> = chain.units().iter().map(triple).collect();
        if !approx.containment_holds() {
            violations.push(format!("containment fails along chain {units:?}"));
        }
        if strict && !approx.standard_form() {
            violations.push(format!(
                "chain {units:?} is not in standard form on a standard/refinement tower"
            ));
        }
        if k4_limit == Some(false) {
            violations.push(format!("chain {units:?} gives a level ideal that is not (K4)"));
        }
        rows.push(ChainRow {
            start_level: chain.start_level(),
            units,
            compat: approx.compat().to_vec(),
            containment: approx.containment_holds(),
            standard_form: approx.standard_form(),
            k4_limit,
        });
    }
    Ok(ChainSection {
        chain_count: rows.len(),
        standard_form_count: rows.iter().filter(|r| r.standard_form).count(),
        containment_failures: rows.iter().filter(|r| !r.containment).count(),
        chains: rows,
    })
}

fn decomposition_section(tower: &Tower, violations: &mut Vec<String>) -> Result<DecompositionSection> {
    let top = tower.top_level();
    let lattice = afideal::enumerate_ideals(tower.shape(top))?;
    let mut sequences = 0;
    let mut failures = Vec::new();
    for j in lattice.ideals() {
        let full = tower.pullback_sequence(top, j)?;
        for k0 in 0..=top {
            let approx = LimitIdealApprox::from_sequence(tower, k0, full[k0..].to_vec())?;
            let d = decompose_ideal(tower, &approx)?;
            if !(d.recovers_top && d.contains_levelwise && d.separates_units) {
                failures.push((k0, excluded(j)));
            }
            sequences += 1;
        }
    }
    if !failures.is_empty() {
        violations.push(format!(
            "{} standard-form sequences are not recovered by chains",
            failures.len()
        ));
    }
    Ok(DecompositionSection {
        sequences,
        recovered: sequences - failures.len(),
        failures,
    })
}

fn gelfand_section(tower: &Tower, violations: &mut Vec<String>) -> Result<GelfandSection> {
    let mut rows = Vec::new();
    for chain in tower.all_complete_chains() {
        let g = gelfand_restricted_order(tower, &chain)?;
        rows.push(GelfandRow {
            start_level: chain.start_level(),
            units: chain.units().iter().map(triple).collect(),
            points: g.points.iter().map(triple).collect(),
            surviving_per_level: g.surviving_by_level.iter().map(Vec::len).collect(),
            total: g.total,
            transitive: g.transitive,
            monotone: g.monotone,
        });
    }
    let bad = rows
        .iter()
        .filter(|r| !(r.total && r.transitive && r.monotone))
        .count();
    if bad > 0 {
        violations.push(format!(
            "{bad} chains give an order on surviving points that is not total and transitive"
        ));
    }
    Ok(GelfandSection {
        chain_count: rows.len(),
        violations: bad,
        chains: rows,
    })
}

pub fn tower_report(tower: &Tower, analyses: &[Analysis]) -> Result<TowerReport> {
    let mut violations = Vec::new();
    let mut skipped = Vec::new();
    let standard = tower.is_standard_or_refinement();
    let mut report = TowerReport {
        schema_version: crate::spec::SCHEMA_VERSION,
        levels: tower
            .shapes()
            .iter()
            .enumerate()
            .map(|(level, s)| LevelRow {
                level,
                blocks: s.blocks().to_vec(),
            })
            .collect(),
        embeddings: tower
            .embeddings()
            .iter()
            .enumerate()
            .map(|(level, e)| EmbeddingRow {
                level,
                kind: e.kind(),
                standard_or_refinement: e.is_standard_or_refinement(),
                strands: e
                    .strands()
                    .iter()
                    .map(|s| StrandRow {
                        source_block: s.source_block,
                        target_block: s.target_block,
                        map: s.map.clone(),
                    })
                    .collect(),
            })
            .collect(),
        standard_or_refinement: standard,
        chains: None,
        decomposition: None,
        gelfand: None,
        counterexample: None,
        twist_search: None,
        skipped: Vec::new(),
        violations: Vec::new(),
    };
    if analyses.contains(&Analysis::Chains) || analyses.contains(&Analysis::K4Limits) {
        report.chains = Some(chain_section(
            tower,
            analyses.contains(&Analysis::K4Limits),
            &mut violations,
        )?);
    }
    if analyses.contains(&Analysis::Decomposition) {
        let top_ideals = afideal::lattice::ideal_count(tower.shape(tower.top_level()));
        if standard && top_ideals <= DECOMPOSITION_MAX_IDEALS {
            report.decomposition = Some(decomposition_section(tower, &mut violations)?);
        } else if standard {
            skipped.push(format!(
                "decomposition: top level has {top_ideals} ideals, limit is {DECOMPOSITION_MAX_IDEALS}"
            ));
        } else {
            skipped
                .push("decomposition: tower has a component that is neither standard nor refinement".into());
        }
    }
    if analyses.contains(&Analysis::Gelfand) {
        if standard {
            report.gelfand = Some(gelfand_section(tower, &mut violations)?);
        } else {
            skipped.push("gelfand: tower has a component that is neither standard nor refinement".into());
        }
    }
    if analyses.contains(&Analysis::Counterexample) {
        let section = counterexample_section()?;
        violations.extend(counterexample_violations(&section));
        report.counterexample = Some(section);
    }
    if analyses.contains(&Analysis::TwistSearch) {
        let section = twist_section()?;
        if section.empty {
            violations.push("twist search found no embedding with the twist behaviour".into());
        }
        report.twist_search = Some(section);
    }
    report.skipped = skipped;
    report.violations = violations;
    Ok(report)
}

/// Plain-text rendering of the counterexample section.
pub fn counterexample_text(section: &CounterexampleSection) -> String {
    let mut out = String::from("T4 -> T8, refinement amplified by two\n");
    for line in &section.image {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!(
        "I{} excludes {}\n",
        unit_text(&section.corner),
        braces(&section.corner_excluded_letters)
    ));
    for p in &section.pullbacks {
        out.push_str(&format!(
            "pullback of I{} excludes {}{}\n",
            unit_text(&p.summand),
            braces(&p.excluded_letters),
            if p.strictly_smaller {
                " (strictly smaller)"
            } else {
                ""
            }
        ));
    }
    out
}

/// Plain-text rendering of the twist search.
pub fn twist_text(section: &TwistSection) -> String {
    let mut out = format!(
        "candidates: {}\nwitnesses: {}\n",
        section.candidates, section.witness_count
    );
    for w in &section.witnesses {
        let strands: Vec<String> = w.strands.iter().map(|m| format!("{m:?}")).collect();
        out.push_str(&format!("\nstrands {}\n", strands.join(" ")));
        for line in &w.image {
            out.push_str(line);
            out.push('\n');
        }
        for p in &w.pullbacks {
            let verdict = if p.equals_corner {
                "equals I(f)"
            } else if p.is_zero {
                "zero"
            } else {
                "other"
            };
            out.push_str(&format!(
                "pullback of I{} excludes {} ({verdict})\n",
                unit_text(&p.summand),
                braces(&p.excluded_letters)
            ));
        }
    }
    if section.empty {
        out.push_str("no candidate shows the twist\n");
    }
    out
}

fn unit_text(u: &UnitTriple) -> String {
    format!("({},{},{})", u[0], u[1], u[2])
}

fn braces(letters: &str) -> String {
    let parts: Vec<String> = letters.chars().map(String::from).collect();
    format!("{{{}}}", parts.join(","))
}

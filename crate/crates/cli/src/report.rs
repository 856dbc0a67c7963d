//! Serializable reports. Integers are decimal strings and matrices are arrays
//! of rows, so reports survive a JSON round trip unchanged.

use std::fmt::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use toric_gauss::configuration::ValidationWarning;
use toric_gauss::constructions::{Construction, Provenance, Verification};
use toric_gauss::criteria::{CayleyDecomposition, DevelopabilityReport, JoinReport};
use toric_gauss::gaussmap::{GaussInvariants, GaussStructure};
use toric_gauss::IntegerMatrix;

pub type Rows = Vec<Vec<String>>;

pub fn int(x: &BigInt) -> String {
    x.to_string()
}

pub fn count(x: usize) -> String {
    x.to_string()
}

pub fn vector(v: &[BigInt]) -> Vec<String> {
    v.iter().map(int).collect()
}

pub fn rows(points: &[Vec<BigInt>]) -> Rows {
    points.iter().map(|p| vector(p)).collect()
}

pub fn matrix(m: &IntegerMatrix) -> Rows {
    rows(&m.to_rows())
}

fn render_rows(r: &Rows) -> String {
    let inner: Vec<String> = r.iter().map(|row| format!("({})", row.join(", "))).collect();
    format!("{{{}}}", inner.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub original: Rows,
    pub normalized: Rows,
    pub origin: Vec<String>,
    /// Rows span the difference lattice; normalized `y` is `origin + y * change_of_basis`.
    pub change_of_basis: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsSummary {
    pub count: String,
    pub witness_count: String,
    pub elements: Rows,
    pub elements_truncated: bool,
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub defect: String,
    pub rank: String,
    pub deg_g2: String,
    pub sep_deg: String,
    pub insep_deg: String,
    pub insep_exponent: String,
    pub component_count: String,
    pub separable: bool,
    pub birational: bool,
    pub degenerate: bool,
}

impl From<&GaussInvariants> for InvariantsReport {
    fn from(inv: &GaussInvariants) -> Self {
        InvariantsReport {
            defect: count(inv.defect),
            rank: count(inv.rank),
            deg_g2: int(&inv.deg_g2),
            sep_deg: int(&inv.sep_deg),
            insep_deg: int(&inv.insep_deg),
            insep_exponent: inv.insep_exponent.to_string(),
            component_count: int(&inv.component_count),
            separable: inv.separable,
            birational: inv.birational,
            degenerate: inv.degenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceReport {
    pub kind: String,
    pub fiber: Option<Rows>,
    pub image: Option<Rows>,
    pub components: Option<String>,
    pub rank: Option<String>,
    pub n: Option<String>,
    pub size: Option<String>,
    pub exponents: Option<Vec<String>>,
}

impl From<&Provenance> for ProvenanceReport {
    fn from(p: &Provenance) -> Self {
        let mut out = ProvenanceReport {
            kind: p.name().into(),
            fiber: None,
            image: None,
            components: None,
            rank: None,
            n: None,
            size: None,
            exponents: None,
        };
        match p {
            Provenance::FiberAndImage { fiber, image, components } => {
                out.fiber = Some(rows(fiber.points()));
                out.image = Some(rows(image.points()));
                out.components = Some(int(components));
            }
            Provenance::FiberAndRank { fiber, rank, components, n, big_n } => {
                out.fiber = Some(rows(fiber.points()));
                out.components = Some(int(components));
                out.rank = Some(count(*rank));
                out.n = Some(count(*n));
                out.size = Some(count(*big_n));
            }
            Provenance::BirationalHypersurface { exponents } => {
                out.n = Some(count(exponents.len()));
                out.exponents = Some(vector(exponents));
            }
            Provenance::BirationalCodim2 { n } => out.n = Some(count(*n)),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub characteristic: String,
    pub mode: String,
    pub input: InputEcho,
    pub warnings: Vec<String>,
    pub spanning_sums: SumsSummary,
    pub lattice: Rows,
    pub saturation: Rows,
    pub projection: Rows,
    pub splitting: Rows,
    pub fiber_config: Rows,
    pub image_config: Option<Rows>,
    pub invariants: InvariantsReport,
    pub provenance: Option<ProvenanceReport>,
}

pub fn warning_text(w: &ValidationWarning) -> String {
    match w {
        ValidationWarning::DuplicateDropped { index, duplicate_of } => {
            format!("point {} duplicates point {} and was dropped", index, duplicate_of)
        }
    }
}

impl AnalysisReport {
    pub fn new(s: &GaussStructure, warnings: &[ValidationWarning], max_sums: usize) -> Self {
        let sums = &s.spanning_sums;
        let shown = sums.sums.len().min(max_sums);
        AnalysisReport {
            characteristic: s.characteristic().to_string(),
            mode: match s.mode {
                toric_gauss::gaussmap::EnumerationMode::Full => "full".into(),
                toric_gauss::gaussmap::EnumerationMode::InvariantsOnly => "fast".into(),
            },
            input: InputEcho {
                original: rows(s.original.points()),
                normalized: rows(s.input().points()),
                origin: vector(&s.normalization.origin),
                change_of_basis: matrix(&s.normalization.change_of_basis),
            },
            warnings: warnings.iter().map(warning_text).collect(),
            spanning_sums: SumsSummary {
                count: count(sums.sums.len()),
                witness_count: sums.witness_count.to_string(),
                elements: rows(&sums.sums[..shown]),
                elements_truncated: shown < sums.sums.len(),
                partial: sums.partial,
            },
            lattice: matrix(s.lattice.basis()),
            saturation: matrix(s.saturation.basis()),
            projection: matrix(&s.projection.matrix),
            splitting: matrix(&s.projection.splitting),
            fiber_config: rows(s.fiber_config.points()),
            image_config: s.image_config.as_ref().map(|c| rows(c.points())),
            invariants: (&s.invariants).into(),
            provenance: None,
        }
    }

    pub fn to_text(&self) -> String {
        let inv = &self.invariants;
        let mut out = String::new();
        let _ = writeln!(out, "characteristic   {}", self.characteristic);
        let _ = writeln!(out, "points           {}", render_rows(&self.input.original));
        let _ = writeln!(out, "normalized       {}", render_rows(&self.input.normalized));
        for w in &self.warnings {
            let _ = writeln!(out, "warning          {}", w);
        }
        let partial = if self.spanning_sums.partial { " (partial)" } else { "" };
        let _ = writeln!(out, "B                {}{}", render_rows(&self.spanning_sums.elements), partial);
        let _ = writeln!(out, "<B-B>            {}", render_rows(&self.lattice));
        let _ = writeln!(out, "saturation       {}", render_rows(&self.saturation));
        let _ = writeln!(out, "fiber config     {}", render_rows(&self.fiber_config));
        if let Some(img) = &self.image_config {
            let _ = writeln!(out, "image config     {}", render_rows(img));
        }
        let _ = writeln!(out, "defect           {}", inv.defect);
        let _ = writeln!(out, "rank             {}", inv.rank);
        let _ = writeln!(out, "degree           {} = {} (insep) x {} (sep)", inv.deg_g2, inv.insep_deg, inv.sep_deg);
        let _ = writeln!(out, "components       {}", inv.component_count);
        let _ = writeln!(out, "separable        {}", inv.separable);
        let _ = writeln!(out, "birational       {}", inv.birational);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DevelopabilityOut {
    pub characteristic: String,
    pub projection: Rows,
    pub class_images: Rows,
    pub class_dimensions: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub developable: bool,
    pub cross_check: Option<bool>,
}

impl DevelopabilityOut {
    pub fn new(characteristic: String, r: &DevelopabilityReport) -> Self {
        DevelopabilityOut {
            characteristic,
            projection: matrix(&r.projection),
            class_images: rows(&r.class_images),
            class_dimensions: r.class_dimensions.iter().map(|&d| count(d)).collect(),
            lhs: count(r.lhs),
            rhs: r.rhs.to_string(),
            developable: r.developable,
            cross_check: r.cross_check,
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "sum of class dimensions {} vs {}: {}\nlattice check: {}\n",
            self.lhs,
            self.rhs,
            if self.developable { "developable" } else { "not developable" },
            self.cross_check.map_or("not run".to_string(), |b| b.to_string()),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMapOut {
    pub linear: Rows,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinOut {
    pub join_dim: String,
    pub codimension: String,
    pub per_part_gaps: Vec<String>,
    pub is_join: bool,
}

impl From<&JoinReport> for JoinOut {
    fn from(j: &JoinReport) -> Self {
        JoinOut {
            join_dim: count(j.join_dim),
            codimension: count(j.codimension),
            per_part_gaps: j.per_part_gaps.iter().map(|&g| count(g)).collect(),
            is_join: j.is_join,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionOut {
    pub characteristic: String,
    pub invariants: InvariantsReport,
    pub l: String,
    pub parts: Vec<Rows>,
    pub class_indices: Vec<Vec<String>>,
    pub origin: Vec<String>,
    pub change_of_basis: Rows,
    /// Acts on normalized coordinates.
    pub identification: AffineMapOut,
    pub splitting: Rows,
    pub join: JoinOut,
}

impl DecompositionOut {
    pub fn new(s: &GaussStructure, d: &CayleyDecomposition, j: &JoinReport) -> Self {
        DecompositionOut {
            characteristic: s.characteristic().to_string(),
            invariants: (&s.invariants).into(),
            l: count(d.l),
            parts: d.parts.iter().map(|p| rows(p.points())).collect(),
            class_indices: d.class_indices.iter().map(|c| c.iter().map(|&i| count(i)).collect()).collect(),
            origin: vector(&s.normalization.origin),
            change_of_basis: matrix(&s.normalization.change_of_basis),
            identification: AffineMapOut {
                linear: matrix(&d.identification.linear),
                translation: vector(&d.identification.translation),
            },
            splitting: matrix(&d.splitting_used),
            join: j.into(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "l                {}", self.l);
        for (i, p) in self.parts.iter().enumerate() {
            let _ = writeln!(out, "part {:<11} {}", i, render_rows(p));
        }
        let _ = writeln!(out, "join dimension   {}", self.join.join_dim);
        let _ = writeln!(out, "codimension      {}", self.join.codimension);
        let _ = writeln!(out, "gaps             ({})", self.join.per_part_gaps.join(", "));
        let _ = writeln!(out, "is join          {}", self.join.is_join);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionOut {
    pub characteristic: String,
    pub provenance: ProvenanceReport,
    pub points: Rows,
    pub checks: Vec<CheckOut>,
    pub verified: bool,
    pub analysis: AnalysisReport,
}

impl ConstructionOut {
    pub fn new(c: &Construction, v: &Verification, max_sums: usize) -> Self {
        let mut analysis = AnalysisReport::new(&v.structure, &[], max_sums);
        let provenance = ProvenanceReport::from(&c.provenance);
        analysis.provenance = Some(provenance.clone());
        ConstructionOut {
            characteristic: c.configuration.characteristic().to_string(),
            provenance,
            points: rows(c.configuration.points()),
            checks: v
                .checks
                .iter()
                .map(|k| CheckOut { claim: k.claim.into(), expected: k.expected.clone(), actual: k.actual.clone(), holds: k.holds })
                .collect(),
            verified: v.holds(),
            analysis,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "construction     {} (p = {})", self.provenance.kind, self.characteristic);
        let _ = writeln!(out, "points           {}", render_rows(&self.points));
        for c in &self.checks {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{} {:<16} expected {}, got {}", mark, c.claim, c.expected, c.actual);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepLine {
    pub characteristic: String,
    pub field_order: String,
    pub configurations: String,
    pub samples: String,
    pub disagreements: String,
    pub support_mismatches: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCountLine {
    pub characteristic: String,
    pub lattices: String,
    pub mismatches: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub seed: String,
    pub samples_per_configuration: String,
    pub plucker: Vec<SweepLine>,
    pub fiber_counts: Vec<FiberCountLine>,
    pub passed: bool,
}

impl VerifyOut {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.plucker {
            let _ = writeln!(
                out,
                "p = {:<3} q = {:<4} configs {:<5} samples {:<6} disagreements {} support mismatches {}",
                l.characteristic, l.field_order, l.configurations, l.samples, l.disagreements, l.support_mismatches
            );
        }
        for l in &self.fiber_counts {
            let _ = writeln!(out, "p = {:<3} fiber counts over {} lattices, mismatches {}", l.characteristic, l.lattices, l.mismatches);
        }
        let _ = writeln!(out, "{}", if self.passed { "passed" } else { "FAILED" });
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorOut {
    pub error: crate::error::CliError,
}

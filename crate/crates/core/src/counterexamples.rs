//! Limit-form counterexamples: a dumbbell whose neck and hole shrink, the
//! disk/annulus comparison behind it, and rectangles against the disk of
//! the same area.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::closed_form::{
    disk_neumann_spectrum, expand_multiplicities, rectangle_neumann_spectrum, segment_dirichlet_spectrum, ModelMode,
};
use crate::error::{Error, Result};
use crate::radial_sl::{RobinParameter, ShellGeometry};
use crate::shell_spectrum::{assemble_spectrum, SpectrumMethod};

/// Differences below this are reported as ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Greater,
    Less,
    Tie,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Greater => ">",
            Relation::Less => "<",
            Relation::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub label: String,
    pub lhs_label: String,
    pub lhs_value: f64,
    pub rhs_label: String,
    pub rhs_value: f64,
    pub relation: Relation,
    /// `|lhs − rhs|`.
    pub margin: f64,
    pub parameters: Vec<(String, f64)>,
}

impl ComparisonReport {
    pub fn new(
        label: impl Into<String>,
        lhs: (impl Into<String>, f64),
        rhs: (impl Into<String>, f64),
        parameters: Vec<(String, f64)>,
    ) -> Self {
        let diff = lhs.1 - rhs.1;
        let relation = if diff.abs() < TIE_TOL {
            Relation::Tie
        } else if diff > 0.0 {
            Relation::Greater
        } else {
            Relation::Less
        };
        Self {
            label: label.into(),
            lhs_label: lhs.0.into(),
            lhs_value: lhs.1,
            rhs_label: rhs.0.into(),
            rhs_value: rhs.1,
            relation,
            margin: diff.abs(),
            parameters,
        }
    }
}

/// Which piece of the limiting dumbbell an eigenvalue comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumbbellPart {
    /// Neumann unit disk.
    Disk,
    /// Dirichlet segment of the neck.
    Neck,
    /// Unit disk with a Dirichlet hole of radius `α`.
    Shell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumbbellEntry {
    pub value: f64,
    pub part: DumbbellPart,
    pub mode: ModelMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumbbellSpectrum {
    /// First `count` limit eigenvalues, counted with multiplicity.
    pub entries: Vec<DumbbellEntry>,
    pub mu2_disk: f64,
    pub tau1_shell: f64,
    pub lambda1_neck: f64,
    /// `λ₁ > max{μ₂(B₁), τ₁(B₁∖B̄_α)}`; false when the neck is too long.
    pub precondition_holds: bool,
}

/// Limit spectrum of two unit disks joined by a neck of length
/// `2·neck_half_length`, one of them with a Dirichlet hole of radius
/// `alpha`, as the neck width and the hole offset tend to zero.
pub fn dumbbell_limit_spectrum(neck_half_length: f64, alpha: f64, count: usize) -> Result<DumbbellSpectrum> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("α = {alpha} must lie in (0, 1)")));
    }
    let count = count.max(2);
    let disk_entries = disk_neumann_spectrum(1.0, count)?;
    let mut entries: Vec<DumbbellEntry> = disk_entries
        .iter()
        .flat_map(|e| std::iter::repeat(DumbbellEntry { value: e.value, part: DumbbellPart::Disk, mode: e.mode }).take(e.multiplicity as usize))
        .take(count)
        .collect();
    let mu2_disk = expand_multiplicities(&disk_entries, 2)[1];
    let neck = segment_dirichlet_spectrum(neck_half_length, count)?;
    let lambda1_neck = neck[0].value;
    entries.extend(neck.iter().map(|e| DumbbellEntry { value: e.value, part: DumbbellPart::Neck, mode: e.mode }));
    let g = ShellGeometry::new(2, alpha, 1.0)?;
    let shell = assemble_spectrum(&g, RobinParameter::DirichletLimit, count, SpectrumMethod::Auto)?;
    let tau1_shell = shell[0].tau;
    entries.extend(shell.iter().map(|e| DumbbellEntry {
        value: e.tau,
        part: DumbbellPart::Shell,
        mode: ModelMode::Shell { l: e.l, j: e.j as u32 },
    }));
    entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(part_key(a.part).cmp(&part_key(b.part))));
    entries.truncate(count);
    Ok(DumbbellSpectrum {
        entries,
        mu2_disk,
        tau1_shell,
        lambda1_neck,
        precondition_holds: lambda1_neck > mu2_disk.max(tau1_shell),
    })
}

fn part_key(p: DumbbellPart) -> u8 {
    match p {
        DumbbellPart::Disk => 0,
        DumbbellPart::Neck => 1,
        DumbbellPart::Shell => 2,
    }
}

/// `τ₁` of `B₁ ∖ B̄_α` and `τ₂` of `B_√2 ∖ B̄_α`, both with a Dirichlet hole.
pub fn central_symmetry_values(alpha: f64) -> Result<(f64, f64)> {
    let unit = ShellGeometry::new(2, alpha, 1.0)?;
    let wide = ShellGeometry::new(2, alpha, 2f64.sqrt())?;
    let (t1, t2) = rayon::join(
        || assemble_spectrum(&unit, RobinParameter::DirichletLimit, 1, SpectrumMethod::Auto),
        || assemble_spectrum(&wide, RobinParameter::DirichletLimit, 2, SpectrumMethod::Auto),
    );
    Ok((t1?[0].tau, t2?[1].tau))
}

/// Per `α`: `min{μ₂(B₁), τ₁(B₁∖B̄_α)}` against `τ₂(B_√2∖B̄_α)`.
pub fn verify_central_symmetry_counterexample(alpha_grid: &[f64]) -> Result<Vec<ComparisonReport>> {
    let mu2 = expand_multiplicities(&disk_neumann_spectrum(1.0, 2)?, 2)[1];
    alpha_grid
        .par_iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter(format!("α = {alpha} must lie in (0, 1)")));
            }
            let (tau1, tau2) = central_symmetry_values(alpha)?;
            Ok(ComparisonReport::new(
                "central symmetry",
                ("min(mu2(B1), tau1(B1 \\ B_alpha))", mu2.min(tau1)),
                ("tau2(B_sqrt2 \\ B_alpha)", tau2),
                vec![("alpha".into(), alpha)],
            ))
        })
        .collect()
}

/// Rectangles of unit area against the disk of unit area.
pub fn verify_order_symmetry_counterexamples() -> Result<Vec<ComparisonReport>> {
    let disk = expand_multiplicities(&disk_neumann_spectrum(1.0 / PI.sqrt(), 5)?, 5);
    let long = rectangle_neumann_spectrum(3f64.sqrt(), 5)?;
    let square = rectangle_neumann_spectrum(1.0, 5)?;
    let a = ("a".to_string(), 3f64.sqrt());
    Ok(vec![
        ComparisonReport::new("mu3 rectangle vs mu2 disk", ("mu3(R_sqrt3)", long[2].value), ("mu2(B)", disk[1]), vec![a.clone()]),
        ComparisonReport::new("mu4 rectangle vs mu4 disk", ("mu4(R_sqrt3)", long[3].value), ("mu4(B)", disk[3]), vec![a]),
        ComparisonReport::new(
            "mu5 square vs mu5 disk",
            ("mu5(R_1)", square[4].value),
            ("mu5(B)", disk[4]),
            vec![("a".into(), 1.0)],
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_from_difference() {
        let r = ComparisonReport::new("x", ("a", 2.0), ("b", 1.5), vec![]);
        assert_eq!((r.relation, r.margin), (Relation::Greater, 0.5));
        let t = ComparisonReport::new("x", ("a", 1.0), ("b", 1.0 + 1e-10), vec![]);
        assert_eq!(t.relation, Relation::Tie);
        let l = ComparisonReport::new("x", ("a", 1.0), ("b", 1.0 + 1e-8), vec![]);
        assert_eq!(l.relation, Relation::Less);
        assert_eq!(Relation::Greater.to_string(), ">");
    }
}

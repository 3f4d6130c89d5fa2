//! The type table: one representative per edge-state construction at
//! `b = 1`, `θ = π/6`, against the list of possible `3⊗3` edge-state types.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write;

use anyhow::Result;
use edgelab_core::classify::{classify, Tolerances};
use edgelab_core::linalg::{c64, cis};
use edgelab_core::states::{edge_state, face_state, face_state_for_target};
use edgelab_core::{BipartiteOperator, EdgeFamilyParams, GramSpec};

pub const REFERENCE_B: f64 = 1.0;
pub const REFERENCE_THETA: f64 = PI / 6.0;

/// Possible `3⊗3` edge-state types, listed with `p ≥ q`.
pub const TARGETS: [(usize, usize); 8] = [(4, 4), (5, 5), (6, 5), (7, 5), (8, 5), (6, 6), (7, 6), (8, 6)];
/// Targets with no construction here.
pub const NOT_CONSTRUCTED: [(usize, usize); 1] = [(4, 4)];

#[derive(Clone, Debug, PartialEq)]
pub struct Representative {
    pub label: String,
    pub kind: (usize, usize),
    pub is_ppt: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub representatives: Vec<Representative>,
    /// Achieved types, normalised to `p ≥ q`.
    pub achieved: BTreeSet<(usize, usize)>,
    pub missing: Vec<(usize, usize)>,
}

impl TableReport {
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
    }
}

fn normalised((p, q): (usize, usize)) -> (usize, usize) {
    (p.max(q), p.min(q))
}

fn representatives() -> Result<Vec<(String, BipartiteOperator)>> {
    let (b, theta) = (REFERENCE_B, REFERENCE_THETA);
    let zero = c64(0.0, 0.0);
    let mut out = vec![(
        "edge A(b,θ)".to_string(),
        edge_state(&EdgeFamilyParams::new(b, theta)?),
    )];
    let selections = [
        ("face (0, 0, 0)", [zero, zero, zero]),
        ("face (e^{0.3i}, 0, 0)", [cis(0.3), zero, zero]),
        ("face (e^{0.3i}, e^{-0.1i}, 0)", [cis(0.3), cis(-0.1), zero]),
        ("face (e^{0.3i}, e^{-0.1i}, e^{0.2i})", [cis(0.3), cis(-0.1), cis(0.2)]),
    ];
    for (label, [xi_eta, eta_zeta, zeta_xi]) in selections {
        let g = GramSpec::new(xi_eta, eta_zeta, zeta_xi, theta);
        out.push((label.to_string(), face_state(b, &g)?));
    }
    for target in 5..=8 {
        out.push((format!("p5 target {target}"), face_state_for_target(b, theta, target)?));
    }
    Ok(out)
}

pub fn build_table() -> Result<TableReport> {
    let tol = Tolerances::default();
    let mut reps = Vec::new();
    for (label, s) in representatives()? {
        let c = classify(&s, tol.rel_tol, tol.abs_tol)?;
        reps.push(Representative {
            label,
            kind: c.kind,
            is_ppt: c.is_ppt,
        });
    }
    let achieved: BTreeSet<_> = reps
        .iter()
        .filter(|r| r.is_ppt)
        .map(|r| normalised(r.kind))
        .collect();
    let missing = TARGETS
        .iter()
        .filter(|t| !NOT_CONSTRUCTED.contains(t) && !achieved.contains(t))
        .copied()
        .collect();
    Ok(TableReport {
        representatives: reps,
        achieved,
        missing,
    })
}

/// Grid over `4 ≤ p, q ≤ 8`. `#` realised as listed, `+` a target realised
/// only with p and q swapped, `?` not constructed here, `o` missing target, `.` other.
pub fn render(report: &TableReport) -> String {
    let raw: BTreeSet<_> = report
        .representatives
        .iter()
        .filter(|r| r.is_ppt)
        .map(|r| r.kind)
        .collect();
    let mut s = String::new();
    let _ = writeln!(s, "reference b = {REFERENCE_B}, θ = π/6");
    for r in &report.representatives {
        let _ = writeln!(s, "  {:<40} ({}, {}){}", r.label, r.kind.0, r.kind.1, if r.is_ppt { "" } else { "  not PPT" });
    }
    let _ = writeln!(s, "\n  q\\p  4 5 6 7 8");
    for q in 4..=8 {
        let _ = write!(s, "  {q}   ");
        for p in 4..=8 {
            let cell = if raw.contains(&(p, q)) {
                '#'
            } else if p >= q && TARGETS.contains(&(p, q)) && raw.contains(&(q, p)) {
                '+'
            } else if NOT_CONSTRUCTED.contains(&normalised((p, q))) {
                '?'
            } else if TARGETS.contains(&normalised((p, q))) && p >= q {
                'o'
            } else {
                '.'
            };
            let _ = write!(s, " {cell}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "\n  # realised   + realised as (q,p)   ? not constructed here   o missing");
    let list = |v: &mut dyn Iterator<Item = (usize, usize)>| {
        v.map(|(p, q)| format!("({p},{q})")).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(s, "targets:  {}", list(&mut TARGETS.iter().copied()));
    let _ = writeln!(s, "achieved: {}", list(&mut report.achieved.iter().copied()));
    if report.complete() {
        let _ = writeln!(s, "all targets except (4,4) achieved");
    } else {
        let _ = writeln!(s, "missing:  {}", list(&mut report.missing.iter().copied()));
    }
    s
}

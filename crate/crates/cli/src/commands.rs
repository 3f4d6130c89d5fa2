//! `construct`, `classify`, `edge-check` and `decompose`.

use std::path::Path;

use anyhow::{bail, Result};
use edgelab_core::classify::{classify, Tolerances};
use edgelab_core::{
    product_vector_search, reconstruct_separable, verify_edge_analytic, BipartiteOperator,
    Classification, EdgeVerdict, SearchConfig, SearchVerdict, C64,
};
use serde::Serialize;

use crate::family::{build, Family, Params};
use crate::json;
use crate::matrix_file::MatrixFile;

/// Text for stdout and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    pub fn ok(output: String) -> Self {
        Self { output, code: 0 }
    }
}

/// Either a matrix file or a family with parameters.
#[derive(Clone, Debug)]
pub enum Input<'a> {
    File(&'a Path),
    Family(Family, Params),
}

impl Input<'_> {
    pub fn load(&self) -> Result<BipartiteOperator> {
        match self {
            Input::File(path) => MatrixFile::read(path)?.to_operator(),
            Input::Family(f, p) => build(*f, p),
        }
    }
}

pub fn construct(family: Family, params: &Params) -> Result<String> {
    Ok(MatrixFile::from_operator(&build(family, params)?).to_json())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TolerancesReport {
    rel_tol: f64,
    abs_tol: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    #[serde(rename = "isPSD")]
    is_psd: bool,
    #[serde(rename = "isPPT")]
    is_ppt: bool,
    #[serde(rename = "type")]
    kind: [usize; 2],
    kernel_dims: [usize; 2],
    admissibility: &'static str,
    tolerances: TolerancesReport,
}

impl From<&Classification> for ClassifyReport {
    fn from(c: &Classification) -> Self {
        Self {
            is_psd: c.is_psd,
            is_ppt: c.is_ppt,
            kind: [c.kind.0, c.kind.1],
            kernel_dims: [c.kernel_dims.0, c.kernel_dims.1],
            admissibility: c.admissibility.as_str(),
            tolerances: TolerancesReport {
                rel_tol: c.tolerances.rel_tol,
                abs_tol: c.tolerances.abs_tol,
            },
        }
    }
}

pub fn classify_report(s: &BipartiteOperator, tol: Tolerances) -> Result<(Classification, String)> {
    let c = classify(s, tol.rel_tol, tol.abs_tol)?;
    let text = json::to_string(&ClassifyReport::from(&c))?;
    Ok((c, text))
}

/// Exit 0 for a PPT state, 1 otherwise.
pub fn classify_cmd(input: &Input, tol: Tolerances) -> Result<Outcome> {
    let (c, output) = classify_report(&input.load()?, tol)?;
    Ok(Outcome {
        output,
        code: if c.is_ppt { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct ComplexVector {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<&[C64]> for ComplexVector {
    fn from(v: &[C64]) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EdgeCheckReport {
    verdict: &'static str,
    best_objective: f64,
    certified_by: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_x: Option<ComplexVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_y: Option<ComplexVector>,
}

/// Runs the numeric search and, with `analytic` on the edge family inside
/// its parameter range, the analytic certificate.
///
/// Verdicts: `Edge` (certified, analytically or because the search stays
/// above the edge floor), `ProductVectorFound`, or `NoneFoundAboveThreshold`
/// when the best objective lies between the found threshold and the floor.
pub fn edge_check(input: &Input, cfg: &SearchConfig, analytic: bool) -> Result<Outcome> {
    let s = input.load()?;
    let search = product_vector_search(&s, cfg);

    let mut certified_analytically = false;
    if analytic {
        if let Input::Family(Family::Edge, p) = input {
            let (b, theta) = (p.b.unwrap_or_default(), p.theta.unwrap_or_default());
            let params = edgelab_core::EdgeFamilyParams::new(b, theta)?;
            if params.satisfies_condition() {
                certified_analytically =
                    verify_edge_analytic(&params)?.verdict == EdgeVerdict::EdgeCertified;
            }
        } else {
            bail!("--analytic applies only to --family edge");
        }
    }

    // The certificate is a proof; near θ = 0 the true objective minimum can
    // fall below the numeric threshold, so it takes precedence.
    let found = !certified_analytically && search.verdict == SearchVerdict::ProductVectorFound;
    let (verdict, certified_by) = if certified_analytically {
        ("Edge", "analytic")
    } else if found {
        ("ProductVectorFound", "numeric")
    } else if search.clears_edge_floor() {
        ("Edge", "numeric")
    } else {
        ("NoneFoundAboveThreshold", "numeric")
    };
    let report = EdgeCheckReport {
        verdict,
        best_objective: search.best_objective,
        certified_by,
        best_x: found.then(|| search.best_x.as_slice().into()),
        best_y: found.then(|| search.best_y.as_slice().into()),
    };
    Ok(Outcome::ok(json::to_string(&report)?))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DecomposeReport {
    b: f64,
    max_error: f64,
}

pub fn decompose(b: f64) -> Result<Outcome> {
    let max_error = reconstruct_separable(b)?;
    Ok(Outcome::ok(json::to_string(&DecomposeReport { b, max_error })?))
}

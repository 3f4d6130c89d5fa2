//! On-disk matrix format: `{ "m", "n", "re", "im" }` with `re` and `im` as
//! `(m·n)×(m·n)` arrays of rows.

use std::path::Path;

use anyhow::{bail, Context, Result};
use edgelab_core::linalg::c64;
use edgelab_core::{BipartiteOperator, DenseMatrix};
use serde::{Deserialize, Serialize};

use crate::json;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub m: usize,
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_operator(s: &BipartiteOperator) -> Self {
        let mat = s.mat();
        let d = mat.rows();
        let part = |f: fn(&edgelab_core::C64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|i| (0..d).map(|j| f(&mat[(i, j)])).collect()).collect()
        };
        Self {
            m: s.m(),
            n: s.n(),
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn to_operator(&self) -> Result<BipartiteOperator> {
        let d = self.m * self.n;
        if d == 0 {
            bail!("m and n must be positive");
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                bail!("`{name}` must be a {d}x{d} array for m={}, n={}", self.m, self.n);
            }
        }
        let data = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| c64(self.re[i][j], self.im[i][j]))
            .collect();
        let mat = DenseMatrix::new(d, d, data)?;
        Ok(BipartiteOperator::new(self.m, self.n, mat)?)
    }

    pub fn to_json(&self) -> String {
        json::to_string(self).expect("matrix file serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("malformed matrix file {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use edgelab_core::states::{edge_state, EdgeFamilyParams};

    #[test]
    fn operator_round_trip_is_exact() {
        let s = edge_state(&EdgeFamilyParams::new(0.7, 0.3).unwrap());
        let file = MatrixFile::from_operator(&s);
        let parsed: MatrixFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.to_operator().unwrap(), s);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let file = MatrixFile {
            m: 2,
            n: 2,
            re: vec![vec![0.0; 4]; 3],
            im: vec![vec![0.0; 4]; 4],
        };
        assert!(file.to_operator().is_err());
    }
}

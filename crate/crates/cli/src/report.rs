//! JSON encoding of reports. Complex numbers are `[re, im]`, matrices are
//! nested row-major arrays.

use num_complex::Complex64;
use opdef::{CMatrix, PsdReport};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub certificates: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), verdict: String::new(), certificates: Map::new(), warnings: Vec::new() }
    }

    pub fn verdict(&mut self, v: impl Into<String>) -> &mut Self {
        self.verdict = v.into();
        self
    }

    pub fn cert(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.certificates.insert(key.into(), v.into());
        self
    }

    pub fn warn(&mut self, w: impl Into<String>) -> &mut Self {
        self.warnings.push(w.into());
        self
    }
}

pub fn complex(z: Complex64) -> Value {
    // adding +0.0 maps -0.0 to 0.0
    json!([z.re + 0.0, z.im + 0.0])
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

pub fn matrices(ms: &[CMatrix]) -> Value {
    Value::Array(ms.iter().map(matrix).collect())
}

pub fn psd(r: &PsdReport) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "min_eigenvalue": r.min_eigenvalue,
        "eigenvalues": r.eigenvalues,
        "tolerance_used": r.tolerance_used,
        "scale": r.scale,
        "witness": r.witness.as_ref().map(|w| Value::Array(w.iter().map(|z| complex(*z)).collect())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_layout_is_row_major_pairs() {
        let m = CMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
        assert_eq!(matrix(&m), json!([[[1.0, 0.0], [0.0, -1.0]]]));
    }
}

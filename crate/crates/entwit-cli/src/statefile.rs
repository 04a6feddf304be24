//! JSON state-file schema: subsystem dimensions plus the flat row-major
//! entry list, each entry a `[re, im]` pair. Serialisation uses shortest
//! round-trip decimal, so export → load reproduces every double bit-exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use entwit::linalg;
use entwit::{BipartiteState, Error};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(rename = "dA")]
    pub dim_a: usize,
    #[serde(rename = "dB")]
    pub dim_b: usize,
    /// Row-major `(dA·dB)²` entries, each `[re, im]`.
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &BipartiteState) -> Self {
        Self {
            dim_a: state.dim_a(),
            dim_b: state.dim_b(),
            matrix: linalg::to_row_major(state.rho())
                .into_iter()
                .map(|(re, im)| [re, im])
                .collect(),
        }
    }

    pub fn into_state(self, tol: f64) -> Result<BipartiteState, Error> {
        let n = self.dim_a * self.dim_b;
        let entries: Vec<(f64, f64)> = self.matrix.iter().map(|e| (e[0], e[1])).collect();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "state file holds {} entries, dims {}x{} need {}",
                    entries.len(),
                    self.dim_a,
                    self.dim_b,
                    n * n
                ),
            });
        }
        let m = linalg::from_row_major(n, n, &entries)?;
        BipartiteState::new(self.dim_a, self.dim_b, m, tol)
    }
}

pub fn load(path: &Path, tol: f64) -> Result<BipartiteState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("cannot parse {}: {e}", path.display())))?;
    file.into_state(tol).map_err(CliError::from)
}

pub fn save(path: &Path, state: &BipartiteState) -> Result<(), CliError> {
    let file = StateFile::from_state(state);
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::parse(format!("serialisation failed: {e}")))?;
    fs::write(path, text)
        .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))
}

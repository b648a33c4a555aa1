// SPDX-License-Identifier: Apache-2.0

use super::DatasetError;
use crate::paths::PathOperation;

fn same(a: &PathOperation, b: &PathOperation) -> bool {
    a.kind == b.kind && a.source() == b.source() && a.target() == b.target()
}

/// Fraction of examples whose whole predicted sequence equals the gold one,
/// op by op on kind and endpoints.
pub fn exact_match_accuracy(
    predictions: &[Vec<PathOperation>],
    golds: &[Vec<PathOperation>],
) -> Result<f64, DatasetError> {
    if predictions.is_empty() {
        return Err(DatasetError::Invalid("no predictions to score".into()));
    }
    if predictions.len() != golds.len() {
        return Err(DatasetError::Invalid(format!(
            "{} predictions for {} golds",
            predictions.len(),
            golds.len()
        )));
    }
    let hits = predictions
        .iter()
        .zip(golds)
        .filter(|(p, g)| p.len() == g.len() && p.iter().zip(g.iter()).all(|(a, b)| same(a, b)))
        .count();
    Ok(hits as f64 / predictions.len() as f64)
}

use std::fs;

use anyhow::{Context, Result};
use rieszspec::model::OperatorSpec;
use rieszspec::scenarios::preset;

/// A resolved problem and where it came from.
pub struct Problem {
    pub source: String,
    pub spec: OperatorSpec,
}

pub fn load(input: &str) -> Result<Problem> {
    if let Some(name) = input.strip_prefix("preset:") {
        let scenario = preset(name).context("input")?;
        return Ok(Problem {
            source: input.to_string(),
            spec: scenario.spec,
        });
    }
    let text =
        fs::read_to_string(input).with_context(|| format!("cannot read input file {input}"))?;
    let spec = OperatorSpec::from_json(&text)
        .with_context(|| format!("invalid problem document {input}"))?;
    Ok(Problem {
        source: input.to_string(),
        spec,
    })
}

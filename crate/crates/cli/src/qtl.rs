//! `.qtl` manifests: `term <re> <im> <path-to-.vld>` per line, `#` comments,
//! paths relative to the manifest.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use virtlink::diagram::read_tangle;
use virtlink::QuantumTangle;

pub fn read_manifest(path: &Path) -> Result<QuantumTangle> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("{}: cannot read", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut q = QuantumTangle::zero();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), i + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "term" {
            bail!("{}: expected `term <re> <im> <path>`", at());
        }
        let number = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| anyhow!("{}: `{s}` is not a number", at()))
        };
        let coeff = Complex64::new(number(fields[1])?, number(fields[2])?);
        let tangle = read_tangle(base.join(fields[3])).map_err(|e| anyhow!("{}: {e}", at()))?;
        q.add_term(coeff, tangle);
    }
    Ok(q)
}

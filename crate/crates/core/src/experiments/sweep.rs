use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{InputInvariant, TargetInvariant};
use crate::error::{Error, Result};
use crate::invariants::{degree, rescale, RootOfUnity};
use crate::knot_data::{filter_class, Dataset, KnotClass};
use crate::stats::{linear_fit, pearson, LinearModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseScore {
    pub k: i64,
    pub n: i64,
    /// Correlation of `ln|J(e^{2 pi i k/n})| / ln(deg J)` with the volume.
    pub pearson: Option<f64>,
    pub n_used: usize,
    /// Records without a volume, with a vanishing modulus, or with degree below 2.
    pub dropped: usize,
}

/// Scores each root of unity and sorts by correlation, highest first.
/// Phases with an undefined correlation go last; ties keep input order.
pub fn phase_sweep(ds: &Dataset, phases: &[RootOfUnity]) -> Result<Vec<PhaseScore>> {
    if phases.is_empty() {
        return Err(Error::Config("phase sweep needs at least one phase".into()));
    }
    let mut scores = Vec::with_capacity(phases.len());
    for zeta in phases {
        let zeta = RootOfUnity::new(zeta.k, zeta.n)?;
        let point = zeta.point();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for rec in ds {
            let Some(vol) = rec.hyperbolic.vol else { continue };
            let value = rec.jones.eval(point).map(|z| z.norm());
            if let Ok(v) = value.and_then(|m| rescale(m, degree(&rec.jones))) {
                x.push(v);
                y.push(vol);
            }
        }
        scores.push(PhaseScore {
            k: zeta.k,
            n: zeta.n,
            pearson: pearson(&x, &y).ok(),
            n_used: x.len(),
            dropped: ds.len() - x.len(),
        });
    }
    scores.sort_by(|a, b| match (a.pearson, b.pearson) {
        (Some(ra), Some(rb)) => rb.total_cmp(&ra),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterSummary {
    pub input: InputInvariant,
    pub target: TargetInvariant,
    pub class: KnotClass,
    pub line: LinearModel,
    pub pearson: f64,
    pub n: usize,
    pub dropped: usize,
}

/// Scatter data as CSV text: one `#` comment line with the fitted line, then
/// `x,y,name,alternating` rows.
pub fn scatter_csv(
    ds: &Dataset,
    input: InputInvariant,
    target: TargetInvariant,
    class: KnotClass,
) -> Result<(String, ScatterSummary)> {
    if !input.is_scalar() {
        return Err(Error::Config(format!("scatter export needs a scalar input, got {input}")));
    }
    let sub = filter_class(ds, class);
    let mut rows = Vec::with_capacity(sub.len());
    for rec in &sub {
        if let (Ok(x), Some(y)) = (input.scalar_value(rec), target.value(rec)) {
            rows.push((x, y, rec.name.as_str(), rec.alternating));
        }
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let (line, _) = linear_fit(&xs, &ys)?;
    let summary = ScatterSummary {
        input,
        target,
        class,
        line,
        pearson: pearson(&xs, &ys)?,
        n: rows.len(),
        dropped: sub.len() - rows.len(),
    };

    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    writer.write_record(["x", "y", "name", "alternating"]).map_err(io)?;
    for (x, y, name, alt) in &rows {
        writer
            .write_record([x.to_string(), y.to_string(), name.to_string(), alt.to_string()])
            .map_err(io)?;
    }
    let body = String::from_utf8(writer.into_inner().map_err(|e| Error::Config(e.to_string()))?)
        .expect("csv output is utf-8");
    let text = format!(
        "# input={} target={} class={} slope={} intercept={} pearson={} n={}\n{body}",
        input.label(),
        target.label(),
        class.label(),
        line.slope,
        line.intercept,
        summary.pearson,
        summary.n
    );
    Ok((text, summary))
}

pub fn export_scatter(
    ds: &Dataset,
    input: InputInvariant,
    target: TargetInvariant,
    class: KnotClass,
    path: impl AsRef<Path>,
) -> Result<ScatterSummary> {
    let (text, summary) = scatter_csv(ds, input, target, class)?;
    std::fs::write(path.as_ref(), text).map_err(|e| Error::io(path.as_ref(), e))?;
    Ok(summary)
}

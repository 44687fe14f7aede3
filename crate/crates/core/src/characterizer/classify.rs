//! Top-level classification of a point set.

use serde::Serialize;

use super::battery::{run_battery, Lemma};
use super::expected::{expected_profile, ExpectedProfile};
use super::report::{map_str, set_str, CountingReport, Verdict};
use crate::error::Result;
use crate::pointset::PointSet;
use crate::polar::{PolarKind, PolarSpec};
use crate::profiles::{histogram_of, hyperplane_sizes, Histogram};
use crate::space::ProjSpace;

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// The polar space whose hyperplane profile K matches.
    pub matched: Option<String>,
    pub report: CountingReport,
}

impl Classification {
    pub fn render_text(&self) -> String {
        format!("verdict: {}\n{}", self.verdict, self.report.render_text())
    }
}

/// Polar spaces that can live in the given ambient space, with their
/// expected data.
pub fn candidates(space: &ProjSpace) -> Vec<ExpectedProfile> {
    PolarKind::ALL
        .into_iter()
        .filter_map(|kind| PolarSpec::in_space(kind, space.dim(), space.q()).ok())
        .filter_map(|spec| expected_profile(&spec).ok())
        .collect()
}

fn expected_histogram(e: &ExpectedProfile) -> Histogram {
    e.hyperplane
        .iter()
        .copied()
        .zip(e.hyperplane_counts.iter().copied())
        .collect()
}

pub fn classify(space: &ProjSpace, k: &PointSet) -> Result<Classification> {
    let subject = format!("{} points in PG({},{})", k.len(), space.dim(), space.q());
    let mut report = CountingReport::new(subject);
    if k.is_empty() || k.len() == space.num_points() {
        report.note("degenerate point set: empty or the whole space");
        return Ok(Classification {
            verdict: Verdict::NoMatch,
            matched: None,
            report,
        });
    }
    let hyp = hyperplane_sizes(space, k)?;
    let observed = histogram_of(&hyp);
    let cands = candidates(space);
    let support: Vec<u64> = observed.keys().copied().collect();
    let mut matching: Vec<&ExpectedProfile> = cands
        .iter()
        .filter(|e| {
            let mut h = e.hyperplane.clone();
            h.sort_unstable();
            h == support
        })
        .collect();
    if matching.len() > 1 {
        if let Some(exact) = matching.iter().copied().find(|e| expected_histogram(e) == observed) {
            matching = vec![exact];
        }
    }
    let Some(e) = matching.first().copied() else {
        for c in &cands {
            let mut h = c.hyperplane.clone();
            h.sort_unstable();
            report.push(
                "hyperplanes",
                format!("support against {}", c.spec),
                set_str(h),
                set_str(&support),
                false,
            );
        }
        if cands.is_empty() {
            report.note("no polar space lives in this ambient space");
        }
        report.note(format!("observed hyperplane histogram {}", map_str(&observed)));
        return Ok(Classification {
            verdict: Verdict::NoMatch,
            matched: None,
            report,
        });
    };

    let battery = run_battery(space, k, e, &hyp, &Lemma::ALL)?;
    let kind = e.spec.kind;
    let verdict = if battery.pass() {
        Verdict::ClassicalPolar(kind)
    } else {
        Verdict::QuasiOnly(kind)
    };
    let mut report = battery;
    report.subject = format!("{} points in PG({},{})", k.len(), space.dim(), space.q());
    report.note(format!("hyperplane profile matches {}", e.spec));
    Ok(Classification {
        verdict,
        matched: Some(e.spec.to_string()),
        report,
    })
}

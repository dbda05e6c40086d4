//! Checks level-distribution claims about minimum sets on small instances.
//!
//! Each claim says that every minimum set of some variant puts at least a
//! threshold number of vertices into the bottom levels. A claim is tested at
//! one `(family, n)` by enumerating all minimum sets.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkers::{count_in_levels, Variant};
use crate::generators::{generate, Family, FamilySpec, GeneratorError};
use crate::graph::{Label, VertexSet};
use crate::solver::{enumerate_minimum_sets, SolverError, ORACLE_MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("claim {claim} is not stated for family {family}")]
    FamilyNotCovered { claim: String, family: Family },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Which bottom levels a claim counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelWindow {
    /// Level `n` only.
    Bottom,
    /// Levels `n - 1` and `n`.
    BottomTwo,
}

impl LevelWindow {
    fn levels(self, n: u32) -> BTreeSet<u32> {
        match self {
            LevelWindow::Bottom => BTreeSet::from([n]),
            LevelWindow::BottomTwo => (n.saturating_sub(1)..=n).collect(),
        }
    }
}

/// Threshold `mult * 2^(n - drop)`, exact for every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub mult: u64,
    pub drop: u32,
}

impl Threshold {
    /// `count >= mult * 2^n / 2^drop`, compared without rounding.
    pub fn is_met_by(self, count: usize, n: u32) -> bool {
        (count as u128) << self.drop >= (self.mult as u128) << n
    }

    pub fn describe(self) -> String {
        let power = match self.drop {
            0 => "2^n".to_string(),
            d => format!("2^(n-{d})"),
        };
        if self.mult == 1 {
            power
        } else {
            format!("{}*{power}", self.mult)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub family: Family,
    pub variant: Variant,
    pub window: LevelWindow,
    pub threshold: Threshold,
    pub statement: String,
}

fn claim(
    id: &'static str,
    family: Family,
    variant: Variant,
    window: LevelWindow,
    mult: u64,
    drop: u32,
) -> Claim {
    let threshold = Threshold { mult, drop };
    let levels = match window {
        LevelWindow::Bottom => "level n",
        LevelWindow::BottomTwo => "levels n-1 and n",
    };
    let statement = format!(
        "every minimum {} set of {} has at least {} vertices in {levels}",
        match variant {
            Variant::Dominating => "dominating",
            Variant::TotalDominating => "total dominating",
            Variant::LocatingDominating => "locating-dominating",
            Variant::LocatingTotalDominating => "locating-total dominating",
        },
        match family {
            Family::Hypertree => "HT(n)",
            Family::SiblingTree => "ST(n)",
            _ => "G",
        },
        threshold.describe(),
    );
    Claim {
        id,
        family,
        variant,
        window,
        threshold,
        statement,
    }
}

/// Every registered claim, in audit order.
pub fn claims() -> Vec<Claim> {
    use Family::{Hypertree as Ht, SiblingTree as St};
    use LevelWindow::*;
    use Variant::*;
    vec![
        claim("dom-bottom-two", Ht, Dominating, BottomTwo, 1, 1),
        claim("ld-level-n", Ht, LocatingDominating, Bottom, 1, 1),
        claim(
            "ltd-bottom-two",
            Ht,
            LocatingTotalDominating,
            BottomTwo,
            3,
            2,
        ),
        claim("dom-bottom-two", St, Dominating, BottomTwo, 1, 1),
        claim("ld-level-n", St, LocatingDominating, Bottom, 1, 1),
        claim(
            "ltd-bottom-two",
            St,
            LocatingTotalDominating,
            BottomTwo,
            1,
            0,
        ),
    ]
}

pub fn claim_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = Vec::new();
    for c in claims() {
        if !ids.contains(&c.id) {
            ids.push(c.id);
        }
    }
    ids
}

pub fn find_claim(id: &str, family: Family) -> Result<Claim, AuditError> {
    let id = id.to_ascii_lowercase();
    let mut matching = claims().into_iter().filter(|c| c.id == id).peekable();
    if matching.peek().is_none() {
        return Err(AuditError::UnknownClaim(id));
    }
    matching
        .find(|c| c.family == family)
        .ok_or(AuditError::FamilyNotCovered { claim: id, family })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Confirmed,
    Refuted,
    /// Too large to enumerate every minimum set.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub claim_id: String,
    pub quote: String,
    pub family: Family,
    pub n: u32,
    pub status: Status,
    /// What the claim asserts; the audit compares against this.
    pub expected_status: Status,
    pub vertices: usize,
    pub threshold: String,
    /// Minimum set size, when enumerated.
    pub minimum: Option<usize>,
    pub optima_count: Option<usize>,
    /// Smallest window count over all minimum sets.
    pub least_count: Option<usize>,
    /// Lexicographically least minimum set violating the claim.
    pub counterexample: Option<Vec<Label>>,
}

/// Tests one claim at one instance.
pub fn audit_instance(claim: &Claim, n: u32) -> Result<Finding, AuditError> {
    let spec = FamilySpec::new(claim.family, n)?;
    let mut finding = Finding {
        claim_id: claim.id.to_string(),
        quote: claim.statement.clone(),
        family: claim.family,
        n,
        status: Status::Skipped,
        expected_status: Status::Confirmed,
        vertices: spec.vertex_count(),
        threshold: claim.threshold.describe(),
        minimum: None,
        optima_count: None,
        least_count: None,
        counterexample: None,
    };
    if spec.vertex_count() > ORACLE_MAX_VERTICES {
        return Ok(finding);
    }
    let g = generate(spec)?;
    let all = enumerate_minimum_sets(&g, claim.variant, usize::MAX)?;
    let levels = claim.window.levels(n);
    let mut least = None;
    let mut violation: Option<&VertexSet> = None;
    for s in &all.sets {
        let count = count_in_levels(&g, s, &levels).expect("generated graphs carry levels");
        least = Some(least.map_or(count, |l: usize| l.min(count)));
        if violation.is_none() && !claim.threshold.is_met_by(count, n) {
            violation = Some(s);
        }
    }
    finding.minimum = all.minimum;
    finding.optima_count = Some(all.sets.len());
    finding.least_count = least;
    finding.counterexample = violation.map(VertexSet::to_vec);
    finding.status = if violation.is_some() {
        Status::Refuted
    } else {
        Status::Confirmed
    };
    Ok(finding)
}

/// Tests `claim_id` for each family it covers among `families`, over `levels`.
pub fn audit(
    claim_id: &str,
    families: &[Family],
    levels: RangeInclusive<u32>,
) -> Result<Vec<Finding>, AuditError> {
    let mut out = Vec::new();
    for &family in families {
        let claim = find_claim(claim_id, family)?;
        let lo = (*levels.start()).max(family.min_levels()).max(1);
        for n in lo..=*levels.end() {
            out.push(audit_instance(&claim, n)?);
        }
    }
    Ok(out)
}

/// Every registered claim on every family it covers.
pub fn audit_all(
    families: &[Family],
    levels: RangeInclusive<u32>,
) -> Result<Vec<Finding>, AuditError> {
    let mut out = Vec::new();
    for id in claim_ids() {
        let covered: Vec<Family> = families
            .iter()
            .copied()
            .filter(|&f| find_claim(id, f).is_ok())
            .collect();
        out.extend(audit(id, &covered, levels.clone())?);
    }
    Ok(out)
}

pub fn to_json(findings: &[Finding]) -> String {
    serde_json::to_string_pretty(findings).expect("findings serialize")
}

pub fn to_markdown(findings: &[Finding]) -> String {
    let mut out = String::from("| claim | graph | status | minimum | optima | least count | threshold | counterexample |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for f in findings {
        let spec = FamilySpec {
            family: f.family,
            n: f.n,
        };
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let cx = f.counterexample.as_ref().map_or("-".to_string(), |c| {
            format!(
                "{{{}}}",
                c.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        });
        let _ = writeln!(
            out,
            "| {} | {spec} | {:?} | {} | {} | {} | {} | {cx} |",
            f.claim_id,
            f.status,
            opt(f.minimum),
            opt(f.optima_count),
            opt(f.least_count),
            f.threshold,
        );
    }
    out.push('\n');
    for id in claim_ids() {
        for c in claims().iter().filter(|c| c.id == id) {
            let _ = writeln!(
                out,
                "- `{}` ({}): {}",
                c.id,
                c.family.short_name(),
                c.statement
            );
        }
    }
    out
}

//! Reproduction tables: closed forms against constructions and exact search.

use std::time::Duration;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkers::{check, Variant};
use crate::constructions::construct;
use crate::formulas::{closed_form, FormulaError};
use crate::generators::{generate, Family, FamilySpec, MAX_LEVELS};
use crate::graph::{Label, VertexSet};
use crate::solver::{oracle_minimum, Outcome, Solver, SolverConfig, ORACLE_MAX_VERTICES};

pub const TOOL_NAME: &str = "domtree";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TABLE_MAX_N: u32 = 64;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("max n {got} exceeds the limit {limit}")]
    MaxNTooLarge { got: u32, limit: u32 },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("{0}")]
    Other(String),
}

/// Provenance block at the top of every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: serde_json::Value,
}

impl Header {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        Header {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            parameters,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report<T> {
    pub header: Header,
    pub results: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    FullMatch,
    UpperBoundOnly,
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    /// Graph larger than the configured solver size.
    SkippedSize,
    /// Time budget ran out.
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub family: Family,
    pub variant: Variant,
    pub n: u32,
    pub formula_value: String,
    pub construction_size: usize,
    pub construction_valid: bool,
    pub solver_value: Option<usize>,
    pub solver_status: SolverStatus,
    /// Brute-force value, run when the graph is small enough.
    pub oracle_value: Option<usize>,
    pub agreement: Agreement,
    /// Evidence for a mismatch: a set smaller than the formula value, or
    /// the invalid construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Label>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub families: Vec<Family>,
    pub variants: Vec<Variant>,
    pub min_n: u32,
    pub max_n: u32,
    /// Per-row solver budget.
    pub time_limit: Option<Duration>,
    /// Exact search is attempted up to this many vertices.
    pub solver_max_vertices: usize,
    /// Worker threads for independent rows.
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            families: vec![Family::Hypertree, Family::SiblingTree],
            variants: Variant::ALL.to_vec(),
            min_n: 1,
            max_n: 3,
            time_limit: Some(Duration::from_secs(10)),
            solver_max_vertices: 31,
            workers: 1,
        }
    }
}

/// Source of the expected value for a row, normally [`closed_form`].
pub type FormulaFn = dyn Fn(Family, Variant, u32) -> Result<BigUint, FormulaError> + Sync;

pub fn standard_formula(family: Family, variant: Variant, n: u32) -> Result<BigUint, FormulaError> {
    closed_form(family, variant, n).map(|r| r.value)
}

fn verify_row(
    family: Family,
    variant: Variant,
    n: u32,
    opts: &VerifyOptions,
    formula: &FormulaFn,
) -> Result<VerificationRow, HarnessError> {
    let expected = formula(family, variant, n)?;
    let spec = FamilySpec::new(family, n).map_err(|e| HarnessError::Other(e.to_string()))?;
    let g = generate(spec).map_err(|e| HarnessError::Other(e.to_string()))?;
    let set = construct(family, variant, n).map_err(|e| HarnessError::Other(e.to_string()))?;
    let cert = check(&g, &set, variant).map_err(|e| HarnessError::Other(e.to_string()))?;
    let size_ok = BigUint::from(set.len()) == expected;

    let mut row = VerificationRow {
        family,
        variant,
        n,
        formula_value: expected.to_string(),
        construction_size: set.len(),
        construction_valid: cert.valid,
        solver_value: None,
        solver_status: SolverStatus::SkippedSize,
        oracle_value: None,
        agreement: Agreement::Mismatch,
        witness: None,
        note: None,
    };
    if !cert.valid || !size_ok {
        row.witness = Some(set.to_vec());
        row.note = Some(if cert.valid {
            "construction size differs from formula".to_string()
        } else {
            "construction fails the checker".to_string()
        });
    }

    let mut smaller: Option<VertexSet> = None;
    if g.vertex_count() <= opts.solver_max_vertices {
        let solver = Solver::new(SolverConfig {
            time_limit: opts.time_limit,
            workers: 1,
            deterministic: true,
        });
        let result = solver
            .solve(&g, variant)
            .map_err(|e| HarnessError::Other(e.to_string()))?;
        row.solver_status = match result.outcome {
            Outcome::Optimal { value } => {
                row.solver_value = Some(value);
                if BigUint::from(value) < expected {
                    smaller = result.witness_set.clone();
                }
                SolverStatus::Optimal
            }
            Outcome::Infeasible => SolverStatus::Infeasible,
            Outcome::BoundOnly { .. } => SolverStatus::Timeout,
        };
        if g.vertex_count() <= ORACLE_MAX_VERTICES {
            let oracle =
                oracle_minimum(&g, variant).map_err(|e| HarnessError::Other(e.to_string()))?;
            row.oracle_value = oracle.value();
            if row.solver_status != SolverStatus::Timeout && row.oracle_value != row.solver_value {
                row.note =
                    Some("exact search disagrees with brute force (software fault)".to_string());
            }
        }
    }

    let solver_matches = row.solver_value.map(|v| BigUint::from(v) == expected);
    let oracle_consistent = row.oracle_value.is_none() || row.oracle_value == row.solver_value;
    row.agreement = match (cert.valid && size_ok, solver_matches) {
        (true, Some(true)) if oracle_consistent => Agreement::FullMatch,
        (true, None) if row.solver_status != SolverStatus::Infeasible => Agreement::UpperBoundOnly,
        _ => Agreement::Mismatch,
    };
    if row.agreement == Agreement::Mismatch && row.note.is_none() {
        row.note = Some("exact minimum differs from formula".to_string());
    }
    if let Some(s) = smaller {
        row.witness = Some(s.to_vec());
    }
    Ok(row)
}

/// One row per `(family, variant, n)`, ordered by family, variant, then n.
pub fn verify(
    opts: &VerifyOptions,
    formula: &FormulaFn,
) -> Result<Vec<VerificationRow>, HarnessError> {
    if opts.max_n > MAX_LEVELS {
        return Err(HarnessError::MaxNTooLarge {
            got: opts.max_n,
            limit: MAX_LEVELS,
        });
    }
    let mut jobs = Vec::new();
    for &family in &opts.families {
        for &variant in &opts.variants {
            for n in opts.min_n.max(1)..=opts.max_n {
                jobs.push((family, variant, n));
            }
        }
    }
    let run = |&(f, v, n): &(Family, Variant, u32)| verify_row(f, v, n, opts, formula);
    if opts.workers <= 1 {
        return jobs.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| HarnessError::Other(e.to_string()))?;
    pool.install(|| jobs.par_iter().map(run).collect())
}

pub fn any_mismatch(rows: &[VerificationRow]) -> bool {
    rows.iter().any(|r| r.agreement == Agreement::Mismatch)
}

pub fn verification_csv(rows: &[VerificationRow]) -> String {
    let mut out = String::from(
        "family,variant,n,formula_value,construction_size,construction_valid,solver_value,solver_status,agreement\n",
    );
    for r in rows {
        let solver = r.solver_value.map(|v| v.to_string()).unwrap_or_default();
        let status = serde_json::to_value(r.solver_status).expect("status serializes");
        let agreement = serde_json::to_value(r.agreement).expect("agreement serializes");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.family.short_name(),
            r.variant.short_name(),
            r.n,
            r.formula_value,
            r.construction_size,
            r.construction_valid,
            solver,
            status.as_str().unwrap_or_default(),
            agreement.as_str().unwrap_or_default(),
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: Family,
    pub variant: Variant,
    pub n: u32,
    pub value: String,
}

/// Closed-form values for both families and all variants, `1 <= n <= max_n`.
pub fn table(max_n: u32) -> Result<Vec<TableRow>, HarnessError> {
    if max_n > TABLE_MAX_N {
        return Err(HarnessError::MaxNTooLarge {
            got: max_n,
            limit: TABLE_MAX_N,
        });
    }
    let mut rows = Vec::new();
    for family in [Family::Hypertree, Family::SiblingTree] {
        for variant in Variant::ALL {
            for n in 1..=max_n {
                let r = closed_form(family, variant, n)?;
                rows.push(TableRow {
                    family,
                    variant,
                    n,
                    value: r.value.to_string(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("family,variant,n,value\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.family.short_name(),
            r.variant.short_name(),
            r.n,
            r.value
        ));
    }
    out
}

//! Explicit sets attaining the closed-form values.
//!
//! Domination and total domination use whole levels. The locating variants
//! grow a base set by a fixed template placed on every bottom copy, where the
//! copies sit below one free level: `S(n) = S(n - p) ∪ copies`, with `p = 4`
//! for locating domination and `p = 3` for locating-total domination.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkers::Variant;
use crate::generators::{decompose_bottom, generate, CopyKind, Family, FamilySpec, GeneratorError};
use crate::graph::{Label, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no construction for n={n}; smallest supported n is {smallest}")]
    UnsupportedLevels { n: u32, smallest: u32 },
    #[error("no construction for family {0}")]
    UnsupportedFamily(Family),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    LevelPattern,
    RecursiveCopyExtension,
}

/// How `construct` builds the set for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub family: Family,
    pub variant: Variant,
    pub n: u32,
    pub strategy: Strategy,
    /// Levels removed per extension step.
    pub period: u32,
    /// The instance the extension starts from and its set.
    pub base_n: u32,
    pub base_case: VertexSet,
    pub copy_kind: CopyKind,
    /// Reference labels of `copy_kind` chosen in every copy.
    pub per_copy_template: Vec<Label>,
}

/// Locating-dominating template on an `HT*(3)` copy: the top pair, two
/// grandchildren on the left side, two on the right.
///
/// Lexicographically least 6-subset of `HT*(3)` that contains the top pair,
/// is locating-dominating on the copy, and assembles into valid sets for
/// `HT(5)` through `HT(8)`. The `ld_template_search` test re-derives it.
pub const HT_LD_TEMPLATE: [Label; 6] = [2, 3, 8, 9, 10, 15];

const HT_LD_BASES: [&[Label]; 4] = [&[1], &[1, 2], &[1, 4, 5], &[2, 3, 8, 9, 10, 15]];
const ST_LD_BASES: [&[Label]; 4] = [&[1], &[1, 2], &[1, 4, 6], &[2, 3, 8, 10, 12, 14]];
const HT_LTD_BASES: [&[Label]; 4] = [&[], &[1, 2], &[2, 3, 4], &[2, 4, 5, 6, 7, 8, 10]];
const ST_LTD_BASES: [&[Label]; 4] = [&[], &[1, 2], &[2, 3, 4, 6], &[2, 4, 5, 6, 7, 8, 10, 12, 14]];

fn supported(family: Family) -> Result<(), ConstructionError> {
    match family {
        Family::Hypertree | Family::SiblingTree => Ok(()),
        other => Err(ConstructionError::UnsupportedFamily(other)),
    }
}

/// Describes the construction for `(family, variant, n)`.
pub fn plan(
    family: Family,
    variant: Variant,
    n: u32,
) -> Result<ConstructionPlan, ConstructionError> {
    supported(family)?;
    if n < 1 {
        return Err(ConstructionError::UnsupportedLevels { n, smallest: 1 });
    }
    let ht = family == Family::Hypertree;
    let (strategy, period, copy_kind, template, bases): (_, u32, _, Vec<Label>, &[&[Label]]) =
        match variant {
            Variant::Dominating | Variant::TotalDominating => {
                let (kind, template) = if ht {
                    (CopyKind::HtStar2, vec![2, 3])
                } else {
                    (CopyKind::TerminalTriangle, vec![1])
                };
                (Strategy::LevelPattern, 3, kind, template, &[])
            }
            Variant::LocatingDominating => {
                if ht {
                    (
                        Strategy::RecursiveCopyExtension,
                        4,
                        CopyKind::HtStar3,
                        HT_LD_TEMPLATE.to_vec(),
                        &HT_LD_BASES,
                    )
                } else {
                    (
                        Strategy::RecursiveCopyExtension,
                        4,
                        CopyKind::SiblingBlock,
                        vec![1, 4, 6],
                        &ST_LD_BASES,
                    )
                }
            }
            Variant::LocatingTotalDominating => {
                if ht {
                    (
                        Strategy::RecursiveCopyExtension,
                        3,
                        CopyKind::HtStar2,
                        vec![2, 3, 4],
                        &HT_LTD_BASES,
                    )
                } else {
                    (
                        Strategy::RecursiveCopyExtension,
                        3,
                        CopyKind::SiblingBlock,
                        vec![2, 3, 4, 6],
                        &ST_LTD_BASES,
                    )
                }
            }
        };
    let (base_n, base_case) = match strategy {
        Strategy::LevelPattern => {
            let base_n = (n - 1) % 3 + 1;
            (
                base_n,
                dominating_level_pattern(family, base_n, variant.is_total())?,
            )
        }
        Strategy::RecursiveCopyExtension => {
            // Locating-total sets need n >= 1, so their bases are 1..=3.
            let base_n = if variant.is_total() {
                (n - 1) % period + 1
            } else {
                n % period
            };
            (base_n, bases[base_n as usize].iter().copied().collect())
        }
    };
    Ok(ConstructionPlan {
        family,
        variant,
        n,
        strategy,
        period,
        base_n,
        base_case,
        copy_kind,
        per_copy_template: template,
    })
}

/// The template's images on every bottom copy of `family` at `n` levels.
pub fn template_union(
    family: Family,
    n: u32,
    kind: CopyKind,
    template: &[Label],
) -> Result<VertexSet, ConstructionError> {
    let g = generate(FamilySpec::new(family, n)?)?;
    let mut out = VertexSet::new();
    for copy in decompose_bottom(&g, kind)? {
        out.extend(template.iter().map(|&r| {
            copy.image_of(r)
                .expect("template labels lie in the reference")
        }));
    }
    Ok(out)
}

fn extend(
    family: Family,
    n: u32,
    period: u32,
    base_n: u32,
    base: &[Label],
    kind: CopyKind,
    template: &[Label],
) -> Result<VertexSet, ConstructionError> {
    let mut set: VertexSet = base.iter().copied().collect();
    let mut m = base_n + period;
    while m <= n {
        set.extend(template_union(family, m, kind, template)?.iter());
        m += period;
    }
    Ok(set)
}

impl ConstructionPlan {
    /// Runs the plan.
    pub fn build(&self) -> Result<VertexSet, ConstructionError> {
        match self.strategy {
            Strategy::LevelPattern => {
                dominating_level_pattern(self.family, self.n, self.variant.is_total())
            }
            Strategy::RecursiveCopyExtension => extend(
                self.family,
                self.n,
                self.period,
                self.base_n,
                &self.base_case.to_vec(),
                self.copy_kind,
                &self.per_copy_template,
            ),
        }
    }
}

/// A set of the closed-form size for the variant; deterministic.
pub fn construct(family: Family, variant: Variant, n: u32) -> Result<VertexSet, ConstructionError> {
    plan(family, variant, n)?.build()
}

/// Whole levels spaced three apart, ending at level `n - 1`, plus vertex 2
/// (and 3 when `total` and `n ≡ 1 mod 3`).
pub fn dominating_level_pattern(
    family: Family,
    n: u32,
    total: bool,
) -> Result<VertexSet, ConstructionError> {
    supported(family)?;
    if n < 1 {
        return Err(ConstructionError::UnsupportedLevels { n, smallest: 1 });
    }
    let mut set = VertexSet::new();
    match n % 3 {
        0 => {
            set.insert(2);
        }
        1 => {
            set.insert(2);
            if total {
                set.insert(3);
            }
        }
        _ => {}
    }
    let mut level = (n - 1) % 3;
    if n % 3 == 1 {
        level += 3;
    }
    while level < n {
        set.extend((1u32 << level)..(2u32 << level));
        level += 3;
    }
    Ok(set)
}

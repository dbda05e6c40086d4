//! Closed-form domination parameters of hypertrees and sibling trees.
//!
//! Every value has the shape `coeff * (mult * 2^(n + shift) + offset) / divisor + plus`
//! with a branch chosen by `n mod 3` or `n mod 4`. The inner quotient is
//! checked to be exact; nothing is rounded.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkers::Variant;
use crate::generators::{Family, FamilySpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("formula domain starts at n=1 (got n={0})")]
    DomainStartsAtOne(u32),
    #[error("no closed form for family {0}")]
    UnsupportedFamily(Family),
    #[error("inexact division in {expression} at n={n}")]
    Indivisible { expression: &'static str, n: u32 },
}

#[derive(Clone, Copy, Debug)]
struct Branch {
    coeff: u32,
    mult: u32,
    shift: u32,
    offset: i32,
    divisor: u32,
    plus: u32,
    expression: &'static str,
}

const fn b(
    coeff: u32,
    mult: u32,
    shift: u32,
    offset: i32,
    divisor: u32,
    plus: u32,
    expression: &'static str,
) -> Branch {
    Branch {
        coeff,
        mult,
        shift,
        offset,
        divisor,
        plus,
        expression,
    }
}

const DOM: [Branch; 3] = [
    b(1, 1, 2, 3, 7, 0, "(2^(n+2)+3)/7"),
    b(1, 1, 2, -1, 7, 0, "(2^(n+2)-1)/7"),
    b(2, 1, 1, -1, 7, 0, "2(2^(n+1)-1)/7"),
];

const TOTAL: [Branch; 3] = [
    b(1, 1, 2, 3, 7, 0, "(2^(n+2)+3)/7"),
    b(1, 1, 2, -1, 7, 1, "(2^(n+2)-1)/7+1"),
    b(2, 1, 1, -1, 7, 0, "2(2^(n+1)-1)/7"),
];

const LOCATING: [Branch; 4] = [
    b(1, 1, 2, 1, 5, 0, "(2^(n+2)+1)/5"),
    b(1, 1, 2, 2, 5, 0, "(2^(n+2)+2)/5"),
    b(1, 1, 2, -1, 5, 0, "(2^(n+2)-1)/5"),
    b(1, 1, 2, -2, 5, 0, "(2^(n+2)-2)/5"),
];

const LOCATING_TOTAL_HT: [Branch; 3] = [
    b(1, 3, 1, 1, 7, 0, "(3*2^(n+1)+1)/7"),
    b(2, 3, 0, 1, 7, 0, "2(3*2^n+1)/7"),
    b(3, 1, 1, -1, 7, 0, "3(2^(n+1)-1)/7"),
];

const LOCATING_TOTAL_ST: [Branch; 3] = [
    b(1, 1, 3, -1, 7, 0, "(2^(n+3)-1)/7"),
    b(1, 1, 3, -2, 7, 0, "(2^(n+3)-2)/7"),
    b(1, 1, 3, -4, 7, 0, "(2^(n+3)-4)/7"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaRecord {
    pub family: Family,
    pub variant: Variant,
    pub n: u32,
    /// `n mod modulus`, selecting the branch.
    pub residue: u32,
    pub modulus: u32,
    pub expression: String,
    #[serde(serialize_with = "as_decimal", deserialize_with = "from_decimal")]
    pub value: BigUint,
}

impl FormulaRecord {
    pub fn value_usize(&self) -> Option<usize> {
        usize::try_from(&self.value).ok()
    }
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn from_decimal<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let s = <String as Deserialize>::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

fn branches(family: Family, variant: Variant) -> Result<&'static [Branch], FormulaError> {
    use Variant::*;
    Ok(match (family, variant) {
        (Family::Hypertree | Family::SiblingTree, Dominating) => &DOM,
        (Family::Hypertree | Family::SiblingTree, TotalDominating) => &TOTAL,
        (Family::Hypertree | Family::SiblingTree, LocatingDominating) => &LOCATING,
        (Family::Hypertree, LocatingTotalDominating) => &LOCATING_TOTAL_HT,
        (Family::SiblingTree, LocatingTotalDominating) => &LOCATING_TOTAL_ST,
        (other, _) => return Err(FormulaError::UnsupportedFamily(other)),
    })
}

/// The closed-form value for `(family, variant, n)`, `n >= 1`.
pub fn closed_form(
    family: Family,
    variant: Variant,
    n: u32,
) -> Result<FormulaRecord, FormulaError> {
    let table = branches(family, variant)?;
    if n < 1 {
        return Err(FormulaError::DomainStartsAtOne(n));
    }
    let modulus = table.len() as u32;
    let residue = n % modulus;
    let br = table[residue as usize];
    let inner = BigInt::from(br.mult) * (BigInt::from(1u8) << (n + br.shift)) + br.offset;
    let divisor = BigInt::from(br.divisor);
    if &inner % &divisor != BigInt::from(0) {
        return Err(FormulaError::Indivisible {
            expression: br.expression,
            n,
        });
    }
    let value = BigInt::from(br.coeff) * (inner / divisor) + br.plus;
    let value = value
        .to_biguint()
        .expect("closed forms are positive for n >= 1");
    Ok(FormulaRecord {
        family,
        variant,
        n,
        residue,
        modulus,
        expression: br.expression.to_string(),
        value,
    })
}

/// Small-instance value without a closed form over `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaEntry {
    pub graph: FamilySpec,
    pub variant: Variant,
    pub value: usize,
}

/// The base-case values for root-fault hypertrees and small sibling trees.
pub fn lemma_table() -> Vec<LemmaEntry> {
    use Variant::*;
    let star2 = FamilySpec {
        family: Family::RootFaultHypertree,
        n: 2,
    };
    let star3 = FamilySpec {
        family: Family::RootFaultHypertree,
        n: 3,
    };
    let st2 = FamilySpec {
        family: Family::SiblingTree,
        n: 2,
    };
    let st3 = FamilySpec {
        family: Family::SiblingTree,
        n: 3,
    };
    [
        (star2, Dominating, 2),
        (star2, TotalDominating, 2),
        (star2, LocatingDominating, 3),
        (star2, LocatingTotalDominating, 3),
        (star3, LocatingDominating, 6),
        (star3, LocatingTotalDominating, 6),
        (st2, Dominating, 2),
        (st2, TotalDominating, 2),
        (st2, LocatingTotalDominating, 4),
        (st3, LocatingDominating, 6),
    ]
    .into_iter()
    .map(|(graph, variant, value)| LemmaEntry {
        graph,
        variant,
        value,
    })
    .collect()
}

pub fn lemma_lookup(graph: FamilySpec, variant: Variant) -> Option<usize> {
    lemma_table()
        .into_iter()
        .find(|e| e.graph == graph && e.variant == variant)
        .map(|e| e.value)
}

//! JSON and CSV shapes read and written by the CLI. All numbers that can
//! exceed 64 bits are decimal strings.

use std::collections::BTreeMap;

use rhombic_core::bounds::{BoundReport, DiscrepancyKind};
use rhombic_core::classnum::McdRecord;
use rhombic_core::diophantine::LrnSolution;
use rhombic_core::field::{Domain, DomainSpec};
use rhombic_core::lab::{AnalysisReport, FunctionTable};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainJson {
    Cyclic { m: u32 },
    PrimeField { p: u32 },
    ExtField {
        p: u32,
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

impl From<&DomainJson> for DomainSpec {
    fn from(d: &DomainJson) -> Self {
        match d {
            DomainJson::Cyclic { m } => DomainSpec::Cyclic(*m),
            DomainJson::PrimeField { p } => DomainSpec::PrimeField(*p),
            DomainJson::ExtField { p, n, modulus } => {
                DomainSpec::ExtField { p: *p, n: *n, modulus: modulus.clone() }
            }
        }
    }
}

impl From<&DomainSpec> for DomainJson {
    fn from(d: &DomainSpec) -> Self {
        match d {
            DomainSpec::Cyclic(m) => DomainJson::Cyclic { m: *m },
            DomainSpec::PrimeField(p) => DomainJson::PrimeField { p: *p },
            DomainSpec::ExtField { p, n, modulus } => {
                DomainJson::ExtField { p: *p, n: *n, modulus: modulus.clone() }
            }
        }
    }
}

/// A function given either as a monomial exponent or as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub domain: DomainJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u32>>,
}

impl FunctionJson {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::format(origin, e))
    }

    pub fn build(&self) -> Result<FunctionTable> {
        let domain = Domain::new(&(&self.domain).into())?;
        match (&self.monomial, &self.table) {
            (Some(d), None) => Ok(FunctionTable::monomial(domain, *d)),
            (None, Some(t)) => Ok(FunctionTable::new(domain, t.clone())?),
            _ => Err(CliError::Input("give exactly one of \"monomial\" or \"table\"".into())),
        }
    }

    pub fn from_table(f: &FunctionTable) -> Self {
        Self {
            domain: (&f.domain().spec()).into(),
            monomial: None,
            table: Some(f.images().to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub q: u32,
    #[serde(rename = "V")]
    pub v: u64,
    #[serde(rename = "N2")]
    pub n2: u64,
    pub is_permutation: bool,
    pub in_c4: bool,
    pub in_c3: bool,
    pub is_planar: bool,
    pub differential_uniformity: u64,
    /// class size -> number of classes, keys as decimal strings.
    pub class_sizes: BTreeMap<String, u64>,
    pub below_threshold_warning: bool,
}

impl From<&AnalysisReport> for ReportJson {
    fn from(r: &AnalysisReport) -> Self {
        Self {
            q: r.q,
            v: r.v,
            n2: r.n2,
            is_permutation: r.is_permutation,
            in_c4: r.in_c4,
            in_c3: r.in_c3,
            is_planar: r.is_planar,
            differential_uniformity: r.differential_uniformity,
            class_sizes: r.class_size_histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            below_threshold_warning: r.below_threshold_warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrnJson {
    #[serde(rename = "D")]
    pub d: u64,
    pub x: String,
    pub y: u64,
    pub n: u32,
    pub coprime: bool,
}

impl From<&LrnSolution> for LrnJson {
    fn from(s: &LrnSolution) -> Self {
        Self { d: s.d, x: s.x.to_string(), y: s.y, n: s.n, coprime: s.coprime }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McdJson {
    pub m: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub i: u64,
    pub h: u64,
}

impl From<&McdRecord> for McdJson {
    fn from(r: &McdRecord) -> Self {
        Self { m: r.m, d: r.d, i: r.i, h: r.h }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodJson {
    pub id: String,
    pub value: Option<String>,
    pub floor: Option<String>,
    pub applicable: bool,
    pub case: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyJson {
    pub id: String,
    pub kind: String,
    pub floor: String,
    pub exact: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub q: String,
    pub y: String,
    pub n: u32,
    pub lower: String,
    pub methods: Vec<MethodJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub discrepancies: Vec<DiscrepancyJson>,
    pub below_threshold_warning: bool,
}

impl BoundsJson {
    pub fn from_report(r: &BoundReport) -> Result<Self> {
        let methods = r
            .methods
            .iter()
            .map(|m| {
                Ok(MethodJson {
                    id: m.id.as_str().into(),
                    value: m.value.as_ref().map(|v| v.decimal()).transpose()?,
                    floor: m.floor.as_ref().map(|f| f.to_string()),
                    applicable: m.applicable,
                    case: m.case.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q: r.q.to_string(),
            y: r.y.to_string(),
            n: r.n,
            lower: r.lower.decimal()?,
            methods,
            exact: r.exact.as_ref().map(|e| e.to_string()),
            discrepancies: r
                .discrepancies
                .iter()
                .map(|d| DiscrepancyJson {
                    id: d.id.as_str().into(),
                    kind: match d.kind {
                        DiscrepancyKind::Unsound => "unsound".into(),
                        DiscrepancyKind::Slack => "slack".into(),
                    },
                    floor: d.floor.to_string(),
                    exact: d.exact.to_string(),
                })
                .collect(),
            below_threshold_warning: r.below_threshold_warning,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_json_round_trip() {
        let text = r#"{"domain": {"kind": "ext_field", "p": 3, "n": 4, "modulus": [2,1,0,0,1]}, "monomial": 14}"#;
        let f = FunctionJson::parse(text, "inline").unwrap();
        let table = f.build().unwrap();
        assert_eq!(table.order(), 81);
        let back = FunctionJson::from_table(&table);
        assert_eq!(back.build().unwrap(), table);
        let s = serde_json::to_string(&back).unwrap();
        assert!(s.starts_with(r#"{"domain":{"kind":"ext_field","p":3,"n":4,"modulus":[2,1,0,0,1]},"table":["#));

        let bad = r#"{"domain": {"kind": "cyclic", "m": 5}}"#;
        assert!(FunctionJson::parse(bad, "inline").unwrap().build().is_err());
        assert!(FunctionJson::parse("{", "inline").is_err());
    }
}

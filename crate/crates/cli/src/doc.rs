//! JSON interchange documents.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use qgraph_core::calculus::EdgeProjection;
use qgraph_core::twist::{twist_quantum_set, AbelianGroup, Bicharacter};
use qgraph_core::{GraphReport, Matrix, Operator, QuantumSet, Report, C64};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Rows = Vec<Vec<C64>>;
pub type Metadata = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub orders: Vec<u64>,
}

/// Either `{"blocks": [...]}` or `{"group": {...}, "bicharacter": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicharacter: Option<Rows>,
}

impl SetDoc {
    pub fn blocks(blocks: &[usize]) -> Self {
        SetDoc { blocks: Some(blocks.to_vec()), ..Default::default() }
    }

    pub fn twisted(b: &Bicharacter) -> Self {
        SetDoc {
            group: Some(GroupDoc { orders: b.group().orders().to_vec() }),
            bicharacter: Some(b.values().to_vec()),
            blocks: None,
        }
    }

    /// Describes the set of an operator built by the library.
    pub fn of(set: &QuantumSet, bichar: Option<&Bicharacter>) -> Result<Self, CliError> {
        match (set.blocks(), bichar) {
            (Some(b), _) => Ok(SetDoc::blocks(b)),
            (None, Some(b)) => Ok(SetDoc::twisted(b)),
            (None, None) => Err(CliError::Input("set has no serialisable description".into())),
        }
    }

    pub fn bicharacter(&self, tol: f64) -> Result<Option<Bicharacter>, CliError> {
        match (&self.group, &self.bicharacter) {
            (Some(g), Some(values)) => {
                let group = AbelianGroup::new(&g.orders)?;
                Ok(Some(Bicharacter::new(&group, values.clone(), tol)?))
            }
            _ => Ok(None),
        }
    }

    pub fn build(&self, tol: f64) -> Result<Arc<QuantumSet>, CliError> {
        match (&self.blocks, &self.group, &self.bicharacter) {
            (Some(b), None, None) => Ok(QuantumSet::from_blocks(b)?),
            (None, Some(_), Some(_)) => {
                let b = self.bicharacter(tol)?.expect("both fields present");
                Ok(twist_quantum_set(&b)?.set().clone())
            }
            _ => Err(CliError::Input("set needs either \"blocks\" or both \"group\" and \"bicharacter\"".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Document {
    QuantumSet {
        schema_version: u32,
        set: SetDoc,
        #[serde(default)]
        metadata: Metadata,
    },
    QuantumGraph {
        schema_version: u32,
        set: SetDoc,
        adjacency: Rows,
        /// Quotients are weighted graphs and skip the idempotence check.
        #[serde(default)]
        weighted: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectrum: Option<Vec<C64>>,
        #[serde(default)]
        metadata: Metadata,
    },
    EdgeProjection {
        schema_version: u32,
        set: SetDoc,
        /// `blocks[i][j]` acts on `C^{n_i} (x) C^{n_j}`.
        blocks: Vec<Vec<Rows>>,
        #[serde(default)]
        metadata: Metadata,
    },
    Map {
        schema_version: u32,
        domain: SetDoc,
        codomain: SetDoc,
        matrix: Rows,
        #[serde(default)]
        metadata: Metadata,
    },
    Bicharacter {
        schema_version: u32,
        group: GroupDoc,
        values: Rows,
        #[serde(default)]
        metadata: Metadata,
    },
    Report {
        schema_version: u32,
        title: String,
        passed: bool,
        checks: Vec<qgraph_core::Check>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<GraphReport>,
        #[serde(default)]
        metadata: Metadata,
    },
    Certificate {
        schema_version: u32,
        set: SetDoc,
        first_trace: String,
        second_trace: String,
        residual: f64,
        threshold: f64,
        first: Rows,
        second: Rows,
        #[serde(default)]
        metadata: Metadata,
    },
}

pub fn rows(m: &Matrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn matrix(r: &Rows, what: &str) -> Result<Matrix, CliError> {
    Matrix::from_rows(r).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::QuantumSet { .. } => "quantum-set",
            Document::QuantumGraph { .. } => "quantum-graph",
            Document::EdgeProjection { .. } => "edge-projection",
            Document::Map { .. } => "map",
            Document::Bicharacter { .. } => "bicharacter",
            Document::Report { .. } => "report",
            Document::Certificate { .. } => "certificate",
        }
    }

    pub fn schema_version(&self) -> u32 {
        match self {
            Document::QuantumSet { schema_version, .. }
            | Document::QuantumGraph { schema_version, .. }
            | Document::EdgeProjection { schema_version, .. }
            | Document::Map { schema_version, .. }
            | Document::Bicharacter { schema_version, .. }
            | Document::Report { schema_version, .. }
            | Document::Certificate { schema_version, .. } => *schema_version,
        }
    }

    pub fn graph(set: SetDoc, a: &Operator, weighted: bool, metadata: Metadata) -> Self {
        Document::QuantumGraph {
            schema_version: SCHEMA_VERSION,
            set,
            adjacency: rows(a.matrix()),
            weighted,
            spectrum: None,
            metadata,
        }
    }

    pub fn report(rep: &Report, graph: Option<GraphReport>, metadata: Metadata) -> Self {
        Document::Report {
            schema_version: SCHEMA_VERSION,
            title: rep.title.clone(),
            passed: rep.all_passed(),
            checks: rep.checks.clone(),
            graph,
            metadata,
        }
    }

    pub fn map(domain: SetDoc, codomain: SetDoc, op: &Operator, metadata: Metadata) -> Self {
        Document::Map { schema_version: SCHEMA_VERSION, domain, codomain, matrix: rows(op.matrix()), metadata }
    }

    pub fn edge_projection(p: &EdgeProjection, metadata: Metadata) -> Result<Self, CliError> {
        let blocks = p.blocks().iter().map(|row| row.iter().map(rows).collect()).collect();
        Ok(Document::EdgeProjection {
            schema_version: SCHEMA_VERSION,
            set: SetDoc::of(p.set(), None)?,
            blocks,
            metadata,
        })
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        // going through Value first keeps line/column positions for syntax errors
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("{source}: {e}")))?;
        let kind = value.get("kind").and_then(Value::as_str).unwrap_or("<missing>").to_string();
        let doc: Document = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("{source}: invalid {kind} document: {e}")))?;
        if doc.schema_version() != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "{source}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                doc.schema_version()
            )));
        }
        Ok(doc)
    }

    /// Compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> Result<String, CliError> {
        let value = serde_json::to_value(self).map_err(|e| CliError::Internal(e.to_string()))?;
        if contains_null(&value) {
            return Err(CliError::Internal("refusing to emit a non-finite number".into()));
        }
        let mut s = serde_json::to_string(&value).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

// Every optional field is skipped when absent, so a null can only come from NaN or infinity.
fn contains_null(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Array(a) => a.iter().any(contains_null),
        Value::Object(o) => o.values().any(contains_null),
        _ => false,
    }
}

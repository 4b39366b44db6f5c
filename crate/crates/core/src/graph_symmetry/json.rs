//! JSON input for a graph with a group action.
//!
//! ```json
//! {
//!   "vertices": [{"id": "a", "mu": 1.0}, ...],
//!   "edges": [{"u": "a", "v": "b", "c": 1.0}, ...],
//!   "group": {"name": "D3", "generators": [["b", "c", "a"], ["a", "c", "b"]]},
//!   "domain": ["a"]
//! }
//! ```
//!
//! Group names are `trivial`, `Zk` and `Dk`. A generator lists the image of
//! each vertex in the order of `vertices`; give the rotation first and, for
//! `Dk`, the reflection second. `group.irreps` may replace the built-in
//! character table, `vertices[i].kappa` adds a killing term, and `domain`
//! names a fundamental domain.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use super::action::{GroupAction, SymmetricSystem};
use super::domain::FundamentalDomain;
use super::graph::WeightedGraph;
use super::group::{FiniteGroup, GroupKind, Irrep};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Name(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct VertexSpec {
    pub id: VertexId,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub kappa: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
pub struct EdgeSpec {
    pub u: VertexId,
    pub v: VertexId,
    #[serde(default = "one")]
    pub c: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct IrrepSpec {
    pub name: String,
    pub dim: usize,
    #[serde(default = "one_usize")]
    pub copies: usize,
    pub character: Vec<f64>,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    #[serde(default)]
    pub generators: Vec<Vec<VertexId>>,
    #[serde(default)]
    pub irreps: Option<Vec<IrrepSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    pub group: GroupSpec,
    #[serde(default)]
    pub domain: Option<Vec<VertexId>>,
}

/// A parsed input: the validated system, vertex labels, and the optional domain.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub system: SymmetricSystem,
    pub labels: Vec<String>,
    pub domain: Option<FundamentalDomain>,
}

fn parse_group_name(name: &str) -> Result<GroupKind> {
    let bad = || Error::InvalidInput(format!("unknown group {name:?}; use trivial, Zk or Dk"));
    if name.eq_ignore_ascii_case("trivial") {
        return Ok(GroupKind::Trivial);
    }
    let (head, k) = name.split_at(1.min(name.len()));
    let k: usize = k.parse().map_err(|_| bad())?;
    match head {
        "Z" | "z" | "C" | "c" => Ok(GroupKind::Cyclic(k)),
        "D" | "d" => Ok(GroupKind::Dihedral(k)),
        _ => Err(bad()),
    }
}

impl GraphFile {
    pub fn build(&self) -> Result<LoadedSystem> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex id {}", v.id)));
            }
        }
        let lookup = |id: &VertexId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("unknown vertex id {id}")))
        };
        let n = self.vertices.len();
        let mu = self.vertices.iter().map(|v| v.mu).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Ok((lookup(&e.u)?, lookup(&e.v)?, e.c)))
            .collect::<Result<Vec<_>>>()?;
        let mut graph = WeightedGraph::new(mu, edges)?;
        if self.vertices.iter().any(|v| v.kappa.is_some()) {
            graph = graph.with_killing(self.vertices.iter().map(|v| v.kappa.unwrap_or(0.0)).collect())?;
        }

        let mut group = FiniteGroup::build(parse_group_name(&self.group.name)?)?;
        if let Some(irreps) = &self.group.irreps {
            group = group.with_irreps(
                irreps
                    .iter()
                    .map(|i| Irrep {
                        name: i.name.clone(),
                        dim: i.dim,
                        copies: i.copies,
                        character: i.character.clone(),
                    })
                    .collect(),
            )?;
        }
        let gens = self
            .group
            .generators
            .iter()
            .map(|p| p.iter().map(&lookup).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let expected = match group.kind() {
            GroupKind::Trivial => 0,
            GroupKind::Cyclic(_) => 1,
            GroupKind::Dihedral(_) => 2,
        };
        if gens.len() != expected {
            return Err(Error::InvalidAction(format!(
                "{} takes {expected} generator(s), got {}",
                group.name(),
                gens.len()
            )));
        }
        let mut gens = gens.into_iter();
        let action = GroupAction::from_generators(group, n, gens.next(), gens.next())?;
        let system = SymmetricSystem::new(graph, action)?;
        let domain = match &self.domain {
            Some(f) => {
                let f = f.iter().map(&lookup).collect::<Result<Vec<_>>>()?;
                Some(FundamentalDomain::new(&system, &f)?)
            }
            None => None,
        };
        Ok(LoadedSystem {
            system,
            labels: self.vertices.iter().map(|v| v.id.to_string()).collect(),
            domain,
        })
    }
}

pub fn parse_system(text: &str) -> Result<LoadedSystem> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graph JSON: {e}")))?;
    file.build()
}

pub fn load_system(path: &Path) -> Result<LoadedSystem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_system(&text)
}

//! JSON documents for graphs, schema `acy-graph/1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, Graph, GraphError};
use crate::scalar::{field_from_strings, field_to_strings, TowerDoc};

pub const GRAPH_SCHEMA: &str = "acy-graph/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NuDoc {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PfDoc {
    pub tower: TowerDoc,
    pub coords: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphDoc {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub h: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, u8>>,
    pub nu: NuDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pf: Option<PfDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph, with_pf: bool) -> Result<GraphDoc, GraphError> {
        let edges = g
            .edges
            .iter()
            .map(|e| EdgeDoc { id: e.id.clone(), src: g.vertices[e.src].clone(), dst: g.vertices[e.dst].clone() })
            .collect();
        let coloring =
            g.coloring.as_ref().map(|c| g.vertices.iter().cloned().zip(c.iter().copied()).collect::<BTreeMap<_, _>>());
        let nu = NuDoc {
            vertex_map: (0..g.num_vertices()).map(|v| (g.vertices[v].clone(), g.vertices[g.nu_vertex[v]].clone())).collect(),
            edge_map: (0..g.num_edges()).map(|e| (g.edges[e].id.clone(), g.edges[g.nu_edge[e]].id.clone())).collect(),
        };
        let pf = if with_pf {
            let (_, phi) = g.perron_frobenius()?;
            Some(PfDoc {
                tower: TowerDoc { h: g.h, radicands: Vec::new() },
                coords: g.vertices.iter().cloned().zip(phi.iter().map(field_to_strings)).collect(),
            })
        } else {
            None
        };
        Ok(GraphDoc {
            schema: GRAPH_SCHEMA.into(),
            name: g.name.clone(),
            h: g.h,
            vertices: g.vertices.clone(),
            edges,
            coloring,
            nu,
            pf,
        })
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        if self.schema != GRAPH_SCHEMA {
            return Err(GraphError::Schema(format!("expected schema {GRAPH_SCHEMA}, found {}", self.schema)));
        }
        let vidx = |l: &str| -> Result<usize, GraphError> {
            self.vertices.iter().position(|v| v == l).ok_or_else(|| GraphError::Schema(format!("unknown vertex `{l}`")))
        };
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                return Err(GraphError::Schema(format!("duplicate vertex `{v}`")));
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if edges.iter().any(|f: &Edge| f.id == e.id) {
                return Err(GraphError::Schema(format!("duplicate edge id `{}`", e.id)));
            }
            edges.push(Edge { id: e.id.clone(), src: vidx(&e.src)?, dst: vidx(&e.dst)? });
        }
        let eidx = |l: &str| -> Result<usize, GraphError> {
            edges.iter().position(|e| e.id == l).ok_or_else(|| GraphError::Schema(format!("unknown edge `{l}`")))
        };
        let coloring = match &self.coloring {
            None => None,
            Some(m) => Some(
                self.vertices
                    .iter()
                    .map(|v| m.get(v).copied().ok_or_else(|| GraphError::Schema(format!("vertex `{v}` has no colour"))))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let nu_vertex = self
            .vertices
            .iter()
            .map(|v| {
                let w = self.nu.vertex_map.get(v).ok_or_else(|| GraphError::Schema(format!("nu misses vertex `{v}`")))?;
                vidx(w)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let nu_edge = self
            .edges
            .iter()
            .map(|e| {
                let f = self.nu.edge_map.get(&e.id).ok_or_else(|| GraphError::Schema(format!("nu misses edge `{}`", e.id)))?;
                eidx(f)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = Graph::new(self.name.clone(), self.h, self.vertices.clone(), edges, coloring, nu_vertex, nu_edge)?;
        if let Some(pf) = &self.pf {
            if pf.tower.h != g.h || !pf.tower.radicands.is_empty() {
                return Err(GraphError::Schema("pf must be given in the base field of the graph".into()));
            }
            let field = g.base_field()?;
            let (_, phi) = g.perron_frobenius()?;
            let given = g
                .vertices
                .iter()
                .map(|v| {
                    let c = pf.coords.get(v).ok_or_else(|| GraphError::Schema(format!("pf misses vertex `{v}`")))?;
                    Ok(field_from_strings(&field, c)?)
                })
                .collect::<Result<Vec<_>, GraphError>>()?;
            // the eigenvector is unique up to a positive multiple
            let ratio = field.div(&given[0], &phi[0])?;
            if given.iter().zip(&phi).any(|(x, y)| *x != field.mul(&ratio, y)) {
                return Err(GraphError::PerronFrobenius("declared weights are not an eigenvector for [3]".into()));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Family;

    #[test]
    fn roundtrip_builtins() {
        for f in [Family::A(4), Family::A(6), Family::D(9), Family::E8, Family::E8Star, Family::AStar(7)] {
            let g = f.build().unwrap();
            let doc = GraphDoc::from_graph(&g, true).unwrap();
            let json = serde_json::to_string(&doc).unwrap();
            let back: GraphDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_graph().unwrap(), g);
        }
    }

    #[test]
    fn colour_violation_names_edge() {
        let g = Family::A(4).build().unwrap();
        let mut doc = GraphDoc::from_graph(&g, false).unwrap();
        let v0 = doc.vertices[0].clone();
        doc.coloring.as_mut().unwrap().insert(v0, 2);
        let err = doc.to_graph().unwrap_err().to_string();
        assert!(err.contains("edge `e"), "{err}");
    }
}

//! JSON documents for cell systems (`acy-cells/1`) and relation sets
//! (`acy-rels/1`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CellError, CellSystem, RelationSet, Triangles};
use crate::quiver::Graph;
use crate::scalar::{elem_from_strings, elem_to_strings, Tower, TowerDoc};

pub const CELL_SCHEMA: &str = "acy-cells/1";
pub const RELATION_SCHEMA: &str = "acy-rels/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TriangleDoc {
    pub edge_ids: [String; 3],
    pub weight: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CellDoc {
    pub schema: String,
    pub graph_ref: String,
    pub tower: TowerDoc,
    /// Perron-Frobenius weights per vertex label; computed from the graph when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<(String, Vec<Vec<String>>)>>,
    pub triangles: Vec<TriangleDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermDoc {
    pub path: [String; 2],
    pub coeff: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeRelationDoc {
    pub edge: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationDoc {
    pub schema: String,
    pub graph_ref: String,
    pub tower: TowerDoc,
    pub relations: Vec<EdgeRelationDoc>,
}

fn edge(g: &Graph, id: &str) -> Result<usize, CellError> {
    g.edge_index(id).ok_or_else(|| CellError::Schema(format!("unknown edge `{id}`")))
}

fn check_header(schema: &str, want: &str, graph_ref: &str, g: &Graph) -> Result<(), CellError> {
    if schema != want {
        return Err(CellError::Schema(format!("expected schema {want}, found `{schema}`")));
    }
    if !graph_ref.is_empty() && graph_ref != g.name {
        return Err(CellError::Schema(format!("document is for graph `{graph_ref}`, not `{}`", g.name)));
    }
    Ok(())
}

fn check_tower(t: &Tower, g: &Graph) -> Result<(), CellError> {
    if t.field().h() != g.h {
        return Err(CellError::Schema(format!("tower has h = {}, graph has h = {}", t.field().h(), g.h)));
    }
    Ok(())
}

impl CellDoc {
    pub fn from_cells(w: &CellSystem) -> CellDoc {
        let g = &*w.graph;
        CellDoc {
            schema: CELL_SCHEMA.into(),
            graph_ref: g.name.clone(),
            tower: TowerDoc::from_tower(&w.tower),
            phi: Some(g.vertices.iter().cloned().zip(w.phi.iter().map(elem_to_strings)).collect()),
            triangles: w
                .triangles
                .list()
                .iter()
                .zip(&w.weights)
                .map(|(t, x)| TriangleDoc {
                    edge_ids: t.map(|e| g.edges[e].id.clone()),
                    weight: elem_to_strings(x),
                })
                .collect(),
        }
    }

    /// Every triangle of the graph must be listed (in any rotation) exactly once.
    pub fn to_cells(&self, g: &Arc<Graph>) -> Result<CellSystem, CellError> {
        check_header(&self.schema, CELL_SCHEMA, &self.graph_ref, g)?;
        let tower = self.tower.build()?;
        check_tower(&tower, g)?;
        let tri = Arc::new(Triangles::new(g));
        let mut weights: Vec<Option<_>> = vec![None; tri.len()];
        for t in &self.triangles {
            let ids = [edge(g, &t.edge_ids[0])?, edge(g, &t.edge_ids[1])?, edge(g, &t.edge_ids[2])?];
            let c = tri
                .class_of(ids)
                .ok_or_else(|| CellError::Schema(format!("{} is not a closed path", t.edge_ids.join(","))))?;
            if weights[c].is_some() {
                return Err(CellError::Schema(format!("triangle {} listed twice", t.edge_ids.join(","))));
            }
            weights[c] = Some(elem_from_strings(&tower, &t.weight)?);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    let ids: Vec<&str> = tri.list()[i].iter().map(|&e| g.edges[e].id.as_str()).collect();
                    CellError::Schema(format!("no weight for triangle {}", ids.join(",")))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let phi = match &self.phi {
            Some(list) => {
                let mut phi = vec![None; g.num_vertices()];
                for (label, x) in list {
                    let v = g.vertex_index(label).ok_or_else(|| CellError::Schema(format!("unknown vertex `{label}`")))?;
                    phi[v] = Some(elem_from_strings(&tower, x)?);
                }
                phi.into_iter()
                    .map(|x| x.ok_or_else(|| CellError::Schema("phi must cover every vertex".into())))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => g.perron_frobenius()?.1.into_iter().map(|x| tower.from_base(x)).collect(),
        };
        Ok(CellSystem { graph: g.clone(), tower, phi, triangles: tri, weights })
    }
}

impl RelationDoc {
    pub fn from_relations(r: &RelationSet) -> RelationDoc {
        let g = &*r.graph;
        RelationDoc {
            schema: RELATION_SCHEMA.into(),
            graph_ref: g.name.clone(),
            tower: TowerDoc::from_tower(&r.tower),
            relations: r
                .relations
                .iter()
                .enumerate()
                .map(|(a, terms)| EdgeRelationDoc {
                    edge: g.edges[a].id.clone(),
                    terms: terms
                        .iter()
                        .map(|([b, c], x)| TermDoc {
                            path: [g.edges[*b].id.clone(), g.edges[*c].id.clone()],
                            coeff: elem_to_strings(x),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_relations(&self, g: &Arc<Graph>) -> Result<RelationSet, CellError> {
        check_header(&self.schema, RELATION_SCHEMA, &self.graph_ref, g)?;
        let tower = self.tower.build()?;
        check_tower(&tower, g)?;
        let mut relations = vec![Vec::new(); g.num_edges()];
        let mut seen = vec![false; g.num_edges()];
        for r in &self.relations {
            let a = edge(g, &r.edge)?;
            if std::mem::replace(&mut seen[a], true) {
                return Err(CellError::Schema(format!("two relations for edge `{}`", r.edge)));
            }
            for t in &r.terms {
                relations[a].push(([edge(g, &t.path[0])?, edge(g, &t.path[1])?], elem_from_strings(&tower, &t.coeff)?));
            }
        }
        let rs = RelationSet { graph: g.clone(), tower, relations };
        rs.validate()?;
        Ok(rs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::builtin_relations;
    use crate::quiver::Family;

    #[test]
    fn relation_roundtrip() {
        let r = builtin_relations(Family::E8Star).unwrap();
        let doc = RelationDoc::from_relations(&r);
        let json = serde_json::to_string(&doc).unwrap();
        let back: RelationDoc = serde_json::from_str(&json).unwrap();
        let r2 = back.to_relations(&r.graph).unwrap();
        assert_eq!(r.relations, r2.relations);
    }

    #[test]
    fn missing_triangle_is_rejected() {
        let g = Arc::new(Family::A(4).build().unwrap());
        let doc = CellDoc {
            schema: CELL_SCHEMA.into(),
            graph_ref: "A4".into(),
            tower: TowerDoc { h: 4, radicands: Vec::new() },
            phi: None,
            triangles: Vec::new(),
        };
        assert!(matches!(doc.to_cells(&g), Err(CellError::Schema(_))));
    }
}

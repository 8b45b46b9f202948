//! Regression snapshot of an algebra (`acy-algebra/1`): bases as edge-id
//! paths and dimension tables per degree and block.

use serde::{Deserialize, Serialize};

use super::GradedAlgebra;
use crate::scalar::TowerDoc;

pub const ALGEBRA_SCHEMA: &str = "acy-algebra/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockDoc {
    pub src: String,
    pub dst: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeDoc {
    pub degree: usize,
    pub dim: usize,
    pub blocks: Vec<BlockDoc>,
    /// basis paths, edge ids joined by '.'; vertices as `e<label>`
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDoc {
    pub schema: String,
    pub graph_ref: String,
    pub tower: TowerDoc,
    pub ordering: String,
    pub top_degree: usize,
    pub degrees: Vec<DegreeDoc>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &GradedAlgebra) -> Self {
        let g = a.graph();
        let n = g.num_vertices();
        let degrees = (0..=a.top())
            .map(|d| {
                let mut blocks = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let dim = a.block(d, i, j).len();
                        if dim > 0 {
                            blocks.push(BlockDoc { src: g.vertices[i].clone(), dst: g.vertices[j].clone(), dim });
                        }
                    }
                }
                DegreeDoc { degree: d, dim: a.dim(d), blocks, basis: (0..a.dim(d)).map(|i| a.path_label(d, i)).collect() }
            })
            .collect();
        AlgebraDoc {
            schema: ALGEBRA_SCHEMA.into(),
            graph_ref: g.name.clone(),
            tower: TowerDoc::from_tower(a.tower()),
            ordering: "standard monomials; candidates b.e ordered by (basis index of b, outgoing position of e); pivots at the largest index".into(),
            top_degree: a.top(),
            degrees,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::*;
    use crate::quiver::Family;

    #[test]
    fn snapshot_is_stable_across_builds() {
        let a = AlgebraDoc::from_algebra(&algebra(Family::E8Star));
        let b = AlgebraDoc::from_algebra(&algebra(Family::E8Star));
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        let back: AlgebraDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let g = Family::E8Star.build().unwrap();
        let totals = crate::series::hilbert_totals(&g, a.top_degree).unwrap();
        assert_eq!(a.degrees.iter().map(|d| d.dim as i64).collect::<Vec<_>>(), totals);
    }
}

//! Built-in cell data: printed relation sets for E8* and E8, and the
//! constructions (solver, unfolding, orbifold) for the other families.

use std::sync::Arc;

use super::{
    fix_nu_gauge, orbifold_cells, solve_cells, to_potential, unfold_cells, unfold_relations, CellError, CellSystem,
    Potential, RelationSet, SolveOptions,
};
use crate::quiver::{build_d, Family, Graph};
use crate::scalar::{Elem, Tower};

/// Where the cells of a run come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellSource {
    /// Printed relations where available, otherwise the constructions.
    Builtin,
    /// Always go through the numeric solver (with unfolding/orbifold on top).
    Solve,
}

/// Cells and the potential used to build the algebra.
#[derive(Clone, Debug)]
pub struct Prepared {
    /// Certified cells, when the data came from a cell system.
    pub cells: Option<CellSystem>,
    /// Potential after nu gauge fixing and edge rescaling.
    pub potential: Potential,
    pub origin: String,
}

/// E8* relations with edge ids 12, 22, 23, 32, 33, 31, 24, 43.
pub fn e8star_relations(g: &Arc<Graph>) -> Result<RelationSet, CellError> {
    let field = g.base_field()?;
    let base = Tower::base(field);
    let (t, r3) = base.adjoin_sqrt(&base.qint(3))?;
    let e = |id: &str| g.edge_index(id).ok_or_else(|| CellError::Schema(format!("E8* has no edge {id}")));
    let one = t.one();
    let inv_r3 = t.inv(&r3)?;
    let r3_over_2 = t.div(&r3, &t.qint(2))?;
    let mut relations: Vec<Vec<([usize; 2], Elem)>> = vec![Vec::new(); g.num_edges()];
    let mut put = |a: &str, terms: Vec<(&str, &str, Elem)>| -> Result<(), CellError> {
        let a = e(a)?;
        for (b, c, x) in terms {
            relations[a].push(([e(b)?, e(c)?], x));
        }
        Ok(())
    };
    put("31", vec![("12", "23", one.clone())])?;
    put("12", vec![("23", "31", one.clone())])?;
    put("43", vec![("32", "24", one.clone())])?;
    put("24", vec![("43", "32", one.clone())])?;
    put("22", vec![("22", "22", one.clone()), ("23", "32", inv_r3.clone())])?;
    put("33", vec![("33", "33", one.clone()), ("32", "23", t.neg(&inv_r3))])?;
    put("23", vec![("31", "12", r3_over_2.clone()), ("32", "22", one.clone()), ("33", "32", one.clone())])?;
    put("32", vec![("24", "43", r3_over_2), ("22", "23", one.clone()), ("23", "33", one)])?;
    let rs = RelationSet { graph: g.clone(), tower: t, relations };
    rs.validate()?;
    Ok(rs)
}

/// Printed relation sets (E8*, and E8 by unfolding).
pub fn builtin_relations(family: Family) -> Result<RelationSet, CellError> {
    match family {
        Family::E8Star => e8star_relations(&Arc::new(family.build()?)),
        Family::E8 => {
            let base = e8star_relations(&Arc::new(Family::E8Star.build()?))?;
            unfold_relations(&base, &Arc::new(family.build()?))
        }
        other => Err(CellError::UserDataRequired(format!("{other} (no printed relations)"))),
    }
}

/// Certified cells for any built-in family.
pub fn family_cells(family: Family, opts: &SolveOptions) -> Result<CellSystem, CellError> {
    match family {
        Family::A(_) | Family::AStar(_) | Family::E8Star => {
            let g = Arc::new(family.build()?);
            fix_nu_gauge(&solve_cells(&g, opts)?)
        }
        Family::D(n) => {
            let (d, map) = build_d(n)?;
            let a = fix_nu_gauge(&solve_cells(&Arc::new(map.parent.clone()), opts)?)?;
            orbifold_cells(&a, &map, &Arc::new(d))
        }
        Family::DStar(n) => {
            let base = solve_cells(&Arc::new(Family::AStar(n).build()?), opts)?;
            let cells = unfold_cells(&base, &Arc::new(family.build()?))?;
            cells.certify()?;
            Ok(cells)
        }
        Family::E8 => {
            let base = solve_cells(&Arc::new(Family::E8Star.build()?), opts)?;
            let cells = unfold_cells(&base, &Arc::new(family.build()?))?;
            cells.certify()?;
            Ok(cells)
        }
    }
}

/// Cells or relations for a family, reduced to a potential ready for the
/// algebra.
pub fn builtin_potential(family: Family, source: CellSource, opts: &SolveOptions) -> Result<Prepared, CellError> {
    let printed = matches!(family, Family::E8 | Family::E8Star) && source == CellSource::Builtin;
    if printed {
        let rels = builtin_relations(family)?;
        let potential = to_potential(&rels.to_potential()?)?;
        return Ok(Prepared { cells: None, potential, origin: format!("{family}: printed relations") });
    }
    let cells = family_cells(family, opts)?;
    let potential = to_potential(&cells.potential())?;
    let origin = match family {
        Family::D(n) => format!("{family}: orbifold of solved A{n} cells"),
        Family::DStar(n) => format!("{family}: unfolding of solved A{n}* cells"),
        Family::E8 => format!("{family}: unfolding of solved E8* cells"),
        _ => format!("{family}: solved cells"),
    };
    Ok(Prepared { cells: Some(cells), potential, origin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8star_printed_relations_come_from_a_potential() {
        let rels = builtin_relations(Family::E8Star).unwrap();
        assert_eq!(rels.relations.len(), 8);
        let p = rels.to_potential().unwrap();
        let shrunk = to_potential(&p).unwrap();
        assert!(shrunk.tower.rank() <= p.tower.rank());
    }

    #[test]
    fn e8_relations_are_three_copies() {
        let rels = builtin_relations(Family::E8).unwrap();
        assert_eq!(rels.relations.len(), 24);
        assert!(rels.relations.iter().all(|r| !r.is_empty()));
        rels.to_potential().unwrap();
    }
}

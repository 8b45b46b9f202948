//! Built-in graph families.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Edge, Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// A^(n), n >= 4.
    A(u32),
    /// A^(n)*, n >= 5.
    AStar(u32),
    /// D^(n), n = 3k+3 >= 6.
    D(u32),
    /// D^(n)*, n >= 5.
    DStar(u32),
    E8,
    E8Star,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A(n) => write!(f, "A{n}"),
            Family::AStar(n) => write!(f, "A{n}*"),
            Family::D(n) => write!(f, "D{n}"),
            Family::DStar(n) => write!(f, "D{n}*"),
            Family::E8 => write!(f, "E8"),
            Family::E8Star => write!(f, "E8*"),
        }
    }
}

/// Graphs that are recognised but have no construction here.
pub const UNSUPPORTED: &[&str] = &["E4(12)", "E5(12)", "E5(12)*", "E(12)", "E(24)"];

impl Family {
    /// Parse names such as `A4`, `A(4)`, `A^(5)*`, `D9`, `D7*`, `E8*`.
    pub fn parse(name: &str) -> Result<Family, GraphError> {
        let compact: String =
            name.chars().filter(|c| !matches!(c, '^' | '(' | ')' | ' ' | '_')).collect::<String>().to_ascii_uppercase();
        let (body, star) = match compact.strip_suffix('*').or_else(|| compact.strip_suffix("STAR")) {
            Some(b) => (b, true),
            None => (compact.as_str(), false),
        };
        if body.len() < 2 {
            return Err(GraphError::UnknownName(name.to_string()));
        }
        let (letter, num) = body.split_at(1);
        let fam = match letter {
            "E" if num == "8" => {
                if star {
                    Family::E8Star
                } else {
                    Family::E8
                }
            }
            "E" => return Err(GraphError::Unsupported(name.to_string())),
            "A" | "D" => {
                let n: u32 = num.parse().map_err(|_| GraphError::UnknownName(name.to_string()))?;
                match (letter, star) {
                    ("A", false) => Family::A(n),
                    ("A", true) => Family::AStar(n),
                    ("D", false) => Family::D(n),
                    _ => Family::DStar(n),
                }
            }
            _ => return Err(GraphError::UnknownName(name.to_string())),
        };
        fam.check()?;
        Ok(fam)
    }

    pub fn check(&self) -> Result<(), GraphError> {
        let ok = match *self {
            Family::A(n) => n >= 4,
            Family::AStar(n) | Family::DStar(n) => n >= 5,
            Family::D(n) => n >= 6 && n % 3 == 0,
            Family::E8 | Family::E8Star => true,
        };
        if ok {
            Ok(())
        } else {
            Err(GraphError::IllegalParameter(self.to_string()))
        }
    }

    pub fn coxeter(&self) -> u32 {
        match *self {
            Family::A(n) | Family::AStar(n) | Family::D(n) | Family::DStar(n) => n,
            Family::E8 | Family::E8Star => 8,
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        self.check()?;
        match *self {
            Family::A(n) => build_a(n),
            Family::AStar(n) => build_astar(n),
            Family::D(n) => build_d(n).map(|(g, _)| g),
            Family::DStar(n) => unfold(&build_astar(n)?, &format!("D{n}*"), n as usize),
            Family::E8 => unfold(&build_e8star()?, "E8", 2),
            Family::E8Star => build_e8star(),
        }
    }

    /// Short description of the symmetry: `identity` or `rotation`.
    pub fn nu_kind(&self) -> Result<&'static str, GraphError> {
        Ok(if self.build()?.nu_is_trivial() { "identity" } else { "rotation" })
    }
}

fn a_vertices(n: u32) -> Vec<(i64, i64)> {
    let k = n as i64 - 3;
    let mut v = Vec::new();
    for p in 0..=k {
        for l in 0..=k - p {
            v.push((p, l));
        }
    }
    v
}

/// Vertex-induced edge map for graphs without parallel edges.
fn induced_edge_map(edges: &[Edge], nu_vertex: &[usize]) -> Vec<usize> {
    let lookup: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, e)| ((e.src, e.dst), i)).collect();
    edges.iter().map(|e| lookup[&(nu_vertex[e.src], nu_vertex[e.dst])]).collect()
}

fn build_a(n: u32) -> Result<Graph, GraphError> {
    let k = n as i64 - 3;
    let verts = a_vertices(n);
    let idx: HashMap<(i64, i64), usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut edges = Vec::new();
    for &(p, l) in &verts {
        for q in [(p + 1, l), (p - 1, l + 1), (p, l - 1)] {
            if let Some(&j) = idx.get(&q) {
                edges.push(Edge { id: format!("e{}", edges.len()), src: idx[&(p, l)], dst: j });
            }
        }
    }
    let coloring = verts.iter().map(|(p, l)| (p - l).rem_euclid(3) as u8).collect();
    let nu_vertex: Vec<usize> = verts.iter().map(|&(p, l)| idx[&(k - p - l, p)]).collect();
    let nu_edge = induced_edge_map(&edges, &nu_vertex);
    let labels = verts.iter().map(|(p, l)| format!("({p},{l})")).collect();
    Graph::new(format!("A{n}"), n, labels, edges, Some(coloring), nu_vertex, nu_edge)
}

fn build_astar(n: u32) -> Result<Graph, GraphError> {
    let r = (n as usize - 1) / 2;
    let mut edges = Vec::new();
    for p in 0..r {
        if !(p == r - 1 && n % 2 == 1) {
            edges.push(Edge { id: format!("e{}", edges.len()), src: p, dst: p });
        }
        if p + 1 < r {
            edges.push(Edge { id: format!("e{}", edges.len()), src: p, dst: p + 1 });
            edges.push(Edge { id: format!("e{}", edges.len()), src: p + 1, dst: p });
        }
    }
    let labels = (1..=r).map(|p| p.to_string()).collect();
    let m = edges.len();
    Graph::new(format!("A{n}*"), n, labels, edges, None, (0..r).collect(), (0..m).collect())
}

fn build_e8star() -> Result<Graph, GraphError> {
    let pairs = [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (3, 1), (2, 4), (4, 3)];
    let edges = pairs
        .iter()
        .map(|&(a, b)| Edge { id: format!("{a}{b}"), src: a - 1, dst: b - 1 })
        .collect::<Vec<_>>();
    let labels = (1..=4).map(|v: usize| v.to_string()).collect();
    Graph::new("E8*", 8, labels, edges, None, (0..4).collect(), (0..8).collect())
}

/// Three-coloured unfolding: v -> v_0, v_1, v_2 with edges v_a -> w_{a+1};
/// nu(v_a) = v_{a + shift}.
fn unfold(base: &Graph, name: &str, shift: usize) -> Result<Graph, GraphError> {
    let nv = base.num_vertices();
    let vid = |v: usize, a: usize| 3 * v + a;
    let mut labels = Vec::with_capacity(3 * nv);
    let mut coloring = Vec::with_capacity(3 * nv);
    for v in 0..nv {
        for a in 0..3 {
            labels.push(format!("{}_{a}", base.vertices[v]));
            coloring.push(a as u8);
        }
    }
    let mut edges = Vec::new();
    for e in &base.edges {
        for a in 0..3 {
            edges.push(Edge { id: format!("{}_{a}", e.id), src: vid(e.src, a), dst: vid(e.dst, (a + 1) % 3) });
        }
    }
    let s = shift % 3;
    let nu_vertex: Vec<usize> = (0..3 * nv).map(|i| vid(i / 3, (i % 3 + s) % 3)).collect();
    let nu_edge: Vec<usize> = (0..edges.len()).map(|i| 3 * (i / 3) + (i % 3 + s) % 3).collect();
    Graph::new(name.to_string(), base.h, labels, edges, Some(coloring), nu_vertex, nu_edge)
}

/// Origin of a D^(3k+3) vertex inside A^(3k+3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarTag {
    /// A free nu-orbit, listed as (v, nu v, nu^2 v) with v the smallest index.
    Orbit([usize; 3]),
    /// Copy l of the fixed vertex (k,k).
    Star(usize),
}

/// Bookkeeping from D^(3k+3) back to A^(3k+3).
#[derive(Clone, Debug)]
pub struct OrbifoldMap {
    pub parent: Graph,
    pub star: usize,
    pub vertex_tag: Vec<StarTag>,
    /// For each D edge, the A edges in its orbit (three of them).
    pub edge_orbit: Vec<[usize; 3]>,
    /// Indices of the double edge (gamma, gamma').
    pub gamma: [usize; 2],
}

/// D^(3k+3) as the Z3 quotient of A^(3k+3) with the fixed vertex tripled.
///
/// Labelling: free orbits come first, ordered by their smallest A index, then
/// the copies `(k,k)_0..2`. Edges are edge orbits ordered by their smallest A
/// edge; edges at the fixed vertex are repeated per copy. gamma is the orbit
/// of the A edge (k+1,k) -> (k+1,k-1), gamma' that of (k+1,k) -> (k,k+1).
pub fn build_d(n: u32) -> Result<(Graph, OrbifoldMap), GraphError> {
    let a = build_a(n)?;
    let k = (n as i64 - 3) / 3;
    let label = |p: i64, l: i64| format!("({p},{l})");
    let star = a.vertex_index(&label(k, k)).expect("fixed vertex");
    assert_eq!(a.nu_vertex[star], star);
    let mut vertex_tag = Vec::new();
    let mut orbit_of = vec![usize::MAX; a.num_vertices()];
    for v in 0..a.num_vertices() {
        if v == star || orbit_of[v] != usize::MAX {
            continue;
        }
        let o = [v, a.nu_vertex[v], a.nu_vertex[a.nu_vertex[v]]];
        for &w in &o {
            orbit_of[w] = vertex_tag.len();
        }
        vertex_tag.push(StarTag::Orbit(o));
    }
    let star0 = vertex_tag.len();
    for l in 0..3 {
        vertex_tag.push(StarTag::Star(l));
    }
    let labels: Vec<String> = vertex_tag
        .iter()
        .map(|t| match t {
            StarTag::Orbit(o) => a.vertices[o[0]].clone(),
            StarTag::Star(l) => format!("{}_{l}", a.vertices[star]),
        })
        .collect();
    let mut edges = Vec::new();
    let mut edge_orbit = Vec::new();
    let mut seen = vec![false; a.num_edges()];
    let find_edge = |s: &str, d: &str| a.edges.iter().position(|e| a.vertices[e.src] == s && a.vertices[e.dst] == d);
    let gamma_rep = find_edge(&label(k + 1, k), &label(k + 1, k - 1)).expect("gamma");
    let gamma2_rep = find_edge(&label(k + 1, k), &label(k, k + 1)).expect("gamma'");
    let mut gamma = [usize::MAX; 2];
    for e in 0..a.num_edges() {
        if seen[e] {
            continue;
        }
        let o = [e, a.nu_edge[e], a.nu_edge[a.nu_edge[e]]];
        for &f in &o {
            seen[f] = true;
        }
        let (s, d) = (a.src(e), a.dst(e));
        let reps: Vec<(usize, usize, String)> = if s == star {
            (0..3).map(|l| (star0 + l, orbit_of[d], format!("s{l}_{}", labels[orbit_of[d]]))).collect()
        } else if d == star {
            (0..3).map(|l| (orbit_of[s], star0 + l, format!("{}_s{l}", labels[orbit_of[s]]))).collect()
        } else {
            vec![(orbit_of[s], orbit_of[d], String::new())]
        };
        for (src, dst, tag) in reps {
            let id = if o.contains(&gamma_rep) {
                gamma[0] = edges.len();
                "gamma".to_string()
            } else if o.contains(&gamma2_rep) {
                gamma[1] = edges.len();
                "gamma'".to_string()
            } else if tag.is_empty() {
                format!("{}>{}", labels[src], labels[dst])
            } else {
                tag
            };
            edges.push(Edge { id, src, dst });
            edge_orbit.push(o);
        }
    }
    // Colour of an orbit: A colour (p - l) mod 3 is nu-invariant.
    let a_col = a.coloring.clone().unwrap();
    let coloring = vertex_tag
        .iter()
        .map(|t| match t {
            StarTag::Orbit(o) => a_col[o[0]],
            StarTag::Star(_) => a_col[star],
        })
        .collect();
    let nv = vertex_tag.len();
    let ne = edges.len();
    let g = Graph::new(format!("D{n}"), n, labels, edges, Some(coloring), (0..nv).collect(), (0..ne).collect())?;
    Ok((g, OrbifoldMap { parent: a, star, vertex_tag, edge_orbit, gamma }))
}

/// Counts of vertex orbits by size, used in tests.
pub fn orbit_sizes(g: &Graph) -> BTreeMap<usize, usize> {
    let mut seen = vec![false; g.num_vertices()];
    let mut out = BTreeMap::new();
    for v in 0..g.num_vertices() {
        if seen[v] {
            continue;
        }
        let mut size = 0;
        let mut w = v;
        while !seen[w] {
            seen[w] = true;
            size += 1;
            w = g.nu_vertex[w];
        }
        *out.entry(size).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_counts() {
        for n in 4..12u32 {
            let g = Family::A(n).build().unwrap();
            assert_eq!(g.num_vertices() as u32, (n - 1) * (n - 2) / 2);
        }
        for k in 1..4u32 {
            let n = 3 * k + 3;
            let g = Family::D(n).build().unwrap();
            assert_eq!(g.num_vertices() as u32, ((3 * k + 1) * (3 * k + 2) / 2 - 1) / 3 + 3);
            assert!(g.nu_is_trivial());
        }
    }

    #[test]
    fn d9_shape() {
        let (g, m) = build_d(9).unwrap();
        assert_eq!(g.num_vertices(), 12);
        let a = &m.parent;
        let sizes = orbit_sizes(a);
        assert_eq!(sizes.get(&3), Some(&9));
        assert_eq!(sizes.get(&1), Some(&1));
        let [g0, g1] = m.gamma;
        assert_eq!(g.src(g0), g.src(g1));
        assert_eq!(g.dst(g0), g.dst(g1));
        let d = g.adjacency();
        let doubles: usize = d.iter().flatten().filter(|&&x| x == 2).count();
        assert_eq!(doubles, 1);
    }

    #[test]
    fn parse_names() {
        assert_eq!(Family::parse("A4").unwrap(), Family::A(4));
        assert_eq!(Family::parse("A^(7)*").unwrap(), Family::AStar(7));
        assert_eq!(Family::parse("D(9)").unwrap(), Family::D(9));
        assert_eq!(Family::parse("D6*").unwrap(), Family::DStar(6));
        assert_eq!(Family::parse("E8*").unwrap(), Family::E8Star);
        assert!(matches!(Family::parse("E4(12)"), Err(GraphError::Unsupported(_))));
        assert!(matches!(Family::parse("D7"), Err(GraphError::IllegalParameter(_))));
        assert!(matches!(Family::parse("A3"), Err(GraphError::IllegalParameter(_))));
    }

    #[test]
    fn e8_star_edges() {
        let g = Family::E8Star.build().unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 8);
        assert!(g.nu_is_trivial());
        let e8 = Family::E8.build().unwrap();
        assert_eq!(e8.num_vertices(), 12);
        assert!(!e8.nu_is_trivial());
    }
}

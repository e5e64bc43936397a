//! Cayley graphs X_{HsH} = Cay(G/H, HsH/H) on the coset spaces, structural
//! analysis (components, bipartiteness), and the cusp quotient graph X_P.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTable};
use crate::pgl2::{self, CosetSpace, DoubleCoset, PglElement};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    K,
    U,
    A,
    Cusp,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::K => "k",
            Family::U => "u",
            Family::A => "a",
            Family::Cusp => "cusp",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "k" => Ok(Family::K),
            "u" => Ok(Family::U),
            "a" => Ok(Family::A),
            "cusp" => Ok(Family::Cusp),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }
}

/// An undirected regular graph stored as sorted adjacency lists.
/// For cusp graphs `param` records the characteristic p.
#[derive(Clone, Debug)]
pub struct Graph {
    pub family: Family,
    pub q: u32,
    pub param: Elem,
    pub n: usize,
    pub k: usize,
    pub adj: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    family: Family,
    q: u32,
    param: u32,
    n: usize,
    k: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Edges as (i, j) with i < j, lexicographically sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.n * self.k / 2);
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if (i as u32) < j {
                    out.push((i as u32, j));
                }
            }
        }
        out
    }

    /// Dense adjacency matrix for the eigensolver.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                m[i][j as usize] = 1.0;
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            family: self.family,
            q: self.q,
            param: self.param,
            n: self.n,
            k: self.k,
            edges: self.edges(),
        })
        .expect("graph serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Graph> {
        let gj: GraphJson = serde_json::from_value(v.clone())?;
        let mut adj = vec![Vec::new(); gj.n];
        for &(i, j) in &gj.edges {
            if i as usize >= gj.n || j as usize >= gj.n || i == j {
                return Err(Error::InvalidInput(format!("bad edge ({i},{j})")));
            }
            adj[i as usize].push(j);
            adj[j as usize].push(i);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            let len = nbrs.len();
            nbrs.dedup();
            if nbrs.len() != len {
                return Err(Error::InvalidInput("duplicate edge".into()));
            }
        }
        let g = Graph {
            family: gj.family,
            q: gj.q,
            param: gj.param,
            n: gj.n,
            k: gj.k,
            adj,
        };
        for nbrs in &g.adj {
            if nbrs.len() != g.k {
                return Err(Error::InvalidInput(format!("graph is not {}-regular", g.k)));
            }
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n");
        for (i, j) in self.edges() {
            s.push_str(&format!("  {i} -- {j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Build the Cayley graph of a symmetric double coset: xH ~ x x_i H.
pub fn build_graph(
    f: &FieldTable,
    space: &CosetSpace,
    dc: &DoubleCoset,
    family: Family,
    param: Elem,
) -> Result<Graph> {
    if !dc.symmetric {
        return Err(Error::AsymmetricCoset);
    }
    let n = space.len();
    let k = dc.cosets.len();
    let gens: Vec<PglElement> = dc.cosets.iter().map(|&i| space.reps[i as usize]).collect();
    let mut adj = vec![Vec::with_capacity(k); n];
    for i in 0..n {
        let r = space.reps[i];
        for &x in &gens {
            let j = space.index_of(pgl2::mul(f, r, x));
            if j as usize == i {
                return Err(Error::Construction("self-loop produced".into()));
            }
            adj[i].push(j);
        }
        adj[i].sort_unstable();
        let len = adj[i].len();
        adj[i].dedup();
        if adj[i].len() != len {
            return Err(Error::Construction("multi-edge produced".into()));
        }
    }
    // adjacency must be symmetric as an integer matrix
    for i in 0..n {
        for &j in &adj[i] {
            if adj[j as usize].binary_search(&(i as u32)).is_err() {
                return Err(Error::Construction("adjacency not symmetric".into()));
            }
        }
    }
    Ok(Graph {
        family,
        q: f.q(),
        param,
        n,
        k,
        adj,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub regularity: usize,
    pub components: usize,
    pub bipartite: bool,
}

/// Component label per vertex, by BFS.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n];
    let mut next = 0;
    for start in 0..g.n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        label[start] = next;
        while let Some(v) = queue.pop_front() {
            for &w in &g.adj[v] {
                if label[w as usize] == usize::MAX {
                    label[w as usize] = next;
                    queue.push_back(w as usize);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn analyze(g: &Graph) -> StructureReport {
    let labels = component_labels(g);
    let components = labels.iter().copied().max().map_or(0, |m| m + 1);
    // 2-coloring
    let mut color = vec![-1i8; g.n];
    let mut bipartite = true;
    'outer: for start in 0..g.n {
        if color[start] != -1 {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &g.adj[v] {
                let w = w as usize;
                if color[w] == -1 {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    bipartite = false;
                    break 'outer;
                }
            }
        }
    }
    StructureReport {
        n: g.n,
        regularity: g.k,
        components,
        bipartite,
    }
}

/// The induced subgraph on the component containing `v`, vertices re-indexed
/// in increasing original order.
pub fn component_subgraph(g: &Graph, v: usize) -> Graph {
    let labels = component_labels(g);
    let target = labels[v];
    let verts: Vec<usize> = (0..g.n).filter(|&i| labels[i] == target).collect();
    let mut new_id = vec![u32::MAX; g.n];
    for (ni, &oi) in verts.iter().enumerate() {
        new_id[oi] = ni as u32;
    }
    let adj: Vec<Vec<u32>> = verts
        .iter()
        .map(|&oi| g.adj[oi].iter().map(|&w| new_id[w as usize]).collect())
        .collect();
    Graph {
        family: g.family,
        q: g.q,
        param: g.param,
        n: verts.len(),
        k: g.k,
        adj,
    }
}

/// The cusp graph X_P: vertices are nonzero column vectors over F_q modulo
/// scalar multiplication by F_p^x; u ~ v when some gamma in GL2(F_q) with
/// determinant in F_p^x has second column u and first column v, which
/// reduces to det(v|u) lying in F_p^x.
pub fn build_cusp_graph(f: &FieldTable) -> Result<Graph> {
    let q = f.q();
    let p = f.p();
    let n_expected = ((q as u64 * q as u64 - 1) / (p as u64 - 1)) as usize;

    // canonical representative per F_p^x orbit: smallest (a, b) pair
    let mut vert_id = vec![u32::MAX; (q as usize) * (q as usize)];
    let mut verts: Vec<(Elem, Elem)> = Vec::with_capacity(n_expected);
    for a in 0..q {
        for b in 0..q {
            if (a, b) == (0, 0) || vert_id[(a * q + b) as usize] != u32::MAX {
                continue;
            }
            let id = verts.len() as u32;
            verts.push((a, b));
            for lam in 1..p {
                let (la, lb) = (f.mul(lam, a), f.mul(lam, b));
                vert_id[(la * q + lb) as usize] = id;
            }
        }
    }
    if verts.len() != n_expected {
        return Err(Error::Construction(format!(
            "cusp graph has {} vertices, expected {n_expected}",
            verts.len()
        )));
    }

    let n = verts.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (va, vb) = verts[i];
            let (ua, ub) = verts[j];
            let det = f.sub(f.mul(va, ub), f.mul(vb, ua));
            if det != 0 && det < p {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
        if nbrs.len() != q as usize {
            return Err(Error::Construction(format!(
                "cusp graph is {}-regular at some vertex, expected q = {q}",
                nbrs.len()
            )));
        }
    }
    Ok(Graph {
        family: Family::Cusp,
        q,
        param: p,
        n,
        k: q as usize,
        adj,
    })
}

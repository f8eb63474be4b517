//! Cut variables and biconnected components of an xor-part.
//!
//! Cut variables are the variable vertices that are articulation points of the
//! bipartite variable/constraint graph. Constraints are grouped by the biconnected
//! blocks of that graph: two constraints share a component when some block contains
//! both. This includes every pair linked by shared non-cut variables, and also pairs
//! that only share two or more cut variables, which no single-variable cut separates.
//! Distinct components therefore meet in at most one variable, always a cut variable.

use std::collections::BTreeSet;

use crate::formula::{CnfXorFormula, Lit, Var, XorConstraint};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Var(Var),
    Constraint(usize),
}

/// Bipartite graph with one vertex per variable and per constraint, labelled by parity.
///
/// Variable vertices come first (ids `0..num_var_vertices`), in ascending variable order.
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    var_vertices: Vec<Var>,
    parity: Vec<bool>,
    adj: Vec<Vec<usize>>,
}

impl ConstraintGraph {
    pub fn num_var_vertices(&self) -> usize {
        self.var_vertices.len()
    }

    pub fn num_constraint_vertices(&self) -> usize {
        self.parity.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj[..self.var_vertices.len()].iter().map(Vec::len).sum()
    }

    pub fn label(&self, constraint: usize) -> bool {
        self.parity[constraint]
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        let nv = self.var_vertices.len();
        if id < nv {
            Vertex::Var(self.var_vertices[id])
        } else {
            Vertex::Constraint(id - nv)
        }
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adj[id]
    }
}

pub fn build_graph(xors: &[XorConstraint]) -> ConstraintGraph {
    let mut var_vertices: Vec<Var> = xors.iter().flat_map(|x| x.vars().iter().copied()).collect();
    var_vertices.sort_unstable();
    var_vertices.dedup();
    let nv = var_vertices.len();
    let mut adj = vec![Vec::new(); nv + xors.len()];
    for (i, x) in xors.iter().enumerate() {
        for v in x.vars() {
            let vid = var_vertices.binary_search(v).expect("collected above");
            adj[vid].push(nv + i);
            adj[nv + i].push(vid);
        }
    }
    ConstraintGraph {
        var_vertices,
        parity: xors.iter().map(XorConstraint::parity).collect(),
        adj,
    }
}

struct Dfs {
    cut: Vec<bool>,
    preorder: Vec<usize>,
    /// Vertex sets of the biconnected blocks (isolated vertices excluded).
    blocks: Vec<Vec<usize>>,
}

/// Iterative lowpoint DFS over every connected component.
fn articulation_dfs(g: &ConstraintGraph) -> Dfs {
    let n = g.num_vertices();
    let mut disc = vec![NONE; n];
    let mut low = vec![0; n];
    let mut cut = vec![false; n];
    let mut preorder = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    let mut time = 0;
    // (vertex, parent, next neighbor position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != NONE {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        preorder.push(root);
        let mut root_children = 0;
        stack.push((root, NONE, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent, i) = *top;
            if let Some(&w) = g.adj[v].get(i) {
                top.2 += 1;
                if disc[w] == NONE {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    preorder.push(w);
                    pending.push(w);
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != NONE {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        if parent != root {
                            cut[parent] = true;
                        }
                        let mut block = vec![parent];
                        while let Some(u) = pending.pop() {
                            block.push(u);
                            if u == v {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
        if root_children >= 2 {
            cut[root] = true;
        }
    }
    Dfs {
        cut,
        preorder,
        blocks,
    }
}

/// Articulation vertices of `g`.
pub fn cut_vertices(g: &ConstraintGraph) -> BTreeSet<Vertex> {
    articulation_dfs(g)
        .cut
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(id, _)| g.vertex(id))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub cut_vars: BTreeSet<Var>,
    /// Constraint indices of each component, ascending; components in DFS discovery order.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    pub singleton_ids: BTreeSet<usize>,
}

impl Decomposition {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn non_singleton_count(&self) -> usize {
        self.components.len() - self.singleton_ids.len()
    }

    pub fn is_singleton(&self, component: usize) -> bool {
        self.singleton_ids.contains(&component)
    }

    pub fn stats(&self, xors: &[XorConstraint]) -> DecompositionStats {
        let mut all_vars = BTreeSet::new();
        let mut decomposed = 0;
        let mut without_singletons = 0;
        for (id, comp) in self.components.iter().enumerate() {
            let vars: BTreeSet<Var> = comp.iter().flat_map(|&i| xors[i].vars().iter().copied()).collect();
            let elems = comp.len() * vars.len();
            decomposed += elems;
            if !self.is_singleton(id) {
                without_singletons += elems;
            }
            all_vars.extend(vars);
        }
        DecompositionStats {
            constraints: xors.len(),
            singletons: self.singleton_ids.len(),
            components: self.components.len(),
            monolithic_elements: xors.len() * all_vars.len(),
            decomposed_elements: decomposed,
            non_singleton_elements: without_singletons,
        }
    }
}

/// Matrix sizes (rows × columns) for the monolithic and per-component layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecompositionStats {
    pub constraints: usize,
    pub singletons: usize,
    pub components: usize,
    pub monolithic_elements: usize,
    pub decomposed_elements: usize,
    /// Elements when singleton components are handled outside the matrices.
    pub non_singleton_elements: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn decompose(xors: &[XorConstraint]) -> Decomposition {
    let g = build_graph(xors);
    let dfs = articulation_dfs(&g);
    let nv = g.num_var_vertices();
    let cut_vars: BTreeSet<Var> = (0..nv).filter(|&i| dfs.cut[i]).map(|i| g.var_vertices[i]).collect();

    let mut parent: Vec<usize> = (0..xors.len()).collect();
    for block in &dfs.blocks {
        let mut members = block.iter().filter(|&&u| u >= nv).map(|&u| u - nv);
        if let Some(first) = members.next() {
            for other in members {
                let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }

    let mut id_of_root = vec![NONE; xors.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &vertex in dfs.preorder.iter().filter(|&&v| v >= nv) {
        let root = find(&mut parent, vertex - nv);
        if id_of_root[root] == NONE {
            id_of_root[root] = components.len();
            components.push(Vec::new());
        }
    }
    let mut component_of = vec![0; xors.len()];
    for (i, slot) in component_of.iter_mut().enumerate() {
        let id = id_of_root[find(&mut parent, i)];
        *slot = id;
        components[id].push(i);
    }
    let singleton_ids = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() == 1)
        .map(|(id, _)| id)
        .collect();
    Decomposition {
        cut_vars,
        components,
        component_of,
        singleton_ids,
    }
}

/// Clauses of `x1 ⊕ ... ⊕ xw ≡ p`: one clause excluding each assignment of wrong parity.
pub fn xor_to_clauses(x: &XorConstraint) -> Vec<Vec<Lit>> {
    let w = x.width();
    (0..1u64 << w)
        .filter(|m| (m.count_ones() % 2 == 1) != x.parity())
        .map(|m| {
            x.vars()
                .iter()
                .enumerate()
                .map(|(i, &v)| v.lit(m >> i & 1 == 0))
                .collect()
        })
        .collect()
}

pub const DEFAULT_CLAUSIFY_WIDTH: usize = 6;

/// Result of [`clausify_singletons`].
#[derive(Debug, Clone)]
pub struct Clausified {
    pub formula: CnfXorFormula,
    /// Indices (into the input xors) of singleton constraints replaced by clauses.
    pub clausified: Vec<usize>,
    /// Indices of singleton constraints left in place because they exceed the width limit.
    pub refused: Vec<usize>,
}

/// Replaces every singleton-component constraint of width at most `width_limit` by its
/// `2^(w-1)` clauses.
pub fn clausify_singletons(f: &CnfXorFormula, d: &Decomposition, width_limit: usize) -> Clausified {
    let mut out = CnfXorFormula {
        num_vars: f.num_vars,
        clauses: f.clauses.clone(),
        xors: Vec::new(),
    };
    let mut clausified = Vec::new();
    let mut refused = Vec::new();
    for (i, x) in f.xors.iter().enumerate() {
        if !d.is_singleton(d.component_of[i]) {
            out.xors.push(x.clone());
        } else if x.width() > width_limit {
            refused.push(i);
            out.xors.push(x.clone());
        } else {
            for c in xor_to_clauses(x) {
                out.add_clause(c);
            }
            clausified.push(i);
        }
    }
    Clausified {
        formula: out,
        clausified,
        refused,
    }
}

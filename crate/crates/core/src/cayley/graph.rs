use super::group::{check_modulus, closure, elementary_generators, group_order, GroupElements, ModMatrix};
use super::CayleyError;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Default cap on the number of enumerated vertices.
pub const DEFAULT_MAX_VERTICES: usize = 2_000_000;

/// A `degree`-regular multigraph stored as a flat neighbor table:
/// `neighbors[degree * v .. degree * (v + 1)]` lists the ends of the edges
/// leaving `v`, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGraph {
    vertices: usize,
    degree: usize,
    neighbors: Vec<u32>,
}

impl RegularGraph {
    pub fn new(vertices: usize, degree: usize, neighbors: Vec<u32>) -> Result<Self, CayleyError> {
        if vertices == 0 || degree == 0 {
            return Err(CayleyError::EmptyGraph);
        }
        if vertices > u32::MAX as usize || neighbors.len() != vertices * degree {
            return Err(CayleyError::Adjacency("neighbor table has the wrong length".into()));
        }
        if neighbors.iter().any(|&u| u as usize >= vertices) {
            return Err(CayleyError::Adjacency("neighbor index out of range".into()));
        }
        let graph = RegularGraph { vertices, degree, neighbors };
        if !graph.is_symmetric() {
            return Err(CayleyError::Adjacency("edge multiplicities are not symmetric".into()));
        }
        Ok(graph)
    }

    /// Complete graph `K_m`.
    pub fn complete(m: usize) -> Result<Self, CayleyError> {
        let neighbors = (0..m)
            .flat_map(|v| (0..m).filter(move |&u| u != v).map(|u| u as u32))
            .collect();
        Self::new(m, m.saturating_sub(1), neighbors)
    }

    /// Cycle `C_m`, `m ≥ 3`.
    pub fn cycle(m: usize) -> Result<Self, CayleyError> {
        if m < 3 {
            return Err(CayleyError::EmptyGraph);
        }
        let neighbors = (0..m).flat_map(|v| [((v + m - 1) % m) as u32, ((v + 1) % m) as u32]).collect();
        Self::new(m, 2, neighbors)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.degree * v..self.degree * (v + 1)]
    }

    /// Number of edges `v → u` counted with multiplicity.
    pub fn multiplicity(&self, v: usize, u: usize) -> usize {
        self.neighbors(v).iter().filter(|&&w| w as usize == u).count()
    }

    pub fn is_symmetric(&self) -> bool {
        let mut forward: Vec<(u32, u32)> = (0..self.vertices)
            .into_par_iter()
            .flat_map_iter(|v| self.neighbors(v).iter().map(move |&u| (v as u32, u)))
            .collect();
        let mut backward: Vec<(u32, u32)> = forward.par_iter().map(|&(v, u)| (u, v)).collect();
        forward.par_sort_unstable();
        backward.par_sort_unstable();
        forward == backward
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.neighbors(v) {
                let u = u as usize;
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.vertices
    }

    pub fn self_loops(&self, v: usize) -> usize {
        self.multiplicity(v, v)
    }

    /// `y = L x` with `L = D - A`, rows in parallel.
    pub fn laplacian_apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.vertices);
        assert_eq!(y.len(), self.vertices);
        let d = self.degree as f64;
        y.par_iter_mut().enumerate().for_each(|(v, out)| {
            let adjacent: f64 = self.neighbors(v).iter().map(|&u| x[u as usize]).sum();
            *out = d * x[v] - adjacent;
        });
    }

    /// `‖∇f‖²` with one gradient entry `f(v) - f(u)` per ordered edge
    /// `v → u`; equals `2 fᵀ L f`.
    pub fn gradient_norm_sq(&self, f: &[f64]) -> f64 {
        (0..self.vertices)
            .map(|v| self.neighbors(v).iter().map(|&u| (f[v] - f[u as usize]).powi(2)).sum::<f64>())
            .sum()
    }

    /// `fᵀ L f`.
    pub fn dirichlet_energy(&self, f: &[f64]) -> f64 {
        self.gradient_norm_sq(f) / 2.0
    }

    /// Nonzero Laplacian entries `(row, col, value)` with `row ≥ col`,
    /// 0-based, sorted by row then column.
    pub fn laplacian_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for v in 0..self.vertices {
            let mut row: Vec<usize> = self.neighbors(v).iter().map(|&u| u as usize).filter(|&u| u <= v).collect();
            row.sort_unstable();
            let mut entries: Vec<(usize, f64)> = Vec::new();
            for u in row {
                match entries.last_mut() {
                    Some((w, value)) if *w == u => *value -= 1.0,
                    _ => entries.push((u, -1.0)),
                }
            }
            match entries.last_mut() {
                Some((w, value)) if *w == v => *value += self.degree as f64,
                _ => entries.push((v, self.degree as f64)),
            }
            out.extend(entries.into_iter().filter(|&(_, value)| value != 0.0).map(|(u, value)| (v, u, value)));
        }
        out
    }

    pub fn dense_laplacian(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.vertices, self.vertices);
        for v in 0..self.vertices {
            m[(v, v)] += self.degree as f64;
            for &u in self.neighbors(v) {
                m[(v, u as usize)] -= 1.0;
            }
        }
        m
    }

    /// Graph with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RegularGraph, CayleyError> {
        if perm.len() != self.vertices {
            return Err(CayleyError::Adjacency("permutation has the wrong length".into()));
        }
        let mut hit = vec![false; self.vertices];
        for &p in perm {
            if p >= self.vertices || std::mem::replace(&mut hit[p], true) {
                return Err(CayleyError::Adjacency("not a permutation".into()));
            }
        }
        let mut neighbors = vec![0u32; self.neighbors.len()];
        for v in 0..self.vertices {
            let dst = &mut neighbors[self.degree * perm[v]..self.degree * (perm[v] + 1)];
            for (slot, &u) in dst.iter_mut().zip(self.neighbors(v)) {
                *slot = perm[u as usize] as u32;
            }
        }
        Ok(RegularGraph { vertices: self.vertices, degree: self.degree, neighbors })
    }
}

/// Which generators to use for [`build_cayley`].
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSet {
    /// `{E_ij(±1) : i ≠ j}`, twelve generators.
    Elementary,
    /// A multiset that must be closed under inverses.
    Custom(Vec<ModMatrix>),
}

/// Right Cayley graph of `SL₃(ℤ/nℤ)`: `x ~ x s` for each generator `s`.
/// Vertex `i` is the `i`-th group element in lexicographic order.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    modulus: u32,
    generators: Vec<ModMatrix>,
    elements: GroupElements,
    graph: RegularGraph,
}

impl CayleyGraph {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &GroupElements {
        &self.elements
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn vertices(&self) -> usize {
        self.graph.vertices
    }

    pub fn degree(&self) -> usize {
        self.graph.degree
    }

    pub fn vertex(&self, index: usize) -> ModMatrix {
        self.elements.get(index)
    }

    pub fn vertex_index(&self, m: &ModMatrix) -> Option<usize> {
        if m.modulus() != self.modulus {
            return None;
        }
        self.elements.index_of(m)
    }

    /// Vertex permutation `x ↦ g x`, an automorphism of the right Cayley graph.
    pub fn left_translation(&self, g: &ModMatrix) -> Result<Vec<usize>, CayleyError> {
        if g.modulus() != self.modulus {
            return Err(CayleyError::GeneratorModulus { expected: self.modulus, got: g.modulus() });
        }
        (0..self.vertices())
            .into_par_iter()
            .map(|i| self.elements.index_of(&g.mul(&self.vertex(i))).ok_or(CayleyError::NotInGroup))
            .collect()
    }
}

fn inverse_closed(generators: &[ModMatrix]) -> bool {
    let mut keys: Vec<u64> = generators.iter().map(ModMatrix::key).collect();
    let mut inverse_keys: Vec<u64> = generators.iter().map(|g| g.inverse().key()).collect();
    keys.sort_unstable();
    inverse_keys.sort_unstable();
    keys == inverse_keys
}

pub fn build_cayley(modulus: u32, generator_set: GeneratorSet) -> Result<CayleyGraph, CayleyError> {
    build_cayley_with_limit(modulus, generator_set, DEFAULT_MAX_VERTICES)
}

pub fn build_cayley_with_limit(
    modulus: u32,
    generator_set: GeneratorSet,
    max_vertices: usize,
) -> Result<CayleyGraph, CayleyError> {
    check_modulus(modulus)?;
    let order = group_order(modulus);
    if order > max_vertices as u128 {
        return Err(CayleyError::SizeLimit { modulus, order, limit: max_vertices });
    }
    let generators = match generator_set {
        GeneratorSet::Elementary => elementary_generators(modulus),
        GeneratorSet::Custom(gens) => gens,
    };
    if generators.is_empty() {
        return Err(CayleyError::NoGenerators);
    }
    if let Some(g) = generators.iter().find(|g| g.modulus() != modulus) {
        return Err(CayleyError::GeneratorModulus { expected: modulus, got: g.modulus() });
    }
    if !inverse_closed(&generators) {
        return Err(CayleyError::NotInverseClosed);
    }
    let elements = closure(modulus, &generators, max_vertices)?;
    if (elements.len() as u128) < order {
        return Err(CayleyError::NonGenerating { modulus, reached: elements.len(), order });
    }
    let neighbors: Vec<u32> = (0..elements.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = elements.get(i);
            let elements = &elements;
            generators.iter().map(move |s| {
                elements.index_of(&x.mul(s)).expect("closure is closed under the generators") as u32
            })
        })
        .collect();
    let graph = RegularGraph { vertices: elements.len(), degree: generators.len(), neighbors };
    Ok(CayleyGraph { modulus, generators, elements, graph })
}

//! Second Laplacian eigenvalue by thick-restart Lanczos with deflation of
//! constants, plus a dense oracle for small graphs.
//!
//! Reductions run over fixed blocks summed in order, so results do not
//! depend on the number of worker threads.

use super::graph::{build_cayley_with_limit, GeneratorSet, RegularGraph};
use super::CayleyError;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest graph handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 6000;

pub const GAP_CSV_HEADER: &str = "n,vertices,degree,lambda2,gap_normalized,poincare_rho,residual,iterations";

const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// Required residual `‖L x - λ x‖` of the returned unit eigenvector.
    pub tolerance: f64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub seed: u64,
    pub basis_size: usize,
    pub keep: usize,
    pub max_restarts: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { tolerance: 1e-8, threads: None, seed: 0, basis_size: 40, keep: 12, max_restarts: 1000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGapResult {
    pub lambda2: f64,
    pub degree: usize,
    /// `lambda2 / degree`
    pub gap_normalized: f64,
    /// Smallest `ρ` with `‖f - mean f‖₂ ≤ ρ ‖∇f‖₂`, where `∇f` has one entry
    /// per ordered generator edge, so `‖∇f‖₂² = 2 fᵀ L f` and
    /// `ρ = 1 / √(2 lambda2)`.
    pub poincare_rho: f64,
    pub residual: f64,
    /// Laplacian applications.
    pub iterations: usize,
}

impl SpectralGapResult {
    fn new(lambda2: f64, degree: usize, residual: f64, iterations: usize) -> Self {
        SpectralGapResult {
            lambda2,
            degree,
            gap_normalized: lambda2 / degree as f64,
            poincare_rho: 1.0 / (2.0 * lambda2).sqrt(),
            residual,
            iterations,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(BLOCK)
        .zip(b.par_chunks(BLOCK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    partial.iter().sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `Vᵀ w` for the basis vectors `V`.
fn multi_dot(basis: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let blocks = w.len().div_ceil(BLOCK);
    let partial: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let range = b * BLOCK..((b + 1) * BLOCK).min(w.len());
            basis.iter().map(|v| v[range.clone()].iter().zip(&w[range.clone()]).map(|(p, q)| p * q).sum()).collect()
        })
        .collect();
    let mut out = vec![0.0; basis.len()];
    for block in partial {
        for (o, p) in out.iter_mut().zip(block) {
            *o += p;
        }
    }
    out
}

/// `w -= V h`
fn subtract_combination(basis: &[Vec<f64>], h: &[f64], w: &mut [f64]) {
    w.par_chunks_mut(BLOCK).enumerate().for_each(|(b, chunk)| {
        let start = b * BLOCK;
        for (i, x) in chunk.iter_mut().enumerate() {
            let s: f64 = basis.iter().zip(h).map(|(v, c)| c * v[start + i]).sum();
            *x -= s;
        }
    });
}

/// Subtracts the mean, i.e. projects onto the complement of constants.
fn deflate_constants(w: &mut [f64]) {
    let partial: Vec<f64> = w.par_chunks(BLOCK).map(|c| c.iter().sum()).collect();
    let mean = partial.iter().sum::<f64>() / w.len() as f64;
    w.par_iter_mut().for_each(|x| *x -= mean);
}

/// Ritz vectors `V Y[:, cols]`.
fn combine(basis: &[Vec<f64>], y: &DMatrix<f64>, cols: &[usize]) -> Vec<Vec<f64>> {
    cols.iter()
        .map(|&c| {
            let coeffs: Vec<f64> = (0..basis.len()).map(|l| y[(l, c)]).collect();
            let mut x = vec![0.0; basis[0].len()];
            x.par_chunks_mut(BLOCK).enumerate().for_each(|(b, chunk)| {
                let start = b * BLOCK;
                for (i, out) in chunk.iter_mut().enumerate() {
                    *out = basis.iter().zip(&coeffs).map(|(v, c)| c * v[start + i]).sum();
                }
            });
            x
        })
        .collect()
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CayleyError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CayleyError::Threads("thread count must be positive".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CayleyError::Threads(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Second-smallest eigenvalue of the graph Laplacian.
pub fn spectral_gap(graph: &RegularGraph, options: &SpectralOptions) -> Result<SpectralGapResult, CayleyError> {
    if graph.vertices() < 2 {
        return Err(CayleyError::EmptyGraph);
    }
    if !graph.is_connected() {
        return Err(CayleyError::Disconnected);
    }
    if !(options.tolerance > 0.0) || options.basis_size < 3 || options.keep == 0 {
        return Err(CayleyError::SolverOptions);
    }
    with_threads(options.threads, || lanczos(graph, options))?
}

fn lanczos(graph: &RegularGraph, options: &SpectralOptions) -> Result<SpectralGapResult, CayleyError> {
    let n = graph.vertices();
    let m = options.basis_size.min(n - 1);
    let keep = options.keep.min(m / 2).max(1);
    // ‖L‖ ≤ 2·degree sets the scale for detecting breakdown
    let breakdown = 1e-12 * 2.0 * graph.degree() as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut v0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate_constants(&mut v0);
    let nv = norm(&v0);
    v0.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut start = 0;
    let mut matvecs = 0;
    let mut w = vec![0.0; n];
    let mut last_estimate = f64::INFINITY;

    for _restart in 0..options.max_restarts {
        let mut size = m;
        let mut beta = 0.0;
        for j in start..m {
            graph.laplacian_apply(&basis[j], &mut w);
            matvecs += 1;
            // two passes of classical Gram-Schmidt against constants and the basis
            let mut h = vec![0.0; j + 1];
            for _ in 0..2 {
                deflate_constants(&mut w);
                let c = multi_dot(&basis, &w);
                subtract_combination(&basis, &c, &mut w);
                h.iter_mut().zip(&c).for_each(|(a, b)| *a += b);
            }
            for (i, &hi) in h.iter().enumerate() {
                t[(i, j)] = hi;
                t[(j, i)] = hi;
            }
            beta = norm(&w);
            if j + 1 == m || beta <= breakdown {
                size = j + 1;
                break;
            }
            t[(j + 1, j)] = beta;
            t[(j, j + 1)] = beta;
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        let projected = t.view((0, 0), (size, size)).into_owned();
        let projected = (&projected + projected.transpose()) * 0.5;
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let best = order[0];
        let invariant = beta <= breakdown;
        let estimate = if invariant { 0.0 } else { (beta * eig.eigenvectors[(size - 1, best)]).abs() };
        last_estimate = estimate;

        if estimate <= options.tolerance * 0.5 {
            let mut x = combine(&basis[..size], &eig.eigenvectors, &[best]).remove(0);
            deflate_constants(&mut x);
            let nx = norm(&x);
            x.iter_mut().for_each(|v| *v /= nx);
            graph.laplacian_apply(&x, &mut w);
            matvecs += 1;
            let lambda = dot(&x, &w);
            w.iter_mut().zip(&x).for_each(|(r, xi)| *r -= lambda * xi);
            let residual = norm(&w);
            if residual <= options.tolerance {
                return Ok(SpectralGapResult::new(lambda, graph.degree(), residual, matvecs));
            }
            last_estimate = residual;
            if invariant {
                break;
            }
        }

        // thick restart: keep the smallest Ritz pairs and the residual direction
        let kept: Vec<usize> = order[..keep].to_vec();
        let next = w.iter().map(|x| x / beta).collect::<Vec<f64>>();
        let mut new_basis = combine(&basis[..size], &eig.eigenvectors, &kept);
        new_basis.push(next);
        t.fill(0.0);
        for (i, &c) in kept.iter().enumerate() {
            t[(i, i)] = eig.eigenvalues[c];
            let s = beta * eig.eigenvectors[(size - 1, c)];
            t[(i, keep)] = s;
            t[(keep, i)] = s;
        }
        basis = new_basis;
        start = keep;
    }
    Err(CayleyError::NonConvergence { iterations: matvecs, residual: last_estimate })
}

/// Full Laplacian spectrum, ascending, by a dense symmetric eigensolve.
pub fn dense_spectrum(graph: &RegularGraph) -> Result<Vec<f64>, CayleyError> {
    if graph.vertices() > DENSE_LIMIT {
        return Err(CayleyError::DenseLimit { vertices: graph.vertices(), limit: DENSE_LIMIT });
    }
    let mut values: Vec<f64> = graph.dense_laplacian().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn dense_lambda2(graph: &RegularGraph) -> Result<f64, CayleyError> {
    let values = dense_spectrum(graph)?;
    values.get(1).copied().ok_or(CayleyError::EmptyGraph)
}

/// One row of a spectral-gap sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub n: u32,
    pub vertices: usize,
    pub degree: usize,
    pub lambda2: f64,
    pub gap_normalized: f64,
    pub poincare_rho: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl GapRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.vertices,
            self.degree,
            self.lambda2,
            self.gap_normalized,
            self.poincare_rho,
            self.residual,
            self.iterations
        )
    }
}

/// Spectral gaps of the elementary-generator Cayley graphs for each modulus.
///
/// A positive normalized gap on the computed range is all this shows; it
/// says nothing about the Banach-valued Poincaré inequalities or the
/// asymptotics in `n`.
pub fn gap_sweep(moduli: &[u32], max_vertices: usize, options: &SpectralOptions) -> Result<Vec<GapRow>, CayleyError> {
    moduli
        .iter()
        .map(|&n| {
            let g = build_cayley_with_limit(n, GeneratorSet::Elementary, max_vertices)?;
            let r = spectral_gap(g.graph(), options)?;
            Ok(GapRow {
                n,
                vertices: g.vertices(),
                degree: g.degree(),
                lambda2: r.lambda2,
                gap_normalized: r.gap_normalized,
                poincare_rho: r.poincare_rho,
                residual: r.residual,
                iterations: r.iterations,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        let r = spectral_gap(&RegularGraph::complete(4).unwrap(), &SpectralOptions::default()).unwrap();
        assert!((r.lambda2 - 4.0).abs() < 1e-10);
        assert!(r.residual <= 1e-8);
    }

    #[test]
    fn cycle_graph() {
        let r = spectral_gap(&RegularGraph::cycle(6).unwrap(), &SpectralOptions::default()).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-10);
        assert_eq!(r.poincare_rho, 1.0 / 2f64.sqrt());
    }

    #[test]
    fn long_cycle_needs_restarts() {
        let m = 400;
        let opts = SpectralOptions { basis_size: 20, keep: 6, max_restarts: 5000, ..Default::default() };
        let r = spectral_gap(&RegularGraph::cycle(m).unwrap(), &opts).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::TAU / m as f64).cos();
        assert!((r.lambda2 - exact).abs() < 1e-9, "{} vs {exact}", r.lambda2);
        assert!(r.iterations > 20);
    }

    #[test]
    fn dense_matches_closed_forms() {
        let s = dense_spectrum(&RegularGraph::cycle(6).unwrap()).unwrap();
        let expected = [0.0, 1.0, 1.0, 3.0, 3.0, 4.0];
        for (a, b) in s.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let two_triangles = RegularGraph::new(6, 2, vec![1, 2, 0, 2, 0, 1, 4, 5, 3, 5, 3, 4]).unwrap();
        assert_eq!(spectral_gap(&two_triangles, &SpectralOptions::default()), Err(CayleyError::Disconnected));
        let bad = SpectralOptions { tolerance: 0.0, ..Default::default() };
        assert_eq!(spectral_gap(&RegularGraph::cycle(5).unwrap(), &bad), Err(CayleyError::SolverOptions));
        let zero = SpectralOptions { threads: Some(0), ..Default::default() };
        assert!(matches!(spectral_gap(&RegularGraph::cycle(5).unwrap(), &zero), Err(CayleyError::Threads(_))));
    }

    #[test]
    fn iteration_cap() {
        let opts = SpectralOptions { basis_size: 4, keep: 1, max_restarts: 2, ..Default::default() };
        let e = spectral_gap(&RegularGraph::cycle(500).unwrap(), &opts).unwrap_err();
        assert!(matches!(e, CayleyError::NonConvergence { .. }));
    }

    #[test]
    fn csv_row_shape() {
        let rows = gap_sweep(&[2], 1000, &SpectralOptions::default()).unwrap();
        assert_eq!(rows[0].vertices, 168);
        assert_eq!(rows[0].csv_line().split(',').count(), GAP_CSV_HEADER.split(',').count());
    }
}

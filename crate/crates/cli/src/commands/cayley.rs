use crate::config::{Common, CayleyFile};
use crate::output::emit;
use crate::{CayleyArgs, CliError};
use serde::Serialize;
use sl3lab::cayley::{
    build_cayley_with_limit, spectral_gap, write_matrix_market, CayleyError, GapRow, GeneratorSet, SpectralOptions,
    DEFAULT_MAX_VERTICES,
};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

const NOTE: &str = "A positive normalized gap on the computed moduli is evidence about scalar Poincare \
                    constants only; it does not verify Banach-valued Poincare inequalities or any statement \
                    about n -> infinity.";

#[derive(Debug, Serialize)]
struct Settings {
    moduli: Vec<u32>,
    max_vertices: usize,
    tolerance: f64,
    seed: u64,
    threads: Option<usize>,
    export_mtx: Option<PathBuf>,
}

#[derive(Serialize)]
struct Body<'a> {
    settings: &'a Settings,
    rows: &'a [GapRow],
    exported: &'a [PathBuf],
    note: &'static str,
}

impl From<CayleyError> for CliError {
    fn from(e: CayleyError) -> Self {
        match e {
            CayleyError::SizeLimit { .. } => CliError::SizeLimit(e.to_string()),
            CayleyError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            CayleyError::Io(msg) => CliError::Io(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// `base` for a single modulus, otherwise `stem-n{n}.ext` next to it.
fn export_path(base: &Path, n: u32, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("laplacian");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("mtx");
    base.with_file_name(format!("{stem}-n{n}.{ext}"))
}

pub fn run(common: &Common, args: &CayleyArgs, file: &CayleyFile) -> Result<bool, CliError> {
    let moduli = match &args.moduli {
        Some(s) => crate::config::parse_list::<u32>(s, "modulus")?,
        None => file.moduli.clone().unwrap_or_else(|| vec![2, 3]),
    };
    let settings = Settings {
        moduli,
        max_vertices: args.max_vertices.or(file.max_vertices).unwrap_or(DEFAULT_MAX_VERTICES),
        tolerance: args.tolerance.or(file.tolerance).unwrap_or(1e-8),
        seed: common.seed,
        threads: common.threads,
        export_mtx: args.export_mtx.clone().or(file.export_mtx.clone()),
    };
    if settings.moduli.is_empty() {
        return Err(CliError::Config("no moduli given".into()));
    }
    if !(settings.tolerance > 0.0) {
        return Err(CliError::Config("tolerance must be positive".into()));
    }
    let options = SpectralOptions {
        tolerance: settings.tolerance,
        threads: settings.threads,
        seed: settings.seed,
        ..Default::default()
    };

    let several = settings.moduli.len() > 1;
    let mut rows = Vec::new();
    let mut exported = Vec::new();
    for &n in &settings.moduli {
        let g = build_cayley_with_limit(n, GeneratorSet::Elementary, settings.max_vertices)?;
        let r = spectral_gap(g.graph(), &options)?;
        eprintln!("cayley: n = {n}, {} vertices, lambda2 = {:.12}", g.vertices(), r.lambda2);
        rows.push(GapRow {
            n,
            vertices: g.vertices(),
            degree: g.degree(),
            lambda2: r.lambda2,
            gap_normalized: r.gap_normalized,
            poincare_rho: r.poincare_rho,
            residual: r.residual,
            iterations: r.iterations,
        });
        if let Some(base) = &settings.export_mtx {
            let path = export_path(base, n, several);
            let f = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_matrix_market(g.graph(), &mut BufWriter::new(f))?;
            exported.push(path);
        }
    }

    let passed = rows.iter().all(|r| r.gap_normalized > 0.0 && r.residual <= settings.tolerance);
    eprintln!("cayley: {NOTE}");
    let body = Body { settings: &settings, rows: &rows, exported: &exported, note: NOTE };
    emit(common, "cayley", passed, &rows, &body)?;
    Ok(passed)
}

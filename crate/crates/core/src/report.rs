//! Run configuration, the `verify`/`analyze`/`pair` drivers behind the CLI,
//! versioned TOML reports with CSV side files, and the plain-text matrix
//! format.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::assembly::{
    build_gamma, build_generator, build_k_assembly, build_u_approx, choose_r, commutator, interior_norm,
    leading_columns_norm, relation_residuals, GeneratorTag,
};
use crate::coefficients::DeformationParam;
use crate::dirac::{
    build_dirac, check_growth_conditions, commutator_norms, sign_structure, spectral_dimension, Branch,
    DimensionFit, DiracFamily, GrowthReport, SignStructure,
};
use crate::error::{Error, Result};
use crate::fredholm::{
    compactness_profile, pairing, pairing_fundamental_unitary, sector_total, CompactnessProfile, IndexReport,
    PairingReport, RowProjection, Stabilized,
};
use crate::halfint::TruncatedSpace;
use crate::sparse::{SparseOperator, C64};

pub const SCHEMA: &str = "suq2-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub q: f64,
    pub branch: Branch,
    pub n2_max: i64,
    /// Interior margin used for measurements, on top of each operator's band.
    pub band: i64,
    /// `None` resolves through [`choose_r`].
    pub r: Option<u32>,
    pub family: String,
    pub rows: Vec<i64>,
    pub tol: f64,
    pub sizes: Vec<i64>,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 0.5,
            branch: Branch::Quantum,
            n2_max: 20,
            band: 2,
            r: None,
            family: "generic".into(),
            rows: vec![0],
            tol: 1e-6,
            sizes: vec![24, 32, 40],
            out_dir: PathBuf::from("suq2-out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.validate_with_min_size(4)
    }

    /// Same checks with a smaller floor on `n2_max`, for exporting matrices
    /// of tiny truncations.
    pub fn validate_with_min_size(&self, min_n2: i64) -> Result<()> {
        match self.branch {
            Branch::Quantum if !(self.q > 0.0 && self.q < 1.0) => {
                return Err(Error::Parameter(format!("quantum branch needs 0 < q < 1, got {}", self.q)))
            }
            Branch::Classical if self.q != 1.0 => {
                return Err(Error::Parameter(format!("classical branch needs q = 1, got {}", self.q)))
            }
            _ => {}
        }
        if self.n2_max < min_n2 {
            return Err(Error::Parameter(format!("n2_max must be at least {min_n2}, got {}", self.n2_max)));
        }
        if self.band < 0 {
            return Err(Error::Parameter(format!("band must be nonnegative, got {}", self.band)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.sizes.is_empty() || self.sizes.windows(2).any(|w| w[0] >= w[1]) || self.sizes[0] < 1 {
            return Err(Error::Parameter(format!("sizes must be positive and strictly increasing, got {:?}", self.sizes)));
        }
        if let Some(&k) = self.rows.iter().find(|&&k| k < 0) {
            return Err(Error::Parameter(format!("rows must be nonnegative, got {k}")));
        }
        if self.r == Some(0) {
            return Err(Error::Parameter("r must be at least 1".into()));
        }
        self.family()?;
        Ok(())
    }

    pub fn deformation(&self) -> DeformationParam {
        match self.branch {
            Branch::Quantum => DeformationParam::Quantum(self.q),
            Branch::Classical => DeformationParam::Classical,
        }
    }

    pub fn family(&self) -> Result<DiracFamily> {
        self.family.parse()
    }

    fn row_set(&self) -> BTreeSet<i64> {
        self.rows.iter().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub n2_max: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl CheckResult {
    fn measured(name: impl Into<String>, n2_max: i64, value: f64, threshold: f64) -> Self {
        let status = if value <= threshold { Status::Pass } else { Status::Fail };
        CheckResult { name: name.into(), n2_max, status, value: Some(value), threshold: Some(threshold) }
    }

    fn skipped(name: impl Into<String>, n2_max: i64) -> Self {
        CheckResult { name: name.into(), n2_max, status: Status::Skipped, value: None, threshold: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSeries {
    pub generator: GeneratorTag,
    pub sizes: Vec<i64>,
    pub norms: Vec<f64>,
    /// `bounded-trend` when the last two sizes agree to 1%, else `unbounded-trend`.
    pub trend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorTable {
    pub k: i64,
    pub n2_max: i64,
    /// Sum of the per-sector indices, absent when some sector is undetermined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<i64>,
    /// Nonzero contributions `(s, index)`.
    pub contributions: Vec<(i64, i64)>,
    pub agrees_with_svd: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UDistance {
    pub n2_max: i64,
    pub window: f64,
    pub distance: f64,
    pub bound: f64,
    pub within_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_min_above: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_max_below: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    /// Seconds since the epoch; the only field that varies between identical runs.
    pub timestamp: u64,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signs: Option<SignStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<DimensionFit>,
    pub commutator_norms: Vec<NormSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingReport>,
    pub sectors: Vec<SectorTable>,
    pub compactness: Vec<CompactnessProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_distance: Option<UDistance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fundamental_unitary: Option<IndexReport>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            exit_code: EXIT_OK,
            failure: None,
            config: config.clone(),
            checks: vec![],
            growth: None,
            signs: None,
            dimension: None,
            commutator_norms: vec![],
            pairing: None,
            sectors: vec![],
            compactness: vec![],
            u_distance: None,
            fundamental_unitary: None,
            notes: vec![],
        }
    }

    fn fail(&mut self, what: impl Into<String>) {
        if self.failure.is_none() {
            self.failure = Some(what.into());
        }
        self.exit_code = EXIT_NUMERIC;
    }

    fn settle_checks(&mut self) {
        if let Some(c) = self.checks.iter().find(|c| c.status == Status::Fail) {
            let name = c.name.clone();
            self.fail(name);
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Format(format!("report serialization: {e}")))
    }

    /// Writes `<command>.toml` and the CSV series into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let main = dir.join(format!("{}.toml", self.command));
        fs::write(&main, self.to_toml()?)?;
        written.push(main);
        if !self.commutator_norms.is_empty() {
            let path = dir.join("commutator_norms.csv");
            let mut w = csv_writer(&path)?;
            write_row(&mut w, ["generator", "n2_max", "interior_norm"])?;
            for s in &self.commutator_norms {
                for (n, v) in s.sizes.iter().zip(&s.norms) {
                    write_row(&mut w, [format!("{:?}", s.generator), n.to_string(), v.to_string()])?;
                }
            }
            w.flush()?;
            written.push(path);
        }
        if let Some(fit) = &self.dimension {
            let path = dir.join("counting.csv");
            let mut w = csv_writer(&path)?;
            write_row(&mut w, ["lambda", "count"])?;
            for (l, c) in fit.lambda_grid.iter().zip(&fit.counting) {
                write_row(&mut w, [l.to_string(), c.to_string()])?;
            }
            w.flush()?;
            written.push(path);
        }
        if let Some(g) = &self.growth {
            let path = dir.join("growth.csv");
            let mut w = csv_writer(&path)?;
            write_row(&mut w, ["n2", "plus", "minus_scaled"])?;
            for (n2, (p, m)) in g.plus_series.iter().zip(&g.minus_series).enumerate() {
                write_row(&mut w, [n2.to_string(), p.to_string(), m.to_string()])?;
            }
            w.flush()?;
            written.push(path);
        }
        if !self.compactness.is_empty() {
            let path = dir.join("compactness.csv");
            let mut w = csv_writer(&path)?;
            write_row(&mut w, ["from", "to", "n2", "norm"])?;
            for c in &self.compactness {
                for (n2, v) in &c.series {
                    write_row(&mut w, [c.from.to_string(), c.to.to_string(), n2.to_string(), v.to_string()])?;
                }
            }
            w.flush()?;
            written.push(path);
        }
        Ok(written)
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(csv_error)
}

fn write_row<I, T>(w: &mut csv::Writer<fs::File>, row: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(row).map_err(csv_error)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("csv: {other:?}")),
    }
}

fn transposed_adjoint_gap(space: TruncatedSpace, q: DeformationParam, g: GeneratorTag, gs: GeneratorTag, band: i64) -> Result<f64> {
    let m = build_generator(space, q, g)?;
    let ms = build_generator(space, q, gs)?;
    ms.max_abs_diff(&m.adjoint(), space.interior_len(band.max(1)))
}

/// Relations, adjoint consistency, the `k_ε` oracle and equivariance of the
/// configured Dirac operator, each compared against `tol`.
pub fn cmd_verify(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut rep = Report::new("verify", config);
    let q = config.deformation();
    let n = config.n2_max;
    let space = TruncatedSpace::new(n)?;
    for (name, v) in relation_residuals(space, q)? {
        rep.checks.push(CheckResult::measured(format!("relation {name}"), n, v, config.tol));
    }
    for (g, gs, name) in [
        (GeneratorTag::Alpha, GeneratorTag::AlphaStar, "adjoint alpha"),
        (GeneratorTag::Beta, GeneratorTag::BetaStar, "adjoint beta"),
    ] {
        let v = transposed_adjoint_gap(space, q, g, gs, config.band)?;
        rep.checks.push(CheckResult::measured(name, n, v, config.tol));
    }
    if q.is_classical() {
        for name in ["k-oracle", "equivariance A0", "equivariance A1"] {
            rep.checks.push(CheckResult::skipped(name, n));
        }
    } else {
        let bbs = build_generator(space, q, GeneratorTag::Beta)?.compose(&build_generator(space, q, GeneratorTag::BetaStar)?)?;
        let v = bbs.max_abs_diff(&build_k_assembly(space, q)?, space.interior_len(config.band.max(2)))?;
        rep.checks.push(CheckResult::measured("k-oracle", n, v, config.tol));
        let d = build_dirac(space, &config.family()?)?;
        for (tag, name) in [(GeneratorTag::A0, "equivariance A0"), (GeneratorTag::A1, "equivariance A1")] {
            let c = commutator(&d, &build_generator(space, q, tag)?)?;
            rep.checks.push(CheckResult::measured(name, n, interior_norm(&c, c.band())?, config.tol));
        }
    }
    rep.settle_checks();
    Ok(rep)
}

fn trend(norms: &[f64]) -> String {
    match norms {
        [.., a, b] if (b - a).abs() <= 0.01 * a.abs() => "bounded-trend".into(),
        [_, _, ..] => "unbounded-trend".into(),
        _ => "undetermined".into(),
    }
}

/// Growth conditions, sign structure, counting-function fit and commutator
/// norms for the configured family. Numerical findings never fail the run.
pub fn cmd_analyze(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut rep = Report::new("analyze", config);
    let family = config.family()?;
    let q = config.deformation();
    let n = config.n2_max;
    let growth = check_growth_conditions(&family, n, Branch::of(q))?;
    if !growth.satisfied {
        rep.notes.push(format!("growth conditions not met on the {} branch within n2 <= {n}", q.branch_name()));
    }
    rep.growth = Some(growth);
    let m = family.negative_rows().and_then(|r| r.last().copied()).unwrap_or(0).max(2) + 1;
    if n > m {
        rep.signs = Some(sign_structure(&family, m, m, n)?);
    } else {
        rep.notes.push(format!("sign structure needs n2_max > {m}"));
    }
    match spectral_dimension(&family, n, 20) {
        Ok(fit) => rep.dimension = Some(fit),
        Err(e) => rep.notes.push(format!("spectral dimension not fitted: {e}")),
    }
    for tag in [GeneratorTag::Alpha, GeneratorTag::Beta] {
        let series = commutator_norms(&family, q, tag, &config.sizes)?;
        let norms: Vec<f64> = series.iter().map(|s| s.1).collect();
        rep.commutator_norms.push(NormSeries { generator: tag, sizes: config.sizes.clone(), trend: trend(&norms), norms });
    }
    Ok(rep)
}

/// Index pairings, sector tables, compactness profiles, the `u` distance and
/// the fundamental-unitary pairing. Unstable indices give exit code 2.
pub fn cmd_pair(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    if config.sizes.len() < 3 {
        return Err(Error::Parameter(format!("pairing needs at least 3 sizes, got {:?}", config.sizes)));
    }
    let mut rep = Report::new("pair", config);
    let q = config.deformation();
    let family = config.family()?;
    let top = *config.sizes.last().unwrap();
    if q.is_classical() {
        rep.notes.push("γ_r pairing needs q < 1; only the fundamental unitary is paired".into());
    } else {
        let r = match config.r {
            Some(r) => r,
            None => {
                let c = choose_r(q)?;
                if c.tie {
                    rep.notes.push(format!("q^(2(r-1)) = 1/2 at r = {}; only the strict inequality holds", c.r));
                }
                c.r
            }
        };
        let rows = config.row_set();
        let pr = pairing(&config.sizes, q, Some(r), &rows, config.tol)?;
        if pr.pairing == Stabilized::Unstable {
            rep.fail("pairing unstable");
        }
        for (&k, idx) in rows.iter().zip(&pr.per_row) {
            let (total, contributions) = sector_total(q, r, k, top)?;
            let agrees = total.is_some() && total == idx.stabilized_index.value();
            if !agrees {
                rep.fail(format!("sector and SVD indices disagree for k = {k}"));
            }
            rep.sectors.push(SectorTable { k, n2_max: top, total, contributions, agrees_with_svd: agrees });
        }
        rep.pairing = Some(pr);
        let space = TruncatedSpace::new(top)?;
        let gamma = build_gamma(space, q, r)?;
        for &k in &rows {
            for l in [1, 2] {
                rep.compactness.push(compactness_profile(&gamma, RowProjection::new(k)?, RowProjection::new(k + l)?)?);
            }
        }
        let n = config.n2_max;
        let uspace = TruncatedSpace::new(n)?;
        let u = build_u_approx(uspace, q, (1.0 + config.q) / 2.0)?;
        let g = build_gamma(uspace, q, r)?;
        let distance = leading_columns_norm(&g.sub(&u.op)?, uspace.interior_len(g.band() + config.band));
        let bound = 2.0 * config.q.powi(2 * r as i32) + 0.1;
        if distance > bound {
            rep.notes.push(format!("warning: |γ_r − u| = {distance} exceeds {bound} at n2_max = {n}"));
        }
        rep.u_distance = Some(UDistance {
            n2_max: n,
            window: u.window,
            distance,
            bound,
            within_bound: distance <= bound,
            cluster_min_above: u.min_above,
            cluster_max_below: u.max_below,
        });
    }
    if family.negative_rows().is_some() {
        let fu = pairing_fundamental_unitary(&config.sizes, q, &family, config.tol)?;
        if fu.stabilized_index == Stabilized::Unstable {
            rep.fail("fundamental unitary index unstable");
        }
        rep.fundamental_unitary = Some(fu);
    }
    Ok(rep)
}

/// Operators available to `export`.
pub fn build_named(name: &str, config: &RunConfig) -> Result<SparseOperator> {
    config.validate_with_min_size(0)?;
    let space = TruncatedSpace::new(config.n2_max)?;
    let q = config.deformation();
    let tag = match name {
        "alpha" => GeneratorTag::Alpha,
        "alpha*" => GeneratorTag::AlphaStar,
        "beta" => GeneratorTag::Beta,
        "beta*" => GeneratorTag::BetaStar,
        "A0" => GeneratorTag::A0,
        "A1" => GeneratorTag::A1,
        "A1*" => GeneratorTag::A1Star,
        "identity" => GeneratorTag::Identity,
        "gamma" => {
            let r = match config.r {
                Some(r) => r,
                None => choose_r(q)?.r,
            };
            return build_gamma(space, q, r);
        }
        "dirac" => return build_dirac(space, &config.family()?),
        other => return Err(Error::Parameter(format!("unknown operator '{other}'"))),
    };
    build_generator(space, q, tag)
}

/// Line 1 `rows cols nnz band`, then `row col re im` per entry in column-major
/// order. Values use the shortest representation that parses back exactly.
pub fn export_matrix(a: &SparseOperator, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{} {} {} {}", a.rows(), a.ncols(), a.nnz(), a.band())?;
    for (r, c, v) in a.entries() {
        writeln!(w, "{r} {c} {:?} {:?}", v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}

fn space_of_dim(dim: usize) -> Result<TruncatedSpace> {
    let mut n2 = 0;
    loop {
        let s = TruncatedSpace::new(n2)?;
        if s.dim() == dim {
            return Ok(s);
        }
        if s.dim() > dim {
            return Err(Error::Format(format!("{dim} is not the dimension of a truncated space")));
        }
        n2 += 1;
    }
}

pub fn import_matrix(path: &Path) -> Result<SparseOperator> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let h: Vec<i64> = header
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|e| Error::Format(format!("header '{header}': {e}"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz, band] = h[..] else {
        return Err(Error::Format(format!("header '{header}' needs 4 fields")));
    };
    let domain = space_of_dim(cols as usize)?;
    let codomain = space_of_dim(rows as usize)?;
    let mut triplets = Vec::with_capacity(nnz as usize);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::Format(format!("entry line '{line}' needs 4 fields")));
        }
        let bad = |e: &dyn std::fmt::Display| Error::Format(format!("entry line '{line}': {e}"));
        let r: usize = f[0].parse().map_err(|e| bad(&e))?;
        let c: usize = f[1].parse().map_err(|e| bad(&e))?;
        let re: f64 = f[2].parse().map_err(|e| bad(&e))?;
        let im: f64 = f[3].parse().map_err(|e| bad(&e))?;
        triplets.push((r, c, C64::new(re, im)));
    }
    if triplets.len() != nnz as usize {
        return Err(Error::Format(format!("header promises {nnz} entries, found {}", triplets.len())));
    }
    SparseOperator::from_triplets(domain, codomain, band, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejections() {
        let mut c = RunConfig { q: 1.5, ..RunConfig::default() };
        assert!(c.validate().is_err());
        c.q = 0.5;
        c.branch = Branch::Classical;
        assert!(c.validate().is_err());
        c.q = 1.0;
        assert!(c.validate().is_ok());
        let c = RunConfig { sizes: vec![24, 24, 40], ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { n2_max: 3, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { family: "nope".into(), ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn verify_default_passes() {
        let rep = cmd_verify(&RunConfig::default()).unwrap();
        assert_eq!(rep.exit_code, EXIT_OK, "{:?}", rep.failure);
        assert!(rep.checks.iter().filter(|c| c.name.starts_with("relation")).all(|c| c.value.unwrap() <= 1e-10));
    }

    #[test]
    fn verify_classical_skips() {
        let c = RunConfig { q: 1.0, branch: Branch::Classical, ..RunConfig::default() };
        let rep = cmd_verify(&c).unwrap();
        assert_eq!(rep.exit_code, EXIT_OK);
        assert_eq!(rep.checks.iter().filter(|c| c.status == Status::Skipped).count(), 3);
    }

    #[test]
    fn verify_flags_failure() {
        let c = RunConfig { tol: 1e-30, ..RunConfig::default() };
        let rep = cmd_verify(&c).unwrap();
        assert_eq!(rep.exit_code, EXIT_NUMERIC);
        assert!(rep.failure.is_some());
    }

    #[test]
    fn report_is_toml() {
        let rep = cmd_verify(&RunConfig::default()).unwrap();
        let text = rep.to_toml().unwrap();
        assert!(text.contains("schema = \"suq2-report/1\""));
        let parsed: toml::Table = text.parse().unwrap();
        assert_eq!(parsed["command"].as_str(), Some("verify"));
    }

    #[test]
    fn identity_export_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("id.txt");
        export_matrix(&SparseOperator::identity(TruncatedSpace::new(0).unwrap()), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "1 1 1 0\n0 0 1.0 0.0\n");
    }

    #[test]
    fn malformed_import() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, "5 5 2 1\n0 0 1.0 0.0\n").unwrap();
        assert!(matches!(import_matrix(&path), Err(Error::Format(_))));
        fs::write(&path, "4 4 0 0\n").unwrap();
        assert!(matches!(import_matrix(&path), Err(Error::Format(_))));
        assert!(matches!(import_matrix(&dir.path().join("missing")), Err(Error::Io(_))));
    }
}

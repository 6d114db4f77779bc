//! JSON wire formats shared by the CLI, fixtures, and reports.
//!
//! Conventions used everywhere:
//! - a complex scalar is a two-element array `[re, im]`;
//! - a matrix is a row-major array of rows of complex scalars;
//! - a subspace is `{"ambient_dim": n, "basis": [columns]}` with each
//!   column a list of complex scalars;
//! - a polarization is `{"lambda": [re, im], "xi": [...], "eta": [...]}`;
//! - a chain is `{"ambient_dim": n, "sites": [{"lambda": [re, im],
//!   "projector": [[...]]}]}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, ChainSite};
use crate::error::{Error, Result};
use crate::kdv::ScanGrid;
use crate::linalg::{Covector, ProjectorState, Subspace, Vector};
use crate::maps::Polarization;
use crate::tol::Tolerances;

/// Complex scalar as `[re, im]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct JsonComplex(pub f64, pub f64);

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex(z.re, z.im)
    }
}

impl From<JsonComplex> for Complex64 {
    fn from(z: JsonComplex) -> Self {
        Complex64::new(z.0, z.1)
    }
}

pub fn encode_matrix(m: &DMatrix<Complex64>) -> Vec<Vec<JsonComplex>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

pub fn decode_matrix(rows: &[Vec<JsonComplex>]) -> Result<DMatrix<Complex64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::InvalidInput("matrix must have at least one row".into()));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput("matrix rows must share a nonzero length".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j].into()))
}

pub fn encode_entries(entries: &[Complex64]) -> Vec<JsonComplex> {
    entries.iter().map(|&z| z.into()).collect()
}

fn decode_entries(entries: &[JsonComplex]) -> Vec<Complex64> {
    entries.iter().map(|&z| z.into()).collect()
}

/// `{"ambient_dim": n, "basis": [columns]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<JsonComplex>>,
}

impl SubspaceJson {
    pub fn encode(s: &Subspace) -> Self {
        Self {
            ambient_dim: s.ambient_dim(),
            basis: (0..s.dim())
                .map(|j| (0..s.ambient_dim()).map(|i| s.basis()[(i, j)].into()).collect())
                .collect(),
        }
    }

    pub fn decode(&self, tols: &Tolerances) -> Result<Subspace> {
        if self.ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient_dim must be >= 1".into()));
        }
        if self.basis.is_empty() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        if self.basis.iter().any(|col| col.len() != self.ambient_dim) {
            return Err(Error::InvalidInput(
                "subspace basis columns must have ambient_dim entries".into(),
            ));
        }
        let columns = DMatrix::from_fn(self.ambient_dim, self.basis.len(), |i, j| {
            self.basis[j][i].into()
        });
        Subspace::from_columns(&columns, tols.rank_tol)
    }
}

/// `{"lambda": [re, im], "xi": [...], "eta": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarizationJson {
    pub lambda: JsonComplex,
    pub xi: Vec<JsonComplex>,
    pub eta: Vec<JsonComplex>,
}

impl PolarizationJson {
    pub fn encode(p: &Polarization) -> Self {
        Self {
            lambda: p.lambda().into(),
            xi: encode_entries(p.xi().entries()),
            eta: encode_entries(p.eta().entries()),
        }
    }

    pub fn decode(&self, tols: &Tolerances) -> Result<Polarization> {
        Polarization::new(
            Vector::from_entries(decode_entries(&self.xi))?,
            Covector::from_entries(decode_entries(&self.eta))?,
            self.lambda.into(),
            tols,
        )
    }
}

/// A projector with its velocity, for collide inputs and chain sites.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectorSiteJson {
    pub lambda: JsonComplex,
    pub projector: Vec<Vec<JsonComplex>>,
}

impl ProjectorSiteJson {
    pub fn encode(lambda: Complex64, p: &ProjectorState) -> Self {
        Self {
            lambda: lambda.into(),
            projector: encode_matrix(p.matrix()),
        }
    }

    pub fn decode(&self, tols: &Tolerances) -> Result<(Complex64, ProjectorState)> {
        let matrix = decode_matrix(&self.projector)?;
        Ok((self.lambda.into(), ProjectorState::from_matrix(matrix, tols)?))
    }
}

/// A subspace with a real velocity, for Grassmannian collide inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrassmannianSiteJson {
    pub lambda: f64,
    pub subspace: SubspaceJson,
}

/// Input of the `collide` command: two states plus velocities, tagged by
/// family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CollideInput {
    Vector {
        first: PolarizationJson,
        second: PolarizationJson,
    },
    Projector {
        first: ProjectorSiteJson,
        second: ProjectorSiteJson,
    },
    Grassmannian {
        first: GrassmannianSiteJson,
        second: GrassmannianSiteJson,
    },
}

/// Output of the `collide` command: updated states in the input schema plus
/// the refactorization certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollideOutput {
    #[serde(flatten)]
    pub states: CollideInput,
    pub refactorization_residual: f64,
    pub zeta_samples: usize,
    pub seed: u64,
}

/// `{"ambient_dim": n, "sites": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainJson {
    pub ambient_dim: usize,
    pub sites: Vec<ProjectorSiteJson>,
}

impl ChainJson {
    pub fn encode(chain: &Chain) -> Self {
        Self {
            ambient_dim: chain.ambient_dim().unwrap_or(0),
            sites: chain
                .sites()
                .iter()
                .map(|s| ProjectorSiteJson::encode(s.lambda, &s.projector))
                .collect(),
        }
    }

    pub fn decode(&self, tols: &Tolerances) -> Result<Chain> {
        let sites = self
            .sites
            .iter()
            .enumerate()
            .map(|(index, site)| {
                let (lambda, projector) = site.decode(tols).map_err(|e| e.at_site(index))?;
                if projector.ambient_dim() != self.ambient_dim {
                    return Err(Error::DimensionMismatch {
                        context: "chain site ambient",
                        left: self.ambient_dim,
                        right: projector.ambient_dim(),
                    }
                    .at_site(index));
                }
                Ok(ChainSite { projector, lambda })
            })
            .collect::<Result<Vec<_>>>()?;
        Chain::new(sites)
    }
}

/// One record per transfer step in the trajectory JSON-lines output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub invariant_drift: f64,
}

/// Input of the `kdv` command. The amplitude need not be idempotent; the
/// residual scan is exactly how a non-projector amplitude is detected.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KdvInput {
    pub amplitude: Vec<Vec<JsonComplex>>,
    pub lambda: f64,
    #[serde(default)]
    pub grid: Option<KdvGridJson>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KdvGridJson {
    pub x_min: f64,
    pub x_max: f64,
    pub x_samples: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_samples: usize,
}

impl From<KdvGridJson> for ScanGrid {
    fn from(g: KdvGridJson) -> Self {
        ScanGrid {
            x_min: g.x_min,
            x_max: g.x_max,
            x_samples: g.x_samples,
            t_min: g.t_min,
            t_max: g.t_max,
            t_samples: g.t_samples,
        }
    }
}

impl From<ScanGrid> for KdvGridJson {
    fn from(g: ScanGrid) -> Self {
        KdvGridJson {
            x_min: g.x_min,
            x_max: g.x_max,
            x_samples: g.x_samples,
            t_min: g.t_min,
            t_max: g.t_max,
            t_samples: g.t_samples,
        }
    }
}

/// Output of the `kdv` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KdvReport {
    pub lambda: f64,
    pub grid: KdvGridJson,
    pub max_relative_residual: f64,
    pub argmax_x: f64,
    pub argmax_t: f64,
    pub tol: f64,
    pub pass: bool,
}

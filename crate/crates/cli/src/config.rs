use anyhow::{bail, Context, Result};
use qei_core::expr::parse_expr;
use qei_core::func::{DiffusionCoeff, ScalarFunc};
use qei_core::radial::{IntegrateOptions, RadialProblem};
use qei_core::verdict::{ProblemSpec, Relation, Setting};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum FuncConfig {
    Expr { expr: String },
    PowerSign { c: f64, q: f64 },
    Power { c: f64, q: f64 },
    LogPower { c: f64, q: f64 },
    Constant { c: f64 },
}

impl FuncConfig {
    pub fn build(&self) -> Result<ScalarFunc> {
        Ok(match self {
            FuncConfig::Expr { expr } => ScalarFunc::parse(expr)
                .with_context(|| format!("invalid expression {expr:?}"))?,
            FuncConfig::PowerSign { c, q } => ScalarFunc::power_sign(*c, *q),
            FuncConfig::Power { c, q } => ScalarFunc::power(*c, *q),
            FuncConfig::LogPower { c, q } => ScalarFunc::log_power(*c, *q),
            FuncConfig::Constant { c } => ScalarFunc::constant(*c),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum CoeffConfig {
    PLaplacian { p: f64 },
    MeanCurvature,
    LogDiffusion,
    Expr { expr: String },
}

impl CoeffConfig {
    pub fn build(&self) -> Result<DiffusionCoeff> {
        Ok(match self {
            CoeffConfig::PLaplacian { p } => {
                if !(*p > 1.0) {
                    bail!("field \"p\": exponent {p} must exceed 1");
                }
                DiffusionCoeff::p_laplacian(*p)
            }
            CoeffConfig::MeanCurvature => DiffusionCoeff::MeanCurvature,
            CoeffConfig::LogDiffusion => DiffusionCoeff::LogDiffusion,
            CoeffConfig::Expr { expr } => DiffusionCoeff::Expr(
                parse_expr(expr).with_context(|| format!("field \"expr\": {expr:?}"))?,
            ),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GhConfig {
    pub coeff: CoeffConfig,
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: usize,
}

impl GhConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min) {
            bail!("fields \"t_min\"/\"t_max\": need 0 < t_min < t_max");
        }
        if self.per_decade == 0 {
            bail!("field \"per_decade\": must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupConfig {
    pub coeff: CoeffConfig,
    pub dimension: f64,
    pub g: FuncConfig,
    pub a: f64,
    pub r0: Option<f64>,
    pub r_max: Option<f64>,
    pub cap: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

impl BlowupConfig {
    pub fn problem(&self, a: f64) -> Result<RadialProblem> {
        if !(self.dimension > 1.0) {
            bail!("field \"dimension\": {} must exceed 1", self.dimension);
        }
        if !(a > 0.0) {
            bail!("field \"a\": initial value {a} must be positive");
        }
        Ok(RadialProblem {
            coeff: self.coeff.build().context("field \"coeff\"")?,
            dimension: self.dimension,
            g: self.g.build().context("field \"g\"")?,
            initial: a,
        })
    }

    pub fn options(&self) -> IntegrateOptions {
        let mut o = IntegrateOptions::default();
        if let Some(v) = self.r0 {
            o.r0 = v;
        }
        if let Some(v) = self.r_max {
            o.r_max = v;
        }
        if let Some(v) = self.cap {
            o.cap = v;
        }
        if let Some(v) = self.rel_tol {
            o.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            o.abs_tol = v;
        }
        o
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub coeff: CoeffConfig,
    pub dimension: f64,
    pub g: FuncConfig,
    pub a_values: Vec<f64>,
    pub r0: Option<f64>,
    pub r_max: Option<f64>,
    pub cap: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

impl SweepConfig {
    pub fn base(&self) -> BlowupConfig {
        BlowupConfig {
            coeff: self.coeff.clone(),
            dimension: self.dimension,
            g: self.g.clone(),
            a: 1.0,
            r0: self.r0,
            r_max: self.r_max,
            cap: self.cap,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub coeff: CoeffConfig,
    pub dimension: f64,
    pub g1: FuncConfig,
    pub g2: FuncConfig,
    pub epsilon: Option<f64>,
    pub residual_tol: Option<f64>,
    pub random_pairs: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum SettingConfig {
    Euclidean { n: u32 },
    Carnot { q: u32 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum RelationConfig {
    Inequality,
    Equation,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub operator: CoeffConfig,
    pub f: FuncConfig,
    pub setting: SettingConfig,
    pub relation: RelationConfig,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl ProblemConfig {
    pub fn build(&self) -> Result<ProblemSpec> {
        let spec = ProblemSpec {
            operator: self.operator.build().context("field \"operator\"")?,
            f: self.f.build().context("field \"f\"")?,
            setting: match self.setting {
                SettingConfig::Euclidean { n } => Setting::Euclidean { n },
                SettingConfig::Carnot { q } => Setting::Carnot { q },
            },
            relation: match self.relation {
                RelationConfig::Inequality => Relation::Inequality,
                RelationConfig::Equation => Relation::Equation,
            },
        };
        if let Err(e) = spec.validate() {
            bail!("{e}");
        }
        Ok(spec)
    }
}

pub fn load<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

/// Reads a two-column CSV (r, value); a non-numeric first row is
/// treated as a header and skipped.
pub fn load_field_csv(path: &std::path::Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            bail!("{}: line {}: expected 2 columns", path.display(), i + 1);
        }
        match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
            (Ok(r), Ok(v)) => {
                grid.push(r);
                values.push(v);
            }
            _ if i == 0 => continue,
            _ => bail!("{}: line {}: non-numeric data", path.display(), i + 1),
        }
    }
    Ok((grid, values))
}

//! Parallel parameter sweeps over the analysis operations.
//!
//! A sweep evaluates one target on the Cartesian product of one or two
//! linearly spaced axes. Cells are independent; results are gathered by
//! cell index, so the output does not depend on the number of workers.

mod csv;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::bethe_ode::{potential_no_scatter, threshold_correction, threshold_exact};
use crate::error::{Error, Result};
use crate::model::{alpha_from_mu, ModelParams, Sector, SemiclassicalCouplings};
use crate::numeric::linspace;
use crate::observables::{expectation_nc, expectation_z, fidelity, z_trace};
use crate::semiclassical::region_classify;
use crate::spectral::{build_tridiagonal, eigendecompose, tridiag, QuantumState, SpectralDecomposition};

pub use csv::{load, persist, read_csv, write_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// Semiclassical region label on `(α, λ, k)`.
    Region,
    /// Ground-state energy, gap and expectations.
    Ground,
    /// `W_Δ(α)` with the perturbation applied to `α`.
    Fidelity,
    /// Threshold `μ*` from the leading correction and from the exact solve.
    Threshold,
    /// No-scattering Schrödinger potential.
    Potential,
    /// `⟨z(t)⟩` from the all-molecule state.
    Dynamics,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Region,
        Target::Ground,
        Target::Fidelity,
        Target::Threshold,
        Target::Potential,
        Target::Dynamics,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Region => "region",
            Target::Ground => "ground",
            Target::Fidelity => "fidelity",
            Target::Threshold => "threshold",
            Target::Potential => "potential",
            Target::Dynamics => "dynamics",
        }
    }

    /// Accepted parameters with their defaults.
    pub fn parameters(&self) -> &'static [(&'static str, f64)] {
        match self {
            Target::Region => &[("alpha", 0.0), ("lambda", 0.0), ("k", 0.0)],
            Target::Ground => &[
                ("n", 100.0),
                ("j", 0.0),
                ("alpha", 0.0),
                ("lambda", 0.0),
                ("omega", 1.0),
            ],
            Target::Fidelity => &[
                ("n", 100.0),
                ("j", 0.0),
                ("alpha", 0.0),
                ("lambda", 0.0),
                ("omega", 1.0),
                ("delta", 0.01),
            ],
            Target::Threshold => &[("n", 500.0), ("omega", 1.0)],
            Target::Potential => &[("x", 1.0), ("n", 20.0), ("j", 0.0), ("mu", 0.0), ("omega", 1.0)],
            Target::Dynamics => &[
                ("n", 100.0),
                ("j", 0.0),
                ("alpha", 0.0),
                ("lambda", 0.0),
                ("omega", 1.0),
                ("t", 0.0),
            ],
        }
    }

    pub fn outputs(&self) -> &'static [&'static str] {
        match self {
            Target::Region => &["label", "phi0", "phi_pi", "z_boundary", "ambiguous"],
            Target::Ground => &["e0", "gap", "z", "nc"],
            Target::Fidelity => &["w"],
            Target::Threshold => &["mu_star", "alpha_star", "mu_exact", "alpha_exact"],
            Target::Potential => &["v"],
            Target::Dynamics => &["z"],
        }
    }

    fn is_integer(name: &str) -> bool {
        matches!(name, "n" | "j")
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown target '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize) -> Self {
        Axis {
            name: name.to_string(),
            start,
            stop,
            count,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub target: Target,
    pub fixed: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
}

impl SweepSpec {
    pub fn new(target: Target) -> Self {
        SweepSpec {
            target,
            fixed: BTreeMap::new(),
            axes: Vec::new(),
        }
    }

    pub fn fix(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn axis(mut self, name: &str, start: f64, stop: f64, count: usize) -> Self {
        self.axes.push(Axis::new(name, start, stop, count));
        self
    }

    pub fn cell_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn validate(&self) -> Result<()> {
        let known = self.target.parameters();
        let is_known = |n: &str| known.iter().any(|(k, _)| *k == n);
        let bad = |msg: String| Err(Error::InvalidSweep(msg));
        if self.axes.is_empty() || self.axes.len() > 2 {
            return bad(format!("expected one or two axes, got {}", self.axes.len()));
        }
        for (name, &v) in &self.fixed {
            if !is_known(name) {
                return bad(format!("target '{}' has no parameter '{name}'", self.target));
            }
            if !v.is_finite() {
                return bad(format!("parameter '{name}' is not finite"));
            }
            if Target::is_integer(name) && (v < 0.0 || v.fract() != 0.0) {
                return bad(format!("parameter '{name}' must be a non-negative integer, got {v}"));
            }
        }
        for (i, a) in self.axes.iter().enumerate() {
            if !is_known(&a.name) {
                return bad(format!("target '{}' has no parameter '{}'", self.target, a.name));
            }
            if self.fixed.contains_key(&a.name) {
                return bad(format!("parameter '{}' is both fixed and swept", a.name));
            }
            if self.axes[..i].iter().any(|b| b.name == a.name) {
                return bad(format!("axis '{}' appears twice", a.name));
            }
            if a.count == 0 {
                return bad(format!("axis '{}' has no points", a.name));
            }
            if !a.start.is_finite() || !a.stop.is_finite() || a.stop < a.start {
                return bad(format!("axis '{}' needs finite start ≤ stop", a.name));
            }
            if Target::is_integer(&a.name) && a.values().iter().any(|v| *v < 0.0 || v.fract() != 0.0) {
                return bad(format!("axis '{}' must take non-negative integer values", a.name));
            }
        }
        Ok(())
    }

    fn lookup(&self, point: &[f64]) -> impl Fn(&str) -> f64 + '_ {
        let point = point.to_vec();
        move |name: &str| {
            if let Some(i) = self.axes.iter().position(|a| a.name == name) {
                return point[i];
            }
            if let Some(&v) = self.fixed.get(name) {
                return v;
            }
            self.target
                .parameters()
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, d)| *d)
                .expect("parameter names are validated")
        }
    }
}

/// One output field.
#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => a.to_bits() == b.to_bits(),
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Text(a), Value::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            Value::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: Vec<f64>,
    /// Empty when the cell failed.
    pub values: Vec<Value>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub version: String,
    pub outputs: Vec<String>,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn failed_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Column of output `name`, `None` entries for failed cells.
    pub fn column(&self, name: &str) -> Option<Vec<Option<&Value>>> {
        let i = self.outputs.iter().position(|o| o == name)?;
        Some(self.rows.iter().map(|r| r.values.get(i)).collect())
    }
}

/// Error text safe for a CSV field.
fn tag(e: &Error) -> String {
    e.to_string().replace([',', '\n', '\r'], ";")
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidSweep("worker budget must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidSweep(e.to_string()))
}

/// Runs `f` with its parallel work confined to `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(pool(workers)?.install(f))
}

type DecompCache = Mutex<HashMap<[u64; 5], Arc<SpectralDecomposition>>>;

/// Runs `spec` on `workers` threads.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let pool = pool(workers)?;
    let axes: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let points: Vec<Vec<f64>> = match axes.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect(),
        _ => unreachable!("validated"),
    };
    let cache: DecompCache = Mutex::new(HashMap::new());
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|p| match evaluate(spec, p, &cache) {
                Ok(values) => Row {
                    point: p.clone(),
                    values,
                    error: None,
                },
                Err(e) => Row {
                    point: p.clone(),
                    values: Vec::new(),
                    error: Some(tag(&e)),
                },
            })
            .collect()
    });
    Ok(SweepResult {
        spec: spec.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: spec.target.outputs().iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

fn sector_of(get: &impl Fn(&str) -> f64) -> Result<Sector> {
    Sector::new(get("n") as i64, get("j") as i64)
}

fn params_of(get: &impl Fn(&str) -> f64, sector: &Sector, alpha: f64) -> ModelParams {
    ModelParams::from_alpha_lambda(alpha, get("lambda"), sector.n_total(), get("omega"))
}

fn evaluate(spec: &SweepSpec, point: &[f64], cache: &DecompCache) -> Result<Vec<Value>> {
    let get = spec.lookup(point);
    match spec.target {
        Target::Region => {
            let k = get("k");
            if !(0.0..1.0).contains(&k) {
                return Err(Error::Domain(format!("k must lie in [0, 1), got {k}")));
            }
            let r = region_classify(&SemiclassicalCouplings::new(get("lambda"), get("alpha")), k);
            Ok(vec![
                Value::Text(r.label.as_str().to_string()),
                Value::Int(r.phi0 as i64),
                Value::Int(r.phi_pi as i64),
                Value::Int(r.z_boundary as i64),
                Value::Int(r.ambiguous as i64),
            ])
        }
        Target::Ground => {
            let s = sector_of(&get)?;
            let op = build_tridiagonal(&params_of(&get, &s, get("alpha")), &s);
            let (e0, gs) = op.ground_state()?;
            let gap = if op.dim() > 1 {
                tridiag::kth_eigenvalue(&op.diag, &op.offdiag, 1) - e0
            } else {
                f64::INFINITY
            };
            Ok(vec![
                Value::Num(e0),
                Value::Num(gap),
                Value::Num(expectation_z(&gs)),
                Value::Num(expectation_nc(&gs)),
            ])
        }
        Target::Fidelity => {
            let s = sector_of(&get)?;
            let fam = |a: f64| params_of(&get, &s, a);
            Ok(vec![Value::Num(fidelity(&fam, &s, get("delta"), get("alpha"))?)])
        }
        Target::Threshold => {
            let n = get("n") as usize;
            let omega = get("omega");
            if n < 2 || !(omega > 0.0) {
                return Err(Error::Domain("threshold needs N ≥ 2 and Ω > 0".into()));
            }
            let mu_star = threshold_correction(n, omega);
            let mu_exact = threshold_exact(n, 0, omega)?;
            Ok(vec![
                Value::Num(mu_star),
                Value::Num(alpha_from_mu(mu_star, n, omega)),
                Value::Num(mu_exact),
                Value::Num(alpha_from_mu(mu_exact, n, omega)),
            ])
        }
        Target::Potential => {
            let s = sector_of(&get)?;
            let v = potential_no_scatter(get("x"), get("mu"), get("omega"), s.n_total(), s.j_imbalance())?;
            Ok(vec![Value::Num(v)])
        }
        Target::Dynamics => {
            let s = sector_of(&get)?;
            let key = ["n", "j", "alpha", "lambda", "omega"].map(|k| get(k).to_bits());
            let cached = cache.lock().expect("cache lock").get(&key).cloned();
            let decomp = match cached {
                Some(d) => d,
                None => {
                    let d = Arc::new(eigendecompose(&build_tridiagonal(
                        &params_of(&get, &s, get("alpha")),
                        &s,
                    ))?);
                    cache.lock().expect("cache lock").insert(key, d.clone());
                    d
                }
            };
            let init = QuantumState::basis(s, s.m())?;
            let tr = z_trace(&decomp, &init, &[get("t")])?;
            Ok(vec![Value::Num(tr.values[0])])
        }
    }
}

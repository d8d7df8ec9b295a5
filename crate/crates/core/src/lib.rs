//! Phase analysis of the three-mode heteronuclear molecular condensate
//! model: semi-classical fixed points and bifurcation boundaries, exact
//! sector diagonalisation, Bethe ansatz and its one-body Schrödinger image,
//! spectral dynamics and ground-state fidelity.

pub mod bethe_ode;
pub mod error;
pub mod model;
pub mod numeric;
pub mod observables;
pub mod semiclassical;
pub mod spectral;
pub mod sweep;

pub use bethe_ode::{bethe_roots, polynomial_g, BetheRoots, CriticalPointReport, OdeCoefficients, SexticPotential};
pub use error::{Error, Result};
pub use model::{
    abc_coefficients, hopping, semiclassical_couplings, u_diag, AbcCoefficients, ModelParams, Sector,
    SemiclassicalCouplings,
};
pub use observables::{
    evolve, expectation_nc, expectation_z, fidelity_curve, pre_transitions, z_trace, OverlapCurve, PreTransition,
    TimeSeries,
};
pub use semiclassical::{
    boundary_curves, classical_energy, fixed_points, hamilton_rhs, level_curve_grid, region_classify, BoundaryCurve,
    Branch, Character, FixedPoint, PhasePoint, Region, RegionLabel,
};
pub use spectral::{
    build_tridiagonal, char_poly_eval, eigendecompose, ground_state, QuantumState, SpectralDecomposition,
    TridiagonalOperator,
};
pub use sweep::{load, persist, run_sweep, with_workers, Axis, SweepResult, SweepSpec, Target};

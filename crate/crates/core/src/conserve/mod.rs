//! Realizations over (x, t), the Riccati x-part, conserved-density
//! recursions and their numerical validation.

mod density;
mod numeric;
mod realize;

pub use density::{
    density_equations, density_residuals, density_solve_constant, density_solve_symbolic, y_symbol, DensitySeries,
};
pub use numeric::{
    least_squares_slope, residual_scaling_check, solve_density_odes, GridFn, ScalingResult, DEFAULT_TRANSIENT_SPAN,
};
pub use realize::{conservation_pair, riccati_x_part, ConservationPair, Realization1D};

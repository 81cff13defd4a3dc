//! Solvers for the linear, quadratic-shape and Riccati-type equations the classification needs,
//! plus the Fuchs criterion.

mod convolution;
mod fuchs;
mod laurent;
mod linear;
mod riccati;
mod third_der;

pub use convolution::{c_upper_bound, check_convolution_inequality, composition_sum, ConvolutionReport};
pub use fuchs::{fuchs_regular_singular, FuchsProblem};
pub use laurent::Laurent;
pub use linear::{linear_residual, solve_linear_t_ode, solve_scalar, FreeParameter, LinearOdeSolution};
pub use riccati::{riccati_residual, solve_riccati_unique_c, RiccatiSolution};
pub use third_der::{solve_third_der, third_der_lhs, ThirdDerResult, ThirdDerShape, ThirdDerVerdict};

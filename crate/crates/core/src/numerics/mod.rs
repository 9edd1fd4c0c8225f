//! Numerical kernels: quadrature, root finding, error functions and an ODE stepper.

pub mod faddeeva;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use faddeeva::{erf_real, erfc_complex, erfc_real, erfcx, faddeeva};
pub use quadrature::{integrate, integrate_complex, QuadratureResult};
pub use roots::{find_root, golden_section_max, RootResult};

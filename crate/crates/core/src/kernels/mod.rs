//! Heat and Poisson kernels of the Laguerre semigroups, their modified
//! variants, and the vector-valued kernels of the square functions.

mod entry;
mod heat;
mod poisson;
mod time_grid;

pub use entry::{kernel_entry, kernel_entry_on, DerivativeMode, KernelKind};
pub(crate) use heat::layer_depth;
pub use heat::{
    heat_kernel_closed, heat_kernel_ln, heat_kernel_schlafli, heat_kernel_spectral, modified_heat_kernel, q_pm,
};
pub use poisson::{poisson_kernel, subordinate_mode, PoissonVariant, SubordinationGrid};
pub use time_grid::{bnorm, t_of_zeta, zeta_of_t, TimeGrid, TimeMeasure, TimeProfile, ZetaGridSpec};

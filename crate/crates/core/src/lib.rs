//! GF(2) polynomial machinery for the kernel of `U_5 + I` on odd mod-2
//! modular forms of level `Gamma_0(5)`, and a batch harness that checks the
//! structure of that kernel: the characteristic-2 recurrence `C_n`, the
//! semi-linear operator `U`, the kernel bases `g_n`, the `J_k` basis of
//! `N2/N1`, Hecke operators on theta series, and the adapted basis
//! `m_{i,j}`.

pub mod adapted;
pub mod cli;
pub mod error;
pub mod gf2poly;
pub mod linalg;
pub mod modforms;
pub mod nmod;
pub mod recurrence;
pub mod semilinear;

pub use error::{Error, Result};
pub use gf2poly::{Gf2Poly, Gf2Series};

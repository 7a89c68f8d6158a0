//! Exact integer, rational and polynomial arithmetic.

pub mod cyclotomic;
pub mod factor;
pub mod integer;
pub mod modp;
pub mod poly;
pub mod roots;

pub use cyclotomic::min_poly_2cos;
pub use factor::{factor_over_q, Factorization};
pub use integer::{is_squarefree_integer, multiplicative_order};
pub use modp::{factor_mod_p, PrimePoly};
pub use poly::{discriminant, resultant, RationalPoly};
pub use roots::{isolate_real_roots, RootIntervals};

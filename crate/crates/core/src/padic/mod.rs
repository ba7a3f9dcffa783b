mod context;
mod element;
mod ramified;
mod roots;
pub mod linalg;

pub use context::{inv_mod, is_prime, modp, next_prime, PadicContext};
pub use element::{PadicElement, Valuation};
pub use ramified::RamifiedElement;
pub use roots::{cube_roots, cube_roots_of_unity_mod_p, hensel_lift_root, roots_mod_p};

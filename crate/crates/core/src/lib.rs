//! Exact jet computations for plane foliation germs whose reduction is two
//! blow-ups with a regular, transverse strict transform.

pub mod coeff;
pub mod error;
pub mod first_integral;
pub mod forms;
pub mod germs;
pub mod gluing;
pub mod jets;
pub mod linalg;
pub mod normal_form;
pub mod parse;
pub mod transversal;

pub use coeff::Coeff;
pub use error::{Error, Result};
pub use jets::{Jet1, Jet2, Poly, Var, DEFAULT_ORDER};

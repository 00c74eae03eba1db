//! Twisted de Rham cohomology of finite CDGA models: the twisted
//! differential `d + H·`, exponential gauge operators and the Chern-Simons
//! series.

mod algebra;
mod parser;
mod twist;

pub use algebra::{Cdga, Element, Generator, Monomial};
pub use parser::{parse_cdga, parse_element};
pub use twist::{
    cs_series, exp_gauge, sullivan_sphere, twisted_cohomology, verify_cs_homotopy, verify_gauge, CdgaCohomology,
    CsReport, GaugeReport, TwistForm,
};

//! Exact polynomial algebra and the bilocal detection-efficiency certificate.

mod certificate;
mod poly;
mod search;
mod table;

pub use certificate::{
    derived_g, printed_g, verify_bilocal_certificate, CertificateReport, IdentityCheck, PrintedForm, SIGN_PATTERNS,
};
pub use poly::{Monomial, MultiPoly, Var, VAR_COUNT};
pub use search::{search_certificate, Branch, Certificate, CertificateSearch, Witness};
pub use table::{build_model_table, probability_from_signs, CorrelatorTable, Signs};

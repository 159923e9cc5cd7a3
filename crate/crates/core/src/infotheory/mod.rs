//! Plug-in information estimators and the closed-form identities that tie
//! transformed-variable MI to Kendall's tau, Pearson's rho and the AUROC.

mod auroc;
mod closed_form;
mod contingency;
mod estimators;
mod tau;

pub use auroc::{auroc, Auroc};
pub use closed_form::{mi_from_auroc, mi_from_rho, mi_from_tau};
pub use contingency::{ContingencyTable, LogBase};
pub use estimators::{conditional_mi, entropy, interaction_information, joint_entropy, mutual_information};
pub use tau::{kendall_tau, kendall_tau_naive, TauValue};

pub use crate::categorical::make_joint;

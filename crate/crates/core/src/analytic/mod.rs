//! Closed-form QFI and bound expressions, evaluated independently of the
//! numeric engine so the two can be compared.

pub mod errata;
pub mod general_s;
pub mod spin32;
pub mod special;

pub use general_s::{hl, qfi_general_s, qfi_general_s_with, sql, Transcription};
pub use special::{
    crb_special_32, crb_sx_special_32, crb_sy_special_32, crb_sz_special_32, PhiCase, PhiSpecialCase,
};
pub use spin32::{
    crb_general_32, crb_sx_general_32, crb_sy_general_32, crb_sz_general_32, qfi_general_32, qfi_sx_general_32,
    qfi_sy_general_32, qfi_sz_general_32, Spin32Coefficients,
};

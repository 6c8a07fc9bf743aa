//! Decibel and linear/natural-log scale conversions.
//!
//! All internal math runs in linear milliwatts and natural logs of linear
//! milliwatts. The conversions here are the only place the factor
//! `ξ = ln(10)/10` appears.

/// `ξ = ln(10)/10`, the natural-log equivalent of one decibel.
pub const XI: f64 = core::f64::consts::LN_10 / 10.0;

/// dBm to linear milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Linear milliwatts to dBm.
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// A dB quantity to its natural-log equivalent (`x · ln10/10`).
pub fn db_to_nat(db: f64) -> f64 {
    db * XI
}

/// A natural-log quantity to dB (`x · 10/ln10`).
pub fn nat_to_db(nat: f64) -> f64 {
    nat / XI
}

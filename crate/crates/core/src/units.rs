//! Unit conventions.

/// ħc in MeV·fm. The only place MeV and fm meet.
pub const HBAR_C_MEV_FM: f64 = 197.326980;

/// Converts a mass or momentum from MeV to fm⁻¹.
pub fn mev_to_inv_fm(mev: f64) -> f64 {
    mev / HBAR_C_MEV_FM
}

/// Converts fm⁻¹ to MeV.
pub fn inv_fm_to_mev(inv_fm: f64) -> f64 {
    inv_fm * HBAR_C_MEV_FM
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

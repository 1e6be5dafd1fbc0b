use crate::error::{contract, Result};
use crate::kp_model::{WaveEquationKind, WaveEquationSpec};
use crate::solitons::SolitonCyl;

/// KdV equation obeyed by cylindrical perturbations that depend only on
/// `ξ = a r + b z − d c_s φ² t/2` and `τ = t`: drift `a c_s + b² c_s/(2a)`,
/// nonlinearity `aα` and dispersion `a³β`. The reduction closes only for `d = a`.
pub fn kdv_xi_tau_transform(sol: &SolitonCyl, spec: &WaveEquationSpec) -> Result<WaveEquationSpec> {
    if sol.d != sol.a {
        return Err(contract(format!(
            "the moving-frame reduction needs d = a, got d = {} and a = {}",
            sol.d, sol.a
        )));
    }
    Ok(WaveEquationSpec::custom(
        WaveEquationKind::Kdv,
        sol.threshold(spec.cs),
        sol.a * spec.alpha,
        sol.a.powi(3) * spec.beta,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kp_model::build_wave_spec;
    use crate::EosParameters;

    #[test]
    fn normal_incidence_is_identity() {
        let kdv = build_wave_spec(&EosParameters::reference(), WaveEquationKind::Kdv).unwrap();
        let sol = SolitonCyl::new(1.0, 0.0, 0.7).unwrap();
        assert_eq!(kdv_xi_tau_transform(&sol, &kdv).unwrap(), kdv);
    }

    #[test]
    fn requires_d_equal_a() {
        let kdv = build_wave_spec(&EosParameters::reference(), WaveEquationKind::Kdv).unwrap();
        let sol = SolitonCyl::with_d(0.6, 0.8, 0.5, 0.73).unwrap();
        assert!(matches!(
            kdv_xi_tau_transform(&sol, &kdv),
            Err(crate::Error::Contract(_))
        ));
    }
}

//! Exact degeneracies and long-time average for the dual gasket, whose
//! spectrum follows from a decimation recursion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

fn pow(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn ratio(numer: BigInt, denom: BigInt) -> BigRational {
    BigRational::new(numer, denom)
}

/// `(ρ(3), ρ(5))` of the dual gasket at generation `g ≥ 1`:
/// `(3^{g-1} + 3) / (2·3^g)` and `(3^{g-1} - 1) / (2·3^g)`.
pub fn rho_dsg_closed_form(g: u32) -> (BigRational, BigRational) {
    assert!(g >= 1, "generation must be at least 1");
    let prev = pow(3, g - 1);
    let denom: BigInt = pow(3, g) * 2;
    (
        ratio(&prev + 3, denom.clone()),
        ratio(prev - 1, denom),
    )
}

/// Exact `χ̄_lb` of the dual gasket:
/// `3^{-2g} [3^g (1 + 3^g/14) + (10/7) 2^g - 3/2]`.
pub fn chi_lb_dsg_exact(g: u32) -> BigRational {
    assert!(g >= 1, "generation must be at least 1");
    let three_g = BigRational::from_integer(pow(3, g));
    let two_g = BigRational::from_integer(pow(2, g));
    let inner = &three_g * (BigRational::one() + &three_g / BigRational::from_integer(14.into()))
        + ratio(10.into(), 7.into()) * two_g
        - ratio(3.into(), 2.into());
    inner / (&three_g * &three_g)
}

pub fn chi_lb_dsg_closed_form(g: u32) -> f64 {
    to_f64(&chi_lb_dsg_exact(g))
}

pub fn to_f64(value: &BigRational) -> f64 {
    value
        .to_f64()
        .unwrap_or_else(|| value.numer().to_f64().unwrap() / value.denom().to_f64().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn degeneracy_fractions() {
        assert_eq!(rho_dsg_closed_form(2), (r(1, 3), r(1, 9)));
        assert_eq!(rho_dsg_closed_form(4), (r(5, 27), r(13, 81)));
        assert_eq!(rho_dsg_closed_form(8), (r(365, 2187), r(1093, 6561)));
    }

    #[test]
    fn degeneracies_approach_one_sixth() {
        let (a, b) = rho_dsg_closed_form(40);
        assert!((to_f64(&a) - 1.0 / 6.0).abs() < 1e-15);
        assert!((to_f64(&b) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi_lb_dsg_exact(2), r(19, 81));
        assert!((chi_lb_dsg_closed_form(2) - 0.2346).abs() < 5e-5);
        assert!((chi_lb_dsg_closed_form(8) - 0.0716).abs() < 5e-5);
        assert!((chi_lb_dsg_closed_form(40) - 1.0 / 14.0).abs() < 1e-9);
    }
}

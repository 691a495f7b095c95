//! Dynamical degrees of monomial maps, plus an empirical degree-growth
//! estimator for cross-validation.
//!
//! The k-th dynamical degree is the spectral radius of the k-th exterior
//! power of the exponent matrix. Everything stays anchored to exact integer
//! matrices: characteristic polynomials are computed exactly, cyclotomic
//! factors (roots of modulus exactly one) are stripped exactly, and only the
//! residual polynomial goes to a floating-point root finder.

use crate::error::{Error, Result};
use crate::map::MonomialMap;
use crate::poly::{cyclotomic, euler_phi, IntPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

/// Dynamical degree profile of a map: lambda_1 ... lambda_n, the sorted
/// eigenvalue moduli of the exponent matrix, and the tolerance the values
/// were computed to.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    pub lambdas: Vec<f64>,
    pub moduli: Vec<f64>,
    pub tolerance: f64,
}

/// Strip all cyclotomic factors and powers of t; returns the residual
/// polynomial together with flags for unit-modulus and zero roots removed.
fn strip_exact_factors(p: &IntPoly) -> (IntPoly, bool, usize) {
    let mut rest = p.clone();
    let mut had_unit_root = false;
    // Powers of t first.
    let mut zero_roots = 0usize;
    while !rest.is_zero() && rest.coeff(0).is_zero() {
        let shifted = IntPoly::from_coeffs(rest.coeffs()[1..].to_vec());
        rest = shifted;
        zero_roots += 1;
    }
    let deg_cap = rest.degree().unwrap_or(0);
    let mut d = 1u64;
    let d_cap = 2 * (deg_cap as u64) * (deg_cap as u64) + 1;
    while d <= d_cap && rest.degree().unwrap_or(0) > 0 {
        if euler_phi(d) as usize <= rest.degree().unwrap_or(0) {
            let phi_d = cyclotomic(d);
            loop {
                let (q, r) = rest.div_rem_monic(&phi_d);
                if r.is_zero() && !q.is_zero() {
                    rest = q;
                    had_unit_root = true;
                } else {
                    break;
                }
            }
        }
        d += 1;
    }
    (rest, had_unit_root, zero_roots)
}

/// All complex roots of a monic integer polynomial, by Durand-Kerner
/// iteration in double precision.
fn durand_kerner(p: &IntPoly) -> Vec<Complex64> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    let lead = p.leading().to_f64().unwrap_or(1.0);
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(0.0) / lead)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + Complex64::new(*c, 0.0);
        }
        acc
    };
    // Cauchy-style radius bound.
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (deg as f64) + 0.4;
            Complex64::from_polar(radius * 0.7 + 0.1, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for j in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..deg {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            if denom.norm() == 0.0 {
                roots[j] += Complex64::new(1e-6, 1e-6);
                continue;
            }
            let step = eval(roots[j]) / denom;
            roots[j] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * (1.0 + radius) {
            break;
        }
    }
    roots
}

/// Largest root modulus of an integer polynomial, exact for roots of unity.
///
/// Cyclotomic factors are removed exactly; by Kronecker's theorem any monic
/// integer residual has a root strictly outside the unit circle, so the
/// floating-point stage never has to resolve a modulus near 1 from below.
pub fn max_root_modulus(p: &IntPoly) -> f64 {
    let (rest, had_unit_root, zero_roots) = strip_exact_factors(p);
    let mut best = if had_unit_root {
        1.0
    } else if zero_roots > 0 {
        0.0
    } else {
        f64::NEG_INFINITY
    };
    if rest.degree().unwrap_or(0) > 0 {
        // Only the root set matters here, so pass the squarefree part to the
        // iteration; repeated roots slow it down and cost accuracy.
        let squarefree = rest.div_exact(&rest.gcd(&rest.derivative()));
        for z in durand_kerner(&squarefree) {
            best = best.max(z.norm());
        }
    }
    if best == f64::NEG_INFINITY {
        // Constant polynomial with no roots at all.
        return 0.0;
    }
    best
}

/// All root moduli of an integer polynomial, multiplicity included, sorted
/// in descending order. Unit-modulus roots are reported as exactly 1.
pub fn root_moduli_sorted(p: &IntPoly) -> Vec<f64> {
    let deg = p.degree().unwrap_or(0);
    let (rest, _had, zero_roots) = strip_exact_factors(p);
    let mut moduli = Vec::with_capacity(deg);
    for _ in 0..zero_roots {
        moduli.push(0.0);
    }
    let stripped_degree = deg - zero_roots - rest.degree().unwrap_or(0);
    for _ in 0..stripped_degree {
        moduli.push(1.0);
    }
    for z in durand_kerner(&rest) {
        moduli.push(z.norm());
    }
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    moduli
}

/// Dynamical degrees lambda_1 ... lambda_n of a monomial map.
///
/// lambda_k is the spectral radius of the k-th exterior power of the exponent
/// matrix; for a unimodular matrix lambda_n = 1 exactly.
pub fn dynamical_degrees(f: &MonomialMap, tolerance: f64) -> Result<DegreeProfile> {
    if !(tolerance > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    let n = f.dimension();
    let mut lambdas = Vec::with_capacity(n);
    for k in 1..=n {
        let ext = f.matrix().exterior_power(k)?;
        lambdas.push(max_root_modulus(&ext.char_poly()));
    }
    let moduli = root_moduli_sorted(&f.matrix().char_poly());
    Ok(DegreeProfile {
        lambdas,
        moduli,
        tolerance,
    })
}

/// Exact projective degrees of f, f^2, ..., f^L, with the L-th root of the
/// last degree as the growth-rate estimate.
pub fn degree_growth(f: &MonomialMap, length: u64) -> Result<(Vec<BigInt>, f64)> {
    if length < 1 {
        return Err(Error::precondition("iteration count must be at least 1"));
    }
    let mut degrees = Vec::with_capacity(length as usize);
    let mut power = f.clone();
    for _ in 0..length {
        degrees.push(power.projective_degree());
        power = power.compose(f)?;
    }
    let last = degrees.last().unwrap();
    let rate = last
        .to_f64()
        .map(|d| d.powf(1.0 / length as f64))
        .unwrap_or(f64::INFINITY);
    Ok((degrees, rate))
}

//! Exact integer polynomials in one variable.
//!
//! Coefficients are arbitrary-precision integers stored lowest degree first.
//! Provides the arithmetic needed elsewhere in the crate: ring operations,
//! division by monic divisors, primitive gcd, cyclotomic polynomials and a
//! Sturm-based count of distinct real roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Integer polynomial, coefficients lowest degree first.
///
/// The zero polynomial has an empty coefficient vector; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// Build from coefficients (lowest degree first); trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial t^k.
    pub fn x_power(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Quotient and remainder on division by a monic divisor; exact over Z.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![BigInt::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let q = rem[k].clone();
            if !q.is_zero() {
                quo[k - d] = q.clone();
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let idx = k - d + j;
                    rem[idx] = &rem[idx] - &q * b;
                }
            }
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    /// True if `divisor` (monic) divides self exactly.
    pub fn divisible_by_monic(&self, divisor: &Self) -> bool {
        self.div_rem_monic(divisor).1.is_zero()
    }

    /// Exact division by a not-necessarily-monic divisor. Panics when the
    /// division is not exact over Z; callers only use it where exactness is
    /// guaranteed (Bareiss pivots, content removal).
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let d = divisor.degree().unwrap();
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        assert!(rem.len() > d || rem.len() == divisor.coeffs.len());
        let mut quo = vec![BigInt::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let (q, r) = num_integer::Integer::div_rem(&rem[k], &lead);
            assert!(r.is_zero(), "inexact polynomial division");
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let idx = k - d + j;
                    rem[idx] = &rem[idx] - &q * b;
                }
            }
            quo[k - d] = q;
        }
        let rem = Self::from_coeffs(rem);
        assert!(rem.is_zero(), "inexact polynomial division (remainder)");
        Self::from_coeffs(quo)
    }

    /// gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Content-free part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Pseudo-remainder of self by `other`: a scalar multiple lc(other)^k of
    /// the true remainder, together with the number k of scaling steps (its
    /// parity fixes the sign relation to the true remainder).
    fn pseudo_rem_steps(&self, other: &Self) -> (Self, u32) {
        let d = other.degree().unwrap();
        let lead = other.leading();
        let mut rem = self.clone();
        let mut steps = 0;
        while let Some(n) = rem.degree() {
            if n < d {
                break;
            }
            let q = rem.leading();
            let shift = n - d;
            rem = rem.scale(&lead).sub(&other.mul(&Self::x_power(shift)).scale(&q));
            steps += 1;
        }
        (rem, steps)
    }

    fn pseudo_rem(&self, other: &Self) -> Self {
        self.pseudo_rem_steps(other).0
    }

    /// Primitive gcd over Z, positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Number of distinct real roots, by Sturm's theorem (sign variations of
    /// the Sturm chain at -inf and +inf).
    pub fn real_root_count(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // Squarefree part.
        let sf = self.div_exact(&self.gcd(&self.derivative())).primitive_part();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut chain = vec![sf.clone(), sf.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let (prem, steps) = chain[k - 2].pseudo_rem_steps(&chain[k - 1]);
            if prem.is_zero() {
                break;
            }
            // The pseudo-remainder is lc^steps times the true remainder; undo
            // the sign when that factor is negative, and shrink by the
            // (positive) content, which leaves all signs intact.
            let mut next = prem.neg();
            if chain[k - 1].leading().is_negative() && steps % 2 == 1 {
                next = next.neg();
            }
            let c = next.content();
            if c > BigInt::one() {
                next = Self::from_coeffs(next.coeffs.iter().map(|x| x / &c).collect());
            }
            chain.push(next);
        }
        let sign_at_inf = |p: &IntPoly, plus: bool| -> i8 {
            let lc = p.leading();
            let deg = p.degree().unwrap_or(0);
            let mut s = if lc.is_positive() { 1i8 } else { -1i8 };
            if !plus && deg % 2 == 1 {
                s = -s;
            }
            s
        };
        let variations = |plus: bool| -> usize {
            let mut count = 0;
            let mut last: Option<i8> = None;
            for p in &chain {
                if p.is_zero() {
                    continue;
                }
                let s = sign_at_inf(p, plus);
                if let Some(prev) = last {
                    if prev != s {
                        count += 1;
                    }
                }
                last = Some(s);
            }
            count
        };
        variations(false) - variations(true)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if k >= 1 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if k >= 2 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// The d-th cyclotomic polynomial, by recursive exact division of t^d - 1.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut num = IntPoly::x_power(d as usize).sub(&IntPoly::one());
    for e in 1..d {
        if d % e == 0 {
            num = num.div_rem_monic(&cyclotomic(e)).0;
        }
    }
    num
}

/// Euler totient, by trial division.
pub fn euler_phi(mut d: u64) -> u64 {
    let mut result = d;
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            while d % p == 0 {
                d /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if d > 1 {
        result -= result / d;
    }
    result
}

/// Attempt to factor `p` as a product of cyclotomic polynomials of degree at
/// most `max_degree`. Returns the list of (d, multiplicity) on success.
pub fn cyclotomic_factorization(p: &IntPoly, max_degree: usize) -> Option<Vec<(u64, usize)>> {
    let mut rest = p.clone();
    if !rest.is_monic() {
        return None;
    }
    let mut factors = Vec::new();
    let mut d = 1u64;
    // phi(d) >= sqrt(d/2), so phi(d) <= n forces d <= 2n^2 + 1.
    let d_cap = 2 * (max_degree as u64) * (max_degree as u64) + 1;
    while d <= d_cap {
        if euler_phi(d) as usize <= max_degree {
            let phi_d = cyclotomic(d);
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem_monic(&phi_d);
                if r.is_zero() {
                    rest = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                factors.push((d, mult));
            }
            if rest.degree() == Some(0) {
                break;
            }
        }
        d += 1;
    }
    if rest == IntPoly::one() {
        Some(factors)
    } else {
        None
    }
}

//! Complete conjugacy theory for 2x2 unimodular integer matrices.
//!
//! Determinant-one matrices split into three spectral families: complex
//! spectrum (three finite-order classes), double root (the parabolic family
//! `(xy^n, y)`), and real spectrum. Real-spectrum matrices are handled by the
//! reduction algorithm to a reduced matrix `[[p,r],[q,s]]` with s > q > p >= 0
//! and by the LLS period, an even cyclic sequence of positive integers that
//! classifies conjugacy. Every positive decision carries an explicit
//! conjugator, checked by exact multiplication before it is returned.

use crate::error::{Error, Result};
use crate::gln::{self, ConjugacyVerdict, Witness};
use crate::matrix::IntMatrix;
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Even-length cyclic sequence of positive integers attached to a hyperbolic
/// matrix; equality of classes is equality up to cyclic rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LLSPeriod {
    entries: Vec<BigInt>,
}

impl LLSPeriod {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() < 2 || entries.len() % 2 != 0 {
            return Err(Error::InvalidSequence {
                message: format!("length must be even and at least 2, got {}", entries.len()),
            });
        }
        if entries.iter().any(|e| !e.is_positive()) {
            return Err(Error::InvalidSequence {
                message: "all entries must be positive".into(),
            });
        }
        Ok(LLSPeriod { entries })
    }

    pub fn from_u64(entries: &[u64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rotation by `j` positions: (a_{j}, a_{j+1}, ..., a_{j-1}).
    pub fn rotated(&self, j: usize) -> Self {
        let n = self.entries.len();
        let j = j % n;
        let mut entries = Vec::with_capacity(n);
        entries.extend_from_slice(&self.entries[j..]);
        entries.extend_from_slice(&self.entries[..j]);
        LLSPeriod { entries }
    }

    /// Cyclic equality: equal up to rotation by any offset.
    pub fn cyclically_equal(&self, other: &Self) -> bool {
        self.rotation_to(other).is_some()
    }

    /// Smallest rotation offset j with `self.rotated(j) == other`, if any.
    pub fn rotation_to(&self, other: &Self) -> Option<usize> {
        if self.entries.len() != other.entries.len() {
            return None;
        }
        (0..self.entries.len()).find(|&j| self.rotated(j).entries == other.entries)
    }

    /// Smallest d dividing the length with rotation by d fixing the sequence.
    fn minimal_shift(&self) -> usize {
        let n = self.entries.len();
        (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| self.rotated(d).entries == self.entries)
            .unwrap_or(n)
    }

    /// Shortest even-length cyclic generator, itself a valid LLS period.
    pub fn minimal_period(&self) -> Self {
        let mut d = self.minimal_shift();
        if d % 2 == 1 {
            d *= 2;
        }
        LLSPeriod {
            entries: self.entries[..d].to_vec(),
        }
    }
}

/// Finite continued fraction [a_0; a_1 : ... : a_m].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub terms: Vec<BigInt>,
}

impl CFExpansion {
    pub fn new(terms: Vec<BigInt>) -> Self {
        CFExpansion { terms }
    }

    pub fn from_i64(terms: &[i64]) -> Self {
        CFExpansion {
            terms: terms.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }
}

/// Exact value of a finite continued fraction.
pub fn cf_eval(expansion: &CFExpansion) -> Result<BigRational> {
    let mut acc: Option<BigRational> = None;
    for term in expansion.terms.iter().rev() {
        let t = BigRational::from_integer(term.clone());
        acc = Some(match acc {
            None => t,
            Some(tail) => {
                if tail.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                t + tail.recip()
            }
        });
    }
    acc.ok_or(Error::ZeroDenominator)
}

/// Odd-length continued fraction expansion of q/p with positive terms.
///
/// Requires q > p >= 1 and gcd(p, q) = 1. The Euclidean expansion is taken
/// and its parity fixed: an even-length expansion ends in a term a >= 2 and is
/// split into (a-1, 1); a trailing 1 would instead be merged.
pub fn cf_expand_odd(q: &BigInt, p: &BigInt) -> Result<Vec<BigInt>> {
    if !(q > p && p >= &BigInt::one()) {
        return Err(Error::precondition(format!("need q > p >= 1, got q = {q}, p = {p}")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::precondition(format!("q/p must be in lowest terms, got {q}/{p}")));
    }
    let mut terms = Vec::new();
    let (mut num, mut den) = (q.clone(), p.clone());
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        terms.push(a);
        num = den;
        den = r;
    }
    if terms.len() % 2 == 0 {
        let last = terms.pop().unwrap();
        if last > BigInt::one() {
            terms.push(last - BigInt::one());
            terms.push(BigInt::one());
        } else {
            *terms.last_mut().unwrap() += BigInt::one();
        }
    }
    debug_assert!(terms.len() % 2 == 1);
    debug_assert!(terms.iter().all(|t| t.is_positive()));
    Ok(terms)
}

/// Reduced matrix `[[p,r],[q,s]]` (s > q > p >= 0) together with the sign of
/// the original trace and a determinant +1 conjugator:
/// `conjugator * (sign * M) * conjugator^-1 = reduced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub reduced: IntMatrix,
    pub sign: i8,
    pub conjugator: IntMatrix,
}

/// Spectral classification of a 2x2 unimodular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectrumClass {
    /// Complex-conjugate eigenvalues: one of three classes of order 6, 4, 3.
    ComplexSpectrum { representative: IntMatrix, order: u64 },
    /// Double eigenvalue +1 or -1; `n` indexes the class of (xy^n, y) up to sign.
    DoubleRoot { root_sign: i8, n: BigInt },
    /// Two distinct real eigenvalues, classified by sign and LLS period.
    RealSpectrum { eig_sign: i8, lls: LLSPeriod },
    /// Determinant -1; handled by the generic pipeline.
    DetMinusOne { char_poly: IntPoly },
}

fn mat2(p: i64, r: i64, q: i64, s: i64) -> IntMatrix {
    IntMatrix::from_rows(&[vec![p, r], vec![q, s]]).unwrap()
}

fn entries2(m: &IntMatrix) -> (BigInt, BigInt, BigInt, BigInt) {
    (
        m.get(0, 0).clone(),
        m.get(0, 1).clone(),
        m.get(1, 0).clone(),
        m.get(1, 1).clone(),
    )
}

fn require_2x2(m: &IntMatrix) -> Result<()> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: 2,
        });
    }
    Ok(())
}

/// [[1,0],[a,1]]
fn lower(a: &BigInt) -> IntMatrix {
    IntMatrix::from_bigint_rows(vec![
        vec![BigInt::one(), BigInt::zero()],
        vec![a.clone(), BigInt::one()],
    ])
    .unwrap()
}

/// [[1,a],[0,1]]
fn upper(a: &BigInt) -> IntMatrix {
    IntMatrix::from_bigint_rows(vec![
        vec![BigInt::one(), a.clone()],
        vec![BigInt::zero(), BigInt::one()],
    ])
    .unwrap()
}

fn swap_perm() -> IntMatrix {
    mat2(0, 1, 1, 0)
}

fn twist() -> IntMatrix {
    mat2(1, 0, 0, -1)
}

fn conjugated(c: &IntMatrix, m: &IntMatrix) -> IntMatrix {
    c.mul(m)
        .unwrap()
        .mul(&c.inverse_unimodular().unwrap())
        .unwrap()
}

/// Spectral trichotomy for a 2x2 unimodular matrix.
pub fn classify(m: &IntMatrix) -> Result<SpectrumClass> {
    require_2x2(m)?;
    let det = m.det();
    if det == BigInt::from(-1) {
        return Ok(SpectrumClass::DetMinusOne {
            char_poly: m.char_poly(),
        });
    }
    if !det.is_one() {
        return Err(Error::NotUnimodular { det });
    }
    let tr = m.trace();
    let disc = &tr * &tr - BigInt::from(4);
    if disc.is_negative() {
        let (representative, order) = match i64::try_from(&tr).unwrap() {
            1 => (mat2(1, 1, -1, 0), 6),
            0 => (mat2(0, 1, -1, 0), 4),
            -1 => (mat2(0, 1, -1, -1), 3),
            _ => unreachable!("complex spectrum forces |trace| <= 1"),
        };
        return Ok(SpectrumClass::ComplexSpectrum { representative, order });
    }
    if disc.is_zero() {
        let root_sign: i8 = if tr.is_positive() { 1 } else { -1 };
        let shift = IntMatrix::identity(2).scale(&BigInt::from(root_sign));
        let e = m.sub(&shift).unwrap();
        let mut g = BigInt::zero();
        for i in 0..2 {
            for j in 0..2 {
                g = g.gcd(e.get(i, j));
            }
        }
        return Ok(SpectrumClass::DoubleRoot { root_sign, n: g });
    }
    let eig_sign: i8 = if tr.is_positive() { 1 } else { -1 };
    Ok(SpectrumClass::RealSpectrum {
        eig_sign,
        lls: lls_period(m)?,
    })
}

fn max_bits(m: &IntMatrix) -> u64 {
    let mut bits = 1;
    for row in m.rows() {
        for e in row {
            bits = bits.max(e.bits());
        }
    }
    bits
}

fn check_real_spectrum_det_one(m: &IntMatrix) -> Result<()> {
    require_2x2(m)?;
    let det = m.det();
    if !det.is_one() {
        return Err(Error::precondition(format!(
            "reduction needs determinant 1, got {det}"
        )));
    }
    let tr = m.trace();
    let disc = &tr * &tr - BigInt::from(4);
    if disc.is_negative() {
        return Err(Error::precondition("complex spectrum has no reduced form"));
    }
    if disc.is_zero() {
        return Err(Error::precondition(
            "double-root matrices have no reduced form (characteristic polynomial is reducible)",
        ));
    }
    Ok(())
}

fn is_reduced(m: &IntMatrix) -> bool {
    let (p, _r, q, s) = entries2(m);
    s > q && q > p && !p.is_negative()
}

/// Reduction of a hyperbolic determinant-one matrix to a reduced matrix,
/// with a verified determinant +1 conjugator.
///
/// The sign output is the sign of the input trace; the algorithm runs on
/// sign * M, whose eigenvalues are positive. Conjugation steps that have
/// determinant -1 can leave the accumulated conjugator outside SL(2,Z); in
/// that case the output is rotated one step along its LLS period, which
/// composes an explicit determinant -1 conjugator on top and lands back in
/// SL(2,Z).
pub fn reduce(m: &IntMatrix) -> Result<ReducedForm> {
    check_real_spectrum_det_one(m)?;
    let sign: i8 = if m.trace().is_negative() { -1 } else { 1 };
    let base = if sign < 0 { m.neg() } else { m.clone() };

    let mut a = base.clone();
    let mut w = IntMatrix::identity(2);
    // s_flip tracks multiplications by -Id: a = s_flip * w * base * w^-1.
    let mut s_flip: i8 = 1;
    let cap = 64 * max_bits(m) + 256;
    let mut iterations = 0u64;

    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::IterationCap {
                context: "reduction of a hyperbolic matrix",
            });
        }

        // Step 1: make the lower-left entry nonnegative.
        if a.get(1, 0).is_negative() {
            a = a.neg();
            s_flip = -s_flip;
        }
        let (p, _r, q, _s) = entries2(&a);
        debug_assert!(q.is_positive(), "q = 0 would make the matrix triangular");

        // Step 2: shift p into [0, q).
        let shift = -p.div_floor(&q);
        if !shift.is_zero() {
            let t = upper(&shift);
            a = conjugated(&t, &a);
            w = t.mul(&w).unwrap();
        }

        let (p, _r, q, s) = entries2(&a);
        debug_assert!(!p.is_negative() && p < q);

        if q.is_one() {
            // Step 3.1: the matrix is [[0,-1],[1,s]]. A negative s means the
            // walk is in a negative-trace phase; conjugating by diag(1,-1)
            // and negating lands on the reduced p = 0 form.
            debug_assert!(p.is_zero());
            if s.is_negative() {
                let d = twist();
                a = conjugated(&d, &a).neg();
                w = d.mul(&w).unwrap();
                s_flip = -s_flip;
            }
            break;
        }

        if s > q {
            // Step 3.2.1: reduced.
            break;
        }

        if s < -&q {
            // Step 3.2.2: conjugate by [[-1,1],[0,1]] and negate.
            let v = mat2(-1, 1, 0, 1);
            a = conjugated(&v, &a).neg();
            w = v.mul(&w).unwrap();
            s_flip = -s_flip;
            let (_, _, q2, s2) = entries2(&a);
            debug_assert!(s2.is_positive());
            if s2 > q2 {
                break;
            }
        }

        // Step 3.2.3: |s| < q; swap to [[s,q],[r,p]] and start over.
        let j = mat2(0, -1, -1, 0);
        a = conjugated(&j, &a);
        w = j.mul(&w).unwrap();
    }

    assert_eq!(s_flip, 1, "a reduced output forces a positive-trace phase");
    assert!(is_reduced(&a), "stopping states are reduced");
    debug_assert_eq!(conjugated(&w, &base), a);

    if w.det() == BigInt::from(-1) {
        let seq = lls_of_reduced(&a)?;
        debug_assert_eq!(realize(&seq), a);
        let (x, rotated_seq) = rot1_conjugator(&seq);
        a = realize(&rotated_seq);
        w = x.mul(&w).unwrap();
    }

    assert!(w.det().is_one(), "conjugator must land in SL(2,Z)");
    assert_eq!(conjugated(&w, &base), a, "certificate equation must hold exactly");
    Ok(ReducedForm {
        reduced: a,
        sign,
        conjugator: w,
    })
}

/// LLS period read off a reduced matrix.
fn lls_of_reduced(m: &IntMatrix) -> Result<LLSPeriod> {
    let (p, _r, q, s) = entries2(m);
    if p.is_zero() {
        // [[0,-1],[1,lambda+2]] has period (1, lambda).
        let lambda = s - BigInt::from(2);
        return LLSPeriod::new(vec![BigInt::one(), lambda]);
    }
    let mut terms = cf_expand_odd(&q, &p)?;
    let lambda = (s - BigInt::one()).div_floor(&q);
    terms.push(lambda);
    LLSPeriod::new(terms)
}

/// LLS period of a hyperbolic determinant-one matrix (reduce, then read off).
pub fn lls_period(m: &IntMatrix) -> Result<LLSPeriod> {
    let reduced = reduce(m)?;
    lls_of_reduced(&reduced.reduced)
}

/// The reduced matrix realizing a given LLS period.
///
/// (1, lambda) maps to [[0,-1],[1,lambda+2]]. Otherwise the leading odd-length
/// block fixes q/p by continued fraction evaluation, the last entry is
/// lambda, and s is the unique solution of p*s = 1 (mod q) in the window
/// [lambda*q + 1, (lambda+1)*q].
pub fn realize(seq: &LLSPeriod) -> IntMatrix {
    let entries = seq.entries();
    let lambda = entries.last().unwrap().clone();
    if entries.len() == 2 && entries[0].is_one() {
        return IntMatrix::from_bigint_rows(vec![
            vec![BigInt::zero(), BigInt::from(-1)],
            vec![BigInt::one(), lambda + BigInt::from(2)],
        ])
        .unwrap();
    }
    let cf = CFExpansion::new(entries[..entries.len() - 1].to_vec());
    let value = cf_eval(&cf).expect("positive terms cannot hit a zero denominator");
    let q = value.numer().clone();
    let p = value.denom().clone();
    debug_assert!(q > p && p.is_positive());
    let egcd = p.extended_gcd(&q);
    debug_assert!(egcd.gcd.is_one());
    let s0 = egcd.x.mod_floor(&q);
    debug_assert!(s0.is_positive(), "p inverse mod q is nonzero for q > 1");
    let s = &lambda * &q + s0;
    let r = (&p * &s - BigInt::one()).div_exact_ref(&q);
    IntMatrix::from_bigint_rows(vec![vec![p, r], vec![q, s]]).unwrap()
}

trait DivExactRef {
    fn div_exact_ref(&self, d: &BigInt) -> BigInt;
}

impl DivExactRef for BigInt {
    fn div_exact_ref(&self, d: &BigInt) -> BigInt {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }
}

/// Conjugator from the product form to the reduced realization: they differ
/// only for the length-2 periods (1, lambda), where a single shear fixes it.
fn product_patch(seq: &LLSPeriod) -> IntMatrix {
    if seq.len() == 2 && seq.entries()[0].is_one() {
        mat2(1, -1, 0, 1)
    } else {
        IntMatrix::identity(2)
    }
}

/// Determinant -1 conjugator taking realize(seq) to realize(seq rotated by 1).
///
/// Built from the product form: rotating the period by one position conjugates
/// the product by swap * L^{-a_1}. The result is verified exactly.
fn rot1_conjugator(seq: &LLSPeriod) -> (IntMatrix, LLSPeriod) {
    let rotated = seq.rotated(1);
    let a1 = &seq.entries()[0];
    let e_from = product_patch(seq);
    let e_to = product_patch(&rotated);
    let x = e_to
        .mul(&swap_perm())
        .unwrap()
        .mul(&lower(&-a1))
        .unwrap()
        .mul(&e_from.inverse_unimodular().unwrap())
        .unwrap();
    let from = realize(seq);
    let to = realize(&rotated);
    assert_eq!(
        x.mul(&from).unwrap(),
        to.mul(&x).unwrap(),
        "rotation conjugator must satisfy X * R = R' * X"
    );
    debug_assert_eq!(x.det(), BigInt::from(-1));
    (x, rotated)
}

/// All reduced matrices in the conjugacy class: realizations of the distinct
/// rotations of the period, one per element of the minimal period.
pub fn enumerate_reduced(m: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let seq = lls_period(m)?;
    let count = seq.minimal_period().len();
    Ok((0..count).map(|j| realize(&seq.rotated(j))).collect())
}

/// A column basis [v | Mv] with |det| = 1, putting M in companion form.
/// Exists for finite-order M because det[v, Mv] is a definite quadratic form
/// of discriminant -3 or -4, which represents 1.
fn cyclic_basis(m: &IntMatrix) -> Result<IntMatrix> {
    for radius in 1..=64i64 {
        for x in -radius..=radius {
            for y in -radius..=radius {
                if x.abs().max(y.abs()) != radius {
                    continue;
                }
                let v0 = BigInt::from(x);
                let v1 = BigInt::from(y);
                let w0 = m.get(0, 0) * &v0 + m.get(0, 1) * &v1;
                let w1 = m.get(1, 0) * &v0 + m.get(1, 1) * &v1;
                let c = IntMatrix::from_bigint_rows(vec![vec![v0, w0], vec![v1, w1]]).unwrap();
                if c.det().abs().is_one() {
                    return Ok(c);
                }
            }
        }
    }
    Err(Error::IterationCap {
        context: "cyclic basis search for a finite-order matrix",
    })
}

/// Basis putting a parabolic matrix M = eps(I) + n*E0 into the normal form
/// [[eps, n*eps],[0, eps]].
fn parabolic_basis(m: &IntMatrix, root_sign: i8, n: &BigInt) -> IntMatrix {
    if n.is_zero() {
        return IntMatrix::identity(2);
    }
    let shift = IntMatrix::identity(2).scale(&BigInt::from(root_sign));
    let e = m.sub(&shift).unwrap();
    let e0 = IntMatrix::from_bigint_rows(
        e.rows()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.div_exact_ref(n)).collect())
            .collect(),
    )
    .unwrap();
    // e0 = u * w^T with u, w primitive integer vectors and w^T u = 0.
    let col = if !e0.get(0, 0).is_zero() || !e0.get(1, 0).is_zero() {
        (e0.get(0, 0).clone(), e0.get(1, 0).clone())
    } else {
        (e0.get(0, 1).clone(), e0.get(1, 1).clone())
    };
    let g = col.0.gcd(&col.1);
    let u = (col.0.div_exact_ref(&g), col.1.div_exact_ref(&g));
    let pick = if !u.0.is_zero() { 0 } else { 1 };
    let u_pick = if pick == 0 { &u.0 } else { &u.1 };
    let w = (
        e0.get(pick, 0).div_exact_ref(u_pick),
        e0.get(pick, 1).div_exact_ref(u_pick),
    );
    debug_assert!((&w.0 * &u.0 + &w.1 * &u.1).is_zero());
    let egcd = w.0.extended_gcd(&w.1);
    debug_assert!(egcd.gcd.is_one());
    let eps = BigInt::from(root_sign);
    let c2 = (&egcd.x * &eps, &egcd.y * &eps);
    let c = IntMatrix::from_bigint_rows(vec![vec![u.0, c2.0], vec![u.1, c2.1]]).unwrap();
    debug_assert!(c.det().abs().is_one());
    c
}

/// Certificate between two real-spectrum matrices whose LLS periods differ by
/// a rotation, composed from the reduction conjugators and one-step rotation
/// conjugators.
fn real_spectrum_certificate(m: &IntMatrix, n: &IntMatrix) -> Result<Option<IntMatrix>> {
    let rm = reduce(m)?;
    let rn = reduce(n)?;
    let sm = lls_of_reduced(&rm.reduced)?;
    let sn = lls_of_reduced(&rn.reduced)?;
    let Some(offset) = sm.rotation_to(&sn) else {
        return Ok(None);
    };
    let mut bridge = IntMatrix::identity(2);
    let mut seq = sm;
    for _ in 0..offset {
        let (x, next) = rot1_conjugator(&seq);
        bridge = x.mul(&bridge).unwrap();
        seq = next;
    }
    debug_assert_eq!(conjugated(&bridge, &rm.reduced), rn.reduced);
    let cert = rn
        .conjugator
        .inverse_unimodular()
        .unwrap()
        .mul(&bridge)
        .unwrap()
        .mul(&rm.conjugator)
        .unwrap();
    Ok(Some(cert))
}

fn lex_compare(m: &IntMatrix, n: &IntMatrix) -> std::cmp::Ordering {
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            match m.get(i, j).cmp(n.get(i, j)) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// GL(2,Z)-conjugacy decision for unimodular 2x2 matrices, with certificates.
///
/// Determinant-one pairs are decided completely through the spectral
/// classification; determinant -1 pairs go through the generic filter plus
/// bounded-search pipeline and may come back Undecided.
pub fn conjugate_2x2(m: &IntMatrix, n: &IntMatrix) -> Result<ConjugacyVerdict> {
    require_2x2(m)?;
    require_2x2(n)?;
    for x in [m, n] {
        let d = x.det();
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular { det: d });
        }
    }
    // Canonical orientation, so that swapping the arguments yields the same
    // verdict class and mutually inverse certificates.
    if lex_compare(m, n) == std::cmp::Ordering::Greater {
        return Ok(match conjugate_2x2(n, m)? {
            ConjugacyVerdict::Conjugate { certificate } => ConjugacyVerdict::Conjugate {
                certificate: certificate.inverse_unimodular().unwrap(),
            },
            ConjugacyVerdict::NotConjugate { witness } => ConjugacyVerdict::NotConjugate {
                witness: witness.mirrored(),
            },
            undecided => undecided,
        });
    }

    let (dm, dn) = (m.det(), n.det());
    if dm != dn {
        return Ok(ConjugacyVerdict::NotConjugate {
            witness: Witness::Determinant { left: dm, right: dn },
        });
    }
    if dm == BigInt::from(-1) {
        // No reduction theory covers determinant -1; use the generic route.
        return gln::decide_by_filters_and_search(m, n, gln::DEFAULT_SEARCH_BOUND);
    }

    let cm = classify(m)?;
    let cn = classify(n)?;
    let verdict = match (&cm, &cn) {
        (
            SpectrumClass::ComplexSpectrum { representative: rm, order: om },
            SpectrumClass::ComplexSpectrum { representative: rn, order: on },
        ) => {
            if rm == rn {
                let bm = cyclic_basis(m)?;
                let bn = cyclic_basis(n)?;
                let certificate = bn.mul(&bm.inverse_unimodular().unwrap()).unwrap();
                ConjugacyVerdict::Conjugate { certificate }
            } else {
                ConjugacyVerdict::NotConjugate {
                    witness: Witness::SpectrumClass {
                        left: format!("complex spectrum of order {om}"),
                        right: format!("complex spectrum of order {on}"),
                    },
                }
            }
        }
        (
            SpectrumClass::DoubleRoot { root_sign: em, n: nm },
            SpectrumClass::DoubleRoot { root_sign: en, n: nn },
        ) => {
            if em == en && nm == nn {
                let bm = parabolic_basis(m, *em, nm);
                let bn = parabolic_basis(n, *en, nn);
                let certificate = bn.mul(&bm.inverse_unimodular().unwrap()).unwrap();
                ConjugacyVerdict::Conjugate { certificate }
            } else {
                ConjugacyVerdict::NotConjugate {
                    witness: Witness::SpectrumClass {
                        left: format!("double root {em} with index {nm}"),
                        right: format!("double root {en} with index {nn}"),
                    },
                }
            }
        }
        (
            SpectrumClass::RealSpectrum { eig_sign: em, lls: lm },
            SpectrumClass::RealSpectrum { eig_sign: en, lls: ln },
        ) => {
            let twisted = conjugated(&twist(), m);
            let lls_twisted = lls_period(&twisted)?;
            if em != en {
                ConjugacyVerdict::NotConjugate {
                    witness: Witness::SpectrumClass {
                        left: format!("real spectrum with eigenvalue sign {em}"),
                        right: format!("real spectrum with eigenvalue sign {en}"),
                    },
                }
            } else if let Some(certificate) = real_spectrum_certificate(m, n)? {
                ConjugacyVerdict::Conjugate { certificate }
            } else if lls_twisted.cyclically_equal(ln) {
                // The twisted matrix lands in the class of n; compose with the twist.
                let inner = real_spectrum_certificate(&twisted, n)?
                    .expect("cyclically equal periods admit a rotation certificate");
                let certificate = inner.mul(&twist()).unwrap();
                ConjugacyVerdict::Conjugate { certificate }
            } else {
                ConjugacyVerdict::NotConjugate {
                    witness: Witness::LlsPeriods {
                        left: lm.entries().to_vec(),
                        right: ln.entries().to_vec(),
                        twisted_left: lls_twisted.entries().to_vec(),
                    },
                }
            }
        }
        _ => ConjugacyVerdict::NotConjugate {
            witness: Witness::SpectrumClass {
                left: class_name(&cm),
                right: class_name(&cn),
            },
        },
    };
    if let ConjugacyVerdict::Conjugate { certificate } = &verdict {
        assert!(
            gln::verify_certificate(m, n, certificate),
            "emitted certificate must verify exactly"
        );
    }
    Ok(verdict)
}

fn class_name(c: &SpectrumClass) -> String {
    match c {
        SpectrumClass::ComplexSpectrum { order, .. } => format!("complex spectrum of order {order}"),
        SpectrumClass::DoubleRoot { root_sign, n } => format!("double root {root_sign} with index {n}"),
        SpectrumClass::RealSpectrum { eig_sign, lls } => format!(
            "real spectrum with eigenvalue sign {eig_sign} and LLS period {:?}",
            lls.entries()
        ),
        SpectrumClass::DetMinusOne { char_poly } => format!("determinant -1 ({char_poly})"),
    }
}

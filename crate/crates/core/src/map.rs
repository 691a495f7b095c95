//! The dictionary between monomial birational maps and integer matrices.
//!
//! A map is stored as its exponent matrix: row i holds the exponent vector of
//! coordinate i, so composition of maps is matrix multiplication. Expressions
//! like `x*y, 1/x` are parsed against a fixed grammar and printed back in a
//! canonical form.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poly::cyclotomic_factorization;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// A monomial birational map of projective n-space, encoded by its exponent
/// matrix in GL(n,Z). Row i is the exponent vector of coordinate i, so
/// composing maps multiplies matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    matrix: IntMatrix,
}

/// Order of a map under composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

impl MonomialMap {
    /// Wrap an exponent matrix. Requires dimension >= 2 and |det| = 1,
    /// otherwise the associated map is not birational.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::InvalidDimension {
                message: "monomial maps need dimension at least 2".into(),
            });
        }
        if !matrix.is_unimodular() {
            return Err(Error::NotUnimodular { det: matrix.det() });
        }
        Ok(MonomialMap { matrix })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }

    /// Composition f . g, i.e. the map with matrix `matrix(f) * matrix(g)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(MonomialMap {
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn inverse(&self) -> Self {
        MonomialMap {
            matrix: self.matrix.inverse_unimodular().expect("unimodular by invariant"),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        MonomialMap {
            matrix: self.matrix.pow(e),
        }
    }

    /// Least k >= 1 with the k-th power equal to the identity, or Infinite.
    ///
    /// The characteristic polynomial must factor into cyclotomics for finite
    /// order; when it does, the lcm B of the cyclotomic indices is the only
    /// possible order, so one exact power computation settles it.
    pub fn order(&self) -> Order {
        let n = self.dimension();
        let p = self.matrix.char_poly();
        let Some(factors) = cyclotomic_factorization(&p, n) else {
            return Order::Infinite;
        };
        let bound = factors.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d));
        if self.matrix.pow(bound).is_identity() {
            Order::Finite(bound)
        } else {
            Order::Infinite
        }
    }

    /// Degree of the map as a rational self-map of projective space.
    ///
    /// Homogenize every coordinate: coordinate i gets the exponent vector
    /// (-sum_j m_ij, m_i1, ..., m_in) and the extra coordinate gets 0; clear
    /// the common monomial factor by subtracting the componentwise minimum.
    /// All cleared vectors share one coordinate sum, which is the degree.
    pub fn projective_degree(&self) -> BigInt {
        let n = self.dimension();
        let mut vectors: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        vectors.push(vec![BigInt::zero(); n + 1]);
        for i in 0..n {
            let mut v = Vec::with_capacity(n + 1);
            let row_sum: BigInt = (0..n).map(|j| self.matrix.get(i, j)).sum();
            v.push(-row_sum);
            for j in 0..n {
                v.push(self.matrix.get(i, j).clone());
            }
            vectors.push(v);
        }
        let mut degree = BigInt::zero();
        for j in 0..=n {
            let min = vectors.iter().map(|v| &v[j]).min().unwrap();
            degree -= min;
        }
        degree
    }
}

const NAMED_VARS: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarStyle {
    Named,
    Indexed,
}

#[derive(Debug, Clone)]
struct Term {
    var: String,
    var_pos: usize,
    exponent: BigInt,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        self.skip_ws();
        let b = self.bytes.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.bump() {
            Some(c) if c == b => Ok(()),
            Some(c) => Err(self.err(format!("expected '{}', found '{}'", b as char, c as char))),
            None => Err(self.err(format!("expected '{}', found end of input", b as char))),
        }
    }

    fn parse_digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string())
    }

    /// var := "x"|"y"|"z"|"w" | "x" digits
    fn parse_var(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.err("expected variable"));
        };
        if !matches!(c, b'x' | b'y' | b'z' | b'w') {
            return Err(self.err(format!("expected variable, found '{}'", c as char)));
        }
        self.pos += 1;
        if c == b'x' && self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            let digits = self.parse_digits()?;
            let idx: usize = digits.parse().map_err(|_| self.err("variable index too large"))?;
            if idx == 0 {
                self.pos = start;
                return Err(self.err("variable indices start at 1"));
            }
            return Ok(Term {
                var: format!("x{idx}"),
                var_pos: start,
                exponent: BigInt::from(1),
            });
        }
        Ok(Term {
            var: (c as char).to_string(),
            var_pos: start,
            exponent: BigInt::from(1),
        })
    }

    /// term := var ("^" int)?
    fn parse_term(&mut self) -> Result<Term> {
        let mut term = self.parse_var()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let negative = if self.peek() == Some(b'-') {
                self.bump();
                true
            } else {
                false
            };
            let at = self.pos;
            let digits = self.parse_digits()?;
            let mut e: BigInt = digits.parse().unwrap();
            if e.is_zero() {
                return Err(Error::Syntax {
                    position: at,
                    message: "exponent must be nonzero".into(),
                });
            }
            if negative {
                e = -e;
            }
            term.exponent = e;
        }
        Ok(term)
    }

    /// coord := term ("*" term)* | "1/" "(" coord ")" | "1/" term
    fn parse_coord(&mut self) -> Result<Vec<Term>> {
        if self.peek() == Some(b'1') {
            self.bump();
            self.expect(b'/')?;
            let inner = if self.peek() == Some(b'(') {
                self.bump();
                let coord = self.parse_coord()?;
                self.expect(b')')?;
                coord
            } else {
                vec![self.parse_term()?]
            };
            return Ok(inner
                .into_iter()
                .map(|mut t| {
                    t.exponent = -t.exponent;
                    t
                })
                .collect());
        }
        let mut terms = vec![self.parse_term()?];
        while self.peek() == Some(b'*') {
            self.bump();
            terms.push(self.parse_term()?);
        }
        Ok(terms)
    }

    /// map := coord ("," coord)+
    fn parse_map(&mut self) -> Result<Vec<Vec<Term>>> {
        let mut coords = vec![self.parse_coord()?];
        while self.peek() == Some(b',') {
            self.bump();
            coords.push(self.parse_coord()?);
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        if coords.len() < 2 {
            return Err(self.err("a map needs at least two coordinates"));
        }
        Ok(coords)
    }
}

/// Parse a map expression into its exponent matrix.
///
/// Rejects non-unimodular exponent matrices and variables inconsistent with
/// the coordinate count.
pub fn parse_map(text: &str) -> Result<MonomialMap> {
    let coords = Parser::new(text).parse_map()?;
    let n = coords.len();

    // Determine the variable style and resolve indices.
    let mut style: Option<VarStyle> = None;
    let mut resolve = |t: &Term| -> Result<usize> {
        let s = if t.var.len() > 1 {
            VarStyle::Indexed
        } else {
            VarStyle::Named
        };
        match style {
            None => style = Some(s),
            Some(prev) if prev != s => {
                return Err(Error::InconsistentVariables {
                    message: format!(
                        "cannot mix named and indexed variables ('{}' at byte {})",
                        t.var, t.var_pos
                    ),
                })
            }
            _ => {}
        }
        let idx = match s {
            VarStyle::Named => NAMED_VARS.iter().position(|v| *v == t.var).unwrap(),
            VarStyle::Indexed => t.var[1..].parse::<usize>().unwrap() - 1,
        };
        if idx >= n {
            return Err(Error::InconsistentVariables {
                message: format!(
                    "variable '{}' at byte {} exceeds the {} coordinates of the map",
                    t.var, t.var_pos, n
                ),
            });
        }
        Ok(idx)
    };

    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for (i, coord) in coords.iter().enumerate() {
        for t in coord {
            let j = resolve(t)?;
            rows[i][j] += &t.exponent;
        }
    }
    if style == Some(VarStyle::Named) && n > 4 {
        return Err(Error::InconsistentVariables {
            message: "named variables x,y,z,w only cover up to 4 coordinates".into(),
        });
    }
    let matrix = IntMatrix::from_bigint_rows(rows)?;
    MonomialMap::new(matrix)
}

fn var_name(n: usize, j: usize) -> String {
    if n <= 4 {
        NAMED_VARS[j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

/// Canonical text for a map, the inverse of `parse_map` on its image.
///
/// Coordinates with no negative exponent print as a `*`-product; all-negative
/// coordinates print in `1/...` form; mixed coordinates keep negative
/// exponents inline (`x*y^-1`).
pub fn print_map(f: &MonomialMap) -> String {
    let n = f.dimension();
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        let exps: Vec<BigInt> = (0..n).map(|j| f.matrix().get(i, j).clone()).collect();
        let any_pos = exps.iter().any(|e| e.is_positive());
        let any_neg = exps.iter().any(|e| e.is_negative());
        let product = |signs_flipped: bool| -> String {
            let mut parts = Vec::new();
            for (j, e) in exps.iter().enumerate() {
                let e = if signs_flipped { -e } else { e.clone() };
                if e.is_zero() || (signs_flipped && e.is_negative()) {
                    continue;
                }
                if signs_flipped && !e.is_positive() {
                    continue;
                }
                let var = var_name(n, j);
                if e == BigInt::from(1) {
                    parts.push(var);
                } else {
                    parts.push(format!("{var}^{e}"));
                }
            }
            parts.join("*")
        };
        let text = if any_neg && !any_pos {
            let inner = product(true);
            let single_var = exps.iter().filter(|e| e.is_negative()).count() == 1;
            if single_var {
                format!("1/{inner}")
            } else {
                format!("1/({inner})")
            }
        } else {
            // Mixed or all nonnegative: inline exponents.
            let mut parts = Vec::new();
            for (j, e) in exps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let var = var_name(n, j);
                if *e == BigInt::from(1) {
                    parts.push(var);
                } else {
                    parts.push(format!("{var}^{e}"));
                }
            }
            parts.join("*")
        };
        coords.push(text);
    }
    coords.join(", ")
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_map(self))
    }
}

/// Convenience used across the crate and tests.
pub fn map_from_rows(rows: &[Vec<i64>]) -> Result<MonomialMap> {
    MonomialMap::new(IntMatrix::from_rows(rows)?)
}

impl MonomialMap {
    /// The degree estimate used by iteration experiments; see `dyndeg`.
    pub fn degree_f64(&self) -> f64 {
        self.projective_degree().to_f64().unwrap_or(f64::INFINITY)
    }
}

//! Integer Laurent polynomials in one and two variables.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-variable integer Laurent polynomial `sum_i coeffs[i] * t^(min_exp + i)`.
///
/// Always held in trimmed form: the first and last coefficients are non-zero,
/// so the zero polynomial cannot be represented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoly1", into = "RawPoly1")]
pub struct LaurentPoly1 {
    min_exp: i64,
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly1 {
    min_exp: i64,
    coeffs: Vec<i64>,
}

impl TryFrom<RawPoly1> for LaurentPoly1 {
    type Error = Error;
    fn try_from(raw: RawPoly1) -> Result<Self> {
        LaurentPoly1::new(raw.min_exp, raw.coeffs)
    }
}

impl From<LaurentPoly1> for RawPoly1 {
    fn from(p: LaurentPoly1) -> Self {
        RawPoly1 {
            min_exp: p.min_exp,
            coeffs: p.coeffs,
        }
    }
}

impl LaurentPoly1 {
    /// Trims leading and trailing zeros, shifting `min_exp` accordingly.
    pub fn new(min_exp: i64, mut coeffs: Vec<i64>) -> Result<Self> {
        let Some(first) = coeffs.iter().position(|&c| c != 0) else {
            return Err(Error::ZeroPolynomial);
        };
        let last = coeffs.iter().rposition(|&c| c != 0).unwrap_or(first);
        coeffs.truncate(last + 1);
        coeffs.drain(..first);
        Ok(LaurentPoly1 {
            min_exp: min_exp + first as i64,
            coeffs,
        })
    }

    pub fn monomial(exp: i64, coeff: i64) -> Result<Self> {
        Self::new(exp, vec![coeff])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Result<Self> {
        let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert(0) += c;
        }
        let (Some(&lo), Some(&hi)) = (acc.keys().next(), acc.keys().next_back()) else {
            return Err(Error::ZeroPolynomial);
        };
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in acc {
            coeffs[(e - lo) as usize] = c;
        }
        Self::new(lo, coeffs)
    }

    /// Product of `(t - r)` over integer roots `r`, scaled by `leading`.
    pub fn from_integer_roots(leading: i64, roots: &[i64]) -> Result<Self> {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i] -= r * c;
                next[i + 1] += c;
            }
            coeffs = next;
        }
        Self::new(0, coeffs)
    }

    #[inline]
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    #[inline]
    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Exponent span `max_exp - min_exp`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        let idx = exp - self.min_exp;
        if idx < 0 {
            return 0;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.min_exp + i as i64, c))
    }

    /// Multiplies by `t^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly1 {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitutes `t -> 1/t`.
    pub fn mirrored(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly1 {
            min_exp: -self.max_exp(),
            coeffs,
        }
    }

    pub fn coeff_sum(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Evaluates at a complex point with Horner's scheme, then applies the
    /// `z^min_exp` factor once.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            if self.min_exp < 0 {
                return Err(Error::PoleAtZero {
                    min_exp: self.min_exp,
                });
            }
            return Ok(if self.min_exp == 0 {
                Complex64::new(self.coeffs[0] as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            });
        }
        let horner = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64);
        Ok(horner * complex_powi(z, self.min_exp))
    }

    /// Parses the `"min_exp;c0 c1 ... ck"` text form.
    pub fn parse(text: &str) -> Result<Self> {
        let (head, body) = text
            .split_once(';')
            .ok_or_else(|| Error::Polynomial(format!("expected \"min_exp;c0 c1 ...\", got {text:?}")))?;
        let min_exp: i64 = head
            .trim()
            .parse()
            .map_err(|_| Error::Polynomial(format!("non-integer exponent {:?}", head.trim())))?;
        let coeffs = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| Error::Polynomial(format!("non-integer coefficient {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Polynomial("no coefficients".into()));
        }
        Self::new(min_exp, coeffs)
    }
}

impl fmt::Display for LaurentPoly1 {
    /// Writes the `"min_exp;c0 c1 ... ck"` text form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.min_exp)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn complex_powi(z: Complex64, e: i64) -> Complex64 {
    if e >= 0 {
        z.powu(e as u32)
    } else {
        z.inv().powu((-e) as u32)
    }
}

/// Sparse two-variable integer Laurent polynomial, stored as a map from
/// `(i, j)` exponent pairs to non-zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term2 {
    pub i: i64,
    pub j: i64,
    pub c: i64,
}

impl LaurentPoly2 {
    /// Rejects repeated `(i, j)` pairs and zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = Term2>>(terms: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in terms {
            if t.c == 0 {
                return Err(Error::Polynomial(format!(
                    "zero coefficient at ({}, {})",
                    t.i, t.j
                )));
            }
            if map.insert((t.i, t.j), t.c).is_some() {
                return Err(Error::Polynomial(format!(
                    "duplicate exponent pair ({}, {})",
                    t.i, t.j
                )));
            }
        }
        Ok(LaurentPoly2 { terms: map })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: i64, j: i64) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = Term2> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| Term2 { i, j, c })
    }

    /// `(i_min, i_max, j_min, j_max)`, or `None` when there are no terms.
    pub fn bounding_box(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.terms.keys();
        let &(i0, j0) = it.next()?;
        Some(it.fold((i0, i0, j0, j0), |(a, b, c, d), &(i, j)| {
            (a.min(i), b.max(i), c.min(j), d.max(j))
        }))
    }

    /// Parses semicolon separated `"i,j,c"` triples. An empty string is the empty polynomial.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::default());
        }
        let terms = text
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|triple| {
                let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(Error::Polynomial(format!(
                        "expected \"i,j,c\", got {triple:?}"
                    )));
                }
                let num = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|_| Error::Polynomial(format!("non-integer entry {s:?}")))
                };
                Ok(Term2 {
                    i: num(parts[0])?,
                    j: num(parts[1])?,
                    c: num(parts[2])?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, t) in self.terms().enumerate() {
            if n > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{},{}", t.i, t.j, t.c)?;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term2>::deserialize(d)?;
        LaurentPoly2::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

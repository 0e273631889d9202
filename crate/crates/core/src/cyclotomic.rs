//! Exact scalars in the cyclotomic field Q(zeta_N).
//!
//! Elements are polynomials in `zeta` of degree below `phi(N)`, reduced modulo
//! the N-th cyclotomic polynomial, so equality is coefficient-wise.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::linalg::Rational;

/// The field Q(zeta_N) together with its monic defining polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    /// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
    modulus: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        Arc::new(Self { order, modulus: cyclotomic_polynomial(order) })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        Cyclotomic { field: Arc::clone(self), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic {
        self.from_rational(Rational::one())
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> Cyclotomic {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> Cyclotomic {
        let mut z = self.zero();
        z.coeffs[0] = q;
        z
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Cyclotomic {
        let k = k.rem_euclid(i64::from(self.order)) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        self.reduce(poly)
    }

    /// `sum_k coeffs[k] * zeta^k`.
    pub fn from_coefficients(self: &Arc<Self>, coeffs: Vec<Rational>) -> Cyclotomic {
        self.reduce(coeffs)
    }

    fn reduce(self: &Arc<Self>, mut poly: Vec<Rational>) -> Cyclotomic {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                if !m.is_zero() {
                    poly[shift + i] -= &top * Rational::from_integer(m.clone());
                }
            }
        }
        poly.resize(d, Rational::zero());
        Cyclotomic { field: Arc::clone(self), coeffs: poly }
    }
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd].clone();
        if q.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &q * d;
        }
        quot[i] = q;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Phi_n via `x^n - 1 = prod_{d | n} Phi_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let n = n as usize;
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = -BigInt::one();
    poly[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = poly_div_exact(&poly, &cyclotomic_polynomial(d as u32));
    }
    poly
}

#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, q: &Rational) -> Cyclotomic {
        Cyclotomic { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn check_field(&self, other: &Cyclotomic) {
        assert_eq!(self.field.order, other.field.order, "scalars from different cyclotomic fields");
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { field: Arc::clone(&self.field), coeffs }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { field: Arc::clone(&self.field), coeffs }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let d = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                prod[i + j] += a * b;
            }
        }
        self.field.reduce(prod)
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        self.check_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn zeta_has_the_right_order() {
        for n in [1u32, 2, 3, 4, 6, 8, 12] {
            let f = CyclotomicField::new(n);
            let z = f.zeta_pow(1);
            let mut acc = f.one();
            for k in 1..=n {
                acc = &acc * &z;
                assert_eq!(acc == f.one(), k == n, "zeta^{k} in Q(zeta_{n})");
            }
        }
    }

    #[test]
    fn sum_of_roots_of_unity_vanishes() {
        let f = CyclotomicField::new(6);
        let mut s = f.zero();
        for k in 0..6 {
            s += &f.zeta_pow(k);
        }
        assert!(s.is_zero());
        assert_eq!(f.zeta_pow(3).as_rational(), Some(rat(-1)));
        assert_eq!(f.zeta_pow(-1), f.zeta_pow(5));
    }
}

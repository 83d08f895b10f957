//! Exact polynomial algebra on ℂ² restricted to the unit sphere.
//!
//! A [`Poly`] is a finite sum of monomials ζ₁^{a₁} ζ₂^{a₂} ζ̄₁^{b₁} ζ̄₂^{b₂}
//! with complex-rational coefficients. All differential operators in this crate
//! act exactly on this representation; floating point enters only at evaluation
//! and quadrature time. Two polynomials that differ by a multiple of
//! |ζ₁|² + |ζ₂|² − 1 represent the same function on S³; `reduce` picks the
//! canonical representative that eliminates ζ₂ζ̄₂ pairs.

use num::complex::Complex;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent tuple (a₁, a₂, b₁, b₂) of ζ₁^{a₁} ζ₂^{a₂} ζ̄₁^{b₁} ζ̄₂^{b₂}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Mono(pub [u16; 4]);

impl Mono {
    pub const ONE: Mono = Mono([0, 0, 0, 0]);

    /// Holomorphic degree |α| = a₁ + a₂.
    pub fn holo_degree(&self) -> u16 {
        self.0[0] + self.0[1]
    }

    /// Anti-holomorphic degree |β| = b₁ + b₂.
    pub fn anti_degree(&self) -> u16 {
        self.0[2] + self.0[3]
    }

    pub fn total_degree(&self) -> u16 {
        self.holo_degree() + self.anti_degree()
    }

    /// Torus weights (a₁ − b₁, a₂ − b₂) under (ζ₁, ζ₂) ↦ (e^{iα}ζ₁, e^{iβ}ζ₂).
    pub fn weights(&self) -> (i32, i32) {
        (
            self.0[0] as i32 - self.0[2] as i32,
            self.0[1] as i32 - self.0[3] as i32,
        )
    }

    pub fn conj(&self) -> Mono {
        Mono([self.0[2], self.0[3], self.0[0], self.0[1]])
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["z1", "z2", "z1*", "z2*"];
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{}", names[i])?;
                } else {
                    write!(f, "{}^{}", names[i], e)?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Exact complex-rational coefficient.
pub type Coef = Complex<BigRational>;

pub fn coef_zero() -> Coef {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn coef_one() -> Coef {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub fn coef_i() -> Coef {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn coef_from_i64(n: i64, d: i64) -> Coef {
    Complex::new(
        BigRational::new(BigInt::from(n), BigInt::from(d)),
        BigRational::zero(),
    )
}

pub fn coef_is_zero(c: &Coef) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub fn coef_to_f64(c: &Coef) -> Complex<f64> {
    fn r(x: &BigRational) -> f64 {
        let n = x.numer();
        let d = x.denom();
        // Exact for small values; falls back to a ratio of f64 conversions with
        // scaling for very large numerators/denominators.
        big_to_f64(n) / big_to_f64(d)
    }
    Complex::new(r(&c.re), r(&c.im))
}

fn big_to_f64(x: &BigInt) -> f64 {
    use num::ToPrimitive;
    if let Some(v) = x.to_f64() {
        v
    } else if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

/// Polynomial in ζ₁, ζ₂, ζ̄₁, ζ̄₂ with exact complex-rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Coef>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Poly {
        Poly::monomial(Mono::ONE, coef_one())
    }

    pub fn constant(c: Coef) -> Poly {
        Poly::monomial(Mono::ONE, c)
    }

    pub fn monomial(m: Mono, c: Coef) -> Poly {
        let mut terms = BTreeMap::new();
        if !coef_is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// The coordinate ζ₁.
    pub fn z1() -> Poly {
        Poly::monomial(Mono([1, 0, 0, 0]), coef_one())
    }

    /// The coordinate ζ₂.
    pub fn z2() -> Poly {
        Poly::monomial(Mono([0, 1, 0, 0]), coef_one())
    }

    /// The coordinate ζ̄₁.
    pub fn z1bar() -> Poly {
        Poly::monomial(Mono([0, 0, 1, 0]), coef_one())
    }

    /// The coordinate ζ̄₂.
    pub fn z2bar() -> Poly {
        Poly::monomial(Mono([0, 0, 0, 1]), coef_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coef)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Mono) -> Coef {
        self.terms.get(m).cloned().unwrap_or_else(coef_zero)
    }

    pub fn total_degree(&self) -> u16 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, m: Mono, c: Coef) {
        if coef_is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if coef_is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.insert(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coef) -> Poly {
        if coef_is_zero(c) {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m, v) in self.terms.iter() {
            out.insert(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                let m = Mono([
                    m1.0[0] + m2.0[0],
                    m1.0[1] + m2.0[1],
                    m1.0[2] + m2.0[2],
                    m1.0[3] + m2.0[3],
                ]);
                out.insert(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Complex conjugate: swaps holomorphic and anti-holomorphic exponents.
    pub fn conj(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            out.insert(m.conj(), c.conj());
        }
        out
    }

    /// Real part (p + p̄)/2 as an exact polynomial.
    pub fn re_part(&self) -> Poly {
        let half = coef_from_i64(1, 2);
        self.add(&self.conj()).scale(&half)
    }

    /// Partial derivative with respect to variable `var`
    /// (0 = ζ₁, 1 = ζ₂, 2 = ζ̄₁, 3 = ζ̄₂).
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in self.terms.iter() {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0;
            exps[var] -= 1;
            let factor = Complex::new(
                BigRational::from(BigInt::from(e as i64)),
                BigRational::zero(),
            );
            out.insert(Mono(exps), c.clone() * factor);
        }
        out
    }

    /// Canonical representative modulo |ζ₁|² + |ζ₂|² = 1: every ζ₂ζ̄₂ pair is
    /// rewritten as 1 − ζ₁ζ̄₁. Terminates because each rewrite lowers the
    /// ζ₂ζ̄₂ count.
    pub fn reduce(&self) -> Poly {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            let mut out = Poly::zero();
            for (m, c) in cur.terms.iter() {
                if m.0[1] > 0 && m.0[3] > 0 {
                    changed = true;
                    // ζ₂^{a₂} ζ̄₂^{b₂} = ζ₂^{a₂−1} ζ̄₂^{b₂−1} (1 − ζ₁ζ̄₁)
                    let mut e = m.0;
                    e[1] -= 1;
                    e[3] -= 1;
                    out.insert(Mono(e), c.clone());
                    let mut e2 = e;
                    e2[0] += 1;
                    e2[2] += 1;
                    out.insert(Mono(e2), -c.clone());
                } else {
                    out.insert(*m, c.clone());
                }
            }
            cur = out;
            if !changed {
                return cur;
            }
        }
    }

    /// True if the polynomial vanishes identically on S³.
    pub fn is_zero_on_sphere(&self) -> bool {
        self.reduce().is_zero()
    }

    /// If `self` is a constant function on S³, returns its value.
    pub fn constant_value_on_sphere(&self) -> Option<Coef> {
        let r = self.reduce();
        if r.is_zero() {
            return Some(coef_zero());
        }
        if r.num_terms() == 1 {
            if let Some(c) = r.terms.get(&Mono::ONE) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Exact scalar ratio `self = λ · other` on S³, if one exists.
    pub fn scalar_ratio_on_sphere(&self, other: &Poly) -> Option<Coef> {
        let a = self.reduce();
        let b = other.reduce();
        if b.is_zero() {
            return if a.is_zero() { Some(coef_zero()) } else { None };
        }
        let (m0, c0) = b.terms.iter().next().unwrap();
        let lam = a.coefficient(m0) / c0.clone();
        if a.sub(&b.scale(&lam)).is_zero() {
            Some(lam)
        } else {
            None
        }
    }

    /// Evaluate at a point of ℂ² in floating point.
    pub fn eval(&self, z1: Complex<f64>, z2: Complex<f64>) -> Complex<f64> {
        let z1b = z1.conj();
        let z2b = z2.conj();
        let mut acc = Complex::new(0.0, 0.0);
        for (m, c) in self.terms.iter() {
            let v = z1.powi(m.0[0] as i32)
                * z2.powi(m.0[1] as i32)
                * z1b.powi(m.0[2] as i32)
                * z2b.powi(m.0[3] as i32);
            acc += coef_to_f64(c) * v;
        }
        acc
    }

    /// Floating-point view of the terms, for fast repeated evaluation.
    pub fn float_terms(&self) -> Vec<(Mono, Complex<f64>)> {
        self.terms
            .iter()
            .map(|(m, c)| (*m, coef_to_f64(c)))
            .collect()
    }

    /// Largest coefficient magnitude (coefficient-wise ∞-norm), as f64.
    pub fn coef_sup(&self) -> f64 {
        self.terms
            .values()
            .map(|c| coef_to_f64(c).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}+{}i)·{}", c.re, c.im, m)?;
        }
        Ok(())
    }
}

/// Exact normalized integral ⨍_{S³} ζ^α ζ̄^β of a monomial with respect to the
/// contact volume form, as a fraction of the total volume. Vanishes unless
/// α = β; for α = β the value is a₁! a₂! / (|α|+1)!.
pub fn monomial_mean(m: &Mono) -> BigRational {
    if m.0[0] != m.0[2] || m.0[1] != m.0[3] {
        return BigRational::zero();
    }
    let a1 = m.0[0] as u64;
    let a2 = m.0[1] as u64;
    let mut num = BigInt::one();
    for k in 1..=a1 {
        num *= BigInt::from(k);
    }
    for k in 1..=a2 {
        num *= BigInt::from(k);
    }
    let mut den = BigInt::one();
    for k in 1..=(a1 + a2 + 1) {
        den *= BigInt::from(k);
    }
    BigRational::new(num, den)
}

/// Exact normalized integral ⨍_{S³} p of a polynomial (fraction of volume).
pub fn poly_mean(p: &Poly) -> Coef {
    let mut acc = coef_zero();
    for (m, c) in p.terms() {
        let w = monomial_mean(m);
        if !w.is_zero() {
            acc = acc + c.clone() * Complex::new(w, BigRational::zero());
        }
    }
    acc
}

/// Exact normalized L² pairing ⨍ p q̄ (fraction of volume).
pub fn poly_pairing(p: &Poly, q: &Poly) -> Coef {
    poly_mean(&p.mul(&q.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_reduction() {
        let p = Poly::z1().mul(&Poly::z1bar()).add(&Poly::z2().mul(&Poly::z2bar()));
        // |ζ₁|² + |ζ₂|² reduces to 1 on the sphere.
        assert_eq!(p.reduce(), Poly::one());
        assert!(p.sub(&Poly::one()).is_zero_on_sphere());
    }

    #[test]
    fn derivative_basic() {
        let p = Poly::z1().mul(&Poly::z1()); // ζ₁²
        let d = p.derivative(0);
        assert_eq!(d, Poly::z1().scale(&coef_from_i64(2, 1)));
        assert!(p.derivative(1).is_zero());
    }

    #[test]
    fn conj_involution() {
        let p = Poly::z1().mul(&Poly::z2bar()).scale(&coef_i());
        assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn monomial_means() {
        // ⨍ 1 = 1, ⨍ |ζ₁|² = 1/2, ⨍ |ζ₁|²|ζ₂|² = 1/6, ⨍ |ζ₂|⁴ = 1/3.
        assert_eq!(monomial_mean(&Mono::ONE), BigRational::one());
        assert_eq!(
            monomial_mean(&Mono([1, 0, 1, 0])),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(
            monomial_mean(&Mono([1, 1, 1, 1])),
            BigRational::new(BigInt::from(1), BigInt::from(6))
        );
        assert_eq!(
            monomial_mean(&Mono([0, 2, 0, 2])),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        // Odd monomials integrate to zero.
        assert!(monomial_mean(&Mono([1, 0, 0, 0])).is_zero());
        assert!(monomial_mean(&Mono([2, 0, 1, 0])).is_zero());
    }

    #[test]
    fn eval_matches_terms() {
        let p = Poly::z1()
            .mul(&Poly::z1())
            .mul(&Poly::z2bar())
            .scale(&coef_from_i64(3, 2));
        let z1 = Complex::new(0.3, 0.4);
        let z2 = Complex::new(-0.5, 0.7);
        let direct = Complex::new(1.5, 0.0) * z1 * z1 * z2.conj();
        assert!((p.eval(z1, z2) - direct).norm() < 1e-14);
    }
}

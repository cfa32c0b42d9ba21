//! Dense univariate polynomials over any [`Field`].
//!
//! Coefficient `i` is the coefficient of xⁱ. The zero polynomial is the empty
//! vector and no stored polynomial has a zero leading coefficient. All
//! operations take the coefficient field as an explicit context argument.

use super::field::Field;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + PartialEq> Poly<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Builds a polynomial from low-to-high coefficients, trimming zeros.
    pub fn new<K: Field<Elem = T>>(k: &K, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant<K: Field<Elem = T>>(k: &K, c: T) -> Self {
        Self::new(k, vec![c])
    }

    pub fn one<K: Field<Elem = T>>(k: &K) -> Self {
        Self::constant(k, k.one())
    }

    /// The polynomial `x`.
    pub fn x<K: Field<Elem = T>>(k: &K) -> Self {
        Self { coeffs: vec![k.zero(), k.one()] }
    }

    /// `c·xⁿ`
    pub fn monomial<K: Field<Elem = T>>(k: &K, c: T, n: usize) -> Self {
        let mut coeffs = vec![k.zero(); n];
        coeffs.push(c);
        Self::new(k, coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for bounds checks.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff<K: Field<Elem = T>>(&self, k: &K, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn map<K: Field, F>(&self, target: &K, f: F) -> Result<Poly<K::Elem>>
    where
        F: Fn(&T) -> Result<K::Elem>,
    {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target, coeffs))
    }

    pub fn add<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(k, coeffs)
    }

    pub fn neg<K: Field<Elem = T>>(&self, k: &K) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect() }
    }

    pub fn sub<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Self {
        self.add(k, &other.neg(k))
    }

    pub fn scale<K: Field<Elem = T>>(&self, k: &K, c: &T) -> Self {
        Self::new(k, self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn mul<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Self::new(k, out)
    }

    pub fn square<K: Field<Elem = T>>(&self, k: &K) -> Self {
        self.mul(k, self)
    }

    pub fn pow<K: Field<Elem = T>>(&self, k: &K, mut n: u64) -> Self {
        let mut acc = Self::one(k);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square(k);
            }
        }
        acc
    }

    /// Euclidean division: returns `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn divmod<K: Field<Elem = T>>(&self, k: &K, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = k.inv(d.lc().expect("nonzero divisor"))?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![k.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = k.mul(&r[i + dd], &lc_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, dc));
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(k, q), Self::new(k, r)))
    }

    pub fn rem<K: Field<Elem = T>>(&self, k: &K, d: &Self) -> Result<Self> {
        Ok(self.divmod(k, d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact<K: Field<Elem = T>>(&self, k: &K, d: &Self) -> Result<Self> {
        let (q, r) = self.divmod(k, d)?;
        if !r.is_zero() {
            return Err(Error::Precondition("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Result<bool> {
        Ok(other.rem(k, self)?.is_zero())
    }

    pub fn monic<K: Field<Elem = T>>(&self, k: &K) -> Result<Self> {
        match self.lc() {
            None => Ok(Self::zero()),
            Some(lc) => Ok(self.scale(k, &k.inv(lc)?)),
        }
    }

    pub fn derivative<K: Field<Elem = T>>(&self, k: &K) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(c, &k.from_i64(i as i64)))
            .collect();
        Self::new(k, coeffs)
    }

    pub fn eval<K: Field<Elem = T>>(&self, k: &K, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b)?;
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Extended Euclid: `(g, s, t)` with `g = s·self + t·other`, `g` monic.
    pub fn xgcd<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Result<(Self, Self, Self)> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(k, &r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(k, &q.mul(k, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(k, &q.mul(k, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => Ok((r0, s0, t0)),
            Some(lc) => {
                let li = k.inv(lc)?;
                Ok((r0.scale(k, &li), s0.scale(k, &li), t0.scale(k, &li)))
            }
        }
    }

    /// `self^n mod m` by square-and-multiply.
    pub fn pow_mod<K: Field<Elem = T>>(&self, k: &K, mut n: u64, m: &Self) -> Result<Self> {
        let mut acc = Self::one(k).rem(k, m)?;
        let mut base = self.rem(k, m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(k, &base).rem(k, m)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.square(k).rem(k, m)?;
            }
        }
        Ok(acc)
    }

    /// Resultant by the Euclidean remainder sequence over the field.
    pub fn resultant<K: Field<Elem = T>>(&self, k: &K, other: &Self) -> Result<T> {
        let (Some(mut da), Some(mut db)) = (self.degree(), other.degree()) else {
            return Ok(k.zero());
        };
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = k.one();
        loop {
            if db == 0 {
                let lcb = b.lc().expect("nonzero").clone();
                let mut pw = k.one();
                for _ in 0..da {
                    pw = k.mul(&pw, &lcb);
                }
                return Ok(k.mul(&acc, &pw));
            }
            let r = a.rem(k, &b)?;
            let Some(dr) = r.degree() else {
                return Ok(k.zero());
            };
            if (da * db) % 2 == 1 {
                acc = k.neg(&acc);
            }
            let lcb = b.lc().expect("nonzero").clone();
            for _ in 0..(da - dr) {
                acc = k.mul(&acc, &lcb);
            }
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }
}

//! Exact arithmetic kernels: rationals, dense polynomials over ℚ and 𝔽_p,
//! and the number-theoretic predicates the rest of the crate relies on.

mod field;
mod poly;

pub use field::{Field, PrimeField, RationalField};
pub use poly::Poly;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
/// Always-reduced arbitrary-precision rational (denominator ≥ 1, zero is 0/1).
pub type Rational = num_rational::BigRational;
pub type PolyQ = Poly<Rational>;
/// Polynomial over 𝔽_p; coefficients are residues of the field passed alongside.
pub type PolyFp = Poly<u64>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial over ℚ from integer coefficients, low degree first.
pub fn poly_q(coeffs: &[i64]) -> PolyQ {
    PolyQ::new(&RationalField, coeffs.iter().map(|&c| rat(c)).collect())
}

pub fn poly_q_big(coeffs: &[BigInt]) -> PolyQ {
    PolyQ::new(&RationalField, coeffs.iter().cloned().map(Rational::from_integer).collect())
}

/// An element of 𝔽_p that remembers its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElt {
    p: u64,
    value: u64,
}

impl FpElt {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Ok(Self { p, value: field.from_i64(value) })
    }

    pub fn from_residue(field: &PrimeField, value: u64) -> Self {
        Self { p: field.modulus(), value: value % field.modulus() }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }
}

impl fmt::Display for FpElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

/// Legendre symbol by Euler's criterion.
pub fn legendre_symbol(a: FpElt) -> i8 {
    let field = PrimeField::new(a.p).expect("FpElt modulus is an odd prime");
    legendre_in(&field, a.value)
}

pub(crate) fn legendre_in(field: &PrimeField, a: u64) -> i8 {
    if a % field.modulus() == 0 {
        return 0;
    }
    match field.pow(a, (field.modulus() - 1) / 2) {
        1 => 1,
        _ => -1,
    }
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Parses a prime given as a big integer, rejecting anything past 64 bits.
pub fn prime_from_big(p: &BigInt) -> Result<u64> {
    let v = p.to_u64().ok_or_else(|| Error::PrimeOutOfRange(p.to_string()))?;
    if v == 2 || !is_prime(v) {
        return Err(Error::NotOddPrime(v));
    }
    Ok(v)
}

/// disc(f) = (−1)^{n(n−1)/2} · res(f, f′) / lc(f).
pub fn poly_discriminant(f: &PolyQ) -> Result<Rational> {
    let k = RationalField;
    let n = f.deg0();
    if f.degree().is_none_or(|d| d < 2) {
        return Err(Error::DegreeTooSmall { found: n, required: 2 });
    }
    let res = f.resultant(&k, &f.derivative(&k))?;
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -Rational::one() } else { Rational::one() };
    Ok(sign * res / f.lc().expect("nonzero"))
}

/// True iff gcd(f, f′) = 1.
pub fn is_squarefree(f: &PolyQ) -> bool {
    let k = RationalField;
    f.gcd(&k, &f.derivative(&k))
        .map(|g| g.degree() == Some(0))
        .unwrap_or(false)
}

/// Reduces a rational polynomial modulo p, requiring p-integral coefficients
/// and a leading coefficient that survives.
pub fn reduce_poly_mod_p(g: &PolyQ, field: &PrimeField) -> Result<PolyFp> {
    let reduced = g.map(field, |c| field.from_rational(c))?;
    if reduced.degree() != g.degree() {
        return Err(Error::LeadingCoefficientVanishes { p: field.modulus() });
    }
    Ok(reduced)
}

/// True iff ḡ is a product of deg g distinct linear factors over 𝔽_p:
/// x^p ≡ x (mod ḡ) and gcd(ḡ, ḡ′) = 1.
pub fn splits_completely_mod_p(g: &PolyQ, p: u64) -> Result<bool> {
    let field = PrimeField::new(p)?;
    if g.degree().is_none_or(|d| d == 0) {
        return Err(Error::DegreeTooSmall { found: 0, required: 1 });
    }
    let gb = reduce_poly_mod_p(g, &field)?;
    Ok(splits_completely_fp(&field, &gb))
}

pub(crate) fn splits_completely_fp(field: &PrimeField, gb: &PolyFp) -> bool {
    let x = PolyFp::x(field);
    let frob = x.pow_mod(field, field.modulus(), gb).expect("nonzero modulus");
    let x_red = x.rem(field, gb).expect("nonzero modulus");
    if frob != x_red {
        return false;
    }
    gb.gcd(field, &gb.derivative(field))
        .map(|d| d.degree() == Some(0))
        .unwrap_or(false)
}

/// All roots of ḡ in 𝔽_p by enumeration, ascending.
pub fn roots_mod_p(field: &PrimeField, g: &PolyFp) -> Vec<u64> {
    (0..field.modulus()).filter(|r| field.is_zero(&g.eval(field, r))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerClassification {
    pub tenth_power_free: bool,
    pub perfect_square: bool,
    pub perfect_fifth_power: bool,
}

/// Exact k-th power tests by integer root extraction.
pub fn integer_power_classification(d: &BigInt) -> Result<PowerClassification> {
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    let abs = d.abs();
    let perfect_square = d.is_positive() && is_perfect_power(&abs, 2);
    let perfect_fifth_power = is_perfect_power(&abs, 5);
    let mut tenth_power_free = true;
    let mut q = BigInt::from(2);
    while q.pow(10u32) <= abs {
        if abs.is_multiple_of(&q.pow(10u32)) {
            tenth_power_free = false;
            break;
        }
        q += 1;
    }
    Ok(PowerClassification { tenth_power_free, perfect_square, perfect_fifth_power })
}

fn is_perfect_power(n: &BigInt, k: u32) -> bool {
    let r = n.nth_root(k);
    &r.pow(k) == n
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&(&rn * &rn) == n && &(&rd * &rd) == d).then(|| Rational::new(rn, rd))
}

/// Rational roots of a nonzero rational polynomial, ascending and distinct.
pub fn rational_roots(h: &PolyQ) -> Vec<Rational> {
    let k = RationalField;
    let Some(deg) = h.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    // Clear denominators to get an integer polynomial.
    let lcm = h.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = h.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[low..];
    let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
    if ints.len() > 1 {
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for cand in [Rational::new(p.clone(), q.clone()), -Rational::new(p.clone(), q.clone())] {
                    if h.eval(&k, &cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = BigInt::one();
    while &(&i * &i) <= n {
        if n.is_multiple_of(&i) {
            let j = n / &i;
            if j != i {
                large.push(j);
            }
            small.push(i.clone());
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
    }
}

/// Human-readable polynomial in `var`, highest degree first.
pub fn fmt_poly_q(f: &PolyQ, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&fmt_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{mono}", fmt_rational(&mag)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Sylvester-matrix resultant by fraction-carrying Gaussian elimination;
    /// independent of the remainder-sequence route in `Poly::resultant`.
    fn sylvester_resultant(f: &PolyQ, g: &PolyQ) -> Rational {
        let (m, n) = (f.deg0(), g.deg0());
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        let mut det = Rational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            det *= mat[col][col].clone();
            for r in col + 1..size {
                let factor = &mat[r][col] / &mat[col][col];
                for c in col..size {
                    let v = &factor * &mat[col][c];
                    mat[r][c] -= v;
                }
            }
        }
        det
    }

    fn disc_oracle(f: &PolyQ) -> Rational {
        let n = f.deg0();
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        rat(sign) * sylvester_resultant(f, &f.derivative(&RationalField)) / f.lc().unwrap()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(FpElt::new(0, 11).unwrap()), 0);
        assert_eq!(legendre_symbol(FpElt::new(1, 11).unwrap()), 1);
        assert_eq!(legendre_symbol(FpElt::new(15, 7).unwrap()), 1);
        assert_eq!(legendre_symbol(FpElt::new(2, 11).unwrap()), -1);
    }

    #[test]
    fn discriminant_of_quadratic() {
        let f = poly_q(&[-15, 0, 1]);
        assert_eq!(poly_discriminant(&f).unwrap(), rat(60));
        assert_eq!(disc_oracle(&f), rat(60));
    }

    #[test]
    fn discriminant_of_quintic_trinomial() {
        for d in [1i64, 7, 9, -4, 100] {
            let f = poly_q(&[d, 0, 0, 0, 0, 1]);
            let expected = rat(3125) * rat(d).pow(4);
            assert_eq!(disc_oracle(&f), expected);
            assert_eq!(poly_discriminant(&f).unwrap(), expected);
        }
    }

    #[test]
    fn discriminant_of_sextic_family_member() {
        let f = poly_q(&[-1, 0, 0, 42, 0, 0, 1]);
        let formula = rat(3).pow(6) * rat(4 + 42 * 42).pow(3);
        let oracle = disc_oracle(&f);
        assert_eq!(oracle.abs(), formula);
        assert_eq!(poly_discriminant(&f).unwrap(), oracle);
    }

    #[test]
    fn discriminant_rejects_low_degree() {
        assert!(matches!(poly_discriminant(&poly_q(&[1, 1])), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn gcd_and_divmod() {
        let k = RationalField;
        let g = poly_q(&[-1, 0, 1]).gcd(&k, &poly_q(&[-1, 1])).unwrap();
        assert_eq!(g, poly_q(&[-1, 1]));
        let (q, r) = poly_q(&[9, 0, 0, 0, 0, 1]).divmod(&k, &poly_q(&[0, 1])).unwrap();
        assert_eq!(q, poly_q(&[0, 0, 0, 0, 1]));
        assert_eq!(r, poly_q(&[9]));
        assert_eq!(poly_q(&[1]).divmod(&k, &PolyQ::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&poly_q(&[7, 0, 0, 0, 0, 1])));
        assert!(!is_squarefree(&poly_q(&[1, -2, 1])));
        let k = RationalField;
        let f = poly_q(&[-1, 0, 1]).mul(&k, &poly_q(&[-4, 0, 1])).mul(&k, &poly_q(&[3, 1]));
        assert!(is_squarefree(&f));
    }

    #[test]
    fn splitting_examples() {
        assert!(splits_completely_mod_p(&poly_q(&[-15, 0, 1]), 7).unwrap());
        assert!(splits_completely_mod_p(&poly_q(&[1, 1, 1, 1, 1]), 11).unwrap());
        assert!(!splits_completely_mod_p(&poly_q(&[-2, 0, 1]), 11).unwrap());
        // repeated root mod 5
        assert!(!splits_completely_mod_p(&poly_q(&[1, -2, 1]), 5).unwrap());
        assert!(matches!(
            splits_completely_mod_p(&poly_q(&[1, 0, 7]), 7),
            Err(Error::LeadingCoefficientVanishes { p: 7 })
        ));
        let half = PolyQ::new(&RationalField, vec![rat_frac(1, 7), rat(1)]);
        assert!(matches!(splits_completely_mod_p(&half, 7), Err(Error::NotIntegral { p: 7 })));
    }

    #[test]
    fn roots_by_enumeration() {
        let f7 = fp(7);
        let g = reduce_poly_mod_p(&poly_q(&[-15, 0, 1]), &f7).unwrap();
        assert_eq!(roots_mod_p(&f7, &g), vec![1, 6]);
        let g = reduce_poly_mod_p(&poly_q(&[-1, 0, 0, 0, 0, 0, 1]), &f7).unwrap();
        assert_eq!(roots_mod_p(&f7, &g), vec![1, 2, 3, 4, 5, 6]);
        let g = reduce_poly_mod_p(&poly_q(&[1, 0, 1]), &f7).unwrap();
        assert!(roots_mod_p(&f7, &g).is_empty());
    }

    #[test]
    fn power_classification() {
        let c = |d: i64| integer_power_classification(&BigInt::from(d)).unwrap();
        let pc = |t, s, f| PowerClassification { tenth_power_free: t, perfect_square: s, perfect_fifth_power: f };
        assert_eq!(c(100), pc(true, true, false));
        assert_eq!(c(1), pc(true, true, true));
        assert_eq!(c(1024), pc(false, true, true));
        assert_eq!(c(-32), pc(true, false, true));
        assert_eq!(c(-4), pc(true, false, false));
        assert_eq!(c(12), pc(true, false, false));
        assert_eq!(integer_power_classification(&BigInt::zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(prime_from_big(&"18446744073709551629".parse().unwrap()).is_err());
    }

    #[test]
    fn rational_root_search() {
        assert_eq!(rational_roots(&poly_q(&[-1, 0, 0, 0, 0, 0, 1])), vec![rat(-1), rat(1)]);
        assert_eq!(rational_roots(&poly_q(&[0, -1, 0, 0, 0, 1])), vec![rat(-1), rat(0), rat(1)]);
        assert_eq!(rational_roots(&poly_q(&[-1, 2])), vec![rat_frac(1, 2)]);
        assert!(rational_roots(&poly_q(&[-1, 0, 0, 42, 0, 0, 1])).is_empty());
    }

    #[test]
    fn rational_sqrt_exact() {
        assert_eq!(rational_sqrt(&rat_frac(9, 4)), Some(rat_frac(3, 2)));
        assert_eq!(rational_sqrt(&rat(15)), None);
        assert_eq!(rational_sqrt(&rat(-1)), None);
    }

    #[test]
    fn formatting_round_trip() {
        assert_eq!(fmt_poly_q(&poly_q(&[-1, 0, 0, 42, 0, 0, 1]), "x"), "x^6 + 42*x^3 - 1");
        assert_eq!(parse_rational(" -3/6 ").unwrap(), rat_frac(-1, 2));
        assert_eq!(fmt_rational(&rat_frac(-1, 2)), "-1/2");
        assert!(parse_rational("1/0").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_poly(max_deg: usize) -> impl Strategy<Value = PolyQ> {
            prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| poly_q(&c))
        }

        proptest! {
            #[test]
            fn legendre_is_multiplicative(a in 1u64..200, b in 1u64..200, pi in 0usize..5) {
                let p = [7u64, 11, 13, 31, 101][pi];
                let k = fp(p);
                prop_assume!(a % p != 0 && b % p != 0);
                let ab = k.mul(&(a % p), &(b % p));
                prop_assert_eq!(legendre_in(&k, ab), legendre_in(&k, a % p) * legendre_in(&k, b % p));
            }

            #[test]
            fn splitting_matches_root_count(tail in prop::collection::vec(-30i64..30, 0..6), pi in 0usize..14) {
                let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47][pi];
                let mut c = tail.clone();
                c.push(1);
                let g = poly_q(&c);
                prop_assume!(g.deg0() >= 1);
                let k = fp(p);
                let gb = reduce_poly_mod_p(&g, &k).unwrap();
                let expected = roots_mod_p(&k, &gb).len() == g.deg0();
                prop_assert_eq!(splits_completely_mod_p(&g, p).unwrap(), expected);
            }

            #[test]
            fn discriminant_vanishes_iff_not_squarefree(f in small_poly(8)) {
                prop_assume!(f.deg0() >= 2);
                let d = poly_discriminant(&f).unwrap();
                prop_assert_eq!(d.is_zero(), !is_squarefree(&f));
                prop_assert_eq!(d, disc_oracle(&f));
            }

            #[test]
            fn ring_axioms_and_division(a in small_poly(6), b in small_poly(6), c in small_poly(4)) {
                let k = RationalField;
                prop_assert_eq!(a.mul(&k, &b).mul(&k, &c), a.mul(&k, &b.mul(&k, &c)));
                prop_assert_eq!(a.mul(&k, &b.add(&k, &c)), a.mul(&k, &b).add(&k, &a.mul(&k, &c)));
                if !b.is_zero() {
                    let (q, r) = a.divmod(&k, &b).unwrap();
                    prop_assert_eq!(q.mul(&k, &b).add(&k, &r), a.clone());
                    prop_assert!(r.is_zero() || r.deg0() < b.deg0());
                }
                let (g, s, t) = a.xgcd(&k, &b).unwrap();
                prop_assert_eq!(s.mul(&k, &a).add(&k, &t.mul(&k, &b)), g);
            }

            #[test]
            fn fp_division_identity(a in prop::collection::vec(0u64..13, 1..8), b in prop::collection::vec(0u64..13, 1..5)) {
                let k = fp(13);
                let a = PolyFp::new(&k, a);
                let b = PolyFp::new(&k, b);
                prop_assume!(!b.is_zero());
                let (q, r) = a.divmod(&k, &b).unwrap();
                prop_assert_eq!(q.mul(&k, &b).add(&k, &r), a);
            }
        }
    }
}

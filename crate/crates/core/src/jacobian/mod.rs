//! Divisor-class arithmetic on odd-degree hyperelliptic Jacobians.
//!
//! Classes are reduced Mumford pairs (u, v): u monic, deg v < deg u ≤ g and
//! u | v² − f. The group law is Cantor's composition followed by reduction.
//! The coefficient domain is any [`Field`]; over number towers the only
//! failure mode is a zero divisor during inversion.

use crate::algebra::{Field, Poly, PrimeField};
use crate::curve::{CurvePoint, HyperellipticCurve, Model};
use crate::error::{Error, Result};
use crate::tower::{ResidueAssignment, Tower};

/// log₂(10), for converting decimal-digit ceilings to bit ceilings.
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Default coefficient height ceiling in decimal digits.
pub const DEFAULT_HEIGHT_CEILING_DIGITS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MumfordDivisor<E> {
    u: Poly<E>,
    v: Poly<E>,
}

impl<E: Clone + PartialEq> MumfordDivisor<E> {
    pub fn u(&self) -> &Poly<E> {
        &self.u
    }

    pub fn v(&self) -> &Poly<E> {
        &self.v
    }

    pub fn is_identity(&self) -> bool {
        self.u.degree() == Some(0) && self.v.is_zero()
    }
}

/// The Jacobian of an odd-model curve over a coefficient field.
#[derive(Debug, Clone)]
pub struct Jacobian<K: Field> {
    field: K,
    f: Poly<K::Elem>,
    genus: usize,
    ceiling_bits: Option<u64>,
    ceiling_digits: u64,
}

impl<K: Field> Jacobian<K> {
    pub fn new(curve: &HyperellipticCurve, field: K) -> Result<Self> {
        if curve.model() != Model::Odd {
            return Err(Error::UnsupportedModel(
                "Cantor arithmetic is implemented for odd-degree models only".into(),
            ));
        }
        let f = curve.f().map(&field, |c| field.from_rational(c))?;
        if f.degree() != curve.f().degree() {
            return Err(Error::Precondition("leading coefficient of f vanishes in the coefficient field".into()));
        }
        Ok(Self { field, f, genus: curve.genus(), ceiling_bits: None, ceiling_digits: 0 })
    }

    /// Caps the size of every stored numerator and denominator.
    pub fn with_height_ceiling(mut self, digits: u64) -> Self {
        self.ceiling_bits = Some((digits as f64 * BITS_PER_DIGIT).ceil() as u64);
        self.ceiling_digits = digits;
        self
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn identity(&self) -> MumfordDivisor<K::Elem> {
        MumfordDivisor { u: Poly::one(&self.field), v: Poly::zero() }
    }

    /// ι(P) = P − P∞ for an affine point (a, b); checks b² = f(a).
    pub fn embed_affine(&self, a: &K::Elem, b: &K::Elem) -> Result<MumfordDivisor<K::Elem>> {
        let k = &self.field;
        if k.mul(b, b) != self.f.eval(k, a) {
            return Err(Error::NotOnCurve("b² ≠ f(a)".into()));
        }
        Ok(MumfordDivisor {
            u: Poly::new(k, vec![k.neg(a), k.one()]),
            v: Poly::constant(k, b.clone()),
        })
    }

    /// Builds a divisor from raw (u, v), normalizing and checking the Mumford conditions.
    pub fn from_uv(&self, u: Poly<K::Elem>, v: Poly<K::Elem>) -> Result<MumfordDivisor<K::Elem>> {
        let k = &self.field;
        let u = u.monic(k)?;
        let v = v.rem(k, &u)?;
        let d = MumfordDivisor { u, v };
        if !self.is_valid(&d)? {
            return Err(Error::Precondition("(u, v) is not a reduced Mumford pair".into()));
        }
        Ok(d)
    }

    pub fn is_valid(&self, d: &MumfordDivisor<K::Elem>) -> Result<bool> {
        let k = &self.field;
        let Some(du) = d.u.degree() else { return Ok(false) };
        if du > self.genus || !d.u.lc().is_some_and(|c| k.is_one(c)) {
            return Ok(false);
        }
        if d.v.degree().is_some_and(|dv| dv >= du) {
            return Ok(false);
        }
        let rem = d.v.square(k).sub(k, &self.f).rem(k, &d.u)?;
        Ok(rem.is_zero())
    }

    pub fn neg(&self, d: &MumfordDivisor<K::Elem>) -> MumfordDivisor<K::Elem> {
        MumfordDivisor { u: d.u.clone(), v: d.v.neg(&self.field) }
    }

    /// Cantor composition and reduction.
    pub fn add(&self, d1: &MumfordDivisor<K::Elem>, d2: &MumfordDivisor<K::Elem>) -> Result<MumfordDivisor<K::Elem>> {
        let k = &self.field;
        let (d0, e1, e2) = d1.u.xgcd(k, &d2.u)?;
        let (d, c1, c2) = d0.xgcd(k, &d1.v.add(k, &d2.v))?;
        let s1 = c1.mul(k, &e1);
        let s2 = c1.mul(k, &e2);
        let s3 = c2;
        let mut u = d1.u.mul(k, &d2.u).div_exact(k, &d.square(k))?;
        let numer = s1
            .mul(k, &d1.u)
            .mul(k, &d2.v)
            .add(k, &s2.mul(k, &d2.u).mul(k, &d1.v))
            .add(k, &s3.mul(k, &d1.v.mul(k, &d2.v).add(k, &self.f)));
        let mut v = numer.div_exact(k, &d)?.rem(k, &u)?;
        while u.deg0() > self.genus {
            let u_next = self.f.sub(k, &v.square(k)).div_exact(k, &u)?;
            let u_next = u_next.monic(k)?;
            v = v.neg(k).rem(k, &u_next)?;
            u = u_next;
        }
        let u = u.monic(k)?;
        let v = v.rem(k, &u)?;
        let out = MumfordDivisor { u, v };
        self.check_height(&out)?;
        Ok(out)
    }

    pub fn double(&self, d: &MumfordDivisor<K::Elem>) -> Result<MumfordDivisor<K::Elem>> {
        self.add(d, d)
    }

    /// n·D by double-and-add; 0·D is the identity.
    pub fn scalar_mul(&self, n: u64, d: &MumfordDivisor<K::Elem>) -> Result<MumfordDivisor<K::Elem>> {
        let mut acc = self.identity();
        if n == 0 {
            return Ok(acc);
        }
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.double(&acc)?;
            if (n >> bit) & 1 == 1 {
                acc = self.add(&acc, d)?;
            }
        }
        Ok(acc)
    }

    /// Signed multiples via the involution (u, v) ↦ (u, −v).
    pub fn scalar_mul_signed(&self, n: i64, d: &MumfordDivisor<K::Elem>) -> Result<MumfordDivisor<K::Elem>> {
        let m = self.scalar_mul(n.unsigned_abs(), d)?;
        Ok(if n < 0 { self.neg(&m) } else { m })
    }

    fn check_height(&self, d: &MumfordDivisor<K::Elem>) -> Result<()> {
        let Some(limit) = self.ceiling_bits else { return Ok(()) };
        let k = &self.field;
        let exceeded = d
            .u
            .coeffs()
            .iter()
            .chain(d.v.coeffs())
            .any(|c| k.height_bits(c) > limit);
        if exceeded {
            return Err(Error::HeightCeilingExceeded { ceiling_digits: self.ceiling_digits });
        }
        Ok(())
    }
}

impl Jacobian<PrimeField> {
    /// ⌈(√p + 1)^{2g}⌉, an upper bound for #J(𝔽_p).
    pub fn weil_bound(&self) -> u64 {
        let p = self.field.modulus() as f64;
        ((p.sqrt() + 1.0).powi(2 * self.genus as i32)).ceil() as u64
    }

    /// Smallest n ≥ 1 with n·D = 0, by incremental addition up to the Weil bound.
    pub fn order_of(&self, d: &MumfordDivisor<u64>) -> Result<u64> {
        let bound = self.weil_bound();
        let mut cur = d.clone();
        let mut n = 1u64;
        while !cur.is_identity() {
            n += 1;
            if n > bound {
                return Err(Error::OrderBoundExceeded(bound));
            }
            cur = self.add(&cur, d)?;
        }
        Ok(n)
    }
}

/// Coefficient-wise reduction of a class over a tower at the place `w`.
pub fn reduce_divisor(
    tower: &Tower,
    d: &MumfordDivisor<crate::tower::TowerElement>,
    w: &ResidueAssignment,
) -> Result<MumfordDivisor<u64>> {
    let field = w.field();
    let u = d.u.map(&field, |c| tower.reduce_element(c, w))?;
    let v = d.v.map(&field, |c| tower.reduce_element(c, w))?;
    if u.degree() != d.u.degree() {
        return Err(Error::Precondition("u drops degree under reduction".into()));
    }
    Ok(MumfordDivisor { u, v })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionVerdict {
    /// n·ι(P) = 0 exactly, and n is the exact order.
    CertifiedTorsion(u64),
    /// The exact check failed at the reduction order, so ι(P) has infinite order.
    NotTorsion { reduced_order: u64 },
    Undecidable(String),
}

/// Decides whether ι(P) = P − P∞ is torsion in J(F).
///
/// Reduction at a good odd place of degree one is injective on torsion, so a
/// torsion class has exactly the order of its reduction n. Computing n·ι(P)
/// exactly over F therefore either certifies torsion of order n or refutes
/// torsion outright.
pub fn torsion_decide(
    point: &CurvePoint,
    curve: &HyperellipticCurve,
    tower: &Tower,
    w: &ResidueAssignment,
    height_ceiling_digits: Option<u64>,
) -> Result<TorsionVerdict> {
    if curve.model() != Model::Odd {
        return Ok(TorsionVerdict::Undecidable("even-degree model".into()));
    }
    if tower.num_generators() > 1 {
        return Ok(TorsionVerdict::Undecidable(format!(
            "exact arithmetic needs at most one generator, tower has {}",
            tower.num_generators()
        )));
    }
    let p = w.prime();
    if !curve.has_good_reduction(p)? {
        return Err(Error::BadReduction(p));
    }
    if !tower.split_places(p)?.contains(w) {
        return Err(Error::Precondition(format!("{} is not a split place of the tower", tower.describe_place(w))));
    }
    if !curve.contains(point, tower)? {
        return Err(Error::NotOnCurve(point.display(tower)));
    }
    let (x, y) = match point {
        CurvePoint::InfinityOdd => return Ok(TorsionVerdict::CertifiedTorsion(1)),
        CurvePoint::Affine { x, y } => (x, y),
        _ => return Err(Error::UnsupportedModel("even-model infinity on an odd model".into())),
    };
    let field = w.field();
    let jac_p = Jacobian::new(curve, field)?;
    let reduced = jac_p.embed_affine(&tower.reduce_element(x, w)?, &tower.reduce_element(y, w)?)?;
    let n = jac_p.order_of(&reduced)?;

    let mut jac = Jacobian::new(curve, tower.clone())?;
    if let Some(digits) = height_ceiling_digits {
        jac = jac.with_height_ceiling(digits);
    }
    let exact = jac.embed_affine(x, y)?;
    match jac.scalar_mul(n, &exact) {
        Ok(m) if m.is_identity() => Ok(TorsionVerdict::CertifiedTorsion(n)),
        Ok(_) => Ok(TorsionVerdict::NotTorsion { reduced_order: n }),
        Err(e @ (Error::ZeroDivisor { .. } | Error::HeightCeilingExceeded { .. })) => {
            Ok(TorsionVerdict::Undecidable(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

//! Hyperelliptic curves y² = f(x) over ℚ and their points.
//!
//! Odd models (deg f = 2g+1) have a single point at infinity, the point
//! (0, 0) of the chart w² = a₀v + … + a_{2g+1}v^{2g+2} under
//! (v, w) = (1/x, y/x^{g+1}). Even models (deg f = 2g+2) have the two
//! points (0, ±√a₀) of w² = a₀ + a₁v + … in the same chart; they are only
//! modelled when a₀ is a rational square.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{
    legendre_in, poly_discriminant, rational_sqrt, Field, PolyFp, PolyQ, PrimeField, Rational,
    RationalField,
};
use crate::error::{Error, Result};
use crate::tower::{ResidueAssignment, Tower, TowerElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// deg f = 2g + 1
    Odd,
    /// deg f = 2g + 2
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: PolyQ,
    genus: usize,
    model: Model,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Affine { x: TowerElement, y: TowerElement },
    InfinityOdd,
    InfinityEvenPlus,
    InfinityEvenMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReducedPoint {
    Affine { x: u64, y: u64 },
    InfinityOdd,
    InfinityEvenPlus,
    InfinityEvenMinus,
}

impl fmt::Display for ReducedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedPoint::Affine { x, y } => write!(f, "({x}, {y})"),
            ReducedPoint::InfinityOdd => write!(f, "P_inf"),
            ReducedPoint::InfinityEvenPlus => write!(f, "P_+inf"),
            ReducedPoint::InfinityEvenMinus => write!(f, "P_-inf"),
        }
    }
}

impl CurvePoint {
    pub fn affine(x: TowerElement, y: TowerElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, CurvePoint::Affine { .. })
    }

    pub fn display(&self, tower: &Tower) -> String {
        match self {
            CurvePoint::Affine { x, y } => format!("({}, {})", tower.format(x), tower.format(y)),
            CurvePoint::InfinityOdd => "P_inf".into(),
            CurvePoint::InfinityEvenPlus => "P_+inf".into(),
            CurvePoint::InfinityEvenMinus => "P_-inf".into(),
        }
    }
}

impl HyperellipticCurve {
    /// Accepts squarefree f of degree ≥ 5, so g ≥ 2.
    pub fn new(f: PolyQ) -> Result<Self> {
        let deg = f.deg0();
        if f.degree().is_none_or(|d| d < 5) {
            return Err(Error::DegreeTooSmall { found: deg, required: 5 });
        }
        if !crate::algebra::is_squarefree(&f) {
            return Err(Error::NotSquarefree);
        }
        let genus = deg.div_ceil(2) - 1;
        let model = if deg % 2 == 1 { Model::Odd } else { Model::Even };
        Ok(Self { f, genus, model })
    }

    pub fn f(&self) -> &PolyQ {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn leading_coefficient(&self) -> &Rational {
        self.f.lc().expect("curve polynomial is nonzero")
    }

    /// Whether the points at infinity of an even model are ℚ-rational.
    pub fn rational_infinity(&self) -> bool {
        match self.model {
            Model::Odd => true,
            Model::Even => rational_sqrt(self.leading_coefficient()).is_some(),
        }
    }

    /// f with coefficients moved into the tower ring.
    pub fn f_over(&self, tower: &Tower) -> crate::algebra::Poly<TowerElement> {
        self.f.map(tower, |c| tower.from_rational(c)).expect("rationals embed into every tower")
    }

    /// Membership as an exact identity in the tower ring.
    pub fn contains(&self, point: &CurvePoint, tower: &Tower) -> Result<bool> {
        match point {
            CurvePoint::Affine { x, y } => {
                tower.check(x)?;
                tower.check(y)?;
                let fx = self.f_over(tower).eval(tower, x);
                Ok(tower.mul(y, y) == fx)
            }
            CurvePoint::InfinityOdd => Ok(self.model == Model::Odd),
            CurvePoint::InfinityEvenPlus | CurvePoint::InfinityEvenMinus => {
                if self.model != Model::Even {
                    return Ok(false);
                }
                if !self.rational_infinity() {
                    return Err(Error::UnsupportedModel(
                        "points at infinity of an even model need a rational square leading coefficient".into(),
                    ));
                }
                Ok(true)
            }
        }
    }

    /// Sufficient criterion for good reduction: p ∤ 2·lc(f)·disc(f), with f p-integral.
    pub fn has_good_reduction(&self, p: u64) -> Result<bool> {
        let field = PrimeField::new(p)?;
        if self.f.coeffs().iter().any(|c| field.from_rational(c).is_err()) {
            return Ok(false);
        }
        if field.from_rational(self.leading_coefficient())? == 0 {
            return Ok(false);
        }
        let disc = poly_discriminant(&self.f)?;
        Ok(field.from_rational(&disc)? != 0)
    }

    pub fn reduce_f(&self, field: &PrimeField) -> Result<PolyFp> {
        crate::algebra::reduce_poly_mod_p(&self.f, field)
    }

    /// #C̃(𝔽_p) on the smooth model; requires good reduction at p.
    pub fn count_points_mod_p(&self, p: u64) -> Result<u64> {
        if !self.has_good_reduction(p)? {
            return Err(Error::BadReduction(p));
        }
        let field = PrimeField::new(p)?;
        Ok(count_points_of_reduction(&field, &self.reduce_f(&field)?, self.model))
    }

    pub fn is_weierstrass(&self, point: &CurvePoint) -> bool {
        match point {
            CurvePoint::Affine { y, .. } => y.is_zero(),
            CurvePoint::InfinityOdd => true,
            CurvePoint::InfinityEvenPlus | CurvePoint::InfinityEvenMinus => false,
        }
    }

    /// Reduction at the place `w`; the image is checked against the reduced equation.
    pub fn reduce_point(&self, point: &CurvePoint, tower: &Tower, w: &ResidueAssignment) -> Result<ReducedPoint> {
        let field = w.field();
        let reduced = match point {
            CurvePoint::Affine { x, y } => ReducedPoint::Affine {
                x: tower.reduce_element(x, w)?,
                y: tower.reduce_element(y, w)?,
            },
            CurvePoint::InfinityOdd => ReducedPoint::InfinityOdd,
            CurvePoint::InfinityEvenPlus => ReducedPoint::InfinityEvenPlus,
            CurvePoint::InfinityEvenMinus => ReducedPoint::InfinityEvenMinus,
        };
        if !self.reduced_contains(&field, &reduced)? {
            return Err(Error::NotOnCurve(format!(
                "reduction {reduced} does not satisfy the reduced equation mod {}",
                field.modulus()
            )));
        }
        Ok(reduced)
    }

    pub fn reduced_contains(&self, field: &PrimeField, point: &ReducedPoint) -> Result<bool> {
        let fb = self.reduce_f(field)?;
        Ok(match point {
            ReducedPoint::Affine { x, y } => field.mul(y, y) == fb.eval(field, x),
            ReducedPoint::InfinityOdd => self.model == Model::Odd,
            ReducedPoint::InfinityEvenPlus | ReducedPoint::InfinityEvenMinus => {
                self.model == Model::Even && legendre_in(field, *fb.lc().expect("nonzero")) == 1
            }
        })
    }
}

/// Σ_x (1 + (f̄(x)/p)) plus the points at infinity of the smooth model.
pub fn count_points_of_reduction(field: &PrimeField, fb: &PolyFp, model: Model) -> u64 {
    let affine: i64 = (0..field.modulus())
        .map(|x| 1 + legendre_in(field, fb.eval(field, &x)) as i64)
        .sum();
    let infinity = match model {
        Model::Odd => 1,
        Model::Even => match legendre_in(field, *fb.lc().expect("nonzero")) {
            1 => 2,
            -1 => 0,
            _ => unreachable!("leading coefficient survives reduction"),
        },
    };
    affine as u64 + infinity
}

/// Rational points of the curve among a rational x-range; used for searches.
pub fn rational_points_with_integer_x(curve: &HyperellipticCurve, xs: impl IntoIterator<Item = i64>) -> Vec<(Rational, Rational)> {
    let k = RationalField;
    let mut out = Vec::new();
    for x in xs {
        let xq = crate::algebra::rat(x);
        let fx = curve.f.eval(&k, &xq);
        if let Some(y) = rational_sqrt(&fx) {
            if !y.is_zero() {
                out.push((xq.clone(), -y.clone()));
            }
            out.push((xq, y));
        }
    }
    out
}

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::algebra::{fmt_poly_q, fmt_rational, rational_roots, Field, Rational, RationalField};
use crate::curve::CurvePoint;
use crate::error::{Error, Result};

use super::{TorsionSetEntry, TpeDocument, VerificationReport};

/// A ℚ-rational point of the model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RationalPoint {
    Infinity,
    InfinityPlus,
    InfinityMinus,
    Affine { x: Rational, y: Rational },
}

impl RationalPoint {
    pub fn affine(x: i64, y: i64) -> Self {
        RationalPoint::Affine { x: Rational::from_integer(x.into()), y: Rational::from_integer(y.into()) }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => write!(f, "P_inf"),
            RationalPoint::InfinityPlus => write!(f, "P_+inf"),
            RationalPoint::InfinityMinus => write!(f, "P_-inf"),
            RationalPoint::Affine { x, y } => write!(f, "({}, {})", fmt_rational(x), fmt_rational(y)),
        }
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankZeroConclusion {
    pub statement: String,
    pub points: BTreeSet<RationalPoint>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub statement: String,
    pub torsion_set: Vec<String>,
    pub rational_members: BTreeSet<RationalPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_zero: Option<RankZeroConclusion>,
}

fn rational_member(doc: &TpeDocument, point: &CurvePoint) -> Option<RationalPoint> {
    match point {
        CurvePoint::Affine { x, y } => Some(RationalPoint::Affine { x: x.as_rational()?, y: y.as_rational()? }),
        CurvePoint::InfinityOdd => Some(RationalPoint::Infinity),
        CurvePoint::InfinityEvenPlus => doc.curve().rational_infinity().then_some(RationalPoint::InfinityPlus),
        CurvePoint::InfinityEvenMinus => doc.curve().rational_infinity().then_some(RationalPoint::InfinityMinus),
    }
}

/// C(ℚ) ∩ J(ℚ)_tors ⊆ T from an all-pass report, with the rational members of
/// T; a rank-zero assertion upgrades this to equality.
pub fn theorem_conclusion(report: &VerificationReport, doc: &TpeDocument) -> Result<Conclusion> {
    if !report.passed {
        return Err(Error::Precondition("the report has failing conditions".into()));
    }
    let k = RationalField;
    let tower = doc.tower();
    let mut torsion_set = Vec::new();
    let mut rational = BTreeSet::new();
    for e in doc.entries() {
        match e {
            TorsionSetEntry::ExplicitPoint { point, .. } => {
                let shown = point.display(tower);
                if !torsion_set.contains(&shown) {
                    torsion_set.push(shown);
                }
                rational.extend(rational_member(doc, point));
            }
            TorsionSetEntry::WeierstrassFamily { h } => {
                torsion_set.push(format!("(a, 0) for {} = 0", fmt_poly_q(h, "a")));
                for r in rational_roots(h) {
                    rational.insert(RationalPoint::Affine { x: r, y: Rational::zero() });
                }
            }
        }
    }
    for pt in &rational {
        if let RationalPoint::Affine { x, y } = pt {
            assert_eq!(k.mul(y, y), doc.curve().f().eval(&k, x), "rational member off the curve");
        }
    }
    let ra = doc.rank_assertion();
    let rank_zero = ra.claimed.then(|| RankZeroConclusion {
        statement: "rank J(Q) = 0, so C(Q) equals the rational members of T".into(),
        points: rational.clone(),
        provenance: if ra.source.is_empty() {
            "external rank input".into()
        } else {
            format!("external rank input: {}", ra.source)
        },
    });
    Ok(Conclusion {
        statement: "C(Q) ∩ J(Q)_tors ⊆ T".into(),
        torsion_set,
        rational_members: rational,
        rank_zero,
    })
}

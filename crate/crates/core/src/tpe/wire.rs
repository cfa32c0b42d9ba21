//! JSON encoding of TPE documents.
//!
//! Coefficients are JSON integers or strings (`"-12"`, `"3/4"`, arbitrary
//! size). Canonical form: integers that fit in i64 are numbers, everything
//! else is a reduced-fraction string; tower expressions use the tower's
//! canonical formatting; object keys follow declaration order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{fmt_rational, parse_rational, Poly, PolyQ, Rational, RationalField};
use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::tower::{Generator, Tower};

use super::{PlaceSpec, RankAssertion, TorsionCertificate, TorsionSetEntry, TpeDocument};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Coeff::Int(n) => Ok(Rational::from_integer(BigInt::from(*n))),
            Coeff::Text(s) => parse_rational(s),
        }
    }

    fn from_rational(q: &Rational) -> Self {
        match q.is_integer().then(|| q.numer().to_i64()).flatten() {
            Some(n) => Coeff::Int(n),
            None => Coeff::Text(fmt_rational(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveWire {
    pub f: Vec<Coeff>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointWire {
    Affine { x: String, y: String },
    Infinity,
    InfinityPlus,
    InfinityMinus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorWire {
    pub name: String,
    pub relation: Vec<Coeff>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerWire {
    pub generators: Vec<GeneratorWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting_field_of: Option<Vec<Coeff>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceWire {
    Directive(String),
    Residues(BTreeMap<String, u64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertificateWire {
    BasePoint,
    WeierstrassTwoTorsion,
    EvenModelInfinity,
    PrincipalDivisor { v: Vec<String>, m: u64 },
    CantorChecked { expected_order: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EntryWire {
    Point { point: PointWire, certificate: CertificateWire },
    WeierstrassFamily { h: Vec<Coeff> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentWire {
    pub curve: CurveWire,
    pub base_point: PointWire,
    pub tower: TowerWire,
    pub p: u64,
    pub place: PlaceWire,
    pub entries: Vec<EntryWire>,
    pub rank_assertion: RankAssertion,
}

fn poly_from_wire(cs: &[Coeff]) -> Result<PolyQ> {
    let cs = cs.iter().map(Coeff::to_rational).collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(&RationalField, cs))
}

fn poly_to_wire(f: &PolyQ) -> Vec<Coeff> {
    f.coeffs().iter().map(Coeff::from_rational).collect()
}

fn point_from_wire(w: &PointWire, tower: &Tower) -> Result<CurvePoint> {
    Ok(match w {
        PointWire::Affine { x, y } => CurvePoint::affine(tower.parse(x)?, tower.parse(y)?),
        PointWire::Infinity => CurvePoint::InfinityOdd,
        PointWire::InfinityPlus => CurvePoint::InfinityEvenPlus,
        PointWire::InfinityMinus => CurvePoint::InfinityEvenMinus,
    })
}

fn point_to_wire(p: &CurvePoint, tower: &Tower) -> PointWire {
    match p {
        CurvePoint::Affine { x, y } => PointWire::Affine { x: tower.format(x), y: tower.format(y) },
        CurvePoint::InfinityOdd => PointWire::Infinity,
        CurvePoint::InfinityEvenPlus => PointWire::InfinityPlus,
        CurvePoint::InfinityEvenMinus => PointWire::InfinityMinus,
    }
}

impl CurveWire {
    pub fn to_curve(&self) -> Result<HyperellipticCurve> {
        HyperellipticCurve::new(poly_from_wire(&self.f)?)
    }
}

impl TowerWire {
    pub fn to_tower(&self) -> Result<Tower> {
        let generators = self
            .generators
            .iter()
            .map(|g| Ok(Generator { name: g.name.clone(), relation: poly_from_wire(&g.relation)? }))
            .collect::<Result<Vec<_>>>()?;
        let tower = Tower::new(generators)?;
        match &self.splitting_field_of {
            Some(h) => tower.with_splitting_field(poly_from_wire(h)?),
            None => Ok(tower),
        }
    }
}

impl PointWire {
    /// Parses `inf`, `inf+`, `inf-` or `x,y` with tower expressions.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        Ok(match spec.trim() {
            "inf" => PointWire::Infinity,
            "inf+" => PointWire::InfinityPlus,
            "inf-" => PointWire::InfinityMinus,
            s => {
                let (x, y) = s
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("point `{s}` is not `x,y`, `inf`, `inf+` or `inf-`")))?;
                PointWire::Affine { x: x.trim().to_string(), y: y.trim().to_string() }
            }
        })
    }

    pub fn to_point(&self, tower: &Tower) -> Result<CurvePoint> {
        point_from_wire(self, tower)
    }
}

impl DocumentWire {
    pub fn into_document(self) -> Result<TpeDocument> {
        let curve = self.curve.to_curve()?;
        let tower = self.tower.to_tower()?;
        let base_point = point_from_wire(&self.base_point, &tower)?;
        let place = match self.place {
            PlaceWire::Directive(s) if s == "first" => PlaceSpec::First,
            PlaceWire::Directive(s) => {
                return Err(Error::InvalidDocument(format!("unknown place directive `{s}`")))
            }
            PlaceWire::Residues(r) => PlaceSpec::Residues(r),
        };
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(match e {
                    EntryWire::Point { point, certificate } => TorsionSetEntry::ExplicitPoint {
                        point: point_from_wire(point, &tower)?,
                        cert: match certificate {
                            CertificateWire::BasePoint => TorsionCertificate::BasePoint,
                            CertificateWire::WeierstrassTwoTorsion => TorsionCertificate::WeierstrassTwoTorsion,
                            CertificateWire::EvenModelInfinity => TorsionCertificate::EvenModelInfinity,
                            CertificateWire::PrincipalDivisor { v, m } => TorsionCertificate::PrincipalDivisor {
                                v: Poly::new(&tower, v.iter().map(|c| tower.parse(c)).collect::<Result<Vec<_>>>()?),
                                m: *m,
                            },
                            CertificateWire::CantorChecked { expected_order } => {
                                TorsionCertificate::CantorChecked { expected_order: *expected_order }
                            }
                        },
                    },
                    EntryWire::WeierstrassFamily { h } => TorsionSetEntry::WeierstrassFamily { h: poly_from_wire(h)? },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TpeDocument::new(curve, base_point, tower, self.p, place, entries, self.rank_assertion)
    }

    pub fn from_document(doc: &TpeDocument) -> Self {
        let tower = doc.tower();
        let entries = doc
            .entries()
            .iter()
            .map(|e| match e {
                TorsionSetEntry::ExplicitPoint { point, cert } => EntryWire::Point {
                    point: point_to_wire(point, tower),
                    certificate: match cert {
                        TorsionCertificate::BasePoint => CertificateWire::BasePoint,
                        TorsionCertificate::WeierstrassTwoTorsion => CertificateWire::WeierstrassTwoTorsion,
                        TorsionCertificate::EvenModelInfinity => CertificateWire::EvenModelInfinity,
                        TorsionCertificate::PrincipalDivisor { v, m } => CertificateWire::PrincipalDivisor {
                            v: v.coeffs().iter().map(|c| tower.format(c)).collect(),
                            m: *m,
                        },
                        TorsionCertificate::CantorChecked { expected_order } => {
                            CertificateWire::CantorChecked { expected_order: *expected_order }
                        }
                    },
                },
                TorsionSetEntry::WeierstrassFamily { h } => EntryWire::WeierstrassFamily { h: poly_to_wire(h) },
            })
            .collect();
        DocumentWire {
            curve: CurveWire { f: poly_to_wire(doc.curve().f()) },
            base_point: point_to_wire(doc.base_point(), tower),
            tower: TowerWire {
                generators: tower
                    .generators()
                    .iter()
                    .map(|g| GeneratorWire { name: g.name.clone(), relation: poly_to_wire(&g.relation) })
                    .collect(),
                splitting_field_of: tower.splitting_field_of().map(poly_to_wire),
            },
            p: doc.p(),
            place: match doc.place() {
                PlaceSpec::First => PlaceWire::Directive("first".into()),
                PlaceSpec::Residues(r) => PlaceWire::Residues(r.clone()),
            },
            entries,
            rank_assertion: doc.rank_assertion().clone(),
        }
    }
}

//! Torsion packet envelopes.
//!
//! A document names a curve C/ℚ, a rational base point P₀, a number tower F,
//! a prime p with a place w of F over it, and a finite set T of points, each
//! with a certificate that ι(P) = P − P₀ is torsion in J(F). The verifier
//! checks the five envelope conditions; when all hold, every rational point
//! whose class is torsion lies in T.

mod conclusion;
mod verify;
pub mod wire;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, PolyQ};
use crate::curve::{CurvePoint, HyperellipticCurve, Model};
use crate::error::{Error, Result};
use crate::tower::{Tower, TowerElement};

pub use conclusion::{theorem_conclusion, Conclusion, RankZeroConclusion, RationalPoint};
pub use verify::{
    verify_certificate, verify_tpe, ConditionResult, EntryResult, OrderBound, VerificationReport, VerifyOptions,
};

/// External claim about rank J(ℚ), carried through to the conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankAssertion {
    pub claimed: bool,
    pub source: String,
}

impl RankAssertion {
    pub fn unknown() -> Self {
        Self { claimed: false, source: String::new() }
    }

    pub fn rank_zero(source: impl Into<String>) -> Self {
        Self { claimed: true, source: source.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceSpec {
    /// The lexicographically smallest residue assignment.
    First,
    Residues(BTreeMap<String, u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TorsionCertificate {
    BasePoint,
    WeierstrassTwoTorsion,
    EvenModelInfinity,
    /// div(y − v(x)) = m(P − P∞) for the entry's point P.
    PrincipalDivisor { v: Poly<TowerElement>, m: u64 },
    CantorChecked { expected_order: u64 },
}

impl TorsionCertificate {
    pub fn name(&self) -> &'static str {
        match self {
            TorsionCertificate::BasePoint => "base_point",
            TorsionCertificate::WeierstrassTwoTorsion => "weierstrass_two_torsion",
            TorsionCertificate::EvenModelInfinity => "even_model_infinity",
            TorsionCertificate::PrincipalDivisor { .. } => "principal_divisor",
            TorsionCertificate::CantorChecked { .. } => "cantor_checked",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TorsionSetEntry {
    ExplicitPoint { point: CurvePoint, cert: TorsionCertificate },
    /// The deg h Weierstrass points (α, 0) with h(α) = 0.
    WeierstrassFamily { h: PolyQ },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TpeDocument {
    curve: HyperellipticCurve,
    base_point: CurvePoint,
    tower: Tower,
    p: u64,
    place: PlaceSpec,
    entries: Vec<TorsionSetEntry>,
    rank_assertion: RankAssertion,
}

impl TpeDocument {
    pub fn new(
        curve: HyperellipticCurve,
        base_point: CurvePoint,
        tower: Tower,
        p: u64,
        place: PlaceSpec,
        entries: Vec<TorsionSetEntry>,
        rank_assertion: RankAssertion,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDocument("the torsion set has no entries".into()));
        }
        let rational_base = match &base_point {
            CurvePoint::Affine { x, y } => x.as_rational().is_some() && y.as_rational().is_some(),
            CurvePoint::InfinityOdd => curve.model() == Model::Odd,
            CurvePoint::InfinityEvenPlus | CurvePoint::InfinityEvenMinus => {
                curve.model() == Model::Even && curve.rational_infinity()
            }
        };
        if !rational_base {
            return Err(Error::InvalidDocument("base point must be a rational point of the model".into()));
        }
        if !curve.contains(&base_point, &tower)? {
            return Err(Error::InvalidDocument("base point is not on the curve".into()));
        }
        for e in &entries {
            if let TorsionSetEntry::ExplicitPoint { point, cert } = e {
                if let CurvePoint::Affine { x, y } = point {
                    tower.check(x)?;
                    tower.check(y)?;
                }
                match cert {
                    TorsionCertificate::PrincipalDivisor { v, m } => {
                        if *m == 0 {
                            return Err(Error::InvalidDocument("principal divisor multiplicity must be >= 1".into()));
                        }
                        if v.degree().is_some_and(|d| d > curve.genus()) {
                            return Err(Error::InvalidDocument("principal divisor needs deg v <= g".into()));
                        }
                        for c in v.coeffs() {
                            tower.check(c)?;
                        }
                    }
                    TorsionCertificate::CantorChecked { expected_order: 0 } => {
                        return Err(Error::InvalidDocument("expected order must be >= 1".into()));
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { curve, base_point, tower, p, place, entries, rank_assertion })
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let wire: wire::DocumentWire =
            serde_json::from_str(src).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        wire.into_document()
    }

    /// Canonical JSON form; re-parsing it yields an equal document.
    pub fn to_json(&self) -> String {
        let wire = wire::DocumentWire::from_document(self);
        let mut s = serde_json::to_string_pretty(&wire).expect("wire types serialize");
        s.push('\n');
        s
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    pub fn base_point(&self) -> &CurvePoint {
        &self.base_point
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn place(&self) -> &PlaceSpec {
        &self.place
    }

    pub fn entries(&self) -> &[TorsionSetEntry] {
        &self.entries
    }

    pub fn rank_assertion(&self) -> &RankAssertion {
        &self.rank_assertion
    }

    pub fn with_rank_assertion(mut self, r: RankAssertion) -> Self {
        self.rank_assertion = r;
        self
    }

    pub fn with_place(mut self, place: PlaceSpec) -> Self {
        self.place = place;
        self
    }

    /// Replaces the entry list; used by tests that mutate certificates.
    pub fn with_entries(mut self, entries: Vec<TorsionSetEntry>) -> Result<Self> {
        self.entries = entries;
        Self::new(self.curve, self.base_point, self.tower, self.p, self.place, self.entries, self.rank_assertion)
    }

    /// #T: explicit points deduplicated by exact equality, plus deg h per family.
    pub fn torsion_set_size(&self) -> usize {
        let mut seen: Vec<&CurvePoint> = Vec::new();
        let mut n = 0;
        for e in &self.entries {
            match e {
                TorsionSetEntry::ExplicitPoint { point, .. } => {
                    if !seen.contains(&point) {
                        seen.push(point);
                        n += 1;
                    }
                }
                TorsionSetEntry::WeierstrassFamily { h } => n += h.deg0(),
            }
        }
        n
    }
}

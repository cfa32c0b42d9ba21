use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::{
    is_prime, is_squarefree, rational_sqrt, reduce_poly_mod_p, roots_mod_p, Field, Poly, PolyQ, PrimeField,
    RationalField,
};
use crate::curve::{CurvePoint, HyperellipticCurve, Model, ReducedPoint};
use crate::jacobian::{torsion_decide, TorsionVerdict, DEFAULT_HEIGHT_CEILING_DIGITS};
use crate::tower::{ResidueAssignment, Tower};

use super::{PlaceSpec, TorsionCertificate, TorsionSetEntry, TpeDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Overrides the document's place with the place of this index in canonical order.
    pub place_index: Option<usize>,
    pub height_ceiling_digits: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { place_index: None, height_ceiling_digits: DEFAULT_HEIGHT_CEILING_DIGITS }
    }
}

/// What a passing certificate proves about the order of ι(P).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderBound {
    Exactly(u64),
    Divides(u64),
}

impl fmt::Display for OrderBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderBound::Exactly(n) => write!(f, "order {n}"),
            OrderBound::Divides(n) => write!(f, "order divides {n}"),
        }
    }
}

impl Serialize for OrderBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryResult {
    pub index: usize,
    pub certificate: String,
    pub points: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderBound>,
    pub detail: String,
    pub reductions: Vec<String>,
    #[serde(skip)]
    pub reduced: Vec<ReducedPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: String,
    pub passed: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_point_count: Option<u64>,
    pub torsion_set_size: usize,
    pub conditions: Vec<ConditionResult>,
    pub entries: Vec<EntryResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn condition(&self, label_prefix: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.condition.starts_with(label_prefix))
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.condition, c.evidence))
            .collect();
        out.extend(
            self.entries
                .iter()
                .filter(|e| !e.passed)
                .map(|e| format!("entry {} ({}): {}", e.index, e.certificate, e.detail)),
        );
        out
    }
}

struct Context<'a> {
    doc: &'a TpeDocument,
    place: Option<&'a ResidueAssignment>,
    height_ceiling_digits: u64,
}

fn fail(index: usize, certificate: &str, points: Vec<String>, detail: impl Into<String>) -> EntryResult {
    EntryResult {
        index,
        certificate: certificate.into(),
        points,
        passed: false,
        order: None,
        detail: detail.into(),
        reductions: Vec::new(),
        reduced: Vec::new(),
    }
}

/// If P₊∞ − P₋∞ is certified torsion via div(y − v) with f − v² constant,
/// returns g + 1, a multiple of its order.
pub(crate) fn infinity_difference_bound(curve: &HyperellipticCurve) -> Option<u64> {
    if curve.model() != Model::Even {
        return None;
    }
    let k = RationalField;
    let f = curve.f();
    let m = f.deg0() / 2;
    let top = rational_sqrt(curve.leading_coefficient())?;
    // v = polynomial part of √f, solved from the top m + 1 coefficients.
    let mut v = vec![k.zero(); m + 1];
    v[m] = top.clone();
    for i in (0..m).rev() {
        let current = Poly::new(&k, v.clone()).square(&k);
        let diff = k.sub(&f.coeff(&k, m + i), &current.coeff(&k, m + i));
        v[i] = k.div(&diff, &k.mul(&k.from_i64(2), &top)).ok()?;
    }
    let v = Poly::new(&k, v);
    let r = f.sub(&k, &v.square(&k));
    (r.degree() == Some(0)).then_some(m as u64)
}

fn base_is_weierstrass(doc: &TpeDocument) -> bool {
    doc.curve.model() == Model::Odd && doc.curve.is_weierstrass(&doc.base_point)
}

fn base_is_even_infinity(doc: &TpeDocument) -> bool {
    matches!(doc.base_point, CurvePoint::InfinityEvenPlus | CurvePoint::InfinityEvenMinus)
}

/// Order bound for a Weierstrass point relative to the document's base point.
fn weierstrass_bound(doc: &TpeDocument) -> std::result::Result<OrderBound, String> {
    if base_is_weierstrass(doc) {
        return Ok(OrderBound::Divides(2));
    }
    if base_is_even_infinity(doc) {
        // 2W ~ P₊∞ + P₋∞, so 2(W − P±∞) = ±(P∓∞ − P±∞).
        return infinity_difference_bound(&doc.curve)
            .map(|n| OrderBound::Divides(2 * n))
            .ok_or_else(|| "f minus the square of its polynomial square-root part is not constant".into());
    }
    Err("base point is neither a Weierstrass point nor a point at infinity".into())
}

fn principal_divisor_check(
    doc: &TpeDocument,
    point: &CurvePoint,
    v: &Poly<crate::tower::TowerElement>,
    m: u64,
) -> std::result::Result<OrderBound, String> {
    let tower = &doc.tower;
    if doc.curve.model() != Model::Odd || doc.base_point != CurvePoint::InfinityOdd {
        return Err("principal divisor certificates need an odd model with base point P_inf".into());
    }
    let CurvePoint::Affine { x: a, y: b } = point else {
        return Err("principal divisor certificates need an affine point".into());
    };
    if &v.eval(tower, a) != b {
        return Err("v(a) differs from the point's y-coordinate".into());
    }
    let f = doc.curve.f_over(tower);
    let g = v.square(tower).sub(tower, &f);
    let deg_f = doc.curve.f().deg0() as u64;
    if m != deg_f {
        return Err(format!("multiplicity {m} differs from deg f = {deg_f}"));
    }
    // g = c·(x − a)^m, checked by exact division by the monic power.
    let lin = Poly::new(tower, vec![tower.neg(a), tower.one()]);
    let power = lin.pow(tower, m);
    let (q, r) = g.divmod(tower, &power).map_err(|e| e.to_string())?;
    if !r.is_zero() || q.degree() != Some(0) {
        return Err(format!("v(x)^2 - f(x) is not a constant multiple of (x - a)^{m}"));
    }
    Ok(OrderBound::Divides(m))
}

fn check_explicit(
    ctx: &Context<'_>,
    point: &CurvePoint,
    cert: &TorsionCertificate,
) -> std::result::Result<(OrderBound, String), String> {
    let doc = ctx.doc;
    let curve = &doc.curve;
    match cert {
        TorsionCertificate::BasePoint => {
            if point == &doc.base_point {
                Ok((OrderBound::Exactly(1), "point is the base point".into()))
            } else {
                Err("point differs from the base point".into())
            }
        }
        TorsionCertificate::WeierstrassTwoTorsion => {
            if point.is_infinite() || !curve.is_weierstrass(point) {
                return Err("point is not an affine Weierstrass point".into());
            }
            if point == &doc.base_point {
                return Err("the base point takes a base_point certificate".into());
            }
            weierstrass_bound(doc).map(|b| (b, "2W is linearly equivalent to the hyperelliptic class".into()))
        }
        TorsionCertificate::EvenModelInfinity => {
            if curve.model() != Model::Even
                || !matches!(point, CurvePoint::InfinityEvenPlus | CurvePoint::InfinityEvenMinus)
            {
                return Err("even-model infinity certificate on a point that is not P_+inf or P_-inf".into());
            }
            if !base_is_even_infinity(doc) {
                return Err("base point must be a point at infinity".into());
            }
            if point == &doc.base_point {
                return Err("the base point takes a base_point certificate".into());
            }
            infinity_difference_bound(curve)
                .map(|n| (OrderBound::Divides(n), format!("f - v^2 is constant with deg v = {n}")))
                .ok_or_else(|| "f minus the square of its polynomial square-root part is not constant".into())
        }
        TorsionCertificate::PrincipalDivisor { v, m } => principal_divisor_check(doc, point, v, *m)
            .map(|b| (b, format!("v(x)^2 - f(x) = c*(x - a)^{m}"))),
        TorsionCertificate::CantorChecked { expected_order } => {
            if curve.model() != Model::Odd || doc.base_point != CurvePoint::InfinityOdd {
                return Err("Cantor checks need an odd model with base point P_inf".into());
            }
            if doc.tower.num_generators() > 1 {
                return Err("Cantor checks need a tower with at most one generator".into());
            }
            let Some(w) = ctx.place else {
                return Err("no split place available for the Cantor check".into());
            };
            match torsion_decide(point, curve, &doc.tower, w, Some(ctx.height_ceiling_digits)) {
                Ok(TorsionVerdict::CertifiedTorsion(n)) if n == *expected_order => {
                    Ok((OrderBound::Exactly(n), format!("{n}*D = 0 by exact Cantor arithmetic")))
                }
                Ok(TorsionVerdict::CertifiedTorsion(n)) => {
                    Err(format!("certified torsion of order {n}, expected {expected_order}"))
                }
                Ok(TorsionVerdict::NotTorsion { reduced_order }) => Err(format!(
                    "not torsion: the reduction has order {reduced_order} but {reduced_order}*D != 0 exactly"
                )),
                Ok(TorsionVerdict::Undecidable(why)) => Err(format!("undecidable: {why}")),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

fn family_roots(curve: &HyperellipticCurve, h: &PolyQ, p: u64) -> std::result::Result<Vec<u64>, String> {
    let k = RationalField;
    if h.degree().is_none_or(|d| d == 0) {
        return Err("family polynomial must have degree >= 1".into());
    }
    if !is_squarefree(h) {
        return Err("family polynomial is not squarefree".into());
    }
    match curve.f().rem(&k, h) {
        Ok(r) if r.is_zero() => {}
        _ => return Err("family polynomial does not divide f".into()),
    }
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let hb = reduce_poly_mod_p(h, &field).map_err(|e| e.to_string())?;
    if hb.degree() != h.degree() {
        return Err(format!("leading coefficient of h vanishes mod {p}"));
    }
    let roots = roots_mod_p(&field, &hb);
    if roots.len() != h.deg0() {
        return Err(format!("h has {} distinct roots mod {p}, expected {}", roots.len(), h.deg0()));
    }
    Ok(roots)
}

/// Checks one entry of T. Point membership is checked first as an exact identity.
pub fn verify_certificate(entry: &TorsionSetEntry, doc: &TpeDocument, place: Option<&ResidueAssignment>, opts: &VerifyOptions) -> EntryResult {
    let ctx = Context { doc, place, height_ceiling_digits: opts.height_ceiling_digits };
    verify_entry(&ctx, 0, entry)
}

fn verify_entry(ctx: &Context<'_>, index: usize, entry: &TorsionSetEntry) -> EntryResult {
    let doc = ctx.doc;
    let tower = &doc.tower;
    match entry {
        TorsionSetEntry::ExplicitPoint { point, cert } => {
            let shown = vec![point.display(tower)];
            match doc.curve.contains(point, tower) {
                Ok(true) => {}
                Ok(false) => return fail(index, cert.name(), shown, "point does not satisfy y^2 = f(x) in F"),
                Err(e) => return fail(index, cert.name(), shown, e.to_string()),
            }
            let (order, detail) = match check_explicit(ctx, point, cert) {
                Ok(x) => x,
                Err(why) => return fail(index, cert.name(), shown, why),
            };
            let mut reduced = Vec::new();
            if let Some(w) = ctx.place {
                match doc.curve.reduce_point(point, tower, w) {
                    Ok(r) => reduced.push(r),
                    Err(e) => return fail(index, cert.name(), shown, format!("reduction failed: {e}")),
                }
            }
            EntryResult {
                index,
                certificate: cert.name().into(),
                points: shown,
                passed: true,
                order: Some(order),
                detail,
                reductions: reduced.iter().map(|r| r.to_string()).collect(),
                reduced,
            }
        }
        TorsionSetEntry::WeierstrassFamily { h } => {
            let name = "weierstrass_family";
            let shown = vec![format!("(a, 0) for h(a) = 0, h = {}", crate::algebra::fmt_poly_q(h, "x"))];
            let roots = match family_roots(&doc.curve, h, doc.p) {
                Ok(r) => r,
                Err(why) => return fail(index, name, shown, why),
            };
            let order = match weierstrass_bound(doc) {
                Ok(b) => b,
                Err(why) => return fail(index, name, shown, why),
            };
            let reduced: Vec<ReducedPoint> = roots.iter().map(|&x| ReducedPoint::Affine { x, y: 0 }).collect();
            EntryResult {
                index,
                certificate: name.into(),
                points: shown,
                passed: true,
                order: Some(order),
                detail: format!("{} Weierstrass points, reductions are the roots of h mod {}", h.deg0(), doc.p),
                reductions: reduced.iter().map(|r| r.to_string()).collect(),
                reduced,
            }
        }
    }
}

fn resolve_place(doc: &TpeDocument, opts: &VerifyOptions) -> std::result::Result<(ResidueAssignment, usize), String> {
    let places = doc.tower.split_places(doc.p).map_err(|e| e.to_string())?;
    if places.is_empty() {
        return Err(format!("{} does not split completely in F", doc.p));
    }
    let n = places.len();
    if let Some(i) = opts.place_index {
        return places
            .get(i)
            .cloned()
            .map(|w| (w, n))
            .ok_or_else(|| format!("place index {i} out of range ({n} places)"));
    }
    match &doc.place {
        PlaceSpec::First => Ok((places[0].clone(), n)),
        PlaceSpec::Residues(r) => {
            let w = doc.tower.place_from_residues(doc.p, r).map_err(|e| e.to_string())?;
            if places.contains(&w) {
                Ok((w, n))
            } else {
                Err("residue assignment is not a split place".into())
            }
        }
    }
}

fn describe_tower(tower: &Tower) -> String {
    let gens: Vec<String> = tower
        .generators()
        .iter()
        .map(|g| format!("{}: {}", g.name, crate::algebra::fmt_poly_q(&g.relation, &g.name)))
        .collect();
    let mut s = if gens.is_empty() {
        "F = Q".to_string()
    } else {
        format!("{} generator(s) [{}], dimension {}", gens.len(), gens.join("; "), tower.dimension())
    };
    if let Some(h) = tower.splitting_field_of() {
        s.push_str(&format!("; adjoined roots of {}", crate::algebra::fmt_poly_q(h, "x")));
    }
    s
}

/// Checks conditions (1)–(5) and the consistency #T = #C̃(𝔽_w) with distinct reductions.
pub fn verify_tpe(doc: &TpeDocument, opts: &VerifyOptions) -> VerificationReport {
    let p = doc.p;
    let mut conditions = Vec::new();
    conditions.push(ConditionResult {
        condition: "(1) F is a finite extension of Q".into(),
        passed: true,
        evidence: describe_tower(&doc.tower),
    });

    let p_odd = p != 2 && is_prime(p);
    let place = if p_odd { resolve_place(doc, opts) } else { Err(format!("{p} is not an odd prime")) };
    conditions.push(match &place {
        Ok((w, n)) => ConditionResult {
            condition: "(2) p is odd and completely split in F".into(),
            passed: true,
            evidence: format!("{n} place(s) over {p}; using {}", doc.tower.describe_place(w)),
        },
        Err(why) => ConditionResult {
            condition: "(2) p is odd and completely split in F".into(),
            passed: false,
            evidence: why.clone(),
        },
    });
    let w = place.as_ref().ok().map(|(w, _)| w);

    let good = p_odd && doc.curve.has_good_reduction(p).unwrap_or(false);
    conditions.push(ConditionResult {
        condition: "(3) C has good reduction at p".into(),
        passed: good,
        evidence: if good {
            format!("{p} does not divide 2, lc(f) or disc(f)")
        } else {
            format!("bad or undefined reduction at {p}")
        },
    });

    let ctx = Context { doc, place: w, height_ceiling_digits: opts.height_ceiling_digits };
    let entries: Vec<EntryResult> = doc
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| verify_entry(&ctx, i, e))
        .collect();
    let bad: Vec<usize> = entries.iter().filter(|e| !e.passed).map(|e| e.index).collect();
    conditions.push(ConditionResult {
        condition: "(4) iota(T) lies in J(F)_tors".into(),
        passed: bad.is_empty(),
        evidence: if bad.is_empty() {
            format!("all {} certificates verified", entries.len())
        } else {
            format!("failing entries: {bad:?}")
        },
    });

    let t_size = doc.torsion_set_size();
    let count = if good { doc.curve.count_points_mod_p(p).ok() } else { None };
    conditions.push(match count {
        Some(c) => ConditionResult {
            condition: "(5) #T >= #C~(F_w)".into(),
            passed: t_size as u64 >= c,
            evidence: format!("#T = {t_size}, #C~(F_{p}) = {c}"),
        },
        None => ConditionResult {
            condition: "(5) #T >= #C~(F_w)".into(),
            passed: false,
            evidence: "reduced curve is not defined".into(),
        },
    });

    let consistency = match (count, w) {
        (Some(c), Some(_)) if bad.is_empty() => {
            // Repeated explicit entries denote one member of T.
            let mut seen: Vec<&CurvePoint> = Vec::new();
            let mut all: Vec<ReducedPoint> = Vec::new();
            for (e, r) in doc.entries.iter().zip(&entries) {
                if let TorsionSetEntry::ExplicitPoint { point, .. } = e {
                    if seen.contains(&point) {
                        continue;
                    }
                    seen.push(point);
                }
                all.extend(r.reduced.iter().copied());
            }
            let total = all.len();
            all.sort();
            all.dedup();
            if all.len() != total {
                ConditionResult {
                    condition: "consistency".into(),
                    passed: false,
                    evidence: "inconsistent certificates: two members of T share a reduction".into(),
                }
            } else if t_size as u64 != c {
                ConditionResult {
                    condition: "consistency".into(),
                    passed: false,
                    evidence: format!("inconsistent certificates: #T = {t_size} but #C~(F_{p}) = {c}"),
                }
            } else {
                ConditionResult {
                    condition: "consistency".into(),
                    passed: true,
                    evidence: format!("T maps bijectively onto the {c} points of C~(F_{p})"),
                }
            }
        }
        _ => ConditionResult {
            condition: "consistency".into(),
            passed: false,
            evidence: "not evaluated: an earlier condition failed".into(),
        },
    };
    conditions.push(consistency);

    let passed = conditions.iter().all(|c| c.passed);
    VerificationReport {
        p,
        place: w.map(|w| doc.tower.describe_place(w)),
        reduced_point_count: count,
        torsion_set_size: t_size,
        conditions,
        entries,
        passed,
    }
}

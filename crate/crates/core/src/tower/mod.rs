//! Number fields as radical/cyclotomic tower rings ℚ[t₁,…,t_k]/(m₁(t₁),…,m_k(t_k)).
//!
//! Every relation is a monic squarefree polynomial with rational coefficients
//! in its own generator. The ring is a field only when the relations stay
//! irreducible over the compositum; identities proven in the ring hold in
//! every quotient field, so verification never depends on field-ness. Exact
//! inversion is provided for towers with at most one generator and reports a
//! zero divisor when the relation turns out to be reducible.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    fmt_rational, is_squarefree, poly_discriminant, reduce_poly_mod_p, roots_mod_p,
    splits_completely_fp, Field, FpElt, PolyQ, PrimeField, Rational, RationalField,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub relation: PolyQ,
}

/// An element: a table from multi-exponent `(e₁,…,e_k)`, `0 ≤ eᵢ < dᵢ`, to a
/// nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TowerElement {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl TowerElement {
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// A choice of place w over p: one root of each relation modulo p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueAssignment {
    p: u64,
    residues: Vec<u64>,
}

impl ResidueAssignment {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("assignments are built for odd primes")
    }
}

struct Inner {
    generators: Vec<Generator>,
    degrees: Vec<usize>,
    // power_tables[i][e] = tᵢ^e reduced by mᵢ, as sparse (exponent, coefficient) pairs.
    power_tables: Vec<Vec<Vec<(u32, Rational)>>>,
    splitting_field_of: Option<PolyQ>,
}

/// A validated tower specification. Cloning is cheap.
#[derive(Clone)]
pub struct Tower {
    inner: Arc<Inner>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("generators", &self.inner.generators)
            .field("splitting_field_of", &self.inner.splitting_field_of)
            .finish()
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.generators == other.inner.generators
                && self.inner.splitting_field_of == other.inner.splitting_field_of)
    }
}

impl Eq for Tower {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Tower {
    /// The trivial tower, F = ℚ.
    pub fn rationals() -> Self {
        Self::new(Vec::new()).expect("empty tower is valid")
    }

    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        let k = RationalField;
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(Error::InvalidTower(format!("invalid generator name `{}`", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidTower(format!("duplicate generator `{}`", g.name)));
            }
            match g.relation.degree() {
                None | Some(0) => {
                    return Err(Error::InvalidTower(format!(
                        "relation for `{}` must have degree at least 1",
                        g.name
                    )))
                }
                Some(_) => {}
            }
            if !g.relation.lc().is_some_and(|c| c.is_one()) {
                return Err(Error::InvalidTower(format!("relation for `{}` is not monic", g.name)));
            }
            if !is_squarefree(&g.relation) {
                return Err(Error::InvalidTower(format!(
                    "relation for `{}` is not squarefree",
                    g.name
                )));
            }
        }
        let degrees: Vec<usize> = generators.iter().map(|g| g.relation.deg0()).collect();
        let power_tables = generators
            .iter()
            .zip(&degrees)
            .map(|(g, &d)| {
                let mut table = Vec::with_capacity(2 * d - 1);
                let mut cur = vec![Rational::zero(); d];
                cur[0] = Rational::one();
                for _ in 0..(2 * d - 1) {
                    table.push(
                        cur.iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(e, c)| (e as u32, c.clone()))
                            .collect(),
                    );
                    // multiply by t and reduce t^d = -(m - t^d)
                    let top = cur.pop().expect("degree >= 1");
                    cur.insert(0, Rational::zero());
                    if !top.is_zero() {
                        for (j, c) in cur.iter_mut().enumerate() {
                            *c -= &top * g.relation.coeff(&k, j);
                        }
                    }
                }
                table
            })
            .collect();
        Ok(Self {
            inner: Arc::new(Inner { generators, degrees, power_tables, splitting_field_of: None }),
        })
    }

    /// Attaches a family-level attestation that F is (or contains) the
    /// splitting field of `h`. No generators are introduced for it; places are
    /// certified by checking that `h` splits into distinct linear factors mod p.
    pub fn with_splitting_field(self, h: PolyQ) -> Result<Self> {
        if h.degree().is_none_or(|d| d == 0) || !is_squarefree(&h) {
            return Err(Error::InvalidTower(
                "attested splitting-field polynomial must be squarefree of degree >= 1".into(),
            ));
        }
        let inner = &self.inner;
        Ok(Self {
            inner: Arc::new(Inner {
                generators: inner.generators.clone(),
                degrees: inner.degrees.clone(),
                power_tables: inner.power_tables.clone(),
                splitting_field_of: Some(h),
            }),
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.inner.generators
    }

    pub fn num_generators(&self) -> usize {
        self.inner.generators.len()
    }

    pub fn splitting_field_of(&self) -> Option<&PolyQ> {
        self.inner.splitting_field_of.as_ref()
    }

    /// ℚ-dimension of the tower ring, ∏ dᵢ.
    pub fn dimension(&self) -> usize {
        self.inner.degrees.iter().product()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.inner.generators.iter().position(|g| g.name == name)
    }

    pub fn generator(&self, name: &str) -> Result<TowerElement> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| Error::TowerMismatch(format!("no generator named `{name}`")))?;
        let mut exps = vec![0u32; self.num_generators()];
        let mut out = TowerElement::default();
        if self.inner.degrees[i] == 1 {
            // t = -m(0) when the relation is linear
            let c = -self.inner.generators[i].relation.coeff(&RationalField, 0);
            out.add_term(exps, c);
        } else {
            exps[i] = 1;
            out.add_term(exps, Rational::one());
        }
        Ok(out)
    }

    pub fn rational(&self, q: Rational) -> TowerElement {
        let mut out = TowerElement::default();
        out.add_term(vec![0; self.num_generators()], q);
        out
    }

    /// Rejects elements whose exponent vectors do not fit this tower.
    pub fn check(&self, a: &TowerElement) -> Result<()> {
        for e in a.terms.keys() {
            if e.len() != self.num_generators()
                || e.iter().zip(&self.inner.degrees).any(|(&x, &d)| x as usize >= d)
            {
                return Err(Error::TowerMismatch(format!(
                    "exponent vector {e:?} does not fit degrees {:?}",
                    self.inner.degrees
                )));
            }
        }
        Ok(())
    }

    /// Builds an element from explicit terms, reducing out-of-range exponents.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<TowerElement> {
        let mut acc = TowerElement::default();
        for (exps, c) in terms {
            if exps.len() != self.num_generators() {
                return Err(Error::TowerMismatch(format!(
                    "expected {} exponents, got {}",
                    self.num_generators(),
                    exps.len()
                )));
            }
            let mut term = self.rational(c);
            for (i, &e) in exps.iter().enumerate() {
                let name = &self.inner.generators[i].name;
                term = self.mul(&term, &self.pow(&self.generator(name)?, e as u64));
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &TowerElement, mut n: u64) -> TowerElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Splits an element of a one-generator tower into its representing polynomial.
    fn as_poly(&self, a: &TowerElement) -> PolyQ {
        let mut coeffs = vec![Rational::zero(); self.inner.degrees[0]];
        for (e, c) in &a.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        PolyQ::new(&RationalField, coeffs)
    }

    /// All places over p, or an empty list when p does not split completely.
    /// Assignments are ordered lexicographically by residue, so index 0 is the
    /// canonical first place.
    pub fn split_places(&self, p: u64) -> Result<Vec<ResidueAssignment>> {
        let field = PrimeField::new(p)?;
        let mut per_generator: Vec<Vec<u64>> = Vec::with_capacity(self.num_generators());
        let mut splits = true;
        for g in &self.inner.generators {
            let reduced = reduce_poly_mod_p(&g.relation, &field)?;
            if g.relation.deg0() >= 2 {
                let disc = poly_discriminant(&g.relation)?;
                if field.from_rational(&disc)? == 0 {
                    return Err(Error::Ramified { p, generator: g.name.clone() });
                }
            }
            if !splits_completely_fp(&field, &reduced) {
                splits = false;
            }
            per_generator.push(roots_mod_p(&field, &reduced));
        }
        if let Some(h) = &self.inner.splitting_field_of {
            let reduced = reduce_poly_mod_p(h, &field)?;
            if h.deg0() >= 2 && field.from_rational(&poly_discriminant(h)?)? == 0 {
                return Err(Error::Ramified { p, generator: "splitting field".into() });
            }
            if !splits_completely_fp(&field, &reduced) {
                splits = false;
            }
        }
        if !splits {
            return Ok(Vec::new());
        }
        let mut places = vec![Vec::new()];
        for roots in &per_generator {
            places = places
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    roots.iter().map(move |&r| {
                        let mut v = prefix.clone();
                        v.push(r);
                        v
                    })
                })
                .collect();
        }
        Ok(places.into_iter().map(|residues| ResidueAssignment { p, residues }).collect())
    }

    /// Validates an explicitly supplied place.
    pub fn place_from_residues(&self, p: u64, residues: &BTreeMap<String, u64>) -> Result<ResidueAssignment> {
        let field = PrimeField::new(p)?;
        if residues.len() != self.num_generators() {
            return Err(Error::TowerMismatch(format!(
                "place names {} residues but the tower has {} generators",
                residues.len(),
                self.num_generators()
            )));
        }
        let mut out = Vec::new();
        for g in &self.inner.generators {
            let r = *residues
                .get(&g.name)
                .ok_or_else(|| Error::TowerMismatch(format!("place lacks a residue for `{}`", g.name)))?;
            let r = r % p;
            let reduced = reduce_poly_mod_p(&g.relation, &field)?;
            if reduced.eval(&field, &r) != 0 {
                return Err(Error::Precondition(format!(
                    "residue {r} is not a root of the relation for `{}` mod {p}",
                    g.name
                )));
            }
            out.push(r);
        }
        Ok(ResidueAssignment { p, residues: out })
    }

    /// The reduction map F → 𝔽_p at the place `w`.
    pub fn reduce_element(&self, a: &TowerElement, w: &ResidueAssignment) -> Result<u64> {
        if w.residues.len() != self.num_generators() {
            return Err(Error::TowerMismatch("place does not match tower".into()));
        }
        let field = w.field();
        let mut acc = 0u64;
        for (e, c) in &a.terms {
            let mut term = field.from_rational(c)?;
            for (&x, &r) in e.iter().zip(&w.residues) {
                term = field.mul(&term, &field.pow(r, x as u64));
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn reduce_to_fp(&self, a: &TowerElement, w: &ResidueAssignment) -> Result<FpElt> {
        Ok(FpElt::from_residue(&w.field(), self.reduce_element(a, w)?))
    }

    pub fn parse(&self, src: &str) -> Result<TowerElement> {
        parse::parse_element(self, src)
    }

    /// Canonical text form: terms ordered by exponent vector, constant first.
    pub fn format(&self, a: &TowerElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &a.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = &self.inner.generators[i].name;
                    if x == 1 { name.clone() } else { format!("{name}^{x}") }
                })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&fmt_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&fmt_rational(&mag));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn describe_place(&self, w: &ResidueAssignment) -> String {
        let parts: Vec<String> = self
            .inner
            .generators
            .iter()
            .zip(&w.residues)
            .map(|(g, r)| format!("{}->{}", g.name, r))
            .collect();
        if parts.is_empty() {
            format!("p={}", w.p)
        } else {
            format!("p={} ({})", w.p, parts.join(", "))
        }
    }
}

impl Field for Tower {
    type Elem = TowerElement;

    fn zero(&self) -> TowerElement {
        TowerElement::default()
    }

    fn one(&self) -> TowerElement {
        self.rational(Rational::one())
    }

    fn is_zero(&self, a: &TowerElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &TowerElement) -> TowerElement {
        TowerElement { terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        let k = self.num_generators();
        let tables = &self.inner.power_tables;
        let mut out = TowerElement::default();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let mut partial: Vec<(Vec<u32>, Rational)> = vec![(Vec::with_capacity(k), ca * cb)];
                for i in 0..k {
                    let reduced = &tables[i][(ea[i] + eb[i]) as usize];
                    partial = partial
                        .into_iter()
                        .flat_map(|(exps, c)| {
                            reduced.iter().map(move |(x, r)| {
                                let mut exps = exps.clone();
                                exps.push(*x);
                                (exps, &c * r)
                            })
                        })
                        .collect();
                }
                for (exps, c) in partial {
                    out.add_term(exps, c);
                }
            }
        }
        out
    }

    fn inv(&self, a: &TowerElement) -> Result<TowerElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = a.as_rational() {
            return Ok(self.rational(q.recip()));
        }
        match self.num_generators() {
            1 => {
                let k = RationalField;
                let g = &self.inner.generators[0];
                let (gcd, s, _) = self.as_poly(a).xgcd(&k, &g.relation)?;
                if gcd.degree() != Some(0) {
                    return Err(Error::ZeroDivisor { generator: g.name.clone() });
                }
                let s = s.rem(&k, &g.relation)?;
                Ok(TowerElement {
                    terms: s
                        .coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (vec![i as u32], c.clone()))
                        .collect(),
                })
            }
            n => Err(Error::UnsupportedTower(n)),
        }
    }

    fn from_rational(&self, q: &Rational) -> Result<TowerElement> {
        Ok(self.rational(q.clone()))
    }

    fn height_bits(&self, a: &TowerElement) -> u64 {
        a.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

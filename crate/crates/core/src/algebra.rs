//! Graded-commutative monomial algebra over F_p.
//!
//! Elements are F_p-linear combinations of canonical monomials in the page
//! generators.  A monomial is a strictly increasing list of exterior
//! generators together with an exponent vector over polynomial generators.
//! Normalization sorts an arbitrary word into that form, picking up a Koszul
//! sign for every transposition of two odd-degree factors and killing words
//! with a repeated exterior factor.
//!
//! The canonical generator order (kind h before b, then first index, then
//! second index) is a global convention; any fixed total order gives the
//! same homology, but it must never change or signs stop being reproducible.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GenKind {
    H,
    B,
}

/// Identity of one algebra generator: h- or b-type with indices (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GenId {
    pub kind: GenKind,
    pub i: u16,
    pub j: u32,
}

impl GenId {
    pub fn h(i: u16, j: u32) -> Self {
        Self { kind: GenKind::H, i, j }
    }

    pub fn b(i: u16, j: u32) -> Self {
        Self { kind: GenKind::B, i, j }
    }
}

/// One generator with its degrees attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub id: GenId,
    /// Homological degree: 1 for h, 2 for b.
    pub s: u32,
    /// Internal degree reduced mod 2(p^n - 1).
    pub t_class: u64,
    /// Exact integer internal degree (meaningful for the polynomial flavor).
    pub t_int: u128,
    /// May filtration.
    pub may: u64,
    /// Exterior generators square to zero; polynomial ones do not.
    pub exterior: bool,
}

/// Resolves generator ids to specs; implemented by page presentations.
pub trait GenContext {
    fn p(&self) -> u32;
    /// Internal-degree modulus 2(p^n - 1).
    fn degree_modulus(&self) -> u64;
    fn spec(&self, id: GenId) -> Result<GeneratorSpec>;
    /// Whether generators render with a prime mark (polynomial-flavor pages).
    fn primed(&self) -> bool {
        false
    }
}

/// Canonical monomial: square-free exterior part, exponent map on
/// polynomial generators, both sorted by generator id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Monomial {
    pub ext: Vec<GenId>,
    pub poly: Vec<(GenId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.ext.is_empty() && self.poly.is_empty()
    }

    pub fn generator(ctx: &impl GenContext, id: GenId) -> Result<Self> {
        let spec = ctx.spec(id)?;
        Ok(if spec.exterior {
            Monomial { ext: vec![id], poly: vec![] }
        } else {
            Monomial { ext: vec![], poly: vec![(id, 1)] }
        })
    }

    /// Factors with multiplicity, in canonical order.
    pub fn factors(&self) -> Vec<(GenId, u32)> {
        let mut out: Vec<(GenId, u32)> = self.ext.iter().map(|&g| (g, 1)).collect();
        out.extend(self.poly.iter().copied());
        out.sort();
        out
    }

    pub fn degrees(&self, ctx: &impl GenContext) -> Result<Degrees> {
        let modulus = ctx.degree_modulus();
        let mut d = Degrees::default();
        for (id, e) in self.factors() {
            let spec = ctx.spec(id)?;
            let e64 = e as u64;
            d.s += spec.s * e;
            d.t_class = (d.t_class + spec.t_class % modulus * (e64 % modulus)) % modulus;
            d.t_int += spec.t_int * e as u128;
            d.may += spec.may * e64;
        }
        Ok(d)
    }

    pub fn render(&self, primed: bool) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mark = if primed { "'" } else { "" };
        let mut out = String::new();
        for (id, e) in self.factors() {
            let kind = match id.kind {
                GenKind::H => "h",
                GenKind::B => "b",
            };
            out.push_str(&format!("{kind}{mark}[{},{}]", id.i, id.j));
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
        out
    }
}

/// Degree vector of a monomial: homological s, internal class, integer
/// internal degree, May filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Degrees {
    pub s: u32,
    pub t_class: u64,
    pub t_int: u128,
    pub may: u64,
}

/// Finite F_p-linear combination of monomials.  No zero coefficients are
/// stored; the empty map is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), 1);
        Self { terms }
    }

    pub fn from_monomial(m: Monomial, coeff: u32, p: u32) -> Self {
        let mut e = Self::zero();
        e.add_term(m, coeff, p);
        e
    }

    pub fn generator(ctx: &impl GenContext, id: GenId) -> Result<Self> {
        Ok(Self::from_monomial(Monomial::generator(ctx, id)?, 1, ctx.p()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: u32, p: u32) {
        use std::collections::btree_map::Entry;
        let c = coeff % p;
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = (*e.get() + c) % p;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Element, p: u32) -> Element {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c, p);
        }
        out
    }

    pub fn scale(&self, c: u32, p: u32) -> Element {
        let mut out = Element::zero();
        for (m, c0) in self.terms() {
            out.add_term(m.clone(), (c0 as u64 * c as u64 % p as u64) as u32, p);
        }
        out
    }

    pub fn neg(&self, p: u32) -> Element {
        self.scale(p - 1, p)
    }

    pub fn sub(&self, other: &Element, p: u32) -> Element {
        self.add(&other.neg(p), p)
    }

    /// Common homological degree of all terms, if the element is homogeneous.
    pub fn homogeneous_s(&self, ctx: &impl GenContext) -> Result<Option<u32>> {
        let mut s = None;
        for (m, _) in self.terms() {
            let ds = m.degrees(ctx)?.s;
            match s {
                None => s = Some(ds),
                Some(prev) if prev != ds => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        Ok(s)
    }

    pub fn render(&self, primed: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms() {
            if c == 1 {
                parts.push(m.render(primed));
            } else {
                parts.push(format!("{c}*{}", m.render(primed)));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Sorts a word of generator powers into canonical form.
///
/// Returns `None` when the word vanishes (a repeated exterior factor),
/// otherwise the canonical monomial and the Koszul sign as a residue mod p.
/// Every transposition of two odd-homological-degree factors contributes a
/// factor -1; b-type and polynomial factors move freely.
pub fn normalize(
    ctx: &impl GenContext,
    word: &[(GenId, u32)],
) -> Result<Option<(Monomial, u32)>> {
    let p = ctx.p();
    // flatten, dropping zero exponents, and record parities
    let mut factors: Vec<(GenId, u32, bool)> = Vec::new();
    for &(id, e) in word {
        if e == 0 {
            continue;
        }
        let spec = ctx.spec(id)?;
        factors.push((id, e, spec.s % 2 == 1));
    }
    // insertion sort counting odd-odd transpositions; a block of exponent e
    // has parity e * s(gen), so crossing it flips the sign by that parity
    let mut sign_neg = false;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && factors[j - 1].0 > factors[j].0 {
            let a = &factors[j - 1];
            let b = &factors[j];
            let par_a = a.2 && a.1 % 2 == 1;
            let par_b = b.2 && b.1 % 2 == 1;
            if par_a && par_b {
                sign_neg = !sign_neg;
            }
            factors.swap(j - 1, j);
            j -= 1;
        }
    }
    // merge adjacent equal generators
    let mut ext = Vec::new();
    let mut poly: Vec<(GenId, u32)> = Vec::new();
    let mut idx = 0;
    while idx < factors.len() {
        let (id, mut e, _) = factors[idx];
        let spec = ctx.spec(id)?;
        let mut next = idx + 1;
        while next < factors.len() && factors[next].0 == id {
            e += factors[next].1;
            next += 1;
        }
        idx = next;
        if spec.exterior {
            if e >= 2 {
                return Ok(None);
            }
            ext.push(id);
        } else {
            poly.push((id, e));
        }
    }
    let sign = if sign_neg && p > 2 { p - 1 } else { 1 };
    Ok(Some((Monomial { ext, poly }, sign)))
}

/// Bilinear, sign-correct product of two elements.
pub fn multiply(ctx: &impl GenContext, a: &Element, b: &Element) -> Result<Element> {
    let p = ctx.p();
    let mut out = Element::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let mut word = ma.factors();
            word.extend(mb.factors());
            if let Some((m, sign)) = normalize(ctx, &word)? {
                let c = ca as u64 * cb as u64 % p as u64 * sign as u64 % p as u64;
                out.add_term(m, c as u32, p);
            }
        }
    }
    Ok(out)
}

pub fn multiply_all(ctx: &impl GenContext, factors: &[&Element]) -> Result<Element> {
    let mut acc = Element::one();
    for f in factors {
        acc = multiply(ctx, &acc, f)?;
    }
    Ok(acc)
}

#[cfg(test)]
pub(crate) mod test_ctx {
    use super::*;

    /// Minimal context for unit tests: all h's exterior of degree 1 unless
    /// listed as polynomial, all b's polynomial of degree 2.
    pub struct TestCtx {
        pub p: u32,
        pub modulus: u64,
        pub poly_h: Vec<GenId>,
    }

    impl GenContext for TestCtx {
        fn p(&self) -> u32 {
            self.p
        }

        fn degree_modulus(&self) -> u64 {
            self.modulus
        }

        fn spec(&self, id: GenId) -> Result<GeneratorSpec> {
            let (s, exterior) = match id.kind {
                GenKind::H => (1, !self.poly_h.contains(&id)),
                GenKind::B => (2, false),
            };
            Ok(GeneratorSpec {
                id,
                s,
                t_class: 0,
                t_int: 0,
                may: 2 * id.i as u64 - 1,
                exterior,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_ctx::TestCtx;
    use super::*;

    fn ctx(p: u32) -> TestCtx {
        TestCtx { p, modulus: 52, poly_h: vec![] }
    }

    #[test]
    fn anticommutation_of_h() {
        let c = ctx(3);
        // h_{2,1} . h_{2,0} -> (h_{2,0} h_{2,1}, -1)
        let (m, sign) = normalize(&c, &[(GenId::h(2, 1), 1), (GenId::h(2, 0), 1)])
            .unwrap()
            .unwrap();
        assert_eq!(m.ext, vec![GenId::h(2, 0), GenId::h(2, 1)]);
        assert_eq!(sign, 2); // -1 mod 3
    }

    #[test]
    fn exterior_square_dies() {
        let c = ctx(3);
        assert!(normalize(&c, &[(GenId::h(2, 0), 2)]).unwrap().is_none());
        assert!(normalize(&c, &[(GenId::h(2, 0), 1), (GenId::h(2, 0), 1)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn b_commutes_with_h() {
        let c = ctx(3);
        let (m, sign) = normalize(&c, &[(GenId::b(2, 0), 1), (GenId::h(3, 1), 1)])
            .unwrap()
            .unwrap();
        assert_eq!(sign, 1);
        assert_eq!(m.ext, vec![GenId::h(3, 1)]);
        assert_eq!(m.poly, vec![(GenId::b(2, 0), 1)]);
    }

    #[test]
    fn polynomial_h_square_survives_at_two() {
        let c = TestCtx { p: 2, modulus: 6, poly_h: vec![GenId::h(2, 0)] };
        let (m, sign) = normalize(&c, &[(GenId::h(2, 0), 1), (GenId::h(2, 0), 1)])
            .unwrap()
            .unwrap();
        assert_eq!(sign, 1);
        assert_eq!(m.poly, vec![(GenId::h(2, 0), 2)]);
    }

    #[test]
    fn multiply_expands_and_normalizes() {
        let c = ctx(3);
        let h20 = Element::generator(&c, GenId::h(2, 0)).unwrap();
        let h21 = Element::generator(&c, GenId::h(2, 1)).unwrap();
        let sum = h20.add(&h21, 3);
        let prod = multiply(&c, &sum, &h20).unwrap();
        // (h20 + h21) h20 = h21 h20 = -h20 h21
        assert_eq!(prod.len(), 1);
        let (m, coeff) = prod.terms().next().unwrap();
        assert_eq!(m.ext, vec![GenId::h(2, 0), GenId::h(2, 1)]);
        assert_eq!(coeff, 2);
    }

    #[test]
    fn unit_is_neutral() {
        let c = ctx(5);
        let x = Element::generator(&c, GenId::h(4, 2)).unwrap();
        assert_eq!(multiply(&c, &Element::one(), &x).unwrap(), x);
        assert_eq!(multiply(&c, &x, &Element::one()).unwrap(), x);
    }

    #[test]
    fn render_format() {
        let c = ctx(3);
        let w = normalize(
            &c,
            &[(GenId::h(2, 0), 1), (GenId::h(4, 1), 1), (GenId::b(2, 3), 2)],
        )
        .unwrap()
        .unwrap();
        assert_eq!(w.0.render(false), "h[2,0]h[4,1]b[2,3]^2");
    }

    #[test]
    fn normalize_is_idempotent() {
        let c = ctx(3);
        let (m, _) = normalize(&c, &[(GenId::h(4, 1), 1), (GenId::h(2, 0), 1)])
            .unwrap()
            .unwrap();
        let (m2, sign) = normalize(&c, &m.factors()).unwrap().unwrap();
        assert_eq!(m, m2);
        assert_eq!(sign, 1);
    }
}

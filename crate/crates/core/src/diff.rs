//! The first differential d_1 as a rule catalog on generators, extended to
//! arbitrary elements as a signed derivation, plus the candidate rule for
//! the first nonzero higher differential of a b-generator.

use serde::Serialize;

use crate::algebra::{multiply, normalize, Element, GenContext, GenId, GenKind, Monomial};
use crate::error::{Error, Result};
use crate::msq::{Flavor, PagePresentation};

/// d_1 image of one generator.
///
/// For h_{i,j}: minus the sum of h_{r,j} h_{i-r,j+r} over k <= r <= i-k,
/// with the second index taken mod n in the S flavor and exact in the T
/// flavor.  At p = 2 the top generator h_{2n,j} picks up the extra square
/// h_{n,j+n-1}^2.  Every b-generator retained on the reduced page maps to
/// zero: the boundary formula for b lands strictly below filtration M - 1
/// in the retained range, so its page-one component vanishes.
pub fn d1_rule(pres: &PagePresentation, id: GenId) -> Result<Element> {
    let params = *pres.params();
    let p = params.p;
    if id.kind == GenKind::B {
        return Ok(Element::zero());
    }
    let i = id.i as u32;
    let j = id.j;
    let n = params.n;
    let mod_n = !pres.flavor().is_t();
    let mut image = Element::zero();
    if i >= 2 * params.k {
        for r in params.k..=(i - params.k) {
            let j2 = if mod_n { (j + r) % n } else { j + r };
            let word = [
                (GenId::h(r as u16, j), 1u32),
                (GenId::h((i - r) as u16, j2), 1u32),
            ];
            if let Some((m, sign)) = normalize(pres, &word)? {
                // leading minus on the whole sum
                let c = (p as u64 - 1) * sign as u64 % p as u64;
                image.add_term(m, c as u32, p);
            }
        }
    }
    if p == 2 && i == 2 * n && !pres.flavor().is_t() {
        let jj = (j + n - 1) % n;
        let word = [(GenId::h(n as u16, jj), 2u32)];
        if let Some((m, sign)) = normalize(pres, &word)? {
            image.add_term(m, sign, p);
        }
    }
    Ok(image)
}

/// Leibniz extension of d_1 to one canonical monomial.
pub fn d1_monomial(pres: &PagePresentation, m: &Monomial) -> Result<Element> {
    let p = pres.p();
    let factors = m.factors();
    let mut out = Element::zero();
    let mut prefix_s: u64 = 0;
    for (idx, &(gen, e)) in factors.iter().enumerate() {
        let spec = pres.spec(gen)?;
        let rule = pres.d1_generator(gen)?;
        if !rule.is_zero() {
            // d(x^e) = e x^{e-1} d(x); the sign is the parity of everything
            // to the left of the block
            let sign = if prefix_s % 2 == 1 { p - 1 } else { 1 };
            let mult = (e as u64 % p as u64) as u32;
            if mult != 0 {
                let mut rest: Vec<(GenId, u32)> = Vec::with_capacity(factors.len());
                for (idx2, &(g2, e2)) in factors.iter().enumerate() {
                    let e2 = if idx2 == idx { e2 - 1 } else { e2 };
                    if e2 > 0 {
                        rest.push((g2, e2));
                    }
                }
                for (rm, rc) in rule.terms() {
                    let mut word = rest.clone();
                    word.extend(rm.factors());
                    if let Some((mono, nsign)) = normalize(pres, &word)? {
                        let c = sign as u64 * mult as u64 % p as u64 * rc as u64 % p as u64
                            * nsign as u64
                            % p as u64;
                        out.add_term(mono, c as u32, p);
                    }
                }
            }
        }
        prefix_s += spec.s as u64 * e as u64;
    }
    Ok(out)
}

/// Signed derivation on a homogeneous element.
pub fn d1_element(pres: &PagePresentation, x: &Element) -> Result<Element> {
    x.homogeneous_s(pres)?;
    let p = pres.p();
    let mut out = Element::zero();
    for (m, c) in x.terms() {
        let dm = d1_monomial(pres, m)?;
        for (mm, cc) in dm.terms() {
            out.add_term(mm.clone(), (c as u64 * cc as u64 % p as u64) as u32, p);
        }
    }
    Ok(out)
}

/// A differential rule with its page label.
#[derive(Debug, Clone, Serialize)]
pub struct DifferentialRule {
    pub source: GenId,
    pub image_rendered: String,
    /// `None` marks a candidate whose page is not determined.
    pub page: Option<u32>,
}

/// Candidate first nonzero higher differential of a b-generator:
/// b_{i-k,j} h_{k,j+k+1} - h_{k,j+1} b_{i-k,j+k} once i >= 2k, nothing below.
/// The page at which it fires is not determined here; the rule is only an
/// annotation for collapse reports and is never applied.
pub fn candidate_b_rule(
    pres: &PagePresentation,
    id: GenId,
) -> Result<Option<(DifferentialRule, Element)>> {
    if id.kind != GenKind::B {
        return Err(Error::InvalidParams("candidate rule wants a b-generator".into()));
    }
    pres.spec(id)?;
    let params = *pres.params();
    let (i, j, k, n) = (id.i as u32, id.j, params.k, params.n);
    if i < 2 * k {
        return Ok(None);
    }
    let wrap = |x: u32| if pres.flavor().is_t() { x } else { x % n };
    let p = params.p;
    let term1 = normalize(
        pres,
        &[
            (GenId::b((i - k) as u16, wrap(j)), 1),
            (GenId::h(k as u16, wrap(j + k + 1)), 1),
        ],
    )?;
    let term2 = normalize(
        pres,
        &[
            (GenId::h(k as u16, wrap(j + 1)), 1),
            (GenId::b((i - k) as u16, wrap(j + k)), 1),
        ],
    )?;
    let mut image = Element::zero();
    if let Some((m, sign)) = term1 {
        image.add_term(m, sign, p);
    }
    if let Some((m, sign)) = term2 {
        image.add_term(m, (sign as u64 * (p as u64 - 1) % p as u64) as u32, p);
    }
    let rule = DifferentialRule {
        source: id,
        image_rendered: image.render(pres.primed()),
        page: None,
    };
    Ok(Some((rule, image)))
}

/// Convenience: product of generators given as (id, exponent) pairs.
pub fn word_element(pres: &PagePresentation, word: &[(GenId, u32)]) -> Result<Element> {
    match normalize(pres, word)? {
        Some((m, sign)) => Ok(Element::from_monomial(m, sign, pres.p())),
        None => Ok(Element::zero()),
    }
}

/// Product of two elements in the presentation's algebra.
pub fn product(pres: &PagePresentation, a: &Element, b: &Element) -> Result<Element> {
    multiply(pres, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msq::Params;

    fn s32() -> PagePresentation {
        PagePresentation::build(Params::new(3, 3, 2).unwrap(), Flavor::S).unwrap()
    }

    #[test]
    fn d1_catalog_s32() {
        let pres = s32();
        for j in 0..3 {
            assert!(pres.d1_generator(GenId::h(2, j)).unwrap().is_zero());
            assert!(pres.d1_generator(GenId::h(3, j)).unwrap().is_zero());
            let img = pres.d1_generator(GenId::h(4, j)).unwrap();
            // -h_{2,j} h_{2,j+2}
            let expect = word_element(&pres, &[(GenId::h(2, j), 1), (GenId::h(2, (j + 2) % 3), 1)])
                .unwrap()
                .neg(3);
            assert_eq!(img, expect, "j = {j}");
        }
    }

    #[test]
    fn d1_p2_square_rule() {
        // S(n,n) at p=2: d_1(h_{2n,j}) = h_{n,j-1}^2 + h_{n,j}^2
        let pres =
            PagePresentation::build(Params::new(2, 2, 2).unwrap(), Flavor::S).unwrap();
        for j in 0..2u32 {
            let img = pres.d1_generator(GenId::h(4, j)).unwrap();
            let sq = |jj: u32| word_element(&pres, &[(GenId::h(2, jj % 2), 2)]).unwrap();
            let expect = sq(j + 1).add(&sq(j), 2);
            assert_eq!(img, expect, "j = {j}");
        }
    }

    #[test]
    fn d1_h5_at_p5() {
        let pres =
            PagePresentation::build(Params::new(5, 4, 2).unwrap(), Flavor::S).unwrap();
        let img = pres.d1_generator(GenId::h(5, 0)).unwrap();
        // -(h_{2,0} h_{3,2} + h_{3,0} h_{2,3})
        let a = word_element(&pres, &[(GenId::h(2, 0), 1), (GenId::h(3, 2), 1)]).unwrap();
        let b = word_element(&pres, &[(GenId::h(3, 0), 1), (GenId::h(2, 3), 1)]).unwrap();
        assert_eq!(img, a.add(&b, 5).neg(5));
    }

    #[test]
    fn leibniz_examples_s32() {
        let pres = s32();
        // d_1(h_{4,j} h_{2,j}) = 0
        for j in 0..3 {
            let g = word_element(&pres, &[(GenId::h(4, j), 1), (GenId::h(2, j), 1)]).unwrap();
            assert!(d1_element(&pres, &g).unwrap().is_zero(), "j = {j}");
        }
        // d_1 of the unit vanishes
        assert!(d1_element(&pres, &Element::one()).unwrap().is_zero());
        // d_1(h_{4,0} h_{4,1} h_{2,1}) is supported on h_{2,0}h_{2,1}h_{2,2}h_{4,1}
        let x = word_element(
            &pres,
            &[(GenId::h(4, 0), 1), (GenId::h(4, 1), 1), (GenId::h(2, 1), 1)],
        )
        .unwrap();
        let dx = d1_element(&pres, &x).unwrap();
        assert_eq!(dx.len(), 1);
        let (m, _) = dx.terms().next().unwrap();
        assert_eq!(m.render(false), "h[2,0]h[2,1]h[2,2]h[4,1]");
        // and cancels against d_1(h_{4,1} h_{4,2} h_{2,0}): their sum is a cocycle
        let y = word_element(
            &pres,
            &[(GenId::h(4, 1), 1), (GenId::h(4, 2), 1), (GenId::h(2, 0), 1)],
        )
        .unwrap();
        let lp = x.add(&y, 3);
        assert!(d1_element(&pres, &lp).unwrap().is_zero());
    }

    #[test]
    fn candidate_rule_threshold() {
        let params = Params::new(5, 4, 2).unwrap();
        let t = PagePresentation::build(params, Flavor::T { j_max: 8 }).unwrap();
        assert!(candidate_b_rule(&t, GenId::b(3, 0)).unwrap().is_none());
        let (rule, img) = candidate_b_rule(&t, GenId::b(4, 1)).unwrap().unwrap();
        assert!(rule.page.is_none());
        assert_eq!(img.len(), 2);
    }

    #[test]
    fn candidate_rule_with_k_one() {
        let params = Params::new(3, 4, 1).unwrap();
        let pres = PagePresentation::build(params, Flavor::S).unwrap();
        // b_{2,0} with k=1: b_{1,0} h_{1,2} - h_{1,1} b_{1,1}
        let (_, img) = candidate_b_rule(&pres, GenId::b(2, 0)).unwrap().unwrap();
        let t1 = word_element(&pres, &[(GenId::b(1, 0), 1), (GenId::h(1, 2), 1)]).unwrap();
        let t2 = word_element(&pres, &[(GenId::h(1, 1), 1), (GenId::b(1, 1), 1)]).unwrap();
        assert_eq!(img, t1.sub(&t2, 3));
    }
}

//! May-filtered page presentations for the stabilizer algebra S(n,k) and its
//! polynomial companion T(n,k).
//!
//! A presentation fixes (p, n, k) and a flavor, lists the page-one generators
//! with their degrees and filtrations, and carries the first-differential
//! catalog.  The S flavor keeps h_{i,j} for k <= i <= s0 and b_{i,j} for
//! k <= i <= s0 - n with second index mod n; at p = 2 the b's disappear and
//! h_{i,j} with i <= n turns polynomial.  The T flavor has h'_{i,j}, b'_{i,j}
//! for k <= i <= n+k-1 and unbounded second index, windowed to j <= j_max for
//! enumeration only; degree arithmetic stays exact integers there.

use serde::Serialize;

use crate::algebra::{Element, GenContext, GenId, GenKind, GeneratorSpec, Monomial};
use crate::diff;
use crate::error::{Error, Result};
use crate::fpla::is_prime;

/// Largest second index accepted for a T-flavor generator, mostly a guard
/// against exponent overflow in exact degrees.
pub const T_J_LIMIT: u32 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u32,
    pub n: u32,
    pub k: u32,
}

impl Params {
    pub fn new(p: u32, n: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= n, got n = {n}, k = {k}"
            )));
        }
        if n > 16 {
            return Err(Error::InvalidParams(format!("n = {n} is out of range")));
        }
        Ok(Self { p, n, k })
    }

    /// Internal-degree modulus 2(p^n - 1).
    pub fn degree_modulus(&self) -> u64 {
        2 * (pow_u128(self.p, self.n) as u64 - 1)
    }

    /// Cutoff between the 2s-1 filtration regime and the recursive one:
    /// max{ floor((2pn + p - 2) / (2(p-1))), n + k - 1 }.
    pub fn s0(&self) -> u32 {
        let p = self.p as u64;
        let n = self.n as u64;
        let k = self.k as u64;
        let quot = (2 * p * n + p - 2) / (2 * (p - 1));
        quot.max(n + k - 1) as u32
    }
}

fn pow_u128(p: u32, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p as u128).expect("degree overflow");
    }
    acc
}

/// May filtration of t_s^{p^j} (independent of j): 2s-1 up to the cutoff,
/// then max{2s-1, p*M(t_{s-n}) + 1}.
pub fn may_filtration_ts(params: &Params, s: u32) -> Result<u64> {
    if s < params.k {
        return Err(Error::InvalidParams(format!(
            "t_{s} does not exist with k = {}",
            params.k
        )));
    }
    let nk = params.n + params.k;
    if s < nk {
        return Ok(2 * s as u64 - 1);
    }
    let rec = params.p as u64 * may_filtration_ts(params, s - params.n)? + 1;
    Ok(rec.max(2 * s as u64 - 1))
}

/// May filtration of a square-free-by-variable monomial prod t_s^{e_s}:
/// expand each exponent p-adically and weight digits by M(t_s^{p^i}).
pub fn may_filtration_monomial(params: &Params, exponents: &[(u32, u64)]) -> Result<u64> {
    let mut total = 0u64;
    for &(s, e) in exponents {
        if e == 0 {
            continue;
        }
        let base = may_filtration_ts(params, s)?;
        let mut rest = e;
        while rest > 0 {
            total += (rest % params.p as u64) * base;
            rest /= params.p as u64;
        }
    }
    Ok(total)
}

/// Exact integer internal degree 2(p^i - 1) p^j.
pub fn internal_degree_int(params: &Params, id: GenId) -> Result<u128> {
    let p = params.p;
    let shift = match id.kind {
        GenKind::H => id.j,
        GenKind::B => id.j + 1,
    };
    if shift > T_J_LIMIT {
        return Err(Error::InvalidParams(format!(
            "second index {} exceeds the supported window",
            id.j
        )));
    }
    let base = 2 * (pow_u128(p, id.i as u32) - 1);
    base.checked_mul(pow_u128(p, shift))
        .ok_or_else(|| Error::InvalidParams("internal degree overflow".into()))
}

/// Internal degree reduced mod 2(p^n - 1).
pub fn internal_degree_class(params: &Params, id: GenId) -> Result<u64> {
    let modulus = params.degree_modulus() as u128;
    Ok((internal_degree_int(params, id)? % modulus) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    S,
    T { j_max: u32 },
}

impl Flavor {
    pub fn is_t(&self) -> bool {
        matches!(self, Flavor::T { .. })
    }
}

/// A spectral-sequence page presentation: generators, degrees, d_1 catalog.
#[derive(Debug, Clone)]
pub struct PagePresentation {
    params: Params,
    flavor: Flavor,
    s0: u32,
    i_max: Option<u16>,
    gens: Vec<GeneratorSpec>,
    d1: std::collections::BTreeMap<GenId, Element>,
}

impl PagePresentation {
    pub fn build(params: Params, flavor: Flavor) -> Result<Self> {
        Self::build_truncated(params, flavor, None)
    }

    /// Builds the presentation, optionally dropping generators with first
    /// index above `i_max` (the differential catalog stays closed because
    /// d_1 only involves lower first indices).
    pub fn build_truncated(
        params: Params,
        flavor: Flavor,
        i_max: Option<u16>,
    ) -> Result<Self> {
        let s0 = params.s0();
        let mut pres = PagePresentation {
            params,
            flavor,
            s0,
            i_max,
            gens: Vec::new(),
            d1: Default::default(),
        };
        let keep = |i: u16| i_max.map_or(true, |m| i <= m);
        match flavor {
            Flavor::S => {
                let n = params.n;
                if params.p == 2 {
                    // exterior above n, polynomial up to n, no b's
                    for i in params.k..=s0 {
                        for j in 0..n {
                            if keep(i as u16) {
                                pres.push_spec(GenId::h(i as u16, j), i > n)?;
                            }
                        }
                    }
                } else {
                    for i in params.k..=s0 {
                        for j in 0..n {
                            if keep(i as u16) {
                                pres.push_spec(GenId::h(i as u16, j), true)?;
                            }
                        }
                    }
                    if s0 >= params.n + params.k {
                        for i in params.k..=(s0 - params.n) {
                            for j in 0..n {
                                if keep(i as u16) {
                                    pres.push_spec(GenId::b(i as u16, j), false)?;
                                }
                            }
                        }
                    }
                }
            }
            Flavor::T { j_max } => {
                if params.p == 2 {
                    return Err(Error::InvalidParams(
                        "the polynomial companion T(n,k) is an odd-prime construction".into(),
                    ));
                }
                for i in params.k..=(params.n + params.k - 1) {
                    for j in 0..=j_max {
                        if keep(i as u16) {
                            pres.push_spec(GenId::h(i as u16, j), true)?;
                            pres.push_spec(GenId::b(i as u16, j), false)?;
                        }
                    }
                }
            }
        }
        pres.gens.sort_by_key(|g| g.id);
        for spec in pres.gens.clone() {
            let image = diff::d1_rule(&pres, spec.id)?;
            pres.d1.insert(spec.id, image);
        }
        Ok(pres)
    }

    fn push_spec(&mut self, id: GenId, exterior: bool) -> Result<()> {
        let spec = self.make_spec(id, exterior)?;
        self.gens.push(spec);
        Ok(())
    }

    fn make_spec(&self, id: GenId, exterior: bool) -> Result<GeneratorSpec> {
        let params = &self.params;
        let s = match id.kind {
            GenKind::H => 1,
            GenKind::B => 2,
        };
        // every retained generator has first index <= s0, so M(t_i^{p^j}) = 2i-1
        let may = match id.kind {
            GenKind::H => 2 * id.i as u64 - 1,
            GenKind::B => params.p as u64 * (2 * id.i as u64 - 1),
        };
        Ok(GeneratorSpec {
            id,
            s,
            t_class: internal_degree_class(params, id)?,
            t_int: internal_degree_int(params, id)?,
            may,
            exterior,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn s0(&self) -> u32 {
        self.s0
    }

    pub fn i_max(&self) -> Option<u16> {
        self.i_max
    }

    /// Generator list in canonical order (windowed, for enumeration).
    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    /// First differential of a generator, as a catalog lookup for windowed
    /// generators or computed on demand for T-flavor ids beyond the window.
    pub fn d1_generator(&self, id: GenId) -> Result<Element> {
        if let Some(img) = self.d1.get(&id) {
            return Ok(img.clone());
        }
        self.spec(id)?;
        diff::d1_rule(self, id)
    }

    fn valid_t_id(&self, id: GenId) -> bool {
        let Flavor::T { .. } = self.flavor else {
            return false;
        };
        let params = &self.params;
        (id.i as u32) >= params.k
            && (id.i as u32) <= params.n + params.k - 1
            && id.j <= T_J_LIMIT
            && self.i_max.map_or(true, |m| id.i <= m)
    }
}

impl GenContext for PagePresentation {
    fn p(&self) -> u32 {
        self.params.p
    }

    fn degree_modulus(&self) -> u64 {
        self.params.degree_modulus()
    }

    fn spec(&self, id: GenId) -> Result<GeneratorSpec> {
        if let Ok(pos) = self.gens.binary_search_by_key(&id, |g| g.id) {
            return Ok(self.gens[pos]);
        }
        // T-flavor ids are valid for any second index; compute on demand
        if self.valid_t_id(id) {
            return self.make_spec(id, id.kind == GenKind::H);
        }
        Err(Error::UnknownGenerator(format!(
            "{:?}[{},{}]",
            id.kind, id.i, id.j
        )))
    }

    fn primed(&self) -> bool {
        self.flavor.is_t()
    }
}

/// The reduction map from the polynomial flavor to the stabilizer flavor:
/// primed generators go to unprimed ones with second index reduced mod n.
/// Linear and multiplicative; collisions of exterior factors map to zero.
pub fn reduction_phi(
    from: &PagePresentation,
    to: &PagePresentation,
    x: &Element,
) -> Result<Element> {
    if !from.flavor().is_t() || to.flavor().is_t() {
        return Err(Error::InvalidParams(
            "reduction goes from the T flavor to the S flavor".into(),
        ));
    }
    if from.params() != to.params() {
        return Err(Error::MixedPresentation);
    }
    let n = from.params().n;
    let p = to.p();
    let mut out = Element::zero();
    for (m, c) in x.terms() {
        let word: Vec<(GenId, u32)> = m
            .factors()
            .into_iter()
            .map(|(id, e)| (GenId { kind: id.kind, i: id.i, j: id.j % n }, e))
            .collect();
        if let Some((mono, sign)) = crate::algebra::normalize(to, &word)? {
            out.add_term(mono, (c as u64 * sign as u64 % p as u64) as u32, p);
        }
    }
    Ok(out)
}

/// Lifts an S-flavor monomial to the T flavor with chosen second-index
/// offsets (each a multiple of n); the inverse direction of `reduction_phi`
/// on monomials.
pub fn lift_monomial(
    to_t: &PagePresentation,
    m: &Monomial,
    offsets: &[u32],
) -> Result<Option<(Monomial, u32)>> {
    let n = to_t.params().n;
    let factors = m.factors();
    if offsets.len() != factors.len() {
        return Err(Error::InvalidParams("one offset per factor".into()));
    }
    let word: Vec<(GenId, u32)> = factors
        .iter()
        .zip(offsets)
        .map(|(&(id, e), &c)| (GenId { kind: id.kind, i: id.i, j: id.j + c * n }, e))
        .collect();
    crate::algebra::normalize(to_t, &word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_values() {
        assert_eq!(Params::new(3, 3, 2).unwrap().s0(), 4);
        assert_eq!(Params::new(2, 3, 3).unwrap().s0(), 6);
        assert_eq!(Params::new(5, 4, 2).unwrap().s0(), 5);
        assert_eq!(Params::new(7, 1, 1).unwrap().s0(), 1);
        // p = 2 always gives 2n for k <= n
        for n in 1..=5u32 {
            for k in 1..=n {
                assert_eq!(Params::new(2, n, k).unwrap().s0(), 2 * n);
            }
        }
    }

    #[test]
    fn may_filtration_table_s42() {
        // rows of the S(4,2) filtration table for t_2..t_10
        let expect: [(u32, [u64; 9]); 3] = [
            (2, [3, 5, 7, 9, 11, 13, 15, 19, 23]),
            (3, [3, 5, 7, 9, 11, 16, 22, 28, 34]),
            (5, [3, 5, 7, 9, 16, 26, 36, 46, 81]),
        ];
        for (p, row) in expect {
            let params = Params::new(p, 4, 2).unwrap();
            for (idx, want) in row.iter().enumerate() {
                let s = idx as u32 + 2;
                assert_eq!(
                    may_filtration_ts(&params, s).unwrap(),
                    *want,
                    "p = {p}, s = {s}"
                );
            }
        }
    }

    #[test]
    fn may_filtration_monomial_digits() {
        let params = Params::new(3, 4, 2).unwrap();
        // t_2^3 has a single base-3 digit at position 1
        assert_eq!(may_filtration_monomial(&params, &[(2, 3)]).unwrap(), 3);
        // additivity across variables
        assert_eq!(may_filtration_monomial(&params, &[(2, 1), (3, 1)]).unwrap(), 8);
        // 4 = 1 + 1*3 in base 3
        assert_eq!(may_filtration_monomial(&params, &[(2, 4)]).unwrap(), 6);
    }

    #[test]
    fn internal_degrees() {
        let params = Params::new(3, 3, 2).unwrap();
        assert_eq!(internal_degree_class(&params, GenId::h(2, 1)).unwrap(), 48);
        assert_eq!(internal_degree_class(&params, GenId::b(2, 0)).unwrap(), 48);
        let p2 = Params::new(2, 3, 3).unwrap();
        assert_eq!(internal_degree_class(&p2, GenId::h(3, 2)).unwrap(), 0);
        // h_{2,0} in S(3,2) at p=3: t = 2(9-1) = 16
        assert_eq!(internal_degree_class(&params, GenId::h(2, 0)).unwrap(), 16);
    }

    #[test]
    fn s32_presentation_has_nine_h_and_no_b() {
        let params = Params::new(3, 3, 2).unwrap();
        let pres = PagePresentation::build(params, Flavor::S).unwrap();
        let hs: Vec<_> = pres
            .generators()
            .iter()
            .filter(|g| g.id.kind == GenKind::H)
            .collect();
        let bs: Vec<_> = pres
            .generators()
            .iter()
            .filter(|g| g.id.kind == GenKind::B)
            .collect();
        assert_eq!(hs.len(), 9);
        assert!(bs.is_empty());
        assert!(hs.iter().all(|g| g.exterior));
    }

    #[test]
    fn s42_p5_presentation() {
        let params = Params::new(5, 4, 2).unwrap();
        let pres = PagePresentation::build(params, Flavor::S).unwrap();
        assert_eq!(pres.generators().len(), 16);
        assert!(pres.generators().iter().all(|g| g.exterior));
    }

    #[test]
    fn p2_polynomial_split() {
        let params = Params::new(2, 2, 2).unwrap();
        let pres = PagePresentation::build(params, Flavor::S).unwrap();
        let poly: Vec<_> = pres.generators().iter().filter(|g| !g.exterior).collect();
        let ext: Vec<_> = pres.generators().iter().filter(|g| g.exterior).collect();
        assert_eq!(poly.len(), 2); // h_{2,j}
        assert_eq!(ext.len(), 4); // h_{3,j}, h_{4,j}
    }

    #[test]
    fn phi_reduces_second_index() {
        let params = Params::new(3, 3, 2).unwrap();
        let t = PagePresentation::build(params, Flavor::T { j_max: 6 }).unwrap();
        let s = PagePresentation::build(params, Flavor::S).unwrap();
        let x = Element::generator(&t, GenId::h(2, 5)).unwrap();
        let img = reduction_phi(&t, &s, &x).unwrap();
        assert_eq!(img.render(false), "h[2,2]");
        assert_eq!(
            reduction_phi(&t, &s, &Element::zero()).unwrap(),
            Element::zero()
        );
    }
}

//! Monomial bases, differential matrices, and page-two homology.
//!
//! Blocks are indexed by (s, internal degree class, May filtration); d_1
//! drops the filtration by exactly one and preserves the degree class, so
//! each block's homology only involves its two neighbors.  Blocks are
//! independent and are processed in parallel.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, GenContext, GenId, Monomial};
use crate::diff;
use crate::error::{Error, Result};
use crate::fpla::{homology_dimension, FpMatrix, SpanBuilder};
use crate::msq::{Flavor, PagePresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockKey {
    pub s: u32,
    pub t: u64,
    pub may: u64,
}

/// One homology block: page-one basis, cocycles, boundaries, representatives.
#[derive(Debug, Clone)]
pub struct Block {
    pub key: BlockKey,
    pub basis: Vec<Monomial>,
    pub dim: usize,
    pub kernel: Vec<Vec<u32>>,
    pub boundaries: Vec<Vec<u32>>,
    pub boundary_rank: usize,
    pub reps: Vec<Element>,
}

impl Block {
    pub fn e1_dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element supported on this block's basis.
    pub fn coordinates(&self, x: &Element) -> Option<Vec<u32>> {
        let index: HashMap<&Monomial, usize> =
            self.basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![0u32; self.basis.len()];
        for (m, c) in x.terms() {
            let &i = index.get(m)?;
            v[i] = c;
        }
        Some(v)
    }

    /// Span of the boundary columns, for image-membership tests.
    pub fn boundary_span(&self, p: u32) -> SpanBuilder {
        let mut sp = SpanBuilder::new(p, self.basis.len());
        for col in &self.boundaries {
            sp.insert(col);
        }
        sp
    }
}

/// The computed page-two table up to a homological cutoff.
#[derive(Debug, Clone)]
pub struct PageTable {
    pub s_max: u32,
    pub blocks: BTreeMap<BlockKey, Block>,
}

impl PageTable {
    pub fn poincare(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.s_max as usize + 1];
        for (key, block) in &self.blocks {
            out[key.s as usize] += block.dim as u64;
        }
        out
    }

    /// Per-(s, t) totals, for refined emission.
    pub fn refined_by_t(&self) -> BTreeMap<(u32, u64), u64> {
        let mut out = BTreeMap::new();
        for (key, block) in &self.blocks {
            *out.entry((key.s, key.t)).or_insert(0) += block.dim as u64;
        }
        out
    }

    pub fn block(&self, key: &BlockKey) -> Option<&Block> {
        self.blocks.get(key)
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = (&BlockKey, &Block)> {
        self.blocks.iter().filter(|(_, b)| b.dim > 0)
    }
}

/// All canonical monomials of homological degree at most `s_cap`, bucketed
/// by block and sorted within each block.
pub fn enumerate_blocks(
    pres: &PagePresentation,
    s_cap: u32,
) -> Result<BTreeMap<BlockKey, Vec<Monomial>>> {
    let gens = pres.generators();
    let mut out: BTreeMap<BlockKey, Vec<Monomial>> = BTreeMap::new();
    let mut stack: Vec<(GenId, u32)> = Vec::new();

    fn rec(
        pres: &PagePresentation,
        gens: &[crate::algebra::GeneratorSpec],
        idx: usize,
        budget: u32,
        stack: &mut Vec<(GenId, u32)>,
        out: &mut BTreeMap<BlockKey, Vec<Monomial>>,
    ) -> Result<()> {
        if idx == gens.len() {
            let mut ext = Vec::new();
            let mut poly = Vec::new();
            for &(id, e) in stack.iter() {
                if pres.spec(id)?.exterior {
                    ext.push(id);
                } else {
                    poly.push((id, e));
                }
            }
            let m = Monomial { ext, poly };
            let d = m.degrees(pres)?;
            out.entry(BlockKey { s: d.s, t: d.t_class, may: d.may })
                .or_default()
                .push(m);
            return Ok(());
        }
        let g = &gens[idx];
        let e_max = if g.exterior { 1 } else { budget / g.s };
        for e in 0..=e_max {
            if e > 0 {
                stack.push((g.id, e));
            }
            rec(pres, gens, idx + 1, budget - e * g.s, stack, out)?;
            if e > 0 {
                stack.pop();
            }
        }
        Ok(())
    }

    rec(pres, gens, 0, s_cap, &mut stack, &mut out)?;
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

/// Monomial basis of one homological degree, optionally one degree class.
pub fn monomial_basis(
    pres: &PagePresentation,
    s: u32,
    t_class: Option<u64>,
) -> Result<Vec<Monomial>> {
    let blocks = enumerate_blocks(pres, s)?;
    let mut out = Vec::new();
    for (key, mons) in blocks {
        if key.s == s && t_class.map_or(true, |t| key.t == t) {
            out.extend(mons);
        }
    }
    out.sort();
    Ok(out)
}

fn d1_matrix(
    pres: &PagePresentation,
    basis: &[Monomial],
    target: Option<&Vec<Monomial>>,
) -> Result<FpMatrix> {
    let p = pres.p();
    let rows = target.map_or(0, |t| t.len());
    let mut m = FpMatrix::zero(p, rows, basis.len())?;
    let index: HashMap<&Monomial, usize> = target
        .map(|t| t.iter().enumerate().map(|(i, mm)| (mm, i)).collect())
        .unwrap_or_default();
    for (col, mono) in basis.iter().enumerate() {
        let image = diff::d1_monomial(pres, mono)?;
        for (im, c) in image.terms() {
            let Some(&row) = index.get(im) else {
                return Err(Error::Shape(format!(
                    "differential image {} left its block",
                    im.render(pres.primed())
                )));
            };
            m.set(row, col, c);
        }
    }
    Ok(m)
}

/// Computes every block with s <= s_max: dimensions, cocycles, boundaries,
/// and representatives (kernel vectors reduced modulo the image).
pub fn compute_table(pres: &PagePresentation, s_max: u32) -> Result<PageTable> {
    let bases = enumerate_blocks(pres, s_max + 1)?;
    let p = pres.p();
    let keys: Vec<BlockKey> = bases.keys().copied().filter(|k| k.s <= s_max).collect();

    let results: Vec<Result<Block>> = keys
        .par_iter()
        .map(|&key| -> Result<Block> {
            let basis = &bases[&key];
            let out_target = bases.get(&BlockKey {
                s: key.s + 1,
                t: key.t,
                may: key.may.wrapping_sub(1),
            });
            let d_out = d1_matrix(pres, basis, out_target)?;
            let in_key = BlockKey { s: key.s.wrapping_sub(1), t: key.t, may: key.may + 1 };
            let in_basis = if key.s > 0 { bases.get(&in_key) } else { None };
            let d_in = match in_basis {
                Some(src) => d1_matrix(pres, src, Some(basis))?,
                None => FpMatrix::zero(p, basis.len(), 0)?,
            };
            let dim = homology_dimension(&d_in, &d_out)?;
            let kernel = d_out.kernel_basis();
            let boundaries: Vec<Vec<u32>> = (0..d_in.cols())
                .map(|c| {
                    let mut unit = vec![0u32; d_in.cols()];
                    unit[c] = 1;
                    d_in.apply(&unit)
                })
                .collect();
            let mut span = SpanBuilder::new(p, basis.len());
            for col in &boundaries {
                span.insert(col);
            }
            let boundary_rank = span.rank();
            let mut reps = Vec::new();
            for vec in &kernel {
                if span.insert(vec) {
                    let mut e = Element::zero();
                    for (i, &c) in vec.iter().enumerate() {
                        e.add_term(basis[i].clone(), c, p);
                    }
                    reps.push(e);
                }
            }
            debug_assert_eq!(reps.len(), dim);
            Ok(Block {
                key,
                basis: basis.clone(),
                dim,
                kernel,
                boundaries,
                boundary_rank,
                reps,
            })
        })
        .collect();

    let mut blocks = BTreeMap::new();
    for r in results {
        let b = r?;
        blocks.insert(b.key, b);
    }
    Ok(PageTable { s_max, blocks })
}

/// Per-degree-class Euler characteristic equality between page one and page
/// two.  Only meaningful when the table covers the whole finite range, i.e.
/// for purely exterior presentations with s_max at least the top degree.
pub fn euler_consistent(table: &PageTable) -> bool {
    let mut by_t: BTreeMap<u64, (i64, i64)> = BTreeMap::new();
    for (key, block) in &table.blocks {
        let sign = if key.s % 2 == 0 { 1 } else { -1 };
        let entry = by_t.entry(key.t).or_insert((0, 0));
        entry.0 += sign * block.e1_dim() as i64;
        entry.1 += sign * block.dim as i64;
    }
    by_t.values().all(|&(a, b)| a == b)
}

/// A paper-style named class with its expected status.
#[derive(Debug, Clone, Serialize)]
pub struct ClassStatus {
    pub name: String,
    pub rendered: String,
    pub s: u32,
    pub t: u64,
    pub may: u64,
    pub is_cocycle: bool,
    pub nonzero_in_e2: bool,
    pub valid_representative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationStatus {
    pub name: String,
    pub rendered: String,
    pub is_boundary: bool,
}

/// Named classes appropriate to this presentation's shape, when known.
pub fn named_classes(pres: &PagePresentation) -> Result<Vec<(String, Element)>> {
    let params = *pres.params();
    let (p, n, k) = (params.p, params.n, params.k);
    let mut out: Vec<(String, Element)> = Vec::new();
    if pres.flavor().is_t() {
        return Ok(out);
    }
    let word = |w: &[(GenId, u32)]| diff::word_element(pres, w);
    let gen = |id: GenId| Element::generator(pres, id);
    let full = pres.i_max().is_none();
    if p == 2 && n == k {
        let mut rho = Element::zero();
        for j in 0..n {
            rho = rho.add(&gen(GenId::h(2 * n as u16, j))?, 2);
        }
        out.push((format!("rho_{}", 2 * n), rho));
        for j in 0..n {
            out.push((format!("h[{n},{j}]"), gen(GenId::h(n as u16, j))?));
        }
        return Ok(out);
    }
    if p % 2 == 1 && n == 3 && k == 2 && full {
        for j in 0..3u32 {
            out.push((
                format!("g_{j}"),
                word(&[(GenId::h(4, j), 1), (GenId::h(2, j), 1)])?,
            ));
            out.push((
                format!("k_{j}"),
                word(&[(GenId::h(4, j), 1), (GenId::h(2, (j + 2) % 3), 1)])?,
            ));
            out.push((
                format!("l_{j}"),
                word(&[
                    (GenId::h(4, j), 1),
                    (GenId::h(4, (j + 1) % 3), 1),
                    (GenId::h(2, j), 1),
                ])?,
            ));
            let a = word(&[
                (GenId::h(4, j), 1),
                (GenId::h(4, (j + 1) % 3), 1),
                (GenId::h(2, (j + 1) % 3), 1),
            ])?;
            let b = word(&[
                (GenId::h(4, (j + 1) % 3), 1),
                (GenId::h(4, (j + 2) % 3), 1),
                (GenId::h(2, j), 1),
            ])?;
            out.push((format!("l'_{j}"), a.add(&b, p)));
        }
        out.push((
            "A".to_string(),
            word(&[
                (GenId::h(4, 0), 1),
                (GenId::h(4, 1), 1),
                (GenId::h(4, 2), 1),
                (GenId::h(2, 0), 1),
                (GenId::h(2, 1), 1),
                (GenId::h(2, 2), 1),
            ])?,
        ));
        return Ok(out);
    }
    if p % 2 == 1 && n == 4 && k == 2 {
        out.push((
            "rho_0".to_string(),
            gen(GenId::h(4, 0))?.add(&gen(GenId::h(4, 2))?, p),
        ));
        out.push((
            "rho_1".to_string(),
            gen(GenId::h(4, 1))?.add(&gen(GenId::h(4, 3))?, p),
        ));
        for j in 0..4u32 {
            out.push((
                format!("e_{j}"),
                word(&[(GenId::h(2, j), 1), (GenId::h(2, (j + 1) % 4), 1)])?,
            ));
            out.push((
                format!("g_{j}"),
                word(&[(GenId::h(4, j), 1), (GenId::h(2, j), 1)])?,
            ));
        }
        if full {
            out.push((
                "h[5,0]h[4,0]h[3,0]h[2,0]".to_string(),
                word(&[
                    (GenId::h(5, 0), 1),
                    (GenId::h(4, 0), 1),
                    (GenId::h(3, 0), 1),
                    (GenId::h(2, 0), 1),
                ])?,
            ));
        }
        return Ok(out);
    }
    Ok(out)
}

/// Elements that are asserted to be boundaries by the structure results for
/// this presentation's shape; each is an exact membership test.
pub fn relation_checks(pres: &PagePresentation) -> Result<Vec<(String, Element)>> {
    let params = *pres.params();
    let (p, n, k) = (params.p, params.n, params.k);
    let mut out = Vec::new();
    if pres.flavor().is_t() {
        return Ok(out);
    }
    let word = |w: &[(GenId, u32)]| diff::word_element(pres, w);
    if p % 2 == 1 && n == 3 && k == 2 && pres.i_max().is_none() {
        // A = -g_0 g_1 g_2 as classes: A + g_0 g_1 g_2 bounds
        let a = word(&[
            (GenId::h(4, 0), 1),
            (GenId::h(4, 1), 1),
            (GenId::h(4, 2), 1),
            (GenId::h(2, 0), 1),
            (GenId::h(2, 1), 1),
            (GenId::h(2, 2), 1),
        ])?;
        let mut ggg = Element::one();
        for j in 0..3u32 {
            let g = word(&[(GenId::h(4, j), 1), (GenId::h(2, j), 1)])?;
            ggg = diff::product(pres, &ggg, &g)?;
        }
        out.push(("A + g_0g_1g_2".to_string(), a.add(&ggg, p)));
    }
    if p % 2 == 1 && n == 4 && k == 2 {
        for i in 0..4u32 {
            out.push((
                format!("h[2,{i}]h[2,{}]", (i + 2) % 4),
                word(&[(GenId::h(2, i), 1), (GenId::h(2, (i + 2) % 4), 1)])?,
            ));
        }
        for i in 0..4u32 {
            let gi2 = word(&[(GenId::h(4, (i + 2) % 4), 1), (GenId::h(2, (i + 2) % 4), 1)])?;
            let gi = word(&[(GenId::h(4, i), 1), (GenId::h(2, i), 1)])?;
            let lhs = diff::product(pres, &Element::generator(pres, GenId::h(2, i))?, &gi2)?;
            let rhs =
                diff::product(pres, &Element::generator(pres, GenId::h(2, (i + 2) % 4))?, &gi)?;
            out.push((
                format!("h[2,{i}]g_{} - h[2,{}]g_{i}", (i + 2) % 4, (i + 2) % 4),
                lhs.sub(&rhs, p),
            ));
        }
    }
    Ok(out)
}

/// Runs the matcher: each named class is checked to be a d_1-cocycle that is
/// nonzero in page-two homology of its block.
pub fn evaluate_classes(
    pres: &PagePresentation,
    table: &PageTable,
    classes: &[(String, Element)],
) -> Result<Vec<ClassStatus>> {
    let p = pres.p();
    let mut out = Vec::new();
    for (name, elem) in classes {
        if elem.is_zero() {
            out.push(ClassStatus {
                name: name.clone(),
                rendered: "0".into(),
                s: 0,
                t: 0,
                may: 0,
                is_cocycle: true,
                nonzero_in_e2: false,
                valid_representative: false,
            });
            continue;
        }
        let (m0, _) = elem.terms().next().unwrap();
        let d = m0.degrees(pres)?;
        let key = BlockKey { s: d.s, t: d.t_class, may: d.may };
        let is_cocycle = diff::d1_element(pres, elem)?.is_zero();
        let nonzero = match table.block(&key) {
            Some(block) => {
                let coords = block.coordinates(elem).ok_or_else(|| {
                    Error::Shape(format!("class {name} is not supported on its block"))
                })?;
                !block.boundary_span(p).contains(&coords)
            }
            None => false,
        };
        out.push(ClassStatus {
            name: name.clone(),
            rendered: elem.render(pres.primed()),
            s: d.s,
            t: d.t_class,
            may: d.may,
            is_cocycle,
            nonzero_in_e2: nonzero,
            valid_representative: is_cocycle && nonzero,
        });
    }
    Ok(out)
}

pub fn evaluate_relations(
    pres: &PagePresentation,
    table: &PageTable,
    rels: &[(String, Element)],
) -> Result<Vec<RelationStatus>> {
    let p = pres.p();
    let mut out = Vec::new();
    for (name, elem) in rels {
        let is_boundary = if elem.is_zero() {
            true
        } else {
            let (m0, _) = elem.terms().next().unwrap();
            let d = m0.degrees(pres)?;
            let key = BlockKey { s: d.s, t: d.t_class, may: d.may };
            match table.block(&key) {
                Some(block) => {
                    let coords = block.coordinates(elem).ok_or_else(|| {
                        Error::Shape(format!("relation {name} is not supported on its block"))
                    })?;
                    block.boundary_span(p).contains(&coords)
                }
                None => false,
            }
        };
        out.push(RelationStatus {
            name: name.clone(),
            rendered: elem.render(pres.primed()),
            is_boundary,
        });
    }
    Ok(out)
}

/// d_1-cocycle test for an arbitrary element.
pub fn is_cocycle(pres: &PagePresentation, x: &Element) -> Result<bool> {
    Ok(diff::d1_element(pres, x)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msq::Params;

    fn pres(p: u32, n: u32, k: u32) -> PagePresentation {
        PagePresentation::build(Params::new(p, n, k).unwrap(), Flavor::S).unwrap()
    }

    #[test]
    fn monomial_counts() {
        let s32 = pres(3, 3, 2);
        assert_eq!(monomial_basis(&s32, 1, None).unwrap().len(), 9);
        let s42 = pres(5, 4, 2);
        assert_eq!(monomial_basis(&s42, 16, None).unwrap().len(), 1);
        let s22 = pres(2, 2, 2);
        assert_eq!(monomial_basis(&s22, 2, None).unwrap().len(), 17);
    }

    #[test]
    fn s32_poincare() {
        let pres = pres(3, 3, 2);
        let table = compute_table(&pres, 9).unwrap();
        assert_eq!(
            table.poincare(),
            vec![1, 6, 20, 46, 71, 71, 46, 20, 6, 1]
        );
        assert!(euler_consistent(&table));
    }

    #[test]
    fn s32_unit_block() {
        let pres = pres(3, 3, 2);
        let table = compute_table(&pres, 2).unwrap();
        let unit = table.block(&BlockKey { s: 0, t: 0, may: 0 }).unwrap();
        assert_eq!(unit.dim, 1);
    }

    #[test]
    fn s32_matcher_confirms_named_classes() {
        let pres = pres(3, 3, 2);
        let table = compute_table(&pres, 9).unwrap();
        let classes = named_classes(&pres).unwrap();
        assert_eq!(classes.len(), 13);
        let statuses = evaluate_classes(&pres, &table, &classes).unwrap();
        for st in &statuses {
            assert!(st.valid_representative, "{} failed", st.name);
        }
        let rels = relation_checks(&pres).unwrap();
        let rstat = evaluate_relations(&pres, &table, &rels).unwrap();
        for r in &rstat {
            assert!(r.is_boundary, "{} failed", r.name);
        }
    }

    #[test]
    fn p2_s22_dims() {
        let pres = pres(2, 2, 2);
        let table = compute_table(&pres, 8).unwrap();
        assert_eq!(table.poincare(), vec![1, 5, 11, 15, 16, 16, 16, 16, 16]);
        let classes = named_classes(&pres).unwrap();
        let statuses = evaluate_classes(&pres, &table, &classes).unwrap();
        let rho = statuses.iter().find(|c| c.name == "rho_4").unwrap();
        assert!(rho.valid_representative);
    }

    #[test]
    fn representatives_are_cocycles_off_image() {
        let pres = pres(3, 3, 2);
        let table = compute_table(&pres, 4).unwrap();
        for (_, block) in table.nonzero_blocks() {
            let span = block.boundary_span(3);
            for rep in &block.reps {
                assert!(is_cocycle(&pres, rep).unwrap());
                let coords = block.coordinates(rep).unwrap();
                assert!(!span.contains(&coords));
            }
        }
    }
}

//! Picard omega-categories.
//!
//! The canonical internal representation is the graded direct sum of the
//! underlying chain complex: an element is one coordinate per degree, and
//! `s_n` truncates above n while `t_n` additionally folds the boundary of
//! the degree n+1 coordinate into degree n. Composition is forced:
//! `x *_n y = x + y - s_n x`. The sequence-of-pairs carrier is kept as a
//! validated view with its own structure-map formulas so the two can be
//! cross-checked.

use crate::chain::{ChainComplex, ChainMap, ChainHomotopy, ValidationReport};
use crate::group::{subquotient, FgAbGroup, GroupElement, GroupHom, Subquotient};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicError {
    #[error("source and target do not match; composition undefined")]
    NotComposable,
    #[error("the given data is not a homotopy")]
    NotAHomotopy,
    #[error("boundary preconditions violated")]
    PreconditionViolated,
    #[error("instance has positive free rank; enumeration impossible")]
    InfiniteGroup,
}

/// A Picard omega-category presented by its underlying chain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicOmegaCat {
    complex: ChainComplex,
}

/// Element in graded coordinates, one per degree of the stored window.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PicElement {
    pub coords: Vec<GroupElement>,
}

/// Element as a sequence of (negative, positive) pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeqPairElement {
    pub pairs: Vec<(GroupElement, GroupElement)>,
}

pub fn p_of(c: &ChainComplex) -> PicOmegaCat {
    PicOmegaCat { complex: c.clone() }
}

impl PicOmegaCat {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn min_degree(&self) -> i64 {
        self.complex.min_degree()
    }

    pub fn max_degree(&self) -> i64 {
        self.complex.max_degree()
    }

    fn idx(&self, n: i64) -> Option<usize> {
        if n < self.min_degree() || n > self.max_degree() {
            None
        } else {
            Some((n - self.min_degree()) as usize)
        }
    }

    pub fn zero_element(&self) -> PicElement {
        PicElement {
            coords: self
                .complex
                .degrees()
                .map(|n| self.complex.group_at(n).zero())
                .collect(),
        }
    }

    pub fn coord(&self, x: &PicElement, n: i64) -> GroupElement {
        match self.idx(n) {
            Some(i) => x.coords[i].clone(),
            None => FgAbGroup::trivial().zero(),
        }
    }

    pub fn add(&self, x: &PicElement, y: &PicElement) -> PicElement {
        PicElement {
            coords: self
                .complex
                .degrees()
                .zip(x.coords.iter().zip(&y.coords))
                .map(|(n, (a, b))| self.complex.group_at(n).add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, x: &PicElement) -> PicElement {
        PicElement {
            coords: self
                .complex
                .degrees()
                .zip(&x.coords)
                .map(|(n, a)| self.complex.group_at(n).neg(a))
                .collect(),
        }
    }

    pub fn sub(&self, x: &PicElement, y: &PicElement) -> PicElement {
        self.add(x, &self.neg(y))
    }

    pub fn is_zero(&self, x: &PicElement) -> bool {
        self.complex
            .degrees()
            .zip(&x.coords)
            .all(|(n, a)| self.complex.group_at(n).is_zero_elem(a))
    }

    /// `s_n`: kill all coordinates above degree n.
    pub fn source(&self, n: i64, x: &PicElement) -> PicElement {
        PicElement {
            coords: self
                .complex
                .degrees()
                .zip(&x.coords)
                .map(|(m, a)| {
                    if m <= n {
                        a.clone()
                    } else {
                        self.complex.group_at(m).zero()
                    }
                })
                .collect(),
        }
    }

    /// `t_n`: truncate above n and fold the boundary of degree n+1 into n.
    pub fn target(&self, n: i64, x: &PicElement) -> PicElement {
        let mut out = self.source(n, x);
        if let Some(i) = self.idx(n) {
            if let Some(j) = self.idx(n + 1) {
                let g = self.complex.group_at(n);
                let d = self.complex.diff_at(n + 1);
                out.coords[i] = g.add(&out.coords[i], &d.apply(&x.coords[j]));
            }
        }
        out
    }

    /// `x *_n y = x + y - s_n x`, defined when `s_n x = t_n y`.
    pub fn compose(&self, n: i64, x: &PicElement, y: &PicElement) -> Result<PicElement, PicError> {
        if self.source(n, x) != self.target(n, y) {
            return Err(PicError::NotComposable);
        }
        Ok(self.sub(&self.add(x, y), &self.source(n, x)))
    }

    /// Least m with `s_m x = x`; undefined for 0.
    pub fn mu(&self, x: &PicElement) -> Option<i64> {
        if self.is_zero(x) {
            return None;
        }
        let top = self
            .complex
            .degrees()
            .zip(&x.coords)
            .filter(|(n, a)| !self.complex.group_at(*n).is_zero_elem(a))
            .map(|(n, _)| n)
            .max()
            .unwrap();
        Some(top)
    }

    pub fn is_finite(&self) -> bool {
        self.complex.is_finite()
    }

    /// All elements of a finite instance; count is the product of the
    /// degreewise group orders.
    pub fn enumerate(&self) -> Result<Vec<PicElement>, PicError> {
        if !self.is_finite() {
            return Err(PicError::InfiniteGroup);
        }
        let per_degree: Vec<Vec<GroupElement>> = self
            .complex
            .degrees()
            .map(|n| self.complex.group_at(n).enumerate().unwrap())
            .collect();
        let mut out = vec![self.zero_element()];
        for (i, options) in per_degree.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * options.len());
            for x in &out {
                for o in options {
                    let mut y = x.clone();
                    y.coords[i] = o.clone();
                    next.push(y);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Structure generators plus seeded small combinations, for checks on
    /// instances with free rank.
    pub fn sample_elements(&self, seed: u64, count: usize) -> Vec<PicElement> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![self.zero_element()];
        let degrees: Vec<i64> = self.complex.degrees().collect();
        for &n in &degrees {
            let g = self.complex.group_at(n);
            for k in 0..g.generators() {
                let mut x = self.zero_element();
                x.coords[self.idx(n).unwrap()] = g.generator(k);
                out.push(x);
            }
        }
        while out.len() < count {
            let mut x = self.zero_element();
            for &n in &degrees {
                let g = self.complex.group_at(n);
                let coords: Vec<BigInt> = (0..g.generators())
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect();
                x.coords[self.idx(n).unwrap()] = g.element(&coords);
            }
            out.push(x);
        }
        out
    }

    // ---- sequence-of-pairs view ------------------------------------

    /// Graded to pairs: degree i becomes `(x_i, x_i + d x_{i+1})`.
    pub fn to_pairs(&self, x: &PicElement) -> SeqPairElement {
        let pairs = self
            .complex
            .degrees()
            .map(|n| {
                let g = self.complex.group_at(n);
                let lo = self.coord(x, n);
                let hi = g.add(&lo, &self.complex.diff_at(n + 1).apply(&self.coord(x, n + 1)));
                (lo, hi)
            })
            .collect();
        SeqPairElement { pairs }
    }

    /// Pairs to graded: keep the negative member of each pair.
    pub fn from_pairs(&self, x: &SeqPairElement) -> PicElement {
        PicElement {
            coords: x.pairs.iter().map(|(lo, _)| lo.clone()).collect(),
        }
    }

    /// Check the carrier constraint `d x_i^a = x_{i-1}^+ - x_{i-1}^-`.
    pub fn pairs_valid(&self, x: &SeqPairElement) -> bool {
        if x.pairs.len() != (self.max_degree() - self.min_degree() + 1) as usize {
            return false;
        }
        for n in self.min_degree()..=self.max_degree() + 1 {
            let (lo, hi) = self.pair_at(x, n);
            let (plo, phi) = self.pair_at(x, n - 1);
            let gprev = self.complex.group_at(n - 1);
            let d = self.complex.diff_at(n);
            let delta = gprev.sub(&phi, &plo);
            if n == self.min_degree() {
                continue;
            }
            if d.apply(&lo) != delta || d.apply(&hi) != delta {
                return false;
            }
        }
        true
    }

    fn pair_at(&self, x: &SeqPairElement, n: i64) -> (GroupElement, GroupElement) {
        match self.idx(n) {
            Some(i) => x.pairs[i].clone(),
            None => {
                let z = FgAbGroup::trivial().zero();
                (z.clone(), z)
            }
        }
    }

    /// `s_i` on the pairs carrier: tail replaced by the diagonal on the
    /// negative member.
    pub fn pairs_source(&self, n: i64, x: &SeqPairElement) -> SeqPairElement {
        SeqPairElement {
            pairs: self
                .complex
                .degrees()
                .zip(&x.pairs)
                .map(|(m, (lo, hi))| {
                    if m < n {
                        (lo.clone(), hi.clone())
                    } else if m == n {
                        (lo.clone(), lo.clone())
                    } else {
                        let z = self.complex.group_at(m).zero();
                        (z.clone(), z)
                    }
                })
                .collect(),
        }
    }

    pub fn pairs_target(&self, n: i64, x: &SeqPairElement) -> SeqPairElement {
        SeqPairElement {
            pairs: self
                .complex
                .degrees()
                .zip(&x.pairs)
                .map(|(m, (lo, hi))| {
                    if m < n {
                        (lo.clone(), hi.clone())
                    } else if m == n {
                        (hi.clone(), hi.clone())
                    } else {
                        let z = self.complex.group_at(m).zero();
                        (z.clone(), z)
                    }
                })
                .collect(),
        }
    }

    /// Splice at level n, add above it.
    pub fn pairs_compose(
        &self,
        n: i64,
        x: &SeqPairElement,
        y: &SeqPairElement,
    ) -> Result<SeqPairElement, PicError> {
        if self.pairs_source(n, x) != self.pairs_target(n, y) {
            return Err(PicError::NotComposable);
        }
        Ok(SeqPairElement {
            pairs: self
                .complex
                .degrees()
                .enumerate()
                .map(|(i, m)| {
                    let g = self.complex.group_at(m);
                    let (xl, xh) = &x.pairs[i];
                    let (yl, yh) = &y.pairs[i];
                    if m < n {
                        (xl.clone(), xh.clone())
                    } else if m == n {
                        (yl.clone(), xh.clone())
                    } else {
                        (g.add(xl, yl), g.add(xh, yh))
                    }
                })
                .collect(),
        })
    }

    pub fn pairs_add(&self, x: &SeqPairElement, y: &SeqPairElement) -> SeqPairElement {
        SeqPairElement {
            pairs: self
                .complex
                .degrees()
                .enumerate()
                .map(|(i, m)| {
                    let g = self.complex.group_at(m);
                    let (xl, xh) = &x.pairs[i];
                    let (yl, yh) = &y.pairs[i];
                    (g.add(xl, yl), g.add(xh, yh))
                })
                .collect(),
        }
    }
}

/// The graded sum of a complex over its window, with embeddings and
/// projections and the structure maps as integer matrices on the sum.
#[derive(Clone, Debug)]
pub(crate) struct GradedTotal {
    pub complex: ChainComplex,
    pub group: FgAbGroup,
    offsets: Vec<usize>,
}

impl GradedTotal {
    pub fn new(c: &ChainComplex) -> Self {
        let parts: Vec<FgAbGroup> = c.degrees().map(|n| c.group_at(n)).collect();
        let refs: Vec<&FgAbGroup> = parts.iter().collect();
        let group = if refs.is_empty() {
            FgAbGroup::trivial()
        } else {
            FgAbGroup::direct_sum(&refs)
        };
        let offsets = parts
            .iter()
            .scan(0usize, |acc, g| {
                let o = *acc;
                *acc += g.generators();
                Some(o)
            })
            .collect();
        GradedTotal {
            complex: c.clone(),
            group,
            offsets,
        }
    }

    pub fn offset(&self, n: i64) -> usize {
        let i = (n - self.complex.min_degree()) as usize;
        self.offsets[i]
    }

    pub fn pack(&self, x: &PicElement) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.group.generators()];
        for (i, n) in self.complex.degrees().enumerate() {
            let off = self.offsets[i];
            for (k, c) in x.coords[i].coords().iter().enumerate() {
                coords[off + k] = c.clone();
            }
            let _ = n;
        }
        self.group.element(&coords)
    }

    pub fn unpack(&self, z: &GroupElement) -> PicElement {
        let coords = self
            .complex
            .degrees()
            .enumerate()
            .map(|(i, n)| {
                let g = self.complex.group_at(n);
                let off = self.offsets[i];
                let slice: Vec<BigInt> = (0..g.generators())
                    .map(|k| z.coords()[off + k].clone())
                    .collect();
                g.element(&slice)
            })
            .collect();
        PicElement { coords }
    }

    /// `s_n` as a matrix on the sum: identity on blocks of degree <= n.
    pub fn s_matrix(&self, n: i64) -> IntMatrix {
        let g = self.group.generators();
        let mut m = IntMatrix::zero(g, g);
        for (i, deg) in self.complex.degrees().enumerate() {
            if deg > n {
                continue;
            }
            let off = self.offsets[i];
            for k in 0..self.complex.group_at(deg).generators() {
                m.set(off + k, off + k, BigInt::from(1));
            }
        }
        m
    }

    /// `t_n`: `s_n` plus the boundary block from degree n+1 into degree n.
    pub fn t_matrix(&self, n: i64) -> IntMatrix {
        let mut m = self.s_matrix(n);
        let min = self.complex.min_degree();
        if n >= min && n + 1 <= self.complex.max_degree() {
            let d = self.complex.diff_at(n + 1);
            let r0 = self.offset(n);
            let c0 = self.offset(n + 1);
            for r in 0..d.matrix().rows() {
                for c in 0..d.matrix().cols() {
                    m.set(r0 + r, c0 + c, d.matrix().at(r, c).clone());
                }
            }
        }
        m
    }

    pub fn s_hom(&self, n: i64) -> GroupHom {
        GroupHom::new_unchecked(self.group.clone(), self.group.clone(), self.s_matrix(n))
    }

    pub fn t_hom(&self, n: i64) -> GroupHom {
        GroupHom::new_unchecked(self.group.clone(), self.group.clone(), self.t_matrix(n))
    }

    /// `D = sum_n (t_n - s_n)`: the block-subdiagonal of differentials.
    pub fn d_total(&self) -> GroupHom {
        let g = self.group.generators();
        let mut m = IntMatrix::zero(g, g);
        for n in self.complex.min_degree() + 1..=self.complex.max_degree() {
            let d = self.complex.diff_at(n);
            let r0 = self.offset(n - 1);
            let c0 = self.offset(n);
            for r in 0..d.matrix().rows() {
                for c in 0..d.matrix().cols() {
                    m.set(r0 + r, c0 + c, d.matrix().at(r, c).clone());
                }
            }
        }
        GroupHom::new_unchecked(self.group.clone(), self.group.clone(), m)
    }
}

/// The chain complex recovered from a Picard omega-category by honest
/// subquotients: degree i is `A_i / A_{i-1}` with `A_i = Im(s_i)`
/// computed as `Ker(id - s_i)`, and the differential induced by
/// `t_{i-1} - s_{i-1}`.
pub struct QData {
    pub complex: ChainComplex,
    pub total: GradedTotal,
    pub quotients: Vec<Subquotient>,
}

pub fn q_data(a: &PicOmegaCat) -> QData {
    let total = GradedTotal::new(a.complex());
    let idh = GroupHom::identity(total.group.clone());
    let mut quotients = Vec::new();
    for n in a.complex().degrees() {
        let ker_of = idh.sub(&total.s_hom(n));
        let mod_im = total.s_hom(n - 1);
        quotients.push(subquotient(&ker_of, &mod_im).expect("s_{i-1} lands in A_i"));
    }
    let groups: Vec<FgAbGroup> = quotients.iter().map(|q| q.group().clone()).collect();
    let mut diffs = Vec::new();
    for (i, n) in a.complex().degrees().enumerate().skip(1) {
        let src = &quotients[i];
        let tgt = &quotients[i - 1];
        let d0 = total.t_hom(n - 1).sub(&total.s_hom(n - 1));
        let hom = src
            .induced(&d0, tgt)
            .expect("t - s lands in the next subquotient");
        diffs.push(GroupHom::new_unchecked(
            groups[i].clone(),
            groups[i - 1].clone(),
            hom.matrix().clone(),
        ));
    }
    let complex = ChainComplex::new(a.min_degree(), groups, diffs);
    QData {
        complex,
        total,
        quotients,
    }
}

pub fn q_of(a: &PicOmegaCat) -> ChainComplex {
    q_data(a).complex
}

/// The two explicit isomorphisms of the equivalence: `h` identifies each
/// chain group with the corresponding subquotient of P, and `phi` is the
/// induced degreewise bijection of elements.
pub struct GradedIso {
    pub q: QData,
    /// h_i : C_i -> Q^i, concentrate at degree i and take the class
    pub h: Vec<GroupHom>,
    /// inverse, reading off the degree-i block of any representative
    pub h_inv: Vec<GroupHom>,
}

pub fn graded_iso(a: &PicOmegaCat) -> GradedIso {
    let q = q_data(a);
    let mut h = Vec::new();
    let mut h_inv = Vec::new();
    for (i, n) in a.complex().degrees().enumerate() {
        let c = a.complex().group_at(n);
        let sq = &q.quotients[i];
        let mut m = IntMatrix::zero(sq.group().generators(), c.generators());
        for k in 0..c.generators() {
            let mut coords = vec![BigInt::zero(); q.total.group.generators()];
            coords[q.total.offset(n) + k] = BigInt::from(1);
            let class = sq
                .express_coords(&coords)
                .expect("degree block lies in A_i");
            for (r, e) in class.coords().iter().enumerate() {
                m.set(r, k, e.clone());
            }
        }
        h.push(GroupHom::new(c.clone(), sq.group().clone(), m).expect("h is well defined"));
        // block row i of the generator matrix
        let gens = sq.gens_in_ambient();
        let off = q.total.offset(n);
        let inv = IntMatrix::from_fn(c.generators(), sq.group().generators(), |r, cc| {
            gens.at(off + r, cc).clone()
        });
        h_inv.push(
            GroupHom::new(sq.group().clone(), c, inv).expect("block projection is well defined"),
        );
    }
    GradedIso { q, h, h_inv }
}

impl GradedIso {
    /// phi : A -> PQ(A), degreewise h.
    pub fn phi(&self, a: &PicOmegaCat, x: &PicElement) -> PicElement {
        let _ = a;
        PicElement {
            coords: self
                .h
                .iter()
                .zip(&x.coords)
                .map(|(hi, c)| hi.apply(c))
                .collect(),
        }
    }

    pub fn phi_inv(&self, a: &PicOmegaCat, y: &PicElement) -> PicElement {
        let _ = a;
        PicElement {
            coords: self
                .h_inv
                .iter()
                .zip(&y.coords)
                .map(|(hi, c)| hi.apply(c))
                .collect(),
        }
    }

    /// `h` as a chain map witnessing `Q(P(C)) = C`.
    pub fn h_chain_map(&self, c: &ChainComplex) -> ChainMap {
        let comps: Vec<(i64, GroupHom)> = c
            .degrees()
            .enumerate()
            .map(|(i, n)| (n, self.h[i].clone()))
            .collect();
        ChainMap::new(c.clone(), self.q.complex.clone(), comps)
    }
}

/// Functor of Picard omega-categories: a chain map acting degreewise.
#[derive(Clone, Debug)]
pub struct PicFunctor {
    pub map: ChainMap,
}

impl PicFunctor {
    pub fn new(map: ChainMap) -> Self {
        PicFunctor { map }
    }

    pub fn source(&self) -> PicOmegaCat {
        p_of(self.map.source())
    }

    pub fn target(&self) -> PicOmegaCat {
        p_of(self.map.target())
    }

    pub fn apply(&self, x: &PicElement) -> PicElement {
        let tgt = self.map.target();
        PicElement {
            coords: tgt
                .degrees()
                .map(|n| {
                    let src = self.source();
                    self.map.component(n).apply(&src.coord(x, n))
                })
                .collect(),
        }
    }
}

/// Exhaustive structural axioms on a finite instance, or on samples when
/// the instance is infinite: the category laws per level, the 2-category
/// laws and interchange across levels, and stabilization.
pub fn validate_pic_axioms(a: &PicOmegaCat, sample_seed: u64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let elems = match a.enumerate() {
        Ok(e) => e,
        Err(_) => a.sample_elements(sample_seed, 12),
    };
    let lo = a.min_degree() - 1;
    let hi = a.max_degree() + 1;
    for x in &elems {
        // axiom 3: stabilization at the top of the window
        if &a.source(hi, x) != x || &a.target(hi, x) != x {
            report.push(hi, "element not stabilized at the top level");
        }
        for i in lo..=hi {
            let s = a.source(i, x);
            let t = a.target(i, x);
            if a.source(i, &s) != s || a.source(i, &t) != t {
                report.push(i, "axiom 1a fails for s_i");
            }
            if a.target(i, &s) != s || a.target(i, &t) != t {
                report.push(i, "axiom 1a fails for t_i");
            }
            // 1b: units
            if a.compose(i, x, &s).ok().as_ref() != Some(x) {
                report.push(i, "axiom 1b fails: x * s_i(x) != x");
            }
            if a.compose(i, &t, x).ok().as_ref() != Some(x) {
                report.push(i, "axiom 1b fails: t_i(x) * x != x");
            }
            for j in i + 1..=hi {
                // 2a and 2b
                if a.source(i, &a.source(j, x)) != a.source(i, x)
                    || a.source(i, &a.target(j, x)) != a.source(i, x)
                    || a.target(i, &a.source(j, x)) != a.target(i, x)
                    || a.target(i, &a.target(j, x)) != a.target(i, x)
                {
                    report.push(i, "axiom 2a fails");
                }
                if a.source(j, &a.source(i, x)) != a.source(i, x)
                    || a.target(j, &a.source(i, x)) != a.source(i, x)
                    || a.source(j, &a.target(i, x)) != a.target(i, x)
                    || a.target(j, &a.target(i, x)) != a.target(i, x)
                {
                    report.push(i, "axiom 2b fails");
                }
            }
        }
    }
    // pairwise laws on a bounded slice to keep exhaustive cost sane
    let cap = if elems.len() > 24 { 24 } else { elems.len() };
    let slice = &elems[..cap];
    for i in lo..=hi {
        for x in slice {
            for y in slice {
                let Ok(xy) = a.compose(i, x, y) else { continue };
                // 1d
                if a.source(i, &xy) != a.source(i, y) || a.target(i, &xy) != a.target(i, x) {
                    report.push(i, "axiom 1d fails");
                }
                // 1c
                for z in slice {
                    if let Ok(yz) = a.compose(i, y, z) {
                        let l = a.compose(i, &xy, z).expect("associativity composability");
                        let r = a.compose(i, x, &yz).expect("associativity composability");
                        if l != r {
                            report.push(i, "axiom 1c fails");
                        }
                    }
                }
                for j in i + 1..=hi {
                    // 2c
                    let sxy = a.compose(j, &a.source(j, x), &a.source(j, y));
                    let txy = a.compose(j, &a.target(j, x), &a.target(j, y));
                    let _ = (&sxy, &txy);
                    if a.source(j, &xy)
                        != a
                            .compose(i, &a.source(j, x), &a.source(j, y))
                            .unwrap_or_else(|_| a.zero_element())
                    {
                        report.push(j, "axiom 2c fails for s_j");
                    }
                    if a.target(j, &xy)
                        != a
                            .compose(i, &a.target(j, x), &a.target(j, y))
                            .unwrap_or_else(|_| a.zero_element())
                    {
                        report.push(j, "axiom 2c fails for t_j");
                    }
                }
            }
        }
    }
    // interchange on composable quadruples at adjacent level pairs
    for i in lo..=hi {
        for j in i + 1..=hi {
            for x in slice {
                for y in slice {
                    let Ok(xj) = a.compose(j, x, y) else { continue };
                    for u in slice {
                        for v in slice {
                            let Ok(uj) = a.compose(j, u, v) else { continue };
                            let lhs = a.compose(i, &xj, &uj);
                            let xr = a.compose(i, x, u);
                            let yr = a.compose(i, y, v);
                            match (lhs, xr, yr) {
                                (Ok(l), Ok(xi), Ok(yi)) => {
                                    let r = a.compose(j, &xi, &yi).expect("interchange rhs");
                                    if l != r {
                                        report.push(j, "interchange (2d) fails");
                                    }
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Sub-omega-category `A[k]^{x,y}` of morphisms at level k with the given
/// source and target, plus the translation onto `A[k]^{0,0}` when a
/// connecting k-morphism exists.
pub struct HomSub {
    pub k: i64,
    pub x: PicElement,
    pub y: PicElement,
    /// witness k-morphism from x to y, when one exists
    pub witness: Option<PicElement>,
}

pub fn hom_sub(a: &PicOmegaCat, k: i64, x: &PicElement, y: &PicElement) -> Result<HomSub, PicError> {
    assert!(k >= 1);
    // boundary preconditions with the convention s_{-1} = t_{-1} = 0
    let (sx, sy) = (a.source(k - 2, x), a.source(k - 2, y));
    let (tx, ty) = (a.target(k - 2, x), a.target(k - 2, y));
    if sx != sy || tx != ty {
        return Err(PicError::PreconditionViolated);
    }
    if &a.source(k - 1, x) != x || &a.source(k - 1, y) != y {
        return Err(PicError::PreconditionViolated);
    }
    let witness = find_witness(a, k, x, y);
    Ok(HomSub {
        k,
        x: x.clone(),
        y: y.clone(),
        witness,
    })
}

/// A k-morphism w with `s_{k-1} w = x`, `t_{k-1} w = y`: lower coordinates
/// copy x, and the degree-k coordinate solves `d w_k = y_{k-1} - x_{k-1}`.
fn find_witness(a: &PicOmegaCat, k: i64, x: &PicElement, y: &PicElement) -> Option<PicElement> {
    let gk1 = a.complex().group_at(k - 1);
    let rhs = gk1.sub(&a.coord(y, k - 1), &a.coord(x, k - 1));
    let d = a.complex().diff_at(k);
    let wk = d.preimage(&rhs)?;
    let mut w = a.source(k - 1, x);
    if let Some(i) = a.idx(k) {
        w.coords[i] = wk;
    } else if !gk1.is_zero_elem(&rhs) {
        return None;
    }
    Some(w)
}

impl HomSub {
    /// Elements with the prescribed boundaries, realized recursively:
    /// level k filters the level k-1 hom-subcategory.
    pub fn elements(&self, a: &PicOmegaCat) -> Result<Vec<PicElement>, PicError> {
        fn filter_level(
            a: &PicOmegaCat,
            k: i64,
            x: &PicElement,
            y: &PicElement,
        ) -> Result<Vec<PicElement>, PicError> {
            if k == 0 {
                return a.enumerate();
            }
            let inner = filter_level(a, k - 1, &a.source(k - 2, x), &a.target(k - 2, y))?;
            Ok(inner
                .into_iter()
                .filter(|z| &a.source(k - 1, z) == x && &a.target(k - 1, z) == y)
                .collect())
        }
        filter_level(a, self.k, &self.x, &self.y)
    }

    /// Translate onto loops: `z -> z - w` for the witness w.
    pub fn to_base(&self, a: &PicOmegaCat, z: &PicElement) -> Option<PicElement> {
        self.witness.as_ref().map(|w| a.sub(z, w))
    }
}

/// The free Picard omega-category on a finite omega-category: basis the
/// strict n-objects in each degree, boundary map `t_{n-1} - s_{n-1}` on
/// basis elements.
pub struct FreePic {
    pub pic: PicOmegaCat,
    /// for each element of the generating category, its graded image
    pub unit: Vec<PicElement>,
}

pub fn free_pic(a: &crate::omega::FiniteOmegaCat) -> FreePic {
    let n_levels = a.stabilization() + 1;
    let levels: Vec<usize> = (0..a.len()).map(|e| a.level_of(e)).collect();
    // basis of degree n: elements of level exactly n, in id order
    let mut basis: Vec<Vec<usize>> = vec![Vec::new(); n_levels];
    for (e, &l) in levels.iter().enumerate() {
        basis[l].push(e);
    }
    let groups: Vec<FgAbGroup> = basis.iter().map(|b| FgAbGroup::free(b.len())).collect();
    let class_of = |e: usize, n: usize| -> Option<usize> {
        if levels[e] == n {
            basis[n].iter().position(|&b| b == e)
        } else {
            None
        }
    };
    let mut diffs = Vec::new();
    for n in 1..n_levels {
        let mut m = IntMatrix::zero(basis[n - 1].len(), basis[n].len());
        for (j, &e) in basis[n].iter().enumerate() {
            let t = a.t(n - 1, e);
            let s = a.s(n - 1, e);
            if let Some(r) = class_of(t, n - 1) {
                let v = m.at(r, j) + 1;
                m.set(r, j, v);
            }
            if let Some(r) = class_of(s, n - 1) {
                let v = m.at(r, j) - 1;
                m.set(r, j, v);
            }
        }
        diffs.push(GroupHom::new_unchecked(
            groups[n].clone(),
            groups[n - 1].clone(),
            m,
        ));
    }
    let complex = ChainComplex::new(0, groups.clone(), diffs);
    let pic = p_of(&complex);
    // unit: e maps to the graded tuple of classes [s_i e]
    let unit = (0..a.len())
        .map(|e| {
            let mut coords: Vec<GroupElement> = complex
                .degrees()
                .map(|n| complex.group_at(n).zero())
                .collect();
            for n in 0..n_levels {
                let se = a.s(n, e);
                if let Some(idx) = class_of(se, n) {
                    coords[n] = groups[n].generator(idx);
                }
            }
            PicElement { coords }
        })
        .collect();
    FreePic { pic, unit }
}

impl FreePic {
    /// Does the unit preserve sources, targets and compositions of the
    /// generating category?
    pub fn unit_is_functor(&self, a: &crate::omega::FiniteOmegaCat) -> bool {
        let n = a.stabilization();
        for e in 0..a.len() {
            for i in 0..=n as i64 {
                if self.pic.source(i, &self.unit[e]) != self.unit[a.s(i as usize, e)] {
                    return false;
                }
                if self.pic.target(i, &self.unit[e]) != self.unit[a.t(i as usize, e)] {
                    return false;
                }
            }
        }
        for i in 0..=n {
            for (x, y, z) in a.compositions(i) {
                let c = self
                    .pic
                    .compose(i as i64, &self.unit[x], &self.unit[y])
                    .expect("images composable");
                if c != self.unit[z] {
                    return false;
                }
            }
        }
        true
    }
}

/// A homotopy between Picard functors: a single homomorphism on the
/// graded sums subject to the degree, truncation and boundary laws.
#[derive(Clone, Debug)]
pub struct PicHomotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    pub total: GroupHom,
}

fn window_check(src: &GradedTotal, tgt: &GradedTotal, total: &GroupHom) -> bool {
    // condition 1 and 3: block (i -> j) vanishes unless j = i + 1
    for n in src.complex.degrees() {
        for m in tgt.complex.degrees() {
            if m == n + 1 {
                continue;
            }
            let r0 = tgt.offset(m);
            let c0 = src.offset(n);
            for r in 0..tgt.complex.group_at(m).generators() {
                for c in 0..src.complex.group_at(n).generators() {
                    if !total.matrix().at(r0 + r, c0 + c).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Chain homotopy to graded homotopy: `H` raises degree by one and
/// satisfies `D H + H D = G - F`.
pub fn pic_homotopy_from_chain(h: &ChainHomotopy) -> Result<PicHomotopy, PicError> {
    if !h.check() {
        return Err(PicError::NotAHomotopy);
    }
    let src = GradedTotal::new(h.f.source());
    let tgt = GradedTotal::new(h.f.target());
    let mut m = IntMatrix::zero(tgt.group.generators(), src.group.generators());
    for n in src.complex.degrees() {
        if n + 1 < tgt.complex.min_degree() || n + 1 > tgt.complex.max_degree() {
            continue;
        }
        let hn = h.component(n);
        let r0 = tgt.offset(n + 1);
        let c0 = src.offset(n);
        for r in 0..hn.matrix().rows() {
            for c in 0..hn.matrix().cols() {
                m.set(r0 + r, c0 + c, hn.matrix().at(r, c).clone());
            }
        }
    }
    Ok(PicHomotopy {
        f: h.f.clone(),
        g: h.g.clone(),
        total: GroupHom::new_unchecked(src.group, tgt.group, m),
    })
}

/// Graded homotopy back to a chain homotopy: validate the three laws,
/// then read off the degree blocks.
pub fn chain_homotopy_from_pic(hh: &PicHomotopy) -> Result<ChainHomotopy, PicError> {
    let src = GradedTotal::new(hh.f.source());
    let tgt = GradedTotal::new(hh.f.target());
    if !window_check(&src, &tgt, &hh.total) {
        return Err(PicError::NotAHomotopy);
    }
    // D H + H D = G - F on the graded sums
    let lhs = tgt
        .d_total()
        .compose(&hh.total)
        .add(&hh.total.compose(&src.d_total()));
    let mut gf = IntMatrix::zero(tgt.group.generators(), src.group.generators());
    for n in src.complex.degrees() {
        if n < tgt.complex.min_degree() || n > tgt.complex.max_degree() {
            continue;
        }
        let diff = hh.g.component(n).sub(&hh.f.component(n));
        let r0 = tgt.offset(n);
        let c0 = src.offset(n);
        for r in 0..diff.matrix().rows() {
            for c in 0..diff.matrix().cols() {
                gf.set(r0 + r, c0 + c, diff.matrix().at(r, c).clone());
            }
        }
    }
    let rhs = GroupHom::new_unchecked(src.group.clone(), tgt.group.clone(), gf);
    if !lhs.sub(&rhs).is_zero() {
        return Err(PicError::NotAHomotopy);
    }
    let comps: Vec<(i64, GroupHom)> = src
        .complex
        .degrees()
        .filter(|&n| n + 1 >= tgt.complex.min_degree() && n + 1 <= tgt.complex.max_degree())
        .map(|n| {
            let rows = tgt.complex.group_at(n + 1).generators();
            let cols = src.complex.group_at(n).generators();
            let r0 = tgt.offset(n + 1);
            let c0 = src.offset(n);
            let m =
                IntMatrix::from_fn(rows, cols, |r, c| hh.total.matrix().at(r0 + r, c0 + c).clone());
            let hom =
                GroupHom::new_unchecked(src.complex.group_at(n), tgt.complex.group_at(n + 1), m);
            (n, hom)
        })
        .collect();
    let ch = ChainHomotopy::new(hh.f.clone(), hh.g.clone(), comps);
    if !ch.check() {
        return Err(PicError::NotAHomotopy);
    }
    Ok(ch)
}

/// Strict Picard-category identities on an instance concentrated in
/// degrees 0 and 1, checked exhaustively.
pub fn strict_picard_identities(a: &PicOmegaCat) -> ValidationReport {
    let mut report = ValidationReport::default();
    if a.max_degree() > 1 {
        for n in 2..=a.max_degree() {
            if !a.complex().group_at(n).is_trivial() {
                report.push(n, "instance is not concentrated in degrees 0 and 1");
                return report;
            }
        }
    }
    let elems = match a.enumerate() {
        Ok(e) => e,
        Err(_) => {
            report.push(0, "instance is infinite");
            return report;
        }
    };
    for f in &elems {
        let x = a.source(0, f);
        let y = a.target(0, f);
        // compositional inverse and f + f^{-1} = id_{x+y}
        let finv = a.add(&a.neg(f), &a.add(&x, &y));
        if a.compose(0, f, &finv) != Ok(y.clone()) || a.compose(0, &finv, f) != Ok(x.clone()) {
            report.push(1, "compositional inverse law fails");
        }
        if a.add(f, &finv) != a.add(&x, &y) {
            report.push(1, "f + f^{-1} != id_{x+y}");
        }
        // additive inverse is a morphism -x -> -y with f + (-f) = id_0
        let nf = a.neg(f);
        if a.source(0, &nf) != a.neg(&x) || a.target(0, &nf) != a.neg(&y) {
            report.push(1, "additive inverse has wrong endpoints");
        }
        if !a.is_zero(&a.add(f, &nf)) {
            report.push(1, "f + (-f) != id_0");
        }
        for h in &elems {
            if a.add(f, h) == a.zero_element() && h != &nf {
                report.push(1, "additive inverse is not unique");
            }
        }
    }
    // id_b + g.f = g + f for composable pairs
    for f in &elems {
        for g in &elems {
            if let Ok(gf) = a.compose(0, g, f) {
                let b = a.source(0, g);
                if a.add(&b, &gf) != a.add(g, f) {
                    report.push(1, "id_b + g.f != g + f");
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_iso_test;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn z_times(k: i64) -> ChainComplex {
        ChainComplex::from_diff_matrices(0, vec![z(), z()], vec![IntMatrix::from_i64(1, 1, &[k])])
            .unwrap()
    }

    fn z2_two_degrees() -> ChainComplex {
        ChainComplex::from_diff_matrices(
            0,
            vec![FgAbGroup::cyclic(2), FgAbGroup::cyclic(2)],
            vec![IntMatrix::zero(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn element_counts() {
        let a = p_of(&ChainComplex::concentrated(0, FgAbGroup::cyclic(2)));
        assert_eq!(a.enumerate().unwrap().len(), 2);
        let b = p_of(&z2_two_degrees());
        assert_eq!(b.enumerate().unwrap().len(), 4);
        let t = p_of(&ChainComplex::zero());
        assert_eq!(t.enumerate().unwrap().len(), 1);
    }

    #[test]
    fn pairs_view_counts_and_constraints() {
        // over Z/2 in degree 0 the top pair is forced diagonal
        let a = p_of(&ChainComplex::concentrated(0, FgAbGroup::cyclic(2)));
        for x in a.enumerate().unwrap() {
            let p = a.to_pairs(&x);
            assert!(a.pairs_valid(&p));
            assert_eq!(p.pairs[0].0, p.pairs[0].1);
            assert_eq!(a.from_pairs(&p), x);
        }
    }

    #[test]
    fn pairs_and_graded_ops_agree() {
        let a = p_of(&z_times_mod4());
        let elems = a.enumerate().unwrap();
        for x in &elems {
            for n in -1..=2 {
                assert_eq!(
                    a.to_pairs(&a.source(n, x)),
                    a.pairs_source(n, &a.to_pairs(x))
                );
                assert_eq!(
                    a.to_pairs(&a.target(n, x)),
                    a.pairs_target(n, &a.to_pairs(x))
                );
            }
            for y in &elems {
                for n in 0..=1 {
                    let g = a.compose(n, x, y);
                    let p = a.pairs_compose(n, &a.to_pairs(x), &a.to_pairs(y));
                    match (g, p) {
                        (Ok(gv), Ok(pv)) => assert_eq!(a.to_pairs(&gv), pv),
                        (Err(_), Err(_)) => {}
                        _ => panic!("graded and pairs composability disagree"),
                    }
                }
            }
        }
    }

    fn z_times_mod4() -> ChainComplex {
        ChainComplex::from_diff_matrices(
            0,
            vec![FgAbGroup::cyclic(4), FgAbGroup::cyclic(4)],
            vec![IntMatrix::from_i64(1, 1, &[2])],
        )
        .unwrap()
    }

    #[test]
    fn unit_axiom_and_not_composable() {
        let a = p_of(&z2_two_degrees());
        for x in a.enumerate().unwrap() {
            for n in 0..=1 {
                assert_eq!(a.compose(n, &x, &a.source(n, &x)).unwrap(), x);
            }
        }
        let elems = a.enumerate().unwrap();
        // mismatched composition must error: pick x with nonzero s_0
        let x = &elems[3];
        let y = a.zero_element();
        if a.source(0, x) != a.target(0, &y) {
            assert_eq!(a.compose(0, x, &y), Err(PicError::NotComposable));
        }
    }

    #[test]
    fn axiom_battery_on_finite_instances() {
        for c in [
            ChainComplex::concentrated(0, FgAbGroup::cyclic(2)),
            z2_two_degrees(),
            z_times_mod4(),
        ] {
            let report = validate_pic_axioms(&p_of(&c), 7);
            assert!(report.is_valid(), "{:?}", report.violations);
        }
    }

    #[test]
    fn axiom_battery_z_graded() {
        // Z-graded instance in degrees -1..1
        let c = ChainComplex::from_diff_matrices(
            -1,
            vec![FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), FgAbGroup::cyclic(2)],
            vec![IntMatrix::from_i64(1, 1, &[1]), IntMatrix::from_i64(1, 1, &[2])],
        )
        .unwrap();
        assert!(c.validate().is_valid());
        let a = p_of(&c);
        let report = validate_pic_axioms(&a, 7);
        assert!(report.is_valid(), "{:?}", report.violations);
        for x in a.enumerate().unwrap() {
            if !a.is_zero(&x) {
                assert!(a.mu(&x).is_some());
            }
        }
        assert_eq!(a.mu(&a.zero_element()), None);
    }

    #[test]
    fn q_of_recovers_complex_up_to_iso() {
        for c in [z_times(2), z_times_mod4(), ChainComplex::concentrated(2, FgAbGroup::cyclic(4))] {
            let a = p_of(&c);
            let q = q_of(&a);
            assert_eq!(q.min_degree(), c.min_degree());
            for n in c.degrees() {
                assert!(group_iso_test(&q.group_at(n), &c.group_at(n)), "degree {n}");
            }
        }
        assert!(q_of(&p_of(&ChainComplex::zero())).group_at(0).is_trivial());
    }

    #[test]
    fn h_is_a_chain_iso() {
        for c in [z_times(2), z_times_mod4()] {
            let a = p_of(&c);
            let iso = graded_iso(&a);
            let h = iso.h_chain_map(&c);
            assert!(h.is_valid(), "h must be a chain map");
            for (i, _) in c.degrees().enumerate() {
                assert!(iso.h[i].is_iso());
                // mutually inverse
                let hh = iso.h_inv[i].compose(&iso.h[i]);
                assert!(hh.sub(&GroupHom::identity(hh.source().clone())).is_zero());
            }
        }
    }

    #[test]
    fn phi_is_bijective_and_respects_structure() {
        let c = z_times_mod4();
        let a = p_of(&c);
        let iso = graded_iso(&a);
        let pq = p_of(&iso.q.complex);
        let elems = a.enumerate().unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for x in &elems {
            let y = iso.phi(&a, x);
            assert_eq!(iso.phi_inv(&a, &y), *x);
            seen.insert(y.clone());
            for n in -1..=2 {
                assert_eq!(iso.phi(&a, &a.source(n, x)), pq.source(n, &y));
                assert_eq!(iso.phi(&a, &a.target(n, x)), pq.target(n, &y));
            }
        }
        assert_eq!(seen.len(), elems.len());
        // compositions carry over
        for x in &elems {
            for y in &elems {
                for n in 0..=1 {
                    match a.compose(n, x, y) {
                        Ok(v) => assert_eq!(
                            iso.phi(&a, &v),
                            pq.compose(n, &iso.phi(&a, x), &iso.phi(&a, y)).unwrap()
                        ),
                        Err(_) => assert!(pq
                            .compose(n, &iso.phi(&a, x), &iso.phi(&a, y))
                            .is_err()),
                    }
                }
            }
        }
    }

    #[test]
    fn graded_iso_formula_example() {
        // (x0, x1) maps to ((x0, x0 + d x1), (x1, x1), ...)
        let c = z_times_mod4();
        let a = p_of(&c);
        let mut x = a.zero_element();
        x.coords[0] = c.group_at(0).element_i64(&[1]);
        x.coords[1] = c.group_at(1).element_i64(&[1]);
        let p = a.to_pairs(&x);
        assert_eq!(p.pairs[0].0, c.group_at(0).element_i64(&[1]));
        assert_eq!(p.pairs[0].1, c.group_at(0).element_i64(&[3]));
        assert_eq!(p.pairs[1].0, p.pairs[1].1);
        // zero maps to zero
        assert_eq!(
            a.to_pairs(&a.zero_element()),
            a.pairs_source(-10, &a.to_pairs(&a.zero_element()))
        );
    }

    #[test]
    fn phi_roundtrip_on_eight_elements() {
        // Z/2 in degrees 0..2 with zero differentials
        let g = FgAbGroup::cyclic(2);
        let c = ChainComplex::from_diff_matrices(
            0,
            vec![g.clone(), g.clone(), g.clone()],
            vec![IntMatrix::zero(1, 1), IntMatrix::zero(1, 1)],
        )
        .unwrap();
        let a = p_of(&c);
        let iso = graded_iso(&a);
        let elems = a.enumerate().unwrap();
        assert_eq!(elems.len(), 8);
        for x in &elems {
            assert_eq!(iso.phi_inv(&a, &iso.phi(&a, x)), *x);
        }
    }

    #[test]
    fn hom_sub_loops_and_prescribed_endpoints() {
        // A = P(Z/2 --id--> Z/2) in degrees 1, 0
        let g = FgAbGroup::cyclic(2);
        let c = ChainComplex::from_diff_matrices(
            0,
            vec![g.clone(), g.clone()],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let a = p_of(&c);
        let zero = a.zero_element();
        let mut one = a.zero_element();
        one.coords[0] = g.element_i64(&[1]);

        let loops = hom_sub(&a, 1, &zero, &zero).unwrap();
        let loop_elems = loops.elements(&a).unwrap();
        // loops at 0 match P(loop(Q(A))): kernel of id is trivial
        let lq = q_of(&a).loop_complex();
        let pl = p_of(&lq);
        assert_eq!(loop_elems.len(), pl.enumerate().unwrap().len());

        let hs = hom_sub(&a, 1, &zero, &one).unwrap();
        let elems = hs.elements(&a).unwrap();
        // brute-force oracle over all four elements
        let brute: Vec<_> = a
            .enumerate()
            .unwrap()
            .into_iter()
            .filter(|z| a.source(0, z) == zero && a.target(0, z) == one)
            .collect();
        assert_eq!(elems, brute);
        assert!(!elems.is_empty());
        // translation identifies with loops at 0
        let w = hs.witness.clone().unwrap();
        for z in &elems {
            let t = hs.to_base(&a, z).unwrap();
            assert_eq!(a.source(0, &t), zero);
            assert_eq!(a.target(0, &t), zero);
            let _ = &w;
        }
    }

    #[test]
    fn hom_sub_trivial_instance() {
        let a = p_of(&ChainComplex::zero());
        let z = a.zero_element();
        let hs = hom_sub(&a, 1, &z, &z).unwrap();
        assert_eq!(hs.elements(&a).unwrap().len(), 1);
    }

    #[test]
    fn homotopy_roundtrip_and_exhaustive_law() {
        // random-ish homotopies over Z/4 complexes
        let c = z_times_mod4();
        let f = ChainMap::identity(&c);
        let h0 = GroupHom::new(
            c.group_at(0),
            c.group_at(1),
            IntMatrix::from_i64(1, 1, &[1]),
        )
        .unwrap();
        // g = f + dh + hd
        let dh = c.diff_at(1).compose(&h0);
        let g0 = f.component(0).add(&dh);
        let hd = h0.compose(&c.diff_at(1));
        let g1 = f.component(1).add(&hd);
        let g = ChainMap::new(c.clone(), c.clone(), [(0i64, g0), (1i64, g1)]);
        assert!(g.is_valid());
        let h = ChainHomotopy::new(f.clone(), g.clone(), [(0i64, h0)]);
        assert!(h.check());

        let hh = pic_homotopy_from_chain(&h).unwrap();
        let back = chain_homotopy_from_pic(&hh).unwrap();
        for n in 0..=1 {
            assert_eq!(back.component(n).matrix(), h.component(n).matrix());
        }
        // DH + HD = G - F on every element of the finite instance
        let total = GradedTotal::new(&c);
        let a = p_of(&c);
        for x in a.enumerate().unwrap() {
            let z = total.pack(&x);
            let lhs = total.group.add(
                &total.d_total().apply(&hh.total.apply(&z)),
                &hh.total.apply(&total.d_total().apply(&z)),
            );
            let gfx = a.sub(
                &PicFunctor::new(g.clone()).apply(&x),
                &PicFunctor::new(f.clone()).apply(&x),
            );
            assert_eq!(lhs, total.pack(&gfx));
        }
        // zero homotopy between equal maps converts to zero
        let zh = ChainHomotopy::new(f.clone(), f.clone(), []);
        let zz = pic_homotopy_from_chain(&zh).unwrap();
        assert!(zz.total.is_zero());
        // invalid data is rejected in both directions
        let zero_map = ChainMap::zero(c.clone(), c.clone());
        let bad = ChainHomotopy::new(ChainMap::identity(&c), zero_map, []);
        assert_eq!(
            pic_homotopy_from_chain(&bad).unwrap_err(),
            PicError::NotAHomotopy
        );
    }

    #[test]
    fn strict_identities_hold_exhaustively() {
        let c = z2_two_degrees();
        let report = strict_picard_identities(&p_of(&c));
        assert!(report.is_valid(), "{:?}", report.violations);
        let trivial = strict_picard_identities(&p_of(&ChainComplex::zero()));
        assert!(trivial.is_valid());
        let c3 = ChainComplex::from_diff_matrices(
            0,
            vec![FgAbGroup::trivial(), FgAbGroup::cyclic(3)],
            vec![IntMatrix::zero(0, 1)],
        )
        .unwrap();
        assert!(strict_picard_identities(&p_of(&c3)).is_valid());
    }

    #[test]
    fn naturality_of_phi() {
        // f : quotient map (Z --2--> Z) -> Z/2 concentrated in degree 0
        let c = z_times(2);
        let d = ChainComplex::concentrated(0, FgAbGroup::cyclic(2));
        let q = GroupHom::new(z(), FgAbGroup::cyclic(2), IntMatrix::identity(1)).unwrap();
        let f = ChainMap::new(c.clone(), d.clone(), [(0i64, q)]);
        let a = p_of(&c);
        let b = p_of(&d);
        let iso_a = graded_iso(&a);
        let iso_b = graded_iso(&b);
        // PQ(Pf) acts degreewise through the induced maps on quotients
        let pf = PicFunctor::new(f.clone());
        for x in a.sample_elements(5, 10) {
            let lhs = iso_b.phi(&b, &pf.apply(&x));
            // induced functor on Q-side applied to phi_A(x)
            let qa = &iso_a.q;
            let qb = &iso_b.q;
            let comps: Vec<(i64, GroupHom)> = qa
                .complex
                .degrees()
                .enumerate()
                .map(|(i, n)| {
                    let ind = qa.quotients[i]
                        .induced(
                            &lift_to_total(&f, &qa.total, &qb.total),
                            &qb.quotients[i.min(qb.quotients.len() - 1)],
                        )
                        .unwrap();
                    (n, ind)
                })
                .collect();
            let qf = ChainMap::new(qa.complex.clone(), qb.complex.clone(), comps);
            let rhs = PicFunctor::new(qf).apply(&iso_a.phi(&a, &x));
            assert_eq!(lhs, rhs);
        }
    }

    fn lift_to_total(f: &ChainMap, src: &GradedTotal, tgt: &GradedTotal) -> GroupHom {
        let mut m = IntMatrix::zero(tgt.group.generators(), src.group.generators());
        for n in src.complex.degrees() {
            if n < tgt.complex.min_degree() || n > tgt.complex.max_degree() {
                continue;
            }
            let c = f.component(n);
            let r0 = tgt.offset(n);
            let c0 = src.offset(n);
            for r in 0..c.matrix().rows() {
                for cc in 0..c.matrix().cols() {
                    m.set(r0 + r, c0 + cc, c.matrix().at(r, cc).clone());
                }
            }
        }
        GroupHom::new_unchecked(src.group.clone(), tgt.group.clone(), m)
    }
}

//! Chain complexes of finitely generated abelian groups.
//!
//! Complexes are stored on a finite degree window; degrees outside the
//! window are implicitly the trivial group. `min_degree` is 0 for the
//! non-negatively graded case and may be negative for the Z-graded,
//! finite-support case.

use crate::group::{group_iso_test, subquotient, AlgebraError, FgAbGroup, GroupHom, Subquotient};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    groups: Vec<FgAbGroup>,
    /// diffs[i] is d : groups[i+1] -> groups[i]
    diffs: Vec<GroupHom>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Translation {
    ShiftUp,
    Loop,
    Path,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: i64,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, degree: i64, message: impl Into<String>) {
        self.violations.push(Violation {
            degree,
            message: message.into(),
        });
    }
}

impl ChainComplex {
    pub fn new(min_degree: i64, groups: Vec<FgAbGroup>, diffs: Vec<GroupHom>) -> Self {
        if !groups.is_empty() {
            assert_eq!(diffs.len(), groups.len() - 1, "one differential per adjacent pair");
        } else {
            assert!(diffs.is_empty());
        }
        for (i, d) in diffs.iter().enumerate() {
            assert_eq!(d.source(), &groups[i + 1], "differential source mismatch");
            assert_eq!(d.target(), &groups[i], "differential target mismatch");
        }
        ChainComplex {
            min_degree,
            groups,
            diffs,
        }
    }

    pub fn zero() -> Self {
        ChainComplex::new(0, vec![FgAbGroup::trivial()], vec![])
    }

    pub fn concentrated(degree: i64, group: FgAbGroup) -> Self {
        ChainComplex::new(degree, vec![group], vec![])
    }

    /// Build from groups indexed from `min_degree` with `d[i] : groups[i] -> groups[i-1]`.
    pub fn from_diff_matrices(
        min_degree: i64,
        groups: Vec<FgAbGroup>,
        mats: Vec<IntMatrix>,
    ) -> Result<Self, AlgebraError> {
        let mut diffs = Vec::new();
        for (i, m) in mats.into_iter().enumerate() {
            diffs.push(GroupHom::new(groups[i + 1].clone(), groups[i].clone(), m)?);
        }
        Ok(ChainComplex::new(min_degree, groups, diffs))
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.groups.len() as i64 - 1
    }

    pub fn group_at(&self, n: i64) -> FgAbGroup {
        let i = n - self.min_degree;
        if i < 0 || i >= self.groups.len() as i64 {
            FgAbGroup::trivial()
        } else {
            self.groups[i as usize].clone()
        }
    }

    /// d_n : A_n -> A_{n-1}; a zero hom outside the stored window.
    pub fn diff_at(&self, n: i64) -> GroupHom {
        let i = n - self.min_degree;
        if i >= 1 && i < self.groups.len() as i64 {
            self.diffs[(i - 1) as usize].clone()
        } else {
            GroupHom::zero(self.group_at(n), self.group_at(n - 1))
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_degree..=self.max_degree()
    }

    pub fn is_finite(&self) -> bool {
        self.groups.iter().all(|g| g.free_rank() == 0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, d) in self.diffs.iter().enumerate() {
            if !d.is_well_defined() {
                report.push(
                    self.min_degree + i as i64 + 1,
                    "differential is not a well-defined homomorphism",
                );
            }
        }
        for i in 1..self.diffs.len() {
            let dd = self.diffs[i - 1].compose(&self.diffs[i]);
            if !dd.is_zero() {
                report.push(
                    self.min_degree + i as i64 + 1,
                    "d composed with d is nonzero",
                );
            }
        }
        report
    }

    /// Homology at degree n as a subquotient with section data.
    pub fn homology_sq(&self, n: i64) -> Subquotient {
        subquotient(&self.diff_at(n), &self.diff_at(n + 1))
            .expect("d^2 = 0 must hold for homology")
    }

    pub fn homology(&self, n: i64) -> FgAbGroup {
        self.homology_sq(n).group().clone()
    }

    /// Degree shift up by one; degree 0 becomes trivial.
    pub fn shift_up(&self) -> ChainComplex {
        assert_eq!(self.min_degree, 0, "translations act on Ch+ only");
        let mut groups = vec![FgAbGroup::trivial()];
        groups.extend(self.groups.iter().cloned());
        let mut diffs = vec![GroupHom::zero(self.group_at(0), FgAbGroup::trivial())];
        diffs.extend(self.diffs.iter().cloned());
        ChainComplex::new(0, groups, diffs)
    }

    /// Z-graded shift: degree n of the result holds degree n-1 of the input.
    pub fn shift_up_z(&self) -> ChainComplex {
        ChainComplex::new(self.min_degree + 1, self.groups.clone(), self.diffs.clone())
    }

    /// Loop complex: degree 0 is Ker(d : A_1 -> A_0), higher degrees shift down.
    pub fn loop_complex(&self) -> ChainComplex {
        assert_eq!(self.min_degree, 0, "translations act on Ch+ only");
        let d1 = self.diff_at(1);
        let (k, incl) = d1.kernel();
        let mut groups = vec![k.clone()];
        let mut diffs: Vec<GroupHom> = Vec::new();
        if self.max_degree() >= 2 {
            // factor d_2 through the kernel inclusion
            let d2 = self.diff_at(2);
            let m = factor_through(&incl, &d2);
            diffs.push(GroupHom::new_unchecked(d2.source().clone(), k, m));
            groups.push(self.group_at(2));
            for n in 3..=self.max_degree() {
                groups.push(self.group_at(n));
                diffs.push(self.diff_at(n));
            }
        }
        ChainComplex::new(0, groups, diffs)
    }

    /// Path complex: degree 0 is A_1 + A_0, degree n is A_{n+1}, with
    /// differential (d, 0) out of A_2.
    pub fn path_complex(&self) -> ChainComplex {
        assert_eq!(self.min_degree, 0, "translations act on Ch+ only");
        let bottom = FgAbGroup::direct_sum(&[&self.group_at(1), &self.group_at(0)]);
        let mut groups = vec![bottom.clone()];
        let mut diffs: Vec<GroupHom> = Vec::new();
        if self.max_degree() >= 2 {
            let d2 = self.diff_at(2);
            let zeros = IntMatrix::zero(self.group_at(0).generators(), d2.matrix().cols());
            let m = d2.matrix().vstack(&zeros);
            diffs.push(GroupHom::new_unchecked(self.group_at(2), bottom, m));
            groups.push(self.group_at(2));
            for n in 3..=self.max_degree() {
                groups.push(self.group_at(n));
                diffs.push(self.diff_at(n));
            }
        }
        ChainComplex::new(0, groups, diffs)
    }

    pub fn translation(&self, kind: Translation) -> ChainComplex {
        match kind {
            Translation::ShiftUp => self.shift_up(),
            Translation::Loop => self.loop_complex(),
            Translation::Path => self.path_complex(),
        }
    }

    pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
        let min = a.min_degree.min(b.min_degree);
        let max = a.max_degree().max(b.max_degree());
        let groups: Vec<FgAbGroup> = (min..=max)
            .map(|n| FgAbGroup::direct_sum(&[&a.group_at(n), &b.group_at(n)]))
            .collect();
        let diffs: Vec<GroupHom> = (min + 1..=max)
            .map(|n| {
                let m = IntMatrix::block_diag(&[a.diff_at(n).matrix(), b.diff_at(n).matrix()]);
                GroupHom::new_unchecked(
                    groups[(n - min) as usize].clone(),
                    groups[(n - min - 1) as usize].clone(),
                    m,
                )
            })
            .collect();
        ChainComplex::new(min, groups, diffs)
    }
}

/// Solve `incl . x = f` columnwise; `f` must land in the sublattice.
fn factor_through(incl: &GroupHom, f: &GroupHom) -> IntMatrix {
    let mut m = IntMatrix::zero(incl.source().generators(), f.matrix().cols());
    let stacked = incl.matrix().hstack(incl.source().relations());
    // fast path: identity inclusion (kernel of a zero map)
    if incl.matrix() == &IntMatrix::identity(incl.matrix().rows()) {
        return f.matrix().clone();
    }
    for j in 0..f.matrix().cols() {
        let col = f.matrix().col(j);
        let sol = crate::matrix::solve_exact(&stacked, &col)
            .expect("image must lie in the kernel subgroup");
        for r in 0..m.rows() {
            m.set(r, j, sol[r].clone());
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    /// components[n - window_min] : source_n -> target_n over the union window
    window_min: i64,
    components: Vec<GroupHom>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: impl IntoIterator<Item = (i64, GroupHom)>,
    ) -> Self {
        let window_min = source.min_degree().min(target.min_degree());
        let window_max = source.max_degree().max(target.max_degree());
        let mut comps: Vec<GroupHom> = (window_min..=window_max)
            .map(|n| GroupHom::zero(source.group_at(n), target.group_at(n)))
            .collect();
        for (n, h) in components {
            assert!(n >= window_min && n <= window_max, "component out of window");
            assert_eq!(h.source(), &source.group_at(n));
            assert_eq!(h.target(), &target.group_at(n));
            comps[(n - window_min) as usize] = h;
        }
        ChainMap {
            source,
            target,
            window_min,
            components: comps,
        }
    }

    pub fn zero(source: ChainComplex, target: ChainComplex) -> Self {
        ChainMap::new(source, target, [])
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let comps: Vec<(i64, GroupHom)> = c
            .degrees()
            .map(|n| (n, GroupHom::identity(c.group_at(n))))
            .collect();
        ChainMap::new(c.clone(), c.clone(), comps)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> GroupHom {
        let i = n - self.window_min;
        if i < 0 || i >= self.components.len() as i64 {
            GroupHom::zero(self.source.group_at(n), self.target.group_at(n))
        } else {
            self.components[i as usize].clone()
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let lo = self.window_min;
        let hi = self.window_min + self.components.len() as i64;
        for n in lo..=hi {
            let lhs = self.target.diff_at(n).compose(&self.component(n));
            let rhs = self.component(n - 1).compose(&self.source.diff_at(n));
            if lhs.sub(&rhs).is_zero() {
                continue;
            }
            report.push(n, "component does not commute with differentials");
        }
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_well_defined() {
                report.push(lo + i as i64, "component is not a well-defined homomorphism");
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(&self.source, other.target());
        let lo = self.window_min.min(other.window_min);
        let hi = (self.window_min + self.components.len() as i64)
            .max(other.window_min + other.components.len() as i64);
        let comps: Vec<(i64, GroupHom)> = (lo..hi)
            .map(|n| (n, self.component(n).compose(&other.component(n))))
            .collect();
        ChainMap::new(other.source.clone(), self.target.clone(), comps)
    }

    pub fn induced_on_homology(&self, n: i64) -> Result<GroupHom, AlgebraError> {
        let s = self.source.homology_sq(n);
        let t = self.target.homology_sq(n);
        s.induced(&self.component(n), &t)
    }

    /// True iff the induced map on homology is an isomorphism in every
    /// degree of the combined support.
    pub fn is_quasi_iso(&self) -> bool {
        let lo = self.source.min_degree().min(self.target.min_degree());
        let hi = self.source.max_degree().max(self.target.max_degree());
        (lo..=hi).all(|n| {
            self.induced_on_homology(n)
                .map(|h| h.is_iso())
                .unwrap_or(false)
        })
    }
}

/// Mapping cone of `f : S -> T`: degree n is `T_n + S_{n-1}` with
/// differential `(b, a) |-> (-d b + f a, d a)`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let s = f.source();
    let t = f.target();
    let min = t.min_degree().min(s.min_degree() + 1);
    let max = t.max_degree().max(s.max_degree() + 1);
    let groups: Vec<FgAbGroup> = (min..=max)
        .map(|n| FgAbGroup::direct_sum(&[&t.group_at(n), &s.group_at(n - 1)]))
        .collect();
    let diffs: Vec<GroupHom> = (min + 1..=max)
        .map(|n| {
            let dt = t.diff_at(n);
            let ds = s.diff_at(n - 1);
            let fc = f.component(n - 1);
            let top = dt.matrix().neg().hstack(fc.matrix());
            let bottom = IntMatrix::zero(ds.matrix().rows(), dt.matrix().cols())
                .hstack(ds.matrix());
            GroupHom::new_unchecked(
                groups[(n - min) as usize].clone(),
                groups[(n - min - 1) as usize].clone(),
                top.vstack(&bottom),
            )
        })
        .collect();
    ChainComplex::new(min, groups, diffs)
}

/// Canonical triangle maps: `T -> cone(f)` (signed inclusion) and
/// `cone(f) -> S` shifted up one degree (projection).
pub fn cone_triangle(f: &ChainMap) -> (ChainMap, ChainMap) {
    let cone = mapping_cone(f);
    let s = f.source();
    let t = f.target();
    let shifted = s.shift_up_z();
    let incl_comps: Vec<(i64, GroupHom)> = t
        .degrees()
        .map(|n| {
            let tg = t.group_at(n);
            let cg = cone.group_at(n);
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            let m = IntMatrix::from_fn(cg.generators(), tg.generators(), |r, c| {
                if r == c {
                    BigInt::from(sign)
                } else {
                    BigInt::zero()
                }
            });
            (n, GroupHom::new_unchecked(tg, cg, m))
        })
        .collect();
    let incl = ChainMap::new(t.clone(), cone.clone(), incl_comps);
    let proj_comps: Vec<(i64, GroupHom)> = cone
        .degrees()
        .map(|n| {
            let cg = cone.group_at(n);
            let sg = shifted.group_at(n);
            let offset = t.group_at(n).generators();
            let m = IntMatrix::from_fn(sg.generators(), cg.generators(), |r, c| {
                if c == r + offset {
                    BigInt::from(1)
                } else {
                    BigInt::zero()
                }
            });
            (n, GroupHom::new_unchecked(cg, sg, m))
        })
        .collect();
    let proj = ChainMap::new(cone, shifted, proj_comps);
    (incl, proj)
}

#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    /// components[n]: source_n -> target_{n+1}, indexed from source min degree
    components: Vec<GroupHom>,
    window_min: i64,
}

impl ChainHomotopy {
    pub fn new(
        f: ChainMap,
        g: ChainMap,
        components: impl IntoIterator<Item = (i64, GroupHom)>,
    ) -> Self {
        assert_eq!(f.source(), g.source(), "homotopy endpoints share a source");
        assert_eq!(f.target(), g.target(), "homotopy endpoints share a target");
        let window_min = f.source().min_degree().min(f.target().min_degree());
        let window_max = f.source().max_degree().max(f.target().max_degree());
        let src = f.source().clone();
        let tgt = f.target().clone();
        let mut comps: Vec<GroupHom> = (window_min..=window_max)
            .map(|n| GroupHom::zero(src.group_at(n), tgt.group_at(n + 1)))
            .collect();
        for (n, h) in components {
            assert_eq!(h.source(), &src.group_at(n));
            assert_eq!(h.target(), &tgt.group_at(n + 1));
            comps[(n - window_min) as usize] = h;
        }
        ChainHomotopy {
            f,
            g,
            components: comps,
            window_min,
        }
    }

    pub fn component(&self, n: i64) -> GroupHom {
        let i = n - self.window_min;
        if i < 0 || i >= self.components.len() as i64 {
            GroupHom::zero(
                self.f.source().group_at(n),
                self.f.target().group_at(n + 1),
            )
        } else {
            self.components[i as usize].clone()
        }
    }

    /// dh + hd = g - f in every degree.
    pub fn check(&self) -> bool {
        let lo = self.window_min - 1;
        let hi = self.window_min + self.components.len() as i64 + 1;
        (lo..=hi).all(|n| {
            let dh = self.f.target().diff_at(n + 1).compose(&self.component(n));
            let hd = self.component(n - 1).compose(&self.f.source().diff_at(n));
            let gf = self.g.component(n).sub(&self.f.component(n));
            dh.add(&hd).sub(&gf).is_zero()
        })
    }
}

/// First-quadrant bicomplex with commuting differentials: horizontal
/// maps raise p, vertical maps lower q.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub groups: Vec<Vec<FgAbGroup>>,
    /// horiz[p][q] : (p,q) -> (p+1,q)
    pub horiz: Vec<Vec<GroupHom>>,
    /// vert[p][q] : (p,q) -> (p,q-1)
    pub vert: Vec<Vec<GroupHom>>,
}

impl BigradedComplex {
    pub fn p_len(&self) -> usize {
        self.groups.len()
    }

    pub fn q_len(&self) -> usize {
        self.groups.first().map(|c| c.len()).unwrap_or(0)
    }

    pub fn group_at(&self, p: usize, q: usize) -> FgAbGroup {
        if p < self.p_len() && q < self.q_len() {
            self.groups[p][q].clone()
        } else {
            FgAbGroup::trivial()
        }
    }

    pub fn horiz_at(&self, p: usize, q: usize) -> GroupHom {
        if p + 1 < self.p_len() && q < self.q_len() {
            self.horiz[p][q].clone()
        } else {
            GroupHom::zero(self.group_at(p, q), self.group_at(p + 1, q))
        }
    }

    pub fn vert_at(&self, p: usize, q: usize) -> GroupHom {
        if p < self.p_len() && q >= 1 && q < self.q_len() {
            self.vert[p][q].clone()
        } else {
            GroupHom::zero(self.group_at(p, q), self.group_at(p, q.wrapping_sub(1)))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for p in 0..self.p_len() {
            for q in 0..self.q_len() {
                if p + 2 < self.p_len() {
                    let dd = self.horiz_at(p + 1, q).compose(&self.horiz_at(p, q));
                    if !dd.is_zero() {
                        report.push(p as i64, format!("horizontal d^2 nonzero at ({p},{q})"));
                    }
                }
                if q >= 2 {
                    let dd = self.vert_at(p, q - 1).compose(&self.vert_at(p, q));
                    if !dd.is_zero() {
                        report.push(p as i64, format!("vertical d^2 nonzero at ({p},{q})"));
                    }
                }
                if p + 1 < self.p_len() && q >= 1 {
                    let a = self.vert_at(p + 1, q).compose(&self.horiz_at(p, q));
                    let b = self.horiz_at(p, q - 1).compose(&self.vert_at(p, q));
                    if !a.sub(&b).is_zero() {
                        report.push(p as i64, format!("squares do not commute at ({p},{q})"));
                    }
                }
            }
        }
        report
    }
}

/// Total complex with degree n = q - p and differential `d + (-1)^q delta`.
/// Supports negative degrees (p > q). `max_total` caps the top degree.
pub fn total_complex(b: &BigradedComplex, max_total: i64) -> ChainComplex {
    let p_len = b.p_len() as i64;
    let q_len = b.q_len() as i64;
    if p_len == 0 || q_len == 0 {
        return ChainComplex::zero();
    }
    let min = -(p_len - 1);
    let max = (q_len - 1).min(max_total);
    if max < min {
        return ChainComplex::zero();
    }
    // summand layout at total degree n: increasing p with q = n + p
    let summands = |n: i64| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for p in 0..p_len {
            let q = n + p;
            if q >= 0 && q < q_len {
                v.push((p as usize, q as usize));
            }
        }
        v
    };
    let groups: Vec<FgAbGroup> = (min..=max)
        .map(|n| {
            let parts: Vec<FgAbGroup> = summands(n).iter().map(|&(p, q)| b.group_at(p, q)).collect();
            let refs: Vec<&FgAbGroup> = parts.iter().collect();
            if refs.is_empty() {
                FgAbGroup::trivial()
            } else {
                FgAbGroup::direct_sum(&refs)
            }
        })
        .collect();
    let diffs: Vec<GroupHom> = (min + 1..=max)
        .map(|n| {
            let src_parts = summands(n);
            let tgt_parts = summands(n - 1);
            let tgt_offsets: Vec<usize> = tgt_parts
                .iter()
                .scan(0usize, |acc, &(p, q)| {
                    let off = *acc;
                    *acc += b.group_at(p, q).generators();
                    Some(off)
                })
                .collect();
            let src_group = groups[(n - min) as usize].clone();
            let tgt_group = groups[(n - 1 - min) as usize].clone();
            let mut m = IntMatrix::zero(tgt_group.generators(), src_group.generators());
            let mut src_off = 0usize;
            for &(p, q) in &src_parts {
                let gsz = b.group_at(p, q).generators();
                // vertical component to (p, q-1)
                if q >= 1 {
                    if let Some(ti) = tgt_parts.iter().position(|&t| t == (p, q - 1)) {
                        let vm = b.vert_at(p, q);
                        copy_block(&mut m, vm.matrix(), tgt_offsets[ti], src_off);
                    }
                }
                // horizontal component to (p+1, q), twisted by (-1)^q
                if let Some(ti) = tgt_parts.iter().position(|&t| t == (p + 1, q)) {
                    let hm = b.horiz_at(p, q);
                    let signed = if q % 2 == 0 {
                        hm.matrix().clone()
                    } else {
                        hm.matrix().neg()
                    };
                    copy_block(&mut m, &signed, tgt_offsets[ti], src_off);
                }
                src_off += gsz;
            }
            GroupHom::new_unchecked(src_group, tgt_group, m)
        })
        .collect();
    ChainComplex::new(min, groups, diffs)
}

fn copy_block(dst: &mut IntMatrix, block: &IntMatrix, row0: usize, col0: usize) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = block.at(r, c).clone();
            if !v.is_zero() {
                dst.set(row0 + r, col0 + c, v);
            }
        }
    }
}

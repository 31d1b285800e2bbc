//! Finitely generated abelian groups given by integer-matrix presentations.
//!
//! A group is `Z^g / colspan(R)` for a relation matrix `R` with `g` rows.
//! The Smith normal form of `R` is computed eagerly; it drives element
//! canonicalization, isomorphism testing, enumeration, kernels and
//! subquotients. Two presentations give isomorphic groups exactly when
//! their free ranks and nonzero invariant factors agree.

use crate::matrix::{kernel_basis, smith_normal_form, solve_exact, IntMatrix, SmithData};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("homomorphism does not map relations into the target relation span")]
    IllDefinedHom,
    #[error("composite of the two homs is nonzero; subquotient undefined")]
    CompositeNonzero,
    #[error("group has positive free rank; enumeration impossible")]
    InfiniteGroup,
    #[error("element does not lie in the expected subgroup")]
    NotInSubgroup,
}

struct GroupData {
    rels: IntMatrix,
    snf: SmithData,
    /// diagonal of the SNF padded to one entry per generator (0 = free)
    diag: Vec<BigInt>,
}

/// Finitely generated abelian group `Z^g / colspan(rels)`.
#[derive(Clone)]
pub struct FgAbGroup {
    data: Arc<GroupData>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.rels == other.data.rels
    }
}
impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup(Z^{}", self.free_rank())?;
        for d in self.invariant_factors() {
            write!(f, " + Z/{}", d)?;
        }
        write!(f, ")")
    }
}

/// Element of an `FgAbGroup`, stored in canonical coset coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}

impl FgAbGroup {
    pub fn new(rels: IntMatrix) -> Self {
        let snf = smith_normal_form(&rels);
        let diag = {
            let g = rels.rows();
            let m = g.min(rels.cols());
            (0..g)
                .map(|i| {
                    if i < m {
                        snf.d.at(i, i).clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        };
        FgAbGroup {
            data: Arc::new(GroupData { rels, snf, diag }),
        }
    }

    pub fn trivial() -> Self {
        FgAbGroup::new(IntMatrix::zero(0, 0))
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup::new(IntMatrix::zero(rank, 0))
    }

    pub fn cyclic(order: u64) -> Self {
        FgAbGroup::new(IntMatrix::from_i64(1, 1, &[order as i64]))
    }

    /// Direct sum, presented by the block-diagonal relation matrix.
    pub fn direct_sum(parts: &[&FgAbGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|g| &g.data.rels).collect();
        FgAbGroup::new(IntMatrix::block_diag(&blocks))
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.data.rels
    }

    pub fn generators(&self) -> usize {
        self.data.rels.rows()
    }

    pub fn free_rank(&self) -> usize {
        self.data.diag.iter().filter(|d| d.is_zero()).count()
    }

    /// Nonzero invariant factors >= 2, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.data
            .diag
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariant_factors().is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        let mut o = BigInt::one();
        for d in self.invariant_factors() {
            o *= d;
        }
        Some(o)
    }

    fn canonicalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.generators(), "coordinate length mismatch");
        let mut y = self.data.snf.u.mul_vec(coords);
        for (i, d) in self.data.diag.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let r = num_integer::Integer::mod_floor(&y[i], d);
            y[i] = r;
        }
        self.data.snf.u_inv.mul_vec(&y)
    }

    pub fn element(&self, coords: &[BigInt]) -> GroupElement {
        GroupElement {
            coords: self.canonicalize(coords),
        }
    }

    pub fn element_i64(&self, coords: &[i64]) -> GroupElement {
        let v: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&v)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::zero(); self.generators()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.generators()];
        coords[i] = BigInt::one();
        self.element(&coords)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords: Vec<BigInt> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        self.element(&coords)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let coords: Vec<BigInt> = a.coords.iter().map(|x| -x).collect();
        self.element(&coords)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        let coords: Vec<BigInt> = a.coords.iter().map(|x| x * k).collect();
        self.element(&coords)
    }

    pub fn is_zero_elem(&self, a: &GroupElement) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }

    /// Is `v` in the column span of the relation matrix?
    pub fn in_relation_span(&self, v: &[BigInt]) -> bool {
        let y = self.data.snf.u.mul_vec(v);
        y.iter().zip(&self.data.diag).all(|(yi, d)| {
            if d.is_zero() {
                yi.is_zero()
            } else {
                (yi % d).is_zero()
            }
        })
    }

    /// All elements, each exactly once, in canonical-representative order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>, AlgebraError> {
        if self.free_rank() > 0 {
            return Err(AlgebraError::InfiniteGroup);
        }
        let g = self.generators();
        let radices: Vec<BigInt> = self.data.diag.clone();
        let mut out = Vec::new();
        let mut y = vec![BigInt::zero(); g];
        loop {
            out.push(GroupElement {
                coords: self.data.snf.u_inv.mul_vec(&y),
            });
            // increment mixed-radix counter, last coordinate fastest
            let mut i = g;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                y[i] += 1;
                if y[i] < radices[i] {
                    break;
                }
                y[i] = BigInt::zero();
            }
        }
    }
}

/// True iff free ranks and nonzero invariant factors coincide.
pub fn group_iso_test(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.free_rank() == b.free_rank() && a.invariant_factors() == b.invariant_factors()
}

/// Homomorphism between presented groups, as a matrix on generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({:?} -> {:?}, {:?})",
            self.source, self.target, self.matrix
        )
    }
}

impl GroupHom {
    pub fn new(
        source: FgAbGroup,
        target: FgAbGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AlgebraError> {
        let h = GroupHom::new_unchecked(source, target, matrix);
        if h.is_well_defined() {
            Ok(h)
        } else {
            Err(AlgebraError::IllDefinedHom)
        }
    }

    pub fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Self {
        assert_eq!(matrix.cols(), source.generators(), "hom shape mismatch");
        assert_eq!(matrix.rows(), target.generators(), "hom shape mismatch");
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let m = IntMatrix::zero(target.generators(), source.generators());
        GroupHom::new_unchecked(source, target, m)
    }

    pub fn identity(g: FgAbGroup) -> Self {
        let m = IntMatrix::identity(g.generators());
        GroupHom::new_unchecked(g.clone(), g, m)
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_well_defined(&self) -> bool {
        let r = self.source.relations();
        (0..r.cols()).all(|j| {
            let img = self.matrix.mul_vec(&r.col(j));
            self.target.in_relation_span(&img)
        })
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.in_relation_span(&self.matrix.col(j)))
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.target.element(&self.matrix.mul_vec(x.coords()))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(
            self.source, other.target,
            "compose requires matching middle group"
        );
        GroupHom::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        GroupHom::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn neg(&self) -> GroupHom {
        GroupHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn sub(&self, other: &GroupHom) -> GroupHom {
        self.add(&other.neg())
    }

    /// Kernel subgroup with its inclusion. The zero hom returns the source
    /// presentation itself with the identity inclusion, so kernels of zero
    /// maps are equalities on presentations, not just isomorphisms.
    pub fn kernel(&self) -> (FgAbGroup, GroupHom) {
        if self.is_zero() {
            return (self.source.clone(), GroupHom::identity(self.source.clone()));
        }
        // lattice {x : M x in colspan(R_target)} = x-part of ker [M | -R_t]
        let m = &self.matrix;
        let stacked = m.hstack(&self.target.relations().neg());
        let l = kernel_basis(&stacked);
        let gens = IntMatrix::from_fn(self.source.generators(), l.cols(), |r, c| {
            l.at(r, c).clone()
        });
        // relations of K: {c : gens c in colspan(R_source)}
        let rel_stack = gens.hstack(&self.source.relations().neg());
        let krel_full = kernel_basis(&rel_stack);
        let krels = IntMatrix::from_fn(gens.cols(), krel_full.cols(), |r, c| {
            krel_full.at(r, c).clone()
        });
        let k = FgAbGroup::new(krels);
        let incl = GroupHom::new_unchecked(k.clone(), self.source.clone(), gens);
        (k, incl)
    }

    pub fn cokernel(&self) -> FgAbGroup {
        FgAbGroup::new(self.matrix.hstack(self.target.relations()))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Solve `self(x) = b` in the target group; any preimage.
    pub fn preimage(&self, b: &GroupElement) -> Option<GroupElement> {
        let stacked = self.matrix.hstack(self.target.relations());
        let sol = solve_exact(&stacked, b.coords())?;
        Some(self.source.element(&sol[..self.source.generators()]))
    }
}

/// A subquotient `Ker f / Im g` of the group `A = target(g) = source(f)`,
/// in canonical invariant-factor-bearing presentation, together with the
/// data needed to pass between it and the ambient group.
#[derive(Clone, Debug)]
pub struct Subquotient {
    group: FgAbGroup,
    ambient: FgAbGroup,
    /// columns: ambient coordinates of the subquotient generators
    gens_in_ambient: IntMatrix,
}

/// `Ker(ker_of) / Im(mod_image_of)`; requires `ker_of . mod_image_of = 0`.
pub fn subquotient(ker_of: &GroupHom, mod_image_of: &GroupHom) -> Result<Subquotient, AlgebraError> {
    assert_eq!(
        ker_of.source(),
        mod_image_of.target(),
        "subquotient requires matching ambient group"
    );
    let composite = ker_of.compose(mod_image_of);
    if !composite.is_zero() {
        return Err(AlgebraError::CompositeNonzero);
    }
    let ambient = ker_of.source().clone();
    let (k, incl) = ker_of.kernel();
    let gens = incl.matrix().clone();
    // express each generator image of g in kernel coordinates
    let gm = mod_image_of.matrix();
    let mut img_cols = IntMatrix::zero(k.generators(), gm.cols());
    for j in 0..gm.cols() {
        let v = gm.col(j);
        let c = express_in_lattice(&gens, &v).ok_or(AlgebraError::NotInSubgroup)?;
        for (r, e) in c.into_iter().enumerate() {
            img_cols.set(r, j, e);
        }
    }
    let rels = k.relations().hstack(&img_cols);
    Ok(Subquotient {
        group: FgAbGroup::new(rels),
        ambient,
        gens_in_ambient: gens,
    })
}

fn express_in_lattice(gens: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_exact(gens, v)
}

impl Subquotient {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn gens_in_ambient(&self) -> &IntMatrix {
        &self.gens_in_ambient
    }

    /// Canonical ambient representative of a subquotient element.
    pub fn rep(&self, h: &GroupElement) -> GroupElement {
        self.ambient
            .element(&self.gens_in_ambient.mul_vec(h.coords()))
    }

    /// Class of an ambient element that lies in the kernel subgroup.
    pub fn express(&self, z: &GroupElement) -> Result<GroupElement, AlgebraError> {
        self.express_coords(z.coords())
    }

    pub fn express_coords(&self, z: &[BigInt]) -> Result<GroupElement, AlgebraError> {
        // z must lie in the subgroup lattice modulo ambient relations
        let stacked = self.gens_in_ambient.hstack(self.ambient.relations());
        let sol = solve_exact(&stacked, z).ok_or(AlgebraError::NotInSubgroup)?;
        Ok(self.group.element(&sol[..self.group.generators()]))
    }

    /// The hom on subquotients induced by an ambient hom `phi` that maps
    /// kernel into kernel and image into image.
    pub fn induced(&self, phi: &GroupHom, target: &Subquotient) -> Result<GroupHom, AlgebraError> {
        let k = self.group.generators();
        let mut m = IntMatrix::zero(target.group.generators(), k);
        for j in 0..k {
            let b = self.gens_in_ambient.col(j);
            let w = phi.matrix().mul_vec(&b);
            let c = target.express_coords(&w)?;
            for (r, e) in c.coords().iter().enumerate() {
                m.set(r, j, e.clone());
            }
        }
        GroupHom::new(self.group.clone(), target.group.clone(), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn iso_test_crt() {
        let a = FgAbGroup::direct_sum(&[&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(3)]);
        let b = FgAbGroup::cyclic(6);
        assert!(group_iso_test(&a, &b));
        assert_eq!(a.invariant_factors(), vec![BigInt::from(6)]);
        assert!(!group_iso_test(&z(), &FgAbGroup::cyclic(2)));
        assert!(group_iso_test(&FgAbGroup::trivial(), &FgAbGroup::trivial()));
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        let g = FgAbGroup::direct_sum(&[&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(2)]);
        let els = g.enumerate().unwrap();
        assert_eq!(els.len(), 4);
        let set: BTreeSet<_> = els.iter().collect();
        assert_eq!(set.len(), 4);
        assert_eq!(FgAbGroup::cyclic(2).enumerate().unwrap().len(), 2);
        assert_eq!(z().enumerate().unwrap_err(), AlgebraError::InfiniteGroup);
    }

    #[test]
    fn element_equality_modulo_relations() {
        let g = FgAbGroup::cyclic(4);
        assert_eq!(g.element_i64(&[5]), g.element_i64(&[1]));
        assert_eq!(g.element_i64(&[-1]), g.element_i64(&[3]));
        assert!(g.is_zero_elem(&g.element_i64(&[4])));
        // Z/0 presented with an explicit zero relation column
        let h = FgAbGroup::new(IntMatrix::from_i64(1, 1, &[0]));
        assert_eq!(h.free_rank(), 1);
        assert_ne!(h.element_i64(&[2]), h.element_i64(&[-2]));
    }

    /// Brute-force oracle: multiset of element orders determines a finite
    /// abelian group up to isomorphism.
    fn order_multiset(g: &FgAbGroup) -> Vec<BigInt> {
        let els = g.enumerate().unwrap();
        let mut orders: Vec<BigInt> = els
            .iter()
            .map(|e| {
                let mut k = BigInt::one();
                let mut acc = e.clone();
                while !g.is_zero_elem(&acc) {
                    acc = g.add(&acc, e);
                    k += 1;
                }
                k
            })
            .collect();
        orders.sort();
        orders
    }

    #[test]
    fn iso_test_matches_order_multiset_oracle() {
        let cases = vec![
            FgAbGroup::new(IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])),
            FgAbGroup::new(IntMatrix::from_i64(2, 2, &[2, 1, 0, 2])),
            FgAbGroup::new(IntMatrix::from_i64(2, 2, &[4, 2, 2, 4])),
            FgAbGroup::new(IntMatrix::from_i64(1, 2, &[6, 4])),
        ];
        for a in &cases {
            for b in &cases {
                assert_eq!(
                    group_iso_test(a, b),
                    order_multiset(a) == order_multiset(b),
                    "iso test disagrees with oracle on {:?} vs {:?}",
                    a,
                    b
                );
            }
        }
    }

    #[test]
    fn subquotient_examples() {
        // ker(Z -> 0) mod im(Z --x2--> Z) = Z/2
        let to_zero = GroupHom::zero(z(), FgAbGroup::trivial());
        let times2 = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let sq = subquotient(&to_zero, &times2).unwrap();
        assert!(group_iso_test(sq.group(), &FgAbGroup::cyclic(2)));

        // ker(identity) mod im(0) = 0
        let idh = GroupHom::identity(z());
        let zero_in = GroupHom::zero(FgAbGroup::trivial(), z());
        let sq = subquotient(&idh, &zero_in).unwrap();
        assert!(sq.group().is_trivial());

        // ker(0: Z->Z) mod im(0) = Z
        let zh = GroupHom::zero(z(), z());
        let sq = subquotient(&zh, &zero_in).unwrap();
        assert!(group_iso_test(sq.group(), &z()));
    }

    #[test]
    fn subquotient_rejects_nonzero_composite() {
        let idh = GroupHom::identity(z());
        assert_eq!(
            subquotient(&idh, &idh).unwrap_err(),
            AlgebraError::CompositeNonzero
        );
    }

    #[test]
    fn kernel_of_zero_is_identity_on_presentations() {
        let g = FgAbGroup::cyclic(6);
        let f = GroupHom::zero(g.clone(), z());
        let (k, incl) = f.kernel();
        assert_eq!(k, g);
        assert_eq!(incl.matrix(), &IntMatrix::identity(1));
    }

    #[test]
    fn kernel_and_preimage() {
        // x2: Z/4 -> Z/4 has kernel Z/2 generated by 2
        let g = FgAbGroup::cyclic(4);
        let f = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let (k, incl) = f.kernel();
        assert!(group_iso_test(&k, &FgAbGroup::cyclic(2)));
        for e in k.enumerate().unwrap() {
            assert!(g.is_zero_elem(&f.apply(&incl.apply(&e))));
        }
        let pre = f.preimage(&g.element_i64(&[2])).unwrap();
        assert_eq!(f.apply(&pre), g.element_i64(&[2]));
        assert!(f.preimage(&g.element_i64(&[1])).is_none());
    }

    #[test]
    fn hom_well_definedness() {
        // Z/2 -> Z/4 sending 1 to 1 is not well defined; to 2 is
        let a = FgAbGroup::cyclic(2);
        let b = FgAbGroup::cyclic(4);
        assert!(GroupHom::new(a.clone(), b.clone(), IntMatrix::from_i64(1, 1, &[1])).is_err());
        assert!(GroupHom::new(a, b, IntMatrix::from_i64(1, 1, &[2])).is_ok());
    }

    #[test]
    fn induced_map_on_subquotients() {
        // H0 of (Z --2--> Z) is Z/2; the identity on Z induces an iso
        let d = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let to_zero = GroupHom::zero(z(), FgAbGroup::trivial());
        let sq = subquotient(&to_zero, &d).unwrap();
        let ind = sq.induced(&GroupHom::identity(z()), &sq).unwrap();
        assert!(ind.is_iso());
    }

    #[test]
    fn iso_test_is_equivalence_relation_on_test_set() {
        let set = vec![
            FgAbGroup::cyclic(6),
            FgAbGroup::direct_sum(&[&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(3)]),
            FgAbGroup::cyclic(4),
            z(),
            FgAbGroup::trivial(),
        ];
        for a in &set {
            assert!(group_iso_test(a, a));
            for b in &set {
                assert_eq!(group_iso_test(a, b), group_iso_test(b, a));
                for c in &set {
                    if group_iso_test(a, b) && group_iso_test(b, c) {
                        assert!(group_iso_test(a, c));
                    }
                }
            }
        }
    }
}

//! The group of cone classes of an arrangement, its coalgebra structure, and
//! the convolution ring of valuations.
//!
//! Classes are stored in the basis of open faces. A closed face `C̄` has
//! coefficient 1 on every face below `C`. Valuations are integer functions on
//! open faces extended linearly.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::complex::{bits, low_mask, FacePoset, SignVec};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rootsys::RootSystem;
use crate::scalar::Scalar;

pub(crate) fn parity(d: usize) -> i64 {
    if d.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// An element of the cone-class group, as coefficients on the open faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeClass {
    pub coeffs: Vec<i64>,
}

impl ConeClass {
    pub fn zero(n: usize) -> ConeClass {
        ConeClass { coeffs: vec![0; n] }
    }

    pub fn basis(n: usize, i: usize) -> ConeClass {
        let mut c = ConeClass::zero(n);
        c.coeffs[i] = 1;
        c
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `self += k·other`
    pub fn add_scaled(&mut self, k: i64, other: &ConeClass) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += k * b;
        }
    }

    pub fn add(&self, other: &ConeClass) -> ConeClass {
        let mut out = self.clone();
        out.add_scaled(1, other);
        out
    }

    pub fn sub(&self, other: &ConeClass) -> ConeClass {
        let mut out = self.clone();
        out.add_scaled(-1, other);
        out
    }

    pub fn scale(&self, k: i64) -> ConeClass {
        ConeClass { coeffs: self.coeffs.iter().map(|c| k * c).collect() }
    }

    /// Sparse `{faceIndex: coeff}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                m.insert(i.to_string(), json!(c));
            }
        }
        Value::Object(m)
    }
}

/// Class of the union of the faces selected by `member`.
pub fn union_class(poset: &FacePoset, member: impl Fn(usize) -> bool) -> ConeClass {
    ConeClass { coeffs: (0..poset.len()).map(|g| i64::from(member(g))).collect() }
}

/// `[C̄] = Σ_{C' ≤ C} [C']`.
pub fn closed_class(poset: &FacePoset, c: usize) -> ConeClass {
    let mut out = ConeClass::zero(poset.len());
    for &g in poset.below(c) {
        out.coeffs[g] = 1;
    }
    out
}

pub fn open_class(poset: &FacePoset, c: usize) -> ConeClass {
    ConeClass::basis(poset.len(), c)
}

/// `[C̊] = (−1)^{dim C} Σ_{F ≤ C} (−1)^{dim F} [F̄]`, computed from closed classes.
pub fn interior_class(poset: &FacePoset, c: usize) -> ConeClass {
    let mut out = ConeClass::zero(poset.len());
    for &f in poset.below(c) {
        out.add_scaled(parity(poset.dim(c) + poset.dim(f)), &closed_class(poset, f));
    }
    out
}

/// Coordinates `a` with `x = Σ_G a_G [Ḡ]`, by Möbius inversion `μ(G,F) = (−1)^{dim F − dim G}`.
pub fn closed_coordinates(poset: &FacePoset, x: &ConeClass) -> Vec<i64> {
    let mut a = vec![0; poset.len()];
    for (f, &xf) in x.coeffs.iter().enumerate() {
        if xf == 0 {
            continue;
        }
        for &g in poset.below(f) {
            a[g] += parity(poset.dim(f) + poset.dim(g)) * xf;
        }
    }
    a
}

pub fn from_closed_coordinates(poset: &FacePoset, a: &[i64]) -> ConeClass {
    let mut out = ConeClass::zero(poset.len());
    for (g, &ag) in a.iter().enumerate() {
        if ag != 0 {
            out.add_scaled(ag, &closed_class(poset, g));
        }
    }
    out
}

/// Whether `g`, restricted to the hyperplanes in `z`, lies below `c` restricted to `z`.
fn le_on(g: &SignVec, c: &SignVec, z: u128) -> bool {
    let gz = g.nz & z;
    gz & !c.nz == 0 && (g.neg ^ c.neg) & gz == 0
}

/// `[span F + C̄]`: the closed face of the hyperplanes through `F` that contains `C`.
pub fn span_plus(poset: &FacePoset, f: usize, c: usize) -> ConeClass {
    let z = poset.zero_set(f);
    let cs = poset.sign(c);
    union_class(poset, |g| le_on(&poset.sign(g), &cs, z))
}

/// One term `sign · [F̄] ⊗ [span F + C̄]` of the coproduct.
#[derive(Clone, Debug)]
pub struct CoproductTerm {
    pub face: usize,
    pub sign: i64,
    pub left: ConeClass,
    pub right: ConeClass,
}

impl CoproductTerm {
    pub fn to_json(&self) -> Value {
        json!([self.sign, self.left.to_json(), self.right.to_json()])
    }
}

/// `Δ(C̄) = Σ_{F ≤ C} (−1)^{dim F} [F̄] ⊗ [span F + C̄]`.
pub fn coproduct(poset: &FacePoset, c: usize) -> Vec<CoproductTerm> {
    poset
        .below(c)
        .iter()
        .map(|&f| CoproductTerm {
            face: f,
            sign: parity(poset.dim(f)),
            left: closed_class(poset, f),
            right: span_plus(poset, f, c),
        })
        .collect()
}

/// Counit on a class: open faces contribute `(−1)^{dim}`, so a closed face
/// gets `(−1)^{dim}` exactly when it is a linear subspace.
pub fn counit(poset: &FacePoset, x: &ConeClass) -> i64 {
    x.coeffs.iter().enumerate().map(|(g, &c)| c * parity(poset.dim(g))).sum()
}

/// An integer valuation, given by its values on the open faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub values: Vec<i64>,
}

impl Valuation {
    pub fn eval(&self, x: &ConeClass) -> i64 {
        self.values.iter().zip(&x.coeffs).map(|(v, c)| v * c).sum()
    }

    /// The valuation taking the given values on the closed faces.
    pub fn from_closed_values(poset: &FacePoset, closed: &[i64]) -> Valuation {
        let values = (0..poset.len())
            .map(|g| poset.below(g).iter().map(|&f| parity(poset.dim(g) + poset.dim(f)) * closed[f]).sum())
            .collect();
        Valuation { values }
    }

    pub fn closed_values(&self, poset: &FacePoset) -> Vec<i64> {
        (0..poset.len()).map(|g| poset.below(g).iter().map(|&f| self.values[f]).sum()).collect()
    }

    /// The point valuation `K ↦ [x ∈ K]` for `x` in the given face.
    pub fn point(poset: &FacePoset, face: usize) -> Valuation {
        Valuation { values: ConeClass::basis(poset.len(), face).coeffs }
    }
}

/// The coproduct as a dense linear map on the open basis.
pub struct Coalgebra {
    n: usize,
    dims: Vec<usize>,
    /// `delta_open[a]` is `Δ([a])` as an `n × n` row-major tensor.
    delta_open: Vec<Vec<i64>>,
}

impl Coalgebra {
    pub fn new(poset: &FacePoset) -> Coalgebra {
        let n = poset.len();
        let delta_closed: Vec<Vec<i64>> = (0..n)
            .map(|c| {
                let mut t = vec![0i64; n * n];
                for term in coproduct(poset, c) {
                    for (a, &l) in term.left.coeffs.iter().enumerate() {
                        if l == 0 {
                            continue;
                        }
                        for (b, &r) in term.right.coeffs.iter().enumerate() {
                            t[a * n + b] += term.sign * l * r;
                        }
                    }
                }
                t
            })
            .collect();
        let delta_open = (0..n)
            .map(|a| {
                let mut t = vec![0i64; n * n];
                for &g in poset.below(a) {
                    let s = parity(poset.dim(a) + poset.dim(g));
                    for (x, y) in t.iter_mut().zip(&delta_closed[g]) {
                        *x += s * y;
                    }
                }
                t
            })
            .collect();
        Coalgebra { n, dims: (0..n).map(|g| poset.dim(g)).collect(), delta_open }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `Δ(x)` as an `n × n` tensor in the open basis.
    pub fn delta(&self, x: &ConeClass) -> Vec<i64> {
        let mut t = vec![0i64; self.n * self.n];
        for (a, &c) in x.coeffs.iter().enumerate() {
            if c != 0 {
                for (x, y) in t.iter_mut().zip(&self.delta_open[a]) {
                    *x += c * y;
                }
            }
        }
        t
    }

    pub fn counit(&self, x: &ConeClass) -> i64 {
        x.coeffs.iter().zip(&self.dims).map(|(&c, &d)| c * parity(d)).sum()
    }

    /// Whether `(Δ⊗id)Δ(x) = (id⊗Δ)Δ(x)`.
    pub fn is_coassociative_on(&self, x: &ConeClass) -> bool {
        let n = self.n;
        let t = self.delta(x);
        let mut left = vec![0i64; n * n * n];
        let mut right = vec![0i64; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let c = t[a * n + b];
                if c == 0 {
                    continue;
                }
                // (Δ⊗id): Δ([a]) ⊗ [b]
                for (ij, &d) in self.delta_open[a].iter().enumerate() {
                    if d != 0 {
                        left[ij * n + b] += c * d;
                    }
                }
                // (id⊗Δ): [a] ⊗ Δ([b])
                for (jk, &d) in self.delta_open[b].iter().enumerate() {
                    if d != 0 {
                        right[a * n * n + jk] += c * d;
                    }
                }
            }
        }
        left == right
    }

    /// Whether `(ε⊗id)Δ(x) = x = (id⊗ε)Δ(x)`.
    pub fn satisfies_counit_laws_on(&self, x: &ConeClass) -> bool {
        let n = self.n;
        let t = self.delta(x);
        let mut left = vec![0i64; n];
        let mut right = vec![0i64; n];
        for a in 0..n {
            for b in 0..n {
                let c = t[a * n + b];
                left[b] += parity(self.dims[a]) * c;
                right[a] += parity(self.dims[b]) * c;
            }
        }
        left == x.coeffs && right == x.coeffs
    }

    /// `(f1 * f2)(x) = (f1 ⊗ f2)(Δx)`.
    pub fn convolve(&self, f1: &Valuation, f2: &Valuation) -> Valuation {
        let n = self.n;
        let values = (0..n)
            .map(|g| {
                let t = &self.delta_open[g];
                let mut acc = 0;
                for a in 0..n {
                    if f1.values[a] == 0 {
                        continue;
                    }
                    let row: i64 = (0..n).map(|b| t[a * n + b] * f2.values[b]).sum();
                    acc += f1.values[a] * row;
                }
                acc
            })
            .collect();
        Valuation { values }
    }

    /// The unit of the convolution ring, the counit viewed as a valuation.
    pub fn unit(&self) -> Valuation {
        Valuation { values: self.dims.iter().map(|&d| parity(d)).collect() }
    }
}

/// The functional `(λ, ·)`, optionally tilted to `(λ − εu, ·)` for an
/// infinitesimally small `ε > 0`. Ties `(λ, x) = 0` are broken by `−(u, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    pub lambda: Vector,
    pub tilt: Option<Vector>,
}

impl Functional {
    pub fn new(lambda: Vector) -> Functional {
        Functional { lambda, tilt: None }
    }

    pub fn tilted(lambda: Vector, u: Vector) -> Functional {
        Functional { lambda, tilt: Some(u) }
    }

    pub fn sign_at(&self, rs: &RootSystem, x: &[Scalar]) -> i8 {
        let s = rs.ip(&self.lambda, x).sign();
        match (&self.tilt, s) {
            (Some(u), 0) => -rs.ip(u, x).sign(),
            _ => s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(Scalar::is_zero) && self.tilt.as_ref().is_none_or(|u| u.iter().all(Scalar::is_zero))
    }
}

/// Whether the functional vanishes on `V₀`, that is, lies in the span of the hyperplane normals.
pub fn annihilates_v0(poset: &FacePoset, f: &Functional) -> bool {
    if poset.dim_v0() == 0 {
        return true;
    }
    let rs = poset.root_system();
    let rows: Vec<Vector> = poset.hyperplanes().iter().map(|&e| rs.root(e).to_vec()).collect();
    linalg::in_span(&rows, &f.lambda) && f.tilt.as_ref().is_none_or(|u| linalg::in_span(&rows, u))
}

/// Whether the closed face `C̄` lies in the closed half-space where the functional is `≥ 0`.
pub fn in_halfspace(poset: &FacePoset, c: usize, f: &Functional) -> bool {
    let rs = poset.root_system();
    annihilates_v0(poset, f) && poset.rays_of(c).all(|r| f.sign_at(rs, &poset.face(r).point) >= 0)
}

/// `ψ_λ(K) = 1` if `∅ ≠ K ⊆ closure(H_λ⁺)`, as a valuation on the open basis.
pub fn psi_lambda(poset: &FacePoset, f: &Functional) -> Valuation {
    let closed: Vec<i64> = (0..poset.len()).map(|c| i64::from(in_halfspace(poset, c, f))).collect();
    Valuation::from_closed_values(poset, &closed)
}

/// `ψ_λ` on a closed cone given as a union of faces, tested ray by ray.
pub fn psi_lambda_on_set(poset: &FacePoset, members: &[bool], f: &Functional) -> i64 {
    RaySigns::new(poset, f).psi(members)
}

/// Which faces of a poset violate `λ ≥ 0`, computed once for repeated `ψ_λ` evaluations.
#[derive(Clone, Debug)]
pub struct RaySigns {
    annihilates: bool,
    negative_rays: Vec<usize>,
}

impl RaySigns {
    pub fn new(poset: &FacePoset, f: &Functional) -> RaySigns {
        let rs = poset.root_system();
        let negative_rays = poset.rays().into_iter().filter(|&r| f.sign_at(rs, &poset.face(r).point) < 0).collect();
        RaySigns { annihilates: annihilates_v0(poset, f), negative_rays }
    }

    /// `ψ_λ` of the closed cone whose faces are `members`.
    pub fn psi(&self, members: &[bool]) -> i64 {
        let ok = self.annihilates && members.iter().any(|&m| m) && self.negative_rays.iter().all(|&r| !members[r]);
        i64::from(ok)
    }
}

/// Whether a point of face `x_face` lies in `K̄ + span F`, decided as `F∘C₀ ≤ K`.
pub fn span_membership(poset: &FacePoset, x_face: usize, f: usize, k: usize) -> Result<bool> {
    if !poset.le(f, k) {
        return Err(Error::FaceNotBelow { below: f, above: k });
    }
    Ok(poset.le(poset.compose(f, x_face), k))
}

/// `ψ_K(x,λ) = Σ_{F ≤ K} (−1)^{dim F} ψ_λ(F̄) [x ∈ K̄ + span F]` for `x` in `x_face`.
pub fn psi_k(poset: &FacePoset, k: usize, x_face: usize, f: &Functional) -> i64 {
    poset
        .below(k)
        .iter()
        .filter(|&&g| poset.le(poset.compose(g, x_face), k) && in_halfspace(poset, g, f))
        .map(|&g| parity(poset.dim(g)))
        .sum()
}

/// Subarrangements of a fixed arrangement, keyed by their hyperplane positions.
pub struct SubarrangementCache<'a> {
    full: &'a FacePoset,
    cache: HashMap<u128, (FacePoset, Vec<usize>)>,
}

impl<'a> SubarrangementCache<'a> {
    pub fn new(full: &'a FacePoset) -> Self {
        SubarrangementCache { full, cache: HashMap::new() }
    }

    pub fn full(&self) -> &FacePoset {
        self.full
    }

    /// The subarrangement on the positions in `mask`, with the map from full faces.
    pub fn get(&mut self, mask: u128) -> &(FacePoset, Vec<usize>) {
        let full = self.full;
        self.cache.entry(mask).or_insert_with(|| full.restrict(&bits(mask).collect::<Vec<_>>()))
    }
}

/// A closed cone of the arrangement: the closure of a face of a subarrangement.
#[derive(Clone, Debug)]
pub struct SubCone {
    /// Hyperplane positions of the subarrangement.
    pub mask: u128,
    /// Face of the subarrangement whose closure is the cone.
    pub face: usize,
    /// Full faces contained in the cone.
    pub members: Vec<bool>,
}

impl SubCone {
    pub fn new(cache: &mut SubarrangementCache, mask: u128, face: usize) -> SubCone {
        let (sub, map) = cache.get(mask);
        let members = map.iter().map(|&g| sub.le(g, face)).collect();
        SubCone { mask, face, members }
    }

    /// The cone `K̄` recovered inside the subarrangement on `mask` from a member set.
    pub fn locate(cache: &mut SubarrangementCache, mask: u128, members: &[bool]) -> Option<SubCone> {
        let full = cache.full();
        // The relative interior of a closed cone holds its highest-dimensional members.
        let top = (0..members.len()).filter(|&g| members[g]).max_by_key(|&g| full.dim(g))?;
        let (sub, map) = cache.get(mask);
        let face = map[top];
        map.iter().zip(members).all(|(&g, &m)| sub.le(g, face) == m).then(|| SubCone {
            mask,
            face,
            members: members.to_vec(),
        })
    }

    pub fn class(&self) -> ConeClass {
        ConeClass { coeffs: self.members.iter().map(|&m| i64::from(m)).collect() }
    }
}

/// `(f1 * f2)(K) = Σ_{F ∈ faces(K)} (−1)^{dim F} f1(F) f2(span F + K)`, evaluated
/// on the faces of the cone itself rather than through the coproduct tensor.
pub fn convolve_on_cone(cache: &mut SubarrangementCache, cone: &SubCone, f1: &Valuation, f2: &Valuation) -> i64 {
    let full = cache.full();
    let n_full = full.len();
    let (sub, map) = cache.get(cone.mask);
    let mut acc = 0;
    for &f in sub.below(cone.face) {
        let z = sub.zero_set(f);
        let cs = sub.sign(cone.face);
        let mut left = ConeClass::zero(n_full);
        let mut right = ConeClass::zero(n_full);
        for (g, &q) in map.iter().enumerate() {
            left.coeffs[g] = i64::from(sub.le(q, f));
            right.coeffs[g] = i64::from(le_on(&sub.sign(q), &cs, z));
        }
        acc += parity(sub.dim(f)) * f1.eval(&left) * f2.eval(&right);
    }
    acc
}

/// The four cones `K`, `K ∩ H_μ`, `K ∩ H̄_μ⁺`, `K ∩ H̄_μ⁻` of one Groemer relation.
#[derive(Clone, Debug)]
pub struct GroemerInstance {
    pub mu: usize,
    pub whole: SubCone,
    pub zero: SubCone,
    pub plus: SubCone,
    pub minus: SubCone,
}

/// Every closure of a face of every subarrangement, cut by every hyperplane.
pub fn groemer_instances(cache: &mut SubarrangementCache) -> Vec<GroemerInstance> {
    let full = cache.full();
    let p = full.num_hyperplanes();
    let signs: Vec<SignVec> = (0..full.len()).map(|g| full.sign(g)).collect();
    let mut out = Vec::new();
    for mask in 0..=low_mask(p) {
        let nfaces = cache.get(mask).0.len();
        for face in 0..nfaces {
            let whole = SubCone::new(cache, mask, face);
            for mu in 0..p {
                let cut = |keep: &dyn Fn(i8) -> bool| -> Vec<bool> {
                    whole.members.iter().zip(&signs).map(|(&m, s)| m && keep(s.get(mu))).collect()
                };
                let ext = mask | 1u128 << mu;
                let locate = |cache: &mut SubarrangementCache, members: Vec<bool>| {
                    SubCone::locate(cache, ext, &members).expect("a cut of a subordinate cone is subordinate")
                };
                let zero = locate(cache, cut(&|s| s == 0));
                let plus = locate(cache, cut(&|s| s >= 0));
                let minus = locate(cache, cut(&|s| s <= 0));
                out.push(GroemerInstance { mu, whole: whole.clone(), zero, plus, minus });
            }
        }
    }
    out
}

impl GroemerInstance {
    /// `f(K) + f(K ∩ H_μ) = f(K ∩ H̄_μ⁺) + f(K ∩ H̄_μ⁻)`.
    pub fn holds(&self, mut f: impl FnMut(&SubCone) -> i64) -> bool {
        f(&self.whole) + f(&self.zero) == f(&self.plus) + f(&self.minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{canonical_roots, parse_type, DEFAULT_GROUP_BOUND};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn poset(t: &str) -> FacePoset {
        let rs = Arc::new(canonical_roots(&parse_type(t).unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        FacePoset::full(rs, &g).unwrap()
    }

    fn vector(p: &FacePoset, c: &[i64]) -> Functional {
        Functional::new(c.iter().map(|&x| Scalar::from_int(p.root_system().ctx(), x)).collect())
    }

    #[test]
    fn closed_classes_match_point_indicators() {
        for t in ["A2", "B2", "A1xA1", "A3"] {
            let p = poset(t);
            for c in 0..p.len() {
                let cls = closed_class(&p, c);
                for g in 0..p.len() {
                    let inside = p.sign_of_point(&p.face(g).point).le(&p.sign(c));
                    assert_eq!(cls.coeffs[g], i64::from(inside), "{t} face {c} at {g}");
                }
            }
        }
    }

    #[test]
    fn a1_inclusion_exclusion() {
        let p = poset("A1");
        let (plus, minus, origin) = (p.base_chamber(), p.opposite(p.base_chamber()), p.minimal());
        let line = closed_class(&p, plus).add(&closed_class(&p, minus)).sub(&closed_class(&p, origin));
        assert_eq!(line.coeffs, vec![1; 3]);
        assert_eq!(closed_class(&p, plus).coeffs.iter().sum::<i64>(), 2);
        assert_eq!(closed_class(&p, origin), open_class(&p, origin));
    }

    #[test]
    fn mobius_roundtrip_and_interiors() {
        let p = poset("B2");
        for c in 0..p.len() {
            assert_eq!(interior_class(&p, c), open_class(&p, c));
            let x = open_class(&p, c);
            assert_eq!(from_closed_coordinates(&p, &closed_coordinates(&p, &x)), x);
        }
    }

    #[test]
    fn a1_coproduct_of_a_ray() {
        let p = poset("A1");
        let plus = p.base_chamber();
        let terms = coproduct(&p, plus);
        assert_eq!(terms.len(), 2);
        let line = ConeClass { coeffs: vec![1; 3] };
        for t in &terms {
            if t.face == p.minimal() {
                assert_eq!(t.sign, 1);
                assert_eq!(t.left, open_class(&p, p.minimal()));
                assert_eq!(t.right, closed_class(&p, plus));
            } else {
                assert_eq!(t.sign, -1);
                assert_eq!(t.left, closed_class(&p, plus));
                assert_eq!(t.right, line);
            }
        }
        let origin = coproduct(&p, p.minimal());
        assert_eq!(origin.len(), 1);
        assert_eq!(origin[0].sign, 1);
    }

    #[test]
    fn counit_values() {
        for t in ["A2", "B2"] {
            let p = poset(t);
            assert_eq!(counit(&p, &closed_class(&p, p.minimal())), 1);
            for &c in p.chambers() {
                assert_eq!(counit(&p, &closed_class(&p, c)), 0);
            }
            let whole = ConeClass { coeffs: vec![1; p.len()] };
            assert_eq!(counit(&p, &whole), 1);
        }
    }

    #[test]
    fn coalgebra_laws_on_closed_faces() {
        for t in ["A2", "B2", "A1xA1"] {
            let p = poset(t);
            let co = Coalgebra::new(&p);
            for c in 0..p.len() {
                let x = closed_class(&p, c);
                assert!(co.is_coassociative_on(&x), "{t} face {c}");
                assert!(co.satisfies_counit_laws_on(&x), "{t} face {c}");
            }
        }
    }

    #[test]
    fn psi_lambda_simple_cases() {
        let p = poset("A1");
        let plus = p.base_chamber();
        let e1 = vector(&p, &[1]);
        let psi = psi_lambda(&p, &e1);
        assert_eq!(psi.eval(&closed_class(&p, p.minimal())), 1);
        assert_eq!(psi.eval(&closed_class(&p, plus)), 1);
        assert_eq!(psi.eval(&closed_class(&p, p.opposite(plus))), 0);
        let zero = psi_lambda(&p, &vector(&p, &[0]));
        assert_eq!(zero.closed_values(&p), vec![1; 3]);
    }

    #[test]
    fn psi_lambda_satisfies_groemer_on_b2() {
        let p = poset("B2");
        let mut cache = SubarrangementCache::new(&p);
        let inst = groemer_instances(&mut cache);
        for l in [[0, 0], [1, 0], [2, -1], [-1, -3]] {
            let lambda = vector(&p, &l);
            let lin = psi_lambda(&p, &lambda);
            for g in &inst {
                assert!(g.holds(|k| psi_lambda_on_set(&p, &k.members, &lambda)), "{l:?} mu {}", g.mu);
                assert_eq!(lin.eval(&g.whole.class()), psi_lambda_on_set(&p, &g.whole.members, &lambda));
            }
        }
    }

    #[test]
    fn span_membership_examples() {
        let p = poset("A2");
        let b = p.base_chamber();
        for &f in p.below(b) {
            assert!(span_membership(&p, b, f, b).unwrap());
            assert_eq!(p.compose(f, b), b);
        }
        for x in 0..p.len() {
            assert!(span_membership(&p, x, b, b).unwrap());
        }
        // For x across the wall on ray r, B̄ + span r is the closed half-plane on B's side,
        // while the other ray s of B spans a line whose translate of B̄ reaches across.
        let rays: Vec<usize> = p.rays_of(b).collect();
        for (i, &r) in rays.iter().enumerate() {
            let s = rays[1 - i];
            let t = p.chambers().iter().copied().find(|&t| p.le(r, t) && p.separation_count(b, t) == 1).unwrap();
            assert!(!span_membership(&p, t, r, b).unwrap());
            assert!(span_membership(&p, t, s, b).unwrap());
        }
        assert!(matches!(span_membership(&p, b, b, p.minimal()), Err(Error::FaceNotBelow { .. })));
    }

    #[test]
    fn psi_k_in_rank_one() {
        let p = poset("A1");
        let b = p.base_chamber();
        assert_eq!(psi_k(&p, b, b, &vector(&p, &[1])), 0);
        assert_eq!(psi_k(&p, b, b, &vector(&p, &[-1])), 1);
    }

    #[test]
    fn psi_k_is_psi_lambda_convolved_with_a_point() {
        let p = poset("B2");
        let co = Coalgebra::new(&p);
        for l in [[0, 0], [1, 2], [-2, 1], [1, -1]] {
            let lambda = vector(&p, &l);
            let psi = psi_lambda(&p, &lambda);
            for x in 0..p.len() {
                let conv = co.convolve(&psi, &Valuation::point(&p, x));
                for k in 0..p.len() {
                    assert_eq!(conv.eval(&closed_class(&p, k)), psi_k(&p, k, x, &lambda), "{l:?} x {x} K {k}");
                }
            }
        }
    }

    fn valuation_strategy(n: usize) -> impl Strategy<Value = Valuation> {
        proptest::collection::vec(-3i64..=3, n).prop_map(|values| Valuation { values })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn convolution_ring_laws(f in valuation_strategy(13), g in valuation_strategy(13), h in valuation_strategy(13)) {
            let p = poset("A2");
            let co = Coalgebra::new(&p);
            let fg_h = co.convolve(&co.convolve(&f, &g), &h);
            let f_gh = co.convolve(&f, &co.convolve(&g, &h));
            prop_assert_eq!(fg_h, f_gh);
            prop_assert_eq!(co.convolve(&f, &co.unit()), f.clone());
            prop_assert_eq!(co.convolve(&co.unit(), &f), f.clone());
            let sum = Valuation { values: f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect() };
            let lhs = co.convolve(&sum, &h);
            let rhs: Vec<i64> = co.convolve(&f, &h).values.iter().zip(&co.convolve(&g, &h).values).map(|(a, b)| a + b).collect();
            prop_assert_eq!(lhs.values, rhs);
        }

        #[test]
        fn direct_convolution_matches_and_is_a_valuation(f in valuation_strategy(9), g in valuation_strategy(9)) {
            let p = poset("A1xA1");
            let co = Coalgebra::new(&p);
            let lin = co.convolve(&f, &g);
            let mut cache = SubarrangementCache::new(&p);
            for inst in groemer_instances(&mut cache) {
                for k in [&inst.whole, &inst.zero, &inst.plus, &inst.minus] {
                    prop_assert_eq!(convolve_on_cone(&mut cache, k, &f, &g), lin.eval(&k.class()));
                }
                prop_assert!(inst.holds(|k| convolve_on_cone(&mut cache, k, &f, &g)));
            }
        }

        #[test]
        fn psi_k_subdivision(mask in 0u128..16, seed in 0usize..1000, l0 in -3i64..=3, l1 in -3i64..=3) {
            let p = poset("B2");
            let lambda = vector(&p, &[l0, l1]);
            let (sub, map) = p.restrict(&bits(mask).collect::<Vec<_>>());
            let k = seed % sub.len();
            let x = seed / 7 % p.len();
            let lhs = psi_k(&sub, k, map[x], &lambda);
            let rhs: i64 = (0..p.len())
                .filter(|&g| map[g] == k)
                .map(|g| parity(sub.dim(k) + p.dim(g)) * psi_k(&p, g, x, &lambda))
                .sum();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

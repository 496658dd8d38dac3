//! Weighted complexes and weighted sums over chambers, the pizza quantities,
//! and checks of their expansions over 2-structures.

use serde_json::{json, Value};

use crate::complex::{Arrangement, FacePoset, SignVec};
use crate::conealg::{
    closed_class, closed_coordinates, in_halfspace, parity, psi_k, union_class, ConeClass, Functional,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rootsys::{bourbaki_roots, canonical_roots_in, FactorType, RootSystem};
use crate::scalar::Scalar;
use crate::twostruct::{self, Component, TwoStructure};

/// The faces of `L_λ`, or of `L_{λ,≥C}` when a base face is given.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    pub base: Option<usize>,
    pub faces: Vec<usize>,
    member: Vec<bool>,
}

impl WeightedComplex {
    pub fn contains(&self, d: usize) -> bool {
        self.member[d]
    }

    /// `D ∈ L` and `C ≤ D` imply `C ∈ L`, for `C` in the star of the base.
    pub fn is_lower_ideal(&self, poset: &FacePoset) -> bool {
        self.faces
            .iter()
            .all(|&d| poset.below(d).iter().all(|&c| self.base.is_some_and(|b| !poset.le(b, c)) || self.member[c]))
    }

    /// Every face lies below a chamber of the complex.
    pub fn is_pure(&self, poset: &FacePoset) -> bool {
        let chambers: Vec<usize> = poset.chambers().iter().copied().filter(|&t| self.member[t]).collect();
        self.faces.iter().all(|&d| chambers.iter().any(|&t| poset.le(d, t)))
    }
}

pub fn weighted_complex(poset: &FacePoset, f: &Functional, base: Option<usize>) -> WeightedComplex {
    let member: Vec<bool> =
        (0..poset.len()).map(|d| base.is_none_or(|c| poset.le(c, d)) && in_halfspace(poset, d, f)).collect();
    let faces = (0..poset.len()).filter(|&d| member[d]).collect();
    WeightedComplex { base, faces, member }
}

/// `(−1)^C = (−1)^{|S(B, C∘B)|}`.
pub fn face_sign(poset: &FacePoset, b: usize, c: usize) -> i64 {
    parity(poset.separation_count(b, poset.compose(c, b)))
}

/// `ψ_{H/C}(B,λ) = Σ_{D ∈ L_{λ,≥C}} (−1)^{dim D} (−1)^{|S(B, D∘B)|}`.
pub fn relative_weighted_sum(poset: &FacePoset, c: usize, b: usize, f: &Functional) -> Result<i64> {
    if !poset.le(c, b) {
        return Err(Error::FaceNotBelow { below: c, above: b });
    }
    let l = weighted_complex(poset, f, Some(c));
    Ok(l.faces.iter().map(|&d| parity(poset.dim(d)) * face_sign(poset, b, d)).sum())
}

/// `ψ_H(B,λ)`, the weighted sum over all of `L_λ`.
pub fn weighted_sum(poset: &FacePoset, b: usize, f: &Functional) -> i64 {
    relative_weighted_sum(poset, poset.minimal(), b, f).expect("the minimal face lies below every chamber")
}

/// `ψ_{D/C}(D',λ) = Σ (−1)^{dim C'}` over `C' ∈ L_{λ,≥C}` with `C'∘D' ≤ D`.
pub fn psi_face_pair(poset: &FacePoset, d: usize, c: usize, d2: usize, f: &Functional) -> Result<i64> {
    for x in [d, d2] {
        if !poset.le(c, x) {
            return Err(Error::FaceNotBelow { below: c, above: x });
        }
    }
    let l = weighted_complex(poset, f, Some(c));
    Ok(l.faces.iter().filter(|&&c1| poset.le(poset.compose(c1, d2), d)).map(|&c1| parity(poset.dim(c1))).sum())
}

/// `Σ_{T ≥ C} (−1)^{|S(B,T)|} ψ_{T/C}(B,λ)`, which must equal `ψ_{H/C}(B,λ)`.
pub fn chamber_aggregate(poset: &FacePoset, c: usize, b: usize, f: &Functional) -> Result<i64> {
    let mut acc = 0;
    for &t in poset.chambers() {
        if poset.le(c, t) {
            acc += parity(poset.separation_count(b, t)) * psi_face_pair(poset, t, c, b, f)?;
        }
    }
    Ok(acc)
}

/// `Σ_{T ≥ C} (−1)^{|S(B,T)|} ψ_{T̄}(x,λ)` for `x` in `(−C)∘B`: the weighted sum as
/// the alternating chamber sum of the valuation `K ↦ ψ_K(x,λ)`.
pub fn weighted_sum_via_valuation(poset: &FacePoset, c: usize, b: usize, f: &Functional) -> i64 {
    let x = poset.compose(poset.opposite(c), b);
    poset
        .chambers()
        .iter()
        .filter(|&&t| poset.le(c, t))
        .map(|&t| parity(poset.separation_count(b, t)) * psi_k(poset, t, x, f))
        .sum()
}

/// `Π(H)`, `P(H)` and `P₀(H)` in the open-face basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pizza {
    pub pi: ConeClass,
    pub p: ConeClass,
    pub p0: ConeClass,
}

pub fn pizza(poset: &FacePoset, b: usize) -> Pizza {
    let n = poset.len();
    let pi = ConeClass { coeffs: (0..n).map(|c| face_sign(poset, b, c)).collect() };
    let mut p = ConeClass::zero(n);
    let mut p0 = ConeClass::zero(n);
    for &t in poset.chambers() {
        let s = face_sign(poset, b, t);
        p.add_scaled(s, &closed_class(poset, t));
        p0.coeffs[t] += s;
    }
    Pizza { pi, p, p0 }
}

/// A class of a subarrangement rewritten in the open basis of the full arrangement.
pub fn pull_back(x: &ConeClass, map: &[usize]) -> ConeClass {
    ConeClass { coeffs: map.iter().map(|&q| x.coeffs[q]).collect() }
}

/// The endomorphism `[K̄] ↦ (−1)^{dim K}[K̊]`, applied to closed face classes of the arrangement.
pub fn endomorphism(poset: &FacePoset, x: &ConeClass) -> ConeClass {
    let a = closed_coordinates(poset, x);
    ConeClass { coeffs: a.iter().enumerate().map(|(g, &ag)| parity(poset.dim(g)) * ag).collect() }
}

/// Every 2-structure of the root system with its sign.
pub fn signed_two_structures(rs: &RootSystem, group: &crate::rootsys::Group) -> Result<Vec<(TwoStructure, i32)>> {
    twostruct::enumerate_two_structures(rs, group)?
        .into_iter()
        .map(|ts| {
            let e = twostruct::epsilon(rs, &ts)?;
            Ok((ts, e))
        })
        .collect()
}

/// Coordinatewise comparison of both sides of the 2-structure expansions of `Π` and `P`.
#[derive(Clone, Debug)]
pub struct PizzaReport {
    pub num_two_structures: usize,
    /// `Π(H) = Σ ε(φ) Π(H_φ)`.
    pub pi: bool,
    /// `P(H) = Σ ε(φ) P(H_φ)`.
    pub p: bool,
    /// `P = P₀` for `H` and every `H_φ`.
    pub p_equals_p0: bool,
    /// The closed-class form of the identity, carried to the open form by the endomorphism.
    pub endomorphism: bool,
    /// Faces where the `Π` expansion disagrees.
    pub mismatches: Vec<usize>,
}

impl PizzaReport {
    pub fn holds(&self) -> bool {
        self.pi && self.p && self.p_equals_p0 && self.endomorphism
    }

    pub fn to_json(&self) -> Value {
        json!({
            "twoStructures": self.num_two_structures,
            "pi": self.pi,
            "p": self.p,
            "pEqualsP0": self.p_equals_p0,
            "endomorphism": self.endomorphism,
            "mismatches": self.mismatches,
        })
    }
}

pub fn verify_pizza_expansion(arr: &Arrangement) -> Result<PizzaReport> {
    let full = &arr.poset;
    let n = full.len();
    let b = full.base_chamber();
    let whole = pizza(full, b);
    let signed = signed_two_structures(&arr.rs, &arr.group)?;
    let closed_form = |poset: &FacePoset, b: usize, map: Option<&[usize]>| -> ConeClass {
        let mut out = ConeClass::zero(n);
        for c in 0..poset.len() {
            let cls = match map {
                Some(m) => union_class(full, |g| poset.le(m[g], c)),
                None => closed_class(full, c),
            };
            out.add_scaled(face_sign(poset, b, c) * parity(poset.dim(c)), &cls);
        }
        out
    };
    let whole_closed = closed_form(full, b, None);
    let mut pi_sum = ConeClass::zero(n);
    let mut p_sum = ConeClass::zero(n);
    let mut closed_sum = ConeClass::zero(n);
    let mut p_equals_p0 = whole.p == whole.p0;
    let mut endo = endomorphism(full, &whole_closed) == whole.pi;
    for (ts, eps) in &signed {
        let (sub, map) = full.restrict(&ts.positives);
        let bs = sub.base_chamber();
        let part = pizza(&sub, bs);
        p_equals_p0 &= part.p == part.p0;
        let eps = i64::from(*eps);
        let pi_full = pull_back(&part.pi, &map);
        pi_sum.add_scaled(eps, &pi_full);
        p_sum.add_scaled(eps, &pull_back(&part.p, &map));
        let part_closed = closed_form(&sub, bs, Some(&map));
        endo &= endomorphism(full, &part_closed) == pi_full;
        closed_sum.add_scaled(eps, &part_closed);
    }
    endo &= closed_sum == whole_closed;
    endo &= (0..n).all(|g| {
        let x = ConeClass::basis(n, g);
        endomorphism(full, &endomorphism(full, &x)) == x
    });
    let mismatches = (0..n).filter(|&g| pi_sum.coeffs[g] != whole.pi.coeffs[g]).collect();
    Ok(PizzaReport {
        num_two_structures: signed.len(),
        pi: pi_sum == whole.pi,
        p: p_sum == whole.p,
        p_equals_p0,
        endomorphism: endo,
        mismatches,
    })
}

/// One 2-structure term of the second main identity.
#[derive(Clone, Debug)]
pub struct SecondMainTerm {
    /// Positive roots of φ, as root indices of the full system.
    pub positives: Vec<usize>,
    pub epsilon: i32,
    pub value: i64,
    pub via_valuation: i64,
}

#[derive(Clone, Debug)]
pub struct SecondMainReport {
    pub lhs: i64,
    pub rhs: i64,
    pub lhs_via_valuation: i64,
    pub terms: Vec<SecondMainTerm>,
}

impl SecondMainReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
            && self.lhs == self.lhs_via_valuation
            && self.terms.iter().all(|t| t.value == t.via_valuation)
    }
}

/// Positions of the positive roots supported on the generators in `gens`.
pub fn parabolic_positions(rs: &RootSystem, gens: &[usize]) -> Vec<usize> {
    let mask: u64 = gens.iter().map(|&s| 1u64 << s).sum();
    (0..rs.num_positive()).filter(|&e| rs.support(e) & !mask == 0).collect()
}

/// The face `C` on every hyperplane of `Φ_I` and on the positive side of the others.
pub fn parabolic_face(poset: &FacePoset, rs: &RootSystem, gens: &[usize]) -> usize {
    let e1 = parabolic_positions(rs, gens);
    let mut s = SignVec::positive(poset.num_hyperplanes());
    for e in e1 {
        s.set(e, 0);
    }
    poset.find(&s).expect("the parabolic face exists")
}

/// `ψ_{H/C}(B,λ) = Σ_{φ ∈ T(Φ_I)} ε(φ) ψ_{H_φ/C_φ}(B_φ,λ)` with `H_φ = φ⁺ ⊔ H⁽²⁾`,
/// each term also evaluated through the valuation `K ↦ ψ_K(x,λ)`.
pub fn verify_second_main(arr: &Arrangement, gens: &[usize], f: &Functional, bound: usize) -> Result<SecondMainReport> {
    let rs = &*arr.rs;
    let full = &arr.poset;
    let b = full.base_chamber();
    let c = parabolic_face(full, rs, gens);
    let e1 = parabolic_positions(rs, gens);
    let e2: Vec<usize> = (0..rs.num_positive()).filter(|e| !e1.contains(e)).collect();
    let lhs = relative_weighted_sum(full, c, b, f)?;
    let lhs_via_valuation = weighted_sum_via_valuation(full, c, b, f);
    let signed: Vec<(Vec<usize>, i32)> = if gens.is_empty() {
        vec![(Vec::new(), 1)]
    } else {
        let (prs, map) = rs.parabolic(gens)?;
        let group = prs.enumerate_group(bound)?;
        signed_two_structures(&prs, &group)?
            .into_iter()
            .map(|(ts, eps)| (ts.positives.iter().map(|&p| map[p]).collect(), eps))
            .collect()
    };
    let mut terms = Vec::with_capacity(signed.len());
    let mut rhs = 0;
    for (positives, eps) in signed {
        let mut positions: Vec<usize> = positives.iter().copied().chain(e2.iter().copied()).collect();
        positions.sort_unstable();
        let (sub, map) = full.restrict(&positions);
        let value = relative_weighted_sum(&sub, map[c], map[b], f)?;
        let via_valuation = weighted_sum_via_valuation(&sub, map[c], map[b], f);
        rhs += i64::from(eps) * value;
        terms.push(SecondMainTerm { positives, epsilon: eps, value, via_valuation });
    }
    Ok(SecondMainReport { lhs, rhs, lhs_via_valuation, terms })
}

/// The rank-one and rank-two closed forms, from the signs of `λ` on the positive
/// roots of an arrangement with `m` lines whose base chamber is all-positive.
///
/// Rank one: 0, 1, 2 for `λ` positive, zero, negative. Rank two with `m = 2^k`:
/// 1 at the origin; 2 on a ray with at least `m/2` negative signs; 4 in a sector
/// with an odd number of negative signs that is at least `m/2 + 1`; else 0.
pub fn closed_form_from_signs(signs: &[i8]) -> i64 {
    let m = signs.len();
    let zeros = signs.iter().filter(|&&s| s == 0).count();
    let neg = signs.iter().filter(|&&s| s < 0).count();
    if zeros == m {
        return 1;
    }
    if m == 1 {
        return if neg == 1 { 2 } else { 0 };
    }
    match zeros {
        1 if neg >= m / 2 => 2,
        0 if neg % 2 == 1 && neg > m / 2 => 4,
        _ => 0,
    }
}

/// Closed form for a rank-one or rank-two system evaluated at a functional.
pub fn rank12_closed_form(rs: &RootSystem, f: &Functional) -> Result<i64> {
    let m = rs.num_positive();
    let ok = rs.rank() == 1 || (rs.rank() == 2 && m.is_power_of_two() && m >= 4);
    if !ok {
        return Err(Error::UnsupportedType(format!("closed form needs A1 or I2(2^k), got {}", rs.sys.name)));
    }
    let signs: Vec<i8> = (0..m).map(|e| f.sign_at(rs, rs.root(e))).collect();
    Ok(closed_form_from_signs(&signs))
}

/// Rays of a rank-two arrangement in cyclic order, starting with the two rays of
/// the base chamber, so that sector `r` lies between rays `r` and `r + 1`.
pub fn dihedral_rays(poset: &FacePoset) -> Result<Vec<usize>> {
    if poset.dim_v() - poset.dim_v0() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: poset.dim_v() - poset.dim_v0() });
    }
    let b = poset.base_chamber();
    let mut order: Vec<usize> = poset.rays_of(b).collect();
    let total = poset.rays().len();
    while order.len() < total {
        let (prev, last) = (order[order.len() - 2], order[order.len() - 1]);
        let next = poset
            .chambers()
            .iter()
            .filter(|&&t| poset.le(last, t) && !poset.le(prev, t))
            .flat_map(|&t| poset.rays_of(t))
            .find(|&r| r != last)
            .expect("each ray bounds two sectors");
        order.push(next);
    }
    Ok(order)
}

/// Sectors of a rank-two arrangement, sector `r` bounded by rays `r` and `r + 1`.
pub fn dihedral_sectors(poset: &FacePoset) -> Result<Vec<usize>> {
    let rays = dihedral_rays(poset)?;
    let n = rays.len();
    Ok((0..n)
        .map(|r| {
            *poset
                .chambers()
                .iter()
                .find(|&&t| poset.le(rays[r], t) && poset.le(rays[(r + 1) % n], t))
                .expect("adjacent rays bound a sector")
        })
        .collect())
}

/// Orthogonal projection of `v` onto the span of the given roots, which must be independent.
pub fn project(rs: &RootSystem, basis: &[usize], v: &[Scalar]) -> Vector {
    let g: Vec<Vector> = basis.iter().map(|&a| basis.iter().map(|&b| rs.root_ip(a, b)).collect()).collect();
    let rhs: Vector = basis.iter().map(|&a| rs.ip(rs.root(a), v)).collect();
    let coeffs = linalg::solve(&g, &rhs).expect("basis roots are independent");
    let mut out = linalg::zeros(rs.ctx(), rs.dim());
    for (c, &a) in coeffs.iter().zip(basis) {
        linalg::axpy(&mut out, c, rs.root(a));
    }
    out
}

/// `ψ_{H_i}(B_i, λ_i)` for one component, through the projection of `λ` onto its span.
pub fn component_psi(rs: &RootSystem, comp: &Component, lambda: &[Scalar]) -> i64 {
    let basis: Vec<usize> =
        comp.positives.iter().copied().take(if comp.positives.len() == 1 { 1 } else { 2 }).collect();
    let li = project(rs, &basis, lambda);
    let signs: Vec<i8> = comp.positives.iter().map(|&a| rs.ip(rs.root(a), &li).sign()).collect();
    closed_form_from_signs(&signs)
}

#[derive(Clone, Debug)]
pub struct HerbReport {
    pub lhs: i64,
    pub rhs: i64,
    /// 2-structures whose span contains `λ`.
    pub contributing: usize,
}

/// `ψ_H(B,λ) = (−1)^{dim V − R} Σ_{φ: λ ∈ span φ} ε(φ) Π_i ψ_i(B_{i,φ}, λ_{i,φ})`.
pub fn gkm_vs_herb(arr: &Arrangement, signed: &[(TwoStructure, i32)], lambda: &[Scalar]) -> HerbReport {
    let rs = &*arr.rs;
    let lhs = weighted_sum(&arr.poset, arr.poset.base_chamber(), &Functional::new(lambda.to_vec()));
    let mut rhs = 0;
    let mut contributing = 0;
    let mut global = 1;
    for (ts, eps) in signed {
        global = parity(rs.rank() - ts.rank());
        let rows: Vec<Vector> = ts.positives.iter().map(|&a| rs.root(a).to_vec()).collect();
        if !linalg::in_span(&rows, lambda) {
            continue;
        }
        contributing += 1;
        let prod: i64 = ts.components.iter().map(|c| component_psi(rs, c, lambda)).product();
        rhs += i64::from(*eps) * prod;
    }
    HerbReport { lhs, rhs: global * rhs, contributing }
}

/// The product rule: on a canonical product arrangement, `ψ_{H/C}(B,λ)` against the
/// product over factors of the same sum with the projected `λ`, for every face `C`
/// and `B = C∘B₀`.
pub fn check_product(arr: &Arrangement, lambda: &[Scalar], bound: usize) -> Result<Vec<(i64, i64)>> {
    let rs = &*arr.rs;
    let full = &arr.poset;
    let ctx = rs.ctx();
    let mut factors = Vec::new();
    for factor in rs.sys.factors.iter().map(|f| &f.gens) {
        let sys = rs.sys.restrict(factor)?;
        let frs = canonical_roots_in(&sys, ctx)?;
        let embed: Vec<usize> = (0..frs.num_positive())
            .map(|k| {
                let mut v = linalg::zeros(ctx, rs.dim());
                for (j, &s) in factor.iter().enumerate() {
                    v[s] = frs.root(k)[j].clone();
                }
                rs.find(&v).ok_or_else(|| Error::InvalidChoice("factor root is not a root".into()))
            })
            .collect::<Result<_>>()?;
        let li: Vector = factor.iter().map(|&s| lambda[s].clone()).collect();
        factors.push((Arrangement::new(frs, bound)?, embed, Functional::new(li)));
    }
    let f = Functional::new(lambda.to_vec());
    let mut out = Vec::new();
    for c in 0..full.len() {
        let b = full.compose(c, full.base_chamber());
        let lhs = relative_weighted_sum(full, c, b, &f)?;
        let mut rhs = 1;
        for (fa, embed, fi) in &factors {
            let restrict = |face: usize| {
                let s = full.sign(face);
                let mut t = SignVec::zero();
                for (k, &e) in embed.iter().enumerate() {
                    t.set(k, s.get(e));
                }
                fa.poset.find(&t).expect("restricted sign vector is a face")
            };
            rhs *= relative_weighted_sum(&fa.poset, restrict(c), restrict(b), fi)?;
        }
        out.push((lhs, rhs));
    }
    Ok(out)
}

/// The inessential reduction: the subarrangement of `Φ_J` against the parabolic
/// arrangement on `span Φ_J` with `λ` projected, for every face `C` of the
/// subarrangement and `B = C∘B₀`. Expected `(−1)^{dim V₀}` times the latter when
/// `λ ⊥ V₀`, and 0 otherwise.
pub fn check_inessential(
    arr: &Arrangement,
    gens: &[usize],
    lambda: &[Scalar],
    bound: usize,
) -> Result<Vec<(i64, i64)>> {
    let rs = &*arr.rs;
    let positions = parabolic_positions(rs, gens);
    let (sub, _) = arr.poset.restrict(&positions);
    let (prs, map) = rs.parabolic(gens)?;
    let par = Arrangement::new(prs, bound)?;
    let order: Vec<usize> = (0..par.rs.num_positive())
        .map(|k| positions.iter().position(|&e| e == map[k]).expect("parabolic root is a hyperplane"))
        .collect();
    let f = Functional::new(lambda.to_vec());
    let simple: Vec<usize> = gens.iter().map(|&s| rs.simple(s)).collect();
    let projected = Functional::new(project(rs, &simple, lambda));
    let rows: Vec<Vector> = positions.iter().map(|&e| rs.root(e).to_vec()).collect();
    let orthogonal = linalg::in_span(&rows, lambda);
    let mut out = Vec::new();
    for c in 0..sub.len() {
        let b = sub.compose(c, sub.base_chamber());
        let lhs = relative_weighted_sum(&sub, c, b, &f)?;
        let rhs = if orthogonal {
            let lift = |face: usize| {
                let s = sub.sign(face);
                let mut t = SignVec::zero();
                for (k, &pos) in order.iter().enumerate() {
                    t.set(k, s.get(pos));
                }
                par.poset.find(&t).expect("parabolic face exists")
            };
            parity(sub.dim_v0()) * relative_weighted_sum(&par.poset, lift(c), lift(b), &projected)?
        } else {
            0
        };
        out.push((lhs, rhs));
    }
    Ok(out)
}

/// Ordered set partitions of `{0, …, n−1}`, blocks sorted increasingly.
pub fn ordered_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: u32, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        // Every nonempty subset of `rest` as the next block.
        let mut sub = rest;
        while sub != 0 {
            cur.push((0..32).filter(|i| sub >> i & 1 == 1).collect());
            rec(rest & !sub, cur, out);
            cur.pop();
            sub = (sub - 1) & rest;
        }
    }
    let mut out = Vec::new();
    rec((1u32 << n) - 1, &mut Vec::new(), &mut out);
    out
}

/// Maximal matchings of `{0, …, n−1}`: perfect, or missing one point when `n` is odd.
pub fn maximal_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &[usize], cur: &mut Vec<(usize, usize)>, skipped: bool, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&a, rest)) = free.split_first() else {
            out.push(cur.clone());
            return;
        };
        if free.len() % 2 == 1 && !skipped {
            rec(rest, cur, true, out);
        }
        for (k, &b) in rest.iter().enumerate() {
            let mut remaining = rest.to_vec();
            remaining.remove(k);
            cur.push((a, b));
            rec(&remaining, cur, skipped, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    rec(&all, &mut Vec::new(), false, &mut out);
    out
}

fn permutation_sign(seq: &[usize]) -> i64 {
    let inv =
        (0..seq.len()).flat_map(|i| (i + 1..seq.len()).map(move |j| (i, j))).filter(|&(i, j)| seq[i] > seq[j]).count();
    parity(inv)
}

/// `(−1)^p`: the sign of the word `i₁ j₁ i₂ j₂ … i_m j_m k` listing each edge
/// `iₜ < jₜ` followed by the unmatched point `k`, if any. For perfect matchings
/// this is the parity of the number of crossing pairs of edges.
pub fn matching_sign(p: &[(usize, usize)], n: usize) -> i64 {
    let mut word: Vec<usize> = p.iter().flat_map(|&(i, j)| [i.min(j), i.max(j)]).collect();
    let unmatched: Vec<usize> = (0..n).filter(|k| !word.contains(k)).collect();
    word.extend(unmatched);
    permutation_sign(&word)
}

/// `S(λ) = Σ (−1)^{|π|} (−1)^{g(π)}` over ordered partitions whose block prefix sums
/// of `λ` are all strictly positive, with `g(π)` read off blocks in decreasing order.
pub fn type_a_s(lambda: &[i64]) -> i64 {
    let mut acc = 0;
    for pi in ordered_set_partitions(lambda.len()) {
        let mut prefix = 0;
        let ok = pi.iter().all(|block| {
            prefix += block.iter().map(|&i| lambda[i]).sum::<i64>();
            prefix > 0
        });
        if ok {
            let word: Vec<usize> = pi.iter().flat_map(|block| block.iter().rev().copied()).collect();
            acc += parity(pi.len()) * permutation_sign(&word);
        }
    }
    acc
}

/// `c₁(a) = −d₁(a − ε)`.
pub fn c1(a: i64) -> i64 {
    i64::from(a > 0)
}

/// `c₂(u, v) = −d₂(v − ε, u − ε)` for an edge `i < j` with `u = λ_i`, `v = λ_j`.
pub fn c2(u: i64, v: i64) -> i64 {
    if u > 0 && v > 0 {
        1
    } else if v <= 0 && u + v > 0 {
        2
    } else {
        0
    }
}

/// `T(λ) = Σ_{p ∈ M_n} (−1)^p c(p,λ)`.
pub fn type_a_t(lambda: &[i64]) -> i64 {
    let n = lambda.len();
    maximal_matchings(n)
        .iter()
        .map(|p| {
            let mut c: i64 = p.iter().map(|&(i, j)| c2(lambda[i], lambda[j])).product();
            if n % 2 == 1 {
                let single =
                    (0..n).find(|k| p.iter().all(|&(i, j)| i != *k && j != *k)).expect("one point is unmatched");
                c *= c1(lambda[single]);
            }
            matching_sign(p, n) * c
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAIdentity {
    pub s: i64,
    pub t: i64,
    pub holds: bool,
}

/// `S(λ) = (−1)ⁿ T(λ)`.
pub fn type_a_identity(lambda: &[i64]) -> TypeAIdentity {
    let s = type_a_s(lambda);
    let t = type_a_t(lambda);
    TypeAIdentity { s, t, holds: s == parity(lambda.len()) * t }
}

/// The type-A identity recomputed on the type-B arrangement.
#[derive(Clone, Debug)]
pub struct TypeAArrangement {
    pub s: i64,
    pub t: i64,
    /// `ψ_{H/C}(B, λ̄_ε)` on `B_n` with `C` the ray through `(1, …, 1)`.
    pub psi: i64,
    /// `Σ_φ ε(φ) ψ_{H_φ/C_φ}(B_φ, λ̄_ε)` over the 2-structures of the type-A part.
    pub expansion: i64,
    pub second_main: bool,
}

impl TypeAArrangement {
    /// `S = (−1)^{C(n,2)} ψ`, `expansion = (−1)ⁿ (−1)^{C(n,2)} T`, and the second main identity.
    pub fn holds(&self, n: usize) -> bool {
        let b = parity(n * n.saturating_sub(1) / 2);
        self.s == b * self.psi && self.expansion == parity(n) * b * self.t && self.second_main
    }
}

pub fn type_a_via_arrangement(lambda: &[i64], bound: usize) -> Result<TypeAArrangement> {
    let n = lambda.len();
    if n == 0 {
        return Err(Error::Rank { family: "A".into(), rank: 0 });
    }
    let rs = bourbaki_roots(FactorType::B(n))?;
    let ctx = rs.ctx().clone();
    let arr = Arrangement::new(rs, bound)?;
    let reversed: Vector = lambda.iter().rev().map(|&x| Scalar::from_int(&ctx, x)).collect();
    let ones: Vector = (0..n).map(|_| Scalar::one(&ctx)).collect();
    let f = Functional::tilted(reversed, ones);
    let gens: Vec<usize> = (0..n - 1).collect();
    let report = verify_second_main(&arr, &gens, &f, bound)?;
    Ok(TypeAArrangement {
        s: type_a_s(lambda),
        t: type_a_t(lambda),
        psi: report.lhs,
        expansion: report.rhs,
        second_main: report.holds(),
    })
}

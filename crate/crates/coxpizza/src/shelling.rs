//! Shelling orders from the weak order on chambers, the fibers of `f_B`,
//! the acute-angle condition, and order-ideal properties of weighted chamber sets.

use serde_json::{json, Value};

use crate::complex::{Arrangement, FacePoset, SignVec};
use crate::conealg::{annihilates_v0, Functional};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rootsys::GroupElement;
use crate::weighted::weighted_complex;

/// A linear extension of `⪯_B` on the chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingOrder {
    pub base: usize,
    pub order: Vec<usize>,
}

impl ShellingOrder {
    pub fn position(&self, t: usize) -> Option<usize> {
        self.order.iter().position(|&x| x == t)
    }

    /// Whether no chamber is preceded by one strictly above it in `⪯_B`.
    pub fn is_linear_extension(&self, poset: &FacePoset) -> bool {
        self.order
            .iter()
            .enumerate()
            .all(|(i, &t)| self.order[i + 1..].iter().all(|&t2| !poset.weak_le(self.base, t2, t) || t2 == t))
    }

    pub fn to_json(&self) -> Value {
        json!({ "base": self.base, "order": self.order })
    }
}

/// Chambers sorted by `|S(B,T)|`, ties broken by the rendered sign vector.
pub fn shelling_order(poset: &FacePoset, b: usize) -> ShellingOrder {
    let n = poset.num_hyperplanes();
    let mut order: Vec<usize> = poset.chambers().to_vec();
    order.sort_by_cached_key(|&t| (poset.separation_count(b, t), poset.sign(t).render(n)));
    ShellingOrder { base: b, order }
}

/// The shelling condition for a sequence of chambers: for `j > 1`, the faces of
/// `T̄_j` lying in an earlier closed chamber form a nonempty complex that is pure
/// of codimension one.
pub fn is_shelling(poset: &FacePoset, order: &[usize]) -> bool {
    order.iter().enumerate().skip(1).all(|(j, &t)| {
        let shared: Vec<usize> =
            poset.below(t).iter().copied().filter(|&c| order[..j].iter().any(|&t2| poset.le(c, t2))).collect();
        let top = poset.dim(t) - 1;
        !shared.is_empty() && shared.iter().all(|&c| shared.iter().any(|&s| poset.dim(s) == top && poset.le(c, s)))
    })
}

/// Hyperplane positions that are walls of chamber `t`.
pub fn walls(poset: &FacePoset, t: usize) -> Vec<usize> {
    (0..poset.num_hyperplanes()).filter(|&e| poset.find(&flip(poset.sign(t), e)).is_some()).collect()
}

fn flip(mut s: SignVec, e: usize) -> SignVec {
    s.set(e, -s.get(e));
    s
}

/// For each chamber after the first, the walls it shares with earlier chambers
/// are exactly its walls in `S(B,T)`.
pub fn entering_walls_match(poset: &FacePoset, order: &ShellingOrder) -> bool {
    order.order.iter().enumerate().skip(1).all(|(j, &t)| {
        let sep = poset.separation(order.base, t);
        walls(poset, t).into_iter().all(|e| {
            let across = poset.find(&flip(poset.sign(t), e)).expect("wall has a neighbour");
            let earlier = order.position(across).is_some_and(|i| i < j);
            earlier == (sep >> e & 1 == 1)
        })
    })
}

/// The fibers of `f_B(C) = C∘B` along a shelling order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPartition {
    /// `fibers[i]` holds the faces `C ≤ T_i` with `C ≰ T_j` for all `j < i`.
    pub fibers: Vec<Vec<usize>>,
    /// The same fibers computed as `{C : C∘B = T_i}` agree.
    pub matches_composition: bool,
    /// Every face lies in exactly one fiber.
    pub is_partition: bool,
}

pub fn fiber_partition(poset: &FacePoset, order: &ShellingOrder) -> FiberPartition {
    let b = order.base;
    let fibers: Vec<Vec<usize>> = order
        .order
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            poset.below(t).iter().copied().filter(|&c| order.order[..i].iter().all(|&t2| !poset.le(c, t2))).collect()
        })
        .collect();
    let matches_composition = order.order.iter().zip(&fibers).all(|(&t, fiber)| {
        let by_compose: Vec<usize> = (0..poset.len()).filter(|&c| poset.compose(c, b) == t).collect();
        let mut sorted = fiber.clone();
        sorted.sort_unstable();
        sorted == by_compose
    });
    let mut seen = vec![0usize; poset.len()];
    for &c in fibers.iter().flatten() {
        seen[c] += 1;
    }
    let is_partition = seen.iter().all(|&k| k == 1);
    FiberPartition { fibers, matches_composition, is_partition }
}

/// Outcome of the acute-angle test on all chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionA {
    /// A chamber and two of its walls whose inward normals pair positively.
    pub witness: Option<(usize, usize, usize)>,
}

impl ConditionA {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

fn inward_normal(poset: &FacePoset, t: usize, e: usize) -> Vector {
    let rs = poset.root_system();
    let root = rs.root(poset.hyperplanes()[e]);
    if poset.sign(t).get(e) > 0 {
        root.to_vec()
    } else {
        linalg::neg(root)
    }
}

/// Pairwise inner products of the inward wall normals of every chamber are `≤ 0`.
pub fn check_condition_a(poset: &FacePoset) -> Result<ConditionA> {
    let rs = poset.root_system();
    let ess = poset.dim_v() - poset.dim_v0();
    for &t in poset.chambers() {
        let w = walls(poset, t);
        if w.len() > ess {
            return Err(Error::NonSimplicial { chamber: t, walls: w.len(), dim: ess });
        }
        let normals: Vec<Vector> = w.iter().map(|&e| inward_normal(poset, t, e)).collect();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if rs.ip(&normals[i], &normals[j]).sign() > 0 {
                    return Ok(ConditionA { witness: Some((t, w[i], w[j])) });
                }
            }
        }
    }
    Ok(ConditionA { witness: None })
}

/// The inclusion `T ⊆ S̊ + ℝ_{>0} n_e` for every chamber `T` and wall `e` with
/// inward normal `n_e`, checked through the rays of `T`: the ray off the wall,
/// projected along `n_e` onto the wall, must lie in the cone of the other rays.
/// Needs an essential arrangement whose roots span the ambient space.
pub fn condition_a_by_rays(poset: &FacePoset) -> bool {
    let rs = poset.root_system();
    poset.chambers().iter().all(|&t| {
        let rays: Vec<usize> = poset.rays_of(t).collect();
        walls(poset, t).into_iter().all(|e| {
            let n = inward_normal(poset, t, e);
            let (on, off): (Vec<usize>, Vec<usize>) = rays.iter().partition(|&&r| poset.sign(r).get(e) == 0);
            let [r0] = off[..] else { return false };
            let p = &poset.face(r0).point;
            let t0 = &rs.ip(p, &n) * &rs.ip(&n, &n).inv().expect("nonzero normal");
            let mut proj = p.clone();
            linalg::axpy(&mut proj, &-t0, &n);
            let pts: Vec<&Vector> = on.iter().map(|&r| &poset.face(r).point).collect();
            let g: Vec<Vector> = pts.iter().map(|a| pts.iter().map(|b| rs.ip(a, b)).collect()).collect();
            let rhs: Vector = pts.iter().map(|a| rs.ip(a, &proj)).collect();
            linalg::solve(&g, &rhs).is_some_and(|c| c.iter().all(|x| x.sign() >= 0))
        })
    })
}

fn membership(poset: &FacePoset, f: &Functional) -> Vec<bool> {
    let l = weighted_complex(poset, f, None);
    (0..poset.len()).map(|d| poset.is_chamber(d) && l.contains(d)).collect()
}

/// The weighted chambers as an initial segment of a shelling order.
#[derive(Clone, Debug)]
pub struct InitialSegment {
    /// Chamber on the positive side of every flipped normal `ε_e α_e`.
    pub base: usize,
    /// `ε_e` for each hyperplane position.
    pub flips: Vec<i8>,
    pub segment_length: usize,
    pub num_chambers: usize,
    /// The base lies in `L_λ` (vacuous when `L_λ` is empty).
    pub base_in_complex: bool,
    /// `T ∩ L_λ` is a lower order ideal of `⪯_B`.
    pub is_lower_ideal: bool,
    /// Adjacent pairs to which the crossing-wall step applies.
    pub crossing_steps: usize,
    pub crossing_steps_hold: bool,
    /// Weighted chambers first, then the rest, each by `|S(B,T)|`: a shelling.
    pub order: ShellingOrder,
    pub order_is_shelling: bool,
}

impl InitialSegment {
    pub fn holds(&self) -> bool {
        self.base_in_complex && self.is_lower_ideal && self.crossing_steps_hold && self.order_is_shelling
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order.order,
            "segmentLength": self.segment_length,
            "idealChecks": if self.holds() { "pass" } else { "fail" },
        })
    }
}

/// Builds `B` with signs `s(λ)∘s(B₀)` and `ε_e = s(B)_e`, so that `(λ, ε_e α_e) ≥ 0`
/// and `B ⊆ H⁺_{ε_e α_e}` for every `e`, then checks the ideal property.
pub fn weighted_initial_segment(poset: &FacePoset, f: &Functional) -> InitialSegment {
    let rs = poset.root_system();
    let n = poset.num_hyperplanes();
    let mut lambda_sign = SignVec::zero();
    for (k, &e) in poset.hyperplanes().iter().enumerate() {
        lambda_sign.set(k, f.sign_at(rs, rs.root(e)));
    }
    let base_sign = lambda_sign.compose(&poset.sign(poset.base_chamber()));
    let b = poset.find(&base_sign).expect("composite with a chamber is a chamber");
    let flips: Vec<i8> = (0..n).map(|e| base_sign.get(e)).collect();
    let member = membership(poset, f);
    let segment_length = member.iter().filter(|&&m| m).count();
    let base_in_complex = member[b] || segment_length == 0;
    let chambers = poset.chambers();
    let is_lower_ideal =
        chambers.iter().all(|&t2| !member[t2] || chambers.iter().all(|&t| member[t] || !poset.weak_le(b, t, t2)));
    let mut crossing_steps = 0;
    let mut crossing_steps_hold = true;
    if annihilates_v0(poset, f) {
        for &t2 in chambers {
            for e in walls(poset, t2) {
                let t = poset.find(&flip(poset.sign(t2), e)).expect("wall has a neighbour");
                let root = rs.root(poset.hyperplanes()[e]);
                if poset.sign(t2).get(e) < 0 && f.sign_at(rs, root) >= 0 && member[t2] {
                    crossing_steps += 1;
                    crossing_steps_hold &= member[t];
                }
            }
        }
    }
    let mut order: Vec<usize> = chambers.to_vec();
    order.sort_by_cached_key(|&t| (!member[t], poset.separation_count(b, t), poset.sign(t).render(n)));
    let order = ShellingOrder { base: b, order };
    let order_is_shelling = order.is_linear_extension(poset) && is_shelling(poset, &order.order);
    InitialSegment {
        base: b,
        flips,
        segment_length,
        num_chambers: chambers.len(),
        base_in_complex,
        is_lower_ideal,
        crossing_steps,
        crossing_steps_hold,
        order,
        order_is_shelling,
    }
}

/// `W_λ = {w : w(B₀) ∈ L_λ}` against the strong Bruhat order.
#[derive(Clone, Debug)]
pub struct BruhatReport {
    pub size: usize,
    pub group_order: usize,
    /// Bruhat covers `z ⋖ w` examined.
    pub covers: usize,
    /// `w ∈ W_λ` and `z ⋖ w` imply `z ∈ W_λ`.
    pub strong_ideal: bool,
    /// The weighted chambers form a lower ideal of the weak order from `B₀`.
    pub weak_ideal: bool,
    /// `(z⁻¹λ, x) ≥ (w⁻¹λ, x)` on every cover and every sample point `x ∈ B₀`.
    pub monotone: bool,
}

impl BruhatReport {
    pub fn holds(&self) -> bool {
        self.strong_ideal && self.weak_ideal && self.monotone
    }
}

pub fn strong_bruhat_ideal(arr: &Arrangement, lambda: &[crate::scalar::Scalar]) -> Result<BruhatReport> {
    let rs = &*arr.rs;
    let poset = &arr.poset;
    let group = &arr.group;
    if let Some(e) = (0..rs.num_positive()).find(|&e| rs.ip(rs.root(e), lambda).sign() < 0) {
        return Err(Error::NotDominant(e));
    }
    let f = Functional::new(lambda.to_vec());
    let member = membership(poset, &f);
    let b0 = poset.base_chamber();
    let x0 = poset.face(b0).point.clone();
    let chamber_of: Vec<usize> = (0..group.len())
        .map(|w| {
            poset.find(&poset.sign_of_point(&rs.act_vector(group.perm(w), &x0))).expect("image of B₀ is a chamber")
        })
        .collect();
    let in_w: Vec<bool> = chamber_of.iter().map(|&t| member[t]).collect();
    let reflections: Vec<usize> = (0..rs.num_positive())
        .map(|a| group.find(&GroupElement::reflection(rs, a).perm).expect("reflection lies in the group"))
        .collect();
    let mut samples = vec![x0.clone()];
    for r in poset.rays_of(b0) {
        samples.push(linalg::add(&x0, &poset.face(r).point));
    }
    let inv_lambda: Vec<Vector> =
        (0..group.len()).map(|w| rs.act_vector(group.perm(group.inverse(w)), lambda)).collect();
    let mut covers = 0;
    let mut strong_ideal = true;
    let mut monotone = true;
    for z in 0..group.len() {
        for &t in &reflections {
            let w = group.compose(t, z);
            if group.length(w) != group.length(z) + 1 {
                continue;
            }
            covers += 1;
            strong_ideal &= !in_w[w] || in_w[z];
            monotone &= samples.iter().all(|x| (rs.ip(&inv_lambda[z], x) - rs.ip(&inv_lambda[w], x)).sign() >= 0);
        }
    }
    let chambers = poset.chambers();
    let weak_ideal =
        chambers.iter().all(|&t2| !member[t2] || chambers.iter().all(|&t| member[t] || !poset.weak_le(b0, t, t2)));
    Ok(BruhatReport {
        size: in_w.iter().filter(|&&m| m).count(),
        group_order: group.len(),
        covers,
        strong_ideal,
        weak_ideal,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::DEFAULT_GROUP_BOUND;
    use crate::scalar::Scalar;

    fn arr(t: &str) -> Arrangement {
        Arrangement::canonical(t, DEFAULT_GROUP_BOUND).unwrap()
    }

    fn vector(a: &Arrangement, c: &[i64]) -> Vector {
        c.iter().map(|&x| Scalar::from_int(a.rs.ctx(), x)).collect()
    }

    #[test]
    fn shelling_order_basics() {
        for t in ["A2", "B2", "A3", "B3", "A1xA1"] {
            let a = arr(t);
            let p = &a.poset;
            for &b in p.chambers() {
                let o = shelling_order(p, b);
                assert_eq!(o.order[0], b);
                assert_eq!(*o.order.last().unwrap(), p.opposite(b));
                assert!(o.is_linear_extension(p));
                assert!(o.order.windows(2).all(|w| p.separation_count(b, w[0]) <= p.separation_count(b, w[1])));
                assert!(is_shelling(p, &o.order), "{t}");
                assert!(entering_walls_match(p, &o));
            }
        }
    }

    #[test]
    fn a2_order_matches_weak_order_on_s3() {
        // Oracle: lengths of the six permutations of S3 in sorted order.
        let a = arr("A2");
        let p = &a.poset;
        let o = shelling_order(p, p.base_chamber());
        let lengths: Vec<usize> = o.order.iter().map(|&t| p.separation_count(p.base_chamber(), t)).collect();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn rank_two_non_shellings_are_rejected() {
        // A chamber of I2(4) followed by its opposite shares only the origin.
        let a = arr("B2");
        let p = &a.poset;
        let b = p.base_chamber();
        assert!(!is_shelling(p, &[b, p.opposite(b)]));
    }

    #[test]
    fn fibers() {
        let a = arr("A2");
        let p = &a.poset;
        let b = p.base_chamber();
        let o = shelling_order(p, b);
        let fp = fiber_partition(p, &o);
        assert!(fp.matches_composition && fp.is_partition);
        assert_eq!(fp.fibers[0].len(), 4);
        let mut below = p.below(b).to_vec();
        below.sort_unstable();
        let mut first = fp.fibers[0].clone();
        first.sort_unstable();
        assert_eq!(first, below);
        for t in ["A3", "B3"] {
            let a = arr(t);
            let p = &a.poset;
            let o = shelling_order(p, p.base_chamber());
            let mut other = o.clone();
            other.order.sort_by_key(|&t| (p.separation_count(o.base, t), std::cmp::Reverse(t)));
            let (f1, f2) = (fiber_partition(p, &o), fiber_partition(p, &other));
            assert!(f1.matches_composition && f1.is_partition && f2.matches_composition);
            for (i, &t) in o.order.iter().enumerate() {
                let j = other.position(t).unwrap();
                assert_eq!(f1.fibers[i], f2.fibers[j]);
            }
        }
    }

    #[test]
    fn condition_a_on_coxeter_arrangements() {
        for t in ["A1", "A2", "B2", "G2", "I2(5)", "A3", "B3", "H3", "A2xA1"] {
            let a = arr(t);
            assert!(check_condition_a(&a.poset).unwrap().holds(), "{t}");
            assert!(condition_a_by_rays(&a.poset), "{t}");
        }
        let a = arr("A2");
        let rs = &a.rs;
        assert_eq!(rs.root_ip(0, 1), Scalar::from_frac(rs.ctx(), -1, 2));
    }

    #[test]
    fn obtuse_subarrangement_fails_condition_a() {
        // Dropping one line of A2 leaves a chamber with an obtuse angle.
        let a = arr("A2");
        let (sub, _) = a.poset.restrict(&[0, 1]);
        let ca = check_condition_a(&sub).unwrap();
        assert!(!ca.holds());
        assert!(!condition_a_by_rays(&sub));
    }

    #[test]
    fn initial_segments() {
        for t in ["A2", "B2", "A3", "B3"] {
            let a = arr(t);
            let n = a.rs.rank();
            let zero = Functional::new(linalg::zeros(a.rs.ctx(), n));
            let s = weighted_initial_segment(&a.poset, &zero);
            assert_eq!(s.segment_length, s.num_chambers);
            assert!(s.holds());
            for l in [[1, 1, 1], [2, -1, 0], [-3, 1, 2], [0, 1, 1]] {
                let f = Functional::new(vector(&a, &l[..n]));
                let s = weighted_initial_segment(&a.poset, &f);
                assert!(s.holds(), "{t} {l:?}: {s:?}");
                assert!(s.segment_length < s.num_chambers, "{t} {l:?} {} {}", s.segment_length, s.num_chambers);
                for (k, &e) in a.poset.hyperplanes().iter().enumerate() {
                    assert!(f.sign_at(&a.rs, a.rs.root(e)) * s.flips[k] >= 0);
                }
            }
        }
    }

    #[test]
    fn bruhat_ideals() {
        let a = arr("A2");
        let zero = strong_bruhat_ideal(&a, &linalg::zeros(a.rs.ctx(), 2)).unwrap();
        assert_eq!(zero.size, 6);
        let rho = a.rs.face_point(0);
        let r = strong_bruhat_ideal(&a, &rho).unwrap();
        assert!(r.holds());
        assert_eq!(r.group_order, 6);
        assert!(matches!(strong_bruhat_ideal(&a, &vector(&a, &[-1, 0])), Err(Error::NotDominant(_))));
        let b = arr("B3");
        for mask in 0u64..8 {
            let r = strong_bruhat_ideal(&b, &b.rs.face_point(mask)).unwrap();
            assert!(r.holds(), "mask {mask}");
        }
    }
}

//! Face posets of Coxeter arrangements and their subarrangements.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rootsys::{Group, RootSystem};
use crate::scalar::Scalar;

/// Maximum number of hyperplanes a sign vector can hold.
pub const MAX_HYPERPLANES: usize = 128;

/// A ternary vector over hyperplanes, packed as a nonzero mask and a negative mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVec {
    pub nz: u128,
    pub neg: u128,
}

impl SignVec {
    pub fn zero() -> SignVec {
        SignVec::default()
    }

    /// All signs positive on the first `len` hyperplanes.
    pub fn positive(len: usize) -> SignVec {
        SignVec { nz: low_mask(len), neg: 0 }
    }

    pub fn get(&self, e: usize) -> i8 {
        if self.nz >> e & 1 == 0 {
            0
        } else if self.neg >> e & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, e: usize, s: i8) {
        let bit = 1u128 << e;
        self.nz &= !bit;
        self.neg &= !bit;
        if s != 0 {
            self.nz |= bit;
        }
        if s < 0 {
            self.neg |= bit;
        }
    }

    /// Signs of `self` where nonzero, filled in from `other`.
    pub fn compose(&self, other: &SignVec) -> SignVec {
        SignVec { nz: self.nz | other.nz, neg: self.neg | (other.neg & !self.nz) }
    }

    /// Face order: every nonzero sign of `self` agrees with `other`.
    pub fn le(&self, other: &SignVec) -> bool {
        self.nz & !other.nz == 0 && (other.neg & self.nz) == self.neg
    }

    /// Hyperplanes where both are nonzero with opposite signs.
    pub fn separation(&self, other: &SignVec) -> u128 {
        self.nz & other.nz & (self.neg ^ other.neg)
    }

    pub fn opposite(&self) -> SignVec {
        SignVec { nz: self.nz, neg: self.nz & !self.neg }
    }

    pub fn zeros(&self, len: usize) -> u128 {
        !self.nz & low_mask(len)
    }

    pub fn num_neg(&self) -> u32 {
        self.neg.count_ones()
    }

    /// Signs at the listed positions, renumbered consecutively.
    pub fn gather(&self, positions: &[usize]) -> SignVec {
        let mut out = SignVec::zero();
        for (k, &p) in positions.iter().enumerate() {
            out.set(k, self.get(p));
        }
        out
    }

    pub fn render(&self, len: usize) -> String {
        (0..len)
            .map(|e| match self.get(e) {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }
}

impl fmt::Debug for SignVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = 128 - (self.nz.leading_zeros() as usize);
        write!(f, "SignVec({})", self.render(len))
    }
}

pub fn low_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// Iterates the set bits of a mask.
pub fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

#[derive(Clone, Debug)]
pub struct Face {
    pub sign: SignVec,
    /// Dimension inside the span of the roots.
    pub dim: usize,
    /// A point in the relative interior.
    pub point: Vector,
    /// Group element index and generator mask `I` for faces of the full arrangement.
    pub coset: Option<(usize, u64)>,
}

/// The faces cut out by a set of positive-root hyperplanes.
pub struct FacePoset {
    rs: Arc<RootSystem>,
    hyperplanes: Vec<usize>,
    faces: Vec<Face>,
    index: HashMap<SignVec, usize>,
    dim_v: usize,
    dim_v0: usize,
    below: Vec<Vec<usize>>,
    chambers: Vec<usize>,
}

impl fmt::Debug for FacePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FacePoset({} hyperplanes, {} faces)", self.hyperplanes.len(), self.faces.len())
    }
}

/// The star of a face with its isomorphism onto the face poset of the hyperplanes through it.
pub struct Star {
    /// Faces D ≥ C, in increasing index order.
    pub faces: Vec<usize>,
    /// Face poset of the hyperplanes containing C.
    pub sub: FacePoset,
    /// `iota[k]` is the face of `sub` corresponding to `faces[k]`.
    pub iota: Vec<usize>,
}

impl FacePoset {
    /// The full Coxeter arrangement, one face per standard coset wW_I.
    pub fn full(rs: Arc<RootSystem>, group: &Group) -> Result<FacePoset> {
        let p = rs.num_positive();
        if p > MAX_HYPERPLANES {
            return Err(Error::TooManyHyperplanes(p));
        }
        let n = rs.rank();
        let mut masks: Vec<u64> = (0..1u64 << n).collect();
        masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        let inverses: Vec<usize> = (0..group.len()).map(|w| group.inverse(w)).collect();
        let mut faces = Vec::new();
        for &mask in &masks {
            let q = rs.face_point(mask);
            let qc = rs.to_simple_coords(&q);
            for w in 0..group.len() {
                if (0..n).any(|s| mask >> s & 1 == 1 && group.act(w, s) >= p) {
                    continue;
                }
                let winv = inverses[w];
                let mut sign = SignVec::zero();
                for e in 0..p {
                    let beta = group.act(winv, e);
                    if rs.support(beta) & !mask != 0 {
                        sign.set(e, if rs.is_positive(beta) { 1 } else { -1 });
                    }
                }
                let mut point = linalg::zeros(rs.ctx(), rs.dim());
                for (s, c) in qc.iter().enumerate() {
                    linalg::axpy(&mut point, c, rs.root(group.act(w, s)));
                }
                faces.push(Face { sign, dim: n - mask.count_ones() as usize, point, coset: Some((w, mask)) });
            }
        }
        Ok(FacePoset::assemble(rs, (0..p).collect(), faces, n, 0))
    }

    fn assemble(
        rs: Arc<RootSystem>,
        hyperplanes: Vec<usize>,
        faces: Vec<Face>,
        dim_v: usize,
        dim_v0: usize,
    ) -> FacePoset {
        let index = faces.iter().enumerate().map(|(i, f)| (f.sign, i)).collect();
        let below = faces
            .iter()
            .map(|d| faces.iter().enumerate().filter(|(_, c)| c.sign.le(&d.sign)).map(|(i, _)| i).collect())
            .collect();
        let chambers = faces.iter().enumerate().filter(|(_, f)| f.dim == dim_v).map(|(i, _)| i).collect();
        FacePoset { rs, hyperplanes, faces, index, dim_v, dim_v0, below, chambers }
    }

    /// Faces of the subarrangement on the listed hyperplane positions of `self`,
    /// with the map sending each face of `self` to the face containing it.
    pub fn restrict(&self, positions: &[usize]) -> (FacePoset, Vec<usize>) {
        let hyperplanes: Vec<usize> = positions.iter().map(|&k| self.hyperplanes[k]).collect();
        let mut faces: Vec<Face> = Vec::new();
        let mut index: HashMap<SignVec, usize> = HashMap::new();
        let mut map = Vec::with_capacity(self.faces.len());
        let mut ranks: HashMap<u128, usize> = HashMap::new();
        let rank_of = |zero: u128, ranks: &mut HashMap<u128, usize>| -> usize {
            *ranks.entry(zero).or_insert_with(|| {
                let rows: Vec<Vector> = bits(zero).map(|k| self.rs.root(hyperplanes[k]).to_vec()).collect();
                linalg::rank(&rows)
            })
        };
        let n = self.dim_v;
        for f in &self.faces {
            let sign = f.sign.gather(positions);
            let k = match index.get(&sign) {
                Some(&k) => {
                    if f.dim > faces[k].dim {
                        // Keep the representative point from a top-dimensional member.
                        faces[k].point = f.point.clone();
                    }
                    k
                }
                None => {
                    let dim = n - rank_of(sign.zeros(positions.len()), &mut ranks);
                    faces.push(Face { sign, dim, point: f.point.clone(), coset: None });
                    index.insert(sign, faces.len() - 1);
                    faces.len() - 1
                }
            };
            map.push(k);
        }
        let dim_v0 = n - rank_of(low_mask(positions.len()), &mut ranks);
        // Order faces by dimension, keeping first-seen order within a dimension.
        let mut order: Vec<usize> = (0..faces.len()).collect();
        order.sort_by_key(|&k| faces[k].dim);
        let mut new_pos = vec![0; faces.len()];
        for (i, &k) in order.iter().enumerate() {
            new_pos[k] = i;
        }
        let faces: Vec<Face> = order.iter().map(|&k| faces[k].clone()).collect();
        let map = map.into_iter().map(|k| new_pos[k]).collect();
        (FacePoset::assemble(self.rs.clone(), hyperplanes, faces, n, dim_v0), map)
    }

    /// Subarrangement on the given positive roots, each of which must be a hyperplane of `self`.
    pub fn subarrangement(&self, roots: &[usize]) -> Result<(FacePoset, Vec<usize>)> {
        let mut positions = Vec::with_capacity(roots.len());
        for &r in roots {
            let k = self
                .hyperplanes
                .iter()
                .position(|&h| h == r)
                .ok_or_else(|| Error::InvalidChoice(format!("root {r} is not a hyperplane of this arrangement")))?;
            positions.push(k);
        }
        Ok(self.restrict(&positions))
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Positive-root indices of the hyperplanes, in sign-vector position order.
    pub fn hyperplanes(&self) -> &[usize] {
        &self.hyperplanes
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn sign(&self, i: usize) -> SignVec {
        self.faces[i].sign
    }

    pub fn dim(&self, i: usize) -> usize {
        self.faces[i].dim
    }

    /// ρ(C) = dim C − dim V₀.
    pub fn rank_of(&self, i: usize) -> usize {
        self.faces[i].dim - self.dim_v0
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_v0(&self) -> usize {
        self.dim_v0
    }

    pub fn find(&self, s: &SignVec) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// The face V₀ where every hyperplane vanishes.
    pub fn minimal(&self) -> usize {
        self.index[&SignVec::zero()]
    }

    /// The chamber on the positive side of every hyperplane.
    pub fn base_chamber(&self) -> usize {
        self.index[&SignVec::positive(self.hyperplanes.len())]
    }

    pub fn chambers(&self) -> &[usize] {
        &self.chambers
    }

    pub fn is_chamber(&self, i: usize) -> bool {
        self.faces[i].dim == self.dim_v
    }

    /// Faces of rank one.
    pub fn rays(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == self.dim_v0 + 1).collect()
    }

    /// Rank-one faces below `i`.
    pub fn rays_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[i].iter().copied().filter(move |&c| self.faces[c].dim == self.dim_v0 + 1)
    }

    /// All faces C ≤ D, including D.
    pub fn below(&self, d: usize) -> &[usize] {
        &self.below[d]
    }

    pub fn le(&self, c: usize, d: usize) -> bool {
        self.faces[c].sign.le(&self.faces[d].sign)
    }

    pub fn compose(&self, c: usize, d: usize) -> usize {
        let s = self.faces[c].sign.compose(&self.faces[d].sign);
        self.index[&s]
    }

    pub fn opposite(&self, c: usize) -> usize {
        self.index[&self.faces[c].sign.opposite()]
    }

    /// Positions of hyperplanes separating the two faces.
    pub fn separation(&self, c: usize, d: usize) -> u128 {
        self.faces[c].sign.separation(&self.faces[d].sign)
    }

    pub fn separation_count(&self, c: usize, d: usize) -> usize {
        self.separation(c, d).count_ones() as usize
    }

    /// Hyperplane positions containing the face.
    pub fn zero_set(&self, c: usize) -> u128 {
        self.faces[c].sign.zeros(self.hyperplanes.len())
    }

    /// f_B(C) = C∘B.
    pub fn f_b(&self, b: usize, c: usize) -> usize {
        self.compose(c, b)
    }

    /// T ⪯_B T' iff S(B,T) ⊆ S(B,T').
    pub fn weak_le(&self, b: usize, t: usize, t2: usize) -> bool {
        let s1 = self.separation(b, t);
        let s2 = self.separation(b, t2);
        s1 & !s2 == 0
    }

    /// Cover relations of ⪯_B among chambers, as pairs of face indices.
    pub fn chamber_covers(&self, b: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &t in &self.chambers {
            for &t2 in &self.chambers {
                if self.separation_count(b, t2) == self.separation_count(b, t) + 1 && self.weak_le(b, t, t2) {
                    out.push((t, t2));
                }
            }
        }
        out
    }

    pub fn star(&self, c: usize) -> Star {
        let faces: Vec<usize> = (0..self.faces.len()).filter(|&d| self.le(c, d)).collect();
        let positions: Vec<usize> = bits(self.zero_set(c)).collect();
        let (sub, map) = self.restrict(&positions);
        let iota = faces.iter().map(|&d| map[d]).collect();
        Star { faces, sub, iota }
    }

    pub fn to_json(&self) -> Value {
        let n = self.hyperplanes.len();
        let faces: Vec<Value> = self
            .faces
            .iter()
            .map(|f| {
                let mut v = json!({ "sign": f.sign.render(n), "dim": f.dim });
                if let Some((w, mask)) = f.coset {
                    let i: Vec<usize> = (0..64).filter(|s| mask >> s & 1 == 1).collect();
                    v["coset"] = json!([w, i]);
                }
                v
            })
            .collect();
        json!({ "hyperplanes": self.hyperplanes, "dimV0": self.dim_v0, "faces": faces })
    }

    /// Sign of `(α_e, x)` for every hyperplane.
    pub fn sign_of_point(&self, x: &[Scalar]) -> SignVec {
        let mut s = SignVec::zero();
        for (k, &e) in self.hyperplanes.iter().enumerate() {
            s.set(k, linalg::dot(self.rs.dual(e), x).sign());
        }
        s
    }
}

/// A Coxeter arrangement with its group and full face poset.
pub struct Arrangement {
    pub rs: Arc<RootSystem>,
    pub group: Group,
    pub poset: FacePoset,
}

impl Arrangement {
    pub fn new(rs: RootSystem, bound: usize) -> Result<Arrangement> {
        let rs = Arc::new(rs);
        let group = rs.enumerate_group(bound)?;
        let poset = FacePoset::full(rs.clone(), &group)?;
        Ok(Arrangement { rs, group, poset })
    }

    /// The canonical arrangement of a type string such as `"B3"` or `"A2xA1"`.
    pub fn canonical(spec: &str, bound: usize) -> Result<Arrangement> {
        Arrangement::new(crate::rootsys::canonical_roots(&crate::rootsys::parse_type(spec)?)?, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{canonical_roots, parse_type, DEFAULT_GROUP_BOUND};
    use proptest::prelude::*;

    fn poset(t: &str) -> FacePoset {
        let rs = Arc::new(canonical_roots(&parse_type(t).unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        FacePoset::full(rs, &g).unwrap()
    }

    /// Σ_I |W|/|W_I| from the group orders of parabolic subgroups.
    fn coset_count(t: &str) -> usize {
        let sys = parse_type(t).unwrap();
        let n = sys.rank();
        let w = sys.group_order();
        (0..1u64 << n)
            .map(|m| {
                let gens: Vec<usize> = (0..n).filter(|s| m >> s & 1 == 1).collect();
                let wi = if gens.is_empty() { 1 } else { sys.restrict(&gens).unwrap().group_order() };
                (w / wi) as usize
            })
            .sum()
    }

    #[test]
    fn face_counts() {
        let a2 = poset("A2");
        assert_eq!(a2.len(), 13);
        assert_eq!(a2.rays().len(), 6);
        assert_eq!(a2.chambers().len(), 6);
        assert_eq!(poset("A1").len(), 3);
        for t in ["A3", "B3", "I2(8)", "B2xA1", "H3"] {
            let p = poset(t);
            assert_eq!(p.len(), coset_count(t), "{t}");
            assert_eq!(p.chambers().len() as u128, parse_type(t).unwrap().group_order());
        }
        assert_eq!(coset_count("A3"), 75);
    }

    #[test]
    fn points_reproduce_signs() {
        for t in ["A3", "B3", "I2(5)", "H3"] {
            let p = poset(t);
            let mut seen = std::collections::HashSet::new();
            for i in 0..p.len() {
                assert_eq!(p.sign_of_point(&p.face(i).point), p.sign(i), "{t} face {i}");
                assert!(seen.insert(p.sign(i)));
            }
        }
    }

    #[test]
    fn composition_examples() {
        let p = poset("A2");
        let b = p.base_chamber();
        let nb = p.opposite(b);
        assert_eq!(p.compose(b, b), b);
        assert_eq!(p.compose(p.minimal(), b), b);
        // A ray of B composed with −B is the chamber across the wall containing the ray.
        for r in p.rays_of(b) {
            let c = p.compose(r, nb);
            assert!(p.le(r, c));
            assert_eq!(p.separation(b, c), p.zero_set(r));
            assert_eq!(p.separation_count(b, c), 1);
        }
        assert_eq!(p.separation(b, b), 0);
        assert_eq!(p.separation_count(b, nb), 3);
    }

    #[test]
    fn separation_is_length() {
        let rs = Arc::new(canonical_roots(&parse_type("B3").unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let p = FacePoset::full(rs, &g).unwrap();
        let b = p.base_chamber();
        for &t in p.chambers() {
            let (w, _) = p.face(t).coset.unwrap();
            assert_eq!(p.separation_count(b, t), g.length(w));
        }
    }

    #[test]
    fn weak_order_on_s3() {
        let rs = Arc::new(canonical_roots(&parse_type("A2").unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let p = FacePoset::full(rs, &g).unwrap();
        let b = p.base_chamber();
        let covers = p.chamber_covers(b);
        assert_eq!(covers.len(), 6);
        // Right weak order: w ≤ ws when ℓ(ws) = ℓ(w) + 1.
        for (t, t2) in covers {
            let (w, _) = p.face(t).coset.unwrap();
            let (w2, _) = p.face(t2).coset.unwrap();
            let winv = g.inverse(w);
            let u = g.compose(winv, w2);
            assert_eq!(g.length(u), 1);
        }
        for &t in p.chambers() {
            assert!(p.weak_le(b, b, t));
            assert!(p.weak_le(b, t, p.opposite(b)));
        }
    }

    #[test]
    fn stars() {
        let p = poset("A2");
        let st = p.star(p.minimal());
        assert_eq!(st.faces.len(), p.len());
        let t = p.base_chamber();
        let st = p.star(t);
        assert_eq!(st.faces, vec![t]);
        assert_eq!(st.sub.num_hyperplanes(), 0);
        let r = p.rays()[0];
        let st = p.star(r);
        assert_eq!(st.faces.len(), 3);
        assert_eq!(st.sub.len(), 3);
        for (k, &d) in st.faces.iter().enumerate() {
            assert_eq!(st.sub.dim(st.iota[k]), p.dim(d));
        }
    }

    #[test]
    fn f_b_is_shortest_coset_element() {
        let rs = Arc::new(canonical_roots(&parse_type("A2").unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let p = FacePoset::full(rs, &g).unwrap();
        let b = p.base_chamber();
        for c in 0..p.len() {
            let (w, mask) = p.face(c).coset.unwrap();
            let ch = p.f_b(b, c);
            let (wc, _) = p.face(ch).coset.unwrap();
            // w is already the minimal coset representative.
            assert_eq!(wc, w, "mask {mask}");
            let coset_min = (0..g.len())
                .filter(|&u| {
                    let d = g.compose(g.inverse(w), u);
                    g.word(d).iter().all(|s| mask >> s & 1 == 1)
                })
                .min_by_key(|&u| g.length(u))
                .unwrap();
            assert_eq!(coset_min, w);
        }
    }

    #[test]
    fn subarrangement_faces() {
        let p = poset("A2");
        let (sub, map) = p.subarrangement(&[0]).unwrap();
        assert_eq!(sub.len(), 3);
        assert_eq!(sub.dim_v0(), 1);
        assert_eq!(map.len(), p.len());
        for i in 0..p.len() {
            assert!(p.sign(i).gather(&[0]) == sub.sign(map[i]));
        }
        for i in 0..sub.len() {
            assert_eq!(sub.sign_of_point(&sub.face(i).point), sub.sign(i));
        }
    }

    #[test]
    fn simpliciality_in_b3() {
        let p = poset("B3");
        let rs = p.root_system().clone();
        for d in 0..p.len() {
            let rays: Vec<usize> = p.rays_of(d).collect();
            assert_eq!(rays.len(), p.rank_of(d));
            let mut sum = linalg::zeros(rs.ctx(), rs.dim());
            for &r in &rays {
                sum = linalg::add(&sum, &p.face(r).point);
            }
            assert_eq!(p.sign_of_point(&sum), p.sign(d));
        }
    }

    proptest! {
        #[test]
        fn composition_laws(a in 0usize..75, b in 0usize..75, c in 0usize..75) {
            thread_local!(static P: FacePoset = poset("A3"));
            P.with(|p| {
                prop_assert_eq!(p.compose(p.compose(a, b), c), p.compose(a, p.compose(b, c)));
                prop_assert_eq!(p.compose(a, a), a);
                prop_assert!(p.le(a, p.compose(a, b)));
                let ab = p.compose(a, b);
                prop_assert_eq!(p.compose(ab, a), ab);
                Ok(())
            })?;
        }

        #[test]
        fn star_is_functorial(c in 0usize..75, x in 0usize..75, y in 0usize..75) {
            thread_local!(static P: FacePoset = poset("A3"));
            P.with(|p| {
                let st = p.star(c);
                let k = st.faces.len();
                let (i, j) = (x % k, y % k);
                let (d, d2) = (st.faces[i], st.faces[j]);
                let dd = p.compose(d, d2);
                let pos = st.faces.iter().position(|&f| f == dd).unwrap();
                prop_assert_eq!(st.iota[pos], st.sub.compose(st.iota[i], st.iota[j]));
                prop_assert_eq!(p.separation_count(d, d2), st.sub.separation_count(st.iota[i], st.iota[j]));
                Ok(())
            })?;
        }
    }
}

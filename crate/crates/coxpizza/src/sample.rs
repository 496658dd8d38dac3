//! Reproducible sampling of functionals from a documented linear congruential
//! generator, so that seeds mean the same thing in any language.

use crate::linalg::{self, Vector};
use crate::rootsys::RootSystem;
use crate::scalar::Scalar;

/// `state ← a·state + c (mod 2⁶⁴)`; coordinates are `((state >> 33) mod 19) − 9`.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const A: u64 = 6364136223846793005;
    pub const C: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Lcg {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::A).wrapping_add(Self::C);
        self.state
    }

    /// A coordinate in `[−9, 9]`.
    pub fn coordinate(&mut self) -> i64 {
        ((self.next_u64() >> 33) % 19) as i64 - 9
    }

    pub fn coordinates(&mut self, n: usize) -> Vec<i64> {
        (0..n).map(|_| self.coordinate()).collect()
    }
}

fn from_simple(rs: &RootSystem, c: &[i64]) -> Vector {
    let c: Vector = c.iter().map(|&x| Scalar::from_int(rs.ctx(), x)).collect();
    rs.from_simple_coords(&c)
}

/// `Σ d_s ω_s` with `ω_s` dual to the simple roots; dominant when every `d_s ≥ 0`.
pub fn from_fundamental(rs: &RootSystem, d: &[i64]) -> Vector {
    let full: u64 = (1u64 << rs.rank()) - 1;
    let mut out = linalg::zeros(rs.ctx(), rs.dim());
    for (s, &x) in d.iter().enumerate() {
        linalg::axpy(&mut out, &Scalar::from_int(rs.ctx(), x), &rs.face_point(full & !(1u64 << s)));
    }
    out
}

/// `k` dominant functionals with fundamental-weight coordinates `|coordinate|`.
pub fn dominant_samples(rs: &RootSystem, k: usize, seed: u64) -> Vec<Vector> {
    let mut g = Lcg::new(seed);
    (0..k)
        .map(|_| {
            let d: Vec<i64> = g.coordinates(rs.rank()).into_iter().map(i64::abs).collect();
            from_fundamental(rs, &d)
        })
        .collect()
}

/// `k` functionals in the span of the roots: zero, one on the first simple root's
/// hyperplane, one dominant, one antidominant, then random simple-root coordinates.
pub fn lambda_samples(rs: &RootSystem, k: usize, seed: u64) -> Vec<Vector> {
    let n = rs.rank();
    let mut g = Lcg::new(seed);
    let mut out = Vec::with_capacity(k);
    out.push(linalg::zeros(rs.ctx(), rs.dim()));
    let mut on_wall = linalg::zeros(rs.ctx(), rs.dim());
    while on_wall.iter().all(Scalar::is_zero) {
        let v = from_simple(rs, &g.coordinates(n));
        let a = rs.root(rs.simple(0));
        let t = &rs.ip(&v, a) * &rs.ip(a, a).inv().expect("nonzero root");
        on_wall = v;
        linalg::axpy(&mut on_wall, &-t, a);
    }
    out.push(on_wall);
    let d: Vec<i64> = g.coordinates(n).into_iter().map(|x| x.abs() + 1).collect();
    let dominant = from_fundamental(rs, &d);
    out.push(linalg::neg(&dominant));
    out.insert(2, dominant);
    while out.len() < k {
        out.push(from_simple(rs, &g.coordinates(n)));
    }
    out.truncate(k);
    out
}

/// Integer vectors with coordinates in `[−9, 9]`.
pub fn integer_samples(n: usize, k: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut g = Lcg::new(seed);
    (0..k).map(|_| g.coordinates(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{canonical_roots, parse_type};

    #[test]
    fn generator_is_the_documented_recurrence() {
        let mut g = Lcg::new(0);
        assert_eq!(g.next_u64(), Lcg::C);
        assert_eq!(g.next_u64(), Lcg::C.wrapping_mul(Lcg::A).wrapping_add(Lcg::C));
        let mut g = Lcg::new(42);
        let xs = g.coordinates(1000);
        assert!(xs.iter().all(|x| (-9..=9).contains(x)));
        assert!(xs.contains(&-9) && xs.contains(&9));
        assert_eq!(integer_samples(3, 4, 7), integer_samples(3, 4, 7));
    }

    #[test]
    fn special_samples_have_their_shapes() {
        for t in ["A3", "B3", "H3", "I2(8)"] {
            let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
            let s = lambda_samples(&rs, 25, 42);
            assert_eq!(s.len(), 25);
            assert!(s[0].iter().all(Scalar::is_zero));
            assert!(rs.ip(&s[1], rs.root(rs.simple(0))).is_zero() && !s[1].iter().all(Scalar::is_zero));
            for e in 0..rs.num_positive() {
                assert!(rs.ip(&s[2], rs.root(e)).sign() > 0);
                assert!(rs.ip(&s[3], rs.root(e)).sign() < 0);
            }
            for l in dominant_samples(&rs, 10, 1) {
                assert!((0..rs.num_positive()).all(|e| rs.ip(&l, rs.root(e)).sign() >= 0));
            }
        }
    }
}

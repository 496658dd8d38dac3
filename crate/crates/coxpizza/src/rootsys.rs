//! Coxeter systems, pseudo-root systems and the finite reflection group acting on them.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::{cos_pi_over, field_context, Field, Scalar};

/// Default cap on the order of enumerated groups.
pub const DEFAULT_GROUP_BOUND: usize = 20000;

/// Group bound from `COXPIZZA_GROUP_BOUND`, falling back to the default.
pub fn group_bound_from_env() -> usize {
    std::env::var("COXPIZZA_GROUP_BOUND").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_GROUP_BOUND)
}

/// Irreducible finite Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H(usize),
    I2(u32),
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorType::A(n) => write!(f, "A{n}"),
            FactorType::B(n) => write!(f, "B{n}"),
            FactorType::C(n) => write!(f, "C{n}"),
            FactorType::D(n) => write!(f, "D{n}"),
            FactorType::E(n) => write!(f, "E{n}"),
            FactorType::F4 => write!(f, "F4"),
            FactorType::G2 => write!(f, "G2"),
            FactorType::H(n) => write!(f, "H{n}"),
            FactorType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FactorType {
    pub fn rank(&self) -> usize {
        match *self {
            FactorType::A(n) | FactorType::B(n) | FactorType::C(n) | FactorType::D(n) => n,
            FactorType::E(n) | FactorType::H(n) => n,
            FactorType::F4 => 4,
            FactorType::G2 | FactorType::I2(_) => 2,
        }
    }

    /// Same Coxeter group, named as the classifier names it.
    pub fn normalized(&self) -> FactorType {
        match *self {
            FactorType::C(n) => FactorType::B(n),
            FactorType::I2(3) => FactorType::A(2),
            FactorType::I2(4) => FactorType::B(2),
            FactorType::I2(6) => FactorType::G2,
            t => t,
        }
    }

    /// Dihedral parameter for rank-2 types.
    pub fn dihedral_m(&self) -> Option<u32> {
        match self.normalized() {
            FactorType::A(2) => Some(3),
            FactorType::B(2) => Some(4),
            FactorType::G2 => Some(6),
            FactorType::I2(m) => Some(m),
            _ => None,
        }
    }

    /// Order of the Coxeter group.
    pub fn group_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self.normalized() {
            FactorType::A(n) => fact(n + 1),
            FactorType::B(n) | FactorType::C(n) => (1u128 << n) * fact(n),
            FactorType::D(n) => (1u128 << (n - 1)) * fact(n),
            FactorType::E(6) => 51840,
            FactorType::E(7) => 2903040,
            FactorType::E(8) => 696729600,
            FactorType::F4 => 1152,
            FactorType::G2 => 12,
            FactorType::H(3) => 120,
            FactorType::H(4) => 14400,
            FactorType::I2(m) => 2 * m as u128,
            t => unreachable!("unsupported type {t}"),
        }
    }

    /// Coxeter matrix with generators in Bourbaki order.
    pub fn standard_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.rank();
        let mut m = vec![vec![2u32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut set = |i: usize, j: usize, v: u32| {
            m[i][j] = v;
            m[j][i] = v;
        };
        match *self {
            FactorType::A(_) => (0..n - 1).for_each(|i| set(i, i + 1, 3)),
            FactorType::B(_) | FactorType::C(_) => {
                (0..n - 1).for_each(|i| set(i, i + 1, 3));
                if n >= 2 {
                    set(n - 2, n - 1, 4);
                }
            }
            FactorType::D(_) => {
                (0..n - 2).for_each(|i| set(i, i + 1, 3));
                set(n - 3, n - 1, 3);
            }
            FactorType::E(_) => {
                set(0, 2, 3);
                set(1, 3, 3);
                (2..n - 1).for_each(|i| set(i, i + 1, 3));
            }
            FactorType::F4 => {
                set(0, 1, 3);
                set(1, 2, 4);
                set(2, 3, 3);
            }
            FactorType::G2 => set(0, 1, 6),
            FactorType::H(_) => {
                set(0, 1, 5);
                (1..n - 1).for_each(|i| set(i, i + 1, 3));
            }
            FactorType::I2(mm) => set(0, 1, mm),
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let bad = |fam: &str, rank: usize| Err(Error::Rank { family: fam.into(), rank });
        match *self {
            FactorType::A(n) if n < 1 => bad("A", n),
            FactorType::B(n) if n < 2 => bad("B", n),
            FactorType::C(n) if n < 2 => bad("C", n),
            FactorType::D(n) if n < 4 => bad("D", n),
            FactorType::E(n) if !(6..=8).contains(&n) => bad("E", n),
            FactorType::H(n) if !(3..=4).contains(&n) => bad("H", n),
            FactorType::I2(m) if m < 2 => bad("I2", m as usize),
            _ => Ok(()),
        }
    }
}

/// One irreducible component of a Coxeter system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorType,
    /// Generator indices listed in Bourbaki order for `kind`.
    pub gens: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    pub name: String,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<u32>>,
    pub factors: Vec<Factor>,
}

impl CoxeterSystem {
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// Least common multiple of all matrix entries.
    pub fn conductor(&self) -> u32 {
        let mut l = 1u32;
        for row in &self.matrix {
            for &v in row {
                l = num::integer::lcm(l, v);
            }
        }
        l
    }

    pub fn group_order(&self) -> u128 {
        self.factors.iter().map(|f| f.kind.group_order()).product()
    }

    /// Classifies a symmetric Coxeter matrix into irreducible factors.
    pub fn from_matrix(name: &str, matrix: Vec<Vec<u32>>) -> Result<CoxeterSystem> {
        let n = matrix.len();
        for i in 0..n {
            if matrix[i][i] != 1 {
                return Err(Error::UnsupportedType(format!("{name}: diagonal entry {i} is not 1")));
            }
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] || (i != j && matrix[i][j] < 2) {
                    return Err(Error::UnsupportedType(format!("{name}: not a Coxeter matrix")));
                }
            }
        }
        let mut seen = vec![false; n];
        let mut factors = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for u in 0..n {
                    if !seen[u] && matrix[v][u] >= 3 {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            factors.push(classify_component(name, &matrix, &comp)?);
        }
        let labels = (1..=n).map(|i| format!("s{i}")).collect();
        Ok(CoxeterSystem { name: name.to_string(), labels, matrix, factors })
    }

    /// Sub-system on the generators `gens`, in the given order.
    pub fn restrict(&self, gens: &[usize]) -> Result<CoxeterSystem> {
        let m = gens.iter().map(|&i| gens.iter().map(|&j| self.matrix[i][j]).collect()).collect();
        let name =
            format!("{}|{{{}}}", self.name, gens.iter().map(|g| (g + 1).to_string()).collect::<Vec<_>>().join(","));
        let mut sys = CoxeterSystem::from_matrix(&name, m)?;
        sys.labels = gens.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(sys)
    }

    pub fn type_string(&self) -> String {
        if self.factors.is_empty() {
            return "empty".into();
        }
        self.factors.iter().map(|f| f.kind.to_string()).collect::<Vec<_>>().join("x")
    }
}

fn classify_component(name: &str, matrix: &[Vec<u32>], comp: &[usize]) -> Result<Factor> {
    let n = comp.len();
    let candidates: Vec<FactorType> = match n {
        1 => vec![FactorType::A(1)],
        2 => {
            let m = matrix[comp[0]][comp[1]];
            vec![FactorType::I2(m).normalized()]
        }
        _ => {
            let mut c = vec![FactorType::A(n), FactorType::B(n)];
            if n >= 4 {
                c.push(FactorType::D(n));
            }
            if (6..=8).contains(&n) {
                c.push(FactorType::E(n));
            }
            if n == 4 {
                c.push(FactorType::F4);
            }
            if n == 3 || n == 4 {
                c.push(FactorType::H(n));
            }
            c
        }
    };
    for kind in candidates {
        let std = kind.standard_matrix();
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if match_labels(&std, matrix, comp, &mut assign, &mut used, 0) {
            return Ok(Factor { kind, gens: assign });
        }
    }
    Err(Error::UnsupportedType(format!("{name}: component {:?} is not of finite type", comp)))
}

fn match_labels(
    std: &[Vec<u32>],
    matrix: &[Vec<u32>],
    comp: &[usize],
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    i: usize,
) -> bool {
    if i == std.len() {
        return true;
    }
    for (k, &v) in comp.iter().enumerate() {
        if used[k] {
            continue;
        }
        if (0..i).all(|j| matrix[v][assign[j]] == std[i][j]) {
            assign[i] = v;
            used[k] = true;
            if match_labels(std, matrix, comp, assign, used, i + 1) {
                return true;
            }
            used[k] = false;
        }
    }
    false
}

/// Parses `TYPE := FACTOR ("x" FACTOR)*`.
pub fn parse_type(spec: &str) -> Result<CoxeterSystem> {
    let s = spec.trim();
    let bytes = s.as_bytes();
    let mut pos = 0usize;
    let mut kinds = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let read_num = |pos: &mut usize| -> Option<usize> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            None
        } else {
            s[start..*pos].parse().ok()
        }
    };
    loop {
        if pos >= bytes.len() {
            return Err(err(pos, "expected a factor"));
        }
        let letter = bytes[pos];
        let at = pos;
        pos += 1;
        let kind = match letter {
            b'A' | b'B' | b'C' | b'D' | b'E' | b'F' | b'G' | b'H' => {
                let n = read_num(&mut pos).ok_or_else(|| err(pos, "expected a rank"))?;
                match letter {
                    b'A' => FactorType::A(n),
                    b'B' => FactorType::B(n),
                    b'C' => FactorType::C(n),
                    b'D' => FactorType::D(n),
                    b'E' => FactorType::E(n),
                    b'F' if n == 4 => FactorType::F4,
                    b'G' if n == 2 => FactorType::G2,
                    b'H' => FactorType::H(n),
                    b'F' => return Err(Error::Rank { family: "F".into(), rank: n }),
                    _ => return Err(Error::Rank { family: "G".into(), rank: n }),
                }
            }
            b'I' => {
                if bytes.get(pos) != Some(&b'2') {
                    return Err(err(pos, "expected I2(m)"));
                }
                pos += 1;
                if bytes.get(pos) != Some(&b'(') {
                    return Err(err(pos, "expected '('"));
                }
                pos += 1;
                let m = read_num(&mut pos).ok_or_else(|| err(pos, "expected m"))?;
                if bytes.get(pos) != Some(&b')') {
                    return Err(err(pos, "expected ')'"));
                }
                pos += 1;
                FactorType::I2(m as u32)
            }
            _ => return Err(err(at, "unknown family letter")),
        };
        kind.validate()?;
        kinds.push(kind);
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'x' {
            return Err(err(pos, "expected 'x' between factors"));
        }
        pos += 1;
    }
    let n: usize = kinds.iter().map(|k| k.rank()).sum();
    let mut matrix = vec![vec![2u32; n]; n];
    let mut off = 0;
    for k in &kinds {
        let std = k.standard_matrix();
        for i in 0..k.rank() {
            for j in 0..k.rank() {
                matrix[off + i][off + j] = std[i][j];
            }
        }
        off += k.rank();
    }
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = 1;
    }
    CoxeterSystem::from_matrix(s, matrix)
}

/// A pseudo-root system with a chosen positive system.
///
/// Positive roots occupy indices `0..P` in discovery order (simple roots
/// first); index `i + P` holds the negative of root `i`.
pub struct RootSystem {
    pub sys: CoxeterSystem,
    ctx: Field,
    gram: Vec<Vector>,
    roots: Vec<Vector>,
    simple_coords: Vec<Vector>,
    gram_roots: Vec<Vector>,
    norms: Vec<Scalar>,
    support: Vec<u64>,
    index: HashMap<Vector, usize>,
    simple_refl: Vec<Vec<u16>>,
    npos: usize,
    normalized: bool,
    simple_gram_inv: OnceLock<Vec<Vector>>,
    root_ips: OnceLock<Vec<Vec<Scalar>>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} roots)", self.sys.name, self.roots.len())
    }
}

impl RootSystem {
    /// Closure of the simple roots under simple reflections, in the given ambient space.
    pub fn from_simple(
        sys: CoxeterSystem,
        ctx: Field,
        gram: Vec<Vector>,
        simple: Vec<Vector>,
        normalized: bool,
    ) -> RootSystem {
        let n = simple.len();
        let gram_simple: Vec<Vector> = simple.iter().map(|a| linalg::mat_vec(&gram, a)).collect();
        let inv_norm: Vec<Scalar> = simple
            .iter()
            .zip(&gram_simple)
            .map(|(a, ga)| linalg::dot(a, ga).inv().expect("simple root has nonzero norm"))
            .collect();
        let two = Scalar::from_int(&ctx, 2);
        let mut roots: Vec<Vector> = Vec::new();
        let mut coords: Vec<Vector> = Vec::new();
        let mut index: HashMap<Vector, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for (s, a) in simple.iter().enumerate() {
            let mut c = linalg::zeros(&ctx, n);
            c[s] = Scalar::one(&ctx);
            index.insert(a.clone(), roots.len());
            queue.push_back(roots.len());
            roots.push(a.clone());
            coords.push(c);
        }
        while let Some(i) = queue.pop_front() {
            for t in 0..n {
                let k = &(&two * &linalg::dot(&gram_simple[t], &roots[i])) * &inv_norm[t];
                if k.is_zero() {
                    continue;
                }
                let mut v = roots[i].clone();
                linalg::axpy(&mut v, &-&k, &simple[t]);
                if coords[i].iter().enumerate().all(|(j, x)| j == t || x.is_zero()) {
                    continue; // α_t itself maps to -α_t
                }
                if index.contains_key(&v) {
                    continue;
                }
                let mut c = coords[i].clone();
                c[t] = &c[t] - &k;
                index.insert(v.clone(), roots.len());
                queue.push_back(roots.len());
                roots.push(v);
                coords.push(c);
            }
        }
        let npos = roots.len();
        for i in 0..npos {
            let v = linalg::neg(&roots[i]);
            let c = linalg::neg(&coords[i]);
            index.insert(v.clone(), roots.len());
            roots.push(v);
            coords.push(c);
        }
        let gram_roots: Vec<Vector> = roots.iter().map(|r| linalg::mat_vec(&gram, r)).collect();
        let norms: Vec<Scalar> = roots.iter().zip(&gram_roots).map(|(r, g)| linalg::dot(r, g)).collect();
        let support = coords
            .iter()
            .map(|c| c.iter().enumerate().filter(|(_, x)| !x.is_zero()).fold(0u64, |m, (j, _)| m | (1 << j)))
            .collect();
        let mut rs = RootSystem {
            sys,
            ctx,
            gram,
            roots,
            simple_coords: coords,
            gram_roots,
            norms,
            support,
            index,
            simple_refl: Vec::new(),
            npos,
            normalized,
            simple_gram_inv: OnceLock::new(),
            root_ips: OnceLock::new(),
        };
        rs.simple_refl = (0..n).map(|s| rs.reflection_perm(s)).collect();
        rs
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vector] {
        &self.gram
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.npos
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    /// Positive root on the same line as root `i`.
    pub fn line(&self, i: usize) -> usize {
        if i < self.npos {
            i
        } else {
            i - self.npos
        }
    }

    pub fn simple(&self, s: usize) -> usize {
        s
    }

    pub fn root(&self, i: usize) -> &[Scalar] {
        &self.roots[i]
    }

    /// Coefficients of root `i` in the simple roots.
    pub fn simple_coords(&self, i: usize) -> &[Scalar] {
        &self.simple_coords[i]
    }

    /// Bitmask of simple roots with nonzero coefficient.
    pub fn support(&self, i: usize) -> u64 {
        self.support[i]
    }

    /// `G α_i`, so that `(α_i, v)` is a plain dot product.
    pub fn dual(&self, i: usize) -> &[Scalar] {
        &self.gram_roots[i]
    }

    pub fn norm2(&self, i: usize) -> &Scalar {
        &self.norms[i]
    }

    pub fn find(&self, v: &[Scalar]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn ip(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        linalg::form(&self.gram, a, b)
    }

    /// Inner product of roots `i` and `j`.
    pub fn root_ip(&self, i: usize, j: usize) -> Scalar {
        let p = self.npos;
        let table = self.root_ips.get_or_init(|| {
            (0..p).map(|a| (0..p).map(|b| linalg::dot(&self.roots[a], &self.gram_roots[b])).collect()).collect()
        });
        let v = &table[self.line(i)][self.line(j)];
        if self.is_positive(i) == self.is_positive(j) {
            v.clone()
        } else {
            -v
        }
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        self.root_ip(i, j).is_zero()
    }

    /// Reflection `v ↦ v − 2(α,v)/(α,α) α`.
    pub fn reflect(&self, i: usize, v: &[Scalar]) -> Vector {
        let k = &(&Scalar::from_int(&self.ctx, 2) * &linalg::dot(&self.gram_roots[i], v))
            * &self.norms[i].inv().expect("nonzero norm");
        let mut out = v.to_vec();
        linalg::axpy(&mut out, &-&k, &self.roots[i]);
        out
    }

    /// The reflection in root `i` as a permutation of root indices.
    pub fn reflection_perm(&self, i: usize) -> Vec<u16> {
        let mut perm = vec![0u16; self.roots.len()];
        for j in 0..self.npos {
            let img = self.find(&self.reflect(i, &self.roots[j])).expect("root system closed under reflections");
            perm[j] = img as u16;
            perm[self.neg(j)] = self.neg(img) as u16;
        }
        perm
    }

    pub fn simple_reflection(&self, s: usize) -> &[u16] {
        &self.simple_refl[s]
    }

    fn simple_gram_inverse(&self) -> &[Vector] {
        self.simple_gram_inv.get_or_init(|| {
            let n = self.rank();
            let g: Vec<Vector> =
                (0..n).map(|s| (0..n).map(|t| linalg::dot(&self.roots[s], &self.gram_roots[t])).collect()).collect();
            linalg::inverse(&g).expect("simple roots are linearly independent")
        })
    }

    /// Coefficients of `v` (assumed in the span of the roots) on the simple roots.
    pub fn to_simple_coords(&self, v: &[Scalar]) -> Vector {
        let rhs: Vector = (0..self.rank()).map(|s| linalg::dot(&self.gram_roots[s], v)).collect();
        linalg::mat_vec(self.simple_gram_inverse(), &rhs)
    }

    pub fn from_simple_coords(&self, c: &[Scalar]) -> Vector {
        let mut v = linalg::zeros(&self.ctx, self.dim());
        for (s, x) in c.iter().enumerate() {
            linalg::axpy(&mut v, x, &self.roots[s]);
        }
        v
    }

    /// The point q with (q, α_s) = 0 for s in `mask` and 1 otherwise.
    pub fn face_point(&self, mask: u64) -> Vector {
        let rhs: Vector = (0..self.rank())
            .map(|s| if mask >> s & 1 == 1 { Scalar::zero(&self.ctx) } else { Scalar::one(&self.ctx) })
            .collect();
        self.from_simple_coords(&linalg::mat_vec(self.simple_gram_inverse(), &rhs))
    }

    /// Image of a vector in the span of the roots under a group element.
    pub fn act_vector(&self, perm: &[u16], v: &[Scalar]) -> Vector {
        let c = self.to_simple_coords(v);
        let mut out = linalg::zeros(&self.ctx, self.dim());
        for (s, x) in c.iter().enumerate() {
            linalg::axpy(&mut out, x, &self.roots[perm[s] as usize]);
        }
        out
    }

    pub fn length(&self, perm: &[u16]) -> usize {
        (0..self.npos).filter(|&i| perm[i] as usize >= self.npos).count()
    }

    pub fn det(&self, perm: &[u16]) -> i32 {
        if self.length(perm).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn identity_perm(&self) -> Vec<u16> {
        (0..self.roots.len() as u16).collect()
    }

    /// Parabolic subsystem on the generators `gens`, with the map from its roots to ours.
    pub fn parabolic(&self, gens: &[usize]) -> Result<(RootSystem, Vec<usize>)> {
        let sys = self.sys.restrict(gens)?;
        let simple: Vec<Vector> = gens.iter().map(|&s| self.roots[s].clone()).collect();
        let sub = RootSystem::from_simple(sys, self.ctx.clone(), self.gram.clone(), simple, self.normalized);
        let map = (0..sub.num_roots()).map(|i| self.find(sub.root(i)).expect("parabolic root is a root")).collect();
        Ok((sub, map))
    }

    /// Index of the irreducible factor containing root `i`.
    pub fn factor_of(&self, i: usize) -> usize {
        let s = self.support[i].trailing_zeros() as usize;
        self.sys.factors.iter().position(|f| f.gens.contains(&s)).expect("every generator lies in a factor")
    }

    /// Enumerates W, or fails if its order exceeds `bound`.
    pub fn enumerate_group(&self, bound: usize) -> Result<Group> {
        let order = self.sys.group_order();
        if order > bound as u128 {
            return Err(Error::GroupTooLarge { bound });
        }
        Ok(Group::generate(self))
    }

    pub fn to_json(&self) -> Value {
        let roots: Vec<Value> =
            (0..self.npos).map(|i| Value::Array(self.roots[i].iter().map(Scalar::to_json).collect())).collect();
        let gram: Vec<Value> =
            self.gram.iter().map(|row| Value::Array(row.iter().map(Scalar::to_json).collect())).collect();
        json!({
            "type": self.sys.type_string(),
            "rank": self.rank(),
            "dim": self.dim(),
            "conductor": self.ctx.conductor(),
            "numRoots": self.num_roots(),
            "numPositive": self.npos,
            "positiveRoots": roots,
            "gram": gram,
        })
    }
}

/// The canonical normalized representation: gram (e_s, e_t) = −cos(π/m_st).
pub fn canonical_roots(sys: &CoxeterSystem) -> Result<RootSystem> {
    let ctx = field_context(sys.conductor())?;
    canonical_roots_in(sys, &ctx)
}

/// Canonical representation over a given field, whose conductor must be a multiple of every m_st.
pub fn canonical_roots_in(sys: &CoxeterSystem, ctx: &Field) -> Result<RootSystem> {
    let n = sys.rank();
    let mut gram = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(-cos_pi_over(ctx, sys.matrix[i][j])?);
        }
        gram.push(row);
    }
    let simple =
        (0..n).map(|s| (0..n).map(|t| if s == t { Scalar::one(ctx) } else { Scalar::zero(ctx) }).collect()).collect();
    Ok(RootSystem::from_simple(sys.clone(), ctx.clone(), gram, simple, true))
}

/// Standard-coordinate root system with true root lengths.
pub fn bourbaki_roots(kind: FactorType) -> Result<RootSystem> {
    let ctx = field_context(1)?;
    let q = |num: i64, den: i64| Scalar::from_frac(&ctx, num, den);
    let (dim, simple): (usize, Vec<Vec<(usize, Scalar)>>) = match kind.normalized() {
        FactorType::A(n) => (n + 1, (0..n).map(|i| vec![(i, q(1, 1)), (i + 1, q(-1, 1))]).collect()),
        FactorType::B(n) => {
            let mut s: Vec<Vec<(usize, Scalar)>> = (0..n - 1).map(|i| vec![(i, q(1, 1)), (i + 1, q(-1, 1))]).collect();
            let last = if matches!(kind, FactorType::C(_)) { q(2, 1) } else { q(1, 1) };
            s.push(vec![(n - 1, last)]);
            (n, s)
        }
        FactorType::D(n) => {
            let mut s: Vec<Vec<(usize, Scalar)>> = (0..n - 1).map(|i| vec![(i, q(1, 1)), (i + 1, q(-1, 1))]).collect();
            s.push(vec![(n - 2, q(1, 1)), (n - 1, q(1, 1))]);
            (n, s)
        }
        FactorType::E(n) => {
            let mut s = vec![
                (0..8).map(|i| (i, if i == 0 || i == 7 { q(1, 2) } else { q(-1, 2) })).collect::<Vec<_>>(),
                vec![(0, q(1, 1)), (1, q(1, 1))],
            ];
            for i in 0..6 {
                s.push(vec![(i, q(-1, 1)), (i + 1, q(1, 1))]);
            }
            s.truncate(n);
            (8, s)
        }
        FactorType::F4 => (
            4,
            vec![
                vec![(1, q(1, 1)), (2, q(-1, 1))],
                vec![(2, q(1, 1)), (3, q(-1, 1))],
                vec![(3, q(1, 1))],
                vec![(0, q(1, 2)), (1, q(-1, 2)), (2, q(-1, 2)), (3, q(-1, 2))],
            ],
        ),
        FactorType::G2 => (3, vec![vec![(0, q(1, 1)), (1, q(-1, 1))], vec![(0, q(-2, 1)), (1, q(1, 1)), (2, q(1, 1))]]),
        t => return Err(Error::UnsupportedType(format!("{t} has no crystallographic coordinates"))),
    };
    let simple: Vec<Vector> = simple
        .into_iter()
        .map(|entries| {
            let mut v = linalg::zeros(&ctx, dim);
            for (i, x) in entries {
                v[i] = x;
            }
            v
        })
        .collect();
    let gram = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Scalar::one(&ctx) } else { Scalar::zero(&ctx) }).collect())
        .collect();
    let name = kind.to_string();
    let matrix = kind.standard_matrix();
    let n = matrix.len();
    let sys = CoxeterSystem {
        name: name.clone(),
        labels: (1..=n).map(|i| format!("s{i}")).collect(),
        matrix,
        factors: vec![Factor { kind, gens: (0..n).collect() }],
    };
    Ok(RootSystem::from_simple(sys, ctx, gram, simple, false))
}

/// W enumerated as permutations of root indices.
pub struct Group {
    nroots: usize,
    perms: Vec<u16>,
    lengths: Vec<u32>,
    parent: Vec<(usize, u8)>,
    key_len: usize,
    index: HashMap<Vec<u16>, usize>,
}

impl Group {
    fn generate(rs: &RootSystem) -> Group {
        let nroots = rs.num_roots();
        let n = rs.rank();
        let mut g = Group {
            nroots,
            perms: Vec::new(),
            lengths: Vec::new(),
            parent: Vec::new(),
            key_len: n,
            index: HashMap::new(),
        };
        let id = rs.identity_perm();
        g.push(&id, 0, (usize::MAX, 0));
        let mut k = 0;
        while k < g.len() {
            let w = g.perm(k).to_vec();
            let len = g.lengths[k];
            for s in 0..n {
                let sr = rs.simple_reflection(s);
                let sw: Vec<u16> = w.iter().map(|&x| sr[x as usize]).collect();
                if !g.index.contains_key(&sw[..n]) {
                    g.push(&sw, len + 1, (k, s as u8));
                }
            }
            k += 1;
        }
        g
    }

    fn push(&mut self, perm: &[u16], len: u32, parent: (usize, u8)) {
        self.index.insert(perm[..self.key_len].to_vec(), self.lengths.len());
        self.perms.extend_from_slice(perm);
        self.lengths.push(len);
        self.parent.push(parent);
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn perm(&self, w: usize) -> &[u16] {
        &self.perms[w * self.nroots..(w + 1) * self.nroots]
    }

    pub fn element(&self, w: usize) -> GroupElement {
        GroupElement { perm: self.perm(w).to_vec() }
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w] as usize
    }

    pub fn det(&self, w: usize) -> i32 {
        if self.lengths[w].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn act(&self, w: usize, i: usize) -> usize {
        self.perms[w * self.nroots + i] as usize
    }

    /// Index of the element with the given root permutation.
    pub fn find(&self, perm: &[u16]) -> Option<usize> {
        self.index.get(&perm[..self.key_len]).copied()
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let pa = self.perm(a);
        let p: Vec<u16> = self.perm(b).iter().map(|&x| pa[x as usize]).collect();
        self.find(&p).expect("group closed under composition")
    }

    pub fn inverse(&self, w: usize) -> usize {
        let p = self.perm(w);
        let mut inv = vec![0u16; p.len()];
        for (i, &x) in p.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        self.find(&inv).expect("group closed under inverses")
    }

    /// A reduced word (generator indices, applied right to left as written left to right).
    pub fn word(&self, mut w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while self.parent[w].0 != usize::MAX {
            out.push(self.parent[w].1 as usize);
            w = self.parent[w].0;
        }
        out
    }

    /// The unique element of maximal length.
    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&w| self.lengths[w]).unwrap_or(0)
    }
}

/// A group element as a permutation of root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub perm: Vec<u16>,
}

impl GroupElement {
    pub fn identity(rs: &RootSystem) -> GroupElement {
        GroupElement { perm: rs.identity_perm() }
    }

    pub fn reflection(rs: &RootSystem, alpha: usize) -> GroupElement {
        GroupElement { perm: rs.reflection_perm(alpha) }
    }

    pub fn act(&self, alpha: usize) -> usize {
        self.perm[alpha] as usize
    }

    pub fn length(&self, rs: &RootSystem) -> usize {
        rs.length(&self.perm)
    }

    pub fn det(&self, rs: &RootSystem) -> i32 {
        rs.det(&self.perm)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { perm: other.perm.iter().map(|&x| self.perm[x as usize]).collect() }
    }

    pub fn inverse(&self) -> GroupElement {
        let mut inv = vec![0u16; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        GroupElement { perm: inv }
    }
}

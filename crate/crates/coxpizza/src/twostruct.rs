//! 2-structures: enumeration, validation, signs and chamber restriction.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde_json::{json, Value};

use crate::complex::{FacePoset, SignVec};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::rootsys::{bourbaki_roots, FactorType, Group, RootSystem};
use crate::scalar::{cos_k_pi_over_n, Scalar};

/// Type of an irreducible component of a 2-structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    A1,
    B2,
    /// Dihedral with `m` lines, m = 2^k ≥ 8.
    I2(u32),
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::A1 => write!(f, "A1"),
            ComponentKind::B2 => write!(f, "B2"),
            ComponentKind::I2(m) => write!(f, "I2({m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Positive roots of the component, sorted.
    pub positives: Vec<usize>,
}

/// A 2-structure φ, stored through φ⁺ = φ ∩ Φ⁺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStructure {
    pub positives: Vec<usize>,
    /// Components ordered by their smallest positive root.
    pub components: Vec<Component>,
}

impl TwoStructure {
    /// Rank of span φ.
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| if c.kind == ComponentKind::A1 { 1 } else { 2 }).sum()
    }

    /// Type string such as `B2^2xA1`.
    pub fn type_string(&self) -> String {
        let mut counts: Vec<(ComponentKind, usize)> = Vec::new();
        for c in &self.components {
            match counts.iter_mut().find(|(k, _)| *k == c.kind) {
                Some(e) => e.1 += 1,
                None => counts.push((c.kind, 1)),
            }
        }
        counts.sort_by_key(|c| std::cmp::Reverse(c.0));
        if counts.is_empty() {
            return "empty".into();
        }
        counts
            .iter()
            .map(|(k, n)| if *n == 1 { k.to_string() } else { format!("{k}^{n}") })
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn contains(&self, root: usize) -> bool {
        self.positives.binary_search(&root).is_ok()
    }

    pub fn to_json(&self, eps: Option<i32>) -> Value {
        let comps: Vec<Value> =
            self.components.iter().map(|c| json!({ "type": c.kind.to_string(), "positives": c.positives })).collect();
        let mut v = json!({ "positives": self.positives, "type": self.type_string(), "components": comps });
        if let Some(e) = eps {
            v["epsilon"] = json!(e);
        }
        v
    }
}

fn line_set(rs: &RootSystem, roots: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let set: BTreeSet<usize> = roots.into_iter().map(|r| rs.line(r)).collect();
    set.into_iter().collect()
}

/// Smallest set of positive roots containing `gens` (up to sign) and closed under their reflections.
pub fn close_under_reflections(rs: &RootSystem, gens: &[usize]) -> Vec<usize> {
    let mut set: Vec<usize> = line_set(rs, gens.iter().copied());
    loop {
        let mut added = false;
        let cur = set.clone();
        for &a in &cur {
            let perm = rs.reflection_perm(a);
            for &b in &cur {
                let c = rs.line(perm[b] as usize);
                if let Err(pos) = set.binary_search(&c) {
                    set.insert(pos, c);
                    added = true;
                }
            }
        }
        if !added {
            return set;
        }
    }
}

/// Splits a set of positive roots into components and checks condition (a) of the definition.
pub fn decompose(rs: &RootSystem, positives: &[usize]) -> std::result::Result<Vec<Component>, String> {
    let n = positives.len();
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if comp_of[i] != usize::MAX {
            continue;
        }
        let c = comps.len();
        comp_of[i] = c;
        let mut members = vec![i];
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for j in 0..n {
                if comp_of[j] == usize::MAX && !rs.orthogonal(positives[a], positives[j]) {
                    comp_of[j] = c;
                    members.push(j);
                }
            }
            k += 1;
        }
        comps.push(members.into_iter().map(|j| positives[j]).collect());
    }
    let mut out = Vec::new();
    for mut members in comps {
        members.sort_unstable();
        let kind = if members.len() == 1 {
            ComponentKind::A1
        } else {
            let rows: Vec<Vector> = members.iter().map(|&r| rs.root(r).to_vec()).collect();
            if linalg::rank(&rows) != 2 {
                return Err(format!("component {:?} has rank above 2", members));
            }
            let m = members.len() as u32;
            if !m.is_power_of_two() || m < 4 {
                return Err(format!("component {:?} has {m} lines, not a power of two at least 4", members));
            }
            if close_under_reflections(rs, &members) != members {
                return Err(format!("component {:?} is not closed under its reflections", members));
            }
            if m == 4 {
                ComponentKind::B2
            } else {
                ComponentKind::I2(m)
            }
        };
        out.push(Component { kind, positives: members });
    }
    out.sort_by_key(|c| c.positives[0]);
    Ok(out)
}

/// Outcome of validating a candidate 2-structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnosis {
    pub ok: bool,
    pub reason: Option<String>,
}

/// Checks the component condition and that the setwise stabilizer of φ⁺ lies in the determinant-one subgroup.
pub fn is_two_structure(rs: &RootSystem, group: Option<&Group>, positives: &[usize]) -> Result<Diagnosis> {
    let positives = line_set(rs, positives.iter().copied());
    if let Err(reason) = decompose(rs, &positives) {
        return Ok(Diagnosis { ok: false, reason: Some(reason) });
    }
    let bad = match group {
        Some(g) => stabilizer_witness_group(rs, g, &positives),
        None => stabilizer_witness_search(rs, &positives)?,
    };
    Ok(match bad {
        None => Diagnosis { ok: true, reason: None },
        Some(w) => {
            Diagnosis { ok: false, reason: Some(format!("stabilizer contains an element of determinant -1: {w}")) }
        }
    })
}

fn membership(rs: &RootSystem, positives: &[usize]) -> Vec<bool> {
    let mut m = vec![false; rs.num_roots()];
    for &p in positives {
        m[p] = true;
    }
    m
}

fn stabilizer_witness_group(rs: &RootSystem, g: &Group, positives: &[usize]) -> Option<String> {
    let inside = membership(rs, positives);
    (0..g.len())
        .find(|&w| g.det(w) == -1 && positives.iter().all(|&p| inside[g.act(w, p)]))
        .map(|w| format!("word {:?}", g.word(w)))
}

/// Stabilizer scan without the group, for φ made of orthogonal lines spanning V.
///
/// An element fixing φ⁺ setwise permutes this orthogonal basis, so it is one of
/// the basis permutations; each is tested for preserving Φ and for lying in W.
fn stabilizer_witness_search(rs: &RootSystem, positives: &[usize]) -> Result<Option<String>> {
    let r = positives.len();
    let pairwise_orth = (0..r).all(|i| (i + 1..r).all(|j| rs.orthogonal(positives[i], positives[j])));
    if !pairwise_orth || r != rs.rank() {
        return Err(Error::GroupTooLarge { bound: crate::rootsys::group_bound_from_env() });
    }
    let inv_norms: Vec<Scalar> = positives.iter().map(|&t| rs.norm2(t).inv().expect("nonzero")).collect();
    let mut ids: HashMap<Scalar, u16> = HashMap::new();
    let mut table: Vec<Vec<u16>> = Vec::with_capacity(rs.num_roots());
    for b in 0..rs.num_roots() {
        let row = (0..r)
            .map(|i| {
                let c = &rs.root_ip(b, positives[i]) * &inv_norms[i];
                let next = ids.len() as u16;
                *ids.entry(c).or_insert(next)
            })
            .collect();
        table.push(row);
    }
    let lookup: HashMap<&[u16], usize> = table.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let npos = rs.num_positive();
    let mut sigma: Vec<usize> = (0..r).collect();
    let mut witness = None;
    let mut check = |sigma: &[usize]| -> bool {
        if (0..r).any(|i| rs.norm2(positives[i]) != rs.norm2(positives[sigma[i]])) {
            return true;
        }
        let mut perm = vec![0u16; rs.num_roots()];
        let mut img = vec![0u16; r];
        for b in 0..rs.num_roots() {
            for i in 0..r {
                img[sigma[i]] = table[b][i];
            }
            match lookup.get(img.as_slice()) {
                Some(&k) => perm[b] = k as u16,
                None => return true,
            }
        }
        // Reduce by simple reflections; the map lies in W iff this reaches the identity.
        let mut steps = 0usize;
        while let Some(s) = (0..rs.rank()).find(|&s| perm[s] as usize >= npos) {
            let sr = rs.simple_reflection(s);
            perm = sr.iter().map(|&x| perm[x as usize]).collect();
            steps += 1;
        }
        let in_w = perm.iter().enumerate().all(|(i, &x)| x as usize == i);
        if in_w && steps % 2 == 1 {
            witness = Some(format!("basis permutation {:?}", sigma));
            return false;
        }
        true
    };
    permute(&mut sigma, 0, &mut check);
    Ok(witness)
}

/// Visits all permutations of `v[k..]`; stops when `f` returns false.
fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return f(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        let go = permute(v, k + 1, f);
        v.swap(k, i);
        if !go {
            return false;
        }
    }
    true
}

/// Builds the 2-structure on the given positive roots, checking only condition (a).
pub fn from_positives(rs: &RootSystem, positives: &[usize]) -> Result<TwoStructure> {
    let positives = line_set(rs, positives.iter().copied());
    let components = decompose(rs, &positives).map_err(Error::InvalidChoice)?;
    Ok(TwoStructure { positives, components })
}

/// The standard representative 2-structure, assembled factor by factor.
pub fn seed_two_structure(rs: &RootSystem) -> Result<TwoStructure> {
    let mut all = Vec::new();
    for f in &rs.sys.factors {
        let (sub, map) = rs.parabolic(&f.gens)?;
        let seed = irreducible_seed(&sub, f.kind)?;
        all.extend(seed.into_iter().map(|i| map[i]));
    }
    from_positives(rs, &all)
}

/// Generators of each component in standard coordinates, as (coordinate, integer) lists.
fn standard_seed_generators(kind: FactorType) -> Vec<Vec<Vec<(usize, i64)>>> {
    match kind {
        FactorType::A(n) => (0..n.div_ceil(2)).map(|i| vec![vec![(2 * i, 1), (2 * i + 1, -1)]]).collect(),
        FactorType::B(n) | FactorType::C(n) => {
            let short = if matches!(kind, FactorType::C(_)) { 2 } else { 1 };
            let mut out: Vec<Vec<Vec<(usize, i64)>>> =
                (0..n / 2).map(|i| vec![vec![(2 * i + 1, short)], vec![(2 * i, 1), (2 * i + 1, -1)]]).collect();
            if n % 2 == 1 {
                out.push(vec![vec![(n - 1, short)]]);
            }
            out
        }
        FactorType::D(n) => (0..n / 2)
            .flat_map(|i| [vec![vec![(2 * i, 1), (2 * i + 1, -1)]], vec![vec![(2 * i, 1), (2 * i + 1, 1)]]])
            .collect(),
        FactorType::E(n) => {
            let pairs = match n {
                6 => 2,
                7 => 3,
                _ => 4,
            };
            let mut out: Vec<Vec<Vec<(usize, i64)>>> = (0..pairs)
                .flat_map(|i| [vec![vec![(2 * i, 1), (2 * i + 1, -1)]], vec![vec![(2 * i, 1), (2 * i + 1, 1)]]])
                .collect();
            if n == 7 {
                out.push(vec![vec![(6, 1), (7, -1)]]);
            }
            out
        }
        FactorType::F4 => vec![vec![vec![(1, 1)], vec![(0, 1), (1, -1)]], vec![vec![(3, 1)], vec![(2, 1), (3, -1)]]],
        FactorType::G2 => vec![vec![vec![(0, 1), (1, -1)]], vec![vec![(0, -1), (1, -1), (2, 2)]]],
        _ => Vec::new(),
    }
}

/// Seed on an irreducible system whose generators are in standard order for `kind`.
fn irreducible_seed(sub: &RootSystem, kind: FactorType) -> Result<Vec<usize>> {
    match kind.normalized() {
        FactorType::H(_) => {
            let sets = orthogonal_sets(sub, sub.rank(), None, 1);
            sets.into_iter()
                .next()
                .ok_or_else(|| Error::UnsupportedType(format!("{kind}: no orthogonal basis of roots")))
        }
        FactorType::I2(m) => {
            let r = m.trailing_zeros();
            let ctx = sub.ctx();
            let nn = ctx.conductor() as i64;
            let step = nn / (1i64 << r);
            let targets: HashSet<Scalar> = (0..=(1i64 << r)).map(|j| cos_k_pi_over_n(ctx, j * step)).collect();
            Ok((0..sub.num_positive()).filter(|&b| targets.contains(&sub.root_ip(b, 0))).collect())
        }
        _ => {
            let bou = bourbaki_roots(kind)?;
            let same = bou.num_roots() == sub.num_roots()
                && (0..sub.rank()).all(|s| bou.simple_reflection(s) == sub.simple_reflection(s));
            if !same {
                return Err(Error::UnsupportedType(format!("{kind}: root orderings do not correspond")));
            }
            let ctx = bou.ctx().clone();
            let mut out = Vec::new();
            for gens in standard_seed_generators(kind) {
                let idx: Vec<usize> = gens
                    .iter()
                    .map(|entries| {
                        let mut v = linalg::zeros(&ctx, bou.dim());
                        for &(i, x) in entries {
                            v[i] = Scalar::from_int(&ctx, x);
                        }
                        bou.find(&v).expect("seed generator is a root")
                    })
                    .collect();
                out.extend(close_under_reflections(&bou, &idx));
            }
            Ok(out)
        }
    }
}

/// The W-orbit of the seed, each member validated.
pub fn enumerate_two_structures(rs: &RootSystem, group: &Group) -> Result<Vec<TwoStructure>> {
    let seed = seed_two_structure(rs)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for w in 0..group.len() {
        let img = line_set(rs, seed.positives.iter().map(|&p| group.act(w, p)));
        if seen.insert(img.clone()) {
            let d = is_two_structure(rs, Some(group), &img)?;
            if !d.ok {
                return Err(Error::InvalidChoice(format!("orbit member {:?} fails: {:?}", img, d.reason)));
            }
            out.push(from_positives(rs, &img)?);
        }
    }
    out.sort_by(|a, b| a.positives.cmp(&b.positives));
    Ok(out)
}

/// Ordered orthogonal pairs (α, α′) in a rank-2 component that reproduce its positive roots
/// as the lexicographically positive ones.
pub fn valid_pairs(rs: &RootSystem, comp: &Component) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &a in &comp.positives {
        for &b in &comp.positives {
            if a == b || !rs.orthogonal(a, b) {
                continue;
            }
            let ok = comp.positives.iter().all(|&beta| lex_sign(&[rs.root_ip(beta, a), rs.root_ip(beta, b)]) > 0);
            if ok {
                out.push((a, b));
            }
        }
    }
    out
}

fn lex_sign(v: &[Scalar]) -> i8 {
    v.iter().map(Scalar::sign).find(|&s| s != 0).unwrap_or(0)
}

/// The sequence θ for a component order and a choice index per rank-2 component.
pub fn theta_sequence(rs: &RootSystem, ts: &TwoStructure, order: &[usize], choices: &[usize]) -> Result<Vec<usize>> {
    if order.len() != ts.components.len() || {
        let mut o = order.to_vec();
        o.sort_unstable();
        o != (0..order.len()).collect::<Vec<_>>()
    } {
        return Err(Error::InvalidChoice(format!("component order {:?} is not a permutation", order)));
    }
    let mut theta = Vec::new();
    for &ci in order {
        let comp = &ts.components[ci];
        if comp.kind == ComponentKind::A1 {
            theta.push(comp.positives[0]);
        } else {
            let pairs = valid_pairs(rs, comp);
            let c = choices.get(ci).copied().unwrap_or(0);
            let &(a, b) = pairs.get(c).ok_or_else(|| {
                Error::InvalidChoice(format!("component {ci} has {} valid pairs, asked for {c}", pairs.len()))
            })?;
            theta.push(a);
            theta.push(b);
        }
    }
    Ok(theta)
}

/// det(w_θ) = (−1)^{|Φ⁺_θ ∩ Φ⁻|}.
pub fn det_w_theta(rs: &RootSystem, theta: &[usize]) -> Result<i32> {
    let mut neg = 0usize;
    for a in 0..rs.num_positive() {
        let v: Vec<Scalar> = theta.iter().map(|&t| rs.root_ip(a, t)).collect();
        match lex_sign(&v) {
            0 => return Err(Error::InvalidChoice(format!("root {a} is orthogonal to every element of θ"))),
            s if s < 0 => neg += 1,
            _ => {}
        }
    }
    Ok(if neg.is_multiple_of(2) { 1 } else { -1 })
}

/// (−1)^{r+r′}: A_{2n} factors with n odd, and I2(2n′+1) factors with n′ ≥ 3 odd.
pub fn sign_correction(rs: &RootSystem) -> i32 {
    let mut count = 0;
    for f in &rs.sys.factors {
        match f.kind.normalized() {
            FactorType::A(n) if n % 2 == 0 && (n / 2) % 2 == 1 => count += 1,
            FactorType::I2(m) if m % 2 == 1 && (m - 1) / 2 >= 3 && ((m - 1) / 2) % 2 == 1 => count += 1,
            _ => {}
        }
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn epsilon_with(rs: &RootSystem, ts: &TwoStructure, order: &[usize], choices: &[usize]) -> Result<i32> {
    let theta = theta_sequence(rs, ts, order, choices)?;
    Ok(sign_correction(rs) * det_w_theta(rs, &theta)?)
}

/// ε(φ, Φ⁺) with components in stored order and the first valid pair on each.
pub fn epsilon(rs: &RootSystem, ts: &TwoStructure) -> Result<i32> {
    let order: Vec<usize> = (0..ts.components.len()).collect();
    epsilon_with(rs, ts, &order, &[])
}

/// Every component order and pair choice, for checking that ε does not depend on them.
pub fn all_selections(rs: &RootSystem, ts: &TwoStructure) -> Vec<(Vec<usize>, Vec<usize>)> {
    let k = ts.components.len();
    let mut orders = Vec::new();
    let mut v: Vec<usize> = (0..k).collect();
    permute(&mut v, 0, &mut |p| {
        orders.push(p.to_vec());
        orders.len() < 720
    });
    let counts: Vec<usize> =
        ts.components.iter().map(|c| if c.kind == ComponentKind::A1 { 1 } else { valid_pairs(rs, c).len() }).collect();
    let mut choices = vec![Vec::new()];
    for &c in &counts {
        choices = choices
            .into_iter()
            .flat_map(|prefix: Vec<usize>| (0..c).map(move |x| [prefix.clone(), vec![x]].concat()))
            .collect();
    }
    let mut out = Vec::new();
    for o in &orders {
        for c in &choices {
            out.push((o.clone(), c.clone()));
        }
    }
    out
}

/// (Σ_{w(φ⁺) ⊆ Φ⁺} det w, |{w : w(φ⁺) ⊆ φ⁺}|).
pub fn stabilizer_sums(rs: &RootSystem, group: &Group, ts: &TwoStructure) -> (i64, usize) {
    let inside = membership(rs, &ts.positives);
    let mut sum = 0i64;
    let mut w1 = 0usize;
    for w in 0..group.len() {
        if ts.positives.iter().all(|&p| rs.is_positive(group.act(w, p))) {
            sum += group.det(w) as i64;
            if ts.positives.iter().all(|&p| inside[group.act(w, p)]) {
                w1 += 1;
            }
        }
    }
    (sum, w1)
}

/// |W(φ,Φ⁺)| and |W₁(φ,Φ⁺)|.
pub fn stabilizer_counts(rs: &RootSystem, group: &Group, ts: &TwoStructure) -> (usize, usize) {
    let inside = membership(rs, &ts.positives);
    let mut wp = 0;
    let mut w1 = 0;
    for w in 0..group.len() {
        if ts.positives.iter().all(|&p| rs.is_positive(group.act(w, p))) {
            wp += 1;
            if ts.positives.iter().all(|&p| inside[group.act(w, p)]) {
                w1 += 1;
            }
        }
    }
    (wp, w1)
}

/// ε from the stabilizer quotient, as a reduced fraction.
pub fn epsilon_stabilizer_oracle(rs: &RootSystem, group: &Group, ts: &TwoStructure) -> (i64, i64) {
    let (sum, w1) = stabilizer_sums(rs, group, ts);
    let g = num::integer::gcd(sum, w1 as i64).max(1);
    (sum / g, w1 as i64 / g)
}

/// Z_φ(T): the chamber of H_φ containing T, as a sign vector over φ⁺ in order.
pub fn chamber_restriction(poset: &FacePoset, ts: &TwoStructure, t: usize) -> SignVec {
    let pos: Vec<usize> = ts
        .positives
        .iter()
        .map(|r| poset.hyperplanes().iter().position(|h| h == r).expect("φ⁺ hyperplane in arrangement"))
        .collect();
    poset.sign(t).gather(&pos)
}

/// Length class selector for orthogonal-set counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthClass {
    Short,
    Long,
}

/// Pairwise orthogonal sets of `k` positive roots of equal length (optionally of a given class),
/// listing at most `limit` of them.
pub fn orthogonal_sets(rs: &RootSystem, k: usize, class: Option<LengthClass>, limit: usize) -> Vec<Vec<usize>> {
    let cand = length_candidates(rs, class);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        rs: &RootSystem,
        cand: &[usize],
        start: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..cand.len() {
            let r = cand[i];
            if cur.iter().all(|&c| rs.norm2(c) == rs.norm2(r) && rs.orthogonal(c, r)) {
                cur.push(r);
                rec(rs, cand, i + 1, k, cur, out, limit);
                cur.pop();
            }
        }
    }
    rec(rs, &cand, 0, k, &mut cur, &mut out, limit);
    out
}

fn length_candidates(rs: &RootSystem, class: Option<LengthClass>) -> Vec<usize> {
    let p = rs.num_positive();
    match class {
        None => (0..p).collect(),
        Some(c) => {
            let norms: Vec<&Scalar> = (0..p).map(|i| rs.norm2(i)).collect();
            let target = match c {
                LengthClass::Short => norms.iter().min().copied(),
                LengthClass::Long => norms.iter().max().copied(),
            };
            (0..p).filter(|&i| Some(rs.norm2(i)) == target).collect()
        }
    }
}

/// Number of pairwise orthogonal `k`-sets of roots of equal length; each set of
/// `k` orthogonal lines contributes `2^k` sets of roots.
pub fn orthogonal_set_count(rs: &RootSystem, k: usize, class: Option<LengthClass>) -> u64 {
    let cand = length_candidates(rs, class);
    let n = cand.len();
    // Adjacency as bitsets over candidate positions.
    let words = n.div_ceil(64);
    let adj: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = vec![0u64; words];
            for j in i + 1..n {
                if rs.norm2(cand[i]) == rs.norm2(cand[j]) && rs.orthogonal(cand[i], cand[j]) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    fn count(adj: &[Vec<u64>], allowed: &[u64], k: usize) -> u64 {
        if k == 0 {
            return 1;
        }
        let mut total = 0;
        for (wi, &word) in allowed.iter().enumerate() {
            let mut m = word;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                let i = wi * 64 + b;
                if k == 1 {
                    total += 1;
                    continue;
                }
                let next: Vec<u64> = allowed.iter().zip(&adj[i]).map(|(a, b)| a & b).collect();
                total += count(adj, &next, k - 1);
            }
        }
        total
    }
    let mut all = vec![0u64; words];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    count(&adj, &all, k) << k
}

/// Expected value of |Φ⁺ − φ⁺| for an irreducible type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualRule {
    Mod4(usize),
    Exact(usize),
}

pub fn residual_rule(kind: FactorType) -> ResidualRule {
    match kind.normalized() {
        FactorType::A(n) if n % 2 == 0 => ResidualRule::Mod4(n % 4),
        FactorType::I2(m) => {
            let r = m.trailing_zeros();
            let odd = (m >> r) as usize;
            ResidualRule::Exact((1usize << r) * (odd - 1))
        }
        _ => ResidualRule::Mod4(0),
    }
}

/// |Φ⁺ − φ⁺| for the seed, with whether it matches the case table.
pub fn residual_count_check(rs: &RootSystem, ts: &TwoStructure) -> (usize, bool) {
    let res = rs.num_positive() - ts.positives.len();
    let ok = match rs.sys.factors.as_slice() {
        [f] => match residual_rule(f.kind) {
            ResidualRule::Mod4(v) => res % 4 == v,
            ResidualRule::Exact(v) => res == v,
        },
        _ => res.is_multiple_of(2),
    };
    (res, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{canonical_roots, parse_type, DEFAULT_GROUP_BOUND};

    fn build(t: &str) -> (RootSystem, Group) {
        let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        (rs, g)
    }

    /// Brute force over all sets of positive roots.
    fn brute_force(rs: &RootSystem, g: &Group) -> Vec<Vec<usize>> {
        let p = rs.num_positive();
        let mut out = Vec::new();
        for mask in 1u32..(1 << p) {
            let set: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).collect();
            if is_two_structure(rs, Some(g), &set).unwrap().ok {
                out.push(set);
            }
        }
        out
    }

    #[test]
    fn rank_two_brute_force_matches_orbit() {
        for t in ["B2", "A2", "I2(8)", "I2(5)", "A1xA1", "G2", "I2(12)"] {
            let (rs, g) = build(t);
            let orbit: Vec<Vec<usize>> =
                enumerate_two_structures(&rs, &g).unwrap().into_iter().map(|ts| ts.positives).collect();
            let mut brute = brute_force(&rs, &g);
            brute.sort();
            assert_eq!(orbit, brute, "{t}");
        }
        let (rs, g) = build("B2");
        assert_eq!(enumerate_two_structures(&rs, &g).unwrap().len(), 1);
    }

    #[test]
    fn stabilizer_examples() {
        let (a2, g2) = build("A2");
        for p in 0..3 {
            assert!(is_two_structure(&a2, Some(&g2), &[p]).unwrap().ok);
        }
        let (a3, g3) = build("A3");
        let d = is_two_structure(&a3, Some(&g3), &[0]).unwrap();
        assert!(!d.ok);
        assert!(d.reason.unwrap().contains("determinant"));
    }

    #[test]
    fn seed_types() {
        for (t, ty) in [
            ("A1", "A1"),
            ("A4", "A1^2"),
            ("A5", "A1^3"),
            ("B3", "B2xA1"),
            ("B4", "B2^2"),
            ("C3", "B2xA1"),
            ("D4", "A1^4"),
            ("D5", "A1^4"),
            ("F4", "B2^2"),
            ("G2", "A1^2"),
            ("H3", "A1^3"),
            ("H4", "A1^4"),
            ("I2(7)", "A1"),
            ("I2(12)", "B2"),
            ("I2(8)", "I2(8)"),
            ("I2(16)", "I2(16)"),
            ("E6", "A1^4"),
            ("E7", "A1^7"),
            ("E8", "A1^8"),
            ("B2xA2", "B2xA1"),
        ] {
            let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
            let s = seed_two_structure(&rs).unwrap();
            assert_eq!(s.type_string(), ty, "{t}");
        }
    }

    #[test]
    fn e7_and_e8_seeds_pass_the_stabilizer_search() {
        for t in ["E7", "E8"] {
            let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
            let s = seed_two_structure(&rs).unwrap();
            assert!(is_two_structure(&rs, None, &s.positives).unwrap().ok, "{t}");
        }
        let rs = canonical_roots(&parse_type("A3").unwrap()).unwrap();
        assert!(matches!(is_two_structure(&rs, None, &[0]), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn search_agrees_with_group_scan() {
        for t in ["A3", "B2", "D4", "H3", "A1xA1xA1"] {
            let (rs, g) = build(t);
            for set in orthogonal_sets(&rs, rs.rank(), None, 50) {
                let a = is_two_structure(&rs, Some(&g), &set).unwrap().ok;
                let b = is_two_structure(&rs, None, &set).unwrap().ok;
                assert_eq!(a, b, "{t} {set:?}");
            }
        }
    }

    #[test]
    fn sum_of_signs_and_oracle() {
        for t in ["A1", "A2", "A3", "A4", "B2", "B3", "G2", "H3", "I2(7)", "I2(8)", "I2(11)", "A2xA1", "I2(5)xA1"] {
            let (rs, g) = build(t);
            let all = enumerate_two_structures(&rs, &g).unwrap();
            let mut sum = 0;
            for ts in &all {
                let e = epsilon(&rs, ts).unwrap();
                sum += e;
                assert_eq!(epsilon_stabilizer_oracle(&rs, &g, ts), (e as i64, 1), "{t}");
                let (wp, w1) = stabilizer_counts(&rs, &g, ts);
                assert_eq!(wp / w1, all.len());
                assert_eq!(wp % w1, 0);
            }
            assert_eq!(sum, 1, "{t}");
        }
    }

    #[test]
    fn epsilon_is_choice_independent() {
        for t in ["B3", "I2(8)", "F4", "B2xA1", "I2(16)"] {
            let (rs, g) = build(t);
            for ts in enumerate_two_structures(&rs, &g).unwrap().iter().take(12) {
                let e = epsilon(&rs, ts).unwrap();
                for (o, c) in all_selections(&rs, ts) {
                    assert_eq!(epsilon_with(&rs, ts, &o, &c).unwrap(), e, "{t}");
                }
            }
        }
    }

    #[test]
    fn theta_pairs() {
        let (rs, g) = build("I2(8)");
        let ts = &enumerate_two_structures(&rs, &g).unwrap()[0];
        assert_eq!(valid_pairs(&rs, &ts.components[0]).len(), 2);
        let b2 = bourbaki_roots(FactorType::B(2)).unwrap();
        let ts = from_positives(&b2, &[0, 1, 2, 3]).unwrap();
        let ctx = b2.ctx().clone();
        let e1 = b2.find(&[Scalar::one(&ctx), Scalar::zero(&ctx)]).unwrap();
        let e2 = b2.find(&[Scalar::zero(&ctx), Scalar::one(&ctx)]).unwrap();
        let pairs = valid_pairs(&b2, &ts.components[0]);
        assert!(pairs.contains(&(e1, e2)));
        assert!(!pairs.contains(&(e2, e1)));
        assert!(theta_sequence(&b2, &ts, &[0], &[7]).is_err());
    }

    #[test]
    fn equivariance_of_sign() {
        let (rs, g) = build("B3");
        let all = enumerate_two_structures(&rs, &g).unwrap();
        let base = &all[0];
        let e0 = epsilon(&rs, base).unwrap();
        for w in 0..g.len() {
            if base.positives.iter().all(|&p| rs.is_positive(g.act(w, p))) {
                let img: Vec<usize> = base.positives.iter().map(|&p| g.act(w, p)).collect();
                let ts = from_positives(&rs, &img).unwrap();
                assert_eq!(epsilon(&rs, &ts).unwrap(), g.det(w) * e0);
            }
        }
    }

    #[test]
    fn orthogonal_set_counts() {
        let h3 = canonical_roots(&parse_type("H3").unwrap()).unwrap();
        assert_eq!(orthogonal_set_count(&h3, 1, None), 30);
        assert_eq!(orthogonal_set_count(&h3, 2, None), 60);
        assert_eq!(orthogonal_set_count(&h3, 3, None), 40);
        let f4 = bourbaki_roots(FactorType::F4).unwrap();
        assert_eq!(orthogonal_set_count(&f4, 4, Some(LengthClass::Short)), 48);
        assert_eq!(orthogonal_set_count(&f4, 4, Some(LengthClass::Long)), 48);
        // Five orthogonal frames of lines, each giving 2^3 signed sets.
        assert_eq!(orthogonal_sets(&h3, 3, None, usize::MAX).len(), 5);
    }

    #[test]
    fn residual_counts() {
        for (t, v) in [("A4", 8), ("I2(12)", 8), ("A1", 0), ("A2", 2), ("B3", 4), ("F4", 16)] {
            let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
            let ts = seed_two_structure(&rs).unwrap();
            assert_eq!(residual_count_check(&rs, &ts), (v, true), "{t}");
        }
    }

    #[test]
    fn chamber_sign_identity_in_a2() {
        let rs = std::sync::Arc::new(canonical_roots(&parse_type("A2").unwrap()).unwrap());
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let p = FacePoset::full(rs.clone(), &g).unwrap();
        let all = enumerate_two_structures(&rs, &g).unwrap();
        let b = p.base_chamber();
        for &t in p.chambers() {
            let lhs = if p.separation_count(b, t).is_multiple_of(2) { 1 } else { -1 };
            let rhs: i32 = all
                .iter()
                .map(|ts| {
                    let z = chamber_restriction(&p, ts, t);
                    epsilon(&rs, ts).unwrap() * if z.num_neg().is_multiple_of(2) { 1 } else { -1 }
                })
                .sum();
            assert_eq!(lhs, rhs);
            if p.separation_count(b, t) == 1 {
                let e = p.separation(b, t).trailing_zeros() as usize;
                let ts = all.iter().find(|ts| ts.positives == vec![e]).unwrap();
                assert_eq!(chamber_restriction(&p, ts, t).get(0), -1);
            }
        }
    }
}

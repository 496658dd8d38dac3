//! Exact arithmetic in the real cyclotomic field Q(θ), θ = 2cos(π/N).
//!
//! Elements are dense rational coefficient vectors in the power basis
//! 1, θ, …, θ^(d-1), reduced modulo the minimal polynomial of θ. Signs are
//! decided by evaluating on a rational enclosure of θ, refined by bisection
//! until the enclosure of the value excludes zero.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Shared, immutable description of Q(2cos(π/N)).
pub struct FieldContext {
    n: u32,
    minpoly: Vec<BigInt>,
    /// `reduction[k]` is θ^(d+k) written in the power basis, for k < d-1.
    reduction: Vec<Vec<BigRational>>,
    lo: BigRational,
    hi: BigRational,
    approx: f64,
}

pub type Field = Arc<FieldContext>;

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(2cos(pi/{}))", self.n)
    }
}

/// Builds the field context for conductor `n`.
pub fn field_context(n: u32) -> Result<Field> {
    if n == 0 {
        return Err(Error::InvalidChoice("conductor must be positive".into()));
    }
    let minpoly = real_cyclotomic_minpoly(n);
    let d = minpoly.len() - 1;
    let mut reduction = Vec::new();
    // θ^d = -(m_0 + m_1 θ + … + m_{d-1} θ^(d-1))
    let mut cur: Vec<BigRational> = minpoly[..d].iter().map(|c| BigRational::from_integer(-c.clone())).collect();
    for _ in 0..d.saturating_sub(1) {
        reduction.push(cur.clone());
        let top = cur[d - 1].clone();
        let mut next = vec![BigRational::zero(); d];
        for i in (1..d).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..d {
            next[i] -= &top * BigRational::from_integer(minpoly[i].clone());
        }
        cur = next;
    }
    let approx = 2.0 * (std::f64::consts::PI / n as f64).cos();
    let (lo, hi) = if d == 1 {
        let t = BigRational::from_integer(-minpoly[0].clone());
        (t.clone(), t)
    } else {
        theta_enclosure(n, &minpoly)
    };
    Ok(Arc::new(FieldContext { n, minpoly, reduction, lo, hi, approx }))
}

impl FieldContext {
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Minimal polynomial coefficients, lowest degree first, monic.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Current rational enclosure of θ.
    pub fn enclosure(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn theta_f64(&self) -> f64 {
        self.approx
    }
}

/// Element of Q(θ).
#[derive(Clone)]
pub struct Scalar {
    ctx: Field,
    c: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(ctx: &Field) -> Scalar {
        Scalar { ctx: ctx.clone(), c: vec![BigRational::zero(); ctx.degree()] }
    }

    pub fn one(ctx: &Field) -> Scalar {
        Scalar::from_ratio(ctx, BigRational::one())
    }

    pub fn from_int(ctx: &Field, v: i64) -> Scalar {
        Scalar::from_ratio(ctx, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(ctx: &Field, num: i64, den: i64) -> Scalar {
        Scalar::from_ratio(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(ctx: &Field, v: BigRational) -> Scalar {
        let mut s = Scalar::zero(ctx);
        s.c[0] = v;
        s
    }

    /// Builds an element from power-basis coefficients, reducing if needed.
    pub fn from_coeffs(ctx: &Field, coeffs: Vec<BigRational>) -> Scalar {
        let mut s = Scalar::zero(ctx);
        let d = ctx.degree();
        for (k, v) in coeffs.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if k < d {
                s.c[k] += v;
            } else {
                s.add_theta_power(k, &v);
            }
        }
        s
    }

    /// θ itself.
    pub fn theta(ctx: &Field) -> Scalar {
        let mut coeffs = vec![BigRational::zero(); 2];
        coeffs[1] = BigRational::one();
        Scalar::from_coeffs(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Field {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|v| v.is_zero())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(|v| v.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn check_ctx(&self, other: &Scalar) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.n == other.ctx.n,
            "mixing scalars of Q(2cos(pi/{})) and Q(2cos(pi/{}))",
            self.ctx.n,
            other.ctx.n
        );
    }

    fn add_theta_power(&mut self, k: usize, v: &BigRational) {
        let d = self.ctx.degree();
        if k < d {
            self.c[k] += v;
            return;
        }
        if d == 1 {
            let t = BigRational::from_integer(-self.ctx.minpoly[0].clone());
            self.c[0] += v * num::pow(t, k);
            return;
        }
        if k - d < self.ctx.reduction.len() {
            let ctx = self.ctx.clone();
            for (i, r) in ctx.reduction[k - d].iter().enumerate() {
                if !r.is_zero() {
                    self.c[i] += v * r;
                }
            }
            return;
        }
        // Powers beyond 2d-2 only arise from `from_coeffs`; multiply out θ^k directly.
        let mut p = vec![BigRational::zero(); d];
        p[0] = BigRational::one();
        let t = Scalar::theta(&self.ctx);
        let mut acc = Scalar { ctx: self.ctx.clone(), c: p };
        for _ in 0..k {
            acc = &acc * &t;
        }
        for i in 0..d {
            self.c[i] += v * &acc.c[i];
        }
    }

    pub fn scale(&self, v: &BigRational) -> Scalar {
        Scalar { ctx: self.ctx.clone(), c: self.c.iter().map(|x| x * v).collect() }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.ctx.degree();
        if d == 1 {
            return Ok(Scalar::from_ratio(&self.ctx, self.c[0].recip()));
        }
        // Columns of the multiplication-by-self matrix are self·θ^j.
        let t = Scalar::theta(&self.ctx);
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.c.clone());
            cur = &cur * &t;
        }
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let sol = solve_rational(&mut m, d).ok_or(Error::DivisionByZero)?;
        Ok(Scalar { ctx: self.ctx.clone(), c: sol })
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Floating point value under the real embedding θ = 2cos(π/N).
    pub fn to_f64(&self) -> f64 {
        let t = self.ctx.approx;
        let mut v = 0.0;
        for c in self.c.iter().rev() {
            v = v * t + c.to_f64().unwrap_or(f64::NAN);
        }
        v
    }

    /// Exact sign of the real number represented.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.ctx.degree() == 1 || self.c[1..].iter().all(|v| v.is_zero()) {
            return sign_of(&self.c[0]);
        }
        if let Some(s) = self.sign_filter() {
            return s;
        }
        self.sign_exact()
    }

    /// Fast floating-point decision with a generous forward-error margin.
    fn sign_filter(&self) -> Option<i8> {
        let t = self.ctx.approx;
        let mut v = 0.0f64;
        let mut mag = 0.0f64;
        for c in self.c.iter().rev() {
            let cf = c.to_f64()?;
            if !cf.is_finite() {
                return None;
            }
            v = v * t + cf;
            mag = mag * t.abs() + cf.abs();
        }
        if !v.is_finite() || !mag.is_finite() {
            return None;
        }
        if v.abs() > 1e-9 * mag {
            Some(if v > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    /// Interval evaluation with bisection refinement of the θ enclosure.
    fn sign_exact(&self) -> i8 {
        let mp: Vec<BigRational> = self.ctx.minpoly.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut lo = self.ctx.lo.clone();
        let mut hi = self.ctx.hi.clone();
        let s_lo = sign_of(&eval_poly(&mp, &lo));
        loop {
            let (a, b) = eval_interval(&self.c, &lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let s_mid = sign_of(&eval_poly(&mp, &mid));
            if s_mid == 0 {
                // θ is irrational here, so this cannot happen; keep the exact value.
                return sign_of(&eval_poly(&self.c, &mid));
            }
            if s_mid == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> = self.c.iter().map(|v| bigint_json(v.numer())).collect();
        let den: Vec<Value> = self.c.iter().map(|v| bigint_json(v.denom())).collect();
        json!({ "num": num, "den": den, "N": self.ctx.n })
    }

    /// Parses the JSON form produced by [`Scalar::to_json`].
    pub fn from_json(ctx: &Field, v: &Value) -> Result<Scalar> {
        let bad = |m: &str| Error::Parse { pos: 0, msg: m.to_string() };
        let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N"))?;
        if n as u32 != ctx.n {
            return Err(bad("conductor mismatch"));
        }
        let nums = v.get("num").and_then(Value::as_array).ok_or_else(|| bad("missing num"))?;
        let dens = v.get("den").and_then(Value::as_array).ok_or_else(|| bad("missing den"))?;
        if nums.len() != dens.len() {
            return Err(bad("num/den length mismatch"));
        }
        let parse = |x: &Value| -> Result<BigInt> {
            match x {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("non-integer coefficient")),
                Value::String(s) => s.parse::<BigInt>().map_err(|_| bad("bad integer")),
                _ => Err(bad("bad coefficient")),
            }
        };
        let mut coeffs = Vec::new();
        for (a, b) in nums.iter().zip(dens) {
            let d = parse(b)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            coeffs.push(BigRational::new(parse(a)?, d));
        }
        Ok(Scalar::from_coeffs(ctx, coeffs))
    }
}

fn bigint_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn sign_of(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn eval_poly(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Interval Horner evaluation of `p` over `[lo, hi]`.
fn eval_interval(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in p.iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// Gaussian elimination on an augmented `d × (d+1)` rational matrix.
fn solve_rational(m: &mut [Vec<BigRational>], d: usize) -> Option<Vec<BigRational>> {
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..=d {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=d {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[d].clone()).collect())
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.ctx.n == other.ctx.n && self.c == other.c
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.n.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Order of the real numbers represented.
    fn cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check_ctx(o);
        Scalar { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.check_ctx(o);
        Scalar { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check_ctx(o);
        let d = self.ctx.degree();
        if d == 1 {
            return Scalar { ctx: self.ctx.clone(), c: vec![&self.c[0] * &o.c[0]] };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = Scalar { ctx: self.ctx.clone(), c: prod[..d].to_vec() };
        for k in d..2 * d - 1 {
            if !prod[k].is_zero() {
                let v = std::mem::take(&mut prod[k]);
                out.add_theta_power(k, &v);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { ctx: self.ctx.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for a in self.c.iter_mut() {
            *a = -std::mem::take(a);
        }
        self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.check_ctx(o);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.check_ctx(o);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
    }
}

/// cos(π/m) as an element of the field; requires m | N.
pub fn cos_pi_over(ctx: &Field, m: u32) -> Result<Scalar> {
    if m == 0 || !ctx.n.is_multiple_of(m) {
        return Err(Error::IncompatibleConductor { m, n: ctx.n });
    }
    Ok(cos_k_pi_over_n(ctx, (ctx.n / m) as i64))
}

/// cos(kπ/N) as an element of the field, for any integer k.
pub fn cos_k_pi_over_n(ctx: &Field, k: i64) -> Scalar {
    // 2cos(kπ/N) = D_k(θ) with D_0 = 2, D_1 = θ, D_{j+1} = θ D_j - D_{j-1}.
    let k = k.unsigned_abs();
    let theta = Scalar::theta(ctx);
    let mut prev = Scalar::from_int(ctx, 2);
    let mut cur = theta.clone();
    if k == 0 {
        return Scalar::one(ctx);
    }
    for _ in 1..k {
        let next = &(&theta * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
}

/// Integer polynomial helpers, lowest degree first.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = &rem[k + dd] / &lead;
        for (i, dv) in den.iter().enumerate() {
            rem[k + i] -= &c * dv;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|v| v.is_zero()));
    q
}

fn cyclotomic(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic(d, memo);
            p = poly_div_exact(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

/// Minimal polynomial of 2cos(π/n), from the palindromic cyclotomic Φ_{2n}.
pub fn real_cyclotomic_minpoly(n: u32) -> Vec<BigInt> {
    if n == 1 {
        return vec![BigInt::from(2), BigInt::one()];
    }
    let phi = cyclotomic(2 * n, &mut HashMap::new());
    let k = (phi.len() - 1) / 2;
    // x^{-k} Φ(x) = a_0 + Σ_j a_j (x^j + x^{-j}) and x^j + x^{-j} = D_j(x + 1/x).
    let mut dickson: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for j in 1..k {
        let mut next = vec![BigInt::zero(); j + 2];
        for (i, c) in dickson[j].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in dickson[j - 1].iter().enumerate() {
            next[i] -= c;
        }
        dickson.push(next);
    }
    let mut out = vec![BigInt::zero(); k + 1];
    out[0] += &phi[k];
    for j in 1..=k {
        for (i, c) in dickson[j].iter().enumerate() {
            out[i] += &phi[k + j] * c;
        }
    }
    out
}

/// Rational bracket around θ from the float approximation, certified by a sign change.
///
/// The other roots of the minimal polynomial are 2cos(kπ/n) with k ≥ 3, at distance
/// at least about 8π²/n² from θ, so a bracket narrower than that holds only θ.
fn theta_enclosure(n: u32, minpoly: &[BigInt]) -> (BigRational, BigRational) {
    let t = 2.0 * (std::f64::consts::PI / n as f64).cos();
    let eps = 1e-12;
    assert!(8.0 * std::f64::consts::PI.powi(2) / (n as f64).powi(2) > 4.0 * eps, "conductor {n} too large");
    let lo = BigRational::from_float(t - eps).expect("finite");
    let hi = BigRational::from_float(t + eps).expect("finite");
    let mp: Vec<BigRational> = minpoly.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let a = sign_of(&eval_poly(&mp, &lo));
    let b = sign_of(&eval_poly(&mp, &hi));
    assert!(a * b < 0, "enclosure of 2cos(pi/{n}) does not bracket a simple root");
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(ctx: &Field, n: i64, d: i64) -> Scalar {
        Scalar::from_frac(ctx, n, d)
    }

    /// Independent oracle: expand Π (t - 2cos(kπ/N)) over gcd(k, 2N) = 1, k < N, in floating point.
    fn minpoly_oracle(n: u32) -> Vec<i64> {
        let mut poly = vec![1.0f64];
        for k in 1..(2 * n) {
            if k >= n || num::integer::gcd(k, 2 * n) != 1 {
                continue;
            }
            let r = 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos();
            let mut next = vec![0.0; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            poly = next;
        }
        poly.iter().map(|c| c.round() as i64).collect()
    }

    #[test]
    fn minpoly_small_conductors() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(real_cyclotomic_minpoly(2), ints(&[0, 1]));
        assert_eq!(real_cyclotomic_minpoly(3), ints(&[-1, 1]));
        assert_eq!(real_cyclotomic_minpoly(5), ints(&[-1, -1, 1]));
        assert_eq!(field_context(5).unwrap().degree(), 2);
    }

    #[test]
    fn minpoly_matches_product_oracle() {
        for n in 2..=40u32 {
            let got: Vec<i64> = real_cyclotomic_minpoly(n).iter().map(|c| c.to_i64().unwrap()).collect();
            assert_eq!(got, minpoly_oracle(n), "N = {n}");
            let phi2n = (1..=2 * n).filter(|&k| num::integer::gcd(k, 2 * n) == 1).count();
            assert_eq!(got.len() - 1, phi2n / 2);
        }
    }

    #[test]
    fn golden_ratio_arithmetic() {
        let k = field_context(5).unwrap();
        let t = Scalar::theta(&k);
        assert_eq!(&t * &t, &t + &Scalar::one(&k));
        assert_eq!((&t - &Scalar::one(&k)).sign(), 1);
        assert_eq!(q(&k, -1, 2).sign(), -1);
        assert_eq!(Scalar::zero(&k).sign(), 0);
        // θ - 1 = 1/θ for the golden ratio.
        assert_eq!(t.inv().unwrap(), &t - &Scalar::one(&k));
    }

    #[test]
    fn cosines() {
        let k = field_context(12).unwrap();
        assert!(cos_pi_over(&k, 2).unwrap().is_zero());
        assert_eq!(cos_pi_over(&k, 3).unwrap(), q(&k, 1, 2));
        let c4 = cos_pi_over(&k, 4).unwrap();
        assert_eq!(&c4 * &c4, q(&k, 1, 2));
        assert_eq!(c4.sign(), 1);
        assert_eq!(cos_pi_over(&k, 5), Err(Error::IncompatibleConductor { m: 5, n: 12 }));
        let c6 = cos_pi_over(&k, 6).unwrap();
        assert_eq!(&c6 * &c6, q(&k, 3, 4));
        for j in 0..24 {
            let v = cos_k_pi_over_n(&k, j).to_f64();
            assert!((v - (j as f64 * std::f64::consts::PI / 12.0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_sign_path_agrees_with_filter() {
        let k = field_context(30).unwrap();
        let t = Scalar::theta(&k);
        let mut x = Scalar::one(&k);
        for i in 0..8 {
            let v = &x - &q(&k, i, 3);
            assert_eq!(v.sign_exact(), v.sign());
            assert_eq!(v.sign() as f64, v.to_f64().signum());
            x = &x * &t;
        }
    }

    #[test]
    fn enclosure_brackets_theta() {
        for n in [4u32, 5, 7, 12, 30] {
            let k = field_context(n).unwrap();
            let (lo, hi) = k.enclosure();
            let t = 2.0 * (std::f64::consts::PI / n as f64).cos();
            assert!(lo.to_f64().unwrap() <= t + 1e-15 && t - 1e-15 <= hi.to_f64().unwrap());
        }
    }

    #[test]
    fn json_roundtrip() {
        let k = field_context(8).unwrap();
        let v = &Scalar::theta(&k) - &q(&k, 7, 3);
        let back = Scalar::from_json(&k, &v.to_json()).unwrap();
        assert_eq!(v, back);
    }
}

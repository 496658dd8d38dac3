//! Acceptance gate: runs the ten acceptance criteria and prints one PASS/FAIL
//! line per criterion. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use coxpizza::complex::Arrangement;
use coxpizza::conealg::Functional;
use coxpizza::rootsys::{canonical_roots, parse_type, DEFAULT_GROUP_BOUND};
use coxpizza::sample::integer_samples;
use coxpizza::twostruct::{enumerate_two_structures, orthogonal_set_count};
use coxpizza::verify::{self, Check, Options};
use coxpizza::weighted::{signed_two_structures, type_a_identity, type_a_via_arrangement, weighted_sum};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn summarize(checks: &[Check]) -> Outcome {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let detail = match failed.first() {
        None => format!("{} checks", checks.len()),
        Some(c) => format!(
            "{}/{} checks failed; first: {} lhs={} rhs={} witness={}",
            failed.len(),
            checks.len(),
            c.name,
            c.lhs,
            c.rhs,
            c.witness.clone().unwrap_or_default()
        ),
    };
    Outcome { pass: failed.is_empty(), detail }
}

fn arrangement(t: &str) -> Arrangement {
    Arrangement::canonical(t, DEFAULT_GROUP_BOUND).unwrap_or_else(|e| panic!("{t}: {e}"))
}

fn tagged(t: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.params["system"] = t.into();
            if let Some(w) = &mut c.witness {
                w["system"] = t.into();
            }
            c
        })
        .collect()
}

fn sum_of_signs() -> Outcome {
    let mut types: Vec<String> =
        ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4", "F4", "H3"].iter().map(|s| s.to_string()).collect();
    types.extend((3..=12).map(|m| format!("I2({m})")));
    types.extend(["A2xA1", "B2xA2", "I2(5)xA1"].iter().map(|s| s.to_string()));
    let mut checks = Vec::new();
    for t in &types {
        let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let signed = signed_two_structures(&rs, &g).unwrap();
        let total: i64 = signed.iter().map(|(_, e)| i64::from(*e)).sum();
        checks.push(Check::compare("sum-of-signs", serde_json::json!({ "system": t }), total, 1));
    }
    summarize(&checks)
}

fn chamber_signs() -> Outcome {
    let mut checks = Vec::new();
    let mut counts = Vec::new();
    for t in ["A3", "B3", "H3"] {
        let c = verify::chamber_signs(&arrangement(t)).unwrap();
        counts.push(format!("{t}:{}", c.len()));
        checks.extend(tagged(t, c));
    }
    let mut o = summarize(&checks);
    o.detail = format!("{} ({})", o.detail, counts.join(" "));
    o.pass &= counts == ["A3:24", "B3:48", "H3:120"];
    o
}

fn main_theorem() -> Outcome {
    let mut checks = Vec::new();
    let mut faces = Vec::new();
    for t in ["A3", "B3", "I2(8)", "B2xA1"] {
        let a = arrangement(t);
        faces.push(format!("{t}:{}", a.poset.len()));
        checks.extend(tagged(t, verify::main_theorem(&a).unwrap()));
    }
    let mut o = summarize(&checks);
    o.detail = format!("{} (faces {})", o.detail, faces.join(" "));
    o
}

fn second_main() -> Outcome {
    let mut checks = Vec::new();
    let opts = Options {
        lambda: Some(verify::LambdaSpec::Random { k: 25, seed: verify::DEFAULT_SEED }),
        ..Options::new(DEFAULT_GROUP_BOUND)
    };
    for t in ["A3", "B3"] {
        checks.extend(tagged(t, verify::second_main(&arrangement(t), &opts).unwrap()));
    }
    let mut o = summarize(&checks);
    o.pass &= checks.len() == 2 * 8 * 25;
    o
}

fn gkm_herb() -> Outcome {
    let mut checks = Vec::new();
    let opts = Options {
        lambda: Some(verify::LambdaSpec::Random { k: 50, seed: verify::DEFAULT_SEED }),
        ..Options::new(DEFAULT_GROUP_BOUND)
    };
    for t in ["A4", "B3", "H3", "I2(8)", "I2(12)"] {
        checks.extend(tagged(t, verify::gkm_herb(&arrangement(t), &opts).unwrap()));
    }
    summarize(&checks)
}

/// Independent oracle: angles of the face points in an orthonormal frame, measured
/// from the first ray of the base chamber towards the second.
fn dihedral_figure() -> Outcome {
    let a = arrangement("I2(8)");
    let p = &a.poset;
    let rs = &a.rs;
    // Cholesky factor of the Gram matrix of the simple roots.
    let g = |i: usize, j: usize| rs.gram()[i][j].to_f64();
    let l11 = g(0, 0).sqrt();
    let l21 = g(1, 0) / l11;
    let l22 = (g(1, 1) - l21 * l21).sqrt();
    let frame = |v: &[coxpizza::scalar::Scalar]| {
        let (x0, x1) = (v[0].to_f64(), v[1].to_f64());
        (l11 * x0 + l21 * x1, l22 * x1)
    };
    let angle = |v: &[coxpizza::scalar::Scalar]| {
        let (x, y) = frame(v);
        y.atan2(x)
    };
    let b = p.base_chamber();
    let rays: Vec<usize> = p.rays_of(b).collect();
    let (t0, t1) = (angle(&p.face(rays[0]).point), angle(&p.face(rays[1]).point));
    let step = PI / 8.0;
    let diff = (t1 - t0).rem_euclid(2.0 * PI);
    let orientation = if (diff - step).abs() < 1e-9 { 1.0 } else { -1.0 };
    let normalized = |v: &[coxpizza::scalar::Scalar]| (orientation * (angle(v) - t0)).rem_euclid(2.0 * PI);
    let mut checks = Vec::new();
    let mut nonzero = 0;
    for face in 0..p.len() {
        let point = &p.face(face).point;
        let expected = match p.dim(face) {
            0 => 1,
            1 => {
                let r = (normalized(point) / step).round() as i64 % 16;
                if (5..=12).contains(&r) {
                    2
                } else {
                    0
                }
            }
            _ => {
                let r = (normalized(point) / step).floor() as i64 % 16;
                if r % 2 == 1 && (5..=11).contains(&r) {
                    4
                } else {
                    0
                }
            }
        };
        nonzero += usize::from(expected != 0);
        let got = weighted_sum(p, b, &Functional::new(point.clone()));
        checks.push(Check::compare("figure", serde_json::json!({ "face": face, "dim": p.dim(face) }), got, expected));
    }
    let mut o = summarize(&checks);
    // The origin, eight rays and four sectors carry nonzero values.
    o.pass &= checks.len() == 33 && nonzero == 13;
    o
}

fn type_a() -> Outcome {
    let mut checks = Vec::new();
    for n in 1..=6usize {
        let mut vectors = integer_samples(n, 20, verify::DEFAULT_SEED + n as u64);
        if n <= 4 {
            for code in 0..3usize.pow(n as u32) {
                vectors.push((0..n).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect());
            }
        }
        for (k, l) in vectors.iter().enumerate() {
            let r = type_a_identity(l);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            checks.push(Check::compare("type-a", serde_json::json!({ "lambda": l }), r.s, sign * r.t));
            // The same identity through weighted sums on the B_n arrangement.
            let via_arrangement = n <= 3 || (n == 4 && k < 20);
            if via_arrangement {
                let a = type_a_via_arrangement(l, DEFAULT_GROUP_BOUND).unwrap();
                checks.push(Check::holds("type-a-arrangement", serde_json::json!({ "lambda": l }), a.holds(n)));
            }
        }
    }
    summarize(&checks)
}

fn tables() -> Outcome {
    let mut checks = Vec::new();
    let mut types: Vec<String> =
        ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4", "D5", "E6", "E7", "E8", "F4", "G2", "H3", "H4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    types.extend((3..=16).map(|m| format!("I2({m})")));
    for t in &types {
        checks.extend(tagged(t, verify::tables(t, DEFAULT_GROUP_BOUND).unwrap()));
    }
    // Signed maximal orthogonal sets: 40 for H3 and 1200 for H4, each |T| · 2^rank.
    for (t, expected) in [("H3", 40u64), ("H4", 1200)] {
        let rs = canonical_roots(&parse_type(t).unwrap()).unwrap();
        let count = orthogonal_set_count(&rs, rs.rank(), None);
        checks.push(Check::compare("maximal-orthogonal-sets", serde_json::json!({ "system": t }), count, expected));
        let g = rs.enumerate_group(DEFAULT_GROUP_BOUND).unwrap();
        let all = enumerate_two_structures(&rs, &g).unwrap();
        checks.push(Check::compare(
            "two-structures-times-signs",
            serde_json::json!({ "system": t, "twoStructures": all.len() }),
            (all.len() as u64) << rs.rank(),
            expected,
        ));
    }
    summarize(&checks)
}

fn coalgebra() -> Outcome {
    let mut checks = Vec::new();
    let opts = Options {
        lambda: Some(verify::LambdaSpec::Random { k: 8, seed: verify::DEFAULT_SEED }),
        ..Options::new(DEFAULT_GROUP_BOUND)
    };
    for t in ["A2", "B2", "A1xA1"] {
        checks.extend(tagged(t, verify::coalgebra(&arrangement(t), &opts).unwrap()));
    }
    summarize(&checks)
}

fn shelling() -> Outcome {
    let mut checks = Vec::new();
    let opts = Options {
        lambda: Some(verify::LambdaSpec::Random { k: 10, seed: verify::DEFAULT_SEED }),
        ..Options::new(DEFAULT_GROUP_BOUND)
    };
    for t in ["A3", "B3", "H3"] {
        checks.extend(tagged(t, verify::shelling(&arrangement(t), &opts).unwrap()));
    }
    for t in ["A1", "A2", "B2", "G2", "I2(5)", "I2(8)", "A4", "B4", "D4", "F4", "A2xA1", "B2xA1"] {
        let a = arrangement(t);
        let ca = coxpizza::shelling::check_condition_a(&a.poset).unwrap();
        checks.push(Check::holds("condition-a", serde_json::json!({ "system": t }), ca.holds()));
    }
    summarize(&checks)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sum of signs over 2-structures", sum_of_signs),
        ("chamber sign identity", chamber_signs),
        ("pizza expansions over 2-structures", main_theorem),
        ("parabolic weighted-sum expansion", second_main),
        ("weighted sum against its 2-structure closed form", gkm_herb),
        ("rank-two closed form on I2(8)", dihedral_figure),
        ("type-A identity", type_a),
        ("orthogonal-set and 2-structure tables", tables),
        ("cone coalgebra and valuations", coalgebra),
        ("shelling, fibers and order ideals", shelling),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} criterion {:>2}: {} [{}; {:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}

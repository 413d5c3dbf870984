//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p surfcover-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfcover::arith::rat;
use surfcover::cover2::{build_rs, two_patch_with, AlphaClass, BPart};
use surfcover::groebner::{reduced_groebner, shape_basis};
use surfcover::hypotheses::check_all;
use surfcover::mpoly::{compose, list_gcd, mpoly_from_ints};
use surfcover::srf::{parse_input, InputDoc};
use surfcover::upoly::{crt_value, extended_gcd};
use surfcover::verify::{chart_ideal_basis, verify_all, verify_composition, VerifyOptions};
use surfcover::{three_patch, two_patch, BetaRule, Field, MPoly, Param, Scalar, UPoly};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn doc(name: &str) -> InputDoc {
    parse_input(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn load(name: &str) -> Param {
    doc(name).param.unwrap()
}

fn x(i: usize) -> MPoly {
    MPoly::var(i)
}

fn c(n: i64) -> MPoly {
    MPoly::constant(Scalar::from(n))
}

fn q(v: &[(i64, i64)]) -> UPoly {
    UPoly::from_rationals(v.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn whitney_shape() -> Outcome {
    let f = load("whitney.srf");
    let b1 = shape_basis(&f, 1).map_err(|e| e.to_string())?;
    let b2 = shape_basis(&f, 2).map_err(|e| e.to_string())?;
    ensure!(b1.basis == vec![&x(2) + &c(1), &x(1) - &c(1), &x(0) + &c(1)], "I1 basis {:?}", b1.basis);
    ensure!(b2.basis == vec![&x(2) - &c(1), &x(1) + &c(1), &x(0) - &c(1)], "I2 basis {:?}", b2.basis);
    // The same ideal through the plain Buchberger entry point.
    let mut gens: Vec<MPoly> = f.entries().iter().map(|e| e.specialize(1, &Scalar::one())).collect();
    gens.push(&x(1) - &c(1));
    ensure!(reduced_groebner(&gens).generators() == &b1.basis[..], "direct lex basis differs");
    Ok("I1 = {x2 + 1, x1 - 1, x0 + 1}, I2 = {x2 - 1, x1 + 1, x0 - 1}".into())
}

fn whitney_cover() -> Outcome {
    let t = three_patch(&load("whitney.srf")).map_err(|e| e.to_string())?;
    let g = [
        mpoly_from_ints(&[(1, [0, 3, 0]), (-2, [0, 2, 1]), (1, [1, 2, 0]), (1, [0, 1, 2]), (-2, [1, 1, 1]), (1, [1, 0, 2])]),
        mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 1, 1])]),
        mpoly_from_ints(&[(1, [0, 3, 0]), (-1, [0, 2, 1]), (-1, [1, 2, 0]), (1, [1, 1, 1])]),
        mpoly_from_ints(&[(1, [0, 1, 2]), (1, [1, 0, 2])]),
    ];
    let h = [
        mpoly_from_ints(&[(1, [0, 0, 3]), (-1, [1, 0, 2])]),
        mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 2, 0]), (1, [0, 1, 2]), (1, [1, 1, 1])]),
        mpoly_from_ints(&[(1, [0, 1, 2]), (-1, [1, 1, 1]), (1, [0, 0, 3]), (1, [1, 0, 2])]),
        mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 2, 0])]),
    ];
    ensure!(t.g.entries() == g, "G differs: {:?}", t.g.entries());
    let neg: Vec<MPoly> = h.iter().map(|e| -e).collect();
    ensure!(t.h.entries() == &neg[..], "H differs: {:?}", t.h.entries());
    ensure!(t.ghat == &x(0) + &x(1), "Ghat = {}", t.ghat);
    ensure!(t.hhat == &x(0) - &x(2) || t.hhat == &x(2) - &x(0), "Hhat = {}", t.hhat);
    Ok(format!("G exact, H exact up to the sign of normalization, Ghat = {}, Hhat = {}", t.ghat, t.hhat))
}

fn clebsch_shape() -> Outcome {
    let f = load("clebsch.srf");
    let b1 = shape_basis(&f, 1).map_err(|e| e.to_string())?;
    let b2 = shape_basis(&f, 2).map_err(|e| e.to_string())?;
    let p1 = q(&[(-385, 64), (239, 4), (-1077, 16), (-61, 1), (21, 4), (8, 1), (1, 1)]);
    let q1 = q(&[
        (-21649, 14592),
        (1123141, 401280),
        (13537, 5280),
        (-12941, 50160),
        (-18511, 50160),
        (-393, 8360),
    ]);
    let p2 = q(&[(-77, 15), (-3926, 75), (-2387, 75), (916, 25), (199, 5), (178, 15), (1, 1)]);
    let q2 = q(&[
        (2987, 3072),
        (612691, 33792),
        (49613, 16896),
        (-221885, 16896),
        (-212195, 33792),
        (-7075, 11264),
    ]);
    ensure!(b1.p == p1, "p1 = {}", b1.p.display("x0"));
    ensure!(b1.q == q1, "q1 = {}", b1.q.display("x0"));
    ensure!(b2.p == p2, "p2 = {}", b2.p.display("x0"));
    ensure!(b2.q == q2, "q2 = {}", b2.q.display("x0"));
    ensure!(b1.k == 6 && b2.k == 6, "k = {}, {}", b1.k, b2.k);
    Ok("p1, q1, p2, q2 exact, k = 6".into())
}

fn clebsch_three_patch() -> Outcome {
    let t = three_patch(&load("clebsch.srf")).map_err(|e| e.to_string())?;
    ensure!(t.g.degree() == 15 && t.h.degree() == 15, "degrees {}, {}", t.g.degree(), t.h.degree());
    let comp = verify_composition(&t).map_err(|e| e.to_string())?;
    Ok(format!("deg G = deg H = 15, composition exact (scales {}, {})", comp.g_scale, comp.h_scale))
}

fn clebsch_two_patch() -> Outcome {
    let c = two_patch_with(&load("clebsch.srf"), BetaRule::GlobalFactor).map_err(|e| e.to_string())?;
    ensure!(c.s == UPoly::from_ints(&[385, -744, -104, 96, 16]), "s = {}", c.s.display("x0"));
    ensure!(c.bezout() == UPoly::one(), "u r + v s = {}", c.bezout().display("x0"));
    // r = beta s on the roots of x0 p1 / s, beta from the x2-linear factor of G0.
    let num = UPoly::from_ints(&[-388135, -56238, 55180, 9432]);
    let den = UPoly::from_ints(&[4827900, -9329760, -1304160, 1203840, 200640]);
    let m = c.class.b_modulus();
    ensure!(m == q(&[(0, 1), (-1, 4), (2, 1), (1, 1)]), "B modulus {}", m.display("x0"));
    ensure!(
        (&c.r * &den).rem(&m).unwrap() == (&num * &c.s).rem(&m).unwrap(),
        "r does not interpolate beta s"
    );
    // The reference r, u, v are what the same construction gives at the
    // nodes 0, 1 +- sqrt(5)/2 instead of the roots of x0 p1 / s.
    let shifted = q(&[(0, 1), (-1, 4), (-2, 1), (1, 1)]);
    let cls = AlphaClass {
        s_a: c.s.monic().unwrap(),
        b_parts: vec![BPart { beta: crt_value(&num, &den, &shifted).unwrap(), modulus: shifted }],
        field: Field::Rationals,
    };
    let (r, s) = build_rs(&cls).map_err(|e| e.to_string())?;
    let (g, u, v) = extended_gcd(&r, &s).map_err(|e| e.to_string())?;
    let reference_r = q(&[(-7057, 228), (-898, 209), (18511, 3135)]);
    let reference_u = q(&[
        (-632041996387, 74376886521288),
        (-487041584557, 12396147753548),
        (-1732666485971, 130159551412254),
        (-26198287461, 21693258568709),
    ]);
    let reference_v = q(&[(357074564524303, 186537231395390304), (1510767910251, 3389825077278640)]);
    ensure!(g.is_one() && r == reference_r && u == reference_u && v == reference_v, "reference r, u, v not reproduced");
    Ok(format!(
        "s exact; reference r, u, v reproduced at the nodes 0, 1 +- sqrt(5)/2; at the actual roots of x0 p1 / s the output is r = {} (deviation recorded)",
        c.r.display("x0")
    ))
}

fn veronese_two_patch() -> Outcome {
    let c = two_patch(&load("veronese.srf")).map_err(|e| e.to_string())?;
    let ext = c.field.extension().ok_or("no extension adjoined")?;
    ensure!(ext.modulus() == [rat(1, 1), rat(0, 1), rat(1, 1)], "modulus {:?}", ext.modulus());
    ensure!(c.s == UPoly::one() && c.u.is_zero() && c.v == UPoly::one(), "s, u, v = {:?}", (&c.s, &c.u, &c.v));
    ensure!(c.r == UPoly::constant(Scalar::generator(ext)), "r = {:?}", c.r);
    let shown = c.to_string();
    ensure!(shown == "g'(x0, x2) = G(x0:1:(gamma*x2 + 1)/(x2))", "display {shown}");
    Ok(format!("gamma^2 + 1 adjoined, {shown}"))
}

fn negative_fixtures() -> Outcome {
    let whitney = check_all(&load("whitney_raw.srf"));
    ensure!(whitney.star.pass && !whitney.ab.a && whitney.ab.b, "raw Whitney: {whitney}");
    let clebsch = check_all(&load("clebsch_raw.srf"));
    ensure!(clebsch.star.pass && !clebsch.ab.a && !clebsch.ab.b, "raw Clebsch: {clebsch}");
    let singular = check_all(&load("singular_basepoints.srf"));
    ensure!(!singular.star.pass, "singular example: {singular}");
    for name in ["whitney_raw.srf", "clebsch_raw.srf", "singular_basepoints.srf"] {
        let path = fixture_path(name);
        let out = Command::new(env!("CARGO_BIN_EXE_surfcover"))
            .args(["check", "--input", path.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(2), "check {name} exited {:?}", out.status.code());
    }
    Ok("raw Whitney fails (a), raw Clebsch fails (a) and (b), singular fails (*), check exits 2".into())
}

fn property_suites() -> Outcome {
    let mut passing = Vec::new();
    let mut names: Vec<String> = std::fs::read_dir(fixture_path(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".srf"))
        .collect();
    names.sort();
    for name in names {
        let d = doc(&name);
        let f = d.param.clone().unwrap();
        if !check_all(&f).pass() {
            continue;
        }
        let t = three_patch(&f).map_err(|e| format!("{name}: {e}"))?;
        for (p, chart) in [(&t.g, 1), (&t.h, 2)] {
            ensure!(t.base_point_free || chart_ideal_basis(p, chart).is_unit(), "{name}: chart {chart} ideal is not (1)");
        }
        let c = two_patch(&f).map_err(|e| format!("{name}: {e}"))?;
        ensure!(c.bezout() == UPoly::one(), "{name}: Bezout identity fails");
        let lines = c.infinity_avoidance().map_err(|e| format!("{name}: {e}"))?;
        ensure!(lines.iter().all(|l| l.holds), "{name}: infinity avoidance fails");
        let opts = VerifyOptions { implicit: &d.implicit, fixtures: &d.fixtures, trials: 100, seed: 0 };
        let v = verify_all(&t, Some(&c), &opts).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.resultant.pass(), "{name}: resultant criterion fails");
        ensure!(d.implicit.is_empty() || v.coverage.checked > 0, "{name}: no sample checked");
        passing.push(format!("{name} ({} samples)", v.coverage.checked));
    }
    ensure!(passing.len() >= 3, "only {} fixtures pass the hypotheses", passing.len());
    Ok(passing.join(", "))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> MPoly {
    loop {
        let p = MPoly::from_terms((0..terms).map(|_| {
            let m = [rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg)];
            (m, Scalar::from(rng.gen_range(-4i64..=4)))
        }));
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_homogeneous(rng: &mut ChaCha8Rng, d: u32, terms: usize) -> MPoly {
    loop {
        let p = MPoly::from_terms((0..terms).map(|_| {
            let a = rng.gen_range(0..=d);
            let b = rng.gen_range(0..=d - a);
            ([a, b, d - a - b], Scalar::from(rng.gen_range(-4i64..=4)))
        }));
        if !p.is_zero() {
            return p;
        }
    }
}

fn naive_compose(f: &MPoly, sub: &[MPoly; 3]) -> MPoly {
    let mut acc = MPoly::zero();
    for (m, coef) in f.terms() {
        let mut t = MPoly::constant(coef.clone());
        for (j, s) in sub.iter().enumerate() {
            for _ in 0..m[j] {
                t = &t * s;
            }
        }
        acc = &acc + &t;
    }
    acc
}

fn kernel_oracles() -> Outcome {
    const N: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..N {
        let dg = rng.gen_range(1..=3);
        let g = random_homogeneous(&mut rng, dg, 3);
        let parts: Vec<MPoly> = (0..3)
            .map(|_| {
                let d = rng.gen_range(0..=3);
                &g * &random_homogeneous(&mut rng, d, 3)
            })
            .collect();
        let h = list_gcd(&parts).map_err(|e| e.to_string())?;
        for p in &parts {
            let quo = p.div_exact(&h).map_err(|e| format!("gcd case {i}: {e}"))?;
            ensure!(&quo * &h == *p, "gcd case {i}: division not exact");
        }
        ensure!(h.div_exact(&g).is_ok(), "gcd case {i}: common factor lost");
        let cofactors: Vec<MPoly> = parts.iter().map(|p| p.div_exact(&h).unwrap()).collect();
        ensure!(list_gcd(&cofactors).unwrap().is_constant(), "gcd case {i}: cofactors share a factor");
    }
    ensure!(list_gcd(&[&x(0) + &c(1)]).is_err(), "inhomogeneous gcd input accepted");
    for i in 0..N {
        let gens: Vec<MPoly> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let b = reduced_groebner(&gens);
        ensure!(gens.iter().all(|g| b.contains(g)), "groebner case {i}: input not reduced to 0");
        let mut shuffled = gens.clone();
        shuffled.reverse();
        shuffled.rotate_left(i % gens.len());
        ensure!(reduced_groebner(&shuffled) == b, "groebner case {i}: order of generators matters");
        ensure!(reduced_groebner(b.generators()) == b, "groebner case {i}: not idempotent");
    }
    for i in 0..N {
        let d = rng.gen_range(1..=3);
        let entries: Vec<MPoly> = (0..3).map(|_| random_homogeneous(&mut rng, d, 4)).collect();
        let Ok(f) = Param::new(entries, Field::Rationals) else { continue };
        let e = rng.gen_range(1..=2);
        let sub: [MPoly; 3] = std::array::from_fn(|_| random_homogeneous(&mut rng, e, 3));
        let got = compose(&f, &sub).map_err(|e| e.to_string())?;
        for (k, entry) in f.entries().iter().enumerate() {
            ensure!(got[k] == naive_compose(entry, &sub), "compose case {i}: entry {k} differs");
        }
    }
    Ok(format!("{N} instances each of list_gcd, reduced_groebner and compose"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Whitney Groebner shape", whitney_shape, 1),
        ("Whitney three-patch cover", whitney_cover, 1),
        ("Clebsch shape data", clebsch_shape, 30),
        ("Clebsch three-patch degree", clebsch_three_patch, 60),
        ("Clebsch two-patch", clebsch_two_patch, 30),
        ("Veronese two-patch", veronese_two_patch, 5),
        ("negative fixtures", negative_fixtures, 5),
        ("property suites", property_suites, 60),
        ("kernel oracles", kernel_oracles, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let slow = elapsed > Duration::from_secs(*budget);
        let verdict = match (&result, slow) {
            (Ok(_), false) => "PASS",
            _ => "FAIL",
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        let detail = match result {
            Ok(d) if slow => format!("{d}; over the {budget} s budget"),
            Ok(d) | Err(d) => d,
        };
        println!("criterion {}: {verdict} {name} [{:.2} s] {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}

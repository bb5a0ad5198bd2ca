//! Acceptance checks, one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mil_cli::recheck::verify;
use mil_cli::report::Status;
use mil_cli::scenarios::{run, Params, CORPUS};
use mil_core::families::*;
use mil_core::field::Fe;
use mil_core::group::{is_pseudo_reflection, is_transvection};
use mil_core::invariants::*;
use mil_core::linalg::{fixed_space, Subspace};
use mil_core::poly::{ideal_graded_piece, orbit_product, Polynomial};
use mil_core::MatrixGroup;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn span(f: &mil_core::Field, n: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
    let vecs = idx
        .into_iter()
        .map(|i| {
            let mut v = vec![Fe::ZERO; n];
            v[i] = Fe::ONE;
            v
        })
        .collect();
    Subspace::from_vectors(f, n, vecs)
}

fn invariant(g: &MatrixGroup, p: &Polynomial) -> bool {
    g.generators().iter().all(|x| p.act(x).as_ref() == Ok(p))
}

fn scenario_passes(name: &str, params: &Params) -> Check {
    let r = run(name, params, 1, false).map_err(err)?;
    let s = &r.scenarios[0];
    for c in &s.claims {
        ensure(c.status == Status::Pass, format!("{name}: claim {} is {:?}: {}", c.id, c.status, c.observed))?;
        if let Some(w) = &c.witness {
            ensure(verify(w).map_err(err)?, format!("{name}: witness of {} does not re-verify", c.id))?;
        }
    }
    Ok(())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let b = Budget::default();
    let g = gu3_stabilizers(2).map_err(err)?;
    let k = g.field.clone();
    ensure(g.h.order() == 24 && g.h_tilde.order() == 8, format!("orders {} and {}", g.h.order(), g.h_tilde.order()))?;
    let x1 = Polynomial::parse(&k, 3, "x1").map_err(err)?;
    let f = Polynomial::parse(&k, 3, "x1*x3^2 + x2^3 + x3*x1^2").map_err(err)?;
    let n3 = orbit_product(g.h.elements(), &Polynomial::parse(&k, 3, "x3").map_err(err)?).map_err(err)?;
    let h = Polynomial::parse(&k, 3, "x2^4 - x2*x1^3").map_err(err)?;
    let degs: Vec<u32> = [&x1, &f, &n3].iter().map(|p| p.degree().unwrap()).collect();
    ensure(degs == [1, 3, 8], format!("degrees {degs:?}"))?;
    ensure([&x1, &f, &n3].iter().all(|p| invariant(&g.h, p)), "x1, F, N(x3) not all H-invariant")?;
    ensure(invariant(&g.h_tilde, &h) && !invariant(&g.h, &h), "h is not a proper H~-invariant")?;

    let dh = hilbert_function(&g.h, 12).map_err(err)?.dims;
    let dt = hilbert_function(&g.h_tilde, 12).map_err(err)?.dims;
    for d in 0..=12usize {
        let sum: usize = (0..=2).filter(|i| 4 * i <= d).map(|i| dh[d - 4 * i]).sum();
        ensure(sum == dt[d], format!("decomposition fails in degree {d}: {sum} vs {}", dt[d]))?;
    }
    let all = vec![x1.clone(), f.clone(), n3.clone(), h.clone()];
    let r = algebra_generation_check(&g.h_tilde, &all, 12).map_err(err)?;
    ensure(r.pass, format!("generation fails in degree {:?}", r.first_failure))?;
    let r = algebra_generation_check(&g.h_tilde, &all[..3], 12).map_err(err)?;
    ensure(r.first_failure == Some(4), format!("without h the first failure is {:?}", r.first_failure))?;
    let mid = [x1.clone(), Polynomial::parse(&k, 3, "x2^3").map_err(err)?, Polynomial::parse(&k, 3, "x3^8").map_err(err)?];
    for d in 0..=16 {
        ensure(
            ideal_graded_piece(&k, 3, &all, d).map_err(err)? == ideal_graded_piece(&k, 3, &mid, d).map_err(err)?,
            format!("ideal identity fails in degree {d}"),
        )?;
    }
    ensure(!dsp_decide(&g.h_tilde).map_err(err)?.holds(), "dsp holds for H~")?;
    let v = dsp_decide(&g.h).map_err(err)?;
    ensure(v.holds(), "dsp fails for H")?;
    let c = coregularity_decide(&g.h, &b).map_err(err)?;
    ensure(c.degrees() == Some(&[1, 3, 8][..]), format!("coregularity of H: {:?}", c.decision))?;
    scenario_passes("example-gu3", &Params::default())?;
    ensure(start.elapsed() < Duration::from_secs(60), format!("took {:?}", start.elapsed()))
}

fn not_coregular_by_arithmetic(g: &MatrixGroup) -> Check {
    let c = coregularity_decide(g, &Budget::default()).map_err(err)?;
    ensure(c.is_not_coregular(), format!("coregularity verdict {:?}", c.decision))?;
    let shapes: Vec<_> = c.rejections.iter().filter(|r| r.degrees.iter().filter(|&&d| d == 1).count() == 2).collect();
    ensure(!shapes.is_empty(), "no (1,1,p^r,p^s) shapes examined")?;
    for r in shapes {
        let p = g.field().characteristic();
        let prime_powers = r.degrees.iter().filter(|&&d| d > 1).all(|&d| {
            let mut x = d;
            while x % p == 0 {
                x /= p;
            }
            x == 1
        });
        ensure(prime_powers && r.filter == "degree-sum", format!("shape {:?} rejected by {}", r.degrees, r.filter))?;
    }
    Ok(())
}

fn dsp_fails_and_agrees(g: &MatrixGroup) -> Check {
    let v = dsp_decide(g).map_err(err)?;
    ensure(!v.holds(), "dsp holds")?;
    let c = coregularity_decide(g, &Budget::default()).map_err(err)?;
    let a = dsp_abelian_criterion(g, &c).map_err(err)?.ok_or("abelian criterion gives no conclusion")?;
    ensure(a.decision == v.decision, "abelian criterion disagrees with the linear system")
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for q in [2u64, 3] {
        let g = unitary_transvection_family(q as u32, 2).map_err(err)?.group;
        ensure(g.order() as u64 == q.pow(4), format!("q = {q}: order {}", g.order()))?;
        let d = different(&g).map_err(err)?;
        let want = (q.pow(4) - 1) / (q * q - 1) * (q - 1);
        ensure(d.delta as u64 == want, format!("q = {q}: delta {} instead of {want}", d.delta))?;
        if q == 2 {
            ensure(d.delta == 5, "delta is not 5 for q = 2")?;
        }
        not_coregular_by_arithmetic(&g).map_err(|e| format!("q = {q}: {e}"))?;
        dsp_fails_and_agrees(&g).map_err(|e| format!("q = {q}: {e}"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(60), format!("took {:?}", start.elapsed()))
}

fn criterion_3() -> Check {
    for q in [2u32, 3] {
        let g = symplectic_stabilizer(q, 2).map_err(err)?;
        let d = different(&g).map_err(err)?;
        ensure(d.delta == q * q - 1, format!("q = {q}: delta {}", d.delta))?;
        let c = coregularity_decide(&g, &Budget::default()).map_err(err)?;
        ensure(c.is_not_coregular(), format!("q = {q}: {:?}", c.decision))?;
        ensure(!dsp_decide(&g).map_err(err)?.holds(), format!("q = {q}: dsp holds"))?;
    }
    Ok(())
}

fn no_reflections_and_pgroup_fails(g: &MatrixGroup, what: &str) -> Check {
    ensure(g.pseudo_reflections().is_empty(), format!("{what} contains pseudo-reflections"))?;
    let v = dsp_pgroup_criterion(g).map_err(err)?.ok_or(format!("{what}: p-group criterion gives no conclusion"))?;
    ensure(!v.holds(), format!("{what}: p-group criterion holds"))
}

fn criterion_4() -> Check {
    let m = 2usize;
    for q in [2u64, 3] {
        let s = symplectic_stabilizer(q as u32, m).map_err(err)?;
        ensure(s.order() as u64 == q.pow(3), format!("symplectic q = {q}: order {}", s.order()))?;
        let u = unitary_transvection_family(q as u32, m).map_err(err)?.group;
        ensure(u.order() as u64 == q.pow(4), format!("unitary q = {q}: order {}", u.order()))?;
        for g in [&s, &u] {
            let c = g.census();
            ensure(c.pseudo_reflections == c.transvections && g.transvection_subgroup().order() == g.order(), "census of a transvection family")?;
        }
    }
    let a = orthogonal_plus_stabilizer_odd(3, m).map_err(err)?;
    ensure(a.order() == 3, format!("orthogonal odd order {}", a.order()))?;
    no_reflections_and_pgroup_fails(&a, "III-a stabilizer")?;
    let b = orthogonal_plus_stabilizer_even(2, m).map_err(err)?;
    ensure(b.order() == 2, format!("orthogonal even order {}", b.order()))?;
    no_reflections_and_pgroup_fails(&b, "III-b stabilizer")?;
    let go3 = go3_stabilizers(3).map_err(err)?;
    ensure(go3.h_minus.order() == 3 && go3.h.order() == 6, format!("go3 orders {} and {}", go3.h.order(), go3.h_minus.order()))?;
    no_reflections_and_pgroup_fails(&go3.h_minus, "go3 H-")?;
    for name in ["family-I", "family-II", "family-III-a", "family-III-b"] {
        scenario_passes(name, &Params::default())?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    let fam = symmetric_family(3, 6).map_err(err)?;
    let u = fam.u.clone().ok_or("no subspace U for p = 3")?;
    let s = fam.group.point_stabilizer(&u);
    ensure(s.order() == 3 && s.contains(&fam.sigma), format!("stabilizer of U has order {}", s.order()))?;
    let fs = fixed_space(&fam.sigma).map_err(err)?;
    ensure(fs == u && fs.codim() == 2, format!("V^sigma has codimension {}", fs.codim()))?;
    ensure(!is_pseudo_reflection(&fam.sigma), "sigma is a pseudo-reflection")?;
    let v = dsp_pgroup_criterion(&s).map_err(err)?.ok_or("p-group criterion gives no conclusion")?;
    ensure(!v.holds() && !dsp_decide(&s).map_err(err)?.holds(), "dsp holds for <sigma>")?;

    let fam = symmetric_family(2, 6).map_err(err)?;
    let h = &fam.h;
    let n = fam.dim();
    let elementary = h.is_abelian() && h.elements().iter().all(|x| x.mul(x).unwrap().is_identity());
    ensure(elementary && h.order() == 8, format!("H of order {}", h.order()))?;
    let t = h.elements().iter().filter(|x| is_transvection(x)).count();
    ensure(t == 3, format!("{t} transvections"))?;
    ensure(h.fixed_space() == span(&fam.field, n, (0..n).step_by(2)), "V^H is not span(f1, f3)")?;
    let c = coregularity_decide(h, &Budget::default()).map_err(err)?;
    ensure(c.is_not_coregular(), format!("{:?}", c.decision))?;
    let refuted = c.rejections.iter().filter(|r| r.filter != "linear-count").collect::<Vec<_>>();
    ensure(!refuted.is_empty(), "no shape reached the reflection count")?;
    for r in refuted {
        ensure(r.filter == "degree-sum" && r.detail.contains("= 4") && r.detail.contains("found delta = 3"), format!("{:?}: {}", r.degrees, r.detail))?;
    }
    let a = dsp_abelian_criterion(h, &c).map_err(err)?.ok_or("abelian criterion gives no conclusion")?;
    let d = dsp_decide(h).map_err(err)?;
    ensure(!a.holds() && !d.holds() && a.decision == d.decision, "criteria disagree or dsp holds")?;
    scenario_passes("family-IV", &Params::default())
}

fn corpus() -> Result<Vec<(String, MatrixGroup)>, String> {
    CORPUS.iter().map(|s| resolve(s).map(|g| (s.to_string(), g)).map_err(err)).collect()
}

fn criterion_6() -> Check {
    let s3 = s3_permutation(7).map_err(err)?;
    let b = Budget::default();
    let c = coregularity_decide(&s3, &b).map_err(err)?;
    ensure(c.degrees() == Some(&[1, 2, 3][..]), format!("{:?}", c.decision))?;
    let d = different(&s3).map_err(err)?;
    ensure(d.delta == 3 && s3.pseudo_reflections().len() == 3, format!("delta {}", d.delta))?;
    let v = dsp_decide(&s3).map_err(err)?;
    let w = v.witness.clone().ok_or("no witness")?;
    let chi = Character::of_semi_invariant(&s3, &d.theta).map_err(err)?;
    ensure(twisted_transfer(&s3, &chi, &w) == d.theta, "twisted transfer of the witness is not theta")?;
    let mut confirmed = 0;
    for (name, g) in corpus()? {
        let c = coregularity_decide(&g, &b).map_err(err)?;
        let Some(degs) = c.degrees() else { continue };
        confirmed += 1;
        ensure(serre_check(&g, &c), format!("{name}: serre check fails"))?;
        let prod: u64 = degs.iter().map(|&d| d as u64).product();
        let sum: u32 = degs.iter().sum();
        let delta = different(&g).map_err(err)?.delta;
        ensure(prod == g.order() as u64, format!("{name}: product of degrees {prod} vs order {}", g.order()))?;
        ensure(sum == delta + g.degree() as u32, format!("{name}: sum of degrees {sum} vs delta + n = {}", delta + g.degree() as u32))?;
    }
    ensure(confirmed >= 10, format!("only {confirmed} coregular corpus members"))?;
    scenario_passes("cst-serre-sanity", &Params::default())
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let corpus = corpus()?;
    let r = inheritance_suite(&corpus, &Budget::default(), 4).map_err(err)?;
    ensure(r.skipped.is_empty(), format!("undecided: {:?}", r.skipped))?;
    ensure(r.violations == 0, format!("{} violations", r.violations))?;
    ensure(r.checks.len() > corpus.len(), format!("only {} stabilizers checked", r.checks.len()))?;
    ensure(start.elapsed() < Duration::from_secs(600), format!("took {:?}", start.elapsed()))
}

fn criterion_8() -> Check {
    let mut tame = 0;
    let mut single = 0;
    for (name, g) in corpus()? {
        let d = different(&g).map_err(err)?;
        let lone = d.arrangement.hyperplanes.len() == 1 && g.transvections().len() + 1 == g.order();
        for (h, &e) in d.arrangement.hyperplanes.iter().zip(&d.exponents) {
            if h.q == 1 {
                tame += 1;
                ensure(e as usize == h.e - 1, format!("{name}: exponent {e} with e = {}", h.e))?;
            } else if lone {
                single += 1;
                ensure(e as usize == h.q - 1, format!("{name}: exponent {e} with q = {}", h.q))?;
            }
        }
    }
    ensure(tame > 0 && single > 0, format!("{tame} tame and {single} transvection hyperplanes compared"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Check); 8] =
        [(1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5), (6, criterion_6), (7, criterion_7), (8, criterion_8)];
    let mut failed = false;
    for (i, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(()) => println!("PASS criterion {i} ({:.1} s)", start.elapsed().as_secs_f64()),
            Err(e) => {
                failed = true;
                println!("FAIL criterion {i}: {e}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

use mil_core::families::*;
use mil_core::field::{Fe, Field};
use mil_core::invariants::*;
use mil_core::linalg::Subspace;
use mil_core::poly::{ideal_graded_piece, orbit_product, Polynomial};
use mil_core::MatrixGroup;

fn unit(n: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; n];
    v[i] = Fe::ONE;
    v
}

fn span(f: &Field, n: usize, idx: &[usize]) -> Subspace {
    Subspace::from_vectors(f, n, idx.iter().map(|&i| unit(n, i)).collect())
}

struct Gu3Polys {
    gu3: Gu3,
    x1: Polynomial,
    f: Polynomial,
    n3: Polynomial,
    h: Polynomial,
}

fn gu3_polys() -> Gu3Polys {
    let gu3 = gu3_stabilizers(2).unwrap();
    let k = gu3.field.clone();
    let x1 = Polynomial::var(&k, 3, 0);
    let f = Polynomial::parse(&k, 3, "x1*x3^2 + x2^3 + x3*x1^2").unwrap();
    let n3 = orbit_product(gu3.h.elements(), &Polynomial::var(&k, 3, 2)).unwrap();
    let h = Polynomial::parse(&k, 3, "x2^4 - x2*x1^3").unwrap();
    Gu3Polys { gu3, x1, f, n3, h }
}

fn corpus() -> Vec<(String, MatrixGroup)> {
    let mut c = sanity_groups();
    let g = gu3_stabilizers(2).unwrap();
    c.push(("gu3 H".into(), g.h));
    c.push(("gu3 Htilde".into(), g.h_tilde));
    c.push(("unitary q=2".into(), unitary_transvection_family(2, 2).unwrap().group));
    c.push(("symplectic q=2".into(), symplectic_stabilizer(2, 2).unwrap()));
    c.push(("go3 H".into(), go3_stabilizers(3).unwrap().h));
    c.push(("symmetric H p=2".into(), symmetric_family(2, 6).unwrap().h));
    c
}

#[test]
fn trivial_group_hilbert_function() {
    let g = trivial_group(3, 2).unwrap();
    assert_eq!(hilbert_function(&g, 5).unwrap().dims, vec![1, 2, 3, 4, 5, 6]);
    let g = trivial_group(2, 3).unwrap();
    assert_eq!(hilbert_function(&g, 3).unwrap().dims, vec![1, 3, 6, 10]);
}

#[test]
fn gu3_invariants() {
    let p = gu3_polys();
    let h = &p.gu3.h;
    assert_eq!(invariant_space(h, 1).unwrap(), vec![p.x1.clone()]);
    let deg3 = invariant_space(h, 3).unwrap();
    let inv3 = Subspace::from_vectors(&p.gu3.field, 10, deg3.iter().map(|x| x.to_dense(3)).collect());
    assert!(inv3.contains(&p.f.to_dense(3)));
    assert_eq!(p.n3.degree(), Some(8));
    for x in h.generators() {
        assert_eq!(p.n3.act(x).unwrap(), p.n3);
        assert_eq!(p.f.act(x).unwrap(), p.f);
    }
}

#[test]
fn gu3_semi_invariants_and_decomposition() {
    let p = gu3_polys();
    let (h, ht) = (&p.gu3.h, &p.gu3.h_tilde);
    for x in ht.generators() {
        assert_eq!(p.h.act(x).unwrap(), p.h);
    }
    let k = &p.gu3.field;
    assert_eq!(p.h.act(&p.gu3.tau).unwrap(), p.h.scale(p.gu3.eta));
    let chi = Character::of_semi_invariant(h, &p.h).unwrap();
    assert_eq!(chi.value(h.index_of(&p.gu3.tau).unwrap()), p.gu3.eta);
    let semi = semi_invariant_space(h, &chi, 4).unwrap();
    let s = Subspace::from_vectors(k, 15, semi.iter().map(|x| x.to_dense(4)).collect());
    assert!(s.contains(&p.h.to_dense(4)));
    let dh = hilbert_function(h, 12).unwrap().dims;
    let dt = hilbert_function(ht, 12).unwrap().dims;
    for d in 0..=12usize {
        let predicted: usize = (0..=2).filter(|i| 4 * i <= d).map(|i| dh[d - 4 * i]).sum();
        assert_eq!(dt[d], predicted, "degree {d}");
    }
    let trivial = Character::trivial(h);
    assert_eq!(semi_invariant_space(h, &trivial, 3).unwrap(), invariant_space(h, 3).unwrap());
}

#[test]
fn transfer_examples() {
    let g = transvection_root_group(3).unwrap();
    let k = g.field().clone();
    let y2 = Polynomial::parse(&k, 2, "x2^2").unwrap();
    assert_eq!(transfer(&g, &y2), Polynomial::parse(&k, 2, "2*x1^2").unwrap());
    assert!(transfer(&g, &Polynomial::one(&k, 2)).is_zero());

    let s3 = s3_permutation(7).unwrap();
    let k7 = s3.field().clone();
    let e2 = Polynomial::parse(&k7, 3, "x1*x2 + x1*x3 + x2*x3").unwrap();
    assert_eq!(transfer(&s3, &e2), e2.scale(Fe(6)));
    let six_inv = k7.inv(Fe(6)).unwrap();
    assert_eq!(transfer(&s3, &e2.scale(six_inv)), e2);
}

#[test]
fn twisted_transfer_matches_definition() {
    let p = gu3_polys();
    let h = &p.gu3.h;
    let k = &p.gu3.field;
    let chi = Character::of_semi_invariant(h, &p.h).unwrap();
    let f = Polynomial::parse(k, 3, "x2^3*x3 + g*x1*x2^2*x3").unwrap();
    let mut naive = Polynomial::zero(k, 3);
    for (i, x) in h.elements().iter().enumerate() {
        naive = naive.add(&f.act(x).unwrap().scale(k.inv(chi.value(i)).unwrap()));
    }
    assert_eq!(twisted_transfer(h, &chi, &f), naive);
}

#[test]
fn coset_composition() {
    let p = gu3_polys();
    let s3 = s3_permutation(7).unwrap();
    let s3_stab = s3.point_stabilizer(&span(s3.field(), 3, &[2]));
    let g2 = unitary_transvection_family(2, 2).unwrap().group;
    let g2_stab = g2.point_stabilizer(&span(g2.field(), 4, &[1, 2, 3]));
    let fam = symmetric_family(2, 6).unwrap();
    let pairs = [(&p.gu3.h, &p.gu3.h_tilde), (&s3, &s3_stab), (&g2, &g2_stab), (&fam.group, &fam.h)];
    for (g, h) in pairs {
        assert!(h.order() < g.order());
        let k = g.field();
        let n = g.degree();
        let f = Polynomial::var(k, n, n - 1).pow(3).add(&Polynomial::var(k, n, 0).mul(&Polynomial::var(k, n, 1)));
        let rel = relative_transfer(g, h, &f).unwrap();
        assert_eq!(transfer(g, &f), transfer(h, &rel));
    }
}

#[test]
fn generator_kernels_equal_full_intersection() {
    for (name, g) in corpus() {
        if g.order() > 200 {
            continue;
        }
        for d in 0..=4 {
            for p in invariant_space(&g, d).unwrap() {
                for x in g.elements() {
                    assert_eq!(p.act(x).unwrap(), p, "{name} degree {d}");
                }
            }
        }
    }
}

#[test]
fn coinvariant_bounds() {
    assert_eq!(coinvariant_bound(&trivial_group(2, 2).unwrap()).unwrap(), 1);
    assert_eq!(coinvariant_bound(&s3_permutation(7).unwrap()).unwrap(), 4);
    for p in [2, 3, 5, 7] {
        assert_eq!(coinvariant_bound(&transvection_root_group(p).unwrap()).unwrap(), p);
    }
}

#[test]
fn differential_degrees() {
    for (q, m) in [(7, 3), (7, 6), (5, 4), (4, 3)] {
        let d = different(&diagonal_reflection_group(q, m).unwrap()).unwrap();
        assert_eq!(d.delta, m - 1);
        assert_eq!(d.theta, Polynomial::var(d.theta.field(), 2, 0).pow(m - 1));
    }
    for q in [2, 3, 4, 9] {
        assert_eq!(different(&transvection_root_group(q).unwrap()).unwrap().delta, q - 1);
    }
    for q in [2u32, 3] {
        let g = unitary_transvection_family(q, 2).unwrap().group;
        assert_eq!(g.order(), q.pow(4) as usize);
        assert_eq!(different(&g).unwrap().delta, (q.pow(4) - 1) / (q * q - 1) * (q - 1));
        assert_eq!(different(&symplectic_stabilizer(q, 2).unwrap()).unwrap().delta, q * q - 1);
    }
    assert_eq!(different(&trivial_group(3, 2).unwrap()).unwrap().delta, 0);
}

#[test]
fn different_structure() {
    for (name, g) in corpus() {
        let d = different(&g).unwrap();
        let arr = &d.arrangement;
        let covered: usize = arr.hyperplanes.iter().map(|h| h.inertia_order - 1).sum();
        assert_eq!(covered, g.pseudo_reflections().len(), "{name}");
        for orbit in &arr.orbits {
            assert!(orbit.iter().all(|&i| d.exponents[i] == d.exponents[orbit[0]]), "{name}");
        }
        for (h, &e) in arr.hyperplanes.iter().zip(&d.exponents) {
            assert!(e as usize >= (h.e - 1).max(h.q - 1), "{name}");
        }
        let mut prod = Polynomial::one(g.field(), g.degree());
        for (h, &e) in arr.hyperplanes.iter().zip(&d.exponents) {
            prod = prod.mul(&h.form.pow(e));
        }
        assert_eq!(prod, d.theta, "{name}");
        assert_eq!(d.theta.degree(), Some(d.delta));
        for (i, x) in g.elements().iter().enumerate() {
            assert_eq!(d.theta.act(x).unwrap(), d.theta.scale(d.character.value(i)), "{name}");
        }
        if g.is_nonmodular() {
            assert_eq!(d.delta as usize, g.pseudo_reflections().len(), "{name}");
        }
    }
}

#[test]
fn brute_force_exponents_match_tame_and_wild_formulas() {
    for (name, g) in corpus() {
        let d = different(&g).unwrap();
        for (h, &e) in d.arrangement.hyperplanes.iter().zip(&d.exponents) {
            if h.q == 1 {
                assert_eq!(e as usize, h.e - 1, "{name}");
            }
            if h.e == 1 && d.arrangement.hyperplanes.len() == 1 {
                assert_eq!(e as usize, h.q - 1, "{name}");
            }
        }
    }
}

#[test]
fn factorization_of_the_different() {
    let s3 = s3_permutation(7).unwrap();
    let k = s3.field().clone();
    let f0 = different_factorization(&s3, &s3, &Subspace::zero(&k, 3)).unwrap();
    assert_eq!(f0.theta_h, different(&s3).unwrap().theta);
    assert_eq!(f0.theta_quotient, Polynomial::one(&k, 3));
    let trivial = MatrixGroup::trivial(&k, 3);
    let full = Subspace::full(&k, 3);
    let f1 = different_factorization(&s3, &trivial, &full).unwrap();
    assert_eq!(f1.theta_h, Polynomial::one(&k, 3));
    assert!(f1.consistent);

    let p = gu3_polys();
    let h = &p.gu3.h;
    let kf = &p.gu3.field;
    let arr = arrangement(h);
    for idx in [vec![0], vec![1], vec![0, 1], vec![1, 2]] {
        let u = span(kf, 3, &idx);
        let stab = h.point_stabilizer(&u);
        let fac = different_factorization(h, &stab, &u).unwrap();
        assert!(fac.consistent && fac.quotient_outside);
        for hp in &arr.hyperplanes {
            let a = fac.theta_h.valuation(&hp.form).unwrap();
            let b = fac.theta_quotient.valuation(&hp.form).unwrap();
            assert!(a == 0 || b == 0);
        }
    }
    assert!(different_factorization(h, h, &span(kf, 3, &[0])).is_err());
}

#[test]
fn dsp_verdicts() {
    let triv = dsp_decide(&trivial_group(2, 2).unwrap()).unwrap();
    assert!(triv.holds());
    assert_eq!(triv.witness.unwrap().to_string(), "1");

    let s3 = s3_permutation(7).unwrap();
    let v = dsp_decide(&s3).unwrap();
    assert!(v.holds());
    let d = different(&s3).unwrap();
    let w = v.witness.unwrap();
    assert_eq!(twisted_transfer(&s3, &d.character, &w), d.theta);

    let p = gu3_polys();
    let vt = dsp_decide(&p.gu3.h_tilde).unwrap();
    assert_eq!(vt.decision, DspDecision::Fails);
    assert_eq!(vt.obstruction, Some(Obstruction::LinearSystemInfeasible));
    assert!(dsp_decide(&p.gu3.h).unwrap().holds());

    assert!(!dsp_decide(&unitary_transvection_family(2, 2).unwrap().group).unwrap().holds());
    assert!(!dsp_decide(&symplectic_stabilizer(2, 2).unwrap()).unwrap().holds());
    assert!(dsp_decide(&go3_stabilizers(3).unwrap().h).unwrap().holds());
    assert!(!dsp_decide(&go3_stabilizers(3).unwrap().h_minus).unwrap().holds());
}

#[test]
fn pgroup_criterion() {
    for g in [
        orthogonal_plus_stabilizer_odd(3, 2).unwrap(),
        orthogonal_plus_stabilizer_even(2, 2).unwrap(),
        go3_stabilizers(3).unwrap().h_minus,
    ] {
        let v = dsp_pgroup_criterion(&g).unwrap().unwrap();
        assert_eq!(v.obstruction, Some(Obstruction::PGroupNotTransvectionGenerated));
        assert!(!dsp_decide(&g).unwrap().holds());
    }
    assert!(dsp_pgroup_criterion(&transvection_root_group(3).unwrap()).unwrap().is_none());
    assert!(dsp_pgroup_criterion(&s3_permutation(7).unwrap()).is_err());
    let fam = symmetric_family(3, 6).unwrap();
    let sigma = fam.group.point_stabilizer(fam.u.as_ref().unwrap());
    assert!(dsp_pgroup_criterion(&sigma).unwrap().is_some());
}

#[test]
fn abelian_criterion_agrees() {
    let b = Budget::default();
    let groups = [
        unitary_transvection_family(2, 2).unwrap().group,
        symplectic_stabilizer(3, 2).unwrap(),
        symmetric_family(2, 6).unwrap().h,
        diagonal_reflection_group(7, 3).unwrap(),
        transvection_root_group(4).unwrap(),
    ];
    for g in &groups {
        let c = coregularity_decide(g, &b).unwrap();
        let a = dsp_abelian_criterion(g, &c).unwrap().unwrap();
        assert_eq!(a.decision, dsp_decide(g).unwrap().decision);
    }
    let c = coregularity_decide(&groups[0], &b).unwrap();
    assert_eq!(dsp_abelian_criterion(&groups[0], &c).unwrap().unwrap().obstruction, Some(Obstruction::AbelianNotCoregular));
    let s3 = s3_permutation(7).unwrap();
    let c = coregularity_decide(&s3, &b).unwrap();
    assert!(dsp_abelian_criterion(&s3, &c).is_err());
}

#[test]
fn ideal_contraction() {
    let g = trivial_group(3, 2).unwrap();
    let k = g.field().clone();
    let j = vec![Polynomial::parse(&k, 2, "x1^2 + x2^2").unwrap()];
    assert!(ideal_contraction_check(&g, &j, 6).unwrap().pass);

    let p = gu3_polys();
    let r = ideal_contraction_check(&p.gu3.h_tilde, &[p.x1.clone(), p.f.clone(), p.n3.clone()], 8).unwrap();
    assert!(!r.pass);
    assert_eq!(r.first_failure, Some(4));
    let w = r.witness.unwrap();
    let span4 = ideal_graded_piece(&p.gu3.field, 3, &[p.x1.clone(), p.f.clone(), p.n3.clone()], 4).unwrap();
    assert!(span4.contains(&w.to_dense(4)));

    let s3 = s3_permutation(7).unwrap();
    let e1 = Polynomial::parse(s3.field(), 3, "x1 + x2 + x3").unwrap();
    assert!(ideal_contraction_check(&s3, &[e1], 8).unwrap().pass);

    let bad = Polynomial::var(s3.field(), 3, 0);
    assert!(ideal_contraction_check(&s3, &[bad], 2).is_err());
}

#[test]
fn gu3_ideal_identity() {
    let p = gu3_polys();
    let k = &p.gu3.field;
    let lhs = [p.x1.clone(), p.f.clone(), p.n3.clone(), p.h.clone()];
    let mid = [p.x1.clone(), Polynomial::parse(k, 3, "x2^3").unwrap(), Polynomial::parse(k, 3, "x3^8").unwrap()];
    let rhs = [p.x1.clone(), p.f.clone(), p.n3.clone()];
    for d in 0..=16 {
        let a = ideal_graded_piece(k, 3, &lhs, d).unwrap();
        assert_eq!(a, ideal_graded_piece(k, 3, &mid, d).unwrap(), "degree {d}");
        assert_eq!(a, ideal_graded_piece(k, 3, &rhs, d).unwrap(), "degree {d}");
    }
}

#[test]
fn algebra_generation() {
    let p = gu3_polys();
    let all = [p.x1.clone(), p.f.clone(), p.n3.clone(), p.h.clone()];
    assert!(algebra_generation_check(&p.gu3.h_tilde, &all, 12).unwrap().pass);
    let r = algebra_generation_check(&p.gu3.h_tilde, &all[..3], 4).unwrap();
    assert!(!r.pass);
    assert_eq!(r.first_failure, Some(4));
    assert!(algebra_generation_check(&p.gu3.h, &all[..3], 12).unwrap().pass);

    let t = trivial_group(2, 3).unwrap();
    let xs: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(t.field(), 3, i)).collect();
    assert!(algebra_generation_check(&t, &xs, 5).unwrap().pass);
    assert!(algebra_generation_check(&p.gu3.h, &[p.h.clone()], 4).is_err());
}

#[test]
fn coregularity_verdicts() {
    let b = Budget::default();
    let s3 = coregularity_decide(&s3_permutation(7).unwrap(), &b).unwrap();
    assert_eq!(s3.degrees(), Some(&[1, 2, 3][..]));

    let p = gu3_polys();
    let h = coregularity_decide(&p.gu3.h, &b).unwrap();
    assert_eq!(h.degrees(), Some(&[1, 3, 8][..]));
    assert!(!coregularity_decide(&p.gu3.h_tilde, &b).unwrap().is_coregular());

    let g2 = coregularity_decide(&unitary_transvection_family(2, 2).unwrap().group, &b).unwrap();
    match &g2.decision {
        Coregularity::NotCoregular { obstruction, .. } => assert_eq!(obstruction, "degree-arithmetic"),
        other => panic!("{other:?}"),
    }
    for r in &g2.rejections {
        let ones = r.degrees.iter().filter(|&&d| d == 1).count();
        if ones == 2 {
            assert_eq!(r.filter, "degree-sum");
        }
    }

    let iv = coregularity_decide(&symmetric_family(2, 6).unwrap().h, &b).unwrap();
    assert!(iv.is_not_coregular());
    let r = iv.rejections.iter().find(|r| r.degrees == vec![1, 1, 2, 4]).unwrap();
    assert_eq!(r.filter, "degree-sum");
    assert!(r.detail.contains("n = 4") && r.detail.contains("found delta = 3 from 3"));

    assert!(coregularity_decide(&symplectic_stabilizer(3, 2).unwrap(), &b).unwrap().is_not_coregular());
    assert!(coregularity_decide(&orthogonal_plus_stabilizer_odd(3, 2).unwrap(), &b).unwrap().is_not_coregular());
}

#[test]
fn coregular_members_satisfy_degree_identities() {
    let b = Budget::default();
    for (name, g) in corpus() {
        let c = coregularity_decide(&g, &b).unwrap();
        assert!(serre_check(&g, &c), "{name}");
        let Some(degs) = c.degrees() else { continue };
        let d = different(&g).unwrap();
        assert_eq!(degs.iter().map(|&x| x as usize).product::<usize>(), g.order(), "{name}");
        assert_eq!(degs.iter().sum::<u32>(), d.delta + g.degree() as u32, "{name}");
        let top = degs.iter().sum::<u32>();
        let series = hilbert_series_coefficients(degs, top);
        let dims = hilbert_function(&g, top).unwrap().dims;
        assert!(series.iter().zip(&dims).all(|(&a, &b)| a == b as u64), "{name}");
        assert!(dsp_decide(&g).unwrap().holds(), "{name}");
        let Coregularity::Coregular { witness, field_order, .. } = &c.decision else { unreachable!() };
        if *field_order == g.field().order() {
            for w in witness {
                assert!(g.generators().iter().all(|x| &w.act(x).unwrap() == w));
            }
            assert!(is_hsop(g.field(), g.degree(), witness).unwrap());
        }
    }
}

#[test]
fn hilbert_series() {
    assert_eq!(hilbert_series_coefficients(&[1, 2], 5), vec![1, 1, 2, 2, 3, 3]);
    assert_eq!(hilbert_series_coefficients(&[], 2), vec![1, 0, 0]);
}

#[test]
fn serre_condition_on_non_reflection_groups() {
    let b = Budget::default();
    let g = orthogonal_plus_stabilizer_odd(3, 2).unwrap();
    assert!(!g.is_reflection_group());
    let c = coregularity_decide(&g, &b).unwrap();
    assert!(!c.is_coregular() && serre_check(&g, &c));
}

#[test]
fn inheritance() {
    let corpus: Vec<(String, MatrixGroup)> = corpus().into_iter().filter(|(_, g)| g.order() <= 24).collect();
    let r = inheritance_suite(&corpus, &Budget::default(), 2).unwrap();
    assert_eq!(r.violations, 0, "{:?}", r.checks.iter().filter(|c| c.violation.is_some()).collect::<Vec<_>>());
    assert!(r.checks.len() >= corpus.len());
    let s3 = r.groups.iter().find(|g| g.group == "s3:q=7").unwrap();
    assert_eq!((s3.dsp, s3.coregular), (Some(true), Some(true)));
    let line = r.checks.iter().find(|c| c.group == "s3:q=7" && c.stabilizer_order == 2).unwrap();
    assert_eq!((line.dsp, line.coregular), (Some(true), Some(true)));
}

#[test]
fn budget_errors_are_reported() {
    let g = s3_permutation(7).unwrap();
    let ctx = Context::new(&g, Budget { max_degree: 2, ..Budget::default() });
    assert!(ctx.invariants(3).is_err());
    assert!(coinvariant_bound_ctx(&ctx).is_err());
}

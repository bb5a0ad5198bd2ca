use proptest::prelude::*;

use mil_core::families::{gu3_stabilizers, s3_permutation, transvection_root_group};
use mil_core::field::{Fe, Field};
use mil_core::invariants::{transfer, Context, Budget};
use mil_core::linalg::{Matrix, Subspace};
use mil_core::poly::{quotient_dim, Monomial, Polynomial};
use mil_core::MatrixGroup;

const ORDERS: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

fn field_and_elems(k: usize) -> impl Strategy<Value = (Field, Vec<Fe>)> {
    prop::sample::select(ORDERS).prop_flat_map(move |q| {
        let f = Field::of_order(q).unwrap();
        (Just(f), prop::collection::vec((0..q).prop_map(|x| Fe(x as u16)), k))
    })
}

fn quadratic_and_elems(k: usize) -> impl Strategy<Value = (Field, Vec<Fe>)> {
    prop::sample::select(&[4u32, 9, 16, 25][..]).prop_flat_map(move |q| {
        let f = Field::of_order(q).unwrap();
        (Just(f), prop::collection::vec((0..q).prop_map(|x| Fe(x as u16)), k))
    })
}

fn matrix(f: &Field, rows: usize, cols: usize, v: &[u32]) -> Matrix {
    let q = f.order();
    Matrix::from_fn(f, rows, cols, |i, j| Fe((v[i * cols + j] % q) as u16))
}

fn poly(f: &Field, n: usize, terms: &[(Vec<u32>, u32)]) -> Polynomial {
    let q = f.order();
    Polynomial::from_terms(f, n, terms.iter().map(|(e, c)| (Monomial(e.clone()), Fe((c % q) as u16))))
}

fn terms(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), any::<u32>()), 0..6)
}

fn homogeneous(f: &Field, n: usize, d: u32, coeffs: &[u32]) -> Polynomial {
    let basis = mil_core::poly::homogeneous_basis(n, d);
    let q = f.order();
    Polynomial::from_terms(f, n, basis.into_iter().zip(coeffs.iter().map(|c| Fe((c % q) as u16))))
}

fn invertible(f: &Field, n: usize, v: &[u32]) -> Option<Matrix> {
    let m = matrix(f, n, n, v);
    (!m.determinant().unwrap().is_zero()).then_some(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((f, e) in field_and_elems(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(f.pow(a, f.order() as u64 - 1), Fe::ONE);
        }
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn frobenius_is_a_ring_map((f, e) in field_and_elems(2)) {
        let (a, b) = (e[0], e[1]);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        let mut x = a;
        for _ in 0..f.degree() {
            x = f.frobenius(x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn norm_and_trace((f, e) in quadratic_and_elems(2)) {
        let (a, b) = (e[0], e[1]);
        let s = f.degree() / 2;
        prop_assert_eq!(f.conj(f.conj(a).unwrap()).unwrap(), a);
        prop_assert_eq!(f.norm(f.mul(a, b)).unwrap(), f.mul(f.norm(a).unwrap(), f.norm(b).unwrap()));
        prop_assert_eq!(f.trace(f.add(a, b)).unwrap(), f.add(f.trace(a).unwrap(), f.trace(b).unwrap()));
        prop_assert!(f.in_subfield(f.norm(a).unwrap(), s));
        prop_assert!(f.in_subfield(f.trace(a).unwrap(), s));
    }

    #[test]
    fn rank_nullity(q in prop::sample::select(ORDERS), r in 1usize..5, c in 1usize..5, v in prop::collection::vec(any::<u32>(), 25)) {
        let f = Field::of_order(q).unwrap();
        let m = matrix(&f, r, c, &v);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.len(), c);
        for x in &k {
            prop_assert!(m.mul_vec(x).unwrap().iter().all(|a| a.is_zero()));
        }
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn inverse_and_solve(q in prop::sample::select(ORDERS), n in 1usize..5, v in prop::collection::vec(any::<u32>(), 25), w in prop::collection::vec(any::<u32>(), 5)) {
        let f = Field::of_order(q).unwrap();
        if let Some(m) = invertible(&f, n, &v) {
            let inv = m.inverse().unwrap();
            prop_assert!(m.mul(&inv).unwrap().is_identity());
            let rhs = matrix(&f, n, 1, &w);
            let sol = m.solve(&rhs).unwrap().unwrap();
            prop_assert_eq!(m.mul(&sol.particular).unwrap(), rhs);
            prop_assert!(sol.kernel.is_empty());
        }
    }

    #[test]
    fn subspaces_are_canonical(q in prop::sample::select(ORDERS), v in prop::collection::vec(any::<u32>(), 16), w in prop::collection::vec(any::<u32>(), 16), s in 1u32..100) {
        let f = Field::of_order(q).unwrap();
        let vecs: Vec<Vec<Fe>> = (0..4).map(|i| (0..4).map(|j| Fe((v[i * 4 + j] % q) as u16)).collect()).collect();
        let a = Subspace::from_vectors(&f, 4, vecs.clone());
        let scale = Fe((s % (q - 1) + 1) as u16);
        let mut other: Vec<Vec<Fe>> = vecs.iter().rev().map(|x| x.iter().map(|&y| f.mul(y, scale)).collect()).collect();
        let sum: Vec<Fe> = (0..4).map(|j| f.add(vecs[0][j], vecs[1][j])).collect();
        other.push(sum);
        prop_assert_eq!(&a, &Subspace::from_vectors(&f, 4, other));
        let wv: Vec<Vec<Fe>> = (0..2).map(|i| (0..4).map(|j| Fe((w[i * 4 + j] % q) as u16)).collect()).collect();
        let b = Subspace::from_vectors(&f, 4, wv);
        prop_assert_eq!(a.sum(&b).dim() + a.intersection(&b).dim(), a.dim() + b.dim());
        prop_assert!(a.intersection(&b).is_subspace_of(&a));
    }

    #[test]
    fn grevlex_is_multiplicative(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3), c in prop::collection::vec(0u32..4, 3)) {
        let (a, b, c) = (Monomial(a), Monomial(b), Monomial(c));
        prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
        prop_assert!(Monomial::one(3) <= a);
    }

    #[test]
    fn polynomial_text_round_trip(q in prop::sample::select(ORDERS), t in terms(3, 4)) {
        let f = Field::of_order(q).unwrap();
        let p = poly(&f, 3, &t);
        prop_assert_eq!(Polynomial::parse(&f, 3, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn action_is_a_left_action(q in prop::sample::select(&[2u32, 3, 4, 5][..]), t in terms(3, 3), v in prop::collection::vec(any::<u32>(), 9), w in prop::collection::vec(any::<u32>(), 9)) {
        let f = Field::of_order(q).unwrap();
        let (Some(g), Some(h)) = (invertible(&f, 3, &v), invertible(&f, 3, &w)) else { return Ok(()) };
        let p = poly(&f, 3, &t);
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(p.act(&gh).unwrap(), p.act(&h).unwrap().act(&g).unwrap());
        prop_assert_eq!(p.act(&Matrix::identity(&f, 3)).unwrap(), p.clone());
        let p2 = p.mul(&p);
        prop_assert_eq!(p2.act(&g).unwrap(), p.act(&g).unwrap().mul(&p.act(&g).unwrap()));
    }

    #[test]
    fn divide_by_linear_round_trip(q in prop::sample::select(ORDERS), t in terms(3, 3), l in prop::collection::vec(any::<u32>(), 3)) {
        let f = Field::of_order(q).unwrap();
        let p = poly(&f, 3, &t);
        let coeffs: Vec<Fe> = l.iter().map(|c| Fe((c % q) as u16)).collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            return Ok(());
        }
        let ell = Polynomial::linear_form(&f, &coeffs);
        prop_assert_eq!(p.mul(&ell).divide_by_linear(&ell).unwrap(), Some(p.clone()));
        if let Some(quot) = p.divide_by_linear(&ell).unwrap() {
            prop_assert_eq!(quot.mul(&ell), p);
        }
    }

    #[test]
    fn quotient_vanishing_is_monotone(q in prop::sample::select(&[2u32, 3][..]), c in prop::collection::vec(any::<u32>(), 30), degs in prop::collection::vec(1u32..4, 3)) {
        let f = Field::of_order(q).unwrap();
        let mut offset = 0;
        let gens: Vec<Polynomial> = degs.iter().map(|&d| {
            let len = mil_core::poly::monomial_count(3, d) as usize;
            let p = homogeneous(&f, 3, d, &c[offset..offset + len]);
            offset += len;
            p
        }).collect();
        let mut vanished = false;
        for d in 0..10 {
            let z = quotient_dim(&f, 3, &gens, d).unwrap() == 0;
            prop_assert!(!vanished || z, "quotient reappears in degree {}", d);
            vanished |= z;
        }
    }
}

fn small_groups() -> Vec<MatrixGroup> {
    let g = gu3_stabilizers(2).unwrap();
    vec![s3_permutation(7).unwrap(), transvection_root_group(3).unwrap(), g.h_tilde, g.h]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transfer_is_invariant_and_linear(k in 0usize..4, t in terms(3, 3), u in 0usize..3) {
        let g = small_groups().swap_remove(k);
        let f = g.field().clone();
        let n = g.degree();
        let t: Vec<(Vec<u32>, u32)> = t.into_iter().map(|(mut e, c)| { e.truncate(n); e.resize(n, 0); (e, c) }).collect();
        let p = poly(&f, n, &t);
        let tr = transfer(&g, &p);
        for x in g.generators() {
            prop_assert_eq!(tr.act(x).unwrap(), tr.clone());
        }
        let ctx = Context::new(&g, Budget::default());
        let inv = ctx.invariant_basis(1 + u as u32).unwrap();
        if let Some(v) = inv.first() {
            prop_assert_eq!(transfer(&g, &v.mul(&p)), v.mul(&tr));
        }
    }
}

mod support;

use mmf_sseq::algebra::{enumerate_monomials, normal_form, Presentation};
use mmf_sseq::grading::{parse_expression, AtomTable, Expression, Monomial};
use mmf_sseq::mmfdata::{shipped, PageKey};
use mmf_sseq::sseq::{leibniz_expression, Differential};
use mmf_sseq::taulin::{smith_normal_form, TauMatrix, TauScalar};
use proptest::prelude::*;
use support::{from_scalar, invariant_factors, pmul, to_scalar};

const E2_ATOMS: [&str; 9] = ["h_0", "h_1", "h_2", "c", "P", "u", "d", "e", "g"];

fn monomial(a: &AtomTable, exps: &[(usize, u16)], tau: u32) -> Monomial {
    let mut e = vec![0u16; a.len()];
    for &(i, k) in exps {
        e[a.index_of(E2_ATOMS[i]).unwrap()] += k;
    }
    Monomial::from_exponents(&e, tau)
}

fn small_monomial() -> impl Strategy<Value = (Vec<(usize, u16)>, u32)> {
    (prop::collection::vec((0..E2_ATOMS.len(), 1u16..3), 1..3), 0u32..3)
}

/// A homogeneous expression: a subset of the monomials in one tridegree.
fn homogeneous(a: &AtomTable, seed: &Monomial, pick: &[bool]) -> Expression {
    let ms = enumerate_monomials(a, seed.degree(a));
    let mut x = Expression::monomial(seed.clone());
    for (m, &p) in ms.iter().zip(pick.iter().cycle()) {
        if p && m != seed {
            x.toggle(m.clone());
        }
    }
    x
}

fn scalar() -> impl Strategy<Value = u64> {
    0u64..256
}

fn matrix() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0u64..16, c), r))
}

fn tau_matrix(rows: &[Vec<u64>]) -> TauMatrix {
    TauMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| to_scalar(x)).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip((exps, tau) in small_monomial(), pick in prop::collection::vec(any::<bool>(), 1..8)) {
        let a = AtomTable::mmf();
        let x = homogeneous(&a, &monomial(&a, &exps, tau), &pick);
        let back = parse_expression(&x.render(&a), &a).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn leibniz_rule((ex, tx) in small_monomial(), (ey, ty) in small_monomial()) {
        let d = shipped();
        let a = &d.atoms;
        let t = &d.pages[&PageKey::Finite(2)].table;
        let x = Expression::monomial(monomial(a, &ex, tx));
        let y = Expression::monomial(monomial(a, &ey, ty));
        let dx = leibniz_expression(&x, t, a);
        let dy = leibniz_expression(&y, t, a);
        let dxy = leibniz_expression(&x.mul(&y), t, a);
        if let (Differential::Known(dx), Differential::Known(dy), Differential::Known(dxy)) = (dx, dy, dxy) {
            prop_assert_eq!(dxy, dx.mul(&y).add(&x.mul(&dy)));
        }
    }

    #[test]
    fn leibniz_is_tau_linear((ex, tx) in small_monomial(), k in 0u32..4) {
        let d = shipped();
        let a = &d.atoms;
        let t = &d.pages[&PageKey::Finite(2)].table;
        let x = Expression::monomial(monomial(a, &ex, tx));
        let lhs = leibniz_expression(&x.tau_shift(k), t, a);
        let rhs = leibniz_expression(&x, t, a);
        match (lhs, rhs) {
            (Differential::Known(l), Differential::Known(r)) => prop_assert_eq!(l, r.tau_shift(k)),
            (l, r) => prop_assert_eq!(l, r),
        }
    }

    #[test]
    fn division_with_remainder(a in scalar(), b in 1u64..256) {
        let (q, r) = to_scalar(a).div_rem(&to_scalar(b));
        prop_assert_eq!(pmul(from_scalar(&q), b) ^ from_scalar(&r), a);
        prop_assert!(r.is_zero() || r.degree() < to_scalar(b).degree());
    }

    #[test]
    fn gcd_divides(a in scalar(), b in scalar()) {
        let g = TauScalar::gcd(&to_scalar(a), &to_scalar(b));
        prop_assert!(g.divides(&to_scalar(a)) && g.divides(&to_scalar(b)));
    }

    #[test]
    fn smith_form_factorisation(rows in matrix()) {
        let m = tau_matrix(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert_eq!(&s.u * &s.u_inv, TauMatrix::identity(rows.len()));
        prop_assert_eq!(&s.v * &s.v_inv, TauMatrix::identity(rows[0].len()));
        let diag: Vec<u64> = s.diagonal().iter().map(from_scalar).collect();
        prop_assert_eq!(diag, invariant_factors(&rows));
    }

    #[test]
    fn normal_form_is_idempotent((exps, tau) in small_monomial(), pick in prop::collection::vec(any::<bool>(), 1..8)) {
        let d = shipped();
        let a = &d.atoms;
        let p = Presentation::new(a.clone(), d.relations_on(PageKey::Finite(2)), d.relation_window()).unwrap();
        let x = homogeneous(a, &monomial(a, &exps, tau), &pick);
        let once = normal_form(&x, &p).unwrap();
        let twice = normal_form(&once.value, &p).unwrap();
        prop_assert_eq!(&twice.value, &once.value);
        let sum = normal_form(&x.add(&once.value), &p).unwrap();
        prop_assert!(sum.value.is_zero());
    }
}

//! Property tests for the algebraic invariants of expressions, exterior
//! calculus and the dual pair, driven by proptest-generated polynomials.

use cosymp_core::corpus::get_example;
use cosymp_core::duality::{compute_dual, verify_dual_identities};
use cosymp_core::exterior::{
    exterior_derivative, interior_form, lie_bracket, lie_derivative_form, pairing, schouten,
    DiffForm, MultiVector,
};
use cosymp_core::symalg::{bracket_omega, PairFH};
use cosymp_core::{parse_expr, Chart, Expr, ZeroPolicy};
use proptest::prelude::*;

const DIM: usize = 3;
const EXACT: ZeroPolicy = ZeroPolicy::Exact;

fn monomial(coeff: i64, exps: &[u32]) -> Expr {
    exps.iter()
        .enumerate()
        .fold(Expr::int(coeff), |acc, (i, &e)| {
            (0..e).fold(acc, |a, _| &a * &Expr::coord(i))
        })
}

/// Polynomials with up to four terms, each of degree at most two per variable.
fn poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec((-5i64..=5, prop::array::uniform3(0u32..=2)), 0..4).prop_map(|terms| {
        terms
            .iter()
            .fold(Expr::zero(), |acc, (c, e)| acc + monomial(*c, e))
    })
}

fn linear() -> impl Strategy<Value = Expr> {
    linear_in(DIM)
}

fn linear_in(dim: usize) -> impl Strategy<Value = Expr> {
    prop::collection::vec(-4i64..=4, dim + 1).prop_map(|c| {
        (0..c.len() - 1).fold(Expr::int(c[0]), |acc, i| {
            acc + &Expr::int(c[i + 1]) * &Expr::coord(i)
        })
    })
}

fn index_sets_in(dim: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << dim)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..dim).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn index_sets(k: usize) -> Vec<Vec<usize>> {
    index_sets_in(DIM, k)
}

fn form(k: usize) -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(poly(), index_sets(k).len()).prop_map(move |coeffs| {
        let mut out = DiffForm::zero(DIM, k).unwrap();
        for (key, c) in index_sets(k).iter().zip(coeffs) {
            out.add_component(key, c).unwrap();
        }
        out
    })
}

fn multivector(k: usize) -> impl Strategy<Value = MultiVector> {
    multivector_in(DIM, k)
}

/// Sparse multivectors with at most two linear components.
fn multivector_in(dim: usize, k: usize) -> impl Strategy<Value = MultiVector> {
    let keys = index_sets_in(dim, k);
    prop::collection::vec((0..keys.len(), linear_in(dim)), 1..=2).prop_map(move |terms| {
        let mut out = MultiVector::zero(dim, k).unwrap();
        for (key, c) in terms.iter().map(|(i, c)| (&keys[*i], c.clone())) {
            out.add_component(key, c).unwrap();
        }
        out
    })
}

fn vector() -> impl Strategy<Value = MultiVector> {
    multivector(1)
}

fn sign(n: usize) -> Expr {
    Expr::int(if n % 2 == 0 { 1 } else { -1 })
}

fn chart() -> Chart {
    Chart::new(["q", "p", "z"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_expressions_reparse_to_equal_values(e in poly(), g in poly()) {
        let chart = chart();
        let names = chart.names();
        let composite = &(&e * &g).sin() + &e.exp();
        for x in [e.clone(), composite] {
            let printed = x.to_dsl(names);
            let back = parse_expr(&printed, &chart).unwrap();
            prop_assert_eq!(back.to_dsl(names), printed);
            prop_assert!((&back - &x).is_zero(&EXACT).unwrap_or(true));
            for pt in [[0.5f64, -0.25, 0.75], [-0.9, 0.3, 0.1]] {
                let (u, v) = (back.eval(&pt).unwrap(), x.eval(&pt).unwrap());
                prop_assert!((u - v).abs() <= 1e-9 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn ring_laws_hold_in_normal_form(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_exactly_zero());
    }

    #[test]
    fn differentiation_is_a_derivation(a in poly(), b in poly(), i in 0..DIM) {
        let lhs = (&a * &b).differentiate(i);
        let rhs = &(&a.differentiate(i) * &b) + &(&a * &b.differentiate(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotients_normalize_canonically(a in poly(), b in poly()) {
        prop_assume!(!b.is_exactly_zero());
        let q = a.checked_div(&b).unwrap();
        prop_assert_eq!(&q * &b, a);
    }

    #[test]
    fn interior_product_is_an_antiderivation(a in form(1), b in form(1), x in vector()) {
        let lhs = interior_form(&x, &a.wedge(&b).unwrap()).unwrap();
        let rhs = interior_form(&x, &a).unwrap().wedge(&b).unwrap()
            .sub(&a.wedge(&interior_form(&x, &b).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs, &EXACT).unwrap());
    }

    #[test]
    fn lie_derivative_is_a_derivation_of_wedge(a in form(1), b in form(1), x in vector()) {
        let lhs = lie_derivative_form(&x, &a.wedge(&b).unwrap()).unwrap();
        let rhs = lie_derivative_form(&x, &a).unwrap().wedge(&b).unwrap()
            .add(&a.wedge(&lie_derivative_form(&x, &b).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs, &EXACT).unwrap());
    }

    #[test]
    fn lie_derivative_of_bracket_is_commutator(a in form(1), x in vector(), y in vector()) {
        let lhs = lie_derivative_form(&lie_bracket(&x, &y).unwrap(), &a).unwrap();
        let xy = lie_derivative_form(&x, &lie_derivative_form(&y, &a).unwrap()).unwrap();
        let yx = lie_derivative_form(&y, &lie_derivative_form(&x, &a).unwrap()).unwrap();
        prop_assert!(lhs.equals(&xy.sub(&yx).unwrap(), &EXACT).unwrap());
    }

    #[test]
    fn cartan_formula(a in form(2), x in vector()) {
        let lhs = lie_derivative_form(&x, &a).unwrap();
        let rhs = exterior_derivative(&interior_form(&x, &a).unwrap()).unwrap()
            .add(&interior_form(&x, &exterior_derivative(&a).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs, &EXACT).unwrap());
    }

    #[test]
    fn pairing_is_alternating(a in form(2), x in vector(), y in vector()) {
        let xy = pairing(&a, &[&x, &y]).unwrap();
        let yx = pairing(&a, &[&y, &x]).unwrap();
        prop_assert!((&xy + &yx).is_zero(&EXACT).unwrap());
        prop_assert!(pairing(&a, &[&x, &x]).unwrap().is_zero(&EXACT).unwrap());
    }

    #[test]
    fn schouten_is_graded_antisymmetric(
        dp in 1usize..=2, dq in 1usize..=2,
        seed_p in multivector(2), seed_q in multivector(2),
        xp in vector(), xq in vector(),
    ) {
        let p = if dp == 1 { xp } else { seed_p };
        let q = if dq == 1 { xq } else { seed_q };
        let pq = schouten(&p, &q).unwrap();
        let qp = schouten(&q, &p).unwrap();
        let expected = qp.scale(&sign((dp - 1) * (dq - 1) + 1));
        prop_assert!(pq.equals(&expected, &EXACT).unwrap());
    }

    /// Checked on a four-dimensional chart so that degree (2,2,2) is not
    /// vacuous.
    #[test]
    fn schouten_satisfies_graded_jacobi(
        shape in 0usize..3,
        x in multivector_in(4, 1), y in multivector_in(4, 1),
        a in multivector_in(4, 2), b in multivector_in(4, 2), c in multivector_in(4, 2),
    ) {
        let (p, q, r) = match shape {
            0 => (x, y, a),
            1 => (x, a, b),
            _ => (a, b, c),
        };
        let term = |u: &MultiVector, v: &MultiVector, w: &MultiVector| {
            schouten(u, &schouten(v, w).unwrap())
                .unwrap()
                .scale(&sign((u.degree() - 1) * (w.degree() - 1)))
        };
        let sum = term(&p, &q, &r).add(&term(&q, &r, &p)).unwrap().add(&term(&r, &p, &q)).unwrap();
        prop_assert!(sum.is_zero(&EXACT).unwrap());
    }

    #[test]
    fn schouten_of_vectors_is_lie_bracket(x in vector(), y in vector()) {
        prop_assert_eq!(schouten(&x, &y).unwrap(), lie_bracket(&x, &y).unwrap());
    }

    #[test]
    fn omega_bracket_is_antisymmetric_on_every_structure(
        f1 in poly(), h1 in poly(), f2 in poly(), h2 in poly(), which in 0usize..4,
    ) {
        let name = ["C3", "K3", "M3", "M3b"][which];
        let s = get_example(name).unwrap().structure;
        let d = compute_dual(&s, &EXACT).unwrap();
        let a = PairFH::new(f1, h1);
        let b = PairFH::new(f2, h2);
        let sum = bracket_omega(&d, &a, &b).add(&bracket_omega(&d, &b, &a));
        prop_assert!(sum.is_zero(&EXACT).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exterior_derivative_squares_to_zero(k in 0usize..2, a0 in form(0), a1 in form(1)) {
        let a = if k == 0 { a0 } else { a1 };
        let dd = exterior_derivative(&exterior_derivative(&a).unwrap()).unwrap();
        prop_assert!(dd.is_zero(&EXACT).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Adding an exact form to `Ω` keeps the pair regular near generic
    /// points; whenever the dual exists it satisfies every required identity.
    #[test]
    fn duals_of_deformed_structures_satisfy_identities(g in linear(), which in 0usize..3) {
        use cosymp_core::duality::{deform, Deformation};
        use cosymp_core::exterior::differential;
        let name = ["C3", "K3", "M3"][which];
        let s = get_example(name).unwrap().structure;
        let twist = exterior_derivative(
            &differential(DIM, &Expr::coord(0)).scale(&g),
        ).unwrap();
        if let Deformation::Regular(t) = deform(&s, &twist, &EXACT).unwrap() {
            let d = compute_dual(&t, &EXACT).unwrap();
            let report = verify_dual_identities(&t, &d, &EXACT).unwrap();
            prop_assert!(report.all_required_hold(), "{:?}", report);
        }
    }
}

//! Differential forms, multivector fields and their calculus.

mod antisym;
mod calculus;

pub use antisym::{
    sort_with_sign, Antisym, Contravariant, Covariant, DiffForm, ExteriorError, IndexSet,
    MultiVector, Variance,
};
pub use calculus::{
    copairing, differential, directional, exterior_derivative, interior_form, interior_vector,
    lambda_sharp_transport, lie_bracket, lie_derivative_form, lie_derivative_multivector, pairing,
    schouten,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{Expr, ZeroPolicy};

    const Q: usize = 0;
    const P: usize = 1;
    const Z: usize = 2;

    fn dx(i: usize) -> DiffForm {
        DiffForm::coordinate(3, i).unwrap()
    }

    fn del(i: usize) -> MultiVector {
        MultiVector::coordinate(3, i).unwrap()
    }

    fn c(v: i64) -> Expr {
        Expr::int(v)
    }

    fn x(i: usize) -> Expr {
        Expr::coord(i)
    }

    /// dz - p dq
    fn contact_form() -> DiffForm {
        dx(Z).sub(&dx(Q).scale(&x(P))).unwrap()
    }

    #[test]
    fn wedge_basis_and_signs() {
        assert_eq!(dx(Q).wedge(&dx(Q)).unwrap().nnz(), 0);
        let qp = dx(Q).wedge(&dx(P)).unwrap();
        assert_eq!(qp.get(&[Q, P]), c(1));
        let pq = dx(P).wedge(&dx(Q)).unwrap();
        assert_eq!(pq.get(&[Q, P]), c(-1));
        let vol = dx(Z).wedge(&dx(Q)).unwrap().wedge(&dx(P)).unwrap();
        assert_eq!(vol.get(&[Q, P, Z]), c(1));
    }

    #[test]
    fn exterior_derivative_examples() {
        let dz = exterior_derivative(&DiffForm::scalar(3, x(Z))).unwrap();
        assert_eq!(dz, dx(Z));
        let d = exterior_derivative(&dx(Q).scale(&-x(P))).unwrap();
        assert_eq!(d.get(&[Q, P]), c(1));
        assert_eq!(d.nnz(), 1);
        let qp = dx(Q).wedge(&dx(P)).unwrap();
        assert_eq!(exterior_derivative(&qp).unwrap().nnz(), 0);
        let top = qp.wedge(&dx(Z)).unwrap();
        assert!(exterior_derivative(&top).is_err());
    }

    #[test]
    fn interior_products_contract_first_slot() {
        let one = interior_form(&del(Z), &contact_form()).unwrap();
        assert_eq!(one.as_scalar().unwrap(), c(1));
        let qp = dx(Q).wedge(&dx(P)).unwrap();
        assert_eq!(interior_form(&del(Q), &qp).unwrap(), dx(P));
        assert_eq!(interior_form(&del(P), &qp).unwrap(), dx(Q).neg());

        let bq = del(Q).wedge(&del(P)).unwrap();
        assert_eq!(interior_vector(&dx(Q), &bq).unwrap(), del(P));
        assert_eq!(interior_vector(&dx(Z), &bq).unwrap().nnz(), 0);
        assert_eq!(interior_vector(&dx(P), &bq).unwrap(), del(Q).neg());
        assert!(interior_form(&del(Q), &DiffForm::scalar(3, c(1))).is_err());
    }

    #[test]
    fn pairing_alternates() {
        assert_eq!(pairing(&contact_form(), &[&del(Z)]).unwrap(), c(1));
        let qp = dx(Q).wedge(&dx(P)).unwrap();
        assert_eq!(pairing(&qp, &[&del(Q), &del(P)]).unwrap(), c(1));
        assert_eq!(pairing(&qp, &[&del(P), &del(Q)]).unwrap(), c(-1));
        assert!(pairing(&qp, &[&del(P)]).is_err());
    }

    #[test]
    fn lie_bracket_examples() {
        assert_eq!(lie_bracket(&del(Q), &del(P)).unwrap().nnz(), 0);
        let y = del(P).scale(&x(Q));
        assert_eq!(lie_bracket(&del(Q), &y).unwrap(), del(P));
        assert_eq!(lie_bracket(&y, &y).unwrap().nnz(), 0);
    }

    #[test]
    fn lie_derivative_examples() {
        assert_eq!(
            lie_derivative_form(&del(Z), &contact_form()).unwrap().nnz(),
            0
        );
        let f = &x(Q) * &x(P);
        let df = differential(3, &f);
        assert_eq!(lie_derivative_form(&del(Q), &df).unwrap(), dx(P));
        let zero = MultiVector::zero(3, 1).unwrap();
        assert_eq!(
            lie_derivative_form(&zero, &contact_form()).unwrap().nnz(),
            0
        );
    }

    #[test]
    fn schouten_reduces_to_lie_bracket_and_lie_derivative() {
        assert_eq!(schouten(&del(Q), &del(P)).unwrap().nnz(), 0);
        let bq = del(Q).wedge(&del(P)).unwrap();
        assert_eq!(schouten(&del(Z), &bq).unwrap().nnz(), 0);

        let xf = del(P)
            .scale(&x(Q))
            .add(&del(Z).scale(&(&x(P) * &x(P))))
            .unwrap();
        let yf = del(Q).scale(&x(Z)).add(&del(P)).unwrap();
        assert_eq!(schouten(&xf, &yf).unwrap(), lie_bracket(&xf, &yf).unwrap());

        // [f, X] = -X.f and [X, f] = X.f
        let f = MultiVector::scalar(3, &x(Q) * &x(Z));
        let xf_f = directional(&xf, &f.as_scalar().unwrap()).unwrap();
        assert_eq!(schouten(&xf, &f).unwrap().as_scalar().unwrap(), xf_f);
        assert_eq!(schouten(&f, &xf).unwrap().as_scalar().unwrap(), -xf_f);
    }

    #[test]
    fn schouten_of_contact_bivector_matches_jacobi_identity() {
        // Contact dual on (q,p,z): E = ∂z, Λ = -∂q∧∂p + p ∂p∧∂z
        let e = del(Z);
        let lambda = del(Q)
            .wedge(&del(P))
            .unwrap()
            .neg()
            .add(&del(P).wedge(&del(Z)).unwrap().scale(&x(P)))
            .unwrap();
        assert_eq!(schouten(&e, &lambda).unwrap().nnz(), 0);
        let ll = schouten(&lambda, &lambda).unwrap();
        let expected = e.wedge(&lambda).unwrap().scale(&c(-2));
        assert!(ll.equals(&expected, &ZeroPolicy::Exact).unwrap());
    }

    #[test]
    fn transport_through_mixed_bivector() {
        // Λ = ∂q∧∂p - p ∂p∧∂z and dω = dq∧dp reproduce Λ.
        let lambda = del(Q)
            .wedge(&del(P))
            .unwrap()
            .sub(&del(P).wedge(&del(Z)).unwrap().scale(&x(P)))
            .unwrap();
        let domega = exterior_derivative(&contact_form()).unwrap();
        assert_eq!(lambda_sharp_transport(&lambda, &domega).unwrap(), lambda);
        let zero_form = DiffForm::zero(3, 2).unwrap();
        assert_eq!(
            lambda_sharp_transport(&lambda, &zero_form).unwrap().nnz(),
            0
        );
        let zero_bivector = MultiVector::zero(3, 2).unwrap();
        assert_eq!(
            lambda_sharp_transport(&zero_bivector, &domega)
                .unwrap()
                .nnz(),
            0
        );
    }

    #[test]
    fn component_access_and_printing() {
        let names: Vec<String> = ["q", "p", "z"].iter().map(|s| s.to_string()).collect();
        let w = dx(P).wedge(&dx(Q)).unwrap();
        assert_eq!(w.at(&[P, Q]), c(1));
        assert_eq!(w.to_dsl(&names), "{q^p: -1}");
        assert!(DiffForm::basis(3, &[Q, Q]).is_err());
        assert!(DiffForm::basis(3, &[Q, 7]).is_err());
        assert!(DiffForm::zero(3, 4).is_err());
    }
}

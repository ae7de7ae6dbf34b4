//! Differential operators on forms and multivector fields.
//!
//! Sign conventions:
//! * interior products contract the first slot, for forms and multivectors;
//! * the Schouten bracket is
//!   `[P,Q] = (-1)^{(p-1)(q-1)} Σ_i (P ←∂_{θ_i}) ∧ ∂_i Q - Σ_i (Q ←∂_{θ_i}) ∧ ∂_i P`,
//!   where `←∂_{θ_i}` removes index `i` from the right. It restricts to the
//!   Lie bracket on vector fields and to `L_X Q` for `P = X`.

use super::antisym::{merge_sign, signed, DiffForm, ExteriorError, IndexSet, MultiVector};
use crate::symexpr::Expr;

/// `d a`.
pub fn exterior_derivative(a: &DiffForm) -> Result<DiffForm, ExteriorError> {
    let dim = a.dim();
    let mut out = DiffForm::zero(dim, a.degree() + 1)?;
    for (key, c) in a.components() {
        for i in 0..dim {
            if key.contains(&i) {
                continue;
            }
            let dc = c.differentiate(i);
            if dc.is_exactly_zero() {
                continue;
            }
            let (merged, sign) = merge_sign(&[i], key).expect("index not in key");
            out.add_component(&merged, signed(dc, sign))?;
        }
    }
    Ok(out)
}

/// `i_X a`, contracting the first slot of `a`.
pub fn interior_form(x: &MultiVector, a: &DiffForm) -> Result<DiffForm, ExteriorError> {
    require_degree(x.degree(), 1)?;
    a.contract_first(&x.to_vec())
}

/// `i_α P`, contracting the first slot of `P`.
pub fn interior_vector(alpha: &DiffForm, p: &MultiVector) -> Result<MultiVector, ExteriorError> {
    require_degree(alpha.degree(), 1)?;
    p.contract_first(&alpha.to_vec())
}

/// `a(X_1, .., X_k)`.
pub fn pairing(a: &DiffForm, args: &[&MultiVector]) -> Result<Expr, ExteriorError> {
    if args.len() != a.degree() {
        return Err(ExteriorError::Arity {
            expected: a.degree(),
            got: args.len(),
        });
    }
    let mut cur = a.clone();
    for x in args {
        cur = interior_form(x, &cur)?;
    }
    Ok(cur.as_scalar().expect("fully contracted"))
}

/// `P(α_1, .., α_k)`, contracting first slots in order.
pub fn copairing(p: &MultiVector, args: &[&DiffForm]) -> Result<Expr, ExteriorError> {
    if args.len() != p.degree() {
        return Err(ExteriorError::Arity {
            expected: p.degree(),
            got: args.len(),
        });
    }
    let mut cur = p.clone();
    for a in args {
        cur = interior_vector(a, &cur)?;
    }
    Ok(cur.as_scalar().expect("fully contracted"))
}

/// `X.f = X^i ∂_i f`.
pub fn directional(x: &MultiVector, f: &Expr) -> Result<Expr, ExteriorError> {
    require_degree(x.degree(), 1)?;
    Ok(x.components()
        .map(|(k, c)| c * &f.differentiate(k[0]))
        .fold(Expr::zero(), |acc, t| acc + t))
}

/// `df` as a 1-form.
pub fn differential(dim: usize, f: &Expr) -> DiffForm {
    DiffForm::from_vec((0..dim).map(|i| f.differentiate(i)).collect())
}

/// `[X, Y]^i = X^j ∂_j Y^i - Y^j ∂_j X^i`.
pub fn lie_bracket(x: &MultiVector, y: &MultiVector) -> Result<MultiVector, ExteriorError> {
    require_degree(x.degree(), 1)?;
    require_degree(y.degree(), 1)?;
    x.same_dim(y.dim())?;
    let comps = (0..x.dim())
        .map(|i| {
            let yi = y.get(&[i]);
            let xi = x.get(&[i]);
            Ok(directional(x, &yi)? - directional(y, &xi)?)
        })
        .collect::<Result<Vec<_>, ExteriorError>>()?;
    Ok(MultiVector::from_vec(comps))
}

/// `L_X a = i_X d a + d i_X a`; `X.f` in degree 0.
pub fn lie_derivative_form(x: &MultiVector, a: &DiffForm) -> Result<DiffForm, ExteriorError> {
    require_degree(x.degree(), 1)?;
    a.same_dim(x.dim())?;
    if a.degree() == 0 {
        let f = a.as_scalar().expect("degree 0");
        return Ok(DiffForm::scalar(a.dim(), directional(x, &f)?));
    }
    let d_of_contraction = exterior_derivative(&interior_form(x, a)?)?;
    if a.degree() == a.dim() {
        return Ok(d_of_contraction);
    }
    interior_form(x, &exterior_derivative(a)?)?.add(&d_of_contraction)
}

/// `L_X P = [X, P]`.
pub fn lie_derivative_multivector(
    x: &MultiVector,
    p: &MultiVector,
) -> Result<MultiVector, ExteriorError> {
    require_degree(x.degree(), 1)?;
    schouten(x, p)
}

/// Right derivative `P ←∂_{θ_i}`.
fn right_odd_derivative(p: &MultiVector, i: usize) -> MultiVector {
    let deg = p.degree();
    let mut out = MultiVector::zero(p.dim(), deg - 1).expect("lower degree");
    for (key, c) in p.components() {
        if let Some(pos) = key.iter().position(|&k| k == i) {
            let mut rest: IndexSet = key.clone();
            rest.remove(pos);
            let sign = if (deg - 1 - pos) % 2 == 0 { 1 } else { -1 };
            out.add_component(&rest, signed(c.clone(), sign))
                .expect("valid key");
        }
    }
    out
}

/// One-sided half of the bracket: `Σ_i (P ←∂_{θ_i}) ∧ ∂_i Q`.
fn half_bracket(
    p: &MultiVector,
    q: &MultiVector,
    target: usize,
) -> Result<MultiVector, ExteriorError> {
    let mut acc = MultiVector::zero(p.dim(), target)?;
    if p.degree() == 0 {
        return Ok(acc);
    }
    for i in 0..p.dim() {
        let left = right_odd_derivative(p, i);
        if left.nnz() == 0 {
            continue;
        }
        let right = q.partial(i);
        if right.nnz() == 0 {
            continue;
        }
        acc = acc.add(&left.wedge(&right)?)?;
    }
    Ok(acc)
}

/// Schouten–Nijenhuis bracket of multivector fields.
pub fn schouten(p: &MultiVector, q: &MultiVector) -> Result<MultiVector, ExteriorError> {
    p.same_dim(q.dim())?;
    let (dp, dq) = (p.degree(), q.degree());
    if dp + dq == 0 {
        return Err(ExteriorError::DegreeTooLow { needed: 1, got: 0 });
    }
    let target = dp + dq - 1;
    if target > p.dim() {
        return Err(ExteriorError::DegreeOverflow {
            degree: target,
            dim: p.dim(),
        });
    }
    let first = half_bracket(p, q, target)?;
    let second = half_bracket(q, p, target)?;
    let twisted = if dp > 0 && dq > 0 && (dp - 1) * (dq - 1) % 2 == 1 {
        first.neg()
    } else {
        first
    };
    twisted.sub(&second)
}

/// Bivector `W` with `W(α, β) = a(Λ♯α, Λ♯β)`.
pub fn lambda_sharp_transport(
    lambda: &MultiVector,
    a: &DiffForm,
) -> Result<MultiVector, ExteriorError> {
    require_degree(lambda.degree(), 2)?;
    if a.degree() != 2 {
        return Err(ExteriorError::Arity {
            expected: 2,
            got: a.degree(),
        });
    }
    lambda.same_dim(a.dim())?;
    let dim = lambda.dim();
    let images = (0..dim)
        .map(|i| interior_vector(&DiffForm::coordinate(dim, i)?, lambda))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = MultiVector::zero(dim, 2)?;
    for i in 0..dim {
        for j in i + 1..dim {
            let v = pairing(a, &[&images[i], &images[j]])?;
            out.add_component(&[i, j], v)?;
        }
    }
    Ok(out)
}

fn require_degree(got: usize, needed: usize) -> Result<(), ExteriorError> {
    if got == needed {
        Ok(())
    } else {
        Err(ExteriorError::Arity {
            expected: needed,
            got,
        })
    }
}

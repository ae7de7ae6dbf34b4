//! Seeded fixture construction: polynomial pairs meeting prescribed generator
//! conditions, and vector fields that are known symmetries.
//!
//! Generator pairs come from a polynomial ansatz. The conditions are linear
//! in the unknown coefficients, so their solution space is the kernel of the
//! matrix obtained by evaluating each condition on each ansatz column at
//! sample points. Every kernel vector is re-verified symbolically before it
//! is returned, so sampling can only lose fixtures, never admit wrong ones.

use num_rational::BigRational;
use num_traits::Zero;

use crate::duality::AcpjStructure;
use crate::exterior::{lie_bracket, schouten, MultiVector};
use crate::linalg::nullspace;
use crate::sampling::{exponent_vectors, PolyGen, SampleBox};
use crate::symalg::{cond3_values, pre_hamiltonian_lift, reeb_condition, reeb_derivative, PairFH};
use crate::symexpr::{Expr, ZeroPolicy, ZeroTestError};

/// Which generator conditions a fixture must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
}

impl Conditions {
    /// Generators of symmetries of `ω`.
    pub const OMEGA: Self = Self {
        cond1: false,
        cond2: true,
        cond3: true,
    };
    /// Pairs with conserved `f`.
    pub const CONSERVED: Self = Self {
        cond1: true,
        cond2: false,
        cond3: false,
    };
    /// Generators of symmetries of `(ω, Ω)`.
    pub const ACC: Self = Self {
        cond1: true,
        cond2: true,
        cond3: true,
    };
}

fn condition_values(d: &AcpjStructure, pair: &PairFH, which: Conditions) -> Vec<Expr> {
    let mut out = Vec::new();
    if which.cond1 {
        out.push(reeb_derivative(d, &pair.f));
    }
    if which.cond2 {
        out.push(reeb_condition(d, pair));
    }
    if which.cond3 {
        out.extend(cond3_values(d, pair));
    }
    out
}

fn monomials(dim: usize, max_degree: u32) -> Vec<Expr> {
    exponent_vectors(dim, max_degree)
        .into_iter()
        .map(|exps| {
            exps.iter().enumerate().fold(Expr::one(), |acc, (i, &e)| {
                (0..e).fold(acc, |a, _| &a * &Expr::coord(i))
            })
        })
        .collect()
}

/// Basis of the polynomial pairs of total degree at most `max_degree` that
/// satisfy `which`. Deterministic for a fixed seed.
pub fn generator_basis(
    d: &AcpjStructure,
    which: Conditions,
    max_degree: u32,
    seed: u64,
    policy: &ZeroPolicy,
) -> Result<Vec<PairFH>, ZeroTestError> {
    let dim = d.dim();
    let monos = monomials(dim, max_degree);
    let m = monos.len();
    let columns: Vec<PairFH> = monos
        .iter()
        .map(|mo| PairFH::new(mo.clone(), Expr::zero()))
        .chain(monos.iter().map(|mo| PairFH::new(Expr::zero(), mo.clone())))
        .collect();
    let values: Vec<Vec<Expr>> = columns
        .iter()
        .map(|c| condition_values(d, c, which))
        .collect();
    let per_point = values.first().map_or(1, Vec::len).max(1);
    let points = (2 * m).div_ceil(per_point) + 3;
    let all: Vec<Expr> = values.iter().flatten().cloned().collect();

    // Integer points keep the elimination entries small.
    let bounds = SampleBox {
        num_bound: 25,
        den_bound: 1,
    };
    let mut sampler = bounds.sampler(seed);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for _ in 0..points {
        let p = sampler.regular_point(dim, &all)?;
        for r in 0..per_point {
            rows.push(
                values
                    .iter()
                    .map(|col| col[r].eval(p.coords()).expect("regular point"))
                    .collect(),
            );
        }
    }
    let kernel = nullspace(&rows, 2 * m, BigRational::is_zero);
    let mut basis = Vec::new();
    for v in kernel {
        let pair = v
            .iter()
            .zip(&columns)
            .fold(PairFH::zero(), |acc, (c, col)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&col.scale(&Expr::constant(c.clone())))
                }
            });
        let mut ok = true;
        for e in condition_values(d, &pair, which) {
            if !e.is_zero(policy)? {
                ok = false;
                break;
            }
        }
        if ok {
            basis.push(pair);
        }
    }
    Ok(basis)
}

/// Random integer combination of one to three basis elements; the zero pair
/// when the basis is empty.
pub fn random_member(basis: &[PairFH], gen: &mut PolyGen) -> PairFH {
    if basis.is_empty() {
        return PairFH::zero();
    }
    let terms = 1 + gen.below(3);
    (0..terms).fold(PairFH::zero(), |acc, _| {
        let b = &basis[gen.below(basis.len())];
        acc.add(&b.scale(&Expr::int(gen.nonzero_int(3))))
    })
}

/// Pair of random polynomials of degree at most two in the coordinates.
pub fn random_pair(dim: usize, gen: &mut PolyGen) -> PairFH {
    let coords: Vec<Expr> = (0..dim).map(Expr::coord).collect();
    PairFH::new(gen.poly_in(&coords, 2), gen.poly_in(&coords, 2))
}

/// Random polynomial vector field with components of degree at most one.
pub fn random_vector(dim: usize, gen: &mut PolyGen) -> MultiVector {
    let coords: Vec<Expr> = (0..dim).map(Expr::coord).collect();
    MultiVector::from_vec((0..dim).map(|_| gen.poly_in(&coords, 1)).collect())
}

/// Candidate vector fields: `E`, the coordinate fields and the lifts of
/// `pairs`, deduplicated in that order.
pub fn candidate_fields(d: &AcpjStructure, pairs: &[PairFH]) -> Vec<MultiVector> {
    let mut out = vec![d.reeb().clone()];
    out.extend((0..d.dim()).map(|i| MultiVector::coordinate(d.dim(), i).expect("index")));
    out.extend(pairs.iter().map(|p| pre_hamiltonian_lift(d, p)));
    let mut unique: Vec<MultiVector> = Vec::new();
    for x in out {
        if x.nnz() > 0 && !unique.contains(&x) {
            unique.push(x);
        }
    }
    unique
}

/// Candidates commuting with `E`.
pub fn reeb_commuting_fields(
    d: &AcpjStructure,
    pairs: &[PairFH],
    policy: &ZeroPolicy,
) -> Result<Vec<MultiVector>, ZeroTestError> {
    let mut out = Vec::new();
    for x in candidate_fields(d, pairs) {
        if lie_bracket(&x, d.reeb())
            .expect("vectors")
            .is_zero(policy)?
        {
            out.push(x);
        }
    }
    Ok(out)
}

/// Candidates that preserve both `E` and `Λ`.
pub fn acpj_symmetry_fields(
    d: &AcpjStructure,
    pairs: &[PairFH],
    policy: &ZeroPolicy,
) -> Result<Vec<MultiVector>, ZeroTestError> {
    let mut out = Vec::new();
    for x in reeb_commuting_fields(d, pairs, policy)? {
        if schouten(&x, d.lambda())
            .expect("same chart")
            .is_zero(policy)?
        {
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::get_example;
    use crate::duality::compute_dual;
    use crate::symalg::classify_generator;

    fn dual(name: &str) -> AcpjStructure {
        compute_dual(&get_example(name).unwrap().structure, &ZeroPolicy::Exact).unwrap()
    }

    #[test]
    fn contact_generators_have_h_opposite_to_f_up_to_a_constant() {
        let d = dual("C3");
        let basis = generator_basis(&d, Conditions::ACC, 2, 0, &ZeroPolicy::Exact).unwrap();
        // six conserved f of degree at most two in (q, p), plus (0, 1)
        assert_eq!(basis.len(), 7);
        for p in &basis {
            assert!(classify_generator(&d, p, &ZeroPolicy::Exact)
                .unwrap()
                .lgen_acc());
            assert!((&p.h + &p.f).as_constant().is_some());
        }
    }

    #[test]
    fn every_corpus_structure_has_generators() {
        for name in ["C3", "C5", "K3", "M3", "M3b", "EM3"] {
            let d = dual(name);
            let basis = generator_basis(&d, Conditions::ACC, 2, 1, &ZeroPolicy::Exact).unwrap();
            assert!(basis.len() >= 2, "{name}: {}", basis.len());
        }
    }

    #[test]
    fn symmetry_fields_are_nonempty() {
        for name in ["C3", "K3", "M3", "M3b", "EM3"] {
            let d = dual(name);
            let basis = generator_basis(&d, Conditions::ACC, 2, 2, &ZeroPolicy::Exact).unwrap();
            let xs = acpj_symmetry_fields(&d, &basis, &ZeroPolicy::Exact).unwrap();
            assert!(!xs.is_empty(), "{name}");
        }
    }
}

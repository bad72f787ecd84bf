//! Exact checks: decompositions of MMult, σ₅ reductions of the coincident exceptional
//! configurations, left and right ideals of the 2×2 matrix algebra, the parametric
//! multiplication matrices, and the small lemmas about dependent rank-one tensors.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{monomials_tensor, parse_monomials, poly, random_vector, speeds, Monomial, SPEEDS};
use crate::linalg::{independent_subset, same_span, span_rank, RationalMatrix};
use crate::rational::{q, Q};
use crate::segre::{wedge_taylor_first_term, CurveJet, LimitPlaneResult, ProductCurve};
use crate::tensor::{
    contract, mmult_tensor, tensor_from_terms, vec_add, vec_i64, Factor, Rank1Term, Tensor3, Vector,
};
use crate::Error;

#[derive(Clone, Debug)]
pub struct DecompositionCandidate {
    pub terms: Vec<Rank1Term>,
    pub target: Tensor3,
}

/// True iff the terms sum exactly to the target. Dimension mismatches count as false.
pub fn verify_decomposition(cand: &DecompositionCandidate) -> bool {
    match tensor_from_terms(&cand.terms, cand.target.dims()) {
        Ok(t) => t == cand.target,
        Err(_) => false,
    }
}

/// Strassen's seven products for MMult₂ in the (ij),(jk),(ki) convention.
///
/// Matrix entries X₁₁,X₁₂,X₂₁,X₂₂ sit at indices 0..3 of A and B; the output slot
/// holds C_ik at index 2k+i.
pub fn strassen_terms() -> Vec<Rank1Term> {
    const T: [[[i64; 4]; 3]; 7] = [
        [[1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]],
        [[0, 0, 1, 1], [1, 0, 0, 0], [0, 1, 0, -1]],
        [[1, 0, 0, 0], [0, 1, 0, -1], [0, 0, 1, 1]],
        [[0, 0, 0, 1], [-1, 0, 1, 0], [1, 1, 0, 0]],
        [[1, 1, 0, 0], [0, 0, 0, 1], [-1, 0, 1, 0]],
        [[-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]],
        [[0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0]],
    ];
    T.iter()
        .map(|[a, b, c]| Rank1Term::unit(vec_i64(a), vec_i64(b), vec_i64(c)))
        .collect()
}

fn small_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    (0..dim).map(|_| q(rng.gen_range(-1..=1))).collect()
}

/// Draws `count` random six-term candidates with entries in {−1,0,1} and returns how
/// many reproduce MMult₂ exactly. Trials are independent and seeded per index.
pub fn six_term_falsification(seed: u64, count: usize) -> usize {
    let target = mmult_tensor(2);
    (0..count)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64));
            let terms = (0..6)
                .map(|_| {
                    let coeff = q(rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 });
                    Rank1Term::new(coeff, small_vector(&mut rng, 4), small_vector(&mut rng, 4), small_vector(&mut rng, 4))
                })
                .collect();
            verify_decomposition(&DecompositionCandidate { terms, target: target.clone() })
        })
        .count()
}

// ---------------------------------------------------------------------------
// σ₅ reductions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum ReductionCaseId {
    EX_5_1_STANDARD,
    EX_5_1_TAU5P,
    EX_4_2_COINCIDENT,
    EX_3_3,
}

impl ReductionCaseId {
    pub const ALL: [ReductionCaseId; 4] = [
        ReductionCaseId::EX_5_1_STANDARD,
        ReductionCaseId::EX_5_1_TAU5P,
        ReductionCaseId::EX_4_2_COINCIDENT,
        ReductionCaseId::EX_3_3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionCaseId::EX_5_1_STANDARD => "EX_5_1_STANDARD",
            ReductionCaseId::EX_5_1_TAU5P => "EX_5_1_TAU5P",
            ReductionCaseId::EX_4_2_COINCIDENT => "EX_4_2_COINCIDENT",
            ReductionCaseId::EX_3_3 => "EX_3_3",
        }
    }

    /// The displayed tensor x of the case, with its redundant double-parenthesis terms.
    ///
    /// The coincident 4/2 display is not well formed as printed (a monomial missing
    /// its c factor, and terms inconsistent with the II and III formulas); this is the
    /// reading in which q's first tangent vector coincides with p's third coefficient.
    pub fn display(self) -> &'static str {
        match self {
            ReductionCaseId::EX_5_1_STANDARD => {
                "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+(a1b3c2+a3b1c2)]\
                 +[(a1b1c5+a1b5c1+a5b1c1)+(a1b3c3+a3b1c3+a3b3c1)+(a1b4c2+a4b1c2)]\
                 +((a1b1c2))+(a1b1c6+a1b6c2+a6b1c2)"
            }
            ReductionCaseId::EX_5_1_TAU5P => {
                "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)]+(a1b1c4+a1b4c1+a4b1c1)\
                 +[(a1b1c5+a1b5c1+a5b1c1)+(a1b4c4+a4b1c4+a4b4c1)]\
                 +((a1b1c2))+(a1b1c6+a1b6c2+a6b1c2)"
            }
            ReductionCaseId::EX_4_2_COINCIDENT => {
                "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)]+[(a1b1c4)+(a1b3c2+a3b1c2)]\
                 +((a1b1c2))+((a1b1c4+a1b3c2+a3b1c2))\
                 +[(a1b1c5+a1b5c2+a5b1c2)+2(a1b3c4+a3b1c4+a3b3c2)]\
                 +[(a1b1c6+a1b6c2+a6b1c2)+6a3b3c4\
                 +(a1b3c5+a1b5c4+a3b1c5+a5b1c4+a3b5c2+a5b3c2)]"
            }
            ReductionCaseId::EX_3_3 => {
                "a1b1c1+((a1b1c2))+[(a1b1c3+a1b3c1+a3b1c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+(a1b3c2+a3b1c2)]\
                 +(a1b1c2)+(a1b1c5+a1b5c2+a5b1c2)\
                 +[(a1b1c6+a1b6c2+a6b1c2)+2(a1b5c5+a5b1c5+a5b5c2)]"
            }
        }
    }
}

impl fmt::Display for ReductionCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionCaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ReductionCaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown reduction case {s:?}")))
    }
}

/// A reduction case instantiated with free vectors a₁..a₆, b₁..b₆, c₁..c₆.
#[derive(Clone, Debug)]
pub struct ReductionCase {
    pub id: ReductionCaseId,
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
    pub c: Vec<Vector>,
}

pub const REDUCTION_VECTORS: usize = 6;

impl ReductionCase {
    pub fn new(id: ReductionCaseId, a: Vec<Vector>, b: Vec<Vector>, c: Vec<Vector>) -> Result<Self, Error> {
        for f in [&a, &b, &c] {
            if f.len() != REDUCTION_VECTORS {
                return Err(Error::Dimension(format!("a reduction case needs {REDUCTION_VECTORS} vectors per factor")));
            }
            if f.iter().any(|v| v.len() != f[0].len()) {
                return Err(Error::Dimension("vectors of unequal length within a factor".into()));
            }
        }
        Ok(ReductionCase { id, a, b, c })
    }

    pub fn sample(id: ReductionCaseId, seed: u64, dims: (usize, usize, usize)) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xec << 48) ^ ((id as u64) << 40));
        let mut draw = |d: usize| (0..REDUCTION_VECTORS).map(|_| random_vector(&mut rng, d)).collect::<Vec<_>>();
        let (a, b, c) = (draw(dims.0), draw(dims.1), draw(dims.2));
        ReductionCase::new(id, a, b, c).expect("sampled dims are consistent")
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a[0].len(), self.b[0].len(), self.c[0].len())
    }

    pub fn tensor(&self) -> Tensor3 {
        let ms = parse_monomials(self.id.display()).expect("built-in display parses");
        monomials_tensor(&ms, &self.a, &self.b, &self.c).expect("labels within range")
    }

    /// Curves realizing x after the tilde substitutions.
    pub fn curves(&self) -> Vec<CurveJet> {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let (da, db, _) = self.dims();
        let v = |f: &Vec<Vector>, i: usize| f[i - 1].clone();
        let add = |u: &Vector, w: &Vector| vec_add(u, w);
        let sub = |u: &Vector, w: &Vector| crate::tensor::vec_sub(u, w);
        let mut out = Vec::new();
        match self.id {
            ReductionCaseId::EX_5_1_STANDARD => {
                let (ct5, bt4, bt5) = (add(&v(c, 5), &v(c, 6)), add(&v(b, 4), &v(b, 6)), sub(&v(b, 5), &v(b, 6)));
                let (at4, at5) = (add(&v(a, 4), &v(a, 6)), sub(&v(a, 5), &v(a, 6)));
                let p = ProductCurve::new(
                    poly(&[Some(&a[0]), None, Some(&a[2]), Some(&at4), Some(&at5)], da),
                    poly(&[Some(&b[0]), None, Some(&b[2]), Some(&bt4), Some(&bt5)], db),
                    vec![v(c, 1), v(c, 2), v(c, 3), v(c, 4), ct5],
                );
                out.extend(speeds(&p, &SPEEDS[..5]));
            }
            ReductionCaseId::EX_5_1_TAU5P => {
                let at5 = add(&v(a, 5), &v(a, 3));
                let bt5 = add(&v(b, 5), &v(b, 3));
                let ct5 = add(&v(c, 5), &v(c, 3));
                let p = ProductCurve::new(vec![v(a, 1), v(a, 4), at5], vec![v(b, 1), v(b, 4), bt5], vec![v(c, 1), v(c, 4), ct5]);
                out.extend(speeds(&p, &SPEEDS[..3]));
                let qc = ProductCurve::new(vec![v(a, 1), v(a, 6)], vec![v(b, 1), v(b, 6)], vec![v(c, 2), v(c, 6)]);
                out.extend(speeds(&qc, &[1, -1]));
            }
            ReductionCaseId::EX_3_3 => {
                let bt3 = add(&v(b, 3), &v(b, 4));
                let bt6 = add(&v(b, 6), &bt3);
                let at3 = add(&v(a, 3), &v(a, 4));
                let at6 = add(&v(a, 6), &at3);
                let ct6 = add(&v(c, 6), &v(c, 4));
                let p = ProductCurve::new(vec![v(a, 1), at3.clone()], vec![v(b, 1), bt3.clone()], vec![v(c, 1), v(c, 3)]);
                out.extend(speeds(&p, &[0, 1]));
                let base = crate::segre::SegrePoint::new(v(a, 1), v(b, 1), v(c, 2));
                if let Ok(base) = base {
                    let ys = [(v(a, 5), v(b, 5), v(c, 5)), (sub(&at6, &v(a, 4)), sub(&bt6, &v(b, 4)), ct6)];
                    out.extend(speeds(&crate::catalog::chain_curve(&base, &ys), &SPEEDS[..3]));
                }
            }
            ReductionCaseId::EX_4_2_COINCIDENT => {
                // x = q + y_q(y₁) + the τ₄ block at q with y₁ = (a₃,b₃,c₄),
                // y₂ = (a₅,b₅,c₅+c₁), y₃ = (a₆,b₆,c₆+c₃), so it already lies in the
                // osculating 3-space at q; p is added as a fifth constant curve
                if let Ok(base) = crate::segre::SegrePoint::new(v(a, 1), v(b, 1), v(c, 2)) {
                    let ys = [
                        (v(a, 3), v(b, 3), v(c, 4)),
                        (v(a, 5), v(b, 5), add(&v(c, 5), &v(c, 1))),
                        (v(a, 6), v(b, 6), add(&v(c, 6), &v(c, 3))),
                    ];
                    out.extend(speeds(&crate::catalog::chain_curve(&base, &ys), &SPEEDS[..4]));
                }
                if let Ok(p) = crate::segre::SegrePoint::new(v(a, 1), v(b, 1), v(c, 1)) {
                    out.push(ProductCurve::constant(&p).jet(crate::catalog::WITNESS_ORDER));
                }
            }
        }
        out
    }
}

/// A σ₅ witness: five curve jets, their limit plane, and whether it contains x.
#[derive(Clone, Debug)]
pub struct Sigma5Witness {
    pub case: ReductionCaseId,
    pub target: Tensor3,
    pub curves: Vec<CurveJet>,
    pub limit: LimitPlaneResult,
    pub contains: bool,
}

impl Sigma5Witness {
    pub fn verified(&self) -> bool {
        self.curves.len() == 5 && !self.limit.degenerate && self.limit.plane_basis.len() == 5 && self.contains
    }
}

/// Builds x for the case and the curves of its reduction, and checks exactly that the
/// limit plane of the curves contains x. Fails when the case has no five-curve
/// configuration.
pub fn reduce_to_sigma5(case: &ReductionCase) -> Result<Sigma5Witness, Error> {
    let target = case.tensor();
    let curves = case.curves();
    if curves.len() != 5 {
        return Err(Error::Degenerate(format!(
            "{}: no five-curve configuration known, best has {} curves",
            case.id,
            curves.len()
        )));
    }
    let limit = wedge_taylor_first_term(&curves)?;
    let contains = crate::segre::plane_contains(&limit, &target);
    Ok(Sigma5Witness { case: case.id, target, curves, limit, contains })
}

// ---------------------------------------------------------------------------
// ideals of the 2×2 matrix algebra

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct IdealReport {
    pub generator: Vector,
    pub side: Side,
    pub image_basis: Vec<Vector>,
    pub dim: usize,
}

impl IdealReport {
    pub fn same_subspace(&self, other: &IdealReport) -> bool {
        same_span(&self.image_basis, &other.image_basis)
    }
}

fn ideal(dual: &[Q], factor: Factor, side: Side) -> Result<IdealReport, Error> {
    if dual.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("zero generator".into()));
    }
    let m = contract(&mmult_tensor(2), dual, factor)?;
    let rows: Vec<Vector> = (0..m.rows).map(|i| m.row(i)).collect();
    let image_basis = independent_subset(&rows);
    Ok(IdealReport { generator: dual.to_vec(), side, dim: image_basis.len(), image_basis })
}

/// Ab: the image in C of MMult with b plugged into the B slot.
pub fn left_ideal(b_dual: &[Q]) -> Result<IdealReport, Error> {
    ideal(b_dual, Factor::B, Side::Left)
}

/// aA: the image in C of MMult with a plugged into the A slot.
pub fn right_ideal(a_dual: &[Q]) -> Result<IdealReport, Error> {
    ideal(a_dual, Factor::A, Side::Right)
}

/// Flattened 2×2 matrix u vᵀ, a rank-one element of the algebra or its dual.
pub fn rank_one_dual(u: &[Q], v: &[Q]) -> Vector {
    vec![&u[0] * &v[0], &u[0] * &v[1], &u[1] * &v[0], &u[1] * &v[1]]
}

// ---------------------------------------------------------------------------
// parametric multiplication matrices

/// The displayed 3×3 matrices of MMult(·, b) in the join arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParametricCase {
    /// J(σ₃,τ₃) with b ⊥ β¹,β²,β³: columns α⁴,α⁵,α⁶, rows c₄,c₅,c₆; x,y,z = β⁴,β⁵,β⁶.
    JoinTau3,
    /// J(σ₂,τ₂,τ₂) with b ⊥ β¹,β²,β³: columns α³,α⁵,α⁶, rows c₃,c₅,c₆; x,y,z = β⁴,β⁵,β⁶.
    JoinTau2Pair,
    /// J(τ₂,τ₂,τ₂) with b ⊥ β¹,β³,β⁵: columns α¹,α³,α⁵, rows c₁,c₃,c₅; x,y,z = β²,β⁴,β⁶.
    JoinTau2Triple,
}

impl ParametricCase {
    pub const ALL: [ParametricCase; 3] = [ParametricCase::JoinTau3, ParametricCase::JoinTau2Pair, ParametricCase::JoinTau2Triple];

    pub fn name(self) -> &'static str {
        match self {
            ParametricCase::JoinTau3 => "join-tau3",
            ParametricCase::JoinTau2Pair => "join-tau2-pair",
            ParametricCase::JoinTau2Triple => "join-tau2-triple",
        }
    }

    /// (monomials of the normal form, β labels carrying x,y,z, column α labels, row c labels)
    pub fn source(self) -> (&'static str, [usize; 3], [usize; 3], [usize; 3]) {
        match self {
            ParametricCase::JoinTau3 => (
                "a1b1c1+a2b2c2+a3b3c3+a4b4c4+(a4b4c5+a4b5c4+a5b4c4)\
                 +(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)",
                [4, 5, 6],
                [4, 5, 6],
                [4, 5, 6],
            ),
            ParametricCase::JoinTau2Pair => (
                "a1b1c1+a2b2c2+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
                [4, 5, 6],
                [3, 5, 6],
                [3, 5, 6],
            ),
            ParametricCase::JoinTau2Triple => (
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)\
                 +a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
                [2, 4, 6],
                [1, 3, 5],
                [1, 3, 5],
            ),
        }
    }
}

impl FromStr for ParametricCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ParametricCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown parametric case {s:?}")))
    }
}

/// The displayed matrix at (x,y,z) and its exact determinant.
pub fn parametric_case_matrix(case: ParametricCase, x: &Q, y: &Q, z: &Q) -> (RationalMatrix, Q) {
    let o = Q::zero;
    let rows = match case {
        ParametricCase::JoinTau3 => vec![
            vec![x + y + z, x + y, x.clone()],
            vec![x + y, x.clone(), o()],
            vec![x.clone(), o(), o()],
        ],
        ParametricCase::JoinTau2Pair => vec![
            vec![x.clone(), o(), o()],
            vec![o(), y + z, y.clone()],
            vec![o(), y.clone(), o()],
        ],
        ParametricCase::JoinTau2Triple => vec![
            vec![x.clone(), o(), o()],
            vec![o(), y.clone(), o()],
            vec![o(), o(), z.clone()],
        ],
    };
    let m = RationalMatrix::from_rows(&rows);
    let det = m.det().expect("square");
    (m, det)
}

/// The same matrix read off a monomial list: entry (row c_k, column α^i) collects
/// coeff·β^j(b) over the monomials a_i b_j c_k, with β values given per label.
pub fn monomial_multiplication_matrix(ms: &[Monomial], beta: &[(usize, Q)], cols: &[usize], rows: &[usize]) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(rows.len(), cols.len());
    for mono in ms {
        let (Some(r), Some(c)) = (rows.iter().position(|&k| k == mono.c), cols.iter().position(|&i| i == mono.a)) else {
            continue;
        };
        if let Some((_, bv)) = beta.iter().find(|(j, _)| *j == mono.b) {
            m[(r, c)] += q(mono.coeff) * bv;
        }
    }
    m
}

/// Matrix of the case derived from the normal-form monomials at (x,y,z).
pub fn derived_case_matrix(case: ParametricCase, x: &Q, y: &Q, z: &Q) -> RationalMatrix {
    let (src, betas, cols, rows) = case.source();
    let ms = parse_monomials(src).expect("built-in source parses");
    let beta = [(betas[0], x.clone()), (betas[1], y.clone()), (betas[2], z.clone())];
    monomial_multiplication_matrix(&ms, &beta, &cols, &rows)
}

// ---------------------------------------------------------------------------
// dependent rank-one tensors

/// Whether some combination Σλᵢ aᵢbᵢᵀ with every λᵢ ≠ 0 has rank one, given independent
/// b's: this happens exactly when the a's span a line.
pub fn rank_one_combination_exists(pairs: &[(Vector, Vector)]) -> Result<bool, Error> {
    let bs: Vec<Vector> = pairs.iter().map(|(_, b)| b.clone()).collect();
    if span_rank(&bs) != bs.len() {
        return Err(Error::Precondition("the b vectors are linearly dependent".into()));
    }
    let as_: Vec<Vector> = pairs.iter().map(|(a, _)| a.clone()).collect();
    Ok(span_rank(&as_) == 1)
}

/// Exhaustive search over λ ∈ {±1,…,±range}^s for a rank-one Σλᵢ aᵢbᵢᵀ.
pub fn rank_one_combination_search(pairs: &[(Vector, Vector)], range: i64) -> bool {
    let values: Vec<i64> = (1..=range).flat_map(|v| [v, -v]).collect();
    let s = pairs.len();
    let (da, db) = (pairs[0].0.len(), pairs[0].1.len());
    let mut idx = vec![0usize; s];
    loop {
        let mut m = RationalMatrix::zeros(da, db);
        for (k, (a, b)) in pairs.iter().enumerate() {
            let l = q(values[idx[k]]);
            for i in 0..da {
                for j in 0..db {
                    m[(i, j)] += &l * &a[i] * &b[j];
                }
            }
        }
        if m.rank() == 1 {
            return true;
        }
        let mut k = 0;
        while k < s {
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == s {
            return false;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomboVerdict {
    pub r: usize,
    /// (a', b', c') sorted ascending.
    pub dims: (usize, usize, usize),
    /// None when the lemma says nothing for this r.
    pub allowed: Option<bool>,
}

/// Dimensions spanned by each factor of r dependent rank-one tensors, and whether the
/// sorted triple is one the lemma allows: r=4 needs a'=1, r=5 needs a'=1 or (2,2,2),
/// r=6 needs a'=1 or c' ≤ 3.
pub fn outcombos_check(points: &[Rank1Term]) -> Result<OutcomboVerdict, Error> {
    let r = points.len();
    let tensors: Vec<Vector> = points.iter().map(|p| p.to_tensor().into_entries()).collect();
    if span_rank(&tensors) == r {
        return Err(Error::Precondition(format!("the {r} points are linearly independent")));
    }
    let dim = |f: fn(&Rank1Term) -> &Vector| span_rank(&points.iter().map(|p| f(p).clone()).collect::<Vec<_>>());
    let mut d = [dim(|p| &p.a), dim(|p| &p.b), dim(|p| &p.c)];
    d.sort_unstable();
    let allowed = match r {
        4 => Some(d[0] == 1),
        5 => Some(d[0] == 1 || d == [2, 2, 2]),
        6 => Some(d[0] == 1 || d[2] <= 3),
        _ => None,
    };
    Ok(OutcomboVerdict { r, dims: (d[0], d[1], d[2]), allowed })
}

/// Whether the points form a circuit: dependent, with every proper subset independent.
pub fn is_circuit(points: &[Rank1Term]) -> bool {
    let tensors: Vec<Vector> = points.iter().map(|p| p.to_tensor().into_entries()).collect();
    let r = tensors.len();
    if span_rank(&tensors) != r - 1 {
        return false;
    }
    (0..r).all(|skip| {
        let sub: Vec<Vector> = tensors.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, t)| t.clone()).collect();
        span_rank(&sub) == r - 1
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsificationSummary {
    pub trials: usize,
    pub degenerate: usize,
    pub counterexamples: usize,
}

/// Rank of a small integer matrix by fraction-free (Bareiss) elimination.
fn int_rank<const N: usize>(rows: &[[i128; N]]) -> usize {
    let mut m: Vec<[i128; N]> = rows.to_vec();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..N {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for c in col + 1..N {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

type IntPoint = ([i64; 2], [i64; 2], [i64; 2]);

fn int_tensor(p: &IntPoint) -> [i128; 8] {
    let mut t = [0i128; 8];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[4 * i + 2 * j + k] = (p.0[i] * p.1[j] * p.2[k]) as i128;
            }
        }
    }
    t
}

fn int_is_circuit(pts: &[IntPoint; 4]) -> bool {
    let t: Vec<[i128; 8]> = pts.iter().map(int_tensor).collect();
    int_rank(&t) == 3 && (0..4).all(|skip| {
        let sub: Vec<[i128; 8]> = (0..4).filter(|&i| i != skip).map(|i| t[i]).collect();
        int_rank(&sub) == 3
    })
}

const QUADRUPLE_POOL: [[i64; 2]; 6] = [[1, 0], [0, 1], [1, 1], [1, -1], [1, 2], [2, 1]];

/// A random quadruple in C²⊗C²⊗C². Each factor vector repeats one already drawn for that
/// factor with probability 1/2, otherwise it is drawn from the pool, so every quadruple
/// over the pool has positive probability.
fn random_quadruple(rng: &mut ChaCha8Rng) -> [IntPoint; 4] {
    let mut pts = [([0i64; 2], [0i64; 2], [0i64; 2]); 4];
    for n in 0..4 {
        let mut draw = |prev: &dyn Fn(usize) -> [i64; 2]| {
            if n > 0 && rng.gen_bool(0.5) {
                prev(rng.gen_range(0..n))
            } else {
                QUADRUPLE_POOL[rng.gen_range(0..QUADRUPLE_POOL.len())]
            }
        };
        let snapshot = pts;
        pts[n].0 = draw(&|m| snapshot[m].0);
        pts[n].1 = draw(&|m| snapshot[m].1);
        pts[n].2 = draw(&|m| snapshot[m].2);
    }
    pts
}

/// Samples random quadruples of rank-one tensors in C²⊗C²⊗C² until `target` circuits have
/// been seen (or `max_trials` is reached) and counts circuits whose sorted factor
/// dimensions have a' ≠ 1. Circuits are screened with integer arithmetic and every
/// circuit is then judged by [`outcombos_check`] over Q.
pub fn outcombos_falsification(seed: u64, target: usize, max_trials: usize) -> FalsificationSummary {
    const BATCH: usize = 4096;
    let mut summary = FalsificationSummary::default();
    let mut start = 0usize;
    while summary.degenerate < target && start < max_trials {
        let end = (start + BATCH).min(max_trials);
        let batch: Vec<(bool, bool)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491).wrapping_add(i as u64));
                let quad = random_quadruple(&mut rng);
                if !int_is_circuit(&quad) {
                    return (false, false);
                }
                let pts: Vec<Rank1Term> =
                    quad.iter().map(|(a, b, c)| Rank1Term::unit(vec_i64(a), vec_i64(b), vec_i64(c))).collect();
                let v = outcombos_check(&pts).expect("circuits are dependent");
                (true, v.allowed != Some(true))
            })
            .collect();
        for (deg, bad) in batch {
            summary.trials += 1;
            if deg && summary.degenerate < target {
                summary.degenerate += 1;
                summary.counterexamples += bad as usize;
            }
        }
        start = end;
    }
    summary
}

// ---------------------------------------------------------------------------
// Strassen's commutator bound

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceBound {
    /// 0 when no invertible slice combination was found.
    pub bound: usize,
    pub n: usize,
    pub commutator_rank: usize,
    pub diagnostic: Option<String>,
}

pub const SLICE_ATTEMPTS: usize = 12;

/// Lower bound n + ⌈rank(T₂T₁⁻¹T₃ − T₃T₁⁻¹T₂)/2⌉ on border rank, from random mixings of
/// the slices along a factor whose complementary factors have equal dimension n.
/// Takes the best over a fixed number of seeded mixings.
pub fn strassen_slice_bound(t: &Tensor3, seed: u64) -> SliceBound {
    let (da, db, dc) = t.dims();
    let perm = if db == dc {
        [Factor::A, Factor::B, Factor::C]
    } else if da == dc {
        [Factor::B, Factor::A, Factor::C]
    } else if da == db {
        [Factor::C, Factor::A, Factor::B]
    } else {
        return SliceBound { bound: 0, n: 0, commutator_rank: 0, diagnostic: Some("no two factors of equal dimension".into()) };
    };
    let t = t.permute_factors(perm);
    let (m, n, _) = t.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<usize> = None;
    for _ in 0..SLICE_ATTEMPTS {
        let mut slices: Vec<RationalMatrix> = (0..3)
            .map(|_| {
                let w: Vector = (0..m).map(|_| q(rng.gen_range(-9..=9))).collect();
                contract(&t, &w, Factor::A).expect("dims")
            })
            .collect();
        let Some(inv) = slices[0].inverse() else { continue };
        let t3 = slices.pop().expect("three slices");
        let t2 = slices.pop().expect("three slices");
        let comm = t2.mul(&inv).mul(&t3).sub(&t3.mul(&inv).mul(&t2));
        let r = comm.rank();
        best = Some(best.map_or(r, |b: usize| b.max(r)));
    }
    match best {
        Some(r) => SliceBound { bound: n + r.div_ceil(2), n, commutator_rank: r, diagnostic: None },
        None => SliceBound {
            bound: 0,
            n,
            commutator_rank: 0,
            diagnostic: Some(format!("no invertible slice combination in {SLICE_ATTEMPTS} attempts")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::basis_vector;
    use num_traits::One;

    #[test]
    fn strassen_sums_to_mmult() {
        let cand = DecompositionCandidate { terms: strassen_terms(), target: mmult_tensor(2) };
        assert!(verify_decomposition(&cand));
    }

    #[test]
    fn empty_candidate_matches_zero() {
        let cand = DecompositionCandidate { terms: vec![], target: Tensor3::zeros((2, 2, 2)) };
        assert!(verify_decomposition(&cand));
    }

    #[test]
    fn perturbing_any_strassen_entry_breaks_it() {
        let base = strassen_terms();
        for t in 0..7 {
            for slot in 0..3 {
                for i in 0..4 {
                    let mut terms = base.clone();
                    let v = match slot {
                        0 => &mut terms[t].a,
                        1 => &mut terms[t].b,
                        _ => &mut terms[t].c,
                    };
                    v[i] += Q::one();
                    assert!(!verify_decomposition(&DecompositionCandidate { terms, target: mmult_tensor(2) }));
                }
            }
            let mut terms = base.clone();
            terms[t].coeff += Q::one();
            assert!(!verify_decomposition(&DecompositionCandidate { terms, target: mmult_tensor(2) }));
        }
    }

    #[test]
    fn identity_generates_everything() {
        let id = vec_i64(&[1, 0, 0, 1]);
        assert_eq!(left_ideal(&id).unwrap().dim, 4);
        assert_eq!(right_ideal(&id).unwrap().dim, 4);
        assert!(left_ideal(&vec_i64(&[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn rank_one_ideals_have_dim_two() {
        let b = rank_one_dual(&vec_i64(&[1, 2]), &vec_i64(&[3, -1]));
        let a = rank_one_dual(&vec_i64(&[2, 1]), &vec_i64(&[1, 1]));
        let l = left_ideal(&b).unwrap();
        let r = right_ideal(&a).unwrap();
        assert_eq!((l.dim, r.dim), (2, 2));
        assert!(!l.same_subspace(&r));
    }

    #[test]
    fn join_tau3_rank_condition() {
        let (m, d) = parametric_case_matrix(ParametricCase::JoinTau3, &q(0), &q(1), &q(1));
        assert_eq!(m.rank(), 2);
        assert!(d.is_zero());
        let (_, d) = parametric_case_matrix(ParametricCase::JoinTau3, &q(2), &q(5), &q(-3));
        assert_eq!(d, q(-8));
    }

    #[test]
    fn diagonal_case_rank_two() {
        let (m, _) = parametric_case_matrix(ParametricCase::JoinTau2Triple, &q(1), &q(1), &q(0));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn derived_matrices_agree_with_display_where_they_should() {
        let (x, y, z) = (q(3), q(-2), q(7));
        for case in [ParametricCase::JoinTau2Pair, ParametricCase::JoinTau2Triple] {
            assert_eq!(derived_case_matrix(case, &x, &y, &z), parametric_case_matrix(case, &x, &y, &z).0);
        }
        // the printed normal form carries a 2 on the II terms, the displayed matrix does not
        let d = derived_case_matrix(ParametricCase::JoinTau3, &x, &y, &z);
        let expected = RationalMatrix::from_rows(&[
            vec![&x + &y + &z, &x + q(2) * &y, x.clone()],
            vec![&x + q(2) * &y, q(2) * &x, q(0)],
            vec![x.clone(), q(0), q(0)],
        ]);
        assert_eq!(d, expected);
        assert_eq!(d.det().unwrap(), q(-2) * &x * &x * &x);
    }

    #[test]
    fn rank_one_combination_small_cases() {
        let e = |i| basis_vector(3, i);
        let a = vec_i64(&[1, 2, 3]);
        assert!(rank_one_combination_exists(&[(a.clone(), e(0)), (a.clone(), e(1))]).unwrap());
        assert!(!rank_one_combination_exists(&[(e(0), e(0)), (e(1), e(1))]).unwrap());
        assert!(rank_one_combination_exists(&[(e(0), e(0)), (e(1), e(0))]).is_err());
        assert!(rank_one_combination_search(&[(a.clone(), e(0)), (a, e(1))], 1));
        assert!(!rank_one_combination_search(&[(e(0), e(0)), (e(1), e(1))], 3));
    }

    #[test]
    fn outcombos_shared_pair() {
        let e = |i| basis_vector(3, i);
        let mut pts: Vec<Rank1Term> = (0..3).map(|i| Rank1Term::unit(e(0), e(0), e(i))).collect();
        pts.push(Rank1Term::unit(e(0), e(0), vec_i64(&[1, 1, 0])));
        let v = outcombos_check(&pts).unwrap();
        assert_eq!(v.dims, (1, 1, 3));
        assert_eq!(v.allowed, Some(true));
        let indep: Vec<Rank1Term> = (0..3).map(|i| Rank1Term::unit(e(i), e(i), e(i))).collect();
        assert!(outcombos_check(&indep).is_err());
    }

    #[test]
    fn slice_bound_of_mmult() {
        let b = strassen_slice_bound(&mmult_tensor(2), 7);
        assert_eq!((b.bound, b.commutator_rank), (6, 4));
    }

    #[test]
    fn slice_bound_reports_rank_one() {
        let mut t = Tensor3::zeros((3, 3, 3));
        t.set(0, 0, 0, Q::one());
        let b = strassen_slice_bound(&t, 1);
        assert_eq!(b.bound, 0);
        assert!(b.diagnostic.is_some());
    }

    #[test]
    fn reduction_display_parses() {
        for id in ReductionCaseId::ALL {
            assert!(parse_monomials(id.display()).is_ok(), "{id}");
        }
    }

    #[test]
    fn small_reductions_verify() {
        for id in ReductionCaseId::ALL {
            let case = ReductionCase::sample(id, 3, (6, 6, 6));
            let w = reduce_to_sigma5(&case).unwrap();
            assert!(w.verified(), "{id}: {:?}", w.limit.vanishing_order);
        }
    }

    #[test]
    fn integer_circuit_screen_agrees_with_rational() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut circuits = 0;
        for _ in 0..3000 {
            let quad = random_quadruple(&mut rng);
            let pts: Vec<Rank1Term> =
                quad.iter().map(|(a, b, c)| Rank1Term::unit(vec_i64(a), vec_i64(b), vec_i64(c))).collect();
            let exact = is_circuit(&pts);
            assert_eq!(int_is_circuit(&quad), exact);
            circuits += exact as usize;
            let t: Vec<[i128; 8]> = quad.iter().map(int_tensor).collect();
            let rows: Vec<Vector> = pts.iter().map(|p| p.to_tensor().into_entries()).collect();
            assert_eq!(int_rank(&t), span_rank(&rows));
        }
        assert!(circuits > 0);
    }
}

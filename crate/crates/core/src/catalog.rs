//! The sixteen components of σ₆(Seg(PA×PB×PC)) minus σ₅: printed normal forms,
//! random instances, and six-curve witnesses whose limit plane contains the point.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rational::{frac, q, Q};
use crate::segre::{CurveJet, ProductCurve, SegrePoint};
use crate::tensor::{vec_scale, Tensor3, Vector};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum ComponentId {
    S6_0,
    J_S4_T2,
    J_S3_T3,
    J_T3_T3,
    J_S2_T2_T2,
    J_T2_T2_T2,
    J_S2_T4,
    J_T2_T4,
    J_X_T2_T3,
    J_X_T5,
    J_X_T5P,
    T6,
    T6P,
    T6PP,
    EX1,
    EX2,
}

impl ComponentId {
    pub const ALL: [ComponentId; 16] = [
        ComponentId::S6_0,
        ComponentId::J_S4_T2,
        ComponentId::J_S3_T3,
        ComponentId::J_T3_T3,
        ComponentId::J_S2_T2_T2,
        ComponentId::J_T2_T2_T2,
        ComponentId::J_S2_T4,
        ComponentId::J_T2_T4,
        ComponentId::J_X_T2_T3,
        ComponentId::J_X_T5,
        ComponentId::J_X_T5P,
        ComponentId::T6,
        ComponentId::T6P,
        ComponentId::T6PP,
        ComponentId::EX1,
        ComponentId::EX2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentId::S6_0 => "S6_0",
            ComponentId::J_S4_T2 => "J_S4_T2",
            ComponentId::J_S3_T3 => "J_S3_T3",
            ComponentId::J_T3_T3 => "J_T3_T3",
            ComponentId::J_S2_T2_T2 => "J_S2_T2_T2",
            ComponentId::J_T2_T2_T2 => "J_T2_T2_T2",
            ComponentId::J_S2_T4 => "J_S2_T4",
            ComponentId::J_T2_T4 => "J_T2_T4",
            ComponentId::J_X_T2_T3 => "J_X_T2_T3",
            ComponentId::J_X_T5 => "J_X_T5",
            ComponentId::J_X_T5P => "J_X_T5P",
            ComponentId::T6 => "T6",
            ComponentId::T6P => "T6P",
            ComponentId::T6PP => "T6PP",
            ComponentId::EX1 => "EX1",
            ComponentId::EX2 => "EX2",
        }
    }

    /// Human-readable variety name.
    pub fn variety(self) -> &'static str {
        match self {
            ComponentId::S6_0 => "σ₆⁰(X)",
            ComponentId::J_S4_T2 => "J(σ₄(X),τ₂(X))",
            ComponentId::J_S3_T3 => "J(σ₃(X),τ₃(X))",
            ComponentId::J_T3_T3 => "J(τ₃(X),τ₃(X))",
            ComponentId::J_S2_T2_T2 => "J(σ₂(X),τ₂(X),τ₂(X))",
            ComponentId::J_T2_T2_T2 => "J(τ₂(X),τ₂(X),τ₂(X))",
            ComponentId::J_S2_T4 => "J(σ₂(X),τ₄(X))",
            ComponentId::J_T2_T4 => "J(τ₂(X),τ₄(X))",
            ComponentId::J_X_T2_T3 => "J(X,τ₂(X),τ₃(X))",
            ComponentId::J_X_T5 => "J(X,τ₅(X))",
            ComponentId::J_X_T5P => "J(X,τ₅(X)')",
            ComponentId::T6 => "τ₆(X)",
            ComponentId::T6P => "τ₆(X)'",
            ComponentId::T6PP => "τ₆(X)''",
            ComponentId::EX1 => "EX₁",
            ComponentId::EX2 => "EX₂",
        }
    }

    fn formula(self) -> &'static str {
        match self {
            ComponentId::S6_0 => "a1b1c1+a2b2c2+a3b3c3+a4b4c4+a5b5c5+a6b6c6",
            ComponentId::J_S4_T2 => "a1b1c1+a2b2c2+a3b3c3+a4b4c4+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)",
            ComponentId::J_S3_T3 => {
                "a1b1c1+a2b2c2+a3b3c3+a4b4c4+(a4b4c5+a4b5c4+a5b4c4)\
                 +[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]"
            }
            ComponentId::J_T3_T3 => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]\
                 +a4b4c4+(a4b4c5+a4b5c4+a5b4c4)+[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]"
            }
            ComponentId::J_S2_T2_T2 => {
                "a1b1c1+a2b2c2+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)+a5b5c5+(a5b5c6+a5b6c5+a6b5c5)"
            }
            ComponentId::J_T2_T2_T2 => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)\
                 +a5b5c5+(a5b5c6+a5b6c5+a6b5c5)"
            }
            ComponentId::J_S2_T4 => {
                "a1b1c1+a2b2c2+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)\
                 +[(a3b3c5+a3b5c3+a5b3c3)+2(a3b4c4+a4b3c4+a4b4c3)]\
                 +[(a3b3c6+a3b6c3+a6b3c3)+6a4b4c4+(a3b4c5+a3b5c4+a4b3c5+a5b3c4+a4b5c3+a5b4c3)]"
            }
            ComponentId::J_T2_T4 => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)+a3b3c3+(a3b3c4+a3b4c3+a4b3c3)\
                 +[(a3b3c5+a3b5c3+a5b3c3)+2(a3b4c4+a4b3c4+a4b4c3)]\
                 +[(a3b3c6+a3b6c3+a6b3c3)+6a4b4c4+(a3b4c5+a3b5c4+a4b3c5+a5b3c4+a4b5c3+a5b4c3)]"
            }
            ComponentId::J_X_T2_T3 => {
                "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)+a4b4c4+(a4b4c5+a4b5c4+a5b4c4)\
                 +[(a4b4c6+a4b6c4+a6b4c4)+2(a4b5c5+a5b4c5+a5b5c4)]"
            }
            ComponentId::J_X_T5 => {
                "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)\
                 +[(a2b2c4+a2b4c2+a4b2c2)+2(a2b3c3+a3b2c3+a3b3c2)]\
                 +[(a2b2c5+a2b5c2+a5b2c2)+6a3b3c3+(a2b3c4+a2b4c3+a3b2c4+a4b2c3+a3b4c2+a4b3c2)]\
                 +[(a2b2c6+a2b6c2+a6b2c2)+2(a4b3c3+a3b4c3+a3b3c4)\
                 +(a2b3c5+a2b5c3+a3b2c5+a5b2c3+a3b5c2+a5b3c2)+2(a2b4c4+a4b2c4+a4b4c2)]"
            }
            ComponentId::J_X_T5P => {
                "a1b1c1+a2b2c2+(a2b2c3+a2b3c2+a3b2c2)\
                 +[(a2b2c4+a2b4c2+a4b2c2)+2(a2b3c3+a3b2c3+a3b3c2)]\
                 +(a2b2c5+a2b5c2+a5b2c2)\
                 +[(a2b2c6+a2b6c2+a6b2c2)+2(a2b5c5+a5b2c5+a5b5c2)]"
            }
            ComponentId::T6 => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)\
                 +[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]\
                 +[(a1b1c5+a1b5c1+a5b1c1)+2(a2b2c3+a2b3c2+a3b2c2)\
                 +(a1b2c4+a1b4c2+a2b1c4+a4b1c2+a2b4c1+a4b2c1)+2(a1b3c3+a3b1c3+a3b3c1)]\
                 +[(a1b1c6+a1b6c1+a6b1c1)+2(a2b2c4+a2b4c2+a4b2c2)+2(a2b3c3+a3b2c3+a3b3c2)\
                 +(a1b2c5+a1b5c2+a2b1c5+a5b1c2+a2b5c1+a5b2c1)\
                 +(a1b3c4+a1b4c3+a3b1c4+a4b1c3+a3b4c1+a4b3c1)]"
            }
            ComponentId::T6P => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)\
                 +[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]\
                 +(a1b1c5+a1b5c1+a5b1c1)\
                 +[(a1b1c6+a1b6c1+a6b1c1)+2(a1b5c5+a5b1c5+a5b5c1)]"
            }
            ComponentId::T6PP => {
                "a1b1c1+(a1b1c2+a1b2c1+a2b1c1)\
                 +[(a1b1c3+a1b3c1+a3b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+6a2b2c2+(a1b2c3+a1b3c2+a2b1c3+a3b1c2+a2b3c1+a3b2c1)]\
                 +[(a1b1c5+a1b5c1+a5b1c1)+2(a1b2c2+a2b1c2+a2b2c1)]\
                 +[(a1b1c6+a1b6c1+a6b1c1)+6a2b2c2+(a1b2c5+a1b5c2+a2b1c5+a5b1c2+a2b5c1+a5b2c1)]"
            }
            ComponentId::EX1 => {
                "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)]\
                 +[(a1b1c4)+(a1b3c2+a3b1c2)]\
                 +[(a1b1c5+a1b5c1+a5b1c1)+(a1b3c3+a3b1c3+a3b3c1)]\
                 +((a1b1c2))+((a1b1c4+a1b3c2+a3b1c2))\
                 +[(a7b1c2+a1b7c2+a1b1c7)+(a1b3c4+a3b1c4+a3b3c2)]"
            }
            ComponentId::EX2 => {
                "a1b1c1+(a1b1c2)+[(a1b1c3+a1b3c1+a3b1c1)]\
                 +[(a1b1c4+a1b4c1+a4b1c1)+(a1b3c2+a3b1c2)]\
                 +((a1b1c2))+(a1b1c5+a1b5c2+a5b1c2)\
                 +[(a1b1c6+a1b6c2+a6b1c2)+2(a1b5c5+a5b1c5+a5b5c2)]"
            }
        }
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComponentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ComponentId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown component {s:?}")))
    }
}

/// A monomial coeff·a_i b_j c_k with 1-based vector labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: i64,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// Parses sums like `a1b1c1+2(a1b2c2+[a2b1c2])` into monomials, distributing integer
/// multipliers over groups. Brackets of either kind only group.
pub fn parse_monomials(s: &str) -> Result<Vec<Monomial>, Error> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let out = parse_sum(&chars, &mut pos, 1)?;
    if pos != chars.len() {
        return Err(Error::Parse(format!("trailing input at {pos} in {s:?}")));
    }
    Ok(out)
}

fn parse_sum(s: &[char], pos: &mut usize, mult: i64) -> Result<Vec<Monomial>, Error> {
    let mut out = parse_term(s, pos, mult)?;
    while *pos < s.len() && s[*pos] == '+' {
        *pos += 1;
        out.extend(parse_term(s, pos, mult)?);
    }
    Ok(out)
}

fn parse_int(s: &[char], pos: &mut usize) -> Option<i64> {
    let start = *pos;
    while *pos < s.len() && s[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        None
    } else {
        s[start..*pos].iter().collect::<String>().parse().ok()
    }
}

fn parse_term(s: &[char], pos: &mut usize, mult: i64) -> Result<Vec<Monomial>, Error> {
    let m = mult * parse_int(s, pos).unwrap_or(1);
    let err = |p: usize| Error::Parse(format!("unexpected input at {p}"));
    match s.get(*pos) {
        Some('(') | Some('[') => {
            let close = if s[*pos] == '(' { ')' } else { ']' };
            *pos += 1;
            let inner = parse_sum(s, pos, m)?;
            if s.get(*pos) != Some(&close) {
                return Err(err(*pos));
            }
            *pos += 1;
            Ok(inner)
        }
        Some('a') => {
            let mut idx = [0usize; 3];
            for (n, letter) in ['a', 'b', 'c'].into_iter().enumerate() {
                if s.get(*pos) != Some(&letter) {
                    return Err(err(*pos));
                }
                *pos += 1;
                idx[n] = parse_int(s, pos).ok_or_else(|| err(*pos))? as usize;
            }
            Ok(vec![Monomial { coeff: m, a: idx[0], b: idx[1], c: idx[2] }])
        }
        _ => Err(err(*pos)),
    }
}

/// Free vectors a₁..a₇, b₁..b₇, c₁..c₇ (stored 0-based) instantiating a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpec {
    pub id: ComponentId,
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
    pub c: Vec<Vector>,
}

pub const SPEC_VECTORS: usize = 7;

impl ComponentSpec {
    pub fn new(id: ComponentId, a: Vec<Vector>, b: Vec<Vector>, c: Vec<Vector>) -> Result<Self, Error> {
        if a.len() != SPEC_VECTORS || b.len() != SPEC_VECTORS || c.len() != SPEC_VECTORS {
            return Err(Error::Dimension(format!("a component spec needs {SPEC_VECTORS} vectors per factor")));
        }
        let d = (a[0].len(), b[0].len(), c[0].len());
        if a.iter().any(|v| v.len() != d.0) || b.iter().any(|v| v.len() != d.1) || c.iter().any(|v| v.len() != d.2) {
            return Err(Error::Dimension("vectors of unequal length within a factor".into()));
        }
        Ok(ComponentSpec { id, a, b, c })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a[0].len(), self.b[0].len(), self.c[0].len())
    }

    pub fn point(&self, i: usize) -> Result<SegrePoint, Error> {
        SegrePoint::new(self.a[i - 1].clone(), self.b[i - 1].clone(), self.c[i - 1].clone())
    }

    /// Returns a copy with the labelled vectors zeroed in all three factors.
    pub fn with_zeroed(&self, labels: &[usize]) -> ComponentSpec {
        let mut s = self.clone();
        for &l in labels {
            for f in [&mut s.a, &mut s.b, &mut s.c] {
                let n = f[l - 1].len();
                f[l - 1] = vec![Q::zero(); n];
            }
        }
        s
    }
}

pub fn monomials_tensor(ms: &[Monomial], a: &[Vector], b: &[Vector], c: &[Vector]) -> Result<Tensor3, Error> {
    let dims = (a[0].len(), b[0].len(), c[0].len());
    let mut t = Tensor3::zeros(dims);
    for m in ms {
        fn get(f: &[Vector], i: usize) -> Result<&Vector, Error> {
            f.get(i.wrapping_sub(1)).ok_or_else(|| Error::Dimension(format!("vector label {i} out of range")))
        }
        t.add_outer(&q(m.coeff), get(a, m.a)?, get(b, m.b)?, get(c, m.c)?);
    }
    Ok(t)
}

/// The printed sum of monomials for the component, constants included.
pub fn normal_form(spec: &ComponentSpec) -> Result<Tensor3, Error> {
    let ms = parse_monomials(spec.id.formula())?;
    monomials_tensor(&ms, &spec.a, &spec.b, &spec.c)
}

pub fn normal_form_monomials(id: ComponentId) -> Vec<Monomial> {
    parse_monomials(id.formula()).expect("built-in formula parses")
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    (0..dim).map(|_| q(rng.gen_range(-9..=9))).collect()
}

/// Deterministic instance with entries uniform in [−9, 9].
pub fn sample(id: ComponentId, seed: u64, dims: (usize, usize, usize)) -> Result<(ComponentSpec, Tensor3), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((id as u64) << 48));
    let a = (0..SPEC_VECTORS).map(|_| random_vector(&mut rng, dims.0)).collect();
    let b = (0..SPEC_VECTORS).map(|_| random_vector(&mut rng, dims.1)).collect();
    let c = (0..SPEC_VECTORS).map(|_| random_vector(&mut rng, dims.2)).collect();
    let spec = ComponentSpec::new(id, a, b, c)?;
    let t = normal_form(&spec)?;
    Ok((spec, t))
}

/// Reparametrization speeds for the curves of one osculating group; k curves
/// t ↦ C(λt) with distinct λ limit to the span of the first k Taylor coefficients.
pub const SPEEDS: [i64; 6] = [0, 1, -1, 2, -2, 3];

/// θ[i][j]: coefficient of t^i/i! on y_j along the chain curve of a τ_k group, with
/// the matching weights μ_m such that the printed block equals Σ_m μ_m·(d/dt)^m C(0)
/// (μ₀ = 1). Index 0 unused.
struct Chain {
    theta: &'static [&'static [(i64, i64)]],
    mu: &'static [(i64, i64)],
}

const CHAINS: [Chain; 5] = [
    Chain { theta: &[&[], &[(1, 1)]], mu: &[(1, 1), (1, 1)] },
    Chain { theta: &[&[], &[(1, 1)], &[(0, 1), (1, 1)]], mu: &[(1, 1), (1, 1), (1, 1)] },
    Chain {
        theta: &[&[], &[(1, 1)], &[(-2, 3), (1, 3)], &[(0, 1), (0, 1), (1, 1)]],
        mu: &[(1, 1), (3, 1), (3, 1), (1, 1)],
    },
    Chain {
        theta: &[
            &[],
            &[(1, 1)],
            &[(4, 3), (2, 1)],
            &[(-22, 3), (-7, 1), (3, 1)],
            &[(0, 1), (0, 1), (0, 1), (12, 1)],
        ],
        mu: &[(1, 1), (11, 9), (5, 3), (1, 3), (1, 12)],
    },
    Chain {
        theta: &[
            &[],
            &[(1, 1)],
            &[(-1, 2), (1, 1)],
            &[(9, 8), (0, 1), (3, 2)],
            &[(-39, 8), (-21, 4), (-3, 2), (3, 1)],
            &[(0, 1), (0, 1), (0, 1), (0, 1), (15, 1)],
        ],
        mu: &[(1, 1), (23, 8), (11, 4), (1, 1), (1, 3), (1, 15)],
    },
];

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Weights μ₀..μ_{k−1} of the τ_k chain (k = ys + 1).
pub fn chain_weights(k: usize) -> Vec<Q> {
    CHAINS[k - 2].mu.iter().map(|&(n, d)| frac(n, d)).collect()
}

/// Product curve through `base` whose derivatives at 0 combine to the τ_k block
/// base + Σ_m x_m built from `ys` (k = ys.len() + 1 ≤ 6).
pub fn chain_curve(base: &SegrePoint, ys: &[(Vector, Vector, Vector)]) -> ProductCurve {
    let k = ys.len() + 1;
    assert!((2..=6).contains(&k), "chains exist for τ₂..τ₆");
    let theta = CHAINS[k - 2].theta;
    let mut a = vec![base.a.clone()];
    let mut b = vec![base.b.clone()];
    let mut c = vec![base.c.clone()];
    for (i, row) in theta.iter().enumerate().skip(1) {
        let mut ai = vec![Q::zero(); base.a.len()];
        let mut bi = vec![Q::zero(); base.b.len()];
        let mut ci = vec![Q::zero(); base.c.len()];
        for (j, &(n, d)) in row.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let s = frac(n, d * factorial(i));
            let (al, be, ga) = &ys[j];
            ai = crate::tensor::vec_add(&ai, &vec_scale(&s, al));
            bi = crate::tensor::vec_add(&bi, &vec_scale(&s, be));
            ci = crate::tensor::vec_add(&ci, &vec_scale(&s, ga));
        }
        a.push(ai);
        b.push(bi);
        c.push(ci);
    }
    ProductCurve::new(a, b, c)
}

/// Jet order used for witness curves: past every coefficient the limit needs.
pub const WITNESS_ORDER: usize = 16;

pub(crate) fn speeds(curve: &ProductCurve, lambdas: &[i64]) -> Vec<CurveJet> {
    lambdas.iter().map(|&l| curve.reparam(&q(l)).jet(WITNESS_ORDER)).collect()
}

pub(crate) fn poly(vs: &[Option<&Vector>], dim: usize) -> Vec<Vector> {
    vs.iter().map(|v| v.cloned().unwrap_or_else(|| vec![Q::zero(); dim])).collect()
}

/// Six curve jets whose limiting 6-plane contains `normal_form(spec)`.
pub fn witness_curves(spec: &ComponentSpec) -> Result<Vec<CurveJet>, Error> {
    use ComponentId::*;
    let y = |i: usize| (spec.a[i - 1].clone(), spec.b[i - 1].clone(), spec.c[i - 1].clone());
    let constant = |i: usize| -> Result<CurveJet, Error> { Ok(ProductCurve::constant(&spec.point(i)?).jet(WITNESS_ORDER)) };
    let group = |base: usize, ys: &[usize], n: usize| -> Result<Vec<CurveJet>, Error> {
        let ys: Vec<_> = ys.iter().map(|&i| y(i)).collect();
        Ok(speeds(&chain_curve(&spec.point(base)?, &ys), &SPEEDS[..n]))
    };
    let mut out = Vec::with_capacity(6);
    match spec.id {
        S6_0 => {
            for i in 1..=6 {
                out.push(constant(i)?);
            }
        }
        J_S4_T2 => {
            for i in 1..=4 {
                out.push(constant(i)?);
            }
            out.extend(group(5, &[6], 2)?);
        }
        J_S3_T3 => {
            for i in 1..=3 {
                out.push(constant(i)?);
            }
            out.extend(group(4, &[5, 6], 3)?);
        }
        J_T3_T3 => {
            out.extend(group(1, &[2, 3], 3)?);
            out.extend(group(4, &[5, 6], 3)?);
        }
        J_S2_T2_T2 => {
            out.push(constant(1)?);
            out.push(constant(2)?);
            out.extend(group(3, &[4], 2)?);
            out.extend(group(5, &[6], 2)?);
        }
        J_T2_T2_T2 => {
            out.extend(group(1, &[2], 2)?);
            out.extend(group(3, &[4], 2)?);
            out.extend(group(5, &[6], 2)?);
        }
        J_S2_T4 => {
            out.push(constant(1)?);
            out.push(constant(2)?);
            out.extend(group(3, &[4, 5, 6], 4)?);
        }
        J_T2_T4 => {
            out.extend(group(1, &[2], 2)?);
            out.extend(group(3, &[4, 5, 6], 4)?);
        }
        J_X_T2_T3 => {
            out.push(constant(1)?);
            out.extend(group(2, &[3], 2)?);
            out.extend(group(4, &[5, 6], 3)?);
        }
        J_X_T5 => {
            out.push(constant(1)?);
            out.extend(group(2, &[3, 4, 5, 6], 5)?);
        }
        J_X_T5P => {
            // two τ₃ chains through one point, each contributing ±t speeds
            out.push(constant(1)?);
            out.push(constant(2)?);
            let p = spec.point(2)?;
            out.extend(speeds(&chain_curve(&p, &[y(3), y(4)]), &[1, -1]));
            out.extend(speeds(&chain_curve(&p, &[y(5), y(6)]), &[1, -1]));
        }
        T6 => out.extend(group(1, &[2, 3, 4, 5, 6], 6)?),
        T6P => {
            let p = spec.point(1)?;
            out.extend(speeds(&chain_curve(&p, &[y(2), y(3), y(4)]), &SPEEDS[..4]));
            out.extend(speeds(&chain_curve(&p, &[y(5), y(6)]), &[1, -1]));
        }
        T6PP => {
            // the second chain shares y₁, so it only adds its second and third terms
            let p = spec.point(1)?;
            out.extend(speeds(&chain_curve(&p, &[y(2), y(3), y(4)]), &SPEEDS[..4]));
            out.extend(speeds(&chain_curve(&p, &[y(2), y(5), y(6)]), &[1, -1]));
        }
        EX1 => {
            let (a, b, c) = (&spec.a, &spec.b, &spec.c);
            let (da, db, dc) = spec.dims();
            let p = ProductCurve::new(
                poly(&[Some(&a[0]), None, Some(&a[2]), None, Some(&a[4])], da),
                poly(&[Some(&b[0]), None, Some(&b[2]), None, Some(&b[4])], db),
                poly(&[Some(&c[0]), Some(&c[1]), Some(&c[2]), Some(&c[3]), Some(&c[4])], dc),
            );
            out.extend(speeds(&p, &SPEEDS[..5]));
            // q = a₁b₁c₂ moving along s ↦ (a₁+sa₃+s²a₇)(b₁+sb₃+s²b₇)(c₂+sc₄+s²c₇) with
            // s = 4t²/5; the speeds 0,±1,±2 satisfy λ⁵ = 5λ³ − 4λ, which the factor
            // 4/5 matches so the t⁵ terms cancel against the t⁴ row
            let qc = ProductCurve::new(
                vec![a[0].clone(), a[2].clone(), a[6].clone()],
                vec![b[0].clone(), b[2].clone(), b[6].clone()],
                vec![c[1].clone(), c[3].clone(), c[6].clone()],
            );
            out.push(qc.substitute(&frac(4, 5), 2).jet(WITNESS_ORDER));
        }
        EX2 => {
            let (a, b, c) = (&spec.a, &spec.b, &spec.c);
            let (da, db, dc) = spec.dims();
            let p = ProductCurve::new(
                poly(&[Some(&a[0]), None, Some(&a[2]), Some(&a[3])], da),
                poly(&[Some(&b[0]), None, Some(&b[2]), Some(&b[3])], db),
                poly(&[Some(&c[0]), Some(&c[1]), Some(&c[2]), Some(&c[3])], dc),
            );
            out.extend(speeds(&p, &SPEEDS[..4]));
            let half = frac(1, 2);
            let qc = ProductCurve::new(
                vec![a[0].clone(), a[4].clone(), vec_scale(&half, &a[5])],
                vec![b[0].clone(), b[4].clone(), vec_scale(&half, &b[5])],
                vec![c[1].clone(), c[4].clone(), vec_scale(&half, &c[5])],
            );
            out.extend(speeds(&qc, &[1, -1]));
        }
    }
    debug_assert_eq!(out.len(), 6);
    if out.iter().any(|j| j.coefficients[0].is_zero()) {
        return Err(Error::Degenerate("witness curve through the zero tensor".into()));
    }
    Ok(out)
}


/// The "new" vectors whose removal drops a component into σ₅: the highest labels used.
pub fn top_labels(id: ComponentId) -> &'static [usize] {
    match id {
        ComponentId::EX1 => &[7],
        _ => &[6],
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_distributes() {
        let ms = parse_monomials("a1b1c1+2(a1b2c2+[a2b1c2])+((a3b3c3))").unwrap();
        assert_eq!(ms.len(), 4);
        assert_eq!(ms[1], Monomial { coeff: 2, a: 1, b: 2, c: 2 });
        assert_eq!(ms[2].coeff, 2);
        assert_eq!(ms[3].coeff, 1);
        assert!(parse_monomials("a1b1").is_err());
        assert!(parse_monomials("a1b1c1+(a2b2c2").is_err());
    }

    #[test]
    fn all_formulas_parse() {
        for id in ComponentId::ALL {
            let ms = normal_form_monomials(id);
            assert!(ms.iter().all(|m| (1..=7).contains(&m.a) && (1..=7).contains(&m.b) && (1..=7).contains(&m.c)));
        }
        assert_eq!(normal_form_monomials(ComponentId::S6_0).len(), 6);
    }

    #[test]
    fn names_roundtrip() {
        for id in ComponentId::ALL {
            assert_eq!(id.name().parse::<ComponentId>().unwrap(), id);
        }
    }
}

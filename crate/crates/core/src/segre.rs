//! Fundamental forms of the Segre variety, curve jets, and limits of spans of curves.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{dependency, in_span, independent_subset};
use crate::rational::Q;
use crate::tensor::{is_zero_vec, vec_add, vec_scale, Tensor3, Vector};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegrePoint {
    pub a: Vector,
    pub b: Vector,
    pub c: Vector,
}

impl SegrePoint {
    pub fn new(a: Vector, b: Vector, c: Vector) -> Result<Self, Error> {
        if is_zero_vec(&a) || is_zero_vec(&b) || is_zero_vec(&c) {
            return Err(Error::Degenerate("Segre point with a zero factor".into()));
        }
        Ok(SegrePoint { a, b, c })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.len(), self.b.len(), self.c.len())
    }

    pub fn tensor(&self) -> Tensor3 {
        let mut t = Tensor3::zeros(self.dims());
        t.add_outer(&Q::one(), &self.a, &self.b, &self.c);
        t
    }

    /// Tangent direction (α,β,γ) at this point.
    pub fn tangent(&self, alpha: Vector, beta: Vector, gamma: Vector) -> TangentData {
        TangentData { base: self.clone(), alpha, beta, gamma }
    }

    pub fn zero_tangent(&self) -> TangentData {
        let (da, db, dc) = self.dims();
        self.tangent(vec![Q::zero(); da], vec![Q::zero(); db], vec![Q::zero(); dc])
    }
}

/// A tangent vector a₁b₁γ + a₁βc₁ + αb₁c₁ at `base`, kept as its three components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentData {
    pub base: SegrePoint,
    pub alpha: Vector,
    pub beta: Vector,
    pub gamma: Vector,
}

impl TangentData {
    pub fn tensor(&self) -> Tensor3 {
        let p = &self.base;
        let mut t = Tensor3::zeros(p.dims());
        let one = Q::one();
        t.add_outer(&one, &p.a, &p.b, &self.gamma);
        t.add_outer(&one, &p.a, &self.beta, &p.c);
        t.add_outer(&one, &self.alpha, &p.b, &p.c);
        t
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.alpha) && is_zero_vec(&self.beta) && is_zero_vec(&self.gamma)
    }

    pub fn scaled(&self, s: &Q) -> TangentData {
        TangentData {
            base: self.base.clone(),
            alpha: vec_scale(s, &self.alpha),
            beta: vec_scale(s, &self.beta),
            gamma: vec_scale(s, &self.gamma),
        }
    }

    pub fn plus(&self, o: &TangentData) -> TangentData {
        TangentData {
            base: self.base.clone(),
            alpha: vec_add(&self.alpha, &o.alpha),
            beta: vec_add(&self.beta, &o.beta),
            gamma: vec_add(&self.gamma, &o.gamma),
        }
    }
}

fn same_base(ts: &[&TangentData]) -> Result<(), Error> {
    if ts.windows(2).all(|w| w[0].base == w[1].base) {
        Ok(())
    } else {
        Err(Error::Dimension("tangent data at different base points".into()))
    }
}

/// II(v,w) = a₁b₂c₃+a₁b₃c₂+a₂b₁c₃+a₃b₁c₂+a₂b₃c₁+a₃b₂c₁ with v=(a₂,b₂,c₂), w=(a₃,b₃,c₃).
pub fn second_fundamental_form(v: &TangentData, w: &TangentData) -> Result<Tensor3, Error> {
    same_base(&[v, w])?;
    let p = &v.base;
    let one = Q::one();
    let mut t = Tensor3::zeros(p.dims());
    t.add_outer(&one, &p.a, &v.beta, &w.gamma);
    t.add_outer(&one, &p.a, &w.beta, &v.gamma);
    t.add_outer(&one, &v.alpha, &p.b, &w.gamma);
    t.add_outer(&one, &w.alpha, &p.b, &v.gamma);
    t.add_outer(&one, &v.alpha, &w.beta, &p.c);
    t.add_outer(&one, &w.alpha, &v.beta, &p.c);
    Ok(t)
}

/// III(u,v,w): the a-component of one argument times the b- and c-components of
/// the other two, summed over the six assignments.
pub fn third_fundamental_form(u: &TangentData, v: &TangentData, w: &TangentData) -> Result<Tensor3, Error> {
    same_base(&[u, v, w])?;
    let one = Q::one();
    let mut t = Tensor3::zeros(u.base.dims());
    for (x, y, z) in [(u, v, w), (u, w, v), (v, u, w), (v, w, u), (w, u, v), (w, v, u)] {
        t.add_outer(&one, &x.alpha, &y.beta, &z.gamma);
    }
    Ok(t)
}

/// How the terms of the partition sum are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JetConvention {
    /// Every multiset of indices counted once with weight 1. These are the block
    /// shapes of the printed normal forms.
    Lemma,
    /// Multisets weighted by 1/∏(multiplicity)!. These are the honest Taylor
    /// coefficients of a product curve whose factor series have coefficients y_j.
    Taylor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveJet {
    pub order: usize,
    pub coefficients: Vec<Tensor3>,
}

impl CurveJet {
    pub fn new(coefficients: Vec<Tensor3>) -> Result<Self, Error> {
        let Some(first) = coefficients.first() else {
            return Err(Error::Dimension("curve jet needs at least x0".into()));
        };
        let d = first.dims();
        if coefficients.iter().any(|c| c.dims() != d) {
            return Err(Error::Dimension("jet coefficients with different dims".into()));
        }
        Ok(CurveJet { order: coefficients.len() - 1, coefficients })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.coefficients[0].dims()
    }

    pub fn truncate(&self, order: usize) -> CurveJet {
        let coefficients: Vec<Tensor3> = self.coefficients.iter().take(order + 1).cloned().collect();
        CurveJet { order: coefficients.len() - 1, coefficients }
    }
}

/// Multisets of {1..=k} with the given weight and 1 to 3 elements, sorted ascending.
fn weighted_multisets(weight: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 1..=k.min(weight) {
        if i == weight {
            out.push(vec![i]);
        }
        for j in i..=k {
            if i + j == weight {
                out.push(vec![i, j]);
            }
            for l in j..=k {
                if i + j + l == weight {
                    out.push(vec![i, j, l]);
                }
            }
        }
    }
    out
}

fn multiset_weight(m: &[usize], conv: JetConvention) -> Q {
    match conv {
        JetConvention::Lemma => Q::one(),
        JetConvention::Taylor => {
            let mut d = 1i64;
            let mut run = 1i64;
            for w in m.windows(2) {
                if w[0] == w[1] {
                    run += 1;
                    d *= run;
                } else {
                    run = 1;
                }
            }
            crate::rational::frac(1, d)
        }
    }
}

fn fundamental_term(ys: &[TangentData], m: &[usize]) -> Result<Tensor3, Error> {
    match m {
        [i] => Ok(ys[i - 1].tensor()),
        [i, j] => second_fundamental_form(&ys[i - 1], &ys[j - 1]),
        [i, j, l] => third_fundamental_form(&ys[i - 1], &ys[j - 1], &ys[l - 1]),
        _ => unreachable!(),
    }
}

/// x_m = Σ over multisets λ of weight m of w(λ)·F_{|λ|}(y_λ), with F₁(y)=y, F₂=II,
/// F₃=III and no higher forms on the Segre.
pub fn curve_jet(base: &SegrePoint, ys: &[TangentData], k: usize, conv: JetConvention) -> Result<CurveJet, Error> {
    if ys.len() != k {
        return Err(Error::Dimension(format!("{} tangent data for a jet of order {k}", ys.len())));
    }
    if ys.iter().any(|y| &y.base != base) {
        return Err(Error::Dimension("tangent data not based at the jet's base point".into()));
    }
    let mut coefficients = vec![base.tensor()];
    for m in 1..=k {
        let mut x = Tensor3::zeros(base.dims());
        for ms in weighted_multisets(m, k) {
            x.add_scaled(&multiset_weight(&ms, conv), &fundamental_term(ys, &ms)?);
        }
        coefficients.push(x);
    }
    Ok(CurveJet { order: k, coefficients })
}

/// Splits a tensor lying in the tangent space at `base` into (α,β,γ), using the
/// splitting where α and β vanish at the first nonzero coordinate of a₁ and b₁.
pub fn tangent_components(base: &SegrePoint, t: &Tensor3) -> Option<TangentData> {
    let ia = base.a.iter().position(|x| !x.is_zero())?;
    let ib = base.b.iter().position(|x| !x.is_zero())?;
    let kc = base.c.iter().position(|x| !x.is_zero())?;
    let (da, db, dc) = base.dims();
    // with α[ia] = β[ib] = 0 the (ia,ib) fiber is a₁[ia]b₁[ib]γ
    let s = &base.a[ia] * &base.b[ib];
    let gamma: Vector = (0..dc).map(|k| t.get(ia, ib, k) / &s).collect();
    let sa = &base.a[ia] * &base.c[kc];
    let beta: Vector = (0..db)
        .map(|j| (t.get(ia, j, kc) - &base.a[ia] * &base.b[j] * &gamma[kc]) / &sa)
        .collect();
    let sb = &base.b[ib] * &base.c[kc];
    let alpha: Vector = (0..da)
        .map(|i| (t.get(i, ib, kc) - &base.a[i] * &base.b[ib] * &gamma[kc]) / &sb)
        .collect();
    let td = base.tangent(alpha, beta, gamma);
    if &td.tensor() == t {
        Some(td)
    } else {
        None
    }
}

/// Recovers y₁..y_k from a jet of a curve through `jet.coefficients[0]`, inverting
/// `curve_jet` under the given convention. Fails if some residual is not tangent.
pub fn extract_tangent_data(base: &SegrePoint, jet: &CurveJet, conv: JetConvention) -> Result<Vec<TangentData>, Error> {
    if jet.coefficients[0] != base.tensor() {
        return Err(Error::Dimension("jet does not start at the base point".into()));
    }
    let k = jet.order;
    let mut ys: Vec<TangentData> = Vec::with_capacity(k);
    for m in 1..=k {
        let mut r = jet.coefficients[m].clone();
        for ms in weighted_multisets(m, k) {
            if ms.len() == 1 {
                continue;
            }
            r = r.sub(&fundamental_term(&ys, &ms)?.scaled(&multiset_weight(&ms, conv)));
        }
        let y = tangent_components(base, &r)
            .ok_or_else(|| Error::Degenerate(format!("residual of order {m} is not a tangent vector")))?;
        ys.push(y);
    }
    Ok(ys)
}

/// Sum of the jet coefficients, a point of the osculating variety.
pub fn tangential_point(jet: &CurveJet) -> Tensor3 {
    let mut t = Tensor3::zeros(jet.dims());
    for c in &jet.coefficients {
        t.add_assign(c);
    }
    t
}

/// Curve t ↦ a(t)⊗b(t)⊗c(t) with polynomial factors given by coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCurve {
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
    pub c: Vec<Vector>,
}

fn poly_subst(p: &[Vector], s: &Q, e: usize) -> Vec<Vector> {
    if p.is_empty() {
        return vec![];
    }
    let dim = p[0].len();
    let mut out = vec![vec![Q::zero(); dim]; (p.len() - 1) * e + 1];
    let mut sp = Q::one();
    for (i, v) in p.iter().enumerate() {
        out[i * e] = vec_scale(&sp, v);
        sp *= s;
    }
    out
}

impl ProductCurve {
    pub fn new(a: Vec<Vector>, b: Vec<Vector>, c: Vec<Vector>) -> Self {
        ProductCurve { a, b, c }
    }

    pub fn constant(p: &SegrePoint) -> Self {
        ProductCurve { a: vec![p.a.clone()], b: vec![p.b.clone()], c: vec![p.c.clone()] }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a[0].len(), self.b[0].len(), self.c[0].len())
    }

    pub fn base(&self) -> SegrePoint {
        SegrePoint { a: self.a[0].clone(), b: self.b[0].clone(), c: self.c[0].clone() }
    }

    /// The curve t ↦ self(s·t^e).
    pub fn substitute(&self, s: &Q, e: usize) -> ProductCurve {
        ProductCurve { a: poly_subst(&self.a, s, e), b: poly_subst(&self.b, s, e), c: poly_subst(&self.c, s, e) }
    }

    pub fn reparam(&self, s: &Q) -> ProductCurve {
        self.substitute(s, 1)
    }

    pub fn coefficient(&self, m: usize) -> Tensor3 {
        let mut t = Tensor3::zeros(self.dims());
        let one = Q::one();
        for i in 0..self.a.len().min(m + 1) {
            for j in 0..self.b.len().min(m + 1 - i) {
                let l = m - i - j;
                if l < self.c.len() {
                    t.add_outer(&one, &self.a[i], &self.b[j], &self.c[l]);
                }
            }
        }
        t
    }

    pub fn degree(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len() - 3
    }

    pub fn jet(&self, order: usize) -> CurveJet {
        CurveJet { order, coefficients: (0..=order).map(|m| self.coefficient(m)).collect() }
    }

    pub fn eval(&self, t: &Q) -> Tensor3 {
        let ev = |p: &[Vector]| {
            let mut acc = vec![Q::zero(); p[0].len()];
            let mut tp = Q::one();
            for v in p {
                acc = vec_add(&acc, &vec_scale(&tp, v));
                tp *= t;
            }
            acc
        };
        let mut out = Tensor3::zeros(self.dims());
        out.add_outer(&Q::one(), &ev(&self.a), &ev(&self.b), &ev(&self.c));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitPlaneResult {
    pub vanishing_order: usize,
    pub plane_basis: Vec<Tensor3>,
    pub degenerate: bool,
}

/// Lowest nonvanishing term of x₁(t)∧…∧x_r(t) and the limiting r-plane.
///
/// Works on the K[[t]]-module spanned by the curves: while the constant terms are
/// dependent, a dependency λ replaces a row j with λ_j ≠ 0 by Σλ_i x_i, which is then
/// divisible by t. Each replacement multiplies the wedge by λ_j and each division
/// removes one factor of t, so the number of divisions is the vanishing order and the
/// final constant terms span the limit plane. Coefficients past a jet's order are
/// unknown; a row that runs out of known coefficients makes the result degenerate.
pub fn wedge_taylor_first_term(curves: &[CurveJet]) -> Result<LimitPlaneResult, Error> {
    let Some(first) = curves.first() else {
        return Ok(LimitPlaneResult { vanishing_order: 0, plane_basis: vec![], degenerate: false });
    };
    let dims = first.dims();
    if curves.iter().any(|c| c.dims() != dims) {
        return Err(Error::Dimension("curves in different ambient spaces".into()));
    }
    let budget: usize = curves.iter().map(|c| c.order).sum();
    let mut rows: Vec<Vec<Vector>> = curves
        .iter()
        .map(|c| c.coefficients.iter().map(|x| x.entries().to_vec()).collect())
        .collect();
    let mut order = 0usize;
    let finish = |rows: &[Vec<Vector>], order: usize, degenerate: bool| {
        let lead: Vec<Vector> = rows.iter().filter_map(|r| r.first().cloned()).collect();
        let plane_basis = independent_subset(&lead)
            .into_iter()
            .map(|v| Tensor3::from_entries(dims, v).expect("dims"))
            .collect();
        LimitPlaneResult { vanishing_order: order, plane_basis, degenerate }
    };
    loop {
        if rows.iter().any(|r| r.is_empty()) {
            return Ok(finish(&rows, order, true));
        }
        let lead: Vec<Vector> = rows.iter().map(|r| r[0].clone()).collect();
        let Some(lambda) = dependency(&lead) else {
            return Ok(finish(&rows, order, false));
        };
        if order == budget {
            return Ok(finish(&rows, order, true));
        }
        let support: Vec<usize> = (0..rows.len()).filter(|&i| !lambda[i].is_zero()).collect();
        let j = *support.iter().max_by_key(|&&i| (rows[i].len(), i)).expect("nonzero dependency");
        let prec = support.iter().map(|&i| rows[i].len()).min().expect("support");
        let width = rows[j][0].len();
        let mut combo = vec![vec![Q::zero(); width]; prec];
        for &i in &support {
            for (m, coef) in rows[i].iter().take(prec).enumerate() {
                for (acc, x) in combo[m].iter_mut().zip(coef) {
                    if !x.is_zero() {
                        *acc += &lambda[i] * x;
                    }
                }
            }
        }
        debug_assert!(is_zero_vec(&combo[0]));
        combo.remove(0);
        rows[j] = combo;
        order += 1;
    }
}

pub fn plane_contains(result: &LimitPlaneResult, p: &Tensor3) -> bool {
    let basis: Vec<Vector> = result.plane_basis.iter().map(|t| t.entries().to_vec()).collect();
    in_span(&basis, p.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{basis_vector, vec_i64};

    fn e(n: usize, i: usize) -> Vector {
        basis_vector(n, i)
    }

    #[test]
    fn multisets_by_weight() {
        assert_eq!(weighted_multisets(3, 3), vec![vec![1, 1, 1], vec![1, 2], vec![3]]);
        assert_eq!(weighted_multisets(4, 4).len(), 4);
        assert_eq!(multiset_weight(&[1, 1, 2], JetConvention::Taylor), crate::rational::frac(1, 2));
        assert_eq!(multiset_weight(&[2, 2, 2], JetConvention::Taylor), crate::rational::frac(1, 6));
    }

    #[test]
    fn second_form_single_monomial() {
        let p = SegrePoint::new(e(3, 0), e(3, 0), e(3, 0)).unwrap();
        let z = vec![Q::zero(); 3];
        let v = p.tangent(e(3, 1), z.clone(), z.clone());
        let w = p.tangent(z.clone(), e(3, 2), z.clone());
        let mut expect = Tensor3::zeros((3, 3, 3));
        expect.set(1, 2, 0, Q::one());
        assert_eq!(second_fundamental_form(&v, &w).unwrap(), expect);
    }

    #[test]
    fn third_form_single_monomial() {
        let p = SegrePoint::new(e(4, 0), e(4, 0), e(4, 0)).unwrap();
        let z = vec![Q::zero(); 4];
        let u = p.tangent(e(4, 3), z.clone(), z.clone());
        let v = p.tangent(z.clone(), e(4, 1), z.clone());
        let w = p.tangent(z.clone(), z.clone(), e(4, 2));
        let mut expect = Tensor3::zeros((4, 4, 4));
        expect.set(3, 1, 2, Q::one());
        assert_eq!(third_fundamental_form(&u, &v, &w).unwrap(), expect);
        assert!(third_fundamental_form(&u, &u, &u).unwrap().is_zero());
    }

    #[test]
    fn mismatched_bases_rejected() {
        let p = SegrePoint::new(e(2, 0), e(2, 0), e(2, 0)).unwrap();
        let q = SegrePoint::new(e(2, 1), e(2, 0), e(2, 0)).unwrap();
        assert!(second_fundamental_form(&p.zero_tangent(), &q.zero_tangent()).is_err());
    }

    #[test]
    fn low_order_jets() {
        let p = SegrePoint::new(e(3, 0), e(3, 0), e(3, 0)).unwrap();
        let y1 = p.tangent(vec_i64(&[0, 1, 2]), vec_i64(&[0, -1, 1]), vec_i64(&[3, 0, 1]));
        let y2 = p.tangent(vec_i64(&[0, 2, 0]), vec_i64(&[0, 0, 5]), vec_i64(&[1, 1, 1]));
        let j1 = curve_jet(&p, &[y1.clone()], 1, JetConvention::Lemma).unwrap();
        assert_eq!(j1.coefficients[1], y1.tensor());
        let j2 = curve_jet(&p, &[y1.clone(), y2.clone()], 2, JetConvention::Lemma).unwrap();
        let mut x2 = second_fundamental_form(&y1, &y1).unwrap();
        x2.add_assign(&y2.tensor());
        assert_eq!(j2.coefficients[2], x2);
        assert_eq!(tangential_point(&j2.truncate(0)), p.tensor());
    }

    #[test]
    fn constant_curves_span() {
        let curves: Vec<CurveJet> = (0..3)
            .map(|i| ProductCurve::constant(&SegrePoint::new(e(3, i), e(3, i), e(3, i)).unwrap()).jet(2))
            .collect();
        let r = wedge_taylor_first_term(&curves).unwrap();
        assert_eq!(r.vanishing_order, 0);
        assert!(!r.degenerate);
        assert_eq!(r.plane_basis.len(), 3);
    }

    #[test]
    fn tangent_line_limit() {
        let x = ProductCurve::constant(&SegrePoint::new(e(2, 0), e(2, 0), e(2, 0)).unwrap());
        let line = vec![e(2, 0), e(2, 1)];
        let y = ProductCurve::new(line.clone(), line.clone(), line);
        let r = wedge_taylor_first_term(&[x.jet(3), y.jet(3)]).unwrap();
        assert_eq!(r.vanishing_order, 1);
        assert!(plane_contains(&r, &crate::tensor::w_tensor()));
    }
}

use mmult7::certify::{left_ideal, rank_one_dual, right_ideal, strassen_slice_bound};
use mmult7::linalg::{same_span, RationalMatrix};
use mmult7::rational::q;
use mmult7::segre::{
    curve_jet, extract_tangent_data, second_fundamental_form, third_fundamental_form, wedge_taylor_first_term,
    CurveJet, JetConvention, ProductCurve, SegrePoint, TangentData,
};
use mmult7::tensor::{
    contract, flattening, mmult_tensor, multilinear_rank, tensor_from_terms, vec_add, vec_scale, Factor, Rank1Term,
    Tensor3, Vector,
};
use mmult7::Q;
use proptest::prelude::*;

fn small(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|v| v.into_iter().map(q).collect())
}

fn nonzero(dim: usize) -> impl Strategy<Value = Vector> {
    small(dim).prop_filter("nonzero", |v| v.iter().any(|x| *x != q(0)))
}

fn term(dims: (usize, usize, usize)) -> impl Strategy<Value = Rank1Term> {
    (-3i64..=3, small(dims.0), small(dims.1), small(dims.2)).prop_map(|(s, a, b, c)| Rank1Term::new(q(s), a, b, c))
}

fn tensor_of_rank(dims: (usize, usize, usize), max_terms: usize) -> impl Strategy<Value = (Vec<Rank1Term>, Tensor3)> {
    prop::collection::vec(term(dims), 1..=max_terms).prop_map(move |ts| {
        let t = tensor_from_terms(&ts, dims).unwrap();
        (ts, t)
    })
}

fn invertible(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| RationalMatrix::from_i64(n, n, &v))
        .prop_filter("invertible", move |m| m.rank() == n)
}

fn point(dims: (usize, usize, usize)) -> impl Strategy<Value = SegrePoint> {
    (nonzero(dims.0), nonzero(dims.1), nonzero(dims.2)).prop_map(|(a, b, c)| SegrePoint::new(a, b, c).unwrap())
}

fn tangents(p: &SegrePoint, k: usize) -> impl Strategy<Value = Vec<TangentData>> {
    let (da, db, dc) = p.dims();
    let p = p.clone();
    prop::collection::vec((small(da), small(db), small(dc)), k)
        .prop_map(move |v| v.into_iter().map(|(a, b, c)| p.tangent(a, b, c)).collect())
}

const D: (usize, usize, usize) = (3, 3, 2);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sum_of_terms_is_additive((t1, x1) in tensor_of_rank(D, 3), (t2, x2) in tensor_of_rank(D, 3)) {
        let mut all = t1.clone();
        all.extend(t2);
        let mut sum = x1.clone();
        sum.add_assign(&x2);
        prop_assert_eq!(tensor_from_terms(&all, D).unwrap(), sum);
    }

    #[test]
    fn flattening_ranks_bounded((ts, x) in tensor_of_rank(D, 4)) {
        let (ra, rb, rc) = multilinear_rank(&x);
        prop_assert!(ra <= D.0 && rb <= D.1 && rc <= D.2);
        prop_assert!(ra <= rb * rc && rb <= ra * rc && rc <= ra * rb);
        for r in [ra, rb, rc] {
            prop_assert!(r <= ts.len());
        }
        prop_assert_eq!(flattening(&x, Factor::A).rank(), ra);
    }

    #[test]
    fn multilinear_rank_basis_invariant(
        (_, x) in tensor_of_rank(D, 4),
        ga in invertible(D.0), gb in invertible(D.1), gc in invertible(D.2),
    ) {
        prop_assert_eq!(multilinear_rank(&x.change_basis(&ga, &gb, &gc)), multilinear_rank(&x));
    }

    #[test]
    fn contraction_is_linear((_, x) in tensor_of_rank(D, 3), u in small(D.1), v in small(D.1), s in -3i64..=3) {
        let lhs = contract(&x, &vec_add(&u, &vec_scale(&q(s), &v)), Factor::B).unwrap();
        let rhs = contract(&x, &u, Factor::B).unwrap().add(&contract(&x, &v, Factor::B).unwrap().scale(&q(s)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fundamental_forms_symmetric(ys in point(D).prop_flat_map(|p| tangents(&p, 3))) {
        let (u, v, w) = (&ys[0], &ys[1], &ys[2]);
        prop_assert_eq!(second_fundamental_form(u, v).unwrap(), second_fundamental_form(v, u).unwrap());
        let t = third_fundamental_form(u, v, w).unwrap();
        for (x, y, z) in [(v, u, w), (w, v, u), (u, w, v), (v, w, u), (w, u, v)] {
            prop_assert_eq!(&third_fundamental_form(x, y, z).unwrap(), &t);
        }
    }

    #[test]
    fn taylor_jet_matches_product_curve(p in point(D), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut v = |n: usize| -> Vector { (0..n).map(|_| q(rng.gen_range(-3..=3))).collect() };
        let ys: Vec<TangentData> = (0..3).map(|_| p.tangent(v(D.0), v(D.1), v(D.2))).collect();
        let jet = curve_jet(&p, &ys, 3, JetConvention::Taylor).unwrap();
        let series = |f: fn(&TangentData) -> &Vector, base: &Vector| -> Vec<Vector> {
            std::iter::once(base.clone()).chain(ys.iter().map(|y| f(y).clone())).collect()
        };
        let curve = ProductCurve::new(series(|y| &y.alpha, &p.a), series(|y| &y.beta, &p.b), series(|y| &y.gamma, &p.c));
        prop_assert_eq!(curve.jet(3), jet.clone());
        let back = extract_tangent_data(&p, &jet, JetConvention::Taylor).unwrap();
        prop_assert_eq!(curve_jet(&p, &back, 3, JetConvention::Taylor).unwrap(), jet);
    }

    #[test]
    fn normalized_data_recovered_exactly(p in point(D), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut v = |n: usize| -> Vector { (0..n).map(|_| q(rng.gen_range(-3..=3))).collect() };
        let ia = p.a.iter().position(|x| *x != q(0)).unwrap();
        let ib = p.b.iter().position(|x| *x != q(0)).unwrap();
        let ys: Vec<TangentData> = (0..3)
            .map(|_| {
                let (mut a, mut b) = (v(D.0), v(D.1));
                a[ia] = q(0);
                b[ib] = q(0);
                p.tangent(a, b, v(D.2))
            })
            .collect();
        for conv in [JetConvention::Lemma, JetConvention::Taylor] {
            let jet = curve_jet(&p, &ys, 3, conv).unwrap();
            prop_assert_eq!(&extract_tangent_data(&p, &jet, conv).unwrap(), &ys);
        }
    }

    #[test]
    fn limit_plane_ignores_scaling_and_speed(
        p in point((2, 2, 2)), r in point((2, 2, 2)),
        da in small(2), db in small(2), s in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
    ) {
        let moving = ProductCurve::new(vec![p.a.clone(), da], vec![p.b.clone(), db], vec![p.c.clone()]);
        let curves = vec![ProductCurve::constant(&p).jet(3), moving.jet(3), ProductCurve::constant(&r).jet(3)];
        let base = wedge_taylor_first_term(&curves).unwrap();
        let scaled = vec![
            curves[0].clone(),
            scaled_jet(&moving.reparam(&q(s)).jet(3), &q(s)),
            scaled_jet(&curves[2], &q(-s)),
        ];
        let other = wedge_taylor_first_term(&scaled).unwrap();
        prop_assert_eq!(other.vanishing_order, base.vanishing_order);
        prop_assert_eq!(other.degenerate, base.degenerate);
        let flat = |b: &[Tensor3]| b.iter().map(|t| t.entries().to_vec()).collect::<Vec<Vec<Q>>>();
        prop_assert!(same_span(&flat(&other.plane_basis), &flat(&base.plane_basis)));
    }

    #[test]
    fn ideal_dimensions(m in small(4).prop_filter("nonzero", |v| v.iter().any(|x| *x != q(0)))) {
        let rank = RationalMatrix::from_vec(2, 2, m.clone()).unwrap().rank();
        let left = left_ideal(&m).unwrap();
        let right = right_ideal(&m).unwrap();
        prop_assert!(left.dim == 2 || left.dim == 4);
        prop_assert_eq!(left.dim == 2, rank == 1);
        prop_assert_eq!(right.dim == 2, rank == 1);
    }

    #[test]
    fn rank_one_ideals_distinct(u in nonzero(2), v in nonzero(2)) {
        let d = rank_one_dual(&u, &v);
        let left = left_ideal(&d).unwrap();
        let right = right_ideal(&d).unwrap();
        prop_assert_eq!(left.dim, 2);
        prop_assert!(!left.same_subspace(&right));
    }
}

fn scaled_jet(j: &CurveJet, s: &Q) -> CurveJet {
    CurveJet::new(j.coefficients.iter().map(|c| c.scaled(s)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn slice_bound_basis_invariant(ga in invertible(4), gb in invertible(4), gc in invertible(4)) {
        let x = mmult_tensor(2).change_basis(&ga, &gb, &gc);
        let b = strassen_slice_bound(&x, 5);
        prop_assert_eq!(b.bound, 6);
        prop_assert_eq!(b.commutator_rank, 4);
    }
}

use mmult7::catalog::{normal_form, sample, witness_curves, ComponentId, ComponentSpec};
use mmult7::rational::q;
use mmult7::segre::{plane_contains, wedge_taylor_first_term};
use mmult7::tensor::{basis_vector, multilinear_rank, vec_add};

/// Generic multilinear rank at dims (7,7,7), and after zeroing a₆, b₆, c₆. Sampled at
/// seeds 0..3, frozen.
const GENERIC: [(&str, usize, usize); 16] = [
    ("S6_0", 6, 5),
    ("J_S4_T2", 6, 5),
    ("J_S3_T3", 6, 5),
    ("J_T3_T3", 6, 5),
    ("J_S2_T2_T2", 6, 5),
    ("J_T2_T2_T2", 6, 5),
    ("J_S2_T4", 6, 5),
    ("J_T2_T4", 6, 5),
    ("J_X_T2_T3", 6, 5),
    ("J_X_T5", 6, 5),
    ("J_X_T5P", 5, 5),
    ("T6", 6, 5),
    ("T6P", 5, 5),
    ("T6PP", 4, 4),
    ("EX1", 4, 4),
    ("EX2", 4, 4),
];

#[test]
fn generic_multilinear_ranks() {
    for (name, full, dropped) in GENERIC {
        let id: ComponentId = name.parse().unwrap();
        for seed in 0..3 {
            let (mut spec, x) = sample(id, seed, (7, 7, 7)).unwrap();
            assert_eq!(multilinear_rank(&x), (full, full, full), "{name} seed {seed}");
            assert_eq!(multilinear_rank(&sample(id, seed, (4, 4, 4)).unwrap().1), (4, 4, 4), "{name}");
            for f in [&mut spec.a, &mut spec.b, &mut spec.c] {
                f[5] = vec![q(0); 7];
            }
            let y = normal_form(&spec).unwrap();
            assert_eq!(multilinear_rank(&y), (dropped, dropped, dropped), "{name} seed {seed}");
        }
    }
    assert_eq!(GENERIC.len(), ComponentId::ALL.len());
}

#[test]
fn sampling_is_deterministic() {
    for id in ComponentId::ALL {
        assert_eq!(sample(id, 9, (4, 5, 6)).unwrap(), sample(id, 9, (4, 5, 6)).unwrap());
    }
}

#[test]
fn diagonal_s6_0() {
    let e: Vec<_> = (0..7).map(|i| basis_vector(6, i.min(5))).collect();
    let spec = ComponentSpec::new(ComponentId::S6_0, e.clone(), e.clone(), e).unwrap();
    let x = normal_form(&spec).unwrap();
    assert_eq!(multilinear_rank(&x), (6, 6, 6));
    assert_eq!(x.nonzero_count(), 6);
}

#[test]
fn wrong_vector_count_rejected() {
    let e: Vec<_> = (0..6).map(|i| basis_vector(6, i)).collect();
    assert!(ComponentSpec::new(ComponentId::T6, e.clone(), e.clone(), e).is_err());
}

#[test]
fn s6_0_linear_in_a1() {
    let (spec, x) = sample(ComponentId::S6_0, 2, (4, 4, 4)).unwrap();
    let (other, _) = sample(ComponentId::S6_0, 3, (4, 4, 4)).unwrap();
    let mut moved = spec.clone();
    moved.a[0] = vec_add(&spec.a[0], &other.a[0]);
    let mut only = spec.clone();
    only.a[0] = other.a[0].clone();
    let mut zero = spec.clone();
    zero.a[0] = vec![q(0); 4];
    let lhs = normal_form(&moved).unwrap();
    let mut rhs = x.clone();
    rhs.add_assign(&normal_form(&only).unwrap());
    rhs = rhs.sub(&normal_form(&zero).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn witnesses_in_larger_dims() {
    for id in ComponentId::ALL {
        let (spec, x) = sample(id, 1, (6, 5, 7)).unwrap();
        let limit = wedge_taylor_first_term(&witness_curves(&spec).unwrap()).unwrap();
        assert!(!limit.degenerate, "{}", id.name());
        assert_eq!(limit.plane_basis.len(), 6, "{}", id.name());
        assert!(plane_contains(&limit, &x), "{}", id.name());
    }
}

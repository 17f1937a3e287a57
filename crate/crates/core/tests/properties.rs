use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kcbs_qkd::contextuality::{evaluate_witness, CorrelationTable};
use kcbs_qkd::linalg3::{
    eig_hermitian, kron, partial_trace_second, positive_eigenspace_projector, random_density,
    random_hermitian, Matrix3,
};
use kcbs_qkd::security::{eve_channel, eve_channel_unitary, mutual_information, JointDistribution};
use kcbs_qkd::source::{degrade_correlations, SourceModel};
use kcbs_qkd::{Complex, Tolerances};

fn hermitian() -> impl Strategy<Value = Matrix3<f64>> {
    prop::array::uniform9(-2.0f64..2.0).prop_map(|v| {
        let mut m = Matrix3::zeros();
        m[(0, 0)] = Complex::new(v[0], 0.0);
        m[(1, 1)] = Complex::new(v[1], 0.0);
        m[(2, 2)] = Complex::new(v[2], 0.0);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let c = Complex::new(v[3 + 2 * k], v[4 + 2 * k]);
            m[(i, j)] = c;
            m[(j, i)] = c.conj();
        }
        m
    })
}

fn matrix() -> impl Strategy<Value = Matrix3<f64>> {
    prop::array::uniform18(-1.0f64..1.0).prop_map(|v| {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = Complex::new(v[2 * (3 * i + j)], v[2 * (3 * i + j) + 1]);
            }
        }
        m
    })
}

fn density() -> impl Strategy<Value = Matrix3<f64>> {
    any::<u64>().prop_map(|seed| random_density(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn table() -> impl Strategy<Value = CorrelationTable<f64>> {
    prop::collection::vec(0.0f64..=1.0, 72)
        .prop_map(|v| CorrelationTable::from_fn(|x, y| v[x as usize * 8 + y as usize - 1]))
}

fn joint() -> impl Strategy<Value = JointDistribution<f64>> {
    prop::array::uniform4(0.0f64..1.0)
        .prop_filter("some weight", |w| w.iter().sum::<f64>() > 1e-6)
        .prop_map(|w| JointDistribution::from_weights([[w[0], w[1]], [w[2], w[3]]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigen_reconstruction(h in hermitian()) {
        let e = eig_hermitian(&h, &Tolerances::default()).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
        for i in 0..3 {
            for j in 0..3 {
                let overlap = e.vectors[i].inner(&e.vectors[j]).norm();
                let expected = f64::from(u8::from(i == j));
                prop_assert!((overlap - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kron_mixed_product(a in matrix(), b in matrix(), c in matrix(), d in matrix()) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(a * c), &(b * d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(a in matrix(), b in matrix()) {
        let reduced = partial_trace_second(&kron(&a, &b));
        let mut expect = a;
        let tb = b.trace();
        for i in 0..3 {
            for j in 0..3 {
                expect[(i, j)] = a[(i, j)] * tb;
            }
        }
        prop_assert!(reduced.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn positive_projector_is_idempotent(h in hermitian()) {
        let p = positive_eigenspace_projector(&h, &Tolerances::default());
        prop_assert!((p * p).max_abs_diff(&p) < 1e-10);
        prop_assert!(p.hermiticity_defect() < 1e-12);
        // tr(HP) is the sum of the positive eigenvalues
        let e = eig_hermitian(&h, &Tolerances::default()).unwrap();
        let positive: f64 = e.values.iter().filter(|v| **v > 1e-9).sum();
        prop_assert!((h.trace_product(&p) - positive).abs() < 1e-9);
    }

    #[test]
    fn channel_routes_agree(rho in density(), q in 0.0f64..=1.0) {
        let a = eve_channel(&rho, q).unwrap();
        let b = eve_channel_unitary(&rho, q).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        prop_assert!((a.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_bounds(j in joint()) {
        let i = mutual_information(&j);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&i));
        let swapped_a = JointDistribution::new([j.p[1], j.p[0]]).unwrap();
        let swapped_b = JointDistribution::new(j.p.map(|r| [r[1], r[0]])).unwrap();
        prop_assert!((mutual_information(&swapped_a) - i).abs() < 1e-12);
        prop_assert!((mutual_information(&swapped_b) - i).abs() < 1e-12);
        prop_assert!((mutual_information(&j.transposed()) - i).abs() < 1e-12);
    }

    #[test]
    fn product_joints_carry_nothing(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let j = JointDistribution::product(a, b).unwrap();
        prop_assert!(mutual_information(&j) < 1e-12);
    }

    #[test]
    fn witness_is_affine(t1 in table(), t2 in table(), w in 0.0f64..=1.0) {
        let a = evaluate_witness(&t1).unwrap();
        let b = evaluate_witness(&t2).unwrap();
        let m = evaluate_witness(&t1.mix(&t2, w)).unwrap();
        prop_assert!((m.s1 - ((1.0 - w) * a.s1 + w * b.s1)).abs() < 1e-10);
        prop_assert!((m.s2 - ((1.0 - w) * a.s2 + w * b.s2)).abs() < 1e-10);
        prop_assert!(m.s1 <= 30.0 + 1e-12 && m.s2 <= 5.0 + 1e-12);
    }

    #[test]
    fn degraded_tables_stay_below_single_photon(t in table(), mu in 0.001f64..3.0) {
        let coherent = degrade_correlations(&t, &SourceModel::coherent(mu)).unwrap();
        let more = degrade_correlations(&t, &SourceModel::coherent(mu * 1.5)).unwrap();
        for (x, y, q0) in t.entries() {
            let p = coherent.p0(x, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!(p <= q0 + 1e-12);
            prop_assert!(more.p0(x, y).unwrap() <= p + 1e-12);
        }
    }

    #[test]
    fn dark_counts_keep_probabilities(t in table(), mu in 0.0f64..2.0, d in 0.0f64..0.2) {
        let model = SourceModel::coherent(mu).with_dark_counts(d);
        let out = degrade_correlations(&t, &model).unwrap();
        for (_, _, p) in out.entries() {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}

#[test]
fn thousand_random_hermitian_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let h = random_hermitian::<f64, _>(&mut rng);
        let e = eig_hermitian(&h, &Tolerances::default()).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
    }
}

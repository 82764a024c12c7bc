#![allow(clippy::needless_range_loop)]

//! Property tests for the exact linear algebra and the cone certificates.

use num_traits::Signed;
use proptest::prelude::*;

use dualcone::cone::{
    inner_point_test, verify_negative_cert, verify_positive_cert, ConeModel, InnerPointVerdict,
    PositiveConeComponent, SearchConfig,
};
use dualcone::linalg;
use dualcone::quadform::{QuadraticSpace, SignatureTriple, Subspace};
use dualcone::rat::{is_zero_vec, rat, rat_int, rat_sign, Mat, Rat, Vector};
use dualcone::surface::{blow_down, lift, BlowdownMap};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn symmetric_matrix(dim: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(small_rat(), dim * (dim + 1) / 2).prop_map(move |entries| {
        let mut m = vec![vec![rat_int(0); dim]; dim];
        let mut it = entries.into_iter();
        for i in 0..dim {
            for j in i..dim {
                let v = it.next().unwrap();
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        m
    })
}

/// Product of a unit lower and unit upper triangular matrix: invertible
/// with small integer entries.
fn unimodular(dim: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(-2i64..=2, dim * dim).prop_map(move |entries| {
        let mut lower = linalg::identity(dim);
        let mut upper = linalg::identity(dim);
        let mut it = entries.into_iter();
        for i in 0..dim {
            for j in 0..i {
                lower[i][j] = rat_int(it.next().unwrap());
                upper[j][i] = rat_int(it.next().unwrap());
            }
        }
        linalg::mat_mul(&lower, &upper)
    })
}

fn conjugated_diag(signs: Vec<i64>) -> impl Strategy<Value = QuadraticSpace> {
    let dim = signs.len();
    unimodular(dim).prop_map(move |p| {
        let mut d = vec![vec![rat_int(0); dim]; dim];
        for (i, s) in signs.iter().enumerate() {
            d[i][i] = rat_int(*s);
        }
        let pt = linalg::transpose(&p);
        QuadraticSpace::new(linalg::mat_mul(&linalg::mat_mul(&pt, &d), &p)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonalize_round_trip(dim in 1usize..=8, gram_seed in proptest::collection::vec(small_rat(), 36)) {
        let mut m = vec![vec![rat_int(0); dim]; dim];
        let mut it = gram_seed.into_iter().cycle();
        for i in 0..dim {
            for j in i..dim {
                let v = it.next().unwrap();
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        let space = QuadraticSpace::new_degenerate_allowed(m.clone()).unwrap();
        let (d, p) = space.congruence_diagonalize();
        let pt = linalg::transpose(&p);
        let prod = linalg::mat_mul(&linalg::mat_mul(&pt, &m), &p);
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j { d[i].clone() } else { rat_int(0) };
                prop_assert_eq!(&prod[i][j], &expect);
            }
        }
        prop_assert_eq!(linalg::rank(&p), dim);
    }

    #[test]
    fn signature_is_congruence_invariant(gram in symmetric_matrix(4), p in unimodular(4)) {
        let space = QuadraticSpace::new_degenerate_allowed(gram.clone()).unwrap();
        let pt = linalg::transpose(&p);
        let conj = linalg::mat_mul(&linalg::mat_mul(&pt, &gram), &p);
        let conj_space = QuadraticSpace::new_degenerate_allowed(conj).unwrap();
        prop_assert_eq!(space.signature(), conj_space.signature());
    }

    #[test]
    fn complement_dimension_counts(space in conjugated_diag(vec![1, -1, -1, -1, -1]),
                                   raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..4)) {
        let vs: Vec<Vector> = raw.iter()
            .map(|v| v.iter().map(|&x| rat_int(x)).collect())
            .collect();
        let perp = space.orthogonal_complement(&vs).unwrap();
        prop_assert_eq!(perp.dim() + linalg::rank(&vs), 5);
    }

    #[test]
    fn negative_definite_perp_signature(p_count in 1usize..=2, q_count in 2usize..=4,
                                        seed in proptest::collection::vec(-3i64..=3, 24),
                                        frame in unimodular(6)) {
        let dim = p_count + q_count;
        let frame: Mat = (0..dim).map(|i| frame[i][..dim].to_vec()).collect();
        let mut d = vec![vec![rat_int(0); dim]; dim];
        for i in 0..dim {
            d[i][i] = rat_int(if i < p_count { 1 } else { -1 });
        }
        let pt = linalg::transpose(&frame);
        let gram = linalg::mat_mul(&linalg::mat_mul(&pt, &d), &frame);
        let space = QuadraticSpace::new(gram).unwrap();

        // vectors inside the negative block, pushed through the frame
        let mut it = seed.into_iter().cycle();
        let mut basis: Vec<Vector> = Vec::new();
        for _ in 0..q_count {
            let mut u = vec![rat_int(0); dim];
            for ui in u.iter_mut().skip(p_count) {
                *ui = rat_int(it.next().unwrap());
            }
            if is_zero_vec(&u) {
                continue;
            }
            let x = linalg::solve(&frame, &u).unwrap();
            let mut trial = basis.clone();
            trial.push(x);
            if linalg::rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        prop_assume!(!basis.is_empty());
        let k = basis.len();
        let sub = Subspace::new(dim, basis.clone()).unwrap();
        let restricted = space.restrict_form(&sub).unwrap();
        prop_assert_eq!(restricted.signature(), SignatureTriple { pos: 0, zero: 0, neg: k });

        let perp = space.orthogonal_complement(&basis).unwrap();
        let perp_form = space.restrict_form(&perp).unwrap();
        prop_assert_eq!(perp_form.signature(),
                        SignatureTriple { pos: p_count, zero: 0, neg: q_count - k });
    }

    #[test]
    fn positive_vector_iff_positive_part(gram in symmetric_matrix(4)) {
        let space = QuadraticSpace::new_degenerate_allowed(gram).unwrap();
        let sig = space.signature();
        match space.find_positive_vector() {
            Some(v) => {
                prop_assert!(sig.pos >= 1);
                prop_assert!(space.pairing(&v, &v).unwrap().is_positive());
            }
            None => prop_assert_eq!(sig.pos, 0),
        }
    }

    #[test]
    fn empty_cuts_total_and_certified(space in conjugated_diag(vec![1, -1, -1, -1]),
                                      raw in proptest::collection::vec(-5i64..=5, 4),
                                      lam in (1i64..=6, 1i64..=6)) {
        let kappa = space.find_positive_vector().unwrap();
        let pc = PositiveConeComponent::new(space.clone(), kappa).unwrap();
        let model = ConeModel::new(pc, vec![]).unwrap();
        let x: Vector = raw.iter().map(|&v| rat_int(v)).collect();
        prop_assume!(!is_zero_vec(&x));
        let cfg = SearchConfig::default();

        let verdict = inner_point_test(&model, &x, &cfg).unwrap();
        let in_component = model.component().in_positive_component(&x).unwrap();
        match &verdict {
            InnerPointVerdict::Inner { cert, margin_sq, .. } => {
                prop_assert!(in_component);
                prop_assert!(verify_positive_cert(&model, &x, cert, true));
                if let Some(m) = margin_sq {
                    prop_assert!(m.is_positive());
                }
                // exclusivity: no closure class annihilates an inner point
                let kappa_cert = dualcone::cone::NegativeCert { eta: model.kappa_ref().clone() };
                prop_assert!(!verify_negative_cert(&model, &x, &kappa_cert, false));
            }
            InnerPointVerdict::NotInner { cert } => {
                prop_assert!(!in_component);
                prop_assert!(verify_negative_cert(&model, &x, cert, false));
                // exclusivity: the trivial decomposition cannot certify x
                let trivial = dualcone::cone::PositiveCert {
                    interior: x.clone(),
                    cut_coeffs: vec![],
                };
                prop_assert!(!verify_positive_cert(&model, &x, &trivial, true));
            }
            InnerPointVerdict::Undetermined { .. } => prop_assert!(false, "undetermined on empty cuts"),
        }

        // cone homogeneity: scaling by a positive rational keeps the status
        let scale = rat(lam.0, lam.1);
        let scaled: Vector = x.iter().map(|v| v * &scale).collect();
        let scaled_verdict = inner_point_test(&model, &scaled, &cfg).unwrap();
        prop_assert_eq!(verdict.status_str(), scaled_verdict.status_str());
    }

    #[test]
    fn inner_verdicts_exclude_closure_annihilators(space in conjugated_diag(vec![1, -1, -1]),
                                                   raw in proptest::collection::vec(-5i64..=5, 3)) {
        // an inner point pairs strictly positively with every nonzero
        // closure class; check against the marker and boundary samples
        let kappa = space.find_positive_vector().unwrap();
        let pc = PositiveConeComponent::new(space.clone(), kappa.clone()).unwrap();
        let model = ConeModel::new(pc, vec![]).unwrap();
        let x: Vector = raw.iter().map(|&v| rat_int(v)).collect();
        prop_assume!(!is_zero_vec(&x));
        let verdict = inner_point_test(&model, &x, &SearchConfig::default()).unwrap();
        if verdict.is_inner() {
            prop_assert!(rat_sign(&space.pairing(&x, &kappa).unwrap()) == 1);
        }
    }

    #[test]
    fn blow_down_pairing_compatibility(target in conjugated_diag(vec![1, -1, -1]),
                                       x_raw in proptest::collection::vec(-5i64..=5, 4),
                                       s_raw in proptest::collection::vec(-5i64..=5, 3)) {
        let n = 3usize;
        let mut source_gram = vec![vec![rat_int(0); n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                source_gram[i][j] = target.gram()[i][j].clone();
            }
        }
        source_gram[n][n] = rat_int(-1);
        let source = QuadraticSpace::new(source_gram).unwrap();
        let bd = BlowdownMap::new(source.clone()).unwrap();

        let x: Vector = x_raw.iter().map(|&v| rat_int(v)).collect();
        let s: Vector = s_raw.iter().map(|&v| rat_int(v)).collect();
        let lhs = source.pairing(&x, &lift(&bd, &s).unwrap()).unwrap();
        let rhs = target.pairing(&blow_down(&bd, &x).unwrap(), &s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

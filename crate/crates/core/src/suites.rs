//! Seeded property-suite runners behind the `fuzz` subcommand.
//!
//! Each suite draws its instances from a ChaCha stream, so a fixed seed
//! reproduces a byte-identical summary. Failure counts are exact checks;
//! no floating point reaches a summary.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{
    dual_membership, polyhedral_inner_equivalence, verify_negative_cert,
    verify_positive_cert, ConeModel, DualMembership, InnerPointVerdict, PolyhedralCone,
    PositiveConeComponent, SearchConfig,
};
use crate::decide::cross_validate;
use crate::linalg;
use crate::quadform::QuadraticSpace;
use crate::rat::{
    big_vec_to_rat, euclidean_norm_sq, is_zero_vec, isqrt, primitive_integer_form, rat_int,
    rat_sign, vec_add, vec_scale, Mat, Rat, Vector,
};
use crate::surface::{construct_k3_am, descend_inner_point, BlowdownMap, SurfaceKind, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Polyhedral,
    SelfDual,
    Blowdown,
    Oracle,
}

impl Suite {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "lemma15" | "polyhedral" => Some(Self::Polyhedral),
            "selfdual" => Some(Self::SelfDual),
            "blowdown" => Some(Self::Blowdown),
            "oracle" => Some(Self::Oracle),
            _ => None,
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            Self::Polyhedral => "lemma15",
            Self::SelfDual => "selfdual",
            Self::Blowdown => "blowdown",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSummary {
    pub suite: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub checks: usize,
    pub failures: usize,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "suite={} trials={} seed={} checks={} failures={} result={}",
            self.suite,
            self.trials,
            self.seed,
            self.checks,
            self.failures,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteSummary {
    match suite {
        Suite::Polyhedral => run_polyhedral(trials, seed),
        Suite::SelfDual => run_selfdual(trials, seed),
        Suite::Blowdown => run_blowdown(trials, seed),
        Suite::Oracle => run_oracle(trials, seed),
    }
}

fn int_vec(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vector {
    (0..dim).map(|_| rat_int(rng.random_range(lo..=hi))).collect()
}

fn nonzero_int_vec(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vector {
    loop {
        let v = int_vec(rng, dim, lo, hi);
        if !is_zero_vec(&v) {
            return v;
        }
    }
}

/// Random non-degenerate symmetric form: identity, a signed diagonal, or
/// a unimodular congruence of one.
fn random_form(rng: &mut ChaCha8Rng, dim: usize) -> QuadraticSpace {
    let variant = rng.random_range(0..3u8);
    let diag: Vec<i64> = match variant {
        0 => vec![1; dim],
        _ => (0..dim)
            .map(|_| *[1i64, 2, -1, -2].get(rng.random_range(0..4usize)).unwrap())
            .collect(),
    };
    let mut gram: Mat = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { rat_int(diag[i]) } else { rat_int(0) }).collect())
        .collect();
    if variant == 2 {
        let p = random_unimodular(rng, dim);
        let pt = linalg::transpose(&p);
        gram = linalg::mat_mul(&linalg::mat_mul(&pt, &gram), &p);
    }
    QuadraticSpace::new(gram).expect("constructed form is symmetric and non-degenerate")
}

/// Product of a unit lower and a unit upper triangular matrix with small
/// integer entries; determinant one by construction.
fn random_unimodular(rng: &mut ChaCha8Rng, dim: usize) -> Mat {
    let mut lower = linalg::identity(dim);
    let mut upper = linalg::identity(dim);
    for i in 0..dim {
        for j in 0..i {
            lower[i][j] = rat_int(rng.random_range(-1..=1));
            upper[j][i] = rat_int(rng.random_range(-1..=1));
        }
    }
    linalg::mat_mul(&lower, &upper)
}

/// Lorentzian frame: `G = P^T diag(1,-1,..,-1) P` with the forward
/// marker pulled back through `P`.
fn random_lorentzian_frame(rng: &mut ChaCha8Rng, dim: usize) -> (QuadraticSpace, Vector) {
    let p = random_unimodular(rng, dim);
    let diag: Mat = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { rat_int(if i == 0 { 1 } else { -1 }) } else { rat_int(0) })
                .collect()
        })
        .collect();
    let pt = linalg::transpose(&p);
    let gram = linalg::mat_mul(&linalg::mat_mul(&pt, &diag), &p);
    let space = QuadraticSpace::new(gram).expect("frame form is non-degenerate");
    let mut e1 = vec![Rat::zero(); dim];
    e1[0] = rat_int(1);
    let kappa = linalg::solve(&p, &e1).expect("unimodular frame is invertible");
    (space, kappa)
}

/// Rational forward isotropic ray of the frame: the diagonal-coordinate
/// ray `(|u|^2 + 1, 2u, |u|^2 - 1)` pulled back through `P`.
fn random_isotropic_forward(rng: &mut ChaCha8Rng, p: &Mat, dim: usize) -> Vector {
    let zeta: Vector = if dim == 2 {
        let sign = if rng.random_range(0..2u8) == 0 { 1 } else { -1 };
        vec![rat_int(1), rat_int(sign)]
    } else {
        let u = int_vec(rng, dim - 2, -4, 4);
        let usq = euclidean_norm_sq(&u);
        let mut z = Vec::with_capacity(dim);
        z.push(&usq + rat_int(1));
        for ui in &u {
            z.push(ui * rat_int(2));
        }
        z.push(&usq - rat_int(1));
        z
    };
    linalg::solve(p, &zeta).expect("unimodular frame is invertible")
}

fn run_polyhedral(trials: usize, seed: u64) -> SuiteSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0usize;
    let mut failures = 0usize;
    for _ in 0..trials {
        let dim = rng.random_range(2..=6usize);
        let space = random_form(&mut rng, dim);
        let gen_count = rng.random_range(1..=dim + 2);
        let generators: Vec<Vector> =
            (0..gen_count).map(|_| nonzero_int_vec(&mut rng, dim, -5, 5)).collect();
        let cone = PolyhedralCone::new(space, generators).expect("generators are nonzero");
        let x = int_vec(&mut rng, dim, -5, 5);
        let ball_seed: u64 = rng.random();
        match polyhedral_inner_equivalence(&cone, &x, 8, ball_seed) {
            Ok(report) => {
                checks += 1 + report.ball_trials;
                if !report.equivalence_holds {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    SuiteSummary { suite: Suite::Polyhedral.token(), trials, seed, checks, failures }
}

fn run_selfdual(trials: usize, seed: u64) -> SuiteSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0usize;
    let mut failures = 0usize;
    for _ in 0..trials {
        let dim = rng.random_range(2..=5usize);
        let p = random_unimodular(&mut rng, dim);
        let diag: Mat = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { rat_int(if i == 0 { 1 } else { -1 }) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        let pt = linalg::transpose(&p);
        let gram = linalg::mat_mul(&linalg::mat_mul(&pt, &diag), &p);
        let space = QuadraticSpace::new(gram).expect("frame form is non-degenerate");
        let mut e1 = vec![Rat::zero(); dim];
        e1[0] = rat_int(1);
        let kappa = linalg::solve(&p, &e1).expect("unimodular frame is invertible");
        let component =
            PositiveConeComponent::new(space.clone(), kappa.clone()).expect("marker is forward");
        let model = ConeModel::new(component, vec![]).expect("no cuts to validate");

        let rays: Vec<Vector> =
            (0..6).map(|_| random_isotropic_forward(&mut rng, &p, dim)).collect();
        for ray in &rays {
            checks += 1;
            if !space.pairing(ray, ray).unwrap().is_zero() {
                failures += 1;
            }
        }

        // convex combinations of forward rays stay in the closed cone and
        // pair nonnegatively with every ray
        let mut combo = vec![Rat::zero(); dim];
        for ray in &rays {
            let c = rat_int(rng.random_range(0..=3));
            combo = vec_add(&combo, &vec_scale(&c, ray));
        }
        let t = rat_int(rng.random_range(0..=2));
        combo = vec_add(&combo, &vec_scale(&t, &kappa));
        checks += 1;
        if !model.component().in_closure_positive(&combo).unwrap() {
            failures += 1;
        }
        for ray in &rays {
            checks += 1;
            if rat_sign(&space.pairing(&combo, ray).unwrap()) < 0 {
                failures += 1;
            }
        }

        // dual membership decided by certificates agrees with the closed
        // forward cone membership decided by sign checks
        for _ in 0..6 {
            let x = int_vec(&mut rng, dim, -6, 6);
            let in_closure = model.component().in_closure_positive(&x).unwrap();
            checks += 1;
            match dual_membership(&model, &x).unwrap() {
                DualMembership::Member { cert } => {
                    if !in_closure || !verify_positive_cert(&model, &x, &cert, false) {
                        failures += 1;
                    }
                }
                DualMembership::NotMember { witness } => {
                    if in_closure || !verify_negative_cert(&model, &x, &witness, true) {
                        failures += 1;
                    }
                }
                DualMembership::Undetermined => failures += 1,
            }
        }
    }
    SuiteSummary { suite: Suite::SelfDual.token(), trials, seed, checks, failures }
}

fn run_blowdown(trials: usize, seed: u64) -> SuiteSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SearchConfig::default();
    let mut checks = 0usize;
    let mut failures = 0usize;
    for _ in 0..trials {
        let dim = rng.random_range(3..=5usize);
        let (target_space, target_kappa) = random_lorentzian_frame(&mut rng, dim);

        // optional single cut pairing positively with the marker
        let mut curves = Vec::new();
        if rng.random_range(0..2u8) == 1 {
            for _ in 0..24 {
                let c = nonzero_int_vec(&mut rng, dim, -3, 3);
                if rat_sign(&target_space.pairing(&target_kappa, &c).unwrap()) == 1 {
                    let class: Vec<BigInt> =
                        c.iter().map(|x| x.numer().clone()).collect();
                    curves.push(crate::surface::CurveClass { name: "C1".into(), class });
                    break;
                }
            }
        }
        let target = SurfaceModel {
            kind: SurfaceKind::General,
            space: target_space.clone(),
            kappa_ref: target_kappa.clone(),
            ns_basis: vec![],
            curves: curves.clone(),
        };

        // forward integral class on the target; fall back to a scaled
        // marker when rejection sampling misses the cone
        let mut y: Option<Vector> = None;
        for _ in 0..300 {
            let cand = nonzero_int_vec(&mut rng, dim, -6, 6);
            let sq = target_space.pairing(&cand, &cand).unwrap();
            let ck = target_space.pairing(&cand, &target_kappa).unwrap();
            if rat_sign(&sq) == 1 && rat_sign(&ck) == 1 {
                y = Some(cand);
                break;
            }
        }
        let y = y.unwrap_or_else(|| {
            let (_, prim) = primitive_integer_form(&target_kappa).expect("marker is nonzero");
            big_vec_to_rat(&prim)
        });

        // lift with an exceptional coefficient small enough to keep the
        // square positive
        let ysq = target_space.pairing(&y, &y).unwrap();
        let amax = isqrt(&(ysq.numer() - 1u8)).to_i64().unwrap_or(0).min(6);
        let a = if amax > 0 { rng.random_range(-amax..=amax) } else { 0 };
        let mut x = y.clone();
        x.push(rat_int(a));

        let n1 = dim + 1;
        let mut source_gram = vec![vec![Rat::zero(); n1]; n1];
        for i in 0..dim {
            for j in 0..dim {
                source_gram[i][j] = target_space.gram()[i][j].clone();
            }
        }
        source_gram[dim][dim] = rat_int(-1);
        let source_space = QuadraticSpace::new(source_gram).expect("block form is non-degenerate");
        let bd = BlowdownMap::new(source_space.clone()).expect("block structure holds");
        let mut source_kappa = target_kappa.clone();
        source_kappa.push(Rat::zero());
        let source_curves = curves
            .iter()
            .map(|c| {
                let mut class = c.class.clone();
                class.push(BigInt::zero());
                crate::surface::CurveClass { name: c.name.clone(), class }
            })
            .collect();
        let source = SurfaceModel {
            kind: SurfaceKind::General,
            space: source_space,
            kappa_ref: source_kappa,
            ns_basis: vec![],
            curves: source_curves,
        };

        checks += 1;
        match descend_inner_point(&bd, &source, &target, &x, &cfg) {
            Ok(InnerPointVerdict::Inner { cert, .. }) => {
                let target_cone = target.cone_model().expect("target model is consistent");
                if !verify_positive_cert(&target_cone, &y, &cert, true) {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    SuiteSummary { suite: Suite::Blowdown.token(), trials, seed, checks, failures }
}

fn run_oracle(trials: usize, seed: u64) -> SuiteSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SearchConfig::default();
    let mut checks = 0usize;
    let mut failures = 0usize;
    for _ in 0..trials {
        let model = random_oracle_model(&mut rng);
        checks += 1;
        match cross_validate(&model, &cfg) {
            Ok(report) => {
                if !report.agrees {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    SuiteSummary { suite: Suite::Oracle.token(), trials, seed, checks, failures }
}

fn random_oracle_model(rng: &mut ChaCha8Rng) -> SurfaceModel {
    match rng.random_range(0..4u8) {
        0 => {
            let m = rng.random_range(0..=19usize);
            construct_k3_am(m).expect("chain length in range")
        }
        1 => {
            // rank-one polarized K3-kind model
            let two_d = 2 * rng.random_range(1..=6i64);
            let mut entries = [-1i64; 20];
            entries[0] = two_d;
            let gram: Mat = (0..20)
                .map(|i| {
                    (0..20)
                        .map(|j| if i == j { rat_int(entries[i]) } else { rat_int(0) })
                        .collect()
                })
                .collect();
            let mut h = vec![BigInt::zero(); 20];
            h[0] = BigInt::from(1);
            let mut kappa = vec![Rat::zero(); 20];
            kappa[0] = rat_int(1);
            SurfaceModel {
                kind: SurfaceKind::K3,
                space: QuadraticSpace::new(gram).unwrap(),
                kappa_ref: kappa,
                ns_basis: vec![h],
                curves: vec![],
            }
        }
        2 => {
            // chain model widened by the forward hyperbolic-block class
            let m = rng.random_range(1..=6usize);
            let mut model = construct_k3_am(m).expect("chain length in range");
            let mut h = vec![BigInt::zero(); 20];
            h[0] = BigInt::from(1);
            model.ns_basis.push(h);
            model
        }
        _ => {
            // torus-kind with one or two random integral classes
            let gram: Mat = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| if i == j { rat_int(if i == 0 { 1 } else { -1 }) } else { rat_int(0) })
                        .collect()
                })
                .collect();
            let space = QuadraticSpace::new(gram).unwrap();
            let kappa = vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)];
            let rank = rng.random_range(1..=2usize);
            let mut basis: Vec<Vector> = Vec::new();
            for _ in 0..50 {
                if basis.len() == rank {
                    break;
                }
                let cand = nonzero_int_vec(rng, 4, -3, 3);
                let mut trial = basis.clone();
                trial.push(cand);
                if linalg::rank(&trial) == trial.len() {
                    basis = trial;
                }
            }
            if basis.is_empty() {
                basis.push(vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)]);
            }
            let ns_basis: Vec<Vec<BigInt>> = basis
                .iter()
                .map(|b| b.iter().map(|x| x.numer().clone()).collect())
                .collect();
            SurfaceModel {
                kind: SurfaceKind::Torus,
                space,
                kappa_ref: kappa,
                ns_basis,
                curves: vec![],
            }
        }
    }
}

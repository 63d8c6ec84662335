//! Property tests of the identities and invariants, each against an
//! independent oracle where one exists.

use bandkern::basis::{eval_f, h2_coeffs, h2_constant, kernel_eval};
use bandkern::decomposition::{
    bp_apply, chat_apply, decompose, q_recursion_residual, reconstruct, BoundaryMethod, PermissibleSequence,
};
use bandkern::linalg::{min_hermitian_eigenvalue, norm2, spectral_norm, CMatrix};
use bandkern::multiplier::{constant_expansion, mz_apply, polynomial_membership};
use bandkern::recursion::{
    c_column, c_section, eigen_check, estimate_norms, triangular_solve_oracle, CompanionMatrix, GrowthThresholds,
    NormOptions,
};
use bandkern::symmetric::{homogeneous_sum_residual, homogeneous_symmetric, louck_residual, phi_from_roots};
use bandkern::{BoundaryConfig, Poly, Space, WeightSequence};
use nalgebra::DVector;
use num_complex::Complex64 as Complex;
use proptest::prelude::*;

fn config(j_max: usize) -> impl Strategy<Value = BoundaryConfig> {
    let angle = (1u64..=24).prop_flat_map(|d| (0..d as i64, Just(d)));
    prop::collection::vec(angle, 1..=j_max)
        .prop_filter_map("distinct roots", |fr| BoundaryConfig::from_fractions(&fr).ok())
}

fn weights() -> impl Strategy<Value = WeightSequence> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|p| WeightSequence::harmonic(p, 2.0f64.max(p + 1.0)).unwrap()),
        (1.0f64..2.0).prop_map(|p| WeightSequence::power_law(p).unwrap()),
    ]
}

fn space(j_max: usize) -> impl Strategy<Value = Space> {
    (config(j_max), weights()).prop_map(|(c, w)| Space::new(c, w).unwrap())
}

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn in_disk(r: f64) -> impl Strategy<Value = Complex> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(move |(s, t)| Complex::from_polar(r * s.sqrt(), t))
}

fn subset_products(points: &[Complex], k: usize) -> Complex {
    (0u32..1 << points.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            (0..points.len())
                .filter(|i| m & (1 << i) != 0)
                .map(|i| points[i])
                .product::<Complex>()
        })
        .sum()
}

/// Sum over all monomials of degree `k`, by enumerating exponent vectors.
fn monomial_sum(points: &[Complex], k: usize) -> Complex {
    fn go(points: &[Complex], k: usize, acc: Complex) -> Complex {
        match points.split_first() {
            None => {
                if k == 0 {
                    acc
                } else {
                    Complex::new(0.0, 0.0)
                }
            }
            Some((&x, rest)) => (0..=k).map(|e| go(rest, k - e, acc * x.powu(e as u32))).sum(),
        }
    }
    go(points, k, Complex::new(1.0, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn louck_and_homogeneous_sum_identities(cfg in config(6)) {
        let j = cfg.len();
        for m in 0..=3 * j {
            prop_assert!(louck_residual(m, &cfg).unwrap() <= 1e-9);
        }
        for m in 1..=3 * j {
            prop_assert!(homogeneous_sum_residual(m, &cfg) <= 1e-9);
        }
    }

    #[test]
    fn phi_vanishes_at_the_roots(cfg in config(6)) {
        let phi = phi_from_roots(&cfg);
        prop_assert_eq!(phi.degree(), Some(cfg.len()));
        for &z in cfg.roots() {
            prop_assert!(phi.eval(z).norm() <= 1e-10);
        }
    }

    #[test]
    fn beta_are_signed_elementary_symmetric_functions(cfg in config(6)) {
        let phi = phi_from_roots(&cfg);
        for k in 0..=cfg.len() {
            let e = subset_products(cfg.conjugates(), k);
            let want = if k % 2 == 0 { e } else { -e };
            prop_assert!((phi.coeff(k) - want).norm() <= 1e-10);
        }
    }

    #[test]
    fn homogeneous_recurrence_matches_enumeration(points in prop::collection::vec(complex(), 1..=4), k in 0usize..=6) {
        let got = homogeneous_symmetric(k as i64, &points);
        prop_assert!((got - monomial_sum(&points, k)).norm() <= 1e-9);
    }

    #[test]
    fn q_recursion(s in space(5), x in in_disk(1.0)) {
        for n in 0..=2 * s.j() {
            prop_assert!(q_recursion_residual(&s, n, x).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn eigen_identities(s in space(6)) {
        let e = eigen_check(&s).unwrap();
        prop_assert!(e.eigen_residual <= 1e-10, "{:?}", e);
        prop_assert!(e.nu0_residual <= 1e-10, "{:?}", e);
        prop_assert!(e.inverse_residual <= 1e-10, "{:?}", e);
    }

    #[test]
    fn reproducing_property(s in space(4), alpha in prop::collection::vec(complex(), 1..64), w in in_disk(0.9)) {
        let direct: Complex = alpha.iter().enumerate().map(|(n, a)| a * eval_f(&s, n, w)).sum();
        let taylor = Poly::new(h2_coeffs(&s, &alpha)).eval(w);
        prop_assert!((direct - taylor).norm() <= 1e-9);
    }

    #[test]
    fn h2_membership_bound(s in space(4), alpha in prop::collection::vec(complex(), 1..128)) {
        let norm = norm2(&alpha);
        prop_assume!(norm > 1e-6);
        let unit: Vec<Complex> = alpha.iter().map(|a| a / norm).collect();
        let y = h2_coeffs(&s, &unit);
        let c = h2_constant(&s);
        prop_assert!(y.iter().map(|v| v.norm_sqr()).sum::<f64>() <= (s.j() + 1) as f64 * c * c * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_is_hermitian(s in space(3), z in in_disk(0.8), w in in_disk(0.8)) {
        let a = kernel_eval(&s, z, w, 1e-10).unwrap();
        let b = kernel_eval(&s, w, z, 1e-10).unwrap();
        prop_assert!((a.value - b.value.conj()).norm() <= a.tail_bound + b.tail_bound + 1e-12);
    }

    #[test]
    fn kernel_gram_is_positive(s in space(3), pts in prop::collection::vec(in_disk(0.8), 2..6)) {
        let n = pts.len();
        let mut tails = 0.0;
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let k = kernel_eval(&s, pts[i], pts[j], 1e-10).unwrap();
                tails += k.tail_bound;
                g[(i, j)] = k.value;
            }
        }
        let g = (&g + g.adjoint()) * Complex::new(0.5, 0.0);
        prop_assert!(min_hermitian_eigenvalue(&g) >= -(tails + 1e-12 * n as f64));
    }

    #[test]
    fn product_norm_entry_bound(
        j in 1usize..=4,
        k in 1usize..=6,
        c in 0.1f64..2.0,
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 96),
    ) {
        let mut it = entries.iter().cycle();
        let mut prod = CMatrix::identity(j, j);
        for _ in 0..k {
            let a = CMatrix::from_fn(j, j, |_, _| {
                let &(re, im) = it.next().unwrap();
                // modulus at most c
                Complex::new(re, im) * (c / std::f64::consts::SQRT_2)
            });
            prod *= a;
        }
        prop_assert!(spectral_norm(&prod) <= (j as f64 * c).powi(k as i32) * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recursion_matches_triangular_solve(s in space(4), size in 8usize..=96) {
        let oracle = triangular_solve_oracle(&s, size).unwrap();
        let sec = c_section(&s, size, 2);
        for n in 0..size {
            for r in 0..size {
                prop_assert!((oracle[(r, n)] - sec.get(r, n)).norm() <= 1e-10, "({}, {})", r, n);
            }
        }
    }

    #[test]
    fn column_windows_follow_companion_matrices(s in space(4), n in 0usize..200) {
        let jj = s.j();
        let col = c_column(&s, n, 80);
        let window = |k: usize| DVector::from_iterator(jj, (k + 1 - jj..=k).map(|i| col[i]));
        // the window ending at row n+k maps under M_{n+k} to the one ending at n+k+1
        for k in jj..80 {
            let m = CompanionMatrix::at(&s, n + k).unwrap();
            prop_assert!((&m * window(k) - window(k + 1)).norm() <= 1e-10, "k={}", k);
        }
    }

    #[test]
    fn norm_estimates_are_nondecreasing(s in space(3)) {
        let c = c_section(&s, 1024, 2);
        let est = estimate_norms(&c, &[64, 128, 256, 512, 1024], NormOptions::default());
        for w in est.windows(2) {
            prop_assert!(w[1].value >= w[0].value * (1.0 - 1e-8), "{} then {}", w[0].value, w[1].value);
        }
    }

    #[test]
    fn decompose_inverts_reconstruct(
        cfg in config(3),
        p in prop_oneof![Just(0.75), Just(1.0), Just(2.0)],
        g in prop::collection::vec(complex(), 1..=33),
        b in prop::collection::vec(complex(), 3),
    ) {
        let s = Space::new(cfg, WeightSequence::harmonic(p, 2.0f64.max(p + 1.0)).unwrap()).unwrap();
        let gn = norm2(&g);
        prop_assume!(gn > 1e-3);
        let g: Vec<Complex> = g.iter().map(|v| v / gn).collect();
        let b: Vec<Complex> = b[..s.j()].iter().map(|v| v / norm2(&b[..s.j()]).max(1.0)).collect();
        let r = reconstruct(&s, &g, &b, 512).unwrap();
        let d = decompose(&s, &r.alpha, BoundaryMethod::TailFit).unwrap();
        for (i, v) in d.g.iter().enumerate() {
            prop_assert!((v - g.get(i).copied().unwrap_or_default()).norm() <= 1e-6, "g[{}]", i);
        }
        for (x, y) in d.b.iter().zip(&b) {
            prop_assert!((x - y).norm() <= 1e-6);
        }
    }

    #[test]
    fn encodings_agree_on_permissible_sequences(
        s in space(3),
        raw in prop::collection::vec(complex(), 256),
    ) {
        let alpha: Vec<Complex> = raw.iter().enumerate().map(|(n, v)| v / (n as f64 + 1.0)).collect();
        let seq = PermissibleSequence::enforce_vanishing(&s, alpha).unwrap();
        prop_assert!(seq.is_vanishing());
        prop_assert!(seq.residual().unwrap() <= 1e-10);
        let a = bp_apply(&s, seq.alpha());
        let b = chat_apply(&s, &seq).unwrap();
        let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-6, "{}", err);
    }

    #[test]
    fn multiplication_shifts_taylor_coefficients(s in space(3), alpha in prop::collection::vec(complex(), 256)) {
        let f = h2_coeffs(&s, &alpha);
        let zf = h2_coeffs(&s, &mz_apply(&s, &alpha));
        prop_assert!(zf[0].norm() <= 1e-9);
        for d in 1..alpha.len() {
            prop_assert!((zf[d] - f[d - 1]).norm() <= 1e-9, "degree {}", d);
        }
    }

    #[test]
    fn z_is_the_multiplier_applied_to_one(s in space(3)) {
        let th = GrowthThresholds::default();
        let one = constant_expansion(&s, 256, th).unwrap();
        let z = polynomial_membership(&s, &Poly::monomial(1, Complex::new(1.0, 0.0)), 256, th).unwrap();
        let mz = mz_apply(&s, &one.coeffs);
        for k in 0..255 {
            prop_assert!((z.coeffs[k] - mz[k]).norm() <= 1e-9 * (1.0 + z.coeffs[k].norm()), "k={}", k);
        }
    }
}

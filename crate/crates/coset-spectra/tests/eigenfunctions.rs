//! The explicit eigenfunctions act on the actual graphs with their predicted
//! eigenvalues: every family's functions are lifted to vertex functions and
//! checked through ||A f - lambda f|| / ||f||.

use coset_spectra::cayley::{self, Family};
use coset_spectra::characters::{AddChar, Chars, MultChar, RepKind, TorusChar};
use coset_spectra::cli::Tower;
use coset_spectra::kirillov::{self, RepInstance};
use coset_spectra::pgl2::{self, CosetSpace, SubgroupKind};
use coset_spectra::predicted::Predictor;

const RESIDUAL_TOL: f64 = 1e-8;

#[test]
fn k_family_eigenfunctions() {
    for q in [3u32, 5, 7] {
        let tower = Tower::new(q).unwrap();
        let f = &tower.field;
        let chars = Chars::new(f, &tower.ext);
        let predictor = Predictor::new(&chars);
        let space = CosetSpace::build(f, tower.ext.delta(), SubgroupKind::K);
        for c in f.elements().filter(|&c| c != 1 && c != f.neg(1)) {
            let dc = pgl2::k_double_coset(f, tower.ext.delta(), &space, c).unwrap();
            let graph = cayley::build_graph(f, &space, &dc, Family::K, c).unwrap();

            // constants: eigenvalue q+1
            let ones = vec![num_complex::Complex64::new(1.0, 0.0); graph.n];
            let r = kirillov::verify_eigenpair(&graph, &ones, (q + 1) as f64).unwrap();
            assert!(r <= 1e-10, "constants at q={q} c={c}: residual {r:e}");

            // f_mu with the conic character sum
            for mu in chars.mult_chars().filter(|&m| !chars.mult_is_trivial(m)) {
                let fv = kirillov::k_f_mu(&chars, &space, mu).unwrap();
                let lambda = predictor.k_eigen_nondiscrete(mu, c).unwrap();
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(
                    r <= RESIDUAL_TOL,
                    "f_mu q={q} c={c} j={}: residual {r:e}",
                    mu.j
                );
            }

            // W_Lambda with the averaged S_(y,x) eigenvalue
            for lam in chars
                .torus_chars()
                .filter(|&l| chars.torus_is_admissible(l))
            {
                let fv = kirillov::k_w_lambda_function(&chars, lam, &space).unwrap();
                let lambda = predictor.k_eigen_discrete(lam, c).unwrap();
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(
                    r <= RESIDUAL_TOL,
                    "W_Lambda q={q} c={c} j={}: residual {r:e}",
                    lam.j
                );
            }
        }
    }
}

#[test]
fn k_w_lambda_is_coset_constant() {
    // the lift is well-defined on cosets: scan a few cosets elementwise
    let tower = Tower::new(3).unwrap();
    let chars = Chars::new(&tower.field, &tower.ext);
    let lam = TorusChar { j: 1 };
    let space = CosetSpace::build(&tower.field, tower.ext.delta(), SubgroupKind::K);
    for &r in space.reps.iter().take(3) {
        let base = kirillov::w_lambda_via_lifts(&chars, lam, r).unwrap();
        for &k in &space.subgroup {
            let v =
                kirillov::w_lambda_via_lifts(&chars, lam, pgl2::mul(&tower.field, r, k)).unwrap();
            assert!((v - base).norm() < 1e-8, "right K-invariance");
        }
    }
}

#[test]
fn u_family_eigenfunctions() {
    for q in [3u32, 5, 9] {
        let tower = Tower::new(q).unwrap();
        let f = &tower.field;
        let chars = Chars::new(f, &tower.ext);
        let space = CosetSpace::build(f, tower.ext.delta(), SubgroupKind::U);
        let root_q = (q as f64).sqrt();
        for t in f.units() {
            let dc = pgl2::u_double_coset(f, &space, t).unwrap();
            let graph = cayley::build_graph(f, &space, &dc, Family::U, t).unwrap();

            // psi-trivial sector: g_mu, h_mu combinations
            for mu in chars.mult_chars() {
                let g_mu = kirillov::u_g_mu(&chars, &space, mu).unwrap();
                let h_mu = kirillov::u_h_mu(&chars, &space, mu).unwrap();
                let mu_t = chars.eval_mult(mu, t).unwrap();
                if chars.mult_is_trivial(mu) || chars.mult_is_quadratic(mu) {
                    // eigenvalue mu(t) q on g + h, -mu(t) on q g - h
                    let sum: Vec<_> = g_mu.iter().zip(&h_mu).map(|(&a, &b)| a + b).collect();
                    let r = kirillov::verify_eigenpair(&graph, &sum, (mu_t * q as f64).re).unwrap();
                    assert!(r <= RESIDUAL_TOL, "g+h q={q} t={t} j={}: {r:e}", mu.j);
                    let diff: Vec<_> = g_mu
                        .iter()
                        .zip(&h_mu)
                        .map(|(&a, &b)| a * q as f64 - b)
                        .collect();
                    let r = kirillov::verify_eigenpair(&graph, &diff, (-mu_t).re).unwrap();
                    assert!(r <= RESIDUAL_TOL, "qg-h q={q} t={t} j={}: {r:e}", mu.j);
                } else {
                    // eigenvalues +-sqrt(q) on +-sqrt(q) mu(t) g + h
                    for sign in [1.0, -1.0] {
                        let combo: Vec<_> = g_mu
                            .iter()
                            .zip(&h_mu)
                            .map(|(&a, &b)| a * mu_t * sign * root_q + b)
                            .collect();
                        let r = kirillov::verify_eigenpair(&graph, &combo, sign * root_q).unwrap();
                        assert!(r <= RESIDUAL_TOL, "pm sqrt q q={q} t={t} j={}: {r:e}", mu.j);
                    }
                }
            }

            // nontrivial-psi sector: Steinberg D0 lift, eigenvalue -mu(t)
            for mu_j in [0, (q - 1) / 2] {
                let mu = MultChar { j: mu_j };
                let rep =
                    RepInstance::new(&chars, RepKind::Steinberg(mu), AddChar { a: 1 }).unwrap();
                let mut v = vec![num_complex::Complex64::new(0.0, 0.0); rep.dim];
                v[rep.d0.unwrap()] = num_complex::Complex64::new(1.0, 0.0);
                let fv = rep.whittaker_lift(&v, &space).unwrap();
                let lambda = -chars.eval_mult(mu, t).unwrap().re;
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(
                    r <= RESIDUAL_TOL,
                    "Steinberg D0 q={q} t={t} j={mu_j}: {r:e}"
                );
            }

            // nontrivial-psi sector: principal D0/D_inf combinations
            for j in 1..(q - 1) / 2 {
                let rep =
                    RepInstance::new(&chars, RepKind::Principal(MultChar { j }), AddChar { a: 1 })
                        .unwrap();
                for sign in [1.0, -1.0] {
                    let fv = kirillov::u_principal_eigenfunction(&rep, &space, t, sign).unwrap();
                    let r = kirillov::verify_eigenpair(&graph, &fv, sign * root_q).unwrap();
                    assert!(
                        r <= RESIDUAL_TOL,
                        "principal q={q} t={t} j={j} {sign}: {r:e}"
                    );
                }
            }
        }
    }
}

#[test]
fn a_family_eigenfunctions() {
    for q in [3u32, 5, 7] {
        let tower = Tower::new(q).unwrap();
        let f = &tower.field;
        let delta = tower.ext.delta();
        let chars = Chars::new(f, &tower.ext);
        let predictor = Predictor::new(&chars);
        let space = CosetSpace::build(f, delta, SubgroupKind::A);
        let qf = q as f64;
        for c in f.elements().filter(|&c| c != 1 && c != delta) {
            let dc = pgl2::a_double_coset(f, delta, &space, c).unwrap();
            let graph = cayley::build_graph(f, &space, &dc, Family::A, c).unwrap();

            // psi-trivial cell-indicator combinations: 0, q-1, -2
            for (lambda, coeffs) in [
                (0.0, [1.0, 0.0, -1.0]),
                (qf - 1.0, [1.0, 1.0, 1.0]),
                (-2.0, [(1.0 - qf) / 2.0, 1.0, (1.0 - qf) / 2.0]),
            ] {
                let fv = kirillov::a_cell_combination(&space, coeffs);
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(r <= RESIDUAL_TOL, "cell combo {lambda} q={q} c={c}: {r:e}");
            }

            // psi-trivial f_mu, eigenvalue from the character sum
            for mu in chars.mult_chars().filter(|&m| !chars.mult_is_trivial(m)) {
                let fv = kirillov::a_f_mu(&chars, &space, mu).unwrap();
                let lambda = predictor.a_eigen_nondiscrete(mu, c).unwrap();
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(r <= RESIDUAL_TOL, "a f_mu q={q} c={c} j={}: {r:e}", mu.j);
            }

            // Steinberg pi_1 block: W_1 + (q+1) W_D0 at 0, W_1 - (q-1) W_D0 at -2
            let pi1 = RepInstance::new(
                &chars,
                RepKind::Steinberg(MultChar { j: 0 }),
                AddChar { a: 1 },
            )
            .unwrap();
            for (lambda, c_w1, c_d0) in [(0.0, 1.0, qf + 1.0), (-2.0, 1.0, 1.0 - qf)] {
                let fv = kirillov::a_whittaker_function(&pi1, &space, c_w1, c_d0).unwrap();
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(r <= RESIDUAL_TOL, "pi_1 combo {lambda} q={q} c={c}: {r:e}");
            }

            // W_1 lifts for the other representations, beta-sum eigenvalue
            let mut kinds = vec![RepKind::Steinberg(chars.quadratic())];
            kinds.extend((1..(q - 1) / 2).map(|j| RepKind::Principal(MultChar { j })));
            kinds.extend((1..(q + 1) / 2).map(|j| RepKind::Discrete(TorusChar { j })));
            for kind in kinds {
                let rep = RepInstance::new(&chars, kind, AddChar { a: 1 }).unwrap();
                let fv = kirillov::a_whittaker_function(&rep, &space, 1.0, 0.0).unwrap();
                let lambda = predictor.a_eigen_generic(kind, c).unwrap();
                let r = kirillov::verify_eigenpair(&graph, &fv, lambda).unwrap();
                assert!(r <= RESIDUAL_TOL, "W_1 {kind:?} q={q} c={c}: {r:e}");
            }
        }
    }
}

#[test]
fn disjoint_union_spectrum_is_component_union() {
    // X_{U_t} for square t splits into two components whose spectra unite
    // to the full multiset
    for q in [5u32, 9] {
        let tower = Tower::new(q).unwrap();
        let space = CosetSpace::build(&tower.field, tower.ext.delta(), SubgroupKind::U);
        let t = 1;
        let dc = pgl2::u_double_coset(&tower.field, &space, t).unwrap();
        let graph = cayley::build_graph(&tower.field, &space, &dc, Family::U, t).unwrap();
        let labels = cayley::component_labels(&graph);
        let full = coset_spectra::spectra::sym_eigenvalues(&graph.dense()).unwrap();
        let mut union = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (v, &l) in labels.iter().enumerate() {
            if seen.insert(l) {
                let comp = cayley::component_subgraph(&graph, v);
                union.extend(coset_spectra::spectra::sym_eigenvalues(&comp.dense()).unwrap());
            }
        }
        let m = coset_spectra::spectra::match_multiset(&full, &union, 1e-8).unwrap();
        assert!(
            m.success,
            "q={q}: union of component spectra, distance {}",
            m.max_distance
        );
    }
}

#[test]
fn top_eigenvalue_multiplicity_counts_components() {
    for q in [3u32, 5, 7] {
        let tower = Tower::new(q).unwrap();
        let chars = Chars::new(&tower.field, &tower.ext);
        let predictor = Predictor::new(&chars);
        for family in [Family::K, Family::U, Family::A] {
            for p in predictor.admissible_params(family) {
                let g = coset_spectra::cli::build_family_graph(&tower, family, p).unwrap();
                let eigs = coset_spectra::spectra::sym_eigenvalues(&g.dense()).unwrap();
                let k = g.k as f64;
                assert!((eigs[0] - k).abs() < 1e-9, "lambda_max = k");
                let mult = eigs.iter().filter(|&&x| (x - k).abs() < 1e-6).count();
                let components = cayley::analyze(&g).components;
                assert_eq!(mult, components, "{family:?} q={q} p={p}");
            }
        }
    }
}

#[test]
fn triangle_count_oracle() {
    // trace(A^3) = 6 * number of triangles, via brute-force enumeration
    let tower = Tower::new(3).unwrap();
    let g = coset_spectra::cli::build_family_graph(&tower, Family::K, 0).unwrap();
    let eigs = coset_spectra::spectra::sym_eigenvalues(&g.dense()).unwrap();
    let power3: f64 = eigs.iter().map(|x| x.powi(3)).sum();
    let mut triangles = 0usize;
    let dense = g.dense();
    for i in 0..g.n {
        for j in (i + 1)..g.n {
            for k in (j + 1)..g.n {
                if dense[i][j] == 1.0 && dense[j][k] == 1.0 && dense[i][k] == 1.0 {
                    triangles += 1;
                }
            }
        }
    }
    assert!((power3 - (6 * triangles) as f64).abs() < 1e-8);
    // the octahedron has 8 triangles
    assert_eq!(triangles, 8);
}

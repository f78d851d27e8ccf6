//! Acceptance gate. Every criterion runs at its pinned tolerance and prints
//! one PASS/FAIL line; run with `--nocapture` to see them.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::panic;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{equal_weight_state, hermitian2_roots, random_state, random_unitary};
use schmidt_core::density::{conditional_state, partial_trace, pure_density, purity, Subsystem};
use schmidt_core::fixtures;
use schmidt_core::ketparse::{format_state, parse_state};
use schmidt_core::numlin::{hermitian_eigen, re};
use schmidt_core::schmidt::{
    entanglement_entropy, gram_greek, gram_latin, reconstruct, schmidt_decompose, schmidt_number,
    DEFAULT_RANK_THRESHOLD,
};
use schmidt_core::{BipartitePureState, Matrix, C64};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(what: &str, got: f64, want: f64, tol: f64) -> Check {
    ensure((got - want).abs() <= tol, || {
        format!("{what}: got {got:.17}, want {want:.17} (tol {tol:e})")
    })
}

fn near_vec(what: &str, got: &[f64], want: &[f64], tol: f64) -> Check {
    ensure(got.len() == want.len(), || format!("{what}: length {} vs {}", got.len(), want.len()))?;
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        near(&format!("{what}[{k}]"), *g, *w, tol)?;
    }
    Ok(())
}

fn near_modes(what: &str, got: &[C64], want: &[f64], tol: f64) -> Check {
    ensure(got.len() == want.len(), || format!("{what}: length mismatch"))?;
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        ensure((g - re(*w)).norm() <= tol, || format!("{what}[{k}]: got {g}, want {w}"))?;
    }
    Ok(())
}

fn near_matrix(what: &str, got: &Matrix, want: &Matrix, tol: f64) -> Check {
    let diff = got.max_abs_diff(want);
    ensure(diff <= tol, || format!("{what}: max deviation {diff:e} > {tol:e}"))
}

fn rational(rows: &[&[f64]], denom: f64) -> Matrix {
    Matrix::from_real_rows(rows).unwrap().scale(re(1.0 / denom))
}

fn unit(s: BipartitePureState) -> BipartitePureState {
    s.normalized().unwrap()
}

fn ac1_psi0_fixture() -> Check {
    let s = unit(fixtures::psi0());
    let latin = gram_latin(&s).map_err(|e| e.to_string())?.eigenvalues().unwrap();
    let greek = gram_greek(&s).map_err(|e| e.to_string())?.eigenvalues().unwrap();
    near_vec("Latin spectrum", &latin, &[11.0 / 12.0, 1.0 / 12.0], 1e-10)?;
    near_vec("Greek spectrum", &greek, &[11.0 / 12.0, 1.0 / 12.0, 0.0], 1e-10)?;

    let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
    near("K", schmidt_number(&d), 144.0 / 122.0, 1e-9)?;
    ensure(d.rank == 2, || format!("rank {}", d.rank))?;
    let r = FRAC_1_SQRT_2;
    let k = 1.0 / 22f64.sqrt();
    near_modes("F^(11)", &d.latin_modes[0], &[r, r], 1e-9)?;
    near_modes("F^(1)", &d.latin_modes[1], &[r, -r], 1e-9)?;
    near_modes("Phi^(11)", &d.greek_modes[0], &[3.0 * k, 3.0 * k, 2.0 * k], 1e-9)?;
    near_modes("Phi^(1)", &d.greek_modes[1], &[r, -r, 0.0], 1e-9)
}

fn ac2_psi0_reconstruction() -> Check {
    let s = unit(fixtures::psi0());
    let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
    let rebuilt = reconstruct(&d, s.dims()).map_err(|e| e.to_string())?;
    let original = rational(&[&[2., 1., 1.], &[1., 2., 1.]], 12f64.sqrt());
    near_matrix("rebuilt amplitudes", &rebuilt, &original, 1e-9)?;

    // The printed rearrangement: ½(3,3,2)⊗(1,1) + ½(1,−1,0)⊗(1,−1) = √12 Ψ₀.
    let mut by_hand = Matrix::zeros(2, 3);
    for (latin, greek) in [([1.0, 1.0], [3.0, 3.0, 2.0]), ([1.0, -1.0], [1.0, -1.0, 0.0])] {
        for n in 0..2 {
            for nu in 0..3 {
                by_hand[(n, nu)] += re(0.5 * latin[n] * greek[nu]);
            }
        }
    }
    near_matrix("Schmidt-form expansion", &by_hand, fixtures::psi0().amplitudes(), 1e-12)
}

fn ac3_psi1_fixture() -> Check {
    let s = unit(fixtures::psi1());
    let greek = gram_greek(&s).map_err(|e| e.to_string())?;
    near_matrix(
        "Greek Gram matrix",
        greek.matrix(),
        &rational(&[&[5., 4., 1.], &[4., 5., -1.], &[1., -1., 2.]], 12.),
        1e-12,
    )?;
    near_vec("spectrum", &greek.eigenvalues().unwrap(), &[0.75, 0.25, 0.0], 1e-10)?;
    let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
    near("K", schmidt_number(&d), 1.6, 1e-9)
}

fn ac4_psi2_fixture() -> Check {
    let printed_numerator = [
        [5.0, 4.0, 1.0, -1.0],
        [4.0, 5.0, -1.0, 1.0],
        [1.0, -1.0, 2.0, -2.0],
        [-1.0, 1.0, -2.0, 2.0],
    ];
    let n2_squared: f64 = (0..4).map(|i| printed_numerator[i][i]).sum();
    near("N₂² from unit trace", n2_squared, 14.0, 0.0)?;

    let raw = parse_state(fixtures::PSI2_EXPR).map_err(|e| e.to_string())?;
    near("N₂² of parsed state", raw.norm() * raw.norm(), n2_squared, 1e-12)?;
    let s = unit(raw);
    near_matrix(
        "Greek Gram matrix",
        gram_greek(&s).unwrap().matrix(),
        &Matrix::from_real_rows(&printed_numerator).unwrap().scale(re(1.0 / n2_squared)),
        1e-12,
    )?;

    let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
    ensure(d.rank == 2, || format!("rank {} (expected 2)", d.rank))?;

    // independent oracle: roots of the 2×2 Latin characteristic polynomial
    let rho = gram_latin(&s).unwrap();
    let m = rho.matrix();
    let roots = hermitian2_roots(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
    near_vec("oracle roots", &roots, &[9.0 / 14.0, 5.0 / 14.0], 1e-12)?;
    let k_oracle = 1.0 / (roots[0] * roots[0] + roots[1] * roots[1]);
    near("oracle K", k_oracle, 196.0 / 106.0, 1e-12)?;
    near("K", schmidt_number(&d), k_oracle, 1e-9)?;
    near("K", schmidt_number(&d), 196.0 / 106.0, 1e-9)
}

fn ac5_psi3_fixture() -> Check {
    let d = schmidt_decompose(&unit(fixtures::psi3()), DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
    near("K", schmidt_number(&d), 144.0 / 74.0, 1e-9)
}

fn ac6_bell_suite() -> Check {
    let half = Matrix::identity(2).scale(re(0.5));
    for (name, s) in fixtures::bell_states() {
        let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
        near(&format!("{name} K"), schmidt_number(&d), 2.0, 1e-9)?;
        near(&format!("{name} entropy"), entanglement_entropy(&d), 1.0, 1e-9)?;
        let rho = pure_density(&s).map_err(|e| e.to_string())?;
        for keep in [Subsystem::A, Subsystem::B] {
            let reduced = partial_trace(&rho, keep, (2, 2)).map_err(|e| e.to_string())?;
            near_matrix(&format!("{name} reduced {keep:?}"), reduced.matrix(), &half, 1e-10)?;
        }
    }
    Ok(())
}

fn ac7_classical_vs_quantum() -> Check {
    let cl = fixtures::rho_cl();
    let qm = fixtures::rho_qm();
    let printed_cl = rational(
        &[&[0., 0., 0., 0.], &[0., 1., 0., 0.], &[0., 0., 1., 0.], &[0., 0., 0., 0.]],
        2.,
    );
    let printed_qm = rational(
        &[&[0., 0., 0., 0.], &[0., 1., 1., 0.], &[0., 1., 1., 0.], &[0., 0., 0., 0.]],
        2.,
    );
    near_matrix("rho_CL", cl.matrix(), &printed_cl, 1e-12)?;
    near_matrix("rho_QM", qm.matrix(), &printed_qm, 1e-12)?;
    ensure(qm.labels() == ["HH", "HV", "VH", "VV"], || format!("labels {:?}", qm.labels()))?;

    let vv = Matrix::diagonal(&[0.0, 1.0]);
    for (name, rho) in [("rho_CL", &cl), ("rho_QM", &qm)] {
        let (p, post) = conditional_state(rho, &[re(1.0), re(0.0)], (2, 2)).map_err(|e| e.to_string())?;
        near(&format!("{name} P(H_A)"), p, 0.5, 1e-12)?;
        near_matrix(&format!("{name} state of B"), post.matrix(), &vv, 1e-12)?;
    }

    let diff = qm.matrix().sub(cl.matrix()).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let allowed = matches!((i, j), (1, 2) | (2, 1));
            let z = diff[(i, j)].norm();
            ensure(allowed || z <= 1e-12, || format!("difference at ({i},{j}) is {z}"))?;
            if allowed {
                near(&format!("difference at ({i},{j})"), z, 0.5, 1e-12)?;
            }
        }
    }
    Ok(())
}

fn ac8_property_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x005c_41d7);
    for latin in 1..=6 {
        for greek in 1..=6 {
            for trial in 0..200 {
                let tag = format!("{latin}x{greek} #{trial}");
                let s = random_state(&mut rng, latin, greek);
                let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| format!("{tag}: {e}"))?;
                near(&format!("{tag} Σλ"), d.lambdas.iter().sum(), 1.0, 1e-10)?;

                let l = gram_latin(&s).unwrap();
                let g = gram_greek(&s).unwrap();
                let spec_l = hermitian_eigen(l.matrix(), 1e-14).unwrap().eigenvalues;
                let spec_g = hermitian_eigen(g.matrix(), 1e-14).unwrap().eigenvalues;
                let common = latin.min(greek);
                near_vec(&format!("{tag} shared spectrum"), &spec_l[..common], &spec_g[..common], 1e-10)?;
                let longer = if latin > greek { &spec_l } else { &spec_g };
                for &x in &longer[common..] {
                    near(&format!("{tag} surplus eigenvalue"), x, 0.0, 1e-10)?;
                }

                let k = schmidt_number(&d);
                ensure(k >= 1.0 - 1e-9 && k <= common as f64 + 1e-9, || format!("{tag}: K = {k}"))?;

                let rebuilt = reconstruct(&d, s.dims()).unwrap();
                near(&format!("{tag} residual"), rebuilt.max_abs_diff(s.amplitudes()), 0.0, 1e-9)?;

                let u = random_unitary(&mut rng, latin);
                let v = random_unitary(&mut rng, greek);
                let moved = s.apply_latin(&u).unwrap().apply_greek(&v).unwrap();
                let dm = schmidt_decompose(&moved, DEFAULT_RANK_THRESHOLD).map_err(|e| format!("{tag}: {e}"))?;
                near(&format!("{tag} K under local unitaries"), schmidt_number(&dm), k, 1e-9)?;

                near(&format!("{tag} purity A"), purity(&l), 1.0 / k, 1e-9)?;
                near(&format!("{tag} purity B"), purity(&g), 1.0 / k, 1e-9)?;
            }
        }
    }
    Ok(())
}

fn ac9_equal_weights() -> Check {
    for n in 1..=6 {
        for (latin, greek) in [(n, n), (6, 6), (n, 6)] {
            let s = equal_weight_state(n, latin, greek);
            let d = schmidt_decompose(&s, DEFAULT_RANK_THRESHOLD).map_err(|e| e.to_string())?;
            near(&format!("N={n} in {latin}x{greek}"), schmidt_number(&d), n as f64, 1e-9)?;
            ensure(d.rank == n, || format!("N={n}: rank {}", d.rank))?;
        }
    }
    Ok(())
}

fn ac10_parser_suite() -> Check {
    let i = C64::i();
    let expected = [
        (fixtures::PSI0_EXPR, Matrix::from_real_rows(&[[2., 1., 1.], [1., 2., 1.]]).unwrap()),
        (fixtures::PSI1_EXPR, Matrix::from_real_rows(&[[2., 1., 1.], [1., 2., -1.]]).unwrap()),
        (
            fixtures::PSI2_EXPR,
            Matrix::from_real_rows(&[[2., 1., 1., -1.], [1., 2., -1., 1.]]).unwrap(),
        ),
        (
            fixtures::PSI3_EXPR,
            Matrix::from_rows(&[vec![re(2.), i, re(1.)], vec![i, re(2.), re(1.)]]).unwrap(),
        ),
    ];
    for (text, amps) in &expected {
        let s = parse_state(text).map_err(|e| e.to_string())?;
        ensure(s.amplitudes() == amps, || format!("{text}: parsed {:?}", s.amplitudes()))?;
    }

    let mut rng = StdRng::seed_from_u64(0x7e57);
    for trial in 0..500 {
        let (m, n) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let s = random_state(&mut rng, m, n);
        let text = format_state(&s);
        let back = parse_state(&text).map_err(|e| format!("#{trial} `{text}`: {e}"))?;
        ensure(back.latin_labels() == s.latin_labels() && back.greek_labels() == s.greek_labels(), || {
            format!("#{trial}: labels changed")
        })?;
        near(&format!("#{trial} round trip"), back.amplitudes().max_abs_diff(s.amplitudes()), 0.0, 1e-12)?;
    }

    let alphabet: Vec<char> = "|<>()+-*/x⊗i0123456789. abαsqrte_\t".chars().collect();
    for trial in 0..5000 {
        let len = rng.random_range(0..48);
        let text: String = (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect();
        let outcome = panic::catch_unwind(|| parse_state(&text).map(|_| ()));
        ensure(outcome.is_ok(), || format!("fuzz #{trial} panicked on {text:?}"))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("AC1  psi0 spectra, K and Schmidt modes", ac1_psi0_fixture),
        ("AC2  psi0 reconstruction", ac2_psi0_reconstruction),
        ("AC3  psi1 Gram matrix, spectrum and K", ac3_psi1_fixture),
        ("AC4  psi2 normalization, rank and K", ac4_psi2_fixture),
        ("AC5  psi3 complex amplitudes K", ac5_psi3_fixture),
        ("AC6  Bell states", ac6_bell_suite),
        ("AC7  classical mixture vs Bell projector", ac7_classical_vs_quantum),
        ("AC8  random-state property suite", ac8_property_suite),
        ("AC9  equal Schmidt weights give K = N", ac9_equal_weights),
        ("AC10 parser suite", ac10_parser_suite),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

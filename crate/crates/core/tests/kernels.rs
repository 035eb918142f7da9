mod common;

use common::*;
use qgeom::matfun::{conjugation_average, duhamel_sandwich};

#[test]
fn gauss_legendre_rule_is_exact_for_polynomials() {
    let (x, w) = gauss_legendre(64);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    for k in [1, 7, 40, 127] {
        let q: f64 = x.iter().zip(&w).map(|(u, wi)| wi * u.powi(k)).sum();
        assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "degree {k}");
    }
    let e: f64 = x.iter().zip(&w).map(|(u, wi)| wi * (3.0 * u).exp()).sum();
    assert!((e - ((3f64).exp() - 1.0) / 3.0).abs() < 1e-13);
}

fn check(f: &Factored, a: &qgeom::HermitianMatrix<f64>, b: &qgeom::CMatrix<f64>) -> (f64, f64) {
    let duh = duhamel_sandwich(&f.rho, a);
    let oracle = quadrature(|u| f.power(u) * a.as_matrix() * f.power(1.0 - u));
    let conj = conjugation_average(&f.rho, b);
    let oracle_c = quadrature(|u| f.power(u) * b * f.power(-u));
    (max_entry(&(duh.as_matrix() - oracle)), max_entry(&(conj - oracle_c)))
}

#[test]
fn kernels_match_quadrature_on_random_inputs() {
    let mut g = rng(1, 0xa11);
    for n in 2..=5 {
        for _ in 0..5 {
            let p = spectrum(&mut g, n, 0.01 / n as f64);
            let f = Factored::new(&mut g, p);
            let a = hermitian(&mut g, n);
            let b = complex(&mut g, n);
            let (e1, e2) = check(&f, &a, &b);
            assert!(e1 < 1e-9 && e2 < 1e-9, "n={n}: {e1:e} {e2:e}");
        }
    }
}

#[test]
fn kernels_match_quadrature_near_degenerate() {
    let mut g = rng(2, 0xa12);
    for &gap in &[1e-8, 1e-12, 0.0] {
        let p = vec![0.3 - gap / 2.0, 0.3 + gap / 2.0, 0.4];
        let f = Factored::new(&mut g, p);
        let a = hermitian(&mut g, 3);
        let b = complex(&mut g, 3);
        let (e1, e2) = check(&f, &a, &b);
        assert!(e1 < 1e-9 && e2 < 1e-9, "gap {gap}: {e1:e} {e2:e}");
    }
}

#[test]
fn kernels_match_quadrature_wide_spectrum() {
    let mut g = rng(3, 0xa13);
    let f = Factored::new(&mut g, vec![1e-3, 0.099, 0.9]);
    let a = hermitian(&mut g, 3);
    let b = complex(&mut g, 3);
    let (e1, e2) = check(&f, &a, &b);
    assert!(e1 < 1e-9 && e2 < 1e-9, "{e1:e} {e2:e}");
}

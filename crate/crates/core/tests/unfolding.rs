use qttdft::qft::{attach_core, partial_tensor};
use qttdft::*;

/// The DFT as a `2n`-axis tensor over `(σ_1, τ_1, …, σ_n, τ_n)`.
fn dft_tensor(n: usize) -> ComplexTensor {
    ComplexTensor::from_fn(&vec![2; 2 * n], |i| {
        let sigma: Vec<usize> = i.iter().step_by(2).copied().collect();
        let tau: Vec<usize> = i.iter().skip(1).step_by(2).copied().collect();
        let s = BitString::msb_first(sigma, 2).unwrap();
        let t = BitString::lsb_first(tau, 2).unwrap();
        dft_entry(n, 2, &s, &t).unwrap()
    })
}

/// Axis order whose row-major flattening of the `m`-th unfolding gives rows
/// `(s_m, t_m)` and columns `(s', t')`.
fn index_perm(n: usize, m: usize) -> Vec<usize> {
    let sig = |k: usize| 2 * (k - 1);
    let tau = |k: usize| 2 * (k - 1) + 1;
    let mut p: Vec<usize> = (1..=m).map(sig).collect();
    p.extend((1..=m).rev().map(tau));
    p.extend((m + 1..=n).map(sig));
    p.extend((m + 1..=n).rev().map(tau));
    p
}

#[test]
fn first_unfolding_of_two_site_transform() {
    let t = dft_tensor(2);
    let t1 = unfold(&t, 1, &[0, 1, 2, 3]).unwrap();
    assert_eq!(t1.shape(), &[4, 4]);
    // σ = (1, 1), τ = (1, 0): s = 3, t = 1
    let z = t1.get(&[0b11, 0b10]);
    assert!((z - C64::new(0.0, 1.0)).norm() < 1e-15);
    // σ = (1, 0), τ = (1, 0): s = 2, t = 1
    assert!((t1.get(&[0b11, 0b00]) - C64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn rank_five_truncation_of_four_site_unfolding() {
    let t = dft_tensor(4);
    let bound = ek_bound(4).unwrap();
    for m in 1..4 {
        let tm = unfold(&t, m, &index_perm(4, m)).unwrap();
        let svd = svd_truncate(&tm, Truncation::Rank(5)).unwrap();
        let err = tm.max_abs_diff(&svd.reconstruct().unwrap()).unwrap();
        assert!(err <= bound, "m={m} err={err}");
    }
}

#[test]
fn factors_match_the_unfolded_tensor() {
    let n = 6;
    let t = dft_tensor(n);
    let bound = ek_bound(8).unwrap();
    for m in 1..n {
        let f = build_unfolding_factors(n, m, 8).unwrap();
        let tm = unfold(&t, m, &index_perm(n, m)).unwrap();
        let approx = f.contract().unwrap();
        assert_eq!(approx.shape(), tm.shape());
        let via_tensor = tm.max_abs_diff(&approx).unwrap();
        let direct = f.max_error().unwrap();
        assert!((via_tensor - direct).abs() < 1e-14, "m={m}");
        assert!(direct <= bound, "m={m} err={direct}");
    }
}

#[test]
fn factor_errors_are_pinned() {
    // measured at n = 6, K = 8; the last split is exact
    let expected = [1.16e-6, 3.69e-5, 1.41e-4, 2.19e-4];
    for (m, &e) in (1..5).zip(&expected) {
        let err = build_unfolding_factors(6, m, 8)
            .unwrap()
            .max_error()
            .unwrap();
        assert!(err <= e * 1.05, "m={m} err={err}");
    }
    assert!(
        build_unfolding_factors(6, 5, 8)
            .unwrap()
            .max_error()
            .unwrap()
            < 1e-14
    );
}

#[test]
fn factors_reject_bad_splits() {
    assert!(build_unfolding_factors(6, 0, 8).is_err());
    assert!(build_unfolding_factors(6, 6, 8).is_err());
    assert!(build_unfolding_factors(13, 3, 8).is_err());
}

#[test]
fn one_core_step_stays_within_the_interpolation_error() {
    for k in [4, 8, 12] {
        let core = build_internal_core(k, 2).unwrap();
        let bound = ek_bound(k).unwrap();
        for m in 1..6 {
            let stepped = attach_core(&partial_tensor(m, k, 2).unwrap(), &core).unwrap();
            let exact = partial_tensor(m + 1, k, 2).unwrap();
            let err = stepped.max_abs_diff(&exact).unwrap();
            assert!(err <= bound, "K={k} m={m} err={err}");
        }
    }
}

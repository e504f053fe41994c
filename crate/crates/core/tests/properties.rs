use num_bigint::BigUint;
use num_complex::Complex64;
use tcore::exact::{
    closed_small_range_from, partition_numbers, tcore_count_from, tcore_counts_from,
};
use tcore::modular::{f_t_log, UpperHalfPoint};

#[test]
fn large_t_gives_partition_numbers() {
    let p = partition_numbers(200).unwrap();
    for t in [201u32, 250, 1000] {
        let c = tcore_counts_from(&p, t, 200).unwrap();
        assert_eq!(c.values(), p.values(), "t = {t}");
    }
    for n in 1..=200usize {
        assert_eq!(
            &tcore_count_from(&p, n as u32 + 1, n).unwrap(),
            p.get(n).unwrap()
        );
    }
}

#[test]
fn last_two_columns() {
    let p = partition_numbers(500).unwrap();
    for n in 3..=500usize {
        let below = tcore_count_from(&p, n as u32 - 1, n).unwrap();
        let at = tcore_count_from(&p, n as u32, n).unwrap();
        assert_eq!(
            below,
            p.get(n).unwrap() + 1u32 - BigUint::from(n),
            "N = {n}"
        );
        assert_eq!(at + 1u32, below, "N = {n}");
    }
}

#[test]
fn closed_form_on_its_range() {
    let p = partition_numbers(300).unwrap();
    for t in 1..=100u32 {
        let limit = 3 * t as usize - 1;
        let series = tcore_counts_from(&p, t, limit).unwrap();
        for n in 0..=limit {
            assert_eq!(
                &closed_small_range_from(&p, t, n).unwrap(),
                series.get(n).unwrap(),
                "(t, N) = ({t}, {n})"
            );
        }
    }
}

#[test]
fn generating_function_matches_eta_quotient() {
    let (t, limit) = (5u32, 30usize);
    let y = 0.35;
    let p = partition_numbers(limit).unwrap();
    let c = tcore_counts_from(&p, t, limit).unwrap();
    let z = Complex64::new(0.0, y);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let lhs = (f_t_log(UpperHalfPoint::imaginary(y).unwrap(), t).unwrap()
        + two_pi_i * z * (1.0 - (t * t) as f64) / 24.0)
        .exp();
    let rhs: Complex64 = c
        .values()
        .iter()
        .enumerate()
        .map(|(n, v)| v.to_string().parse::<f64>().unwrap() * (two_pi_i * z * n as f64).exp())
        .sum();
    // The series is truncated at N = 30, where e(Nz) ≈ 1e-29.
    assert!((lhs - rhs).norm() < 1e-8 * rhs.norm(), "{lhs} vs {rhs}");
}

use esz_core::bounds::{
    bound_table, f_cupcap, g_closed, g_series, limit_decomposition, new_upper_bound, prior_bounds, ratio, to_csv,
    CSV_HEADER,
};
use num_bigint::BigInt;

/// Row `a` of Pascal's triangle by repeated addition.
fn pascal(a: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for _ in 0..a {
        let mut next = vec![BigInt::from(1); row.len() + 1];
        for b in 1..row.len() {
            next[b] = &row[b - 1] + &row[b];
        }
        row = next;
    }
    row
}

fn c(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::from(0);
    }
    pascal(a as usize)[b as usize].clone()
}

/// `w_i(m, k)` written out from its definition.
fn w(i: i64, m: i64, k: i64) -> BigInt {
    if i == 4 {
        c(m + k - 6, k - 2) + c(m + k - 7, k - 3) + 2 * c(m + k - 8, k - 4)
    } else if k < i {
        BigInt::from(0)
    } else {
        (i - 1) * c(m + k - i - 4, k - i)
    }
}

#[test]
fn g_matches_the_definition() {
    for m in 4..=15i64 {
        for l in 4..=15i64 {
            let want: BigInt = (4..=l).map(|i| w(i, m, l)).sum();
            assert_eq!(g_series(m as usize, l as usize).unwrap(), want, "g({m},{l})");
            if l >= 5 {
                assert_eq!(g_closed(m as usize, l as usize).unwrap(), want);
            }
        }
    }
}

#[test]
fn small_values() {
    assert_eq!(f_cupcap(5, 5).unwrap(), 20.into());
    assert_eq!(g_series(6, 4).unwrap(), 11.into());
    assert_eq!(g_series(4, 5).unwrap(), 8.into());
    assert_eq!(new_upper_bound(6).unwrap(), 33.into());
    assert_eq!(new_upper_bound(7).unwrap(), c(8, 4) + g_series(7, 5).unwrap() + 2);
}

#[test]
fn ratio_is_exact_and_below_one() {
    for n in [6usize, 10, 50, 200] {
        let r = ratio(n).unwrap();
        let want = num_rational::BigRational::new(new_upper_bound(n).unwrap(), c(2 * n as i64 - 5, n as i64 - 2));
        assert_eq!(r, want);
        assert!(r < num_rational::BigRational::from_integer(1.into()));
    }
}

#[test]
fn prior_bounds_order() {
    for n in 6..=60 {
        let p = prior_bounds(n).unwrap();
        let new = new_upper_bound(n).unwrap();
        assert!(new <= p.toth_valtr_2005.0);
        assert!(p.toth_valtr_2005.0 <= p.toth_valtr_1998.0);
        assert!(p.chung_graham.0 <= p.erdos_szekeres.0);
    }
}

#[test]
fn limit_strings() {
    let d = limit_decomposition();
    assert_eq!(d.leading, "1/2");
    assert_eq!(d.w4, "1/4");
    assert_eq!(d.tail, "5/32");
    assert_eq!(d.g_total, "13/32");
    assert_eq!(d.bound, "29/32");
    assert_eq!(d.g_total_single_weight, "3/8");
}

#[test]
fn csv_rows() {
    let rows = bound_table(6..=9).unwrap();
    let csv = to_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("6,20,11,33,"));
    assert!(lines[1].ends_with(",33/35"));
}

//! Exact bound arithmetic.
//!
//! Binomials follow the convention `C(a, b) = 0` whenever `b < 0`, `b > a` or
//! `a < 0`, which lets the closed forms below hold down to small arguments.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    acc
}

fn to_i64(v: usize) -> i64 {
    i64::try_from(v).expect("argument fits in i64")
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

/// Largest size of a set with no `n`-cup and no `m`-cap: `C(m+n-4, n-2)`.
pub fn f_cupcap(n: usize, m: usize) -> Result<BigInt> {
    if n < 3 || m < 3 {
        return Err(domain(format!("f(n, m) needs n, m >= 3, got ({n}, {m})")));
    }
    Ok(binom(to_i64(m + n) - 4, to_i64(n) - 2))
}

/// [`f_cupcap`] for the small arguments used by the geometric searches.
/// Accepts `n` or `m` equal to 2 (value 1).
pub fn f_cupcap_small(n: usize, m: usize) -> usize {
    binom(to_i64(m + n) - 4, to_i64(n) - 2)
        .to_usize()
        .expect("f(n, m) fits in usize")
}

/// The `w_i(m, k)` family.
pub fn w(i: usize, m: usize, k: usize) -> Result<BigInt> {
    if i < 4 || m < 4 || k < 4 {
        return Err(domain(format!("w_i(m, k) needs i, m, k >= 4, got ({i}, {m}, {k})")));
    }
    let (i, m, k) = (to_i64(i), to_i64(m), to_i64(k));
    if i == 4 {
        return Ok(binom(m + k - 6, k - 2) + binom(m + k - 7, k - 3) + 2 * binom(m + k - 8, k - 4));
    }
    if k < i {
        return Ok(BigInt::zero());
    }
    Ok((i - 1) * binom(m + k - i - 4, k - i))
}

/// `g(m, l)` as the sum of `w_i(m, l)` over `4 <= i <= l` (later terms vanish).
///
/// The binomials of successive terms share a ratio, so they are updated in
/// place: `C(N+1, K+1) = C(N, K) (N+1) / (K+1)`.
pub fn g_series(m: usize, l: usize) -> Result<BigInt> {
    if m < 4 || l < 4 {
        return Err(domain(format!("g(m, l) needs m, l >= 4, got ({m}, {l})")));
    }
    let mut total = w(4, m, l)?;
    // i = l: C(m - 4, 0) = 1, walking i downwards to 5.
    let mut c = BigInt::one();
    let (mut top, mut bottom) = (to_i64(m) - 4, 0i64);
    for i in (5..=to_i64(l)).rev() {
        total += (i - 1) * &c;
        top += 1;
        bottom += 1;
        c = c * top / bottom;
    }
    Ok(total)
}

/// `g(m, l) = f(m, l) - C(m+l-6, l-3) + C(m+l-8, l-5)`; also valid at `l = 4`.
pub fn g_closed(m: usize, l: usize) -> Result<BigInt> {
    if m < 4 || l < 4 {
        return Err(domain(format!("g(m, l) needs m, l >= 4, got ({m}, {l})")));
    }
    let (m, l) = (to_i64(m), to_i64(l));
    Ok(binom(m + l - 4, m - 2) - binom(m + l - 6, l - 3) + binom(m + l - 8, l - 5))
}

pub fn g_small(m: usize, l: usize) -> usize {
    g_series(m, l)
        .expect("g domain checked by caller")
        .to_usize()
        .expect("g(m, l) fits in usize")
}

/// `f(n-1, n-1) + g(n, n-2) + 2`.
pub fn new_bound_sum_form(n: usize) -> Result<BigInt> {
    if n < 6 {
        return Err(domain(format!("new bound needs n >= 6, got {n}")));
    }
    Ok(f_cupcap(n - 1, n - 1)? + g_series(n, n - 2)? + 2)
}

/// `C(2n-5, n-2) - C(2n-8, n-5) + C(2n-10, n-7) + 2`.
pub fn new_bound_closed_form(n: usize) -> Result<BigInt> {
    if n < 6 {
        return Err(domain(format!("new bound needs n >= 6, got {n}")));
    }
    let n = to_i64(n);
    Ok(binom(2 * n - 5, n - 2) - binom(2 * n - 8, n - 5) + binom(2 * n - 10, n - 7) + 2)
}

/// The improved upper bound on the number of points forcing a convex `n`-gon.
/// Both forms are evaluated and must agree.
pub fn new_upper_bound(n: usize) -> Result<BigInt> {
    let sum = new_bound_sum_form(n)?;
    let closed = new_bound_closed_form(n)?;
    if sum != closed {
        return Err(Error::IdentityViolation { n, left: sum.to_string(), right: closed.to_string() });
    }
    Ok(sum)
}

/// `C(2n-5, n-2)`, the normalizer of the asymptotic ratio.
pub fn central(n: usize) -> BigInt {
    let n = to_i64(n);
    binom(2 * n - 5, n - 2)
}

/// `new_upper_bound(n) / C(2n-5, n-2)`, exactly.
pub fn ratio(n: usize) -> Result<BigRational> {
    Ok(BigRational::new(new_upper_bound(n)?, central(n)))
}

/// The limit ratio 29/32.
pub fn limit_ratio() -> BigRational {
    BigRational::new(29.into(), 32.into())
}

/// `w_i(n, n-2) / C(2n-5, n-2)` at finite `n`.
pub fn g_ratio_term(i: usize, n: usize) -> Result<BigRational> {
    if i < 4 || n < i.max(6) {
        return Err(domain(format!("g ratio term needs i >= 4, n >= max(i, 6), got ({i}, {n})")));
    }
    Ok(BigRational::new(w(i, n, n - 2)?, central(n)))
}

/// Limit of [`g_ratio_term`] as `n` grows: `(i-1)/2^(i+1)` for `i >= 5`, and
/// `1/8 + 1/16 + 2/32 = 1/4` for `i = 4`.
pub fn g_limit_constant(i: usize) -> Result<BigRational> {
    match i {
        0..=3 => Err(domain(format!("limit constant needs i >= 4, got {i}"))),
        4 => Ok(r(1, 8) + r(1, 16) + r(2, 32)),
        _ => Ok(BigRational::new(BigInt::from(i - 1), BigInt::one() << (i + 1))),
    }
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact decomposition of the limiting ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitDecomposition {
    /// `lim C(2n-6, n-3) / C(2n-5, n-2)`.
    pub leading: String,
    /// Limit of the `i = 4` term.
    pub w4: String,
    /// `sum_{i >= 5} (i-1)/2^(i+1)`.
    pub tail: String,
    /// `w4 + tail`, the limit of `g(n, n-2) / C(2n-5, n-2)`.
    pub g_total: String,
    /// The same total with `1/32` in place of `2/32` inside the `i = 4` term.
    pub g_total_single_weight: String,
    /// `leading + g_total`.
    pub bound: String,
}

/// Closed form of the tail `sum_{i >= N} (i-1)/2^(i+1)` for `N >= 1`:
/// `N / 2^N` (from `sum_{j >= M} j/2^j = (M+1)/2^(M-1)`).
pub fn tail_from(start: usize) -> BigRational {
    BigRational::new(BigInt::from(start), BigInt::one() << start)
}

pub fn limit_decomposition() -> LimitDecomposition {
    let leading = r(1, 2);
    let w4 = g_limit_constant(4).expect("i = 4 is in range");
    let tail = tail_from(5);
    let g_total = &w4 + &tail;
    let single = r(1, 8) + r(1, 16) + r(1, 32) + &tail;
    LimitDecomposition {
        leading: leading.to_string(),
        w4: w4.to_string(),
        tail: tail.to_string(),
        g_total: g_total.to_string(),
        g_total_single_weight: single.to_string(),
        bound: (leading + g_total).to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PriorBounds {
    pub erdos_szekeres: BigIntString,
    pub chung_graham: BigIntString,
    pub kleitman_pachter: BigIntString,
    pub toth_valtr_1998: BigIntString,
    pub toth_valtr_2005: BigIntString,
}

/// A big integer serialized as its decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigIntString(pub BigInt);

impl Serialize for BigIntString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl PriorBounds {
    pub fn as_array(&self) -> [&BigInt; 5] {
        [
            &self.erdos_szekeres.0,
            &self.chung_graham.0,
            &self.kleitman_pachter.0,
            &self.toth_valtr_1998.0,
            &self.toth_valtr_2005.0,
        ]
    }
}

pub fn prior_bounds(n: usize) -> Result<PriorBounds> {
    if n < 5 {
        return Err(domain(format!("prior bounds need n >= 5, got {n}")));
    }
    let k = to_i64(n);
    let c4 = binom(2 * k - 4, k - 2);
    let c5 = binom(2 * k - 5, k - 2);
    Ok(PriorBounds {
        erdos_szekeres: BigIntString(&c4 + 1),
        chung_graham: BigIntString(c4.clone()),
        kleitman_pachter: BigIntString(c4 - 2 * k + 7),
        toth_valtr_1998: BigIntString(&c5 + 2),
        toth_valtr_2005: BigIntString(c5 + 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PascalReport {
    pub g_series: bool,
    pub g_closed: bool,
    pub f_cupcap: bool,
    /// First failing `(m, l)` per form, if any.
    pub failures: Vec<String>,
}

impl PascalReport {
    pub fn all_hold(&self) -> bool {
        self.g_series && self.g_closed && self.f_cupcap
    }
}

/// Checks `X(a+1, b+1) = X(a+1, b) + X(a, b+1)` over `a, b` in `range`
/// (clamped below at 4 for both forms of `g`, at 3 for `f`). At `b = 4` the
/// closed form of `g` is used through its `l = 4` extension.
pub fn pascal_recurrence_check(range: RangeInclusive<usize>) -> PascalReport {
    let (lo, hi) = (*range.start(), *range.end());
    let mut report = PascalReport { g_series: true, g_closed: true, f_cupcap: true, failures: Vec::new() };
    for a in lo.max(4)..hi {
        for b in lo.max(4)..hi {
            let s = |x, y| g_series(x, y).expect("in domain");
            if s(a + 1, b + 1) != s(a + 1, b) + s(a, b + 1) {
                report.g_series = false;
                report.failures.push(format!("g_series at ({a}, {b})"));
            }
            let c = |x, y| g_closed(x, y).expect("in domain");
            if c(a + 1, b + 1) != c(a + 1, b) + c(a, b + 1) {
                report.g_closed = false;
                report.failures.push(format!("g_closed at ({a}, {b})"));
            }
        }
    }
    for a in lo.max(3)..hi {
        for b in lo.max(3)..hi {
            let f = |x, y| f_cupcap(x, y).expect("in domain");
            if f(a + 1, b + 1) != f(a + 1, b) + f(a, b + 1) {
                report.f_cupcap = false;
                report.failures.push(format!("f at ({a}, {b})"));
            }
        }
    }
    report
}

/// One row of the bound table.
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub f_cupcap: BigIntString,
    pub g: BigIntString,
    pub new_bound: BigIntString,
    pub prior: PriorBounds,
    pub ratio: String,
    pub ratio_decimal: String,
}

pub fn bound_row(n: usize) -> Result<BoundRow> {
    let new_bound = new_upper_bound(n)?;
    let ratio = BigRational::new(new_bound.clone(), central(n));
    Ok(BoundRow {
        n,
        f_cupcap: BigIntString(f_cupcap(n - 1, n - 1)?),
        g: BigIntString(g_series(n, n - 2)?),
        new_bound: BigIntString(new_bound),
        prior: prior_bounds(n)?,
        ratio_decimal: to_decimal(&ratio, 40),
        ratio: ratio.to_string(),
    })
}

pub fn bound_table(range: RangeInclusive<usize>) -> Result<Vec<BoundRow>> {
    if *range.start() < 6 || range.is_empty() {
        return Err(domain(format!("bound table needs a non-empty range starting at n >= 6, got {range:?}")));
    }
    range.map(bound_row).collect()
}

pub const CSV_HEADER: &str = "n,f_cupcap,g,new_bound,erdos_szekeres,chung_graham,kleitman_pachter,toth_valtr_1998,toth_valtr_2005,ratio_decimal,ratio_exact";

pub fn to_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let p = &row.prior;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.n,
            row.f_cupcap.0,
            row.g.0,
            row.new_bound.0,
            p.erdos_szekeres.0,
            p.chung_graham.0,
            p.kleitman_pachter.0,
            p.toth_valtr_1998.0,
            p.toth_valtr_2005.0,
            row.ratio_decimal,
            row.ratio,
        ));
    }
    out
}

/// Decimal expansion rounded half-up to `digits` significant digits.
pub fn to_decimal(value: &BigRational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let v = value.abs();
    let ten = BigInt::from(10);
    // Find e with 10^e <= v < 10^(e+1).
    let mut e: i64 = v.numer().to_string().len() as i64 - v.denom().to_string().len() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow(e) > v {
        e -= 1;
    }
    while pow(e + 1) <= v {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &v * pow(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut q = q;
    if rem * 2 >= *scaled.denom() {
        q += 1;
    }
    let mut text = q.to_string();
    // Rounding may carry into a new digit.
    let mut exp = e;
    if text.len() > digits {
        text.pop();
        exp += 1;
    }
    let body = if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= text.len() {
            format!("{}{}", text, "0".repeat(int_len - text.len()))
        } else {
            format!("{}.{}", &text[..int_len], &text[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), text)
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(4, 2), b(6));
        assert_eq!(binom(2, -1), b(0));
        assert_eq!(binom(7, 4), b(35));
        assert_eq!(binom(-1, 0), b(0));
        assert_eq!(binom(3, 5), b(0));
        assert_eq!(binom(0, 0), b(1));
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_cupcap(3, 3).unwrap(), b(2));
        assert_eq!(f_cupcap(4, 4).unwrap(), b(6));
        assert_eq!(f_cupcap(5, 5).unwrap(), b(20));
        assert!(matches!(f_cupcap(2, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn w_examples() {
        assert_eq!(w(4, 4, 4).unwrap(), b(4));
        assert_eq!(w(5, 4, 4).unwrap(), b(0));
        assert_eq!(w(5, 4, 5).unwrap(), b(4));
        assert!(w(3, 4, 4).is_err());
        assert!(w(4, 3, 4).is_err());
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_series(4, 5).unwrap(), b(8));
        assert_eq!(g_closed(4, 5).unwrap(), b(8));
        assert_eq!(g_series(5, 5).unwrap(), b(15));
        assert_eq!(w(4, 5, 5).unwrap() + w(5, 5, 5).unwrap(), b(15));
        assert_eq!(g_series(6, 4).unwrap(), b(11));
        for m in 4..=20 {
            let m64 = m as i64;
            assert_eq!(g_series(m, 4).unwrap(), binom(m64, 2) - m64 + 2);
            assert_eq!(g_closed(m, 5).unwrap(), binom(m64, 3) + m64);
        }
    }

    #[test]
    fn g_series_matches_direct_sum() {
        for m in 4..=15 {
            for l in 4..=15 {
                let direct: BigInt = (4..=l + 3).map(|i| w(i, m, l).unwrap()).sum();
                assert_eq!(g_series(m, l).unwrap(), direct, "({m}, {l})");
            }
        }
    }

    #[test]
    fn new_bound_examples() {
        assert_eq!(new_upper_bound(6).unwrap(), b(33));
        assert_eq!(new_bound_closed_form(6).unwrap(), b(35 - 4 + 2));
        assert_eq!(new_upper_bound(7).unwrap(), b(114));
        assert!(new_upper_bound(5).is_err());
    }

    #[test]
    fn prior_examples() {
        assert_eq!(prior_bounds(5).unwrap().erdos_szekeres.0, b(21));
        assert_eq!(prior_bounds(6).unwrap().toth_valtr_2005.0, b(36));
    }

    #[test]
    fn limit_constants() {
        assert_eq!(g_limit_constant(5).unwrap(), r(1, 16));
        assert_eq!(g_limit_constant(4).unwrap(), r(1, 4));
        let d = limit_decomposition();
        assert_eq!(d.g_total, "13/32");
        assert_eq!(d.bound, "29/32");
        assert_eq!(d.g_total_single_weight, "3/8");
        // Partial sums approach the tail closed form exactly.
        let mut partial = BigRational::zero();
        for i in 5..60usize {
            partial += g_limit_constant(i).unwrap();
            assert_eq!(&partial + tail_from(i + 1), tail_from(5));
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&r(29, 32), 5), "0.90625");
        assert_eq!(to_decimal(&r(29, 32), 3), "0.906");
        assert_eq!(to_decimal(&r(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&r(1234, 1), 2), "1200");
        assert_eq!(to_decimal(&r(-1, 400), 2), "-0.0025");
        assert_eq!(to_decimal(&r(999, 1000), 2), "1.0");
    }
}

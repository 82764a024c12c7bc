//! Exact rational scalars and the string grammar used by the file formats.
//!
//! All verdict-relevant arithmetic in this crate runs on [`Rat`]
//! (arbitrary-precision rationals, always in lowest terms with positive
//! denominator). Floating point appears only in candidate-proposal
//! heuristics, and every proposed value is re-verified exactly before it
//! can influence a verdict.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Vector of exact rationals; its length is fixed by the owning space.
pub type Vector = Vec<Rat>;

/// Dense matrix of exact rationals (row major).
pub type Mat = Vec<Vec<Rat>>;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Rational from an integer pair; panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses the file-format grammar `-?[0-9]+(/[1-9][0-9]*)?`.
///
/// The denominator may not carry a sign or leading zeros, so every value
/// has exactly one accepted spelling up to numerator leading zeros.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num_digits = num_str.strip_prefix('-').unwrap_or(num_str);
    if num_digits.is_empty() || !num_digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid rational literal {s:?}"));
    }
    let num: BigInt = num_str.parse().map_err(|_| format!("invalid rational literal {s:?}"))?;
    let den: BigInt = match den_str {
        None => BigInt::one(),
        Some(d) => {
            let ok = !d.is_empty()
                && d.bytes().all(|b| b.is_ascii_digit())
                && !d.starts_with('0');
            if !ok {
                return Err(format!("invalid rational literal {s:?}"));
            }
            d.parse().map_err(|_| format!("invalid rational literal {s:?}"))?
        }
    };
    Ok(Rat::new(num, den))
}

/// Formats a rational in the file-format grammar: `p` or `p/q` with `q > 1`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat_vec(items: &[String]) -> Result<Vector, String> {
    items.iter().map(|s| parse_rat(s)).collect()
}

pub fn format_rat_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Sum of squared entries: the squared Euclidean norm in the fixed basis.
pub fn euclidean_norm_sq(v: &[Rat]) -> Rat {
    v.iter().map(|x| x * x).fold(Rat::zero(), |a, b| a + b)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Rat, v: &[Rat]) -> Vector {
    v.iter().map(|x| s * x).collect()
}

pub fn vec_neg(v: &[Rat]) -> Vector {
    v.iter().map(|x| -x).collect()
}

pub fn big_vec_to_rat(v: &[BigInt]) -> Vector {
    v.iter().map(rat_big).collect()
}

/// Exact integrality test for a rational vector.
pub fn rat_vec_to_big(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| if x.denom().is_one() { Some(x.numer().clone()) } else { None })
        .collect()
}

/// Rescales a nonzero rational vector to a primitive integer vector
/// pointing the same way; returns the positive rational `s` with
/// `v = s * primitive`.
pub fn primitive_integer_form(v: &[Rat]) -> Option<(Rat, Vec<BigInt>)> {
    if is_zero_vec(v) {
        return None;
    }
    let mut den_lcm = BigInt::one();
    for x in v {
        den_lcm = num_integer::lcm(den_lcm, x.denom().clone());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&den_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = num_integer::gcd(g, x.clone());
    }
    let primitive: Vec<BigInt> = scaled.iter().map(|x| x / &g).collect();
    // v = (g / den_lcm) * primitive, and g > 0, den_lcm > 0.
    Some((Rat::new(g, den_lcm), primitive))
}

/// Largest integer `r` with `r*r <= n`; `n` must be nonnegative.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative value");
    n.sqrt()
}

/// A positive rational `t` with `t^2 <= bound`, as large as the scaled
/// integer square root allows. Returns zero only for `bound = 0`.
pub fn rational_sqrt_lower(bound: &Rat) -> Rat {
    assert!(!bound.is_negative());
    if bound.is_zero() {
        return Rat::zero();
    }
    // sqrt(N/D) = sqrt(N*D)/D; scale by 2^40 so tiny bounds stay nonzero.
    let shift: u32 = 40;
    let scaled = (bound.numer() * bound.denom()) << (2 * shift);
    let root = isqrt(&scaled);
    Rat::new(root, bound.denom() << shift)
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// by continued fractions. Returns the convergents in order of increasing
/// denominator (so increasing accuracy), final one closest.
pub fn cf_convergents(x: f64, max_den: u64) -> Vec<Rat> {
    if !x.is_finite() {
        return vec![];
    }
    let mut out = Vec::new();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::one());
    out.push(Rat::new(p1.clone(), q1.clone()));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        if a >= 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rat::new(p2.clone(), q2.clone()));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = r - a;
    }
    out
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_sign(r: &Rat) -> i8 {
    match r.numer().sign() {
        Sign::Plus => 1,
        Sign::NoSign => 0,
        Sign::Minus => -1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-7", "3/4", "-3/4", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Non-reduced input is accepted and comes back reduced.
        assert_eq!(format_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("007").unwrap()), "7");
    }

    #[test]
    fn parse_rejects_bad_grammar() {
        for s in ["", "1/0", "1/-2", "-1/02", "a", "1.5", "1/", "/2", "+3"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(euclidean_norm_sq(&[rat_int(0), rat_int(0), rat_int(0)]), rat_int(0));
        assert_eq!(euclidean_norm_sq(&[rat_int(3), rat_int(4)]), rat_int(25));
        assert_eq!(euclidean_norm_sq(&[rat(1, 2), rat(1, 2)]), rat(1, 2));
    }

    #[test]
    fn primitive_form_recovers_scale() {
        let v = vec![rat(3, 2), rat(-9, 4)];
        let (s, p) = primitive_integer_form(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3)]);
        assert_eq!(s, rat(3, 4));
        for (x, pi) in v.iter().zip(&p) {
            assert_eq!(x, &(&s * rat_big(pi)));
        }
    }

    #[test]
    fn sqrt_lower_bound_is_sound() {
        for (n, d) in [(1i64, 2i64), (2, 1), (9, 1), (1, 1000000), (5, 7)] {
            let b = rat(n, d);
            let t = rational_sqrt_lower(&b);
            assert!(&t * &t <= b);
            assert!(t > rat_zero());
        }
    }

    #[test]
    fn convergents_find_simple_fractions() {
        let cs = cf_convergents(0.4999993, 1_000_000);
        assert!(cs.contains(&rat(1, 2)));
        let cs = cf_convergents(0.333333333, 1_000_000);
        assert!(cs.contains(&rat(1, 3)));
    }
}

//! Growth-rate machinery for Stanley-Wilf sequences: closed-form limits,
//! finite lower bounds from computed counts, the `c -> (1 + sqrt(c))^2`
//! upper-bound recursion, and the growth-exponent optimizer.
//!
//! Closed forms live in a single quadratic field per computation, so they
//! are carried exactly as `a + b*sqrt(c)` with rational `a`, `b` and a
//! square-free radicand `c`. That makes identities like
//! `(1 + sqrt(8))^2 = 9 + 4*sqrt(2)` hard equality tests instead of
//! floating-point comparisons.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use thiserror::Error;

use crate::count::{CountError, Counter};
use crate::perm::{tower_pattern, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("max_n must be at least 1")]
    EmptyRange,
}

/// An exact value `a + b*sqrt(c)` with rational `a`, `b` and square-free
/// integer radicand `c`. Rational values are normalized to `b = 0, c = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicValue {
    a: BigRational,
    b: BigRational,
    c: u64,
}

fn big(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

/// Splits `c` into `s^2 * f` with `f` square-free; returns `(s, f)`.
fn square_free(mut c: u64) -> (u64, u64) {
    let mut s = 1;
    let mut d = 2;
    while d * d <= c {
        while c % (d * d) == 0 {
            c /= d * d;
            s *= d;
        }
        d += 1;
    }
    (s, c)
}

/// The exact square root of a nonnegative rational, if it is rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let numer = r.numer();
    let denom = r.denom();
    let sn = numer.sqrt();
    let sd = denom.sqrt();
    if &(&sn * &sn) == numer && &(&sd * &sd) == denom {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl AlgebraicValue {
    pub fn new(a: BigRational, b: BigRational, c: u64) -> Self {
        if b.is_zero() || c == 0 {
            return AlgebraicValue { a, b: BigRational::zero(), c: 0 };
        }
        let (s, f) = square_free(c);
        let b = b * big(s as i64);
        if f == 1 {
            return AlgebraicValue { a: a + b, b: BigRational::zero(), c: 0 };
        }
        AlgebraicValue { a, b, c: f }
    }

    pub fn rational(a: BigRational) -> Self {
        AlgebraicValue { a, b: BigRational::zero(), c: 0 }
    }

    pub fn integer(v: i64) -> Self {
        AlgebraicValue::rational(big(v))
    }

    /// `sqrt(c)` itself.
    pub fn root_of(c: u64) -> Self {
        AlgebraicValue::new(BigRational::zero(), BigRational::one(), c)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sum when both values live in the same quadratic field.
    pub fn checked_add(&self, other: &AlgebraicValue) -> Option<AlgebraicValue> {
        let c = match (self.is_rational(), other.is_rational()) {
            (true, _) => other.c,
            (_, true) => self.c,
            _ if self.c == other.c => self.c,
            _ => return None,
        };
        Some(AlgebraicValue::new(
            &self.a + &other.a,
            &self.b + &other.b,
            c,
        ))
    }

    /// Exact product when both values live in the same quadratic field.
    pub fn checked_mul(&self, other: &AlgebraicValue) -> Option<AlgebraicValue> {
        if self.is_rational() || other.is_rational() || self.c == other.c {
            let c = if self.is_rational() { other.c } else { self.c };
            let radicand = big(c as i64);
            let a = &self.a * &other.a + &self.b * &other.b * radicand;
            let b = &self.a * &other.b + &self.b * &other.a;
            return Some(AlgebraicValue::new(a, b, c));
        }
        None
    }

    pub fn square(&self) -> AlgebraicValue {
        self.checked_mul(self).expect("same radicand")
    }

    pub fn scale(&self, k: i64) -> AlgebraicValue {
        AlgebraicValue::new(&self.a * big(k), &self.b * big(k), self.c)
    }

    pub fn add_integer(&self, k: i64) -> AlgebraicValue {
        AlgebraicValue::new(&self.a + big(k), self.b.clone(), self.c)
    }

    /// The exact nonnegative square root, when it stays inside a quadratic
    /// field. `sqrt(9 + 4*sqrt(2)) = 1 + 2*sqrt(2)`, `sqrt(8) = 2*sqrt(2)`.
    pub fn sqrt_exact(&self) -> Option<AlgebraicValue> {
        if self.to_f64() < 0.0 {
            return None;
        }
        if self.is_rational() {
            if self.a.is_zero() {
                return Some(AlgebraicValue::integer(0));
            }
            // sqrt(p/q) = sqrt(p*q) / q
            let pq = self.a.numer() * self.a.denom();
            let pq = pq.to_u64()?;
            let (s, f) = square_free(pq);
            let coeff = BigRational::new(BigInt::from(s), self.a.denom().clone());
            return Some(AlgebraicValue::new(BigRational::zero(), coeff, f));
        }
        // solve (x + y*sqrt(c))^2 = a + b*sqrt(c):
        //   x^2 + c*y^2 = a and 2*x*y = b, so x^2 = (a +/- sqrt(a^2 - c*b^2)) / 2
        let norm = &self.a * &self.a - &self.b * &self.b * big(self.c as i64);
        let t = rational_sqrt(&norm)?;
        for x_squared in [(&self.a + &t) / big(2), (&self.a - &t) / big(2)] {
            if let Some(x) = rational_sqrt(&x_squared) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&x * big(2));
                let candidate = AlgebraicValue::new(x, y, self.c);
                if candidate.square() == *self && candidate.to_f64() >= 0.0 {
                    return Some(candidate);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.c as f64).sqrt()
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let abs_b = self.b.abs();
        let radical = if abs_b.is_one() {
            format!("sqrt({})", self.c)
        } else {
            format!("{}*sqrt({})", abs_b, self.c)
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{radical}");
            }
            return write!(f, "{radical}");
        }
        if self.b.is_negative() {
            write!(f, "{}-{radical}", self.a)
        } else {
            write!(f, "{}+{radical}", self.a)
        }
    }
}

/// The exact Stanley-Wilf limit for the families with known closed forms:
/// monotone patterns (`(k-1)^2`), every length-3 pattern (4), and the
/// `tower_pattern` family together with its reverse complements
/// (`(k-4+sqrt(8))^2`, which is 8 at `k = 4`).
pub fn closed_form_limit(q: &Permutation) -> Option<AlgebraicValue> {
    let k = q.len();
    if k == 0 {
        return None;
    }
    if *q == Permutation::increasing(k) || *q == Permutation::decreasing(k) {
        let r = (k as i64 - 1) * (k as i64 - 1);
        return Some(AlgebraicValue::integer(r));
    }
    if k == 3 {
        return Some(AlgebraicValue::integer(4));
    }
    if k >= 4 {
        let tower = tower_pattern(k).expect("k >= 4");
        if *q == tower || q.reverse_complement() == tower {
            let d = k as i64 - 4;
            // (d + sqrt(8))^2 = d^2 + 8 + 4d*sqrt(2)
            return Some(AlgebraicValue::new(big(d * d + 8), big(4 * d), 2));
        }
    }
    None
}

/// One point of a Stanley-Wilf sequence: `n`, the exact count, and
/// `count^(1/n)`.
#[derive(Debug, Clone)]
pub struct FeketePoint {
    pub n: usize,
    pub count: num::BigUint,
    pub root: f64,
}

/// The best finite lower bound `S_n(q)^(1/n)` over the computed range.
/// No extrapolation: the value is exactly what the counts certify.
#[derive(Debug, Clone)]
pub struct FeketeBound {
    pub best: f64,
    pub witness_n: usize,
    pub sequence: Vec<FeketePoint>,
}

pub fn fekete_lower_bound(
    counter: &Counter,
    q: &Permutation,
    max_n: usize,
) -> Result<FeketeBound, LimitError> {
    if max_n == 0 {
        return Err(LimitError::EmptyRange);
    }
    let mut sequence = Vec::with_capacity(max_n);
    let mut best = f64::NEG_INFINITY;
    let mut witness_n = 1;
    for n in 1..=max_n {
        let count = counter.count_avoiders(q, n)?;
        let root = count.to_f64().unwrap_or(f64::NAN).powf(1.0 / n as f64);
        if root > best {
            best = root;
            witness_n = n;
        }
        sequence.push(FeketePoint { n, count, root });
    }
    Ok(FeketeBound { best, witness_n, sequence })
}

/// Iterates `c -> (1 + sqrt(c))^2` in floating point, returning the value
/// after each of the `steps` applications.
pub fn upper_chain(c0: f64, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps);
    let mut c = c0;
    for _ in 0..steps {
        c = (1.0 + c.sqrt()).powi(2);
        out.push(c);
    }
    out
}

/// The exact variant of [`upper_chain`]; `None` if some iterate's square
/// root leaves the quadratic field.
pub fn upper_chain_exact(c0: &AlgebraicValue, steps: usize) -> Option<Vec<AlgebraicValue>> {
    let mut out = Vec::with_capacity(steps);
    let mut c = c0.clone();
    for _ in 0..steps {
        c = prepend_limit_step_exact(&c)?;
        out.push(c.clone());
    }
    Some(out)
}

/// The limit of the prepend-one recursion: `L -> 1 + L + 2*sqrt(L)`,
/// i.e. `(1 + sqrt(L))^2`.
pub fn prepend_limit_step(l: f64) -> f64 {
    1.0 + l + 2.0 * l.sqrt()
}

/// Exact variant of [`prepend_limit_step`].
pub fn prepend_limit_step_exact(l: &AlgebraicValue) -> Option<AlgebraicValue> {
    let root = l.sqrt_exact()?;
    l.checked_add(&root.scale(2))
        .and_then(|v| v.checked_add(&AlgebraicValue::integer(1)))
}

/// The limiting growth exponent of `(binom(n, alpha*n)^2 * c^((1-alpha)*n))^(1/n)`:
/// `exp(2*H(alpha)) * c^(1-alpha)` with `H` the natural entropy. The
/// endpoints take their limit values `c` and `1`.
pub fn lower_bound_objective(alpha: f64, c: f64) -> f64 {
    assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
    assert!(c > 0.0, "c must be positive");
    if alpha == 0.0 {
        return c;
    }
    if alpha == 1.0 {
        return 1.0;
    }
    let h = -alpha * alpha.ln() - (1.0 - alpha) * (1.0 - alpha).ln();
    (2.0 * h + (1.0 - alpha) * c.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeResult {
    pub alpha: f64,
    pub value: f64,
}

/// Maximizes [`lower_bound_objective`] over `[0, 1]` by golden-section
/// search after a grid check of unimodality. The maximum sits at
/// `alpha = 1/(1 + sqrt(c))` with value `(1 + sqrt(c))^2`.
pub fn optimize_lower_bound(c: f64) -> OptimizeResult {
    // unimodality check on a 10^3 grid before searching
    let grid: Vec<f64> = (0..=1000)
        .map(|i| lower_bound_objective(i as f64 / 1000.0, c))
        .collect();
    let argmax = grid
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("nonempty grid")
        .0;
    let eps = 1e-9;
    for i in 1..=argmax {
        assert!(grid[i] >= grid[i - 1] - eps, "objective is not unimodal on the grid");
    }
    for i in argmax..grid.len() - 1 {
        assert!(grid[i + 1] <= grid[i] + eps, "objective is not unimodal on the grid");
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = lower_bound_objective(x1, c);
    let mut f2 = lower_bound_objective(x2, c);
    while b - a > 1e-10 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = lower_bound_objective(x2, c);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = lower_bound_objective(x1, c);
        }
    }
    let alpha = 0.5 * (a + b);
    OptimizeResult { alpha, value: lower_bound_objective(alpha, c) }
}

/// `(k - 1)^2`, the growth rate of the monotone pattern of length `k` and a
/// floor for every layered pattern of that length.
pub fn layered_floor(k: usize) -> u64 {
    let k = k as u64;
    if k == 0 {
        return 1; // unused; keeps the function total
    }
    (k - 1) * (k - 1)
}

/// The universal floor `e^(-3) * k^2` on the growth rate of avoiding any
/// length-`k` pattern.
pub fn valtr_floor(k: usize) -> f64 {
    (-3.0_f64).exp() * (k * k) as f64
}

/// An upper bound derived by stripping leading 1s down to a pattern with a
/// cited exponential bound (any length-3 pattern with constant 4, or `1342`
/// with constant 8) and re-applying the prepend recursion. Each recursion
/// step is only sound when the shorter pattern starts with 1, so the chain
/// attaches exactly when the stripping witnesses that.
#[derive(Debug, Clone)]
pub struct UpperChainBound {
    pub base: Permutation,
    pub base_value: AlgebraicValue,
    /// The exact value after each recursion step; empty when the pattern is
    /// itself a base.
    pub steps: Vec<AlgebraicValue>,
}

impl UpperChainBound {
    pub fn value(&self) -> &AlgebraicValue {
        self.steps.last().unwrap_or(&self.base_value)
    }
}

fn base_bound(q: &Permutation) -> Option<AlgebraicValue> {
    if q.len() == 3 {
        return Some(AlgebraicValue::integer(4));
    }
    if q.canonical_string() == "1,3,4,2" {
        return Some(AlgebraicValue::integer(8));
    }
    None
}

/// Derives the upper chain for `q`, if one attaches.
pub fn derive_upper_chain(q: &Permutation) -> Option<UpperChainBound> {
    let mut current = q.clone();
    let mut steps = 0;
    loop {
        if let Some(base_value) = base_bound(&current) {
            // a recursion step needs its shorter pattern to start with 1
            if steps == 0 || current.entries().first() == Some(&1) {
                let chain = upper_chain_exact(&base_value, steps)
                    .expect("chain stays in one quadratic field");
                return Some(UpperChainBound { base: current, base_value, steps: chain });
            }
            return None;
        }
        match current.strip_leading_one() {
            Some(next) if !next.is_empty() => {
                current = next;
                steps += 1;
            }
            _ => return None,
        }
    }
}

/// Everything the toolkit can say about one pattern's Stanley-Wilf limit.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub pattern: Permutation,
    /// Exact limit, for patterns in the known families.
    pub closed_form: Option<AlgebraicValue>,
    /// Best certified `S_n^(1/n)` over the computed range.
    pub finite_lower: FeketeBound,
    /// Upper bound from the prepend recursion, when it attaches.
    pub upper_chain: Option<UpperChainBound>,
    /// The universal floor `e^(-3) * k^2`.
    pub valtr_floor: f64,
}

pub fn bound_report(
    counter: &Counter,
    q: &Permutation,
    max_n: usize,
) -> Result<BoundReport, LimitError> {
    let finite_lower = fekete_lower_bound(counter, q, max_n)?;
    let closed_form = closed_form_limit(q);
    let upper_chain = derive_upper_chain(q);
    if let Some(cf) = &closed_form {
        assert!(
            finite_lower.best <= cf.to_f64() + 1e-9,
            "finite lower bound exceeds the closed form"
        );
        if let Some(chain) = &upper_chain {
            assert!(
                cf.to_f64() <= chain.value().to_f64() + 1e-9,
                "closed form exceeds the upper chain"
            );
        }
    }
    Ok(BoundReport {
        pattern: q.clone(),
        closed_form,
        finite_lower,
        upper_chain,
        valtr_floor: valtr_floor(q.len()),
    })
}

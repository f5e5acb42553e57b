//! Bound functions for `r(S(n,m))`, exact over any [`Scalar`].
//!
//! With `x = n/m`, `r(S(n,m)) / m` tends to a limit `rhat(x)` that is
//! sandwiched between the piecewise linear [`rhat_l`] and [`rhat_u`], the
//! minimum of [`u_eval`] over the invalid-point table.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::graph::DeltaEtaProfile;
use crate::ramsey::DoubleStar;
use crate::scalar::{ceil_int, floor_int, max_of, rat, to_decimal, to_fraction, Scalar};
use crate::validity::{Family, InvalidPointTable};

/// `a x + b` on `[start, end]` (`end = None`: unbounded).
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<S> {
    pub start: S,
    pub end: Option<S>,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> Piece<S> {
    pub fn eval(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }
}

/// Continuous piecewise affine function on `[1, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseBound<S> {
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> PiecewiseBound<S> {
    /// Checks that the pieces start at 1, abut, end unbounded, and agree at
    /// every breakpoint (exactly for exact scalars).
    pub fn new(pieces: Vec<Piece<S>>) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| usage("a piecewise bound needs at least one piece"))?;
        if first.start != S::one() {
            return Err(usage("the first piece must start at x = 1"));
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let end = w[0]
                .end
                .as_ref()
                .ok_or_else(|| usage(format!("piece {i} is unbounded but not last")))?;
            if *end != w[1].start || w[1].start <= w[0].start {
                return Err(usage(format!("pieces {i} and {} do not abut", i + 1)));
            }
            if !w[0].eval(end).approx_eq(&w[1].eval(end)) {
                return Err(Error::Validation(format!("discontinuity at breakpoint {end:?}")));
            }
        }
        if pieces.last().expect("nonempty").end.is_some() {
            return Err(usage("the last piece must be unbounded"));
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> Vec<S> {
        self.pieces.iter().filter_map(|p| p.end.clone()).collect()
    }

    /// Value at `x >= 1` (at a breakpoint, the left piece).
    pub fn eval(&self, x: &S) -> Result<S> {
        if *x < S::one() {
            return Err(usage(format!("bound evaluated at x = {x:?} < 1")));
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| p.end.as_ref().map_or(true, |e| x <= e))
            .expect("last piece is unbounded");
        Ok(piece.eval(x))
    }

    /// Values of the two pieces meeting at each breakpoint.
    pub fn breakpoint_values(&self) -> Vec<(S, S, S)> {
        self.pieces
            .windows(2)
            .map(|w| {
                let b = w[0].end.clone().expect("inner piece");
                (b.clone(), w[0].eval(&b), w[1].eval(&b))
            })
            .collect()
    }
}

fn piece<S: Scalar>(start: (i64, i64), end: Option<(i64, i64)>, slope: (i64, i64), intercept: (i64, i64)) -> Piece<S> {
    Piece {
        start: S::from_ratio(start.0, start.1),
        end: end.map(|(a, b)| S::from_ratio(a, b)),
        slope: S::from_ratio(slope.0, slope.1),
        intercept: S::from_ratio(intercept.0, intercept.1),
    }
}

/// The piecewise linear lower bound: `x+2`, `5x/3 + 5/6`, `21x/10`,
/// `189x/115 + 21/23`, `2x` with breakpoints `7/4, 25/13, 2, 105/41`.
pub fn rhat_l_function<S: Scalar>() -> PiecewiseBound<S> {
    PiecewiseBound::new(vec![
        piece((1, 1), Some((7, 4)), (1, 1), (2, 1)),
        piece((7, 4), Some((25, 13)), (5, 3), (5, 6)),
        piece((25, 13), Some((2, 1)), (21, 10), (0, 1)),
        piece((2, 1), Some((105, 41)), (189, 115), (21, 23)),
        piece((105, 41), None, (2, 1), (0, 1)),
    ])
    .expect("lower bound pieces are continuous")
}

/// `max(x+2, 2x)`, the value conjectured by Grossman, Harary and Klawe.
pub fn rhat_star_l_function<S: Scalar>() -> PiecewiseBound<S> {
    PiecewiseBound::new(vec![piece((1, 1), Some((2, 1)), (1, 1), (2, 1)), piece((2, 1), None, (2, 1), (0, 1))])
        .expect("conjectured bound pieces are continuous")
}

pub fn rhat_l<S: Scalar>(x: &S) -> Result<S> {
    rhat_l_function().eval(x)
}

pub fn rhat_star_l<S: Scalar>(x: &S) -> Result<S> {
    rhat_star_l_function().eval(x)
}

/// `u_{delta,eta}(x) = max(x+2, 2x, x/(1-delta), (x+1)/(1-eta))`.
pub fn u_eval<S: Scalar>(delta: &S, eta: &S, x: &S) -> Result<S> {
    let one = S::one();
    if *x < one {
        return Err(usage(format!("u evaluated at x = {x:?} < 1")));
    }
    if *delta >= one || *eta >= one {
        return Err(usage("u needs delta < 1 and eta < 1"));
    }
    let two = S::from_int(2);
    let a = max_of(x.clone() + two.clone(), two * x.clone());
    let b = max_of(x.clone() / (one.clone() - delta.clone()), (x.clone() + one.clone()) / (one - eta.clone()));
    Ok(max_of(a, b))
}

/// `min_i u_{row i}(x)` over the ten table rows, with the first
/// minimizing row (1-based).
pub fn rhat_u_with_row<S: Scalar>(x: &S) -> Result<(S, usize)> {
    let table = InvalidPointTable::standard();
    let mut best: Option<(S, usize)> = None;
    for (k, row) in table.rows().iter().enumerate() {
        let v = u_eval(&S::from_rational(&row.delta), &S::from_rational(&row.eta), x)?;
        if best.as_ref().map_or(true, |(b, _)| v < *b) {
            best = Some((v, k + 1));
        }
    }
    Ok(best.expect("ten rows"))
}

pub fn rhat_u<S: Scalar>(x: &S) -> Result<S> {
    rhat_u_with_row(x).map(|(v, _)| v)
}

/// `7/60 (5 + 4x + sqrt(25 + 40x + 106 x^2))`, in floating point.
pub fn rhat_l_sqrt_tight(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(usage(format!("the square-root bound is stated for x >= 2, got {x}")));
    }
    Ok(7.0 / 60.0 * (5.0 + 4.0 * x + (25.0 + 40.0 * x + 106.0 * x * x).sqrt()))
}

/// The square-root bound exactly, when `25 + 40x + 106x^2` is the square
/// of a rational (as at `x = 2`, where it is `23^2`).
pub fn rhat_l_sqrt_tight_exact(x: &BigRational) -> Result<Option<BigRational>> {
    if *x < rat(2, 1) {
        return Err(usage(format!("the square-root bound is stated for x >= 2, got {x}")));
    }
    let disc = rat(25, 1) + rat(40, 1) * x + rat(106, 1) * x * x;
    let (num, den) = (disc.numer().sqrt(), disc.denom().sqrt());
    if &num * &num != *disc.numer() || &den * &den != *disc.denom() {
        return Ok(None);
    }
    let root = BigRational::new(num, den);
    Ok(Some(rat(7, 60) * (rat(5, 1) + rat(4, 1) * x + root)))
}

/// Ramsey upper bound from an invalid point:
/// `max(2n+2, n+2m+2, ceil(n/(1-delta)), ceil((n+m+1)/(1-eta)))`.
///
/// For the limit row `(1/2, 1/3)` the point itself is not invalid; the
/// bound is the limit over `(1/2 + e, 1/3 + e)`, which replaces each
/// `ceil(t)` by `floor(t) + 1`. Points the table does not certify are
/// rejected.
pub fn corollary42_bound(s: DoubleStar, point: &DeltaEtaProfile) -> Result<BigInt> {
    let table = InvalidPointTable::standard();
    let one = BigRational::one();
    if point.delta >= one || point.eta >= one {
        return Err(usage("the bound needs delta < 1 and eta < 1"));
    }
    let round: fn(&BigRational) -> BigInt = if table.invalid_row(point).is_some() {
        ceil_int
    } else if table.closure_row(point).is_some() {
        |t| floor_int(t) + 1
    } else {
        return Err(usage(format!("{point} is not certified invalid by the table")));
    };
    let (n, m) = (s.n() as i64, s.m() as i64);
    let a = (&one - &point.delta).recip() * rat(n, 1);
    let b = (&one - &point.eta).recip() * rat(n + m + 1, 1);
    Ok([
        BigInt::from(2 * n + 2),
        BigInt::from(n + 2 * m + 2),
        round(&a),
        round(&b),
    ]
    .into_iter()
    .max()
    .expect("four terms"))
}

/// Smallest [`corollary42_bound`] over the table rows.
pub fn table_ramsey_bound(s: DoubleStar) -> Option<BigInt> {
    InvalidPointTable::standard()
        .rows()
        .iter()
        .filter_map(|row| corollary42_bound(s, row).ok())
        .min()
}

/// Largest `c` such that `n <= c (m+1)` gives both
/// `n/(1-delta) <= n+2m+2` and `(n+m+1)/(1-eta) <= n+2m+2`, hence
/// `r(S(n,m)) <= n+2m+2`. Solving each for `n/(m+1)` gives
/// `2(1-delta)/delta` and `(1-2 eta)/eta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Threshold {
    /// `None` when neither inequality constrains `n`.
    pub value: Option<BigRational>,
    pub from_delta: Option<BigRational>,
    pub from_eta: Option<BigRational>,
    /// `value <= 1`: no `n > m + 1` is covered.
    pub vacuous: bool,
}

pub fn mainthm_threshold(point: &DeltaEtaProfile) -> Result<Threshold> {
    let one = BigRational::one();
    let zero = BigRational::zero();
    if point.delta >= one || point.eta >= one || point.delta.is_negative() || point.eta.is_negative() {
        return Err(usage("the threshold needs 0 <= delta, eta < 1"));
    }
    if InvalidPointTable::standard().closure_row(point).is_none() {
        return Err(usage(format!("{point} is not certified invalid by the table")));
    }
    let from_delta = (point.delta > zero).then(|| rat(2, 1) * (&one - &point.delta) / &point.delta);
    let from_eta = (point.eta > zero).then(|| (&one - rat(2, 1) * &point.eta) / &point.eta);
    let value = match (&from_delta, &from_eta) {
        (Some(a), Some(b)) => Some(a.min(b).clone()),
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        (None, None) => None,
    };
    let vacuous = value.as_ref().is_some_and(|c| *c <= one);
    Ok(Threshold {
        value,
        from_delta,
        from_eta,
        vacuous,
    })
}

/// Both inequalities behind the `n+2m+2` bound, exactly.
pub fn mainthm_inequalities_hold(point: &DeltaEtaProfile, n: &BigInt, m: &BigInt) -> bool {
    let one = BigRational::one();
    let nq = BigRational::from_integer(n.clone());
    let mq = BigRational::from_integer(m.clone());
    let rhs = &nq + rat(2, 1) * &mq + rat(2, 1);
    &nq / (&one - &point.delta) <= rhs && (&nq + &mq + &one) / (&one - &point.eta) <= rhs
}

/// The best explicit lower bound on `rhat(x)` from the two families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyBound {
    #[serde(serialize_with = "ser_fraction")]
    pub r: BigRational,
    pub family: Family,
    #[serde(serialize_with = "ser_fraction")]
    pub p: BigRational,
}

fn ser_fraction<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_fraction(r))
}

/// Largest of: `r1 = 5x/3 + 5/6` (C5 at `p1 = (x+2)/(2x+1)`),
/// `r2 = 21x/10` (L(K7) at `p = 1`, for `x <= 2`) and
/// `r3 = 189x/115 + 21/23` (L(K7) at `p3 = (20+13x)/(10+18x)`, for
/// `x >= 2`). Before returning, checks that the family point at `p`
/// dominates `(1 - x/r, 1 - (x+1)/r)` with equality in the first
/// coordinate.
pub fn optimal_family_bound(x: &BigRational) -> Result<FamilyBound> {
    let one = BigRational::one();
    if *x < one {
        return Err(usage(format!("x = {x} < 1")));
    }
    let two = rat(2, 1);
    let mut candidates = vec![FamilyBound {
        r: rat(5, 3) * x + rat(5, 6),
        family: Family::C5,
        p: (x + &two) / (&two * x + &one),
    }];
    if *x <= two {
        candidates.push(FamilyBound {
            r: rat(21, 10) * x,
            family: Family::LK7,
            p: one.clone(),
        });
    }
    if *x >= two {
        candidates.push(FamilyBound {
            r: rat(189, 115) * x + rat(21, 23),
            family: Family::LK7,
            p: (rat(20, 1) + rat(13, 1) * x) / (rat(10, 1) + rat(18, 1) * x),
        });
    }
    let mut best: Option<FamilyBound> = None;
    for c in candidates {
        let point = c.family.point(c.p.clone());
        let want_delta = &one - x / &c.r;
        let want_eta = &one - (x + &one) / &c.r;
        let in_range = c.p >= BigRational::zero() && c.p <= one;
        if !in_range || point.delta != want_delta || want_eta > point.eta {
            return Err(Error::Internal(format!(
                "family {:?} at p = {} does not certify r = {} for x = {x}",
                c.family, c.p, c.r
            )));
        }
        if best.as_ref().map_or(true, |b| c.r > b.r) {
            best = Some(c);
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// All three bounds at one `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub x: BigRational,
    pub rhat_l: BigRational,
    pub rhat_u: BigRational,
    pub rhat_star_l: BigRational,
    pub ratio: BigRational,
    pub argmin_row: usize,
}

/// The lower, upper and conjectured bounds together.
#[derive(Clone, Debug)]
pub struct BoundProfile<S> {
    pub lower: PiecewiseBound<S>,
    pub conjectured: PiecewiseBound<S>,
    pub table: InvalidPointTable,
}

impl<S: Scalar> BoundProfile<S> {
    pub fn standard() -> Self {
        Self {
            lower: rhat_l_function(),
            conjectured: rhat_star_l_function(),
            table: InvalidPointTable::standard(),
        }
    }

    pub fn upper(&self, x: &S) -> Result<(S, usize)> {
        rhat_u_with_row(x)
    }

    /// `(rhat_star_l, rhat_l, rhat_u)` at `x`.
    pub fn eval(&self, x: &S) -> Result<(S, S, S)> {
        Ok((self.conjectured.eval(x)?, self.lower.eval(x)?, self.upper(x)?.0))
    }
}

pub fn bound_row(x: &BigRational) -> Result<BoundRow> {
    let lower = rhat_l(x)?;
    let (upper, row) = rhat_u_with_row(x)?;
    Ok(BoundRow {
        x: x.clone(),
        ratio: &upper / &lower,
        rhat_l: lower,
        rhat_u: upper,
        rhat_star_l: rhat_star_l(x)?,
        argmin_row: row,
    })
}

/// Rows at `x_min, x_min + step, ...` up to and including `x_max`.
pub fn bound_table(x_min: &BigRational, x_max: &BigRational, step: &BigRational) -> Result<Vec<BoundRow>> {
    if *step <= BigRational::zero() {
        return Err(usage("step must be positive"));
    }
    if x_min > x_max {
        return Err(usage("x-min exceeds x-max"));
    }
    if *x_min < BigRational::one() {
        return Err(usage("the bounds are defined for x >= 1"));
    }
    let count = floor_int(&((x_max - x_min) / step));
    let count: usize = count
        .try_into()
        .ok()
        .filter(|&c: &usize| c < 10_000_000)
        .ok_or_else(|| usage("grid too large"))?;
    (0..=count)
        .map(|i| bound_row(&(x_min + step * BigRational::from_integer(BigInt::from(i)))))
        .collect()
}

pub const CSV_HEADER: &str = "x,x_dec,rhat_l,rhat_l_dec,rhat_u,rhat_u_dec,rhat_star_l,rhat_star_l_dec,ratio,ratio_dec,argmin_row";

/// CSV with every value as `num/den` followed by a 12-digit decimal.
pub fn table_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let mut line = String::new();
        for v in [&r.x, &r.rhat_l, &r.rhat_u, &r.rhat_star_l, &r.ratio] {
            let _ = write!(line, "{},{},", to_fraction(v), to_decimal(v, 12));
        }
        let _ = writeln!(line, "{}", r.argmin_row);
        out.push_str(&line);
    }
    out
}

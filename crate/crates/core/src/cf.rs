//! Exact continued fractions: coefficients, convergents, rational expansion,
//! and the closed-form fraction of a dual-graph piece.
//!
//! A continued fraction `[a1, a2, ..., an]` denotes
//! `a1 + 1/(a2 + 1/(... + 1/an))` with `a1` any integer and every later
//! coefficient a positive integer.  Finite fractions are rational; eventually
//! periodic ones are quadratic irrationals and support exact comparison
//! against rationals by refining convergent brackets.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients `a_i` beyond `self.len()` for fractions that are not stored
/// explicitly. Implementations must be pure: the same index always yields the
/// same coefficient.
pub trait CoefficientStream: Send + Sync {
    /// 0-based access: `coefficient(0)` is `a1`. `None` means the stream
    /// cannot produce this coefficient.
    fn coefficient(&self, index: usize) -> Option<BigInt>;
}

/// How the coefficient sequence of a [`ContinuedFraction`] terminates.
#[derive(Clone)]
enum Coefficients {
    Finite(Vec<BigInt>),
    /// `head` followed by `cycle` repeated forever. Always irrational.
    EventuallyPeriodic {
        head: Vec<BigInt>,
        cycle: Vec<BigInt>,
    },
    /// Opaque coefficient source. Comparisons against such fractions are only
    /// semi-decidable and take a depth cap.
    Stream(Arc<dyn CoefficientStream>),
}

#[derive(Clone)]
pub struct ContinuedFraction {
    coefficients: Coefficients,
}

/// A convergent `numerator/denominator` of a continued fraction, together
/// with its index. Indices -1 and 0 are the conventional seeds 0/1 and 1/0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub numerator: BigInt,
    pub denominator: BigInt,
    pub index: i64,
}

impl Convergent {
    /// The convergent as an exact rational; `None` for the index-0 seed 1/0.
    pub fn ratio(&self) -> Option<BigRational> {
        if self.denominator.is_zero() {
            None
        } else {
            Some(BigRational::new(
                self.numerator.clone(),
                self.denominator.clone(),
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfError {
    /// A finite continued fraction needs at least one coefficient, a periodic
    /// one a non-empty cycle.
    Empty,
    /// Coefficient at `position` (1-based) must be >= 1.
    CoefficientNotPositive {
        position: usize,
    },
    /// Convergent index below -1 or past the end of a finite fraction.
    IndexOutOfRange {
        index: i64,
    },
    /// `value_of` requires a finite fraction.
    NotRational,
    /// `expand` requires a strictly positive input.
    NonPositiveInput,
    /// Segment lists must be non-empty with positive entries.
    EmptySegments,
    ZeroSegment {
        position: usize,
    },
    /// An opaque stream ended before producing the requested coefficient.
    StreamEnded {
        index: usize,
    },
    /// Comparison against an opaque stream exceeded the depth cap.
    DepthCapExceeded {
        cap: usize,
    },
}

impl fmt::Display for CfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfError::Empty => write!(f, "continued fraction needs at least one coefficient"),
            CfError::CoefficientNotPositive { position } => {
                write!(f, "coefficient {position} must be >= 1")
            }
            CfError::IndexOutOfRange { index } => {
                write!(f, "convergent index {index} out of range")
            }
            CfError::NotRational => write!(f, "infinite continued fraction is not rational"),
            CfError::NonPositiveInput => write!(f, "expansion requires a positive rational"),
            CfError::EmptySegments => write!(f, "segment list must be non-empty"),
            CfError::ZeroSegment { position } => {
                write!(f, "segment count {position} must be >= 1")
            }
            CfError::StreamEnded { index } => {
                write!(f, "coefficient stream ended at index {index}")
            }
            CfError::DepthCapExceeded { cap } => {
                write!(f, "comparison undecided within depth cap {cap}")
            }
        }
    }
}

/// Hard ceiling for bracket refinement of eventually periodic fractions.
/// Denominators grow at least like Fibonacci numbers, so any comparison
/// against a fixed rational decides long before this.
const PERIODIC_REFINEMENT_CAP: usize = 100_000;

impl ContinuedFraction {
    pub fn finite<I>(coefficients: I) -> Result<Self, CfError>
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let coefficients: Vec<BigInt> = coefficients.into_iter().map(Into::into).collect();
        if coefficients.is_empty() {
            return Err(CfError::Empty);
        }
        check_tail_positive(&coefficients, 1)?;
        Ok(Self {
            coefficients: Coefficients::Finite(coefficients),
        })
    }

    /// `head` then `cycle` repeated forever. The represented number is a
    /// quadratic irrational, never equal to any rational.
    pub fn eventually_periodic<I, J>(head: I, cycle: J) -> Result<Self, CfError>
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
        J: IntoIterator,
        J::Item: Into<BigInt>,
    {
        let head: Vec<BigInt> = head.into_iter().map(Into::into).collect();
        let cycle: Vec<BigInt> = cycle.into_iter().map(Into::into).collect();
        if cycle.is_empty() {
            return Err(CfError::Empty);
        }
        check_tail_positive(&head, 1)?;
        // every cycle coefficient recurs in tail position, so all must be >= 1
        for (k, a) in cycle.iter().enumerate() {
            if *a < BigInt::one() {
                return Err(CfError::CoefficientNotPositive {
                    position: head.len() + k + 1,
                });
            }
        }
        Ok(Self {
            coefficients: Coefficients::EventuallyPeriodic { head, cycle },
        })
    }

    /// Opaque-stream mode; comparisons are semi-decidable under a depth cap.
    pub fn from_stream(stream: Arc<dyn CoefficientStream>) -> Self {
        Self {
            coefficients: Coefficients::Stream(stream),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.coefficients, Coefficients::Finite(_))
    }

    pub fn is_stream(&self) -> bool {
        matches!(self.coefficients, Coefficients::Stream(_))
    }

    /// Number of coefficients for a finite fraction.
    pub fn len(&self) -> Option<usize> {
        match &self.coefficients {
            Coefficients::Finite(c) => Some(c.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// 1-based coefficient access.
    pub fn coefficient(&self, index: usize) -> Result<BigInt, CfError> {
        if index == 0 {
            return Err(CfError::IndexOutOfRange { index: 0 });
        }
        match &self.coefficients {
            Coefficients::Finite(c) => c.get(index - 1).cloned().ok_or(CfError::IndexOutOfRange {
                index: index as i64,
            }),
            Coefficients::EventuallyPeriodic { head, cycle } => {
                if index <= head.len() {
                    Ok(head[index - 1].clone())
                } else {
                    Ok(cycle[(index - 1 - head.len()) % cycle.len()].clone())
                }
            }
            Coefficients::Stream(s) => s
                .coefficient(index - 1)
                .ok_or(CfError::StreamEnded { index }),
        }
    }

    /// The convergent `(numerator_i, denominator_i)` with the seeds
    /// `(0, 1)` at index -1 and `(1, 0)` at index 0, and for `i >= 1` the
    /// recurrences `num_i = a_i num_{i-1} + num_{i-2}`,
    /// `den_i = a_i den_{i-1} + den_{i-2}`.
    pub fn convergent(&self, index: i64) -> Result<Convergent, CfError> {
        if index < -1 {
            return Err(CfError::IndexOutOfRange { index });
        }
        if let Some(n) = self.len() {
            if index > n as i64 {
                return Err(CfError::IndexOutOfRange { index });
            }
        }
        let mut prev = (BigInt::zero(), BigInt::one());
        let mut cur = (BigInt::one(), BigInt::zero());
        if index == -1 {
            return Ok(Convergent {
                numerator: prev.0,
                denominator: prev.1,
                index,
            });
        }
        for i in 1..=index {
            let a = self.coefficient(i as usize)?;
            let next = (&a * &cur.0 + &prev.0, &a * &cur.1 + &prev.1);
            prev = cur;
            cur = next;
        }
        Ok(Convergent {
            numerator: cur.0,
            denominator: cur.1,
            index,
        })
    }

    /// Exact value of a finite fraction: the last convergent as a rational.
    pub fn value_of(&self) -> Result<BigRational, CfError> {
        let n = self.len().ok_or(CfError::NotRational)? as i64;
        let c = self.convergent(n)?;
        Ok(c.ratio().expect("finite fraction has nonzero denominator"))
    }

    /// Canonical trailing-1 expansion of a positive rational: the Euclidean
    /// expansion `[a1, ..., am]` re-emitted as `[a1, ..., am - 1, 1]` so that
    /// segment counts of a dual-graph piece read off directly.
    pub fn expand(x: &BigRational) -> Result<Self, CfError> {
        if !x.is_positive() {
            return Err(CfError::NonPositiveInput);
        }
        let mut coefficients: Vec<BigInt> = Vec::new();
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        loop {
            let quotient = &num / &den;
            let rem = &num - &quotient * &den;
            coefficients.push(quotient);
            if rem.is_zero() {
                break;
            }
            num = den;
            den = rem;
        }
        // Euclid leaves the last coefficient >= 2 unless x is an integer;
        // either way the trailing-1 form pulls one unit off the end.
        let last = coefficients.pop().expect("at least one coefficient");
        coefficients.push(last - 1);
        coefficients.push(BigInt::one());
        Self::finite(coefficients)
    }

    /// Compare the represented number against a rational, exactly.
    ///
    /// Finite fractions compare by value. Irrational ones refine the bracket
    /// formed by consecutive convergents until the target falls outside; this
    /// always terminates for eventually periodic fractions. For opaque
    /// streams the refinement is capped by `stream_cap` and reports
    /// [`CfError::DepthCapExceeded`] when undecided.
    pub fn compare_to_rational(
        &self,
        target: &BigRational,
        stream_cap: Option<usize>,
    ) -> Result<Ordering, CfError> {
        if self.is_finite() {
            return Ok(self.value_of()?.cmp(target));
        }
        let cap = match &self.coefficients {
            Coefficients::Stream(_) => stream_cap.unwrap_or(PERIODIC_REFINEMENT_CAP),
            _ => PERIODIC_REFINEMENT_CAP,
        };
        // c1 = a1 lies strictly below the value; from there consecutive
        // convergents bracket it strictly.
        let mut prev = self.convergent_ratio_checked(1, cap)?;
        if *target <= prev {
            return Ok(Ordering::Greater);
        }
        for i in 2..=cap as i64 {
            let cur = self.convergent_ratio_checked(i, cap)?;
            let (lo, hi) = if prev <= cur {
                (&prev, &cur)
            } else {
                (&cur, &prev)
            };
            if *target <= *lo {
                return Ok(Ordering::Greater);
            }
            if *target >= *hi {
                return Ok(Ordering::Less);
            }
            prev = cur;
        }
        Err(CfError::DepthCapExceeded { cap })
    }

    fn convergent_ratio_checked(&self, index: i64, cap: usize) -> Result<BigRational, CfError> {
        match self.convergent(index) {
            Ok(c) => c.ratio().ok_or(CfError::IndexOutOfRange { index }),
            Err(CfError::StreamEnded { .. }) => Err(CfError::DepthCapExceeded { cap }),
            Err(e) => Err(e),
        }
    }
}

fn check_tail_positive(coefficients: &[BigInt], start_position: usize) -> Result<(), CfError> {
    for (k, a) in coefficients.iter().enumerate() {
        let position = start_position + k;
        if position >= 2 && *a < BigInt::one() {
            return Err(CfError::CoefficientNotPositive { position });
        }
    }
    Ok(())
}

/// The reduced fraction `p/q` of a dual-graph piece with the given segment
/// counts `[a1, ..., am]`:
/// `p = num_m + num_{m-1}`, `q = den_m + den_{m-1}`, which is exactly the
/// value of `[a1, ..., am, 1]` in lowest terms.
pub fn pq_from_segments(segments: &[u64]) -> Result<(BigInt, BigInt), CfError> {
    if segments.is_empty() {
        return Err(CfError::EmptySegments);
    }
    for (k, a) in segments.iter().enumerate() {
        if *a == 0 {
            return Err(CfError::ZeroSegment { position: k + 1 });
        }
    }
    let cf = ContinuedFraction::finite(segments.iter().map(|&a| BigInt::from(a)))?;
    let m = segments.len() as i64;
    let last = cf.convergent(m)?;
    let before = cf.convergent(m - 1)?;
    Ok((
        last.numerator + before.numerator,
        last.denominator + before.denominator,
    ))
}

impl PartialEq for ContinuedFraction {
    fn eq(&self, other: &Self) -> bool {
        match (&self.coefficients, &other.coefficients) {
            (Coefficients::Finite(a), Coefficients::Finite(b)) => a == b,
            (
                Coefficients::EventuallyPeriodic {
                    head: h1,
                    cycle: c1,
                },
                Coefficients::EventuallyPeriodic {
                    head: h2,
                    cycle: c2,
                },
            ) => h1 == h2 && c1 == c2,
            (Coefficients::Stream(a), Coefficients::Stream(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl Eq for ContinuedFraction {}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContinuedFraction({self})")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coefficients {
            Coefficients::Finite(c) => {
                write!(f, "[{}]", join_ints(c))
            }
            Coefficients::EventuallyPeriodic { head, cycle } => {
                if head.is_empty() {
                    write!(f, "[({})*]", join_ints(cycle))
                } else {
                    write!(f, "[{}, ({})*]", join_ints(head), join_ints(cycle))
                }
            }
            Coefficients::Stream(_) => write!(f, "[<stream>]"),
        }
    }
}

fn join_ints(values: &[BigInt]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{v}");
    }
    out
}

//! Ordered value-group elements, exact in all three families a plane
//! valuation can have: rationals, rational combinations `r + s·τ` with a
//! fixed quadratic irrational `τ`, and rank-2 lexicographic pairs.
//!
//! One valuation works inside one family; the irrational `τ` is stored once
//! and shared by handle so family checks are cheap. A rational is compatible
//! with the `r + s·τ` family (it is the `s = 0` slice of it).

use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cf::{CfError, ContinuedFraction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rat(BigRational),
    /// `rational + tau_coefficient · τ`.
    Irr {
        rational: BigRational,
        tau_coefficient: BigRational,
        tau: Arc<ContinuedFraction>,
    },
    /// Lexicographically ordered pair: `(hi, lo) < (hi', lo')` iff
    /// `hi < hi'`, or `hi = hi'` and `lo < lo'`.
    Rank2 {
        hi: BigRational,
        lo: BigRational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueError {
    /// Operands live in different value groups.
    MixedFamily,
    /// Opaque-stream τ comparison hit its depth cap.
    Undecided { cap: usize },
}

impl fmt::Display for ValueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueError::MixedFamily => write!(f, "values belong to different value groups"),
            ValueError::Undecided { cap } => {
                write!(f, "comparison undecided within depth cap {cap}")
            }
        }
    }
}

impl Value {
    pub fn rat_int(n: i64) -> Self {
        Value::Rat(BigRational::from(BigInt::from(n)))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Value::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rank2(hi: BigRational, lo: BigRational) -> Self {
        Value::Rank2 { hi, lo }
    }

    pub fn irr(
        rational: BigRational,
        tau_coefficient: BigRational,
        tau: Arc<ContinuedFraction>,
    ) -> Self {
        Value::Irr {
            rational,
            tau_coefficient,
            tau,
        }
    }

    /// The zero of this value's family.
    pub fn zero_like(&self) -> Self {
        match self {
            Value::Rat(_) => Value::Rat(BigRational::zero()),
            Value::Irr { tau, .. } => Value::Irr {
                rational: BigRational::zero(),
                tau_coefficient: BigRational::zero(),
                tau: tau.clone(),
            },
            Value::Rank2 { .. } => Value::Rank2 {
                hi: BigRational::zero(),
                lo: BigRational::zero(),
            },
        }
    }

    pub fn same_family(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Rat(_), Value::Rat(_)) => true,
            (Value::Rat(_), Value::Irr { .. }) | (Value::Irr { .. }, Value::Rat(_)) => true,
            (Value::Irr { tau: a, .. }, Value::Irr { tau: b, .. }) => {
                Arc::ptr_eq(a, b) || (!a.is_stream() && !b.is_stream() && a == b)
            }
            (Value::Rank2 { .. }, Value::Rank2 { .. }) => true,
            _ => false,
        }
    }

    pub fn checked_add(&self, other: &Value) -> Result<Value, ValueError> {
        self.combine(other, false)
    }

    pub fn checked_sub(&self, other: &Value) -> Result<Value, ValueError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Value, subtract: bool) -> Result<Value, ValueError> {
        if !self.same_family(other) {
            return Err(ValueError::MixedFamily);
        }
        let sign = if subtract {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        Ok(match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + &sign * b),
            (Value::Rank2 { hi: a, lo: b }, Value::Rank2 { hi: c, lo: d }) => Value::Rank2 {
                hi: a + &sign * c,
                lo: b + &sign * d,
            },
            (lhs, rhs) => {
                // at least one operand is Irr; promote the rational one
                let (r1, s1, tau1) = lhs.irr_parts();
                let (r2, s2, tau2) = rhs.irr_parts();
                let tau = tau1.or(tau2).expect("family check admits an Irr operand");
                Value::Irr {
                    rational: r1 + &sign * r2,
                    tau_coefficient: s1 + &sign * s2,
                    tau,
                }
            }
        })
    }

    fn irr_parts(&self) -> (BigRational, BigRational, Option<Arc<ContinuedFraction>>) {
        match self {
            Value::Rat(q) => (q.clone(), BigRational::zero(), None),
            Value::Irr {
                rational,
                tau_coefficient,
                tau,
            } => (rational.clone(), tau_coefficient.clone(), Some(tau.clone())),
            Value::Rank2 { .. } => unreachable!("irr_parts is only called on rank-1 values"),
        }
    }

    /// Exact scalar multiple, componentwise in every family.
    pub fn scale(&self, k: &BigRational) -> Value {
        match self {
            Value::Rat(q) => Value::Rat(q * k),
            Value::Irr {
                rational,
                tau_coefficient,
                tau,
            } => Value::Irr {
                rational: rational * k,
                tau_coefficient: tau_coefficient * k,
                tau: tau.clone(),
            },
            Value::Rank2 { hi, lo } => Value::Rank2 {
                hi: hi * k,
                lo: lo * k,
            },
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Value {
        self.scale(&BigRational::from(k.clone()))
    }

    /// Exact total-order decision within one family.
    ///
    /// For `r + s·τ` values the sign of the difference is decided through the
    /// convergent brackets of τ; this terminates because τ is irrational, so
    /// the difference is nonzero unless the coefficients agree exactly. Only
    /// an opaque-stream τ can leave the comparison undecided.
    pub fn compare(&self, other: &Value) -> Result<Ordering, ValueError> {
        self.compare_with_cap(other, None)
    }

    pub fn compare_with_cap(
        &self,
        other: &Value,
        stream_cap: Option<usize>,
    ) -> Result<Ordering, ValueError> {
        if !self.same_family(other) {
            return Err(ValueError::MixedFamily);
        }
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Ok(a.cmp(b)),
            (Value::Rank2 { hi: a, lo: b }, Value::Rank2 { hi: c, lo: d }) => {
                Ok(a.cmp(c).then_with(|| b.cmp(d)))
            }
            (lhs, rhs) => {
                let (r1, s1, tau1) = lhs.irr_parts();
                let (r2, s2, tau2) = rhs.irr_parts();
                let tau = tau1.or(tau2).expect("family check admits an Irr operand");
                let ds = &s1 - &s2;
                let dr = &r1 - &r2;
                if ds.is_zero() {
                    return Ok(dr.cmp(&BigRational::zero()));
                }
                // sign(dr + ds·τ) = sign(ds) · sign(τ - (-dr/ds))
                let threshold = -&dr / &ds;
                let cmp = tau
                    .compare_to_rational(&threshold, stream_cap)
                    .map_err(|e| match e {
                        CfError::DepthCapExceeded { cap } => ValueError::Undecided { cap },
                        _ => ValueError::Undecided { cap: 0 },
                    })?;
                Ok(if ds.is_positive() { cmp } else { cmp.reverse() })
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rat(q) => q.is_zero(),
            Value::Irr {
                rational,
                tau_coefficient,
                ..
            } => rational.is_zero() && tau_coefficient.is_zero(),
            Value::Rank2 { hi, lo } => hi.is_zero() && lo.is_zero(),
        }
    }

    pub fn is_positive(&self) -> Result<bool, ValueError> {
        Ok(self.compare(&self.zero_like())? == Ordering::Greater)
    }

    /// The exact rational `k` with `self = k · base`, when it exists.
    /// This is how rank-2 and irrational semigroup queries reduce to
    /// rational ones.
    pub fn ratio_to(&self, base: &Value) -> Option<BigRational> {
        match (self, base) {
            (Value::Rat(a), Value::Rat(b)) => {
                if b.is_zero() {
                    None
                } else {
                    Some(a / b)
                }
            }
            (
                Value::Irr {
                    rational: r1,
                    tau_coefficient: s1,
                    ..
                },
                Value::Irr {
                    rational: r2,
                    tau_coefficient: s2,
                    ..
                },
            ) => {
                if !self.same_family(base) {
                    return None;
                }
                // (r1 + s1 τ) = k (r2 + s2 τ) with τ irrational forces both
                // coordinates to scale by the same k.
                if s2.is_zero() {
                    if s1.is_zero() && !r2.is_zero() {
                        Some(r1 / r2)
                    } else {
                        None
                    }
                } else {
                    let k = s1 / s2;
                    if r1 == &(&k * r2) {
                        Some(k)
                    } else {
                        None
                    }
                }
            }
            (
                Value::Irr {
                    rational,
                    tau_coefficient,
                    ..
                },
                Value::Rat(b),
            ) => {
                if tau_coefficient.is_zero() && !b.is_zero() {
                    Some(rational / b)
                } else {
                    None
                }
            }
            (
                Value::Rat(a),
                Value::Irr {
                    rational,
                    tau_coefficient,
                    ..
                },
            ) => {
                if tau_coefficient.is_zero() && !rational.is_zero() {
                    Some(a / rational)
                } else {
                    None
                }
            }
            (Value::Rank2 { hi: a, lo: b }, Value::Rank2 { hi: c, lo: d }) => {
                if c.is_zero() && d.is_zero() {
                    return None;
                }
                let k = if c.is_zero() { b / d } else { a / c };
                if a == &(&k * c) && b == &(&k * d) {
                    Some(k)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Rendering: rationals as `p/q`, rank-2 pairs as `(hi, lo)`, irrational
/// combinations as `r + s·τ` (with `r - s·τ` for negative coefficients).
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(q) => write!(f, "{q}"),
            Value::Irr {
                rational,
                tau_coefficient,
                ..
            } => {
                if tau_coefficient.is_negative() {
                    write!(f, "{rational} - {}·τ", -tau_coefficient)
                } else {
                    write!(f, "{rational} + {tau_coefficient}·τ")
                }
            }
            Value::Rank2 { hi, lo } => write!(f, "({hi}, {lo})"),
        }
    }
}

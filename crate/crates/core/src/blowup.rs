//! The blowup engine: value propagation along the sequence of point blowups,
//! the monomial transform matrices between piece boundaries, and exact
//! polynomial transforms with the total = exceptional × strict factorization.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cf::{CfError, ContinuedFraction};
use crate::chain::{Chain, ChainError};
use crate::poly::BiPoly;
use crate::spec::{BlowupKind, SpecViolation, ValuationSpec, ValuationType};
use crate::value::{Value, ValueError};

/// One blowup: its 1-based level, which substitution was used, and the values
/// of the new parameters `(x_level, y_level)` right after it.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupStep {
    pub level: u64,
    pub kind: BlowupKind,
    pub vx: Value,
    pub vy: Value,
    /// The translation residue, present exactly on z-blowups.
    pub residue: Option<BigRational>,
}

/// A value-propagation run: the level-0 parameter values and the steps taken.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub initial_x: Value,
    pub initial_y: Value,
    pub steps: Vec<BlowupStep>,
    /// True when the divisorial sequence ended within the requested depth.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlowupError {
    InvalidSpec(Vec<SpecViolation>),
    /// Depth reaches past the end of the computable sequence (a finite
    /// divisorial sequence, or the known jump frontier of an analytic tail).
    Exhausted {
        available: u64,
    },
    ZeroPolynomial,
    /// `divisorial_value` needs a Type 0 spec.
    NotDivisorial,
    Value(ValueError),
    Cf(CfError),
    Internal(&'static str),
}

impl fmt::Display for BlowupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupError::InvalidSpec(violations) => {
                write!(f, "invalid spec:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
            BlowupError::Exhausted { available } => {
                write!(f, "blowup sequence has only {available} computable steps")
            }
            BlowupError::ZeroPolynomial => write!(f, "the zero polynomial has no transform"),
            BlowupError::NotDivisorial => {
                write!(f, "operation requires a Type 0 (divisorial) spec")
            }
            BlowupError::Value(e) => write!(f, "{e}"),
            BlowupError::Cf(e) => write!(f, "{e}"),
            BlowupError::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl From<ValueError> for BlowupError {
    fn from(e: ValueError) -> Self {
        BlowupError::Value(e)
    }
}

impl From<CfError> for BlowupError {
    fn from(e: CfError) -> Self {
        BlowupError::Cf(e)
    }
}

impl From<ChainError> for BlowupError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Cf(e) => BlowupError::Cf(e),
            ChainError::Internal(msg) => BlowupError::Internal(msg),
        }
    }
}

/// Propagate parameter values through `depth` blowups.
///
/// The blowup kind at each level is decided by comparing the current values:
/// an x-blowup when `ν(x) < ν(y)` (subtracting `ν(x)` from `ν(y)`), a
/// y-blowup in the opposite case, and at equality either the z-blowup
/// entering the next piece — whose jump value comes from the chain — or, for
/// a divisorial valuation with no pieces left, the conventional final
/// x-blowup.
pub fn trace(spec: &ValuationSpec, depth: usize) -> Result<Trace, BlowupError> {
    spec.validate().map_err(BlowupError::InvalidSpec)?;
    if let ValuationType::T0 = spec.type_tag {
        let total: u64 = spec.pieces.iter().flatten().sum::<u64>() + spec.tail + 1;
        if depth as u64 > total {
            return Err(BlowupError::Exhausted { available: total });
        }
    }
    let chain = Chain::build(spec, Some(depth + 1))?;
    let initial_x = chain.beta0.clone();
    let initial_y = chain.initial_y();

    let mut vx = initial_x.clone();
    let mut vy = initial_y.clone();
    let mut steps: Vec<BlowupStep> = Vec::with_capacity(depth);
    // jumps of rows 2.. are consumed by the z-blowups, in order
    let mut pending = chain.rows.iter().skip(1);
    let mut complete = false;

    for level in 1..=depth as u64 {
        let cmp = vx.compare(&vy)?;
        let (kind, residue) = match cmp {
            Ordering::Less => {
                vy = vy.checked_sub(&vx)?;
                (BlowupKind::X, None)
            }
            Ordering::Greater => {
                vx = vx.checked_sub(&vy)?;
                (BlowupKind::Y, None)
            }
            Ordering::Equal => match pending.next() {
                Some(row) => {
                    let residue = spec.residue(row.index as u32);
                    vy = row.jump.clone();
                    (BlowupKind::Z, Some(residue))
                }
                None if spec.type_tag == ValuationType::T0 => {
                    // end of the sequence: the conventional x-blowup, after
                    // which the y-parameter is a unit
                    vy = vy.checked_sub(&vx)?;
                    complete = true;
                    (BlowupKind::X, None)
                }
                None => {
                    // only reachable for an analytic tail truncated before
                    // this z-blowup's jump value is known
                    return Err(BlowupError::Exhausted {
                        available: level - 1,
                    });
                }
            },
        };
        steps.push(BlowupStep {
            level,
            kind,
            vx: vx.clone(),
            vy: vy.clone(),
            residue,
        });
        if complete {
            break;
        }
    }
    Ok(Trace {
        initial_x,
        initial_y,
        steps,
        complete,
    })
}

/// 2×2 integer matrix as rows.
pub type Matrix2 = [[BigInt; 2]; 2];

pub fn matrix_product(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn matrix_determinant(m: &Matrix2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Exponent matrix of one dual-graph piece with the given segment counts:
/// writing `(X, Y)` for the parameters before the piece and `(X~, Y~)` for
/// the parameters after its last blowup,
/// `X = X~^m00 Y~^m01` and `Y = X~^m10 Y~^m11`, and the same matrix sends the
/// value vector `(ν(X~), ν(Y~))` to `(ν(X), ν(Y))`.
///
/// With the convergents `num_i/den_i` of the segment fraction and `n` the
/// number of segments, the matrix is `[[den_{n-1}, den_n], [num_{n-1}, num_n]]`
/// for even `n` and `[[den_n, den_{n-1}], [num_n, num_{n-1}]]` for odd `n`.
pub fn monomial_matrix(segments: &[u64]) -> Result<Matrix2, CfError> {
    if segments.is_empty() {
        return Err(CfError::EmptySegments);
    }
    let cf = ContinuedFraction::finite(segments.iter().map(|&a| BigInt::from(a)))?;
    let n = segments.len() as i64;
    let last = cf.convergent(n)?;
    let before = cf.convergent(n - 1)?;
    Ok(if n % 2 == 0 {
        [
            [before.denominator.clone(), last.denominator.clone()],
            [before.numerator.clone(), last.numerator.clone()],
        ]
    } else {
        [
            [last.denominator.clone(), before.denominator.clone()],
            [last.numerator.clone(), before.numerator.clone()],
        ]
    })
}

/// Exponent matrix of the inverse substitution, with possibly negative
/// entries: `X~ = X^i00 Y^i01`, `Y~ = X^i10 Y^i11`. The product with
/// [`monomial_matrix`] is the identity (the determinant is 1).
pub fn inverse_monomial_map(segments: &[u64]) -> Result<Matrix2, CfError> {
    let m = monomial_matrix(segments)?;
    // adjugate; the determinant is +1 in both parity arrangements
    Ok([
        [m[1][1].clone(), -m[0][1].clone()],
        [-m[1][0].clone(), m[0][0].clone()],
    ])
}

/// A z-blowup where the polynomial's own branch forces a different residue
/// than the valuation's: the curve leaves the sequence of centers here.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueDivergence {
    pub level: u64,
    pub expected: BigRational,
    /// Residue of the strict transform's own branch, when it is readable
    /// from the linear part.
    pub actual: Option<BigRational>,
}

/// Factorization `total = x^e1 y^e2 · strict` of a transformed polynomial at
/// the final level of the applied steps.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    pub e1: u64,
    pub e2: u64,
    pub strict: BiPoly,
    pub divergences: Vec<ResidueDivergence>,
}

impl TransformResult {
    /// Unit in the local ring at the final center.
    pub fn strict_is_unit(&self) -> bool {
        self.strict.is_unit_at_origin()
    }
}

/// Push a polynomial through a sequence of blowups, keeping the exceptional
/// exponents factored out of the working polynomial at every level.
///
/// The carried monomial `x^e1 y^e2` transforms right along: an x-blowup sends
/// it to `x^(e1+e2) y^e2`, a y-blowup to `x^e1 y^(e1+e2)`, and a z-blowup to
/// `x^(e1+e2) (y+c)^e2` — whose unit factor `(y+c)^e2` re-enters the strict
/// part, since the strict transform is defined by divisibility alone.
pub fn transform_poly(f: &BiPoly, steps: &[BlowupStep]) -> Result<TransformResult, BlowupError> {
    if f.is_zero() {
        return Err(BlowupError::ZeroPolynomial);
    }
    let (mut e1, mut e2, mut strict) = f.factor_monomial();
    let mut divergences: Vec<ResidueDivergence> = Vec::new();
    for step in steps {
        match step.kind {
            BlowupKind::X => {
                let carried = e1 + e2;
                strict = strict.substitute_x_blowup();
                e1 = carried;
            }
            BlowupKind::Y => {
                let carried = e1 + e2;
                strict = strict.substitute_y_blowup();
                e2 = carried;
            }
            BlowupKind::Z => {
                let residue = step
                    .residue
                    .clone()
                    .unwrap_or_else(|| BigRational::from(BigInt::one()));
                let was_at_center = !strict.is_unit_at_origin();
                let actual = branch_residue(&strict);
                let unit_factor = BiPoly::monomial(BigRational::from(BigInt::one()), (0, 1))
                    .add(&BiPoly::constant(residue.clone()))
                    .pow(e2);
                strict = strict.substitute_z_blowup(&residue).mul(&unit_factor);
                e1 += e2;
                e2 = 0;
                let (d1, d2, rest) = strict.factor_monomial();
                e1 += d1;
                e2 += d2;
                strict = rest;
                // the curve stays at the new center when it continues as a
                // y-factor or the residual still vanishes there; otherwise
                // its branch forced a different residue and it leaves here
                if was_at_center && d2 == 0 && strict.is_unit_at_origin() {
                    divergences.push(ResidueDivergence {
                        level: step.level,
                        expected: residue,
                        actual,
                    });
                }
                continue;
            }
        }
        let (d1, d2, rest) = strict.factor_monomial();
        e1 += d1;
        e2 += d2;
        strict = rest;
    }
    Ok(TransformResult {
        e1,
        e2,
        strict,
        divergences,
    })
}

/// Residue of `y/x` along the branch cut out by the linear part of `f`,
/// when `f = a·y + b·x + higher` with `a != 0`.
fn branch_residue(f: &BiPoly) -> Option<BigRational> {
    let a = f.coefficient((0, 1));
    let b = f.coefficient((1, 0));
    if a.is_zero() {
        None
    } else {
        Some(-b / a)
    }
}

/// The exact value a divisorial valuation assigns to a polynomial: run the
/// full blowup sequence, read off the exponent of the final uniformizing
/// parameter, and divide by the normalization factor `b = q_1 ··· q_g`.
pub fn divisorial_value(f: &BiPoly, spec: &ValuationSpec) -> Result<BigRational, BlowupError> {
    if spec.type_tag != ValuationType::T0 {
        return Err(BlowupError::NotDivisorial);
    }
    spec.validate().map_err(BlowupError::InvalidSpec)?;
    if f.is_zero() {
        return Err(BlowupError::ZeroPolynomial);
    }
    let total: u64 = spec.pieces.iter().flatten().sum::<u64>() + spec.tail + 1;
    let run = trace(spec, total as usize)?;
    let result = transform_poly(f, &run.steps)?;
    if result.strict.is_zero() {
        return Err(BlowupError::Internal(
            "strict transform vanished after a complete divisorial sequence",
        ));
    }
    let chain = Chain::build(spec, None)?;
    Ok(BigRational::new(BigInt::from(result.e1), chain.b))
}

/// A certified lower bound for the value of `f`: the exceptional part
/// accumulated through `depth` blowups. The strict transform still carries a
/// non-negative value at that level, so the bound only ever undershoots; it
/// is exact once the strict transform becomes a unit. This is all the
/// engine offers for evaluating arbitrary polynomials under non-divisorial
/// valuations — for divisorial specs use [`divisorial_value`].
pub fn value_lower_bound(
    f: &BiPoly,
    spec: &ValuationSpec,
    depth: usize,
) -> Result<Value, BlowupError> {
    let run = trace(spec, depth)?;
    let result = transform_poly(f, &run.steps)?;
    match run.steps.last() {
        Some(step) => Ok(step
            .vx
            .scale(&BigRational::from(BigInt::from(result.e1)))
            .checked_add(&step.vy.scale(&BigRational::from(BigInt::from(result.e2))))?),
        None => Ok(run.initial_x.zero_like()),
    }
}

/// Value of the strict transform at each level along a trace, derived from
/// `ν(f) = e1·ν(x_j) + e2·ν(y_j) + ν(strict at level j)`. Used by tests to
/// check that strict-transform values decrease monotonically.
pub fn strict_transform_values(
    f: &BiPoly,
    run: &Trace,
    total_value: &Value,
) -> Result<Vec<Value>, BlowupError> {
    let mut out = Vec::with_capacity(run.steps.len());
    for end in 1..=run.steps.len() {
        let result = transform_poly(f, &run.steps[..end])?;
        let step = &run.steps[end - 1];
        let exceptional = step
            .vx
            .scale(&BigRational::from(BigInt::from(result.e1)))
            .checked_add(&step.vy.scale(&BigRational::from(BigInt::from(result.e2))))?;
        out.push(total_value.checked_sub(&exceptional)?);
    }
    Ok(out)
}

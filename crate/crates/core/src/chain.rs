//! Crate-internal: the beta chain of a valuation spec.
//!
//! One pass over the piece data produces, per generator index `i`, the piece
//! continued fraction, its trailing-1 fraction `p_i/q_i`, the generator value
//! `beta_i`, and the jump value `beta_i - q_{i-1} beta_{i-1}` consumed by the
//! blowup entering piece `i`. The blowup trace and the public beta table are
//! both projections of this structure.
//!
//! Normalization per type: rank-1 chains take `beta0 = 1` (as an `Irr` with
//! zero τ-coefficient for the irrational type, so the whole chain lives in
//! one family); the exceptional-curve type takes
//! `beta0 = q1···q_{g-1} · (den_{m-1}, den_{m-2})` from the convergents of the
//! last piece's segment prefix; the rank-jump curve type takes
//! `beta0 = (0, 1)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cf::{pq_from_segments, CfError, ContinuedFraction};
use crate::spec::{TypeExtras, ValuationSpec, ValuationType};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RowKind {
    /// Finite piece with a trailing-1 fraction `p/q`, including the
    /// divisorial tail row.
    Interior,
    /// T2: the infinite last piece, value `q_{g-1} beta_{g-1} + (τ-1)/Π q`.
    IrrationalLast,
    /// T3: the last piece with an infinite final segment; rank-2 jump.
    ExceptionalLast,
    /// T4.2: the tail row with the rank jump `(1, n/Π q)`.
    RankJumpLast,
    /// T4.1: tail rows carrying the values `(n0 + e_j)/Π q`; they add no new
    /// semigroup generators.
    AnalyticTail,
}

#[derive(Clone, Debug)]
pub(crate) struct ChainRow {
    /// 1-based generator index.
    pub index: usize,
    pub kind: RowKind,
    /// The piece continued fraction (for T3 only its finite segment prefix).
    pub beta_tilde: Option<ContinuedFraction>,
    pub beta_prime: Option<BigRational>,
    pub p: Option<BigInt>,
    /// 1 for non-interior rows; those never participate in digit carries.
    pub q: BigInt,
    pub beta: Value,
    /// `beta_index - q_{index-1} beta_{index-1}`: the value of the new
    /// y-parameter right after the blowup entering this piece.
    pub jump: Value,
}

#[derive(Clone, Debug)]
pub(crate) struct Chain {
    pub beta0: Value,
    pub rows: Vec<ChainRow>,
    /// True when rows past the materialized ones exist and would contribute
    /// new semigroup generators (T1 truncation).
    pub truncated: bool,
    /// Product of all interior `q` (the divisorial normalization factor `b`).
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ChainError {
    Cf(CfError),
    Internal(&'static str),
}

impl From<CfError> for ChainError {
    fn from(e: CfError) -> Self {
        ChainError::Cf(e)
    }
}

fn big_rat(n: BigInt) -> BigRational {
    BigRational::from(n)
}

impl Chain {
    /// Materialize at most `row_limit` rows (`None` = the spec's own depth
    /// for infinite chains; finite chains ignore the limit upward).
    pub fn build(spec: &ValuationSpec, row_limit: Option<usize>) -> Result<Self, ChainError> {
        let g = spec.pieces.len();
        let limit = row_limit.unwrap_or(spec.depth.max(1));

        // interior piece fractions first; the T3 normalization needs their q's
        let interior_count = match spec.type_tag {
            ValuationType::T0 => g,
            ValuationType::T1 => limit,
            ValuationType::T2 | ValuationType::T3 => g.saturating_sub(1),
            ValuationType::T4_1 | ValuationType::T4_2 => g,
        };
        let mut piece_pq: Vec<(BigInt, BigInt)> = Vec::new();
        for i in 1..=interior_count {
            let segments = spec
                .piece_segments(i, 0)
                .ok_or(ChainError::Internal("piece index out of range"))?;
            piece_pq.push(pq_from_segments(&segments)?);
        }

        let tau: Option<Arc<ContinuedFraction>> = match (&spec.type_tag, &spec.extras) {
            (ValuationType::T2, TypeExtras::PeriodicSegments { period }) => {
                let head = spec.pieces[g - 1].iter().map(|&a| BigInt::from(a));
                let cycle = period.iter().map(|&a| BigInt::from(a));
                Some(Arc::new(ContinuedFraction::eventually_periodic(
                    head, cycle,
                )?))
            }
            _ => None,
        };

        // convergents of the T3 prefix, used for beta0 and the rank-2 jump
        let t3_data = if spec.type_tag == ValuationType::T3 {
            let prefix = &spec.pieces[g - 1];
            let cf = ContinuedFraction::finite(prefix.iter().map(|&a| BigInt::from(a)))?;
            let m_minus_1 = prefix.len() as i64;
            let last = cf.convergent(m_minus_1)?;
            let before = cf.convergent(m_minus_1 - 1)?;
            Some((cf, last, before))
        } else {
            None
        };

        let interior_qprod: BigInt = piece_pq.iter().map(|(_, q)| q).product();

        let beta0 = match spec.type_tag {
            ValuationType::T0 | ValuationType::T1 | ValuationType::T4_1 => Value::rat_int(1),
            ValuationType::T2 => Value::irr(
                BigRational::one(),
                BigRational::zero(),
                tau.clone().expect("T2 builds a tau"),
            ),
            ValuationType::T3 => {
                let (_, last, before) = t3_data.as_ref().expect("T3 builds prefix data");
                Value::rank2(
                    big_rat(&interior_qprod * &last.denominator),
                    big_rat(&interior_qprod * &before.denominator),
                )
            }
            ValuationType::T4_2 => Value::rank2(BigRational::zero(), BigRational::one()),
        };

        let mut rows: Vec<ChainRow> = Vec::new();
        let mut qprod = BigInt::one();
        let mut prev_beta = beta0.clone();
        let mut prev_q = BigInt::one();

        let push_row = |rows: &mut Vec<ChainRow>,
                        qprod: &mut BigInt,
                        prev_beta: &mut Value,
                        prev_q: &mut BigInt,
                        kind: RowKind,
                        beta_tilde: Option<ContinuedFraction>,
                        pq: Option<(BigInt, BigInt)>,
                        jump: Value|
         -> Result<(), ChainError> {
            let beta = prev_beta
                .scale_int(prev_q)
                .checked_add(&jump)
                .map_err(|_| ChainError::Internal("jump value in wrong family"))?;
            let (p, q, beta_prime) = match pq {
                Some((p, q)) => {
                    let beta_prime = BigRational::new(p.clone(), q.clone());
                    (Some(p), q, Some(beta_prime))
                }
                None => (None, BigInt::one(), None),
            };
            rows.push(ChainRow {
                index: rows.len() + 1,
                kind,
                beta_tilde,
                beta_prime,
                p,
                q: q.clone(),
                beta: beta.clone(),
                jump,
            });
            *qprod *= &q;
            *prev_beta = beta;
            *prev_q = q;
            Ok(())
        };

        // interior rows: jump = (beta'_i - 1)/(q_1···q_{i-1}) · beta0
        for i in 1..=interior_count {
            let segments = spec
                .piece_segments(i, 0)
                .ok_or(ChainError::Internal("piece index out of range"))?;
            let (p, q) = piece_pq[i - 1].clone();
            let beta_prime = BigRational::new(p.clone(), q.clone());
            let jump_scale = (&beta_prime - BigRational::one()) / big_rat(qprod.clone());
            let jump = beta0.scale(&jump_scale);
            let beta_tilde = ContinuedFraction::finite(segments.iter().map(|&a| BigInt::from(a)))?;
            push_row(
                &mut rows,
                &mut qprod,
                &mut prev_beta,
                &mut prev_q,
                RowKind::Interior,
                Some(beta_tilde),
                Some((p, q)),
                jump,
            )?;
        }

        let mut truncated = false;
        match spec.type_tag {
            ValuationType::T0 => {
                if spec.tail > 0 {
                    // the tail piece reads as one segment [a1] with q = 1
                    let (p, q) = pq_from_segments(&[spec.tail])?;
                    let beta_prime = BigRational::new(p.clone(), q.clone());
                    let jump_scale = (&beta_prime - BigRational::one()) / big_rat(qprod.clone());
                    let jump = beta0.scale(&jump_scale);
                    let beta_tilde = ContinuedFraction::finite([BigInt::from(spec.tail)])?;
                    push_row(
                        &mut rows,
                        &mut qprod,
                        &mut prev_beta,
                        &mut prev_q,
                        RowKind::Interior,
                        Some(beta_tilde),
                        Some((p, q)),
                        jump,
                    )?;
                }
            }
            ValuationType::T1 => {
                truncated = true;
            }
            ValuationType::T2 => {
                // jump = (τ - 1)/(q_1···q_{g-1}) · beta0
                let tau = tau.clone().expect("T2 builds a tau");
                let scale = BigRational::new(BigInt::one(), qprod.clone());
                let jump = Value::irr(-scale.clone(), scale, tau.clone());
                push_row(
                    &mut rows,
                    &mut qprod,
                    &mut prev_beta,
                    &mut prev_q,
                    RowKind::IrrationalLast,
                    Some(tau.as_ref().clone()),
                    None,
                    jump,
                )?;
            }
            ValuationType::T3 => {
                let (cf, last, before) = t3_data.expect("T3 builds prefix data");
                let jump = Value::rank2(
                    big_rat(&last.numerator - &last.denominator),
                    big_rat(&before.numerator - &before.denominator),
                );
                push_row(
                    &mut rows,
                    &mut qprod,
                    &mut prev_beta,
                    &mut prev_q,
                    RowKind::ExceptionalLast,
                    Some(cf),
                    None,
                    jump,
                )?;
            }
            ValuationType::T4_1 => {
                let exponents = match &spec.extras {
                    TypeExtras::Exponents { exponents } => exponents.clone(),
                    _ => Vec::new(),
                };
                // n0/Π q = q_g beta_g (0 for the bare-tail case g = 0);
                // tail values are (n0 + e_j)/Π q
                let n0: BigInt = if g == 0 {
                    BigInt::zero()
                } else {
                    let qg_betag = prev_beta
                        .scale_int(&prev_q)
                        .ratio_to(&beta0)
                        .ok_or(ChainError::Internal("rank-1 chain expected"))?;
                    let scaled = qg_betag * big_rat(qprod.clone());
                    if !scaled.is_integer() {
                        return Err(ChainError::Internal(
                            "q_g beta_g must clear the denominator q_1···q_g",
                        ));
                    }
                    scaled.to_integer()
                };
                for &e in &exponents {
                    if rows.len() >= limit {
                        break;
                    }
                    let target = BigRational::new(&n0 + BigInt::from(e), qprod.clone());
                    let beta = beta0.scale(&target);
                    let jump = beta
                        .checked_sub(&prev_beta.scale_int(&prev_q))
                        .map_err(|_| ChainError::Internal("tail jump in wrong family"))?;
                    push_row(
                        &mut rows,
                        &mut qprod,
                        &mut prev_beta,
                        &mut prev_q,
                        RowKind::AnalyticTail,
                        None,
                        None,
                        jump,
                    )?;
                }
            }
            ValuationType::T4_2 => {
                let n = match &spec.extras {
                    TypeExtras::RankJump { n } => n.clone(),
                    _ => BigInt::zero(),
                };
                let jump = Value::rank2(BigRational::one(), BigRational::new(n, qprod.clone()));
                push_row(
                    &mut rows,
                    &mut qprod,
                    &mut prev_beta,
                    &mut prev_q,
                    RowKind::RankJumpLast,
                    None,
                    None,
                    jump,
                )?;
            }
        }

        let b: BigInt = rows
            .iter()
            .filter(|r| r.kind == RowKind::Interior)
            .map(|r| &r.q)
            .product();

        Ok(Chain {
            beta0,
            rows,
            truncated,
            b,
        })
    }

    /// The initial y-value of the blowup trace: `beta_1`, or `beta0` itself
    /// when the chain has no generators beyond x (the order valuation).
    pub fn initial_y(&self) -> Value {
        self.rows
            .first()
            .map(|r| r.beta.clone())
            .unwrap_or_else(|| self.beta0.clone())
    }
}

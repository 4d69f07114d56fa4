//! Value-semigroup machinery: the beta table of generator values, unique
//! digit representation of semigroup elements, Frobenius numbers with the
//! gcd-chain upper bound, and symbolic construction of generating-sequence
//! polynomials.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::blowup::{trace, transform_poly, BlowupError};
use crate::cf::{CfError, ContinuedFraction};
use crate::chain::{Chain, ChainError, RowKind};
use crate::poly::BiPoly;
use crate::spec::{SpecError, SpecViolation, ValuationSpec, ValuationType};
use crate::value::{Value, ValueError};

/// One generator row: the piece continued fraction, its trailing-1 fraction
/// `p/q` (absent when the piece is infinite), and the generator value.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaRow {
    pub index: usize,
    pub beta_tilde: Option<ContinuedFraction>,
    pub beta_prime: Option<BigRational>,
    pub p: Option<BigInt>,
    /// `None` for the special last row of the irrational, exceptional-curve
    /// and rank-jump types; those rows never participate in digit carries.
    pub q: Option<BigInt>,
    pub beta: Value,
}

/// The generator values of a valuation: `beta0` plus one row per generating
/// sequence element beyond `x`. For the analytic curve type the infinite tail
/// contributes `tail_values` that lie in the semigroup already and generate
/// nothing new.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTable {
    pub beta0: Value,
    pub rows: Vec<BetaRow>,
    pub tail_values: Vec<Value>,
    /// A truncated infinite table: membership queries are only certified
    /// below the frontier `q_k · beta_k` of the last materialized row.
    pub truncated: bool,
}

/// Digit vector `alpha` with `sum_i alpha_i beta_i` equal to the represented
/// element; `digits[0]` is the coefficient of `beta0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    pub digits: Vec<BigInt>,
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, d) in self.digits.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SemigroupError {
    InvalidSpec(Vec<SpecViolation>),
    /// Row request past the last generator of a finite chain.
    BeyondTail {
        last_index: usize,
    },
    /// The queried value is not in the value semigroup.
    NotInSemigroup,
    /// Truncated infinite table: the query exceeds the certified frontier.
    UndecidableAtDepth,
    /// Frobenius data must have gcd 1.
    GcdNotOne,
    /// Frobenius data needs at least two entries.
    NeedAtLeastTwo,
    /// Entries must be positive.
    ZeroEntry,
    /// Index outside the valid generator range for the operation.
    InvalidIndex {
        index: usize,
    },
    /// The single-correction-term shape cannot reach the generator value at
    /// this index: the unit factors of the two sides disagree and the next
    /// jump value sits above the pollution they leave behind. Multi-term
    /// corrections are out of scope.
    SingleTermInsufficient {
        index: usize,
    },
    MixedFamily,
    Blowup(BlowupError),
    Internal(&'static str),
}

impl fmt::Display for SemigroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemigroupError::InvalidSpec(violations) => {
                write!(f, "invalid spec:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
            SemigroupError::BeyondTail { last_index } => {
                write!(f, "the chain ends at generator index {last_index}")
            }
            SemigroupError::NotInSemigroup => write!(f, "value is not in the semigroup"),
            SemigroupError::UndecidableAtDepth => {
                write!(
                    f,
                    "query exceeds the certified frontier of the truncated table"
                )
            }
            SemigroupError::GcdNotOne => write!(f, "entries must have greatest common divisor 1"),
            SemigroupError::NeedAtLeastTwo => write!(f, "need at least two entries"),
            SemigroupError::ZeroEntry => write!(f, "entries must be positive"),
            SemigroupError::InvalidIndex { index } => write!(f, "index {index} out of range"),
            SemigroupError::SingleTermInsufficient { index } => write!(
                f,
                "generator {index} needs a multi-term correction, which is unsupported"
            ),
            SemigroupError::MixedFamily => write!(f, "value belongs to a different value group"),
            SemigroupError::Blowup(e) => write!(f, "{e}"),
            SemigroupError::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl From<ValueError> for SemigroupError {
    fn from(e: ValueError) -> Self {
        match e {
            ValueError::MixedFamily => SemigroupError::MixedFamily,
            ValueError::Undecided { .. } => SemigroupError::UndecidableAtDepth,
        }
    }
}

impl From<ChainError> for SemigroupError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Cf(_) => SemigroupError::Internal("continued fraction failure"),
            ChainError::Internal(msg) => SemigroupError::Internal(msg),
        }
    }
}

impl From<BlowupError> for SemigroupError {
    fn from(e: BlowupError) -> Self {
        SemigroupError::Blowup(e)
    }
}

impl From<CfError> for SemigroupError {
    fn from(_: CfError) -> Self {
        SemigroupError::Internal("continued fraction failure")
    }
}

impl From<SpecError> for SemigroupError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::SigmaOutOfRange { .. } => SemigroupError::Internal("sigma out of range"),
            SpecError::Exhausted { available } => {
                SemigroupError::Blowup(BlowupError::Exhausted { available })
            }
        }
    }
}

impl BetaTable {
    /// Table from explicit values, for queries against a hand-built chain:
    /// each row is `(beta, q)` with `q = None` marking a final special row.
    pub fn from_values(beta0: Value, rows: Vec<(Value, Option<BigInt>)>) -> Self {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(k, (beta, q))| BetaRow {
                index: k + 1,
                beta_tilde: None,
                beta_prime: None,
                p: None,
                q,
                beta,
            })
            .collect();
        BetaTable {
            beta0,
            rows,
            tail_values: Vec::new(),
            truncated: false,
        }
    }

    /// `q_1 ··· q_k` over the first `k` rows (absent `q` counts as 1).
    pub fn q_product(&self, k: usize) -> BigInt {
        self.rows[..k]
            .iter()
            .map(|r| r.q.clone().unwrap_or_else(BigInt::one))
            .product()
    }
}

/// The beta table of a spec. `depth` bounds the number of generator rows for
/// the infinitely-singular type (default: the spec's own depth); for finite
/// chains a depth beyond the last generator index is an error, and a smaller
/// depth yields a truncated table with a certified frontier.
pub fn beta_table(spec: &ValuationSpec, depth: Option<usize>) -> Result<BetaTable, SemigroupError> {
    spec.validate().map_err(SemigroupError::InvalidSpec)?;
    let natural = spec.last_generator_index();
    if let (Some(last), Some(d)) = (natural, depth) {
        if d > last {
            return Err(SemigroupError::BeyondTail { last_index: last });
        }
    }
    let row_limit = match spec.type_tag {
        ValuationType::T1 => Some(depth.unwrap_or(spec.depth)),
        ValuationType::T4_1 => {
            // generator rows plus every computable tail value
            let tail = match &spec.extras {
                crate::spec::TypeExtras::Exponents { exponents } => exponents.len(),
                _ => 0,
            };
            Some(spec.pieces.len() + tail)
        }
        _ => None,
    };
    let chain = Chain::build(spec, row_limit)?;
    let mut rows: Vec<BetaRow> = Vec::new();
    let mut tail_values: Vec<Value> = Vec::new();
    for row in &chain.rows {
        match row.kind {
            RowKind::AnalyticTail => tail_values.push(row.beta.clone()),
            kind => rows.push(BetaRow {
                index: row.index,
                beta_tilde: row.beta_tilde.clone(),
                beta_prime: row.beta_prime.clone(),
                p: row.p.clone(),
                q: if kind == RowKind::Interior {
                    Some(row.q.clone())
                } else {
                    None
                },
                beta: row.beta.clone(),
            }),
        }
    }
    let mut truncated = chain.truncated;
    if let (Some(_), Some(d)) = (natural, depth) {
        if d < rows.len() {
            rows.truncate(d);
            truncated = true;
        }
    }
    Ok(BetaTable {
        beta0: chain.beta0,
        rows,
        tail_values,
        truncated,
    })
}

/// The unique digit representation of a semigroup element.
///
/// Digits are forced top-down: a special last row (irrational τ-coefficient
/// or rank-2 coordinate split) determines its own digit by linear algebra,
/// and every interior row forces its digit modulo `q_i` after clearing
/// denominators, carrying the remainder downward. The zero-index digit
/// absorbs the slack and decides membership.
pub fn represent(target: &Value, table: &BetaTable) -> Result<DigitVector, SemigroupError> {
    if !target.same_family(&table.beta0) {
        return Err(SemigroupError::MixedFamily);
    }
    // frontier certification for truncated tables
    if table.truncated {
        match table.rows.last() {
            Some(last) => {
                let frontier = last
                    .beta
                    .scale_int(&last.q.clone().unwrap_or_else(BigInt::one));
                if target.compare(&frontier)? == Ordering::Greater {
                    return Err(SemigroupError::UndecidableAtDepth);
                }
            }
            None => return Err(SemigroupError::UndecidableAtDepth),
        }
    }

    let (interior_rows, special) = match table.rows.last() {
        Some(last) if last.q.is_none() => (&table.rows[..table.rows.len() - 1], Some(last)),
        _ => (&table.rows[..], None),
    };
    for row in interior_rows {
        if row.q.is_none() {
            return Err(SemigroupError::Internal(
                "only the last row may lack a carry modulus",
            ));
        }
    }

    let (top_digit, remainder_ratio) = match special {
        Some(top) => split_top_digit(target, &top.beta, &table.beta0)?,
        None => {
            let ratio = target
                .ratio_to(&table.beta0)
                .ok_or(SemigroupError::NotInSemigroup)?;
            (None, ratio)
        }
    };

    let mut digits = rational_digits(&remainder_ratio, interior_rows, &table.beta0)?;
    if let Some(alpha) = top_digit {
        digits.push(alpha);
    }
    Ok(DigitVector { digits })
}

/// Split off the digit of a special last row. Returns the forced digit and
/// the remaining rational multiple of `beta0`.
fn split_top_digit(
    target: &Value,
    top: &Value,
    beta0: &Value,
) -> Result<(Option<BigInt>, BigRational), SemigroupError> {
    match (beta0, top) {
        (Value::Rank2 { hi: b0h, lo: b0l }, Value::Rank2 { hi: bth, lo: btl }) => {
            let (sh, sl) = match target {
                Value::Rank2 { hi, lo } => (hi.clone(), lo.clone()),
                _ => return Err(SemigroupError::MixedFamily),
            };
            let det = bth * b0l - btl * b0h;
            if det.is_zero() {
                return Err(SemigroupError::Internal(
                    "special rank-2 row is proportional to beta0",
                ));
            }
            let alpha = (&sh * b0l - &sl * b0h) / det;
            if !alpha.is_integer() || alpha.is_negative() {
                return Err(SemigroupError::NotInSemigroup);
            }
            let ratio = if !b0h.is_zero() {
                (&sh - &alpha * bth) / b0h
            } else {
                (&sl - &alpha * btl) / b0l
            };
            // both coordinates must agree with the split
            if sh != &ratio * b0h + &alpha * bth || sl != &ratio * b0l + &alpha * btl {
                return Err(SemigroupError::NotInSemigroup);
            }
            Ok((Some(alpha.to_integer()), ratio))
        }
        (_, Value::Irr { .. }) => {
            let (tr, ts) = irr_coefficients(target)?;
            let (br, bs) = irr_coefficients(top)?;
            if bs.is_zero() {
                return Err(SemigroupError::Internal(
                    "special irrational row has zero τ-coefficient",
                ));
            }
            let alpha = &ts / &bs;
            if !alpha.is_integer() || alpha.is_negative() {
                return Err(SemigroupError::NotInSemigroup);
            }
            // beta0 is rational (τ-coefficient 0) and normalized to 1 here,
            // but divide anyway to stay general
            let (b0r, b0s) = irr_coefficients(beta0)?;
            if !b0s.is_zero() {
                return Err(SemigroupError::Internal("beta0 must be rational"));
            }
            let ratio = (&tr - &alpha * &br) / b0r;
            Ok((Some(alpha.to_integer()), ratio))
        }
        _ => Err(SemigroupError::Internal("unsupported special row family")),
    }
}

fn irr_coefficients(value: &Value) -> Result<(BigRational, BigRational), SemigroupError> {
    match value {
        Value::Rat(q) => Ok((q.clone(), BigRational::zero())),
        Value::Irr {
            rational,
            tau_coefficient,
            ..
        } => Ok((rational.clone(), tau_coefficient.clone())),
        Value::Rank2 { .. } => Err(SemigroupError::MixedFamily),
    }
}

/// Digits over the interior rows for a rational multiple of `beta0`:
/// all arithmetic on integer numerators over the common denominator
/// `q_1 ··· q_t`.
fn rational_digits(
    target: &BigRational,
    rows: &[BetaRow],
    beta0: &Value,
) -> Result<Vec<BigInt>, SemigroupError> {
    let t = rows.len();
    // prefix products D_i = q_1···q_i
    let mut qs: Vec<BigInt> = Vec::with_capacity(t);
    let mut dprod: Vec<BigInt> = Vec::with_capacity(t + 1);
    dprod.push(BigInt::one());
    for row in rows {
        let q = row.q.clone().expect("interior rows carry q");
        dprod.push(dprod.last().expect("non-empty") * &q);
        qs.push(q);
    }
    let scaled = target * BigRational::from(dprod[t].clone());
    if !scaled.is_integer() {
        return Err(SemigroupError::NotInSemigroup);
    }
    let mut n = scaled.to_integer();
    let mut digits: Vec<BigInt> = vec![BigInt::zero(); t + 1];
    for i in (1..=t).rev() {
        let ratio = rows[i - 1]
            .beta
            .ratio_to(beta0)
            .ok_or(SemigroupError::Internal(
                "interior row is not a rational multiple of beta0",
            ))?;
        let tau_scaled = ratio * BigRational::from(dprod[i].clone());
        if !tau_scaled.is_integer() {
            return Err(SemigroupError::Internal(
                "row value does not clear its denominator",
            ));
        }
        let tau = tau_scaled.to_integer();
        let q = &qs[i - 1];
        let alpha = if q.is_one() {
            BigInt::zero()
        } else {
            let tau_mod = tau.mod_floor(q);
            let gcd = tau_mod.gcd(q);
            if !gcd.is_one() {
                return Err(SemigroupError::Internal(
                    "row numerator must be coprime to its q",
                ));
            }
            let inv = tau_mod.extended_gcd(q).x.mod_floor(q);
            (n.mod_floor(q) * inv).mod_floor(q)
        };
        n = (n - &alpha * &tau) / q;
        digits[i] = alpha;
    }
    if n.is_negative() {
        return Err(SemigroupError::NotInSemigroup);
    }
    digits[0] = n;
    Ok(digits)
}

/// A non-negative integer combination of the lower generators equal to
/// `q_i · beta_i`, found by bounded search that maximizes the highest index
/// first. Existence is guaranteed for chain tables; a failed search reports
/// an internal inconsistency.
pub fn qbeta_representation(
    table: &BetaTable,
    index: usize,
) -> Result<DigitVector, SemigroupError> {
    if index == 0 || index > table.rows.len() {
        return Err(SemigroupError::InvalidIndex { index });
    }
    let row = &table.rows[index - 1];
    let q = row
        .q
        .clone()
        .ok_or(SemigroupError::InvalidIndex { index })?;
    let target = row
        .beta
        .scale_int(&q)
        .ratio_to(&table.beta0)
        .ok_or(SemigroupError::Internal(
            "q·beta is not a rational multiple of beta0",
        ))?;
    let mut ratios: Vec<BigRational> = Vec::with_capacity(index);
    for lower in &table.rows[..index - 1] {
        ratios.push(
            lower
                .beta
                .ratio_to(&table.beta0)
                .ok_or(SemigroupError::Internal(
                    "lower rows must be rational multiples of beta0",
                ))?,
        );
    }
    let mut digits = vec![BigInt::zero(); index];
    if greedy_search(&target, &ratios, &mut digits) {
        Ok(DigitVector { digits })
    } else {
        Err(SemigroupError::Internal(
            "q·beta must be representable over the lower generators",
        ))
    }
}

/// Depth-first search assigning the largest feasible digit at the highest
/// index first; `digits[0]` ends up as the coefficient of beta0 (ratio 1).
fn greedy_search(target: &BigRational, ratios: &[BigRational], digits: &mut [BigInt]) -> bool {
    let k = ratios.len();
    if k == 0 {
        if !target.is_negative() && target.is_integer() {
            digits[0] = target.to_integer();
            return true;
        }
        return false;
    }
    if target.is_negative() {
        return false;
    }
    let r = &ratios[k - 1];
    let max = (target / r).floor().to_integer();
    let mut alpha = max;
    while !alpha.is_negative() {
        let rest = target - BigRational::from(alpha.clone()) * r;
        if greedy_search(&rest, &ratios[..k - 1], digits) {
            digits[k] = alpha;
            return true;
        }
        alpha -= 1;
    }
    false
}

fn check_frobenius_input(entries: &[u64]) -> Result<(), SemigroupError> {
    if entries.len() < 2 {
        return Err(SemigroupError::NeedAtLeastTwo);
    }
    if entries.contains(&0) {
        return Err(SemigroupError::ZeroEntry);
    }
    let gcd = entries.iter().fold(0u64, |acc, &a| acc.gcd(&a));
    if gcd != 1 {
        return Err(SemigroupError::GcdNotOne);
    }
    Ok(())
}

/// Upper bound for the Frobenius number via the gcd chain
/// `d_i = gcd(a_1, ..., a_i)`: `sum a_{i+1} d_i / d_{i+1} - sum a_i`.
pub fn brauer_bound(entries: &[u64]) -> Result<BigInt, SemigroupError> {
    check_frobenius_input(entries)?;
    let mut t = BigInt::zero();
    let mut d = BigInt::from(entries[0]);
    for &a in &entries[1..] {
        let a = BigInt::from(a);
        let d_next = d.gcd(&a);
        t += &a * &d / &d_next;
        d = d_next;
    }
    let total: BigInt = entries.iter().map(|&a| BigInt::from(a)).sum();
    Ok(t - total)
}

/// Exact Frobenius number: the largest integer not representable as a
/// non-negative combination, found by dynamic programming up to the gcd-chain
/// bound. `-1` when every positive integer is representable.
pub fn frobenius_bruteforce(entries: &[u64]) -> Result<BigInt, SemigroupError> {
    check_frobenius_input(entries)?;
    let bound = brauer_bound(entries)?;
    if bound.is_negative() || bound.is_zero() {
        return Ok(BigInt::from(-1));
    }
    let bound_usize = u64::try_from(&bound)
        .ok()
        .and_then(|b| usize::try_from(b).ok())
        .ok_or(SemigroupError::Internal("bound exceeds addressable memory"))?;
    let mut reachable = vec![false; bound_usize + 1];
    reachable[0] = true;
    for v in 1..=bound_usize {
        for &a in entries {
            let a = a as usize;
            if a <= v && reachable[v - a] {
                reachable[v] = true;
                break;
            }
        }
    }
    for v in (1..=bound_usize).rev() {
        if !reachable[v] {
            return Ok(BigInt::from(v));
        }
    }
    Ok(BigInt::from(-1))
}

/// Every integer in `1..=limit` that the entries represent, from the same
/// dynamic program as [`frobenius_bruteforce`].
pub fn representable_up_to(entries: &[u64], limit: usize) -> Result<Vec<bool>, SemigroupError> {
    check_frobenius_input(entries)?;
    let mut reachable = vec![false; limit + 1];
    reachable[0] = true;
    for v in 1..=limit {
        for &a in entries {
            let a = a as usize;
            if a <= v && reachable[v - a] {
                reachable[v] = true;
                break;
            }
        }
    }
    Ok(reachable)
}

/// The generating-sequence polynomial `Q_index` in the level-0 coordinates:
/// `Q_0 = x`, `Q_1 = y`, and beyond that
/// `Q_i = Q_{i-1}^{q_{i-1}} - u · prod_j Q_j^{gamma_j}` with the scalar `u`
/// chosen so the strict transform at the piece boundary carries the spec's
/// residue. Only the single-correction-term shape is supported.
///
/// `gamma` is the unique digit representation of `q_{i-1} beta_{i-1}` over
/// the lower generators. Minimizing the high-index digits keeps the
/// correction term as free as possible of unit factors from earlier
/// z-blowups; representations heavier at the top can drop the value of the
/// difference below `beta_i`.
pub fn construct_q(
    spec: &ValuationSpec,
    index: usize,
    table: &BetaTable,
) -> Result<BiPoly, SemigroupError> {
    spec.validate().map_err(SemigroupError::InvalidSpec)?;
    if index < 2 || index > table.rows.len() {
        return Err(SemigroupError::InvalidIndex { index });
    }
    let mut polys: Vec<BiPoly> = vec![BiPoly::var_x(), BiPoly::var_y()];
    for i in 2..=index {
        let prev = &table.rows[i - 2];
        let prev_q = prev
            .q
            .clone()
            .ok_or(SemigroupError::InvalidIndex { index: i })?;
        let prev_q_u64 =
            u64::try_from(&prev_q).map_err(|_| SemigroupError::Internal("q out of range"))?;
        let target =
            prev.beta
                .scale_int(&prev_q)
                .ratio_to(&table.beta0)
                .ok_or(SemigroupError::Internal(
                    "q·beta is not a rational multiple of beta0",
                ))?;
        let gamma = DigitVector {
            digits: rational_digits(&target, &table.rows[..i - 2], &table.beta0)?,
        };
        let lead = polys[i - 1].pow(prev_q_u64);
        let mut correction = BiPoly::one();
        for (j, alpha) in gamma.digits.iter().enumerate() {
            let alpha =
                u64::try_from(alpha).map_err(|_| SemigroupError::Internal("digit out of range"))?;
            correction = correction.mul(&polys[j].pow(alpha));
        }
        let level = spec.sigma(i as u64, 0, 0)?;
        let run = trace(spec, level as usize)?;
        let lead_t = transform_poly(&lead, &run.steps)?;
        let corr_t = transform_poly(&correction, &run.steps)?;
        // at the piece boundary the two sides share a monomial m with
        // lead = m·y·unit and correction = m·x·unit
        if lead_t.e1 + 1 != corr_t.e1 || corr_t.e2 + 1 != lead_t.e2 {
            return Err(SemigroupError::Internal(
                "correction term does not align with the lead term at the piece boundary",
            ));
        }
        let lead_unit = lead_t.strict.constant_term();
        let corr_unit = corr_t.strict.constant_term();
        if lead_unit.is_zero() || corr_unit.is_zero() {
            return Err(SemigroupError::Internal(
                "transforms at the piece boundary must be units",
            ));
        }
        // when the two unit factors are proportional, the difference has the
        // exact binomial strict transform and certainly reaches beta_i;
        // otherwise the mismatch leaves terms of value ν(x) behind, which is
        // only tolerable when the jump entering piece i stays below ν(x)
        let proportional =
            corr_t.strict.mul_scalar(&lead_unit) == lead_t.strict.mul_scalar(&corr_unit);
        if !proportional {
            let jump = table.rows[i - 1]
                .beta
                .checked_sub(&table.rows[i - 2].beta.scale_int(&prev_q))
                .map_err(|_| SemigroupError::Internal("rows in mixed families"))?;
            let boundary_x = table
                .beta0
                .scale(&BigRational::new(BigInt::one(), table.q_product(i - 1)));
            if jump.compare(&boundary_x)? != Ordering::Less {
                return Err(SemigroupError::SingleTermInsufficient { index: i });
            }
        }
        let residue = spec.residue(i as u32);
        let u = residue * lead_unit / corr_unit;
        polys.push(lead.sub(&correction.mul_scalar(&u)));
    }
    Ok(polys[index].clone())
}

/// Plain-text rendering of a beta table: one aligned row per generator.
pub fn render_beta_table(table: &BetaTable) -> String {
    use core::fmt::Write;
    let mut lines: Vec<[String; 6]> = Vec::new();
    lines.push([
        String::from("i"),
        String::from("beta~_i"),
        String::from("beta'_i"),
        String::from("p_i"),
        String::from("q_i"),
        String::from("beta_i"),
    ]);
    lines.push([
        String::from("0"),
        String::from("-"),
        String::from("-"),
        String::from("-"),
        String::from("-"),
        alloc::format!("{}", table.beta0),
    ]);
    let dash = || String::from("-");
    for row in &table.rows {
        lines.push([
            alloc::format!("{}", row.index),
            row.beta_tilde
                .as_ref()
                .map(|cf| alloc::format!("{cf}"))
                .unwrap_or_else(dash),
            row.beta_prime
                .as_ref()
                .map(|b| alloc::format!("{b}"))
                .unwrap_or_else(dash),
            row.p
                .as_ref()
                .map(|p| alloc::format!("{p}"))
                .unwrap_or_else(dash),
            row.q
                .as_ref()
                .map(|q| alloc::format!("{q}"))
                .unwrap_or_else(dash),
            alloc::format!("{}", row.beta),
        ]);
    }
    for (k, value) in table.tail_values.iter().enumerate() {
        lines.push([
            alloc::format!("{}+{}", table.rows.len(), k + 1),
            dash(),
            dash(),
            dash(),
            dash(),
            alloc::format!("{value}"),
        ]);
    }
    let mut widths = [0usize; 6];
    for line in &lines {
        for (w, cell) in widths.iter_mut().zip(line.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for line in &lines {
        for (k, (cell, width)) in line.iter().zip(widths.iter()).enumerate() {
            if k > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{cell:<width$}", width = width);
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::divisorial_value;
    use crate::spec::TypeExtras;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn dgex() -> ValuationSpec {
        ValuationSpec::new(ValuationType::T0, vec![vec![3, 1], vec![1, 2]])
    }

    fn small_chain_table() -> BetaTable {
        // beta0 = 1, beta1 = 3/2, beta2 = 13/4 with q1 = q2 = 2
        BetaTable::from_values(
            Value::rat_int(1),
            vec![
                (Value::rat(3, 2), Some(BigInt::from(2))),
                (Value::rat(13, 4), Some(BigInt::from(2))),
            ],
        )
    }

    #[test]
    fn beta_table_of_worked_example() {
        let table = beta_table(&dgex(), None).unwrap();
        assert_eq!(table.beta0, Value::rat_int(1));
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].beta, Value::rat(7, 2));
        assert_eq!(table.rows[1].beta, Value::rat(43, 6));
        assert_eq!(table.rows[0].q, Some(BigInt::from(2)));
        assert_eq!(table.rows[1].q, Some(BigInt::from(3)));
        assert_eq!(table.rows[0].beta_prime, Some(rat(7, 2)));
    }

    #[test]
    fn beta_table_single_segment_piece() {
        let spec = ValuationSpec::new(ValuationType::T0, vec![vec![1]]);
        let table = beta_table(&spec, None).unwrap();
        assert_eq!(table.rows[0].beta, Value::rat_int(2));
    }

    #[test]
    fn beta_table_irrational_chain() {
        let spec = ValuationSpec {
            extras: TypeExtras::PeriodicSegments { period: vec![1, 2] },
            ..ValuationSpec::new(ValuationType::T2, vec![vec![3]])
        };
        let table = beta_table(&spec, None).unwrap();
        assert_eq!(table.rows.len(), 1);
        // beta1 = τ itself: jump (τ-1) on top of q0·beta0 = 1
        match &table.rows[0].beta {
            Value::Irr {
                rational,
                tau_coefficient,
                ..
            } => {
                assert_eq!(rational, &rat(0, 1));
                assert_eq!(tau_coefficient, &rat(1, 1));
            }
            other => panic!("expected irrational generator, got {other:?}"),
        }
    }

    #[test]
    fn beta_table_depth_errors_past_tail() {
        assert_eq!(
            beta_table(&dgex(), Some(3)),
            Err(SemigroupError::BeyondTail { last_index: 2 })
        );
    }

    #[test]
    fn beta_table_analytic_tail_values() {
        let spec = ValuationSpec {
            extras: TypeExtras::Exponents {
                exponents: vec![2, 5, 9],
            },
            ..ValuationSpec::new(ValuationType::T4_1, vec![])
        };
        let table = beta_table(&spec, None).unwrap();
        assert!(table.rows.is_empty());
        assert_eq!(
            table.tail_values,
            vec![Value::rat_int(2), Value::rat_int(5), Value::rat_int(9)]
        );
    }

    #[test]
    fn represent_examples() {
        let table = small_chain_table();
        let v = represent(&Value::rat(9, 2), &table).unwrap();
        assert_eq!(
            v.digits,
            vec![BigInt::from(3), BigInt::from(1), BigInt::from(0)]
        );
        // the generator itself
        let v = represent(&Value::rat_int(1), &table).unwrap();
        assert_eq!(
            v.digits,
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]
        );
        assert_eq!(
            represent(&Value::rat(1, 4), &table),
            Err(SemigroupError::NotInSemigroup)
        );
    }

    #[test]
    fn represent_splits_rank2_top() {
        // T4.2 chain: beta0 = (0,1), beta1 = (0,3/2), beta2 = (1, 3) + carry
        let spec = ValuationSpec {
            extras: TypeExtras::RankJump { n: BigInt::zero() },
            ..ValuationSpec::new(ValuationType::T4_2, vec![vec![1, 1]])
        };
        let table = beta_table(&spec, None).unwrap();
        assert_eq!(table.rows[1].beta, Value::rank2(rat(1, 1), rat(3, 1)));
        // 2·beta2 + 1·beta1 + 3·beta0
        let s = Value::rank2(rat(2, 1), rat(3, 2) + rat(3, 1) + rat(6, 1));
        let v = represent(&s, &table).unwrap();
        assert_eq!(
            v.digits,
            vec![BigInt::from(3), BigInt::from(1), BigInt::from(2)]
        );
        // negative top digit is out
        assert_eq!(
            represent(&Value::rank2(rat(-1, 1), rat(0, 1)), &table),
            Err(SemigroupError::NotInSemigroup)
        );
    }

    #[test]
    fn represent_splits_irrational_top() {
        let spec = ValuationSpec {
            extras: TypeExtras::PeriodicSegments { period: vec![2] },
            ..ValuationSpec::new(ValuationType::T2, vec![vec![1]])
        };
        let table = beta_table(&spec, None).unwrap();
        // beta1 = τ = sqrt(2); query 2τ + 3
        let s = table.rows[0]
            .beta
            .scale(&rat(2, 1))
            .checked_add(&Value::rat_int(3).scale(&rat(1, 1)))
            .unwrap();
        let v = represent(&s, &table).unwrap();
        assert_eq!(v.digits, vec![BigInt::from(3), BigInt::from(2)]);
        // τ-coefficient must be a non-negative integer multiple
        let bad = table.rows[0].beta.scale(&rat(1, 2));
        assert_eq!(represent(&bad, &table), Err(SemigroupError::NotInSemigroup));
    }

    #[test]
    fn qbeta_examples() {
        let table = BetaTable::from_values(
            Value::rat_int(1),
            vec![(Value::rat(3, 2), Some(BigInt::from(2)))],
        );
        let v = qbeta_representation(&table, 1).unwrap();
        assert_eq!(v.digits, vec![BigInt::from(3)]);

        let table = BetaTable::from_values(
            Value::rat_int(1),
            vec![(Value::rat(7, 2), Some(BigInt::from(2)))],
        );
        let v = qbeta_representation(&table, 1).unwrap();
        assert_eq!(v.digits, vec![BigInt::from(7)]);

        let v = qbeta_representation(&small_chain_table(), 2).unwrap();
        assert_eq!(v.digits, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_bruteforce(&[3, 5]).unwrap(), BigInt::from(7));
        assert_eq!(frobenius_bruteforce(&[2, 3]).unwrap(), BigInt::from(1));
        assert_eq!(frobenius_bruteforce(&[6, 9, 20]).unwrap(), BigInt::from(43));
        assert_eq!(
            frobenius_bruteforce(&[2, 4]),
            Err(SemigroupError::GcdNotOne)
        );
        assert_eq!(
            frobenius_bruteforce(&[5]),
            Err(SemigroupError::NeedAtLeastTwo)
        );
    }

    #[test]
    fn brauer_examples() {
        assert_eq!(brauer_bound(&[3, 5]).unwrap(), BigInt::from(7));
        // the gcd-chain formula gives T = 6, so the bound is 6 - 5 = 1
        assert_eq!(brauer_bound(&[2, 3]).unwrap(), BigInt::from(1));
        // T = 9·6/3 + 20·3/1 = 78, minus the sum 35
        assert_eq!(brauer_bound(&[6, 9, 20]).unwrap(), BigInt::from(43));
    }

    #[test]
    fn construct_q_worked_example() {
        let spec = dgex();
        let table = beta_table(&spec, None).unwrap();
        let q2 = construct_q(&spec, 2, &table).unwrap();
        assert_eq!(q2, BiPoly::parse("y^2 - x^7").unwrap());
    }

    #[test]
    fn construct_q_degenerate_unit_q() {
        // first piece [1] gives p1/q1 = 2/1, so Q2 = y - x^2
        let spec = ValuationSpec::new(ValuationType::T0, vec![vec![1], vec![1, 1]]);
        let table = beta_table(&spec, None).unwrap();
        let q2 = construct_q(&spec, 2, &table).unwrap();
        assert_eq!(q2, BiPoly::parse("y - x^2").unwrap());
    }

    #[test]
    fn construct_q_third_generator() {
        // chain 1, 3/2, 13/4 extended by one more piece so Q3 exists
        let spec = ValuationSpec::new(ValuationType::T0, vec![vec![1, 1], vec![1, 1], vec![1, 1]]);
        let table = beta_table(&spec, None).unwrap();
        assert_eq!(table.rows[0].beta, Value::rat(3, 2));
        assert_eq!(table.rows[1].beta, Value::rat(13, 4));
        let q3 = construct_q(&spec, 3, &table).unwrap();
        // the digit representation of q2·beta2 = 13/2 is 5·beta0 + 1·beta1
        let expected = BiPoly::parse("y^2 - x^3")
            .unwrap()
            .pow(2)
            .sub(&BiPoly::parse("x^5*y").unwrap());
        assert_eq!(q3, expected);
        // both terms of Q3 carry the value q2·beta2 = 13/2
        assert_eq!(
            divisorial_value(&BiPoly::parse("x^5*y").unwrap(), &spec).unwrap(),
            rat(13, 2)
        );
        assert_eq!(
            divisorial_value(&BiPoly::parse("y^2 - x^3").unwrap(), &spec).unwrap() * rat(2, 1),
            rat(13, 2)
        );
    }

    #[test]
    fn beta_chain_agrees_with_polynomial_engine() {
        let spec = dgex();
        let table = beta_table(&spec, None).unwrap();
        let q2 = construct_q(&spec, 2, &table).unwrap();
        assert_eq!(
            divisorial_value(&q2, &spec).unwrap(),
            table.rows[1].beta.ratio_to(&table.beta0).unwrap()
        );
    }
}

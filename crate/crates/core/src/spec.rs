//! The valuation specification: the combinatorial defining data of a dual
//! graph (piece count, segments per piece, vertices per segment) together
//! with the type tag, residues, and the per-type extras that pin down the
//! infinite part.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// The three parameter substitutions a point blowup can perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowupKind {
    /// `x -> x', y -> x'y'` — used when the x-parameter has the smaller value.
    X,
    /// `x -> x'y', y -> y'` — used when the y-parameter has the smaller value.
    Y,
    /// `x -> x', y -> x'(y' + c)` — used at equal values; translates by the
    /// residue `c` and can create a jump value.
    Z,
}

impl fmt::Display for BlowupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupKind::X => write!(f, "X"),
            BlowupKind::Y => write!(f, "Y"),
            BlowupKind::Z => write!(f, "Z"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ValuationType {
    /// Divisorial: finitely many blowups ending in a discrete valuation ring.
    T0,
    /// Infinitely singular: infinitely many two-leg pieces.
    T1,
    /// Irrational: the last piece has infinitely many segments.
    T2,
    /// Exceptional curve: the last segment of the last piece is infinite.
    T3,
    /// Curve valuation, analytic flavor: the infinite tail mixes x- and
    /// z-blowups driven by an exponent sequence.
    T4_1,
    /// Curve valuation with a rank jump: one z-blowup into the tail, then
    /// x-blowups forever.
    T4_2,
}

impl fmt::Display for ValuationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationType::T0 => write!(f, "T0"),
            ValuationType::T1 => write!(f, "T1"),
            ValuationType::T2 => write!(f, "T2"),
            ValuationType::T3 => write!(f, "T3"),
            ValuationType::T4_1 => write!(f, "T4_1"),
            ValuationType::T4_2 => write!(f, "T4_2"),
        }
    }
}

/// Type-specific data beyond the finite piece lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExtras {
    /// T0 and T3 carry nothing extra (the T3 infinite-segment marker is
    /// implied by the type tag; `pieces` holds the finite segment prefix of
    /// the last piece).
    None,
    /// T1: after the listed pieces, these piece templates repeat forever.
    RepeatPieces { repeat: Vec<Vec<u64>> },
    /// T2: the segment sequence of the last piece continues with this cycle
    /// repeated forever (the listed prefix comes from `pieces`).
    PeriodicSegments { period: Vec<u64> },
    /// T4.1: strictly increasing exponents of the simulated analytic curve.
    Exponents { exponents: Vec<u64> },
    /// T4.2: the integer `n` fixing the jump value `(1, n/(q1···qg))`.
    RankJump { n: BigInt },
}

/// Defining data of a valuation: piece segment lists, optional divisorial
/// tail count, type tag, residues per z-blowup, and a default truncation
/// depth for operations that enumerate an infinite object.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationSpec {
    pub type_tag: ValuationType,
    /// Segment counts per listed piece: `pieces[i-1][j-1]` is the number of
    /// vertices in segment `j` of piece `i`.
    pub pieces: Vec<Vec<u64>>,
    /// Vertex count of the divisorial tail piece (0 = no tail). Only T0 may
    /// set this; for T4 the infinite tail is implied by the type tag.
    pub tail: u64,
    /// Residues per z-blowup, keyed by the index of the piece the z-blowup
    /// enters (the k-th z-blowup enters piece k+1). Missing keys default
    /// to 1.
    pub residues: BTreeMap<u32, BigRational>,
    pub extras: TypeExtras,
    /// Default truncation depth for infinite enumerations.
    pub depth: usize,
}

/// A single validation failure; the message states the broken rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecViolation {
    pub message: String,
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    /// Sigma indices outside the dual graph.
    SigmaOutOfRange { i: u64, m: u64, a: u64 },
    /// Enumeration past the end of a finite blowup sequence.
    Exhausted { available: u64 },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::SigmaOutOfRange { i, m, a } => {
                write!(f, "sigma index ({i}, {m}, {a}) out of range")
            }
            SpecError::Exhausted { available } => {
                write!(f, "blowup sequence has only {available} steps")
            }
        }
    }
}

/// Row of the classification table: invariants of the valuation read off the
/// type tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeReport {
    pub type_tag: ValuationType,
    pub rank: u8,
    pub rational_rank: u8,
    pub residue_transcendence_degree: u8,
    pub discrete: bool,
    pub value_group: &'static str,
}

/// How many vertices a segment holds.
enum SegmentCount {
    Finite(u64),
    Infinite,
    Missing,
}

impl ValuationSpec {
    pub fn new(type_tag: ValuationType, pieces: Vec<Vec<u64>>) -> Self {
        Self {
            type_tag,
            pieces,
            tail: 0,
            residues: BTreeMap::new(),
            extras: TypeExtras::None,
            depth: 32,
        }
    }

    /// Number of listed pieces (for T1 this is only the explicit prefix).
    pub fn listed_piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Index of the last generating-sequence element. `None` means infinite
    /// (T1).
    pub fn last_generator_index(&self) -> Option<usize> {
        let g = self.pieces.len();
        match self.type_tag {
            ValuationType::T0 => Some(if self.tail > 0 { g + 1 } else { g }),
            ValuationType::T1 => None,
            ValuationType::T2 | ValuationType::T3 | ValuationType::T4_1 => Some(g),
            ValuationType::T4_2 => Some(g + 1),
        }
    }

    /// Residue used by the z-blowup entering piece `piece_index`, default 1.
    pub fn residue(&self, piece_index: u32) -> BigRational {
        self.residues
            .get(&piece_index)
            .cloned()
            .unwrap_or_else(|| BigRational::from(BigInt::from(1)))
    }

    /// Segment counts of piece `index` (1-based). For the T2 infinite piece
    /// the list is materialized up to `segment_limit` entries; T1 pieces past
    /// the listed prefix come from the repeat templates. `None` past the last
    /// piece of a finite-piece-count type (the T4 infinite tail and the T0
    /// divisorial tail are not pieces in this sense).
    pub fn piece_segments(&self, index: usize, segment_limit: usize) -> Option<Vec<u64>> {
        if index == 0 {
            return None;
        }
        let g = self.pieces.len();
        if index <= g {
            let listed = &self.pieces[index - 1];
            if self.type_tag == ValuationType::T2 && index == g {
                if let TypeExtras::PeriodicSegments { period } = &self.extras {
                    let mut out = listed.clone();
                    while out.len() < segment_limit {
                        out.push(period[(out.len() - listed.len()) % period.len()]);
                    }
                    return Some(out);
                }
            }
            return Some(listed.clone());
        }
        match (&self.type_tag, &self.extras) {
            (ValuationType::T1, TypeExtras::RepeatPieces { repeat }) if !repeat.is_empty() => {
                Some(repeat[(index - g - 1) % repeat.len()].clone())
            }
            _ => None,
        }
    }

    /// The row of the classification table for this spec's type.
    pub fn classify(&self) -> TypeReport {
        let (rank, rational_rank, d, discrete, value_group) = match self.type_tag {
            ValuationType::T0 => (1, 1, 1, true, "Z"),
            ValuationType::T1 => (1, 1, 0, false, "additive subgroup of Q"),
            ValuationType::T2 => (1, 2, 0, false, "Z + Z·τ"),
            ValuationType::T3 => (2, 2, 0, true, "Z^2"),
            ValuationType::T4_1 => (1, 1, 0, true, "Z"),
            ValuationType::T4_2 => (2, 2, 0, true, "Z^2"),
        };
        TypeReport {
            type_tag: self.type_tag,
            rank,
            rational_rank,
            residue_transcendence_degree: d,
            discrete,
            value_group,
        }
    }

    /// Check every structural invariant; violations come back as data.
    pub fn validate(&self) -> Result<(), Vec<SpecViolation>> {
        let mut violations: Vec<SpecViolation> = Vec::new();
        let push = |violations: &mut Vec<SpecViolation>, message: String| {
            violations.push(SpecViolation { message })
        };
        let g = self.pieces.len();

        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.is_empty() {
                push(
                    &mut violations,
                    format!("piece {} must have at least one segment", i + 1),
                );
            }
            for (j, a) in piece.iter().enumerate() {
                if *a == 0 {
                    push(
                        &mut violations,
                        format!(
                            "segment count must be >= 1 (piece {}, segment {})",
                            i + 1,
                            j + 1
                        ),
                    );
                }
            }
        }
        for (key, c) in &self.residues {
            if *key < 2 {
                push(
                    &mut violations,
                    format!("residue key {key} must be >= 2 (z-blowups enter pieces 2 and up)"),
                );
            }
            if c.is_zero() {
                push(
                    &mut violations,
                    format!("residue for piece {key} must be nonzero"),
                );
            }
        }
        if self.tail > 0 && self.type_tag != ValuationType::T0 {
            push(
                &mut violations,
                String::from(
                    "only Type 0 may list a finite tail piece; infinite tails are implied by the type",
                ),
            );
        }

        match (&self.type_tag, &self.extras) {
            (ValuationType::T0, TypeExtras::None) => {}
            (ValuationType::T1, TypeExtras::RepeatPieces { repeat }) => {
                if repeat.is_empty() {
                    push(
                        &mut violations,
                        String::from("Type 1 requires a non-empty repeating piece list"),
                    );
                }
                for (i, piece) in repeat.iter().enumerate() {
                    if piece.is_empty() {
                        push(
                            &mut violations,
                            format!("repeat piece {} must have at least one segment", i + 1),
                        );
                    }
                    if piece.contains(&0) {
                        push(
                            &mut violations,
                            format!("repeat piece {} has a zero segment count", i + 1),
                        );
                    }
                }
            }
            (ValuationType::T2, TypeExtras::PeriodicSegments { period }) => {
                if g == 0 {
                    push(
                        &mut violations,
                        String::from("Type 2 requires at least one piece"),
                    );
                }
                if period.is_empty() {
                    push(
                        &mut violations,
                        String::from(
                            "Type 2 requires m_g = infinity: the segment period must be non-empty",
                        ),
                    );
                }
                if period.contains(&0) {
                    push(
                        &mut violations,
                        String::from("Type 2 period has a zero segment count"),
                    );
                }
            }
            (ValuationType::T2, _) => {
                push(
                    &mut violations,
                    String::from(
                        "Type 2 requires m_g = infinity: give the periodic segment continuation",
                    ),
                );
            }
            (ValuationType::T3, TypeExtras::None) => {
                if g == 0 {
                    push(
                        &mut violations,
                        String::from("Type 3 requires at least one piece"),
                    );
                } else if self.pieces[g - 1].is_empty() {
                    push(
                        &mut violations,
                        String::from(
                            "Type 3 stores the finite segment prefix of the last piece; it must be non-empty",
                        ),
                    );
                }
            }
            (ValuationType::T4_1, TypeExtras::Exponents { exponents }) => {
                if exponents.is_empty() {
                    push(
                        &mut violations,
                        String::from("Type 4.1 requires a non-empty exponent sequence"),
                    );
                }
                if exponents.first().is_some_and(|e| *e == 0) {
                    push(
                        &mut violations,
                        String::from("Type 4.1 exponents must be positive"),
                    );
                }
                if exponents.windows(2).any(|w| w[0] >= w[1]) {
                    push(
                        &mut violations,
                        String::from("Type 4.1 exponents must be strictly increasing"),
                    );
                }
                if g == 0 && exponents.first().is_some_and(|e| *e < 2) {
                    push(
                        &mut violations,
                        String::from(
                            "Type 4.1 with no pieces needs its first exponent >= 2 (the first blowup is an x-blowup)",
                        ),
                    );
                }
            }
            (ValuationType::T4_2, TypeExtras::RankJump { .. }) => {}
            (tag, extras) => {
                push(
                    &mut violations,
                    format!("extras {extras:?} do not match type {tag}"),
                );
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// The blowup-kind sequence encoded by the dual graph data, truncated to
    /// `depth` steps.
    ///
    /// Piece 1 contributes `a1` x-blowups, `a2` y-blowups, `a3` x-blowups and
    /// so on; every later piece starts with one z-blowup counted inside its
    /// first segment, then alternates the same way. Divisorial specs end with
    /// one conventional x-blowup. The T4.1 tail alternates runs of x-blowups
    /// with z-blowups at the listed exponents and keeps emitting x-blowups
    /// past the last one; T4.2 has a single tail z-blowup then x-blowups
    /// forever.
    pub fn decode_blowups(&self, depth: usize) -> Result<Vec<BlowupKind>, SpecError> {
        let mut out: Vec<BlowupKind> = Vec::new();
        let g = self.pieces.len();

        match self.type_tag {
            ValuationType::T0 => {
                for (i, piece) in self.pieces.iter().enumerate() {
                    emit_piece(&mut out, depth, piece, i > 0);
                }
                if self.tail > 0 {
                    emit_piece(&mut out, depth, &[self.tail], g > 0);
                }
                // conventional final x-blowup reaching the open dot
                if out.len() < depth {
                    out.push(BlowupKind::X);
                }
                let total: u64 = self.pieces.iter().flatten().sum::<u64>() + self.tail + 1;
                if (depth as u64) > total {
                    return Err(SpecError::Exhausted { available: total });
                }
            }
            ValuationType::T1 => {
                let mut index = 1;
                while out.len() < depth {
                    let piece = self
                        .piece_segments(index, 0)
                        .expect("T1 pieces repeat forever");
                    emit_piece(&mut out, depth, &piece, index > 1);
                    index += 1;
                }
            }
            ValuationType::T2 => {
                for i in 1..=g {
                    let piece = self.piece_segments(i, depth + 2).expect("piece exists");
                    emit_piece(&mut out, depth, &piece, i > 1);
                }
            }
            ValuationType::T3 => {
                for (i, piece) in self.pieces.iter().enumerate() {
                    emit_piece(&mut out, depth, piece, i > 0);
                }
                // the infinite last segment: x-blowups when its 1-based index
                // m_g is odd, y-blowups when even
                let m_g = self.pieces[g - 1].len() + 1;
                let kind = if m_g % 2 == 1 {
                    BlowupKind::X
                } else {
                    BlowupKind::Y
                };
                while out.len() < depth {
                    out.push(kind);
                }
            }
            ValuationType::T4_1 => {
                for (i, piece) in self.pieces.iter().enumerate() {
                    emit_piece(&mut out, depth, piece, i > 0);
                }
                if g > 0 && out.len() < depth {
                    out.push(BlowupKind::Z);
                }
                let exponents = match &self.extras {
                    TypeExtras::Exponents { exponents } => exponents.as_slice(),
                    _ => &[],
                };
                let mut previous = 0u64;
                for &e in exponents {
                    for _ in 0..(e - previous - 1) {
                        if out.len() >= depth {
                            break;
                        }
                        out.push(BlowupKind::X);
                    }
                    if out.len() < depth {
                        out.push(BlowupKind::Z);
                    }
                    previous = e;
                }
                // past the last listed exponent only x-blowups are certain
                while out.len() < depth {
                    out.push(BlowupKind::X);
                }
            }
            ValuationType::T4_2 => {
                for (i, piece) in self.pieces.iter().enumerate() {
                    emit_piece(&mut out, depth, piece, i > 0);
                }
                if g > 0 && out.len() < depth {
                    out.push(BlowupKind::Z);
                }
                while out.len() < depth {
                    out.push(BlowupKind::X);
                }
            }
        }
        out.truncate(depth);
        Ok(out)
    }

    /// Label of the `a`-th vertex in the `(m+1)`-th segment of piece `i`:
    /// all earlier pieces' segment counts, plus this piece's first `m`
    /// segments, plus `a`.
    ///
    /// The predecessor alias `(i, 0, 0)` is accepted and equals
    /// `sigma(i, 0, 1) - 1`. For divisorial specs the open-dot alias
    /// `(g'+1, 1, 1)` resolves to the label of the final vertex even though
    /// the summation formula does not cover it.
    pub fn sigma(&self, i: u64, m: u64, a: u64) -> Result<u64, SpecError> {
        let out_of_range = SpecError::SigmaOutOfRange { i, m, a };
        if i == 0 {
            return Err(out_of_range);
        }
        if m == 0 && a == 0 {
            return Ok(self.sigma(i, 0, 1)? - 1);
        }
        if self.type_tag == ValuationType::T0 && m == 1 && a == 1 {
            // open-dot alias for the right-most vertex
            let g = self.pieces.len() as u64;
            if i == g + 1 && matches!(self.segment_count(i, 1), SegmentCount::Missing) {
                let total: u64 = self.pieces.iter().flatten().sum::<u64>() + self.tail;
                return Ok(total + 1);
            }
        }
        if a == 0 {
            return Err(out_of_range);
        }
        match self.segment_count(i, m) {
            SegmentCount::Finite(c) if a <= c => {}
            SegmentCount::Infinite => {}
            _ => return Err(out_of_range),
        }
        let mut total: u64 = 0;
        for k in 1..i {
            total += self.piece_total(k).ok_or(out_of_range.clone())?;
        }
        for l in 0..m {
            match self.segment_count(i, l) {
                SegmentCount::Finite(c) => total += c,
                _ => return Err(out_of_range),
            }
        }
        Ok(total + a)
    }

    /// Vertices in the 0-based segment `m` of piece `i`, with the divisorial
    /// tail counted as piece g+1 and the T4 infinite tail as an infinite
    /// first segment of piece g+1.
    fn segment_count(&self, i: u64, m: u64) -> SegmentCount {
        let g = self.pieces.len() as u64;
        if i == g + 1 {
            return match self.type_tag {
                ValuationType::T0 if self.tail > 0 => {
                    if m == 0 {
                        SegmentCount::Finite(self.tail)
                    } else {
                        SegmentCount::Missing
                    }
                }
                ValuationType::T4_1 | ValuationType::T4_2 => {
                    if m == 0 {
                        SegmentCount::Infinite
                    } else {
                        SegmentCount::Missing
                    }
                }
                _ => self.listed_or_repeat_segment(i, m),
            };
        }
        if i >= 1 && i <= g {
            if self.type_tag == ValuationType::T3 && i == g {
                let prefix = &self.pieces[g as usize - 1];
                return if (m as usize) < prefix.len() {
                    SegmentCount::Finite(prefix[m as usize])
                } else if m as usize == prefix.len() {
                    SegmentCount::Infinite
                } else {
                    SegmentCount::Missing
                };
            }
            if self.type_tag == ValuationType::T2 && i == g {
                let segments = self
                    .piece_segments(i as usize, m as usize + 2)
                    .expect("piece exists");
                return match segments.get(m as usize) {
                    Some(c) => SegmentCount::Finite(*c),
                    None => SegmentCount::Missing,
                };
            }
            return match self.pieces[i as usize - 1].get(m as usize) {
                Some(c) => SegmentCount::Finite(*c),
                None => SegmentCount::Missing,
            };
        }
        self.listed_or_repeat_segment(i, m)
    }

    fn listed_or_repeat_segment(&self, i: u64, m: u64) -> SegmentCount {
        match self.piece_segments(i as usize, m as usize + 2) {
            Some(segments) => match segments.get(m as usize) {
                Some(c) => SegmentCount::Finite(*c),
                None => SegmentCount::Missing,
            },
            None => SegmentCount::Missing,
        }
    }

    /// Total vertex count of piece `i`; `None` when the piece is infinite or
    /// absent.
    fn piece_total(&self, i: u64) -> Option<u64> {
        let g = self.pieces.len() as u64;
        match self.type_tag {
            ValuationType::T2 if i == g => None,
            ValuationType::T3 if i == g => None,
            ValuationType::T0 if i == g + 1 && self.tail > 0 => Some(self.tail),
            _ => {
                let segments = self.piece_segments(i as usize, 0)?;
                if segments.is_empty() {
                    None
                } else {
                    Some(segments.iter().sum())
                }
            }
        }
    }
}

fn emit_piece(out: &mut Vec<BlowupKind>, depth: usize, segments: &[u64], starts_with_z: bool) {
    for (j, &count) in segments.iter().enumerate() {
        let kind = if j % 2 == 0 {
            BlowupKind::X
        } else {
            BlowupKind::Y
        };
        let mut remaining = count;
        if j == 0 && starts_with_z {
            if out.len() >= depth {
                return;
            }
            out.push(BlowupKind::Z);
            remaining -= 1;
        }
        for _ in 0..remaining {
            if out.len() >= depth {
                return;
            }
            out.push(kind);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dgex() -> ValuationSpec {
        ValuationSpec::new(ValuationType::T0, vec![vec![3, 1], vec![1, 2]])
    }

    #[test]
    fn classify_table_rows() {
        let t2 = ValuationSpec {
            extras: TypeExtras::PeriodicSegments { period: vec![1] },
            ..ValuationSpec::new(ValuationType::T2, vec![vec![2]])
        };
        let report = t2.classify();
        assert_eq!(
            (
                report.rank,
                report.rational_rank,
                report.residue_transcendence_degree
            ),
            (1, 2, 0)
        );
        assert!(!report.discrete);

        let t0 = dgex().classify();
        assert_eq!(
            (t0.rank, t0.rational_rank, t0.residue_transcendence_degree),
            (1, 1, 1)
        );
        assert!(t0.discrete);
        assert_eq!(t0.value_group, "Z");

        let t42 = ValuationSpec {
            extras: TypeExtras::RankJump { n: BigInt::from(0) },
            ..ValuationSpec::new(ValuationType::T4_2, vec![vec![1, 1]])
        };
        let report = t42.classify();
        assert_eq!(
            (
                report.rank,
                report.rational_rank,
                report.residue_transcendence_degree
            ),
            (2, 2, 0)
        );
        assert_eq!(report.value_group, "Z^2");
    }

    #[test]
    fn decode_worked_example() {
        use BlowupKind::*;
        let kinds = dgex().decode_blowups(8).unwrap();
        assert_eq!(kinds, vec![X, X, X, Y, Z, Y, Y, X]);
    }

    #[test]
    fn decode_trivial_divisorial() {
        use BlowupKind::*;
        let spec = ValuationSpec {
            tail: 1,
            ..ValuationSpec::new(ValuationType::T0, vec![])
        };
        assert_eq!(spec.decode_blowups(2).unwrap(), vec![X, X]);
    }

    #[test]
    fn decode_exhausted_past_finite_sequence() {
        assert_eq!(
            dgex().decode_blowups(9),
            Err(SpecError::Exhausted { available: 8 })
        );
    }

    #[test]
    fn decode_analytic_tail() {
        use BlowupKind::*;
        let spec = ValuationSpec {
            extras: TypeExtras::Exponents {
                exponents: vec![2, 5],
            },
            ..ValuationSpec::new(ValuationType::T4_1, vec![])
        };
        assert_eq!(spec.decode_blowups(6).unwrap(), vec![X, Z, X, X, Z, X]);
    }

    #[test]
    fn decode_rank_jump_tail() {
        use BlowupKind::*;
        let spec = ValuationSpec {
            extras: TypeExtras::RankJump { n: BigInt::from(0) },
            ..ValuationSpec::new(ValuationType::T4_2, vec![vec![1, 1]])
        };
        assert_eq!(spec.decode_blowups(5).unwrap(), vec![X, Y, Z, X, X]);
    }

    #[test]
    fn sigma_worked_example() {
        let spec = dgex();
        assert_eq!(spec.sigma(2, 0, 1).unwrap(), 5);
        assert_eq!(spec.sigma(1, 0, 1).unwrap(), 1);
        assert_eq!(spec.sigma(2, 1, 2).unwrap(), 7);
        // predecessor alias
        assert_eq!(spec.sigma(2, 0, 0).unwrap(), 4);
        assert_eq!(spec.sigma(1, 1, 1).unwrap(), 4);
        assert_eq!(spec.sigma(1, 0, 0).unwrap(), 0);
        // open-dot alias
        assert_eq!(spec.sigma(3, 1, 1).unwrap(), 8);
    }

    #[test]
    fn sigma_rejects_out_of_range() {
        let spec = dgex();
        assert!(spec.sigma(1, 2, 1).is_err());
        assert!(spec.sigma(1, 0, 4).is_err());
        assert!(spec.sigma(4, 0, 1).is_err());
        assert!(spec.sigma(0, 0, 1).is_err());
    }

    #[test]
    fn sigma_is_strictly_increasing_and_exhaustive() {
        let spec = dgex();
        let mut labels = Vec::new();
        for i in 1..=2u64 {
            for m in 0..2u64 {
                for a in 1.. {
                    match spec.sigma(i, m, a) {
                        Ok(label) => labels.push(label),
                        Err(_) => break,
                    }
                }
            }
        }
        let expected: Vec<u64> = (1..=7).collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn validate_worked_example_ok() {
        assert!(dgex().validate().is_ok());
    }

    #[test]
    fn validate_rejects_zero_segment() {
        let spec = ValuationSpec::new(ValuationType::T0, vec![vec![3, 0], vec![1, 2]]);
        let violations = spec.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| v.message.contains("segment count must be >= 1")));
    }

    #[test]
    fn validate_rejects_finite_type2() {
        let spec = ValuationSpec::new(ValuationType::T2, vec![vec![2, 1]]);
        let violations = spec.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| v.message.contains("Type 2 requires m_g = infinity")));
    }

    #[test]
    fn validate_rejects_zero_residue() {
        let mut spec = dgex();
        spec.residues.insert(2, BigRational::zero());
        let violations = spec.validate().unwrap_err();
        assert!(violations.iter().any(|v| v.message.contains("nonzero")));
    }

    #[test]
    fn sigma_reaches_infinite_segments() {
        // T3: the infinite last segment accepts any vertex index
        let spec = ValuationSpec::new(ValuationType::T3, vec![vec![2, 1]]);
        assert!(spec.validate().is_ok());
        assert_eq!(spec.sigma(1, 2, 100).unwrap(), 103);
        // T2: segments keep coming from the period
        let spec = ValuationSpec {
            extras: TypeExtras::PeriodicSegments { period: vec![2, 3] },
            ..ValuationSpec::new(ValuationType::T2, vec![vec![1]])
        };
        assert!(spec.validate().is_ok());
        assert_eq!(spec.sigma(1, 3, 1).unwrap(), 1 + 2 + 3 + 1);
    }
}

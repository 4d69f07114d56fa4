//! Semigroup properties: uniqueness of bounded digit representations against
//! a brute-force enumeration oracle, the strict-transform shape of
//! generating-sequence polynomials at piece boundaries, Frobenius soundness,
//! and agreement of the two independent value computations (chain recursion
//! vs. polynomial transform).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use valgraph_core::blowup::{divisorial_value, trace, transform_poly};
use valgraph_core::semigroup::{
    beta_table, brauer_bound, construct_q, frobenius_bruteforce, represent, representable_up_to,
    BetaTable,
};
use valgraph_core::spec::{TypeExtras, ValuationSpec, ValuationType};
use valgraph_core::value::Value;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Pieces with one or two segments keep every q_i <= 5.
fn bounded_q_pieces(
    count: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(
        prop_oneof![
            (1u64..=4).prop_map(|a| vec![a]),
            (1u64..=3, 1u64..=4).prop_map(|(a, b)| vec![a, b]),
        ],
        count,
    )
}

/// Chains whose first piece has a single segment: the first z-blowup then
/// introduces no unit factors, so the single-correction-term construction is
/// exact through the third generator.
fn constructible_pieces() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (
        (1u64..=3).prop_map(|a| vec![a]),
        prop::collection::vec(
            prop_oneof![
                (1u64..=3).prop_map(|a| vec![a]),
                (1u64..=2, 1u64..=3).prop_map(|(a, b)| vec![a, b]),
            ],
            1..=2,
        ),
    )
        .prop_map(|(first, rest)| core::iter::once(first).chain(rest).collect())
}

fn residue_choice() -> impl Strategy<Value = BigRational> {
    prop_oneof![
        Just(rat(1, 1)),
        Just(rat(2, 1)),
        Just(rat(-1, 1)),
        Just(rat(1, 2)),
    ]
}

/// All digit vectors within the digit bounds whose value stays at or below
/// the ceiling, enumerated with nothing but value arithmetic. Interior rows
/// are capped by `q_i - 1`; rows without a `q` (and the zero row) get the
/// explicit `digit_cap` — a lexicographic ceiling alone does not bound the
/// low-coordinate digits of a rank-2 chain.
fn enumerate_bounded(
    table: &BetaTable,
    ceiling: &Value,
    digit_cap: u32,
) -> Vec<(Vec<BigInt>, Value)> {
    let mut generators: Vec<(Value, Option<BigInt>)> = vec![(table.beta0.clone(), None)];
    for row in &table.rows {
        generators.push((row.beta.clone(), row.q.clone()));
    }
    let mut out = Vec::new();
    let zero = table.beta0.zero_like();
    let mut digits: Vec<BigInt> = vec![BigInt::zero(); generators.len()];
    fn recurse(
        generators: &[(Value, Option<BigInt>)],
        index: usize,
        acc: &Value,
        ceiling: &Value,
        digits: &mut Vec<BigInt>,
        out: &mut Vec<(Vec<BigInt>, Value)>,
        digit_cap: u32,
    ) {
        if index == generators.len() {
            out.push((digits.clone(), acc.clone()));
            return;
        }
        let (beta, q) = &generators[index];
        let cap = q.clone().unwrap_or_else(|| BigInt::from(digit_cap));
        let mut k = BigInt::zero();
        let mut value = acc.clone();
        while k < cap {
            if value.compare(ceiling).unwrap() == Ordering::Greater {
                break;
            }
            digits[index] = k.clone();
            recurse(
                generators,
                index + 1,
                &value,
                ceiling,
                digits,
                out,
                digit_cap,
            );
            digits[index] = BigInt::zero();
            k += 1;
            value = value.checked_add(beta).unwrap();
        }
    }
    recurse(
        &generators,
        0,
        &zero,
        ceiling,
        &mut digits,
        &mut out,
        digit_cap,
    );
    drop(zero);
    out
}

/// The enumeration finds exactly one bounded digit vector per semigroup
/// element under the ceiling, and `represent` returns that vector.
fn assert_unique_and_agreeing(table: &BetaTable, ceiling: &Value) {
    let all = enumerate_bounded(table, ceiling, 30);
    let mut by_value: BTreeMap<String, Vec<Vec<BigInt>>> = BTreeMap::new();
    for (digits, value) in &all {
        // exact rendering is an injective key within one family
        by_value
            .entry(format!("{value}"))
            .or_default()
            .push(digits.clone());
    }
    for (digits, value) in &all {
        let found = &by_value[&format!("{value}")];
        assert_eq!(
            found.len(),
            1,
            "value {value} has {} bounded representations: {found:?}",
            found.len()
        );
        let reported = represent(value, table).unwrap();
        assert_eq!(&reported.digits, digits, "represent disagrees at {value}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Rational chains (divisorial and truncated infinitely-singular ones):
    /// interior bounds everywhere, unbounded zero digit.
    #[test]
    fn unique_representation_rational(pieces in bounded_q_pieces(1..=3)) {
        let spec = ValuationSpec::new(ValuationType::T0, pieces);
        let table = beta_table(&spec, None).unwrap();
        let ceiling = table.beta0.scale(&rat(20, 1));
        assert_unique_and_agreeing(&table, &ceiling);
    }

    /// Rank-2 chains: the rank-jump generator splits off by its first
    /// coordinate, the rest is a rational chain.
    #[test]
    fn unique_representation_rank_jump(pieces in bounded_q_pieces(1..=2), n in -2i64..=2) {
        let spec = ValuationSpec {
            extras: TypeExtras::RankJump { n: BigInt::from(n) },
            ..ValuationSpec::new(ValuationType::T4_2, pieces)
        };
        let table = beta_table(&spec, None).unwrap();
        // include a couple of rank-jump multiples under the ceiling
        let top = table.rows.last().unwrap().beta.clone();
        let ceiling = top
            .scale(&rat(2, 1))
            .checked_add(&table.beta0.scale(&rat(12, 1)))
            .unwrap();
        assert_unique_and_agreeing(&table, &ceiling);
    }

    /// Irrational chains: the τ-coefficient forces the top digit.
    #[test]
    fn unique_representation_irrational(
        pieces in bounded_q_pieces(1..=2),
        period in prop::collection::vec(1u64..=3, 1..=2),
    ) {
        let spec = ValuationSpec {
            extras: TypeExtras::PeriodicSegments { period },
            ..ValuationSpec::new(ValuationType::T2, pieces)
        };
        let table = beta_table(&spec, None).unwrap();
        let top = table.rows.last().unwrap().beta.clone();
        let ceiling = top
            .scale(&rat(2, 1))
            .checked_add(&table.beta0.scale(&rat(8, 1)))
            .unwrap();
        assert_unique_and_agreeing(&table, &ceiling);
    }

    /// The generating-sequence polynomial has strict transform
    /// `u·(y - c_i·x)` at the boundary before its piece — exactly two terms
    /// for i = 2, and for larger i up to a unit factor whose non-constant
    /// part sits in strictly higher value (equivalently, higher total
    /// degree, since the two parameters share a value at the boundary). One
    /// z-blowup later the polynomial is the new y-parameter times a unit.
    #[test]
    fn strict_shape_at_piece_boundary(
        pieces in constructible_pieces(),
        c2 in residue_choice(),
        c3 in residue_choice(),
    ) {
        let mut spec = ValuationSpec::new(ValuationType::T0, pieces);
        spec.residues.insert(2, c2);
        spec.residues.insert(3, c3);
        let table = beta_table(&spec, None).unwrap();
        let last = spec.last_generator_index().unwrap();
        for i in 2..=last.min(3) as u64 {
            let q = construct_q(&spec, i as usize, &table).unwrap();

            let boundary = spec.sigma(i, 0, 0).unwrap() as usize;
            let run = trace(&spec, boundary).unwrap();
            let result = transform_poly(&q, &run.steps).unwrap();
            let residue = spec.residue(i as u32);
            let unit = result.strict.coefficient((0, 1));
            prop_assert!(!unit.is_zero(), "no y-term in the strict transform");
            prop_assert_eq!(result.strict.coefficient((1, 0)), -&unit * &residue);
            prop_assert!(result.strict.constant_term().is_zero());
            for (&(a, b), _) in result.strict.terms() {
                prop_assert!(
                    (a, b) == (0, 1) || (a, b) == (1, 0) || a + b >= 2,
                    "unexpected low-order term x^{a} y^{b}"
                );
            }
            if i == 2 {
                // before the first z-blowup every transform is monomial, so
                // the unit is a scalar and the strict is a clean binomial
                prop_assert_eq!(result.strict.term_count(), 2);
            }

            // one z-blowup later Q_i is the new y-parameter times a unit,
            // up to terms of strictly higher value: either the y-factor came
            // out exactly, or it remains the value-leading term of the
            // residual, with every x-power term strictly above ν(y)
            let entered = spec.sigma(i, 0, 1).unwrap() as usize;
            let run = trace(&spec, entered).unwrap();
            let result = transform_poly(&q, &run.steps).unwrap();
            let step = run.steps.last().unwrap();
            if result.e2 == 1 {
                prop_assert!(result.strict.is_unit_at_origin());
            } else {
                prop_assert_eq!(result.e2, 0);
                prop_assert!(result.strict.constant_term().is_zero());
                prop_assert!(!result.strict.coefficient((0, 1)).is_zero());
                for (&(a, b), _) in result.strict.terms() {
                    if b == 0 {
                        let x_value = step.vx.scale(&BigRational::from(BigInt::from(a)));
                        prop_assert_ne!(
                            x_value.compare(&step.vy).unwrap(),
                            Ordering::Less,
                            "x^{} at level {} sits below the jump value",
                            a,
                            step.level
                        );
                    }
                }
            }
        }
    }

    /// Two independent computations of the generator values agree: the chain
    /// recursion and the polynomial transform of the constructed Q.
    #[test]
    fn beta_chain_matches_polynomial_values(pieces in constructible_pieces()) {
        let spec = ValuationSpec::new(ValuationType::T0, pieces);
        let table = beta_table(&spec, None).unwrap();
        let last = spec.last_generator_index().unwrap();
        for i in 2..=last.min(3) {
            let q = construct_q(&spec, i, &table).unwrap();
            let value = divisorial_value(&q, &spec).unwrap();
            let expected = table.rows[i - 1].beta.ratio_to(&table.beta0).unwrap();
            prop_assert_eq!(&value, &expected, "generator {} of {:?}", i, spec.pieces);
        }
    }

    /// Everything above the Frobenius number is representable, the number
    /// itself is not, and the gcd-chain bound dominates it.
    #[test]
    fn frobenius_soundness(entries in prop::collection::vec(2u64..=40, 2..=4)) {
        let gcd = entries.iter().fold(0u64, |acc, &a| {
            num_integer::Integer::gcd(&acc, &a)
        });
        prop_assume!(gcd == 1);
        let f = frobenius_bruteforce(&entries).unwrap();
        let bound = brauer_bound(&entries).unwrap();
        prop_assert!(f <= bound);
        let max = *entries.iter().max().unwrap() as usize;
        let f_isize = i64::try_from(&f).unwrap();
        let limit = (f_isize.max(0) as usize) + max + 1;
        let reachable = representable_up_to(&entries, limit).unwrap();
        if f_isize >= 0 {
            prop_assert!(!reachable[f_isize as usize]);
        }
        for (v, ok) in reachable
            .iter()
            .enumerate()
            .skip(f_isize.max(0) as usize + 1)
        {
            prop_assert!(*ok, "{v} should be representable");
        }
    }

    /// Generator values increase strictly, and each q_i·beta_i stays below
    /// the next generator (the recursion adds a positive jump on top of it).
    #[test]
    fn beta_chain_is_monotone(pieces in bounded_q_pieces(1..=3), tail in 0u64..=3) {
        let spec = ValuationSpec {
            tail,
            ..ValuationSpec::new(ValuationType::T0, pieces)
        };
        let table = beta_table(&spec, None).unwrap();
        let mut previous = table.beta0.clone();
        for row in &table.rows {
            prop_assert_eq!(
                row.beta.compare(&previous).unwrap(),
                Ordering::Greater,
                "beta_{} does not increase",
                row.index
            );
            previous = row.beta.clone();
        }
        for pair in table.rows.windows(2) {
            let carried = pair[0].beta.scale_int(pair[0].q.as_ref().unwrap());
            prop_assert_eq!(
                carried.compare(&pair[1].beta).unwrap(),
                Ordering::Less,
                "q_i·beta_i reaches beta_{}",
                pair[1].index
            );
        }
    }

    /// Analytic-tail values generate nothing new: each lies in the semigroup
    /// spanned by the finite generator rows.
    #[test]
    fn analytic_tail_adds_no_values(
        pieces in bounded_q_pieces(1..=2),
        breaks in prop::collection::vec(1u64..=4, 1..=3),
    ) {
        let mut exponents = Vec::new();
        let mut acc = 1u64;
        for b in breaks {
            acc += b;
            exponents.push(acc);
        }
        let spec = ValuationSpec {
            extras: TypeExtras::Exponents { exponents },
            ..ValuationSpec::new(ValuationType::T4_1, pieces)
        };
        let table = beta_table(&spec, None).unwrap();
        for value in &table.tail_values {
            prop_assert!(represent(value, &table).is_ok(), "tail value {value} not representable");
        }
    }
}

#[test]
fn single_term_construction_has_a_boundary() {
    // the unit factors of (y^2-x^3)^2 and any value-13/2 monomial disagree,
    // and the jump into the third piece exceeds ν(x) there, so no single
    // correction term reaches the generator value
    let spec = ValuationSpec::new(ValuationType::T0, vec![vec![1, 1], vec![1, 1], vec![2]]);
    let table = beta_table(&spec, None).unwrap();
    assert_eq!(
        construct_q(&spec, 3, &table),
        Err(valgraph_core::semigroup::SemigroupError::SingleTermInsufficient { index: 3 })
    );
    // with a gentler third piece the mismatch is harmless and the value is
    // still exact
    let spec = ValuationSpec::new(ValuationType::T0, vec![vec![1, 1], vec![1, 1], vec![1, 1]]);
    let table = beta_table(&spec, None).unwrap();
    let q3 = construct_q(&spec, 3, &table).unwrap();
    assert_eq!(
        divisorial_value(&q3, &spec).unwrap(),
        table.rows[2].beta.ratio_to(&table.beta0).unwrap()
    );
}

#[test]
fn unique_representation_exceptional_curve() {
    // rank-2 chain with the irrational-direction top generator
    let spec = ValuationSpec::new(ValuationType::T3, vec![vec![2, 1], vec![1, 2]]);
    let table = beta_table(&spec, None).unwrap();
    let top = table.rows.last().unwrap().beta.clone();
    let ceiling = top
        .scale(&rat(2, 1))
        .checked_add(&table.beta0.scale(&rat(6, 1)))
        .unwrap();
    assert_unique_and_agreeing(&table, &ceiling);
}

#[test]
fn truncated_chain_respects_frontier() {
    let spec = ValuationSpec {
        extras: TypeExtras::RepeatPieces {
            repeat: vec![vec![2, 1]],
        },
        ..ValuationSpec::new(ValuationType::T1, vec![vec![2, 1]])
    };
    let table = beta_table(&spec, Some(3)).unwrap();
    assert!(table.truncated);
    // beyond q_k·beta_k the membership is not certified
    let last = table.rows.last().unwrap();
    let frontier = last.beta.scale_int(&last.q.clone().unwrap());
    let past = frontier.checked_add(&table.beta0).unwrap();
    assert_eq!(
        represent(&past, &table),
        Err(valgraph_core::semigroup::SemigroupError::UndecidableAtDepth)
    );
    // at or below the frontier everything is decidable
    assert!(represent(&frontier, &table).is_ok());
    let below = table.beta0.scale(&rat(3, 1));
    assert!(represent(&below, &table).is_ok());
}

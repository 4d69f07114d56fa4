//! Bivariate polynomials over the rationals, stored as a map from exponent
//! pairs to nonzero coefficients. This is all the polynomial machinery the
//! blowup engine needs: ring operations, the three blowup substitutions, and
//! the text syntax `c*x^a*y^b` used on the command line.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent pair `(x, y)`.
pub type Exponents = (u64, u64);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exponents, BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    pub message: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term((0, 0), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `c · x^a y^b`.
    pub fn monomial(c: BigRational, exponents: Exponents) -> Self {
        let mut p = Self::default();
        p.add_term(exponents, c);
        p
    }

    pub fn var_x() -> Self {
        Self::monomial(BigRational::one(), (1, 0))
    }

    pub fn var_y() -> Self {
        Self::monomial(BigRational::one(), (0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: Exponents) -> BigRational {
        self.terms
            .get(&exponents)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the constant term; nonzero means the polynomial is a
    /// unit in the local ring at the origin.
    pub fn constant_term(&self) -> BigRational {
        self.coefficient((0, 0))
    }

    pub fn is_unit_at_origin(&self) -> bool {
        !self.constant_term().is_zero()
    }

    fn add_term(&mut self, exponents: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_scalar(&self, k: &BigRational) -> Self {
        let mut out = Self::default();
        for (&e, c) in &self.terms {
            out.add_term(e, c * k);
        }
        out
    }

    pub fn pow(&self, exponent: u64) -> Self {
        let mut out = Self::one();
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    /// Largest monomial `x^e1 y^e2` dividing every term.
    pub fn monomial_content(&self) -> Exponents {
        let mut iter = self.terms.keys();
        let Some(&(mut e1, mut e2)) = iter.next() else {
            return (0, 0);
        };
        for &(a, b) in iter {
            e1 = e1.min(a);
            e2 = e2.min(b);
        }
        (e1, e2)
    }

    /// Split into `(e1, e2, residual)` with `self = x^e1 y^e2 · residual` and
    /// the residual divisible by neither variable.
    pub fn factor_monomial(&self) -> (u64, u64, Self) {
        let (e1, e2) = self.monomial_content();
        let mut residual = Self::default();
        for (&(a, b), c) in &self.terms {
            residual.add_term((a - e1, b - e2), c.clone());
        }
        (e1, e2, residual)
    }

    /// Substitute `x -> x', y -> x'y'`.
    pub fn substitute_x_blowup(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b), c) in &self.terms {
            out.add_term((a + b, b), c.clone());
        }
        out
    }

    /// Substitute `x -> x'y', y -> y'`.
    pub fn substitute_y_blowup(&self) -> Self {
        let mut out = Self::default();
        for (&(a, b), c) in &self.terms {
            out.add_term((a, a + b), c.clone());
        }
        out
    }

    /// Substitute `x -> x', y -> x'(y' + c)`, expanding the binomial powers.
    pub fn substitute_z_blowup(&self, residue: &BigRational) -> Self {
        let mut out = Self::default();
        for (&(a, b), coefficient) in &self.terms {
            // (y + c)^b by the binomial theorem
            let mut binom = BigInt::one();
            let mut c_power = BigRational::one();
            let mut row: Vec<(u64, BigRational)> = Vec::with_capacity(b as usize + 1);
            for k in 0..=b {
                row.push((b - k, BigRational::from(binom.clone()) * &c_power));
                if k < b {
                    binom = binom * BigInt::from(b - k) / BigInt::from(k + 1);
                    c_power *= residue;
                }
            }
            for (y_exp, weight) in row {
                out.add_term((a + b, y_exp), coefficient * &weight);
            }
        }
        out
    }

    /// Total degree of the lowest-degree nonzero part, `None` for zero.
    pub fn order_at_origin(&self) -> Option<u64> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    /// Parse the CLI text syntax: a sum of terms `c*x^a*y^b` with rational
    /// `c`; any of the three factors may be omitted, variables other than
    /// `x` and `y` are rejected.
    pub fn parse(input: &str) -> Result<Self, PolyParseError> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyParseError {
                message: String::from("empty polynomial"),
            });
        }
        let mut out = Self::default();
        let mut term = String::new();
        let mut terms: Vec<String> = Vec::new();
        for (k, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && k > 0 && !matches!(term.chars().last(), Some('/')) {
                terms.push(core::mem::take(&mut term));
                if ch == '-' {
                    term.push('-');
                }
            } else {
                term.push(ch);
            }
        }
        terms.push(term);
        for t in terms {
            let (e, c) = parse_term(&t)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(Exponents, BigRational), PolyParseError> {
    let err = |message: String| PolyParseError { message };
    if term.is_empty() || term == "-" {
        return Err(err(String::from("empty term")));
    }
    let mut coefficient = BigRational::one();
    let mut x_exp = 0u64;
    let mut y_exp = 0u64;
    let (negative, body) = match term.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, term),
    };
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(err(alloc::format!("empty factor in term '{term}'")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            x_exp += parse_exponent(rest, term)?;
        } else if let Some(rest) = factor.strip_prefix('y') {
            y_exp += parse_exponent(rest, term)?;
        } else if factor
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic())
        {
            return Err(err(alloc::format!(
                "unknown variable '{factor}': only x and y are allowed"
            )));
        } else {
            coefficient *= parse_rational(factor)
                .ok_or_else(|| err(alloc::format!("bad coefficient '{factor}'")))?;
        }
    }
    if negative {
        coefficient = -coefficient;
    }
    Ok(((x_exp, y_exp), coefficient))
}

fn parse_exponent(rest: &str, term: &str) -> Result<u64, PolyParseError> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.parse::<u64>().ok())
        .ok_or_else(|| PolyParseError {
            message: alloc::format!("bad exponent in term '{term}'"),
        })
}

fn parse_rational(text: &str) -> Option<BigRational> {
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = text.parse().ok()?;
            Some(BigRational::from(n))
        }
    }
}

/// Terms print in descending (y, x) exponent order, so a generating-sequence
/// polynomial leads with its `y`-power.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Exponents, &BigRational)> = self.terms.iter().collect();
        ordered.sort_by(|((ax, ay), _), ((bx, by), _)| (by, bx).cmp(&(ay, ax)));
        for (k, ((x_exp, y_exp), c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || (*x_exp == 0 && *y_exp == 0) {
                factors.push(alloc::format!("{magnitude}"));
            }
            for (var, e) in [("x", *x_exp), ("y", *y_exp)] {
                if e == 1 {
                    factors.push(String::from(var));
                } else if e > 1 {
                    factors.push(alloc::format!("{var}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(s: &str) -> BiPoly {
        BiPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let p = poly("y^2 - x^7");
        assert_eq!(p.to_string(), "y^2 - x^7");
        let p = poly("-3/2*x^2*y + x - 5");
        assert_eq!(p.to_string(), "-3/2*x^2*y + x - 5");
        let p = poly("y*x*y*2");
        assert_eq!(p.to_string(), "2*x*y^2");
    }

    #[test]
    fn parse_rejects_foreign_variables() {
        assert!(BiPoly::parse("x + z").is_err());
        assert!(BiPoly::parse("").is_err());
        assert!(BiPoly::parse("x^").is_err());
    }

    #[test]
    fn arithmetic() {
        let p = poly("x + y");
        let q = poly("x - y");
        assert_eq!(p.mul(&q), poly("x^2 - y^2"));
        assert_eq!(p.pow(2), poly("x^2 + 2*x*y + y^2"));
        assert_eq!(p.sub(&p), BiPoly::zero());
    }

    #[test]
    fn substitutions() {
        // x-blowup of y^2 - x^7 pulls out x^2
        let p = poly("y^2 - x^7").substitute_x_blowup();
        assert_eq!(p, poly("x^2*y^2 - x^7"));
        let (e1, e2, strict) = p.factor_monomial();
        assert_eq!((e1, e2), (2, 0));
        assert_eq!(strict, poly("y^2 - x^5"));

        let p = poly("x^2").substitute_y_blowup();
        assert_eq!(p, poly("x^2*y^2"));

        // z-blowup with residue 1: y - x -> x(y+1) - x = xy
        let p = poly("y - x").substitute_z_blowup(&rat(1, 1));
        assert_eq!(p, poly("x*y"));

        // binomial expansion: y^2 -> x^2 (y+2)^2
        let p = poly("y^2").substitute_z_blowup(&rat(2, 1));
        assert_eq!(p, poly("x^2*y^2 + 4*x^2*y + 4*x^2"));
    }

    #[test]
    fn origin_queries() {
        assert!(poly("1 + x").is_unit_at_origin());
        assert!(!poly("x + y^2").is_unit_at_origin());
        assert_eq!(poly("x^2*y + y^2").order_at_origin(), Some(2));
        assert_eq!(BiPoly::zero().order_at_origin(), None);
    }
}

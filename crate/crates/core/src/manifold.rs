//! Manifold descriptions, their validation, and the textual expression format.
//!
//! Grammar (whitespace-insensitive, `#` is left-associative):
//!
//! ```text
//! expr := term ("#" term)*
//! term := "SHS(" int ("," int)+ ")"
//!       | "SSF(" int "," int "," int ";" int "," int "," int ")"
//!       | "TW(" int ";" int "/" int ")"
//!       | "(" expr ")"
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith::gcd;

/// A hypothesis violated by a manifold description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("multiplicity {value} at position {index} must be at least 1")]
    NonPositiveMultiplicity { index: usize, value: i64 },
    #[error("not pairwise coprime: gcd({a}, {b}) = {gcd} (Seifert homology sphere multiplicities)")]
    NotPairwiseCoprime { a: i64, b: i64, gcd: i64 },
    #[error("cone order {name} = {value} must be at least 2 (base orbifold S^2(p,q,r))")]
    ConeOrderTooSmall { name: &'static str, value: i64 },
    #[error("gcd({coefficient}, {order}) = {gcd} != 1 (Seifert coefficient {name} must be prime to its cone order)")]
    SeifertCoefficientNotCoprime { name: &'static str, coefficient: i64, order: i64, gcd: i64 },
    #[error("aqr+bpr+cpq = 0 for (p,q,r;a,b,c) = ({p},{q},{r};{a},{b},{c}) (not a rational homology sphere)")]
    NotRationalHomologySphere { p: i64, q: i64, r: i64, a: i64, b: i64, c: i64 },
    #[error("twist count xi = {0} must be at least 1")]
    TwistCountTooSmall(i64),
    #[error("p even in slope {p}/{q} (strict boundary slope risk; the twist-knot formulas require p odd)")]
    EvenSurgeryNumerator { p: i64, q: i64 },
    #[error("slope denominator q = 0 in {p}/{q}")]
    ZeroDenominator { p: i64, q: i64 },
    #[error("slope {p}/{q} is not in lowest terms (gcd = {gcd})")]
    SlopeNotReduced { p: i64, q: i64, gcd: i64 },
    #[error("parameter {0} is too large for exact evaluation")]
    ParameterTooLarge(i64),
}

/// Largest accepted magnitude for any integer parameter. Triple products of
/// such values fit comfortably in the checked i128 pipeline and in i64 quarters.
pub const MAX_PARAMETER: i64 = 1 << 20;

fn check_size(v: i64) -> Result<(), ValidationError> {
    if v.unsigned_abs() > MAX_PARAMETER as u64 {
        Err(ValidationError::ParameterTooLarge(v))
    } else {
        Ok(())
    }
}

/// Seifert fibered integral homology sphere Σ(a₁, …, aₙ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertHSSpec {
    pub multiplicities: Vec<i64>,
}

/// Seifert space over S²(p,q,r) with π₁ = ⟨x,y,h | h central, x^p = h^a, y^q = h^b, (xy)^r = h^c⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallSeifertSpec {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// p/q Dehn surgery on the twist knot with `xi` half twists. The slope is kept as entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistSurgerySpec {
    pub xi: i64,
    pub p: i64,
    pub q: i64,
}

impl SeifertHSSpec {
    pub fn new(multiplicities: Vec<i64>) -> Result<Self, ValidationError> {
        SeifertHSSpec { multiplicities }.validate()
    }

    pub fn validate(self) -> Result<Self, ValidationError> {
        for (index, &value) in self.multiplicities.iter().enumerate() {
            check_size(value)?;
            if value < 1 {
                return Err(ValidationError::NonPositiveMultiplicity { index, value });
            }
        }
        for (i, &a) in self.multiplicities.iter().enumerate() {
            for &b in &self.multiplicities[i + 1..] {
                let g = gcd(a as i128, b as i128) as i64;
                if g != 1 {
                    return Err(ValidationError::NotPairwiseCoprime { a, b, gcd: g });
                }
            }
        }
        Ok(self)
    }
}

impl SmallSeifertSpec {
    pub fn new(p: i64, q: i64, r: i64, a: i64, b: i64, c: i64) -> Result<Self, ValidationError> {
        SmallSeifertSpec { p, q, r, a, b, c }.validate()
    }

    pub fn validate(self) -> Result<Self, ValidationError> {
        let SmallSeifertSpec { p, q, r, a, b, c } = self;
        for v in [p, q, r, a, b, c] {
            check_size(v)?;
        }
        for (name, value) in [("p", p), ("q", q), ("r", r)] {
            if value < 2 {
                return Err(ValidationError::ConeOrderTooSmall { name, value });
            }
        }
        for (name, coefficient, order) in [("a", a, p), ("b", b, q), ("c", c, r)] {
            let g = gcd(coefficient as i128, order as i128) as i64;
            if g != 1 {
                return Err(ValidationError::SeifertCoefficientNotCoprime { name, coefficient, order, gcd: g });
            }
        }
        if self.homology_order_signed() == 0 {
            return Err(ValidationError::NotRationalHomologySphere { p, q, r, a, b, c });
        }
        Ok(self)
    }

    /// `aqr + bpr + cpq`; its absolute value is |H₁|.
    pub fn homology_order_signed(&self) -> i128 {
        let (p, q, r) = (self.p as i128, self.q as i128, self.r as i128);
        self.a as i128 * q * r + self.b as i128 * p * r + self.c as i128 * p * q
    }

    pub fn cone_orders(&self) -> [i64; 3] {
        [self.p, self.q, self.r]
    }

    /// 1/p + 1/q + 1/r ≥ 1: the base orbifold is spherical or euclidean.
    pub fn has_non_hyperbolic_base(&self) -> bool {
        let (p, q, r) = (self.p as i128, self.q as i128, self.r as i128);
        q * r + p * r + p * q >= p * q * r
    }

    /// Reorders the (cone order, coefficient) pairs; `perm[i]` names the source slot.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let pairs = [(self.p, self.a), (self.q, self.b), (self.r, self.c)];
        let [(p, a), (q, b), (r, c)] = perm.map(|i| pairs[i]);
        SmallSeifertSpec { p, q, r, a, b, c }
    }
}

impl TwistSurgerySpec {
    pub fn new(xi: i64, p: i64, q: i64) -> Result<Self, ValidationError> {
        TwistSurgerySpec { xi, p, q }.validate()
    }

    pub fn validate(self) -> Result<Self, ValidationError> {
        let TwistSurgerySpec { xi, p, q } = self;
        for v in [xi, p, q] {
            check_size(v)?;
        }
        if xi < 1 {
            return Err(ValidationError::TwistCountTooSmall(xi));
        }
        if q == 0 {
            return Err(ValidationError::ZeroDenominator { p, q });
        }
        if p % 2 == 0 {
            return Err(ValidationError::EvenSurgeryNumerator { p, q });
        }
        let g = gcd(p as i128, q as i128) as i64;
        if g != 1 {
            return Err(ValidationError::SlopeNotReduced { p, q, gcd: g });
        }
        Ok(self)
    }

    /// Slope with positive numerator (the same rational number).
    pub fn normalized_slope(&self) -> (i64, i64) {
        if self.p < 0 {
            (-self.p, -self.q)
        } else {
            (self.p, self.q)
        }
    }
}

/// Any of the supported manifold descriptions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldSpec {
    SeifertHS(SeifertHSSpec),
    SmallSeifert(SmallSeifertSpec),
    TwistSurgery(TwistSurgerySpec),
}

impl ManifoldSpec {
    pub fn validate(self) -> Result<Self, ValidationError> {
        Ok(match self {
            ManifoldSpec::SeifertHS(s) => ManifoldSpec::SeifertHS(s.validate()?),
            ManifoldSpec::SmallSeifert(s) => ManifoldSpec::SmallSeifert(s.validate()?),
            ManifoldSpec::TwistSurgery(s) => ManifoldSpec::TwistSurgery(s.validate()?),
        })
    }
}

/// Connected-sum expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldExpr {
    Leaf(ManifoldSpec),
    Sum(Box<ManifoldExpr>, Box<ManifoldExpr>),
}

impl ManifoldExpr {
    pub fn sum(lhs: ManifoldExpr, rhs: ManifoldExpr) -> Self {
        ManifoldExpr::Sum(Box::new(lhs), Box::new(rhs))
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&ManifoldSpec> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ManifoldSpec>) {
        match self {
            ManifoldExpr::Leaf(spec) => out.push(spec),
            ManifoldExpr::Sum(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Left-associated sum of the given leaves. Panics on an empty list.
    pub fn left_fold(leaves: Vec<ManifoldSpec>) -> Self {
        let mut it = leaves.into_iter().map(ManifoldExpr::Leaf);
        let first = it.next().expect("at least one leaf");
        it.fold(first, ManifoldExpr::sum)
    }

    /// Right-associated sum of the given leaves. Panics on an empty list.
    pub fn right_fold(leaves: Vec<ManifoldSpec>) -> Self {
        let mut it = leaves.into_iter().rev().map(ManifoldExpr::Leaf);
        let last = it.next().expect("at least one leaf");
        it.fold(last, |acc, leaf| ManifoldExpr::sum(leaf, acc))
    }
}

impl From<ManifoldSpec> for ManifoldExpr {
    fn from(spec: ManifoldSpec) -> Self {
        ManifoldExpr::Leaf(spec)
    }
}

impl fmt::Display for SeifertHSSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(i64::to_string).collect();
        write!(f, "SHS({})", parts.join(","))
    }
}

impl fmt::Display for SmallSeifertSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let SmallSeifertSpec { p, q, r, a, b, c } = self;
        write!(f, "SSF({p},{q},{r};{a},{b},{c})")
    }
}

impl fmt::Display for TwistSurgerySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TW({};{}/{})", self.xi, self.p, self.q)
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldSpec::SeifertHS(s) => s.fmt(f),
            ManifoldSpec::SmallSeifert(s) => s.fmt(f),
            ManifoldSpec::TwistSurgery(s) => s.fmt(f),
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldExpr::Leaf(spec) => spec.fmt(f),
            ManifoldExpr::Sum(l, r) => match **r {
                ManifoldExpr::Sum(..) => write!(f, "{l} # ({r})"),
                ManifoldExpr::Leaf(_) => write!(f, "{l} # {r}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("invalid manifold at byte {position}: {source}")]
    Invalid {
        position: usize,
        #[source]
        source: ValidationError,
    },
}

impl ParseError {
    pub fn is_validation(&self) -> bool {
        matches!(self, ParseError::Invalid { .. })
    }
}

/// Parses and validates a connected-sum expression.
pub fn parse_manifold_expr(text: &str) -> Result<ManifoldExpr, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("'#' or end of input"));
    }
    Ok(expr)
}

impl FromStr for ManifoldExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_manifold_expr(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("'{token}'")))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("integer")
        })
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ParseError> {
        let mut acc = self.term()?;
        while self.eat("#") {
            let rhs = self.term()?;
            acc = ManifoldExpr::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ManifoldExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let spec = if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        } else if self.eat("SHS(") {
            let mut values = vec![self.int()?];
            self.expect(",")?;
            values.push(self.int()?);
            while self.eat(",") {
                values.push(self.int()?);
            }
            self.expect(")")?;
            ManifoldSpec::SeifertHS(SeifertHSSpec { multiplicities: values })
        } else if self.eat("SSF(") {
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(",")?;
            let r = self.int()?;
            self.expect(";")?;
            let a = self.int()?;
            self.expect(",")?;
            let b = self.int()?;
            self.expect(",")?;
            let c = self.int()?;
            self.expect(")")?;
            ManifoldSpec::SmallSeifert(SmallSeifertSpec { p, q, r, a, b, c })
        } else if self.eat("TW(") {
            let xi = self.int()?;
            self.expect(";")?;
            let p = self.int()?;
            self.expect("/")?;
            let q = self.int()?;
            self.expect(")")?;
            ManifoldSpec::TwistSurgery(TwistSurgerySpec { xi, p, q })
        } else {
            return Err(self.error("'SHS(', 'SSF(', 'TW(' or '('"));
        };
        spec.validate()
            .map(ManifoldExpr::Leaf)
            .map_err(|source| ParseError::Invalid { position: start, source })
    }
}

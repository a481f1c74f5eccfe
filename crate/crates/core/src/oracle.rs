//! Published closed forms of the first-server advantage, evaluated exactly.
//!
//! These polynomials are independent of the chain pipeline: a value computed here
//! must equal the chain's advantage at the same point, as a rational number.
//!
//! Coefficient tables live in `data/*.poly`:
//!
//! ```text
//! form f11_full
//! variables 2
//! prefactor -1 11 11          # coefficient, x power[, y power]
//! numerator 1                 # factor raised to this power
//! 0 0 252                     # x power[, y power], coefficient
//! denominator 19
//! ...
//! ```
//!
//! The value is `prefactor · Π numerator^power / Π denominator^power`.

use std::fmt;
use std::str::FromStr;

use dashu_int::{IBig as BigInt, UBig};
use num_traits::{One, Zero};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytics::{diagonal_advantage, first_server_advantage};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rational::{fraction_string, Rational};
use crate::state_space::{ScoringSystem, SystemKind};
use crate::transitions::RallyParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormId {
    F11Full,
    F15Full,
    F21StarDiag,
    F21CircDiag,
}

impl FormId {
    pub const ALL: [FormId; 4] = [FormId::F11Full, FormId::F15Full, FormId::F21StarDiag, FormId::F21CircDiag];

    pub fn name(self) -> &'static str {
        match self {
            FormId::F11Full => "f11_full",
            FormId::F15Full => "f15_full",
            FormId::F21StarDiag => "f21star_diag",
            FormId::F21CircDiag => "f21circ_diag",
        }
    }

    /// Scoring system whose advantage this form describes.
    pub fn system(self) -> ScoringSystem {
        let (kind, n) = match self {
            FormId::F11Full => (SystemKind::SideOut, 11),
            FormId::F15Full => (SystemKind::SideOut, 15),
            FormId::F21StarDiag => (SystemKind::ModifiedRally, 21),
            FormId::F21CircDiag => (SystemKind::HybridRally, 21),
        };
        ScoringSystem { kind, n }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, FormId::F21StarDiag | FormId::F21CircDiag)
    }

    fn source(self) -> &'static str {
        match self {
            FormId::F11Full => include_str!("../data/f11_full.poly"),
            FormId::F15Full => include_str!("../data/f15_full.poly"),
            FormId::F21StarDiag => include_str!("../data/f21star_diag.poly"),
            FormId::F21CircDiag => include_str!("../data/f21circ_diag.poly"),
        }
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        FormId::ALL
            .into_iter()
            .find(|f| f.name() == lower || f.name().replace('_', "-") == lower)
            .ok_or_else(|| Error::Parse(format!("unknown closed form {s:?}")))
    }
}

/// Integer polynomial in `x` (and `y`), stored as `(x power, y power, coefficient)` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    terms: Vec<(u32, u32, BigInt)>,
}

impl Polynomial {
    pub fn terms(&self) -> &[(u32, u32, BigInt)] {
        &self.terms
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigInt {
        self.terms
            .iter()
            .find(|(a, b, _)| *a == i && *b == j)
            .map(|t| t.2.clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(i, j, c)| self.coefficient(*j, *i) == *c)
    }

    /// Nested Horner: outer in `x`, inner in `y`.
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Rational {
        let deg_x = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let deg_y = self.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut table = vec![vec![BigInt::zero(); deg_y as usize + 1]; deg_x as usize + 1];
        for (i, j, c) in &self.terms {
            table[*i as usize][*j as usize] += c;
        }
        let mut outer = Rational::zero();
        for row in table.iter().rev() {
            let mut inner = Rational::zero();
            for c in row.iter().rev() {
                inner = inner * y + Rational::from(c.clone());
            }
            outer = outer * x + inner;
        }
        outer
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub id: FormId,
    pub variables: u32,
    pub prefactor: (BigInt, u32, u32),
    pub numerator: Vec<(u32, Polynomial)>,
    pub denominator: Vec<(u32, Polynomial)>,
}

impl ClosedForm {
    /// The bundled coefficient table for `id`.
    pub fn load(id: FormId) -> Self {
        Self::parse(id, id.source()).unwrap_or_else(|e| panic!("bundled table {id} is malformed: {e}"))
    }

    pub fn parse(id: FormId, text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Parse(format!("{id} line {}: {msg}", line + 1));
        let mut variables = None;
        let mut prefactor = None;
        let mut numerator: Vec<(u32, Polynomial)> = Vec::new();
        let mut denominator: Vec<(u32, Polynomial)> = Vec::new();
        let mut in_numerator = true;

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| s.parse::<BigInt>().map_err(|_| bad(ln, "expected an integer"));
            let pow = |s: &str| s.parse::<u32>().map_err(|_| bad(ln, "expected an exponent"));
            match fields[0] {
                "form" => {
                    if fields.get(1) != Some(&id.name()) {
                        return Err(bad(ln, "form name mismatch"));
                    }
                }
                "variables" => variables = Some(pow(fields.get(1).ok_or_else(|| bad(ln, "missing count"))?)?),
                "prefactor" => {
                    let j = if fields.len() > 3 { pow(fields[3])? } else { 0 };
                    prefactor = Some((int(fields[1])?, pow(fields[2])?, j));
                }
                "numerator" | "denominator" => {
                    let power = pow(fields.get(1).ok_or_else(|| bad(ln, "missing power"))?)?;
                    in_numerator = fields[0] == "numerator";
                    let section = if in_numerator { &mut numerator } else { &mut denominator };
                    section.push((power, Polynomial { terms: Vec::new() }));
                }
                _ => {
                    let vars = variables.ok_or_else(|| bad(ln, "term before variable count"))?;
                    if fields.len() != vars as usize + 1 {
                        return Err(bad(ln, "wrong number of fields in monomial"));
                    }
                    let (i, j, c) = if vars == 2 {
                        (pow(fields[0])?, pow(fields[1])?, int(fields[2])?)
                    } else {
                        (pow(fields[0])?, 0, int(fields[1])?)
                    };
                    let section = if in_numerator { &mut numerator } else { &mut denominator };
                    let poly = &mut section.last_mut().ok_or_else(|| bad(ln, "term outside a section"))?.1;
                    if poly.terms.iter().any(|t| t.0 == i && t.1 == j) {
                        return Err(bad(ln, "repeated monomial"));
                    }
                    poly.terms.push((i, j, c));
                }
            }
        }
        let variables = variables.ok_or_else(|| Error::Parse(format!("{id}: missing variable count")))?;
        if variables != 1 && variables != 2 {
            return Err(Error::Parse(format!("{id}: unsupported variable count {variables}")));
        }
        Ok(ClosedForm {
            id,
            variables,
            prefactor: prefactor.ok_or_else(|| Error::Parse(format!("{id}: missing prefactor")))?,
            numerator,
            denominator,
        })
    }

    /// Exact value at `(x, y)`; diagonal-only forms take `x` alone.
    pub fn evaluate(&self, x: &Rational, y: Option<&Rational>) -> Result<Rational> {
        let y = match (self.variables, y) {
            (2, Some(y)) => y.clone(),
            (2, None) => return Err(Error::Usage(format!("{} needs both x and y", self.id))),
            (_, Some(_)) => return Err(Error::Usage(format!("{} is restricted to the diagonal; y is not accepted", self.id))),
            (_, None) => Rational::zero(),
        };
        let power = |base: Rational, e: u32| num_traits::pow(base, e as usize);
        let (c, i, j) = &self.prefactor;
        let mut num = Rational::from(c.clone()) * power(x.clone(), *i) * power(y.clone(), *j);
        for (e, poly) in &self.numerator {
            num *= power(poly.evaluate(x, &y), *e);
        }
        let mut den = Rational::one();
        for (e, poly) in &self.denominator {
            den *= power(poly.evaluate(x, &y), *e);
        }
        if den.is_zero() {
            let at = match self.variables {
                2 => format!("({}, {})", fraction_string(x), fraction_string(&y)),
                _ => fraction_string(x),
            };
            return Err(Error::ZeroDenominator(at));
        }
        Ok(num / den)
    }

    /// True iff every numerator and denominator table is symmetric under `x ↔ y`.
    pub fn coefficient_symmetry_check(&self) -> Result<bool> {
        if self.variables != 2 {
            return Err(Error::Usage(format!("{} is a one-variable form", self.id)));
        }
        Ok(self.numerator.iter().chain(&self.denominator).all(|(_, p)| p.is_symmetric()))
    }

    /// `(term count, coefficient sum, sum of |coefficient|)` per section, numerator sections first.
    pub fn checksum(&self) -> Vec<(usize, BigInt, BigInt)> {
        self.numerator
            .iter()
            .chain(&self.denominator)
            .map(|(_, p)| {
                let sum = p.terms.iter().map(|t| t.2.clone()).sum();
                let abs = p.terms.iter().map(|t| num_traits::Signed::abs(&t.2)).sum();
                (p.terms.len(), sum, abs)
            })
            .collect()
    }
}

pub fn evaluate_closed_form(form: &ClosedForm, x: &Rational, y: Option<&Rational>) -> Result<Rational> {
    form.evaluate(x, y)
}

pub fn coefficient_symmetry_check(form: &ClosedForm) -> Result<bool> {
    form.coefficient_symmetry_check()
}

/// Random points in the open unit square (or interval) with denominators at most `max_den`.
pub fn random_points(id: FormId, count: usize, max_den: i64, seed: u64) -> Vec<(Rational, Option<Rational>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let den = rng.random_range(2..=max_den);
        Rational::from_parts(BigInt::from(rng.random_range(1..den)), UBig::from(den as u64))
    };
    (0..count)
        .map(|_| {
            let x = draw();
            let y = if id.is_diagonal() { None } else { Some(draw()) };
            (x, y)
        })
        .collect()
}

/// Closed form and chain value at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub x: Rational,
    pub y: Option<Rational>,
    pub closed_form: Rational,
    pub chain: Rational,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.chain
    }
}

/// Evaluates the closed form and the chain advantage at every point.
pub fn cross_check(
    form: &ClosedForm,
    points: &[(Rational, Option<Rational>)],
    exec: Execution,
) -> Result<Vec<OracleComparison>> {
    let system = form.id.system();
    par::try_map(exec, points, |(x, y)| {
        let closed_form = form.evaluate(x, y.as_ref())?;
        let chain = match y {
            Some(y) => first_server_advantage(system, &RallyParams::new(x.clone(), y.clone())?)?.value,
            None => diagonal_advantage(system, x)?,
        };
        Ok(OracleComparison { x: x.clone(), y: y.clone(), closed_form, chain })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, sign_of};

    #[test]
    fn bundled_tables_load() {
        for id in FormId::ALL {
            let form = ClosedForm::load(id);
            assert_eq!(form.variables, if id.is_diagonal() { 1 } else { 2 });
        }
    }

    #[test]
    fn table_checksums() {
        let big = |n: i64| BigInt::from(n);
        let f11 = ClosedForm::load(FormId::F11Full).checksum();
        assert_eq!((f11[0].0, f11[0].1.clone()), (121, big(-1)));
        assert_eq!(f11[0].2, big(19_189_551));
        assert_eq!((f11[1].0, f11[1].1.clone()), (4, big(1)));
        assert_eq!((f11[2].0, f11[2].1.clone()), (15, big(1)));
        let f15 = ClosedForm::load(FormId::F15Full).checksum();
        assert_eq!((f15[0].0, f15[0].1.clone()), (225, big(-1)));
        assert_eq!(f15[0].2, big(18_608_947_347));
        let star = ClosedForm::load(FormId::F21StarDiag).checksum();
        assert_eq!(star.iter().map(|c| c.0).collect::<Vec<_>>(), vec![2, 55, 2, 2]);
        assert_eq!(star[1].1, big(1));
        let circ = ClosedForm::load(FormId::F21CircDiag).checksum();
        assert_eq!(circ.iter().map(|c| c.0).collect::<Vec<_>>(), vec![63, 2, 3, 6]);
        assert_eq!(circ[0].1, big(1));
    }

    #[test]
    fn symmetric_tables() {
        assert!(ClosedForm::load(FormId::F11Full).coefficient_symmetry_check().unwrap());
        assert!(ClosedForm::load(FormId::F15Full).coefficient_symmetry_check().unwrap());
        assert!(matches!(ClosedForm::load(FormId::F21StarDiag).coefficient_symmetry_check(), Err(Error::Usage(_))));
    }

    #[test]
    fn perturbed_table_is_not_symmetric() {
        let mut form = ClosedForm::load(FormId::F11Full);
        let term = form.numerator[0].1.terms.iter_mut().find(|t| t.0 == 3 && t.1 == 1).unwrap();
        term.2 += 1;
        assert!(!form.coefficient_symmetry_check().unwrap());
    }

    #[test]
    fn f11_at_one_is_one() {
        let f11 = ClosedForm::load(FormId::F11Full);
        assert_eq!(f11.evaluate(&int(1), Some(&int(1))).unwrap(), int(1));
    }

    #[test]
    fn f21star_vanishes_at_half() {
        let f = ClosedForm::load(FormId::F21StarDiag);
        assert_eq!(f.evaluate(&ratio(1, 2), None).unwrap(), int(0));
    }

    #[test]
    fn full_forms_vanish_on_axis() {
        for id in [FormId::F11Full, FormId::F15Full] {
            let f = ClosedForm::load(id);
            for y in [ratio(1, 7), ratio(1, 2), int(1)] {
                assert_eq!(f.evaluate(&int(0), Some(&y)).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn f21star_sign_follows_the_linear_factor() {
        let f = ClosedForm::load(FormId::F21StarDiag);
        for k in 1..100 {
            let x = ratio(k, 100);
            let v = f.evaluate(&x, None).unwrap();
            // -(1 - 2x) · positive / positive
            assert_eq!(sign_of(&v), sign_of(&(ratio(2 * k, 100) - int(1))), "x = {k}/100");
        }
    }

    #[test]
    fn usage_errors() {
        let f = ClosedForm::load(FormId::F21CircDiag);
        assert!(matches!(f.evaluate(&ratio(1, 3), Some(&ratio(1, 3))), Err(Error::Usage(_))));
        let g = ClosedForm::load(FormId::F11Full);
        assert!(matches!(g.evaluate(&ratio(1, 3), None), Err(Error::Usage(_))));
        // (2 - x) vanishes at x = 2
        assert!(matches!(f.evaluate(&int(2), None), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn parse_rejects_bad_tables() {
        assert!(ClosedForm::parse(FormId::F11Full, "form f15_full\nvariables 2\n").is_err());
        assert!(ClosedForm::parse(FormId::F11Full, "form f11_full\nvariables 2\nprefactor 1 0 0\nnumerator 1\n0 0 1\n0 0 2\n").is_err());
        assert!(ClosedForm::parse(FormId::F11Full, "form f11_full\nvariables 2\nprefactor 1 0 0\nnumerator 1\n0 1\n").is_err());
    }

    #[test]
    fn random_points_are_reproducible_and_interior() {
        let a = random_points(FormId::F11Full, 20, 1000, 3);
        assert_eq!(a, random_points(FormId::F11Full, 20, 1000, 3));
        for (x, y) in &a {
            let y = y.as_ref().unwrap();
            assert!(*x > int(0) && *x < int(1) && *y > int(0) && *y < int(1));
            assert!(*x.denominator() <= UBig::from(1000u32));
        }
        assert!(random_points(FormId::F21StarDiag, 5, 1000, 3).iter().all(|(_, y)| y.is_none()));
    }

    #[test]
    fn cross_check_small_sample() {
        let form = ClosedForm::load(FormId::F11Full);
        let points = random_points(FormId::F11Full, 3, 50, 9);
        let rows = cross_check(&form, &points, Execution::Sequential).unwrap();
        assert!(rows.iter().all(OracleComparison::agrees));
    }
}

//! Line-oriented manifest language describing a CDBA by its structure
//! equations, plus named finite group actions.
//!
//! ```text
//! manifold iwasawa
//! field zeta 3
//! gens 3
//! del phi3 = -1 phi1^phi2
//! action sigma: phi1 -> z phi1, phi2 -> z phi2, phi3 -> z^2 phi3
//! ```

use ddbar_core::cdba::{Cdba, CdbaError};
use ddbar_core::exterior::MAX_GENERATORS;
use ddbar_core::group::{FiniteGroupAction, GeneratorAction, GroupError, DEFAULT_MAX_ORDER};
use ddbar_core::{CyclotomicNumber, Form, Generator};
use thiserror::Error;

const MAX_FIELD_ORDER: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    SyntaxError {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: generator {name} is not declared (gens {n})")]
    UndeclaredGenerator {
        line: usize,
        col: usize,
        name: String,
        n: usize,
    },
    #[error("{line}:{col}: bad coefficient: {reason}")]
    BadCoefficient {
        line: usize,
        col: usize,
        reason: String,
    },
}

impl ParseError {
    /// Stable identifier for the error stream.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::SyntaxError { .. } => "syntax",
            ParseError::UndeclaredGenerator { .. } => "undeclared-generator",
            ParseError::BadCoefficient { .. } => "bad-coefficient",
        }
    }

    /// 1-based (line, column) of the offending token.
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::SyntaxError { line, col, .. }
            | ParseError::UndeclaredGenerator { line, col, .. }
            | ParseError::BadCoefficient { line, col, .. } => (*line, *col),
        }
    }
}

/// Named group generated by one or more automorphisms. Each automorphism
/// lists σ*(φ^i) for every i; generators not mentioned are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: String,
    pub generators: Vec<Vec<Form>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    /// Empty when the text has no `manifold` line.
    pub name: String,
    pub field_order: u32,
    pub n: usize,
    /// ∂φ^i, zero when omitted.
    pub del_eqs: Vec<Form>,
    /// ∂̄φ^i, zero when omitted.
    pub delbar_eqs: Vec<Form>,
    pub actions: Vec<ActionSpec>,
}

impl Manifest {
    pub fn build_cdba(&self) -> Result<Cdba, CdbaError> {
        Cdba::new(
            self.n,
            self.field_order,
            self.del_eqs.clone(),
            self.delbar_eqs.clone(),
        )
    }

    pub fn action(&self, name: &str) -> Option<&ActionSpec> {
        self.actions.iter().find(|a| a.name == name)
    }

    /// Validates the named action against `x` and closes it into a group.
    pub fn build_group(
        &self,
        x: &Cdba,
        spec: &ActionSpec,
    ) -> Result<FiniteGroupAction, GroupError> {
        let gens = spec
            .generators
            .iter()
            .map(|images| GeneratorAction::new(self.n, self.field_order, images.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        FiniteGroupAction::generate(x, gens, DEFAULT_MAX_ORDER)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Int(String),
    Sym(&'static str),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) | Tok::Int(w) => format!("'{w}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::End => "end of line".to_string(),
        }
    }
}

const SYMBOLS: [&str; 11] = ["->", "/", "^", "*", "+", "-", "(", ")", "=", ":", ","];

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    n: usize,
    order: u32,
}

impl LineParser {
    fn new(src: &str, line: usize, n: usize, order: u32) -> Self {
        let body = src.split('#').next().unwrap_or("");
        LineParser {
            chars: body.chars().collect(),
            pos: 0,
            line,
            n,
            order,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    /// Next token and its 1-based column, without consuming it.
    fn peek(&mut self) -> (Tok, usize) {
        self.skip_ws();
        let col = self.pos + 1;
        let Some(&c) = self.chars.get(self.pos) else {
            return (Tok::End, col);
        };
        let rest: String = self.chars[self.pos..].iter().take(2).collect();
        if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            return (Tok::Sym(sym), col);
        }
        let take = |pred: fn(char) -> bool| -> String {
            self.chars[self.pos..]
                .iter()
                .take_while(|&&c| pred(c))
                .collect()
        };
        if c.is_ascii_digit() {
            (Tok::Int(take(|c| c.is_ascii_digit())), col)
        } else if c.is_alphabetic() || c == '_' {
            (Tok::Word(take(|c| c.is_alphanumeric() || c == '_')), col)
        } else {
            (Tok::Word(c.to_string()), col)
        }
    }

    fn bump(&mut self) -> (Tok, usize) {
        let (tok, col) = self.peek();
        self.pos += match &tok {
            Tok::Word(w) | Tok::Int(w) => w.chars().count(),
            Tok::Sym(s) => s.len(),
            Tok::End => 0,
        };
        (tok, col)
    }

    fn error(&self, col: usize, expected: &str, found: &Tok) -> ParseError {
        ParseError::SyntaxError {
            line: self.line,
            col,
            expected: expected.to_string(),
            found: found.describe(),
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        match self.bump() {
            (Tok::Sym(s), _) if s == sym => Ok(()),
            (tok, col) => Err(self.error(col, &format!("'{sym}'"), &tok)),
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        match self.bump() {
            (Tok::Word(w), _) if w == word => Ok(()),
            (tok, col) => Err(self.error(col, &format!("'{word}'"), &tok)),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            (Tok::End, _) => Ok(()),
            (tok, col) => Err(self.error(col, "end of line", &tok)),
        }
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<(T, usize), ParseError> {
        match self.bump() {
            (Tok::Int(s), col) => {
                s.parse()
                    .map(|v| (v, col))
                    .map_err(|_| ParseError::SyntaxError {
                        line: self.line,
                        col,
                        expected: what.to_string(),
                        found: format!("'{s}'"),
                    })
            }
            (tok, col) => Err(self.error(col, what, &tok)),
        }
    }

    /// Identifier made of letters, digits, '_', '-' and '.'.
    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            self.pos += 1;
        }
        if start == self.pos {
            let (tok, col) = self.peek();
            return Err(self.error(col, "a name", &tok));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// `phiI` or `bphiI` with 1 ≤ I ≤ n.
    fn generator(&self, word: &str, col: usize) -> Result<Option<Generator>, ParseError> {
        let (barred, digits) = if let Some(d) = word.strip_prefix("bphi") {
            (true, d)
        } else if let Some(d) = word.strip_prefix("phi") {
            (false, d)
        } else {
            return Ok(None);
        };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseError::SyntaxError {
                line: self.line,
                col,
                expected: "a generator phiN or bphiN".to_string(),
                found: format!("'{word}'"),
            });
        }
        match digits.parse::<usize>() {
            Ok(i) if (1..=self.n).contains(&i) => Ok(Some(if barred {
                Generator::Anti(i)
            } else {
                Generator::Holo(i)
            })),
            _ => Err(ParseError::UndeclaredGenerator {
                line: self.line,
                col,
                name: word.to_string(),
                n: self.n,
            }),
        }
    }

    fn holomorphic_generator(&mut self) -> Result<usize, ParseError> {
        let (tok, col) = self.bump();
        if let Tok::Word(w) = &tok {
            if let Some(Generator::Holo(i)) = self.generator(w, col)? {
                return Ok(i);
            }
        }
        Err(self.error(col, "a holomorphic generator phiN", &tok))
    }

    fn starts_factor(tok: &Tok) -> bool {
        matches!(tok, Tok::Int(_) | Tok::Sym("(")) || matches!(tok, Tok::Word(w) if w == "z")
    }

    fn is_generator(tok: &Tok) -> bool {
        matches!(tok, Tok::Word(w) if w.starts_with("phi") || w.starts_with("bphi"))
    }

    /// rational literal, `z`, `z^k`, or a parenthesized coefficient sum.
    fn factor(&mut self) -> Result<CyclotomicNumber, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Int(num) => {
                let line = self.line;
                let bad = move |reason: String| ParseError::BadCoefficient { line, col, reason };
                let num: i64 = num
                    .parse()
                    .map_err(|_| bad(format!("{num} is out of range")))?;
                let den: i64 = if self.peek().0 == Tok::Sym("/") {
                    self.bump();
                    let (den, _) = self.int::<String>("a denominator")?;
                    den.parse()
                        .map_err(|_| bad(format!("{den} is out of range")))?
                } else {
                    1
                };
                if den == 0 {
                    return Err(bad("zero denominator".to_string()));
                }
                Ok(CyclotomicNumber::from_frac(self.order, num, den))
            }
            Tok::Word(w) if w == "z" => {
                let mut exp = 1i64;
                if self.peek().0 == Tok::Sym("^") {
                    self.bump();
                    let negative = self.peek().0 == Tok::Sym("-");
                    if negative {
                        self.bump();
                    }
                    let (e, col) = self.int::<i64>("an exponent")?;
                    if e > i64::from(u32::MAX) {
                        return Err(ParseError::BadCoefficient {
                            line: self.line,
                            col,
                            reason: format!("exponent {e} is out of range"),
                        });
                    }
                    exp = if negative { -e } else { e };
                }
                Ok(CyclotomicNumber::zeta_pow(self.order, exp))
            }
            Tok::Sym("(") => {
                let value = self.coefficient_sum()?;
                self.expect_sym(")")?;
                Ok(value)
            }
            tok => Err(self.error(col, "a coefficient", &tok)),
        }
    }

    /// factor (('*' | whitespace) factor)*
    fn product(&mut self) -> Result<CyclotomicNumber, ParseError> {
        let mut value = self.factor()?;
        loop {
            let (tok, _) = self.peek();
            if tok == Tok::Sym("*") {
                self.bump();
                let (next, col) = self.peek();
                if Self::is_generator(&next) {
                    break;
                }
                if !Self::starts_factor(&next) {
                    return Err(self.error(col, "a coefficient or generator", &next));
                }
            } else if !Self::starts_factor(&tok) {
                break;
            }
            value = &value * &self.factor()?;
        }
        Ok(value)
    }

    fn coefficient_sum(&mut self) -> Result<CyclotomicNumber, ParseError> {
        let mut total = CyclotomicNumber::zero(self.order);
        let mut first = true;
        loop {
            let (tok, col) = self.peek();
            let negative = match tok {
                Tok::Sym("+") => false,
                Tok::Sym("-") => true,
                _ if first => false,
                _ => break,
            };
            if matches!(tok, Tok::Sym("+" | "-")) {
                self.bump();
            } else if !Self::starts_factor(&tok) {
                return Err(self.error(col, "a coefficient", &tok));
            }
            let value = self.product()?;
            total = if negative {
                &total - &value
            } else {
                &total + &value
            };
            first = false;
        }
        Ok(total)
    }

    /// gen ('^' gen)*
    fn monomial(&mut self) -> Result<Form, ParseError> {
        let one = Form::constant(self.n, CyclotomicNumber::one(self.order));
        let mut form = one;
        loop {
            let (tok, col) = self.bump();
            let g = match &tok {
                Tok::Word(w) => self.generator(w, col)?,
                _ => None,
            };
            let Some(g) = g else {
                return Err(self.error(col, "a generator phiN or bphiN", &tok));
            };
            form = &form ^ &Form::generator(self.n, g, self.order);
            if self.peek().0 != Tok::Sym("^") {
                return Ok(form);
            }
            self.bump();
        }
    }

    /// coefficient? monomial, or a bare coefficient.
    fn term(&mut self) -> Result<Form, ParseError> {
        let (tok, col) = self.peek();
        let coeff = if Self::starts_factor(&tok) {
            Some(self.product()?)
        } else {
            None
        };
        let (tok, _) = self.peek();
        match (coeff, Self::is_generator(&tok)) {
            (c, true) => {
                let m = self.monomial()?;
                Ok(match c {
                    Some(c) => m.scale(&c),
                    None => m,
                })
            }
            (Some(c), false) => Ok(Form::constant(self.n, c)),
            (None, false) => Err(self.error(col, "a coefficient or generator", &tok)),
        }
    }

    /// Signed sum of terms, ending at ',' or end of line.
    fn form(&mut self) -> Result<Form, ParseError> {
        let mut total = Form::zero(self.n);
        let mut first = true;
        loop {
            let (tok, _) = self.peek();
            let negative = match tok {
                Tok::Sym("+") => false,
                Tok::Sym("-") => true,
                Tok::End | Tok::Sym(",") if !first => break,
                _ if first => false,
                tok => {
                    let col = self.peek().1;
                    return Err(self.error(col, "'+', '-', ',' or end of line", &tok));
                }
            };
            if matches!(tok, Tok::Sym("+" | "-")) {
                self.bump();
            }
            let t = self.term()?;
            total = if negative { &total - &t } else { &total + &t };
            first = false;
        }
        Ok(total)
    }
}

/// Parses manifest text. Positions in errors are 1-based.
pub fn parse_manifest(text: &str) -> Result<Manifest, ParseError> {
    let mut name: Option<String> = None;
    let mut order: Option<u32> = None;
    let mut n: Option<usize> = None;
    let mut del: Vec<Option<Form>> = Vec::new();
    let mut delbar: Vec<Option<Form>> = Vec::new();
    let mut actions: Vec<ActionSpec> = Vec::new();
    let mut seen_body = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut lp = LineParser::new(raw, line, n.unwrap_or(0), order.unwrap_or(1));
        let (tok, col) = lp.bump();
        let keyword = match &tok {
            Tok::End => continue,
            Tok::Word(w) => w.clone(),
            _ => String::new(),
        };
        let once = |lp: &LineParser, already: bool, what: &str| {
            if already {
                Err(lp.error(col, &format!("at most one '{what}' line"), &tok))
            } else {
                Ok(())
            }
        };
        match keyword.as_str() {
            "manifold" => {
                once(&lp, name.is_some(), "manifold")?;
                name = Some(lp.name()?);
                lp.expect_end()?;
            }
            "field" => {
                once(&lp, order.is_some(), "field")?;
                if seen_body {
                    return Err(lp.error(col, "'field' before equations and actions", &tok));
                }
                lp.expect_word("zeta")?;
                let (value, vcol) = lp.int::<u32>("a field order")?;
                if !(1..=MAX_FIELD_ORDER).contains(&value) {
                    return Err(ParseError::SyntaxError {
                        line,
                        col: vcol,
                        expected: format!("a field order in 1..={MAX_FIELD_ORDER}"),
                        found: format!("'{value}'"),
                    });
                }
                lp.expect_end()?;
                order = Some(value);
            }
            "gens" => {
                once(&lp, n.is_some(), "gens")?;
                let (value, vcol) = lp.int::<usize>("a generator count")?;
                if !(1..=MAX_GENERATORS).contains(&value) {
                    return Err(ParseError::SyntaxError {
                        line,
                        col: vcol,
                        expected: format!("a generator count in 1..={MAX_GENERATORS}"),
                        found: format!("'{value}'"),
                    });
                }
                lp.expect_end()?;
                n = Some(value);
                del = vec![None; value];
                delbar = vec![None; value];
            }
            "del" | "delbar" | "action" => {
                if n.is_none() {
                    return Err(lp.error(col, "'gens' before equations and actions", &tok));
                }
                seen_body = true;
                if keyword == "action" {
                    let action_name = lp.name()?;
                    lp.expect_sym(":")?;
                    let images = parse_action_body(&mut lp)?;
                    match actions.iter_mut().find(|a| a.name == action_name) {
                        Some(a) => a.generators.push(images),
                        None => actions.push(ActionSpec {
                            name: action_name,
                            generators: vec![images],
                        }),
                    }
                } else {
                    let gcol = lp.peek().1;
                    let i = lp.holomorphic_generator()?;
                    lp.expect_sym("=")?;
                    let value = lp.form()?;
                    lp.expect_end()?;
                    let slot = if keyword == "del" {
                        &mut del[i - 1]
                    } else {
                        &mut delbar[i - 1]
                    };
                    if slot.is_some() {
                        return Err(ParseError::SyntaxError {
                            line,
                            col: gcol,
                            expected: format!("a single '{keyword}' equation per generator"),
                            found: format!("a second equation for phi{i}"),
                        });
                    }
                    *slot = Some(value);
                }
            }
            _ => {
                return Err(lp.error(
                    col,
                    "one of 'manifold', 'field', 'gens', 'del', 'delbar', 'action'",
                    &tok,
                ))
            }
        }
    }

    let Some(n) = n else {
        let line = text.lines().count().max(1);
        return Err(ParseError::SyntaxError {
            line,
            col: 1,
            expected: "a 'gens' line".to_string(),
            found: "end of input".to_string(),
        });
    };
    let fill = |eqs: Vec<Option<Form>>| {
        eqs.into_iter()
            .map(|f| f.unwrap_or_else(|| Form::zero(n)))
            .collect()
    };
    Ok(Manifest {
        name: name.unwrap_or_default(),
        field_order: order.unwrap_or(1),
        n,
        del_eqs: fill(del),
        delbar_eqs: fill(delbar),
        actions,
    })
}

fn parse_action_body(lp: &mut LineParser) -> Result<Vec<Form>, ParseError> {
    let mut images: Vec<Option<Form>> = vec![None; lp.n];
    loop {
        let gcol = lp.peek().1;
        let i = lp.holomorphic_generator()?;
        lp.expect_sym("->")?;
        let image = lp.form()?;
        if images[i - 1].is_some() {
            return Err(ParseError::SyntaxError {
                line: lp.line,
                col: gcol,
                expected: "each generator at most once per action".to_string(),
                found: format!("a second image for phi{i}"),
            });
        }
        images[i - 1] = Some(image);
        match lp.bump() {
            (Tok::Sym(","), _) => continue,
            (Tok::End, _) => break,
            (tok, col) => return Err(lp.error(col, "',' or end of line", &tok)),
        }
    }
    let (n, order) = (lp.n, lp.order);
    Ok(images
        .into_iter()
        .enumerate()
        .map(|(i, f)| f.unwrap_or_else(|| Form::generator(n, Generator::Holo(i + 1), order)))
        .collect())
}

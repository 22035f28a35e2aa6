use super::atoms::is_tau_name;
use super::{is_homogeneous, AtomTable, Expression, Monomial, TriDegree};

/// Parsed table notation, keeping the factored shape of the input.
///
/// `h_1^2 (Delta c + tau a g)` stays a product of `h_1^2` and a group, which
/// is what Leibniz expansion needs. [`Formula::expand`] gives the canonical
/// [`Expression`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub terms: Vec<Product>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Atom { index: usize, power: u32 },
    Tau(u32),
    Group { inner: Formula, power: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unknown atom `{name}` at offset {offset}")]
    UnknownAtom { name: String, offset: usize },
    #[error("malformed exponent in term `{term}` at offset {offset}")]
    MalformedExponent { term: String, offset: usize },
    #[error("inhomogeneous sum: `{first}` has degree {first_degree} but `{second}` has degree {second_degree}")]
    Inhomogeneous {
        first: String,
        first_degree: TriDegree,
        second: String,
        second_degree: TriDegree,
    },
    #[error("unexpected `{found}` at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("empty expression")]
    Empty,
}

impl Formula {
    pub fn zero() -> Self {
        Formula { terms: vec![] }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_monomial(m: &Monomial) -> Self {
        let mut factors = Vec::new();
        for (index, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                factors.push(Factor::Atom {
                    index,
                    power: e as u32,
                });
            }
        }
        if m.tau_power() > 0 {
            factors.push(Factor::Tau(m.tau_power()));
        }
        Formula {
            terms: vec![Product { factors }],
        }
    }

    pub fn expand(&self, atoms: &AtomTable) -> Expression {
        let mut out = Expression::zero();
        for p in &self.terms {
            out.add_assign(&p.expand(atoms));
        }
        out
    }

    /// Multiplies by a plain monomial prefix (used for periodicity shifts).
    pub fn times_monomial(&self, m: &Monomial) -> Formula {
        let prefix = Formula::from_monomial(m).terms.remove(0).factors;
        Formula {
            terms: self
                .terms
                .iter()
                .map(|p| Product {
                    factors: prefix.iter().cloned().chain(p.factors.iter().cloned()).collect(),
                })
                .collect(),
        }
    }

    pub fn render(&self, atoms: &AtomTable) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|p| p.render(atoms))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Product {
    pub fn expand(&self, atoms: &AtomTable) -> Expression {
        let mut acc = Expression::monomial(Monomial::one(atoms));
        for f in &self.factors {
            acc = acc.mul(&f.expand(atoms));
        }
        acc
    }

    fn render(&self, atoms: &AtomTable) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| f.render(atoms))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Factor {
    pub fn expand(&self, atoms: &AtomTable) -> Expression {
        match self {
            Factor::Atom { index, power } => {
                Expression::monomial(Monomial::atom(atoms, *index).pow(*power))
            }
            Factor::Tau(k) => Expression::monomial(Monomial::one(atoms).with_tau(*k)),
            Factor::Group { inner, power } => {
                let base = inner.expand(atoms);
                let mut acc = Expression::monomial(Monomial::one(atoms));
                for _ in 0..*power {
                    acc = acc.mul(&base);
                }
                acc
            }
        }
    }

    fn render(&self, atoms: &AtomTable) -> String {
        let pow = |p: u32| if p == 1 { String::new() } else { format!("^{p}") };
        match self {
            Factor::Atom { index, power } => format!("{}{}", atoms.get(*index).name, pow(*power)),
            Factor::Tau(k) => format!("tau{}", pow(*k)),
            Factor::Group { inner, power } => format!("({}){}", inner.render(atoms), pow(*power)),
        }
    }
}

/// Parses table notation into a [`Formula`], checking homogeneity of every sum.
pub fn parse_formula(text: &str, atoms: &AtomTable) -> Result<Formula, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        src: text,
        atoms,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let f = p.sum()?;
    p.skip_ws();
    if let Some((offset, found)) = p.peek_full() {
        return Err(ParseError::Unexpected { found, offset });
    }
    Ok(f)
}

/// Parses table notation into its canonical expression.
pub fn parse_expression(text: &str, atoms: &AtomTable) -> Result<Expression, ParseError> {
    Ok(parse_formula(text, atoms)?.expand(atoms))
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
    atoms: &'a AtomTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn peek_full(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |c| c.0)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek_full() {
            Some((offset, found)) => ParseError::Unexpected { found, offset },
            None => ParseError::UnexpectedEnd,
        }
    }

    fn sum(&mut self) -> Result<Formula, ParseError> {
        let mut terms = Vec::new();
        let mut first: Option<(String, TriDegree)> = None;
        loop {
            self.skip_ws();
            let start = self.offset();
            let (product, is_zero) = self.product()?;
            let text = self.src[start..self.offset()].trim().to_string();
            if !is_zero {
                let expanded = product.expand(self.atoms);
                let deg = is_homogeneous(&expanded, self.atoms).map_err(|w| ParseError::Inhomogeneous {
                    first: w.first.render(self.atoms),
                    first_degree: w.first_degree,
                    second: w.second.render(self.atoms),
                    second_degree: w.second_degree,
                })?;
                if let Some(deg) = deg {
                    match &first {
                        None => first = Some((text, deg)),
                        Some((ftext, fdeg)) if *fdeg != deg => {
                            return Err(ParseError::Inhomogeneous {
                                first: ftext.clone(),
                                first_degree: *fdeg,
                                second: text,
                                second_degree: deg,
                            })
                        }
                        Some(_) => {}
                    }
                }
                terms.push(product);
            }
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(Formula { terms })
    }

    /// A product and whether it contained the literal factor `0`.
    fn product(&mut self) -> Result<(Product, bool), ParseError> {
        let mut factors = Vec::new();
        let mut seen = 0;
        let mut zero = false;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some(')') => break,
                Some('*') | Some('·') => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            seen += 1;
            match self.factor()? {
                Primary::Zero => zero = true,
                Primary::One => {}
                Primary::Factor(f) => factors.push(f),
            }
        }
        if seen == 0 {
            return Err(self.unexpected());
        }
        Ok((Product { factors }, zero))
    }

    fn factor(&mut self) -> Result<Primary, ParseError> {
        let start = self.offset();
        let c = self.peek().ok_or(ParseError::UnexpectedEnd)?;
        let base = if c == '(' {
            self.pos += 1;
            let inner = self.sum()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(self.unexpected());
            }
            self.pos += 1;
            Factor::Group { inner, power: 1 }
        } else if c.is_ascii_digit() {
            match self.digits().as_str() {
                "0" => return Ok(Primary::Zero),
                "1" => return Ok(Primary::One),
                _ => return Err(ParseError::Unexpected { found: c, offset: start }),
            }
        } else if c.is_alphabetic() || c == '\\' {
            let name = self.ident();
            if name == "\\cdot" {
                return Ok(Primary::One);
            }
            if is_tau_name(&name) {
                Factor::Tau(1)
            } else {
                let index = self
                    .atoms
                    .index_of(&name)
                    .ok_or(ParseError::UnknownAtom { name, offset: start })?;
                Factor::Atom { index, power: 1 }
            }
        } else {
            return Err(ParseError::Unexpected { found: c, offset: start });
        };
        if self.peek() != Some('^') {
            return Ok(Primary::Factor(base));
        }
        self.pos += 1;
        let k = self.exponent(start)?;
        Ok(Primary::Factor(match base {
            Factor::Atom { index, .. } => Factor::Atom { index, power: k },
            Factor::Tau(_) => Factor::Tau(k),
            Factor::Group { inner, .. } => Factor::Group { inner, power: k },
        }))
    }

    fn exponent(&mut self, term_start: usize) -> Result<u32, ParseError> {
        let braced = self.peek() == Some('{');
        if braced {
            self.pos += 1;
        }
        let digits = self.digits();
        if braced {
            if self.peek() != Some('}') {
                return Err(self.bad_exponent(term_start));
            }
            self.pos += 1;
        }
        digits
            .parse::<u16>()
            .map(u32::from)
            .map_err(|_| self.bad_exponent(term_start))
    }

    fn bad_exponent(&self, term_start: usize) -> ParseError {
        let end = self.offset().clamp(term_start, self.src.len());
        ParseError::MalformedExponent {
            term: self.src[term_start..end].to_string(),
            offset: term_start,
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        if self.peek() == Some('\\') {
            s.push('\\');
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            s.push(c);
            self.pos += 1;
        }
        s
    }
}

enum Primary {
    Zero,
    One,
    Factor(Factor),
}

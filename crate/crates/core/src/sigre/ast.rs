use std::fmt;

use thiserror::Error;

use super::Letter;

/// Normalized regular expression over the signature alphabet.
///
/// Built only through the smart constructors below, which flatten nested
/// `Concat`/`Union`, drop neutral elements and absorb `Empty`, so that
/// `Concat` and `Union` always hold at least two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(Letter),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn letter(l: Letter) -> Regex {
        Regex::Letter(l)
    }

    pub fn concat(parts: Vec<Regex>) -> Regex {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Regex::Empty => return Regex::Empty,
                Regex::Epsilon => {}
                Regex::Concat(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Regex::Epsilon,
            1 => out.pop().unwrap(),
            _ => Regex::Concat(out),
        }
    }

    pub fn union(parts: Vec<Regex>) -> Regex {
        let mut out: Vec<Regex> = Vec::with_capacity(parts.len());
        for p in parts {
            let items = match p {
                Regex::Empty => continue,
                Regex::Union(inner) => inner,
                other => vec![other],
            };
            for it in items {
                if !out.contains(&it) {
                    out.push(it);
                }
            }
        }
        match out.len() {
            0 => Regex::Empty,
            1 => out.pop().unwrap(),
            _ => Regex::Union(out),
        }
    }

    pub fn star(r: Regex) -> Regex {
        match r {
            Regex::Empty | Regex::Epsilon => Regex::Epsilon,
            s @ Regex::Star(_) => s,
            other => Regex::Star(Box::new(other)),
        }
    }

    /// `r+` as `r·r*`.
    pub fn plus(r: Regex) -> Regex {
        Regex::concat(vec![r.clone(), Regex::star(r)])
    }

    /// `r?` as `(r|ε)`.
    pub fn optional(r: Regex) -> Regex {
        if r.nullable() {
            r
        } else {
            Regex::union(vec![r, Regex::Epsilon])
        }
    }

    /// Does the language contain the empty word?
    pub fn nullable(&self) -> bool {
        match self {
            Regex::Empty | Regex::Letter(_) => false,
            Regex::Epsilon | Regex::Star(_) => true,
            Regex::Concat(v) => v.iter().all(Regex::nullable),
            Regex::Union(v) => v.iter().any(Regex::nullable),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(_) => 0,
            Regex::Concat(_) => 1,
            _ => 2,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Regex::Empty => write!(f, "0")?,
            Regex::Epsilon => write!(f, "1")?,
            Regex::Letter(l) => write!(f, "{}", l.as_char())?,
            Regex::Concat(v) => {
                for r in v {
                    r.fmt_prec(f, 2)?;
                }
            }
            Regex::Union(v) => {
                for (k, r) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, "|")?;
                    }
                    r.fmt_prec(f, 1)?;
                }
            }
            Regex::Star(r) => {
                r.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Renders in the concrete grammar with minimal parentheses; the output
/// parses back to an equal AST.
impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnclosedParen,
    UnmatchedClose,
    StrayOperator(char),
    EmptyExpression,
}

/// Syntax error; `column` is 1-based and counts characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at column {column}", describe(.kind))]
pub struct ParseError {
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn describe(k: &ParseErrorKind) -> String {
    match k {
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::UnclosedParen => "unbalanced parentheses: '(' is never closed".into(),
        ParseErrorKind::UnmatchedClose => "unbalanced parentheses: unmatched ')'".into(),
        ParseErrorKind::StrayOperator(c) => format!("stray operator {c:?}"),
        ParseErrorKind::EmptyExpression => "empty expression".into(),
    }
}

/// Parse the concrete grammar: letters `<`, `=`, `>`; `0` (empty
/// language); `1` (empty word); juxtaposition; `|`, `*`, `+`, `?`;
/// parentheses. Whitespace is ignored.
pub fn parse(text: &str) -> Result<Regex, ParseError> {
    let toks: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    let end_col = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end_col };
    let r = p.union()?;
    match p.peek() {
        None => Ok(r),
        Some((col, ')')) => Err(ParseError {
            column: col,
            kind: ParseErrorKind::UnmatchedClose,
        }),
        Some((col, c)) => Err(ParseError {
            column: col,
            kind: ParseErrorKind::UnexpectedChar(c),
        }),
    }
}

struct Parser {
    toks: Vec<(usize, char)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.toks.get(self.pos).copied()
    }

    fn col(&self) -> usize {
        self.peek().map(|t| t.0).unwrap_or(self.end_col)
    }

    fn union(&mut self) -> Result<Regex, ParseError> {
        let mut parts = vec![self.concat()?];
        while let Some((_, '|')) = self.peek() {
            self.pos += 1;
            parts.push(self.concat()?);
        }
        Ok(Regex::union(parts))
    }

    fn concat(&mut self) -> Result<Regex, ParseError> {
        let mut parts = Vec::new();
        loop {
            match self.peek() {
                None | Some((_, '|')) | Some((_, ')')) => break,
                _ => parts.push(self.postfix()?),
            }
        }
        if parts.is_empty() {
            let col = self.col();
            let kind = match self.peek() {
                Some((_, c)) if c == '|' => ParseErrorKind::StrayOperator(c),
                Some((_, ')')) if self.depth_open() => ParseErrorKind::EmptyExpression,
                Some((_, ')')) => ParseErrorKind::UnmatchedClose,
                _ if self.pos > 0 && self.toks[self.pos - 1].1 == '|' => ParseErrorKind::StrayOperator('|'),
                _ => ParseErrorKind::EmptyExpression,
            };
            return Err(ParseError { column: col, kind });
        }
        Ok(Regex::concat(parts))
    }

    // Whether some '(' before the cursor is still open.
    fn depth_open(&self) -> bool {
        let mut d: i64 = 0;
        for &(_, c) in &self.toks[..self.pos] {
            match c {
                '(' => d += 1,
                ')' => d -= 1,
                _ => {}
            }
        }
        d > 0
    }

    fn postfix(&mut self) -> Result<Regex, ParseError> {
        let mut r = self.atom()?;
        while let Some((_, c)) = self.peek() {
            r = match c {
                '*' => Regex::star(r),
                '+' => Regex::plus(r),
                '?' => Regex::optional(r),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, ParseError> {
        let (col, c) = self.peek().expect("atom called at end of input");
        self.pos += 1;
        if let Some(l) = Letter::from_char(c) {
            return Ok(Regex::Letter(l));
        }
        match c {
            '0' => Ok(Regex::Empty),
            '1' => Ok(Regex::Epsilon),
            '(' => {
                let r = self.union()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(r)
                    }
                    _ => Err(ParseError {
                        column: col,
                        kind: ParseErrorKind::UnclosedParen,
                    }),
                }
            }
            '*' | '+' | '?' => Err(ParseError {
                column: col,
                kind: ParseErrorKind::StrayOperator(c),
            }),
            _ => Err(ParseError {
                column: col,
                kind: ParseErrorKind::UnexpectedChar(c),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn l(x: Letter) -> Regex {
        Regex::Letter(x)
    }

    #[test]
    fn two_letters() {
        assert_eq!(parse("><").unwrap(), Regex::Concat(vec![l(Gt), l(Lt)]));
    }

    #[test]
    fn plus_is_flattened() {
        let want = Regex::Concat(vec![l(Gt), l(Eq), Regex::Star(Box::new(l(Eq))), l(Gt)]);
        assert_eq!(parse(">=+>").unwrap(), want);
    }

    #[test]
    fn zigzag_has_two_branches() {
        match parse("(<>)+<(>|1)|(><)+>(<|1)").unwrap() {
            Regex::Union(bs) => assert_eq!(bs.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whitespace_and_optional() {
        assert_eq!(parse(" < = ? ").unwrap(), parse("<(=|1)").unwrap());
    }

    #[test]
    fn empty_set_absorbs() {
        assert_eq!(parse("<0>").unwrap(), Regex::Empty);
        assert_eq!(parse("0|<").unwrap(), l(Lt));
        assert_eq!(parse("0*").unwrap(), Regex::Epsilon);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("<(>").unwrap_err();
        assert_eq!((e.column, e.kind), (2, ParseErrorKind::UnclosedParen));
        let e = parse("<>)").unwrap_err();
        assert_eq!((e.column, e.kind), (3, ParseErrorKind::UnmatchedClose));
        let e = parse("*<").unwrap_err();
        assert_eq!((e.column, e.kind), (1, ParseErrorKind::StrayOperator('*')));
        let e = parse("<|").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::StrayOperator('|'));
        let e = parse("<a").unwrap_err();
        assert_eq!((e.column, e.kind), (2, ParseErrorKind::UnexpectedChar('a')));
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::EmptyExpression);
        assert_eq!(parse("()").unwrap_err().kind, ParseErrorKind::EmptyExpression);
    }

    #[test]
    fn render_round_trip() {
        for s in [
            "(>(>|=)*)*><((<|=)*<)*",
            "(<>)+<(>|1)|(><)+>(<|1)",
            ">=+>",
            "1",
            "0",
            "(<|=)?",
        ] {
            let a = parse(s).unwrap();
            let b = parse(&a.to_string()).unwrap();
            assert_eq!(a, b, "{s} rendered as {a}");
        }
    }
}

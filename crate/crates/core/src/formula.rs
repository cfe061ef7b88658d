//! Model expressions such as `1 = x + y + x*y` or `y = 1 + x`.
//!
//! ```text
//! model  := term '=' term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := '1' | identifier
//! ident  := [A-Za-z_][A-Za-z0-9_.]*
//! ```
//!
//! A term is a [`Direction`]; `1` factors inside a product are dropped, so
//! `1*x` is `x`. Error positions are 1-based character columns.

use crate::dataset::Direction;
use crate::error::{Error, Result};
use crate::estimators::ModelSpec;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    One,
    Ident(String),
    Plus,
    Star,
    Equals,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    position: usize,
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn tokenize(input: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let position = i + 1;
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '*' => Token::Star,
            '=' => Token::Equals,
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '.') {
                    i += 1;
                }
                let literal: String = chars[start..=i].iter().collect();
                if literal != "1" {
                    return Err(err(position, format!("only the constant 1 is allowed, found `{literal}`")));
                }
                Token::One
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len()
                    && (chars[i + 1].is_ascii_alphanumeric() || matches!(chars[i + 1], '_' | '.'))
                {
                    i += 1;
                }
                Token::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(err(position, format!("unexpected character `{other}`"))),
        };
        tokens.push(Spanned { token, position });
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Spanned>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.cursor)
    }

    fn position(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn factor(&mut self) -> Result<Option<String>> {
        let position = self.position();
        match self.peek().map(|t| t.token.clone()) {
            Some(Token::One) => {
                self.cursor += 1;
                Ok(None)
            }
            Some(Token::Ident(name)) => {
                self.cursor += 1;
                Ok(Some(name))
            }
            Some(other) => Err(err(position, format!("expected `1` or a column name, found {}", describe(&other)))),
            None => Err(err(position, "expected `1` or a column name, found end of input")),
        }
    }

    fn term(&mut self) -> Result<(Direction, usize)> {
        let position = self.position();
        let mut factors: Vec<String> = self.factor()?.into_iter().collect();
        while matches!(self.peek().map(|t| &t.token), Some(Token::Star)) {
            self.cursor += 1;
            factors.extend(self.factor()?);
        }
        Ok((Direction::product(factors), position))
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let position = self.position();
        match self.peek() {
            Some(t) if t.token == want => {
                self.cursor += 1;
                Ok(())
            }
            Some(t) => Err(err(position, format!("expected {}, found {}", describe(&want), describe(&t.token)))),
            None => Err(err(position, format!("expected {}, found end of input", describe(&want)))),
        }
    }
}

fn describe(token: &Token) -> String {
    match token {
        Token::One => "`1`".into(),
        Token::Ident(name) => format!("`{name}`"),
        Token::Plus => "`+`".into(),
        Token::Star => "`*`".into(),
        Token::Equals => "`=`".into(),
    }
}

/// Parses a model expression into a [`ModelSpec`].
///
/// Structural problems (repeated terms, response on both sides, more than
/// three regressors) are reported as parse errors at the offending term.
pub fn parse_model(input: &str) -> Result<ModelSpec> {
    let mut parser = Parser {
        tokens: tokenize(input)?,
        cursor: 0,
        end: input.chars().count() + 1,
    };
    let (response, _) = parser.term()?;
    parser.expect(Token::Equals)?;
    let mut regressors: Vec<Direction> = Vec::new();
    loop {
        let (term, position) = parser.term()?;
        if term == response {
            return Err(err(position, format!("`{term}` is already the response")));
        }
        if regressors.contains(&term) {
            return Err(err(position, format!("term `{term}` repeated")));
        }
        if regressors.len() == 3 {
            return Err(err(position, "at most 3 regressor terms are supported"));
        }
        regressors.push(term);
        match parser.peek() {
            None => break,
            Some(t) if t.token == Token::Plus => parser.cursor += 1,
            Some(t) => {
                return Err(err(t.position, format!("expected `+` or end of input, found {}", describe(&t.token))))
            }
        }
    }
    ModelSpec::new(response, regressors)
}

/// Renders `input` with a caret under 1-based `position`.
pub fn caret(input: &str, position: usize) -> String {
    format!("{input}\n{}^", " ".repeat(position.saturating_sub(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirs(names: &[&str]) -> Vec<Direction> {
        names.iter().map(|n| Direction::from(*n)).collect()
    }

    #[test]
    fn parses_catalog_models() {
        let m = parse_model("1 = x + y").unwrap();
        assert!(m.is_non_response());
        assert_eq!(m.regressors(), dirs(&["x", "y"]).as_slice());

        let m = parse_model("y=1+x").unwrap();
        assert_eq!(m.response(), &Direction::column("y"));
        assert_eq!(m.regressors(), dirs(&["1", "x"]).as_slice());

        let m = parse_model("1 = x + y + x*y").unwrap();
        assert_eq!(m.regressors()[2], Direction::product(["y", "x"]));

        let m = parse_model("  temp_c = 1 + wind.speed ").unwrap();
        assert_eq!(m.regressors()[1], Direction::column("wind.speed"));

        let m = parse_model("y = 1*x").unwrap();
        assert_eq!(m.regressors(), dirs(&["x"]).as_slice());
    }

    fn position_of(input: &str) -> usize {
        match parse_model(input) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error for {input:?}, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(position_of("1 = x + "), 9);
        assert_eq!(position_of("1 = x ++ y"), 8);
        assert_eq!(position_of("1 x + y"), 3);
        assert_eq!(position_of("1 = 2*x"), 5);
        assert_eq!(position_of("1 = x $ y"), 7);
        assert_eq!(position_of("y = 1 + y"), 9);
        assert_eq!(position_of("y = x + x"), 9);
        assert_eq!(position_of("1 = a + b + c + d"), 17);
        assert_eq!(position_of(""), 1);
        assert_eq!(position_of("1 = x y"), 7);
    }

    #[test]
    fn caret_rendering() {
        assert_eq!(caret("1 = x ++ y", 8), "1 = x ++ y\n       ^");
    }
}

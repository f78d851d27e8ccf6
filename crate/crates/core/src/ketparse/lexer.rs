use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// `|`
    Bar,
    /// `>` or `⟩`
    Close,
    LParen,
    RParen,
    Plus,
    /// `-` or `−`
    Minus,
    Star,
    Slash,
    /// `⊗`; the spellings `x` and `(x)` arrive as words and are resolved by the parser.
    Tensor,
    Number(f64),
    Word(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Bar => "`|`".into(),
            Tok::Close => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Tensor => "`⊗`".into(),
            Tok::Number(x) => format!("number {x}"),
            Tok::Word(w) => format!("`{w}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    /// Character offset of the first character.
    pub pos: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let simple = match c {
            '|' => Some(Tok::Bar),
            '>' | '⟩' => Some(Tok::Close),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '⊗' => Some(Tok::Tensor),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos: start });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            i = scan_number(&chars, i);
            let lexeme: String = chars[start..i].iter().collect();
            let value = lexeme.parse::<f64>().map_err(|_| ParseError {
                position: start,
                kind: ParseErrorKind::InvalidNumber(lexeme.clone()),
            })?;
            out.push(Token {
                tok: Tok::Number(value),
                pos: start,
            });
        } else if c.is_alphabetic() {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                pos: start,
            });
        } else {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

/// Returns the index one past a `digits[.digits][e[±]digits]` literal.
fn scan_number(chars: &[char], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(i);
    if chars.get(i) == Some(&'.') {
        i = digits(i + 1);
    }
    if matches!(chars.get(i), Some('e' | 'E')) {
        let mut j = i + 1;
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        if chars.get(j).is_some_and(char::is_ascii_digit) {
            i = digits(j);
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_words() {
        assert_eq!(
            toks("2.5e-3i |a_1>"),
            vec![
                Tok::Number(2.5e-3),
                Tok::Word("i".into()),
                Tok::Bar,
                Tok::Word("a_1".into()),
                Tok::Close
            ]
        );
        assert_eq!(toks(".5"), vec![Tok::Number(0.5)]);
        // exponent marker without digits belongs to the next word
        assert_eq!(toks("2e"), vec![Tok::Number(2.0), Tok::Word("e".into())]);
    }

    #[test]
    fn unicode_spellings() {
        assert_eq!(
            toks("|α⟩ ⊗ −|β>"),
            vec![
                Tok::Bar,
                Tok::Word("α".into()),
                Tok::Close,
                Tok::Tensor,
                Tok::Minus,
                Tok::Bar,
                Tok::Word("β".into()),
                Tok::Close
            ]
        );
    }

    #[test]
    fn positions_are_character_offsets() {
        let t = tokenize("⊗ |a>").unwrap();
        assert_eq!(t[1].pos, 2);
        let err = tokenize("|a> $").unwrap_err();
        assert_eq!(err.position, 4);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
    }
}

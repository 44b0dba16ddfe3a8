use num_bigint::BigUint;

use crate::error::{Result, Span, TextError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(BigUint),
    Macro(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Colon,
    Assign,
    Arrow,
    FatArrow,
    Bang,
    Lambda,
    BigLambda,
    PlusOp,
    TimesOp,
    Star,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Macro(m) => return write!(f, "`#{m}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Assign => "`:=`",
            Tok::Arrow => "`->`",
            Tok::FatArrow => "`=>`",
            Tok::Bang => "`!`",
            Tok::Lambda => "`\\`",
            Tok::BigLambda => "`/\\`",
            Tok::PlusOp => "`(+)`",
            Tok::TimesOp => "`(*)`",
            Tok::Star => "`*`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    pub space_before: bool,
}

fn ident_start(c: char) -> bool {
    (c.is_alphabetic() && c != 'λ' && c != 'Λ') || c == '_' || c == '@'
}

fn ident_cont(c: char) -> bool {
    ident_start(c) || c.is_ascii_digit() || c == '\'' || c.is_numeric()
}

/// Tokenizes `src`, whose first line is numbered `line`. A `#` followed by
/// whitespace or end of line starts a comment.
pub fn lex(src: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut ln, mut col) = (0usize, line, 1usize);
    let mut space = true;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line: ln, col };
        let at = |k: usize| chars.get(i + k).copied();
        if c == '\n' {
            i += 1;
            ln += 1;
            col = 1;
            space = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            space = true;
            continue;
        }
        if c == '#' {
            match at(1) {
                Some(d) if d.is_alphabetic() => {
                    let mut j = i + 1;
                    while j < chars.len() && ident_cont(chars[j]) {
                        j += 1;
                    }
                    let name: String = chars[i + 1..j].iter().collect();
                    out.push(Token { tok: Tok::Macro(name), span, space_before: space });
                    col += j - i;
                    i = j;
                    space = false;
                    continue;
                }
                _ => {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                    continue;
                }
            }
        }
        let (tok, len) = if ident_start(c) {
            let mut j = i;
            while j < chars.len() && ident_cont(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            (Tok::Num(s.parse().expect("digits")), j - i)
        } else {
            match (c, at(1), at(2)) {
                ('(', Some('+'), Some(')')) => (Tok::PlusOp, 3),
                ('(', Some('*'), Some(')')) => (Tok::TimesOp, 3),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBrack, 1),
                (']', _, _) => (Tok::RBrack, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('.', _, _) | ('·', _, _) => (Tok::Dot, 1),
                (':', Some('='), _) => (Tok::Assign, 2),
                (':', _, _) => (Tok::Colon, 1),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('=', Some('>'), _) => (Tok::FatArrow, 2),
                ('!', _, _) | ('∀', _, _) => (Tok::Bang, 1),
                ('/', Some('\\'), _) => (Tok::BigLambda, 2),
                ('\\', _, _) | ('λ', _, _) => (Tok::Lambda, 1),
                ('Λ', _, _) => (Tok::BigLambda, 1),
                ('→', _, _) => (Tok::Arrow, 1),
                ('⇒', _, _) => (Tok::FatArrow, 1),
                ('⊕', _, _) => (Tok::PlusOp, 1),
                ('⊗', _, _) => (Tok::TimesOp, 1),
                ('*', _, _) => (Tok::Star, 1),
                _ => return Err(TextError::Lex(span, c)),
            }
        };
        out.push(Token { tok, span, space_before: space });
        i += len;
        col += len;
        space = false;
    }
    out.push(Token { tok: Tok::Eof, span: Span { line: ln, col }, space_before: true });
    Ok(out)
}

//! Surface syntax for polynomials.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := power ('*' power)*
//! power   := primary ('^' nat)?
//! primary := nat | LETTER nat | '(' expr ')' | '[' expr (',' expr)+ ']'
//! ```
//!
//! `[a,b,c]` is left-normed and integer literals are reduced mod `p`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::freepoly::FreePoly;
use crate::normalform::{NormalMonomial, NormalPoly};
use crate::word::{Var, Word};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(u64),
    Var(u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, letter: char) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let read_nat = |start: usize| -> (usize, Option<u64>) {
            let mut j = start;
            let mut v: Option<u64> = Some(0);
            while j < chars.len() && chars[j].is_ascii_digit() {
                v = v
                    .and_then(|v| v.checked_mul(10))
                    .and_then(|v| v.checked_add(chars[j] as u64 - '0' as u64));
                j += 1;
            }
            (j, v)
        };
        let tok = if c.is_ascii_digit() {
            let (j, v) = read_nat(i);
            let v = v.ok_or_else(|| syntax_err(l0, c0, "integer literal too large"))?;
            column += j - i;
            i = j;
            Tok::Nat(v)
        } else if c == letter {
            let (j, v) = read_nat(i + 1);
            if j == i + 1 {
                return Err(syntax_err(
                    l0,
                    c0,
                    format!("expected an index after '{letter}'"),
                ));
            }
            let v = v.ok_or_else(|| syntax_err(l0, c0, "variable index too large"))?;
            if v == 0 {
                return Err(syntax_err(
                    l0,
                    c0,
                    format!("variable index 0 is not allowed ({letter}1 is the first variable)"),
                ));
            }
            column += j - i;
            i = j;
            Tok::Var(v)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                _ => return Err(syntax_err(l0, c0, format!("unexpected character '{c}'"))),
            };
            column += 1;
            i += 1;
            t
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Const(u64),
    Var(u64),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Comm(Vec<Ast>),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(syntax_err(
                t.line,
                t.column,
                format!("expected {what}, found {}", describe(&t.tok)),
            ))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut acc = if self.peek().tok == Tok::Minus {
            self.bump();
            Ast::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = Ast::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Ast::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut acc = self.power()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = Ast::Mul(Box::new(acc), Box::new(self.power()?));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            match t.tok {
                Tok::Nat(e) if e <= MAX_EXPONENT => Ok(Ast::Pow(Box::new(base), e as u32)),
                Tok::Nat(_) => Err(syntax_err(
                    t.line,
                    t.column,
                    format!("exponent exceeds {MAX_EXPONENT}"),
                )),
                other => Err(syntax_err(
                    t.line,
                    t.column,
                    format!("expected an exponent, found {}", describe(&other)),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Ast> {
        let t = self.bump();
        match t.tok {
            Tok::Nat(v) => Ok(Ast::Const(v)),
            Tok::Var(v) => Ok(Ast::Var(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::LBracket => {
                let mut items = vec![self.expr()?];
                while self.peek().tok == Tok::Comma {
                    self.bump();
                    items.push(self.expr()?);
                }
                if items.len() < 2 {
                    let t = self.peek();
                    return Err(syntax_err(
                        t.line,
                        t.column,
                        "a commutator needs at least two entries",
                    ));
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(Ast::Comm(items))
            }
            other => Err(syntax_err(
                t.line,
                t.column,
                format!("expected a term, found {}", describe(&other)),
            )),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Nat(v) => format!("number {v}"),
        Tok::Var(v) => format!("variable {v}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::Comma => "','".into(),
        Tok::End => "end of input".into(),
    }
}

fn max_var(a: &Ast) -> u64 {
    match a {
        Ast::Const(_) => 0,
        Ast::Var(v) => *v,
        Ast::Neg(x) | Ast::Pow(x, _) => max_var(x),
        Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) => max_var(x).max(max_var(y)),
        Ast::Comm(xs) => xs.iter().map(max_var).max().unwrap_or(0),
    }
}

fn build(a: &Ast, field: PrimeField, n: usize) -> Result<FreePoly> {
    Ok(match a {
        Ast::Const(v) => FreePoly::constant(field, n, field.reduce(*v)),
        Ast::Var(v) => FreePoly::var(field, n, *v as Var)?,
        Ast::Neg(x) => -build(x, field, n)?,
        Ast::Add(x, y) => build(x, field, n)?.try_add(&build(y, field, n)?)?,
        Ast::Sub(x, y) => build(x, field, n)?.try_sub(&build(y, field, n)?)?,
        Ast::Mul(x, y) => build(x, field, n)?.try_mul(&build(y, field, n)?)?,
        Ast::Pow(x, e) => build(x, field, n)?.pow(*e),
        Ast::Comm(xs) => {
            let items = xs
                .iter()
                .map(|x| build(x, field, n))
                .collect::<Result<Vec<_>>>()?;
            FreePoly::long_commutator(&items)?
        }
    })
}

fn parse_ast(text: &str, letter: char) -> Result<Ast> {
    let mut p = Parser {
        toks: tokenize(text, letter)?,
        pos: 0,
    };
    let ast = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax_err(
            t.line,
            t.column,
            format!("unexpected {}", describe(&t.tok)),
        ));
    }
    Ok(ast)
}

/// Parses `text` as an element of `F_p<x_1, ..., x_n>`.
pub fn parse(text: &str, field: PrimeField, n: usize) -> Result<FreePoly> {
    parse_with_letter(text, field, Some(n), 'x')
}

/// Parses `text`, taking the ambient variable count from the largest index used (at least 1).
pub fn parse_auto(text: &str, field: PrimeField) -> Result<FreePoly> {
    parse_with_letter(text, field, None, 'x')
}

/// Parses with an arbitrary variable letter; with `n = None` the ambient count is inferred.
pub fn parse_with_letter(
    text: &str,
    field: PrimeField,
    n: Option<usize>,
    letter: char,
) -> Result<FreePoly> {
    let ast = parse_ast(text, letter)?;
    let mv = max_var(&ast);
    let n = match n {
        Some(n) => {
            if mv > n as u64 {
                return Err(Error::Config(format!(
                    "{letter}{mv} does not fit in {n} variables"
                )));
            }
            n
        }
        None => {
            if mv > Var::MAX as u64 {
                return Err(Error::Config(format!(
                    "{letter}{mv} exceeds the variable limit"
                )));
            }
            (mv as usize).max(1)
        }
    };
    build(&ast, field, n)
}

fn print_word(w: &Word, letter: char, out: &mut String) {
    let letters = w.letters();
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let v = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == v {
            j += 1;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push(letter);
        out.push_str(&v.to_string());
        if j - i > 1 {
            out.push('^');
            out.push_str(&(j - i).to_string());
        }
        i = j;
    }
}

fn join_terms<I: Iterator<Item = (String, u32, bool)>>(terms: I) -> String {
    let mut out = String::new();
    for (body, c, is_unit) in terms {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        if is_unit {
            out.push_str(&c.to_string());
        } else if c == 1 {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{c}*{body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prints `f` so that [`parse`] reads it back unchanged.
pub fn print(f: &FreePoly) -> String {
    print_with_letter(f, 'x')
}

pub fn print_with_letter(f: &FreePoly, letter: char) -> String {
    join_terms(f.terms().map(|(w, c)| {
        let mut s = String::new();
        print_word(w, letter, &mut s);
        (s, c, w.is_unit())
    }))
}

pub fn print_monomial(m: &NormalMonomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{e}", i + 1)),
        }
    }
    for pair in m.comm_indices().chunks(2) {
        parts.push(format!("[x{},x{}]", pair[0], pair[1]));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn print_normal(f: &NormalPoly) -> String {
    join_terms(
        f.terms()
            .map(|(m, c)| (print_monomial(m), c, m.degree() == 0)),
    )
}

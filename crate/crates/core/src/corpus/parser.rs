//! Line-oriented corpus parser.
//!
//! ```text
//! identity <ID> ["title"] [expect: report|pass] : [forall <bindings> :] e == e [== e] [&& e == e]
//! ```
//! Lines starting with whitespace continue the previous entry; `#` starts a
//! comment. Bindings are `v>=n`, `v<=n`, `v even`, `v odd`, comma separated.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::{BinOp, Expr, Func, Identity, Param, Parity};
use crate::error::{Error, Result};
use crate::mp::CharId;
use crate::symbolic::ConstGenerator;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Word(String),
    Str(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 17] = ["==", "&&", "..", ">=", "<=", "+", "-", "*", "/", "^", "(", ")", ",", ";", ":", "=", "."];

fn perr<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn lex_line(text: &str, line: usize, out: &mut Vec<Token>) -> Result<()> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' {
                j += 1;
            }
            if j == chars.len() {
                return perr(line, col, "unterminated string");
            }
            out.push(Token { tok: Tok::Str(chars[start..j].iter().collect()), line, col });
            i = j + 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = if word.chars().all(|ch| ch.is_ascii_digit()) {
                Tok::Int(word.parse().expect("digits"))
            } else {
                Tok::Word(word)
            };
            out.push(Token { tok, line, col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return perr(line, col, format!("unexpected character `{c}`"));
        };
        out.push(Token { tok: Tok::Sym(sym), line, col });
        i += sym.len();
    }
    Ok(())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    scope: Vec<String>,
}

impl Parser {
    fn new(toks: Vec<Token>, end: (usize, usize)) -> Self {
        Parser { toks, pos: 0, end, scope: Vec::new() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        perr(l, c, msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(format!("expected `{sym}`"))
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail("expected a name"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.next() {
            Some(Tok::Int(n)) => {
                let v = n.to_i64().ok_or_else(|| Error::Other("bound out of range".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                self.fail("expected an integer")
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat("^") {
            return Ok(Expr::bin(BinOp::Pow, base, self.unary()?));
        }
        Ok(base)
    }

    fn charid(&mut self) -> Result<CharId> {
        let (l, c) = self.here();
        let text = if self.eat("-") {
            match self.next() {
                Some(Tok::Int(n)) => format!("-{n}"),
                _ => return perr(l, c, "expected a character label"),
            }
        } else {
            match self.next() {
                Some(Tok::Int(n)) => n.to_string(),
                Some(Tok::Word(w)) => w,
                _ => return perr(l, c, "expected a character label"),
            }
        };
        text.parse().map_err(|_| Error::Parse { line: l, col: c, msg: format!("unknown character `{text}`") })
    }

    fn atom(&mut self) -> Result<Expr> {
        let (l, c) = self.here();
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Sym("(")) => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Word(w)) => self.word_atom(w, l, c),
            Some(Tok::Sym(s)) => perr(l, c, format!("unexpected `{s}`")),
            Some(Tok::Str(_)) => perr(l, c, "unexpected string"),
            None => perr(l, c, "unexpected end of entry"),
        }
    }

    fn word_atom(&mut self, w: String, l: usize, c: usize) -> Result<Expr> {
        match w.as_str() {
            "pi" => return Ok(Expr::Const(ConstGenerator::Pi)),
            "log2" => return Ok(Expr::Const(ConstGenerator::Log2)),
            "li4h" => return Ok(Expr::Const(ConstGenerator::Li4Half)),
            "sum" => return self.sum(),
            _ => {}
        }
        if let Some(k) = w.strip_prefix('z').and_then(|k| k.parse::<u32>().ok()) {
            return ConstGenerator::zeta_odd(k)
                .map(Expr::Const)
                .map_err(|_| Error::Parse { line: l, col: c, msg: format!("`{w}` needs an odd index >= 3; use zeta({k})") });
        }
        if let Some(func) = Func::from_name(&w) {
            return self.call(func, l, c);
        }
        if w.starts_with(|ch: char| ch.is_ascii_digit()) {
            return perr(l, c, format!("malformed number `{w}`; write products with `*`"));
        }
        if matches!(self.peek(), Some(Tok::Sym("("))) {
            return perr(l, c, format!("unknown function `{w}`"));
        }
        if !self.scope.contains(&w) {
            return Err(Error::UnboundSymbol(format!("{w} (line {l}, column {c})")));
        }
        Ok(Expr::Var(w))
    }

    fn sum(&mut self) -> Result<Expr> {
        self.expect("(")?;
        let var = self.word()?;
        self.expect("=")?;
        let lo = self.expr()?;
        self.expect("..")?;
        let hi = self.expr()?;
        self.expect(",")?;
        self.scope.push(var.clone());
        let body = self.expr();
        self.scope.pop();
        let body = body?;
        self.expect(")")?;
        Ok(Expr::sum(&var, lo, hi, body))
    }

    fn call(&mut self, func: Func, l: usize, c: usize) -> Result<Expr> {
        self.expect("(")?;
        let mut chars = Vec::new();
        for i in 0..func.char_arity() {
            chars.push(self.charid()?);
            let last = i + 1 == func.char_arity();
            if !(self.eat(",") || (last && self.eat(";"))) {
                return self.fail("expected `,` or `;` after a character label");
            }
        }
        let mut args = Vec::new();
        if !matches!(self.peek(), Some(Tok::Sym(")"))) {
            loop {
                args.push(self.expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        if !func.arity().contains(&args.len()) {
            return Err(Error::Arity(format!(
                "{} takes {:?} argument(s), got {} (line {l}, column {c})",
                func.name(),
                func.arity(),
                args.len()
            )));
        }
        Ok(Expr::Call { func, chars, args })
    }

    fn params(&mut self) -> Result<Vec<Param>> {
        let mut params: Vec<Param> = Vec::new();
        loop {
            let (l, c) = self.here();
            let name = self.word()?;
            let idx = match params.iter().position(|p| p.name == name) {
                Some(i) => i,
                None => {
                    params.push(Param { name: name.clone(), lo: i64::MIN, hi: None, parity: None });
                    params.len() - 1
                }
            };
            if self.eat(">=") {
                params[idx].lo = self.int()?;
            } else if self.eat("<=") {
                params[idx].hi = Some(self.int()?);
            } else {
                match self.word()?.as_str() {
                    "even" => params[idx].parity = Some(Parity::Even),
                    "odd" => params[idx].parity = Some(Parity::Odd),
                    other => return perr(l, c, format!("unknown constraint `{other}`")),
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        for p in &params {
            if p.lo == i64::MIN {
                return self.fail(format!("parameter `{}` needs a lower bound", p.name));
            }
        }
        Ok(params)
    }

    fn identity(&mut self, line: usize) -> Result<Identity> {
        let kw = self.word()?;
        if kw != "identity" {
            return self.fail("entries start with `identity`");
        }
        let id = self.word()?;
        let title = match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Some(s)
            }
            _ => None,
        };
        let mut expect_report = false;
        if matches!(self.peek(), Some(Tok::Word(w)) if w == "expect") {
            self.pos += 1;
            self.expect(":")?;
            match self.word()?.as_str() {
                "report" => expect_report = true,
                "pass" => {}
                other => return self.fail(format!("unknown expectation `{other}`")),
            }
        }
        self.expect(":")?;
        let mut params = Vec::new();
        if matches!(self.peek(), Some(Tok::Word(w)) if w == "forall") {
            self.pos += 1;
            params = self.params()?;
            self.expect(":")?;
        }
        self.scope = params.iter().map(|p| p.name.clone()).collect();
        let mut equations = Vec::new();
        loop {
            let mut prev = self.expr()?;
            self.expect("==")?;
            loop {
                let next = self.expr()?;
                equations.push((prev, next.clone()));
                prev = next;
                if !self.eat("==") {
                    break;
                }
            }
            if !self.eat("&&") {
                break;
            }
        }
        if self.pos < self.toks.len() {
            return self.fail("unexpected trailing input");
        }
        Ok(Identity { id, title, expect_report, params, equations, line })
    }
}

/// Parse a whole corpus file.
pub fn parse_corpus(text: &str) -> Result<Vec<Identity>> {
    let mut entries: Vec<(usize, Vec<Token>, (usize, usize))> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let continuation = raw.starts_with(char::is_whitespace);
        let mut toks = Vec::new();
        lex_line(raw, line, &mut toks)?;
        let end = (line, raw.chars().count() + 1);
        if continuation {
            let Some(last) = entries.last_mut() else {
                return perr(line, 1, "continuation line without an entry");
            };
            last.1.extend(toks);
            last.2 = end;
        } else {
            entries.push((line, toks, end));
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (line, toks, end) in entries {
        let ident = Parser::new(toks, end).identity(line)?;
        if !seen.insert(ident.id.clone()) {
            return perr(line, 1, format!("duplicate identity id `{}`", ident.id));
        }
        out.push(ident);
    }
    Ok(out)
}

/// Parse one expression; `vars` lists the names that may appear free.
pub fn parse_expr(text: &str, vars: &[&str]) -> Result<Expr> {
    let mut toks = Vec::new();
    lex_line(text, 1, &mut toks)?;
    let mut p = Parser::new(toks, (1, text.chars().count() + 1));
    p.scope = vars.iter().map(|s| s.to_string()).collect();
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_example() {
        let ids = parse_corpus("identity C02: forall s>=3 : sum(j=2..s-1, dz(j,s-j)) == zeta(s)").unwrap();
        assert_eq!(ids.len(), 1);
        assert_eq!(ids[0].params.len(), 1);
        assert_eq!(ids[0].params[0].lo, 3);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_corpus("identity X: forall s>=3 :\n  zeta(s) == dz(s) ") {
            Err(Error::Arity(_)) => {}
            other => panic!("{other:?}"),
        }
        match parse_corpus("identity X: forall s>=3 : zeta(t) == 1") {
            Err(Error::UnboundSymbol(m)) => assert!(m.starts_with('t')),
            other => panic!("{other:?}"),
        }
        match parse_corpus("identity X: zeta(3) == 1 $") {
            Err(Error::Parse { line: 1, col: 26, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn characters_and_chains() {
        let ids = parse_corpus(
            "identity A \"t\" expect: report : forall n>=2, n even :\n    cs(2b,1;2,1) == L(m4,n) == cs(-4,2a;n,1) && 1 == 1",
        )
        .unwrap();
        let a = &ids[0];
        assert!(a.expect_report);
        assert_eq!(a.equations.len(), 3);
        assert_eq!(a.params[0].parity, Some(Parity::Even));
        let again = parse_corpus(&a.to_string()).unwrap();
        assert_eq!(&again[0], a);
    }

    #[test]
    fn expression_round_trip() {
        for src in [
            "-2^-j*(1 - 3)/(4*5) - -x",
            "(-1)^(j + 1)*sum(k=1..j - 1, binom(j,k)*B(2*k))",
            "1/2*pi^2*z3 - 11/2*z5",
            "(a^b)^c + a^b^c - (a - b) - (a + b)",
        ] {
            let e = parse_expr(src, &["j", "x", "a", "b", "c"]).unwrap();
            let back = parse_expr(&e.to_string(), &["j", "x", "a", "b", "c"]).unwrap();
            assert_eq!(e, back, "{src} -> {e}");
        }
    }
}

use std::collections::HashMap;

use super::ParseError;
use crate::program::{AtomId, Program, Rule, RuleKind};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    If,
    Weak,
    Bar,
    Semi,
    Comma,
    Dot,
    LBrace,
    RBrace,
    Weight(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn next_tok(&mut self) -> Result<Option<(usize, usize, Tok)>, ParseError> {
        loop {
            match self.peek() {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                Some(_) => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let c = self.bump().unwrap();
        let tok = match c {
            ':' => match self.bump() {
                Some('-') => Tok::If,
                Some('~') => Tok::Weak,
                _ => return Err(ParseError::Syntax { line, col, msg: "expected `:-` or `:~`".into() }),
            },
            '|' => Tok::Bar,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some(']') => break,
                        Some(c) => s.push(c),
                        None => return Err(self.err("unterminated `[`")),
                    }
                }
                Tok::Weight(s.trim().to_string())
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                let mut depth = 0usize;
                while let Some(c) = self.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                    } else if c == '(' {
                        depth += 1;
                        s.push(c);
                    } else if depth > 0 && c == ')' {
                        depth -= 1;
                        s.push(c);
                    } else if depth > 0 && (c == ',' || c == '-' || c == ' ') {
                        if c != ' ' {
                            s.push(c);
                        }
                    } else {
                        break;
                    }
                    self.bump();
                }
                if depth > 0 {
                    return Err(self.err("unbalanced parentheses in atom"));
                }
                Tok::Ident(s)
            }
            other => return Err(ParseError::Syntax { line, col, msg: format!("unexpected `{other}`") }),
        };
        Ok(Some((line, col, tok)))
    }
}

struct Parser {
    toks: Vec<(usize, usize, Tok)>,
    pos: usize,
    atoms: HashMap<String, AtomId>,
    program: Program,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.2)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(&(l, c, _)) => (l, c),
            None => (1, 1),
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn atom(&mut self) -> Result<AtomId, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s != "not" => {
                let name = s.clone();
                self.pos += 1;
                Ok(match self.atoms.get(&name) {
                    Some(&a) => a,
                    None => {
                        let a = self.program.add_atom(Some(name.clone()));
                        self.atoms.insert(name, a);
                        a
                    }
                })
            }
            _ => Err(self.err("expected atom")),
        }
    }

    fn literal(&mut self) -> Result<(AtomId, bool), ParseError> {
        if self.peek() == Some(&Tok::Ident("not".into())) {
            self.pos += 1;
            Ok((self.atom()?, false))
        } else {
            Ok((self.atom()?, true))
        }
    }

    /// Body after `:-`, up to and including the final dot.
    fn body(&mut self) -> Result<(Vec<AtomId>, Vec<AtomId>), ParseError> {
        let (mut pos, mut neg) = (vec![], vec![]);
        if self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            return Ok((pos, neg));
        }
        loop {
            let (a, positive) = self.literal()?;
            if positive { pos.push(a) } else { neg.push(a) }
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::Dot) => {
                    self.pos += 1;
                    return Ok((pos, neg));
                }
                _ => return Err(self.err("expected `,` or `.`")),
            }
        }
    }

    fn rest_of_rule(&mut self) -> Result<(Vec<AtomId>, Vec<AtomId>), ParseError> {
        match self.peek() {
            Some(Tok::Dot) => {
                self.pos += 1;
                Ok((vec![], vec![]))
            }
            Some(Tok::If) => {
                self.pos += 1;
                self.body()
            }
            _ => Err(self.err("expected `:-` or `.`")),
        }
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let (line, _) = self.here();
        let rule = match self.peek() {
            Some(Tok::Weak) => {
                self.pos += 1;
                let (a, positive) = self.literal()?;
                self.expect(Tok::Dot, "`.`")?;
                if let Some(Tok::Weight(w)) = self.peek() {
                    let weight = w.split('@').next().unwrap_or("").trim();
                    if weight != "1" {
                        let weight = weight.parse().map_err(|_| self.err("bad weight"))?;
                        return Err(ParseError::NonUnitWeight { line, weight });
                    }
                    self.pos += 1;
                }
                Ok(Rule::minimize(a, positive))
            }
            Some(Tok::If) => {
                self.pos += 1;
                let (pos, neg) = self.body()?;
                Rule::disjunctive(vec![], pos, neg)
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut head = vec![];
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        head.push(self.atom()?);
                        match self.peek() {
                            Some(Tok::Semi) | Some(Tok::Comma) => self.pos += 1,
                            _ => break,
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                let (pos, neg) = self.rest_of_rule()?;
                Rule::new(RuleKind::Choice, head, pos, neg)
            }
            Some(Tok::Ident(_)) => {
                let mut head = vec![self.atom()?];
                while self.peek() == Some(&Tok::Bar) {
                    self.pos += 1;
                    head.push(self.atom()?);
                }
                let (pos, neg) = self.rest_of_rule()?;
                Rule::disjunctive(head, pos, neg)
            }
            _ => return Err(self.err("expected a rule")),
        };
        let rule = rule.map_err(|source| ParseError::Program { line, source })?;
        self.program.add_rule(rule).map_err(|source| ParseError::Program { line, source })?;
        Ok(())
    }
}

/// Parses rules such as `a | b :- c, not d.`, `{a; b} :- c.`, `:- a.` and `:~ a.`.
/// Atoms are numbered in order of first appearance.
pub fn parse_text(src: &str) -> Result<Program, ParseError> {
    let mut lx = Lexer { chars: src.char_indices().peekable(), line: 1, col: 1 };
    let mut toks = Vec::new();
    while let Some(t) = lx.next_tok()? {
        toks.push(t);
    }
    let mut p = Parser { toks, pos: 0, atoms: HashMap::new(), program: Program::new(0) };
    while p.pos < p.toks.len() {
        p.statement()?;
    }
    Ok(p.program)
}

pub fn emit_text(p: &Program) -> String {
    let name = |a: AtomId| p.display_name(a);
    let body = |r: &Rule| {
        r.pos()
            .iter()
            .map(|&a| name(a))
            .chain(r.neg().iter().map(|&a| format!("not {}", name(a))))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = String::new();
    for r in p.rules() {
        let b = body(r);
        let line = match r.kind() {
            RuleKind::Optimization => format!(":~ {b}."),
            RuleKind::Disjunctive if r.head().is_empty() => {
                if b.is_empty() { ":- .".to_string() } else { format!(":- {b}.") }
            }
            kind => {
                let heads: Vec<String> = r.head().iter().map(|&a| name(a)).collect();
                let h = if kind == RuleKind::Choice {
                    format!("{{{}}}", heads.join("; "))
                } else {
                    heads.join(" | ")
                };
                if b.is_empty() { format!("{h}.") } else { format!("{h} :- {b}.") }
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_rule_shapes() {
        let p = parse_text(
            "% comment\n a | b :- c, not d.\n{e; f} :- a.\n:- not a.\n:~ e.\n:~ not f. [1@0]\nc.\n",
        )
        .unwrap();
        assert_eq!(p.rule_count(), 6);
        assert_eq!(p.atom_count(), 6);
        assert_eq!(p.rules()[0].head().len(), 2);
        assert_eq!(p.rules()[1].kind(), RuleKind::Choice);
        assert!(p.rules()[2].is_constraint());
        assert_eq!(p.rules()[4].neg().len(), 1);
    }

    #[test]
    fn function_terms_are_atoms() {
        let p = parse_text("e(1,2) :- a(1).").unwrap();
        assert_eq!(p.name(0), Some("e(1,2)"));
    }

    #[test]
    fn emit_round_trips() {
        let src = "a | b :- c, not d.\n{e; f} :- a.\n:- not a.\n:~ e.\nc.\n";
        let p = parse_text(src).unwrap();
        let q = parse_text(&emit_text(&p)).unwrap();
        assert_eq!(emit_text(&p), emit_text(&q));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_text("a :- b\nc.") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weighted_weak_constraint_rejected() {
        assert!(matches!(parse_text(":~ a. [2]"), Err(ParseError::NonUnitWeight { weight: 2, .. })));
    }
}

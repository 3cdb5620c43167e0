use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Tok, Token};
use super::{initial_value_name, Diagnostic, Options, Span, SystemSpec};
use crate::expr::SetExpr;
use crate::interval::{parse_rational, Endpoint, Interval, IntervalSet, Universe};

const KEYWORDS: [&str; 7] = ["universe", "const", "state", "rule", "option", "empty", "X"];

/// Parses a system description. All semantic problems found are reported
/// together; a syntax error stops parsing at the first one.
pub fn parse(text: &str) -> Result<SystemSpec, Vec<Diagnostic>> {
    let tokens = tokenize(text).map_err(|d| vec![d])?;
    let raw = Parser { tokens, pos: 0 }.system().map_err(|d| vec![d])?;
    resolve(raw)
}

enum RawSet {
    Universe,
    Empty,
    Intervals(Vec<Interval>),
}

enum RawExpr {
    Name(String, Span),
    Initial(String, Span),
    Universe,
    Empty,
    Not(Box<RawExpr>),
    Bin(Tok, Box<RawExpr>, Box<RawExpr>),
}

struct Named<T> {
    name: String,
    span: Span,
    value: T,
    value_span: Span,
}

#[derive(Default)]
struct RawSystem {
    universe: Option<(RawSet, Span)>,
    constants: Vec<Named<RawSet>>,
    states: Vec<Named<RawSet>>,
    rules: Vec<Named<RawExpr>>,
    options: Options,
    /// Problems that do not stop parsing, reported with the semantic ones.
    problems: Vec<Diagnostic>,
    end: Span,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn end_span(&self) -> Span {
        self.tokens
            .last()
            .map(|t| Span::new(t.span.line, t.span.column + t.span.len, 1))
            .unwrap_or(Span::new(1, 1, 1))
    }

    fn next(&mut self, expected: &str) -> PResult<Token> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(Diagnostic::error(
                self.end_span(),
                format!("unexpected end of input, expected {expected}"),
                None,
            )),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<Span> {
        let t = self.next(expected)?;
        if t.tok == tok {
            Ok(t.span)
        } else {
            Err(unexpected(&t, expected))
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<(String, Span)> {
        let t = self.next(expected)?;
        match t.tok {
            Tok::Ident(name) => Ok((name, t.span)),
            _ => Err(unexpected(&t, expected)),
        }
    }

    fn system(mut self) -> PResult<RawSystem> {
        let mut sys = RawSystem {
            end: self.end_span(),
            ..RawSystem::default()
        };
        while let Some(t) = self.peek().cloned() {
            let keyword = match &t.tok {
                Tok::Ident(k) => k.clone(),
                _ => return Err(unexpected(&t, "a declaration")),
            };
            self.pos += 1;
            match keyword.as_str() {
                "universe" => {
                    let start = self.pos;
                    let set = self.set_literal()?;
                    let span = self.span_from(start);
                    if sys.universe.is_some() {
                        return Err(Diagnostic::error(t.span, "universe declared twice", None));
                    }
                    sys.universe = Some((set, span));
                }
                "const" | "state" => {
                    let (name, span) = self.declared_name()?;
                    self.expect(Tok::Eq, "`=`")?;
                    let start = self.pos;
                    let value = self.set_literal()?;
                    let item = Named {
                        name,
                        span,
                        value,
                        value_span: self.span_from(start),
                    };
                    if keyword == "const" {
                        sys.constants.push(item);
                    } else {
                        sys.states.push(item);
                    }
                }
                "rule" => {
                    let (name, span) = self.ident("a state name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let start = self.pos;
                    let value = self.union()?;
                    sys.rules.push(Named {
                        name,
                        span,
                        value,
                        value_span: self.span_from(start),
                    });
                }
                "option" => {
                    let (name, span) = self.ident("an option name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let t = self.next("a non-negative integer")?;
                    let value = match &t.tok {
                        Tok::Number(s) => s.parse::<u64>().map_err(|_| {
                            Diagnostic::error(t.span, format!("option value `{s}` is not a non-negative integer"), None)
                        })?,
                        _ => return Err(unexpected(&t, "a non-negative integer")),
                    };
                    if !sys.options.set(&name, value) {
                        sys.problems.push(Diagnostic::error(
                            span,
                            format!("unknown option `{name}`"),
                            Some(&format!("known options: {}", Options::NAMES.join(", "))),
                        ));
                    }
                }
                _ => {
                    return Err(Diagnostic::error(
                        t.span,
                        format!("expected a declaration, found `{keyword}`"),
                        Some("declarations start with universe, const, state, rule or option"),
                    ))
                }
            }
        }
        Ok(sys)
    }

    fn span_from(&self, start: usize) -> Span {
        let first = self.tokens[start].span;
        let last = self.tokens[self.pos - 1].span;
        let len = if first.line == last.line {
            last.column + last.len - first.column
        } else {
            first.len
        };
        Span::new(first.line, first.column, len)
    }

    fn declared_name(&mut self) -> PResult<(String, Span)> {
        let (name, span) = self.ident("a name")?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(Diagnostic::error(
                span,
                format!("`{name}` is reserved and cannot be declared"),
                None,
            ));
        }
        Ok((name, span))
    }

    fn set_literal(&mut self) -> PResult<RawSet> {
        if let Some(Token { tok: Tok::Ident(w), .. }) = self.peek() {
            let set = match w.as_str() {
                "empty" => RawSet::Empty,
                "X" => RawSet::Universe,
                _ => {
                    let t = self.peek().unwrap().clone();
                    return Err(unexpected(&t, "an interval, `empty` or `X`"));
                }
            };
            self.pos += 1;
            return Ok(set);
        }
        let mut intervals = vec![self.interval()?];
        while matches!(self.peek(), Some(Token { tok: Tok::Pipe, .. })) {
            self.pos += 1;
            intervals.push(self.interval()?);
        }
        Ok(RawSet::Intervals(intervals))
    }

    fn interval(&mut self) -> PResult<Interval> {
        let open = self.next("an interval")?;
        let lo_closed = match open.tok {
            Tok::LBracket => true,
            Tok::LParen => false,
            _ => return Err(unexpected(&open, "`[` or `(` starting an interval")),
        };
        let lo = self.next("an endpoint")?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.next("an endpoint")?;
        let close = self.next("`]` or `)`")?;
        let hi_closed = match close.tok {
            Tok::RBracket => true,
            Tok::RParen => false,
            _ => return Err(unexpected(&close, "`]` or `)` closing the interval")),
        };
        let (lo, hi) = (bound(&lo, lo_closed)?, bound(&hi, hi_closed)?);
        let len = if close.span.line == open.span.line {
            close.span.column + 1 - open.span.column
        } else {
            1
        };
        Interval::new(lo, hi).map_err(|e| {
            Diagnostic::error(
                Span::new(open.span.line, open.span.column, len),
                e.to_string(),
                Some("the lower endpoint must lie below the upper one"),
            )
        })
    }

    fn union(&mut self) -> PResult<RawExpr> {
        let mut left = self.difference()?;
        while let Some(Token { tok: Tok::Pipe, .. }) = self.peek() {
            self.pos += 1;
            let right = self.difference()?;
            left = RawExpr::Bin(Tok::Pipe, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn difference(&mut self) -> PResult<RawExpr> {
        let mut left = self.intersection()?;
        while let Some(Token { tok: op @ (Tok::Backslash | Tok::Caret), .. }) = self.peek() {
            let op = op.clone();
            self.pos += 1;
            let right = self.intersection()?;
            left = RawExpr::Bin(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn intersection(&mut self) -> PResult<RawExpr> {
        let mut left = self.unary()?;
        while let Some(Token { tok: Tok::Amp, .. }) = self.peek() {
            self.pos += 1;
            let right = self.unary()?;
            left = RawExpr::Bin(Tok::Amp, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<RawExpr> {
        if let Some(Token { tok: Tok::Tilde, .. }) = self.peek() {
            self.pos += 1;
            return Ok(RawExpr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<RawExpr> {
        let t = self.next("an operand")?;
        match t.tok {
            Tok::LParen => {
                let inner = self.union()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "X" => Ok(RawExpr::Universe),
                "empty" => Ok(RawExpr::Empty),
                _ => {
                    if let Some(Token { tok: Tok::LParen, .. }) = self.peek() {
                        self.pos += 1;
                        let n = self.next("`0`")?;
                        if n.tok != Tok::Number("0".into()) {
                            return Err(Diagnostic::error(
                                n.span,
                                format!("only the initial value `{name}(0)` can be referenced"),
                                None,
                            ));
                        }
                        let close = self.expect(Tok::RParen, "`)`")?;
                        let span = Span::new(t.span.line, t.span.column, close.column + 1 - t.span.column);
                        return Ok(RawExpr::Initial(name, span));
                    }
                    Ok(RawExpr::Name(name, t.span))
                }
            },
            _ => Err(unexpected(&t, "an operand")),
        }
    }
}

fn bound(t: &Token, closed: bool) -> PResult<Endpoint> {
    match &t.tok {
        Tok::Number(s) => parse_rational(s)
            .map(|value| Endpoint::Finite { value, closed })
            .ok_or_else(|| {
                Diagnostic::error(t.span, format!("malformed number `{s}`"), Some("write numbers as 7, -3, 3.5 or 1/3"))
            }),
        Tok::Inf { negative } => {
            if closed {
                return Err(Diagnostic::error(
                    t.span,
                    "an infinite endpoint must be open",
                    Some("use ( or ) next to inf"),
                ));
            }
            Ok(if *negative { Endpoint::NegInf } else { Endpoint::PosInf })
        }
        _ => Err(unexpected(t, "an endpoint")),
    }
}

fn unexpected(t: &Token, expected: &str) -> Diagnostic {
    Diagnostic::error(t.span, format!("expected {expected}, found {}", t.tok.describe()), None)
}

fn build_set(raw: &RawSet, universe: Option<&Universe>) -> Option<IntervalSet> {
    match raw {
        RawSet::Empty => Some(IntervalSet::empty()),
        RawSet::Universe => universe.map(|u| u.carrier().clone()),
        RawSet::Intervals(v) => Some(IntervalSet::normalize(v.iter().cloned())),
    }
}

fn resolve(mut raw: RawSystem) -> Result<SystemSpec, Vec<Diagnostic>> {
    let mut errors = std::mem::take(&mut raw.problems);
    let universe = match &raw.universe {
        None => {
            errors.push(Diagnostic::error(
                Span::new(1, 1, 1),
                "missing universe declaration",
                Some("start the file with e.g. `universe [0, inf)`"),
            ));
            None
        }
        Some((RawSet::Universe, span)) => {
            errors.push(Diagnostic::error(*span, "the universe cannot be defined as `X`", None));
            None
        }
        Some((set, span)) => match Universe::new(build_set(set, None).expect("not X")) {
            Ok(u) => Some(u),
            Err(e) => {
                errors.push(Diagnostic::error(*span, e.to_string(), None));
                None
            }
        },
    };

    let mut seen: BTreeMap<&str, Span> = BTreeMap::new();
    for item in raw.constants.iter().chain(&raw.states) {
        if let Some(first) = seen.insert(&item.name, item.span) {
            errors.push(Diagnostic::error(
                item.span,
                format!("`{}` is declared twice", item.name),
                Some(&format!("first declared at {}:{}", first.line, first.column)),
            ));
        }
    }

    let mut sets = |items: &[Named<RawSet>], what: &str| -> Vec<(String, IntervalSet)> {
        let mut out = Vec::new();
        for item in items {
            let Some(set) = build_set(&item.value, universe.as_ref()) else {
                continue;
            };
            if let Some(u) = &universe {
                if !u.contains_set(&set) {
                    errors.push(Diagnostic::error(
                        item.value_span,
                        format!("{what} {} = {set} is outside the universe {u}", item.name),
                        None,
                    ));
                }
            }
            out.push((item.name.clone(), set));
        }
        out
    };
    let constants = sets(&raw.constants, "constant");
    let states = sets(&raw.states, "initial state");

    // a duplicate declaration is already reported; rules bind to the first
    let mut state_index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, s) in raw.states.iter().enumerate() {
        state_index.entry(s.name.as_str()).or_insert(i);
    }
    let const_names: BTreeSet<&str> = raw.constants.iter().map(|c| c.name.as_str()).collect();

    let mut rules: Vec<Option<SetExpr>> = vec![None; raw.states.len()];
    let mut rule_span: Vec<Option<Span>> = vec![None; raw.states.len()];
    for rule in &raw.rules {
        let Some(&i) = state_index.get(rule.name.as_str()) else {
            let hint = const_names
                .contains(rule.name.as_str())
                .then_some("constants cannot have rules; declare it with `state`");
            errors.push(Diagnostic::error(
                rule.span,
                format!("undefined identifier {}", rule.name),
                hint,
            ));
            continue;
        };
        if let Some(first) = rule_span[i] {
            errors.push(Diagnostic::error(
                rule.span,
                format!("duplicate rule for {}", rule.name),
                Some(&format!("first rule at {}:{}", first.line, first.column)),
            ));
            continue;
        }
        rule_span[i] = Some(rule.span);
        let expr = resolve_expr(&rule.value, &state_index, &const_names, &mut errors);
        rules[i] = Some(expr);
    }
    for (i, item) in raw.states.iter().enumerate() {
        if rules[i].is_none() && rule_span[i].is_none() && state_index[item.name.as_str()] == i {
            errors.push(Diagnostic::error(
                item.span,
                format!("state {} has no rule", item.name),
                Some(&format!("add `rule {} = ...`", item.name)),
            ));
        }
    }
    if raw.states.is_empty() && errors.is_empty() {
        errors.push(Diagnostic::error(raw.end, "the system declares no states", None));
    }

    if !errors.is_empty() {
        errors.sort_by_key(|d| (d.span.line, d.span.column));
        return Err(errors);
    }
    Ok(SystemSpec {
        universe: universe.expect("checked"),
        constants,
        states,
        rules: rules.into_iter().map(|r| r.expect("checked")).collect(),
        options: raw.options,
    })
}

fn resolve_expr(
    raw: &RawExpr,
    states: &BTreeMap<&str, usize>,
    consts: &BTreeSet<&str>,
    errors: &mut Vec<Diagnostic>,
) -> SetExpr {
    match raw {
        RawExpr::Universe => SetExpr::Universe,
        RawExpr::Empty => SetExpr::Empty,
        RawExpr::Name(name, span) => {
            if let Some(&i) = states.get(name.as_str()) {
                SetExpr::Var(i)
            } else if consts.contains(name.as_str()) {
                SetExpr::Const(name.clone())
            } else {
                errors.push(Diagnostic::error(*span, format!("undefined identifier {name}"), None));
                SetExpr::Empty
            }
        }
        RawExpr::Initial(name, span) => {
            if states.contains_key(name.as_str()) {
                SetExpr::Const(initial_value_name(name))
            } else {
                errors.push(Diagnostic::error(
                    *span,
                    format!("undefined identifier {name}"),
                    Some("initial values can only be taken of declared states"),
                ));
                SetExpr::Empty
            }
        }
        RawExpr::Not(a) => !resolve_expr(a, states, consts, errors),
        RawExpr::Bin(op, a, b) => {
            let (a, b) = (
                resolve_expr(a, states, consts, errors),
                resolve_expr(b, states, consts, errors),
            );
            match op {
                Tok::Pipe => a | b,
                Tok::Amp => a & b,
                Tok::Backslash => a - b,
                _ => a ^ b,
            }
        }
    }
}

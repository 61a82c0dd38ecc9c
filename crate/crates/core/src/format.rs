//! The line-oriented automaton file format.
//!
//! ```text
//! ; comments run from `;` to the end of the line
//! kind ptar                 ; pa | pta | ptar | gpta | 2cm
//! dim 2
//! alphabet a:2 b:2 #:0
//! states q_a q_b
//! init q_a
//! linear 1 1 | 1 1          ; base | period | period ...
//! trans q_a -> a ( q_a [1 0] , q_a [1 0] )
//! trans q_b -> b ( q_b [0 1] , q_b [reset] )
//! trans q_b -> #
//! ```
//!
//! Transition syntax per kind:
//!
//! * `pa`: `trans p -a[1 0]-> q`, plus `final q ...`; letters need no
//!   declaration.
//! * `gpta`: `trans q -> σ [1 0] ( q1 , q2 )`, where the bracketed vector
//!   must be listed under `dvectors` (one or more `|`-separated vectors per
//!   line).
//! * `2cm`: `trans p inc1 q`, with `inc1 inc2 dec1 dec2 zero1 zero2`, plus
//!   `final q ...`; no `dim`, `alphabet` or `linear`.
//!
//! The semilinear constraint is the union of all `linear` lines; none means
//! the empty set. Identifiers are nonempty runs of letters, digits, `_` and
//! `#`.

use std::collections::HashMap;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::gpta::{Gpta, GptaTransition};
use crate::parikh_string::{Pa, PaTransition};
use crate::ptar::{CounterAction, Ptar, PtarTransition};
use crate::semilinear::{LinearSet, SemilinearSet, Vector};
use crate::terms::{is_symbol_char, RankedAlphabet, Symbol};
use crate::twocm::{CmOp, CmTransition, TwoCM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct FormatError {
    /// 1-based; `None` for problems with the file as a whole.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line: Some(line),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Pa,
    Pta,
    Ptar,
    Gpta,
    TwoCm,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "pa" => Kind::Pa,
            "pta" => Kind::Pta,
            "ptar" => Kind::Ptar,
            "gpta" => Kind::Gpta,
            "2cm" => Kind::TwoCm,
            _ => return None,
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Pa => "pa",
            Kind::Pta => "pta",
            Kind::Ptar => "ptar",
            Kind::Gpta => "gpta",
            Kind::TwoCm => "2cm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonFile {
    Pa(Pa),
    /// `kind pta`: a PTAR without resets.
    Pta(Ptar),
    Ptar(Ptar),
    Gpta(Gpta),
    TwoCm(TwoCM),
}

impl AutomatonFile {
    pub fn kind(&self) -> Kind {
        match self {
            AutomatonFile::Pa(_) => Kind::Pa,
            AutomatonFile::Pta(_) => Kind::Pta,
            AutomatonFile::Ptar(_) => Kind::Ptar,
            AutomatonFile::Gpta(_) => Kind::Gpta,
            AutomatonFile::TwoCm(_) => Kind::TwoCm,
        }
    }

    pub fn as_ptar(&self) -> Option<&Ptar> {
        match self {
            AutomatonFile::Pta(a) | AutomatonFile::Ptar(a) => Some(a),
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_text(&self) -> String {
        write_file(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Dash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Bar,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Dash => f.write_str("`-`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Bar => f.write_str("`|`"),
        }
    }
}

fn lex(line: usize, text: &str) -> Result<Vec<Tok>, FormatError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '|' => Tok::Bar,
            '-' => {
                if chars.next_if(|&(_, c)| c == '>').is_some() {
                    Tok::Arrow
                } else {
                    Tok::Dash
                }
            }
            c if is_symbol_char(c) => {
                let mut end = i + c.len_utf8();
                while let Some((j, d)) = chars.next_if(|&(_, d)| is_symbol_char(d)) {
                    end = j + d.len_utf8();
                }
                Tok::Ident(text[i..end].to_string())
            }
            c => {
                return err(
                    line,
                    format!("unexpected character `{c}` at column {}", i + 1),
                )
            }
        };
        out.push(tok);
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [Tok],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, toks: &'a [Tok]) -> Self {
        Cursor { line, toks, at: 0 }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.at);
        self.at += 1;
        t
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of line".into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), FormatError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            err(
                self.line,
                format!("expected {want}, found {}", self.found()),
            )
        }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, FormatError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok(s)
            }
            _ => err(
                self.line,
                format!("expected {what}, found {}", self.found()),
            ),
        }
    }

    fn done(&self) -> Result<(), FormatError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => err(self.line, format!("unexpected {t}")),
        }
    }

    /// Entries up to (not including) the next non-identifier token.
    fn numbers(&mut self) -> Result<Vec<u64>, FormatError> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(s)) = self.peek() {
            let n = s
                .parse()
                .or_else(|_| err(self.line, format!("`{s}` is not a nonnegative integer")))?;
            out.push(n);
            self.at += 1;
        }
        Ok(out)
    }
}

/// Declarations collected in the first pass, with their line numbers.
#[derive(Default)]
struct Raw {
    kind: Option<(usize, Kind)>,
    dim: Option<(usize, usize)>,
    alphabet: Vec<(usize, String, usize)>,
    states: Vec<(usize, String)>,
    init: Option<(usize, String)>,
    finals: Option<(usize, Vec<String>)>,
    linear: Vec<(usize, Vec<Vec<u64>>)>,
    dvectors: Vec<(usize, Vec<u64>)>,
    trans: Vec<(usize, Vec<Tok>)>,
}

fn bar_groups(c: &mut Cursor) -> Result<Vec<Vec<u64>>, FormatError> {
    let mut groups = vec![c.numbers()?];
    while c.peek() == Some(&Tok::Bar) {
        c.next();
        groups.push(c.numbers()?);
    }
    c.done()?;
    Ok(groups)
}

fn once<T>(
    slot: &mut Option<(usize, T)>,
    line: usize,
    what: &str,
    v: T,
) -> Result<(), FormatError> {
    if let Some((first, _)) = slot {
        return err(
            line,
            format!("duplicate `{what}` (first declared on line {first})"),
        );
    }
    *slot = Some((line, v));
    Ok(())
}

fn collect(text: &str) -> Result<Raw, FormatError> {
    let mut raw = Raw::default();
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split(';').next().unwrap_or("");
        let toks = lex(line, content)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(line, &toks);
        let keyword = c.ident("a declaration")?;
        match keyword {
            "kind" => {
                let k = c.ident("a kind")?;
                let kind =
                    Kind::parse(k).map_or_else(|| err(line, format!("unknown kind `{k}`")), Ok)?;
                c.done()?;
                once(&mut raw.kind, line, "kind", kind)?;
            }
            "dim" => {
                let d = c.ident("a dimension")?;
                let d = d
                    .parse()
                    .or_else(|_| err(line, format!("`{d}` is not a dimension")))?;
                c.done()?;
                once(&mut raw.dim, line, "dim", d)?;
            }
            "alphabet" => {
                while c.peek().is_some() {
                    let s = c.ident("a symbol")?;
                    c.expect(Tok::Colon)?;
                    let r = c.ident("a rank")?;
                    let r = r
                        .parse()
                        .or_else(|_| err(line, format!("`{r}` is not a rank")))?;
                    raw.alphabet.push((line, s.to_string(), r));
                }
            }
            "states" => {
                while c.peek().is_some() {
                    raw.states.push((line, c.ident("a state")?.to_string()));
                }
            }
            "init" => {
                let q = c.ident("a state")?.to_string();
                c.done()?;
                once(&mut raw.init, line, "init", q)?;
            }
            "final" => {
                let mut qs = Vec::new();
                while c.peek().is_some() {
                    qs.push(c.ident("a state")?.to_string());
                }
                match &mut raw.finals {
                    Some((_, all)) => all.extend(qs),
                    None => raw.finals = Some((line, qs)),
                }
            }
            "linear" => raw.linear.push((line, bar_groups(&mut c)?)),
            "dvectors" => {
                for g in bar_groups(&mut c)? {
                    raw.dvectors.push((line, g));
                }
            }
            "trans" => raw.trans.push((line, toks[1..].to_vec())),
            other => return err(line, format!("unknown declaration `{other}`")),
        }
    }
    Ok(raw)
}

struct Resolver {
    states: HashMap<String, usize>,
    names: Vec<String>,
}

impl Resolver {
    fn new(raw: &Raw) -> Result<Self, FormatError> {
        let mut states = HashMap::new();
        let mut names = Vec::new();
        for (line, name) in &raw.states {
            if states.insert(name.clone(), names.len()).is_some() {
                return err(*line, format!("duplicate state `{name}`"));
            }
            names.push(name.clone());
        }
        Ok(Resolver { states, names })
    }

    fn state(&self, line: usize, name: &str) -> Result<usize, FormatError> {
        self.states
            .get(name)
            .copied()
            .map_or_else(|| err(line, format!("undeclared state `{name}`")), Ok)
    }

    fn init(&self, raw: &Raw) -> Result<usize, FormatError> {
        match &raw.init {
            Some((line, q)) => self.state(*line, q),
            None => missing("init"),
        }
    }

    fn finals(&self, raw: &Raw) -> Result<Vec<usize>, FormatError> {
        match &raw.finals {
            Some((line, qs)) => qs.iter().map(|q| self.state(*line, q)).collect(),
            None => Ok(Vec::new()),
        }
    }
}

fn missing<T>(what: &str) -> Result<T, FormatError> {
    Err(FormatError {
        line: None,
        message: format!("missing `{what}` declaration"),
    })
}

fn vector(line: usize, dim: usize, entries: Vec<u64>) -> Result<Vector, FormatError> {
    if entries.len() != dim {
        return err(
            line,
            format!(
                "vector has {} entries but the dimension is {dim}",
                entries.len()
            ),
        );
    }
    Ok(Vector::new(entries))
}

fn constraint(raw: &Raw, dim: usize) -> Result<SemilinearSet, FormatError> {
    let mut components = Vec::new();
    for (line, groups) in &raw.linear {
        let mut groups = groups.clone().into_iter();
        let base = vector(*line, dim, groups.next().expect("at least one group"))?;
        let periods = groups
            .map(|g| vector(*line, dim, g))
            .collect::<Result<Vec<_>, _>>()?;
        components.push(LinearSet::new(base, periods).expect("dimensions checked"));
    }
    Ok(SemilinearSet::new(dim, components).expect("dimensions checked"))
}

fn alphabet(raw: &Raw) -> Result<RankedAlphabet, FormatError> {
    if raw.alphabet.is_empty() {
        return missing("alphabet");
    }
    let mut a = RankedAlphabet::new();
    for (line, s, r) in &raw.alphabet {
        if a.insert(Symbol::new(s), *r).is_err() {
            return err(*line, format!("duplicate symbol `{s}`"));
        }
    }
    Ok(a)
}

/// Rejects declarations that make no sense for `kind`.
fn check_allowed(raw: &Raw, kind: Kind) -> Result<(), FormatError> {
    let forbid = |present: Option<usize>, what: &str| match present {
        Some(line) => err(line, format!("`{what}` is not allowed in a `{kind}` file")),
        None => Ok(()),
    };
    let numeric = kind != Kind::TwoCm;
    let ranked = matches!(kind, Kind::Pta | Kind::Ptar | Kind::Gpta);
    if !numeric {
        forbid(raw.dim.map(|d| d.0), "dim")?;
        forbid(raw.linear.first().map(|l| l.0), "linear")?;
    }
    if !ranked {
        forbid(raw.alphabet.first().map(|a| a.0), "alphabet")?;
    }
    if ranked {
        forbid(raw.finals.as_ref().map(|f| f.0), "final")?;
    }
    if kind != Kind::Gpta {
        forbid(raw.dvectors.first().map(|d| d.0), "dvectors")?;
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<AutomatonFile, FormatError> {
    let raw = collect(text)?;
    let Some((_, kind)) = raw.kind else {
        return missing("kind");
    };
    check_allowed(&raw, kind)?;
    let r = Resolver::new(&raw)?;
    if r.names.is_empty() {
        return missing("states");
    }
    let init = r.init(&raw)?;
    if kind == Kind::TwoCm {
        let finals = r.finals(&raw)?;
        let transitions = raw
            .trans
            .iter()
            .map(|(line, toks)| cm_transition(&r, *line, toks))
            .collect::<Result<Vec<_>, _>>()?;
        let m = TwoCM::new(r.names, init, finals, transitions).expect("indices resolved");
        return Ok(AutomatonFile::TwoCm(m));
    }
    let Some((_, dim)) = raw.dim else {
        return missing("dim");
    };
    let c = constraint(&raw, dim)?;
    match kind {
        Kind::Pa => {
            let finals = r.finals(&raw)?;
            let transitions = raw
                .trans
                .iter()
                .map(|(line, toks)| pa_transition(&r, *line, toks, dim))
                .collect::<Result<Vec<_>, _>>()?;
            let pa = Pa::new(r.names, init, finals, transitions, c).expect("indices resolved");
            Ok(AutomatonFile::Pa(pa))
        }
        Kind::Pta | Kind::Ptar => {
            let sigma = alphabet(&raw)?;
            let mut transitions = Vec::new();
            for (line, toks) in &raw.trans {
                let t = ptar_transition(&r, &sigma, *line, toks, dim)?;
                if kind == Kind::Pta && t.children.iter().any(|(_, a)| a.is_reset()) {
                    return err(*line, "`[reset]` is not allowed in a `pta` file");
                }
                transitions.push(t);
            }
            let a = Ptar::new(r.names, sigma, init, c, transitions).expect("checked while parsing");
            Ok(if kind == Kind::Pta {
                AutomatonFile::Pta(a)
            } else {
                AutomatonFile::Ptar(a)
            })
        }
        Kind::Gpta => {
            let sigma = alphabet(&raw)?;
            let dvectors = raw
                .dvectors
                .iter()
                .map(|(line, e)| vector(*line, dim, e.clone()))
                .collect::<Result<Vec<_>, _>>()?;
            if dvectors.is_empty() {
                return missing("dvectors");
            }
            let transitions = raw
                .trans
                .iter()
                .map(|(line, toks)| gpta_transition(&r, &sigma, &dvectors, *line, toks))
                .collect::<Result<Vec<_>, _>>()?;
            let g = Gpta::new(r.names, sigma, dvectors, init, c, transitions)
                .expect("checked while parsing");
            Ok(AutomatonFile::Gpta(g))
        }
        Kind::TwoCm => unreachable!("handled above"),
    }
}

fn bracket_vector(c: &mut Cursor, dim: usize) -> Result<Vector, FormatError> {
    c.expect(Tok::LBracket)?;
    let v = vector(c.line, dim, c.numbers()?)?;
    c.expect(Tok::RBracket)?;
    Ok(v)
}

fn pa_transition(
    r: &Resolver,
    line: usize,
    toks: &[Tok],
    dim: usize,
) -> Result<PaTransition, FormatError> {
    let mut c = Cursor::new(line, toks);
    let from = r.state(line, c.ident("a state")?)?;
    c.expect(Tok::Dash)?;
    let letter = Symbol::new(c.ident("a letter")?);
    let vector = bracket_vector(&mut c, dim)?;
    c.expect(Tok::Arrow)?;
    let to = r.state(line, c.ident("a state")?)?;
    c.done()?;
    Ok(PaTransition {
        from,
        letter,
        vector,
        to,
    })
}

fn ranked_symbol(
    sigma: &RankedAlphabet,
    line: usize,
    s: &str,
) -> Result<(Symbol, usize), FormatError> {
    match (sigma.symbol(s), sigma.rank(s)) {
        (Some(sym), Some(rank)) => Ok((sym.clone(), rank)),
        _ => err(line, format!("undeclared symbol `{s}`")),
    }
}

fn arity(line: usize, symbol: &Symbol, rank: usize, found: usize) -> Result<(), FormatError> {
    if rank != found {
        return err(
            line,
            format!("`{symbol}` has rank {rank} but the transition has {found} successors"),
        );
    }
    Ok(())
}

/// `( item , item , … )`, or nothing at all.
fn successor_list<T>(
    c: &mut Cursor,
    mut item: impl FnMut(&mut Cursor) -> Result<T, FormatError>,
) -> Result<Vec<T>, FormatError> {
    let mut out = Vec::new();
    if c.peek() != Some(&Tok::LParen) {
        return Ok(out);
    }
    c.next();
    loop {
        out.push(item(c)?);
        match c.next() {
            Some(Tok::Comma) => continue,
            Some(Tok::RParen) => break,
            Some(t) => return err(c.line, format!("expected `,` or `)`, found {t}")),
            None => return err(c.line, "expected `)`, found end of line"),
        }
    }
    Ok(out)
}

fn ptar_transition(
    r: &Resolver,
    sigma: &RankedAlphabet,
    line: usize,
    toks: &[Tok],
    dim: usize,
) -> Result<PtarTransition, FormatError> {
    let mut c = Cursor::new(line, toks);
    let from = r.state(line, c.ident("a state")?)?;
    c.expect(Tok::Arrow)?;
    let (symbol, rank) = ranked_symbol(sigma, line, c.ident("a symbol")?)?;
    let children = successor_list(&mut c, |c| {
        let q = r.state(c.line, c.ident("a state")?)?;
        c.expect(Tok::LBracket)?;
        let action = if c.peek() == Some(&Tok::Ident("reset".into())) {
            c.next();
            CounterAction::Reset
        } else {
            CounterAction::Add(vector(c.line, dim, c.numbers()?)?)
        };
        c.expect(Tok::RBracket)?;
        Ok((q, action))
    })?;
    c.done()?;
    arity(line, &symbol, rank, children.len())?;
    Ok(PtarTransition {
        from,
        symbol,
        children,
    })
}

fn gpta_transition(
    r: &Resolver,
    sigma: &RankedAlphabet,
    dvectors: &[Vector],
    line: usize,
    toks: &[Tok],
) -> Result<GptaTransition, FormatError> {
    let mut c = Cursor::new(line, toks);
    let from = r.state(line, c.ident("a state")?)?;
    c.expect(Tok::Arrow)?;
    let (symbol, rank) = ranked_symbol(sigma, line, c.ident("a symbol")?)?;
    let dim = dvectors[0].dim();
    let d = bracket_vector(&mut c, dim)?;
    let label = dvectors.iter().position(|e| *e == d).map_or_else(
        || err(line, format!("[{d}] is not listed in `dvectors`")),
        Ok,
    )?;
    let children = successor_list(&mut c, |c| r.state(c.line, c.ident("a state")?))?;
    c.done()?;
    arity(line, &symbol, rank, children.len())?;
    Ok(GptaTransition {
        from,
        symbol,
        label,
        children,
    })
}

fn cm_transition(r: &Resolver, line: usize, toks: &[Tok]) -> Result<CmTransition, FormatError> {
    let mut c = Cursor::new(line, toks);
    let from = r.state(line, c.ident("a state")?)?;
    let op = c.ident("an instruction")?;
    let op = match op {
        "inc1" => CmOp::Inc(1),
        "inc2" => CmOp::Inc(2),
        "dec1" => CmOp::Dec(1),
        "dec2" => CmOp::Dec(2),
        "zero1" => CmOp::Zero(1),
        "zero2" => CmOp::Zero(2),
        other => return err(line, format!("unknown instruction `{other}`")),
    };
    let to = r.state(line, c.ident("a state")?)?;
    c.done()?;
    Ok(CmTransition { from, op, to })
}

fn write_file(file: &AutomatonFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind {}", file.kind());
    match file {
        AutomatonFile::Pa(a) => {
            header(
                &mut out,
                a.dim(),
                None,
                a.states(),
                a.initial(),
                Some(a.finals()),
            );
            constraint_lines(&mut out, a.constraint());
            for t in a.transitions() {
                let s = a.states();
                let _ = writeln!(
                    out,
                    "trans {} -{}[{}]-> {}",
                    s[t.from], t.letter, t.vector, s[t.to]
                );
            }
        }
        AutomatonFile::Pta(a) | AutomatonFile::Ptar(a) => {
            header(
                &mut out,
                a.dim(),
                Some(a.alphabet()),
                a.states(),
                a.initial(),
                None,
            );
            constraint_lines(&mut out, a.constraint());
            for t in a.transitions() {
                let s = a.states();
                let _ = write!(out, "trans {} -> {}", s[t.from], t.symbol);
                let kids: Vec<String> = t
                    .children
                    .iter()
                    .map(|(q, act)| format!("{} {act}", s[*q]))
                    .collect();
                successors(&mut out, &kids);
            }
        }
        AutomatonFile::Gpta(g) => {
            let _ = writeln!(out, "dim {}", g.dim());
            alphabet_line(&mut out, g.alphabet());
            let ds: Vec<String> = g.dvectors().iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "dvectors {}", ds.join(" | "));
            header(&mut out, usize::MAX, None, g.states(), g.initial(), None);
            constraint_lines(&mut out, g.constraint());
            for t in g.transitions() {
                let s = g.states();
                let _ = write!(
                    out,
                    "trans {} -> {} [{}]",
                    s[t.from],
                    t.symbol,
                    g.dvectors()[t.label]
                );
                let kids: Vec<String> = t.children.iter().map(|q| s[*q].clone()).collect();
                successors(&mut out, &kids);
            }
        }
        AutomatonFile::TwoCm(m) => {
            header(
                &mut out,
                usize::MAX,
                None,
                m.states(),
                m.initial(),
                Some(m.finals()),
            );
            for t in m.transitions() {
                let s = m.states();
                let _ = writeln!(out, "trans {} {} {}", s[t.from], t.op, s[t.to]);
            }
        }
    }
    out
}

/// `usize::MAX` as `dim` skips the line.
fn header(
    out: &mut String,
    dim: usize,
    alphabet: Option<&RankedAlphabet>,
    states: &[String],
    initial: usize,
    finals: Option<&[usize]>,
) {
    if dim != usize::MAX {
        let _ = writeln!(out, "dim {dim}");
    }
    if let Some(a) = alphabet {
        alphabet_line(out, a);
    }
    let _ = writeln!(out, "states {}", states.join(" "));
    let _ = writeln!(out, "init {}", states[initial]);
    if let Some(f) = finals {
        out.push_str("final");
        for q in f {
            let _ = write!(out, " {}", states[*q]);
        }
        out.push('\n');
    }
}

fn alphabet_line(out: &mut String, a: &RankedAlphabet) {
    let pairs: Vec<String> = a.iter().map(|(s, r)| format!("{s}:{r}")).collect();
    let _ = writeln!(out, "alphabet {}", pairs.join(" "));
}

fn constraint_lines(out: &mut String, c: &SemilinearSet) {
    for l in c.components() {
        let _ = writeln!(out, "linear {l}");
    }
}

fn successors(out: &mut String, kids: &[String]) {
    if !kids.is_empty() {
        let _ = write!(out, " ( {} )", kids.join(" , "));
    }
    out.push('\n');
}

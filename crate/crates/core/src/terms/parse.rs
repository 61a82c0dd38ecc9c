//! Tree text syntax: `tree := SYMBOL | SYMBOL "(" tree ("," tree)* ")"`.
//!
//! A token that is not a declared symbol is read as monadic sugar when it
//! splits uniquely into unary symbols followed by one symbol whose rank
//! matches the argument list, so `γγ#` means `γ(γ(#))` and `γσ(α,α)` means
//! `γ(σ(α,α))`.

use super::{Context, RankedAlphabet, Slot, Symbol, Term, TermError, Tree};

pub(crate) fn is_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '#'
}

struct Raw {
    name: String,
    offset: usize,
    args: Vec<Raw>,
}

struct Parser<'a> {
    src: &'a str,
    at: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> TermError {
        TermError::Parse {
            offset: self.at,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.at..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.at += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.at..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), TermError> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn tree(&mut self) -> Result<Raw, TermError> {
        self.skip_ws();
        let start = self.at;
        let len: usize = self.src[start..]
            .chars()
            .take_while(|c| is_symbol_char(*c))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.err("expected a symbol"));
        }
        self.at += len;
        let name = self.src[start..start + len].to_string();
        let mut args = Vec::new();
        if self.peek() == Some('(') {
            self.at += 1;
            args.push(self.tree()?);
            while self.peek() == Some(',') {
                self.at += 1;
                args.push(self.tree()?);
            }
            self.expect(')')?;
        }
        Ok(Raw {
            name,
            offset: start,
            args,
        })
    }
}

fn parse_raw(text: &str) -> Result<Raw, TermError> {
    let mut p = Parser { src: text, at: 0 };
    let raw = p.tree()?;
    if let Some(c) = p.peek() {
        return Err(p.err(format!("unexpected `{c}` after tree")));
    }
    Ok(raw)
}

/// Splits `name` into declared symbols `g_1 .. g_k s` with every `g_i` unary
/// and `s` of rank `arity`. Errors unless exactly one split exists.
fn split_sugar(
    name: &str,
    arity: usize,
    alphabet: &RankedAlphabet,
    offset: usize,
) -> Result<Vec<Symbol>, TermError> {
    fn go(
        rest: &str,
        arity: usize,
        alphabet: &RankedAlphabet,
        acc: &mut Vec<Symbol>,
        found: &mut Vec<Vec<Symbol>>,
    ) {
        if found.len() > 1 {
            return;
        }
        for (end, c) in rest.char_indices() {
            let cut = end + c.len_utf8();
            let head = &rest[..cut];
            let Some(sym) = alphabet.symbol(head) else {
                continue;
            };
            let rank = alphabet.rank(head).expect("declared");
            if cut == rest.len() {
                if rank == arity {
                    acc.push(sym.clone());
                    found.push(acc.clone());
                    acc.pop();
                }
            } else if rank == 1 {
                acc.push(sym.clone());
                go(&rest[cut..], arity, alphabet, acc, found);
                acc.pop();
            }
        }
    }
    let mut found = Vec::new();
    go(name, arity, alphabet, &mut Vec::new(), &mut found);
    match found.len() {
        1 => Ok(found.pop().expect("one split")),
        0 => Err(match alphabet.rank(name) {
            Some(expected) => TermError::IllRanked {
                symbol: name.to_string(),
                expected,
                found: arity,
            },
            None => TermError::UnknownSymbol(name.to_string()),
        }),
        _ => Err(TermError::Parse {
            offset,
            message: format!("`{name}` splits into symbols in more than one way"),
        }),
    }
}

fn resolve<L>(
    raw: &Raw,
    alphabet: &RankedAlphabet,
    leaf_hook: &impl Fn(&str) -> Option<L>,
    wrap: &impl Fn(Symbol) -> L,
) -> Result<Term<L>, TermError> {
    if raw.args.is_empty() {
        if let Some(l) = leaf_hook(&raw.name) {
            return Ok(Term::leaf(l));
        }
    }
    let args = raw
        .args
        .iter()
        .map(|a| resolve(a, alphabet, leaf_hook, wrap))
        .collect::<Result<Vec<_>, _>>()?;
    let chain = match alphabet.rank(&raw.name) {
        Some(rank) if rank == args.len() => {
            vec![alphabet.symbol(&raw.name).expect("declared").clone()]
        }
        _ => split_sugar(&raw.name, args.len(), alphabet, raw.offset)?,
    };
    let (last, unary) = chain.split_last().expect("nonempty split");
    let mut t = Term::node(wrap(last.clone()), args);
    for g in unary.iter().rev() {
        t = Term::node(wrap(g.clone()), vec![t]);
    }
    Ok(t)
}

/// Parses a tree and checks it against `alphabet`.
pub fn parse_tree(text: &str, alphabet: &RankedAlphabet) -> Result<Tree, TermError> {
    let raw = parse_raw(text)?;
    resolve(&raw, alphabet, &|_| None, &|s| s)
}

/// Parses a context; leaves named `x1`, `x2`, .. that are not declared
/// symbols are variables.
pub fn parse_context(text: &str, alphabet: &RankedAlphabet) -> Result<Context<Symbol>, TermError> {
    let raw = parse_raw(text)?;
    let var = |name: &str| -> Option<Slot<Symbol>> {
        if alphabet.contains(name) {
            return None;
        }
        let n = name.strip_prefix('x')?.parse::<usize>().ok()?;
        (n >= 1).then_some(Slot::Var(n))
    };
    let body = resolve(&raw, alphabet, &var, &Slot::Label)?;
    Context::new(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> RankedAlphabet {
        RankedAlphabet::from_pairs([("σ", 2), ("γ", 1), ("#", 0), ("α", 0)]).unwrap()
    }

    #[test]
    fn plain_and_whitespace() {
        let t = parse_tree(" σ ( γ(#) ,\n # ) ", &alphabet()).unwrap();
        assert_eq!(t.to_string(), "σ(γ(#),#)");
    }

    #[test]
    fn monadic_sugar() {
        let a = alphabet();
        assert_eq!(parse_tree("γγ#", &a).unwrap().to_string(), "γ(γ(#))");
        assert_eq!(
            parse_tree("σ(γγ#,γ#)", &a).unwrap().to_string(),
            "σ(γ(γ(#)),γ(#))"
        );
        assert_eq!(parse_tree("γσ(α,α)", &a).unwrap().to_string(), "γ(σ(α,α))");
    }

    #[test]
    fn ambiguous_sugar_is_rejected() {
        let a = RankedAlphabet::from_pairs([("g", 1), ("gg", 1), ("e", 0)]).unwrap();
        assert!(matches!(
            parse_tree("gge", &a),
            Err(TermError::Parse { .. })
        ));
        assert_eq!(parse_tree("gg(e)", &a).unwrap().to_string(), "gg(e)");
    }

    #[test]
    fn arity_errors() {
        let a = alphabet();
        assert!(matches!(
            parse_tree("σ(#)", &a),
            Err(TermError::IllRanked { .. })
        ));
        assert!(matches!(
            parse_tree("γ", &a),
            Err(TermError::IllRanked { .. })
        ));
        assert!(matches!(
            parse_tree("β", &a),
            Err(TermError::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_tree("σ(#,#", &a),
            Err(TermError::Parse { .. })
        ));
        assert!(matches!(
            parse_tree("# #", &a),
            Err(TermError::Parse { .. })
        ));
    }
}

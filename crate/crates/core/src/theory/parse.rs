//! Lexer and recursive-descent parser for `.gth` files.
//!
//! `|` binds looser than `&`; the body of `exists x:S.` extends as far to the
//! right as possible. An axiom without an explicit `[context]:` gets one
//! inferred from relation argument positions (or the unique sort).

use std::collections::BTreeMap;

use super::{
    check_formula, validate_signature, Axiom, Formula, RelSymbol, Signature, Theory, TheoryError, TheoryErrorKind,
    TheoryOrientation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 13] = ["|-", "{", "}", "(", ")", "[", "]", ",", ";", ":", ".", "=", "&"];

fn lex(text: &str) -> Result<Vec<Token>, TheoryError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: start.0, col: start.1 });
            continue;
        }
        if c == '|' {
            let sym = if chars.get(i + 1) == Some(&'-') { "|-" } else { "|" };
            i += sym.len();
            col += sym.len();
            out.push(Token { tok: Tok::Sym(sym), line: start.0, col: start.1 });
            continue;
        }
        match SYMBOLS.iter().find(|s| s.len() == 1 && s.starts_with(c)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), line, col });
                i += 1;
                col += 1;
            }
            None => {
                return Err(TheoryError {
                    line,
                    col,
                    kind: TheoryErrorKind::Syntax(format!("unexpected character `{c}`")),
                })
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, TheoryError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(TheoryError { line: t.line, col: t.col, kind: TheoryErrorKind::Syntax(msg.into()) })
    }

    fn describe(&self) -> String {
        match &self.peek().tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(t) if *t == s)
    }

    fn at_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(t) if t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected identifier, found {}", self.describe())),
        }
    }

    fn keyword(&mut self, k: &str) -> PResult<()> {
        if self.at_keyword(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_sym("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat_sym("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.at_keyword("exists") {
            self.pos += 1;
            let var = self.ident()?;
            self.expect_sym(":")?;
            let sort = self.ident()?;
            self.expect_sym(".")?;
            let body = self.formula()?;
            return Ok(Formula::Exists { var, sort, body: Box::new(body) });
        }
        if self.at_keyword("true") {
            self.pos += 1;
            return Ok(Formula::True);
        }
        if self.at_keyword("false") {
            self.pos += 1;
            return Ok(Formula::False);
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        let name = self.ident()?;
        if self.eat_sym("(") {
            let mut args = Vec::new();
            if !self.at_sym(")") {
                args.push(self.ident()?);
                while self.eat_sym(",") {
                    args.push(self.ident()?);
                }
            }
            self.expect_sym(")")?;
            return Ok(Formula::Rel { name, args });
        }
        if self.eat_sym("=") {
            let rhs = self.ident()?;
            // The sort is filled in once the context is known.
            return Ok(Formula::Eq { sort: String::new(), lhs: name, rhs });
        }
        self.error(format!("expected `(` or `=` after `{name}`"))
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "theory" | "sort" | "rel" | "axiom" | "orientation" | "exists" | "true" | "false")
}

/// Fills in the sorts of equalities from the variables' sorts.
fn resolve_eq_sorts(f: &mut Formula, env: &mut Vec<(String, String)>) {
    match f {
        Formula::Eq { sort, lhs, .. } if sort.is_empty() => {
            if let Some((_, s)) = env.iter().rev().find(|(v, _)| v == lhs) {
                *sort = s.clone();
            }
        }
        Formula::And(fs) | Formula::Or(fs) => fs.iter_mut().for_each(|g| resolve_eq_sorts(g, env)),
        Formula::Exists { var, sort, body } => {
            env.push((var.clone(), sort.clone()));
            resolve_eq_sorts(body, env);
            env.pop();
        }
        _ => {}
    }
}

/// Assigns sorts to free variables from the positions they occupy.
fn infer_context(sig: &Signature, lhs: &Formula, rhs: &Formula) -> Result<Vec<(String, String)>, TheoryErrorKind> {
    let mut order = lhs.free_vars();
    for v in rhs.free_vars() {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    let mut sorts: BTreeMap<String, String> = BTreeMap::new();
    let mut eqs = Vec::new();
    fn walk(
        sig: &Signature,
        f: &Formula,
        bound: &mut Vec<String>,
        sorts: &mut BTreeMap<String, String>,
        eqs: &mut Vec<(String, String)>,
    ) {
        match f {
            Formula::Rel { name, args } => {
                if let Some(r) = sig.relation(name) {
                    for (a, s) in args.iter().zip(&r.arity) {
                        if !bound.contains(a) {
                            sorts.entry(a.clone()).or_insert_with(|| s.clone());
                        }
                    }
                }
            }
            Formula::Eq { lhs, rhs, .. } if !bound.contains(lhs) && !bound.contains(rhs) => {
                eqs.push((lhs.clone(), rhs.clone()))
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| walk(sig, g, bound, sorts, eqs)),
            Formula::Exists { var, body, .. } => {
                bound.push(var.clone());
                walk(sig, body, bound, sorts, eqs);
                bound.pop();
            }
            _ => {}
        }
    }
    walk(sig, lhs, &mut Vec::new(), &mut sorts, &mut eqs);
    walk(sig, rhs, &mut Vec::new(), &mut sorts, &mut eqs);
    for _ in 0..eqs.len() {
        for (a, b) in &eqs {
            if let Some(s) = sorts.get(a).cloned() {
                sorts.entry(b.clone()).or_insert(s);
            } else if let Some(s) = sorts.get(b).cloned() {
                sorts.insert(a.clone(), s);
            }
        }
    }
    order
        .into_iter()
        .map(|v| match sorts.get(&v) {
            Some(s) => Ok((v, s.clone())),
            None if sig.sorts.len() == 1 => Ok((v, sig.sorts[0].clone())),
            None => Err(TheoryErrorKind::UnboundVariable(v)),
        })
        .collect()
}

pub fn parse_theory(text: &str) -> Result<Theory, TheoryError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.keyword("theory")?;
    let name = p.ident()?;
    p.expect_sym("{")?;
    let mut sig = Signature::default();
    let mut raw_axioms = Vec::new();
    let mut orientation = TheoryOrientation::LH;
    while !p.at_sym("}") {
        let at = (p.peek().line, p.peek().col);
        let located = |kind| TheoryError { line: at.0, col: at.1, kind };
        if p.at_keyword("sort") {
            p.pos += 1;
            sig.sorts.push(p.ident()?);
        } else if p.at_keyword("rel") {
            p.pos += 1;
            let name = p.ident()?;
            p.expect_sym("(")?;
            let mut arity = Vec::new();
            if !p.at_sym(")") {
                arity.push(p.ident()?);
                while p.eat_sym(",") {
                    arity.push(p.ident()?);
                }
            }
            p.expect_sym(")")?;
            sig.relations.push(RelSymbol { name, arity });
        } else if p.at_keyword("axiom") {
            p.pos += 1;
            let mut context = None;
            if p.eat_sym("[") {
                let mut ctx = Vec::new();
                if !p.at_sym("]") {
                    loop {
                        let v = p.ident()?;
                        p.expect_sym(":")?;
                        ctx.push((v, p.ident()?));
                        if !p.eat_sym(",") {
                            break;
                        }
                    }
                }
                p.expect_sym("]")?;
                p.expect_sym(":")?;
                context = Some(ctx);
            }
            let lhs = if p.at_sym("|-") { Formula::True } else { p.formula()? };
            p.expect_sym("|-")?;
            let rhs = p.formula()?;
            raw_axioms.push((at, context, lhs, rhs));
        } else if p.at_keyword("orientation") {
            p.pos += 1;
            orientation = match p.ident()?.as_str() {
                "LH" => TheoryOrientation::LH,
                "PS" => TheoryOrientation::PS,
                other => return Err(located(TheoryErrorKind::Syntax(format!("unknown orientation `{other}`")))),
            };
        } else {
            return p.error(format!("expected declaration, found {}", p.describe()));
        }
        if !p.eat_sym(";") && !p.at_sym("}") {
            return p.error(format!("expected `;`, found {}", p.describe()));
        }
    }
    p.expect_sym("}")?;
    if p.peek().tok != Tok::Eof {
        return p.error(format!("trailing input {}", p.describe()));
    }
    validate_signature(&sig).map_err(TheoryError::unlocated)?;
    let mut axioms = Vec::new();
    for ((line, col), context, mut lhs, mut rhs) in raw_axioms {
        let located = |kind| TheoryError { line, col, kind };
        let context = match context {
            Some(c) => c,
            None => infer_context(&sig, &lhs, &rhs).map_err(located)?,
        };
        let mut env = context.clone();
        resolve_eq_sorts(&mut lhs, &mut env);
        resolve_eq_sorts(&mut rhs, &mut env);
        let ax = Axiom { context, lhs, rhs };
        let mut scope = BTreeMap::new();
        for (v, s) in &ax.context {
            if !sig.has_sort(s) {
                return Err(located(TheoryErrorKind::UnknownSort(s.clone())));
            }
            if scope.insert(v.clone(), s.clone()).is_some() {
                return Err(located(TheoryErrorKind::Duplicate(v.clone())));
            }
        }
        check_formula(&sig, &mut scope, &ax.lhs).map_err(located)?;
        check_formula(&sig, &mut scope, &ax.rhs).map_err(located)?;
        axioms.push(ax);
    }
    Ok(Theory { name, signature: sig, axioms, orientation })
}

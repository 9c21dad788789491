//! Text formats: polynomial expressions and line-oriented algebra files.
//!
//! ```text
//! base Q                  # or: base artin <file>
//! regime nonpositive      # or: unbounded
//! gen x 0
//! gen y -1
//! diff y = x^2 - 3/2*eps*x
//! rel x^3
//! ```

use crate::algebra::{Algebra, Elem, Gen, Regime};
use crate::artin::ArtinRing;
use crate::morphism::Morphism;
use crate::error::{Error, Result};
use crate::Q;
use num_bigint::BigInt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(Q),
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[st..i].iter().collect();
            out.push((Tok::Num(txt.parse().unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[st..i].iter().collect()), col));
        } else if "+-*^/()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(perr(line, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }
    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| perr(self.line, col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(perr(self.line, col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }
    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.eat('/') {
                    let c2 = self.col();
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            Ok(Expr::Num(Q::new(n, d)))
                        }
                        _ => Err(perr(self.line, c2, "expected a nonzero denominator")),
                    }
                } else {
                    Ok(Expr::Num(Q::from_integer(n)))
                }
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr(self.line, self.col(), "expected ')'"));
                }
                Ok(e)
            }
            _ => Err(perr(self.line, col, "expected a number, a name or '('")),
        }
    }
}

/// Parses an expression; `line`/`col0` locate it for error messages.
pub fn parse_expr_at(s: &str, line: usize, col0: usize) -> Result<Expr> {
    let toks = tokenize(s, line, col0)?;
    let mut p = Parser { toks, pos: 0, line, end_col: col0 + s.chars().count() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(line, p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates an expression in `alg`; names resolve to generators of the
/// algebra or of its coefficient ring.
pub fn eval(alg: &Algebra, e: &Expr, line: usize) -> Result<Elem> {
    Ok(match e {
        Expr::Num(c) => alg.constant(c.clone()),
        Expr::Ident(name, col) => {
            if let Some(i) = alg.gen_index(name) {
                alg.gen_at(i)
            } else if let Some(a) = alg.base.generator(name) {
                alg.scalar(a)
            } else {
                return Err(perr(line, *col, format!("unknown name {name}")));
            }
        }
        Expr::Add(a, b) => eval(alg, a, line)?.add(&eval(alg, b, line)?),
        Expr::Sub(a, b) => eval(alg, a, line)?.sub(&eval(alg, b, line)?),
        Expr::Mul(a, b) => alg.mul(&eval(alg, a, line)?, &eval(alg, b, line)?),
        Expr::Neg(a) => eval(alg, a, line)?.neg(),
        Expr::Pow(a, n) => alg.pow(&eval(alg, a, line)?, *n),
    })
}

/// Parses and evaluates an expression in `alg`.
pub fn parse_elem(alg: &Algebra, s: &str) -> Result<Elem> {
    let e = parse_expr_at(s, 0, 1)?;
    Ok(alg.normalize(&eval(alg, &e, 0)?))
}

fn strip_comment(l: &str) -> &str {
    match l.find('#') {
        Some(i) => &l[..i],
        None => l,
    }
}

/// Splits a `name = expr` payload; returns (name, expr, column of expr).
fn split_assignment(rest: &str, line: usize, col0: usize) -> Result<(String, String, usize)> {
    let eq = rest.find('=').ok_or_else(|| perr(line, col0, "expected '='"))?;
    let name = rest[..eq].trim().to_string();
    if name.is_empty() {
        return Err(perr(line, col0, "missing name before '='"));
    }
    Ok((name, rest[eq + 1..].to_string(), col0 + eq + 1))
}

/// Parses an algebra description; `base_dir` resolves `base artin` paths.
pub fn parse_algebra(text: &str, base_dir: Option<&Path>) -> Result<Algebra> {
    parse_with(text, base_dir, Arc::new(ArtinRing::field()))
}

/// Parses an algebra over an already constructed coefficient ring (a `base`
/// directive in the text still takes precedence).
pub fn parse_algebra_over(text: &str, base: Arc<ArtinRing>) -> Result<Algebra> {
    parse_with(text, None, base)
}

fn parse_with(text: &str, base_dir: Option<&Path>, base: Arc<ArtinRing>) -> Result<Algebra> {
    let mut base = base;
    let mut regime = Regime::Nonpositive;
    let mut gens: Vec<Gen> = Vec::new();
    let mut diffs: Vec<(String, String, usize, usize)> = Vec::new();
    let mut rels: Vec<(String, usize, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let l = strip_comment(raw);
        let trimmed = l.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = l.len() - trimmed.len();
        let (word, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let rest_col = indent + word.len() + 1;
        let args: Vec<&str> = rest.split_whitespace().collect();
        match word {
            "base" => match args.as_slice() {
                ["Q"] => base = Arc::new(ArtinRing::field()),
                ["artin", file] => {
                    let path = match base_dir {
                        Some(d) => d.join(file),
                        None => PathBuf::from(file),
                    };
                    base = Arc::new(load_artin(&path)?);
                }
                _ => return Err(perr(line, rest_col, "expected 'Q' or 'artin <file>'")),
            },
            "regime" => match args.as_slice() {
                ["nonpositive"] => regime = Regime::Nonpositive,
                ["unbounded"] => regime = Regime::Unbounded,
                _ => return Err(perr(line, rest_col, "expected 'nonpositive' or 'unbounded'")),
            },
            "gen" => match args.as_slice() {
                [name, deg] => {
                    let d: i32 = deg.parse().map_err(|_| perr(line, rest_col, "bad degree"))?;
                    let ok = name.chars().next().map(|c| c.is_alphabetic() || c == '_').unwrap_or(false)
                        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(perr(line, rest_col, format!("bad generator name {name}")));
                    }
                    gens.push(Gen::new(name, d));
                }
                _ => return Err(perr(line, rest_col, "expected 'gen <name> <degree>'")),
            },
            "diff" => {
                let (name, expr, col) = split_assignment(rest, line, rest_col - 1)?;
                diffs.push((name, expr, line, col));
            }
            "rel" => rels.push((rest.to_string(), line, rest_col - 1)),
            other => return Err(perr(line, indent + 1, format!("unknown directive {other}"))),
        }
    }
    let mut alg = Algebra::skeleton(base, gens, regime)?;
    let mut rel_elems = Vec::new();
    for (s, line, col) in &rels {
        let e = parse_expr_at(s, *line, *col)?;
        rel_elems.push(eval(&alg, &e, *line)?);
    }
    if !rel_elems.is_empty() {
        alg.set_relations(rel_elems)?;
    }
    let mut seen = std::collections::BTreeSet::new();
    for (name, s, line, col) in &diffs {
        if alg.gen_index(name).is_none() {
            return Err(perr(*line, 1, format!("diff for unknown generator {name}")));
        }
        if !seen.insert(name.clone()) {
            return Err(perr(*line, 1, format!("second diff for {name}")));
        }
        let e = parse_expr_at(s, *line, *col)?;
        let v = alg.normalize(&eval(&alg, &e, *line)?);
        alg.set_diff(name, v)?;
    }
    alg.validate()?;
    Ok(alg)
}

/// Builds a morphism from `generator = expression` pairs (unnamed generators go to 0).
pub fn parse_morphism(source: Arc<Algebra>, target: Arc<Algebra>, images: &[(&str, &str)]) -> Result<Morphism> {
    let named = images
        .iter()
        .map(|(n, e)| Ok((*n, parse_elem(&target, e)?)))
        .collect::<Result<Vec<_>>>()?;
    Morphism::from_named(source, target, &named, None)
}

pub fn parse_algebra_file(path: &Path) -> Result<Algebra> {
    let text = std::fs::read_to_string(path)?;
    parse_algebra(&text, path.parent())
}

/// Morphism file, paths relative to the file:
///
/// ```text
/// source r_a.dga
/// target r_b.dga
/// base residue        # optional: target is over the residue field
/// map x = x + eps*y
/// ```
pub fn parse_morphism_file(path: &Path) -> Result<Morphism> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let (mut source, mut target, mut residue) = (None, None, false);
    let mut maps = Vec::new();
    for (line, word, rest) in directives(&text) {
        match word.as_str() {
            "source" => source = Some(Arc::new(parse_algebra_file(&dir.join(&rest))?)),
            "target" => target = Some(Arc::new(parse_algebra_file(&dir.join(&rest))?)),
            "base" if rest == "residue" => residue = true,
            "map" => maps.push((assignment(&rest, line)?, line)),
            other => return Err(perr(line, 1, format!("unknown directive {other}"))),
        }
    }
    let source = source.ok_or_else(|| perr(1, 1, "missing source line"))?;
    let target = target.ok_or_else(|| perr(1, 1, "missing target line"))?;
    let mut images = vec![Elem::zero(); source.ngens()];
    for ((name, expr), line) in maps {
        let i = source.gen_index(&name).ok_or_else(|| perr(line, 5, format!("unknown generator {name}")))?;
        images[i] = parse_elem_at(&target, &expr, line)?;
    }
    let base_map = residue.then(|| crate::artin::ArtinMap::residue(source.base.clone()));
    Morphism::new(source, target, images, base_map)
}

/// Instance file: `<role> <value>` lines, later lines overriding earlier ones.
pub fn parse_instance(text: &str) -> std::collections::BTreeMap<String, String> {
    directives(text).into_iter().map(|(_, w, r)| (w, r)).collect()
}

/// Loads a coefficient ring from its presentation file (base Q).
pub fn load_artin(path: &Path) -> Result<ArtinRing> {
    let p = parse_algebra_file(path)?;
    ArtinRing::from_presentation(&p)
}

/// Derivation file: `degree <n>` plus `der <gen> = <expr>` lines; unnamed generators go to 0.
pub fn parse_derivation(alg: &Arc<Algebra>, text: &str) -> Result<crate::Derivation> {
    let mut degree = None;
    let mut values = vec![Elem::zero(); alg.ngens()];
    for (line, word, rest) in directives(text) {
        match word.as_str() {
            "degree" => {
                degree = Some(rest.parse::<i32>().map_err(|_| perr(line, 8, format!("bad degree {rest}")))?);
            }
            "der" => {
                let (name, expr) = assignment(&rest, line)?;
                let i = alg.gen_index(&name).ok_or_else(|| perr(line, 5, format!("unknown generator {name}")))?;
                values[i] = parse_elem_at(alg, &expr, line)?;
            }
            other => return Err(perr(line, 1, format!("unknown directive {other}"))),
        }
    }
    let degree = degree.ok_or_else(|| perr(1, 1, "missing degree line".to_string()))?;
    crate::Derivation::new(alg.clone(), degree, values)
}

/// Canonical text form. `artin_ref` is written after `base artin` when the
/// coefficient ring is not ℚ.
pub fn serialize_algebra(alg: &Algebra, artin_ref: Option<&str>) -> String {
    let mut s = String::new();
    if alg.base.is_field() {
        s.push_str("base Q\n");
    } else {
        s.push_str(&format!("base artin {}\n", artin_ref.unwrap_or("artin.dga")));
    }
    s.push_str(match alg.regime {
        Regime::Nonpositive => "regime nonpositive\n",
        Regime::Unbounded => "regime unbounded\n",
    });
    for g in &alg.gens {
        s.push_str(&format!("gen {} {}\n", g.name, g.degree));
    }
    for (i, g) in alg.gens.iter().enumerate() {
        if !alg.diff[i].is_zero() {
            s.push_str(&format!("diff {} = {}\n", g.name, alg.fmt(&alg.diff[i])));
        }
    }
    for r in &alg.rels.generators {
        s.push_str(&format!("rel {}\n", alg.fmt(r)));
    }
    s
}

/// Presentation text of a coefficient ring, if it has one.
pub fn serialize_artin(a: &ArtinRing) -> Option<String> {
    a.presentation.as_ref().map(|p| serialize_algebra(p, None))
}

/// Key-value lines `word rest`, comments stripped, with line numbers.
pub fn directives(text: &str) -> Vec<(usize, String, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let l = strip_comment(raw).trim();
            if l.is_empty() {
                return None;
            }
            let (w, r) = match l.find(char::is_whitespace) {
                Some(k) => (&l[..k], l[k..].trim()),
                None => (l, ""),
            };
            Some((i + 1, w.to_string(), r.to_string()))
        })
        .collect()
}

/// Parses `name = expr` into its parts.
pub fn assignment(rest: &str, line: usize) -> Result<(String, String)> {
    let (n, e, _) = split_assignment(rest, line, 1)?;
    Ok((n, e))
}

/// Evaluates `expr` at a given file line, reporting errors there.
pub fn parse_elem_at(alg: &Algebra, s: &str, line: usize) -> Result<Elem> {
    let e = parse_expr_at(s, line, 1)?;
    Ok(alg.normalize(&eval(alg, &e, line)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "base Q\nregime unbounded\ngen x 1\ngen y -1\ndiff y = y*x\n";
        let a = parse_algebra(text, None).unwrap();
        let s = serialize_algebra(&a, None);
        assert!(s.contains("diff y = -x*y"));
        let b = parse_algebra(&s, None).unwrap();
        assert_eq!(b, a);
        assert_eq!(serialize_algebra(&b, None), s);
    }

    #[test]
    fn errors_have_positions() {
        match parse_algebra("gen x 0\ndiff x = x +* 2\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_algebra("frobnicate\n", None), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn degree_mismatch() {
        let r = parse_algebra("gen x 0\ngen y -1\ndiff y = y\n", None);
        assert!(matches!(r, Err(Error::DegreeMismatch { .. })));
    }
}

//! The line-oriented workspace language.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cdc::{section_context, standard_context, CdcMap};
use crate::polycore::{parse_polynomial, CoefficientDomain, Polynomial, VariableContext};
use crate::presentations::{AlgebraMorphism, AlgebraPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WorkspaceError {
    #[error("{loc}: expected {}, found {found}", expected.join(" or "))]
    Parse { loc: Location, expected: Vec<String>, found: String },
    #[error("{loc}: duplicate {kind} `{name}` (first declared at {first})")]
    DuplicateName { kind: &'static str, name: String, loc: Location, first: Location },
    #[error("{loc}: unresolved {kind} `{name}`")]
    UnresolvedReference { kind: &'static str, name: String, loc: Location },
    #[error("{loc}: {message}")]
    Invalid { loc: Location, message: String },
}

#[derive(Clone, Debug)]
pub struct AlgebraDecl {
    pub name: String,
    /// Declared with `base` rather than `algebra`.
    pub is_base: bool,
    pub base: Option<String>,
    pub vars: Vec<String>,
    /// As written, in the flattened context (base variables first).
    pub relations: Vec<Polynomial>,
    pub presentation: Arc<AlgebraPresentation>,
}

#[derive(Clone, Debug)]
pub struct MorphismDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub over: Option<String>,
    pub images: Vec<(String, Polynomial)>,
    pub morphism: AlgebraMorphism,
}

#[derive(Clone, Debug)]
pub struct SectionDecl {
    pub name: String,
    pub for_map: String,
    pub map: CdcMap,
}

/// Parsed workspace: named entities in declaration order.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: CoefficientDomain,
    field_declared: bool,
    pub algebras: Vec<AlgebraDecl>,
    pub morphisms: Vec<MorphismDecl>,
    pub cdcmaps: Vec<CdcMap>,
    pub sections: Vec<SectionDecl>,
    pub locations: BTreeMap<(&'static str, String), Location>,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            field: CoefficientDomain::Rationals,
            field_declared: false,
            algebras: vec![],
            morphisms: vec![],
            cdcmaps: vec![],
            sections: vec![],
            locations: BTreeMap::new(),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Cursor<'a> {
    fn loc_at(&self, pos: usize) -> Location {
        Location { line: self.line, col: self.col0 + self.src[..pos].chars().count() + 1 }
    }

    fn loc(&self) -> Location {
        self.loc_at(self.pos)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn found(&self) -> String {
        match self.src[self.pos..].split_whitespace().next() {
            Some(t) => format!("`{t}`"),
            None => "end of statement".into(),
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, WorkspaceError> {
        Err(WorkspaceError::Parse { loc: self.loc(), expected: expected.iter().map(|s| s.to_string()).collect(), found: self.found() })
    }

    fn ident(&mut self, what: &str) -> Result<(String, Location), WorkspaceError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            _ => return self.fail(&[what]),
        }
        while let Some(c) = self.peek() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok((self.src[start..self.pos].to_string(), self.loc_at(start)))
    }

    fn number(&mut self) -> Result<u64, WorkspaceError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().or_else(|_| {
            self.pos = start;
            self.fail(&["a number"])
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(sym) {
            let after = self.src[self.pos + sym.len()..].chars().next();
            let word = sym.chars().all(is_ident_char);
            if word && after.is_some_and(is_ident_char) {
                return false;
            }
            self.pos += sym.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), WorkspaceError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(&[&format!("`{sym}`")])
        }
    }

    fn end(&mut self) -> Result<(), WorkspaceError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.fail(&["end of statement"])
        }
    }

    /// Contents of a bracketed group, split at top-level commas, with start offsets.
    fn group(&mut self, open: char, close: char) -> Result<Vec<(usize, &'a str)>, WorkspaceError> {
        self.expect(&open.to_string())?;
        let start = self.pos;
        let mut depth = 0usize;
        let mut pieces = Vec::new();
        let mut piece_start = start;
        for (i, c) in self.src[start..].char_indices() {
            let at = start + i;
            match c {
                '(' | '{' => depth += 1,
                ')' | '}' if depth > 0 => depth -= 1,
                c2 if c2 == close && depth == 0 => {
                    pieces.push((piece_start, &self.src[piece_start..at]));
                    self.pos = at + c.len_utf8();
                    if pieces.len() == 1 && pieces[0].1.trim().is_empty() {
                        return Ok(vec![]);
                    }
                    return Ok(pieces);
                }
                ',' if depth == 0 => {
                    pieces.push((piece_start, &self.src[piece_start..at]));
                    piece_start = at + 1;
                }
                _ => {}
            }
        }
        self.pos = self.src.len();
        self.fail(&[&format!("`{close}`")])
    }

    fn poly(&self, piece: (usize, &str), ctx: &Arc<VariableContext>, domain: CoefficientDomain) -> Result<Polynomial, WorkspaceError> {
        let (off, text) = piece;
        let lead = text.len() - text.trim_start().len();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(WorkspaceError::Parse { loc: self.loc_at(off), expected: vec!["a polynomial".into()], found: "nothing".into() });
        }
        parse_polynomial(trimmed, ctx, domain).map_err(|e| {
            let at = off + lead + e.offset.min(trimmed.len());
            let found = trimmed[e.offset.min(trimmed.len())..].split_whitespace().next().map(|t| format!("`{t}`")).unwrap_or_else(|| "end of polynomial".into());
            if e.expected.is_empty() {
                WorkspaceError::Invalid { loc: self.loc_at(at), message: e.message }
            } else {
                WorkspaceError::Parse { loc: self.loc_at(at), expected: e.expected, found }
            }
        })
    }
}

/// `Q`, `Fp <p>`, `F<p>`, and over CDC maps also `Z`, `N`.
fn parse_domain(c: &mut Cursor<'_>, allow_rigs: bool) -> Result<CoefficientDomain, WorkspaceError> {
    let expected: &[&str] = if allow_rigs { &["Q", "Fp <prime>", "Z", "N"] } else { &["Q", "Fp <prime>"] };
    c.skip_ws();
    let loc = c.loc();
    let (word, _) = c.ident("a coefficient domain").or_else(|_| c.fail(expected))?;
    let prime = |p: u64| {
        CoefficientDomain::prime_field(p).map_err(|e| WorkspaceError::Invalid { loc, message: e.to_string() })
    };
    match word.as_str() {
        "Q" => Ok(CoefficientDomain::Rationals),
        "Fp" => prime(c.number()?),
        "Z" if allow_rigs => Ok(CoefficientDomain::Integers),
        "N" if allow_rigs => Ok(CoefficientDomain::Naturals),
        w if w.len() > 1 && w.starts_with('F') && w[1..].chars().all(|ch| ch.is_ascii_digit()) => prime(w[1..].parse().unwrap_or(0)),
        _ => {
            c.pos -= word.len();
            c.fail(expected)
        }
    }
}

pub fn domain_text(d: CoefficientDomain) -> String {
    d.to_string()
}

impl Workspace {
    pub fn algebra(&self, name: &str) -> Option<&AlgebraDecl> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn morphism(&self, name: &str) -> Option<&MorphismDecl> {
        self.morphisms.iter().find(|m| m.name == name)
    }

    pub fn cdcmap(&self, name: &str) -> Option<&CdcMap> {
        self.cdcmaps.iter().find(|m| m.name() == name)
    }

    pub fn section(&self, name: &str) -> Option<&SectionDecl> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn declare(&mut self, kind: &'static str, name: &str, loc: Location) -> Result<(), WorkspaceError> {
        if let Some(first) = self.locations.get(&(kind, name.to_string())) {
            return Err(WorkspaceError::DuplicateName { kind, name: name.into(), loc, first: *first });
        }
        self.locations.insert((kind, name.to_string()), loc);
        Ok(())
    }

    fn resolve_algebra(&self, name: &str, loc: Location) -> Result<&AlgebraDecl, WorkspaceError> {
        self.algebra(name).ok_or(WorkspaceError::UnresolvedReference { kind: "algebra", name: name.into(), loc })
    }

    fn statement(&mut self, c: &mut Cursor<'_>) -> Result<(), WorkspaceError> {
        c.skip_ws();
        if c.pos == c.src.len() {
            return Ok(());
        }
        if c.eat("field") {
            let loc = c.loc();
            if self.field_declared || !self.algebras.is_empty() {
                return Err(WorkspaceError::Invalid { loc, message: "the field must be declared once, before any algebra".into() });
            }
            self.field = parse_domain(c, false)?;
            self.field_declared = true;
            return c.end();
        }
        if c.eat("base") {
            return self.algebra_stmt(c, true);
        }
        if c.eat("algebra") {
            return self.algebra_stmt(c, false);
        }
        if c.eat("morphism") {
            return self.morphism_stmt(c);
        }
        if c.eat("cdcmap") {
            return self.cdcmap_stmt(c);
        }
        if c.eat("section") {
            return self.section_stmt(c);
        }
        c.fail(&["`field`", "`base`", "`algebra`", "`morphism`", "`cdcmap`", "`section`"])
    }

    fn algebra_stmt(&mut self, c: &mut Cursor<'_>, is_base: bool) -> Result<(), WorkspaceError> {
        let (name, loc) = c.ident("an algebra name")?;
        let mut base = None;
        if !is_base && c.eat("over") {
            let (b, bloc) = c.ident("a base name")?;
            base = Some(self.resolve_algebra(&b, bloc)?.presentation.clone());
        }
        c.expect("=")?;
        c.expect("vars")?;
        let vars: Vec<String> = c
            .group('(', ')')?
            .into_iter()
            .map(|(off, t)| {
                let t = t.trim();
                if !t.is_empty() && t.starts_with(is_ident_start) && t.chars().all(is_ident_char) {
                    Ok(t.to_string())
                } else {
                    Err(WorkspaceError::Parse { loc: c.loc_at(off), expected: vec!["a variable name".into()], found: format!("`{t}`") })
                }
            })
            .collect::<Result<_, _>>()?;
        c.expect("/")?;
        let invalid = |e: crate::Error| WorkspaceError::Invalid { loc, message: e.to_string() };
        let ctx = AlgebraPresentation::context_for(base.as_deref(), &vars).map_err(invalid)?;
        let relations = c.group('(', ')')?.into_iter().map(|p| c.poly(p, &ctx, self.field)).collect::<Result<Vec<_>, _>>()?;
        c.end()?;
        self.declare("algebra", &name, loc)?;
        let presentation =
            Arc::new(AlgebraPresentation::new(name.clone(), self.field, base.clone(), vars.clone(), relations.clone()).map_err(invalid)?);
        self.algebras.push(AlgebraDecl {
            name,
            is_base,
            base: base.map(|b| b.name().to_string()),
            vars,
            relations,
            presentation,
        });
        Ok(())
    }

    fn morphism_stmt(&mut self, c: &mut Cursor<'_>) -> Result<(), WorkspaceError> {
        let (name, loc) = c.ident("a morphism name")?;
        c.expect(":")?;
        let (src, sloc) = c.ident("a source algebra")?;
        c.expect("->")?;
        let (tgt, tloc) = c.ident("a target algebra")?;
        let source = self.resolve_algebra(&src, sloc)?.presentation.clone();
        let target = self.resolve_algebra(&tgt, tloc)?.presentation.clone();
        let mut over = None;
        if c.eat("over") {
            let (b, bloc) = c.ident("a base name")?;
            self.resolve_algebra(&b, bloc)?;
            for (alg, l) in [(&source, sloc), (&target, tloc)] {
                if alg.base().map(|x| x.name()) != Some(b.as_str()) {
                    return Err(WorkspaceError::Invalid { loc: l, message: format!("`{}` is not an algebra over `{b}`", alg.name()) });
                }
            }
            over = Some(b);
        }
        c.expect("=")?;
        let (src_vars, target_ctx_owner): (Vec<String>, AlgebraPresentation) = if over.is_some() {
            (source.relative_vars().to_vec(), (*target).clone())
        } else {
            (source.ctx().names().to_vec(), target.flattened())
        };
        let pieces = c.group('{', '}')?;
        let mut images: Vec<Option<(String, Polynomial)>> = vec![None; src_vars.len()];
        for (off, text) in pieces {
            let Some(arrow) = text.find("->") else {
                return Err(WorkspaceError::Parse { loc: c.loc_at(off), expected: vec!["`<var> -> <poly>`".into()], found: format!("`{}`", text.trim()) });
            };
            let var = text[..arrow].trim();
            let vloc = c.loc_at(off + text.len() - text.trim_start().len());
            let Some(i) = src_vars.iter().position(|v| v == var) else {
                return Err(WorkspaceError::UnresolvedReference { kind: "source variable", name: var.into(), loc: vloc });
            };
            if images[i].is_some() {
                return Err(WorkspaceError::Invalid { loc: vloc, message: format!("image of `{var}` given twice") });
            }
            let p = c.poly((off + arrow + 2, &text[arrow + 2..]), target_ctx_owner.ctx(), self.field)?;
            images[i] = Some((var.to_string(), p));
        }
        c.end()?;
        let images: Vec<(String, Polynomial)> = images
            .into_iter()
            .enumerate()
            .map(|(i, im)| im.ok_or_else(|| WorkspaceError::Invalid { loc, message: format!("no image given for `{}`", src_vars[i]) }))
            .collect::<Result<_, _>>()?;
        self.declare("morphism", &name, loc)?;
        let morphism = AlgebraMorphism::new(name.clone(), source, target, images.iter().map(|(_, p)| p.clone()).collect(), over.is_some())
            .map_err(|e| WorkspaceError::Invalid { loc, message: e.to_string() })?;
        self.morphisms.push(MorphismDecl { name, source: src, target: tgt, over, images, morphism });
        Ok(())
    }

    fn cdcmap_stmt(&mut self, c: &mut Cursor<'_>) -> Result<(), WorkspaceError> {
        let (name, loc) = c.ident("a map name")?;
        c.expect(":")?;
        let n = c.number()? as usize;
        c.expect("->")?;
        let mloc = c.loc();
        let m = c.number()? as usize;
        c.expect("over")?;
        let domain = parse_domain(c, true)?;
        c.expect("=")?;
        let ctx = standard_context(n);
        let comps = c.group('(', ')')?.into_iter().map(|p| c.poly(p, &ctx, domain)).collect::<Result<Vec<_>, _>>()?;
        c.end()?;
        if comps.len() != m {
            return Err(WorkspaceError::Invalid { loc: mloc, message: format!("declared {m} components, found {}", comps.len()) });
        }
        self.declare("cdcmap", &name, loc)?;
        let map = CdcMap::new(name, domain, ctx, comps).map_err(|e| WorkspaceError::Invalid { loc, message: e.to_string() })?;
        self.cdcmaps.push(map);
        Ok(())
    }

    fn section_stmt(&mut self, c: &mut Cursor<'_>) -> Result<(), WorkspaceError> {
        let (name, loc) = c.ident("a section name")?;
        c.expect("for")?;
        let (f, floc) = c.ident("a cdcmap name")?;
        let map = self.cdcmap(&f).ok_or(WorkspaceError::UnresolvedReference { kind: "cdcmap", name: f.clone(), loc: floc })?;
        let (n, m, domain) = (map.arity(), map.coarity(), map.domain());
        c.expect("=")?;
        let ctx = section_context(n, m);
        let comps = c.group('(', ')')?.into_iter().map(|p| c.poly(p, &ctx, domain)).collect::<Result<Vec<_>, _>>()?;
        c.end()?;
        self.declare("section", &name, loc)?;
        let s = CdcMap::new(name.clone(), domain, ctx, comps).map_err(|e| WorkspaceError::Invalid { loc, message: e.to_string() })?;
        self.sections.push(SectionDecl { name, for_map: f, map: s });
        Ok(())
    }

    /// Canonical text; parsing it yields the same entities.
    pub fn to_text(&self) -> String {
        let join = |ps: &[Polynomial]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = format!("field {}\n", domain_text(self.field));
        for a in &self.algebras {
            let kw = if a.is_base { "base" } else { "algebra" };
            let over = a.base.as_ref().map(|b| format!(" over {b}")).unwrap_or_default();
            out += &format!("{kw} {}{over} = vars({}) / ({})\n", a.name, a.vars.join(", "), join(&a.relations));
        }
        for m in &self.morphisms {
            let over = m.over.as_ref().map(|b| format!(" over {b}")).unwrap_or_default();
            let ims = m.images.iter().map(|(v, p)| format!("{v} -> {p}")).collect::<Vec<_>>().join(", ");
            out += &format!("morphism {} : {} -> {}{over} = {{ {ims} }}\n", m.name, m.source, m.target);
        }
        for f in &self.cdcmaps {
            out += &format!("cdcmap {} : {} -> {} over {} = ({})\n", f.name(), f.arity(), f.coarity(), domain_text(f.domain()), join(f.components()));
        }
        for s in &self.sections {
            out += &format!("section {} for {} = ({})\n", s.name, s.for_map, join(s.map.components()));
        }
        out
    }
}

/// Parses a workspace; `;` separates statements like a newline, `#` starts a comment.
pub fn parse_workspace(text: &str) -> Result<Workspace, WorkspaceError> {
    let mut ws = Workspace::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut col0 = 0;
        for stmt in line.split(';') {
            let mut c = Cursor { src: stmt, pos: 0, line: i + 1, col0 };
            ws.statement(&mut c)?;
            col0 += stmt.chars().count() + 1;
        }
    }
    Ok(ws)
}

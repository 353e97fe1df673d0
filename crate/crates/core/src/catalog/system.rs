use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::dsl::{self, lex, nonneg_int, parse_expr, token_ident, Atom, Cursor, Tok, Token};
use super::linear::{left_inverse, solve_forms};
use crate::error::{Error, ParseError, Result};
use crate::exterior::{FormExpr, Gen, GenKind, MatrixForm, StructureTable};
use crate::scalar::{Coeff, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    Sl2r,
    O3,
    Su3,
    Custom,
}

impl Algebra {
    pub fn from_label(s: &str) -> Option<Algebra> {
        match s {
            "sl2r" => Some(Algebra::Sl2r),
            "o3" => Some(Algebra::O3),
            "su3" => Some(Algebra::Su3),
            "custom" => Some(Algebra::Custom),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Algebra::Sl2r => "sl2r",
            Algebra::O3 => "o3",
            Algebra::Su3 => "su3",
            Algebra::Custom => "custom",
        }
    }

    /// Label implied by a system name when no `algebra` line is given.
    fn implied_by(name: &str) -> Algebra {
        Algebra::from_label(name).unwrap_or(Algebra::Custom)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvatureMode {
    /// `dω` solved from `Θ = dΩ − Ω∧Ω` with `Θ` spanned by the curvature
    /// generators.
    Auto,
    /// `dω` given line by line and checked against the connection.
    Explicit,
}

/// A connection `Ω = Σ ω_l L_l` over constant matrices `L_l`, with its
/// curvature `Θ = Σ ϑ_l L_l` and the completed structure table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub name: String,
    pub algebra: Algebra,
    pub dim: usize,
    pub oneforms: Vec<Gen>,
    pub thetas: Vec<Gen>,
    pub pseudos: Vec<Symbol>,
    pub params: Vec<Symbol>,
    pub connection: MatrixForm,
    /// `Θ` written in the curvature generators.
    pub theta_matrix: MatrixForm,
    pub table: StructureTable,
    pub mode: CurvatureMode,
    pub traceless: bool,
    basis: Vec<Vec<Coeff>>,
    inverse: Vec<Vec<Coeff>>,
}

/// Raw declaration of a system before its structure equations are solved.
#[derive(Clone, Debug)]
pub struct SystemDecl {
    pub name: String,
    pub algebra: Option<Algebra>,
    pub oneforms: Vec<String>,
    pub pseudos: Vec<String>,
    pub params: Vec<String>,
    pub connection: MatrixForm,
    pub mode: CurvatureMode,
    pub traceless: bool,
    pub explicit: BTreeMap<String, FormExpr>,
}

/// Name of the curvature generator paired with a one-form.
pub fn theta_name(oneform: &str) -> String {
    match oneform.strip_prefix('w') {
        Some(rest) if !rest.is_empty() => format!("th{}", rest),
        _ => format!("th{}", oneform),
    }
}

impl SystemSpec {
    pub fn build(decl: SystemDecl) -> Result<SystemSpec> {
        let n = decl.connection.rows();
        if !decl.connection.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "connection is {}x{}, expected square",
                decl.connection.rows(),
                decl.connection.cols()
            )));
        }
        let algebra = decl.algebra.unwrap_or_else(|| Algebra::implied_by(&decl.name));
        let traceless = decl.traceless || algebra != Algebra::Custom;
        let oneforms: Vec<Gen> = decl.oneforms.iter().map(|s| Gen::omega(s)).collect();
        let thetas: Vec<Gen> = decl.oneforms.iter().map(|s| Gen::theta(&theta_name(s))).collect();
        let pseudos: Vec<Symbol> = decl.pseudos.iter().map(|s| Symbol::new(s)).collect();
        let params: Vec<Symbol> = decl.params.iter().map(|s| Symbol::new(s)).collect();

        let mut seen = BTreeSet::new();
        for name in decl
            .oneforms
            .iter()
            .chain(&decl.pseudos)
            .chain(&decl.params)
            .cloned()
            .chain(thetas.iter().map(|g| g.name.to_string()))
        {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name));
            }
        }

        if traceless && !decl.connection.trace()?.is_zero() {
            return Err(Error::NotTraceless);
        }

        // Columns of the basis matrix are the vectorized L_l.
        let mut basis = vec![vec![Coeff::zero(); oneforms.len()]; n * n];
        for i in 0..n {
            for j in 0..n {
                for (word, c) in decl.connection.get(i, j).terms() {
                    let k = match (word.as_slice(), c.as_constant()) {
                        ([g], Some(_)) => oneforms.iter().position(|o| o == g),
                        _ => None,
                    };
                    let k = k.ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "connection entry ({},{}) must be a constant combination of the declared one-forms",
                            i + 1,
                            j + 1
                        ))
                    })?;
                    basis[i * n + j][k] = c.as_constant().expect("checked");
                }
            }
        }
        let inverse = left_inverse(&basis)?;

        let theta_entries: Vec<FormExpr> = (0..n * n)
            .map(|e| {
                basis[e].iter().zip(&thetas).fold(FormExpr::zero(), |acc, (c, th)| {
                    &acc + &FormExpr::gen(th.clone()).scale_coeff(c)
                })
            })
            .collect();
        let theta_matrix = MatrixForm::new(n, n, theta_entries)?;

        let mut table = StructureTable::new();
        for p in &pseudos {
            table.add_coordinate(p.name());
        }
        for p in &params {
            table.add_constant(p.name());
        }

        let omega = &decl.connection;
        let quad = omega.wedge(omega)?;
        match decl.mode {
            CurvatureMode::Auto => {
                let dw = solve_forms(&basis, &inverse, quad.entries()).ok_or_else(|| {
                    Error::Inconsistent("Ω∧Ω leaves the span of the connection matrices".into())
                })?;
                for ((w, th), q) in oneforms.iter().zip(&thetas).zip(dw) {
                    table.set_gen(w.clone(), &FormExpr::gen(th.clone()) + &q);
                }
            }
            CurvatureMode::Explicit => {
                for (name, f) in &decl.explicit {
                    if !decl.oneforms.contains(name) {
                        return Err(Error::InvalidInput(format!("structure equation for undeclared one-form `{}`", name)));
                    }
                    f.expect_degree(2, &format!("d{}", name))?;
                    table.set_gen(Gen::omega(name), f.clone());
                }
                if let Some(w) = oneforms.iter().find(|w| table.gen_entry(w).is_none()) {
                    return Err(Error::MissingTableEntry(w.label()));
                }
                let theta = omega.d(&table)?.sub(&quad)?;
                if theta != theta_matrix {
                    return Err(Error::Inconsistent(format!(
                        "dΩ − Ω∧Ω = {} but the curvature generators give {}",
                        theta, theta_matrix
                    )));
                }
            }
        }

        // Bianchi: dΘ = Ω∧Θ − Θ∧Ω fixes every dϑ.
        let rhs = omega.wedge(&theta_matrix)?.sub(&theta_matrix.wedge(omega)?)?;
        let dth = solve_forms(&basis, &inverse, rhs.entries())
            .ok_or_else(|| Error::Inconsistent("Ω∧Θ − Θ∧Ω leaves the span of the connection matrices".into()))?;
        for (th, f) in thetas.iter().zip(dth) {
            table.set_gen(th.clone(), f);
        }

        Ok(SystemSpec {
            name: decl.name,
            algebra,
            dim: n,
            oneforms,
            thetas,
            pseudos,
            params,
            connection: decl.connection,
            theta_matrix,
            table,
            mode: decl.mode,
            traceless,
            basis,
            inverse,
        })
    }

    /// Expand a matrix of forms in the connection's generator matrices:
    /// `M = Σ c_l L_l`. `None` when `M` leaves the span.
    pub fn coordinates(&self, m: &MatrixForm) -> Option<Vec<FormExpr>> {
        solve_forms(&self.basis, &self.inverse, m.entries())
    }

    /// The constant matrix `L_l` paired with one-form `l` (zero-based).
    pub fn generator_matrix(&self, l: usize) -> Vec<Vec<Coeff>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.basis[i * self.dim + j][l].clone()).collect()).collect()
    }

    pub fn d_omega(&self, l: usize) -> &FormExpr {
        self.table.gen_entry(&self.oneforms[l]).expect("table is complete")
    }

    /// Name resolver for expressions over this system.
    pub fn resolver(&self) -> impl Fn(&str) -> Option<Atom> + '_ {
        move |name: &str| {
            if let Some(g) = self.oneforms.iter().chain(&self.thetas).find(|g| g.name.name() == name) {
                return Some(Atom::Gen(g.clone()));
            }
            if let Some(s) = self.pseudos.iter().chain(&self.params).find(|s| s.name() == name) {
                return Some(Atom::Sym(s.clone()));
            }
            if let Some(rest) = name.strip_prefix('d') {
                if self.pseudos.iter().any(|s| s.name() == rest) {
                    return Some(Atom::Gen(Gen::diff(rest)));
                }
            }
            None
        }
    }

    /// Render back to the description language.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("system {}\n", self.name));
        if self.algebra != Algebra::implied_by(&self.name) {
            out.push_str(&format!("algebra {}\n", self.algebra));
        }
        out.push_str(&format!("dim {}\n", self.dim));
        let names = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
        out.push_str(&format!("oneforms {}\n", names(&mut self.oneforms.iter().map(|g| g.name.to_string()))));
        out.push_str(&format!("pseudos {}\n", names(&mut self.pseudos.iter().map(|s| s.to_string()))));
        if !self.params.is_empty() {
            out.push_str(&format!("params {}\n", names(&mut self.params.iter().map(|s| s.to_string()))));
        }
        if self.traceless && self.algebra == Algebra::Custom {
            out.push_str("traceless\n");
        }
        let rows: Vec<String> = (0..self.dim)
            .map(|i| format!("[{}]", self.connection.row(i).iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        out.push_str(&format!("connection [{}]\n", rows.join(", ")));
        match self.mode {
            CurvatureMode::Auto => out.push_str("curvature auto\n"),
            CurvatureMode::Explicit => {
                out.push_str("curvature explicit\n");
                for w in &self.oneforms {
                    out.push_str(&format!("d {} = {}\n", w.name, self.table.gen_entry(w).expect("complete")));
                }
            }
        }
        out
    }
}

/// Parse and build a system description.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let decl = parse_decl(text)?;
    SystemSpec::build(decl)
}

struct Pending {
    name: Option<String>,
    algebra: Option<Algebra>,
    dim: Option<(usize, usize, usize)>,
    oneforms: Vec<String>,
    pseudos: Vec<String>,
    params: Vec<String>,
    connection: Option<(Vec<Vec<FormExpr>>, usize, usize)>,
    mode: CurvatureMode,
    traceless: bool,
    explicit: BTreeMap<String, FormExpr>,
}

const RESERVED: [&str; 3] = ["i", "sqrt3", "exp"];

fn ident_list<'t>(cur: &mut Cursor<'t>, what: &str) -> Result<Vec<&'t Token>, ParseError> {
    let mut v = Vec::new();
    while let Some(t @ Token { tok: Tok::Ident(_), .. }) = cur.peek() {
        cur.next();
        v.push(t);
    }
    if v.is_empty() {
        return Err(cur.error(format!("expected at least one {}", what)));
    }
    Ok(v)
}

fn declare(seen: &mut BTreeSet<String>, t: &Token, what: &str) -> Result<String, Error> {
    let s = token_ident(t).to_string();
    if RESERVED.contains(&s.as_str()) {
        return Err(ParseError::new(t.line, t.col, format!("`{}` cannot name a {}", s, what)).into());
    }
    if !seen.insert(s.clone()) {
        return Err(Error::DuplicateName(s));
    }
    Ok(s)
}

pub fn parse_decl(text: &str) -> Result<SystemDecl> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let mut p = Pending {
        name: None,
        algebra: None,
        dim: None,
        oneforms: Vec::new(),
        pseudos: Vec::new(),
        params: Vec::new(),
        connection: None,
        mode: CurvatureMode::Auto,
        traceless: false,
        explicit: BTreeMap::new(),
    };
    let mut seen = BTreeSet::new();

    while !cur.at_end() {
        if cur.eat(&Tok::Newline) {
            continue;
        }
        let kw = cur.ident("a statement keyword")?;
        match token_ident(kw) {
            "system" => p.name = Some(token_ident(cur.ident("a system name")?).to_string()),
            "algebra" => {
                let t = cur.ident("an algebra label")?;
                p.algebra = Some(Algebra::from_label(token_ident(t)).ok_or_else(|| {
                    ParseError::new(t.line, t.col, format!("unknown algebra `{}`", token_ident(t)))
                })?);
            }
            "dim" => {
                let t = cur.next().ok_or_else(|| cur.error("expected a dimension"))?;
                let n = nonneg_int(t).ok_or_else(|| ParseError::new(t.line, t.col, "expected a positive integer"))?;
                p.dim = Some((n, kw.line, kw.col));
            }
            "oneforms" => {
                for t in ident_list(&mut cur, "one-form name")? {
                    p.oneforms.push(declare(&mut seen, t, "one-form")?);
                }
            }
            "pseudos" => {
                for t in ident_list(&mut cur, "pseudopotential name")? {
                    p.pseudos.push(declare(&mut seen, t, "pseudopotential")?);
                }
            }
            "params" => {
                for t in ident_list(&mut cur, "parameter name")? {
                    p.params.push(declare(&mut seen, t, "parameter")?);
                }
            }
            "traceless" => p.traceless = true,
            "curvature" => {
                let t = cur.ident("`auto` or `explicit`")?;
                p.mode = match token_ident(t) {
                    "auto" => CurvatureMode::Auto,
                    "explicit" => CurvatureMode::Explicit,
                    other => return Err(ParseError::new(t.line, t.col, format!("expected `auto` or `explicit`, got `{}`", other)).into()),
                };
            }
            "connection" => {
                let resolver = decl_resolver(&p);
                let rows = parse_matrix(&mut cur, &resolver)?;
                p.connection = Some((rows, kw.line, kw.col));
            }
            "d" => {
                let t = cur.ident("a one-form name")?;
                let name = token_ident(t).to_string();
                if !p.oneforms.contains(&name) {
                    return Err(ParseError::new(t.line, t.col, format!("`{}` is not a declared one-form", name)).into());
                }
                if p.explicit.contains_key(&name) {
                    return Err(Error::DuplicateName(format!("d {}", name)));
                }
                cur.expect(&Tok::Eq, "`=`")?;
                let resolver = decl_resolver(&p);
                let f = parse_expr(&mut cur, &resolver)?;
                p.explicit.insert(name, f);
            }
            other => return Err(ParseError::new(kw.line, kw.col, format!("unknown statement `{}`", other)).into()),
        }
        match cur.peek() {
            None => {}
            Some(Token { tok: Tok::Newline, .. }) => {
                cur.next();
            }
            Some(t) => {
                return Err(ParseError::new(t.line, t.col, format!("unexpected {}", dsl::describe(&t.tok))).into())
            }
        }
    }

    let missing = |what: &str| -> Error {
        let (l, c) = toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        ParseError::new(l, c, format!("missing `{}` statement", what)).into()
    };
    let name = p.name.clone().ok_or_else(|| missing("system"))?;
    let (dim, dl, dc) = p.dim.ok_or_else(|| missing("dim"))?;
    if p.oneforms.is_empty() {
        return Err(missing("oneforms"));
    }
    if p.pseudos.is_empty() {
        return Err(missing("pseudos"));
    }
    let (rows, cl, cc) = p.connection.take().ok_or_else(|| missing("connection"))?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        return Err(Error::DimensionMismatch(format!(
            "{}:{}: connection is {}x{} but dim is {}",
            cl,
            cc,
            rows.len(),
            cols,
            dim
        )));
    }
    if p.pseudos.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{}:{}: {} pseudopotentials declared for dimension {}",
            dl,
            dc,
            p.pseudos.len(),
            dim
        )));
    }
    if p.mode == CurvatureMode::Auto && !p.explicit.is_empty() {
        return Err(Error::InvalidInput("structure equations given under `curvature auto`".into()));
    }
    for row in &rows {
        for f in row {
            f.expect_degree(1, "connection entry")?;
        }
    }
    Ok(SystemDecl {
        name,
        algebra: p.algebra,
        oneforms: p.oneforms,
        pseudos: p.pseudos,
        params: p.params,
        connection: MatrixForm::from_rows(rows)?,
        mode: p.mode,
        traceless: p.traceless,
        explicit: p.explicit,
    })
}

fn decl_resolver(p: &Pending) -> impl Fn(&str) -> Option<Atom> {
    let oneforms = p.oneforms.clone();
    let pseudos = p.pseudos.clone();
    let params = p.params.clone();
    move |name: &str| {
        if oneforms.iter().any(|w| w == name) {
            return Some(Atom::Gen(Gen::omega(name)));
        }
        if let Some(w) = oneforms.iter().find(|w| theta_name(w) == name) {
            return Some(Atom::Gen(Gen::theta(&theta_name(w))));
        }
        if pseudos.iter().chain(&params).any(|s| s == name) {
            return Some(Atom::Sym(Symbol::new(name)));
        }
        let rest = name.strip_prefix('d')?;
        pseudos.iter().any(|s| s == rest).then(|| Atom::Gen(Gen::new(GenKind::Differential, rest)))
    }
}

fn parse_matrix(cur: &mut Cursor<'_>, resolve: &dsl::Resolver<'_>) -> Result<Vec<Vec<FormExpr>>, ParseError> {
    cur.expect(&Tok::LBracket, "`[`")?;
    let mut rows = Vec::new();
    loop {
        cur.expect(&Tok::LBracket, "`[` opening a row")?;
        let mut row = Vec::new();
        loop {
            row.push(parse_expr(cur, resolve)?);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::RBracket, "`]` closing a row")?;
        rows.push(row);
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    cur.expect(&Tok::RBracket, "`]`")?;
    Ok(rows)
}

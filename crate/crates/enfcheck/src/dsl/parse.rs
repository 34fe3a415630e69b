//! Recursive-descent parser for the model language.

use std::collections::BTreeSet;

use super::lex::{lex, Tok};
use super::{Decl, DslError, LtsDecl, ModelDocument, NetworkDecl, PolicyDecl, Pos};
use crate::compose::TargetMap;
use crate::edit2io::CompletionPolicy;
use crate::model::{Action, CtlFormula, EditAutomaton, EditTransition, Trace};

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(DslError::syntax(pos, format!("expected {want}, found {t}"))),
            None => Err(DslError::syntax(pos, format!("expected {want}, found end of input"))),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, DslError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Word(w)) => Ok(w),
            Some(t) => Err(DslError::syntax(pos, format!("expected {what}, found {t}"))),
            None => Err(DslError::syntax(pos, format!("expected {what}, found end of input"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        let pos = self.pos();
        let w = self.word(&format!("`{kw}`"))?;
        if w == kw {
            Ok(())
        } else {
            Err(DslError::syntax(pos, format!("expected `{kw}`, found `{w}`")))
        }
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.peek() == Some(&Tok::Word(kw.into())) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    /// `ID ("," ID)*`
    fn id_list(&mut self, what: &str) -> Result<Vec<String>, DslError> {
        let mut out = vec![self.word(what)?];
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            out.push(self.word(what)?);
        }
        Ok(out)
    }

    /// whitespace-separated ids up to `;`
    fn id_seq(&mut self) -> Result<Vec<String>, DslError> {
        let mut out = Vec::new();
        while let Some(Tok::Word(_)) = self.peek() {
            out.push(self.word("identifier")?);
        }
        Ok(out)
    }
}

/// Parses a complete document and resolves every cross-reference.
pub fn parse_document(text: &str) -> Result<ModelDocument, DslError> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|(_, p)| Pos { line: p.line, col: p.col + 1 })
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut p = Parser { toks, at: 0, end };
    let mut doc = ModelDocument::default();
    let mut positions: Vec<Pos> = Vec::new();
    while p.peek().is_some() {
        let pos = p.pos();
        let kw = p.word("declaration keyword")?;
        let decl = match kw.as_str() {
            "edit_automaton" => Decl::Edit(parse_edit(&mut p)?),
            "lts" => Decl::Lts(parse_lts(&mut p)?),
            "policy" => Decl::Policy(parse_policy_decl(&mut p)?),
            "network" => Decl::Network(parse_network(&mut p)?),
            other => {
                return Err(DslError::syntax(
                    pos,
                    format!("expected `edit_automaton`, `lts`, `policy` or `network`, found `{other}`"),
                ))
            }
        };
        doc.declarations.push(decl);
        positions.push(pos);
    }
    resolve(&doc, &positions)?;
    Ok(doc)
}

fn parse_edit(p: &mut Parser) -> Result<EditAutomaton, DslError> {
    let name = p.word("automaton name")?;
    p.expect(Tok::LBrace)?;
    p.keyword("alphabet")?;
    let alphabet: BTreeSet<Action> = p
        .id_list("action")?
        .into_iter()
        .map(Action::new)
        .collect();
    p.expect(Tok::Semi)?;
    p.keyword("initial")?;
    let initial = p.word("state")?;
    p.expect(Tok::Semi)?;
    p.keyword("states")?;
    let states: BTreeSet<String> = p.id_list("state")?.into_iter().collect();
    p.expect(Tok::Semi)?;
    let mut transitions = Vec::new();
    while p.eat_word("trans") {
        let from = p.word("state")?;
        p.expect(Tok::Arrow)?;
        let to = p.word("state")?;
        p.keyword("on")?;
        let on = Action::new(p.word("action")?);
        p.keyword("emit")?;
        p.expect(Tok::LBracket)?;
        let emit = if p.peek() == Some(&Tok::RBracket) {
            Trace::empty()
        } else {
            Trace(p.id_list("action")?.into_iter().map(Action::new).collect())
        };
        p.expect(Tok::RBracket)?;
        p.expect(Tok::Semi)?;
        transitions.push(EditTransition { from, on, to, emit });
    }
    p.expect(Tok::RBrace)?;
    Ok(EditAutomaton {
        name,
        alphabet,
        states,
        initial,
        transitions,
    })
}

fn parse_lts(p: &mut Parser) -> Result<LtsDecl, DslError> {
    let name = p.word("model name")?;
    p.expect(Tok::LBrace)?;
    p.keyword("initial")?;
    let initial = p.word("state")?;
    p.expect(Tok::Semi)?;
    p.keyword("states")?;
    let states = p.id_list("state")?;
    p.expect(Tok::Semi)?;
    let mut transitions = Vec::new();
    while p.eat_word("trans") {
        let from = p.word("state")?;
        p.expect(Tok::Arrow)?;
        let to = p.word("state")?;
        p.keyword("on")?;
        let on = Action::new(p.word("action")?);
        p.expect(Tok::Semi)?;
        transitions.push((from, on, to));
    }
    p.expect(Tok::RBrace)?;
    Ok(LtsDecl {
        name,
        initial,
        states,
        transitions,
    })
}

fn parse_policy_decl(p: &mut Parser) -> Result<PolicyDecl, DslError> {
    let name = p.word("policy name")?;
    p.expect(Tok::Eq)?;
    let formula = parse_formula(p)?;
    p.expect(Tok::Semi)?;
    Ok(PolicyDecl { name, formula })
}

fn parse_network(p: &mut Parser) -> Result<NetworkDecl, DslError> {
    let name = p.word("network name")?;
    p.expect(Tok::LBrace)?;
    p.keyword("enforcers")?;
    let enforcers = p.id_seq()?;
    p.expect(Tok::Semi)?;
    p.keyword("app")?;
    let app = p.word("model name")?;
    p.expect(Tok::Semi)?;
    p.keyword("resource")?;
    let resources = p.id_seq()?;
    p.expect(Tok::Semi)?;
    let mut targets = TargetMap::new();
    let mut completion = CompletionPolicy::Identity;
    loop {
        if p.eat_word("target") {
            let pos = p.pos();
            let action = Action::new(p.word("action")?);
            p.expect(Tok::Arrow)?;
            let component = p.word("component")?;
            p.expect(Tok::Semi)?;
            if targets.insert(action.clone(), component).is_some() {
                return Err(DslError::syntax(
                    pos,
                    format!("action `{action}` routed twice"),
                ));
            }
        } else if p.eat_word("completion") {
            let pos = p.pos();
            completion = match p.word("`identity` or `strict`")?.as_str() {
                "identity" => CompletionPolicy::Identity,
                "strict" => CompletionPolicy::Strict,
                other => {
                    return Err(DslError::syntax(
                        pos,
                        format!("expected `identity` or `strict`, found `{other}`"),
                    ))
                }
            };
            p.expect(Tok::Semi)?;
        } else {
            break;
        }
    }
    p.expect(Tok::RBrace)?;
    Ok(NetworkDecl {
        name,
        enforcers,
        app,
        resources,
        targets,
        completion,
    })
}

/// Parses a standalone policy expression.
pub fn parse_policy(text: &str) -> Result<CtlFormula, DslError> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|(_, p)| Pos { line: p.line, col: p.col + 1 })
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut p = Parser { toks, at: 0, end };
    let f = parse_formula(&mut p)?;
    if let Some(t) = p.peek() {
        return Err(DslError::syntax(p.pos(), format!("trailing {t} after formula")));
    }
    Ok(f)
}

/// `expr := or ("=>" expr)?` — implication is right-associative.
fn parse_formula(p: &mut Parser) -> Result<CtlFormula, DslError> {
    let lhs = parse_or(p)?;
    if p.peek() == Some(&Tok::Impl) {
        p.at += 1;
        let rhs = parse_formula(p)?;
        return Ok(CtlFormula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(p: &mut Parser) -> Result<CtlFormula, DslError> {
    let mut f = parse_and(p)?;
    while p.peek() == Some(&Tok::OrOr) {
        p.at += 1;
        let rhs = parse_and(p)?;
        f = CtlFormula::Or(Box::new(f), Box::new(rhs));
    }
    Ok(f)
}

fn parse_and(p: &mut Parser) -> Result<CtlFormula, DslError> {
    let mut f = parse_unary(p)?;
    while p.peek() == Some(&Tok::AndAnd) {
        p.at += 1;
        let rhs = parse_unary(p)?;
        f = CtlFormula::And(Box::new(f), Box::new(rhs));
    }
    Ok(f)
}

fn parse_unary(p: &mut Parser) -> Result<CtlFormula, DslError> {
    let pos = p.pos();
    match p.next() {
        Some(Tok::Bang) => Ok(CtlFormula::not(parse_unary(p)?)),
        Some(Tok::LParen) => {
            let f = parse_formula(p)?;
            p.expect(Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Word(w)) => match w.as_str() {
            "true" => Ok(CtlFormula::True),
            "false" => Ok(CtlFormula::False),
            "deadlock" => Ok(CtlFormula::Deadlock),
            "act" => {
                p.expect(Tok::LParen)?;
                let id = p.word("action")?;
                p.expect(Tok::RParen)?;
                Ok(CtlFormula::Atom(id))
            }
            "AG" => Ok(CtlFormula::ag(parse_unary(p)?)),
            "AX" => Ok(CtlFormula::ax(parse_unary(p)?)),
            "AF" => Ok(CtlFormula::Af(Box::new(parse_unary(p)?))),
            "EG" => Ok(CtlFormula::Eg(Box::new(parse_unary(p)?))),
            "EX" => Ok(CtlFormula::Ex(Box::new(parse_unary(p)?))),
            "EF" => Ok(CtlFormula::Ef(Box::new(parse_unary(p)?))),
            "A" => {
                p.expect(Tok::LBracket)?;
                let lhs = parse_formula(p)?;
                let kwpos = p.pos();
                let kw = p.word("`U` or `W`")?;
                let rhs = parse_formula(p)?;
                p.expect(Tok::RBracket)?;
                match kw.as_str() {
                    "U" => Ok(CtlFormula::Au(Box::new(lhs), Box::new(rhs))),
                    "W" => Ok(CtlFormula::aw(lhs, rhs)),
                    other => Err(DslError::syntax(
                        kwpos,
                        format!("expected `U` or `W`, found `{other}`"),
                    )),
                }
            }
            "E" => {
                p.expect(Tok::LBracket)?;
                let lhs = parse_formula(p)?;
                p.keyword("U")?;
                let rhs = parse_formula(p)?;
                p.expect(Tok::RBracket)?;
                Ok(CtlFormula::Eu(Box::new(lhs), Box::new(rhs)))
            }
            other => Err(DslError::syntax(
                pos,
                format!("expected a formula, found `{other}`"),
            )),
        },
        Some(t) => Err(DslError::syntax(pos, format!("expected a formula, found {t}"))),
        None => Err(DslError::syntax(pos, "expected a formula, found end of input")),
    }
}

/// Document-level checks: names unique per kind, every edit automaton
/// internally consistent with its declared states, every network
/// reference resolved.
fn resolve(doc: &ModelDocument, positions: &[Pos]) -> Result<(), DslError> {
    let mut edit_names = BTreeSet::new();
    let mut lts_names = BTreeSet::new();
    let mut policy_names = BTreeSet::new();
    let mut network_names = BTreeSet::new();
    for (decl, &pos) in doc.declarations.iter().zip(positions) {
        match decl {
            Decl::Edit(e) => {
                if !edit_names.insert(e.name.clone()) {
                    return Err(DslError::DuplicateName {
                        pos,
                        kind: "edit_automaton",
                        name: e.name.clone(),
                    });
                }
                if !e.states.contains(&e.initial) {
                    return Err(DslError::Unresolved {
                        pos,
                        name: e.initial.clone(),
                    });
                }
                for t in &e.transitions {
                    for s in [&t.from, &t.to] {
                        if !e.states.contains(s) {
                            return Err(DslError::Unresolved { pos, name: s.clone() });
                        }
                    }
                }
            }
            Decl::Lts(l) => {
                if !lts_names.insert(l.name.clone()) {
                    return Err(DslError::DuplicateName {
                        pos,
                        kind: "lts",
                        name: l.name.clone(),
                    });
                }
                let states: BTreeSet<&String> = l.states.iter().collect();
                if states.len() != l.states.len() {
                    return Err(DslError::DuplicateName {
                        pos,
                        kind: "state",
                        name: l.name.clone(),
                    });
                }
                if !states.contains(&l.initial) {
                    return Err(DslError::Unresolved {
                        pos,
                        name: l.initial.clone(),
                    });
                }
                for (f, _, t) in &l.transitions {
                    for s in [f, t] {
                        if !states.contains(s) {
                            return Err(DslError::Unresolved { pos, name: s.clone() });
                        }
                    }
                }
            }
            Decl::Policy(pd) => {
                if !policy_names.insert(pd.name.clone()) {
                    return Err(DslError::DuplicateName {
                        pos,
                        kind: "policy",
                        name: pd.name.clone(),
                    });
                }
            }
            Decl::Network(n) => {
                if !network_names.insert(n.name.clone()) {
                    return Err(DslError::DuplicateName {
                        pos,
                        kind: "network",
                        name: n.name.clone(),
                    });
                }
                for e in &n.enforcers {
                    if doc.edit_automaton(e).is_none() {
                        return Err(DslError::Unresolved { pos, name: e.clone() });
                    }
                }
                let mut components = BTreeSet::from([n.app.clone()]);
                if doc.lts(&n.app).is_none() {
                    return Err(DslError::Unresolved { pos, name: n.app.clone() });
                }
                for r in &n.resources {
                    if doc.lts(r).is_none() {
                        return Err(DslError::Unresolved { pos, name: r.clone() });
                    }
                    if !components.insert(r.clone()) {
                        return Err(DslError::DuplicateName {
                            pos,
                            kind: "component",
                            name: r.clone(),
                        });
                    }
                }
                for target in n.targets.values() {
                    if !components.contains(target) {
                        return Err(DslError::Unresolved {
                            pos,
                            name: target.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_precedence() {
        // ! binds tighter than &&, && tighter than ||, || tighter than =>
        let f = parse_policy("!act(a) && act(b) || act(c) => act(d)").unwrap();
        use CtlFormula::*;
        match f {
            Implies(lhs, rhs) => {
                assert!(matches!(*rhs, Atom(_)));
                match *lhs {
                    Or(l, r) => {
                        assert!(matches!(*r, Atom(_)));
                        assert!(matches!(*l, And(_, _)));
                    }
                    other => panic!("expected Or, got {other:?}"),
                }
            }
            other => panic!("expected Implies, got {other:?}"),
        }
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_policy("act(a) => act(b) => act(c)").unwrap();
        match f {
            CtlFormula::Implies(_, rhs) => assert!(matches!(*rhs, CtlFormula::Implies(_, _))),
            other => panic!("expected Implies, got {other:?}"),
        }
    }

    #[test]
    fn section21_policy_shape() {
        let f =
            parse_policy("AG (act(create) => AX A[ !act(onStop) W act(release) ])").unwrap();
        let expected = CtlFormula::ag(CtlFormula::implies(
            CtlFormula::Atom("create".into()),
            CtlFormula::ax(CtlFormula::aw(
                CtlFormula::not(CtlFormula::Atom("onStop".into())),
                CtlFormula::Atom("release".into()),
            )),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn until_variants() {
        assert!(matches!(
            parse_policy("A[ act(a) U act(b) ]").unwrap(),
            CtlFormula::Au(_, _)
        ));
        assert!(matches!(
            parse_policy("E[ true U deadlock ]").unwrap(),
            CtlFormula::Eu(_, _)
        ));
        assert!(matches!(parse_policy("true").unwrap(), CtlFormula::True));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_policy("AG (act(create) =>").unwrap_err();
        match err {
            DslError::Syntax { pos, .. } => assert_eq!(pos.line, 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn empty_emit_is_suppression() {
        let src = "edit_automaton S { alphabet a; initial 0; states 0; trans 0 -> 0 on a emit []; }";
        let doc = parse_document(src).unwrap();
        let ea = doc.edit_automaton("S").unwrap();
        assert!(ea.transitions[0].emit.is_empty());
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = "lts a { initial s; states s; } lts a { initial s; states s; }";
        assert!(matches!(
            parse_document(src),
            Err(DslError::DuplicateName { .. })
        ));
    }

    #[test]
    fn dangling_network_reference_rejected() {
        let src = "lts app { initial s; states s; } network n { enforcers ghost; app app; resource; }";
        assert!(matches!(
            parse_document(src),
            Err(DslError::Unresolved { .. })
        ));
    }
}

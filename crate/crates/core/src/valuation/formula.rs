use std::collections::BTreeSet;
use std::fmt;

use crate::names::NameId;

/// A term of the set-theoretic language.
///
/// `Pair` denotes the internal ordered pair of its components. It is evaluated
/// by lookup only: the pair must already be interned in the store (see
/// [`make_function_predicate`](super::make_function_predicate)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(NameId),
    Pair(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn pair(a: Term, b: Term) -> Self {
        Term::Pair(Box::new(a), Box::new(b))
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) if !bound.contains(v) => {
                out.insert(v.clone());
            }
            Term::Var(_) | Term::Const(_) => {}
            Term::Pair(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
        }
    }

    fn map_constants(&self, f: &mut impl FnMut(NameId) -> NameId) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Const(c) => Term::Const(f(*c)),
            Term::Pair(a, b) => Term::pair(a.map_constants(f), b.map_constants(f)),
        }
    }

    fn constants_into(&self, out: &mut BTreeSet<NameId>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(*c);
            }
            Term::Pair(a, b) => {
                a.constants_into(out);
                b.constants_into(out);
            }
        }
    }
}

impl From<NameId> for Term {
    fn from(id: NameId) -> Self {
        Term::Const(id)
    }
}

impl From<&str> for Term {
    fn from(v: &str) -> Self {
        Term::var(v)
    }
}

/// Formulas of the language `∈, =, ¬, ∧, ∨, →` with bounded and unbounded
/// quantifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Member(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `∀ var ∈ bound . body`
    BForall {
        var: String,
        bound: Term,
        body: Box<Formula>,
    },
    /// `∃ var ∈ bound . body`
    BExists {
        var: String,
        bound: Term,
        body: Box<Formula>,
    },
    /// `∀ var . body`, ranging over the evaluation fragment.
    UForall {
        var: String,
        body: Box<Formula>,
    },
    /// `∃ var . body`, ranging over the evaluation fragment.
    UExists {
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn member(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Formula::Member(a.into(), b.into())
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall_in(var: &str, bound: impl Into<Term>, body: Formula) -> Self {
        Formula::BForall {
            var: var.to_string(),
            bound: bound.into(),
            body: Box::new(body),
        }
    }

    pub fn exists_in(var: &str, bound: impl Into<Term>, body: Formula) -> Self {
        Formula::BExists {
            var: var.to_string(),
            bound: bound.into(),
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::UForall {
            var: var.to_string(),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::UExists {
            var: var.to_string(),
            body: Box::new(body),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Member(a, b) | Formula::Eq(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::BForall {
                var,
                bound: t,
                body,
            }
            | Formula::BExists {
                var,
                bound: t,
                body,
            } => {
                t.free_vars_into(bound, out);
                bound.push(var.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
            Formula::UForall { var, body } | Formula::UExists { var, body } => {
                bound.push(var.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn constants(&self) -> BTreeSet<NameId> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.constants_into(&mut out));
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Member(a, b) | Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(g) => g.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::BForall { bound, body, .. } | Formula::BExists { bound, body, .. } => {
                f(bound);
                body.visit_terms(f);
            }
            Formula::UForall { body, .. } | Formula::UExists { body, .. } => body.visit_terms(f),
        }
    }

    /// Replaces every constant, e.g. to carry a formula along a lift.
    pub fn map_constants(&self, f: &mut impl FnMut(NameId) -> NameId) -> Formula {
        match self {
            Formula::Member(a, b) => Formula::Member(a.map_constants(f), b.map_constants(f)),
            Formula::Eq(a, b) => Formula::Eq(a.map_constants(f), b.map_constants(f)),
            Formula::Not(g) => Formula::not(g.map_constants(f)),
            Formula::And(a, b) => Formula::and(a.map_constants(f), b.map_constants(f)),
            Formula::Or(a, b) => Formula::or(a.map_constants(f), b.map_constants(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_constants(f), b.map_constants(f)),
            Formula::BForall { var, bound, body } => Formula::BForall {
                var: var.clone(),
                bound: bound.map_constants(f),
                body: Box::new(body.map_constants(f)),
            },
            Formula::BExists { var, bound, body } => Formula::BExists {
                var: var.clone(),
                bound: bound.map_constants(f),
                body: Box::new(body.map_constants(f)),
            },
            Formula::UForall { var, body } => Formula::UForall {
                var: var.clone(),
                body: Box::new(body.map_constants(f)),
            },
            Formula::UExists { var, body } => Formula::UExists {
                var: var.clone(),
                body: Box::new(body.map_constants(f)),
            },
        }
    }

    /// No unbounded quantifiers.
    pub fn is_bounded(&self) -> bool {
        match self {
            Formula::Member(..) | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_bounded(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_bounded() && b.is_bounded()
            }
            Formula::BForall { body, .. } | Formula::BExists { body, .. } => body.is_bounded(),
            Formula::UForall { .. } | Formula::UExists { .. } => false,
        }
    }

    /// Built from `∈`, `=`, `∧`, `∨` and bounded quantifiers only.
    pub fn is_positive_bounded(&self) -> bool {
        match self {
            Formula::Member(..) | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_positive_bounded() && b.is_positive_bounded()
            }
            Formula::BForall { body, .. } | Formula::BExists { body, .. } => {
                body.is_positive_bounded()
            }
            Formula::Not(_)
            | Formula::Implies(..)
            | Formula::UForall { .. }
            | Formula::UExists { .. } => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c:?}"),
            Term::Pair(a, b) => write!(f, "<{a}, {b}>"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Member(a, b) => write!(f, "{a} in {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "~({g})"),
            Formula::And(a, b) => write!(f, "({a}) /\\ ({b})"),
            Formula::Or(a, b) => write!(f, "({a}) \\/ ({b})"),
            Formula::Implies(a, b) => write!(f, "({a}) -> ({b})"),
            Formula::BForall { var, bound, body } => write!(f, "forall {var} in {bound} . {body}"),
            Formula::BExists { var, bound, body } => write!(f, "exists {var} in {bound} . {body}"),
            Formula::UForall { var, body } => write!(f, "forall {var} . {body}"),
            Formula::UExists { var, body } => write!(f, "exists {var} . {body}"),
        }
    }
}

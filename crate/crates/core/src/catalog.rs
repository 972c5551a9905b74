//! Named terms: Ω, I, T, F, the zero term Θ ≡ BC, the family Θₙ, Curry's Y.

use crate::syntax::parse;
use crate::term::{Term, TermKind};

fn p(s: &str) -> Term {
    parse(s).expect("catalog term parses")
}

/// `λx.x x`
pub fn delta() -> Term {
    p("λx.x x")
}

/// `(λx.x x)(λx.x x)`
pub fn omega() -> Term {
    Term::app(delta(), delta())
}

pub fn i() -> Term {
    p("λx.x")
}

/// `λx y.x`
pub fn t() -> Term {
    p("λx y.x")
}

/// `λx y.y`
pub fn f() -> Term {
    p("λx y.y")
}

/// `B ≡ λx.x(λy.y x)`
pub fn b() -> Term {
    b_n(1)
}

/// `C ≡ λz.z B`
pub fn c() -> Term {
    c_n(1)
}

/// `Θ ≡ B C`
pub fn theta() -> Term {
    Term::app(b(), c())
}

/// `A₀ ≡ x`, `Aₙ₊₁ ≡ λy.y Aₙ`; the only free name is `x`.
pub fn a_n(n: usize) -> Term {
    let mut acc = Term::free("x");
    for _ in 0..n {
        acc = Term::abstract_free("y", &Term::app(Term::free("y"), acc));
    }
    acc
}

/// `Bₙ ≡ λx.x Aₙ`
pub fn b_n(n: usize) -> Term {
    Term::abstract_free("x", &Term::app(Term::free("x"), a_n(n)))
}

/// `Cₙ ≡ λz.z Bₙ`
pub fn c_n(n: usize) -> Term {
    Term::lam("z", Term::app(Term::var(0), b_n(n)))
}

/// `Θₙ ≡ Bₙ Cₙ`
pub fn theta_n(n: usize) -> Term {
    Term::app(b_n(n), c_n(n))
}

/// Curry's fixpoint combinator `λf.(λx.f(x x))(λx.f(x x))`.
pub fn curry_y() -> Term {
    p("λf.(λx.f (x x)) (λx.f (x x))")
}

/// Turing's fixpoint combinator, used as a second `Y` in tests.
pub fn turing_theta() -> Term {
    let a = p("λx y.y (x x y)");
    Term::app(a.clone(), a)
}

/// Looks up a catalog entry by name. Accepts `Theta`, `Θ`, `Omega`, `Ω`, `I`,
/// `T`, `F`, `B`, `C`, `Y`, `Delta`, and `Theta_k` / `Θ_k` / `ThetaN(k)` for
/// the family.
pub fn lookup(name: &str) -> Option<Term> {
    let fam = |rest: &str| -> Option<Term> {
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        rest.parse::<usize>().ok().filter(|k| *k <= 64).map(theta_n)
    };
    match name {
        "Theta" | "Θ" => Some(theta()),
        "Omega" | "Ω" => Some(omega()),
        "I" => Some(i()),
        "T" | "K" => Some(t()),
        "F" => Some(f()),
        "B" => Some(b()),
        "C" => Some(c()),
        "Y" => Some(curry_y()),
        "Delta" | "ω" => Some(delta()),
        _ => {
            for prefix in ["ThetaN", "Theta", "Θ"] {
                if let Some(rest) = name.strip_prefix(prefix) {
                    if let Some(t) = fam(rest) {
                        return Some(t);
                    }
                }
            }
            None
        }
    }
}

/// Replaces every free name that names a catalog entry by that entry.
pub fn resolve(t: &Term) -> Term {
    match t.kind() {
        TermKind::Free(n) => lookup(n).unwrap_or_else(|| t.clone()),
        TermKind::Lam(h, b) => Term::lam_named(h.clone(), resolve(b)),
        TermKind::App(f, a) => Term::app(resolve(f), resolve(a)),
        _ => t.clone(),
    }
}

/// Rewrites `ThetaN(k)` to `Theta_k` so the concrete parser accepts it.
pub fn expand_family_calls(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(at) = rest.find("ThetaN(") {
        out.push_str(&rest[..at]);
        let after = &rest[at + "ThetaN(".len()..];
        match after.find(')') {
            Some(close) if after[..close].trim().chars().all(|c| c.is_ascii_digit()) => {
                out.push_str("Theta_");
                out.push_str(after[..close].trim());
                rest = &after[close + 1..];
            }
            _ => {
                out.push_str("ThetaN(");
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

/// Parses a term and resolves catalog names.
pub fn parse_named(text: &str) -> Result<Term, crate::syntax::ParseError> {
    parse(&expand_family_calls(text)).map(|t| resolve(&t))
}

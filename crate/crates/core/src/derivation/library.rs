//! Shipped derivations.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::build::*;
use super::{Derivation, Node, System};
use crate::formula::library::{nat, nat_star};
use crate::formula::{Comprehension, EquationSet, FoTerm, Formula};

fn x_at(t: FoTerm) -> Formula {
    Formula::var_atom("X", vec![t])
}

fn xc_at(t: FoTerm) -> Formula {
    Formula::classical_atom("X", vec![t])
}

fn step(at: fn(FoTerm) -> Formula) -> Formula {
    let y = FoTerm::var("y");
    Formula::forall_fo("y", Formula::arrow(at(y.clone()), at(FoTerm::succ(y))))
}

/// `(f)ⁿx : X(sⁿ0)` from `x : X(0)` and `f : ∀y(X(y) → X(sy))`.
fn iterate_node(n: usize, at: fn(FoTerm) -> Formula) -> Node {
    (0..n).fold(ax("x", at(FoTerm::zero())), |acc, k| {
        elim(fo_inst(ax("f", step(at)), FoTerm::numeral(k)), acc)
    })
}

/// `⊢ n : N[sⁿ0]`.
pub fn church_node(n: usize) -> Node {
    so_gen("X", intro_typed("x", x_at(FoTerm::zero()), intro_typed("f", step(x_at), iterate_node(n, x_at))))
}

pub fn zero_node() -> Node {
    church_node(0)
}

/// `⊢ λx.λf.x : N[0]`.
pub fn zero() -> Derivation {
    Derivation::new(System::AF2, zero_node())
}

/// `n` typed in any system without control.
pub fn church(n: usize, sys: System) -> Derivation {
    Derivation::new(sys, church_node(n))
}

/// `⊢ n : N^C[sⁿ0]` in M2.
pub fn church_classical(n: usize) -> Derivation {
    let body = intro_typed("x", xc_at(FoTerm::zero()), intro_typed("f", step(xc_at), iterate_node(n, xc_at)));
    Derivation::new(System::M2, class_gen("X", body))
}

fn prop_iterate(n: usize, x: Formula) -> Node {
    let fx = Formula::arrow(x.clone(), x.clone());
    let body = (0..n).fold(ax("x", x.clone()), |acc, _| elim(ax("f", fx.clone()), acc));
    intro_typed("x", x, intro_typed("f", fx, body))
}

/// `⊢ n : ∀X{X, (X → X) → X}`.
pub fn church_prop(n: usize) -> Derivation {
    Derivation::new(System::AF2, so_gen("X", prop_iterate(n, Formula::var_atom("X", Vec::new()))))
}

/// `⊢_M n : ∀X_C{X_C, (X_C → X_C) → X_C}`.
pub fn church_prop_classical(n: usize) -> Derivation {
    Derivation::new(System::M, class_gen("X", prop_iterate(n, Formula::classical_atom("X", Vec::new()))))
}

/// `s = λn.λx.λf.(f)((n)x)f : ∀y(N[y] → N[sy])`.
pub fn succ_node() -> Node {
    let y = FoTerm::var("y");
    let f_ty = Formula::forall_fo("z", Formula::arrow(x_at(FoTerm::var("z")), x_at(FoTerm::succ(FoTerm::var("z")))));
    let n = so_inst(ax("n", nat(y.clone())), Comprehension::new(&["u"], x_at(FoTerm::var("u"))));
    let nxf = elims(n, [ax("x", x_at(FoTerm::zero())), ax("f", f_ty.clone())]);
    let body = elim(fo_inst(ax("f", f_ty), y), nxf);
    fo_gen("y", intro("n", so_gen("X", intro("x", intro("f", body)))))
}

pub fn succ() -> Derivation {
    Derivation::new(System::AF2, succ_node())
}

/// `⊢_C2 C : ∀X{¬¬X → X}`.
pub fn c_axiom() -> Derivation {
    Derivation::new(System::C2, super::build::c_axiom(System::C2))
}

fn xc() -> Formula {
    Formula::classical_atom("X", Vec::new())
}

fn abort_with(g: Formula, y_ty: Formula) -> Derivation {
    let c = so_inst(super::build::c_axiom(System::M2), Comprehension::formula(g));
    let body = elim(c, intro_typed("y", y_ty, ax("x", Formula::Bottom)));
    Derivation::new(System::M2, class_gen("X", intro("x", body)))
}

/// `⊢_M2 λx.(C)λy.x : ∀X_C{⊥ → X_C}`.
pub fn abort() -> Derivation {
    abort_with(xc(), Formula::not(xc()))
}

/// [`abort`] with the classical variable instantiated by an ordinary one.
pub fn abort_non_classical() -> Derivation {
    let y = Formula::var_atom("Y", Vec::new());
    abort_with(y.clone(), Formula::not(y))
}

/// `⊢_M2 C′ : ∀X_C{¬¬X_C → X_C}`.
pub fn c_prime() -> Derivation {
    let nnx = Formula::not(Formula::not(xc()));
    let dy = elim(ax("d", Formula::not(xc())), ax("y", xc()));
    let inner = elim(ax("x", nnx.clone()), intro_typed("z", xc(), dy));
    let outer = elim(ax("x", nnx), intro("y", inner));
    let c = so_inst(super::build::c_axiom(System::M2), Comprehension::formula(xc()));
    let body = elim(c, intro("d", outer));
    Derivation::new(System::M2, class_gen("X", intro("x", body)))
}

/// `⊢ T₁ : ∀x{N*[x] → ¬¬N[x]}`.
pub fn t1_node() -> Node {
    let x = FoTerm::var("x");
    let y = FoTerm::var("y");
    let delta = intro("f", elim(ax("f", Formula::not(nat(FoTerm::zero()))), zero_node()));
    let sz = elim(fo_inst(succ_node(), y.clone()), ax("z", nat(y.clone())));
    let ysz = elim(ax("y", Formula::not(nat(FoTerm::succ(y.clone())))), sz);
    let xlz = elim(ax("x", Formula::not(Formula::not(nat(y)))), intro("z", ysz));
    let g = fo_gen("y", intro("x", intro("y", xlz)));
    let not_n = Comprehension::new(&["u"], Formula::not(nat(FoTerm::var("u"))));
    let n = so_inst(ax("n", nat_star(x)), not_n);
    fo_gen("x", intro("n", elims(n, [delta, g])))
}

pub fn t1() -> Derivation {
    Derivation::new(System::AF2, t1_node())
}

/// `⊢_C2 λν.λf.(f)(C)(T₁)ν : ∀x{N*[x] → ¬¬N[x]}`.
pub fn lazy() -> Derivation {
    let x = FoTerm::var("x");
    let t1nu = elim(fo_inst(t1_node(), x.clone()), ax("nu", nat_star(x.clone())));
    let c = so_inst(super::build::c_axiom(System::C2), Comprehension::formula(nat(x.clone())));
    let body = elim(ax("f", Formula::not(nat(x))), elim(c, t1nu));
    Derivation::new(System::C2, fo_gen("x", intro("nu", intro("f", body))))
}

/// `⊢_FD2 λx.μα[φ](x)λy.μβ[α]y : ∀X{¬¬X → X}`.
pub fn mu_c() -> Derivation {
    let x = Formula::var_atom("X", Vec::new());
    let named = mu_name(ax_mu("y", x.clone()), "beta", "alpha");
    let app = elim(ax_mu("x", Formula::not(Formula::not(x))), intro("y", named));
    let body = mu_name(app, "alpha", "phi");
    Derivation::new(System::FD2, so_gen("X", intro("x", body)))
}

/// `⊢ 0 : N[p(s0)]` from `p(0) = 0, p(s(x)) = x`.
pub fn zero_pred() -> Derivation {
    let p1 = FoTerm::App("p".into(), vec![FoTerm::numeral(1)]);
    let node = eq(zero_node(), "x", nat(FoTerm::var("x")), FoTerm::zero(), p1);
    Derivation::new(System::AF2, node).with_equations(EquationSet::predecessor())
}

/// `⊢_C2 (C)λk.(k)n : N[sⁿ0]`.
pub fn control_integer(n: usize) -> Derivation {
    let nn = nat(FoTerm::numeral(n));
    let c = so_inst(super::build::c_axiom(System::C2), Comprehension::formula(nn.clone()));
    let body = intro("k", elim(ax("k", Formula::not(nn)), church_node(n)));
    Derivation::new(System::C2, elim(c, body))
}

/// Typings of type `⊥` for every step of the head C-reduction of
/// `(C)λh.(h)((k)a)` under `k : ¬A, a : A`.
pub fn bottom_chain() -> Vec<Derivation> {
    let a = Formula::var_atom("A", Vec::new());
    let ka = || elim(ax("k", Formula::not(a.clone())), ax("a", a.clone()));
    let id = || intro("w", ax("w", Formula::Bottom));
    let lam_h = || intro("h", elim(ax("h", Formula::not(Formula::Bottom)), ka()));
    let c = so_inst(super::build::c_axiom(System::C2), Comprehension::formula(Formula::Bottom));
    [elim(c, lam_h()), elim(lam_h(), id()), elim(id(), ka()), ka()]
        .into_iter()
        .map(|n| Derivation::new(System::C2, n))
        .collect()
}

/// Every valid fixture by name.
pub fn all() -> Vec<(String, Derivation)> {
    let mut out: Vec<(String, Derivation)> = vec![
        ("zero".into(), zero()),
        ("succ".into(), succ()),
        ("C".into(), c_axiom()),
        ("abort".into(), abort()),
        ("Cprime".into(), c_prime()),
        ("T1".into(), t1()),
        ("muC".into(), mu_c()),
        ("lazy".into(), lazy()),
        ("zero_pred".into(), zero_pred()),
        ("church3".into(), church(3, System::AF2)),
        ("church3_m2".into(), church(3, System::M2)),
        ("church3_classical".into(), church_classical(3)),
        ("church_prop3".into(), church_prop(3)),
        ("church_prop3_m".into(), church_prop_classical(3)),
        ("control3".into(), control_integer(3)),
    ];
    for (i, d) in bottom_chain().into_iter().enumerate() {
        out.push((alloc::format!("bottom{i}"), d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{check, subject_of, Subject};
    use crate::formula::library::{double_negation, double_negation_classical, storage_type};
    use crate::term::{self, mu::mu_control, Term};

    fn subject_term(d: &Derivation) -> Term {
        subject_of(d).0.as_term().cloned().unwrap()
    }

    #[test]
    fn subjects_are_the_named_terms() {
        assert_eq!(subject_term(&zero()), term::church(0));
        assert!(subject_of(&zero()).1.alpha_eq(&nat(FoTerm::zero())));
        assert_eq!(subject_term(&succ()), term::succ());
        assert_eq!(subject_term(&abort()), term::abort());
        assert_eq!(subject_term(&c_prime()), term::c_prime());
        assert!(subject_of(&c_prime()).1.alpha_eq(&double_negation_classical()));
        assert_eq!(subject_term(&t1()), term::storage_t1());
        assert!(subject_of(&t1()).1.alpha_eq(&storage_type()));
        assert!(subject_of(&lazy()).1.alpha_eq(&storage_type()));
        assert_eq!(subject_of(&mu_c()).0, Subject::Mu(mu_control()));
        assert!(subject_of(&mu_c()).1.alpha_eq(&double_negation()));
        assert_eq!(subject_term(&church(4, System::AF2)), term::church(4));
    }

    #[test]
    fn every_fixture_checks() {
        for (name, d) in all() {
            assert_eq!(check(&d), Ok(()), "{name}");
        }
    }
}

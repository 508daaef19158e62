//! Single-node corruptions of shipped derivations, each paired with the
//! reason the checker must give.

use mixlogic::derivation::{library, Derivation, Node, Reason, RuleTag, System, Witness};
use mixlogic::formula::library::{nat, nat_star};
use mixlogic::formula::{Comprehension, FoTerm, Formula};

/// Path of the first node (preorder) with rule `tag`.
fn find(n: &Node, tag: RuleTag, path: &mut Vec<usize>) -> bool {
    if n.rule == tag {
        return true;
    }
    for (i, p) in n.premises.iter().enumerate() {
        path.push(i);
        if find(p, tag, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn edit(mut d: Derivation, tag: RuleTag, f: impl FnOnce(&mut Node)) -> Derivation {
    let mut path = Vec::new();
    assert!(find(&d.root, tag, &mut path), "no {tag} node");
    f(d.root.at_mut(&path).unwrap());
    d
}

pub fn corruptions() -> Vec<(&'static str, Derivation, Reason)> {
    let church3 = library::church(3, System::AF2);
    let wrong_numeral = edit(church3, RuleTag::FoInst, |n| {
        if let Some(Witness::Term(t)) = &n.witness {
            n.witness = Some(Witness::Term(FoTerm::succ(t.clone())));
        }
    });
    let wrong_comprehension = edit(library::t1(), RuleTag::SoInst, |n| {
        n.witness = Some(Witness::Formula(Comprehension::new(&["u"], nat(FoTerm::var("u")))));
    });
    let captured_fo = edit(library::t1(), RuleTag::FoGen, |n| {
        n.conclusion.ctx.push(("w".into(), nat_star(FoTerm::var("x"))));
    });
    let captured_so = edit(library::zero(), RuleTag::SoGen, |n| {
        n.conclusion.ctx.push(("w".into(), Formula::var_atom("X", vec![FoTerm::zero()])));
    });
    let mut c_in_af2 = library::c_axiom();
    c_in_af2.system = System::AF2;
    let mut abort_in_c2 = library::abort();
    abort_in_c2.system = System::C2;
    vec![
        ("church3_wrong_numeral", wrong_numeral, Reason::BadWitness),
        ("T1_wrong_comprehension", wrong_comprehension, Reason::BadWitness),
        ("T1_captured_variable", captured_fo, Reason::SideConditionViolated),
        ("zero_captured_predicate", captured_so, Reason::SideConditionViolated),
        ("C_in_AF2", c_in_af2, Reason::WrongSystem),
        ("abort_in_C2", abort_in_c2, Reason::WrongSystem),
        ("abort_ordinary_instance", library::abort_non_classical(), Reason::NonClassicalInstantiation),
    ]
}

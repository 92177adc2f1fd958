//! Partial application and fixed points of code transformations.

use super::builder::{tag, Arg, Asm, Template};
use super::Program;
use crate::Nat;

/// Steps a specialised program spends before entering the original.
pub const SMN_OVERHEAD: u64 = 4;

fn smn_template() -> Template {
    // hole 0: the fixed first argument, hole 1: the original code
    Template::new()
        .op(tag::SET, vec![1.into(), Arg::Hole(0)])
        .op(tag::PAIR, vec![0.into(), 1.into(), 0.into()])
        .op(tag::SET, vec![2.into(), Arg::Hole(1)])
        .op(tag::CALL, vec![0.into(), 2.into(), 0.into()])
}

/// `y ↦ φ_e(pair(x, y))`, entering `e` through `CALL`.
pub fn smn_program(e: &Nat, x: &Nat) -> Program {
    smn_template().instantiate(&[x.clone(), e.clone()])
}

/// Code of [`smn_program`]. Never runs `e`.
pub fn smn(e: &Nat, x: &Nat) -> Nat {
    smn_program(e, x).code()
}

fn constant_call_template() -> Template {
    Template::new()
        .op(tag::SET, vec![0.into(), 0.into()])
        .op(tag::SET, vec![1.into(), Arg::Hole(0)])
        .op(tag::CALL, vec![0.into(), 1.into(), 0.into()])
}

/// Code of the program that discards its input and returns `φ_c(0)`.
pub fn constant_call_program(c: &Nat) -> Nat {
    constant_call_template().instantiate(std::slice::from_ref(c)).code()
}

/// Second recursion theorem: returns `e` with `φ_e ≃ φ_{φ_d(e)}`.
///
/// `e = smn(v, v)` where `v` codes the diagonal program
/// `pair(x, y) ↦ φ_{φ_d(smn(x, x))}(y)`.
pub fn kleene_fix(d: &Nat) -> Nat {
    let mut a = Asm::new();
    a.unpair(1, 2, 0)
        .quote(3, &smn_template(), &[1, 1])
        .call_const(5, d, 3)
        .call(0, 5, 2);
    let v = a.finish().code();
    smn(&v, &v)
}

/// Returns `e` with `φ_e(0) ≃ φ_d(w)`, where `w` codes a program that
/// ignores its input and evaluates `φ_e(0)`.
pub fn markov_realizer(d: &Nat) -> Nat {
    // c ↦ code of [SET 1 w_c; SET 2 d; CALL 0 2 1], w_c = constant_call_program(c)
    let outer = Template::new()
        .op(tag::SET, vec![1.into(), Arg::Hole(0)])
        .op(tag::SET, vec![2.into(), Arg::Const(d.clone())])
        .op(tag::CALL, vec![0.into(), 2.into(), 1.into()]);
    let mut a = Asm::new();
    a.copy(1, 0)
        .quote(2, &constant_call_template(), &[1])
        .quote(0, &outer, &[2]);
    kleene_fix(&a.finish().code())
}

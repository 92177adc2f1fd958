//! Generators shared by the property and acceptance suites.
//!
//! Random programs avoid MUL, PAIR, CPAIR and CALL: with those, a short loop
//! can square a register every step and exhaust memory long before fuel.
#![allow(dead_code)]

use rand::Rng;
use relcomp::machine::{Instruction, Program};
use relcomp::relmachine::{compile_query, compile_return};
use relcomp::Nat;

pub fn n(v: u64) -> Nat {
    Nat::from(v)
}

/// Registers touched by random programs.
pub const REGS: u64 = 6;

pub fn safe_instruction(rng: &mut impl Rng, len: u64) -> Instruction {
    let kind = rng.gen_range(0..11);
    let mut r = || n(rng.gen_range(0..REGS));
    let i = match kind {
        0 => Instruction::Inc(r()),
        1 => Instruction::Dec(r()),
        2 => Instruction::Jz(r(), n(0)),
        3 => Instruction::Set(r(), n(0)),
        4 => Instruction::Copy(r(), r()),
        5 => Instruction::Add(r(), r()),
        6 => Instruction::Sub(r(), r()),
        7 => Instruction::Div(r(), r()),
        8 => Instruction::Mod(r(), r()),
        9 => Instruction::Unpair(r(), r(), r()),
        _ => Instruction::CUnpair(r(), r(), r()),
    };
    match i {
        Instruction::Jz(a, _) => Instruction::Jz(a, n(rng.gen_range(0..=len))),
        Instruction::Set(a, _) => Instruction::Set(a, n(rng.gen_range(0..10))),
        other => other,
    }
}

pub fn safe_program(rng: &mut impl Rng, max_len: u64) -> Program {
    let len = rng.gen_range(0..=max_len);
    Program::new((0..len).map(|_| safe_instruction(rng, len)).collect())
}

/// `p` followed by `suffix`; jumps of `p` past its end land on the suffix.
fn then(p: Program, suffix: Vec<Instruction>) -> Program {
    let len = p.instructions.len() as u64;
    let mut body: Vec<Instruction> = p
        .instructions
        .into_iter()
        .map(|i| match i {
            Instruction::Jz(r, t) if t > n(len) => Instruction::Jz(r, n(len)),
            other => other,
        })
        .collect();
    body.extend(suffix);
    Program::new(body)
}

/// A random oracle code of query depth at most `depth`. Each stage runs a
/// safe program on the answer, then returns it, continues with a deeper
/// code, or branches between the two on whether the result is 0.
pub fn oracle_code(rng: &mut impl Rng, depth: u32) -> Nat {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return compile_return(&n(rng.gen_range(0..20)));
    }
    let q = n(rng.gen_range(0..12));
    let p = safe_program(rng, 4);
    let len = p.instructions.len() as u64;
    let cont = match rng.gen_range(0..3) {
        0 => then(p, vec![Instruction::Add(n(0), n(0))]),
        1 => then(p, vec![Instruction::Set(n(0), oracle_code(rng, depth - 1))]),
        _ => then(
            p,
            vec![
                Instruction::Jz(n(0), n(len + 3)),
                Instruction::Add(n(0), n(0)),
                // register 9 is never written: unconditional halt
                Instruction::Jz(n(9), n(len + 100)),
                Instruction::Set(n(0), oracle_code(rng, depth - 1)),
            ],
        ),
    };
    compile_query(&q, &cont.code())
}

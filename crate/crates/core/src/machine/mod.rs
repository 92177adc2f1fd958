//! The universal register machine.
//!
//! Registers are indexed by naturals and hold naturals; register 0 carries
//! the input on entry and the output on halt. A program halts when its
//! program counter leaves the instruction list, so `JZ r t` with `t` past
//! the end is a conditional halt.
//!
//! Besides the classical `INC`/`DEC`/`JZ` core the machine has one-step
//! arithmetic, the two pairing functions, and `CALL`, which runs the program
//! whose code sits in a register as a subroutine. Every instruction costs one
//! step; a `CALL` additionally costs every step taken by the callee. Programs
//! are numbered bijectively (see [`Program::code`]), so every natural is a
//! program and the empty program has code 0.

mod asm;
pub mod builder;
mod exec;
mod recursion;

pub use asm::{assemble, disassemble, ParseError};
pub use exec::{eval_exact, eval_fuel, Evaluator, StepObservation};
pub use recursion::{
    constant_call_program, kleene_fix, markov_realizer, smn, smn_program, SMN_OVERHEAD,
};

use num_traits::{ToPrimitive, Zero};

use crate::encode::{compact_pair, compact_unpair};
use crate::Nat;

/// Number of instruction kinds; an instruction code is `payload * KINDS + tag`.
pub const KINDS: u32 = 15;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// `r += 1`
    Inc(Nat),
    /// `r -= 1`, truncated at 0
    Dec(Nat),
    /// jump to `t` when `r == 0`
    Jz(Nat, Nat),
    /// `r := c`
    Set(Nat, Nat),
    /// `d := s`
    Copy(Nat, Nat),
    /// `d := d + s`
    Add(Nat, Nat),
    /// `d := d - s`, truncated at 0
    Sub(Nat, Nat),
    /// `d := d * s`
    Mul(Nat, Nat),
    /// `d := d / s`; division by zero yields 0
    Div(Nat, Nat),
    /// `d := d mod s`; leaves `d` alone when `s == 0`
    Mod(Nat, Nat),
    /// `d := pair(a, b)` (Cantor)
    Pair(Nat, Nat, Nat),
    /// `(d1, d2) := unpair(s)` (Cantor)
    Unpair(Nat, Nat, Nat),
    /// `d := compact_pair(a, b)`
    CPair(Nat, Nat, Nat),
    /// `(d1, d2) := compact_unpair(s)`
    CUnpair(Nat, Nat, Nat),
    /// `d := φ_c(i)`, where `c` and `i` are registers holding a program code
    /// and its input
    Call(Nat, Nat, Nat),
}

fn pack2(a: &Nat, b: &Nat) -> Nat {
    compact_pair(a, b)
}

fn pack3(a: &Nat, b: &Nat, c: &Nat) -> Nat {
    compact_pair(a, &compact_pair(b, c))
}

fn unpack3(p: &Nat) -> (Nat, Nat, Nat) {
    let (a, rest) = compact_unpair(p);
    let (b, c) = compact_unpair(&rest);
    (a, b, c)
}

impl Instruction {
    pub fn tag(&self) -> u32 {
        use Instruction::*;
        match self {
            Inc(..) => 0,
            Dec(..) => 1,
            Jz(..) => 2,
            Set(..) => 3,
            Copy(..) => 4,
            Add(..) => 5,
            Sub(..) => 6,
            Mul(..) => 7,
            Div(..) => 8,
            Mod(..) => 9,
            Pair(..) => 10,
            Unpair(..) => 11,
            CPair(..) => 12,
            CUnpair(..) => 13,
            Call(..) => 14,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        MNEMONICS[self.tag() as usize]
    }

    pub fn operands(&self) -> Vec<&Nat> {
        use Instruction::*;
        match self {
            Inc(r) | Dec(r) => vec![r],
            Jz(a, b) | Set(a, b) | Copy(a, b) | Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b)
            | Mod(a, b) => vec![a, b],
            Pair(a, b, c) | Unpair(a, b, c) | CPair(a, b, c) | CUnpair(a, b, c)
            | Call(a, b, c) => vec![a, b, c],
        }
    }

    /// Builds an instruction from its tag and operand list. Panics on an
    /// arity mismatch.
    pub fn from_parts(tag: u32, ops: &[Nat]) -> Instruction {
        use Instruction::*;
        let o = |i: usize| ops[i].clone();
        assert_eq!(ops.len(), arity(tag), "wrong operand count for tag {tag}");
        match tag {
            0 => Inc(o(0)),
            1 => Dec(o(0)),
            2 => Jz(o(0), o(1)),
            3 => Set(o(0), o(1)),
            4 => Copy(o(0), o(1)),
            5 => Add(o(0), o(1)),
            6 => Sub(o(0), o(1)),
            7 => Mul(o(0), o(1)),
            8 => Div(o(0), o(1)),
            9 => Mod(o(0), o(1)),
            10 => Pair(o(0), o(1), o(2)),
            11 => Unpair(o(0), o(1), o(2)),
            12 => CPair(o(0), o(1), o(2)),
            13 => CUnpair(o(0), o(1), o(2)),
            14 => Call(o(0), o(1), o(2)),
            _ => panic!("no instruction has tag {tag}"),
        }
    }

    pub fn code(&self) -> Nat {
        let ops = self.operands();
        let payload = match ops.as_slice() {
            [a] => (*a).clone(),
            [a, b] => pack2(a, b),
            [a, b, c] => pack3(a, b, c),
            _ => unreachable!(),
        };
        payload * KINDS + self.tag()
    }

    pub fn from_code(code: &Nat) -> Instruction {
        let tag = (code % KINDS).to_u32().unwrap();
        let payload = code / KINDS;
        let ops = match arity(tag) {
            1 => vec![payload],
            2 => {
                let (a, b) = compact_unpair(&payload);
                vec![a, b]
            }
            _ => {
                let (a, b, c) = unpack3(&payload);
                vec![a, b, c]
            }
        };
        Instruction::from_parts(tag, &ops)
    }
}

pub(crate) const MNEMONICS: [&str; KINDS as usize] = [
    "INC", "DEC", "JZ", "SET", "COPY", "ADD", "SUB", "MUL", "DIV", "MOD", "PAIR", "UNPAIR",
    "CPAIR", "CUNPAIR", "CALL",
];

pub(crate) fn arity(tag: u32) -> usize {
    match tag {
        0 | 1 => 1,
        2..=9 => 2,
        _ => 3,
    }
}

/// A machine program: a finite instruction list with a bijective code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        Program { instructions }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// `[] ↦ 0`, `i:is ↦ 1 + compact_pair(code(i), code(is))`.
    pub fn code(&self) -> Nat {
        self.instructions
            .iter()
            .rev()
            .fold(Nat::zero(), |acc, ins| compact_pair(&ins.code(), &acc) + 1u32)
    }

    pub fn from_code(code: &Nat) -> Program {
        let mut instructions = Vec::new();
        let mut cur = code.clone();
        while !cur.is_zero() {
            let (head, tail) = compact_unpair(&(cur - 1u32));
            instructions.push(Instruction::from_code(&head));
            cur = tail;
        }
        Program { instructions }
    }
}

/// Shorthand constructors used by tests and the stock program library.
pub mod ins {
    use super::Instruction;
    use crate::Nat;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    pub fn inc(r: u64) -> Instruction {
        Instruction::Inc(n(r))
    }
    pub fn dec(r: u64) -> Instruction {
        Instruction::Dec(n(r))
    }
    pub fn jz(r: u64, t: u64) -> Instruction {
        Instruction::Jz(n(r), n(t))
    }
    pub fn set(r: u64, c: impl Into<Nat>) -> Instruction {
        Instruction::Set(n(r), c.into())
    }
    pub fn add(d: u64, s: u64) -> Instruction {
        Instruction::Add(n(d), n(s))
    }
    pub fn pair(d: u64, a: u64, b: u64) -> Instruction {
        Instruction::Pair(n(d), n(a), n(b))
    }
    pub fn unpair(d1: u64, d2: u64, s: u64) -> Instruction {
        Instruction::Unpair(n(d1), n(d2), n(s))
    }
    pub fn call(d: u64, c: u64, i: u64) -> Instruction {
        Instruction::Call(n(d), n(c), n(i))
    }
}

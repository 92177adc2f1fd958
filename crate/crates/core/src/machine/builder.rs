//! A small assembler for writing machine programs from Rust: symbolic
//! labels, a few macro instructions, and code quoting, which emits
//! instructions that compute the code of a program template at run time.
//!
//! Register conventions for programs built here: registers 10–14 are
//! scratch space for the macros and register 15 always holds 0. Everything
//! else is free for the caller.

use super::{Instruction, Program, KINDS};
use crate::Nat;

pub type Reg = u64;

pub const ZERO: Reg = 15;
const T0: Reg = 10;
const T1: Reg = 11;
const T2: Reg = 12;
const T3: Reg = 13;
const T4: Reg = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label(usize);

enum Item {
    Plain(Instruction),
    Jz(Reg, Label),
}

pub struct Asm {
    items: Vec<Item>,
    labels: Vec<Option<usize>>,
    end: Label,
}

impl Default for Asm {
    fn default() -> Self {
        Self::new()
    }
}

fn r(x: Reg) -> Nat {
    Nat::from(x)
}

impl Asm {
    pub fn new() -> Self {
        Asm { items: Vec::new(), labels: vec![None], end: Label(0) }
    }

    pub fn label(&mut self) -> Label {
        self.labels.push(None);
        Label(self.labels.len() - 1)
    }

    pub fn bind(&mut self, l: Label) {
        assert!(self.labels[l.0].is_none(), "label bound twice");
        self.labels[l.0] = Some(self.items.len());
    }

    fn push(&mut self, i: Instruction) -> &mut Self {
        self.items.push(Item::Plain(i));
        self
    }

    pub fn inc(&mut self, x: Reg) -> &mut Self {
        self.push(Instruction::Inc(r(x)))
    }
    pub fn dec(&mut self, x: Reg) -> &mut Self {
        self.push(Instruction::Dec(r(x)))
    }
    pub fn jz(&mut self, x: Reg, l: Label) -> &mut Self {
        self.items.push(Item::Jz(x, l));
        self
    }
    pub fn goto(&mut self, l: Label) -> &mut Self {
        self.jz(ZERO, l)
    }
    /// Jumps past the last instruction.
    pub fn halt(&mut self) -> &mut Self {
        let end = self.end;
        self.goto(end)
    }
    pub fn set(&mut self, x: Reg, c: impl Into<Nat>) -> &mut Self {
        self.push(Instruction::Set(r(x), c.into()))
    }
    pub fn copy(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Copy(r(d), r(s)))
    }
    pub fn add(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Add(r(d), r(s)))
    }
    pub fn sub(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Sub(r(d), r(s)))
    }
    pub fn mul(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Mul(r(d), r(s)))
    }
    pub fn div(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Div(r(d), r(s)))
    }
    pub fn modulo(&mut self, d: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Mod(r(d), r(s)))
    }
    pub fn pair(&mut self, d: Reg, a: Reg, b: Reg) -> &mut Self {
        self.push(Instruction::Pair(r(d), r(a), r(b)))
    }
    pub fn unpair(&mut self, d1: Reg, d2: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::Unpair(r(d1), r(d2), r(s)))
    }
    pub fn cpair(&mut self, d: Reg, a: Reg, b: Reg) -> &mut Self {
        self.push(Instruction::CPair(r(d), r(a), r(b)))
    }
    pub fn cunpair(&mut self, d1: Reg, d2: Reg, s: Reg) -> &mut Self {
        self.push(Instruction::CUnpair(r(d1), r(d2), r(s)))
    }
    pub fn call(&mut self, d: Reg, code: Reg, input: Reg) -> &mut Self {
        self.push(Instruction::Call(r(d), r(code), r(input)))
    }

    /// Halts when `x == 0`.
    pub fn halt_if_zero(&mut self, x: Reg) -> &mut Self {
        let end = self.end;
        self.jz(x, end)
    }

    /// `d := call(constant program, input)`.
    pub fn call_const(&mut self, d: Reg, code: &Nat, input: Reg) -> &mut Self {
        self.set(T4, code.clone()).call(d, T4, input)
    }

    /// Leaves `T0 = |a - b|`; clobbers T0, T1.
    fn distance(&mut self, a: Reg, b: Reg) {
        self.copy(T0, a).sub(T0, b).copy(T1, b).sub(T1, a).add(T0, T1);
    }

    pub fn jeq(&mut self, a: Reg, b: Reg, l: Label) -> &mut Self {
        self.distance(a, b);
        self.jz(T0, l)
    }

    pub fn jne(&mut self, a: Reg, b: Reg, l: Label) -> &mut Self {
        let skip = self.label();
        self.distance(a, b);
        self.jz(T0, skip).goto(l);
        self.bind(skip);
        self
    }

    /// Jumps when `x == c`.
    pub fn jeq_const(&mut self, x: Reg, c: impl Into<Nat>, l: Label) -> &mut Self {
        self.set(T2, c);
        self.jeq(x, T2, l)
    }

    /// `d := cpair(r1, cpair(r2, ... rk))`, compact so nesting stays linear in size.
    pub fn pack(&mut self, d: Reg, regs: &[Reg]) -> &mut Self {
        let (last, rest) = regs.split_last().expect("nothing to pack");
        self.copy(T0, *last);
        for x in rest.iter().rev() {
            self.cpair(T0, *x, T0);
        }
        self.copy(d, T0)
    }

    /// Inverse of [`Asm::pack`].
    pub fn unpack(&mut self, s: Reg, regs: &[Reg]) -> &mut Self {
        let (last, rest) = regs.split_last().expect("nothing to unpack");
        self.copy(T0, s);
        for x in rest {
            self.cunpair(*x, T0, T0);
        }
        self.copy(*last, T0)
    }

    /// List cons: `d := 1 + pair(h, t)`.
    pub fn cons(&mut self, d: Reg, h: Reg, t: Reg) -> &mut Self {
        self.pair(d, h, t).inc(d)
    }

    /// Compact list cons: `d := 1 + compact_pair(h, t)`.
    pub fn ccons(&mut self, d: Reg, h: Reg, t: Reg) -> &mut Self {
        self.cpair(d, h, t).inc(d)
    }

    /// Halts with output `θ⁻¹(Pure(x)) = 2x`.
    pub fn ret_pure(&mut self, x: Reg) -> &mut Self {
        self.copy(0, x).add(0, 0).halt()
    }

    pub fn ret_pure_const(&mut self, v: impl Into<Nat>) -> &mut Self {
        let v: Nat = v.into();
        self.set(0, v << 1u32).halt()
    }

    /// Halts with output `θ⁻¹(Step(q, next)) = 2 pair(q, next) + 1`.
    pub fn ret_step(&mut self, q: Reg, next: Reg) -> &mut Self {
        self.pair(0, q, next).add(0, 0).inc(0).halt()
    }

    /// Emits code that leaves the code of `template`, with hole `i` filled
    /// from register `holes[i]`, in register `d`. Hole registers must lie
    /// outside the scratch range.
    pub fn quote(&mut self, d: Reg, template: &Template, holes: &[Reg]) -> &mut Self {
        assert!(holes.iter().all(|h| !(T0..=ZERO).contains(h)), "hole in scratch register");
        self.set(T0, 0u32);
        for (tag, args) in template.instrs.iter().rev() {
            if args.iter().all(|a| matches!(a, Arg::Const(_))) {
                let ops: Vec<Nat> = args.iter().map(|a| a.constant().clone()).collect();
                self.set(T2, Instruction::from_parts(*tag, &ops).code());
            } else {
                match args.as_slice() {
                    [a] => self.load(T2, a, holes),
                    [a, b] => {
                        self.load(T2, a, holes);
                        self.load(T3, b, holes);
                        self.cpair(T2, T2, T3);
                    }
                    [a, b, c] => {
                        self.load(T3, b, holes);
                        self.load(T4, c, holes);
                        self.cpair(T3, T3, T4);
                        self.load(T2, a, holes);
                        self.cpair(T2, T2, T3);
                    }
                    _ => unreachable!(),
                }
                self.set(T3, KINDS).mul(T2, T3).set(T3, *tag).add(T2, T3);
            }
            self.cpair(T0, T2, T0).inc(T0);
        }
        self.copy(d, T0)
    }

    fn load(&mut self, into: Reg, a: &Arg, holes: &[Reg]) {
        match a {
            Arg::Const(c) => {
                self.set(into, c.clone());
            }
            Arg::Hole(i) => {
                self.copy(into, holes[*i]);
            }
        }
    }

    pub fn finish(mut self) -> Program {
        let end = self.end;
        self.bind(end);
        let labels = self.labels;
        let instructions = self
            .items
            .into_iter()
            .map(|it| match it {
                Item::Plain(i) => i,
                Item::Jz(x, l) => {
                    let t = labels[l.0].expect("unbound label");
                    Instruction::Jz(r(x), Nat::from(t))
                }
            })
            .collect();
        Program::new(instructions)
    }
}

#[derive(Clone, Debug)]
pub enum Arg {
    Const(Nat),
    Hole(usize),
}

impl Arg {
    fn constant(&self) -> &Nat {
        match self {
            Arg::Const(c) => c,
            Arg::Hole(_) => panic!("not a constant"),
        }
    }
}

impl From<u64> for Arg {
    fn from(v: u64) -> Self {
        Arg::Const(Nat::from(v))
    }
}

/// A program with holes in operand positions.
#[derive(Clone, Debug, Default)]
pub struct Template {
    instrs: Vec<(u32, Vec<Arg>)>,
}

impl Template {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn op(mut self, tag: u32, args: Vec<Arg>) -> Self {
        assert_eq!(args.len(), super::arity(tag));
        self.instrs.push((tag, args));
        self
    }

    /// Fills the holes on the host side.
    pub fn instantiate(&self, values: &[Nat]) -> Program {
        let instructions = self
            .instrs
            .iter()
            .map(|(tag, args)| {
                let ops: Vec<Nat> = args
                    .iter()
                    .map(|a| match a {
                        Arg::Const(c) => c.clone(),
                        Arg::Hole(i) => values[*i].clone(),
                    })
                    .collect();
                Instruction::from_parts(*tag, &ops)
            })
            .collect();
        Program::new(instructions)
    }
}

/// Tags for use with [`Template::op`].
pub mod tag {
    pub const SET: u32 = 3;
    pub const PAIR: u32 = 10;
    pub const CALL: u32 = 14;
}

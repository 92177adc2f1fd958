use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{ToPrimitive, Zero};

use super::{Instruction, Program};
use crate::encode::{compact_pair, compact_unpair, pair, unpair};
use crate::Nat;

/// What a fuel-bounded run observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepObservation {
    /// The program halted after exactly `steps` steps with `value` in register 0.
    Halted { value: Nat, steps: u64 },
    /// The program was still running after `fuel` steps.
    OutOfFuel { fuel: u64 },
}

impl StepObservation {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            StepObservation::Halted { value, .. } => Some(value),
            StepObservation::OutOfFuel { .. } => None,
        }
    }

    pub fn steps(&self) -> Option<u64> {
        match self {
            StepObservation::Halted { steps, .. } => Some(*steps),
            StepObservation::OutOfFuel { .. } => None,
        }
    }
}

// Register operands are renamed to dense slots per program; slot 0 is
// register 0. Registers a program never mentions are unobservable.
#[derive(Debug)]
enum Op {
    Inc(usize),
    Dec(usize),
    Jz(usize, usize),
    Set(usize, Nat),
    Copy(usize, usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Mod(usize, usize),
    Pair(usize, usize, usize),
    Unpair(usize, usize, usize),
    CPair(usize, usize, usize),
    CUnpair(usize, usize, usize),
    Call(usize, usize, usize),
}

#[derive(Debug)]
struct Compiled {
    ops: Vec<Op>,
    slots: usize,
}

impl Compiled {
    fn new(program: &Program) -> Compiled {
        let mut slots: HashMap<Nat, usize> = HashMap::new();
        slots.insert(Nat::zero(), 0);
        let mut slot = |r: &Nat| {
            let next = slots.len();
            *slots.entry(r.clone()).or_insert(next)
        };
        let len = program.len();
        let target = |t: &Nat| t.to_usize().map_or(len, |t| t.min(len));
        let ops = program
            .instructions
            .iter()
            .map(|i| match i {
                Instruction::Inc(r) => Op::Inc(slot(r)),
                Instruction::Dec(r) => Op::Dec(slot(r)),
                Instruction::Jz(r, t) => Op::Jz(slot(r), target(t)),
                Instruction::Set(r, c) => Op::Set(slot(r), c.clone()),
                Instruction::Copy(d, s) => Op::Copy(slot(d), slot(s)),
                Instruction::Add(d, s) => Op::Add(slot(d), slot(s)),
                Instruction::Sub(d, s) => Op::Sub(slot(d), slot(s)),
                Instruction::Mul(d, s) => Op::Mul(slot(d), slot(s)),
                Instruction::Div(d, s) => Op::Div(slot(d), slot(s)),
                Instruction::Mod(d, s) => Op::Mod(slot(d), slot(s)),
                Instruction::Pair(d, a, b) => Op::Pair(slot(d), slot(a), slot(b)),
                Instruction::Unpair(d, e, s) => Op::Unpair(slot(d), slot(e), slot(s)),
                Instruction::CPair(d, a, b) => Op::CPair(slot(d), slot(a), slot(b)),
                Instruction::CUnpair(d, e, s) => Op::CUnpair(slot(d), slot(e), slot(s)),
                Instruction::Call(d, c, a) => Op::Call(slot(d), slot(c), slot(a)),
            })
            .collect();
        let slots = slots.len();
        Compiled { ops, slots }
    }
}

struct Frame {
    prog: Rc<Compiled>,
    pc: usize,
    regs: Vec<Nat>,
}

impl Frame {
    fn new(prog: Rc<Compiled>, input: Nat) -> Frame {
        let mut regs = vec![Nat::zero(); prog.slots];
        regs[0] = input;
        Frame { prog, pc: 0, regs }
    }
}

const CACHE_LIMIT: usize = 4096;

/// Runs machine programs, caching decoded programs by code.
#[derive(Default)]
pub struct Evaluator {
    cache: HashMap<Nat, Rc<Compiled>>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    fn compiled(&mut self, code: &Nat) -> Rc<Compiled> {
        if let Some(c) = self.cache.get(code) {
            return c.clone();
        }
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        let c = Rc::new(Compiled::new(&Program::from_code(code)));
        self.cache.insert(code.clone(), c.clone());
        c
    }

    /// Runs program `code` on `input` for at most `fuel` steps.
    pub fn run(&mut self, code: &Nat, input: &Nat, fuel: u64) -> StepObservation {
        let mut steps = 0u64;
        let root = self.compiled(code);
        let mut stack = vec![Frame::new(root, input.clone())];
        loop {
            let top = stack.last_mut().unwrap();
            if top.pc >= top.prog.ops.len() {
                let value = std::mem::take(&mut top.regs[0]);
                stack.pop();
                match stack.last_mut() {
                    None => return StepObservation::Halted { value, steps },
                    Some(caller) => {
                        if let Op::Call(d, _, _) = caller.prog.ops[caller.pc] {
                            caller.regs[d] = value;
                        }
                        caller.pc += 1;
                        continue;
                    }
                }
            }
            if steps == fuel {
                return StepObservation::OutOfFuel { fuel };
            }
            steps += 1;
            let prog = top.prog.clone();
            let regs = &mut top.regs;
            let mut next = top.pc + 1;
            match &prog.ops[top.pc] {
                Op::Inc(r) => regs[*r] += 1u32,
                Op::Dec(r) => {
                    if !regs[*r].is_zero() {
                        regs[*r] -= 1u32;
                    }
                }
                Op::Jz(r, t) => {
                    if regs[*r].is_zero() {
                        next = *t;
                    }
                }
                Op::Set(r, c) => regs[*r] = c.clone(),
                Op::Copy(d, s) => regs[*d] = regs[*s].clone(),
                Op::Add(d, s) => {
                    let v = regs[*s].clone();
                    regs[*d] += v;
                }
                Op::Sub(d, s) => {
                    regs[*d] = if regs[*d] > regs[*s] {
                        &regs[*d] - &regs[*s]
                    } else {
                        Nat::zero()
                    };
                }
                Op::Mul(d, s) => regs[*d] = &regs[*d] * &regs[*s],
                Op::Div(d, s) => {
                    regs[*d] = if regs[*s].is_zero() {
                        Nat::zero()
                    } else {
                        &regs[*d] / &regs[*s]
                    };
                }
                Op::Mod(d, s) => {
                    if !regs[*s].is_zero() {
                        regs[*d] = &regs[*d] % &regs[*s];
                    }
                }
                Op::Pair(d, a, b) => regs[*d] = pair(&regs[*a], &regs[*b]),
                Op::Unpair(d, e, s) => {
                    let (x, y) = unpair(&regs[*s]);
                    regs[*d] = x;
                    regs[*e] = y;
                }
                Op::CPair(d, a, b) => regs[*d] = compact_pair(&regs[*a], &regs[*b]),
                Op::CUnpair(d, e, s) => {
                    let (x, y) = compact_unpair(&regs[*s]);
                    regs[*d] = x;
                    regs[*e] = y;
                }
                Op::Call(_, c, a) => {
                    let callee_code = regs[*c].clone();
                    let arg = regs[*a].clone();
                    let callee = self.compiled(&callee_code);
                    stack.push(Frame::new(callee, arg));
                    continue;
                }
            }
            stack.last_mut().unwrap().pc = next;
        }
    }

    pub fn exact(&mut self, code: &Nat, k: u64, input: &Nat) -> Option<Nat> {
        match self.run(code, input, k) {
            StepObservation::Halted { value, steps } if steps == k => Some(value),
            _ => None,
        }
    }
}

thread_local! {
    static EVALUATOR: RefCell<Evaluator> = RefCell::new(Evaluator::new());
}

/// Fuel-bounded evaluation of program `e` on input `n`.
pub fn eval_fuel(e: &Nat, n: &Nat, fuel: u64) -> StepObservation {
    EVALUATOR.with(|ev| ev.borrow_mut().run(e, n, fuel))
}

/// `φ_e^k(n)`: the output if the program halts in exactly `k` steps.
pub fn eval_exact(e: &Nat, k: u64, n: &Nat) -> Option<Nat> {
    EVALUATOR.with(|ev| ev.borrow_mut().exact(e, k, n))
}

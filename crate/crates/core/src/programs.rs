//! Stock machine programs used by the reductions.
//!
//! Oracle algorithms are written as *steppers*: plain programs taking
//! `pair(state, answer)` and returning either `2v` (finished with `v`) or
//! `2·pair(q, state') + 1` (ask `q`, continue from `state'` with the answer).
//! The shared [`resume`] program turns a stepper and a state into an oracle
//! code, so one query of the oracle code is one query of the stepper.
//!
//! A *relative function* is a plain program mapping `n` to an oracle code;
//! [`launcher`] builds one from a stepper whose first state variable is `n`.

use std::sync::OnceLock;

use crate::machine::builder::{tag, Arg, Asm, Label, Reg, Template, ZERO};
use crate::machine::Program;
use crate::Nat;

/// `a ↦ 2a`: continuation returning the oracle's answer.
pub fn wrap() -> &'static Nat {
    static CODE: OnceLock<Nat> = OnceLock::new();
    CODE.get_or_init(|| {
        let mut a = Asm::new();
        a.add(0, 0);
        a.finish().code()
    })
}

fn smn_template() -> Template {
    Template::new()
        .op(tag::SET, vec![1.into(), Arg::Hole(0)])
        .op(tag::PAIR, vec![0.into(), 1.into(), 0.into()])
        .op(tag::SET, vec![2.into(), Arg::Hole(1)])
        .op(tag::CALL, vec![0.into(), 2.into(), 0.into()])
}

/// Input `pair(ctx, a)` with `ctx = pair(P, pair(s, R))`, `R` this program's
/// own code. Runs stepper `P` on `pair(s, a)` and re-encodes its request as
/// an oracle code whose continuation is `smn(R, ctx')`.
pub fn resume() -> &'static Nat {
    static CODE: OnceLock<Nat> = OnceLock::new();
    CODE.get_or_init(|| {
        let mut a = Asm::new();
        let even = a.label();
        a.unpair(1, 2, 0)
            .unpack(1, &[3, 4, 5])
            .pair(6, 4, 2)
            .call(7, 3, 6)
            .copy(8, 7)
            .set(9, 2u32)
            .modulo(8, 9)
            .jz(8, even)
            .div(7, 9)
            .unpair(16, 17, 7)
            .pack(18, &[3, 17, 5])
            .quote(19, &smn_template(), &[18, 5])
            .ret_step(16, 19);
        a.bind(even);
        a.copy(0, 7).halt();
        a.finish().code()
    })
}

const ANSWER: Reg = 1;
const PHASE: Reg = 2;
const STATE: Reg = 20;
const S1: Reg = 21;
const S2: Reg = 22;
const S3: Reg = 23;
const VAR_REGS: [Reg; 17] = [3, 4, 5, 6, 7, 8, 9, 16, 17, 18, 19, 24, 25, 26, 27, 28, 29];

/// First register free for stepper bodies; not preserved across queries.
pub const SCRATCH: Reg = 30;

/// Assembler for steppers. Variables survive queries; the answer to the
/// last query is in [`Stepper::answer`].
pub struct Stepper {
    pub asm: Asm,
    vars: Vec<Reg>,
    phases: Vec<Label>,
    dispatch: Label,
}

impl Stepper {
    /// Returns the stepper and its variable registers. Code emitted next
    /// runs on the first call, with variable 0 holding the input and the
    /// other variables 0.
    pub fn new(nvars: usize) -> (Stepper, Vec<Reg>) {
        assert!(nvars >= 1 && nvars <= VAR_REGS.len());
        let vars = VAR_REGS[..nvars].to_vec();
        let mut asm = Asm::new();
        let dispatch = asm.label();
        let entry = asm.label();
        let mut layout = vec![PHASE];
        layout.extend(&vars);
        asm.unpair(STATE, ANSWER, 0).unpack(STATE, &layout).goto(dispatch);
        asm.bind(entry);
        let s = Stepper { asm, vars: vars.clone(), phases: vec![entry], dispatch };
        (s, vars)
    }

    pub fn answer(&self) -> Reg {
        ANSWER
    }

    fn new_phase(&mut self) -> (u64, Label) {
        let l = self.asm.label();
        self.phases.push(l);
        ((self.phases.len() - 1) as u64, l)
    }

    /// Asks `q`; execution continues at `resume_at` with the answer.
    pub fn ask(&mut self, q: Reg, resume_at: Label) {
        let id = match self.phases.iter().position(|l| *l == resume_at) {
            Some(i) => i as u64,
            None => {
                self.phases.push(resume_at);
                (self.phases.len() - 1) as u64
            }
        };
        let mut layout = vec![PHASE];
        layout.extend(&self.vars);
        self.asm.set(PHASE, id).pack(STATE, &layout).ret_step(q, STATE);
    }

    /// Runs the oracle code in `c` to completion, leaving its value in `c`.
    /// `e` must be a variable.
    pub fn run_code(&mut self, c: Reg, e: Reg) {
        assert!(self.vars.contains(&e));
        let top = self.asm.label();
        let pure = self.asm.label();
        let (_, back) = self.new_phase();
        self.asm.bind(top);
        self.asm.copy(S1, c).set(S2, 2u32).modulo(S1, S2).jz(S1, pure);
        self.asm.copy(S1, c).div(S1, S2).unpair(S3, e, S1);
        self.ask(S3, back);
        self.asm.bind(back);
        self.asm.call(c, e, ANSWER).goto(top);
        self.asm.bind(pure);
        self.asm.div(c, S2);
    }

    pub fn finish(mut self) -> Nat {
        let d = self.dispatch;
        self.asm.bind(d);
        for (i, l) in self.phases.clone().into_iter().enumerate() {
            self.asm.jeq_const(PHASE, i as u64, l);
        }
        self.asm.finish().code()
    }
}

/// Relative function `n ↦ oracle code of stepper P started with variable 0 = n`.
pub fn launcher(stepper: &Nat, nvars: usize) -> Nat {
    let mut a = Asm::new();
    let mut layout = vec![ZERO, 0];
    layout.extend(std::iter::repeat_n(ZERO, nvars - 1));
    a.pack(1, &layout)
        .set(2, stepper.clone())
        .set(3, resume().clone())
        .pack(4, &[2, 1, 3])
        .pair(4, 4, ZERO)
        .call(0, 3, 4);
    a.finish().code()
}

/// `n ↦ Step(n, wrap)`: asks the oracle about `n` and returns the answer.
pub fn identity_reducer() -> Nat {
    let mut a = Asm::new();
    a.set(1, wrap().clone()).pair(0, 0, 1).add(0, 0).inc(0);
    a.finish().code()
}

/// Like [`identity_reducer`] but returns the answer plus one.
pub fn off_by_one_reducer() -> Nat {
    let mut w = Asm::new();
    w.inc(0).add(0, 0);
    let wrap_succ = w.finish().code();
    let mut a = Asm::new();
    a.set(1, wrap_succ).pair(0, 0, 1).add(0, 0).inc(0);
    a.finish().code()
}

/// `n ↦ Pure(v)` without asking anything.
pub fn constant_reducer(v: &Nat) -> Nat {
    let mut a = Asm::new();
    a.set(0, v << 1u32);
    a.finish().code()
}

/// Query `a` where `n = pair(a, b)`; answer 1 iff the oracle says `b`.
pub fn graph_to_oracle_stepper() -> (Nat, usize) {
    let (mut s, v) = Stepper::new(1);
    let n = v[0];
    let (a_reg, b_reg) = (SCRATCH, SCRATCH + 1);
    let check = s.asm.label();
    let yes = s.asm.label();
    s.asm.unpair(a_reg, b_reg, n);
    s.ask(a_reg, check);
    s.asm.bind(check);
    s.asm.unpair(a_reg, b_reg, n).jeq(ANSWER, b_reg, yes).ret_pure_const(0u32);
    s.asm.bind(yes);
    s.asm.ret_pure_const(1u32);
    (s.finish(), 1)
}

/// Query `pair(n, 0), pair(n, 1), …` until the answer is nonzero; return
/// that second component.
pub fn oracle_from_graph_stepper() -> (Nat, usize) {
    let (mut s, v) = Stepper::new(2);
    let (n, m) = (v[0], v[1]);
    let top = s.asm.label();
    let check = s.asm.label();
    let miss = s.asm.label();
    s.asm.bind(top);
    s.asm.pair(SCRATCH, n, m);
    s.ask(SCRATCH, check);
    s.asm.bind(check);
    s.asm.jz(ANSWER, miss).ret_pure(m);
    s.asm.bind(miss);
    s.asm.inc(m).goto(top);
    (s.finish(), 2)
}

/// Query `0, 1, 2, …` until the answer equals `n`; return the index.
pub fn section_stepper() -> (Nat, usize) {
    let (mut s, v) = Stepper::new(2);
    let (n, m) = (v[0], v[1]);
    let top = s.asm.label();
    let check = s.asm.label();
    let hit = s.asm.label();
    s.asm.bind(top);
    s.ask(m, check);
    s.asm.bind(check);
    s.asm.jeq(ANSWER, n, hit).inc(m).goto(top);
    s.asm.bind(hit);
    s.asm.ret_pure(m);
    (s.finish(), 2)
}

/// Emits: ask `0..bound-1` in order, collecting answers; afterwards `list`
/// holds the compact list `⟨head, answer₀, …⟩`. Uses `i` and `rev` as variables.
fn collect_prefix(s: &mut Stepper, head: Reg, bound: Reg, i: Reg, rev: Reg, list: Reg) {
    let top = s.asm.label();
    let got = s.asm.label();
    let build = s.asm.label();
    let pop = s.asm.label();
    let done = s.asm.label();
    s.asm.bind(top);
    s.asm.jeq(i, bound, build);
    s.ask(i, got);
    s.asm.bind(got);
    s.asm.ccons(rev, ANSWER, rev).inc(i).goto(top);
    s.asm.bind(build);
    s.asm.set(list, 0u32);
    s.asm.bind(pop);
    s.asm.jz(rev, done).dec(rev).cunpair(SCRATCH, rev, rev).ccons(list, SCRATCH, list).goto(pop);
    s.asm.bind(done);
    s.asm.ccons(list, head, list);
}

/// The Turing reduction behind a wtt certificate: compute the bound, ask
/// every position below it, run the evaluator on the collected list.
pub fn wtt_stepper(bound: &Nat, evaluator: &Nat) -> (Nat, usize) {
    let (mut s, v) = Stepper::new(5);
    let (n, b, i, rev, list) = (v[0], v[1], v[2], v[3], v[4]);
    s.asm.call_const(b, bound, n);
    collect_prefix(&mut s, n, b, i, rev, list);
    s.asm.call_const(SCRATCH, evaluator, list).ret_pure(SCRATCH);
    (s.finish(), 5)
}

/// Reduction of the diagonal oracle to the halting oracle `κ(pair(e, x))`.
/// For `m = pair(e0, e1)`: answer 0 iff `e0` halts on `m` with some `B`
/// and `e1` halts on `⟨m, κ(0), …, κ(B-1)⟩` with value 1; otherwise 1.
pub fn diagonal_stepper() -> (Nat, usize) {
    let (mut s, v) = Stepper::new(7);
    let (m, b, i, rev, list, e0, e1) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    let bound_known = s.asm.label();
    let list_known = s.asm.label();
    let one = s.asm.label();
    let zero = s.asm.label();
    s.asm.unpair(e0, e1, m).pair(SCRATCH, e0, m);
    s.ask(SCRATCH, bound_known);
    s.asm.bind(bound_known);
    s.asm.jz(ANSWER, one).call(b, e0, m);
    collect_prefix(&mut s, m, b, i, rev, list);
    s.asm.pair(SCRATCH, e1, list);
    s.ask(SCRATCH, list_known);
    s.asm.bind(list_known);
    s.asm.jz(ANSWER, one).call(SCRATCH, e1, list).jeq_const(SCRATCH, 1u32, zero);
    s.asm.bind(one);
    s.asm.ret_pure_const(1u32);
    s.asm.bind(zero);
    s.asm.ret_pure_const(0u32);
    (s.finish(), 7)
}

/// Emits the word-application loop: apply the relative functions listed in
/// `w` (a word, see [`word_code`]) to `x` in order. Jumps to `done`.
#[allow(clippy::too_many_arguments)]
fn apply_word(s: &mut Stepper, x: Reg, w: Reg, cnt: Reg, cur: Reg, e: Reg, done: Label) {
    let next_letter = s.asm.label();
    let repeat = s.asm.label();
    s.asm.bind(next_letter);
    s.asm.jz(w, done).dec(w).cunpair(SCRATCH, w, w).cunpair(cur, cnt, SCRATCH);
    s.asm.bind(repeat);
    s.asm.jz(cnt, next_letter).dec(cnt).call(x, cur, x);
    s.run_code(x, e);
    s.asm.goto(repeat);
}

/// Code of a word: `[] ↦ 0`, `(c, k) : w ↦ 1 + cpair(cpair(c, k), w)`.
pub fn word_code(letters: &[(Nat, Nat)]) -> Nat {
    use crate::encode::compact_pair;
    letters.iter().rev().fold(Nat::from(0u32), |w, (c, k)| compact_pair(&compact_pair(c, k), &w) + 1u32)
}

/// Relative function applying a fixed word of relative functions.
pub fn word_function(letters: &[(Nat, Nat)]) -> Nat {
    let (mut s, v) = Stepper::new(5);
    let (x, w, cnt, cur, e) = (v[0], v[1], v[2], v[3], v[4]);
    let done = s.asm.label();
    s.asm.set(w, word_code(letters));
    apply_word(&mut s, x, w, cnt, cur, e, done);
    s.asm.bind(done);
    s.asm.ret_pure(x);
    launcher(&s.finish(), 5)
}

/// Relative function: `f` then `g`.
pub fn compose(f: &Nat, g: &Nat) -> Nat {
    word_function(&[(f.clone(), Nat::from(1u32)), (g.clone(), Nat::from(1u32))])
}

/// The generator images a reduction is extracted from: relative functions
/// on carrier codes.
#[derive(Clone, Debug)]
pub struct GeneratorImages {
    pub k: Nat,
    pub kprime: Nat,
    pub tau0: Nat,
    pub s: Nat,
    pub s_inv: Nat,
}

/// Extracted reduction: on `n`, search carrier points `m = 0, 1, …`
/// comparing `K` with `Tₙ K Tₙ` (answer 0 on a difference), then `K'` with
/// `Tₙ K' Tₙ` (answer 1), where `Tₙ = S^n T₀ S^-n`.
pub fn iso_stepper(g: &GeneratorImages) -> (Nat, usize) {
    let (mut s, v) = Stepper::new(12);
    let (n, m, side, wa, wb, first, x, w, cnt, cur, e, ret) =
        (v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]);
    let point = s.asm.label();
    let side_top = s.asm.label();
    let pick_k = s.asm.label();
    let picked = s.asm.label();
    let after_a = s.asm.label();
    let after_b = s.asm.label();
    let same = s.asm.label();
    let to_right = s.asm.label();
    let apply = s.asm.label();
    let applied = s.asm.label();
    let (t1, t2) = (SCRATCH, SCRATCH + 1);

    let push = |s: &mut Stepper, list: Reg, code: &Nat, count: Option<Reg>| {
        s.asm.set(t1, code.clone());
        match count {
            Some(r) => s.asm.copy(t2, r),
            None => s.asm.set(t2, 1u32),
        };
        s.asm.cpair(t1, t1, t2).ccons(list, t1, list);
    };
    let push_conjugator = |s: &mut Stepper, list: Reg| {
        push(s, list, &g.s, Some(n));
        push(s, list, &g.tau0, None);
        push(s, list, &g.s_inv, Some(n));
    };

    s.asm.bind(point);
    s.asm.set(side, 0u32);
    s.asm.bind(side_top);
    s.asm.set(wb, 0u32);
    push_conjugator(&mut s, wb);
    s.asm.jz(side, pick_k).set(cur, g.kprime.clone()).goto(picked);
    s.asm.bind(pick_k);
    s.asm.set(cur, g.k.clone());
    s.asm.bind(picked);
    s.asm.set(t2, 1u32).cpair(t1, cur, t2).ccons(wb, t1, wb).set(wa, 0u32).ccons(wa, t1, wa);
    push_conjugator(&mut s, wb);
    s.asm.copy(x, m).copy(w, wa).set(ret, 0u32).goto(apply);

    s.asm.bind(after_a);
    s.asm.copy(first, x).copy(x, m).copy(w, wb).set(ret, 1u32).goto(apply);

    s.asm.bind(after_b);
    s.asm.jeq(x, first, same).ret_pure(side);
    s.asm.bind(same);
    s.asm.jz(side, to_right).inc(m).goto(point);
    s.asm.bind(to_right);
    s.asm.set(side, 1u32).goto(side_top);

    s.asm.bind(apply);
    apply_word(&mut s, x, w, cnt, cur, e, applied);
    s.asm.bind(applied);
    s.asm.jz(ret, after_a).goto(after_b);
    (s.finish(), 12)
}

/// On ℤ* codes: `z ↦ z + 1`, Star fixed.
pub fn shift() -> Nat {
    let mut a = Asm::new();
    let even = a.label();
    let below = a.label();
    a.halt_if_zero(0).copy(1, 0).set(2, 2u32).modulo(1, 2).jz(1, even).inc(0).inc(0).halt();
    a.bind(even);
    a.set(3, 2u32).jne(0, 3, below).set(0, 1u32).halt();
    a.bind(below);
    a.dec(0).dec(0);
    a.finish().code()
}

/// On ℤ* codes: `z ↦ z - 1`, Star fixed.
pub fn shift_inv() -> Nat {
    let mut a = Asm::new();
    let even = a.label();
    let above = a.label();
    a.halt_if_zero(0).copy(1, 0).set(2, 2u32).modulo(1, 2).jz(1, even);
    a.set(3, 1u32).jne(0, 3, above).set(0, 2u32).halt();
    a.bind(above);
    a.dec(0).dec(0).halt();
    a.bind(even);
    a.inc(0).inc(0);
    a.finish().code()
}

/// On ℤ* codes: swap the point with code `cn` and Star.
pub fn tau(cn: &Nat) -> Nat {
    let mut a = Asm::new();
    let other = a.label();
    let star = a.label();
    a.set(1, cn.clone()).jne(0, 1, other).set(0, 0u32).halt();
    a.bind(other);
    a.jz(0, star).halt();
    a.bind(star);
    a.set(0, cn.clone());
    a.finish().code()
}

/// Relative function on carrier codes `2·zc + b`: `(x, b) ↦ (p(x), b)`.
pub fn base(p: &Nat) -> Nat {
    let mut a = Asm::new();
    a.copy(1, 0)
        .set(2, 2u32)
        .div(1, 2)
        .modulo(0, 2)
        .set(3, p.clone())
        .call(1, 3, 1)
        .mul(1, 2)
        .add(0, 1)
        .add(0, 0);
    a.finish().code()
}

/// Relative function on carrier codes: `(x, b) ↦ (x, b xor q(x))`, where
/// `q` is a relative function on ℤ* codes returning bits.
pub fn lift(q: &Nat) -> Nat {
    let (mut s, v) = Stepper::new(3);
    let (c, e, t) = (v[0], v[1], v[2]);
    let (t1, t2, t3) = (SCRATCH, SCRATCH + 1, SCRATCH + 2);
    s.asm.copy(t1, c).set(t2, 2u32).div(t1, t2).call_const(t, q, t1);
    s.run_code(t, e);
    s.asm
        .copy(t1, c)
        .set(t2, 2u32)
        .modulo(t1, t2)
        .add(t1, t)
        .modulo(t1, t2)
        .copy(t3, c)
        .div(t3, t2)
        .mul(t3, t2)
        .add(t3, t1)
        .ret_pure(t3);
    launcher(&s.finish(), 3)
}

/// `q ∘ p` for a relative function `q` and a plain program `p`.
pub fn precompose(q: &Nat, p: &Nat) -> Nat {
    let mut a = Asm::new();
    a.set(1, p.clone()).call(0, 1, 0).set(1, q.clone()).call(0, 1, 0);
    a.finish().code()
}

/// `Int z ↦ χ(|z|)`, `Star ↦ star_bit`, as a relative function on ℤ* codes.
pub fn k_program(star_bit: u32) -> Nat {
    let mut a = Asm::new();
    let star = a.label();
    a.jz(0, star)
        .set(1, 2u32)
        .div(0, 1)
        .set(1, wrap().clone())
        .pair(0, 0, 1)
        .add(0, 0)
        .inc(0)
        .halt();
    a.bind(star);
    a.set(0, 2 * star_bit);
    a.finish().code()
}

/// `k ∘ s⁻¹` read through the renaming `χ'(j + 1) = χ(j)`:
/// `Int m ↦ χ'(|m - 1| + 1)`, `Star ↦ star_bit`.
pub fn shifted_k_program(star_bit: u32) -> Nat {
    let mut a = Asm::new();
    let star = a.label();
    let even = a.label();
    let query = a.label();
    let at_zero = a.label();
    a.jz(0, star).copy(1, 0).set(2, 2u32).modulo(1, 2).div(0, 2).jz(1, even);
    a.jz(0, at_zero).goto(query);
    a.bind(at_zero);
    a.set(0, 2u32).goto(query);
    a.bind(even);
    a.inc(0).inc(0);
    a.bind(query);
    a.set(1, wrap().clone()).pair(0, 0, 1).add(0, 0).inc(0).halt();
    a.bind(star);
    a.set(0, 2 * star_bit);
    a.finish().code()
}

/// Plain-program identity, usable wherever a pure permutation is expected.
pub fn identity_program() -> Nat {
    Program::default().code()
}

//! Bijective codings between naturals and the structured data the machines
//! operate on.
//!
//! Four codecs are fixed here:
//!
//! * Cantor pairing `pair(a, b) = (a+b)(a+b+1)/2 + b`, used wherever a pair
//!   of naturals travels as one number (oracle codes, graph queries, tuples);
//! * the cons-recursive list codec `[] ↦ 0`, `x:xs ↦ 1 + pair(x, code(xs))`;
//! * the parity split `θ : ℕ ≅ ℕ + ℕ×ℕ` deciding "answer now" versus
//!   "query, then continue";
//! * the `ℤ + 1` codec with the extra point at 0.
//!
//! Program codes use a fifth, length-efficient pairing ([`compact_pair`]);
//! see the `machine` module for why.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Nat;

/// Cantor pairing.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    let s: Nat = a + b;
    let tri = (&s * (&s + 1u32)) >> 1u32;
    tri + b
}

/// Inverse of [`pair`].
pub fn unpair(n: &Nat) -> (Nat, Nat) {
    let w: Nat = (((n << 3u32) + 1u32).sqrt() - 1u32) >> 1u32;
    let tri = (&w * (&w + 1u32)) >> 1u32;
    let b = n - tri;
    let a = w - &b;
    (a, b)
}

pub fn pair_u64(a: u64, b: u64) -> Nat {
    pair(&Nat::from(a), &Nat::from(b))
}

/// Self-delimiting prefix code for `a`, written least-significant bit first.
/// Returns the codeword value and its length in bits. The code is complete:
/// every bit stream with finitely many ones starts with exactly one codeword.
fn prefix_codeword(a: &Nat) -> (Nat, u64) {
    let a1 = a + 1u32;
    let k = a1.bits() - 1;
    let d = a1 - (Nat::one() << k);
    let k1 = k + 1;
    let j = 63 - k1.leading_zeros() as u64;
    let dk = k1 - (1u64 << j);
    let ones = (Nat::one() << j) - 1u32;
    let value = ones | (Nat::from(dk) << (j + 1)) | (d << (2 * j + 1));
    (value, 2 * j + 1 + k)
}

fn bit_slice(n: &Nat, from: u64, len: u64) -> Nat {
    if len == 0 {
        return Nat::zero();
    }
    (n >> from) & ((Nat::one() << len) - 1u32)
}

/// Pairing whose output is only a logarithmic number of bits longer than
/// its inputs: the low bits hold a prefix codeword for `a`, the rest is `b`.
pub fn compact_pair(a: &Nat, b: &Nat) -> Nat {
    let (word, len) = prefix_codeword(a);
    word | (b << len)
}

/// Inverse of [`compact_pair`].
pub fn compact_unpair(n: &Nat) -> (Nat, Nat) {
    let mut pos = 0u64;
    while n.bit(pos) {
        pos += 1;
    }
    let j = pos;
    pos += 1;
    let dk = bit_slice(n, pos, j).to_u64().expect("length field fits in u64");
    pos += j;
    let k = (1u64 << j) + dk - 1;
    let d = bit_slice(n, pos, k);
    pos += k;
    let a = (Nat::one() << k) + d - 1u32;
    (a, n >> pos)
}

/// A finite list of naturals together with its code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NatList(pub Vec<Nat>);

impl NatList {
    pub fn new(items: Vec<Nat>) -> Self {
        NatList(items)
    }

    pub fn items(&self) -> &[Nat] {
        &self.0
    }

    pub fn encode(&self) -> Nat {
        list_encode(&self.0)
    }

    pub fn decode(n: &Nat) -> Self {
        NatList(list_decode(n))
    }
}

impl From<Vec<u64>> for NatList {
    fn from(v: Vec<u64>) -> Self {
        NatList(v.into_iter().map(Nat::from).collect())
    }
}

/// `[] ↦ 0`, `x:xs ↦ 1 + pair(x, code(xs))`.
pub fn list_encode(items: &[Nat]) -> Nat {
    items
        .iter()
        .rev()
        .fold(Nat::zero(), |acc, x| pair(x, &acc) + 1u32)
}

/// `[] ↦ 0`, `x:xs ↦ 1 + compact_pair(x, code(xs))`: size additive in the
/// elements, where [`list_encode`] roughly doubles per element.
pub fn compact_list_encode(items: &[Nat]) -> Nat {
    items
        .iter()
        .rev()
        .fold(Nat::zero(), |acc, x| compact_pair(x, &acc) + 1u32)
}

pub fn compact_list_decode(n: &Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut cur = n.clone();
    while !cur.is_zero() {
        let (head, tail) = compact_unpair(&(cur - 1u32));
        out.push(head);
        cur = tail;
    }
    out
}

pub fn list_decode(n: &Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut cur = n.clone();
    while !cur.is_zero() {
        let (head, tail) = unpair(&(cur - 1u32));
        out.push(head);
        cur = tail;
    }
    out
}

/// One unfolding of an oracle code: answer now, or query and continue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TaggedCode {
    Pure(Nat),
    Step { query: Nat, next: Nat },
}

/// `θ(2n) = Pure(n)`, `θ(2n+1) = Step(unpair(n))`.
pub fn theta(n: &Nat) -> TaggedCode {
    let half = n >> 1u32;
    if n.bit(0) {
        let (query, next) = unpair(&half);
        TaggedCode::Step { query, next }
    } else {
        TaggedCode::Pure(half)
    }
}

pub fn theta_inv(t: &TaggedCode) -> Nat {
    match t {
        TaggedCode::Pure(n) => n << 1u32,
        TaggedCode::Step { query, next } => (pair(query, next) << 1u32) + 1u32,
    }
}

/// `ℤ + 1`: the integers with one extra point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ZStar {
    Int(BigInt),
    Star,
}

impl ZStar {
    pub fn int(z: i64) -> Self {
        ZStar::Int(BigInt::from(z))
    }
}

impl fmt::Display for ZStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZStar::Int(z) => write!(f, "{z}"),
            ZStar::Star => write!(f, "*"),
        }
    }
}

/// `Star ↦ 0`, `z ≥ 0 ↦ 2z+1`, `z < 0 ↦ -2z`.
pub fn zstar_encode(x: &ZStar) -> Nat {
    match x {
        ZStar::Star => Nat::zero(),
        ZStar::Int(z) => {
            let mag: BigUint = z.magnitude().clone();
            if z.is_negative() {
                mag << 1u32
            } else {
                (mag << 1u32) + 1u32
            }
        }
    }
}

pub fn zstar_decode(n: &Nat) -> ZStar {
    if n.is_zero() {
        ZStar::Star
    } else if n.bit(0) {
        ZStar::Int(BigInt::from_biguint(Sign::Plus, n >> 1u32))
    } else {
        ZStar::Int(BigInt::from_biguint(Sign::Minus, n >> 1u32))
    }
}

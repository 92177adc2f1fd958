//! Permutations of ℤ* = ℤ + 1 and ℤ* × 2, and the extraction of a Turing
//! reduction from the images of four generators.
//!
//! Carrier points of ℤ* × 2 are coded `2·zc + b` with `zc` the ℤ* code.
//! A relative permutation is a pair of mutually inverse relative functions
//! (programs `n ↦ oracle code`) on carrier codes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::encode::{zstar_decode, zstar_encode, ZStar};
use crate::machine::eval_fuel;
use crate::oracle::{Oracle, OracleError};
use crate::programs::{self, GeneratorImages};
use crate::reducibility::{run_reduction_at, TuringReduction};
use crate::Nat;

/// Permutations of ℤ* that need no oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PurePerm {
    Identity,
    /// `z ↦ z + 1`, Star fixed.
    Shift,
    ShiftInv,
    /// Swaps `Int(n)` and Star.
    Tau(BigInt),
}

/// The named permutations of ℤ*.
pub fn zstar_permutations(which: &str, n: Option<i64>) -> Option<PurePerm> {
    match (which, n) {
        ("shift", None) => Some(PurePerm::Shift),
        ("shift_inv", None) => Some(PurePerm::ShiftInv),
        ("tau", Some(n)) => Some(PurePerm::Tau(BigInt::from(n))),
        _ => None,
    }
}

impl PurePerm {
    pub fn apply(&self, x: &ZStar) -> ZStar {
        match (self, x) {
            (PurePerm::Identity, _) | (_, ZStar::Star) if !matches!(self, PurePerm::Tau(_)) => x.clone(),
            (PurePerm::Shift, ZStar::Int(z)) => ZStar::Int(z + 1),
            (PurePerm::ShiftInv, ZStar::Int(z)) => ZStar::Int(z - 1),
            (PurePerm::Tau(n), ZStar::Star) => ZStar::Int(n.clone()),
            (PurePerm::Tau(n), ZStar::Int(z)) if z == n => ZStar::Star,
            _ => x.clone(),
        }
    }

    pub fn inverse(&self) -> PurePerm {
        match self {
            PurePerm::Shift => PurePerm::ShiftInv,
            PurePerm::ShiftInv => PurePerm::Shift,
            other => other.clone(),
        }
    }

    /// Plain program acting on ℤ* codes.
    pub fn program(&self) -> Nat {
        match self {
            PurePerm::Identity => programs::identity_program(),
            PurePerm::Shift => programs::shift(),
            PurePerm::ShiftInv => programs::shift_inv(),
            PurePerm::Tau(n) => programs::tau(&zstar_encode(&ZStar::Int(n.clone()))),
        }
    }
}

fn run_plain(p: &Nat, x: &Nat) -> Nat {
    eval_fuel(p, x, 1_000_000).value().expect("permutation programs halt").clone()
}

/// `s^n` (or `s⁻¹^|n|`) applied `|n|` times through the machine programs.
fn shift_power(n: i64, code: Nat) -> Nat {
    let step = if n >= 0 { programs::shift() } else { programs::shift_inv() };
    (0..n.unsigned_abs()).fold(code, |c, _| run_plain(&step, &c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauCheck {
    pub n: i64,
    pub checked: usize,
    /// Points where `τ_n` and `s^n ∘ τ₀ ∘ s^-n` disagree.
    pub counterexamples: Vec<ZStar>,
}

/// Compares `τ_n` with `s^n ∘ τ₀ ∘ s^-n` pointwise, running both sides as
/// machine programs and checking the left side against the host definition.
pub fn tau_decomposition(n: i64, samples: &[ZStar]) -> TauCheck {
    let tau_n = PurePerm::Tau(BigInt::from(n));
    let tau_n_prog = tau_n.program();
    let tau0 = PurePerm::Tau(BigInt::from(0)).program();
    let mut counterexamples = Vec::new();
    for x in samples {
        let c = zstar_encode(x);
        let lhs = run_plain(&tau_n_prog, &c);
        let rhs = shift_power(n, run_plain(&tau0, &shift_power(-n, c)));
        if lhs != rhs || zstar_decode(&lhs) != tau_n.apply(x) {
            counterexamples.push(x.clone());
        }
    }
    TauCheck { n, checked: samples.len(), counterexamples }
}

/// `(k, k')` as relative functions on ℤ* codes: `Int z ↦ χ(|z|)`, and Star
/// maps to 1 for `k`, to 0 for `k'`. The oracle is supplied at evaluation.
pub fn k_encodings() -> (Nat, Nat) {
    (programs::k_program(1), programs::k_program(0))
}

pub fn carrier_encode(x: &ZStar, bit: bool) -> Nat {
    (zstar_encode(x) << 1u32) + (bit as u32)
}

pub fn carrier_decode(c: &Nat) -> (ZStar, bool) {
    (zstar_decode(&(c >> 1u32)), c.bit(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    ZStar,
    ZStarTimesTwo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativePermutation {
    pub forward: Nat,
    pub backward: Nat,
    pub oracle: String,
    pub carrier: Carrier,
}

impl RelativePermutation {
    pub fn apply(&self, chi: &Oracle, x: &Nat, fuel: u64) -> Result<Option<Nat>, OracleError> {
        Ok(run_reduction_at(&self.forward, chi, x, fuel)?.value().cloned())
    }

    pub fn apply_inverse(&self, chi: &Oracle, x: &Nat, fuel: u64) -> Result<Option<Nat>, OracleError> {
        Ok(run_reduction_at(&self.backward, chi, x, fuel)?.value().cloned())
    }

    /// Points among `probes` where either round trip fails.
    pub fn inverse_failures(&self, chi: &Oracle, probes: &[Nat], fuel: u64) -> Result<Vec<Nat>, OracleError> {
        let mut bad = Vec::new();
        for x in probes {
            let there = self.apply(chi, x, fuel)?;
            let back = match &there {
                Some(y) => self.apply_inverse(chi, y, fuel)?,
                None => None,
            };
            let other = match self.apply_inverse(chi, x, fuel)? {
                Some(y) => self.apply(chi, &y, fuel)?,
                None => None,
            };
            if back.as_ref() != Some(x) || other.as_ref() != Some(x) {
                bad.push(x.clone());
            }
        }
        Ok(bad)
    }

    pub fn inverse(&self) -> RelativePermutation {
        RelativePermutation { forward: self.backward.clone(), backward: self.forward.clone(), ..self.clone() }
    }
}

/// `(x, b) ↦ (x, b xor q(x))`; its own inverse.
pub fn wreath_lift(q: &Nat, oracle: &str) -> RelativePermutation {
    let f = programs::lift(q);
    RelativePermutation { forward: f.clone(), backward: f, oracle: oracle.into(), carrier: Carrier::ZStarTimesTwo }
}

/// `(x, b) ↦ (p(x), b)`.
pub fn base_lift(p: &PurePerm) -> RelativePermutation {
    RelativePermutation {
        forward: programs::base(&p.program()),
        backward: programs::base(&p.inverse().program()),
        oracle: "none".into(),
        carrier: Carrier::ZStarTimesTwo,
    }
}

/// Points where `lift(q ∘ p)` and `base(p)⁻¹ ∘ lift(q) ∘ base(p)` differ.
pub fn conjugation_law_failures(
    q: &Nat,
    p: &PurePerm,
    chi: &Oracle,
    points: &[Nat],
    fuel: u64,
) -> Result<Vec<Nat>, OracleError> {
    let lhs = wreath_lift(&programs::precompose(q, &p.program()), chi.name());
    let lq = wreath_lift(q, chi.name());
    let bp = base_lift(p);
    let mut bad = Vec::new();
    for x in points {
        let left = lhs.apply(chi, x, fuel)?;
        let mut right = bp.apply(chi, x, fuel)?;
        if let Some(y) = right {
            right = lq.apply(chi, &y, fuel)?;
        }
        if let Some(y) = right {
            right = bp.apply_inverse(chi, &y, fuel)?;
        }
        if left.is_none() || left != right {
            bad.push(x.clone());
        }
    }
    Ok(bad)
}

/// Images of `lift(k)`, `lift(k')`, `base(τ₀)` and `base(s)` under a
/// group isomorphism, as permutations relative to the target oracle.
#[derive(Clone, Debug)]
pub struct IsoData {
    pub image_k: RelativePermutation,
    pub image_kprime: RelativePermutation,
    pub image_tau0: RelativePermutation,
    pub image_s: RelativePermutation,
}

impl IsoData {
    /// The identity isomorphism: the target oracle is the source oracle.
    pub fn identity(oracle: &str) -> Self {
        IsoData {
            image_k: wreath_lift(&programs::k_program(1), oracle),
            image_kprime: wreath_lift(&programs::k_program(0), oracle),
            image_tau0: base_lift(&PurePerm::Tau(BigInt::from(0))),
            image_s: base_lift(&PurePerm::Shift),
        }
    }

    /// Conjugation by `base(s)`, read against the renamed oracle
    /// `χ'(0) = 0`, `χ'(j + 1) = χ(j)` (see [`renamed_oracle`]).
    pub fn shift_renaming(oracle: &str) -> Self {
        IsoData {
            image_k: wreath_lift(&programs::shifted_k_program(1), oracle),
            image_kprime: wreath_lift(&programs::shifted_k_program(0), oracle),
            image_tau0: base_lift(&PurePerm::Tau(BigInt::from(1))),
            image_s: base_lift(&PurePerm::Shift),
        }
    }

    /// [`IsoData::shift_renaming`] with the image of `s` replaced by the
    /// identity: still permutations, but not a homomorphism image.
    pub fn corrupted(oracle: &str) -> Self {
        IsoData { image_s: base_lift(&PurePerm::Identity), ..Self::shift_renaming(oracle) }
    }

    pub fn preset(name: &str, oracle: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity(oracle)),
            "shift-renaming" => Some(Self::shift_renaming(oracle)),
            "corrupted" => Some(Self::corrupted(oracle)),
            _ => None,
        }
    }

    fn generators(&self) -> [(&'static str, &RelativePermutation); 4] {
        [
            ("image_k", &self.image_k),
            ("image_kprime", &self.image_kprime),
            ("image_tau0", &self.image_tau0),
            ("image_s", &self.image_s),
        ]
    }
}

/// `χ'(0) = 0`, `χ'(j + 1) = χ(j)`.
pub fn renamed_oracle(chi: &Oracle) -> Oracle {
    let inner = chi.clone();
    Oracle::fallible(format!("renamed:{}", chi.name()), move |j| {
        if j.bits() == 0 {
            Ok(Nat::from(0u32))
        } else {
            inner.answer(&(j - 1u32))
        }
    })
}

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("{generator} is not a permutation: inverse law fails at carrier point {point}")]
    NotAPermutation { generator: &'static str, point: Nat },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Number of carrier points each generator's inverse law is checked on.
pub const PROBES: u64 = 50;

/// Checks the inverse law of every generator image on the first
/// [`PROBES`] carrier points, then emits the extracted reduction.
pub fn reduction_from_iso(iso: &IsoData, chi_tgt: &Oracle, fuel: u64) -> Result<TuringReduction, IsoError> {
    let probes: Vec<Nat> = (0..PROBES).map(Nat::from).collect();
    for (generator, perm) in iso.generators() {
        if let Some(point) = perm.inverse_failures(chi_tgt, &probes, fuel)?.into_iter().next() {
            return Err(IsoError::NotAPermutation { generator, point });
        }
    }
    let images = GeneratorImages {
        k: iso.image_k.forward.clone(),
        kprime: iso.image_kprime.forward.clone(),
        tau0: iso.image_tau0.forward.clone(),
        s: iso.image_s.forward.clone(),
        s_inv: iso.image_s.backward.clone(),
    };
    let (p, k) = programs::iso_stepper(&images);
    Ok(TuringReduction {
        reducer: programs::launcher(&p, k),
        source: "iso-source".into(),
        target: chi_tgt.name().into(),
    })
}

/// Whether the relative functions `k` and `k ∘ τ_n` differ on ℤ* codes
/// `0..probes`.
pub fn k_differs_from_conjugate(k: &Nat, n: u64, chi: &Oracle, probes: u64, fuel: u64) -> Result<bool, OracleError> {
    let tau = PurePerm::Tau(BigInt::from(n)).program();
    let kt = programs::precompose(k, &tau);
    for c in 0..probes {
        let c = Nat::from(c);
        let a = run_reduction_at(k, chi, &c, fuel)?.value().cloned();
        let b = run_reduction_at(&kt, chi, &c, fuel)?.value().cloned();
        if a != b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// ℤ* points with `|z| ≤ bound`, plus Star.
pub fn zstar_points(bound: i64) -> Vec<ZStar> {
    let mut v: Vec<ZStar> = (-bound..=bound).map(ZStar::int).collect();
    v.push(ZStar::Star);
    v
}

/// Small integer view of a ℤ* point, for reports.
pub fn zstar_small(x: &ZStar) -> Option<i64> {
    match x {
        ZStar::Int(z) if z.abs() < BigInt::from(i64::MAX) => z.to_i64(),
        _ => None,
    }
}

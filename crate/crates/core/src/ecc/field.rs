use serde::{Deserialize, Serialize};

use super::CodeError;
use crate::math::is_prime;

/// The field of residues modulo a prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, CodeError> {
        if is_prime(p as u64) {
            Ok(PrimeField { p })
        } else {
            Err(CodeError::NotPrime(p as u64))
        }
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn check(&self, value: u64) -> Result<u32, CodeError> {
        if value < self.p as u64 {
            Ok(value as u32)
        } else {
            Err(CodeError::NotInField {
                value,
                modulus: self.p,
            })
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        let mut base = base % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(&self, a: u32) -> Result<u32, CodeError> {
        if a.is_multiple_of(self.p) {
            return Err(CodeError::InverseOfZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Applies `op` to `operands`. The exponent of `Pow` is any
    /// non-negative integer; every other operand must be a field element.
    pub fn apply(&self, op: FieldOp, operands: &[u64]) -> Result<u32, CodeError> {
        let expected = match op {
            FieldOp::Inv => 1,
            FieldOp::Add | FieldOp::Mul | FieldOp::Pow => 2,
        };
        if operands.len() != expected {
            return Err(CodeError::Arity {
                op,
                expected,
                found: operands.len(),
            });
        }
        let a = self.check(operands[0])?;
        match op {
            FieldOp::Add => Ok(self.add(a, self.check(operands[1])?)),
            FieldOp::Mul => Ok(self.mul(a, self.check(operands[1])?)),
            FieldOp::Pow => Ok(self.pow(a, operands[1])),
            FieldOp::Inv => self.inv(a),
        }
    }
}

/// `op(operands)` over GF(`p`).
pub fn field_arith(p: u32, op: FieldOp, operands: &[u64]) -> Result<u32, CodeError> {
    PrimeField::new(p)?.apply(op, operands)
}

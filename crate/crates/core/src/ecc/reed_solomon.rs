use std::collections::HashSet;

use super::{CodeError, PrimeField};
use crate::math::Rational;

/// A Reed–Solomon code over a prime field: message `(a_1, …, a_r)` maps to
/// the evaluations of `a_1 + a_2 x + … + a_r x^{r-1}` at the `m` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    field: PrimeField,
    message_length: usize,
    eval_points: Vec<u32>,
}

impl CodeSpec {
    /// RS code over GF(`p`) evaluated at `0, 1, …, m-1`.
    pub fn reed_solomon(p: u32, message_length: usize, block_length: usize) -> Result<Self, CodeError> {
        let field = PrimeField::new(p)?;
        check_lengths(&field, message_length, block_length)?;
        let points = (0..block_length as u32).collect();
        Self::with_eval_points(field, message_length, points)
    }

    pub fn with_eval_points(
        field: PrimeField,
        message_length: usize,
        eval_points: Vec<u32>,
    ) -> Result<Self, CodeError> {
        check_lengths(&field, message_length, eval_points.len())?;
        let mut seen = HashSet::new();
        for &point in &eval_points {
            field.check(point as u64)?;
            if !seen.insert(point) {
                return Err(CodeError::RepeatedEvalPoint(point));
            }
        }
        Ok(CodeSpec {
            field,
            message_length,
            eval_points,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn message_length(&self) -> usize {
        self.message_length
    }

    pub fn block_length(&self) -> usize {
        self.eval_points.len()
    }

    pub fn eval_points(&self) -> &[u32] {
        &self.eval_points
    }

    /// Number of messages `p^r`, saturating at `u128::MAX`.
    pub fn message_count(&self) -> u128 {
        (self.field.order() as u128)
            .checked_pow(self.message_length as u32)
            .unwrap_or(u128::MAX)
    }

    /// The guaranteed relative distance `1 - r/m`. When `r = m` that bound
    /// is vacuous and the trivial bound `1/m` of an injective code is used.
    pub fn declared_distance(&self) -> Rational {
        let r = self.message_length as u128;
        let m = self.block_length() as u128;
        Rational::new((m - r).max(1), m)
    }

    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>, CodeError> {
        if message.len() != self.message_length {
            return Err(CodeError::MessageLength {
                expected: self.message_length,
                found: message.len(),
            });
        }
        for &symbol in message {
            self.field.check(symbol as u64)?;
        }
        let f = &self.field;
        Ok(self
            .eval_points
            .iter()
            .map(|&x| {
                message
                    .iter()
                    .rev()
                    .fold(0, |acc, &coefficient| f.add(f.mul(acc, x), coefficient))
            })
            .collect())
    }
}

fn check_lengths(field: &PrimeField, r: usize, m: usize) -> Result<(), CodeError> {
    if r == 0 || r > m || m > field.order() as usize {
        return Err(CodeError::InvalidLengths {
            r,
            m,
            p: field.order(),
        });
    }
    Ok(())
}

/// Encodes `message` with the RS code described by `spec`.
pub fn rs_encode(spec: &CodeSpec, message: &[u32]) -> Result<Vec<u32>, CodeError> {
    spec.encode(message)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct evaluation of `Σ a_i x^{i-1}`, no Horner.
    fn evaluate(p: u64, message: &[u32], x: u32) -> u32 {
        let mut sum = 0u64;
        for (i, &a) in message.iter().enumerate() {
            let mut power = 1u64;
            for _ in 0..i {
                power = power * x as u64 % p;
            }
            sum = (sum + a as u64 * power) % p;
        }
        sum as u32
    }

    #[test]
    fn frozen_example_gf5() {
        let spec = CodeSpec::reed_solomon(5, 2, 4).unwrap();
        let oracle: Vec<u32> = (0..4).map(|x| evaluate(5, &[1, 2], x)).collect();
        assert_eq!(oracle, vec![1, 3, 0, 2]);
        assert_eq!(rs_encode(&spec, &[1, 2]).unwrap(), vec![1, 3, 0, 2]);
    }

    #[test]
    fn zero_message_and_constant_message() {
        let spec = CodeSpec::reed_solomon(7, 3, 6).unwrap();
        assert_eq!(spec.encode(&[0, 0, 0]).unwrap(), vec![0; 6]);
        let constant = CodeSpec::reed_solomon(7, 1, 5).unwrap();
        assert_eq!(constant.encode(&[4]).unwrap(), vec![4; 5]);
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(
            CodeSpec::reed_solomon(5, 2, 6),
            Err(CodeError::InvalidLengths { r: 2, m: 6, p: 5 })
        );
        assert!(CodeSpec::reed_solomon(5, 3, 2).is_err());
        assert!(CodeSpec::reed_solomon(4, 1, 2).is_err());
        let field = PrimeField::new(5).unwrap();
        assert_eq!(
            CodeSpec::with_eval_points(field, 1, vec![1, 1]),
            Err(CodeError::RepeatedEvalPoint(1))
        );
        let spec = CodeSpec::reed_solomon(5, 2, 4).unwrap();
        assert_eq!(
            spec.encode(&[1]),
            Err(CodeError::MessageLength { expected: 2, found: 1 })
        );
        assert!(spec.encode(&[1, 5]).is_err());
    }

    #[test]
    fn declared_distance_is_one_minus_rate() {
        assert_eq!(
            CodeSpec::reed_solomon(5, 2, 4).unwrap().declared_distance(),
            Rational::new(1, 2)
        );
        assert_eq!(
            CodeSpec::reed_solomon(5, 3, 3).unwrap().declared_distance(),
            Rational::new(1, 3)
        );
    }

    #[test]
    fn encoding_is_injective() {
        for (p, r, m) in [(3u32, 2usize, 3usize), (5, 2, 4), (7, 3, 6), (11, 2, 8), (13, 3, 5), (5, 4, 5)] {
            let spec = CodeSpec::reed_solomon(p, r, m).unwrap();
            let mut seen = HashSet::new();
            let total = (p as usize).pow(r as u32);
            for index in 0..total {
                let mut message = vec![0u32; r];
                let mut rest = index;
                for slot in message.iter_mut().rev() {
                    *slot = (rest % p as usize) as u32;
                    rest /= p as usize;
                }
                assert!(seen.insert(spec.encode(&message).unwrap()));
            }
            assert_eq!(seen.len(), total);
        }
    }

    proptest! {
        #[test]
        fn encoding_is_linear(
            spec in (1usize..5).prop_flat_map(|r| (Just(r), r..8usize)).prop_map(|(r, m)| CodeSpec::reed_solomon(11, r, m).unwrap()),
            seed_x in prop::collection::vec(0u32..11, 5),
            seed_y in prop::collection::vec(0u32..11, 5),
        ) {
            let r = spec.message_length();
            let x = &seed_x[..r];
            let y = &seed_y[..r];
            let sum: Vec<u32> = x.iter().zip(y).map(|(a, b)| (a + b) % 11).collect();
            let lhs: Vec<u32> = spec.encode(x).unwrap().iter()
                .zip(spec.encode(y).unwrap())
                .map(|(a, b)| (a + b) % 11)
                .collect();
            prop_assert_eq!(lhs, spec.encode(&sum).unwrap());
        }

        #[test]
        fn encoding_matches_direct_evaluation(message in prop::collection::vec(0u32..13, 1..5)) {
            let spec = CodeSpec::reed_solomon(13, message.len(), 13).unwrap();
            let direct: Vec<u32> = (0..13).map(|x| evaluate(13, &message, x)).collect();
            prop_assert_eq!(spec.encode(&message).unwrap(), direct);
        }
    }
}

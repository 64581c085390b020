use std::collections::HashMap;

use super::{CodeError, CodeSpec};
use crate::limits::Limits;
use crate::math::{format_rational, Rational};
use num_traits::{One, Zero};

/// A fully materialized code: every codeword, listed in lexicographic order
/// of its message (first message symbol most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    alphabet: u64,
    message_length: usize,
    block_length: usize,
    codewords: Vec<Vec<u32>>,
    declared_distance: Rational,
}

impl Codebook {
    /// Validates an explicit codeword list. `codewords[i]` is the encoding
    /// of the `i`-th message in lexicographic order.
    pub fn from_codewords(
        alphabet: u64,
        message_length: usize,
        codewords: Vec<Vec<u32>>,
        declared_distance: Rational,
    ) -> Result<Self, CodeError> {
        let expected = (alphabet as u128)
            .checked_pow(message_length as u32)
            .unwrap_or(u128::MAX);
        if codewords.len() as u128 != expected {
            return Err(CodeError::CodewordCount {
                expected,
                found: codewords.len(),
            });
        }
        if declared_distance.is_zero() || declared_distance > Rational::one() {
            return Err(CodeError::InvalidDistance(format_rational(&declared_distance)));
        }
        let block_length = codewords.first().map_or(0, Vec::len);
        let mut seen: HashMap<&[u32], usize> = HashMap::with_capacity(codewords.len());
        for (index, word) in codewords.iter().enumerate() {
            if word.len() != block_length {
                return Err(CodeError::CodewordLength {
                    index,
                    expected: block_length,
                    found: word.len(),
                });
            }
            if let Some(&symbol) = word.iter().find(|&&s| s as u64 >= alphabet) {
                return Err(CodeError::SymbolOutOfRange { symbol, alphabet });
            }
            if let Some(first) = seen.insert(word.as_slice(), index) {
                return Err(CodeError::RepeatedCodeword {
                    first,
                    second: index,
                });
            }
        }
        Ok(Codebook {
            alphabet,
            message_length,
            block_length,
            codewords,
            declared_distance,
        })
    }

    /// Materializes `encoder` over every message in `alphabet^message_length`.
    pub fn from_encoder<F>(
        alphabet: u64,
        message_length: usize,
        declared_distance: Rational,
        limits: &Limits,
        mut encoder: F,
    ) -> Result<Self, CodeError>
    where
        F: FnMut(&[u32]) -> Result<Vec<u32>, CodeError>,
    {
        let count = (alphabet as u128)
            .checked_pow(message_length as u32)
            .unwrap_or(u128::MAX);
        if count > limits.max_codewords as u128 {
            return Err(CodeError::BudgetExceeded {
                count,
                limit: limits.max_codewords,
            });
        }
        let mut codewords = Vec::with_capacity(count as usize);
        let mut message = vec![0u32; message_length];
        for _ in 0..count {
            codewords.push(encoder(&message)?);
            // odometer increment, last symbol fastest
            for slot in message.iter_mut().rev() {
                *slot += 1;
                if (*slot as u64) < alphabet {
                    break;
                }
                *slot = 0;
            }
        }
        Self::from_codewords(alphabet, message_length, codewords, declared_distance)
    }

    /// The `m`-fold repetition code over an alphabet of any size.
    pub fn repetition(alphabet: u64, block_length: usize, limits: &Limits) -> Result<Self, CodeError> {
        Self::from_encoder(alphabet, 1, Rational::one(), limits, |message| {
            Ok(vec![message[0]; block_length])
        })
    }

    /// The concatenated code `outer ∘ inner` with `inner` over `Σ' = Σ^r`,
    /// declared distance `δ_out · δ_in`.
    pub fn concatenate(outer: &CodeSpec, inner: &Codebook, limits: &Limits) -> Result<Self, CodeError> {
        check_alphabets(outer, inner)?;
        let message_length = inner.message_length * outer.message_length();
        let declared = outer.declared_distance() * inner.declared_distance;
        Self::from_encoder(
            outer.field().order() as u64,
            message_length,
            declared,
            limits,
            |message| concat_encode(outer, inner, message),
        )
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn message_length(&self) -> usize {
        self.message_length
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Vec<u32>] {
        &self.codewords
    }

    pub fn codeword(&self, index: usize) -> &[u32] {
        &self.codewords[index]
    }

    pub fn declared_distance(&self) -> Rational {
        self.declared_distance
    }

    /// Lexicographic index of `message`.
    pub fn message_index(&self, message: &[u32]) -> Result<usize, CodeError> {
        if message.len() != self.message_length {
            return Err(CodeError::MessageLength {
                expected: self.message_length,
                found: message.len(),
            });
        }
        let mut index = 0u128;
        for &symbol in message {
            if symbol as u64 >= self.alphabet {
                return Err(CodeError::SymbolOutOfRange {
                    symbol,
                    alphabet: self.alphabet,
                });
            }
            index = index * self.alphabet as u128 + symbol as u128;
        }
        Ok(index as usize)
    }

    pub fn encode(&self, message: &[u32]) -> Result<&[u32], CodeError> {
        Ok(&self.codewords[self.message_index(message)?])
    }
}

fn check_alphabets(outer: &CodeSpec, inner: &Codebook) -> Result<(), CodeError> {
    let expected = (outer.field().order() as u64)
        .checked_pow(outer.message_length() as u32)
        .unwrap_or(u64::MAX);
    if inner.alphabet() != expected {
        return Err(CodeError::AlphabetMismatch {
            inner: inner.alphabet(),
            expected,
        });
    }
    Ok(())
}

/// Materializes every codeword of an RS code, in lexicographic message order,
/// with declared distance `1 - r/m`.
pub fn enumerate_codebook(spec: &CodeSpec, limits: &Limits) -> Result<Codebook, CodeError> {
    Codebook::from_encoder(
        spec.field().order() as u64,
        spec.message_length(),
        spec.declared_distance(),
        limits,
        |message| spec.encode(message),
    )
}

/// Encodes with `outer ∘ inner`: the `R·r` message symbols over `Σ` are read
/// as `R` symbols of `Σ' = Σ^r` (big-endian base `|Σ|`), encoded by `inner`
/// into `M` symbols of `Σ'`, and each of those is re-expanded into `r`
/// symbols and encoded by `outer`. Output length is `M·m`.
pub fn concat_encode(outer: &CodeSpec, inner: &Codebook, message: &[u32]) -> Result<Vec<u32>, CodeError> {
    check_alphabets(outer, inner)?;
    let p = outer.field().order();
    let r = outer.message_length();
    let expected = inner.message_length() * r;
    if message.len() != expected {
        return Err(CodeError::MessageLength {
            expected,
            found: message.len(),
        });
    }
    let mut inner_message = Vec::with_capacity(inner.message_length());
    for block in message.chunks(r) {
        let mut symbol = 0u64;
        for &digit in block {
            outer.field().check(digit as u64)?;
            symbol = symbol * p as u64 + digit as u64;
        }
        inner_message.push(symbol as u32);
    }
    let inner_word = inner.encode(&inner_message)?;
    let mut output = Vec::with_capacity(inner_word.len() * outer.block_length());
    let mut digits = vec![0u32; r];
    for &symbol in inner_word {
        let mut rest = symbol;
        for digit in digits.iter_mut().rev() {
            *digit = rest % p;
            rest /= p;
        }
        output.extend(outer.encode(&digits)?);
    }
    Ok(output)
}

/// Exact minimum relative Hamming distance over all pairs of codewords.
/// A codebook with fewer than two codewords has distance 1.
pub fn min_relative_distance(book: &Codebook, limits: &Limits) -> Result<Rational, CodeError> {
    if book.len() as u64 > limits.max_codewords {
        return Err(CodeError::BudgetExceeded {
            count: book.len() as u128,
            limit: limits.max_codewords,
        });
    }
    let m = book.block_length();
    if book.len() < 2 || m == 0 {
        return Ok(Rational::one());
    }
    let words = book.codewords();
    let mut best = m;
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            let differ = x.iter().zip(y).filter(|(a, b)| a != b).count();
            best = best.min(differ);
        }
    }
    Ok(Rational::new(best as u128, m as u128))
}

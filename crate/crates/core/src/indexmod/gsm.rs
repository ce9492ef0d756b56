//! Generalized spatial modulation: `Na` of `Nt` transmit antennas are active
//! per symbol period and the chosen antenna set carries index bits.
//!
//! Per symbol period the bit layout is
//! `[combination index: floor(log2 C(Nt, Na)) bits][APM label for each active antenna]`,
//! MSB first, with APM labels in the order the combination lists its antennas.
//! Antenna indices are zero-based.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::{self, exact_log2};
use crate::error::{Error, Result};
use crate::modem::Constellation;

/// `C(n, k)` (exact for the antenna counts used here).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn floor_log2(x: u128) -> usize {
    debug_assert!(x > 0);
    (127 - x.leading_zeros()) as usize
}

fn check_antennas(nt: usize, na: usize) -> Result<()> {
    if na == 0 || na > nt {
        return Err(Error::InvalidIndexConfig(format!(
            "need 1 <= Na <= Nt, got Nt={nt} Na={na}"
        )));
    }
    Ok(())
}

/// Index bits per symbol period, `floor(log2 C(Nt, Na))`.
pub fn gsm_index_bits(nt: usize, na: usize) -> Result<usize> {
    check_antennas(nt, na)?;
    Ok(floor_log2(binomial(nt, na)))
}

/// `Na log2 M + floor(log2 C(Nt, Na))`.
pub fn gsm_bits_per_symbol(nt: usize, na: usize, m: usize) -> Result<usize> {
    let index = gsm_index_bits(nt, na)?;
    let apm = exact_log2(m).ok_or_else(|| {
        Error::InvalidIndexConfig(format!("modulation order {m} is not a power of two"))
    })?;
    Ok(na * apm + index)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinationStrategy {
    /// First `2^floor(log2 C(Nt, Na))` subsets in lexicographic order.
    Lexicographic,
    /// Explicit, ordered list of antenna subsets.
    Custom(Vec<Vec<usize>>),
}

/// Ordered list of legal antenna subsets.
pub fn gsm_legal_combinations(
    nt: usize,
    na: usize,
    strategy: &CombinationStrategy,
) -> Result<Vec<Vec<usize>>> {
    let count = 1usize << gsm_index_bits(nt, na)?;
    match strategy {
        CombinationStrategy::Lexicographic => {
            let mut out = Vec::with_capacity(count);
            let mut current: Vec<usize> = (0..na).collect();
            loop {
                out.push(current.clone());
                if out.len() == count {
                    break;
                }
                // Advance to the next k-subset in lexicographic order.
                let mut i = na;
                while i > 0 && current[i - 1] == nt - na + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                current[i - 1] += 1;
                for j in i..na {
                    current[j] = current[j - 1] + 1;
                }
            }
            Ok(out)
        }
        CombinationStrategy::Custom(list) => {
            if list.len() != count {
                return Err(Error::InvalidIndexConfig(format!(
                    "combination list has {} entries, need {count}",
                    list.len()
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for subset in list {
                let mut sorted = subset.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != na || subset.len() != na {
                    return Err(Error::InvalidIndexConfig(format!(
                        "subset {subset:?} does not have {na} distinct antennas"
                    )));
                }
                if sorted.iter().any(|&a| a >= nt) {
                    return Err(Error::InvalidIndexConfig(format!(
                        "subset {subset:?} references an antenna >= {nt}"
                    )));
                }
                if !seen.insert(sorted) {
                    return Err(Error::InvalidIndexConfig(format!(
                        "duplicate subset {subset:?}"
                    )));
                }
            }
            Ok(list.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsmConfig {
    nt: usize,
    na: usize,
    constellation: Constellation,
    combinations: Vec<Vec<usize>>,
    index_bits: usize,
}

/// One GSM symbol period: which combination is active and what it sends.
#[derive(Debug, Clone, PartialEq)]
pub struct GsmSymbol {
    pub combination: usize,
    pub labels: Vec<usize>,
    pub symbols: Vec<Complex64>,
}

impl GsmConfig {
    pub fn new(
        nt: usize,
        na: usize,
        constellation: Constellation,
        strategy: &CombinationStrategy,
    ) -> Result<Self> {
        let combinations = gsm_legal_combinations(nt, na, strategy)?;
        Ok(Self {
            index_bits: gsm_index_bits(nt, na)?,
            nt,
            na,
            constellation,
            combinations,
        })
    }

    pub fn lexicographic(nt: usize, na: usize, constellation: Constellation) -> Result<Self> {
        Self::new(nt, na, constellation, &CombinationStrategy::Lexicographic)
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn na(&self) -> usize {
        self.na
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn combinations(&self) -> &[Vec<usize>] {
        &self.combinations
    }

    pub fn index_bits(&self) -> usize {
        self.index_bits
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.index_bits + self.na * self.constellation.bits_per_symbol()
    }

    /// Decodes one symbol period's bit pattern (as an integer) into its
    /// combination and labels.
    pub fn symbol_from_pattern(&self, pattern: usize) -> GsmSymbol {
        let k = self.constellation.bits_per_symbol();
        let apm_bits = self.na * k;
        let combination = pattern >> apm_bits;
        let labels: Vec<usize> = (0..self.na)
            .map(|a| (pattern >> ((self.na - 1 - a) * k)) & ((1 << k) - 1))
            .collect();
        let symbols = labels
            .iter()
            .map(|&l| self.constellation.point(l))
            .collect();
        GsmSymbol {
            combination,
            labels,
            symbols,
        }
    }

    /// Bit pattern (integer) of a combination and label set.
    pub fn pattern_of(&self, combination: usize, labels: &[usize]) -> usize {
        let k = self.constellation.bits_per_symbol();
        labels.iter().fold(combination, |acc, &l| (acc << k) | l)
    }

    /// Full `Nt`-entry transmit vector for a symbol.
    pub fn transmit_vector(&self, sym: &GsmSymbol) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.nt];
        for (&ant, &s) in self.combinations[sym.combination].iter().zip(&sym.symbols) {
            x[ant] = s;
        }
        x
    }
}

pub fn gsm_map(cfg: &GsmConfig, bits: &[u8]) -> Result<Vec<GsmSymbol>> {
    let b = cfg.bits_per_symbol();
    if !bits.len().is_multiple_of(b) {
        return Err(Error::RaggedBits {
            len: bits.len(),
            per_symbol: b,
        });
    }
    Ok(bits
        .chunks(b)
        .map(|c| cfg.symbol_from_pattern(bits::to_index(c)))
        .collect())
}

/// `Nt x K` transmit matrix; inactive antennas carry exact zeros.
pub fn gsm_frame(cfg: &GsmConfig, bits: &[u8]) -> Result<DMatrix<Complex64>> {
    let symbols = gsm_map(cfg, bits)?;
    let mut x = DMatrix::zeros(cfg.nt, symbols.len());
    for (k, sym) in symbols.iter().enumerate() {
        for (&ant, &s) in cfg.combinations[sym.combination].iter().zip(&sym.symbols) {
            x[(ant, k)] = s;
        }
    }
    Ok(x)
}

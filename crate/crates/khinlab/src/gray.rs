//! Deterministic chunked Gray-code enumeration.
//!
//! A walk over all 2^B sign configurations visits them in Gray order, so
//! consecutive configurations differ in exactly one sign and engines can
//! update their state incrementally. For parallel runs the index space is
//! split on the top bits into a chunk count that depends only on B, each
//! chunk is processed start-to-finish by one worker, and the per-chunk
//! results are folded in chunk order. The output is therefore bit-identical
//! for every thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use crate::error::{Error, Result};

/// Default ceiling on the number of sign bits an enumeration may use.
pub const DEFAULT_BIT_BUDGET: u32 = 26;

const MAX_BIT_BUDGET: u32 = 62;
const SPLIT_THRESHOLD: u32 = 16;
const MAX_SPLIT_BITS: u32 = 8;

/// Controls for the sign-hypercube enumeration engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Enumerations needing more than this many sign bits are refused.
    pub bit_budget: u32,
    /// Worker thread count; 0 selects the available parallelism.
    pub threads: usize,
}

impl Default for EnumConfig {
    fn default() -> EnumConfig {
        EnumConfig {
            bit_budget: DEFAULT_BIT_BUDGET,
            threads: 0,
        }
    }
}

impl EnumConfig {
    pub fn with_bit_budget(bit_budget: u32) -> EnumConfig {
        EnumConfig {
            bit_budget,
            ..EnumConfig::default()
        }
    }

    pub(crate) fn check_budget(&self, required_bits: u64) -> Result<u32> {
        if self.bit_budget == 0 || self.bit_budget > MAX_BIT_BUDGET {
            return Err(Error::Domain(format!(
                "bit budget must be in [1, {MAX_BIT_BUDGET}], got {}",
                self.bit_budget
            )));
        }
        if required_bits > self.bit_budget as u64 {
            return Err(Error::BudgetExceeded {
                required: required_bits,
                budget: self.bit_budget,
            });
        }
        Ok(required_bits as u32)
    }
}

/// Gray code of an enumeration index.
#[inline]
pub(crate) fn gray_word(index: u64) -> u64 {
    index ^ (index >> 1)
}

/// Bit position that flips when stepping from local index `step - 1` to
/// `step` within a chunk. Chunk bases are multiples of the chunk length,
/// so the local step determines the flip.
#[inline]
pub(crate) fn flip_position(step: u64) -> u32 {
    debug_assert!(step > 0);
    step.trailing_zeros()
}

/// Maps a global sign-bit position to (axis, coordinate) under the
/// canonical concatenation of axes.
pub(crate) fn bit_axis_map(shape: &[usize]) -> Vec<(usize, usize)> {
    let mut map = Vec::with_capacity(shape.iter().sum());
    for (axis, &n) in shape.iter().enumerate() {
        for coord in 0..n {
            map.push((axis, coord));
        }
    }
    map
}

fn split_bits(total_bits: u32) -> u32 {
    if total_bits <= SPLIT_THRESHOLD {
        0
    } else {
        MAX_SPLIT_BITS.min(total_bits - 12)
    }
}

fn effective_threads(requested: usize, chunks: usize) -> usize {
    let t = if requested == 0 {
        thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        requested
    };
    t.min(chunks).max(1)
}

/// Runs `work(base, len)` over every chunk of the 2^total_bits index space
/// and returns the per-chunk results in chunk order. The chunk layout is a
/// function of `total_bits` alone, never of the thread count.
pub(crate) fn run_chunked<R, F>(total_bits: u32, threads: usize, work: &F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync,
{
    debug_assert!(total_bits <= MAX_BIT_BUDGET);
    let k = split_bits(total_bits);
    let chunk_len = 1u64 << (total_bits - k);
    let chunks = 1usize << k;
    let threads = effective_threads(threads, chunks);
    if threads <= 1 {
        return (0..chunks)
            .map(|c| work(c as u64 * chunk_len, chunk_len))
            .collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, R)>();
    let mut results: Vec<Option<R>> = (0..chunks).map(|_| None).collect();
    thread::scope(|scope| {
        for _ in 0..threads {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let c = next.fetch_add(1, Ordering::Relaxed);
                if c >= chunks {
                    break;
                }
                let r = work(c as u64 * chunk_len, chunk_len);
                if tx.send((c, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (c, r) in rx {
            results[c] = Some(r);
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every chunk reports a result"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_check_classifies() {
        let cfg = EnumConfig::default();
        assert_eq!(cfg.check_budget(26).unwrap(), 26);
        match cfg.check_budget(27) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!((required, budget), (27, 26));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(EnumConfig::with_bit_budget(63).check_budget(1).is_err());
        assert!(EnumConfig::with_bit_budget(0).check_budget(1).is_err());
    }

    #[test]
    fn split_depends_only_on_total_bits() {
        assert_eq!(split_bits(1), 0);
        assert_eq!(split_bits(16), 0);
        assert_eq!(split_bits(17), 5);
        assert_eq!(split_bits(20), 8);
        assert_eq!(split_bits(26), 8);
        assert_eq!(split_bits(62), 8);
    }

    #[test]
    fn gray_walk_visits_every_word_once() {
        let bits = 10u32;
        let mut seen = vec![false; 1 << bits];
        for idx in 0..(1u64 << bits) {
            let w = gray_word(idx) as usize;
            assert!(!seen[w]);
            seen[w] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn flip_positions_reproduce_gray_words() {
        let bits = 12u32;
        let mut word = 0u64;
        for step in 1..(1u64 << bits) {
            word ^= 1 << flip_position(step);
            assert_eq!(word, gray_word(step));
        }
    }

    #[test]
    fn bit_axis_map_concatenates_axes() {
        let map = bit_axis_map(&[2, 3]);
        assert_eq!(
            map,
            vec![(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
        );
    }

    #[test]
    fn chunked_run_is_thread_count_invariant() {
        let total_bits = 18u32;
        // A wobbly per-index value whose naive sum depends on order.
        let work = |base: u64, len: u64| -> f64 {
            let mut acc = 0.0f64;
            for s in 0..len {
                let w = gray_word(base + s);
                acc += ((w as f64) * 1e-3).sin();
            }
            acc
        };
        let fold = |parts: Vec<f64>| parts.iter().fold(0.0f64, |a, &b| a + b);
        let serial = fold(run_chunked(total_bits, 1, &work));
        for threads in [2, 4, 8] {
            let parallel = fold(run_chunked(total_bits, threads, &work));
            assert_eq!(serial.to_bits(), parallel.to_bits());
        }
    }

    #[test]
    fn chunked_run_covers_index_space() {
        for bits in [0u32, 1, 5, 17] {
            let parts = run_chunked(bits, 3, &|base, len| (base, len));
            let mut expect_base = 0u64;
            for (base, len) in parts {
                assert_eq!(base, expect_base);
                expect_base += len;
            }
            assert_eq!(expect_base, 1u64 << bits);
        }
    }
}
